use crate::error::{Error, Result};
use crate::exterior::{
    covariant_exterior_derivative, exterior_derivative, interior_product, torsion, Coframe,
    Connection,
};
use crate::grid_fields::{so3_slot, FormField, VectorField};

/// The two evaluations of `L_u e` and the pieces of the decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct LieDerivative {
    /// `(Du)^i - φ^i_j e^j`.
    pub full: FormField,
    /// `(Du)^i = d(i_u e^i) + ω^i_j (i_u e^j)`.
    pub translational: FormField,
    /// `φ^i_j = i_u ω^i_j`, an so(3) valued 0-form.
    pub rotational: FormField,
    /// Cartan's formula `d(i_u e) + i_u(de)`.
    pub cartan: FormField,
}

/// Lie derivative of the coframe along `u` for a torsion-free pair.
///
/// The decomposition only holds when `de = -ω∧e`, so `max|T| > torsion_tol`
/// is rejected with [`Error::TorsionNotSmall`].
pub fn lie_derivative_coframe(
    u: &VectorField,
    e: &Coframe,
    omega: &Connection,
    torsion_tol: f64,
) -> Result<LieDerivative> {
    let norm = torsion(e, omega)?.max_abs();
    if !(norm <= torsion_tol) {
        return Err(Error::TorsionNotSmall {
            norm,
            tol: torsion_tol,
        });
    }
    let ue = interior_product(u, e.field())?;
    let translational = covariant_exterior_derivative(&ue, omega)?;
    let rotational = omega.contract(u)?;

    let mut full = translational.clone();
    for i in 0..3 {
        for j in 0..3 {
            if let Some((s, slot)) = so3_slot(i, j) {
                let phi = rotational.component(slot, 0);
                for a in 0..3 {
                    let ej = e.field().component(j, a);
                    for ((o, f), x) in full.component_mut(i, a).iter_mut().zip(phi).zip(ej) {
                        *o -= s * f * x;
                    }
                }
            }
        }
    }

    let mut cartan = exterior_derivative(&ue)?;
    let de = exterior_derivative(e.field())?;
    cartan.axpy(1.0, &interior_product(u, &de)?)?;

    Ok(LieDerivative {
        full,
        translational,
        rotational,
        cartan,
    })
}
