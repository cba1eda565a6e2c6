//! Exterior algebra on grid forms: wedge, exterior derivative, interior
//! product, the covariant derivative of a connection, torsion, curvature and
//! the Levi-Civita dualizations between 2-forms and tensors.
//!
//! Component convention: a p-form is `α = Σ_{a<b<…} α_{ab…} dx^a ∧ dx^b ∧ …`,
//! so `(α ∧ β)_I = Σ sgn(J, K) α_J β_K` over the shuffles splitting the
//! increasing multi-index `I` into `J` (size p) and `K` (size q).

mod covariant;
mod dual;

pub use covariant::{
    bianchi_first, bianchi_second, covariant_exterior_derivative, curvature, torsion, Coframe,
    Connection,
};
pub use dual::{
    axial_dual, axial_inverse, dualize_stress, frame_to_so3, levi_civita, so3_to_frame,
    undualize_stress,
};

use crate::error::{Error, Result};
use crate::grid_fields::{
    add_partial, coordinate_slot, coordinate_slots, FormField, Grid, ValueKind, VectorField,
};

/// `out[I] += factor * (a ∧ b)_I` for scalar component lists of degrees `p`, `q`.
pub(crate) fn wedge_acc(
    p: usize,
    a: &[&[f64]],
    q: usize,
    b: &[&[f64]],
    factor: f64,
    out: &mut [&mut [f64]],
) {
    let k = p + q;
    debug_assert!(k <= 3);
    for (out_slot, idx) in coordinate_slots(k).iter().enumerate() {
        // every subset of positions of size p is one shuffle
        for mask in 0u32..(1 << k) {
            if mask.count_ones() as usize != p {
                continue;
            }
            let mut ordered = [0usize; 3];
            let (mut left, mut right) = (Vec::with_capacity(p), Vec::with_capacity(q));
            for (pos, &i) in idx.iter().enumerate() {
                if mask & (1 << pos) != 0 {
                    left.push(i);
                } else {
                    right.push(i);
                }
            }
            ordered[..p].copy_from_slice(&left);
            ordered[p..k].copy_from_slice(&right);
            let (sign, _) = coordinate_slot(&ordered[..k]).expect("distinct indices");
            let (_, ja) = coordinate_slot(&left).expect("sorted subset");
            let (_, kb) = coordinate_slot(&right).expect("sorted subset");
            let c = factor * sign;
            let (av, bv) = (a[ja], b[kb]);
            for ((o, x), y) in out[out_slot].iter_mut().zip(av).zip(bv) {
                *o += c * x * y;
            }
        }
    }
}

/// `out += factor * d a` for the scalar components of a degree-`k` form.
pub(crate) fn d_acc(grid: &Grid, k: usize, a: &[&[f64]], factor: f64, out: &mut [&mut [f64]]) {
    for (out_slot, idx) in coordinate_slots(k + 1).iter().enumerate() {
        for m in 0..=k {
            let rest: Vec<usize> = idx
                .iter()
                .enumerate()
                .filter(|&(pos, _)| pos != m)
                .map(|(_, &i)| i)
                .collect();
            let (_, slot) = coordinate_slot(&rest).expect("sorted subset");
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            add_partial(grid, a[slot], idx[m], factor * sign, out[out_slot]);
        }
    }
}

/// `out += i_u a` for the scalar components of a degree-`k` form, `k >= 1`.
pub(crate) fn interior_acc(u: &VectorField, k: usize, a: &[&[f64]], out: &mut [&mut [f64]]) {
    for (out_slot, idx) in coordinate_slots(k - 1).iter().enumerate() {
        for b in 0..3 {
            let mut full = vec![b];
            full.extend_from_slice(idx);
            if let Some((sign, slot)) = coordinate_slot(&full) {
                for ((o, ub), av) in out[out_slot].iter_mut().zip(u.component(b)).zip(a[slot]) {
                    *o += sign * ub * av;
                }
            }
        }
    }
}

/// Pointwise exterior product.
///
/// At least one factor must be scalar valued; the result carries the value
/// kind of the other factor. Products between two frame or so(3) valued forms
/// need an index contraction and are assembled by the callers that know it
/// (torsion, curvature, the balance residuals).
pub fn wedge(alpha: &FormField, beta: &FormField) -> Result<FormField> {
    if alpha.grid() != beta.grid() {
        return Err(Error::GridMismatch);
    }
    let (p, q) = (alpha.degree(), beta.degree());
    if p + q > 3 {
        return Err(Error::DegreeOverflow(p + q));
    }
    let kind = match (alpha.kind(), beta.kind()) {
        (ValueKind::Scalar, k) | (k, ValueKind::Scalar) => k,
        (k, _) => {
            return Err(Error::InvalidValueKind {
                op: "wedge",
                kind: k.name(),
            })
        }
    };
    let mut out = FormField::zeros(*alpha.grid(), p + q, kind)?;
    for v in 0..kind.slots() {
        let av = if alpha.kind() == ValueKind::Scalar { 0 } else { v };
        let bv = if beta.kind() == ValueKind::Scalar { 0 } else { v };
        let a = alpha.value_components(av);
        let b = beta.value_components(bv);
        wedge_acc(p, &a, q, &b, 1.0, &mut out.value_components_mut(v));
    }
    Ok(out)
}

/// Exterior derivative built from the central stencil, slot by slot.
pub fn exterior_derivative(alpha: &FormField) -> Result<FormField> {
    let k = alpha.degree();
    if k >= 3 {
        return Err(Error::InvalidDegree {
            op: "exterior_derivative",
            degree: k,
        });
    }
    let mut out = FormField::zeros(*alpha.grid(), k + 1, alpha.kind())?;
    for v in 0..alpha.kind().slots() {
        d_acc(
            alpha.grid(),
            k,
            &alpha.value_components(v),
            1.0,
            &mut out.value_components_mut(v),
        );
    }
    Ok(out)
}

/// Contraction of the first form slot with a vector field, `(i_u α)_{a…} = u^b α_{b a…}`.
pub fn interior_product(u: &VectorField, alpha: &FormField) -> Result<FormField> {
    let k = alpha.degree();
    if k == 0 {
        return Err(Error::InvalidDegree {
            op: "interior_product",
            degree: 0,
        });
    }
    if u.grid() != alpha.grid() {
        return Err(Error::GridMismatch);
    }
    let mut out = FormField::zeros(*alpha.grid(), k - 1, alpha.kind())?;
    for v in 0..alpha.kind().slots() {
        interior_acc(u, k, &alpha.value_components(v), &mut out.value_components_mut(v));
    }
    Ok(out)
}
