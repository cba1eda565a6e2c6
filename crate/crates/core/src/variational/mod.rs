//! Conjugate stress and momentum forms of the quadratic micropolar
//! Lagrangian, the force and moment balance residuals in form language, the
//! discrete action with its functional-gradient check, and Noether totals.
//!
//! The conjugates are taken from `-L`, so with `L = T - W`:
//!
//! * `Σ_i` is the 2-form dual of the force stress `σ_i·`;
//! * `M^i_j` is the 2-form dual of the couple stress, `(M^i_j)_ab = ε_abc ε_jir μ_rc`;
//! * `P_i = -ρ u̇_i dV` and `Q̂^i_j = ε_ijr J φ̇_r dV`.
//!
//! Then `DΣ_i + ∂_t P_i` has the `dV` coefficient `∂_j σ_ij - ρ ü_i`, and
//! reading an so(3) valued 3-form `X` through `½ ε_rij X_ji` turns the moment
//! residual into `∂_j μ_rj + ε_rij σ_ij - J φ̈_r`.

mod action;
mod noether;

pub use action::{
    discrete_action, functional_gradient_check, functional_gradient_check_with, slice_residuals,
    GradientEntry, GradientReport, ResidualVariant, Trajectory,
};
pub use noether::{
    linear_fit, noether_rotation_check, noether_translation_check, record_run, DriftReport,
    LinearFit, Record,
};

use crate::error::{Error, Result};
use crate::exterior::{
    covariant_exterior_derivative, frame_to_so3, so3_to_frame, undualize_stress, wedge_acc,
    Coframe, Connection,
};
use crate::grid_fields::{FormField, TensorField, ValueKind, VectorField, SO3_PAIRS};
use crate::kinematics::{linearized_strain, MicropolarState, StrainState};
use crate::mat3::Mat3;
use crate::solver::{constitutive, MaterialParams, Sources};

/// `L(γ, κ, u̇, φ̇) = ½ρ|u̇|² + ½J|φ̇|² - W(γ, κ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangianSpec {
    material: MaterialParams,
}

impl LagrangianSpec {
    pub fn new(material: MaterialParams) -> Result<Self> {
        material.validate()?;
        Ok(Self { material })
    }

    pub fn material(&self) -> &MaterialParams {
        &self.material
    }

    pub fn density(&self, strain: &Mat3, wryness: &Mat3, velocity: [f64; 3], spin: [f64; 3]) -> f64 {
        let sq = |v: [f64; 3]| v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        0.5 * self.material.rho * sq(velocity) + 0.5 * self.material.j * sq(spin)
            - self.material.energy_density(strain, wryness)
    }
}

/// `Σ_i`, `M^i_j`, `P_i` and `Q̂^i_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateForms {
    /// Frame-vector valued 2-form.
    pub stress: FormField,
    /// so(3) valued 2-form.
    pub couple: FormField,
    /// Frame-vector valued 3-form.
    pub momentum: FormField,
    /// so(3) valued 3-form.
    pub spin_momentum: FormField,
}

/// Frame-vector valued 3-form `v_i dV`.
pub fn frame_volume_form(v: &VectorField) -> FormField {
    let mut out = FormField::zeros(*v.grid(), 3, ValueKind::Frame).expect("degree 3");
    for i in 0..3 {
        out.component_mut(i, 0).copy_from_slice(v.component(i));
    }
    out
}

/// `dV` coefficients of a frame-vector valued 3-form.
pub fn frame_volume_coefficients(f: &FormField) -> Result<VectorField> {
    if f.degree() != 3 || f.kind() != ValueKind::Frame {
        return Err(Error::InvalidArgument(
            "expected a frame-vector valued 3-form".into(),
        ));
    }
    VectorField::from_data(*f.grid(), f.data().to_vec())
}

/// so(3) valued 3-form `X^i_j = ε_jir v_r dV`, the inverse of [`moment_axial`].
pub fn so3_volume_form(v: &VectorField) -> FormField {
    frame_to_so3(&frame_volume_form(&v.scaled(-1.0))).expect("frame kind")
}

/// Axial reading `r = ½ ε_rij X_ji` of the `dV` coefficients of an so(3)
/// valued 3-form; this is the pairing under which the moment residual reads
/// as the tensorial angular momentum balance.
pub fn moment_axial(x: &FormField) -> Result<VectorField> {
    if x.degree() != 3 || x.kind() != ValueKind::So3 {
        return Err(Error::InvalidArgument("expected an so(3) valued 3-form".into()));
    }
    let f = so3_to_frame(x)?;
    Ok(frame_volume_coefficients(&f)?.scaled(-1.0))
}

/// so(3) valued 2-form of a couple stress tensor `μ_rc` (frame index first).
pub fn couple_stress_form(mu: &TensorField) -> FormField {
    let dual = undualize_stress(mu);
    frame_to_so3(&dual).expect("frame kind").scaled(-1.0)
}

/// Conjugate forms of the linearized state.
pub fn conjugate_forms(l: &LagrangianSpec, state: &MicropolarState) -> ConjugateForms {
    conjugate_forms_from_strain(l, state, &linearized_strain(state))
}

fn conjugate_forms_from_strain(
    l: &LagrangianSpec,
    state: &MicropolarState,
    strain: &StrainState,
) -> ConjugateForms {
    let m = l.material();
    let s = constitutive(strain, m);
    ConjugateForms {
        stress: undualize_stress(&s.force),
        couple: couple_stress_form(&s.couple),
        momentum: frame_volume_form(&state.velocity.scaled(-m.rho)),
        spin_momentum: so3_volume_form(&state.spin.scaled(-m.j)),
    }
}

/// Momentum-rate forms `∂_t P + F` and `∂_t Q̂ + C` from accelerations, with the
/// body force `F = f dV` and the body couple `C` (axial reading `c`) folded in.
pub fn momentum_rates(
    m: &MaterialParams,
    accel: &VectorField,
    spin_accel: &VectorField,
    sources: &Sources,
) -> (FormField, FormField) {
    let mut p = accel.scaled(-m.rho);
    p.axpy(1.0, &sources.force);
    let mut q = spin_accel.scaled(-m.j);
    q.axpy(1.0, &sources.couple);
    (frame_volume_form(&p), so3_volume_form(&q))
}

/// `DΣ_i + ∂_t P_i` as a frame-vector valued 3-form.
pub fn force_balance_residual(
    cf: &ConjugateForms,
    omega: &Connection,
    momentum_rate: &FormField,
) -> Result<FormField> {
    let mut r = covariant_exterior_derivative(&cf.stress, omega)?;
    r.axpy(1.0, momentum_rate)?;
    Ok(r)
}

/// `DM^i_j + (e^i ∧ Σ_j - e^j ∧ Σ_i) + ∂_t Q̂^i_j` as an so(3) valued 3-form.
///
/// Storage keeps only `i < j`, so the result is skew by construction.
pub fn moment_balance_residual(
    cf: &ConjugateForms,
    e: &Coframe,
    omega: &Connection,
    spin_rate: &FormField,
) -> Result<FormField> {
    moment_residual_signed(cf, e, omega, spin_rate, 1.0)
}

pub(crate) fn moment_residual_signed(
    cf: &ConjugateForms,
    e: &Coframe,
    omega: &Connection,
    spin_rate: &FormField,
    coupling: f64,
) -> Result<FormField> {
    let mut r = covariant_exterior_derivative(&cf.couple, omega)?;
    let ef = e.field();
    for (v, &(i, j)) in SO3_PAIRS.iter().enumerate() {
        let mut out = r.value_components_mut(v);
        wedge_acc(1, &ef.value_components(i), 2, &cf.stress.value_components(j), coupling, &mut out);
        wedge_acc(1, &ef.value_components(j), 2, &cf.stress.value_components(i), -coupling, &mut out);
    }
    r.axpy(1.0, spin_rate)?;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{dualize_stress, levi_civita};
    use crate::grid_fields::Grid;
    use crate::random::{rng, SmoothVector};
    use crate::solver::{angular_momentum_residual, linear_momentum_residual};

    fn grid() -> Grid {
        Grid::new(8, 1.0).unwrap()
    }

    fn spec() -> LagrangianSpec {
        LagrangianSpec::new(MaterialParams::default()).unwrap()
    }

    #[test]
    fn zero_state_zero_forms() {
        let cf = conjugate_forms(&spec(), &MicropolarState::zeros(grid()));
        for f in [&cf.stress, &cf.couple, &cf.momentum, &cf.spin_momentum] {
            assert_eq!(f.max_abs(), 0.0);
        }
    }

    #[test]
    fn uniform_shear_stress_round_trips() {
        let g = grid();
        let mut st = MicropolarState::zeros(g);
        st.macro_gradient[0][1] = 0.2;
        let cf = conjugate_forms(&spec(), &st);
        let sigma = dualize_stress(&cf.stress).unwrap();
        let m = MaterialParams::default();
        let expected = m.force_stress(&{
            let mut x = [[0.0; 3]; 3];
            x[0][1] = 0.2;
            x
        });
        for i in 0..3 {
            for j in 0..3 {
                assert!(sigma.component(i, j).iter().all(|&v| (v - expected[i][j]).abs() <= 1e-15));
            }
        }
    }

    #[test]
    fn couple_form_matches_index_expansion() {
        let g = grid();
        let mu = TensorField::from_fn(g, |x| {
            std::array::from_fn(|r| std::array::from_fn(|c| (x[0] + 0.3 * r as f64 - 0.7 * c as f64).sin()))
        });
        let m = couple_stress_form(&mu);
        for p in [0, 77, 300] {
            for (i, j) in [(0, 1), (1, 0), (0, 2), (2, 1)] {
                for (a, b) in [(0, 1), (1, 2), (2, 0)] {
                    let mut oracle = 0.0;
                    for c in 0..3 {
                        for r in 0..3 {
                            oracle += levi_civita(a, b, c) * levi_civita(j, i, r) * mu.component(r, c)[p];
                        }
                    }
                    assert!((m.so3_value_at(i, j, &[a, b], p) - oracle).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn volume_forms_invert() {
        let g = grid();
        let v = VectorField::from_fn(g, |x| [x[0], -x[1], 0.5 * x[2]]);
        assert_eq!(moment_axial(&so3_volume_form(&v)).unwrap(), v);
        assert_eq!(frame_volume_coefficients(&frame_volume_form(&v)).unwrap(), v);
    }

    #[test]
    fn uniform_stress_force_residual_vanishes() {
        let g = grid();
        let mut st = MicropolarState::zeros(g);
        st.macro_gradient = [[0.1, 0.2, 0.0], [0.0, -0.3, 0.1], [0.4, 0.0, 0.2]];
        let cf = conjugate_forms(&spec(), &st);
        let zero = FormField::zeros(g, 3, ValueKind::Frame).unwrap();
        let r = force_balance_residual(&cf, &Connection::zero(g), &zero).unwrap();
        assert_eq!(r.max_abs(), 0.0);
    }

    #[test]
    fn symmetric_stress_has_no_moment() {
        let g = grid();
        let sigma = TensorField::uniform(g, [[1.0, 0.4, 0.2], [0.4, -0.5, 0.3], [0.2, 0.3, 2.0]]);
        let cf = ConjugateForms {
            stress: undualize_stress(&sigma),
            couple: FormField::zeros(g, 2, ValueKind::So3).unwrap(),
            momentum: FormField::zeros(g, 3, ValueKind::Frame).unwrap(),
            spin_momentum: FormField::zeros(g, 3, ValueKind::So3).unwrap(),
        };
        let zero = FormField::zeros(g, 3, ValueKind::So3).unwrap();
        let r = moment_balance_residual(&cf, &Coframe::identity(g), &Connection::zero(g), &zero).unwrap();
        assert!(r.max_abs() <= 1e-13);
    }

    #[test]
    fn antisymmetric_stress_moment_is_twice_s() {
        let g = grid();
        let s = 0.3;
        let sigma = TensorField::uniform(g, [[0.0, s, 0.0], [-s, 0.0, 0.0], [0.0, 0.0, 0.0]]);
        let cf = ConjugateForms {
            stress: undualize_stress(&sigma),
            couple: FormField::zeros(g, 2, ValueKind::So3).unwrap(),
            momentum: FormField::zeros(g, 3, ValueKind::Frame).unwrap(),
            spin_momentum: FormField::zeros(g, 3, ValueKind::So3).unwrap(),
        };
        let zero = FormField::zeros(g, 3, ValueKind::So3).unwrap();
        let r = moment_balance_residual(&cf, &Coframe::identity(g), &Connection::zero(g), &zero).unwrap();
        // brute force: R_ij = e^i∧Σ_j - e^j∧Σ_i = (σ_ji - σ_ij) dV, read with ½ ε_rij R_ji
        let sig = [[0.0, s, 0.0], [-s, 0.0, 0.0], [0.0, 0.0, 0.0]];
        let mut oracle = [0.0; 3];
        for (rr, o) in oracle.iter_mut().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    *o += 0.5 * levi_civita(rr, i, j) * (sig[i][j] - sig[j][i]);
                }
            }
        }
        assert_eq!(oracle, [0.0, 0.0, 2.0 * s]);
        let ax = moment_axial(&r).unwrap();
        for rr in 0..3 {
            assert!(ax.component(rr).iter().all(|&v| (v - oracle[rr]).abs() < 1e-15));
        }
    }

    #[test]
    fn form_and_tensor_residuals_agree() {
        let g = grid();
        let m = MaterialParams::default();
        let l = spec();
        let mut r = rng(21);
        let mut st = MicropolarState::zeros(g);
        st.displacement = SmoothVector::random(&mut r, 1.0, 0.3).sample(&g);
        st.microrotation = SmoothVector::random(&mut r, 1.0, 0.3).sample(&g);
        let acc = SmoothVector::random(&mut r, 1.0, 1.0).sample(&g);
        let sacc = SmoothVector::random(&mut r, 1.0, 1.0).sample(&g);
        let src = Sources {
            force: SmoothVector::random(&mut r, 1.0, 1.0).sample(&g),
            couple: SmoothVector::random(&mut r, 1.0, 1.0).sample(&g),
        };
        let cf = conjugate_forms(&l, &st);
        let (pd, qd) = momentum_rates(&m, &acc, &sacc, &src);
        let w = Connection::zero(g);
        let fr = frame_volume_coefficients(&force_balance_residual(&cf, &w, &pd).unwrap()).unwrap();
        let mr = moment_axial(&moment_balance_residual(&cf, &Coframe::identity(g), &w, &qd).unwrap()).unwrap();
        let s = constitutive(&linearized_strain(&st), &m);
        let ft = linear_momentum_residual(&s.force, &src.force, &acc, m.rho);
        let mt = angular_momentum_residual(&s.force, &s.couple, &src.couple, &sacc, m.j);
        for (a, b) in fr.data().iter().zip(ft.data()).chain(mr.data().iter().zip(mt.data())) {
            assert!((a - b).abs() <= 1e-13, "{a} vs {b}");
        }
    }
}
