use super::{rodrigues, MicropolarState, StrainState};
use crate::error::Result;
use crate::exterior::{levi_civita, Coframe};
use crate::grid_fields::TensorField;
use crate::mat3;

/// `γ_ij = ∂_j u_i - ε_ijk φ_k` and `κ_ij = ∂_j φ_i`.
///
/// With `u = G·X + ũ` the uniform part contributes `G_ij` to `∂_j u_i`.
pub fn linearized_strain(state: &MicropolarState) -> StrainState {
    let grid = *state.grid();
    let mut strain = state.displacement.gradient();
    for i in 0..3 {
        for j in 0..3 {
            let g = state.macro_gradient[i][j];
            let dst = strain.component_mut(i, j);
            if g != 0.0 {
                dst.iter_mut().for_each(|v| *v += g);
            }
            for k in 0..3 {
                let eps = levi_civita(i, j, k);
                if eps != 0.0 {
                    for (v, phi) in dst.iter_mut().zip(state.microrotation.component(k)) {
                        *v -= eps * phi;
                    }
                }
            }
        }
    }
    debug_assert_eq!(*strain.grid(), grid);
    StrainState {
        strain,
        wryness: state.microrotation.gradient(),
    }
}

/// First-order coframe variation `δe_iA = ∂_A u_i + ε_ikA φ_k`, which
/// coincides with the micropolar strain.
pub fn first_order_coframe_variation(state: &MicropolarState) -> TensorField {
    linearized_strain(state).strain
}

/// Nonlinear coframe `e(ε) = Q(εφ)·d(X + εu)` with `Q` the exponential map.
///
/// Its derivative at `ε = 0` is [`first_order_coframe_variation`].
pub fn linearize_coframe(state: &MicropolarState, eps: f64) -> Result<Coframe> {
    let grid = *state.grid();
    let grad = state.displacement.gradient();
    let mut e = TensorField::zeros(grid);
    for p in 0..grid.len() {
        let phi = state.microrotation.get(p).map(|v| eps * v);
        let q = rodrigues(phi);
        let du = grad.get(p);
        let f: mat3::Mat3 = std::array::from_fn(|j| {
            std::array::from_fn(|a| {
                mat3::IDENTITY[j][a] + eps * (du[j][a] + state.macro_gradient[j][a])
            })
        });
        e.set(p, mat3::mul(&q, &f));
    }
    Coframe::from_tensor(&e)
}
