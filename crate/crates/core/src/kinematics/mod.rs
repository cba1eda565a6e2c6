//! Motion and deformation gradient, compatibility, pure-gauge connections,
//! Poincaré reconstruction, the Lie derivative of the coframe and the
//! linearization to micropolar strain and wryness.
//!
//! Index conventions shared with the solver: `γ_ij = ∂_j u_i - ε_ijk φ_k`
//! (first index frame, second coordinate) and `κ_ij = ∂_j φ_i`. The finite
//! microrotation completing `Q ≈ I - ε·φ` is the exponential map, i.e. the
//! right-handed rotation by angle `|φ|` about `φ`.

mod lie;
mod linear;
mod motion;
mod poincare;
mod rotation;

pub use lie::{lie_derivative_coframe, LieDerivative};
pub use linear::{first_order_coframe_variation, linearize_coframe, linearized_strain};
pub use motion::{compatibility_residual, deformation_gradient, MotionField};
pub use poincare::poincare_reconstruct;
pub use rotation::{
    compose_coframe, defect_free_pair, pure_gauge_connection, rodrigues, PureGauge, RotationField,
};

use crate::grid_fields::{Grid, TensorField, VectorField};

/// Linearized micropolar configuration.
///
/// The displacement is `u(X) = G·X + ũ(X)` with `ũ` periodic and `G` a
/// uniform macroscopic displacement gradient. Keeping `G` separate lets
/// homogeneous deformations, including infinitesimal rigid rotations, live
/// on the periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MicropolarState {
    /// Periodic part `ũ` of the displacement.
    pub displacement: VectorField,
    /// Axial microrotation vector `φ`.
    pub microrotation: VectorField,
    /// `u̇`.
    pub velocity: VectorField,
    /// `φ̇`.
    pub spin: VectorField,
    /// Uniform gradient `G_ij` added to `∂_j ũ_i`; held fixed in time.
    pub macro_gradient: [[f64; 3]; 3],
}

impl MicropolarState {
    pub fn zeros(grid: Grid) -> Self {
        Self {
            displacement: VectorField::zeros(grid),
            microrotation: VectorField::zeros(grid),
            velocity: VectorField::zeros(grid),
            spin: VectorField::zeros(grid),
            macro_gradient: [[0.0; 3]; 3],
        }
    }

    pub fn grid(&self) -> &Grid {
        self.displacement.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.displacement.is_finite()
            && self.microrotation.is_finite()
            && self.velocity.is_finite()
            && self.spin.is_finite()
    }

    /// Every field (and the macro gradient) multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        let mut g = self.macro_gradient;
        g.iter_mut().flatten().for_each(|v| *v *= s);
        Self {
            displacement: self.displacement.scaled(s),
            microrotation: self.microrotation.scaled(s),
            velocity: self.velocity.scaled(s),
            spin: self.spin.scaled(s),
            macro_gradient: g,
        }
    }

    /// Largest relative difference over all fields, normalized by the larger
    /// of the two states' max-abs.
    pub fn relative_difference(&self, other: &Self) -> f64 {
        let pairs = [
            (&self.displacement, &other.displacement),
            (&self.microrotation, &other.microrotation),
            (&self.velocity, &other.velocity),
            (&self.spin, &other.spin),
        ];
        let mut diff = 0.0_f64;
        let mut scale = 0.0_f64;
        for (a, b) in pairs {
            scale = scale.max(a.max_abs()).max(b.max_abs());
            for (x, y) in a.data().iter().zip(b.data()) {
                diff = diff.max((x - y).abs());
            }
        }
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }
}

/// Micropolar strain `γ` and wryness `κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrainState {
    pub strain: TensorField,
    pub wryness: TensorField,
}
