//! Linear isotropic micropolar elastodynamics in tensor form: constitutive
//! law, balance residuals, energy and an explicit leapfrog integrator.
//!
//! Balances, with `σ` and `μ` stored frame index first:
//!
//! ```text
//! ρ ü_i = ∂_j σ_ij + f_i
//! J φ̈_r = ∂_j μ_rj + ε_rij σ_ij + c_r
//! ```

pub mod dispersion;
mod integrator;
mod material;

pub use integrator::{step, Leapfrog};
pub use material::MaterialParams;

use crate::exterior::levi_civita;
use crate::grid_fields::{Grid, TensorField, VectorField};
use crate::kinematics::{linearized_strain, MicropolarState, StrainState};

/// Force stress `σ` and couple stress `μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stresses {
    pub force: TensorField,
    pub couple: TensorField,
}

/// Body force `f` and body couple `c` densities, constant in time.
#[derive(Debug, Clone, PartialEq)]
pub struct Sources {
    pub force: VectorField,
    pub couple: VectorField,
}

impl Sources {
    pub fn none(grid: Grid) -> Self {
        Self {
            force: VectorField::zeros(grid),
            couple: VectorField::zeros(grid),
        }
    }

    pub fn uniform(grid: Grid, force: [f64; 3], couple: [f64; 3]) -> Self {
        Self {
            force: VectorField::uniform(grid, force),
            couple: VectorField::uniform(grid, couple),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.force.max_abs() == 0.0 && self.couple.max_abs() == 0.0
    }
}

/// Pointwise constitutive law applied to a strain state.
pub fn constitutive(strain: &StrainState, m: &MaterialParams) -> Stresses {
    let grid = *strain.strain.grid();
    let mut force = TensorField::zeros(grid);
    let mut couple = TensorField::zeros(grid);
    for p in 0..grid.len() {
        force.set(p, m.force_stress(&strain.strain.get(p)));
        couple.set(p, m.couple_stress(&strain.wryness.get(p)));
    }
    Stresses { force, couple }
}

/// `Σ h³ W(γ, κ)`.
pub fn strain_energy(strain: &StrainState, m: &MaterialParams) -> f64 {
    let grid = *strain.strain.grid();
    let sum: f64 = (0..grid.len())
        .map(|p| m.energy_density(&strain.strain.get(p), &strain.wryness.get(p)))
        .sum();
    sum * grid.cell_volume()
}

/// `Σ h³ [½ρ|u̇|² + ½J|φ̇|²]`.
pub fn kinetic_energy(state: &MicropolarState, m: &MaterialParams) -> f64 {
    let h3 = state.grid().cell_volume();
    let sq = |v: &VectorField| v.data().iter().map(|x| x * x).sum::<f64>();
    0.5 * h3 * (m.rho * sq(&state.velocity) + m.j * sq(&state.spin))
}

/// `E = Σ h³ [½ρ|u̇|² + ½J|φ̇|² + W(γ, κ)]`.
pub fn total_energy(state: &MicropolarState, m: &MaterialParams) -> f64 {
    kinetic_energy(state, m) + strain_energy(&linearized_strain(state), m)
}

/// `ε_rij σ_ij`.
pub fn axial_coupling(sigma: &TensorField) -> VectorField {
    let mut out = VectorField::zeros(*sigma.grid());
    for r in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let e = levi_civita(r, i, j);
                if e != 0.0 {
                    for (o, s) in out.component_mut(r).iter_mut().zip(sigma.component(i, j)) {
                        *o += e * s;
                    }
                }
            }
        }
    }
    out
}

/// `∂_j σ_ij + f_i - ρ ü_i`.
pub fn linear_momentum_residual(
    sigma: &TensorField,
    force: &VectorField,
    accel: &VectorField,
    rho: f64,
) -> VectorField {
    let mut r = sigma.divergence();
    r.axpy(1.0, force);
    r.axpy(-rho, accel);
    r
}

/// `∂_j μ_rj + ε_rij σ_ij + c_r - J φ̈_r`.
pub fn angular_momentum_residual(
    sigma: &TensorField,
    mu: &TensorField,
    couple: &VectorField,
    spin_accel: &VectorField,
    j: f64,
) -> VectorField {
    let mut r = mu.divergence();
    r.axpy(1.0, &axial_coupling(sigma));
    r.axpy(1.0, couple);
    r.axpy(-j, spin_accel);
    r
}

/// `(ü, φ̈)` from the two balances at the current configuration.
pub fn accelerations(
    state: &MicropolarState,
    m: &MaterialParams,
    sources: &Sources,
) -> (VectorField, VectorField) {
    let s = constitutive(&linearized_strain(state), m);
    let mut a = s.force.divergence();
    a.axpy(1.0, &sources.force);
    let a = a.scaled(1.0 / m.rho);
    let mut b = s.couple.divergence();
    b.axpy(1.0, &axial_coupling(&s.force));
    b.axpy(1.0, &sources.couple);
    let b = b.scaled(1.0 / m.j);
    (a, b)
}

/// Conserved totals of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Totals {
    /// `Π = Σ h³ ρ u̇`.
    pub linear: [f64; 3],
    /// `Σ h³ (X - X_c) × ρ u̇` about the lattice centroid.
    pub orbital: [f64; 3],
    /// `Σ h³ J φ̇`.
    pub spin: [f64; 3],
    /// Orbital minus spin; see [`Totals::angular`].
    pub angular: [f64; 3],
    /// `Σ h³ ρ |u̇|`, a scale for relative drift of `Π`.
    pub linear_scale: f64,
    /// `Σ h³ (|(X - X_c) × ρ u̇| + J |φ̇|)`, a scale for relative drift of the
    /// angular momentum.
    pub angular_scale: f64,
    pub energy: f64,
}

/// Momentum totals and energy.
///
/// With `Q ≈ I - ε·φ` a material rotation by `θ` is matched by `φ = -θ`, so
/// the angular momentum that the balances conserve is `orbital - spin`.
pub fn totals(state: &MicropolarState, m: &MaterialParams) -> Totals {
    let grid = *state.grid();
    let h3 = grid.cell_volume();
    let c = grid.centroid();
    let mut linear = [0.0; 3];
    let mut orbital = [0.0; 3];
    let mut spin = [0.0; 3];
    let mut linear_scale = 0.0;
    let mut angular_scale = 0.0;
    for p in 0..grid.len() {
        let x = grid.position(p);
        let r = [x[0] - c[0], x[1] - c[1], x[2] - c[2]];
        let v = state.velocity.get(p).map(|a| m.rho * a);
        let w = state.spin.get(p).map(|a| m.j * a);
        let l = [r[1] * v[2] - r[2] * v[1], r[2] * v[0] - r[0] * v[2], r[0] * v[1] - r[1] * v[0]];
        for a in 0..3 {
            linear[a] += v[a];
            orbital[a] += l[a];
            spin[a] += w[a];
        }
        let norm = |u: [f64; 3]| (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
        linear_scale += norm(v);
        angular_scale += norm(l) + norm(w);
    }
    let scale3 = |a: [f64; 3]| a.map(|x| x * h3);
    let (linear, orbital, spin) = (scale3(linear), scale3(orbital), scale3(spin));
    Totals {
        linear,
        orbital,
        spin,
        angular: std::array::from_fn(|a| orbital[a] - spin[a]),
        linear_scale: linear_scale * h3,
        angular_scale: angular_scale * h3,
        energy: total_energy(state, m),
    }
}
