use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::mat3::Mat3;

/// Isotropic micropolar moduli and inertia.
///
/// Strain energy density
/// `W = ½ λ (tr γ)² + ½ (μ_e + κ_c) γ:γ + ½ μ_e γ:γᵀ + ½ α_t (tr κ)² + ½ γ_t κ:κ + ½ β_t κ:κᵀ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaterialParams {
    pub rho: f64,
    /// Isotropic microinertia `J`.
    pub j: f64,
    pub lambda: f64,
    pub mu_e: f64,
    pub kappa_c: f64,
    pub alpha_t: f64,
    pub beta_t: f64,
    pub gamma_t: f64,
}

impl Default for MaterialParams {
    fn default() -> Self {
        Self {
            rho: 1.0,
            j: 0.1,
            lambda: 1.0,
            mu_e: 1.0,
            kappa_c: 0.5,
            alpha_t: 0.1,
            beta_t: 0.1,
            gamma_t: 0.2,
        }
    }
}

impl MaterialParams {
    /// Default moduli with the couple stress and the Cosserat coupling switched
    /// off: plain linear elasticity for `u`.
    pub fn classical(rho: f64, lambda: f64, mu_e: f64) -> Self {
        Self {
            rho,
            lambda,
            mu_e,
            kappa_c: 0.0,
            alpha_t: 0.0,
            beta_t: 0.0,
            gamma_t: 0.0,
            ..Self::default()
        }
    }

    /// Checks `ρ > 0`, `J > 0` and that the 18×18 quadratic form of `W` is
    /// positive semi-definite. Semi-definite rather than definite so that the
    /// classical limit `κ_c = α_t = β_t = γ_t = 0` stays admissible.
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.rho,
            self.j,
            self.lambda,
            self.mu_e,
            self.kappa_c,
            self.alpha_t,
            self.beta_t,
            self.gamma_t,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMaterial("moduli must be finite".into()));
        }
        if !(self.rho > 0.0) {
            return Err(Error::InvalidMaterial(format!("rho = {} must be positive", self.rho)));
        }
        if !(self.j > 0.0) {
            return Err(Error::InvalidMaterial(format!("J = {} must be positive", self.j)));
        }
        let min = self.min_energy_eigenvalue();
        let scale = all[2..].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if min < -1e-12 * scale {
            return Err(Error::InvalidMaterial(format!(
                "strain energy is not positive semi-definite (smallest eigenvalue {min:e})"
            )));
        }
        Ok(())
    }

    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// The 18×18 symmetric matrix `K` with `W = ½ xᵀ K x`, `x = (γ_ij, κ_ij)` row-major.
    pub fn energy_matrix(&self) -> DMatrix<f64> {
        let mut k = DMatrix::zeros(18, 18);
        let blocks = [
            (0, self.lambda, self.mu_e + self.kappa_c, self.mu_e),
            (9, self.alpha_t, self.gamma_t, self.beta_t),
        ];
        for (off, trace, direct, transposed) in blocks {
            for i in 0..3 {
                for j in 0..3 {
                    let r = off + 3 * i + j;
                    k[(r, r)] += direct;
                    k[(r, off + 3 * j + i)] += transposed;
                }
                for j in 0..3 {
                    k[(off + 4 * i, off + 4 * j)] += trace;
                }
            }
        }
        k
    }

    pub fn min_energy_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.energy_matrix()).eigenvalues.min()
    }

    /// Force stress `σ_ij = λ γ_kk δ_ij + (μ_e + κ_c) γ_ij + μ_e γ_ji` at one point.
    pub fn force_stress(&self, g: &Mat3) -> Mat3 {
        let tr = g[0][0] + g[1][1] + g[2][2];
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let d = if i == j { self.lambda * tr } else { 0.0 };
                d + (self.mu_e + self.kappa_c) * g[i][j] + self.mu_e * g[j][i]
            })
        })
    }

    /// Couple stress `μ_ij = α_t κ_kk δ_ij + β_t κ_ji + γ_t κ_ij` at one point.
    pub fn couple_stress(&self, k: &Mat3) -> Mat3 {
        let tr = k[0][0] + k[1][1] + k[2][2];
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let d = if i == j { self.alpha_t * tr } else { 0.0 };
                d + self.beta_t * k[j][i] + self.gamma_t * k[i][j]
            })
        })
    }

    /// `W(γ, κ) = ½ σ:γ + ½ μ:κ` at one point.
    pub fn energy_density(&self, g: &Mat3, k: &Mat3) -> f64 {
        let s = self.force_stress(g);
        let m = self.couple_stress(k);
        let mut w = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                w += s[i][j] * g[i][j] + m[i][j] * k[i][j];
            }
        }
        0.5 * w
    }

    /// Largest squared acoustic speed over the four branches:
    /// longitudinal and transverse displacement, longitudinal and transverse
    /// microrotation.
    pub fn max_wave_speed_squared(&self) -> f64 {
        [
            (self.lambda + 2.0 * self.mu_e + self.kappa_c) / self.rho,
            (self.mu_e + self.kappa_c) / self.rho,
            (self.alpha_t + self.beta_t + self.gamma_t) / self.j,
            self.gamma_t / self.j,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Largest stable leapfrog step with a factor-of-two margin:
    /// `dt ≤ 0.5 h / c_eff`, where `c_eff² = c_max² + 4 κ_c h² / J` also
    /// covers the optical branches (cutoff `ω² = 2 κ_c / J`) with margin.
    pub fn cfl_bound(&self, h: f64) -> f64 {
        let c2 = self.max_wave_speed_squared() + 4.0 * self.kappa_c.max(0.0) * h * h / self.j;
        if c2 <= 0.0 {
            f64::INFINITY
        } else {
            0.5 * h / c2.sqrt()
        }
    }
}
