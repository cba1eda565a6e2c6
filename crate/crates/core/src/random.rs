//! Seeded band-limited smooth periodic fields with closed-form derivatives.
//!
//! Every field is a sum of at most five sinusoids whose integer wavevectors
//! have components in `{-1, 0, 1}`, so grids from `n = 16` upward sit in the
//! asymptotic range of the second-order stencil.

use std::f64::consts::TAU;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::grid_fields::{Grid, TensorField, VectorField};

/// Deterministic generator used for every random field in the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq)]
struct Mode {
    k: [f64; 3],
    amplitude: f64,
    phase: f64,
}

/// `f(x) = offset + Σ A sin(2π k·x / L + θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothScalar {
    length: f64,
    offset: f64,
    modes: Vec<Mode>,
}

impl SmoothScalar {
    pub fn random<R: Rng>(rng: &mut R, length: f64, amplitude: f64) -> Self {
        Self::random_with(rng, length, amplitude, false)
    }

    /// Like [`SmoothScalar::random`] with every wavevector along a coordinate
    /// axis, which keeps the spectrum (and the stencil error constants) small.
    pub fn random_axis_aligned<R: Rng>(rng: &mut R, length: f64, amplitude: f64) -> Self {
        Self::random_with(rng, length, amplitude, true)
    }

    fn random_with<R: Rng>(rng: &mut R, length: f64, amplitude: f64, axis_aligned: bool) -> Self {
        let count = rng.gen_range(1..=5);
        let modes = (0..count)
            .map(|_| {
                let mut k = [0.0; 3];
                if axis_aligned {
                    k[rng.gen_range(0..3)] = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                }
                while k == [0.0; 3] {
                    for c in &mut k {
                        *c = rng.gen_range(-1i32..=1) as f64;
                    }
                }
                Mode {
                    k,
                    amplitude: amplitude * rng.gen_range(-1.0..1.0) / count as f64,
                    phase: rng.gen_range(0.0..TAU),
                }
            })
            .collect();
        Self {
            length,
            offset: 0.0,
            modes,
        }
    }

    /// A single mode `amplitude * sin(2π k·x / L + phase)`.
    pub fn mode(length: f64, k: [f64; 3], amplitude: f64, phase: f64) -> Self {
        Self {
            length,
            offset: 0.0,
            modes: vec![Mode {
                k,
                amplitude,
                phase,
            }],
        }
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    fn arg(&self, m: &Mode, x: [f64; 3]) -> f64 {
        TAU / self.length * (m.k[0] * x[0] + m.k[1] * x[1] + m.k[2] * x[2]) + m.phase
    }

    pub fn value(&self, x: [f64; 3]) -> f64 {
        self.offset
            + self
                .modes
                .iter()
                .map(|m| m.amplitude * self.arg(m, x).sin())
                .sum::<f64>()
    }

    pub fn gradient(&self, x: [f64; 3]) -> [f64; 3] {
        let mut g = [0.0; 3];
        for m in &self.modes {
            let c = m.amplitude * self.arg(m, x).cos() * TAU / self.length;
            for (ga, ka) in g.iter_mut().zip(m.k) {
                *ga += c * ka;
            }
        }
        g
    }

    pub fn sample(&self, grid: &Grid) -> Vec<f64> {
        grid.sample(|x| self.value(x))
    }
}

/// Three independent smooth scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothVector(pub [SmoothScalar; 3]);

impl SmoothVector {
    pub fn random_axis_aligned<R: Rng>(rng: &mut R, length: f64, amplitude: f64) -> Self {
        Self(std::array::from_fn(|_| {
            SmoothScalar::random_axis_aligned(rng, length, amplitude)
        }))
    }

    pub fn random<R: Rng>(rng: &mut R, length: f64, amplitude: f64) -> Self {
        Self(std::array::from_fn(|_| SmoothScalar::random(rng, length, amplitude)))
    }

    pub fn value(&self, x: [f64; 3]) -> [f64; 3] {
        std::array::from_fn(|i| self.0[i].value(x))
    }

    /// `J[i][a] = ∂_a v_i`.
    pub fn jacobian(&self, x: [f64; 3]) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| self.0[i].gradient(x))
    }

    pub fn sample(&self, grid: &Grid) -> VectorField {
        VectorField::from_fn(*grid, |x| self.value(x))
    }

    pub fn sample_jacobian(&self, grid: &Grid) -> TensorField {
        TensorField::from_fn(*grid, |x| self.jacobian(x))
    }
}

/// Nine independent smooth scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothMatrix(pub [[SmoothScalar; 3]; 3]);

impl SmoothMatrix {
    pub fn random<R: Rng>(rng: &mut R, length: f64, amplitude: f64) -> Self {
        Self(std::array::from_fn(|_| {
            std::array::from_fn(|_| SmoothScalar::random(rng, length, amplitude))
        }))
    }

    pub fn value(&self, x: [f64; 3]) -> [[f64; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j].value(x)))
    }

    pub fn sample(&self, grid: &Grid) -> TensorField {
        TensorField::from_fn(*grid, |x| self.value(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_field() {
        let a = SmoothVector::random(&mut rng(7), 1.0, 0.5);
        let b = SmoothVector::random(&mut rng(7), 1.0, 0.5);
        assert_eq!(a, b);
        let c = SmoothVector::random(&mut rng(8), 1.0, 0.5);
        assert_ne!(a, c);
    }

    #[test]
    fn fields_are_periodic_and_gradients_match() {
        let f = SmoothScalar::random(&mut rng(3), 2.0, 1.0);
        let x = [0.3, 1.1, 0.7];
        assert!((f.value(x) - f.value([x[0] + 2.0, x[1] - 2.0, x[2] + 4.0])).abs() < 1e-12);
        let eps = 1e-6;
        let g = f.gradient(x);
        for a in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[a] += eps;
            xm[a] -= eps;
            let fd = (f.value(xp) - f.value(xm)) / (2.0 * eps);
            assert!((fd - g[a]).abs() < 1e-8);
        }
    }
}
