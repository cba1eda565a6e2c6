//! Uniform periodic grid, field containers and the central-difference stencil
//! every other module differentiates with.
//!
//! Points are indexed `p = x + n * (y + n * z)` so that the first axis is the
//! fastest varying one. All three axes share `n` and the spacing `h = L / n`.

mod form;
mod tensor;

pub use form::{coordinate_slot, coordinate_slots, so3_slot, FormField, ValueKind, SO3_PAIRS};
pub use tensor::{TensorField, VectorField};

use crate::error::{Error, Result};

/// Cubic periodic box sampled with `n` points per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    length: f64,
    h: f64,
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 4 {
            return Err(Error::GridTooSmall(n));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidLength(length));
        }
        Ok(Self {
            n,
            length,
            h: length / n as f64,
        })
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Physical edge length of the box.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Grid spacing `h = L / n`.
    pub fn spacing(&self) -> f64 {
        self.h
    }

    /// Total number of grid points, `n^3`.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight of one point, `h^3`.
    pub fn cell_volume(&self) -> f64 {
        self.h * self.h * self.h
    }

    pub fn volume(&self) -> f64 {
        self.length * self.length * self.length
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        x + self.n * (y + self.n * z)
    }

    #[inline]
    pub fn coords(&self, p: usize) -> [usize; 3] {
        let n = self.n;
        [p % n, (p / n) % n, p / (n * n)]
    }

    /// Physical position of point `p` in `[0, L)^3`.
    #[inline]
    pub fn position(&self, p: usize) -> [f64; 3] {
        let [x, y, z] = self.coords(p);
        [x as f64 * self.h, y as f64 * self.h, z as f64 * self.h]
    }

    /// Centroid of the sampling points, `(n - 1) h / 2` along every axis.
    pub fn centroid(&self) -> [f64; 3] {
        let c = 0.5 * (self.n - 1) as f64 * self.h;
        [c, c, c]
    }

    /// Samples a scalar function at every grid point.
    pub fn sample(&self, f: impl Fn([f64; 3]) -> f64) -> Vec<f64> {
        (0..self.len()).map(|p| f(self.position(p))).collect()
    }

    /// Index of the point displaced by `shift` cells along `axis`, with wraparound.
    #[inline]
    pub fn neighbor(&self, p: usize, axis: usize, shift: isize) -> usize {
        let mut c = self.coords(p);
        let n = self.n as isize;
        c[axis] = (c[axis] as isize + shift).rem_euclid(n) as usize;
        self.index(c[0], c[1], c[2])
    }
}

#[cfg(not(feature = "negative-control"))]
#[inline(always)]
fn stencil(plus: f64, _center: f64, minus: f64) -> f64 {
    plus - minus
}

#[cfg(feature = "negative-control")]
#[inline(always)]
fn stencil(plus: f64, center: f64, _minus: f64) -> f64 {
    plus - center
}

#[cfg(not(feature = "negative-control"))]
#[inline(always)]
fn stencil_coefficient(h: f64) -> f64 {
    0.5 / h
}

#[cfg(feature = "negative-control")]
#[inline(always)]
fn stencil_coefficient(h: f64) -> f64 {
    1.0 / h
}

/// `out += scale * ∂_axis f` using the periodic central difference
/// `(f[x + h] - f[x - h]) / 2h`.
pub fn add_partial(grid: &Grid, f: &[f64], axis: usize, scale: f64, out: &mut [f64]) {
    let n = grid.n;
    assert_eq!(f.len(), grid.len(), "field length does not match grid");
    assert_eq!(out.len(), grid.len(), "output length does not match grid");
    assert!(axis < 3, "axis must be 0, 1 or 2");
    let c = scale * stencil_coefficient(grid.h);
    match axis {
        0 => {
            for (fr, o) in f.chunks_exact(n).zip(out.chunks_exact_mut(n)) {
                o[0] += c * stencil(fr[1], fr[0], fr[n - 1]);
                for x in 1..n - 1 {
                    o[x] += c * stencil(fr[x + 1], fr[x], fr[x - 1]);
                }
                o[n - 1] += c * stencil(fr[0], fr[n - 1], fr[n - 2]);
            }
        }
        1 => {
            for z in 0..n {
                for y in 0..n {
                    let row = |yy: usize| (yy + n * z) * n;
                    let (r0, rp, rm) = (row(y), row((y + 1) % n), row((y + n - 1) % n));
                    let o = &mut out[r0..r0 + n];
                    for x in 0..n {
                        o[x] += c * stencil(f[rp + x], f[r0 + x], f[rm + x]);
                    }
                }
            }
        }
        _ => {
            let plane = n * n;
            for z in 0..n {
                let (p0, pp, pm) = (z * plane, ((z + 1) % n) * plane, ((z + n - 1) % n) * plane);
                let o = &mut out[p0..p0 + plane];
                for q in 0..plane {
                    o[q] += c * stencil(f[pp + q], f[p0 + q], f[pm + q]);
                }
            }
        }
    }
}

/// Central-difference partial derivative along `axis` with periodic wraparound.
pub fn partial_derivative(grid: &Grid, f: &[f64], axis: usize) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    add_partial(grid, f, axis, 1.0, &mut out);
    out
}

/// Largest absolute entry; zero for an empty slice.
pub fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Discrete L2 norm with `h^3` weights.
pub fn l2_norm(grid: &Grid, values: &[f64]) -> f64 {
    (grid.cell_volume() * values.iter().map(|v| v * v).sum::<f64>()).sqrt()
}

/// Max-abs norm of a form field; the norm every residual check reports.
pub fn field_norm(f: &FormField) -> f64 {
    f.max_abs()
}

/// `h^3`-weighted L2 variant of [`field_norm`].
pub fn field_norm_l2(f: &FormField) -> f64 {
    l2_norm(f.grid(), f.data())
}
