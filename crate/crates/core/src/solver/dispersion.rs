//! Plane-wave dispersion of the micropolar equations.
//!
//! For `(u, φ) = Re[(a, b) e^{i k·X - iωt}]` the balances become
//! `ω² M q = K(k) q` with `M = diag(ρ, ρ, ρ, J, J, J)` and the Hermitian 6×6
//! symbol `K`. The collocated central stencil replaces `k` by
//! `sin(k h) / h` componentwise, and leapfrog maps a semi-discrete frequency
//! `ω` to `(2 / dt) asin(ω dt / 2)`.

use nalgebra::{DMatrix, SymmetricEigen};

use super::MaterialParams;
use crate::exterior::levi_civita;

/// One dispersion branch: frequency and the `(u, φ)` amplitude as `(re, im)`
/// pairs, normalized to unit `M`-norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub omega: f64,
    pub mode: [(f64, f64); 6],
}

type C = (f64, f64);

/// `K(k)` as `(re, im)` entries, rows and columns ordered `(u_1..3, φ_1..3)`.
pub fn symbol_matrix(m: &MaterialParams, k: [f64; 3]) -> [[C; 6]; 6] {
    let mut out = [[(0.0, 0.0); 6]; 6];
    for col in 0..6 {
        // strain and wryness of a unit amplitude in slot `col`: ∂_j → i k_j
        let mut g_re = [[0.0; 3]; 3];
        let mut g_im = [[0.0; 3]; 3];
        let mut w_im = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                if col < 3 && i == col {
                    g_im[i][j] = k[j];
                }
                if col >= 3 {
                    g_re[i][j] = -levi_civita(i, j, col - 3);
                    if i == col - 3 {
                        w_im[i][j] = k[j];
                    }
                }
            }
        }
        let (s_re, s_im) = (m.force_stress(&g_re), m.force_stress(&g_im));
        let c_im = m.couple_stress(&w_im);
        for i in 0..3 {
            // -(i k_j σ_ij)
            let (mut re, mut im) = (0.0, 0.0);
            for j in 0..3 {
                re += k[j] * s_im[i][j];
                im -= k[j] * s_re[i][j];
            }
            out[i][col] = (re, im);
            // -(i k_j μ_ij + ε_ijl σ_jl); μ is purely imaginary here
            let (mut re, mut im) = (0.0, 0.0);
            for j in 0..3 {
                re += k[j] * c_im[i][j];
                for l in 0..3 {
                    re -= levi_civita(i, j, l) * s_re[j][l];
                    im -= levi_civita(i, j, l) * s_im[j][l];
                }
            }
            out[3 + i][col] = (re, im);
        }
    }
    out
}

/// The six branches at wavevector `k`, ascending in `ω`.
pub fn branches(m: &MaterialParams, k: [f64; 3]) -> [Branch; 6] {
    let kk = symbol_matrix(m, k);
    let scale: [f64; 6] = std::array::from_fn(|a| 1.0 / if a < 3 { m.rho } else { m.j }.sqrt());
    // real embedding [[Re, -Im], [Im, Re]] of M^{-1/2} K M^{-1/2}
    let mut e = DMatrix::zeros(12, 12);
    for r in 0..6 {
        for c in 0..6 {
            let s = scale[r] * scale[c];
            let (re, im) = (kk[r][c].0 * s, kk[r][c].1 * s);
            e[(r, c)] = re;
            e[(r + 6, c + 6)] = re;
            e[(r, c + 6)] = -im;
            e[(r + 6, c)] = im;
        }
    }
    let eig = SymmetricEigen::new(e);
    let mut order: Vec<usize> = (0..12).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    // every eigenvalue of the embedding appears twice
    std::array::from_fn(|n| {
        let idx = order[2 * n];
        let v = eig.eigenvectors.column(idx);
        Branch {
            omega: eig.eigenvalues[idx].max(0.0).sqrt(),
            mode: std::array::from_fn(|a| (v[a] * scale[a], v[a + 6] * scale[a])),
        }
    })
}

/// The wavevector seen by the central stencil on spacing `h`.
pub fn lattice_wavenumber(k: [f64; 3], h: f64) -> [f64; 3] {
    k.map(|c| (c * h).sin() / h)
}

/// Leapfrog frequency of a mode with semi-discrete frequency `omega`; NaN
/// beyond the stability limit `ω dt = 2`.
pub fn leapfrog_frequency(omega: f64, dt: f64) -> f64 {
    2.0 / dt * (0.5 * omega * dt).asin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn herm(a: &[[C; 6]; 6]) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..6 {
            for c in 0..6 {
                worst = worst.max((a[r][c].0 - a[c][r].0).abs()).max((a[r][c].1 + a[c][r].1).abs());
            }
        }
        worst
    }

    #[test]
    fn symbol_is_hermitian() {
        let m = MaterialParams::default();
        assert!(herm(&symbol_matrix(&m, [1.3, -0.4, 2.2])) < 1e-14);
    }

    #[test]
    fn axis_aligned_branches_match_closed_forms() {
        let m = MaterialParams::default();
        let k = TAU;
        let b = branches(&m, [k, 0.0, 0.0]);
        let mut got: Vec<f64> = b.iter().map(|x| x.omega * x.omega).collect();
        let mut want = vec![
            (m.lambda + 2.0 * m.mu_e + m.kappa_c) * k * k / m.rho,
            ((m.alpha_t + m.beta_t + m.gamma_t) * k * k + 2.0 * m.kappa_c) / m.j,
        ];
        // transverse pairs: ρω² u = (μ+κ)k² u ∓ iκk φ, Jω² φ = ±iκk u + (γk² + 2κ) φ
        let (a, d, off) = ((m.mu_e + m.kappa_c) * k * k, m.gamma_t * k * k + 2.0 * m.kappa_c, m.kappa_c * k);
        let (p, q) = (a / m.rho + d / m.j, (a * d - off * off) / (m.rho * m.j));
        let disc = (p * p - 4.0 * q).sqrt();
        for _ in 0..2 {
            want.push(0.5 * (p - disc));
            want.push(0.5 * (p + disc));
        }
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-10 * w, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn modes_are_eigenvectors() {
        let m = MaterialParams::default();
        let k = [2.0, 1.0, -0.5];
        let kk = symbol_matrix(&m, k);
        for b in branches(&m, k) {
            for r in 0..6 {
                let mass = if r < 3 { m.rho } else { m.j };
                let (mut re, mut im) = (0.0, 0.0);
                for c in 0..6 {
                    re += kk[r][c].0 * b.mode[c].0 - kk[r][c].1 * b.mode[c].1;
                    im += kk[r][c].0 * b.mode[c].1 + kk[r][c].1 * b.mode[c].0;
                }
                let w2 = b.omega * b.omega * mass;
                assert!((re - w2 * b.mode[r].0).abs() < 1e-10);
                assert!((im - w2 * b.mode[r].1).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn cfl_bound_keeps_every_lattice_mode_stable() {
        let m = MaterialParams::default();
        let n = 8;
        let h = 1.0 / n as f64;
        let dt = m.cfl_bound(h);
        let mut worst = 0.0_f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let k = [a, b, c].map(|v| TAU * v as f64);
                    let top = branches(&m, lattice_wavenumber(k, h))[5].omega;
                    worst = worst.max(top * dt);
                }
            }
        }
        assert!(worst < 2.0, "ω dt = {worst}");
    }

    #[test]
    fn small_steps_barely_shift_the_frequency() {
        assert!((leapfrog_frequency(3.0, 1e-4) - 3.0).abs() < 1e-7);
        assert!(leapfrog_frequency(3.0, 0.5) > 3.0);
        assert!(leapfrog_frequency(3.0, 1.0).is_nan());
    }
}
