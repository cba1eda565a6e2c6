use super::MotionField;
use crate::error::{Error, Result};
use crate::exterior::{exterior_derivative, Coframe};
use crate::grid_fields::VectorField;

const ORDERINGS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Potentials `y^i = X^i + w^i` of a closed coframe with `ω = 0`.
///
/// `w^i` is the trapezoidal line integral of `e^i - dX^i` from the grid
/// origin along axis-aligned legs, averaged over the six axis orderings so
/// that leftover closure error does not favor one path. `w` vanishes at the
/// origin.
///
/// Errors with [`Error::CoframeNotClosed`] when `max|de| > tol`, and with
/// [`Error::InvalidArgument`] when the mean of `e` is not the identity (the
/// potentials would then not be a periodic perturbation of `X`).
pub fn poincare_reconstruct(e: &Coframe, tol: f64) -> Result<MotionField> {
    let grid = *e.grid();
    let norm = exterior_derivative(e.field())?.max_abs();
    if !(norm <= tol) {
        return Err(Error::CoframeNotClosed { norm, tol });
    }
    let n = grid.n();
    let h = grid.spacing();
    let f = e.field();

    // cum[3i + a][p]: integral of (e^i_a - δ^i_a) along axis a from coordinate 0 to p
    let mut cum = vec![vec![0.0; grid.len()]; 9];
    for i in 0..3 {
        for a in 0..3 {
            let delta = if i == a { 1.0 } else { 0.0 };
            let src = f.component(i, a);
            let mean = src.iter().map(|v| v - delta).sum::<f64>() / grid.len() as f64;
            if mean.abs() > tol.max(1e-12) {
                return Err(Error::InvalidArgument(format!(
                    "coframe component ({i}, {a}) has mean {} instead of {delta}",
                    mean + delta
                )));
            }
            let dst = &mut cum[3 * i + a];
            for p in 0..grid.len() {
                let c = grid.coords(p);
                if c[a] == 0 {
                    let mut prev = p;
                    for _ in 1..n {
                        let next = grid.neighbor(prev, a, 1);
                        dst[next] = dst[prev] + 0.5 * h * (src[prev] + src[next] - 2.0 * delta);
                        prev = next;
                    }
                }
            }
        }
    }

    let mut w = VectorField::zeros(grid);
    for p in 0..grid.len() {
        let c = grid.coords(p);
        let mut acc = [0.0; 3];
        for order in &ORDERINGS {
            let mut s = [0usize; 3];
            for &a in order {
                s[a] = c[a];
                let q = grid.index(s[0], s[1], s[2]);
                for (i, v) in acc.iter_mut().enumerate() {
                    *v += cum[3 * i + a][q];
                }
            }
        }
        w.set(p, acc.map(|v| v / ORDERINGS.len() as f64));
    }
    Ok(MotionField::at_rest(w))
}
