use crate::error::{Error, Result};
use crate::exterior::{Coframe, Connection};
use crate::grid_fields::{
    partial_derivative, FormField, Grid, TensorField, ValueKind, VectorField, SO3_PAIRS,
};
use crate::mat3::{self, Mat3};

const ORTHOGONALITY_TOL: f64 = 1e-12;

/// Absolute floor below which pre-projection asymmetry of `Qᵀ∂Q` is ignored.
pub const ASYMMETRY_FLOOR: f64 = 1e-6;
/// Asymmetry above this fraction of the skew part means `Q` is under-resolved.
pub const ASYMMETRY_RELATIVE: f64 = 0.5;

/// Exponential map `exp([φ]×)`: the right-handed rotation by `|φ|` about `φ`.
/// To first order it is `I - ε·φ`, i.e. `Q_ij ≈ δ_ij - ε_ijk φ_k`.
pub fn rodrigues(phi: [f64; 3]) -> Mat3 {
    let t2 = phi.iter().map(|v| v * v).sum::<f64>();
    let t = t2.sqrt();
    let (a, b) = if t < 1e-4 {
        (1.0 - t2 / 6.0, 0.5 - t2 / 24.0)
    } else {
        (t.sin() / t, (1.0 - t.cos()) / t2)
    };
    let k = mat3::cross_matrix(phi);
    let k2 = mat3::mul(&k, &k);
    std::array::from_fn(|i| {
        std::array::from_fn(|j| mat3::IDENTITY[i][j] + a * k[i][j] + b * k2[i][j])
    })
}

/// Field of proper rotations `Q^i_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationField(TensorField);

impl RotationField {
    /// Checks `QᵀQ = I` and `det Q = 1` to 1e-12 at every point.
    pub fn new(q: TensorField) -> Result<Self> {
        for p in 0..q.grid().len() {
            let m = q.get(p);
            let qtq = mat3::mul(&mat3::transpose(&m), &m);
            let defect = mat3::max_abs_diff(&qtq, &mat3::IDENTITY).max((mat3::det(&m) - 1.0).abs());
            if !(defect <= ORTHOGONALITY_TOL) {
                return Err(Error::NotRotation { point: p, defect });
            }
        }
        Ok(Self(q))
    }

    pub fn identity(grid: Grid) -> Self {
        Self(TensorField::identity(grid))
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 3]) -> Mat3) -> Result<Self> {
        Self::new(TensorField::from_fn(grid, f))
    }

    /// `Q = exp([φ]×)` pointwise.
    pub fn from_axial(phi: &VectorField) -> Self {
        let mut q = TensorField::zeros(*phi.grid());
        for p in 0..phi.grid().len() {
            q.set(p, rodrigues(phi.get(p)));
        }
        Self(q)
    }

    pub fn grid(&self) -> &Grid {
        self.0.grid()
    }

    pub fn tensor(&self) -> &TensorField {
        &self.0
    }

    pub fn get(&self, p: usize) -> Mat3 {
        self.0.get(p)
    }

    /// `Q⁻¹ = Qᵀ`.
    pub fn inverse(&self) -> Self {
        Self(self.0.transpose())
    }
}

/// Pure-gauge connection with the asymmetry removed by projection.
#[derive(Debug, Clone, PartialEq)]
pub struct PureGauge {
    pub connection: Connection,
    /// Max of `|ω_ij + ω_ji| / 2` before projection.
    pub asymmetry: f64,
}

/// `ω^i_{j,a} = Q_ki ∂_a Q_kj`, assembled pointwise and projected onto its skew part.
pub fn pure_gauge_connection(q: &RotationField) -> Result<PureGauge> {
    let grid = *q.grid();
    let t = q.tensor();
    let mut field = FormField::zeros(grid, 1, ValueKind::So3)?;
    let mut asymmetry = 0.0_f64;
    let mut scale = 0.0_f64;
    for a in 0..3 {
        let dq: Vec<Vec<f64>> = (0..9)
            .map(|kj| partial_derivative(&grid, t.component(kj / 3, kj % 3), a))
            .collect();
        let raw = |i: usize, j: usize, p: usize| -> f64 {
            (0..3).map(|k| t.component(k, i)[p] * dq[3 * k + j][p]).sum()
        };
        for p in 0..grid.len() {
            for i in 0..3 {
                asymmetry = asymmetry.max((raw(i, i, p)).abs());
            }
            for (v, &(i, j)) in SO3_PAIRS.iter().enumerate() {
                let (wij, wji) = (raw(i, j, p), raw(j, i, p));
                asymmetry = asymmetry.max(0.5 * (wij + wji).abs());
                let skew = 0.5 * (wij - wji);
                scale = scale.max(skew.abs());
                field.component_mut(v, a)[p] = skew;
            }
        }
    }
    if asymmetry > ASYMMETRY_FLOOR && asymmetry > ASYMMETRY_RELATIVE * scale {
        return Err(Error::AsymmetricConnection { asymmetry, scale });
    }
    Ok(PureGauge {
        connection: Connection::new(field)?,
        asymmetry,
    })
}

/// `e^i_a = Q^i_k ē^k_a`.
pub fn compose_coframe(q: &RotationField, reference: &Coframe) -> Result<Coframe> {
    if q.grid() != reference.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = *q.grid();
    let mut out = FormField::zeros(grid, 1, ValueKind::Frame)?;
    let e = reference.field();
    let t = q.tensor();
    for i in 0..3 {
        for a in 0..3 {
            let dst = out.component_mut(i, a);
            for k in 0..3 {
                for ((o, qik), ek) in dst.iter_mut().zip(t.component(i, k)).zip(e.component(k, a)) {
                    *o += qik * ek;
                }
            }
        }
    }
    Coframe::new(out)
}

/// Torsion-free, flat pair for a rotation field: `e = Q·dX` and
/// `ω = Q d(Q⁻¹)`, the pure gauge of `Q⁻¹`.
///
/// With `D = d + ω∧` the pair `(Q·dX, Q⁻¹dQ)` is torsion free only where `Q`
/// commutes with `dQ`; the inverse has to sit on the side that cancels `dQ`.
pub fn defect_free_pair(q: &RotationField) -> Result<(Coframe, Connection)> {
    let e = compose_coframe(q, &Coframe::identity(*q.grid()))?;
    let w = pure_gauge_connection(&q.inverse())?.connection;
    Ok((e, w))
}
