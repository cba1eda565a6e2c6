use crate::error::{Error, Result};
use crate::mat3;
use crate::exterior::exterior_derivative;
use crate::grid_fields::{FormField, Grid, TensorField, ValueKind, VectorField};

/// Relative tolerance on `y(X + L e_a) - y(X) - L e_a` for a placement to be
/// accepted as a periodic perturbation of the identity.
const PERIODICITY_TOL: f64 = 1e-9;

/// Placement `y = X + w(X)` with periodic `w`, plus the material velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct MotionField {
    displacement: VectorField,
    velocity: VectorField,
}

impl MotionField {
    pub fn new(displacement: VectorField, velocity: VectorField) -> Result<Self> {
        if displacement.grid() != velocity.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            displacement,
            velocity,
        })
    }

    pub fn at_rest(displacement: VectorField) -> Self {
        let velocity = VectorField::zeros(*displacement.grid());
        Self {
            displacement,
            velocity,
        }
    }

    /// Samples a placement map. `y(X) - X` must be periodic; a rigid rotation
    /// `y = R X` is not and is rejected.
    pub fn from_placement_fn(grid: Grid, y: impl Fn([f64; 3]) -> [f64; 3]) -> Result<Self> {
        let l = grid.length();
        let mut worst = 0.0_f64;
        let mut scale = 1.0_f64;
        let displacement = VectorField::from_fn(grid, |x| {
            let yx = y(x);
            std::array::from_fn(|i| yx[i] - x[i])
        });
        for p in 0..grid.len() {
            let x = grid.position(p);
            let w = displacement.get(p);
            scale = scale.max(w.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
            for a in 0..3 {
                let mut xs = x;
                xs[a] += l;
                let ys = y(xs);
                for i in 0..3 {
                    worst = worst.max((ys[i] - xs[i] - w[i]).abs());
                }
            }
        }
        if worst > PERIODICITY_TOL * scale {
            return Err(Error::NonPeriodicMotion(worst));
        }
        Ok(Self::at_rest(displacement))
    }

    pub fn grid(&self) -> &Grid {
        self.displacement.grid()
    }

    /// `y - X`.
    pub fn displacement(&self) -> &VectorField {
        &self.displacement
    }

    pub fn velocity(&self) -> &VectorField {
        &self.velocity
    }

    /// Placement `y^i = X^i + w^i` at point `p`.
    pub fn placement(&self, p: usize) -> [f64; 3] {
        let x = self.grid().position(p);
        let w = self.displacement.get(p);
        std::array::from_fn(|i| x[i] + w[i])
    }
}

/// `F^i_A = δ^i_A + ∂_A w^i` by central stencils; rejects `det F <= 0`.
pub fn deformation_gradient(motion: &MotionField) -> Result<TensorField> {
    let grid = *motion.grid();
    let mut f = motion.displacement.gradient();
    for i in 0..3 {
        f.component_mut(i, i).iter_mut().for_each(|v| *v += 1.0);
    }
    for p in 0..grid.len() {
        let det = mat3::det(&f.get(p));
        if !(det > 0.0) {
            return Err(Error::NonPositiveJacobian { point: p, det });
        }
    }
    Ok(f)
}

/// The frame-valued 2-form `d(F^i_A dX^A)`; it vanishes (to stencil error)
/// exactly when `F` is locally a gradient.
pub fn compatibility_residual(f: &TensorField) -> FormField {
    let grid = *f.grid();
    let mut one_form = FormField::zeros(grid, 1, ValueKind::Frame).expect("degree 1");
    for i in 0..3 {
        for a in 0..3 {
            one_form.component_mut(i, a).copy_from_slice(f.component(i, a));
        }
    }
    exterior_derivative(&one_form).expect("degree 1")
}
