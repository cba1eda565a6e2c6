use super::{
    conjugate_forms, force_balance_residual, frame_volume_coefficients, moment_axial,
    moment_residual_signed, momentum_rates, LagrangianSpec,
};
use crate::error::{Error, Result};
use crate::exterior::{Coframe, Connection};
use crate::grid_fields::VectorField;
use crate::kinematics::{linearized_strain, MicropolarState};
use crate::solver::{strain_energy, Sources};

/// Passing threshold of [`functional_gradient_check`].
pub const GRADIENT_TOLERANCE: f64 = 1e-6;

/// Time slices of the configuration at spacing `dt`. Only the positions
/// (`u`, `φ`, `G`) of each slice enter the action; velocities are the
/// midpoint differences between slices.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dt: f64,
    pub slices: Vec<MicropolarState>,
}

impl Trajectory {
    /// `self + s * other`, slice by slice.
    pub fn axpy(&self, s: f64, other: &Trajectory) -> Trajectory {
        let slices = self
            .slices
            .iter()
            .zip(&other.slices)
            .map(|(a, b)| {
                let mut out = a.clone();
                out.displacement.axpy(s, &b.displacement);
                out.microrotation.axpy(s, &b.microrotation);
                for i in 0..3 {
                    for j in 0..3 {
                        out.macro_gradient[i][j] += s * b.macro_gradient[i][j];
                    }
                }
                out
            })
            .collect();
        Trajectory {
            dt: self.dt,
            slices,
        }
    }

    pub fn scaled(&self, s: f64) -> Trajectory {
        Trajectory {
            dt: self.dt,
            slices: self.slices.iter().map(|x| x.scaled(s)).collect(),
        }
    }
}

/// `S = Σ_n dt Σ_p h³ [½ρ|Δu/dt|² + ½J|Δφ/dt|²] - Σ_n dt ½(W_n + W_{n+1})`,
/// midpoint velocities and trapezoidal potential energy.
pub fn discrete_action(l: &LagrangianSpec, traj: &Trajectory) -> Result<f64> {
    if traj.slices.len() < 2 {
        return Err(Error::InvalidArgument(
            "the action needs at least two time slices".into(),
        ));
    }
    let m = l.material();
    let dt = traj.dt;
    let h3 = traj.slices[0].grid().cell_volume();
    let potentials: Vec<f64> = traj
        .slices
        .iter()
        .map(|s| strain_energy(&linearized_strain(s), m))
        .collect();
    let mut action = 0.0;
    for (n, pair) in traj.slices.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        let sq_diff = |x: &VectorField, y: &VectorField| {
            x.data().iter().zip(y.data()).map(|(p, q)| (q - p) * (q - p)).sum::<f64>()
        };
        let kinetic = 0.5 * h3 / (dt * dt)
            * (m.rho * sq_diff(&a.displacement, &b.displacement)
                + m.j * sq_diff(&a.microrotation, &b.microrotation));
        action += dt * (kinetic - 0.5 * (potentials[n] + potentials[n + 1]));
    }
    Ok(action)
}

/// Which residual [`slice_residuals`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualVariant {
    Exact,
    /// Negative control: the `e ∧ Σ` coupling enters the moment residual with
    /// the wrong sign.
    FlippedCoupling,
}

/// Force and moment residuals at interior slice `n`, through the form
/// language (`ω = 0`, `e = dX`), with accelerations from second differences.
/// Returns the `dV` coefficient and the axial reading.
pub fn slice_residuals(
    l: &LagrangianSpec,
    traj: &Trajectory,
    n: usize,
    variant: ResidualVariant,
) -> Result<(VectorField, VectorField)> {
    if n == 0 || n + 1 >= traj.slices.len() {
        return Err(Error::InvalidArgument(format!(
            "slice {n} is not interior to a trajectory of {} slices",
            traj.slices.len()
        )));
    }
    let (prev, cur, next) = (&traj.slices[n - 1], &traj.slices[n], &traj.slices[n + 1]);
    let grid = *cur.grid();
    let inv = 1.0 / (traj.dt * traj.dt);
    let second = |a: &VectorField, b: &VectorField, c: &VectorField| {
        let mut out = c.clone();
        out.axpy(-2.0, b);
        out.axpy(1.0, a);
        out.scaled(inv)
    };
    let acc = second(&prev.displacement, &cur.displacement, &next.displacement);
    let sacc = second(&prev.microrotation, &cur.microrotation, &next.microrotation);
    let cf = conjugate_forms(l, cur);
    let (pd, qd) = momentum_rates(l.material(), &acc, &sacc, &Sources::none(grid));
    let w = Connection::zero(grid);
    let force = frame_volume_coefficients(&force_balance_residual(&cf, &w, &pd)?)?;
    let coupling = match variant {
        ResidualVariant::Exact => 1.0,
        ResidualVariant::FlippedCoupling => -1.0,
    };
    let moment = moment_axial(&moment_residual_signed(
        &cf,
        &Coframe::identity(grid),
        &w,
        &qd,
        coupling,
    )?)?;
    Ok((force, moment))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientEntry {
    pub eps: f64,
    /// `(S[q + ε d] - S[q - ε d]) / 2ε`.
    pub finite_difference: f64,
    /// `Σ_n h³ dt ⟨residual_n, d_n⟩`.
    pub analytic: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradientReport {
    pub entries: Vec<GradientEntry>,
    pub min_relative_error: f64,
    pub passed: bool,
}

/// Checks that the form residuals are the functional gradient of
/// [`discrete_action`] along `direction`.
///
/// The direction must vanish on the first and last slice (no boundary terms)
/// and carry no macro gradient.
pub fn functional_gradient_check(
    l: &LagrangianSpec,
    traj: &Trajectory,
    direction: &Trajectory,
    eps: &[f64],
) -> Result<GradientReport> {
    functional_gradient_check_with(l, traj, direction, eps, |n| {
        slice_residuals(l, traj, n, ResidualVariant::Exact)
    })
}

/// [`functional_gradient_check`] with a caller-supplied residual per interior slice.
pub fn functional_gradient_check_with(
    l: &LagrangianSpec,
    traj: &Trajectory,
    direction: &Trajectory,
    eps: &[f64],
    residual: impl Fn(usize) -> Result<(VectorField, VectorField)>,
) -> Result<GradientReport> {
    let k = traj.slices.len();
    if direction.slices.len() != k || k < 3 {
        return Err(Error::InvalidArgument(
            "direction and trajectory need the same number (at least 3) of slices".into(),
        ));
    }
    if eps.is_empty() {
        return Err(Error::InvalidArgument("empty epsilon list".into()));
    }
    for (n, d) in direction.slices.iter().enumerate() {
        if d.grid() != traj.slices[n].grid() {
            return Err(Error::GridMismatch);
        }
        if d.macro_gradient.iter().flatten().any(|&v| v != 0.0) {
            return Err(Error::InvalidArgument(
                "direction must not carry a macro gradient".into(),
            ));
        }
        let end = n == 0 || n + 1 == k;
        if end && (d.displacement.max_abs() != 0.0 || d.microrotation.max_abs() != 0.0) {
            return Err(Error::InvalidArgument(
                "direction must vanish on the first and last slice".into(),
            ));
        }
    }

    let h3 = traj.slices[0].grid().cell_volume();
    let mut analytic = 0.0;
    for n in 1..k - 1 {
        let (rf, rm) = residual(n)?;
        let d = &direction.slices[n];
        let dot = |a: &VectorField, b: &VectorField| {
            a.data().iter().zip(b.data()).map(|(x, y)| x * y).sum::<f64>()
        };
        analytic += h3 * traj.dt * (dot(&rf, &d.displacement) + dot(&rm, &d.microrotation));
    }

    let mut entries = Vec::with_capacity(eps.len());
    for &e in eps {
        let plus = discrete_action(l, &traj.axpy(e, direction))?;
        let minus = discrete_action(l, &traj.axpy(-e, direction))?;
        let fd = (plus - minus) / (2.0 * e);
        let scale = fd.abs().max(analytic.abs());
        let relative_error = if scale == 0.0 {
            0.0
        } else {
            (fd - analytic).abs() / scale
        };
        entries.push(GradientEntry {
            eps: e,
            finite_difference: fd,
            analytic,
            relative_error,
        });
    }
    let min_relative_error = entries
        .iter()
        .map(|e| e.relative_error)
        .fold(f64::INFINITY, f64::min);
    Ok(GradientReport {
        entries,
        min_relative_error,
        passed: min_relative_error <= GRADIENT_TOLERANCE,
    })
}
