use super::{accelerations, MaterialParams, Sources};
use crate::error::{Error, Result};
use crate::grid_fields::VectorField;
use crate::kinematics::MicropolarState;

/// Kick-drift-kick velocity Verlet for the two balance laws.
///
/// The integrator owns the state so the acceleration of the current
/// configuration can be reused by the next step: one force evaluation per
/// step.
#[derive(Debug, Clone)]
pub struct Leapfrog {
    state: MicropolarState,
    material: MaterialParams,
    sources: Sources,
    dt: f64,
    steps: usize,
    accel: Option<(VectorField, VectorField)>,
}

impl Leapfrog {
    /// Validates the material and refuses `dt` above [`MaterialParams::cfl_bound`].
    pub fn new(state: MicropolarState, material: MaterialParams, sources: Sources, dt: f64) -> Result<Self> {
        material.validate()?;
        if sources.force.grid() != state.grid() || sources.couple.grid() != state.grid() {
            return Err(Error::GridMismatch);
        }
        let bound = material.cfl_bound(state.grid().spacing());
        if !(dt > 0.0 && dt <= bound) {
            return Err(Error::CflViolation { dt, bound });
        }
        Ok(Self {
            state,
            material,
            sources,
            dt,
            steps: 0,
            accel: None,
        })
    }

    pub fn state(&self) -> &MicropolarState {
        &self.state
    }

    /// Mutable access drops the cached acceleration.
    pub fn state_mut(&mut self) -> &mut MicropolarState {
        self.accel = None;
        &mut self.state
    }

    pub fn into_state(self) -> MicropolarState {
        self.state
    }

    pub fn material(&self) -> &MaterialParams {
        &self.material
    }

    pub fn sources(&self) -> &Sources {
        &self.sources
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps_taken(&self) -> usize {
        self.steps
    }

    pub fn time(&self) -> f64 {
        self.steps as f64 * self.dt
    }

    /// `(ü, φ̈)` at the current configuration.
    pub fn acceleration(&mut self) -> &(VectorField, VectorField) {
        if self.accel.is_none() {
            self.accel = Some(accelerations(&self.state, &self.material, &self.sources));
        }
        self.accel.as_ref().expect("just filled")
    }

    /// Negates both velocities; positions, and so the cached acceleration, are unchanged.
    pub fn reverse(&mut self) {
        self.state.velocity = self.state.velocity.scaled(-1.0);
        self.state.spin = self.state.spin.scaled(-1.0);
    }

    pub fn step(&mut self) -> Result<()> {
        let half = 0.5 * self.dt;
        let (a, b) = self.acceleration().clone();
        let st = &mut self.state;
        st.velocity.axpy(half, &a);
        st.spin.axpy(half, &b);
        st.displacement.axpy(self.dt, &st.velocity);
        st.microrotation.axpy(self.dt, &st.spin);
        let (a, b) = accelerations(st, &self.material, &self.sources);
        st.velocity.axpy(half, &a);
        st.spin.axpy(half, &b);
        self.steps += 1;
        if !st.is_finite() {
            self.accel = None;
            return Err(Error::NonFinite(self.steps));
        }
        self.accel = Some((a, b));
        Ok(())
    }

    /// Takes `n` steps, calling `observe` after each with the step count.
    pub fn run(&mut self, n: usize, mut observe: impl FnMut(usize, &MicropolarState)) -> Result<()> {
        for _ in 0..n {
            self.step()?;
            observe(self.steps, &self.state);
        }
        Ok(())
    }
}

/// One leapfrog step as a pure state transition (two force evaluations).
pub fn step(
    state: &MicropolarState,
    material: &MaterialParams,
    sources: &Sources,
    dt: f64,
) -> Result<MicropolarState> {
    let mut lf = Leapfrog::new(state.clone(), *material, sources.clone(), dt)?;
    lf.step()?;
    Ok(lf.into_state())
}
