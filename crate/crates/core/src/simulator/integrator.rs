use num_complex::Complex64;

use super::norms::{charge, energy_norm_sq, hamiltonian, local_seminorm};
use super::{FieldState, Grid, ObserverSeries, SimError};
use crate::model::ModelSpec;

/// Default time step as a fraction of `dx`.
pub const DEFAULT_CFL: f64 = 0.45;

const FINITE_CHECK_EVERY: usize = 32;

/// Kick-drift-kick leapfrog for a fixed model, grid and step. The
/// acceleration at the end of a step is reused as the first half-kick of
/// the next, so each step costs one force evaluation.
pub struct Stepper<'a> {
    model: &'a ModelSpec,
    grid: &'a Grid,
    dt: f64,
    acc: Vec<Complex64>,
    cached: bool,
    taken: usize,
}

impl<'a> Stepper<'a> {
    pub fn new(model: &'a ModelSpec, grid: &'a Grid, dt: f64) -> Result<Self, SimError> {
        if !(dt.abs() < grid.dx) || !dt.is_finite() {
            return Err(SimError::Cfl { dt: dt.abs(), dx: grid.dx });
        }
        grid.check_model(model)?;
        Ok(Self { model, grid, dt, acc: vec![Complex64::new(0.0, 0.0); grid.count], cached: false, taken: 0 })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn acceleration(&mut self, psi: &[Complex64]) {
        let n = self.grid.count;
        let inv_dx2 = 1.0 / (self.grid.dx * self.grid.dx);
        let m2 = self.model.mass() * self.model.mass();
        let acc = &mut self.acc;
        acc[0] = Complex64::new(0.0, 0.0);
        acc[n - 1] = Complex64::new(0.0, 0.0);
        for i in 1..n - 1 {
            acc[i] = (psi[i + 1] - 2.0 * psi[i] + psi[i - 1]) * inv_dx2 - m2 * psi[i];
        }
        let inv_dx = 1.0 / self.grid.dx;
        for (osc, &node) in self.model.oscillators().iter().zip(&self.grid.oscillator_nodes) {
            acc[node] += osc.force(psi[node]) * inv_dx;
        }
    }

    /// Advances `state` by one step in place. Only valid if `state` has not
    /// been modified outside this stepper since the previous call.
    pub fn advance(&mut self, state: &mut FieldState) -> Result<(), SimError> {
        let n = self.grid.count;
        let half = 0.5 * self.dt;
        if !self.cached {
            state.check_grid(self.grid)?;
            state.enforce_boundary();
            self.acceleration(&state.psi);
            self.cached = true;
        }
        for i in 1..n - 1 {
            state.pi[i] += half * self.acc[i];
            state.psi[i] += self.dt * state.pi[i];
        }
        self.acceleration(&state.psi);
        for i in 1..n - 1 {
            state.pi[i] += half * self.acc[i];
        }
        state.t += self.dt;
        self.taken += 1;
        let osc_bad = self.grid.oscillator_nodes.iter().find(|&&i| !is_finite(state.psi[i]));
        if let Some(&node) = osc_bad {
            return Err(SimError::NonFinite { node, t: state.t });
        }
        if self.taken.is_multiple_of(FINITE_CHECK_EVERY) {
            check_finite(state)?;
        }
        Ok(())
    }
}

fn is_finite(v: Complex64) -> bool {
    v.re.is_finite() && v.im.is_finite()
}

fn check_finite(state: &FieldState) -> Result<(), SimError> {
    let bad = state.psi.iter().zip(&state.pi).position(|(a, b)| !is_finite(*a) || !is_finite(*b));
    match bad {
        Some(node) => Err(SimError::NonFinite { node, t: state.t }),
        None => Ok(()),
    }
}

/// One leapfrog step; `dt` may be negative (backward in time).
pub fn step(model: &ModelSpec, grid: &Grid, state: &FieldState, dt: f64) -> Result<FieldState, SimError> {
    let mut stepper = Stepper::new(model, grid, dt)?;
    let mut next = state.clone();
    stepper.advance(&mut next)?;
    check_finite(&next)?;
    Ok(next)
}

/// What to record during [`evolve`].
#[derive(Debug, Clone, PartialEq)]
pub struct Observe {
    /// Sample every this many steps (≥ 1).
    pub every: usize,
    /// Radii `R` of the recorded local seminorms `‖·‖_{E,R}`.
    pub radii: Vec<f64>,
    /// Extra positions whose ψ traces are recorded (snapped to the nearest node).
    pub probes: Vec<f64>,
}

impl Observe {
    pub fn every(every: usize) -> Self {
        Self { every, radii: Vec::new(), probes: Vec::new() }
    }

    pub fn with_radii(mut self, radii: &[f64]) -> Self {
        self.radii = radii.to_vec();
        self
    }

    pub fn with_probes(mut self, probes: &[f64]) -> Self {
        self.probes = probes.to_vec();
        self
    }
}

impl Default for Observe {
    fn default() -> Self {
        Self::every(1)
    }
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub series: ObserverSeries,
    pub final_state: FieldState,
}

/// Evolves over a duration `t_final ≥ 0` with steps of size `dt` (sign
/// selects the direction). The step is shrunk slightly so that an integer
/// number of steps lands exactly on the final time; the step actually used
/// is recorded in the series.
pub fn evolve(
    model: &ModelSpec,
    grid: &Grid,
    state: &FieldState,
    t_final: f64,
    dt: f64,
    observe: &Observe,
) -> Result<Evolution, SimError> {
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(SimError::BadTime(t_final));
    }
    if observe.every == 0 {
        return Err(SimError::BadObserveInterval);
    }
    if let Some(&r) = observe.radii.iter().find(|&&r| !(r > 0.0)) {
        return Err(SimError::BadRadius(r));
    }
    state.check_grid(grid)?;
    let steps = ((t_final / dt.abs()) - 1e-9).ceil().max(0.0) as usize;
    let used_dt = if steps == 0 { dt } else { dt.signum() * t_final / steps as f64 };
    let mut stepper = Stepper::new(model, grid, used_dt)?;

    let probe_nodes: Vec<usize> = observe.probes.iter().map(|&x| grid.nearest_node(x)).collect();
    let mut series = ObserverSeries::new(
        used_dt,
        observe.every,
        observe.radii.clone(),
        grid.oscillator_nodes.len(),
        probe_nodes.iter().map(|&i| grid.x(i)).collect(),
    );
    let record = |series: &mut ObserverSeries, s: &FieldState| {
        series.push(
            s.t,
            hamiltonian(model, grid, s),
            charge(grid, s),
            energy_norm_sq(model, grid, s).sqrt(),
            observe.radii.iter().map(|&r| local_seminorm(model, grid, s, r).value).collect(),
            grid.oscillator_nodes.iter().map(|&i| s.psi[i]).collect(),
            grid.oscillator_nodes.iter().map(|&i| s.pi[i]).collect(),
            probe_nodes.iter().map(|&i| s.psi[i]).collect(),
        );
    };

    let mut current = state.clone();
    current.enforce_boundary();
    check_finite(&current)?;
    record(&mut series, &current);
    for k in 1..=steps {
        stepper.advance(&mut current)?;
        if k % observe.every == 0 {
            record(&mut series, &current);
        }
    }
    check_finite(&current)?;
    Ok(Evolution { series, final_state: current })
}
