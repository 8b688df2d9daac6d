//! Semidiscrete field on a node-centred grid and its symplectic evolution.
//!
//! The field is sampled at `x_i = x_min + i·dx`, `i = 0..n`, with
//! homogeneous Dirichlet values at both ends. Every oscillator sits on a
//! node `i_J` and acts through a discrete delta,
//!
//! ```text
//! ψ̈_i = (ψ_{i+1} − 2ψ_i + ψ_{i−1})/dx² − m²ψ_i + Σ_J [i = i_J] F_J(ψ_{i_J})/dx,
//! ```
//!
//! which is the Hamiltonian flow of the discrete energy in [`hamiltonian`].

mod initial;
mod integrator;
mod manifold;
mod norms;
mod series;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::ModelSpec;
use crate::solitary::SolitaryError;

pub use initial::{gaussian_perturbation, smooth_bump, solitary_state, PerturbationSpec};
pub use integrator::{evolve, step, Evolution, Observe, Stepper, DEFAULT_CFL};
pub use manifold::{dist_to_manifold, ManifoldDistance};
pub use norms::{a_priori_bound_sq, charge, energy_norm, energy_norm_sq, hamiltonian, local_seminorm, metric_dist, Seminorm};
pub use series::ObserverSeries;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("domain [{x_min}, {x_max}] must strictly contain the oscillators [{first}, {last}]")]
    BadDomain { x_min: f64, x_max: f64, first: f64, last: f64 },
    #[error("grid spacing target must be positive, got {0}")]
    BadSpacing(f64),
    #[error("no spacing <= {dx_target} puts every oscillator on a node; adjust positions or the target")]
    NoCommensurateGrid { dx_target: f64 },
    #[error("CFL violated: |dt| = {dt} must be below dx = {dx}")]
    Cfl { dt: f64, dx: f64 },
    #[error("non-finite field value at node {node} (t = {t})")]
    NonFinite { node: usize, t: f64 },
    #[error("state has {got} samples, grid has {expected}")]
    StateLength { expected: usize, got: usize },
    #[error("final time must be finite and nonnegative, got {0}")]
    BadTime(f64),
    #[error("observe_every must be at least 1")]
    BadObserveInterval,
    #[error("seminorm radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("oscillator {index} at {position} is not on a grid node")]
    Misaligned { index: usize, position: f64 },
    #[error("frequency grid is empty or leaves (-m, m)")]
    BadOmegaGrid,
    #[error("profile solve failed at every frequency of the grid (last error: {0})")]
    AllSolvesFailed(SolitaryError),
    #[error("oscillator count mismatch: grid has {grid}, model has {model}")]
    ModelMismatch { grid: usize, model: usize },
}

/// Uniform node-centred grid with the oscillator node indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub dx: f64,
    pub count: usize,
    pub oscillator_nodes: Vec<usize>,
}

impl Grid {
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.count - 1)
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.x(i))
    }

    /// Index of the node closest to `x`, clamped to the grid.
    pub fn nearest_node(&self, x: f64) -> usize {
        let i = ((x - self.x_min) / self.dx).round();
        i.clamp(0.0, (self.count - 1) as f64) as usize
    }

    /// Checks that `model`'s oscillators sit on this grid's oscillator nodes.
    pub fn check_model(&self, model: &ModelSpec) -> Result<(), SimError> {
        if model.len() != self.oscillator_nodes.len() {
            return Err(SimError::ModelMismatch { grid: self.oscillator_nodes.len(), model: model.len() });
        }
        for (j, (osc, &node)) in model.oscillators().iter().zip(&self.oscillator_nodes).enumerate() {
            if (self.x(node) - osc.position).abs() > 1e-9 * self.dx.max(osc.position.abs() * 1e-3) {
                return Err(SimError::Misaligned { index: j + 1, position: osc.position });
            }
        }
        Ok(())
    }
}

const RATIO_TOL: f64 = 1e-12;

fn near_integer(r: f64) -> bool {
    (r - r.round()).abs() <= RATIO_TOL * r.abs().max(1.0)
}

/// Chooses the largest `dx ≤ dx_target` that puts every oscillator on a
/// node, with the lattice anchored at `X_1`. The domain is widened to the
/// nearest nodes outside `[x_min, x_max]`.
pub fn build_grid(model: &ModelSpec, x_min: f64, x_max: f64, dx_target: f64) -> Result<Grid, SimError> {
    let pos = model.positions();
    let (first, last) = (pos[0], pos[pos.len() - 1]);
    if !(x_min < first && x_max > last) || !x_min.is_finite() || !x_max.is_finite() {
        return Err(SimError::BadDomain { x_min, x_max, first, last });
    }
    if !(dx_target > 0.0 && dx_target.is_finite()) {
        return Err(SimError::BadSpacing(dx_target));
    }
    let gaps: Vec<f64> = pos.windows(2).map(|w| w[1] - w[0]).collect();
    let dx = match gaps.first() {
        None => dx_target,
        Some(&g0) => {
            let k0 = ((g0 / dx_target) - 1e-9).ceil().max(1.0) as usize;
            (k0..k0.saturating_mul(1000).max(k0 + 1000))
                .map(|k| g0 / k as f64)
                .find(|&dx| gaps.iter().all(|&g| near_integer(g / dx)))
                .ok_or(SimError::NoCommensurateGrid { dx_target })?
        }
    };
    let left = (((first - x_min) / dx) - 1e-9).ceil().max(1.0) as usize;
    let right = (((x_max - first) / dx) - 1e-9).ceil() as usize;
    let mut oscillator_nodes = Vec::with_capacity(pos.len());
    for &x in &pos {
        oscillator_nodes.push(left + ((x - first) / dx).round() as usize);
    }
    let count = (left + right + 1).max(oscillator_nodes[pos.len() - 1] + 2);
    Ok(Grid { x_min: first - left as f64 * dx, dx, count, oscillator_nodes })
}

/// Field and momentum samples at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub psi: Vec<Complex64>,
    pub pi: Vec<Complex64>,
    pub t: f64,
}

impl FieldState {
    pub fn zeros(grid: &Grid) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); grid.count];
        Self { psi: z.clone(), pi: z, t: 0.0 }
    }

    /// Samples `ψ(x)`, `π(x)` at the nodes; boundary nodes are set to zero.
    pub fn from_fn(grid: &Grid, psi: impl Fn(f64) -> Complex64, pi: impl Fn(f64) -> Complex64) -> Self {
        let mut s = Self {
            psi: grid.nodes().map(&psi).collect(),
            pi: grid.nodes().map(&pi).collect(),
            t: 0.0,
        };
        s.enforce_boundary();
        s
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    pub fn check_grid(&self, grid: &Grid) -> Result<(), SimError> {
        for got in [self.psi.len(), self.pi.len()] {
            if got != grid.count {
                return Err(SimError::StateLength { expected: grid.count, got });
            }
        }
        Ok(())
    }

    pub fn enforce_boundary(&mut self) {
        let zero = Complex64::new(0.0, 0.0);
        for v in [&mut self.psi, &mut self.pi] {
            if let Some(first) = v.first_mut() {
                *first = zero;
            }
            if let Some(last) = v.last_mut() {
                *last = zero;
            }
        }
    }

    pub fn rotated(&self, theta: f64) -> Self {
        let rot = Complex64::from_polar(1.0, theta);
        Self {
            psi: self.psi.iter().map(|v| v * rot).collect(),
            pi: self.pi.iter().map(|v| v * rot).collect(),
            t: self.t,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            psi: self.psi.iter().map(|v| v.conj()).collect(),
            pi: self.pi.iter().map(|v| v.conj()).collect(),
            t: self.t,
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self {
            psi: self.psi.iter().zip(&other.psi).map(|(a, b)| a - b).collect(),
            pi: self.pi.iter().zip(&other.pi).map(|(a, b)| a - b).collect(),
            t: self.t,
        }
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self {
            psi: self.psi.iter().zip(&other.psi).map(|(a, b)| a + b).collect(),
            pi: self.pi.iter().zip(&other.pi).map(|(a, b)| a + b).collect(),
            t: self.t,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            psi: self.psi.iter().map(|v| v * factor).collect(),
            pi: self.pi.iter().map(|v| v * factor).collect(),
            t: self.t,
        }
    }

    /// Field values at the oscillator nodes.
    pub fn at_oscillators(&self, grid: &Grid) -> Vec<Complex64> {
        grid.oscillator_nodes.iter().map(|&i| self.psi[i]).collect()
    }

    pub fn max_abs_psi(&self) -> f64 {
        self.psi.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// CSV snapshot with columns `x, re_psi, im_psi, re_pi, im_pi`.
    pub fn write_csv<W: std::io::Write>(&self, grid: &Grid, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "re_psi", "im_psi", "re_pi", "im_pi"])?;
        for i in 0..self.len() {
            let (p, q) = (self.psi[i], self.pi[i]);
            w.write_record(
                [grid.x(i), p.re, p.im, q.re, q.im].iter().map(|v| format!("{v:.16e}")),
            )?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a snapshot written by [`FieldState::write_csv`]; returns the
    /// node coordinates alongside the state.
    pub fn read_csv<R: std::io::Read>(input: R) -> csv::Result<(Vec<f64>, Self)> {
        let mut r = csv::Reader::from_reader(input);
        let (mut xs, mut psi, mut pi) = (Vec::new(), Vec::new(), Vec::new());
        for rec in r.deserialize::<(f64, f64, f64, f64, f64)>() {
            let (x, a, b, c, d) = rec?;
            xs.push(x);
            psi.push(Complex64::new(a, b));
            pi.push(Complex64::new(c, d));
        }
        Ok((xs, Self { psi, pi, t: 0.0 }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::OscillatorSpec;
    use std::f64::consts::PI;

    fn model_at(positions: &[f64]) -> ModelSpec {
        ModelSpec::new(1.0, positions.iter().map(|&x| OscillatorSpec::new(x, vec![0.0, -2.0, 1.0])).collect()).unwrap()
    }

    #[test]
    fn single_oscillator_grid() {
        let g = build_grid(&model_at(&[0.0]), -10.0, 10.0, 0.01).unwrap();
        assert_eq!(g.dx, 0.01);
        assert_eq!(g.oscillator_nodes, vec![1000]);
        assert!(g.x(1000).abs() < 1e-12 * g.dx);
        assert_eq!(g.count, 2001);
    }

    #[test]
    fn commensurate_spacing() {
        // largest g/k below the target
        let g = build_grid(&model_at(&[0.0, 0.2]), -5.0, 5.0, 0.03).unwrap();
        assert!((g.dx - 0.2 / 7.0).abs() < 1e-15);
        assert_eq!(g.oscillator_nodes[1] - g.oscillator_nodes[0], 7);
        let g = build_grid(&model_at(&[0.0, 0.2]), -5.0, 5.0, 0.02).unwrap();
        assert!((g.dx - 0.02).abs() < 1e-15);
        assert_eq!(g.oscillator_nodes[1] - g.oscillator_nodes[0], 10);
        assert!((g.x(g.oscillator_nodes[1]) - 0.2).abs() <= 1e-12 * g.dx);

        let g = build_grid(&model_at(&[0.0, PI]), -5.0, 8.0, 0.01).unwrap();
        let k = (PI / g.dx).round();
        assert!((g.dx - PI / k).abs() < 1e-15 && g.dx <= 0.01);
        assert_eq!(k, 315.0);
        assert!((g.x(g.oscillator_nodes[1]) - PI).abs() <= 1e-12);

        // 0.2/8 = 0.025 also divides 0.3
        let g = build_grid(&model_at(&[0.0, 0.2, 0.5]), -2.0, 2.0, 0.03).unwrap();
        assert!((g.dx - 0.025).abs() < 1e-15);
        g.check_model(&model_at(&[0.0, 0.2, 0.5])).unwrap();
    }

    #[test]
    fn incommensurate_gaps_fail() {
        let m = model_at(&[0.0, 1.0, 1.0 + 2f64.sqrt()]);
        assert!(matches!(build_grid(&m, -3.0, 5.0, 0.05), Err(SimError::NoCommensurateGrid { .. })));
    }

    #[test]
    fn domain_must_contain_oscillators() {
        assert!(matches!(build_grid(&model_at(&[0.0]), 0.0, 5.0, 0.1), Err(SimError::BadDomain { .. })));
        assert!(matches!(build_grid(&model_at(&[0.0]), -1.0, 5.0, -0.1), Err(SimError::BadSpacing(_))));
        let g = build_grid(&model_at(&[0.0]), -0.05, 0.05, 0.1).unwrap();
        assert!(g.oscillator_nodes[0] >= 1 && g.oscillator_nodes[0] + 1 < g.count);
    }

    #[test]
    fn snapshot_csv_round_trip() {
        let g = build_grid(&model_at(&[0.0]), -1.0, 1.0, 0.1).unwrap();
        let s = FieldState::from_fn(&g, |x| Complex64::new((-x * x).exp(), x / 3.0), |x| Complex64::new(x.sin(), 0.1));
        let mut buf = Vec::new();
        s.write_csv(&g, &mut buf).unwrap();
        let (xs, back) = FieldState::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.psi, s.psi);
        assert_eq!(back.pi, s.pi);
        assert!(xs.iter().zip(g.nodes()).all(|(a, b)| a == &b));
    }
}
