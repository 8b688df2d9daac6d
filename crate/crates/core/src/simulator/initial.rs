use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::norms::energy_norm_sq;
use super::{FieldState, Grid};
use crate::model::ModelSpec;
use crate::solitary::{profile_eval, SolitaryWave};

/// `C^∞` bump supported in `(center − half_width, center + half_width)`
/// with value 1 at the centre.
pub fn smooth_bump(x: f64, center: f64, half_width: f64) -> f64 {
    let r = (x - center) / half_width;
    if r.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - r * r)).exp()
    }
}

/// Grid samples of `(e^{iθ}φ_ω, −iω e^{iθ}φ_ω)` at `t = 0`.
pub fn solitary_state(model: &ModelSpec, grid: &Grid, wave: &SolitaryWave, phase: f64) -> FieldState {
    let rot = Complex64::from_polar(1.0, phase);
    let factor = Complex64::new(0.0, -wave.omega);
    let mut s = FieldState::zeros(grid);
    for (i, x) in grid.nodes().enumerate() {
        let v = profile_eval(model, wave, x) * rot;
        s.psi[i] = v;
        s.pi[i] = factor * v;
    }
    s.enforce_boundary();
    s
}

/// Seeded random perturbation: a sum of Gaussians in both ψ and π with
/// complex amplitudes, rescaled so that its squared energy norm is
/// `energy_fraction` times that of the base state.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationSpec {
    pub energy_fraction: f64,
    pub seed: u64,
    pub bumps: usize,
    /// Centres are drawn uniformly from `[region.0, region.1]`.
    pub region: (f64, f64),
    /// Widths are drawn uniformly from this range and floored at `10·dx`.
    pub widths: (f64, f64),
}

impl PerturbationSpec {
    /// Five bumps centred within two units of the oscillators.
    pub fn near_oscillators(model: &ModelSpec, energy_fraction: f64, seed: u64) -> Self {
        let pos = model.positions();
        Self {
            energy_fraction,
            seed,
            bumps: 5,
            region: (pos[0] - 2.0, pos[pos.len() - 1] + 2.0),
            widths: (0.25, 1.0),
        }
    }
}

pub fn gaussian_perturbation(model: &ModelSpec, grid: &Grid, base: &FieldState, spec: &PerturbationSpec) -> FieldState {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut unit = || {
        let r: f64 = rng.random::<f64>().sqrt();
        let a: f64 = rng.random::<f64>() * TAU;
        Complex64::from_polar(r, a)
    };
    let mut bumps = Vec::with_capacity(spec.bumps);
    for _ in 0..spec.bumps {
        let (a, b) = (unit(), unit());
        bumps.push((a, b));
    }
    let floor = 10.0 * grid.dx;
    let shapes: Vec<(f64, f64)> = (0..spec.bumps)
        .map(|_| {
            let c = spec.region.0 + (spec.region.1 - spec.region.0) * rng.random::<f64>();
            let w = (spec.widths.0 + (spec.widths.1 - spec.widths.0) * rng.random::<f64>()).max(floor);
            (c, w)
        })
        .collect();
    let mut noise = FieldState::zeros(grid);
    for (i, x) in grid.nodes().enumerate() {
        for ((a, b), (c, w)) in bumps.iter().zip(&shapes) {
            let g = (-((x - c) / w).powi(2)).exp();
            noise.psi[i] += a * g;
            noise.pi[i] += b * g;
        }
    }
    noise.enforce_boundary();
    let target = spec.energy_fraction * energy_norm_sq(model, grid, base);
    let have = energy_norm_sq(model, grid, &noise);
    let scale = if have > 0.0 { (target / have).sqrt() } else { 0.0 };
    let mut out = base.sum(&noise.scaled(scale));
    out.t = base.t;
    out
}
