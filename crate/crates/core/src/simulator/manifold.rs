use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::initial::solitary_state;
use super::norms::{metric_dist, windowed_inner};
use super::{FieldState, Grid, SimError};
use crate::model::ModelSpec;
use crate::solitary::{coupling, default_guess, kappa, solve_profile, SolitaryError, SolitaryWave};

const GOLDEN_ITERATIONS: usize = 40;

/// Nearest point of the solitary manifold found by [`dist_to_manifold`].
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldDistance {
    pub dist: f64,
    /// `None` when the zero wave is closest.
    pub best_omega: Option<f64>,
    pub wave: Option<SolitaryWave>,
    /// Global phase applied to `wave`.
    pub phase: f64,
}

struct Candidate {
    dist: f64,
    wave: SolitaryWave,
    phase: f64,
}

/// Closed-form phase fit on `[−R_max, R_max]`, then the metric distance.
fn score(model: &ModelSpec, grid: &Grid, state: &FieldState, wave: &SolitaryWave, r_max: usize) -> (f64, f64) {
    let s = solitary_state(model, grid, wave, 0.0);
    let z = windowed_inner(model, grid, &s, state, r_max as f64);
    let phase = if z.norm() > 0.0 { z.arg() } else { 0.0 };
    (metric_dist(model, grid, state, &s.rotated(phase), r_max), phase)
}

/// Amplitudes reproducing the state's values at the oscillators:
/// `Σ_K G_{JK} C_K = ψ(X_J)`.
fn guess_from_state(model: &ModelSpec, grid: &Grid, state: &FieldState, omega: f64) -> Option<Vec<Complex64>> {
    let k = kappa(model, omega).ok()?;
    let g: DMatrix<f64> = coupling(model, k);
    let lu = g.lu();
    let vals = state.at_oscillators(grid);
    let re = lu.solve(&DVector::from_iterator(vals.len(), vals.iter().map(|v| v.re)))?;
    let im = lu.solve(&DVector::from_iterator(vals.len(), vals.iter().map(|v| v.im)))?;
    Some(re.iter().zip(im.iter()).map(|(&a, &b)| Complex64::new(a, b)).collect())
}

/// Best candidate at one frequency over several starting guesses.
fn best_at(
    model: &ModelSpec,
    grid: &Grid,
    state: &FieldState,
    omega: f64,
    warm: Option<&[Complex64]>,
    r_max: usize,
) -> Result<Candidate, SolitaryError> {
    let mut guesses: Vec<Vec<Complex64>> = Vec::new();
    if let Some(g) = guess_from_state(model, grid, state, omega) {
        guesses.push(g);
    }
    if let Some(w) = warm {
        guesses.push(w.to_vec());
    }
    guesses.push(default_guess(model, omega)?);

    let mut best: Option<Candidate> = None;
    let mut last_err = None;
    for g in guesses {
        match solve_profile(model, omega, &g) {
            Ok(wave) => {
                let (dist, phase) = score(model, grid, state, &wave, r_max);
                if best.as_ref().is_none_or(|b| dist < b.dist) {
                    best = Some(Candidate { dist, wave, phase });
                }
            }
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.expect("at least one guess was tried"))
}

/// Distance from `state` to the set of solitary waves (including the zero
/// wave) in the truncated local-energy metric: a scan over `omega_grid`
/// with warm-started profile solves and a closed-form phase, followed by a
/// golden-section refinement between the neighbours of the best frequency.
pub fn dist_to_manifold(
    model: &ModelSpec,
    grid: &Grid,
    state: &FieldState,
    omega_grid: &[f64],
    r_max: usize,
) -> Result<ManifoldDistance, SimError> {
    let m = model.mass();
    if omega_grid.is_empty() || omega_grid.iter().any(|w| !(w.abs() < m)) {
        return Err(SimError::BadOmegaGrid);
    }
    state.check_grid(grid)?;

    let mut scan: Vec<Option<Candidate>> = Vec::with_capacity(omega_grid.len());
    let mut warm: Option<Vec<Complex64>> = None;
    let mut last_err = None;
    for &omega in omega_grid {
        match best_at(model, grid, state, omega, warm.as_deref(), r_max) {
            Ok(c) => {
                warm = Some(c.wave.amplitudes.clone());
                scan.push(Some(c));
            }
            Err(e) => {
                last_err = Some(e);
                scan.push(None);
            }
        }
    }
    let Some((k_best, _)) = scan
        .iter()
        .enumerate()
        .filter_map(|(k, c)| c.as_ref().map(|c| (k, c.dist)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
    else {
        return Err(SimError::AllSolvesFailed(last_err.expect("grid is not empty")));
    };
    let mut best = scan[k_best].take().expect("selected entry is present");

    if omega_grid.len() > 1 {
        let lo = omega_grid[k_best.saturating_sub(1)];
        let hi = omega_grid[(k_best + 1).min(omega_grid.len() - 1)];
        let (mut a, mut b) = (lo.min(hi), lo.max(hi));
        let warm = best.wave.amplitudes.clone();
        let eval = |w: f64| best_at(model, grid, state, w, Some(&warm), r_max).ok();
        let ratio = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - ratio * (b - a);
        let mut d = a + ratio * (b - a);
        let (mut fc, mut fd) = (eval(c), eval(d));
        let dist_of = |f: &Option<Candidate>| f.as_ref().map_or(f64::INFINITY, |c| c.dist);
        for _ in 0..GOLDEN_ITERATIONS {
            if dist_of(&fc) < dist_of(&fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - ratio * (b - a);
                fc = eval(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + ratio * (b - a);
                fd = eval(d);
            }
        }
        for cand in [fc, fd].into_iter().flatten() {
            if cand.dist < best.dist {
                best = cand;
            }
        }
    }

    let zero = FieldState::zeros(grid);
    let zero_dist = metric_dist(model, grid, state, &zero, r_max);
    if zero_dist <= best.dist {
        return Ok(ManifoldDistance { dist: zero_dist, best_omega: None, wave: None, phase: 0.0 });
    }
    Ok(ManifoldDistance { dist: best.dist, best_omega: Some(best.wave.omega), wave: Some(best.wave), phase: best.phase })
}
