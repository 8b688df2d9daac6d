//! Solitary waves `ψ(x, t) = φ_ω(x) e^{−iωt}`.
//!
//! Every solitary wave of the model has the profile
//! `φ_ω(x) = Σ_J C_J e^{−κ|x − X_J|}` with `κ = sqrt(m² − ω²)`, and the
//! amplitudes solve the nonlinear system `2κ C_J = F_J(φ_ω(X_J))`. This
//! module evaluates that system, solves it by Gauss–Newton with a U(1)
//! gauge constraint, and continues solutions in `ω`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::ModelSpec;
use crate::poly;

pub const RESIDUAL_TOL: f64 = 1e-11;
pub const ZERO_BRANCH_TOL: f64 = 1e-9;
pub const MAX_ITERATIONS: usize = 100;
const MAX_HALVINGS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolitaryError {
    #[error("frequency {omega} lies outside [-m, m] with m = {mass}")]
    OmegaOutOfRange { omega: f64, mass: f64 },
    #[error("guess has {got} amplitudes, model has {expected} oscillators")]
    GuessLength { expected: usize, got: usize },
    #[error("Newton did not converge at omega = {omega} after {iterations} iterations (residual {residual:e})")]
    NoConvergence { omega: f64, iterations: usize, residual: f64 },
    #[error("Newton converged to the zero wave at omega = {omega}")]
    ConvergedToZero { omega: f64 },
    #[error("branch continuation failed at omega = {omega} (last good omega: {last_good:?}): {source}")]
    Branch {
        omega: f64,
        last_good: Option<f64>,
        #[source]
        source: Box<SolitaryError>,
    },
    #[error("continuation step must be positive and finite, got {0}")]
    BadStep(f64),
}

/// A solitary wave: frequency, decay rate and amplitudes in gauge
/// (first nonzero amplitude real and nonnegative).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "WaveRecord", into = "WaveRecord")]
pub struct SolitaryWave {
    pub omega: f64,
    pub kappa: f64,
    pub amplitudes: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct WaveRecord {
    omega: f64,
    kappa: f64,
    amplitudes: Vec<[f64; 2]>,
}

impl From<WaveRecord> for SolitaryWave {
    fn from(r: WaveRecord) -> Self {
        Self {
            omega: r.omega,
            kappa: r.kappa,
            amplitudes: r.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
        }
    }
}

impl From<SolitaryWave> for WaveRecord {
    fn from(w: SolitaryWave) -> Self {
        Self {
            omega: w.omega,
            kappa: w.kappa,
            amplitudes: w.amplitudes.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl SolitaryWave {
    pub fn zero(model: &ModelSpec, omega: f64) -> Result<Self, SolitaryError> {
        Ok(Self {
            omega,
            kappa: kappa(model, omega)?,
            amplitudes: vec![Complex64::new(0.0, 0.0); model.len()],
        })
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.iter().all(|c| c.norm() <= ZERO_BRANCH_TOL)
    }

    pub fn rotated(&self, theta: f64) -> Self {
        let rot = Complex64::from_polar(1.0, theta);
        Self {
            amplitudes: self.amplitudes.iter().map(|c| c * rot).collect(),
            ..self.clone()
        }
    }

    /// The phase representative of the U(1) orbit.
    pub fn gauged(&self) -> Self {
        let scale = self.amplitudes.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut out = self.clone();
        if let Some(lead) = self.amplitudes.iter().find(|c| c.norm() > 1e-12 * scale && scale > 0.0) {
            let rot = lead.conj() / lead.norm();
            for c in &mut out.amplitudes {
                *c *= rot;
            }
            if let Some(first) = out.amplitudes.iter_mut().find(|c| c.norm() > 1e-12 * scale) {
                first.im = 0.0;
            }
        }
        out
    }

    pub fn amplitude_norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm()).sum()
    }
}

/// `κ(ω) = sqrt(m² − ω²)`.
pub fn kappa(model: &ModelSpec, omega: f64) -> Result<f64, SolitaryError> {
    let m = model.mass();
    if !(omega.abs() <= m) {
        return Err(SolitaryError::OmegaOutOfRange { omega, mass: m });
    }
    Ok(((m - omega) * (m + omega)).max(0.0).sqrt())
}

/// `G_{JK} = e^{−κ|X_J − X_K|}`, so that `φ(X_J) = Σ_K G_{JK} C_K`.
pub fn coupling(model: &ModelSpec, kappa: f64) -> DMatrix<f64> {
    let x = model.positions();
    DMatrix::from_fn(x.len(), x.len(), |j, k| (-kappa * (x[j] - x[k]).abs()).exp())
}

fn field_at_oscillators(green: &DMatrix<f64>, c: &[Complex64]) -> Vec<Complex64> {
    (0..c.len())
        .map(|j| (0..c.len()).map(|k| c[k] * green[(j, k)]).sum())
        .collect()
}

fn complex_residual(model: &ModelSpec, kappa: f64, green: &DMatrix<f64>, c: &[Complex64]) -> Vec<Complex64> {
    let phi = field_at_oscillators(green, c);
    model
        .oscillators()
        .iter()
        .zip(c.iter().zip(&phi))
        .map(|(osc, (&cj, &pj))| cj * (2.0 * kappa) - osc.force(pj))
        .collect()
}

/// Per oscillator, `2κC_J − F_J(Σ_K C_K e^{−κ|X_J − X_K|})` split as
/// `(Re, Im)` pairs.
pub fn amplitude_residual(model: &ModelSpec, wave: &SolitaryWave) -> Vec<f64> {
    let green = coupling(model, wave.kappa);
    complex_residual(model, wave.kappa, &green, &wave.amplitudes)
        .into_iter()
        .flat_map(|r| [r.re, r.im])
        .collect()
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

/// Unknowns are `Re C_1` followed by `(Re C_K, Im C_K)` for `K ≥ 2`; the
/// gauge `Im C_1 = 0` is built into the parametrisation.
fn unpack(z: &DVector<f64>, n: usize) -> Vec<Complex64> {
    let mut c = Vec::with_capacity(n);
    c.push(Complex64::new(z[0], 0.0));
    for k in 1..n {
        c.push(Complex64::new(z[2 * k - 1], z[2 * k]));
    }
    c
}

fn pack(c: &[Complex64]) -> DVector<f64> {
    let mut z = DVector::zeros(2 * c.len() - 1);
    z[0] = c[0].re;
    for k in 1..c.len() {
        z[2 * k - 1] = c[k].re;
        z[2 * k] = c[k].im;
    }
    z
}

fn jacobian(model: &ModelSpec, kappa: f64, green: &DMatrix<f64>, c: &[Complex64]) -> DMatrix<f64> {
    let n = c.len();
    let phi = field_at_oscillators(green, c);
    let mut jac = DMatrix::zeros(2 * n, 2 * n - 1);
    for (j, osc) in model.oscillators().iter().enumerate() {
        let (d_re, d_im) = osc.force_jacobian(phi[j]);
        for k in 0..n {
            let g = green[(j, k)];
            let delta = if j == k { 2.0 * kappa } else { 0.0 };
            // derivative of R_J with respect to Re C_K and Im C_K
            let by_re = Complex64::new(delta, 0.0) - d_re * g;
            let by_im = Complex64::new(0.0, delta) - d_im * g;
            let col_re = if k == 0 { 0 } else { 2 * k - 1 };
            jac[(2 * j, col_re)] = by_re.re;
            jac[(2 * j + 1, col_re)] = by_re.im;
            if k > 0 {
                jac[(2 * j, 2 * k)] = by_im.re;
                jac[(2 * j + 1, 2 * k)] = by_im.im;
            }
        }
    }
    jac
}

/// Solves the amplitude system at frequency `omega` from `guess`.
///
/// At `|ω| = m` only the zero wave exists and it is returned directly. A
/// run that lands on the trivial branch is reported as
/// [`SolitaryError::ConvergedToZero`].
pub fn solve_profile(model: &ModelSpec, omega: f64, guess: &[Complex64]) -> Result<SolitaryWave, SolitaryError> {
    let kap = kappa(model, omega)?;
    let n = model.len();
    if guess.len() != n {
        return Err(SolitaryError::GuessLength { expected: n, got: guess.len() });
    }
    if kap == 0.0 {
        return SolitaryWave::zero(model, omega);
    }
    let green = coupling(model, kap);

    let start = SolitaryWave { omega, kappa: kap, amplitudes: guess.to_vec() }.gauged();
    let mut z = pack(&start.amplitudes);
    let residual_of = |z: &DVector<f64>| -> Vec<f64> {
        complex_residual(model, kap, &green, &unpack(z, n))
            .into_iter()
            .flat_map(|r| [r.re, r.im])
            .collect()
    };
    let mut r = residual_of(&z);
    let mut r_norm = max_norm(&r);
    let mut iterations = 0;
    while r_norm > RESIDUAL_TOL {
        if iterations == MAX_ITERATIONS || !r_norm.is_finite() {
            return Err(SolitaryError::NoConvergence { omega, iterations, residual: r_norm });
        }
        iterations += 1;
        let jac = jacobian(model, kap, &green, &unpack(&z, n));
        let rhs = -DVector::from_vec(r.clone());
        let svd = jac.svd(true, true);
        let tol = 1e-13 * svd.singular_values.max().max(1.0);
        let Ok(step) = svd.solve(&rhs, tol) else {
            return Err(SolitaryError::NoConvergence { omega, iterations, residual: r_norm });
        };
        let mut scale = 1.0;
        let mut candidate = &z + &step;
        let mut cand_r = residual_of(&candidate);
        let mut halvings = 0;
        while max_norm(&cand_r) >= r_norm && halvings < MAX_HALVINGS {
            scale *= 0.5;
            halvings += 1;
            candidate = &z + &step * scale;
            cand_r = residual_of(&candidate);
        }
        z = candidate;
        r = cand_r;
        r_norm = max_norm(&r);
    }

    let wave = SolitaryWave { omega, kappa: kap, amplitudes: unpack(&z, n) };
    if wave.is_zero() {
        return Err(SolitaryError::ConvergedToZero { omega });
    }
    let wave = wave.gauged();
    let final_residual = max_norm(&amplitude_residual(model, &wave));
    if final_residual > RESIDUAL_TOL {
        return Err(SolitaryError::NoConvergence { omega, iterations, residual: final_residual });
    }
    Ok(wave)
}

/// A real guess from the row-sum ansatz: with `g_J = Σ_K e^{−κ|X_J − X_K|}`
/// take the smallest `s > 0` with `α_J(s) = 2κ/g_J` and `C_J = sqrt(s)/g_J`.
pub fn default_guess(model: &ModelSpec, omega: f64) -> Result<Vec<Complex64>, SolitaryError> {
    let kap = kappa(model, omega)?;
    let green = coupling(model, kap);
    Ok(model
        .oscillators()
        .iter()
        .enumerate()
        .map(|(j, osc)| {
            let g: f64 = green.row(j).sum();
            // α(s) = 2κ/g  <=>  u'(s) + κ/g = 0
            let mut du = poly::derivative(&osc.coefficients);
            if du.is_empty() {
                du.push(0.0);
            }
            du[0] += kap / g;
            let s = poly::real_roots_in(&du, 0.0, poly::root_bound(&du))
                .into_iter()
                .find(|&s| s > 1e-12)
                .unwrap_or(0.25);
            Complex64::new(s.sqrt() / g, 0.0)
        })
        .collect())
}

/// [`solve_profile`] started from [`default_guess`].
pub fn solve_profile_default(model: &ModelSpec, omega: f64) -> Result<SolitaryWave, SolitaryError> {
    solve_profile(model, omega, &default_guess(model, omega)?)
}

/// `φ_ω(x) = Σ_J C_J e^{−κ|x − X_J|}`.
pub fn profile_eval(model: &ModelSpec, wave: &SolitaryWave, x: f64) -> Complex64 {
    model
        .oscillators()
        .iter()
        .zip(&wave.amplitudes)
        .map(|(o, &c)| c * (-wave.kappa * (x - o.position).abs()).exp())
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// One-sided derivative `φ_ω′(x ± 0)` in closed form.
pub fn profile_derivative(model: &ModelSpec, wave: &SolitaryWave, x: f64, side: Side) -> Complex64 {
    model
        .oscillators()
        .iter()
        .zip(&wave.amplitudes)
        .map(|(o, &c)| {
            let d = x - o.position;
            let sign = if d > 0.0 || (d == 0.0 && side == Side::Right) { -1.0 } else { 1.0 };
            c * (sign * wave.kappa * (-wave.kappa * d.abs()).exp())
        })
        .sum()
}

/// Result of a continuation run. `collapsed_at` is set when the branch
/// reached the zero wave; `waves` then ends at the last good frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub waves: Vec<SolitaryWave>,
    pub collapsed_at: Option<f64>,
}

impl Branch {
    pub fn last_good_omega(&self) -> Option<f64> {
        self.waves.last().map(|w| w.omega)
    }
}

/// Frequencies `start, start ± step, …` up to and including `end` (within
/// 1e-9 of a step); a step longer than the interval yields `[start]`.
pub fn schedule(omega_start: f64, omega_end: f64, step: f64) -> Result<Vec<f64>, SolitaryError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(SolitaryError::BadStep(step));
    }
    let span = omega_end - omega_start;
    let count = (span.abs() / step + 1e-9).floor() as usize;
    let dir = span.signum();
    Ok((0..=count)
        .map(|k| if k == count && ((count as f64) * step - span.abs()).abs() <= 1e-9 * step { omega_end } else { omega_start + dir * step * k as f64 })
        .collect())
}

/// Natural-parameter continuation in `ω`, each solve warm-started from the
/// previous solution.
pub fn continue_branch(
    model: &ModelSpec,
    omega_start: f64,
    omega_end: f64,
    step: f64,
    guess: &[Complex64],
) -> Result<Branch, SolitaryError> {
    let m = model.mass();
    for omega in [omega_start, omega_end] {
        if !(omega.abs() < m) {
            return Err(SolitaryError::OmegaOutOfRange { omega, mass: m });
        }
    }
    let mut waves: Vec<SolitaryWave> = Vec::new();
    let mut current = guess.to_vec();
    for omega in schedule(omega_start, omega_end, step)? {
        match solve_profile(model, omega, &current) {
            Ok(wave) => {
                current = wave.amplitudes.clone();
                waves.push(wave);
            }
            Err(SolitaryError::ConvergedToZero { omega }) => {
                return Ok(Branch { waves, collapsed_at: Some(omega) });
            }
            Err(e) => {
                return Err(SolitaryError::Branch {
                    omega,
                    last_good: waves.last().map(|w| w.omega),
                    source: Box::new(e),
                });
            }
        }
    }
    Ok(Branch { waves, collapsed_at: None })
}
