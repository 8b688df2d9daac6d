//! Exact two-frequency solutions of the two-oscillator equation.
//!
//! Both families are real, time-periodic with period `2π/ω` and carry
//! frequencies `ω` and `3ω`; the cubic coupling `F(ψ) = αψ + βψ³` turns a
//! `sin ωt` oscillation into `sin ωt` and `sin 3ωt` through
//! `sin³θ = ¾ sin θ − ¼ sin 3θ`.
//!
//! - [`WideGapParams`]: two identical oscillators at `0` and `L` where
//!   `3ω` lies in the continuous spectrum and `sin(k₃x)` with `k₃L = π`
//!   fits between them.
//! - [`LinearDegParams`]: a cubic oscillator at `0` and a linear one at
//!   `L`, with `3ω < m` carried by a `sinh` profile between them.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ModelSpec, OscillatorSpec};
use crate::simulator::{FieldState, Grid, SimError};
use crate::solitary::Side;

#[derive(Debug, Error)]
pub enum CounterexampleError {
    #[error("gap L = {gap} must exceed π/(2^(3/2) m) = {min}")]
    GapTooSmall { gap: f64, min: f64 },
    #[error("no real amplitude: {0}")]
    NoSolution(String),
    #[error("degenerate parameters: 2κ(ω) = γ")]
    Degenerate,
    #[error("ω = {omega} must lie in (0, {max})")]
    OmegaOutOfRange { omega: f64, max: f64 },
    #[error("β must be nonzero")]
    ZeroBeta,
    #[error("parameters must be finite with m > 0 and L > 0")]
    BadInput,
    #[error(transparent)]
    Grid(#[from] SimError),
}

/// Field value and time derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eval {
    pub psi: f64,
    pub psi_t: f64,
}

/// `F(a sin θ) = c₁ sin θ + c₃ sin 3θ` for `F(ψ) = αψ + βψ³`.
pub fn harmonic_split(alpha: f64, beta: f64, a: f64) -> (f64, f64) {
    (alpha * a + 0.75 * beta * a.powi(3), -0.25 * beta * a.powi(3))
}

/// Potential coefficients `(0, −α/2, −β/4)` whose force is `αψ + β|ψ|²ψ`.
fn cubic_oscillator(position: f64, alpha: f64, beta: f64) -> OscillatorSpec {
    OscillatorSpec::new(position, vec![0.0, -0.5 * alpha + 0.0, -0.25 * beta + 0.0])
}

/// Common interface of the exact solutions.
pub trait ExactSolution {
    /// The two-oscillator model the solution solves.
    fn model(&self) -> ModelSpec;
    fn omega(&self) -> f64;
    /// Evaluation at `x` and `t`; at an oscillator the branch on `side`.
    fn eval_side(&self, x: f64, t: f64, side: Side) -> Eval;
    /// Closed-form one-sided `∂ψ/∂x`.
    fn dx_side(&self, x: f64, t: f64, side: Side) -> f64;
    /// Residuals of `κ² = m² − ω²` and the other dispersion identities
    /// that make each branch an exact Klein–Gordon solution.
    fn dispersion_residual(&self) -> f64;

    fn eval(&self, x: f64, t: f64) -> Eval {
        self.eval_side(x, t, Side::Right)
    }

    fn period(&self) -> f64 {
        TAU / self.omega()
    }
}

/// Wide-gap solution `ψ = A(e^{−κ|x|} + e^{−κ|x−L|}) sin ωt + B·[0≤x≤L] sin(k₃x) sin 3ωt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WideGapParams {
    pub mass: f64,
    pub gap: f64,
    pub alpha: f64,
    pub beta: f64,
    pub omega: f64,
    pub kappa: f64,
    pub k3: f64,
    pub a: f64,
    pub b: f64,
}

impl WideGapParams {
    /// Picks `ω` so that `k(3ω)L = π` and solves the two harmonic-balance
    /// equations with `A > 0`.
    pub fn construct(mass: f64, gap: f64, alpha: f64, beta: f64) -> Result<Self, CounterexampleError> {
        if ![mass, gap, alpha, beta].iter().all(|v| v.is_finite()) || mass <= 0.0 || gap <= 0.0 {
            return Err(CounterexampleError::BadInput);
        }
        let min = PI / (2f64.powf(1.5) * mass);
        if gap <= min {
            return Err(CounterexampleError::GapTooSmall { gap, min });
        }
        let k3 = PI / gap;
        let omega = (k3 * k3 + mass * mass).sqrt() / 3.0;
        let kappa = (mass * mass - omega * omega).sqrt();
        let s = 1.0 + (-kappa * gap).exp();
        if (2.0 * kappa / s - alpha) * beta <= 0.0 {
            return Err(CounterexampleError::NoSolution(format!(
                "(2κ/(1+e^(−κL)) − α)·β = {} must be positive",
                (2.0 * kappa / s - alpha) * beta
            )));
        }
        let a2 = (2.0 * kappa - alpha * s) / (0.75 * beta * s.powi(3));
        let a = a2.sqrt();
        let b = beta * a2 * a * s.powi(3) / (4.0 * k3);
        Ok(Self { mass, gap, alpha, beta, omega, kappa, k3, a, b })
    }

    fn s(&self) -> f64 {
        1.0 + (-self.kappa * self.gap).exp()
    }

    /// Residuals of the `sin ωt` and `sin 3ωt` balance at `x = 0`.
    pub fn equation_residuals(&self) -> [f64; 2] {
        let amp = self.a * self.s();
        let (c1, c3) = harmonic_split(self.alpha, self.beta, amp);
        [2.0 * self.kappa * self.a - c1, -self.k3 * self.b - c3]
    }
}

impl ExactSolution for WideGapParams {
    fn model(&self) -> ModelSpec {
        ModelSpec::new(
            self.mass,
            vec![cubic_oscillator(0.0, self.alpha, self.beta), cubic_oscillator(self.gap, self.alpha, self.beta)],
        )
        .expect("finite coefficients")
    }

    fn omega(&self) -> f64 {
        self.omega
    }

    fn eval_side(&self, x: f64, t: f64, side: Side) -> Eval {
        let f = (-self.kappa * x.abs()).exp() + (-self.kappa * (x - self.gap).abs()).exp();
        let inside = match side {
            Side::Right => (0.0..self.gap).contains(&x),
            Side::Left => x > 0.0 && x <= self.gap,
        };
        let g = if inside { (self.k3 * x).sin() } else { 0.0 };
        let w = self.omega;
        Eval {
            psi: self.a * f * (w * t).sin() + self.b * g * (3.0 * w * t).sin(),
            psi_t: w * self.a * f * (w * t).cos() + 3.0 * w * self.b * g * (3.0 * w * t).cos(),
        }
    }

    fn dx_side(&self, x: f64, t: f64, side: Side) -> f64 {
        let sgn = |y: f64| match side {
            _ if y > 0.0 => 1.0,
            _ if y < 0.0 => -1.0,
            Side::Right => 1.0,
            Side::Left => -1.0,
        };
        let k = self.kappa;
        let df = -k * sgn(x) * (-k * x.abs()).exp() - k * sgn(x - self.gap) * (-k * (x - self.gap).abs()).exp();
        let inside = match side {
            Side::Right => (0.0..self.gap).contains(&x),
            Side::Left => x > 0.0 && x <= self.gap,
        };
        let dg = if inside { self.k3 * (self.k3 * x).cos() } else { 0.0 };
        let w = self.omega;
        self.a * df * (w * t).sin() + self.b * dg * (3.0 * w * t).sin()
    }

    fn dispersion_residual(&self) -> f64 {
        let (m, w) = (self.mass, self.omega);
        let r1 = self.kappa * self.kappa - (m * m - w * w);
        let r2 = self.k3 * self.k3 - (9.0 * w * w - m * m);
        let r3 = self.k3 * self.gap - PI;
        r1.abs().max(r2.abs()).max(r3.abs())
    }
}

/// Linear-degeneration solution with a cubic oscillator at `0` and a
/// linear oscillator `F₂ = γψ` at `L`:
///
/// ```text
/// x ≤ 0:     (A + B) e^{κx} sin ωt
/// 0 ≤ x ≤ L: (A e^{−κx} + B e^{κx}) sin ωt + C sinh(κ₃x) sin 3ωt
/// x ≥ L:     (A e^{−κx} + B e^{κ(2L−x)}) sin ωt + C sinh(κ₃L) e^{−κ₃(x−L)} sin 3ωt
/// ```
///
/// with `κ = κ(ω)`, `κ₃ = κ(3ω)`. The outer `3ω` branch is the one that is
/// continuous at `L`, which fixes `γ = κ₃(1 + coth κ₃L)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearDegParams {
    pub mass: f64,
    pub gap: f64,
    pub omega: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub kappa3: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// `γ` obtained from the `3ω` jump at `L` when the outer branch is
/// normalised by `1/sinh(κ₃L)` instead of `sinh(κ₃L)`. That branch does not
/// match the interior one at `L` (unless `sinh κ₃L = 1`), so this value does
/// not give a solution; it is kept for comparison.
pub fn linear_deg_unmatched_gamma(mass: f64, gap: f64, omega: f64) -> f64 {
    let k3 = (mass * mass - 9.0 * omega * omega).sqrt();
    let sh = (k3 * gap).sinh();
    k3 * (1.0 / sh + (k3 * gap).cosh()) / sh
}

impl LinearDegParams {
    pub fn construct(mass: f64, gap: f64, omega: f64, alpha: f64, beta: f64) -> Result<Self, CounterexampleError> {
        if ![mass, gap, omega, alpha, beta].iter().all(|v| v.is_finite()) || mass <= 0.0 || gap <= 0.0 {
            return Err(CounterexampleError::BadInput);
        }
        if !(omega > 0.0 && 3.0 * omega < mass) {
            return Err(CounterexampleError::OmegaOutOfRange { omega, max: mass / 3.0 });
        }
        if beta == 0.0 {
            return Err(CounterexampleError::ZeroBeta);
        }
        let kappa = (mass * mass - omega * omega).sqrt();
        let kappa3 = (mass * mass - 9.0 * omega * omega).sqrt();
        let gamma = kappa3 * (1.0 + 1.0 / (kappa3 * gap).tanh());
        Self::with_gamma(mass, gap, omega, alpha, beta, gamma, kappa, kappa3)
    }

    #[allow(clippy::too_many_arguments)]
    fn with_gamma(
        mass: f64,
        gap: f64,
        omega: f64,
        alpha: f64,
        beta: f64,
        gamma: f64,
        kappa: f64,
        kappa3: f64,
    ) -> Result<Self, CounterexampleError> {
        let denom = 2.0 * kappa - gamma;
        if denom.abs() <= 1e-14 * kappa {
            return Err(CounterexampleError::Degenerate);
        }
        let r = gamma * (-2.0 * kappa * gap).exp() / denom;
        let a2 = (2.0 * kappa - alpha * (1.0 + r)) / (0.75 * beta * (1.0 + r).powi(3));
        if !(a2 > 0.0) {
            return Err(CounterexampleError::NoSolution(format!("A² = {a2} is not positive")));
        }
        let a = a2.sqrt();
        let b = r * a;
        let c = beta * (a + b).powi(3) / (4.0 * kappa3);
        Ok(Self { mass, gap, omega, alpha, beta, gamma, kappa, kappa3, a, b, c })
    }

    /// `B/A`.
    pub fn ratio(&self) -> f64 {
        self.b / self.a
    }

    /// Residuals of the four balance equations: `sin ωt` and `sin 3ωt` at
    /// `x = 0`, then at `x = L`.
    pub fn equation_residuals(&self) -> [f64; 4] {
        let (k, k3, l) = (self.kappa, self.kappa3, self.gap);
        let (c1, c3) = harmonic_split(self.alpha, self.beta, self.a + self.b);
        let (sh, ch) = ((k3 * l).sinh(), (k3 * l).cosh());
        [
            2.0 * k * self.a - c1,
            -k3 * self.c - c3,
            2.0 * self.b * k * (k * l).exp() - self.gamma * (self.a * (-k * l).exp() + self.b * (k * l).exp()),
            k3 * self.c * sh + k3 * self.c * ch - self.gamma * self.c * sh,
        ]
    }
}

impl ExactSolution for LinearDegParams {
    fn model(&self) -> ModelSpec {
        ModelSpec::new(
            self.mass,
            vec![cubic_oscillator(0.0, self.alpha, self.beta), OscillatorSpec::new(self.gap, vec![0.0, -0.5 * self.gamma])],
        )
        .expect("finite coefficients")
    }

    fn omega(&self) -> f64 {
        self.omega
    }

    fn eval_side(&self, x: f64, t: f64, side: Side) -> Eval {
        let (p1, p3) = self.spatial(x, side, false);
        let w = self.omega;
        Eval {
            psi: p1 * (w * t).sin() + p3 * (3.0 * w * t).sin(),
            psi_t: w * p1 * (w * t).cos() + 3.0 * w * p3 * (3.0 * w * t).cos(),
        }
    }

    fn dx_side(&self, x: f64, t: f64, side: Side) -> f64 {
        let (d1, d3) = self.spatial(x, side, true);
        d1 * (self.omega * t).sin() + d3 * (3.0 * self.omega * t).sin()
    }

    fn dispersion_residual(&self) -> f64 {
        let (m, w) = (self.mass, self.omega);
        let r1 = self.kappa * self.kappa - (m * m - w * w);
        let r3 = self.kappa3 * self.kappa3 - (m * m - 9.0 * w * w);
        r1.abs().max(r3.abs())
    }
}

impl LinearDegParams {
    /// Spatial factors of the `sin ωt` and `sin 3ωt` parts (or their
    /// `x`-derivatives) on the branch selected by `side` at a breakpoint.
    fn spatial(&self, x: f64, side: Side, derivative: bool) -> (f64, f64) {
        let (k, k3, l) = (self.kappa, self.kappa3, self.gap);
        let (a, b, c) = (self.a, self.b, self.c);
        let left = x < 0.0 || (x == 0.0 && side == Side::Left);
        let right = x > l || (x == l && side == Side::Right);
        if left {
            let e = (k * x).exp();
            if derivative { (k * (a + b) * e, 0.0) } else { ((a + b) * e, 0.0) }
        } else if right {
            let (e1, e2) = ((-k * x).exp(), (k * (2.0 * l - x)).exp());
            let e3 = c * (k3 * l).sinh() * (-k3 * (x - l)).exp();
            if derivative { (-k * (a * e1 + b * e2), -k3 * e3) } else { (a * e1 + b * e2, e3) }
        } else {
            let (e1, e2) = ((-k * x).exp(), (k * x).exp());
            if derivative {
                (-k * a * e1 + k * b * e2, c * k3 * (k3 * x).cosh())
            } else {
                (a * e1 + b * e2, c * (k3 * x).sinh())
            }
        }
    }
}

/// Worst residuals of an exact solution over the sampled times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    /// Per oscillator: `max_t |−ψ′(X+) + ψ′(X−) − F_J(ψ(X))|`.
    pub jump: Vec<f64>,
    /// Per oscillator: `max_t |ψ(X+) − ψ(X−)|`.
    pub continuity: Vec<f64>,
    /// Dispersion identities of the branches.
    pub dispersion: f64,
    pub samples: usize,
}

impl ResidualReport {
    pub fn max_jump(&self) -> f64 {
        self.jump.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_continuity(&self) -> f64 {
        self.continuity.iter().copied().fold(0.0, f64::max)
    }
}

/// Checks the jump and continuity conditions at each oscillator from
/// closed-form one-sided derivatives, at every time in `times`.
pub fn verify_exact<S: ExactSolution + ?Sized>(solution: &S, times: &[f64]) -> ResidualReport {
    let model = solution.model();
    let n = model.len();
    let mut jump = vec![0.0f64; n];
    let mut continuity = vec![0.0f64; n];
    for &t in times {
        for (j, osc) in model.oscillators().iter().enumerate() {
            let x = osc.position;
            let (l, r) = (solution.eval_side(x, t, Side::Left), solution.eval_side(x, t, Side::Right));
            continuity[j] = continuity[j].max((l.psi - r.psi).abs());
            let force = osc.force(Complex64::new(l.psi, 0.0)).re;
            let res = -solution.dx_side(x, t, Side::Right) + solution.dx_side(x, t, Side::Left) - force;
            jump[j] = jump[j].max(res.abs());
        }
    }
    ResidualReport { jump, continuity, dispersion: solution.dispersion_residual(), samples: times.len() }
}

/// `count` uniform times over one period.
pub fn period_samples<S: ExactSolution + ?Sized>(solution: &S, count: usize) -> Vec<f64> {
    let p = solution.period();
    (0..count).map(|k| p * k as f64 / count as f64).collect()
}

/// Grid samples of `(ψ(·, t), ψ_t(·, t))`.
pub fn snapshot<S: ExactSolution + ?Sized>(solution: &S, grid: &Grid, t: f64) -> Result<FieldState, CounterexampleError> {
    grid.check_model(&solution.model())?;
    let mut s = FieldState::zeros(grid);
    for (i, x) in grid.nodes().enumerate() {
        let e = solution.eval(x, t);
        s.psi[i] = Complex64::new(e.psi, 0.0);
        s.pi[i] = Complex64::new(e.psi_t, 0.0);
    }
    s.enforce_boundary();
    s.t = t;
    Ok(s)
}

/// Initial data at `t = 0`: `ψ ≡ 0` and `π = ψ_t(·, 0)`.
pub fn init_from<S: ExactSolution + ?Sized>(solution: &S, grid: &Grid) -> Result<FieldState, CounterexampleError> {
    snapshot(solution, grid, 0.0)
}
