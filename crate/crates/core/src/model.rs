//! Physical model: oscillator potentials, forces and structural checks.
//!
//! Each oscillator carries a potential that is a polynomial in `s = |ψ|²`,
//! `U_J(ψ) = u_J(|ψ|²) = Σ_n u_{J,n} s^n`. The force is the negative
//! gradient with respect to `(Re ψ, Im ψ)`, which for such potentials is
//! `F_J(ψ) = α_J(|ψ|²) ψ` with the real coefficient `α_J(s) = −2 u_J′(s)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("mass must be positive and finite, got {0}")]
    BadMass(f64),
    #[error("a model needs at least one oscillator")]
    NoOscillators,
    #[error("oscillator positions must be strictly increasing (X_{index} = {left} >= X_{next} = {right})", next = index + 1)]
    NotIncreasing { index: usize, left: f64, right: f64 },
    #[error("oscillator {index}: potential needs coefficients u_0..u_p with p >= 1, got {len}")]
    DegreeTooLow { index: usize, len: usize },
    #[error("oscillator {index}: non-finite entry in position or coefficients")]
    NonFinite { index: usize },
    #[error("oscillator {index}: potential is unbounded below (top coefficient {top} at degree {degree})")]
    UnboundedBelow { index: usize, degree: usize, top: f64 },
    #[error("linear lower bounds need sum B_J = {sum_b} < m = {mass}")]
    LowerBoundTooSteep { sum_b: f64, mass: f64 },
}

/// One point oscillator: its position and the coefficients `u_0..u_p` of
/// its potential as a polynomial in `|ψ|²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatorSpec {
    pub position: f64,
    pub coefficients: Vec<f64>,
}

impl OscillatorSpec {
    pub fn new(position: f64, coefficients: Vec<f64>) -> Self {
        Self { position, coefficients }
    }

    /// An oscillator with identically zero potential (forces switched off).
    pub fn inert(position: f64) -> Self {
        Self::new(position, vec![0.0, 0.0])
    }

    /// Degree `p_J`, read from the coefficient list length.
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn top_coefficient(&self) -> f64 {
        self.coefficients.last().copied().unwrap_or(0.0)
    }

    /// `u_J(s)`.
    pub fn potential_of_s(&self, s: f64) -> f64 {
        poly::eval(&self.coefficients, s)
    }

    /// `u_J′(s)`.
    pub fn dpotential_of_s(&self, s: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (n, &c)| acc * s + n as f64 * c)
    }

    /// `u_J″(s)`.
    pub fn d2potential_of_s(&self, s: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .skip(2)
            .rev()
            .fold(0.0, |acc, (n, &c)| acc * s + (n * (n - 1)) as f64 * c)
    }

    /// `α_J(s) = −2 u_J′(s)`.
    pub fn alpha(&self, s: f64) -> f64 {
        -2.0 * self.dpotential_of_s(s)
    }

    /// `α_J′(s) = −2 u_J″(s)`.
    pub fn alpha_prime(&self, s: f64) -> f64 {
        -2.0 * self.d2potential_of_s(s)
    }

    /// `U_J(ψ) = Σ_n u_{J,n} |ψ|^{2n}`.
    pub fn potential(&self, psi: Complex64) -> f64 {
        self.potential_of_s(psi.norm_sqr())
    }

    /// `F_J(ψ) = −∇U_J(ψ) = α_J(|ψ|²) ψ`.
    pub fn force(&self, psi: Complex64) -> Complex64 {
        psi * self.alpha(psi.norm_sqr())
    }

    /// Real 2×2 Jacobian of the force with respect to `(Re ψ, Im ψ)`,
    /// returned as the two complex columns `(∂F/∂Re ψ, ∂F/∂Im ψ)`.
    pub fn force_jacobian(&self, psi: Complex64) -> (Complex64, Complex64) {
        let s = psi.norm_sqr();
        let a = self.alpha(s);
        let ap = self.alpha_prime(s);
        let d_re = psi * (2.0 * ap * psi.re) + a;
        let d_im = psi * (2.0 * ap * psi.im) + Complex64::new(0.0, a);
        (d_re, d_im)
    }

    fn validate(&self, index: usize) -> Result<(), ModelError> {
        if !self.position.is_finite() || self.coefficients.iter().any(|c| !c.is_finite()) {
            return Err(ModelError::NonFinite { index });
        }
        if self.coefficients.len() < 2 {
            return Err(ModelError::DegreeTooLow { index, len: self.coefficients.len() });
        }
        Ok(())
    }
}

/// Mass and ordered oscillators `X_1 < … < X_N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct ModelSpec {
    mass: f64,
    oscillators: Vec<OscillatorSpec>,
}

#[derive(Serialize, Deserialize)]
struct RawModel {
    mass: f64,
    oscillators: Vec<OscillatorSpec>,
}

impl TryFrom<RawModel> for ModelSpec {
    type Error = ModelError;
    fn try_from(raw: RawModel) -> Result<Self, Self::Error> {
        ModelSpec::new(raw.mass, raw.oscillators)
    }
}

impl From<ModelSpec> for RawModel {
    fn from(m: ModelSpec) -> Self {
        RawModel { mass: m.mass, oscillators: m.oscillators }
    }
}

impl ModelSpec {
    pub fn new(mass: f64, oscillators: Vec<OscillatorSpec>) -> Result<Self, ModelError> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(ModelError::BadMass(mass));
        }
        if oscillators.is_empty() {
            return Err(ModelError::NoOscillators);
        }
        for (i, osc) in oscillators.iter().enumerate() {
            osc.validate(i + 1)?;
        }
        for (i, w) in oscillators.windows(2).enumerate() {
            if w[0].position >= w[1].position {
                return Err(ModelError::NotIncreasing {
                    index: i + 1,
                    left: w[0].position,
                    right: w[1].position,
                });
            }
        }
        Ok(Self { mass, oscillators })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn oscillators(&self) -> &[OscillatorSpec] {
        &self.oscillators
    }

    pub fn len(&self) -> usize {
        self.oscillators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.oscillators.is_empty()
    }

    pub fn positions(&self) -> Vec<f64> {
        self.oscillators.iter().map(|o| o.position).collect()
    }

    /// Same mass and positions, all potentials identically zero.
    pub fn without_forces(&self) -> Self {
        Self {
            mass: self.mass,
            oscillators: self.oscillators.iter().map(|o| OscillatorSpec::inert(o.position)).collect(),
        }
    }

    /// `Σ_J U_J(ψ_J)` for the field values at the oscillators.
    pub fn total_potential(&self, values: &[Complex64]) -> f64 {
        self.oscillators.iter().zip(values).map(|(o, &v)| o.potential(v)).sum()
    }
}

/// The recursively defined frequency bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedBounds {
    pub mu: Vec<f64>,
    pub mu_prime: Vec<f64>,
    /// `M_J = min(μ_J, μ′_J)`.
    pub m_min: Vec<f64>,
    pub lambda: f64,
}

/// `μ_1 = m, μ_{J+1} = (2p_J − 1)μ_J`; `μ′_N = m, μ′_J = (2p_{J+1} − 1)μ′_{J+1}`;
/// `M_J = min(μ_J, μ′_J)`; `Λ = max_J (2p_J − 1) M_J`.
pub fn derived_bounds(model: &ModelSpec) -> DerivedBounds {
    let m = model.mass();
    let spread: Vec<f64> = model
        .oscillators()
        .iter()
        .map(|o| (2 * o.degree()) as f64 - 1.0)
        .collect();
    let n = spread.len();

    let mut mu = vec![m; n];
    for j in 1..n {
        mu[j] = spread[j - 1] * mu[j - 1];
    }
    let mut mu_prime = vec![m; n];
    for j in (0..n.saturating_sub(1)).rev() {
        mu_prime[j] = spread[j + 1] * mu_prime[j + 1];
    }
    let m_min: Vec<f64> = mu.iter().zip(&mu_prime).map(|(a, b)| a.min(*b)).collect();
    let lambda = spread
        .iter()
        .zip(&m_min)
        .map(|(s, mm)| s * mm)
        .fold(f64::NEG_INFINITY, f64::max);
    DerivedBounds { mu, mu_prime, m_min, lambda }
}

/// Both sides of the gap inequality `Λ < sqrt(π²/|X_{J+1} − X_J|² + m²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapCheck {
    pub left: usize,
    pub gap: f64,
    pub lambda: f64,
    pub threshold: f64,
    pub margin: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatorCheck {
    pub index: usize,
    pub degree: usize,
    pub top_coefficient: f64,
    pub strictly_nonlinear: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionDetails {
    pub bounds: DerivedBounds,
    pub oscillators: Vec<OscillatorCheck>,
    pub gaps: Vec<GapCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    /// Polynomial potentials in `|ψ|²`; true for every `ModelSpec`.
    pub a1: bool,
    /// Every top coefficient positive and every degree at least two.
    pub a2: bool,
    /// Every gap is short enough for `Λ`.
    pub a3: bool,
    pub details: AssumptionDetails,
}

impl AssumptionReport {
    pub fn all_hold(&self) -> bool {
        self.a1 && self.a2 && self.a3
    }
}

pub fn check_assumptions(model: &ModelSpec) -> AssumptionReport {
    let bounds = derived_bounds(model);
    let m = model.mass();
    let oscillators: Vec<OscillatorCheck> = model
        .oscillators()
        .iter()
        .enumerate()
        .map(|(i, o)| OscillatorCheck {
            index: i + 1,
            degree: o.degree(),
            top_coefficient: o.top_coefficient(),
            strictly_nonlinear: o.top_coefficient() > 0.0 && o.degree() >= 2,
        })
        .collect();
    let gaps: Vec<GapCheck> = model
        .oscillators()
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let gap = w[1].position - w[0].position;
            let threshold = (std::f64::consts::PI.powi(2) / (gap * gap) + m * m).sqrt();
            GapCheck {
                left: i + 1,
                gap,
                lambda: bounds.lambda,
                threshold,
                margin: threshold - bounds.lambda,
                holds: bounds.lambda < threshold,
            }
        })
        .collect();
    AssumptionReport {
        a1: true,
        a2: oscillators.iter().all(|o| o.strictly_nonlinear),
        a3: gaps.iter().all(|g| g.holds),
        details: AssumptionDetails { bounds, oscillators, gaps },
    }
}

/// Constants with `U_J(ψ) ≥ A_J − B_J|ψ|²` and `Σ B_J < m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundConstants {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl LowerBoundConstants {
    pub fn sum_a(&self) -> f64 {
        self.a.iter().sum()
    }

    pub fn sum_b(&self) -> f64 {
        self.b.iter().sum()
    }

    /// Upper bound on the squared energy norm of any state with energy
    /// `energy`: `‖Ψ‖²_E ≤ 2m/(m − ΣB) · (H − ΣA)`.
    pub fn energy_norm_sq_bound(&self, mass: f64, energy: f64) -> f64 {
        2.0 * mass / (mass - self.sum_b()) * (energy - self.sum_a())
    }
}

/// Minimum of `u(s)` over `s ≥ 0` for a polynomial with positive leading
/// coefficient.
fn min_on_half_line(coefficients: &[f64]) -> f64 {
    let du = poly::derivative(coefficients);
    let bound = poly::root_bound(&du);
    poly::real_roots_in(&du, 0.0, bound)
        .into_iter()
        .map(|s| poly::eval(coefficients, s))
        .fold(poly::eval(coefficients, 0.0), f64::min)
}

pub fn lower_bound_constants(model: &ModelSpec) -> Result<LowerBoundConstants, ModelError> {
    let mut a = Vec::with_capacity(model.len());
    let mut b = Vec::with_capacity(model.len());
    for (i, osc) in model.oscillators().iter().enumerate() {
        let c = poly::trimmed(&osc.coefficients);
        match c.len() {
            0 => {
                a.push(0.0);
                b.push(0.0);
            }
            1 => {
                a.push(c[0]);
                b.push(0.0);
            }
            2 => {
                a.push(c[0]);
                b.push((-c[1]).max(0.0));
            }
            len => {
                let top = c[len - 1];
                if top < 0.0 {
                    return Err(ModelError::UnboundedBelow { index: i + 1, degree: len - 1, top });
                }
                a.push(min_on_half_line(c));
                b.push(0.0);
            }
        }
    }
    let sum_b: f64 = b.iter().sum();
    if sum_b >= model.mass() {
        return Err(ModelError::LowerBoundTooSteep { sum_b, mass: model.mass() });
    }
    Ok(LowerBoundConstants { a, b })
}

/// Largest real critical point of `u` on `s ≥ 0` (zero if there is none).
pub fn largest_critical_point(osc: &OscillatorSpec) -> f64 {
    let du = poly::derivative(&osc.coefficients);
    poly::real_roots_in(&du, 0.0, poly::root_bound(&du))
        .last()
        .copied()
        .unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn quartic(x: f64) -> OscillatorSpec {
        OscillatorSpec::new(x, vec![0.0, -2.0, 1.0])
    }

    fn with_degrees(degrees: &[usize], positions: &[f64]) -> ModelSpec {
        let osc = degrees
            .iter()
            .zip(positions)
            .map(|(&p, &x)| {
                let mut c = vec![0.0; p + 1];
                c[p] = 1.0;
                OscillatorSpec::new(x, c)
            })
            .collect();
        ModelSpec::new(1.0, osc).unwrap()
    }

    #[test]
    fn potential_examples() {
        let o = quartic(0.0);
        assert_eq!(o.potential(Complex64::new(0.0, 0.0)), 0.0);
        assert_eq!(o.potential(Complex64::new(1.0, 0.0)), -1.0);
        for theta in [0.3, 1.7, -2.9] {
            assert!((o.potential(Complex64::from_polar(1.0, theta)) + 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn force_examples() {
        let o = quartic(0.0);
        assert_eq!(o.force(Complex64::new(0.0, 0.0)), Complex64::new(0.0, 0.0));
        assert!((o.force(Complex64::new(0.5, 0.0)) - Complex64::new(1.5, 0.0)).norm() < 1e-15);
        let theta = 0.77;
        let rot = Complex64::from_polar(1.0, theta);
        assert!((o.force(rot * 0.5) - rot * 1.5).norm() < 1e-15);
    }

    #[test]
    fn derived_bounds_examples() {
        let b = derived_bounds(&with_degrees(&[2], &[0.0]));
        assert_eq!((b.mu, b.mu_prime, b.m_min, b.lambda), (vec![1.0], vec![1.0], vec![1.0], 3.0));

        let b = derived_bounds(&with_degrees(&[2, 2], &[0.0, 1.0]));
        assert_eq!(b.mu, vec![1.0, 3.0]);
        assert_eq!(b.mu_prime, vec![3.0, 1.0]);
        assert_eq!(b.m_min, vec![1.0, 1.0]);
        assert_eq!(b.lambda, 3.0);

        let b = derived_bounds(&with_degrees(&[2, 3, 2], &[0.0, 1.0, 2.0]));
        assert_eq!(b.mu, vec![1.0, 3.0, 15.0]);
        assert_eq!(b.mu_prime, vec![15.0, 3.0, 1.0]);
        assert_eq!(b.m_min, vec![1.0, 3.0, 1.0]);
        assert_eq!(b.lambda, 15.0);
    }

    #[test]
    fn gap_condition_examples() {
        let close = check_assumptions(&with_degrees(&[2, 2], &[0.0, 0.2]));
        assert!(close.a3);
        let g = &close.details.gaps[0];
        assert_eq!(g.lambda, 3.0);
        assert!((g.threshold - (PI * PI / 0.04 + 1.0).sqrt()).abs() < 1e-12);
        assert!((g.threshold - 15.74).abs() < 0.01);

        let wide = check_assumptions(&with_degrees(&[2, 2], &[0.0, PI]));
        assert!(!wide.a3);
        assert!((wide.details.gaps[0].threshold - 2f64.sqrt()).abs() < 1e-12);

        let single = check_assumptions(&with_degrees(&[2], &[0.0]));
        assert!(single.a3 && single.details.gaps.is_empty());
    }

    #[test]
    fn nonlinearity_assumption() {
        let m = ModelSpec::new(1.0, vec![quartic(0.0), OscillatorSpec::new(1.0, vec![0.0, -1.5])]).unwrap();
        let r = check_assumptions(&m);
        assert!(r.a1 && !r.a2);
        assert!(!r.details.oscillators[1].strictly_nonlinear);
        let m = ModelSpec::new(1.0, vec![OscillatorSpec::new(0.0, vec![0.0, 1.0, -1.0])]).unwrap();
        assert!(!check_assumptions(&m).a2);
    }

    #[test]
    fn lower_bound_examples() {
        let single = |c: Vec<f64>| ModelSpec::new(1.0, vec![OscillatorSpec::new(0.0, c)]).unwrap();
        let lb = lower_bound_constants(&single(vec![0.0, -2.0, 1.0])).unwrap();
        assert!((lb.a[0] + 1.0).abs() < 1e-12 && lb.b[0] == 0.0);
        let lb = lower_bound_constants(&single(vec![0.0, 0.0, 1.0])).unwrap();
        assert_eq!((lb.a[0], lb.b[0]), (0.0, 0.0));
        let lb = lower_bound_constants(&single(vec![5.0, -2.0, 1.0])).unwrap();
        assert!((lb.a[0] - 4.0).abs() < 1e-12 && lb.b[0] == 0.0);
    }

    #[test]
    fn lower_bound_failures() {
        let single = |c: Vec<f64>| ModelSpec::new(1.0, vec![OscillatorSpec::new(0.0, c)]).unwrap();
        assert!(matches!(
            lower_bound_constants(&single(vec![0.0, 1.0, -1.0])),
            Err(ModelError::UnboundedBelow { index: 1, degree: 2, .. })
        ));
        // linear and steep enough that no B < m exists
        assert!(matches!(
            lower_bound_constants(&single(vec![0.0, -1.5])),
            Err(ModelError::LowerBoundTooSteep { .. })
        ));
        let lb = lower_bound_constants(&single(vec![0.0, -0.25])).unwrap();
        assert_eq!(lb.b[0], 0.25);
    }

    #[test]
    fn model_validation() {
        assert!(matches!(ModelSpec::new(0.0, vec![quartic(0.0)]), Err(ModelError::BadMass(_))));
        assert!(matches!(ModelSpec::new(1.0, vec![]), Err(ModelError::NoOscillators)));
        assert!(matches!(
            ModelSpec::new(1.0, vec![quartic(1.0), quartic(1.0)]),
            Err(ModelError::NotIncreasing { index: 1, .. })
        ));
        assert!(matches!(
            ModelSpec::new(1.0, vec![OscillatorSpec::new(0.0, vec![1.0])]),
            Err(ModelError::DegreeTooLow { .. })
        ));
        let bad: Result<ModelSpec, _> =
            serde_json::from_str(r#"{"mass":1.0,"oscillators":[{"position":1.0,"coefficients":[0,1]},{"position":0.0,"coefficients":[0,1]}]}"#);
        assert!(bad.is_err());
    }

    fn oscillator_strategy() -> impl Strategy<Value = OscillatorSpec> {
        (1usize..=4).prop_flat_map(|p| {
            (prop::collection::vec(-3.0..3.0f64, p), 0.1..3.0f64).prop_map(|(mut c, top)| {
                c.push(top);
                OscillatorSpec::new(0.0, c)
            })
        })
    }

    proptest! {
        #[test]
        fn force_is_negative_gradient(osc in oscillator_strategy(), re in -1.5..1.5f64, im in -1.5..1.5f64) {
            let h = 1e-5;
            let psi = Complex64::new(re, im);
            let du_re = (osc.potential(psi + h) - osc.potential(psi - h)) / (2.0 * h);
            let du_im = (osc.potential(psi + Complex64::new(0.0, h)) - osc.potential(psi - Complex64::new(0.0, h))) / (2.0 * h);
            let fd = -Complex64::new(du_re, du_im);
            let f = osc.force(psi);
            prop_assert!((f - fd).norm() <= 1e-6 * f.norm().max(1.0));
        }

        #[test]
        fn force_is_equivariant(osc in oscillator_strategy(), re in -2.0..2.0f64, im in -2.0..2.0f64, theta in -PI..PI) {
            let psi = Complex64::new(re, im);
            let rot = Complex64::from_polar(1.0, theta);
            let lhs = osc.force(rot * psi);
            let rhs = rot * osc.force(psi);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
        }

        #[test]
        fn force_ratio_is_real(osc in oscillator_strategy(), re in -2.0..2.0f64, im in -2.0..2.0f64) {
            let psi = Complex64::new(re, im);
            prop_assume!(psi.norm() > 1e-6);
            let f = osc.force(psi);
            let ratio = f / psi;
            prop_assert!(ratio.im.abs() <= 1e-14 * f.norm().max(1e-300) / psi.norm() + 1e-300);
        }

        #[test]
        fn force_jacobian_matches_differences(osc in oscillator_strategy(), re in -1.5..1.5f64, im in -1.5..1.5f64) {
            let psi = Complex64::new(re, im);
            let h = 1e-6;
            let (d_re, d_im) = osc.force_jacobian(psi);
            let fd_re = (osc.force(psi + h) - osc.force(psi - h)) / (2.0 * h);
            let i_h = Complex64::new(0.0, h);
            let fd_im = (osc.force(psi + i_h) - osc.force(psi - i_h)) / (2.0 * h);
            let scale = d_re.norm().max(d_im.norm()).max(1.0);
            prop_assert!((d_re - fd_re).norm() <= 1e-5 * scale);
            prop_assert!((d_im - fd_im).norm() <= 1e-5 * scale);
        }

        #[test]
        fn bounds_are_monotone(degrees in prop::collection::vec(1usize..=4, 1..=5)) {
            let positions: Vec<f64> = (0..degrees.len()).map(|i| i as f64 * 0.1).collect();
            let b = derived_bounds(&with_degrees(&degrees, &positions));
            for w in b.mu.windows(2) { prop_assert!(w[1] >= w[0]); }
            for w in b.mu_prime.windows(2) { prop_assert!(w[1] <= w[0]); }
            for (p, mm) in degrees.iter().zip(&b.m_min) {
                prop_assert!(b.lambda >= (2 * p - 1) as f64);
                prop_assert!(*mm >= 1.0);
            }
        }

        #[test]
        fn lower_bound_certificate(osc in oscillator_strategy()) {
            let model = ModelSpec::new(1.0, vec![osc.clone()]).unwrap();
            let Ok(lb) = lower_bound_constants(&model) else {
                prop_assert!(osc.degree() == 1);
                return Ok(());
            };
            let s_max = 2.0 * largest_critical_point(&osc) + 1.0;
            for k in 0..=4000 {
                let s = s_max * k as f64 / 4000.0;
                let gap = osc.potential_of_s(s) - (lb.a[0] - lb.b[0] * s);
                prop_assert!(gap >= -1e-12 * (1.0 + osc.potential_of_s(s).abs()), "s = {s}, gap = {gap}");
            }
        }
    }
}
