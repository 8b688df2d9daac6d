use num_complex::Complex64;

use super::{FieldState, Grid};
use crate::model::{lower_bound_constants, ModelError, ModelSpec};

fn weight(grid: &Grid, i: usize) -> f64 {
    if i == 0 || i + 1 == grid.count {
        0.5 * grid.dx
    } else {
        grid.dx
    }
}

/// Energy density sums over nodes `lo..=hi`: returns
/// `(Σ w|π|², Σ_cells dx|Δψ/dx|², Σ w|ψ|²)` with cells fully inside the range.
fn quadratic_parts(grid: &Grid, state: &FieldState, lo: usize, hi: usize) -> (f64, f64, f64) {
    let (mut kin, mut grad, mut pot) = (0.0, 0.0, 0.0);
    for i in lo..=hi {
        let w = weight(grid, i);
        kin += w * state.pi[i].norm_sqr();
        pot += w * state.psi[i].norm_sqr();
    }
    for i in lo..hi {
        grad += (state.psi[i + 1] - state.psi[i]).norm_sqr();
    }
    (kin, grad / grid.dx, pot)
}

/// Discrete Hamiltonian: trapezoid-weighted `½∫(|π|² + m²|ψ|²)`, forward
/// differences for `½∫|ψ′|²`, plus `Σ_J U_J(ψ(X_J))`.
pub fn hamiltonian(model: &ModelSpec, grid: &Grid, state: &FieldState) -> f64 {
    let m2 = model.mass() * model.mass();
    let (kin, grad, pot) = quadratic_parts(grid, state, 0, grid.count - 1);
    0.5 * (kin + grad + m2 * pot) + model.total_potential(&state.at_oscillators(grid))
}

/// `Q = −∫ Im(ψ̄π) dx`.
pub fn charge(grid: &Grid, state: &FieldState) -> f64 {
    -(0..grid.count)
        .map(|i| weight(grid, i) * (state.psi[i].conj() * state.pi[i]).im)
        .sum::<f64>()
}

/// Squared energy norm `∫(|π|² + |ψ′|² + m²|ψ|²)` over the whole grid.
pub fn energy_norm_sq(model: &ModelSpec, grid: &Grid, state: &FieldState) -> f64 {
    let m2 = model.mass() * model.mass();
    let (kin, grad, pot) = quadratic_parts(grid, state, 0, grid.count - 1);
    kin + grad + m2 * pot
}

pub fn energy_norm(model: &ModelSpec, grid: &Grid, state: &FieldState) -> f64 {
    energy_norm_sq(model, grid, state).sqrt()
}

/// A priori bound on `‖Ψ(t)‖²_E` for every `t`, from the initial energy and
/// the potential lower-bound constants: `2m/(m − ΣB)·(H(Ψ₀) − ΣA)`.
pub fn a_priori_bound_sq(model: &ModelSpec, grid: &Grid, initial: &FieldState) -> Result<f64, ModelError> {
    let lb = lower_bound_constants(model)?;
    Ok(lb.energy_norm_sq_bound(model.mass(), hamiltonian(model, grid, initial)))
}

/// Local energy seminorm together with a flag raised when `[−R, R]`
/// reaches past the grid and had to be clipped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Seminorm {
    pub value: f64,
    pub clipped: bool,
}

/// `‖Ψ‖_{E,R}`: the energy norm restricted to nodes with `|x| ≤ R` and to
/// cells with both ends in the window.
pub fn local_seminorm(model: &ModelSpec, grid: &Grid, state: &FieldState, r: f64) -> Seminorm {
    assert!(r > 0.0, "seminorm radius must be positive");
    let clipped = -r < grid.x_min || r > grid.x_max();
    let last = (grid.count - 1) as f64;
    let lo = (((-r - grid.x_min) / grid.dx) - 1e-9).ceil().clamp(0.0, last);
    let hi = (((r - grid.x_min) / grid.dx) + 1e-9).floor().clamp(0.0, last);
    if lo > hi || grid.x(lo as usize).abs() > r * (1.0 + 1e-12) {
        return Seminorm { value: 0.0, clipped };
    }
    let m2 = model.mass() * model.mass();
    let (kin, grad, pot) = quadratic_parts(grid, state, lo as usize, hi as usize);
    Seminorm { value: (kin + grad + m2 * pot).sqrt(), clipped }
}

/// `Σ_{R=1}^{R_max} 2^{−R} ‖A − B‖_{E,R}`.
pub fn metric_dist(model: &ModelSpec, grid: &Grid, a: &FieldState, b: &FieldState, r_max: usize) -> f64 {
    assert!(r_max >= 1, "R_max must be at least 1");
    let diff = a.difference(b);
    (1..=r_max)
        .map(|r| 0.5f64.powi(r as i32) * local_seminorm(model, grid, &diff, r as f64).value)
        .sum()
}

/// Squared windowed norm and inner product `⟨S, Ψ⟩_{E,R}` used for the
/// closed-form phase fit.
pub(crate) fn windowed_inner(
    model: &ModelSpec,
    grid: &Grid,
    s: &FieldState,
    psi: &FieldState,
    r: f64,
) -> Complex64 {
    let m2 = model.mass() * model.mass();
    let last = (grid.count - 1) as f64;
    let lo = (((-r - grid.x_min) / grid.dx) - 1e-9).ceil().clamp(0.0, last) as usize;
    let hi = (((r - grid.x_min) / grid.dx) + 1e-9).floor().clamp(0.0, last) as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in lo..=hi {
        let w = weight(grid, i);
        acc += w * (s.pi[i].conj() * psi.pi[i] + m2 * s.psi[i].conj() * psi.psi[i]);
    }
    for i in lo..hi {
        let ds = s.psi[i + 1] - s.psi[i];
        let dp = psi.psi[i + 1] - psi.psi[i];
        acc += ds.conj() * dp / grid.dx;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::OscillatorSpec;
    use crate::simulator::build_grid;
    use crate::solitary::solve_profile_default;
    use crate::simulator::solitary_state;
    use proptest::prelude::*;

    fn single() -> ModelSpec {
        ModelSpec::new(1.0, vec![OscillatorSpec::new(0.0, vec![0.0, -2.0, 1.0])]).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_state_is_zero() {
        let m = single();
        let g = build_grid(&m, -5.0, 5.0, 0.05).unwrap();
        let z = FieldState::zeros(&g);
        assert_eq!(hamiltonian(&m, &g, &z), 0.0);
        assert_eq!(charge(&g, &z), 0.0);
        assert_eq!(local_seminorm(&m, &g, &z, 2.0).value, 0.0);
    }

    #[test]
    fn momentum_box_energy() {
        // π = 1 on [−0.5, 0.5]: ½∫π² = 0.5, the trapezoid rule gets it exactly
        // once the box edges sit between nodes symmetrically.
        let m = single().without_forces();
        for dx in [0.01, 0.005] {
            let g = build_grid(&m, -3.0, 3.0, dx).unwrap();
            let s = FieldState::from_fn(&g, |_| c(0.0, 0.0), |x| c(if x.abs() < 0.5 - 1e-9 { 1.0 } else { 0.0 }, 0.0));
            let h = hamiltonian(&m, &g, &s);
            assert!((h - 0.5).abs() <= 2.0 * dx, "dx={dx}: {h}");
        }
    }

    #[test]
    fn solitary_energy_and_charge_closed_form() {
        let m = single();
        let omega = 0.5;
        let w = solve_profile_default(&m, omega).unwrap();
        let kappa = w.kappa;
        let a2 = w.amplitudes[0].norm_sqr();
        // ∫e^{−2κ|x|} = 1/κ; ∫|φ′|² = κ²/κ·|C|².
        let field = 0.5 * a2 * (omega * omega / kappa + kappa + 1.0 / kappa);
        let h_exact = field + m.oscillators()[0].potential(w.amplitudes[0]);
        let q_exact = omega * a2 / kappa;
        assert!((q_exact - 0.32735).abs() < 1e-4);
        let mut errs = Vec::new();
        for dx in [0.02, 0.01] {
            let g = build_grid(&m, -20.0, 20.0, dx).unwrap();
            let s = solitary_state(&m, &g, &w, 0.0);
            let (h, q) = (hamiltonian(&m, &g, &s), charge(&g, &s));
            assert!((q - q_exact).abs() < 5.0 * dx * dx, "Q {q} vs {q_exact}");
            errs.push((h - h_exact).abs());
        }
        assert!(errs[0] < 1e-3 && errs[1] < errs[0] / 3.0, "{errs:?}");
    }

    #[test]
    fn conjugation_flips_charge_and_real_data_has_none() {
        let m = single();
        let g = build_grid(&m, -5.0, 5.0, 0.05).unwrap();
        let s = FieldState::from_fn(&g, |x| c((-x * x).exp(), 0.3 * x), |x| c(x.sin(), (-x * x).exp()));
        let q = charge(&g, &s);
        assert!(q.abs() > 1e-3);
        assert!((charge(&g, &s.conj()) + q).abs() < 1e-14);
        let real = FieldState::from_fn(&g, |x| c((-x * x).exp(), 0.0), |x| c(x.cos(), 0.0));
        assert_eq!(charge(&g, &real), 0.0);
    }

    #[test]
    fn seminorm_limits() {
        let m = single();
        let g = build_grid(&m, -5.0, 5.0, 0.05).unwrap();
        let s = FieldState::from_fn(&g, |x| c((-x * x).exp(), 0.1), |x| c(x.sin(), 0.0));
        let full = local_seminorm(&m, &g, &s, 50.0);
        assert!(full.clipped);
        assert!((full.value - energy_norm(&m, &g, &s)).abs() < 1e-12);
        assert!(!local_seminorm(&m, &g, &s, 2.0).clipped);
        let mut prev = 0.0;
        for r in [0.3, 1.0, 1.7, 2.5, 4.9, 6.0] {
            let v = local_seminorm(&m, &g, &s, r).value;
            assert!(v >= prev);
            prev = v;
        }
    }

    fn random_state(g: &Grid, seed: [f64; 6]) -> FieldState {
        FieldState::from_fn(
            g,
            |x| c(seed[0] * (-(x - seed[1]).powi(2)).exp(), seed[2] * (x * seed[3]).sin() * (-x * x / 4.0).exp()),
            |x| c(seed[4] * (-(x + 0.5).powi(2)).exp(), seed[5] * x * (-x * x).exp()),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn metric_axioms(a in prop::array::uniform6(-2.0f64..2.0), b in prop::array::uniform6(-2.0f64..2.0), d in prop::array::uniform6(-2.0f64..2.0)) {
            let m = single();
            let g = build_grid(&m, -6.0, 6.0, 0.1).unwrap();
            let (sa, sb, sc) = (random_state(&g, a), random_state(&g, b), random_state(&g, d));
            prop_assert_eq!(metric_dist(&m, &g, &sa, &sa, 6), 0.0);
            let ab = metric_dist(&m, &g, &sa, &sb, 6);
            prop_assert!((ab - metric_dist(&m, &g, &sb, &sa, 6)).abs() <= 1e-13 * (1.0 + ab));
            let ac = metric_dist(&m, &g, &sa, &sc, 6);
            let cb = metric_dist(&m, &g, &sc, &sb, 6);
            prop_assert!(ab <= ac + cb + 1e-12);
            prop_assert!(ab <= energy_norm(&m, &g, &sa.difference(&sb)) + 1e-12);
        }
    }
}
