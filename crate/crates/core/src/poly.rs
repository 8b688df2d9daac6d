//! Dense real polynomials in ascending coefficient order.

/// Horner evaluation of `Σ c_n x^n`.
pub fn eval(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

pub fn derivative(coefficients: &[f64]) -> Vec<f64> {
    coefficients
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, &c)| n as f64 * c)
        .collect()
}

/// Drops trailing zero coefficients (the zero polynomial becomes empty).
pub fn trimmed(coefficients: &[f64]) -> &[f64] {
    let len = coefficients
        .iter()
        .rposition(|&c| c != 0.0)
        .map_or(0, |i| i + 1);
    &coefficients[..len]
}

/// Cauchy bound: every real root lies in `[-bound, bound]`.
pub fn root_bound(coefficients: &[f64]) -> f64 {
    let c = trimmed(coefficients);
    match c.split_last() {
        None | Some((_, [])) => 0.0,
        Some((&lead, rest)) => 1.0 + rest.iter().map(|a| (a / lead).abs()).fold(0.0, f64::max),
    }
}

/// All real roots in the closed interval `[lo, hi]`, ascending.
///
/// Roots are isolated recursively: between consecutive roots of the
/// derivative the polynomial is monotone, so each such piece holds at most
/// one root and bisection finds it to machine precision. Roots of even
/// multiplicity are reported when the polynomial vanishes at a critical
/// point to within `1e-12` of its local scale.
pub fn real_roots_in(coefficients: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let c = trimmed(coefficients);
    if c.len() <= 1 || lo > hi {
        return Vec::new();
    }
    if c.len() == 2 {
        let r = -c[0] / c[1];
        return if (lo..=hi).contains(&r) { vec![r] } else { Vec::new() };
    }
    let critical = real_roots_in(&derivative(c), lo, hi);
    let mut knots = Vec::with_capacity(critical.len() + 2);
    knots.push(lo);
    knots.extend(critical.iter().copied().filter(|&x| x > lo && x < hi));
    knots.push(hi);

    let scale = c.iter().map(|a| a.abs()).fold(0.0, f64::max);
    let mut roots: Vec<f64> = Vec::new();
    let push = |r: f64, roots: &mut Vec<f64>| {
        if roots.last().is_none_or(|&last| (r - last).abs() > 1e-12 * (1.0 + r.abs())) {
            roots.push(r);
        }
    };
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (eval(c, a), eval(c, b));
        if fa == 0.0 {
            push(a, &mut roots);
        }
        if fa * fb < 0.0 {
            push(bisect(c, a, b, fa), &mut roots);
        }
    }
    let f_hi = eval(c, hi);
    if f_hi == 0.0 {
        push(hi, &mut roots);
    }
    // touching roots at critical points
    for &x in &critical {
        let local = scale * (1.0 + x.abs()).powi(c.len() as i32 - 1);
        if eval(c, x).abs() <= 1e-12 * local {
            push(x, &mut roots);
        }
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + a.abs()));
    roots
}

fn bisect(c: &[f64], mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = eval(c, mid);
        if fm == 0.0 {
            return mid;
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    0.5 * (a + b)
}
