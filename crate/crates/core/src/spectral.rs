//! Windowed time spectra of point traces and a discrete Titchmarsh oracle.
//!
//! The time transform follows `F[g](ω) = ∫ e^{iωt} g(t) dt`, so a trace
//! `e^{−iω₀t}` peaks at `+ω₀`. A window of `n` samples is tapered,
//! zero-padded and transformed; magnitudes are `|dt·Σ_k w_k g_k e^{iω t_k}|`
//! and the spectral mass `Σ|X|²·Δω/2π` equals `dt·Σ|w_k g_k|²` (Parseval).

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Windows shorter than this are rejected.
pub const MIN_SAMPLES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("window [{t0}, {t0} + {length}] is outside the trace (duration {duration})")]
    WindowOutOfRange { t0: f64, length: f64, duration: f64 },
    #[error("window holds {samples} samples, need at least {MIN_SAMPLES}")]
    TooFewSamples { samples: usize },
    #[error("sample spacing must be positive, got {0}")]
    BadSampleDt(f64),
    #[error("sequence has empty support")]
    EmptySupport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Taper {
    None,
    #[default]
    Hann,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    pub taper: Taper,
    /// Transform length as a multiple of the window length.
    pub zero_pad: usize,
    /// Half-width of the dominant band in units of `2π/T`.
    pub band_bins: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { taper: Taper::Hann, zero_pad: 4, band_bins: 2.0 }
    }
}

impl SpectrumOptions {
    pub fn with_taper(taper: Taper) -> Self {
        Self { taper, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEstimate {
    pub window_start: f64,
    pub window_length: f64,
    /// Ascending signed frequencies.
    pub freqs: Vec<f64>,
    pub magnitudes: Vec<f64>,
    /// Peak frequency, `None` for an identically zero window.
    pub dominant: Option<f64>,
    /// Mass outside `dominant ± band_half_width` over total mass (0 for a
    /// zero window).
    pub band_mass_ratio: f64,
    pub band_half_width: f64,
    /// Frequency spacing of `freqs`.
    pub d_omega: f64,
}

impl SpectrumEstimate {
    /// `Σ|X|²Δω/2π` over all frequencies.
    pub fn total_mass(&self) -> f64 {
        self.magnitudes.iter().map(|m| m * m).sum::<f64>() * self.d_omega / TAU
    }

    /// Spectral mass in `[center − half_width, center + half_width]`.
    pub fn band_mass(&self, center: f64, half_width: f64) -> f64 {
        self.freqs
            .iter()
            .zip(&self.magnitudes)
            .filter(|(w, _)| (*w - center).abs() <= half_width)
            .map(|(_, m)| m * m)
            .sum::<f64>()
            * self.d_omega
            / TAU
    }

    /// One Fourier bin, `2π/T`.
    pub fn resolution(&self) -> f64 {
        TAU / self.window_length
    }

    /// Local maxima of the magnitude with at least `min_relative` of the
    /// global peak, strongest first.
    pub fn peaks(&self, min_relative: f64) -> Vec<f64> {
        let top = self.magnitudes.iter().copied().fold(0.0, f64::max);
        if top == 0.0 {
            return Vec::new();
        }
        let m = &self.magnitudes;
        let mut found: Vec<(f64, f64)> = (1..m.len().saturating_sub(1))
            .filter(|&i| m[i] > m[i - 1] && m[i] >= m[i + 1] && m[i] >= min_relative * top)
            .map(|i| (refine(&self.freqs, m, i), m[i]))
            .collect();
        found.sort_by(|a, b| b.1.total_cmp(&a.1));
        found.into_iter().map(|(w, _)| w).collect()
    }

    pub fn summary(&self) -> SpectrumSummary {
        SpectrumSummary {
            t0: self.window_start,
            length: self.window_length,
            dominant: self.dominant,
            band_mass_ratio: self.band_mass_ratio,
        }
    }

    /// CSV with columns `freq, magnitude`.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["freq", "magnitude"])?;
        for (f, m) in self.freqs.iter().zip(&self.magnitudes) {
            w.write_record([format!("{f:.16e}"), format!("{m:.16e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub t0: f64,
    #[serde(rename = "T")]
    pub length: f64,
    pub dominant: Option<f64>,
    pub band_mass_ratio: f64,
}

/// Vertex of the parabola through the peak bin and its neighbours.
fn refine(freqs: &[f64], mags: &[f64], i: usize) -> f64 {
    if i == 0 || i + 1 >= mags.len() {
        return freqs[i];
    }
    let (a, b, c) = (mags[i - 1], mags[i], mags[i + 1]);
    let denom = a - 2.0 * b + c;
    if denom == 0.0 {
        return freqs[i];
    }
    let shift = (0.5 * (a - c) / denom).clamp(-0.5, 0.5);
    freqs[i] + shift * (freqs[i + 1] - freqs[i])
}

fn window_indices(len: usize, sample_dt: f64, t0: f64, length: f64) -> Result<(usize, usize), SpectralError> {
    if !(sample_dt > 0.0) {
        return Err(SpectralError::BadSampleDt(sample_dt));
    }
    let duration = (len.saturating_sub(1)) as f64 * sample_dt;
    let out = SpectralError::WindowOutOfRange { t0, length, duration };
    if !(t0 >= -1e-9 * sample_dt) || !(length > 0.0) {
        return Err(out);
    }
    let start = (t0 / sample_dt).round() as usize;
    let n = (length / sample_dt).round() as usize;
    if start + n > len {
        return Err(out);
    }
    if n < MIN_SAMPLES {
        return Err(SpectralError::TooFewSamples { samples: n });
    }
    Ok((start, n))
}

/// Spectrum of the samples covering `[t0, t0 + T)` with default options
/// (zero-padded ×4, band of ±2 bins). Sample `k` of the trace is at time
/// `k·sample_dt`.
pub fn time_spectrum(
    trace: &[Complex64],
    sample_dt: f64,
    t0: f64,
    length: f64,
    taper: Taper,
) -> Result<SpectrumEstimate, SpectralError> {
    time_spectrum_with(trace, sample_dt, t0, length, &SpectrumOptions::with_taper(taper))
}

pub fn time_spectrum_with(
    trace: &[Complex64],
    sample_dt: f64,
    t0: f64,
    length: f64,
    options: &SpectrumOptions,
) -> Result<SpectrumEstimate, SpectralError> {
    let (start, n) = window_indices(trace.len(), sample_dt, t0, length)?;
    let padded = n * options.zero_pad.max(1);
    let mut buf = vec![Complex64::new(0.0, 0.0); padded];
    for (k, slot) in buf.iter_mut().take(n).enumerate() {
        let w = match options.taper {
            Taper::None => 1.0,
            Taper::Hann => 0.5 * (1.0 - (TAU * k as f64 / (n - 1) as f64).cos()),
        };
        *slot = trace[start + k] * w;
    }
    // Σ_k g_k e^{+2πi jk/P} is the unnormalised inverse DFT.
    FftPlanner::<f64>::new().plan_fft_inverse(padded).process(&mut buf);

    let d_omega = TAU / (padded as f64 * sample_dt);
    let half = padded / 2;
    let mut freqs = Vec::with_capacity(padded);
    let mut magnitudes = Vec::with_capacity(padded);
    for j in (half..padded).chain(0..half) {
        let signed = if j >= half { j as f64 - padded as f64 } else { j as f64 };
        freqs.push(signed * d_omega);
        magnitudes.push(buf[j].norm() * sample_dt);
    }

    let window_length = n as f64 * sample_dt;
    let band_half_width = options.band_bins * TAU / window_length;
    let mut est = SpectrumEstimate {
        window_start: start as f64 * sample_dt,
        window_length,
        freqs,
        magnitudes,
        dominant: None,
        band_mass_ratio: 0.0,
        band_half_width,
        d_omega,
    };
    let (peak, &top) = est
        .magnitudes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("window is nonempty");
    if top > 0.0 {
        let dom = refine(&est.freqs, &est.magnitudes, peak);
        let total = est.total_mass();
        let inside = est.band_mass(dom, band_half_width);
        est.dominant = Some(dom);
        est.band_mass_ratio = ((total - inside) / total).clamp(0.0, 1.0);
    }
    Ok(est)
}

/// Spectra for each `(t0, T)` window; failures are reported per window.
pub fn spectrum_series(
    trace: &[Complex64],
    sample_dt: f64,
    windows: &[(f64, f64)],
    options: &SpectrumOptions,
) -> Vec<Result<SpectrumEstimate, SpectralError>> {
    windows
        .iter()
        .map(|&(t0, length)| time_spectrum_with(trace, sample_dt, t0, length, options))
        .collect()
}

/// `|ω̂| ≤ m + 2π/T`; false when the estimate has no dominant frequency.
pub fn in_band_check(estimate: &SpectrumEstimate, mass: f64) -> bool {
    estimate.dominant.is_some_and(|w| w.abs() <= mass + estimate.resolution())
}

/// Index support `[lo, hi]` of a finitely supported sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportBounds {
    pub lo: usize,
    pub hi: usize,
}

/// First and last index with a nonzero entry; `None` for the zero sequence.
pub fn support_bounds(seq: &[Complex64]) -> Option<SupportBounds> {
    let nonzero = |v: &Complex64| v.re != 0.0 || v.im != 0.0;
    let lo = seq.iter().position(nonzero)?;
    let hi = seq.iter().rposition(nonzero)?;
    Some(SupportBounds { lo, hi })
}

/// Full discrete convolution, length `len(f) + len(g) − 1`.
pub fn convolve(f: &[Complex64], g: &[Complex64]) -> Vec<Complex64> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Checks `inf supp(f∗g) = inf supp f + inf supp g` and the same for `sup`.
/// Returns `false` only when an endpoint product cancels exactly.
pub fn titchmarsh_check(f: &[Complex64], g: &[Complex64]) -> Result<bool, SpectralError> {
    let sf = support_bounds(f).ok_or(SpectralError::EmptySupport)?;
    let sg = support_bounds(g).ok_or(SpectralError::EmptySupport)?;
    let Some(sc) = support_bounds(&convolve(f, g)) else { return Ok(false) };
    Ok(sc.lo == sf.lo + sg.lo && sc.hi == sf.hi + sg.hi)
}

/// Samples `k·dt`, `k = 0..n` of `f`.
pub fn sample(f: impl Fn(f64) -> Complex64, sample_dt: f64, n: usize) -> Vec<Complex64> {
    (0..n).map(|k| f(k as f64 * sample_dt)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tone(omega: f64) -> impl Fn(f64) -> Complex64 {
        move |t| Complex64::from_polar(1.0, -omega * t)
    }

    #[test]
    fn pure_tone_peak_and_band() {
        let dt = 0.1;
        let trace = sample(tone(0.5), dt, 800);
        let est = time_spectrum(&trace, dt, 0.0, 80.0, Taper::Hann).unwrap();
        let dom = est.dominant.unwrap();
        assert!((dom - 0.5).abs() <= 0.02, "{dom}");
        assert!(est.band_mass_ratio <= 0.05, "{}", est.band_mass_ratio);
        assert!(est.magnitudes.iter().all(|&m| m >= 0.0));
        assert!(est.freqs.windows(2).all(|w| w[1] > w[0]));
        assert!(in_band_check(&est, 1.0));

        let negative = time_spectrum(&sample(tone(-0.5), dt, 800), dt, 0.0, 80.0, Taper::Hann).unwrap();
        assert!((negative.dominant.unwrap() + 0.5).abs() <= 0.02);
    }

    #[test]
    fn band_check_limits() {
        let dt = 0.1;
        let est = time_spectrum(&sample(tone(1.4), dt, 800), dt, 0.0, 80.0, Taper::Hann).unwrap();
        assert!(!in_band_check(&est, 1.0));
        assert!((est.resolution() - 0.0785).abs() < 1e-3);
        let at_m = time_spectrum(&sample(tone(1.0), dt, 800), dt, 0.0, 80.0, Taper::Hann).unwrap();
        assert!(in_band_check(&at_m, 1.0));
    }

    #[test]
    fn zero_trace() {
        let trace = vec![Complex64::new(0.0, 0.0); 200];
        let est = time_spectrum(&trace, 0.1, 0.0, 10.0, Taper::Hann).unwrap();
        assert!(est.dominant.is_none());
        assert!(est.magnitudes.iter().all(|&m| m == 0.0));
        assert!(!in_band_check(&est, 1.0));
    }

    #[test]
    fn window_validation() {
        let trace = sample(tone(0.5), 0.1, 100);
        assert!(matches!(time_spectrum(&trace, 0.1, 5.0, 8.0, Taper::None), Err(SpectralError::WindowOutOfRange { .. })));
        assert!(matches!(time_spectrum(&trace, 0.1, 0.0, 3.0, Taper::None), Err(SpectralError::TooFewSamples { samples: 30 })));
        assert!(matches!(time_spectrum(&trace, 0.0, 0.0, 3.0, Taper::None), Err(SpectralError::BadSampleDt(_))));
    }

    #[test]
    fn parseval_untapered() {
        let dt = 0.05;
        let trace = sample(|t| Complex64::new((0.3 * t).sin() + 0.2, (1.7 * t).cos() * (-0.01 * t).exp()), dt, 1000);
        let est = time_spectrum(&trace, dt, 5.0, 40.0, Taper::None).unwrap();
        let (start, n) = (100, 800);
        let energy: f64 = trace[start..start + n].iter().map(|v| v.norm_sqr()).sum::<f64>() * dt;
        assert!((est.total_mass() - energy).abs() <= 1e-10 * energy);
    }

    #[test]
    fn two_tone_mass_ratio() {
        let (a, b, omega) = (1.0, 0.3, 0.4);
        let dt = 0.1;
        let trace = sample(|t| Complex64::new(a * (omega * t).sin() + b * (3.0 * omega * t).sin(), 0.0), dt, 2000);
        let est = time_spectrum(&trace, dt, 0.0, 200.0, Taper::Hann).unwrap();
        let peaks = est.peaks(0.05);
        assert_eq!(peaks.len(), 4, "{peaks:?}");
        for want in [omega, -omega, 3.0 * omega, -3.0 * omega] {
            assert!(peaks.iter().any(|p| (p - want).abs() < 0.01));
        }
        let hw = est.band_half_width;
        let ratio = est.band_mass(3.0 * omega, hw) / est.band_mass(omega, hw);
        assert!((ratio / (b / a).powi(2) - 1.0).abs() < 0.2, "{ratio}");
        // A real trace splits its mass evenly between ±ω.
        assert!((est.band_mass_ratio - 0.5).abs() < 0.1);
    }

    #[test]
    fn series_of_windows() {
        let dt = 0.1;
        let stationary = sample(tone(0.5), dt, 3000);
        let wins = [(0.0, 80.0), (100.0, 80.0), (200.0, 80.0)];
        let ests: Vec<_> = spectrum_series(&stationary, dt, &wins, &SpectrumOptions::default())
            .into_iter()
            .map(Result::unwrap)
            .collect();
        for e in &ests {
            assert!((e.dominant.unwrap() - ests[0].dominant.unwrap()).abs() <= e.resolution());
        }
        let decaying = sample(|t| tone(0.5)(t) + 0.5 * (-t / 20.0).exp() * tone(-0.8)(t), dt, 3000);
        let ratios: Vec<f64> = spectrum_series(&decaying, dt, &wins, &SpectrumOptions::default())
            .into_iter()
            .map(|e| e.unwrap().band_mass_ratio)
            .collect();
        assert!(ratios[0] > ratios[1] && ratios[1] > ratios[2], "{ratios:?}");

        let mixed = spectrum_series(&stationary, dt, &[(0.0, 80.0), (290.0, 80.0)], &SpectrumOptions::default());
        assert!(mixed[0].is_ok() && mixed[1].is_err());
        assert_eq!(spectrum_series(&stationary, dt, &[(0.0, 80.0)], &SpectrumOptions::default()).len(), 1);
    }

    #[test]
    fn support_examples() {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        let mut delta5 = vec![z; 8];
        delta5[5] = o;
        assert_eq!(support_bounds(&delta5), Some(SupportBounds { lo: 5, hi: 5 }));
        assert_eq!(support_bounds(&[z; 4]), None);
        assert_eq!(support_bounds(&[z, o, z, o * 2.0, z]), Some(SupportBounds { lo: 1, hi: 3 }));
    }

    #[test]
    fn titchmarsh_examples() {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        let d2 = [z, z, o];
        let d3 = [z, z, z, o];
        assert_eq!(support_bounds(&convolve(&d2, &d3)), Some(SupportBounds { lo: 5, hi: 5 }));
        assert!(titchmarsh_check(&d2, &d3).unwrap());
        assert_eq!(titchmarsh_check(&[z, z], &d2), Err(SpectralError::EmptySupport));
    }

    #[test]
    fn endpoint_cancellation_breaks_additivity() {
        // Over ℂ the endpoint product of nonzero entries never vanishes; in
        // floating point it does once it underflows.
        let tiny = Complex64::new(1e-200, 0.0);
        let f = [tiny, Complex64::new(1.0, 0.0)];
        let g = [Complex64::new(1e-200, 0.0), Complex64::new(1.0, 0.0)];
        assert_eq!(support_bounds(&convolve(&f, &g)).unwrap().lo, 1);
        assert!(!titchmarsh_check(&f, &g).unwrap());
    }

    fn unit_disk() -> impl Strategy<Value = Complex64> {
        (0.2f64..1.0, 0.0f64..TAU).prop_map(|(r, a)| Complex64::from_polar(r, a))
    }

    fn generic_seq() -> impl Strategy<Value = Vec<Complex64>> {
        (0usize..6, prop::collection::vec(unit_disk(), 1..=8)).prop_map(|(lead, body)| {
            let mut v = vec![Complex64::new(0.0, 0.0); lead];
            v.extend(body);
            v
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn endpoint_additivity(f in generic_seq(), g in generic_seq()) {
            prop_assert!(titchmarsh_check(&f, &g).unwrap());
        }

        #[test]
        fn band_check_is_phase_invariant(theta in 0.0f64..TAU, omega in -1.5f64..1.5) {
            let dt = 0.1;
            let trace = sample(tone(omega), dt, 800);
            let rotated: Vec<_> = trace.iter().map(|v| v * Complex64::from_polar(1.0, theta)).collect();
            let a = time_spectrum(&trace, dt, 0.0, 80.0, Taper::Hann).unwrap();
            let b = time_spectrum(&rotated, dt, 0.0, 80.0, Taper::Hann).unwrap();
            prop_assert_eq!(in_band_check(&a, 1.0), in_band_check(&b, 1.0));
        }

        #[test]
        fn shift_covariance(delay in 1usize..200) {
            let dt = 0.1;
            let f = |t: f64| Complex64::new((0.7 * t).cos(), 0.3 * (1.9 * t).sin());
            let trace = sample(f, dt, 1200);
            let delayed = sample(|t| f(t - delay as f64 * dt), dt, 1200);
            let a = time_spectrum(&trace, dt, 10.0, 60.0, Taper::Hann).unwrap();
            let b = time_spectrum(&delayed, dt, 10.0 + delay as f64 * dt, 60.0, Taper::Hann).unwrap();
            let err = a.magnitudes.iter().zip(&b.magnitudes).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            prop_assert!(err <= 1e-10, "{}", err);
        }
    }
}
