//! Windowed spectra of a synthetic two-tone trace whose second tone decays.

use kgosc::spectral::{sample, spectrum_series, SpectrumOptions};
use kgosc::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dt = 0.05;
    let trace = sample(
        |t| Complex64::from_polar(1.0, -0.5 * t) + Complex64::from_polar((-t / 20.0).exp(), -1.3 * t),
        dt,
        4000,
    );
    let windows = [(0.0, 40.0), (50.0, 40.0), (100.0, 40.0), (150.0, 40.0)];
    for est in spectrum_series(&trace, dt, &windows, &SpectrumOptions::default()) {
        let est = est?;
        println!(
            "[{:>5.1}, {:>5.1}]: dominant {:.4}, band mass ratio {:.4}, peaks {:?}",
            est.window_start,
            est.window_start + est.window_length,
            est.dominant.unwrap_or(f64::NAN),
            est.band_mass_ratio,
            est.peaks(0.05).iter().map(|w| format!("{w:.3}")).collect::<Vec<_>>()
        );
    }
    Ok(())
}
