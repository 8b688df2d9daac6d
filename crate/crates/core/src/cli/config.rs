//! TOML experiment configuration.
//!
//! ```toml
//! [model]
//! mass = 1.0
//! [[model.oscillators]]
//! position = 0.0
//! coefficients = [0.0, -2.0, 1.0]   # u_0, u_1, ... of U(ψ) = Σ u_n |ψ|^{2n}
//!
//! [grid]
//! x_min = -40.0
//! x_max = 40.0
//! dx_target = 0.02
//!
//! [run]
//! t_final = 20.0
//! dt = 0.009            # optional, default 0.45·dx
//! observe_every = 10
//! radii = [1.0, 2.0, 5.0]
//! r_max = 6             # optional, enables dist_to_manifold in the summary
//! probes = [0.1]        # optional extra trace positions
//!
//! [initial]
//! kind = "perturbed_solitary"   # solitary | perturbed_solitary | counterexample | file | zero
//! omega = 0.4
//! noise_amplitude = 0.1         # perturbation energy as a fraction of the wave's
//! seed = 7
//!
//! [spectral]
//! windows = [[10.0, 20.0], [40.0, 20.0]]   # (t0, T) pairs
//! taper = "hann"                           # hann | none
//!
//! [solve]
//! guess = [[0.7, 0.0]]          # optional Newton start (re, im) per oscillator
//! ```
//!
//! With `kind = "counterexample"` the `[model]` section may be omitted: the
//! two-oscillator model is derived from `family` (`wide_gap` or
//! `linear_deg`) and its parameters `mass`, `gap`, `alpha`, `beta`
//! (and `omega` for `linear_deg`).

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::counterexamples::{CounterexampleError, ExactSolution, LinearDegParams, WideGapParams};
use crate::model::ModelSpec;
use crate::spectral::Taper;

use super::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: Option<ModelSpec>,
    pub grid: Option<GridConfig>,
    pub run: Option<RunConfig>,
    pub initial: Option<InitialData>,
    pub spectral: Option<SpectralConfig>,
    pub solve: Option<SolveConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub dx_target: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub t_final: f64,
    pub dt: Option<f64>,
    #[serde(default = "one")]
    pub observe_every: usize,
    #[serde(default)]
    pub radii: Vec<f64>,
    pub r_max: Option<usize>,
    #[serde(default)]
    pub probes: Vec<f64>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    WideGap,
    LinearDeg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    Zero,
    Solitary {
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    PerturbedSolitary {
        omega: f64,
        noise_amplitude: f64,
        #[serde(default)]
        seed: u64,
    },
    Counterexample {
        family: Family,
        #[serde(flatten)]
        params: CounterexampleArgs,
    },
    File {
        path: PathBuf,
    },
}

/// Counterexample parameters; unset fields take the reference values of
/// the family.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleArgs {
    pub mass: Option<f64>,
    pub gap: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub omega: Option<f64>,
}

/// A constructed exact solution of either family.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Counterexample {
    WideGap(WideGapParams),
    LinearDeg(LinearDegParams),
}

impl Counterexample {
    pub fn construct(family: Family, args: &CounterexampleArgs) -> Result<Self, CounterexampleError> {
        let mass = args.mass.unwrap_or(1.0);
        match family {
            Family::WideGap => Ok(Self::WideGap(WideGapParams::construct(
                mass,
                args.gap.unwrap_or(std::f64::consts::PI),
                args.alpha.unwrap_or(2.0),
                args.beta.unwrap_or(-1.0),
            )?)),
            Family::LinearDeg => Ok(Self::LinearDeg(LinearDegParams::construct(
                mass,
                args.gap.unwrap_or(1.0),
                args.omega.unwrap_or(0.3),
                args.alpha.unwrap_or(0.0),
                args.beta.unwrap_or(10.0),
            )?)),
        }
    }

    pub fn solution(&self) -> &dyn ExactSolution {
        match self {
            Self::WideGap(p) => p,
            Self::LinearDeg(p) => p,
        }
    }

    pub fn gap(&self) -> f64 {
        match self {
            Self::WideGap(p) => p.gap,
            Self::LinearDeg(p) => p.gap,
        }
    }

    /// Residuals of the harmonic-balance equations.
    pub fn equation_residuals(&self) -> Vec<f64> {
        match self {
            Self::WideGap(p) => p.equation_residuals().to_vec(),
            Self::LinearDeg(p) => p.equation_residuals().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralConfig {
    #[serde(default)]
    pub windows: Vec<(f64, f64)>,
    #[serde(default)]
    pub taper: Taper,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub guess: Option<Vec<[f64; 2]>>,
}

impl SolveConfig {
    pub fn guess(&self) -> Option<Vec<Complex64>> {
        self.guess.as_ref().map(|g| g.iter().map(|&[a, b]| Complex64::new(a, b)).collect())
    }
}

/// A parsed configuration and the directory relative paths resolve against.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub base_dir: PathBuf,
    pub path: PathBuf,
}

impl LoadedConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let config = ExperimentConfig::parse(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let loaded = Self { config, base_dir, path: path.to_path_buf() };
        if let Some(InitialData::File { path }) = &loaded.config.initial {
            let full = loaded.resolve(path);
            if !full.is_file() {
                return Err(CliError::Usage(format!("initial data file {} does not exist", full.display())));
            }
        }
        Ok(loaded)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// File stem used to name per-config output directories.
    pub fn stem(&self) -> String {
        self.path.file_stem().map_or_else(|| "config".into(), |s| s.to_string_lossy().into_owned())
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    /// The counterexample named by `[initial]`, if any.
    pub fn counterexample(&self) -> Result<Option<Counterexample>, CliError> {
        match &self.initial {
            Some(InitialData::Counterexample { family, params }) => {
                Ok(Some(Counterexample::construct(*family, params).map_err(CliError::from_counterexample)?))
            }
            _ => Ok(None),
        }
    }

    /// The explicit `[model]`, or the one derived from a counterexample.
    pub fn resolved_model(&self) -> Result<ModelSpec, CliError> {
        if let Some(m) = &self.model {
            return Ok(m.clone());
        }
        match self.counterexample()? {
            Some(c) => Ok(c.solution().model()),
            None => Err(CliError::Usage("config has no [model] section".into())),
        }
    }

    pub fn grid(&self) -> Result<&GridConfig, CliError> {
        self.grid.as_ref().ok_or_else(|| CliError::Usage("config has no [grid] section".into()))
    }

    pub fn run(&self) -> Result<&RunConfig, CliError> {
        self.run.as_ref().ok_or_else(|| CliError::Usage("config has no [run] section".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"
[model]
mass = 1.0
[[model.oscillators]]
position = 0.0
coefficients = [0.0, -2.0, 1.0]

[grid]
x_min = -10.0
x_max = 10.0
dx_target = 0.05

[run]
t_final = 2.0
observe_every = 5
radii = [1.0, 2.0]

[initial]
kind = "perturbed_solitary"
omega = 0.4
noise_amplitude = 0.1
seed = 3

[spectral]
windows = [[0.0, 1.0]]
taper = "none"
"#;

    #[test]
    fn parses_full_config() {
        let c = ExperimentConfig::parse(FULL).unwrap();
        assert_eq!(c.model.as_ref().unwrap().len(), 1);
        assert_eq!(c.run.as_ref().unwrap().observe_every, 5);
        assert_eq!(c.initial, Some(InitialData::PerturbedSolitary { omega: 0.4, noise_amplitude: 0.1, seed: 3 }));
        assert_eq!(c.spectral.as_ref().unwrap().taper, Taper::None);
        let again = ExperimentConfig::parse(&toml::to_string(&c).unwrap()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(ExperimentConfig::parse("[model]\nmass = -1.0\noscillators = []").is_err());
        assert!(ExperimentConfig::parse("[grid]\nx_min = 0.0").is_err());
        assert!(ExperimentConfig::parse("[unknown]\na = 1").is_err());
        assert!(ExperimentConfig::parse("[initial]\nkind = \"bogus\"").is_err());
    }

    #[test]
    fn counterexample_model_is_derived() {
        let c = ExperimentConfig::parse("[initial]\nkind = \"counterexample\"\nfamily = \"wide_gap\"\n").unwrap();
        let m = c.resolved_model().unwrap();
        assert_eq!(m.len(), 2);
        assert!((m.positions()[1] - std::f64::consts::PI).abs() < 1e-15);
        let c = ExperimentConfig::parse("[initial]\nkind = \"counterexample\"\nfamily = \"linear_deg\"\nbeta = 5.0\n").unwrap();
        assert!(matches!(c.counterexample().unwrap(), Some(Counterexample::LinearDeg(p)) if p.beta == 5.0));
    }
}
