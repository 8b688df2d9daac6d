//! A numerical laboratory for the one-dimensional Klein-Gordon field coupled
//! to finitely many nonlinear point oscillators,
//!
//! ```text
//! ψ̈ = ψ'' − m²ψ + Σ_J δ(x − X_J) F_J(ψ(X_J, t)),    F_J = −∇U_J,  U_J(ψ) = Σ_n u_{J,n} |ψ|^{2n}.
//! ```
//!
//! The crate is organised by capability:
//!
//! - [`model`]: oscillator potentials and forces, the frequency bounds
//!   `μ_J, μ′_J, M_J, Λ`, the three structural assumptions and the
//!   potential lower-bound constants.
//! - [`solitary`]: the amplitude system for solitary waves `φ_ω(x)e^{−iωt}`,
//!   a gauge-fixed Newton solver and natural-parameter continuation in `ω`.
//! - [`simulator`]: node-centred grids, Störmer–Verlet evolution with a
//!   discrete delta at each oscillator, and energy/charge/seminorm observers.
//! - [`spectral`]: windowed time spectra at the oscillator points and a
//!   discrete convolution-support (Titchmarsh) oracle.
//! - [`counterexamples`]: the two exact multifrequency solutions (wide gap,
//!   linear degeneration) with closed-form verification.
//! - [`cli`]: config-driven experiment commands backing the `kgosc` binary.
//!
//! Runnable walkthroughs of each capability live in `crates/core/examples/`.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod counterexamples;
pub mod model;
pub mod poly;
pub mod simulator;
pub mod solitary;
pub mod spectral;

pub use num_complex::Complex64;

pub use model::{ModelSpec, OscillatorSpec};
pub use simulator::{FieldState, Grid};
pub use solitary::SolitaryWave;
