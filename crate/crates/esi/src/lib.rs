//! Extended source inversion (ESI) for the single-trace acoustic
//! transmission problem.
//!
//! A point source with time-dependent intensity ("wavelet") radiates a
//! pressure wave through a homogeneous fluid; a single receiver at offset
//! `r` records the arrival. The forward map is a pure time shift by the
//! travel time `m * r` (slowness times offset) scaled by spherical
//! spreading `1 / (4 pi r)`. The inverse problem is to recover both the
//! slowness `m` and a short wavelet from one recorded trace.
//!
//! Least-squares waveform fitting of this model cycle-skips: its objective
//! has entire intervals of spurious local minima once the initial slowness
//! is off by more than a couple of wavelengths. This crate implements the
//! extended-source alternative: the wavelet support constraint is replaced
//! by a weighted quadratic penalty `alpha^2 * ||t w(t)||^2`, the wavelet is
//! eliminated in closed form (variable projection), and the penalty weight
//! is driven by a discrepancy principle so the final data misfit lands in a
//! prescribed interval. A truncation step then restores the support
//! constraint and reports the achieved relative data error.
//!
//! Modules follow the pipeline:
//!
//! - [`signal`]: time grids, traces, the truncated Ricker wavelet, trapezoid
//!   norms, and deterministic noise synthesis;
//! - [`forward`]: the shift-and-scale forward map, its adjoint, and the lag
//!   grid that makes both exact on samples;
//! - [`objectives`]: FWI and ESI objective functions, the closed-form
//!   penalized wavelet solve, and the reduced objective with its gradient;
//! - [`optimize`]: penalty-weight continuation, Brent root search on the
//!   gradient, the alternating discrepancy solver, and wavelet truncation;
//! - [`bounds`]: calculators for the theoretical error bounds used by the
//!   tests and the CLI;
//! - [`cli`]: experiment harness, JSON configuration, and CSV/SVG output.

pub mod bounds;
pub mod cli;
mod error;
pub mod forward;
pub mod io;
pub mod objectives;
pub mod optimize;
pub mod signal;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
