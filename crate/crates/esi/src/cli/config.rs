//! JSON experiment configuration with defaults matching the reference
//! setup: 1 km offset, target slowness 0.4 s/km, a 40 Hz Ricker truncated
//! at 0.025 s, recorded on [0.25, 0.65] s at 1 ms.

use std::path::Path;

use serde::Deserialize;

use crate::forward::{Geometry, SlownessInterval};
use crate::optimize::{DiscrepancyBounds, SolverConfig};
use crate::signal::{
    make_coherent_noise, make_filtered_random_noise, NoiseSpec, Ricker, TimeGrid, Trace,
};
use crate::{forward, Error, Result};

/// Fully resolved and validated experiment setup.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub offset_r: f64,
    pub m_star: f64,
    pub window: TimeGrid,
    pub wavelet: Ricker,
    pub noise: NoiseSpec,
    pub lambda: f64,
    pub bounds: DiscrepancyBounds,
    pub solver: SolverConfig,
    pub alpha_fixed: Option<f64>,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let window = TimeGrid::new(0.25, 0.001, 401).expect("default window is valid");
        ExperimentConfig {
            offset_r: 1.0,
            m_star: 0.4,
            window,
            wavelet: Ricker::new(40.0, 0.0, 0.025).expect("default wavelet is valid"),
            noise: NoiseSpec::None,
            lambda: 0.025,
            bounds: DiscrepancyBounds::from_target_snr(3.0).expect("default bounds are valid"),
            solver: SolverConfig {
                search_interval: SlownessInterval::new(0.33, 0.65).expect("default interval"),
                grad_tol: 0.01,
                max_outer_iters: 100,
                max_alpha_updates_per_cycle: 25,
                scan_points_for_bracketing: 33,
                initial_m: 0.343,
            },
            alpha_fixed: None,
            seed: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn geometry(&self) -> Geometry {
        Geometry::new(self.offset_r, self.window).expect("validated offset")
    }

    /// Noise-free data predicted by the target slowness and wavelet.
    pub fn noise_free_data(&self) -> Trace {
        forward::forward_analytic(self.m_star, &self.wavelet, &self.geometry())
    }

    /// Recorded data: the noise-free trace plus the configured noise.
    pub fn synthesize_data(&self) -> Result<Trace> {
        let d_star = self.noise_free_data();
        let noise = match self.noise {
            NoiseSpec::None => return Ok(d_star),
            NoiseSpec::Coherent { time_shift, eta } => {
                make_coherent_noise(&d_star, time_shift, eta)?
            }
            NoiseSpec::FilteredRandom { seed, eta } => {
                // The filter is the noise-free wavelet recentered at zero.
                let filter = Ricker::new(
                    self.wavelet.peak_frequency(),
                    0.0,
                    self.wavelet.support_radius(),
                )?;
                make_filtered_random_noise(seed, &filter, &self.window, eta, &d_star)?
            }
        };
        d_star.add(&noise)
    }

    /// Cross-field sanity checks; warns (rather than fails) when the
    /// arrival does not fit the record window, matching the reference
    /// setups' expectations.
    pub fn validate(self) -> Result<Self> {
        if self.m_star <= 0.0 || !self.m_star.is_finite() {
            return Err(Error::Validation(format!(
                "target slowness must be positive, got {}",
                self.m_star
            )));
        }
        if self.lambda <= 0.0 || !self.lambda.is_finite() {
            return Err(Error::Validation(format!(
                "support radius lambda must be positive, got {}",
                self.lambda
            )));
        }
        if let Some(alpha) = self.alpha_fixed {
            if alpha < 0.0 || !alpha.is_finite() {
                return Err(Error::Validation(format!(
                    "fixed penalty weight must be >= 0, got {alpha}"
                )));
            }
        }
        let _ = Geometry::new(self.offset_r, self.window)?;
        let solver = self.solver.validated()?;
        let arrival = self.m_star * self.offset_r + self.wavelet.center();
        let mu = self.wavelet.support_radius();
        if arrival - mu < self.window.t_min() || arrival + mu > self.window.t_max() {
            log::warn!(
                "target arrival [{:.4}, {:.4}] s does not fit the record window [{}, {}] s",
                arrival - mu,
                arrival + mu,
                self.window.t_min(),
                self.window.t_max()
            );
        }
        Ok(Self { solver, ..self })
    }
}

// Raw serde layer: every key optional, unknown keys rejected, defaults
// filled from the reference setup.

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    offset_r: Option<f64>,
    m_star: Option<f64>,
    window: Option<RawWindow>,
    wavelet: Option<RawWavelet>,
    noise: Option<RawNoise>,
    lambda: Option<f64>,
    bounds: Option<RawBounds>,
    solver: Option<RawSolver>,
    alpha_fixed: Option<f64>,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWindow {
    t_min: f64,
    dt: f64,
    n: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWavelet {
    peak_frequency: Option<f64>,
    center: Option<f64>,
    support_radius: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
enum RawNoise {
    None,
    Coherent { time_shift: f64, eta: f64 },
    FilteredRandom { seed: Option<u64>, eta: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBounds {
    e_minus: f64,
    e_plus: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    m_min: Option<f64>,
    m_max: Option<f64>,
    grad_tol: Option<f64>,
    max_outer_iters: Option<usize>,
    max_alpha_updates_per_cycle: Option<usize>,
    scan_points_for_bracketing: Option<usize>,
    initial_m: Option<f64>,
}

/// Parse a config JSON document; missing keys take the reference defaults,
/// unknown keys are rejected.
pub fn config_from_json(text: &str) -> Result<ExperimentConfig> {
    let raw: RawConfig =
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let defaults = ExperimentConfig::default();

    let window = match raw.window {
        Some(w) => TimeGrid::new(w.t_min, w.dt, w.n)?,
        None => defaults.window,
    };
    let wavelet = match raw.wavelet {
        Some(w) => Ricker::new(
            w.peak_frequency.unwrap_or(defaults.wavelet.peak_frequency()),
            w.center.unwrap_or(defaults.wavelet.center()),
            w.support_radius.unwrap_or(defaults.wavelet.support_radius()),
        )?,
        None => defaults.wavelet,
    };
    let seed = raw.seed.unwrap_or(defaults.seed);
    let noise = match raw.noise {
        Some(RawNoise::None) | None => NoiseSpec::None,
        Some(RawNoise::Coherent { time_shift, eta }) => {
            if eta < 0.0 {
                return Err(Error::Config(format!("noise eta must be >= 0, got {eta}")));
            }
            NoiseSpec::Coherent { time_shift, eta }
        }
        Some(RawNoise::FilteredRandom { seed: s, eta }) => {
            if eta < 0.0 {
                return Err(Error::Config(format!("noise eta must be >= 0, got {eta}")));
            }
            NoiseSpec::FilteredRandom { seed: s.unwrap_or(seed), eta }
        }
    };
    let bounds = match raw.bounds {
        Some(b) => DiscrepancyBounds::new(b.e_minus, b.e_plus)?,
        None => defaults.bounds,
    };
    let solver = match raw.solver {
        Some(s) => SolverConfig {
            search_interval: SlownessInterval::new(
                s.m_min.unwrap_or(defaults.solver.search_interval.m_min()),
                s.m_max.unwrap_or(defaults.solver.search_interval.m_max()),
            )?,
            grad_tol: s.grad_tol.unwrap_or(defaults.solver.grad_tol),
            max_outer_iters: s.max_outer_iters.unwrap_or(defaults.solver.max_outer_iters),
            max_alpha_updates_per_cycle: s
                .max_alpha_updates_per_cycle
                .unwrap_or(defaults.solver.max_alpha_updates_per_cycle),
            scan_points_for_bracketing: s
                .scan_points_for_bracketing
                .unwrap_or(defaults.solver.scan_points_for_bracketing),
            initial_m: s.initial_m.unwrap_or(defaults.solver.initial_m),
        },
        None => defaults.solver,
    };

    ExperimentConfig {
        offset_r: raw.offset_r.unwrap_or(defaults.offset_r),
        m_star: raw.m_star.unwrap_or(defaults.m_star),
        window,
        wavelet,
        noise,
        lambda: raw.lambda.unwrap_or(defaults.lambda),
        bounds,
        solver,
        alpha_fixed: raw.alpha_fixed,
        seed,
    }
    .validate()
}

/// Load and validate a config file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    config_from_json(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}
