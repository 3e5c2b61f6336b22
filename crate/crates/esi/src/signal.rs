//! Time grids, traces, wavelets, trapezoid norms, and noise synthesis.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Uniform time sampling: `n` samples spaced `dt` apart starting at `t_min`.
///
/// Grids are plain values; two grids compare equal only when all three
/// fields are bit-identical, which is the contract sample-exact operators
/// rely on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_min: f64,
    dt: f64,
    n: usize,
}

impl TimeGrid {
    pub fn new(t_min: f64, dt: f64, n: usize) -> Result<Self> {
        if !t_min.is_finite() || !dt.is_finite() {
            return Err(Error::Validation("time grid bounds must be finite".into()));
        }
        if dt <= 0.0 {
            return Err(Error::Validation(format!("grid step must be positive, got {dt}")));
        }
        if n < 2 {
            return Err(Error::Validation(format!("grid needs at least 2 samples, got {n}")));
        }
        Ok(Self { t_min, dt, n })
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Time of sample `i`, computed as `t_min + i * dt`.
    pub fn t(&self, i: usize) -> f64 {
        self.t_min + self.dt * i as f64
    }

    pub fn t_max(&self) -> f64 {
        self.t(self.n - 1)
    }

    pub fn times(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.t(i))
    }

    /// Same sampling, origin moved by `delta`.
    pub fn shifted(&self, delta: f64) -> TimeGrid {
        TimeGrid { t_min: self.t_min + delta, dt: self.dt, n: self.n }
    }

    /// Grid refined by an integer factor (same span, `factor` times denser).
    pub fn refined(&self, factor: usize) -> TimeGrid {
        TimeGrid {
            t_min: self.t_min,
            dt: self.dt / factor as f64,
            n: (self.n - 1) * factor + 1,
        }
    }
}

/// Uniformly sampled pressure recording.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    grid: TimeGrid,
    samples: Vec<f64>,
}

impl Trace {
    pub fn new(grid: TimeGrid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::Validation(format!(
                "trace has {} samples but its grid has {}",
                samples.len(),
                grid.len()
            )));
        }
        if let Some(bad) = samples.iter().find(|s| !s.is_finite()) {
            return Err(Error::Validation(format!("trace sample is not finite: {bad}")));
        }
        Ok(Self { grid, samples })
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        Self { samples: vec![0.0; grid.len()], grid }
    }

    /// Build a trace by evaluating `f` at every grid time.
    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> f64) -> Self {
        let samples = grid.times().map(f).collect();
        Self { grid, samples }
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn scaled(&self, c: f64) -> Trace {
        Trace { grid: self.grid, samples: self.samples.iter().map(|s| c * s).collect() }
    }

    /// Pointwise difference; the grids must match exactly.
    pub fn sub(&self, other: &Trace) -> Result<Trace> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("trace difference needs identical grids".into()));
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Trace { grid: self.grid, samples })
    }

    pub fn add(&self, other: &Trace) -> Result<Trace> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("trace sum needs identical grids".into()));
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Trace { grid: self.grid, samples })
    }
}

/// Truncated zero-phase Ricker wavelet, evaluable at arbitrary time.
///
/// `eval` returns exactly zero outside `|t - center| > support_radius` and
/// peaks at 1 at the center (standard unit-peak normalization).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ricker {
    peak_frequency: f64,
    center: f64,
    support_radius: f64,
}

impl Ricker {
    pub fn new(peak_frequency: f64, center: f64, support_radius: f64) -> Result<Self> {
        if peak_frequency <= 0.0 || !peak_frequency.is_finite() {
            return Err(Error::Validation(format!(
                "peak frequency must be positive, got {peak_frequency}"
            )));
        }
        if support_radius <= 0.0 || !support_radius.is_finite() {
            return Err(Error::Validation(format!(
                "support radius must be positive, got {support_radius}"
            )));
        }
        if !center.is_finite() {
            return Err(Error::Validation("wavelet center must be finite".into()));
        }
        Ok(Self { peak_frequency, center, support_radius })
    }

    pub fn peak_frequency(&self) -> f64 {
        self.peak_frequency
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn eval(&self, t: f64) -> f64 {
        ricker_eval(self.peak_frequency, self.center, self.support_radius, t)
    }

    /// Same shape recentered at `center + delta`.
    pub fn recentered(&self, delta: f64) -> Ricker {
        Ricker { center: self.center + delta, ..*self }
    }
}

/// Zero-phase Ricker `(1 - 2 pi^2 f^2 u^2) exp(-pi^2 f^2 u^2)` with
/// `u = t - center`, hard-truncated to `|u| <= mu`.
pub fn ricker_eval(f_peak: f64, center: f64, mu: f64, t: f64) -> f64 {
    let u = t - center;
    if u.abs() > mu {
        return 0.0;
    }
    let a = (PI * f_peak).powi(2) * u * u;
    (1.0 - 2.0 * a) * (-a).exp()
}

/// Wavelet samples on a lag grid (record grid shifted by minus the travel
/// time, see [`crate::forward::lag_grid_for`]).
#[derive(Debug, Clone, PartialEq)]
pub struct SampledWavelet {
    lag_grid: TimeGrid,
    samples: Vec<f64>,
}

impl SampledWavelet {
    pub fn new(lag_grid: TimeGrid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != lag_grid.len() {
            return Err(Error::Validation(format!(
                "wavelet has {} samples but its lag grid has {}",
                samples.len(),
                lag_grid.len()
            )));
        }
        Ok(Self { lag_grid, samples })
    }

    pub fn zeros(lag_grid: TimeGrid) -> Self {
        Self { samples: vec![0.0; lag_grid.len()], lag_grid }
    }

    /// Sample an analytic wavelet on a lag grid.
    pub fn from_analytic(lag_grid: TimeGrid, w: &Ricker) -> Self {
        let samples = lag_grid.times().map(|tau| w.eval(tau)).collect();
        Self { lag_grid, samples }
    }

    pub fn lag_grid(&self) -> &TimeGrid {
        &self.lag_grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    /// Trapezoid square norm over the lag grid.
    pub fn norm_sq(&self) -> f64 {
        trapezoid_sq(self.lag_grid.dt(), &self.samples)
    }
}

/// Noise recipe attached to an experiment configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    None,
    /// Shifted, scaled copy of the noise-free data.
    Coherent { time_shift: f64, eta: f64 },
    /// Uniform white noise convolved with a wavelet, then rescaled.
    FilteredRandom { seed: u64, eta: f64 },
}

impl NoiseSpec {
    pub fn eta(&self) -> f64 {
        match self {
            NoiseSpec::None => 0.0,
            NoiseSpec::Coherent { eta, .. } | NoiseSpec::FilteredRandom { eta, .. } => *eta,
        }
    }
}

/// Trapezoid approximation of the square integral of a trace.
pub fn norm_sq(u: &Trace) -> f64 {
    trapezoid_sq(u.grid().dt(), u.samples())
}

/// Trapezoid inner product of two traces on the same grid.
pub fn inner(u: &Trace, v: &Trace) -> Result<f64> {
    if u.grid() != v.grid() {
        return Err(Error::GridMismatch("inner product needs identical grids".into()));
    }
    Ok(trapezoid_dot(u.grid().dt(), u.samples(), v.samples()))
}

/// Trapezoid inner product of two sampled wavelets on the same lag grid.
pub fn inner_wavelet(u: &SampledWavelet, v: &SampledWavelet) -> Result<f64> {
    if u.lag_grid() != v.lag_grid() {
        return Err(Error::GridMismatch("inner product needs identical lag grids".into()));
    }
    Ok(trapezoid_dot(u.lag_grid().dt(), u.samples(), v.samples()))
}

pub(crate) fn trapezoid_sq(dt: f64, samples: &[f64]) -> f64 {
    trapezoid_dot(dt, samples, samples)
}

/// Trapezoid sum of already-formed integrand values.
pub(crate) fn trapezoid_sum(dt: f64, terms: &[f64]) -> f64 {
    let n = terms.len();
    let mut acc = 0.0;
    for (i, &v) in terms.iter().enumerate() {
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        acc += w * v;
    }
    acc * dt
}

/// Sum of `a[i] * b[i]` with half weights at both ends, times `dt`.
pub(crate) fn trapezoid_dot(dt: f64, a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len();
    let mut acc = 0.0;
    for i in 0..n {
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        acc += w * a[i] * b[i];
    }
    acc * dt
}

/// SplitMix64: a 64-bit counter-based generator.
///
/// The state advances by the fixed Weyl increment 0x9E3779B97F4A7C15 and each
/// output is the finalizer mix of the counter (constants 0xBF58476D1CE4E5B9
/// and 0x94D049BB133111EB with shifts 30/27/31). Every seed yields the same
/// stream on every platform, which is the reproducibility contract for the
/// seeded experiments.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[-1, 1)`.
    pub fn next_symmetric(&mut self) -> f64 {
        2.0 * self.next_unit() - 1.0
    }
}

/// Shifted, scaled copy of the signal: `n(t) = c * d*(t - time_shift)` with
/// `c >= 0` chosen so that `||n|| / ||d*|| = eta` on the record window.
///
/// Integer multiples of the grid step shift exactly; fractional shifts use
/// linear interpolation. If the shift pushes signal energy outside the
/// window a warning is logged and the scale is fixed on the window, so the
/// noise-to-signal ratio still holds exactly.
pub fn make_coherent_noise(d_star: &Trace, time_shift: f64, eta: f64) -> Result<Trace> {
    if eta < 0.0 || !eta.is_finite() {
        return Err(Error::Validation(format!("noise-to-signal ratio must be >= 0, got {eta}")));
    }
    let signal_sq = norm_sq(d_star);
    if signal_sq == 0.0 {
        return Err(Error::ZeroDataNorm);
    }
    if eta == 0.0 {
        return Ok(Trace::zeros(*d_star.grid()));
    }

    let shifted = shift_trace(d_star, time_shift);
    let shifted_sq = norm_sq(&shifted);
    if shifted_sq == 0.0 {
        return Err(Error::Validation(
            "time shift moves all signal energy outside the record window".into(),
        ));
    }
    if (signal_sq - shifted_sq).abs() > 1e-12 * signal_sq {
        log::warn!(
            "coherent noise shift {time_shift} s pushes signal energy outside the record \
             window; rescaling on the window"
        );
    }
    let c = eta * (signal_sq / shifted_sq).sqrt();
    Ok(shifted.scaled(c))
}

/// Sample `u(t - delta)` on the grid of `u`, zero outside the window.
fn shift_trace(u: &Trace, delta: f64) -> Trace {
    let grid = *u.grid();
    let offset = delta / grid.dt();
    let k = offset.round();
    let samples = if (offset - k).abs() < 1e-9 {
        // Integer shift: move samples without interpolation.
        let k = k as i64;
        (0..grid.len() as i64)
            .map(|i| {
                let j = i - k;
                if j >= 0 && (j as usize) < grid.len() {
                    u.samples()[j as usize]
                } else {
                    0.0
                }
            })
            .collect()
    } else {
        let floor = offset.floor();
        let frac = offset - floor;
        let k = floor as i64;
        (0..grid.len() as i64)
            .map(|i| {
                let j0 = i - k - 1;
                let j1 = i - k;
                let a = if j0 >= 0 && (j0 as usize) < grid.len() {
                    u.samples()[j0 as usize]
                } else {
                    0.0
                };
                let b = if j1 >= 0 && (j1 as usize) < grid.len() {
                    u.samples()[j1 as usize]
                } else {
                    0.0
                };
                frac * a + (1.0 - frac) * b
            })
            .collect()
    };
    Trace::new(grid, samples).expect("shifted trace keeps the grid length")
}

/// Band-limited random noise: i.i.d. uniform `[-1, 1)` samples on the grid,
/// discretely convolved with `filter` sampled at the grid step, rescaled so
/// `||n|| / ||d*|| = eta`. Deterministic for a fixed seed.
pub fn make_filtered_random_noise(
    seed: u64,
    filter: &Ricker,
    grid: &TimeGrid,
    eta: f64,
    d_star: &Trace,
) -> Result<Trace> {
    if eta < 0.0 || !eta.is_finite() {
        return Err(Error::Validation(format!("noise-to-signal ratio must be >= 0, got {eta}")));
    }
    let signal_sq = norm_sq(d_star);
    if signal_sq == 0.0 {
        return Err(Error::ZeroDataNorm);
    }
    if eta == 0.0 {
        return Ok(Trace::zeros(*grid));
    }

    let mut rng = SplitMix64::new(seed);
    let white: Vec<f64> = (0..grid.len()).map(|_| rng.next_symmetric()).collect();

    // Filter taps on the grid step, centered on the wavelet's own center.
    let half = (filter.support_radius() / grid.dt() + 1e-9).floor() as i64;
    let taps: Vec<f64> = (-half..=half)
        .map(|j| filter.eval(filter.center() + j as f64 * grid.dt()))
        .collect();

    let n = grid.len() as i64;
    let samples: Vec<f64> = (0..n)
        .map(|i| {
            let mut acc = 0.0;
            for (k, tap) in taps.iter().enumerate() {
                let j = i - (k as i64 - half);
                if j >= 0 && j < n {
                    acc += tap * white[j as usize];
                }
            }
            acc
        })
        .collect();

    let raw = Trace::new(*grid, samples)?;
    let raw_sq = norm_sq(&raw);
    if raw_sq == 0.0 {
        return Err(Error::Validation("filtered noise realization is identically zero".into()));
    }
    let c = eta * (signal_sq / raw_sq).sqrt();
    Ok(raw.scaled(c))
}
