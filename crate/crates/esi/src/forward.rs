//! The forward map, its adjoint, and data synthesis.
//!
//! The predicted trace is `d(t) = w(t - m r) / (4 pi r)`: an `m`-dependent
//! time shift scaled by spherical spreading. Sampling the wavelet on the
//! record grid shifted by `-m r` (the lag grid) turns the shift into an
//! index-preserving map, so the forward operator, its adjoint, and the
//! penalized wavelet solve are all exact on samples for any real `m`.

use std::f64::consts::PI;

use crate::signal::{Ricker, SampledWavelet, TimeGrid, Trace};
use crate::{Error, Result};

/// Source-receiver offset and the receiver's record grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    offset_r: f64,
    record_grid: TimeGrid,
}

impl Geometry {
    pub fn new(offset_r: f64, record_grid: TimeGrid) -> Result<Self> {
        if offset_r <= 0.0 || !offset_r.is_finite() {
            return Err(Error::Validation(format!(
                "source-receiver offset must be positive, got {offset_r}"
            )));
        }
        Ok(Self { offset_r, record_grid })
    }

    pub fn offset_r(&self) -> f64 {
        self.offset_r
    }

    pub fn record_grid(&self) -> &TimeGrid {
        &self.record_grid
    }

    /// Spherical spreading amplitude `1 / (4 pi r)`.
    pub fn spreading(&self) -> f64 {
        1.0 / (4.0 * PI * self.offset_r)
    }
}

/// Admissible slowness range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlownessInterval {
    m_min: f64,
    m_max: f64,
}

impl SlownessInterval {
    pub fn new(m_min: f64, m_max: f64) -> Result<Self> {
        if !(m_min > 0.0 && m_min <= m_max) {
            return Err(Error::Validation(format!(
                "slowness interval needs 0 < m_min <= m_max, got [{m_min}, {m_max}]"
            )));
        }
        Ok(Self { m_min, m_max })
    }

    pub fn m_min(&self) -> f64 {
        self.m_min
    }

    pub fn m_max(&self) -> f64 {
        self.m_max
    }

    pub fn contains(&self, m: f64) -> bool {
        (self.m_min..=self.m_max).contains(&m)
    }
}

/// Wavelet lag grid for slowness `m`: the record grid shifted by `-m r`,
/// so lag sample `i` pairs with record sample `i`.
pub fn lag_grid_for(m: f64, geom: &Geometry) -> TimeGrid {
    geom.record_grid().shifted(-m * geom.offset_r())
}

/// Predicted trace for an analytic wavelet, evaluated exactly at the
/// shifted record times.
pub fn forward_analytic(m: f64, w: &Ricker, geom: &Geometry) -> Trace {
    debug_assert!(m > 0.0, "slowness must be positive");
    let travel = m * geom.offset_r();
    let amp = geom.spreading();
    Trace::from_fn(*geom.record_grid(), |t| amp * w.eval(t - travel))
}

/// Predicted trace for a sampled wavelet. The wavelet must live on exactly
/// `lag_grid_for(m, geom)`; the map is then sample-to-sample.
pub fn forward_sampled(m: f64, w: &SampledWavelet, geom: &Geometry) -> Result<Trace> {
    if *w.lag_grid() != lag_grid_for(m, geom) {
        return Err(Error::GridMismatch(
            "wavelet lag grid does not match lag_grid_for(m); resample explicitly".into(),
        ));
    }
    let amp = geom.spreading();
    let samples = w.samples().iter().map(|&v| amp * v).collect();
    Trace::new(*geom.record_grid(), samples)
}

/// Adjoint of the forward map under the trapezoid inner products:
/// `(F^T d)(tau_i) = d(tau_i + m r) / (4 pi r)` on the lag grid.
pub fn adjoint(m: f64, d: &Trace, geom: &Geometry) -> Result<SampledWavelet> {
    if d.grid() != geom.record_grid() {
        return Err(Error::GridMismatch("trace grid does not match the record grid".into()));
    }
    let amp = geom.spreading();
    let samples = d.samples().iter().map(|&v| amp * v).collect();
    SampledWavelet::new(lag_grid_for(m, geom), samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{self, SplitMix64};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn setup() -> (Geometry, Ricker) {
        let grid = TimeGrid::new(0.25, 0.001, 401).unwrap();
        let geom = Geometry::new(1.0, grid).unwrap();
        let w = Ricker::new(40.0, 0.0, 0.025).unwrap();
        (geom, w)
    }

    #[test]
    fn slowness_interval_validation() {
        assert!(SlownessInterval::new(0.0, 0.5).is_err());
        assert!(SlownessInterval::new(0.5, 0.4).is_err());
        let iv = SlownessInterval::new(0.33, 0.65).unwrap();
        assert!(iv.contains(0.4));
        assert!(!iv.contains(0.7));
    }

    #[test]
    fn analytic_forward_peaks_at_travel_time() {
        let (geom, w) = setup();
        let d = forward_analytic(0.4, &w, &geom);
        // 0.4 = 0.25 + 150 * 0.001 lands on a sample.
        assert_relative_eq!(d.samples()[150], 1.0 / (4.0 * PI), max_relative = 1e-14);
        let peak = d.samples().iter().cloned().fold(f64::MIN, f64::max);
        assert_relative_eq!(peak, 1.0 / (4.0 * PI), max_relative = 1e-14);
    }

    #[test]
    fn analytic_forward_support_matches_arrival() {
        // The noise-free experiment data: one truncated arrival spanning
        // [0.375, 0.425], zero elsewhere.
        let (geom, w) = setup();
        let d = forward_analytic(0.4, &w, &geom);
        for (i, t) in geom.record_grid().times().enumerate() {
            if !(0.375..=0.425).contains(&t) {
                assert_eq!(d.samples()[i], 0.0, "unexpected energy at t={t}");
            }
        }
        let energy: f64 = d.samples().iter().map(|s| s * s).sum();
        assert!(energy > 0.0);
    }

    #[test]
    fn shift_covariance() {
        let (geom, w) = setup();
        let delta = 0.037;
        let lhs = forward_analytic(0.4 + delta, &w, &geom);
        let rhs = forward_analytic(0.4, &w.recentered(delta * geom.offset_r()), &geom);
        for (a, b) in lhs.samples().iter().zip(rhs.samples()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn lag_grid_shifts_and_round_trips() {
        let (geom, _) = setup();
        let lag = lag_grid_for(0.4, &geom);
        assert_abs_diff_eq!(lag.t_min(), -0.15, epsilon = 1e-12);
        assert_abs_diff_eq!(lag.t_max(), 0.25, epsilon = 1e-12);
        assert_eq!(lag.dt(), geom.record_grid().dt());
        assert_eq!(lag.len(), geom.record_grid().len());
        let back = lag.shifted(0.4 * geom.offset_r());
        assert_abs_diff_eq!(back.t_min(), geom.record_grid().t_min(), epsilon = 1e-15);
    }

    #[test]
    fn sampled_forward_requires_matching_lag_grid() {
        let (geom, _) = setup();
        let w = SampledWavelet::zeros(lag_grid_for(0.4, &geom));
        assert!(forward_sampled(0.5, &w, &geom).is_err());
        let d = forward_sampled(0.4, &w, &geom).unwrap();
        assert!(d.samples().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn sampled_forward_is_linear() {
        let (geom, _) = setup();
        let lag = lag_grid_for(0.47, &geom);
        let mut rng = SplitMix64::new(3);
        let w1 = SampledWavelet::new(lag, (0..lag.len()).map(|_| rng.next_symmetric()).collect())
            .unwrap();
        let w2 = SampledWavelet::new(lag, (0..lag.len()).map(|_| rng.next_symmetric()).collect())
            .unwrap();
        let combo = SampledWavelet::new(
            lag,
            w1.samples()
                .iter()
                .zip(w2.samples())
                .map(|(a, b)| 2.5 * a - 0.75 * b)
                .collect(),
        )
        .unwrap();
        let f1 = forward_sampled(0.47, &w1, &geom).unwrap();
        let f2 = forward_sampled(0.47, &w2, &geom).unwrap();
        let fc = forward_sampled(0.47, &combo, &geom).unwrap();
        for i in 0..lag.len() {
            assert_abs_diff_eq!(
                fc.samples()[i],
                2.5 * f1.samples()[i] - 0.75 * f2.samples()[i],
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn adjoint_identity_holds_for_random_pairs() {
        // <F w, d> = <w, F^T d> under matched trapezoid weights.
        let (geom, _) = setup();
        let mut rng = SplitMix64::new(11);
        for &m in &[0.343, 0.4, 0.5177, 0.65] {
            let lag = lag_grid_for(m, &geom);
            for _ in 0..25 {
                let w = SampledWavelet::new(
                    lag,
                    (0..lag.len()).map(|_| rng.next_symmetric()).collect(),
                )
                .unwrap();
                let d = Trace::new(
                    *geom.record_grid(),
                    (0..lag.len()).map(|_| rng.next_symmetric()).collect(),
                )
                .unwrap();
                let lhs = signal::inner(&forward_sampled(m, &w, &geom).unwrap(), &d).unwrap();
                let rhs =
                    signal::inner_wavelet(&w, &adjoint(m, &d, &geom).unwrap()).unwrap();
                assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn adjoint_rejects_foreign_grid() {
        let (geom, _) = setup();
        let other = TimeGrid::new(0.0, 0.001, 401).unwrap();
        let d = Trace::zeros(other);
        assert!(adjoint(0.4, &d, &geom).is_err());
    }

    #[test]
    fn forward_of_adjoint_scales_by_spreading_squared() {
        let (geom, _) = setup();
        let m = 0.391;
        // Unit sample trace through F F^T: comes back scaled by 1/(4 pi r)^2.
        let mut samples = vec![0.0; geom.record_grid().len()];
        samples[123] = 1.0;
        let d = Trace::new(*geom.record_grid(), samples).unwrap();
        let w = adjoint(m, &d, &geom).unwrap();
        let back = forward_sampled(m, &w, &geom).unwrap();
        let s2 = geom.spreading() * geom.spreading();
        for (i, v) in back.samples().iter().enumerate() {
            let expect = if i == 123 { s2 } else { 0.0 };
            assert_abs_diff_eq!(v, &expect, epsilon = 1e-18);
        }
    }

    #[test]
    fn shift_isometry() {
        let (geom, _) = setup();
        let m = 0.6031;
        let lag = lag_grid_for(m, &geom);
        let mut rng = SplitMix64::new(17);
        let w =
            SampledWavelet::new(lag, (0..lag.len()).map(|_| rng.next_symmetric()).collect())
                .unwrap();
        let fw = forward_sampled(m, &w, &geom).unwrap();
        let s2 = geom.spreading() * geom.spreading();
        assert_relative_eq!(signal::norm_sq(&fw), w.norm_sq() * s2, max_relative = 1e-14);
    }
}
