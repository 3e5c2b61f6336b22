//! Penalty-weight continuation, Brent root search on the gradient, the
//! alternating discrepancy solver, and the truncation step.
//!
//! The solver alternates two moves until a stationary point of the reduced
//! objective carries a misfit inside the prescribed interval:
//!
//! - a weight update that raises `alpha` until `e` enters `(e_minus,
//!   e_plus]`: from `alpha = 0` the first weight is the secant estimate
//!   `(e_plus - e) / g` built from the penalty slope at zero, after which
//!   the weight doubles per step (the schedule that generated the
//!   published iteration tables); a doubling that would push `e` past
//!   `e_plus` falls back to the one-sided secant step, which approaches
//!   `e_plus` from below;
//! - a slowness update by Brent's method on the gradient, stopped at an
//!   absolute gradient tolerance. The search interval is first scanned on
//!   a uniform grid and, among all sign-change brackets, the one whose
//!   midpoint lies nearest the current slowness is refined. This keeps the
//!   update on the stationary point being tracked when large weights make
//!   the landscape multimodal.

use crate::forward::{Geometry, SlownessInterval};
use crate::objectives::{j_reduced, solve_w_alpha, EvalRecord};
use crate::signal::{SampledWavelet, Trace};
use crate::{Error, Result};

/// Allowed misfit interval for the discrepancy principle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancyBounds {
    e_minus: f64,
    e_plus: f64,
}

impl DiscrepancyBounds {
    pub fn new(e_minus: f64, e_plus: f64) -> Result<Self> {
        if !(0.0 < e_minus && e_minus < e_plus) {
            return Err(Error::Validation(format!(
                "discrepancy bounds need 0 < e_minus < e_plus, got ({e_minus}, {e_plus})"
            )));
        }
        Ok(Self { e_minus, e_plus })
    }

    /// Bounds from a target signal-to-noise ratio: `e_tgt = (1/snr)^2 / 2`,
    /// widened to `(0.49 e_tgt, e_tgt / 0.49)`.
    pub fn from_target_snr(snr: f64) -> Result<Self> {
        if snr <= 0.0 {
            return Err(Error::Validation(format!("target snr must be positive, got {snr}")));
        }
        let e_tgt = 0.5 / (snr * snr);
        Self::new(0.49 * e_tgt, e_tgt / 0.49)
    }

    pub fn e_minus(&self) -> f64 {
        self.e_minus
    }

    pub fn e_plus(&self) -> f64 {
        self.e_plus
    }

    /// Misfit small enough that the weight must keep growing.
    pub fn below(&self, e: f64) -> bool {
        e <= self.e_minus
    }

    /// Misfit acceptable for termination: inside `(e_minus, e_plus]`.
    pub fn accepts(&self, e: f64) -> bool {
        self.e_minus < e && e <= self.e_plus
    }
}

/// Knobs for the alternating solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub search_interval: SlownessInterval,
    pub grad_tol: f64,
    pub max_outer_iters: usize,
    pub max_alpha_updates_per_cycle: usize,
    pub scan_points_for_bracketing: usize,
    pub initial_m: f64,
}

impl SolverConfig {
    pub fn validated(self) -> Result<Self> {
        if self.grad_tol <= 0.0 || !self.grad_tol.is_finite() {
            return Err(Error::Validation(format!(
                "gradient tolerance must be positive, got {}",
                self.grad_tol
            )));
        }
        if self.max_outer_iters < 1 || self.max_alpha_updates_per_cycle < 1 {
            return Err(Error::Validation("iteration caps must be at least 1".into()));
        }
        if self.scan_points_for_bracketing < 2 {
            return Err(Error::Validation("bracketing scan needs at least 2 points".into()));
        }
        if !self.search_interval.contains(self.initial_m) {
            return Err(Error::Validation(format!(
                "initial slowness {} lies outside the search interval",
                self.initial_m
            )));
        }
        Ok(self)
    }
}

/// Which half of the alternation produced a log row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    AlphaUpdate,
    MUpdate,
}

impl Phase {
    pub fn as_str(&self) -> &'static str {
        match self {
            Phase::AlphaUpdate => "alpha_update",
            Phase::MUpdate => "m_update",
        }
    }
}

/// Ordered record of every solver evaluation, one row per update.
#[derive(Debug, Clone, Default)]
pub struct IterationLog {
    entries: Vec<(Phase, EvalRecord)>,
}

impl IterationLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, phase: Phase, record: EvalRecord) {
        self.entries.push((phase, record));
    }

    pub fn entries(&self) -> &[(Phase, EvalRecord)] {
        &self.entries
    }

    pub fn records(&self, phase: Phase) -> impl Iterator<Item = &EvalRecord> {
        self.entries.iter().filter(move |(p, _)| *p == phase).map(|(_, r)| r)
    }
}

/// Outcome of one weight-update cycle.
#[derive(Debug, Clone)]
pub struct AlphaCycle {
    pub alpha: f64,
    pub steps: Vec<EvalRecord>,
}

/// Raise the penalty weight until the misfit enters `(e_minus, e_plus]`.
///
/// Entering with a misfit already past `e_minus` is a fixed point: the
/// weight is returned unchanged (misfits above `e_plus` are an error,
/// since growing the weight can only raise them further).
pub fn alpha_update_cycle(
    m: f64,
    alpha0: f64,
    d: &Trace,
    bounds: &DiscrepancyBounds,
    geom: &Geometry,
    max_steps: usize,
) -> Result<AlphaCycle> {
    let mut alpha = alpha0;
    let mut rec = j_reduced(m, alpha, d, geom)?;
    if !bounds.below(rec.e) {
        if rec.e > bounds.e_plus() {
            return Err(Error::MisfitAboveUpperBound { e: rec.e, e_plus: bounds.e_plus() });
        }
        return Ok(AlphaCycle { alpha, steps: Vec::new() });
    }

    let mut steps = Vec::new();
    for _ in 0..max_steps {
        if rec.g <= 0.0 {
            return Err(Error::DegeneratePenalty);
        }
        let mut candidate = if alpha == 0.0 {
            (bounds.e_plus() - rec.e) / rec.g
        } else {
            2.0 * alpha
        };
        let mut next = j_reduced(m, candidate, d, geom)?;
        if next.e > bounds.e_plus() {
            // Geometric growth overshot; the secant step stays below e_plus.
            candidate = (alpha * alpha + (bounds.e_plus() - rec.e) / (2.0 * rec.g)).sqrt();
            next = j_reduced(m, candidate, d, geom)?;
            if next.e > bounds.e_plus() {
                return Err(Error::MisfitAboveUpperBound {
                    e: next.e,
                    e_plus: bounds.e_plus(),
                });
            }
        }
        alpha = candidate;
        rec = next;
        steps.push(rec);
        if !bounds.below(rec.e) {
            return Ok(AlphaCycle { alpha, steps });
        }
    }
    Err(Error::AlphaCycleStalled(max_steps))
}

/// Result of a gradient root search.
#[derive(Debug, Clone)]
pub struct RootSearch {
    pub m: f64,
    pub f_m: f64,
    /// False when no sign change existed and an endpoint was returned.
    pub bracketed: bool,
    /// Interior evaluation points, in order; the last one is `m`.
    pub iterates: Vec<(f64, f64)>,
}

/// Find `m` with `|f(m)| <= tol` by Brent's method.
///
/// The interval is scanned on `scan_points` uniform nodes; among all
/// sign-change brackets the one whose midpoint is nearest `near_m` is
/// refined (ties take the lower bracket). Without any sign change the
/// endpoint with the smaller `|f|` is returned, flagged unbracketed.
pub fn brent_zero(
    mut f: impl FnMut(f64) -> Result<f64>,
    interval: &SlownessInterval,
    near_m: f64,
    tol: f64,
    scan_points: usize,
) -> Result<RootSearch> {
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::Validation(format!("tolerance must be positive, got {tol}")));
    }
    let scan_points = scan_points.max(2);
    let lo = interval.m_min();
    let hi = interval.m_max();
    let step = (hi - lo) / (scan_points - 1) as f64;

    let mut nodes = Vec::with_capacity(scan_points);
    for i in 0..scan_points {
        let m = if i == scan_points - 1 { hi } else { lo + step * i as f64 };
        nodes.push((m, f(m)?));
    }

    // A node sitting exactly on a root is its own bracket.
    let mut brackets: Vec<(usize, f64)> = Vec::new();
    for i in 0..scan_points - 1 {
        let (ma, fa) = nodes[i];
        let (mb, fb) = nodes[i + 1];
        if fa == 0.0 || fa * fb < 0.0 {
            brackets.push((i, 0.5 * (ma + mb)));
        }
    }
    if nodes[scan_points - 1].1 == 0.0 {
        let (m, fm) = nodes[scan_points - 1];
        return Ok(RootSearch { m, f_m: fm, bracketed: true, iterates: vec![(m, fm)] });
    }

    let Some(&(start, _)) = brackets.iter().min_by(|(ia, mid_a), (ib, mid_b)| {
        (mid_a - near_m)
            .abs()
            .total_cmp(&(mid_b - near_m).abs())
            .then(nodes[*ia].0.total_cmp(&nodes[*ib].0))
    }) else {
        // Monotone gradient on the whole interval: report the better end.
        let (m_lo, f_lo) = nodes[0];
        let (m_hi, f_hi) = nodes[scan_points - 1];
        let (m, f_m) = if f_lo.abs() <= f_hi.abs() { (m_lo, f_lo) } else { (m_hi, f_hi) };
        return Ok(RootSearch { m, f_m, bracketed: false, iterates: vec![(m, f_m)] });
    };

    let (mut a, mut fa) = nodes[start];
    let (mut b, mut fb) = nodes[start + 1];
    if fa == 0.0 {
        return Ok(RootSearch { m: a, f_m: fa, bracketed: true, iterates: vec![(a, fa)] });
    }

    // Brent's method: inverse quadratic interpolation with secant and
    // bisection safeguards, stopped on the |f| tolerance.
    let mut iterates: Vec<(f64, f64)> = Vec::new();
    let (mut c, mut fc) = (a, fa);
    let mut d_step = b - a;
    let mut e_step = b - a;
    for _ in 0..200 {
        if fb.abs() <= tol {
            if iterates.last().map(|p| p.0) != Some(b) {
                iterates.push((b, fb));
            }
            return Ok(RootSearch { m: b, f_m: fb, bracketed: true, iterates });
        }
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d_step = b - a;
            e_step = d_step;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * 1e-14;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            // Interval exhausted; accept only if the tolerance is met.
            if fb.abs() <= tol {
                if iterates.last().map(|p| p.0) != Some(b) {
                    iterates.push((b, fb));
                }
                return Ok(RootSearch { m: b, f_m: fb, bracketed: true, iterates });
            }
            return Err(Error::RootSearchStalled);
        }
        if e_step.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * xm * q - (tol1 * q).abs()).min((e_step * q).abs()) {
                e_step = d_step;
                d_step = p / q;
            } else {
                d_step = xm;
                e_step = d_step;
            }
        } else {
            d_step = xm;
            e_step = d_step;
        }
        a = b;
        fa = fb;
        b += if d_step.abs() > tol1 { d_step } else { tol1.copysign(xm) };
        fb = f(b)?;
        iterates.push((b, fb));
    }
    Err(Error::RootSearchStalled)
}

/// Final state of the alternating solver.
#[derive(Debug, Clone)]
pub struct DiscrepancySolution {
    pub m: f64,
    pub alpha: f64,
    pub wavelet: SampledWavelet,
    pub record: EvalRecord,
    pub log: IterationLog,
}

/// Alternate weight updates and gradient root searches, starting from
/// `alpha = 0` and the configured initial slowness, until a stationary
/// point carries a misfit inside the discrepancy interval.
pub fn discrepancy_solve(
    d: &Trace,
    bounds: &DiscrepancyBounds,
    config: &SolverConfig,
    geom: &Geometry,
) -> Result<DiscrepancySolution> {
    let config = config.validated()?;
    let mut log = IterationLog::new();
    let mut m = config.initial_m;
    let mut alpha = 0.0;

    for outer in 0..config.max_outer_iters {
        let cycle =
            alpha_update_cycle(m, alpha, d, bounds, geom, config.max_alpha_updates_per_cycle)?;
        let weight_moved = !cycle.steps.is_empty();
        alpha = cycle.alpha;
        for rec in &cycle.steps {
            log.push(Phase::AlphaUpdate, *rec);
        }

        let search = brent_zero(
            |mm| Ok(j_reduced(mm, alpha, d, geom)?.dj_dm),
            &config.search_interval,
            m,
            config.grad_tol,
            config.scan_points_for_bracketing,
        )?;
        for &(mm, _) in &search.iterates {
            log.push(Phase::MUpdate, j_reduced(mm, alpha, d, geom)?);
        }
        let slowness_moved = search.m != m;
        m = search.m;

        let rec = j_reduced(m, alpha, d, geom)?;
        if bounds.accepts(rec.e) && search.bracketed && rec.dj_dm.abs() <= config.grad_tol {
            let wavelet = solve_w_alpha(m, alpha, d, geom)?;
            return Ok(DiscrepancySolution { m, alpha, wavelet, record: rec, log });
        }
        // Misfit fell below e_minus (or the search never bracketed):
        // control passes back to the weight update.
        if !weight_moved && !slowness_moved {
            return Err(Error::NoConvergence(outer + 1));
        }
    }
    Err(Error::NoConvergence(config.max_outer_iters))
}

/// Truncated wavelet and the relative data error it achieves.
#[derive(Debug, Clone)]
pub struct Truncation {
    pub wavelet: SampledWavelet,
    pub epsilon: f64,
}

/// Hard-truncate a wavelet to `|tau| <= lambda` and report the relative
/// data error `||F[m] w_trunc - d|| / ||d||` measured directly on the
/// predicted data.
pub fn truncate_and_report(
    m: f64,
    w: &SampledWavelet,
    lambda: f64,
    d: &Trace,
    geom: &Geometry,
) -> Result<Truncation> {
    if lambda <= 0.0 || !lambda.is_finite() {
        return Err(Error::Validation(format!("truncation lag must be positive, got {lambda}")));
    }
    let lag = *w.lag_grid();
    let samples = w
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &v)| if lag.t(i).abs() <= lambda { v } else { 0.0 })
        .collect();
    let wavelet = SampledWavelet::new(lag, samples)?;
    let pred = crate::forward::forward_sampled(m, &wavelet, geom)?;
    let resid = pred.sub(d)?;
    let n2 = crate::signal::norm_sq(d);
    if n2 == 0.0 {
        return Err(Error::ZeroDataNorm);
    }
    let epsilon = (crate::signal::norm_sq(&resid) / n2).sqrt();
    Ok(Truncation { wavelet, epsilon })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::forward_analytic;
    use crate::signal::{make_coherent_noise, Ricker, TimeGrid};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn geom() -> Geometry {
        Geometry::new(1.0, TimeGrid::new(0.25, 0.001, 401).unwrap()).unwrap()
    }

    fn coherent_data(geom: &Geometry, eta: f64) -> Trace {
        let w = Ricker::new(40.0, 0.0, 0.025).unwrap();
        let d = forward_analytic(0.4, &w, geom);
        let n = make_coherent_noise(&d, 0.1, eta).unwrap();
        d.add(&n).unwrap()
    }

    fn paper_bounds() -> DiscrepancyBounds {
        DiscrepancyBounds::from_target_snr(3.0).unwrap()
    }

    fn solver() -> SolverConfig {
        SolverConfig {
            search_interval: SlownessInterval::new(0.33, 0.65).unwrap(),
            grad_tol: 0.01,
            max_outer_iters: 100,
            max_alpha_updates_per_cycle: 25,
            scan_points_for_bracketing: 33,
            initial_m: 0.343,
        }
    }

    #[test]
    fn bounds_constructor_rejects_degenerate_intervals() {
        assert!(DiscrepancyBounds::new(0.1, 0.1).is_err());
        assert!(DiscrepancyBounds::new(0.2, 0.1).is_err());
        assert!(DiscrepancyBounds::new(0.0, 0.1).is_err());
        let b = paper_bounds();
        assert_abs_diff_eq!(b.e_minus(), 0.027222, epsilon = 1e-6);
        assert_abs_diff_eq!(b.e_plus(), 0.113379, epsilon = 1e-6);
    }

    #[test]
    fn alpha_cycle_reproduces_published_sequence() {
        let geom = geom();
        let d = coherent_data(&geom, 0.3);
        let cycle = alpha_update_cycle(0.343, 0.0, &d, &paper_bounds(), &geom, 25).unwrap();
        let alphas: Vec<f64> = cycle.steps.iter().map(|r| r.alpha).collect();
        let es: Vec<f64> = cycle.steps.iter().map(|r| r.e).collect();
        assert_eq!(alphas.len(), 3);
        for (got, want) in alphas.iter().zip([0.284184, 0.568368, 1.136737]) {
            assert_abs_diff_eq!(got, &want, epsilon = 1e-3);
        }
        for (got, want) in es.iter().zip([0.003140, 0.022460, 0.102216]) {
            assert_abs_diff_eq!(got, &want, epsilon = 1e-3);
        }
    }

    #[test]
    fn alpha_cycle_is_a_fixed_point_when_already_in_range() {
        let geom = geom();
        let d = coherent_data(&geom, 0.3);
        let bounds = paper_bounds();
        // At (0.343, 1.136737) the misfit is already inside the interval.
        let cycle = alpha_update_cycle(0.343, 1.136737, &d, &bounds, &geom, 25).unwrap();
        assert_eq!(cycle.alpha, 1.136737);
        assert!(cycle.steps.is_empty());

        // Misfit exactly at e_plus is also terminal.
        let rec = crate::objectives::j_reduced(0.343, 1.136737, &d, &geom).unwrap();
        let tight = DiscrepancyBounds::new(0.5 * rec.e, rec.e).unwrap();
        let cycle = alpha_update_cycle(0.343, 1.136737, &d, &tight, &geom, 25).unwrap();
        assert_eq!(cycle.alpha, 1.136737);
        assert!(cycle.steps.is_empty());
    }

    #[test]
    fn alpha_cycle_rejects_misfit_above_upper_bound() {
        let geom = geom();
        let d = coherent_data(&geom, 0.3);
        let bounds = DiscrepancyBounds::new(1e-4, 5e-3).unwrap();
        let got = alpha_update_cycle(0.343, 1.136737, &d, &bounds, &geom, 25);
        assert!(matches!(got, Err(Error::MisfitAboveUpperBound { .. })));
    }

    #[test]
    fn alpha_cycle_detects_degenerate_data() {
        // All data energy at zero lag: the exact-fit wavelet is a spike at
        // tau = 0, the penalty vanishes, and no weight can raise the misfit.
        // m = t_min / r puts lag sample 0 at exactly zero.
        let geom = geom();
        let mut samples = vec![0.0; geom.record_grid().len()];
        samples[0] = 1.0;
        let d = Trace::new(*geom.record_grid(), samples).unwrap();
        let got = alpha_update_cycle(0.25, 0.0, &d, &paper_bounds(), &geom, 25);
        assert!(matches!(got, Err(Error::DegeneratePenalty)));
    }

    #[test]
    fn alpha_cycle_misfit_is_strictly_increasing_and_bounded() {
        let geom = geom();
        let d = coherent_data(&geom, 0.3);
        let bounds = paper_bounds();
        let cycle = alpha_update_cycle(0.343, 0.0, &d, &bounds, &geom, 25).unwrap();
        let mut prev = 0.0;
        for rec in &cycle.steps {
            assert!(rec.e > prev, "misfit not strictly increasing");
            assert!(rec.e <= bounds.e_plus(), "misfit escaped the upper bound");
            prev = rec.e;
        }
    }

    #[test]
    fn brent_finds_a_linear_root() {
        let iv = SlownessInterval::new(0.33, 0.65).unwrap();
        let out = brent_zero(|m| Ok(m - 0.5), &iv, 0.4, 1e-10, 33).unwrap();
        assert!(out.bracketed);
        assert_abs_diff_eq!(out.m, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn brent_is_invariant_under_positive_rescaling() {
        let iv = SlownessInterval::new(0.33, 0.65).unwrap();
        let f = |m: f64| (m - 0.4217) * (1.0 + (m - 0.4217).powi(2));
        let a = brent_zero(|m| Ok(f(m)), &iv, 0.45, 1e-9, 33).unwrap();
        let b = brent_zero(|m| Ok(250.0 * f(m)), &iv, 0.45, 250.0 * 1e-9, 33).unwrap();
        assert_abs_diff_eq!(a.m, b.m, epsilon = 1e-7);
    }

    #[test]
    fn brent_without_bracket_returns_flagged_endpoint() {
        let iv = SlownessInterval::new(0.33, 0.65).unwrap();
        let out = brent_zero(|m| Ok(1.0 + m * m), &iv, 0.4, 1e-10, 33).unwrap();
        assert!(!out.bracketed);
        assert_eq!(out.m, 0.33);
    }

    #[test]
    fn brent_picks_the_bracket_nearest_the_current_slowness() {
        let iv = SlownessInterval::new(0.33, 0.65).unwrap();
        let f = |m: f64| (m - 0.4) * (m - 0.6);
        let near_low = brent_zero(|m| Ok(f(m)), &iv, 0.42, 1e-12, 65).unwrap();
        assert_abs_diff_eq!(near_low.m, 0.4, epsilon = 1e-9);
        let near_high = brent_zero(|m| Ok(f(m)), &iv, 0.63, 1e-12, 65).unwrap();
        assert_abs_diff_eq!(near_high.m, 0.6, epsilon = 1e-9);
    }

    #[test]
    fn discrepancy_solves_noise_free_data_to_the_target() {
        let geom = geom();
        let w = Ricker::new(40.0, 0.0, 0.025).unwrap();
        let d = forward_analytic(0.4, &w, &geom);
        let sol = discrepancy_solve(&d, &paper_bounds(), &solver(), &geom).unwrap();
        assert!(
            (sol.m - 0.4).abs() <= 0.001,
            "noise-free solve landed at {} (alpha {})",
            sol.m,
            sol.alpha
        );
        assert!(paper_bounds().accepts(sol.record.e));
        assert!(sol.record.dj_dm.abs() <= 0.01);
    }

    #[test]
    fn discrepancy_termination_state_is_consistent_with_its_log() {
        let geom = geom();
        let d = coherent_data(&geom, 0.3);
        let bounds = paper_bounds();
        let sol = discrepancy_solve(&d, &bounds, &solver(), &geom).unwrap();
        let last = sol.log.entries().last().unwrap().1;
        assert_eq!(last.m, sol.m);
        assert!(bounds.accepts(sol.record.e));
        assert!(sol.record.dj_dm.abs() <= 0.01);

        // Weight updates strictly increase the misfit within each run.
        let mut prev: Option<&EvalRecord> = None;
        for (phase, rec) in sol.log.entries() {
            if *phase == Phase::AlphaUpdate {
                if let Some(p) = prev {
                    assert!(rec.e > p.e || rec.alpha == p.alpha);
                }
                prev = Some(rec);
            } else {
                prev = None;
            }
        }
    }

    #[test]
    fn truncation_with_huge_lag_is_identity() {
        let geom = geom();
        let d = coherent_data(&geom, 0.3);
        let w = solve_w_alpha(0.400113, 2.273473, &d, &geom).unwrap();
        let full = truncate_and_report(0.400113, &w, 10.0, &d, &geom).unwrap();
        assert_eq!(full.wavelet.samples(), w.samples());
        // epsilon equals the untruncated relative error.
        let pred = crate::forward::forward_sampled(0.400113, &w, &geom).unwrap();
        let resid = pred.sub(&d).unwrap();
        let expect = (crate::signal::norm_sq(&resid) / crate::signal::norm_sq(&d)).sqrt();
        assert_relative_eq!(full.epsilon, expect, max_relative = 1e-12);
    }

    #[test]
    fn truncation_error_is_nonincreasing_in_lambda() {
        let geom = geom();
        let d = coherent_data(&geom, 0.3);
        let w = solve_w_alpha(0.400113, 2.273473, &d, &geom).unwrap();
        let mut prev = f64::INFINITY;
        for lambda in [0.02, 0.04, 0.082, 0.2] {
            let t = truncate_and_report(0.400113, &w, lambda, &d, &geom).unwrap();
            assert!(t.epsilon <= prev + 1e-15, "epsilon grew at lambda={lambda}");
            prev = t.epsilon;
        }
    }

    #[test]
    fn solver_config_validation() {
        let mut cfg = solver();
        cfg.grad_tol = 0.0;
        assert!(cfg.validated().is_err());
        let mut cfg = solver();
        cfg.initial_m = 0.9;
        assert!(cfg.validated().is_err());
        let mut cfg = solver();
        cfg.scan_points_for_bracketing = 1;
        assert!(cfg.validated().is_err());
    }
}
