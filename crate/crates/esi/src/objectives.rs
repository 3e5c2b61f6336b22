//! FWI and ESI objective functions, the closed-form penalized wavelet
//! solve, and the reduced objective with its gradient.
//!
//! Everything is normalized by the squared data norm, so all reported
//! values are dimensionless and invariant under rescaling the data. All
//! integrals are trapezoid sums on the record grid.
//!
//! Because the forward map is a scaled sample shift, the normal equation
//! `(F^T F + alpha^2 A^T A) w = F^T d` is diagonal on the lag grid and the
//! penalized wavelet has the closed form
//!
//! ```text
//! w_alpha(tau_i) = 4 pi r d(tau_i + m r) / (1 + (4 pi r alpha tau_i)^2).
//! ```
//!
//! Substituting back gives one-dimensional integrals for the reduced
//! objective and its slowness derivative (`j_reduced`, `grad_j_reduced`)
//! that need no wavelet solve at all; the wavelet route is kept alongside
//! as a consistency check (`j = e + alpha^2 g` to roundoff).

use crate::forward::{forward_analytic, forward_sampled, lag_grid_for, Geometry};
use crate::signal::{self, Ricker, SampledWavelet, Trace};
use crate::{Error, Result};

/// One evaluation of the reduced objective, in the layout of the iteration
/// tables: slowness, weight, penalty, misfit, objective, gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalRecord {
    pub m: f64,
    pub alpha: f64,
    pub g: f64,
    pub e: f64,
    pub j: f64,
    pub dj_dm: f64,
}

fn data_norm_sq(d: &Trace) -> Result<f64> {
    let n2 = signal::norm_sq(d);
    if n2 == 0.0 {
        return Err(Error::ZeroDataNorm);
    }
    Ok(n2)
}

/// Basic least-squares misfit `e = ||F[m] w - d||^2 / (2 ||d||^2)` for a
/// sampled wavelet on the lag grid of `m`.
pub fn e_basic(m: f64, w: &SampledWavelet, d: &Trace, geom: &Geometry) -> Result<f64> {
    let n2 = data_norm_sq(d)?;
    let pred = forward_sampled(m, w, geom)?;
    let resid = pred.sub(d)?;
    Ok(0.5 * signal::norm_sq(&resid) / n2)
}

/// Misfit of a fixed analytic wavelet as a function of slowness: the
/// restricted FWI objective. The wavelet is evaluated exactly at the
/// shifted record times.
pub fn e_restricted(m: f64, w_star: &Ricker, d: &Trace, geom: &Geometry) -> Result<f64> {
    let n2 = data_norm_sq(d)?;
    let pred = forward_analytic(m, w_star, geom);
    let resid = pred.sub(d)?;
    Ok(0.5 * signal::norm_sq(&resid) / n2)
}

/// Reduced FWI objective: the misfit minimized over all wavelets supported
/// in `[-lambda, lambda]`.
///
/// The optimal wavelet copies `4 pi r d(tau + m r)` on the supported lags
/// (a scaled shift fits any sample it is allowed to touch), so the minimum
/// is half the relative energy of `d` outside the supported window. Lag
/// samples with `|tau_i| <= lambda` count as inside.
pub fn e_reduced_fwi(m: f64, d: &Trace, lambda: f64, geom: &Geometry) -> Result<f64> {
    if lambda <= 0.0 || !lambda.is_finite() {
        return Err(Error::Validation(format!("support radius must be positive, got {lambda}")));
    }
    let n2 = data_norm_sq(d)?;
    let lag = lag_grid_for(m, geom);
    // Residual keeps only samples the supported wavelet cannot reach.
    let samples: Vec<f64> = d
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &v)| if lag.t(i).abs() <= lambda { 0.0 } else { v })
        .collect();
    let resid = Trace::new(*d.grid(), samples)?;
    Ok(0.5 * signal::norm_sq(&resid) / n2)
}

/// Penalty `g = ||A w||^2 / (2 ||d||^2)` with annihilator `(A w)(tau) =
/// tau w(tau)`.
pub fn g_penalty(w: &SampledWavelet, d_norm_sq: f64) -> Result<f64> {
    if d_norm_sq <= 0.0 {
        return Err(Error::ZeroDataNorm);
    }
    let lag = w.lag_grid();
    let weighted: Vec<f64> = w
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &v)| lag.t(i) * v)
        .collect();
    Ok(0.5 * signal::trapezoid_sq(lag.dt(), &weighted) / d_norm_sq)
}

/// Unique minimizer of the penalized objective over wavelets: the solution
/// of the normal equation, in closed form on the lag grid. For `alpha = 0`
/// this is the exact-fit wavelet.
pub fn solve_w_alpha(m: f64, alpha: f64, d: &Trace, geom: &Geometry) -> Result<SampledWavelet> {
    if alpha < 0.0 || !alpha.is_finite() {
        return Err(Error::Validation(format!("penalty weight must be >= 0, got {alpha}")));
    }
    if d.grid() != geom.record_grid() {
        return Err(Error::GridMismatch("trace grid does not match the record grid".into()));
    }
    let lag = lag_grid_for(m, geom);
    let four_pi_r = 1.0 / geom.spreading();
    let samples = d
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let q = four_pi_r * alpha * lag.t(i);
            four_pi_r * v / (1.0 + q * q)
        })
        .collect();
    SampledWavelet::new(lag, samples)
}

/// Reduced ESI objective and gradient at `(m, alpha)`.
///
/// The objective and gradient come from their explicit integral forms; the
/// misfit and penalty come from the solved wavelet, which makes the record
/// self-checking: `j = e + alpha^2 g` to roundoff.
pub fn j_reduced(m: f64, alpha: f64, d: &Trace, geom: &Geometry) -> Result<EvalRecord> {
    let n2 = data_norm_sq(d)?;
    let w = solve_w_alpha(m, alpha, d, geom)?;
    let e = e_basic(m, &w, d, geom)?;
    let g = g_penalty(&w, n2)?;

    // Lag values come from the lag grid, the same arithmetic the wavelet
    // solve uses, so the two routes to the objective agree to roundoff.
    let grid = geom.record_grid();
    let lag = lag_grid_for(m, geom);
    let beta = alpha / geom.spreading(); // 4 pi r alpha
    let integrand: Vec<f64> = d
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let q = beta * lag.t(i);
            let q2 = q * q;
            q2 / (1.0 + q2) * v * v
        })
        .collect();
    let j = 0.5 * signal::trapezoid_sum(grid.dt(), &integrand) / n2;
    let dj_dm = grad_j_reduced(m, alpha, d, geom)?;

    let rec = EvalRecord { m, alpha, g, e, j, dj_dm };
    debug_assert!(
        (rec.j - (rec.e + alpha * alpha * rec.g)).abs() <= 1e-12 * rec.j.abs().max(1.0),
        "reduced objective inconsistent with misfit + penalty: {rec:?}"
    );
    Ok(rec)
}

/// Slowness derivative of the reduced ESI objective, from its explicit
/// integral form.
pub fn grad_j_reduced(m: f64, alpha: f64, d: &Trace, geom: &Geometry) -> Result<f64> {
    let n2 = data_norm_sq(d)?;
    let grid = geom.record_grid();
    let lag = lag_grid_for(m, geom);
    let beta = alpha / geom.spreading(); // 4 pi r alpha
    let integrand: Vec<f64> = d
        .samples()
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let u = lag.t(i);
            let q = beta * u;
            let denom = 1.0 + q * q;
            u / (denom * denom) * v * v
        })
        .collect();
    Ok(-(beta * beta) / n2 * signal::trapezoid_sum(grid.dt(), &integrand))
}
