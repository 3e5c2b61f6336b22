//! Calculators for the theoretical guarantees: the stationary-point error
//! radius, the minimal truncation lag, the (conservative) truncated data
//! error, and the plateau predicate.

use std::fmt;

use crate::{Error, Result};

/// Largest admissible noise-to-signal ratio, `(sqrt(5) - 1) / 2`. At this
/// value `eta (1 + eta) = 1` and the error amplification diverges.
pub fn eta_limit() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// Noise amplification factor `f(eta) = 2 eta (1 + eta) / (1 - eta (1 + eta))`.
///
/// Defined for `0 <= eta < (sqrt(5) - 1) / 2`; outside that range the
/// stationary-point bound does not apply and an error is returned.
pub fn f_eta(eta: f64) -> Result<f64> {
    if !(0.0..eta_limit()).contains(&eta) {
        return Err(Error::Validation(format!(
            "noise-to-signal ratio {eta} outside [0, {:.6}); the stationary-point bound \
             does not apply",
            eta_limit()
        )));
    }
    let p = eta * (1.0 + eta);
    Ok(2.0 * p / (1.0 - p))
}

/// Radius of the interval around the target slowness that contains every
/// stationary point of the reduced objective: `(1 + f(eta)) lambda / r`.
pub fn result2_radius(eta: f64, lambda: f64, r: f64) -> Result<f64> {
    Ok((1.0 + f_eta(eta)?) * lambda / r)
}

/// Smallest truncation lag for which the truncated wavelet still solves
/// the inverse problem: `(2 + f(eta)) mu`.
pub fn lambda_min(mu: f64, eta: f64) -> Result<f64> {
    Ok((2.0 + f_eta(eta)?) * mu)
}

/// Guaranteed-achievable relative data error after truncation:
/// `s / (1 + s) + eta` with `s = (8 pi r alpha mu)^2`.
///
/// The estimate stacks triangle inequalities and is deliberately
/// conservative; measuring the error on the predicted data directly is
/// the recommended practice.
pub fn eps_min(alpha: f64, mu: f64, eta: f64, r: f64) -> f64 {
    let s = (8.0 * std::f64::consts::PI * r * alpha * mu).powi(2);
    s / (1.0 + s) + eta
}

/// Plateau condition: slowness far enough from the target that the
/// least-squares objectives sit on their flat maximum-error levels.
///
/// The threshold is inclusive; a relative guard keeps the exact boundary
/// inclusive under floating-point subtraction as well.
pub fn result1_predicate(m: f64, m_star: f64, lambda: f64, r: f64) -> bool {
    let threshold = 2.0 * lambda / r;
    (m - m_star).abs() >= threshold * (1.0 - 1e-12)
}

/// All four calculator outputs for one parameter set, for the `bounds`
/// subcommand and the experiment reports.
#[derive(Debug, Clone, Copy)]
pub struct BoundReport {
    pub mu: f64,
    pub eta: f64,
    pub r: f64,
    pub alpha: f64,
    pub lambda: f64,
    /// None when `eta` is outside the admissible range.
    pub f_eta: Option<f64>,
    pub result2_radius: Option<f64>,
    pub lambda_min: Option<f64>,
    pub eps_min: f64,
}

impl BoundReport {
    pub fn compute(mu: f64, eta: f64, r: f64, alpha: f64, lambda: f64) -> BoundReport {
        BoundReport {
            mu,
            eta,
            r,
            alpha,
            lambda,
            f_eta: f_eta(eta).ok(),
            result2_radius: result2_radius(eta, lambda, r).ok(),
            lambda_min: lambda_min(mu, eta).ok(),
            eps_min: eps_min(alpha, mu, eta, r),
        }
    }

    pub fn eta_admissible(&self) -> bool {
        self.f_eta.is_some()
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "inputs: mu={} s  eta={}  r={} km  alpha={}  lambda={} s",
            self.mu, self.eta, self.r, self.alpha, self.lambda
        )?;
        match self.f_eta {
            Some(v) => writeln!(f, "f(eta)                  = {v:.6}")?,
            None => writeln!(
                f,
                "f(eta)                  = n/a (eta >= {:.6}, bound inapplicable)",
                eta_limit()
            )?,
        }
        match self.result2_radius {
            Some(v) => writeln!(f, "stationary-point radius = {v:.6} s/km")?,
            None => writeln!(f, "stationary-point radius = n/a")?,
        }
        match self.lambda_min {
            Some(v) => writeln!(f, "minimal truncation lag  = {v:.6} s")?,
            None => writeln!(f, "minimal truncation lag  = n/a")?,
        }
        writeln!(f, "truncated-error bound   = {:.6} (conservative)", self.eps_min)?;
        write!(
            f,
            "plateau threshold       = {:.6} s/km (2 lambda / r)",
            2.0 * self.lambda / self.r
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn amplification_factor_values() {
        assert_eq!(f_eta(0.0).unwrap(), 0.0);
        // Direct rational arithmetic: 2 * 0.3 * 1.3 / (1 - 0.39).
        assert_relative_eq!(f_eta(0.3).unwrap(), 0.78 / 0.61, max_relative = 1e-14);
        assert!(f_eta(0.62).is_err());
        assert!(f_eta(-0.1).is_err());
        // 0.61 still sits below the limit (sqrt(5) - 1) / 2 = 0.61803...
        assert!(f_eta(0.61).is_ok());
    }

    #[test]
    fn amplification_factor_is_increasing_and_diverges() {
        let mut prev = -1.0;
        for k in 0..100 {
            let eta = 0.6179 * k as f64 / 99.0;
            let v = f_eta(eta).unwrap();
            assert!(v > prev, "f not increasing at eta={eta}");
            prev = v;
        }
        assert!(f_eta(0.6179).unwrap() > 1e3);
    }

    #[test]
    fn stationary_point_radius() {
        assert_relative_eq!(result2_radius(0.0, 0.025, 1.0).unwrap(), 0.025, max_relative = 0.0);
        // The published 30%-noise error radius.
        assert_abs_diff_eq!(result2_radius(0.3, 0.025, 1.0).unwrap(), 0.057, epsilon = 5e-4);
        let mut prev = 0.0;
        for k in 1..=60 {
            let eta = 0.01 * k as f64;
            let v = result2_radius(eta, 0.025, 1.0).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn truncation_lag_values() {
        assert_abs_diff_eq!(lambda_min(0.025, 0.3).unwrap(), 0.082, epsilon = 5e-4);
        assert_relative_eq!(lambda_min(0.025, 0.0).unwrap(), 0.05, max_relative = 0.0);
        let f01 = f_eta(0.1).unwrap();
        assert_relative_eq!(
            lambda_min(0.025, 0.1).unwrap(),
            (2.0 + f01) * 0.025,
            max_relative = 1e-15
        );
    }

    #[test]
    fn truncated_error_estimate() {
        assert_eq!(eps_min(0.0, 0.025, 0.3, 1.0), 0.3);
        assert_abs_diff_eq!(eps_min(1e6, 0.025, 0.3, 1.0), 1.3, epsilon = 1e-6);
        // At the final coherent-noise iterate the estimate predicts nearly
        // 100% error, far above the ~0.29 actually measured: the bound is
        // real but pessimistic.
        let v = eps_min(2.273473, 0.025, 0.3, 1.0);
        assert!(v > 0.9 && v < 1.0, "estimate {v}");
        assert!(v > 3.0 * 0.29);
    }

    #[test]
    fn plateau_predicate() {
        assert!(result1_predicate(0.45, 0.4, 0.025, 1.0));
        assert!(!result1_predicate(0.42, 0.4, 0.025, 1.0));
        // Inclusive at the exact threshold.
        assert!(result1_predicate(0.5, 0.4, 0.05, 1.0));
    }

    #[test]
    fn report_flags_inadmissible_noise() {
        let r = BoundReport::compute(0.025, 0.7, 1.0, 1.0, 0.082);
        assert!(!r.eta_admissible());
        assert!(r.f_eta.is_none() && r.result2_radius.is_none() && r.lambda_min.is_none());
        let ok = BoundReport::compute(0.025, 0.3, 1.0, 1.0, 0.082);
        assert!(ok.eta_admissible());
    }
}
