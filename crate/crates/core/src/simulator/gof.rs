//! Kolmogorov–Smirnov goodness of fit against the Rayleigh law.

use crate::error::{domain, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsOutcome {
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
}

impl KsOutcome {
    pub fn passes(&self, significance: f64) -> bool {
        self.p_value >= significance
    }
}

/// Two-sided one-sample KS statistic `sup |F_n − F|`.
pub fn ks_statistic<T: Real, F: Fn(T) -> T>(samples: &[T], cdf: F) -> f64 {
    let mut sorted: Vec<f64> = samples.iter().map(|s| s.as_f64()).collect();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(T::lit(x)).as_f64();
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic p-value `Q_KS((√n + 0.12 + 0.11/√n) D)`.
pub fn kolmogorov_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=200 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-17 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// KS test of envelope samples against Rayleigh with `E[r²] = omega`,
/// `F(r) = 1 − e^{−r²/Ω}`.
pub fn rayleigh_ks<T: Real>(samples: &[T], omega: T) -> Result<KsOutcome> {
    if samples.is_empty() {
        return domain("samples.len()", 0.0, ">= 1");
    }
    if !omega.is_finite() || !(omega > T::zero()) {
        return domain("omega", omega.as_f64(), "finite and > 0");
    }
    let d = ks_statistic(samples, |r: T| -(-(r * r) / omega).exp_m1());
    Ok(KsOutcome {
        statistic: d,
        p_value: kolmogorov_p_value(d, samples.len()),
        n: samples.len(),
    })
}
