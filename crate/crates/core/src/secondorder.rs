//! Level-crossing rate and average fade duration of a Rayleigh envelope.
//!
//! For an envelope level `ρ` normalised to the RMS value `√Ω` and Doppler
//! spread `σ_D`:
//!
//! ```text
//! L(ρ) = 2√π σ_D ρ e^{−ρ²}
//! T(ρ) = (e^{ρ²} − 1) / (2√π σ_D ρ)
//! ```
//!
//! The Rayleigh envelope assumption (no dominant component) is a model
//! precondition and is not checked here.

use crate::doppler::{doppler_spread, geometry, MotionConfig};
use crate::error::{domain, Result};
use crate::scalar::Real;
use crate::vmf::VmfScattering;

/// Envelope level relative to the RMS value, `ρ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NormalizedLevel<T>(T);

impl<T: Real> NormalizedLevel<T> {
    pub fn new(rho: T) -> Result<Self> {
        if !rho.is_finite() || !(rho > T::zero()) {
            return domain("rho", rho.as_f64(), "finite and > 0");
        }
        Ok(Self(rho))
    }

    /// Level given in dB relative to RMS: `ρ = 10^{dB/20}`.
    pub fn from_db(db: T) -> Result<Self> {
        Self::new(T::lit(10.0).powf(db / T::lit(20.0)))
    }

    pub fn rho(&self) -> T {
        self.0
    }

    pub fn db(&self) -> T {
        T::lit(20.0) * self.0.log10()
    }
}

fn check_spread<T: Real>(sigma_d: T) -> Result<()> {
    if !sigma_d.is_finite() || sigma_d < T::zero() {
        return domain("sigma_d", sigma_d.as_f64(), "finite and >= 0");
    }
    Ok(())
}

/// Level-crossing rate in crossings per second.
pub fn lcr<T: Real>(sigma_d: T, level: NormalizedLevel<T>) -> Result<T> {
    check_spread(sigma_d)?;
    let rho = level.rho();
    Ok(T::lit(2.0) * T::PI().sqrt() * sigma_d * rho * (-rho * rho).exp())
}

/// Average fade duration in seconds.
///
/// Returns `+∞` when `σ_D = 0`: the envelope is constant and a fade, once
/// entered, never ends.
pub fn afd<T: Real>(sigma_d: T, level: NormalizedLevel<T>) -> Result<T> {
    check_spread(sigma_d)?;
    if sigma_d == T::zero() {
        return Ok(T::infinity());
    }
    let rho = level.rho();
    Ok((rho * rho).exp_m1() / (T::lit(2.0) * T::PI().sqrt() * sigma_d * rho))
}

/// Level and value of the maximum crossing rate: `ρ = 1/√2`,
/// `L_max = σ_D √(2π/e)`.
pub fn max_lcr<T: Real>(sigma_d: T) -> Result<(NormalizedLevel<T>, T)> {
    check_spread(sigma_d)?;
    let rho = NormalizedLevel(T::FRAC_1_SQRT_2());
    Ok((rho, sigma_d * (T::lit(2.0) * T::PI() / T::E()).sqrt()))
}

/// LCR and AFD evaluated on a grid of levels.
#[derive(Debug, Clone, PartialEq)]
pub struct LcrAfdCurve<T> {
    pub levels: Vec<NormalizedLevel<T>>,
    pub lcr: Vec<T>,
    pub afd: Vec<T>,
}

impl<T: Real> LcrAfdCurve<T> {
    /// Curve for a given Doppler spread. Levels must be strictly increasing.
    pub fn from_spread(sigma_d: T, levels: &[NormalizedLevel<T>]) -> Result<Self> {
        check_spread(sigma_d)?;
        if levels.is_empty() {
            return domain("levels.len()", 0.0, "non-empty");
        }
        if let Some(w) = levels.windows(2).find(|w| w[1].rho() <= w[0].rho()) {
            return domain("levels", w[1].rho().as_f64(), "strictly increasing");
        }
        let lcr = levels
            .iter()
            .map(|&l| lcr(sigma_d, l))
            .collect::<Result<Vec<_>>>()?;
        let afd = levels
            .iter()
            .map(|&l| afd(sigma_d, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            levels: levels.to_vec(),
            lcr,
            afd,
        })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

/// LCR/AFD curve for a scattering cluster and motion, using the closed-form
/// Doppler spread.
pub fn curve<T: Real>(
    scat: &VmfScattering<T>,
    motion: &MotionConfig<T>,
    levels: &[NormalizedLevel<T>],
) -> Result<LcrAfdCurve<T>> {
    let sigma = doppler_spread(scat, &geometry(scat, motion));
    LcrAfdCurve::from_spread(sigma, levels)
}

/// Levels from `min_db` to `max_db` inclusive in steps of `step_db`.
pub fn db_grid<T: Real>(min_db: T, max_db: T, step_db: T) -> Result<Vec<NormalizedLevel<T>>> {
    if !(step_db > T::zero()) || !step_db.is_finite() {
        return domain("step_db", step_db.as_f64(), "finite and > 0");
    }
    if !(max_db >= min_db) || !min_db.is_finite() || !max_db.is_finite() {
        return domain("max_db", max_db.as_f64(), ">= min_db");
    }
    let n = ((max_db - min_db) / step_db + T::lit(1e-9))
        .floor()
        .to_usize()
        .unwrap_or(0);
    (0..=n)
        .map(|i| NormalizedLevel::from_db(min_db + step_db * T::from_count(i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vmf::Direction3;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn level(rho: f64) -> NormalizedLevel<f64> {
        NormalizedLevel::new(rho).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn isotropic_fixtures() {
        // mpmath: 2√(π/3) e^{−1} and √(3/π)(e − 1)/2
        let sigma = 1.0 / 3.0_f64.sqrt();
        assert!(rel(lcr(sigma, level(1.0)).unwrap(), 0.752_921_714_910_331_899_2) < 1e-14);
        assert!(rel(afd(sigma, level(1.0)).unwrap(), 0.839_556_817_542_231_656_5) < 1e-14);
    }

    #[test]
    fn max_lcr_fixture() {
        let (rho, l) = max_lcr(1.0).unwrap();
        assert_eq!(rho.rho(), FRAC_1_SQRT_2);
        assert!(rel(l, 1.520_346_901_066_280_805_6) < 1e-15);
        let (_, zero) = max_lcr(0.0).unwrap();
        assert_eq!(zero, 0.0);
        assert!(rel(lcr(2.5, rho).unwrap(), 2.5 * l) < 1e-15);
    }

    #[test]
    fn point_scattering_limits() {
        assert_eq!(lcr(0.0, level(0.3)).unwrap(), 0.0);
        assert_eq!(afd(0.0, level(0.3)).unwrap(), f64::INFINITY);
        assert!(afd(1e-300, level(0.3)).unwrap() > 1e290);
    }

    #[test]
    fn domain_errors() {
        assert!(NormalizedLevel::new(0.0).is_err());
        assert!(NormalizedLevel::new(-1.0).is_err());
        assert!(lcr(-1.0, level(1.0)).is_err());
        assert!(afd(f64::NAN, level(1.0)).is_err());
        assert!(LcrAfdCurve::from_spread(1.0, &[]).is_err());
        assert!(LcrAfdCurve::from_spread(1.0, &[level(1.0), level(0.5)]).is_err());
    }

    #[test]
    fn db_levels() {
        let l = NormalizedLevel::from_db(-3.0103).unwrap();
        assert!((l.rho() - FRAC_1_SQRT_2).abs() < 1e-5);
        let grid = db_grid(-30.0_f64, 10.0, 0.25).unwrap();
        assert_eq!(grid.len(), 161);
        assert!((grid[160].db() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn curve_isotropic_single_level() {
        let scat = VmfScattering::isotropic();
        let d = Direction3::new(1.0, 0.0, 0.0).unwrap();
        let motion = MotionConfig::new(1.0, d, 1.0).unwrap();
        let c = curve(&scat, &motion, &[level(1.0)]).unwrap();
        assert!(rel(c.lcr[0], 0.752_921_714_910_331_899_2) < 1e-14);
        assert!(rel(c.afd[0], 0.839_556_817_542_231_656_5) < 1e-14);
    }

    #[test]
    fn lcr_unimodal_at_half_power() {
        let grid: Vec<f64> = (1..=4000).map(|i| i as f64 * 1e-3).collect();
        let vals: Vec<f64> = grid.iter().map(|&r| lcr(1.0, level(r)).unwrap()).collect();
        let imax = vals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        assert!((grid[imax] - FRAC_1_SQRT_2).abs() <= 1e-3);
        assert!(vals[..imax].windows(2).all(|w| w[1] > w[0]));
        assert!(vals[imax..].windows(2).all(|w| w[1] < w[0]));
    }

    proptest! {
        #[test]
        fn lcr_times_afd_is_rayleigh_cdf(sigma in 1e-3..1e4_f64, rho in 1e-3..5.0_f64) {
            let l = level(rho);
            let p = lcr(sigma, l).unwrap() * afd(sigma, l).unwrap();
            let cdf = -(-rho * rho).exp_m1();
            prop_assert!((p - cdf).abs() <= 1e-12 * cdf);
        }

        #[test]
        fn afd_increasing_in_level(sigma in 1e-3..1e3_f64, rho in 1e-3..5.0_f64, dr in 1e-4..1.0_f64) {
            let a = afd(sigma, level(rho)).unwrap();
            let b = afd(sigma, level(rho + dr)).unwrap();
            prop_assert!(b > a);
        }

        #[test]
        fn max_lcr_bounds_curve(sigma in 0.0..1e3_f64, rho in 1e-3..6.0_f64) {
            let (_, m) = max_lcr(sigma).unwrap();
            prop_assert!(lcr(sigma, level(rho)).unwrap() <= m * (1.0 + 1e-15));
        }
    }
}
