//! Batches of independent channel realisations.

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::scalar::Real;
use crate::secondorder::NormalizedLevel;

use super::estimate::{estimate_lcr_afd, EmpiricalSecondOrder};
use super::gof::{rayleigh_ks, KsOutcome};
use super::{envelope, realize, ChannelConfig};

/// Seed of realisation `index` in a batch seeded with `seed` (SplitMix64
/// finaliser over the pair).
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloPlan<T> {
    pub realizations: usize,
    /// Duration of each realisation, seconds.
    pub duration: T,
    pub dt: T,
    pub levels: Vec<NormalizedLevel<T>>,
    /// Every `ks_stride`-th envelope sample enters the Rayleigh KS test, so
    /// the pooled samples are roughly uncorrelated.
    pub ks_stride: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSummary<T> {
    pub stats: EmpiricalSecondOrder<T>,
    pub ks: KsOutcome,
}

/// Runs `plan.realizations` realisations in parallel. Realisation `r` uses
/// seed `sub_seed(config.seed, r)`, and tallies are pooled in index order,
/// so the result does not depend on the thread count.
pub fn run_monte_carlo<T: Real>(
    config: &ChannelConfig<T>,
    plan: &MonteCarloPlan<T>,
) -> Result<MonteCarloSummary<T>> {
    if plan.realizations == 0 {
        return domain("realizations", 0.0, ">= 1");
    }
    if plan.ks_stride == 0 {
        return domain("ks_stride", 0.0, ">= 1");
    }
    let runs: Vec<(EmpiricalSecondOrder<T>, Vec<T>)> = (0..plan.realizations)
        .into_par_iter()
        .map(|r| {
            let cfg = config.with_seed(sub_seed(config.seed, r as u64));
            let series = envelope(&realize(&cfg), plan.duration, plan.dt)?;
            let stats = estimate_lcr_afd(&series, &plan.levels)?;
            let thinned = series
                .samples
                .iter()
                .step_by(plan.ks_stride)
                .copied()
                .collect();
            Ok((stats, thinned))
        })
        .collect::<Result<_>>()?;

    let mut iter = runs.into_iter();
    let (mut stats, mut pooled) = iter.next().expect("at least one realisation");
    for (s, thinned) in iter {
        stats.merge(&s)?;
        pooled.extend(thinned);
    }
    let ks = rayleigh_ks(&pooled, config.omega)?;
    Ok(MonteCarloSummary { stats, ks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doppler::MotionConfig;
    use crate::vmf::VmfScattering;

    #[test]
    fn sub_seeds_are_distinct() {
        let mut seen: Vec<u64> = (0..1000).map(|r| sub_seed(7, r)).collect();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 1000);
        assert_ne!(sub_seed(7, 0), sub_seed(8, 0));
    }

    #[test]
    fn batch_is_reproducible() {
        let scat = VmfScattering::new(0.0, 0.0, 2.0).unwrap();
        let motion = MotionConfig::new(5.0, scat.mean_direction(), 0.1).unwrap();
        let cfg = ChannelConfig::new(32, 1.0, scat, motion, 0.0, 99).unwrap();
        let f_m = 50.0_f64;
        let plan = MonteCarloPlan {
            realizations: 4,
            duration: 20.0 / f_m,
            dt: 1.0 / (32.0 * f_m),
            levels: vec![
                NormalizedLevel::new(0.5).unwrap(),
                NormalizedLevel::new(1.0).unwrap(),
            ],
            ks_stride: 16,
        };
        let a = run_monte_carlo(&cfg, &plan).unwrap();
        let b = run_monte_carlo(&cfg, &plan).unwrap();
        assert_eq!(a, b);
        assert!((a.stats.duration - 4.0 * 20.0 / f_m).abs() < 1e-12);
        assert_eq!(a.ks.n, 4 * (20 * 32 / 16 + 1));
    }
}
