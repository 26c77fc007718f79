use crate::doppler::DopplerMoments;
use crate::error::{domain, Error, Result};
use crate::scalar::Real;
use crate::secondorder::NormalizedLevel;

use super::{ChannelRealization, EnvelopeSeries};

/// Empirical crossing and fade statistics at a set of levels.
///
/// A crossing is a strict up-crossing, `s_i < thr ≤ s_{i+1}`; a sample equal
/// to the threshold counts as above it. A fade is a maximal run of samples
/// below the threshold and lasts `run length · dt`. Fades that touch either
/// end of the series are left out of the AFD numerator and denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSecondOrder<T> {
    pub levels: Vec<NormalizedLevel<T>>,
    pub lcr_hat: Vec<T>,
    /// `None` where no fade completed inside the series.
    pub afd_hat: Vec<Option<T>>,
    pub n_crossings: Vec<usize>,
    pub n_fades: Vec<usize>,
    pub total_fade_time: Vec<T>,
    /// Time below each level over all samples, boundary runs included.
    pub time_below: Vec<T>,
    /// Total observed time.
    pub duration: T,
}

impl<T: Real> EmpiricalSecondOrder<T> {
    fn refresh(&mut self) {
        self.lcr_hat = self
            .n_crossings
            .iter()
            .map(|&n| T::from_count(n) / self.duration)
            .collect();
        self.afd_hat = self
            .n_fades
            .iter()
            .zip(&self.total_fade_time)
            .map(|(&n, &t)| (n > 0).then(|| t / T::from_count(n)))
            .collect();
    }

    /// Pools the tallies of another estimate taken at the same levels.
    pub fn merge(&mut self, other: &Self) -> Result<()> {
        if self.levels != other.levels {
            return Err(Error::Invalid(
                "cannot merge estimates taken at different levels".into(),
            ));
        }
        for i in 0..self.levels.len() {
            self.n_crossings[i] += other.n_crossings[i];
            self.n_fades[i] += other.n_fades[i];
            self.total_fade_time[i] = self.total_fade_time[i] + other.total_fade_time[i];
            self.time_below[i] = self.time_below[i] + other.time_below[i];
        }
        self.duration = self.duration + other.duration;
        self.refresh();
        Ok(())
    }

    /// Fraction of observed time spent below each level.
    pub fn fraction_below(&self) -> Vec<T> {
        self.time_below.iter().map(|&t| t / self.duration).collect()
    }
}

/// Counts crossings and fades of `series` at each level `ρ · rms_ref`.
pub fn estimate_lcr_afd<T: Real>(
    series: &EnvelopeSeries<T>,
    levels: &[NormalizedLevel<T>],
) -> Result<EmpiricalSecondOrder<T>> {
    let s = &series.samples;
    if s.len() < 2 {
        return domain("series.len()", s.len() as f64, ">= 2");
    }
    let n = levels.len();
    let mut out = EmpiricalSecondOrder {
        levels: levels.to_vec(),
        lcr_hat: Vec::new(),
        afd_hat: Vec::new(),
        n_crossings: vec![0; n],
        n_fades: vec![0; n],
        total_fade_time: vec![T::zero(); n],
        time_below: vec![T::zero(); n],
        duration: series.duration(),
    };
    for (j, level) in levels.iter().enumerate() {
        let thr = level.rho() * series.rms_ref;
        let mut below = 0usize;
        let mut fade_samples = 0usize;
        // Start index of the current run below threshold, if any.
        let mut run_start: Option<usize> = None;
        for (i, &x) in s.iter().enumerate() {
            if x < thr {
                below += 1;
                if run_start.is_none() {
                    run_start = Some(i);
                }
            } else if let Some(start) = run_start.take() {
                out.n_crossings[j] += 1;
                if start > 0 {
                    out.n_fades[j] += 1;
                    fade_samples += i - start;
                }
            }
        }
        out.total_fade_time[j] = T::from_count(fade_samples) * series.dt;
        out.time_below[j] = T::from_count(below) * series.dt;
    }
    out.refresh();
    Ok(out)
}

/// Sample mean, raw mean square and unbiased standard deviation of the
/// per-path Doppler shifts.
pub fn estimate_doppler_moments<T: Real>(
    real: &ChannelRealization<T>,
) -> Result<DopplerMoments<T>> {
    let n = real.dopplers.len();
    if n < 2 {
        return domain("n_paths", n as f64, ">= 2");
    }
    let nf = T::from_count(n);
    let mean = real.dopplers.iter().fold(T::zero(), |a, &f| a + f) / nf;
    let mean_square = real.dopplers.iter().fold(T::zero(), |a, &f| a + f * f) / nf;
    let ss = real
        .dopplers
        .iter()
        .fold(T::zero(), |a, &f| a + (f - mean) * (f - mean));
    Ok(DopplerMoments {
        mean,
        mean_square,
        spread: (ss / (nf - T::one())).sqrt(),
    })
}
