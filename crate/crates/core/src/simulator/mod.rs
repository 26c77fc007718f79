//! Sum-of-sinusoids realisation of the narrowband channel coefficient
//!
//! ```text
//! H(t) = Σ_n A_n exp(j(φ_n − 2π f_D^n t)),   f_D^n = (1/λ) k̂_nᵀ v
//! ```
//!
//! with directions of arrival `k̂_n` drawn from the vMF model. Initial path
//! delays only enter as the uniformly distributed phases `φ_n`; amplitudes
//! are equal, `A_n = √(Ω/N)`, so every realisation carries power `Ω`.

mod estimate;
mod gof;
mod monte_carlo;

pub use estimate::{estimate_doppler_moments, estimate_lcr_afd, EmpiricalSecondOrder};
pub use gof::{kolmogorov_p_value, ks_statistic, rayleigh_ks, KsOutcome};
pub use monte_carlo::{run_monte_carlo, sub_seed, MonteCarloPlan, MonteCarloSummary};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::doppler::MotionConfig;
use crate::error::{domain, Error, Result};
use crate::scalar::Real;
use crate::vmf::{Direction3, VmfScattering};

/// Coarsest admissible sampling interval is `1/(SAMPLES_PER_DOPPLER · f_m)`.
pub const SAMPLES_PER_DOPPLER: f64 = 32.0;

/// ChaCha stream used for the path phases (stream 0 drives the DOAs).
const PHASE_STREAM: u64 = 1;

const TIME_CHUNK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig<T> {
    pub n_paths: usize,
    /// Local average received power `Ω`.
    pub omega: T,
    pub scat: VmfScattering<T>,
    pub motion: MotionConfig<T>,
    /// Frequency at which the coefficient is observed. Delays are absorbed
    /// into the random phases, so this is carried as metadata only.
    pub carrier_offset: T,
    pub seed: u64,
}

impl<T: Real> ChannelConfig<T> {
    pub fn new(
        n_paths: usize,
        omega: T,
        scat: VmfScattering<T>,
        motion: MotionConfig<T>,
        carrier_offset: T,
        seed: u64,
    ) -> Result<Self> {
        if n_paths == 0 {
            return domain("n_paths", 0.0, ">= 1");
        }
        if !omega.is_finite() || !(omega > T::zero()) {
            return domain("omega", omega.as_f64(), "finite and > 0");
        }
        if !carrier_offset.is_finite() {
            return domain("carrier_offset", carrier_offset.as_f64(), "finite");
        }
        Ok(Self {
            n_paths,
            omega,
            scat,
            motion,
            carrier_offset,
            seed,
        })
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..*self }
    }
}

/// One draw of the path parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization<T> {
    pub amplitudes: Vec<T>,
    pub phases: Vec<T>,
    pub doas: Vec<Direction3<T>>,
    pub dopplers: Vec<T>,
    /// `f_m` of the motion the realisation was drawn for.
    pub max_doppler: T,
}

impl<T: Real> ChannelRealization<T> {
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// `Σ A_n²`.
    pub fn power(&self) -> T {
        self.amplitudes
            .iter()
            .fold(T::zero(), |acc, &a| acc + a * a)
    }
}

/// Envelope `|H(t_i)|` sampled at `t_i = i·dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeSeries<T> {
    pub samples: Vec<T>,
    pub dt: T,
    /// `√Ω`, the level that `ρ = 1` refers to.
    pub rms_ref: T,
}

impl<T: Real> EnvelopeSeries<T> {
    /// Time spanned by the samples, `(len − 1)·dt`.
    pub fn duration(&self) -> T {
        T::from_count(self.samples.len().saturating_sub(1)) * self.dt
    }
}

/// Draws amplitudes, phases and directions of arrival for `config`.
pub fn realize<T: Real>(config: &ChannelConfig<T>) -> ChannelRealization<T> {
    let n = config.n_paths;
    let amplitude = (config.omega / T::from_count(n)).sqrt();
    let doas = config.scat.sample_directions(n, config.seed);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(PHASE_STREAM);
    let two_pi = T::lit(2.0) * T::PI();
    let phases = (0..n).map(|_| T::lit(rng.gen::<f64>()) * two_pi).collect();

    let f_m = config.motion.max_doppler();
    let v = config.motion.direction();
    let dopplers = doas
        .iter()
        .map(|k| f_m * k.dot(&v).max(-T::one()).min(T::one()))
        .collect();

    ChannelRealization {
        amplitudes: vec![amplitude; n],
        phases,
        doas,
        dopplers,
        max_doppler: f_m,
    }
}

fn check_sampling<T: Real>(real: &ChannelRealization<T>, duration: T, dt: T) -> Result<usize> {
    if !dt.is_finite() || !(dt > T::zero()) {
        return domain("dt", dt.as_f64(), "finite and > 0");
    }
    if !duration.is_finite() || !(duration > T::zero()) {
        return domain("duration", duration.as_f64(), "finite and > 0");
    }
    let max_dt = T::one() / (T::lit(SAMPLES_PER_DOPPLER) * real.max_doppler);
    if dt > max_dt * (T::one() + T::lit(1e-12)) {
        return Err(Error::Sampling {
            dt: dt.as_f64(),
            max_dt: max_dt.as_f64(),
        });
    }
    let steps = (duration / dt + T::lit(1e-9))
        .floor()
        .to_usize()
        .ok_or_else(|| Error::Invalid("too many samples".into()))?;
    Ok(steps.max(1) + 1)
}

/// In-phase and quadrature samples of `H(t_i)`, `t_i = i·dt`, `t ≤ duration`.
pub fn complex_baseband<T: Real>(
    real: &ChannelRealization<T>,
    duration: T,
    dt: T,
) -> Result<Vec<(T, T)>> {
    let len = check_sampling(real, duration, dt)?;
    let two_pi = T::lit(2.0) * T::PI();
    let omegas: Vec<T> = real.dopplers.iter().map(|&f| two_pi * f).collect();
    let chunks: Vec<Vec<(T, T)>> = (0..len.div_ceil(TIME_CHUNK))
        .into_par_iter()
        .map(|c| {
            let start = c * TIME_CHUNK;
            let end = len.min(start + TIME_CHUNK);
            (start..end)
                .map(|i| {
                    let t = T::from_count(i) * dt;
                    let mut re = T::zero();
                    let mut im = T::zero();
                    for ((&a, &phi), &w) in real.amplitudes.iter().zip(&real.phases).zip(&omegas) {
                        let (s, c) = (phi - w * t).sin_cos();
                        re = re + a * c;
                        im = im + a * s;
                    }
                    (re, im)
                })
                .collect()
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Envelope series of a realisation. Requires `dt ≤ 1/(32 f_m)`.
pub fn envelope<T: Real>(
    real: &ChannelRealization<T>,
    duration: T,
    dt: T,
) -> Result<EnvelopeSeries<T>> {
    let iq = complex_baseband(real, duration, dt)?;
    Ok(EnvelopeSeries {
        samples: iq.into_iter().map(|(re, im)| re.hypot(im)).collect(),
        dt,
        rms_ref: real.power().sqrt(),
    })
}
