//! Closed-form Doppler statistics of a vMF scattering cluster.
//!
//! With `f_m = ‖v‖/λ`, `f_μ = f_m cos β` and `w_κ = coth κ − 1/κ`:
//!
//! ```text
//! μ_D     = w_κ f_μ
//! E[f_D²] = (w_κ/κ) f_m² + (1 − 3 w_κ/κ) f_μ²
//! σ_D²    = (w_κ/κ) f_m² + (1 − 3 w_κ/κ − w_κ²) f_μ²
//! ```
//!
//! The Doppler density itself is
//! `p(f) = 1/(2 f_m) · κ/sinh κ · e^{κ f̂_μ f̂} · I₀(κ √(1−f̂_μ²) √(1−f̂²))`
//! with `f̂ = f/f_m`.

use crate::error::{domain, Error, Result};
use crate::oracle;
use crate::quadrature::QuadratureSpec;
use crate::scalar::Real;
use crate::specfun;
use crate::vmf::{Direction3, VmfScattering};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Mobile antenna motion: speed, direction and carrier wavelength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionConfig<T> {
    speed: T,
    direction: Direction3<T>,
    wavelength: T,
}

impl<T: Real> MotionConfig<T> {
    pub fn new(speed: T, direction: Direction3<T>, wavelength: T) -> Result<Self> {
        if !speed.is_finite() || speed < T::zero() {
            return domain("speed", speed.as_f64(), "finite and >= 0");
        }
        if !wavelength.is_finite() || !(wavelength > T::zero()) {
            return domain("wavelength", wavelength.as_f64(), "finite and > 0");
        }
        Ok(Self {
            speed,
            direction,
            wavelength,
        })
    }

    /// Motion with the wavelength derived from a carrier frequency in Hz.
    pub fn from_carrier(speed: T, direction: Direction3<T>, carrier_hz: T) -> Result<Self> {
        if !carrier_hz.is_finite() || !(carrier_hz > T::zero()) {
            return domain("carrier_hz", carrier_hz.as_f64(), "finite and > 0");
        }
        Self::new(speed, direction, T::lit(SPEED_OF_LIGHT) / carrier_hz)
    }

    pub fn speed(&self) -> T {
        self.speed
    }

    pub fn direction(&self) -> Direction3<T> {
        self.direction
    }

    pub fn wavelength(&self) -> T {
        self.wavelength
    }

    /// Maximum Doppler shift `f_m = ‖v‖/λ`.
    pub fn max_doppler(&self) -> T {
        self.speed / self.wavelength
    }
}

/// `f_m`, `f_μ = f_m cos β` and the angle `β` between `k_μ` and `v̂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerGeometry<T> {
    f_m: T,
    f_mu: T,
    beta: T,
    cos_beta: T,
}

impl<T: Real> DopplerGeometry<T> {
    /// Geometry from `f_m` and `β ∈ [0, π]` directly.
    pub fn from_beta(f_m: T, beta: T) -> Result<Self> {
        if !f_m.is_finite() || f_m < T::zero() {
            return domain("f_m", f_m.as_f64(), "finite and >= 0");
        }
        if !beta.is_finite() || beta < T::zero() || beta > T::PI() {
            return domain("beta", beta.as_f64(), "0 <= beta <= pi");
        }
        let cos_beta = beta.cos();
        Ok(Self {
            f_m,
            f_mu: f_m * cos_beta,
            beta,
            cos_beta,
        })
    }

    pub fn f_m(&self) -> T {
        self.f_m
    }

    pub fn f_mu(&self) -> T {
        self.f_mu
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// `f̂_μ = cos β`, defined even when `f_m = 0`.
    pub fn cos_beta(&self) -> T {
        self.cos_beta
    }
}

/// Mean, mean square and standard deviation of the Doppler shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerMoments<T> {
    pub mean: T,
    pub mean_square: T,
    pub spread: T,
}

impl<T: Real> DopplerMoments<T> {
    /// Moments from the first two raw moments; spread is `√(E[f²] − μ²)`
    /// floored at zero.
    pub fn from_raw(mean: T, mean_square: T) -> Self {
        Self {
            mean,
            mean_square,
            spread: (mean_square - mean * mean).max(T::zero()).sqrt(),
        }
    }
}

/// Substitutions `a = ½ κ/sinh κ`, `b = −κ f̂_μ`, `c = κ √(1 − f̂_μ²)` under
/// which the Doppler moments become derivatives of
/// `I*(b, c) = ∫₋₁¹ e^{−b f̂} I₀(c √(1−f̂²)) df̂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IStarParams<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Real> IStarParams<T> {
    pub fn new(a: T, b: T, c: T) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || !c.is_finite() {
            return Err(Error::Invalid("I* parameters must be finite".into()));
        }
        if c < T::zero() {
            return domain("c", c.as_f64(), ">= 0");
        }
        Ok(Self { a, b, c })
    }

    /// Parameters for a cluster with concentration `kappa` observed at `f̂_μ`.
    pub fn from_model(kappa: T, fmu_hat: T) -> Result<Self> {
        let a = specfun::kappa_over_sinh(kappa)? / T::lit(2.0);
        if !fmu_hat.is_finite() || fmu_hat.abs() > T::one() {
            return domain("fmu_hat", fmu_hat.as_f64(), "|fmu_hat| <= 1");
        }
        let s = ((T::one() - fmu_hat) * (T::one() + fmu_hat)).sqrt();
        Ok(Self {
            a,
            b: -kappa * fmu_hat,
            c: kappa * s,
        })
    }
}

/// Doppler geometry of a cluster seen by a moving antenna.
///
/// `β = arccos(clamp(k_μ·v̂, −1, 1))`, `f_μ = f_m · clamp(k_μ·v̂)`.
pub fn geometry<T: Real>(scat: &VmfScattering<T>, motion: &MotionConfig<T>) -> DopplerGeometry<T> {
    let cos_beta = scat
        .mean_direction()
        .dot(&motion.direction())
        .max(-T::one())
        .min(T::one());
    let f_m = motion.max_doppler();
    DopplerGeometry {
        f_m,
        f_mu: f_m * cos_beta,
        beta: cos_beta.acos(),
        cos_beta,
    }
}

/// Density of the normalised Doppler shift `f̂ ∈ [−1, 1]`, evaluated in a
/// log-scaled form so that `κ` up to several hundred stays finite.
pub(crate) fn normalized_pdf<T: Real>(kappa: T, fmu_hat: T, fhat: T) -> T {
    let half = T::lit(0.5);
    if kappa == T::zero() {
        return half;
    }
    let s_mu = ((T::one() - fmu_hat) * (T::one() + fmu_hat))
        .max(T::zero())
        .sqrt();
    let s = ((T::one() - fhat) * (T::one() + fhat))
        .max(T::zero())
        .sqrt();
    let z = kappa * s_mu * s;
    // κ/sinh κ · e^{κ f̂_μ f̂} · I₀(z) = exp(ln(κ/sinh κ) + κ f̂_μ f̂ + z) · e^{−z} I₀(z)
    let log = specfun::ln_kappa_over_sinh_unchecked(kappa) + kappa * fmu_hat * fhat + z;
    half * log.exp() * specfun::i0_scaled_unchecked(z)
}

/// Doppler PDF `p_{f_D}(f)` in 1/Hz.
pub fn doppler_pdf<T: Real>(scat: &VmfScattering<T>, geom: &DopplerGeometry<T>, f: T) -> Result<T> {
    if geom.f_m == T::zero() {
        return Err(Error::DegenerateGeometry);
    }
    if !f.is_finite() || f.abs() > geom.f_m {
        return domain("f", f.as_f64(), "|f| <= f_m");
    }
    let fhat = (f / geom.f_m).max(-T::one()).min(T::one());
    Ok(normalized_pdf(scat.kappa(), geom.cos_beta, fhat) / geom.f_m)
}

/// Mean Doppler shift `μ_D = w_κ f_μ`.
pub fn mean_doppler<T: Real>(scat: &VmfScattering<T>, geom: &DopplerGeometry<T>) -> T {
    if scat.kappa() == T::zero() {
        return T::zero();
    }
    specfun::langevin_unchecked(scat.kappa()) * geom.f_mu
}

/// Mean squared Doppler shift `E[f_D²]`.
pub fn mean_square_doppler<T: Real>(scat: &VmfScattering<T>, geom: &DopplerGeometry<T>) -> T {
    let fm2 = geom.f_m * geom.f_m;
    if scat.kappa() == T::zero() {
        return fm2 / T::lit(3.0);
    }
    let r = specfun::langevin_over_kappa_unchecked(scat.kappa());
    r * fm2 + (T::one() - T::lit(3.0) * r) * geom.f_mu * geom.f_mu
}

/// Doppler spread `σ_D`.
pub fn doppler_spread<T: Real>(scat: &VmfScattering<T>, geom: &DopplerGeometry<T>) -> T {
    let kappa = scat.kappa();
    if kappa == T::zero() {
        return geom.f_m / T::lit(3.0).sqrt();
    }
    let r = specfun::langevin_over_kappa_unchecked(kappa);
    let variance = if kappa < T::one() {
        let w = specfun::langevin_unchecked(kappa);
        r * geom.f_m * geom.f_m + (T::one() - T::lit(3.0) * r - w * w) * geom.f_mu * geom.f_mu
    } else {
        // (w/κ)(f_m² − f_μ²) + (1/κ² − 1/sinh²κ) f_μ²
        let q = specfun::kappa_over_sinh_unchecked(kappa);
        let tail = (T::one() - q) * (T::one() + q) / (kappa * kappa);
        r * (geom.f_m - geom.f_mu) * (geom.f_m + geom.f_mu) + tail * geom.f_mu * geom.f_mu
    };
    variance.max(T::zero()).sqrt()
}

/// All three closed-form moments.
pub fn moments<T: Real>(scat: &VmfScattering<T>, geom: &DopplerGeometry<T>) -> DopplerMoments<T> {
    DopplerMoments {
        mean: mean_doppler(scat, geom),
        mean_square: mean_square_doppler(scat, geom),
        spread: doppler_spread(scat, geom),
    }
}

/// Closed form `I* = 2 sinh(√(b²+c²)) / √(b²+c²)`, equal to 2 at the origin.
pub fn istar<T: Real>(p: &IStarParams<T>) -> T {
    let s = p.b.hypot(p.c);
    if s == T::zero() {
        T::lit(2.0)
    } else if s < T::lit(1e-4) {
        // sinh(s)/s = 1 + s²/6 + s⁴/120
        let s2 = s * s;
        T::lit(2.0) * (T::one() + s2 / T::lit(6.0) * (T::one() + s2 / T::lit(20.0)))
    } else {
        T::lit(2.0) * s.sinh() / s
    }
}

/// `E[(f_D/f_m)ⁿ]`. Orders 1 and 2 use the closed forms; higher orders are
/// integrated numerically with `spec`.
pub fn normalized_moment<T: Real>(
    scat: &VmfScattering<T>,
    geom: &DopplerGeometry<T>,
    n: u32,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    let kappa = scat.kappa();
    let fmu_hat = geom.cos_beta;
    match n {
        0 => domain("n", 0.0, ">= 1"),
        1 => Ok(if kappa == T::zero() {
            T::zero()
        } else {
            specfun::langevin_unchecked(kappa) * fmu_hat
        }),
        2 => {
            let r = specfun::langevin_over_kappa_unchecked(kappa);
            if kappa == T::zero() {
                return Ok(T::one() / T::lit(3.0));
            }
            Ok(r + (T::one() - T::lit(3.0) * r) * fmu_hat * fmu_hat)
        }
        _ => oracle::normalized_moment_by_quadrature(kappa, fmu_hat, n, spec),
    }
}

/// Moments of a weighted mixture of clusters sharing one motion.
///
/// Raw moments combine linearly; the spread is derived from the combined
/// mean and mean square.
pub fn mixture_moments<T: Real>(
    components: &[(T, VmfScattering<T>)],
    motion: &MotionConfig<T>,
) -> Result<DopplerMoments<T>> {
    if components.is_empty() {
        return Err(Error::Invalid(
            "mixture needs at least one component".into(),
        ));
    }
    let mut total = T::zero();
    let mut mean = T::zero();
    let mut mean_square = T::zero();
    for (w, scat) in components {
        if !w.is_finite() || !(*w > T::zero()) {
            return domain("weight", w.as_f64(), "finite and > 0");
        }
        let geom = geometry(scat, motion);
        total = total + *w;
        mean = mean + *w * mean_doppler(scat, &geom);
        mean_square = mean_square + *w * mean_square_doppler(scat, &geom);
    }
    if (total - T::one()).abs() > T::check_tolerance() {
        return domain("sum(weights)", total.as_f64(), "1 within 1e-12");
    }
    Ok(DopplerMoments::from_raw(mean, mean_square))
}
