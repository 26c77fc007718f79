//! Numerical-integration ground truth for the closed forms.
//!
//! Nothing here calls the closed-form moment routines in [`crate::doppler`];
//! integrands are assembled directly from the scaled special functions so
//! the two engines stay independent.

use crate::doppler::{DopplerGeometry, DopplerMoments, IStarParams};
use crate::error::Result;
use crate::quadrature::{integrate_graded, GaussLegendre, QuadratureSpec};
use crate::scalar::Real;
use crate::specfun::{i0_scaled_unchecked, ln_kappa_over_sinh_unchecked};
use crate::vmf::VmfScattering;

/// Doppler density of `f̂ = f/f_m` on `[−1, 1]`.
fn density<T: Real>(kappa: T, fmu_hat: T, fhat: T) -> T {
    if kappa == T::zero() {
        return T::lit(0.5);
    }
    let c = kappa * (T::one() - fmu_hat * fmu_hat).max(T::zero()).sqrt();
    let z = c * (T::one() - fhat * fhat).max(T::zero()).sqrt();
    let log = ln_kappa_over_sinh_unchecked(kappa) + kappa * fmu_hat * fhat + z;
    T::lit(0.5) * log.exp() * i0_scaled_unchecked(z)
}

/// `∫₋₁¹ f̂ⁿ p(f̂) df̂`.
pub fn normalized_moment_by_quadrature<T: Real>(
    kappa: T,
    fmu_hat: T,
    n: u32,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    let rule = GaussLegendre::new(spec.nodes());
    let one = T::one();
    integrate_graded(&rule, -one, fmu_hat, one, spec, |x| {
        pow_u(x, n) * density(kappa, fmu_hat, x)
    })
}

/// `∫ fⁿ p_{f_D}(f) df` over `[−f_m, f_m]`; `n = 0` returns the
/// normalisation.
pub fn moment_by_quadrature<T: Real>(
    scat: &VmfScattering<T>,
    geom: &DopplerGeometry<T>,
    n: u32,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    if geom.f_m() == T::zero() {
        return Ok(if n == 0 { T::one() } else { T::zero() });
    }
    let m = normalized_moment_by_quadrature(scat.kappa(), geom.cos_beta(), n, spec)?;
    Ok(m * pow_u(geom.f_m(), n))
}

/// Mean, raw mean square and central spread by quadrature. The spread is
/// integrated as `√∫ (f − μ)² p`, not as a difference of raw moments.
pub fn moments_by_quadrature<T: Real>(
    scat: &VmfScattering<T>,
    geom: &DopplerGeometry<T>,
    spec: &QuadratureSpec<T>,
) -> Result<DopplerMoments<T>> {
    let f_m = geom.f_m();
    if f_m == T::zero() {
        return Ok(DopplerMoments {
            mean: T::zero(),
            mean_square: T::zero(),
            spread: T::zero(),
        });
    }
    let kappa = scat.kappa();
    let fmu = geom.cos_beta();
    let rule = GaussLegendre::new(spec.nodes());
    let one = T::one();
    let norm = integrate_graded(&rule, -one, fmu, one, spec, |x| density(kappa, fmu, x))?;
    let m1 = integrate_graded(&rule, -one, fmu, one, spec, |x| x * density(kappa, fmu, x))? / norm;
    let m2 = integrate_graded(&rule, -one, fmu, one, spec, |x| {
        x * x * density(kappa, fmu, x)
    })? / norm;
    let var = integrate_graded(&rule, -one, fmu, one, spec, |x| {
        let d = x - m1;
        d * d * density(kappa, fmu, x)
    })? / norm;
    Ok(DopplerMoments {
        mean: m1 * f_m,
        mean_square: m2 * f_m * f_m,
        spread: var.max(T::zero()).sqrt() * f_m,
    })
}

/// Doppler spread by quadrature.
pub fn spread_by_quadrature<T: Real>(
    scat: &VmfScattering<T>,
    geom: &DopplerGeometry<T>,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    Ok(moments_by_quadrature(scat, geom, spec)?.spread)
}

/// `I*(b, c) = ∫₋₁¹ e^{−b f̂} I₀(c √(1−f̂²)) df̂` by quadrature.
pub fn istar_by_quadrature<T: Real>(p: &IStarParams<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    let s = p.b.hypot(p.c);
    let peak = if s == T::zero() { T::zero() } else { -p.b / s };
    let rule = GaussLegendre::new(spec.nodes());
    let (b, c) = (p.b, p.c);
    integrate_graded(&rule, -T::one(), peak, T::one(), spec, |x| {
        let z = c * (T::one() - x * x).max(T::zero()).sqrt();
        (z - b * x).exp() * i0_scaled_unchecked(z)
    })
}

/// Two-dimensional quadrature of the vMF density over
/// `φ ∈ [−π, π]`, `ψ ∈ [−π/2, π/2]`. The azimuth integral is taken over the
/// equivalent period `[μ_φ − π, μ_φ + π]` so the peak never straddles the
/// seam.
pub fn sphere_normalization<T: Real>(
    scat: &VmfScattering<T>,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    let rule = GaussLegendre::new(spec.nodes());
    let inner_spec = *spec;
    let mut inner_err = None;
    let outer = integrate_graded(
        &rule,
        -T::FRAC_PI_2(),
        scat.mu_psi(),
        T::FRAC_PI_2(),
        spec,
        |psi| match integrate_graded(
            &rule,
            scat.mu_phi() - T::PI(),
            scat.mu_phi(),
            scat.mu_phi() + T::PI(),
            &inner_spec,
            |phi| scat.pdf_unchecked(phi, psi),
        ) {
            Ok(v) => v,
            Err(e) => {
                inner_err.get_or_insert(e);
                T::nan()
            }
        },
    );
    match inner_err {
        Some(e) => Err(e),
        None => outer,
    }
}

fn pow_u<T: Real>(x: T, n: u32) -> T {
    (0..n).fold(T::one(), |acc, _| acc * x)
}
