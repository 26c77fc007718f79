//! Scalar special functions in overflow-safe, scaled forms.
//!
//! Every analytic formula in the crate divides by `sinh κ` or multiplies by
//! `e^{κ·…}` somewhere. The helpers here keep those factors finite for the
//! whole representable range of `κ` and return exact limits at `κ = 0`.

use crate::error::{domain, Result};
use crate::scalar::Real;

/// Below this argument `I₀` is summed from its power series; above it the
/// asymptotic expansion is used.
const I0_SERIES_LIMIT: f64 = 20.0;

/// Below this `κ` the Langevin function is evaluated from its Taylor series.
const LANGEVIN_SERIES_LIMIT: f64 = 0.5;

/// Taylor coefficients of `coth κ − 1/κ = Σ c_n κ^{2n−1}`,
/// `c_n = 2^{2n} B_{2n} / (2n)!`.
const LANGEVIN_TAYLOR: [f64; 12] = [
    1.0 / 3.0,
    -1.0 / 45.0,
    2.0 / 945.0,
    -1.0 / 4725.0,
    2.0 / 93555.0,
    -1382.0 / 638_512_875.0,
    2.192_594_785_187_377_8e-7,
    -2.221_460_878_997_967_9e-8,
    2.250_784_651_680_899_3e-9,
    -2.280_515_120_459_218_3e-10,
    2.310_643_259_900_262_4e-11,
    -2.341_170_681_982_488_4e-12,
];

/// Exponentially scaled modified Bessel function `e^{−x} I₀(x)`.
///
/// Valid for every finite `x ≥ 0`; the result lies in `(0, 1]`.
pub fn bessel_i0_scaled<T: Real>(x: T) -> Result<T> {
    if !x.is_finite() || x < T::zero() {
        return domain("x", x.as_f64(), "finite and >= 0");
    }
    Ok(i0_scaled_unchecked(x))
}

pub(crate) fn i0_scaled_unchecked<T: Real>(x: T) -> T {
    if x <= T::lit(I0_SERIES_LIMIT) {
        // I₀(x) = Σ (x²/4)^k / (k!)², all terms positive.
        let q = x * x / T::lit(4.0);
        let mut term = T::one();
        let mut sum = T::one();
        let mut k = 1usize;
        loop {
            let kk = T::from_count(k);
            term = term * q / (kk * kk);
            sum = sum + term;
            if term <= sum * T::epsilon() {
                break;
            }
            k += 1;
        }
        sum * (-x).exp()
    } else {
        // e^{−x} I₀(x) ~ (2πx)^{−1/2} Σ ((2k−1)!!)² / (k! (8x)^k)
        let eight_x = T::lit(8.0) * x;
        let mut term = T::one();
        let mut sum = T::one();
        let mut k = 1usize;
        loop {
            let odd = T::from_count(2 * k - 1);
            let next = term * odd * odd / (T::from_count(k) * eight_x);
            if next >= term {
                break;
            }
            term = next;
            sum = sum + term;
            if term <= sum * T::epsilon() {
                break;
            }
            k += 1;
        }
        sum / (T::lit(2.0) * T::PI() * x).sqrt()
    }
}

/// Langevin function `w_κ = coth κ − 1/κ`, with `w_0 = 0`.
///
/// This is the mean resultant length of a vMF distribution on the sphere,
/// i.e. `E[k̂ · k_μ]`.
pub fn langevin<T: Real>(kappa: T) -> Result<T> {
    check_kappa(kappa)?;
    Ok(langevin_unchecked(kappa))
}

/// `w_κ / κ`, continuously extended with the value `1/3` at `κ = 0`.
pub fn langevin_over_kappa<T: Real>(kappa: T) -> Result<T> {
    check_kappa(kappa)?;
    Ok(langevin_over_kappa_unchecked(kappa))
}

/// `κ / sinh κ` without overflow; `1` at `κ = 0`.
///
/// For `κ` beyond roughly 745 (f64) the value underflows and flushes to 0.
pub fn kappa_over_sinh<T: Real>(kappa: T) -> Result<T> {
    check_kappa(kappa)?;
    Ok(kappa_over_sinh_unchecked(kappa))
}

/// `ln(κ / sinh κ)`, finite for every finite `κ ≥ 0`.
pub fn ln_kappa_over_sinh<T: Real>(kappa: T) -> Result<T> {
    check_kappa(kappa)?;
    Ok(ln_kappa_over_sinh_unchecked(kappa))
}

fn check_kappa<T: Real>(kappa: T) -> Result<()> {
    if !kappa.is_finite() || kappa < T::zero() {
        return domain("kappa", kappa.as_f64(), "finite and >= 0");
    }
    Ok(())
}

/// Horner evaluation of `Σ c_n κ^{2n−2}`.
fn langevin_taylor_reduced<T: Real>(kappa: T) -> T {
    let k2 = kappa * kappa;
    LANGEVIN_TAYLOR
        .iter()
        .rev()
        .fold(T::zero(), |acc, &c| acc * k2 + T::lit(c))
}

pub(crate) fn langevin_unchecked<T: Real>(kappa: T) -> T {
    if kappa == T::zero() {
        T::zero()
    } else if kappa < T::lit(LANGEVIN_SERIES_LIMIT) {
        kappa * langevin_taylor_reduced(kappa)
    } else {
        kappa.tanh().recip() - kappa.recip()
    }
}

pub(crate) fn langevin_over_kappa_unchecked<T: Real>(kappa: T) -> T {
    if kappa < T::lit(LANGEVIN_SERIES_LIMIT) {
        langevin_taylor_reduced(kappa)
    } else {
        langevin_unchecked(kappa) / kappa
    }
}

pub(crate) fn kappa_over_sinh_unchecked<T: Real>(kappa: T) -> T {
    if kappa == T::zero() {
        T::one()
    } else if kappa <= T::one() {
        kappa / kappa.sinh()
    } else {
        // 2κ e^{−κ} / (1 − e^{−2κ})
        let two = T::lit(2.0);
        two * kappa * (-kappa).exp() / -(-two * kappa).exp_m1()
    }
}

pub(crate) fn ln_kappa_over_sinh_unchecked<T: Real>(kappa: T) -> T {
    if kappa == T::zero() {
        T::zero()
    } else if kappa <= T::one() {
        (kappa / kappa.sinh()).ln()
    } else {
        let two = T::lit(2.0);
        (two * kappa).ln() - kappa - (-(-two * kappa).exp()).ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    /// e^{−x} I₀(x) = (1/π) ∫₀^π e^{x(cos θ − 1)} dθ; the trapezoid rule is
    /// spectrally accurate for this periodic integrand.
    fn i0_scaled_trapezoid(x: f64) -> f64 {
        let n = 4000;
        let h = std::f64::consts::PI / n as f64;
        let mut sum = 0.5 * (1.0 + (-2.0 * x).exp());
        for k in 1..n {
            sum += (x * ((k as f64 * h).cos() - 1.0)).exp();
        }
        sum * h / std::f64::consts::PI
    }

    #[test]
    fn i0_scaled_fixtures() {
        assert_eq!(bessel_i0_scaled(0.0_f64).unwrap(), 1.0);
        // mpmath, 40 digits
        let fixtures = [
            (0.5, 0.645_035_270_449_150_068_1),
            (1.0, 0.465_759_607_593_640_436_5),
            (5.0, 0.183_540_812_609_328_353_1),
            (20.0, 0.089_780_311_884_826_021_6),
            (30.0, 0.073_145_946_482_237_293_9),
            (50.0, 0.056_561_626_647_454_192_5),
            (100.0, 0.039_944_379_299_096_682_6),
            (700.0, 0.015_081_295_651_531_357_6),
        ];
        for (x, expect) in fixtures {
            let got = bessel_i0_scaled(x).unwrap();
            assert!(rel(got, expect) < 1e-13, "x={x}: {got} vs {expect}");
        }
    }

    #[test]
    fn i0_scaled_matches_integral_representation() {
        for i in 0..=200 {
            let x = 0.25 * i as f64;
            let got = bessel_i0_scaled(x).unwrap();
            let oracle = i0_scaled_trapezoid(x);
            assert!(rel(got, oracle) < 1e-13, "x={x}: {got} vs {oracle}");
        }
    }

    #[test]
    fn i0_scaled_continuous_across_switch() {
        let below = bessel_i0_scaled(I0_SERIES_LIMIT).unwrap();
        let above = bessel_i0_scaled(I0_SERIES_LIMIT * (1.0 + 1e-15)).unwrap();
        assert!(rel(below, above) < 1e-14);
    }

    #[test]
    fn i0_scaled_rejects_bad_input() {
        assert!(bessel_i0_scaled(-1.0_f64).is_err());
        assert!(bessel_i0_scaled(f64::NAN).is_err());
        assert!(bessel_i0_scaled(f64::INFINITY).is_err());
    }

    #[test]
    fn langevin_fixtures() {
        assert_eq!(langevin(0.0_f64).unwrap(), 0.0);
        let w2 = langevin(2.0_f64).unwrap();
        assert!(rel(w2, 0.537_314_720_727_548_095_9) < 1e-14);
        let w10 = langevin(10.0_f64).unwrap();
        assert!(rel(w10, 0.900_000_004_122_307_247_8) < 1e-14);
        let w_half = langevin(0.5_f64).unwrap();
        assert!(rel(w_half, 0.163_953_413_738_652_848_8) < 1e-14);
        let w_big = langevin(1e6_f64).unwrap();
        assert!((w_big - 0.999_999).abs() < 1e-9);
    }

    #[test]
    fn langevin_series_switch_is_seamless() {
        let lim = LANGEVIN_SERIES_LIMIT;
        let series = lim * langevin_taylor_reduced(lim);
        let direct = 1.0 / lim.tanh() - 1.0 / lim;
        assert!(rel(series, direct) < 1e-14);
    }

    #[test]
    fn langevin_over_kappa_limit() {
        assert_eq!(langevin_over_kappa(0.0_f64).unwrap(), 1.0 / 3.0);
        assert!(
            rel(
                langevin_over_kappa(10.0_f64).unwrap(),
                0.090_000_000_412_230_724_78
            ) < 1e-14
        );
        assert!(langevin(-1.0_f64).is_err());
        assert!(langevin_over_kappa(f64::NAN).is_err());
    }

    #[test]
    fn kappa_over_sinh_fixtures() {
        assert_eq!(kappa_over_sinh(0.0_f64).unwrap(), 1.0);
        assert!(
            rel(
                kappa_over_sinh(1.0_f64).unwrap(),
                0.850_918_128_239_321_545_1
            ) < 1e-14
        );
        assert!(
            rel(
                kappa_over_sinh(30.0_f64).unwrap(),
                5.614_573_781_304_104_763e-12
            ) < 1e-13
        );
        // 5.9e-345 is below the smallest subnormal: flushes to zero.
        let v = kappa_over_sinh(800.0_f64).unwrap();
        assert!(v >= 0.0 && v < 1e-300);
        assert!(kappa_over_sinh(-0.1_f64).is_err());
    }

    #[test]
    fn ln_kappa_over_sinh_is_finite_for_huge_kappa() {
        let v = ln_kappa_over_sinh(800.0_f64).unwrap();
        let expect = (1600.0_f64).ln() - 800.0;
        assert!(rel(v, expect) < 1e-15);
        assert_eq!(ln_kappa_over_sinh(0.0_f64).unwrap(), 0.0);
        let mid = ln_kappa_over_sinh(3.0_f64).unwrap();
        assert!(rel(mid, (3.0 / 3.0_f64.sinh()).ln()) < 1e-14);
    }

    #[test]
    fn single_precision_instantiation() {
        let w = langevin(10.0_f32).unwrap();
        assert!((w - 0.9).abs() < 1e-6);
        let i = bessel_i0_scaled(1.0_f32).unwrap();
        assert!((i - 0.465_759_6).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn i0_scaled_in_unit_interval_and_decreasing(x in 0.0..800.0_f64, dx in 1e-6..5.0_f64) {
            let a = bessel_i0_scaled(x).unwrap();
            let b = bessel_i0_scaled(x + dx).unwrap();
            prop_assert!(a > 0.0 && a <= 1.0);
            prop_assert!(b <= a);
        }

        #[test]
        fn langevin_taylor_bracket(k in 0.0..0.5_f64) {
            let w = langevin(k).unwrap();
            let upper = k / 3.0;
            let lower = k / 3.0 - k.powi(3) / 45.0;
            prop_assert!(w <= upper * (1.0 + 1e-15) && w >= lower * (1.0 - 1e-15));
        }

        #[test]
        fn langevin_increasing_below_one(k in 0.0..1e4_f64, dk in 1e-3..10.0_f64) {
            let a = langevin(k).unwrap();
            let b = langevin(k + dk).unwrap();
            prop_assert!((0.0..1.0).contains(&a));
            prop_assert!(b >= a);
        }

        #[test]
        fn kappa_over_sinh_inverts_sinh(k in 1e-6..30.0_f64) {
            let v = kappa_over_sinh(k).unwrap();
            prop_assert!(((v * k.sinh()) - k).abs() <= 1e-12 * k);
        }

        #[test]
        fn deterministic(k in 0.0..800.0_f64) {
            prop_assert_eq!(langevin(k).unwrap().to_bits(), langevin(k).unwrap().to_bits());
            prop_assert_eq!(bessel_i0_scaled(k).unwrap().to_bits(), bessel_i0_scaled(k).unwrap().to_bits());
            prop_assert_eq!(kappa_over_sinh(k).unwrap().to_bits(), kappa_over_sinh(k).unwrap().to_bits());
        }
    }
}
