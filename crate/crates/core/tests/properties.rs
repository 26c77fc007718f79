use proptest::prelude::*;
use vmf_fading::doppler::{
    doppler_pdf, doppler_spread, geometry, mean_doppler, mixture_moments, moments, DopplerGeometry,
};
use vmf_fading::{
    Direction3F64, MotionConfigF64, VmfScattering, VmfScatteringF32, VmfScatteringF64,
};

fn geom(f_m: f64, beta: f64) -> DopplerGeometry<f64> {
    DopplerGeometry::from_beta(f_m, beta).unwrap()
}

fn scat(kappa: f64) -> VmfScatteringF64 {
    VmfScatteringF64::new(0.0, 0.0, kappa).unwrap()
}

proptest! {
    #[test]
    fn spread_symmetric_about_broadside(kappa in 0.0..300.0_f64, beta in 0.0..std::f64::consts::PI) {
        let s = scat(kappa);
        let a = doppler_spread(&s, &geom(10.0, beta));
        let b = doppler_spread(&s, &geom(10.0, std::f64::consts::PI - beta));
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
    }

    #[test]
    fn mean_odd_about_broadside(kappa in 0.0..300.0_f64, beta in 0.0..std::f64::consts::PI) {
        let s = scat(kappa);
        let a = mean_doppler(&s, &geom(10.0, beta));
        let b = mean_doppler(&s, &geom(10.0, std::f64::consts::PI - beta));
        prop_assert!((a + b).abs() <= 1e-12 * 10.0);
    }

    #[test]
    fn spread_peaks_at_broadside(kappa in 0.0..700.0_f64, beta in 0.0..std::f64::consts::PI) {
        let s = scat(kappa);
        let at90 = doppler_spread(&s, &geom(1.0, std::f64::consts::FRAC_PI_2));
        prop_assert!(doppler_spread(&s, &geom(1.0, beta)) <= at90 * (1.0 + 1e-14));
    }

    #[test]
    fn isotropic_independent_of_direction(beta in 0.0..std::f64::consts::PI, f_m in 1e-3..1e4_f64) {
        let m = moments(&scat(0.0), &geom(f_m, beta));
        prop_assert_eq!(m.mean, 0.0);
        prop_assert!((m.spread - f_m / 3.0_f64.sqrt()).abs() <= 1e-15 * f_m);
    }

    #[test]
    fn variance_identity(kappa in 0.0..200.0_f64, beta in 0.0..std::f64::consts::PI) {
        let m = moments(&scat(kappa), &geom(1.0, beta));
        let var = m.mean_square - m.mean * m.mean;
        prop_assert!((m.spread * m.spread - var).abs() <= 1e-12);
    }

    #[test]
    fn spread_within_bounds(kappa in 0.0..700.0_f64, beta in 0.0..std::f64::consts::PI) {
        let s = doppler_spread(&scat(kappa), &geom(5.0, beta));
        prop_assert!(s.is_finite() && s >= 0.0 && s <= 5.0);
    }

    #[test]
    fn pdf_nonnegative_and_finite(kappa in 0.0..700.0_f64, beta in 0.0..std::f64::consts::PI, x in -1.0..=1.0_f64) {
        let p = doppler_pdf(&scat(kappa), &geom(2.0, beta), 2.0 * x).unwrap();
        prop_assert!(p.is_finite() && p >= 0.0);
    }

    #[test]
    fn single_component_mixture(kappa in 0.0..50.0_f64, phi in -3.0..3.0_f64, psi in -1.5..1.5_f64) {
        let s = VmfScatteringF64::new(phi, psi, kappa).unwrap();
        let motion = MotionConfigF64::new(20.0, Direction3F64::new(1.0, 0.0, 0.0).unwrap(), 0.1).unwrap();
        let a = mixture_moments(&[(0.5, s), (0.5, s)], &motion).unwrap();
        let b = moments(&s, &geometry(&s, &motion));
        prop_assert!((a.mean - b.mean).abs() <= 1e-12 * 200.0);
        prop_assert!((a.spread - b.spread).abs() <= 1e-10 * 200.0);
    }
}

#[test]
fn f32_tracks_f64() {
    for kappa in [0.0, 0.3, 5.0, 40.0] {
        for beta in [0.0_f32, 0.8, 1.6, 3.0] {
            let s32 = VmfScatteringF32::new(0.0, 0.0, kappa as f32).unwrap();
            let g32 = DopplerGeometry::from_beta(1.0_f32, beta).unwrap();
            let s64: VmfScattering<f64> = scat(kappa);
            let g64 = geom(1.0, beta as f64);
            let a = doppler_spread(&s32, &g32) as f64;
            let b = doppler_spread(&s64, &g64);
            assert!(
                (a - b).abs() < 1e-5,
                "kappa={kappa} beta={beta}: {a} vs {b}"
            );
        }
    }
}

#[test]
fn mixture_of_opposed_clusters() {
    let motion =
        MotionConfigF64::new(10.0, Direction3F64::new(1.0, 0.0, 0.0).unwrap(), 0.1).unwrap();
    let ahead = VmfScatteringF64::new(0.0, 0.0, 20.0).unwrap();
    let behind = VmfScatteringF64::new(std::f64::consts::PI, 0.0, 20.0).unwrap();
    let m = mixture_moments(&[(0.5, ahead), (0.5, behind)], &motion).unwrap();
    assert!(m.mean.abs() < 1e-12);
    let single = moments(&ahead, &geometry(&ahead, &motion));
    assert!((m.mean_square - single.mean_square).abs() < 1e-9);
    assert!(m.spread > single.spread);
    assert!(mixture_moments(&[(0.7, ahead)], &motion).is_err());
    assert!(mixture_moments::<f64>(&[], &motion).is_err());
}
