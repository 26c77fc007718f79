use vmf_fading::doppler::{doppler_spread, geometry, DopplerGeometry};
use vmf_fading::secondorder::{lcr, NormalizedLevel};
use vmf_fading::simulator::{
    envelope, estimate_doppler_moments, estimate_lcr_afd, realize, run_monte_carlo, MonteCarloPlan,
};
use vmf_fading::specfun::langevin;
use vmf_fading::{ChannelConfigF64, Direction3F64, MotionConfigF64, VmfScatteringF64};

const F_M: f64 = 80.0;

fn config(kappa: f64, beta: f64, n_paths: usize, seed: u64) -> ChannelConfigF64 {
    let scat = VmfScatteringF64::new(0.2, 0.1, kappa).unwrap();
    let mean = scat.mean_direction();
    let up = Direction3F64::new(0.0, 0.0, 1.0).unwrap();
    let motion = MotionConfigF64::new(F_M * 0.05, mean.rotated_toward(&up, beta), 0.05).unwrap();
    ChannelConfigF64::new(n_paths, 1.0, scat, motion, 0.0, seed).unwrap()
}

fn spread(cfg: &ChannelConfigF64) -> f64 {
    doppler_spread(&cfg.scat, &geometry(&cfg.scat, &cfg.motion))
}

#[test]
fn isotropic_path_spread() {
    let real = realize(&config(0.0, 0.0, 1_000_000, 1));
    let m = estimate_doppler_moments(&real).unwrap();
    let target = F_M / 3.0_f64.sqrt();
    // standard error of a sample standard deviation for a uniform law
    let se = target * (0.8 / 4.0 / 1e6_f64).sqrt() * 2.0;
    assert!(
        (m.spread - target).abs() < 4.0 * se,
        "{} vs {target}",
        m.spread
    );
}

#[test]
fn concentrated_path_mean() {
    let cfg = config(10.0, 0.0, 1_000_000, 2);
    let m = estimate_doppler_moments(&realize(&cfg)).unwrap();
    let f_mu = geometry(&cfg.scat, &cfg.motion).f_mu();
    let target = langevin(10.0).unwrap() * f_mu;
    let se = m.spread / 1e3;
    assert!((m.mean - target).abs() < 4.0 * se, "{} vs {target}", m.mean);
    assert!((target / F_M - 0.9).abs() < 1e-7);
}

#[test]
fn near_point_cluster_spread_matches_closed_form() {
    let cfg = config(1e9, 0.7, 10_000, 3);
    let m = estimate_doppler_moments(&realize(&cfg)).unwrap();
    let closed = spread(&cfg);
    assert!(closed < 1e-4 * F_M);
    assert!((m.spread / closed - 1.0).abs() < 4.0 / (2.0 * 10_000.0_f64).sqrt());
}

#[test]
fn power_is_conserved() {
    for n in [1, 7, 128, 1000] {
        let real = realize(&config(2.0, 0.3, n, 4));
        assert!((real.power() - 1.0).abs() < 1e-13, "n={n}");
    }
}

#[test]
fn envelope_bit_identical_across_runs() {
    let cfg = config(5.0, 1.0, 128, 9);
    let dt = 1.0 / (32.0 * F_M);
    let a = envelope(&realize(&cfg), 50.0 / F_M, dt).unwrap();
    let b = envelope(&realize(&cfg), 50.0 / F_M, dt).unwrap();
    assert!(a
        .samples
        .iter()
        .zip(&b.samples)
        .all(|(x, y)| x.to_bits() == y.to_bits()));
}

#[test]
fn monte_carlo_independent_of_thread_count() {
    let cfg = config(3.0, 0.5, 64, 10);
    let plan = MonteCarloPlan {
        realizations: 6,
        duration: 40.0 / F_M,
        dt: 1.0 / (32.0 * F_M),
        levels: vec![
            NormalizedLevel::new(0.5).unwrap(),
            NormalizedLevel::new(1.0).unwrap(),
        ],
        ks_stride: 8,
    };
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let four = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = one.install(|| run_monte_carlo(&cfg, &plan)).unwrap();
    let b = four.install(|| run_monte_carlo(&cfg, &plan)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn crossings_times_durations_track_time_below() {
    let cfg = config(0.0, 0.0, 128, 11);
    let dt = 1.0 / (32.0 * F_M);
    let series = envelope(&realize(&cfg), 400.0 / F_M, dt).unwrap();
    let levels: Vec<_> = [-10.0, -3.0, 0.0]
        .iter()
        .map(|&d| NormalizedLevel::from_db(d).unwrap())
        .collect();
    let e = estimate_lcr_afd(&series, &levels).unwrap();
    for i in 0..levels.len() {
        let lt = e.lcr_hat[i] * e.afd_hat[i].unwrap();
        let frac = e.fraction_below()[i];
        // boundary runs are the only difference, each shorter than the series
        let slack = (2.0 * e.afd_hat[i].unwrap() * 20.0 + e.n_fades[i] as f64 * dt) / e.duration;
        assert!((lt - frac).abs() <= slack, "level {i}: {lt} vs {frac}");
    }
}

#[test]
fn oversampling_changes_crossing_rate_by_under_one_percent() {
    let cfg = config(0.0, 0.0, 128, 0);
    let level = NormalizedLevel::new(std::f64::consts::FRAC_1_SQRT_2).unwrap();
    let run = |dt: f64| {
        let plan = MonteCarloPlan {
            realizations: 20,
            duration: 400.0 / F_M,
            dt,
            levels: vec![level],
            ks_stride: 64,
        };
        run_monte_carlo(&cfg, &plan).unwrap().stats.lcr_hat[0]
    };
    let coarse = run(1.0 / (32.0 * F_M));
    let fine = run(1.0 / (64.0 * F_M));
    assert!((coarse / fine - 1.0).abs() < 0.01, "{coarse} vs {fine}");
    let theory = lcr(spread(&cfg), level).unwrap();
    assert!((fine / theory - 1.0).abs() < 0.05);
}

#[test]
fn from_beta_and_motion_agree() {
    let cfg = config(4.0, 0.9, 8, 0);
    let g = geometry(&cfg.scat, &cfg.motion);
    let h = DopplerGeometry::from_beta(F_M, 0.9).unwrap();
    assert!((g.f_mu() - h.f_mu()).abs() < 1e-9 * F_M);
    assert!((g.f_m() - F_M).abs() < 1e-12 * F_M);
}
