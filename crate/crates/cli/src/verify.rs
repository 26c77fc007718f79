//! Verification sweep: closed forms against quadrature, second-order laws,
//! and the Monte-Carlo closure of the whole model chain.

use serde_json::json;
use vmf_fading::doppler::{doppler_spread, geometry, moments, DopplerGeometry};
use vmf_fading::oracle::moments_by_quadrature;
use vmf_fading::secondorder::{afd, lcr, max_lcr, LcrAfdCurve, NormalizedLevel};
use vmf_fading::simulator::{run_monte_carlo, MonteCarloPlan};
use vmf_fading::specfun::langevin;
use vmf_fading::{
    ChannelConfigF64, DopplerMomentsF64, MotionConfigF64, QuadratureSpecF64, VmfScatteringF64,
};

use crate::config::{tilted_from, ExperimentConfig};
use crate::error::CliResult;

pub const ORACLE_KAPPAS: [f64; 7] = [0.0, 0.1, 1.0, 3.0, 10.0, 30.0, 100.0];
pub const ORACLE_BETAS_DEG: [f64; 6] = [0.0, 30.0, 60.0, 90.0, 120.0, 180.0];
pub const ORACLE_TOL: f64 = 1e-8;
pub const MC_CASES: [(f64, f64); 3] = [(0.0, 0.0), (10.0, 0.0), (10.0, 90.0)];
pub const MC_LEVELS_DB: [f64; 3] = [-10.0, -3.0, 0.0];
pub const MC_LCR_TOL: f64 = 0.05;
pub const MC_AFD_TOL: f64 = 0.08;
pub const KS_SIGNIFICANCE: f64 = 0.001;
/// Perturbation added to `w_κ` by the fault-injection hook.
pub const FAULT_DELTA: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub limit: f64,
}

impl Check {
    fn at_most(name: String, value: f64, limit: f64) -> Self {
        Self {
            name,
            value,
            bound: Bound::AtMost,
            limit,
        }
    }

    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.value <= self.limit,
            Bound::AtLeast => self.value >= self.limit,
        }
    }

    pub fn line(&self) -> String {
        let op = match self.bound {
            Bound::AtMost => "<=",
            Bound::AtLeast => ">=",
        };
        format!(
            "{} {} value={:.3e} {op} {:.1e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.limit
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Perturb `w_κ` in the closed forms by [`FAULT_DELTA`].
    pub inject_fault: bool,
    pub skip_monte_carlo: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub seed: u64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn summary_json(&self) -> serde_json::Value {
        json!({
            "schema": crate::table::SCHEMA,
            "command": "verify",
            "passed": self.passed(),
            "checks": self.checks.len(),
            "failed": self.failed(),
            "seed": self.seed,
        })
    }

    /// One line per check followed by the JSON summary.
    pub fn render(&self) -> String {
        let mut out: String = self.checks.iter().map(|c| c.line() + "\n").collect();
        out.push_str(&self.summary_json().to_string());
        out.push('\n');
        out
    }
}

fn closed_moments(
    scat: &VmfScatteringF64,
    geom: &DopplerGeometry<f64>,
    fault: bool,
) -> CliResult<DopplerMomentsF64> {
    if !fault {
        return Ok(moments(scat, geom));
    }
    let kappa = scat.kappa();
    let w = langevin(kappa)? + FAULT_DELTA;
    let r = if kappa == 0.0 { 1.0 / 3.0 } else { w / kappa };
    let (f_m, f_mu) = (geom.f_m(), geom.f_mu());
    Ok(DopplerMomentsF64::from_raw(
        w * f_mu,
        r * f_m * f_m + (1.0 - 3.0 * r) * f_mu * f_mu,
    ))
}

fn rel(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / b.abs().max(floor)
}

fn oracle_checks(f_m: f64, fault: bool, out: &mut Vec<Check>) -> CliResult<()> {
    let spec = QuadratureSpecF64::default();
    for kappa in ORACLE_KAPPAS {
        let scat = VmfScatteringF64::new(0.0, 0.0, kappa)?;
        for beta in ORACLE_BETAS_DEG {
            let geom = DopplerGeometry::from_beta(f_m, beta.to_radians())?;
            let c = closed_moments(&scat, &geom, fault)?;
            let o = moments_by_quadrature(&scat, &geom, &spec)?;
            let dev = rel(c.mean, o.mean, 1e-6 * f_m)
                .max(rel(c.mean_square, o.mean_square, 1e-6 * f_m * f_m))
                .max(rel(c.spread, o.spread, 1e-6 * f_m));
            out.push(Check::at_most(
                format!("oracle kappa={kappa} beta_deg={beta}"),
                dev,
                ORACLE_TOL,
            ));
        }
    }
    Ok(())
}

fn law_checks(cfg: &ExperimentConfig, out: &mut Vec<Check>) -> CliResult<()> {
    let r = cfg.validate()?;
    let f_m = r.geom.f_m();
    let iso = VmfScatteringF64::isotropic();
    let mut worst = 0.0_f64;
    for beta in (0..=180).step_by(15) {
        let geom = DopplerGeometry::from_beta(f_m, (beta as f64).to_radians())?;
        worst = worst.max(rel(doppler_spread(&iso, &geom), f_m / 3.0_f64.sqrt(), 0.0));
    }
    out.push(Check::at_most("isotropic_spread".into(), worst, 1e-12));

    let sigma = doppler_spread(&r.scat, &r.geom);
    let curve = LcrAfdCurve::from_spread(sigma, &r.levels)?;
    let worst = curve
        .levels
        .iter()
        .zip(curve.lcr.iter().zip(&curve.afd))
        .map(|(l, (a, b))| (a * b + (-l.rho() * l.rho()).exp_m1()).abs())
        .fold(0.0, f64::max);
    out.push(Check::at_most("lcr_afd_identity".into(), worst, 1e-12));

    let step = 1e-4;
    let (arg, peak) = (1..=40_000)
        .map(|i| {
            let rho = i as f64 * step;
            (
                rho,
                lcr(sigma, NormalizedLevel::new(rho).expect("rho > 0")).expect("valid spread"),
            )
        })
        .fold(
            (0.0, f64::NEG_INFINITY),
            |acc, x| if x.1 > acc.1 { x } else { acc },
        );
    let (_, lmax) = max_lcr(sigma)?;
    out.push(Check::at_most(
        "max_lcr_level".into(),
        (arg - std::f64::consts::FRAC_1_SQRT_2).abs(),
        step,
    ));
    out.push(Check::at_most(
        "max_lcr_value".into(),
        rel(peak, lmax, 1e-300),
        1e-8,
    ));
    Ok(())
}

fn monte_carlo_checks(cfg: &ExperimentConfig, out: &mut Vec<Check>) -> CliResult<()> {
    let r = cfg.validate()?;
    let levels: Vec<_> = MC_LEVELS_DB
        .iter()
        .map(|&d| NormalizedLevel::from_db(d))
        .collect::<Result<_, _>>()?;
    for (kappa, beta) in MC_CASES {
        let scat = VmfScatteringF64::new(r.scat.mu_phi(), r.scat.mu_psi(), kappa)?;
        let dir = tilted_from(&scat.mean_direction(), beta.to_radians());
        let motion = MotionConfigF64::new(r.motion.speed(), dir, r.motion.wavelength())?;
        let sigma = doppler_spread(&scat, &geometry(&scat, &motion));
        let ch = ChannelConfigF64::new(
            cfg.n_paths,
            cfg.omega,
            scat,
            motion,
            cfg.carrier_offset_hz,
            cfg.seed,
        )?;
        let plan = MonteCarloPlan {
            realizations: cfg.realizations,
            duration: r.duration,
            dt: r.dt,
            levels: levels.clone(),
            ks_stride: (1.0 / (sigma * r.dt)).ceil().max(1.0) as usize,
        };
        let s = run_monte_carlo(&ch, &plan)?;
        let tag = format!("monte_carlo kappa={kappa} beta_deg={beta}");
        for (i, (l, db)) in levels.iter().zip(MC_LEVELS_DB).enumerate() {
            let e_l = rel(s.stats.lcr_hat[i], lcr(sigma, *l)?, 0.0);
            out.push(Check::at_most(
                format!("{tag} lcr level_db={db}"),
                e_l,
                MC_LCR_TOL,
            ));
            let e_a = s.stats.afd_hat[i].map_or(f64::INFINITY, |a| {
                rel(a, afd(sigma, *l).unwrap_or(f64::NAN), 0.0)
            });
            out.push(Check::at_most(
                format!("{tag} afd level_db={db}"),
                e_a,
                MC_AFD_TOL,
            ));
        }
        out.push(Check {
            name: format!("{tag} rayleigh_ks_p"),
            value: s.ks.p_value,
            bound: Bound::AtLeast,
            limit: KS_SIGNIFICANCE,
        });
    }
    Ok(())
}

/// Runs every check. The verdict is a property of the report; callers map
/// a failed report to a nonzero exit.
pub fn cmd_verify(cfg: &ExperimentConfig, opts: VerifyOptions) -> CliResult<VerifyReport> {
    let r = cfg.validate()?;
    let mut checks = Vec::new();
    oracle_checks(r.geom.f_m(), opts.inject_fault, &mut checks)?;
    law_checks(cfg, &mut checks)?;
    if !opts.skip_monte_carlo {
        monte_carlo_checks(cfg, &mut checks)?;
    }
    Ok(VerifyReport {
        checks,
        seed: cfg.seed,
    })
}
