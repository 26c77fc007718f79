//! Subcommand implementations. Each returns its output in memory; `main`
//! decides where it goes.

use std::fmt::Write as _;

use vmf_fading::doppler::{doppler_pdf, doppler_spread, moments, DopplerGeometry};
use vmf_fading::oracle::{moments_by_quadrature, spread_by_quadrature};
use vmf_fading::secondorder::LcrAfdCurve;
use vmf_fading::simulator::{complex_baseband, realize};
use vmf_fading::{ChannelConfigF64, QuadratureSpecF64, VmfScatteringF64};

use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig1, Figure::Fig2, Figure::Fig3, Figure::Fig4];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
        }
    }

    pub fn parse(s: &str) -> CliResult<Vec<Figure>> {
        match s {
            "all" => Ok(Self::ALL.to_vec()),
            _ => Self::ALL
                .into_iter()
                .find(|f| f.name() == s)
                .map(|f| vec![f])
                .ok_or_else(|| {
                    CliError::Validation(format!("unknown figure `{s}` (fig1..fig4 or all)"))
                }),
        }
    }
}

fn header(command: &str, cfg: &ExperimentConfig) -> String {
    format!("command={command} {}", cfg.echo())
}

/// `|a − b| / max(|b|, floor)`.
pub fn rel_dev(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / b.abs().max(floor)
}

/// Closed-form and quadrature moments side by side.
pub fn cmd_moments(cfg: &ExperimentConfig) -> CliResult<String> {
    let r = cfg.validate()?;
    let f_m = r.geom.f_m();
    let closed = moments(&r.scat, &r.geom);
    let oracle = moments_by_quadrature(&r.scat, &r.geom, &QuadratureSpecF64::default())?;
    let mut out = String::new();
    let _ = writeln!(out, "scenario        {}", cfg.scenario);
    let _ = writeln!(out, "kappa           {}", r.scat.kappa());
    let _ = writeln!(out, "beta_deg        {:.6}", r.geom.beta().to_degrees());
    let _ = writeln!(out, "f_m_hz          {:.10e}", f_m);
    let _ = writeln!(out, "f_mu_hz         {:.10e}", r.geom.f_mu());
    let _ = writeln!(
        out,
        "{:<16}{:<26}{:<26}rel_dev",
        "quantity", "closed_form", "oracle"
    );
    let rows = [
        ("mean_hz", closed.mean, oracle.mean, f_m),
        (
            "mean_square_hz2",
            closed.mean_square,
            oracle.mean_square,
            f_m * f_m,
        ),
        ("spread_hz", closed.spread, oracle.spread, f_m),
    ];
    for (name, c, o, scale) in rows {
        let _ = writeln!(
            out,
            "{:<16}{:<26}{:<26}{:.3e}",
            name,
            format!("{c:.16e}"),
            format!("{o:.16e}"),
            rel_dev(c, o, 1e-6 * scale)
        );
    }
    let _ = writeln!(out, "mean/f_m        {:.7}", closed.mean / f_m);
    let _ = writeln!(out, "spread/f_m      {:.7}", closed.spread / f_m);
    Ok(out)
}

fn curve(cfg: &ExperimentConfig) -> CliResult<(f64, LcrAfdCurve<f64>)> {
    let r = cfg.validate()?;
    let sigma = doppler_spread(&r.scat, &r.geom);
    Ok((r.geom.f_m(), LcrAfdCurve::from_spread(sigma, &r.levels)?))
}

/// LCR over the configured level grid.
pub fn cmd_lcr(cfg: &ExperimentConfig) -> CliResult<Table> {
    let (f_m, c) = curve(cfg)?;
    let mut t = Table::new(
        header("lcr", cfg),
        &["level_db", "rho", "lcr_hz", "lcr_over_f_m"],
    );
    for (l, v) in c.levels.iter().zip(&c.lcr) {
        t.push(vec![l.db(), l.rho(), *v, v / f_m]);
    }
    Ok(t)
}

/// AFD over the configured level grid. Infinite when the spread vanishes.
pub fn cmd_afd(cfg: &ExperimentConfig) -> CliResult<Table> {
    let (f_m, c) = curve(cfg)?;
    let mut t = Table::new(
        header("afd", cfg),
        &["level_db", "rho", "afd_s", "afd_times_f_m"],
    );
    for (l, v) in c.levels.iter().zip(&c.afd) {
        t.push(vec![l.db(), l.rho(), *v, v * f_m]);
    }
    Ok(t)
}

/// Doppler PDF on `pdf_points` equispaced frequencies in `[−f_m, f_m]`.
pub fn cmd_pdf(cfg: &ExperimentConfig) -> CliResult<Table> {
    let r = cfg.validate()?;
    let f_m = r.geom.f_m();
    let n = cfg.pdf_points;
    let mut t = Table::new(header("pdf", cfg), &["f_hz", "f_over_f_m", "pdf_per_hz"]);
    for i in 0..n {
        let x = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
        let f = (x * f_m).clamp(-f_m, f_m);
        t.push(vec![f, x, doppler_pdf(&r.scat, &r.geom, f)?]);
    }
    Ok(t)
}

/// One channel realisation sampled at `dt = 1/(dt_factor · f_m)`.
///
/// Phases rotate as `exp(j(φ − 2π f_D t))`.
pub fn cmd_simulate(cfg: &ExperimentConfig) -> CliResult<Table> {
    let r = cfg.validate()?;
    let ch = ChannelConfigF64::new(
        cfg.n_paths,
        cfg.omega,
        r.scat,
        r.motion,
        cfg.carrier_offset_hz,
        cfg.seed,
    )?;
    let real = realize(&ch);
    let iq = complex_baseband(&real, r.duration, r.dt)?;
    let rms = cfg.omega.sqrt();
    let mut t = Table::new(
        header("simulate", cfg),
        &[
            "time_s",
            "in_phase",
            "quadrature",
            "envelope",
            "envelope_db",
        ],
    );
    for (i, (re, im)) in iq.into_iter().enumerate() {
        let env = re.hypot(im);
        t.push(vec![
            i as f64 * r.dt,
            re,
            im,
            env,
            20.0 * (env / rms).log10(),
        ]);
    }
    Ok(t)
}

fn deg_label(x: f64) -> String {
    x.to_string()
}

fn fig1(cfg: &ExperimentConfig) -> CliResult<Table> {
    let spec = QuadratureSpecF64::default();
    let mut t = Table::new(
        header("figures which=fig1", cfg),
        &[
            "kappa",
            "beta_deg",
            "spread_over_f_m",
            "spread_over_f_m_oracle",
        ],
    );
    let steps = (180.0 / cfg.fig1_beta_step_deg + 1e-9).floor() as usize;
    for &kappa in &cfg.kappas {
        let scat = VmfScatteringF64::new(0.0, 0.0, kappa)?;
        for i in 0..=steps {
            let beta_deg = (i as f64 * cfg.fig1_beta_step_deg).min(180.0);
            let geom = DopplerGeometry::from_beta(1.0, beta_deg.to_radians())?;
            t.push(vec![
                kappa,
                beta_deg,
                doppler_spread(&scat, &geom),
                spread_by_quadrature(&scat, &geom, &spec)?,
            ]);
        }
    }
    Ok(t)
}

fn level_table(
    cfg: &ExperimentConfig,
    which: &str,
    series: &[(String, Vec<f64>)],
) -> CliResult<Table> {
    let r = cfg.validate()?;
    let mut cols = vec!["level_db".to_string(), "rho".to_string()];
    cols.extend(series.iter().map(|(name, _)| name.clone()));
    let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut t = Table::new(header(&format!("figures which={which}"), cfg), &col_refs);
    for (i, l) in r.levels.iter().enumerate() {
        let mut row = vec![l.db(), l.rho()];
        row.extend(series.iter().map(|(_, v)| v[i]));
        t.push(row);
    }
    Ok(t)
}

/// Normalised LCR (`L/f_m`) and AFD (`T·f_m`) at unit `f_m`.
fn normalized_curve(
    kappa: f64,
    beta_deg: f64,
    cfg: &ExperimentConfig,
) -> CliResult<LcrAfdCurve<f64>> {
    let r = cfg.validate()?;
    let scat = VmfScatteringF64::new(0.0, 0.0, kappa)?;
    let geom = DopplerGeometry::from_beta(1.0, beta_deg.to_radians())?;
    Ok(LcrAfdCurve::from_spread(
        doppler_spread(&scat, &geom),
        &r.levels,
    )?)
}

fn fig2(cfg: &ExperimentConfig) -> CliResult<Table> {
    let mut series = Vec::new();
    for &b in &cfg.betas_deg {
        series.push((
            format!("lcr_over_f_m_beta_{}", deg_label(b)),
            normalized_curve(cfg.kappa, b, cfg)?.lcr,
        ));
    }
    let sweep = (0..=180)
        .map(|b| normalized_curve(cfg.kappa, b as f64, cfg).map(|c| c.lcr))
        .collect::<CliResult<Vec<_>>>()?;
    let n = sweep[0].len();
    let lo = (0..n)
        .map(|i| sweep.iter().map(|c| c[i]).fold(f64::INFINITY, f64::min))
        .collect();
    let hi = (0..n)
        .map(|i| sweep.iter().map(|c| c[i]).fold(0.0, f64::max))
        .collect();
    series.push(("lcr_over_f_m_min".into(), lo));
    series.push(("lcr_over_f_m_max".into(), hi));
    level_table(cfg, "fig2", &series)
}

fn fig34(cfg: &ExperimentConfig, lcr: bool) -> CliResult<Table> {
    let mut series = Vec::new();
    for &k in &cfg.kappas {
        let c = normalized_curve(k, 0.0, cfg)?;
        if lcr {
            series.push((format!("lcr_over_f_m_kappa_{k}"), c.lcr));
        } else {
            series.push((format!("afd_times_f_m_kappa_{k}"), c.afd));
        }
    }
    level_table(cfg, if lcr { "fig3" } else { "fig4" }, &series)
}

/// Figure data at unit maximum Doppler shift.
///
/// * fig1: `σ_D/f_m` over `kappas` × β, closed form and quadrature.
/// * fig2: `L/f_m` at the configured `kappa` for each of `betas_deg`, with
///   the pointwise min/max over β ∈ [0°, 180°].
/// * fig3, fig4: `L/f_m` and `T·f_m` at β = 0 for each of `kappas`.
pub fn cmd_figure(which: Figure, cfg: &ExperimentConfig) -> CliResult<Table> {
    cfg.validate()?;
    match which {
        Figure::Fig1 => fig1(cfg),
        Figure::Fig2 => fig2(cfg),
        Figure::Fig3 => fig34(cfg, true),
        Figure::Fig4 => fig34(cfg, false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(overrides: &[&str]) -> ExperimentConfig {
        let mut c = ExperimentConfig::default();
        for o in overrides {
            c.apply_override(o).unwrap();
        }
        c
    }

    #[test]
    fn moments_report_isotropic_and_broadside() {
        let out = cmd_moments(&cfg(&["kappa=0"])).unwrap();
        assert!(out.contains("spread/f_m      0.5773503"), "{out}");
        assert!(out.contains("mean/f_m        0.0000000"), "{out}");
        let out = cmd_moments(&cfg(&["kappa=10", "beta_deg=90"])).unwrap();
        assert!(out.contains("spread/f_m      0.3000000"), "{out}");
    }

    #[test]
    fn moments_rejects_negative_kappa() {
        let e = cmd_moments(&cfg(&["kappa=-1"])).unwrap_err();
        assert_eq!(e.exit_code(), 1);
        assert!(e.to_string().contains("kappa"));
    }

    #[test]
    fn lcr_afd_tables() {
        let c = cfg(&["kappa=3", "beta_deg=45"]);
        let l = cmd_lcr(&c).unwrap();
        let a = cmd_afd(&c).unwrap();
        assert_eq!(l.rows.len(), 161);
        assert_eq!(l.columns, ["level_db", "rho", "lcr_hz", "lcr_over_f_m"]);
        for (rl, ra) in l.rows.iter().zip(&a.rows) {
            let rho = rl[1];
            let p = rl[2] * ra[2];
            assert!((p + (-rho * rho).exp_m1()).abs() < 1e-12);
        }
    }

    #[test]
    fn pdf_integrates_to_one() {
        let t = cmd_pdf(&cfg(&["kappa=3", "beta_deg=60", "pdf_points=2001"])).unwrap();
        let f = t.column("f_hz").unwrap();
        let p = t.column("pdf_per_hz").unwrap();
        let trap: f64 = f
            .windows(2)
            .zip(p.windows(2))
            .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
            .sum();
        assert!((trap - 1.0).abs() < 1e-4, "{trap}");
        assert_eq!(f[0], -f[2000]);
    }

    #[test]
    fn simulate_single_path_is_constant() {
        let t = cmd_simulate(&cfg(&["n_paths=1", "duration=0.05"])).unwrap();
        let env = t.column("envelope").unwrap();
        assert!(env.iter().all(|e| (e - 1.0).abs() < 1e-12));
        assert_eq!(t.columns[0], "time_s");
    }

    #[test]
    fn simulate_power_matches_omega() {
        let runs = 20;
        let mut total = 0.0;
        for seed in 0..runs {
            let t = cmd_simulate(&cfg(&["kappa=0", "omega=2", &format!("seed={seed}")])).unwrap();
            let env = t.column("envelope").unwrap();
            total += env.iter().map(|e| e * e).sum::<f64>() / env.len() as f64;
        }
        let ms = total / runs as f64;
        assert!((ms / 2.0 - 1.0).abs() < 0.02, "{ms}");
    }

    #[test]
    fn figure_selection() {
        assert_eq!(Figure::parse("all").unwrap().len(), 4);
        assert_eq!(Figure::parse("fig3").unwrap(), vec![Figure::Fig3]);
        assert!(Figure::parse("fig5").is_err());
    }

    #[test]
    fn fig1_isotropic_rows() {
        let t = cmd_figure(
            Figure::Fig1,
            &cfg(&["kappas=0;10", "fig1_beta_step_deg=45"]),
        )
        .unwrap();
        assert_eq!(t.rows.len(), 10);
        for row in t.rows.iter().filter(|r| r[0] == 0.0) {
            assert!((row[2] - 0.577_350_269_189_625_8).abs() < 1e-15);
            assert!((row[3] - 0.577_350_269_189_625_8).abs() < 1e-9);
        }
        for row in &t.rows {
            assert!(rel_dev(row[2], row[3], 1e-30) < 1e-8);
        }
    }

    #[test]
    fn fig2_broadside_dominates() {
        let t = cmd_figure(Figure::Fig2, &cfg(&[])).unwrap();
        let b0 = t.column("lcr_over_f_m_beta_0").unwrap();
        let b90 = t.column("lcr_over_f_m_beta_90").unwrap();
        let lo = t.column("lcr_over_f_m_min").unwrap();
        let hi = t.column("lcr_over_f_m_max").unwrap();
        for i in 0..b0.len() {
            assert!(b90[i] >= b0[i]);
            assert!(lo[i] <= b0[i] && b90[i] <= hi[i]);
        }
    }

    #[test]
    fn fig4_afd_grows_with_kappa() {
        let c = cfg(&[]);
        let t = cmd_figure(Figure::Fig4, &c).unwrap();
        let cols: Vec<Vec<f64>> = c
            .kappas
            .iter()
            .map(|k| t.column(&format!("afd_times_f_m_kappa_{k}")).unwrap())
            .collect();
        for w in cols.windows(2) {
            assert!(w[0].iter().zip(&w[1]).all(|(a, b)| b > a));
        }
    }
}
