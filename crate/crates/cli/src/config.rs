//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # urban canyon, cluster ahead of the vehicle
//! scenario = canyon
//! kappa = 10
//! beta_deg = 30
//! carrier_hz = 2.4e9
//! ```
//!
//! Command-line overrides use the same keys (`--set kappa=3`). Optional
//! keys accept `none`.

use std::collections::HashMap;
use std::path::PathBuf;

use vmf_fading::doppler::{geometry, DopplerGeometry};
use vmf_fading::secondorder::db_grid;
use vmf_fading::simulator::SAMPLES_PER_DOPPLER;
use vmf_fading::{AnglePair, Direction3F64, MotionConfigF64, NormalizedLevelF64, VmfScatteringF64};

use crate::error::{CliError, CliResult};

pub const DEFAULT_CARRIER_HZ: f64 = 2.0e9;

const KEYS: &[&str] = &[
    "scenario",
    "kappa",
    "mu_phi_deg",
    "mu_psi_deg",
    "speed",
    "motion_azimuth_deg",
    "motion_elevation_deg",
    "beta_deg",
    "carrier_hz",
    "wavelength",
    "level_min_db",
    "level_max_db",
    "level_step_db",
    "n_paths",
    "duration",
    "dt_factor",
    "realizations",
    "seed",
    "omega",
    "carrier_offset_hz",
    "kappas",
    "betas_deg",
    "fig1_beta_step_deg",
    "pdf_points",
    "output",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: String,
    pub kappa: f64,
    pub mu_phi_deg: f64,
    pub mu_psi_deg: f64,
    /// m/s
    pub speed: f64,
    pub motion_azimuth_deg: f64,
    pub motion_elevation_deg: f64,
    /// Angle between motion and mean scattering direction. When set, it
    /// replaces the motion azimuth/elevation.
    pub beta_deg: Option<f64>,
    pub carrier_hz: Option<f64>,
    pub wavelength: Option<f64>,
    pub level_min_db: f64,
    pub level_max_db: f64,
    pub level_step_db: f64,
    pub n_paths: usize,
    /// Seconds per realisation; `400/f_m` when unset.
    pub duration: Option<f64>,
    /// Samples per `1/f_m`.
    pub dt_factor: f64,
    pub realizations: usize,
    pub seed: u64,
    pub omega: f64,
    pub carrier_offset_hz: f64,
    pub kappas: Vec<f64>,
    pub betas_deg: Vec<f64>,
    pub fig1_beta_step_deg: f64,
    pub pdf_points: usize,
    pub output: Option<PathBuf>,
    /// Where each key was last set, for diagnostics.
    origin: HashMap<&'static str, String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: "default".into(),
            kappa: 10.0,
            mu_phi_deg: 0.0,
            mu_psi_deg: 0.0,
            speed: 30.0,
            motion_azimuth_deg: 0.0,
            motion_elevation_deg: 0.0,
            beta_deg: None,
            carrier_hz: None,
            wavelength: None,
            level_min_db: -30.0,
            level_max_db: 10.0,
            level_step_db: 0.25,
            n_paths: 128,
            duration: None,
            dt_factor: SAMPLES_PER_DOPPLER,
            realizations: 20,
            seed: 0,
            omega: 1.0,
            carrier_offset_hz: 0.0,
            kappas: vec![0.0, 1.0, 3.0, 10.0, 30.0, 100.0, 1000.0],
            betas_deg: vec![0.0, 45.0, 90.0, 135.0, 180.0],
            fig1_beta_step_deg: 1.0,
            pdf_points: 401,
            output: None,
            origin: HashMap::new(),
        }
    }
}

/// Validated configuration turned into model objects.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub scat: VmfScatteringF64,
    pub motion: MotionConfigF64,
    pub geom: DopplerGeometry<f64>,
    pub levels: Vec<NormalizedLevelF64>,
    pub dt: f64,
    pub duration: f64,
}

fn parse_f64(v: &str) -> Result<f64, String> {
    let x: f64 = v
        .parse()
        .map_err(|_| format!("expected a number, got `{v}`"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("expected a finite number, got `{v}`"))
    }
}

fn parse_opt_f64(v: &str) -> Result<Option<f64>, String> {
    if v == "none" {
        Ok(None)
    } else {
        parse_f64(v).map(Some)
    }
}

fn parse_int<I: std::str::FromStr>(v: &str) -> Result<I, String> {
    v.parse()
        .map_err(|_| format!("expected a non-negative integer, got `{v}`"))
}

fn parse_list(v: &str) -> Result<Vec<f64>, String> {
    v.split([',', ';', ' '])
        .filter(|s| !s.is_empty())
        .map(parse_f64)
        .collect()
}

fn join(xs: &[f64]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "none".into(), |v| v.to_string())
}

impl ExperimentConfig {
    /// Parses config text. `source` names the file in diagnostics.
    pub fn parse(text: &str, source: &str) -> CliResult<Self> {
        let mut cfg = Self::default();
        let mut seen = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = format!("{source}:{line_no}");
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Validation(format!("{at}: expected `key = value`, got `{line}`"))
            })?;
            let key = key.trim();
            if let Some(prev) = seen.insert(key.to_string(), line_no) {
                return Err(CliError::Validation(format!(
                    "{at}: field `{key}`: already set on line {prev}"
                )));
            }
            cfg.set(key, value.trim(), &at)?;
        }
        Ok(cfg)
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> CliResult<()> {
        let (key, value) = assignment.split_once('=').ok_or_else(|| {
            CliError::Validation(format!("--set {assignment}: expected `key=value`"))
        })?;
        let at = format!("--set {assignment}");
        self.set(key.trim(), value.trim(), &at)
    }

    pub fn set(&mut self, key: &str, value: &str, at: &str) -> CliResult<()> {
        let field = KEYS
            .iter()
            .copied()
            .find(|k| *k == key)
            .ok_or_else(|| CliError::Validation(format!("{at}: unknown field `{key}`")))?;
        self.assign(field, value)
            .map_err(|msg| CliError::Validation(format!("{at}: field `{field}`: {msg}")))?;
        self.origin.insert(field, at.to_string());
        Ok(())
    }

    fn assign(&mut self, field: &str, v: &str) -> Result<(), String> {
        match field {
            "scenario" => {
                if v.is_empty() || v.contains(char::is_whitespace) {
                    return Err("expected a name without spaces".into());
                }
                self.scenario = v.to_string();
            }
            "kappa" => self.kappa = parse_f64(v)?,
            "mu_phi_deg" => self.mu_phi_deg = parse_f64(v)?,
            "mu_psi_deg" => self.mu_psi_deg = parse_f64(v)?,
            "speed" => self.speed = parse_f64(v)?,
            "motion_azimuth_deg" => self.motion_azimuth_deg = parse_f64(v)?,
            "motion_elevation_deg" => self.motion_elevation_deg = parse_f64(v)?,
            "beta_deg" => self.beta_deg = parse_opt_f64(v)?,
            "carrier_hz" => self.carrier_hz = parse_opt_f64(v)?,
            "wavelength" => self.wavelength = parse_opt_f64(v)?,
            "level_min_db" => self.level_min_db = parse_f64(v)?,
            "level_max_db" => self.level_max_db = parse_f64(v)?,
            "level_step_db" => self.level_step_db = parse_f64(v)?,
            "n_paths" => self.n_paths = parse_int(v)?,
            "duration" => self.duration = parse_opt_f64(v)?,
            "dt_factor" => self.dt_factor = parse_f64(v)?,
            "realizations" => self.realizations = parse_int(v)?,
            "seed" => self.seed = parse_int(v)?,
            "omega" => self.omega = parse_f64(v)?,
            "carrier_offset_hz" => self.carrier_offset_hz = parse_f64(v)?,
            "kappas" => self.kappas = parse_list(v)?,
            "betas_deg" => self.betas_deg = parse_list(v)?,
            "fig1_beta_step_deg" => self.fig1_beta_step_deg = parse_f64(v)?,
            "pdf_points" => self.pdf_points = parse_int(v)?,
            "output" => self.output = (v != "none").then(|| PathBuf::from(v)),
            _ => unreachable!("field list and match arms disagree"),
        }
        Ok(())
    }

    fn fail(&self, field: &'static str, msg: impl std::fmt::Display) -> CliError {
        match self.origin.get(field) {
            Some(at) => CliError::Validation(format!("{at}: field `{field}`: {msg}")),
            None => CliError::Validation(format!("field `{field}`: {msg}")),
        }
    }

    fn require(
        &self,
        ok: bool,
        field: &'static str,
        msg: &str,
        value: impl std::fmt::Display,
    ) -> CliResult<()> {
        if ok {
            Ok(())
        } else {
            Err(self.fail(field, format!("{msg} (got {value})")))
        }
    }

    /// Wavelength in metres from whichever of carrier/wavelength is set.
    pub fn resolved_wavelength(&self) -> CliResult<f64> {
        match (self.carrier_hz, self.wavelength) {
            (Some(_), Some(_)) => Err(self.fail(
                "wavelength",
                "set either carrier_hz or wavelength, not both",
            )),
            (Some(f), None) => {
                self.require(f > 0.0, "carrier_hz", "must be > 0", f)?;
                Ok(vmf_fading::doppler::SPEED_OF_LIGHT / f)
            }
            (None, Some(l)) => {
                self.require(l > 0.0, "wavelength", "must be > 0", l)?;
                Ok(l)
            }
            (None, None) => Ok(vmf_fading::doppler::SPEED_OF_LIGHT / DEFAULT_CARRIER_HZ),
        }
    }

    pub fn validate(&self) -> CliResult<Resolved> {
        self.require(self.kappa >= 0.0, "kappa", "must be >= 0", self.kappa)?;
        self.require(
            self.mu_phi_deg.abs() <= 180.0,
            "mu_phi_deg",
            "must lie in [-180, 180]",
            self.mu_phi_deg,
        )?;
        self.require(
            self.mu_psi_deg.abs() <= 90.0,
            "mu_psi_deg",
            "must lie in [-90, 90]",
            self.mu_psi_deg,
        )?;
        self.require(self.speed > 0.0, "speed", "must be > 0", self.speed)?;
        self.require(
            self.motion_azimuth_deg.abs() <= 180.0,
            "motion_azimuth_deg",
            "must lie in [-180, 180]",
            self.motion_azimuth_deg,
        )?;
        self.require(
            self.motion_elevation_deg.abs() <= 90.0,
            "motion_elevation_deg",
            "must lie in [-90, 90]",
            self.motion_elevation_deg,
        )?;
        if let Some(b) = self.beta_deg {
            self.require(
                (0.0..=180.0).contains(&b),
                "beta_deg",
                "must lie in [0, 180]",
                b,
            )?;
        }
        let wavelength = self.resolved_wavelength()?;
        self.require(
            self.level_step_db > 0.0,
            "level_step_db",
            "must be > 0",
            self.level_step_db,
        )?;
        self.require(
            self.level_max_db >= self.level_min_db,
            "level_max_db",
            "must be >= level_min_db",
            self.level_max_db,
        )?;
        self.require(self.n_paths >= 1, "n_paths", "must be >= 1", self.n_paths)?;
        self.require(
            self.dt_factor >= SAMPLES_PER_DOPPLER,
            "dt_factor",
            "must be >= 32 samples per 1/f_m",
            self.dt_factor,
        )?;
        self.require(
            self.realizations >= 1,
            "realizations",
            "must be >= 1",
            self.realizations,
        )?;
        self.require(self.omega > 0.0, "omega", "must be > 0", self.omega)?;
        self.require(!self.kappas.is_empty(), "kappas", "must not be empty", "[]")?;
        if let Some(&k) = self.kappas.iter().find(|k| **k < 0.0) {
            return Err(self.fail("kappas", format!("entries must be >= 0 (got {k})")));
        }
        self.require(
            !self.betas_deg.is_empty(),
            "betas_deg",
            "must not be empty",
            "[]",
        )?;
        if let Some(&b) = self.betas_deg.iter().find(|b| !(0.0..=180.0).contains(*b)) {
            return Err(self.fail(
                "betas_deg",
                format!("entries must lie in [0, 180] (got {b})"),
            ));
        }
        self.require(
            self.fig1_beta_step_deg > 0.0,
            "fig1_beta_step_deg",
            "must be > 0",
            self.fig1_beta_step_deg,
        )?;
        self.require(
            self.pdf_points >= 2,
            "pdf_points",
            "must be >= 2",
            self.pdf_points,
        )?;

        let scat = VmfScatteringF64::new(
            self.mu_phi_deg.to_radians(),
            self.mu_psi_deg.to_radians(),
            self.kappa,
        )?;
        let direction = match self.beta_deg {
            Some(b) => tilted_from(&scat.mean_direction(), b.to_radians()),
            None => AnglePair::new(
                self.motion_azimuth_deg.to_radians(),
                self.motion_elevation_deg.to_radians(),
            )?
            .to_direction(),
        };
        let motion = MotionConfigF64::new(self.speed, direction, wavelength)?;
        let f_m = motion.max_doppler();
        let duration = match self.duration {
            Some(d) => {
                self.require(d > 0.0, "duration", "must be > 0", d)?;
                d
            }
            None => 400.0 / f_m,
        };
        let levels = db_grid(self.level_min_db, self.level_max_db, self.level_step_db)
            .map_err(|e| self.fail("level_min_db", e))?;
        Ok(Resolved {
            scat,
            motion,
            geom: geometry(&scat, &motion),
            levels,
            dt: 1.0 / (self.dt_factor * f_m),
            duration,
        })
    }

    /// Every field as `key=value`, space separated, in a fixed order.
    pub fn echo(&self) -> String {
        let fields: Vec<String> = vec![
            format!("scenario={}", self.scenario),
            format!("kappa={}", self.kappa),
            format!("mu_phi_deg={}", self.mu_phi_deg),
            format!("mu_psi_deg={}", self.mu_psi_deg),
            format!("speed={}", self.speed),
            format!("motion_azimuth_deg={}", self.motion_azimuth_deg),
            format!("motion_elevation_deg={}", self.motion_elevation_deg),
            format!("beta_deg={}", opt(self.beta_deg)),
            format!("carrier_hz={}", opt(self.carrier_hz)),
            format!("wavelength={}", opt(self.wavelength)),
            format!("level_min_db={}", self.level_min_db),
            format!("level_max_db={}", self.level_max_db),
            format!("level_step_db={}", self.level_step_db),
            format!("n_paths={}", self.n_paths),
            format!("duration={}", opt(self.duration)),
            format!("dt_factor={}", self.dt_factor),
            format!("realizations={}", self.realizations),
            format!("omega={}", self.omega),
            format!("carrier_offset_hz={}", self.carrier_offset_hz),
            format!("kappas={}", join(&self.kappas)),
            format!("betas_deg={}", join(&self.betas_deg)),
            format!("fig1_beta_step_deg={}", self.fig1_beta_step_deg),
            format!("pdf_points={}", self.pdf_points),
            format!("seed={}", self.seed),
        ];
        fields.join(" ")
    }
}

/// Direction at angle `beta` from `mean`, tilted toward +z (or +x when
/// `mean` is vertical).
pub fn tilted_from(mean: &Direction3F64, beta: f64) -> Direction3F64 {
    let up = if mean.z().abs() < 0.9 {
        Direction3F64::new(0.0, 0.0, 1.0)
    } else {
        Direction3F64::new(1.0, 0.0, 0.0)
    }
    .expect("axis is a unit vector");
    mean.rotated_toward(&up, beta)
}
