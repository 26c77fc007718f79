use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vmf_fading_cli::commands::{
    cmd_afd, cmd_figure, cmd_lcr, cmd_moments, cmd_pdf, cmd_simulate, Figure,
};
use vmf_fading_cli::table::Table;
use vmf_fading_cli::verify::{cmd_verify, VerifyOptions};
use vmf_fading_cli::{CliError, CliResult, ExperimentConfig};

/// Doppler and level-crossing statistics for vMF-distributed scatterers.
#[derive(Debug, Parser)]
#[command(name = "vmf-fading", version)]
struct Cli {
    /// Config file of `key = value` lines.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override a config key, e.g. `--set kappa=3`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output path (a directory for `figures`). Standard output if absent.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mean Doppler shift, mean-square Doppler and Doppler spread.
    Moments,
    /// Level-crossing rate over the level grid (CSV).
    Lcr,
    /// Average fade duration over the level grid (CSV).
    Afd,
    /// Doppler PDF (CSV).
    Pdf,
    /// One channel realisation: I/Q and envelope time series (CSV).
    Simulate,
    /// Figure data as CSV files.
    Figures {
        /// fig1, fig2, fig3, fig4 or all.
        #[arg(long, default_value = "all")]
        which: String,
    },
    /// Oracle grid and Monte-Carlo closure checks.
    Verify {
        /// Only the analytic checks.
        #[arg(long)]
        skip_monte_carlo: bool,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn load(cli: &Cli) -> CliResult<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
            ExperimentConfig::parse(&text, &path.display().to_string())?
        }
        None => ExperimentConfig::default(),
    };
    for s in &cli.set {
        cfg.apply_override(s)?;
    }
    if let Some(o) = &cli.output {
        cfg.output = Some(o.clone());
    }
    Ok(cfg)
}

fn emit_table(t: &Table, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => t.write_to(p),
        None => {
            print!("{}", t.render());
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    let cfg = load(cli)?;
    let out = cfg.output.as_deref();
    match &cli.command {
        Command::Moments => print!("{}", cmd_moments(&cfg)?),
        Command::Lcr => emit_table(&cmd_lcr(&cfg)?, out)?,
        Command::Afd => emit_table(&cmd_afd(&cfg)?, out)?,
        Command::Pdf => emit_table(&cmd_pdf(&cfg)?, out)?,
        Command::Simulate => emit_table(&cmd_simulate(&cfg)?, out)?,
        Command::Figures { which } => {
            let figs = Figure::parse(which)?;
            let dir = out.unwrap_or(Path::new("."));
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
            for f in figs {
                let path = dir.join(format!("{}.csv", f.name()));
                cmd_figure(f, &cfg)?.write_to(&path)?;
                println!("wrote {}", path.display());
            }
        }
        Command::Verify {
            skip_monte_carlo,
            inject_fault,
        } => {
            let opts = VerifyOptions {
                inject_fault: *inject_fault,
                skip_monte_carlo: *skip_monte_carlo,
            };
            let report = cmd_verify(&cfg, opts)?;
            print!("{}", report.render());
            if !report.passed() {
                return Err(CliError::Verification(format!(
                    "{} check(s) failed",
                    report.failed().len()
                )));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
