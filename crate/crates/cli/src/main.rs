//! `vacancy`: seeded experiment runner.
//!
//! Exit status: 0 on success, 1 on a numerical failure or a failed
//! deterministic check, 2 on an invalid configuration.

mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use vacancy_core::model::{RadiusLaw, RngStream};
use vacancy_core::percolation::Phase;

use commands::RunError;
use config::{ConfigError, ExperimentConfig, Format, SEED_ENV};

#[derive(Parser, Debug)]
#[command(name = "vacancy", version, about = "Vacant-set percolation experiments for the Poisson Boolean model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Sample a Boolean model in `window` and list its grains.
    Sample,
    /// Square crossing probability over an intensity grid.
    Sweep,
    /// Check the one-step recursion on an (α, λ) grid.
    RecursionCheck,
    /// Summability certificate for the scale ladder.
    Summability,
    /// Lower bound on P[no H_n, J_n] along the strip sequence.
    VacancyCert,
    /// Compare the planar slice of a 3D model with its induced 2D model.
    SliceCheck,
    /// Bracket the finite-size crossing threshold.
    Threshold,
    /// Mean cluster diameter from the unit interval.
    LambdaD,
    /// Lower bound on the probability of the E event.
    EEvent,
    /// Write the 74-rectangle layout as JSON and CSV.
    LayoutDump,
    /// Verify the tile/bridge knitting of the layout.
    KnittingCheck,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Sample => "sample",
            Command::Sweep => "sweep",
            Command::RecursionCheck => "recursion-check",
            Command::Summability => "summability",
            Command::VacancyCert => "vacancy-cert",
            Command::SliceCheck => "slice-check",
            Command::Threshold => "threshold",
            Command::LambdaD => "lambda-d",
            Command::EEvent => "e-event",
            Command::LayoutDump => "layout-dump",
            Command::KnittingCheck => "knitting-check",
        }
    }
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum PhaseArg {
    Occupied,
    Vacant,
}

/// Flags override the matching config-file keys.
#[derive(clap::Args, Debug, Default)]
struct Overrides {
    /// TOML config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// RNG seed (default: config file, then $VACANCY_SEED, then 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (0: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Radius law, e.g. `fixed:1`, `pareto:3,1`, `zero:0.5/exponential:2`.
    #[arg(long, global = true)]
    law: Option<String>,
    #[arg(long, global = true)]
    lambda: Option<f64>,
    #[arg(long, global = true, value_delimiter = ',')]
    lambdas: Option<Vec<f64>>,
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long, global = true, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    #[arg(long, global = true)]
    reach_factor: Option<f64>,
    #[arg(long, global = true)]
    b: Option<f64>,
    #[arg(long, global = true)]
    kappa: Option<f64>,
    #[arg(long, global = true)]
    n_max: Option<u32>,
    #[arg(long, global = true)]
    n_empirical: Option<u32>,
    #[arg(long, global = true)]
    n_direct: Option<u32>,
    #[arg(long, global = true)]
    n_reps: Option<u64>,
    #[arg(long, global = true)]
    side: Option<f64>,
    #[arg(long, global = true, value_delimiter = ',')]
    scales: Option<Vec<f64>>,
    #[arg(long, global = true, value_enum)]
    phase: Option<PhaseArg>,
    #[arg(long, global = true)]
    target: Option<f64>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true)]
    lambda_lo: Option<f64>,
    #[arg(long, global = true)]
    lambda_hi: Option<f64>,
    #[arg(long, global = true)]
    k_max: Option<u32>,
    #[arg(long, global = true)]
    d: Option<u32>,
    /// `x0,x1,y0,y1`.
    #[arg(long, global = true, value_delimiter = ',', num_args = 4)]
    window: Option<Vec<f64>>,
}

impl Overrides {
    fn apply(self, c: &mut ExperimentConfig) -> Result<(), ConfigError> {
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = self.$field {
                    c.$field = v;
                }
            )*};
        }
        set!(out_dir, format, threads, lambda, lambdas, alpha, alphas, reach_factor, b, kappa);
        set!(n_max, n_empirical, n_direct, n_reps, side, scales, target, tol, budget, k_max, d);
        if let Some(s) = self.seed {
            c.seed = Some(s);
        }
        if let Some(v) = self.lambda_lo {
            c.lambda_lo = Some(v);
        }
        if let Some(v) = self.lambda_hi {
            c.lambda_hi = Some(v);
        }
        if let Some(p) = self.phase {
            c.phase = match p {
                PhaseArg::Occupied => Phase::Occupied,
                PhaseArg::Vacant => Phase::Vacant,
            };
        }
        if let Some(text) = self.law {
            c.law = text
                .parse::<RadiusLaw>()
                .map_err(|e| ConfigError::new("law", e.to_string()))?;
        }
        if let Some(w) = self.window {
            c.window = w
                .try_into()
                .map_err(|_| ConfigError::new("window", "expected x0,x1,y0,y1"))?;
        }
        Ok(())
    }
}

/// The JSON artifact: config echo, seed and result.
#[derive(Serialize)]
struct Report<'a> {
    command: &'a str,
    seed: u64,
    config: &'a ExperimentConfig,
    result: serde_json::Value,
}

fn resolve(cli: Cli) -> Result<(&'static str, ExperimentConfig, u64), ConfigError> {
    let command = cli.command.name();
    let mut config = match &cli.overrides.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    cli.overrides.apply(&mut config)?;
    config.validate(command)?;
    config.command = Some(command.to_string());
    let seed = config.resolve_seed(std::env::var(SEED_ENV).ok().as_deref())?;
    Ok((command, config, seed))
}

fn write_artifacts(command: &str, config: &ExperimentConfig, seed: u64, outcome: &commands::Outcome) -> Result<Vec<PathBuf>, String> {
    let dir = &config.out_dir;
    std::fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
    let write = |name: String, bytes: &[u8]| -> Result<PathBuf, String> {
        let path = dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        Ok(path)
    };
    let mut written = vec![write(format!("{command}.config.toml"), config.to_toml().as_bytes())?];
    if config.format.json() {
        let report = Report {
            command,
            seed,
            config,
            result: outcome.result.clone(),
        };
        let mut json = serde_json::to_vec_pretty(&report).map_err(|e| e.to_string())?;
        json.push(b'\n');
        written.push(write(format!("{command}.json"), &json)?);
    }
    if config.format.csv() {
        written.push(write(format!("{command}.csv"), &outcome.table)?);
    }
    Ok(written)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, config, seed) = match resolve(cli) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if config.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(config.threads).build_global() {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(1);
        }
    }
    let outcome = match commands::run(command, &config, &RngStream::new(seed)) {
        Ok(o) => o,
        Err(RunError::Core(vacancy_core::Error::InvalidParameter { name, reason })) => {
            eprintln!("error: {}", ConfigError::new(name, reason));
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {command} failed: {e}");
            return ExitCode::from(1);
        }
    };
    match write_artifacts(command, &config, seed, &outcome) {
        Ok(paths) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{command}: {}", outcome.summary);
            for p in paths {
                let _ = writeln!(out, "  wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: {command} check failed");
        ExitCode::from(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_subcommand_is_wired() {
        use clap::CommandFactory;
        let names: Vec<String> = Cli::command().get_subcommands().map(|s| s.get_name().to_string()).collect();
        assert_eq!(names, commands::COMMANDS);
    }

    #[test]
    fn flags_override_file() {
        let cli = Cli::try_parse_from(["vacancy", "summability", "--lambda", "0.03", "--law", "pareto:3,1"]).unwrap();
        let mut c = ExperimentConfig::from_toml("lambda = 0.01\nb = 4\n").unwrap();
        cli.overrides.apply(&mut c).unwrap();
        assert_eq!(c.lambda, 0.03);
        assert_eq!(c.b, 4.0);
        assert_eq!(c.law, RadiusLaw::pareto(3.0, 1.0));
    }
}
