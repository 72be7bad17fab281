//! Command-line front end for the planar affine body library.

mod commands;
mod config;
mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Failure, Outcome, Source};
use config::{Format, RunConfig};
use output::Table;

#[derive(Parser)]
#[command(name = "affine-body", version, about = "Doubly isotropic planar affine body: dynamics, actions and spectra")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override a config key, e.g. `--set integrator.steps=500`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Two-polar decomposition of the matrix [[x, y], [z, u]].
    Decompose {
        #[arg(allow_negative_numbers = true, num_args = 4, value_names = ["X", "Y", "Z", "U"])]
        entries: Vec<f64>,
    },
    /// Integrate a trajectory; writes the trajectory table and a drift summary.
    Simulate {
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        chart: Option<String>,
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        /// Drift summary path; defaults to `<output>.summary.json`, or stderr.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Energy levels from the semiclassical rule, the closed forms or the numerical oracle.
    Spectrum {
        #[arg(value_enum)]
        source: Source,
        #[arg(long)]
        model: Option<String>,
    },
    /// Action quadrature, frequencies and resonance relations.
    Actions {
        #[arg(long)]
        model: Option<String>,
    },
    /// Sample one separated wavefunction factor.
    Wavefunction {
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        variable: Option<String>,
    },
    /// Cross-check charts, metrics and the group-metric identities on random samples.
    ChartCheck {
        #[arg(long)]
        samples: Option<usize>,
    },
}

impl Command {
    /// Subcommand flags expressed as config overrides.
    fn overrides(&self) -> Vec<String> {
        let mut out = vec![];
        let mut put = |key: &str, v: Option<String>| {
            if let Some(v) = v {
                out.push(format!("{key}={v}"));
            }
        };
        let quoted = |s: &Option<String>| s.as_ref().map(|s| format!("\"{s}\""));
        match self {
            Command::Decompose { .. } => {}
            Command::Simulate { model, chart, scheme, dt, steps, .. } => {
                put("model.kind", quoted(model));
                put("chart", quoted(chart));
                put("integrator.scheme", quoted(scheme));
                put("integrator.dt", dt.map(|v| format!("{v:e}")));
                put("integrator.steps", steps.map(|v| v.to_string()));
            }
            Command::Spectrum { model, .. } | Command::Actions { model } => put("model.kind", quoted(model)),
            Command::Wavefunction { model, variable } => {
                put("model.kind", quoted(model));
                put("wavefunction.variable", quoted(variable));
            }
            Command::ChartCheck { samples } => put("chart_check.samples", samples.map(|v| v.to_string())),
        }
        out
    }
}

fn open_sink(path: Option<&Path>) -> Outcome<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn emit(table: &Table, path: Option<&Path>, format: Format) -> Outcome<()> {
    let mut sink = open_sink(path)?;
    table.write(&mut sink, format)?;
    sink.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Outcome<()> {
    let c = &cli.common;
    let mut overrides = cli.command.overrides();
    overrides.extend(c.overrides.iter().cloned());
    if let Some(seed) = c.seed {
        overrides.push(format!("seed={seed}"));
    }
    let cfg = RunConfig::load(c.config.as_deref(), &overrides).map_err(Failure::Config)?;
    let path = c.output.clone().or_else(|| cfg.output.path.clone());
    let format = c.format.unwrap_or(cfg.output.format);

    match &cli.command {
        Command::Decompose { entries } => {
            let e: [f64; 4] = entries.as_slice().try_into().map_err(|_| Failure::Config("decompose takes four entries".into()))?;
            emit(&commands::decompose(e)?, path.as_deref(), format)
        }
        Command::Simulate { summary, .. } => {
            let sim = commands::simulate(&cfg)?;
            emit(&sim.trajectory, path.as_deref(), format)?;
            let text = serde_json::to_string_pretty(&sim.summary).expect("summary serializes");
            match summary.clone().or_else(|| path.as_ref().map(|p| p.with_extension("summary.json"))) {
                Some(p) => std::fs::write(p, text + "\n")?,
                None => eprintln!("{text}"),
            }
            match sim.termination {
                Some(reason) => Err(Failure::Truncated(reason)),
                None => Ok(()),
            }
        }
        Command::Spectrum { source, .. } => emit(&commands::spectrum(&cfg, *source)?, path.as_deref(), format),
        Command::Actions { .. } => emit(&commands::actions(&cfg)?, path.as_deref(), format),
        Command::Wavefunction { .. } => emit(&commands::wavefunction(&cfg)?, path.as_deref(), format),
        Command::ChartCheck { .. } => {
            let (table, failed) = commands::chart_check(&cfg)?;
            emit(&table, path.as_deref(), format)?;
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Check(failed.join(", ")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage problems share the configuration exit code
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("affine-body: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
