//! `dyndom`: generate, replay, verify and benchmark dynamic dominating sets.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use dyndom_core::forest::Backend;
use dyndom_core::harness::{
    run, scaling_bench, Family, GenSpec, RunConfig, ScalingConfig, SolverKind, TraceSource,
};
use dyndom_core::{generate_trace, serialize_trace};

#[derive(Debug, Parser)]
#[command(
    name = "dyndom",
    version,
    about = "Dynamic dominating sets under edge updates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Replay a trace through a solver, optionally checking oracles.
    Run(RunArgs),
    /// Same as `run`, checking every event unless `--verify-every` says otherwise.
    Verify(RunArgs),
    /// Write a generated trace.
    Gen(GenArgs),
    /// Per-update time across a doubling schedule of sizes.
    Bench(BenchArgs),
}

#[derive(Debug, Args, PartialEq)]
struct RunArgs {
    #[arg(long)]
    solver: SolverKind,
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    trace: Option<PathBuf>,
    /// Generator parameters, e.g. `n=64,steps=2000,pdel=0.4,seed=1`.
    #[arg(long)]
    gen: Option<GenSpec>,
    #[arg(long)]
    verify_every: Option<usize>,
    #[arg(long, default_value_t = Backend::default())]
    backend: Backend,
    /// CSV file receiving one record per checkpoint.
    #[arg(long)]
    metrics: Option<PathBuf>,
    /// Generator seed when `--gen` leaves it out.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for snapshots of failing states.
    #[arg(long)]
    snapshot_dir: Option<PathBuf>,
}

impl RunArgs {
    fn into_config(self, default_verify: usize) -> RunConfig {
        let source = match (self.trace, self.gen) {
            (Some(p), _) => TraceSource::File(p),
            (None, Some(g)) => TraceSource::Gen(g),
            (None, None) => unreachable!("clap requires one source"),
        };
        RunConfig {
            solver: self.solver,
            source,
            verify_every: self.verify_every.unwrap_or(default_verify),
            metrics: self.metrics,
            backend: self.backend,
            seed: self.seed,
            snapshot_dir: self.snapshot_dir,
        }
    }
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    gen: GenSpec,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long, default_value = "mds")]
    solver: SolverKind,
    #[arg(long, default_value = "dense")]
    family: Family,
    #[arg(long, value_delimiter = ',', default_values_t = [64, 128, 256, 512])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = Backend::default())]
    backend: Backend,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Measure each size on its own thread.
    #[arg(long)]
    parallel: bool,
}

fn run_command(args: RunArgs, default_verify: usize) -> anyhow::Result<u8> {
    let cfg = args.into_config(default_verify);
    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(e.exit_code() as u8);
        }
    };
    let last = outcome.records.last();
    println!(
        "solver {} events {} dsize {} csize {} lvl_changes {} d_changes {} dt_adds {}",
        cfg.solver,
        last.map_or(0, |r| r.event),
        outcome.final_ds.len(),
        outcome.final_connectors.len(),
        outcome.churn.level_changes,
        outcome.churn.d_changes,
        outcome.churn.dt_adds,
    );
    if let Some(v) = &outcome.violation {
        eprintln!("{}", v.summary());
    }
    Ok(outcome.exit_code() as u8)
}

fn gen_command(args: GenArgs) -> anyhow::Result<u8> {
    let g = args.gen;
    let trace = match generate_trace(g.n, g.steps, g.pdel, g.seed.unwrap_or(args.seed)) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(2);
        }
    };
    let text = serialize_trace(&trace);
    match args.output {
        Some(p) => fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn bench_command(args: BenchArgs) -> anyhow::Result<u8> {
    if args.sizes.iter().any(|&n| n < 2) {
        eprintln!("error: sizes must be at least 2");
        return Ok(2);
    }
    let cfg = ScalingConfig {
        solver: args.solver,
        family: args.family,
        sizes: args.sizes,
        backend: args.backend,
        seed: args.seed,
        parallel: args.parallel,
    };
    print!("{}", scaling_bench(&cfg).render());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run_command(a, 0),
        Command::Verify(a) => run_command(a, 1),
        Command::Gen(a) => gen_command(a),
        Command::Bench(a) => bench_command(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reparse(cfg: &RunConfig) -> RunConfig {
        let argv = std::iter::once("dyndom".to_string())
            .chain(std::iter::once("run".to_string()))
            .chain(cfg.to_args());
        match Cli::try_parse_from(argv).unwrap().command {
            Command::Run(a) => a.into_config(0),
            other => panic!("parsed as {other:?}"),
        }
    }

    #[test]
    fn config_round_trips_through_flags() {
        let params: GenSpec = "n=64,steps=2000,pdel=0.4,seed=1".parse().unwrap();
        let mut cfg = RunConfig::new(SolverKind::CdsFast, TraceSource::Gen(params));
        cfg.verify_every = 3;
        cfg.backend = Backend::Naive;
        cfg.seed = 42;
        cfg.metrics = Some("m.csv".into());
        cfg.snapshot_dir = Some("snaps".into());
        assert_eq!(reparse(&cfg), cfg);

        let mut cfg = RunConfig::new(SolverKind::Minimal, TraceSource::File("t.txt".into()));
        assert_eq!(reparse(&cfg), cfg);
        cfg.verify_every = 1;
        cfg.source = TraceSource::Gen(GenSpec {
            seed: None,
            ..params
        });
        assert_eq!(reparse(&cfg), cfg);
    }

    #[test]
    fn sources_are_exclusive_and_required() {
        assert!(Cli::try_parse_from(["dyndom", "run", "--solver", "mds"]).is_err());
        let both = [
            "dyndom",
            "run",
            "--solver",
            "mds",
            "--trace",
            "x",
            "--gen",
            "n=4,steps=1",
        ];
        assert!(Cli::try_parse_from(both).is_err());
        assert!(Cli::try_parse_from(["dyndom", "run", "--solver", "cds", "--trace", "x"]).is_err());
    }
}
