use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use reuse_core::config::{self, RunConfig};
use reuse_core::experiment::{self, Scenario};
use reuse_core::lsh::{self, LshParams};
use reuse_core::sim::Mode;
use reuse_core::Error;

/// Edge computation-reuse simulator.
#[derive(Debug, Parser)]
#[command(name = "reuse-sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one configuration and write tasks.csv and summary.csv.
    Run {
        /// Configuration file (`key = value` lines).
        config: PathBuf,
        /// Override a configuration key, e.g. `--set workload.num_tasks=500`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long, short, default_value = "out")]
        out: PathBuf,
    },
    /// Run a preset sweep over all three modes and write sweep_<scenario>.csv.
    Sweep {
        /// One of: completion, computation, waiting, utilization, load, gain.
        scenario: String,
        /// Base configuration; defaults are used when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long, short, default_value = "out")]
        out: PathBuf,
    },
    /// Measure LSH query latency on clustered data and write bench_lsh.csv.
    BenchLsh {
        /// Stored points per measurement, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = vec![1_000usize, 10_000, 100_000])]
        n: Vec<usize>,
        #[arg(long, default_value_t = lsh::DEFAULT_NUM_TABLES)]
        tables: usize,
        #[arg(long, default_value_t = experiment::BENCH_BITS_PER_TABLE)]
        bits: usize,
        #[arg(long, default_value_t = 32)]
        dimension: usize,
        #[arg(long, default_value_t = 1_000)]
        queries: usize,
        #[arg(long, default_value_t = 0.05)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short, default_value = "out")]
        out: PathBuf,
    },
    /// Sample same-object and distinct-object distances to check thresholds.
    Calibrate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        #[arg(long, default_value_t = 2_000)]
        samples: usize,
        #[arg(long, short, default_value = "out")]
        out: PathBuf,
    },
}

fn base_config(path: Option<&PathBuf>, overrides: &[String]) -> reuse_core::Result<RunConfig> {
    let mut cfg = match path {
        Some(p) => config::load(p)?,
        None => RunConfig::new(Mode::EdgeWithReuse),
    };
    cfg.apply_overrides(overrides)?;
    Ok(cfg)
}

fn execute(command: Command) -> reuse_core::Result<()> {
    match command {
        Command::Run { config, overrides, out } => {
            let cfg = base_config(Some(&config), &overrides)?;
            let result = experiment::cmd_run(&cfg, &out)?;
            for row in &result.rows {
                println!("{row}");
            }
            println!("wrote {} and {}", result.tasks_csv.display(), result.summary_csv.display());
        }
        Command::Sweep {
            scenario,
            config,
            overrides,
            out,
        } => {
            let scenario: Scenario = scenario.parse()?;
            let cfg = base_config(config.as_ref(), &overrides)?;
            let (path, rows) = experiment::cmd_sweep(scenario.as_str(), &cfg.sim, &out)?;
            for row in rows.iter().filter(|r| r.summary.trial.is_none()) {
                println!("{}={} {}", row.grid_param, row.grid_value, row.summary);
            }
            println!("wrote {}", path.display());
        }
        Command::BenchLsh {
            n,
            tables,
            bits,
            dimension,
            queries,
            sigma,
            seed,
            out,
        } => {
            let params = LshParams {
                num_tables: tables,
                bits_per_table: bits,
                dimension,
                seed,
            };
            let (path, rows) = experiment::cmd_bench_lsh(&params, &n, queries, sigma, &out)?;
            for r in &rows {
                println!(
                    "n={:>8} mean {:>9.3} us  p90 {:>9.3} us  candidates {:.1}",
                    r.n, r.mean_query_us, r.p90_query_us, r.mean_candidates
                );
            }
            if let Some(rho) = experiment::fitted_exponent(&rows) {
                println!("fitted query-time exponent: {rho:.3}");
            }
            println!("wrote {}", path.display());
        }
        Command::Calibrate {
            config,
            overrides,
            samples,
            out,
        } => {
            let cfg = base_config(config.as_ref(), &overrides)?;
            let c = experiment::calibrate(&cfg.sim.workload, samples)?;
            let (tf, tp) = (cfg.sim.store.tau_full, cfg.sim.store.tau_partial);
            println!(
                "same object:      min {:.4}  p50 {:.4}  p99 {:.4}  max {:.4}",
                c.same_object.min, c.same_object.p50, c.same_object.p99, c.same_object.max
            );
            println!(
                "distinct objects: min {:.4}  p01 {:.4}  p50 {:.4}  max {:.4}",
                c.distinct_objects.min, c.distinct_objects.p01, c.distinct_objects.p50, c.distinct_objects.max
            );
            println!("suggested tau_full: {:.4}", c.suggested_tau_full);
            println!(
                "configured tau_full={tf} tau_partial={tp}: {}",
                if c.separates(tf, tp) { "separates the samples" } else { "does NOT separate the samples" }
            );
            std::fs::create_dir_all(&out)?;
            let path = out.join("calibration.csv");
            experiment::write_calibration_csv(&path, &c)?;
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    if e.is_config_error() {
        1
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
