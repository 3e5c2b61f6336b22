use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use esi::cli::{self, experiment, ExperimentConfig, ScanRequest};
use esi::signal::NoiseSpec;
use esi::{bounds, io, Error};

/// Extended source inversion for single-trace transmission data.
#[derive(Parser)]
#[command(name = "esi", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// JSON configuration file; missing keys take the reference defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default: current directory).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Seed for random noise; overrides the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Fixed penalty weight; overrides the config file.
    #[arg(long, conflicts_with = "discrepancy")]
    alpha: Option<f64>,
    /// Drive the penalty weight by the discrepancy principle.
    #[arg(long)]
    discrepancy: bool,
    /// Wavelet support radius for reduced FWI and truncation; overrides
    /// the config file.
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize the data trace and write trace.csv.
    Synth(CommonArgs),
    /// Scan the objective landscapes over a slowness grid.
    Scan {
        #[command(flatten)]
        common: CommonArgs,
        /// Slowness grid as START:STOP:STEP (default 0.33:0.65:0.001).
        #[arg(long, value_name = "A:B:STEP")]
        m_grid: Option<String>,
    },
    /// Solve for slowness and wavelet, truncate, and report.
    Invert(CommonArgs),
    /// Run one published experiment (1, 2a, 2b, 3, 4, 5, 6, 7).
    Experiment {
        id: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Print the theoretical bound calculators for given parameters.
    Bounds {
        /// Target wavelet support radius mu in seconds.
        #[arg(long, default_value_t = 0.025)]
        mu: f64,
        /// Noise-to-signal ratio.
        #[arg(long, default_value_t = 0.3)]
        eta: f64,
        /// Source-receiver offset in km.
        #[arg(long, default_value_t = 1.0)]
        offset_r: f64,
        /// Penalty weight.
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Truncation lag in seconds.
        #[arg(long, default_value_t = 0.082)]
        lambda: f64,
    },
}

fn main() -> ExitCode {
    env_logger::init();
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Flags override file values, file values override defaults.
fn resolve_config(common: &CommonArgs) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &common.config {
        Some(path) => cli::load_config(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
        if let NoiseSpec::FilteredRandom { eta, .. } = cfg.noise {
            cfg.noise = NoiseSpec::FilteredRandom { seed, eta };
        }
    }
    if let Some(alpha) = common.alpha {
        cfg.alpha_fixed = Some(alpha);
    }
    if common.discrepancy {
        cfg.alpha_fixed = None;
    }
    if let Some(lambda) = common.lambda {
        cfg.lambda = lambda;
    }
    cfg.validate()
}

fn parse_m_grid(spec: &str) -> Result<(f64, f64, f64), Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Validation(format!(
            "m grid must be START:STOP:STEP, got '{spec}'"
        )));
    }
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Validation(format!("bad number '{s}' in m grid '{spec}'")))
    };
    Ok((parse(parts[0])?, parse(parts[1])?, parse(parts[2])?))
}

fn run() -> Result<(), Error> {
    match Cli::parse().command {
        Command::Synth(common) => {
            let cfg = resolve_config(&common)?;
            let d = cfg.synthesize_data()?;
            std::fs::create_dir_all(&common.out)?;
            let path = common.out.join("trace.csv");
            io::write_trace_csv(&path, &d)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Scan { common, m_grid } => {
            let cfg = resolve_config(&common)?;
            let (start, stop, step) = match m_grid {
                Some(spec) => parse_m_grid(&spec)?,
                None => (
                    cfg.solver.search_interval.m_min(),
                    cfg.solver.search_interval.m_max(),
                    0.001,
                ),
            };
            let alpha = cfg.alpha_fixed.unwrap_or(1.0);
            let d = cfg.synthesize_data()?;
            let tables = cli::run_scan(&cfg, &d, &ScanRequest::new(start, stop, step, alpha))?;
            std::fs::create_dir_all(&common.out)?;
            for (k, table) in tables.iter().enumerate() {
                let name = if tables.len() == 1 {
                    "scan.csv".to_string()
                } else {
                    format!("scan_{}.csv", k + 1)
                };
                let path = common.out.join(name);
                io::write_scan_csv(&path, table)?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Invert(common) => {
            let cfg = resolve_config(&common)?;
            let d = cfg.synthesize_data()?;
            let inv = cli::run_inversion(&cfg, &d)?;
            std::fs::create_dir_all(&common.out)?;
            io::write_trace_csv(&common.out.join("trace.csv"), &d)?;
            io::write_log_csv(&common.out.join("log.csv"), &inv.log)?;
            io::write_wavelet_csv(&common.out.join("wavelet.csv"), &inv.wavelet)?;
            io::write_wavelet_csv(
                &common.out.join("wavelet_truncated.csv"),
                &inv.truncation.wavelet,
            )?;
            let report = format!(
                "final: m = {:.6} s/km, alpha = {:.6}\n\
                 misfit e = {:.6}, penalty g = {:.6}, objective j = {:.6}, gradient = {:.6}\n\
                 truncation: lambda = {} s, epsilon = {:.6}\n",
                inv.m,
                inv.alpha,
                inv.record.e,
                inv.record.g,
                inv.record.j,
                inv.record.dj_dm,
                cfg.lambda,
                inv.truncation.epsilon
            );
            std::fs::write(common.out.join("report.txt"), &report)?;
            print!("{report}");
            Ok(())
        }
        Command::Experiment { id, common } => {
            let id = experiment::ExperimentId::from_str(&id)?;
            let mut cfg = experiment::preset(id, common.seed.unwrap_or(1));
            if let Some(path) = &common.config {
                // Config file overrides the preset where keys are present;
                // reparse on top of the preset to keep preset defaults.
                let file_cfg = cli::load_config(path)?;
                cfg = file_cfg;
            }
            if let Some(seed) = common.seed {
                cfg.seed = seed;
                if let NoiseSpec::FilteredRandom { eta, .. } = cfg.noise {
                    cfg.noise = NoiseSpec::FilteredRandom { seed, eta };
                }
            }
            if let Some(alpha) = common.alpha {
                cfg.alpha_fixed = Some(alpha);
            }
            if common.discrepancy {
                cfg.alpha_fixed = None;
            }
            if let Some(lambda) = common.lambda {
                cfg.lambda = lambda;
            }
            let art = cli::run_experiment(id, &cfg)?;
            let out_dir = common.out.join(format!("experiment_{id}"));
            let written = cli::write_artifacts(&art, &out_dir)?;
            for path in &written {
                println!("wrote {}", path.display());
            }
            println!();
            print!("{}", experiment::render_report(&art));
            Ok(())
        }
        Command::Bounds { mu, eta, offset_r, alpha, lambda } => {
            let report = bounds::BoundReport::compute(mu, eta, offset_r, alpha, lambda);
            println!("{report}");
            Ok(())
        }
    }
}
