//! `hausdorff`: run experiment configurations against the toolkit.
//!
//! Usage:
//!   hausdorff --config PATH [--out PATH] [--seed N] [--kmin K] [--kmax K] [--tol REAL]
//!
//! Exit codes: 0 when no violation verdicts and no per-record errors
//! occurred, 2 on configuration errors, 1 otherwise.

use std::path::PathBuf;
use std::process::ExitCode;

use hausdorff_cli::{any_failure, emit_csv, run_experiment, ExperimentConfig};

struct Args {
    config: PathBuf,
    out: Option<PathBuf>,
    seed: Option<u64>,
    kmin: Option<i32>,
    kmax: Option<i32>,
    tol: Option<f64>,
}

fn parse_args() -> Result<Args, String> {
    let mut config = None;
    let mut out = None;
    let mut seed = None;
    let mut kmin = None;
    let mut kmax = None;
    let mut tol = None;
    let mut iter = std::env::args().skip(1);
    while let Some(arg) = iter.next() {
        let mut take = |name: &str| -> Result<String, String> {
            iter.next().ok_or_else(|| format!("{name} needs a value"))
        };
        match arg.as_str() {
            "--config" => config = Some(PathBuf::from(take("--config")?)),
            "--out" => out = Some(PathBuf::from(take("--out")?)),
            "--seed" => {
                seed = Some(
                    take("--seed")?
                        .parse::<u64>()
                        .map_err(|e| format!("--seed: {e}"))?,
                )
            }
            "--kmin" => {
                kmin = Some(
                    take("--kmin")?
                        .parse::<i32>()
                        .map_err(|e| format!("--kmin: {e}"))?,
                )
            }
            "--kmax" => {
                kmax = Some(
                    take("--kmax")?
                        .parse::<i32>()
                        .map_err(|e| format!("--kmax: {e}"))?,
                )
            }
            "--tol" => {
                tol = Some(
                    take("--tol")?
                        .parse::<f64>()
                        .map_err(|e| format!("--tol: {e}"))?,
                )
            }
            "--help" | "-h" => {
                println!(
                    "usage: hausdorff --config PATH [--out PATH] [--seed N] \
                     [--kmin K] [--kmax K] [--tol REAL]"
                );
                std::process::exit(0);
            }
            other => return Err(format!("unknown argument `{other}`")),
        }
    }
    Ok(Args {
        config: config.ok_or("--config is required")?,
        out,
        seed,
        kmin,
        kmax,
        tol,
    })
}

fn main() -> ExitCode {
    let args = match parse_args() {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut cfg = match ExperimentConfig::from_file(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = args.seed {
        cfg.quad.seed = seed;
    }
    if let Some(kmin) = args.kmin {
        cfg.range.k_min = kmin;
    }
    if let Some(kmax) = args.kmax {
        cfg.range.k_max = kmax;
    }
    if let Some(tol) = args.tol {
        cfg.quad.rel_tol = tol;
    }

    let records = match run_experiment(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let out_path = args
        .out
        .or_else(|| cfg.output_path.as_ref().map(PathBuf::from));
    let write_result = match &out_path {
        Some(path) => std::fs::File::create(path)
            .and_then(|mut f| emit_csv(&records, &mut f))
            .map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            emit_csv(&records, &mut lock).map_err(|e| e.to_string())
        }
    };
    if let Err(e) = write_result {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }

    if any_failure(&records) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
