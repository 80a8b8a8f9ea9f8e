//! `asymc`: command-line front end for the experiment runner.

use std::path::PathBuf;
use std::process::ExitCode;

use asym_containers::experiment::{self, Command, ExperimentConfig};
use asym_containers::Error;
use clap::Parser;

/// Asymmetric containers and induced-C4-free graph experiments.
///
/// Commands: containers, tree, count-split, enumerate, sampler, phi,
/// stability-probe. Flags override values from --config; any other parameter
/// can be passed as --set key=value.
#[derive(Parser, Debug)]
#[command(name = "asymc", version)]
struct Cli {
    /// Command to run; may come from --config instead.
    command: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    ell: Option<u64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory for artifacts and the manifest.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exhaustive checks where available (default).
    #[arg(long, conflicts_with = "heuristic")]
    exact: bool,
    /// Skip exhaustive checks.
    #[arg(long)]
    heuristic: bool,
    /// Run container steps even when the degree hypothesis fails.
    #[arg(long)]
    force: bool,
    /// Flat key = value file, e.g. a manifest from an earlier run.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra parameter, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn build_config(cli: Cli) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_kv_text(&std::fs::read_to_string(path)?)?,
        None => {
            let name = cli.command.as_deref().ok_or_else(|| Error::InvalidArgument("missing command".into()))?;
            ExperimentConfig::new(name.parse::<Command>()?)
        }
    };
    if let Some(name) = &cli.command {
        cfg.command = name.parse()?;
    }
    let mut put = |k: &str, v: Option<String>| {
        if let Some(v) = v {
            cfg.params.insert(k.to_string(), v);
        }
    };
    put("n", cli.n);
    put("m", cli.m.map(|x| x.to_string()));
    put("ell", cli.ell.map(|x| x.to_string()));
    put("eps", cli.eps.map(|x| x.to_string()));
    put("delta", cli.delta.map(|x| x.to_string()));
    put("beta", cli.beta.map(|x| x.to_string()));
    put("lambda", cli.lambda.map(|x| x.to_string()));
    put("threads", cli.threads.map(|x| x.to_string()));
    put("exact", cli.exact.then(|| "true".into()));
    put("exact", cli.heuristic.then(|| "false".into()));
    put("force", cli.force.then(|| "true".into()));
    for kv in &cli.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("--set expects KEY=VALUE, got '{kv}'")))?;
        cfg.params.insert(k.trim().to_string(), v.trim().to_string());
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if cli.out.is_some() {
        cfg.output_path = cli.out;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build_config(cli).and_then(|cfg| {
        let out = experiment::run(&cfg)?;
        if cfg.output_path.is_some() {
            for path in experiment::write_output(&cfg, &out)? {
                eprintln!("wrote {}", path.display());
            }
        } else if let Some(first) = out.artifacts.first() {
            print!("{}", first.contents);
        }
        println!("{}", out.summary);
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("asymc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
