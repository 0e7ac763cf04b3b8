use std::path::PathBuf;
use std::process::ExitCode;

use cauchy_core::experiment::{run_experiment, ExperimentConfig, ExperimentKind, ExperimentSpec, Section};
use cauchy_core::Result;
use clap::{Args, Parser, Subcommand};

/// Runs Cauchy-sequence experiments and writes CSV files plus a report.
///
/// Experiments come from a config file (`[name]` sections with a `kind` key)
/// or from a single subcommand with KEY=VALUE arguments. The exit code is 0
/// when every check of every selected experiment passes.
///
/// Symmetry groups of the solution space are not computed; they have no
/// finite representation.
#[derive(Debug, Parser)]
#[command(name = "cauchy-schemes", version)]
struct Cli {
    /// Experiment config file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory (overrides the config's `out`; default `results`).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Run only the named experiment; repeatable.
    #[arg(long = "experiment", value_name = "NAME")]
    experiments: Vec<String>,

    /// Seed for randomized sampling (overrides the config's `seed`).
    #[arg(long)]
    seed: Option<u64>,

    #[arg(long, short)]
    verbose: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Args)]
struct Pairs {
    #[arg(value_name = "KEY=VALUE")]
    pairs: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Refinement study of the P1 Dirichlet scheme.
    FemConverge(Pairs),
    /// Implicit-function fixed-point solves.
    IftSolve(Pairs),
    /// Convergence profile along a ray in parameter space.
    IftDomain(Pairs),
    /// Picard solve of the Frobenius problem.
    Frobenius(Pairs),
    /// Smoothness probe of a scheme along a plot.
    Probe(Pairs),
    /// Limit-map jump of the Cauchy-sequence counterexample.
    Counterexample(Pairs),
}

impl Command {
    fn parts(&self) -> (&'static str, &[String]) {
        match self {
            Command::FemConverge(p) => ("fem-converge", &p.pairs),
            Command::IftSolve(p) => ("ift-solve", &p.pairs),
            Command::IftDomain(p) => ("ift-domain", &p.pairs),
            Command::Frobenius(p) => ("frobenius", &p.pairs),
            Command::Probe(p) => ("probe", &p.pairs),
            Command::Counterexample(p) => ("counterexample", &p.pairs),
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::parse(
            &std::fs::read_to_string(path)
                .map_err(|e| cauchy_core::Error::Config(format!("{}: {e}", path.display())))?,
        )?,
        None => ExperimentConfig::default(),
    };
    if let Some(cmd) = &cli.command {
        let (kind, pairs) = cmd.parts();
        let spec = ExperimentSpec {
            name: kind.to_string(),
            kind: ExperimentKind::parse(kind, Section::from_pairs(kind, pairs)?)?,
        };
        if config.experiments.iter().any(|e| e.name == spec.name) {
            return Err(cauchy_core::Error::Config(format!("experiment {kind:?} is defined twice")));
        }
        config.experiments.push(spec);
    }
    config.select(&cli.experiments)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(if cli.verbose {
        "info"
    } else {
        "warn"
    }))
    .init();

    let config = match load_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let out = cli.out.clone().or_else(|| config.out.clone()).unwrap_or_else(|| PathBuf::from("results"));
    let bundle = match run_experiment(&config) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match bundle.write(&out) {
        Ok(paths) => log::info!("wrote {} files under {}", paths.len(), out.display()),
        Err(e) => {
            eprintln!("error: writing {}: {e}", out.display());
            return ExitCode::from(2);
        }
    }
    print!("{}", bundle.report());
    if bundle.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
