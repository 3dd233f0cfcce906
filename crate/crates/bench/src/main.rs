use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use restart_bench::{
    run_matrix, summary_table, write_results, write_summary, BenchError, Domain, ExperimentConfig,
    Format, MatrixFile,
};

/// Run restart-scheme experiments and check them against their bounds.
///
/// Exit status: 0 when every bound holds, 1 when a bound is violated or a
/// cell fails, 2 on usage errors.
#[derive(Parser)]
#[command(name = "restart-bench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Restarted first-order methods on convex test functions.
    Continuous(Single),
    /// Augmentation, bit scaling and geometric scaling for 0/1 programs.
    Augment(Single),
    /// Greedy and threshold greedy for monotone submodular maximization.
    Submodular(Single),
    /// Run every experiment of a TOML matrix file.
    Matrix(MatrixArgs),
}

#[derive(Args)]
struct Output {
    /// Trace destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Also write the per-experiment results as JSON.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Args)]
struct Single {
    #[arg(long)]
    algo: Option<String>,
    /// Built-in `name:key=value,...` or a path to an instance file.
    #[arg(long)]
    instance: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Cardinality budget (submodular).
    #[arg(long)]
    k: Option<usize>,
    /// Strong-convexity constant handed to the solver (continuous).
    #[arg(long)]
    mu: Option<f64>,
    /// Improving-oracle policy: max, min or lex (augment).
    #[arg(long)]
    policy: Option<String>,
    /// TOML file with experiment fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct MatrixArgs {
    /// TOML file with an `[[experiment]]` array.
    #[arg(long)]
    config: PathBuf,
    /// Only run experiments whose id contains this string.
    #[arg(long)]
    filter: Option<String>,
    #[command(flatten)]
    output: Output,
}

fn single_config(domain: Domain, args: &Single) -> Result<ExperimentConfig, BenchError> {
    let mut table = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| BenchError::usage("config", format!("{}: {e}", path.display())))?;
            text.parse::<toml::Table>()
                .map_err(|e| BenchError::usage("config", format!("{}: {e}", path.display())))?
        }
        None => toml::Table::new(),
    };
    if let Some(d) = table.get("domain") {
        if d.as_str() != Some(&domain.to_string()) {
            return Err(BenchError::usage(
                "config",
                format!("domain {d} does not match the subcommand"),
            ));
        }
    }
    table.insert("domain".into(), domain.to_string().into());
    let mut set = |key: &str, v: Option<toml::Value>| {
        if let Some(v) = v {
            table.insert(key.into(), v);
        }
    };
    set("algo", args.algo.clone().map(Into::into));
    set("instance", args.instance.clone().map(Into::into));
    set("epsilon", args.epsilon.map(Into::into));
    set("seed", args.seed.map(|s| toml::Value::Integer(s as i64)));
    set("k", args.k.map(|k| toml::Value::Integer(k as i64)));
    set("mu", args.mu.map(Into::into));
    set("policy", args.policy.clone().map(Into::into));
    for field in ["algo", "instance"] {
        if !table.contains_key(field) {
            return Err(BenchError::usage(field, "missing"));
        }
    }
    let mut cfg: ExperimentConfig = table
        .try_into()
        .map_err(|e: toml::de::Error| BenchError::usage("config", e.to_string()))?;
    if let (Some(dir), Ok(restart_bench::InstanceSpec::File(p))) = (
        args.config.as_deref().and_then(Path::parent),
        cfg.instance.parse::<restart_bench::InstanceSpec>(),
    ) {
        if args.instance.is_none() && p.is_relative() {
            cfg.instance = dir.join(p).to_string_lossy().into_owned();
        }
    }
    Ok(cfg)
}

fn run(configs: &[ExperimentConfig], filter: Option<&str>, output: &Output) -> Result<ExitCode> {
    let outcome = match run_matrix(configs, filter) {
        Ok(o) => o,
        Err(e) if e.is_usage() => return Ok(usage_error(&e)),
        Err(e) => return Err(e.into()),
    };
    match &output.out {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(f);
            write_results(&outcome.cells, output.format, &mut w)?;
            w.flush()?;
            eprint!("{}", summary_table(&outcome.cells));
        }
        None => {
            write_results(&outcome.cells, output.format, io::stdout().lock())?;
            eprint!("{}", summary_table(&outcome.cells));
        }
    }
    if let Some(path) = &output.summary {
        let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_summary(&outcome.cells, BufWriter::new(f))?;
    }
    Ok(if outcome.all_satisfied() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn usage_error(e: &BenchError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Continuous(a) | Command::Augment(a) | Command::Submodular(a) => {
            let domain = match cli.command {
                Command::Continuous(_) => Domain::Continuous,
                Command::Augment(_) => Domain::Augment,
                _ => Domain::Submodular,
            };
            match single_config(domain, a) {
                Ok(cfg) => run(&[cfg], None, &a.output),
                Err(e) => return usage_error(&e),
            }
        }
        Command::Matrix(m) => match MatrixFile::load(&m.config) {
            Ok(file) => run(&file.experiments, m.filter.as_deref(), &m.output),
            Err(e) => return usage_error(&e),
        },
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
