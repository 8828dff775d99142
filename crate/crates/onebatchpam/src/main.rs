//! Thin command-line front end: `run` executes one algorithm and prints the
//! result as JSON, `bench` executes an experiment grid from a JSON config.
//!
//! Exit codes: 0 on success, 1 for usage or configuration errors, 2 for
//! runtime failures.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use onebatchpam::{
    generate_blobs, load_csv, run_experiment, Algorithm, ClaraConfig, DataMatrix, Dissimilarity,
    Error, EvalCounter, ExperimentConfig, RandomSeed, SyntheticSpec,
};

#[derive(Parser)]
#[command(name = "onebatchpam", version, about = "k-medoids clustering and benchmark runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single algorithm and print its result as JSON on stdout
    Run(Box<RunArgs>),
    /// Run an experiment grid described by a JSON config file
    Bench {
        /// Path to the experiment config (see the README for the schema)
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// CSV dataset path
    #[arg(long, conflicts_with = "synthetic")]
    data: Option<PathBuf>,
    /// Treat the first CSV line as a header
    #[arg(long)]
    has_header: bool,
    /// Comma-separated original column indices to drop from the CSV
    #[arg(long, value_delimiter = ',')]
    drop_columns: Vec<usize>,
    /// Synthetic dataset spec as JSON, e.g.
    /// '{"n_points":1000,"dimension":8,"n_blobs":4,"blob_spread":1.0,"seed":1}'
    #[arg(long)]
    synthetic: Option<String>,
    /// Algorithm to run
    #[arg(
        long,
        value_parser = [
            "onebatchpam", "fasterpam", "random", "clara", "alternate",
            "kmeanspp", "kmc2", "lskmeanspp",
        ]
    )]
    algo: String,
    /// Number of medoids
    #[arg(long)]
    k: usize,
    /// Dissimilarity: l1, l2, squared_l2, or cosine
    #[arg(long, default_value = "l1")]
    metric: String,
    /// Random seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also compute the exact objective over all n points
    #[arg(long)]
    evaluate_exact: bool,
    /// Batch variant for onebatchpam: unif, debias, nniw, or lwcs
    #[arg(long, default_value = "unif")]
    variant: String,
    /// Batch size for onebatchpam: AUTO applies the 100 ln(kn) heuristic
    #[arg(long, default_value = "auto")]
    batch_size: String,
    /// Maximum swap passes (onebatchpam, fasterpam, clara)
    #[arg(long, default_value_t = 10)]
    max_passes: usize,
    /// Early-stop threshold: accept a swap only if it improves the batch
    /// estimate by more than epsilon times the current estimate
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Subsample repetitions for clara
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// Subsample size for clara: AUTO applies the 80 + 4k rule
    #[arg(long, default_value = "auto")]
    subsample_size: String,
    /// Iteration cap for alternate
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
    /// Markov chain length for kmc2
    #[arg(long, default_value_t = 100)]
    chain_length: usize,
    /// Local-search steps for lskmeanspp
    #[arg(long, default_value_t = 5)]
    ls_steps: usize,
    /// Distance power for the seeding algorithms: AUTO links it to the
    /// metric (2 for l2/squared_l2, otherwise 1)
    #[arg(long, default_value = "auto")]
    exponent: String,
}

fn parse_auto<T: std::str::FromStr>(field: &str, s: &str) -> Result<Option<T>, Error> {
    if s.eq_ignore_ascii_case("auto") {
        Ok(None)
    } else {
        s.parse()
            .map(Some)
            .map_err(|_| Error::InvalidConfig(format!("--{field} must be AUTO or a number, got {s:?}")))
    }
}

fn load_dataset(args: &RunArgs) -> Result<DataMatrix, Error> {
    match (&args.data, &args.synthetic) {
        (Some(path), None) => load_csv(path, args.has_header, &args.drop_columns),
        (None, Some(json)) => {
            let spec: SyntheticSpec = serde_json::from_str(json)
                .map_err(|e| Error::InvalidConfig(format!("bad synthetic spec: {e}")))?;
            generate_blobs(&spec)
        }
        _ => Err(Error::InvalidConfig(
            "exactly one of --data or --synthetic is required".into(),
        )),
    }
}

fn build_algorithm(args: &RunArgs) -> Result<Algorithm, Error> {
    Ok(match args.algo.as_str() {
        "onebatchpam" => Algorithm::OneBatchPam {
            strategy: args.variant.parse()?,
            batch_size: parse_auto("batch-size", &args.batch_size)?,
            max_passes: args.max_passes,
            epsilon: args.epsilon,
        },
        "fasterpam" => Algorithm::FasterPam {
            max_passes: args.max_passes,
        },
        "random" => Algorithm::Random,
        "clara" => Algorithm::Clara(ClaraConfig {
            repetitions: args.reps,
            subsample_size: parse_auto("subsample-size", &args.subsample_size)?,
            max_passes: args.max_passes,
        }),
        "alternate" => Algorithm::Alternate {
            max_iters: args.max_iters,
        },
        "kmeanspp" => Algorithm::KMeansPp {
            exponent: parse_auto("exponent", &args.exponent)?,
        },
        "kmc2" => Algorithm::Kmc2 {
            exponent: parse_auto("exponent", &args.exponent)?,
            chain_length: args.chain_length,
        },
        "lskmeanspp" => Algorithm::LsKMeansPp {
            exponent: parse_auto("exponent", &args.exponent)?,
            ls_steps: args.ls_steps,
        },
        other => {
            return Err(Error::InvalidConfig(format!("unknown algorithm {other:?}")));
        }
    })
}

fn cmd_run(args: &RunArgs) -> Result<(), Error> {
    let metric: Dissimilarity = args.metric.parse()?;
    let algorithm = build_algorithm(args)?;
    let data = load_dataset(args)?;
    let mut counter = EvalCounter::new();
    let result = algorithm.run(
        &data,
        args.k,
        metric,
        RandomSeed(args.seed),
        args.evaluate_exact,
        &mut counter,
    )?;
    let json = serde_json::to_string_pretty(&result)
        .map_err(|e| Error::InvalidConfig(format!("cannot serialize result: {e}")))?;
    println!("{json}");
    Ok(())
}

fn cmd_bench(config: &Path) -> Result<(), Error> {
    let cfg = ExperimentConfig::from_file(config)?;
    let (records, summary) = run_experiment(&cfg)?;
    println!(
        "wrote {} records to {} and the summary to {}",
        records.len(),
        cfg.output_path.display(),
        cfg.summary_path().display()
    );
    for group in &summary.groups {
        println!("k = {}", group.k);
        for cell in &group.algorithms {
            let dro = cell
                .delta_relative_objective
                .map_or("-".to_string(), |v| format!("{:.2}%", 100.0 * v));
            let rt = cell
                .relative_time
                .map_or("-".to_string(), |v| format!("{:.2}%", 100.0 * v));
            println!(
                "  {:<12} {:<40} objective {:.6} (dRO {dro}, RT {rt})",
                cell.algorithm, cell.params, cell.mean_objective
            );
        }
        let front: Vec<&str> = group.pareto_front.iter().map(|p| p.label.as_str()).collect();
        println!("  pareto front: {}", front.join(", "));
    }
    Ok(())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Bench { config } => cmd_bench(config),
    };
    if let Err(e) = outcome {
        eprintln!("error: {e}");
        std::process::exit(if e.is_config_error() { 1 } else { 2 });
    }
}
