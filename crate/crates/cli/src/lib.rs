//! Command implementations behind the `bnvar` binary.

pub mod error;
pub mod experiment;
pub mod input;
pub mod manifest;
pub mod tables;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use bnvar::graph::write_skeleton_archive;
use bnvar::learn::{bootstrap_skeletons, BayesNet, CategoricalDataset, Learner, Schema};
use bnvar::moments::write_moments_csv;
use bnvar::parametric::run_test;
use bnvar::montecarlo::statistic;
use bnvar::{
    classify_entropy, estimate_moments, mc_pvalue, variability, Divisor, McConfig, McStatistic,
    SkeletonArchive, TestKind, TestResult, TieRule, VariabilityReport,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

pub use error::CliError;
use experiment::{draw_data, experiment_csv, run_experiment, ExperimentConfig};
use input::{read_text, MatrixInput};
use manifest::RunManifest;

pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(name = "bnvar", version, about = "Variability of learned network structures")]
pub struct Cli {
    /// Random seed (each command has its own default).
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Output file, or output directory for reproduce-tables. Defaults to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Kv,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Edge moments of a skeleton archive, plus its entropy class.
    Moments {
        archive: PathBuf,
        /// Tolerance when classifying the entropy.
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
    },
    /// Variability statistics of a covariance matrix.
    Describe {
        input: PathBuf,
        /// Take the generalized variance over a full-rank reduction.
        #[arg(long)]
        reduce: bool,
        #[arg(long, value_enum, default_value_t = Format::Kv)]
        format: Format,
        /// Row name used by the CSV format.
        #[arg(long, default_value = "sigma")]
        name: String,
    },
    /// Asymptotic tests against the maximum-entropy covariance.
    Test {
        input: PathBuf,
        /// Sample size (taken from the archive when omitted).
        #[arg(long)]
        m: Option<usize>,
        /// trace, det-gauss, det-gamma, nagao or all.
        #[arg(long, default_value = "all")]
        which: String,
    },
    /// Monte Carlo test against the maximum-entropy null.
    Mc {
        input: PathBuf,
        #[arg(long)]
        m: Option<usize>,
        /// t, g or n.
        #[arg(long, default_value = "n")]
        stat: McStatistic,
        #[arg(long, default_value_t = 100_000)]
        replicates: usize,
        /// m or m-1.
        #[arg(long, default_value = "m")]
        divisor: Divisor,
        /// exclude or include.
        #[arg(long, default_value = "exclude")]
        ties: TieRule,
    },
    /// Forward-sample a data set from a network (the bundled one by default).
    Sample {
        #[arg(long)]
        network: Option<PathBuf>,
        #[arg(long)]
        n: usize,
        /// Independent uniform variables with the network's levels instead.
        #[arg(long)]
        noise: bool,
    },
    /// Learn skeletons from bootstrap resamples of a data set.
    Bootstrap {
        data: PathBuf,
        #[arg(long)]
        schema: Option<PathBuf>,
        /// hc, tabu[:LEN] or gs[:g2|x2[:ALPHA[:CAP]]].
        #[arg(long, default_value = "hc")]
        learner: Learner,
        #[arg(long, default_value_t = 50)]
        m: usize,
    },
    /// Significance curves over sample sizes and learners.
    Experiment {
        #[arg(long)]
        network: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "100,300,1000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        replicates: usize,
        #[arg(long, value_delimiter = ',', default_value = "hc,gs")]
        learners: Vec<Learner>,
        #[arg(long, default_value_t = 50)]
        m: usize,
        #[arg(long, default_value_t = 10_000)]
        mc_replicates: usize,
        #[arg(long, default_value = "n")]
        stat: McStatistic,
        #[arg(long, default_value = "exclude")]
        ties: TieRule,
        #[arg(long)]
        noise: bool,
    },
    /// Write table1.csv, table2.csv and table3.csv for the example matrices.
    ReproduceTables {
        #[arg(long, default_value_t = tables::TABLE3_REPLICATES)]
        replicates: usize,
        #[arg(long, default_value = "m")]
        divisor: Divisor,
        #[arg(long, default_value = "exclude")]
        ties: TieRule,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Moments { .. } => "moments",
            Command::Describe { .. } => "describe",
            Command::Test { .. } => "test",
            Command::Mc { .. } => "mc",
            Command::Sample { .. } => "sample",
            Command::Bootstrap { .. } => "bootstrap",
            Command::Experiment { .. } => "experiment",
            Command::ReproduceTables { .. } => "reproduce-tables",
        }
    }
}

/// What a command produced: text for stdout or the `--out` file, plus
/// lines for stderr.
struct Output {
    main: String,
    notes: Vec<String>,
}

impl Output {
    fn text(main: String) -> Self {
        Output { main, notes: Vec::new() }
    }
}

/// Runs a parsed command line. `args` is recorded verbatim in the manifest.
pub fn run(cli: Cli, args: Vec<String>) -> Result<(), CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| run_in_pool(cli, args))
}

fn run_in_pool(cli: Cli, args: Vec<String>) -> Result<(), CliError> {
    let mut manifest = RunManifest::start(cli.command.name(), args);
    if let Command::ReproduceTables { replicates, divisor, ties } = &cli.command {
        let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("tables"));
        let seed = cli.seed.unwrap_or(tables::TABLE3_SEED);
        manifest.seed = Some(seed);
        manifest.config = json!({
            "out_dir": dir.display().to_string(),
            "replicates": replicates,
            "divisor": divisor.to_string(),
            "ties": ties.to_string(),
            "sample_sizes": tables::SAMPLE_SIZES,
        });
        reproduce_tables(&dir, *replicates, seed, *divisor, *ties)?;
        manifest.outputs = ["table1.csv", "table2.csv", "table3.csv"]
            .iter()
            .map(|f| dir.join(f).display().to_string())
            .collect();
        manifest.finish();
        fs::write(dir.join("manifest.json"), manifest.to_json()?)?;
        return Ok(());
    }

    let output = execute(&cli, &mut manifest)?;
    match &cli.out {
        Some(path) => {
            fs::write(path, &output.main)?;
            manifest.outputs.push(path.display().to_string());
            for n in &output.notes {
                println!("{n}");
            }
            manifest.finish();
            fs::write(manifest_path(path), manifest.to_json()?)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(output.main.as_bytes())?;
            stdout.flush()?;
            for n in &output.notes {
                eprintln!("{n}");
            }
            manifest.finish();
            eprintln!("{}", manifest.to_json()?);
        }
    }
    Ok(())
}

/// `<out>.manifest.json` next to the output file.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn read_input(path: &Path, manifest: &mut RunManifest) -> Result<String, CliError> {
    let text = read_text(path)?;
    manifest.input(path, text.as_bytes());
    Ok(text)
}

fn load_network(path: Option<&Path>, manifest: &mut RunManifest) -> Result<BayesNet, CliError> {
    match path {
        Some(p) => Ok(BayesNet::from_json(&read_input(p, manifest)?)?),
        None => Ok(BayesNet::bundled()),
    }
}

fn execute(cli: &Cli, manifest: &mut RunManifest) -> Result<Output, CliError> {
    match &cli.command {
        Command::Moments { archive, tol } => {
            manifest.config = json!({ "archive": archive.display().to_string(), "tol": tol });
            let text = read_input(archive, manifest)?;
            let MatrixInput::Archive(a) = MatrixInput::parse(&text)? else {
                return Err(CliError::Parse(format!("{}: line 1: expected a skeleton archive", archive.display())));
            };
            let mom = estimate_moments(&a.samples, None)?;
            let mut buf = Vec::new();
            write_moments_csv(&mom, &mut buf)?;
            let class = classify_entropy(&mom, *tol);
            Ok(Output { main: String::from_utf8(buf).expect("utf8"), notes: vec![format!("entropy={class}")] })
        }
        Command::Describe { input, reduce, format, name } => {
            manifest.config = json!({ "input": input.display().to_string(), "reduce": reduce, "format": format!("{format:?}").to_lowercase(), "name": name });
            let sigma = MatrixInput::parse(&read_input(input, manifest)?)?.covariance()?;
            let r = variability(&sigma, *reduce)?;
            Ok(Output::text(match format {
                Format::Kv => r.to_key_value(),
                Format::Csv => format!("{}\n{}\n", VariabilityReport::csv_header(), r.csv_row(name)),
            }))
        }
        Command::Test { input, m, which } => {
            let kinds: Vec<TestKind> = if which == "all" {
                TestKind::ALL.to_vec()
            } else {
                vec![which.parse().map_err(|e: bnvar::Error| CliError::Usage(e.to_string()))?]
            };
            let parsed = MatrixInput::parse(&read_input(input, manifest)?)?;
            let m = resolve_m(*m, &parsed)?;
            manifest.config = json!({ "input": input.display().to_string(), "m": m, "which": which });
            let sigma = parsed.covariance()?;
            let mut s = format!("{}\n", TestResult::CSV_HEADER);
            for kind in kinds {
                s.push_str(&run_test(kind, &sigma, m)?.csv_row());
                s.push('\n');
            }
            Ok(Output::text(s))
        }
        Command::Mc { input, m, stat, replicates, divisor, ties } => {
            let parsed = MatrixInput::parse(&read_input(input, manifest)?)?;
            let m = resolve_m(*m, &parsed)?;
            let seed = cli.seed.unwrap_or(DEFAULT_SEED);
            manifest.seed = Some(seed);
            manifest.config = json!({
                "input": input.display().to_string(), "m": m, "stat": stat.to_string(),
                "replicates": replicates, "divisor": divisor.to_string(), "ties": ties.to_string(),
            });
            let sigma = parsed.covariance()?;
            let cfg = McConfig::new(m, sigma.dim(), *replicates, seed, *stat)?.with_divisor(*divisor).with_ties(*ties);
            let r = mc_pvalue(statistic(*stat, &sigma), &cfg)?;
            Ok(Output::text(format!("{}\n", r.summary())))
        }
        Command::Sample { network, n, noise } => {
            let seed = cli.seed.unwrap_or(DEFAULT_SEED);
            manifest.seed = Some(seed);
            manifest.config = json!({ "network": network.as_ref().map(|p| p.display().to_string()), "n": n, "noise": noise });
            let bn = load_network(network.as_deref(), manifest)?;
            let data = draw_data(&bn, *n, seed, *noise)?;
            let mut buf = Vec::new();
            data.write_csv(&mut buf)?;
            Ok(Output::text(String::from_utf8(buf).expect("utf8")))
        }
        Command::Bootstrap { data, schema, learner, m } => {
            let seed = cli.seed.unwrap_or(DEFAULT_SEED);
            manifest.seed = Some(seed);
            manifest.config = json!({
                "data": data.display().to_string(), "schema": schema.as_ref().map(|p| p.display().to_string()),
                "learner": learner.to_string(), "m": m,
            });
            let schema = match schema {
                Some(p) => Some(Schema::from_json(&read_input(p, manifest)?)?),
                None => None,
            };
            let ds = CategoricalDataset::read_csv(read_input(data, manifest)?.as_bytes(), schema.as_ref())?;
            let samples = bootstrap_skeletons(&ds, learner, *m, seed)?;
            let archive = SkeletonArchive::new(ds.n_vars(), samples)?.with_labels(ds.names().to_vec())?;
            let mut buf = Vec::new();
            write_skeleton_archive(&archive, &mut buf)?;
            Ok(Output::text(String::from_utf8(buf).expect("utf8")))
        }
        Command::Experiment { network, sizes, replicates, learners, m, mc_replicates, stat, ties, noise } => {
            let cfg = ExperimentConfig {
                sizes: sizes.clone(),
                replicates: *replicates,
                learners: learners.clone(),
                m: *m,
                mc_replicates: *mc_replicates,
                statistic: *stat,
                ties: *ties,
                seed: cli.seed.unwrap_or(DEFAULT_SEED),
                noise: *noise,
            };
            manifest.seed = Some(cfg.seed);
            let mut config = cfg.to_json();
            config["network"] = json!(network.as_ref().map(|p| p.display().to_string()));
            manifest.config = config;
            let bn = load_network(network.as_deref(), manifest)?;
            Ok(Output::text(experiment_csv(&run_experiment(&bn, &cfg)?)))
        }
        Command::ReproduceTables { .. } => unreachable!("handled before dispatch"),
    }
}

fn resolve_m(m: Option<usize>, input: &MatrixInput) -> Result<usize, CliError> {
    m.or_else(|| input.sample_count())
        .ok_or_else(|| CliError::Usage("--m is required unless the input is a skeleton archive".into()))
}

/// Writes `table1.csv`, `table2.csv` and `table3.csv` into `dir`.
pub fn reproduce_tables(dir: &Path, replicates: usize, seed: u64, divisor: Divisor, ties: TieRule) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("table1.csv"), tables::table1_csv()?)?;
    fs::write(dir.join("table2.csv"), tables::table2_csv()?)?;
    let rows = tables::table3_rows(replicates, seed, divisor, ties)?;
    fs::write(dir.join("table3.csv"), tables::table3_csv(&rows))?;
    Ok(())
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn main_with_args(args: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli, args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("bnvar: {e}");
            e.exit_code()
        }
    }
}
