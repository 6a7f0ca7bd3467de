use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use miner_select::harness::{
    self, pairwise_reports, print_stats_report, read_hv_table,
    stats_report_to_csv, write_front_file, ExperimentConfig,
};
use miner_select::instance::{generate_instance, load_instance, save_instance, GeneratorConfig};
use miner_select::metrics::{per_run_hypervolume, ReferencePoint};
use miner_select::moea::{run, Algorithm, AlgorithmConfig};
use miner_select::{Error, Instance};

/// Bi-objective miner selection: minimize mining energy, maximize aggregate
/// reputation.
#[derive(Parser)]
#[command(name = "miner-select", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance file.
    Generate {
        /// Generator config (TOML); defaults to the 160-miner benchmark setup.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Where to write the instance file.
        #[arg(long)]
        out: PathBuf,
        /// Override the generator seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run one algorithm once and write its front.
    Optimize {
        #[arg(long)]
        instance: PathBuf,
        /// One of: nsga2, spea2, random.
        #[arg(long)]
        algorithm: String,
        /// Algorithm config (TOML); defaults to the standard parameters.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the run seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Where to write the front file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the full multi-algorithm experiment.
    Experiment {
        /// Experiment config (TOML); defaults run all three algorithms on the
        /// generated benchmark instance.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (overrides out_dir from the config).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override runs per algorithm.
        #[arg(long)]
        runs: Option<usize>,
        /// Override the base seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Pairwise rank-sum / A12 report over a hypervolume table.
    Stats {
        /// Path to a hypervolume.csv produced by `experiment`.
        table: PathBuf,
        /// Also write the report as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_toml<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn cmd_generate(config: Option<PathBuf>, out: PathBuf, seed: Option<u64>) -> Result<(), Error> {
    let mut gen_cfg: GeneratorConfig = match config {
        Some(path) => load_toml(&path)?,
        None => GeneratorConfig::default(),
    };
    if let Some(seed) = seed {
        gen_cfg.seed = seed;
    }
    let instance: Instance = generate_instance(&gen_cfg)?;
    save_instance(&instance, &out)?;
    println!(
        "wrote {}: {} miners, {} blocks, total energy {} kWh/day, total reputation {}",
        out.display(),
        instance.n(),
        instance.total_blocks(),
        instance.total_energy_kwh(),
        instance.total_reputation()
    );
    Ok(())
}

fn cmd_optimize(
    instance_path: PathBuf,
    algorithm: String,
    config: Option<PathBuf>,
    seed: Option<u64>,
    out: PathBuf,
) -> Result<(), Error> {
    let algorithm: Algorithm = algorithm.parse()?;
    let instance: Instance = load_instance(&instance_path)?;
    let mut alg_cfg: AlgorithmConfig = match config {
        Some(path) => load_toml(&path)?,
        None => AlgorithmConfig::default(),
    };
    if let Some(seed) = seed {
        alg_cfg.seed = seed;
    }
    let result = run(algorithm, &instance, &alg_cfg)?;
    let hv = per_run_hypervolume(&result, &instance, &ReferencePoint::default())?;
    write_front_file(&out, &result.front, &instance)?;
    println!(
        "{algorithm}: {} evaluations, front size {}, hypervolume {hv} ({:.2?})",
        result.evaluations,
        result.front.len(),
        result.duration
    );
    Ok(())
}

fn cmd_experiment(
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    runs: Option<usize>,
    seed: Option<u64>,
) -> Result<(), Error> {
    let mut cfg = match config {
        Some(path) => ExperimentConfig::from_path(&path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(runs) = runs {
        cfg.runs_per_algorithm = runs;
    }
    if let Some(seed) = seed {
        cfg.base_seed = seed;
    }
    let out_dir = out
        .or_else(|| cfg.out_dir.clone())
        .ok_or_else(|| Error::Usage("no output directory: pass --out or set out_dir".into()))?;
    harness::run_experiment(&cfg, &out_dir)?;
    println!("results written to {}", out_dir.display());
    Ok(())
}

fn cmd_stats(table: PathBuf, out: Option<PathBuf>) -> Result<(), Error> {
    let rows = read_hv_table(&table)?;
    if rows.is_empty() {
        return Err(Error::Config(format!(
            "{} contains no data rows",
            table.display()
        )));
    }
    let pairs = pairwise_reports(&rows)?;
    print_stats_report(&pairs);
    if pairs.is_empty() {
        println!("single algorithm: nothing to compare");
    }
    if let Some(out) = out {
        std::fs::write(&out, stats_report_to_csv(&pairs)).map_err(|e| Error::io(&out, e))?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Generate { config, out, seed } => cmd_generate(config, out, seed),
        Command::Optimize {
            instance,
            algorithm,
            config,
            seed,
            out,
        } => cmd_optimize(instance, algorithm, config, seed, out),
        Command::Experiment {
            config,
            out,
            runs,
            seed,
        } => cmd_experiment(config, out, runs, seed),
        Command::Stats { table, out } => cmd_stats(table, out),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = dispatch(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
