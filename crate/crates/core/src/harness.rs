//! Experiment orchestration and the on-disk formats: experiment configs,
//! front files, the hypervolume table and the pairwise statistics report.
//!
//! Everything written here is deterministic in the experiment config
//! (including `base_seed`): no timestamps, no map iteration order, and
//! full-precision decimal floats, so rerunning a config reproduces the output
//! directory byte for byte.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::instance::{generate_instance, load_instance, save_instance, GeneratorConfig};
use crate::metrics::{front_hypervolume, median, merge_fronts, per_run_hypervolume, ReferencePoint};
use crate::moea::{run, Algorithm, AlgorithmConfig, FrontMember, FrontSet, RunResult};
use crate::objectives::{normalize, ObjectiveVector, SelectionMask};
use crate::stats::{rank_sum_test, TestReport};
use crate::Instance;

/// Two-tailed significance threshold for the report's verdict line.
pub const ALPHA: f64 = 0.05;

/// Full description of a multi-algorithm experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub base_seed: u64,
    pub runs_per_algorithm: usize,
    pub algorithms: Vec<Algorithm>,
    /// Load an existing instance instead of generating one.
    pub instance_path: Option<PathBuf>,
    /// Generator parameters; used when `instance_path` is absent.
    pub generator: Option<GeneratorConfig>,
    pub out_dir: Option<PathBuf>,
    pub nsga2: AlgorithmConfig,
    pub spea2: AlgorithmConfig,
    pub random: AlgorithmConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            base_seed: 0,
            runs_per_algorithm: 100,
            algorithms: Algorithm::ALL.to_vec(),
            instance_path: None,
            generator: None,
            out_dir: None,
            nsga2: AlgorithmConfig::default(),
            spea2: AlgorithmConfig::default(),
            random: AlgorithmConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.algorithms.is_empty() {
            return Err(Error::Config("at least one algorithm is required".into()));
        }
        let mut seen = Vec::new();
        for a in &self.algorithms {
            if seen.contains(a) {
                return Err(Error::Config(format!("algorithm {a} listed twice")));
            }
            seen.push(*a);
        }
        if self.runs_per_algorithm == 0 {
            return Err(Error::Config("runs_per_algorithm must be at least 1".into()));
        }
        if self.instance_path.is_some() && self.generator.is_some() {
            return Err(Error::Config(
                "set either instance_path or [generator], not both".into(),
            ));
        }
        if let Some(g) = &self.generator {
            g.validate()?;
        }
        self.nsga2.validate()?;
        self.spea2.validate()?;
        self.random.validate()?;
        Ok(())
    }

    pub fn algorithm_config(&self, algorithm: Algorithm) -> &AlgorithmConfig {
        match algorithm {
            Algorithm::Nsga2 => &self.nsga2,
            Algorithm::Spea2 => &self.spea2,
            Algorithm::Random => &self.random,
        }
    }

    pub fn from_toml_str(text: &str, path: &Path) -> Result<Self, Error> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(format!(
            "{}: {e}",
            path.display()
        )))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text, path)
    }
}

/// One row of the hypervolume table.
#[derive(Debug, Clone, PartialEq)]
pub struct HvRow {
    pub algorithm: Algorithm,
    pub run: usize,
    pub seed: u64,
    pub hypervolume: f64,
}

/// One pairwise comparison in the statistics report.
#[derive(Debug, Clone)]
pub struct PairReport {
    pub first: Algorithm,
    pub second: Algorithm,
    pub report: TestReport<f64>,
}

impl PairReport {
    /// Verdict at the fixed significance threshold, naming the better
    /// algorithm by A12 direction.
    pub fn verdict(&self) -> String {
        if self.report.degenerate {
            return "degenerate".into();
        }
        if self.report.p_value >= ALPHA {
            return "not-significant".into();
        }
        let winner = if self.report.a12 > 0.5 {
            self.first
        } else {
            self.second
        };
        format!("significant:{winner}-better")
    }
}

/// Everything an experiment produced, for callers that want to inspect it
/// in-process (the files carry the same data).
pub struct ExperimentSummary {
    pub instance: Instance,
    pub hv_rows: Vec<HvRow>,
    pub merged: Vec<(Algorithm, FrontSet<f64>)>,
    pub pairs: Vec<PairReport>,
}

impl ExperimentSummary {
    pub fn hv_sample(&self, algorithm: Algorithm) -> Vec<f64> {
        self.hv_rows
            .iter()
            .filter(|r| r.algorithm == algorithm)
            .map(|r| r.hypervolume)
            .collect()
    }

    pub fn median_hv(&self, algorithm: Algorithm) -> f64 {
        median(&self.hv_sample(algorithm))
    }
}

fn create_dir(path: &Path) -> Result<(), Error> {
    std::fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn write_file(path: &Path, content: &str) -> Result<(), Error> {
    std::fs::write(path, content).map_err(|e| Error::io(path, e))
}

/// Resolve the experiment's instance: load it, or generate it (and remember
/// the generator config so the harness can persist the instance).
pub fn resolve_instance(config: &ExperimentConfig) -> Result<(Instance, bool), Error> {
    match &config.instance_path {
        Some(path) => Ok((load_instance(path)?, false)),
        None => {
            let gen_cfg = config.generator.clone().unwrap_or_default();
            Ok((generate_instance(&gen_cfg)?, true))
        }
    }
}

/// Render a run's front as the documented CSV: bitstring mask, raw
/// objectives, normalized coordinates.
pub fn front_to_csv(front: &FrontSet<f64>, instance: &Instance) -> Result<String, Error> {
    let mut out = String::from("mask,energy_kwh,reputation,f1,f2\n");
    for m in front.members() {
        let p = normalize(&m.objectives, instance)?;
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            m.mask.to_bitstring(),
            m.objectives.energy_kwh,
            m.objectives.reputation,
            p.f1,
            p.f2
        );
    }
    Ok(out)
}

pub fn write_front_file(path: &Path, front: &FrontSet<f64>, instance: &Instance) -> Result<(), Error> {
    if !FrontSet::is_internally_nondominated(front.members()) {
        return Err(Error::Config(format!(
            "refusing to write a dominated front to {}",
            path.display()
        )));
    }
    write_file(path, &front_to_csv(front, instance)?)
}

/// Read a front file back, re-checking internal non-dominance.
pub fn read_front_file(path: &Path) -> Result<FrontSet<f64>, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut members = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 {
            if line != "mask,energy_kwh,reputation,f1,f2" {
                return Err(Error::Parse {
                    path: path.into(),
                    line: 1,
                    message: format!("unexpected header {line:?}"),
                });
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::Parse {
                path: path.into(),
                line: idx + 1,
                message: format!("expected 5 columns, got {}", fields.len()),
            });
        }
        let parse_f = |field: &str, name: &str| -> Result<f64, Error> {
            field.parse().map_err(|_| Error::Parse {
                path: path.into(),
                line: idx + 1,
                message: format!("field {name}: cannot parse {field:?}"),
            })
        };
        members.push(FrontMember {
            mask: SelectionMask::from_bitstring(fields[0]).map_err(|e| Error::Parse {
                path: path.into(),
                line: idx + 1,
                message: e.to_string(),
            })?,
            objectives: ObjectiveVector {
                energy_kwh: parse_f(fields[1], "energy_kwh")?,
                reputation: parse_f(fields[2], "reputation")?,
            },
        });
    }
    if !FrontSet::is_internally_nondominated(&members) {
        return Err(Error::Parse {
            path: path.into(),
            line: text.lines().count(),
            message: "front file is not internally non-dominated".into(),
        });
    }
    Ok(FrontSet::from_members(members))
}

pub fn hv_table_to_csv(rows: &[HvRow]) -> String {
    let mut out = String::from("algorithm,run,seed,hypervolume\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.algorithm, r.run, r.seed, r.hypervolume);
    }
    out
}

pub fn read_hv_table(path: &Path) -> Result<Vec<HvRow>, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 {
            if line != "algorithm,run,seed,hypervolume" {
                return Err(Error::Parse {
                    path: path.into(),
                    line: 1,
                    message: format!("unexpected header {line:?}"),
                });
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse {
                path: path.into(),
                line: idx + 1,
                message: format!("expected 4 columns, got {}", fields.len()),
            });
        }
        let err = |name: &str, value: &str| Error::Parse {
            path: path.into(),
            line: idx + 1,
            message: format!("field {name}: cannot parse {value:?}"),
        };
        rows.push(HvRow {
            algorithm: fields[0].parse().map_err(|_| err("algorithm", fields[0]))?,
            run: fields[1].parse().map_err(|_| err("run", fields[1]))?,
            seed: fields[2].parse().map_err(|_| err("seed", fields[2]))?,
            hypervolume: fields[3].parse().map_err(|_| err("hypervolume", fields[3]))?,
        });
    }
    Ok(rows)
}

/// Pairwise rank-sum + A12 comparisons over the hypervolume table, in
/// first-appearance order of the algorithms.
pub fn pairwise_reports(rows: &[HvRow]) -> Result<Vec<PairReport>, Error> {
    let mut order: Vec<Algorithm> = Vec::new();
    for r in rows {
        if !order.contains(&r.algorithm) {
            order.push(r.algorithm);
        }
    }
    let sample = |a: Algorithm| -> Vec<f64> {
        rows.iter()
            .filter(|r| r.algorithm == a)
            .map(|r| r.hypervolume)
            .collect()
    };
    let mut pairs = Vec::new();
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            let report = rank_sum_test(&sample(order[i]), &sample(order[j]))?;
            pairs.push(PairReport {
                first: order[i],
                second: order[j],
                report,
            });
        }
    }
    Ok(pairs)
}

pub fn stats_report_to_csv(pairs: &[PairReport]) -> String {
    let mut out = String::from("pair,u_statistic,p_value,method,a12,verdict\n");
    for p in pairs {
        let _ = writeln!(
            out,
            "{}-vs-{},{},{},{},{},{}",
            p.first,
            p.second,
            p.report.u_statistic,
            p.report.p_value,
            p.report.method,
            p.report.a12,
            p.verdict()
        );
    }
    out
}

pub fn print_stats_report(pairs: &[PairReport]) {
    for p in pairs {
        println!(
            "{}-vs-{}: U = {}, p = {} ({}), A12 = {} -> {}",
            p.first,
            p.second,
            p.report.u_statistic,
            p.report.p_value,
            p.report.method,
            p.report.a12,
            p.verdict()
        );
    }
}

/// Execute the full experiment into `out_dir`: per-run front files, the
/// per-algorithm merged fronts, the hypervolume table, the pairwise
/// statistics report and the plot-ready merged-front data.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<ExperimentSummary, Error> {
    config.validate()?;
    let (instance, generated) = resolve_instance(config)?;
    create_dir(out_dir)?;
    let runs_dir = out_dir.join("runs");
    create_dir(&runs_dir)?;
    if generated {
        save_instance(&instance, &out_dir.join("instance.txt"))?;
    }

    let reference = ReferencePoint::default();
    let mut hv_rows = Vec::new();
    let mut fronts_by_algorithm: Vec<(Algorithm, Vec<FrontSet<f64>>)> = Vec::new();
    for &algorithm in &config.algorithms {
        let mut fronts = Vec::new();
        for run_index in 0..config.runs_per_algorithm {
            let mut alg_cfg = config.algorithm_config(algorithm).clone();
            alg_cfg.seed = config.base_seed + run_index as u64;
            let mut result: RunResult<f64> = run(algorithm, &instance, &alg_cfg)?;
            result.run_index = run_index;
            let hv = per_run_hypervolume(&result, &instance, &reference)?;
            write_front_file(
                &runs_dir.join(format!("{algorithm}_{run_index:03}.csv")),
                &result.front,
                &instance,
            )?;
            hv_rows.push(HvRow {
                algorithm,
                run: run_index,
                seed: alg_cfg.seed,
                hypervolume: hv,
            });
            fronts.push(result.front);
        }
        fronts_by_algorithm.push((algorithm, fronts));
    }

    write_file(&out_dir.join("hypervolume.csv"), &hv_table_to_csv(&hv_rows))?;

    let mut merged = Vec::new();
    let mut plot = String::from("algorithm,energy_kwh,reputation\n");
    for (algorithm, fronts) in &fronts_by_algorithm {
        let combined = merge_fronts(fronts);
        write_front_file(
            &out_dir.join(format!("merged_{algorithm}.csv")),
            &combined,
            &instance,
        )?;
        for m in combined.members() {
            let _ = writeln!(
                plot,
                "{},{},{}",
                algorithm, m.objectives.energy_kwh, m.objectives.reputation
            );
        }
        merged.push((*algorithm, combined));
    }
    write_file(&out_dir.join("plot_energy_vs_reputation.csv"), &plot)?;

    let pairs = if config.algorithms.len() > 1 {
        pairwise_reports(&hv_rows)?
    } else {
        Vec::new()
    };
    write_file(&out_dir.join("stats.csv"), &stats_report_to_csv(&pairs))?;

    for (algorithm, front) in &merged {
        let hv = front_hypervolume(front, &instance, &reference)?;
        println!(
            "{algorithm}: {} runs, merged front size {}, merged hv {hv}, median run hv {}",
            config.runs_per_algorithm,
            front.len(),
            median(
                &hv_rows
                    .iter()
                    .filter(|r| r.algorithm == *algorithm)
                    .map(|r| r.hypervolume)
                    .collect::<Vec<_>>()
            )
        );
    }
    print_stats_report(&pairs);

    Ok(ExperimentSummary {
        instance,
        hv_rows,
        merged,
        pairs,
    })
}
