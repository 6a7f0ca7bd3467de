//! Problem instances: miners, their devices, and synthetic mining histories.
//!
//! An [`Instance`] is the immutable input of the optimization problem. It is
//! either generated synthetically from a [`GeneratorConfig`] (drawing hash
//! power from a heavy-tailed distribution and assigning blocks proportionally)
//! or loaded from a text file produced by [`save_instance`].

use std::fmt::Write as _;
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng as _, SeedableRng};
use rand_distr::Normal;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::{real, Real};
use crate::Rng;

/// A single piece of mining hardware.
#[derive(Debug, Clone, PartialEq)]
pub struct Device<S> {
    pub name: String,
    /// Power draw in watts. A device with `hash_rate = 0` still burns energy.
    pub power_watts: S,
    /// Hash throughput in arbitrary hash units per second.
    pub hash_rate: S,
}

/// A network participant: hardware plus its mining history.
#[derive(Debug, Clone, PartialEq)]
pub struct Miner<S> {
    /// Index in `0..n`, unique within an instance.
    pub id: usize,
    pub devices: Vec<Device<S>>,
    /// Held currency: initial endowment plus everything earned.
    pub stake: S,
    pub blocks_mined: u64,
    pub rewards_earned: S,
    pub fees_earned: S,
}

impl<S: Real> Miner<S> {
    /// Total hash rate over all devices.
    pub fn hash_rate(&self) -> S {
        self.devices.iter().map(|d| d.hash_rate).sum()
    }
}

/// Daily energy demand of a miner: the summed power draw of its devices run
/// for 24 hours, in kWh. The 24 h horizon is fixed so objective units stay
/// stable.
pub fn miner_energy<S: Real>(miner: &Miner<S>) -> S {
    let watts: S = miner.devices.iter().map(|d| d.power_watts).sum();
    watts * real::<S>(24.0) / real::<S>(1000.0)
}

/// Reputation score in `[0, 1]`: a convex combination of max-normalized stake
/// and max-normalized block count with weight `alpha` on the stake term.
/// A degenerate maximum (all stakes zero, or all block counts zero) makes the
/// corresponding term 0 rather than undefined.
pub fn reputation_score<S: Real>(miner: &Miner<S>, max_stake: S, max_blocks: u64, alpha: S) -> S {
    let stake_term = if max_stake > S::zero() {
        miner.stake / max_stake
    } else {
        S::zero()
    };
    let blocks_term = if max_blocks > 0 {
        real::<S>(miner.blocks_mined as f64) / real::<S>(max_blocks as f64)
    } else {
        S::zero()
    };
    alpha * stake_term + (S::one() - alpha) * blocks_term
}

/// Reputation of `miner` under `instance`'s cached maxima and alpha.
pub fn miner_reputation<S: Real>(miner: &Miner<S>, instance: &Instance<S>) -> S {
    reputation_score(miner, instance.max_stake, instance.max_blocks, instance.alpha)
}

/// The full miner pool with cached normalization statistics.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<S> {
    miners: Vec<Miner<S>>,
    total_blocks: u64,
    alpha: S,
    seed: u64,
    max_stake: S,
    max_blocks: u64,
    total_energy_kwh: S,
    total_reputation: S,
    energy: Vec<S>,
    reputation: Vec<S>,
    warnings: Vec<String>,
}

impl<S: Real> Instance<S> {
    /// Build an instance, computing the cached maxima, per-miner scores and
    /// totals. Hard invariant violations (negative values, duplicate ids,
    /// empty pool) are errors; soft inconsistencies that loaded data may
    /// legitimately carry (block totals not adding up, earnings without
    /// blocks) become warnings.
    pub fn new(miners: Vec<Miner<S>>, total_blocks: u64, alpha: S, seed: u64) -> Result<Self, Error> {
        if miners.is_empty() {
            return Err(Error::Config("an instance needs at least one miner".into()));
        }
        if total_blocks == 0 {
            return Err(Error::Config("total_blocks must be positive".into()));
        }
        if alpha < S::zero() || alpha > S::one() {
            return Err(Error::Config("alpha must lie in [0, 1]".into()));
        }
        let mut seen = vec![false; miners.len()];
        for m in &miners {
            if m.id >= miners.len() || seen[m.id] {
                return Err(Error::Config(format!(
                    "miner ids must be unique and cover 0..{}, got {}",
                    miners.len(),
                    m.id
                )));
            }
            seen[m.id] = true;
            if m.stake < S::zero() || m.rewards_earned < S::zero() || m.fees_earned < S::zero() {
                return Err(Error::Config(format!(
                    "miner {} has a negative stake/rewards/fees value",
                    m.id
                )));
            }
            for d in &m.devices {
                if d.power_watts < S::zero() || d.hash_rate < S::zero() {
                    return Err(Error::Config(format!(
                        "device {} of miner {} has a negative power or hash rate",
                        d.name, m.id
                    )));
                }
            }
        }

        let mut warnings = Vec::new();
        let block_sum: u64 = miners.iter().map(|m| m.blocks_mined).sum();
        if block_sum != total_blocks {
            warnings.push(format!(
                "block counts sum to {} but the instance declares {} total blocks",
                block_sum, total_blocks
            ));
        }
        for m in &miners {
            if m.blocks_mined > total_blocks {
                warnings.push(format!(
                    "miner {} mined {} blocks, more than the instance total {}",
                    m.id, m.blocks_mined, total_blocks
                ));
            }
            let has_earnings = m.rewards_earned > S::zero() || m.fees_earned > S::zero();
            if (m.blocks_mined == 0) == has_earnings {
                warnings.push(format!(
                    "miner {} has {} blocks but rewards {} and fees {}",
                    m.id, m.blocks_mined, m.rewards_earned, m.fees_earned
                ));
            }
        }

        let max_stake = miners
            .iter()
            .map(|m| m.stake)
            .fold(S::zero(), |a, b| if b > a { b } else { a });
        let max_blocks = miners.iter().map(|m| m.blocks_mined).max().unwrap_or(0);
        let energy: Vec<S> = miners.iter().map(miner_energy).collect();
        let reputation: Vec<S> = miners
            .iter()
            .map(|m| reputation_score(m, max_stake, max_blocks, alpha))
            .collect();
        let total_energy_kwh = energy.iter().copied().sum();
        let total_reputation = reputation.iter().copied().sum();

        Ok(Instance {
            miners,
            total_blocks,
            alpha,
            seed,
            max_stake,
            max_blocks,
            total_energy_kwh,
            total_reputation,
            energy,
            reputation,
            warnings,
        })
    }

    pub fn n(&self) -> usize {
        self.miners.len()
    }

    pub fn miners(&self) -> &[Miner<S>] {
        &self.miners
    }

    pub fn total_blocks(&self) -> u64 {
        self.total_blocks
    }

    pub fn alpha(&self) -> S {
        self.alpha
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn max_stake(&self) -> S {
        self.max_stake
    }

    pub fn max_blocks(&self) -> u64 {
        self.max_blocks
    }

    pub fn total_energy_kwh(&self) -> S {
        self.total_energy_kwh
    }

    pub fn total_reputation(&self) -> S {
        self.total_reputation
    }

    /// Cached `miner_energy` of miner `i`.
    pub fn energy_of(&self, i: usize) -> S {
        self.energy[i]
    }

    /// Cached `miner_reputation` of miner `i`.
    pub fn reputation_of(&self, i: usize) -> S {
        self.reputation[i]
    }

    /// Soft-inconsistency warnings collected at construction (empty for
    /// generated instances).
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

/// A device template the generator instantiates, with real-ish ASIC numbers:
/// power in watts, hash rate in TH/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceTemplate {
    pub name: String,
    pub power_watts: f64,
    pub hash_rate: f64,
}

/// Parameters of the synthetic instance generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeneratorConfig {
    pub n_miners: usize,
    pub n_blocks: u64,
    pub block_subsidy: f64,
    /// Per-block transaction fee draw: mean and spread of a normal clamped at 0.
    pub fee_mean: f64,
    pub fee_spread: f64,
    /// Pareto shape of the per-miner hash power draw; smaller is heavier-tailed.
    pub hash_power_shape: f64,
    /// Pareto scale, i.e. the minimum hash power (TH/s).
    pub hash_power_scale: f64,
    pub device_catalog: Vec<DeviceTemplate>,
    /// Initial stake endowment draw: mean and spread of a normal clamped at 0.
    pub stake_mean: f64,
    pub stake_spread: f64,
    /// Weight of the stake term in the reputation score.
    pub reputation_alpha: f64,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            n_miners: 160,
            n_blocks: 4073,
            block_subsidy: 6.25,
            fee_mean: 0.2,
            fee_spread: 0.08,
            hash_power_shape: 1.6,
            hash_power_scale: 10.0,
            device_catalog: vec![
                DeviceTemplate {
                    name: "antminer_s9".into(),
                    power_watts: 1375.0,
                    hash_rate: 14.0,
                },
                DeviceTemplate {
                    name: "antminer_s19".into(),
                    power_watts: 3250.0,
                    hash_rate: 95.0,
                },
                DeviceTemplate {
                    name: "whatsminer_m30s".into(),
                    power_watts: 3400.0,
                    hash_rate: 86.0,
                },
                DeviceTemplate {
                    name: "avalon_1246".into(),
                    power_watts: 3420.0,
                    hash_rate: 90.0,
                },
            ],
            stake_mean: 50.0,
            stake_spread: 20.0,
            reputation_alpha: 0.5,
            seed: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.n_miners == 0 {
            return Err(Error::Config("n_miners must be at least 1".into()));
        }
        if self.n_blocks == 0 {
            return Err(Error::Config("n_blocks must be at least 1".into()));
        }
        for (name, v) in [
            ("block_subsidy", self.block_subsidy),
            ("fee_mean", self.fee_mean),
            ("fee_spread", self.fee_spread),
            ("hash_power_shape", self.hash_power_shape),
            ("hash_power_scale", self.hash_power_scale),
            ("stake_mean", self.stake_mean),
            ("stake_spread", self.stake_spread),
        ] {
            if !(v > 0.0) {
                return Err(Error::Config(format!("{name} must be strictly positive")));
            }
        }
        if !(0.0..=1.0).contains(&self.reputation_alpha) {
            return Err(Error::Config("reputation_alpha must lie in [0, 1]".into()));
        }
        if self.device_catalog.is_empty() {
            return Err(Error::Config("device_catalog must not be empty".into()));
        }
        for t in &self.device_catalog {
            if !(t.hash_rate > 0.0) || t.power_watts < 0.0 {
                return Err(Error::Config(format!(
                    "device template {} needs hash_rate > 0 and power_watts >= 0",
                    t.name
                )));
            }
            if t.name.is_empty() || t.name.contains(char::is_whitespace) || t.name.contains('=') {
                return Err(Error::Config(format!(
                    "device template name {:?} must be non-empty without whitespace or '='",
                    t.name
                )));
            }
        }
        Ok(())
    }
}

/// Generate a synthetic instance: per-miner hash power from a Pareto draw,
/// devices from the catalog scaled to that hash power, each block assigned to
/// one miner with probability proportional to hash rate, subsidy and fees
/// credited per mined block, stake = initial endowment + earnings.
/// Deterministic given `config.seed`.
pub fn generate_instance<S: Real>(config: &GeneratorConfig) -> Result<Instance<S>, Error> {
    config.validate()?;
    let mut rng = Rng::seed_from_u64(config.seed);
    let n = config.n_miners;

    // Hash power and devices per miner.
    let mut hash_powers = Vec::with_capacity(n);
    let mut devices: Vec<Vec<Device<S>>> = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = rng.random();
        let h = config.hash_power_scale * (1.0 - u).powf(-1.0 / config.hash_power_shape);
        let template = &config.device_catalog[rng.random_range(0..config.device_catalog.len())];
        let count = ((h / template.hash_rate).ceil() as usize).clamp(1, 64);
        let per_device_hash = h / count as f64;
        let per_device_power = template.power_watts * per_device_hash / template.hash_rate;
        devices.push(
            (0..count)
                .map(|k| Device {
                    name: format!("{}_{}", template.name, k),
                    power_watts: real(per_device_power),
                    hash_rate: real(per_device_hash),
                })
                .collect(),
        );
        hash_powers.push(h);
    }
    if hash_powers.iter().all(|&h| h <= 0.0) {
        return Err(Error::Config(
            "every miner has zero hash rate; no valid block assignment exists".into(),
        ));
    }

    // Initial stakes.
    let stake_dist = Normal::new(config.stake_mean, config.stake_spread)
        .map_err(|e| Error::Config(format!("bad stake distribution: {e}")))?;
    let initial_stakes: Vec<f64> = (0..n).map(|_| stake_dist.sample(&mut rng).max(0.0)).collect();

    // Block assignment proportional to hash power.
    let assignment = WeightedIndex::new(&hash_powers)
        .map_err(|e| Error::Config(format!("bad hash power weights: {e}")))?;
    let fee_dist = Normal::new(config.fee_mean, config.fee_spread)
        .map_err(|e| Error::Config(format!("bad fee distribution: {e}")))?;
    let mut blocks = vec![0u64; n];
    let mut rewards = vec![0.0f64; n];
    let mut fees = vec![0.0f64; n];
    for _ in 0..config.n_blocks {
        let winner = assignment.sample(&mut rng);
        blocks[winner] += 1;
        rewards[winner] += config.block_subsidy;
        fees[winner] += fee_dist.sample(&mut rng).max(0.0);
    }

    let miners = (0..n)
        .map(|i| Miner {
            id: i,
            devices: std::mem::take(&mut devices[i]),
            stake: real(initial_stakes[i] + rewards[i] + fees[i]),
            blocks_mined: blocks[i],
            rewards_earned: real(rewards[i]),
            fees_earned: real(fees[i]),
        })
        .collect();
    Instance::new(miners, config.n_blocks, real(config.reputation_alpha), config.seed)
}

/// Render an instance as the line-oriented text format documented in the
/// README: a header record, then one `miner` record per miner followed by its
/// `device` records. Reals are written with full round-trip precision.
pub fn instance_to_string<S: Real>(instance: &Instance<S>) -> String {
    let mut out = String::new();
    out.push_str("# miner-select instance v1\n");
    let _ = writeln!(
        out,
        "instance n_miners={} total_blocks={} seed={} alpha={}",
        instance.n(),
        instance.total_blocks(),
        instance.seed(),
        instance.alpha()
    );
    for m in instance.miners() {
        let _ = writeln!(
            out,
            "miner id={} stake={} blocks_mined={} rewards_earned={} fees_earned={} devices={}",
            m.id,
            m.stake,
            m.blocks_mined,
            m.rewards_earned,
            m.fees_earned,
            m.devices.len()
        );
        for d in &m.devices {
            let _ = writeln!(
                out,
                "device name={} power_watts={} hash_rate={}",
                d.name, d.power_watts, d.hash_rate
            );
        }
    }
    out
}

pub fn save_instance<S: Real>(instance: &Instance<S>, path: &Path) -> Result<(), Error> {
    std::fs::write(path, instance_to_string(instance)).map_err(|e| Error::io(path, e))
}

struct RecordParser<'a> {
    path: &'a Path,
    line: usize,
    tokens: Vec<(&'a str, &'a str)>,
}

impl<'a> RecordParser<'a> {
    fn parse(path: &'a Path, line: usize, rest: &'a str) -> Result<Self, Error> {
        let mut tokens = Vec::new();
        for tok in rest.split_whitespace() {
            let (key, value) = tok.split_once('=').ok_or_else(|| Error::Parse {
                path: path.into(),
                line,
                message: format!("expected key=value, got {tok:?}"),
            })?;
            tokens.push((key, value));
        }
        Ok(RecordParser { path, line, tokens })
    }

    fn err(&self, message: String) -> Error {
        Error::Parse {
            path: self.path.into(),
            line: self.line,
            message,
        }
    }

    fn field<T: std::str::FromStr>(&self, key: &str) -> Result<T, Error> {
        let raw = self
            .tokens
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| self.err(format!("missing field {key}")))?;
        raw.parse()
            .map_err(|_| self.err(format!("field {key}: cannot parse {raw:?}")))
    }

    fn nonneg<T: std::str::FromStr + PartialOrd + num_traits::Zero>(&self, key: &str) -> Result<T, Error> {
        let v: T = self.field(key)?;
        if v < T::zero() {
            return Err(self.err(format!("field {key}: must be non-negative")));
        }
        Ok(v)
    }
}

/// Parse an instance from its text form. Malformed records are errors naming
/// the line and field; soft inconsistencies (block totals, earnings without
/// blocks) surface as instance warnings, not failures.
pub fn parse_instance<S: Real>(text: &str, path: &Path) -> Result<Instance<S>, Error> {
    let mut header: Option<(usize, u64, u64, S)> = None;
    let mut miners: Vec<Miner<S>> = Vec::new();
    let mut pending_devices = 0usize;

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw_line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (kind, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let rec = RecordParser::parse(path, line, rest)?;
        match kind {
            "instance" => {
                if header.is_some() {
                    return Err(rec.err("duplicate instance header".into()));
                }
                let n_miners: usize = rec.field("n_miners")?;
                let total_blocks: u64 = rec.field("total_blocks")?;
                let seed: u64 = rec.field("seed")?;
                let alpha: S = rec.field("alpha")?;
                header = Some((n_miners, total_blocks, seed, alpha));
            }
            "miner" => {
                if header.is_none() {
                    return Err(rec.err("miner record before instance header".into()));
                }
                if pending_devices > 0 {
                    return Err(rec.err(format!(
                        "expected {pending_devices} more device records for the previous miner"
                    )));
                }
                pending_devices = rec.field("devices")?;
                miners.push(Miner {
                    id: rec.field("id")?,
                    devices: Vec::with_capacity(pending_devices),
                    stake: rec.nonneg("stake")?,
                    blocks_mined: rec.field("blocks_mined")?,
                    rewards_earned: rec.nonneg("rewards_earned")?,
                    fees_earned: rec.nonneg("fees_earned")?,
                });
            }
            "device" => {
                let miner = miners
                    .last_mut()
                    .ok_or_else(|| rec.err("device record before any miner record".into()))?;
                if pending_devices == 0 {
                    return Err(rec.err(format!(
                        "miner {} declared fewer devices than listed",
                        miner.id
                    )));
                }
                pending_devices -= 1;
                miner.devices.push(Device {
                    name: rec.field("name")?,
                    power_watts: rec.nonneg("power_watts")?,
                    hash_rate: rec.nonneg("hash_rate")?,
                });
            }
            other => {
                return Err(rec.err(format!("unknown record type {other:?}")));
            }
        }
    }

    let (n_miners, total_blocks, seed, alpha) = header.ok_or_else(|| Error::Parse {
        path: path.into(),
        line: text.lines().count(),
        message: "missing instance header".into(),
    })?;
    if pending_devices > 0 {
        return Err(Error::Parse {
            path: path.into(),
            line: text.lines().count(),
            message: format!("file ended with {pending_devices} device records missing"),
        });
    }
    if miners.len() != n_miners {
        return Err(Error::Parse {
            path: path.into(),
            line: text.lines().count(),
            message: format!("header declares {} miners, found {}", n_miners, miners.len()),
        });
    }
    Instance::new(miners, total_blocks, alpha, seed)
}

pub fn load_instance<S: Real>(path: &Path) -> Result<Instance<S>, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let instance = parse_instance(&text, path)?;
    for w in instance.warnings() {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(instance)
}

/// Small helper for tests and fixtures: a miner with no history.
pub fn bare_miner<S: Real>(id: usize, devices: Vec<Device<S>>, stake: S, blocks: u64) -> Miner<S> {
    let subsidy = if blocks > 0 { S::one() } else { S::zero() };
    Miner {
        id,
        devices,
        stake,
        blocks_mined: blocks,
        rewards_earned: subsidy,
        fees_earned: S::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn device(power: f64, hash: f64) -> Device<f64> {
        Device {
            name: "d".into(),
            power_watts: power,
            hash_rate: hash,
        }
    }

    #[test]
    fn energy_single_kilowatt_device_is_24_kwh() {
        let m = bare_miner(0, vec![device(1000.0, 1.0)], 1.0, 1);
        assert_eq!(miner_energy(&m), 24.0);
    }

    #[test]
    fn energy_of_devicless_miner_is_zero() {
        let m = bare_miner(0, vec![], 1.0, 1);
        assert_eq!(miner_energy(&m), 0.0);
    }

    #[test]
    fn energy_sums_devices() {
        let m = bare_miner(0, vec![device(1500.0, 1.0), device(300.0, 1.0)], 1.0, 1);
        assert_relative_eq!(miner_energy(&m), 43.2);
    }

    fn two_miner_instance(stakes: [f64; 2], blocks: [u64; 2], alpha: f64) -> Instance<f64> {
        let miners = vec![
            bare_miner(0, vec![device(100.0, 1.0)], stakes[0], blocks[0]),
            bare_miner(1, vec![device(100.0, 1.0)], stakes[1], blocks[1]),
        ];
        Instance::new(miners, blocks[0] + blocks[1].max(1), alpha, 0).unwrap()
    }

    #[test]
    fn reputation_of_double_maximum_is_one() {
        let inst = two_miner_instance([10.0, 4.0], [7, 3], 0.5);
        assert_eq!(miner_reputation(&inst.miners()[0], &inst), 1.0);
    }

    #[test]
    fn reputation_of_zero_miner_is_zero() {
        let miners = vec![
            bare_miner(0, vec![], 0.0, 0),
            bare_miner(1, vec![], 5.0, 3),
        ];
        let inst = Instance::new(miners, 3, 0.5, 0).unwrap();
        assert_eq!(miner_reputation(&inst.miners()[0], &inst), 0.0);
    }

    #[test]
    fn reputation_half_stake_full_blocks() {
        let inst = two_miner_instance([5.0, 10.0], [4, 2], 0.5);
        // miner 0: stake = max/2, blocks = max.
        assert_relative_eq!(miner_reputation(&inst.miners()[0], &inst), 0.75);
    }

    #[test]
    fn reputation_degenerate_maxima_are_zero_terms() {
        let miners = vec![bare_miner(0, vec![], 0.0, 0), bare_miner(1, vec![], 0.0, 0)];
        let inst = Instance::new(miners, 1, 0.5, 0).unwrap();
        assert_eq!(miner_reputation(&inst.miners()[0], &inst), 0.0);
    }

    #[test]
    fn sole_miner_gets_every_block() {
        let cfg = GeneratorConfig {
            n_miners: 1,
            ..GeneratorConfig::default()
        };
        let inst: Instance<f64> = generate_instance(&cfg).unwrap();
        assert_eq!(inst.miners()[0].blocks_mined, 4073);
        assert_eq!(inst.total_blocks(), 4073);
        assert!(inst.warnings().is_empty());
    }

    #[test]
    fn equal_hash_rates_split_blocks_fairly() {
        // Uniform hash power via a degenerate catalog and near-flat Pareto
        // draw is not available, so check the weighted assignment directly:
        // with two miners of equal drawn hash power the per-seed block share
        // must average near 1/2 over many seeds.
        let mut shares = Vec::new();
        for seed in 0..200 {
            let cfg = GeneratorConfig {
                n_miners: 2,
                hash_power_shape: 1e9, // degenerate Pareto: everyone draws the scale
                seed,
                ..GeneratorConfig::default()
            };
            let inst: Instance<f64> = generate_instance(&cfg).unwrap();
            shares.push(inst.miners()[0].blocks_mined as f64 / inst.total_blocks() as f64);
        }
        let mean = shares.iter().sum::<f64>() / shares.len() as f64;
        assert!((0.48..=0.52).contains(&mean), "mean share {mean}");
    }

    #[test]
    fn identical_seeds_give_identical_instances() {
        let cfg = GeneratorConfig {
            n_miners: 20,
            n_blocks: 100,
            seed: 9,
            ..GeneratorConfig::default()
        };
        let a: Instance<f64> = generate_instance(&cfg).unwrap();
        let b: Instance<f64> = generate_instance(&cfg).unwrap();
        assert_eq!(instance_to_string(&a), instance_to_string(&b));
    }

    #[test]
    fn generator_rejects_zero_miners() {
        let cfg = GeneratorConfig {
            n_miners: 0,
            ..GeneratorConfig::default()
        };
        assert!(matches!(generate_instance::<f64>(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn stake_covers_earnings() {
        let cfg = GeneratorConfig {
            n_miners: 10,
            n_blocks: 500,
            seed: 3,
            ..GeneratorConfig::default()
        };
        let inst: Instance<f64> = generate_instance(&cfg).unwrap();
        for m in inst.miners() {
            assert!(m.stake >= m.rewards_earned + m.fees_earned - 1e-9);
        }
    }

    #[test]
    fn save_load_round_trip_is_identity() {
        let cfg = GeneratorConfig {
            seed: 17,
            ..GeneratorConfig::default()
        };
        let inst: Instance<f64> = generate_instance(&cfg).unwrap();
        let text = instance_to_string(&inst);
        let loaded: Instance<f64> = parse_instance(&text, Path::new("mem")).unwrap();
        assert_eq!(inst, loaded);
    }

    #[test]
    fn negative_power_is_a_parse_error() {
        let text = "instance n_miners=1 total_blocks=1 seed=0 alpha=0.5\n\
                    miner id=0 stake=1 blocks_mined=1 rewards_earned=1 fees_earned=0 devices=1\n\
                    device name=x power_watts=-5 hash_rate=1\n";
        let err = parse_instance::<f64>(text, Path::new("mem")).unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 3);
                assert!(message.contains("power_watts"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn inconsistent_block_total_loads_with_warning() {
        let text = "instance n_miners=1 total_blocks=10 seed=0 alpha=0.5\n\
                    miner id=0 stake=1 blocks_mined=4 rewards_earned=1 fees_earned=0 devices=0\n";
        let inst: Instance<f64> = parse_instance(text, Path::new("mem")).unwrap();
        assert!(!inst.warnings().is_empty());
    }

    #[test]
    fn energy_is_invariant_under_device_reordering() {
        let mut m = bare_miner(0, vec![device(10.0, 1.0), device(250.0, 2.0), device(3.5, 0.0)], 1.0, 1);
        let before = miner_energy(&m);
        m.devices.reverse();
        assert_eq!(miner_energy(&m), before);
    }
}
