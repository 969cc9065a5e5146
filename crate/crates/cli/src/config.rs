//! Flags, config files and the resolved parameter record.
//!
//! Precedence is flag, then config file, then built-in default. Environment
//! variables are never read.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const DEFAULT_K: usize = 8;
pub const DEFAULT_ENERGY: f64 = 4.0;
pub const DEFAULT_NOISE: f64 = 1.0;
pub const DEFAULT_DELTA: f64 = 1.0;
pub const DEFAULT_TRIALS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "coherent-id",
    version,
    about = "Identification over thermal bosonic channels with coherent-state signatures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Tabulate cardinality and error bounds.
    Bounds(Flags),
    /// Build and save a codebook.
    Pack(Flags),
    /// Monte Carlo error estimates for the photon-threshold receiver.
    Simulate(Flags),
    /// Run the numerical oracle suite.
    Verify(Flags),
    /// Monte Carlo and exact errors of the heterodyne ball test.
    Heterodyne(Flags),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bounds(_) => "bounds",
            Command::Pack(_) => "pack",
            Command::Simulate(_) => "simulate",
            Command::Verify(_) => "verify",
            Command::Heterodyne(_) => "heterodyne",
        }
    }

    pub fn flags(&self) -> &Flags {
        match self {
            Command::Bounds(f)
            | Command::Pack(f)
            | Command::Simulate(f)
            | Command::Verify(f)
            | Command::Heterodyne(f) => f,
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    /// TOML file with any of the options below (flags take precedence).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Modes per signature: `8`, `2,4,8` or the doubling range `8..4096`.
    #[arg(long)]
    pub k: Option<KList>,
    /// Per-mode energy budget E (mean photons).
    #[arg(long)]
    pub energy: Option<f64>,
    /// Mean thermal photon number N.
    #[arg(long)]
    pub noise: Option<f64>,
    /// Detector slack δ (heterodyne: threshold slack).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Separation radius ρ.
    #[arg(long, conflicts_with = "gamma")]
    pub rho: Option<f64>,
    /// Scaling constant γ with ρ² = γ·ln k.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Error level for the converse bound, in (0, 1/4).
    #[arg(long = "delta-k")]
    pub delta_k: Option<f64>,
    /// Bounds at error level 1/k with δ and ρ chosen to meet it.
    #[arg(long)]
    pub sandwich: bool,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Independent random streams the trials are split over.
    #[arg(long)]
    pub chunks: Option<usize>,
    /// Consecutive rejections before greedy packing stops.
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long, value_enum)]
    pub pairs: Option<Pairs>,
    /// Codebook file (written by `pack`, read by `simulate` and `heterodyne`).
    #[arg(long)]
    pub code: Option<PathBuf>,
    /// Output file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Pairs {
    #[default]
    Worst,
    All,
}

/// List of mode counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KList(pub Vec<usize>);

impl FromStr for KList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |part: &str| format!("invalid k `{part}`: expected a positive integer");
        let parse = |part: &str| -> Result<usize, String> {
            match part.trim().parse::<usize>() {
                Ok(0) | Err(_) => Err(bad(part)),
                Ok(v) => Ok(v),
            }
        };
        if let Some((a, b)) = s.split_once("..") {
            let (lo, hi) = (parse(a)?, parse(b)?);
            if lo > hi {
                return Err(format!("empty k range `{s}`"));
            }
            let mut ks = Vec::new();
            let mut k = lo;
            while k <= hi {
                ks.push(k);
                k *= 2;
            }
            return Ok(KList(ks));
        }
        s.split(',').map(parse).collect::<Result<_, _>>().map(KList)
    }
}

impl fmt::Display for KList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl<'de> Deserialize<'de> for KList {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            One(usize),
            Many(Vec<usize>),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::One(k) => format!("{k}").parse(),
            Raw::Many(ks) => {
                let parts: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
                parts.join(",").parse()
            }
            Raw::Text(s) => s.parse(),
        }
        .map_err(serde::de::Error::custom)
    }
}

/// Keys accepted in a TOML config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub k: Option<KList>,
    pub energy: Option<f64>,
    pub noise: Option<f64>,
    pub delta: Option<f64>,
    pub rho: Option<f64>,
    pub gamma: Option<f64>,
    pub delta_k: Option<f64>,
    pub sandwich: Option<bool>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub chunks: Option<usize>,
    pub budget: Option<usize>,
    pub pairs: Option<Pairs>,
    pub code: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Separation {
    Rho(f64),
    Gamma(f64),
}

impl Separation {
    /// `ρ` itself, or `√(γ·ln k)`.
    pub fn rho_for(&self, k: usize) -> f64 {
        match *self {
            Separation::Rho(r) => r,
            Separation::Gamma(g) => (g * (k as f64).ln()).sqrt(),
        }
    }
}

/// Fully resolved parameters of one invocation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Params {
    pub k: Vec<usize>,
    pub energy: f64,
    pub noise: f64,
    pub delta: f64,
    pub separation: Option<Separation>,
    pub delta_k: Option<f64>,
    pub sandwich: bool,
    pub trials: u64,
    pub seed: u64,
    pub chunks: usize,
    pub budget: usize,
    pub pairs: Pairs,
    pub code: Option<PathBuf>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            k: vec![DEFAULT_K],
            energy: DEFAULT_ENERGY,
            noise: DEFAULT_NOISE,
            delta: DEFAULT_DELTA,
            separation: None,
            delta_k: None,
            sandwich: false,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            chunks: coherent_id::montecarlo::DEFAULT_CHUNKS,
            budget: coherent_id::geometry::DEFAULT_REJECTION_BUDGET,
            pairs: Pairs::Worst,
            code: None,
            out: None,
            format: Format::Csv,
        }
    }
}

fn pick_separation(
    rho: Option<f64>,
    gamma: Option<f64>,
    source: &str,
) -> Result<Option<Separation>, CliError> {
    match (rho, gamma) {
        (Some(_), Some(_)) => Err(CliError::Validation(format!(
            "{source} sets both rho and gamma; choose one"
        ))),
        (Some(r), None) => Ok(Some(Separation::Rho(r))),
        (None, Some(g)) => Ok(Some(Separation::Gamma(g))),
        (None, None) => Ok(None),
    }
}

impl Params {
    pub fn resolve(flags: &Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        Self::merge(flags, &file)
    }

    pub fn merge(flags: &Flags, file: &FileConfig) -> Result<Self, CliError> {
        let d = Params::default();
        let separation = match pick_separation(flags.rho, flags.gamma, "the command line")? {
            Some(s) => Some(s),
            None => pick_separation(file.rho, file.gamma, "the config file")?,
        };
        let p = Params {
            k: flags
                .k
                .clone()
                .or_else(|| file.k.clone())
                .map_or(d.k, |l| l.0),
            energy: flags.energy.or(file.energy).unwrap_or(d.energy),
            noise: flags.noise.or(file.noise).unwrap_or(d.noise),
            delta: flags.delta.or(file.delta).unwrap_or(d.delta),
            separation,
            delta_k: flags.delta_k.or(file.delta_k),
            sandwich: flags.sandwich || file.sandwich.unwrap_or(false),
            trials: flags.trials.or(file.trials).unwrap_or(d.trials),
            seed: flags.seed.or(file.seed).unwrap_or(d.seed),
            chunks: flags.chunks.or(file.chunks).unwrap_or(d.chunks),
            budget: flags.budget.or(file.budget).unwrap_or(d.budget),
            pairs: flags.pairs.or(file.pairs).unwrap_or(d.pairs),
            code: flags.code.clone().or_else(|| file.code.clone()),
            out: flags.out.clone().or_else(|| file.out.clone()),
            format: flags.format.or(file.format).unwrap_or(d.format),
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<(), CliError> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(CliError::Validation(format!(
                    "--{name} must be a finite positive number, got {v}"
                )))
            }
        };
        if self.k.is_empty() {
            return Err(CliError::Validation("--k needs at least one value".into()));
        }
        positive("energy", self.energy)?;
        positive("delta", self.delta)?;
        if !(self.noise.is_finite() && self.noise >= 0.0) {
            return Err(CliError::Validation(format!(
                "--noise must be finite and >= 0, got {}",
                self.noise
            )));
        }
        match self.separation {
            Some(Separation::Rho(r)) => positive("rho", r)?,
            Some(Separation::Gamma(g)) => positive("gamma", g)?,
            None => {}
        }
        if self.trials == 0 {
            return Err(CliError::Validation("--trials must be at least 1".into()));
        }
        if self.chunks == 0 {
            return Err(CliError::Validation("--chunks must be at least 1".into()));
        }
        Ok(())
    }

    /// SHA-256 over the canonical JSON of the command and its parameters,
    /// excluding where and how the output is written.
    pub fn config_hash(&self, command: &str) -> String {
        let canonical = serde_json::to_string(&(command, self)).expect("params serialize");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_list_forms() {
        assert_eq!("8".parse::<KList>().unwrap().0, vec![8]);
        assert_eq!("2, 4,8".parse::<KList>().unwrap().0, vec![2, 4, 8]);
        assert_eq!("8..64".parse::<KList>().unwrap().0, vec![8, 16, 32, 64]);
        assert_eq!("3..20".parse::<KList>().unwrap().0, vec![3, 6, 12]);
        assert!("0".parse::<KList>().is_err());
        assert!("9..4".parse::<KList>().is_err());
        assert!("x".parse::<KList>().is_err());
    }

    #[test]
    fn flags_override_file_override_defaults() {
        let file: FileConfig =
            toml::from_str("k = [2, 4]\nenergy = 2.5\nseed = 9\ngamma = 0.3").unwrap();
        let flags = Flags {
            seed: Some(11),
            rho: Some(0.7),
            ..Flags::default()
        };
        let p = Params::merge(&flags, &file).unwrap();
        assert_eq!(p.k, vec![2, 4]);
        assert_eq!(p.energy, 2.5);
        assert_eq!(p.seed, 11);
        assert_eq!(p.separation, Some(Separation::Rho(0.7)));
        assert_eq!(p.noise, DEFAULT_NOISE);
    }

    #[test]
    fn file_rejects_unknown_and_conflicting_keys() {
        assert!(toml::from_str::<FileConfig>("colour = 1").is_err());
        let file: FileConfig = toml::from_str("rho = 1.0\ngamma = 0.5").unwrap();
        assert!(matches!(
            Params::merge(&Flags::default(), &file),
            Err(CliError::Validation(_))
        ));
        let file: FileConfig = toml::from_str("k = \"8..32\"").unwrap();
        assert_eq!(file.k.unwrap().0, vec![8, 16, 32]);
    }

    #[test]
    fn hash_ignores_output_location() {
        let a = Params::default();
        let b = Params {
            out: Some("x.csv".into()),
            format: Format::Json,
            ..Params::default()
        };
        assert_eq!(a.config_hash("bounds"), b.config_hash("bounds"));
        assert_ne!(a.config_hash("bounds"), a.config_hash("pack"));
        assert_eq!(a.config_hash("bounds").len(), 64);
    }

    #[test]
    fn invalid_values_are_rejected() {
        let bad = Flags {
            energy: Some(-1.0),
            ..Flags::default()
        };
        assert!(Params::merge(&bad, &FileConfig::default()).is_err());
        let bad = Flags {
            trials: Some(0),
            ..Flags::default()
        };
        assert!(Params::merge(&bad, &FileConfig::default()).is_err());
    }
}
