//! Command-line flags and the flat TOML config file share one set of keys.
//! Flags override the file; anything left unset falls back to a default.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::CliError;

#[derive(Parser, Debug, Clone, PartialEq)]
#[command(name = "thermosup", version, about = "Thermalisation under quantum control of which bath, or which temperature")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Command {
    /// Gibbs weights, partition function and state.
    Gibbs(Params),
    /// Probe thermalised by one of two baths chosen by a control qubit.
    Twobath(Params),
    /// Probe thermalised by one bath in a superposition of purifications.
    Onebath(Params),
    /// Collisional thermalisation curve and visibilities.
    Collide(Params),
    /// Control visibility over a (T0, T1) grid.
    Heatmap(Params),
    /// Closed-form and searched maximum visibilities.
    Maxvis(Params),
}

impl Command {
    pub fn experiment(&self) -> Experiment {
        match self {
            Command::Gibbs(_) => Experiment::Gibbs,
            Command::Twobath(_) => Experiment::TwoBath,
            Command::Onebath(_) => Experiment::OneBath,
            Command::Collide(_) => Experiment::Collide,
            Command::Heatmap(_) => Experiment::Heatmap,
            Command::Maxvis(_) => Experiment::MaxVis,
        }
    }

    pub fn params(&self) -> &Params {
        match self {
            Command::Gibbs(p)
            | Command::Twobath(p)
            | Command::Onebath(p)
            | Command::Collide(p)
            | Command::Heatmap(p)
            | Command::Maxvis(p) => p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Gibbs,
    TwoBath,
    OneBath,
    Collide,
    Heatmap,
    MaxVis,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Gibbs => "gibbs",
            Experiment::TwoBath => "twobath",
            Experiment::OneBath => "onebath",
            Experiment::Collide => "collide",
            Experiment::Heatmap => "heatmap",
            Experiment::MaxVis => "maxvis",
        }
    }
}

#[derive(ValueEnum, Deserialize, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Deserialize, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioArg {
    Plain,
    Twobath,
    Onebath,
}

#[derive(ValueEnum, Deserialize, Serialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum EngineArg {
    Compact,
    Naive,
}

/// Temperature literal kept as text until validation; config files may give
/// it as a number or a string such as `"inf"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Literal(pub String);

impl FromStr for Literal {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Literal(s.to_string()))
    }
}

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Float(f64),
            Text(String),
        }
        Ok(Literal(match Raw::deserialize(d)? {
            Raw::Int(i) => i.to_string(),
            Raw::Float(f) => f.to_string(),
            Raw::Text(s) => s,
        }))
    }
}

#[derive(Args, Deserialize, Debug, Clone, Default, PartialEq)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Flat TOML file with any of the keys below.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Temperature for single-bath experiments (`inf` and `0` allowed).
    #[arg(long)]
    pub t: Option<Literal>,
    #[arg(long)]
    pub t0: Option<Literal>,
    #[arg(long)]
    pub t1: Option<Literal>,
    /// Collision interaction strength in [0, 1].
    #[arg(long)]
    pub eta: Option<f64>,
    /// Number of collisions per bath.
    #[arg(long)]
    pub m: Option<usize>,
    /// Control measurement phase (two baths).
    #[arg(long)]
    pub phi: Option<f64>,
    /// Control measurement phase (one bath).
    #[arg(long)]
    pub phi_c: Option<f64>,
    /// Purification phases of the two one-bath branches.
    #[arg(long)]
    pub phi0: Option<f64>,
    #[arg(long)]
    pub phi1: Option<f64>,
    /// ground | excited | plus | mixed | diag:p0,p1,.. | ket:a0,a1,..
    #[arg(long)]
    pub probe: Option<String>,
    /// Energy levels, comma separated, non-decreasing.
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
    pub energies: Option<Vec<f64>>,
    /// Qubit gap when no energies are given.
    #[arg(long)]
    pub gap: Option<f64>,
    #[arg(long, value_enum)]
    pub scenario: Option<ScenarioArg>,
    #[arg(long, value_enum)]
    pub engine: Option<EngineArg>,
    /// Grid points per temperature axis.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Trace-distance threshold for the collision count.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Haar samples for the visibility search.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Kraus-index unitaries: identity | x | cycle | random | random:SEED
    #[arg(long)]
    pub u0: Option<String>,
    #[arg(long)]
    pub u1: Option<String>,
}

macro_rules! overlay {
    ($flags:expr, $file:expr, $($f:ident),* $(,)?) => {
        Params { config: $flags.config.clone(), $($f: $flags.$f.clone().or_else(|| $file.$f.clone())),* }
    };
}

impl Params {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.message().to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Self::from_toml_str(&text)
    }

    /// Values set in `self` win over those in `file`.
    pub fn overlay(&self, file: &Params) -> Params {
        overlay!(
            self, file, out, seed, format, t, t0, t1, eta, m, phi, phi_c, phi0, phi1, probe, energies, gap, scenario,
            engine, grid, t_min, t_max, epsilon, trials, u0, u1,
        )
    }
}

/// A subcommand with its flags merged over its config file.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub params: Params,
}

impl ExperimentConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let flags = cli.command.params();
        let params = match &flags.config {
            Some(path) => flags.overlay(&Params::from_file(path)?),
            None => flags.clone(),
        };
        Ok(Self { experiment: cli.command.experiment(), params })
    }
}
