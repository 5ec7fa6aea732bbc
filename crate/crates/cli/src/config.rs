use std::fmt;
use std::path::PathBuf;

use chargeplan::io::MatrixFormat;
use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Strict,
    Fixpoint,
}

impl Mode {
    pub fn solver_name(self) -> &'static str {
        match self {
            Mode::Strict => "strict",
            Mode::Fixpoint => "fixpoint",
        }
    }
}

/// Every flag the tool knows. Commands declare which of these they accept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    Mode,
    Delta,
    InitialCharge,
    Format,
    Seed,
    Instances,
    Budget,
    Witnesses,
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Flag::Mode => "--mode",
            Flag::Delta => "--delta",
            Flag::InitialCharge => "--initial-charge",
            Flag::Format => "--format",
            Flag::Seed => "--seed",
            Flag::Instances => "--instances",
            Flag::Budget => "--budget",
            Flag::Witnesses => "--witnesses",
        };
        f.write_str(name)
    }
}

/// Minimum-cost charging plans on battery-constrained graphs.
///
/// Commands: mfc, mic, mcp, mcp-bounded, add-source, with-initial-charges,
/// apsp-via-mcp, oracle, validate, selftest.
#[derive(Debug, Parser)]
#[command(name = "chargeplan", version)]
pub struct RunConfig {
    /// Command to run.
    pub command: String,

    /// Graph file (`validate` also takes a plan file).
    pub inputs: Vec<PathBuf>,

    /// Energetic solver: `strict` rejects graphs whose charges keep
    /// improving after n rounds, `fixpoint` iterates until nothing changes.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,

    /// Maximum number of recharges.
    #[arg(long)]
    pub delta: Option<usize>,

    /// A charge (`mfc`, `mic`, `validate`) or `vertex:charge` pairs separated
    /// by commas (`add-source`, `with-initial-charges`).
    #[arg(long, allow_hyphen_values = true)]
    pub initial_charge: Option<String>,

    /// Matrix output: `tsv` or `text` (one `i j value` line per entry).
    #[arg(long)]
    pub format: Option<MatrixFormat>,

    /// Random seed for `selftest`.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Number of random instances for `selftest`.
    #[arg(long)]
    pub instances: Option<usize>,

    /// Maximum number of states the brute-force oracle may explore.
    #[arg(long)]
    pub budget: Option<u128>,

    /// Write per-pair plan witnesses (`s t cost x:amount ...`) to this file.
    #[arg(long)]
    pub witnesses: Option<PathBuf>,
}

impl RunConfig {
    pub fn given_flags(&self) -> Vec<Flag> {
        let set = [
            (Flag::Mode, self.mode.is_some()),
            (Flag::Delta, self.delta.is_some()),
            (Flag::InitialCharge, self.initial_charge.is_some()),
            (Flag::Format, self.format.is_some()),
            (Flag::Seed, self.seed.is_some()),
            (Flag::Instances, self.instances.is_some()),
            (Flag::Budget, self.budget.is_some()),
            (Flag::Witnesses, self.witnesses.is_some()),
        ];
        set.into_iter().filter(|(_, given)| *given).map(|(f, _)| f).collect()
    }

    pub fn mode(&self) -> Mode {
        self.mode.unwrap_or(Mode::Strict)
    }

    pub fn format(&self) -> MatrixFormat {
        self.format.unwrap_or(MatrixFormat::Tsv)
    }
}
