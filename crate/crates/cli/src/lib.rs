//! Scenario-driven sweeps over the `relent` library with CSV or JSON-lines output.

pub mod config;
pub mod error;
pub mod run;
pub mod table;

use std::fs::File;
use std::io::{self, BufWriter};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use relent::purification::Outcome;

use crate::config::{Grid, Param, Protocol, Scenario};
pub use crate::error::CliError;
use crate::table::{Format, Table};

#[derive(Debug, Parser)]
#[command(name = "relent", version, about = "Entangled photons between moving frames")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Polarization error of one photon over (θ, φ).
    SinglePhoton,
    /// Polarization error of a back-to-back type I pair over θ.
    Pair,
    /// Negativity of the diffracted pair over beam axis α and β.
    Negativity,
    /// Purification rounds for a diffracted pair.
    Purify,
    /// Link attenuation and total photons to reach the target purity.
    Budget,
    /// Frame comparison of type I/II/III states.
    LiCheck,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Scenario file (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub grid_theta: Option<usize>,
    #[arg(long, global = true)]
    pub grid_phi: Option<usize>,
    /// Accepted for forward compatibility; every computation is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Exit with status 4 when purification does not reach the target.
    #[arg(long, global = true)]
    pub strict: bool,
    #[arg(long, global = true, value_enum)]
    pub protocol: Option<Protocol>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    #[arg(long, global = true)]
    pub phi: Option<f64>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub sigma: Option<f64>,
    #[arg(long, global = true)]
    pub target_purity: Option<f64>,
    #[arg(long, global = true)]
    pub compensate_phases: bool,
}

impl GlobalArgs {
    /// Config file with command-line overrides applied.
    pub fn scenario(&self) -> Result<Scenario, CliError> {
        let mut s = match &self.config {
            Some(path) => Scenario::load(path)?,
            None => Scenario::default(),
        };
        if self.protocol.is_some() {
            s.protocol = self.protocol;
        }
        for (slot, flag) in
            [(&mut s.beta, self.beta), (&mut s.theta, self.theta), (&mut s.phi, self.phi), (&mut s.alpha, self.alpha)]
        {
            if let Some(v) = flag {
                *slot = Some(Param::Value(v));
            }
        }
        s.sigma = self.sigma.or(s.sigma);
        s.target_purity = self.target_purity.or(s.target_purity);
        s.compensate_phases |= self.compensate_phases;
        if self.grid_theta.is_some() || self.grid_phi.is_some() {
            let g = s.grid.unwrap_or_default();
            s.grid =
                Some(Grid { n_theta: self.grid_theta.unwrap_or(g.n_theta), n_phi: self.grid_phi.unwrap_or(g.n_phi) });
        }
        Ok(s)
    }
}

/// Runs a subcommand and returns its table; a purification that misses its
/// target is an error only under `strict`.
pub fn execute(command: &Command, scenario: &Scenario, strict: bool) -> Result<Table, CliError> {
    let check = |table: Table, outcome: Outcome| {
        if strict && outcome != Outcome::Reached {
            Err(CliError::Purification(run::outcome_name(outcome)))
        } else {
            Ok(table)
        }
    };
    match command {
        Command::SinglePhoton => run::single_photon(scenario),
        Command::Pair => run::pair(scenario),
        Command::Negativity => run::negativity_table(scenario),
        Command::Purify => {
            let (table, trace) = run::purify(scenario)?;
            check(table, trace.outcome)
        }
        Command::Budget => {
            let (table, trace) = run::budget(scenario)?;
            check(table, trace.outcome)
        }
        Command::LiCheck => run::li_check(scenario),
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let scenario = cli.global.scenario()?;
    let table = execute(&cli.command, &scenario, cli.global.strict)?;
    match &cli.global.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::config("--out", format!("{}: {e}", path.display())))?;
            table.write(cli.global.format, BufWriter::new(file))
        }
        None => table.write(cli.global.format, BufWriter::new(io::stdout().lock())),
    }
}
