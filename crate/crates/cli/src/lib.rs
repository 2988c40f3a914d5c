//! Command-line driver for `skewpoisson`.
//!
//! Every command produces a [`Report`]; `main` only renders it and exits with
//! [`Report::exit_code`].

pub mod commands;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use commands::run;
pub use report::{exit, Report, Stage, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(
    name = "skewpoisson",
    version,
    about = "Poisson brackets on trace spaces of twisted group algebras"
)]
pub struct Cli {
    /// Scenario file (JSON). The bundled scenario is used when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Degree bound: replaces the obstruction ladder, or the verification degree.
    #[arg(long, global = true)]
    pub degree: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for the self-test.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Group order, elements, conjugacy classes and centralizers.
    Group,
    /// Generator invariance, Molien series against generator spans, relation residuals.
    Invariants,
    /// Poisson bracket of two polynomials.
    Bracket { p: String, q: String },
    /// Trace-space components of a skew element given as `POLY@WORD` terms.
    Project {
        #[arg(required = true)]
        terms: Vec<String>,
        /// Restrict to the class of this group word.
        #[arg(long)]
        class: Option<String>,
    },
    /// Decides whether the bracket extends for the configured problem.
    Obstruction,
    /// Randomized checks of the algebraic laws.
    Selftest {
        #[arg(long, default_value_t = skewpoisson::selftest::DEFAULT_CASES)]
        cases: usize,
        #[arg(long, hide = true)]
        corrupt_table: bool,
    },
}

impl Cli {
    pub fn render(&self, report: &Report) -> String {
        match self.format {
            Format::Text => report.to_text(),
            Format::Machine => report.to_machine(),
        }
    }
}
