//! Verification runs: configuration, per-check records and the JSON report.
//!
//! Each check maps a [`Config`] to one or more [`Record`]s. Computations
//! that hit a budget or cannot be decided yield `inconclusive` records;
//! invalid configurations are errors.

mod checks;
mod config;
mod plan;
mod report;

use thiserror::Error;

pub use checks::{family, FAMILIES};
pub use config::Config;
pub use plan::{acceptance_plan, run_all, Step};
pub use report::{Record, Report, Status, SATAKE_NORMALIZATION, SCHEMA_VERSION};

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    SeedCheck,
    HeckePoly,
    Satake,
    Tame,
    Norm,
    Comparison,
    Cmi,
    Conductor,
    Stabilizer,
    SymmetricPair,
    OrdinaryChain,
    Filtration,
    PropertyA,
    Counterexample,
}

impl Check {
    pub const ALL: [Check; 14] = [
        Check::SeedCheck,
        Check::HeckePoly,
        Check::Satake,
        Check::Tame,
        Check::Norm,
        Check::Comparison,
        Check::Cmi,
        Check::Conductor,
        Check::Stabilizer,
        Check::SymmetricPair,
        Check::OrdinaryChain,
        Check::Filtration,
        Check::PropertyA,
        Check::Counterexample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::SeedCheck => "seed-check",
            Check::HeckePoly => "hecke-poly",
            Check::Satake => "satake",
            Check::Tame => "tame",
            Check::Norm => "norm",
            Check::Comparison => "comparison",
            Check::Cmi => "cmi",
            Check::Conductor => "conductor",
            Check::Stabilizer => "stabilizer",
            Check::SymmetricPair => "symmetric-pair",
            Check::OrdinaryChain => "ordinary-chain",
            Check::Filtration => "filtration",
            Check::PropertyA => "property-a",
            Check::Counterexample => "counterexample",
        }
    }

    pub fn from_name(s: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Claim checked by the records of this check.
    pub fn anchor(self) -> &'static str {
        match self {
            Check::SeedCheck => "seed-relation",
            Check::HeckePoly => "hecke-polynomial",
            Check::Satake => "satake-round-trip",
            Check::Tame => "tame-relation",
            Check::Norm => "norm-relation",
            Check::Comparison => "coset-comparison",
            Check::Cmi => "norm-fiber-constant",
            Check::Conductor => "conductor-formula",
            Check::Stabilizer => "stabilizer-in-hyperspecial",
            Check::SymmetricPair => "symmetric-pair-factorization",
            Check::OrdinaryChain => "ordinary-chain",
            Check::Filtration => "scalar-product",
            Check::PropertyA => "property-a",
            Check::Counterexample => "diagonal-counterexample",
        }
    }

    /// Checks whose falsification makes this one meaningless.
    pub fn prerequisites(self) -> &'static [Check] {
        match self {
            Check::HeckePoly => &[Check::Satake],
            Check::SeedCheck => &[Check::Satake, Check::HeckePoly],
            Check::Tame => &[Check::SeedCheck],
            Check::Cmi => &[Check::Comparison],
            Check::Norm => &[Check::SeedCheck, Check::Comparison, Check::Cmi],
            Check::PropertyA | Check::Counterexample => &[Check::Filtration],
            _ => &[],
        }
    }

    pub fn run(self, cfg: &Config) -> Result<Vec<Record>, SuiteError> {
        cfg.validate()?;
        match self {
            Check::SeedCheck => checks::seed_check(cfg),
            Check::HeckePoly => checks::hecke_poly(cfg),
            Check::Satake => checks::satake(cfg),
            Check::Tame => checks::tame(cfg),
            Check::Norm => checks::norm(cfg),
            Check::Comparison => checks::comparison(cfg),
            Check::Cmi => checks::cmi(cfg),
            Check::Conductor => checks::conductor(cfg),
            Check::Stabilizer => checks::stabilizer(cfg),
            Check::SymmetricPair => checks::symmetric_pair(cfg),
            Check::OrdinaryChain => checks::ordinary_chain(cfg),
            Check::Filtration => checks::filtration(cfg),
            Check::PropertyA => checks::property_a(cfg),
            Check::Counterexample => checks::counterexample(cfg),
        }
    }
}

/// One check as a full report.
pub fn run_check(check: Check, cfg: &Config) -> Result<Report, SuiteError> {
    let records = check.run(cfg)?;
    Ok(Report::new(check.name(), cfg.resolved(), records))
}
