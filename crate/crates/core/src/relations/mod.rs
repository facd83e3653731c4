//! Verifiers for the local relations: divisibility and tame lifts, the
//! comparison of level groups, conductors and fiber constants, norm
//! relations, the stabilizer property and ordinary chains.

mod chain;
mod closed;
mod comparison;
mod conductor;
mod hensel;
mod levels;
mod norm;
mod stabilizer;
mod symmetric;
mod tame;

pub use chain::{ordinary_chain_check, ordinary_quadratic, ChainReport};
pub use closed::{closed_cmi, closed_conductor, ggp_gap};
pub use comparison::{comparison_check, lift_transversal, ComparisonReport, LiftedClass};
pub use conductor::{
    c_mi, conductor, conductor_within, target_torus, CmiReport, ConductorReport, TargetTorus,
};
pub use hensel::{HenselLift, HenselLifter};
pub use levels::{level_count, level_membership, n_level_reps, LevelCountReport, Side};
pub use norm::{norm_relation_check, NormReport};
pub use stabilizer::{
    borel_intersection_check, stabilizer_check, BorelIntersectionReport, StabilizerReport,
};
pub use symmetric::{symmetric_pair_check, SymmetricPairReport};
pub use tame::{
    coefficients, divisibility_check, free_action_check, tame_lift, DivisibilityReport,
    FreeActionReport, ProbeDivisibility, TameLift,
};

use thiserror::Error;

use crate::arith::ArithError;
use crate::cosets::CosetError;
use crate::groups::GroupError;
use crate::hecke::HeckeError;

#[derive(Debug, Error)]
pub enum RelationError {
    #[error("scenario `{0}` has no chart for the opposite Borel")]
    NotSpherical(String),
    #[error("Newton iteration did not converge (Jacobian rank {rank} of {dim} mod p)")]
    NoConvergence { rank: usize, dim: usize },
    #[error("stabilizer of size {0} does not divide q - 1")]
    StabilizerNotDividing(usize),
    #[error("subgroup generation inconclusive up to depth {0}")]
    PrecisionExhausted(i64),
    #[error("unsupported for this scenario: {0}")]
    Unsupported(String),
    #[error("enumeration of {0} elements exceeds the budget {1}")]
    Budget(u128, usize),
    #[error("synthetic relation is unsatisfiable: {0}")]
    RelationUnsatisfiable(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
}
