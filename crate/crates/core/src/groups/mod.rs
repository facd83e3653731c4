//! Split matrix groups with root data, the special basis of the orthogonal
//! and unitary example, and the catalog of subgroup scenarios.

mod descriptor;
pub mod lattice;
mod scenario;
mod special;

pub use descriptor::{Block, Descriptor, Family, Root};
pub use scenario::{
    catalog, gsp4_bases, gsp4_e_matrix, inert_u, linear_family, spherical_rank, AbKind, Chart,
    Involution, ReducedChart, Scenario, ScenarioInfo, ScenarioKind, SubgroupModel,
};
pub use special::SpecialBasis;

use thiserror::Error;

use crate::arith::ArithError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("matrix size does not match the group")]
    SizeMismatch,
    #[error("({0}, {1}) is not a root")]
    UnknownRoot(usize, usize),
    #[error("unsupported descriptor: {0}")]
    UnsupportedDescriptor(String),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("bad form data: {0}")]
    BadFormData(String),
    #[error("invalid cocharacter {0:?}")]
    BadCocharacter(Vec<i64>),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
