//! Filtrations over the residue field: degree, scalar product, the action
//! on lattices, reduction, and sweeps certifying property (A) on explicit
//! regions.

mod counter;
mod families;
mod field;
mod filtration;
mod lattice;
mod subspace;
mod unitary;

pub use counter::{
    counterexample_search, diagonal_swap_transfer, involution_transfer_check, CounterRow,
    CounterexampleReport, DiagonalBase, TransferReport,
};
pub use families::{family_check, family_check_at, lie_algebra, FamilyReport, PairModel};
pub use field::{Fp, Fq2, Fq2Elt};
pub use filtration::{
    common_splitting, direct_sum, scalar_product, scalar_product_graded, scalar_product_split,
    Filtration,
};
pub use lattice::{lattice_action, lattice_span, reduction, same_lattice, SplitFiltration};
pub use subspace::{all_vectors, Subspace};
pub use unitary::{
    enumerate_h_filtrations, property_a_check, DegreeRow, HFiltration, MainExample, PropertyAReport,
};

use thiserror::Error;

use crate::groups::GroupError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FiltrationError {
    #[error("steps are not decreasing: {0}")]
    NotDecreasing(String),
    #[error("filtrations live on different spaces")]
    AmbientMismatch,
    #[error("filtrations are not split by the standard basis")]
    NotSplit,
    #[error("generators do not span a lattice")]
    NotALattice,
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("invalid cocharacter: {0}")]
    InvalidCocharacter(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}
