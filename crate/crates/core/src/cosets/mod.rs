//! Finite windows of `Z[G/K]`: canonical lattice keys, left translation,
//! the `U_mu` operator and the right Hecke action.

mod key;
mod ops;
mod vector;

pub use key::{canonicalize, CosetKey};
pub use ops::{
    closure, double_coset, iwahori_generators, iwahori_orbit, n_quotient, u_operator,
    HeckeDecomposer,
};
pub use vector::CosetVector;

use thiserror::Error;

use crate::arith::ArithError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CosetError {
    #[error("representative is not in B(F)")]
    NotTriangular,
    #[error("expansion exceeded the budget of {0} cosets")]
    Budget(usize),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
