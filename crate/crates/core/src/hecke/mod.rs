//! Spherical Hecke algebra: Satake transform, weights and Hecke polynomials.

mod polynomial;
mod satake;
mod seed;
mod weights;
mod weyl;

pub use polynomial::{character, coefficient_images, hecke_polynomial, HeckePolynomial};
pub use satake::{DominantSum, HeckeElement, Satake, SatakeMethod, WeylInvariantPoly};
pub use seed::{
    apply_hep, box_cocharacters, default_probes, seed_certificate, seed_direct,
    ConstantTermCertificate, ProbeResult,
};
pub use weights::{
    dimension, dominant_multiplicities, exterior_powers, saturated, weight_multiplicities, Weights,
};
pub use weyl::RootSystem;

use thiserror::Error;

use crate::cosets::CosetError;

#[derive(Debug, Error)]
pub enum HeckeError {
    #[error("cocharacter {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("triangular Satake system is singular")]
    SingularSystem,
    #[error("inconsistent Satake data: {0}")]
    Inconsistent(String),
    #[error("coefficient {0} is not rational at this q")]
    Irrational(String),
    #[error(transparent)]
    Coset(#[from] CosetError),
}
