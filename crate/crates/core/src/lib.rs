//! Verification engine for the local group theory behind tame and norm
//! relations: Hecke polynomials, U-operators, coset windows, level groups
//! and filtration calculus over p-adic matrix groups.

pub mod arith;
pub mod cosets;
pub mod filtrations;
pub mod groups;
pub mod hecke;
pub mod relations;
pub mod suite;
