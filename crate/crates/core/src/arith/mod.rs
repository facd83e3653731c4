//! Exact arithmetic for `Q_p`, its unramified quadratic extension, truncated
//! residue rings and Laurent polynomials in `q^(1/2)`.

mod exact;
mod laurent;
mod matrix;
mod pmat;
mod quad;
pub mod residue;
pub mod ring;

pub use exact::{rational_valuation, ExactScalar};
pub use laurent::{LaurentHalfQ, SurdValue};
pub use matrix::{Matrix, SmithForm};
pub use pmat::{PMat, PRing};
pub use quad::QuadExt;
pub use residue::{teichmuller, teichmuller_quad, QuadResidue, ResidueElement};
pub use ring::{DualRing, Ring};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("negative valuation: element is not integral")]
    NegativeValuation,
    #[error("zero input where a unit was required")]
    ZeroInput,
    #[error("element is not invertible in the residue ring")]
    NotInvertible,
    #[error("singular matrix")]
    Singular,
    #[error("precision {n} too large for p = {p}")]
    PrecisionTooLarge { p: u64, n: u32 },
    #[error("working precision exhausted")]
    PrecisionExhausted,
}

/// Field-like operations shared by the exact scalar types.
pub trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn valuation(&self) -> Option<i64>;

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
}

/// Valuation of an exact or extension scalar.
pub fn valuation<T: Scalar>(x: &T) -> Option<i64> {
    x.valuation()
}
