use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{ArithError, ResidueElement, Scalar};

/// An element of Q with a distinguished prime: `unit * p^exp`, where `unit`
/// is a rational with numerator and denominator prime to `p`.
#[derive(Clone, Debug)]
pub struct ExactScalar {
    p: u64,
    unit: BigRational,
    exp: i64,
}

/// Strips all factors of `p` from `x`, returning the count.
fn strip(x: &mut BigInt, p: &BigInt) -> i64 {
    let mut k = 0;
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        *x = q;
        k += 1;
    }
}

impl ExactScalar {
    pub fn zero(p: u64) -> Self {
        ExactScalar {
            p,
            unit: BigRational::zero(),
            exp: 0,
        }
    }

    pub fn one(p: u64) -> Self {
        Self::from_int(p, 1)
    }

    pub fn from_int(p: u64, n: i64) -> Self {
        Self::from_rational(p, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(p: u64, n: BigInt) -> Self {
        Self::from_rational(p, BigRational::from_integer(n))
    }

    pub fn from_frac(p: u64, num: i64, den: i64) -> Self {
        Self::from_rational(p, BigRational::new(num.into(), den.into()))
    }

    pub fn from_rational(p: u64, r: BigRational) -> Self {
        if r.is_zero() {
            return Self::zero(p);
        }
        let pb = BigInt::from(p);
        let mut num = r.numer().clone();
        let mut den = r.denom().clone();
        let e = strip(&mut num, &pb) - strip(&mut den, &pb);
        ExactScalar {
            p,
            unit: BigRational::new(num, den),
            exp: e,
        }
    }

    /// `p^k`.
    pub fn p_power(p: u64, k: i64) -> Self {
        ExactScalar {
            p,
            unit: BigRational::one(),
            exp: k,
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn unit_part(&self) -> &BigRational {
        &self.unit
    }

    pub fn p_exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// p-adic valuation; `None` stands for +infinity.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp)
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let pk = BigInt::from(self.p).pow(self.exp.unsigned_abs() as u32);
        if self.exp >= 0 {
            &self.unit * BigRational::from_integer(pk)
        } else {
            &self.unit / BigRational::from_integer(pk)
        }
    }

    pub fn is_integral(&self) -> bool {
        self.valuation().map_or(true, |v| v >= 0)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(ExactScalar {
            p: self.p,
            unit: self.unit.recip(),
            exp: -self.exp,
        })
    }

    /// Image in `O/p^n`.
    pub fn reduce(&self, n: u32) -> Result<ResidueElement, ArithError> {
        if self.exp < 0 && !self.is_zero() {
            return Err(ArithError::NegativeValuation);
        }
        let m = ResidueElement::modulus_for(self.p, n)?;
        if self.is_zero() || self.exp >= n as i64 {
            return ResidueElement::new(self.p, n, 0);
        }
        let mb = BigInt::from(m);
        let num = self.unit.numer().mod_floor(&mb);
        let den = self.unit.denom().mod_floor(&mb);
        let den_inv =
            super::residue::inv_mod(den.to_u64().unwrap(), m).ok_or(ArithError::NotInvertible)?;
        let pk = BigInt::from(self.p).pow(self.exp as u32).mod_floor(&mb);
        let v = (num * BigInt::from(den_inv) % &mb) * pk % &mb;
        ResidueElement::new(self.p, n, v.to_u64().unwrap())
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        (self.is_zero() && other.is_zero()) || (self.exp == other.exp && self.unit == other.unit)
    }
}
impl Eq for ExactScalar {}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.to_rational().cmp(&other.to_rational()))
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_rational())
    }
}

impl Scalar for ExactScalar {
    fn zero_like(&self) -> Self {
        Self::zero(self.p)
    }
    fn one_like(&self) -> Self {
        Self::one(self.p)
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        // Bring both to the smaller exponent, add units, renormalize.
        let (lo, hi) = if self.exp <= o.exp {
            (self, o)
        } else {
            (o, self)
        };
        let shift = BigInt::from(self.p).pow((hi.exp - lo.exp) as u32);
        let sum = &lo.unit + &hi.unit * BigRational::from_integer(shift);
        let mut r = ExactScalar::from_rational(self.p, sum);
        if !r.is_zero() {
            r.exp += lo.exp;
        }
        r
    }
    fn neg(&self) -> Self {
        ExactScalar {
            p: self.p,
            unit: -&self.unit,
            exp: self.exp,
        }
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        ExactScalar {
            p: self.p,
            unit: &self.unit * &o.unit,
            exp: self.exp + o.exp,
        }
    }
    fn inv(&self) -> Option<Self> {
        ExactScalar::inv(self)
    }
    fn valuation(&self) -> Option<i64> {
        ExactScalar::valuation(self)
    }
}

/// Convenience: valuation of a rational at `p`.
pub fn rational_valuation(r: &BigRational, p: u64) -> Option<i64> {
    ExactScalar::from_rational(p, r.clone()).valuation()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        assert_eq!(ExactScalar::from_int(5, 75).valuation(), Some(2));
        assert_eq!(ExactScalar::zero(5).valuation(), None);
        assert_eq!(ExactScalar::from_frac(5, 1, 5).valuation(), Some(-1));
    }

    #[test]
    fn add_cancels_to_zero() {
        let a = ExactScalar::from_frac(3, 2, 9);
        assert!(a.add(&a.neg()).is_zero());
        let b = ExactScalar::from_int(3, 1).add(&ExactScalar::from_int(3, 2));
        assert_eq!(b.valuation(), Some(1));
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(ExactScalar::from_int(3, 7).reduce(2).unwrap().value(), 7);
        assert_eq!(ExactScalar::from_int(3, 9).reduce(2).unwrap().value(), 0);
        assert!(matches!(
            ExactScalar::from_frac(3, 1, 3).reduce(2),
            Err(ArithError::NegativeValuation)
        ));
        // 1/2 mod 9 = 5
        assert_eq!(
            ExactScalar::from_frac(3, 1, 2).reduce(2).unwrap().value(),
            5
        );
    }
}
