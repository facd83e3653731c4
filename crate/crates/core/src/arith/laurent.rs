use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A Laurent polynomial in `q^(1/2)` with integer coefficients, tied to a
/// concrete value of `q`. Keys are twice the exponent of `q`.
#[derive(Clone, Debug)]
pub struct LaurentHalfQ {
    q: u64,
    terms: BTreeMap<i64, BigInt>,
}

/// Exact value `rat + surd * sqrt(q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdValue {
    pub rat: BigRational,
    pub surd: BigRational,
}

fn q_pow(q: u64, k: i64) -> BigRational {
    let b = BigInt::from(q).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(b)
    } else {
        BigRational::new(BigInt::one(), b)
    }
}

impl LaurentHalfQ {
    pub fn zero(q: u64) -> Self {
        LaurentHalfQ {
            q,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(q: u64, c: i64) -> Self {
        Self::monomial(q, 0, c)
    }

    /// `c * q^(half_exp / 2)`.
    pub fn monomial(q: u64, half_exp: i64, c: i64) -> Self {
        Self::monomial_big(q, half_exp, BigInt::from(c))
    }

    pub fn monomial_big(q: u64, half_exp: i64, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(half_exp, c);
        }
        LaurentHalfQ { q, terms }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero_formal(&self) -> bool {
        self.terms.is_empty()
    }

    /// Zero as a number at the tied value of `q`.
    pub fn is_zero(&self) -> bool {
        let v = self.eval();
        v.rat.is_zero() && v.surd.is_zero()
    }

    fn insert(&mut self, k: i64, c: BigInt) {
        let e = self.terms.entry(k).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.q, o.q, "mixed q values");
        let mut r = self.clone();
        for (k, v) in &o.terms {
            r.insert(*k, v.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        LaurentHalfQ {
            q: self.q,
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.q, o.q, "mixed q values");
        let mut r = Self::zero(self.q);
        for (k1, v1) in &self.terms {
            for (k2, v2) in &o.terms {
                r.insert(k1 + k2, v1 * v2);
            }
        }
        r
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut r = Self::zero(self.q);
        for (k, v) in &self.terms {
            r.insert(*k, v * c);
        }
        r
    }

    /// Multiplies by `q^(half_exp/2)`.
    pub fn shift(&self, half_exp: i64) -> Self {
        LaurentHalfQ {
            q: self.q,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k + half_exp, v.clone()))
                .collect(),
        }
    }

    /// Exact quotient as Laurent polynomials in `q^(1/2)`, if it exists.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert_eq!(self.q, d.q, "mixed q values");
        let (&dk, dc) = d.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut out = Self::zero(self.q);
        let dmin = *d.terms.keys().next().unwrap();
        while let Some((&rk, rc)) = rem.terms.iter().next_back() {
            let rmin = *rem.terms.keys().next().unwrap();
            if rk - dk < rmin - dmin {
                return None;
            }
            if !(rc % dc).is_zero() {
                return None;
            }
            let t = Self::monomial_big(self.q, rk - dk, rc / dc);
            rem = rem.sub(&t.mul(d));
            out = out.add(&t);
        }
        Some(out)
    }

    /// Exact evaluation as `rat + surd * sqrt(q)`; the surd part is folded
    /// into the rational part when `q` is a perfect square.
    pub fn eval(&self) -> SurdValue {
        let mut rat = BigRational::zero();
        let mut surd = BigRational::zero();
        for (k, v) in &self.terms {
            let c = BigRational::from_integer(v.clone());
            if k.rem_euclid(2) == 0 {
                rat += c * q_pow(self.q, k / 2);
            } else {
                surd += c * q_pow(self.q, (k - 1).div_euclid(2));
            }
        }
        let r = self.q.sqrt();
        if r * r == self.q && !surd.is_zero() {
            rat += surd * BigRational::from_integer(BigInt::from(r));
            surd = BigRational::zero();
        }
        SurdValue { rat, surd }
    }

    /// The value as a rational, if it is one.
    pub fn eval_rational(&self) -> Option<BigRational> {
        let v = self.eval();
        if v.surd.is_zero() {
            Some(v.rat)
        } else {
            None
        }
    }

    /// Whether all exponents are non-positive integers after clearing a
    /// power of `q`, i.e. the element lies in `Z[q^-1]` up to a monomial.
    pub fn has_integer_exponents(&self) -> bool {
        self.terms.keys().all(|k| k % 2 == 0)
    }

    pub fn to_f64(&self) -> f64 {
        let v = self.eval();
        v.rat.to_f64().unwrap_or(f64::NAN)
            + v.surd.to_f64().unwrap_or(f64::NAN) * (self.q as f64).sqrt()
    }
}

impl PartialEq for LaurentHalfQ {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.sub(other).is_zero()
    }
}

impl fmt::Display for LaurentHalfQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, v) in self.terms.iter().rev() {
            let sign = if v.is_negative() { "-" } else { "+" };
            if first {
                if v.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            let a = v.abs();
            let exp = if k % 2 == 0 {
                format!("{}", k / 2)
            } else {
                format!("{}/2", k)
            };
            match (*k, a.is_one()) {
                (0, _) => write!(f, "{}", a)?,
                (_, true) => write!(f, "q^{}", exp)?,
                _ => write!(f, "{}·q^{}", a, exp)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let h = LaurentHalfQ::monomial(3, 1, 1);
        assert_eq!(
            h.mul(&h).eval_rational().unwrap(),
            BigRational::from_integer(3.into())
        );
        let inv = LaurentHalfQ::monomial(2, -2, 1);
        assert_eq!(
            inv.eval_rational().unwrap(),
            BigRational::new(1.into(), 2.into())
        );
        let f = LaurentHalfQ::monomial(3, 2, 2).add(&LaurentHalfQ::constant(3, -1));
        assert_eq!(
            f.eval_rational().unwrap(),
            BigRational::from_integer(5.into())
        );
    }

    #[test]
    fn half_powers_stay_symbolic() {
        let h = LaurentHalfQ::monomial(3, 1, 1);
        assert!(h.eval_rational().is_none());
        let g = LaurentHalfQ::monomial(9, 1, 1);
        assert_eq!(
            g.eval_rational().unwrap(),
            BigRational::from_integer(3.into())
        );
    }

    #[test]
    fn exact_division() {
        let a = LaurentHalfQ::constant(3, 1).add(&LaurentHalfQ::monomial(3, -2, 1));
        let b = LaurentHalfQ::constant(3, 1).sub(&LaurentHalfQ::monomial(3, -2, 1));
        let prod = a.mul(&b).shift(5);
        let back = prod.div_exact(&a).unwrap();
        assert_eq!(
            back.terms().collect::<Vec<_>>(),
            b.shift(5).terms().collect::<Vec<_>>()
        );
        assert!(a.div_exact(&b).is_none());
    }

    #[test]
    fn equality_is_numeric() {
        // q^1 and the constant 3 agree at q = 3.
        assert_eq!(
            LaurentHalfQ::monomial(3, 2, 1),
            LaurentHalfQ::constant(3, 3)
        );
        assert_ne!(
            LaurentHalfQ::monomial(3, 1, 1),
            LaurentHalfQ::constant(3, 3)
        );
    }
}
