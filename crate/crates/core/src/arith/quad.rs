use std::fmt;

use super::{ExactScalar, Scalar};

/// `a + b*w` with `w^2 = u`, `u` a unit non-square mod `p`, so that the
/// extension is unramified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExt {
    pub a: ExactScalar,
    pub b: ExactScalar,
    pub u: ExactScalar,
}

impl QuadExt {
    pub fn new(a: ExactScalar, b: ExactScalar, u: ExactScalar) -> Self {
        QuadExt { a, b, u }
    }

    pub fn from_base(a: ExactScalar, u: ExactScalar) -> Self {
        let z = a.zero_like();
        QuadExt { a, b: z, u }
    }

    /// The generator `w` itself; it has trace zero.
    pub fn omega(u: ExactScalar) -> Self {
        let p = u.prime();
        QuadExt {
            a: ExactScalar::zero(p),
            b: ExactScalar::one(p),
            u,
        }
    }

    pub fn conj(&self) -> Self {
        QuadExt {
            a: self.a.clone(),
            b: self.b.neg(),
            u: self.u.clone(),
        }
    }

    pub fn norm(&self) -> ExactScalar {
        self.a.mul(&self.a).sub(&self.u.mul(&self.b.mul(&self.b)))
    }

    pub fn trace(&self) -> ExactScalar {
        self.a.add(&self.a)
    }

    pub fn is_base(&self) -> bool {
        self.b.is_zero()
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·ω", self.a, self.b)
    }
}

impl Scalar for QuadExt {
    fn zero_like(&self) -> Self {
        QuadExt::from_base(self.a.zero_like(), self.u.clone())
    }
    fn one_like(&self) -> Self {
        QuadExt::from_base(self.a.one_like(), self.u.clone())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        QuadExt {
            a: self.a.add(&o.a),
            b: self.b.add(&o.b),
            u: self.u.clone(),
        }
    }
    fn neg(&self) -> Self {
        QuadExt {
            a: self.a.neg(),
            b: self.b.neg(),
            u: self.u.clone(),
        }
    }
    fn mul(&self, o: &Self) -> Self {
        let a = self.a.mul(&o.a).add(&self.u.mul(&self.b.mul(&o.b)));
        let b = self.a.mul(&o.b).add(&self.b.mul(&o.a));
        QuadExt {
            a,
            b,
            u: self.u.clone(),
        }
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm().inv()?;
        let c = self.conj();
        Some(QuadExt {
            a: c.a.mul(&n),
            b: c.b.mul(&n),
            u: self.u.clone(),
        })
    }
    /// For an unramified extension `v(a + bw) = min(v(a), v(b))`.
    fn valuation(&self) -> Option<i64> {
        match (self.a.valuation(), self.b.valuation()) {
            (None, None) => None,
            (Some(x), None) | (None, Some(x)) => Some(x),
            (Some(x), Some(y)) => Some(x.min(y)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_has_zero_trace() {
        let u = ExactScalar::from_int(3, -1);
        let w = QuadExt::omega(u);
        assert!(w.trace().is_zero());
        assert_eq!(w.conj().conj(), w);
    }

    #[test]
    fn norm_is_multiplicative() {
        let u = ExactScalar::from_int(5, 2);
        let x = QuadExt::new(
            ExactScalar::from_int(5, 3),
            ExactScalar::from_frac(5, 1, 5),
            u.clone(),
        );
        let y = QuadExt::new(ExactScalar::from_int(5, -7), ExactScalar::from_int(5, 4), u);
        assert_eq!(x.mul(&y).norm(), x.norm().mul(&y.norm()));
        assert_eq!(x.mul(&x.inv().unwrap()), x.one_like());
    }
}
