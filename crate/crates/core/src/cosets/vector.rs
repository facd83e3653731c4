use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{ArithError, PMat};

use super::key::{canonicalize, CosetKey};

/// A finite combination of cosets `gK`, each stored with one representative.
#[derive(Clone, Debug, Default)]
pub struct CosetVector {
    terms: BTreeMap<CosetKey, (BigRational, PMat)>,
}

impl PartialEq for CosetVector {
    fn eq(&self, o: &Self) -> bool {
        self.terms.len() == o.terms.len() && self.terms.iter().all(|(k, (c, _))| o.coeff(k) == *c)
    }
}

impl CosetVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `[g K]`.
    pub fn unit(g: &PMat) -> Result<Self, ArithError> {
        let mut v = Self::zero();
        v.add_term(g, BigRational::one())?;
        Ok(v)
    }

    pub fn add_term(&mut self, g: &PMat, c: BigRational) -> Result<(), ArithError> {
        let k = canonicalize(g)?;
        self.add_keyed(k, g, c);
        Ok(())
    }

    pub(crate) fn add_keyed(&mut self, k: CosetKey, g: &PMat, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(e) => {
                e.0 += c;
                if e.0.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, (c, g.clone()));
            }
        }
    }

    pub fn coeff(&self, k: &CosetKey) -> BigRational {
        self.terms
            .get(k)
            .map_or_else(BigRational::zero, |e| e.0.clone())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CosetKey, &BigRational, &PMat)> {
        self.terms.iter().map(|(k, (c, g))| (k, c, g))
    }

    pub fn keys(&self) -> impl Iterator<Item = &CosetKey> {
        self.terms.keys()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, (c, g)) in &o.terms {
            out.add_keyed(k.clone(), g, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        for e in out.terms.values_mut() {
            e.0 *= s;
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-BigRational::one()))
    }

    /// Left translation `gK -> x g K`.
    pub fn translate(&self, x: &PMat) -> Result<Self, ArithError> {
        let mut out = Self::zero();
        for (c, g) in self.terms.values() {
            out.add_term(&x.try_mul(g)?, c.clone())?;
        }
        Ok(out)
    }

    /// `sum_s s . v` over a finite set.
    pub fn trace(&self, set: &[PMat]) -> Result<Self, ArithError> {
        let mut out = Self::zero();
        for s in set {
            out = out.add(&self.translate(s)?);
        }
        Ok(out)
    }

    /// Right action of a combination of coset sets: `[bK] -> sum c [b g_i K]`.
    pub fn right_act(&self, parts: &[(BigRational, &[PMat])]) -> Result<Self, ArithError> {
        let mut out = Self::zero();
        for (c, b) in self.terms.values() {
            for (a, reps) in parts {
                let coef = c * a;
                if coef.is_zero() {
                    continue;
                }
                for gi in reps.iter() {
                    out.add_term(&b.try_mul(gi)?, coef.clone())?;
                }
            }
        }
        Ok(out)
    }

    /// Constant term: `sum c_g e^(nu(g))`, keyed by the Iwasawa component.
    pub fn constant_term(&self) -> BTreeMap<Vec<i64>, BigRational> {
        let mut out: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
        for (k, (c, _)) in &self.terms {
            let e = out.entry(k.iwasawa()).or_insert_with(BigRational::zero);
            *e += c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}
