//! Satake transform of double coset indicators and its inverse.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::arith::LaurentHalfQ;
use crate::cosets::{canonicalize, double_coset, CosetError};
use crate::groups::Descriptor;

use super::weights::dominant_multiplicities;
use super::weyl::RootSystem;
use super::HeckeError;

/// Finite combination of basis elements keyed by dominant cocharacters.
/// Used both for `sum c_lambda T_lambda` and for orbit sums `sum c m_lambda`.
#[derive(Clone, Debug)]
pub struct DominantSum {
    q: u64,
    terms: BTreeMap<Vec<i64>, LaurentHalfQ>,
}

/// Element of the spherical Hecke algebra in the double coset basis.
pub type HeckeElement = DominantSum;
/// Weyl invariant element of the group ring of cocharacters, orbit-sum basis.
pub type WeylInvariantPoly = DominantSum;

impl DominantSum {
    pub fn zero(q: u64) -> Self {
        DominantSum {
            q,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(q: u64, lambda: &[i64]) -> Self {
        Self::term(lambda, LaurentHalfQ::constant(q, 1))
    }

    pub fn term(lambda: &[i64], c: LaurentHalfQ) -> Self {
        let mut s = Self::zero(c.q());
        s.add_term(lambda, c);
        s
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn add_term(&mut self, lambda: &[i64], c: LaurentHalfQ) {
        let e = self
            .terms
            .entry(lambda.to_vec())
            .or_insert_with(|| LaurentHalfQ::zero(c.q()));
        *e = e.add(&c);
        if e.is_zero() {
            self.terms.remove(lambda);
        }
    }

    pub fn get(&self, lambda: &[i64]) -> LaurentHalfQ {
        self.terms
            .get(lambda)
            .cloned()
            .unwrap_or_else(|| LaurentHalfQ::zero(self.q))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &LaurentHalfQ)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, v) in &o.terms {
            r.add_term(k, v.clone());
        }
        r
    }

    pub fn scale(&self, c: &LaurentHalfQ) -> Self {
        let mut r = Self::zero(self.q);
        for (k, v) in &self.terms {
            r.add_term(k, v.mul(c));
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&LaurentHalfQ::constant(self.q, -1)))
    }

    /// Rational coefficients at the tied `q`, for acting on coset vectors.
    pub fn rational_terms(&self) -> Result<Vec<(Vec<i64>, BigRational)>, HeckeError> {
        self.terms
            .iter()
            .map(|(k, v)| {
                v.eval_rational()
                    .map(|r| (k.clone(), r))
                    .ok_or_else(|| HeckeError::Irrational(format!("{}", v)))
            })
            .collect()
    }

    /// Display form with a basis symbol, e.g. `T` or `m`.
    pub fn render(&self, sym: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(k, v)| {
                let idx = k
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                format!("({})·{}({})", v, sym, idx)
            })
            .collect();
        parts.join(" + ")
    }
}

impl PartialEq for DominantSum {
    fn eq(&self, o: &Self) -> bool {
        self.q == o.q && self.sub(o).is_empty()
    }
}

impl Serialize for DominantSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (k, v) in &self.terms {
            seq.serialize_element(&(k, v.to_string()))?;
        }
        seq.end()
    }
}

/// How `Sat(T_lambda)` is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SatakeMethod {
    /// Decompose `K lambda K` into left cosets and count Iwasawa components.
    Count,
    /// Macdonald's closed formula.
    Macdonald,
}

/// Satake transform for one split group, with a cache per method.
#[derive(Debug)]
pub struct Satake {
    pub g: Descriptor,
    pub rs: RootSystem,
    pub q: u64,
    pub method: SatakeMethod,
    pub budget: usize,
    cache: HashMap<(Vec<i64>, SatakeMethod), WeylInvariantPoly>,
}

impl Satake {
    pub fn new(g: Descriptor, method: SatakeMethod, budget: usize) -> Self {
        let rs = RootSystem::new(&g);
        let q = g.p;
        Satake {
            g,
            rs,
            q,
            method,
            budget,
            cache: HashMap::new(),
        }
    }

    /// `Sat(T_lambda)` with the configured method.
    pub fn transform(&mut self, lambda: &[i64]) -> Result<WeylInvariantPoly, HeckeError> {
        self.transform_with(lambda, self.method)
    }

    pub fn transform_with(
        &mut self,
        lambda: &[i64],
        m: SatakeMethod,
    ) -> Result<WeylInvariantPoly, HeckeError> {
        if !self.rs.is_dominant(lambda) {
            return Err(HeckeError::NotDominant(lambda.to_vec()));
        }
        let key = (lambda.to_vec(), m);
        if let Some(v) = self.cache.get(&key) {
            return Ok(v.clone());
        }
        let v = match m {
            SatakeMethod::Count => self.by_count(lambda)?,
            SatakeMethod::Macdonald => self.by_macdonald(lambda)?,
        };
        self.cache.insert(key, v.clone());
        Ok(v)
    }

    /// `Sat(T_lambda)(nu) = q^(-<rho, nu>) #{gK in K lambda K : g in N nu(p) K}`.
    fn by_count(&self, lambda: &[i64]) -> Result<WeylInvariantPoly, HeckeError> {
        let reps = double_coset(&self.g, lambda, self.budget)?;
        let mut counts: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        for g in &reps {
            let k = canonicalize(g).map_err(CosetError::from)?;
            *counts.entry(k.iwasawa()).or_insert(0) += 1;
        }
        let q = self.q;
        // Counts are written in base q so that q-powers stay visible.
        let coeff = |nu: &[i64], c: i64| {
            let mut out = LaurentHalfQ::zero(q);
            let (mut rest, mut k) = (c, -self.rs.pairing_2rho(nu));
            while rest > 0 {
                out = out.add(&LaurentHalfQ::monomial(q, k, rest % q as i64));
                rest /= q as i64;
                k += 2;
            }
            out
        };
        let mut out = WeylInvariantPoly::zero(q);
        for (nu, &c) in &counts {
            if self.rs.is_dominant(nu) {
                out.add_term(nu, coeff(nu, c));
            }
        }
        // The normalized counts must be constant on Weyl orbits.
        for (nu, &c) in &counts {
            let (d, _, _) = self.rs.to_dominant(nu);
            if coeff(nu, c) != out.get(&d) {
                return Err(HeckeError::Inconsistent(format!(
                    "count at {:?} is not Weyl invariant",
                    nu
                )));
            }
        }
        for (d, _) in out.iter() {
            for w in self.rs.orbit(d) {
                if !counts.contains_key(&w) {
                    return Err(HeckeError::Inconsistent(format!(
                        "orbit point {:?} missing",
                        w
                    )));
                }
            }
        }
        Ok(out)
    }

    /// `q^<rho,lambda> / W_lambda(q^-1) * sum_w w(e^lambda prod (1 - q^-1 e^-a)/(1 - e^-a))`,
    /// evaluated through alternants and Weyl characters.
    fn by_macdonald(&self, lambda: &[i64]) -> Result<WeylInvariantPoly, HeckeError> {
        let q = self.q;
        let rs = &self.rs;
        let n = rs.dim;
        let mut prod: BTreeMap<Vec<i64>, LaurentHalfQ> =
            BTreeMap::from([(vec![0; n], LaurentHalfQ::constant(q, 1))]);
        let mq = LaurentHalfQ::monomial(q, -2, -1);
        for a in &rs.coroots {
            let mut next = prod.clone();
            for (b, c) in &prod {
                let s: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
                let e = next.entry(s).or_insert_with(|| LaurentHalfQ::zero(q));
                *e = e.add(&c.mul(&mq));
            }
            prod = next;
        }
        // Formal accumulation: numeric pruning would break exact division below.
        let mut acc: BTreeMap<Vec<i64>, LaurentHalfQ> = BTreeMap::new();
        let mut chars: HashMap<Vec<i64>, Vec<(Vec<i64>, u64)>> = HashMap::new();
        for (b, c) in &prod {
            let gamma: Vec<i64> = (0..n)
                .map(|i| 2 * lambda[i] + rs.rho2_dual[i] + 2 * b[i])
                .collect();
            let (d, sign, regular) = rs.to_dominant(&gamma);
            if !regular {
                continue;
            }
            let nu: Vec<i64> = d
                .iter()
                .zip(&rs.rho2_dual)
                .map(|(x, r)| (x - r) / 2)
                .collect();
            if !chars.contains_key(&nu) {
                chars.insert(nu.clone(), dominant_multiplicities(rs, &nu)?);
            }
            for (w, m) in &chars[&nu] {
                let e = acc
                    .entry(w.clone())
                    .or_insert_with(|| LaurentHalfQ::zero(q));
                *e = e.add(&c.scale(&BigInt::from(sign as i64 * *m as i64)));
            }
        }
        let poincare = rs.stabilizer_poincare(lambda);
        let mut wl = LaurentHalfQ::zero(q);
        for (k, &a) in poincare.iter().enumerate() {
            wl = wl.add(&LaurentHalfQ::monomial(q, -2 * k as i64, a as i64));
        }
        let shift = rs.pairing_2rho(lambda);
        let mut out = WeylInvariantPoly::zero(q);
        for (w, c) in acc.iter().filter(|(_, c)| !c.is_zero_formal()) {
            let v = c.div_exact(&wl).ok_or_else(|| {
                HeckeError::Inconsistent(format!("Macdonald quotient at {:?}", w))
            })?;
            out.add_term(w, v.shift(shift));
        }
        Ok(out)
    }

    /// Linear extension of the transform to a Hecke element.
    pub fn transform_element(&mut self, h: &HeckeElement) -> Result<WeylInvariantPoly, HeckeError> {
        let mut out = WeylInvariantPoly::zero(self.q);
        for (l, c) in h.iter() {
            out = out.add(&self.transform(l)?.scale(c));
        }
        Ok(out)
    }

    /// Solves `Sat(h) = f` by descending dominance order.
    pub fn invert(&mut self, f: &WeylInvariantPoly) -> Result<HeckeElement, HeckeError> {
        let mut rest = f.clone();
        let mut h = HeckeElement::zero(self.q);
        let mut steps = 0usize;
        while let Some(top) = rest.iter().map(|(k, _)| k.clone()).max_by(|a, b| {
            self.rs
                .pairing_2rho(a)
                .cmp(&self.rs.pairing_2rho(b))
                .then(a.cmp(b))
        }) {
            steps += 1;
            if steps > 10_000 {
                return Err(HeckeError::SingularSystem);
            }
            let s = self.transform(&top)?;
            // The leading coefficient of Sat(T_lambda) is q^<rho,lambda>.
            let shift = self.rs.pairing_2rho(&top);
            if s.get(&top) != LaurentHalfQ::monomial(self.q, shift, 1) {
                return Err(HeckeError::SingularSystem);
            }
            let c = rest.get(&top).shift(-shift);
            rest = rest.sub(&s.scale(&c));
            h.add_term(&top, c);
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half(q: u64, k: i64, c: i64) -> LaurentHalfQ {
        LaurentHalfQ::monomial(q, k, c)
    }

    #[test]
    fn gl2_minuscule_and_central() {
        for q in [2, 3] {
            let mut s = Satake::new(Descriptor::gl(2, q), SatakeMethod::Count, 10_000);
            assert_eq!(
                s.transform(&[1, 0]).unwrap(),
                WeylInvariantPoly::term(&[1, 0], half(q, 1, 1))
            );
            assert_eq!(
                s.transform(&[1, 1]).unwrap(),
                WeylInvariantPoly::basis(q, &[1, 1])
            );
            assert_eq!(
                s.transform(&[0, 0]).unwrap(),
                WeylInvariantPoly::basis(q, &[0, 0])
            );
        }
    }

    #[test]
    fn gl2_non_minuscule_has_lower_term() {
        // Sat(T_(2,0)) = q m_(2,0) + (q - 1) m_(1,1).
        let q = 3;
        let mut s = Satake::new(Descriptor::gl(2, q), SatakeMethod::Count, 10_000);
        let want = WeylInvariantPoly::term(&[2, 0], half(q, 2, 1)).add(&WeylInvariantPoly::term(
            &[1, 1],
            half(q, 2, 1).sub(&LaurentHalfQ::constant(q, 1)),
        ));
        assert_eq!(s.transform(&[2, 0]).unwrap(), want);
    }

    #[test]
    fn macdonald_agrees_with_counting() {
        let cases: Vec<(Descriptor, Vec<Vec<i64>>)> = vec![
            (
                Descriptor::gl(2, 3),
                vec![vec![1, 0], vec![2, 0], vec![3, 1], vec![2, -1]],
            ),
            (
                Descriptor::gl(3, 2),
                vec![
                    vec![1, 0, 0],
                    vec![1, 1, 0],
                    vec![2, 0, 0],
                    vec![1, 0, -1],
                    vec![2, 1, 0],
                ],
            ),
            (
                Descriptor::so_odd_standard(5, 3),
                vec![vec![1, 0, 0, 0, -1], vec![1, 1, 0, -1, -1]],
            ),
        ];
        for (g, lams) in cases {
            let mut s = Satake::new(g, SatakeMethod::Count, 200_000);
            for l in lams {
                let a = s.transform_with(&l, SatakeMethod::Count).unwrap();
                let b = s.transform_with(&l, SatakeMethod::Macdonald).unwrap();
                assert_eq!(a, b, "lambda = {:?}", l);
            }
        }
    }

    #[test]
    fn inversion_round_trip() {
        let mut s = Satake::new(Descriptor::gl(3, 2), SatakeMethod::Count, 10_000);
        for l in [
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![1, 1, 0],
            vec![2, 0, 0],
            vec![1, 0, -1],
        ] {
            let f = s.transform(&l).unwrap();
            assert_eq!(s.invert(&f).unwrap(), HeckeElement::basis(2, &l));
        }
    }
}
