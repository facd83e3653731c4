//! Decreasing, exhaustive, separating filtrations with rational breaks on
//! subquotients `top / bottom` of `F_p^n`.

use std::fmt;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use super::field::Fp;
use super::subspace::Subspace;
use super::FiltrationError;

/// `steps` lists `(x, F^x)` with `x` strictly decreasing and `F^x` strictly
/// increasing, every step containing `bottom`; the last step is the top.
/// `F^y` for `y` between two breaks is the step of the next break up.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Filtration {
    pub k: Fp,
    pub bottom: Subspace,
    pub steps: Vec<(Rational64, Subspace)>,
}

impl Filtration {
    /// Sorts by break and drops steps that do not enlarge the space.
    pub fn new(
        k: Fp,
        bottom: Subspace,
        mut steps: Vec<(Rational64, Subspace)>,
    ) -> Result<Self, FiltrationError> {
        steps.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Rational64, Subspace)> = vec![];
        let mut last = bottom.clone();
        for (x, s) in steps {
            if !last.is_within(&k, &s) {
                return Err(FiltrationError::NotDecreasing(format!(
                    "step at {} does not contain the previous one",
                    x
                )));
            }
            if s.dim() > last.dim() {
                last = s.clone();
                out.push((x, s));
            }
        }
        Ok(Filtration {
            k,
            bottom,
            steps: out,
        })
    }

    pub fn trivial(k: Fp, n: usize) -> Self {
        let steps = if n == 0 {
            vec![]
        } else {
            vec![(Rational64::zero(), Subspace::full(n))]
        };
        Filtration {
            k,
            bottom: Subspace::zero(n),
            steps,
        }
    }

    /// `F^x = span(b_i : w_i >= x)` for a basis `b` of the ambient space.
    pub fn from_weights(k: Fp, basis: &[Vec<u64>], weights: &[Rational64]) -> Self {
        let n = basis.first().map_or(0, |b| b.len());
        let mut breaks: Vec<Rational64> = weights.to_vec();
        breaks.sort();
        breaks.dedup();
        let steps = breaks
            .iter()
            .map(|&x| {
                let vecs: Vec<Vec<u64>> = basis
                    .iter()
                    .zip(weights)
                    .filter(|(_, w)| **w >= x)
                    .map(|(b, _)| b.clone())
                    .collect();
                (x, Subspace::span(&k, n, &vecs))
            })
            .collect();
        Filtration::new(k, Subspace::zero(n), steps).expect("weight filtrations are decreasing")
    }

    /// `Fil(lambda)` for a cocharacter acting diagonally on the standard basis.
    pub fn from_cocharacter(k: Fp, lambda: &[i64]) -> Self {
        let basis = Subspace::full(lambda.len()).basis;
        Self::from_weights(
            k,
            &basis,
            &lambda
                .iter()
                .map(|&x| Rational64::from_integer(x))
                .collect::<Vec<_>>(),
        )
    }

    pub fn ambient(&self) -> usize {
        self.bottom.n
    }

    pub fn top(&self) -> &Subspace {
        self.steps.last().map_or(&self.bottom, |s| &s.1)
    }

    pub fn breaks(&self) -> Vec<Rational64> {
        self.steps.iter().map(|s| s.0).collect()
    }

    /// `F^x`.
    pub fn at(&self, x: Rational64) -> Subspace {
        self.steps
            .iter()
            .rev()
            .find(|s| s.0 >= x)
            .map_or_else(|| self.bottom.clone(), |s| s.1.clone())
    }

    /// `F^(>x)`.
    pub fn above(&self, x: Rational64) -> Subspace {
        self.steps
            .iter()
            .rev()
            .find(|s| s.0 > x)
            .map_or_else(|| self.bottom.clone(), |s| s.1.clone())
    }

    /// `(x, dim gr^x)` for each break.
    pub fn graded_dims(&self) -> Vec<(Rational64, usize)> {
        let mut prev = self.bottom.dim();
        self.steps
            .iter()
            .map(|(x, s)| {
                let d = s.dim() - prev;
                prev = s.dim();
                (*x, d)
            })
            .collect()
    }

    /// `deg = sum_x x dim gr^x`.
    pub fn degree(&self) -> Rational64 {
        self.graded_dims()
            .iter()
            .map(|(x, d)| x * Rational64::from_integer(*d as i64))
            .sum()
    }

    /// Induced filtration on a subspace `a` with `bottom ⊂ a`.
    pub fn restrict(&self, a: &Subspace) -> Self {
        let steps = self
            .steps
            .iter()
            .map(|(x, s)| (*x, s.intersect(&self.k, a)))
            .collect();
        Filtration::new(self.k, self.bottom.clone(), steps).expect("restriction keeps the order")
    }

    /// Induced filtration on `top / b` with `bottom ⊂ b`.
    pub fn quotient(&self, b: &Subspace) -> Self {
        let steps = self
            .steps
            .iter()
            .map(|(x, s)| (*x, s.sum(&self.k, b)))
            .collect();
        Filtration::new(self.k, b.clone(), steps).expect("quotient keeps the order")
    }

    /// Induced filtration on the subquotient `a / b`.
    pub fn induced(&self, a: &Subspace, b: &Subspace) -> Self {
        self.restrict(a).quotient(b)
    }

    /// `g F` for an invertible matrix `g`.
    pub fn act(&self, g: &[Vec<u64>]) -> Self {
        let steps = self
            .steps
            .iter()
            .map(|(x, s)| (*x, s.image(&self.k, g)))
            .collect();
        Filtration {
            k: self.k,
            bottom: self.bottom.image(&self.k, g),
            steps,
        }
    }

    /// Breaks multiplied by `c > 0`.
    pub fn scale(&self, c: Rational64) -> Self {
        assert!(c.is_positive(), "filtrations scale by positive rationals");
        Filtration {
            k: self.k,
            bottom: self.bottom.clone(),
            steps: self.steps.iter().map(|(x, s)| (x * c, s.clone())).collect(),
        }
    }

    /// Weights on the standard basis when every step is a coordinate
    /// subspace of the full space.
    pub fn diagonal_weights(&self) -> Option<Vec<Rational64>> {
        let n = self.ambient();
        if !self.bottom.is_zero()
            || self.top().dim() != n
            || !self.steps.iter().all(|s| s.1.is_coordinate())
        {
            return None;
        }
        Some(
            (0..n)
                .map(|i| {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    self.steps
                        .iter()
                        .find(|s| s.1.contains(&self.k, &e))
                        .unwrap()
                        .0
                })
                .collect(),
        )
    }

    /// `F1 + F2` for filtrations split by the standard basis.
    pub fn add_diagonal(&self, other: &Filtration) -> Result<Self, FiltrationError> {
        let (a, b) = (self.diagonal_weights(), other.diagonal_weights());
        let (Some(a), Some(b)) = (a, b) else {
            return Err(FiltrationError::NotSplit);
        };
        let w: Vec<Rational64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        Ok(Self::from_weights(
            self.k,
            &Subspace::full(w.len()).basis,
            &w,
        ))
    }

    pub fn neg_diagonal(&self) -> Result<Self, FiltrationError> {
        let a = self.diagonal_weights().ok_or(FiltrationError::NotSplit)?;
        let w: Vec<Rational64> = a.iter().map(|x| -x).collect();
        Ok(Self::from_weights(
            self.k,
            &Subspace::full(w.len()).basis,
            &w,
        ))
    }

    /// `F^(x)^perp = F^(>-x)` for every `x`, with symmetric breaks.
    pub fn is_self_dual(&self, gram: &[Vec<u64>]) -> bool {
        let mut br = self.breaks();
        let mut neg: Vec<Rational64> = br.iter().map(|x| -x).collect();
        br.sort();
        neg.sort();
        br == neg
            && self
                .steps
                .iter()
                .all(|(x, s)| s.perp(&self.k, gram) == self.above(-x))
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .graded_dims()
            .iter()
            .map(|(x, d)| format!("{}^{}", x, d))
            .collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for Filtration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|(x, s)| format!("{}: {}", x, s.render()))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `(F1 ⊕ F2)^x = F1^x ⊕ F2^x` on the direct sum of the two ambient spaces.
pub fn direct_sum(f1: &Filtration, f2: &Filtration) -> Filtration {
    let (n1, n2) = (f1.ambient(), f2.ambient());
    let embed = |s: &Subspace, shift: usize| -> Vec<Vec<u64>> {
        s.basis
            .iter()
            .map(|v| {
                let mut w = vec![0; n1 + n2];
                w[shift..shift + v.len()].copy_from_slice(v);
                w
            })
            .collect()
    };
    let mut breaks: Vec<Rational64> = f1.breaks().into_iter().chain(f2.breaks()).collect();
    breaks.sort();
    breaks.dedup();
    let steps = breaks
        .into_iter()
        .map(|x| {
            let mut rows = embed(&f1.at(x), 0);
            rows.extend(embed(&f2.at(x), n1));
            (x, Subspace::span(&f1.k, n1 + n2, &rows))
        })
        .collect();
    let mut bottom = embed(&f1.bottom, 0);
    bottom.extend(embed(&f2.bottom, n1));
    Filtration::new(f1.k, Subspace::span(&f1.k, n1 + n2, &bottom), steps)
        .expect("sums of filtrations are decreasing")
}

fn same_ambient(a: &Filtration, b: &Filtration) -> Result<(), FiltrationError> {
    if a.k != b.k || a.bottom != b.bottom || a.top() != b.top() {
        return Err(FiltrationError::AmbientMismatch);
    }
    Ok(())
}

/// `sum_(x,y) x y dim(F1^x ∩ F2^y / (F1^(>x) ∩ F2^y + F1^x ∩ F2^(>y)))`.
pub fn scalar_product(f1: &Filtration, f2: &Filtration) -> Result<Rational64, FiltrationError> {
    same_ambient(f1, f2)?;
    let k = &f1.k;
    let mut total = Rational64::zero();
    for (x, a) in &f1.steps {
        let a_up = f1.above(*x);
        for (y, b) in &f2.steps {
            let b_up = f2.above(*y);
            let inter = a.intersect(k, b);
            let low = a_up.intersect(k, b).sum(k, &a.intersect(k, &b_up));
            let d = inter.dim() - low.dim();
            total += x * y * Rational64::from_integer(d as i64);
        }
    }
    Ok(total)
}

/// `sum_x x deg(F2 | gr^x F1)`.
pub fn scalar_product_graded(
    f1: &Filtration,
    f2: &Filtration,
) -> Result<Rational64, FiltrationError> {
    same_ambient(f1, f2)?;
    Ok(f1
        .steps
        .iter()
        .map(|(x, a)| x * f2.induced(a, &f1.above(*x)).degree())
        .sum())
}

/// A basis of `top` (modulo `bottom`) splitting both filtrations, with the
/// weights of each vector.
pub fn common_splitting(
    f1: &Filtration,
    f2: &Filtration,
) -> Result<Vec<(Vec<u64>, Rational64, Rational64)>, FiltrationError> {
    same_ambient(f1, f2)?;
    let k = &f1.k;
    let mut out = vec![];
    for (x, a) in &f1.steps {
        let a_up = f1.above(*x);
        for (y, b) in &f2.steps {
            let b_up = f2.above(*y);
            let inter = a.intersect(k, b);
            let low = a_up.intersect(k, b).sum(k, &a.intersect(k, &b_up));
            out.extend(
                inter
                    .complement_of(k, &low)
                    .into_iter()
                    .map(|v| (v, *x, *y)),
            );
        }
    }
    Ok(out)
}

/// `sum_i x_i y_i` over a common splitting.
pub fn scalar_product_split(
    f1: &Filtration,
    f2: &Filtration,
) -> Result<Rational64, FiltrationError> {
    Ok(common_splitting(f1, f2)?
        .iter()
        .map(|(_, x, y)| x * y)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: i64) -> Rational64 {
        Rational64::from_integer(x)
    }

    #[test]
    fn cocharacter_filtrations() {
        let k = Fp::new(3);
        let f = Filtration::from_cocharacter(k, &[1, 0]);
        assert_eq!(f.breaks(), vec![r(1), r(0)]);
        assert_eq!(f.at(r(1)), Subspace::span(&k, 2, &[vec![1, 0]]));
        assert_eq!(f.degree(), r(1));
        assert_eq!(
            Filtration::from_cocharacter(k, &[0, 0]),
            Filtration::trivial(k, 2)
        );
        assert_eq!(Filtration::trivial(k, 3).degree(), r(0));
    }

    #[test]
    fn restrictions() {
        let k = Fp::new(3);
        let f = Filtration::from_cocharacter(k, &[1, 0]);
        assert_eq!(f.restrict(&Subspace::full(2)), f);
        let line = Subspace::span(&k, 2, &[vec![1, 0]]);
        let g = f.restrict(&line);
        assert_eq!(g.graded_dims(), vec![(r(1), 1)]);
        let q = f.quotient(&line);
        assert_eq!(q.graded_dims(), vec![(r(0), 1)]);
    }

    #[test]
    fn products_of_lines() {
        let k = Fp::new(3);
        let f = Filtration::from_cocharacter(k, &[1, 0]);
        assert_eq!(scalar_product(&f, &f).unwrap(), r(1));
        let g = f.act(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(scalar_product(&f, &g).unwrap(), r(0));
        assert_eq!(scalar_product_graded(&f, &g).unwrap(), r(0));
        let a = Filtration::from_cocharacter(k, &[3, -1, 2]);
        let b = Filtration::from_cocharacter(k, &[1, 5, -2]);
        assert_eq!(scalar_product(&a, &b).unwrap(), r(3 - 5 - 4));
        assert_eq!(scalar_product_split(&a, &b).unwrap(), r(-6));
    }

    #[test]
    fn sums_add_products() {
        let k = Fp::new(3);
        let a = Filtration::from_cocharacter(k, &[2, 0]);
        let b = Filtration::from_cocharacter(k, &[-1, 1]);
        let s = direct_sum(&a, &b);
        assert_eq!(s, Filtration::from_cocharacter(k, &[2, 0, -1, 1]));
        assert_eq!(scalar_product(&s, &s).unwrap(), r(4 + 2));
    }

    #[test]
    fn diagonal_addition() {
        let k = Fp::new(5);
        let a = Filtration::from_cocharacter(k, &[2, -1]);
        assert_eq!(
            a.add_diagonal(&a.neg_diagonal().unwrap()).unwrap(),
            Filtration::trivial(k, 2)
        );
        let skew = a
            .act(&[vec![1, 1], vec![0, 1]])
            .act(&[vec![1, 0], vec![1, 1]]);
        assert!(matches!(
            a.add_diagonal(&skew),
            Err(FiltrationError::NotSplit)
        ));
    }
}
