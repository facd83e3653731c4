//! The residue quadratic space `V_k` of the special basis, the hermitian
//! `h`-space `W_k = v_n^perp` with `theta = eta mod p`, the filtration
//! `F_zeta` and the sweep over filtrations coming from the unitary group.

use std::collections::BTreeSet;

use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{ExactScalar, Matrix};
use crate::groups::lattice::reduce_mod_p;
use crate::groups::{inert_u, Scenario, ScenarioKind, SpecialBasis};

use super::field::Fp;
use super::filtration::{scalar_product, scalar_product_graded, Filtration};
use super::subspace::{all_vectors, Subspace};
use super::FiltrationError;

fn reduce(m: &Matrix<ExactScalar>, p: u64) -> Vec<Vec<u64>> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| reduce_mod_p(m.get(r, c), p))
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct MainExample {
    pub k: Fp,
    pub n: usize,
    /// `s_1 <= .. <= s_n`.
    pub s: Vec<i64>,
    /// `(s_n, .., s_1, 0, -s_1, .., -s_n)` on `(e_n, .., e_-n)`.
    pub mu: Vec<i64>,
    pub gram: Vec<Vec<u64>>,
    pub theta: Vec<Vec<u64>>,
    pub w: Subspace,
    /// `red(F_(mu^-1))`.
    pub f_zeta: Filtration,
}

impl MainExample {
    pub fn new(n: usize, p: u64, s: &[i64]) -> Result<Self, FiltrationError> {
        if s.len() != n || s.first().map_or(false, |&x| x < 0) || s.windows(2).any(|w| w[0] > w[1])
        {
            return Err(FiltrationError::InvalidCocharacter(format!(
                "need 0 <= s_1 <= .. <= s_n, got {:?}",
                s
            )));
        }
        let sb = SpecialBasis::new(n, p, inert_u(p))?;
        let k = Fp::new(p);
        let dim = 2 * n + 1;
        let basis = reduce(&sb.s, p);
        let w_vecs: Vec<Vec<u64>> = (0..2 * n)
            .map(|c| (0..dim).map(|r| basis[r][c]).collect())
            .collect();
        let mut mu: Vec<i64> = s.iter().rev().copied().collect();
        mu.push(0);
        mu.extend(s.iter().map(|x| -x));
        let neg: Vec<i64> = mu.iter().map(|x| -x).collect();
        Ok(MainExample {
            k,
            n,
            s: s.to_vec(),
            mu,
            gram: reduce(&sb.gram, p),
            theta: reduce(&sb.eta, p),
            w: Subspace::span(&k, dim, &w_vecs),
            f_zeta: Filtration::from_cocharacter(k, &neg),
        })
    }

    /// Reads `s` off the cocharacter of a unitary scenario.
    pub fn from_scenario(sc: &Scenario) -> Result<Self, FiltrationError> {
        if !matches!(sc.info.kind, ScenarioKind::Unitary) {
            return Err(FiltrationError::Unsupported(format!(
                "{} is not a unitary scenario",
                sc.name()
            )));
        }
        let n = sc.info.rank;
        let s: Vec<i64> = (1..=n).map(|i| sc.mu[n - i]).collect();
        Self::new(n, sc.p, &s)
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    /// `span(v, theta v)`.
    fn h_line(&self, v: &[u64]) -> Subspace {
        Subspace::span(
            &self.k,
            self.dim(),
            &[v.to_vec(), self.k.apply(&self.theta, v)],
        )
    }

    fn w_vectors(&self) -> Vec<Vec<u64>> {
        let k = &self.k;
        all_vectors(k.p, self.w.dim())
            .skip(1)
            .map(|c| {
                (0..self.dim())
                    .map(|j| {
                        self.w
                            .basis
                            .iter()
                            .zip(&c)
                            .fold(0, |acc, (b, x)| k.add(acc, k.mul(b[j], *x)))
                    })
                    .collect()
            })
            .collect()
    }

    /// All nonzero totally isotropic `h`-subspaces of `W_k`, by `h`-dimension.
    pub fn isotropic_subspaces(&self) -> Vec<Vec<Subspace>> {
        let lines: BTreeSet<Subspace> = self
            .w_vectors()
            .iter()
            .map(|v| self.h_line(v))
            .filter(|x| x.is_isotropic(&self.k, &self.gram))
            .collect();
        let lines: Vec<Subspace> = lines.into_iter().collect();
        let mut levels = vec![lines.clone()];
        loop {
            let mut next = BTreeSet::new();
            for x in levels.last().unwrap() {
                for l in &lines {
                    if !l.is_within(&self.k, x) {
                        let y = x.sum(&self.k, l);
                        if y.is_isotropic(&self.k, &self.gram) {
                            next.insert(y);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            levels.push(next.into_iter().collect());
        }
        if levels[0].is_empty() {
            levels.clear();
        }
        levels
    }

    /// The filtration `(a_m, X_m, .., a_1, X_1, 0, X_1^perp, -a_1, X_2^perp, .., -a_m, V)`.
    pub fn h_filtration(&self, flag: &[Subspace], breaks: &[i64]) -> Filtration {
        let dim = self.dim();
        let mut steps = vec![];
        let perp = |j: usize| {
            flag.get(j)
                .map_or_else(|| Subspace::full(dim), |x| x.perp(&self.k, &self.gram))
        };
        steps.push((Rational64::zero(), perp(0)));
        for (j, (x, &a)) in flag.iter().zip(breaks).enumerate() {
            steps.push((Rational64::from_integer(a), x.clone()));
            steps.push((Rational64::from_integer(-a), perp(j + 1)));
        }
        Filtration::new(self.k, Subspace::zero(dim), steps)
            .expect("isotropic flags give decreasing filtrations")
    }
}

/// One element of the sweep: flag `X_1 ⊋ .. ⊋ X_m` with breaks
/// `0 < a_1 < .. < a_m`.
#[derive(Clone, Debug)]
pub struct HFiltration {
    pub flag: Vec<Subspace>,
    pub breaks: Vec<i64>,
    pub filtration: Filtration,
}

fn increasing_tuples(len: usize, bound: i64) -> Vec<Vec<i64>> {
    if len == 0 {
        return vec![vec![]];
    }
    increasing_tuples(len - 1, bound)
        .into_iter()
        .flat_map(|t| {
            let start = t.last().map_or(1, |x| x + 1);
            (start..=bound).map(move |a| {
                let mut u = t.clone();
                u.push(a);
                u
            })
        })
        .collect()
}

/// Every filtration from an isotropic `h`-flag of length at most `max_len`
/// with integer breaks in `[-bound, bound]`, the zero filtration first.
pub fn enumerate_h_filtrations(ex: &MainExample, bound: i64, max_len: usize) -> Vec<HFiltration> {
    let levels = ex.isotropic_subspaces();
    let all: Vec<&Subspace> = levels.iter().flatten().collect();
    // Strict flags, largest space first.
    let mut flags: Vec<Vec<Subspace>> = vec![vec![]];
    let mut frontier: Vec<Vec<Subspace>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = vec![];
        for f in &frontier {
            for x in &all {
                let ok = f.last().map_or(true, |last: &Subspace| {
                    x.is_within(&ex.k, last) && x.dim() < last.dim()
                });
                if ok {
                    let mut g = f.clone();
                    g.push((*x).clone());
                    next.push(g);
                }
            }
        }
        flags.extend(next.iter().cloned());
        frontier = next;
    }
    let mut out = vec![];
    for flag in flags {
        for breaks in increasing_tuples(flag.len(), bound) {
            let filtration = ex.h_filtration(&flag, &breaks);
            out.push(HFiltration {
                flag: flag.clone(),
                breaks,
                filtration,
            });
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeRow {
    pub subspace: String,
    pub h_dim: usize,
    pub degree: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyAReport {
    pub n: usize,
    pub p: u64,
    pub s: Vec<i64>,
    pub break_bound: i64,
    pub max_len: usize,
    pub isotropic_lines: usize,
    pub isotropic_subspaces: usize,
    pub filtrations: usize,
    pub max_value: String,
    pub argmax: Option<String>,
    pub positive: usize,
    pub degree_table: Vec<DegreeRow>,
    pub degrees_nonpositive: bool,
    /// `<F_X, F_zeta> = 2 x deg(F_zeta | X)` on every minimal-type filtration.
    pub minimal_type_ok: bool,
    pub formulas_agree: bool,
    pub self_dual: bool,
    pub shift_checked: usize,
    pub shift_ok: bool,
}

impl PropertyAReport {
    pub fn holds(&self) -> bool {
        self.positive == 0
            && self.degrees_nonpositive
            && self.minimal_type_ok
            && self.formulas_agree
            && self.self_dual
            && self.shift_ok
    }
}

/// For `v = sum_(i=1..m) c_i f_i` with `c_m != 0` and `1 <= m <= n - 1`,
/// `theta(v)` lies in `V_(-m-1)` but not in `V_(-m)`, where
/// `f_j = e_-j` sits at coordinate `n + j` and `V_i` is spanned by the
/// coordinates `>= n + i`. Returns the number of vectors checked.
fn involution_shift_check(ex: &MainExample) -> (usize, bool) {
    let (n, k) = (ex.n, &ex.k);
    let mut checked = 0;
    let mut ok = true;
    for m in 1..n {
        for c in all_vectors(k.p, m) {
            if c[m - 1] == 0 {
                continue;
            }
            let mut v = vec![0; ex.dim()];
            for (i, &ci) in c.iter().enumerate() {
                v[n + i + 1] = ci;
            }
            let t = k.apply(&ex.theta, &v);
            let edge = n - m - 1;
            ok &= t[..edge].iter().all(|&x| x == 0) && t[edge] != 0;
            checked += 1;
        }
    }
    (checked, ok)
}

pub fn property_a_check(
    ex: &MainExample,
    bound: i64,
    max_len: usize,
) -> Result<PropertyAReport, FiltrationError> {
    let levels = ex.isotropic_subspaces();
    let mut degree_table = vec![];
    for (d, level) in levels.iter().enumerate() {
        for x in level {
            degree_table.push((x.clone(), d + 1, ex.f_zeta.restrict(x).degree()));
        }
    }
    let sweep = enumerate_h_filtrations(ex, bound, max_len);
    let mut max_value: Option<Rational64> = None;
    let mut argmax = None;
    let (mut positive, mut formulas_agree, mut self_dual, mut minimal_type_ok) =
        (0, true, true, true);
    for h in &sweep {
        let v = scalar_product(&h.filtration, &ex.f_zeta)?;
        formulas_agree &= scalar_product_graded(&h.filtration, &ex.f_zeta)? == v;
        self_dual &= h.filtration.is_self_dual(&ex.gram);
        if h.flag.len() == 1 {
            let deg = ex.f_zeta.restrict(&h.flag[0]).degree();
            minimal_type_ok &= v == Rational64::from_integer(2 * h.breaks[0]) * deg;
        }
        if v > Rational64::zero() {
            positive += 1;
        }
        if max_value.map_or(true, |m| v > m) {
            max_value = Some(v);
            argmax = Some(h.filtration.to_string());
        }
    }
    let (shift_checked, shift_ok) = involution_shift_check(ex);
    Ok(PropertyAReport {
        n: ex.n,
        p: ex.k.p,
        s: ex.s.clone(),
        break_bound: bound,
        max_len,
        isotropic_lines: levels.first().map_or(0, |l| l.len()),
        isotropic_subspaces: levels.iter().map(|l| l.len()).sum(),
        filtrations: sweep.len(),
        max_value: max_value.unwrap_or_default().to_string(),
        argmax,
        positive,
        degrees_nonpositive: degree_table.iter().all(|r| r.2 <= Rational64::zero()),
        degree_table: degree_table
            .into_iter()
            .map(|(x, d, deg)| DegreeRow {
                subspace: x.render(),
                h_dim: d,
                degree: deg.to_string(),
            })
            .collect(),
        minimal_type_ok,
        formulas_agree,
        self_dual,
        shift_checked,
        shift_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::lattice::reduce_mod_p;

    #[test]
    fn f_zeta_is_self_dual_of_degree_zero() {
        let ex = MainExample::new(2, 3, &[1, 2]).unwrap();
        assert_eq!(ex.mu, vec![2, 1, 0, -1, -2]);
        assert!(ex.f_zeta.is_self_dual(&ex.gram));
        assert_eq!(ex.f_zeta.degree(), Rational64::zero());
        // theta preserves W and squares to u.
        let u = ex.k.from_i64(inert_u(3));
        for v in &ex.w.basis {
            let tt = ex.k.apply(&ex.theta, &ex.k.apply(&ex.theta, v));
            assert_eq!(tt, v.iter().map(|x| ex.k.mul(u, *x)).collect::<Vec<_>>());
            assert!(ex.w.contains(&ex.k, &ex.k.apply(&ex.theta, v)));
        }
    }

    #[test]
    fn rank_one_has_no_isotropic_lines() {
        let ex = MainExample::new(1, 3, &[1]).unwrap();
        assert!(ex.isotropic_subspaces().is_empty());
        let sweep = enumerate_h_filtrations(&ex, 3, 1);
        assert_eq!(sweep.len(), 1);
        assert_eq!(sweep[0].filtration, Filtration::trivial(ex.k, 3));
        assert!(property_a_check(&ex, 3, 1).unwrap().holds());
    }

    #[test]
    fn rank_two_sweep() {
        let ex = MainExample::new(2, 3, &[1, 2]).unwrap();
        let levels = ex.isotropic_subspaces();
        assert_eq!(levels.len(), 1);
        assert_eq!(levels[0].len(), 4);
        let sweep = enumerate_h_filtrations(&ex, 3, 2);
        assert_eq!(sweep.len(), 1 + 4 * 3);
        assert_eq!(sweep.iter().filter(|h| h.flag.is_empty()).count(), 1);
        let r = property_a_check(&ex, 3, 2).unwrap();
        assert!(r.holds(), "{:?}", r);
        assert_eq!(r.shift_checked, 2);
    }

    #[test]
    fn sweep_is_stable_under_the_unitary_group() {
        let sc = Scenario::build("so5-u2", None, None).unwrap();
        let ex = MainExample::from_scenario(&sc).unwrap();
        let sweep: BTreeSet<String> = enumerate_h_filtrations(&ex, 2, 2)
            .iter()
            .map(|h| h.filtration.to_string())
            .collect();
        let sb = sc.special.as_ref().unwrap();
        for x in sb.unitary_lie_basis() {
            let xm: Vec<Vec<u64>> = (0..5)
                .map(|r| (0..5).map(|c| reduce_mod_p(x.get(r, c), 3)).collect())
                .collect();
            let Some(g) = ex.k.cayley(&xm) else { continue };
            for h in enumerate_h_filtrations(&ex, 2, 2) {
                assert!(sweep.contains(&h.filtration.act(&g).to_string()));
            }
        }
    }

    #[test]
    fn larger_rank_has_isotropic_planes() {
        let ex = MainExample::new(4, 3, &[1, 2, 3, 4]).unwrap();
        let levels = ex.isotropic_subspaces();
        assert_eq!(levels.len(), 2);
        let r = property_a_check(&ex, 2, 2).unwrap();
        assert!(r.holds(), "{:?}", r.max_value);
    }
}
