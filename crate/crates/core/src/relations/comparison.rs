//! `H_m / H_(m+i) = G_m / G_(m+i) = N_m / N_(m+i)` and
//! `Tr_(H_m/H_(m+i))(x_(m+i)) = U^i(x_m)`.

use std::collections::HashSet;

use serde::Serialize;

use crate::arith::{PMat, QuadResidue};
use crate::cosets::{canonicalize, u_operator, CosetVector};
use crate::groups::Scenario;

use super::{n_level_reps, HenselLifter, RelationError};

#[derive(Clone, Debug)]
pub struct LiftedClass {
    pub n: PMat,
    pub h: PMat,
    pub ab: QuadResidue,
    pub iterations: usize,
}

/// Hensel lifts of the transversal of `N_m / N_(m+i)`, refusing more than
/// `budget` classes.
pub fn lift_transversal(
    s: &Scenario,
    m: i64,
    i: i64,
    budget: usize,
) -> Result<Vec<LiftedClass>, RelationError> {
    let size = (s.p as u128).pow((i * s.g.pairing_2rho(&s.mu)) as u32);
    if size > budget as u128 {
        return Err(RelationError::Budget(size, budget));
    }
    let lifter = HenselLifter::new(s)?;
    let ring = lifter.ring;
    n_level_reps(&s.g, ring, &s.mu, m, i)
        .into_iter()
        .map(|n| {
            let l = lifter.lift(&n)?;
            let ab = s.ab_residue(ring, &l.h);
            let h = PMat::from_integral(ring, s.g.dim, l.h, 0);
            Ok(LiftedClass {
                n,
                h,
                ab,
                iterations: l.iterations,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub m: i64,
    pub i: i64,
    pub expected: u128,
    pub classes: usize,
    /// Distinct cosets `h tau^(m+i) K` among the lifts.
    pub distinct: usize,
    /// Every lift reduces to `1` and satisfies the `H_m` valuation bounds.
    pub lifts_in_level: bool,
    pub max_newton_steps: usize,
    pub trace_terms: usize,
    pub trace_identity: bool,
}

impl ComparisonReport {
    pub fn holds(&self) -> bool {
        self.classes as u128 == self.expected
            && self.distinct == self.classes
            && self.lifts_in_level
            && self.trace_identity
    }
}

fn in_level(s: &Scenario, h: &PMat, m: i64) -> bool {
    let mu = &s.mu;
    let n = h.n;
    (0..n).all(|a| {
        (0..n).all(|b| {
            let x = h.get(a, b);
            let y = if a == b { h.ring.sub(x, 1) } else { x };
            let v = h.ring.val(y) as i64;
            v >= 1 && v >= m * (mu[a] - mu[b])
        })
    })
}

pub fn comparison_check(
    s: &Scenario,
    m: i64,
    i: i64,
    budget: usize,
) -> Result<ComparisonReport, RelationError> {
    let ring = s.ring();
    let tau = |k: i64| {
        s.g.cocharacter_element(ring, &s.mu.iter().map(|x| k * x).collect::<Vec<_>>())
    };
    let expected = (s.p as u128).pow((i * s.g.pairing_2rho(&s.mu)) as u32);
    if i == 0 {
        return Ok(ComparisonReport {
            m,
            i,
            expected,
            classes: 1,
            distinct: 1,
            lifts_in_level: true,
            max_newton_steps: 0,
            trace_terms: 1,
            trace_identity: true,
        });
    }
    let lifts = lift_transversal(s, m, i, budget)?;
    let top = tau(m + i);
    let mut keys = HashSet::new();
    let mut lhs = CosetVector::zero();
    for l in &lifts {
        let g = l.h.try_mul(&top)?;
        keys.insert(canonicalize(&g)?);
        lhs.add_term(&g, num_traits::One::one())?;
    }
    let mut rhs = CosetVector::unit(&tau(m))?;
    for _ in 0..i {
        rhs = u_operator(&s.g, &s.mu, &rhs)?;
    }
    Ok(ComparisonReport {
        m,
        i,
        expected,
        classes: lifts.len(),
        distinct: keys.len(),
        lifts_in_level: lifts.iter().all(|l| in_level(s, &l.h, m)),
        max_newton_steps: lifts.iter().map(|l| l.iterations).max().unwrap_or(0),
        trace_terms: lhs.len(),
        trace_identity: lhs == rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so3_three_classes() {
        let s = Scenario::build("so3-u1", None, None).unwrap();
        let r = comparison_check(&s, 1, 1, 10_000).unwrap();
        assert_eq!(r.classes, 3);
        assert!(r.holds(), "{:?}", r);
    }

    #[test]
    fn trivial_depth() {
        let s = Scenario::build("so3-u1", None, None).unwrap();
        assert!(comparison_check(&s, 1, 0, 1).unwrap().holds());
    }

    #[test]
    fn other_pairs() {
        for (name, m, i) in [
            ("gsp4", 1, 1),
            ("ggp-gl-n2", 1, 1),
            ("diag-gl2", 1, 2),
            ("gl3-so3-theta", 1, 1),
            ("so3-u1", 2, 2),
        ] {
            let s = Scenario::build(name, None, None).unwrap();
            let r = comparison_check(&s, m, i, 10_000).unwrap();
            assert!(r.holds(), "{} {:?}", name, r);
        }
    }
}
