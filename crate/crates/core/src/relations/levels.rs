//! Level groups `G_m = K ∩ tau^m K tau^-m`, `H_m = G_m ∩ H(F)` and the
//! unipotent transversals `N_m / N_(m+i)`.

use std::collections::HashSet;

use serde::Serialize;

use crate::arith::{ExactScalar, Matrix, PMat, PRing};
use crate::cosets::{canonicalize, closure};
use crate::groups::{Descriptor, Scenario};

use super::RelationError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    G,
    H,
}

/// Whether `x` lies in `G_m` (or `H_m`): `x ∈ G(O)` and
/// `val(x_ab) >= m (mu_a - mu_b)`.
pub fn level_membership(
    s: &Scenario,
    x: &Matrix<ExactScalar>,
    m: i64,
    side: Side,
) -> Result<bool, RelationError> {
    if !s.g.is_member(x)? || !x.is_integral() || x.det().valuation() != Some(0) {
        return Ok(false);
    }
    let mu = &s.mu;
    for a in 0..x.rows() {
        for b in 0..x.cols() {
            let bound = m * (mu[a] - mu[b]);
            if let Some(v) = x.get(a, b).valuation() {
                if v < bound {
                    return Ok(false);
                }
            }
        }
    }
    Ok(match side {
        Side::G => true,
        Side::H => s.contains(x)?,
    })
}

/// Representatives `prod R_alpha(p^(m k) x)` of `N_m / N_(m+i)`, with
/// `k = <alpha, mu>` and `x` ranging over `O / p^(i k)`.
pub fn n_level_reps(g: &Descriptor, ring: PRing, mu: &[i64], m: i64, i: i64) -> Vec<PMat> {
    let mut reps = vec![PMat::identity(ring, g.dim)];
    for root in &g.positive {
        let k = root.pairing(mu);
        if k <= 0 || i == 0 {
            continue;
        }
        let size = ring.p.pow((i * k) as u32);
        let scale = ring.p_pow((m * k) as u32);
        let elems: Vec<PMat> = (0..size)
            .map(|x| g.root_group_element(ring, root, ring.mul(x, scale)))
            .collect();
        let mut next = Vec::with_capacity(reps.len() * elems.len());
        for r in &reps {
            for e in &elems {
                next.push(r.mul(e));
            }
        }
        reps = next;
    }
    reps
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelCountReport {
    pub m: i64,
    pub i: i64,
    /// `q^(i <mu, 2 rho>)`.
    pub expected: u128,
    /// Distinct cosets `n tau^(m+i) K` over the coordinate transversal.
    pub transversal_distinct: Option<usize>,
    /// Orbit of `tau^(m+i) K` under generators of `N_m`.
    pub orbit: Option<usize>,
    pub holds: bool,
}

/// `|N_m / N_(m+i)|` counted as the `N_m`-orbit of `tau^(m+i) K`, whose
/// stabilizer in `N_m` is `N_(m+i)`. Skipped above `budget`.
pub fn level_count(
    g: &Descriptor,
    mu: &[i64],
    m: i64,
    i: i64,
    budget: usize,
) -> Result<LevelCountReport, RelationError> {
    let ring = g.ring();
    let expected = (ring.p as u128).pow((i * g.pairing_2rho(mu)) as u32);
    let target: Vec<i64> = mu.iter().map(|x| (m + i) * x).collect();
    let start = g.cocharacter_element(ring, &target);
    if expected > budget as u128 {
        return Ok(LevelCountReport {
            m,
            i,
            expected,
            transversal_distinct: None,
            orbit: None,
            holds: false,
        });
    }
    let mut keys = HashSet::new();
    for n in n_level_reps(g, ring, mu, m, i) {
        keys.insert(canonicalize(&n.try_mul(&start)?)?);
    }
    let gens: Vec<PMat> = g
        .positive
        .iter()
        .map(|r| g.root_group_element(ring, r, ring.p_pow((m * r.pairing(mu)) as u32)))
        .collect();
    let orbit = closure(&gens, start, budget + 1)?.len();
    let holds = keys.len() as u128 == expected && orbit as u128 == expected;
    Ok(LevelCountReport {
        m,
        i,
        expected,
        transversal_distinct: Some(keys.len()),
        orbit: Some(orbit),
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        let s = Scenario::build("so5-u2", None, None).unwrap();
        let p = s.p;
        let id = Matrix::identity(5, &ExactScalar::one(p));
        assert!(level_membership(&s, &id, 3, Side::H).unwrap());
        let root =
            s.g.positive
                .iter()
                .find(|r| r.pairing(&s.mu) > 0)
                .unwrap()
                .clone();
        let k = root.pairing(&s.mu);
        let x = s.g.root_group_exact(&root, &ExactScalar::one(p));
        assert!(!level_membership(&s, &x, 1, Side::G).unwrap());
        let y = s.g.root_group_exact(&root, &ExactScalar::p_power(p, k));
        assert!(level_membership(&s, &y, 1, Side::G).unwrap());
        assert!(!level_membership(&s, &y, 2, Side::G).unwrap());
    }

    #[test]
    fn counts_match_the_power_of_q() {
        for (name, m, i) in [
            ("so3-u1", 1, 1),
            ("so3-u1", 2, 2),
            ("gl2", 1, 2),
            ("so5-u2", 1, 1),
        ] {
            let s = Scenario::build(name, None, None).unwrap();
            let r = level_count(&s.g, &s.mu, m, i, 100_000).unwrap();
            assert!(r.holds, "{} {:?}", name, r);
        }
    }
}
