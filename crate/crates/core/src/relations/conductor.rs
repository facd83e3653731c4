//! Conductors `con(m)` of `ab(H_m)` and the fiber constants `c(m, i)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::arith::{ExactScalar, PRing, QuadResidue};
use crate::groups::{AbKind, Scenario, ScenarioKind};

use super::{
    closed_cmi, closed_conductor, level_membership, lift_transversal, RelationError, Side,
};

/// The torus receiving the abelianization character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TargetTorus {
    /// Norm-one elements of `E = F(sqrt u)`, `E/F` unramified.
    NormOneInert,
    /// Norm-one elements of `F x F`.
    NormOneSplit,
    /// `O^*`.
    Units,
}

pub fn target_torus(s: &Scenario) -> TargetTorus {
    match (&s.h.ab, s.info.kind) {
        (AbKind::BlockDet { .. }, _) => TargetTorus::Units,
        (_, ScenarioKind::SplitUnitary) => TargetTorus::NormOneSplit,
        _ => TargetTorus::NormOneInert,
    }
}

impl TargetTorus {
    /// `|U(c) / U(P)|` for `c <= P`.
    pub fn index(&self, p: u64, c: i64, big_p: i64) -> u128 {
        let p = p as u128;
        if c >= 1 {
            return p.pow((big_p - c) as u32);
        }
        let head = match self {
            TargetTorus::NormOneInert => p + 1,
            _ => p - 1,
        };
        head * p.pow((big_p - 1) as u32)
    }
}

/// Largest `c` with `z ≡ 1 mod p^c`, capped at the ring precision.
fn level(ring: &PRing, z: &QuadResidue) -> i64 {
    ring.val(ring.sub(z.a, 1)).min(ring.val(z.b)) as i64
}

fn key(ring: &PRing, z: &QuadResidue, c: i64) -> (u64, u64) {
    let cap = ring.p_pow_or_modulus(c as u32);
    (z.a % cap, z.b % cap)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConductorReport {
    pub m: i64,
    pub conductor: i64,
    /// Transversal depth `M` and probe precision `P = m + M`.
    pub depth: i64,
    pub precision: i64,
    pub image_size: usize,
    pub expected_size: u128,
    pub closed_form: Option<i64>,
    /// `con(m) >= m`.
    pub lower_bound_holds: bool,
    /// Surjectivity witness `x_(1, p^con) ∈ H_m` with image of exact level
    /// `con`, and `x_(1, p^(con-1)) ∉ H_m`.
    pub witness: Option<bool>,
}

impl ConductorReport {
    pub fn holds(&self) -> bool {
        self.closed_form.map_or(true, |c| c == self.conductor)
            && self.lower_bound_holds
            && self.witness != Some(false)
    }
}

/// `con(m)`: the images `ab(h) mod p^P` of lifts of `N_m / N_(m+M)` form
/// `ab(H_m) / U(P)` once `con(m+M) >= P`; the conductor is their common
/// level once the image fills `U(c) / U(P)`. Depths are tried in order.
pub fn conductor(s: &Scenario, m: i64, budget: usize) -> Result<ConductorReport, RelationError> {
    conductor_within(s, m, budget, 4)
}

/// `conductor` with transversal depths `1..=max_depth`.
pub fn conductor_within(
    s: &Scenario,
    m: i64,
    budget: usize,
    max_depth: i64,
) -> Result<ConductorReport, RelationError> {
    let closed = closed_conductor(s, m);
    if m == 0 {
        return Ok(ConductorReport {
            m,
            conductor: 0,
            depth: 0,
            precision: 0,
            image_size: 1,
            expected_size: 1,
            closed_form: closed,
            lower_bound_holds: true,
            witness: None,
        });
    }
    if !s.trivial_intersection() {
        return Err(RelationError::Unsupported(format!(
            "{}: H meets the opposite Borel",
            s.name()
        )));
    }
    let ring = s.ring();
    let torus = target_torus(s);
    for depth in 1..=max_depth {
        let big_p = m + depth;
        let lifts = match lift_transversal(s, m, depth, budget) {
            Ok(l) => l,
            Err(RelationError::Budget(..)) => break,
            Err(e) => return Err(e),
        };
        let images: BTreeSet<(u64, u64)> = lifts.iter().map(|l| key(&ring, &l.ab, big_p)).collect();
        let c = lifts
            .iter()
            .map(|l| level(&ring, &l.ab))
            .min()
            .unwrap_or(big_p);
        if c >= big_p {
            continue;
        }
        let expected = torus.index(s.p, c, big_p);
        if images.len() as u128 != expected {
            log::info!(
                "depth {}: image of size {} inside U({})/U({}) of size {}",
                depth,
                images.len(),
                c,
                big_p,
                expected
            );
            continue;
        }
        let witness = if s.info.kind == ScenarioKind::Gsp4 {
            Some(gsp4_witness_holds(s, m, c)?)
        } else {
            None
        };
        return Ok(ConductorReport {
            m,
            conductor: c,
            depth,
            precision: big_p,
            image_size: images.len(),
            expected_size: expected,
            closed_form: closed,
            lower_bound_holds: c >= m,
            witness,
        });
    }
    Err(RelationError::PrecisionExhausted(m))
}

fn gsp4_witness_holds(s: &Scenario, m: i64, c: i64) -> Result<bool, RelationError> {
    let p = s.p;
    let one = ExactScalar::one(p);
    let x = s.gsp4_witness(&one, &ExactScalar::p_power(p, c)).unwrap();
    let inside = level_membership(s, &x, m, Side::H)?;
    let ring = s.ring();
    let xr = crate::arith::PMat::from_exact(ring, &x)?;
    let z = s.ab_residue(ring, &xr.m);
    let exact_level = level(&ring, &z) == c;
    let sharp = c == 0
        || !level_membership(
            s,
            &s.gsp4_witness(&one, &ExactScalar::p_power(p, c - 1))
                .unwrap(),
            m,
            Side::H,
        )?;
    Ok(inside && exact_level && sharp)
}

#[derive(Clone, Debug, Serialize)]
pub struct CmiReport {
    pub m: i64,
    pub i: i64,
    pub classes: usize,
    pub conductor_m: i64,
    pub conductor_m_plus_i: i64,
    pub fibers: usize,
    pub expected_fibers: u128,
    pub min_fiber: usize,
    pub max_fiber: usize,
    pub bruteforce: Option<u128>,
    pub closed_form: Option<u128>,
}

impl CmiReport {
    pub fn constant(&self) -> bool {
        self.min_fiber == self.max_fiber
    }

    pub fn holds(&self) -> bool {
        self.constant()
            && self.fibers as u128 == self.expected_fibers
            && self
                .closed_form
                .map_or(true, |c| Some(c) == self.bruteforce)
    }
}

/// Groups the lifts of `N_m / N_(m+i)` by `ab(h) mod p^con(m+i)`.
pub fn c_mi(s: &Scenario, m: i64, i: i64, budget: usize) -> Result<CmiReport, RelationError> {
    let ring = s.ring();
    let con_m = conductor(s, m, budget)?.conductor;
    let con_mi = conductor(s, m + i, budget)?.conductor;
    let lifts = lift_transversal(s, m, i, budget)?;
    let mut fibers: BTreeMap<(u64, u64), usize> = BTreeMap::new();
    for l in &lifts {
        *fibers.entry(key(&ring, &l.ab, con_mi)).or_default() += 1;
    }
    let min_fiber = *fibers.values().min().unwrap();
    let max_fiber = *fibers.values().max().unwrap();
    let torus = target_torus(s);
    let expected_fibers = torus.index(s.p, con_m, con_mi);
    Ok(CmiReport {
        m,
        i,
        classes: lifts.len(),
        conductor_m: con_m,
        conductor_m_plus_i: con_mi,
        fibers: fibers.len(),
        expected_fibers,
        min_fiber,
        max_fiber,
        bruteforce: (min_fiber == max_fiber).then_some(min_fiber as u128),
        closed_form: closed_cmi(s, m, i),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_rank_one() {
        let s = Scenario::build("so3-u1", None, None).unwrap();
        for m in 0..4 {
            let r = conductor(&s, m, 100_000).unwrap();
            assert_eq!(r.conductor, m, "{:?}", r);
            assert!(r.holds());
        }
        let c = c_mi(&s, 1, 1, 100_000).unwrap();
        assert_eq!(c.bruteforce, Some(1));
        assert!(c.holds(), "{:?}", c);
    }

    #[test]
    fn ggp_conductor_and_fibers() {
        let s = Scenario::build("ggp-gl-n2", None, None).unwrap();
        let r = conductor(&s, 1, 100_000).unwrap();
        assert!(r.holds(), "{:?}", r);
        let c = c_mi(&s, 1, 1, 100_000).unwrap();
        assert_eq!(c.bruteforce, Some(81), "{:?}", c);
        assert!(c.holds());
    }

    #[test]
    fn unsupported_for_diagonal_pair() {
        let s = Scenario::build("diag-gl2", None, None).unwrap();
        assert!(matches!(
            conductor(&s, 1, 1000),
            Err(RelationError::Unsupported(_))
        ));
    }
}
