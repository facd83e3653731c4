//! Closed forms for conductors and fiber constants.

use crate::groups::{Scenario, ScenarioKind};

/// `min(a_(k+1) - a_k, b_j - b_(j+1))` for the GGP pair, where the
/// `GL(n)` block of `mu` lists `a_n, .., a_1` (the block is conjugated by
/// the long Weyl element).
pub fn ggp_gap(s: &Scenario) -> Option<i64> {
    if s.info.kind != ScenarioKind::Ggp {
        return None;
    }
    let n = s.info.rank;
    let b = &s.mu[..=n];
    let a: Vec<i64> = (1..=n).map(|k| s.mu[n + 1 + (n - k)]).collect();
    let gaps_a = a.windows(2).map(|w| w[1] - w[0]);
    let gaps_b = b.windows(2).map(|w| w[0] - w[1]);
    gaps_a.chain(gaps_b).min()
}

/// `con(m)` where a closed form is known.
pub fn closed_conductor(s: &Scenario, m: i64) -> Option<i64> {
    let mu = &s.mu;
    match s.info.kind {
        ScenarioKind::Unitary => Some(m * mu[s.info.rank - 1]),
        ScenarioKind::Gsp4 => Some(m * (mu[0] - mu[1])),
        ScenarioKind::Ggp => Some(m * ggp_gap(s)?),
        _ => None,
    }
}

/// `c(m, i)` where a closed form is known.
pub fn closed_cmi(s: &Scenario, _m: i64, i: i64) -> Option<u128> {
    let mu = &s.mu;
    let q = s.p as u128;
    let e = match s.info.kind {
        ScenarioKind::Unitary => s.g.pairing_2rho(mu) - mu[s.info.rank - 1],
        ScenarioKind::Gsp4 => 2 * mu[0] + mu[1] - 2 * mu[2] - mu[3],
        ScenarioKind::Ggp => {
            let n = s.info.rank as i64;
            let b = |k: i64| mu[(k - 1) as usize];
            let a = |k: i64| mu[(n + 1 + (n - k)) as usize];
            let sb: i64 = (1..=n + 1).map(|k| (n + 2 - 2 * k) * b(k)).sum();
            let sa: i64 = (1..=n).map(|k| (n + 1 - 2 * k) * a(n + 1 - k)).sum();
            sb + sa - ggp_gap(s)?
        }
        _ => return None,
    };
    q.checked_pow((i * e) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_values() {
        let s = Scenario::build("so5-u2", None, None).unwrap();
        assert_eq!(closed_cmi(&s, 1, 1), Some(729));
        assert_eq!(closed_conductor(&s, 2), Some(2));
        let s = Scenario::build("so3-u1", None, None).unwrap();
        assert_eq!(closed_cmi(&s, 1, 1), Some(1));
        let s = Scenario::build("gsp4", None, None).unwrap();
        assert_eq!(closed_cmi(&s, 1, 1), Some(729));
        assert_eq!(closed_conductor(&s, 1), Some(1));
        let s = Scenario::build("ggp-gl-n2", None, None).unwrap();
        assert_eq!(ggp_gap(&s), Some(1));
        assert_eq!(closed_cmi(&s, 1, 1), Some(81));
        assert_eq!(closed_conductor(&s, 2), Some(2));
    }
}
