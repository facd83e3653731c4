//! Weights of irreducible representations of the dual group.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::weyl::RootSystem;
use super::HeckeError;

/// A weight multiset.
pub type Weights = BTreeMap<Vec<i64>, u64>;

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Closure of a dominant weight under root strings.
pub fn saturated(rs: &RootSystem, mu: &[i64]) -> BTreeSet<Vec<i64>> {
    let mut seen = BTreeSet::from([mu.to_vec()]);
    let mut queue = VecDeque::from([mu.to_vec()]);
    while let Some(x) = queue.pop_front() {
        for k in 0..rs.roots.len() {
            let c = rs.pairing(k, &x);
            let (sign, steps) = if c >= 0 { (1, c) } else { (-1, -c) };
            for j in 1..=steps {
                let y: Vec<i64> = x
                    .iter()
                    .zip(&rs.coroots[k])
                    .map(|(v, a)| v - sign * j * a)
                    .collect();
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
    }
    seen
}

/// Multiplicities of the dominant weights of `V_mu` by Freudenthal's
/// recursion, largest first.
pub fn dominant_multiplicities(
    rs: &RootSystem,
    mu: &[i64],
) -> Result<Vec<(Vec<i64>, u64)>, HeckeError> {
    if !rs.is_dominant(mu) {
        return Err(HeckeError::NotDominant(mu.to_vec()));
    }
    let all = saturated(rs, mu);
    let mut dom: Vec<Vec<i64>> = all.iter().filter(|x| rs.is_dominant(x)).cloned().collect();
    dom.sort_by(|a, b| rs.pairing_2rho(b).cmp(&rs.pairing_2rho(a)).then(b.cmp(a)));
    let mut mult: BTreeMap<Vec<i64>, u64> = BTreeMap::new();
    let norm_mu = dot(mu, mu);
    for lam in &dom {
        if lam.as_slice() == mu {
            mult.insert(lam.clone(), 1);
            continue;
        }
        let diff: Vec<i64> = mu.iter().zip(lam).map(|(a, b)| a - b).collect();
        let denom = norm_mu - dot(lam, lam) + dot(&rs.rho2_dual, &diff);
        let mut num = 0i64;
        for a in &rs.coroots {
            let mut y: Vec<i64> = lam.clone();
            loop {
                for (v, c) in y.iter_mut().zip(a) {
                    *v += c;
                }
                if !all.contains(&y) {
                    break;
                }
                let (d, _, _) = rs.to_dominant(&y);
                num += 2 * dot(&y, a) * *mult.get(&d).unwrap_or(&0) as i64;
            }
        }
        if denom <= 0 || num % denom != 0 {
            return Err(HeckeError::Inconsistent(format!(
                "Freudenthal step at {:?}",
                lam
            )));
        }
        mult.insert(lam.clone(), (num / denom) as u64);
    }
    Ok(dom
        .into_iter()
        .map(|d| {
            let m = mult[&d];
            (d, m)
        })
        .filter(|(_, m)| *m > 0)
        .collect())
}

/// The full weight multiset of `V_mu`.
pub fn weight_multiplicities(rs: &RootSystem, mu: &[i64]) -> Result<Weights, HeckeError> {
    let mut out = Weights::new();
    for (d, m) in dominant_multiplicities(rs, mu)? {
        for w in rs.orbit(&d) {
            out.insert(w, m);
        }
    }
    Ok(out)
}

pub fn dimension(w: &Weights) -> u64 {
    w.values().sum()
}

/// Weight multisets of `Lambda^i` for `i = 0..=dim`.
pub fn exterior_powers(w: &Weights) -> Vec<Weights> {
    let n = w.keys().next().map_or(0, |k| k.len());
    let total = dimension(w) as usize;
    let mut layers: Vec<Weights> = vec![Weights::new(); total + 1];
    layers[0].insert(vec![0; n], 1);
    let mut used = 0usize;
    for (wt, &m) in w {
        for _ in 0..m {
            used += 1;
            for i in (1..=used).rev() {
                let prev: Vec<(Vec<i64>, u64)> =
                    layers[i - 1].iter().map(|(k, v)| (k.clone(), *v)).collect();
                for (k, v) in prev {
                    let s: Vec<i64> = k.iter().zip(wt).map(|(a, b)| a + b).collect();
                    *layers[i].entry(s).or_insert(0) += v;
                }
            }
        }
    }
    layers
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Descriptor;

    #[test]
    fn gl2_standard() {
        let rs = RootSystem::new(&Descriptor::gl(2, 3));
        let w = weight_multiplicities(&rs, &[1, 0]).unwrap();
        assert_eq!(w, Weights::from([(vec![1, 0], 1), (vec![0, 1], 1)]));
        let l = exterior_powers(&w);
        assert_eq!(l[2], Weights::from([(vec![1, 1], 1)]));
        assert_eq!(l[1], w);
        assert_eq!(l[0], Weights::from([(vec![0, 0], 1)]));
    }

    #[test]
    fn gl3_adjoint() {
        let rs = RootSystem::new(&Descriptor::gl(3, 3));
        let w = weight_multiplicities(&rs, &[1, 0, -1]).unwrap();
        assert_eq!(dimension(&w), 8);
        assert_eq!(w[&vec![0, 0, 0]], 2);
        assert_eq!(w.len(), 7);
    }

    #[test]
    fn sp4_dual_dimensions() {
        // Dual of SO(5) is Sp(4): (1,0) -> 4, (1,1) -> 5, (2,1) -> 16.
        let rs = RootSystem::new(&Descriptor::so_odd_standard(5, 3));
        let dim = |mu: &[i64]| dimension(&weight_multiplicities(&rs, mu).unwrap());
        assert_eq!(dim(&[1, 0, 0, 0, -1]), 4);
        assert_eq!(dim(&[1, 1, 0, -1, -1]), 5);
        assert_eq!(dim(&[2, 1, 0, -1, -2]), 16);
        assert_eq!(dim(&[0; 5]), 1);
    }

    #[test]
    fn not_dominant_rejected() {
        let rs = RootSystem::new(&Descriptor::gl(2, 3));
        assert!(weight_multiplicities(&rs, &[0, 1]).is_err());
    }
}
