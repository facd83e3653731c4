//! Weyl group bookkeeping on cocharacters, with coroots as reflection vectors.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::groups::Descriptor;

/// Positive roots paired with their coroots, cached once per descriptor.
#[derive(Clone, Debug)]
pub struct RootSystem {
    /// `(a, b)` with `<alpha, x> = x[a] - x[b]`.
    pub roots: Vec<(usize, usize)>,
    pub coroots: Vec<Vec<i64>>,
    /// Sum of the positive coroots.
    pub rho2_dual: Vec<i64>,
    pub dim: usize,
}

impl RootSystem {
    pub fn new(g: &Descriptor) -> Self {
        let coroots = g.positive_coroots();
        let mut rho2_dual = vec![0; g.dim];
        for c in &coroots {
            for (r, x) in rho2_dual.iter_mut().zip(c) {
                *r += x;
            }
        }
        RootSystem {
            roots: g.positive.iter().map(|r| (r.a, r.b)).collect(),
            coroots,
            rho2_dual,
            dim: g.dim,
        }
    }

    pub fn pairing(&self, k: usize, x: &[i64]) -> i64 {
        let (a, b) = self.roots[k];
        x[a] - x[b]
    }

    /// `<2 rho, x>` for the roots of the group.
    pub fn pairing_2rho(&self, x: &[i64]) -> i64 {
        (0..self.roots.len()).map(|k| self.pairing(k, x)).sum()
    }

    pub fn reflect(&self, k: usize, x: &[i64]) -> Vec<i64> {
        let c = self.pairing(k, x);
        x.iter()
            .zip(&self.coroots[k])
            .map(|(v, a)| v - c * a)
            .collect()
    }

    pub fn is_dominant(&self, x: &[i64]) -> bool {
        (0..self.roots.len()).all(|k| self.pairing(k, x) >= 0)
    }

    /// Dominant representative, the parity of the reflections used, and
    /// whether the representative is regular.
    pub fn to_dominant(&self, x: &[i64]) -> (Vec<i64>, i32, bool) {
        let mut cur = x.to_vec();
        let mut sign = 1;
        'outer: loop {
            for k in 0..self.roots.len() {
                if self.pairing(k, &cur) < 0 {
                    cur = self.reflect(k, &cur);
                    sign = -sign;
                    continue 'outer;
                }
            }
            break;
        }
        let regular = (0..self.roots.len()).all(|k| self.pairing(k, &cur) > 0);
        (cur, sign, regular)
    }

    pub fn orbit(&self, x: &[i64]) -> Vec<Vec<i64>> {
        let mut seen = BTreeSet::from([x.to_vec()]);
        let mut queue = VecDeque::from([x.to_vec()]);
        while let Some(y) = queue.pop_front() {
            for k in 0..self.roots.len() {
                let z = self.reflect(k, &y);
                if seen.insert(z.clone()) {
                    queue.push_back(z);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Poincare polynomial `sum_(w in W_x) t^(l(w))` of the stabilizer of `x`,
    /// as a coefficient list.
    pub fn stabilizer_poincare(&self, x: &[i64]) -> Vec<u64> {
        // Elements of W are tracked through their image of the regular
        // vector rho2_dual; length = number of positive roots made negative.
        let start = (self.rho2_dual.clone(), x.to_vec());
        let mut seen = BTreeMap::from([(start.0.clone(), start.1.clone())]);
        let mut queue = VecDeque::from([start]);
        while let Some((r, y)) = queue.pop_front() {
            for k in 0..self.roots.len() {
                let r2 = self.reflect(k, &r);
                if !seen.contains_key(&r2) {
                    let y2 = self.reflect(k, &y);
                    seen.insert(r2.clone(), y2.clone());
                    queue.push_back((r2, y2));
                }
            }
        }
        let mut poly = vec![0u64; self.roots.len() + 1];
        for (r, y) in &seen {
            if y.as_slice() == x {
                let len = (0..self.roots.len())
                    .filter(|&k| self.pairing(k, r) < 0)
                    .count();
                poly[len] += 1;
            }
        }
        while poly.len() > 1 && *poly.last().unwrap() == 0 {
            poly.pop();
        }
        poly
    }

    pub fn weyl_order(&self) -> u64 {
        self.stabilizer_poincare(&vec![0; self.dim]).iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_orders() {
        assert_eq!(RootSystem::new(&Descriptor::gl(3, 3)).weyl_order(), 6);
        assert_eq!(
            RootSystem::new(&Descriptor::so_odd_standard(5, 3)).weyl_order(),
            8
        );
        assert_eq!(RootSystem::new(&Descriptor::gl(1, 3)).weyl_order(), 1);
    }

    #[test]
    fn stabilizer_of_minuscule() {
        let rs = RootSystem::new(&Descriptor::gl(3, 2));
        // Stabilizer of (1,0,0) is S_2: 1 + t.
        assert_eq!(rs.stabilizer_poincare(&[1, 0, 0]), vec![1, 1]);
        assert_eq!(rs.stabilizer_poincare(&[0, 0, 0]), vec![1, 2, 2, 1]);
    }

    #[test]
    fn signed_dominant_rep() {
        let rs = RootSystem::new(&Descriptor::gl(2, 2));
        assert_eq!(rs.to_dominant(&[0, 1]), (vec![1, 0], -1, true));
        assert_eq!(rs.to_dominant(&[1, 1]), (vec![1, 1], 1, false));
    }
}
