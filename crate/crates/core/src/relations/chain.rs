//! Trace compatibility of ordinary chains on synthetic towers: with
//! `Pol = (X - b) sum b_i X^i` and `sum e_i Tr_(m+i,m)(Y_(m+i)) = 0`, the
//! classes `X_m = b^-m sum b_i Tr_(m+i,m)(Y_(m+i))` are trace compatible.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::RelationError;

#[derive(Clone, Copy, Debug)]
struct Zn(u64);

impl Zn {
    fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.0 as u128) as u64
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.0 - b % self.0)
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }
    fn inv(&self, a: u64) -> Option<u64> {
        let e = (a as i128).extended_gcd(&(self.0 as i128));
        (e.gcd == 1).then(|| e.x.rem_euclid(self.0 as i128) as u64)
    }
    fn pow(&self, a: u64, e: u64) -> u64 {
        (0..e).fold(1 % self.0, |acc, _| self.mul(acc, a))
    }
}

/// One step `Tr_(m+1,m) : R^(r+s) -> R^r`, `(x, z) -> x + A z`.
#[derive(Clone, Debug)]
struct Step {
    rows: usize,
    a: Vec<Vec<u64>>,
}

impl Step {
    fn apply(&self, r: &Zn, v: &[u64]) -> Vec<u64> {
        let (x, z) = v.split_at(self.rows);
        x.iter()
            .enumerate()
            .map(|(i, &xi)| {
                z.iter()
                    .enumerate()
                    .fold(xi, |acc, (j, &zj)| r.add(acc, r.mul(self.a[i][j], zj)))
            })
            .collect()
    }

    /// A random preimage: `(t - A z, z)` for random `z`.
    fn lift(&self, r: &Zn, t: &[u64], rng: &mut ChaCha8Rng) -> Vec<u64> {
        let extra = self.a.first().map_or(0, |row| row.len());
        let z: Vec<u64> = (0..extra).map(|_| rng.gen_range(0..r.0)).collect();
        let az = self.apply(r, &[vec![0; self.rows], z.clone()].concat());
        let mut out: Vec<u64> = t.iter().zip(&az).map(|(&ti, &ai)| r.sub(ti, ai)).collect();
        out.extend(z);
        out
    }
}

struct Tower {
    r: Zn,
    /// `steps[j]` maps level `j + 1` to level `j` (levels counted from 0).
    steps: Vec<Step>,
}

impl Tower {
    fn random(r: Zn, levels: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut rank = rng.gen_range(1..=2);
        let mut steps = vec![];
        for _ in 1..levels {
            let extra = rng.gen_range(0..=2);
            let a = (0..rank)
                .map(|_| (0..extra).map(|_| rng.gen_range(0..r.0)).collect())
                .collect();
            steps.push(Step { rows: rank, a });
            rank += extra;
        }
        Tower { r, steps }
    }

    fn rank(&self, level: usize) -> usize {
        match level {
            0 => self.steps.first().map_or(1, |s| s.rows),
            l => self.steps[l - 1].rows + self.steps[l - 1].a[0].len(),
        }
    }

    fn trace(&self, from: usize, to: usize, v: &[u64]) -> Vec<u64> {
        (to..from)
            .rev()
            .fold(v.to_vec(), |acc, j| self.steps[j].apply(&self.r, &acc))
    }

    fn lift(&self, from: usize, to: usize, t: &[u64], rng: &mut ChaCha8Rng) -> Vec<u64> {
        (from..to).fold(t.to_vec(), |acc, j| self.steps[j].lift(&self.r, &acc, rng))
    }

    fn random_vec(&self, level: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
        (0..self.rank(level))
            .map(|_| rng.gen_range(0..self.r.0))
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub modulus: u64,
    pub pol: Vec<u64>,
    pub b: u64,
    /// Cofactor `sum b_i X^i` with `Pol = (X - b) sum b_i X^i`.
    pub cofactor: Vec<u64>,
    pub length: usize,
    pub towers: usize,
    /// Input relations verified before forming `X_m`.
    pub relations_checked: usize,
    pub compatibilities_checked: usize,
    pub failures: usize,
    pub zero_chain_vanishes: bool,
}

impl ChainReport {
    pub fn holds(&self) -> bool {
        self.failures == 0 && self.zero_chain_vanishes
    }
}

/// `pol` lists `e_0, ..., e_k`. Builds `towers` random towers with `length`
/// compatible levels and checks `Tr_(m+1,m)(X_(m+1)) = X_m` for each step.
pub fn ordinary_chain_check(
    pol: &[u64],
    b: u64,
    length: usize,
    modulus: u64,
    towers: usize,
    seed: u64,
) -> Result<ChainReport, RelationError> {
    if modulus < 2 || pol.len() < 2 {
        return Err(RelationError::RelationUnsatisfiable(
            "need a modulus >= 2 and a polynomial of positive degree".into(),
        ));
    }
    let r = Zn(modulus);
    let e: Vec<u64> = pol.iter().map(|x| x % modulus).collect();
    let k = e.len() - 1;
    let b = b % modulus;
    let b_inv = r.inv(b).ok_or_else(|| {
        RelationError::RelationUnsatisfiable(format!("{} is not a unit mod {}", b, modulus))
    })?;
    let lead_inv = r.inv(e[k]).ok_or_else(|| {
        RelationError::RelationUnsatisfiable("leading coefficient is not a unit".into())
    })?;
    // Synthetic division by X - b.
    let mut cofactor = vec![0u64; k];
    let mut carry = 0u64;
    for i in (1..=k).rev() {
        carry = r.add(e[i], r.mul(carry, b));
        cofactor[i - 1] = carry;
    }
    if r.add(e[0], r.mul(carry, b)) != 0 {
        return Err(RelationError::RelationUnsatisfiable(format!(
            "Pol({}) != 0 mod {}",
            b, modulus
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let levels = length + k - 1;
    let x_chain = |tower: &Tower, y: &[Vec<u64>]| -> Vec<Vec<u64>> {
        (0..length)
            .map(|m| {
                let mut acc = vec![0; tower.rank(m)];
                for (i, &bi) in cofactor.iter().enumerate() {
                    let t = tower.trace(m + i, m, &y[m + i]);
                    acc = acc
                        .iter()
                        .zip(&t)
                        .map(|(&a, &ti)| r.add(a, r.mul(bi, ti)))
                        .collect();
                }
                // Level `m` stands for `m + 1`, so the twist is `b^-(m+1)`.
                let s = r.pow(b_inv, m as u64 + 1);
                acc.iter().map(|&a| r.mul(s, a)).collect()
            })
            .collect()
    };
    let relation = |tower: &Tower, y: &[Vec<u64>], m: usize| -> Vec<u64> {
        let mut acc = vec![0; tower.rank(m)];
        for (i, &ei) in e.iter().enumerate() {
            let t = tower.trace(m + i, m, &y[m + i]);
            acc = acc
                .iter()
                .zip(&t)
                .map(|(&a, &ti)| r.add(a, r.mul(ei, ti)))
                .collect();
        }
        acc
    };

    let mut relations_checked = 0;
    let mut compatibilities_checked = 0;
    let mut failures = 0;
    let mut zero_chain_vanishes = true;
    for _ in 0..towers {
        let tower = Tower::random(r, levels.max(1), &mut rng);
        // Free choices on the first k levels, then solve upwards through
        // the leading coefficient.
        let mut y: Vec<Vec<u64>> = (0..k.min(levels))
            .map(|l| tower.random_vec(l, &mut rng))
            .collect();
        while y.len() < levels {
            let m = y.len() - k;
            let mut rest = vec![0; tower.rank(m)];
            for (i, &ei) in e.iter().enumerate().take(k) {
                let t = tower.trace(m + i, m, &y[m + i]);
                rest = rest
                    .iter()
                    .zip(&t)
                    .map(|(&a, &ti)| r.add(a, r.mul(ei, ti)))
                    .collect();
            }
            let target: Vec<u64> = rest.iter().map(|&a| r.mul(lead_inv, r.sub(0, a))).collect();
            y.push(tower.lift(m, m + k, &target, &mut rng));
        }
        for m in (0..levels).take_while(|m| m + k < levels) {
            relations_checked += 1;
            if relation(&tower, &y, m).iter().any(|&v| v != 0) {
                return Err(RelationError::RelationUnsatisfiable(format!(
                    "input relation fails at level {}",
                    m
                )));
            }
        }
        let x = x_chain(&tower, &y);
        for m in 0..length.saturating_sub(1) {
            compatibilities_checked += 1;
            if tower.trace(m + 1, m, &x[m + 1]) != x[m] {
                failures += 1;
            }
        }
        let zeros: Vec<Vec<u64>> = (0..levels).map(|l| vec![0; tower.rank(l)]).collect();
        zero_chain_vanishes &= x_chain(&tower, &zeros)
            .iter()
            .all(|v| v.iter().all(|&c| c == 0));
    }
    Ok(ChainReport {
        modulus,
        pol: e,
        b,
        cofactor,
        length,
        towers,
        relations_checked,
        compatibilities_checked,
        failures,
        zero_chain_vanishes,
    })
}

/// `X^2 - T X + q S` with unit root `b` and second root `q c`:
/// `T = b + q c`, `S = b c`.
pub fn ordinary_quadratic(q: u64, b: u64, c: u64, modulus: u64) -> Vec<u64> {
    let r = Zn(modulus);
    let t = r.add(b, r.mul(q, c));
    let s = r.mul(b, c);
    vec![r.mul(q, s), r.sub(0, t), 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_reduces_to_input() {
        let r = ordinary_chain_check(&[81 - 5, 1], 5, 5, 81, 10, 1).unwrap();
        assert!(r.holds());
        assert_eq!(r.cofactor, vec![1]);
    }

    #[test]
    fn quadratic_over_z81() {
        let pol = ordinary_quadratic(3, 2, 7, 81);
        let r = ordinary_chain_check(&pol, 2, 5, 81, 100, 11).unwrap();
        assert!(r.holds(), "{:?}", r);
        assert_eq!(r.compatibilities_checked, 400);
        assert!(r.relations_checked > 0);
    }

    #[test]
    fn rejects_non_roots() {
        let pol = ordinary_quadratic(3, 2, 7, 81);
        assert!(matches!(
            ordinary_chain_check(&pol, 4, 5, 81, 1, 0),
            Err(RelationError::RelationUnsatisfiable(_))
        ));
        assert!(matches!(
            ordinary_chain_check(&[78, 1], 3, 5, 81, 1, 0),
            Err(RelationError::RelationUnsatisfiable(_))
        ));
    }
}
