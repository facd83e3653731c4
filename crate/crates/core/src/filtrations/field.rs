//! Prime fields and their quadratic extensions, with small dense linear
//! algebra over `F_p`.

use serde::Serialize;

/// `F_p` for an odd or even prime `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 32), "field characteristic out of range");
        Fp { p }
    }
    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }
    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a) % self.p
    }
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }
    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let (mut base, mut out) = (a % self.p, 1 % self.p);
        while e > 0 {
            if e & 1 == 1 {
                out = self.mul(out, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        out
    }
    pub fn inv(&self, a: u64) -> Option<u64> {
        (a % self.p != 0).then(|| self.pow(a, self.p - 2))
    }
    pub fn is_square(&self, a: u64) -> bool {
        a % self.p == 0 || self.p == 2 || self.pow(a, (self.p - 1) / 2) == 1
    }
    /// Smallest generator of `F_p^*`.
    pub fn generator(&self) -> u64 {
        if self.p == 2 {
            return 1;
        }
        let order = self.p - 1;
        let primes: Vec<u64> = (2..=order)
            .filter(|d| order % d == 0 && (2..*d).all(|e| d % e != 0))
            .collect();
        (2..self.p)
            .find(|&g| primes.iter().all(|&l| self.pow(g, order / l) != 1))
            .unwrap()
    }

    pub fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        a.iter()
            .zip(b)
            .fold(0, |acc, (x, y)| (acc + x * y) % self.p)
    }

    /// `M v` for a square row-major matrix.
    pub fn apply(&self, m: &[Vec<u64>], v: &[u64]) -> Vec<u64> {
        m.iter().map(|row| self.dot(row, v)).collect()
    }

    pub fn mat_mul(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let n = b.first().map_or(0, |r| r.len());
        a.iter()
            .map(|row| {
                (0..n)
                    .map(|j| {
                        row.iter()
                            .zip(b)
                            .fold(0, |acc, (x, r)| (acc + x * r[j]) % self.p)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn identity(&self, n: usize) -> Vec<Vec<u64>> {
        (0..n)
            .map(|i| (0..n).map(|j| (i == j) as u64).collect())
            .collect()
    }

    pub fn transpose(&self, a: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let n = a.first().map_or(0, |r| r.len());
        (0..n).map(|j| a.iter().map(|r| r[j]).collect()).collect()
    }

    /// Reduced row echelon form; zero rows dropped.
    pub fn rref(&self, rows: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let mut a: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|x| x % self.p).collect())
            .collect();
        let cols = a.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..a.len()).find(|&r| a[r][c] != 0) else {
                continue;
            };
            a.swap(rank, piv);
            let inv = self.inv(a[rank][c]).unwrap();
            for x in a[rank].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for r in 0..a.len() {
                if r != rank && a[r][c] != 0 {
                    let f = a[r][c];
                    for j in 0..cols {
                        a[r][j] = self.sub(a[r][j], self.mul(f, a[rank][j]));
                    }
                }
            }
            rank += 1;
        }
        a.truncate(rank);
        a
    }

    pub fn rank(&self, rows: &[Vec<u64>]) -> usize {
        self.rref(rows).len()
    }

    /// Basis of `{x : R x = 0}` for rows `R` of length `n`.
    pub fn nullspace(&self, rows: &[Vec<u64>], n: usize) -> Vec<Vec<u64>> {
        let r = self.rref(rows);
        let pivots: Vec<usize> = r
            .iter()
            .map(|row| row.iter().position(|&x| x != 0).unwrap())
            .collect();
        (0..n)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![0; n];
                v[free] = 1;
                for (row, &pc) in r.iter().zip(&pivots) {
                    v[pc] = self.neg(row[free]);
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self, m: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
        let n = m.len();
        let aug: Vec<Vec<u64>> = m
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .copied()
                    .chain((0..n).map(|j| (i == j) as u64))
                    .collect()
            })
            .collect();
        let r = self.rref(&aug);
        if r.len() < n || (0..n).any(|i| r[i][i] != 1) {
            return None;
        }
        Some(r.iter().map(|row| row[n..].to_vec()).collect())
    }

    pub fn det(&self, m: &[Vec<u64>]) -> u64 {
        let n = m.len();
        let mut a = m.to_vec();
        let mut det = 1;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| a[r][c] != 0) else {
                return 0;
            };
            if piv != c {
                a.swap(piv, c);
                det = self.neg(det);
            }
            det = self.mul(det, a[c][c]);
            let inv = self.inv(a[c][c]).unwrap();
            for r in c + 1..n {
                let f = self.mul(a[r][c], inv);
                for j in c..n {
                    a[r][j] = self.sub(a[r][j], self.mul(f, a[c][j]));
                }
            }
        }
        det
    }

    /// Cayley transform `(1 + X)(1 - X)^-1`, preserving any form that `X`
    /// is skew for; `None` unless both factors are invertible.
    pub fn cayley(&self, x: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
        let n = x.len();
        let id = self.identity(n);
        let plus: Vec<Vec<u64>> = (0..n)
            .map(|i| (0..n).map(|j| self.add(id[i][j], x[i][j])).collect())
            .collect();
        let minus: Vec<Vec<u64>> = (0..n)
            .map(|i| (0..n).map(|j| self.sub(id[i][j], x[i][j])).collect())
            .collect();
        if self.det(&plus) == 0 {
            return None;
        }
        Some(self.mat_mul(&plus, &self.inverse(&minus)?))
    }
}

/// `h = F_p(eta)` with `eta^2 = u` a non-square; elements are `a + b eta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fq2 {
    pub k: Fp,
    pub u: u64,
}

pub type Fq2Elt = (u64, u64);

impl Fq2 {
    pub fn new(p: u64, u: i64) -> Option<Self> {
        let k = Fp::new(p);
        let u = k.from_i64(u);
        (p != 2 && !k.is_square(u)).then_some(Fq2 { k, u })
    }
    pub fn add(&self, a: Fq2Elt, b: Fq2Elt) -> Fq2Elt {
        (self.k.add(a.0, b.0), self.k.add(a.1, b.1))
    }
    pub fn mul(&self, a: Fq2Elt, b: Fq2Elt) -> Fq2Elt {
        let k = &self.k;
        (
            k.add(k.mul(a.0, b.0), k.mul(self.u, k.mul(a.1, b.1))),
            k.add(k.mul(a.0, b.1), k.mul(a.1, b.0)),
        )
    }
    /// The `q`-power map, computed by exponentiation.
    pub fn frobenius(&self, a: Fq2Elt) -> Fq2Elt {
        let (mut base, mut out, mut e) = (a, (1, 0), self.k.p);
        while e > 0 {
            if e & 1 == 1 {
                out = self.mul(out, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        out
    }
    /// `a - b eta`, which agrees with [`Fq2::frobenius`].
    pub fn conj(&self, a: Fq2Elt) -> Fq2Elt {
        (a.0, self.k.neg(a.1))
    }
    pub fn elements(&self) -> impl Iterator<Item = Fq2Elt> + '_ {
        let p = self.k.p;
        (0..p * p).map(move |i| (i % p, i / p))
    }
    /// `sum_ij conj(x_i) g_ij y_j`.
    pub fn hermitian(&self, gram: &[Vec<Fq2Elt>], x: &[Fq2Elt], y: &[Fq2Elt]) -> Fq2Elt {
        let mut acc = (0, 0);
        for (i, row) in gram.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                acc = self.add(acc, self.mul(self.conj(x[i]), self.mul(*g, y[j])));
            }
        }
        acc
    }
    /// Isotropic points of the projective line of a binary hermitian form.
    pub fn isotropic_lines(&self, gram: &[Vec<Fq2Elt>]) -> usize {
        // Normalize to (1, t) or (0, 1).
        let mut count =
            (self.hermitian(gram, &[(0, 0), (1, 0)], &[(0, 0), (1, 0)]) == (0, 0)) as usize;
        for t in self.elements() {
            let v = [(1, 0), t];
            count += (self.hermitian(gram, &v, &v) == (0, 0)) as usize;
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let k = Fp::new(7);
        assert_eq!(k.mul(k.inv(3).unwrap(), 3), 1);
        assert_eq!(k.generator(), 3);
        assert!(k.is_square(2) && !k.is_square(3));
        let m = vec![vec![1, 2], vec![3, 4]];
        assert_eq!(k.mat_mul(&m, &k.inverse(&m).unwrap()), k.identity(2));
        assert_eq!(k.det(&m), k.from_i64(-2));
        assert_eq!(k.nullspace(&[vec![1, 1, 0]], 3).len(), 2);
    }

    #[test]
    fn conjugation_is_frobenius() {
        let h = Fq2::new(3, 2).unwrap();
        for a in h.elements() {
            assert_eq!(h.frobenius(a), h.conj(a));
        }
        assert!(Fq2::new(3, 1).is_none());
    }

    #[test]
    fn hyperbolic_hermitian_plane_has_q_plus_one_isotropic_lines() {
        for (p, u) in [(3, 2), (5, 2), (7, 3)] {
            let h = Fq2::new(p, u).unwrap();
            let gram = vec![vec![(0, 0), (1, 0)], vec![(1, 0), (0, 0)]];
            assert_eq!(h.isotropic_lines(&gram), p as usize + 1);
        }
    }
}
