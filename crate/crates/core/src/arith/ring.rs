//! A small ring abstraction so that chart maps and factorizations can be
//! evaluated both in `Z/p^N` and in its dual numbers (for exact Jacobians).

use num_rational::BigRational;

use super::PRing;

pub trait Ring: Copy {
    type E: Copy + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn add(&self, a: Self::E, b: Self::E) -> Self::E;
    fn sub(&self, a: Self::E, b: Self::E) -> Self::E;
    fn mul(&self, a: Self::E, b: Self::E) -> Self::E;
    fn neg(&self, a: Self::E) -> Self::E;
    fn inv(&self, a: Self::E) -> Option<Self::E>;
    fn from_i64(&self, v: i64) -> Self::E;
    fn from_rational(&self, r: &BigRational) -> Option<Self::E>;
    /// Image of a residue of the underlying `Z/p^N`.
    fn embed(&self, a: u64) -> Self::E;
}

impl Ring for PRing {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: u64, b: u64) -> u64 {
        PRing::add(self, a, b)
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        PRing::sub(self, a, b)
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        PRing::mul(self, a, b)
    }
    fn neg(&self, a: u64) -> u64 {
        PRing::neg(self, a)
    }
    fn inv(&self, a: u64) -> Option<u64> {
        PRing::inv(self, a)
    }
    fn from_i64(&self, v: i64) -> u64 {
        PRing::from_i64(self, v)
    }
    fn from_rational(&self, r: &BigRational) -> Option<u64> {
        self.reduce_rational(r).ok()
    }
    fn embed(&self, a: u64) -> u64 {
        a
    }
}

/// `Z/p^N[e]/(e^2)`.
#[derive(Clone, Copy, Debug)]
pub struct DualRing(pub PRing);

impl Ring for DualRing {
    type E = (u64, u64);
    fn zero(&self) -> (u64, u64) {
        (0, 0)
    }
    fn one(&self) -> (u64, u64) {
        (1, 0)
    }
    fn add(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        (self.0.add(a.0, b.0), self.0.add(a.1, b.1))
    }
    fn sub(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        (self.0.sub(a.0, b.0), self.0.sub(a.1, b.1))
    }
    fn mul(&self, a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
        let r = &self.0;
        (r.mul(a.0, b.0), r.add(r.mul(a.0, b.1), r.mul(a.1, b.0)))
    }
    fn neg(&self, a: (u64, u64)) -> (u64, u64) {
        (self.0.neg(a.0), self.0.neg(a.1))
    }
    fn inv(&self, a: (u64, u64)) -> Option<(u64, u64)> {
        let r = &self.0;
        let i = r.inv(a.0)?;
        Some((i, r.neg(r.mul(a.1, r.mul(i, i)))))
    }
    fn from_i64(&self, v: i64) -> (u64, u64) {
        (self.0.from_i64(v), 0)
    }
    fn from_rational(&self, r: &BigRational) -> Option<(u64, u64)> {
        Some((self.0.reduce_rational(r).ok()?, 0))
    }
    fn embed(&self, a: u64) -> (u64, u64) {
        (a, 0)
    }
}

/// Row-major square matrices over a [`Ring`].
pub fn mat_mul<R: Ring>(r: &R, n: usize, a: &[R::E], b: &[R::E]) -> Vec<R::E> {
    let mut out = vec![r.zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == r.zero() {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = r.add(out[i * n + j], r.mul(x, b[k * n + j]));
            }
        }
    }
    out
}

pub fn mat_identity<R: Ring>(r: &R, n: usize) -> Vec<R::E> {
    let mut out = vec![r.zero(); n * n];
    for i in 0..n {
        out[i * n + i] = r.one();
    }
    out
}

/// Inverse of a matrix whose determinant is a unit.
pub fn mat_inv<R: Ring>(r: &R, n: usize, m: &[R::E]) -> Option<Vec<R::E>> {
    let mut a = m.to_vec();
    let mut inv = mat_identity(r, n);
    for k in 0..n {
        let (piv, pinv) = (k..n).find_map(|i| r.inv(a[i * n + k]).map(|x| (i, x)))?;
        for c in 0..n {
            a.swap(k * n + c, piv * n + c);
            inv.swap(k * n + c, piv * n + c);
        }
        for c in 0..n {
            a[k * n + c] = r.mul(a[k * n + c], pinv);
            inv[k * n + c] = r.mul(inv[k * n + c], pinv);
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = a[i * n + k];
            if f == r.zero() {
                continue;
            }
            for c in 0..n {
                a[i * n + c] = r.sub(a[i * n + c], r.mul(f, a[k * n + c]));
                inv[i * n + c] = r.sub(inv[i * n + c], r.mul(f, inv[k * n + c]));
            }
        }
    }
    Some(inv)
}

/// `h = U L` with `U` upper unitriangular and `L` lower triangular, valid
/// when the trailing principal minors of `h` are units. Returns `U`.
pub fn upper_part<R: Ring>(r: &R, n: usize, h: &[R::E]) -> Option<Vec<R::E>> {
    // Clear the entries above the diagonal, last column first.
    let mut a = h.to_vec();
    let mut u = mat_identity(r, n);
    for k in (0..n).rev() {
        let pinv = r.inv(a[k * n + k])?;
        for i in 0..k {
            let f = r.mul(a[i * n + k], pinv);
            if f == r.zero() {
                continue;
            }
            for c in 0..n {
                a[i * n + c] = r.sub(a[i * n + c], r.mul(f, a[k * n + c]));
            }
            // U <- U (1 + f E_ik)
            for c in 0..n {
                let t = r.mul(f, u[c * n + i]);
                u[c * n + k] = r.add(u[c * n + k], t);
            }
        }
    }
    Some(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_inverse() {
        let r = DualRing(PRing::new(3));
        let a = (2u64, 5u64);
        let i = r.inv(a).unwrap();
        assert_eq!(r.mul(a, i), r.one());
    }

    #[test]
    fn upper_part_recovers_factorization() {
        let r = PRing::new(5);
        let n = 3;
        let up: Vec<u64> = [1, 2, 3, 0, 1, 4, 0, 0, 1]
            .iter()
            .map(|&x| r.from_i64(x))
            .collect();
        let lo: Vec<u64> = [2, 0, 0, 1, 3, 0, 4, 5, 1]
            .iter()
            .map(|&x| r.from_i64(x))
            .collect();
        let h = mat_mul(&r, n, &up, &lo);
        assert_eq!(upper_part(&r, n, &h).unwrap(), up);
        let inv = mat_inv(&r, n, &h).unwrap();
        assert_eq!(mat_mul(&r, n, &h, &inv), mat_identity(&r, n));
    }
}
