//! Matrices over `Q_p` stored as `p^-shift * M` with `M` integral and known
//! modulo `p^digits`. This is the representation used by every enumeration
//! kernel; exact matrices are converted in at the boundary.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::residue::{inv_mod, max_precision};
use super::{ArithError, ExactScalar, Matrix, Scalar};

/// `Z/p^N` with `N` the largest precision that fits the 64-bit kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PRing {
    pub p: u64,
    pub prec: u32,
    pub modulus: u64,
    mask: u64,
}

impl PRing {
    pub fn new(p: u64) -> Self {
        let prec = max_precision(p);
        let modulus = p.pow(prec);
        let mask = if p == 2 { modulus - 1 } else { 0 };
        PRing {
            p,
            prec,
            modulus,
            mask,
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.mask != 0 {
            a.wrapping_mul(b) & self.mask
        } else {
            ((a as u128 * b as u128) % self.modulus as u128) as u64
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.modulus as i64) as u64
    }

    /// Signed representative in `(-m/2, m/2]`.
    pub fn to_signed(&self, v: u64) -> i128 {
        if v > self.modulus / 2 {
            v as i128 - self.modulus as i128
        } else {
            v as i128
        }
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        inv_mod(a, self.modulus)
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// `p^k` (zero once `k >= prec`).
    pub fn p_pow(&self, k: u32) -> u64 {
        if k >= self.prec {
            0
        } else {
            self.p.pow(k)
        }
    }

    /// Valuation of a residue, capped at `prec`.
    #[inline]
    pub fn val(&self, a: u64) -> u32 {
        if a == 0 {
            return self.prec;
        }
        if self.p == 2 {
            return a.trailing_zeros();
        }
        let mut k = 0;
        let mut x = a;
        while x % self.p == 0 {
            x /= self.p;
            k += 1;
        }
        k
    }

    pub fn reduce_rational(&self, r: &num_rational::BigRational) -> Result<u64, ArithError> {
        let m = BigInt::from(self.modulus);
        let den = r.denom().mod_floor(&m).to_u64().unwrap();
        let di = self.inv(den).ok_or(ArithError::NegativeValuation)?;
        let num = r.numer().mod_floor(&m).to_u64().unwrap();
        Ok(self.mul(num, di))
    }
}

/// `g = p^-shift * m`.
#[derive(Clone, Debug)]
pub struct PMat {
    pub ring: PRing,
    pub n: usize,
    pub shift: i32,
    pub digits: u32,
    pub vdet: i64,
    pub m: Vec<u64>,
}

impl PMat {
    pub fn identity(ring: PRing, n: usize) -> Self {
        let mut m = vec![0; n * n];
        for i in 0..n {
            m[i * n + i] = 1;
        }
        PMat {
            ring,
            n,
            shift: 0,
            digits: ring.prec,
            vdet: 0,
            m,
        }
    }

    /// Integral matrix with known determinant valuation.
    pub fn from_integral(ring: PRing, n: usize, m: Vec<u64>, vdet: i64) -> Self {
        let mut g = PMat {
            ring,
            n,
            shift: 0,
            digits: ring.prec,
            vdet,
            m,
        };
        g.normalize().expect("nonzero matrix");
        g
    }

    /// Integral matrix from signed entries; the determinant valuation is
    /// computed exactly.
    pub fn from_i64(ring: PRing, n: usize, entries: &[i64]) -> Self {
        let exact = Matrix::from_vec(
            n,
            n,
            entries
                .iter()
                .map(|&x| ExactScalar::from_int(ring.p, x))
                .collect(),
        );
        Self::from_exact(ring, &exact).expect("invertible integral matrix")
    }

    /// Conversion from an exact invertible matrix.
    pub fn from_exact(ring: PRing, g: &Matrix<ExactScalar>) -> Result<Self, ArithError> {
        let n = g.rows();
        let vdet = g.det().valuation().ok_or(ArithError::Singular)?;
        let minv = g.min_valuation().ok_or(ArithError::Singular)?;
        let shift = -minv;
        let mut m = Vec::with_capacity(n * n);
        for x in g.entries() {
            if x.is_zero() {
                m.push(0);
                continue;
            }
            let y = x.mul(&ExactScalar::p_power(ring.p, shift));
            let r = ring.reduce_rational(&y.to_rational())?;
            m.push(r);
        }
        Ok(PMat {
            ring,
            n,
            shift: shift as i32,
            digits: ring.prec,
            vdet,
            m,
        })
    }

    /// `diag(p^e_1, ..., p^e_n)`.
    pub fn diag_p_powers(ring: PRing, exps: &[i64]) -> Self {
        let n = exps.len();
        let lo = *exps.iter().min().unwrap_or(&0);
        let mut m = vec![0; n * n];
        for (i, &e) in exps.iter().enumerate() {
            m[i * n + i] = ring.p_pow((e - lo) as u32);
        }
        PMat {
            ring,
            n,
            shift: -lo as i32,
            digits: ring.prec,
            vdet: exps.iter().sum(),
            m,
        }
    }

    /// Diagonal matrix of residues (assumed units).
    pub fn diag_units(ring: PRing, d: &[u64]) -> Self {
        let n = d.len();
        let mut m = vec![0; n * n];
        for (i, &x) in d.iter().enumerate() {
            m[i * n + i] = x % ring.modulus;
        }
        PMat {
            ring,
            n,
            shift: 0,
            digits: ring.prec,
            vdet: 0,
            m,
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.m[r * self.n + c]
    }

    /// Valuation of entry `(r, c)` of `g`; `None` if it vanishes to the
    /// known precision.
    pub fn entry_val(&self, r: usize, c: usize) -> Option<i64> {
        let x = self.get(r, c) % self.ring.p_pow_or_modulus(self.digits);
        if x == 0 {
            None
        } else {
            Some(self.ring.val(x) as i64 - self.shift as i64)
        }
    }

    /// Known absolute precision of the entries of `g`.
    pub fn abs_precision(&self) -> i64 {
        self.digits as i64 - self.shift as i64
    }

    pub fn is_integral(&self) -> bool {
        self.shift <= 0
    }

    /// Divides out the common power of `p`, so that the minimum entry
    /// valuation of `m` is zero.
    pub fn normalize(&mut self) -> Result<(), ArithError> {
        let cap = self.ring.p_pow_or_modulus(self.digits);
        let mut k = self.digits;
        for &x in &self.m {
            let x = x % cap;
            if x != 0 {
                k = k.min(self.ring.val(x));
                if k == 0 {
                    break;
                }
            }
        }
        if k >= self.digits {
            return Err(ArithError::PrecisionExhausted);
        }
        if k > 0 {
            let pk = self.ring.p.pow(k);
            let cap2 = self.ring.p_pow_or_modulus(self.digits - k);
            for x in self.m.iter_mut() {
                *x = (*x % cap) / pk % cap2;
            }
            self.shift -= k as i32;
            self.digits -= k;
        }
        Ok(())
    }

    pub fn try_mul(&self, o: &PMat) -> Result<PMat, ArithError> {
        debug_assert_eq!(self.n, o.n);
        let n = self.n;
        let r = &self.ring;
        let mut m = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.m[i * n + k];
                if a == 0 {
                    continue;
                }
                let row = &o.m[k * n..(k + 1) * n];
                let out = &mut m[i * n..(i + 1) * n];
                for j in 0..n {
                    if row[j] != 0 {
                        out[j] = r.add(out[j], r.mul(a, row[j]));
                    }
                }
            }
        }
        let mut g = PMat {
            ring: self.ring,
            n,
            shift: self.shift + o.shift,
            digits: self.digits.min(o.digits),
            vdet: self.vdet + o.vdet,
            m,
        };
        g.normalize()?;
        Ok(g)
    }

    pub fn mul(&self, o: &PMat) -> PMat {
        self.try_mul(o).expect("precision exhausted in product")
    }

    /// `D^-1 g D` for `D = diag(p^e)`: entry `(a, b)` is scaled by `p^(e_b - e_a)`.
    pub fn conj_diag(&self, e: &[i64]) -> PMat {
        let n = self.n;
        let mut c = 0i64;
        for a in 0..n {
            for b in 0..n {
                c = c.max(e[a] - e[b]);
            }
        }
        let mut m = vec![0u64; n * n];
        for a in 0..n {
            for b in 0..n {
                let x = self.m[a * n + b];
                if x != 0 {
                    let t = (e[b] - e[a] + c) as u32;
                    m[a * n + b] = self.ring.mul(x, self.ring.p_pow(t));
                }
            }
        }
        let mut g = PMat {
            ring: self.ring,
            n,
            shift: self.shift + c as i32,
            digits: self.digits,
            vdet: self.vdet,
            m,
        };
        g.normalize().expect("nonzero");
        g
    }

    /// Inverse via elimination with pivots of least valuation.
    pub fn try_inverse(&self) -> Result<PMat, ArithError> {
        let n = self.n;
        let r = self.ring;
        let mut a = self.m.clone();
        let mut u = PMat::identity(r, n).m;
        let mut v = PMat::identity(r, n).m;
        let mut dexp = vec![0u32; n];
        let mut dunit = vec![0u64; n];
        for k in 0..n {
            let mut best = (u32::MAX, 0, 0);
            for i in k..n {
                for j in k..n {
                    let x = a[i * n + j];
                    if x != 0 {
                        let vv = r.val(x);
                        if vv < best.0 {
                            best = (vv, i, j);
                        }
                    }
                }
            }
            if best.0 >= self.digits {
                return Err(ArithError::Singular);
            }
            let (d, pi, pj) = best;
            for c in 0..n {
                a.swap(k * n + c, pi * n + c);
                u.swap(k * n + c, pi * n + c);
            }
            for rr in 0..n {
                a.swap(rr * n + k, rr * n + pj);
                v.swap(rr * n + k, rr * n + pj);
            }
            let pd = r.p.pow(d);
            let w = a[k * n + k] / pd;
            let winv = r.inv(w).ok_or(ArithError::NotInvertible)?;
            for i in k + 1..n {
                let x = a[i * n + k];
                if x == 0 {
                    continue;
                }
                let f = r.mul(x / pd, winv);
                for c in 0..n {
                    a[i * n + c] = r.sub(a[i * n + c], r.mul(f, a[k * n + c]));
                    u[i * n + c] = r.sub(u[i * n + c], r.mul(f, u[k * n + c]));
                }
            }
            for j in k + 1..n {
                let x = a[k * n + j];
                if x == 0 {
                    continue;
                }
                let f = r.mul(x / pd, winv);
                for rr in 0..n {
                    a[rr * n + j] = r.sub(a[rr * n + j], r.mul(f, a[rr * n + k]));
                    v[rr * n + j] = r.sub(v[rr * n + j], r.mul(f, v[rr * n + k]));
                }
            }
            dexp[k] = d;
            dunit[k] = winv;
        }
        // M^-1 = V D^-1 U with D^-1 = p^-dmax * diag(p^(dmax - d_k) w_k^-1).
        let dmax = *dexp.iter().max().unwrap();
        let mut vd = vec![0u64; n * n];
        for rr in 0..n {
            for k in 0..n {
                let s = r.mul(dunit[k], r.p_pow(dmax - dexp[k]));
                vd[rr * n + k] = r.mul(v[rr * n + k], s);
            }
        }
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = vd[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = r.add(out[i * n + j], r.mul(x, u[k * n + j]));
                }
            }
        }
        let lost = 2 * dmax;
        if lost >= self.digits {
            return Err(ArithError::PrecisionExhausted);
        }
        let mut g = PMat {
            ring: r,
            n,
            shift: dmax as i32 - self.shift,
            digits: self.digits - lost,
            vdet: -self.vdet,
            m: out,
        };
        g.normalize()?;
        Ok(g)
    }

    pub fn inverse(&self) -> PMat {
        self.try_inverse()
            .expect("invertible with enough precision")
    }

    /// Exponents of the elementary divisors of `g`, in increasing order.
    pub fn elementary_divisors(&self) -> Result<Vec<i64>, ArithError> {
        let n = self.n;
        let r = self.ring;
        let mut a = self.m.clone();
        let mut out = vec![];
        let cap = self.ring.p_pow_or_modulus(self.digits);
        for x in a.iter_mut() {
            *x %= cap;
        }
        for k in 0..n {
            let mut best = (u32::MAX, 0, 0);
            for i in k..n {
                for j in k..n {
                    let x = a[i * n + j] % cap;
                    if x != 0 {
                        let vv = r.val(x);
                        if vv < best.0 {
                            best = (vv, i, j);
                        }
                    }
                }
            }
            if best.0 >= self.digits {
                return Err(ArithError::PrecisionExhausted);
            }
            let (d, pi, pj) = best;
            for c in 0..n {
                a.swap(k * n + c, pi * n + c);
            }
            for rr in 0..n {
                a.swap(rr * n + k, rr * n + pj);
            }
            let pd = r.p.pow(d);
            let winv = r.inv(a[k * n + k] / pd).ok_or(ArithError::NotInvertible)?;
            for i in k + 1..n {
                let x = a[i * n + k];
                if x == 0 {
                    continue;
                }
                let f = r.mul(x / pd, winv);
                for c in k..n {
                    a[i * n + c] = r.sub(a[i * n + c], r.mul(f, a[k * n + c]));
                }
            }
            for j in k + 1..n {
                a[k * n + j] = 0;
            }
            out.push(d as i64 - self.shift as i64);
        }
        let total: i64 = out.iter().sum();
        if total != self.vdet {
            return Err(ArithError::PrecisionExhausted);
        }
        out.sort();
        Ok(out)
    }

    /// Entry `(r, c)` of `g` as an exact rational (signed representative of
    /// the known digits).
    pub fn entry_rational(&self, r: usize, c: usize) -> num_rational::BigRational {
        let v = self.ring.to_signed(self.get(r, c));
        let num = BigInt::from(v);
        let den = BigInt::from(self.ring.p).pow(self.shift.unsigned_abs());
        if self.shift >= 0 {
            num_rational::BigRational::new(num, den)
        } else {
            num_rational::BigRational::from_integer(num * den)
        }
    }

    /// Whether two matrices agree to the smaller of their known precisions.
    pub fn approx_eq(&self, o: &PMat) -> bool {
        if self.n != o.n {
            return false;
        }
        let lo = self.abs_precision().min(o.abs_precision());
        let s = self.shift.max(o.shift);
        // Compare p^s * g entrywise modulo p^(lo + s).
        let k = (lo + s as i64).max(0) as u32;
        let cap = self.ring.p_pow_or_modulus(k);
        for i in 0..self.n * self.n {
            let a = self
                .ring
                .mul(self.m[i], self.ring.p_pow((s - self.shift) as u32))
                % cap;
            let b = self.ring.mul(o.m[i], self.ring.p_pow((s - o.shift) as u32)) % cap;
            if a != b {
                return false;
            }
        }
        true
    }

    /// The exact matrix of signed representatives.
    pub fn to_exact(&self) -> Matrix<ExactScalar> {
        let n = self.n;
        Matrix::from_fn(n, n, |r, c| {
            ExactScalar::from_rational(self.ring.p, self.entry_rational(r, c))
        })
    }
}

impl PRing {
    /// `p^k`, or the full modulus when `k` reaches the precision.
    #[inline]
    pub fn p_pow_or_modulus(&self, k: u32) -> u64 {
        if k >= self.prec {
            self.modulus
        } else {
            self.p.pow(k)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_inverse() {
        let r = PRing::new(3);
        let g = PMat::from_i64(r, 2, &[3, 1, 0, 1]);
        let gi = g.inverse();
        let id = g.mul(&gi);
        assert!(id.approx_eq(&PMat::identity(r, 2)));
        assert_eq!(gi.shift, 1);
        assert_eq!(gi.vdet, -1);
    }

    #[test]
    fn diagonal_conjugation() {
        let r = PRing::new(3);
        let g = PMat::from_i64(r, 2, &[1, 1, 0, 1]);
        // diag(p, 1)^-1 * g * diag(p, 1): the (0,1) entry is divided by p.
        let h = g.conj_diag(&[1, 0]);
        assert_eq!(h.entry_val(0, 1), Some(-1));
        let t = PMat::diag_p_powers(r, &[1, 0]);
        let direct = t.inverse().mul(&g).mul(&t);
        assert!(direct.approx_eq(&h));
    }

    #[test]
    fn elementary_divisors_of_upper_triangular() {
        let r = PRing::new(5);
        let g = PMat::from_i64(r, 2, &[5, 1, 0, 1]);
        assert_eq!(g.elementary_divisors().unwrap(), vec![0, 1]);
        let d = PMat::diag_p_powers(r, &[2, 1]);
        assert_eq!(d.elementary_divisors().unwrap(), vec![1, 2]);
    }
}
