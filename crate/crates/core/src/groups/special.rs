//! The special basis of a `(2n+1)`-dimensional quadratic space containing a
//! hermitian space `W` of `E`-dimension `n`, with `E = F(eta)`, `eta^2 = u`.
//!
//! Vectors `w_1..w_n, v_0..v_n` satisfy `phi(w_i, w_i) = u^(n-i)`,
//! `phi(v_i, v_i) = -u^(n-i)`, `v_(i-1) = eta w_i`, and
//! `e_(+-i) = (v_i +- w_i) / 2` are isotropic. The ordered basis of the
//! ambient space is `(e_n, .., e_1, v_0, e_-1, .., e_-n)`.

use crate::arith::{ExactScalar, Matrix, PRing, QuadResidue, Ring, Scalar};

use super::lattice::saturate;
use super::{Descriptor, Family, GroupError};

#[derive(Clone, Debug)]
pub struct SpecialBasis {
    pub n: usize,
    pub p: u64,
    pub u: i64,
    /// Gram matrix in the ordered basis.
    pub gram: Matrix<ExactScalar>,
    /// Multiplication by `eta` on `W`, zero on `v_n`.
    pub eta: Matrix<ExactScalar>,
    /// Columns `w_1..w_n, v_0..v_(n-1), v_n` in ordered coordinates.
    pub s: Matrix<ExactScalar>,
    pub s_inv: Matrix<ExactScalar>,
}

impl SpecialBasis {
    pub fn new(n: usize, p: u64, u: i64) -> Result<Self, GroupError> {
        if p == 2 {
            return Err(GroupError::BadFormData("residue characteristic 2".into()));
        }
        if u % p as i64 == 0 {
            return Err(GroupError::BadFormData(format!("u = {} is not a unit", u)));
        }
        let dim = 2 * n + 1;
        let x = |v: i64| ExactScalar::from_int(p, v);
        let upow = |k: usize| x(u.pow(k as u32));
        let half = ExactScalar::from_frac(p, 1, 2);
        let mut gram = Matrix::zeros(dim, dim, &x(0));
        for i in 1..=n {
            let v = upow(n - i).mul(&half).neg();
            gram.set(n - i, n + i, v.clone());
            gram.set(n + i, n - i, v);
        }
        gram.set(n, n, upow(n).neg());

        // e_i at n - i, v_0 at n, e_-i at n + i.
        let unit =
            |k: usize| -> Vec<ExactScalar> { (0..dim).map(|r| x((r == k) as i64)).collect() };
        let v_vec = |i: usize| -> Vec<ExactScalar> {
            if i == 0 {
                unit(n)
            } else {
                let mut c = unit(n - i);
                c[n + i] = x(1);
                c
            }
        };
        let w_vec = |i: usize| -> Vec<ExactScalar> {
            let mut c = unit(n - i);
            c[n + i] = x(-1);
            c
        };
        let mut cols: Vec<Vec<ExactScalar>> = (1..=n).map(w_vec).collect();
        cols.extend((0..=n).map(v_vec));
        let s = Matrix::from_fn(dim, dim, |r, c| cols[c][r].clone());
        let s_inv = s
            .inverse()
            .ok_or_else(|| GroupError::BadFormData("special basis is singular".into()))?;

        // eta in the S basis: w_i -> v_(i-1), v_(i-1) -> u w_i, v_n -> 0.
        let mut eta_s = Matrix::zeros(dim, dim, &x(0));
        for i in 0..n {
            eta_s.set(n + i, i, x(1));
            eta_s.set(i, n + i, x(u));
        }
        let eta = s.mul(&eta_s).mul(&s_inv);
        let sb = SpecialBasis {
            n,
            p,
            u,
            gram,
            eta,
            s,
            s_inv,
        };
        sb.check()?;
        Ok(sb)
    }

    fn check(&self) -> Result<(), GroupError> {
        let (n, p) = (self.n, self.p);
        let phi = |a: usize, b: usize| {
            let ca = Matrix::from_fn(2 * n + 1, 1, |r, _| self.s.get(r, a).clone());
            let cb = Matrix::from_fn(2 * n + 1, 1, |r, _| self.s.get(r, b).clone());
            ca.transpose().mul(&self.gram).mul(&cb).get(0, 0).clone()
        };
        for i in 1..=n {
            let ww = phi(i - 1, i - 1);
            let vv = phi(n + i, n + i);
            if !ww.add(&vv).is_zero() || ww != ExactScalar::from_int(p, self.u.pow((n - i) as u32))
            {
                return Err(GroupError::BadFormData(format!(
                    "special basis relation fails at i = {}",
                    i
                )));
            }
        }
        let det = self.gram.det();
        if det.valuation() != Some(0) {
            return Err(GroupError::BadFormData("lattice is not self-dual".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    /// The ambient special orthogonal group of the ordered basis.
    pub fn orthogonal_group(&self) -> Descriptor {
        Descriptor::with_form(Family::SOOdd, self.gram.clone(), self.p)
    }

    fn zero(&self) -> ExactScalar {
        ExactScalar::zero(self.p)
    }

    /// Column vector of `v_n`.
    fn vn(&self) -> Matrix<ExactScalar> {
        let d = self.dim();
        Matrix::from_fn(d, 1, |r, _| self.s.get(r, d - 1).clone())
    }

    /// Lie algebra of `U(W)` acting trivially on `v_n`, as a saturated
    /// `Z_(p)`-basis.
    pub fn unitary_lie_basis(&self) -> Vec<Matrix<ExactScalar>> {
        let d = self.dim();
        let q = &self.gram;
        let j = &self.eta;
        let vn = self.vn();
        let basis = solve_linear_family(d, self.p, |x| {
            let mut eqs = vec![];
            eqs.extend(
                x.transpose()
                    .mul(q)
                    .add(&q.mul(x))
                    .entries()
                    .iter()
                    .cloned(),
            );
            eqs.extend(x.mul(j).sub(&j.mul(x)).entries().iter().cloned());
            eqs.extend(x.mul(&vn).entries().iter().cloned());
            eqs
        });
        saturate(&basis, self.p)
    }

    /// A linear family containing `U(W)`: maps commuting with `eta`,
    /// preserving `W = v_n^perp` and the line of `v_n`.
    pub fn unitary_linear_span(&self) -> Vec<Matrix<ExactScalar>> {
        let d = self.dim();
        let q = &self.gram;
        let j = &self.eta;
        let vn = self.vn();
        let wbasis: Vec<Matrix<ExactScalar>> = (0..d - 1)
            .map(|c| Matrix::from_fn(d, 1, |r, _| self.s.get(r, c).clone()))
            .collect();
        let s_inv = &self.s_inv;
        let basis = solve_linear_family(d, self.p, |x| {
            let mut eqs = vec![];
            eqs.extend(x.mul(j).sub(&j.mul(x)).entries().iter().cloned());
            // A v_n has no W-component.
            let img = s_inv.mul(&x.mul(&vn));
            eqs.extend((0..d - 1).map(|r| img.get(r, 0).clone()));
            for w in &wbasis {
                eqs.push(vn.transpose().mul(q).mul(&x.mul(w)).get(0, 0).clone());
            }
            eqs
        });
        saturate(&basis, self.p)
    }

    /// `det_E` of the restriction to `W` of an element given modulo `p^N`
    /// (row-major entries in ordered coordinates).
    pub fn det_e(&self, ring: PRing, h: &[u64]) -> QuadResidue {
        let n = self.n;
        let d = self.dim();
        let red = |m: &Matrix<ExactScalar>| -> Vec<u64> {
            m.entries()
                .iter()
                .map(|x| {
                    ring.from_rational(&x.to_rational())
                        .expect("integral basis change")
                })
                .collect()
        };
        let s = red(&self.s);
        let si = red(&self.s_inv);
        let hw = crate::arith::ring::mat_mul(
            &ring,
            d,
            &crate::arith::ring::mat_mul(&ring, d, &si, h),
            &s,
        );
        let u = ring.from_i64(self.u);
        let m = ring.modulus;
        let entry = |i: usize, j: usize| QuadResidue::new(hw[i * d + j], hw[(n + i) * d + j], u, m);
        det_quad(n, &entry, u, m)
    }

    /// Exact `E`-coordinates of an exact element: `det_E` as `(a, b)` with
    /// `det = a + b eta`.
    pub fn det_e_exact(&self, h: &Matrix<ExactScalar>) -> (ExactScalar, ExactScalar) {
        let n = self.n;
        let hw = self.s_inv.mul(h).mul(&self.s);
        let u = ExactScalar::from_int(self.p, self.u);
        let entry = |i: usize, j: usize| (hw.get(i, j).clone(), hw.get(n + i, j).clone());
        let mul = |a: &(ExactScalar, ExactScalar), b: &(ExactScalar, ExactScalar)| {
            (
                a.0.mul(&b.0).add(&u.mul(&a.1.mul(&b.1))),
                a.0.mul(&b.1).add(&a.1.mul(&b.0)),
            )
        };
        let perms = permutations(n);
        let mut acc = (self.zero(), self.zero());
        for (perm, sign) in perms {
            let mut t = (ExactScalar::one(self.p), self.zero());
            for (i, &j) in perm.iter().enumerate() {
                t = mul(&t, &entry(i, j));
            }
            if sign < 0 {
                t = (t.0.neg(), t.1.neg());
            }
            acc = (acc.0.add(&t.0), acc.1.add(&t.1));
        }
        acc
    }
}

fn det_quad(n: usize, entry: &dyn Fn(usize, usize) -> QuadResidue, u: u64, m: u64) -> QuadResidue {
    let mut acc = QuadResidue::new(0, 0, u, m);
    for (perm, sign) in permutations(n) {
        let mut t = QuadResidue::one(u, m);
        for (i, &j) in perm.iter().enumerate() {
            t = t.mul(&entry(i, j));
        }
        acc = if sign > 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

/// All permutations of `0..n` with signs.
pub(crate) fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    if n == 0 {
        return vec![(vec![], 1)];
    }
    let mut out = vec![];
    for (perm, sign) in permutations(n - 1) {
        for pos in 0..n {
            let mut q = perm.clone();
            q.insert(pos, n - 1);
            // Inserting at `pos` moves the new element past `n - 1 - pos` others.
            let s = if (n - 1 - pos) % 2 == 0 { sign } else { -sign };
            out.push((q, s));
        }
    }
    out
}

/// Basis of `{X in M_d(Q) : eqs(X) = 0}` for linear equations `eqs`.
pub(crate) fn solve_linear_family(
    d: usize,
    p: u64,
    eqs: impl Fn(&Matrix<ExactScalar>) -> Vec<ExactScalar>,
) -> Vec<Matrix<ExactScalar>> {
    let zero = ExactScalar::zero(p);
    let unit = |k: usize| {
        Matrix::from_fn(d, d, |r, c| {
            ExactScalar::from_int(p, (r * d + c == k) as i64)
        })
    };
    let cols: Vec<Vec<ExactScalar>> = (0..d * d).map(|k| eqs(&unit(k))).collect();
    let rows = cols[0].len();
    let a = Matrix::from_fn(rows, d * d, |r, c| cols[c][r].clone());
    a.nullspace()
        .into_iter()
        .map(|v| {
            Matrix::from_fn(d, d, |r, c| {
                if v[r * d + c].is_zero() {
                    zero.clone()
                } else {
                    v[r * d + c].clone()
                }
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropic_vectors_and_unit_discriminant() {
        let sb = SpecialBasis::new(1, 3, -1).unwrap();
        assert_eq!(sb.dim(), 3);
        assert_eq!(sb.gram.get(0, 0), &ExactScalar::zero(3));
        assert_eq!(sb.gram.get(2, 2), &ExactScalar::zero(3));
        assert_eq!(sb.gram.det().valuation(), Some(0));
    }

    #[test]
    fn unitary_lie_algebra_has_dimension_n_squared() {
        for n in 1..=2 {
            let sb = SpecialBasis::new(n, 3, -1).unwrap();
            assert_eq!(sb.unitary_lie_basis().len(), n * n);
            assert_eq!(sb.unitary_linear_span().len(), 2 * n * n + 1);
        }
    }

    #[test]
    fn eta_squares_to_u_on_w() {
        let sb = SpecialBasis::new(2, 5, 2).unwrap();
        let j2 = sb.eta.mul(&sb.eta);
        let w1 = Matrix::from_fn(5, 1, |r, _| sb.s.get(r, 0).clone());
        assert_eq!(j2.mul(&w1), w1.scale(&ExactScalar::from_int(5, 2)));
    }

    #[test]
    fn permutation_signs() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        let total: i32 = perms.iter().map(|(_, s)| s).sum();
        assert_eq!(total, 0);
        assert!(perms.contains(&(vec![0, 1, 2], 1)));
        assert!(perms.contains(&(vec![1, 0, 2], -1)));
    }
}
