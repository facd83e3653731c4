//! Canonical representatives of `gK` through the lattice `g L_0`.

use crate::arith::{ArithError, PMat};

/// Column Hermite form of `p^s g`: upper triangular, diagonal `p^(a_i)`,
/// entries above the diagonal reduced modulo the diagonal of their row.
/// Layout: `[s, a_0, .., a_(n-1), upper entries row-major]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CosetKey(Box<[i64]>);

impl CosetKey {
    pub fn dim(&self) -> usize {
        // len = 1 + n + n(n-1)/2
        let len = self.0.len();
        let mut n: usize = 0;
        while 1 + n + n * (n.saturating_sub(1)) / 2 < len {
            n += 1;
        }
        n
    }

    pub fn shift(&self) -> i64 {
        self.0[0]
    }

    /// Iwasawa component: `g ∈ N(F) diag(p^nu) K`.
    pub fn iwasawa(&self) -> Vec<i64> {
        let n = self.dim();
        (0..n).map(|i| self.0[1 + i] - self.0[0]).collect()
    }

    pub fn raw(&self) -> &[i64] {
        &self.0
    }
}

/// The canonical key of `g K`.
pub fn canonicalize(g: &PMat) -> Result<CosetKey, ArithError> {
    let mut g = g.clone();
    g.normalize()?;
    let n = g.n;
    let r = g.ring;
    let s = g.shift as i64;
    // det(p^s g) has valuation e; the Hermite form loses at most e digits.
    let e = g.vdet + n as i64 * s;
    let digits = g.digits as i64;
    if e < 0 || digits - e < 1 {
        return Err(ArithError::PrecisionExhausted);
    }
    let cap = r.p_pow_or_modulus(g.digits);
    // Column-major working copy: col[c][row].
    let mut col: Vec<Vec<u64>> = (0..n)
        .map(|c| (0..n).map(|row| g.m[row * n + c] % cap).collect())
        .collect();
    let mut diag = vec![0u32; n];
    let mut lost = 0i64;
    for row in (0..n).rev() {
        // Pivot: least valuation in this row among the remaining columns.
        let mut best = (u32::MAX, 0usize);
        for (c, cv) in col.iter().enumerate().take(row + 1) {
            let x = cv[row] % cap;
            if x != 0 {
                let v = r.val(x);
                if v < best.0 {
                    best = (v, c);
                }
            }
        }
        let (a, pc) = best;
        if a == u32::MAX || a as i64 >= digits - lost {
            return Err(ArithError::PrecisionExhausted);
        }
        col.swap(pc, row);
        let pa = r.p.pow(a);
        let unit = r.inv(col[row][row] / pa).ok_or(ArithError::NotInvertible)?;
        for x in col[row].iter_mut() {
            *x = r.mul(*x, unit);
        }
        for c in 0..row {
            let x = col[c][row];
            if x == 0 {
                continue;
            }
            let f = x / pa;
            let pivot = col[row].clone();
            for (y, pv) in col[c].iter_mut().zip(&pivot) {
                *y = r.sub(*y, r.mul(f, *pv));
            }
            col[c][row] = 0;
        }
        lost += a as i64;
        diag[row] = a;
    }
    if (diag.iter().map(|&x| x as i64).sum::<i64>()) != e {
        return Err(ArithError::PrecisionExhausted);
    }
    // Reduce above-diagonal entries, lower rows first.
    let mut out = Vec::with_capacity(1 + n + n * (n - 1) / 2);
    out.push(s);
    out.extend(diag.iter().map(|&a| a as i64));
    for c in 1..n {
        for row in (0..c).rev() {
            let m = r.p.pow(diag[row]);
            let x = col[c][row] % cap;
            let t = x / m;
            if t != 0 {
                let piv = col[row].clone();
                for (y, pv) in col[c].iter_mut().zip(&piv) {
                    *y = r.sub(*y, r.mul(t, *pv));
                }
            }
        }
    }
    let max_a = *diag.iter().max().unwrap() as i64;
    if digits - lost < max_a {
        return Err(ArithError::PrecisionExhausted);
    }
    for row in 0..n {
        let m = r.p.pow(diag[row]);
        for cv in col.iter().skip(row + 1) {
            out.push(((cv[row] % cap) % m) as i64);
        }
    }
    Ok(CosetKey(out.into_boxed_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PRing;

    #[test]
    fn diagonal_and_unipotent_examples() {
        let r = PRing::new(3);
        let k = canonicalize(&PMat::diag_p_powers(r, &[1, 0])).unwrap();
        assert_eq!(k.iwasawa(), vec![1, 0]);
        let id = canonicalize(&PMat::identity(r, 2)).unwrap();
        assert_eq!(id.iwasawa(), vec![0, 0]);
        // [[p, 1], [0, 1]] and [[p, 1 + p], [0, 1]] are the same coset.
        let a = canonicalize(&PMat::from_i64(r, 2, &[3, 1, 0, 1])).unwrap();
        let b = canonicalize(&PMat::from_i64(r, 2, &[3, 4, 0, 1])).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, k);
    }

    #[test]
    fn right_multiplication_by_k_is_invisible() {
        let r = PRing::new(5);
        let g = PMat::from_i64(r, 3, &[25, 3, 7, 0, 5, 1, 0, 0, 1]);
        let k = PMat::from_i64(r, 3, &[1, 2, 3, 0, 1, 4, 1, 0, 1]);
        assert_eq!(canonicalize(&g).unwrap(), canonicalize(&g.mul(&k)).unwrap());
        let k2 = PMat::from_i64(r, 3, &[0, 1, 0, 1, 0, 0, 0, 0, 2]);
        assert_eq!(
            canonicalize(&g).unwrap(),
            canonicalize(&g.mul(&k2)).unwrap()
        );
    }

    #[test]
    fn shift_handles_denominators() {
        let r = PRing::new(3);
        let g = PMat::diag_p_powers(r, &[-2, 1]);
        let k = canonicalize(&g).unwrap();
        assert_eq!(k.iwasawa(), vec![-2, 1]);
        assert_eq!(k.dim(), 2);
    }
}
