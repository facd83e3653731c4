//! Lattice helpers over `Z_(p)` for families of matrices.

use crate::arith::{ExactScalar, Matrix, Scalar};

/// Flattens matrices into the columns of one `(rows*cols) x k` matrix.
pub fn columns(mats: &[Matrix<ExactScalar>], p: u64) -> Matrix<ExactScalar> {
    let n = mats[0].rows() * mats[0].cols();
    Matrix::from_fn(n, mats.len(), |r, c| {
        let m = &mats[c];
        m.get(r / m.cols(), r % m.cols()).clone()
    })
    .map(|x| {
        if x.is_zero() {
            ExactScalar::zero(p)
        } else {
            x.clone()
        }
    })
}

fn unflatten(col: &[ExactScalar], rows: usize, cols: usize) -> Matrix<ExactScalar> {
    Matrix::from_vec(rows, cols, col.to_vec())
}

/// A `Z_(p)`-basis of `span(mats) ∩ M(Z_(p))`.
pub fn saturate(mats: &[Matrix<ExactScalar>], p: u64) -> Vec<Matrix<ExactScalar>> {
    if mats.is_empty() {
        return vec![];
    }
    let (rows, cols) = (mats[0].rows(), mats[0].cols());
    let b = columns(mats, p);
    let s = b.smith();
    // u b v = d, so the first k columns of u^-1 scaled by d are b v.
    let uinv = s.u.inverse().expect("unimodular");
    let rank = s.exps.iter().filter(|e| e.is_some()).count();
    (0..rank)
        .map(|i| {
            let col: Vec<ExactScalar> = (0..b.rows()).map(|r| uinv.get(r, i).clone()).collect();
            unflatten(&col, rows, cols)
        })
        .collect()
}

/// Lattice `{c : sum_k c_k M_k is integral}` for linearly independent `M_k`,
/// returned as a basis of column vectors.
pub fn integrality_lattice(mats: &[Matrix<ExactScalar>], p: u64) -> Option<Vec<Vec<ExactScalar>>> {
    let l = columns(mats, p);
    let s = l.smith();
    let k = mats.len();
    if s.exps.len() < k || s.exps.iter().any(|e| e.is_none()) {
        return None;
    }
    // l c integral  <=>  d v^-1 c integral  <=>  (v^-1 c)_i in p^-d_i Z_(p).
    Some(
        (0..k)
            .map(|i| {
                let scale = ExactScalar::p_power(p, -s.exps[i].unwrap());
                (0..k).map(|r| s.v.get(r, i).mul(&scale)).collect()
            })
            .collect(),
    )
}

/// `sum_k c_k M_k`.
pub fn combine(mats: &[Matrix<ExactScalar>], c: &[ExactScalar]) -> Matrix<ExactScalar> {
    let mut out = mats[0].scale(&c[0]);
    for (m, x) in mats.iter().zip(c).skip(1) {
        out = out.add(&m.scale(x));
    }
    out
}

/// Reduction of a `p`-integral scalar modulo `p`.
pub fn reduce_mod_p(x: &ExactScalar, p: u64) -> u64 {
    if x.is_zero() {
        return 0;
    }
    assert!(x.is_integral(), "reduction of a non-integral scalar");
    let r = x.to_rational();
    let pb = num_bigint::BigInt::from(p);
    let num = ((r.numer() % &pb) + &pb) % &pb;
    let den = ((r.denom() % &pb) + &pb) % &pb;
    let n = num_traits::ToPrimitive::to_u64(&num).unwrap();
    let d = num_traits::ToPrimitive::to_u64(&den).unwrap();
    crate::arith::residue::mul_mod(
        n,
        crate::arith::residue::inv_mod(d, p).expect("p-integral"),
        p,
    )
}

/// Rank over `F_p` of a list of row vectors.
pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x % p).collect())
        .collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = crate::arith::residue::inv_mod(a[rank][c], p).unwrap();
        let prow = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = crate::arith::residue::mul_mod(row[c], inv, p);
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x = (*x + p - crate::arith::residue::mul_mod(f, *y, p)) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Entries of a matrix reduced modulo `p`, row-major.
pub fn flatten_mod_p(m: &Matrix<ExactScalar>, p: u64) -> Vec<u64> {
    m.entries().iter().map(|x| reduce_mod_p(x, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u64, v: &[i64]) -> Matrix<ExactScalar> {
        Matrix::from_vec(
            2,
            2,
            v.iter().map(|&x| ExactScalar::from_int(p, x)).collect(),
        )
    }

    #[test]
    fn rank_mod_p_sees_reduction() {
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 4]], 5), 1);
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![3, 1]], 5), 1);
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![3, 2]], 5), 2);
        assert_eq!(reduce_mod_p(&ExactScalar::from_frac(5, 1, 2), 5), 3);
    }

    #[test]
    fn saturation_divides_out_p() {
        let p = 3;
        let sat = saturate(&[m(p, &[3, 0, 0, 3]), m(p, &[0, 9, 0, 0])], p);
        assert_eq!(sat.len(), 2);
        for s in &sat {
            assert_eq!(s.min_valuation(), Some(0));
        }
    }

    #[test]
    fn integrality_lattice_of_scaled_family() {
        let p = 3;
        let lat = integrality_lattice(&[m(p, &[9, 0, 0, 0]), m(p, &[0, 1, 0, 0])], p).unwrap();
        let vals: Vec<i64> = lat
            .iter()
            .map(|c| c.iter().filter_map(|x| x.valuation()).min().unwrap())
            .collect();
        assert!(vals.contains(&-2));
        assert!(vals.contains(&0));
    }
}
