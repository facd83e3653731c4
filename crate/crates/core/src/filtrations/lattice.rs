//! Split filtrations of `F^n` with integer breaks acting on `O`-lattices,
//! and their reductions to the residue field.

use crate::arith::{ExactScalar, Matrix, Scalar};
use crate::groups::lattice::{reduce_mod_p, saturate};

use super::field::Fp;
use super::filtration::Filtration;
use super::subspace::Subspace;
use super::FiltrationError;

/// `F^i = span(b_j : w_j >= i)` for the columns `b_j` of `basis`.
#[derive(Clone, Debug)]
pub struct SplitFiltration {
    pub p: u64,
    pub basis: Matrix<ExactScalar>,
    pub weights: Vec<i64>,
}

impl SplitFiltration {
    pub fn new(
        basis: Matrix<ExactScalar>,
        weights: Vec<i64>,
        p: u64,
    ) -> Result<Self, FiltrationError> {
        if basis.rows() != basis.cols() || basis.cols() != weights.len() || basis.det().is_zero() {
            return Err(FiltrationError::AmbientMismatch);
        }
        Ok(SplitFiltration { p, basis, weights })
    }

    /// `Fil(lambda)` on the standard basis.
    pub fn from_cocharacter(lambda: &[i64], p: u64) -> Self {
        let basis = Matrix::identity(lambda.len(), &ExactScalar::one(p));
        SplitFiltration {
            p,
            basis,
            weights: lambda.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    fn step(&self, i: i64) -> Vec<Vec<ExactScalar>> {
        (0..self.dim())
            .filter(|&j| self.weights[j] >= i)
            .map(|j| {
                (0..self.dim())
                    .map(|r| self.basis.get(r, j).clone())
                    .collect()
            })
            .collect()
    }

    fn breaks(&self) -> Vec<i64> {
        let mut b = self.weights.clone();
        b.sort_unstable();
        b.dedup();
        b
    }
}

fn column(v: &[ExactScalar]) -> Matrix<ExactScalar> {
    Matrix::from_fn(v.len(), 1, |r, _| v[r].clone())
}

/// `L ∩ W` for a lattice with basis columns `l` and vectors spanning `W`.
fn meet(
    l: &Matrix<ExactScalar>,
    l_inv: &Matrix<ExactScalar>,
    w: &[Vec<ExactScalar>],
    p: u64,
) -> Vec<Vec<ExactScalar>> {
    let coords: Vec<Matrix<ExactScalar>> = w.iter().map(|v| l_inv.mul(&column(v))).collect();
    saturate(&coords, p)
        .iter()
        .map(|c| l.mul(c).entries().to_vec())
        .collect()
}

/// Basis columns of the lattice generated by `gens`.
pub fn lattice_span(
    gens: &[Vec<ExactScalar>],
    n: usize,
    p: u64,
) -> Result<Matrix<ExactScalar>, FiltrationError> {
    let a = Matrix::from_fn(n, gens.len(), |r, c| gens[c][r].clone()).map(|x| {
        if x.is_zero() {
            ExactScalar::zero(p)
        } else {
            x.clone()
        }
    });
    let s = a.smith();
    if s.exps.len() < n || s.exps.iter().take(n).any(|e| e.is_none()) {
        return Err(FiltrationError::NotALattice);
    }
    let uinv = s.u.inverse().expect("unimodular");
    Ok(Matrix::from_fn(n, n, |r, c| {
        uinv.get(r, c)
            .mul(&ExactScalar::p_power(p, s.exps[c].unwrap()))
    }))
}

/// `L + F = sum_i p^-i (L ∩ F^i)`.
pub fn lattice_action(
    l: &Matrix<ExactScalar>,
    f: &SplitFiltration,
) -> Result<Matrix<ExactScalar>, FiltrationError> {
    let p = f.p;
    let l_inv = l.inverse().ok_or(FiltrationError::NotALattice)?;
    let mut gens = vec![];
    for i in f.breaks() {
        let scale = ExactScalar::p_power(p, -i);
        for v in meet(l, &l_inv, &f.step(i), p) {
            gens.push(v.iter().map(|x| x.mul(&scale)).collect());
        }
    }
    lattice_span(&gens, f.dim(), p)
}

/// Equality of the lattices spanned by two bases.
pub fn same_lattice(a: &Matrix<ExactScalar>, b: &Matrix<ExactScalar>) -> bool {
    a.inverse().map_or(false, |ai| {
        let t = ai.mul(b);
        t.is_integral() && t.det().valuation() == Some(0)
    })
}

/// `red(F)^x = (F^x ∩ L0) / p` in the coordinates of `L0`.
pub fn reduction(
    f: &SplitFiltration,
    l0: &Matrix<ExactScalar>,
) -> Result<Filtration, FiltrationError> {
    let p = f.p;
    let k = Fp::new(p);
    let n = f.dim();
    let l_inv = l0.inverse().ok_or(FiltrationError::NotALattice)?;
    let steps = f
        .breaks()
        .into_iter()
        .map(|i| {
            let rows: Vec<Vec<u64>> = meet(l0, &l_inv, &f.step(i), p)
                .iter()
                .map(|v| {
                    l_inv
                        .mul(&column(v))
                        .entries()
                        .iter()
                        .map(|x| reduce_mod_p(x, p))
                        .collect()
                })
                .collect();
            (
                num_rational::Rational64::from_integer(i),
                Subspace::span(&k, n, &rows),
            )
        })
        .collect();
    Filtration::new(k, Subspace::zero(n), steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn standard(n: usize, p: u64) -> Matrix<ExactScalar> {
        Matrix::identity(n, &ExactScalar::one(p))
    }

    #[test]
    fn trivial_filtration_fixes_lattices() {
        let p = 3;
        let f = SplitFiltration::from_cocharacter(&[0, 0], p);
        assert!(same_lattice(
            &lattice_action(&standard(2, p), &f).unwrap(),
            &standard(2, p)
        ));
        assert_eq!(
            reduction(&f, &standard(2, p)).unwrap(),
            Filtration::trivial(Fp::new(p), 2)
        );
    }

    #[test]
    fn line_break_enlarges_one_coordinate() {
        let p = 3;
        let f = SplitFiltration::from_cocharacter(&[1, 0], p);
        let got = lattice_action(&standard(2, p), &f).unwrap();
        let want = Matrix::diagonal(&[ExactScalar::p_power(p, -1), ExactScalar::one(p)]);
        assert!(same_lattice(&got, &want));
    }

    #[test]
    fn cocharacters_act_by_inverse_uniformizer() {
        let p = 5;
        let std = standard(3, p);
        for mu in [[2, 0, -1], [1, 1, 0], [0, -2, 3]] {
            let f = SplitFiltration::from_cocharacter(&mu, p);
            let t = Matrix::diagonal(
                &mu.iter()
                    .map(|&m| ExactScalar::p_power(p, -m))
                    .collect::<Vec<_>>(),
            );
            assert!(same_lattice(&lattice_action(&std, &f).unwrap(), &t));
        }
    }

    #[test]
    fn reduction_of_inverse_cocharacter() {
        let p = 3;
        let k = Fp::new(p);
        let f = SplitFiltration::from_cocharacter(&[-1, 0], p);
        let red = reduction(&f, &standard(2, p)).unwrap();
        assert_eq!(red.at(0.into()), Subspace::span(&k, 2, &[vec![0, 1]]));
        assert_eq!(red, Filtration::from_cocharacter(k, &[-1, 0]));
    }

    #[test]
    fn reduction_of_a_skew_line() {
        // F^1 = line through (1, p): meets the lattice in O (1, p), which
        // reduces to the first coordinate line.
        let p = 3;
        let k = Fp::new(p);
        let basis = Matrix::from_fn(2, 2, |r, c| {
            ExactScalar::from_int(p, [[1, 0], [3, 1]][r][c])
        });
        let f = SplitFiltration::new(basis, vec![1, 0], p).unwrap();
        let red = reduction(&f, &standard(2, p)).unwrap();
        assert_eq!(red.at(1.into()), Subspace::span(&k, 2, &[vec![1, 0]]));
    }
}
