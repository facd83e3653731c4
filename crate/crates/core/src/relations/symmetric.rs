//! Symmetric pairs `H = G^theta` with `theta(B) = B-bar`: for
//! `x ∈ H(F) ∩ tau^m K tau^-m` and `y = tau^-m x tau^m`, the big-cell
//! factorization `y = n-bar t n2` has `xi^-m n-bar xi^m` integral for
//! `xi = (mu^-1 theta(mu))(p)`, whence `x ∈ K`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{ExactScalar, Matrix, Scalar};
use crate::groups::{Involution, Scenario};

use super::stabilizer::{in_gl_o, render_matrix, HSampler};
use super::RelationError;

/// `y = l d u` with `l` unit lower, `d` diagonal, `u` unit upper; `None`
/// off the big cell.
fn ldu(
    y: &Matrix<ExactScalar>,
) -> Option<(
    Matrix<ExactScalar>,
    Matrix<ExactScalar>,
    Matrix<ExactScalar>,
)> {
    let n = y.rows();
    let one = y.get(0, 0).one_like();
    let mut a = y.clone();
    let mut l = Matrix::identity(n, &one);
    for k in 0..n {
        let piv = a.get(k, k).clone();
        let inv = piv.inv()?;
        for r in k + 1..n {
            let f = a.get(r, k).mul(&inv);
            l.set(r, k, f.clone());
            for c in k..n {
                let v = a.get(r, c).sub(&f.mul(a.get(k, c)));
                a.set(r, c, v);
            }
        }
    }
    let d = Matrix::diagonal(&(0..n).map(|i| a.get(i, i).clone()).collect::<Vec<_>>());
    let u = Matrix::from_fn(n, n, |r, c| {
        if c < r {
            one.zero_like()
        } else {
            a.get(r, c).mul(&a.get(r, r).inv().unwrap())
        }
    });
    Some((l, d, u))
}

#[derive(Clone, Debug, Serialize)]
pub struct SymmetricPairReport {
    pub m: i64,
    /// Exponents of `xi = mu^-1 theta(mu)`.
    pub xi: Vec<i64>,
    /// `theta` is an involution sending positive root groups to negative
    /// ones, checked on root elements and samples.
    pub involution_ok: bool,
    pub samples: usize,
    pub factorized: usize,
    pub failures: usize,
    pub witness: Option<String>,
}

impl SymmetricPairReport {
    pub fn holds(&self) -> bool {
        self.involution_ok && self.failures == 0 && self.factorized == self.samples
    }
}

fn check_involution(s: &Scenario, theta: &Involution) -> bool {
    let one = ExactScalar::one(s.p);
    s.g.positive.iter().all(|r| {
        let x = s.g.root_group_exact(r, &one);
        let tx = theta.apply(&x);
        let lower = (0..tx.rows()).all(|a| (a + 1..tx.cols()).all(|b| tx.get(a, b).is_zero()));
        lower && theta.apply(&tx) == x
    }) && theta.on_cocharacter(&theta.on_cocharacter(&s.mu)) == s.mu
}

/// One sample: factor `y = xi^m n1 xi^-m * t * n2` and rebuild
/// `x = theta(tau)^m n1 theta(tau)^-m * t * tau^m n2 tau^-m` from integral
/// factors.
fn certify(
    s: &Scenario,
    theta: &Involution,
    sampler: &HSampler,
    xi: &Matrix<ExactScalar>,
    xi_inv: &Matrix<ExactScalar>,
    x: &Matrix<ExactScalar>,
) -> bool {
    let y = sampler.t_inv.mul(x).mul(&sampler.t);
    if theta.apply(x) != *x || xi.mul(&theta.apply(&y)).mul(xi_inv) != y {
        return false;
    }
    let Some((nbar, t, n2)) = ldu(&y) else {
        return false;
    };
    let nbar1 = xi_inv.mul(&nbar).mul(xi);
    let units = (0..t.rows()).all(|i| t.get(i, i).valuation() == Some(0));
    if !(nbar.is_integral() && n2.is_integral() && units && nbar1.is_integral()) {
        return false;
    }
    let theta_mu = theta.on_cocharacter(&s.mu);
    let m = sampler_level(s, &sampler.t);
    let pe = ExactScalar::from_int(s.p, s.p as i64);
    let tt =
        s.g.cocharacter_exact(&theta_mu.iter().map(|k| m * k).collect::<Vec<_>>(), &pe);
    let tt_inv = tt.inverse().unwrap();
    let left = tt.mul(&nbar1).mul(&tt_inv);
    let right = sampler.t.mul(&n2).mul(&sampler.t_inv);
    left.is_integral() && right.is_integral() && left.mul(&t).mul(&right) == *x && in_gl_o(x)
}

fn sampler_level(s: &Scenario, t: &Matrix<ExactScalar>) -> i64 {
    s.mu.iter()
        .zip(0..)
        .find(|(k, _)| **k != 0)
        .map_or(0, |(k, i)| t.get(i, i).valuation().unwrap() / k)
}

/// Samples `x ∈ H(F) ∩ tau^m K tau^-m` and certifies each through the
/// big-cell factorization.
pub fn symmetric_pair_check(
    s: &Scenario,
    m: i64,
    samples: usize,
    seed: u64,
) -> Result<SymmetricPairReport, RelationError> {
    let theta = s.h.involution.clone().ok_or_else(|| {
        RelationError::Unsupported(format!("{} is not a symmetric pair", s.name()))
    })?;
    let theta_mu = theta.on_cocharacter(&s.mu);
    let xi_exp: Vec<i64> = s.mu.iter().zip(&theta_mu).map(|(a, b)| b - a).collect();
    let pe = ExactScalar::from_int(s.p, s.p as i64);
    let xi =
        s.g.cocharacter_exact(&xi_exp.iter().map(|k| m * k).collect::<Vec<_>>(), &pe);
    let xi_inv = xi.inverse().unwrap();
    let involution_ok = check_involution(s, &theta);
    let sampler = HSampler::new(s, m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut drawn, mut factorized, mut failures, mut witness) = (0, 0, 0, None);
    let mut attempts = 0usize;
    while drawn < samples && attempts < 50 * samples.max(1) {
        attempts += 1;
        let Some(x) = sampler.draw(&mut rng, 0) else {
            continue;
        };
        if !sampler.in_conjugate(&x) {
            continue;
        }
        drawn += 1;
        if m == 0 || certify(s, &theta, &sampler, &xi, &xi_inv, &x) {
            factorized += 1;
        } else {
            failures += 1;
            witness.get_or_insert_with(|| render_matrix(&x));
        }
    }
    Ok(SymmetricPairReport {
        m,
        xi: xi_exp,
        involution_ok,
        samples: drawn,
        factorized,
        failures,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ldu_round_trip() {
        let p = 3;
        let e = |v: &[i64]| {
            Matrix::from_vec(
                2,
                2,
                v.iter().map(|&x| ExactScalar::from_int(p, x)).collect(),
            )
        };
        let y = e(&[2, 1, 4, 5]);
        let (l, d, u) = ldu(&y).unwrap();
        assert_eq!(l.mul(&d).mul(&u), y);
        assert!(ldu(&e(&[0, 1, 1, 0])).is_none());
    }

    #[test]
    fn swap_and_inverse_transpose() {
        for name in ["diag-gl2", "gl3-so3-theta"] {
            let s = Scenario::build(name, None, None).unwrap();
            for m in [1, 2] {
                let r = symmetric_pair_check(&s, m, 100, 3).unwrap();
                assert!(r.holds(), "{} {:?}", name, r);
                assert_eq!(r.samples, 100);
            }
        }
    }

    #[test]
    fn identity_is_trivially_factored() {
        let s = Scenario::build("diag-gl2", None, None).unwrap();
        let theta = s.h.involution.clone().unwrap();
        let sampler = HSampler::new(&s, 1).unwrap();
        let pe = ExactScalar::from_int(s.p, 3);
        let xi_exp: Vec<i64> =
            s.mu.iter()
                .zip(theta.on_cocharacter(&s.mu))
                .map(|(a, b)| b - a)
                .collect();
        let xi = s.g.cocharacter_exact(&xi_exp, &pe);
        let id = Matrix::identity(4, &ExactScalar::one(s.p));
        assert!(certify(
            &s,
            &theta,
            &sampler,
            &xi,
            &xi.inverse().unwrap(),
            &id
        ));
    }

    #[test]
    fn rejects_non_symmetric_pairs() {
        let s = Scenario::build("so5-u2", None, None).unwrap();
        assert!(matches!(
            symmetric_pair_check(&s, 1, 1, 0),
            Err(RelationError::Unsupported(_))
        ));
    }
}
