//! The diagonal pair `G0 ⊂ G0 x G0`, where property (A) fails for large
//! `N`, and the transfer of property (A) through an involution.

use num_rational::Rational64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::field::Fp;
use super::filtration::{direct_sum, scalar_product, Filtration};
use super::FiltrationError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DiagonalBase {
    /// `SL(n)` with the upper triangular Borel.
    Sl(usize),
    /// A split torus of the given rank.
    Torus(usize),
}

impl DiagonalBase {
    pub fn rank(&self) -> usize {
        match self {
            DiagonalBase::Sl(n) | DiagonalBase::Torus(n) => *n,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterRow {
    pub n: i64,
    pub direct: String,
    pub formula: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub base: DiagonalBase,
    pub mu1: Vec<i64>,
    pub mu2: Vec<i64>,
    /// `mu2` strictly dominant for the opposite Borel.
    pub mu2_antidominant: bool,
    pub rows: Vec<CounterRow>,
    pub witness_n: i64,
    pub witness_value: String,
}

impl CounterexampleReport {
    pub fn consistent(&self) -> bool {
        self.rows.iter().all(|r| r.direct == r.formula)
    }
}

fn strictly_decreasing(v: &[i64]) -> bool {
    v.windows(2).all(|w| w[0] > w[1])
}

/// Smallest `N` in `1..=n_max` with `<F_N, F_(mu_N)> > 0`, where
/// `F_N = N Fil(mu1^-1)` sits diagonally and `mu_N = (mu1^N, mu2)`.
pub fn counterexample_search(
    p: u64,
    base: DiagonalBase,
    mu1: &[i64],
    mu2: &[i64],
    n_max: i64,
) -> Result<CounterexampleReport, FiltrationError> {
    let r = base.rank();
    if mu1.len() != r || mu2.len() != r {
        return Err(FiltrationError::InvalidCocharacter(format!(
            "expected {} coordinates",
            r
        )));
    }
    let mut mu2_antidominant = true;
    if let DiagonalBase::Sl(_) = base {
        if mu1.iter().sum::<i64>() != 0 || mu2.iter().sum::<i64>() != 0 {
            return Err(FiltrationError::InvalidCocharacter(
                "SL cocharacters have coordinate sum zero".into(),
            ));
        }
        if !strictly_decreasing(mu1) {
            return Err(FiltrationError::InvalidCocharacter(format!(
                "{:?} is not strictly dominant",
                mu1
            )));
        }
        let rev: Vec<i64> = mu2.iter().rev().copied().collect();
        mu2_antidominant = strictly_decreasing(&rev);
    }
    let k = Fp::new(p);
    let neg = |v: &[i64], s: i64| -> Vec<i64> { v.iter().map(|x| -s * x).collect() };
    let a = Filtration::from_cocharacter(k, &neg(mu1, 1));
    let b = Filtration::from_cocharacter(k, &neg(mu2, 1));
    let aa = scalar_product(&a, &a)?;
    let ab = scalar_product(&a, &b)?;
    let mut rows = vec![];
    for n in 1..=n_max {
        let f_n = Filtration::from_cocharacter(k, &neg(mu1, n));
        let h = direct_sum(&f_n, &f_n);
        let zeta = direct_sum(&f_n, &b);
        let direct = scalar_product(&h, &zeta)?;
        let nn = Rational64::from_integer(n);
        let formula = nn * nn * aa + nn * ab;
        rows.push(CounterRow {
            n,
            direct: direct.to_string(),
            formula: formula.to_string(),
        });
        if direct > Rational64::zero() {
            return Ok(CounterexampleReport {
                base,
                mu1: mu1.to_vec(),
                mu2: mu2.to_vec(),
                mu2_antidominant,
                rows,
                witness_n: n,
                witness_value: direct.to_string(),
            });
        }
    }
    Err(FiltrationError::NotFound(format!(
        "no positive value for N <= {}",
        n_max
    )))
}

#[derive(Clone, Debug, Serialize)]
pub struct TransferReport {
    pub product_pairs: usize,
    pub h_filtrations: usize,
    /// `<F, A> + <F, theta A> <= <F, A + theta A> = 0` on every sample.
    pub inequality_ok: bool,
    pub max_value: String,
}

impl TransferReport {
    pub fn holds(&self) -> bool {
        self.inequality_ok
            && self
                .max_value
                .parse::<Rational64>()
                .map_or(false, |v| v <= Rational64::zero())
    }
}

/// Checks that `theta` preserves the scalar product on `probes`, fixes
/// every `h_filtrations` entry and negates `f_zeta`; then verifies the
/// inequality and `<F, f_zeta> <= 0` on every `H`-filtration.
pub fn involution_transfer_check(
    theta: &dyn Fn(&Filtration) -> Filtration,
    h_filtrations: &[Filtration],
    f_zeta: &Filtration,
    probes: &[Filtration],
) -> Result<TransferReport, FiltrationError> {
    let mut product_pairs = 0;
    for (i, a) in probes.iter().enumerate() {
        for b in &probes[i..] {
            product_pairs += 1;
            if scalar_product(&theta(a), &theta(b))? != scalar_product(a, b)? {
                return Err(FiltrationError::HypothesisFailed(format!(
                    "theta does not preserve <{}, {}>",
                    a, b
                )));
            }
        }
    }
    for f in h_filtrations {
        if theta(f) != *f {
            return Err(FiltrationError::HypothesisFailed(format!(
                "theta moves the H-filtration {}",
                f
            )));
        }
    }
    let tz = theta(f_zeta);
    let sum = f_zeta.add_diagonal(&tz).map_err(|_| {
        FiltrationError::HypothesisFailed(
            "F_zeta and its image have no common diagonal splitting".into(),
        )
    })?;
    if sum != Filtration::trivial(f_zeta.k, f_zeta.ambient()) {
        return Err(FiltrationError::HypothesisFailed(
            "theta(F_zeta) + F_zeta is not zero".into(),
        ));
    }
    let mut inequality_ok = true;
    let mut max_value: Option<Rational64> = None;
    for f in h_filtrations {
        let v = scalar_product(f, f_zeta)?;
        let lhs = v + scalar_product(f, &tz)?;
        inequality_ok &= lhs <= scalar_product(f, &sum)?;
        max_value = Some(max_value.map_or(v, |m| m.max(v)));
    }
    Ok(TransferReport {
        product_pairs,
        h_filtrations: h_filtrations.len(),
        inequality_ok,
        max_value: max_value.unwrap_or_default().to_string(),
    })
}

fn random_gl(k: &Fp, n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
    loop {
        let m: Vec<Vec<u64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(0..k.p)).collect())
            .collect();
        if k.det(&m) != 0 {
            return m;
        }
    }
}

/// The swap involution on `V0 ⊕ V0` for `GL(n0)` embedded diagonally, with
/// `F_zeta = Fil(nu, -nu)`.
pub fn diagonal_swap_transfer(
    p: u64,
    nu: &[i64],
    bound: i64,
    samples: usize,
    seed: u64,
) -> Result<TransferReport, FiltrationError> {
    let k = Fp::new(p);
    let n0 = nu.len();
    let swap: Vec<Vec<u64>> = (0..2 * n0)
        .map(|r| {
            (0..2 * n0)
                .map(|c| ((r + n0) % (2 * n0) == c) as u64)
                .collect()
        })
        .collect();
    let theta = move |f: &Filtration| f.act(&swap);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = vec![];
    let mut probes = vec![];
    for _ in 0..samples {
        let lambda: Vec<i64> = (0..n0).map(|_| rng.gen_range(-bound..=bound)).collect();
        let f = Filtration::from_cocharacter(k, &lambda).act(&random_gl(&k, n0, &mut rng));
        h.push(direct_sum(&f, &f));
        let other: Vec<i64> = (0..2 * n0).map(|_| rng.gen_range(-bound..=bound)).collect();
        if probes.len() < 12 {
            probes.push(Filtration::from_cocharacter(k, &other).act(&random_gl(
                &k,
                2 * n0,
                &mut rng,
            )));
        }
    }
    let mut z = nu.to_vec();
    z.extend(nu.iter().map(|x| -x));
    involution_transfer_check(&theta, &h, &Filtration::from_cocharacter(k, &z), &probes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_witness() {
        let r = counterexample_search(3, DiagonalBase::Sl(2), &[1, -1], &[-1, 1], 10).unwrap();
        assert_eq!((r.witness_n, r.witness_value.as_str()), (2, "4"));
        assert!(r.consistent() && r.mu2_antidominant);
        assert_eq!(r.rows[0].direct, "0");
    }

    #[test]
    fn degenerate_choice_is_immediately_positive() {
        let r = counterexample_search(3, DiagonalBase::Sl(2), &[1, -1], &[1, -1], 10).unwrap();
        assert_eq!(r.witness_n, 1);
        assert!(!r.mu2_antidominant);
    }

    #[test]
    fn torus_variant() {
        let r = counterexample_search(5, DiagonalBase::Torus(2), &[1, 0], &[-2, 0], 10).unwrap();
        assert_eq!((r.witness_n, r.witness_value.as_str()), (3, "3"));
        assert!(r.consistent());
    }

    #[test]
    fn rejects_non_dominant() {
        assert!(counterexample_search(3, DiagonalBase::Sl(2), &[-1, 1], &[-1, 1], 5).is_err());
    }

    #[test]
    fn swap_transfer() {
        let r = diagonal_swap_transfer(3, &[2, -1], 2, 60, 4).unwrap();
        assert!(r.holds(), "{:?}", r);
    }

    #[test]
    fn identity_with_zero_zeta() {
        let k = Fp::new(3);
        let f = Filtration::from_cocharacter(k, &[1, 0, -2]);
        let r = involution_transfer_check(
            &|x: &Filtration| x.clone(),
            &[f.clone()],
            &Filtration::trivial(k, 3),
            &[f],
        )
        .unwrap();
        assert!(r.holds());
    }

    #[test]
    fn scaling_breaks_the_hypothesis() {
        let k = Fp::new(3);
        let f = Filtration::from_cocharacter(k, &[1, 0]);
        let double = |x: &Filtration| x.scale(Rational64::from_integer(2));
        let err =
            involution_transfer_check(&double, &[], &Filtration::trivial(k, 2), &[f]).unwrap_err();
        assert!(matches!(err, FiltrationError::HypothesisFailed(_)));
    }
}
