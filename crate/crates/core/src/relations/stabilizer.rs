//! The stabilizer property `H(F) ∩ tau^m K tau^-m ⊂ K` and the residue-level
//! intersection `H ∩ B-bar`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{ExactScalar, Matrix, Scalar};
use crate::groups::lattice::{combine, integrality_lattice, reduce_mod_p, saturate};
use crate::groups::{gsp4_bases, gsp4_e_matrix, Scenario, ScenarioKind};

use super::RelationError;

fn tau_power(s: &Scenario, k: i64) -> Matrix<ExactScalar> {
    let mu: Vec<i64> = s.mu.iter().map(|x| k * x).collect();
    s.g.cocharacter_exact(&mu, &ExactScalar::from_int(s.p, s.p as i64))
}

pub(super) fn in_gl_o(x: &Matrix<ExactScalar>) -> bool {
    x.is_integral() && x.det().valuation() == Some(0)
}

/// Lie directions whose Cayley transforms stay in `H`. For the similitude
/// pair the central direction is dropped: Cayley maps `sp` into `Sp`.
fn sampling_basis(s: &Scenario) -> Vec<Matrix<ExactScalar>> {
    if s.info.kind != ScenarioKind::Gsp4 {
        return s.h.lie_basis.clone();
    }
    let p = s.p;
    let (_, pm) = gsp4_bases(p);
    let pinv = pm.inverse().unwrap();
    let e = [
        gsp4_e_matrix(p, 0, 1, 0, 0, 0, 0),
        gsp4_e_matrix(p, 0, 0, 1, 0, 0, -1),
        gsp4_e_matrix(p, 0, 0, 0, 1, 0, 0),
        gsp4_e_matrix(p, 0, 0, 0, 0, 1, 0),
    ];
    saturate(
        &e.iter().map(|m| pinv.mul(m).mul(&pm)).collect::<Vec<_>>(),
        p,
    )
}

fn cayley(x: &Matrix<ExactScalar>) -> Option<Matrix<ExactScalar>> {
    let id = Matrix::identity(x.rows(), &x.get(0, 0).one_like());
    let plus = id.add(x);
    if plus.det().is_zero() {
        return None;
    }
    Some(id.sub(x).inverse()?.mul(&plus))
}

fn render(x: &Matrix<ExactScalar>) -> String {
    let rows: Vec<String> = (0..x.rows())
        .map(|r| {
            (0..x.cols())
                .map(|c| x.get(r, c).to_rational().to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

/// Random elements of `H(F)`: products of Cayley transforms of Lie
/// elements from the lattice `{X : tau^-m X tau^m integral}`.
pub(super) struct HSampler {
    p: u64,
    dim: usize,
    basis: Vec<Matrix<ExactScalar>>,
    lattice: Vec<Vec<ExactScalar>>,
    pub t: Matrix<ExactScalar>,
    pub t_inv: Matrix<ExactScalar>,
}

impl HSampler {
    pub fn new(s: &Scenario, m: i64) -> Result<Self, RelationError> {
        let (t, t_inv) = (tau_power(s, m), tau_power(s, -m));
        let basis = sampling_basis(s);
        let conj: Vec<_> = basis.iter().map(|y| t_inv.mul(y).mul(&t)).collect();
        let lattice = integrality_lattice(&conj, s.p)
            .ok_or_else(|| RelationError::Inconsistent("Lie basis is not independent".into()))?;
        Ok(HSampler {
            p: s.p,
            dim: s.g.dim,
            basis,
            lattice,
            t,
            t_inv,
        })
    }

    /// One or two factors; each factor is scaled by `p^-1` with probability
    /// `1 / scale_odds` (never when `scale_odds` is 0).
    pub fn draw(&self, rng: &mut ChaCha8Rng, scale_odds: u32) -> Option<Matrix<ExactScalar>> {
        let p = self.p;
        let pinv = ExactScalar::p_power(p, -1);
        let mut x = Matrix::identity(self.dim, &ExactScalar::one(p));
        for _ in 0..rng.gen_range(1..=2) {
            let mut c = vec![ExactScalar::zero(p); self.basis.len()];
            for v in &self.lattice {
                let r = ExactScalar::from_int(p, rng.gen_range(-(p as i64)..=p as i64));
                for (ci, vi) in c.iter_mut().zip(v) {
                    *ci = ci.add(&r.mul(vi));
                }
            }
            let mut lie = combine(&self.basis, &c);
            if scale_odds > 0 && rng.gen_range(0..scale_odds) == 0 {
                lie = lie.scale(&pinv);
            }
            x = x.mul(&cayley(&lie)?);
        }
        Some(x)
    }

    /// `x ∈ tau^m K tau^-m`.
    pub fn in_conjugate(&self, x: &Matrix<ExactScalar>) -> bool {
        in_gl_o(&self.t_inv.mul(x).mul(&self.t))
    }
}

pub(super) fn render_matrix(x: &Matrix<ExactScalar>) -> String {
    render(x)
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilizerReport {
    pub m: i64,
    /// Every element of `span(H) ∩ tau^m M(O) tau^-m` is integral, which
    /// proves the property for all of `H(F)` (apply it to `x` and `x^-1`).
    /// `None` when the pair has no linear span.
    pub certificate: Option<bool>,
    pub lattice_rank: usize,
    pub samples: usize,
    /// Samples landing in `tau^m K tau^-m`.
    pub hits: usize,
    pub violations: usize,
    pub witness: Option<String>,
}

impl StabilizerReport {
    pub fn exhaustive(&self) -> bool {
        self.certificate == Some(true)
    }

    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

fn certificate(s: &Scenario, m: i64) -> Result<(Option<bool>, usize), RelationError> {
    let Some(span) = &s.h.linear_span else {
        return Ok((None, 0));
    };
    let (t, ti) = (tau_power(s, m), tau_power(s, -m));
    let conj: Vec<_> = span.iter().map(|y| ti.mul(y).mul(&t)).collect();
    let lattice = integrality_lattice(&conj, s.p)
        .ok_or_else(|| RelationError::Inconsistent("linear span is not independent".into()))?;
    let ok = lattice.iter().all(|c| combine(span, c).is_integral());
    Ok((Some(ok), lattice.len()))
}

/// Searches `H(F) ∩ tau^m K tau^-m` for elements outside `K`. Samples are
/// products of Cayley transforms of Lie elements from the lattice
/// `{X : tau^-m X tau^m integral}`, a quarter of them scaled by `p^-1`.
pub fn stabilizer_check(
    s: &Scenario,
    m: i64,
    samples: usize,
    seed: u64,
) -> Result<StabilizerReport, RelationError> {
    if m == 0 {
        return Ok(StabilizerReport {
            m,
            certificate: Some(true),
            lattice_rank: 0,
            samples: 0,
            hits: 0,
            violations: 0,
            witness: None,
        });
    }
    let (cert, lattice_rank) = certificate(s, m)?;
    let sampler = HSampler::new(s, m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (m as u64).wrapping_mul(0x9e37_79b9));
    let (mut drawn, mut hits, mut violations, mut witness) = (0, 0, 0, None);
    while drawn < samples {
        let Some(x) = sampler.draw(&mut rng, 4) else {
            continue;
        };
        if drawn < 32 && !s.contains(&x)? {
            return Err(RelationError::Inconsistent(format!(
                "sample {} left H",
                render(&x)
            )));
        }
        drawn += 1;
        if sampler.in_conjugate(&x) {
            hits += 1;
            if !in_gl_o(&x) {
                violations += 1;
                witness.get_or_insert_with(|| render(&x));
            }
        }
    }
    Ok(StabilizerReport {
        m,
        certificate: cert,
        lattice_rank,
        samples: drawn,
        hits,
        violations,
        witness,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BorelIntersectionReport {
    /// Residue-level candidates enumerated.
    pub enumerated: u128,
    /// Elements of `H(F_q) ∩ B-bar(F_q)` found.
    pub found: usize,
    /// Expected size: trivial, the centre, a torus or the finite group
    /// of signs, depending on the pair.
    pub expected: Option<usize>,
    pub description: String,
}

impl BorelIntersectionReport {
    pub fn holds(&self) -> bool {
        self.expected.map_or(true, |e| e == self.found)
    }
}

/// Solves the defining equations of `H ∩ B-bar` over `F_q` by enumerating
/// the reduction of the linear span (all lower triangular matrices when
/// the pair has none).
pub fn borel_intersection_check(
    s: &Scenario,
    budget: usize,
) -> Result<BorelIntersectionReport, RelationError> {
    let p = s.p;
    let d = s.g.dim;
    let basis: Vec<Matrix<ExactScalar>> = match &s.h.linear_span {
        Some(span) => saturate(span, p),
        None => (0..d)
            .flat_map(|r| (0..=r).map(move |c| (r, c)))
            .map(|(r, c)| {
                Matrix::from_fn(d, d, |a, b| {
                    ExactScalar::from_int(p, (a == r && b == c) as i64)
                })
            })
            .collect(),
    };
    let k = basis.len() as u32;
    let total = (p as u128).pow(k);
    if total > budget as u128 {
        return Err(RelationError::Budget(total, budget));
    }
    let reduces_to_zero = |x: &ExactScalar| x.is_zero() || x.valuation().map_or(false, |v| v >= 1);
    let mut found = 0;
    let mut coords = vec![0i64; k as usize];
    for idx in 0..total {
        let mut rest = idx;
        for c in coords.iter_mut() {
            *c = (rest % p as u128) as i64;
            rest /= p as u128;
        }
        let c: Vec<ExactScalar> = coords
            .iter()
            .map(|&v| ExactScalar::from_int(p, v))
            .collect();
        let x = combine(&basis, &c);
        let lower = (0..d).all(|r| (r + 1..d).all(|col| reduce_mod_p(x.get(r, col), p) == 0));
        if !lower || reduce_mod_p(&x.det(), p) == 0 {
            continue;
        }
        if s.g
            .member_residuals(&x)
            .iter()
            .chain(s.extra_residuals(&x).iter())
            .all(reduces_to_zero)
        {
            found += 1;
        }
    }
    let n = s.info.rank;
    let (expected, description) = match s.info.kind {
        ScenarioKind::Unitary | ScenarioKind::Ggp => (Some(1), "trivial"),
        ScenarioKind::Gsp4 => (Some(p as usize - 1), "the centre"),
        ScenarioKind::DiagonalPair => (Some((p as usize - 1).pow(n as u32)), "the diagonal torus"),
        ScenarioKind::Torus => (Some(p as usize - 1), "all of H"),
        ScenarioKind::OrthogonalSymmetric => {
            (Some(1 << (n - 1)), "diagonal signs of determinant one")
        }
        ScenarioKind::SplitUnitary => (None, "not predicted"),
    };
    Ok(BorelIntersectionReport {
        enumerated: total,
        found,
        expected,
        description: description.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificates_for_spanned_pairs() {
        for name in ["so3-u1", "so5-u2", "gsp4", "ggp-gl-n2", "diag-gl2", "gl2"] {
            let s = Scenario::build(name, None, None).unwrap();
            for m in [1, 2] {
                let r = stabilizer_check(&s, m, 200, 5).unwrap();
                assert_eq!(r.certificate, Some(true), "{} m={}", name, m);
                assert!(r.holds(), "{} {:?}", name, r);
            }
        }
    }

    #[test]
    fn certificate_fails_for_the_full_matrix_algebra() {
        let mut s = Scenario::build("gl2", None, None).unwrap();
        let p = s.p;
        let units = (0..4)
            .map(|k| {
                Matrix::from_fn(2, 2, |r, c| {
                    ExactScalar::from_int(p, (r * 2 + c == k) as i64)
                })
            })
            .collect();
        s.h.linear_span = Some(units);
        assert_eq!(certificate(&s, 1).unwrap().0, Some(false));
    }

    #[test]
    fn symmetric_pair_is_sampled() {
        let s = Scenario::build("gl3-so3-theta", None, None).unwrap();
        let r = stabilizer_check(&s, 1, 300, 9).unwrap();
        assert_eq!(r.certificate, None);
        assert!(r.hits > 0 && r.holds(), "{:?}", r);
    }

    #[test]
    fn trivial_level() {
        let s = Scenario::build("so5-u2", None, None).unwrap();
        assert!(stabilizer_check(&s, 0, 10, 0).unwrap().exhaustive());
    }

    #[test]
    fn borel_intersections() {
        for name in [
            "so3-u1",
            "so5-u2",
            "gsp4",
            "ggp-gl-n2",
            "diag-gl2",
            "gl3-so3-theta",
            "gl2",
        ] {
            let s = Scenario::build(name, None, None).unwrap();
            let r = borel_intersection_check(&s, 1_000_000).unwrap();
            assert!(r.holds(), "{} {:?}", name, r);
        }
    }
}
