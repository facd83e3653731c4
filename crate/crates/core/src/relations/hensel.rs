//! Newton lifting of `n ∈ N_m` to `h ∈ H(O)` with `h ∈ n B-bar(O)`.

use serde::Serialize;

use crate::arith::ring::{mat_inv, upper_part};
use crate::arith::{DualRing, PMat, PRing, Ring};
use crate::groups::lattice::rank_mod_p;
use crate::groups::{ReducedChart, Scenario};

use super::RelationError;

#[derive(Clone, Debug, Serialize)]
pub struct HenselLift {
    /// Row-major entries of `h` modulo `p^N`.
    pub h: Vec<u64>,
    pub coords: Vec<u64>,
    pub iterations: usize,
    /// Valuation of the residual before each Newton step.
    pub residuals: Vec<u32>,
}

/// Solves `upper_part(chart(c)) = n` at the positive root positions.
pub struct HenselLifter {
    pub ring: PRing,
    n: usize,
    chart: ReducedChart,
    pos: Vec<(usize, usize)>,
}

impl HenselLifter {
    pub fn new(s: &Scenario) -> Result<Self, RelationError> {
        let ring = s.ring();
        let chart = s
            .reduced_chart(ring)
            .ok_or_else(|| RelationError::NotSpherical(s.name().into()))?;
        Ok(HenselLifter {
            ring,
            n: s.g.dim,
            chart,
            pos: s.root_positions(),
        })
    }

    fn upper<R: Ring>(&self, r: &R, c: &[R::E]) -> Option<Vec<R::E>> {
        let h = self.chart.eval(r, c)?;
        upper_part(r, self.n, &h)
    }

    fn residual(&self, c: &[u64], target: &[u64]) -> Option<Vec<u64>> {
        let r = &self.ring;
        let u = self.upper(r, c)?;
        Some(
            self.pos
                .iter()
                .map(|&(a, b)| r.sub(u[a * self.n + b], target[a * self.n + b]))
                .collect(),
        )
    }

    /// Jacobian of the residual at `c`, from one dual-number evaluation per
    /// coordinate.
    fn jacobian(&self, c: &[u64]) -> Option<Vec<u64>> {
        let d = c.len();
        let dual = DualRing(self.ring);
        let mut jac = vec![0u64; d * d];
        for k in 0..d {
            let cd: Vec<(u64, u64)> = c
                .iter()
                .enumerate()
                .map(|(j, &x)| (x, (j == k) as u64))
                .collect();
            let u = self.upper(&dual, &cd)?;
            for (row, &(a, b)) in self.pos.iter().enumerate() {
                jac[row * d + k] = u[a * self.n + b].1;
            }
        }
        Some(jac)
    }

    pub fn lift(&self, target: &PMat) -> Result<HenselLift, RelationError> {
        let r = self.ring;
        if target.shift != 0 || target.digits < r.prec {
            return Err(RelationError::Inconsistent(
                "target is not known to full precision".into(),
            ));
        }
        let t = &target.m;
        let d = self.pos.len();
        let mut c = vec![0u64; d];
        let mut residuals = vec![];
        for it in 0..16 {
            let f = self
                .residual(&c, t)
                .ok_or(RelationError::NoConvergence { rank: 0, dim: d })?;
            let v = f.iter().map(|&x| r.val(x)).min().unwrap_or(r.prec);
            residuals.push(v);
            if v >= r.prec {
                let h = self.chart.eval(&r, &c).unwrap();
                let u = upper_part(&r, self.n, &h).unwrap();
                if u != *t {
                    return Err(RelationError::Inconsistent(
                        "lift matches the root coordinates but not the full unipotent".into(),
                    ));
                }
                return Ok(HenselLift {
                    h,
                    coords: c,
                    iterations: it,
                    residuals,
                });
            }
            let jac = self
                .jacobian(&c)
                .ok_or(RelationError::NoConvergence { rank: 0, dim: d })?;
            let Some(jinv) = mat_inv(&r, d, &jac) else {
                let rows: Vec<Vec<u64>> = jac
                    .chunks(d)
                    .map(|x| x.iter().map(|v| v % r.p).collect())
                    .collect();
                return Err(RelationError::NoConvergence {
                    rank: rank_mod_p(&rows, r.p),
                    dim: d,
                });
            };
            for (row, ck) in c.iter_mut().enumerate() {
                let mut s = 0;
                for k in 0..d {
                    s = r.add(s, r.mul(jinv[row * d + k], f[k]));
                }
                *ck = r.sub(*ck, s);
            }
        }
        Err(RelationError::NoConvergence { rank: d, dim: d })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ring::mat_mul;
    use crate::arith::{ExactScalar, Matrix};
    use crate::groups::Chart;
    use crate::relations::n_level_reps;

    #[test]
    fn identity_lifts_to_identity() {
        let s = Scenario::build("so5-u2", None, None).unwrap();
        let l = HenselLifter::new(&s).unwrap();
        let id = PMat::identity(l.ring, 5);
        let h = l.lift(&id).unwrap();
        assert_eq!(h.iterations, 0);
        assert_eq!(h.h, id.m);
    }

    #[test]
    fn newton_converges_quadratically() {
        let s = Scenario::build("so5-u2", None, None).unwrap();
        let l = HenselLifter::new(&s).unwrap();
        let reps = n_level_reps(&s.g, l.ring, &s.mu, 1, 1);
        for n in reps.iter().step_by(97) {
            let h = l.lift(n).unwrap();
            for w in h.residuals.windows(2) {
                if w[1] < l.ring.prec {
                    assert!(w[1] >= 2 * w[0], "{:?}", h.residuals);
                }
            }
            // h = n L with L lower triangular.
            let ninv = mat_inv(&l.ring, 5, &n.m).unwrap();
            let low = mat_mul(&l.ring, 5, &ninv, &h.h);
            for a in 0..5 {
                for b in a + 1..5 {
                    assert_eq!(low[a * 5 + b], 0);
                }
            }
        }
    }

    #[test]
    fn cayley_chart_lands_in_h() {
        for name in ["so5-u2", "ggp-gl-n2", "diag-gl2", "gl3-so3-theta"] {
            let s = Scenario::build(name, None, None).unwrap();
            let p = s.p;
            let Some(Chart::Cayley { basis }) = &s.h.chart else {
                panic!("{}", name)
            };
            let one = ExactScalar::one(p);
            let mut x = Matrix::zeros(s.g.dim, s.g.dim, &ExactScalar::zero(p));
            for (k, b) in basis.iter().enumerate() {
                x = x.add(&b.scale(&ExactScalar::from_int(p, 3 * k as i64 + 3)));
            }
            let id = Matrix::identity(s.g.dim, &one);
            let h = id.sub(&x).inverse().unwrap().mul(&id.add(&x));
            assert!(s.contains(&h).unwrap(), "{}", name);
        }
    }

    #[test]
    fn gsp4_chart_satisfies_the_equations() {
        let s = Scenario::build("gsp4", None, None).unwrap();
        let r = s.ring();
        let chart = s.reduced_chart(r).unwrap();
        let h = chart.eval(&r, &[3, 6, 9, 3]).unwrap();
        let (_, pm) = crate::groups::gsp4_bases(s.p);
        let red = |m: &Matrix<ExactScalar>| -> Vec<u64> {
            m.entries()
                .iter()
                .map(|x| r.reduce_rational(&x.to_rational()).unwrap())
                .collect()
        };
        let he = mat_mul(
            &r,
            4,
            &mat_mul(&r, 4, &red(&pm), &h),
            &red(&pm.inverse().unwrap()),
        );
        let e = |i: usize, j: usize| he[i * 4 + j];
        for (i, j) in [
            (0, 1),
            (0, 2),
            (1, 0),
            (1, 3),
            (2, 0),
            (2, 3),
            (3, 1),
            (3, 2),
        ] {
            assert_eq!(e(i, j), 0);
        }
        assert_eq!(e(0, 0), e(3, 3));
        assert_eq!(e(0, 3), r.neg(e(3, 0)));
        let sim = r.add(r.mul(e(0, 0), e(0, 0)), r.mul(e(0, 3), e(0, 3)));
        assert_eq!(sim, r.sub(r.mul(e(1, 1), e(2, 2)), r.mul(e(1, 2), e(2, 1))));
    }
}
