//! The catalog of subgroup pairs `H ⊂ G` with their cocharacters, charts,
//! abelianization characters and involutions.

use serde::Serialize;

use crate::arith::{ring, ExactScalar, Matrix, PRing, QuadResidue, Ring, Scalar};

use super::lattice::{flatten_mod_p, rank_mod_p, saturate};
use super::special::{solve_linear_family, SpecialBasis};
use super::{Descriptor, Family, GroupError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ScenarioKind {
    /// `GL(n)` with the torus `t -> diag(t, 1, .., 1)`.
    Torus,
    /// `U(n) ⊂ SO(2n+1)` at an inert place.
    Unitary,
    /// `GL(n) ⊂ SO(2n+1)` at a split place.
    SplitUnitary,
    /// `GU(1) x GL(2) ⊂ GSp(4)`.
    Gsp4,
    /// `GL(n) ⊂ GL(n+1) x GL(n)`.
    Ggp,
    /// `GL(2)` diagonally in `GL(2) x GL(2)`.
    DiagonalPair,
    /// `SO(3) ⊂ GL(3)`, fixed points of `A -> A^-T`.
    OrthogonalSymmetric,
}

/// Static catalog entry.
#[derive(Clone, Debug, Serialize)]
pub struct ScenarioInfo {
    pub name: &'static str,
    pub anchor: &'static str,
    pub ambient: &'static str,
    pub subgroup: &'static str,
    pub kind: ScenarioKind,
    pub default_p: u64,
    pub default_mu: &'static [i64],
    pub tame_mu: Option<&'static [i64]>,
    /// Rank parameter `n` where the family has one.
    pub rank: usize,
}

const CATALOG: &[ScenarioInfo] = &[
    ScenarioInfo {
        name: "gl1",
        anchor: "seed relation, rank one",
        ambient: "GL(1)",
        subgroup: "GL(1)",
        kind: ScenarioKind::Torus,
        default_p: 3,
        default_mu: &[1],
        tame_mu: Some(&[1]),
        rank: 1,
    },
    ScenarioInfo {
        name: "gl2",
        anchor: "seed relation, GL(2)",
        ambient: "GL(2)",
        subgroup: "GL(1) as diag(t, 1)",
        kind: ScenarioKind::Torus,
        default_p: 3,
        default_mu: &[1, 0],
        tame_mu: Some(&[1, 0]),
        rank: 2,
    },
    ScenarioInfo {
        name: "gl3",
        anchor: "seed relation, GL(3)",
        ambient: "GL(3)",
        subgroup: "GL(1) as diag(t, 1, 1)",
        kind: ScenarioKind::Torus,
        default_p: 3,
        default_mu: &[1, 0, 0],
        tame_mu: Some(&[1, 0, 0]),
        rank: 3,
    },
    ScenarioInfo {
        name: "so3-u1",
        anchor: "inert unitary pair, n = 1",
        ambient: "SO(3), special basis",
        subgroup: "U(1)",
        kind: ScenarioKind::Unitary,
        default_p: 3,
        default_mu: &[1, 0, -1],
        tame_mu: None,
        rank: 1,
    },
    ScenarioInfo {
        name: "so5-u2",
        anchor: "inert unitary pair, n = 2",
        ambient: "SO(5), special basis",
        subgroup: "U(2)",
        kind: ScenarioKind::Unitary,
        default_p: 3,
        default_mu: &[2, 1, 0, -1, -2],
        tame_mu: None,
        rank: 2,
    },
    ScenarioInfo {
        name: "so5-gl2-split",
        anchor: "split unitary pair, n = 2",
        ambient: "SO(5), split special basis",
        subgroup: "GL(2)",
        kind: ScenarioKind::SplitUnitary,
        default_p: 3,
        default_mu: &[2, 1, 0, -1, -2],
        tame_mu: Some(&[1, 0, 0, 0, -1]),
        rank: 2,
    },
    ScenarioInfo {
        name: "so3-gl1-split",
        anchor: "split unitary pair, n = 1",
        ambient: "SO(3), split special basis",
        subgroup: "GL(1)",
        kind: ScenarioKind::SplitUnitary,
        default_p: 3,
        default_mu: &[1, 0, -1],
        tame_mu: Some(&[1, 0, -1]),
        rank: 1,
    },
    ScenarioInfo {
        name: "gsp4",
        anchor: "similitude pair GU(1) x GL(2) in GSp(4)",
        ambient: "GSp(4), gamma basis",
        subgroup: "GU(1) x_Gm GL(2)",
        kind: ScenarioKind::Gsp4,
        default_p: 3,
        default_mu: &[2, 1, 0, -1],
        tame_mu: None,
        rank: 2,
    },
    ScenarioInfo {
        name: "ggp-gl-n2",
        anchor: "GGP pair GL(2) in GL(3) x GL(2)",
        ambient: "GL(3) x GL(2)",
        subgroup: "GL(2)",
        kind: ScenarioKind::Ggp,
        default_p: 3,
        default_mu: &[2, 1, 0, 1, 0],
        tame_mu: None,
        rank: 2,
    },
    ScenarioInfo {
        name: "diag-gl2",
        anchor: "diagonal pair GL(2) in GL(2) x GL(2)",
        ambient: "GL(2) x GL(2)",
        subgroup: "GL(2)",
        kind: ScenarioKind::DiagonalPair,
        default_p: 3,
        default_mu: &[1, 0, 1, 0],
        tame_mu: None,
        rank: 2,
    },
    ScenarioInfo {
        name: "gl3-so3-theta",
        anchor: "symmetric pair SO(3) in GL(3)",
        ambient: "GL(3)",
        subgroup: "SO(3)",
        kind: ScenarioKind::OrthogonalSymmetric,
        default_p: 3,
        default_mu: &[1, 0, -1],
        tame_mu: None,
        rank: 3,
    },
];

pub fn catalog() -> &'static [ScenarioInfo] {
    CATALOG
}

/// Abelianization character `H -> T` used for conductor filtrations.
#[derive(Clone, Debug)]
pub enum AbKind {
    /// `det_E` on `W`, valued in the norm-one torus.
    UnitaryDet,
    /// `z / conj(z)` with `z = a + b i` read from the `e`-basis matrix.
    Gsp4,
    /// Determinant of a diagonal block.
    BlockDet { offset: usize, size: usize },
}

/// A parametrization of a neighbourhood of `1` in `H(O)` by `|Phi^+|`
/// coordinates.
#[derive(Clone, Debug)]
pub enum Chart {
    /// `h = (1 - X)^-1 (1 + X)` with `X = sum c_k B_k`.
    Cayley { basis: Vec<Matrix<ExactScalar>> },
    /// `a = 1`, coordinates `(b, x - 1, y, z)`, `w = (1 + b^2 + yz) / x`,
    /// conjugated into the gamma basis.
    Gsp4 {
        p: Matrix<ExactScalar>,
        p_inv: Matrix<ExactScalar>,
    },
}

/// Chart data reduced into a residue ring.
#[derive(Clone, Debug)]
pub struct ReducedChart {
    pub n: usize,
    pub dim: usize,
    cayley: Option<Vec<Vec<u64>>>,
    gsp: Option<(Vec<u64>, Vec<u64>)>,
}

impl ReducedChart {
    /// Evaluates the chart at `c`; `None` if a required inverse fails.
    pub fn eval<R: Ring>(&self, r: &R, c: &[R::E]) -> Option<Vec<R::E>> {
        let n = self.n;
        if let Some(basis) = &self.cayley {
            let mut x = vec![r.zero(); n * n];
            for (b, &ck) in basis.iter().zip(c) {
                for (xi, &bi) in x.iter_mut().zip(b) {
                    if bi != 0 {
                        *xi = r.add(*xi, r.mul(ck, r.embed(bi)));
                    }
                }
            }
            let id = ring::mat_identity(r, n);
            let plus: Vec<R::E> = id.iter().zip(&x).map(|(&a, &b)| r.add(a, b)).collect();
            let minus: Vec<R::E> = id.iter().zip(&x).map(|(&a, &b)| r.sub(a, b)).collect();
            let inv = ring::mat_inv(r, n, &minus)?;
            return Some(ring::mat_mul(r, n, &inv, &plus));
        }
        let (p, p_inv) = self.gsp.as_ref().unwrap();
        let (b, x1, y, z) = (c[0], c[1], c[2], c[3]);
        let one = r.one();
        let x = r.add(one, x1);
        let w = r.mul(r.add(r.add(one, r.mul(b, b)), r.mul(y, z)), r.inv(x)?);
        let zero = r.zero();
        let he = vec![
            one,
            zero,
            zero,
            b,
            zero,
            x,
            y,
            zero,
            zero,
            z,
            w,
            zero,
            r.neg(b),
            zero,
            zero,
            one,
        ];
        let pe: Vec<R::E> = p.iter().map(|&v| r.embed(v)).collect();
        let pie: Vec<R::E> = p_inv.iter().map(|&v| r.embed(v)).collect();
        Some(ring::mat_mul(r, 4, &ring::mat_mul(r, 4, &pie, &he), &pe))
    }
}

/// A linear involution of `G` with `theta(B) = B-bar`.
#[derive(Clone, Debug)]
pub enum Involution {
    /// `(x, y) -> (w0 y w0, w0 x w0)` on `GL(n) x GL(n)`.
    SwapConjugate { n: usize },
    /// `A -> A^-T`.
    InverseTranspose,
}

impl Involution {
    pub fn apply(&self, g: &Matrix<ExactScalar>) -> Matrix<ExactScalar> {
        match self {
            Involution::SwapConjugate { n } => {
                let n = *n;
                let zero = g.get(0, 0).zero_like();
                let mut out = Matrix::zeros(2 * n, 2 * n, &zero);
                for r in 0..n {
                    for c in 0..n {
                        out.set(r, c, g.get(n + (n - 1 - r), n + (n - 1 - c)).clone());
                        out.set(n + r, n + c, g.get(n - 1 - r, n - 1 - c).clone());
                    }
                }
                out
            }
            Involution::InverseTranspose => g.inverse().expect("invertible").transpose(),
        }
    }

    pub fn on_cocharacter(&self, mu: &[i64]) -> Vec<i64> {
        match self {
            Involution::SwapConjugate { n } => {
                let n = *n;
                let mut out = vec![0; 2 * n];
                for i in 0..n {
                    out[i] = mu[n + (n - 1 - i)];
                    out[n + i] = mu[n - 1 - i];
                }
                out
            }
            Involution::InverseTranspose => mu.iter().map(|x| -x).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SubgroupModel {
    pub dim: usize,
    /// Saturated `Z_(p)`-basis of `Lie(H) ∩ M(O)`.
    pub lie_basis: Vec<Matrix<ExactScalar>>,
    /// Present when the pair is spherical for the opposite Borel.
    pub chart: Option<Chart>,
    /// A linear family of matrices containing `H`, if one is known.
    pub linear_span: Option<Vec<Matrix<ExactScalar>>>,
    pub ab: AbKind,
    pub involution: Option<Involution>,
    /// `rank(Lie H + Lie B-bar)` over the residue field.
    pub spherical_rank: usize,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub info: ScenarioInfo,
    pub p: u64,
    pub g: Descriptor,
    pub mu: Vec<i64>,
    pub tame_mu: Option<Vec<i64>>,
    pub h: SubgroupModel,
    pub special: Option<SpecialBasis>,
    gsp_basis: Option<(Matrix<ExactScalar>, Matrix<ExactScalar>)>,
}

/// The integer used for the quadratic extension `E = F(sqrt u)`.
pub fn inert_u(p: u64) -> i64 {
    if p % 4 == 3 {
        -1
    } else {
        crate::arith::residue::non_residue(p) as i64
    }
}

fn int_matrix(p: u64, rows: &[&[i64]]) -> Matrix<ExactScalar> {
    Matrix::from_fn(rows.len(), rows[0].len(), |r, c| {
        ExactScalar::from_int(p, rows[r][c])
    })
}

fn antidiag_w0(p: u64, n: usize) -> Matrix<ExactScalar> {
    Matrix::from_fn(n, n, |r, c| {
        ExactScalar::from_int(p, (r + c + 1 == n) as i64)
    })
}

fn block_diag(p: u64, a: &Matrix<ExactScalar>, b: &Matrix<ExactScalar>) -> Matrix<ExactScalar> {
    let (n, m) = (a.rows(), b.rows());
    Matrix::from_fn(n + m, n + m, |r, c| {
        if r < n && c < n {
            a.get(r, c).clone()
        } else if r >= n && c >= n {
            b.get(r - n, c - n).clone()
        } else {
            ExactScalar::zero(p)
        }
    })
}

fn ggp_q(p: u64) -> Matrix<ExactScalar> {
    int_matrix(p, &[&[1, 0, 1], &[0, 1, 1], &[0, 0, 1]])
}

/// The `e`-basis symplectic form and the change of basis to the gamma basis.
pub fn gsp4_bases(p: u64) -> (Matrix<ExactScalar>, Matrix<ExactScalar>) {
    let j = int_matrix(
        p,
        &[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, -1, 0, 0], &[-1, 0, 0, 0]],
    );
    // Columns gamma_1..gamma_4 = e3+e4, e1-e2, e3-e4, e1+e2.
    let pm = int_matrix(
        p,
        &[&[0, 1, 0, 1], &[0, -1, 0, 1], &[1, 0, 1, 0], &[1, 0, -1, 0]],
    );
    (j, pm)
}

/// `[[a,0,0,b],[0,x,y,0],[0,z,w,0],[-b,0,0,a]]` in the `e`-basis.
pub fn gsp4_e_matrix(
    p: u64,
    a: i64,
    b: i64,
    x: i64,
    y: i64,
    z: i64,
    w: i64,
) -> Matrix<ExactScalar> {
    int_matrix(
        p,
        &[&[a, 0, 0, b], &[0, x, y, 0], &[0, z, w, 0], &[-b, 0, 0, a]],
    )
}

impl Scenario {
    pub fn info(name: &str) -> Result<&'static ScenarioInfo, GroupError> {
        CATALOG
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| GroupError::UnknownScenario(name.to_string()))
    }

    pub fn build(name: &str, p: Option<u64>, mu: Option<Vec<i64>>) -> Result<Self, GroupError> {
        let info = Self::info(name)?.clone();
        let p = p.unwrap_or(info.default_p);
        if p < 2 || !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
            return Err(GroupError::BadFormData(format!("{} is not a prime", p)));
        }
        let mu = mu.unwrap_or_else(|| info.default_mu.to_vec());
        let n = info.rank;
        let mut special = None;
        let mut gsp_basis = None;
        let one = ExactScalar::one(p);
        let (g, lie, span, ab, involution, use_gsp_chart) = match info.kind {
            ScenarioKind::Torus => {
                let g = Descriptor::gl(n, p);
                let e00 = Matrix::from_fn(n, n, |r, c| {
                    ExactScalar::from_int(p, (r == 0 && c == 0) as i64)
                });
                let mut span = vec![e00.clone()];
                if n > 1 {
                    span.push(Matrix::identity(n, &one).sub(&e00));
                }
                (
                    g,
                    vec![e00],
                    Some(span),
                    AbKind::BlockDet { offset: 0, size: 1 },
                    None,
                    false,
                )
            }
            ScenarioKind::Unitary | ScenarioKind::SplitUnitary => {
                if p == 2 {
                    return Err(GroupError::BadFormData(
                        "quadratic scenarios need odd p".into(),
                    ));
                }
                let u = if info.kind == ScenarioKind::Unitary {
                    inert_u(p)
                } else {
                    1
                };
                let sb = SpecialBasis::new(n, p, u)?;
                let g = sb.orthogonal_group();
                let lie = sb.unitary_lie_basis();
                let span = sb.unitary_linear_span();
                special = Some(sb);
                (g, lie, Some(span), AbKind::UnitaryDet, None, false)
            }
            ScenarioKind::Gsp4 => {
                if p == 2 {
                    return Err(GroupError::BadFormData(
                        "the similitude pair needs odd p".into(),
                    ));
                }
                let (j, pm) = gsp4_bases(p);
                let pinv = pm.inverse().unwrap();
                let jg = pm.transpose().mul(&j).mul(&pm);
                let g = Descriptor::with_form(Family::GSp, jg, p);
                let conj = |m: &Matrix<ExactScalar>| pinv.mul(m).mul(&pm);
                // Lie(H): 2 alpha = x + w.
                let lie_e = [
                    gsp4_e_matrix(p, 1, 0, 1, 0, 0, 1),
                    gsp4_e_matrix(p, 0, 1, 0, 0, 0, 0),
                    gsp4_e_matrix(p, 0, 0, 1, 0, 0, -1),
                    gsp4_e_matrix(p, 0, 0, 0, 1, 0, 0),
                    gsp4_e_matrix(p, 0, 0, 0, 0, 1, 0),
                ];
                let span_e = [
                    gsp4_e_matrix(p, 1, 0, 0, 0, 0, 0),
                    gsp4_e_matrix(p, 0, 1, 0, 0, 0, 0),
                    gsp4_e_matrix(p, 0, 0, 1, 0, 0, 0),
                    gsp4_e_matrix(p, 0, 0, 0, 1, 0, 0),
                    gsp4_e_matrix(p, 0, 0, 0, 0, 1, 0),
                    gsp4_e_matrix(p, 0, 0, 0, 0, 0, 1),
                ];
                let lie = saturate(&lie_e.iter().map(conj).collect::<Vec<_>>(), p);
                let span = saturate(&span_e.iter().map(conj).collect::<Vec<_>>(), p);
                gsp_basis = Some((pm, pinv));
                (g, lie, Some(span), AbKind::Gsp4, None, true)
            }
            ScenarioKind::Ggp => {
                let g = Descriptor::product(&[Descriptor::gl(n + 1, p), Descriptor::gl(n, p)]);
                let q = ggp_q(p);
                let qi = q.inverse().unwrap();
                let w0 = antidiag_w0(p, n);
                let embed = |x: &Matrix<ExactScalar>, t: i64| {
                    let big = Matrix::from_fn(n + 1, n + 1, |r, c| {
                        if r < n && c < n {
                            x.get(r, c).clone()
                        } else {
                            ExactScalar::from_int(p, if r == n && c == n { t } else { 0 })
                        }
                    });
                    block_diag(p, &qi.mul(&big).mul(&q), &w0.mul(x).mul(&w0))
                };
                let units: Vec<Matrix<ExactScalar>> = (0..n * n)
                    .map(|k| {
                        Matrix::from_fn(n, n, |r, c| {
                            ExactScalar::from_int(p, (r * n + c == k) as i64)
                        })
                    })
                    .collect();
                let lie: Vec<_> = units.iter().map(|x| embed(x, 0)).collect();
                let mut span = lie.clone();
                span.push(embed(&Matrix::zeros(n, n, &ExactScalar::zero(p)), 1));
                (
                    g,
                    saturate(&lie, p),
                    Some(saturate(&span, p)),
                    AbKind::BlockDet {
                        offset: n + 1,
                        size: n,
                    },
                    None,
                    false,
                )
            }
            ScenarioKind::DiagonalPair => {
                let g = Descriptor::product(&[Descriptor::gl(n, p), Descriptor::gl(n, p)]);
                let w0 = antidiag_w0(p, n);
                let lie: Vec<_> = (0..n * n)
                    .map(|k| {
                        let x = Matrix::from_fn(n, n, |r, c| {
                            ExactScalar::from_int(p, (r * n + c == k) as i64)
                        });
                        block_diag(p, &x, &w0.mul(&x).mul(&w0))
                    })
                    .collect();
                let inv = Involution::SwapConjugate { n };
                (
                    g,
                    lie.clone(),
                    Some(lie),
                    AbKind::BlockDet { offset: 0, size: n },
                    Some(inv),
                    false,
                )
            }
            ScenarioKind::OrthogonalSymmetric => {
                if p == 2 {
                    return Err(GroupError::BadFormData(
                        "the orthogonal pair needs odd p".into(),
                    ));
                }
                let g = Descriptor::gl(n, p);
                let mut lie = vec![];
                for i in 0..n {
                    for j in i + 1..n {
                        lie.push(Matrix::from_fn(n, n, |r, c| {
                            ExactScalar::from_int(
                                p,
                                (r == i && c == j) as i64 - (r == j && c == i) as i64,
                            )
                        }));
                    }
                }
                // SO(3) has trivial abelianization; the determinant of the
                // whole block is recorded for uniformity.
                (
                    g,
                    lie,
                    None,
                    AbKind::BlockDet { offset: 0, size: n },
                    Some(Involution::InverseTranspose),
                    false,
                )
            }
        };
        if !g.is_cocharacter(&mu) || !g.is_dominant(&mu) {
            return Err(GroupError::BadCocharacter(mu));
        }
        let tame_mu = info.tame_mu.map(|t| t.to_vec());
        let spherical_rank = spherical_rank(&g, &lie);
        let positive = g.positive.len();
        let chart = if spherical_rank == g.dim_group() {
            if use_gsp_chart {
                let (pm, pinv) = gsp_basis.clone().unwrap();
                Some(Chart::Gsp4 { p: pm, p_inv: pinv })
            } else {
                let basis = transverse_subset(&g, &lie);
                (basis.len() == positive).then_some(Chart::Cayley { basis })
            }
        } else {
            None
        };
        let h = SubgroupModel {
            dim: lie.len(),
            lie_basis: lie,
            chart,
            linear_span: span,
            ab,
            involution,
            spherical_rank,
        };
        Ok(Scenario {
            info,
            p,
            g,
            mu,
            tame_mu,
            h,
            special,
            gsp_basis,
        })
    }

    pub fn name(&self) -> &'static str {
        self.info.name
    }

    pub fn is_spherical(&self) -> bool {
        self.h.chart.is_some()
    }

    pub fn ring(&self) -> PRing {
        PRing::new(self.p)
    }

    /// Positions `(a, b)` of the positive roots, one coordinate each.
    pub fn root_positions(&self) -> Vec<(usize, usize)> {
        self.g.positive.iter().map(|r| (r.a, r.b)).collect()
    }

    pub fn reduced_chart(&self, ring: PRing) -> Option<ReducedChart> {
        let n = self.g.dim;
        let red = |m: &Matrix<ExactScalar>| -> Vec<u64> {
            m.entries()
                .iter()
                .map(|x| ring.reduce_rational(&x.to_rational()).expect("integral"))
                .collect()
        };
        match self.h.chart.as_ref()? {
            Chart::Cayley { basis } => Some(ReducedChart {
                n,
                dim: basis.len(),
                cayley: Some(basis.iter().map(red).collect()),
                gsp: None,
            }),
            Chart::Gsp4 { p, p_inv } => Some(ReducedChart {
                n,
                dim: 4,
                cayley: None,
                gsp: Some((red(p), red(p_inv))),
            }),
        }
    }

    /// Value of the abelianization character on an integral element of `H`
    /// given modulo `p^N`.
    pub fn ab_residue(&self, ring: PRing, h: &[u64]) -> QuadResidue {
        let m = ring.modulus;
        match &self.h.ab {
            AbKind::UnitaryDet => self.special.as_ref().unwrap().det_e(ring, h),
            AbKind::Gsp4 => {
                let (pm, pinv) = self.gsp_basis.as_ref().unwrap();
                let red = |x: &Matrix<ExactScalar>| -> Vec<u64> {
                    x.entries()
                        .iter()
                        .map(|v| ring.reduce_rational(&v.to_rational()).unwrap())
                        .collect()
                };
                let he = ring::mat_mul(&ring, 4, &ring::mat_mul(&ring, 4, &red(pm), h), &red(pinv));
                let u = ring.from_i64(-1);
                let z = QuadResidue::new(he[0], he[3], u, m);
                z.mul(&z.conj().inv().expect("unit similitude part"))
            }
            AbKind::BlockDet { offset, size } => {
                let n = self.g.dim;
                let sub: Vec<u64> = (0..size * size)
                    .map(|k| h[(offset + k / size) * n + offset + k % size])
                    .collect();
                QuadResidue::new(det_mod(ring, *size, &sub), 0, 1, m)
            }
        }
    }

    /// Exact membership in `H`.
    pub fn contains(&self, h: &Matrix<ExactScalar>) -> Result<bool, GroupError> {
        let p = self.p;
        if !self.g.is_member(h)? {
            return Ok(false);
        }
        let n = self.info.rank;
        Ok(match self.info.kind {
            ScenarioKind::Torus => (0..self.g.dim).all(|r| {
                (0..self.g.dim).all(|c| {
                    let x = h.get(r, c);
                    if r != c {
                        x.is_zero()
                    } else {
                        r == 0 || *x == ExactScalar::one(p)
                    }
                })
            }),
            ScenarioKind::Unitary | ScenarioKind::SplitUnitary => {
                let sb = self.special.as_ref().unwrap();
                let d = sb.dim();
                let vn = Matrix::from_fn(d, 1, |r, _| sb.s.get(r, d - 1).clone());
                h.mul(&sb.eta) == sb.eta.mul(h) && h.mul(&vn) == vn
            }
            ScenarioKind::Gsp4 => {
                let (pm, pinv) = self.gsp_basis.as_ref().unwrap();
                let he = pm.mul(h).mul(pinv);
                let z = |r: usize, c: usize| he.get(r, c).is_zero();
                let pattern = z(0, 1)
                    && z(0, 2)
                    && z(1, 0)
                    && z(1, 3)
                    && z(2, 0)
                    && z(2, 3)
                    && z(3, 1)
                    && z(3, 2);
                pattern && he.get(0, 0) == he.get(3, 3) && *he.get(0, 3) == he.get(3, 0).neg()
            }
            ScenarioKind::Ggp => {
                let a = Matrix::from_fn(n, n, |r, c| h.get(n + 1 + r, n + 1 + c).clone());
                let w0 = antidiag_w0(p, n);
                let x = w0.mul(&a).mul(&w0);
                let q = ggp_q(p);
                let big = q
                    .mul(&Matrix::from_fn(n + 1, n + 1, |r, c| h.get(r, c).clone()))
                    .mul(&q.inverse().unwrap());
                (0..=n).all(|r| {
                    (0..=n).all(|c| {
                        let want = if r < n && c < n {
                            x.get(r, c).clone()
                        } else {
                            ExactScalar::from_int(p, (r == n && c == n) as i64)
                        };
                        *big.get(r, c) == want
                    })
                })
            }
            ScenarioKind::DiagonalPair => {
                let w0 = antidiag_w0(p, n);
                let a = Matrix::from_fn(n, n, |r, c| h.get(r, c).clone());
                let b = Matrix::from_fn(n, n, |r, c| h.get(n + r, n + c).clone());
                b == w0.mul(&a).mul(&w0)
            }
            ScenarioKind::OrthogonalSymmetric => {
                h.transpose().mul(h) == Matrix::identity(n, &ExactScalar::one(p))
                    && h.det() == ExactScalar::one(p)
            }
        })
    }

    /// Residuals cutting `H` out of `G ∩ span`; for pairs without a linear
    /// span they cut `H` out of `G` itself.
    pub fn extra_residuals(&self, x: &Matrix<ExactScalar>) -> Vec<ExactScalar> {
        let p = self.p;
        let one = ExactScalar::one(p);
        let n = self.info.rank;
        match self.info.kind {
            ScenarioKind::Torus => (1..self.g.dim).map(|r| x.get(r, r).sub(&one)).collect(),
            ScenarioKind::Unitary | ScenarioKind::SplitUnitary => {
                let sb = self.special.as_ref().unwrap();
                let d = sb.dim();
                let vn = Matrix::from_fn(d, 1, |r, _| sb.s.get(r, d - 1).clone());
                x.mul(&vn).sub(&vn).entries().to_vec()
            }
            ScenarioKind::Ggp => {
                let q = ggp_q(p);
                let big = q
                    .mul(&Matrix::from_fn(n + 1, n + 1, |r, c| x.get(r, c).clone()))
                    .mul(&q.inverse().unwrap());
                vec![big.get(n, n).sub(&one)]
            }
            ScenarioKind::OrthogonalSymmetric => {
                let mut out = x
                    .transpose()
                    .mul(x)
                    .sub(&Matrix::identity(n, &one))
                    .entries()
                    .to_vec();
                out.push(x.det().sub(&one));
                out
            }
            ScenarioKind::Gsp4 | ScenarioKind::DiagonalPair => vec![],
        }
    }

    /// The element `x_(a,b)` of the similitude pair in the gamma basis.
    pub fn gsp4_witness(&self, a: &ExactScalar, b: &ExactScalar) -> Option<Matrix<ExactScalar>> {
        let (pm, pinv) = self.gsp_basis.as_ref()?;
        let zero = ExactScalar::zero(self.p);
        let nb = b.neg();
        let rows = [
            [a.clone(), zero.clone(), zero.clone(), b.clone()],
            [zero.clone(), a.clone(), nb.clone(), zero.clone()],
            [zero.clone(), b.clone(), a.clone(), zero.clone()],
            [nb, zero.clone(), zero, a.clone()],
        ];
        let he = Matrix::from_fn(4, 4, |r, c| rows[r][c].clone());
        Some(pinv.mul(&he).mul(pm))
    }

    /// Whether `H ∩ B-bar` is expected to be trivial (up to the centre for
    /// the similitude pair).
    pub fn trivial_intersection(&self) -> bool {
        matches!(
            self.info.kind,
            ScenarioKind::Unitary | ScenarioKind::Gsp4 | ScenarioKind::Ggp
        )
    }
}

fn det_mod(ring: PRing, n: usize, m: &[u64]) -> u64 {
    let mut a = m.to_vec();
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| ring.inv(a[i * n + k]).is_some()) else {
            // Non-unit determinant: fall back to cofactor expansion.
            return det_cofactor(ring, n, m);
        };
        if piv != k {
            for c in 0..n {
                a.swap(k * n + c, piv * n + c);
            }
            det = ring.neg(det);
        }
        let d = a[k * n + k];
        det = ring.mul(det, d);
        let di = ring.inv(d).unwrap();
        for i in k + 1..n {
            let f = ring.mul(a[i * n + k], di);
            for c in k..n {
                a[i * n + c] = ring.sub(a[i * n + c], ring.mul(f, a[k * n + c]));
            }
        }
    }
    det
}

fn det_cofactor(ring: PRing, n: usize, m: &[u64]) -> u64 {
    let mut acc = 0;
    for (perm, sign) in super::special::permutations(n) {
        let mut t = 1;
        for (i, &j) in perm.iter().enumerate() {
            t = ring.mul(t, m[i * n + j]);
        }
        acc = if sign > 0 {
            ring.add(acc, t)
        } else {
            ring.sub(acc, t)
        };
    }
    acc
}

/// Lie algebra of the opposite Borel: torus plus negative root templates.
fn opposite_borel_lie(g: &Descriptor) -> Vec<Matrix<ExactScalar>> {
    let p = g.p;
    let mut out: Vec<Matrix<ExactScalar>> = g
        .torus_basis
        .iter()
        .map(|t| {
            Matrix::diagonal(
                &t.iter()
                    .map(|&x| ExactScalar::from_int(p, x))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    for r in &g.negative {
        let mut m = Matrix::zeros(g.dim, g.dim, &ExactScalar::zero(p));
        for (i, j, c) in &r.x {
            m.set(*i, *j, ExactScalar::from_rational(p, c.clone()));
        }
        out.push(m);
    }
    out
}

/// `rank_(F_q)(Lie H + Lie B-bar)`.
pub fn spherical_rank(g: &Descriptor, lie_h: &[Matrix<ExactScalar>]) -> usize {
    let p = g.p;
    let rows: Vec<Vec<u64>> = lie_h
        .iter()
        .chain(opposite_borel_lie(g).iter())
        .map(|m| flatten_mod_p(m, p))
        .collect();
    rank_mod_p(&rows, p)
}

/// A subset of the Lie basis whose projection onto the positive root
/// coordinates is invertible modulo `p`.
fn transverse_subset(g: &Descriptor, lie: &[Matrix<ExactScalar>]) -> Vec<Matrix<ExactScalar>> {
    let p = g.p;
    let pos: Vec<(usize, usize)> = g.positive.iter().map(|r| (r.a, r.b)).collect();
    let proj = |m: &Matrix<ExactScalar>| -> Vec<u64> {
        pos.iter()
            .map(|&(a, b)| super::lattice::reduce_mod_p(m.get(a, b), p))
            .collect()
    };
    let mut chosen: Vec<Matrix<ExactScalar>> = vec![];
    let mut rows: Vec<Vec<u64>> = vec![];
    for m in lie {
        let mut trial = rows.clone();
        trial.push(proj(m));
        if rank_mod_p(&trial, p) > rows.len() {
            rows = trial;
            chosen.push(m.clone());
        }
    }
    chosen
}

/// A basis of `{X : eqs(X) = 0}`, exposed for tests and custom scenarios.
pub fn linear_family(
    d: usize,
    p: u64,
    eqs: impl Fn(&Matrix<ExactScalar>) -> Vec<ExactScalar>,
) -> Vec<Matrix<ExactScalar>> {
    solve_linear_family(d, p, eqs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_catalog_entry_builds() {
        for info in catalog() {
            let s = Scenario::build(info.name, None, None).unwrap();
            assert!(s.g.is_cocharacter(&s.mu), "{}", info.name);
            for b in &s.h.lie_basis {
                assert_eq!(b.rows(), s.g.dim);
            }
        }
    }

    #[test]
    fn spherical_pairs() {
        for name in [
            "so3-u1",
            "so5-u2",
            "gsp4",
            "ggp-gl-n2",
            "diag-gl2",
            "gl3-so3-theta",
        ] {
            let s = Scenario::build(name, None, None).unwrap();
            assert!(
                s.is_spherical(),
                "{} rank {} of {}",
                name,
                s.h.spherical_rank,
                s.g.dim_group()
            );
        }
        assert!(!Scenario::build("gl2", None, None).unwrap().is_spherical());
    }

    #[test]
    fn gsp4_embedding_matches_displayed_matrix() {
        let p = 3;
        let (j, pm) = gsp4_bases(p);
        let pinv = pm.inverse().unwrap();
        let (a, b, x, y, z, w) = (2, 1, 3, 1, 2, 1);
        let hg = pinv.mul(&gsp4_e_matrix(p, a, b, x, y, z, w)).mul(&pm);
        let shown = [
            [w + a, -b - z, w - a, z - b],
            [b - y, a + x, -y - b, a - x],
            [w - a, b - z, w + a, b + z],
            [b + y, a - x, y - b, a + x],
        ];
        let half = ExactScalar::from_frac(p, 1, 2);
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(
                    hg.get(r, c),
                    &ExactScalar::from_int(p, shown[r][c]).mul(&half)
                );
            }
        }
        // Similitude a^2 + b^2 = xw - yz.
        let s = Scenario::build("gsp4", None, None).unwrap();
        let h = pinv.mul(&gsp4_e_matrix(p, 1, 1, 1, 1, -2, 0)).mul(&pm);
        assert!(s.contains(&h).unwrap());
        let _ = j;
        let wit = s
            .gsp4_witness(&ExactScalar::from_int(p, 2), &ExactScalar::from_int(p, 3))
            .unwrap();
        assert!(s.contains(&wit).unwrap());
    }

    #[test]
    fn involutions_reverse_the_borel() {
        let s = Scenario::build("diag-gl2", None, None).unwrap();
        let th = s.h.involution.clone().unwrap();
        assert_eq!(th.on_cocharacter(&[1, 0, 1, 0]), vec![0, 1, 0, 1]);
        let t = Scenario::build("gl3-so3-theta", None, None).unwrap();
        assert_eq!(
            t.h.involution.unwrap().on_cocharacter(&[1, 0, -1]),
            vec![-1, 0, 1]
        );
    }

    #[test]
    fn unknown_scenario_is_an_error() {
        assert!(matches!(
            Scenario::build("nope", None, None),
            Err(GroupError::UnknownScenario(_))
        ));
    }
}
