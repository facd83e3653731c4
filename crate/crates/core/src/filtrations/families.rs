//! Spherical pairs `H ⊂ G` over `F_p` where the sweep runs over
//! `h Fil(lambda)` for `h ∈ H(k)` and cocharacters `lambda` of a split
//! maximal torus of `H`.

use std::collections::{HashSet, VecDeque};

use num_rational::Rational64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::field::Fp;
use super::filtration::{scalar_product, scalar_product_graded, Filtration};
use super::FiltrationError;

type Mat = Vec<Vec<u64>>;

/// Basis of `{X : eqs(X) = 0}` for linear `eqs`.
pub fn lie_algebra(k: &Fp, d: usize, eqs: &dyn Fn(&Mat) -> Vec<u64>) -> Vec<Mat> {
    let cols: Vec<Vec<u64>> = (0..d * d)
        .map(|idx| {
            let mut e = vec![vec![0; d]; d];
            e[idx / d][idx % d] = 1;
            eqs(&e)
        })
        .collect();
    let rows: Vec<Vec<u64>> = (0..cols.first().map_or(0, |c| c.len()))
        .map(|r| cols.iter().map(|c| c[r]).collect())
        .collect();
    k.nullspace(&rows, d * d)
        .into_iter()
        .map(|v| v.chunks(d).map(|c| c.to_vec()).collect())
        .collect()
}

fn flatten(m: &Mat) -> Vec<u64> {
    m.iter().flatten().copied().collect()
}

fn skew_eqs(k: &Fp, form: &Mat, x: &Mat) -> Vec<u64> {
    let a = k.mat_mul(&k.transpose(x), form);
    let b = k.mat_mul(form, x);
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(u, v)| k.add(*u, *v))
        .collect()
}

fn antidiagonal(d: usize, sign_split: bool, k: &Fp) -> Mat {
    (0..d)
        .map(|r| {
            (0..d)
                .map(|c| {
                    if r + c + 1 != d {
                        0
                    } else if sign_split && r >= d / 2 {
                        k.neg(1)
                    } else {
                        1
                    }
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct PairModel {
    pub name: &'static str,
    pub k: Fp,
    pub dim: usize,
    pub form: Option<Mat>,
    pub g_lie: Vec<Mat>,
    pub h_lie: Vec<Mat>,
    /// Cocharacter basis of a split maximal torus of `H`, diagonal here.
    pub h_torus: Vec<Vec<i64>>,
    /// Strictly dominant for the upper triangular Borel of `G`.
    pub mu: Vec<i64>,
    pub expected_order: usize,
}

impl PairModel {
    fn with_form(
        name: &'static str,
        k: Fp,
        form: Mat,
        block: Option<(Vec<usize>, Mat)>,
        h_torus: Vec<Vec<i64>>,
        mu: Vec<i64>,
        order: usize,
    ) -> Self {
        let d = form.len();
        let g_lie = lie_algebra(&k, d, &|x| skew_eqs(&k, &form, x));
        let h_lie = match &block {
            None => g_lie.clone(),
            Some((first, change)) => {
                // Preserve span(columns `first` of `change`) and its complement.
                let inv = k.inverse(change).expect("invertible change of basis");
                lie_algebra(&k, d, &|x| {
                    let mut eq = skew_eqs(&k, &form, x);
                    let y = k.mat_mul(&inv, &k.mat_mul(x, change));
                    for r in 0..d {
                        for c in 0..d {
                            if first.contains(&r) != first.contains(&c) {
                                eq.push(y[r][c]);
                            }
                        }
                    }
                    eq
                })
            }
        };
        PairModel {
            name,
            k,
            dim: d,
            form: Some(form),
            g_lie,
            h_lie,
            h_torus,
            mu,
            expected_order: order,
        }
    }

    /// `GL(2)` as the Levi of the Siegel parabolic of `Sp(4)`.
    pub fn gl2_in_sp4(p: u64) -> Self {
        let k = Fp::new(p);
        let form = antidiagonal(4, true, &k);
        let id = k.identity(4);
        let order = gl_order(2, p);
        Self::with_form(
            "GL(2) in Sp(4)",
            k,
            form,
            Some((vec![0, 1], id)),
            vec![vec![1, 0, 0, -1], vec![0, 1, -1, 0]],
            vec![2, 1, -1, -2],
            order,
        )
    }

    /// `SO(3)` of the antidiagonal form inside `GL(3)`.
    pub fn so3_in_gl3(p: u64) -> Self {
        let k = Fp::new(p);
        let form = antidiagonal(3, false, &k);
        let g_lie = lie_algebra(&k, 3, &|_| vec![]);
        let h_lie = lie_algebra(&k, 3, &|x| skew_eqs(&k, &form, x));
        PairModel {
            name: "SO(3) in GL(3)",
            k,
            dim: 3,
            form: None,
            g_lie,
            h_lie,
            h_torus: vec![vec![1, 0, -1]],
            mu: vec![1, 0, -1],
            expected_order: so_odd_order(1, p),
        }
    }

    /// `SO(2) x SO(3)` on `<e_1, e_-1> ⊥ <e_2, e_0, e_-2>` inside `SO(5)`.
    pub fn so2_so3_in_so5(p: u64) -> Self {
        let k = Fp::new(p);
        let form = antidiagonal(5, false, &k);
        let order = (p as usize - 1) * so_odd_order(1, p);
        Self::with_form(
            "SO(2)xSO(3) in SO(5)",
            k,
            form,
            Some((vec![1, 3], k.identity(5))),
            vec![vec![0, 1, 0, -1, 0], vec![1, 0, 0, 0, -1]],
            vec![2, 1, 0, -1, -2],
            order,
        )
    }

    /// `SO(3) x SO(3)` on `<e_3, e_1 + e_-1, e_-3> ⊥ <e_2, e_1 - e_-1, e_-2>`
    /// inside `SO(6)`.
    pub fn so3_so3_in_so6(p: u64) -> Self {
        let k = Fp::new(p);
        let form = antidiagonal(6, false, &k);
        // Columns: e_3, e_1 + e_-1, e_-3, e_2, e_1 - e_-1, e_-2.
        let cols: [[i64; 6]; 6] = [
            [1, 0, 0, 0, 0, 0],
            [0, 0, 1, 1, 0, 0],
            [0, 0, 0, 0, 0, 1],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 1, -1, 0, 0],
            [0, 0, 0, 0, 1, 0],
        ];
        let change: Mat = (0..6)
            .map(|r| (0..6).map(|c| k.from_i64(cols[c][r])).collect())
            .collect();
        let order = so_odd_order(1, p).pow(2);
        Self::with_form(
            "SO(3)xSO(3) in SO(6)",
            k,
            form,
            Some((vec![0, 1, 2], change)),
            vec![vec![1, 0, 0, 0, 0, -1], vec![0, 1, 0, 0, -1, 0]],
            vec![2, 1, 0, 0, -1, -2],
            order,
        )
    }

    pub fn positive_families(p: u64) -> Vec<PairModel> {
        vec![
            Self::gl2_in_sp4(p),
            Self::so3_in_gl3(p),
            Self::so2_so3_in_so5(p),
            Self::so3_so3_in_so6(p),
        ]
    }

    fn lower_borel(&self) -> Vec<Mat> {
        let d = self.dim;
        let k = self.k;
        let g_rows: Vec<Vec<u64>> = self.g_lie.iter().map(flatten).collect();
        // Lie G ∩ lower triangular: solve in the coordinates of the basis.
        let eqs: Vec<Vec<u64>> = (0..d)
            .flat_map(|r| (r + 1..d).map(move |c| r * d + c))
            .map(|idx| g_rows.iter().map(|g| g[idx]).collect())
            .collect();
        k.nullspace(&eqs, self.g_lie.len())
            .into_iter()
            .map(|c| {
                let v: Vec<u64> = (0..d * d)
                    .map(|i| {
                        g_rows
                            .iter()
                            .zip(&c)
                            .fold(0, |acc, (g, x)| k.add(acc, k.mul(g[i], *x)))
                    })
                    .collect();
                v.chunks(d).map(|r| r.to_vec()).collect()
            })
            .collect()
    }

    /// `Lie H + Ad(g) Lie B-bar = Lie G`.
    pub fn is_open_orbit(&self, g: &Mat) -> bool {
        let k = &self.k;
        let g_inv = k.inverse(g).expect("invertible");
        let mut rows: Vec<Vec<u64>> = self.h_lie.iter().map(flatten).collect();
        rows.extend(
            self.lower_borel()
                .iter()
                .map(|x| flatten(&k.mat_mul(g, &k.mat_mul(x, &g_inv)))),
        );
        k.rank(&rows) == self.g_lie.len()
    }

    fn random_lie(&self, lie: &[Mat], rng: &mut ChaCha8Rng) -> Mat {
        let k = &self.k;
        let mut x = vec![vec![0; self.dim]; self.dim];
        for b in lie {
            let c = rng.gen_range(0..k.p);
            for r in 0..self.dim {
                for s in 0..self.dim {
                    x[r][s] = k.add(x[r][s], k.mul(c, b[r][s]));
                }
            }
        }
        x
    }

    /// A seeded element `g ∈ G(k)` with `g B-bar g^-1` in the open
    /// `H`-orbit, as a product of Cayley transforms.
    pub fn generic_element(&self, seed: u64) -> Result<Mat, FiltrationError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..500 {
            let mut g = self.k.identity(self.dim);
            for _ in 0..3 {
                if let Some(c) = self.k.cayley(&self.random_lie(&self.g_lie, &mut rng)) {
                    g = self.k.mat_mul(&g, &c);
                }
            }
            if self.is_open_orbit(&g) {
                return Ok(g);
            }
        }
        Err(FiltrationError::NotFound(format!(
            "no open-orbit Borel found for {}",
            self.name
        )))
    }

    /// `H(k)` as the closure of Cayley transforms of `Lie H` and torus
    /// elements at a generator of `k^*`.
    pub fn h_elements(&self, limit: usize) -> Result<Vec<Mat>, FiltrationError> {
        let k = &self.k;
        let mut gens = vec![];
        for x in &self.h_lie {
            for c in 1..k.p {
                let cx: Mat = x
                    .iter()
                    .map(|r| r.iter().map(|v| k.mul(c, *v)).collect())
                    .collect();
                gens.extend(k.cayley(&cx));
            }
        }
        let z = k.generator();
        for t in &self.h_torus {
            gens.push(
                (0..self.dim)
                    .map(|r| {
                        (0..self.dim)
                            .map(|c| {
                                if r == c {
                                    k.pow(z, t[r].rem_euclid(k.p as i64 - 1) as u64)
                                } else {
                                    0
                                }
                            })
                            .collect()
                    })
                    .collect(),
            );
        }
        let id = k.identity(self.dim);
        let mut seen: HashSet<Mat> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(a) = queue.pop_front() {
            for g in &gens {
                let b = k.mat_mul(&a, g);
                if seen.insert(b.clone()) {
                    if seen.len() > limit {
                        return Err(FiltrationError::Budget(format!("|H(k)| exceeds {}", limit)));
                    }
                    queue.push_back(b);
                }
            }
        }
        let mut out: Vec<Mat> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }
}

fn gl_order(n: u32, p: u64) -> usize {
    (0..n).map(|i| (p.pow(n) - p.pow(i)) as usize).product()
}

/// `|SO(2n+1)(F_p)| = p^(n^2) prod (p^(2i) - 1)`.
fn so_odd_order(n: u32, p: u64) -> usize {
    (p.pow(n * n) as usize)
        * (1..=n)
            .map(|i| (p.pow(2 * i) - 1) as usize)
            .product::<usize>()
}

fn lattice_points(rank: usize, bound: i64) -> Vec<Vec<i64>> {
    (0..rank).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|v| {
                (-bound..=bound).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect()
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub name: String,
    pub p: u64,
    pub break_bound: i64,
    pub h_order: usize,
    pub expected_order: usize,
    pub filtrations: usize,
    pub max_value: String,
    pub argmax: Option<String>,
    pub positive: usize,
    pub formulas_agree: bool,
    /// Every swept filtration is self-dual for the form of `G`.
    pub self_dual: bool,
}

impl FamilyReport {
    pub fn holds(&self) -> bool {
        self.positive == 0
            && self.formulas_agree
            && self.self_dual
            && self.h_order == self.expected_order
    }
}

/// Sweeps `h Fil(lambda)` against `F_zeta = g Fil(-mu)` for a seeded `g`
/// in the open orbit.
pub fn family_check(
    model: &PairModel,
    bound: i64,
    seed: u64,
) -> Result<FamilyReport, FiltrationError> {
    family_check_at(model, &model.generic_element(seed)?, bound)
}

/// The sweep for an explicit `g`, open orbit or not.
pub fn family_check_at(
    model: &PairModel,
    g: &Mat,
    bound: i64,
) -> Result<FamilyReport, FiltrationError> {
    let k = model.k;
    let neg: Vec<i64> = model.mu.iter().map(|x| -x).collect();
    let f_zeta = Filtration::from_cocharacter(k, &neg).act(g);
    let hs = model.h_elements(1_000_000)?;
    let mut sweep: HashSet<Filtration> = HashSet::new();
    for c in lattice_points(model.h_torus.len(), bound) {
        let lambda: Vec<i64> = (0..model.dim)
            .map(|i| model.h_torus.iter().zip(&c).map(|(t, x)| t[i] * x).sum())
            .collect();
        let base = Filtration::from_cocharacter(k, &lambda);
        for h in &hs {
            sweep.insert(base.act(h));
        }
    }
    let mut sweep: Vec<Filtration> = sweep.into_iter().collect();
    sweep.sort_by_key(|f| f.to_string());
    let (mut max_value, mut argmax, mut positive, mut formulas_agree, mut self_dual) =
        (None::<Rational64>, None, 0, true, true);
    for f in &sweep {
        let v = scalar_product(f, &f_zeta)?;
        formulas_agree &= scalar_product_graded(f, &f_zeta)? == v;
        if let Some(form) = &model.form {
            self_dual &= f.is_self_dual(form);
        }
        if v > Rational64::zero() {
            positive += 1;
        }
        if max_value.map_or(true, |m| v > m) {
            max_value = Some(v);
            argmax = Some(f.to_string());
        }
    }
    Ok(FamilyReport {
        name: model.name.to_string(),
        p: k.p,
        break_bound: bound,
        h_order: hs.len(),
        expected_order: model.expected_order,
        filtrations: sweep.len(),
        max_value: max_value.unwrap_or_default().to_string(),
        argmax,
        positive,
        formulas_agree,
        self_dual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lie_dimensions() {
        let dims: Vec<(usize, usize)> = PairModel::positive_families(3)
            .iter()
            .map(|m| (m.g_lie.len(), m.h_lie.len()))
            .collect();
        assert_eq!(dims, vec![(10, 4), (9, 3), (10, 4), (15, 6)]);
    }

    #[test]
    fn finite_group_orders() {
        for m in PairModel::positive_families(3) {
            assert_eq!(
                m.h_elements(100_000).unwrap().len(),
                m.expected_order,
                "{}",
                m.name
            );
        }
    }

    #[test]
    fn identity_is_not_generic_for_the_levi() {
        // B-bar meets the Levi in its own Borel, so the orbit is not open.
        let m = PairModel::gl2_in_sp4(3);
        assert!(!m.is_open_orbit(&m.k.identity(4)));
        assert!(m.is_open_orbit(&m.generic_element(1).unwrap()));
    }

    #[test]
    fn positive_families_hold() {
        for m in PairModel::positive_families(3) {
            let r = family_check(&m, 2, 1).unwrap();
            assert!(r.holds(), "{:?}", r);
            assert!(r.filtrations > 1);
        }
    }

    #[test]
    fn closed_orbit_borel_is_detected() {
        let m = PairModel::gl2_in_sp4(3);
        let r = family_check_at(&m, &m.k.identity(4), 2).unwrap();
        assert!(r.positive > 0);
    }
}
