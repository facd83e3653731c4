use std::collections::{BTreeSet, VecDeque};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::GroupError;
use crate::arith::{ExactScalar, Matrix, PMat, PRing, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    GL,
    SL,
    Sp,
    GSp,
    SOOdd,
    SOEven,
}

/// One simple factor, acting on the coordinates `offset..offset + size`.
#[derive(Clone, Debug)]
pub struct Block {
    pub family: Family,
    pub offset: usize,
    pub size: usize,
    /// Antidiagonal Gram or symplectic matrix in the block's ordered basis.
    pub form: Option<Matrix<ExactScalar>>,
}

/// A root with its nilpotent template: `R(u) = 1 + u X + u^2 X^2 / 2`.
/// The character is `mu_a - mu_b` on diagonal cocharacters.
#[derive(Clone, Debug)]
pub struct Root {
    pub a: usize,
    pub b: usize,
    pub x: Vec<(usize, usize, BigRational)>,
    pub x2_half: Vec<(usize, usize, BigRational)>,
}

impl Root {
    pub fn pairing(&self, mu: &[i64]) -> i64 {
        mu[self.a] - mu[self.b]
    }
}

/// A split matrix group with root data relative to the diagonal torus and
/// the upper triangular Borel of its ordered basis.
#[derive(Clone, Debug)]
pub struct Descriptor {
    pub name: String,
    pub p: u64,
    pub dim: usize,
    pub blocks: Vec<Block>,
    pub positive: Vec<Root>,
    pub negative: Vec<Root>,
    /// Z-basis of the cocharacter lattice of the diagonal torus.
    pub torus_basis: Vec<Vec<i64>>,
    pub labels: Vec<String>,
}

fn sparse_square(x: &[(usize, usize, BigRational)]) -> Vec<(usize, usize, BigRational)> {
    let mut out: Vec<(usize, usize, BigRational)> = vec![];
    for (i, k, a) in x {
        for (k2, j, b) in x {
            if k == k2 {
                let v = a * b / BigRational::from_integer(2.into());
                if let Some(e) = out.iter_mut().find(|e| e.0 == *i && e.1 == *j) {
                    e.2 += v;
                } else {
                    out.push((*i, *j, v));
                }
            }
        }
    }
    out.retain(|e| !e.2.is_zero());
    out
}

fn make_root(a: usize, b: usize, x: Vec<(usize, usize, BigRational)>) -> Root {
    let x2_half = sparse_square(&x);
    Root { a, b, x, x2_half }
}

fn q_at(form: &Matrix<ExactScalar>, i: usize, j: usize) -> BigRational {
    form.get(i, j).to_rational()
}

impl Descriptor {
    fn single(name: &str, p: u64, block: Block) -> Self {
        let n = block.size;
        let mut d = Descriptor {
            name: name.to_string(),
            p,
            dim: n,
            blocks: vec![],
            positive: vec![],
            negative: vec![],
            torus_basis: vec![],
            labels: (1..=n).map(|i| format!("e{}", i)).collect(),
        };
        d.push_block(block);
        d
    }

    fn push_block(&mut self, block: Block) {
        let (pos, neg) = block_roots(&block);
        self.positive.extend(pos);
        self.negative.extend(neg);
        self.torus_basis.extend(block_torus(&block, self.dim));
        self.blocks.push(block);
    }

    pub fn gl(n: usize, p: u64) -> Self {
        Self::single(
            &format!("GL({})", n),
            p,
            Block {
                family: Family::GL,
                offset: 0,
                size: n,
                form: None,
            },
        )
    }

    pub fn sl(n: usize, p: u64) -> Self {
        Self::single(
            &format!("SL({})", n),
            p,
            Block {
                family: Family::SL,
                offset: 0,
                size: n,
                form: None,
            },
        )
    }

    /// Group preserving an antidiagonal form in the given ordered basis.
    pub fn with_form(family: Family, form: Matrix<ExactScalar>, p: u64) -> Self {
        let n = form.rows();
        let name = match family {
            Family::SOOdd | Family::SOEven => format!("SO({})", n),
            Family::Sp => format!("Sp({})", n),
            Family::GSp => format!("GSp({})", n),
            _ => panic!("form groups are orthogonal or symplectic"),
        };
        Self::single(
            &name,
            p,
            Block {
                family,
                offset: 0,
                size: n,
                form: Some(form),
            },
        )
    }

    /// Split odd orthogonal group of the standard antidiagonal unit form.
    pub fn so_odd_standard(n: usize, p: u64) -> Self {
        let form = Matrix::from_fn(n, n, |r, c| {
            ExactScalar::from_int(p, (r + c + 1 == n) as i64)
        });
        Self::with_form(Family::SOOdd, form, p)
    }

    /// Symplectic group of `J = antidiag(1, .., 1, -1, .., -1)`.
    pub fn sp_standard(n: usize, p: u64) -> Self {
        let form = Matrix::from_fn(n, n, |r, c| {
            let v = if r + c + 1 != n {
                0
            } else if r < n / 2 {
                1
            } else {
                -1
            };
            ExactScalar::from_int(p, v)
        });
        Self::with_form(Family::Sp, form, p)
    }

    /// Block-diagonal product.
    pub fn product(parts: &[Descriptor]) -> Self {
        let p = parts[0].p;
        let mut d = Descriptor {
            name: parts
                .iter()
                .map(|x| x.name.clone())
                .collect::<Vec<_>>()
                .join("×"),
            p,
            dim: 0,
            blocks: vec![],
            positive: vec![],
            negative: vec![],
            torus_basis: vec![],
            labels: vec![],
        };
        let total: usize = parts.iter().map(|x| x.dim).sum();
        for part in parts {
            for b in &part.blocks {
                let mut nb = b.clone();
                nb.offset += d.dim;
                let (pos, neg) = block_roots(&nb);
                d.positive.extend(pos);
                d.negative.extend(neg);
                d.torus_basis.extend(block_torus(&nb, total));
                d.blocks.push(nb);
            }
            d.labels
                .extend(part.labels.iter().map(|l| format!("{}.{}", part.name, l)));
            d.dim += part.dim;
        }
        d
    }

    pub fn ring(&self) -> PRing {
        PRing::new(self.p)
    }

    pub fn all_roots(&self) -> impl Iterator<Item = &Root> {
        self.positive.iter().chain(self.negative.iter())
    }

    pub fn find_root(&self, a: usize, b: usize) -> Result<&Root, GroupError> {
        self.all_roots()
            .find(|r| r.a == a && r.b == b)
            .ok_or(GroupError::UnknownRoot(a, b))
    }

    /// Exact root group element `R_alpha(u)`.
    pub fn root_group_exact(&self, root: &Root, u: &ExactScalar) -> Matrix<ExactScalar> {
        let p = self.p;
        let mut g = Matrix::identity(self.dim, &ExactScalar::one(p));
        let u2 = u.mul(u);
        for (i, j, c) in &root.x {
            let v = g
                .get(*i, *j)
                .add(&u.mul(&ExactScalar::from_rational(p, c.clone())));
            g.set(*i, *j, v);
        }
        for (i, j, c) in &root.x2_half {
            let v = g
                .get(*i, *j)
                .add(&u2.mul(&ExactScalar::from_rational(p, c.clone())));
            g.set(*i, *j, v);
        }
        g
    }

    /// `R_alpha(u)` for an integral residue `u`.
    pub fn root_group_element(&self, ring: PRing, root: &Root, u: u64) -> PMat {
        let n = self.dim;
        let mut g = PMat::identity(ring, n);
        let u2 = ring.mul(u, u);
        for (i, j, c) in &root.x {
            let cv = ring.reduce_rational(c).expect("unit template");
            g.m[i * n + j] = ring.add(g.m[i * n + j], ring.mul(u, cv));
        }
        for (i, j, c) in &root.x2_half {
            let cv = ring.reduce_rational(c).expect("unit template");
            g.m[i * n + j] = ring.add(g.m[i * n + j], ring.mul(u2, cv));
        }
        g
    }

    pub fn cocharacter_exact(&self, mu: &[i64], s: &ExactScalar) -> Matrix<ExactScalar> {
        let entries: Vec<ExactScalar> = mu.iter().map(|&k| pow_exact(s, k)).collect();
        Matrix::diagonal(&entries)
    }

    /// `mu(p)`.
    pub fn cocharacter_element(&self, ring: PRing, mu: &[i64]) -> PMat {
        PMat::diag_p_powers(ring, mu)
    }

    /// `mu(t)` for a residue unit `t`.
    pub fn cocharacter_unit(&self, ring: PRing, mu: &[i64], t: u64) -> PMat {
        let ti = ring.inv(t).expect("unit");
        let d: Vec<u64> = mu
            .iter()
            .map(|&k| {
                if k >= 0 {
                    ring.pow(t, k as u64)
                } else {
                    ring.pow(ti, (-k) as u64)
                }
            })
            .collect();
        PMat::diag_units(ring, &d)
    }

    pub fn pairing_2rho(&self, mu: &[i64]) -> i64 {
        self.positive.iter().map(|r| r.pairing(mu)).sum()
    }

    pub fn is_cocharacter(&self, mu: &[i64]) -> bool {
        if mu.len() != self.dim {
            return false;
        }
        self.blocks.iter().all(|b| {
            let m = &mu[b.offset..b.offset + b.size];
            let n = b.size;
            match b.family {
                Family::GL => true,
                Family::SL => m.iter().sum::<i64>() == 0,
                Family::Sp | Family::SOEven => (0..n).all(|i| m[i] + m[n - 1 - i] == 0),
                Family::SOOdd => (0..n).all(|i| m[i] + m[n - 1 - i] == 0),
                Family::GSp => (0..n).all(|i| m[i] + m[n - 1 - i] == m[0] + m[n - 1]),
            }
        })
    }

    pub fn is_dominant(&self, mu: &[i64]) -> bool {
        self.positive.iter().all(|r| r.pairing(mu) >= 0)
    }

    pub fn is_strictly_dominant(&self, mu: &[i64]) -> bool {
        self.positive.iter().all(|r| r.pairing(mu) > 0)
    }

    pub fn is_minuscule(&self, mu: &[i64]) -> bool {
        self.positive.iter().all(|r| r.pairing(mu).abs() <= 1)
    }

    /// The coroot of a positive root, as an integer cocharacter.
    pub fn coroot(&self, root: &Root) -> Vec<i64> {
        let p = self.p;
        let k = self.torus_basis.len();
        let b = Matrix::from_fn(self.dim, k, |r, c| {
            ExactScalar::from_int(p, self.torus_basis[c][r])
        });
        let mut v = vec![ExactScalar::zero(p); self.dim];
        v[root.a] = ExactScalar::one(p);
        v[root.b] = ExactScalar::from_int(p, -1);
        let vcol = Matrix::from_vec(self.dim, 1, v);
        let bt = b.transpose();
        let coeffs = bt.mul(&b).inverse().expect("basis").mul(&bt.mul(&vcol));
        let proj = b.mul(&coeffs);
        let norm2 = proj.transpose().mul(&proj).get(0, 0).clone();
        let scale = ExactScalar::from_int(p, 2).mul(&norm2.inv().expect("nonzero root"));
        (0..self.dim)
            .map(|i| {
                let x = proj.get(i, 0).mul(&scale).to_rational();
                assert!(x.is_integer(), "coroot must be integral");
                num_traits::ToPrimitive::to_i64(&x.to_integer()).unwrap()
            })
            .collect()
    }

    pub fn positive_coroots(&self) -> Vec<Vec<i64>> {
        self.positive.iter().map(|r| self.coroot(r)).collect()
    }

    fn reflect(&self, root: &Root, coroot: &[i64], mu: &[i64]) -> Vec<i64> {
        let k = root.pairing(mu);
        mu.iter().zip(coroot).map(|(m, c)| m - k * c).collect()
    }

    /// The dominant element of the Weyl orbit of `mu`.
    pub fn dominant_rep(&self, mu: &[i64]) -> Vec<i64> {
        let coroots = self.positive_coroots();
        let mut cur = mu.to_vec();
        'outer: loop {
            for (r, c) in self.positive.iter().zip(&coroots) {
                if r.pairing(&cur) < 0 {
                    cur = self.reflect(r, c, &cur);
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    pub fn weyl_orbit(&self, mu: &[i64]) -> Vec<Vec<i64>> {
        let coroots = self.positive_coroots();
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue = VecDeque::from([mu.to_vec()]);
        seen.insert(mu.to_vec());
        while let Some(x) = queue.pop_front() {
            for (r, c) in self.positive.iter().zip(&coroots) {
                let y = self.reflect(r, c, &x);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// All weights of the saturated set generated by a dominant `lambda`
    /// (closure under root strings), i.e. the support of the Satake
    /// transform of the double coset of `lambda`.
    pub fn saturated_set(&self, lambda: &[i64]) -> Vec<Vec<i64>> {
        let coroots = self.positive_coroots();
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut queue = VecDeque::from([lambda.to_vec()]);
        seen.insert(lambda.to_vec());
        while let Some(x) = queue.pop_front() {
            for (r, c) in self.positive.iter().zip(&coroots) {
                let k = r.pairing(&x);
                let (sign, steps) = if k >= 0 { (1, k) } else { (-1, -k) };
                for j in 1..=steps {
                    let y: Vec<i64> = x.iter().zip(c).map(|(m, cc)| m - sign * j * cc).collect();
                    if seen.insert(y.clone()) {
                        queue.push_back(y);
                    }
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Dominant weights `nu <= lambda`, sorted so that larger weights come first.
    pub fn dominant_below(&self, lambda: &[i64]) -> Vec<Vec<i64>> {
        let mut v: Vec<Vec<i64>> = self
            .saturated_set(lambda)
            .into_iter()
            .filter(|x| self.is_dominant(x))
            .collect();
        let rho2 = |x: &Vec<i64>| self.pairing_2rho(x);
        v.sort_by(|a, b| rho2(b).cmp(&rho2(a)).then(b.cmp(a)));
        v
    }

    /// Exact membership in the group.
    pub fn is_member(&self, g: &Matrix<ExactScalar>) -> Result<bool, GroupError> {
        if g.rows() != self.dim || g.cols() != self.dim {
            return Err(GroupError::SizeMismatch);
        }
        let block_of = |i: usize| {
            self.blocks
                .iter()
                .position(|b| i >= b.offset && i < b.offset + b.size)
        };
        for r in 0..self.dim {
            for c in 0..self.dim {
                if block_of(r) != block_of(c) && !g.get(r, c).is_zero() {
                    return Ok(false);
                }
            }
        }
        for b in &self.blocks {
            let sub = Matrix::from_fn(b.size, b.size, |r, c| {
                g.get(b.offset + r, b.offset + c).clone()
            });
            let det = sub.det();
            let one = ExactScalar::one(self.p);
            let ok = match b.family {
                Family::GL => !det.is_zero(),
                Family::SL => det == one,
                Family::SOOdd | Family::SOEven => {
                    let q = b.form.as_ref().unwrap();
                    det == one && sub.transpose().mul(q).mul(&sub) == *q
                }
                Family::Sp => {
                    let q = b.form.as_ref().unwrap();
                    sub.transpose().mul(q).mul(&sub) == *q
                }
                Family::GSp => {
                    let q = b.form.as_ref().unwrap();
                    let t = sub.transpose().mul(q).mul(&sub);
                    let (i, j) = (0, b.size - 1);
                    let lambda = t.get(i, j).mul(&q.get(i, j).inv().unwrap());
                    !lambda.is_zero() && t == q.scale(&lambda)
                }
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Polynomial residuals vanishing exactly on the group (off-block
    /// entries, form equations, determinant conditions); the `GL` factors
    /// contribute only their invertibility, which is left to the caller.
    pub fn member_residuals(&self, g: &Matrix<ExactScalar>) -> Vec<ExactScalar> {
        let one = ExactScalar::one(self.p);
        let block_of = |i: usize| {
            self.blocks
                .iter()
                .position(|b| i >= b.offset && i < b.offset + b.size)
        };
        let mut out = vec![];
        for r in 0..self.dim {
            for c in 0..self.dim {
                if block_of(r) != block_of(c) {
                    out.push(g.get(r, c).clone());
                }
            }
        }
        for b in &self.blocks {
            let sub = Matrix::from_fn(b.size, b.size, |r, c| {
                g.get(b.offset + r, b.offset + c).clone()
            });
            match b.family {
                Family::GL => {}
                Family::SL => out.push(sub.det().sub(&one)),
                Family::SOOdd | Family::SOEven | Family::Sp => {
                    let q = b.form.as_ref().unwrap();
                    out.extend(
                        sub.transpose()
                            .mul(q)
                            .mul(&sub)
                            .sub(q)
                            .entries()
                            .iter()
                            .cloned(),
                    );
                    if b.family != Family::Sp {
                        out.push(sub.det().sub(&one));
                    }
                }
                Family::GSp => {
                    let q = b.form.as_ref().unwrap();
                    let t = sub.transpose().mul(q).mul(&sub);
                    let (i, j) = (0, b.size - 1);
                    let lambda = t.get(i, j).mul(&q.get(i, j).inv().unwrap());
                    out.extend(t.sub(&q.scale(&lambda)).entries().iter().cloned());
                }
            }
        }
        out
    }

    /// Dominant cocharacter `lambda` with `g` in `K lambda(p) K`, from the
    /// elementary divisors of each block.
    pub fn cartan_invariant(&self, g: &PMat) -> Result<Vec<i64>, GroupError> {
        let mut out = vec![0; self.dim];
        for b in &self.blocks {
            if b.family == Family::SOEven {
                return Err(GroupError::UnsupportedDescriptor(
                    "SO(2n) has no elementary-divisor Cartan invariant here".into(),
                ));
            }
            let n = b.size;
            let mut sub = PMat::identity(g.ring, n);
            for r in 0..n {
                for c in 0..n {
                    sub.m[r * n + c] = g.get(b.offset + r, b.offset + c);
                }
            }
            sub.shift = g.shift;
            sub.digits = g.digits;
            sub.vdet = self.block_vdet(g, b)?;
            let mut e = sub.elementary_divisors().map_err(GroupError::Arith)?;
            e.reverse();
            out[b.offset..b.offset + n].copy_from_slice(&e);
        }
        Ok(out)
    }

    fn block_vdet(&self, g: &PMat, b: &Block) -> Result<i64, GroupError> {
        if self.blocks.len() == 1 {
            return Ok(g.vdet);
        }
        // Compute the block determinant valuation from an exact lift.
        let n = b.size;
        let sub = Matrix::from_fn(n, n, |r, c| {
            ExactScalar::from_rational(self.p, g.entry_rational(b.offset + r, b.offset + c))
        });
        sub.det()
            .valuation()
            .ok_or(GroupError::Arith(crate::arith::ArithError::Singular))
    }

    /// Topological generators of `K = G(O)`: root elements `R_alpha(1)` for
    /// all roots and torus elements built from a generator of `Z_p^*`.
    pub fn k_generators(&self, ring: PRing) -> Vec<PMat> {
        let mut gens: Vec<PMat> = self
            .all_roots()
            .map(|r| self.root_group_element(ring, r, 1))
            .collect();
        let units: Vec<u64> = if self.p == 2 {
            vec![ring.modulus - 1, 5]
        } else {
            vec![crate::arith::residue::primitive_root_p2(self.p)]
        };
        for b in &self.torus_basis {
            for &t in &units {
                gens.push(self.cocharacter_unit(ring, b, t));
            }
        }
        gens
    }

    /// Generators of `N(O)`.
    pub fn n_generators(&self, ring: PRing) -> Vec<PMat> {
        self.positive
            .iter()
            .map(|r| self.root_group_element(ring, r, 1))
            .collect()
    }

    pub fn dim_group(&self) -> usize {
        self.torus_basis.len() + 2 * self.positive.len()
    }
}

fn pow_exact(s: &ExactScalar, k: i64) -> ExactScalar {
    let base = if k >= 0 {
        s.clone()
    } else {
        s.inv().expect("unit")
    };
    let mut r = s.one_like();
    for _ in 0..k.unsigned_abs() {
        r = r.mul(&base);
    }
    r
}

fn block_roots(b: &Block) -> (Vec<Root>, Vec<Root>) {
    let o = b.offset;
    let n = b.size;
    let one = BigRational::one();
    let mut pos = vec![];
    let mut neg = vec![];
    match b.family {
        Family::GL | Family::SL => {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let r = make_root(o + i, o + j, vec![(o + i, o + j, one.clone())]);
                    if i < j {
                        pos.push(r)
                    } else {
                        neg.push(r)
                    }
                }
            }
        }
        _ => {
            let form = b.form.as_ref().expect("form");
            let orth = matches!(b.family, Family::SOOdd | Family::SOEven);
            let prime = |i: usize| n - 1 - i;
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let (bi, bj) = (prime(j), prime(i));
                    if j == prime(i) {
                        if orth {
                            continue;
                        }
                        let r = make_root(o + i, o + j, vec![(o + i, o + j, one.clone())]);
                        if i < j {
                            pos.push(r)
                        } else {
                            neg.push(r)
                        }
                        continue;
                    }
                    // Keep one of the two pairs describing the same root.
                    if (i, j) > (bi, bj) {
                        continue;
                    }
                    let c = q_at(form, i, prime(i)) / q_at(form, j, prime(j));
                    let x = vec![(o + i, o + j, one.clone()), (o + bi, o + bj, -c)];
                    let r = make_root(o + i, o + j, x);
                    if i < j {
                        pos.push(r)
                    } else {
                        neg.push(r)
                    }
                }
            }
        }
    }
    (pos, neg)
}

fn block_torus(b: &Block, total: usize) -> Vec<Vec<i64>> {
    let o = b.offset;
    let n = b.size;
    let unit = |i: usize| {
        let mut v = vec![0; total];
        v[o + i] = 1;
        v
    };
    match b.family {
        Family::GL => (0..n).map(unit).collect(),
        Family::SL => (0..n - 1)
            .map(|i| {
                let mut v = unit(i);
                v[o + i + 1] = -1;
                v
            })
            .collect(),
        Family::Sp | Family::SOOdd | Family::SOEven | Family::GSp => {
            let mut out: Vec<Vec<i64>> = (0..n / 2)
                .map(|i| {
                    let mut v = unit(i);
                    v[o + n - 1 - i] = -1;
                    v
                })
                .collect();
            if b.family == Family::GSp {
                let mut v = vec![0; total];
                for i in 0..n / 2 {
                    v[o + i] = 1;
                }
                out.push(v);
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so5_roots_and_pairing() {
        let g = Descriptor::so_odd_standard(5, 3);
        assert_eq!(g.positive.len(), 4);
        assert_eq!(g.pairing_2rho(&[2, 1, 0, -1, -2]), 7);
        assert_eq!(g.pairing_2rho(&[0; 5]), 0);
        assert!(g.is_strictly_dominant(&[2, 1, 0, -1, -2]));
        assert!(g.is_minuscule(&[1, 0, 0, 0, -1]));
    }

    #[test]
    fn root_templates_are_members() {
        for g in [
            Descriptor::so_odd_standard(5, 3),
            Descriptor::sp_standard(4, 3),
            Descriptor::gl(3, 3),
        ] {
            for r in g.all_roots() {
                let u = ExactScalar::from_frac(3, 2, 3);
                let x = g.root_group_exact(r, &u);
                assert!(
                    g.is_member(&x).unwrap(),
                    "{} root ({},{})",
                    g.name,
                    r.a,
                    r.b
                );
                let y = g.root_group_exact(r, &u.neg());
                assert_eq!(x.mul(&y), Matrix::identity(g.dim, &ExactScalar::one(3)));
            }
        }
    }

    #[test]
    fn torus_conjugation_scales_root_groups() {
        let g = Descriptor::so_odd_standard(5, 3);
        let mu = [2, 1, 0, -1, -2];
        let s = ExactScalar::from_int(3, 3);
        let t = g.cocharacter_exact(&mu, &s);
        let ti = t.inverse().unwrap();
        let u = ExactScalar::from_int(3, 5);
        for r in &g.positive {
            let lhs = t.mul(&g.root_group_exact(r, &u)).mul(&ti);
            let k = r.pairing(&mu);
            let su = u.mul(&ExactScalar::p_power(3, k));
            assert_eq!(lhs, g.root_group_exact(r, &su));
        }
    }

    #[test]
    fn coroots_of_so5() {
        let g = Descriptor::so_odd_standard(5, 3);
        let mut cs = g.positive_coroots();
        cs.sort();
        assert!(cs.contains(&vec![2, 0, 0, 0, -2]));
        assert!(cs.contains(&vec![1, -1, 0, 1, -1]));
    }

    #[test]
    fn weyl_orbits() {
        let g = Descriptor::gl(3, 3);
        assert_eq!(g.weyl_orbit(&[1, 0, 0]).len(), 3);
        assert_eq!(g.dominant_rep(&[0, 0, 1]), vec![1, 0, 0]);
        let so = Descriptor::so_odd_standard(5, 3);
        assert_eq!(so.weyl_orbit(&[2, 1, 0, -1, -2]).len(), 8);
        assert_eq!(
            so.dominant_below(&[1, 1, 0, -1, -1]),
            vec![vec![1, 1, 0, -1, -1], vec![0; 5]]
        );
        assert_eq!(
            so.dominant_below(&[2, 0, 0, 0, -2]),
            vec![vec![2, 0, 0, 0, -2], vec![1, 1, 0, -1, -1], vec![0; 5]]
        );
    }

    #[test]
    fn cartan_examples() {
        let g = Descriptor::gl(2, 3);
        let r = g.ring();
        assert_eq!(
            g.cartan_invariant(&PMat::diag_p_powers(r, &[2, 1]))
                .unwrap(),
            vec![2, 1]
        );
        assert_eq!(
            g.cartan_invariant(&PMat::from_i64(r, 2, &[3, 1, 0, 1]))
                .unwrap(),
            vec![1, 0]
        );
        assert_eq!(
            g.cartan_invariant(&PMat::diag_p_powers(r, &[0, 1]))
                .unwrap(),
            vec![1, 0]
        );
    }

    #[test]
    fn sl2_membership() {
        let g = Descriptor::sl(2, 3);
        let x = Matrix::diagonal(&[ExactScalar::from_int(3, 3), ExactScalar::one(3)]);
        assert!(!g.is_member(&x).unwrap());
        assert!(g
            .is_member(&Matrix::identity(2, &ExactScalar::one(3)))
            .unwrap());
    }
}
