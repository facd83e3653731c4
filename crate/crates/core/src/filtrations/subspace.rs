//! Subspaces of `F_p^n`, stored by a reduced row echelon basis.

use serde::Serialize;

use super::field::Fp;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subspace {
    pub n: usize,
    pub basis: Vec<Vec<u64>>,
}

impl Subspace {
    pub fn span(k: &Fp, n: usize, vecs: &[Vec<u64>]) -> Self {
        Subspace {
            n,
            basis: k.rref(vecs),
        }
    }
    pub fn zero(n: usize) -> Self {
        Subspace { n, basis: vec![] }
    }
    pub fn full(n: usize) -> Self {
        Subspace {
            n,
            basis: (0..n)
                .map(|i| (0..n).map(|j| (i == j) as u64).collect())
                .collect(),
        }
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }
    pub fn contains(&self, k: &Fp, v: &[u64]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        k.rank(&rows) == self.dim()
    }
    pub fn is_within(&self, k: &Fp, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(k, v))
    }
    pub fn sum(&self, k: &Fp, other: &Subspace) -> Self {
        let rows: Vec<Vec<u64>> = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::span(k, self.n, &rows)
    }
    /// Linear forms vanishing on the subspace.
    pub fn annihilator(&self, k: &Fp) -> Vec<Vec<u64>> {
        k.nullspace(&self.basis, self.n)
    }
    pub fn intersect(&self, k: &Fp, other: &Subspace) -> Self {
        let mut eqs = self.annihilator(k);
        eqs.extend(other.annihilator(k));
        Subspace::span(k, self.n, &k.nullspace(&eqs, self.n))
    }
    /// Orthogonal complement for a bilinear form with Gram matrix `gram`.
    pub fn perp(&self, k: &Fp, gram: &[Vec<u64>]) -> Self {
        let rows: Vec<Vec<u64>> = self
            .basis
            .iter()
            .map(|v| k.apply(&k.transpose(gram), v))
            .collect();
        Subspace::span(k, self.n, &k.nullspace(&rows, self.n))
    }
    pub fn image(&self, k: &Fp, m: &[Vec<u64>]) -> Self {
        let rows: Vec<Vec<u64>> = self.basis.iter().map(|v| k.apply(m, v)).collect();
        Subspace::span(k, self.n, &rows)
    }
    pub fn is_isotropic(&self, k: &Fp, gram: &[Vec<u64>]) -> bool {
        self.basis
            .iter()
            .all(|x| self.basis.iter().all(|y| k.dot(x, &k.apply(gram, y)) == 0))
    }
    /// Vectors of `self` completing a basis of `inner` (assumed inside).
    pub fn complement_of(&self, k: &Fp, inner: &Subspace) -> Vec<Vec<u64>> {
        let mut acc = inner.clone();
        let mut out = vec![];
        for v in &self.basis {
            if !acc.contains(k, v) {
                acc = acc.sum(k, &Subspace::span(k, self.n, &[v.clone()]));
                out.push(v.clone());
            }
        }
        out
    }
    /// Spanned by standard basis vectors.
    pub fn is_coordinate(&self) -> bool {
        self.basis
            .iter()
            .all(|r| r.iter().filter(|&&x| x != 0).count() == 1)
    }
    pub fn render(&self) -> String {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        format!("<{}>", rows.join("; "))
    }
}

/// Every vector of `F_p^d` as coefficients, in lexicographic order.
pub fn all_vectors(p: u64, d: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = p.pow(d as u32);
    (0..total).map(move |mut i| {
        (0..d)
            .map(|_| {
                let c = i % p;
                i /= p;
                c
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_operations() {
        let k = Fp::new(5);
        let a = Subspace::span(&k, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Subspace::span(&k, 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(a.intersect(&k, &b), Subspace::span(&k, 3, &[vec![0, 2, 0]]));
        assert_eq!(a.sum(&k, &b), Subspace::full(3));
        let gram = vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]];
        let line = Subspace::span(&k, 3, &[vec![1, 0, 0]]);
        assert!(line.is_isotropic(&k, &gram));
        assert_eq!(line.perp(&k, &gram), a);
        assert_eq!(a.complement_of(&k, &line), vec![vec![0, 1, 0]]);
        assert_eq!(all_vectors(3, 2).count(), 9);
    }
}
