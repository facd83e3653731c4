use std::fmt;

use super::Scalar;

/// Dense row-major matrix over an exact scalar type.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[r * self.cols + c])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Smith form over the valuation ring: `u * m * v = d` with `u`, `v`
/// invertible over the ring and `d` diagonal with entries `p^exps[i]`.
pub struct SmithForm<T> {
    pub exps: Vec<Option<i64>>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
    pub d: Matrix<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize, proto: &T) -> Self {
        Self::from_fn(rows, cols, |_, _| proto.zero_like())
    }

    pub fn identity(n: usize, proto: &T) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                proto.one_like()
            } else {
                proto.zero_like()
            }
        })
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |r, c| {
            if r == c {
                entries[r].clone()
            } else {
                entries[0].zero_like()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }
    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let z = self.data[0].zero_like();
        Self::from_fn(self.rows, o.cols, |r, c| {
            let mut acc = z.clone();
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                let b = o.get(k, c);
                if b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(b));
            }
            acc
        })
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c).add(o.get(r, c)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |r, c| self.get(r, c).sub(o.get(r, c)))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul(s))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Minimum valuation of the entries; `None` for the zero matrix.
    pub fn min_valuation(&self) -> Option<i64> {
        self.data.iter().filter_map(|x| x.valuation()).min()
    }

    pub fn is_integral(&self) -> bool {
        self.min_valuation().map_or(true, |v| v >= 0)
    }

    /// Determinant by Gaussian elimination over the field.
    pub fn det(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = self.data[0].one_like();
        for k in 0..n {
            let Some(piv) = (k..n).find(|&r| !a.get(r, k).is_zero()) else {
                return self.data[0].zero_like();
            };
            if piv != k {
                a.swap_rows(piv, k);
                det = det.neg();
            }
            let pv = a.get(k, k).clone();
            det = det.mul(&pv);
            let inv = pv.inv().expect("nonzero pivot");
            for r in k + 1..n {
                let f = a.get(r, k).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for c in k..n {
                    let v = a.get(r, c).sub(&f.mul(a.get(k, c)));
                    a.set(r, c, v);
                }
            }
        }
        det
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// Inverse over the field, `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let proto = &self.data[0];
        let mut a = self.clone();
        let mut inv = Self::identity(n, proto);
        for k in 0..n {
            let piv = (k..n).find(|&r| !a.get(r, k).is_zero())?;
            a.swap_rows(piv, k);
            inv.swap_rows(piv, k);
            let pinv = a.get(k, k).inv()?;
            for c in 0..n {
                let v = a.get(k, c).mul(&pinv);
                a.set(k, c, v);
                let w = inv.get(k, c).mul(&pinv);
                inv.set(k, c, w);
            }
            for r in 0..n {
                if r == k || a.get(r, k).is_zero() {
                    continue;
                }
                let f = a.get(r, k).clone();
                for c in 0..n {
                    let v = a.get(r, c).sub(&f.mul(a.get(k, c)));
                    a.set(r, c, v);
                    let w = inv.get(r, c).sub(&f.mul(inv.get(k, c)));
                    inv.set(r, c, w);
                }
            }
        }
        Some(inv)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = vec![];
        let mut row = 0;
        for c in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(piv) = (row..self.rows).find(|&r| !a.get(r, c).is_zero()) else {
                continue;
            };
            a.swap_rows(piv, row);
            let inv = a.get(row, c).inv().expect("nonzero");
            for cc in 0..self.cols {
                let v = a.get(row, cc).mul(&inv);
                a.set(row, cc, v);
            }
            for r in 0..self.rows {
                if r == row || a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).clone();
                for cc in 0..self.cols {
                    let v = a.get(r, cc).sub(&f.mul(a.get(row, cc)));
                    a.set(r, cc, v);
                }
            }
            pivots.push(c);
            row += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : self * x = 0}`, one vector per column
    /// of the returned matrix.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let proto = &self.data[0];
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![proto.zero_like(); self.cols];
                v[f] = proto.one_like();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = r.get(i, f).neg();
                }
                v
            })
            .collect()
    }

    /// Smith normal form over the valuation ring of `T`, pivoting on the
    /// entry of least valuation.
    pub fn smith(&self) -> SmithForm<T> {
        let proto = self.data[0].clone();
        let (m, n) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut u = Self::identity(m, &proto);
        let mut v = Self::identity(n, &proto);
        let mut exps = vec![];
        for k in 0..m.min(n) {
            let mut best: Option<(i64, usize, usize)> = None;
            for r in k..m {
                for c in k..n {
                    if let Some(val) = a.get(r, c).valuation() {
                        if best.map_or(true, |b| val < b.0) {
                            best = Some((val, r, c));
                        }
                    }
                }
            }
            let Some((val, r, c)) = best else {
                exps.extend(std::iter::repeat(None).take(m.min(n) - k));
                break;
            };
            a.swap_rows(r, k);
            u.swap_rows(r, k);
            a.swap_cols(c, k);
            v.swap_cols(c, k);
            let piv = a.get(k, k).clone();
            let pinv = piv.inv().expect("nonzero");
            for rr in k + 1..m {
                let f = a.get(rr, k).mul(&pinv);
                if f.is_zero() {
                    continue;
                }
                for cc in 0..n {
                    let x = a.get(rr, cc).sub(&f.mul(a.get(k, cc)));
                    a.set(rr, cc, x);
                }
                for cc in 0..m {
                    let x = u.get(rr, cc).sub(&f.mul(u.get(k, cc)));
                    u.set(rr, cc, x);
                }
            }
            for cc in k + 1..n {
                let f = a.get(k, cc).mul(&pinv);
                if f.is_zero() {
                    continue;
                }
                for rr in 0..m {
                    let x = a.get(rr, cc).sub(&f.mul(a.get(rr, k)));
                    a.set(rr, cc, x);
                }
                for rr in 0..n {
                    let x = v.get(rr, cc).sub(&f.mul(v.get(rr, k)));
                    v.set(rr, cc, x);
                }
            }
            exps.push(Some(val));
        }
        SmithForm { exps, u, v, d: a }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ExactScalar;

    fn m(p: u64, rows: usize, cols: usize, v: &[i64]) -> Matrix<ExactScalar> {
        Matrix::from_vec(
            rows,
            cols,
            v.iter().map(|&x| ExactScalar::from_int(p, x)).collect(),
        )
    }

    #[test]
    fn det_and_inverse() {
        let a = m(3, 3, 3, &[2, 1, 0, 1, 3, 1, 0, 1, 4]);
        assert_eq!(a.det(), ExactScalar::from_int(3, 18));
        let i = a.inverse().unwrap();
        assert_eq!(a.mul(&i), Matrix::identity(3, &ExactScalar::one(3)));
    }

    #[test]
    fn smith_exponents() {
        let a = m(3, 2, 2, &[9, 1, 0, 3]);
        let s = a.smith();
        let mut e: Vec<i64> = s.exps.iter().map(|x| x.unwrap()).collect();
        e.sort();
        assert_eq!(e, vec![0, 3]);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
    }

    #[test]
    fn nullspace_dimension() {
        let a = m(5, 2, 4, &[1, 2, 3, 4, 2, 4, 6, 8]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 3);
        for v in ns {
            let col = Matrix::from_vec(4, 1, v);
            assert!(a.mul(&col).is_zero());
        }
    }
}
