//! Dense matrices over an exact field with exact rank and kernel computation.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Conj, Field, GaussianRational, Scalar};

/// A dense row-major matrix over an exact field.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Matrices over the Gaussian rationals.
pub type CMatrix = Matrix<GaussianRational>;
/// Matrices over ℚ(i, √2).
pub type SMatrix = Matrix<Scalar>;

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// A matrix whose columns are the given vectors.
    pub fn from_columns(dim: usize, cols: &[Vec<F>]) -> Self {
        Self::from_fn(dim, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn diagonal(d: &[F]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.data[i * d.len() + i] = x.clone();
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        self.map(|x| if x.is_zero() { F::zero() } else { x.mul_ref(s) })
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg_ref())
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add_ref(b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.sub_ref(b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    /// Sum; panics on shape mismatch (internal use on known shapes).
    pub fn add(&self, o: &Self) -> Self {
        self.try_add(o).expect("matrix add shape")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.try_sub(o).expect("matrix sub shape")
    }

    /// `self += s·o` in place.
    pub fn add_scaled(&mut self, o: &Self, s: &F) {
        assert!(self.rows == o.rows && self.cols == o.cols, "matrix add_scaled shape");
        if s.is_zero() {
            return;
        }
        let one = s.is_one();
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            if !b.is_zero() {
                let t = if one { b.clone() } else { b.mul_ref(s) };
                *a = a.add_ref(&t);
            }
        }
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!(
                "product {}x{} * {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].add_ref(&a.mul_ref(b));
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("matrix mul shape")
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// `{A, B} = AB + BA`.
    pub fn anticommutator(&self, o: &Self) -> Self {
        self.mul(o).add(&o.mul(self))
    }

    pub fn try_mul_vec(&self, v: &[F]) -> Result<Vec<F>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "matrix {}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![F::zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o = o.add_ref(&a.mul_ref(x));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        self.try_mul_vec(v).expect("matrix-vector shape")
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &Self) -> Self {
        Self::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            let a = self.get(i / o.rows, j / o.cols);
            if a.is_zero() {
                F::zero()
            } else {
                a.mul_ref(o.get(i % o.rows, j % o.cols))
            }
        })
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    /// The 2×2 block matrix `[[a, b], [c, d]]` with square blocks of equal size.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.rows;
        let mut m = Self::zeros(2 * n, 2 * n);
        m.set_block(0, 0, a);
        m.set_block(0, n, b);
        m.set_block(n, 0, c);
        m.set_block(n, n, d);
        m
    }

    /// Vertical concatenation.
    pub fn vstack(blocks: &[Self]) -> Result<Self> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let data = blocks.iter().flat_map(|b| b.data.iter().cloned()).collect();
        Ok(Matrix { rows, cols, data })
    }

    pub fn trace(&self) -> F {
        let mut t = F::zero();
        for i in 0..self.rows.min(self.cols) {
            t = t.add_ref(self.get(i, i));
        }
        t
    }

    /// Reduced row echelon form and its pivot columns, by exact elimination.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j);
                if !v.is_zero() {
                    let nv = v.mul_ref(&inv);
                    m.set(r, j, nv);
                }
            }
            let pivot_row: Vec<F> = m.row(r).to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let pr = &pivot_row[j];
                    if pr.is_zero() {
                        continue;
                    }
                    let nv = m.get(i, j).sub_ref(&f.mul_ref(pr));
                    m.set(i, j, nv);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the right kernel `{v : A v = 0}`; one vector per free column,
    /// normalized to 1 in that column.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if pivots.contains(&f) {
                continue;
            }
            let mut v = vec![F::zero(); self.cols];
            v[f] = F::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = r.get(row, f).neg_ref();
            }
            basis.push(v);
        }
        basis
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, n))
    }
}

impl<F: Field + Conj> Matrix<F> {
    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    /// Complex-conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }
}

impl<F: Field + fmt::Display> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Dimension of the span of a list of vectors.
pub fn span_dim<F: Field>(vectors: &[Vec<F>], dim: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_fn(vectors.len(), dim, |i, j| vectors[i][j].clone()).rank()
}

/// A basis of the span of a list of vectors (rows of the reduced echelon form).
pub fn span_basis<F: Field>(vectors: &[Vec<F>], dim: usize) -> Vec<Vec<F>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_fn(vectors.len(), dim, |i, j| vectors[i][j].clone()).rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

pub fn vec_is_zero<F: Field>(v: &[F]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn vec_add<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.add_ref(y)).collect()
}

pub fn vec_sub<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.sub_ref(y)).collect()
}

pub fn vec_scale<F: Field>(a: &[F], s: &F) -> Vec<F> {
    a.iter().map(|x| if x.is_zero() { F::zero() } else { x.mul_ref(s) }).collect()
}

/// `Σ aᵢ bᵢ` without conjugation.
pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc.add_ref(&x.mul_ref(y));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn kernel_and_rank() {
        let m = Matrix::from_rows(vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(1), q(0), q(1)],
        ])
        .unwrap();
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(vec_is_zero(&m.mul_vec(&k[0])));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(7), q(4)]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let s = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]]).unwrap();
        assert!(s.inverse().is_none());
    }

    #[test]
    fn kron_shape_and_entries() {
        let a = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap();
        let b = Matrix::<Rational>::identity(3);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert_eq!(*k.get(0, 3), q(1));
        assert_eq!(*k.get(0, 0), q(0));
    }

    #[test]
    fn shape_errors() {
        let a = Matrix::<Rational>::zeros(2, 3);
        assert!(a.try_mul(&a).is_err());
        assert!(a.try_mul_vec(&[q(1)]).is_err());
    }
}
