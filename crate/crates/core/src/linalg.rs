//! Dense exact linear algebra: row reduction, rank, kernels, determinants
//! and the lattice of subspaces of a coordinate space.

use crate::error::{Error, Result};
use crate::field::Field;

/// Dense matrix over `F`, row-major. `0 x n` and `m x 0` matrices are legal.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            data: vec![field.zero(); rows * cols],
            field: field.clone(),
            rows,
            cols,
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must share one length.
    /// `cols` is needed to describe `0 x cols` matrices.
    pub fn from_rows(field: &F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(Matrix {
            field: field.clone(),
            rows: n,
            cols,
            data,
        })
    }

    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Self::from_rows(field, cols, rows).expect("ragged integer matrix")
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(field: &F, rows: usize, cols: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column {j} has wrong length");
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<F::Elem> {
        self.row(i).to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero(v))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(&self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                m.set(i, jj, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut m = Self::zeros(&self.field, rows.len(), self.cols);
        for (ii, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                m.set(ii, j, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Matrix {
            data: self.data.iter().map(|v| f.mul(v, c)).collect(),
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {:?} and {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let f = &self.field;
        Ok(Matrix {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f.add(a, b))
                .collect(),
            field: f.clone(),
            rows: self.rows,
            cols: self.cols,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {:?} by {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let v = f.mul_add(out.get(i, j), a, b);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.mul_add(&acc, a, b))
            })
            .collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Reduced row-echelon form and rank. The pivot of each step is the
    /// first row (top-down) holding a nonzero entry in the leftmost
    /// remaining column; no magnitude heuristics.
    pub fn rref(&self) -> (Self, usize) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots.len())
    }

    /// Row-reduces in place and returns the pivot columns.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !f.is_zero(self.get(i, c))) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = f.inv(self.get(r, c)).expect("nonzero pivot");
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c).clone();
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), &f.mul(&factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Right null space `{v : M v = 0}`.
    pub fn kernel(&self) -> Subspace<F> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let f = &self.field;
        let mut basis = Vec::new();
        let mut pivot_iter = pivots.iter().peekable();
        let mut free = Vec::new();
        for c in 0..self.cols {
            if pivot_iter.peek() == Some(&&c) {
                pivot_iter.next();
            } else {
                free.push(c);
            }
        }
        for &fc in &free {
            let mut v = vec![f.zero(); self.cols];
            v[fc] = f.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.get(row, fc));
            }
            basis.push(v);
        }
        Subspace::span(f, self.cols, basis)
    }

    /// Determinant of a square matrix (1 for the empty matrix).
    pub fn det(&self) -> Result<F::Elem> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "determinant of non-square {:?}",
                self.shape()
            )));
        }
        let f = self.field.clone();
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                return Ok(f.zero());
            };
            if p != c {
                m.swap_rows(c, p);
                det = f.neg(&det);
            }
            let pivot = m.get(c, c).clone();
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot).expect("nonzero pivot");
            for i in c + 1..m.rows {
                let factor = f.mul(m.get(i, c), &inv);
                if f.is_zero(&factor) {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Solves `M x = b`, returning one solution (free variables set to zero)
    /// or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let f = &self.field;
        let mut aug = Self::zeros(f, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![f.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(row, self.cols).clone();
        }
        Some(x)
    }
}

/// Subspace of `F^ambient_dim` stored as an RREF basis (rows).
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F: Field> {
    basis: Matrix<F>,
    pivots: Vec<usize>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: &F, ambient_dim: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(field, 0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &F, ambient_dim: usize) -> Self {
        Subspace {
            basis: Matrix::identity(field, ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of arbitrary vectors of length `ambient_dim`.
    pub fn span(field: &F, ambient_dim: usize, vectors: Vec<Vec<F::Elem>>) -> Self {
        let m = Matrix::from_rows(field, ambient_dim, vectors).expect("vector length mismatch");
        Self::row_space(&m)
    }

    pub fn row_space(m: &Matrix<F>) -> Self {
        let mut r = m.clone();
        let pivots = r.rref_in_place();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        Subspace {
            basis: r.select_rows(&keep),
            pivots,
        }
    }

    pub fn column_space(m: &Matrix<F>) -> Self {
        Self::row_space(&m.transpose())
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }
    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }
    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn basis_vector(&self, i: usize) -> Vec<F::Elem> {
        self.basis.row_vec(i)
    }

    /// Coordinates of `v` in the RREF basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        assert_eq!(v.len(), self.ambient_dim(), "vector length mismatch");
        let f = self.field();
        let coords: Vec<F::Elem> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (i, c) in coords.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            for (j, b) in self.basis.row(i).iter().enumerate() {
                rest[j] = f.sub(&rest[j], &f.mul(c, b));
            }
        }
        rest.iter().all(|x| f.is_zero(x)).then_some(coords)
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        (0..other.dim()).all(|i| self.contains(other.basis.row(i)))
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of dimension-{} and dimension-{} spaces",
                self.ambient_dim(),
                other.ambient_dim()
            )));
        }
        Ok(())
    }

    /// Sum of subspaces.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(Self::row_space(&self.basis.vstack(&other.basis)?))
    }

    /// Intersection, via the kernel of `[A^T | -B^T]`.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let f = self.field();
        let n = self.ambient_dim();
        let (da, db) = (self.dim(), other.dim());
        let mut system = Matrix::zeros(f, n, da + db);
        for i in 0..da {
            for k in 0..n {
                system.set(k, i, self.basis.get(i, k).clone());
            }
        }
        for j in 0..db {
            for k in 0..n {
                system.set(k, da + j, f.neg(other.basis.get(j, k)));
            }
        }
        let ker = system.kernel();
        let vectors = (0..ker.dim())
            .map(|t| {
                let coeffs = ker.basis.row(t);
                let mut v = vec![f.zero(); n];
                for (i, c) in coeffs[..da].iter().enumerate() {
                    if f.is_zero(c) {
                        continue;
                    }
                    for (k, b) in self.basis.row(i).iter().enumerate() {
                        v[k] = f.mul_add(&v[k], c, b);
                    }
                }
                v
            })
            .collect();
        Ok(Self::span(f, n, vectors))
    }

    /// Equality as subspaces (RREF bases are canonical).
    pub fn same_as(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}
