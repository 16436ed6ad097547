use std::collections::BTreeMap;
use std::fmt;

use super::scalar::{FieldSpec, Scalar};
use crate::error::{Error, Result};

/// Sparse coordinate vector: sorted `(index, value)` pairs, no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseVector {
    dim: usize,
    entries: Vec<(usize, Scalar)>,
}

impl SparseVector {
    pub fn zero(dim: usize) -> Self {
        SparseVector { dim, entries: Vec::new() }
    }

    pub fn unit(field: FieldSpec, dim: usize, index: usize) -> Self {
        assert!(index < dim);
        SparseVector { dim, entries: vec![(index, field.one())] }
    }

    /// Builds from unsorted pairs, summing duplicates and dropping zeros.
    pub fn from_pairs(dim: usize, pairs: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, v) in pairs {
            assert!(i < dim, "index {i} out of range {dim}");
            match acc.get_mut(&i) {
                Some(x) => *x += &v,
                None => {
                    acc.insert(i, v);
                }
            }
        }
        SparseVector { dim, entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub(crate) fn from_sorted_unchecked(dim: usize, entries: Vec<(usize, Scalar)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(i, v)| *i < dim && !v.is_zero()));
        SparseVector { dim, entries }
    }

    pub fn from_dense(values: &[Scalar]) -> Self {
        SparseVector {
            dim: values.len(),
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, field: FieldSpec) -> Vec<Scalar> {
        let mut out = vec![field.zero(); self.dim];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries.binary_search_by_key(&i, |x| x.0).ok().map(|k| &self.entries[k].1)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return SparseVector::zero(self.dim);
        }
        SparseVector { dim: self.dim, entries: self.entries.iter().map(|(i, v)| (*i, v * c)).collect() }
    }

    /// `self + c * other`
    pub fn add_scaled(&self, c: &Scalar, other: &SparseVector) -> Self {
        assert_eq!(self.dim, other.dim);
        SparseVector::from_pairs(
            self.dim,
            self.entries.iter().cloned().chain(other.entries.iter().map(|(i, v)| (*i, v * c))),
        )
    }
}

/// Exact sparse matrix, stored by columns.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    columns: Vec<SparseVector>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        if self.rows * self.cols <= 400 {
            for r in 0..self.rows {
                let line: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
                writeln!(f, "  [{}]", line.join(", "))?;
            }
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, columns: vec![SparseVector::zero(rows); cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        Matrix {
            field,
            rows: n,
            cols: n,
            columns: (0..n).map(|i| SparseVector::unit(field, n, i)).collect(),
        }
    }

    /// Accumulates `(row, col, value)` triples; duplicates are summed.
    pub fn from_triplets(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Self {
        let mut per_col: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            per_col[c].push((r, v));
        }
        Matrix {
            field,
            rows,
            cols,
            columns: per_col.into_iter().map(|p| SparseVector::from_pairs(rows, p)).collect(),
        }
    }

    pub fn from_columns(field: FieldSpec, rows: usize, columns: Vec<SparseVector>) -> Self {
        assert!(columns.iter().all(|c| c.dim() == rows));
        Matrix { field, rows, cols: columns.len(), columns }
    }

    pub fn from_dense(field: FieldSpec, dense: &[Vec<Scalar>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, |r| r.len());
        Matrix::from_triplets(
            field,
            rows,
            cols,
            dense.iter().enumerate().flat_map(|(r, row)| {
                assert_eq!(row.len(), cols, "ragged dense matrix");
                row.iter().enumerate().map(move |(c, v)| (r, c, v.clone()))
            }),
        )
    }

    pub fn from_i64(field: FieldSpec, dense: &[Vec<i64>]) -> Self {
        let d: Vec<Vec<Scalar>> =
            dense.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Matrix::from_dense(field, &d)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &SparseVector {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseVector] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.nnz()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_zero())
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.columns[c].get(r).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.entries().iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![self.field.zero(); self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_triplets(self.field, self.cols, self.rows, self.triplets().map(|(r, c, v)| (c, r, v.clone())))
    }

    /// Rows as sparse vectors over the column index space.
    pub fn row_vectors(&self) -> Vec<SparseVector> {
        self.transpose().columns
    }

    pub fn mul_vector(&self, x: &SparseVector) -> SparseVector {
        assert_eq!(x.dim(), self.cols, "dimension mismatch in matrix-vector product");
        SparseVector::from_pairs(
            self.rows,
            x.entries().iter().flat_map(|(c, xv)| self.columns[*c].entries().iter().map(move |(r, v)| (*r, v * xv))),
        )
    }

    pub fn mul_dense(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: x.len() });
        }
        Ok(self.mul_vector(&SparseVector::from_dense(x)).to_dense(self.field))
    }

    /// `self * other`
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: other.cols,
            columns: other.columns.iter().map(|c| self.mul_vector(c)).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.add_scaled(&self.field.one(), other)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add_scaled(&-self.field.one(), other)
    }

    /// `self + c * other`
    pub fn add_scaled(&self, c: &Scalar, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            columns: self.columns.iter().zip(&other.columns).map(|(a, b)| a.add_scaled(c, b)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            columns: self.columns.iter().map(|col| col.scale(c)).collect(),
        }
    }

    /// Columns `idx` of self, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        Matrix::from_columns(self.field, self.rows, idx.iter().map(|&c| self.columns[c].clone()).collect())
    }

    /// Rows `idx` of self, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut pos = vec![usize::MAX; self.rows];
        for (k, &r) in idx.iter().enumerate() {
            pos[r] = k;
        }
        Matrix::from_triplets(
            self.field,
            idx.len(),
            self.cols,
            self.triplets().filter(|(r, _, _)| pos[*r] != usize::MAX).map(|(r, c, v)| (pos[r], c, v.clone())),
        )
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Matrix::from_columns(self.field, self.rows, columns)
    }

    /// `[self ; other]`
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let off = self.rows;
        Matrix::from_triplets(
            self.field,
            self.rows + other.rows,
            self.cols,
            self.triplets()
                .map(|(r, c, v)| (r, c, v.clone()))
                .chain(other.triplets().map(|(r, c, v)| (r + off, c, v.clone()))),
        )
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let (ro, co) = (self.rows, self.cols);
        Matrix::from_triplets(
            self.field,
            self.rows + other.rows,
            self.cols + other.cols,
            self.triplets()
                .map(|(r, c, v)| (r, c, v.clone()))
                .chain(other.triplets().map(|(r, c, v)| (r + ro, c + co, v.clone()))),
        )
    }

    /// Permutes rows and columns: entry (r, c) moves to (row_perm[r], col_perm[c]).
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Matrix {
        Matrix::from_triplets(
            self.field,
            self.rows,
            self.cols,
            self.triplets().map(|(r, c, v)| (row_perm[r], col_perm[c], v.clone())),
        )
    }
}
