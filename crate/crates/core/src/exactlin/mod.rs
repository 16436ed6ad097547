//! Exact field arithmetic and sparse linear algebra.

mod elim;
mod matrix;
mod scalar;

pub use matrix::{Matrix, SparseVector};
pub use scalar::{sign, FieldSpec, Scalar, MAX_PRIME};

use elim::{eliminate, with_arith, Arith, Echelon, Row};

use crate::error::{Error, Result};

fn to_rows<A: Arith>(ar: &A, vectors: &[SparseVector]) -> Vec<Row<A::E>> {
    vectors.iter().map(|v| v.entries().iter().map(|(i, s)| (*i, ar.from_scalar(s))).collect()).collect()
}

fn from_row<A: Arith>(ar: &A, dim: usize, row: &Row<A::E>) -> SparseVector {
    SparseVector::from_sorted_unchecked(dim, row.iter().map(|(i, e)| (*i, ar.to_scalar(e))).collect())
}

/// Rank of a family of vectors of a common dimension.
pub fn rank_of_vectors(field: FieldSpec, dim: usize, vectors: &[SparseVector]) -> usize {
    fn go<A: Arith>(ar: &A, dim: usize, vectors: &[SparseVector]) -> usize {
        eliminate(ar, to_rows(ar, vectors), dim, dim, false).pivots.len()
    }
    with_arith(field, |a| go(a, dim, vectors), |a| go(a, dim, vectors))
}

/// Rank over the matrix's field.
pub fn rank(m: &Matrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    // Eliminate along the shorter side.
    if m.cols() <= m.rows() {
        rank_of_vectors(m.field(), m.rows(), m.columns())
    } else {
        rank_of_vectors(m.field(), m.cols(), &m.row_vectors())
    }
}

/// Basis of a subspace of a coordinate space in reduced echelon form:
/// `vectors[a]` has a 1 at coordinate `pivots[a]` and 0 at every other pivot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    field: FieldSpec,
    ambient_dim: usize,
    vectors: Vec<SparseVector>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    pub fn zero(field: FieldSpec, ambient_dim: usize) -> Self {
        SubspaceBasis { field, ambient_dim, vectors: Vec::new(), pivots: Vec::new() }
    }

    pub fn whole(field: FieldSpec, ambient_dim: usize) -> Self {
        SubspaceBasis {
            field,
            ambient_dim,
            vectors: (0..ambient_dim).map(|i| SparseVector::unit(field, ambient_dim, i)).collect(),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of arbitrary vectors, reduced.
    pub fn span(field: FieldSpec, ambient_dim: usize, vectors: &[SparseVector]) -> Self {
        fn go<A: Arith>(ar: &A, field: FieldSpec, dim: usize, vectors: &[SparseVector]) -> SubspaceBasis {
            let ech = eliminate(ar, to_rows(ar, vectors), dim, dim, true);
            let mut pairs: Vec<(usize, SparseVector)> =
                ech.pivots.iter().map(|(c, row)| (*c, from_row(ar, dim, row))).collect();
            pairs.sort_by_key(|p| p.0);
            SubspaceBasis {
                field,
                ambient_dim: dim,
                pivots: pairs.iter().map(|p| p.0).collect(),
                vectors: pairs.into_iter().map(|p| p.1).collect(),
            }
        }
        assert!(vectors.iter().all(|v| v.dim() == ambient_dim));
        with_arith(field, |a| go(a, field, ambient_dim, vectors), |a| go(a, field, ambient_dim, vectors))
    }

    /// Column space of `m`.
    pub fn image(m: &Matrix) -> Self {
        SubspaceBasis::span(m.field(), m.rows(), m.columns())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[SparseVector] {
        &self.vectors
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as the columns of an `ambient_dim x dim` matrix.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.ambient_dim, self.vectors.clone())
    }

    /// Coordinates of `v` in this basis, or `None` when `v` lies outside.
    pub fn coordinates(&self, v: &SparseVector) -> Option<Vec<Scalar>> {
        assert_eq!(v.dim(), self.ambient_dim);
        let coords: Vec<Scalar> =
            self.pivots.iter().map(|p| v.get(*p).cloned().unwrap_or_else(|| self.field.zero())).collect();
        let mut rest = v.clone();
        for (c, b) in coords.iter().zip(&self.vectors) {
            if !c.is_zero() {
                rest = rest.add_scaled(&-c, b);
            }
        }
        rest.is_zero().then_some(coords)
    }

    pub fn contains(&self, v: &SparseVector) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coordinates of the ambient space not used as pivots; the corresponding
    /// unit vectors span a complement.
    pub fn complement_coordinates(&self) -> Vec<usize> {
        let mut used = vec![false; self.ambient_dim];
        for &p in &self.pivots {
            used[p] = true;
        }
        (0..self.ambient_dim).filter(|&i| !used[i]).collect()
    }

    /// Matrix of the projection onto the quotient by this subspace, written in
    /// the basis of complement unit vectors.
    pub fn quotient_projection(&self) -> Matrix {
        let comp = self.complement_coordinates();
        let mut pos = vec![usize::MAX; self.ambient_dim];
        for (k, &c) in comp.iter().enumerate() {
            pos[c] = k;
        }
        let mut trip = Vec::new();
        for (k, &c) in comp.iter().enumerate() {
            trip.push((k, c, self.field.one()));
        }
        for (b, &p) in self.vectors.iter().zip(&self.pivots) {
            for (i, v) in b.entries() {
                if *i != p {
                    debug_assert!(pos[*i] != usize::MAX);
                    trip.push((pos[*i], p, -v));
                }
            }
        }
        Matrix::from_triplets(self.field, comp.len(), self.ambient_dim, trip)
    }

    pub fn is_subspace_of(&self, other: &SubspaceBasis) -> bool {
        self.vectors.iter().all(|v| other.contains(v))
    }

    /// Sum of two subspaces.
    pub fn sum(&self, other: &SubspaceBasis) -> SubspaceBasis {
        let mut all = self.vectors.clone();
        all.extend(other.vectors.iter().cloned());
        SubspaceBasis::span(self.field, self.ambient_dim, &all)
    }
}

fn reduce_rows<A: Arith>(ar: &A, m: &Matrix, extra: Option<&SparseVector>) -> Echelon<A::E> {
    let rows = m.row_vectors();
    let mut rows = to_rows(ar, &rows);
    let eligible = m.cols();
    let ncols = if extra.is_some() { m.cols() + 1 } else { m.cols() };
    if let Some(b) = extra {
        for (i, v) in b.entries() {
            rows[*i].push((eligible, ar.from_scalar(v)));
        }
    }
    eliminate(ar, rows, ncols, eligible, true)
}

/// Basis of the null space of `m`, one vector per free column.
pub fn kernel_basis(m: &Matrix) -> SubspaceBasis {
    fn go<A: Arith>(ar: &A, m: &Matrix) -> SubspaceBasis {
        let n = m.cols();
        let ech = reduce_rows(ar, m, None);
        let mut is_pivot = vec![false; n];
        for (c, _) in &ech.pivots {
            is_pivot[*c] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut pos = vec![usize::MAX; n];
        for (k, &f) in free.iter().enumerate() {
            pos[f] = k;
        }
        let one = m.field().one();
        let mut pairs: Vec<Vec<(usize, Scalar)>> = free.iter().map(|&f| vec![(f, one.clone())]).collect();
        for (pc, row) in &ech.pivots {
            for (c, v) in row {
                if *c != *pc {
                    pairs[pos[*c]].push((*pc, ar.to_scalar(&ar.neg(v))));
                }
            }
        }
        let vectors = pairs.into_iter().map(|p| SparseVector::from_pairs(n, p)).collect();
        SubspaceBasis { field: m.field(), ambient_dim: n, vectors, pivots: free }
    }
    with_arith(m.field(), |a| go(a, m), |a| go(a, m))
}

/// Some `x` with `m x = b`, or `None` when the system is inconsistent.
pub fn solve(m: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: b.len() });
    }
    Ok(solve_sparse(m, &SparseVector::from_dense(b)).map(|x| x.to_dense(m.field())))
}

pub fn solve_sparse(m: &Matrix, b: &SparseVector) -> Option<SparseVector> {
    fn go<A: Arith>(ar: &A, m: &Matrix, b: &SparseVector) -> Option<SparseVector> {
        let ech = reduce_rows(ar, m, Some(b));
        if !ech.stuck.is_empty() {
            return None;
        }
        let bcol = m.cols();
        let pairs = ech
            .pivots
            .iter()
            .filter_map(|(pc, row)| row.last().filter(|(c, _)| *c == bcol).map(|(_, v)| (*pc, ar.to_scalar(v))));
        Some(SparseVector::from_pairs(m.cols(), pairs))
    }
    assert_eq!(b.dim(), m.rows());
    with_arith(m.field(), |a| go(a, m, b), |a| go(a, m, b))
}

/// Solves `m X = B` column by column; `None` if any column is inconsistent.
pub fn solve_many(m: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(m.rows(), b.rows());
    let cols: Option<Vec<SparseVector>> = b.columns().iter().map(|c| solve_sparse(m, c)).collect();
    cols.map(|c| Matrix::from_columns(m.field(), m.cols(), c))
}

/// Matrix of the tensor product map in lexicographic basis order.
pub fn kronecker(a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.field(), b.field());
    let (rb, cb) = (b.rows(), b.cols());
    let trip: Vec<(usize, usize, Scalar)> = a
        .triplets()
        .flat_map(|(ra, ca, va)| b.triplets().map(move |(r, c, v)| (ra * rb + r, ca * cb + c, va * v)))
        .collect();
    Matrix::from_triplets(a.field(), a.rows() * rb, a.cols() * cb, trip)
}

/// Dimensions of the cohomology of a cochain complex given by its maps
/// `d_i : C^i -> C^{i+1}` and the term dimensions.
pub fn cohomology_dims(dims: &[usize], maps: &[Matrix]) -> Vec<usize> {
    let ranks: Vec<usize> = maps.iter().map(rank).collect();
    (0..dims.len())
        .map(|i| {
            let out = ranks.get(i).copied().unwrap_or(0);
            let inc = if i == 0 { 0 } else { ranks.get(i - 1).copied().unwrap_or(0) };
            dims[i] - out - inc
        })
        .collect()
}
