use std::collections::BTreeMap;

use serde::Serialize;

use crate::coalg::{Coalgebra, GradedCoalgebra};
use crate::error::{Error, Result};
use crate::exactlin::{kronecker, FieldSpec, Matrix, Scalar, SparseVector, SubspaceBasis};

/// A finite-dimensional unital algebra given by structure constants
/// `e_a e_b = products[a][b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    field: FieldSpec,
    dim: usize,
    unit: SparseVector,
    products: Vec<Vec<SparseVector>>,
    augmentation: Option<Vec<Scalar>>,
    grading: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraReport {
    pub associative: bool,
    pub unital: bool,
    pub augmented: bool,
}

/// Which factor order the dual multiplication uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Convention {
    /// `(fg)(c) = f(c_(2)) g(c_(1))`.
    #[default]
    Reversed,
    /// `(fg)(c) = f(c_(1)) g(c_(2))`.
    Sweedler,
}

impl Algebra {
    pub fn new(
        field: FieldSpec,
        dim: usize,
        unit: SparseVector,
        products: Vec<Vec<SparseVector>>,
        augmentation: Option<Vec<Scalar>>,
        grading: Option<Vec<usize>>,
    ) -> Result<Self> {
        let bad = |m: &str| Error::Schema { location: "algebra".into(), message: m.into() };
        if dim == 0 || unit.dim() != dim {
            return Err(bad("unit has the wrong dimension"));
        }
        if products.len() != dim || products.iter().any(|r| r.len() != dim || r.iter().any(|v| v.dim() != dim)) {
            return Err(bad("multiplication table has the wrong shape"));
        }
        if augmentation.as_ref().is_some_and(|g| g.len() != dim) || grading.as_ref().is_some_and(|g| g.len() != dim) {
            return Err(bad("augmentation or grading has the wrong length"));
        }
        Ok(Algebra { field, dim, unit, products, augmentation, grading })
    }

    pub fn ground(field: FieldSpec) -> Self {
        let one = SparseVector::unit(field, 1, 0);
        Algebra::new(field, 1, one.clone(), vec![vec![one]], Some(vec![field.one()]), Some(vec![0])).unwrap()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &SparseVector {
        &self.unit
    }

    pub fn product(&self, a: usize, b: usize) -> &SparseVector {
        &self.products[a][b]
    }

    pub fn augmentation(&self) -> Option<&[Scalar]> {
        self.augmentation.as_deref()
    }

    pub fn grading(&self) -> Option<&[usize]> {
        self.grading.as_deref()
    }

    pub fn with_grading(mut self, grading: Option<Vec<usize>>) -> Result<Self> {
        if grading.as_ref().is_some_and(|g| g.len() != self.dim) {
            return Err(Error::DimensionMismatch { expected: self.dim, found: grading.map_or(0, |g| g.len()) });
        }
        self.grading = grading;
        Ok(self)
    }

    pub fn mul(&self, x: &SparseVector, y: &SparseVector) -> SparseVector {
        let mut acc = SparseVector::zero(self.dim);
        for (a, s) in x.entries() {
            for (b, t) in y.entries() {
                acc = acc.add_scaled(&(s * t), &self.products[*a][*b]);
            }
        }
        acc
    }

    /// Matrix of `x ↦ e_a x`.
    pub fn left_matrix(&self, a: usize) -> Matrix {
        Matrix::from_columns(self.field, self.dim, self.products[a].clone())
    }

    /// Matrix of `x ↦ x e_b`.
    pub fn right_matrix(&self, b: usize) -> Matrix {
        Matrix::from_columns(self.field, self.dim, (0..self.dim).map(|a| self.products[a][b].clone()).collect())
    }

    /// Matrix `A⊗A → A`, columns `a * dim + b`.
    pub fn multiplication_matrix(&self) -> Matrix {
        let cols = self.products.iter().flat_map(|r| r.iter().cloned()).collect();
        Matrix::from_columns(self.field, self.dim, cols)
    }

    pub fn is_associative(&self) -> bool {
        let m = self.multiplication_matrix();
        let id = Matrix::identity(self.field, self.dim);
        m.mul(&kronecker(&m, &id)) == m.mul(&kronecker(&id, &m))
    }

    pub fn is_unital(&self) -> bool {
        (0..self.dim).all(|a| {
            let e = SparseVector::unit(self.field, self.dim, a);
            self.mul(&self.unit, &e) == e && self.mul(&e, &self.unit) == e
        })
    }

    /// The augmentation is an algebra map to k.
    pub fn is_augmented(&self) -> bool {
        let Some(g) = &self.augmentation else { return false };
        let eval = |v: &SparseVector| v.entries().iter().fold(self.field.zero(), |acc, (i, s)| acc + &g[*i] * s);
        eval(&self.unit).is_one()
            && (0..self.dim).all(|a| (0..self.dim).all(|b| eval(&self.products[a][b]) == &g[a] * &g[b]))
    }

    pub fn validate(&self) -> AlgebraReport {
        AlgebraReport { associative: self.is_associative(), unital: self.is_unital(), augmented: self.is_augmented() }
    }

    pub fn opposite(&self) -> Algebra {
        let products = (0..self.dim).map(|a| (0..self.dim).map(|b| self.products[b][a].clone()).collect()).collect();
        Algebra { products, ..self.clone() }
    }

    /// Kernel of the augmentation.
    pub fn augmentation_ideal(&self) -> Result<SubspaceBasis> {
        let g = self.augmentation.as_ref().ok_or_else(|| Error::Invalid("algebra has no augmentation".into()))?;
        let row = Matrix::from_triplets(self.field, 1, self.dim, g.iter().enumerate().map(|(i, s)| (0, i, s.clone())));
        Ok(crate::exactlin::kernel_basis(&row))
    }
}

/// `C*` with dual basis `e^t`: `e^a e^b = Σ_t Σ_{(b,a,c) ∈ μ(e_t)} c e^t` under
/// [`Convention::Reversed`]. Unit ε, augmentation `e^t ↦ [t = g]`.
pub fn dual_algebra(c: &Coalgebra) -> Algebra {
    dual_algebra_with(c, Convention::Reversed)
}

pub fn dual_algebra_with(c: &Coalgebra, convention: Convention) -> Algebra {
    let f = c.field();
    let n = c.dim();
    let mut table: Vec<Vec<BTreeMap<usize, Scalar>>> = vec![vec![BTreeMap::new(); n]; n];
    for t in 0..n {
        for (i, j, s) in c.comul(t) {
            let (a, b) = match convention {
                Convention::Reversed => (*j, *i),
                Convention::Sweedler => (*i, *j),
            };
            *table[a][b].entry(t).or_insert_with(|| f.zero()) += s;
        }
    }
    let products = table.into_iter().map(|r| r.into_iter().map(|m| SparseVector::from_pairs(n, m)).collect()).collect();
    let unit = SparseVector::from_dense(c.counit());
    let augmentation = (0..n).map(|t| if t == c.grouplike() { f.one() } else { f.zero() }).collect();
    Algebra::new(f, n, unit, products, Some(augmentation), c.grading().map(<[usize]>::to_vec)).unwrap()
}

/// A positively graded connected algebra truncated at degree `bound`.
///
/// `component(p, q)` is the matrix of `A_p ⊗ A_q → A_{p+q}`, columns indexed
/// by `a * dims[q] + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    field: FieldSpec,
    bound: usize,
    dims: Vec<usize>,
    components: BTreeMap<(usize, usize), Matrix>,
}

impl GradedAlgebra {
    /// Missing components with `p = 0` or `q = 0` default to the identity, others to zero.
    pub fn new(field: FieldSpec, dims: Vec<usize>, mut components: BTreeMap<(usize, usize), Matrix>) -> Result<Self> {
        let bad = |m: String| Error::Schema { location: "graded algebra".into(), message: m };
        if dims.first() != Some(&1) {
            return Err(bad("degree-0 component must be one-dimensional".into()));
        }
        let bound = dims.len() - 1;
        for (&(p, q), m) in &components {
            if p + q > bound {
                return Err(bad(format!("component ({p},{q}) beyond the truncation bound {bound}")));
            }
            if m.cols() != dims[p] * dims[q] || m.rows() != dims[p + q] || m.field() != field {
                return Err(bad(format!("component ({p},{q}) has the wrong shape or field")));
            }
        }
        for j in 0..=bound {
            for p in 0..=j {
                let q = j - p;
                components.entry((p, q)).or_insert_with(|| {
                    if p == 0 || q == 0 {
                        Matrix::identity(field, dims[j])
                    } else {
                        Matrix::zero(field, dims[j], dims[p] * dims[q])
                    }
                });
            }
        }
        Ok(GradedAlgebra { field, bound, dims, components })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn component(&self, p: usize, q: usize) -> &Matrix {
        &self.components[&(p, q)]
    }

    pub fn components(&self) -> &BTreeMap<(usize, usize), Matrix> {
        &self.components
    }

    /// The free associative algebra on m letters, words of length ≤ bound
    /// in lexicographic order, multiplied by concatenation.
    pub fn free(m: usize, bound: usize, field: FieldSpec) -> Self {
        let dims: Vec<usize> = (0..=bound).map(|j| m.pow(j as u32)).collect();
        let comps = (0..=bound)
            .flat_map(|j| (0..=j).map(move |p| (p, j - p)))
            .map(|(p, q)| ((p, q), Matrix::identity(field, dims[p + q])))
            .collect();
        GradedAlgebra::new(field, dims, comps).unwrap()
    }

    pub fn is_associative(&self) -> bool {
        let f = self.field;
        (0..=self.bound).all(|j| {
            (0..=j).all(|p| {
                (0..=(j - p)).all(|q| {
                    let r = j - p - q;
                    let left = self.component(p + q, r).mul(&kronecker(self.component(p, q), &Matrix::identity(f, self.dims[r])));
                    let right = self.component(p, q + r).mul(&kronecker(&Matrix::identity(f, self.dims[p]), self.component(q, r)));
                    left == right
                })
            })
        })
    }

    pub fn is_unital(&self) -> bool {
        (0..=self.bound).all(|j| {
            let id = Matrix::identity(self.field, self.dims[j]);
            *self.component(0, j) == id && *self.component(j, 0) == id
        })
    }

    pub fn validate(&self) -> AlgebraReport {
        let unital = self.is_unital();
        AlgebraReport { associative: self.is_associative(), unital, augmented: unital }
    }

    pub fn opposite(&self) -> Self {
        let comps = self
            .components
            .keys()
            .map(|&(p, q)| {
                let src = &self.components[&(q, p)];
                let (dp, dq) = (self.dims[p], self.dims[q]);
                // columns of src are (b, a) with b in A_q, a in A_p
                let cols: Vec<usize> = (0..dp * dq).map(|c| (c % dq) * dp + c / dq).collect();
                ((p, q), src.select_columns(&cols))
            })
            .collect();
        GradedAlgebra { field: self.field, bound: self.bound, dims: self.dims.clone(), components: comps }
    }

    pub fn offset(&self, j: usize) -> usize {
        self.dims[..j].iter().sum()
    }

    /// The finite-dimensional algebra `⊕_{j ≤ bound} A_j` (products landing
    /// beyond the bound vanish), graded and augmented.
    pub fn flatten(&self) -> Algebra {
        let f = self.field;
        let n: usize = self.dims.iter().sum();
        let offsets: Vec<usize> = (0..=self.bound).map(|j| self.offset(j)).collect();
        let grading: Vec<usize> = (0..=self.bound).flat_map(|j| std::iter::repeat_n(j, self.dims[j])).collect();
        let mut table: Vec<Vec<Vec<(usize, Scalar)>>> = vec![vec![Vec::new(); n]; n];
        for (&(p, q), m) in &self.components {
            let dq = self.dims[q];
            for (r, c, s) in m.triplets() {
                table[offsets[p] + c / dq][offsets[q] + c % dq].push((offsets[p + q] + r, s.clone()));
            }
        }
        let products = table.into_iter().map(|r| r.into_iter().map(|v| SparseVector::from_pairs(n, v)).collect()).collect();
        let mut aug = vec![f.zero(); n];
        aug[0] = f.one();
        Algebra::new(f, n, SparseVector::unit(f, n, 0), products, Some(aug), Some(grading)).unwrap()
    }
}

/// Degreewise linear duality between graded coalgebras and graded algebras,
/// with the factor swap of the dual multiplication.
pub trait GradedDual {
    type Output;
    fn graded_dual(&self) -> Self::Output;
}

/// Row selection swapping tensor factors: entry `u * dx + v` is `v * dy + u`.
fn swap_index(dx: usize, dy: usize) -> Vec<usize> {
    (0..dx * dy).map(|k| (k % dx) * dy + k / dx).collect()
}

impl GradedDual for GradedCoalgebra {
    type Output = GradedAlgebra;

    /// `m_{p,q}[t, a * d_q + b] = Δ_{q,p}[b * d_p + a, t]`.
    fn graded_dual(&self) -> GradedAlgebra {
        let dims = self.dims().to_vec();
        let comps = self
            .components()
            .keys()
            .map(|&(p, q)| {
                // rows of Δ_{q,p} are (b, a); reorder to (a, b)
                ((p, q), self.component(q, p).select_rows(&swap_index(dims[q], dims[p])).transpose())
            })
            .collect();
        GradedAlgebra::new(self.field(), dims, comps).unwrap()
    }
}

impl GradedDual for GradedAlgebra {
    type Output = GradedCoalgebra;

    /// `Δ_{q,p}[b * d_p + a, t] = m_{p,q}[t, a * d_q + b]`.
    fn graded_dual(&self) -> GradedCoalgebra {
        let dims = self.dims.clone();
        let comps = self
            .components
            .keys()
            .map(|&(q, p)| {
                // rows of m_{p,q}^T are (a, b); reorder to (b, a)
                ((q, p), self.component(p, q).transpose().select_rows(&swap_index(dims[p], dims[q])))
            })
            .collect();
        GradedCoalgebra::new(self.field, dims, comps).unwrap()
    }
}

pub fn graded_dual<T: GradedDual>(x: &T) -> T::Output {
    x.graded_dual()
}

/// The truncation at `bound` of `k⟨x_1..x_m⟩ / (R)` for `R ⊆ V⊗V`, `V = k^m`,
/// built degree by degree. The basis of each `A_j` consists of the words
/// (lexicographic indices) not among the pivots of the ideal.
pub fn quadratic_algebra(m: usize, relations: &SubspaceBasis, bound: usize) -> Result<GradedAlgebra> {
    let f = relations.field();
    if relations.ambient_dim() != m * m {
        return Err(Error::DimensionMismatch { expected: m * m, found: relations.ambient_dim() });
    }
    let words = |j: usize| m.pow(j as u32);
    // I_j = Σ_{a + 2 + b = j} F_a ⊗ R ⊗ F_b inside F_j.
    let mut quotients: Vec<(Matrix, Vec<usize>)> = Vec::with_capacity(bound + 1);
    for j in 0..=bound {
        let mut gens = Vec::new();
        if j >= 2 {
            for a in 0..=j - 2 {
                let b = j - 2 - a;
                let (wa, wb) = (words(a), words(b));
                for r in relations.vectors() {
                    for x in 0..wa {
                        for y in 0..wb {
                            let pairs: Vec<(usize, Scalar)> =
                                r.entries().iter().map(|(k, s)| ((x * m * m + k) * wb + y, s.clone())).collect();
                            gens.push(SparseVector::from_pairs(words(j), pairs));
                        }
                    }
                }
            }
        }
        let ideal = SubspaceBasis::span(f, words(j), &gens);
        quotients.push((ideal.quotient_projection(), ideal.complement_coordinates()));
    }
    let dims: Vec<usize> = quotients.iter().map(|(_, c)| c.len()).collect();
    let mut comps = BTreeMap::new();
    for j in 0..=bound {
        for p in 0..=j {
            let q = j - p;
            let (proj, _) = &quotients[j];
            let (_, bp) = &quotients[p];
            let (_, bq) = &quotients[q];
            let cols: Vec<SparseVector> = bp
                .iter()
                .flat_map(|&u| bq.iter().map(move |&v| u * words(q) + v))
                .map(|w| proj.column(w).clone())
                .collect();
            comps.insert((p, q), Matrix::from_columns(f, dims[j], cols));
        }
    }
    GradedAlgebra::new(f, dims, comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalg::GradedCoalgebra;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn rels(m: usize, vecs: &[&[(usize, i64)]]) -> SubspaceBasis {
        let v: Vec<SparseVector> =
            vecs.iter().map(|r| SparseVector::from_pairs(m * m, r.iter().map(|(k, c)| (*k, q().from_i64(*c))))).collect();
        SubspaceBasis::span(q(), m * m, &v)
    }

    /// Words of length j over m letters avoiding the listed two-letter factors.
    fn count_avoiding(m: usize, j: usize, bad: &[(usize, usize)]) -> usize {
        let mut count = 0;
        for w in 0..m.pow(j as u32) {
            let letters: Vec<usize> = (0..j).rev().map(|k| (w / m.pow(k as u32)) % m).collect();
            if letters.windows(2).all(|p| !bad.contains(&(p[0], p[1]))) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn dual_of_ground_and_truncated_polynomials() {
        let k = dual_algebra(&Coalgebra::ground(q()));
        assert_eq!(k.dim(), 1);
        assert!(k.validate().associative && k.is_unital() && k.is_augmented());
        let a = dual_algebra(&GradedCoalgebra::tensor(1, 2, q()).flatten());
        assert!(a.is_associative() && a.is_unital() && a.is_augmented());
        // e^1 e^1 = e^2, e^1 e^2 = 0
        assert_eq!(a.product(1, 1), &SparseVector::unit(q(), 3, 2));
        assert!(a.product(1, 2).is_zero());
        assert_eq!(a, a.opposite());
    }

    #[test]
    fn dual_of_tensor_coalgebra_reverses_words() {
        let c = GradedCoalgebra::tensor(2, 2, q()).flatten();
        let a = dual_algebra(&c);
        // basis: 0 empty, 1 x, 2 y, 3 xx, 4 xy, 5 yx, 6 yy
        assert_eq!(a.product(1, 2), &SparseVector::unit(q(), 7, 5));
        assert_eq!(a.product(2, 1), &SparseVector::unit(q(), 7, 4));
        let s = dual_algebra_with(&c, Convention::Sweedler);
        assert_eq!(s.product(1, 2), &SparseVector::unit(q(), 7, 4));
    }

    #[test]
    fn dual_of_opposite_is_opposite_algebra() {
        let c = GradedCoalgebra::tensor(2, 3, q()).flatten();
        assert_eq!(dual_algebra(&c.opposite()), dual_algebra(&c).opposite());
    }

    #[test]
    fn graded_dual_round_trip_and_flatten() {
        for g in [GradedCoalgebra::tensor(2, 3, q()), GradedCoalgebra::symmetric(2, 3, q()).unwrap()] {
            let a = graded_dual(&g);
            assert!(a.is_associative() && a.is_unital());
            assert_eq!(graded_dual(&a), g);
            assert_eq!(a.flatten(), dual_algebra(&g.flatten()));
        }
    }

    #[test]
    fn graded_dual_of_symmetric_is_polynomial() {
        let a = graded_dual(&GradedCoalgebra::symmetric(2, 3, q()).unwrap());
        let poly = quadratic_algebra(2, &rels(2, &[&[(1, 1), (2, -1)]]), 3).unwrap();
        assert_eq!(a.dims(), poly.dims());
        // monomial bases in the same order: both are commutative with x^a y^b ordered by sequences
        assert_eq!(a, poly);
    }

    #[test]
    fn free_algebra_matches_tensor_dual_up_to_reversal() {
        let a = graded_dual(&GradedCoalgebra::tensor(2, 3, q()));
        assert_eq!(a.opposite(), GradedAlgebra::free(2, 3, q()));
    }

    #[test]
    fn quadratic_algebra_dims() {
        let poly = quadratic_algebra(2, &rels(2, &[&[(1, 1), (2, -1)]]), 4).unwrap();
        assert_eq!(poly.dims(), &[1, 2, 3, 4, 5]);
        assert!(poly.is_associative());
        let all = SubspaceBasis::whole(q(), 4);
        assert_eq!(quadratic_algebra(2, &all, 4).unwrap().dims(), &[1, 2, 0, 0, 0]);
        let xy = quadratic_algebra(2, &rels(2, &[&[(1, 1)]]), 3).unwrap();
        let oracle: Vec<usize> = (0..=3).map(|j| count_avoiding(2, j, &[(0, 1)])).collect();
        assert_eq!(xy.dims(), oracle.as_slice());
        assert_eq!(oracle, vec![1, 2, 3, 4]);
        assert!(xy.is_associative() && xy.is_unital());
    }

    #[test]
    fn graded_opposite_is_involutive() {
        let a = quadratic_algebra(2, &rels(2, &[&[(1, 1)]]), 3).unwrap();
        assert_eq!(a.opposite().opposite(), a);
        assert_eq!(a.opposite().flatten(), a.flatten().opposite());
    }
}
