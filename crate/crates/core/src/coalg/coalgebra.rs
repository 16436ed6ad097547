use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, solve_many, FieldSpec, Matrix, Scalar, SparseVector, SubspaceBasis};

/// One term `c * e_i ⊗ e_j` of a comultiplication or coaction.
pub type Term = (usize, usize, Scalar);

/// Sorts, merges duplicates and drops zero coefficients.
pub(crate) fn normalize_terms(terms: impl IntoIterator<Item = Term>) -> Vec<Term> {
    let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
    for (i, j, c) in terms {
        match acc.get_mut(&(i, j)) {
            Some(x) => *x += &c,
            None => {
                acc.insert((i, j), c);
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((i, j), c)| (i, j, c)).collect()
}

/// A finite-dimensional coaugmented coalgebra presented by structure constants.
///
/// `comul[t]` lists the terms of `μ(e_t)`. The coaugmentation sends 1 to the
/// basis vector `e_grouplike`. An optional grading assigns an internal degree
/// to each basis vector; it is carried through by `flatten` and respected by
/// the comultiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coalgebra {
    field: FieldSpec,
    dim: usize,
    grouplike: usize,
    counit: Vec<Scalar>,
    comul: Vec<Vec<Term>>,
    grading: Option<Vec<usize>>,
}

/// Flags computed by [`Coalgebra::validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub coassociative: bool,
    pub counital: bool,
    pub coaugmented: bool,
    pub conilpotent: bool,
    pub cocommutative: bool,
}

impl ValidationReport {
    /// Everything except cocommutativity.
    pub fn all_required(&self) -> bool {
        self.coassociative && self.counital && self.coaugmented && self.conilpotent
    }
}

/// Ascending chain `F_0 ⊆ F_1 ⊆ …` of subspaces of a coalgebra.
#[derive(Clone, Debug)]
pub struct FiltrationChain {
    pub subspaces: Vec<SubspaceBasis>,
    pub exhaustive: bool,
}

impl FiltrationChain {
    pub fn dims(&self) -> Vec<usize> {
        self.subspaces.iter().map(|s| s.dim()).collect()
    }
}

impl Coalgebra {
    /// Checks structural well-formedness only; axioms are checked by `validate`.
    pub fn new(
        field: FieldSpec,
        dim: usize,
        grouplike: usize,
        counit: Vec<Scalar>,
        comul: Vec<Vec<Term>>,
        grading: Option<Vec<usize>>,
    ) -> Result<Self> {
        let bad = |m: String| Error::Schema { location: "coalgebra".into(), message: m };
        if dim == 0 {
            return Err(bad("dimension must be positive".into()));
        }
        if grouplike >= dim {
            return Err(bad(format!("grouplike index {grouplike} out of range")));
        }
        if counit.len() != dim {
            return Err(bad(format!("counit has length {}, expected {dim}", counit.len())));
        }
        if comul.len() != dim {
            return Err(bad(format!("comultiplication lists {} basis vectors, expected {dim}", comul.len())));
        }
        if let Some(g) = &grading {
            if g.len() != dim {
                return Err(bad(format!("grading has length {}, expected {dim}", g.len())));
            }
        }
        if counit.iter().any(|s| !field.contains(s)) {
            return Err(bad("counit scalar outside the field".into()));
        }
        let mut normalized = Vec::with_capacity(dim);
        for (t, terms) in comul.into_iter().enumerate() {
            for (i, j, c) in &terms {
                if *i >= dim || *j >= dim {
                    return Err(bad(format!("basis index out of range in μ(e_{t})")));
                }
                if !field.contains(c) {
                    return Err(bad(format!("scalar outside the field in μ(e_{t})")));
                }
            }
            normalized.push(normalize_terms(terms));
        }
        Ok(Coalgebra { field, dim, grouplike, counit, comul: normalized, grading })
    }

    /// The one-dimensional coalgebra k.
    pub fn ground(field: FieldSpec) -> Self {
        Coalgebra::new(field, 1, 0, vec![field.one()], vec![vec![(0, 0, field.one())]], Some(vec![0])).unwrap()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grouplike(&self) -> usize {
        self.grouplike
    }

    pub fn counit(&self) -> &[Scalar] {
        &self.counit
    }

    pub fn comul(&self, t: usize) -> &[Term] {
        &self.comul[t]
    }

    pub fn grading(&self) -> Option<&[usize]> {
        self.grading.as_deref()
    }

    pub fn with_grading(mut self, grading: Option<Vec<usize>>) -> Result<Self> {
        if let Some(g) = &grading {
            if g.len() != self.dim {
                return Err(Error::Schema { location: "grading".into(), message: "length mismatch".into() });
            }
        }
        self.grading = grading;
        Ok(self)
    }

    /// Matrix of μ: C → C⊗C, rows indexed by `i * dim + j`.
    pub fn comul_matrix(&self) -> Matrix {
        let n = self.dim;
        Matrix::from_triplets(
            self.field,
            n * n,
            n,
            self.comul.iter().enumerate().flat_map(|(t, terms)| terms.iter().map(move |(i, j, c)| (i * n + j, t, c.clone()))),
        )
    }

    fn counit_row(&self) -> Matrix {
        Matrix::from_triplets(self.field, 1, self.dim, self.counit.iter().enumerate().map(|(t, c)| (0, t, c.clone())))
    }

    pub fn is_coassociative(&self) -> bool {
        let mu = self.comul_matrix();
        let id = Matrix::identity(self.field, self.dim);
        let left = crate::exactlin::kronecker(&mu, &id).mul(&mu);
        let right = crate::exactlin::kronecker(&id, &mu).mul(&mu);
        left == right
    }

    pub fn is_counital(&self) -> bool {
        let mu = self.comul_matrix();
        let id = Matrix::identity(self.field, self.dim);
        let eps = self.counit_row();
        crate::exactlin::kronecker(&eps, &id).mul(&mu) == id && crate::exactlin::kronecker(&id, &eps).mul(&mu) == id
    }

    /// μ(g) = g⊗g and ε(g) = 1.
    pub fn is_coaugmented(&self) -> bool {
        let g = self.grouplike;
        self.counit[g].is_one() && self.comul[g].len() == 1 && {
            let (i, j, c) = &self.comul[g][0];
            *i == g && *j == g && c.is_one()
        }
    }

    pub fn is_cocommutative(&self) -> bool {
        self.comul.iter().all(|terms| {
            let swapped = normalize_terms(terms.iter().map(|(i, j, c)| (*j, *i, c.clone())));
            &swapped == terms
        })
    }

    /// The left-right opposite coalgebra: same space and counit, factors swapped.
    pub fn opposite(&self) -> Coalgebra {
        Coalgebra {
            field: self.field,
            dim: self.dim,
            grouplike: self.grouplike,
            counit: self.counit.clone(),
            comul: self
                .comul
                .iter()
                .map(|terms| normalize_terms(terms.iter().map(|(i, j, c)| (*j, *i, c.clone()))))
                .collect(),
            grading: self.grading.clone(),
        }
    }

    /// Indices of the basis of `C_+ = C/γ(k)`: every basis index but the grouplike.
    pub fn reduced_basis(&self) -> Vec<usize> {
        (0..self.dim).filter(|&t| t != self.grouplike).collect()
    }

    /// Position of a basis index inside the reduced basis.
    pub fn reduced_position(&self, t: usize) -> Option<usize> {
        match t.cmp(&self.grouplike) {
            std::cmp::Ordering::Less => Some(t),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(t - 1),
        }
    }

    /// Reduced comultiplication `C_+ → C_+ ⊗ C_+` in reduced-basis indices.
    pub fn reduced_comul(&self) -> Vec<Vec<Term>> {
        self.reduced_basis()
            .into_iter()
            .map(|t| {
                self.comul[t]
                    .iter()
                    .filter_map(|(i, j, c)| {
                        Some((self.reduced_position(*i)?, self.reduced_position(*j)?, c.clone()))
                    })
                    .collect()
            })
            .collect()
    }

    /// Degrees of the reduced basis, when graded.
    pub fn reduced_grading(&self) -> Option<Vec<usize>> {
        self.grading.as_ref().map(|g| self.reduced_basis().into_iter().map(|t| g[t]).collect())
    }

    /// `F_m C = ker(C → C^{⊗m+1} → C_+^{⊗m+1})`, computed recursively through
    /// `D_m = μ̄^{-1}(D_{m-1} ⊗ C_+)` inside `C_+`.
    pub fn coaugmentation_filtration(&self) -> Result<FiltrationChain> {
        if !self.is_coaugmented() {
            return Err(Error::NotCoaugmented(format!("μ(e_{0}) ≠ e_{0}⊗e_{0} or ε(e_{0}) ≠ 1", self.grouplike)));
        }
        let n = self.dim - 1;
        let red = self.reduced_comul();
        let lift = |d: &SubspaceBasis| -> SubspaceBasis {
            let mut vs: Vec<SparseVector> = vec![SparseVector::unit(self.field, self.dim, self.grouplike)];
            for v in d.vectors() {
                vs.push(SparseVector::from_pairs(
                    self.dim,
                    v.entries().iter().map(|(a, c)| (self.reduced_basis()[*a], c.clone())),
                ));
            }
            SubspaceBasis::span(self.field, self.dim, &vs)
        };
        let mut current = SubspaceBasis::zero(self.field, n);
        let mut chain = vec![lift(&current)];
        for _ in 0..self.dim {
            if current.dim() == n {
                break;
            }
            let q = current.quotient_projection();
            let r = q.rows();
            let mut trip = Vec::new();
            for (a, terms) in red.iter().enumerate() {
                for (b, c, coef) in terms {
                    for (k, v) in q.column(*b).entries() {
                        trip.push((k * n + c, a, v * coef));
                    }
                }
            }
            let m = Matrix::from_triplets(self.field, r * n, n, trip);
            let next = kernel_basis(&m);
            if next.dim() == current.dim() {
                break;
            }
            current = next;
            chain.push(lift(&current));
        }
        let exhaustive = current.dim() == n;
        Ok(FiltrationChain { subspaces: chain, exhaustive })
    }

    pub fn is_conilpotent(&self) -> bool {
        self.coaugmentation_filtration().map(|f| f.exhaustive).unwrap_or(false)
    }

    pub fn validate(&self) -> ValidationReport {
        let coaugmented = self.is_coaugmented();
        ValidationReport {
            coassociative: self.is_coassociative(),
            counital: self.is_counital(),
            coaugmented,
            conilpotent: coaugmented && self.is_conilpotent(),
            cocommutative: self.is_cocommutative(),
        }
    }

    /// Fails unless every required flag holds.
    pub fn require_conilpotent(&self) -> Result<()> {
        let r = self.validate();
        if !r.coassociative || !r.counital {
            return Err(Error::Invalid(format!("coalgebra axioms fail: {r:?}")));
        }
        if !r.coaugmented {
            return Err(Error::NotCoaugmented("designated grouplike is not grouplike".into()));
        }
        if !r.conilpotent {
            return Err(Error::NotConilpotent);
        }
        Ok(())
    }

    /// The isomorphic coalgebra in the basis given by the columns of `p`
    /// (old coordinates). The grouplike column must be the old grouplike unit vector.
    pub fn change_basis(&self, p: &Matrix, grading: Option<Vec<usize>>) -> Result<Coalgebra> {
        let n = self.dim;
        if p.rows() != n || p.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.rows() });
        }
        if p.column(self.grouplike) != &SparseVector::unit(self.field, n, self.grouplike) {
            return Err(Error::Invalid("basis change must fix the grouplike".into()));
        }
        let pinv = solve_many(p, &Matrix::identity(self.field, n))
            .ok_or_else(|| Error::Invalid("basis change matrix is singular".into()))?;
        let mu = self.comul_matrix();
        let new_mu = crate::exactlin::kronecker(&pinv, &pinv).mul(&mu).mul(p);
        let counit: Vec<Scalar> = (0..n)
            .map(|k| {
                p.column(k).entries().iter().fold(self.field.zero(), |acc, (t, c)| acc + &self.counit[*t] * c)
            })
            .collect();
        let comul = (0..n)
            .map(|k| new_mu.column(k).entries().iter().map(|(r, c)| (r / n, r % n, c.clone())).collect())
            .collect();
        Coalgebra::new(self.field, n, self.grouplike, counit, comul, grading)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    /// k ⊕ (dual of Q(i)): a second, simple block that is never killed.
    fn with_simple_block() -> Coalgebra {
        let f = q();
        let one = f.one();
        let comul = vec![
            vec![(0, 0, one.clone())],
            vec![(1, 1, one.clone()), (2, 2, -one.clone())],
            vec![(1, 2, one.clone()), (2, 1, one.clone())],
        ];
        Coalgebra::new(f, 3, 0, vec![one.clone(), one.clone(), f.zero()], comul, None).unwrap()
    }

    fn c2() -> Coalgebra {
        let f = q();
        let one = f.one();
        Coalgebra::new(
            f,
            2,
            0,
            vec![one.clone(), f.zero()],
            vec![vec![(0, 0, one.clone())], vec![(0, 1, one.clone()), (1, 0, one.clone())]],
            None,
        )
        .unwrap()
    }

    #[test]
    fn ground_field_is_valid() {
        let r = Coalgebra::ground(q()).validate();
        assert!(r.all_required() && r.cocommutative);
    }

    #[test]
    fn dual_numbers_dual_is_valid() {
        let r = c2().validate();
        assert!(r.all_required() && r.cocommutative);
        let f = c2().coaugmentation_filtration().unwrap();
        assert_eq!(f.dims(), vec![1, 2]);
        assert!(f.exhaustive);
    }

    #[test]
    fn broken_counit_detected() {
        let f = q();
        let one = f.one();
        let c = Coalgebra::new(
            f,
            2,
            0,
            vec![one.clone(), f.zero()],
            vec![vec![(0, 0, one.clone())], vec![(1, 1, one.clone())]],
            None,
        )
        .unwrap();
        assert!(!c.validate().counital);
    }

    #[test]
    fn simple_block_is_not_conilpotent() {
        let c = with_simple_block();
        let r = c.validate();
        assert!(r.coassociative && r.counital && r.coaugmented);
        assert!(!r.conilpotent);
        let f = c.coaugmentation_filtration().unwrap();
        assert!(!f.exhaustive);
        assert_eq!(f.dims(), vec![1]);
    }

    #[test]
    fn filtration_needs_coaugmentation() {
        let f = q();
        let c = Coalgebra::new(f, 1, 0, vec![f.from_i64(2)], vec![vec![(0, 0, f.from_i64(2))]], None).unwrap();
        assert!(matches!(c.coaugmentation_filtration(), Err(Error::NotCoaugmented(_))));
    }

    #[test]
    fn malformed_input_rejected() {
        let f = q();
        assert!(Coalgebra::new(f, 1, 0, vec![f.one()], vec![vec![(0, 3, f.one())]], None).is_err());
        assert!(Coalgebra::new(f, 2, 0, vec![f.one()], vec![vec![], vec![]], None).is_err());
    }

    #[test]
    fn change_basis_preserves_flags() {
        let f = q();
        let p = Matrix::from_i64(f, &[vec![1, 3], vec![0, 2]]);
        let c = c2().change_basis(&p, None).unwrap();
        assert_eq!(c.validate(), c2().validate());
    }
}
