use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use super::complex::{Bidegree, CobarComplex};
use crate::coalg::Coalgebra;
use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, rank_of_vectors, solve_sparse, Matrix, Scalar, SparseVector, SubspaceBasis};

/// A cocycle in one bidegree of a cobar complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CobarClass {
    pub degree: Bidegree,
    pub cocycle: SparseVector,
}

/// Chosen cocycle representatives for `H` in one bidegree, plus the matrix
/// `[d_in | reps]` used to read off coordinates.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    pub degree: Bidegree,
    pub representatives: Vec<SparseVector>,
    reduction: Matrix,
    boundaries: usize,
}

impl CohomologyBasis {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of a cocycle modulo coboundaries.
    pub fn coordinates(&self, cocycle: &SparseVector) -> Option<Vec<Scalar>> {
        let f = self.reduction.field();
        if self.reduction.cols() == 0 {
            return cocycle.is_zero().then(Vec::new);
        }
        let x = solve_sparse(&self.reduction, cocycle)?.to_dense(f);
        Some(x[self.boundaries..].to_vec())
    }
}

impl CobarComplex {
    fn incoming(&self, b: Bidegree) -> Option<&Matrix> {
        if b.i == 0 {
            None
        } else {
            self.differential(Bidegree::new(b.i - 1, b.j))
        }
    }

    /// Extends the coboundaries by kernel-basis vectors of `d`, in order.
    pub fn cohomology_basis(&self, b: Bidegree) -> Result<CohomologyBasis> {
        let d = self
            .differential(b)
            .ok_or_else(|| Error::Invalid(format!("bidegree ({}, {:?}) outside the computed window", b.i, b.j)))?;
        let f = d.field();
        let n = d.cols();
        let bounds: Vec<SparseVector> = self.incoming(b).map(|m| m.columns().to_vec()).unwrap_or_default();
        let mut span = SubspaceBasis::span(f, n, &bounds);
        let mut reps = Vec::new();
        for z in kernel_basis(d).vectors() {
            if !span.contains(z) {
                span = span.sum(&SubspaceBasis::span(f, n, std::slice::from_ref(z)));
                reps.push(z.clone());
            }
        }
        let mut cols = bounds;
        let boundaries = cols.len();
        cols.extend(reps.iter().cloned());
        Ok(CohomologyBasis { degree: b, representatives: reps, reduction: Matrix::from_columns(f, n, cols), boundaries })
    }

    pub fn class(&self, b: Bidegree, cocycle: SparseVector) -> Result<CobarClass> {
        let d = self.differential(b).ok_or_else(|| Error::Invalid("bidegree outside the computed window".into()))?;
        if cocycle.dim() != d.cols() {
            return Err(Error::DimensionMismatch { expected: d.cols(), found: cocycle.dim() });
        }
        if !d.mul_vector(&cocycle).is_zero() {
            return Err(Error::NotCocycle(b.i));
        }
        Ok(CobarClass { degree: b, cocycle })
    }

    pub fn unit(&self) -> CobarClass {
        let b = Bidegree::new(0, self.is_graded().then_some(0));
        CobarClass { degree: b, cocycle: SparseVector::unit(self.base().field(), 1, 0) }
    }

    /// Concatenation of tensor representatives. The result lies in bidegree
    /// `(i1 + i2, j1 + j2)`, which must be inside the window.
    pub fn ext_product(&self, a: &CobarClass, b: &CobarClass) -> Result<CobarClass> {
        for x in [a, b] {
            self.class(x.degree, x.cocycle.clone())?;
        }
        let target = Bidegree::new(a.degree.i + b.degree.i, a.degree.j.zip(b.degree.j).map(|(x, y)| x + y));
        if target.i > self.imax() || self.jmax().zip(target.j).is_some_and(|(w, j)| j > w) {
            return Err(Error::Invalid(format!("product degree ({}, {:?}) outside the computed window", target.i, target.j)));
        }
        let dim = self.term_dim(target);
        let mut pairs: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (p, u) in a.cocycle.entries() {
            let tp = self.basis_tuple(a.degree, *p);
            for (q, v) in b.cocycle.entries() {
                let mut t = tp.clone();
                t.extend(self.basis_tuple(b.degree, *q));
                let pos = self.position_of(target, &t).expect("concatenated tuple lies in the target cell");
                let e = pairs.entry(pos).or_insert_with(|| u.field().zero());
                *e += &(u * v);
            }
        }
        Ok(CobarClass { degree: target, cocycle: SparseVector::from_pairs(dim, pairs) })
    }

    /// Coordinates of the class of a cocycle in the chosen basis.
    pub fn reduce(&self, basis: &CohomologyBasis, x: &CobarClass) -> Result<Vec<Scalar>> {
        if basis.degree != x.degree {
            return Err(Error::Invalid("class and basis in different bidegrees".into()));
        }
        self.class(x.degree, x.cocycle.clone())?;
        basis.coordinates(&x.cocycle).ok_or(Error::NotCocycle(x.degree.i))
    }

    pub fn is_coboundary(&self, x: &CobarClass) -> Result<bool> {
        let basis = self.cohomology_basis(x.degree)?;
        Ok(self.reduce(&basis, x)?.iter().all(Scalar::is_zero))
    }

    /// Chosen bases and structure constants for products of classes in
    /// degrees `1 ≤ i1, i2` with `i1 + i2 ≤ imax`.
    pub fn ext_algebra(&self) -> Result<ExtAlgebra> {
        let mut bases = BTreeMap::new();
        for b in self.bidegrees().filter(|b| b.i <= self.imax()) {
            let basis = self.cohomology_basis(b)?;
            if basis.dim() > 0 {
                bases.insert(b, basis);
            }
        }
        let mut products = BTreeMap::new();
        for (ba, basis_a) in &bases {
            for (bb, basis_b) in &bases {
                let i = ba.i + bb.i;
                if ba.i == 0 || bb.i == 0 || i > self.imax() {
                    continue;
                }
                let target = Bidegree::new(i, ba.j.zip(bb.j).map(|(x, y)| x + y));
                if self.jmax().zip(target.j).is_some_and(|(w, j)| j > w) {
                    continue;
                }
                for (p, u) in basis_a.representatives.iter().enumerate() {
                    for (q, v) in basis_b.representatives.iter().enumerate() {
                        let prod = self.ext_product(
                            &CobarClass { degree: *ba, cocycle: u.clone() },
                            &CobarClass { degree: *bb, cocycle: v.clone() },
                        )?;
                        let coords = match bases.get(&target) {
                            Some(t) => self.reduce(t, &prod)?,
                            None => Vec::new(),
                        };
                        products.insert(((*ba, p), (*bb, q)), coords);
                    }
                }
            }
        }
        Ok(ExtAlgebra { bases, products })
    }
}

/// Multiplication table of `Ext(k, k)` in chosen bases.
#[derive(Clone, Debug)]
pub struct ExtAlgebra {
    pub bases: BTreeMap<Bidegree, CohomologyBasis>,
    /// `((deg a, index a), (deg b, index b)) ↦ coordinates of a·b`.
    pub products: BTreeMap<((Bidegree, usize), (Bidegree, usize)), Vec<Scalar>>,
}

impl ExtAlgebra {
    pub fn is_commutative(&self) -> bool {
        self.products.iter().all(|((a, b), v)| self.products.get(&(*b, *a)).is_none_or(|w| w == v))
    }
}

/// The tuple reversal `x1⊗…⊗xi ↦ xi⊗…⊗x1` from the cobar complex of C to that
/// of `C^op`, applied to a vector in bidegree `b`.
pub fn reverse_factors(cx: &CobarComplex, op: &CobarComplex, b: Bidegree, v: &SparseVector) -> SparseVector {
    let pairs = v.entries().iter().map(|(k, s)| {
        let mut t = cx.basis_tuple(b, *k);
        t.reverse();
        (op.position_of(b, &t).expect("opposite complex shares the cell bases"), s.clone())
    });
    SparseVector::from_pairs(op.term_dim(b), pairs.collect::<Vec<_>>())
}

/// Outcome of comparing the Ext multiplication of C with the opposite of
/// that of `C^op` through factor reversal.
#[derive(Clone, Debug, Serialize)]
pub struct AntiIsomorphismReport {
    pub imax: usize,
    pub jmax: Option<usize>,
    pub checked_products: usize,
    pub matching_invertible: bool,
    pub tables_agree: bool,
    pub ext_noncommutative: bool,
}

impl AntiIsomorphismReport {
    pub fn holds(&self) -> bool {
        self.matching_invertible && self.tables_agree
    }
}

/// Checks `R(a·b) = R(b)·R(a)` on chosen bases, where R is induced by
/// factor reversal.
pub fn check_anti_isomorphism(c: Arc<Coalgebra>, imax: usize, jmax: Option<usize>) -> Result<AntiIsomorphismReport> {
    let cx = CobarComplex::build(c.clone(), imax, jmax)?;
    let op = CobarComplex::build(Arc::new(c.opposite()), imax, jmax)?;
    let alg = cx.ext_algebra()?;
    let alg_op = op.ext_algebra()?;
    let field = c.field();

    // matching[b] has column p = coordinates of R(h_p) in the C^op basis.
    let mut matching: BTreeMap<Bidegree, Vec<Vec<Scalar>>> = BTreeMap::new();
    let mut invertible = alg.bases.len() == alg_op.bases.len();
    for (b, basis) in &alg.bases {
        let Some(basis_op) = alg_op.bases.get(b) else {
            invertible = false;
            continue;
        };
        let cols: Vec<Vec<Scalar>> = basis
            .representatives
            .iter()
            .map(|h| basis_op.coordinates(&reverse_factors(&cx, &op, *b, h)).ok_or(Error::NotCocycle(b.i)))
            .collect::<Result<_>>()?;
        let vecs: Vec<SparseVector> = cols.iter().map(|c| SparseVector::from_dense(c)).collect();
        invertible &= basis_op.dim() == basis.dim() && rank_of_vectors(field, basis.dim(), &vecs) == basis.dim();
        matching.insert(*b, cols);
    }

    let apply = |b: &Bidegree, coords: &[Scalar]| -> Vec<Scalar> {
        let m = &matching[b];
        let dim = alg_op.bases[b].dim();
        let mut out = vec![field.zero(); dim];
        for (p, x) in coords.iter().enumerate() {
            for (r, y) in m[p].iter().enumerate() {
                out[r] += &(x * y);
            }
        }
        out
    };

    let mut agree = invertible;
    let mut checked = 0;
    if invertible {
        for (((ba, p), (bb, q)), coords) in &alg.products {
            let target = Bidegree::new(ba.i + bb.i, ba.j.zip(bb.j).map(|(x, y)| x + y));
            let lhs = if alg.bases.contains_key(&target) { apply(&target, coords) } else { Vec::new() };
            // R(h_q)·R(h_p) expanded bilinearly in the C^op table.
            let mut rhs = vec![field.zero(); lhs.len()];
            for (a, x) in matching[bb][*q].iter().enumerate() {
                for (b2, y) in matching[ba][*p].iter().enumerate() {
                    if x.is_zero() || y.is_zero() {
                        continue;
                    }
                    let v = &alg_op.products[&((*bb, a), (*ba, b2))];
                    for (r, z) in v.iter().enumerate() {
                        rhs[r] += &(&(x * y) * z);
                    }
                }
            }
            agree &= lhs == rhs;
            checked += 1;
        }
    }
    Ok(AntiIsomorphismReport {
        imax,
        jmax,
        checked_products: checked,
        matching_invertible: invertible,
        tables_agree: agree,
        ext_noncommutative: !alg.is_commutative(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalg::GradedCoalgebra;
    use crate::exactlin::FieldSpec;

    fn trunc(d: usize) -> Arc<Coalgebra> {
        Arc::new(GradedCoalgebra::tensor(1, d, FieldSpec::Rationals).flatten().with_grading(None).unwrap())
    }

    fn xi(cx: &CobarComplex) -> CobarClass {
        let b = Bidegree::new(1, None);
        let basis = cx.cohomology_basis(b).unwrap();
        assert_eq!(basis.dim(), 1);
        CobarClass { degree: b, cocycle: basis.representatives[0].clone() }
    }

    #[test]
    fn unit_is_neutral() {
        let cx = CobarComplex::build(trunc(2), 3, None).unwrap();
        let x = xi(&cx);
        assert_eq!(cx.ext_product(&x, &cx.unit()).unwrap(), x);
        assert_eq!(cx.ext_product(&cx.unit(), &x).unwrap(), x);
    }

    #[test]
    fn square_of_degree_one_class() {
        let c2 = CobarComplex::build(trunc(1), 3, None).unwrap();
        let x = xi(&c2);
        assert!(!c2.is_coboundary(&c2.ext_product(&x, &x).unwrap()).unwrap());
        let c3 = CobarComplex::build(trunc(2), 3, None).unwrap();
        let x = xi(&c3);
        assert!(c3.is_coboundary(&c3.ext_product(&x, &x).unwrap()).unwrap());
    }

    #[test]
    fn non_cocycle_rejected() {
        let cx = CobarComplex::build(trunc(2), 2, None).unwrap();
        let b = Bidegree::new(1, None);
        // the degree-two basis element x^[2] has reduced coproduct x⊗x
        let v = SparseVector::unit(FieldSpec::Rationals, 2, 1);
        assert!(matches!(cx.class(b, v.clone()), Err(Error::NotCocycle(1))));
        let bad = CobarClass { degree: b, cocycle: v };
        assert!(cx.ext_product(&bad, &bad).is_err());
    }

    #[test]
    fn factor_reversal_matches_tensor_products() {
        let g = GradedCoalgebra::tensor(2, 3, FieldSpec::Rationals);
        let r = check_anti_isomorphism(Arc::new(g.flatten()), 2, Some(3)).unwrap();
        assert!(r.holds());
    }
}
