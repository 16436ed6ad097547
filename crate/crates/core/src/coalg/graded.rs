use std::collections::{BTreeMap, HashMap};

use super::coalgebra::{Coalgebra, Term, ValidationReport};
use crate::error::{Error, Result};
use crate::exactlin::{kronecker, FieldSpec, Matrix};

/// A positively graded coalgebra truncated at internal degree `bound`.
///
/// `component(p, q)` is the matrix of `C_{p+q} → C_p ⊗ C_q`, rows indexed by
/// `a * dims[q] + b`. All components with `p + q ≤ bound` are stored,
/// including the counital ones with `p = 0` or `q = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCoalgebra {
    field: FieldSpec,
    bound: usize,
    dims: Vec<usize>,
    components: BTreeMap<(usize, usize), Matrix>,
}

impl GradedCoalgebra {
    /// Components missing from `components` with `p = 0` or `q = 0` default to
    /// the identity; any other missing component is zero.
    pub fn new(field: FieldSpec, dims: Vec<usize>, mut components: BTreeMap<(usize, usize), Matrix>) -> Result<Self> {
        let bad = |m: String| Error::Schema { location: "graded coalgebra".into(), message: m };
        if dims.first() != Some(&1) {
            return Err(bad("degree-0 component must be one-dimensional".into()));
        }
        let bound = dims.len() - 1;
        for (&(p, q), m) in &components {
            if p + q > bound {
                return Err(bad(format!("component ({p},{q}) beyond the truncation bound {bound}")));
            }
            if m.rows() != dims[p] * dims[q] || m.cols() != dims[p + q] {
                return Err(bad(format!(
                    "component ({p},{q}) has shape {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dims[p] * dims[q],
                    dims[p + q]
                )));
            }
            if m.field() != field {
                return Err(bad(format!("component ({p},{q}) over the wrong field")));
            }
        }
        for j in 0..=bound {
            for p in 0..=j {
                let q = j - p;
                components.entry((p, q)).or_insert_with(|| {
                    if p == 0 || q == 0 {
                        Matrix::identity(field, dims[j])
                    } else {
                        Matrix::zero(field, dims[p] * dims[q], dims[j])
                    }
                });
            }
        }
        Ok(GradedCoalgebra { field, bound, dims, components })
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

    /// The cofree conilpotent coalgebra on an m-dimensional space, truncated:
    /// words of length j in lexicographic order, deconcatenation coproduct.
    pub fn tensor(m: usize, bound: usize, field: FieldSpec) -> Self {
        let dims: Vec<usize> = (0..=bound as u32).map(|j| m.pow(j)).collect();
        let mut comps = BTreeMap::new();
        // Splitting a word at position p keeps its lexicographic index.
        for j in 0..=bound {
            for p in 0..=j {
                comps.insert((p, j - p), Matrix::identity(field, dims[j]));
            }
        }
        GradedCoalgebra::new(field, dims, comps).expect("tensor coalgebra is well formed")
    }

    /// Symmetric tensors inside the truncated tensor coalgebra. Basis of
    /// degree j: orbit sums of words, indexed by nondecreasing letter
    /// sequences in lexicographic order.
    pub fn symmetric(m: usize, bound: usize, field: FieldSpec) -> Result<Self> {
        let ch = field.characteristic();
        if ch != 0 && (ch as usize) <= bound {
            return Err(Error::UnsupportedCharacteristic { characteristic: ch, bound });
        }
        let bases: Vec<Vec<Vec<usize>>> = (0..=bound).map(|j| exponent_vectors(m, j)).collect();
        let index: Vec<HashMap<Vec<usize>, usize>> =
            bases.iter().map(|b| b.iter().enumerate().map(|(k, v)| (v.clone(), k)).collect()).collect();
        let dims: Vec<usize> = bases.iter().map(|b| b.len()).collect();
        let mut comps = BTreeMap::new();
        for j in 0..=bound {
            for p in 0..=j {
                let q = j - p;
                let mut trip = Vec::new();
                for (t, alpha) in bases[j].iter().enumerate() {
                    for beta in sub_exponents(alpha, p) {
                        let gamma: Vec<usize> = alpha.iter().zip(&beta).map(|(a, b)| a - b).collect();
                        let a = index[p][&beta];
                        let b = index[q][&gamma];
                        trip.push((a * dims[q] + b, t, field.one()));
                    }
                }
                comps.insert((p, q), Matrix::from_triplets(field, dims[p] * dims[q], dims[j], trip));
            }
        }
        GradedCoalgebra::new(field, dims, comps)
    }

    /// Inclusion matrices `Sym^j(V) → V^{⊗j}` matching [`GradedCoalgebra::symmetric`].
    pub fn symmetric_embedding(m: usize, bound: usize, field: FieldSpec) -> Vec<Matrix> {
        (0..=bound)
            .map(|j| {
                let basis = exponent_vectors(m, j);
                let rows = m.pow(j as u32);
                let mut trip = Vec::new();
                for (t, alpha) in basis.iter().enumerate() {
                    for w in words_with_content(alpha) {
                        let idx = w.iter().fold(0usize, |acc, &l| acc * m + l);
                        trip.push((idx, t, field.one()));
                    }
                }
                Matrix::from_triplets(field, rows, basis.len(), trip)
            })
            .collect()
    }

    /// Restriction to internal degrees `≤ bound`.
    pub fn truncate(&self, bound: usize) -> Result<Self> {
        if bound > self.bound {
            return Err(Error::Truncation { jmax: bound, bound: self.bound });
        }
        let comps = self.components.iter().filter(|((p, q), _)| p + q <= bound).map(|(k, m)| (*k, m.clone())).collect();
        GradedCoalgebra::new(self.field, self.dims[..=bound].to_vec(), comps)
    }

    pub fn opposite(&self) -> Self {
        let comps = self
            .components
            .iter()
            .map(|(&(p, q), _)| {
                let src = &self.components[&(q, p)];
                let (dp, dq) = (self.dims[p], self.dims[q]);
                // rows of src are (b, a) with b in C_q, a in C_p
                let perm: Vec<usize> = (0..dq * dp).map(|r| (r % dp) * dq + r / dp).collect();
                let ident: Vec<usize> = (0..src.cols()).collect();
                ((p, q), src.permute(&perm, &ident))
            })
            .collect();
        GradedCoalgebra { field: self.field, bound: self.bound, dims: self.dims.clone(), components: comps }
    }

    pub fn validate(&self) -> ValidationReport {
        let f = self.field;
        let mut coassociative = true;
        for j in 0..=self.bound {
            for p in 0..=j {
                for q in 0..=(j - p) {
                    let r = j - p - q;
                    let left = kronecker(self.component(p, q), &Matrix::identity(f, self.dims[r])).mul(self.component(p + q, r));
                    let right = kronecker(&Matrix::identity(f, self.dims[p]), self.component(q, r)).mul(self.component(p, q + r));
                    coassociative &= left == right;
                }
            }
        }
        let counital = (0..=self.bound).all(|j| {
            let id = Matrix::identity(f, self.dims[j]);
            *self.component(0, j) == id && *self.component(j, 0) == id
        });
        let coaugmented = self.dims[0] == 1 && *self.component(0, 0) == Matrix::identity(f, 1);
        let cocommutative = self.opposite() == *self;
        ValidationReport { coassociative, counital, coaugmented, conilpotent: coaugmented, cocommutative }
    }

    /// Offset of degree j inside the flattened basis.
    pub fn offset(&self, j: usize) -> usize {
        self.dims[..j].iter().sum()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// The finite-dimensional coalgebra underlying the truncation, graded.
    pub fn flatten(&self) -> Coalgebra {
        let f = self.field;
        let n = self.total_dim();
        let offsets: Vec<usize> = (0..=self.bound).map(|j| self.offset(j)).collect();
        let mut comul: Vec<Vec<Term>> = vec![Vec::new(); n];
        for (&(p, q), m) in &self.components {
            let dq = self.dims[q];
            for (r, t, c) in m.triplets() {
                comul[offsets[p + q] + t].push((offsets[p] + r / dq, offsets[q] + r % dq, c.clone()));
            }
        }
        let mut counit = vec![f.zero(); n];
        counit[0] = f.one();
        let grading: Vec<usize> = (0..=self.bound).flat_map(|j| std::iter::repeat_n(j, self.dims[j])).collect();
        Coalgebra::new(f, n, 0, counit, comul, Some(grading)).expect("flattening is well formed")
    }
}

/// Exponent vectors of total degree j in m variables, ordered so that the
/// matching nondecreasing letter sequences are lexicographic.
pub(crate) fn exponent_vectors(m: usize, j: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, start: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            let mut e = vec![0; m];
            for &l in cur.iter() {
                e[l] += 1;
            }
            out.push(e);
            return;
        }
        for l in start..m {
            cur.push(l);
            rec(m, l, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        if j == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(m, 0, j, &mut Vec::new(), &mut out);
    out
}

fn sub_exponents(alpha: &[usize], p: usize) -> Vec<Vec<usize>> {
    fn rec(alpha: &[usize], k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == alpha.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for b in 0..=alpha[k].min(left) {
            cur.push(b);
            rec(alpha, k + 1, left - b, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(alpha, 0, p, &mut Vec::new(), &mut out);
    out
}

fn words_with_content(alpha: &[usize]) -> Vec<Vec<usize>> {
    fn rec(counts: &mut Vec<usize>, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for l in 0..counts.len() {
            if counts[l] > 0 {
                counts[l] -= 1;
                cur.push(l);
                rec(counts, left - 1, cur, out);
                cur.pop();
                counts[l] += 1;
            }
        }
    }
    let mut out = Vec::new();
    let total = alpha.iter().sum();
    rec(&mut alpha.to_vec(), total, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn tensor_dims_and_validity() {
        let t = GradedCoalgebra::tensor(2, 3, q());
        assert_eq!(t.dims(), &[1, 2, 4, 8]);
        let r = t.validate();
        assert!(r.all_required());
        assert!(!r.cocommutative);
        assert!(t.flatten().validate().all_required());
    }

    #[test]
    fn tensor_rank_zero_is_ground_field() {
        let t = GradedCoalgebra::tensor(0, 3, q());
        assert_eq!(t.dims(), &[1, 0, 0, 0]);
        assert_eq!(t.flatten(), Coalgebra::ground(q()));
    }

    #[test]
    fn tensor_line_deconcatenation() {
        let c = GradedCoalgebra::tensor(1, 2, q()).flatten();
        let one = q().one();
        assert_eq!(c.comul(2), &[(0, 2, one.clone()), (1, 1, one.clone()), (2, 0, one.clone())]);
    }

    #[test]
    fn symmetric_dims() {
        assert_eq!(GradedCoalgebra::symmetric(1, 3, q()).unwrap().dims(), &[1, 1, 1, 1]);
        assert_eq!(GradedCoalgebra::symmetric(2, 2, q()).unwrap().dims(), &[1, 2, 3]);
        let s = GradedCoalgebra::symmetric(3, 4, q()).unwrap();
        assert_eq!(s.dims(), &[1, 3, 6, 10, 15]);
        let r = s.validate();
        assert!(r.all_required() && r.cocommutative);
    }

    #[test]
    fn symmetric_small_characteristic_rejected() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert!(matches!(
            GradedCoalgebra::symmetric(2, 2, f2),
            Err(Error::UnsupportedCharacteristic { characteristic: 2, bound: 2 })
        ));
        assert!(GradedCoalgebra::symmetric(2, 2, FieldSpec::prime(3).unwrap()).is_ok());
    }

    #[test]
    fn symmetric_embeds_in_tensor() {
        let (m, d) = (2, 4);
        let s = GradedCoalgebra::symmetric(m, d, q()).unwrap();
        let t = GradedCoalgebra::tensor(m, d, q());
        let inc = GradedCoalgebra::symmetric_embedding(m, d, q());
        for j in 0..=d {
            for p in 0..=j {
                let lhs = kronecker(&inc[p], &inc[j - p]).mul(s.component(p, j - p));
                let rhs = t.component(p, j - p).mul(&inc[j]);
                assert_eq!(lhs, rhs, "component ({p},{})", j - p);
            }
        }
    }

    #[test]
    fn opposite_is_involutive_and_swaps_factors() {
        let t = GradedCoalgebra::tensor(2, 3, q());
        let op = t.opposite();
        assert_ne!(op, t);
        assert_eq!(op.opposite(), t);
        assert!(op.validate().all_required());
        let s = GradedCoalgebra::symmetric(2, 3, q()).unwrap();
        assert_eq!(s.opposite(), s);
        assert_eq!(t.flatten().opposite(), op.flatten());
    }

    #[test]
    fn flatten_symmetric_degree_one() {
        let c = GradedCoalgebra::symmetric(2, 1, q()).unwrap().flatten();
        assert_eq!(c.dim(), 3);
        let f = c.coaugmentation_filtration().unwrap();
        assert_eq!(f.dims(), vec![1, 3]);
        // both non-grouplike vectors are primitive
        for t in 1..3 {
            assert_eq!(c.comul(t).len(), 2);
        }
    }

    #[test]
    fn filtration_of_flattened_tensor_is_degree_filtration() {
        let c = GradedCoalgebra::tensor(2, 3, q()).flatten();
        let f = c.coaugmentation_filtration().unwrap();
        assert_eq!(f.dims(), vec![1, 3, 7, 15]);
        assert!(f.exhaustive);
    }
}
