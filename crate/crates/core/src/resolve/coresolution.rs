use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coalg::{Coalgebra, Comodule, Term};
use crate::error::{Error, Result};
use crate::exactlin::{rank, Matrix, SubspaceBasis};

/// How the retraction of `M` onto its socle is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Retraction {
    /// Read off the coordinates at the socle's pivot positions.
    Pivot,
    /// `r = r0 + L(id − ι r0)` with `L` random and degree-preserving.
    Randomized { seed: u64 },
}

/// One step `M_i ↪ C⊗V_i ↠ M_{i+1}`.
#[derive(Clone, Debug)]
pub struct CoresolutionStep {
    pub source: Comodule,
    pub cogenerator_dim: usize,
    pub cogenerator_degrees: Option<Vec<usize>>,
    /// `M_i → C⊗V_i`, basis `e_t⊗v_a` at `t * dim V_i + a`.
    pub embedding: Matrix,
    /// `C⊗V_i → M_{i+1}` onto the quotient basis.
    pub projection: Matrix,
}

/// A minimal cofree coresolution `0 → M → C⊗V_0 → C⊗V_1 → …`.
#[derive(Clone, Debug)]
pub struct MinimalCoresolution {
    base: Arc<Coalgebra>,
    target: Comodule,
    steps: Vec<CoresolutionStep>,
    /// `d_i : C⊗V_i → C⊗V_{i+1}` for `i < length`.
    differentials: Vec<Matrix>,
    minimal: bool,
    exact: bool,
}

/// Serializable summary of a resolution.
#[derive(Clone, Debug, Serialize)]
pub struct ResolutionReport {
    pub cogenerator_dims: Vec<usize>,
    pub graded_cogenerator_dims: Option<Vec<(usize, usize, usize)>>,
    pub term_dims: Vec<usize>,
    pub minimal: bool,
    pub exact: bool,
}

/// `(id ⊗ r) ∘ ν`.
fn cofree_map(m: &Comodule, r: &Matrix) -> Matrix {
    let v = r.rows();
    let cols: Vec<_> = (0..m.dim())
        .map(|t| {
            let mut trip = Vec::new();
            for (i, j, c) in m.coaction(t) {
                for (a, s) in r.column(*j).entries() {
                    trip.push((i * v + a, c * s));
                }
            }
            let mut acc: BTreeMap<usize, crate::exactlin::Scalar> = BTreeMap::new();
            for (k, s) in trip {
                *acc.entry(k).or_insert_with(|| m.base().field().zero()) += &s;
            }
            crate::exactlin::SparseVector::from_pairs(m.base().dim() * v, acc)
        })
        .collect();
    Matrix::from_columns(m.base().field(), m.base().dim() * v, cols)
}

fn retraction(m: &Comodule, socle: &SubspaceBasis, mode: Retraction, rng: &mut Option<ChaCha8Rng>) -> Matrix {
    let f = m.base().field();
    let v = socle.dim();
    let r0 = Matrix::from_triplets(f, v, m.dim(), socle.pivots().iter().enumerate().map(|(a, &p)| (a, p, f.one())));
    match (mode, rng.as_mut()) {
        (Retraction::Randomized { .. }, Some(rng)) => {
            let deg = m.grading();
            let vdeg: Option<Vec<usize>> = deg.map(|g| socle.pivots().iter().map(|&p| g[p]).collect());
            let mut trip = Vec::new();
            for a in 0..v {
                for t in 0..m.dim() {
                    if let (Some(g), Some(vd)) = (deg, &vdeg) {
                        if g[t] != vd[a] {
                            continue;
                        }
                    }
                    trip.push((a, t, f.random(rng)));
                }
            }
            let l = Matrix::from_triplets(f, v, m.dim(), trip);
            let iota = socle.to_matrix();
            let defect = Matrix::identity(f, m.dim()).sub(&iota.mul(&r0));
            r0.add(&l.mul(&defect))
        }
        _ => r0,
    }
}

/// Coaction on `C⊗V / im φ`, whose basis is the complement unit vectors
/// `e_t⊗v_a`: `ν(q) = Σ c e_i ⊗ proj(e_j⊗v_a)` over `μ(e_t)`.
fn cokernel(base: &Arc<Coalgebra>, v: usize, vdeg: Option<&[usize]>, image: &SubspaceBasis) -> (Comodule, Matrix) {
    let proj = image.quotient_projection();
    let comp = image.complement_coordinates();
    let coaction: Vec<Vec<Term>> = comp
        .iter()
        .map(|&p| {
            let (t, a) = (p / v, p % v);
            base.comul(t)
                .iter()
                .flat_map(|(i, j, c)| proj.column(j * v + a).entries().iter().map(move |(k, s)| (*i, *k, c * s)))
                .collect()
        })
        .collect();
    let grading = match (base.grading(), vdeg) {
        (Some(g), Some(vd)) => Some(comp.iter().map(|&p| g[p / v] + vd[p % v]).collect()),
        _ => None,
    };
    let q = Comodule::new(base.clone(), comp.len(), coaction, grading).expect("quotient coaction is well formed");
    (q, proj)
}

pub fn minimal_coresolution(m: &Comodule, length: usize) -> Result<MinimalCoresolution> {
    minimal_coresolution_with(m, length, Retraction::Pivot)
}

/// Builds steps `0..=length`, verifying injectivity, socle isomorphism,
/// exactness and minimality along the way.
pub fn minimal_coresolution_with(m: &Comodule, length: usize, mode: Retraction) -> Result<MinimalCoresolution> {
    let base = m.base().clone();
    base.require_conilpotent()?;
    let n = base.dim();
    let g = base.grouplike();
    let mut rng = match mode {
        Retraction::Randomized { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
        Retraction::Pivot => None,
    };
    let mut steps: Vec<CoresolutionStep> = Vec::new();
    let mut current = m.clone();
    for i in 0..=length {
        let socle = current.socle();
        let v = socle.dim();
        let r = retraction(&current, &socle, mode, &mut rng);
        let phi = cofree_map(&current, &r);
        if rank(&phi) != current.dim() {
            return Err(Error::Inexact(i));
        }
        // φ restricted to the socle is s ↦ g⊗r(s); it must hit all of g⊗V.
        let on_socle = phi.mul(&socle.to_matrix()).select_rows(&(0..v).map(|a| g * v + a).collect::<Vec<_>>());
        if rank(&on_socle) != v {
            return Err(Error::Inexact(i));
        }
        let vdeg: Option<Vec<usize>> = current.grading().map(|gr| socle.pivots().iter().map(|&p| gr[p]).collect());
        let image = SubspaceBasis::image(&phi);
        let (next, proj) = cokernel(&base, v, vdeg.as_deref(), &image);
        steps.push(CoresolutionStep {
            source: current,
            cogenerator_dim: v,
            cogenerator_degrees: vdeg,
            embedding: phi,
            projection: proj,
        });
        current = next;
    }
    let differentials: Vec<Matrix> =
        steps.windows(2).map(|w| w[1].embedding.mul(&w[0].projection)).collect();
    let minimal = differentials.iter().zip(&steps).all(|(d, s)| {
        let v = s.cogenerator_dim;
        d.select_columns(&(0..v).map(|a| g * v + a).collect::<Vec<_>>()).is_zero()
    });
    let mut exact = true;
    for i in 0..steps.len() {
        let dim = n * steps[i].cogenerator_dim;
        let incoming = if i == 0 { &steps[0].embedding } else { &differentials[i - 1] };
        let outgoing = differentials.get(i).unwrap_or(&steps[i].projection);
        exact &= outgoing.mul(incoming).is_zero() && rank(incoming) + rank(outgoing) == dim;
    }
    if !exact {
        return Err(Error::Inexact(length));
    }
    Ok(MinimalCoresolution { base, target: m.clone(), steps, differentials, minimal, exact })
}

impl MinimalCoresolution {
    pub fn base(&self) -> &Arc<Coalgebra> {
        &self.base
    }

    pub fn target(&self) -> &Comodule {
        &self.target
    }

    pub fn length(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn steps(&self) -> &[CoresolutionStep] {
        &self.steps
    }

    pub fn differentials(&self) -> &[Matrix] {
        &self.differentials
    }

    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn cogenerator_dims(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.cogenerator_dim).collect()
    }

    /// `(i, j) ↦ dim (V_i)_j` when the target is graded.
    pub fn graded_cogenerator_dims(&self) -> Option<BTreeMap<(usize, usize), usize>> {
        let mut out = BTreeMap::new();
        for (i, s) in self.steps.iter().enumerate() {
            for &j in s.cogenerator_degrees.as_ref()? {
                *out.entry((i, j)).or_insert(0) += 1;
            }
        }
        Some(out)
    }

    pub fn report(&self) -> ResolutionReport {
        ResolutionReport {
            cogenerator_dims: self.cogenerator_dims(),
            graded_cogenerator_dims: self
                .graded_cogenerator_dims()
                .map(|m| m.into_iter().map(|((i, j), d)| (i, j, d)).collect()),
            term_dims: self.steps.iter().map(|s| self.base.dim() * s.cogenerator_dim).collect(),
            minimal: self.minimal,
            exact: self.exact,
        }
    }
}

pub fn betti_dims(r: &MinimalCoresolution) -> Result<Vec<usize>> {
    if !r.is_minimal() {
        return Err(Error::NotMinimal(r.length()));
    }
    Ok(r.cogenerator_dims())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalg::GradedCoalgebra;
    use crate::exactlin::FieldSpec;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn trunc(d: usize) -> Arc<Coalgebra> {
        Arc::new(GradedCoalgebra::tensor(1, d, q()).flatten())
    }

    #[test]
    fn cofree_resolves_itself() {
        let c = Arc::new(GradedCoalgebra::tensor(2, 2, q()).flatten());
        let m = Comodule::cofree(c, 2, Some(&[0, 0]));
        let r = minimal_coresolution(&m, 3).unwrap();
        assert_eq!(betti_dims(&r).unwrap(), vec![2, 0, 0, 0]);
    }

    #[test]
    fn trivial_over_truncated_polynomials_is_periodic() {
        for d in 1..=2 {
            let r = minimal_coresolution(&Comodule::trivial(trunc(d)), 5).unwrap();
            assert!(r.is_minimal() && r.is_exact());
            assert_eq!(betti_dims(&r).unwrap(), vec![1; 6]);
        }
    }

    #[test]
    fn symmetric_betti_numbers_in_valid_window() {
        let c = Arc::new(GradedCoalgebra::symmetric(2, 4, q()).unwrap().flatten());
        let r = minimal_coresolution(&Comodule::trivial(c), 3).unwrap();
        let g = r.graded_cogenerator_dims().unwrap();
        let diag: Vec<usize> = (0..4).map(|i| (0..=4).map(|j| g.get(&(i, j)).copied().unwrap_or(0)).sum()).collect();
        assert_eq!(diag, vec![1, 2, 1, 0]);
    }

    #[test]
    fn randomized_retractions_agree() {
        let c = Arc::new(GradedCoalgebra::symmetric(2, 3, q()).unwrap().flatten());
        let k = Comodule::trivial(c);
        let base = minimal_coresolution(&k, 3).unwrap();
        for seed in 0..4 {
            let r = minimal_coresolution_with(&k, 3, Retraction::Randomized { seed }).unwrap();
            assert!(r.is_minimal());
            assert_eq!(r.cogenerator_dims(), base.cogenerator_dims());
            assert_eq!(r.graded_cogenerator_dims(), base.graded_cogenerator_dims());
        }
    }

    #[test]
    fn non_conilpotent_base_rejected() {
        let f = q();
        let c = Coalgebra::new(
            f,
            3,
            0,
            vec![f.one(), f.one(), f.zero()],
            vec![
                vec![(0, 0, f.one())],
                vec![(1, 1, f.one()), (2, 2, -f.one())],
                vec![(1, 2, f.one()), (2, 1, f.one())],
            ],
            None,
        )
        .unwrap();
        assert!(minimal_coresolution(&Comodule::trivial(Arc::new(c)), 1).is_err());
    }
}
