use std::sync::Arc;

use rand::Rng;

use super::coalgebra::{normalize_terms, Coalgebra, Term};
use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, kronecker, Matrix, SubspaceBasis};

/// A finite-dimensional left comodule: `coaction[t]` lists the terms
/// `c * e_i ⊗ m_j` of `ν(m_t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comodule {
    base: Arc<Coalgebra>,
    dim: usize,
    coaction: Vec<Vec<Term>>,
    grading: Option<Vec<usize>>,
}

impl Comodule {
    pub fn new(base: Arc<Coalgebra>, dim: usize, coaction: Vec<Vec<Term>>, grading: Option<Vec<usize>>) -> Result<Self> {
        let bad = |m: String| Error::Schema { location: "comodule".into(), message: m };
        if coaction.len() != dim {
            return Err(bad(format!("coaction lists {} vectors, expected {dim}", coaction.len())));
        }
        if let Some(g) = &grading {
            if g.len() != dim {
                return Err(bad("grading length mismatch".into()));
            }
        }
        let f = base.field();
        let mut norm = Vec::with_capacity(dim);
        for (t, terms) in coaction.into_iter().enumerate() {
            for (i, j, c) in &terms {
                if *i >= base.dim() || *j >= dim || !f.contains(c) {
                    return Err(bad(format!("bad term in ν(m_{t})")));
                }
            }
            norm.push(normalize_terms(terms));
        }
        Ok(Comodule { base, dim, coaction: norm, grading })
    }

    /// The trivial comodule k, coacting through the coaugmentation.
    pub fn trivial(base: Arc<Coalgebra>) -> Self {
        let one = base.field().one();
        let g = base.grouplike();
        let grading = base.grading().map(|_| vec![0]);
        Comodule::new(base, 1, vec![vec![(g, 0, one)]], grading).unwrap()
    }

    /// C as a left comodule over itself.
    pub fn regular(base: Arc<Coalgebra>) -> Self {
        let coaction = (0..base.dim()).map(|t| base.comul(t).to_vec()).collect();
        let grading = base.grading().map(|g| g.to_vec());
        let dim = base.dim();
        Comodule::new(base, dim, coaction, grading).unwrap()
    }

    /// The cofree comodule C ⊗ V, basis `e_t ⊗ v_a` at index `t * dim V + a`.
    pub fn cofree(base: Arc<Coalgebra>, v_dim: usize, v_grading: Option<&[usize]>) -> Self {
        let n = base.dim();
        let mut coaction = Vec::with_capacity(n * v_dim);
        for t in 0..n {
            for a in 0..v_dim {
                coaction.push(base.comul(t).iter().map(|(i, j, c)| (*i, j * v_dim + a, c.clone())).collect());
            }
        }
        let grading = match (base.grading(), v_grading) {
            (Some(g), Some(vg)) => Some((0..n).flat_map(|t| vg.iter().map(move |d| g[t] + d)).collect()),
            _ => None,
        };
        Comodule::new(base, n * v_dim, coaction, grading).unwrap()
    }

    pub fn direct_sum(&self, other: &Comodule) -> Result<Comodule> {
        if self.base != other.base {
            return Err(Error::Invalid("direct sum over different coalgebras".into()));
        }
        let off = self.dim;
        let mut coaction = self.coaction.clone();
        coaction.extend(other.coaction.iter().map(|ts| ts.iter().map(|(i, j, c)| (*i, j + off, c.clone())).collect()));
        let grading = match (&self.grading, &other.grading) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        Comodule::new(self.base.clone(), self.dim + other.dim, coaction, grading)
    }

    /// A two-dimensional comodule with socle `m_1`: `ν(m_2) = g⊗m_2 + x⊗m_1`
    /// for a random nonzero primitive x.
    pub fn random_two_dimensional<R: Rng + ?Sized>(base: Arc<Coalgebra>, rng: &mut R) -> Result<Comodule> {
        let prim = primitives(&base);
        if prim.is_empty() {
            return Err(Error::Invalid("coalgebra has no primitive elements".into()));
        }
        let f = base.field();
        let x = loop {
            let v = prim.vectors().iter().fold(crate::exactlin::SparseVector::zero(base.dim()), |acc, p| {
                acc.add_scaled(&f.random(rng), p)
            });
            if !v.is_zero() {
                break v;
            }
        };
        let g = base.grouplike();
        let one = f.one();
        let eps = x.entries().iter().fold(f.zero(), |acc, (i, c)| acc + &base.counit()[*i] * c);
        let x = x.add_scaled(&-eps, &crate::exactlin::SparseVector::unit(f, base.dim(), g));
        let mut second = vec![(g, 1, one.clone())];
        second.extend(x.entries().iter().map(|(i, c)| (*i, 0, c.clone())));
        let m = Comodule::new(base, 2, vec![vec![(g, 0, one)], second], None)?;
        if !m.is_valid() {
            return Err(Error::Invalid("primitive correction failed to give a comodule".into()));
        }
        Ok(m)
    }

    pub fn base(&self) -> &Arc<Coalgebra> {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coaction(&self, t: usize) -> &[Term] {
        &self.coaction[t]
    }

    pub fn grading(&self) -> Option<&[usize]> {
        self.grading.as_deref()
    }

    pub fn with_grading(mut self, grading: Option<Vec<usize>>) -> Self {
        self.grading = grading;
        self
    }

    /// Matrix of ν: M → C ⊗ M, rows indexed by `i * dim M + j`.
    pub fn coaction_matrix(&self) -> Matrix {
        let d = self.dim;
        Matrix::from_triplets(
            self.base.field(),
            self.base.dim() * d,
            d,
            self.coaction.iter().enumerate().flat_map(|(t, ts)| ts.iter().map(move |(i, j, c)| (i * d + j, t, c.clone()))),
        )
    }

    /// Matrix of the reduced coaction M → C_+ ⊗ M.
    pub fn reduced_coaction_matrix(&self) -> Matrix {
        let d = self.dim;
        let n = self.base.dim() - 1;
        let trip = self.coaction.iter().enumerate().flat_map(|(t, ts)| {
            ts.iter().filter_map(move |(i, j, c)| Some((self.base.reduced_position(*i)? * d + j, t, c.clone())))
        });
        Matrix::from_triplets(self.base.field(), n * d, d, trip.collect::<Vec<_>>())
    }

    pub fn is_coassociative(&self) -> bool {
        let f = self.base.field();
        let nu = self.coaction_matrix();
        let mu = self.base.comul_matrix();
        let left = kronecker(&mu, &Matrix::identity(f, self.dim)).mul(&nu);
        let right = kronecker(&Matrix::identity(f, self.base.dim()), &nu).mul(&nu);
        left == right
    }

    pub fn is_counital(&self) -> bool {
        let f = self.base.field();
        let eps = Matrix::from_triplets(
            f,
            1,
            self.base.dim(),
            self.base.counit().iter().enumerate().map(|(t, c)| (0, t, c.clone())),
        );
        kronecker(&eps, &Matrix::identity(f, self.dim)).mul(&self.coaction_matrix()) == Matrix::identity(f, self.dim)
    }

    pub fn is_valid(&self) -> bool {
        self.is_coassociative() && self.is_counital()
    }

    /// The maximal trivial subcomodule: kernel of M → C ⊗ M → C_+ ⊗ M.
    pub fn socle(&self) -> SubspaceBasis {
        kernel_basis(&self.reduced_coaction_matrix())
    }
}

/// Primitive elements of C: the degree-one part of the coaugmentation
/// filtration, `ker(C_+ → C_+ ⊗ C_+)`, written in C coordinates.
pub fn primitives(c: &Coalgebra) -> SubspaceBasis {
    let n = c.dim() - 1;
    let red = c.reduced_comul();
    let m = Matrix::from_triplets(
        c.field(),
        n * n,
        n,
        red.iter().enumerate().flat_map(|(a, ts)| ts.iter().map(move |(i, j, v)| (i * n + j, a, v.clone()))).collect::<Vec<_>>(),
    );
    let k = kernel_basis(&m);
    let basis = c.reduced_basis();
    let lifted: Vec<_> = k
        .vectors()
        .iter()
        .map(|v| crate::exactlin::SparseVector::from_pairs(c.dim(), v.entries().iter().map(|(a, s)| (basis[*a], s.clone()))))
        .collect();
    SubspaceBasis::span(c.field(), c.dim(), &lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalg::GradedCoalgebra;
    use crate::exactlin::FieldSpec;
    use rand::SeedableRng;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn socle_of_trivial_is_everything() {
        let c = Arc::new(GradedCoalgebra::tensor(1, 2, q()).flatten());
        let k = Comodule::trivial(c);
        assert!(k.is_valid());
        assert_eq!(k.socle().dim(), 1);
    }

    #[test]
    fn socle_of_regular_comodules() {
        for d in 1..=2 {
            let c = Arc::new(GradedCoalgebra::tensor(1, d, q()).flatten());
            let m = Comodule::regular(c.clone());
            assert!(m.is_valid());
            let s = m.socle();
            assert_eq!(s.dim(), 1);
            assert_eq!(s.vectors()[0].entries(), &[(c.grouplike(), q().one())]);
        }
    }

    #[test]
    fn cofree_and_sums_are_comodules() {
        let c = Arc::new(GradedCoalgebra::tensor(2, 2, q()).flatten());
        let j = Comodule::cofree(c.clone(), 3, Some(&[0, 1, 1]));
        assert!(j.is_valid());
        assert_eq!(j.socle().dim(), 3);
        let s = j.direct_sum(&Comodule::trivial(c.clone())).unwrap();
        assert!(s.is_valid());
        assert_eq!(s.socle().dim(), 4);
    }

    #[test]
    fn random_two_dimensional_comodules_are_valid() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let c = Arc::new(GradedCoalgebra::symmetric(2, 3, q()).unwrap().flatten());
        for _ in 0..5 {
            let m = Comodule::random_two_dimensional(c.clone(), &mut rng).unwrap();
            assert!(m.is_valid());
            assert_eq!(m.socle().dim(), 1);
        }
        let k = Arc::new(Coalgebra::ground(q()));
        assert!(Comodule::random_two_dimensional(k, &mut rng).is_err());
    }
}
