use std::sync::Arc;

use rand::Rng;

use super::algebra::{dual_algebra_with, Algebra, Convention};
use crate::coalg::{Coalgebra, Comodule};
use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, kronecker, Matrix, Scalar, SparseVector};

/// A finite-dimensional left module: `actions[a]` is the matrix of `e_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    algebra: Arc<Algebra>,
    dim: usize,
    actions: Vec<Matrix>,
}

impl ModulePresentation {
    pub fn new(algebra: Arc<Algebra>, dim: usize, actions: Vec<Matrix>) -> Result<Self> {
        if actions.len() != algebra.dim() || actions.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::Schema { location: "module".into(), message: "action matrices have the wrong shape".into() });
        }
        Ok(ModulePresentation { algebra, dim, actions })
    }

    /// k with `e_a` acting by the augmentation.
    pub fn trivial(algebra: Arc<Algebra>) -> Result<Self> {
        let g = algebra.augmentation().ok_or_else(|| Error::Invalid("algebra has no augmentation".into()))?.to_vec();
        let f = algebra.field();
        let actions = g.iter().map(|s| Matrix::from_triplets(f, 1, 1, [(0, 0, s.clone())])).collect();
        ModulePresentation::new(algebra, 1, actions)
    }

    /// `A^r`, basis `e_b · 1_k` at `k * dim A + b`.
    pub fn free(algebra: Arc<Algebra>, rank: usize) -> Self {
        let f = algebra.field();
        let actions = (0..algebra.dim()).map(|a| kronecker(&Matrix::identity(f, rank), &algebra.left_matrix(a))).collect();
        ModulePresentation { dim: rank * algebra.dim(), algebra, actions }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, a: usize) -> &Matrix {
        &self.actions[a]
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.actions
    }

    /// Action of an arbitrary algebra element.
    pub fn act(&self, x: &SparseVector) -> Matrix {
        let f = self.algebra.field();
        x.entries().iter().fold(Matrix::zero(f, self.dim, self.dim), |acc, (a, s)| acc.add_scaled(s, &self.actions[*a]))
    }

    pub fn is_module(&self) -> bool {
        let a = &self.algebra;
        let f = a.field();
        self.act(a.unit()) == Matrix::identity(f, self.dim)
            && (0..a.dim()).all(|x| (0..a.dim()).all(|y| self.actions[x].mul(&self.actions[y]) == self.act(a.product(x, y))))
    }

    pub fn direct_sum(&self, other: &ModulePresentation) -> Result<Self> {
        if self.algebra != other.algebra {
            return Err(Error::Invalid("direct sum over different algebras".into()));
        }
        let actions = self.actions.iter().zip(&other.actions).map(|(x, y)| x.direct_sum(y)).collect();
        ModulePresentation::new(self.algebra.clone(), self.dim + other.dim, actions)
    }

    /// A linear map `self → other` (matrix `other.dim × self.dim`) is A-linear.
    pub fn is_homomorphism(&self, other: &ModulePresentation, f: &Matrix) -> bool {
        self.actions.iter().zip(&other.actions).all(|(x, y)| f.mul(x) == y.mul(f))
    }

    /// Basis of `Hom_A(self, other)`, each map as a column-major vectorized
    /// matrix (`other.dim × self.dim`, entry `(r, c)` at `c * other.dim + r`).
    pub fn hom_basis(&self, other: &ModulePresentation) -> Vec<Matrix> {
        let f = self.algebra.field();
        let (p, q) = (self.dim, other.dim);
        // φ ρ_P(a) − ρ_Q(a) φ = 0 with vec(XYZ) = (Z^T ⊗ X) vec(Y).
        let id_p = Matrix::identity(f, p);
        let id_q = Matrix::identity(f, q);
        let blocks: Vec<Matrix> = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(rp, rq)| kronecker(&rp.transpose(), &id_q).sub(&kronecker(&id_p, rq)))
            .collect();
        let stacked = blocks.iter().skip(1).fold(blocks[0].clone(), |acc, b| acc.vstack(b));
        kernel_basis(&stacked)
            .vectors()
            .iter()
            .map(|v| Matrix::from_triplets(f, q, p, v.entries().iter().map(|(k, s)| (k % q, k / q, s.clone()))))
            .collect()
    }
}

/// `f·m = f(m_(-1)) m_(0)`: `e^s` acts on `m_t` by `Σ c m_j` over terms
/// `(s, j, c)` of `ν(m_t)`.
pub fn comodule_to_module(m: &Comodule) -> ModulePresentation {
    comodule_to_module_with(m, Convention::Reversed)
}

pub fn comodule_to_module_with(m: &Comodule, convention: Convention) -> ModulePresentation {
    let c = m.base();
    let algebra = Arc::new(dual_algebra_with(c, convention));
    comodule_to_module_over(m, algebra)
}

/// Υ into a given copy of the dual algebra.
pub fn comodule_to_module_over(m: &Comodule, algebra: Arc<Algebra>) -> ModulePresentation {
    let c = m.base();
    let f = c.field();
    let actions = (0..c.dim())
        .map(|s| {
            let trip = (0..m.dim())
                .flat_map(|t| m.coaction(t).iter().filter(move |(i, _, _)| *i == s).map(move |(_, j, v)| (*j, t, v.clone())));
            Matrix::from_triplets(f, m.dim(), m.dim(), trip.collect::<Vec<_>>())
        })
        .collect();
    ModulePresentation { algebra, dim: m.dim(), actions }
}

/// The inverse of Υ over `C*` for finite-dimensional C: `ν(m) = Σ_s e_s ⊗ e^s·m`.
/// Returns `None` when the result is not a comodule.
pub fn module_to_comodule(module: &ModulePresentation, c: &Arc<Coalgebra>) -> Result<Option<Comodule>> {
    if module.algebra().dim() != c.dim() {
        return Err(Error::DimensionMismatch { expected: c.dim(), found: module.algebra().dim() });
    }
    let coaction = (0..module.dim())
        .map(|t| {
            (0..c.dim())
                .flat_map(|s| module.action(s).column(t).entries().iter().map(move |(j, v)| (s, *j, v.clone())))
                .collect()
        })
        .collect();
    let m = Comodule::new(c.clone(), module.dim(), coaction, None)?;
    Ok(m.is_valid().then_some(m))
}

/// Block-triangular extensions `0 → M → E → L → 0`: `ρ_E(a) = [[ρ_M(a), β(a)], [0, ρ_L(a)]]`
/// with `β(xy) = ρ_M(x) β(y) + β(x) ρ_L(y)` and `β(1) = 0`.
pub struct ExtensionSpace {
    pub sub: ModulePresentation,
    pub quotient: ModulePresentation,
    /// Basis of the cocycles β, each a list of `dim M × dim L` matrices per algebra basis element.
    pub cocycles: Vec<Vec<Matrix>>,
}

impl ExtensionSpace {
    pub fn new(sub: &ModulePresentation, quotient: &ModulePresentation) -> Result<Self> {
        let a = sub.algebra().clone();
        if *quotient.algebra() != a {
            return Err(Error::Invalid("modules over different algebras".into()));
        }
        let f = a.field();
        let (dm, dl, n) = (sub.dim(), quotient.dim(), a.dim());
        let block = dm * dl;
        // unknown β(e_a)[r][c] at a * block + c * dm + r
        let var = |x: usize, r: usize, c: usize| x * block + c * dm + r;
        let mut rows: Vec<Vec<(usize, Scalar)>> = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let xy = a.product(x, y);
                for r in 0..dm {
                    for c in 0..dl {
                        // Σ_t xy_t β(t)[r][c] − Σ_k ρ_M(x)[r][k] β(y)[k][c] − Σ_k β(x)[r][k] ρ_L(y)[k][c]
                        let mut row: Vec<(usize, Scalar)> = xy.entries().iter().map(|(t, s)| (var(*t, r, c), s.clone())).collect();
                        for (k, s) in sub.action(x).row_vectors()[r].entries() {
                            row.push((var(y, *k, c), -s.clone()));
                        }
                        for (k, s) in quotient.action(y).column(c).entries() {
                            row.push((var(x, r, *k), -s.clone()));
                        }
                        rows.push(row);
                    }
                }
            }
        }
        for r in 0..dm {
            for c in 0..dl {
                rows.push(a.unit().entries().iter().map(|(t, s)| (var(*t, r, c), s.clone())).collect());
            }
        }
        let trip = rows.iter().enumerate().flat_map(|(i, row)| row.iter().map(move |(j, s)| (i, *j, s.clone())));
        let system = Matrix::from_triplets(f, rows.len(), n * block, trip.collect::<Vec<_>>());
        let cocycles = kernel_basis(&system)
            .vectors()
            .iter()
            .map(|v| {
                (0..n)
                    .map(|x| {
                        let entries = v.entries().iter().filter(|(k, _)| k / block == x).map(|(k, s)| {
                            let off = k % block;
                            (off % dm, off / dm, s.clone())
                        });
                        Matrix::from_triplets(f, dm, dl, entries.collect::<Vec<_>>())
                    })
                    .collect()
            })
            .collect();
        Ok(ExtensionSpace { sub: sub.clone(), quotient: quotient.clone(), cocycles })
    }

    /// The extension module for a given β.
    pub fn extension(&self, beta: &[Matrix]) -> Result<ModulePresentation> {
        let f = self.sub.algebra().field();
        let (dm, dl) = (self.sub.dim(), self.quotient.dim());
        let actions = beta
            .iter()
            .enumerate()
            .map(|(x, b)| {
                let top = self.sub.action(x).hstack(b);
                let bottom = Matrix::zero(f, dl, dm).hstack(self.quotient.action(x));
                top.vstack(&bottom)
            })
            .collect();
        ModulePresentation::new(self.sub.algebra().clone(), dm + dl, actions)
    }

    pub fn random_extension<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ModulePresentation> {
        let f = self.sub.algebra().field();
        let n = self.sub.algebra().dim();
        let mut beta = vec![Matrix::zero(f, self.sub.dim(), self.quotient.dim()); n];
        for basis in &self.cocycles {
            let s = f.random(rng);
            for (b, x) in beta.iter_mut().zip(basis) {
                *b = b.add_scaled(&s, x);
            }
        }
        self.extension(&beta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalg::GradedCoalgebra;
    use crate::dualalg::dual_algebra;
    use crate::exactlin::FieldSpec;
    use rand::SeedableRng;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn trivial_comodule_gives_augmentation_module() {
        let c = Arc::new(GradedCoalgebra::tensor(2, 2, q()).flatten());
        let m = comodule_to_module(&Comodule::trivial(c.clone()));
        assert_eq!(m, ModulePresentation::trivial(Arc::new(dual_algebra(&c))).unwrap());
    }

    #[test]
    fn regular_dual_numbers_module() {
        let c = Arc::new(GradedCoalgebra::tensor(1, 1, q()).flatten());
        let m = comodule_to_module(&Comodule::regular(c));
        assert!(m.is_module());
        // e^1 sends e_1 to e_0 and kills e_0
        assert_eq!(m.action(1).to_dense(), Matrix::from_i64(q(), &[vec![0, 1], vec![0, 0]]).to_dense());
    }

    #[test]
    fn convention_is_pinned_by_module_axioms() {
        let c = Arc::new(GradedCoalgebra::tensor(2, 2, q()).flatten());
        let m = Comodule::regular(c);
        assert!(comodule_to_module_with(&m, Convention::Reversed).is_module());
        assert!(!comodule_to_module_with(&m, Convention::Sweedler).is_module());
    }

    #[test]
    fn sums_and_round_trip() {
        let c = Arc::new(GradedCoalgebra::symmetric(2, 2, q()).unwrap().flatten());
        let a = Comodule::regular(c.clone());
        let b = Comodule::trivial(c.clone());
        let s = comodule_to_module(&a.direct_sum(&b).unwrap());
        assert_eq!(s, comodule_to_module(&a).direct_sum(&comodule_to_module(&b)).unwrap());
        let back = module_to_comodule(&s, &c).unwrap().unwrap();
        assert_eq!(comodule_to_module(&back), s);
    }

    #[test]
    fn extensions_come_from_comodules() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let c = Arc::new(GradedCoalgebra::tensor(2, 2, q()).flatten());
        let k = comodule_to_module(&Comodule::trivial(c.clone()));
        let space = ExtensionSpace::new(&k, &k).unwrap();
        assert!(!space.cocycles.is_empty());
        for _ in 0..3 {
            let e = space.random_extension(&mut rng).unwrap();
            assert!(e.is_module());
            let back = module_to_comodule(&e, &c).unwrap().expect("extension is rational");
            assert_eq!(comodule_to_module(&back), e);
        }
    }

    #[test]
    fn free_module_homs() {
        let a = Arc::new(dual_algebra(&GradedCoalgebra::tensor(1, 2, q()).flatten()));
        let free = ModulePresentation::free(a.clone(), 1);
        assert!(free.is_module());
        let k = ModulePresentation::trivial(a).unwrap();
        assert_eq!(free.hom_basis(&k).len(), 1);
        assert_eq!(free.hom_basis(&free).len(), 3);
        for h in free.hom_basis(&free) {
            assert!(free.is_homomorphism(&free, &h));
        }
    }
}
