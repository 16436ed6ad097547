use std::sync::Arc;

use super::algebra::Algebra;
use super::module::ModulePresentation;
use crate::error::{Error, Result};
use crate::exactlin::{cohomology_dims, kernel_basis, rank, solve_many, Matrix, SparseVector, SubspaceBasis};

/// A free resolution `… → A^{r_1} → A^{r_0} → L → 0`.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    pub algebra: Arc<Algebra>,
    pub target: ModulePresentation,
    pub ranks: Vec<usize>,
    /// `A^{r_0} → L`.
    pub augmentation: Matrix,
    /// `maps[i] : A^{r_{i+1}} → A^{r_i}`.
    pub maps: Vec<Matrix>,
}

impl FreeResolution {
    /// Kernel of the last map as a module, with its inclusion into the last free term.
    pub fn syzygy(&self) -> Result<(ModulePresentation, Matrix)> {
        let last = self.maps.last().unwrap_or(&self.augmentation);
        let inclusion = kernel_basis(last).to_matrix();
        let free = ModulePresentation::free(self.algebra.clone(), *self.ranks.last().expect("at least one term"));
        Ok((submodule(&free, &inclusion)?, inclusion))
    }
}

/// Generators of X: a complement of `A_+ X` when the algebra is augmented,
/// extended greedily by unit vectors until they generate.
fn generators(x: &ModulePresentation) -> Vec<usize> {
    let a = x.algebra();
    let f = a.field();
    let mut gens: Vec<usize> = match a.augmentation_ideal() {
        Ok(ideal) => {
            let moved: Vec<SparseVector> = ideal
                .vectors()
                .iter()
                .flat_map(|v| x.act(v).columns().to_vec())
                .collect();
            SubspaceBasis::span(f, x.dim(), &moved).complement_coordinates()
        }
        Err(_) => Vec::new(),
    };
    let mut generated = generated_span(x, &gens);
    for t in 0..x.dim() {
        if generated.dim() == x.dim() {
            break;
        }
        let e = SparseVector::unit(f, x.dim(), t);
        if !generated.contains(&e) {
            gens.push(t);
            generated = generated_span(x, &gens);
        }
    }
    gens
}

fn generated_span(x: &ModulePresentation, gens: &[usize]) -> SubspaceBasis {
    SubspaceBasis::image(&cover_map(x, gens))
}

/// `A^r → X`, `e_b · 1_k ↦ e_b · x_{gens[k]}`.
fn cover_map(x: &ModulePresentation, gens: &[usize]) -> Matrix {
    let a = x.algebra();
    let cols = gens
        .iter()
        .flat_map(|&g| (0..a.dim()).map(move |b| x.action(b).column(g).clone()))
        .collect();
    Matrix::from_columns(a.field(), x.dim(), cols)
}

/// The submodule spanned by the columns of `basis` (which must be closed
/// under the action), in those coordinates.
pub(crate) fn submodule(x: &ModulePresentation, basis: &Matrix) -> Result<ModulePresentation> {
    let actions = x
        .actions()
        .iter()
        .map(|m| solve_many(basis, &m.mul(basis)).ok_or_else(|| Error::Invalid("subspace is not a submodule".into())))
        .collect::<Result<Vec<_>>>()?;
    ModulePresentation::new(x.algebra().clone(), basis.cols(), actions)
}

/// Minimal (over a local augmented algebra) free resolution with `len + 1` free terms.
pub fn free_resolution(target: &ModulePresentation, len: usize) -> Result<FreeResolution> {
    let a = target.algebra().clone();
    let f = a.field();
    let mut current = target.clone();
    let mut inclusion = Matrix::identity(f, target.dim());
    let mut ranks = Vec::new();
    let mut maps = Vec::new();
    let mut augmentation = None;
    for i in 0..=len {
        let gens = generators(&current);
        let cover = cover_map(&current, &gens);
        if rank(&cover) != current.dim() {
            return Err(Error::Inexact(i));
        }
        let into_previous = inclusion.mul(&cover);
        match augmentation {
            None => augmentation = Some(into_previous),
            Some(_) => maps.push(into_previous),
        }
        ranks.push(gens.len());
        if i < len {
            let free = ModulePresentation::free(a.clone(), gens.len());
            inclusion = kernel_basis(&cover).to_matrix();
            current = submodule(&free, &inclusion)?;
        }
    }
    Ok(FreeResolution {
        algebra: a,
        target: target.clone(),
        ranks,
        augmentation: augmentation.expect("at least one step"),
        maps,
    })
}

/// `Hom_A(A^{r_{i}}, M) ≅ M^{r_i}` and the induced coboundaries
/// `φ ↦ φ ∘ maps[i]`, block `(k, l) = Σ_b coeff ρ_M(e_b)` where
/// `maps[i](1_k) = Σ coeff e_b·1_l`.
pub fn free_hom_complex(res: &FreeResolution, m: &ModulePresentation) -> (Vec<usize>, Vec<Matrix>) {
    let a = &res.algebra;
    let f = a.field();
    let n = a.dim();
    let dm = m.dim();
    let dims = res.ranks.iter().map(|r| r * dm).collect();
    let coboundaries = res
        .maps
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let (src, dst) = (res.ranks[i], res.ranks[i + 1]);
            let mut out = Matrix::zero(f, dst * dm, src * dm);
            for k in 0..dst {
                let one_k = SparseVector::from_pairs(dst * n, a.unit().entries().iter().map(|(b, s)| (k * n + b, s.clone())));
                for (row, s) in d.mul_vector(&one_k).entries() {
                    let (l, b) = (row / n, row % n);
                    let block = m.action(b).scale(s);
                    let placed = Matrix::from_triplets(
                        f,
                        dst * dm,
                        src * dm,
                        block.triplets().map(|(r, c, v)| (k * dm + r, l * dm + c, v.clone())).collect::<Vec<_>>(),
                    );
                    out = out.add(&placed);
                }
            }
            out
        })
        .collect();
    (dims, coboundaries)
}

/// `dim Ext^i_A(L, M)` for `0 ≤ i ≤ n`.
pub fn module_ext(l: &ModulePresentation, m: &ModulePresentation, n: usize) -> Result<Vec<usize>> {
    if l.algebra() != m.algebra() {
        return Err(Error::Invalid("modules over different algebras".into()));
    }
    let res = free_resolution(l, n + 1)?;
    let (dims, maps) = free_hom_complex(&res, m);
    let mut h = cohomology_dims(&dims, &maps);
    h.truncate(n + 1);
    Ok(h)
}
