use serde::Serialize;

use super::ext::{free_resolution, module_ext, FreeResolution};
use super::module::ModulePresentation;
use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, kronecker, rank, solve, solve_many, Matrix, Scalar, SparseVector, SubspaceBasis};

/// An exact sequence `… → P_1 → P_0 → L → 0` whose first
/// `projective_prefix_length` terms are projective.
#[derive(Clone, Debug)]
pub struct InitiallyProjectiveResolution {
    pub target: ModulePresentation,
    pub modules: Vec<ModulePresentation>,
    /// `P_0 → L`.
    pub augmentation: Matrix,
    /// `maps[i] : P_{i+1} → P_i`.
    pub maps: Vec<Matrix>,
    pub projective_prefix_length: usize,
    /// The last map is injective, so the sequence stays exact when continued by zeros.
    pub terminated: bool,
}

/// P is projective iff its cover by a free module splits A-linearly.
pub fn is_projective(p: &ModulePresentation) -> bool {
    let a = p.algebra();
    let f = a.field();
    let d = p.dim();
    if d == 0 {
        return true;
    }
    let n = a.dim();
    // cover by A^d on all basis vectors: e_b·1_k ↦ ρ(e_b) p_k
    let cover = Matrix::from_columns(f, d, (0..d).flat_map(|k| (0..n).map(move |b| p.action(b).column(k).clone())).collect());
    let free = ModulePresentation::free(a.clone(), d);
    let big = free.dim();
    // unknown s: P → A^d, vec(s) column-major; s ρ_P(a) = ρ_F(a) s and π s = id
    let id_p = Matrix::identity(f, d);
    let id_big = Matrix::identity(f, big);
    let mut system = kronecker(&id_p, &cover);
    let mut rhs: Vec<Scalar> = (0..d * d).map(|k| if k % d == k / d { f.one() } else { f.zero() }).collect();
    for (rp, rf) in p.actions().iter().zip(free.actions()) {
        let block = kronecker(&rp.transpose(), &id_big).sub(&kronecker(&id_p, rf));
        rhs.extend(std::iter::repeat_n(f.zero(), block.rows()));
        system = system.vstack(&block);
    }
    matches!(solve(&system, &rhs), Ok(Some(_)))
}

impl InitiallyProjectiveResolution {
    /// Checks module maps and exactness, then records the projective prefix.
    pub fn new(
        target: ModulePresentation,
        modules: Vec<ModulePresentation>,
        augmentation: Matrix,
        maps: Vec<Matrix>,
    ) -> Result<Self> {
        if modules.is_empty() || maps.len() + 1 != modules.len() {
            return Err(Error::Invalid("need one map between each pair of consecutive terms".into()));
        }
        if !modules[0].is_homomorphism(&target, &augmentation)
            || maps.iter().enumerate().any(|(i, d)| !modules[i + 1].is_homomorphism(&modules[i], d))
        {
            return Err(Error::Invalid("maps are not module homomorphisms".into()));
        }
        if rank(&augmentation) != target.dim() {
            return Err(Error::Inexact(0));
        }
        let out = |i: usize| if i == 0 { &augmentation } else { &maps[i - 1] };
        for (i, d) in maps.iter().enumerate() {
            if !out(i).mul(d).is_zero() || rank(out(i)) + rank(d) != modules[i].dim() {
                return Err(Error::Inexact(i));
            }
        }
        let last = modules.len() - 1;
        let terminated = rank(out(last)) == modules[last].dim();
        let projective_prefix_length = modules.iter().take_while(|p| is_projective(p)).count();
        Ok(InitiallyProjectiveResolution { target, modules, augmentation, maps, projective_prefix_length, terminated })
    }

    /// The free resolution truncated after `prefix` terms and capped by the
    /// next syzygy: `0 → K → F_{prefix-1} → … → F_0 → L`.
    pub fn degraded(target: &ModulePresentation, prefix: usize) -> Result<Self> {
        let res = free_resolution(target, prefix.max(1) - 1)?;
        let a = target.algebra().clone();
        let mut modules: Vec<ModulePresentation> =
            res.ranks.iter().take(prefix).map(|&r| ModulePresentation::free(a.clone(), r)).collect();
        let mut maps: Vec<Matrix> = res.maps.iter().take(prefix.saturating_sub(1)).cloned().collect();
        let augmentation = if prefix == 0 {
            modules.push(target.clone());
            Matrix::identity(a.field(), target.dim())
        } else {
            let (syzygy, inclusion) = res.syzygy()?;
            modules.push(syzygy);
            maps.push(inclusion);
            res.augmentation.clone()
        };
        Self::new(target.clone(), modules, augmentation, maps)
    }

    pub fn from_free(res: &FreeResolution) -> Result<Self> {
        let a = res.algebra.clone();
        let modules = res.ranks.iter().map(|&r| ModulePresentation::free(a.clone(), r)).collect();
        Self::new(res.target.clone(), modules, res.augmentation.clone(), res.maps.clone())
    }
}

/// Cohomology of `Hom_A(P_•, Y)` in degrees `0..=n`, the true Ext, and the rank
/// of the comparison map `H^i(Hom(P, Y)) → Ext^i(L, Y)` induced by a lift of
/// the identity of L from a free resolution into P.
#[derive(Clone, Debug, Serialize)]
pub struct InitialExtReport {
    pub projective_prefix_length: usize,
    pub hom_cohomology: Vec<usize>,
    pub true_ext: Vec<usize>,
    pub comparison_ranks: Vec<usize>,
    pub matches: Vec<bool>,
    /// Matches in every degree `≤ projective_prefix_length`.
    pub within_prefix: bool,
}

struct HomComplex {
    /// Columns: basis of `Hom(P_i, Y)` vectorized column-major.
    bases: Vec<Matrix>,
    /// Induced coboundaries in those bases.
    coboundaries: Vec<Matrix>,
}

fn vectorize(m: &Matrix) -> SparseVector {
    let rows = m.rows();
    SparseVector::from_pairs(rows * m.cols(), m.triplets().map(|(r, c, v)| (c * rows + r, v.clone())).collect::<Vec<_>>())
}

fn unvectorize(v: &SparseVector, rows: usize, cols: usize, f: crate::exactlin::FieldSpec) -> Matrix {
    Matrix::from_triplets(f, rows, cols, v.entries().iter().map(|(k, s)| (k % rows, k / rows, s.clone())).collect::<Vec<_>>())
}

fn hom_complex(modules: &[ModulePresentation], maps: &[Matrix], y: &ModulePresentation, top: usize) -> HomComplex {
    let f = y.algebra().field();
    let bases: Vec<Matrix> = modules[..=top]
        .iter()
        .map(|p| {
            let cols = p.hom_basis(y).iter().map(vectorize).collect();
            Matrix::from_columns(f, y.dim() * p.dim(), cols)
        })
        .collect();
    let coboundaries = (0..top)
        .map(|i| {
            let pulled: Vec<SparseVector> = bases[i]
                .columns()
                .iter()
                .map(|v| vectorize(&unvectorize(v, y.dim(), modules[i].dim(), f).mul(&maps[i])))
                .collect();
            let pulled = Matrix::from_columns(f, y.dim() * modules[i + 1].dim(), pulled);
            solve_many(&bases[i + 1], &pulled).expect("pullbacks of homomorphisms are homomorphisms")
        })
        .collect();
    HomComplex { bases, coboundaries }
}

/// Lifts `id_L` to module maps `f_i : F_i → P_i`, `i ≤ top`.
fn lift(res: &FreeResolution, p: &InitiallyProjectiveResolution, top: usize) -> Result<Vec<Matrix>> {
    let a = &res.algebra;
    let n = a.dim();
    let f = a.field();
    let mut lifts: Vec<Matrix> = Vec::new();
    for i in 0..=top.min(p.modules.len() - 1) {
        let r = res.ranks[i];
        let target_map = if i == 0 { &p.augmentation } else { &p.maps[i - 1] };
        let mut cols = Vec::with_capacity(r * n);
        for k in 0..r {
            let one_k = SparseVector::from_pairs(r * n, a.unit().entries().iter().map(|(b, s)| (k * n + b, s.clone())));
            let goal = if i == 0 { res.augmentation.mul_vector(&one_k) } else { lifts[i - 1].mul_vector(&res.maps[i - 1].mul_vector(&one_k)) };
            let y = crate::exactlin::solve_sparse(target_map, &goal).ok_or(Error::Inexact(i))?;
            for b in 0..n {
                cols.push(p.modules[i].action(b).mul_vector(&y));
            }
        }
        lifts.push(Matrix::from_columns(f, p.modules[i].dim(), cols));
    }
    Ok(lifts)
}

pub fn ext_via_initially_projective(
    r: &InitiallyProjectiveResolution,
    y: &ModulePresentation,
    n: usize,
) -> Result<InitialExtReport> {
    let f = y.algebra().field();
    if r.modules.len() < n + 2 && !r.terminated {
        return Err(Error::Inexact(r.modules.len() - 1));
    }
    // terms beyond the given sequence are zero
    let mut modules = r.modules.clone();
    let mut maps = r.maps.clone();
    while modules.len() < n + 2 {
        let a = y.algebra().clone();
        let last = modules.last().unwrap().dim();
        modules.push(ModulePresentation::new(a.clone(), 0, vec![Matrix::zero(f, 0, 0); a.dim()])?);
        maps.push(Matrix::zero(f, last, 0));
    }
    let hp = hom_complex(&modules, &maps, y, n + 1);
    let hdims: Vec<usize> = hp.bases.iter().map(Matrix::cols).collect();
    let mut hom_cohomology = crate::exactlin::cohomology_dims(&hdims, &hp.coboundaries);
    hom_cohomology.truncate(n + 1);

    let res = free_resolution(&r.target, n + 1)?;
    let true_ext = module_ext(&r.target, y, n)?;
    let free_modules: Vec<ModulePresentation> =
        res.ranks.iter().map(|&k| ModulePresentation::free(res.algebra.clone(), k)).collect();
    let hq = hom_complex(&free_modules, &res.maps, y, n + 1);
    let padded = InitiallyProjectiveResolution {
        target: r.target.clone(),
        modules: modules.clone(),
        augmentation: r.augmentation.clone(),
        maps: maps.clone(),
        projective_prefix_length: r.projective_prefix_length,
        terminated: true,
    };
    let lifts = lift(&res, &padded, n)?;

    let mut comparison_ranks = Vec::with_capacity(n + 1);
    for i in 0..=n {
        // cocycles of Hom(P, Y) in degree i, pulled back along f_i
        let zp = kernel_basis(&hp.coboundaries[i]);
        let pulled: Vec<SparseVector> = zp
            .vectors()
            .iter()
            .map(|c| {
                let phi = unvectorize(&hp.bases[i].mul_vector(c), y.dim(), modules[i].dim(), f).mul(&lifts[i]);
                crate::exactlin::solve_sparse(&hq.bases[i], &vectorize(&phi)).expect("pullback is a homomorphism")
            })
            .collect();
        let boundaries: Vec<SparseVector> = if i == 0 { Vec::new() } else { hq.coboundaries[i - 1].columns().to_vec() };
        let dim = hq.bases[i].cols();
        let b = SubspaceBasis::span(f, dim, &boundaries);
        let with_image = b.sum(&SubspaceBasis::span(f, dim, &pulled));
        comparison_ranks.push(with_image.dim() - b.dim());
    }
    let matches: Vec<bool> = hom_cohomology.iter().zip(&true_ext).map(|(h, e)| h == e).collect();
    let prefix = r.projective_prefix_length;
    let within_prefix = (0..=n.min(prefix)).all(|i| matches[i] && comparison_ranks[i] == true_ext[i]);
    Ok(InitialExtReport {
        projective_prefix_length: prefix,
        hom_cohomology,
        true_ext,
        comparison_ranks,
        matches,
        within_prefix,
    })
}
