use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use super::algebra::dual_algebra;
use super::ext::module_ext;
use super::module::comodule_to_module_over;
use crate::coalg::Comodule;
use crate::error::{Error, Result};
use crate::exactlin::{cohomology_dims, Matrix, SparseVector};
use crate::resolve::minimal_coresolution;

/// Comodule-side and module-side Ext dimensions, degree by degree.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub n: usize,
    pub comodule_side: Vec<usize>,
    pub module_side: Vec<usize>,
    pub per_degree: Vec<bool>,
    pub verdict: bool,
    pub seconds: f64,
}

/// `Ext_C^i(L, M)` from a cofree coresolution `M → C⊗V_•`, using
/// `Hom_C(L, C⊗V) ≅ Hom_k(L, V)`. The transported coboundary is
/// `ψ ↦ (ε⊗id) d (id⊗ψ) ν_L`.
pub fn comodule_ext(l: &Comodule, m: &Comodule, n: usize) -> Result<Vec<usize>> {
    if l.base() != m.base() {
        return Err(Error::Invalid("comodules over different coalgebras".into()));
    }
    let c = m.base();
    let f = c.field();
    let dl = l.dim();
    let r = minimal_coresolution(m, n + 1)?;
    let vdims = r.cogenerator_dims();
    // (ε⊗id): C⊗V → V
    let counit = |v: usize| {
        Matrix::from_triplets(
            f,
            v,
            c.dim() * v,
            (0..c.dim()).flat_map(|t| (0..v).map(move |a| (a, t * v + a, c.counit()[t].clone()))).collect::<Vec<_>>(),
        )
    };
    let maps: Vec<Matrix> = r
        .differentials()
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let (v, w) = (vdims[i], vdims[i + 1]);
            let p = counit(w).mul(d);
            // ψ = E_{a,x} (v_a ← l_x), vectorized at a * dl + x
            let cols = (0..v * dl)
                .map(|idx| {
                    let (a, x) = (idx / dl, idx % dl);
                    let mut out = SparseVector::zero(w * dl);
                    for y in 0..dl {
                        let lifted = SparseVector::from_pairs(
                            c.dim() * v,
                            l.coaction(y).iter().filter(|(_, j, _)| *j == x).map(|(t, _, s)| (t * v + a, s.clone())).collect::<Vec<_>>(),
                        );
                        if lifted.is_zero() {
                            continue;
                        }
                        let img = p.mul_vector(&lifted);
                        let placed = SparseVector::from_pairs(w * dl, img.entries().iter().map(|(b, s)| (b * dl + y, s.clone())));
                        out = out.add_scaled(&f.one(), &placed);
                    }
                    out
                })
                .collect();
            Matrix::from_columns(f, w * dl, cols)
        })
        .collect();
    let dims: Vec<usize> = vdims.iter().map(|v| v * dl).collect();
    let mut h = cohomology_dims(&dims, &maps);
    h.truncate(n + 1);
    Ok(h)
}

/// Ext over C versus Ext over C* of the same pair, for degrees `0..=n`.
pub fn compare_theorem1(l: &Comodule, m: &Comodule, n: usize) -> Result<ComparisonReport> {
    let start = Instant::now();
    let c = m.base();
    c.require_conilpotent()?;
    let comodule_side = comodule_ext(l, m, n)?;
    let algebra = Arc::new(dual_algebra(c));
    let module_side = module_ext(&comodule_to_module_over(l, algebra.clone()), &comodule_to_module_over(m, algebra), n)?;
    let per_degree: Vec<bool> = comodule_side.iter().zip(&module_side).map(|(x, y)| x == y).collect();
    let verdict = per_degree.len() == n + 1 && per_degree.iter().all(|b| *b);
    Ok(ComparisonReport { n, comodule_side, module_side, per_degree, verdict, seconds: start.elapsed().as_secs_f64() })
}
