use std::collections::BTreeMap;

use serde::Serialize;

use super::coresolution::MinimalCoresolution;
use crate::coalg::Comodule;
use crate::error::Result;
use crate::exactlin::{kernel_basis, rank, solve_many, Matrix};

/// A projective resolution `… → P_1 → P_0 → N*` of C*-modules, obtained by
/// dualizing a cofree coresolution of a right C-comodule N.
#[derive(Clone, Debug)]
pub struct ContramoduleResolution {
    pub cogenerator_dims: Vec<usize>,
    /// `P_i = (C⊗V_i)*`.
    pub term_dims: Vec<usize>,
    /// `maps[i] : P_{i+1} → P_i`, transposes of the coresolution differentials.
    pub maps: Vec<Matrix>,
    /// `P_0 → N*`.
    pub augmentation: Matrix,
    /// `actions[i][s]`: action of the dual basis element `e^s` on `P_i`.
    pub actions: Vec<Vec<Matrix>>,
    grouplike: usize,
    degrees: Vec<Option<Vec<usize>>>,
}

/// Ext dimensions of a contramodule resolution, total and per internal degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContraExt {
    pub dims: Vec<usize>,
    pub graded: Option<BTreeMap<(usize, usize), usize>>,
}

/// Right action of `e^s` on a right C-comodule written as a left
/// `C^op`-comodule: `x·e^s = Σ c x_j` over terms `(s, j, c)` of `ν(x)`.
fn right_actions(j: &Comodule) -> Vec<Matrix> {
    let f = j.base().field();
    (0..j.base().dim())
        .map(|s| {
            let trip = (0..j.dim()).flat_map(|x| {
                j.coaction(x).iter().filter(move |(i, _, _)| *i == s).map(move |(_, y, c)| (*y, x, c.clone()))
            });
            Matrix::from_triplets(f, j.dim(), j.dim(), trip.collect::<Vec<_>>())
        })
        .collect()
}

/// `r` is a coresolution of a left `C^op`-comodule, i.e. a right C-comodule.
pub fn dualize_to_contramodule_resolution(r: &MinimalCoresolution) -> Result<ContramoduleResolution> {
    let base = r.base();
    let mut actions = Vec::new();
    let mut degrees = Vec::new();
    for s in r.steps() {
        let v = s.cogenerator_dim;
        let cofree = Comodule::cofree(base.clone(), v, s.cogenerator_degrees.as_deref());
        actions.push(right_actions(&cofree).iter().map(Matrix::transpose).collect());
        degrees.push(cofree.grading().map(<[usize]>::to_vec));
    }
    Ok(ContramoduleResolution {
        cogenerator_dims: r.cogenerator_dims(),
        term_dims: r.steps().iter().map(|s| base.dim() * s.cogenerator_dim).collect(),
        maps: r.differentials().iter().map(Matrix::transpose).collect(),
        augmentation: r.steps()[0].embedding.transpose(),
        actions,
        grouplike: base.grouplike(),
        degrees,
    })
}

impl ContramoduleResolution {
    /// Each `maps[i]` commutes with the action, so this is a complex of modules.
    pub fn is_module_complex(&self) -> bool {
        self.maps.iter().enumerate().all(|(i, d)| {
            self.actions[i].iter().zip(&self.actions[i + 1]).all(|(a, b)| a.mul(d) == d.mul(b))
        })
    }

    pub fn is_exact(&self) -> bool {
        (0..self.term_dims.len()).all(|i| {
            let out = if i == 0 { &self.augmentation } else { &self.maps[i - 1] };
            let inc = self.maps.get(i);
            let ri = inc.map_or(0, rank);
            inc.is_none_or(|m| out.mul(m).is_zero()) && (inc.is_none() || rank(out) + ri == self.term_dims[i])
        })
    }

    /// Basis (as columns of functionals) of `Hom_{C*}(P_i, k)`, where k is
    /// the module on which `e^s` acts by `[s = g]`.
    fn hom_to_trivial(&self, i: usize) -> Matrix {
        let dim = self.term_dims[i];
        let f = self.augmentation.field();
        // λ A_s = [s = g] λ  ⇔  (A_s − [s = g] I)^T λ^T = 0.
        let blocks: Vec<Matrix> = self.actions[i]
            .iter()
            .enumerate()
            .map(|(s, a)| {
                let a = if s == self.grouplike { a.sub(&Matrix::identity(f, dim)) } else { a.clone() };
                a.transpose()
            })
            .collect();
        let stacked = blocks.iter().skip(1).fold(blocks.first().cloned().unwrap_or(Matrix::zero(f, 0, dim)), |acc, b| acc.vstack(b));
        kernel_basis(&stacked).to_matrix()
    }

    fn degree_of(&self, i: usize, functional: &crate::exactlin::SparseVector) -> Option<usize> {
        let d = self.degrees[i].as_ref()?;
        functional.entries().first().map(|(k, _)| d[*k])
    }

    /// Cohomology of `Hom_{C*}(P_•, k)`.
    pub fn ext_dims(&self) -> ContraExt {
        let len = self.term_dims.len();
        let homs: Vec<Matrix> = (0..len).map(|i| self.hom_to_trivial(i)).collect();
        // induced[i]: Hom(P_i,k) → Hom(P_{i+1},k), λ ↦ λ ∘ maps[i].
        let induced: Vec<Matrix> = (0..len.saturating_sub(1))
            .map(|i| {
                let pulled = self.maps[i].transpose().mul(&homs[i]);
                solve_many(&homs[i + 1], &pulled).expect("pullback of an invariant functional is invariant")
            })
            .collect();
        let hdims: Vec<usize> = homs.iter().map(Matrix::cols).collect();
        let dims = crate::exactlin::cohomology_dims(&hdims, &induced);
        let graded = self.degrees.iter().all(Option::is_some).then(|| {
            let deg: Vec<Vec<usize>> =
                (0..len).map(|i| homs[i].columns().iter().map(|v| self.degree_of(i, v).unwrap_or(0)).collect()).collect();
            let mut out = BTreeMap::new();
            for i in 0..len {
                let mut js: Vec<usize> = deg[i].clone();
                js.sort_unstable();
                js.dedup();
                for j in js {
                    let cols: Vec<usize> = (0..hdims[i]).filter(|&k| deg[i][k] == j).collect();
                    let block = |m: &Matrix, rows: &[usize]| rank(&m.select_rows(rows).select_columns(&cols));
                    let out_rank = induced.get(i).map_or(0, |m| {
                        let rows: Vec<usize> = (0..hdims[i + 1]).filter(|&k| deg[i + 1][k] == j).collect();
                        block(m, &rows)
                    });
                    let in_rank = if i == 0 {
                        0
                    } else {
                        let src: Vec<usize> = (0..hdims[i - 1]).filter(|&k| deg[i - 1][k] == j).collect();
                        rank(&induced[i - 1].select_columns(&src).select_rows(&cols))
                    };
                    let h = cols.len() - out_rank - in_rank;
                    if h > 0 {
                        out.insert((i, j), h);
                    }
                }
            }
            out
        });
        ContraExt { dims, graded }
    }
}
