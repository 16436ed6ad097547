use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::algebra::Algebra;
use crate::cobar::{Bidegree, ExtTable, Window};
use crate::error::{Error, Result};
use crate::exactlin::{rank, sign, Matrix, Scalar, SparseVector};

/// Tuples of augmentation-ideal basis indices with a fixed degree sum.
struct BarCell {
    tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl BarCell {
    fn new(tuples: Vec<Vec<usize>>) -> Self {
        let index = tuples.iter().enumerate().map(|(k, t)| (t.clone(), k)).collect();
        BarCell { tuples, index }
    }
}

fn tuples(degrees: &[usize], arity: usize, total: Option<usize>) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                (0..degrees.len()).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
        if let Some(j) = total {
            out.retain(|t| t.iter().map(|&x| degrees[x]).sum::<usize>() <= j);
        }
    }
    if let Some(j) = total {
        out.retain(|t| t.iter().map(|&x| degrees[x]).sum::<usize>() == j);
    }
    out
}

/// Ext of the trivial module over an augmented algebra from the normalized
/// bar complex `(A_+)^{⊗i}` with `b = Σ_s (-1)^s (… a_s a_{s+1} …)`; the
/// Ext dimensions are those of its homology.
pub fn bar_ext_table(a: &Algebra, imax: usize, jmax: Option<usize>) -> Result<ExtTable> {
    if !a.is_augmented() {
        return Err(Error::Invalid("bar construction needs an augmented algebra".into()));
    }
    let f = a.field();
    let ideal = a.augmentation_ideal()?;
    let n = ideal.dim();
    // products inside A_+, in ideal coordinates
    let prod: Vec<Vec<Vec<(usize, Scalar)>>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let v = a.mul(&ideal.vectors()[x], &ideal.vectors()[y]);
                    let c = ideal.coordinates(&v).expect("augmentation ideal is closed under products");
                    c.into_iter().enumerate().filter(|(_, s)| !s.is_zero()).collect()
                })
                .collect()
        })
        .collect();
    let degrees: Option<Vec<usize>> = a.grading().map(|g| ideal.pivots().iter().map(|&p| g[p]).collect());
    if degrees.is_none() && jmax.is_some() {
        return Err(Error::Invalid("an internal-degree window needs a graded algebra".into()));
    }
    let keys: Vec<(usize, Option<usize>)> = match &degrees {
        None => (0..=imax + 1).map(|i| (i, None)).collect(),
        Some(d) => {
            let top = d.iter().copied().max().unwrap_or(0);
            (0..=imax + 1)
                .flat_map(|i| (0..=jmax.map_or(i * top, |w| w.min(i * top))).map(move |j| (i, Some(j))))
                .collect()
        }
    };
    let flat = vec![0; n];
    let cells: BTreeMap<(usize, Option<usize>), BarCell> = keys
        .par_iter()
        .map(|&(i, j)| ((i, j), BarCell::new(tuples(degrees.as_deref().unwrap_or(&flat), i, j))))
        .collect();
    // boundary out of (i, j) into (i - 1, j)
    let ranks: BTreeMap<(usize, Option<usize>), usize> = cells
        .par_iter()
        .filter(|((i, _), _)| *i >= 1)
        .map(|(&(i, j), src)| {
            let Some(dst) = cells.get(&(i - 1, j)) else { return ((i, j), 0) };
            let mut trip = Vec::new();
            for (col, t) in src.tuples.iter().enumerate() {
                for s in 0..i - 1 {
                    let sg = sign(f, s);
                    for (z, c) in &prod[t[s]][t[s + 1]] {
                        let mut u = Vec::with_capacity(i - 1);
                        u.extend_from_slice(&t[..s]);
                        u.push(*z);
                        u.extend_from_slice(&t[s + 2..]);
                        trip.push((dst.index[&u], col, c * &sg));
                    }
                }
            }
            ((i, j), rank(&Matrix::from_triplets(f, dst.tuples.len(), src.tuples.len(), trip)))
        })
        .collect();
    let dims = cells.iter().filter(|((i, _), _)| *i <= imax).map(|(&(i, j), c)| {
        let out = ranks.get(&(i, j)).copied().unwrap_or(0);
        let inc = ranks.get(&(i + 1, j)).copied().unwrap_or(0);
        (Bidegree::new(i, j), c.tuples.len() - out - inc)
    });
    Ok(ExtTable::new(
        Window { imax, jmax },
        dims.collect::<Vec<_>>(),
        "bar complex of the given finite-dimensional algebra",
    ))
}

/// Checks `b∘b = 0` on the ungraded bar complex up to arity `imax + 1`.
pub fn bar_differential_squares_to_zero(a: &Algebra, imax: usize) -> Result<bool> {
    let f = a.field();
    let ideal = a.augmentation_ideal()?;
    let n = ideal.dim();
    let flat = vec![0; n];
    let cells: Vec<BarCell> = (0..=imax + 1).map(|i| BarCell::new(tuples(&flat, i, None))).collect();
    let mats: Vec<Matrix> = (1..=imax + 1)
        .map(|i| {
            let (src, dst) = (&cells[i], &cells[i - 1]);
            let cols = src
                .tuples
                .iter()
                .map(|t| {
                    let mut acc = SparseVector::zero(dst.tuples.len());
                    for s in 0..i - 1 {
                        let v = a.mul(&ideal.vectors()[t[s]], &ideal.vectors()[t[s + 1]]);
                        for (z, c) in ideal.coordinates(&v).unwrap().into_iter().enumerate() {
                            if c.is_zero() {
                                continue;
                            }
                            let mut u = t[..s].to_vec();
                            u.push(z);
                            u.extend_from_slice(&t[s + 2..]);
                            acc = acc.add_scaled(&(c * sign(f, s)), &SparseVector::unit(f, dst.tuples.len(), dst.index[&u]));
                        }
                    }
                    acc
                })
                .collect();
            Matrix::from_columns(f, dst.tuples.len(), cols)
        })
        .collect();
    Ok(mats.windows(2).all(|w| w[0].mul(&w[1]).is_zero()))
}
