use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use super::complex::{Bidegree, CobarComplex};
use crate::exactlin::rank;

/// Range of bidegrees an [`ExtTable`] covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub imax: usize,
    pub jmax: Option<usize>,
}

/// Nonzero Ext dimensions by bidegree. Absent bidegrees inside the window are zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtTable {
    pub window: Window,
    #[serde(serialize_with = "entries_as_triples")]
    pub entries: BTreeMap<Bidegree, usize>,
    pub truncation_note: String,
}

fn entries_as_triples<S: Serializer>(e: &BTreeMap<Bidegree, usize>, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(e.len()))?;
    for (b, d) in e {
        seq.serialize_element(&(b.i, b.j, d))?;
    }
    seq.end()
}

impl ExtTable {
    pub fn new(window: Window, dims: impl IntoIterator<Item = (Bidegree, usize)>, note: impl Into<String>) -> Self {
        let entries = dims.into_iter().filter(|(_, d)| *d > 0).collect();
        ExtTable { window, entries, truncation_note: note.into() }
    }

    pub fn get(&self, i: usize, j: Option<usize>) -> usize {
        self.entries.get(&Bidegree::new(i, j)).copied().unwrap_or(0)
    }

    /// Dimension of `Ext^i` summed over internal degrees.
    pub fn total(&self, i: usize) -> usize {
        self.entries.iter().filter(|(b, _)| b.i == i).map(|(_, d)| d).sum()
    }

    pub fn totals(&self) -> Vec<usize> {
        (0..=self.window.imax).map(|i| self.total(i)).collect()
    }

    pub fn is_graded(&self) -> bool {
        self.window.jmax.is_some() || self.entries.keys().any(|b| b.j.is_some())
    }

    /// Entries agree, ignoring the truncation note.
    pub fn same_entries(&self, other: &ExtTable) -> bool {
        self.window == other.window && self.entries == other.entries
    }

    /// Restriction to `i ≤ imax` and (for graded tables) `j ≤ jmax`.
    pub fn restrict(&self, imax: usize, jmax: Option<usize>) -> ExtTable {
        let keep = |b: &Bidegree| b.i <= imax && match (b.j, jmax) {
            (Some(j), Some(w)) => j <= w,
            _ => true,
        };
        ExtTable {
            window: Window { imax, jmax: jmax.or(self.window.jmax) },
            entries: self.entries.iter().filter(|(b, _)| keep(b)).map(|(b, d)| (*b, *d)).collect(),
            truncation_note: self.truncation_note.clone(),
        }
    }
}

/// `H^{i,j} = dim − rank(d out) − rank(d in)` over every cell with `i ≤ imax`.
pub fn ext_table(cx: &CobarComplex) -> ExtTable {
    let ranks: BTreeMap<Bidegree, usize> = cx.differentials.par_iter().map(|(b, d)| (*b, rank(d))).collect();
    let dims = cx.bidegrees().filter(|b| b.i <= cx.imax()).map(|b| {
        let out = ranks.get(&b).copied().unwrap_or(0);
        let inc = if b.i == 0 { 0 } else { ranks.get(&Bidegree::new(b.i - 1, b.j)).copied().unwrap_or(0) };
        (b, cx.term_dim(b) - out - inc)
    });
    ExtTable::new(Window { imax: cx.imax(), jmax: cx.jmax() }, dims.collect::<Vec<_>>(), cx.truncation_note())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalg::{Coalgebra, GradedCoalgebra};
    use crate::exactlin::FieldSpec;
    use std::sync::Arc;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn dual_numbers(f: FieldSpec) -> Arc<Coalgebra> {
        Arc::new(GradedCoalgebra::tensor(1, 1, f).flatten().with_grading(None).unwrap())
    }

    #[test]
    fn dual_numbers_ext_is_one_everywhere() {
        for f in [q(), FieldSpec::prime(2).unwrap(), FieldSpec::prime(3).unwrap()] {
            let t = ext_table(&CobarComplex::build(dual_numbers(f), 5, None).unwrap());
            assert_eq!(t.totals(), vec![1; 6]);
        }
    }

    #[test]
    fn tensor_coalgebra_ext_concentrated_in_degree_one() {
        let g = GradedCoalgebra::tensor(2, 3, q());
        let t = ext_table(&CobarComplex::build_graded(&g, 3, Some(3)).unwrap());
        assert_eq!(t.get(0, Some(0)), 1);
        assert_eq!(t.get(1, Some(1)), 2);
        assert_eq!(t.entries.len(), 2);
    }

    #[test]
    fn symmetric_coalgebra_ext_is_exterior() {
        let g = GradedCoalgebra::symmetric(2, 4, q()).unwrap();
        let t = ext_table(&CobarComplex::build_graded(&g, 3, Some(4)).unwrap());
        let expect: BTreeMap<_, _> =
            [((0, 0), 1), ((1, 1), 2), ((2, 2), 1)].into_iter().map(|((i, j), d)| (Bidegree::new(i, Some(j)), d)).collect();
        assert_eq!(t.entries, expect);
    }

    #[test]
    fn serializes_entries_as_triples() {
        let t = ext_table(&CobarComplex::build(dual_numbers(q()), 1, None).unwrap());
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["entries"], serde_json::json!([[0, null, 1], [1, null, 1]]));
    }
}
