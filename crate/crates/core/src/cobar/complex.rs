use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::coalg::{Coalgebra, GradedCoalgebra, Term};
use crate::error::{Error, Result};
use crate::exactlin::{sign, Matrix};

/// Cohomological degree `i` and, for graded input, internal degree `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Bidegree {
    pub i: usize,
    pub j: Option<usize>,
}

impl Bidegree {
    pub fn new(i: usize, j: Option<usize>) -> Self {
        Bidegree { i, j }
    }
}

/// Basis of one cell `(C_+^{⊗i})_j`: i-tuples of reduced basis indices in
/// lexicographic order.
#[derive(Clone, Debug)]
pub(crate) struct Cell {
    arity: usize,
    len: usize,
    tuples: Vec<u32>,
    /// `None` when the cell holds every tuple, so the position is the
    /// mixed-radix code itself.
    index: Option<HashMap<u128, u32>>,
    radix: usize,
}

fn code(t: &[u32], radix: usize) -> u128 {
    t.iter().fold(0u128, |acc, &x| acc * radix as u128 + x as u128)
}

impl Cell {
    pub(crate) fn full(radix: usize, arity: usize) -> Cell {
        let len = radix.pow(arity as u32);
        let mut tuples = Vec::with_capacity(len * arity);
        let mut cur = vec![0u32; arity];
        for _ in 0..len {
            tuples.extend_from_slice(&cur);
            for s in (0..arity).rev() {
                cur[s] += 1;
                if (cur[s] as usize) < radix {
                    break;
                }
                cur[s] = 0;
            }
        }
        Cell { arity, len, tuples, index: None, radix }
    }

    /// Tuples whose degrees sum to `j`.
    pub(crate) fn graded(degrees: &[usize], arity: usize, j: usize) -> Cell {
        let radix = degrees.len();
        let (lo, hi) = (degrees.iter().copied().min().unwrap_or(0), degrees.iter().copied().max().unwrap_or(0));
        let mut tuples = Vec::new();
        let mut cur = Vec::with_capacity(arity);
        fn rec(
            degrees: &[usize],
            lo: usize,
            hi: usize,
            arity: usize,
            left: usize,
            cur: &mut Vec<u32>,
            out: &mut Vec<u32>,
        ) {
            let slots = arity - cur.len();
            if slots == 0 {
                if left == 0 {
                    out.extend_from_slice(cur);
                }
                return;
            }
            if left < lo * slots || left > hi * slots {
                return;
            }
            for (x, &d) in degrees.iter().enumerate() {
                if d <= left {
                    cur.push(x as u32);
                    rec(degrees, lo, hi, arity, left - d, cur, out);
                    cur.pop();
                }
            }
        }
        if radix > 0 || arity == 0 {
            rec(degrees, lo, hi, arity, j, &mut cur, &mut tuples);
        }
        let len = if arity == 0 { usize::from(j == 0) } else { tuples.len() / arity };
        let index = (0..len).map(|k| (code(&tuples[k * arity..(k + 1) * arity], radix), k as u32)).collect();
        Cell { arity, len, tuples, index: Some(index), radix }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn arity(&self) -> usize {
        self.arity
    }

    pub(crate) fn tuple(&self, k: usize) -> &[u32] {
        &self.tuples[k * self.arity..(k + 1) * self.arity]
    }

    pub(crate) fn position(&self, t: &[u32]) -> Option<usize> {
        let c = code(t, self.radix);
        match &self.index {
            None => Some(c as usize),
            Some(ix) => ix.get(&c).map(|&k| k as usize),
        }
    }
}

/// Matrix of the cobar differential from `src` to `dst` (arity one more):
/// the reduced comultiplication applied in slot s with sign `(-1)^s`.
pub(crate) fn cobar_differential(field: crate::exactlin::FieldSpec, reduced: &[Vec<Term>], src: &Cell, dst: &Cell) -> Matrix {
    let mut trip = Vec::new();
    let mut buf = vec![0u32; src.arity() + 1];
    for col in 0..src.len() {
        let t = src.tuple(col);
        for s in 0..t.len() {
            let sg = sign(field, s);
            buf[..s].copy_from_slice(&t[..s]);
            buf[s + 2..].copy_from_slice(&t[s + 1..]);
            for (a, b, c) in &reduced[t[s] as usize] {
                buf[s] = *a as u32;
                buf[s + 1] = *b as u32;
                let row = dst.position(&buf).expect("comultiplication preserves the grading");
                trip.push((row, col, c * &sg));
            }
        }
    }
    Matrix::from_triplets(field, dst.len(), src.len(), trip)
}

/// The reduced cobar complex `k → C_+ → C_+⊗C_+ → …`, split into cells by
/// internal degree when the coalgebra is graded.
#[derive(Clone, Debug)]
pub struct CobarComplex {
    base: Arc<Coalgebra>,
    imax: usize,
    jmax: Option<usize>,
    truncation_note: String,
    pub(crate) cells: BTreeMap<Bidegree, Cell>,
    pub(crate) differentials: BTreeMap<Bidegree, Matrix>,
}

impl CobarComplex {
    /// Builds cells for `i ≤ imax + 1` and the differentials leaving every
    /// cell with `i ≤ imax`, then checks `d∘d = 0`.
    ///
    /// A grading on `c` splits the complex by internal degree; `jmax` then
    /// restricts the internal degrees kept. Without a grading, `jmax` must be `None`.
    pub fn build(c: Arc<Coalgebra>, imax: usize, jmax: Option<usize>) -> Result<Self> {
        c.require_conilpotent()?;
        let note = match c.grading() {
            Some(_) => "exact for the finite-dimensional (truncated) coalgebra".to_string(),
            None => "exact; ungraded".to_string(),
        };
        Self::build_unchecked(c, imax, jmax, note)
    }

    /// Cobar complex of a truncated graded coalgebra; entries with
    /// `j ≤ jmax ≤ bound` agree with those of the untruncated coalgebra.
    pub fn build_graded(g: &GradedCoalgebra, imax: usize, jmax: Option<usize>) -> Result<Self> {
        let jmax = jmax.unwrap_or(g.bound());
        if jmax > g.bound() {
            return Err(Error::Truncation { jmax, bound: g.bound() });
        }
        let note = format!(
            "graded input truncated at degree {}; entries with j <= {} are independent of the truncation",
            g.bound(),
            jmax
        );
        Self::build_unchecked(Arc::new(g.flatten()), imax, Some(jmax), note)
    }

    fn build_unchecked(c: Arc<Coalgebra>, imax: usize, jmax: Option<usize>, note: String) -> Result<Self> {
        let field = c.field();
        let reduced = c.reduced_comul();
        let n = reduced.len();
        let mut cells = BTreeMap::new();
        match (c.reduced_grading(), jmax) {
            (None, Some(_)) => {
                return Err(Error::Invalid("an internal-degree window needs a graded coalgebra".into()));
            }
            (None, None) => {
                for i in 0..=imax + 1 {
                    cells.insert(Bidegree::new(i, None), Cell::full(n, i));
                }
            }
            (Some(deg), window) => {
                let top = deg.iter().copied().max().unwrap_or(0);
                for i in 0..=imax + 1 {
                    let jhi = window.map_or(i * top, |w| w.min(i * top));
                    for j in 0..=jhi {
                        let cell = Cell::graded(&deg, i, j);
                        if cell.len() > 0 {
                            cells.insert(Bidegree::new(i, Some(j)), cell);
                        }
                    }
                }
            }
        }
        let keys: Vec<Bidegree> = cells.keys().copied().filter(|b| b.i <= imax).collect();
        let differentials: BTreeMap<Bidegree, Matrix> = keys
            .par_iter()
            .map(|b| {
                let src = &cells[b];
                let target = Bidegree::new(b.i + 1, b.j);
                let d = match cells.get(&target) {
                    Some(dst) => cobar_differential(field, &reduced, src, dst),
                    None => Matrix::zero(field, 0, src.len()),
                };
                (*b, d)
            })
            .collect();
        let cx = CobarComplex { base: c, imax, jmax, truncation_note: note, cells, differentials };
        if !cx.d_squared_vanishes() {
            return Err(Error::Invalid("cobar differential does not square to zero".into()));
        }
        Ok(cx)
    }

    pub fn base(&self) -> &Arc<Coalgebra> {
        &self.base
    }

    pub fn imax(&self) -> usize {
        self.imax
    }

    pub fn jmax(&self) -> Option<usize> {
        self.jmax
    }

    pub fn is_graded(&self) -> bool {
        self.base.grading().is_some()
    }

    pub fn truncation_note(&self) -> &str {
        &self.truncation_note
    }

    /// Dimension of the term in bidegree `b` (0 when absent).
    pub fn term_dim(&self, b: Bidegree) -> usize {
        self.cells.get(&b).map_or(0, |c| c.len())
    }

    /// The differential leaving bidegree `b`, for `b.i ≤ imax`.
    pub fn differential(&self, b: Bidegree) -> Option<&Matrix> {
        self.differentials.get(&b)
    }

    pub fn bidegrees(&self) -> impl Iterator<Item = Bidegree> + '_ {
        self.cells.keys().copied()
    }

    /// Basis tuple (reduced basis indices) of position `k` in bidegree `b`.
    pub fn basis_tuple(&self, b: Bidegree, k: usize) -> Vec<usize> {
        self.cells[&b].tuple(k).iter().map(|&x| x as usize).collect()
    }

    pub fn position_of(&self, b: Bidegree, t: &[usize]) -> Option<usize> {
        let t: Vec<u32> = t.iter().map(|&x| x as u32).collect();
        self.cells.get(&b)?.position(&t)
    }

    pub fn d_squared_vanishes(&self) -> bool {
        self.differentials.par_iter().all(|(b, d)| {
            let next = Bidegree::new(b.i + 1, b.j);
            match self.differentials.get(&next) {
                Some(d2) if d2.cols() == d.rows() => d2.mul(d).is_zero(),
                _ => true,
            }
        })
    }
}
