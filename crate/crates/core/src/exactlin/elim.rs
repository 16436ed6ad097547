//! Sparse Gauss(-Jordan) elimination with Markowitz-style pivoting.
//!
//! Vectors are eliminated against each other; the pivot is taken from the
//! active vector with the fewest nonzeros, in the column with the fewest
//! active occurrences. Ties break on (vector index, column index), so the
//! result is fully deterministic.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::{mod_inv, FieldSpec, Scalar};

pub(crate) trait Arith {
    type E: Clone;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// a - c*b
    fn sub_mul(&self, a: &Self::E, c: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn from_scalar(&self, s: &Scalar) -> Self::E;
    fn to_scalar(&self, e: &Self::E) -> Scalar;
}

pub(crate) struct RatArith;

impl Arith for RatArith {
    type E = BigRational;
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub_mul(&self, a: &BigRational, c: &BigRational, b: &BigRational) -> BigRational {
        if c.is_one() {
            a - b
        } else {
            a - c * b
        }
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn from_scalar(&self, s: &Scalar) -> BigRational {
        match s {
            Scalar::Rational(r) => r.clone(),
            _ => panic!("expected a rational scalar"),
        }
    }
    fn to_scalar(&self, e: &BigRational) -> Scalar {
        Scalar::Rational(e.clone())
    }
}

pub(crate) struct ModArith {
    pub p: u64,
}

impl Arith for ModArith {
    type E = u64;
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn sub_mul(&self, a: &u64, c: &u64, b: &u64) -> u64 {
        (a + self.p - c * b % self.p) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        mod_inv(*a, self.p)
    }
    fn from_scalar(&self, s: &Scalar) -> u64 {
        match s {
            Scalar::Modular { value, modulus } => {
                debug_assert_eq!(*modulus as u64, self.p);
                *value as u64
            }
            _ => panic!("expected a modular scalar"),
        }
    }
    fn to_scalar(&self, e: &u64) -> Scalar {
        Scalar::Modular { value: *e as u32, modulus: self.p as u32 }
    }
}

pub(crate) type Row<E> = Vec<(usize, E)>;

/// Outcome of an elimination run.
pub(crate) struct Echelon<E> {
    /// (pivot column, row normalized to 1 at the pivot).
    pub pivots: Vec<(usize, Row<E>)>,
    /// Nonzero rows left with entries only in non-eligible columns.
    pub stuck: Vec<Row<E>>,
}

/// `a - c * b` on sparse rows; reports column churn through the callbacks.
fn axpy<A: Arith>(
    ar: &A,
    a: &Row<A::E>,
    c: &A::E,
    b: &Row<A::E>,
    mut on_add: impl FnMut(usize),
    mut on_remove: impl FnMut(usize),
) -> Row<A::E> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|x| x.0).unwrap_or(usize::MAX);
        let cb = b.get(j).map(|x| x.0).unwrap_or(usize::MAX);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            let v = ar.neg(&ar.mul(c, &b[j].1));
            out.push((cb, v));
            on_add(cb);
            j += 1;
        } else {
            let v = ar.sub_mul(&a[i].1, c, &b[j].1);
            if ar.is_zero(&v) {
                on_remove(ca);
            } else {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn lookup<E>(row: &Row<E>, col: usize) -> Option<&E> {
    row.binary_search_by_key(&col, |x| x.0).ok().map(|k| &row[k].1)
}

/// Eliminates `rows` (sparse, sorted by column, no zeros) over `ncols` columns.
/// Only columns `< eligible` may serve as pivots. With `full`, every pivot
/// column is cleared from all other rows (reduced echelon form).
pub(crate) fn eliminate<A: Arith>(
    ar: &A,
    rows: Vec<Row<A::E>>,
    ncols: usize,
    eligible: usize,
    full: bool,
) -> Echelon<A::E> {
    let n = rows.len();
    let mut rows: Vec<Row<A::E>> = rows;
    let mut active = vec![true; n];
    let mut is_pivot = vec![false; n];
    let mut col_count = vec![0usize; ncols];
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    let mut version = vec![0u32; n];
    let mut heap = BinaryHeap::new();
    for (r, row) in rows.iter().enumerate() {
        for &(c, _) in row {
            col_count[c] += 1;
            col_rows[c].push(r);
        }
        heap.push(Reverse((row.len(), r, 0u32)));
    }
    let mut pivots = Vec::new();
    let mut pivot_sources = Vec::new();
    let mut stuck = Vec::new();

    while let Some(Reverse((len, r, ver))) = heap.pop() {
        if !active[r] || ver != version[r] {
            continue;
        }
        debug_assert_eq!(len, rows[r].len());
        active[r] = false;
        for &(c, _) in &rows[r] {
            col_count[c] -= 1;
        }
        // Markowitz: fewest active occurrences among eligible columns.
        let choice = rows[r]
            .iter()
            .filter(|(c, _)| *c < eligible)
            .min_by_key(|(c, _)| (col_count[*c], *c))
            .map(|(c, _)| *c);
        let Some(pc) = choice else {
            if !rows[r].is_empty() {
                stuck.push(std::mem::take(&mut rows[r]));
            }
            continue;
        };
        let inv = ar.inv(lookup(&rows[r], pc).unwrap());
        let prow: Row<A::E> = rows[r].iter().map(|(c, v)| (*c, ar.mul(v, &inv))).collect();
        rows[r] = prow;
        is_pivot[r] = true;

        let mut targets = std::mem::take(&mut col_rows[pc]);
        targets.sort_unstable();
        targets.dedup();
        for s in targets {
            if s == r || !(active[s] || (full && is_pivot[s])) {
                continue;
            }
            let Some(coef) = lookup(&rows[s], pc).cloned() else { continue };
            let s_active = active[s];
            let mut added = Vec::new();
            let new = {
                let cc = &mut col_count;
                axpy(
                    ar,
                    &rows[s],
                    &coef,
                    &rows[r],
                    |c| added.push(c),
                    |c| {
                        if s_active {
                            cc[c] -= 1;
                        }
                    },
                )
            };
            for c in added {
                if s_active {
                    col_count[c] += 1;
                }
                col_rows[c].push(s);
            }
            rows[s] = new;
            if s_active {
                version[s] += 1;
                heap.push(Reverse((rows[s].len(), s, version[s])));
            }
        }
        col_rows[pc] = vec![r];
        pivots.push(pc);
        pivot_sources.push(r);
    }

    let pivots = pivots
        .into_iter()
        .zip(pivot_sources.iter())
        .map(|(c, &r)| (c, std::mem::take(&mut rows[r])))
        .collect();
    Echelon { pivots, stuck }
}

/// Dispatch helper: runs `f` with the arithmetic matching `field`.
pub(crate) fn with_arith<T>(
    field: FieldSpec,
    rat: impl FnOnce(&RatArith) -> T,
    modular: impl FnOnce(&ModArith) -> T,
) -> T {
    match field {
        FieldSpec::Rationals => rat(&RatArith),
        FieldSpec::Prime { p } => modular(&ModArith { p: p as u64 }),
    }
}
