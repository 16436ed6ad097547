use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exactlin::{FieldSpec, Scalar};

/// A linear map `V → T` between spaces with countable bases, entries keyed
/// by `(t, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TaggedLinearMap {
    /// Finitely many nonzero entries: an element of `V* ⊗ T`.
    FiniteRank { block: BTreeMap<(usize, usize), Scalar> },
    /// `e_i ↦ tail · t_i` plus finitely many corrections: infinite rank when `tail ≠ 0`.
    DiagonalTail { tail: Scalar, corrections: BTreeMap<(usize, usize), Scalar> },
}

fn add_blocks(x: &BTreeMap<(usize, usize), Scalar>, s: &Scalar, y: &BTreeMap<(usize, usize), Scalar>, t: &Scalar) -> BTreeMap<(usize, usize), Scalar> {
    let mut out: BTreeMap<(usize, usize), Scalar> = x.iter().map(|(k, v)| (*k, s * v)).collect();
    for (k, v) in y {
        let e = out.entry(*k).or_insert_with(|| v.field().zero());
        *e += &(t * v);
    }
    out.retain(|_, v| !v.is_zero());
    out
}

impl TaggedLinearMap {
    pub fn zero() -> Self {
        TaggedLinearMap::FiniteRank { block: BTreeMap::new() }
    }

    /// The witness `e_i ↦ t_i`.
    pub fn identity_tail(field: FieldSpec) -> Self {
        TaggedLinearMap::DiagonalTail { tail: field.one(), corrections: BTreeMap::new() }
    }

    fn parts(&self, field: FieldSpec) -> (Scalar, &BTreeMap<(usize, usize), Scalar>) {
        match self {
            TaggedLinearMap::FiniteRank { block } => (field.zero(), block),
            TaggedLinearMap::DiagonalTail { tail, corrections } => (tail.clone(), corrections),
        }
    }

    /// `s·self + t·other`, staying in the tagged representation.
    pub fn combine(&self, s: &Scalar, other: &TaggedLinearMap, t: &Scalar) -> TaggedLinearMap {
        let f = s.field();
        let (a, x) = self.parts(f);
        let (b, y) = other.parts(f);
        let block = add_blocks(x, s, y, t);
        let tail = s * &a + t * &b;
        if tail.is_zero() {
            TaggedLinearMap::FiniteRank { block }
        } else {
            TaggedLinearMap::DiagonalTail { tail, corrections: block }
        }
    }

    /// Image of `e_v`, as finitely supported T-coordinates.
    pub fn apply(&self, v: usize, field: FieldSpec) -> BTreeMap<usize, Scalar> {
        let (tail, block) = self.parts(field);
        let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
        if !tail.is_zero() {
            out.insert(v, tail);
        }
        for ((t, w), c) in block {
            if *w == v {
                *out.entry(*t).or_insert_with(|| field.zero()) += c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn random_finite_rank<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> Self {
        let n = rng.gen_range(0..8);
        let block = (0..n).map(|_| ((rng.gen_range(0..10), rng.gen_range(0..10)), field.random(rng))).collect();
        TaggedLinearMap::FiniteRank { block: add_blocks(&block, &field.one(), &BTreeMap::new(), &field.zero()) }
    }
}

/// `φ : Hom(V, T) → k` on the tagged maps: zero on finite rank, the tail otherwise.
pub fn phi(m: &TaggedLinearMap, field: FieldSpec) -> Scalar {
    match m {
        TaggedLinearMap::FiniteRank { .. } => field.zero(),
        TaggedLinearMap::DiagonalTail { tail, .. } => tail.clone(),
    }
}

/// An element `h = (h_k, h_T)` of `Hom(C, k ⊕ T)`, recorded through what the
/// contraaction reads: `h_k(g)`, `h_T(g)` and `h_T` restricted to V.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContraInput {
    pub k_at_grouplike: Scalar,
    pub t_at_grouplike: BTreeMap<usize, Scalar>,
    pub t_on_primitives: TaggedLinearMap,
}

/// `Q = k ⊕ T` with `π(h) = (h_k(g) + φ(h_T|_V), h_T(g))`.
#[derive(Clone, Debug)]
pub struct ContraWitness {
    pub field: FieldSpec,
    pub g0: TaggedLinearMap,
}

impl ContraWitness {
    /// `(k-component, T-component)` of the contraaction.
    pub fn contraaction(&self, h: &ContraInput) -> (Scalar, BTreeMap<usize, Scalar>) {
        (&h.k_at_grouplike + phi(&h.t_on_primitives, self.field), h.t_at_grouplike.clone())
    }

    /// `π_{T,k}` alone.
    pub fn mixing(&self, m: &TaggedLinearMap) -> Scalar {
        phi(m, self.field)
    }

    /// The trivial contraaction on k: `h ↦ h(g)`.
    fn trivial_k(&self, k_at_grouplike: &Scalar) -> Scalar {
        k_at_grouplike.clone()
    }

    /// The splitting `q : Q → k` is contramodule-linear on `h` iff
    /// `q(π(h)) = π_k(q∘h)`.
    pub fn splitting_commutes_on(&self, h: &ContraInput) -> bool {
        let (k_part, _) = self.contraaction(h);
        k_part == self.trivial_k(&h.k_at_grouplike)
    }
}

pub fn build_contra_witness(field: FieldSpec) -> ContraWitness {
    ContraWitness { field, g0: TaggedLinearMap::identity_tail(field) }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContraReport {
    pub seed: u64,
    pub finite_rank_samples: usize,
    pub module_trivial: bool,
    pub contra_nontrivial: bool,
    pub splitting_not_contra_linear: bool,
}

impl ContraReport {
    pub fn all(&self) -> bool {
        self.module_trivial && self.contra_nontrivial && self.splitting_not_contra_linear
    }
}

pub fn verify_contra_witness(w: &ContraWitness, samples: usize, seed: u64) -> ContraReport {
    let f = w.field;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // inputs from C* ⊗ T have finite-rank V-components
    let module_trivial = (0..samples).all(|_| {
        let h = ContraInput {
            k_at_grouplike: f.zero(),
            t_at_grouplike: BTreeMap::new(),
            t_on_primitives: TaggedLinearMap::random_finite_rank(f, &mut rng),
        };
        w.contraaction(&h).0.is_zero()
    });
    let contra_nontrivial = !w.mixing(&w.g0).is_zero();
    let h0 = ContraInput { k_at_grouplike: f.zero(), t_at_grouplike: BTreeMap::new(), t_on_primitives: w.g0.clone() };
    let splitting_not_contra_linear = !w.splitting_commutes_on(&h0);
    ContraReport { seed, finite_rank_samples: samples, module_trivial, contra_nontrivial, splitting_not_contra_linear }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn phi_kills_finite_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            assert!(phi(&TaggedLinearMap::random_finite_rank(q(), &mut rng), q()).is_zero());
        }
        assert!(phi(&TaggedLinearMap::identity_tail(q()), q()).is_one());
    }

    #[test]
    fn phi_is_linear_on_tagged_combinations() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = TaggedLinearMap::identity_tail(q());
        for _ in 0..20 {
            let m = TaggedLinearMap::random_finite_rank(q(), &mut rng);
            let (s, t) = (q().random(&mut rng), q().random(&mut rng));
            let c = g.combine(&s, &m, &t);
            assert_eq!(phi(&c, q()), &s * &phi(&g, q()) + &t * &phi(&m, q()));
        }
        // g − g has finite rank
        assert_eq!(g.combine(&q().one(), &g, &-q().one()), TaggedLinearMap::zero());
    }

    #[test]
    fn apply_diagonal_tail() {
        let mut corrections = BTreeMap::new();
        corrections.insert((0, 3), q().from_i64(2));
        let m = TaggedLinearMap::DiagonalTail { tail: q().one(), corrections };
        let img = m.apply(3, q());
        assert_eq!(img.len(), 2);
        assert_eq!(m.apply(5, q()).get(&5), Some(&q().one()));
    }

    #[test]
    fn default_witness_report() {
        let r = verify_contra_witness(&build_contra_witness(q()), 10, 0);
        assert!(r.module_trivial && r.contra_nontrivial && r.splitting_not_contra_linear);
    }

    #[test]
    fn summands_are_module_invariant() {
        // the T-component of π ignores h_k and the k-component sees only h_k on module inputs
        let w = build_contra_witness(q());
        let h = ContraInput {
            k_at_grouplike: q().from_i64(3),
            t_at_grouplike: [(1, q().one())].into_iter().collect(),
            t_on_primitives: TaggedLinearMap::zero(),
        };
        assert_eq!(w.contraaction(&h), (q().from_i64(3), h.t_at_grouplike.clone()));
        assert!(w.splitting_commutes_on(&h));
    }
}
