use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exactlin::{FieldSpec, Scalar, SparseVector, SubspaceBasis};

/// A coordinate functional on a countable basis `e_0, e_1, …` that is
/// constant from some index on: `χ(e_i) = head[i]` for `i < head.len()`,
/// `tail` afterwards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventuallyConstant {
    head: Vec<Scalar>,
    tail: Scalar,
}

impl EventuallyConstant {
    pub fn new(mut head: Vec<Scalar>, tail: Scalar) -> Self {
        while head.last().is_some_and(|h| *h == tail) {
            head.pop();
        }
        EventuallyConstant { head, tail }
    }

    pub fn zero(field: FieldSpec) -> Self {
        EventuallyConstant::new(Vec::new(), field.zero())
    }

    pub fn at(&self, i: usize) -> &Scalar {
        self.head.get(i).unwrap_or(&self.tail)
    }

    pub fn tail(&self) -> &Scalar {
        &self.tail
    }

    pub fn head(&self) -> &[Scalar] {
        &self.head
    }

    pub fn combine(&self, s: &Scalar, other: &EventuallyConstant, t: &Scalar) -> Self {
        let n = self.head.len().max(other.head.len());
        let head = (0..n).map(|i| s * self.at(i) + t * other.at(i)).collect();
        EventuallyConstant::new(head, s * &self.tail + t * &other.tail)
    }

    pub fn random<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> Self {
        let len = rng.gen_range(0..6);
        let head = (0..len).map(|_| field.random(rng)).collect();
        EventuallyConstant::new(head, field.random(rng))
    }
}

/// A linear function on the eventually-constant functionals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TaggedCofunctional {
    /// `χ ↦ Σ v_i χ(e_i)`: evaluation at the vector `Σ v_i e_i`.
    FromVector(Vec<Scalar>),
    /// `χ ↦ tail · (eventual value of χ) + Σ c_i χ(e_i)`.
    EventualValue { tail: Scalar, corrections: BTreeMap<usize, Scalar> },
}

impl TaggedCofunctional {
    pub fn eval(&self, chi: &EventuallyConstant) -> Scalar {
        let f = chi.tail.field();
        match self {
            TaggedCofunctional::FromVector(v) => v.iter().enumerate().fold(f.zero(), |acc, (i, s)| acc + s * chi.at(i)),
            TaggedCofunctional::EventualValue { tail, corrections } => corrections
                .iter()
                .fold(tail * &chi.tail, |acc, (i, s)| acc + s * chi.at(*i)),
        }
    }

    /// Comes from a vector in V: either tagged so, or with vanishing eventual part.
    pub fn is_rational(&self) -> bool {
        match self {
            TaggedCofunctional::FromVector(_) => true,
            TaggedCofunctional::EventualValue { tail, .. } => tail.is_zero(),
        }
    }

    /// Coordinates of the vector `x ∈ V` with `f(χ) = χ(x)`, when it exists.
    pub fn representing_vector(&self) -> Option<Vec<Scalar>> {
        match self {
            TaggedCofunctional::FromVector(v) => Some(v.clone()),
            TaggedCofunctional::EventualValue { tail, corrections } if tail.is_zero() => {
                let n = corrections.keys().next_back().map_or(0, |k| k + 1);
                let f = tail.field();
                Some((0..n).map(|i| corrections.get(&i).cloned().unwrap_or_else(|| f.zero())).collect())
            }
            _ => None,
        }
    }

    /// For a candidate vector `x`, an element χ with `χ(x) ≠ f(χ)`, if one exists
    /// in the model: χ vanishes on the supports of x and of the corrections and
    /// is 1 from there on.
    pub fn obstruction(&self, x: &[Scalar], field: FieldSpec) -> Option<EventuallyConstant> {
        let TaggedCofunctional::EventualValue { tail, corrections } = self else { return None };
        if tail.is_zero() {
            return None;
        }
        let n = x.len().max(corrections.keys().next_back().map_or(0, |k| k + 1));
        Some(EventuallyConstant::new(vec![field.zero(); n], field.one()))
    }
}

impl fmt::Display for TaggedCofunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |it: Vec<String>| it.join(", ");
        match self {
            TaggedCofunctional::FromVector(v) => write!(f, "FromVector([{}])", list(v.iter().map(|s| s.to_string()).collect())),
            TaggedCofunctional::EventualValue { tail, corrections } => write!(
                f,
                "EventualValue(tail={tail}, {{{}}})",
                list(corrections.iter().map(|(i, c)| format!("{i}: {c}")).collect())
            ),
        }
    }
}

/// `(α, χ)` in the subring `k ⊕ S` of C*: value at the grouplike and the
/// restriction to the primitives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubringElement {
    pub alpha: Scalar,
    pub chi: EventuallyConstant,
}

impl SubringElement {
    pub fn one(field: FieldSpec) -> Self {
        SubringElement { alpha: field.one(), chi: EventuallyConstant::zero(field) }
    }

    /// `(α, χ)(β, ψ) = (αβ, αψ + βχ)`.
    pub fn mul(&self, other: &SubringElement) -> SubringElement {
        SubringElement { alpha: &self.alpha * &other.alpha, chi: other.chi.combine(&self.alpha, &self.chi, &other.alpha) }
    }

    pub fn random<R: Rng + ?Sized>(field: FieldSpec, rng: &mut R) -> Self {
        SubringElement { alpha: field.random(rng), chi: EventuallyConstant::random(field, rng) }
    }
}

/// `a·e₁ = α e₁`, `a·e₂ = α e₂ + f(χ_a) e₁`.
#[derive(Clone, Debug)]
pub struct TwoDimModule {
    pub field: FieldSpec,
    pub f: TaggedCofunctional,
    /// Mutation hook: adds `f(χ_a) e₂` to `a·e₂`.
    pub corrupted: bool,
}

impl TwoDimModule {
    /// Matrix of the action in the basis (e₁, e₂), as rows.
    pub fn act(&self, a: &SubringElement) -> [[Scalar; 2]; 2] {
        let fa = self.f.eval(&a.chi);
        let z = self.field.zero();
        let d = if self.corrupted { &a.alpha + &fa } else { a.alpha.clone() };
        [[a.alpha.clone(), fa], [z, d]]
    }
}

pub fn build_nonrational_module(field: FieldSpec, f: TaggedCofunctional) -> TwoDimModule {
    TwoDimModule { field, f, corrupted: false }
}

fn mat_mul(x: &[[Scalar; 2]; 2], y: &[[Scalar; 2]; 2]) -> [[Scalar; 2]; 2] {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// `(ab)·e = a·(b·e)` on `samples` seeded random pairs, and the unit acts trivially.
pub fn verify_module_axioms(m: &TwoDimModule, samples: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = m.act(&SubringElement::one(m.field));
    let (o, z) = (m.field.one(), m.field.zero());
    if one != [[o.clone(), z.clone()], [z, o]] {
        return false;
    }
    (0..samples).all(|_| {
        let a = SubringElement::random(m.field, &mut rng);
        let b = SubringElement::random(m.field, &mut rng);
        m.act(&a.mul(&b)) == mat_mul(&m.act(&a), &m.act(&b))
    })
}

pub fn is_rational(f: &TaggedCofunctional) -> bool {
    f.is_rational()
}

/// The largest submodule coming from a comodule: everything when f is
/// rational, the trivial line `span(e₁)` otherwise.
pub fn max_rational_submodule(m: &TwoDimModule) -> SubspaceBasis {
    if m.f.is_rational() {
        SubspaceBasis::whole(m.field, 2)
    } else {
        SubspaceBasis::span(m.field, 2, &[SparseVector::unit(m.field, 2, 0)])
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NonrationalReport {
    pub field: String,
    pub functional: String,
    pub seed: u64,
    pub samples: usize,
    pub module_axioms_verified: bool,
    pub is_rational: bool,
    pub max_rational_submodule: String,
    pub corrupted_action_detected: bool,
}

pub fn nonrational_report(field: FieldSpec, f: TaggedCofunctional, samples: usize, seed: u64) -> NonrationalReport {
    let m = build_nonrational_module(field, f.clone());
    let sub = max_rational_submodule(&m);
    let describe = if sub.dim() == 2 { "whole".to_string() } else { "span(e1)".to_string() };
    let corrupted = TwoDimModule { corrupted: true, ..m.clone() };
    NonrationalReport {
        field: match field {
            FieldSpec::Rationals => "Q".into(),
            FieldSpec::Prime { p } => format!("GF({p})"),
        },
        functional: f.to_string(),
        seed,
        samples,
        module_axioms_verified: verify_module_axioms(&m, samples, seed),
        is_rational: is_rational(&f),
        max_rational_submodule: describe,
        corrupted_action_detected: !verify_module_axioms(&corrupted, samples, seed),
    }
}
