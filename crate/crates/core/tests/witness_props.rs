use std::collections::BTreeMap;

use cobarlab::exactlin::{FieldSpec, Scalar};
use cobarlab::witness::{
    build_contra_witness, build_nonrational_module, is_rational, max_rational_submodule, phi, verify_module_axioms, ContraInput,
    EventuallyConstant, TaggedCofunctional, TaggedLinearMap, TwoDimModule,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![Just(FieldSpec::Rationals), Just(FieldSpec::Prime { p: 3 }), Just(FieldSpec::Prime { p: 101 })]
}

fn functional(f: FieldSpec) -> impl Strategy<Value = TaggedCofunctional> {
    let vector = prop::collection::vec(-5i64..5, 0..6).prop_map(move |v| TaggedCofunctional::FromVector(v.into_iter().map(|x| f.from_i64(x)).collect()));
    let eventual = (-3i64..3, prop::collection::btree_map(0usize..8, -4i64..4, 0..4)).prop_map(move |(t, c)| {
        TaggedCofunctional::EventualValue { tail: f.from_i64(t), corrections: c.into_iter().map(|(i, x)| (i, f.from_i64(x))).collect() }
    });
    prop_oneof![vector, eventual]
}

fn with_field() -> impl Strategy<Value = (FieldSpec, TaggedCofunctional)> {
    field().prop_flat_map(|f| (Just(f), functional(f)))
}

fn eval_at(x: &[Scalar], chi: &EventuallyConstant, f: FieldSpec) -> Scalar {
    x.iter().enumerate().fold(f.zero(), |acc, (i, c)| acc + c * chi.at(i))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_functional_gives_a_module((f, g) in with_field(), seed in any::<u64>()) {
        let m = build_nonrational_module(f, g);
        prop_assert!(verify_module_axioms(&m, 200, seed));
    }

    #[test]
    fn corrupted_action_is_caught_for_nonrational_functionals(f in field(), tail in prop_oneof![-2i64..0, 1i64..3], seed in any::<u64>()) {
        let g = TaggedCofunctional::EventualValue { tail: f.from_i64(tail), corrections: BTreeMap::new() };
        let m = TwoDimModule { field: f, f: g, corrupted: true };
        prop_assert!(!verify_module_axioms(&m, 200, seed));
    }

    #[test]
    fn rationality_has_a_certificate((f, g) in with_field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = build_nonrational_module(f, g.clone());
        if is_rational(&g) {
            let x = g.representing_vector().expect("rational functionals come from vectors");
            for _ in 0..20 {
                let chi = EventuallyConstant::random(f, &mut rng);
                prop_assert_eq!(g.eval(&chi), eval_at(&x, &chi, f));
            }
            prop_assert_eq!(max_rational_submodule(&m).dim(), 2);
        } else {
            prop_assert!(g.representing_vector().is_none());
            for len in 0..6 {
                let x: Vec<Scalar> = (0..len).map(|_| f.random(&mut rng)).collect();
                let chi = g.obstruction(&x, f).expect("non-rational functionals are obstructed");
                prop_assert_ne!(g.eval(&chi), eval_at(&x, &chi, f));
            }
            prop_assert_eq!(max_rational_submodule(&m).dim(), 1);
        }
    }

    #[test]
    fn eventually_constant_arithmetic(f in field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = EventuallyConstant::random(f, &mut rng);
        let b = EventuallyConstant::random(f, &mut rng);
        let (s, t) = (f.random(&mut rng), f.random(&mut rng));
        let c = a.combine(&s, &b, &t);
        for i in 0..10 {
            prop_assert_eq!(c.at(i), &(&(&s * a.at(i)) + &(&t * b.at(i))));
        }
    }

    #[test]
    fn phi_is_linear(f in field(), seed in any::<u64>(), tail in -3i64..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut corrections = BTreeMap::new();
        corrections.insert((1, 2), f.random(&mut rng));
        let g = TaggedLinearMap::DiagonalTail { tail: f.from_i64(tail), corrections };
        let m = TaggedLinearMap::random_finite_rank(f, &mut rng);
        let (s, t) = (f.random(&mut rng), f.random(&mut rng));
        prop_assert_eq!(phi(&g.combine(&s, &m, &t), f), &(&s * &phi(&g, f)) + &(&t * &phi(&m, f)));
        prop_assert!(phi(&m, f).is_zero());
    }

    #[test]
    fn summands_are_invariant_on_module_inputs(f in field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = build_contra_witness(f);
        let h = ContraInput {
            k_at_grouplike: f.random(&mut rng),
            t_at_grouplike: (0..3).map(|i| (i, f.random(&mut rng))).filter(|(_, c)| !c.is_zero()).collect(),
            t_on_primitives: TaggedLinearMap::random_finite_rank(f, &mut rng),
        };
        let (k, t) = w.contraaction(&h);
        prop_assert_eq!(&k, &h.k_at_grouplike);
        prop_assert_eq!(&t, &h.t_at_grouplike);
        prop_assert!(w.splitting_commutes_on(&h));
        let mixed = ContraInput { t_on_primitives: w.g0.clone(), ..h };
        prop_assert!(!w.splitting_commutes_on(&mixed));
    }
}
