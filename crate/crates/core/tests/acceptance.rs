//! Acceptance gate: one line per criterion, nonzero exit if any fails.
//! All comparisons are exact (dimensions and field elements); the only
//! tuned quantities are the windows and sample counts pinned below.

use std::sync::Arc;
use std::time::Instant;

use cobarlab::coalg::{Coalgebra, Comodule, GradedCoalgebra};
use cobarlab::cobar::{check_anti_isomorphism, ext_table, CobarComplex, ExtTable};
use cobarlab::dualalg::{
    bar_ext_table, compare_theorem1, dual_algebra, ext_via_initially_projective, free_resolution, graded_dual, module_ext,
    quadratic_algebra, InitiallyProjectiveResolution, ModulePresentation,
};
use cobarlab::exactlin::{kernel_basis, kronecker, rank, FieldSpec, Matrix, SparseVector, SubspaceBasis};
use cobarlab::resolve::{betti_dims, minimal_coresolution, minimal_coresolution_with, Retraction};
use cobarlab::witness::{build_contra_witness, nonrational_report, verify_contra_witness, TaggedCofunctional};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const IMAX: usize = 4;
const JMAX: usize = 6;
const RANDOM_RETRACTIONS: u64 = 5;
const THEOREM1_N: usize = 3;
const PERIODICITY_IMAX: usize = 5;
const ANTI_ISO_IMAX: usize = 3;
const WITNESS_SAMPLES: usize = 200;
const CONTRA_SAMPLES: usize = 10;
const SEED: u64 = 0;
const SUBSTRATE_MATRICES: usize = 1000;

type Outcome = Result<String, String>;

fn q() -> FieldSpec {
    FieldSpec::Rationals
}

fn corpus() -> Vec<(&'static str, Arc<Coalgebra>)> {
    let xy = quadratic_algebra(2, &SubspaceBasis::span(q(), 4, &[SparseVector::unit(q(), 4, 1)]), 4).expect("quadratic");
    vec![
        ("C2", GradedCoalgebra::tensor(1, 1, q())),
        ("C3", GradedCoalgebra::tensor(1, 2, q())),
        ("Ten(2,2)", GradedCoalgebra::tensor(2, 2, q())),
        ("Sym(2,4)", GradedCoalgebra::symmetric(2, 4, q()).expect("char 0")),
        ("dual k<x,y>/(xy), D=4", graded_dual(&xy)),
        ("square-zero", GradedCoalgebra::tensor(2, 1, q())),
    ]
    .into_iter()
    .map(|(n, g)| (n, Arc::new(g.flatten())))
    .collect()
}

fn cobar(c: &Arc<Coalgebra>, imax: usize, jmax: Option<usize>) -> Result<ExtTable, String> {
    CobarComplex::build(c.clone(), imax, jmax).map(|cx| ext_table(&cx)).map_err(|e| e.to_string())
}

fn check(ok: bool, pass: String, fail: String) -> Outcome {
    if ok {
        Ok(pass)
    } else {
        Err(fail)
    }
}

fn left_right_symmetry() -> Outcome {
    let mut failed = Vec::new();
    let corpus = corpus();
    for (name, c) in &corpus {
        let t = cobar(c, IMAX, Some(JMAX))?;
        let t_op = cobar(&Arc::new(c.opposite()), IMAX, Some(JMAX))?;
        if !t.same_entries(&t_op) {
            failed.push(*name);
        }
    }
    check(
        failed.is_empty(),
        format!("{} coalgebras, i <= {IMAX}, j <= {JMAX}, tables equal", corpus.len()),
        format!("tables differ for {failed:?}"),
    )
}

fn cobar_bar_duality() -> Outcome {
    let mut failed = Vec::new();
    for (name, c) in corpus() {
        let t = cobar(&c, IMAX, Some(JMAX))?;
        let b = bar_ext_table(&dual_algebra(&c), IMAX, Some(JMAX)).map_err(|e| e.to_string())?;
        if !t.same_entries(&b) {
            failed.push(name);
        }
    }
    check(failed.is_empty(), format!("cobar and bar tables equal per bidegree, i <= {IMAX}, j <= {JMAX}"), format!("differ for {failed:?}"))
}

fn resolution_agreement() -> Outcome {
    let mut notes = Vec::new();
    for (name, c) in corpus() {
        let totals = cobar(&c, IMAX, None)?.totals();
        let k = Comodule::trivial(c.clone());
        let r = minimal_coresolution(&k, IMAX).map_err(|e| e.to_string())?;
        let betti = betti_dims(&r).map_err(|e| e.to_string())?;
        if betti != totals {
            return Err(format!("{name}: betti {betti:?} vs cobar {totals:?}"));
        }
        for seed in 0..RANDOM_RETRACTIONS {
            let rr = minimal_coresolution_with(&k, IMAX, Retraction::Randomized { seed }).map_err(|e| e.to_string())?;
            let b = betti_dims(&rr).map_err(|e| e.to_string())?;
            if b != betti || !rr.is_exact() {
                return Err(format!("{name}: randomized retraction {seed} gives {b:?}"));
            }
        }
        notes.push(format!("{name} {betti:?}"));
    }
    Ok(format!("betti = cobar totals, {RANDOM_RETRACTIONS} random retractions each: {}", notes.join("; ")))
}

fn theorem_one() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut count = 0;
    for (name, g) in [("C3", GradedCoalgebra::tensor(1, 2, q())), ("Sym(2,3)", GradedCoalgebra::symmetric(2, 3, q()).unwrap())] {
        let c = Arc::new(g.flatten());
        let random = Comodule::random_two_dimensional(c.clone(), &mut rng).map_err(|e| e.to_string())?;
        let objects = [Comodule::trivial(c.clone()), Comodule::regular(c.clone()), random];
        for l in &objects {
            for m in &objects {
                let r = compare_theorem1(l, m, THEOREM1_N).map_err(|e| e.to_string())?;
                if !r.verdict {
                    return Err(format!("{name}: {:?} vs {:?}", r.comodule_side, r.module_side));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} pairs, n = {THEOREM1_N}, comodule and module sides equal"))
}

fn koszul_diagonal() -> Outcome {
    let g = GradedCoalgebra::symmetric(2, 4, q()).unwrap();
    let t = ext_table(&CobarComplex::build_graded(&g, IMAX, Some(g.bound())).map_err(|e| e.to_string())?);
    let binom = [1, 2, 1, 0, 0];
    let ok = (0..=IMAX).all(|i| (0..=g.bound()).all(|j| t.get(i, Some(j)) == if i == j { binom[i] } else { 0 }));
    check(ok, format!("Ext^{{i,j}} = delta_ij binom(2,i), i <= {IMAX}, j <= {}", g.bound()), format!("entries {:?}", t.entries))
}

fn periodicity() -> Outcome {
    let c = Arc::new(GradedCoalgebra::tensor(1, 2, q()).flatten());
    let ones = vec![1; PERIODICITY_IMAX + 1];
    let co = cobar(&c, PERIODICITY_IMAX, None)?.totals();
    let res = betti_dims(&minimal_coresolution(&Comodule::trivial(c.clone()), PERIODICITY_IMAX).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let bar = bar_ext_table(&dual_algebra(&c), PERIODICITY_IMAX, None).map_err(|e| e.to_string())?.totals();
    check(
        co == ones && res == ones && bar == ones,
        format!("cobar, resolution and bar all give 1 for i <= {PERIODICITY_IMAX}"),
        format!("cobar {co:?}, resolution {res:?}, bar {bar:?}"),
    )
}

fn anti_isomorphism() -> Outcome {
    let c = Arc::new(GradedCoalgebra::tensor(2, 1, q()).flatten());
    let r = check_anti_isomorphism(c, ANTI_ISO_IMAX, None).map_err(|e| e.to_string())?;
    check(
        r.holds() && r.ext_noncommutative,
        format!("{} products in degrees <= {ANTI_ISO_IMAX} match after factor reversal (Ext noncommutative)", r.checked_products),
        format!("{r:?}"),
    )
}

fn nonrational_witness() -> Outcome {
    let f = TaggedCofunctional::EventualValue { tail: q().one(), corrections: Default::default() };
    let r = nonrational_report(q(), f, WITNESS_SAMPLES, SEED);
    check(
        r.module_axioms_verified && !r.is_rational && r.max_rational_submodule == "span(e1)",
        format!("axioms on {} samples (seed {}), not rational, maximal rational submodule span(e1)", r.samples, r.seed),
        format!("{r:?}"),
    )
}

fn contra_witness() -> Outcome {
    let r = verify_contra_witness(&build_contra_witness(q()), CONTRA_SAMPLES, SEED);
    check(r.all(), "module_trivial, contra_nontrivial, splitting_not_contra_linear all true".into(), format!("{r:?}"))
}

fn initially_projective_window() -> Outcome {
    let a = Arc::new(dual_algebra(&GradedCoalgebra::tensor(1, 1, q()).flatten()));
    let k = ModulePresentation::trivial(a).map_err(|e| e.to_string())?;
    let n = 3;
    let full = InitiallyProjectiveResolution::from_free(&free_resolution(&k, n + 1).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let full = ext_via_initially_projective(&full, &k, n).map_err(|e| e.to_string())?;
    let truth = module_ext(&k, &k, n).map_err(|e| e.to_string())?;
    let degraded = InitiallyProjectiveResolution::degraded(&k, 2).map_err(|e| e.to_string())?;
    let d = ext_via_initially_projective(&degraded, &k, n).map_err(|e| e.to_string())?;
    let ok = full.hom_cohomology == truth
        && full.matches.iter().all(|m| *m)
        && d.within_prefix
        && (0..=2).all(|i| d.matches[i])
        && !d.matches[3];
    check(
        ok,
        format!("projective: {:?} = Ext; prefix 2: H = {:?} vs Ext {:?}, mismatch only at 3", full.hom_cohomology, d.hom_cohomology, d.true_ext),
        format!("full {full:?}; degraded {d:?}"),
    )
}

fn random_matrix<R: Rng>(f: FieldSpec, rng: &mut R, max: usize) -> Matrix {
    let (m, n, r) = (rng.gen_range(1..=max), rng.gen_range(1..=max), rng.gen_range(0..=max));
    // a product through a random inner dimension gives varied ranks
    let left = Matrix::from_dense(f, &(0..m).map(|_| (0..r.max(1)).map(|_| f.random(rng)).collect()).collect::<Vec<Vec<_>>>());
    let right = Matrix::from_dense(f, &(0..r.max(1)).map(|_| (0..n).map(|_| f.random(rng)).collect()).collect::<Vec<Vec<_>>>());
    if r == 0 {
        Matrix::zero(f, m, n)
    } else {
        left.mul(&right)
    }
}

fn substrate() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for f in [q(), FieldSpec::prime(5).unwrap()] {
        for k in 0..SUBSTRATE_MATRICES {
            let m = random_matrix(f, &mut rng, 7);
            let r = rank(&m);
            let ker = kernel_basis(&m);
            if r + ker.dim() != m.cols() {
                return Err(format!("{f} #{k}: rank {r} + nullity {} != {}", ker.dim(), m.cols()));
            }
            if ker.vectors().iter().any(|v| !m.mul_vector(v).is_zero()) {
                return Err(format!("{f} #{k}: kernel vector not annihilated"));
            }
            let b = random_matrix(f, &mut rng, 4);
            let rk = rank(&kronecker(&m, &b));
            if rk != r * rank(&b) {
                return Err(format!("{f} #{k}: rank(A (x) B) = {rk}"));
            }
        }
    }
    Ok(format!("{SUBSTRATE_MATRICES} matrices each over Q and GF(5): rank-nullity, kernel, Kronecker rank"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("left-right symmetry", left_right_symmetry),
        ("cobar/bar duality", cobar_bar_duality),
        ("resolution agreement", resolution_agreement),
        ("Ext over C vs C*", theorem_one),
        ("Koszul diagonal", koszul_diagonal),
        ("periodicity", periodicity),
        ("Ext-algebra anti-isomorphism", anti_isomorphism),
        ("non-rational witness", nonrational_witness),
        ("contramodule witness", contra_witness),
        ("initially projective window", initially_projective_window),
        ("substrate properties", substrate),
    ];
    let mut failures = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", k + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.2}s)", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
