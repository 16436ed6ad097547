mod present;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use cobarlab::coalg::{Coalgebra, Comodule, GradedCoalgebra};
use cobarlab::cobar::{ext_table, CobarComplex, ExtTable};
use cobarlab::dualalg::{bar_ext_table, compare_theorem1, dual_algebra, graded_dual, GradedAlgebra};
use cobarlab::exactlin::FieldSpec;
use cobarlab::resolve::{minimal_coresolution_with, Retraction};
use cobarlab::witness::{build_contra_witness, nonrational_report, verify_contra_witness, TaggedCofunctional};
use cobarlab::Error;
use present::{Presentation, SCHEMA};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Parser)]
#[command(name = "cobarlab", version, about = "Exact Ext computations for conilpotent coalgebras")]
struct Cli {
    /// Worker threads (falls back to COBARLAB_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON report to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the JSON report instead of the text summary.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    /// Cobar complex of the coalgebra.
    Co,
    /// Cobar complexes of the coalgebra and its opposite.
    Op,
    /// Bar complex of the dual (or given) algebra.
    Algebra,
}

#[derive(Clone, Copy, ValueEnum)]
enum RetractionMode {
    Pivot,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    Nonrational,
    Contra,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of a presentation.
    Validate {
        /// Presentation file (any kind).
        path: PathBuf,
    },
    /// Ext(k, k) table.
    Ext {
        /// Coalgebra or algebra presentation.
        path: PathBuf,
        /// Highest cohomological degree.
        #[arg(long, default_value_t = 4)]
        imax: usize,
        /// Highest internal degree (graded input defaults to its bound).
        #[arg(long)]
        jmax: Option<usize>,
        #[arg(long, value_enum, default_value = "co")]
        side: Side,
    },
    /// Ext over C against Ext over C* for a pair of comodules (default: k, k).
    Compare {
        /// Finite coalgebra presentation.
        coalgebra: PathBuf,
        /// First comodule file (default: k).
        left: Option<PathBuf>,
        /// Second comodule file (default: k).
        right: Option<PathBuf>,
        /// Compare Ext^i for i ≤ n.
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Minimal cofree coresolution of a comodule (default: k).
    Resolve {
        /// Coalgebra presentation; graded input is flattened.
        coalgebra: PathBuf,
        /// Comodule file (default: k).
        comodule: Option<PathBuf>,
        /// Number of cofree terms after the envelope.
        #[arg(long, default_value_t = 3)]
        length: usize,
        #[arg(long, value_enum, default_value = "pivot")]
        retraction: RetractionMode,
        /// Seed for the random retraction.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Finite models of the non-rational module and the non-split contramodule.
    Demo {
        #[arg(value_enum)]
        which: Demo,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random samples to check (default: 200 for nonrational, 10 for contra).
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Serialize)]
struct Report {
    schema: &'static str,
    command: String,
    inputs: Vec<String>,
    input_digest: String,
    seed: Option<u64>,
    verdict: bool,
    results: Value,
    wall_seconds: f64,
}

struct Outcome {
    command: String,
    seed: Option<u64>,
    verdict: bool,
    results: Value,
    summary: Vec<String>,
}

enum Failure {
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Run<T> = std::result::Result<T, Failure>;

struct Inputs {
    names: Vec<String>,
    hasher: Sha256,
}

impl Inputs {
    fn new() -> Self {
        Inputs { names: Vec::new(), hasher: Sha256::new() }
    }

    fn load(&mut self, path: &Path) -> Run<Presentation> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        self.names.push(path.display().to_string());
        self.hasher.update((text.len() as u64).to_le_bytes());
        self.hasher.update(text.as_bytes());
        present::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    fn digest(self) -> (Vec<String>, String) {
        (self.names, hex::encode(self.hasher.finalize()))
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn flag_lines(v: &Value) -> Vec<String> {
    v.as_object().map(|o| o.iter().map(|(k, v)| format!("{k}: {v}")).collect()).unwrap_or_default()
}

fn validate(inputs: &mut Inputs, path: &Path) -> Run<Outcome> {
    let (results, verdict) = match inputs.load(path)? {
        Presentation::Finite(c) => {
            let r = c.validate();
            (to_value(&r), r.all_required())
        }
        Presentation::Graded(g) => {
            let r = g.validate();
            (to_value(&r), r.all_required())
        }
        Presentation::Algebra(a) => {
            let r = a.validate();
            (to_value(&r), r.associative && r.unital)
        }
        Presentation::GradedAlgebra(a) => {
            let r = a.validate();
            (to_value(&r), r.associative && r.unital)
        }
        Presentation::Comodule(doc) => {
            let m = doc.build(None)?;
            let base = m.base().validate();
            let r = json!({
                "coassociative": m.is_coassociative(),
                "counital": m.is_counital(),
                "coalgebra": base,
            });
            (r, m.is_valid() && base.all_required())
        }
    };
    let summary = flag_lines(&results);
    Ok(Outcome { command: "validate".into(), seed: None, verdict, results, summary })
}

fn cobar_table(p: &Presentation, opposite: bool, imax: usize, jmax: Option<usize>) -> Run<ExtTable> {
    let graded = |g: GradedCoalgebra| -> Run<ExtTable> {
        let g = if opposite { g.opposite() } else { g };
        Ok(ext_table(&CobarComplex::build_graded(&g, imax, jmax)?))
    };
    match p {
        Presentation::Finite(c) => {
            let c = if opposite { c.opposite() } else { c.clone() };
            Ok(ext_table(&CobarComplex::build(Arc::new(c), imax, jmax)?))
        }
        Presentation::Graded(g) => graded(g.clone()),
        Presentation::GradedAlgebra(a) => graded(graded_dual(a)),
        _ => Err(Failure::Input("the cobar side needs a coalgebra (or graded algebra) presentation".into())),
    }
}

fn bar_table(p: &Presentation, imax: usize, jmax: Option<usize>) -> Run<ExtTable> {
    let graded = |a: &GradedAlgebra| -> Run<ExtTable> {
        let j = jmax.unwrap_or(a.bound());
        if j > a.bound() {
            return Err(Error::Truncation { jmax: j, bound: a.bound() }.into());
        }
        Ok(bar_ext_table(&a.flatten(), imax, Some(j))?)
    };
    match p {
        Presentation::Finite(c) => Ok(bar_ext_table(&dual_algebra(c), imax, jmax)?),
        Presentation::Graded(g) => graded(&graded_dual(g)),
        Presentation::Algebra(a) => Ok(bar_ext_table(a, imax, jmax)?),
        Presentation::GradedAlgebra(a) => graded(a),
        Presentation::Comodule(_) => Err(Failure::Input("ext needs a coalgebra or algebra presentation".into())),
    }
}

fn table_lines(t: &ExtTable) -> Vec<String> {
    let mut lines = Vec::new();
    if t.is_graded() {
        for (b, d) in &t.entries {
            lines.push(format!("Ext^{{{},{}}} = {d}", b.i, b.j.unwrap_or(0)));
        }
    }
    lines.push(format!("totals: {:?}", t.totals()));
    if !t.truncation_note.is_empty() {
        lines.push(format!("note: {}", t.truncation_note));
    }
    lines
}

fn ext(inputs: &mut Inputs, path: &Path, imax: usize, jmax: Option<usize>, side: Side) -> Run<Outcome> {
    let p = inputs.load(path)?;
    let (results, verdict, summary) = match side {
        Side::Co => {
            let t = cobar_table(&p, false, imax, jmax)?;
            (to_value(&t), true, table_lines(&t))
        }
        Side::Algebra => {
            let t = bar_table(&p, imax, jmax)?;
            (to_value(&t), true, table_lines(&t))
        }
        Side::Op => {
            let (t, t_op) = match &p {
                Presentation::Algebra(a) => (bar_table(&p, imax, jmax)?, bar_ext_table(&a.opposite(), imax, jmax)?),
                _ => (cobar_table(&p, false, imax, jmax)?, cobar_table(&p, true, imax, jmax)?),
            };
            let symmetric = t.same_entries(&t_op);
            let mut lines = table_lines(&t);
            lines.push(format!("symmetric: {symmetric}"));
            (json!({ "table": t, "opposite": t_op, "symmetric": symmetric }), symmetric, lines)
        }
    };
    Ok(Outcome { command: "ext".into(), seed: None, verdict, results, summary })
}

fn finite_coalgebra(p: Presentation) -> Run<Coalgebra> {
    match p {
        Presentation::Finite(c) => Ok(c),
        Presentation::Graded(_) | Presentation::GradedAlgebra(_) => Err(Error::GradedInput(
            "compare needs a finite presentation; flatten the graded coalgebra (kind \"finite\" with a grading)".into(),
        )
        .into()),
        _ => Err(Failure::Input("expected a coalgebra presentation".into())),
    }
}

fn comodule_over(inputs: &mut Inputs, path: Option<&PathBuf>, base: &Arc<Coalgebra>) -> Run<Comodule> {
    match path {
        None => Ok(Comodule::trivial(base.clone())),
        Some(p) => match inputs.load(p)? {
            Presentation::Comodule(doc) => Ok(doc.build(Some(base.clone()))?),
            _ => Err(Failure::Input(format!("{}: expected kind \"comodule\"", p.display()))),
        },
    }
}

fn compare(inputs: &mut Inputs, c: &Path, l: Option<&PathBuf>, m: Option<&PathBuf>, n: usize) -> Run<Outcome> {
    let base = Arc::new(finite_coalgebra(inputs.load(c)?)?);
    let l = comodule_over(inputs, l, &base)?;
    let m = comodule_over(inputs, m, &base)?;
    let report = compare_theorem1(&l, &m, n)?;
    let mut results = to_value(&report);
    // timing lives in the envelope only
    results.as_object_mut().map(|o| o.remove("seconds"));
    let summary = vec![
        format!("comodule side: {:?}", report.comodule_side),
        format!("module side:   {:?}", report.module_side),
        format!("verdict: {}", report.verdict),
    ];
    Ok(Outcome { command: "compare".into(), seed: None, verdict: report.verdict, results, summary })
}

fn resolve(inputs: &mut Inputs, c: &Path, m: Option<&PathBuf>, length: usize, mode: RetractionMode, seed: u64) -> Run<Outcome> {
    let (base, window) = match inputs.load(c)? {
        Presentation::Graded(g) => (g.flatten(), Some(g.bound())),
        Presentation::GradedAlgebra(a) => {
            let g = graded_dual(&a);
            (g.flatten(), Some(g.bound()))
        }
        other => (finite_coalgebra(other)?, None),
    };
    let base = Arc::new(base);
    let module = comodule_over(inputs, m, &base)?;
    let retraction = match mode {
        RetractionMode::Pivot => Retraction::Pivot,
        RetractionMode::Random => Retraction::Randomized { seed },
    };
    let r = minimal_coresolution_with(&module, length, retraction)?;
    let report = r.report();
    let mut results = to_value(&report);
    let mut summary = vec![format!("cogenerator dims: {:?}", report.cogenerator_dims)];
    if let (Some(bound), Some(graded)) = (window, r.graded_cogenerator_dims()) {
        let mut dims = vec![0; report.cogenerator_dims.len()];
        for ((i, j), d) in graded {
            if j <= bound {
                dims[i] += d;
            }
        }
        summary.push(format!("dims with internal degree <= {bound}: {dims:?}"));
        let o = results.as_object_mut().expect("object");
        o.insert("window_dims".into(), json!(dims));
        o.insert(
            "truncation_note".into(),
            json!(format!("graded input truncated at degree {bound}; window_dims are independent of the truncation")),
        );
    }
    summary.push(format!("minimal: {}, exact: {}", report.minimal, report.exact));
    let seed = matches!(mode, RetractionMode::Random).then_some(seed);
    Ok(Outcome { command: "resolve".into(), seed, verdict: report.minimal && report.exact, results, summary })
}

fn demo(which: Demo, seed: u64, samples: Option<usize>) -> Outcome {
    match which {
        Demo::Nonrational => {
            let f = FieldSpec::Rationals;
            let functional = TaggedCofunctional::EventualValue { tail: f.one(), corrections: Default::default() };
            let r = nonrational_report(f, functional, samples.unwrap_or(200), seed);
            let verdict = r.module_axioms_verified && !r.is_rational && r.corrupted_action_detected;
            let results = to_value(&r);
            Outcome { command: "demo nonrational".into(), seed: Some(seed), verdict, summary: flag_lines(&results), results }
        }
        Demo::Contra => {
            let r = verify_contra_witness(&build_contra_witness(FieldSpec::Rationals), samples.unwrap_or(10), seed);
            let results = to_value(&r);
            Outcome { command: "demo contra".into(), seed: Some(seed), verdict: r.all(), summary: flag_lines(&results), results }
        }
    }
}

fn threads(cli: Option<usize>) -> Run<Option<usize>> {
    match cli {
        Some(n) => Ok(Some(n)),
        None => match std::env::var("COBARLAB_THREADS") {
            Ok(s) => s.trim().parse().map(Some).map_err(|_| Failure::Input(format!("COBARLAB_THREADS={s:?} is not a number"))),
            Err(_) => Ok(None),
        },
    }
}

fn run(cli: Cli) -> Run<bool> {
    if let Some(n) = threads(cli.threads)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Input(format!("thread pool: {e}")))?;
    }
    let start = Instant::now();
    let mut inputs = Inputs::new();
    let outcome = match &cli.command {
        Command::Validate { path } => validate(&mut inputs, path)?,
        Command::Ext { path, imax, jmax, side } => ext(&mut inputs, path, *imax, *jmax, *side)?,
        Command::Compare { coalgebra, left, right, n } => compare(&mut inputs, coalgebra, left.as_ref(), right.as_ref(), *n)?,
        Command::Resolve { coalgebra, comodule, length, retraction, seed } => {
            resolve(&mut inputs, coalgebra, comodule.as_ref(), *length, *retraction, *seed)?
        }
        Command::Demo { which, seed, samples } => demo(*which, *seed, *samples),
    };
    let (names, digest) = inputs.digest();
    let report = Report {
        schema: SCHEMA,
        command: outcome.command,
        inputs: names,
        input_digest: digest,
        seed: outcome.seed,
        verdict: outcome.verdict,
        results: outcome.results,
        wall_seconds: start.elapsed().as_secs_f64(),
    };
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    if let Some(out) = &cli.out {
        std::fs::write(out, format!("{text}\n")).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
    }
    if cli.json {
        println!("{text}");
    } else {
        for line in &outcome.summary {
            println!("{line}");
        }
    }
    Ok(report.verdict)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
