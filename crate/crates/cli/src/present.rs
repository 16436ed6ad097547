//! Loading `cobarlab/1` presentation files.

use std::collections::BTreeMap;
use std::sync::Arc;

use cobarlab::coalg::{Coalgebra, Comodule, GradedCoalgebra, Term};
use cobarlab::dualalg::{graded_dual, quadratic_algebra, Algebra, GradedAlgebra};
use cobarlab::exactlin::{FieldSpec, Matrix, Scalar, SparseVector, SubspaceBasis};
use cobarlab::{Error, Result};
use serde_json::Value;

pub const SCHEMA: &str = "cobarlab/1";

/// A parsed presentation.
#[derive(Clone, Debug)]
pub enum Presentation {
    Finite(Coalgebra),
    Graded(GradedCoalgebra),
    Comodule(ComoduleDoc),
    Algebra(Algebra),
    GradedAlgebra(GradedAlgebra),
}

/// A comodule whose coalgebra may be supplied separately.
#[derive(Clone, Debug)]
pub struct ComoduleDoc {
    pub coalgebra: Option<Box<Presentation>>,
    pub body: ComoduleBody,
}

#[derive(Clone, Debug)]
pub enum ComoduleBody {
    Trivial,
    Regular,
    Explicit { dim: usize, coaction: Value },
}

fn schema_err(location: &str, message: impl Into<String>) -> Error {
    Error::Schema { location: location.to_string(), message: message.into() }
}

fn field_of(v: &Value, loc: &str) -> Result<FieldSpec> {
    let s = v.as_str().ok_or_else(|| schema_err(loc, "field must be a string such as \"Q\" or \"GF(5)\""))?;
    match s.trim() {
        "Q" | "QQ" | "rationals" => Ok(FieldSpec::Rationals),
        other => {
            let inner = other
                .strip_prefix("GF(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| schema_err(loc, format!("unknown field {other:?}")))?;
            let p = inner.trim().parse::<u32>().map_err(|_| schema_err(loc, format!("bad prime in {other:?}")))?;
            FieldSpec::prime(p)
        }
    }
}

fn get<'a>(obj: &'a Value, key: &str, loc: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema_err(loc, format!("missing key \"{key}\"")))
}

fn nat(v: &Value, loc: &str) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| schema_err(loc, "expected a nonnegative integer"))
}

fn scalar(f: FieldSpec, v: &Value, loc: &str) -> Result<Scalar> {
    match v {
        Value::String(s) => f.parse(s).map_err(|e| schema_err(loc, e.to_string())),
        Value::Number(n) => n
            .as_i64()
            .map(|k| f.from_i64(k))
            .ok_or_else(|| schema_err(loc, "numeric scalars must be integers; write fractions as \"a/b\"")),
        _ => Err(schema_err(loc, "expected a scalar (integer or \"a/b\" string)")),
    }
}

fn array<'a>(v: &'a Value, loc: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema_err(loc, "expected an array"))
}

fn scalars(f: FieldSpec, v: &Value, loc: &str) -> Result<Vec<Scalar>> {
    array(v, loc)?.iter().enumerate().map(|(k, x)| scalar(f, x, &format!("{loc}[{k}]"))).collect()
}

fn nats(v: &Value, loc: &str) -> Result<Vec<usize>> {
    array(v, loc)?.iter().enumerate().map(|(k, x)| nat(x, &format!("{loc}[{k}]"))).collect()
}

/// `[[[i, j, c], …], …]`: one list of terms per basis vector.
fn term_lists(f: FieldSpec, v: &Value, loc: &str) -> Result<Vec<Vec<Term>>> {
    array(v, loc)?
        .iter()
        .enumerate()
        .map(|(t, terms)| {
            let l = format!("{loc}[{t}]");
            array(terms, &l)?
                .iter()
                .enumerate()
                .map(|(k, term)| {
                    let l = format!("{l}[{k}]");
                    match array(term, &l)?.as_slice() {
                        [i, j, c] => Ok((nat(i, &l)?, nat(j, &l)?, scalar(f, c, &l)?)),
                        _ => Err(schema_err(&l, "a term is [i, j, scalar]")),
                    }
                })
                .collect()
        })
        .collect()
}

fn dense_matrix(f: FieldSpec, v: &Value, rows: usize, cols: usize, loc: &str) -> Result<Matrix> {
    let dense: Vec<Vec<Scalar>> =
        array(v, loc)?.iter().enumerate().map(|(r, row)| scalars(f, row, &format!("{loc}[{r}]"))).collect::<Result<_>>()?;
    if dense.len() != rows || dense.iter().any(|r| r.len() != cols) {
        return Err(schema_err(loc, format!("expected a {rows}x{cols} matrix")));
    }
    Ok(if rows == 0 { Matrix::zero(f, 0, cols) } else { Matrix::from_dense(f, &dense) })
}

/// `[{"p": p, "q": q, "matrix": [[…]]}, …]` with shapes given by `shape(p, q)`.
fn components(
    f: FieldSpec,
    v: Option<&Value>,
    loc: &str,
    shape: impl Fn(usize, usize) -> Option<(usize, usize)>,
) -> Result<BTreeMap<(usize, usize), Matrix>> {
    let mut out = BTreeMap::new();
    let Some(v) = v else { return Ok(out) };
    for (k, c) in array(v, loc)?.iter().enumerate() {
        let l = format!("{loc}[{k}]");
        let p = nat(get(c, "p", &l)?, &format!("{l}.p"))?;
        let q = nat(get(c, "q", &l)?, &format!("{l}.q"))?;
        let (rows, cols) = shape(p, q).ok_or_else(|| schema_err(&l, format!("component ({p},{q}) beyond the truncation bound")))?;
        out.insert((p, q), dense_matrix(f, get(c, "matrix", &l)?, rows, cols, &format!("{l}.matrix"))?);
    }
    Ok(out)
}

fn relations(f: FieldSpec, m: usize, v: &Value, loc: &str) -> Result<SubspaceBasis> {
    let vecs: Vec<SparseVector> = array(v, loc)?
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let l = format!("{loc}[{k}]");
            let s = scalars(f, r, &l)?;
            if s.len() != m * m {
                return Err(schema_err(&l, format!("a relation has {} coordinates", m * m)));
            }
            Ok(SparseVector::from_dense(&s))
        })
        .collect::<Result<_>>()?;
    Ok(SubspaceBasis::span(f, m * m, &vecs))
}

/// `{"family": "tensor"|"symmetric"|"free"|"quadratic", "m", "bound", "relations"?}`.
fn construction(f: FieldSpec, c: &Value, want_algebra: bool) -> Result<Presentation> {
    let loc = "construction";
    let family = get(c, "family", loc)?.as_str().ok_or_else(|| schema_err(loc, "family must be a string"))?;
    let m = nat(get(c, "m", loc)?, "construction.m")?;
    let bound = nat(get(c, "bound", loc)?, "construction.bound")?;
    let alg = match family {
        "tensor" => return wrap(GradedCoalgebra::tensor(m, bound, f), want_algebra),
        "symmetric" => return wrap(GradedCoalgebra::symmetric(m, bound, f)?, want_algebra),
        "free" => GradedAlgebra::free(m, bound, f),
        "quadratic" => quadratic_algebra(m, &relations(f, m, get(c, "relations", loc)?, "construction.relations")?, bound)?,
        other => return Err(schema_err("construction.family", format!("unknown family {other:?}"))),
    };
    Ok(if want_algebra { Presentation::GradedAlgebra(alg) } else { Presentation::Graded(graded_dual(&alg)) })
}

fn wrap(g: GradedCoalgebra, want_algebra: bool) -> Result<Presentation> {
    Ok(if want_algebra { Presentation::GradedAlgebra(graded_dual(&g)) } else { Presentation::Graded(g) })
}

fn parse_value(doc: &Value, inherited_field: Option<FieldSpec>) -> Result<Presentation> {
    if !doc.is_object() {
        return Err(schema_err("$", "top level must be an object"));
    }
    if let Some(s) = doc.get("schema") {
        if s.as_str() != Some(SCHEMA) {
            return Err(schema_err("schema", format!("expected \"{SCHEMA}\"")));
        }
    }
    let kind = get(doc, "kind", "$")?.as_str().ok_or_else(|| schema_err("kind", "kind must be a string"))?;
    let field = match (doc.get("field"), inherited_field) {
        (Some(v), _) => field_of(v, "field")?,
        (None, Some(f)) => f,
        (None, None) if kind == "comodule" => FieldSpec::Rationals,
        (None, None) => return Err(schema_err("$", "missing key \"field\"")),
    };
    match kind {
        "finite" => {
            let dim = nat(get(doc, "dim", "$")?, "dim")?;
            let grouplike = doc.get("grouplike").map(|g| nat(g, "grouplike")).transpose()?.unwrap_or(0);
            let counit = scalars(field, get(doc, "counit", "$")?, "counit")?;
            let comul = term_lists(field, get(doc, "comul", "$")?, "comul")?;
            let grading = doc.get("grading").map(|g| nats(g, "grading")).transpose()?;
            Ok(Presentation::Finite(Coalgebra::new(field, dim, grouplike, counit, comul, grading)?))
        }
        "graded" | "graded-algebra" => {
            let want_algebra = kind == "graded-algebra";
            if let Some(c) = doc.get("construction") {
                return construction(field, c, want_algebra);
            }
            let dims = nats(get(doc, "dims", "$")?, "dims")?;
            let bound = dims.len().saturating_sub(1);
            let d = dims.clone();
            let comps = components(field, doc.get("components"), "components", |p, q| {
                (p + q <= bound).then(|| if want_algebra { (d[p + q], d[p] * d[q]) } else { (d[p] * d[q], d[p + q]) })
            })?;
            Ok(if want_algebra {
                Presentation::GradedAlgebra(GradedAlgebra::new(field, dims, comps)?)
            } else {
                Presentation::Graded(GradedCoalgebra::new(field, dims, comps)?)
            })
        }
        "algebra" => {
            let dim = nat(get(doc, "dim", "$")?, "dim")?;
            let unit = SparseVector::from_dense(&scalars(field, get(doc, "unit", "$")?, "unit")?);
            let mut table = vec![vec![SparseVector::zero(dim); dim]; dim];
            for (k, e) in array(get(doc, "products", "$")?, "products")?.iter().enumerate() {
                let l = format!("products[{k}]");
                let [a, b, t, c] = array(e, &l)?.as_slice() else {
                    return Err(schema_err(&l, "a product entry is [a, b, t, scalar]"));
                };
                let (a, b, t) = (nat(a, &l)?, nat(b, &l)?, nat(t, &l)?);
                if a >= dim || b >= dim || t >= dim {
                    return Err(schema_err(&l, "basis index out of range"));
                }
                let c = scalar(field, c, &l)?;
                table[a][b] = table[a][b].add_scaled(&c, &SparseVector::unit(field, dim, t));
            }
            let augmentation = doc.get("augmentation").map(|g| scalars(field, g, "augmentation")).transpose()?;
            let grading = doc.get("grading").map(|g| nats(g, "grading")).transpose()?;
            Ok(Presentation::Algebra(Algebra::new(field, dim, unit, table, augmentation, grading)?))
        }
        "comodule" => {
            let coalgebra = doc.get("coalgebra").map(|c| parse_value(c, Some(field)).map(Box::new)).transpose()?;
            let body = match doc.get("preset").and_then(Value::as_str) {
                Some("trivial") => ComoduleBody::Trivial,
                Some("regular") => ComoduleBody::Regular,
                Some(other) => return Err(schema_err("preset", format!("unknown preset {other:?}"))),
                None => ComoduleBody::Explicit {
                    dim: nat(get(doc, "dim", "$")?, "dim")?,
                    coaction: get(doc, "coaction", "$")?.clone(),
                },
            };
            Ok(Presentation::Comodule(ComoduleDoc { coalgebra, body }))
        }
        other => Err(schema_err("kind", format!("unknown kind {other:?}"))),
    }
}

/// Parses a presentation from JSON text.
pub fn parse(text: &str) -> Result<Presentation> {
    if text.trim().is_empty() {
        return Err(schema_err("$", "empty document"));
    }
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {} column {}: {e}", e.line(), e.column())))?;
    parse_value(&doc, None)
}

impl ComoduleDoc {
    /// Builds the comodule over `base`, or over its own embedded coalgebra.
    pub fn build(&self, base: Option<Arc<Coalgebra>>) -> Result<Comodule> {
        let base = match (base, &self.coalgebra) {
            (Some(b), _) => b,
            (None, Some(p)) => match p.as_ref() {
                Presentation::Finite(c) => Arc::new(c.clone()),
                Presentation::Graded(_) => return Err(Error::GradedInput("flatten the coalgebra into a finite presentation first".into())),
                _ => return Err(schema_err("coalgebra", "expected a coalgebra")),
            },
            (None, None) => return Err(schema_err("coalgebra", "no coalgebra given for the comodule")),
        };
        match &self.body {
            ComoduleBody::Trivial => Ok(Comodule::trivial(base)),
            ComoduleBody::Regular => Ok(Comodule::regular(base)),
            ComoduleBody::Explicit { dim, coaction } => {
                let terms = term_lists(base.field(), coaction, "coaction")?;
                let m = Comodule::new(base, *dim, terms, None)?;
                Ok(m)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_dual_numbers() {
        let text = r#"{"schema":"cobarlab/1","kind":"finite","field":"Q","dim":2,"counit":[1,0],
            "comul":[[[0,0,1]],[[0,1,"1"],[1,0,1]]]}"#;
        let Presentation::Finite(c) = parse(text).unwrap() else { panic!() };
        assert!(c.validate().all_required());
    }

    #[test]
    fn constructions() {
        let text = r#"{"kind":"graded","field":"Q","construction":{"family":"quadratic","m":2,"bound":4,"relations":[[0,1,0,0]]}}"#;
        let Presentation::Graded(g) = parse(text).unwrap() else { panic!() };
        assert_eq!(g.dims(), &[1, 2, 3, 4, 5]);
        let text = r#"{"kind":"graded-algebra","field":"GF(5)","construction":{"family":"symmetric","m":2,"bound":3}}"#;
        assert!(matches!(parse(text).unwrap(), Presentation::GradedAlgebra(_)));
    }

    #[test]
    fn errors_carry_locations() {
        assert!(matches!(parse(""), Err(Error::Schema { .. })));
        let text = r#"{"kind":"finite","field":"Q","dim":1,"counit":["x"],"comul":[[]]}"#;
        match parse(text) {
            Err(Error::Schema { location, .. }) => assert_eq!(location, "counit[0]"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("{"), Err(Error::Parse(_))));
        assert!(parse(r#"{"kind":"finite","field":"GF(4)"}"#).is_err());
    }
}
