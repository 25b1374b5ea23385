//! JSON encodings for spaces, forms, twists, coactions and candidates.
//!
//! Rationals are strings in lowest terms (`"3"`, `"-1/2"`). Maps are emitted
//! with sorted keys, so equal values always serialize to identical bytes.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::classify::{ActionCandidate, SearchReport};
use crate::coaction::{extended_table, Coaction};
use crate::fieldtheory::{y_table, Geometry, Table1Params, Table1Row, TwistFamily, TwistSpec};
use crate::forms::{forms_table, FormError, SullivanForm};
use crate::homology::{ConcordanceVerdict, Witness};
use crate::simplicial::{Simplex, SimplexRef, SimplicialError, SimplicialSet};
use crate::superalg::{AlgebraError, Monomial, SuperPolynomial, VariableTable};
use crate::{Coefficient, Poly, Rational};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Form(#[from] FormError),
}

fn bad(msg: impl Into<String>) -> IoError {
    IoError::Format(msg.into())
}

pub fn rational_to_string(q: &Rational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational, IoError> {
    Rational::parse_text(s.trim()).ok_or_else(|| bad(format!("not a rational number: {s:?}")))
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value, IoError> {
    v.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str, IoError> {
    v.as_str().ok_or_else(|| bad(format!("{what} must be a string")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>, IoError> {
    v.as_object().ok_or_else(|| bad(format!("{what} must be an object")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, IoError> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize, IoError> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| bad(format!("{what} must be a natural number")))
}

fn as_i64(v: &Value, what: &str) -> Result<i64, IoError> {
    v.as_i64().ok_or_else(|| bad(format!("{what} must be an integer")))
}

/// Ids may be given as strings or integers.
fn id_text(v: &Value) -> Result<String, IoError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(bad("simplex ids must be strings or integers")),
    }
}

pub fn space_to_json(x: &SimplicialSet) -> Value {
    let mut dims = Map::new();
    let mut faces = Map::new();
    for n in 0..x.dim().map_or(0, |d| d + 1) {
        dims.insert(n.to_string(), json!(x.ids(n)));
        if n == 0 {
            continue;
        }
        for r in x.simplices(n) {
            let list: Vec<Value> = x
                .faces(r)
                .iter()
                .map(|f| json!({"ref": x.label(f.core), "degen": f.degeneracy_word()}))
                .collect();
            faces.insert(x.label(r), Value::Array(list));
        }
    }
    json!({"dims": dims, "faces": faces})
}

pub fn space_from_json(v: &Value) -> Result<SimplicialSet, IoError> {
    let dims = as_object(get(v, "dims")?, "dims")?;
    let mut ids: Vec<Vec<String>> = Vec::new();
    for (key, list) in dims {
        let n: usize = key.parse().map_err(|_| bad(format!("dimension key {key:?} is not a number")))?;
        if ids.len() <= n {
            ids.resize(n + 1, Vec::new());
        }
        ids[n] = as_array(list, "a dimension's ids")?.iter().map(id_text).collect::<Result<_, _>>()?;
    }
    let lookup: Vec<BTreeMap<&str, usize>> =
        ids.iter().map(|level| level.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect()).collect();
    let resolve = |label: &str| -> Result<SimplexRef, IoError> {
        let unknown = || IoError::Simplicial(SimplicialError::UnknownSimplex(label.to_string()));
        let (d, id) = label.split_once('/').ok_or_else(unknown)?;
        let d: usize = d.parse().map_err(|_| unknown())?;
        let k = lookup.get(d).and_then(|m| m.get(id)).ok_or_else(unknown)?;
        Ok(SimplexRef::new(d, *k))
    };
    let face_map = match v.get("faces") {
        Some(f) => as_object(f, "faces")?.clone(),
        None => Map::new(),
    };
    for key in face_map.keys() {
        resolve(key)?;
    }
    let mut faces: Vec<Vec<Vec<Simplex>>> = ids.iter().map(|level| vec![Vec::new(); level.len()]).collect();
    for (n, level) in ids.iter().enumerate().skip(1) {
        for (k, id) in level.iter().enumerate() {
            let label = format!("{n}/{id}");
            let list = face_map.get(&label).ok_or_else(|| bad(format!("no faces given for {label}")))?;
            for (i, f) in as_array(list, "a face list")?.iter().enumerate() {
                let core = resolve(as_str(get(f, "ref")?, "ref")?)?;
                let word: Vec<usize> = match f.get("degen") {
                    Some(w) => as_array(w, "degen")?.iter().map(|e| as_usize(e, "degen entry")).collect::<Result<_, _>>()?,
                    None => Vec::new(),
                };
                let s = Simplex::from_word(core, &word).ok_or(SimplicialError::BadFace {
                    simplex: label.clone(),
                    face: i,
                    dim: n - 1,
                })?;
                faces[n][k].push(s);
            }
        }
    }
    Ok(SimplicialSet::new(ids, faces)?)
}

fn terms_to_json(p: &Poly) -> Value {
    let n_even = p.table().n_even();
    let n_odd = p.table().n_odd();
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| {
            let odd: Vec<usize> = (0..n_odd).filter(|i| m.odd_mask() >> i & 1 == 1).map(|i| i + 1).collect();
            json!({"coeff": rational_to_string(c), "even": &m.evens()[..n_even], "odd": odd})
        })
        .collect();
    Value::Array(terms)
}

fn terms_from_json(v: &Value, n: usize, cylinder: bool) -> Result<Poly, IoError> {
    let table = forms_table(n, cylinder);
    let mut terms = Vec::new();
    for t in as_array(v, "a form value")? {
        let coeff = parse_rational(as_str(get(t, "coeff")?, "coeff")?)?;
        let even: Vec<u32> = match t.get("even") {
            Some(e) => as_array(e, "even")?.iter().map(|x| as_usize(x, "exponent").map(|x| x as u32)).collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        if even.len() > table.n_even() {
            return Err(bad(format!("{} even exponents on a {n}-simplex", even.len())));
        }
        let mut evens = vec![0u32; table.n_even()];
        evens[..even.len()].copy_from_slice(&even);
        let mut mask = 0u64;
        let mut last = 0;
        if let Some(o) = t.get("odd") {
            for i in as_array(o, "odd")? {
                let i = as_usize(i, "odd index")?;
                if i <= last || i > table.n_odd() {
                    return Err(bad(format!("odd indices must increase within 1..={}", table.n_odd())));
                }
                last = i;
                mask |= 1 << (i - 1);
            }
        }
        terms.push((Monomial::new(evens, mask), coeff));
    }
    Ok(SuperPolynomial::from_terms(&table, terms))
}

/// The form with its space inline; odd indices count from 1 (`dx1`, then `dt` last on cylinders).
pub fn form_to_json(a: &SullivanForm) -> Value {
    let x = a.space();
    let mut values = Map::new();
    for r in x.all_simplices() {
        let p = a.value(r);
        if !p.is_zero() {
            values.insert(x.label(r), terms_to_json(p));
        }
    }
    let mut out = json!({"space": space_to_json(x), "values": values});
    if a.is_cylinder() {
        out["cylinder"] = json!(true);
    }
    out
}

/// Reads a form. The space comes from the file when inline, else from `space`;
/// when both are present they must agree. Absent simplices carry zero.
pub fn form_from_json(v: &Value, space: Option<&Arc<SimplicialSet>>) -> Result<SullivanForm, IoError> {
    let x = match (v.get("space"), space) {
        (Some(inline), given) => {
            let inline = Arc::new(space_from_json(inline)?);
            if let Some(g) = given {
                if **g != *inline {
                    return Err(bad("the form's inline space differs from the given space"));
                }
                g.clone()
            } else {
                inline
            }
        }
        (None, Some(g)) => g.clone(),
        (None, None) => return Err(bad("the form names no space and none was given")),
    };
    let cylinder = v.get("cylinder").and_then(Value::as_bool).unwrap_or(false);
    let values = as_object(get(v, "values")?, "values")?;
    for key in values.keys() {
        x.find_label(key).ok_or_else(|| IoError::Simplicial(SimplicialError::UnknownSimplex(key.clone())))?;
    }
    let mut out = Vec::new();
    for n in 0..x.dim().map_or(0, |d| d + 1) {
        let mut level = Vec::new();
        for r in x.simplices(n) {
            level.push(match values.get(&x.label(r)) {
                Some(t) => terms_from_json(t, n, cylinder)?,
                None => Poly::zero(&forms_table(n, cylinder)),
            });
        }
        out.push(level);
    }
    Ok(SullivanForm::from_values(&x, cylinder, out)?)
}

pub fn candidate_to_json<C: Coefficient>(c: &ActionCandidate<C>) -> Value {
    json!({"f0": c.f0.to_string(), "f1": c.f1.to_string(), "g0": c.g0.to_string(), "g1": c.g1.to_string()})
}

/// `{"f0": "x*y", "f1": "0", "g0": "x", "g1": "0"}` in the variables `x, y`.
pub fn candidate_from_json(v: &Value) -> Result<ActionCandidate<Rational>, IoError> {
    let field = |k: &str| -> Result<&str, IoError> { as_str(get(v, k)?, k) };
    Ok(ActionCandidate::from_text([field("f0")?, field("f1")?, field("g0")?, field("g1")?])?)
}

pub fn twist_to_json(t: &TwistSpec) -> Value {
    let family = match &t.family {
        TwistFamily::Degree(n) => json!({"kind": "degree", "n": n}),
        TwistFamily::Differential(n) => json!({"kind": "differential", "n": n}),
        TwistFamily::Table1 { row, params } => {
            let mut f = json!({"kind": "table1", "row": row.id(), "a": rational_to_string(&params.a)});
            for (key, val) in [("k", params.k), ("n", params.n), ("m", params.m)] {
                if let Some(val) = val {
                    f[key] = json!(val);
                }
            }
            if let Some(p) = &params.f {
                f["f"] = json!(p.to_string());
            }
            f
        }
    };
    json!({"geometry": t.geometry.name(), "family": family, "module": t.module_label})
}

/// `{"geometry": "topological", "family": {"kind": "degree", "n": 2}}`; table rows
/// take `row`, `k`, `n`, `m`, `a` and a polynomial `f` in `y`.
pub fn twist_from_json(v: &Value) -> Result<TwistSpec, IoError> {
    let geometry: Geometry = as_str(get(v, "geometry")?, "geometry")?.parse().map_err(bad)?;
    let family = get(v, "family")?;
    let kind = as_str(get(family, "kind")?, "kind")?;
    let int = |key: &str| -> Result<Option<i64>, IoError> { family.get(key).map(|x| as_i64(x, key)).transpose() };
    let family = match kind {
        "degree" => TwistFamily::Degree(int("n")?.ok_or_else(|| bad("degree twist needs n"))?),
        "differential" => {
            let n = int("n")?.ok_or_else(|| bad("differential twist needs n"))?;
            TwistFamily::Differential(usize::try_from(n).map_err(|_| bad("n must be a natural number"))?)
        }
        "table1" => {
            let row: Table1Row = as_str(get(family, "row")?, "row")?.parse().map_err(bad)?;
            let a = match family.get("a") {
                Some(a) => parse_rational(as_str(a, "a")?)?,
                None => Rational::from_i64(0),
            };
            let f = match family.get("f") {
                Some(f) => Some(Poly::parse(&y_table(), as_str(f, "f")?)?),
                None => None,
            };
            TwistFamily::Table1 { row, params: Table1Params { k: int("k")?, n: int("n")?, m: int("m")?, a, f } }
        }
        other => return Err(bad(format!("unknown twist kind {other:?} (expected degree, table1 or differential)"))),
    };
    let module_label = v.get("module").and_then(Value::as_str).unwrap_or("L").to_string();
    Ok(TwistSpec { geometry, family, module_label })
}

pub fn coaction_to_json(c: &Coaction) -> Value {
    let a = c.algebra();
    let images: Map<String, Value> =
        (0..a.len()).map(|g| (a.generator_name(g).to_string(), json!(c.image(g).to_string()))).collect();
    json!({"evens": a.evens(), "odds": a.odds(), "images": images})
}

/// `{"evens": [...], "odds": [...], "images": {"<generator>": "<text over x, eps>"}}`;
/// generators without an image are fixed.
pub fn coaction_from_json(v: &Value) -> Result<Coaction, IoError> {
    let names = |key: &str| -> Result<Vec<String>, IoError> {
        match v.get(key) {
            Some(list) => as_array(list, key)?.iter().map(|s| as_str(s, key).map(str::to_string)).collect(),
            None => Ok(Vec::new()),
        }
    };
    let algebra = VariableTable::new(names("evens")?, names("odds")?)?;
    let ext = extended_table(&algebra)?;
    let images_obj = as_object(get(v, "images")?, "images")?;
    for key in images_obj.keys() {
        algebra.lookup(key).ok_or_else(|| AlgebraError::UnknownVariable(key.clone()))?;
    }
    let mut images = Vec::new();
    for g in 0..algebra.len() {
        let name = algebra.generator_name(g);
        images.push(match images_obj.get(name) {
            Some(s) => Poly::parse(&ext, as_str(s, "image")?)?,
            None => Poly::var(&ext, name)?,
        });
    }
    Coaction::new(&algebra, images).map_err(|e| bad(e.to_string()))
}

pub fn witness_to_json(w: &Witness) -> Value {
    match w {
        Witness::Primitive(a) => json!({"kind": "primitive", "alpha": form_to_json(a)}),
        Witness::Cochain { alpha, form } => {
            json!({"kind": "cochain", "alpha": form_to_json(alpha), "form": form_to_json(form)})
        }
        Witness::Cylinder(f) => json!({"kind": "cylinder", "form": form_to_json(f)}),
        Witness::Prism(f) => json!({"kind": "prism", "form": form_to_json(f)}),
    }
}

pub fn verdict_to_json(v: &ConcordanceVerdict) -> Value {
    json!({
        "notion": v.notion.name(),
        "holds": v.holds,
        "degree": v.degree,
        "polydeg_bound": v.polydeg_bound,
        "witness": v.witness.as_ref().map(witness_to_json),
    })
}

pub fn search_report_to_json(r: &SearchReport) -> Value {
    json!({
        "monoid": r.monoid,
        "degree": r.degree,
        "field": r.field,
        "solutions": r.solutions,
        "families": r.families,
        "untabulated": r.untabulated,
        "examples": r.examples,
        "unmatched_count": r.unmatched_count,
        "unmatched": r.unmatched,
        "both_twists_nonzero": r.both_nonzero,
        "complete": r.complete(),
        "explained": r.explained(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::standard;

    fn round_trip_space(name: &str) {
        let x = standard(name).unwrap();
        let v = space_to_json(&x);
        let text = serde_json::to_string(&v).unwrap();
        let back = space_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, x, "{name}");
        assert_eq!(serde_json::to_string(&space_to_json(&back)).unwrap(), text);
    }

    #[test]
    fn spaces_round_trip() {
        for name in ["simplex0", "simplex3", "boundary2", "boundary3", "sphere1", "sphere2", "torus", "points2"] {
            round_trip_space(name);
        }
    }

    #[test]
    fn forms_round_trip() {
        for name in ["simplex2", "sphere1", "torus"] {
            let x = Arc::new(standard(name).unwrap());
            for degree in 0..=2 {
                let a = SullivanForm::random(&x, degree, 2, 7).unwrap();
                let v = form_to_json(&a);
                assert_eq!(form_from_json(&v, None).unwrap(), a);
                assert_eq!(form_from_json(&v, Some(&x)).unwrap(), a);
            }
        }
        let x = Arc::new(standard("simplex1").unwrap());
        let t = SullivanForm::interval_coordinate(&x, true);
        assert_eq!(form_from_json(&form_to_json(&t), None).unwrap(), t);
    }

    #[test]
    fn hand_written_form() {
        let v: Value = serde_json::from_str(
            r#"{"values": {"1/01": [{"coeff": "1/2", "even": [1], "odd": [1]}]}}"#,
        )
        .unwrap();
        let x = Arc::new(standard("simplex1").unwrap());
        let a = form_from_json(&v, Some(&x)).unwrap();
        let p = a.value(x.find_label("1/01").unwrap());
        assert_eq!(p.to_string(), "1/2*x1*dx1");
        assert!(form_from_json(&v, None).is_err());
        let unknown: Value = serde_json::from_str(r#"{"values": {"1/99": []}}"#).unwrap();
        assert!(form_from_json(&unknown, Some(&x)).is_err());
    }

    #[test]
    fn malformed_spaces_are_rejected() {
        let missing: Value = serde_json::from_str(r#"{"dims": {"0": ["a"], "1": ["e"]}, "faces": {}}"#).unwrap();
        assert!(space_from_json(&missing).is_err());
        let dangling: Value = serde_json::from_str(
            r#"{"dims": {"0": ["a"], "1": ["e"]}, "faces": {"1/e": [{"ref": "0/b"}, {"ref": "0/a"}]}}"#,
        )
        .unwrap();
        assert!(matches!(space_from_json(&dangling), Err(IoError::Simplicial(SimplicialError::UnknownSimplex(_)))));
        let circle: Value = serde_json::from_str(
            r#"{"dims": {"0": ["v"], "1": ["e"]}, "faces": {"1/e": [{"ref": "0/v", "degen": []}, {"ref": "0/v"}]}}"#,
        )
        .unwrap();
        assert_eq!(space_from_json(&circle).unwrap().pi0(), 1);
    }

    #[test]
    fn twists_round_trip() {
        let specs = [
            r#"{"geometry": "topological", "family": {"kind": "degree", "n": -1}}"#,
            r#"{"geometry": "pretopological", "family": {"kind": "table1", "row": "P2", "k": 1, "n": 1, "m": 1, "a": "2/3"}}"#,
            r#"{"geometry": "euclidean", "family": {"kind": "table1", "row": "E4", "f": "y^2 + 1"}}"#,
            r#"{"geometry": "pretopological", "family": {"kind": "differential", "n": 2}, "module": "M"}"#,
        ];
        for s in specs {
            let t = twist_from_json(&serde_json::from_str(s).unwrap()).unwrap();
            assert_eq!(twist_from_json(&twist_to_json(&t)).unwrap(), t, "{s}");
        }
        let bad: Value = serde_json::from_str(r#"{"geometry": "euclidean", "family": {"kind": "spin"}}"#).unwrap();
        assert!(twist_from_json(&bad).is_err());
    }

    #[test]
    fn candidates_and_coactions_round_trip() {
        let c = ActionCandidate::<Rational>::from_text(["x*y", "1/2*x*y", "x", "0"]).unwrap();
        assert_eq!(candidate_from_json(&candidate_to_json(&c)).unwrap(), c);
        let v: Value = serde_json::from_str(r#"{"evens": ["a"], "odds": ["b"], "images": {"a": "a + b*eps"}}"#).unwrap();
        let co = coaction_from_json(&v).unwrap();
        assert_eq!(coaction_from_json(&coaction_to_json(&co)).unwrap(), co);
    }

    #[test]
    fn rationals_are_exact_strings() {
        let q = parse_rational("-6/4").unwrap();
        assert_eq!(rational_to_string(&q), "-3/2");
        assert!(parse_rational("0.5").is_err());
    }
}
