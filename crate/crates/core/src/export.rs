//! JSON and DOT renderings, and loading of JSON dumps.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::clone::{CapPolicy, MonomialClone};
use crate::error::{Error, Result};
use crate::field::FieldParam;
use crate::lattice::HasseDiagram;
use crate::minorset::QMinorSet;
use crate::monomial::Monomial;
use crate::semiaffine::{LinearClone, LinearForm, SemiaffineDiagram};

fn counts_map(counts: &[u32]) -> Value {
    let mut m = Map::new();
    for (i, &c) in counts.iter().enumerate() {
        if c > 0 {
            m.insert((i + 1).to_string(), json!(c));
        }
    }
    Value::Object(m)
}

fn counts_from_map(v: &Value, slots: usize) -> Result<Vec<u32>> {
    let obj = v.as_object().ok_or_else(|| Error::Json("counts must be an object".into()))?;
    let mut out = vec![0u32; slots];
    for (k, c) in obj {
        let r: usize = k.parse().map_err(|_| Error::Json(format!("residue key {k:?} is not a number")))?;
        if r == 0 || r > slots {
            return Err(Error::Json(format!("residue {r} out of range 1..={slots}")));
        }
        let c = c.as_u64().ok_or_else(|| Error::Json(format!("count for {k} is not a nonnegative integer")))?;
        out[r - 1] = c as u32;
    }
    Ok(out)
}

fn field(v: &Value, key: &str) -> Result<u64> {
    v.get(key).and_then(Value::as_u64).ok_or_else(|| Error::Json(format!("missing integer field {key:?}")))
}

/// `{"q": 5, "counts": {"3": 1, "2": 2}}`.
pub fn monomial_json(m: &Monomial, fp: &FieldParam) -> Value {
    json!({ "q": fp.q, "counts": counts_map(m.counts()) })
}

pub fn monomial_from_json(v: &Value) -> Result<(FieldParam, Monomial)> {
    let fp = FieldParam::new(field(v, "q")?)?;
    let counts = v.get("counts").ok_or_else(|| Error::Json("missing \"counts\"".into()))?;
    let m = Monomial::from_count_vec(counts_from_map(counts, fp.n() as usize)?, &fp)?;
    Ok((fp, m))
}

fn monomial_list(ms: &[Monomial]) -> Value {
    Value::Array(ms.iter().map(|m| counts_map(m.counts())).collect())
}

fn monomial_list_from(v: Option<&Value>, fp: &FieldParam, key: &str) -> Result<Vec<Monomial>> {
    let arr = v.and_then(Value::as_array).ok_or_else(|| Error::Json(format!("missing array {key:?}")))?;
    arr.iter().map(|x| Monomial::from_count_vec(counts_from_map(x, fp.n() as usize)?, fp)).collect()
}

pub fn clone_json(c: &MonomialClone) -> Value {
    json!({
        "q": c.fp.q,
        "cap": c.cap,
        "stable": c.stable,
        "generators": monomial_list(&c.generators),
        "members": monomial_list(c.members()),
    })
}

pub fn clone_from_json(v: &Value) -> Result<MonomialClone> {
    let fp = FieldParam::new(field(v, "q")?)?;
    let cap: CapPolicy = serde_json::from_value(v.get("cap").cloned().unwrap_or(Value::Null))
        .map_err(|e| Error::Json(format!("cap: {e}")))?;
    let stable = v.get("stable").and_then(Value::as_bool).ok_or_else(|| Error::Json("missing \"stable\"".into()))?;
    let generators = monomial_list_from(v.get("generators"), &fp, "generators")?;
    let members = monomial_list_from(v.get("members"), &fp, "members")?;
    Ok(MonomialClone::from_parts(fp, generators, cap, stable, members))
}

fn label_text<T: ToString>(label: &[T]) -> String {
    let parts: Vec<String> = label.iter().map(T::to_string).collect();
    format!("<{}>", parts.join(", "))
}

pub fn hasse_json(d: &HasseDiagram) -> Value {
    let nodes: Vec<Value> = d
        .nodes
        .iter()
        .zip(&d.labels)
        .enumerate()
        .map(|(i, (c, l))| {
            json!({
                "id": i,
                "label": label_text(l),
                "generators": monomial_list(l),
                "size": c.len(),
                "stable": c.stable,
            })
        })
        .collect();
    json!({
        "q": d.fp.q,
        "partial": d.partial,
        "chain_witness": d.chain_witness.as_ref().map(|w| monomial_list(w)),
        "bottom": d.bottom,
        "top": d.top,
        "nodes": nodes,
        "edges": d.edges,
    })
}

fn dot<T: ToString>(name: &str, labels: &[Vec<T>], edges: &[(usize, usize)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph \"{name}\" {{");
    let _ = writeln!(s, "  rankdir=BT;");
    let _ = writeln!(s, "  node [shape=box];");
    for (i, l) in labels.iter().enumerate() {
        let _ = writeln!(s, "  n{i} [label=\"{}\"];", label_text(l).replace('"', "\\\""));
    }
    for (a, b) in edges {
        let _ = writeln!(s, "  n{a} -> n{b};");
    }
    s.push_str("}\n");
    s
}

pub fn hasse_dot(d: &HasseDiagram) -> String {
    dot(&format!("monomial clones q={}", d.fp.q), &d.labels, &d.edges)
}

fn form_list(fs: &[LinearForm]) -> Value {
    Value::Array(fs.iter().map(|f| counts_map(f.counts())).collect())
}

pub fn linear_clone_json(lc: &LinearClone) -> Value {
    json!({
        "modulus": lc.n,
        "cap": lc.cap,
        "generators": form_list(&lc.generators),
        "members": form_list(lc.members()),
    })
}

pub fn semiaffine_json(d: &SemiaffineDiagram) -> Value {
    let nodes: Vec<Value> = d
        .nodes
        .iter()
        .zip(&d.labels)
        .enumerate()
        .map(|(i, (c, l))| json!({ "id": i, "label": label_text(l), "generators": form_list(l), "size": c.len() }))
        .collect();
    json!({ "modulus": d.n, "bottom": d.bottom, "top": d.top, "nodes": nodes, "edges": d.edges })
}

pub fn semiaffine_dot(d: &SemiaffineDiagram) -> String {
    dot(&format!("semi-affine clones modulus={}", d.n), &d.labels, &d.edges)
}

pub fn minorset_json(s: &QMinorSet) -> Value {
    json!({ "q": s.q, "bound": s.bound, "width_bound": s.width_bound, "points": s.points })
}
