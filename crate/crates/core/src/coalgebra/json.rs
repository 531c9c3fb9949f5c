//! JSON form of a coalgebra.
//!
//! ```json
//! {"field": {"kind": "rational"}, "basis": ["1", "x"],
//!  "delta": {"1": [["1", "1", {"rat": "1"}]], ...},
//!  "counit": {"1": {"rat": "1"}, ...},
//!  "grouplikes": [{"label": "1", "group_element": [0]}, ...],
//!  "grading": {"1": [0], ...}}
//! ```
//!
//! Optional keys `z_coord`, `group`, `meta` and `hopf` carry the rest of
//! [`SpecParts`]. Output key order is fixed, so serializing a parsed file
//! reproduces it byte for byte.

use serde_json::{json, Map, Value};

use super::{CoalgebraSpec, GroupStructure, Grouplike, HopfTables, LinComb, SpecError, SpecMeta, SpecParts};
use crate::field::{FieldContext, Scalar};

fn scalar_value(s: &Scalar) -> Value {
    serde_json::to_value(s).expect("scalar serializes")
}

fn comb_value(spec: &CoalgebraSpec, c: &Option<LinComb>) -> Value {
    match c {
        None => Value::Null,
        Some(c) => Value::Array(
            c.iter()
                .map(|(b, s)| json!([spec.label(*b as usize), scalar_value(s)]))
                .collect(),
        ),
    }
}

fn table_value(spec: &CoalgebraSpec, t: &[Vec<Option<LinComb>>]) -> Value {
    let mut m = Map::new();
    for (g, row) in t.iter().enumerate() {
        let mut r = Map::new();
        for (b, c) in row.iter().enumerate() {
            r.insert(spec.label(b).to_string(), comb_value(spec, c));
        }
        m.insert(spec.grouplike_label(g).to_string(), Value::Object(r));
    }
    Value::Object(m)
}

pub fn to_json(spec: &CoalgebraSpec) -> String {
    let p = spec.parts();
    let mut root = Map::new();
    root.insert("field".into(), serde_json::to_value(p.field).unwrap());
    root.insert("basis".into(), json!(p.labels));
    let mut delta = Map::new();
    let mut counit = Map::new();
    let mut grading = Map::new();
    for (i, l) in p.labels.iter().enumerate() {
        let terms: Vec<Value> = p.delta[i]
            .iter()
            .map(|(a, b, c)| json!([p.labels[*a as usize], p.labels[*b as usize], scalar_value(c)]))
            .collect();
        delta.insert(l.clone(), Value::Array(terms));
        counit.insert(l.clone(), scalar_value(&p.counit[i]));
        grading.insert(l.clone(), json!(p.grading[i]));
    }
    root.insert("delta".into(), Value::Object(delta));
    root.insert("counit".into(), Value::Object(counit));
    let gls: Vec<Value> = p
        .grouplikes
        .iter()
        .map(|g| json!({"label": p.labels[g.basis], "group_element": g.element}))
        .collect();
    root.insert("grouplikes".into(), Value::Array(gls));
    root.insert("grading".into(), Value::Object(grading));
    root.insert("z_coord".into(), json!(p.z_coord));
    if let Some(g) = &p.group {
        root.insert("group".into(), json!({"factors": g.factors}));
    }
    let m = &p.meta;
    root.insert(
        "meta".into(),
        json!({
            "name": m.name,
            "truncated": m.truncated,
            "exact_degree_max": m.exact_degree_max,
            "dropped_triples": m.dropped_triples,
            "ungraded": m.ungraded,
            "window": m.window.map(|(a, b)| vec![a, b]),
        }),
    );
    if let Some(h) = &p.hopf {
        root.insert(
            "hopf".into(),
            json!({"left": table_value(spec, &h.left), "right": table_value(spec, &h.right)}),
        );
    }
    serde_json::to_string_pretty(&Value::Object(root)).unwrap() + "\n"
}

fn err(msg: impl Into<String>) -> SpecError {
    SpecError::Format(msg.into())
}

fn parse_scalar(v: &Value) -> Result<Scalar, SpecError> {
    match v {
        Value::String(s) => Ok(Scalar::parse(s)?),
        Value::Number(n) => Ok(Scalar::from_int(
            n.as_i64().ok_or_else(|| err("integer coefficient expected"))?,
        )),
        _ => serde_json::from_value(v.clone()).map_err(|e| err(e.to_string())),
    }
}

fn obj<'a>(v: &'a Value, key: &str) -> Result<&'a Map<String, Value>, SpecError> {
    v.get(key)
        .and_then(Value::as_object)
        .ok_or_else(|| err(format!("missing object {key:?}")))
}

fn ints(v: &Value) -> Result<Vec<i64>, SpecError> {
    v.as_array()
        .ok_or_else(|| err("integer list expected"))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| err("integer expected")))
        .collect()
}

pub fn from_json(text: &str) -> Result<CoalgebraSpec, SpecError> {
    let root: Value = serde_json::from_str(text).map_err(|e| err(e.to_string()))?;
    let field: FieldContext = serde_json::from_value(root.get("field").cloned().ok_or_else(|| err("missing field"))?)
        .map_err(|e| err(e.to_string()))?;
    let labels: Vec<String> = root
        .get("basis")
        .and_then(Value::as_array)
        .ok_or_else(|| err("missing basis"))?
        .iter()
        .map(|v| {
            v.as_str()
                .map(String::from)
                .ok_or_else(|| err("basis labels must be strings"))
        })
        .collect::<Result<_, _>>()?;
    let index: std::collections::HashMap<&str, usize> =
        labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
    let idx = |l: &Value| -> Result<u32, SpecError> {
        let s = l.as_str().ok_or_else(|| err("label expected"))?;
        index
            .get(s)
            .map(|&i| i as u32)
            .ok_or_else(|| SpecError::UnknownLabel(s.into()))
    };

    let dm = obj(&root, "delta")?;
    let cm = obj(&root, "counit")?;
    let gm = obj(&root, "grading")?;
    let mut delta = Vec::with_capacity(labels.len());
    let mut counit = Vec::with_capacity(labels.len());
    let mut grading = Vec::with_capacity(labels.len());
    for l in &labels {
        let terms = dm
            .get(l)
            .and_then(Value::as_array)
            .ok_or_else(|| err(format!("no delta for {l:?}")))?;
        let mut row = Vec::with_capacity(terms.len());
        for t in terms {
            let t = t
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| err("delta terms are [l1, l2, scalar]"))?;
            row.push((idx(&t[0])?, idx(&t[1])?, parse_scalar(&t[2])?));
        }
        delta.push(row);
        counit.push(parse_scalar(
            cm.get(l).ok_or_else(|| err(format!("no counit for {l:?}")))?,
        )?);
        grading.push(ints(gm.get(l).ok_or_else(|| err(format!("no grading for {l:?}")))?)?);
    }
    let mut grouplikes = Vec::new();
    for g in root
        .get("grouplikes")
        .and_then(Value::as_array)
        .ok_or_else(|| err("missing grouplikes"))?
    {
        let basis = idx(g.get("label").ok_or_else(|| err("grouplike without label"))?)? as usize;
        let element = match g.get("group_element") {
            Some(v) => ints(v)?,
            None => vec![basis as i64],
        };
        grouplikes.push(Grouplike { basis, element });
    }
    let z_coord = root.get("z_coord").and_then(Value::as_u64).unwrap_or(0) as usize;
    let group = match root.get("group") {
        Some(g) => Some(GroupStructure::new(
            ints(g.get("factors").ok_or_else(|| err("group without factors"))?)?
                .into_iter()
                .map(|x| x as u64)
                .collect(),
        )),
        None => None,
    };
    let mut meta = SpecMeta::default();
    if let Some(m) = root.get("meta") {
        meta.name = m.get("name").and_then(Value::as_str).unwrap_or_default().to_string();
        meta.truncated = m.get("truncated").and_then(Value::as_bool).unwrap_or(false);
        meta.exact_degree_max = m.get("exact_degree_max").and_then(Value::as_i64);
        meta.dropped_triples = m.get("dropped_triples").and_then(Value::as_u64).unwrap_or(0) as usize;
        meta.ungraded = m.get("ungraded").and_then(Value::as_bool).unwrap_or(false);
        meta.window = match m.get("window") {
            Some(Value::Array(w)) if w.len() == 2 => Some((
                w[0].as_i64().ok_or_else(|| err("window bound"))?,
                w[1].as_i64().ok_or_else(|| err("window bound"))?,
            )),
            _ => None,
        };
    }
    let hopf = match root.get("hopf") {
        None => None,
        Some(h) => {
            let read = |key: &str| -> Result<Vec<Vec<Option<LinComb>>>, SpecError> {
                let t = obj(h, key)?;
                let mut out = Vec::with_capacity(grouplikes.len());
                for g in &grouplikes {
                    let row = t
                        .get(&labels[g.basis])
                        .and_then(Value::as_object)
                        .ok_or_else(|| err(format!("hopf table lacks {:?}", labels[g.basis])))?;
                    let mut r = Vec::with_capacity(labels.len());
                    for l in &labels {
                        match row.get(l) {
                            None | Some(Value::Null) => r.push(None),
                            Some(Value::Array(terms)) => {
                                let mut c = Vec::with_capacity(terms.len());
                                for t in terms {
                                    let t = t
                                        .as_array()
                                        .filter(|t| t.len() == 2)
                                        .ok_or_else(|| err("[label, scalar]"))?;
                                    c.push((idx(&t[0])?, parse_scalar(&t[1])?));
                                }
                                r.push(Some(c));
                            }
                            _ => return Err(err("bad hopf entry")),
                        }
                    }
                    out.push(r);
                }
                Ok(out)
            };
            Some(HopfTables {
                left: read("left")?,
                right: read("right")?,
            })
        }
    };
    CoalgebraSpec::from_parts(SpecParts {
        field,
        labels,
        delta,
        counit,
        grouplikes,
        group,
        grading,
        z_coord,
        meta,
        hopf,
    })
}
