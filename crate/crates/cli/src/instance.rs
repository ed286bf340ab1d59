//! Instance files: JSON documents naming carriers, categories, functors,
//! modules, presheaves, quotient partitions and topologies.
//!
//! ```json
//! {
//!   "quantale": "bool2",
//!   "theory": "identity",
//!   "carriers": { "X": ["a", "b"] },
//!   "categories": { "C": { "carrier": "X", "structure": [[1, 1], [0, 1]] } },
//!   "functors": { "id": { "dom": "C", "cod": "C", "map": ["a", "b"] } }
//! }
//! ```
//!
//! Structure and module matrices have one row per element of `TX`, in the
//! order of [`qcat_core::TSpace`]. Values are JSON booleans, integers, or
//! strings such as `"1/2"` and `"inf"`.

use std::collections::BTreeMap;
use std::sync::Arc;

use qcat_core::topo::FiniteSpace;
use qcat_core::{Carrier, Quantale, TCategory, TFunctor, TModule, Theory, VRel, Value};
use serde::{Deserialize, Serialize};
use serde_json::Value as Json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("syntax error at line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error("{path}: {msg}")]
    Invalid { path: String, msg: String },
}

fn invalid(path: impl Into<String>, msg: impl ToString) -> InstanceError {
    InstanceError::Invalid {
        path: path.into(),
        msg: msg.to_string(),
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawInstance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantale: Option<Json>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theory: Option<Json>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub carriers: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub categories: BTreeMap<String, RawCategory>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functors: BTreeMap<String, RawFunctor>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, RawModule>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub presheaves: BTreeMap<String, RawPresheaf>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub quotients: BTreeMap<String, RawQuotient>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub topologies: BTreeMap<String, RawTopology>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawCategory {
    pub carrier: String,
    pub structure: Vec<Vec<Json>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawFunctor {
    pub dom: String,
    pub cod: String,
    pub map: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawModule {
    pub dom: String,
    pub cod: String,
    pub matrix: Vec<Vec<Json>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawPresheaf {
    pub category: String,
    pub values: Vec<Json>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawQuotient {
    pub category: String,
    pub partition: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RawTopology {
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

#[derive(Clone)]
pub struct NamedFunctor {
    pub dom: String,
    pub cod: String,
    pub functor: TFunctor,
}

#[derive(Clone)]
pub struct NamedModule {
    pub dom: String,
    pub cod: String,
    pub module: TModule,
}

#[derive(Clone)]
pub struct NamedPresheaf {
    pub category: String,
    pub values: Vec<Value>,
}

#[derive(Clone)]
pub struct NamedQuotient {
    pub category: String,
    pub partition: Vec<Vec<usize>>,
}

/// A fully resolved instance. Categories, functors and modules are loaded
/// without checking their axioms, so that commands can report violations.
pub struct Instance {
    pub quantale: Quantale,
    pub theory: Theory,
    pub carriers: BTreeMap<String, Arc<Carrier>>,
    pub categories: BTreeMap<String, Arc<TCategory>>,
    pub functors: BTreeMap<String, NamedFunctor>,
    pub modules: BTreeMap<String, NamedModule>,
    pub presheaves: BTreeMap<String, NamedPresheaf>,
    pub quotients: BTreeMap<String, NamedQuotient>,
    pub topologies: BTreeMap<String, FiniteSpace>,
    pub raw: RawInstance,
}

pub fn parse_quantale(j: Option<&Json>) -> Result<Quantale, InstanceError> {
    match j {
        None => Ok(Quantale::Bool2),
        Some(Json::String(s)) => s.parse().map_err(|e| invalid("quantale", e)),
        Some(Json::Object(m)) => match m.get("chain").and_then(Json::as_u64) {
            Some(n) if m.len() == 1 => Quantale::chain(n as u32).map_err(|e| invalid("quantale", e)),
            _ => Err(invalid("quantale", "expected \"bool2\", \"lawvere\", \"chainN\" or {\"chain\": N}")),
        },
        Some(_) => Err(invalid("quantale", "expected a string or {\"chain\": N}")),
    }
}

pub fn parse_theory(q: Quantale, j: Option<&Json>, word_bound: Option<usize>) -> Result<Theory, InstanceError> {
    let theory = match j {
        None => Theory::identity(q),
        Some(Json::String(s)) => match s.as_str() {
            "identity" => Theory::identity(q),
            "ultrafilter" => Theory::ultrafilter(q),
            "word" => Theory::word(q, qcat_core::theory::DEFAULT_WORD_BOUND).map_err(|e| invalid("theory", e))?,
            other => return Err(invalid("theory", format!("unknown theory `{other}`"))),
        },
        Some(Json::Object(m)) => match m.get("word").and_then(Json::as_u64) {
            Some(l) if m.len() == 1 => Theory::word(q, l as usize).map_err(|e| invalid("theory", e))?,
            _ => return Err(invalid("theory", "expected {\"word\": L}")),
        },
        Some(_) => return Err(invalid("theory", "expected a string or {\"word\": L}")),
    };
    match (theory.bound(), word_bound) {
        (Some(_), Some(l)) => Theory::word(q, l).map_err(|e| invalid("--word-bound", e)),
        _ => Ok(theory),
    }
}

pub fn parse_value(q: Quantale, j: &Json, path: &str) -> Result<Value, InstanceError> {
    let s = match j {
        Json::Bool(b) => b.to_string(),
        Json::Number(n) => n.to_string(),
        Json::String(s) => s.clone(),
        _ => return Err(invalid(path, "expected a boolean, number or string")),
    };
    q.parse_value(&s).map_err(|e| invalid(path, e))
}

/// JSON form of a value: booleans for `2`, integers for chains, strings for distances.
pub fn value_json(v: &Value) -> Json {
    match v {
        Value::Bool(b) => Json::Bool(*b),
        Value::Chain(i) => Json::from(*i),
        Value::Lawvere(_) => Json::String(v.to_string()),
    }
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, name: &str, path: &str, kind: &str) -> Result<&'a T, InstanceError> {
    map.get(name).ok_or_else(|| invalid(path, format!("unknown {kind} `{name}`")))
}

fn matrix(
    q: Quantale,
    rows: &[Vec<Json>],
    dom: &Arc<Carrier>,
    cod: &Arc<Carrier>,
    path: &str,
) -> Result<VRel, InstanceError> {
    if rows.len() != dom.len() {
        return Err(invalid(path, format!("expected {} rows (one per element of TX), found {}", dom.len(), rows.len())));
    }
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != cod.len() {
            return Err(invalid(format!("{path}[{i}]"), format!("expected {} entries, found {}", cod.len(), row.len())));
        }
        let r = row
            .iter()
            .enumerate()
            .map(|(j, v)| parse_value(q, v, &format!("{path}[{i}][{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        parsed.push(r);
    }
    VRel::new(q, dom.clone(), cod.clone(), parsed).map_err(|e| invalid(path, e))
}

impl Instance {
    pub fn parse(text: &str, word_bound: Option<usize>) -> Result<Self, InstanceError> {
        let raw: RawInstance = serde_json::from_str(text).map_err(|e| InstanceError::Syntax {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
        Self::resolve(raw, word_bound)
    }

    pub fn resolve(raw: RawInstance, word_bound: Option<usize>) -> Result<Self, InstanceError> {
        let q = parse_quantale(raw.quantale.as_ref())?;
        let theory = parse_theory(q, raw.theory.as_ref(), word_bound)?;
        let mut carriers = BTreeMap::new();
        for (name, labels) in &raw.carriers {
            let c = Carrier::new(labels.clone()).map_err(|e| invalid(format!("carriers.{name}"), e))?;
            carriers.insert(name.clone(), c.arc());
        }
        let mut categories = BTreeMap::new();
        for (name, rc) in &raw.categories {
            let path = format!("categories.{name}");
            let carrier = lookup(&carriers, &rc.carrier, &format!("{path}.carrier"), "carrier")?;
            let tx = theory.apply(carrier).map_err(|e| invalid(&path, e))?;
            let a = matrix(q, &rc.structure, tx.carrier(), carrier, &format!("{path}.structure"))?;
            let cat = TCategory::new(tx, a).map_err(|e| invalid(&path, e))?;
            categories.insert(name.clone(), Arc::new(cat));
        }
        let mut functors = BTreeMap::new();
        for (name, rf) in &raw.functors {
            let path = format!("functors.{name}");
            let dom = lookup(&categories, &rf.dom, &format!("{path}.dom"), "category")?.clone();
            let cod = lookup(&categories, &rf.cod, &format!("{path}.cod"), "category")?.clone();
            if rf.map.len() != dom.len() {
                return Err(invalid(format!("{path}.map"), format!("expected {} images, found {}", dom.len(), rf.map.len())));
            }
            let map = rf
                .map
                .iter()
                .map(|l| cod.carrier().index_of(l).map_err(|e| invalid(format!("{path}.map"), e)))
                .collect::<Result<Vec<_>, _>>()?;
            let functor = TFunctor::new(dom, cod, map).map_err(|e| invalid(&path, e))?;
            functors.insert(
                name.clone(),
                NamedFunctor {
                    dom: rf.dom.clone(),
                    cod: rf.cod.clone(),
                    functor,
                },
            );
        }
        let mut modules = BTreeMap::new();
        for (name, rm) in &raw.modules {
            let path = format!("modules.{name}");
            let dom = lookup(&categories, &rm.dom, &format!("{path}.dom"), "category")?.clone();
            let cod = lookup(&categories, &rm.cod, &format!("{path}.cod"), "category")?.clone();
            let rel = matrix(q, &rm.matrix, dom.tspace().carrier(), cod.carrier(), &format!("{path}.matrix"))?;
            let module = TModule::new(dom, cod, rel).map_err(|e| invalid(&path, e))?;
            modules.insert(
                name.clone(),
                NamedModule {
                    dom: rm.dom.clone(),
                    cod: rm.cod.clone(),
                    module,
                },
            );
        }
        let mut presheaves = BTreeMap::new();
        for (name, rp) in &raw.presheaves {
            let path = format!("presheaves.{name}");
            let cat = lookup(&categories, &rp.category, &format!("{path}.category"), "category")?;
            if rp.values.len() != cat.tspace().len() {
                return Err(invalid(
                    format!("{path}.values"),
                    format!("expected {} values (one per element of TX), found {}", cat.tspace().len(), rp.values.len()),
                ));
            }
            let values = rp
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| parse_value(q, v, &format!("{path}.values[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            presheaves.insert(
                name.clone(),
                NamedPresheaf {
                    category: rp.category.clone(),
                    values,
                },
            );
        }
        let mut quotients = BTreeMap::new();
        for (name, rq) in &raw.quotients {
            let path = format!("quotients.{name}");
            let cat = lookup(&categories, &rq.category, &format!("{path}.category"), "category")?;
            let partition = rq
                .partition
                .iter()
                .map(|class| {
                    class
                        .iter()
                        .map(|l| cat.carrier().index_of(l).map_err(|e| invalid(format!("{path}.partition"), e)))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            quotients.insert(
                name.clone(),
                NamedQuotient {
                    category: rq.category.clone(),
                    partition,
                },
            );
        }
        let mut topologies = BTreeMap::new();
        for (name, rt) in &raw.topologies {
            let path = format!("topologies.{name}");
            let points = Carrier::new(rt.points.clone()).map_err(|e| invalid(format!("{path}.points"), e))?.arc();
            let opens = rt
                .opens
                .iter()
                .map(|u| {
                    u.iter()
                        .map(|l| points.index_of(l).map_err(|e| invalid(format!("{path}.opens"), e)))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            let space = FiniteSpace::from_lists(points, &opens).map_err(|e| invalid(&path, e))?;
            topologies.insert(name.clone(), space);
        }
        Ok(Instance {
            quantale: q,
            theory,
            carriers,
            categories,
            functors,
            modules,
            presheaves,
            quotients,
            topologies,
            raw,
        })
    }

    /// Normalised JSON: canonical quantale/theory names, values re-rendered.
    pub fn to_json(&self) -> Json {
        let mut raw = self.raw.clone();
        raw.quantale = Some(Json::String(self.quantale.to_string()));
        raw.theory = Some(match self.theory.bound() {
            Some(l) => serde_json::json!({ "word": l }),
            None => Json::String(
                match self.theory.kind() {
                    qcat_core::TheoryKind::Ultrafilter => "ultrafilter",
                    _ => "identity",
                }
                .into(),
            ),
        });
        for (name, rc) in raw.categories.iter_mut() {
            rc.structure = self.categories[name].structure().to_rows().iter().map(|r| r.iter().map(value_json).collect()).collect();
        }
        for (name, rm) in raw.modules.iter_mut() {
            rm.matrix = self.modules[name].module.rel().to_rows().iter().map(|r| r.iter().map(value_json).collect()).collect();
        }
        for (name, rp) in raw.presheaves.iter_mut() {
            rp.values = self.presheaves[name].values.iter().map(value_json).collect();
        }
        serde_json::to_value(raw).expect("serialisable")
    }
}
