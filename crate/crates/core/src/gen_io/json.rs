//! JSON formats for posets, selectors, dataflow instances and `h` tables.
//!
//! Subsets are written as label lists sorted lexicographically and read
//! without regard to order.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::bounding::{Selector, Strategy};
use crate::error::{Error, Result};
use crate::fixpoint::{DataflowInstance, DataflowNode};
use crate::poset::{ClosureMode, Element, Poset, SubsetBits};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PosetJson {
    elements: Vec<String>,
    closure: String,
    le: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SelectorJson {
    strategy: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    overrides: Vec<OverrideJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OverrideJson {
    subset: Vec<String>,
    value: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DataflowJson {
    defs: Vec<String>,
    nodes: Vec<NodeJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeJson {
    name: String,
    preds: Vec<String>,
    gen: Vec<String>,
    kill: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HTableJson {
    h: Vec<(String, String)>,
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::malformed(format!("line {}, column {}", e.line(), e.column()), e.to_string())
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_poset(text: &str) -> Result<Poset> {
    let raw: PosetJson = from_json(text)?;
    let mode = match raw.closure.as_str() {
        "hasse" => ClosureMode::Hasse,
        "full" => ClosureMode::Full,
        other => {
            return Err(Error::malformed(
                "closure",
                format!("expected \"hasse\" or \"full\", got {other:?}"),
            ))
        }
    };
    Poset::from_pairs(&raw.elements, &raw.le, mode)
}

/// Writes the covering relation in `hasse` mode, edges in index order.
pub fn write_poset(p: &Poset) -> String {
    let le = p
        .covering_pairs()
        .into_iter()
        .map(|(a, b)| (p.label(a).to_owned(), p.label(b).to_owned()))
        .collect();
    to_json(&PosetJson {
        elements: p.labels().to_vec(),
        closure: "hasse".into(),
        le,
    })
}

fn lookup(p: &Poset, label: &str) -> Result<Element> {
    p.element(label)
        .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
}

pub fn parse_selector(text: &str, p: &Poset) -> Result<Selector> {
    let raw: SelectorJson = from_json(text)?;
    let strategy = match raw.strategy.as_str() {
        "min-strict-ub" => Strategy::MinStrictUb,
        "max-strict-ub" => Strategy::MaxStrictUb,
        "none" => Strategy::None,
        "seeded-random" => Strategy::SeededRandom(
            raw.seed
                .ok_or_else(|| Error::malformed("seed", "seeded-random needs a seed"))?,
        ),
        other => return Err(Error::UnknownStrategy(other.to_owned())),
    };
    if raw.seed.is_some() && !matches!(strategy, Strategy::SeededRandom(_)) {
        return Err(Error::malformed("seed", format!("strategy {:?} takes no seed", raw.strategy)));
    }
    let mut overrides = BTreeMap::new();
    for (i, o) in raw.overrides.iter().enumerate() {
        let key = p.subset_of_labels(&o.subset)?;
        let value = lookup(p, &o.value)?;
        if overrides.insert(key, value).is_some() {
            return Err(Error::malformed(format!("overrides[{i}]"), "duplicate subset"));
        }
    }
    Ok(Selector { strategy, overrides })
}

pub fn write_selector(f: &Selector, p: &Poset) -> String {
    let (strategy, seed) = match f.strategy {
        Strategy::MinStrictUb => ("min-strict-ub", None),
        Strategy::MaxStrictUb => ("max-strict-ub", None),
        Strategy::SeededRandom(s) => ("seeded-random", Some(s)),
        Strategy::None => ("none", None),
    };
    let mut overrides: Vec<OverrideJson> = f
        .overrides
        .iter()
        .map(|(k, v)| OverrideJson {
            subset: p.sorted_labels(k),
            value: p.label(*v).to_owned(),
        })
        .collect();
    overrides.sort_by(|a, b| (&a.subset, &a.value).cmp(&(&b.subset, &b.value)));
    to_json(&SelectorJson {
        strategy: strategy.into(),
        seed,
        overrides,
    })
}

fn name_index(names: &[String]) -> Result<HashMap<&str, usize>> {
    let mut index = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if index.insert(n.as_str(), i).is_some() {
            return Err(Error::DuplicateLabel(n.clone()));
        }
    }
    Ok(index)
}

pub fn parse_dataflow(text: &str) -> Result<DataflowInstance> {
    let raw: DataflowJson = from_json(text)?;
    let defs = name_index(&raw.defs)?;
    let node_names: Vec<String> = raw.nodes.iter().map(|n| n.name.clone()).collect();
    let nodes = name_index(&node_names)?;
    let d = raw.defs.len();
    let def_set = |names: &[String]| -> Result<SubsetBits> {
        let mut s = SubsetBits::empty(d);
        for name in names {
            let i = defs
                .get(name.as_str())
                .ok_or_else(|| Error::UnknownLabel(name.clone()))?;
            s.insert(Element::new(*i));
        }
        Ok(s)
    };
    let mut out = Vec::with_capacity(raw.nodes.len());
    for n in &raw.nodes {
        let preds = n
            .preds
            .iter()
            .map(|q| {
                nodes
                    .get(q.as_str())
                    .copied()
                    .ok_or_else(|| Error::UnknownLabel(q.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(DataflowNode {
            name: n.name.clone(),
            preds,
            gen: def_set(&n.gen)?,
            kill: def_set(&n.kill)?,
        });
    }
    DataflowInstance::new(raw.defs, out)
}

pub fn write_dataflow(inst: &DataflowInstance) -> String {
    let defs = inst.defs();
    let names = |s: &SubsetBits| {
        let mut v: Vec<String> = s.iter().map(|e| defs[e.index()].clone()).collect();
        v.sort();
        v
    };
    let nodes = inst
        .nodes()
        .iter()
        .map(|n| NodeJson {
            name: n.name.clone(),
            preds: n.preds.iter().map(|&q| inst.nodes()[q].name.clone()).collect(),
            gen: names(&n.gen),
            kill: names(&n.kill),
        })
        .collect();
    to_json(&DataflowJson {
        defs: defs.to_vec(),
        nodes,
    })
}

/// `{"h": [[x, h(x)], ...]}`; elements not listed map to themselves.
pub fn parse_h_table(text: &str, p: &Poset) -> Result<Vec<Element>> {
    let raw: HTableJson = from_json(text)?;
    let mut h: Vec<Element> = p.elements().collect();
    let mut seen = vec![false; p.len()];
    for (i, (a, b)) in raw.h.iter().enumerate() {
        let x = lookup(p, a)?;
        if std::mem::replace(&mut seen[x.index()], true) {
            return Err(Error::malformed(format!("h[{i}]"), format!("`{a}` mapped twice")));
        }
        h[x.index()] = lookup(p, b)?;
    }
    Ok(h)
}

pub fn write_h_table(h: &[Element], p: &Poset) -> String {
    to_json(&HTableJson {
        h: p
            .elements()
            .map(|x| (p.label(x).to_owned(), p.label(h[x.index()]).to_owned()))
            .collect(),
    })
}
