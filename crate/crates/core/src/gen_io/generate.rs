//! Seeded generators.
//!
//! Every generator draws from a SplitMix64 stream seeded with the caller's
//! seed through `SeedableRng::seed_from_u64` (which uses the seed as the
//! initial SplitMix64 state). Probabilities compare the top 53 bits of a
//! `next_u64` draw, scaled to `[0, 1)`, against the threshold. Bounded
//! integer draws use `Rng::gen_range` from `rand` 0.8.

use std::collections::BTreeMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::bounding::{Selector, Strategy};
use crate::error::{Error, Result};
use crate::fixpoint::{DataflowInstance, DataflowNode};
use crate::good_chains::Expander;
use crate::poset::{ClosureMode, Element, Poset, SubsetBits};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenConfig {
    pub n: usize,
    pub edge_prob: f64,
    pub seed: u64,
}

impl GenConfig {
    pub fn new(n: usize, edge_prob: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&edge_prob) {
            return Err(Error::Usage(format!("edge probability {edge_prob} outside [0, 1]")));
        }
        Ok(GenConfig { n, edge_prob, seed })
    }
}

/// `[0, 1)` from the top 53 bits of one draw.
fn unit(rng: &mut SplitMix64) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn coin(rng: &mut SplitMix64, prob: f64) -> bool {
    unit(rng) < prob
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

/// Random DAG on `e0..e{n-1}` with forward edges `i → j` (`i < j`), one draw
/// per pair in lexicographic `(i, j)` order, closed reflexively and transitively.
pub fn random_poset(cfg: &GenConfig) -> Poset {
    let mut rng = SplitMix64::seed_from_u64(cfg.seed);
    let names = labels(cfg.n);
    let mut pairs = Vec::new();
    for i in 0..cfg.n {
        for j in i + 1..cfg.n {
            if coin(&mut rng, cfg.edge_prob) {
                pairs.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    Poset::from_pairs(&names, &pairs, ClosureMode::Hasse).expect("forward edges are acyclic")
}

/// Like [`random_poset`] but `e0` sits below every element, so the result is
/// a finite CPO. The other elements use the same stream as a random poset on
/// `n - 1` elements. `n` is raised to at least 1.
pub fn random_cpo(cfg: &GenConfig) -> Poset {
    let n = cfg.n.max(1);
    let rest = random_poset(&GenConfig { n: n - 1, ..*cfg });
    let names = labels(n);
    let mut pairs: Vec<(String, String)> = (1..n).map(|j| (names[0].clone(), names[j].clone())).collect();
    for (a, b) in rest.covering_pairs() {
        pairs.push((names[a.index() + 1].clone(), names[b.index() + 1].clone()));
    }
    Poset::from_pairs(&names, &pairs, ClosureMode::Hasse).expect("forward edges are acyclic")
}

/// `h(x)` drawn uniformly from `{ y : x ≤ y }`, elements in index order.
pub fn random_inflationary_map(p: &Poset, seed: u64) -> Vec<Element> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    p.elements()
        .map(|x| pick(&mut rng, &p.up_set(x)).expect("x ≤ x"))
        .collect()
}

fn pick(rng: &mut SplitMix64, s: &SubsetBits) -> Option<Element> {
    if s.is_empty() {
        None
    } else {
        let k = rng.gen_range(0..s.len());
        s.iter().nth(k)
    }
}

fn random_subset(rng: &mut SplitMix64, n: usize, prob: f64) -> SubsetBits {
    SubsetBits::from_indices(n, (0..n).filter(|_| coin(rng, prob)))
}

/// A selector with a random base strategy and overrides that sometimes lie.
///
/// Overrides are placed along random ascending walks from `∅`, so they sit
/// on chains the bounding iteration actually visits. Each visited chain
/// gets either a genuine strict upper bound or, with probability 1/2, an
/// arbitrary element; a walk ends at its first lie. A few overrides on
/// arbitrary subsets are added as well.
pub fn random_override_selector(p: &Poset, seed: u64) -> Selector {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let n = p.len();
    let strategy = match rng.gen_range(0..4u32) {
        0 => Strategy::MinStrictUb,
        1 => Strategy::MaxStrictUb,
        2 => Strategy::SeededRandom(rng.next_u64()),
        _ => Strategy::None,
    };
    let mut overrides = BTreeMap::new();
    if n == 0 {
        return Selector { strategy, overrides };
    }
    let walks = rng.gen_range(1..=3);
    for _ in 0..walks {
        let mut chain = p.empty_subset();
        loop {
            let honest = pick(&mut rng, &p.strict_upper_bounds(&chain));
            let lie = coin(&mut rng, 0.5);
            match honest {
                Some(x) if !lie => {
                    overrides.insert(chain.clone(), x);
                    chain.insert(x);
                }
                _ => {
                    let x = Element::new(rng.gen_range(0..n));
                    overrides.insert(chain, x);
                    break;
                }
            }
        }
    }
    for _ in 0..rng.gen_range(0..=2) {
        let key = random_subset(&mut rng, n, 0.5);
        overrides.insert(key, Element::new(rng.gen_range(0..n)));
    }
    Selector { strategy, overrides }
}

/// A table expander whose entries sit on random ascending walks. Most
/// entries add one element (often a strict upper bound); some map to an
/// arbitrary subset instead.
pub fn random_table_expander(p: &Poset, seed: u64) -> Expander {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let n = p.len();
    let mut table = BTreeMap::new();
    if n == 0 {
        return Expander::Table(table);
    }
    for _ in 0..rng.gen_range(1..=3) {
        let mut chain = p.empty_subset();
        loop {
            let roll = unit(&mut rng);
            if roll < 0.6 {
                match pick(&mut rng, &p.strict_upper_bounds(&chain)) {
                    Some(x) => {
                        let next = chain.with(x);
                        table.insert(chain, next.clone());
                        chain = next;
                        continue;
                    }
                    None => break,
                }
            } else if roll < 0.85 {
                let x = Element::new(rng.gen_range(0..n));
                table.insert(chain.clone(), chain.with(x));
            } else {
                let s = random_subset(&mut rng, n, 0.4);
                table.insert(chain, s);
            }
            break;
        }
    }
    Expander::Table(table)
}

/// Random CFG with `1..=max_nodes` nodes and `0..=max_defs` definitions.
/// Each ordered pair `(p, n)` is a predecessor edge with probability 0.3;
/// gen bits are set with probability 0.25 and kill bits with 0.25 among the
/// definitions not generated.
pub fn random_dataflow(seed: u64, max_nodes: usize, max_defs: usize) -> DataflowInstance {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let nodes = rng.gen_range(1..=max_nodes.max(1));
    let d = rng.gen_range(0..=max_defs);
    let defs: Vec<String> = (0..d).map(|i| format!("d{i}")).collect();
    let mut out = Vec::with_capacity(nodes);
    for i in 0..nodes {
        let preds: Vec<usize> = (0..nodes).filter(|_| coin(&mut rng, 0.3)).collect();
        let gen = random_subset(&mut rng, d, 0.25);
        let mut kill = random_subset(&mut rng, d, 0.25);
        kill.difference_with(&gen);
        out.push(DataflowNode {
            name: format!("n{i}"),
            preds,
            gen,
            kill,
        });
    }
    DataflowInstance::new(defs, out).expect("generated instance is valid")
}
