//! Definition-level oracles shared by the integration suites.
//!
//! Everything here works from `Poset::leq` and plain index loops over all
//! subsets; none of it goes through the library's prefix, enumeration,
//! closure or fixpoint code paths.

#![allow(dead_code)]

use chainbound::fixpoint::DataflowInstance;
use chainbound::good_chains::OrderExpander;
use chainbound::{Element, Poset, SubsetBits};

pub fn members(s: &SubsetBits) -> Vec<usize> {
    s.indices()
}

pub fn leq(p: &Poset, a: usize, b: usize) -> bool {
    p.leq(Element::new(a), Element::new(b))
}

pub fn lt(p: &Poset, a: usize, b: usize) -> bool {
    a != b && leq(p, a, b)
}

pub fn bits(n: usize, idx: &[usize]) -> SubsetBits {
    SubsetBits::from_indices(n, idx.iter().copied())
}

/// All `2^n` subsets of `{0..n}` by bitmask.
pub fn all_subsets(n: usize) -> impl Iterator<Item = SubsetBits> {
    assert!(n <= 20);
    (0u32..1 << n).map(move |m| SubsetBits::from_indices(n, (0..n).filter(|&i| m >> i & 1 == 1)))
}

/// All subsets of `c`.
pub fn subsets_of(c: &SubsetBits) -> Vec<SubsetBits> {
    let m = members(c);
    (0u32..1 << m.len())
        .map(|mask| SubsetBits::from_indices(c.width(), (0..m.len()).filter(|&i| mask >> i & 1 == 1).map(|i| m[i])))
        .collect()
}

pub fn chain_by_def(p: &Poset, s: &SubsetBits) -> bool {
    let m = members(s);
    m.iter().all(|&a| m.iter().all(|&b| leq(p, a, b) || leq(p, b, a)))
}

/// `S ⊆ C` and `x ≤ y ∈ S, x ∈ C` implies `x ∈ S`.
pub fn segment_by_def(p: &Poset, s: &SubsetBits, c: &SubsetBits) -> bool {
    let (sm, cm) = (members(s), members(c));
    sm.iter().all(|x| cm.contains(x))
        && cm
            .iter()
            .all(|&x| sm.iter().all(|&y| !leq(p, x, y) || sm.contains(&x)))
}

pub fn prop_segment_by_def(p: &Poset, s: &SubsetBits, c: &SubsetBits) -> bool {
    s != c && segment_by_def(p, s, c)
}

/// Every segment of `c`, found by scanning all subsets of `c`.
pub fn segments_by_def(p: &Poset, c: &SubsetBits) -> Vec<SubsetBits> {
    subsets_of(c).into_iter().filter(|s| segment_by_def(p, s, c)).collect()
}

/// Goodness straight from the definition: all proper segments, not prefixes.
pub fn good_by_def(p: &Poset, g: &impl OrderExpander, c: &SubsetBits) -> bool {
    chain_by_def(p, c)
        && segments_by_def(p, c).iter().filter(|s| *s != c).all(|s| {
            let gs = g.expand(p, s);
            prop_segment_by_def(p, s, &gs) && segment_by_def(p, &gs, c)
        })
}

pub fn chains_by_def(p: &Poset) -> Vec<SubsetBits> {
    all_subsets(p.len()).filter(|s| chain_by_def(p, s)).collect()
}

pub fn ggc_by_def(p: &Poset, g: &impl OrderExpander) -> SubsetBits {
    chains_by_def(p)
        .iter()
        .filter(|c| good_by_def(p, g, c))
        .fold(SubsetBits::empty(p.len()), |acc, c| acc.union(c))
}

pub fn strict_ubs_by_def(p: &Poset, c: &SubsetBits) -> SubsetBits {
    let m = members(c);
    SubsetBits::from_indices(p.len(), (0..p.len()).filter(|&s| m.iter().all(|&x| lt(p, x, s))))
}

pub fn maximal_by_def(p: &Poset) -> SubsetBits {
    let n = p.len();
    SubsetBits::from_indices(n, (0..n).filter(|&x| !(0..n).any(|y| lt(p, x, y))))
}

pub fn sup_by_def(p: &Poset, c: &SubsetBits) -> Option<usize> {
    let m = members(c);
    let ubs: Vec<usize> = (0..p.len()).filter(|&u| m.iter().all(|&x| leq(p, x, u))).collect();
    ubs.iter().copied().find(|&u| ubs.iter().all(|&v| leq(p, u, v)))
}

/// Covering pairs by the triple-loop definition.
pub fn reduction_by_def(p: &Poset) -> Vec<(usize, usize)> {
    let n = p.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if lt(p, a, b) && !(0..n).any(|k| lt(p, a, k) && lt(p, k, b)) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Checks all three axioms on the stored relation by index loops.
pub fn axioms_hold(p: &Poset) -> bool {
    let n = p.len();
    (0..n).all(|i| leq(p, i, i))
        && (0..n).all(|i| (0..n).all(|j| i == j || !(leq(p, i, j) && leq(p, j, i))))
        && (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| !(leq(p, i, j) && leq(p, j, k)) || leq(p, i, k))))
}

/// Gauss–Seidel round robin in the given node order until nothing changes.
pub fn reaching_defs_round_robin(inst: &DataflowInstance, order: &[usize]) -> (Vec<Vec<bool>>, Vec<Vec<bool>>) {
    let d = inst.defs().len();
    let nodes = inst.nodes();
    let member = |s: &SubsetBits, i: usize| s.contains(Element::new(i));
    let mut ins = vec![vec![false; d]; nodes.len()];
    let mut outs = vec![vec![false; d]; nodes.len()];
    loop {
        let mut changed = false;
        for &n in order {
            let node = &nodes[n];
            let new_in: Vec<bool> = (0..d).map(|i| node.preds.iter().any(|&q| outs[q][i])).collect();
            let new_out: Vec<bool> = (0..d)
                .map(|i| member(&node.gen, i) || (new_in[i] && !member(&node.kill, i)))
                .collect();
            if new_in != ins[n] || new_out != outs[n] {
                changed = true;
                ins[n] = new_in;
                outs[n] = new_out;
            }
        }
        if !changed {
            return (ins, outs);
        }
    }
}

pub fn to_bools(s: &SubsetBits) -> Vec<bool> {
    (0..s.width()).map(|i| s.contains(Element::new(i))).collect()
}
