//! Good chains for an expander `g`, and the greatest good chain.
//!
//! A chain `C` is good for `g` when every proper segment `S ⊏ C` satisfies
//! `S ⊏ g(S) ⊑ C`. The good chains of a poset are totally ordered by the
//! segment relation and their union is again good; that union is computed
//! here in two ways: by enumerating every chain, and by iterating a selector.

use std::collections::BTreeMap;

use crate::bounding::{OrderSelector, Selector};
use crate::error::{Error, Result};
use crate::limits::SizeLimit;
use crate::poset::{Element, Poset, SubsetBits};

/// A map from subsets to subsets.
pub trait OrderExpander {
    fn expand(&self, p: &Poset, c: &SubsetBits) -> SubsetBits;
}

/// `C ↦ C ∪ {f(C)}`, and `C ↦ C` where `f` is undefined.
#[derive(Clone, Debug)]
pub struct Derived<F>(pub F);

impl<F: OrderSelector> OrderExpander for Derived<F> {
    fn expand(&self, p: &Poset, c: &SubsetBits) -> SubsetBits {
        match self.0.select(p, c) {
            Some(x) => c.with(x),
            None => c.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expander {
    SelectorDerived(Selector),
    /// Explicit entries; identity on every subset not listed.
    Table(BTreeMap<SubsetBits, SubsetBits>),
}

impl Expander {
    pub fn from_selector(f: Selector) -> Self {
        Expander::SelectorDerived(f)
    }
}

impl OrderExpander for Expander {
    fn expand(&self, p: &Poset, c: &SubsetBits) -> SubsetBits {
        match self {
            Expander::SelectorDerived(f) => match f.select(p, c) {
                Some(x) => c.with(x),
                None => c.clone(),
            },
            Expander::Table(t) => t.get(c).cloned().unwrap_or_else(|| c.clone()),
        }
    }
}

pub type ChainFamily = Vec<SubsetBits>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    BruteForce,
    Iterative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodChainReport {
    pub chain: SubsetBits,
    /// Iterates from `∅` up to `chain`; each is a proper segment of the next.
    pub trace: Vec<SubsetBits>,
    pub method: Method,
}

/// `C` is a chain and every proper prefix `S` of `C` has `S ⊏ g(S) ⊑ C`.
pub fn is_good(p: &Poset, g: &impl OrderExpander, c: &SubsetBits) -> bool {
    p.is_chain(c)
        && p.proper_prefixes(c).iter().all(|s| {
            let gs = g.expand(p, s);
            p.is_prop_segment(s, &gs) && p.is_segment(&gs, c)
        })
}

/// The weaker condition: every proper prefix `S` of the chain `C` has `g(S) ⊑ C`.
pub fn is_good_appendix(p: &Poset, g: &impl OrderExpander, c: &SubsetBits) -> bool {
    p.is_chain(c)
        && p.proper_prefixes(c)
            .iter()
            .all(|s| p.is_segment(&g.expand(p, s), c))
}

/// Depth-first chain enumeration, extending with increasing indices.
pub struct Chains<'a> {
    poset: &'a Poset,
    // (chain, elements that may still extend it, next index to try)
    stack: Vec<(SubsetBits, SubsetBits, usize)>,
    yielded_root: bool,
}

impl Iterator for Chains<'_> {
    type Item = SubsetBits;

    fn next(&mut self) -> Option<SubsetBits> {
        if !self.yielded_root {
            self.yielded_root = true;
            return self.stack.first().map(|(c, _, _)| c.clone());
        }
        while let Some((chain, candidates, next)) = self.stack.last_mut() {
            let pick = candidates.iter().find(|e| e.index() >= *next);
            match pick {
                Some(e) => {
                    *next = e.index() + 1;
                    let grown = chain.with(e);
                    let mut cand = candidates.intersection(&self.poset.comparable_set(e));
                    for i in 0..=e.index() {
                        cand.remove(Element::new(i));
                    }
                    self.stack.push((grown.clone(), cand, e.index() + 1));
                    return Some(grown);
                }
                None => {
                    self.stack.pop();
                }
            }
        }
        None
    }
}

pub fn enumerate_chains(p: &Poset) -> Result<Chains<'_>> {
    enumerate_chains_with_limit(p, SizeLimit::default())
}

pub fn enumerate_chains_with_limit(p: &Poset, limit: SizeLimit) -> Result<Chains<'_>> {
    limit.check(p)?;
    Ok(Chains {
        poset: p,
        stack: vec![(p.empty_subset(), p.full_subset(), 0)],
        yielded_root: false,
    })
}

pub fn good_chains(p: &Poset, g: &impl OrderExpander) -> Result<ChainFamily> {
    good_chains_with_limit(p, g, SizeLimit::default())
}

pub fn good_chains_with_limit(p: &Poset, g: &impl OrderExpander, limit: SizeLimit) -> Result<ChainFamily> {
    Ok(enumerate_chains_with_limit(p, limit)?
        .filter(|c| is_good(p, g, c))
        .collect())
}

/// The union of all good chains, checked to be good and to have every
/// good chain as a segment.
pub fn greatest_good_chain_bruteforce(p: &Poset, g: &impl OrderExpander) -> Result<GoodChainReport> {
    greatest_good_chain_bruteforce_with_limit(p, g, SizeLimit::default())
}

pub fn greatest_good_chain_bruteforce_with_limit(
    p: &Poset,
    g: &impl OrderExpander,
    limit: SizeLimit,
) -> Result<GoodChainReport> {
    let family = good_chains_with_limit(p, g, limit)?;
    let union = family
        .iter()
        .fold(p.empty_subset(), |acc, c| acc.union(c));
    if !is_good(p, g, &union) {
        return Err(Error::InternalLemmaViolation(format!(
            "union of good chains {:?} is not good",
            p.sorted_labels(&union)
        )));
    }
    if let Some(c) = family.iter().find(|c| !p.is_segment(c, &union)) {
        return Err(Error::InternalLemmaViolation(format!(
            "good chain {:?} is not a segment of the union",
            p.sorted_labels(c)
        )));
    }
    // Good chains are nested, so sorting by size gives the tower ∅ ⊏ ... ⊏ U.
    let mut trace = family;
    trace.sort_by_key(|c| c.len());
    Ok(GoodChainReport {
        chain: union,
        trace,
        method: Method::BruteForce,
    })
}

/// Greatest good chain of `C ↦ C ∪ {f(C)}` by iteration from `∅`, stopping
/// when `f(C)` is undefined or not a strict upper bound of `C`.
pub fn greatest_good_chain_iter(p: &Poset, f: &impl OrderSelector) -> GoodChainReport {
    let mut chain = p.empty_subset();
    let mut trace = vec![chain.clone()];
    while let Some(x) = f.select(p, &chain) {
        if !chain.iter().all(|c| p.lt(c, x)) {
            break;
        }
        chain.insert(x);
        trace.push(chain.clone());
    }
    GoodChainReport {
        chain,
        trace,
        method: Method::Iterative,
    }
}

/// First pair of good chains where neither is a segment of the other.
pub fn comparability_check(p: &Poset, g: &impl OrderExpander) -> Result<Option<(SubsetBits, SubsetBits)>> {
    comparability_check_with_limit(p, g, SizeLimit::default())
}

pub fn comparability_check_with_limit(
    p: &Poset,
    g: &impl OrderExpander,
    limit: SizeLimit,
) -> Result<Option<(SubsetBits, SubsetBits)>> {
    let family = good_chains_with_limit(p, g, limit)?;
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            if !p.is_segment(a, b) && !p.is_segment(b, a) {
                return Ok(Some((a.clone(), b.clone())));
            }
        }
    }
    Ok(None)
}
