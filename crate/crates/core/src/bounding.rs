//! Explicit choice functions and the constructive side of chain bounding.
//!
//! On a finite poset no map can send every chain to a strict upper bound of
//! it. [`falsify_bound_assignment`] makes that concrete: starting from the
//! empty chain it keeps adding the selected element and stops at the first
//! chain where the selection is missing or is not a strict upper bound.
//! [`unbounded_chain`] and [`zorn_maximal`] build on the same iteration.

use std::collections::BTreeMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::poset::{Element, Poset, SubsetBits};

/// A partial map from subsets to elements.
pub trait OrderSelector {
    fn select(&self, p: &Poset, c: &SubsetBits) -> Option<Element>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Lowest-index strict upper bound.
    MinStrictUb,
    /// Highest-index strict upper bound.
    MaxStrictUb,
    /// A strict upper bound drawn uniformly, as a pure function of `(seed, C)`.
    SeededRandom(u64),
    /// Undefined everywhere.
    None,
}

/// A choice function: a strategy plus explicit overrides.
///
/// Overrides win over the strategy and may name any element at all,
/// including ones that are not strict upper bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selector {
    pub strategy: Strategy,
    pub overrides: BTreeMap<SubsetBits, Element>,
}

impl Selector {
    pub fn new(strategy: Strategy) -> Self {
        Selector {
            strategy,
            overrides: BTreeMap::new(),
        }
    }

    pub fn min_strict_ub() -> Self {
        Self::new(Strategy::MinStrictUb)
    }

    pub fn max_strict_ub() -> Self {
        Self::new(Strategy::MaxStrictUb)
    }

    pub fn seeded_random(seed: u64) -> Self {
        Self::new(Strategy::SeededRandom(seed))
    }

    pub fn none() -> Self {
        Self::new(Strategy::None)
    }

    pub fn with_override(mut self, key: SubsetBits, value: Element) -> Self {
        self.overrides.insert(key, value);
        self
    }

    /// Checks that every override key and value belongs to `p`.
    pub fn check_bound(&self, p: &Poset) -> Result<()> {
        for (k, v) in &self.overrides {
            p.check_bound(k)?;
            if v.index() >= p.len() {
                return Err(Error::Usage(format!("override value {v} outside poset of {} elements", p.len())));
            }
        }
        Ok(())
    }

    fn strategy_value(&self, p: &Poset, c: &SubsetBits) -> Option<Element> {
        let bounds = match self.strategy {
            Strategy::None => return None,
            _ => p.strict_upper_bounds(c),
        };
        match self.strategy {
            Strategy::MinStrictUb => bounds.first(),
            Strategy::MaxStrictUb => bounds.last(),
            Strategy::SeededRandom(seed) => {
                let count = bounds.len();
                if count == 0 {
                    return None;
                }
                let k = seeded_rng(seed, c).gen_range(0..count);
                bounds.iter().nth(k)
            }
            Strategy::None => unreachable!(),
        }
    }
}

impl OrderSelector for Selector {
    fn select(&self, p: &Poset, c: &SubsetBits) -> Option<Element> {
        self.overrides
            .get(c)
            .copied()
            .or_else(|| self.strategy_value(p, c))
    }
}

/// Generator for the seeded strategy.
///
/// The state is folded from the seed and the subset's 64-bit blocks with one
/// SplitMix64 output per block, then mixed with the subset width.
fn seeded_rng(seed: u64, c: &SubsetBits) -> SplitMix64 {
    let mut state = seed;
    for block in c.blocks() {
        state = SplitMix64::seed_from_u64(state ^ block).next_u64();
    }
    SplitMix64::seed_from_u64(state ^ c.width() as u64)
}

pub fn select(p: &Poset, f: &impl OrderSelector, c: &SubsetBits) -> Option<Element> {
    f.select(p, c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    SelectorUndefined,
    ValueNotStrictBound(Element),
}

/// The chain on which a supposed strict-upper-bound assignment fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundingWitness {
    pub chain: SubsetBits,
    pub trace: Vec<SubsetBits>,
    pub verdict: Verdict,
}

impl BoundingWitness {
    /// Re-checks the verdict against `f` and the order relation.
    pub fn verify(&self, p: &Poset, f: &impl OrderSelector) -> bool {
        if !p.is_chain(&self.chain) {
            return false;
        }
        match (self.verdict, f.select(p, &self.chain)) {
            (Verdict::SelectorUndefined, None) => true,
            (Verdict::ValueNotStrictBound(v), Some(s)) if v == s => {
                self.chain.iter().any(|c| !p.lt(c, s))
            }
            _ => false,
        }
    }
}

/// Runs `C₀ = ∅, C_{k+1} = C_k ∪ {f(C_k)}` until `f(C_k)` is undefined or
/// not a strict upper bound of `C_k`, and reports that chain.
pub fn falsify_bound_assignment(p: &Poset, f: &impl OrderSelector) -> BoundingWitness {
    let mut chain = p.empty_subset();
    let mut trace = vec![chain.clone()];
    // Each successful step adds a new element, so n + 1 rounds always suffice.
    for _ in 0..=p.len() {
        let verdict = match f.select(p, &chain) {
            None => Verdict::SelectorUndefined,
            Some(s) if chain.iter().all(|c| p.lt(c, s)) => {
                chain.insert(s);
                trace.push(chain.clone());
                continue;
            }
            Some(s) => Verdict::ValueNotStrictBound(s),
        };
        return BoundingWitness {
            chain,
            trace,
            verdict,
        };
    }
    unreachable!("strict-upper-bound iteration grew past {} elements", p.len())
}

/// A chain with no strict upper bound.
///
/// Where `f` is undefined the lowest-index strict upper bound is chosen
/// instead, so the iteration only stops once no strict upper bound exists.
/// Fails with [`Error::InvalidSelector`] if `f` names an element that is not
/// a strict upper bound.
pub fn unbounded_chain(p: &Poset, f: &impl OrderSelector) -> Result<SubsetBits> {
    let completed = Completed(f);
    let witness = falsify_bound_assignment(p, &completed);
    match witness.verdict {
        Verdict::SelectorUndefined => {
            debug_assert!(p.strict_upper_bounds(&witness.chain).is_empty());
            Ok(witness.chain)
        }
        Verdict::ValueNotStrictBound(v) => Err(Error::InvalidSelector {
            chain: p.sorted_labels(&witness.chain),
            value: p.label(v).to_owned(),
        }),
    }
}

struct Completed<'a, F>(&'a F);

impl<F: OrderSelector> OrderSelector for Completed<'_, F> {
    fn select(&self, p: &Poset, c: &SubsetBits) -> Option<Element> {
        self.0
            .select(p, c)
            .or_else(|| p.strict_upper_bounds(c).first())
    }
}

/// A maximal element together with the unbounded chain it tops.
pub fn zorn_maximal(p: &Poset, f: &impl OrderSelector) -> Result<(Element, SubsetBits)> {
    if p.is_empty() {
        return Err(Error::EmptyPoset);
    }
    let chain = unbounded_chain(p, f)?;
    // The last element added is above everything before it.
    let top = p
        .greatest_of(&chain)
        .ok_or_else(|| Error::InternalLemmaViolation("unbounded chain has no maximum".into()))?;
    if !p.maximal_elements().contains(top) {
        return Err(Error::InternalLemmaViolation(format!(
            "top of unbounded chain `{}` is not maximal",
            p.label(top)
        )));
    }
    Ok((top, chain))
}

/// A selector for which `c` is a good chain: each proper prefix of `c`
/// maps to the next element of `c`, and nothing else is defined.
pub fn selector_for_chain(p: &Poset, c: &SubsetBits) -> Result<Selector> {
    p.check_bound(c)?;
    if !p.is_chain(c) {
        return Err(Error::NotAChain);
    }
    let mut f = Selector::none();
    let mut prefix = p.empty_subset();
    for x in p.chain_order(c) {
        f.overrides.insert(prefix.clone(), x);
        prefix.insert(x);
    }
    Ok(f)
}
