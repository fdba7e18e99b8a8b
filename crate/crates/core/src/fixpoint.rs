//! Bourbaki–Witt iteration: for an inflationary `h` (`x ≤ h(x)`) on a poset
//! where chains have least upper bounds, `⊥, h(⊥), h²(⊥), ...` climbs to a
//! fixed point.
//!
//! [`bw_fixpoint`] runs the iteration over any [`AbstractCpo`]. On finite
//! posets [`bw_chain_equals_ggc`] checks that the iterates are exactly the
//! greatest good chain of `C ↦ C ∪ {h(sup C)}`, and [`reaching_definitions`]
//! uses the engine on a product bit-vector lattice.

use std::fmt;

use thiserror::Error;

use crate::bounding::OrderSelector;
use crate::error::{Error, Result};
use crate::good_chains::{enumerate_chains_with_limit, greatest_good_chain_bruteforce_with_limit, Derived};
use crate::limits::SizeLimit;
use crate::poset::{Element, Poset, SubsetBits};

pub const DEFAULT_CAP: usize = 1_000_000;

/// A partial order with a starting point for iteration.
///
/// Nothing here can check that chains have suprema; the engine only relies
/// on `leq` and `equal` for the elements it visits.
pub trait AbstractCpo {
    type Elem: Clone + fmt::Debug;

    fn bottom(&self) -> Self::Elem;
    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixpointReport<T> {
    pub fixpoint: T,
    /// Number of strict steps `x_k < h(x_k)` taken.
    pub iterations: usize,
    /// `⊥, h(⊥), ...` up to the fixpoint, without the repeated final value.
    pub trace: Vec<T>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FixpointError<T: fmt::Debug> {
    #[error("map is not inflationary at {at:?}: h(x) = {image:?}")]
    NotInflationary { at: T, image: T },
    #[error("order is inconsistent with equality: {a:?} and {b:?} are mutually below but not equal")]
    OrderInconsistent { a: T, b: T },
    #[error("no fixed point within {cap} iterations")]
    CapExceeded { cap: usize },
    #[error("iteration cap must be positive")]
    InvalidCap,
}

impl<T: fmt::Debug> FixpointError<T> {
    pub fn map_elem<U: fmt::Debug>(self, mut f: impl FnMut(T) -> U) -> FixpointError<U> {
        match self {
            FixpointError::NotInflationary { at, image } => FixpointError::NotInflationary {
                at: f(at),
                image: f(image),
            },
            FixpointError::OrderInconsistent { a, b } => FixpointError::OrderInconsistent { a: f(a), b: f(b) },
            FixpointError::CapExceeded { cap } => FixpointError::CapExceeded { cap },
            FixpointError::InvalidCap => FixpointError::InvalidCap,
        }
    }
}

/// Iterates `x₀ = ⊥, x_{k+1} = h(x_k)` until `h(x_k)` equals `x_k`.
///
/// Inflationarity is checked on each visited element only. More than `cap`
/// strict steps is reported as [`FixpointError::CapExceeded`].
pub fn bw_fixpoint<C: AbstractCpo>(
    cpo: &C,
    mut h: impl FnMut(&C::Elem) -> C::Elem,
    cap: usize,
) -> Result<FixpointReport<C::Elem>, FixpointError<C::Elem>> {
    if cap == 0 {
        return Err(FixpointError::InvalidCap);
    }
    let mut x = cpo.bottom();
    let mut trace = vec![x.clone()];
    loop {
        let next = h(&x);
        if !cpo.leq(&x, &next) {
            return Err(FixpointError::NotInflationary { at: x, image: next });
        }
        if cpo.equal(&x, &next) {
            return Ok(FixpointReport {
                fixpoint: x,
                iterations: trace.len() - 1,
                trace,
            });
        }
        if cpo.leq(&next, &x) {
            return Err(FixpointError::OrderInconsistent { a: x, b: next });
        }
        if trace.len() > cap {
            return Err(FixpointError::CapExceeded { cap });
        }
        trace.push(next.clone());
        x = next;
    }
}

/// Chains of `p` (including `∅`) without a least upper bound.
pub fn validate_cpo_finite(p: &Poset) -> Result<Vec<SubsetBits>> {
    validate_cpo_finite_with_limit(p, SizeLimit::default())
}

pub fn validate_cpo_finite_with_limit(p: &Poset, limit: SizeLimit) -> Result<Vec<SubsetBits>> {
    Ok(enumerate_chains_with_limit(p, limit)?
        .filter(|c| p.sup_of(c).is_none())
        .collect())
}

/// A finite poset in which every chain has a supremum.
#[derive(Clone, Debug)]
pub struct FinitePosetCpo<'a> {
    poset: &'a Poset,
    bottom: Element,
}

impl<'a> FinitePosetCpo<'a> {
    pub fn new(p: &'a Poset) -> Result<Self> {
        let missing = validate_cpo_finite(p)?;
        if let Some(c) = missing.first() {
            return Err(Error::PreconditionFailed(format!(
                "chain {:?} has no least upper bound",
                p.sorted_labels(c)
            )));
        }
        let bottom = p
            .sup_of(&p.empty_subset())
            .ok_or_else(|| Error::PreconditionFailed("poset has no least element".into()))?;
        Ok(FinitePosetCpo { poset: p, bottom })
    }

    pub fn poset(&self) -> &'a Poset {
        self.poset
    }
}

impl AbstractCpo for FinitePosetCpo<'_> {
    type Elem = Element;

    fn bottom(&self) -> Element {
        self.bottom
    }

    fn equal(&self, a: &Element, b: &Element) -> bool {
        a == b
    }

    fn leq(&self, a: &Element, b: &Element) -> bool {
        self.poset.leq(*a, *b)
    }
}

/// Bourbaki–Witt on a finite poset with `h` given as a table indexed by
/// element. Inflationarity is checked on every element before iterating.
pub fn bw_fixpoint_finite(
    cpo: &FinitePosetCpo<'_>,
    h: &[Element],
    cap: usize,
) -> Result<FixpointReport<Element>, FixpointError<Element>> {
    let p = cpo.poset;
    assert_eq!(h.len(), p.len(), "h must map every element");
    if let Some(x) = p.elements().find(|&x| !p.leq(x, h[x.index()])) {
        return Err(FixpointError::NotInflationary { at: x, image: h[x.index()] });
    }
    bw_fixpoint(cpo, |x| h[x.index()], cap)
}

/// `f(∅) = ⊥` and `f(C) = h(sup C)` otherwise.
///
/// Treating `∅` as the step that produces `⊥` makes the good chains of the
/// derived expander line up with the iterates `⊥, h(⊥), ...` including `⊥`.
struct SupThenH<'a> {
    h: &'a [Element],
    bottom: Element,
}

impl OrderSelector for SupThenH<'_> {
    fn select(&self, p: &Poset, c: &SubsetBits) -> Option<Element> {
        if c.is_empty() {
            Some(self.bottom)
        } else {
            p.sup_of(c).map(|s| self.h[s.index()])
        }
    }
}

/// Greatest good chain of `C ↦ C ∪ {h(sup C)}` (with `∅ ↦ {⊥}`), by enumeration.
pub fn bw_good_chain(p: &Poset, h: &[Element]) -> Result<SubsetBits> {
    let cpo = FinitePosetCpo::new(p)?;
    let f = SupThenH { h, bottom: cpo.bottom };
    Ok(greatest_good_chain_bruteforce_with_limit(p, &Derived(f), SizeLimit::default())?.chain)
}

/// Whether the Bourbaki–Witt iterates of `h` form exactly the greatest good
/// chain of `C ↦ C ∪ {h(sup C)}`.
pub fn bw_chain_equals_ggc(p: &Poset, h: &[Element]) -> Result<bool> {
    if h.len() != p.len() {
        return Err(Error::PreconditionFailed(format!(
            "h has {} entries for {} elements",
            h.len(),
            p.len()
        )));
    }
    let cpo = FinitePosetCpo::new(p)?;
    let report = bw_fixpoint_finite(&cpo, h, DEFAULT_CAP).map_err(|e| {
        Error::PreconditionFailed(e.map_elem(|x| p.label(x).to_owned()).to_string())
    })?;
    let iterates = SubsetBits::from_indices(p.len(), report.trace.iter().map(|x| x.index()));
    Ok(iterates == bw_good_chain(p, h)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataflowNode {
    pub name: String,
    pub preds: Vec<usize>,
    pub gen: SubsetBits,
    pub kill: SubsetBits,
}

/// A control-flow graph annotated with gen/kill sets over a definition universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataflowInstance {
    defs: Vec<String>,
    nodes: Vec<DataflowNode>,
}

impl DataflowInstance {
    pub fn new(defs: Vec<String>, nodes: Vec<DataflowNode>) -> Result<Self> {
        let d = defs.len();
        for node in &nodes {
            if let Some(&bad) = node.preds.iter().find(|&&q| q >= nodes.len()) {
                return Err(Error::Usage(format!("node `{}` has predecessor index {bad} out of range", node.name)));
            }
            if node.gen.width() != d || node.kill.width() != d {
                return Err(Error::Usage(format!("node `{}` has gen/kill of the wrong width", node.name)));
            }
            if !node.gen.is_disjoint(&node.kill) {
                return Err(Error::Usage(format!("node `{}` both generates and kills a definition", node.name)));
            }
        }
        Ok(DataflowInstance { defs, nodes })
    }

    pub fn defs(&self) -> &[String] {
        &self.defs
    }

    pub fn nodes(&self) -> &[DataflowNode] {
        &self.nodes
    }
}

/// Per-node `in` and `out` sets; one element of the product lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RdState {
    pub ins: Vec<SubsetBits>,
    pub outs: Vec<SubsetBits>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataflowSolution {
    pub ins: Vec<SubsetBits>,
    pub outs: Vec<SubsetBits>,
    pub iterations: usize,
}

/// Product of powersets, ordered pointwise by inclusion.
struct RdLattice<'a>(&'a DataflowInstance);

impl AbstractCpo for RdLattice<'_> {
    type Elem = RdState;

    fn bottom(&self) -> RdState {
        let empty = SubsetBits::empty(self.0.defs.len());
        RdState {
            ins: vec![empty.clone(); self.0.nodes.len()],
            outs: vec![empty; self.0.nodes.len()],
        }
    }

    fn equal(&self, a: &RdState, b: &RdState) -> bool {
        a == b
    }

    fn leq(&self, a: &RdState, b: &RdState) -> bool {
        a.ins.iter().zip(&b.ins).all(|(x, y)| x.is_subset(y))
            && a.outs.iter().zip(&b.outs).all(|(x, y)| x.is_subset(y))
    }
}

/// One simultaneous round of the transfer equations, joined with the input
/// state so the map is inflationary.
fn rd_round(inst: &DataflowInstance, s: &RdState) -> RdState {
    let mut next = s.clone();
    for (i, node) in inst.nodes.iter().enumerate() {
        let mut inn = SubsetBits::empty(inst.defs.len());
        for &q in &node.preds {
            inn.union_with(&s.outs[q]);
        }
        let out = node.gen.union(&inn.difference(&node.kill));
        next.ins[i].union_with(&inn);
        next.outs[i].union_with(&out);
    }
    next
}

/// Least solution of `in[n] = ⋃ out[p]`, `out[n] = gen[n] ∪ (in[n] ∖ kill[n])`.
pub fn reaching_definitions(
    inst: &DataflowInstance,
    cap: usize,
) -> Result<DataflowSolution, FixpointError<RdState>> {
    let report = bw_fixpoint(&RdLattice(inst), |s| rd_round(inst, s), cap)?;
    Ok(DataflowSolution {
        ins: report.fixpoint.ins,
        outs: report.fixpoint.outs,
        iterations: report.iterations,
    })
}
