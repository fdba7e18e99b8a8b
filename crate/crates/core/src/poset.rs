//! Finite posets stored as a reflexive order matrix, plus the subset,
//! segment, chain and bound predicates the rest of the crate builds on.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// Index of an element in its poset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(usize);

impl Element {
    pub fn new(index: usize) -> Self {
        Element(index)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A subset of the elements of a poset with `n` elements.
///
/// The width is fixed at construction and acts as the binding to a poset:
/// a subset only makes sense for posets of the same size.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetBits {
    bits: FixedBitSet,
}

impl SubsetBits {
    pub fn empty(n: usize) -> Self {
        SubsetBits {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        SubsetBits { bits }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(n: usize, indices: I) -> Self {
        let mut s = Self::empty(n);
        for i in indices {
            s.insert(Element(i));
        }
        s
    }

    pub fn singleton(n: usize, e: Element) -> Self {
        Self::from_indices(n, [e.0])
    }

    /// Width of the subset, i.e. the element count of the poset it belongs to.
    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, e: Element) -> bool {
        self.bits.contains(e.0)
    }

    /// Panics if `e` is outside the subset's width.
    pub fn insert(&mut self, e: Element) {
        assert!(
            e.0 < self.bits.len(),
            "element {} outside subset of width {}",
            e.0,
            self.bits.len()
        );
        self.bits.insert(e.0);
    }

    pub fn remove(&mut self, e: Element) {
        self.bits.set(e.0, false);
    }

    pub fn with(&self, e: Element) -> Self {
        let mut s = self.clone();
        s.insert(e);
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.bits.ones().map(Element)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.bits.ones().collect()
    }

    pub fn first(&self) -> Option<Element> {
        self.bits.minimum().map(Element)
    }

    pub fn last(&self) -> Option<Element> {
        self.bits.maximum().map(Element)
    }

    pub fn is_subset(&self, other: &SubsetBits) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &SubsetBits) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn union(&self, other: &SubsetBits) -> Self {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &SubsetBits) -> Self {
        let mut s = self.clone();
        s.bits.intersect_with(&other.bits);
        s
    }

    pub fn difference(&self, other: &SubsetBits) -> Self {
        let mut s = self.clone();
        s.bits.difference_with(&other.bits);
        s
    }

    pub fn union_with(&mut self, other: &SubsetBits) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &SubsetBits) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &SubsetBits) {
        self.bits.difference_with(&other.bits);
    }

    /// Raw 64-bit blocks, lowest elements first. Used for seeded hashing.
    pub fn blocks(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.as_slice().iter().map(|&b| b as u64)
    }
}

impl fmt::Debug for SubsetBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.bits.ones()).finish()
    }
}

/// How the pairs handed to [`Poset::from_pairs`] are interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureMode {
    /// Pairs are covering edges; the reflexive-transitive closure is taken.
    Hasse,
    /// Pairs are the whole order relation (reflexive pairs optional).
    Full,
}

/// A finite partial order over labeled elements.
///
/// The reflexive relation `≤` is the single source of truth; `<` is derived
/// as `≤` minus the diagonal.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    // up[i] = { j : i ≤ j }, down[j] = { i : i ≤ j }
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("labels", &self.labels)
            .field("up", &self.up.iter().map(|r| r.ones().collect::<Vec<_>>()).collect::<Vec<_>>())
            .finish()
    }
}

impl Poset {
    pub fn from_pairs<S: AsRef<str>>(
        labels: &[S],
        pairs: &[(S, S)],
        mode: ClosureMode,
    ) -> Result<Self> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_owned()).collect();
        let index = label_index(&labels)?;
        let n = labels.len();
        let mut edges = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let lookup = |s: &str| {
                index
                    .get(s)
                    .copied()
                    .ok_or_else(|| Error::UnknownLabel(s.to_owned()))
            };
            edges.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        if let Some(cycle) = find_cycle(n, &edges) {
            return Err(Error::CycleDetected {
                cycle: cycle.into_iter().map(|i| labels[i].clone()).collect(),
            });
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter_mut().enumerate() {
            row.insert(i);
        }
        for &(a, b) in &edges {
            up[a].insert(b);
        }
        match mode {
            ClosureMode::Hasse => transitive_closure(&mut up),
            ClosureMode::Full => {
                if let Some((a, b, c)) = transitivity_violation(&up) {
                    return Err(Error::NotTransitive {
                        a: labels[a].clone(),
                        b: labels[b].clone(),
                        c: labels[c].clone(),
                    });
                }
            }
        }
        Ok(Self::from_up_rows(labels, index, up))
    }

    /// Builds a poset from an already-closed relation given as rows
    /// `up[i] = { j : i ≤ j }`. Validates all three axioms.
    pub fn from_relation(labels: Vec<String>, up: Vec<SubsetBits>) -> Result<Self> {
        let index = label_index(&labels)?;
        let n = labels.len();
        let up: Vec<FixedBitSet> = up.into_iter().map(|r| r.bits).collect();
        if up.len() != n || up.iter().any(|r| r.len() != n) {
            return Err(Error::Usage(format!(
                "relation must be {n}x{n}, got {} rows",
                up.len()
            )));
        }
        let p = Self::from_up_rows(labels, index, up);
        p.check_axioms()?;
        Ok(p)
    }

    fn from_up_rows(labels: Vec<String>, index: HashMap<String, usize>, up: Vec<FixedBitSet>) -> Self {
        let n = labels.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter().enumerate() {
            for j in row.ones() {
                down[j].insert(i);
            }
        }
        Poset {
            labels,
            index,
            up,
            down,
        }
    }

    /// Total order `labels[0] < labels[1] < ...`.
    pub fn chain<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let pairs: Vec<(&str, &str)> = labels
            .windows(2)
            .map(|w| (w[0].as_ref(), w[1].as_ref()))
            .collect();
        let labels: Vec<&str> = labels.iter().map(|s| s.as_ref()).collect();
        Self::from_pairs(&labels, &pairs, ClosureMode::Hasse)
    }

    pub fn antichain<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        Self::from_pairs(labels, &[], ClosureMode::Hasse)
    }

    /// Re-checks reflexivity, antisymmetry and transitivity of the stored relation.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            if !self.up[i].contains(i) {
                return Err(Error::Usage(format!("relation not reflexive at {}", self.labels[i])));
            }
            for j in self.up[i].ones() {
                if j != i && self.up[j].contains(i) {
                    return Err(Error::CycleDetected {
                        cycle: vec![self.labels[i].clone(), self.labels[j].clone(), self.labels[i].clone()],
                    });
                }
            }
        }
        if let Some((a, b, c)) = transitivity_violation(&self.up) {
            return Err(Error::NotTransitive {
                a: self.labels[a].clone(),
                b: self.labels[b].clone(),
                c: self.labels[c].clone(),
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, e: Element) -> &str {
        &self.labels[e.0]
    }

    pub fn element(&self, label: &str) -> Option<Element> {
        self.index.get(label).copied().map(Element)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        (0..self.len()).map(Element)
    }

    pub fn leq(&self, a: Element, b: Element) -> bool {
        self.up[a.0].contains(b.0)
    }

    pub fn lt(&self, a: Element, b: Element) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: Element, b: Element) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// `{ y : e ≤ y }`
    pub fn up_set(&self, e: Element) -> SubsetBits {
        SubsetBits {
            bits: self.up[e.0].clone(),
        }
    }

    /// `{ x : x ≤ e }`
    pub fn down_set(&self, e: Element) -> SubsetBits {
        SubsetBits {
            bits: self.down[e.0].clone(),
        }
    }

    /// Elements comparable with `e`, including `e`.
    pub fn comparable_set(&self, e: Element) -> SubsetBits {
        let mut bits = self.up[e.0].clone();
        bits.union_with(&self.down[e.0]);
        SubsetBits { bits }
    }

    pub fn empty_subset(&self) -> SubsetBits {
        SubsetBits::empty(self.len())
    }

    pub fn full_subset(&self) -> SubsetBits {
        SubsetBits::full(self.len())
    }

    pub fn subset_of_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<SubsetBits> {
        let mut s = self.empty_subset();
        for l in labels {
            let e = self
                .element(l.as_ref())
                .ok_or_else(|| Error::UnknownLabel(l.as_ref().to_owned()))?;
            s.insert(e);
        }
        Ok(s)
    }

    /// Labels of a subset, sorted lexicographically.
    pub fn sorted_labels(&self, s: &SubsetBits) -> Vec<String> {
        let mut v: Vec<String> = s.iter().map(|e| self.labels[e.0].clone()).collect();
        v.sort();
        v
    }

    /// Fails with [`Error::Usage`] when `s` was built for a poset of another size.
    pub fn check_bound(&self, s: &SubsetBits) -> Result<()> {
        if s.width() == self.len() {
            Ok(())
        } else {
            Err(Error::Usage(format!(
                "subset of width {} used with a poset of {} elements",
                s.width(),
                self.len()
            )))
        }
    }

    fn assert_bound(&self, s: &SubsetBits) {
        if let Err(e) = self.check_bound(s) {
            panic!("{e}");
        }
    }

    pub fn is_chain(&self, s: &SubsetBits) -> bool {
        self.assert_bound(s);
        s.iter().all(|x| s.is_subset(&self.comparable_set(x)))
    }

    /// `s ⊑ c`: `s ⊆ c` and every element of `c` below an element of `s` is in `s`.
    pub fn is_segment(&self, s: &SubsetBits, c: &SubsetBits) -> bool {
        self.assert_bound(s);
        self.assert_bound(c);
        if !s.is_subset(c) {
            return false;
        }
        s.iter().all(|y| {
            let mut below = self.down_set(y);
            below.intersect_with(c);
            below.is_subset(s)
        })
    }

    /// `s ⊏ c`: a segment different from `c`.
    pub fn is_prop_segment(&self, s: &SubsetBits, c: &SubsetBits) -> bool {
        s != c && self.is_segment(s, c)
    }

    /// `{ s : c < s for all c ∈ C }`; every element when `C = ∅`.
    pub fn strict_upper_bounds(&self, c: &SubsetBits) -> SubsetBits {
        let mut ub = self.upper_bounds(c);
        ub.difference_with(c);
        ub
    }

    /// `{ u : c ≤ u for all c ∈ C }`; every element when `C = ∅`.
    pub fn upper_bounds(&self, c: &SubsetBits) -> SubsetBits {
        self.assert_bound(c);
        let mut ub = self.full_subset();
        for x in c.iter() {
            ub.bits.intersect_with(&self.up[x.0]);
        }
        ub
    }

    pub fn maximal_elements(&self) -> SubsetBits {
        SubsetBits::from_indices(
            self.len(),
            (0..self.len()).filter(|&i| self.up[i].count_ones(..) == 1),
        )
    }

    pub fn minimal_elements(&self) -> SubsetBits {
        SubsetBits::from_indices(
            self.len(),
            (0..self.len()).filter(|&i| self.down[i].count_ones(..) == 1),
        )
    }

    /// The least element of `s` under `≤`, if `s` has one.
    pub fn least_of(&self, s: &SubsetBits) -> Option<Element> {
        s.iter().find(|&x| s.is_subset(&self.up_set(x)))
    }

    /// The greatest element of `s` under `≤`, if `s` has one.
    pub fn greatest_of(&self, s: &SubsetBits) -> Option<Element> {
        s.iter().find(|&x| s.is_subset(&self.down_set(x)))
    }

    /// Least upper bound of `c`, or `None` when the upper bounds have no minimum.
    pub fn sup_of(&self, c: &SubsetBits) -> Option<Element> {
        self.least_of(&self.upper_bounds(c))
    }

    /// The elements of a chain listed from bottom to top.
    ///
    /// Within a chain the number of members below `x` is its rank, so sorting
    /// by that count is the chain order.
    pub fn chain_order(&self, c: &SubsetBits) -> Vec<Element> {
        let mut v: Vec<(usize, Element)> = c
            .iter()
            .map(|x| (self.down_set(x).intersection(c).len(), x))
            .collect();
        v.sort_unstable();
        v.into_iter().map(|(_, x)| x).collect()
    }

    /// Proper prefixes of a chain, `∅` first. For a finite chain these are
    /// exactly its proper segments.
    pub fn proper_prefixes(&self, c: &SubsetBits) -> Vec<SubsetBits> {
        let order = self.chain_order(c);
        let mut out = Vec::with_capacity(order.len());
        let mut acc = self.empty_subset();
        for x in order {
            out.push(acc.clone());
            acc.insert(x);
        }
        out
    }

    /// Covering pairs `(a, b)` with `a < b` and nothing strictly between them.
    pub fn covering_pairs(&self) -> Vec<(Element, Element)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            let mut strict_up = self.up[i].clone();
            strict_up.set(i, false);
            let mut reachable_through = FixedBitSet::with_capacity(n);
            for k in strict_up.ones() {
                let mut above_k = self.up[k].clone();
                above_k.set(k, false);
                reachable_through.union_with(&above_k);
            }
            strict_up.difference_with(&reachable_through);
            out.extend(strict_up.ones().map(|j| (Element(i), Element(j))));
        }
        out
    }
}

fn label_index(labels: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

/// Warshall's algorithm over bit rows.
fn transitive_closure(rows: &mut [FixedBitSet]) {
    for k in 0..rows.len() {
        let row_k = rows[k].clone();
        for row in rows.iter_mut() {
            if row.contains(k) {
                row.union_with(&row_k);
            }
        }
    }
}

fn transitivity_violation(up: &[FixedBitSet]) -> Option<(usize, usize, usize)> {
    for (i, row) in up.iter().enumerate() {
        for j in row.ones() {
            if !up[j].is_subset(row) {
                let k = up[j].difference(row).next().expect("nonempty difference");
                return Some((i, j, k));
            }
        }
    }
    None
}

/// Returns a cycle `[v0, v1, ..., v0]` over distinct vertices, ignoring self loops.
fn find_cycle(n: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a != b {
            adj[a].push(b);
        }
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut mark = vec![Mark::New; n];
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        // (vertex, next edge position)
        let mut stack = vec![(root, 0usize)];
        mark[root] = Mark::Open;
        while let Some(&mut (v, ref mut pos)) = stack.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                match mark[w] {
                    Mark::New => {
                        mark[w] = Mark::Open;
                        stack.push((w, 0));
                    }
                    Mark::Open => {
                        let start = stack.iter().position(|&(u, _)| u == w).expect("open vertex on stack");
                        let mut cycle: Vec<usize> = stack[start..].iter().map(|&(u, _)| u).collect();
                        cycle.push(w);
                        return Some(cycle);
                    }
                    Mark::Done => {}
                }
            } else {
                mark[v] = Mark::Done;
                stack.pop();
            }
        }
    }
    None
}
