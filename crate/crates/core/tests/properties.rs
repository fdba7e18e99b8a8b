mod common;

use std::collections::BTreeSet;

use chainbound::bounding::{falsify_bound_assignment, OrderSelector};
use chainbound::fixpoint::{bw_fixpoint_finite, reaching_definitions, FinitePosetCpo, DEFAULT_CAP};
use chainbound::gen_io::{
    parse_dataflow, parse_poset, parse_selector, random_cpo, random_dataflow, random_inflationary_map,
    random_override_selector, random_poset, random_table_expander, to_dot, write_dataflow, write_poset,
    write_selector, GenConfig,
};
use chainbound::good_chains::{
    comparability_check, enumerate_chains, good_chains, greatest_good_chain_bruteforce, is_good, is_good_appendix,
    Derived,
};
use chainbound::{Element, Expander, Poset, Selector, SubsetBits};
use common::*;
use proptest::prelude::*;

fn poset(n: usize, prob: f64, seed: u64) -> Poset {
    random_poset(&GenConfig::new(n, prob, seed).unwrap())
}

fn subset_from_mask(n: usize, mask: u32) -> SubsetBits {
    SubsetBits::from_indices(n, (0..n).filter(|&i| mask >> i & 1 == 1))
}

prop_compose! {
    fn arb_poset(max_n: usize)(n in 0..=max_n, prob in 0.0f64..=1.0, seed in any::<u64>()) -> Poset {
        poset(n, prob, seed)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn segment_relation_is_transitive(p in arb_poset(10), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let n = p.len();
        let random = (subset_from_mask(n, a), subset_from_mask(n, b), subset_from_mask(n, c));
        // Random triples are rarely segments of each other, so also draw a nested one.
        let cc = subset_from_mask(n, c);
        let ts = segments_by_def(&p, &cc);
        let t = ts[a as usize % ts.len()].clone();
        let ss = segments_by_def(&p, &t);
        let s = ss[b as usize % ss.len()].clone();
        for (s, t, c) in [random, (s, t, cc)] {
            if p.is_segment(&s, &t) && p.is_segment(&t, &c) {
                prop_assert!(p.is_segment(&s, &c));
            }
            if p.is_prop_segment(&s, &t) && p.is_segment(&t, &c) {
                prop_assert!(p.is_prop_segment(&s, &c));
            }
            if p.is_segment(&s, &t) && p.is_prop_segment(&t, &c) {
                prop_assert!(p.is_prop_segment(&s, &c));
            }
        }
    }

    #[test]
    fn segment_predicate_matches_definition(p in arb_poset(9), a in any::<u32>(), b in any::<u32>()) {
        let n = p.len();
        let (s, c) = (subset_from_mask(n, a), subset_from_mask(n, b));
        let s = s.intersection(&c);
        prop_assert_eq!(p.is_segment(&s, &c), segment_by_def(&p, &s, &c));
        prop_assert_eq!(p.is_chain(&c), chain_by_def(&p, &c));
        if p.is_segment(&s, &c) {
            prop_assert!(s.is_subset(&c));
        }
        prop_assert!(p.is_segment(&c, &c));
        prop_assert!(!p.is_prop_segment(&c, &c));
    }

    #[test]
    fn union_of_segments_is_segment(p in arb_poset(10), c in any::<u32>(), masks in prop::collection::vec(any::<u32>(), 0..6)) {
        let n = p.len();
        let c = subset_from_mask(n, c);
        let segs = segments_by_def(&p, &c);
        let family: Vec<&SubsetBits> = masks.iter().map(|m| &segs[*m as usize % segs.len()]).collect();
        let union = family.iter().fold(p.empty_subset(), |acc, s| acc.union(s));
        prop_assert!(p.is_segment(&union, &c));
    }

    #[test]
    fn bounds_laws(p in arb_poset(10), m in any::<u32>()) {
        let c = subset_from_mask(p.len(), m);
        let strict = p.strict_upper_bounds(&c);
        let ub = p.upper_bounds(&c);
        prop_assert_eq!(&strict, &strict_ubs_by_def(&p, &c));
        prop_assert!(strict.is_subset(&ub));
        if !c.is_empty() {
            prop_assert!(strict.is_disjoint(&c));
        }
        let sup = p.sup_of(&c);
        prop_assert_eq!(sup.map(|e| e.index()), sup_by_def(&p, &c));
        if let Some(s) = sup {
            prop_assert!(ub.contains(s));
            prop_assert!(ub.iter().all(|u| p.leq(s, u)));
        }
        prop_assert_eq!(p.maximal_elements(), maximal_by_def(&p));
    }

    #[test]
    fn json_roundtrips(p in arb_poset(12), seed in any::<u64>()) {
        prop_assert_eq!(&parse_poset(&write_poset(&p)).unwrap(), &p);
        let f = random_override_selector(&p, seed);
        prop_assert_eq!(parse_selector(&write_selector(&f, &p), &p).unwrap(), f);
        let inst = random_dataflow(seed, 8, 12);
        prop_assert_eq!(parse_dataflow(&write_dataflow(&inst)).unwrap(), inst);
    }

    #[test]
    fn strategies_are_deterministic(p in arb_poset(10), m in any::<u32>(), seed in any::<u64>()) {
        let c = subset_from_mask(p.len(), m);
        for f in [Selector::min_strict_ub(), Selector::max_strict_ub(), Selector::seeded_random(seed)] {
            let first = f.select(&p, &c);
            prop_assert_eq!(first, f.clone().select(&p, &c));
            if let Some(x) = first {
                prop_assert!(p.strict_upper_bounds(&c).contains(x));
            } else {
                prop_assert!(p.strict_upper_bounds(&c).is_empty());
            }
        }
    }
}

#[test]
fn generator_output_is_always_a_poset() {
    for seed in 0..1000u64 {
        let n = (seed % 15) as usize;
        let prob = [0.0, 0.1, 0.3, 0.6, 1.0][(seed % 5) as usize];
        let p = poset(n, prob, seed);
        assert!(axioms_hold(&p), "seed {seed}");
        assert_eq!(write_poset(&p), write_poset(&poset(n, prob, seed)));
    }
}

#[test]
fn chain_enumeration_matches_subset_scan() {
    for seed in 0..200u64 {
        let p = poset((seed % 9) as usize, [0.1, 0.3, 0.6][(seed % 3) as usize], seed);
        let listed: Vec<SubsetBits> = enumerate_chains(&p).unwrap().collect();
        let unique: BTreeSet<&SubsetBits> = listed.iter().collect();
        assert_eq!(unique.len(), listed.len(), "duplicates for seed {seed}");
        let expected: BTreeSet<SubsetBits> = chains_by_def(&p).into_iter().collect();
        assert_eq!(unique.into_iter().cloned().collect::<BTreeSet<_>>(), expected, "seed {seed}");
    }
}

#[test]
fn segments_of_a_finite_chain_are_its_prefixes() {
    for seed in 0..200u64 {
        let p = poset((seed % 9) as usize, 0.5, seed);
        for c in enumerate_chains(&p).unwrap() {
            let mut by_scan: Vec<SubsetBits> = segments_by_def(&p, &c);
            by_scan.retain(|s| *s != c);
            by_scan.sort();
            let mut prefixes = p.proper_prefixes(&c);
            prefixes.sort();
            assert_eq!(prefixes, by_scan);
        }
    }
}

#[test]
fn goodness_agrees_with_definition_for_both_expander_kinds() {
    for seed in 0..150u64 {
        let p = poset((seed % 8) as usize, [0.1, 0.3, 0.6][(seed % 3) as usize], seed);
        let expanders = [
            Expander::from_selector(random_override_selector(&p, seed)),
            Expander::from_selector(Selector::seeded_random(seed)),
            random_table_expander(&p, seed),
        ];
        for g in &expanders {
            for c in enumerate_chains(&p).unwrap() {
                assert_eq!(is_good(&p, g, &c), good_by_def(&p, g, &c), "seed {seed}, chain {c:?}");
            }
        }
    }
}

#[test]
fn comparability_and_maximality_for_table_expanders() {
    for seed in 0..500u64 {
        let p = poset((seed % 9) as usize, [0.1, 0.3, 0.6][(seed % 3) as usize], seed);
        let g = random_table_expander(&p, seed.wrapping_mul(7919));
        assert_eq!(comparability_check(&p, &g).unwrap(), None, "seed {seed}");
        let report = greatest_good_chain_bruteforce(&p, &g).unwrap();
        assert_eq!(report.chain, ggc_by_def(&p, &g));
        for c in good_chains(&p, &g).unwrap() {
            assert!(segment_by_def(&p, &c, &report.chain));
        }
        for w in report.trace.windows(2) {
            assert!(p.is_prop_segment(&w[0], &w[1]));
        }
    }
}

#[test]
fn appendix_condition_agrees_for_honest_selectors() {
    for seed in 0..300u64 {
        let p = poset((seed % 9) as usize, [0.1, 0.3, 0.6][(seed % 3) as usize], seed);
        for f in [Selector::min_strict_ub(), Selector::max_strict_ub(), Selector::seeded_random(seed)] {
            let g = Expander::from_selector(f);
            for c in enumerate_chains(&p).unwrap() {
                assert_eq!(is_good_appendix(&p, &g, &c), is_good(&p, &g, &c), "seed {seed}");
            }
        }
    }
}

#[test]
fn falsifier_chain_is_the_iterative_greatest_good_chain() {
    for seed in 0..400u64 {
        let p = poset((seed % 13) as usize, [0.1, 0.3, 0.6][(seed % 3) as usize], seed);
        let f = random_override_selector(&p, seed);
        let w = falsify_bound_assignment(&p, &f);
        let iter = chainbound::good_chains::greatest_good_chain_iter(&p, &f);
        assert_eq!(w.chain, iter.chain);
        assert_eq!(w.trace, iter.trace);
        if p.len() <= 8 {
            assert!(good_by_def(&p, &Derived(f.clone()), &w.chain));
        }
    }
}

#[test]
fn dot_edges_are_the_transitive_reduction() {
    for seed in 0..300u64 {
        let p = poset((seed % 11) as usize, [0.1, 0.3, 0.6, 0.9][(seed % 4) as usize], seed);
        let dot = to_dot(&p);
        let edges: Vec<(usize, usize)> = dot
            .lines()
            .filter_map(|l| l.trim().strip_suffix(';')?.split_once(" -> "))
            .map(|(a, b)| (a[1..].parse().unwrap(), b[1..].parse().unwrap()))
            .collect();
        assert_eq!(edges, reduction_by_def(&p), "seed {seed}");
    }
}

#[test]
fn dataflow_matches_round_robin_in_any_order() {
    for seed in 0..200u64 {
        let inst = random_dataflow(seed, 8, 12);
        let sol = reaching_definitions(&inst, DEFAULT_CAP).unwrap();
        let forward: Vec<usize> = (0..inst.nodes().len()).collect();
        let backward: Vec<usize> = forward.iter().rev().copied().collect();
        for order in [forward, backward] {
            let (ins, outs) = reaching_defs_round_robin(&inst, &order);
            assert_eq!(sol.ins.iter().map(to_bools).collect::<Vec<_>>(), ins);
            assert_eq!(sol.outs.iter().map(to_bools).collect::<Vec<_>>(), outs);
        }
    }
}

#[test]
fn three_node_loop() {
    let inst = parse_dataflow(
        r#"{"defs":["d1","d2"],"nodes":[
            {"name":"1","preds":[],"gen":["d1"],"kill":[]},
            {"name":"2","preds":["1","3"],"gen":["d2"],"kill":[]},
            {"name":"3","preds":["2"],"gen":[],"kill":[]}]}"#,
    )
    .unwrap();
    let sol = reaching_definitions(&inst, 100).unwrap();
    let (ins, outs) = reaching_defs_round_robin(&inst, &[0, 1, 2]);
    assert_eq!(ins[1], vec![true, true]);
    assert_eq!(sol.ins.iter().map(to_bools).collect::<Vec<_>>(), ins);
    assert_eq!(sol.outs.iter().map(to_bools).collect::<Vec<_>>(), outs);
}

/// With `∅ ↦ {h(sup ∅)}` the first step skips `⊥`: the greatest good chain
/// is the iterate set minus `⊥` whenever `h(⊥) ≠ ⊥`.
#[test]
fn literal_sup_expander_omits_bottom() {
    struct Literal<'a>(&'a [Element]);
    impl OrderSelector for Literal<'_> {
        fn select(&self, p: &Poset, c: &SubsetBits) -> Option<Element> {
            p.sup_of(c).map(|s| self.0[s.index()])
        }
    }
    for seed in 0..200u64 {
        let p = random_cpo(&GenConfig::new((seed % 8 + 1) as usize, 0.4, seed).unwrap());
        let h = random_inflationary_map(&p, seed);
        let cpo = FinitePosetCpo::new(&p).unwrap();
        let report = bw_fixpoint_finite(&cpo, &h, DEFAULT_CAP).unwrap();
        let mut iterates = SubsetBits::from_indices(p.len(), report.trace.iter().map(|e| e.index()));
        let literal = greatest_good_chain_bruteforce(&p, &Derived(Literal(&h))).unwrap().chain;
        let bottom = report.trace[0];
        if h[bottom.index()] != bottom {
            iterates.remove(bottom);
        }
        assert_eq!(literal, iterates, "seed {seed}");
    }
}
