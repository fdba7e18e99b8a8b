use std::fmt::Write;

use crate::poset::Poset;

/// Hasse diagram of `p` as a DOT digraph: nodes in index order, then the
/// covering edges from lower to higher element.
pub fn to_dot(p: &Poset) -> String {
    let mut out = String::from("digraph poset {\n");
    for e in p.elements() {
        writeln!(out, "  n{} [label=\"{}\"];", e.index(), escape(p.label(e))).unwrap();
    }
    for (a, b) in p.covering_pairs() {
        writeln!(out, "  n{} -> n{};", a.index(), b.index()).unwrap();
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
