//! Graphviz drawing of an instance with a solution highlighted.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::model::instance::Instance;
use crate::model::solution::SteinerSolution;

pub fn solution_to_dot(inst: &Instance, sol: Option<&SteinerSolution>) -> String {
    let directed = inst.kind.is_directed();
    let used: BTreeSet<(usize, usize)> = sol
        .map(|s| s.arcs.iter().flat_map(|&(u, v)| if directed { vec![(u, v)] } else { vec![(u, v), (v, u)] }).collect())
        .unwrap_or_default();
    let (graph, sep) = if directed { ("digraph", "->") } else { ("graph", "--") };
    let mut s = format!("{graph} capsteiner {{\n");
    let _ = writeln!(s, "  {} [shape=doublecircle];", inst.root);
    for t in &inst.terminals {
        let _ = writeln!(s, "  {t} [shape=box];");
    }
    for e in &inst.edges {
        let style = if used.contains(&(e.u, e.v)) { ", penwidth=3, color=red" } else { "" };
        let load = sol.and_then(|s| s.load.get(&(e.u, e.v)).or_else(|| s.load.get(&(e.v, e.u))));
        let load = load.map(|l| format!(" load {l}")).unwrap_or_default();
        let _ = writeln!(s, "  {} {sep} {} [label=\"len {} cap {}{load}\"{style}];", e.u, e.v, e.length, e.capacity);
    }
    s.push_str("}\n");
    s
}
