//! Uncapacitated rooted Steiner trees: exact Dreyfus–Wagner and cheap approximations.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::model::graph::ArcGraph;
use crate::model::instance::{ensure_valid, Instance};
use crate::model::solution::SteinerSolution;
use crate::model::tree::{arborescence_within, prune_leaves};

/// Largest terminal count handed to the exact solver by default.
pub const EXACT_BOUND: usize = 10;

/// A rooted tree on an [`ArcGraph`] with its integer length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphTree {
    pub arcs: Vec<(usize, usize)>,
    pub length: i64,
}

#[derive(Clone, Debug)]
pub struct ApproxReport {
    pub solution: SteinerSolution,
    /// Proven ratio of the method used; `None` when there is none.
    pub guarantee: Option<Ratio<i64>>,
    /// Filled in by callers who know the optimum.
    pub achieved_ratio: Option<Ratio<i64>>,
}

#[derive(Clone, Copy)]
enum Choice {
    Leaf,
    Split(usize),
    Via(usize),
}

/// Cleans an arc union into a tree: BFS arborescence, then leaf pruning.
pub(crate) fn tidy(g: &ArcGraph, root: usize, arcs: &[(usize, usize)], terminals: &[usize]) -> GraphTree {
    let mut keep = vec![false; g.n + 1];
    for &t in terminals {
        keep[t] = true;
    }
    keep[root] = true;
    let mut sorted = arcs.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let tree = prune_leaves(&arborescence_within(root, &sorted), |v| keep[v]);
    let length = tree
        .iter()
        .map(|&(u, v)| g.arcs[g.find_arc(u, v).expect("tree arc exists")].len)
        .sum();
    GraphTree { arcs: tree, length }
}

/// Exact minimum-length tree rooted at `root` spanning `terminals`, following
/// arc orientations. `None` if some terminal is unreachable.
pub fn dreyfus_wagner_graph(g: &ArcGraph, root: usize, terminals: &[usize]) -> Option<GraphTree> {
    let k = terminals.len();
    if k == 0 {
        return Some(GraphTree { arcs: Vec::new(), length: 0 });
    }
    let full = (1usize << k) - 1;
    let n = g.n;
    let mut dp: Vec<Vec<Option<i64>>> = vec![vec![None; n + 1]; full + 1];
    let mut choice: Vec<Vec<Option<Choice>>> = vec![vec![None; n + 1]; full + 1];
    for mask in 1..=full {
        if mask.count_ones() == 1 {
            let t = terminals[mask.trailing_zeros() as usize];
            dp[mask][t] = Some(0);
            choice[mask][t] = Some(Choice::Leaf);
        } else {
            // submasks containing the lowest bit, so each split is tried once
            let low = mask & mask.wrapping_neg();
            let rest = mask ^ low;
            let mut sub = rest;
            loop {
                let a = sub | low;
                if a != mask {
                    let b = mask ^ a;
                    for v in 1..=n {
                        if let (Some(x), Some(y)) = (dp[a][v], dp[b][v]) {
                            if dp[mask][v].is_none_or(|cur| x + y < cur) {
                                dp[mask][v] = Some(x + y);
                                choice[mask][v] = Some(Choice::Split(a));
                            }
                        }
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        // relax along reversed arcs: dp[v] <- len(v,u) + dp[u]
        let mut heap: BinaryHeap<Reverse<(i64, usize)>> =
            (1..=n).filter_map(|v| dp[mask][v].map(|d| Reverse((d, v)))).collect();
        while let Some(Reverse((d, u))) = heap.pop() {
            if dp[mask][u] != Some(d) {
                continue;
            }
            for &a in &g.inc[u] {
                let v = g.arcs[a].from;
                let nd = d + g.arcs[a].len;
                if dp[mask][v].is_none_or(|cur| nd < cur) {
                    dp[mask][v] = Some(nd);
                    choice[mask][v] = Some(Choice::Via(a));
                    heap.push(Reverse((nd, v)));
                }
            }
        }
    }
    dp[full][root]?;
    let mut arcs = Vec::new();
    let mut stack = vec![(full, root)];
    while let Some((mask, v)) = stack.pop() {
        match choice[mask][v].expect("reachable state has a choice") {
            Choice::Leaf => {}
            Choice::Split(a) => {
                stack.push((a, v));
                stack.push((mask ^ a, v));
            }
            Choice::Via(a) => {
                arcs.push((v, g.arcs[a].to));
                stack.push((mask, g.arcs[a].to));
            }
        }
    }
    let tree = tidy(g, root, &arcs, terminals);
    debug_assert_eq!(Some(tree.length), dp[full][root]);
    Some(tree)
}

/// Shortest-path heuristic: repeatedly attach the nearest uncovered terminal.
pub fn greedy_graph(g: &ArcGraph, root: usize, terminals: &[usize]) -> Option<GraphTree> {
    let mut in_tree = vec![false; g.n + 1];
    in_tree[root] = true;
    let mut arcs = Vec::new();
    let mut left: Vec<usize> = terminals.to_vec();
    while !left.is_empty() {
        let sources: Vec<usize> = (1..=g.n).filter(|&v| in_tree[v]).collect();
        let sp = g.shortest_paths(&sources, None, |_, _| true);
        let (idx, _) = left
            .iter()
            .enumerate()
            .filter_map(|(i, &t)| sp.dist[t].map(|d| (i, d)))
            .min_by_key(|&(i, d)| (d, left[i]))?;
        let t = left.swap_remove(idx);
        for a in sp.path_arcs(g, t) {
            let arc = &g.arcs[a];
            in_tree[arc.to] = true;
            arcs.push((arc.from, arc.to));
        }
        left.retain(|&x| !in_tree[x]);
    }
    Some(tidy(g, root, &arcs, terminals))
}

/// Metric-closure MST heuristic for symmetric graphs; at most twice optimal.
pub fn mst_graph(g: &ArcGraph, root: usize, terminals: &[usize]) -> Option<GraphTree> {
    let mut nodes = vec![root];
    nodes.extend_from_slice(terminals);
    let sps: Vec<_> = nodes.iter().map(|&s| g.shortest_paths(&[s], None, |_, _| true)).collect();
    let m = nodes.len();
    let mut in_mst = vec![false; m];
    let mut best: Vec<Option<(i64, usize)>> = vec![None; m];
    in_mst[0] = true;
    for j in 1..m {
        best[j] = sps[0].dist[nodes[j]].map(|d| (d, 0));
    }
    let mut arcs = Vec::new();
    for _ in 1..m {
        let (j, (_, i)) = (0..m)
            .filter(|&j| !in_mst[j])
            .filter_map(|j| best[j].map(|b| (j, b)))
            .min_by_key(|&(j, (d, _))| (d, j))?;
        in_mst[j] = true;
        for a in sps[i].path_arcs(g, nodes[j]) {
            let arc = &g.arcs[a];
            arcs.push((arc.from, arc.to));
            arcs.push((arc.to, arc.from));
        }
        for x in 0..m {
            if !in_mst[x] {
                if let Some(d) = sps[j].dist[nodes[x]] {
                    if best[x].is_none_or(|(bd, _)| d < bd) {
                        best[x] = Some((d, j));
                    }
                }
            }
        }
    }
    arcs.retain(|&(u, v)| g.find_arc(u, v).is_some());
    Some(tidy(g, root, &arcs, terminals))
}

/// Graph-level approximation: exact up to `exact_bound` terminals, MST
/// heuristic on symmetric graphs, greedy otherwise. Returns the guarantee.
pub fn approx_graph(
    g: &ArcGraph,
    symmetric: bool,
    root: usize,
    terminals: &[usize],
    exact_bound: usize,
) -> Option<(GraphTree, Option<Ratio<i64>>)> {
    if terminals.len() <= exact_bound {
        dreyfus_wagner_graph(g, root, terminals).map(|t| (t, Some(Ratio::from_integer(1))))
    } else if symmetric {
        mst_graph(g, root, terminals).map(|t| (t, Some(Ratio::from_integer(2))))
    } else {
        greedy_graph(g, root, terminals).map(|t| (t, None))
    }
}

fn unreachable(inst: &Instance) -> Error {
    let reach = inst.arc_graph().reachable_from(&[inst.root]);
    let t = inst.terminals.iter().copied().find(|&t| !reach[t]).unwrap_or(inst.terminals[0]);
    Error::UnreachableTerminal(t)
}

/// Exact uncapacitated optimum of an instance.
pub fn dreyfus_wagner(inst: &Instance) -> Result<SteinerSolution> {
    ensure_valid(inst)?;
    if inst.k() > EXACT_BOUND {
        return Err(Error::LimitExceeded(format!("{} terminals, exact bound is {EXACT_BOUND}", inst.k())));
    }
    let tree = dreyfus_wagner_graph(&inst.arc_graph(), inst.root, &inst.terminals).ok_or_else(|| unreachable(inst))?;
    SteinerSolution::from_arcs(inst, tree.arcs)
}

/// Approximate uncapacitated tree with its guarantee.
pub fn steiner_approx(inst: &Instance) -> Result<ApproxReport> {
    steiner_approx_with(inst, EXACT_BOUND)
}

pub fn steiner_approx_with(inst: &Instance, exact_bound: usize) -> Result<ApproxReport> {
    ensure_valid(inst)?;
    let symmetric = !inst.kind.is_directed();
    let (tree, guarantee) = approx_graph(&inst.arc_graph(), symmetric, inst.root, &inst.terminals, exact_bound)
        .ok_or_else(|| unreachable(inst))?;
    Ok(ApproxReport { solution: SteinerSolution::from_arcs(inst, tree.arcs)?, guarantee, achieved_ratio: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::instance::{Edge, GraphKind};

    fn r(x: i64) -> Ratio<i64> {
        Ratio::from_integer(x)
    }

    #[test]
    fn single_terminal_is_a_shortest_path() {
        let inst = Instance::new(
            GraphKind::Digraph,
            4,
            vec![Edge::new(1, 2, 1, 1), Edge::new(2, 4, 1, 1), Edge::new(1, 3, 1, 1), Edge::new(3, 4, 5, 1), Edge::new(1, 4, 9, 1)],
            1,
            vec![4, 3],
        );
        let sol = dreyfus_wagner(&inst).unwrap();
        assert_eq!(sol.total_length, r(3));
        let g = inst.arc_graph();
        assert_eq!(dreyfus_wagner_graph(&g, 1, &[4]).unwrap().length, 2);
    }

    #[test]
    fn path_graph_covering_subpath() {
        let edges = (1..5).map(|i| Edge::new(i, i + 1, 1, 1)).collect();
        let inst = Instance::new(GraphKind::Undirected, 5, edges, 3, vec![1, 5]);
        assert_eq!(dreyfus_wagner(&inst).unwrap().total_length, r(4));
    }

    #[test]
    fn mst_heuristic_within_two() {
        // 4-cycle of terminals around a hub: spokes 1, rim 2 (minus 2e)
        let mut edges = vec![];
        for t in 2..=5 {
            edges.push(Edge::new(6, t, 1, 1));
        }
        for (a, b) in [(2, 3), (3, 4), (4, 5)] {
            edges.push(Edge::new(a, b, Ratio::new(19, 10), 1));
        }
        edges.push(Edge::new(1, 2, 0, 1));
        let inst = Instance::new(GraphKind::Undirected, 6, edges, 1, vec![2, 3, 4, 5]);
        let opt = dreyfus_wagner(&inst).unwrap().total_length;
        assert_eq!(opt, r(4));
        let apx = steiner_approx_with(&inst, 0).unwrap();
        assert_eq!(apx.guarantee, Some(r(2)));
        assert!(apx.solution.total_length <= opt * 2);
        assert!(apx.solution.total_length > opt);
        let exact = steiner_approx(&inst).unwrap();
        assert_eq!(exact.guarantee, Some(r(1)));
        assert_eq!(exact.solution.total_length, opt);
    }

    #[test]
    fn directed_greedy_has_no_guarantee() {
        let inst = Instance::new(GraphKind::Dag, 3, vec![Edge::new(1, 2, 1, 1), Edge::new(2, 3, 1, 1)], 1, vec![2, 3]);
        let apx = steiner_approx_with(&inst, 0).unwrap();
        assert_eq!(apx.guarantee, None);
        assert_eq!(apx.solution.total_length, r(2));
    }
}
