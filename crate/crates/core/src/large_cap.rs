//! Capacities close to the number of terminals.
//!
//! With uniform capacity `K - κ`, or capacities at least `K - κ` on a DAG,
//! a small "reduced tree" decides feasibility: any tree containing one is
//! feasible once completed. With `c_min = K - 1` only the path above the
//! first branching vertex may carry all `K` terminals.

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::disjoint_paths::SearchOptions;
use crate::error::{Error, Result};
use crate::fixed_k::{best_expansion, solve_dag_fixed_k_with, FixedKOptions, LabelRule, PathSolver};
use crate::flow::min_length_disjoint_bundle;
use crate::model::graph::ArcGraph;
use crate::model::instance::{ensure_valid, normalize_lengths, normalize_terminals_mapped, GraphKind, Instance, TerminalNormalization};
use crate::model::skeleton::extract_skeleton;
use crate::model::solution::{check_arcs, Mode, SteinerSolution};
use crate::model::tree::{prune_leaves, RootedTree};
use crate::skeletons::{enumerate_bounded_skeletons, enumerate_potential_skeletons, PotentialSkeleton};
use crate::steiner::{approx_graph, dreyfus_wagner, dreyfus_wagner_graph, steiner_approx, ApproxReport, EXACT_BOUND};

// (length, branch count), arcs, witness
type BranchPick = ((i64, usize), Vec<(usize, usize)>, BranchWitness);

/// Largest `K` accepted by [`solve_cmin_k_minus_1_fixed_k`].
pub const CMIN_MAX_K: usize = 8;

/// Parameters of the large-capacity regime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedTreeParams {
    pub kappa: usize,
    pub c_min: u32,
    pub c_max: u32,
    /// Indices of edges with capacity at least `K`.
    pub e_k: Vec<usize>,
    /// `(κ+1)^(κ+1)`, saturating.
    pub lambda: usize,
}

impl ReducedTreeParams {
    pub fn new(inst: &Instance, kappa: usize) -> Self {
        let k = inst.k() as u32;
        let base = kappa.saturating_add(1);
        let lambda = (0..base).fold(1usize, |acc, _| acc.saturating_mul(base));
        ReducedTreeParams {
            kappa,
            c_min: inst.c_min(),
            c_max: inst.c_max(),
            e_k: (0..inst.edges.len()).filter(|&i| inst.edges[i].capacity >= k).collect(),
            lambda,
        }
    }
}

/// Witness of the branching structure behind a `c_min = K - 1` solution:
/// the first branching vertex `w`, two terminals reached through different
/// children of `w`, and the branching vertices on the two paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchWitness {
    pub w: usize,
    pub terminals: (usize, usize),
    pub forced: Vec<usize>,
}

/// Real-valued `2·log2(K) - 2`.
pub fn forced_vertex_bound(k: usize) -> f64 {
    2.0 * (k.max(1) as f64).log2() - 2.0
}

fn forced_vertex_limit(k: usize) -> usize {
    forced_vertex_bound(k).ceil().max(0.0) as usize
}

fn tree_counts(inst: &Instance, arcs: &[(usize, usize)]) -> Option<(RootedTree, std::collections::HashMap<usize, usize>)> {
    let tree = RootedTree::build(inst.root, arcs)?;
    let below = tree.count_below(|v| inst.is_terminal(v));
    Some((tree, below))
}

/// Reduced tree for uniform capacity `K - κ`: rooted at `r`, spans at
/// least `κ` terminals, and for every root arc at least `κ` of its terminals
/// lie outside the arc's subtree.
pub fn is_reduced_tree_uniform(inst: &Instance, arcs: &[(usize, usize)], kappa: usize) -> bool {
    let Some((tree, below)) = tree_counts(inst, arcs) else { return false };
    let total = below[&inst.root];
    total >= kappa && tree.children_of(inst.root).iter().all(|v| total - below[v] >= kappa)
}

/// Reduced tree for a DAG with `c_min >= K - κ`: spans at least `κ`
/// terminals and every arc `a` has at least `K - c(a)` of them outside its
/// subtree.
pub fn is_reduced_tree_dag(inst: &Instance, arcs: &[(usize, usize)], kappa: usize) -> bool {
    let Some((_, below)) = tree_counts(inst, arcs) else { return false };
    let g = inst.arc_graph();
    let k = inst.k() as i64;
    let total = below[&inst.root];
    total >= kappa
        && arcs.iter().all(|&(u, v)| {
            g.find_arc(u, v)
                .is_some_and(|a| (total - below[&v]) as i64 >= k - g.arcs[a].cap as i64)
        })
}

/// Hangs every missing terminal on the tree: the suffix of a fewest-hop
/// `r -> t` path after its last tree vertex. `None` if a terminal is unreachable.
fn graft(g: &ArcGraph, root: usize, arcs: &[(usize, usize)], terminals: &[usize]) -> Option<Vec<(usize, usize)>> {
    let bfs = g.hop_paths(&[root], None, |_, _| true);
    let mut in_tree = vec![false; g.n + 1];
    in_tree[root] = true;
    for &(u, v) in arcs {
        in_tree[u] = true;
        in_tree[v] = true;
    }
    let mut out = arcs.to_vec();
    for &t in terminals {
        if in_tree[t] {
            continue;
        }
        bfs.dist[t]?;
        let path = bfs.path_vertices(g, t);
        let start = path.iter().rposition(|&v| in_tree[v]).expect("path starts at the root");
        for w in path[start..].windows(2) {
            out.push((w[0], w[1]));
            in_tree[w[1]] = true;
        }
    }
    Some(out)
}

/// Completes a reduced tree into a tree spanning every terminal.
pub fn complete_reduced_tree(inst: &Instance, arcs: &[(usize, usize)]) -> Result<SteinerSolution> {
    let g = inst.arc_graph();
    let full = graft(&g, inst.root, arcs, &inst.terminals).ok_or_else(|| {
        let reach = g.reachable_from(&[inst.root]);
        Error::UnreachableTerminal(inst.terminals.iter().copied().find(|&t| !reach[t]).unwrap_or(inst.root))
    })?;
    SteinerSolution::from_arcs(inst, full)
}

/// Strips terminals from a tree while `is_reduced` keeps holding, until no
/// single terminal can go. Terminals are expected to be leaves.
pub fn minimal_reduced_subtree(
    inst: &Instance,
    arcs: &[(usize, usize)],
    is_reduced: impl Fn(&[(usize, usize)]) -> bool,
) -> Vec<(usize, usize)> {
    let keep = |v: usize| v == inst.root || inst.is_terminal(v);
    let mut cur = prune_leaves(arcs, keep);
    'outer: loop {
        for &(_, t) in &cur {
            if !inst.is_terminal(t) || cur.iter().any(|&(u, _)| u == t) {
                continue;
            }
            let without: Vec<(usize, usize)> = cur.iter().copied().filter(|&(_, v)| v != t).collect();
            let cand = prune_leaves(&without, keep);
            if is_reduced(&cand) {
                cur = cand;
                continue 'outer;
            }
        }
        return cur;
    }
}

/// Keeps `base` and adds the arcs of `extra` entering vertices `base` does
/// not reach, then prunes leaves that are neither terminals nor the root.
fn merge_trees(root: usize, base: &[(usize, usize)], extra: &[(usize, usize)], is_terminal: impl Fn(usize) -> bool) -> Vec<(usize, usize)> {
    let covered: HashSet<usize> = base.iter().flat_map(|&(u, v)| [u, v]).chain([root]).collect();
    let mut arcs: Vec<(usize, usize)> = base.to_vec();
    arcs.extend(extra.iter().copied().filter(|(_, v)| !covered.contains(v)));
    arcs.sort_unstable();
    arcs.dedup();
    prune_leaves(&arcs, |v| v == root || is_terminal(v))
}

fn arcs_length(g: &ArcGraph, arcs: &[(usize, usize)]) -> i64 {
    arcs.iter().map(|&(u, v)| g.arcs[g.find_arc(u, v).expect("tree arc exists")].len).sum()
}

/// Terminal normalization whose pendant edges get capacity `c_max`: a
/// pendant always carries exactly one terminal, so its capacity never binds,
/// and this keeps the capacity profile of the original graph.
fn normalize_keeping_caps(inst: &Instance) -> TerminalNormalization {
    let mut norm = normalize_terminals_mapped(inst);
    let c = inst.c_max();
    for e in &mut norm.instance.edges {
        if norm.to_original[e.v].is_none() {
            e.capacity = c;
        }
    }
    norm
}

fn unreachable_err(ni: &Instance) -> Error {
    let reach = ni.arc_graph().reachable_from(&[ni.root]);
    Error::UnreachableTerminal(ni.terminals.iter().copied().find(|&t| !reach[t]).unwrap_or(ni.root))
}

/// Shared driver of the two reduced-tree algorithms, on a normalized instance.
fn reduced_tree_driver(
    inst: &Instance,
    sizes: std::ops::RangeInclusive<usize>,
    kappa: usize,
    skeletons: impl Fn(&Instance, &[usize]) -> Vec<PotentialSkeleton>,
    rule: LabelRule,
    mode: Mode,
) -> Result<Option<ApproxReport>> {
    let norm = normalize_keeping_caps(inst);
    let ni = &norm.instance;
    let g = ni.arc_graph();
    if !g.reachable_from(&[ni.root]).iter().enumerate().all(|(v, &ok)| ok || !ni.is_terminal(v)) {
        return Ok(None);
    }
    let s1 = if kappa == 0 {
        // the empty tree is reduced
        Some((0, Vec::new()))
    } else {
        let subsets: Vec<Vec<usize>> = sizes
            .filter(|&s| s >= 1)
            .flat_map(|s| ni.terminals.iter().copied().combinations(s))
            .collect();
        let family = subsets.iter().flat_map(|sub| skeletons(ni, sub));
        best_expansion(ni, family, rule, PathSolver::for_kind(ni.kind), mode, &SearchOptions::default())?
    };
    let Some((_, s1)) = s1 else { return Ok(None) };
    let (arcs, guarantee) = match mode {
        Mode::Decision => {
            let arcs = graft(&g, ni.root, &s1, &ni.terminals).ok_or_else(|| unreachable_err(ni))?;
            (arcs, None)
        }
        Mode::Optimize => {
            let spanned: HashSet<usize> = s1.iter().map(|&(_, v)| v).collect();
            let rest: Vec<usize> = ni.terminals.iter().copied().filter(|t| !spanned.contains(t)).collect();
            let (s2, rho) = approx_graph(&g, !ni.kind.is_directed(), ni.root, &rest, EXACT_BOUND)
                .ok_or_else(|| unreachable_err(ni))?;
            let merged = merge_trees(ni.root, &s1, &s2.arcs, |v| ni.is_terminal(v));
            (merged, rho.map(|r| r + 1))
        }
    };
    debug_assert!(check_arcs(ni, &arcs).ok, "reduced tree completion must be feasible");
    let solution = SteinerSolution::from_arcs(inst, norm.lift_arcs(&arcs))?;
    Ok(Some(ApproxReport { solution, guarantee, achieved_ratio: None }))
}

/// Uniform capacity `c = K - κ` on a DAG or undirected graph.
///
/// Decision mode returns a feasible tree (no guarantee) or `None`. Optimize
/// mode returns the best reduced tree completed by an approximate Steiner
/// tree, with guarantee `1 + ρ`.
pub fn solve_uniform_k_minus_kappa(inst: &Instance, kappa: usize, mode: Mode) -> Result<Option<ApproxReport>> {
    ensure_valid(inst)?;
    let c = inst.uniform_capacity().ok_or(Error::NonUniformCapacities)? as usize;
    if inst.kind == GraphKind::Digraph {
        return Err(Error::Precondition("uniform large capacities need a DAG or an undirected graph".into()));
    }
    let k = inst.k();
    if !(c + kappa == k || (kappa == 0 && c >= k)) {
        return Err(Error::ParameterOutOfRange(format!("capacity {c} is not K - κ = {k} - {kappa}")));
    }
    let keep = |sk: &crate::model::skeleton::Skeleton| {
        let total = sk.terminal_count();
        sk.children(sk.root).iter().all(|v| sk.terminal_count_below[v] <= kappa && total - sk.terminal_count_below[v] >= kappa)
    };
    let skeletons = |ni: &Instance, sub: &[usize]| enumerate_potential_skeletons(ni, sub).filter(|ps| keep(&ps.skeleton)).collect();
    reduced_tree_driver(inst, kappa..=(2 * kappa).min(k), kappa, skeletons, LabelRule::Free, mode)
}

/// DAG with `c_min >= K - κ`.
///
/// Candidate reduced trees span between `κ` and `(κ+1)^(κ+1)` terminals and
/// have out-degree and height at most `κ + 1`; every path arc under a
/// skeleton arc `(u, v)` needs capacity at least `K - x`, `x` the terminals
/// outside the subtree of `v`.
pub fn solve_dag_large_cap(inst: &Instance, kappa: usize, mode: Mode) -> Result<Option<ApproxReport>> {
    if inst.kind != GraphKind::Dag {
        return Err(Error::NotADag);
    }
    ensure_valid(inst)?;
    let k = inst.k();
    if (inst.c_min() as usize) + kappa < k {
        return Err(Error::ParameterOutOfRange(format!("c_min = {} is below K - κ = {k} - {kappa}", inst.c_min())));
    }
    if k < kappa {
        let opts = FixedKOptions { max_k: k, mode, ..FixedKOptions::default() };
        return Ok(solve_dag_fixed_k_with(inst, &opts)?.map(|solution| ApproxReport {
            solution,
            guarantee: (mode == Mode::Optimize).then(|| Ratio::from_integer(1)),
            achieved_ratio: None,
        }));
    }
    let params = ReducedTreeParams::new(inst, kappa);
    let skeletons = |ni: &Instance, sub: &[usize]| enumerate_bounded_skeletons(ni, sub, kappa + 1, kappa + 1);
    reduced_tree_driver(inst, kappa..=params.lambda.min(k), kappa, skeletons, LabelRule::Slack, mode)
}

fn reverse_graph(g: &ArcGraph) -> ArcGraph {
    let mut r = ArcGraph::new(g.n);
    for a in &g.arcs {
        r.add_arc(a.to, a.from, a.len, a.cap, a.edge);
    }
    r
}

/// First vertex from the root with at least two children, if any.
fn first_branch(tree: &RootedTree) -> Option<usize> {
    let mut v = tree.root;
    loop {
        match tree.children_of(v) {
            [] => return None,
            [c] => v = *c,
            _ => return Some(v),
        }
    }
}

/// Checks on a solution that the path above its first branching vertex `w`
/// is a shortest `r -> w` path using only arcs of capacity at least `K`,
/// and that no such shortest path touches the subtree of `w` except at `w`.
pub fn check_shortpath_property(inst: &Instance, sol: &SteinerSolution) -> bool {
    let Some(tree) = RootedTree::build(inst.root, &sol.arcs) else { return false };
    let Some(w) = first_branch(&tree) else { return true };
    if w == inst.root {
        return true;
    }
    let k = inst.k() as u32;
    let g = inst.arc_graph();
    let from_r = g.shortest_paths(&[inst.root], None, |_, a| a.cap >= k);
    let to_w = reverse_graph(&g).shortest_paths(&[w], None, |_, a| a.cap >= k);
    let Some(d) = from_r.dist[w] else { return false };
    let prefix = tree.path_from_root(w);
    let mut len = 0;
    for p in prefix.windows(2) {
        match g.find_arc(p[0], p[1]) {
            Some(a) if g.arcs[a].cap >= k => len += g.arcs[a].len,
            _ => return false,
        }
    }
    if len != d {
        return false;
    }
    let mut stack = tree.children_of(w).to_vec();
    while let Some(x) = stack.pop() {
        if let (Some(a), Some(b)) = (from_r.dist[x], to_w.dist[x]) {
            if a + b == d {
                return false;
            }
        }
        stack.extend_from_slice(tree.children_of(x));
    }
    true
}

/// The branching witness of a solution: `w` its first branching vertex,
/// `t_i`, `t_j` terminals closest (in skeleton vertices) to two children of
/// `w`, and the vertices of degree at least 3 on the two tree paths.
/// Expects every leaf to be a terminal.
pub fn branch_witness(inst: &Instance, sol: &SteinerSolution) -> Option<BranchWitness> {
    let tree = RootedTree::build(inst.root, &sol.arcs)?;
    let w = first_branch(&tree)?;
    let sk = extract_skeleton(sol, inst).ok()?;
    let children = sk.children(w);
    let nearest = |v: usize| -> usize {
        // breadth-first in the skeleton below v
        let mut layer = vec![v];
        loop {
            if let Some(&t) = layer.iter().filter(|&&x| inst.is_terminal(x)).min() {
                return t;
            }
            layer = layer.iter().flat_map(|&x| sk.children(x)).collect();
        }
    };
    let (ti, tj) = (nearest(children[0]), nearest(children[1]));
    let degree = |v: usize| tree.children_of(v).len() + usize::from(v != inst.root);
    let mut forced: Vec<usize> = [ti, tj]
        .iter()
        .flat_map(|&t| {
            let p = tree.path_from_root(t);
            let start = p.iter().position(|&x| x == w).expect("w lies above every terminal");
            p[start + 1..].to_vec()
        })
        .filter(|&v| degree(v) >= 3)
        .collect();
    forced.sort_unstable();
    Some(BranchWitness { w, terminals: (ti, tj), forced })
}

/// Original vertex behind a normalized one (pendants map to their terminal).
fn original_vertex(norm: &TerminalNormalization, v: usize) -> usize {
    norm.to_original[v].unwrap_or_else(|| {
        let e = norm.instance.edges.iter().find(|e| e.v == v).expect("pendant has its edge");
        norm.to_original[e.u].expect("pendant hangs on an original vertex")
    })
}

struct Branching {
    /// Candidate `w` with its blocked mask (the `r -> w` path minus `w`) and path arcs.
    cands: Vec<(usize, Vec<bool>, Vec<(usize, usize)>)>,
}

fn branching_candidates(ni: &Instance, g: &ArcGraph) -> Branching {
    let k = ni.k() as u32;
    let deg = ni.degrees();
    let sp = g.shortest_paths(&[ni.root], None, |_, a| a.cap >= k);
    let mut cands = Vec::new();
    for w in 1..=ni.n {
        if !(w == ni.root || (deg[w] >= 3 && !ni.is_terminal(w))) || sp.dist[w].is_none() {
            continue;
        }
        let path = sp.path_vertices(g, w);
        let mut blocked = vec![false; g.n + 1];
        for &v in &path[..path.len() - 1] {
            blocked[v] = true;
        }
        let arcs = path.windows(2).map(|p| (p[0], p[1])).collect();
        cands.push((w, blocked, arcs));
    }
    Branching { cands }
}

fn without_blocked(g: &ArcGraph, blocked: &[bool], zero: &BTreeSet<(usize, usize)>, symmetric: bool) -> ArcGraph {
    let mut h = ArcGraph::new(g.n);
    for a in &g.arcs {
        if blocked[a.from] || blocked[a.to] {
            continue;
        }
        let on = zero.contains(&(a.from, a.to)) || (symmetric && zero.contains(&(a.to, a.from)));
        h.add_arc(a.from, a.to, if on { 0 } else { a.len }, a.cap, a.edge);
    }
    h
}

/// Best assembly over all `(t_i, t_j, W)` for one branching vertex `w`.
fn best_for_branch(
    ni: &Instance,
    g: &ArcGraph,
    norm: &TerminalNormalization,
    w: usize,
    blocked: &[bool],
    mu: &[(usize, usize)],
    limit: usize,
) -> Option<BranchPick> {
    let symmetric = !ni.kind.is_directed();
    let mut deg_w = vec![0usize; g.n + 1];
    for e in &ni.edges {
        if !blocked[e.u] && !blocked[e.v] {
            deg_w[e.u] += 1;
            deg_w[e.v] += 1;
        }
    }
    let pool: Vec<usize> = (1..=g.n)
        .filter(|&v| v != w && !blocked[v] && !ni.is_terminal(v) && deg_w[v] >= 3)
        .collect();
    let mut best: Option<BranchPick> = None;
    for pair in ni.terminals.iter().copied().combinations(2) {
        let (ti, tj) = (pair[0], pair[1]);
        let rest: Vec<usize> = ni.terminals.iter().copied().filter(|&t| t != ti && t != tj).collect();
        for size in 0..=limit.min(pool.len()) {
            for forced in pool.iter().copied().combinations(size) {
                let Some(bundle) = min_length_disjoint_bundle(g, w, (ti, tj), &forced, Some(blocked)) else {
                    continue;
                };
                let zero: BTreeSet<(usize, usize)> = bundle.arcs().into_iter().collect();
                let h = without_blocked(g, blocked, &zero, symmetric);
                let Some(s) = dreyfus_wagner_graph(&h, w, &rest) else { continue };
                let mut base = mu.to_vec();
                base.extend(bundle.arcs());
                let arcs = merge_trees(ni.root, &base, &s.arcs, |v| ni.is_terminal(v));
                let key = (arcs_length(g, &arcs), forced.len());
                if best.as_ref().is_none_or(|b| key < b.0) {
                    let witness = BranchWitness {
                        w: original_vertex(norm, w),
                        terminals: (original_vertex(norm, ti), original_vertex(norm, tj)),
                        forced: forced.iter().map(|&v| original_vertex(norm, v)).collect(),
                    };
                    best = Some((key, arcs, witness));
                }
            }
        }
    }
    best
}

/// Exact optimum for `c_min >= K - 1` and small `K`.
pub fn solve_cmin_k_minus_1_fixed_k(inst: &Instance) -> Result<Option<SteinerSolution>> {
    Ok(solve_cmin_k_minus_1_fixed_k_witness(inst)?.map(|(s, _)| s))
}

/// As [`solve_cmin_k_minus_1_fixed_k`], also returning the quadruple
/// `(w, t_i, t_j, W)` that produced the optimum (original vertex ids; `None`
/// when the instance was routed to the uncapacitated solver). Ties prefer
/// the smallest `W`.
pub fn solve_cmin_k_minus_1_fixed_k_witness(inst: &Instance) -> Result<Option<(SteinerSolution, Option<BranchWitness>)>> {
    ensure_valid(inst)?;
    let k = inst.k();
    let c_min = inst.c_min() as usize;
    if c_min + 1 < k {
        return Err(Error::Precondition(format!("c_min = {c_min} is below K - 1 = {}", k - 1)));
    }
    if c_min >= k {
        return match dreyfus_wagner(inst) {
            Ok(s) => Ok(Some((s, None))),
            Err(Error::UnreachableTerminal(_)) => Ok(None),
            Err(e) => Err(e),
        };
    }
    if k > CMIN_MAX_K {
        return Err(Error::LimitExceeded(format!("{k} terminals, bound is {CMIN_MAX_K}")));
    }
    let norm = normalize_keeping_caps(inst);
    // positive lengths; the optimum order is preserved
    let (ni, _) = normalize_lengths(&norm.instance);
    let g = ni.arc_graph();
    let limit = forced_vertex_limit(k);
    let cands = branching_candidates(&ni, &g).cands;
    // one work item per branching vertex; ties go to the earlier one
    let per_w: Vec<Option<BranchPick>> = cands
        .par_iter()
        .map(|(w, blocked, mu)| best_for_branch(&ni, &g, &norm, *w, blocked, mu, limit))
        .collect();
    let best = per_w.into_iter().flatten().fold(None, |acc: Option<(_, _, _)>, cand| match acc {
        Some(a) if a.0 <= cand.0 => Some(a),
        _ => Some(cand),
    });
    match best {
        Some((_, arcs, witness)) => {
            debug_assert!(check_arcs(&ni, &arcs).ok);
            Ok(Some((SteinerSolution::from_arcs(inst, norm.lift_arcs(&arcs))?, Some(witness))))
        }
        None => Ok(None),
    }
}

/// `c_min >= K - 1` for any `K`.
///
/// Decision mode tries every `(w, t_i, t_j)` and completes the first branch
/// found greedily. Optimize mode joins each minimum bundle with an
/// approximate Steiner tree on the other terminals; guarantee `1 + ρ`.
pub fn solve_cmin_k_minus_1(inst: &Instance, mode: Mode) -> Result<Option<ApproxReport>> {
    ensure_valid(inst)?;
    let k = inst.k();
    let c_min = inst.c_min() as usize;
    if c_min + 1 < k {
        return Err(Error::Precondition(format!("c_min = {c_min} is below K - 1 = {}", k - 1)));
    }
    if c_min >= k {
        return match steiner_approx(inst) {
            Ok(mut rep) => {
                if mode == Mode::Decision {
                    rep.guarantee = None;
                }
                Ok(Some(rep))
            }
            Err(Error::UnreachableTerminal(_)) => Ok(None),
            Err(e) => Err(e),
        };
    }
    let norm = normalize_keeping_caps(inst);
    let ni = &norm.instance;
    let (scaled, _) = normalize_lengths(ni);
    let gs = scaled.arc_graph();
    let g = ni.arc_graph();
    let symmetric = !ni.kind.is_directed();
    let mut best: Option<(i64, Vec<(usize, usize)>, Option<Ratio<i64>>)> = None;
    'outer: for (w, blocked, mu) in branching_candidates(&scaled, &gs).cands {
        for pair in ni.terminals.iter().copied().combinations(2) {
            let (ti, tj) = (pair[0], pair[1]);
            let Some(bundle) = min_length_disjoint_bundle(&gs, w, (ti, tj), &[], Some(&blocked)) else { continue };
            let mut base = mu.clone();
            base.extend(bundle.arcs());
            match mode {
                Mode::Decision => {
                    if let Some(arcs) = graft(&g, ni.root, &base, &ni.terminals) {
                        best = Some((0, arcs, None));
                        break 'outer;
                    }
                }
                Mode::Optimize => {
                    let rest: Vec<usize> = ni.terminals.iter().copied().filter(|&t| t != ti && t != tj).collect();
                    let Some((s2, rho)) = approx_graph(&g, symmetric, ni.root, &rest, EXACT_BOUND) else { continue };
                    let arcs = merge_trees(ni.root, &base, &s2.arcs, |v| ni.is_terminal(v));
                    let len = arcs_length(&g, &arcs);
                    if best.as_ref().is_none_or(|b| len < b.0) {
                        best = Some((len, arcs, rho.map(|r| r + 1)));
                    }
                }
            }
        }
    }
    match best {
        Some((_, arcs, guarantee)) => {
            debug_assert!(check_arcs(ni, &arcs).ok);
            let solution = SteinerSolution::from_arcs(inst, norm.lift_arcs(&arcs))?;
            Ok(Some(ApproxReport { solution, guarantee, achieved_ratio: None }))
        }
        None => Ok(None),
    }
}
