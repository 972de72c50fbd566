//! Exact solvers for a fixed number of terminals: every potential skeleton is
//! expanded into a (labelled) vertex-disjoint paths instance.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::disjoint_paths::{labvdp_dag_dp, DP_MAX_PAIRS, vdisj_search, DisjointPathsReport, LabVdpInstance, SearchOptions};
use crate::error::{Error, Result};
use crate::model::graph::ArcGraph;
use crate::model::instance::{ensure_valid, normalize_terminals_mapped, GraphKind, Instance};
use crate::model::solution::{check_arcs, Mode, SteinerSolution};
use crate::skeletons::{enumerate_potential_skeletons, PotentialSkeleton};

/// Integer length of a candidate tree, with its arcs.
type Priced = (i64, Vec<(usize, usize)>);

/// Candidates evaluated together between two pruning checks.
const BATCH: usize = 64;

/// Largest terminal count the skeleton enumeration accepts by default.
pub const DEFAULT_MAX_K: usize = 6;

#[derive(Clone, Debug)]
pub struct FixedKOptions {
    pub max_k: usize,
    pub mode: Mode,
    pub search: SearchOptions,
}

impl Default for FixedKOptions {
    fn default() -> Self {
        FixedKOptions { max_k: DEFAULT_MAX_K, mode: Mode::Optimize, search: SearchOptions::default() }
    }
}

/// The graph `G'` behind one skeleton: one copy of a skeleton vertex per
/// incident skeleton arc, one copy of every other vertex.
#[derive(Clone, Debug)]
pub struct SkeletonExpansion {
    pub skeleton: PotentialSkeleton,
    /// Skeleton arc `(u, v)` to the copies `(u_v, v_u)`.
    pub copy_map: BTreeMap<(usize, usize), (usize, usize)>,
    /// Source-sink pairs in skeleton arc order.
    pub pair_list: Vec<(usize, usize)>,
    /// `{K_v, ..., K}` per pair.
    pub label_sets: Vec<BTreeSet<u32>>,
    /// Vertex of the original graph behind every vertex of `G'`.
    pub orig_of: Vec<usize>,
}

/// Minimum admissible label per skeleton arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum LabelRule {
    /// Labels ignored.
    Free,
    /// `{K_v, ..., K}`: enough capacity for the terminals below `v`.
    Below,
    /// `{K - x, ..., K}` with `x` the skeleton terminals not below `v`.
    Slack,
}

impl LabelRule {
    fn min_label(self, k: u32, sk: &crate::model::skeleton::Skeleton, v: usize) -> u32 {
        let below = sk.terminal_count_below[&v] as u32;
        match self {
            LabelRule::Free => 1,
            LabelRule::Below => below,
            LabelRule::Slack => {
                let x = sk.terminal_count() as u32 - below;
                k.saturating_sub(x).max(1)
            }
        }
    }
}

/// Builds `G'` with labels `min(c(e), K)` and label sets `{K_v, ..., K}`.
pub fn build_labvdp_from_skeleton(inst: &Instance, ps: &PotentialSkeleton) -> (LabVdpInstance, SkeletonExpansion) {
    build_expansion(inst, ps, LabelRule::Below)
}

pub(crate) fn build_expansion(inst: &Instance, ps: &PotentialSkeleton, rule: LabelRule) -> (LabVdpInstance, SkeletonExpansion) {
    let k = inst.k() as u32;
    let sk = &ps.skeleton;
    let mut orig_of = vec![0usize];
    let mut copies: Vec<Vec<usize>> = vec![Vec::new(); inst.n + 1];
    let mut copy_map = BTreeMap::new();
    for &(u, v) in &sk.arcs {
        orig_of.push(u);
        let cu = orig_of.len() - 1;
        orig_of.push(v);
        let cv = orig_of.len() - 1;
        copies[u].push(cu);
        copies[v].push(cv);
        copy_map.insert((u, v), (cu, cv));
    }
    let in_skeleton: BTreeSet<usize> = sk.vertices.iter().copied().collect();
    for v in 1..=inst.n {
        if !in_skeleton.contains(&v) {
            orig_of.push(v);
            copies[v].push(orig_of.len() - 1);
        }
    }
    let base = inst.arc_graph();
    let mut g = ArcGraph::new(orig_of.len() - 1);
    let mut labels = Vec::new();
    for (ai, a) in base.arcs.iter().enumerate() {
        for &x in &copies[a.from] {
            for &y in &copies[a.to] {
                g.add_arc(x, y, a.len, a.cap, ai);
                labels.push(if rule == LabelRule::Free { 1 } else { a.cap.min(k) });
            }
        }
    }
    let pair_list: Vec<(usize, usize)> = sk.arcs.iter().map(|a| copy_map[a]).collect();
    let label_sets: Vec<BTreeSet<u32>> = sk
        .arcs
        .iter()
        .map(|&(_, v)| match rule {
            LabelRule::Free => BTreeSet::from([1]),
            _ => (rule.min_label(k, sk, v)..=k).collect(),
        })
        .collect();
    let lab = LabVdpInstance { graph: g, labels, pairs: pair_list.clone(), label_sets: label_sets.clone() };
    let exp = SkeletonExpansion { skeleton: ps.clone(), copy_map, pair_list, label_sets, orig_of };
    (lab, exp)
}

/// Maps a path system of `G'` back to arcs of the original graph. `None` if
/// two paths share an original vertex or the result is not a feasible tree.
pub fn stitch(inst: &Instance, exp: &SkeletonExpansion, report: &DisjointPathsReport) -> Option<Vec<(usize, usize)>> {
    let arcs = stitch_arcs(exp, report)?;
    check_arcs(inst, &arcs).ok.then_some(arcs)
}

/// Maps paths back without the feasibility check; `None` if two paths share
/// an original vertex.
pub(crate) fn stitch_arcs(exp: &SkeletonExpansion, report: &DisjointPathsReport) -> Option<Vec<(usize, usize)>> {
    let mut arcs = Vec::new();
    let mut inner = BTreeSet::new();
    for p in &report.paths {
        for w in p.windows(2) {
            arcs.push((exp.orig_of[w[0]], exp.orig_of[w[1]]));
        }
        for &x in &p[1..p.len() - 1] {
            if !inner.insert(exp.orig_of[x]) {
                return None;
            }
        }
    }
    Some(arcs)
}

/// Cheapest path per skeleton arc avoiding the other skeleton vertices,
/// restricted to admissible labels. Sum is a lower bound on any expansion.
fn skeleton_lower_bound(inst: &Instance, g: &ArcGraph, ps: &PotentialSkeleton, rule: LabelRule) -> Option<i64> {
    let sk = &ps.skeleton;
    let k = inst.k() as u32;
    let mut blocked = vec![false; g.n + 1];
    for &v in &sk.vertices {
        blocked[v] = true;
    }
    let mut total = 0;
    for &(u, v) in &sk.arcs {
        let need = rule.min_label(k, sk, v);
        blocked[v] = false;
        let sp = g.shortest_paths(&[u], Some(&blocked), |_, a| a.cap.min(k) >= need);
        blocked[v] = true;
        total += sp.dist[v]?;
    }
    Some(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum PathSolver {
    DagDp,
    Search,
}

impl PathSolver {
    pub(crate) fn for_kind(kind: GraphKind) -> Self {
        if kind == GraphKind::Dag {
            PathSolver::DagDp
        } else {
            PathSolver::Search
        }
    }
}

/// Cheapest feasible expansion over a family of skeletons, as arcs of `inst`.
/// Candidates are tried in order of lower bound; decision mode stops at the
/// first feasible one.
pub(crate) fn best_expansion(
    inst: &Instance,
    skeletons: impl Iterator<Item = PotentialSkeleton>,
    rule: LabelRule,
    solver: PathSolver,
    mode: Mode,
    search: &SearchOptions,
) -> Result<Option<Priced>> {
    let g = inst.arc_graph();
    let mut cands: Vec<(i64, usize, PotentialSkeleton)> = skeletons
        .enumerate()
        .filter_map(|(i, ps)| skeleton_lower_bound(inst, &g, &ps, rule).map(|lb| (lb, i, ps)))
        .collect();
    cands.sort_by_key(|c| (c.0, c.1));
    let mut search = search.clone();
    search.stop_at_first = mode == Mode::Decision;
    let evaluate = |ps: &PotentialSkeleton| -> Result<Option<Priced>> {
        let (lab, exp) = build_expansion(inst, ps, rule);
        let report = match solver {
            // the search is exact too, and has no pair bound
            PathSolver::DagDp if lab.pairs.len() <= DP_MAX_PAIRS => labvdp_dag_dp(&lab)?,
            PathSolver::DagDp | PathSolver::Search => vdisj_search(&lab, &search)?,
        };
        Ok(report.map(|r| {
            let arcs = stitch_arcs(&exp, &r).expect("disjoint expansion stitches into a tree");
            (r.total_length, arcs)
        }))
    };
    // Fixed-size batches in lower-bound order: the pruning points, and so
    // the answer, do not depend on the number of threads.
    let mut best: Option<Priced> = None;
    for batch in cands.chunks(BATCH) {
        let bound = best.as_ref().map(|b| b.0);
        if bound.is_some_and(|b| batch[0].0 >= b) {
            break;
        }
        let results: Vec<_> = batch
            .par_iter()
            .map(|(lb, _, ps)| if bound.is_some_and(|b| *lb >= b) { Ok(None) } else { evaluate(ps) })
            .collect();
        for r in results {
            if let Some((len, arcs)) = r? {
                if best.as_ref().is_none_or(|b| len < b.0) {
                    best = Some((len, arcs));
                }
            }
        }
        if mode == Mode::Decision && best.is_some() {
            break;
        }
    }
    Ok(best)
}

fn solve_by_skeletons(
    inst: &Instance,
    opts: &FixedKOptions,
    uniform: Option<u32>,
    solver: PathSolver,
) -> Result<Option<SteinerSolution>> {
    if inst.k() > opts.max_k {
        return Err(Error::LimitExceeded(format!("{} terminals, fixed-K bound is {}", inst.k(), opts.max_k)));
    }
    let norm = normalize_terminals_mapped(inst);
    let ni = &norm.instance;
    let skeletons = enumerate_potential_skeletons(ni, &ni.terminals).filter(|ps| {
        uniform.is_none_or(|c| {
            ps.skeleton.children(ni.root).iter().all(|v| ps.skeleton.terminal_count_below[v] as u32 <= c)
        })
    });
    let rule = if uniform.is_some() { LabelRule::Free } else { LabelRule::Below };
    let best = best_expansion(ni, skeletons, rule, solver, opts.mode, &opts.search)?;
    match best {
        Some((_, arcs)) => {
            debug_assert!(check_arcs(ni, &arcs).ok);
            Ok(Some(SteinerSolution::from_arcs(inst, norm.lift_arcs(&arcs))?))
        }
        None => Ok(None),
    }
}

/// Exact optimum on a DAG with few terminals and arbitrary capacities.
pub fn solve_dag_fixed_k(inst: &Instance) -> Result<Option<SteinerSolution>> {
    solve_dag_fixed_k_with(inst, &FixedKOptions::default())
}

pub fn solve_dag_fixed_k_with(inst: &Instance, opts: &FixedKOptions) -> Result<Option<SteinerSolution>> {
    ensure_valid(inst)?;
    if inst.kind != GraphKind::Dag {
        return Err(Error::NotADag);
    }
    solve_by_skeletons(inst, opts, None, PathSolver::DagDp)
}

/// Exact optimum for uniform capacities and few terminals, any graph kind.
/// Skeletons with a root child above more than `c` terminals are rejected.
pub fn solve_uniform_fixed_k(inst: &Instance) -> Result<Option<SteinerSolution>> {
    solve_uniform_fixed_k_with(inst, &FixedKOptions::default())
}

pub fn solve_uniform_fixed_k_with(inst: &Instance, opts: &FixedKOptions) -> Result<Option<SteinerSolution>> {
    ensure_valid(inst)?;
    let c = inst.uniform_capacity().ok_or(Error::NonUniformCapacities)?;
    solve_by_skeletons(inst, opts, Some(c), PathSolver::for_kind(inst.kind))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::instance::Edge;
    use crate::model::skeleton::Skeleton;
    use num_rational::Ratio;

    #[test]
    fn label_sets_of_the_two_junction_skeleton() {
        // r=1, b=2, e=3, t1=4, t2=5, t3=6
        let edges = vec![
            Edge::new(1, 2, 1, 3),
            Edge::new(2, 3, 3, 2),
            Edge::new(2, 4, 1, 1),
            Edge::new(3, 5, 1, 1),
            Edge::new(3, 6, 1, 1),
        ];
        let inst = Instance::new(GraphKind::Undirected, 6, edges, 1, vec![4, 5, 6]);
        let arcs = vec![(1, 2), (2, 3), (2, 4), (3, 5), (3, 6)];
        let sk = Skeleton::from_arcs(1, arcs, |v| v >= 4).unwrap();
        let ps = PotentialSkeleton { skeleton: sk, junction_choice: vec![2, 3] };
        let (lab, exp) = build_labvdp_from_skeleton(&inst, &ps);
        let set = |v: &[u32]| v.iter().copied().collect::<BTreeSet<u32>>();
        let by_arc: BTreeMap<(usize, usize), BTreeSet<u32>> =
            ps.skeleton.arcs.iter().copied().zip(exp.label_sets.iter().cloned()).collect();
        assert_eq!(by_arc[&(1, 2)], set(&[3]));
        assert_eq!(by_arc[&(2, 3)], set(&[2, 3]));
        for a in [(2, 4), (3, 5), (3, 6)] {
            assert_eq!(by_arc[&a], set(&[1, 2, 3]));
        }
        // 5 pairs, 10 copies, no other vertices
        assert_eq!(lab.pairs.len(), 5);
        assert_eq!(lab.graph.n, 10);
        let rep = vdisj_search(&lab, &SearchOptions::default()).unwrap().unwrap();
        assert_eq!(rep.total_length, 7);
        assert!(stitch(&inst, &exp, &rep).is_some());
    }

    #[test]
    fn dag_star_and_bottleneck() {
        let star = Instance::new(GraphKind::Dag, 4, (2..=4).map(|t| Edge::new(1, t, 1, 1)).collect(), 1, vec![2, 3, 4]);
        assert_eq!(solve_dag_fixed_k(&star).unwrap().unwrap().total_length, Ratio::from_integer(3));
        let edges = vec![Edge::new(1, 2, 1, 2), Edge::new(2, 3, 1, 3), Edge::new(2, 4, 1, 3), Edge::new(2, 5, 1, 3)];
        let neck = Instance::new(GraphKind::Dag, 5, edges, 1, vec![3, 4, 5]);
        assert!(solve_dag_fixed_k(&neck).unwrap().is_none());
    }

    #[test]
    fn uniform_capacity_k_is_plain_steiner() {
        let mut edges = vec![];
        for t in 2..=4 {
            edges.push(Edge::new(5, t, 1, 3));
            edges.push(Edge::new(1, t, 3, 3));
        }
        edges.push(Edge::new(1, 5, 1, 3));
        let inst = Instance::new(GraphKind::Undirected, 5, edges, 1, vec![2, 3, 4]);
        let sol = solve_uniform_fixed_k(&inst).unwrap().unwrap();
        assert_eq!(sol.total_length, crate::steiner::dreyfus_wagner(&inst).unwrap().total_length);
        let mut tight = inst.clone();
        for e in &mut tight.edges {
            e.capacity = 2;
        }
        let sol = solve_uniform_fixed_k(&tight).unwrap().unwrap();
        assert_eq!(sol.total_length, Ratio::from_integer(6));
    }
}
