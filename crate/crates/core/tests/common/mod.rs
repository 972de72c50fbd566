#![allow(dead_code)]

use std::collections::BTreeSet;
use std::time::Duration;

use capsteiner::classify::Verdict;
use capsteiner::disjoint_paths::LabVdpInstance;
use capsteiner::oracle::OracleLimits;
use capsteiner::{ArcGraph, Edge, GraphKind, Instance, Length, SteinerSolution};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn lim() -> OracleLimits {
    OracleLimits { max_vertices: 16, max_edges: 40, time_budget: Duration::from_secs(600) }
}

pub fn value(s: &Option<SteinerSolution>) -> Option<Length> {
    s.as_ref().map(|x| x.total_length)
}

/// Random DAG (arcs go from lower to higher id) with labels 1..=3,
/// lengths 1..=5, `p` pairs and random nonempty label sets.
pub fn random_labvdp_dag(rng: &mut ChaCha8Rng, n: usize, p: usize, density: f64) -> LabVdpInstance {
    let mut g = ArcGraph::new(n);
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(density) {
                g.add_arc(u, v, rng.gen_range(1..=5), rng.gen_range(1..=3), g.arcs.len());
            }
        }
    }
    let mut ends: Vec<usize> = (1..=n).collect();
    for i in 0..2 * p {
        let j = rng.gen_range(i..n);
        ends.swap(i, j);
    }
    let pairs: Vec<(usize, usize)> = (0..p)
        .map(|i| {
            let (a, b) = (ends[2 * i], ends[2 * i + 1]);
            (a.min(b), a.max(b))
        })
        .collect();
    let label_sets = (0..p)
        .map(|_| loop {
            let s: BTreeSet<u32> = (1..=3).filter(|_| rng.gen_bool(0.6)).collect();
            if !s.is_empty() {
                break s;
            }
        })
        .collect();
    LabVdpInstance::with_capacity_labels(g, pairs, label_sets)
}

/// Brute force: every admissible simple path per pair, then every
/// combination of pairwise disjoint ones.
pub fn exhaustive_labvdp(inst: &LabVdpInstance) -> Option<i64> {
    fn paths(inst: &LabVdpInstance, i: usize) -> Vec<(BTreeSet<usize>, i64)> {
        let g = &inst.graph;
        let (s, t) = inst.pairs[i];
        let mut out = Vec::new();
        let mut stack = vec![(s, vec![s], 0i64)];
        while let Some((v, path, len)) = stack.pop() {
            if v == t {
                out.push((path.iter().copied().collect(), len));
                continue;
            }
            for (ai, a) in g.arcs.iter().enumerate() {
                if a.from == v && !path.contains(&a.to) && inst.label_sets[i].contains(&inst.labels[ai]) {
                    let mut p = path.clone();
                    p.push(a.to);
                    stack.push((a.to, p, len + a.len));
                }
            }
        }
        out
    }
    fn rec(all: &[Vec<(BTreeSet<usize>, i64)>], i: usize, used: &BTreeSet<usize>, acc: i64, best: &mut Option<i64>) {
        if i == all.len() {
            if best.is_none_or(|b| acc < b) {
                *best = Some(acc);
            }
            return;
        }
        for (vs, len) in &all[i] {
            if vs.is_disjoint(used) {
                let u: BTreeSet<usize> = used.union(vs).copied().collect();
                rec(all, i + 1, &u, acc + len, best);
            }
        }
    }
    let all: Vec<_> = (0..inst.pairs.len()).map(|i| paths(inst, i)).collect();
    let mut best = None;
    rec(&all, 0, &BTreeSet::new(), 0, &mut best);
    best
}

fn e(u: usize, v: usize, len: i64, cap: u32) -> Edge {
    Edge::new(u, v, len, cap)
}

/// Root 1, hubs 2 and 3, terminals 4..=10 (7 terminals), uniform capacity.
fn seven_terminal(kind: GraphKind, cap: u32, len: i64) -> Instance {
    let mut edges = vec![e(1, 2, len, cap), e(1, 3, len, cap), e(2, 3, len, cap)];
    for t in 4..=7 {
        edges.push(e(2, t, len, cap));
    }
    for t in 7..=10 {
        edges.push(e(3, t, 2 * len, cap));
    }
    Instance::new(kind, 10, edges, 1, (4..=10).collect())
}

/// One hand-built instance per leaf, with the expected verdict.
pub fn leaf_instances() -> Vec<(u8, &'static str, Verdict, Instance)> {
    use GraphKind::*;
    let mut v = Vec::new();
    // 1: unit capacities
    let i1 = Instance::new(Digraph, 5, vec![e(1, 2, 1, 1), e(1, 3, 2, 1), e(2, 4, 1, 1), e(3, 5, 1, 1), e(2, 5, 3, 1)], 1, vec![4, 5]);
    v.push((1, "digraph-unit", Verdict::Polynomial, i1));
    // 2: two terminals, capacity 2
    let i2 = Instance::new(Undirected, 4, vec![e(1, 2, 1, 2), e(2, 3, 1, 2), e(2, 4, 2, 2), e(3, 4, 1, 2)], 1, vec![3, 4]);
    v.push((2, "undirected-k2", Verdict::Polynomial, i2));
    // 3: undirected, uniform c = K - 2, K = 7, positive lengths
    v.push((3, "undirected-uniform-k7-lengths", Verdict::NpHard, seven_terminal(Undirected, 5, 1)));
    // 4: c_min = K - 1 with K = 9, positive lengths
    let mut e4 = vec![e(1, 2, 1, 8), e(1, 3, 4, 8)];
    for t in 4..=12 {
        e4.push(e(2, t, 1, 8));
    }
    e4.push(e(3, 12, 1, 8));
    let i4 = Instance::new(Digraph, 12, e4, 1, (4..=12).collect());
    v.push((4, "digraph-cmin-k1-k9", Verdict::Approximable("1+rho".into()), i4));
    // 5: c_min = K - 1, K = 3
    let i5 = Instance::new(Digraph, 6, vec![e(1, 2, 1, 3), e(2, 3, 1, 2), e(3, 4, 1, 2), e(3, 5, 1, 2), e(2, 6, 1, 2), e(1, 6, 1, 2)], 1, vec![4, 5, 6]);
    v.push((5, "digraph-cmin-k1-k3", Verdict::Polynomial, i5));
    // 6: digraph, c_min = K - 2
    let i6 = Instance::new(Digraph, 6, vec![e(1, 2, 1, 2), e(2, 3, 1, 1), e(2, 4, 1, 1), e(1, 5, 3, 1), e(5, 4, 1, 2), e(5, 6, 1, 1), e(3, 6, 1, 2)], 1, vec![3, 4, 6]);
    v.push((6, "digraph-hard", Verdict::NpHard, i6));
    // 7: undirected, non-uniform, K = 4, c_min <= K - 2
    let i7 = Instance::new(Undirected, 7, vec![e(1, 2, 1, 2), e(2, 3, 1, 1), e(2, 4, 1, 2), e(4, 5, 1, 1), e(4, 6, 1, 1), e(1, 7, 2, 2), e(7, 6, 1, 1), e(7, 3, 1, 1)], 1, vec![3, 5, 6, 7]);
    v.push((7, "undirected-nonuniform", Verdict::NpHard, i7));
    // 8: undirected, uniform capacity 2 with K = 7
    v.push((8, "undirected-uniform-c2-k7", Verdict::NpHard, seven_terminal(Undirected, 2, 1)));
    // 9: undirected, uniform c = K - 2, K = 7, zero lengths
    v.push((9, "undirected-uniform-k7-zero", Verdict::Polynomial, seven_terminal(Undirected, 5, 0)));
    // 10: undirected, uniform capacity 2, K = 4, positive lengths
    let i10 = Instance::new(Undirected, 7, vec![e(1, 2, 1, 2), e(1, 3, 1, 2), e(2, 4, 1, 2), e(2, 5, 1, 2), e(3, 6, 1, 2), e(3, 7, 1, 2), e(2, 3, 1, 2), e(5, 6, 1, 2)], 1, vec![4, 5, 6, 7]);
    v.push((10, "undirected-uniform-k4", Verdict::Open, i10));
    // 11: DAG, K = 3, mixed capacities
    let i11 = Instance::new(Dag, 6, vec![e(1, 2, 1, 2), e(1, 3, 2, 1), e(2, 4, 1, 1), e(2, 5, 1, 1), e(3, 6, 1, 1), e(2, 6, 3, 1), e(3, 5, 1, 1)], 1, vec![4, 5, 6]);
    v.push((11, "dag-k3", Verdict::Polynomial, i11));
    // 12: DAG, uniform capacity 2 with K = 7
    v.push((12, "dag-uniform-c2-k7", Verdict::NpHard, seven_terminal(Dag, 2, 1)));
    // 13: DAG, c_min = K - 2, K = 7, zero lengths
    v.push((13, "dag-cmin-k7-zero", Verdict::Polynomial, seven_terminal(Dag, 5, 0)));
    // 3 again, on a DAG
    v.push((3, "dag-cmin-k7-lengths", Verdict::NpHard, seven_terminal(Dag, 5, 1)));
    v
}
