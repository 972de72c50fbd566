//! Min-cost flow by successive shortest paths, vertex splitting, the
//! unit-capacity solver and minimum-length two-path bundles with forced vertices.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::model::graph::ArcGraph;
use crate::model::instance::{ensure_valid, Instance};
use crate::model::solution::SteinerSolution;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub cost: i64,
    pub cap: i64,
    /// Minimum flow the arc must carry.
    pub lower: i64,
}

/// Nodes are `0..nodes`.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    pub nodes: usize,
    pub arcs: Vec<FlowArc>,
    pub source: usize,
    pub sink: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    pub value: i64,
    pub cost: i64,
    /// Flow per arc of the network, in arc order.
    pub arc_flows: Vec<i64>,
}

impl FlowNetwork {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Self {
        FlowNetwork { nodes, arcs: Vec::new(), source, sink }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cost: i64, cap: i64) -> usize {
        self.add_bounded_arc(from, to, cost, 0, cap)
    }

    pub fn add_bounded_arc(&mut self, from: usize, to: usize, cost: i64, lower: i64, cap: i64) -> usize {
        self.arcs.push(FlowArc { from, to, cost, cap, lower });
        self.arcs.len() - 1
    }

    /// Conservation and bound check of a result against this network.
    pub fn is_valid_flow(&self, res: &FlowResult) -> bool {
        if res.arc_flows.len() != self.arcs.len() {
            return false;
        }
        let mut net = vec![0i64; self.nodes];
        let mut cost = 0;
        for (a, &f) in self.arcs.iter().zip(&res.arc_flows) {
            if f < a.lower || f > a.cap {
                return false;
            }
            net[a.from] -= f;
            net[a.to] += f;
            cost += f * a.cost;
        }
        (0..self.nodes).all(|v| {
            if v == self.source && v != self.sink {
                net[v] == -res.value
            } else if v == self.sink && v != self.source {
                net[v] == res.value
            } else {
                net[v] == 0
            }
        }) && cost == res.cost
    }
}

struct Residual {
    to: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Residual { to: Vec::new(), cap: Vec::new(), cost: Vec::new(), adj: vec![Vec::new(); n] }
    }

    /// Returns the index of the forward residual edge; its twin is `index ^ 1`.
    fn add(&mut self, u: usize, v: usize, cap: i64, cost: i64) -> usize {
        let e = self.to.len();
        self.to.extend([v, u]);
        self.cap.extend([cap, 0]);
        self.cost.extend([cost, -cost]);
        self.adj[u].push(e);
        self.adj[v].push(e + 1);
        e
    }

    /// Pushes up to `want` units from `s` to `t`; returns (units, cost).
    fn ssp(&mut self, s: usize, t: usize, want: i64) -> (i64, i64) {
        let n = self.adj.len();
        let mut pot = vec![0i64; n];
        let (mut sent, mut total) = (0i64, 0i64);
        while sent < want {
            let mut dist: Vec<Option<i64>> = vec![None; n];
            let mut pred: Vec<Option<usize>> = vec![None; n];
            let mut heap = BinaryHeap::new();
            dist[s] = Some(0);
            heap.push(Reverse((0i64, s)));
            while let Some(Reverse((d, u))) = heap.pop() {
                if dist[u] != Some(d) {
                    continue;
                }
                for &e in &self.adj[u] {
                    if self.cap[e] <= 0 {
                        continue;
                    }
                    let v = self.to[e];
                    let nd = d + self.cost[e] + pot[u] - pot[v];
                    if dist[v].is_none_or(|old| nd < old) {
                        dist[v] = Some(nd);
                        pred[v] = Some(e);
                        heap.push(Reverse((nd, v)));
                    }
                }
            }
            let Some(dt) = dist[t] else { break };
            for v in 0..n {
                // capping at dt keeps every residual reduced cost nonnegative
                pot[v] += dist[v].map_or(dt, |d| d.min(dt));
            }
            let mut push = want - sent;
            let mut v = t;
            while let Some(e) = pred[v] {
                push = push.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = t;
            while let Some(e) = pred[v] {
                self.cap[e] -= push;
                self.cap[e ^ 1] += push;
                total += push * self.cost[e];
                v = self.to[e ^ 1];
            }
            sent += push;
        }
        (sent, total)
    }
}

/// Minimum-cost flow of exactly `demand` units from source to sink, honouring
/// lower bounds. `None` if no such flow exists. Costs must be nonnegative.
pub fn min_cost_flow(net: &FlowNetwork, demand: i64) -> Option<FlowResult> {
    let n = net.nodes;
    let (ss, tt) = (n, n + 1);
    let mut res = Residual::new(n + 2);
    let mut balance = vec![0i64; n];
    balance[net.source] += demand;
    balance[net.sink] -= demand;
    let mut base_cost = 0;
    let mut edge_of = Vec::with_capacity(net.arcs.len());
    for a in &net.arcs {
        if a.lower > a.cap || a.lower < 0 {
            return None;
        }
        edge_of.push(res.add(a.from, a.to, a.cap - a.lower, a.cost));
        balance[a.to] += a.lower;
        balance[a.from] -= a.lower;
        base_cost += a.lower * a.cost;
    }
    let mut need = 0;
    for (v, &b) in balance.iter().enumerate() {
        if b > 0 {
            res.add(ss, v, b, 0);
            need += b;
        } else if b < 0 {
            res.add(v, tt, -b, 0);
        }
    }
    let (sent, cost) = res.ssp(ss, tt, need);
    if sent < need {
        return None;
    }
    let arc_flows = net
        .arcs
        .iter()
        .zip(&edge_of)
        .map(|(a, &e)| a.lower + res.cap[e ^ 1])
        .collect();
    Some(FlowResult { value: demand, cost: cost + base_cost, arc_flows })
}

/// Node ids of a split graph: `v_in = 2v`, `v_out = 2v + 1` for split
/// vertices; unsplit vertices use `2v` for both.
#[derive(Clone, Debug)]
pub struct SplitMap {
    pub split: Vec<bool>,
    /// Network arc standing for each graph arc.
    pub arc_of: Vec<usize>,
    /// Internal arc `(v_in, v_out)` of every split vertex.
    pub node_arc: Vec<Option<usize>>,
}

impl SplitMap {
    pub fn node_in(&self, v: usize) -> usize {
        2 * v
    }

    pub fn node_out(&self, v: usize) -> usize {
        if self.split[v] {
            2 * v + 1
        } else {
            2 * v
        }
    }
}

/// Replaces every unprotected vertex `v` by an arc `v' -> v''` of cost 0 and
/// capacity 1. Two extra nodes (`2n + 2`, `2n + 3`) are reserved for a source
/// and sink; graph arcs keep their length as cost and get capacity 1.
pub fn split_vertices(g: &ArcGraph, protected: &[bool]) -> (FlowNetwork, SplitMap) {
    let n = g.n;
    let mut net = FlowNetwork::new(2 * n + 4, 2 * n + 2, 2 * n + 3);
    let split: Vec<bool> = (0..=n).map(|v| v >= 1 && !protected.get(v).copied().unwrap_or(false)).collect();
    let mut node_arc = vec![None; n + 1];
    for v in 1..=n {
        if split[v] {
            node_arc[v] = Some(net.add_arc(2 * v, 2 * v + 1, 0, 1));
        }
    }
    let mut map = SplitMap { split, arc_of: Vec::new(), node_arc };
    for arc in &g.arcs {
        let id = net.add_arc(map.node_out(arc.from), map.node_in(arc.to), arc.len, 1);
        map.arc_of.push(id);
    }
    (net, map)
}

/// Splits a flow into source-sink walks (as arc lists, loops cut out).
/// The second value is true if any flow sat on a cycle.
fn decompose(net: &FlowNetwork, flows: &[i64]) -> (Vec<Vec<usize>>, bool) {
    let mut left = flows.to_vec();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); net.nodes];
    for (i, a) in net.arcs.iter().enumerate() {
        out[a.from].push(i);
    }
    let mut paths = Vec::new();
    let mut cyclic = false;
    loop {
        let mut path: Vec<usize> = Vec::new();
        let mut pos = vec![usize::MAX; net.nodes];
        let mut v = net.source;
        pos[v] = 0;
        while v != net.sink {
            let Some(&a) = out[v].iter().find(|&&a| left[a] > 0) else { break };
            left[a] -= 1;
            let w = net.arcs[a].to;
            if pos[w] != usize::MAX {
                let keep = pos[w];
                for &b in &path[keep..] {
                    pos[net.arcs[b].to] = usize::MAX;
                }
                path.truncate(keep);
                pos[w] = keep;
                cyclic = true;
            } else {
                path.push(a);
                pos[w] = path.len();
            }
            v = w;
        }
        if v != net.sink {
            break;
        }
        paths.push(path);
    }
    cyclic |= left.iter().any(|&f| f > 0);
    (paths, cyclic)
}

/// Optimal tree when every capacity is 1: `K` internally vertex-disjoint
/// root-terminal paths of minimum total length.
pub fn solve_unit_capacity(inst: &Instance) -> Result<Option<SteinerSolution>> {
    ensure_valid(inst)?;
    if inst.c_max() != 1 {
        return Err(Error::Precondition("all capacities must be 1".into()));
    }
    let g = inst.arc_graph();
    let mut protected = vec![false; g.n + 1];
    protected[inst.root] = true;
    let (mut net, map) = split_vertices(&g, &protected);
    net.source = map.node_out(inst.root);
    for &t in &inst.terminals {
        net.add_arc(map.node_out(t), net.sink, 0, 1);
    }
    let Some(res) = min_cost_flow(&net, inst.k() as i64) else { return Ok(None) };
    debug_assert!(net.is_valid_flow(&res));
    let (paths, _) = decompose(&net, &res.arc_flows);
    let graph_arc: std::collections::HashMap<usize, usize> =
        map.arc_of.iter().enumerate().map(|(ga, &na)| (na, ga)).collect();
    let mut arcs = Vec::new();
    for p in paths {
        for a in p {
            if let Some(&ga) = graph_arc.get(&a) {
                arcs.push((g.arcs[ga].from, g.arcs[ga].to));
            }
        }
    }
    let sol = SteinerSolution::from_arcs(inst, arcs)?;
    Ok(Some(sol))
}

/// Two internally vertex-disjoint paths `w -> t_i` and `w -> t_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle {
    /// Vertex sequences, the first ending at `t_i`, the second at `t_j`.
    pub paths: [Vec<usize>; 2],
    pub length: i64,
}

impl Bundle {
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.paths.iter().flat_map(|p| p.windows(2).map(|w| (w[0], w[1]))).collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.paths.iter().flatten().copied()
    }
}

/// Minimum total length pair of internally disjoint paths from `w` to both
/// sinks whose union covers `forced`. Vertices marked in `blocked` are
/// avoided. Flow with lower bounds first; exhaustive search if the flow
/// decomposes with a cycle.
pub fn min_length_disjoint_bundle(
    g: &ArcGraph,
    w: usize,
    sinks: (usize, usize),
    forced: &[usize],
    blocked: Option<&[bool]>,
) -> Option<Bundle> {
    let (ti, tj) = sinks;
    if ti == tj || ti == w || tj == w || forced.iter().any(|&x| x == w || x == ti || x == tj) {
        return None;
    }
    let is_blocked = |v: usize| blocked.is_some_and(|b| b[v]) && v != w;
    if is_blocked(ti) || is_blocked(tj) || forced.iter().any(|&x| is_blocked(x)) {
        return None;
    }
    let mut protected = vec![false; g.n + 1];
    protected[w] = true;
    let (mut net, map) = split_vertices(g, &protected);
    net.source = map.node_out(w);
    for v in 1..=g.n {
        if is_blocked(v) {
            net.arcs[map.node_arc[v].expect("blocked vertices are split")].cap = 0;
        }
    }
    for &x in forced {
        net.arcs[map.node_arc[x].expect("forced vertices are split")].lower = 1;
    }
    let si = net.add_arc(map.node_out(ti), net.sink, 0, 1);
    let sj = net.add_arc(map.node_out(tj), net.sink, 0, 1);
    let res = min_cost_flow(&net, 2)?;
    let (paths, cyclic) = decompose(&net, &res.arc_flows);
    if cyclic || paths.len() != 2 {
        return exhaustive_bundle(g, w, sinks, forced, blocked);
    }
    let node_vertex = |node: usize| node / 2;
    let mut out: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for p in paths {
        let last = *p.last().expect("nonempty path");
        let slot = if last == si {
            0
        } else {
            debug_assert_eq!(last, sj);
            1
        };
        let mut verts = vec![w];
        for &a in &p[..p.len() - 1] {
            let v = node_vertex(net.arcs[a].to);
            if *verts.last().unwrap() != v {
                verts.push(v);
            }
        }
        out[slot] = verts;
    }
    let length = out.iter().map(|p| path_length(g, p)).sum();
    Some(Bundle { paths: out, length })
}

fn path_length(g: &ArcGraph, p: &[usize]) -> i64 {
    p.windows(2)
        .map(|w| g.arcs[g.find_arc(w[0], w[1]).expect("path arc exists")].len)
        .sum()
}

/// Exact reference for [`min_length_disjoint_bundle`] by enumerating simple paths.
pub fn exhaustive_bundle(
    g: &ArcGraph,
    w: usize,
    sinks: (usize, usize),
    forced: &[usize],
    blocked: Option<&[bool]>,
) -> Option<Bundle> {
    let mut used = vec![false; g.n + 1];
    for v in 1..=g.n {
        used[v] = blocked.is_some_and(|b| b[v]);
    }
    used[w] = true;
    let mut first = Vec::new();
    simple_paths(g, w, sinks.0, &mut used, &mut vec![w], 0, &mut |p, len| first.push((p.to_vec(), len)));
    let mut best: Option<Bundle> = None;
    for (p1, l1) in first {
        for &v in &p1[1..] {
            used[v] = true;
        }
        let mut seconds = Vec::new();
        if !used[sinks.1] {
            simple_paths(g, w, sinks.1, &mut used, &mut vec![w], 0, &mut |p, len| seconds.push((p.to_vec(), len)));
        }
        for &v in &p1[1..] {
            used[v] = false;
        }
        for (p2, l2) in seconds {
            let covers = forced.iter().all(|x| p1.contains(x) || p2.contains(x));
            if covers && best.as_ref().is_none_or(|b| l1 + l2 < b.length) {
                best = Some(Bundle { paths: [p1.clone(), p2], length: l1 + l2 });
            }
        }
    }
    best
}

fn simple_paths(
    g: &ArcGraph,
    v: usize,
    target: usize,
    used: &mut Vec<bool>,
    path: &mut Vec<usize>,
    len: i64,
    emit: &mut dyn FnMut(&[usize], i64),
) {
    if v == target {
        emit(path, len);
        return;
    }
    for &a in &g.out[v] {
        let w = g.arcs[a].to;
        if used[w] {
            continue;
        }
        used[w] = true;
        path.push(w);
        simple_paths(g, w, target, used, path, len + g.arcs[a].len, emit);
        path.pop();
        used[w] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::instance::{Edge, GraphKind};
    use num_rational::Ratio;

    #[test]
    fn parallel_unit_arcs() {
        let mut net = FlowNetwork::new(2, 0, 1);
        net.add_arc(0, 1, 1, 1);
        net.add_arc(0, 1, 3, 1);
        let res = min_cost_flow(&net, 2).unwrap();
        assert_eq!(res.cost, 4);
        assert!(net.is_valid_flow(&res));
        assert!(min_cost_flow(&net, 3).is_none());
    }

    #[test]
    fn lower_bounds_force_expensive_arc() {
        let mut net = FlowNetwork::new(2, 0, 1);
        net.add_arc(0, 1, 1, 1);
        net.add_bounded_arc(0, 1, 5, 1, 1);
        let res = min_cost_flow(&net, 1).unwrap();
        assert_eq!(res.cost, 5);
        assert_eq!(res.arc_flows, vec![0, 1]);
    }

    #[test]
    fn split_path() {
        let mut g = ArcGraph::new(3);
        g.add_arc(1, 2, 1, 1, 0);
        g.add_arc(2, 3, 1, 1, 1);
        let (net, map) = split_vertices(&g, &[false, true, false, true]);
        assert!(map.split[2] && !map.split[1] && !map.split[3]);
        assert_eq!(net.arcs.len(), 3);
        assert_eq!((net.arcs[0].from, net.arcs[0].to), (4, 5));
    }

    #[test]
    fn unit_capacity_star_and_cut() {
        let inst = Instance::new(GraphKind::Digraph, 3, vec![Edge::new(1, 2, 2, 1), Edge::new(1, 3, 3, 1)], 1, vec![2, 3]);
        let sol = solve_unit_capacity(&inst).unwrap().unwrap();
        assert_eq!(sol.total_length, Ratio::from_integer(5));
        let cut = Instance::new(
            GraphKind::Digraph,
            4,
            vec![Edge::new(1, 2, 1, 1), Edge::new(2, 3, 1, 1), Edge::new(2, 4, 1, 1)],
            1,
            vec![3, 4],
        );
        assert!(solve_unit_capacity(&cut).unwrap().is_none());
    }

    #[test]
    fn bundle_diamond_and_forced() {
        // w=1, a=2, b=3, ti=4, tj=5, plus shortcut 1->4
        let mut g = ArcGraph::new(5);
        for (u, v, l) in [(1, 2, 1), (2, 4, 1), (1, 3, 1), (3, 5, 1), (1, 4, 1)] {
            g.add_arc(u, v, l, 1, 0);
        }
        let b = min_length_disjoint_bundle(&g, 1, (4, 5), &[], None).unwrap();
        assert_eq!(b.length, 3);
        let b = min_length_disjoint_bundle(&g, 1, (4, 5), &[2], None).unwrap();
        assert_eq!(b.length, 4);
        assert_eq!(b.paths[0], vec![1, 2, 4]);
        assert_eq!(exhaustive_bundle(&g, 1, (4, 5), &[2], None).unwrap().length, 4);
    }
}
