//! Vertex-disjoint path systems: the labelled DAG dynamic program and an
//! exact backtracking search for arbitrary graphs.

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::model::graph::ArcGraph;

/// Disjoint paths with per-arc labels; pair `i` may only use arcs whose
/// label lies in `label_sets[i]`.
#[derive(Clone, Debug)]
pub struct LabVdpInstance {
    pub graph: ArcGraph,
    /// One label per arc of `graph`.
    pub labels: Vec<u32>,
    pub pairs: Vec<(usize, usize)>,
    pub label_sets: Vec<BTreeSet<u32>>,
}

impl LabVdpInstance {
    /// Every arc gets label 1 and every pair may use it.
    pub fn unlabelled(graph: ArcGraph, pairs: Vec<(usize, usize)>) -> Self {
        let labels = vec![1; graph.arcs.len()];
        let label_sets = vec![BTreeSet::from([1]); pairs.len()];
        LabVdpInstance { graph, labels, pairs, label_sets }
    }

    /// Labels taken from arc capacities.
    pub fn with_capacity_labels(graph: ArcGraph, pairs: Vec<(usize, usize)>, label_sets: Vec<BTreeSet<u32>>) -> Self {
        let labels = graph.arcs.iter().map(|a| a.cap).collect();
        LabVdpInstance { graph, labels, pairs, label_sets }
    }

    pub fn allows(&self, pair: usize, arc: usize) -> bool {
        self.label_sets[pair].contains(&self.labels[arc])
    }

    fn check_pairs(&self) -> Result<()> {
        if self.label_sets.len() != self.pairs.len() || self.labels.len() != self.graph.arcs.len() {
            return Err(Error::Precondition("one label set per pair and one label per arc".into()));
        }
        let mut seen = vec![false; self.graph.n + 1];
        for &(s, t) in &self.pairs {
            for x in [s, t] {
                if x == 0 || x > self.graph.n || seen[x] {
                    return Err(Error::Precondition("pair endpoints must be distinct graph vertices".into()));
                }
                seen[x] = true;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointPathsReport {
    /// Vertex sequences, one per pair, in pair order.
    pub paths: Vec<Vec<usize>>,
    pub total_length: i64,
    pub exact: bool,
    pub guarantee: Ratio<i64>,
}

/// Independent checker: endpoints, arcs, labels, mutual disjointness and length.
pub fn check_paths(inst: &LabVdpInstance, report: &DisjointPathsReport) -> bool {
    if report.paths.len() != inst.pairs.len() {
        return false;
    }
    let mut used = vec![false; inst.graph.n + 1];
    let mut total = 0;
    for (i, p) in report.paths.iter().enumerate() {
        if p.first() != Some(&inst.pairs[i].0) || p.last() != Some(&inst.pairs[i].1) {
            return false;
        }
        for &v in p {
            if v == 0 || v > inst.graph.n || used[v] {
                return false;
            }
            used[v] = true;
        }
        for w in p.windows(2) {
            let best = inst.graph.out[w[0]]
                .iter()
                .copied()
                .filter(|&a| inst.graph.arcs[a].to == w[1] && inst.allows(i, a))
                .map(|a| inst.graph.arcs[a].len)
                .min();
            match best {
                Some(l) => total += l,
                None => return false,
            }
        }
    }
    total == report.total_length
}

fn exact_report(paths: Vec<Vec<usize>>, total_length: i64) -> DisjointPathsReport {
    DisjointPathsReport { paths, total_length, exact: true, guarantee: Ratio::from_integer(1) }
}

/// Largest pair count accepted by [`labvdp_dag_dp`].
pub const DP_MAX_PAIRS: usize = 6;

/// Exact labelled disjoint paths on a DAG under the smallest-id Kahn order.
pub fn labvdp_dag_dp(inst: &LabVdpInstance) -> Result<Option<DisjointPathsReport>> {
    let order = inst.graph.topological_order().ok_or(Error::NotADag)?;
    labvdp_dag_dp_with_order(inst, &order)
}

/// Same as [`labvdp_dag_dp`] with an explicit topological order.
///
/// `f(v_1..v_p)` is the cheapest system of disjoint paths `s_i -> v_i`.
/// The head with the largest position above its source steps back along an
/// admissible arc; two coinciding heads are infeasible.
pub fn labvdp_dag_dp_with_order(inst: &LabVdpInstance, order: &[usize]) -> Result<Option<DisjointPathsReport>> {
    inst.check_pairs()?;
    let g = &inst.graph;
    if order.len() != g.n {
        return Err(Error::Precondition("order must list every vertex once".into()));
    }
    let mut num = vec![0usize; g.n + 1];
    for (i, &v) in order.iter().enumerate() {
        num[v] = i + 1;
    }
    if g.arcs.iter().any(|a| num[a.from] >= num[a.to]) {
        return Err(Error::NotADag);
    }
    if inst.pairs.len() > DP_MAX_PAIRS {
        return Err(Error::LimitExceeded(format!("{} pairs, dynamic program bound is {DP_MAX_PAIRS}", inst.pairs.len())));
    }
    if inst.pairs.is_empty() {
        return Ok(Some(exact_report(Vec::new(), 0)));
    }
    // vertices each pair can reach from its source through admissible arcs
    let reach: Vec<Vec<bool>> = (0..inst.pairs.len())
        .map(|i| g.hop_paths(&[inst.pairs[i].0], None, |a, _| inst.allows(i, a)).dist.iter().map(Option::is_some).collect())
        .collect();
    let mut dp = Dp { inst, num: &num, reach: &reach, memo: HashMap::new() };
    let target: Vec<usize> = inst.pairs.iter().map(|p| p.1).collect();
    let Some(value) = dp.f(&target) else { return Ok(None) };
    // walk the recorded choices back to the sources
    let mut paths: Vec<Vec<usize>> = target.iter().map(|&t| vec![t]).collect();
    let mut cur = target;
    while let Some(Some((_, Some((h, v))))) = dp.memo.get(&cur).cloned() {
        paths[h].push(v);
        cur[h] = v;
    }
    for p in &mut paths {
        p.reverse();
    }
    let report = exact_report(paths, value);
    debug_assert!(check_paths(inst, &report));
    Ok(Some(report))
}

type Memo = HashMap<Vec<usize>, Option<(i64, Option<(usize, usize)>)>>;

struct Dp<'a> {
    inst: &'a LabVdpInstance,
    num: &'a [usize],
    reach: &'a [Vec<bool>],
    memo: Memo,
}

impl Dp<'_> {
    fn f(&mut self, heads: &[usize]) -> Option<i64> {
        if let Some(m) = self.memo.get(heads) {
            return m.map(|x| x.0);
        }
        let val = self.compute(heads);
        self.memo.insert(heads.to_vec(), val);
        val.map(|x| x.0)
    }

    fn compute(&mut self, heads: &[usize]) -> Option<(i64, Option<(usize, usize)>)> {
        let pairs = &self.inst.pairs;
        let num = self.num;
        let h = (0..heads.len())
            .filter(|&i| num[heads[i]] > num[pairs[i].0])
            .max_by_key(|&i| num[heads[i]]);
        let Some(h) = h else {
            let at_sources = heads.iter().zip(pairs).all(|(&v, p)| v == p.0);
            return at_sources.then_some((0, None));
        };
        let vh = heads[h];
        if (0..heads.len()).any(|i| i != h && heads[i] == vh) {
            return None;
        }
        let g = &self.inst.graph;
        let mut best: Option<(i64, Option<(usize, usize)>)> = None;
        let mut next = heads.to_vec();
        for &a in &g.inc[vh] {
            let v = g.arcs[a].from;
            if num[v] < num[pairs[h].0] || !self.inst.allows(h, a) || !self.reach[h][v] {
                continue;
            }
            next[h] = v;
            if let Some(rest) = self.f(&next) {
                let cand = rest + g.arcs[a].len;
                if best.is_none_or(|b| cand < b.0) {
                    best = Some((cand, Some((h, v))));
                }
            }
        }
        best
    }
}

/// Limits for [`vdisj_search`].
#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub max_vertices: usize,
    pub time_budget: Duration,
    /// Return the first system found instead of the cheapest.
    pub stop_at_first: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_vertices: 200, time_budget: Duration::from_secs(60), stop_at_first: false }
    }
}

/// Exact disjoint paths by backtracking over simple paths, pair by pair.
/// Works on any graph kind; exponential in the worst case.
pub fn vdisj_search(inst: &LabVdpInstance, opts: &SearchOptions) -> Result<Option<DisjointPathsReport>> {
    inst.check_pairs()?;
    let g = &inst.graph;
    if g.n > opts.max_vertices {
        return Err(Error::LimitExceeded(format!("{} vertices, search bound is {}", g.n, opts.max_vertices)));
    }
    let p = inst.pairs.len();
    // distance from every vertex to the sink of pair i, admissible arcs only
    let mut rev = ArcGraph::new(g.n);
    for a in &g.arcs {
        rev.add_arc(a.to, a.from, a.len, a.cap, a.edge);
    }
    let to_sink: Vec<Vec<Option<i64>>> = (0..p)
        .map(|i| rev.shortest_paths(&[inst.pairs[i].1], None, |a, _| inst.allows(i, a)).dist)
        .collect();
    let mut tail = vec![0i64; p + 1];
    for i in (0..p).rev() {
        match to_sink[i][inst.pairs[i].0] {
            Some(d) => tail[i] = tail[i + 1] + d,
            None => return Ok(None),
        }
    }
    let mut used = vec![false; g.n + 1];
    for &(s, t) in &inst.pairs {
        used[s] = true;
        used[t] = true;
    }
    let mut s = Backtrack {
        inst,
        to_sink,
        tail,
        used,
        paths: vec![Vec::new(); p],
        best: None,
        stop_at_first: opts.stop_at_first,
        deadline: Instant::now() + opts.time_budget,
        steps: 0,
        timed_out: false,
    };
    s.start(0, 0);
    if s.timed_out {
        return Err(Error::LimitExceeded("disjoint path search time budget exhausted".into()));
    }
    Ok(s.best.map(|(paths, len)| exact_report(paths, len)))
}

struct Backtrack<'a> {
    inst: &'a LabVdpInstance,
    to_sink: Vec<Vec<Option<i64>>>,
    tail: Vec<i64>,
    used: Vec<bool>,
    paths: Vec<Vec<usize>>,
    best: Option<(Vec<Vec<usize>>, i64)>,
    stop_at_first: bool,
    deadline: Instant,
    steps: u64,
    timed_out: bool,
}

impl Backtrack<'_> {
    fn done(&self) -> bool {
        self.timed_out || (self.stop_at_first && self.best.is_some())
    }

    fn start(&mut self, i: usize, cost: i64) {
        if i == self.inst.pairs.len() {
            if self.best.as_ref().is_none_or(|b| cost < b.1) {
                self.best = Some((self.paths.clone(), cost));
            }
            return;
        }
        let s = self.inst.pairs[i].0;
        self.paths[i] = vec![s];
        self.extend(i, s, cost);
        self.paths[i].clear();
    }

    fn extend(&mut self, i: usize, v: usize, cost: i64) {
        self.steps += 1;
        if self.steps.is_multiple_of(4096) && Instant::now() > self.deadline {
            self.timed_out = true;
        }
        if self.done() {
            return;
        }
        let g = &self.inst.graph;
        let target = self.inst.pairs[i].1;
        let mut cands: Vec<(i64, usize, usize)> = Vec::new();
        for &a in &g.out[v] {
            let w = g.arcs[a].to;
            if !self.inst.allows(i, a) || (w != target && self.used[w]) {
                continue;
            }
            let Some(d) = self.to_sink[i][w] else { continue };
            let lb = cost + g.arcs[a].len + d + self.tail[i + 1];
            if self.best.as_ref().is_some_and(|b| lb >= b.1) {
                continue;
            }
            cands.push((g.arcs[a].len + d, w, a));
        }
        cands.sort_unstable();
        for (_, w, a) in cands {
            let step = self.inst.graph.arcs[a].len;
            self.paths[i].push(w);
            if w == target {
                self.start(i + 1, cost + step);
            } else {
                self.used[w] = true;
                self.extend(i, w, cost + step);
                self.used[w] = false;
            }
            self.paths[i].pop();
            if self.done() {
                return;
            }
        }
    }
}
