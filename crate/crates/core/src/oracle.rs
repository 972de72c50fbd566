//! Exhaustive exact solvers for small instances.
//!
//! The capacitated oracle grows trees from the root by include/exclude
//! branching on frontier arcs. Every rooted subtree is generated at most
//! once; only inclusion-wise minimal trees are ever recorded.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::model::graph::ArcGraph;
use crate::model::instance::{ensure_valid, Instance};
use crate::model::solution::SteinerSolution;

#[derive(Clone, Debug)]
pub struct OracleLimits {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub time_budget: Duration,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_vertices: 12, max_edges: 24, time_budget: Duration::from_secs(60) }
    }
}

impl OracleLimits {
    pub fn new(max_vertices: usize, max_edges: usize) -> Self {
        OracleLimits { max_vertices, max_edges, ..Default::default() }
    }

    fn admit(&self, n: usize, m: usize) -> Result<()> {
        if n > self.max_vertices || m > self.max_edges {
            return Err(Error::LimitExceeded(format!(
                "instance has {n} vertices and {m} edges, oracle limit is {} and {}",
                self.max_vertices, self.max_edges
            )));
        }
        Ok(())
    }
}

/// Minimum-length feasible capacitated tree, `None` if there is none.
pub fn oracle_mlcst(inst: &Instance, lim: &OracleLimits) -> Result<Option<SteinerSolution>> {
    ensure_valid(inst)?;
    lim.admit(inst.n, inst.edges.len())?;
    match search(inst, lim, false)? {
        Some(arcs) => Ok(Some(SteinerSolution::from_arcs(inst, arcs)?)),
        None => Ok(None),
    }
}

/// Minimum-length rooted Steiner tree with capacities ignored.
pub fn oracle_steiner(inst: &Instance, lim: &OracleLimits) -> Result<SteinerSolution> {
    ensure_valid(inst)?;
    lim.admit(inst.n, inst.edges.len())?;
    let arcs = search(inst, lim, true)?.ok_or_else(|| {
        let reach = inst.arc_graph().reachable_from(&[inst.root]);
        let t = inst.terminals.iter().copied().find(|&t| !reach[t]).unwrap_or(inst.terminals[0]);
        Error::UnreachableTerminal(t)
    })?;
    SteinerSolution::from_arcs(inst, arcs)
}

fn search(inst: &Instance, lim: &OracleLimits, ignore_caps: bool) -> Result<Option<Vec<(usize, usize)>>> {
    let g = inst.arc_graph();
    let mut s = Search {
        term: inst.terminal_mask(),
        in_tree: vec![false; g.n + 1],
        parent_arc: vec![None; g.n + 1],
        children: vec![0; g.n + 1],
        load: vec![0; g.arcs.len()],
        excluded: vec![false; g.arcs.len()],
        covered: 0,
        k: inst.k(),
        cur: 0,
        tree: Vec::new(),
        best: None,
        ignore_caps,
        nodes: 0,
        deadline: Instant::now() + lim.time_budget,
        timed_out: false,
        g: &g,
    };
    s.in_tree[inst.root] = true;
    s.rec();
    if s.timed_out {
        return Err(Error::LimitExceeded("oracle time budget exhausted".into()));
    }
    Ok(s.best.map(|(_, arcs)| arcs.iter().map(|&a| (g.arcs[a].from, g.arcs[a].to)).collect()))
}

struct Search<'a> {
    g: &'a ArcGraph,
    term: Vec<bool>,
    in_tree: Vec<bool>,
    parent_arc: Vec<Option<usize>>,
    children: Vec<usize>,
    load: Vec<u32>,
    excluded: Vec<bool>,
    covered: usize,
    k: usize,
    cur: i64,
    tree: Vec<usize>,
    best: Option<(i64, Vec<usize>)>,
    ignore_caps: bool,
    nodes: u64,
    deadline: Instant,
    timed_out: bool,
}

impl Search<'_> {
    /// Spare capacity on the root path of `u`.
    fn residual(&self, u: usize) -> u32 {
        if self.ignore_caps {
            return u32::MAX;
        }
        let mut r = u32::MAX;
        let mut v = u;
        while let Some(a) = self.parent_arc[v] {
            r = r.min(self.g.arcs[a].cap - self.load[a]);
            v = self.g.arcs[a].from;
        }
        r
    }

    fn add_load(&mut self, v: usize, up: bool) {
        let mut x = v;
        while let Some(a) = self.parent_arc[x] {
            if up {
                self.load[a] += 1;
            } else {
                self.load[a] -= 1;
            }
            x = self.g.arcs[a].from;
        }
    }

    fn include(&mut self, a: usize) {
        let (u, v) = (self.g.arcs[a].from, self.g.arcs[a].to);
        self.in_tree[v] = true;
        self.parent_arc[v] = Some(a);
        self.children[u] += 1;
        self.cur += self.g.arcs[a].len;
        self.tree.push(a);
        if self.term[v] {
            self.covered += 1;
            if !self.ignore_caps {
                self.add_load(v, true);
            }
        }
    }

    fn remove(&mut self, a: usize) {
        let (u, v) = (self.g.arcs[a].from, self.g.arcs[a].to);
        if self.term[v] {
            self.covered -= 1;
            if !self.ignore_caps {
                self.add_load(v, false);
            }
        }
        self.tree.pop();
        self.cur -= self.g.arcs[a].len;
        self.children[u] -= 1;
        self.parent_arc[v] = None;
        self.in_tree[v] = false;
    }

    fn is_open_leaf(&self, v: usize) -> bool {
        self.parent_arc[v].is_some() && !self.term[v] && self.children[v] == 0
    }

    fn rec(&mut self) {
        if self.timed_out {
            return;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && Instant::now() > self.deadline {
            self.timed_out = true;
            return;
        }
        let g = self.g;
        if self.covered == self.k {
            if (1..=g.n).any(|v| self.is_open_leaf(v)) {
                return;
            }
            if self.best.as_ref().is_none_or(|b| self.cur < b.0) {
                self.best = Some((self.cur, self.tree.clone()));
            }
            return;
        }
        if self.best.as_ref().is_some_and(|b| b.0 == 0) {
            return;
        }
        let sources: Vec<usize> = (1..=g.n).filter(|&v| self.in_tree[v] && self.residual(v) >= 1).collect();
        let sp = g.shortest_paths(&sources, Some(&self.in_tree), |a, _| !self.excluded[a]);
        let mut lb = 0i64;
        let mut target: Option<(i64, usize)> = None;
        for t in 1..=g.n {
            if !self.term[t] || self.in_tree[t] {
                continue;
            }
            let Some(d) = sp.dist[t] else { return };
            lb = lb.max(d);
            if target.is_none_or(|(bd, _)| d < bd) {
                target = Some((d, t));
            }
        }
        if self.best.as_ref().is_some_and(|b| self.cur + lb >= b.0) {
            return;
        }
        // Every open leaf must still be able to grow towards an uncovered terminal.
        let alive = self.can_reach_uncovered();
        for v in 1..=g.n {
            if self.is_open_leaf(v) {
                let ok = self.residual(v) >= 1
                    && g.out[v].iter().any(|&a| !self.excluded[a] && alive[g.arcs[a].to]);
                if !ok {
                    return;
                }
            }
        }
        let (_, t) = target.expect("some terminal is uncovered");
        let mut a = sp.pred[t].expect("uncovered terminal has a predecessor");
        while !self.in_tree[g.arcs[a].from] {
            a = sp.pred[g.arcs[a].from].expect("path leads back to the tree");
        }
        self.include(a);
        self.rec();
        self.remove(a);
        self.excluded[a] = true;
        self.rec();
        self.excluded[a] = false;
    }

    /// Non-tree vertices that reach an uncovered terminal through non-tree vertices.
    fn can_reach_uncovered(&self) -> Vec<bool> {
        let g = self.g;
        let mut seen = vec![false; g.n + 1];
        let mut stack: Vec<usize> = (1..=g.n).filter(|&t| self.term[t] && !self.in_tree[t]).collect();
        for &t in &stack {
            seen[t] = true;
        }
        while let Some(v) = stack.pop() {
            for &a in &g.inc[v] {
                let u = g.arcs[a].from;
                if !seen[u] && !self.in_tree[u] && !self.excluded[a] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }
}

/// Vertex sequences and total length of an optimal disjoint path system.
pub type PathSystem = (Vec<Vec<usize>>, i64);

/// Minimum total length mutually vertex-disjoint paths `s_i -> s'_i` by plain DFS.
pub fn oracle_vdisj(g: &ArcGraph, pairs: &[(usize, usize)], lim: &OracleLimits) -> Result<Option<PathSystem>> {
    lim.admit(g.n, g.arcs.len())?;
    let mut endpoint = vec![false; g.n + 1];
    for &(s, t) in pairs {
        for x in [s, t] {
            if x == 0 || x > g.n || endpoint[x] {
                return Err(Error::Precondition("pairs must be distinct vertices of the graph".into()));
            }
            endpoint[x] = true;
        }
    }
    let mut st = Vdfs {
        g,
        pairs,
        used: endpoint,
        paths: vec![Vec::new(); pairs.len()],
        best: None,
        deadline: Instant::now() + lim.time_budget,
        timed_out: false,
        steps: 0,
    };
    st.pair(0, 0);
    if st.timed_out {
        return Err(Error::LimitExceeded("oracle time budget exhausted".into()));
    }
    Ok(st.best)
}

struct Vdfs<'a> {
    g: &'a ArcGraph,
    pairs: &'a [(usize, usize)],
    used: Vec<bool>,
    paths: Vec<Vec<usize>>,
    best: Option<PathSystem>,
    deadline: Instant,
    timed_out: bool,
    steps: u64,
}

impl Vdfs<'_> {
    fn pair(&mut self, i: usize, cost: i64) {
        if i == self.pairs.len() {
            if self.best.as_ref().is_none_or(|b| cost < b.1) {
                self.best = Some((self.paths.clone(), cost));
            }
            return;
        }
        let s = self.pairs[i].0;
        self.paths[i] = vec![s];
        self.walk(i, s, cost);
        self.paths[i].clear();
    }

    fn walk(&mut self, i: usize, v: usize, cost: i64) {
        self.steps += 1;
        if self.steps.is_multiple_of(4096) && Instant::now() > self.deadline {
            self.timed_out = true;
        }
        if self.timed_out || self.best.as_ref().is_some_and(|b| cost >= b.1) {
            return;
        }
        let target = self.pairs[i].1;
        for &a in &self.g.out[v] {
            let arc = &self.g.arcs[a];
            let w = arc.to;
            if w == target {
                self.paths[i].push(w);
                self.pair(i + 1, cost + arc.len);
                self.paths[i].pop();
            } else if !self.used[w] {
                self.used[w] = true;
                self.paths[i].push(w);
                self.walk(i, w, cost + arc.len);
                self.paths[i].pop();
                self.used[w] = false;
            }
        }
    }
}
