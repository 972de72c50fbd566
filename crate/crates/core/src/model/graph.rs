//! Integer-length arc lists with the handful of traversals every solver needs.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub len: i64,
    pub cap: u32,
    /// Index of the instance edge this arc comes from.
    pub edge: usize,
}

/// Directed view of a graph on vertices `1..=n` (index 0 is unused).
/// Undirected edges appear as two opposite arcs.
#[derive(Clone, Debug)]
pub struct ArcGraph {
    pub n: usize,
    pub arcs: Vec<Arc>,
    pub out: Vec<Vec<usize>>,
    pub inc: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct ShortestPaths {
    pub dist: Vec<Option<i64>>,
    pub pred: Vec<Option<usize>>,
}

impl ShortestPaths {
    /// Arc indices of the path from a source to `v`, in order.
    pub fn path_arcs(&self, g: &ArcGraph, v: usize) -> Vec<usize> {
        let mut arcs = Vec::new();
        let mut cur = v;
        while let Some(a) = self.pred[cur] {
            arcs.push(a);
            cur = g.arcs[a].from;
        }
        arcs.reverse();
        arcs
    }

    /// Vertex sequence of the path from a source to `v`.
    pub fn path_vertices(&self, g: &ArcGraph, v: usize) -> Vec<usize> {
        let arcs = self.path_arcs(g, v);
        let mut verts = Vec::with_capacity(arcs.len() + 1);
        match arcs.first() {
            Some(&a) => verts.push(g.arcs[a].from),
            None => verts.push(v),
        }
        verts.extend(arcs.iter().map(|&a| g.arcs[a].to));
        verts
    }
}

impl ArcGraph {
    pub fn new(n: usize) -> Self {
        ArcGraph {
            n,
            arcs: Vec::new(),
            out: vec![Vec::new(); n + 1],
            inc: vec![Vec::new(); n + 1],
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, len: i64, cap: u32, edge: usize) -> usize {
        let id = self.arcs.len();
        self.arcs.push(Arc {
            from,
            to,
            len,
            cap,
            edge,
        });
        self.out[from].push(id);
        self.inc[to].push(id);
        id
    }

    pub fn find_arc(&self, from: usize, to: usize) -> Option<usize> {
        self.out
            .get(from)?
            .iter()
            .copied()
            .find(|&a| self.arcs[a].to == to)
    }

    /// Multi-source Dijkstra. Vertices with `blocked[v]` are never entered
    /// (sources are always settled).
    pub fn shortest_paths<F>(&self, sources: &[usize], blocked: Option<&[bool]>, arc_ok: F) -> ShortestPaths
    where
        F: Fn(usize, &Arc) -> bool,
    {
        let mut dist: Vec<Option<i64>> = vec![None; self.n + 1];
        let mut pred = vec![None; self.n + 1];
        let mut heap = BinaryHeap::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                heap.push(Reverse((0i64, s)));
            }
        }
        while let Some(Reverse((d, u))) = heap.pop() {
            if dist[u] != Some(d) {
                continue;
            }
            for &a in &self.out[u] {
                let arc = &self.arcs[a];
                if blocked.is_some_and(|b| b[arc.to]) || !arc_ok(a, arc) {
                    continue;
                }
                let nd = d + arc.len;
                if dist[arc.to].is_none_or(|old| nd < old) {
                    dist[arc.to] = Some(nd);
                    pred[arc.to] = Some(a);
                    heap.push(Reverse((nd, arc.to)));
                }
            }
        }
        ShortestPaths { dist, pred }
    }

    /// Breadth-first search counting hops; deterministic in arc order.
    pub fn hop_paths<F>(&self, sources: &[usize], blocked: Option<&[bool]>, arc_ok: F) -> ShortestPaths
    where
        F: Fn(usize, &Arc) -> bool,
    {
        let mut dist: Vec<Option<i64>> = vec![None; self.n + 1];
        let mut pred = vec![None; self.n + 1];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for &a in &self.out[u] {
                let arc = &self.arcs[a];
                if dist[arc.to].is_some() || blocked.is_some_and(|b| b[arc.to]) || !arc_ok(a, arc) {
                    continue;
                }
                dist[arc.to] = Some(d + 1);
                pred[arc.to] = Some(a);
                queue.push_back(arc.to);
            }
        }
        ShortestPaths { dist, pred }
    }

    pub fn reachable_from(&self, sources: &[usize]) -> Vec<bool> {
        let sp = self.hop_paths(sources, None, |_, _| true);
        sp.dist.iter().map(Option::is_some).collect()
    }

    /// Kahn's algorithm; among available vertices the smallest id goes first.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        self.topological_order_by(|v| v as i64)
    }

    /// Kahn's algorithm with a custom priority (smallest key first).
    pub fn topological_order_by<K: Fn(usize) -> i64>(&self, key: K) -> Option<Vec<usize>> {
        let mut indeg: Vec<usize> = (0..=self.n).map(|v| self.inc[v].len()).collect();
        let mut heap = BinaryHeap::new();
        for v in 1..=self.n {
            if indeg[v] == 0 {
                heap.push(Reverse((key(v), v)));
            }
        }
        let mut order = Vec::with_capacity(self.n);
        while let Some(Reverse((_, u))) = heap.pop() {
            order.push(u);
            for &a in &self.out[u] {
                let w = self.arcs[a].to;
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    heap.push(Reverse((key(w), w)));
                }
            }
        }
        (order.len() == self.n).then_some(order)
    }
}
