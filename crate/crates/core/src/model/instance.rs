use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use super::graph::ArcGraph;
use super::solution::{FeasibilityReport, Violation, ViolationKind};
use crate::error::{Error, Result};

/// Exact edge length.
pub type Length = Ratio<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphKind {
    Digraph,
    Dag,
    Undirected,
}

impl GraphKind {
    pub fn is_directed(self) -> bool {
        !matches!(self, GraphKind::Undirected)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::Digraph => "digraph",
            GraphKind::Dag => "dag",
            GraphKind::Undirected => "undirected",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GraphKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "digraph" => Ok(GraphKind::Digraph),
            "dag" => Ok(GraphKind::Dag),
            "undirected" => Ok(GraphKind::Undirected),
            other => Err(format!("unknown graph kind `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: Length,
    pub capacity: u32,
}

impl Edge {
    pub fn new(u: usize, v: usize, length: impl Into<Length>, capacity: u32) -> Self {
        Edge {
            u,
            v,
            length: length.into(),
            capacity,
        }
    }
}

/// Problem input. Vertices are `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub kind: GraphKind,
    pub n: usize,
    pub edges: Vec<Edge>,
    pub root: usize,
    pub terminals: Vec<usize>,
}

impl Instance {
    pub fn new(kind: GraphKind, n: usize, edges: Vec<Edge>, root: usize, terminals: Vec<usize>) -> Self {
        Instance {
            kind,
            n,
            edges,
            root,
            terminals,
        }
    }

    /// Number of terminals.
    pub fn k(&self) -> usize {
        self.terminals.len()
    }

    pub fn c_min(&self) -> u32 {
        self.edges.iter().map(|e| e.capacity).min().unwrap_or(0)
    }

    pub fn c_max(&self) -> u32 {
        self.edges.iter().map(|e| e.capacity).max().unwrap_or(0)
    }

    pub fn uniform_capacity(&self) -> Option<u32> {
        let c = self.edges.first()?.capacity;
        self.edges.iter().all(|e| e.capacity == c).then_some(c)
    }

    pub fn all_lengths_zero(&self) -> bool {
        self.edges.iter().all(|e| e.length.is_zero())
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        self.terminals.contains(&v)
    }

    pub fn terminal_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n + 1];
        for &t in &self.terminals {
            if t <= self.n {
                mask[t] = true;
            }
        }
        mask
    }

    /// Least common multiple of the length denominators.
    pub fn length_scale(&self) -> i64 {
        self.edges
            .iter()
            .fold(1i64, |acc, e| acc.lcm(e.length.denom()))
    }

    /// Integer-length arc view; lengths are multiplied by [`Self::length_scale`].
    pub fn arc_graph(&self) -> ArcGraph {
        let scale = self.length_scale();
        let mut g = ArcGraph::new(self.n);
        for (i, e) in self.edges.iter().enumerate() {
            let len = (e.length * scale).to_integer();
            g.add_arc(e.u, e.v, len, e.capacity, i);
            if !self.kind.is_directed() {
                g.add_arc(e.v, e.u, len, e.capacity, i);
            }
        }
        g
    }

    /// Edge index usable as arc `(u, v)` under this instance's orientation rules.
    pub fn edge_for_arc(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.iter().position(|e| {
            (e.u == u && e.v == v) || (!self.kind.is_directed() && e.u == v && e.v == u)
        })
    }

    pub fn arc_index(&self) -> HashMap<(usize, usize), usize> {
        let mut map = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            map.entry((e.u, e.v)).or_insert(i);
            if !self.kind.is_directed() {
                map.entry((e.v, e.u)).or_insert(i);
            }
        }
        map
    }

    /// Number of incident edges per vertex (in plus out for directed graphs).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n + 1];
        for e in &self.edges {
            if e.u <= self.n && e.v <= self.n {
                deg[e.u] += 1;
                deg[e.v] += 1;
            }
        }
        deg
    }

    pub fn total_length(&self, arcs: &[(usize, usize)]) -> Option<Length> {
        let index = self.arc_index();
        arcs.iter().try_fold(Length::zero(), |acc, a| {
            index.get(a).map(|&i| acc + self.edges[i].length)
        })
    }
}

/// Checks the structural invariants of an instance.
pub fn validate_instance(inst: &Instance) -> FeasibilityReport {
    let mut violations = Vec::new();
    let mut malformed = |detail: String| {
        violations.push(Violation {
            kind: ViolationKind::Malformed,
            detail,
        })
    };
    if inst.n == 0 {
        malformed("graph has no vertices".into());
    }
    if inst.root == 0 || inst.root > inst.n {
        malformed(format!("root {} out of range", inst.root));
    }
    if inst.terminals.len() < 2 {
        malformed(format!("need at least 2 terminals, found {}", inst.terminals.len()));
    }
    let mut seen = BTreeSet::new();
    for &t in &inst.terminals {
        if t == 0 || t > inst.n {
            malformed(format!("terminal {t} out of range"));
        }
        if t == inst.root {
            malformed(format!("root {t} is also a terminal"));
        }
        if !seen.insert(t) {
            malformed(format!("terminal {t} listed twice"));
        }
    }
    let mut pairs = BTreeSet::new();
    for (i, e) in inst.edges.iter().enumerate() {
        if e.u == 0 || e.u > inst.n || e.v == 0 || e.v > inst.n {
            malformed(format!("edge {} ({}, {}) has an endpoint out of range", i + 1, e.u, e.v));
            continue;
        }
        if e.capacity == 0 {
            malformed(format!("edge {} ({}, {}): capacity must be positive", i + 1, e.u, e.v));
        }
        if e.length.is_negative() {
            malformed(format!("edge {} ({}, {}): length must be nonnegative", i + 1, e.u, e.v));
        }
        if e.u == e.v {
            malformed(format!("edge {} is a self-loop at {}", i + 1, e.u));
        }
        let key = if inst.kind.is_directed() {
            (e.u, e.v)
        } else {
            (e.u.min(e.v), e.u.max(e.v))
        };
        if !pairs.insert(key) {
            malformed(format!("edge {} ({}, {}) is parallel to an earlier edge", i + 1, e.u, e.v));
        }
    }
    if violations.is_empty() {
        let g = inst.arc_graph();
        if inst.kind == GraphKind::Dag && g.topological_order().is_none() {
            violations.push(Violation {
                kind: ViolationKind::Cycle,
                detail: "graph of kind dag contains a directed cycle".into(),
            });
        }
        let reach = g.reachable_from(&[inst.root]);
        for &t in &inst.terminals {
            if !reach[t] {
                violations.push(Violation {
                    kind: ViolationKind::UnreachableTerminal,
                    detail: format!("terminal {t} is not reachable from root {}", inst.root),
                });
            }
        }
    }
    FeasibilityReport::new(violations)
}

/// Structural validity only: unreachable terminals make an instance
/// infeasible, not invalid.
pub(crate) fn ensure_valid(inst: &Instance) -> Result<()> {
    let report = validate_instance(inst);
    match report.violations.iter().find(|v| v.kind != ViolationKind::UnreachableTerminal) {
        None => Ok(()),
        Some(v) => Err(Error::InvalidInstance(format!("{}: {}", v.kind, v.detail))),
    }
}

/// Result of [`normalize_terminals_mapped`]: the normalized instance plus the
/// correspondence between its vertices and the original ones.
#[derive(Clone, Debug)]
pub struct TerminalNormalization {
    pub instance: Instance,
    /// `to_original[v]` is the original id of new vertex `v`, or `None` for pendants.
    pub to_original: Vec<Option<usize>>,
}

impl TerminalNormalization {
    /// Maps arcs of the normalized instance back, dropping pendant arcs.
    pub fn lift_arcs(&self, arcs: &[(usize, usize)]) -> Vec<(usize, usize)> {
        arcs.iter()
            .filter_map(|&(a, b)| Some((self.to_original[a]?, self.to_original[b]?)))
            .collect()
    }

    pub fn new_id(&self, original: usize) -> Option<usize> {
        self.to_original.iter().position(|&o| o == Some(original))
    }
}

/// Makes every terminal a leaf and deletes useless leaves.
pub fn normalize_terminals(inst: &Instance) -> Instance {
    normalize_terminals_mapped(inst).instance
}

/// Like [`normalize_terminals`] but keeps the vertex correspondence.
///
/// Non-terminal, non-root vertices of degree at most one are removed
/// repeatedly (surviving vertices are renumbered in their original order).
/// Each terminal of degree other than one then receives a pendant vertex
/// joined by a capacity-1, length-0 edge, and the pendant replaces it in `T`.
pub fn normalize_terminals_mapped(inst: &Instance) -> TerminalNormalization {
    let is_term = inst.terminal_mask();
    let mut alive = vec![true; inst.n + 1];
    alive[0] = false;
    let mut edge_alive = vec![true; inst.edges.len()];
    loop {
        let mut deg = vec![0usize; inst.n + 1];
        for (i, e) in inst.edges.iter().enumerate() {
            if edge_alive[i] {
                deg[e.u] += 1;
                deg[e.v] += 1;
            }
        }
        let mut changed = false;
        for v in 1..=inst.n {
            if alive[v] && v != inst.root && !is_term[v] && deg[v] <= 1 {
                alive[v] = false;
                changed = true;
            }
        }
        for (i, e) in inst.edges.iter().enumerate() {
            if edge_alive[i] && (!alive[e.u] || !alive[e.v]) {
                edge_alive[i] = false;
            }
        }
        if !changed {
            break;
        }
    }
    let mut new_id = vec![0usize; inst.n + 1];
    let mut to_original = vec![None];
    for v in 1..=inst.n {
        if alive[v] {
            to_original.push(Some(v));
            new_id[v] = to_original.len() - 1;
        }
    }
    let mut edges: Vec<Edge> = inst
        .edges
        .iter()
        .enumerate()
        .filter(|(i, _)| edge_alive[*i])
        .map(|(_, e)| Edge {
            u: new_id[e.u],
            v: new_id[e.v],
            length: e.length,
            capacity: e.capacity,
        })
        .collect();
    let mut deg = vec![0usize; to_original.len()];
    for e in &edges {
        deg[e.u] += 1;
        deg[e.v] += 1;
    }
    let mut terminals = Vec::with_capacity(inst.terminals.len());
    for &t in &inst.terminals {
        let nt = new_id[t];
        if deg[nt] == 1 {
            terminals.push(nt);
        } else {
            to_original.push(None);
            let pendant = to_original.len() - 1;
            edges.push(Edge::new(nt, pendant, 0, 1));
            terminals.push(pendant);
        }
    }
    let n = to_original.len() - 1;
    TerminalNormalization {
        instance: Instance {
            kind: inst.kind,
            n,
            edges,
            root: new_id[inst.root],
            terminals,
        },
        to_original,
    }
}

/// Scales lengths to positive integers: positive lengths are multiplied by
/// `D·|E|` (`D` the lcm of the denominators), zero lengths become 1.
/// Returns the new instance and the factor `D·|E|`.
pub fn normalize_lengths(inst: &Instance) -> (Instance, Length) {
    let d = inst.length_scale();
    let factor = Length::from_integer(d * inst.edges.len().max(1) as i64);
    let mut out = inst.clone();
    for e in &mut out.edges {
        e.length = if e.length.is_zero() {
            Length::from_integer(1)
        } else {
            e.length * factor
        };
    }
    (out, factor)
}

/// Replaces each undirected edge by two opposite arcs.
pub fn to_digraph(inst: &Instance) -> Result<Instance> {
    if inst.kind.is_directed() {
        return Err(Error::Precondition(format!(
            "to_digraph expects an undirected instance, got {}",
            inst.kind
        )));
    }
    let mut edges = Vec::with_capacity(inst.edges.len() * 2);
    for e in &inst.edges {
        edges.push(e.clone());
        edges.push(Edge {
            u: e.v,
            v: e.u,
            length: e.length,
            capacity: e.capacity,
        });
    }
    Ok(Instance {
        kind: GraphKind::Digraph,
        edges,
        ..inst.clone()
    })
}
