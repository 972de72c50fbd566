//! Instance generators built from hardness gadgets, with round-trip checks.
//!
//! Disjoint-paths instances map to capacitated Steiner instances with the
//! same optimum; CNF formulas map to instances that are feasible exactly
//! when the formula is satisfiable.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::graph::ArcGraph;
use crate::model::instance::{validate_instance, Edge, GraphKind, Instance, Length};
use crate::model::solution::{check_feasible_tree, SteinerSolution, ViolationKind};
use crate::oracle::{oracle_mlcst, oracle_vdisj, OracleLimits};

/// A CNF formula over variables `1..=vars`. Literals follow the DIMACS
/// convention: `i` for `x_i`, `-i` for its negation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    pub vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn new(vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self> {
        for (j, c) in clauses.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidInstance(format!("clause {} is empty", j + 1)));
            }
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > vars {
                    return Err(Error::InvalidInstance(format!("literal {l} in clause {} is out of range", j + 1)));
                }
            }
            if c.iter().map(|l| l.abs()).unique().count() != c.len() {
                return Err(Error::InvalidInstance(format!("clause {} repeats a variable", j + 1)));
            }
        }
        Ok(CnfFormula { vars, clauses })
    }

    /// `assignment[i]` is the value of `x_{i+1}`.
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    /// First satisfying assignment in binary counting order, by brute force.
    pub fn satisfying_assignment(&self) -> Option<Vec<bool>> {
        (0u64..1 << self.vars)
            .map(|m| (0..self.vars).map(|i| m >> i & 1 == 1).collect::<Vec<_>>())
            .find(|a| self.evaluate(a))
    }

    pub fn is_satisfiable(&self) -> bool {
        self.satisfying_assignment().is_some()
    }

    /// Occurrences of `x_i` and of its negation.
    pub fn occurrences(&self, var: usize) -> (usize, usize) {
        let lits = self.clauses.iter().flatten();
        let pos = lits.clone().filter(|&&l| l == var as i32).count();
        let neg = lits.filter(|&&l| l == -(var as i32)).count();
        (pos, neg)
    }

    /// At most 3 literals per clause, every variable in at most 3 clauses,
    /// every literal in at most 2.
    pub fn is_3sat3(&self) -> bool {
        self.clauses.iter().all(|c| c.len() <= 3)
            && (1..=self.vars).all(|i| {
                let (p, n) = self.occurrences(i);
                p + n <= 3 && p <= 2 && n <= 2
            })
    }

    /// Swaps `x_i` and its negation wherever the negation occurs more often.
    /// Returns the new formula and which variables were flipped.
    pub fn normalize_polarity(&self) -> (CnfFormula, Vec<bool>) {
        let flipped: Vec<bool> = (1..=self.vars).map(|i| {
            let (p, n) = self.occurrences(i);
            p < n
        }).collect();
        let clauses = self
            .clauses
            .iter()
            .map(|c| c.iter().map(|&l| if flipped[l.unsigned_abs() as usize - 1] { -l } else { l }).collect())
            .collect();
        (CnfFormula { vars: self.vars, clauses }, flipped)
    }
}

/// Every clause over `vars` variables: nonempty, distinct variables, at
/// most `max_len` literals, sorted by variable.
fn all_clauses(vars: usize, max_len: usize) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    for len in 1..=max_len.min(vars) {
        for vs in (1..=vars as i32).combinations(len) {
            for signs in 0u32..1 << len {
                out.push(vs.iter().enumerate().map(|(b, &v)| if signs >> b & 1 == 1 { -v } else { v }).collect());
            }
        }
    }
    out
}

/// All formulas with `1..=max_vars` variables, each occurring, and
/// `1..=max_clauses` pairwise distinct clauses.
pub fn all_formulas(max_vars: usize, max_clauses: usize) -> Vec<CnfFormula> {
    let mut out = Vec::new();
    for vars in 1..=max_vars {
        let clauses = all_clauses(vars, vars);
        for m in 1..=max_clauses {
            for pick in clauses.iter().combinations(m) {
                let f = CnfFormula { vars, clauses: pick.into_iter().cloned().collect() };
                if (1..=vars).all(|i| f.occurrences(i) != (0, 0)) {
                    out.push(f);
                }
            }
        }
    }
    out
}

/// All 3-SAT₃ formulas with `1..=max_vars` variables and `1..=max_clauses`
/// pairwise distinct clauses. Variables need not occur.
pub fn all_3sat3_formulas(max_vars: usize, max_clauses: usize) -> Vec<CnfFormula> {
    let mut out = Vec::new();
    for vars in 1..=max_vars {
        let clauses = all_clauses(vars, 3);
        for m in 1..=max_clauses {
            for pick in clauses.iter().combinations(m) {
                let f = CnfFormula { vars, clauses: pick.into_iter().cloned().collect() };
                if f.is_3sat3() {
                    out.push(f);
                }
            }
        }
    }
    out
}

/// Vertex-disjoint paths instance: link every `s_i` to `s'_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VdpInstance {
    pub kind: GraphKind,
    pub n: usize,
    /// `(u, v, length)`.
    pub edges: Vec<(usize, usize, i64)>,
    pub pairs: Vec<(usize, usize)>,
}

impl VdpInstance {
    pub fn new(kind: GraphKind, n: usize, edges: Vec<(usize, usize, i64)>, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let ends: Vec<usize> = pairs.iter().flat_map(|&(s, t)| [s, t]).collect();
        if ends.iter().any(|&v| v == 0 || v > n) || ends.iter().unique().count() != ends.len() {
            return Err(Error::InvalidInstance("pair endpoints must be distinct vertices".into()));
        }
        if edges.iter().any(|&(u, v, l)| u == 0 || v == 0 || u > n || v > n || u == v || l < 0) {
            return Err(Error::InvalidInstance("bad edge".into()));
        }
        Ok(VdpInstance { kind, n, edges, pairs })
    }

    pub fn p(&self) -> usize {
        self.pairs.len()
    }

    pub fn graph(&self) -> ArcGraph {
        let mut g = ArcGraph::new(self.n);
        for (i, &(u, v, l)) in self.edges.iter().enumerate() {
            g.add_arc(u, v, l, 1, i);
            if !self.kind.is_directed() {
                g.add_arc(v, u, l, 1, i);
            }
        }
        g
    }

    fn base_edges(&self, capacity: u32) -> Vec<Edge> {
        self.edges.iter().map(|&(u, v, l)| Edge::new(u, v, l, capacity)).collect()
    }
}

/// Random instance on `n` vertices with `p` pairs; edges drawn with
/// probability `density`, lengths 1 to 5. DAG edges go from lower to higher id.
pub fn random_vdp_instance(kind: GraphKind, n: usize, p: usize, density: f64, rng: &mut impl Rng) -> VdpInstance {
    assert!(2 * p <= n, "not enough vertices for {p} pairs");
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in 1..=n {
            let allowed = match kind {
                GraphKind::Digraph => u != v,
                _ => u < v,
            };
            if allowed && rng.gen_bool(density) {
                edges.push((u, v, rng.gen_range(1..=5)));
            }
        }
    }
    let mut verts: Vec<usize> = (1..=n).collect();
    for i in (1..verts.len()).rev() {
        verts.swap(i, rng.gen_range(0..=i));
    }
    let pairs = (0..p)
        .map(|i| {
            let (a, b) = (verts[2 * i], verts[2 * i + 1]);
            if kind == GraphKind::Dag && a > b { (b, a) } else { (a, b) }
        })
        .collect();
    VdpInstance { kind, n, edges, pairs }
}

/// Root with an arc of capacity `i` to every `s_i`, `i` terminals on every
/// `s'_i`, original edges of capacity `p`: `K = p(p+1)/2` and the optimum
/// equals the disjoint-paths optimum.
pub fn gen_from_vdp(v: &VdpInstance) -> Result<Instance> {
    let p = v.p();
    if p < 2 {
        return Err(Error::ParameterOutOfRange("need at least two pairs".into()));
    }
    let mut edges = v.base_edges(p as u32);
    let r = v.n + 1;
    let mut next = r + 1;
    let mut terminals = Vec::new();
    for (i, &(s, t)) in v.pairs.iter().enumerate() {
        edges.push(Edge::new(r, s, 0, i as u32 + 1));
        for _ in 0..=i {
            edges.push(Edge::new(t, next, 0, 1));
            terminals.push(next);
            next += 1;
        }
    }
    Ok(Instance::new(v.kind, next - 1, edges, r, terminals))
}

/// Two pairs, `K` terminals, uniform capacity `c` with `2 <= c <= K - 2`.
pub fn gen_from_vdp_uniform(v: &VdpInstance, k: usize, c: u32) -> Result<Instance> {
    if v.p() != 2 {
        return Err(Error::ParameterOutOfRange("need exactly two pairs".into()));
    }
    if k < 4 || c < 2 || c as usize > k - 2 {
        return Err(Error::ParameterOutOfRange(format!("need K >= 4 and 2 <= c <= K - 2, got K = {k}, c = {c}")));
    }
    let [(s1, t1), (s2, t2)] = [v.pairs[0], v.pairs[1]];
    let (r, hub) = (v.n + 1, v.n + 2);
    let term = |i: usize| v.n + 2 + i;
    let mut edges = v.base_edges(c);
    let mut link = |a: usize, b: usize| edges.push(Edge::new(a, b, 0, c));
    link(r, hub);
    link(r, s2);
    link(hub, s1);
    link(hub, term(1));
    link(t1, term(2));
    for i in 3..=c as usize + 2 {
        link(t2, term(i));
    }
    for i in c as usize + 3..=k {
        link(r, term(i));
    }
    Ok(Instance::new(v.kind, term(k), edges, r, (1..=k).map(term).collect()))
}

/// `p` pairs, `p²` terminals, uniform capacity `p`.
pub fn gen_from_vdp_squared(v: &VdpInstance) -> Result<Instance> {
    let p = v.p();
    if p < 2 {
        return Err(Error::ParameterOutOfRange("need at least two pairs".into()));
    }
    let c = p as u32;
    let r = v.n + 1;
    let hub = |i: usize| v.n + 1 + i; // v_1 .. v_{p-1}
    let term = |i: usize, j: usize| v.n + p + (i - 1) * p + j; // t_{i_j}
    let mut edges = v.base_edges(c);
    edges.push(Edge::new(r, v.pairs[p - 1].0, 0, c));
    for i in 1..p {
        edges.push(Edge::new(r, hub(i), 0, c));
        edges.push(Edge::new(hub(i), v.pairs[i - 1].0, 0, c));
    }
    for i in 1..=p {
        for j in 1..=p {
            let from = if j <= i { v.pairs[i - 1].1 } else { hub(i) };
            edges.push(Edge::new(from, term(i, j), 0, c));
        }
    }
    let terminals = (1..=p).flat_map(|i| (1..=p).map(move |j| term(i, j))).collect();
    Ok(Instance::new(v.kind, term(p, p), edges, r, terminals))
}

/// Image of a CNF formula under the variable/clause gadget construction,
/// with what is needed to translate assignments and trees.
#[derive(Clone, Debug)]
pub struct SatImage {
    pub instance: Instance,
    /// Variables whose polarity was swapped before building the gadget.
    pub flipped: Vec<bool>,
    /// Polarity-normalized formula the gadget encodes.
    pub formula: CnfFormula,
    /// Per variable: vertices of the positive path and of the negative path,
    /// both from `v_0` to `v_{2o+1}`.
    pub paths: Vec<(Vec<usize>, Vec<usize>)>,
    /// Per clause: `(u_1, u_2)`.
    pub clause_ends: Vec<(usize, usize)>,
    /// Per clause and literal: the literal and its capacity-2 edge `(a, b)`.
    pub clause_links: Vec<Vec<(i32, usize, usize)>>,
    pub t1: usize,
    pub hub_terminals: Vec<usize>,
    pub root_terminals: Vec<usize>,
}

/// Undirected gadget image: feasible exactly when `f` is satisfiable.
/// Capacity classes 1 and 2 become `c_min` and `c_min + 1`; terminal edges
/// get `c_min`, except the one at `t_1` which gets `c_max`.
pub fn gen_from_sat(f: &CnfFormula, k: usize, c_min: u32, c_max: u32) -> Result<Instance> {
    gen_from_sat_mapped(f, k, c_min, c_max).map(|img| img.instance)
}

pub fn gen_from_sat_mapped(f: &CnfFormula, k: usize, c_min: u32, c_max: u32) -> Result<SatImage> {
    if k < 3 || c_min < 1 || c_min as usize > k - 2 || c_max <= c_min {
        return Err(Error::ParameterOutOfRange(format!(
            "need K >= 3, 1 <= c_min <= K - 2 and c_max > c_min, got K = {k}, c_min = {c_min}, c_max = {c_max}"
        )));
    }
    let f = CnfFormula::new(f.vars, f.clauses.clone())?;
    let (g, flipped) = f.normalize_polarity();
    if let Some(i) = (1..=g.vars).find(|&i| g.occurrences(i) == (0, 0)) {
        return Err(Error::InvalidInstance(format!("variable {i} does not occur")));
    }
    let (c1, c2) = (c_min, c_min + 1);
    let mut n = 1; // root
    let mut fresh = || {
        n += 1;
        n
    };
    let mut edges = Vec::new();
    let mut paths = Vec::new();
    for i in 1..=g.vars {
        let (o, ob) = g.occurrences(i);
        let v0 = fresh();
        let pos_inner: Vec<usize> = (0..2 * o).map(|_| fresh()).collect();
        let neg_inner: Vec<usize> = (0..2 * ob).map(|_| fresh()).collect();
        let end = fresh();
        let pos: Vec<usize> = std::iter::once(v0).chain(pos_inner).chain([end]).collect();
        let neg: Vec<usize> = std::iter::once(v0).chain(neg_inner).chain([end]).collect();
        // odd-to-even steps carry class 2, the rest class 1
        for p in [&pos, &neg] {
            for (s, w) in p.windows(2).enumerate() {
                let cap = if s % 2 == 1 { c2 } else { c1 };
                edges.push(Edge::new(w[0], w[1], 0, cap));
            }
        }
        paths.push((pos, neg));
    }
    for w in paths.windows(2) {
        edges.push(Edge::new(*w[0].0.last().unwrap(), w[1].0[0], 0, c1));
    }
    let mut seen: BTreeMap<i32, usize> = BTreeMap::new();
    let mut clause_ends = Vec::new();
    let mut clause_links = Vec::new();
    for c in &g.clauses {
        let (u1, u2) = (fresh(), fresh());
        let mut links = Vec::new();
        for &l in c {
            let ell = *seen.entry(l).and_modify(|x| *x += 1).or_insert(1);
            let (pos, neg) = &paths[l.unsigned_abs() as usize - 1];
            let path = if l > 0 { pos } else { neg };
            let (a, b) = (path[2 * ell - 1], path[2 * ell]);
            edges.push(Edge::new(u1, a, 0, c2));
            edges.push(Edge::new(b, u2, 0, c2));
            links.push((l, a, b));
        }
        clause_ends.push((u1, u2));
        clause_links.push(links);
    }
    for w in clause_ends.windows(2) {
        edges.push(Edge::new(w[0].1, w[1].0, 0, c2));
    }
    let root = 1;
    edges.push(Edge::new(root, paths[0].0[0], 0, c1));
    edges.push(Edge::new(root, clause_ends[0].0, 0, c2));
    let t1 = fresh();
    edges.push(Edge::new(*paths.last().unwrap().0.last().unwrap(), t1, 0, c_max));
    let hub = clause_ends.last().unwrap().1;
    let hub_terminals: Vec<usize> = (0..=c_min).map(|_| fresh()).collect();
    for &t in &hub_terminals {
        edges.push(Edge::new(hub, t, 0, c1));
    }
    let root_terminals: Vec<usize> = (0..k - c_min as usize - 2).map(|_| fresh()).collect();
    for &t in &root_terminals {
        edges.push(Edge::new(root, t, 0, c1));
    }
    let terminals = std::iter::once(t1).chain(hub_terminals.iter().copied()).chain(root_terminals.iter().copied()).collect();
    let instance = Instance::new(GraphKind::Undirected, n, edges, root, terminals);
    Ok(SatImage { instance, flipped, formula: g, paths, clause_ends, clause_links, t1, hub_terminals, root_terminals })
}

impl SatImage {
    /// The tree the construction associates with a satisfying assignment of
    /// the original formula; `None` if it does not satisfy it.
    pub fn solution_for(&self, assignment: &[bool]) -> Option<SteinerSolution> {
        let tau: Vec<bool> = assignment.iter().zip(&self.flipped).map(|(&a, &f)| a != f).collect();
        if !self.formula.evaluate(&tau) {
            return None;
        }
        let root = self.instance.root;
        let mut arcs = Vec::new();
        let mut prev = root;
        for (i, (pos, neg)) in self.paths.iter().enumerate() {
            // a true variable leaves its positive path to the clauses
            let path = if tau[i] { neg } else { pos };
            arcs.push((prev, path[0]));
            arcs.extend(path.windows(2).map(|w| (w[0], w[1])));
            prev = *path.last().unwrap();
        }
        arcs.push((prev, self.t1));
        let mut prev = root;
        for (&(u1, u2), links) in self.clause_ends.iter().zip(&self.clause_links) {
            let &(_, a, b) = links.iter().find(|(l, _, _)| tau[l.unsigned_abs() as usize - 1] == (*l > 0))?;
            arcs.extend([(prev, u1), (u1, a), (a, b), (b, u2)]);
            prev = u2;
        }
        arcs.extend(self.hub_terminals.iter().map(|&t| (prev, t)));
        arcs.extend(self.root_terminals.iter().map(|&t| (root, t)));
        SteinerSolution::from_arcs(&self.instance, arcs).ok()
    }

    /// Reads an assignment of the original formula off a feasible tree: a
    /// variable is false when the path to `t_1` runs through its positive path.
    pub fn decode(&self, sol: &SteinerSolution) -> Vec<bool> {
        self.paths
            .iter()
            .zip(&self.flipped)
            .map(|((pos, _), &f)| {
                let on_pos = sol.arcs.contains(&(pos[0], pos[1]));
                !on_pos != f
            })
            .collect()
    }
}

/// Image of a 3-SAT₃ formula with uniform capacity.
#[derive(Clone, Debug)]
pub struct ThreeSatImage {
    pub instance: Instance,
    /// Per variable: `(v_i, v̄_i, s_i)`.
    pub literal_vertices: Vec<(usize, usize, usize)>,
    /// Per variable: `TV_{i,1..c}`.
    pub variable_terminals: Vec<Vec<usize>>,
    /// Per clause: `TC_j`.
    pub clause_terminals: Vec<usize>,
}

/// DAG or undirected image with uniform capacity `c >= 2`: feasible exactly
/// when `f` is satisfiable. `K = c·ξ + ν`.
pub fn gen_from_3sat3(f: &CnfFormula, c: u32, kind: GraphKind) -> Result<Instance> {
    gen_from_3sat3_mapped(f, c, kind).map(|img| img.instance)
}

pub fn gen_from_3sat3_mapped(f: &CnfFormula, c: u32, kind: GraphKind) -> Result<ThreeSatImage> {
    if c < 2 {
        return Err(Error::ParameterOutOfRange(format!("capacity must be at least 2, got {c}")));
    }
    if kind == GraphKind::Digraph {
        return Err(Error::ParameterOutOfRange("image is a DAG or undirected".into()));
    }
    let f = CnfFormula::new(f.vars, f.clauses.clone())?;
    if !f.is_3sat3() {
        return Err(Error::InvalidInstance("formula exceeds the 3-SAT₃ occurrence limits".into()));
    }
    let root = 1;
    let mut n = 1;
    let mut edges = Vec::new();
    let mut literal_vertices = Vec::new();
    let mut variable_terminals = Vec::new();
    for _ in 0..f.vars {
        let (v, vb, s) = (n + 1, n + 2, n + 3);
        n += 3;
        for (a, b) in [(root, v), (root, vb), (v, s), (vb, s)] {
            edges.push(Edge::new(a, b, 0, c));
        }
        let tv: Vec<usize> = (1..=c as usize).map(|k| n + k).collect();
        n += c as usize;
        edges.extend(tv.iter().map(|&t| Edge::new(s, t, 0, c)));
        literal_vertices.push((v, vb, s));
        variable_terminals.push(tv);
    }
    let mut clause_terminals = Vec::new();
    for cl in &f.clauses {
        n += 1;
        for &l in cl {
            let (v, vb, _) = literal_vertices[l.unsigned_abs() as usize - 1];
            edges.push(Edge::new(if l > 0 { v } else { vb }, n, 0, c));
        }
        clause_terminals.push(n);
    }
    let terminals = variable_terminals.iter().flatten().copied().chain(clause_terminals.iter().copied()).collect();
    Ok(ThreeSatImage { instance: Instance::new(kind, n, edges, root, terminals), literal_vertices, variable_terminals, clause_terminals })
}

impl ThreeSatImage {
    /// The spanning tree associated with a satisfying assignment.
    pub fn solution_for(&self, f: &CnfFormula, assignment: &[bool]) -> Option<SteinerSolution> {
        if !f.evaluate(assignment) {
            return None;
        }
        let root = self.instance.root;
        let mut arcs = Vec::new();
        for (i, &(v, vb, s)) in self.literal_vertices.iter().enumerate() {
            arcs.extend([(root, v), (root, vb), (if assignment[i] { vb } else { v }, s)]);
            arcs.extend(self.variable_terminals[i].iter().map(|&t| (s, t)));
        }
        for (cl, &tc) in f.clauses.iter().zip(&self.clause_terminals) {
            let &l = cl.iter().find(|&&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))?;
            let (v, vb, _) = self.literal_vertices[l.unsigned_abs() as usize - 1];
            arcs.push((if l > 0 { v } else { vb }, tc));
        }
        SteinerSolution::from_arcs(&self.instance, arcs).ok()
    }

    /// Reads an assignment off a feasible tree from the parents of the
    /// clause terminals; unassigned variables are true.
    pub fn decode(&self, sol: &SteinerSolution) -> Vec<bool> {
        let mut tau = vec![true; self.literal_vertices.len()];
        for &tc in &self.clause_terminals {
            if let Some(&(p, _)) = sol.arcs.iter().find(|a| a.1 == tc) {
                if let Some(i) = self.literal_vertices.iter().position(|&(v, vb, _)| p == v || p == vb) {
                    tau[i] = p == self.literal_vertices[i].0;
                }
            }
        }
        tau
    }
}

/// What a round trip compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Optimum,
    Feasibility,
}

/// The source side of a reduction.
#[derive(Clone, Copy, Debug)]
pub enum Base<'a> {
    Vdp(&'a VdpInstance, Equivalence),
    Sat(&'a CnfFormula),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTrip {
    pub base_feasible: bool,
    pub image_feasible: bool,
    pub base_value: Option<Length>,
    pub image_value: Option<Length>,
    pub holds: bool,
    /// Satisfying assignment of a formula, when there is one.
    pub assignment: Option<Vec<bool>>,
}

/// Solves both sides exactly and checks the reduction's equivalence.
pub fn verify_roundtrip(base: Base<'_>, image: &Instance, lim: &OracleLimits) -> Result<RoundTrip> {
    let report = validate_instance(image);
    if report.violations.iter().any(|v| v.kind != ViolationKind::UnreachableTerminal) {
        return Err(Error::InvalidInstance(format!("image is malformed: {:?}", report.violations)));
    }
    let img = oracle_mlcst(image, lim)?;
    if let Some(s) = &img {
        debug_assert!(check_feasible_tree(image, s).ok);
    }
    let image_value = img.as_ref().map(|s| s.total_length);
    Ok(match base {
        Base::Vdp(v, eq) => {
            let base_lim = OracleLimits { max_vertices: lim.max_vertices.max(v.n), max_edges: lim.max_edges.max(v.edges.len()), ..lim.clone() };
            let b = oracle_vdisj(&v.graph(), &v.pairs, &base_lim)?;
            let base_value = b.map(|(_, len)| Length::from_integer(len));
            let holds = match eq {
                Equivalence::Optimum => base_value == image_value,
                Equivalence::Feasibility => base_value.is_some() == image_value.is_some(),
            };
            RoundTrip { base_feasible: base_value.is_some(), image_feasible: img.is_some(), base_value, image_value, holds, assignment: None }
        }
        Base::Sat(f) => {
            let assignment = f.satisfying_assignment();
            RoundTrip {
                base_feasible: assignment.is_some(),
                image_feasible: img.is_some(),
                base_value: None,
                image_value,
                holds: assignment.is_some() == img.is_some(),
                assignment,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(vars: usize, clauses: &[&[i32]]) -> CnfFormula {
        CnfFormula::new(vars, clauses.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    fn two_pair_path() -> VdpInstance {
        // 1 -> 2 and 3 -> 4 with a shared shortcut through 5
        VdpInstance::new(GraphKind::Undirected, 5, vec![(1, 2, 4), (3, 4, 4), (1, 5, 1), (5, 2, 1), (3, 5, 1), (5, 4, 1)], vec![(1, 2), (3, 4)])
            .unwrap()
    }

    #[test]
    fn vdp_image_sizes() {
        let v = VdpInstance::new(GraphKind::Digraph, 6, vec![(1, 2, 1), (3, 4, 1), (5, 6, 1)], vec![(1, 2), (3, 4), (5, 6)]).unwrap();
        let img = gen_from_vdp(&v).unwrap();
        assert_eq!(img.k(), 6);
        let mut root_caps: Vec<u32> = img.edges.iter().filter(|e| e.u == img.root).map(|e| e.capacity).collect();
        root_caps.sort_unstable();
        assert_eq!(root_caps, vec![1, 2, 3]);
        assert!(validate_instance(&img).ok);
        let one = VdpInstance::new(GraphKind::Digraph, 2, vec![(1, 2, 1)], vec![(1, 2)]).unwrap();
        assert!(gen_from_vdp(&one).is_err());
    }

    #[test]
    fn vdp_uniform_wiring() {
        let v = two_pair_path();
        let img = gen_from_vdp_uniform(&v, 4, 2).unwrap();
        assert_eq!(img.k(), 4);
        assert!(img.edges.iter().all(|e| e.capacity == 2));
        // t3, t4 hang on s'_2 = 4
        assert_eq!(img.edges.iter().filter(|e| e.u == 4 && img.is_terminal(e.v)).count(), 2);
        let img5 = gen_from_vdp_uniform(&v, 5, 3).unwrap();
        assert_eq!(img5.edges.iter().filter(|e| e.u == img5.root && img5.is_terminal(e.v)).count(), 0);
        assert!(gen_from_vdp_uniform(&v, 4, 3).is_err());
    }

    #[test]
    fn vdp_squared_sizes() {
        let v = two_pair_path();
        let img = gen_from_vdp_squared(&v).unwrap();
        assert_eq!(img.k(), 4);
        assert!(img.edges.iter().all(|e| e.capacity == 2));
        assert!(validate_instance(&img).ok);
    }

    #[test]
    fn vdp_optimum_carries_over() {
        let v = two_pair_path();
        let lim = OracleLimits::new(12, 24);
        let rt = verify_roundtrip(Base::Vdp(&v, Equivalence::Optimum), &gen_from_vdp(&v).unwrap(), &lim).unwrap();
        assert!(rt.holds);
        assert_eq!(rt.base_value, Some(Length::from_integer(6)));
    }

    #[test]
    fn worked_sat_example() {
        let phi = f(3, &[&[1, -2], &[1, 2, 3], &[-1, 2, -3]]);
        let img = gen_from_sat_mapped(&phi, 3, 1, 2).unwrap();
        assert!(validate_instance(&img.instance).ok);
        let sol = img.solution_for(&[true, true, false]).unwrap();
        assert!(check_feasible_tree(&img.instance, &sol).ok);
        assert_eq!(img.decode(&sol), vec![true, true, false]);
        assert!(img.solution_for(&[false, false, false]).is_none());
    }

    #[test]
    fn contradiction_has_no_tree() {
        let phi = f(1, &[&[1], &[-1]]);
        let img = gen_from_sat(&phi, 3, 1, 2).unwrap();
        assert!(oracle_mlcst(&img, &OracleLimits::new(20, 40)).unwrap().is_none());
    }

    #[test]
    fn worked_3sat3_example() {
        let phi = f(4, &[&[1, -2, 3], &[-2, -3, 4]]);
        for kind in [GraphKind::Dag, GraphKind::Undirected] {
            let img = gen_from_3sat3_mapped(&phi, 2, kind).unwrap();
            assert_eq!(img.instance.k(), 2 * 4 + 2);
            assert!(validate_instance(&img.instance).ok);
            let sol = img.solution_for(&phi, &[true, false, false, true]).unwrap();
            assert!(check_feasible_tree(&img.instance, &sol).ok);
            assert!(phi.evaluate(&img.decode(&sol)));
        }
    }

    #[test]
    fn polarity_normalization() {
        let phi = f(2, &[&[-1, 2], &[-1]]);
        let (g, flipped) = phi.normalize_polarity();
        assert_eq!(flipped, vec![true, false]);
        assert_eq!(g.clauses, vec![vec![1, 2], vec![1]]);
    }

    #[test]
    fn formula_counts() {
        // one variable: {x}, {¬x}, {x, ¬x as two clauses}
        assert_eq!(all_formulas(1, 3).len(), 3);
        assert!(all_3sat3_formulas(2, 2).iter().all(CnfFormula::is_3sat3));
    }
}
