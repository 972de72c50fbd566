//! Labelled-tree and potential-skeleton enumeration.

use std::sync::Arc;

use itertools::Itertools;

use crate::model::instance::Instance;
use crate::model::skeleton::Skeleton;

pub use crate::model::skeleton::{l_min_bound, skeleton_bounds};

/// A candidate skeleton together with the graph vertices chosen as junctions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PotentialSkeleton {
    pub skeleton: Skeleton,
    pub junction_choice: Vec<usize>,
}

/// Decodes a Prüfer sequence over positions `0..m` into undirected edges.
fn prufer_decode(seq: &[usize], m: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; m];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(m - 1);
    for &x in seq {
        let leaf = (0..m).find(|&i| degree[i] == 1).expect("a leaf always exists");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let last: Vec<usize> = (0..m).filter(|&i| degree[i] == 1).collect();
    edges.push((last[0], last[1]));
    edges
}

/// Orients an undirected tree on positions away from position `root`.
fn orient(edges: &[(usize, usize)], m: usize, root: usize) -> Vec<(usize, usize)> {
    let mut adj = vec![Vec::new(); m];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; m];
    let mut out = Vec::with_capacity(m - 1);
    let mut stack = vec![root];
    seen[root] = true;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                out.push((u, w));
                stack.push(w);
            }
        }
    }
    out
}

/// Every labelled tree on `vertices`, oriented away from `orient_from`.
/// There are `m^(m-2)` of them for `m` vertices.
pub fn enumerate_labelled_trees(vertices: &[usize], orient_from: usize) -> impl Iterator<Item = Vec<(usize, usize)>> + '_ {
    let m = vertices.len();
    assert!(m >= 2, "need at least two vertices");
    let root = vertices.iter().position(|&v| v == orient_from).expect("orient_from is one of the vertices");
    (0..m - 2)
        .map(|_| 0..m)
        .multi_cartesian_product()
        .chain(std::iter::once(Vec::new()).filter(move |_| m == 2))
        .map(move |seq| {
            orient(&prufer_decode(&seq, m), m, root)
                .into_iter()
                .map(|(a, b)| (vertices[a], vertices[b]))
                .collect()
        })
}

/// Prüfer sequences of length `len` over `0..=j` in which every symbol
/// `1..=j` appears at least twice (symbol 0 is the root).
fn junction_patterns(j: usize, len: usize) -> Vec<Vec<usize>> {
    fn rec(j: usize, len: usize, seq: &mut Vec<usize>, count: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let missing: usize = (1..=j).map(|s| 2usize.saturating_sub(count[s])).sum();
        if missing > len - seq.len() {
            return;
        }
        if seq.len() == len {
            out.push(seq.clone());
            return;
        }
        for s in 0..=j {
            seq.push(s);
            count[s] += 1;
            rec(j, len, seq, count, out);
            count[s] -= 1;
            seq.pop();
        }
    }
    let mut out = Vec::new();
    rec(j, len, &mut Vec::new(), &mut vec![0; j + 1], &mut out);
    out
}

/// Graph vertices that may serve as junctions: degree at least 3, neither
/// the root nor a terminal. In directed graphs a junction also needs an
/// entering arc and two leaving ones.
pub fn junction_candidates(inst: &Instance) -> Vec<usize> {
    let deg = inst.degrees();
    let (mut indeg, mut outdeg) = (vec![0usize; inst.n + 1], vec![0usize; inst.n + 1]);
    for e in &inst.edges {
        outdeg[e.u] += 1;
        indeg[e.v] += 1;
    }
    let directed = inst.kind.is_directed();
    (1..=inst.n)
        .filter(|&v| v != inst.root && !inst.is_terminal(v) && deg[v] >= 3)
        .filter(|&v| !directed || (indeg[v] >= 1 && outdeg[v] >= 2))
        .collect()
}

/// Every potential skeleton spanning `terminal_subset`: up to `|subset| - 1`
/// junctions among [`junction_candidates`], trees in which only terminals are
/// leaves besides possibly the root and every junction has degree at least 3.
pub fn enumerate_potential_skeletons<'a>(
    inst: &'a Instance,
    terminal_subset: &'a [usize],
) -> impl Iterator<Item = PotentialSkeleton> + 'a {
    enumerate_potential_skeletons_bounded(inst, terminal_subset, terminal_subset.len().saturating_sub(1))
}

/// As [`enumerate_potential_skeletons`] with at most `max_junctions` junctions.
pub fn enumerate_potential_skeletons_bounded<'a>(
    inst: &'a Instance,
    terminal_subset: &'a [usize],
    max_junctions: usize,
) -> impl Iterator<Item = PotentialSkeleton> + 'a {
    let k = terminal_subset.len();
    let cands = junction_candidates(inst);
    let jmax = max_junctions.min(cands.len()).min(k.saturating_sub(1));
    let root = inst.root;
    let is_term = move |v: usize| terminal_subset.contains(&v);
    (0..=jmax).filter(move |_| k >= 1).flat_map(move |j| {
        let patterns = Arc::new(junction_patterns(j, k + j - 1));
        cands.clone().into_iter().combinations(j).flat_map(move |junctions| {
            let mut verts = vec![root];
            verts.extend(&junctions);
            verts.extend(terminal_subset);
            let m = verts.len();
            let patterns = Arc::clone(&patterns);
            (0..patterns.len()).map(move |i| {
                let arcs: Vec<(usize, usize)> = orient(&prufer_decode(&patterns[i], m), m, 0)
                    .into_iter()
                    .map(|(a, b)| (verts[a], verts[b]))
                    .collect();
                PotentialSkeleton {
                    skeleton: Skeleton::from_arcs(root, arcs, is_term).expect("decoded Prüfer sequence is a tree"),
                    junction_choice: junctions.clone(),
                }
            })
        })
    })
}

/// Every way to split `items` into between `lo` and `hi` unordered nonempty blocks.
fn set_partitions(items: &[usize], lo: usize, hi: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(items: &[usize], hi: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>, lo: usize) {
        let Some((&x, rest)) = items.split_first() else {
            if blocks.len() >= lo {
                out.push(blocks.clone());
            }
            return;
        };
        for i in 0..blocks.len() {
            blocks[i].push(x);
            rec(rest, hi, blocks, out, lo);
            blocks[i].pop();
        }
        if blocks.len() < hi {
            blocks.push(vec![x]);
            rec(rest, hi, blocks, out, lo);
            blocks.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, hi, &mut Vec::new(), &mut out, lo);
    out
}

struct Bounded<'a> {
    root: usize,
    cands: Vec<usize>,
    /// `reach[u][v]`; `None` on undirected graphs.
    reach: Option<Vec<Vec<bool>>>,
    max_children: usize,
    max_height: usize,
    subset: &'a [usize],
    used: Vec<bool>,
    arcs: Vec<(usize, usize)>,
    junctions: Vec<usize>,
    out: Vec<PotentialSkeleton>,
}

/// A vertex still waiting for children: it must end up above `block`.
struct Pending {
    v: usize,
    block: Vec<usize>,
    depth: usize,
}

impl Bounded<'_> {
    fn reaches(&self, u: usize, v: usize) -> bool {
        self.reach.as_ref().is_none_or(|r| r[u][v])
    }

    fn next(&mut self, todo: &mut Vec<Pending>) {
        let Some(p) = todo.pop() else {
            let subset = self.subset;
            let skeleton = Skeleton::from_arcs(self.root, self.arcs.clone(), |v| subset.contains(&v)).expect("grown as a tree");
            let mut junction_choice = self.junctions.clone();
            junction_choice.sort_unstable();
            self.out.push(PotentialSkeleton { skeleton, junction_choice });
            return;
        };
        let lo = if p.v == self.root { 1 } else { 2 };
        for blocks in set_partitions(&p.block, lo, self.max_children) {
            self.place(&p, &blocks, todo);
        }
        todo.push(p);
    }

    fn place(&mut self, p: &Pending, blocks: &[Vec<usize>], todo: &mut Vec<Pending>) {
        let Some((b, rest)) = blocks.split_first() else {
            self.next(todo);
            return;
        };
        let depth = p.depth + 1;
        if let [t] = b[..] {
            if depth <= self.max_height && self.reaches(p.v, t) {
                self.arcs.push((p.v, t));
                self.place(p, rest, todo);
                self.arcs.pop();
            }
            return;
        }
        if depth >= self.max_height {
            return;
        }
        for i in 0..self.cands.len() {
            let c = self.cands[i];
            if self.used[i] || !self.reaches(p.v, c) {
                continue;
            }
            self.used[i] = true;
            self.arcs.push((p.v, c));
            self.junctions.push(c);
            todo.push(Pending { v: c, block: b.clone(), depth });
            self.place(p, rest, todo);
            todo.pop();
            self.junctions.pop();
            self.arcs.pop();
            self.used[i] = false;
        }
    }
}

/// Potential skeletons spanning `terminal_subset` in which every vertex has
/// at most `max_children` children and every leaf lies at depth at most
/// `max_height`. Built top-down, so only these shapes are ever generated; in
/// directed graphs an arc `(u, v)` is only used when `u` reaches `v`.
/// Same trees as filtering [`enumerate_potential_skeletons`], in another order.
pub fn enumerate_bounded_skeletons(
    inst: &Instance,
    terminal_subset: &[usize],
    max_children: usize,
    max_height: usize,
) -> Vec<PotentialSkeleton> {
    if terminal_subset.is_empty() || max_children == 0 {
        return Vec::new();
    }
    let g = inst.arc_graph();
    let reach = inst
        .kind
        .is_directed()
        .then(|| (0..=inst.n).map(|u| if u == 0 { Vec::new() } else { g.reachable_from(&[u]) }).collect());
    let cands = junction_candidates(inst);
    let mut b = Bounded {
        root: inst.root,
        used: vec![false; cands.len()],
        cands,
        reach,
        max_children,
        max_height,
        subset: terminal_subset,
        arcs: Vec::new(),
        junctions: Vec::new(),
        out: Vec::new(),
    };
    let mut todo = vec![Pending { v: inst.root, block: terminal_subset.to_vec(), depth: 0 }];
    b.next(&mut todo);
    b.out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::instance::{Edge, GraphKind};
    use std::collections::HashSet;

    #[test]
    fn cayley_counts() {
        for (m, expect) in [(2usize, 1usize), (3, 3), (4, 16), (5, 125)] {
            let verts: Vec<usize> = (1..=m).collect();
            let trees: HashSet<Vec<(usize, usize)>> = enumerate_labelled_trees(&verts, 1)
                .map(|mut t| {
                    t.sort_unstable();
                    t
                })
                .collect();
            assert_eq!(trees.len(), expect, "m = {m}");
        }
    }

    #[test]
    fn path_graph_single_arc() {
        let inst = Instance::new(GraphKind::Undirected, 2, vec![Edge::new(1, 2, 1, 1)], 1, vec![2]);
        let all: Vec<_> = enumerate_potential_skeletons(&inst, &[2]).collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].skeleton.arcs, vec![(1, 2)]);
    }

    #[test]
    fn star_and_hub() {
        // root 1, hub 4 adjacent to both terminals and the root
        let edges = vec![Edge::new(1, 2, 1, 1), Edge::new(1, 3, 1, 1), Edge::new(1, 4, 1, 1), Edge::new(4, 5, 1, 1), Edge::new(4, 6, 1, 1)];
        let inst = Instance::new(GraphKind::Digraph, 6, edges, 1, vec![5, 6]);
        let all: Vec<_> = enumerate_potential_skeletons(&inst, &[5, 6]).collect();
        let arcsets: Vec<_> = all.iter().map(|p| p.skeleton.arcs.clone()).collect();
        assert!(arcsets.contains(&vec![(1, 5), (1, 6)]));
        assert!(arcsets.contains(&vec![(1, 4), (4, 5), (4, 6)]));
        assert_eq!(all.len(), 2);
        let distinct: HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
    }

    #[test]
    fn bounded_matches_filtered_generic() {
        use crate::suite::{suite, CapMode, InstanceSpec};
        for kind in [GraphKind::Dag, GraphKind::Undirected, GraphKind::Digraph] {
            let spec = InstanceSpec::new(kind, 5..=9, 2..=4).caps(CapMode::Range(1..=3));
            for inst in suite(&spec, 25, 3) {
                let inst = crate::model::instance::normalize_terminals(&inst);
                let g = inst.arc_graph();
                let reach: Vec<Vec<bool>> = (0..=inst.n).map(|u| if u == 0 { vec![] } else { g.reachable_from(&[u]) }).collect();
                for (d, h) in [(2, 2), (2, 3), (3, 3)] {
                    let key = |p: &PotentialSkeleton| {
                        let mut a = p.skeleton.arcs.clone();
                        a.sort_unstable();
                        a
                    };
                    let want: HashSet<_> = enumerate_potential_skeletons(&inst, &inst.terminals)
                        .filter(|p| p.skeleton.max_out_degree() <= d && p.skeleton.height() <= h)
                        .filter(|p| !kind.is_directed() || p.skeleton.arcs.iter().all(|&(u, v)| reach[u][v]))
                        .map(|p| key(&p))
                        .collect();
                    let got: Vec<_> = enumerate_bounded_skeletons(&inst, &inst.terminals, d, h).iter().map(key).collect();
                    let set: HashSet<_> = got.iter().cloned().collect();
                    assert_eq!(set.len(), got.len(), "duplicates");
                    assert_eq!(set, want);
                }
            }
        }
    }

    #[test]
    fn pattern_counts() {
        assert_eq!(junction_patterns(0, 3).len(), 1);
        assert_eq!(junction_patterns(3, 6).len(), 90);
    }
}
