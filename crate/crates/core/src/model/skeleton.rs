//! Contracted trees: only the root, terminals and branching vertices survive.

use std::collections::{BTreeMap, BTreeSet};

use super::instance::Instance;
use super::solution::SteinerSolution;
use super::tree::RootedTree;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Skeleton {
    pub root: usize,
    /// Sorted vertex set: root, terminals and junctions.
    pub vertices: Vec<usize>,
    /// Sorted arcs, oriented away from the root.
    pub arcs: Vec<(usize, usize)>,
    /// `K_v`: number of terminals in the subtree of each skeleton vertex.
    pub terminal_count_below: BTreeMap<usize, usize>,
    pub root_degree: usize,
    pub junctions: Vec<usize>,
}

impl Skeleton {
    /// Builds a skeleton from its arcs; `is_terminal` marks the terminals.
    pub fn from_arcs(root: usize, arcs: Vec<(usize, usize)>, is_terminal: impl Fn(usize) -> bool) -> Option<Skeleton> {
        let mut arcs = arcs;
        arcs.sort_unstable();
        let tree = RootedTree::build(root, &arcs)?;
        let below = tree.count_below(&is_terminal);
        let mut vertices = tree.preorder.clone();
        vertices.sort_unstable();
        let junctions = vertices
            .iter()
            .copied()
            .filter(|&v| v != root && !is_terminal(v))
            .collect();
        Some(Skeleton {
            root,
            terminal_count_below: vertices.iter().map(|&v| (v, below[&v])).collect(),
            root_degree: tree.children_of(root).len(),
            vertices,
            arcs,
            junctions,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn terminal_count(&self) -> usize {
        self.terminal_count_below[&self.root]
    }

    fn tree(&self) -> RootedTree {
        RootedTree::build(self.root, &self.arcs).expect("skeleton arcs form a tree")
    }

    /// Minimum number of vertices (root and terminal included) on a root-to-leaf path.
    pub fn l_min(&self) -> usize {
        let tree = self.tree();
        tree.preorder
            .iter()
            .filter(|&&v| v != self.root && tree.children_of(v).is_empty())
            .map(|&v| tree.path_from_root(v).len())
            .min()
            .unwrap_or(1)
    }

    /// Maximum number of arcs on a root-to-leaf path.
    pub fn height(&self) -> usize {
        let tree = self.tree();
        tree.preorder
            .iter()
            .map(|&v| tree.path_from_root(v).len() - 1)
            .max()
            .unwrap_or(0)
    }

    pub fn max_out_degree(&self) -> usize {
        let mut out: BTreeMap<usize, usize> = BTreeMap::new();
        for &(u, _) in &self.arcs {
            *out.entry(u).or_default() += 1;
        }
        out.values().copied().max().unwrap_or(0)
    }

    /// Out-neighbours of `v` in the skeleton.
    pub fn children(&self, v: usize) -> Vec<usize> {
        self.arcs.iter().filter(|a| a.0 == v).map(|a| a.1).collect()
    }
}

/// Contracts every non-terminal vertex with one entering and one leaving arc.
///
/// Fails if the solution is not a tree or has a non-terminal leaf.
pub fn extract_skeleton(sol: &SteinerSolution, inst: &Instance) -> Result<Skeleton> {
    let tree = RootedTree::build(inst.root, &sol.arcs)
        .ok_or_else(|| Error::Precondition("solution is not a tree rooted at the root".into()))?;
    let mask = inst.terminal_mask();
    let is_term = |v: usize| mask.get(v).copied().unwrap_or(false);
    for &v in &tree.preorder {
        if v != inst.root && !is_term(v) && tree.children_of(v).is_empty() {
            return Err(Error::NonTerminalLeaf(v));
        }
    }
    let keep: BTreeSet<usize> = tree
        .preorder
        .iter()
        .copied()
        .filter(|&v| v == inst.root || is_term(v) || tree.children_of(v).len() >= 2)
        .collect();
    let mut arcs = Vec::new();
    for &u in &keep {
        for &c in tree.children_of(u) {
            let mut end = c;
            while !keep.contains(&end) {
                end = tree.children_of(end)[0];
            }
            arcs.push((u, end));
        }
    }
    Skeleton::from_arcs(inst.root, arcs, is_term)
        .ok_or_else(|| Error::Precondition("contracted arcs do not form a tree".into()))
}

/// Smallest `k` with `2^k >= x`.
pub fn ceil_log2(x: usize) -> usize {
    let mut k = 0;
    while (1usize << k) < x {
        k += 1;
    }
    k
}

/// Upper bound on `l_min` for a skeleton with `n_r` vertices and root degree `d_r`.
pub fn l_min_bound(n_r: usize, d_r: usize) -> usize {
    if d_r <= 1 {
        ceil_log2(n_r) + 1
    } else {
        ceil_log2(n_r + 1)
    }
}

/// `(2K + 1 - d_r, l_min bound)` for minimal trees spanning `k` leaf terminals.
pub fn skeleton_bounds(k: usize, d_r: usize) -> (usize, usize) {
    let max_vertices = (2 * k + 1).saturating_sub(d_r);
    (max_vertices, l_min_bound(max_vertices, d_r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::instance::{Edge, GraphKind};

    fn path_instance() -> Instance {
        Instance::new(
            GraphKind::Digraph,
            5,
            vec![
                Edge::new(1, 2, 1, 2),
                Edge::new(2, 3, 1, 2),
                Edge::new(3, 4, 1, 2),
                Edge::new(1, 5, 1, 2),
            ],
            1,
            vec![4, 5],
        )
    }

    #[test]
    fn degree_two_vertices_are_contracted() {
        let inst = path_instance();
        let sol = SteinerSolution::from_arcs(&inst, [(1, 2), (2, 3), (3, 4), (1, 5)]).unwrap();
        let sk = extract_skeleton(&sol, &inst).unwrap();
        assert_eq!(sk.arcs, vec![(1, 4), (1, 5)]);
        assert_eq!(sk.root_degree, 2);
        assert!(sk.junctions.is_empty());
    }

    #[test]
    fn non_terminal_leaf_is_an_error() {
        let inst = path_instance();
        let sol = SteinerSolution::from_arcs(&inst, [(1, 2), (2, 3), (1, 5)]).unwrap();
        assert!(matches!(extract_skeleton(&sol, &inst), Err(Error::NonTerminalLeaf(3))));
    }

    /// Root with a single child above a complete binary tree on `2^depth` leaves.
    fn binary(depth: u32) -> (Instance, SteinerSolution) {
        let mut edges = vec![Edge::new(1, 2, 1, 100)];
        let mut frontier = vec![2usize];
        let mut next_id = 3;
        for _ in 0..depth {
            let mut next = Vec::new();
            for &v in &frontier {
                for _ in 0..2 {
                    edges.push(Edge::new(v, next_id, 1, 100));
                    next.push(next_id);
                    next_id += 1;
                }
            }
            frontier = next;
        }
        let inst = Instance::new(GraphKind::Dag, next_id - 1, edges.clone(), 1, frontier);
        let sol = SteinerSolution::from_arcs(&inst, edges.iter().map(|e| (e.u, e.v))).unwrap();
        (inst, sol)
    }

    #[test]
    fn complete_binary_tree_meets_both_bounds_tightly() {
        let (inst, sol) = binary(2);
        let sk = extract_skeleton(&sol, &inst).unwrap();
        assert_eq!(sk.root_degree, 1);
        assert_eq!(sk.vertex_count(), 8);
        assert_eq!(sk.l_min(), 4, "three vertices beyond the root");
        let (max_v, max_l) = skeleton_bounds(4, 1);
        assert_eq!(max_v, 8);
        assert!(sk.l_min() <= l_min_bound(sk.vertex_count(), 1));
        assert!(sk.l_min() <= max_l);

        let (inst, sol) = binary(3);
        let sk = extract_skeleton(&sol, &inst).unwrap();
        assert_eq!(sk.l_min(), 5);
        assert!(sk.l_min() <= l_min_bound(sk.vertex_count(), 1));
        assert_eq!(sk.terminal_count_below[&2], 8);
    }

    #[test]
    fn bound_values() {
        assert_eq!(skeleton_bounds(3, 1).0, 6);
        assert_eq!(skeleton_bounds(2, 2).0, 3);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(l_min_bound(3, 2), 2);
    }
}
