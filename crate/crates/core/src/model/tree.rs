//! Rooted trees given as arc lists.

use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Parent/children view of an arc set that is known to be a tree rooted at `root`.
#[derive(Clone, Debug)]
pub struct RootedTree {
    pub root: usize,
    pub parent: HashMap<usize, usize>,
    pub children: BTreeMap<usize, Vec<usize>>,
    /// Vertices in preorder starting at the root.
    pub preorder: Vec<usize>,
}

impl RootedTree {
    /// Builds the view, or returns `None` if `arcs` is not a tree rooted at `root`.
    pub fn build(root: usize, arcs: &[(usize, usize)]) -> Option<RootedTree> {
        let mut parent = HashMap::new();
        let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(u, v) in arcs {
            if v == root || parent.insert(v, u).is_some() {
                return None;
            }
            children.entry(u).or_default().push(v);
        }
        for list in children.values_mut() {
            list.sort_unstable();
        }
        let mut preorder = Vec::with_capacity(arcs.len() + 1);
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            preorder.push(u);
            if let Some(ch) = children.get(&u) {
                stack.extend(ch.iter().rev());
            }
        }
        (preorder.len() == arcs.len() + 1).then_some(RootedTree {
            root,
            parent,
            children,
            preorder,
        })
    }

    pub fn children_of(&self, v: usize) -> &[usize] {
        self.children.get(&v).map_or(&[], Vec::as_slice)
    }

    pub fn contains(&self, v: usize) -> bool {
        v == self.root || self.parent.contains_key(&v)
    }

    /// Number of marked vertices in each subtree (the vertex itself included).
    pub fn count_below(&self, marked: impl Fn(usize) -> bool) -> HashMap<usize, usize> {
        let mut count = HashMap::with_capacity(self.preorder.len());
        for &v in self.preorder.iter().rev() {
            let own = usize::from(marked(v));
            let sub: usize = self.children_of(v).iter().map(|c| count[c]).sum();
            count.insert(v, own + sub);
        }
        count
    }

    /// Vertices from the root down to `v`.
    pub fn path_from_root(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(&p) = self.parent.get(&cur) {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut arcs: Vec<_> = self.parent.iter().map(|(&v, &u)| (u, v)).collect();
        arcs.sort_unstable();
        arcs
    }
}

/// Repeatedly removes arcs that lead to leaves outside `keep`.
pub fn prune_leaves(arcs: &[(usize, usize)], keep: impl Fn(usize) -> bool) -> Vec<(usize, usize)> {
    let mut set: BTreeSet<(usize, usize)> = arcs.iter().copied().collect();
    loop {
        let tails: BTreeSet<usize> = set.iter().map(|a| a.0).collect();
        let before = set.len();
        set.retain(|&(_, v)| keep(v) || tails.contains(&v));
        if set.len() == before {
            break;
        }
    }
    set.into_iter().collect()
}

/// Turns a set of arcs containing a tree structure into an arborescence:
/// every reachable vertex keeps one entering arc (the first in BFS order from `root`).
pub fn arborescence_within(root: usize, arcs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(u, v) in arcs {
        out.entry(u).or_default().push(v);
    }
    let mut seen = BTreeSet::from([root]);
    let mut queue = std::collections::VecDeque::from([root]);
    let mut result = Vec::new();
    while let Some(u) = queue.pop_front() {
        if let Some(next) = out.get(&u) {
            for &v in next {
                if seen.insert(v) {
                    result.push((u, v));
                    queue.push_back(v);
                }
            }
        }
    }
    result.sort_unstable();
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_two_parents_and_cycles() {
        assert!(RootedTree::build(1, &[(1, 2), (3, 2)]).is_none());
        assert!(RootedTree::build(1, &[(1, 2), (3, 4), (4, 3)]).is_none());
        assert!(RootedTree::build(1, &[(2, 1)]).is_none());
    }

    #[test]
    fn counts_terminals_below() {
        let t = RootedTree::build(1, &[(1, 2), (2, 3), (2, 4)]).unwrap();
        let c = t.count_below(|v| v == 3 || v == 4);
        assert_eq!(c[&1], 2);
        assert_eq!(c[&3], 1);
        assert_eq!(t.path_from_root(4), vec![1, 2, 4]);
    }

    #[test]
    fn prunes_dead_branches() {
        let arcs = [(1, 2), (2, 3), (1, 4), (4, 5)];
        assert_eq!(prune_leaves(&arcs, |v| v == 3), vec![(1, 2), (2, 3)]);
    }
}
