use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::Zero;

use super::instance::{Instance, Length};
use super::tree::RootedTree;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    UnreachableTerminal,
    Cycle,
    CapacityExceeded,
    NotATree,
    BadOrientation,
    /// Structural problems of an instance (ids out of range, parallel edges, ...).
    Malformed,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::UnreachableTerminal => "unreachable-terminal",
            ViolationKind::Cycle => "cycle",
            ViolationKind::CapacityExceeded => "capacity-exceeded",
            ViolationKind::NotATree => "not-a-tree",
            ViolationKind::BadOrientation => "bad-orientation",
            ViolationKind::Malformed => "malformed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.detail)
    }
}

/// Outcome of a validation or feasibility check; `ok` iff no violations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

pub type ValidationReport = FeasibilityReport;

impl FeasibilityReport {
    pub fn new(violations: Vec<Violation>) -> Self {
        FeasibilityReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

/// Tree rooted at the instance root, arcs oriented away from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerSolution {
    pub arcs: Vec<(usize, usize)>,
    pub total_length: Length,
    /// Terminals in the subtree below each arc.
    pub load: BTreeMap<(usize, usize), u32>,
}

impl SteinerSolution {
    /// Builds a solution from a tree's arcs, computing length and loads.
    pub fn from_arcs(inst: &Instance, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut arcs: Vec<_> = arcs.into_iter().collect();
        arcs.sort_unstable();
        arcs.dedup();
        let index = inst.arc_index();
        let mut total = Length::zero();
        for &(u, v) in &arcs {
            let e = index.get(&(u, v)).ok_or(Error::UnknownArc(u, v))?;
            total += inst.edges[*e].length;
        }
        let tree = RootedTree::build(inst.root, &arcs)
            .ok_or_else(|| Error::Precondition("arcs do not form a tree rooted at the root".into()))?;
        let mask = inst.terminal_mask();
        let below = tree.count_below(|v| mask.get(v).copied().unwrap_or(false));
        let load = arcs.iter().map(|&(u, v)| ((u, v), below[&v] as u32)).collect();
        Ok(SteinerSolution {
            arcs,
            total_length: total,
            load,
        })
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        self.arcs.iter().flat_map(|&(u, v)| [u, v]).collect()
    }
}

/// Checks that `sol` is a capacity-respecting tree rooted at the root that
/// spans all terminals. Loads are recomputed from the arcs.
pub fn check_feasible_tree(inst: &Instance, sol: &SteinerSolution) -> FeasibilityReport {
    check_arcs(inst, &sol.arcs)
}

pub(crate) fn check_arcs(inst: &Instance, arcs: &[(usize, usize)]) -> FeasibilityReport {
    let mut violations = Vec::new();
    let mut push = |kind, detail: String| violations.push(Violation { kind, detail });
    let index = inst.arc_index();
    let mut seen = BTreeSet::new();
    let mut parent: HashMap<usize, usize> = HashMap::new();
    let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(u, v) in arcs {
        if !seen.insert((u, v)) {
            push(ViolationKind::NotATree, format!("arc ({u}, {v}) appears twice"));
            continue;
        }
        if !index.contains_key(&(u, v)) {
            if index.contains_key(&(v, u)) {
                push(ViolationKind::BadOrientation, format!("arc ({u}, {v}) only exists as ({v}, {u})"));
            } else {
                push(ViolationKind::NotATree, format!("arc ({u}, {v}) is not in the graph"));
            }
        }
        if seen.contains(&(v, u)) {
            push(ViolationKind::Cycle, format!("arcs ({u}, {v}) and ({v}, {u}) both used"));
        }
        if v == inst.root {
            push(ViolationKind::NotATree, format!("root {v} has entering arc ({u}, {v})"));
            continue;
        }
        if let Some(p) = parent.insert(v, u) {
            push(ViolationKind::NotATree, format!("vertex {v} has two parents {p} and {u}"));
            continue;
        }
        children.entry(u).or_default().push(v);
    }
    let mut reached = BTreeSet::from([inst.root]);
    let mut order = vec![inst.root];
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &v in children.get(&u).map_or(&[][..], Vec::as_slice) {
            if reached.insert(v) {
                order.push(v);
            }
        }
    }
    let touched: BTreeSet<usize> = arcs.iter().flat_map(|&(u, v)| [u, v]).collect();
    let mut cycle_reported = false;
    let mut detached = BTreeSet::new();
    for &v in touched.difference(&reached) {
        let mut walk = BTreeSet::from([v]);
        let mut cur = v;
        loop {
            match parent.get(&cur) {
                None => {
                    if detached.insert(cur) {
                        push(ViolationKind::NotATree, format!("vertex {cur} is not connected to the root"));
                    }
                    break;
                }
                Some(&p) if reached.contains(&p) => break,
                Some(&p) => {
                    if !walk.insert(p) {
                        if !cycle_reported {
                            push(ViolationKind::Cycle, format!("arcs through vertex {p} form a cycle"));
                            cycle_reported = true;
                        }
                        break;
                    }
                    cur = p;
                }
            }
        }
    }
    for &t in &inst.terminals {
        if !reached.contains(&t) {
            push(ViolationKind::UnreachableTerminal, format!("terminal {t} is not spanned"));
        }
    }
    let mask = inst.terminal_mask();
    let mut below: HashMap<usize, u32> = HashMap::new();
    for &v in order.iter().rev() {
        let own = u32::from(mask.get(v).copied().unwrap_or(false));
        let sub: u32 = children
            .get(&v)
            .map_or(0, |c| c.iter().filter_map(|x| below.get(x)).sum());
        below.insert(v, own + sub);
    }
    for &v in order.iter().skip(1) {
        let u = parent[&v];
        if let Some(&e) = index.get(&(u, v)) {
            let cap = inst.edges[e].capacity;
            if below[&v] > cap {
                push(
                    ViolationKind::CapacityExceeded,
                    format!("arc ({u}, {v}) carries {} terminals, capacity {cap}", below[&v]),
                );
            }
        }
    }
    FeasibilityReport::new(violations)
}

/// Whether a solver must find an optimum or only decide feasibility.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    Decision,
    #[default]
    Optimize,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Decision => "decision",
            Mode::Optimize => "optimize",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "decision" => Ok(Mode::Decision),
            "optimize" => Ok(Mode::Optimize),
            other => Err(Error::Precondition(format!("unknown mode {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::instance::{Edge, GraphKind};

    fn y_graph(cap_rv: u32) -> Instance {
        Instance::new(
            GraphKind::Digraph,
            4,
            vec![Edge::new(1, 2, 1, cap_rv), Edge::new(2, 3, 1, 1), Edge::new(2, 4, 1, 1)],
            1,
            vec![3, 4],
        )
    }

    #[test]
    fn star_is_feasible_with_unit_loads() {
        let inst = Instance::new(
            GraphKind::Digraph,
            3,
            vec![Edge::new(1, 2, 1, 1), Edge::new(1, 3, 1, 1)],
            1,
            vec![2, 3],
        );
        let sol = SteinerSolution::from_arcs(&inst, [(1, 2), (1, 3)]).unwrap();
        assert!(check_feasible_tree(&inst, &sol).ok);
        assert_eq!(sol.load.values().copied().collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn shared_arc_over_capacity() {
        let inst = y_graph(1);
        let sol = SteinerSolution::from_arcs(&inst, [(1, 2), (2, 3), (2, 4)]).unwrap();
        assert_eq!(sol.load[&(1, 2)], 2);
        let rep = check_feasible_tree(&inst, &sol);
        assert!(rep.has(ViolationKind::CapacityExceeded));
        assert!(check_feasible_tree(&y_graph(2), &sol).ok);
    }

    #[test]
    fn reversed_arc_is_bad_orientation() {
        let inst = y_graph(2);
        let rep = check_arcs(&inst, &[(1, 2), (3, 2), (2, 4)]);
        assert!(rep.has(ViolationKind::BadOrientation));
        assert!(rep.has(ViolationKind::UnreachableTerminal));
    }

    #[test]
    fn detached_cycle_is_reported() {
        let inst = Instance::new(
            GraphKind::Digraph,
            4,
            vec![
                Edge::new(1, 2, 1, 1),
                Edge::new(3, 4, 1, 1),
                Edge::new(4, 3, 1, 1),
                Edge::new(1, 3, 1, 1),
            ],
            1,
            vec![2, 4],
        );
        let rep = check_arcs(&inst, &[(1, 2), (3, 4), (4, 3)]);
        assert!(rep.has(ViolationKind::Cycle));
        assert!(rep.has(ViolationKind::UnreachableTerminal));
    }
}
