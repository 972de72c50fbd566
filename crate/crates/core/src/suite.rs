//! Seeded random instance families used by tests, examples and `bench`.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::instance::{Edge, GraphKind, Instance, Length};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CapMode {
    /// Every capacity is 1.
    Unit,
    /// Every capacity equals `K - slack` (at least 1).
    UniformSlack(usize),
    /// One capacity drawn from the range, shared by all edges.
    UniformIn(RangeInclusive<u32>),
    /// Independent capacities from `K - slack ..= K`.
    MinSlack(usize),
    /// Independent capacities from the range.
    Range(RangeInclusive<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LengthMode {
    Zero,
    /// Integers from 1 to 9.
    Positive,
    /// Integers from 0 to 9.
    NonNegative,
    /// Halves, thirds and integers from 0 to 5.
    Rational,
}

#[derive(Clone, Debug)]
pub struct InstanceSpec {
    pub kind: GraphKind,
    pub n: RangeInclusive<usize>,
    pub k: RangeInclusive<usize>,
    /// Edges added on top of a spanning tree hanging from the root.
    pub extra_edges: RangeInclusive<usize>,
    pub caps: CapMode,
    pub lengths: LengthMode,
}

impl InstanceSpec {
    pub fn new(kind: GraphKind, n: RangeInclusive<usize>, k: RangeInclusive<usize>) -> Self {
        InstanceSpec { kind, n, k, extra_edges: 2..=8, caps: CapMode::Range(1..=3), lengths: LengthMode::Positive }
    }

    pub fn caps(mut self, caps: CapMode) -> Self {
        self.caps = caps;
        self
    }

    pub fn lengths(mut self, lengths: LengthMode) -> Self {
        self.lengths = lengths;
        self
    }

    pub fn extra_edges(mut self, extra: RangeInclusive<usize>) -> Self {
        self.extra_edges = extra;
        self
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn draw_length(mode: &LengthMode, rng: &mut ChaCha8Rng) -> Length {
    match mode {
        LengthMode::Zero => Length::from_integer(0),
        LengthMode::Positive => Length::from_integer(rng.gen_range(1..=9)),
        LengthMode::NonNegative => Length::from_integer(rng.gen_range(0..=9)),
        LengthMode::Rational => Length::new(rng.gen_range(0..=15), *[1, 2, 3].choose(rng).unwrap()),
    }
}

/// One random instance; the root is vertex 1 and reaches every vertex.
pub fn random_instance(spec: &InstanceSpec, rng: &mut ChaCha8Rng) -> Instance {
    let k = rng.gen_range(spec.k.clone());
    let n = rng.gen_range(spec.n.clone()).max(k + 1);
    // rank[v]: position in a random order with the root first; tree arcs and
    // all DAG arcs go from lower to higher rank
    let mut order: Vec<usize> = (2..=n).collect();
    order.shuffle(rng);
    order.insert(0, 1);
    let mut rank = vec![0; n + 1];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut has = std::collections::HashSet::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        pairs.push((parent, order[i]));
        has.insert((parent, order[i]));
    }
    let want = rng.gen_range(spec.extra_edges.clone());
    let mut tries = 0;
    while pairs.len() < n - 1 + want && tries < 200 {
        tries += 1;
        let (mut u, mut v) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
        if u == v {
            continue;
        }
        if spec.kind == GraphKind::Dag && rank[u] > rank[v] {
            std::mem::swap(&mut u, &mut v);
        }
        let dup = has.contains(&(u, v)) || (!spec.kind.is_directed() || spec.kind == GraphKind::Dag) && has.contains(&(v, u));
        if dup {
            continue;
        }
        has.insert((u, v));
        pairs.push((u, v));
    }
    let uniform = match &spec.caps {
        CapMode::UniformIn(r) => Some(rng.gen_range(r.clone())),
        CapMode::UniformSlack(s) => Some(k.saturating_sub(*s).max(1) as u32),
        CapMode::Unit => Some(1),
        _ => None,
    };
    let edges = pairs
        .into_iter()
        .map(|(u, v)| {
            let cap = match (&spec.caps, uniform) {
                (_, Some(c)) => c,
                (CapMode::MinSlack(s), _) => rng.gen_range(k.saturating_sub(*s).max(1)..=k) as u32,
                (CapMode::Range(r), _) => rng.gen_range(r.clone()),
                _ => unreachable!(),
            };
            Edge::new(u, v, draw_length(&spec.lengths, rng), cap)
        })
        .collect();
    let mut candidates: Vec<usize> = (2..=n).collect();
    candidates.shuffle(rng);
    let mut terminals: Vec<usize> = candidates.into_iter().take(k).collect();
    terminals.sort_unstable();
    Instance::new(spec.kind, n, edges, 1, terminals)
}

/// `count` instances from one seed.
pub fn suite(spec: &InstanceSpec, count: usize, seed: u64) -> Vec<Instance> {
    let mut r = rng(seed);
    (0..count).map(|_| random_instance(spec, &mut r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::instance::validate_instance;

    #[test]
    fn generated_instances_are_valid_and_reproducible() {
        for kind in [GraphKind::Digraph, GraphKind::Dag, GraphKind::Undirected] {
            let spec = InstanceSpec::new(kind, 4..=10, 2..=4);
            let a = suite(&spec, 50, 7);
            for inst in &a {
                let rep = validate_instance(inst);
                assert!(rep.ok, "{:?}", rep.violations);
                assert!(inst.edges.len() <= 24);
            }
            let b = suite(&spec, 50, 7);
            assert_eq!(a, b);
        }
    }
}
