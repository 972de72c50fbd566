//! Classify a mixed random suite, then solve every instance whose leaf has a
//! solver and compare with the oracle. Hard leaves are refused.
//!
//! ```text
//! cargo run --release --example classify_suite
//! ```

use std::collections::BTreeMap;

use capsteiner::classify::classify_instance;
use capsteiner::dispatch::{solve_auto, SolveOptions};
use capsteiner::oracle::{oracle_mlcst, OracleLimits};
use capsteiner::suite::{suite, CapMode, InstanceSpec, LengthMode};
use capsteiner::{Error, GraphKind};

fn main() -> Result<(), Error> {
    let mut insts = Vec::new();
    for kind in [GraphKind::Digraph, GraphKind::Dag, GraphKind::Undirected] {
        for caps in [CapMode::Unit, CapMode::Range(1..=3), CapMode::UniformIn(2..=3), CapMode::UniformSlack(2), CapMode::MinSlack(2)] {
            for lengths in [LengthMode::Positive, LengthMode::Zero] {
                insts.extend(suite(&InstanceSpec::new(kind, 5..=9, 2..=8).caps(caps.clone()).lengths(lengths), 5, 17));
            }
        }
    }
    let lim = OracleLimits::new(16, 40);
    let mut per_leaf: BTreeMap<u8, (usize, usize, usize)> = BTreeMap::new();
    for inst in &insts {
        let leaf = classify_instance(inst, None).leaf_id;
        let entry = per_leaf.entry(leaf).or_default();
        entry.0 += 1;
        match solve_auto(inst, &SolveOptions::default()) {
            Ok((_, out)) => {
                let opt = oracle_mlcst(inst, &lim)?;
                let same = out.solution.map(|s| s.total_length) == opt.map(|s| s.total_length);
                entry.1 += same as usize;
            }
            Err(Error::HardLeaf { .. }) => entry.2 += 1,
            Err(e) => return Err(e),
        }
    }
    println!("leaf  count  equal-to-oracle  refused");
    for (leaf, (n, eq, refused)) in per_leaf {
        println!("{leaf:>4}  {n:>5}  {eq:>15}  {refused:>7}");
    }
    Ok(())
}
