//! Labelled vertex-disjoint paths on a DAG: each pair may only use arcs
//! whose label is in its own set.
//!
//! ```text
//! cargo run --example disjoint_paths
//! ```

use std::collections::BTreeSet;

use capsteiner::disjoint_paths::{check_paths, labvdp_dag_dp, LabVdpInstance};
use capsteiner::ArcGraph;

fn main() -> Result<(), capsteiner::Error> {
    let mut g = ArcGraph::new(6);
    // (from, to, length, label)
    for (i, &(u, v, len, label)) in [(1, 3, 1, 1), (2, 3, 1, 2), (3, 5, 2, 1), (3, 6, 2, 2), (1, 4, 3, 1), (4, 5, 1, 1), (2, 6, 9, 2)]
        .iter()
        .enumerate()
    {
        g.add_arc(u, v, len, label, i);
    }
    let pairs = vec![(1, 5), (2, 6)];
    for sets in [vec![BTreeSet::from([1]), BTreeSet::from([2])], vec![BTreeSet::from([1]), BTreeSet::from([1])]] {
        let inst = LabVdpInstance::with_capacity_labels(g.clone(), pairs.clone(), sets.clone());
        match labvdp_dag_dp(&inst)? {
            Some(r) => {
                assert!(check_paths(&inst, &r));
                println!("labels {sets:?}: length {} paths {:?}", r.total_length, r.paths);
            }
            None => println!("labels {sets:?}: no disjoint paths"),
        }
    }
    Ok(())
}
