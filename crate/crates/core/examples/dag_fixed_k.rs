//! Fixed number of terminals on a DAG: enumerate potential skeletons, turn
//! each into a labelled disjoint-paths instance, keep the cheapest.
//!
//! ```text
//! cargo run --example dag_fixed_k
//! ```

use capsteiner::fixed_k::{build_labvdp_from_skeleton, solve_dag_fixed_k};
use capsteiner::model::instance::normalize_terminals;
use capsteiner::skeletons::{enumerate_potential_skeletons, junction_candidates};
use capsteiner::{Edge, GraphKind, Instance};

fn main() -> Result<(), capsteiner::Error> {
    let edges = vec![
        Edge::new(1, 2, 1, 3),
        Edge::new(1, 3, 5, 1),
        Edge::new(2, 3, 3, 2),
        Edge::new(2, 4, 1, 1),
        Edge::new(3, 5, 1, 1),
        Edge::new(3, 6, 1, 1),
        Edge::new(2, 6, 4, 1),
    ];
    let inst = Instance::new(GraphKind::Dag, 6, edges, 1, vec![4, 5, 6]);
    let norm = normalize_terminals(&inst);
    println!("junction candidates: {:?}", junction_candidates(&norm));

    let skeletons: Vec<_> = enumerate_potential_skeletons(&norm, &norm.terminals).collect();
    println!("{} potential skeletons", skeletons.len());
    for ps in skeletons.iter().take(4) {
        let (lab, exp) = build_labvdp_from_skeleton(&norm, ps);
        println!("  skeleton {:?}: {} pairs, label sets {:?}", ps.skeleton.arcs, lab.pairs.len(), exp.label_sets);
    }

    match solve_dag_fixed_k(&inst)? {
        Some(sol) => println!("optimum {} via {:?}", sol.total_length, sol.arcs),
        None => println!("infeasible"),
    }
    Ok(())
}
