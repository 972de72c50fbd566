//! Build an instance in code, let the classifier pick a solver, check the tree.
//!
//! ```text
//! cargo run --example quickstart
//! ```

use capsteiner::dispatch::{solve_auto, SolveOptions};
use capsteiner::{check_feasible_tree, Edge, GraphKind, Instance};

fn main() -> Result<(), capsteiner::Error> {
    // root 1 feeds hub 2 (capacity 2) and hub 3 (capacity 3); terminals 4..=7
    let edges = vec![
        Edge::new(1, 2, 4, 2),
        Edge::new(1, 3, 6, 3),
        Edge::new(2, 4, 1, 2),
        Edge::new(2, 5, 1, 2),
        Edge::new(3, 5, 2, 3),
        Edge::new(3, 6, 1, 3),
        Edge::new(3, 7, 1, 3),
        Edge::new(2, 7, 1, 2),
    ];
    let inst = Instance::new(GraphKind::Dag, 7, edges, 1, vec![4, 5, 6, 7]);

    let (label, out) = solve_auto(&inst, &SolveOptions::default())?;
    println!("leaf {} ({}), solver {}", label.leaf_id, label.verdict, label.chosen_algorithm());
    let Some(sol) = out.solution else {
        println!("infeasible");
        return Ok(());
    };
    println!("length {} guarantee {:?}", sol.total_length, out.guarantee.map(|g| g.to_string()));
    for (arc, load) in &sol.load {
        println!("  {arc:?} carries {load}");
    }
    assert!(check_feasible_tree(&inst, &sol).ok);
    Ok(())
}
