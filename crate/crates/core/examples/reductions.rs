//! Reduction gadgets as instance generators: a CNF formula becomes a
//! capacitated Steiner instance that is feasible exactly when the formula is
//! satisfiable, and a satisfying assignment becomes a tree.
//!
//! ```text
//! cargo run --example reductions
//! ```

use capsteiner::io::{write_dimacs, write_stp};
use capsteiner::oracle::{oracle_mlcst, OracleLimits};
use capsteiner::reductions::{gen_from_3sat3_mapped, gen_from_sat_mapped, gen_from_vdp_squared, random_vdp_instance, CnfFormula};
use capsteiner::{check_feasible_tree, GraphKind};

fn main() -> Result<(), capsteiner::Error> {
    let phi = CnfFormula::new(3, vec![vec![1, -2], vec![1, 2, 3], vec![-1, 2, -3]])?;
    print!("{}", write_dimacs(&phi));
    let img = gen_from_sat_mapped(&phi, 3, 1, 2)?;
    let tau = phi.satisfying_assignment().expect("satisfiable");
    let tree = img.solution_for(&tau).expect("a satisfying assignment yields a tree");
    println!("SAT image: n={} m={} K={}", img.instance.n, img.instance.edges.len(), img.instance.k());
    println!("tree from {tau:?} is feasible: {}", check_feasible_tree(&img.instance, &tree).ok);
    println!("decoded back: {:?}", img.decode(&tree));

    let unsat = CnfFormula::new(1, vec![vec![1], vec![-1]])?;
    let img = gen_from_sat_mapped(&unsat, 3, 1, 2)?;
    let found = oracle_mlcst(&img.instance, &OracleLimits::new(64, 128))?;
    println!("(x1)(not x1) image feasible: {}", found.is_some());

    let f = CnfFormula::new(4, vec![vec![1, -2, 3], vec![-2, -3, 4]])?;
    let img = gen_from_3sat3_mapped(&f, 2, GraphKind::Dag)?;
    let tree = img.solution_for(&f, &[true, false, false, true]).expect("satisfying");
    println!("3-SAT3 image: K={} feasible tree: {}", img.instance.k(), check_feasible_tree(&img.instance, &tree).ok);

    let v = random_vdp_instance(GraphKind::Dag, 8, 3, 0.4, &mut capsteiner::suite::rng(3));
    let sq = gen_from_vdp_squared(&v)?;
    println!("disjoint-paths image with p = 3: K={} c={:?}", sq.k(), sq.uniform_capacity());
    print!("{}", write_stp(&sq));
    Ok(())
}
