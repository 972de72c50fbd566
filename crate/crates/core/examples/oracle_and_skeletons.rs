//! The exhaustive oracle as ground truth, and the skeleton of an optimal tree
//! checked against its size bounds.
//!
//! ```text
//! cargo run --example oracle_and_skeletons
//! ```

use capsteiner::model::instance::normalize_terminals;
use capsteiner::model::skeleton::l_min_bound;
use capsteiner::oracle::{oracle_mlcst, OracleLimits};
use capsteiner::suite::{suite, CapMode, InstanceSpec};
use capsteiner::{extract_skeleton, skeleton_bounds, GraphKind};

fn main() -> Result<(), capsteiner::Error> {
    let lim = OracleLimits::new(18, 40);
    let spec = InstanceSpec::new(GraphKind::Digraph, 5..=9, 3..=5).caps(CapMode::Range(1..=4));
    for inst in suite(&spec, 6, 21) {
        let inst = normalize_terminals(&inst);
        let Some(sol) = oracle_mlcst(&inst, &lim)? else {
            println!("n={} K={}: infeasible", inst.n, inst.k());
            continue;
        };
        let sk = extract_skeleton(&sol, &inst)?;
        let (max_n, _) = skeleton_bounds(inst.k(), sk.root_degree);
        println!(
            "n={} K={}: optimum {}, skeleton {} vertices (bound {max_n}), l_min {} (bound {})",
            inst.n,
            inst.k(),
            sol.total_length,
            sk.vertex_count(),
            sk.l_min(),
            l_min_bound(sk.vertex_count(), sk.root_degree)
        );
    }
    Ok(())
}
