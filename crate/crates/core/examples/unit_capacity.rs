//! Unit capacities: the tree is a set of vertex-disjoint root paths, found
//! by min-cost flow. Also shows the undirected-to-digraph conversion.
//!
//! ```text
//! cargo run --example unit_capacity
//! ```

use capsteiner::flow::solve_unit_capacity;
use capsteiner::model::instance::to_digraph;
use capsteiner::oracle::{oracle_mlcst, OracleLimits};
use capsteiner::suite::{suite, CapMode, InstanceSpec, LengthMode};
use capsteiner::GraphKind;

fn main() -> Result<(), capsteiner::Error> {
    let spec = InstanceSpec::new(GraphKind::Undirected, 6..=10, 2..=4).caps(CapMode::Unit).lengths(LengthMode::Positive);
    for (i, inst) in suite(&spec, 8, 1).iter().enumerate() {
        let flow = solve_unit_capacity(inst)?;
        let exact = oracle_mlcst(inst, &OracleLimits::new(16, 40))?;
        let directed = solve_unit_capacity(&to_digraph(inst)?)?;
        let show = |s: &Option<capsteiner::SteinerSolution>| s.as_ref().map_or("infeasible".to_string(), |s| s.total_length.to_string());
        println!(
            "#{i}: n={} K={} flow {} oracle {} as digraph {}",
            inst.n,
            inst.k(),
            show(&flow),
            show(&exact),
            show(&directed)
        );
    }
    Ok(())
}
