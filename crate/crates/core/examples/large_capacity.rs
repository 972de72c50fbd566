//! Capacities close to K: decide feasibility through small reduced trees,
//! or approximate the optimum with a proven ratio.
//!
//! ```text
//! cargo run --example large_capacity
//! ```

use capsteiner::large_cap::{solve_dag_large_cap, solve_uniform_k_minus_kappa};
use capsteiner::model::solution::Mode;
use capsteiner::oracle::{oracle_mlcst, OracleLimits};
use capsteiner::suite::{suite, CapMode, InstanceSpec};
use capsteiner::GraphKind;

fn main() -> Result<(), capsteiner::Error> {
    let lim = OracleLimits::new(16, 40);
    let kappa = 2;

    let spec = InstanceSpec::new(GraphKind::Undirected, 6..=10, 4..=5).caps(CapMode::UniformSlack(kappa));
    println!("undirected, uniform c = K - {kappa}");
    for inst in suite(&spec, 5, 9) {
        let decide = solve_uniform_k_minus_kappa(&inst, kappa, Mode::Decision)?.is_some();
        let approx = solve_uniform_k_minus_kappa(&inst, kappa, Mode::Optimize)?;
        let opt = oracle_mlcst(&inst, &lim)?;
        match (approx, opt) {
            (Some(a), Some(o)) => println!(
                "  feasible={decide} length {} optimum {} guarantee {}",
                a.solution.total_length,
                o.total_length,
                a.guarantee.map_or("-".into(), |g| g.to_string())
            ),
            (a, o) => println!("  feasible={decide} solver {} oracle {}", a.is_some(), o.is_some()),
        }
    }

    let spec = InstanceSpec::new(GraphKind::Dag, 6..=10, 4..=6).caps(CapMode::MinSlack(kappa));
    println!("DAG, c_min >= K - {kappa}");
    for inst in suite(&spec, 5, 10) {
        let kappa = inst.k() - inst.c_min() as usize;
        let rep = solve_dag_large_cap(&inst, kappa, Mode::Optimize)?;
        let opt = oracle_mlcst(&inst, &lim)?;
        println!(
            "  K={} kappa={kappa}: {} vs optimum {}",
            inst.k(),
            rep.map_or("infeasible".into(), |r| r.solution.total_length.to_string()),
            opt.map_or("infeasible".into(), |o| o.total_length.to_string())
        );
    }
    Ok(())
}
