//! Undirected graph, uniform capacity, few terminals.
//!
//! ```text
//! cargo run --example uniform_fixed_k
//! ```

use capsteiner::fixed_k::solve_uniform_fixed_k;
use capsteiner::oracle::{oracle_mlcst, OracleLimits};
use capsteiner::suite::{suite, CapMode, InstanceSpec};
use capsteiner::GraphKind;

fn main() -> Result<(), capsteiner::Error> {
    let spec = InstanceSpec::new(GraphKind::Undirected, 6..=10, 3..=5).caps(CapMode::UniformIn(2..=3));
    let lim = OracleLimits::new(16, 40);
    for (i, inst) in suite(&spec, 6, 4).iter().enumerate() {
        let got = solve_uniform_fixed_k(inst)?.map(|s| s.total_length);
        let want = oracle_mlcst(inst, &lim)?.map(|s| s.total_length);
        assert_eq!(got, want);
        let show = |x: Option<capsteiner::Length>| x.map_or("infeasible".into(), |l| l.to_string());
        println!("#{i}: K={} c={} optimum {}", inst.k(), inst.uniform_capacity().unwrap_or(0), show(got));
    }
    Ok(())
}
