//! Every capacity at least K - 1: only the trunk above the first branching
//! vertex may carry all terminals. Exact for small K, approximate otherwise.
//!
//! ```text
//! cargo run --example cmin_k_minus_1
//! ```

use capsteiner::large_cap::{forced_vertex_bound, solve_cmin_k_minus_1, solve_cmin_k_minus_1_fixed_k_witness};
use capsteiner::model::solution::Mode;
use capsteiner::suite::{suite, CapMode, InstanceSpec};
use capsteiner::GraphKind;

fn main() -> Result<(), capsteiner::Error> {
    let spec = InstanceSpec::new(GraphKind::Digraph, 6..=10, 3..=6).caps(CapMode::MinSlack(1));
    for (i, inst) in suite(&spec, 6, 2).iter().enumerate() {
        let exact = solve_cmin_k_minus_1_fixed_k_witness(inst)?;
        let approx = solve_cmin_k_minus_1(inst, Mode::Optimize)?;
        match (exact, approx) {
            (Some((sol, witness)), Some(rep)) => {
                println!("#{i}: K={} exact {} approx {}", inst.k(), sol.total_length, rep.solution.total_length);
                if let Some(w) = witness {
                    println!(
                        "    branch at {}, terminals {:?}, forced {:?} (bound {:.2})",
                        w.w,
                        w.terminals,
                        w.forced,
                        forced_vertex_bound(inst.k())
                    );
                }
            }
            _ => println!("#{i}: infeasible"),
        }
    }
    Ok(())
}
