//! Instance text format, JSON reports, Graphviz output and benchmark CSV.
//!
//! ```text
//! cargo run --example file_formats
//! ```

use capsteiner::classify::classify_instance;
use capsteiner::dispatch::{solve_auto, SolveOptions};
use capsteiner::io::{parse_stp, read_bench_csv, solution_from_json, solution_to_dot, solution_to_json, write_bench_csv, BenchRow, RunStats};

const TEXT: &str = "\
CAPSTP 1
# a small undirected instance
SECTION Graph
Kind undirected
Nodes 5
E 1 2 1 3
E 2 3 1 2
E 2 4 3/2 2
E 1 5 2 2
E 3 5 1 2
SECTION Terminals
Root 1
T 3
T 4
T 5
EOF
";

fn main() -> Result<(), capsteiner::Error> {
    let inst = parse_stp(TEXT)?;
    let (label, out) = solve_auto(&inst, &SolveOptions::default())?;
    let stats = RunStats { algorithm: label.chosen_algorithm().into(), guarantee: out.guarantee, elapsed_ms: 0 };
    let json = solution_to_json(out.solution.as_ref(), &label, &stats);
    print!("{json}");
    let back = solution_from_json(&json)?;
    println!("feasible {} length {:?}", back.feasible, back.total_length);
    print!("{}", solution_to_dot(&inst, out.solution.as_ref()));

    let row = BenchRow {
        file: "inline.stp".into(),
        kind: inst.kind.as_str().into(),
        n: inst.n,
        m: inst.edges.len(),
        k: inst.k(),
        case_leaf: classify_instance(&inst, None).leaf_id,
        algorithm: stats.algorithm.clone(),
        mode: "optimize".into(),
        status: "solved".into(),
        total_length: back.total_length.clone(),
        guarantee: back.guarantee.clone(),
        elapsed_ms: 0,
    };
    let mut csv = Vec::new();
    write_bench_csv(std::slice::from_ref(&row), &mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv));
    assert_eq!(read_bench_csv(csv.as_slice())?, vec![row]);
    Ok(())
}
