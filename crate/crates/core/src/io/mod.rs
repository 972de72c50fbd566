//! File formats: CAPSTP instances, DIMACS CNF, JSON solutions, CSV bench
//! tables and DOT drawings.

mod bench;
mod cnf;
mod dot;
mod json;
mod stp;

pub use bench::{read_bench_csv, write_bench_csv, BenchRow};
pub use cnf::{parse_dimacs, write_dimacs};
pub use dot::solution_to_dot;
pub use json::{solution_from_json, solution_to_json, RunStats, SolutionJson};
pub use stp::{parse_stp, parse_stp_unchecked, write_stp};

/// Splits a line into whitespace-separated tokens with their 1-based columns.
pub(crate) fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}
