//! Solution reports as JSON.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::classify::CaseLabel;
use crate::error::Result;
use crate::model::solution::SteinerSolution;

/// What was run and how long it took.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    /// Operation name, e.g. `solve_unit_capacity`.
    pub algorithm: String,
    pub guarantee: Option<Ratio<i64>>,
    pub elapsed_ms: u64,
}

/// Field order here is the key order of the output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub feasible: bool,
    /// Exact rational, `p/q` or an integer; `null` when infeasible.
    pub total_length: Option<String>,
    pub arcs: Vec<(usize, usize)>,
    pub algorithm: String,
    pub case_leaf: u8,
    pub guarantee: Option<String>,
    pub elapsed_ms: u64,
}

impl SolutionJson {
    pub fn new(sol: Option<&SteinerSolution>, label: &CaseLabel, stats: &RunStats) -> Self {
        SolutionJson {
            feasible: sol.is_some(),
            total_length: sol.map(|s| s.total_length.to_string()),
            arcs: sol.map(|s| s.arcs.clone()).unwrap_or_default(),
            algorithm: stats.algorithm.clone(),
            case_leaf: label.leaf_id,
            guarantee: stats.guarantee.map(|g| g.to_string()),
            elapsed_ms: stats.elapsed_ms,
        }
    }
}

/// One-line report with a trailing newline.
pub fn solution_to_json(sol: Option<&SteinerSolution>, label: &CaseLabel, stats: &RunStats) -> String {
    let mut s = serde_json::to_string(&SolutionJson::new(sol, label, stats)).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn solution_from_json(text: &str) -> Result<SolutionJson> {
    Ok(serde_json::from_str(text)?)
}
