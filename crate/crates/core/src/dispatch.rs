//! Runs a named algorithm, or the one the classifier picks.

use num_rational::Ratio;

use crate::classify::{classify_instance_with, Algorithm, CaseLabel, ClassifyConfig};
use crate::error::{Error, Result};
use crate::fixed_k::{solve_dag_fixed_k_with, solve_uniform_fixed_k_with, FixedKOptions};
use crate::flow::solve_unit_capacity;
use crate::large_cap::{solve_cmin_k_minus_1, solve_cmin_k_minus_1_fixed_k, solve_dag_large_cap, solve_uniform_k_minus_kappa};
use crate::model::instance::Instance;
use crate::model::solution::{Mode, SteinerSolution};
use crate::oracle::{oracle_mlcst, OracleLimits};
use crate::steiner::ApproxReport;

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub mode: Mode,
    /// Slack for the large-capacity solvers; inferred as `K - c_min` if unset.
    pub kappa: Option<usize>,
    pub oracle: OracleLimits,
    pub classify: ClassifyConfig,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub algorithm: Algorithm,
    /// `None` means infeasible.
    pub solution: Option<SteinerSolution>,
    /// Proven ratio to the optimum; `None` when there is none (decision mode
    /// of the approximations, or a heuristic subroutine).
    pub guarantee: Option<Ratio<i64>>,
}

fn exact(algorithm: Algorithm, solution: Option<SteinerSolution>) -> Outcome {
    let guarantee = solution.is_some().then(|| Ratio::from_integer(1));
    Outcome { algorithm, solution, guarantee }
}

fn approx(algorithm: Algorithm, rep: Option<ApproxReport>) -> Outcome {
    match rep {
        Some(r) => Outcome { algorithm, solution: Some(r.solution), guarantee: r.guarantee },
        None => Outcome { algorithm, solution: None, guarantee: None },
    }
}

pub fn run_algorithm(inst: &Instance, algo: Algorithm, opts: &SolveOptions) -> Result<Outcome> {
    let kappa = opts.kappa.unwrap_or_else(|| inst.k().saturating_sub(inst.c_min() as usize));
    let fixed = FixedKOptions { mode: opts.mode, ..FixedKOptions::default() };
    let skeleton_guarantee = |o: Outcome| match opts.mode {
        Mode::Optimize => o,
        Mode::Decision => Outcome { guarantee: None, ..o },
    };
    Ok(match algo {
        Algorithm::UnitCap => exact(algo, solve_unit_capacity(inst)?),
        Algorithm::DagFixedK => skeleton_guarantee(exact(algo, solve_dag_fixed_k_with(inst, &fixed)?)),
        Algorithm::UniformFixedK => skeleton_guarantee(exact(algo, solve_uniform_fixed_k_with(inst, &fixed)?)),
        Algorithm::CminK1Fixed => exact(algo, solve_cmin_k_minus_1_fixed_k(inst)?),
        Algorithm::Oracle => exact(algo, oracle_mlcst(inst, &opts.oracle)?),
        Algorithm::UniformKappa => approx(algo, solve_uniform_k_minus_kappa(inst, kappa, opts.mode)?),
        Algorithm::DagLargeCap => approx(algo, solve_dag_large_cap(inst, kappa, opts.mode)?),
        Algorithm::CminK1 => approx(algo, solve_cmin_k_minus_1(inst, opts.mode)?),
    })
}

/// Classifies, then runs the chosen solver. Hard leaves are refused with
/// [`Error::HardLeaf`]; run [`Algorithm::Oracle`] explicitly for those.
pub fn solve_auto(inst: &Instance, opts: &SolveOptions) -> Result<(CaseLabel, Outcome)> {
    let label = classify_instance_with(inst, opts.kappa, &opts.classify);
    let Some(algo) = label.algorithm else {
        return Err(Error::HardLeaf { leaf: label.leaf_id, kind: inst.kind.as_str() });
    };
    let opts = SolveOptions { kappa: label.params.kappa.or(opts.kappa), ..opts.clone() };
    let out = run_algorithm(inst, algo, &opts)?;
    Ok((label, out))
}
