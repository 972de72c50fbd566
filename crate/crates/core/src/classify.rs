//! Which of the thirteen known cases an instance falls in, what is known
//! about its complexity, and which solver handles it.
//!
//! Leaves, per graph kind (first match wins):
//!
//! | kind | condition | leaf |
//! |---|---|---|
//! | any | all capacities 1 | 1 |
//! | any | `K = 2` | 2 |
//! | any | `c_min >= K-1`, `K` fixed / not fixed | 5 / 4 |
//! | digraph | otherwise | 6 |
//! | undirected | uniform `c = K-κ`, lengths 0 | 9 |
//! | undirected | uniform, `K` fixed | 10 |
//! | undirected | uniform `c = K-κ`, positive lengths | 3 |
//! | undirected | uniform, otherwise | 8 |
//! | undirected | non-uniform | 7 |
//! | dag | `K` fixed | 11 |
//! | dag | `c_min >= K-κ`, lengths 0 / positive lengths | 13 / 3 |
//! | dag | otherwise | 12 |
//!
//! "Fixed" and the admissible κ are concrete cut-offs in [`ClassifyConfig`].

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixed_k::DEFAULT_MAX_K;
use crate::large_cap::CMIN_MAX_K;
use crate::model::instance::{GraphKind, Instance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    UnitCap,
    DagFixedK,
    UniformFixedK,
    UniformKappa,
    DagLargeCap,
    CminK1Fixed,
    CminK1,
    Oracle,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::UnitCap,
        Algorithm::DagFixedK,
        Algorithm::UniformFixedK,
        Algorithm::UniformKappa,
        Algorithm::DagLargeCap,
        Algorithm::CminK1Fixed,
        Algorithm::CminK1,
        Algorithm::Oracle,
    ];

    /// Command-line spelling.
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::UnitCap => "unit-cap",
            Algorithm::DagFixedK => "dag-fixed-k",
            Algorithm::UniformFixedK => "uniform-fixed-k",
            Algorithm::UniformKappa => "uniform-kappa",
            Algorithm::DagLargeCap => "dag-large-cap",
            Algorithm::CminK1Fixed => "cmin-k1-fixed",
            Algorithm::CminK1 => "cmin-k1",
            Algorithm::Oracle => "oracle",
        }
    }

    /// Name of the library function that implements it.
    pub fn operation(self) -> &'static str {
        match self {
            Algorithm::UnitCap => "solve_unit_capacity",
            Algorithm::DagFixedK => "solve_dag_fixed_k",
            Algorithm::UniformFixedK => "solve_uniform_fixed_k",
            Algorithm::UniformKappa => "solve_uniform_k_minus_kappa",
            Algorithm::DagLargeCap => "solve_dag_large_cap",
            Algorithm::CminK1Fixed => "solve_cmin_k_minus_1_fixed_k",
            Algorithm::CminK1 => "solve_cmin_k_minus_1",
            Algorithm::Oracle => "oracle_mlcst",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Polynomial,
    /// Ratio as a formula in ρ (Steiner tree) and ρ' (disjoint paths).
    Approximable(String),
    NpHard,
    Open,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Polynomial => f.write_str("polynomial"),
            Verdict::Approximable(r) => write!(f, "approximable({r})"),
            Verdict::NpHard => f.write_str("np-hard"),
            Verdict::Open => f.write_str("open"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LengthClass {
    Zero,
    Uniform,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseParams {
    pub k: usize,
    pub k_fixed: bool,
    pub c_min: u32,
    pub c_max: u32,
    pub uniform_capacity: bool,
    /// Slack used for the large-capacity leaves, when one applies.
    pub kappa: Option<usize>,
    pub lengths: LengthClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseLabel {
    pub leaf_id: u8,
    pub graph_kind: GraphKind,
    pub params: CaseParams,
    pub verdict: Verdict,
    /// `None` for hard leaves: only the exhaustive oracle applies, and only
    /// on explicit request.
    pub algorithm: Option<Algorithm>,
}

impl CaseLabel {
    /// The operation name, or `oracle-only`.
    pub fn chosen_algorithm(&self) -> &'static str {
        self.algorithm.map_or("oracle-only", Algorithm::operation)
    }

    pub fn is_hard_leaf(&self) -> bool {
        self.algorithm.is_none()
    }
}

impl Serialize for GraphKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifyConfig {
    /// Largest κ for the large-capacity leaves; their search grows like
    /// `(κ+1)^(κ+1)`.
    pub kappa_max: usize,
    /// `K` counts as fixed for skeleton enumeration up to here.
    pub fixed_k_max: usize,
    /// `K` counts as fixed for the `c_min = K-1` branch-point search up to here.
    pub cmin_fixed_k_max: usize,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { kappa_max: 3, fixed_k_max: DEFAULT_MAX_K, cmin_fixed_k_max: CMIN_MAX_K }
    }
}

pub fn classify_instance(inst: &Instance, kappa_hint: Option<usize>) -> CaseLabel {
    classify_instance_with(inst, kappa_hint, &ClassifyConfig::default())
}

fn length_class(inst: &Instance) -> LengthClass {
    if inst.all_lengths_zero() {
        LengthClass::Zero
    } else if inst.edges.iter().all(|e| e.length == inst.edges[0].length) {
        LengthClass::Uniform
    } else {
        LengthClass::General
    }
}

/// `κ_hint` overrides the inferred slack `K - c_min`.
pub fn classify_instance_with(inst: &Instance, kappa_hint: Option<usize>, cfg: &ClassifyConfig) -> CaseLabel {
    use Algorithm::*;
    let k = inst.k();
    let (c_min, c_max) = (inst.c_min(), inst.c_max());
    let uniform = inst.uniform_capacity();
    let lengths = length_class(inst);
    let zero = lengths == LengthClass::Zero;
    let kappa = kappa_hint.unwrap_or(k.saturating_sub(c_min as usize));
    // the slack the large-capacity solvers accept
    let large = kappa <= cfg.kappa_max
        && match inst.kind {
            GraphKind::Undirected => uniform.is_some_and(|c| c as usize + kappa == k),
            _ => c_min as usize + kappa >= k,
        };
    let mut params = CaseParams {
        k,
        k_fixed: k <= cfg.fixed_k_max,
        c_min,
        c_max,
        uniform_capacity: uniform.is_some(),
        kappa: None,
        lengths,
    };
    let (leaf, verdict, algo) = if c_max == 1 {
        (1, Verdict::Polynomial, Some(UnitCap))
    } else if k == 2 {
        (2, Verdict::Polynomial, Some(CminK1Fixed))
    } else if c_min as usize + 1 >= k {
        params.k_fixed = k <= cfg.cmin_fixed_k_max;
        if params.k_fixed {
            (5, Verdict::Polynomial, Some(CminK1Fixed))
        } else if zero {
            (4, Verdict::Polynomial, Some(CminK1))
        } else {
            (4, Verdict::Approximable("1+rho".into()), Some(CminK1))
        }
    } else {
        match inst.kind {
            GraphKind::Digraph => (6, Verdict::NpHard, None),
            GraphKind::Undirected => match uniform {
                Some(_) if large && zero => (9, Verdict::Polynomial, Some(UniformKappa)),
                Some(_) if params.k_fixed => (10, Verdict::Open, Some(UniformFixedK)),
                Some(_) if large => (3, Verdict::NpHard, Some(UniformKappa)),
                Some(_) => (8, Verdict::NpHard, None),
                None => (7, Verdict::NpHard, None),
            },
            GraphKind::Dag => {
                if params.k_fixed {
                    (11, Verdict::Polynomial, Some(DagFixedK))
                } else if large && zero {
                    (13, Verdict::Polynomial, Some(DagLargeCap))
                } else if large {
                    (3, Verdict::NpHard, Some(DagLargeCap))
                } else {
                    (12, Verdict::NpHard, None)
                }
            }
        }
    };
    if matches!(algo, Some(UniformKappa | DagLargeCap)) {
        params.kappa = Some(kappa);
    }
    CaseLabel { leaf_id: leaf, graph_kind: inst.kind, params, verdict, algorithm: algo }
}
