mod common;

use capsteiner::classify::{Algorithm, Verdict};
use capsteiner::dispatch::{run_algorithm, solve_auto, SolveOptions};
use capsteiner::large_cap::{
    complete_reduced_tree, is_reduced_tree_dag, is_reduced_tree_uniform, minimal_reduced_subtree, solve_cmin_k_minus_1,
};
use capsteiner::model::instance::normalize_terminals;
use capsteiner::model::solution::Mode;
use capsteiner::oracle::{oracle_mlcst, OracleLimits};
use capsteiner::suite::{suite, CapMode, InstanceSpec, LengthMode};
use capsteiner::{check_feasible_tree, extract_skeleton, Error, GraphKind, Length, SteinerSolution};

const KINDS: [GraphKind; 3] = [GraphKind::Digraph, GraphKind::Dag, GraphKind::Undirected];

fn mixed_suite(seed: u64) -> Vec<capsteiner::Instance> {
    let mut out = Vec::new();
    for kind in KINDS {
        for (i, caps) in [CapMode::Unit, CapMode::Range(1..=3), CapMode::UniformSlack(1), CapMode::MinSlack(1), CapMode::UniformIn(2..=3)]
            .into_iter()
            .enumerate()
        {
            for lengths in [LengthMode::Positive, LengthMode::Zero] {
                let spec = InstanceSpec::new(kind, 4..=9, 2..=4).caps(caps.clone()).lengths(lengths);
                out.extend(suite(&spec, 12, seed + i as u64));
            }
        }
    }
    out
}

#[test]
fn auto_dispatch_matches_the_oracle() {
    let opts = SolveOptions::default();
    let (mut solved, mut refused) = (0, 0);
    for inst in mixed_suite(7) {
        let want = common::value(&oracle_mlcst(&inst, &common::lim()).unwrap());
        match solve_auto(&inst, &opts) {
            Ok((label, out)) => {
                let got = common::value(&out.solution);
                assert_eq!(got.is_some(), want.is_some(), "leaf {} on {inst:?}", label.leaf_id);
                if let (Some(got), Some(want)) = (got, want) {
                    let g = out.guarantee.unwrap_or_else(|| panic!("optimize mode without guarantee on {inst:?}"));
                    assert!(want <= got && got <= g * want, "leaf {}: {got} vs {want}", label.leaf_id);
                    if label.verdict == Verdict::Polynomial {
                        assert_eq!(got, want, "exact leaf {} off on {inst:?}", label.leaf_id);
                    }
                    assert!(check_feasible_tree(&inst, out.solution.as_ref().unwrap()).ok);
                }
                solved += 1;
            }
            Err(Error::HardLeaf { .. }) => refused += 1,
            Err(e) => panic!("{e} on {inst:?}"),
        }
    }
    assert!(solved > 200 && refused > 0, "{solved} solved, {refused} refused");
}

#[test]
fn decision_mode_agrees_with_optimize_on_feasibility() {
    for inst in mixed_suite(11) {
        for algo in Algorithm::ALL {
            let applies = match algo {
                Algorithm::UnitCap => inst.c_max() == 1,
                Algorithm::DagFixedK | Algorithm::DagLargeCap => inst.kind == GraphKind::Dag,
                Algorithm::UniformFixedK | Algorithm::UniformKappa => {
                    inst.kind == GraphKind::Undirected && inst.uniform_capacity().is_some()
                }
                Algorithm::CminK1Fixed | Algorithm::CminK1 => inst.c_min() as usize + 1 >= inst.k(),
                Algorithm::Oracle => true,
            };
            let kappa = inst.k().saturating_sub(inst.c_min() as usize);
            if !applies || (matches!(algo, Algorithm::UniformKappa | Algorithm::DagLargeCap) && !(1..=3).contains(&kappa)) {
                continue;
            }
            if algo == Algorithm::UniformKappa && inst.uniform_capacity() != Some((inst.k() - kappa) as u32) {
                continue;
            }
            let opts = |mode| SolveOptions { mode, oracle: common::lim(), ..SolveOptions::default() };
            let d = run_algorithm(&inst, algo, &opts(Mode::Decision)).unwrap();
            let o = run_algorithm(&inst, algo, &opts(Mode::Optimize)).unwrap();
            assert_eq!(d.solution.is_some(), o.solution.is_some(), "{algo} on {inst:?}");
        }
    }
}

#[test]
fn cmin_approximation_decides_exactly() {
    for kind in KINDS {
        let spec = InstanceSpec::new(kind, 4..=10, 2..=4).caps(CapMode::MinSlack(1));
        for inst in suite(&spec, 120, 30) {
            let o = oracle_mlcst(&inst, &common::lim()).unwrap();
            let d = solve_cmin_k_minus_1(&inst, Mode::Decision).unwrap();
            assert_eq!(o.is_some(), d.is_some(), "{inst:?}");
        }
    }
}

/// Minimal reduced subtrees of optimal trees have the claimed shape and
/// complete to feasible trees.
#[test]
fn reduced_trees_are_small_and_complete() {
    let lim = OracleLimits::new(14, 28);
    for (kind, caps, uniform) in [
        (GraphKind::Undirected, CapMode::UniformSlack(1), true),
        (GraphKind::Undirected, CapMode::UniformSlack(2), true),
        (GraphKind::Dag, CapMode::UniformSlack(2), true),
        (GraphKind::Dag, CapMode::MinSlack(1), false),
        (GraphKind::Dag, CapMode::MinSlack(2), false),
    ] {
        let spec = InstanceSpec::new(kind, 4..=9, 2..=5).caps(caps);
        let mut checked = 0;
        for inst in suite(&spec, 150, 40) {
            let inst = normalize_terminals(&inst);
            if inst.n > 14 {
                continue;
            }
            let kappa = inst.k().saturating_sub(inst.c_min() as usize);
            let Some(o) = oracle_mlcst(&inst, &lim).unwrap() else { continue };
            let m = if uniform {
                minimal_reduced_subtree(&inst, &o.arcs, |a| is_reduced_tree_uniform(&inst, a, kappa))
            } else {
                minimal_reduced_subtree(&inst, &o.arcs, |a| is_reduced_tree_dag(&inst, a, kappa))
            };
            if m.is_empty() {
                assert_eq!(kappa, 0);
                continue;
            }
            let sk = extract_skeleton(&SteinerSolution::from_arcs(&inst, m.clone()).unwrap(), &inst).unwrap();
            if uniform {
                assert!(sk.terminal_count() <= 2 * kappa, "{inst:?} {m:?}");
                for v in sk.children(sk.root) {
                    assert!(sk.terminal_count_below[&v] <= kappa);
                }
            } else {
                assert!(sk.max_out_degree() <= kappa + 1 && sk.height() <= kappa + 1, "{inst:?} {m:?}");
            }
            let full = complete_reduced_tree(&inst, &m).unwrap();
            assert!(check_feasible_tree(&inst, &full).ok);
            checked += 1;
        }
        assert!(checked > 50, "{kind} {checked}");
    }
}

#[test]
fn zero_lengths_make_the_large_cap_branch_exact() {
    // DAGs with small K land on the fixed-K leaf first
    for (kind, caps, k) in [(GraphKind::Undirected, CapMode::UniformSlack(2), 4..=5), (GraphKind::Dag, CapMode::MinSlack(2), 7..=8)] {
        let spec = InstanceSpec::new(kind, 4..=10, k).caps(caps).lengths(LengthMode::Zero);
        let mut hits = 0;
        for inst in suite(&spec, 60, 50) {
            let Ok((label, out)) = solve_auto(&inst, &SolveOptions::default()) else { continue };
            if matches!(label.leaf_id, 9 | 13) {
                assert_eq!(label.verdict, Verdict::Polynomial);
                let want = oracle_mlcst(&inst, &common::lim()).unwrap();
                assert_eq!(out.solution.is_some(), want.is_some());
                assert!(out.solution.iter().all(|s| s.total_length == Length::from_integer(0)));
                hits += 1;
            }
        }
        assert!(hits > 20, "{kind}: {hits}");
    }
}
