mod common;

use std::collections::{BTreeSet, HashSet};

use capsteiner::disjoint_paths::{labvdp_dag_dp, LabVdpInstance};
use capsteiner::fixed_k::{build_labvdp_from_skeleton, solve_dag_fixed_k, solve_uniform_fixed_k};
use capsteiner::flow::solve_unit_capacity;
use capsteiner::io::{parse_dimacs, parse_stp, read_bench_csv, write_bench_csv, write_dimacs, write_stp, BenchRow};
use capsteiner::large_cap::{solve_cmin_k_minus_1, solve_dag_large_cap, solve_uniform_k_minus_kappa};
use capsteiner::model::instance::{normalize_lengths, normalize_terminals, to_digraph, validate_instance};
use capsteiner::model::skeleton::l_min_bound;
use capsteiner::model::solution::Mode;
use capsteiner::oracle::{oracle_mlcst, oracle_steiner, oracle_vdisj, OracleLimits};
use capsteiner::reductions::{
    gen_from_3sat3, gen_from_sat, gen_from_vdp, gen_from_vdp_squared, gen_from_vdp_uniform, random_vdp_instance, CnfFormula,
};
use capsteiner::skeletons::enumerate_potential_skeletons;
use capsteiner::steiner::{dreyfus_wagner, steiner_approx};
use capsteiner::suite::{random_instance, rng, CapMode, InstanceSpec, LengthMode};
use capsteiner::{check_feasible_tree, extract_skeleton, skeleton_bounds, GraphKind, Instance, Length, ViolationKind};
use proptest::prelude::*;
use proptest::sample::select;

const KINDS: [GraphKind; 3] = [GraphKind::Digraph, GraphKind::Dag, GraphKind::Undirected];

fn kind() -> impl Strategy<Value = GraphKind> {
    select(KINDS.to_vec())
}

fn caps() -> impl Strategy<Value = CapMode> {
    prop_oneof![
        Just(CapMode::Unit),
        (1usize..=2).prop_map(CapMode::UniformSlack),
        (1usize..=2).prop_map(CapMode::MinSlack),
        Just(CapMode::Range(1..=3)),
    ]
}

fn lengths() -> impl Strategy<Value = LengthMode> {
    select(vec![LengthMode::Zero, LengthMode::Positive, LengthMode::NonNegative, LengthMode::Rational])
}

/// Small instance drawn from the suite generator.
fn instance(kinds: impl Strategy<Value = GraphKind>, caps: impl Strategy<Value = CapMode>, max_k: usize) -> impl Strategy<Value = Instance> {
    (kinds, caps, lengths(), any::<u64>()).prop_map(move |(kind, caps, lengths, seed)| {
        let spec = InstanceSpec::new(kind, 4..=9, 2..=max_k).caps(caps).lengths(lengths);
        random_instance(&spec, &mut rng(seed))
    })
}

fn opt(inst: &Instance) -> Option<Length> {
    common::value(&oracle_mlcst(inst, &common::lim()).unwrap())
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn every_solver_output_is_a_feasible_tree(inst in instance(kind(), caps(), 4)) {
        let mut outs = Vec::new();
        if inst.c_max() == 1 {
            outs.extend(solve_unit_capacity(&inst).unwrap());
        }
        if inst.kind == GraphKind::Dag {
            outs.extend(solve_dag_fixed_k(&inst).unwrap());
        }
        if inst.kind == GraphKind::Undirected && inst.uniform_capacity().is_some() {
            outs.extend(solve_uniform_fixed_k(&inst).unwrap());
        }
        let kappa = inst.k().saturating_sub(inst.c_min() as usize);
        if (1..=2).contains(&kappa) {
            if inst.kind == GraphKind::Dag {
                outs.extend(solve_dag_large_cap(&inst, kappa, Mode::Optimize).unwrap().map(|r| r.solution));
            }
            if inst.kind == GraphKind::Undirected && inst.uniform_capacity().is_some() {
                outs.extend(solve_uniform_k_minus_kappa(&inst, kappa, Mode::Optimize).unwrap().map(|r| r.solution));
            }
        }
        if kappa <= 1 {
            outs.extend(solve_cmin_k_minus_1(&inst, Mode::Optimize).unwrap().map(|r| r.solution));
        }
        for s in &outs {
            let rep = check_feasible_tree(&inst, s);
            prop_assert!(rep.ok, "{:?}", rep);
        }
    }

    #[test]
    fn minimal_optima_respect_skeleton_bounds(inst in instance(kind(), caps(), 4)) {
        let inst = normalize_terminals(&inst);
        prop_assume!(inst.n <= 16);
        if let Some(o) = oracle_mlcst(&inst, &common::lim()).unwrap() {
            let sk = extract_skeleton(&o, &inst).unwrap();
            let (max_n, _) = skeleton_bounds(inst.k(), sk.root_degree);
            prop_assert!(sk.vertex_count() <= max_n);
            prop_assert!(sk.l_min() <= l_min_bound(sk.vertex_count(), sk.root_degree));
        }
    }

    #[test]
    fn normalized_lengths_keep_the_optimal_tree(inst in instance(kind(), caps(), 4)) {
        let (scaled, _) = normalize_lengths(&inst);
        prop_assert!(scaled.edges.iter().all(|e| e.length > Length::from_integer(0) && e.length.is_integer()));
        let o = oracle_mlcst(&scaled, &common::lim()).unwrap();
        let on_original = o.map(|s| inst.total_length(&s.arcs).unwrap());
        prop_assert_eq!(on_original, opt(&inst));
    }

    #[test]
    fn large_capacities_reduce_to_plain_steiner(inst in instance(kind(), Just(CapMode::Range(1..=1)), 4)) {
        let mut big = inst.clone();
        let k = big.k() as u32;
        big.edges.iter_mut().for_each(|e| e.capacity = k);
        let plain = oracle_steiner(&inst, &common::lim()).unwrap();
        prop_assert_eq!(opt(&big), Some(plain.total_length));
        prop_assert_eq!(dreyfus_wagner(&inst).unwrap().total_length, plain.total_length);
    }

    #[test]
    fn raising_a_capacity_never_hurts(inst in instance(kind(), caps(), 4), pick in any::<prop::sample::Index>()) {
        let mut more = inst.clone();
        let i = pick.index(more.edges.len());
        more.edges[i].capacity += 1;
        match (opt(&inst), opt(&more)) {
            (Some(a), Some(b)) => prop_assert!(b <= a),
            (Some(_), None) => prop_assert!(false, "raising a capacity made the instance infeasible"),
            _ => {}
        }
    }

    #[test]
    fn unit_capacity_digraph_never_uses_both_directions(inst in instance(Just(GraphKind::Undirected), Just(CapMode::Unit), 4)) {
        let d = to_digraph(&inst).unwrap();
        let s = solve_unit_capacity(&d).unwrap();
        if let Some(s) = &s {
            let arcs: HashSet<_> = s.arcs.iter().copied().collect();
            prop_assert!(arcs.iter().all(|&(u, v)| !arcs.contains(&(v, u))));
        }
        prop_assert_eq!(common::value(&s), common::value(&solve_unit_capacity(&inst).unwrap()));
    }

    #[test]
    fn approximation_is_bounded_by_the_exact_tree(inst in instance(kind(), caps(), 6)) {
        let exact = dreyfus_wagner(&inst).unwrap().total_length;
        let a = steiner_approx(&inst).unwrap();
        prop_assert!(exact <= a.solution.total_length);
        if let Some(g) = a.guarantee {
            prop_assert!(a.solution.total_length <= g * exact);
        }
        if inst.kind == GraphKind::Undirected {
            prop_assert!(a.solution.total_length <= Length::from_integer(2) * exact);
        }
    }
}

fn labvdp() -> impl Strategy<Value = LabVdpInstance> {
    (4usize..=10, 1usize..=3, any::<u64>()).prop_map(|(n, p, seed)| common::random_labvdp_dag(&mut rng(seed), n.max(2 * p), p, 0.4))
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn full_label_sets_match_disjoint_paths(inst in labvdp()) {
        let mut g = inst.graph.clone();
        g.arcs.iter_mut().for_each(|a| a.len = 0);
        let all = BTreeSet::from([1, 2, 3]);
        let full = LabVdpInstance::with_capacity_labels(g.clone(), inst.pairs.clone(), vec![all; inst.pairs.len()]);
        let dp = labvdp_dag_dp(&full).unwrap();
        let brute = oracle_vdisj(&g, &inst.pairs, &OracleLimits::new(16, 64)).unwrap();
        prop_assert_eq!(dp.is_some(), brute.is_some());
    }

    #[test]
    fn growing_a_label_set_never_hurts(inst in labvdp(), pair in any::<prop::sample::Index>(), label in 1u32..=3) {
        let before = labvdp_dag_dp(&inst).unwrap().map(|r| r.total_length);
        let mut wider = inst.clone();
        wider.label_sets[pair.index(inst.pairs.len())].insert(label);
        let after = labvdp_dag_dp(&wider).unwrap().map(|r| r.total_length);
        match (before, after) {
            (Some(b), Some(a)) => prop_assert!(a <= b),
            (Some(_), None) => prop_assert!(false, "widening a label set lost feasibility"),
            _ => {}
        }
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn skeleton_enumeration_is_duplicate_free_and_bounded(inst in instance(kind(), caps(), 3)) {
        let inst = normalize_terminals(&inst);
        let mut seen = HashSet::new();
        for ps in enumerate_potential_skeletons(&inst, &inst.terminals) {
            let mut arcs = ps.skeleton.arcs.clone();
            arcs.sort_unstable();
            prop_assert!(seen.insert(arcs), "duplicate skeleton");
            let (max_n, _) = skeleton_bounds(inst.k(), ps.skeleton.root_degree);
            prop_assert!(ps.skeleton.vertex_count() <= max_n);
            prop_assert!(ps.junction_choice.len() < inst.k());
        }
    }

    #[test]
    fn a_feasible_dag_has_a_feasible_skeleton_expansion(inst in instance(Just(GraphKind::Dag), caps(), 3)) {
        let inst = normalize_terminals(&inst);
        prop_assume!(inst.n <= 16);
        let feasible = opt(&inst).is_some();
        let expanded = enumerate_potential_skeletons(&inst, &inst.terminals)
            .any(|ps| labvdp_dag_dp(&build_labvdp_from_skeleton(&inst, &ps).0).unwrap().is_some());
        prop_assert!(!feasible || expanded);
    }
}

proptest! {
    #[test]
    fn stp_write_then_parse_is_identity(inst in instance(kind(), caps(), 6)) {
        let text = write_stp(&inst);
        prop_assert_eq!(parse_stp(&text).unwrap(), inst);
    }

    #[test]
    fn dimacs_write_then_parse_is_identity(vars in 1usize..=5, raw in prop::collection::vec(prop::collection::vec((1i32..=5, any::<bool>()), 1..=4), 1..=6)) {
        let clauses: Vec<Vec<i32>> = raw
            .into_iter()
            .map(|c| c.into_iter().map(|(v, neg)| {
                let v = (v - 1) % vars as i32 + 1;
                if neg { -v } else { v }
            }).collect())
            .collect();
        if let Ok(f) = CnfFormula::new(vars, clauses) {
            prop_assert_eq!(parse_dimacs(&write_dimacs(&f)).unwrap(), f);
        }
    }

    #[test]
    fn bench_csv_round_trips(rows in prop::collection::vec(bench_row(), 0..8)) {
        let mut buf = Vec::new();
        write_bench_csv(&rows, &mut buf).unwrap();
        prop_assert_eq!(read_bench_csv(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn gadget_sizes_follow_their_formulas(kind in kind(), n in 4usize..=7, seed in any::<u64>(), k in 4usize..=7, c in 2u32..=5) {
        let mut r = rng(seed);
        let v = random_vdp_instance(kind, n, 2, 0.45, &mut r);
        let m = v.edges.len();
        let img = gen_from_vdp(&v).unwrap();
        prop_assert_eq!((img.k(), img.n, img.edges.len()), (3, n + 4, m + 5));
        prop_assert!(well_formed(&img));
        if c as usize <= k - 2 {
            let img = gen_from_vdp_uniform(&v, k, c).unwrap();
            prop_assert_eq!((img.k(), img.n, img.edges.len()), (k, n + 2 + k, m + k + 3));
            prop_assert_eq!(img.uniform_capacity(), Some(c));
        }
        let v3 = random_vdp_instance(kind, 6, 3, 0.45, &mut r);
        let img = gen_from_vdp(&v3).unwrap();
        prop_assert_eq!(img.k(), 6);
        let img = gen_from_vdp_squared(&v3).unwrap();
        prop_assert_eq!((img.k(), img.n, img.edges.len()), (9, 6 + 3 + 9, v3.edges.len() + 1 + 4 + 9));
        prop_assert_eq!(img.uniform_capacity(), Some(3));
    }
}

/// Unreachable terminals are fine: the base may have no path for some pair.
fn well_formed(inst: &Instance) -> bool {
    validate_instance(inst).violations.iter().all(|v| v.kind == ViolationKind::UnreachableTerminal)
}

fn bench_row() -> impl Strategy<Value = BenchRow> {
    let status = select(vec!["solved", "infeasible", "refused", "error"]);
    let text = "[a-z0-9,\" ._/-]{0,12}";
    // empty optional fields read back as None
    let value = "[0-9/-]{1,8}";
    (text, kind(), (2usize..30, 1usize..90, 2usize..9, 1u8..=13), status, prop::option::of(value), prop::option::of(value), any::<u32>())
        .prop_map(|(file, kind, (n, m, k, leaf), status, total, guarantee, ms)| BenchRow {
            file,
            kind: kind.as_str().into(),
            n,
            m,
            k,
            case_leaf: leaf,
            algorithm: "solve_dag_fixed_k".into(),
            mode: "optimize".into(),
            status: status.into(),
            total_length: total,
            guarantee,
            elapsed_ms: ms as u64,
        })
}

#[test]
fn three_sat3_terminal_count() {
    for (vars, clauses) in [(4, vec![vec![1, -2, 3], vec![-2, -3, 4]]), (2, vec![vec![1, 2], vec![-1], vec![-2]])] {
        let f = CnfFormula::new(vars, clauses).unwrap();
        for c in 2..=4u32 {
            for kind in [GraphKind::Dag, GraphKind::Undirected] {
                let img = gen_from_3sat3(&f, c, kind).unwrap();
                assert_eq!(img.k(), c as usize * f.vars + f.clauses.len());
                assert_eq!(img.uniform_capacity(), Some(c));
                assert!(validate_instance(&img).ok);
            }
        }
    }
}

#[test]
fn sat_gadget_terminal_count() {
    let f = CnfFormula::new(3, vec![vec![1, -2], vec![1, 2, 3], vec![-1, 2, -3]]).unwrap();
    for (k, cmin, cmax) in [(3, 1, 2), (4, 2, 3), (5, 1, 4), (6, 3, 5)] {
        let img = gen_from_sat(&f, k, cmin, cmax).unwrap();
        assert_eq!(img.k(), k);
        assert_eq!((img.c_min(), img.c_max()), (cmin, cmax));
        assert!(validate_instance(&img).ok);
    }
}
