mod common;

use capsteiner::classify::{classify_instance, Algorithm, Verdict};
use capsteiner::dispatch::{run_algorithm, solve_auto, SolveOptions};
use capsteiner::model::instance::validate_instance;
use capsteiner::Error;

#[test]
fn one_instance_per_leaf() {
    let cases = common::leaf_instances();
    let leaves: std::collections::BTreeSet<u8> = cases.iter().map(|c| c.0).collect();
    assert_eq!(leaves, (1..=13).collect());
    for (leaf, name, verdict, inst) in &cases {
        assert!(validate_instance(inst).ok, "{name}");
        let label = classify_instance(inst, None);
        assert_eq!(label.leaf_id, *leaf, "{name}");
        assert_eq!(&label.verdict, verdict, "{name}");
        assert_eq!(label.graph_kind, inst.kind);
        assert_eq!(label.is_hard_leaf(), label.chosen_algorithm() == "oracle-only");
    }
}

#[test]
fn hard_leaves_are_refused_unless_oracle_requested() {
    let opts = SolveOptions { oracle: common::lim(), ..SolveOptions::default() };
    for (leaf, name, _, inst) in common::leaf_instances() {
        let label = classify_instance(&inst, None);
        match solve_auto(&inst, &opts) {
            Err(Error::HardLeaf { leaf: l, .. }) => {
                assert!(label.is_hard_leaf(), "{name}");
                assert_eq!(l, leaf);
                let out = run_algorithm(&inst, Algorithm::Oracle, &opts).unwrap();
                assert_eq!(out.algorithm, Algorithm::Oracle);
            }
            Ok((l, out)) => {
                assert!(!label.is_hard_leaf(), "{name}");
                assert_eq!(Some(out.algorithm), l.algorithm);
            }
            Err(e) => panic!("{name}: {e}"),
        }
    }
}

#[test]
fn kappa_hint_and_cutoffs() {
    let cases = common::leaf_instances();
    let nine = &cases.iter().find(|c| c.0 == 9).unwrap().3;
    // slack 2 inferred; a hint of 1 no longer matches c = K - κ
    assert_eq!(classify_instance(nine, None).params.kappa, Some(2));
    assert_eq!(classify_instance(nine, Some(1)).leaf_id, 8);
    let thirteen = &cases.iter().find(|c| c.0 == 13).unwrap().3;
    // a larger hint still satisfies c_min >= K - κ
    assert_eq!(classify_instance(thirteen, Some(3)).leaf_id, 13);
    assert_eq!(classify_instance(thirteen, Some(4)).leaf_id, 12);
    let four = &cases.iter().find(|c| c.0 == 4).unwrap().3;
    let mut zero = four.clone();
    for e in &mut zero.edges {
        e.length = 0.into();
    }
    assert_eq!(classify_instance(&zero, None).verdict, Verdict::Polynomial);
}
