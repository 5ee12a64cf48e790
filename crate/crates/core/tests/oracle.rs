mod common;

use proptest::prelude::*;
use stublab::models::{counter_example_lsts, problematic_scenarios, random_lsts, scenario_lsts, GenParams};
use stublab::oracle::{
    check_consistent_labelling, check_deadlock_preservation, check_reachable_labellings, check_stutter_trace_equivalence,
    check_weak_trace_equivalence, consistency_violations, detect_q_relapse, find_q_relapse, CompleteWitness, Direction, OracleError,
};
use stublab::stubborn::{reduce, DefaultSet};
use stublab::{ActionSet, Limits, Lsts, OracleWitness, ReducedLsts, ReductionFunction, Run, Verdict};

fn counter_example_reduction(l: &Lsts, names: &[&str]) -> ReducedLsts {
    let mut r = ReductionFunction::with_default(DefaultSet::All);
    r.set(l.initial(), l.action_set(names).unwrap());
    reduce(l, &r).unwrap()
}

/// Every complete path of an acyclic LSTS, by depth-first search.
fn complete_paths(l: &Lsts) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![(l.initial(), Vec::new())];
    while let Some((s, word)) = stack.pop() {
        if l.is_deadlock(s) {
            out.push(word.clone());
        }
        for &(a, t) in l.successors(s) {
            let mut w = word.clone();
            w.push(a);
            stack.push((t, w));
        }
    }
    out
}

fn labels_along(l: &Lsts, word: &[usize]) -> Vec<u64> {
    let mut s = l.initial();
    let mut labels = vec![l.labels(s).bits()];
    for &a in word {
        s = l.successors_by(s, a).next().unwrap();
        labels.push(l.labels(s).bits());
    }
    labels.dedup();
    labels
}

fn witness_is_genuine(l: &Lsts, w: &CompleteWitness) {
    l.check_run(&w.run).unwrap();
    assert_eq!(l.nostut_trace(&w.run).unwrap(), w.nostut);
    assert_eq!(l.vis_word(&w.run, l.invisible()).unwrap(), w.vis);
    if let Run::Finite(p) = &w.run {
        assert!(l.is_deadlock(*p.end()));
    }
}

#[test]
fn problematic_scenarios_are_two_and_five() {
    assert_eq!(problematic_scenarios().unwrap(), vec![2, 5]);
    for i in 1..=9 {
        let l = scenario_lsts(i);
        let paths = complete_paths(&l);
        assert_eq!(paths.len(), 2);
        let vis: Vec<Vec<usize>> = paths.iter().map(|w| w.iter().copied().filter(|&a| !l.is_invisible(a)).collect()).collect();
        let traces: Vec<Vec<u64>> = paths.iter().map(|w| labels_along(&l, w)).collect();
        let inconsistent = vis[0] == vis[1] && traces[0] != traces[1];
        let reported = check_consistent_labelling(&l, l.invisible(), Limits::default()).unwrap();
        assert_eq!(reported.is_fails(), inconsistent, "scenario {i}");
        if let Some(OracleWitness::Inconsistent { first, second }) = reported.witness() {
            witness_is_genuine(&l, first);
            witness_is_genuine(&l, second);
            assert_eq!(first.vis, second.vis);
            assert_ne!(first.nostut, second.nostut);
        }
    }
}

#[test]
fn consistency_violations_share_a_visible_word() {
    let l = scenario_lsts(2);
    let pairs = consistency_violations(&l, l.invisible(), Limits::default()).unwrap();
    assert_eq!(pairs.len(), 1);
    assert!(consistency_violations(&l, &ActionSet::new(), Limits::default()).unwrap().is_empty());
    let all = ActionSet::full(l.num_actions());
    assert_eq!(consistency_violations(&l, &all, Limits::default()).unwrap().len(), 1);
}

#[test]
fn relapse_on_the_weak_counter_example() {
    let l = counter_example_lsts(false);
    let path = find_q_relapse(&l, 0).unwrap();
    l.check_run(&Run::Finite(path.clone())).unwrap();
    let marks: Vec<bool> = std::iter::once(path.start).chain(path.steps.iter().map(|&(_, t)| t)).map(|s| l.labels(s).contains(0)).collect();
    let first = marks.iter().position(|&b| b).unwrap();
    let gap = first + marks[first..].iter().position(|&b| !b).unwrap();
    assert!(marks[gap..].iter().any(|&b| b));
    let red = counter_example_reduction(&l, &["a", "a_key"]);
    assert!(!detect_q_relapse(&red.lsts, 0));
}

#[test]
fn stutter_and_weak_verdicts_on_the_weak_counter_example() {
    let l = counter_example_lsts(false);
    let red = counter_example_reduction(&l, &["a", "a_key"]);
    let v = check_stutter_trace_equivalence(&l, &red, Limits::default()).unwrap();
    match v.witness() {
        Some(OracleWitness::Unmatched { direction: Direction::FullToReduced, witness }) => {
            witness_is_genuine(&l, witness);
            assert_eq!(l.format_trace(&witness.nostut), "∅{q}∅{q}");
        }
        other => panic!("{other:?}"),
    }
    let w = check_weak_trace_equivalence(&l, &red, l.invisible(), Limits::default()).unwrap();
    assert!(matches!(w, Verdict::BoundedHolds { .. }));
    assert_eq!(common::visible_prefixes(&l, 6), common::visible_prefixes(&red.lsts, 6));
}

#[test]
fn identity_reduction_is_equivalent_everywhere() {
    let l = counter_example_lsts(true);
    let all = reduce(&l, &ReductionFunction::with_default(DefaultSet::All)).unwrap();
    assert!(check_stutter_trace_equivalence(&l, &all, Limits::default()).unwrap().passes());
    assert!(check_weak_trace_equivalence(&l, &all, l.invisible(), Limits::default()).unwrap().passes());
    assert!(check_deadlock_preservation(&l, &all, Limits::default()).unwrap().verdict.passes());
    assert!(check_reachable_labellings(&l, &all).is_holds());
}

#[test]
fn tiny_limits_report_the_bound() {
    let l = counter_example_lsts(true);
    let all = reduce(&l, &ReductionFunction::with_default(DefaultSet::All)).unwrap();
    let v = check_stutter_trace_equivalence(&l, &all, Limits { repeat: 1, count: 3 });
    assert!(matches!(v, Err(OracleError::CountExceeded(_))), "{v:?}");
    let v = check_stutter_trace_equivalence(&l, &all, Limits { repeat: 1, count: 100_000 }).unwrap();
    assert_eq!(v, Verdict::bounded(Limits { repeat: 1, count: 100_000 }.bound()));
}

fn random_reduction(l: &Lsts, pick: &[u8]) -> ReducedLsts {
    let mut r = ReductionFunction::with_default(DefaultSet::All);
    for s in 0..l.num_states() {
        let mask = pick[s % pick.len()];
        r.set(s, (0..l.num_actions()).filter(|a| mask >> a & 1 == 1).collect());
    }
    reduce(l, &r).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verdicts_agree_with_prefix_sets(seed in 0u64..100_000, pick in prop::collection::vec(any::<u8>(), 1..6)) {
        let l = random_lsts(&GenParams { states: 6, actions: 3, ..GenParams::with_seed(seed) });
        let red = random_reduction(&l, &pick);

        let labels = check_reachable_labellings(&l, &red);
        prop_assert_eq!(labels.is_holds(), common::reachable_labels(&l) == common::reachable_labels(&red.lsts));

        let deadlocks = check_deadlock_preservation(&l, &red, Limits::default()).unwrap();
        if deadlocks.verdict.passes() {
            prop_assert_eq!(common::reachable_deadlocks(&l), common::reachable_deadlocks(&red.lsts));
        }

        let stutter = match check_stutter_trace_equivalence(&l, &red, Limits::default()) {
            Ok(v) => v,
            Err(OracleError::CountExceeded(_)) => return Ok(()),
        };
        match stutter.witness() {
            None => prop_assert_eq!(common::nostut_prefixes(&l, 6), common::nostut_prefixes(&red.lsts, 6)),
            Some(OracleWitness::Unmatched { direction, witness }) => {
                let own = match direction {
                    Direction::FullToReduced => &l,
                    Direction::ReducedToFull => &red.lsts,
                };
                witness_is_genuine(own, witness);
            }
            Some(other) => prop_assert!(false, "unexpected {:?}", other),
        }

        let weak = check_weak_trace_equivalence(&l, &red, l.invisible(), Limits::default());
        if matches!(weak, Ok(ref v) if v.passes()) {
            prop_assert_eq!(common::visible_prefixes(&l, 5), common::visible_prefixes(&red.lsts, 5));
        }
    }
}
