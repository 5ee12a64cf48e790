//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Library verdicts are cross-checked against the brute-force
//! references in `common` wherever a reference exists.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stublab::lsts::Path;
use stublab::models::{counter_example_lsts, inconsistent_props, builtin_model, q_l_as_table, random_lsts, GenParams, MODEL_BOX, MODEL_STATE_CAP};
use stublab::oracle::{self, Direction};
use stublab::poly::Monomial;
use stublab::props::{verify_invisibility_witness, Classifier, InvisibilityWitness};
use stublab::stubborn::{
    check_condition, check_l, compute_stubborn_pn, default_bound, explore_with_por, key_actions, leadsto_closure, reduce, DefaultSet,
};
use stublab::{
    build_lsts, ActionSet, AtomicProp, Condition, ConditionWitness, InvisibilityFlags, LabelSet, Limits, Lsts, Marking, MultiPoly,
    NetSystem, OracleWitness, PetriNet, PorMode, ReducedLsts, ReductionFunction, Run, StateId, Verdict,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn limits() -> Limits {
    Limits::default()
}

fn set(l: &Lsts, names: &[&str]) -> ActionSet {
    l.action_set(names).expect("known actions")
}

fn fmt_set(l: &Lsts, s: &ActionSet) -> String {
    let names: Vec<&str> = s.iter().map(|a| l.action_name(a)).collect();
    format!("{{{}}}", names.join(","))
}

fn net_set(net: &PetriNet, s: &ActionSet) -> String {
    let names: Vec<&str> = s.iter().map(|t| net.transition_name(t)).collect();
    format!("{{{}}}", names.join(","))
}

fn ce_reduction(l: &Lsts, names: &[&str]) -> ReductionFunction {
    let mut r = ReductionFunction::with_default(DefaultSet::All);
    r.set(l.initial(), set(l, names));
    r
}

fn q_word() -> Vec<u64> {
    let q = LabelSet::single(0).bits();
    vec![0, q, 0, q]
}

/// Stutter equivalence fails with the lost trace ∅{q}∅{q}, and the
/// reference prefix sets agree that only the full LSTS has it.
fn lost_trace(l: &Lsts, red: &ReducedLsts) -> Result<String, String> {
    let v = oracle::check_stutter_trace_equivalence(l, red, limits()).map_err(e)?;
    let Some(OracleWitness::Unmatched { direction, witness }) = v.witness() else {
        return Err(format!("stutter {}", v.status()));
    };
    let trace = l.format_trace(&witness.nostut);
    l.check_run(&witness.run).map_err(e)?;
    let replayed = l.nostut_trace(&witness.run).map_err(e)? == witness.nostut;
    let full_pre = common::nostut_prefixes(l, 4);
    let red_pre = common::nostut_prefixes(&red.lsts, 4);
    let reference = full_pre.contains(&q_word()) && !red_pre.contains(&q_word());
    if *direction == Direction::FullToReduced && trace == "∅{q}∅{q}" && replayed && reference {
        Ok(trace)
    } else {
        Err(format!("{direction:?} {trace}, replay {replayed}, reference {reference}"))
    }
}

// 1 ---------------------------------------------------------------------

fn weak_counter_example() -> Outcome {
    let l = counter_example_lsts(false);
    let s = l.initial();
    let rs = set(&l, &["a", "a_key"]);
    let bound = default_bound(l.num_states());
    let mut notes = Vec::new();
    let mut ok = bound >= 3;
    for c in [Condition::D1, Condition::D2w, Condition::V, Condition::I] {
        let v = check_condition(&l, &s, &rs, c, bound).map_err(e)?;
        let reference = match c {
            Condition::D1 => common::d1(&l, s, &rs, bound, false),
            Condition::D2w => common::d2w(&l, s, &rs),
            Condition::V => common::v(&l, s, &rs),
            _ => common::i(&l, s, &rs),
        };
        let want_bounded = c == Condition::D1;
        ok &= reference && if want_bounded { matches!(&v, Verdict::BoundedHolds { .. }) } else { v.is_holds() };
        notes.push(format!("{c} {}", v.status()));
    }
    let r = ce_reduction(&l, &["a", "a_key"]);
    let red = reduce(&l, &r).map_err(e)?;
    let lv = check_l(&red);
    ok &= lv.is_holds();
    let dropped: Vec<&str> = (0..l.num_states()).filter(|&s| !red.contains(s)).map(|s| l.state_name(s)).collect();
    let dropped_transitions = l.transitions().len() - red.num_transitions();
    ok &= dropped == ["2", "3"] && dropped_transitions == 5;
    notes.push(format!("L {}, dropped states {:?} and {dropped_transitions} transitions (figure: 2 dashed states)", lv.status(), dropped));
    let lost = lost_trace(&l, &red);
    ok &= lost.is_ok();
    notes.push(format!("stutter fails {}", lost.unwrap_or_else(|x| x)));
    let (rf, rr) = (oracle::detect_q_relapse(&l, 0), oracle::detect_q_relapse(&red.lsts, 0));
    ok &= rf && !rr;
    notes.push(format!("relapse full {rf} reduced {rr}"));
    let weak = oracle::check_weak_trace_equivalence(&l, &red, l.invisible(), limits()).map_err(e)?;
    let vis_same = common::visible_prefixes(&l, 6) == common::visible_prefixes(&red.lsts, 6);
    ok &= weak.is_bounded() && vis_same;
    notes.push(format!("weak {}", weak.status()));
    ensure(ok, notes.join("; "))
}

// 2 ---------------------------------------------------------------------

fn strong_counter_example() -> Outcome {
    let l = counter_example_lsts(true);
    let s = l.initial();
    let rs = set(&l, &["a"]);
    let bound = default_bound(l.num_states());
    let mut notes = Vec::new();
    let mut ok = true;
    for c in [Condition::D0, Condition::D1, Condition::D2, Condition::V, Condition::I] {
        let v = check_condition(&l, &s, &rs, c, bound).map_err(e)?;
        let reference = match c {
            Condition::D0 => common::d0(&l, s, &rs),
            Condition::D1 => common::d1(&l, s, &rs, bound, false),
            Condition::D2 => common::d2(&l, s, &rs),
            Condition::V => common::v(&l, s, &rs),
            _ => common::i(&l, s, &rs),
        };
        ok &= reference && if c == Condition::D1 { v.is_bounded() } else { v.is_holds() };
        notes.push(format!("{c} {}", v.status()));
    }
    let red = reduce(&l, &ce_reduction(&l, &["a"])).map_err(e)?;
    let lost = lost_trace(&l, &red);
    ok &= lost.is_ok();
    notes.push(format!("stutter fails {}", lost.unwrap_or_else(|x| x)));
    ensure(ok, notes.join("; "))
}

// 3 ---------------------------------------------------------------------

fn conditions_pass(l: &Lsts, red: &ReducedLsts, conds: &[Condition]) -> Result<bool, String> {
    let bound = default_bound(l.num_states());
    for s in red.states() {
        for &c in conds {
            if check_condition(l, &s, &red.r[&s], c, bound).map_err(e)?.is_fails() {
                return Ok(false);
            }
        }
    }
    Ok(check_l(red).passes())
}

/// Stutter equivalence by the library, with the reference prefix sets as
/// a necessary condition on every passing verdict.
fn stutter_preserved(l: &Lsts, red: &ReducedLsts) -> Result<bool, String> {
    let v = oracle::check_stutter_trace_equivalence(l, red, limits()).map_err(e)?;
    let reference = common::nostut_prefixes(l, 6) == common::nostut_prefixes(&red.lsts, 6)
        && common::deadlocking_nostuts(l, 6) == common::deadlocking_nostuts(&red.lsts, 6);
    if v.passes() && !reference {
        return Err("library and reference disagree".into());
    }
    Ok(matches!(v, Verdict::BoundedHolds { .. }))
}

const FIX: [Condition; 4] = [Condition::D1p, Condition::D2w, Condition::V, Condition::I];

fn fix_validation() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for strong in [false, true] {
        let l = counter_example_lsts(strong);
        let s = l.initial();
        let drawn = if strong { set(&l, &["a"]) } else { set(&l, &["a", "a_key"]) };
        let v = check_condition(&l, &s, &drawn, Condition::D1p, default_bound(l.num_states())).map_err(e)?;
        let action_a = matches!(v.witness(), Some(ConditionWitness::Commutation { action, .. }) if l.action_name(*action) == "a");
        let reference = !common::d1(&l, s, &drawn, default_bound(l.num_states()), true);
        ok &= action_a && reference;
        let n = l.num_actions();
        let mut accepted = 0;
        for bits in 0u32..(1 << n) {
            let rs: ActionSet = (0..n).filter(|a| bits & (1 << a) != 0).collect();
            let mut r = ReductionFunction::with_default(DefaultSet::All);
            r.set(s, rs);
            let red = reduce(&l, &r).map_err(e)?;
            if conditions_pass(&l, &red, &FIX)? {
                accepted += 1;
                ok &= stutter_preserved(&l, &red)?;
            }
        }
        notes.push(format!("{}: D1p fails on a {action_a}, {accepted} accepted r(ŝ)", if strong { "ce-strong" } else { "ce-weak" }));
    }
    let mut nets = 0;
    let mut accepted = 0;
    for (seed, net, props) in common::corpus(200) {
        ok &= common::within_corpus_limits(&net, 1000);
        let run = explore_with_por(&net, &props, InvisibilityFlags::PLAIN, PorMode::LtlWeak, 1000, MODEL_BOX).map_err(e)?;
        nets += 1;
        let l = &run.full.lsts;
        if conditions_pass(l, &run.reduced, &FIX)? {
            accepted += 1;
            if !stutter_preserved(l, &run.reduced)? {
                ok = false;
                notes.push(format!("seed {seed} loses a trace"));
            }
        }
    }
    ok &= accepted == nets;
    notes.push(format!("{accepted}/{nets} random reductions pass the fixed conditions and preserve stutter traces"));
    ensure(ok, notes.join("; "))
}

// 4 ---------------------------------------------------------------------

fn key_action_verdicts() -> Outcome {
    let m = builtin_model("fig-motivating").map_err(e)?;
    let net = &m.net_model().map_err(e)?.net;
    let sys = NetSystem::new(net, ActionSet::new());
    let r = net.transitions_named(&["t3", "t5", "t6"]).map_err(e)?;
    let keys = key_actions(&sys, net.initial(), &r).map_err(e)?;
    let mut mk = net.initial().clone();
    for t in ["t1", "t2", "t4"] {
        mk = net.fire(&mk, net.transition(t).map_err(e)?).map_err(e)?;
    }
    let t5 = net.transition("t5").map_err(e)?;
    let t6 = net.transition("t6").map_err(e)?;
    let reasons = !net.is_enabled(net.initial(), t5) && !net.is_enabled(&mk, t6);
    ensure(net_set(net, &keys) == "{t3}" && reasons, format!("keys {}, t5 disabled and t1 t2 t4 disables t6: {reasons}", net_set(net, &keys)))
}

// 5 ---------------------------------------------------------------------

fn example_por_verdicts() -> Outcome {
    let m = builtin_model("fig-example-por").map_err(e)?;
    let n = m.net_lsts().map_err(e)?;
    let l = &n.lsts;
    let bound = default_bound(l.num_states());
    let s1 = n.state_of_digits("1000100").ok_or("s1")?;
    let a = set(l, &["a"]);
    let d1 = check_condition(l, &s1, &a, Condition::D1, bound).map_err(e)?;
    let d2w = check_condition(l, &s1, &a, Condition::D2w, bound).map_err(e)?;
    let mut ok = d1.is_bounded() && d2w.is_holds() && common::d1(l, s1, &a, bound, false) && common::d2w(l, s1, &a);
    let mut notes = vec![format!("s1 {{a}}: D1 {}, D2w {}", d1.status(), d2w.status())];
    let s4 = n.state_of_digits("0101001").ok_or("s4")?;
    for (names, word, act) in [(&["c"][..], "w d", "c"), (&["c", "d"], "w", "d")] {
        let rs = set(l, names);
        let v = check_condition(l, &s4, &rs, Condition::D1, bound).map_err(e)?;
        let got = match v.witness() {
            Some(ConditionWitness::Commutation { action, path, target }) => {
                let mut full = path.actions();
                full.push(*action);
                let replays = common::replay(l, s4, &full).contains(target);
                let mut swapped = vec![*action];
                swapped.extend(path.actions());
                let commutes = common::replay(l, s4, &swapped).contains(target);
                ok &= l.format_actions(&path.actions()) == word && l.action_name(*action) == act && replays && !commutes;
                format!("{}: fails on {} then {}", fmt_set(l, &rs), l.format_actions(&path.actions()), l.action_name(*action))
            }
            _ => {
                ok = false;
                format!("{}: {}", fmt_set(l, &rs), v.status())
            }
        };
        ok &= !common::d1(l, s4, &rs, bound, false);
        notes.push(got);
    }
    ensure(ok, notes.join("; "))
}

// 6 ---------------------------------------------------------------------

fn leadsto_verdicts() -> Outcome {
    let m = builtin_model("fig-motivating").map_err(e)?;
    let net = &m.net_model().map_err(e)?.net;
    let all = ActionSet::full(net.num_transitions());
    let r = compute_stubborn_pn(net, net.initial(), &all, PorMode::Deadlock);
    let t3 = net.transition("t3").map_err(e)?;
    let c = leadsto_closure(net, net.initial(), t3, &all, PorMode::Deadlock);
    ensure(
        net_set(net, &r) == "{t1}" && net_set(net, &c) == "{t3,t5,t6}",
        format!("result {}, closure from t3 {}", net_set(net, &r), net_set(net, &c)),
    )
}

// 7 ---------------------------------------------------------------------

fn classify(net: &PetriNet, q: &AtomicProp, t: &str, flags: &str) -> Result<Verdict<InvisibilityWitness>, String> {
    let flags: InvisibilityFlags = flags.parse().map_err(e)?;
    Classifier::new(net, MODEL_BOX, MODEL_STATE_CAP).classify(q, net.transition(t).map_err(e)?, flags).map_err(e)
}

/// The witness is a pair of markings related by firing (or by displacement
/// when `strong`) that disagree on `q`, by value when `by_value`.
fn witness_is(net: &PetriNet, q: &AtomicProp, t: &str, v: &Verdict<InvisibilityWitness>, pair: (&str, &str), strong: bool, by_value: bool) -> bool {
    let Some(w) = v.witness() else { return false };
    let t = net.transition(t).expect("transition");
    let related = if strong { w.from.add_delta(&net.delta(t)).as_ref() == Some(&w.to) } else { net.fire(&w.from, t).ok().as_ref() == Some(&w.to) };
    let differs = if by_value {
        let f = q.value_poly().expect("polynomial proposition");
        f.eval(&w.from.to_point()).unwrap() != f.eval(&w.to.to_point()).unwrap()
    } else {
        q.eval(&w.from).unwrap() != q.eval(&w.to).unwrap()
    };
    (w.from.to_string().as_str(), w.to.to_string().as_str()) == pair && related && differs
}

fn classification_verdicts() -> Outcome {
    let m = builtin_model("pn-inconsistent").map_err(e)?;
    let nm = m.net_model().map_err(e)?;
    let net = &nm.net;
    let q_l = &nm.props[1];
    let q_p = &nm.props[2];
    let mut notes = Vec::new();
    let mut ok = true;

    let v = classify(net, q_l, "t", "plain")?;
    ok &= matches!(v, Verdict::BoundedHolds { .. });
    notes.push(format!("t q_l plain {}", v.status()));
    let v = classify(net, q_l, "t", "value")?;
    ok &= witness_is(net, q_l, "t", &v, ("101100", "101010"), false, true);
    notes.push(format!("t q_l value {}", v.witness().map(|w| w.to_string()).unwrap_or(v.status().into())));
    let v = classify(net, q_l, "t", "strong,reach")?;
    ok &= witness_is(net, q_l, "t", &v, ("010100", "010010"), true, false);
    notes.push(format!("t q_l strong reach {}", v.witness().map(|w| w.to_string()).unwrap_or(v.status().into())));
    let v = classify(net, q_l, "t_key", "strong,value")?;
    ok &= v.is_holds();
    notes.push(format!("t_key q_l strong value {}", v.status()));
    let v = classify(net, q_p, "t", "reach,value")?;
    ok &= v.is_holds();
    notes.push(format!("t q_p reach value {}", v.status()));

    let w = InvisibilityWitness { from: Marking::from_digits("002120").ok_or("digits")?, to: Marking::from_digits("002030").ok_or("digits")? };
    let t = net.transition("t").map_err(e)?;
    let f = q_p.value_poly().ok_or("q_p is polynomial")?;
    let values = (f.eval(&w.from.to_point()).map_err(e)?, f.eval(&w.to.to_point()).map_err(e)?);
    let fires = net.fire(&w.from, t).map_err(e)? == w.to;
    for flags in ["plain", "value"] {
        let v = classify(net, q_p, "t", flags)?;
        let replay = verify_invisibility_witness(net, q_p, t, flags.parse().map_err(e)?, &w, MODEL_STATE_CAP).map_err(e)?;
        ok &= v.is_fails() && replay;
        notes.push(format!("t q_p {flags} {}, 002120 -> 002030 replays {replay}", v.status()));
    }
    ok &= fires && values == (BigInt::from(1), BigInt::from(2));
    ensure(ok, notes.join("; "))
}

// 8 ---------------------------------------------------------------------

fn complete_run(l: &Lsts, names: &[&str]) -> Option<Run> {
    let mut path = Path::single(l.initial());
    for name in names {
        let a = l.action_by_name(name)?;
        let next = l.successors_by(*path.end(), a).next()?;
        path.push(a, next);
    }
    l.is_deadlock(*path.end()).then_some(Run::Finite(path))
}

fn relabelled(net: &PetriNet, props: &[AtomicProp], flags: &str) -> Result<Lsts, String> {
    Ok(build_lsts(net, props, flags.parse().map_err(e)?, MODEL_STATE_CAP, MODEL_BOX).map_err(e)?.lsts)
}

fn consistency_verdicts() -> Outcome {
    let m = builtin_model("pn-inconsistent").map_err(e)?;
    let net = &m.net_model().map_err(e)?.net;
    let props = inconsistent_props(net);
    let mut notes = Vec::new();
    let mut ok = true;
    for (label, chosen, flags) in [("linear", &[1][..], "reach,value"), ("polynomial", &[1, 2], "value"), ("all", &[0, 1, 2], "reach,strong")] {
        let ps: Vec<AtomicProp> = chosen.iter().map(|&i| props[i].clone()).collect();
        let l = relabelled(net, &ps, flags)?;
        let v = oracle::check_consistent_labelling(&l, l.invisible(), limits()).map_err(e)?;
        ok &= v.is_bounded();
        notes.push(format!("{label} {flags}: {}", v.status()));
    }
    for (label, ps, flags) in [("arbitrary q_l", vec![q_l_as_table(net)], "plain"), ("polynomial q_p", vec![props[2].clone()], "reach,value")] {
        let l = relabelled(net, &ps, flags)?;
        let v = oracle::check_consistent_labelling(&l, l.invisible(), limits()).map_err(e)?;
        let violations = oracle::consistency_violations(&l, l.invisible(), limits()).map_err(e)?;
        let pair = match (complete_run(&l, &["t1", "t2", "t", "t3"]), complete_run(&l, &["t", "t1", "t2", "t3"])) {
            (Some(x), Some(y)) => {
                let weak = l.weak_equivalent(&x, &y, l.invisible()).map_err(e)?;
                let stutter = l.stutter_equivalent(&x, &y).map_err(e)?;
                let vis = l.vis_word(&x, l.invisible()).map_err(e)?;
                let reported = violations.iter().any(|(a, _)| a.vis == vis);
                weak && !stutter && reported
            }
            _ => false,
        };
        ok &= v.is_fails() && pair;
        notes.push(format!("{label} {flags}: {}, pair t1 t2 t t3 / t t1 t2 t3 inconsistent and reported: {pair}", v.status()));
    }
    ensure(ok, notes.join("; "))
}

// 9, 10 -----------------------------------------------------------------

fn deadlock_theorem() -> Outcome {
    let mut ok = true;
    let mut perms = 0;
    let mut bad = Vec::new();
    let mut nets = 0;
    for (seed, net, props) in common::corpus(200) {
        ok &= common::within_corpus_limits(&net, 1000);
        let run = explore_with_por(&net, &props, InvisibilityFlags::PLAIN, PorMode::Deadlock, 1000, MODEL_BOX).map_err(e)?;
        nets += 1;
        let l = &run.full.lsts;
        let red = &run.reduced;
        let report = oracle::check_deadlock_preservation(l, red, limits()).map_err(e)?;
        let reference = common::reachable_deadlocks(l) == common::reachable_deadlocks(&red.lsts);
        let mut replays = true;
        for p in &report.permutations {
            let (fa, ra) = (p.full.actions(), p.reduced.actions());
            let mut fs = fa.clone();
            let mut rs = ra.clone();
            fs.sort_unstable();
            rs.sort_unstable();
            replays &= fs == rs
                && p.full.start == p.reduced.start
                && p.full.end() == p.reduced.end()
                && common::replay(l, p.full.start, &fa).contains(p.full.end())
                && common::replay(&red.lsts, p.reduced.start, &ra).contains(p.reduced.end());
        }
        perms += report.permutations.len();
        if !matches!(report.verdict, Verdict::BoundedHolds { .. }) || !reference || !replays {
            ok = false;
            bad.push(seed);
        }
    }
    ensure(ok && perms > 0, format!("{nets} nets, {perms} permutation witnesses replayed, failing seeds {bad:?}"))
}

fn reachability_theorem() -> Outcome {
    let mut ok = true;
    let mut bad = Vec::new();
    let mut smaller = 0;
    for (seed, net, props) in common::corpus(200) {
        let run = explore_with_por(&net, &props, InvisibilityFlags::PLAIN, PorMode::LtlWeak, 1000, MODEL_BOX).map_err(e)?;
        let l = &run.full.lsts;
        let v = oracle::check_reachable_labellings(l, &run.reduced);
        let reference = common::reachable_labels(l) == common::reachable_labels(&run.reduced.lsts);
        if run.reduced.num_states() < l.num_states() {
            smaller += 1;
        }
        if !v.is_holds() || !reference {
            ok = false;
            bad.push(seed);
        }
    }
    ensure(ok, format!("200 nets ({smaller} strictly reduced), failing seeds {bad:?}"))
}

// 11 --------------------------------------------------------------------

fn implication_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut counts = [0usize; 5];
    let mut disagreements = 0;
    let mut broken = Vec::new();
    for seed in 0..1000u64 {
        let params = GenParams {
            states: rng.gen_range(3..=8),
            actions: rng.gen_range(2..=4),
            nondeterminism: if seed % 2 == 0 { 0.0 } else { 0.15 },
            ..GenParams::with_seed(seed)
        };
        let l = random_lsts(&params);
        let s: StateId = rng.gen_range(0..l.num_states());
        let rset: ActionSet = (0..l.num_actions()).filter(|_| rng.gen_bool(0.5)).collect();
        let bound = 6;
        let check = |c: Condition, r: &ActionSet| check_condition(&l, &s, r, c, bound).map(|v| v.passes());
        let [d0, d1, d1p, d2, d2w, c4] = [Condition::D0, Condition::D1, Condition::D1p, Condition::D2, Condition::D2w, Condition::C4]
            .map(|c| check(c, &rset).expect("small inputs stay within caps"));
        let reference = [
            common::d0(&l, s, &rset),
            common::d1(&l, s, &rset, bound, false),
            common::d1(&l, s, &rset, bound, true),
            common::d2(&l, s, &rset),
            common::d2w(&l, s, &rset),
            common::c4(&l, s, &rset),
        ];
        if reference != [d0, d1, d1p, d2, d2w, c4] {
            disagreements += 1;
        }
        let all = ActionSet::full(l.num_actions());
        let act_passes = check(Condition::D1, &all).unwrap() && check(Condition::D2w, &all).unwrap();
        let implications = [
            !(d0 && d2) || d2w,
            !d2w || d0,
            !(d2w && c4) || (d0 && d2),
            !l.is_deterministic() || !(d1 && d2) || d1p,
            act_passes,
        ];
        for (k, holds) in implications.iter().enumerate() {
            if *holds {
                counts[k] += 1;
            } else {
                broken.push((seed, k));
            }
        }
    }
    ensure(
        broken.is_empty() && disagreements == 0,
        format!("1000 triples; implications held {counts:?}; reference disagreements {disagreements}; broken {broken:?}"),
    )
}

// 12 --------------------------------------------------------------------

fn approximation_property() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for (seed, net, props) in common::corpus(200) {
        let built = build_lsts(&net, &props, InvisibilityFlags::PLAIN, 1000, MODEL_BOX).map_err(e)?;
        let l = &built.lsts;
        let visible = l.visible_actions();
        let bound = default_bound(l.num_states());
        for (s, m) in built.markings.iter().enumerate() {
            for mode in [PorMode::Deadlock, PorMode::LtlWeak, PorMode::LtlStrong] {
                let r = compute_stubborn_pn(&net, m, &visible, mode);
                let v = check_condition(l, &s, &r, Condition::D1p, bound).map_err(e)?;
                checked += 1;
                if v.is_fails() {
                    bad.push((seed, s, mode));
                }
            }
        }
    }
    ensure(bad.is_empty(), format!("{checked} (state, mode) sets checked, failures {bad:?}"))
}

// 13 --------------------------------------------------------------------

fn random_poly(rng: &mut ChaCha8Rng, vars: usize) -> MultiPoly {
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=5) {
        let mut powers = Vec::new();
        for v in 0..vars {
            if rng.gen_bool(0.5) {
                powers.push((v, rng.gen_range(1..=3)));
            }
        }
        terms.push((BigInt::from(rng.gen_range(-5i64..=5)), Monomial::from_powers(powers)));
    }
    MultiPoly::from_terms(terms)
}

fn shift_difference_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut bad = 0;
    for _ in 0..200 {
        let vars = rng.gen_range(1..=4);
        let f = random_poly(&mut rng, vars);
        let c: Vec<i64> = (0..vars).map(|_| rng.gen_range(-3..=3)).collect();
        let x: Vec<i64> = (0..vars).map(|_| rng.gen_range(-4..=6)).collect();
        let shifted: Vec<i64> = x.iter().zip(&c).map(|(a, b)| a + b).collect();
        let d = f.shift_difference(&c);
        if d.eval(&x).unwrap() != f.eval(&shifted).unwrap() - f.eval(&x).unwrap() {
            bad += 1;
        }
    }
    let mut linear_bad = 0;
    for _ in 0..200 {
        let vars = rng.gen_range(1..=5);
        let f = MultiPoly::from_terms((0..vars).map(|v| (BigInt::from(rng.gen_range(-4i64..=4)), Monomial::var(v))).collect::<Vec<_>>());
        let c: Vec<i64> = (0..vars).map(|_| rng.gen_range(-3..=3)).collect();
        let d = f.shift_difference(&c);
        if d.constant_value() != Some(f.eval(&c).unwrap()) {
            linear_bad += 1;
        }
    }
    ensure(bad == 0 && linear_bad == 0, format!("200 general triples ({bad} mismatches), 200 linear ({linear_bad} non-constant or wrong)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("weak counter-example", weak_counter_example),
        ("strong counter-example", strong_counter_example),
        ("fix validation", fix_validation),
        ("key actions", key_action_verdicts),
        ("stubborn verdicts on the seven-place net", example_por_verdicts),
        ("leads-to computation", leadsto_verdicts),
        ("invisibility classification", classification_verdicts),
        ("consistency at desk scale", consistency_verdicts),
        ("deadlock preservation", deadlock_theorem),
        ("reachable labellings", reachability_theorem),
        ("condition implications", implication_properties),
        ("implementation approximation", approximation_property),
        ("shift difference", shift_difference_property),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
