use proptest::prelude::*;
use stublab::models::{inconsistent_props, builtin_model, random_pn_case, GenParams};
use stublab::petri::Arc::{In, Out};
use stublab::{build_lsts, InvisibilityFlags, Marking, PetriNet};

fn example_net() -> PetriNet {
    builtin_model("fig-pn-example").unwrap().net_model().unwrap().net.clone()
}

fn inconsistent_net() -> PetriNet {
    builtin_model("pn-inconsistent").unwrap().net_model().unwrap().net.clone()
}

#[test]
fn enabling_in_the_example_net() {
    let net = example_net();
    let m = net.initial();
    assert_eq!(net.enabled(m), net.transitions_named(&["t1", "t3", "t6"]).unwrap());
    let t4 = net.transition("t4").unwrap();
    assert_eq!(m.tokens(net.place("p3").unwrap()), 2);
    assert_eq!(net.pre(t4, net.place("p3").unwrap()), 3);
    assert!(!net.is_enabled(m, t4));
}

#[test]
fn nothing_enabled_without_tokens() {
    let net = PetriNet::from_parts(&[("p", 0)], &["t"], &[In("p", "t", 1)]).unwrap();
    assert!(net.enabled(net.initial()).is_empty());
    let empty = PetriNet::from_parts(&[], &[], &[]).unwrap();
    assert!(empty.enabled(empty.initial()).is_empty());
}

#[test]
fn firing_in_the_example_net() {
    let net = example_net();
    let m = net.initial().clone();
    let p = |n: &str| net.place(n).unwrap();
    let after_t1 = net.fire(&m, net.transition("t1").unwrap()).unwrap();
    assert_eq!(after_t1.tokens(p("p1")), 0);
    assert_eq!(after_t1.tokens(p("p2")), 1);
    for other in ["p3", "p4", "p5", "p6"] {
        assert_eq!(after_t1.tokens(p(other)), m.tokens(p(other)));
    }
    let after_t3 = net.fire(&m, net.transition("t3").unwrap()).unwrap();
    assert_eq!(after_t3.tokens(p("p4")), 0);
    for other in ["p1", "p2", "p3", "p5", "p6"] {
        assert_eq!(after_t3.tokens(p(other)), m.tokens(p(other)));
    }
    assert!(net.fire(&m, net.transition("t4").unwrap()).is_err());
}

#[test]
fn self_loop_has_identity_effect() {
    let net = PetriNet::from_parts(&[("p", 2), ("q", 1)], &["t"], &[In("p", "t", 2), Out("t", "p", 2)]).unwrap();
    let t = net.transition("t").unwrap();
    assert_eq!(net.fire(net.initial(), t).unwrap(), *net.initial());
    assert!(net.delta(t).iter().all(|&d| d == 0));
}

#[test]
fn displacement_vectors_of_the_inconsistent_net() {
    let net = inconsistent_net();
    let p = |n: &str| net.place(n).unwrap();
    let expect = |t: &str, minus: &str, plus: &str| {
        let d = net.delta(net.transition(t).unwrap());
        for q in 0..net.num_places() {
            let want = if q == p(minus) { -1 } else if q == p(plus) { 1 } else { 0 };
            assert_eq!(d[q], want, "{t} at {}", net.place_name(q));
        }
    };
    expect("t", "p4", "p5");
    expect("t_key", "p4", "p6");
    let t = net.transition("t").unwrap();
    let mut samples: Vec<Marking> = net.reachable_markings(100).unwrap().into_iter().filter(|m| net.is_enabled(m, t)).collect();
    samples.push(Marking::from_digits("002120").unwrap());
    assert!(samples.len() >= 3);
    for m in &samples {
        assert_eq!(Some(net.fire(m, t).unwrap()), m.add_delta(&net.delta(t)));
    }
}

#[test]
fn inconsistent_net_lsts_matches_the_figure() {
    let net = inconsistent_net();
    let props = inconsistent_props(&net);
    let built = build_lsts(&net, &props, InvisibilityFlags::PLAIN, 100, 6).unwrap();
    let l = &built.lsts;
    assert_eq!(l.num_states(), 10);
    let q = built.state_of_digits("001000").unwrap();
    assert_eq!(l.format_labels(l.labels(q)), "{q}");
    assert_eq!(l.format_labels(l.labels(built.state_of_digits("010010").unwrap())), "{q_l}");
    assert_eq!(built.markings[l.initial()], Marking::from_digits("101100").unwrap());
}

#[test]
fn dead_initial_marking_gives_one_state() {
    let net = PetriNet::from_parts(&[("p", 0)], &["t"], &[In("p", "t", 1)]).unwrap();
    let built = build_lsts(&net, &[], InvisibilityFlags::PLAIN, 10, 6).unwrap();
    assert_eq!(built.lsts.num_states(), 1);
    assert!(built.lsts.transitions().is_empty());
}

#[test]
fn example_por_net_has_eight_states() {
    let l = builtin_model("fig-example-por").unwrap().lsts().unwrap();
    assert_eq!(l.num_states(), 8);
}

#[test]
fn unbounded_net_hits_the_cap() {
    let net = example_net();
    assert!(net.reachable_markings(2000).is_err());
    assert!(build_lsts(&net, &[], InvisibilityFlags::PLAIN, 500, 6).is_err());
}

#[test]
fn exploration_order_is_stable() {
    let net = inconsistent_net();
    let a = build_lsts(&net, &[], InvisibilityFlags::PLAIN, 100, 6).unwrap();
    let b = build_lsts(&net, &[], InvisibilityFlags::PLAIN, 100, 6).unwrap();
    assert_eq!(a.markings, b.markings);
    assert_eq!(a.lsts, b.lsts);
}

#[test]
fn net_json_round_trip_and_sparse_arcs() {
    let net = inconsistent_net();
    assert_eq!(PetriNet::from_json_str(&net.to_json_string()).unwrap(), net);
    let text = r#"{"places":[{"id":"p1","tokens":1}],"transitions":["t1"],"arcs":[{"from":"p1","to":"t1","w":1}]}"#;
    let parsed = PetriNet::from_json_str(text).unwrap();
    let t1 = parsed.transition("t1").unwrap();
    assert_eq!(parsed.post(t1, parsed.place("p1").unwrap()), 0);
    assert!(PetriNet::from_json_str(r#"{"places":[{"id":"x","tokens":0}],"transitions":["x"],"arcs":[]}"#).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn induced_lsts_invariants(seed in 0u64..10_000, flags in 0usize..8) {
        let params = GenParams { places: 7, transitions: 6, props: 2, ..GenParams::with_seed(seed) };
        let (net, props) = random_pn_case(&params);
        let flags = InvisibilityFlags::all()[flags];
        let built = build_lsts(&net, &props, flags, 1000, 6).unwrap();
        let l = &built.lsts;
        prop_assert!(l.is_deterministic());
        prop_assert!(l.validate().is_empty());
        let mut pairs = 0;
        for (s, m) in built.markings.iter().enumerate() {
            for t in net.enabled(m).iter() {
                pairs += 1;
                let next = net.fire(m, t).unwrap();
                prop_assert_eq!(Some(next.clone()), m.add_delta(&net.delta(t)));
                let target = built.state_of(&next).unwrap();
                prop_assert!(l.has_transition(s, t, target));
            }
            for (i, q) in props.iter().enumerate() {
                prop_assert_eq!(l.labels(s).contains(i), q.eval(m).unwrap());
            }
        }
        prop_assert_eq!(pairs, l.transitions().len());
    }
}
