//! Executable encodings of the worked examples and counter-examples, each
//! with a table of expected verdicts, plus seeded random generators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::lsts::{ActionSet, LabelSet, Lsts, LstsBuilder, LstsError, Run, StateId};
use crate::oracle::{self, Direction, Limits, OracleWitness};
use crate::petri::{build_lsts, Arc, Marking, NetLsts, PetriError, PetriNet};
use crate::poly::MultiPoly;
use crate::props::{verify_invisibility_witness, AtomicProp, Classifier, Cmp, InvisibilityFlags, InvisibilityWitness};
use crate::stubborn::{
    check_condition, check_l, compute_stubborn_pn, default_bound, key_actions, leadsto_closure, reduce, Condition,
    ConditionWitness, DefaultSet, PorMode, ReducedLsts, ReductionFunction,
};
use crate::system::NetSystem;
use crate::trace::TraceKind;
use crate::verdict::Verdict;

pub const MODEL_IDS: [&str; 6] = ["fig-pn-example", "fig-motivating", "fig-example-por", "ce-weak", "ce-strong", "pn-inconsistent"];

/// State cap used when a model's net is turned into an LSTS.
pub const MODEL_STATE_CAP: usize = 10_000;
/// Marking box used by the invisibility classifier on model nets.
pub const MODEL_BOX: u32 = 6;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("unknown model `{0}` (known: {known})", known = MODEL_IDS.join(", "))]
    UnknownModel(String),
    #[error("model `{0}` is an LSTS, not a Petri net")]
    NotANet(String),
    #[error("model `{0}` has no reduction function `{1}`")]
    UnknownReduction(String, String),
    #[error(transparent)]
    Lsts(#[from] LstsError),
    #[error(transparent)]
    Petri(#[from] PetriError),
    #[error(transparent)]
    Stubborn(#[from] crate::stubborn::StubbornError),
}

/// A net with its propositions and the invisibility notion used to derive
/// the invisible transitions.
#[derive(Clone, Debug)]
pub struct NetModel {
    pub net: PetriNet,
    pub props: Vec<AtomicProp>,
    pub flags: InvisibilityFlags,
}

#[derive(Clone, Debug)]
pub enum Artifact {
    Lsts(Lsts),
    Net(NetModel),
}

/// Switches applied to every expectation of a suite run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    /// Use the D1 checker wherever D1p is asked for.
    pub d1p_as_d1: bool,
}

impl SuiteConfig {
    fn d1p(self) -> Condition {
        if self.d1p_as_d1 {
            Condition::D1
        } else {
            Condition::D1p
        }
    }
}

/// Observed value on success, explanation on failure.
pub type Outcome = Result<String, String>;

pub type Check = fn(&BuiltinModel, &SuiteConfig) -> Outcome;

#[derive(Clone)]
pub struct Expectation {
    pub name: &'static str,
    /// The library operation exercised.
    pub operation: &'static str,
    pub expected: &'static str,
    /// What in the source figure or text the expectation reproduces.
    pub anchor: &'static str,
    pub check: Check,
}

impl fmt::Debug for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Expectation").field("name", &self.name).field("operation", &self.operation).finish()
    }
}

#[derive(Clone, Debug)]
pub struct BuiltinModel {
    pub id: &'static str,
    pub figure: &'static str,
    pub artifact: Artifact,
    /// Hand-specified reduction functions by name.
    pub reductions: Vec<(String, ReductionFunction)>,
    pub expectations: Vec<Expectation>,
}

impl BuiltinModel {
    pub fn net_model(&self) -> Result<&NetModel, ModelError> {
        match &self.artifact {
            Artifact::Net(n) => Ok(n),
            Artifact::Lsts(_) => Err(ModelError::NotANet(self.id.into())),
        }
    }

    /// The induced LSTS of a net model, with markings.
    pub fn net_lsts(&self) -> Result<NetLsts, ModelError> {
        let m = self.net_model()?;
        Ok(build_lsts(&m.net, &m.props, m.flags, MODEL_STATE_CAP, MODEL_BOX)?)
    }

    pub fn lsts(&self) -> Result<Lsts, ModelError> {
        match &self.artifact {
            Artifact::Lsts(l) => Ok(l.clone()),
            Artifact::Net(_) => Ok(self.net_lsts()?.lsts),
        }
    }

    pub fn reduction(&self, name: &str) -> Result<&ReductionFunction, ModelError> {
        self.reductions
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, r)| r)
            .ok_or_else(|| ModelError::UnknownReduction(self.id.into(), name.into()))
    }

    /// The model in the interchange formats: the LSTS (or net and
    /// propositions), each reduction function and each reduced LSTS.
    pub fn to_json_value(&self) -> Result<serde_json::Value, ModelError> {
        let mut doc = serde_json::Map::new();
        doc.insert("id".into(), json!(self.id));
        doc.insert("figure".into(), json!(self.figure));
        if let Artifact::Net(m) = &self.artifact {
            doc.insert("net".into(), m.net.to_json_value());
            doc.insert("props".into(), crate::props::props_to_json_value(&m.props, &m.net));
            doc.insert("invisibility".into(), json!(m.flags.to_string()));
        }
        let reachable = match &self.artifact {
            Artifact::Net(m) => m.net.reachable_markings(MODEL_STATE_CAP).is_ok(),
            Artifact::Lsts(_) => true,
        };
        if reachable {
            let lsts = self.lsts()?;
            doc.insert("lsts".into(), lsts.to_json_value());
            let mut reductions = serde_json::Map::new();
            for (name, r) in &self.reductions {
                let reduced = reduce(&lsts, r)?;
                reductions.insert(name.clone(), json!({ "r": r.to_json_value(), "reduced": reduced.lsts.to_json_value() }));
            }
            doc.insert("reductions".into(), serde_json::Value::Object(reductions));
        }
        doc.insert(
            "expectations".into(),
            self.expectations
                .iter()
                .map(|e| json!({"name": e.name, "operation": e.operation, "expected": e.expected, "anchor": e.anchor}))
                .collect(),
        );
        Ok(serde_json::Value::Object(doc))
    }

    /// Stand-alone files for external tools: `<id>_full.json` and, per
    /// reduction, `<id>_<name>_r.json` and `<id>_<name>_reduced.json`
    /// (the first reduction also as `<id>_r.json` / `<id>_reduced.json`);
    /// net models add `<id>_net.json` and `<id>_props.json`.
    pub fn export_files(&self) -> Result<Vec<(String, serde_json::Value)>, ModelError> {
        let stem = self.id.replace('-', "_");
        let mut files = Vec::new();
        if let Artifact::Net(m) = &self.artifact {
            files.push((format!("{stem}_net.json"), m.net.to_json_value()));
            files.push((format!("{stem}_props.json"), crate::props::props_to_json_value(&m.props, &m.net)));
            if m.net.reachable_markings(MODEL_STATE_CAP).is_err() {
                return Ok(files);
            }
        }
        let lsts = self.lsts()?;
        files.push((format!("{stem}_full.json"), lsts.to_json_value()));
        for (i, (name, r)) in self.reductions.iter().enumerate() {
            let reduced = reduce(&lsts, r)?;
            if i == 0 {
                files.push((format!("{stem}_r.json"), r.to_json_value()));
                files.push((format!("{stem}_reduced.json"), reduced.lsts.to_json_value()));
            }
            files.push((format!("{stem}_{name}_r.json"), r.to_json_value()));
            files.push((format!("{stem}_{name}_reduced.json"), reduced.lsts.to_json_value()));
        }
        Ok(files)
    }
}

pub fn builtin_model(id: &str) -> Result<BuiltinModel, ModelError> {
    match id {
        "fig-pn-example" => Ok(fig_pn_example()),
        "fig-motivating" => Ok(fig_motivating()),
        "fig-example-por" => fig_example_por(),
        "ce-weak" => Ok(ce_weak()),
        "ce-strong" => Ok(ce_strong()),
        "pn-inconsistent" => Ok(pn_inconsistent()),
        other => Err(ModelError::UnknownModel(other.into())),
    }
}

pub fn all_models() -> Vec<BuiltinModel> {
    MODEL_IDS.iter().map(|id| builtin_model(id).expect("built-in model ids")).collect()
}

// ---------------------------------------------------------------------------
// Shared helpers for checks

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ensure(ok: bool, observed: String) -> Outcome {
    if ok {
        Ok(observed)
    } else {
        Err(observed)
    }
}

fn actions(l: &Lsts, names: &[&str]) -> Result<ActionSet, String> {
    l.action_set(names).map_err(err)
}

fn state(l: &Lsts, name: &str) -> Result<StateId, String> {
    l.state_by_name(name).ok_or_else(|| format!("no state named {name}"))
}

fn format_set(l: &Lsts, set: &ActionSet) -> String {
    let names: Vec<&str> = set.iter().map(|a| l.action_name(a)).collect();
    format!("{{{}}}", names.join(","))
}

fn net_format_set(net: &PetriNet, set: &ActionSet) -> String {
    let names: Vec<&str> = set.iter().map(|t| net.transition_name(t)).collect();
    format!("{{{}}}", names.join(","))
}

fn status<W>(v: &Verdict<W>) -> String {
    match v {
        Verdict::BoundedHolds { bound } => format!("bounded_holds ({bound:?})"),
        other => other.status().to_string(),
    }
}

fn limits() -> Limits {
    Limits::default()
}

// ---------------------------------------------------------------------------
// The six-place net with weight-2/3 arcs

fn pn_example_net() -> PetriNet {
    use Arc::{In, Out};
    PetriNet::from_parts(
        &[("p1", 1), ("p2", 0), ("p3", 2), ("p4", 1), ("p5", 0), ("p6", 1)],
        &["t1", "t2", "t3", "t4", "t5", "t6"],
        &[
            In("p1", "t1", 1),
            Out("t1", "p2", 1),
            In("p2", "t2", 1),
            Out("t2", "p3", 1),
            In("p3", "t3", 2),
            Out("t3", "p3", 2),
            In("p4", "t3", 1),
            In("p3", "t4", 3),
            Out("t4", "p3", 2),
            In("p6", "t4", 1),
            In("p4", "t5", 1),
            In("p5", "t5", 1),
            In("p6", "t6", 1),
            Out("t6", "p6", 1),
            Out("t6", "p5", 1),
        ],
    )
    .expect("well-formed net")
}

fn pn_model(flags: InvisibilityFlags) -> Artifact {
    Artifact::Net(NetModel { net: pn_example_net(), props: Vec::new(), flags })
}

fn fig_pn_example() -> BuiltinModel {
    BuiltinModel {
        id: "fig-pn-example",
        figure: "An example Petri net",
        artifact: pn_model(InvisibilityFlags::PLAIN),
        reductions: Vec::new(),
        expectations: vec![
            Expectation {
                name: "initial marking",
                operation: "PetriNet::initial",
                expected: "p1=1 p2=0 p3=2 p4=1 p5=0 p6=1",
                anchor: "initial marking drawn as one token in p1, p4, p6 and two in p3",
                check: |m, _| {
                    let net = &m.net_model().map_err(err)?.net;
                    let got = net.initial().to_string();
                    ensure(got == "102101", got)
                },
            },
            Expectation {
                name: "arc weights",
                operation: "PetriNet::pre/post",
                expected: "W(p3,t3)=W(t3,p3)=2, W(p3,t4)=3, W(t4,p3)=2",
                anchor: "weights 2 and 3 inscribed on the arcs between p3 and t3, t4",
                check: |m, _| {
                    let net = &m.net_model().map_err(err)?.net;
                    let p3 = net.place("p3").map_err(err)?;
                    let (t3, t4) = (net.transition("t3").map_err(err)?, net.transition("t4").map_err(err)?);
                    let got = [net.pre(t3, p3), net.post(t3, p3), net.pre(t4, p3), net.post(t4, p3)];
                    ensure(got == [2, 2, 3, 2], format!("{got:?}"))
                },
            },
            Expectation {
                name: "t6 pumps p5 without bound",
                operation: "PetriNet::reachable_markings",
                expected: "state cap exceeded",
                anchor: "t6 keeps its token on p6 and adds one to p5 each time it fires",
                check: |m, _| {
                    let net = &m.net_model().map_err(err)?.net;
                    match net.reachable_markings(2_000) {
                        Err(PetriError::StateCapExceeded(n)) => Ok(format!("more than {n} markings")),
                        other => Err(format!("{:?}", other.map(|v| v.len()))),
                    }
                },
            },
        ],
    }
}

fn fig_motivating() -> BuiltinModel {
    BuiltinModel {
        id: "fig-motivating",
        figure: "An example motivating D1 and D2w",
        artifact: pn_model(InvisibilityFlags::PLAIN),
        reductions: Vec::new(),
        expectations: vec![
            Expectation {
                name: "t3 is the only key action of {t3,t5,t6}",
                operation: "key_actions",
                expected: "{t3}",
                anchor: "t3 is a key action; t5 is disabled; t1 t2 t4 disables t6",
                check: |m, _| {
                    let net = &m.net_model().map_err(err)?.net;
                    let sys = NetSystem::new(net, ActionSet::new());
                    let r = net.transitions_named(&["t3", "t5", "t6"]).map_err(err)?;
                    let keys = key_actions(&sys, net.initial(), &r).map_err(err)?;
                    let got = net_format_set(net, &keys);
                    ensure(got == "{t3}", got)
                },
            },
            Expectation {
                name: "t1 t2 t4 disables t6",
                operation: "PetriNet::fire",
                expected: "t6 disabled after t1 t2 t4",
                anchor: "the sequence t1 t2 t4 disables t6",
                check: |m, _| {
                    let net = &m.net_model().map_err(err)?.net;
                    let mut marking = net.initial().clone();
                    for t in ["t1", "t2", "t4"] {
                        marking = net.fire(&marking, net.transition(t).map_err(err)?).map_err(err)?;
                    }
                    let t6 = net.transition("t6").map_err(err)?;
                    ensure(!net.is_enabled(&marking, t6), format!("after t1 t2 t4: {marking}"))
                },
            },
            Expectation {
                name: "{t3,t5,t6} satisfies D1 and D2w",
                operation: "check_condition",
                expected: "D1 bounded_holds, D2w holds",
                anchor: "the choice r(s) = {t3, t5, t6}, with the diagram of why D1 holds",
                check: |m, _| {
                    let net = &m.net_model().map_err(err)?.net;
                    let sys = NetSystem::new(net, ActionSet::new());
                    let r = net.transitions_named(&["t3", "t5", "t6"]).map_err(err)?;
                    let d1 = check_condition(&sys, net.initial(), &r, Condition::D1, 8).map_err(err)?;
                    let d2w = check_condition(&sys, net.initial(), &r, Condition::D2w, 8).map_err(err)?;
                    ensure(d1.is_bounded() && d2w.is_holds(), format!("D1 {}, D2w {}", status(&d1), status(&d2w)))
                },
            },
            Expectation {
                name: "⇝ closure from t3",
                operation: "leadsto_closure",
                expected: "{t3,t5,t6}",
                anchor: "starting from t3 the closure collects t5 and t6",
                check: |m, _| {
                    let net = &m.net_model().map_err(err)?.net;
                    let all = ActionSet::full(net.num_transitions());
                    let t3 = net.transition("t3").map_err(err)?;
                    let c = leadsto_closure(net, net.initial(), t3, &all, PorMode::Deadlock);
                    let got = net_format_set(net, &c);
                    ensure(got == "{t3,t5,t6}", got)
                },
            },
            Expectation {
                name: "⇝ result",
                operation: "compute_stubborn_pn",
                expected: "{t1}",
                anchor: "the resulting r(s) would be {t1}",
                check: |m, _| {
                    let net = &m.net_model().map_err(err)?.net;
                    let all = ActionSet::full(net.num_transitions());
                    let r = compute_stubborn_pn(net, net.initial(), &all, PorMode::Deadlock);
                    let got = net_format_set(net, &r);
                    ensure(got == "{t1}", got)
                },
            },
        ],
    }
}

// ---------------------------------------------------------------------------
// The seven-place example reduced under D1, D2w, V, I and L

fn example_por_net() -> PetriNet {
    use Arc::{In, Out};
    PetriNet::from_parts(
        &[("p1", 1), ("p2", 0), ("p3", 0), ("p4", 0), ("p5", 1), ("p6", 0), ("p7", 0)],
        &["a", "b", "c", "d", "v", "w"],
        &[
            In("p1", "a", 1),
            Out("a", "p2", 1),
            In("p2", "w", 1),
            In("p4", "w", 1),
            Out("w", "p3", 1),
            In("p5", "v", 1),
            Out("v", "p4", 1),
            Out("v", "p6", 1),
            In("p6", "b", 1),
            Out("b", "p7", 1),
            In("p7", "c", 1),
            Out("c", "p6", 1),
            In("p3", "d", 1),
            Out("d", "p3", 1),
            In("p7", "d", 1),
            Out("d", "p7", 1),
        ],
    )
    .expect("well-formed net")
}

/// Named states of the example LSTS, by marking.
pub const EXAMPLE_POR_STATES: [(&str, &str); 6] = [
    ("s1", "1000100"),
    ("s2", "0100100"),
    ("s3", "0101010"),
    ("s4", "0101001"),
    ("s5", "0010001"),
    ("s6", "0010010"),
];

fn fig_example_por() -> Result<BuiltinModel, ModelError> {
    let net = example_por_net();
    let p4 = net.place("p4")?;
    let props = vec![AtomicProp::linear("q", &[(p4, 1)], Cmp::Ge, 1)];
    let model = NetModel { net, props, flags: InvisibilityFlags::PLAIN };
    let built = build_lsts(&model.net, &model.props, model.flags, MODEL_STATE_CAP, MODEL_BOX)?;
    let sid = |name: &str| {
        let digits = EXAMPLE_POR_STATES.iter().find(|(n, _)| *n == name).expect("named state").1;
        built.state_of_digits(digits).expect("state is reachable")
    };
    let l = &built.lsts;
    let mut r = ReductionFunction::with_default(DefaultSet::All);
    for (name, acts) in [
        ("s1", &["a"][..]),
        ("s2", &["v", "w"]),
        ("s3", &["b"]),
        ("s4", &["c", "d", "v", "w"]),
        ("s5", &["c", "d", "v", "w"]),
        ("s6", &["b"]),
    ] {
        r.set(sid(name), l.action_set(acts)?);
    }
    Ok(BuiltinModel {
        id: "fig-example-por",
        figure: "Example of a Petri net and its corresponding LSTS",
        artifact: Artifact::Net(model),
        reductions: vec![("figure".into(), r)],
        expectations: vec![
            Expectation {
                name: "eight reachable states, a b c d invisible",
                operation: "build_lsts",
                expected: "8 states, invisible {a,b,c,d}",
                anchor: "v and w must be visible, a, b, c and d may be invisible",
                check: |m, _| {
                    let l = m.lsts().map_err(err)?;
                    let got = format!("{} states, invisible {}", l.num_states(), format_set(&l, l.invisible()));
                    ensure(got == "8 states, invisible {a,b,c,d}" && l.validate().is_empty(), got)
                },
            },
            Expectation {
                name: "declaring v invisible is unsound",
                operation: "Lsts::validate",
                expected: "violation on a v-transition",
                anchor: "v changes q from false to true",
                check: |m, _| {
                    let l = m.lsts().map_err(err)?;
                    let v = actions(&l, &["v"])?;
                    let bad = l.with_invisible(v.clone()).map_err(err)?.validate();
                    ensure(!bad.is_empty() && bad.iter().all(|x| v.contains(x.transition.action)), format!("{} violations", bad.len()))
                },
            },
            Expectation {
                name: "{a} is stubborn in s1",
                operation: "check_condition",
                expected: "key actions {a}, D1 bounded_holds, D2w holds",
                anchor: "a is a key action in s1; {a} satisfies D2w and D1",
                check: |m, _| {
                    let n = m.net_lsts().map_err(err)?;
                    let l = &n.lsts;
                    let s1 = state(l, "1000100")?;
                    let r = actions(l, &["a"])?;
                    let keys = key_actions(l, &s1, &r).map_err(err)?;
                    let d1 = check_condition(l, &s1, &r, Condition::D1, default_bound(l.num_states())).map_err(err)?;
                    let d2w = check_condition(l, &s1, &r, Condition::D2w, 1).map_err(err)?;
                    ensure(
                        keys == r && d1.is_bounded() && d2w.is_holds(),
                        format!("keys {}, D1 {}, D2w {}", format_set(l, &keys), status(&d1), status(&d2w)),
                    )
                },
            },
            Expectation {
                name: "{c} and {c,d} are not stubborn in s4",
                operation: "check_condition",
                expected: "{c}: D1 fails on w d / c; {c,d}: D1 fails on w / d",
                anchor: "s4 -wdc-> s6 and s4 -wd-> s5, but not s4 -cwd-> s6 or s4 -dw-> s5",
                check: |m, _| {
                    let n = m.net_lsts().map_err(err)?;
                    let l = &n.lsts;
                    let s4 = state(l, "0101001")?;
                    let mut got = Vec::new();
                    for set in [&["c"][..], &["c", "d"]] {
                        let r = actions(l, set)?;
                        let v = check_condition(l, &s4, &r, Condition::D1, default_bound(l.num_states())).map_err(err)?;
                        match v.witness() {
                            Some(ConditionWitness::Commutation { action, path, .. }) => {
                                got.push(format!("{}: {} / {}", format_set(l, &r), l.format_actions(&path.actions()), l.action_name(*action)))
                            }
                            _ => got.push(format!("{}: {}", format_set(l, &r), status(&v))),
                        }
                    }
                    ensure(got == ["{c}: w d / c", "{c,d}: w / d"], got.join("; "))
                },
            },
            Expectation {
                name: "the drawn reduction",
                operation: "reduce",
                expected: "6 states, 8 transitions; D1 D2w V I L hold",
                anchor: "dashed states and transitions are absent from the reduced LSTS",
                check: |m, cfg| {
                    let l = m.lsts().map_err(err)?;
                    let red = reduce(&l, m.reduction("figure").map_err(err)?).map_err(err)?;
                    let conds = [Condition::D1, cfg.d1p(), Condition::D2w, Condition::V, Condition::I];
                    let failing = failing_conditions(&l, &red, &conds)?;
                    let lv = check_l(&red);
                    let eq = oracle::check_stutter_trace_equivalence(&l, &red, limits()).map_err(err)?;
                    ensure(
                        red.num_states() == 6 && red.num_transitions() == 8 && failing.is_empty() && lv.passes() && eq.passes(),
                        format!(
                            "{} states, {} transitions, failing {:?}, L {}, stutter {}",
                            red.num_states(),
                            red.num_transitions(),
                            failing,
                            status(&lv),
                            status(&eq)
                        ),
                    )
                },
            },
        ],
    })
}

/// `(state, condition)` pairs of the reduced LSTS whose condition fails.
fn failing_conditions(l: &Lsts, red: &ReducedLsts, conds: &[Condition]) -> Result<Vec<(StateId, Condition)>, String> {
    let bound = default_bound(l.num_states());
    let mut failing = Vec::new();
    for s in red.states() {
        let r = &red.r[&s];
        for &c in conds {
            if check_condition(l, &s, r, c, bound).map_err(err)?.is_fails() {
                failing.push((s, c));
            }
        }
    }
    Ok(failing)
}

// ---------------------------------------------------------------------------
// Counter-examples

/// The weak counter-example. States `1..10` of the figure get ids `0..9`;
/// `q` holds in 2, 8 and 10.
pub fn counter_example_lsts(strong: bool) -> Lsts {
    let mut b = LstsBuilder::new(["q"]).expect("one proposition");
    for i in 1..=10 {
        let l = if [2, 8, 10].contains(&i) { LabelSet::single(0) } else { LabelSet::EMPTY };
        b.add_state(i.to_string(), l);
    }
    let a = b.add_action("a", true);
    let key = if strong { a } else { b.add_action("a_key", true) };
    let a1 = b.add_action("a1", false);
    let a2 = b.add_action("a2", false);
    let a3 = b.add_action("a3", false);
    for (s, act, t) in [
        (1, a, 4),
        (4, a1, 5),
        (5, a2, 6),
        (6, a3, 10),
        (10, a3, 10),
        (1, key, 7),
        (7, a1, 8),
        (8, a2, 9),
        (9, a3, 9),
        (1, a1, 2),
        (2, a2, 3),
        (3, a, 6),
        (3, key, 9),
        (2, key, 8),
    ] {
        b.add_transition(s - 1, act, t - 1);
    }
    b.build(0).expect("well-formed LSTS")
}

fn counter_example_reduction(l: &Lsts, strong: bool) -> ReductionFunction {
    let names: &[&str] = if strong { &["a"] } else { &["a", "a_key"] };
    let mut r = ReductionFunction::with_default(DefaultSet::All);
    r.set(l.initial(), l.action_set(names).expect("actions exist"));
    r
}

fn is_lost_trace(l: &Lsts, v: &Verdict<OracleWitness>) -> bool {
    match v.witness() {
        Some(OracleWitness::Unmatched { direction: Direction::FullToReduced, witness }) => {
            let q = LabelSet::single(0);
            witness.nostut.word == [LabelSet::EMPTY, q, LabelSet::EMPTY, q]
                && witness.nostut.kind == TraceKind::InfiniteEventuallyConstant
                && l.format_trace(&witness.nostut) == "∅{q}∅{q}"
        }
        _ => false,
    }
}

/// Every reduction function that differs from `Act` only at the initial
/// state and passes D1p (or its stand-in), D2w, V, I and L at every
/// reduced state preserves stutter traces.
fn fix_validation(m: &BuiltinModel, cfg: &SuiteConfig) -> Outcome {
    let l = m.lsts().map_err(err)?;
    let n = l.num_actions();
    let conds = [cfg.d1p(), Condition::D2w, Condition::V, Condition::I];
    let mut accepted = Vec::new();
    for bits in 0u32..(1 << n) {
        let set: ActionSet = (0..n).filter(|a| bits & (1 << a) != 0).collect();
        let mut r = ReductionFunction::with_default(DefaultSet::All);
        r.set(l.initial(), set.clone());
        let red = reduce(&l, &r).map_err(err)?;
        if !failing_conditions(&l, &red, &conds)?.is_empty() || check_l(&red).is_fails() {
            continue;
        }
        let eq = oracle::check_stutter_trace_equivalence(&l, &red, limits()).map_err(err)?;
        if eq.is_fails() {
            return Err(format!("r(ŝ) = {} passes {:?} but loses a trace", format_set(&l, &set), conds.map(|c| c.to_string())));
        }
        accepted.push(format_set(&l, &set));
    }
    Ok(format!("{} accepted sets, all trace-preserving: {}", accepted.len(), accepted.join(" ")))
}

/// `s` is the initial state; actions outside `r(s)` are `a1 a2`.
/// Invisible sets per scenario follow the figure's dotted and dashed frames.
pub fn scenario_lsts(index: usize) -> Lsts {
    const GREY: [&[usize]; 9] = [&[1, 4], &[2], &[2, 3, 6], &[2, 5], &[5], &[3, 5, 6], &[3, 6], &[], &[4, 5, 6]];
    let grey = GREY[index - 1];
    let mut b = LstsBuilder::new(["q"]).expect("one proposition");
    for i in 1..=6 {
        b.add_state(i.to_string(), if grey.contains(&i) { LabelSet::single(0) } else { LabelSet::EMPTY });
    }
    let a = b.add_action("a", index <= 8);
    let a1 = b.add_action("a1", index >= 8);
    let a2 = b.add_action("a2", index >= 8);
    for (s, act, t) in [(1, a, 4), (4, a1, 5), (5, a2, 6), (1, a1, 2), (2, a2, 3), (3, a, 6)] {
        b.add_transition(s - 1, act, t - 1);
    }
    b.build(0).expect("well-formed LSTS")
}

/// Scenario numbers whose labelling is inconsistent.
pub fn problematic_scenarios() -> Result<Vec<usize>, oracle::OracleError> {
    let mut out = Vec::new();
    for i in 1..=9 {
        let l = scenario_lsts(i);
        if oracle::check_consistent_labelling(&l, l.invisible(), limits())?.is_fails() {
            out.push(i);
        }
    }
    Ok(out)
}

fn ce_weak() -> BuiltinModel {
    let l = counter_example_lsts(false);
    let r = counter_example_reduction(&l, false);
    BuiltinModel {
        id: "ce-weak",
        figure: "Counter-example showing that stubborn sets do not preserve stutter-trace equivalence",
        artifact: Artifact::Lsts(l),
        reductions: vec![("drawn".into(), r)],
        expectations: vec![
            Expectation {
                name: "shape",
                operation: "Lsts",
                expected: "10 states, proposition q, invisible {a,a_key}, deterministic",
                anchor: "grey states are labelled with {q}; the LSTS is deterministic",
                check: |m, _| {
                    let l = m.lsts().map_err(err)?;
                    let got = format!(
                        "{} states, props {:?}, invisible {}, deterministic {}",
                        l.num_states(),
                        l.props(),
                        format_set(&l, l.invisible()),
                        l.is_deterministic()
                    );
                    ensure(l.num_states() == 10 && l.props() == ["q"] && format_set(&l, l.invisible()) == "{a,a_key}" && l.is_deterministic(), got)
                },
            },
            Expectation {
                name: "{a,a_key} is a weak stubborn set",
                operation: "check_condition / check_l",
                expected: "D1 bounded_holds (bound ≥ 3), D2w V I hold, L holds",
                anchor: "a_key is an invisible key action; a1 a2 commutes with a and a_key",
                check: |m, _| {
                    let l = m.lsts().map_err(err)?;
                    let r = m.reduction("drawn").map_err(err)?;
                    let s = l.initial();
                    let rs = r.get(&l, s).map_err(err)?;
                    let bound = default_bound(l.num_states());
                    let mut got = Vec::new();
                    let mut ok = bound >= 3;
                    for c in [Condition::D1, Condition::D2w, Condition::V, Condition::I] {
                        let v = check_condition(&l, &s, &rs, c, bound).map_err(err)?;
                        ok &= if c == Condition::D1 { v.is_bounded() } else { v.is_holds() };
                        got.push(format!("{c} {}", status(&v)));
                    }
                    let lv = check_l(&reduce(&l, r).map_err(err)?);
                    ok &= lv.is_holds();
                    got.push(format!("L {}", status(&lv)));
                    ensure(ok, got.join(", "))
                },
            },
            Expectation {
                name: "reduction drops the dashed part",
                operation: "reduce",
                expected: "8 of 10 states, 9 of 14 transitions",
                anchor: "the reduced LSTS does not contain the dashed states and transitions",
                check: |m, _| {
                    let l = m.lsts().map_err(err)?;
                    let red = reduce(&l, m.reduction("drawn").map_err(err)?).map_err(err)?;
                    let dropped: Vec<String> = (0..l.num_states()).filter(|&s| !red.contains(s)).map(|s| l.state_name(s).to_string()).collect();
                    let got = format!(
                        "{} of {} states (dropped {}), {} of {} transitions",
                        red.num_states(),
                        l.num_states(),
                        dropped.join(","),
                        red.num_transitions(),
                        l.transitions().len()
                    );
                    ensure(dropped == ["2", "3"] && red.num_transitions() == 9 && l.transitions().len() == 14, got)
                },
            },
            Expectation {
                name: "trace ∅{q}∅{q} is lost",
                operation: "check_stutter_trace_equivalence",
                expected: "fails with nostut ∅{q}∅{q}",
                anchor: "the original LSTS contains the trace ∅{q}∅∅{q}^ω, the reduced one does not",
                check: |m, _| {
                    let l = m.lsts().map_err(err)?;
                    let red = reduce(&l, m.reduction("drawn").map_err(err)?).map_err(err)?;
                    let v = oracle::check_stutter_trace_equivalence(&l, &red, limits()).map_err(err)?;
                    ensure(is_lost_trace(&l, &v), format!("{v:?}"))
                },
            },
            Expectation {
                name: "q relapses only in the full LSTS",
                operation: "detect_q_relapse",
                expected: "full true, reduced false",
                anchor: "□(q ⇒ □(q ∨ □¬q)) holds in the reduced LSTS but not in the original",
                check: |m, _| {
                    let l = m.lsts().map_err(err)?;
                    let red = reduce(&l, m.reduction("drawn").map_err(err)?).map_err(err)?;
                    let (f, r) = (oracle::detect_q_relapse(&l, 0), oracle::detect_q_relapse(&red.lsts, 0));
                    ensure(f && !r, format!("full {f}, reduced {r}"))
                },
            },
            Expectation {
                name: "visible words are preserved",
                operation: "check_weak_trace_equivalence",
                expected: "bounded_holds",
                anchor: "weak stubborn sets preserve weak traces",
                check: |m, _| {
                    let l = m.lsts().map_err(err)?;
                    let red = reduce(&l, m.reduction("drawn").map_err(err)?).map_err(err)?;
                    let v = oracle::check_weak_trace_equivalence(&l, &red, l.invisible(), limits()).map_err(err)?;
                    ensure(v.is_bounded(), status(&v))
                },
            },
            Expectation {
                name: "D1p rejects {a,a_key}",
                operation: "check_condition",
                expected: "fails, action a after a1 a2",
                anchor: "the middle dashed state has no vertical a-transition",
                check: d1p_rejects,
            },
            Expectation {
                name: "fix validation",
                operation: "check_condition / reduce / check_stutter_trace_equivalence",
                expected: "every r(ŝ) passing D1p D2w V I L preserves stutter traces",
                anchor: "with D1' the reduced LSTS is stutter-trace equivalent to the original",
                check: fix_validation,
            },
            Expectation {
                name: "nine scenarios",
                operation: "check_consistent_labelling",
                expected: "scenarios 2 and 5 are inconsistent",
                anchor: "the two cases delimited with a solid line are problematic; the top one is the core of the counter-example",
                check: |_, _| {
                    let got = problematic_scenarios().map_err(err)?;
                    ensure(got == [2, 5], format!("{got:?}"))
                },
            },
        ],
    }
}

fn d1p_rejects(m: &BuiltinModel, cfg: &SuiteConfig) -> Outcome {
    let l = m.lsts().map_err(err)?;
    let r = m.reductions[0].1.get(&l, l.initial()).map_err(err)?;
    let v = check_condition(&l, &l.initial(), &r, cfg.d1p(), default_bound(l.num_states())).map_err(err)?;
    match v.witness() {
        Some(ConditionWitness::Commutation { action, path, .. }) => {
            let got = format!("fails, action {} after {}", l.action_name(*action), l.format_actions(&path.actions()));
            ensure(l.action_name(*action) == "a", got)
        }
        _ => Err(status(&v)),
    }
}

fn ce_strong() -> BuiltinModel {
    let l = counter_example_lsts(true);
    let r = counter_example_reduction(&l, true);
    BuiltinModel {
        id: "ce-strong",
        figure: "Counter-example with a = a_key",
        artifact: Artifact::Lsts(l),
        reductions: vec![("drawn".into(), r)],
        expectations: vec![
            Expectation {
                name: "renaming breaks determinism",
                operation: "Lsts::is_deterministic",
                expected: "false",
                anchor: "assuming a = a_key makes the LSTS no longer deterministic",
                check: |m, _| {
                    let l = m.lsts().map_err(err)?;
                    ensure(!l.is_deterministic(), format!("deterministic {}", l.is_deterministic()))
                },
            },
            Expectation {
                name: "{a} is a strong stubborn set",
                operation: "check_condition",
                expected: "D0 D2 V I hold, D1 bounded_holds",
                anchor: "r(ŝ) = {a} is a strong stubborn set; D0 holds as r(ŝ) ∩ enabled(ŝ) = {a}",
                check: |m, _| {
                    let l = m.lsts().map_err(err)?;
                    let s = l.initial();
                    let rs = m.reduction("drawn").map_err(err)?.get(&l, s).map_err(err)?;
                    let mut got = Vec::new();
                    let mut ok = true;
                    for c in [Condition::D0, Condition::D1, Condition::D2, Condition::V, Condition::I] {
                        let v = check_condition(&l, &s, &rs, c, default_bound(l.num_states())).map_err(err)?;
                        ok &= if c == Condition::D1 { v.is_bounded() } else { v.is_holds() };
                        got.push(format!("{c} {}", status(&v)));
                    }
                    ensure(ok, got.join(", "))
                },
            },
            Expectation {
                name: "trace ∅{q}∅{q} is lost",
                operation: "check_stutter_trace_equivalence",
                expected: "fails with nostut ∅{q}∅{q}",
                anchor: "strong stubborn sets do not preserve stutter traces either",
                check: |m, _| {
                    let l = m.lsts().map_err(err)?;
                    let red = reduce(&l, m.reduction("drawn").map_err(err)?).map_err(err)?;
                    let v = oracle::check_stutter_trace_equivalence(&l, &red, limits()).map_err(err)?;
                    ensure(is_lost_trace(&l, &v), format!("{v:?}"))
                },
            },
            Expectation {
                name: "D1p rejects {a}",
                operation: "check_condition",
                expected: "fails, action a after a1 a2",
                anchor: "the middle dashed state has no vertical a-transition",
                check: d1p_rejects,
            },
            Expectation {
                name: "fix validation",
                operation: "check_condition / reduce / check_stutter_trace_equivalence",
                expected: "every r(ŝ) passing D1p D2w V I L preserves stutter traces",
                anchor: "with D1' the reduced LSTS is stutter-trace equivalent to the original",
                check: fix_validation,
            },
        ],
    }
}

// ---------------------------------------------------------------------------
// The net whose LSTS is labelled inconsistently

fn inconsistent_net() -> PetriNet {
    use Arc::{In, Out};
    PetriNet::from_parts(
        &[("p1", 1), ("p2", 0), ("p3", 1), ("p4", 1), ("p5", 0), ("p6", 0)],
        &["t1", "t2", "t", "t3", "t_key"],
        &[
            In("p1", "t1", 1),
            In("p3", "t1", 1),
            Out("t1", "p2", 1),
            In("p2", "t2", 1),
            Out("t2", "p3", 1),
            Out("t2", "p5", 1),
            In("p3", "t", 1),
            Out("t", "p3", 1),
            In("p4", "t", 1),
            Out("t", "p5", 1),
            In("p5", "t3", 2),
            In("p4", "t_key", 1),
            Out("t_key", "p6", 1),
        ],
    )
    .expect("well-formed net")
}

/// `q` (arbitrary, only at 001000), `q_l := p3 + p4 + p6 = 0` and
/// `q_p := (1 − p3)(1 − p5) = 1`.
pub fn inconsistent_props(net: &PetriNet) -> Vec<AtomicProp> {
    let p = |name: &str| net.place(name).expect("place exists");
    let q = AtomicProp::arbitrary("q", [(Marking::from_digits("001000").expect("digits"), true)], Some(false));
    let q_l = AtomicProp::linear("q_l", &[(p("p3"), 1), (p("p4"), 1), (p("p6"), 1)], Cmp::Eq, 0);
    let one = MultiPoly::constant(1);
    let f = &(&one - &MultiPoly::var(p("p3"))) * &(&one - &MultiPoly::var(p("p5")));
    let q_p = AtomicProp::polynomial("q_p", f, Cmp::Eq, 1);
    vec![q, q_l, q_p]
}

/// A proposition that holds exactly where `q_l` holds among the reachable
/// markings, given as a table.
pub fn q_l_as_table(net: &PetriNet) -> AtomicProp {
    let q_l = inconsistent_props(net).remove(1);
    let rows: Vec<(Marking, bool)> = net
        .reachable_markings(MODEL_STATE_CAP)
        .expect("bounded net")
        .into_iter()
        .filter(|m| q_l.eval(m).unwrap_or(false))
        .map(|m| (m, true))
        .collect();
    AtomicProp::arbitrary("q_l", rows, Some(false))
}

fn classify_case(m: &BuiltinModel, prop: &str, t: &str, flags: &str) -> Result<Verdict<InvisibilityWitness>, String> {
    let nm = m.net_model().map_err(err)?;
    let q = nm.props.iter().find(|q| q.id == prop).ok_or_else(|| format!("no proposition {prop}"))?;
    let t = nm.net.transition(t).map_err(err)?;
    let flags: InvisibilityFlags = flags.parse().map_err(err)?;
    Classifier::new(&nm.net, MODEL_BOX, MODEL_STATE_CAP).classify(q, t, flags).map_err(err)
}

fn expect_witness(v: &Verdict<InvisibilityWitness>, from: &str, to: &str) -> Outcome {
    match v.witness() {
        Some(w) => ensure(w.from.to_string() == from && w.to.to_string() == to, format!("fails with {w}")),
        None => Err(status(v)),
    }
}

/// Consistency of the net's LSTS relabelled by `props` under `flags`.
fn consistency_case(m: &BuiltinModel, props: Vec<AtomicProp>, flags: &str) -> Result<(Lsts, Verdict<OracleWitness>), String> {
    let nm = m.net_model().map_err(err)?;
    let flags: InvisibilityFlags = flags.parse().map_err(err)?;
    let l = build_lsts(&nm.net, &props, flags, MODEL_STATE_CAP, MODEL_BOX).map_err(err)?.lsts;
    let v = oracle::check_consistent_labelling(&l, l.invisible(), limits()).map_err(err)?;
    Ok((l, v))
}

/// The initial path firing `names` in order, if it exists and is complete.
fn complete_run(l: &Lsts, names: &[&str]) -> Option<Run> {
    let mut path = crate::lsts::Path::single(l.initial());
    for name in names {
        let a = l.action_by_name(name)?;
        let next = l.successors_by(*path.end(), a).next()?;
        path.push(a, next);
    }
    l.is_deadlock(*path.end()).then_some(Run::Finite(path))
}

/// Both action sequences are complete initial paths, weakly equivalent
/// but with different no-stutter traces.
fn inconsistent_pair(l: &Lsts, first: &[&str], second: &[&str]) -> Result<bool, String> {
    let (Some(x), Some(y)) = (complete_run(l, first), complete_run(l, second)) else {
        return Ok(false);
    };
    Ok(l.weak_equivalent(&x, &y, l.invisible()).map_err(err)? && !l.stutter_equivalent(&x, &y).map_err(err)?)
}

fn negative_case(l: &Lsts, v: &Verdict<OracleWitness>) -> Outcome {
    let pair = inconsistent_pair(l, &["t1", "t2", "t", "t3"], &["t", "t1", "t2", "t3"])?;
    ensure(v.is_fails() && pair, format!("{}, t1 t2 t t3 vs t t1 t2 t3 inconsistent: {pair}", status(v)))
}

fn pn_inconsistent() -> BuiltinModel {
    let net = inconsistent_net();
    let props = inconsistent_props(&net);
    BuiltinModel {
        id: "pn-inconsistent",
        figure: "Example of a Petri net whose LSTS suffers from the inconsistent labelling problem",
        artifact: Artifact::Net(NetModel { net, props, flags: InvisibilityFlags::PLAIN }),
        reductions: Vec::new(),
        expectations: vec![
            Expectation {
                name: "reachable LSTS and its labels",
                operation: "build_lsts",
                expected: "10 states; 001000 {q}, 010100 {q_p}, 010010 {q_l}, 010001 {q_p}, others ∅",
                anchor: "the right-hand graph of the figure",
                check: |m, _| {
                    let n = m.net_lsts().map_err(err)?;
                    let l = &n.lsts;
                    let drawn: BTreeMap<&str, &str> =
                        [("001000", "{q}"), ("010100", "{q_p}"), ("010010", "{q_l}"), ("010001", "{q_p}")].into_iter().collect();
                    let mut wrong = Vec::new();
                    for (s, mk) in n.markings.iter().enumerate() {
                        let want = drawn.get(mk.to_string().as_str()).copied().unwrap_or("∅");
                        let got = l.format_labels(l.labels(s));
                        if got != want {
                            wrong.push(format!("{mk}: {got}"));
                        }
                    }
                    ensure(l.num_states() == 10 && wrong.is_empty(), format!("{} states, mismatches {:?}", l.num_states(), wrong))
                },
            },
            Expectation {
                name: "t is q_l-invisible",
                operation: "classify_invisibility",
                expected: "holds or bounded_holds",
                anchor: "m -t-> m' implies m(p3) = m'(p3) ≥ 1",
                check: |m, _| {
                    let v = classify_case(m, "q_l", "t", "plain")?;
                    ensure(v.passes(), status(&v))
                },
            },
            Expectation {
                name: "t is not value q_l-invisible",
                operation: "classify_invisibility",
                expected: "fails with 101100 -> 101010",
                anchor: "by the transition 101100 -t-> 101010",
                check: |m, _| expect_witness(&classify_case(m, "q_l", "t", "value")?, "101100", "101010"),
            },
            Expectation {
                name: "t is not strongly reach q_l-invisible",
                operation: "classify_invisibility",
                expected: "fails with (010100, 010010)",
                anchor: "by 010100 and 010010",
                check: |m, _| expect_witness(&classify_case(m, "q_l", "t", "strong,reach")?, "010100", "010010"),
            },
            Expectation {
                name: "t_key is strongly value q_l-invisible",
                operation: "classify_invisibility",
                expected: "holds",
                anchor: "t_key moves a token from p4 to p6, keeping p3 + p4 + p6",
                check: |m, _| {
                    let v = classify_case(m, "q_l", "t_key", "strong,value")?;
                    ensure(v.is_holds(), status(&v))
                },
            },
            Expectation {
                name: "t is reach value q_p-invisible",
                operation: "classify_invisibility",
                expected: "holds",
                anchor: "t is reach value q_p-invisible",
                check: |m, _| {
                    let v = classify_case(m, "q_p", "t", "reach,value")?;
                    ensure(v.is_holds(), status(&v))
                },
            },
            Expectation {
                name: "t is not q_p-invisible",
                operation: "classify_invisibility / verify_invisibility_witness",
                expected: "plain and value fail; 002120 -> 002030 replays for both",
                anchor: "not q_p-invisible, by 002120 -t-> 002030",
                check: |m, _| {
                    let nm = m.net_model().map_err(err)?;
                    let q_p = &nm.props[2];
                    let t = nm.net.transition("t").map_err(err)?;
                    let w = InvisibilityWitness {
                        from: Marking::from_digits("002120").expect("digits"),
                        to: Marking::from_digits("002030").expect("digits"),
                    };
                    let mut got = Vec::new();
                    let mut ok = true;
                    for flags in ["plain", "value"] {
                        let v = classify_case(m, "q_p", "t", flags)?;
                        let f: InvisibilityFlags = flags.parse().map_err(err)?;
                        let replay = verify_invisibility_witness(&nm.net, q_p, t, f, &w, MODEL_STATE_CAP).map_err(err)?;
                        ok &= v.is_fails() && replay;
                        got.push(format!("{flags}: {}, replay {replay}", status(&v)));
                    }
                    ensure(ok, got.join("; "))
                },
            },
            Expectation {
                name: "t is not strongly reach q_p-invisible",
                operation: "classify_invisibility",
                expected: "fails",
                anchor: "t is not strongly reach q_p-invisible",
                check: |m, _| {
                    let v = classify_case(m, "q_p", "t", "strong,reach")?;
                    ensure(v.is_fails(), status(&v))
                },
            },
            Expectation {
                name: "t_key is strongly value q_p-invisible",
                operation: "classify_invisibility",
                expected: "holds",
                anchor: "p4 and p6 do not occur in q_p",
                check: |m, _| {
                    let v = classify_case(m, "q_p", "t_key", "strong,value")?;
                    ensure(v.is_holds(), status(&v))
                },
            },
            Expectation {
                name: "consistent cases",
                operation: "check_consistent_labelling",
                expected: "bounded_holds for (q_l, reach value), (q_l q_p, value), (q q_l q_p, reach strong)",
                anchor: "labelled consistently for linear, polynomial and arbitrary propositions",
                check: |m, _| {
                    let props = &m.net_model().map_err(err)?.props;
                    let mut got = Vec::new();
                    let mut ok = true;
                    for (chosen, flags) in [(&[1][..], "reach,value"), (&[1, 2], "value"), (&[0, 1, 2], "reach,strong")] {
                        let ps: Vec<AtomicProp> = chosen.iter().map(|&i| props[i].clone()).collect();
                        let (_, v) = consistency_case(m, ps, flags)?;
                        ok &= v.is_bounded();
                        got.push(format!("{flags}: {}", status(&v)));
                    }
                    ensure(ok, got.join("; "))
                },
            },
            Expectation {
                name: "inconsistent for arbitrary propositions",
                operation: "check_consistent_labelling",
                expected: "fails with t1 t2 t t3 vs t t1 t2 t3",
                anchor: "not necessarily labelled consistently for arbitrary propositions",
                check: |m, _| {
                    let net = &m.net_model().map_err(err)?.net;
                    let (l, v) = consistency_case(m, vec![q_l_as_table(net)], "plain")?;
                    negative_case(&l, &v)
                },
            },
            Expectation {
                name: "inconsistent for polynomial propositions",
                operation: "check_consistent_labelling",
                expected: "fails with t1 t2 t t3 vs t t1 t2 t3",
                anchor: "not necessarily labelled consistently for polynomial propositions",
                check: |m, _| {
                    let props = &m.net_model().map_err(err)?.props;
                    let (l, v) = consistency_case(m, vec![props[2].clone()], "reach,value")?;
                    negative_case(&l, &v)
                },
            },
        ],
    }
}

// ---------------------------------------------------------------------------
// Suite

#[derive(Clone, Debug, Serialize)]
pub struct ExpectationResult {
    pub model: String,
    pub name: String,
    pub operation: String,
    pub expected: String,
    pub anchor: String,
    pub passed: bool,
    pub observed: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub limits: Limits,
    pub results: Vec<ExpectationResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ExpectationResult> {
        self.results.iter().filter(|r| !r.passed)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("plain data");
        v["status"] = json!(if self.passed() { "holds" } else { "fails" });
        v
    }
}

/// Runs the expectations of `models`, one thread per model; results keep
/// model and table order.
pub fn run_expectations(models: &[BuiltinModel], config: SuiteConfig) -> SuiteReport {
    let per_model: Vec<Vec<ExpectationResult>> = std::thread::scope(|scope| {
        let handles: Vec<_> = models
            .iter()
            .map(|m| {
                scope.spawn(move || {
                    m.expectations
                        .iter()
                        .map(|e| {
                            let outcome = (e.check)(m, &config);
                            ExpectationResult {
                                model: m.id.into(),
                                name: e.name.into(),
                                operation: e.operation.into(),
                                expected: e.expected.into(),
                                anchor: e.anchor.into(),
                                passed: outcome.is_ok(),
                                observed: outcome.unwrap_or_else(|e| e),
                            }
                        })
                        .collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("expectation panicked")).collect()
    });
    SuiteReport { config, limits: limits(), results: per_model.into_iter().flatten().collect() }
}

pub fn run_builtin_suite(config: SuiteConfig) -> SuiteReport {
    run_expectations(&all_models(), config)
}

// ---------------------------------------------------------------------------
// Random artifacts

#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct GenParams {
    pub seed: u64,
    pub states: usize,
    pub actions: usize,
    pub props: usize,
    /// Probability of an `a`-edge from a state, per action.
    pub branching: f64,
    /// Probability of a second `a`-target where an edge exists.
    pub nondeterminism: f64,
    /// Probability that an action keeps labels and is declared invisible.
    pub invisible_bias: f64,
    pub places: usize,
    pub transitions: usize,
    /// Probability of an arc between a place and a transition.
    pub arc_density: f64,
    pub token_bound: u32,
    pub state_cap: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            seed: 0,
            states: 8,
            actions: 4,
            props: 1,
            branching: 0.35,
            nondeterminism: 0.1,
            invisible_bias: 0.6,
            places: 6,
            transitions: 5,
            arc_density: 0.3,
            token_bound: 3,
            state_cap: 200,
        }
    }
}

impl GenParams {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}

/// A random LSTS restricted to the part reachable from state 0. Actions
/// chosen as invisible only connect states with equal labels.
pub fn random_lsts(params: &GenParams) -> Lsts {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.states.max(1);
    let k = params.props.min(crate::lsts::MAX_PROPS);
    let labels: Vec<LabelSet> = (0..n)
        .map(|_| {
            let mut l = LabelSet::EMPTY;
            for p in 0..k {
                if rng.gen_bool(0.4) {
                    l.insert(p);
                }
            }
            l
        })
        .collect();
    let quiet: Vec<bool> = (0..params.actions).map(|_| rng.gen_bool(params.invisible_bias.clamp(0.0, 1.0))).collect();
    let mut edges = BTreeSet::new();
    for s in 0..n {
        for (a, &is_quiet) in quiet.iter().enumerate() {
            if !rng.gen_bool(params.branching.clamp(0.0, 1.0)) {
                continue;
            }
            let candidates: Vec<usize> = if is_quiet { (0..n).filter(|&t| labels[t] == labels[s]).collect() } else { (0..n).collect() };
            let targets = if rng.gen_bool(params.nondeterminism.clamp(0.0, 1.0)) { 2 } else { 1 };
            for _ in 0..targets {
                let t = *candidates.choose(&mut rng).expect("s itself qualifies");
                edges.insert((s, a, t));
            }
        }
    }

    let mut order = vec![0usize];
    let mut index = vec![usize::MAX; n];
    index[0] = 0;
    let mut i = 0;
    while i < order.len() {
        let s = order[i];
        for &(_, _, t) in edges.range((s, 0, 0)..(s + 1, 0, 0)) {
            if index[t] == usize::MAX {
                index[t] = order.len();
                order.push(t);
            }
        }
        i += 1;
    }
    let mut b = LstsBuilder::new((0..k).map(|p| format!("q{p}"))).expect("at most 64 propositions");
    for &s in &order {
        b.add_state(format!("s{s}"), labels[s]);
    }
    for (a, &is_quiet) in quiet.iter().enumerate() {
        b.add_action(format!("a{a}"), is_quiet);
    }
    for &(s, a, t) in &edges {
        if index[s] != usize::MAX {
            b.add_transition(index[s], a, index[t]);
        }
    }
    b.build(0).expect("generated LSTS is well formed")
}

/// A random net whose reachable markings fit `state_cap` and never exceed
/// `token_bound` tokens per place. Each transition takes from one or two
/// places and puts into up to two; `arc_density` is the chance of the
/// second arc. Candidates violating either bound are discarded; after 1000
/// rejections the transitions are dropped.
pub fn random_pn(params: &GenParams) -> PetriNet {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let np = params.places.max(1);
    let places: Vec<String> = (0..np).map(|p| format!("p{p}")).collect();
    let transitions: Vec<String> = (0..params.transitions).map(|t| format!("t{t}")).collect();
    let density = params.arc_density.clamp(0.0, 1.0);
    for _ in 0..1000 {
        let tokens: Vec<u32> = (0..np).map(|_| u32::from(rng.gen_bool(0.5)).min(params.token_bound)).collect();
        let mut pre = vec![vec![0u32; np]; params.transitions];
        let mut post = vec![vec![0u32; np]; params.transitions];
        for t in 0..params.transitions {
            let inputs = 1 + usize::from(rng.gen_bool(density));
            let outputs = usize::from(rng.gen_bool(0.9)) + usize::from(rng.gen_bool(density));
            for p in rand::seq::index::sample(&mut rng, np, inputs.min(np)) {
                pre[t][p] = if rng.gen_bool(0.1) { 2 } else { 1 };
            }
            for p in rand::seq::index::sample(&mut rng, np, outputs.min(np)) {
                post[t][p] = 1;
            }
        }
        let net = matrices_net(&places, &transitions, &tokens, &pre, &post);
        if let Ok(reach) = net.reachable_markings(params.state_cap) {
            if reach.iter().all(|m| m.max_tokens() <= params.token_bound) {
                return net;
            }
        }
    }
    let tokens = vec![0; np];
    matrices_net(&places, &[], &tokens, &[], &[])
}

fn matrices_net(places: &[String], transitions: &[String], tokens: &[u32], pre: &[Vec<u32>], post: &[Vec<u32>]) -> PetriNet {
    let mut arcs = Vec::new();
    for (t, name) in transitions.iter().enumerate() {
        for (p, place) in places.iter().enumerate() {
            if pre[t][p] > 0 {
                arcs.push(Arc::In(place.as_str(), name.as_str(), pre[t][p]));
            }
            if post[t][p] > 0 {
                arcs.push(Arc::Out(name.as_str(), place.as_str(), post[t][p]));
            }
        }
    }
    let ps: Vec<(&str, u32)> = places.iter().map(String::as_str).zip(tokens.iter().copied()).collect();
    let ts: Vec<&str> = transitions.iter().map(String::as_str).collect();
    PetriNet::from_parts(&ps, &ts, &arcs).expect("generated net is well formed")
}

/// `params.props` random linear propositions `Σ c_p·m(p) ⋈ k` over one or
/// two places with coefficients ±1.
pub fn random_props(net: &PetriNet, params: &GenParams) -> Vec<AtomicProp> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x5eed_0f_9709);
    let cmps = [Cmp::Ge, Cmp::Le, Cmp::Eq, Cmp::Ne];
    (0..params.props)
        .map(|i| {
            let width = rng.gen_range(1..=2.min(net.num_places()));
            let mut chosen: Vec<usize> = (0..net.num_places()).collect();
            chosen.shuffle(&mut rng);
            let coeffs: Vec<(usize, i64)> = chosen[..width].iter().map(|&p| (p, if rng.gen_bool(0.8) { 1 } else { -1 })).collect();
            let cmp = *cmps.choose(&mut rng).expect("non-empty");
            AtomicProp::linear(format!("q{i}"), &coeffs, cmp, rng.gen_range(0..=1))
        })
        .collect()
}

/// A random net together with its random propositions.
pub fn random_pn_case(params: &GenParams) -> (PetriNet, Vec<AtomicProp>) {
    let net = random_pn(params);
    let props = random_props(&net, params);
    (net, props)
}
