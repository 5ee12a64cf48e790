//! Place/transition nets, firing, and the LSTS induced by the reachable
//! markings.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lsts::{ActionSet, LabelSet, Lsts, LstsBuilder, LstsError, StateId};
use crate::props::{AtomicProp, Classifier, InvisibilityFlags, PropError};
use crate::verdict::Verdict;

pub type PlaceId = usize;
pub type TransitionId = usize;

#[derive(Debug, Error)]
pub enum PetriError {
    #[error("unknown place `{0}`")]
    UnknownPlace(String),
    #[error("unknown transition `{0}`")]
    UnknownTransition(String),
    #[error("name `{0}` is used more than once")]
    DuplicateName(String),
    #[error("arc {from} -> {to} must connect a place and a transition")]
    BadArc { from: String, to: String },
    #[error("transition {transition} is not enabled at {marking}")]
    NotEnabled { transition: String, marking: Marking },
    #[error("marking has {got} places, net has {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("more than {0} reachable markings (the net may be unbounded)")]
    StateCapExceeded(usize),
    #[error(transparent)]
    Prop(#[from] PropError),
    #[error(transparent)]
    Lsts(#[from] LstsError),
    #[error("invalid net document: {0}")]
    Json(#[from] serde_json::Error),
}

/// Token counts per place.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Marking(Vec<u32>);

impl Marking {
    pub fn new(tokens: Vec<u32>) -> Self {
        Self(tokens)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// Parses a digit string such as `101100` (one digit per place).
    pub fn from_digits(s: &str) -> Option<Self> {
        s.chars().map(|c| c.to_digit(10)).collect::<Option<Vec<u32>>>().map(Self)
    }

    pub fn tokens(&self, p: PlaceId) -> u32 {
        self.0[p]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn set(&mut self, p: PlaceId, n: u32) {
        self.0[p] = n;
    }

    pub fn to_point(&self) -> Vec<i64> {
        self.0.iter().map(|&x| i64::from(x)).collect()
    }

    /// `self + delta`, or `None` if some place would go negative.
    pub fn add_delta(&self, delta: &[i64]) -> Option<Marking> {
        self.0
            .iter()
            .zip(delta)
            .map(|(&x, &d)| u32::try_from(i64::from(x) + d).ok())
            .collect::<Option<Vec<u32>>>()
            .map(Marking)
    }

    pub fn max_tokens(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&x| x < 10) {
            for x in &self.0 {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

/// A place/transition net with arc weights and an initial marking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PetriNet {
    place_names: Vec<String>,
    transition_names: Vec<String>,
    /// `pre[t][p] = W(p, t)`
    pre: Vec<Vec<u32>>,
    /// `post[t][p] = W(t, p)`
    post: Vec<Vec<u32>>,
    initial: Marking,
}

/// Arc endpoint used when building a net by name.
#[derive(Clone, Copy, Debug)]
pub enum Arc<'a> {
    In(&'a str, &'a str, u32),
    Out(&'a str, &'a str, u32),
}

impl PetriNet {
    /// Builds a net from `(place, initial tokens)` pairs, transition names,
    /// and arcs given by name: `In(p, t, w)` is `W(p,t) = w`, `Out(t, p, w)`
    /// is `W(t,p) = w`.
    pub fn from_parts(places: &[(&str, u32)], transitions: &[&str], arcs: &[Arc<'_>]) -> Result<Self, PetriError> {
        let place_names: Vec<String> = places.iter().map(|(n, _)| n.to_string()).collect();
        let transition_names: Vec<String> = transitions.iter().map(|n| n.to_string()).collect();
        let mut net = PetriNet {
            pre: vec![vec![0; place_names.len()]; transition_names.len()],
            post: vec![vec![0; place_names.len()]; transition_names.len()],
            initial: Marking(places.iter().map(|(_, k)| *k).collect()),
            place_names,
            transition_names,
        };
        net.check_names()?;
        for arc in arcs {
            match *arc {
                Arc::In(p, t, w) => {
                    let (p, t) = (net.place(p)?, net.transition(t)?);
                    net.pre[t][p] += w;
                }
                Arc::Out(t, p, w) => {
                    let (p, t) = (net.place(p)?, net.transition(t)?);
                    net.post[t][p] += w;
                }
            }
        }
        Ok(net)
    }

    /// Builds a net directly from weight matrices indexed `[t][p]`.
    pub fn from_matrices(
        place_names: Vec<String>,
        transition_names: Vec<String>,
        pre: Vec<Vec<u32>>,
        post: Vec<Vec<u32>>,
        initial: Marking,
    ) -> Result<Self, PetriError> {
        let np = place_names.len();
        for row in pre.iter().chain(post.iter()) {
            if row.len() != np {
                return Err(PetriError::WrongLength { got: row.len(), expected: np });
            }
        }
        if pre.len() != transition_names.len() || post.len() != transition_names.len() {
            return Err(PetriError::WrongLength { got: pre.len(), expected: transition_names.len() });
        }
        if initial.len() != np {
            return Err(PetriError::WrongLength { got: initial.len(), expected: np });
        }
        let net = PetriNet { place_names, transition_names, pre, post, initial };
        net.check_names()?;
        Ok(net)
    }

    fn check_names(&self) -> Result<(), PetriError> {
        let mut seen = HashSet::new();
        for n in self.place_names.iter().chain(self.transition_names.iter()) {
            if !seen.insert(n) {
                return Err(PetriError::DuplicateName(n.clone()));
            }
        }
        Ok(())
    }

    pub fn num_places(&self) -> usize {
        self.place_names.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.transition_names.len()
    }

    pub fn place_name(&self, p: PlaceId) -> &str {
        &self.place_names[p]
    }

    pub fn transition_name(&self, t: TransitionId) -> &str {
        &self.transition_names[t]
    }

    pub fn place(&self, name: &str) -> Result<PlaceId, PetriError> {
        self.place_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| PetriError::UnknownPlace(name.to_string()))
    }

    pub fn transition(&self, name: &str) -> Result<TransitionId, PetriError> {
        self.transition_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| PetriError::UnknownTransition(name.to_string()))
    }

    pub fn transitions_named(&self, names: &[&str]) -> Result<ActionSet, PetriError> {
        names.iter().map(|n| self.transition(n)).collect()
    }

    /// `W(p, t)`.
    pub fn pre(&self, t: TransitionId, p: PlaceId) -> u32 {
        self.pre[t][p]
    }

    /// `W(t, p)`.
    pub fn post(&self, t: TransitionId, p: PlaceId) -> u32 {
        self.post[t][p]
    }

    pub fn pre_vector(&self, t: TransitionId) -> &[u32] {
        &self.pre[t]
    }

    pub fn initial(&self) -> &Marking {
        &self.initial
    }

    /// `d_t(p) = W(t,p) − W(p,t)`.
    pub fn delta(&self, t: TransitionId) -> Vec<i64> {
        (0..self.num_places())
            .map(|p| i64::from(self.post[t][p]) - i64::from(self.pre[t][p]))
            .collect()
    }

    pub fn input_places(&self, t: TransitionId) -> impl Iterator<Item = PlaceId> + '_ {
        (0..self.num_places()).filter(move |&p| self.pre[t][p] > 0)
    }

    pub fn is_enabled(&self, m: &Marking, t: TransitionId) -> bool {
        (0..self.num_places()).all(|p| m.0[p] >= self.pre[t][p])
    }

    pub fn enabled(&self, m: &Marking) -> ActionSet {
        (0..self.num_transitions()).filter(|&t| self.is_enabled(m, t)).collect()
    }

    pub fn fire(&self, m: &Marking, t: TransitionId) -> Result<Marking, PetriError> {
        if m.len() != self.num_places() {
            return Err(PetriError::WrongLength { got: m.len(), expected: self.num_places() });
        }
        if !self.is_enabled(m, t) {
            return Err(PetriError::NotEnabled {
                transition: self.transition_names[t].clone(),
                marking: m.clone(),
            });
        }
        Ok(self.fire_unchecked(m, t))
    }

    /// Firing without the enabledness check; the caller guarantees it.
    pub fn fire_unchecked(&self, m: &Marking, t: TransitionId) -> Marking {
        Marking(
            (0..self.num_places())
                .map(|p| m.0[p] - self.pre[t][p] + self.post[t][p])
                .collect(),
        )
    }

    /// Reachable markings, breadth-first; each layer is sorted
    /// lexicographically so the order does not depend on hashing.
    pub fn reachable_markings(&self, state_cap: usize) -> Result<Vec<Marking>, PetriError> {
        let mut seen: HashSet<Marking> = HashSet::from([self.initial.clone()]);
        let mut order = vec![self.initial.clone()];
        let mut layer = vec![self.initial.clone()];
        while !layer.is_empty() {
            let mut next = BTreeSet::new();
            for m in &layer {
                for t in 0..self.num_transitions() {
                    if self.is_enabled(m, t) {
                        let m2 = self.fire_unchecked(m, t);
                        if !seen.contains(&m2) {
                            next.insert(m2);
                        }
                    }
                }
            }
            for m in &next {
                seen.insert(m.clone());
                order.push(m.clone());
            }
            if order.len() > state_cap {
                return Err(PetriError::StateCapExceeded(state_cap));
            }
            layer = next.into_iter().collect();
        }
        Ok(order)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(NetDoc::from(self)).expect("net document serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&NetDoc::from(self)).expect("net document serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self, PetriError> {
        let doc: NetDoc = serde_json::from_str(text)?;
        doc.into_net()
    }

    pub fn from_json_value(value: serde_json::Value) -> Result<Self, PetriError> {
        let doc: NetDoc = serde_json::from_value(value)?;
        doc.into_net()
    }
}

#[derive(Serialize, Deserialize)]
struct PlaceDoc {
    id: String,
    #[serde(default)]
    tokens: u32,
}

#[derive(Serialize, Deserialize)]
struct ArcDoc {
    from: String,
    to: String,
    #[serde(default = "one")]
    w: u32,
}

fn one() -> u32 {
    1
}

#[derive(Serialize, Deserialize)]
struct NetDoc {
    places: Vec<PlaceDoc>,
    transitions: Vec<String>,
    arcs: Vec<ArcDoc>,
}

impl From<&PetriNet> for NetDoc {
    fn from(net: &PetriNet) -> Self {
        let mut arcs = Vec::new();
        for t in 0..net.num_transitions() {
            for p in 0..net.num_places() {
                if net.pre[t][p] > 0 {
                    arcs.push(ArcDoc { from: net.place_names[p].clone(), to: net.transition_names[t].clone(), w: net.pre[t][p] });
                }
            }
            for p in 0..net.num_places() {
                if net.post[t][p] > 0 {
                    arcs.push(ArcDoc { from: net.transition_names[t].clone(), to: net.place_names[p].clone(), w: net.post[t][p] });
                }
            }
        }
        NetDoc {
            places: (0..net.num_places())
                .map(|p| PlaceDoc { id: net.place_names[p].clone(), tokens: net.initial.0[p] })
                .collect(),
            transitions: net.transition_names.clone(),
            arcs,
        }
    }
}

impl NetDoc {
    fn into_net(self) -> Result<PetriNet, PetriError> {
        let places: Vec<(&str, u32)> = self.places.iter().map(|p| (p.id.as_str(), p.tokens)).collect();
        let transitions: Vec<&str> = self.transitions.iter().map(String::as_str).collect();
        let place_set: HashSet<&str> = places.iter().map(|p| p.0).collect();
        let transition_set: HashSet<&str> = transitions.iter().copied().collect();
        let mut arcs = Vec::new();
        for a in &self.arcs {
            let (f, t) = (a.from.as_str(), a.to.as_str());
            if place_set.contains(f) && transition_set.contains(t) {
                arcs.push(Arc::In(f, t, a.w));
            } else if transition_set.contains(f) && place_set.contains(t) {
                arcs.push(Arc::Out(f, t, a.w));
            } else {
                return Err(PetriError::BadArc { from: a.from.clone(), to: a.to.clone() });
            }
        }
        PetriNet::from_parts(&places, &transitions, &arcs)
    }
}

/// Per-transition outcome of the invisibility classification.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransitionVisibility {
    pub transition: String,
    pub invisible: bool,
    /// One verdict per proposition, in proposition order.
    pub verdicts: Vec<(String, Verdict<crate::props::InvisibilityWitness>)>,
}

/// The LSTS induced by a net, with the marking of every state.
#[derive(Clone, Debug)]
pub struct NetLsts {
    pub lsts: Lsts,
    pub markings: Vec<Marking>,
    pub index: HashMap<Marking, StateId>,
    pub visibility: Vec<TransitionVisibility>,
    pub warnings: Vec<String>,
}

impl NetLsts {
    pub fn state_of(&self, m: &Marking) -> Option<StateId> {
        self.index.get(m).copied()
    }

    /// State id of a marking given as a digit string such as `101100`.
    pub fn state_of_digits(&self, digits: &str) -> Option<StateId> {
        Marking::from_digits(digits).and_then(|m| self.state_of(&m))
    }
}

/// Builds the reachable LSTS: states are reachable markings (BFS order with
/// lexicographic tie-break), actions are all transitions, labels are the
/// propositions true at each marking, and the invisible set holds the
/// transitions that every proposition's classifier accepts under `flags`.
pub fn build_lsts(
    net: &PetriNet,
    props: &[AtomicProp],
    flags: InvisibilityFlags,
    state_cap: usize,
    box_bound: u32,
) -> Result<NetLsts, PetriError> {
    let markings = net.reachable_markings(state_cap)?;
    let index: HashMap<Marking, StateId> = markings.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();

    let mut b = LstsBuilder::new(props.iter().map(|q| q.id.clone()))?;
    for m in &markings {
        let mut l = LabelSet::EMPTY;
        for (i, q) in props.iter().enumerate() {
            if q.eval(m)? {
                l.insert(i);
            }
        }
        b.add_state(m.to_string(), l);
    }

    let classifier = Classifier::with_reachable(net, box_bound, markings.clone());
    let mut visibility = Vec::new();
    let mut warnings = Vec::new();
    for t in 0..net.num_transitions() {
        let mut verdicts = Vec::new();
        let mut invisible = true;
        for q in props {
            let v = classifier.classify(q, t, flags)?;
            match &v {
                Verdict::Fails { .. } => invisible = false,
                Verdict::BoundedHolds { .. } => warnings.push(format!(
                    "transition {} is {}-invisible for {} only within the checked box and the reachable markings",
                    net.transition_name(t),
                    flags,
                    q.id
                )),
                Verdict::Holds => {}
            }
            verdicts.push((q.id.clone(), v));
        }
        b.add_action(net.transition_name(t), invisible);
        visibility.push(TransitionVisibility {
            transition: net.transition_name(t).to_string(),
            invisible,
            verdicts,
        });
    }

    for (s, m) in markings.iter().enumerate() {
        for t in 0..net.num_transitions() {
            if net.is_enabled(m, t) {
                let target = index[&net.fire_unchecked(m, t)];
                b.add_transition(s, t, target);
            }
        }
    }
    let lsts = b.build(0)?;
    Ok(NetLsts { lsts, markings, index, visibility, warnings })
}

/// Named tokens of a marking, for reports.
pub fn marking_map(net: &PetriNet, m: &Marking) -> BTreeMap<String, u32> {
    (0..net.num_places())
        .filter(|&p| m.tokens(p) > 0)
        .map(|p| (net.place_name(p).to_string(), m.tokens(p)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Arc::{In, Out};

    fn chain() -> PetriNet {
        PetriNet::from_parts(
            &[("a", 1), ("b", 0), ("c", 0)],
            &["t1", "t2"],
            &[In("a", "t1", 1), Out("t1", "b", 1), In("b", "t2", 1), Out("t2", "c", 1)],
        )
        .unwrap()
    }

    #[test]
    fn firing_and_delta() {
        let net = chain();
        let m = net.initial().clone();
        assert_eq!(net.enabled(&m), [0].into_iter().collect());
        let m1 = net.fire(&m, 0).unwrap();
        assert_eq!(m1.to_string(), "010");
        assert_eq!(m.add_delta(&net.delta(0)), Some(m1.clone()));
        assert!(matches!(net.fire(&m, 1), Err(PetriError::NotEnabled { .. })));
    }

    #[test]
    fn sequential_net_lsts() {
        let net = chain();
        let nl = build_lsts(&net, &[], InvisibilityFlags::default(), 100, 6).unwrap();
        assert_eq!(nl.lsts.num_states(), 3);
        assert_eq!(nl.lsts.transitions().len(), 2);
        assert!(nl.lsts.is_deterministic());
        assert_eq!(nl.state_of_digits("001"), Some(2));
    }

    #[test]
    fn unbounded_net_hits_the_cap() {
        let net = PetriNet::from_parts(&[("p", 0)], &["gen"], &[Out("gen", "p", 1)]).unwrap();
        assert!(matches!(net.reachable_markings(50), Err(PetriError::StateCapExceeded(50))));
    }

    #[test]
    fn json_round_trip() {
        let net = chain();
        let back = PetriNet::from_json_str(&net.to_json_string()).unwrap();
        assert_eq!(net, back);
        let bad = r#"{"places":[{"id":"p"}],"transitions":["t"],"arcs":[{"from":"p","to":"p"}]}"#;
        assert!(matches!(PetriNet::from_json_str(bad), Err(PetriError::BadArc { .. })));
        let dup = r#"{"places":[{"id":"x"}],"transitions":["x"],"arcs":[]}"#;
        assert!(matches!(PetriNet::from_json_str(dup), Err(PetriError::DuplicateName(_))));
    }

    #[test]
    fn display_of_large_counts() {
        assert_eq!(Marking::new(vec![1, 12]).to_string(), "(1,12)");
        assert_eq!(Marking::from_digits("0120"), Some(Marking::new(vec![0, 1, 2, 0])));
    }
}
