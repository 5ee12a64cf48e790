//! Labelled state transition systems.
//!
//! An [`Lsts`] is an explicit graph: dense state and action ids, a sorted
//! transition list, per-state label sets over a fixed proposition table, and
//! a declared set of invisible actions.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trace::{vis_projection, NoStutterTrace, VisWord};

pub type StateId = usize;
pub type ActionId = usize;

/// Maximum number of atomic propositions in one proposition table.
pub const MAX_PROPS: usize = 64;

#[derive(Debug, Error)]
pub enum LstsError {
    #[error("unknown state {0}")]
    UnknownState(StateId),
    #[error("unknown action {0}")]
    UnknownAction(ActionId),
    #[error("unknown proposition `{0}`")]
    UnknownProp(String),
    #[error("at most {MAX_PROPS} propositions are supported, got {0}")]
    TooManyProps(usize),
    #[error("{what} ids must be dense 0..n, found id {id} among {count}")]
    NonDenseIds { what: &'static str, id: usize, count: usize },
    #[error("malformed path: {0}")]
    MalformedPath(String),
    #[error("invalid LSTS document: {0}")]
    Json(#[from] serde_json::Error),
}

/// A set of propositions, as a bitset over the proposition table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LabelSet(u64);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    pub fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn single(prop: usize) -> Self {
        Self(1 << prop)
    }

    pub fn contains(self, prop: usize) -> bool {
        prop < MAX_PROPS && self.0 & (1 << prop) != 0
    }

    pub fn insert(&mut self, prop: usize) {
        self.0 |= 1 << prop;
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..MAX_PROPS).filter(move |&p| self.contains(p))
    }
}

/// A set of action ids, iterated in increasing order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActionSet(BTreeSet<ActionId>);

impl ActionSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// All actions `0..n`.
    pub fn full(n: usize) -> Self {
        (0..n).collect()
    }

    pub fn contains(&self, a: ActionId) -> bool {
        self.0.contains(&a)
    }

    pub fn insert(&mut self, a: ActionId) -> bool {
        self.0.insert(a)
    }

    pub fn remove(&mut self, a: ActionId) -> bool {
        self.0.remove(&a)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ActionId> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &ActionSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &ActionSet) -> ActionSet {
        Self(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &ActionSet) -> ActionSet {
        Self(self.0.intersection(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &ActionSet) -> ActionSet {
        Self(self.0.difference(&other.0).copied().collect())
    }

    pub fn first(&self) -> Option<ActionId> {
        self.0.first().copied()
    }
}

impl FromIterator<ActionId> for ActionSet {
    fn from_iter<I: IntoIterator<Item = ActionId>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl Extend<ActionId> for ActionSet {
    fn extend<I: IntoIterator<Item = ActionId>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Transition {
    pub source: StateId,
    pub action: ActionId,
    pub target: StateId,
}

/// A finite path: a start state and the `(action, target)` steps taken.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path<S = StateId> {
    pub start: S,
    pub steps: Vec<(ActionId, S)>,
}

impl<S: Clone> Path<S> {
    pub fn single(start: S) -> Self {
        Self { start, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> &S {
        self.steps.last().map(|(_, s)| s).unwrap_or(&self.start)
    }

    pub fn actions(&self) -> Vec<ActionId> {
        self.steps.iter().map(|(a, _)| *a).collect()
    }

    /// All visited states, start included.
    pub fn states(&self) -> Vec<S> {
        std::iter::once(self.start.clone())
            .chain(self.steps.iter().map(|(_, s)| s.clone()))
            .collect()
    }

    pub fn push(&mut self, action: ActionId, target: S) {
        self.steps.push((action, target));
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn concat(&self, other: &Path<S>) -> Path<S> {
        let mut p = self.clone();
        p.steps.extend(other.steps.iter().cloned());
        p
    }
}

/// The infinite path `stem · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lasso<S = StateId> {
    pub stem: Path<S>,
    pub cycle: Path<S>,
}

/// A complete-path candidate: finite, or an ultimately periodic lasso.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Run<S = StateId> {
    Finite(Path<S>),
    Lasso(Lasso<S>),
}

impl<S: Clone> Run<S> {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Run::Lasso(_))
    }
}

/// One violated type invariant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub transition: Transition,
    pub message: String,
}

/// An explicit labelled state transition system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lsts {
    props: Vec<String>,
    state_names: Vec<String>,
    labels: Vec<LabelSet>,
    action_names: Vec<String>,
    invisible: ActionSet,
    initial: StateId,
    transitions: Vec<Transition>,
    succ: Vec<Vec<(ActionId, StateId)>>,
}

/// Incremental construction of an [`Lsts`].
#[derive(Clone, Debug, Default)]
pub struct LstsBuilder {
    props: Vec<String>,
    state_names: Vec<String>,
    labels: Vec<LabelSet>,
    action_names: Vec<String>,
    invisible: ActionSet,
    transitions: Vec<Transition>,
}

impl LstsBuilder {
    pub fn new<S: Into<String>>(props: impl IntoIterator<Item = S>) -> Result<Self, LstsError> {
        let props: Vec<String> = props.into_iter().map(Into::into).collect();
        if props.len() > MAX_PROPS {
            return Err(LstsError::TooManyProps(props.len()));
        }
        Ok(Self { props, ..Self::default() })
    }

    /// Label set from proposition names.
    pub fn labels(&self, names: &[&str]) -> Result<LabelSet, LstsError> {
        let mut set = LabelSet::EMPTY;
        for n in names {
            let i = self
                .props
                .iter()
                .position(|p| p == n)
                .ok_or_else(|| LstsError::UnknownProp(n.to_string()))?;
            set.insert(i);
        }
        Ok(set)
    }

    pub fn add_state(&mut self, name: impl Into<String>, labels: LabelSet) -> StateId {
        self.state_names.push(name.into());
        self.labels.push(labels);
        self.state_names.len() - 1
    }

    pub fn add_action(&mut self, name: impl Into<String>, invisible: bool) -> ActionId {
        self.action_names.push(name.into());
        let id = self.action_names.len() - 1;
        if invisible {
            self.invisible.insert(id);
        }
        id
    }

    pub fn add_transition(&mut self, source: StateId, action: ActionId, target: StateId) {
        self.transitions.push(Transition { source, action, target });
    }

    pub fn build(self, initial: StateId) -> Result<Lsts, LstsError> {
        let n = self.state_names.len();
        let k = self.action_names.len();
        if initial >= n {
            return Err(LstsError::UnknownState(initial));
        }
        for t in &self.transitions {
            for s in [t.source, t.target] {
                if s >= n {
                    return Err(LstsError::UnknownState(s));
                }
            }
            if t.action >= k {
                return Err(LstsError::UnknownAction(t.action));
            }
        }
        if let Some(a) = self.invisible.iter().find(|&a| a >= k) {
            return Err(LstsError::UnknownAction(a));
        }
        let valid_bits = if self.props.len() == MAX_PROPS { u64::MAX } else { (1u64 << self.props.len()) - 1 };
        if let Some(l) = self.labels.iter().find(|l| l.bits() & !valid_bits != 0) {
            return Err(LstsError::UnknownProp(format!("bit set {:#x}", l.bits())));
        }
        let mut transitions = self.transitions;
        transitions.sort_by_key(|t| (t.source, t.action, t.target));
        transitions.dedup();
        let mut succ = vec![Vec::new(); n];
        for t in &transitions {
            succ[t.source].push((t.action, t.target));
        }
        Ok(Lsts {
            props: self.props,
            state_names: self.state_names,
            labels: self.labels,
            action_names: self.action_names,
            invisible: self.invisible,
            initial,
            transitions,
            succ,
        })
    }
}

impl Lsts {
    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_actions(&self) -> usize {
        self.action_names.len()
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn prop_index(&self, name: &str) -> Option<usize> {
        self.props.iter().position(|p| p == name)
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn state_name(&self, s: StateId) -> &str {
        &self.state_names[s]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_names.iter().position(|n| n == name)
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.action_names[a]
    }

    pub fn action_by_name(&self, name: &str) -> Option<ActionId> {
        self.action_names.iter().position(|n| n == name)
    }

    /// Action ids for the given names; unknown names are reported.
    pub fn action_set(&self, names: &[&str]) -> Result<ActionSet, LstsError> {
        names
            .iter()
            .map(|n| self.action_by_name(n).ok_or_else(|| LstsError::MalformedPath(format!("unknown action `{n}`"))))
            .collect()
    }

    pub fn labels(&self, s: StateId) -> LabelSet {
        self.labels[s]
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Outgoing `(action, target)` pairs, sorted.
    pub fn successors(&self, s: StateId) -> &[(ActionId, StateId)] {
        &self.succ[s]
    }

    pub fn successors_by(&self, s: StateId, a: ActionId) -> impl Iterator<Item = StateId> + '_ {
        self.succ[s].iter().filter(move |(b, _)| *b == a).map(|(_, t)| *t)
    }

    pub fn check_state(&self, s: StateId) -> Result<(), LstsError> {
        if s < self.num_states() {
            Ok(())
        } else {
            Err(LstsError::UnknownState(s))
        }
    }

    pub fn enabled_actions(&self, s: StateId) -> Result<ActionSet, LstsError> {
        self.check_state(s)?;
        Ok(self.succ[s].iter().map(|(a, _)| *a).collect())
    }

    pub fn is_deadlock(&self, s: StateId) -> bool {
        self.succ[s].is_empty()
    }

    pub fn invisible(&self) -> &ActionSet {
        &self.invisible
    }

    pub fn is_invisible(&self, a: ActionId) -> bool {
        self.invisible.contains(a)
    }

    pub fn visible_actions(&self) -> ActionSet {
        (0..self.num_actions()).filter(|a| !self.invisible.contains(*a)).collect()
    }

    /// The same system with a different declared invisible set.
    pub fn with_invisible(&self, invisible: ActionSet) -> Result<Lsts, LstsError> {
        if let Some(a) = invisible.iter().find(|&a| a >= self.num_actions()) {
            return Err(LstsError::UnknownAction(a));
        }
        let mut out = self.clone();
        out.invisible = invisible;
        Ok(out)
    }

    /// The same states and actions with a different transition set.
    pub fn with_transitions(&self, transitions: impl IntoIterator<Item = Transition>) -> Result<Lsts, LstsError> {
        let mut b = LstsBuilder {
            props: self.props.clone(),
            state_names: self.state_names.clone(),
            labels: self.labels.clone(),
            action_names: self.action_names.clone(),
            invisible: self.invisible.clone(),
            transitions: Vec::new(),
        };
        b.transitions.extend(transitions);
        b.build(self.initial)
    }

    /// The same system relabelled by `f`, over a new proposition table.
    pub fn relabelled(&self, props: Vec<String>, f: impl Fn(StateId) -> LabelSet) -> Result<Lsts, LstsError> {
        if props.len() > MAX_PROPS {
            return Err(LstsError::TooManyProps(props.len()));
        }
        let mut out = self.clone();
        out.props = props;
        out.labels = (0..self.num_states()).map(f).collect();
        Ok(out)
    }

    /// No state has two distinct successors under one action.
    pub fn is_deterministic(&self) -> bool {
        self.succ
            .iter()
            .all(|out| out.windows(2).all(|w| w[0].0 != w[1].0))
    }

    /// Invisible-set soundness: every transition of an invisible action
    /// keeps the labelling. Each violation names the offending transition.
    pub fn validate(&self) -> Vec<Violation> {
        self.transitions
            .iter()
            .filter(|t| self.invisible.contains(t.action) && self.labels[t.source] != self.labels[t.target])
            .map(|t| Violation {
                transition: *t,
                message: format!(
                    "invisible action {} changes labels {} -> {}",
                    self.action_names[t.action],
                    self.format_labels(self.labels[t.source]),
                    self.format_labels(self.labels[t.target])
                ),
            })
            .collect()
    }

    /// States reachable from the initial state, in BFS order.
    pub fn reachable_states(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.num_states()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for &(_, t) in &self.succ[s] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        order
    }

    pub fn has_transition(&self, s: StateId, a: ActionId, t: StateId) -> bool {
        s < self.num_states() && self.succ[s].binary_search(&(a, t)).is_ok()
    }

    /// Checks that the path follows transitions of this system.
    pub fn check_path(&self, p: &Path) -> Result<(), LstsError> {
        self.check_state(p.start)?;
        let mut cur = p.start;
        for &(a, t) in &p.steps {
            if !self.has_transition(cur, a, t) {
                return Err(LstsError::MalformedPath(format!("no transition {cur} -{a}-> {t}")));
            }
            cur = t;
        }
        Ok(())
    }

    pub fn check_run(&self, run: &Run) -> Result<(), LstsError> {
        match run {
            Run::Finite(p) => self.check_path(p),
            Run::Lasso(l) => {
                self.check_path(&l.stem)?;
                self.check_path(&l.cycle)?;
                if l.cycle.is_empty() {
                    return Err(LstsError::MalformedPath("empty cycle".into()));
                }
                if l.cycle.start != *l.stem.end() || *l.cycle.end() != l.cycle.start {
                    return Err(LstsError::MalformedPath("cycle does not close at the stem end".into()));
                }
                Ok(())
            }
        }
    }

    fn path_labels(&self, p: &Path) -> Vec<LabelSet> {
        p.states().into_iter().map(|s| self.labels[s]).collect()
    }

    /// The no-stutter trace of a run.
    pub fn nostut_trace(&self, run: &Run) -> Result<NoStutterTrace, LstsError> {
        self.check_run(run)?;
        Ok(match run {
            Run::Finite(p) => NoStutterTrace::finite(&self.path_labels(p)),
            Run::Lasso(l) => {
                let mut prefix = self.path_labels(&l.stem);
                prefix.pop();
                let mut cycle = self.path_labels(&l.cycle);
                cycle.pop();
                NoStutterTrace::lasso(&prefix, &cycle)
            }
        })
    }

    /// The projection of a run's actions onto those outside `proj`.
    pub fn vis_word(&self, run: &Run, proj: &ActionSet) -> Result<VisWord, LstsError> {
        self.check_run(run)?;
        Ok(match run {
            Run::Finite(p) => VisWord::finite(vis_projection(&p.actions(), proj)),
            Run::Lasso(l) => VisWord::lasso(
                &vis_projection(&l.stem.actions(), proj),
                &vis_projection(&l.cycle.actions(), proj),
            ),
        })
    }

    /// Both finite or both infinite, with equal visible projections.
    pub fn weak_equivalent(&self, r1: &Run, r2: &Run, proj: &ActionSet) -> Result<bool, LstsError> {
        Ok(self.vis_word(r1, proj)? == self.vis_word(r2, proj)?)
    }

    /// Both finite or both infinite, with equal no-stutter traces.
    pub fn stutter_equivalent(&self, r1: &Run, r2: &Run) -> Result<bool, LstsError> {
        Ok(self.nostut_trace(r1)? == self.nostut_trace(r2)?)
    }

    pub fn format_labels(&self, l: LabelSet) -> String {
        if l.is_empty() {
            return "∅".into();
        }
        let names: Vec<&str> = l.iter().map(|p| self.props.get(p).map(String::as_str).unwrap_or("?")).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn format_trace(&self, t: &NoStutterTrace) -> String {
        let mut s: String = t.word.iter().map(|l| self.format_labels(*l)).collect();
        if let crate::trace::TraceKind::InfinitePeriodic(v) = &t.kind {
            let period: String = v.iter().map(|l| self.format_labels(*l)).collect();
            s.push_str(&format!("({period})^ω"));
        }
        s
    }

    pub fn format_actions(&self, word: &[ActionId]) -> String {
        word.iter().map(|a| self.action_names[*a].as_str()).collect::<Vec<_>>().join(" ")
    }

    pub fn format_vis(&self, w: &VisWord) -> String {
        let mut s = self.format_actions(&w.word);
        if let crate::trace::VisKind::InfinitePeriodic(v) = &w.kind {
            if !s.is_empty() {
                s.push(' ');
            }
            s.push_str(&format!("({})^ω", self.format_actions(v)));
        }
        s
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(LstsDoc::from(self)).expect("LSTS document serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&LstsDoc::from(self)).expect("LSTS document serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Lsts, LstsError> {
        let doc: LstsDoc = serde_json::from_str(text)?;
        doc.into_lsts()
    }

    pub fn from_json_value(value: serde_json::Value) -> Result<Lsts, LstsError> {
        let doc: LstsDoc = serde_json::from_value(value)?;
        doc.into_lsts()
    }
}

impl fmt::Display for Lsts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LSTS with {} states, {} actions, {} transitions",
            self.num_states(),
            self.num_actions(),
            self.transitions.len()
        )
    }
}

#[derive(Serialize, Deserialize)]
struct StateDoc {
    id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default)]
    labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ActionDoc {
    id: usize,
    name: String,
    #[serde(default)]
    invisible: bool,
}

#[derive(Serialize, Deserialize)]
struct LstsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    props: Option<Vec<String>>,
    states: Vec<StateDoc>,
    actions: Vec<ActionDoc>,
    initial: usize,
    transitions: Vec<[usize; 3]>,
}

impl From<&Lsts> for LstsDoc {
    fn from(l: &Lsts) -> Self {
        LstsDoc {
            props: Some(l.props.clone()),
            states: (0..l.num_states())
                .map(|s| StateDoc {
                    id: s,
                    name: (l.state_names[s] != s.to_string()).then(|| l.state_names[s].clone()),
                    labels: l.labels[s].iter().map(|p| l.props[p].clone()).collect(),
                })
                .collect(),
            actions: (0..l.num_actions())
                .map(|a| ActionDoc {
                    id: a,
                    name: l.action_names[a].clone(),
                    invisible: l.invisible.contains(a),
                })
                .collect(),
            initial: l.initial,
            transitions: l.transitions.iter().map(|t| [t.source, t.action, t.target]).collect(),
        }
    }
}

fn dense_order<T>(items: Vec<T>, id: impl Fn(&T) -> usize, what: &'static str) -> Result<Vec<T>, LstsError> {
    let count = items.len();
    let mut slots: Vec<Option<T>> = (0..count).map(|_| None).collect();
    for item in items {
        let i = id(&item);
        if i >= count || slots[i].is_some() {
            return Err(LstsError::NonDenseIds { what, id: i, count });
        }
        slots[i] = Some(item);
    }
    Ok(slots.into_iter().map(|s| s.expect("every slot filled")).collect())
}

impl LstsDoc {
    fn into_lsts(self) -> Result<Lsts, LstsError> {
        let states = dense_order(self.states, |s| s.id, "state")?;
        let actions = dense_order(self.actions, |a| a.id, "action")?;
        let props = match self.props {
            Some(p) => p,
            None => states
                .iter()
                .flat_map(|s| s.labels.iter().cloned())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
        };
        let mut b = LstsBuilder::new(props)?;
        for s in &states {
            let names: Vec<&str> = s.labels.iter().map(String::as_str).collect();
            let labels = b.labels(&names)?;
            b.add_state(s.name.clone().unwrap_or_else(|| s.id.to_string()), labels);
        }
        for a in actions {
            b.add_action(a.name, a.invisible);
        }
        for [s, a, t] in self.transitions {
            b.add_transition(s, a, t);
        }
        b.build(self.initial)
    }
}
