//! Reduction functions, stubborn-set conditions as executable checks, the
//! reduced LSTS, and a ⇝-closure stubborn-set computation for Petri nets.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph;
use crate::lsts::{ActionId, ActionSet, Lsts, LstsError, Path, StateId, Transition};
use crate::petri::{build_lsts, Marking, NetLsts, PetriError, PetriNet, TransitionId};
use crate::props::{AtomicProp, InvisibilityFlags};
use crate::system::TransitionSystem;
use crate::verdict::{Bound, Verdict};

/// Largest number of states visited when computing the closure of
/// `r(s)`-avoiding paths.
pub const CLOSURE_CAP: usize = 100_000;

/// Largest number of configurations visited by one commutation check.
pub const COMMUTATION_CAP: usize = 200_000;

#[derive(Debug, Error)]
pub enum StubbornError {
    #[error("the reduction function is undefined at state {0}")]
    UndefinedAt(StateId),
    #[error("unknown default `{0}` (expected all, enabled or empty)")]
    UnknownDefault(String),
    #[error("unknown state `{0}` in reduction function")]
    UnknownState(String),
    #[error("unknown action `{0}` in reduction function")]
    UnknownAction(String),
    #[error("more than {0} states reachable outside the set; the check needs a finite closure")]
    ClosureCapExceeded(usize),
    #[error("more than {0} path configurations; lower the bound")]
    ConfigurationCapExceeded(usize),
    #[error("unknown condition `{0}`")]
    UnknownCondition(String),
    #[error("unknown mode `{0}` (expected deadlock, ltl-weak or ltl-strong)")]
    UnknownMode(String),
    #[error("more than {0} reachable markings")]
    StateCapExceeded(usize),
    #[error("not a sub-LSTS of the full one: {0}")]
    NotASubgraph(String),
    #[error(transparent)]
    Lsts(#[from] LstsError),
    #[error(transparent)]
    Petri(#[from] PetriError),
    #[error("invalid reduction function document: {0}")]
    Json(#[from] serde_json::Error),
}

// ---------------------------------------------------------------------------
// Reduction functions

/// What `r(s)` is for states without an explicit entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DefaultSet {
    All,
    Enabled,
    Empty,
}

impl FromStr for DefaultSet {
    type Err = StubbornError;
    fn from_str(s: &str) -> Result<Self, StubbornError> {
        match s {
            "all" => Ok(DefaultSet::All),
            "enabled" => Ok(DefaultSet::Enabled),
            "empty" => Ok(DefaultSet::Empty),
            other => Err(StubbornError::UnknownDefault(other.to_string())),
        }
    }
}

impl fmt::Display for DefaultSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DefaultSet::All => "all",
            DefaultSet::Enabled => "enabled",
            DefaultSet::Empty => "empty",
        })
    }
}

/// A table `state → r(state)` with an optional fallback.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionFunction {
    pub default: Option<DefaultSet>,
    pub entries: BTreeMap<StateId, ActionSet>,
}

impl ReductionFunction {
    pub fn with_default(default: DefaultSet) -> Self {
        Self { default: Some(default), entries: BTreeMap::new() }
    }

    /// Only explicit entries; every other state is undefined.
    pub fn table(entries: BTreeMap<StateId, ActionSet>) -> Self {
        Self { default: None, entries }
    }

    pub fn set(&mut self, s: StateId, actions: ActionSet) -> &mut Self {
        self.entries.insert(s, actions);
        self
    }

    /// `r(s)`; actions are resolved against `lsts` for the default sets.
    pub fn get(&self, lsts: &Lsts, s: StateId) -> Result<ActionSet, StubbornError> {
        if let Some(r) = self.entries.get(&s) {
            return Ok(r.clone());
        }
        match self.default {
            Some(DefaultSet::All) => Ok(ActionSet::full(lsts.num_actions())),
            Some(DefaultSet::Enabled) => Ok(lsts.enabled_actions(s)?),
            Some(DefaultSet::Empty) => Ok(ActionSet::new()),
            None => Err(StubbornError::UndefinedAt(s)),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = ReductionDoc {
            default: self.default.map(|d| d.to_string()),
            entries: self
                .entries
                .iter()
                .map(|(&s, r)| EntryDoc { state: Ref::Id(s), actions: r.iter().map(Ref::Id).collect() })
                .collect(),
        };
        serde_json::to_value(doc).expect("reduction function serializes")
    }

    /// Parses `{"default": "all", "entries": [{"state": 0, "actions": [1, 4]}]}`.
    /// States and actions may be given by id or by name.
    pub fn from_json_str(text: &str, lsts: &Lsts) -> Result<Self, StubbornError> {
        let doc: ReductionDoc = serde_json::from_str(text)?;
        let default = doc.default.as_deref().map(str::parse).transpose()?;
        let mut entries = BTreeMap::new();
        for e in doc.entries {
            let s = match e.state {
                Ref::Id(i) if i < lsts.num_states() => i,
                Ref::Name(n) => lsts.state_by_name(&n).ok_or(StubbornError::UnknownState(n))?,
                Ref::Id(i) => return Err(StubbornError::UnknownState(i.to_string())),
            };
            let mut set = ActionSet::new();
            for a in e.actions {
                set.insert(match a {
                    Ref::Id(i) if i < lsts.num_actions() => i,
                    Ref::Name(n) => lsts.action_by_name(&n).ok_or(StubbornError::UnknownAction(n))?,
                    Ref::Id(i) => return Err(StubbornError::UnknownAction(i.to_string())),
                });
            }
            entries.insert(s, set);
        }
        Ok(Self { default, entries })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Ref {
    Id(usize),
    Name(String),
}

#[derive(Serialize, Deserialize)]
struct EntryDoc {
    state: Ref,
    actions: Vec<Ref>,
}

#[derive(Serialize, Deserialize)]
struct ReductionDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    default: Option<String>,
    #[serde(default)]
    entries: Vec<EntryDoc>,
}

// ---------------------------------------------------------------------------
// Reduced LSTS

/// The reduced LSTS of a reduction function.
///
/// `lsts` keeps the parent's state ids, labels and actions, with only the
/// transitions of `→_r`; states outside `S_r` are isolated in it.
#[derive(Clone, Debug)]
pub struct ReducedLsts {
    pub lsts: Lsts,
    pub members: Vec<bool>,
    /// `r(s)` for every member state.
    pub r: BTreeMap<StateId, ActionSet>,
}

impl ReducedLsts {
    pub fn contains(&self, s: StateId) -> bool {
        self.members[s]
    }

    pub fn num_states(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn num_transitions(&self) -> usize {
        self.lsts.transitions().len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.members.len()).filter(|&s| self.members[s])
    }

    pub fn reduction_function(&self) -> ReductionFunction {
        ReductionFunction::table(self.r.clone())
    }

    /// Reads an LSTS produced elsewhere as a reduction of `full`: same
    /// states, initial state and actions, transitions a subset of `full`'s.
    /// `S_r` is its reachable part and `r(s)` the actions leaving `s` in it.
    pub fn from_subgraph(full: &Lsts, sub: Lsts) -> Result<ReducedLsts, StubbornError> {
        if sub.num_states() != full.num_states() || sub.num_actions() != full.num_actions() || sub.initial() != full.initial() {
            return Err(StubbornError::NotASubgraph(format!(
                "{} states / {} actions / initial {} against {} / {} / {}",
                sub.num_states(),
                sub.num_actions(),
                sub.initial(),
                full.num_states(),
                full.num_actions(),
                full.initial()
            )));
        }
        if let Some(t) = sub.transitions().iter().find(|t| !full.has_transition(t.source, t.action, t.target)) {
            return Err(StubbornError::NotASubgraph(format!("extra transition {} -{}-> {}", t.source, t.action, t.target)));
        }
        let mut members = vec![false; sub.num_states()];
        let mut r = BTreeMap::new();
        for s in sub.reachable_states() {
            members[s] = true;
            r.insert(s, sub.successors(s).iter().map(|&(a, _)| a).collect());
        }
        let lsts = full.with_transitions(sub.transitions().iter().copied())?;
        Ok(ReducedLsts { lsts, members, r })
    }
}

/// The least `S_r ∋ ŝ` and `→_r` closed under taking the transitions of
/// `r(s)` from each member `s`, in breadth-first order.
pub fn reduce(lsts: &Lsts, r: &ReductionFunction) -> Result<ReducedLsts, StubbornError> {
    let mut members = vec![false; lsts.num_states()];
    let mut table = BTreeMap::new();
    let mut transitions = Vec::new();
    let mut queue = VecDeque::from([lsts.initial()]);
    members[lsts.initial()] = true;
    while let Some(s) = queue.pop_front() {
        let rs = r.get(lsts, s)?;
        for &(a, t) in lsts.successors(s) {
            if rs.contains(a) {
                transitions.push(Transition { source: s, action: a, target: t });
                if !members[t] {
                    members[t] = true;
                    queue.push_back(t);
                }
            }
        }
        table.insert(s, rs);
    }
    Ok(ReducedLsts { lsts: lsts.with_transitions(transitions)?, members, r: table })
}

// ---------------------------------------------------------------------------
// Conditions

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    D0,
    D1,
    D1p,
    D2,
    D2w,
    V,
    I,
    C4,
}

impl Condition {
    pub const ALL: [Condition; 8] = [
        Condition::D0,
        Condition::D1,
        Condition::D1p,
        Condition::D2,
        Condition::D2w,
        Condition::V,
        Condition::I,
        Condition::C4,
    ];

    /// Parses a comma-separated list such as `D1p,D2w,V,I`.
    pub fn parse_list(s: &str) -> Result<Vec<Condition>, StubbornError> {
        s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(str::parse).collect()
    }
}

impl FromStr for Condition {
    type Err = StubbornError;
    fn from_str(s: &str) -> Result<Self, StubbornError> {
        Ok(match s {
            "D0" => Condition::D0,
            "D1" => Condition::D1,
            "D1p" | "D1'" => Condition::D1p,
            "D2" => Condition::D2,
            "D2w" => Condition::D2w,
            "V" => Condition::V,
            "I" => Condition::I,
            "C4" => Condition::C4,
            other => return Err(StubbornError::UnknownCondition(other.to_string())),
        })
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::D0 => "D0",
            Condition::D1 => "D1",
            Condition::D1p => "D1p",
            Condition::D2 => "D2",
            Condition::D2w => "D2w",
            Condition::V => "V",
            Condition::I => "I",
            Condition::C4 => "C4",
        })
    }
}

/// Why a condition fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConditionWitness<S = StateId> {
    /// Some action is enabled, none of them in the set.
    NoEnabledInSet,
    /// `s →path→ s_n →action→ target` with the path outside the set, but no
    /// matching `s →action→ · →path→ target` (for D1p: none that also takes
    /// `action` at every intermediate state).
    Commutation { action: ActionId, path: Path<S>, target: S },
    /// An enabled action of the set that the path disables.
    NotKey { action: ActionId, path: Path<S> },
    NoKeyAction,
    MissingVisible { enabled_visible: ActionSet, missing: ActionSet },
    NoInvisibleKey,
    MultipleEnabled { enabled: ActionSet },
    /// A cycle of the reduced LSTS none of whose states has `action` in its set.
    Cycle { action: ActionId, cycle: Path<S> },
}

/// Default path bound for the commutation checks: `2·|S|`, capped at 12.
pub fn default_bound(num_states: usize) -> usize {
    (2 * num_states).clamp(1, 12)
}

/// The states reachable from `s` by actions outside `rset`, in breadth-first
/// order, with the parent step of each.
struct Avoiding<S> {
    order: Vec<S>,
    parent: HashMap<S, (S, ActionId)>,
}

impl<S: Clone + Eq + std::hash::Hash> Avoiding<S> {
    fn path_to(&self, start: &S, target: &S) -> Path<S> {
        let mut steps = Vec::new();
        let mut cur = target.clone();
        while let Some((p, a)) = self.parent.get(&cur) {
            steps.push((*a, cur.clone()));
            cur = p.clone();
        }
        steps.reverse();
        Path { start: start.clone(), steps }
    }
}

fn avoiding_closure<T: TransitionSystem>(
    sys: &T,
    s: &T::State,
    rset: &ActionSet,
    cap: usize,
) -> Result<Avoiding<T::State>, StubbornError> {
    let mut seen: HashSet<T::State> = HashSet::from([s.clone()]);
    let mut order = vec![s.clone()];
    let mut parent = HashMap::new();
    let mut i = 0;
    while i < order.len() {
        let u = order[i].clone();
        i += 1;
        for (a, v) in sys.successors(&u) {
            if !rset.contains(a) && seen.insert(v.clone()) {
                if order.len() >= cap {
                    return Err(StubbornError::ClosureCapExceeded(cap));
                }
                parent.insert(v.clone(), (u.clone(), a));
                order.push(v);
            }
        }
    }
    Ok(Avoiding { order, parent })
}

/// Actions of `rset` enabled at every state reachable from `s` by actions
/// outside `rset`.
pub fn key_actions<T: TransitionSystem>(sys: &T, s: &T::State, rset: &ActionSet) -> Result<ActionSet, StubbornError> {
    key_actions_capped(sys, s, rset, CLOSURE_CAP)
}

pub fn key_actions_capped<T: TransitionSystem>(
    sys: &T,
    s: &T::State,
    rset: &ActionSet,
    cap: usize,
) -> Result<ActionSet, StubbornError> {
    let closure = avoiding_closure(sys, s, rset, cap)?;
    let mut keys = sys.enabled(s).intersection(rset);
    for u in closure.order.iter().skip(1) {
        if keys.is_empty() {
            break;
        }
        keys = keys.intersection(&sys.enabled(u));
    }
    Ok(keys)
}

/// The key action a proof would pick: invisible before visible, then the
/// smallest id.
pub fn preferred_key_action<T: TransitionSystem>(
    sys: &T,
    s: &T::State,
    rset: &ActionSet,
) -> Result<Option<ActionId>, StubbornError> {
    let keys = key_actions(sys, s, rset)?;
    let invisible = keys.iter().find(|&a| sys.is_invisible(a));
    Ok(invisible.or_else(|| keys.first()))
}

/// Decides one condition for `r(s) = rset`. D1 and D1p examine every
/// `rset`-avoiding path of at most `bound` steps and report
/// `BoundedHolds(PathLength)` when none fails; the rest are exact.
pub fn check_condition<T: TransitionSystem>(
    sys: &T,
    s: &T::State,
    rset: &ActionSet,
    which: Condition,
    bound: usize,
) -> Result<Verdict<ConditionWitness<T::State>>, StubbornError> {
    let enabled = sys.enabled(s);
    let in_set = enabled.intersection(rset);
    let verdict = match which {
        Condition::D0 => {
            if !enabled.is_empty() && in_set.is_empty() {
                Verdict::fails(ConditionWitness::NoEnabledInSet)
            } else {
                Verdict::Holds
            }
        }
        Condition::D1 => check_commutation(sys, s, rset, bound, false)?,
        Condition::D1p => check_commutation(sys, s, rset, bound, true)?,
        Condition::D2 => {
            let closure = avoiding_closure(sys, s, rset, CLOSURE_CAP)?;
            let mut verdict = Verdict::Holds;
            'actions: for a in in_set.iter() {
                for u in &closure.order {
                    if !sys.enabled(u).contains(a) {
                        verdict = Verdict::fails(ConditionWitness::NotKey { action: a, path: closure.path_to(s, u) });
                        break 'actions;
                    }
                }
            }
            verdict
        }
        Condition::D2w => {
            if !enabled.is_empty() && key_actions(sys, s, rset)?.is_empty() {
                Verdict::fails(ConditionWitness::NoKeyAction)
            } else {
                Verdict::Holds
            }
        }
        Condition::V => {
            let visible = sys.visible_actions();
            let enabled_visible = in_set.intersection(&visible);
            if !enabled_visible.is_empty() && !visible.is_subset(rset) {
                Verdict::fails(ConditionWitness::MissingVisible { enabled_visible, missing: visible.difference(rset) })
            } else {
                Verdict::Holds
            }
        }
        Condition::I => {
            let invisible_enabled = enabled.iter().any(|a| sys.is_invisible(a));
            if invisible_enabled && !key_actions(sys, s, rset)?.iter().any(|a| sys.is_invisible(a)) {
                Verdict::fails(ConditionWitness::NoInvisibleKey)
            } else {
                Verdict::Holds
            }
        }
        Condition::C4 => {
            if ActionSet::full(sys.num_actions()).is_subset(rset) || in_set.len() == 1 {
                Verdict::Holds
            } else {
                Verdict::fails(ConditionWitness::MultipleEnabled { enabled: in_set })
            }
        }
    };
    Ok(verdict)
}

/// Checks several conditions, one verdict each.
pub fn check_conditions<T: TransitionSystem>(
    sys: &T,
    s: &T::State,
    rset: &ActionSet,
    which: &[Condition],
    bound: usize,
) -> Result<Vec<(Condition, Verdict<ConditionWitness<T::State>>)>, StubbornError> {
    which.iter().map(|&c| Ok((c, check_condition(sys, s, rset, c, bound)?))).collect()
}

/// Breadth-first search over configurations `(s_n, Y^a)` where `s_n` ends an
/// `rset`-avoiding path `a_1…a_n` from `s` and `Y^a` holds the states
/// reachable by `a a_1…a_n` (for D1p with `a` invisible, only those whose
/// `a`-ancestors match each `s_i`). The condition fails at the first `s_n`
/// with an `a`-successor missing from `Y^a`.
fn check_commutation<T: TransitionSystem>(
    sys: &T,
    s: &T::State,
    rset: &ActionSet,
    bound: usize,
    along_path: bool,
) -> Result<Verdict<ConditionWitness<T::State>>, StubbornError> {
    type Config<S> = (S, Vec<BTreeSet<S>>);
    let actions: Vec<ActionId> = rset.iter().filter(|&a| a < sys.num_actions()).collect();
    let succ_by = |u: &T::State, a: ActionId| -> BTreeSet<T::State> {
        sys.successors(u).into_iter().filter(|(b, _)| *b == a).map(|(_, v)| v).collect()
    };

    let start: Config<T::State> = (s.clone(), actions.iter().map(|&a| succ_by(s, a)).collect());
    let mut nodes: Vec<(Config<T::State>, Option<(usize, ActionId)>, usize)> = vec![(start.clone(), None, 0)];
    let mut seen: HashSet<Config<T::State>> = HashSet::from([start]);
    let mut next = 0;
    while next < nodes.len() {
        let id = next;
        next += 1;
        let ((sn, ys), _, depth) = nodes[id].clone();
        let succ = sys.successors(&sn);
        for (i, &a) in actions.iter().enumerate() {
            for (_, target) in succ.iter().filter(|(b, _)| *b == a) {
                if !ys[i].contains(target) {
                    let path = rebuild_path(&nodes, id, s);
                    return Ok(Verdict::fails(ConditionWitness::Commutation { action: a, path, target: target.clone() }));
                }
            }
        }
        if depth == bound {
            continue;
        }
        for (b, sn2) in &succ {
            if rset.contains(*b) {
                continue;
            }
            let ys2: Vec<BTreeSet<T::State>> = actions
                .iter()
                .enumerate()
                .map(|(i, &a)| {
                    let here: BTreeSet<T::State> = if along_path && sys.is_invisible(a) {
                        let vertical = succ_by(&sn, a);
                        ys[i].intersection(&vertical).cloned().collect()
                    } else {
                        ys[i].clone()
                    };
                    here.iter().flat_map(|y| succ_by(y, *b)).collect()
                })
                .collect();
            let cfg = (sn2.clone(), ys2);
            if seen.insert(cfg.clone()) {
                if nodes.len() >= COMMUTATION_CAP {
                    return Err(StubbornError::ConfigurationCapExceeded(COMMUTATION_CAP));
                }
                nodes.push((cfg, Some((id, *b)), depth + 1));
            }
        }
    }
    Ok(Verdict::bounded(Bound::PathLength { max_len: bound }))
}

#[allow(clippy::type_complexity)]
fn rebuild_path<S: Clone>(nodes: &[((S, Vec<BTreeSet<S>>), Option<(usize, ActionId)>, usize)], mut id: usize, start: &S) -> Path<S> {
    let mut steps = Vec::new();
    while let Some((parent, b)) = nodes[id].1 {
        steps.push((b, nodes[id].0 .0.clone()));
        id = parent;
    }
    steps.reverse();
    Path { start: start.clone(), steps }
}

/// Condition L on a reduced LSTS: for every visible action `a`, no cycle
/// of `→_r` avoids the states whose set contains `a`.
pub fn check_l(reduced: &ReducedLsts) -> Verdict<ConditionWitness> {
    let lsts = &reduced.lsts;
    for a in lsts.visible_actions().iter() {
        let keep = |s: StateId| reduced.members[s] && !reduced.r.get(&s).is_some_and(|r| r.contains(a));
        let adj: Vec<Vec<(ActionId, StateId)>> = (0..lsts.num_states())
            .map(|s| {
                if keep(s) {
                    lsts.successors(s).iter().copied().filter(|&(_, t)| keep(t)).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        if let Some((start, steps)) = graph::find_cycle(&adj) {
            return Verdict::fails(ConditionWitness::Cycle { action: a, cycle: Path { start, steps } });
        }
    }
    Verdict::Holds
}

// ---------------------------------------------------------------------------
// Stubborn sets for Petri nets

/// Which preservation goal the computed sets serve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PorMode {
    /// D1 and D2w.
    Deadlock,
    /// D1, D2w, V and I.
    LtlWeak,
    /// D1, D2, V and I.
    LtlStrong,
}

impl PorMode {
    fn is_ltl(self) -> bool {
        !matches!(self, PorMode::Deadlock)
    }

    /// Conditions every explored state must pass in this mode.
    pub fn conditions(self) -> Vec<Condition> {
        match self {
            PorMode::Deadlock => vec![Condition::D1p, Condition::D2w],
            PorMode::LtlWeak => vec![Condition::D1p, Condition::D2w, Condition::V, Condition::I],
            PorMode::LtlStrong => vec![Condition::D1p, Condition::D2, Condition::V, Condition::I],
        }
    }
}

impl FromStr for PorMode {
    type Err = StubbornError;
    fn from_str(s: &str) -> Result<Self, StubbornError> {
        match s {
            "deadlock" => Ok(PorMode::Deadlock),
            "ltl-weak" | "ltl_weak" => Ok(PorMode::LtlWeak),
            "ltl-strong" | "ltl_strong" => Ok(PorMode::LtlStrong),
            other => Err(StubbornError::UnknownMode(other.to_string())),
        }
    }
}

impl fmt::Display for PorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PorMode::Deadlock => "deadlock",
            PorMode::LtlWeak => "ltl-weak",
            PorMode::LtlStrong => "ltl-strong",
        })
    }
}

/// The ⇝ relation of one marking. An enabled transition has two edge sets:
/// the ones it needs as a key action and the ones it needs otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadstoGraph {
    pub enabled: ActionSet,
    pub as_key: Vec<ActionSet>,
    pub as_member: Vec<ActionSet>,
}

impl LeadstoGraph {
    pub fn new(net: &PetriNet, m: &Marking) -> Self {
        let nt = net.num_transitions();
        let np = net.num_places();
        let enabled = net.enabled(m);
        let lowers = |t: TransitionId, p: usize| net.pre(t, p) > net.post(t, p);
        let increasers = |p: usize| -> ActionSet { (0..nt).filter(|&u| net.post(u, p) > net.pre(u, p)).collect() };
        // transitions that may leave fewer than W(p,t) tokens on p
        let disablers = |t: TransitionId, p: usize| -> ActionSet {
            (0..nt)
                .filter(|&u| u != t && lowers(u, p) && net.post(u, p) < net.pre(t, p))
                .collect()
        };

        let mut as_key = Vec::with_capacity(nt);
        let mut as_member = Vec::with_capacity(nt);
        for t in 0..nt {
            if !enabled.contains(t) {
                let scapegoat = (0..np).find(|&p| m.tokens(p) < net.pre(t, p)).expect("disabled transition lacks tokens");
                let mut e = increasers(scapegoat);
                e.remove(t);
                as_key.push(e.clone());
                as_member.push(e);
                continue;
            }
            let mut key = ActionSet::new();
            let mut member = ActionSet::new();
            for p in net.input_places(t) {
                key.extend(disablers(t, p).iter());
            }
            for p in 0..np {
                if lowers(t, p) {
                    key.extend((0..nt).filter(|&u| u != t && net.pre(u, p) > net.post(t, p)));
                    member.extend((0..nt).filter(|&u| u != t && net.pre(u, p) > 0));
                }
            }
            for p in net.input_places(t) {
                let dis = disablers(t, p);
                if dis.is_empty() {
                    continue;
                }
                let mut inc = increasers(p);
                inc.remove(t);
                member.extend(if inc.len() <= dis.len() { inc } else { dis }.iter());
            }
            as_key.push(key);
            as_member.push(member);
        }
        Self { enabled, as_key, as_member }
    }

    /// Least set containing `seed` closed under ⇝, where the seed (and in
    /// `LtlStrong` mode every enabled member) follows its key edges. In LTL
    /// modes the set also absorbs all visible transitions as soon as it has
    /// an enabled visible one.
    pub fn closure(&self, seed: TransitionId, visible: &ActionSet, mode: PorMode) -> ActionSet {
        let mut set = ActionSet::new();
        let mut work = vec![seed];
        let mut absorbed_visible = false;
        while let Some(t) = work.pop() {
            if !set.insert(t) {
                continue;
            }
            let key = t == seed || (mode == PorMode::LtlStrong && self.enabled.contains(t));
            let edges = if key { &self.as_key[t] } else { &self.as_member[t] };
            work.extend(edges.iter().filter(|&u| !set.contains(u)));
            if mode.is_ltl() && !absorbed_visible && self.enabled.contains(t) && visible.contains(t) {
                absorbed_visible = true;
                work.extend(visible.iter().filter(|&u| !set.contains(u)));
            }
        }
        set
    }
}

/// The ⇝-closure seeded at `seed` in marking `m`.
pub fn leadsto_closure(net: &PetriNet, m: &Marking, seed: TransitionId, visible: &ActionSet, mode: PorMode) -> ActionSet {
    LeadstoGraph::new(net, m).closure(seed, visible, mode)
}

/// A stubborn set for `m`: the seed closure with the fewest enabled
/// transitions (ties to the smallest seed). Seeds are the enabled
/// transitions, restricted to invisible ones in LTL modes when any is
/// enabled. Empty at deadlocks.
pub fn compute_stubborn_pn(net: &PetriNet, m: &Marking, visible: &ActionSet, mode: PorMode) -> ActionSet {
    let g = LeadstoGraph::new(net, m);
    let mut seeds: Vec<TransitionId> = g.enabled.iter().collect();
    if mode.is_ltl() && seeds.iter().any(|&t| !visible.contains(t)) {
        seeds.retain(|&t| !visible.contains(t));
    }
    let mut best: Option<(usize, ActionSet)> = None;
    for seed in seeds {
        let set = g.closure(seed, visible, mode);
        let size = set.intersection(&g.enabled).len();
        if best.as_ref().is_none_or(|(n, _)| size < *n) {
            best = Some((size, set));
        }
    }
    best.map(|(_, s)| s).unwrap_or_default()
}

/// Result of an on-the-fly reduced exploration: the full LSTS (for
/// comparison) and the reduced one over the same state ids.
#[derive(Clone, Debug)]
pub struct PorRun {
    pub full: NetLsts,
    pub reduced: ReducedLsts,
}

/// Depth-first reduced exploration. Each state gets
/// [`compute_stubborn_pn`]; when an edge closes a cycle onto the DFS stack
/// and the source's set lacks some visible transition, the source's set is
/// widened to all enabled and all visible transitions.
pub fn explore_with_por(
    net: &PetriNet,
    props: &[AtomicProp],
    flags: InvisibilityFlags,
    mode: PorMode,
    state_cap: usize,
    box_bound: u32,
) -> Result<PorRun, StubbornError> {
    let full = build_lsts(net, props, flags, state_cap, box_bound).map_err(|e| match e {
        PetriError::StateCapExceeded(n) => StubbornError::StateCapExceeded(n),
        other => StubbornError::Petri(other),
    })?;
    let visible = full.lsts.visible_actions();
    let n = full.lsts.num_states();
    let mut r: Vec<Option<ActionSet>> = vec![None; n];
    let mut on_stack = vec![false; n];
    let mut done = vec![false; n];

    struct Frame {
        state: StateId,
        pending: Vec<StateId>,
        next: usize,
    }
    let successors_in = |s: StateId, rs: &ActionSet| -> Vec<StateId> {
        full.lsts.successors(s).iter().filter(|(a, _)| rs.contains(*a)).map(|&(_, t)| t).collect()
    };

    let root = full.lsts.initial();
    let root_r = compute_stubborn_pn(net, &full.markings[root], &visible, mode);
    let mut stack = vec![Frame { state: root, pending: successors_in(root, &root_r), next: 0 }];
    r[root] = Some(root_r);
    on_stack[root] = true;
    while let Some(frame) = stack.last_mut() {
        if frame.next == frame.pending.len() {
            on_stack[frame.state] = false;
            done[frame.state] = true;
            stack.pop();
            continue;
        }
        let s = frame.state;
        let t = frame.pending[frame.next];
        frame.next += 1;
        if on_stack[t] {
            let rs = r[s].as_ref().expect("stack states have sets");
            if !visible.is_subset(rs) {
                let widened = rs.union(&full.lsts.enabled_actions(s)?).union(&visible);
                let old = successors_in(s, rs);
                let extra: Vec<StateId> = successors_in(s, &widened).into_iter().filter(|v| !old.contains(v)).collect();
                frame.pending.extend(extra);
                r[s] = Some(widened);
            }
        } else if !done[t] {
            let rt = compute_stubborn_pn(net, &full.markings[t], &visible, mode);
            let pending = successors_in(t, &rt);
            r[t] = Some(rt);
            on_stack[t] = true;
            stack.push(Frame { state: t, pending, next: 0 });
        }
    }

    let table: BTreeMap<StateId, ActionSet> = r.into_iter().enumerate().filter_map(|(s, rs)| rs.map(|x| (s, x))).collect();
    let reduced = reduce(&full.lsts, &ReductionFunction::table(table))?;
    Ok(PorRun { full, reduced })
}
