//! Brute-force checks of the preservation properties: complete-path
//! enumeration, trace membership by product search, and verdicts comparing
//! a full LSTS with a reduced one.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph;
use crate::lsts::{ActionId, ActionSet, LabelSet, Lasso, Lsts, Path, Run, StateId};
use crate::stubborn::ReducedLsts;
use crate::trace::{NoStutterTrace, TraceKind, VisKind, VisWord};
use crate::verdict::{Bound, Verdict};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("enumeration exceeded {0} nodes; raise --count or lower --repeat")]
    CountExceeded(usize),
}

/// Enumeration bounds. Paths may use each transition at most `repeat`
/// times; at most `count` search nodes and stem-cycle combinations are
/// created.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub repeat: usize,
    pub count: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { repeat: 2, count: 100_000 }
    }
}

impl Limits {
    pub fn bound(&self) -> Bound {
        Bound::Enumeration { repeat: self.repeat, count: self.count }
    }

    fn word_cap(&self, lsts: &Lsts) -> usize {
        self.repeat * lsts.transitions().len() + 1
    }
}

/// A complete initial path with its no-stutter trace and visible word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompleteWitness {
    pub run: Run,
    pub nostut: NoStutterTrace,
    pub vis: VisWord,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    FullToReduced,
    ReducedToFull,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleWitness {
    /// A complete path of one side whose trace has no match on the other.
    Unmatched { direction: Direction, witness: CompleteWitness },
    /// A state of the reduced LSTS that is a deadlock on exactly one side.
    DeadlockMismatch { state: StateId, deadlock_in_full: bool },
    /// A deadlocking path of the full LSTS from a reduced state with no
    /// permutation leading to the same deadlock in the reduced LSTS.
    LostDeadlock { path: Path },
    /// A reachable labelling present on one side only.
    MissingLabelling { direction: Direction, labels: LabelSet },
    /// Two weakly equivalent complete paths with different traces.
    Inconsistent { first: CompleteWitness, second: CompleteWitness },
}

/// Which parts of a path the enumeration tells apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceKey {
    /// No-stutter traces only.
    Stutter,
    /// Visible words only.
    Weak,
    /// Both.
    Joint,
}

#[derive(Clone)]
struct Node {
    state: StateId,
    labels: Vec<LabelSet>,
    vis: Vec<ActionId>,
    parent: Option<(usize, ActionId)>,
}

type NodeKey = (StateId, Vec<LabelSet>, Vec<ActionId>);

fn node_key(key: TraceKey, n: &Node) -> NodeKey {
    match key {
        TraceKey::Stutter => (n.state, n.labels.clone(), Vec::new()),
        TraceKey::Weak => (n.state, Vec::new(), n.vis.clone()),
        TraceKey::Joint => (n.state, n.labels.clone(), n.vis.clone()),
    }
}

/// Breadth-first search over `(state, trace so far)` nodes from `start`.
/// `stop_at` ends a branch on arrival (used for cycles back to their
/// start); such arrivals are reported separately.
struct WordSearch {
    nodes: Vec<Node>,
    /// Arrivals at the stop state: (node index of the last step's source, action).
    returns: Vec<(usize, ActionId)>,
}

fn word_search(
    lsts: &Lsts,
    start: StateId,
    key: TraceKey,
    cap: usize,
    stop_at: Option<StateId>,
    budget: &mut usize,
) -> Result<WordSearch, OracleError> {
    let root = Node { state: start, labels: vec![lsts.labels(start)], vis: Vec::new(), parent: None };
    let mut seen: HashSet<NodeKey> = HashSet::from([node_key(key, &root)]);
    let mut nodes = vec![root];
    let mut returns = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        for &(a, t) in lsts.successors(nodes[i].state) {
            if stop_at == Some(t) {
                returns.push((i, a));
                continue;
            }
            let n = &nodes[i];
            let mut labels = n.labels.clone();
            let l = lsts.labels(t);
            if labels.last() != Some(&l) {
                labels.push(l);
            }
            let mut vis = n.vis.clone();
            if !lsts.is_invisible(a) {
                vis.push(a);
            }
            if labels.len() > cap || vis.len() >= cap {
                continue;
            }
            let child = Node { state: t, labels, vis, parent: Some((i, a)) };
            if seen.insert(node_key(key, &child)) {
                if *budget == 0 {
                    return Err(OracleError::CountExceeded(nodes.len()));
                }
                *budget -= 1;
                nodes.push(child);
            }
        }
        i += 1;
    }
    Ok(WordSearch { nodes, returns })
}

fn node_path(nodes: &[Node], mut i: usize) -> Path {
    let mut steps = Vec::new();
    while let Some((p, a)) = nodes[i].parent {
        steps.push((a, nodes[i].state));
        i = p;
    }
    steps.reverse();
    Path { start: nodes[i].state, steps }
}

/// One cycle from a state back to itself, with its trace pieces.
struct CycleWord {
    labels: Vec<LabelSet>,
    vis: Vec<ActionId>,
    path: Path,
}

/// Complete initial witnesses, one representative per distinct trace key,
/// in increasing order of `(nostut, vis)`.
pub fn enumerate_witnesses(lsts: &Lsts, key: TraceKey, limits: Limits) -> Result<Vec<CompleteWitness>, OracleError> {
    let cap = limits.word_cap(lsts);
    let mut budget = limits.count;
    let stems = word_search(lsts, lsts.initial(), key, cap, None, &mut budget)?;
    let on_cycle = states_on_cycles(lsts);

    let mut found: BTreeMap<(NoStutterTrace, VisWord), CompleteWitness> = BTreeMap::new();
    let mut seen_keys: HashSet<(Option<NoStutterTrace>, Option<VisWord>)> = HashSet::new();
    let mut add = |w: CompleteWitness, found: &mut BTreeMap<_, _>| {
        let k = match key {
            TraceKey::Stutter => (Some(w.nostut.clone()), None),
            TraceKey::Weak => (None, Some(w.vis.clone())),
            TraceKey::Joint => (Some(w.nostut.clone()), Some(w.vis.clone())),
        };
        if seen_keys.insert(k) {
            found.insert((w.nostut.clone(), w.vis.clone()), w);
        }
    };

    let mut cycles: HashMap<StateId, Vec<CycleWord>> = HashMap::new();
    for (i, n) in stems.nodes.iter().enumerate() {
        if lsts.is_deadlock(n.state) {
            let w = CompleteWitness {
                run: Run::Finite(node_path(&stems.nodes, i)),
                nostut: NoStutterTrace { word: n.labels.clone(), kind: TraceKind::Finite },
                vis: VisWord::finite(n.vis.clone()),
            };
            add(w, &mut found);
            continue;
        }
        if !on_cycle[n.state] {
            continue;
        }
        if !cycles.contains_key(&n.state) {
            let ws = word_search(lsts, n.state, key, cap, Some(n.state), &mut budget)?;
            let mut words = Vec::new();
            let mut distinct = HashSet::new();
            for &(j, a) in &ws.returns {
                let mut path = node_path(&ws.nodes, j);
                path.push(a, n.state);
                let mut vis = ws.nodes[j].vis.clone();
                if !lsts.is_invisible(a) {
                    vis.push(a);
                }
                let labels = ws.nodes[j].labels.clone();
                if distinct.insert((labels.clone(), vis.clone())) {
                    words.push(CycleWord { labels, vis, path });
                }
            }
            cycles.insert(n.state, words);
        }
        let stem = node_path(&stems.nodes, i);
        let prefix = &n.labels[..n.labels.len() - 1];
        for c in &cycles[&n.state] {
            if budget == 0 {
                return Err(OracleError::CountExceeded(limits.count));
            }
            budget -= 1;
            let w = CompleteWitness {
                run: Run::Lasso(Lasso { stem: stem.clone(), cycle: c.path.clone() }),
                nostut: NoStutterTrace::lasso(prefix, &c.labels),
                vis: VisWord::lasso(&n.vis, &c.vis),
            };
            add(w, &mut found);
        }
    }
    Ok(found.into_values().collect())
}

/// All complete initial witnesses distinguished by trace and visible word.
pub fn enumerate_complete_witnesses(lsts: &Lsts, limits: Limits) -> Result<Vec<CompleteWitness>, OracleError> {
    enumerate_witnesses(lsts, TraceKey::Joint, limits)
}

fn states_on_cycles(lsts: &Lsts) -> Vec<bool> {
    let adj: Vec<Vec<(ActionId, StateId)>> = (0..lsts.num_states()).map(|s| lsts.successors(s).to_vec()).collect();
    let comp = graph::scc_ids(&adj);
    let mut size: HashMap<usize, usize> = HashMap::new();
    for &c in &comp {
        *size.entry(c).or_insert(0) += 1;
    }
    (0..lsts.num_states())
        .map(|s| size[&comp[s]] > 1 || lsts.successors(s).iter().any(|&(_, t)| t == s))
        .collect()
}

// ---------------------------------------------------------------------------
// Membership

/// What a complete path must look like.
#[derive(Clone, Copy, Debug)]
pub enum MatchTarget<'a> {
    /// A path with exactly this no-stutter trace.
    Stutter(&'a NoStutterTrace),
    /// A path whose actions outside `invisible` spell this word.
    Weak(&'a VisWord, &'a ActionSet),
}

/// Letters of the target, how positions advance, and which end counts.
struct Automaton<T> {
    letters: Vec<T>,
    /// Index the position returns to after the last letter (periodic only).
    wrap_to: Option<usize>,
    accept: Accept,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Accept {
    /// Deadlock at the final position.
    Finite,
    /// A cycle at the final position.
    Stay,
    /// A cycle through a wrap step.
    Periodic,
}

fn stutter_automaton(t: &NoStutterTrace) -> Automaton<LabelSet> {
    match &t.kind {
        TraceKind::Finite => Automaton { letters: t.word.clone(), wrap_to: None, accept: Accept::Finite },
        TraceKind::InfiniteEventuallyConstant => Automaton { letters: t.word.clone(), wrap_to: None, accept: Accept::Stay },
        TraceKind::InfinitePeriodic(v) => {
            let mut letters = t.word.clone();
            letters.extend_from_slice(v);
            Automaton { letters, wrap_to: Some(t.word.len()), accept: Accept::Periodic }
        }
    }
}

fn weak_automaton(w: &VisWord) -> Automaton<ActionId> {
    match &w.kind {
        VisKind::Finite => Automaton { letters: w.word.clone(), wrap_to: None, accept: Accept::Finite },
        VisKind::InfiniteEventuallyEmpty => Automaton { letters: w.word.clone(), wrap_to: None, accept: Accept::Stay },
        VisKind::InfinitePeriodic(v) => {
            let mut letters = w.word.clone();
            letters.extend_from_slice(v);
            Automaton { letters, wrap_to: Some(w.word.len()), accept: Accept::Periodic }
        }
    }
}

/// Product edge: action, target node, and whether it wraps the period.
type ProductAdj = Vec<Vec<((ActionId, bool), usize)>>;

/// A complete initial path of `lsts` matching `target`, if one exists.
/// The search is exact: it explores the product of `lsts` with the
/// target's positions.
pub fn find_matching_complete_path(lsts: &Lsts, target: MatchTarget<'_>) -> Option<Run> {
    // product node: (state, position); position semantics differ per mode
    let mut index: HashMap<(StateId, usize), usize> = HashMap::new();
    let mut nodes: Vec<(StateId, usize)> = Vec::new();
    let mut adj: ProductAdj = Vec::new();
    let (accept, final_pos) = match target {
        MatchTarget::Stutter(t) => {
            let aut = stutter_automaton(t);
            if aut.letters.first() != Some(&lsts.labels(lsts.initial())) {
                return None;
            }
            let last = aut.letters.len() - 1;
            let step = |pos: usize, t: StateId| -> Option<(usize, bool)> {
                let l = lsts.labels(t);
                if l == aut.letters[pos] {
                    return Some((pos, false));
                }
                let (next, wrap) = if pos == last {
                    (aut.wrap_to?, true)
                } else {
                    (pos + 1, false)
                };
                (l == aut.letters[next]).then_some((next, wrap))
            };
            explore_product(lsts, (lsts.initial(), 0), &mut index, &mut nodes, &mut adj, |_s, pos, _a, t| step(pos, t));
            (aut.accept, last)
        }
        MatchTarget::Weak(w, invisible) => {
            let aut = weak_automaton(w);
            let len = aut.letters.len();
            let step = |pos: usize, a: ActionId| -> Option<(usize, bool)> {
                if invisible.contains(a) {
                    return Some((pos, false));
                }
                if pos < len && aut.letters[pos] == a {
                    if pos + 1 == len {
                        if let Some(w) = aut.wrap_to {
                            return Some((w, true));
                        }
                    }
                    return Some((pos + 1, false));
                }
                None
            };
            explore_product(lsts, (lsts.initial(), 0), &mut index, &mut nodes, &mut adj, |_s, pos, a, _t| step(pos, a));
            (aut.accept, len)
        }
    };

    let comp = graph::scc_ids(&adj);
    let mut comp_size: HashMap<usize, usize> = HashMap::new();
    for &c in &comp {
        *comp_size.entry(c).or_insert(0) += 1;
    }
    let cyclic = |v: usize| comp_size[&comp[v]] > 1 || adj[v].iter().any(|&(_, w)| w == v);

    let to_path = |from: usize, steps: &[((ActionId, bool), usize)]| -> Path {
        Path { start: nodes[from].0, steps: steps.iter().map(|&((a, _), w)| (a, nodes[w].0)).collect() }
    };
    match accept {
        Accept::Finite => {
            let steps = graph::shortest_path(&adj, 0, |v| nodes[v].1 == final_pos && lsts.is_deadlock(nodes[v].0))?;
            Some(Run::Finite(to_path(0, &steps)))
        }
        Accept::Stay => {
            let steps = graph::shortest_path(&adj, 0, |v| nodes[v].1 == final_pos && cyclic(v))?;
            let v = steps.last().map_or(0, |&(_, w)| w);
            let cycle = cycle_through(&adj, &comp, v, None);
            Some(Run::Lasso(Lasso { stem: to_path(0, &steps), cycle: to_path(v, &cycle) }))
        }
        Accept::Periodic => {
            let mut wraps: HashSet<(usize, usize)> = HashSet::new();
            for (v, es) in adj.iter().enumerate() {
                for &((_, wrap), w) in es {
                    if wrap && comp[w] == comp[v] {
                        wraps.insert((v, w));
                    }
                }
            }
            let steps = graph::shortest_path(&adj, 0, |v| wraps.iter().any(|&(_, w)| w == v))?;
            let y = steps.last().map_or(0, |&(_, w)| w);
            let x = wraps.iter().filter(|&&(_, w)| w == y).map(|&(x, _)| x).min().expect("wrap target");
            let cycle = cycle_through(&adj, &comp, y, Some(x));
            Some(Run::Lasso(Lasso { stem: to_path(0, &steps), cycle: to_path(y, &cycle) }))
        }
    }
}

fn explore_product(
    lsts: &Lsts,
    start: (StateId, usize),
    index: &mut HashMap<(StateId, usize), usize>,
    nodes: &mut Vec<(StateId, usize)>,
    adj: &mut ProductAdj,
    step: impl Fn(StateId, usize, ActionId, StateId) -> Option<(usize, bool)>,
) {
    index.insert(start, 0);
    nodes.push(start);
    adj.push(Vec::new());
    let mut i = 0;
    while i < nodes.len() {
        let (s, pos) = nodes[i];
        for &(a, t) in lsts.successors(s) {
            if let Some((pos2, wrap)) = step(s, pos, a, t) {
                let j = *index.entry((t, pos2)).or_insert_with(|| {
                    nodes.push((t, pos2));
                    adj.push(Vec::new());
                    nodes.len() - 1
                });
                adj[i].push(((a, wrap), j));
            }
        }
        i += 1;
    }
}

/// Shortest cycle from `v` back to `v` inside its component; with
/// `via = Some(x)`, the cycle goes to `x` and then takes the wrap edge
/// from `x` to `v`.
fn cycle_through(adj: &ProductAdj, comp: &[usize], v: usize, via: Option<usize>) -> Vec<((ActionId, bool), usize)> {
    let inside: ProductAdj = adj
        .iter()
        .enumerate()
        .map(|(u, es)| es.iter().copied().filter(|&(_, w)| comp[w] == comp[u]).collect())
        .collect();
    match via {
        Some(x) => {
            let mut steps = graph::shortest_path(&inside, v, |u| u == x).expect("same component");
            let wrap = inside[x].iter().copied().find(|&((_, w), t)| w && t == v).expect("wrap edge");
            steps.push(wrap);
            steps
        }
        None => {
            let mut best: Option<Vec<((ActionId, bool), usize)>> = None;
            for &(e, w) in &inside[v] {
                let mut steps = vec![(e, w)];
                if w != v {
                    match graph::shortest_path(&inside, w, |u| u == v) {
                        Some(rest) => steps.extend(rest),
                        None => continue,
                    }
                }
                if best.as_ref().is_none_or(|b| steps.len() < b.len()) {
                    best = Some(steps);
                }
            }
            best.expect("node lies on a cycle")
        }
    }
}

// ---------------------------------------------------------------------------
// Equivalence verdicts

fn compare_traces(full: &Lsts, reduced: &Lsts, key: TraceKey, limits: Limits) -> Result<Verdict<OracleWitness>, OracleError> {
    let invisible = full.invisible().clone();
    for (direction, from, to) in [
        (Direction::FullToReduced, full, reduced),
        (Direction::ReducedToFull, reduced, full),
    ] {
        for w in enumerate_witnesses(from, key, limits)? {
            let target = match key {
                TraceKey::Weak => MatchTarget::Weak(&w.vis, &invisible),
                _ => MatchTarget::Stutter(&w.nostut),
            };
            if find_matching_complete_path(to, target).is_none() {
                return Ok(Verdict::fails(OracleWitness::Unmatched { direction, witness: w }));
            }
        }
    }
    Ok(Verdict::bounded(limits.bound()))
}

/// Every enumerated complete initial path of either LSTS has a path with
/// the same no-stutter trace in the other.
pub fn check_stutter_trace_equivalence(
    full: &Lsts,
    reduced: &ReducedLsts,
    limits: Limits,
) -> Result<Verdict<OracleWitness>, OracleError> {
    compare_traces(full, &reduced.lsts, TraceKey::Stutter, limits)
}

/// As [`check_stutter_trace_equivalence`] for visible words; `invisible`
/// replaces the LSTS's own invisible set.
pub fn check_weak_trace_equivalence(
    full: &Lsts,
    reduced: &ReducedLsts,
    invisible: &ActionSet,
    limits: Limits,
) -> Result<Verdict<OracleWitness>, OracleError> {
    let f = full.with_invisible(invisible.clone()).expect("invisible actions come from the same LSTS");
    let r = reduced.lsts.with_invisible(invisible.clone()).expect("invisible actions come from the same LSTS");
    compare_traces(&f, &r, TraceKey::Weak, limits)
}

/// A deadlocking path of the full LSTS and the reordering of its actions
/// found in the reduced LSTS.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationWitness {
    pub full: Path,
    pub reduced: Path,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeadlockReport {
    pub verdict: Verdict<OracleWitness>,
    pub permutations: Vec<PermutationWitness>,
}

/// Deadlocks agree on `S_r`, and every deadlocking path of the full LSTS
/// from a state of `S_r` (each action used at most `repeat` times per
/// transition carrying it) has a permutation in the reduced LSTS ending in
/// the same deadlock.
pub fn check_deadlock_preservation(full: &Lsts, reduced: &ReducedLsts, limits: Limits) -> Result<DeadlockReport, OracleError> {
    for s in reduced.states() {
        let in_full = full.is_deadlock(s);
        if in_full != reduced.lsts.is_deadlock(s) {
            return Ok(DeadlockReport {
                verdict: Verdict::fails(OracleWitness::DeadlockMismatch { state: s, deadlock_in_full: in_full }),
                permutations: Vec::new(),
            });
        }
    }
    let k = full.num_actions();
    let mut per_action = vec![0usize; k];
    for t in full.transitions() {
        per_action[t.action] += 1;
    }
    let caps: Vec<u16> = per_action.iter().map(|&n| (n * limits.repeat).min(u16::MAX as usize) as u16).collect();
    let mut budget = limits.count;
    let mut permutations = Vec::new();
    let mut failed: Failed = HashSet::new();
    let leads_to_deadlock = can_reach_deadlock(full);
    for s in reduced.states() {
        if !leads_to_deadlock[s] {
            continue;
        }
        // (state, Parikh vector) search in the full LSTS
        let mut index: HashMap<(StateId, Vec<u16>), usize> = HashMap::new();
        let mut nodes: Vec<(StateId, Vec<u16>, Option<(usize, ActionId)>)> = vec![(s, vec![0; k], None)];
        index.insert((s, vec![0; k]), 0);
        let mut i = 0;
        while i < nodes.len() {
            let (u, counts) = (nodes[i].0, nodes[i].1.clone());
            if full.is_deadlock(u) {
                let mut steps = Vec::new();
                let mut j = i;
                while let Some((p, a)) = nodes[j].2 {
                    steps.push((a, nodes[j].0));
                    j = p;
                }
                steps.reverse();
                let path = Path { start: s, steps };
                match permuted_path(&reduced.lsts, s, u, counts.clone(), &mut failed) {
                    Some(rp) => permutations.push(PermutationWitness { full: path, reduced: rp }),
                    None => {
                        return Ok(DeadlockReport {
                            verdict: Verdict::fails(OracleWitness::LostDeadlock { path }),
                            permutations,
                        })
                    }
                }
            }
            for &(a, t) in full.successors(u) {
                if counts[a] >= caps[a] || !leads_to_deadlock[t] {
                    continue;
                }
                let mut c2 = counts.clone();
                c2[a] += 1;
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry((t, c2.clone())) {
                    if budget == 0 {
                        return Err(OracleError::CountExceeded(limits.count));
                    }
                    budget -= 1;
                    e.insert(nodes.len());
                    nodes.push((t, c2, Some((i, a))));
                }
            }
            i += 1;
        }
    }
    Ok(DeadlockReport { verdict: Verdict::bounded(limits.bound()), permutations })
}

/// Backward reachability from the deadlocks.
fn can_reach_deadlock(lsts: &Lsts) -> Vec<bool> {
    let n = lsts.num_states();
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for t in lsts.transitions() {
        preds[t.target].push(t.source);
    }
    let mut mark = vec![false; n];
    let mut stack: Vec<StateId> = (0..n).filter(|&s| lsts.is_deadlock(s)).collect();
    for &s in &stack {
        mark[s] = true;
    }
    while let Some(s) = stack.pop() {
        for &p in &preds[s] {
            if !mark[p] {
                mark[p] = true;
                stack.push(p);
            }
        }
    }
    mark
}

/// A path of `lsts` from `s` to `goal` using exactly the action multiset
/// `counts`; `failed` memoises hopeless `(goal, state, remaining)` triples.
fn permuted_path(lsts: &Lsts, s: StateId, goal: StateId, counts: Vec<u16>, failed: &mut Failed) -> Option<Path> {
    fn go(
        lsts: &Lsts,
        s: StateId,
        goal: StateId,
        remaining: &mut Vec<u16>,
        left: usize,
        failed: &mut Failed,
        steps: &mut Vec<(ActionId, StateId)>,
    ) -> bool {
        if left == 0 {
            return s == goal;
        }
        if failed.contains(&(goal, s, remaining.clone())) {
            return false;
        }
        for &(a, t) in lsts.successors(s) {
            if remaining[a] == 0 {
                continue;
            }
            remaining[a] -= 1;
            steps.push((a, t));
            if go(lsts, t, goal, remaining, left - 1, failed, steps) {
                return true;
            }
            steps.pop();
            remaining[a] += 1;
        }
        failed.insert((goal, s, remaining.clone()));
        false
    }
    let left = counts.iter().map(|&c| c as usize).sum();
    let mut remaining = counts;
    let mut steps = Vec::new();
    go(lsts, s, goal, &mut remaining, left, failed, &mut steps).then(|| Path { start: s, steps })
}

type Failed = HashSet<(StateId, StateId, Vec<u16>)>;

/// The sets of labellings of reachable states coincide.
pub fn check_reachable_labellings(full: &Lsts, reduced: &ReducedLsts) -> Verdict<OracleWitness> {
    let in_full: BTreeSet<u64> = full.reachable_states().into_iter().map(|s| full.labels(s).bits()).collect();
    let in_reduced: BTreeSet<u64> = reduced.lsts.reachable_states().into_iter().map(|s| reduced.lsts.labels(s).bits()).collect();
    if let Some(&l) = in_full.difference(&in_reduced).next() {
        return Verdict::fails(OracleWitness::MissingLabelling { direction: Direction::FullToReduced, labels: LabelSet::from_bits(l) });
    }
    if let Some(&l) = in_reduced.difference(&in_full).next() {
        return Verdict::fails(OracleWitness::MissingLabelling { direction: Direction::ReducedToFull, labels: LabelSet::from_bits(l) });
    }
    Verdict::Holds
}

/// Pairs of enumerated complete paths with equal visible words but
/// different no-stutter traces, one pair per visible word.
pub fn consistency_violations(
    lsts: &Lsts,
    invisible: &ActionSet,
    limits: Limits,
) -> Result<Vec<(CompleteWitness, CompleteWitness)>, OracleError> {
    let l = lsts.with_invisible(invisible.clone()).expect("invisible actions come from the same LSTS");
    let mut groups: BTreeMap<VisWord, Vec<CompleteWitness>> = BTreeMap::new();
    for w in enumerate_witnesses(&l, TraceKey::Joint, limits)? {
        groups.entry(w.vis.clone()).or_default().push(w);
    }
    let mut out = Vec::new();
    for (_, ws) in groups {
        for j in 1..ws.len() {
            if ws[j].nostut != ws[0].nostut {
                out.push((ws[0].clone(), ws[j].clone()));
            }
        }
    }
    Ok(out)
}

/// Weak equivalence implies stutter equivalence on the enumerated paths.
pub fn check_consistent_labelling(lsts: &Lsts, invisible: &ActionSet, limits: Limits) -> Result<Verdict<OracleWitness>, OracleError> {
    Ok(match consistency_violations(lsts, invisible, limits)?.into_iter().next() {
        Some((first, second)) => Verdict::fails(OracleWitness::Inconsistent { first, second }),
        None => Verdict::bounded(limits.bound()),
    })
}

/// An initial path visiting a `q`-state, then a state without `q`, then a
/// `q`-state again: the pattern forbidden by `□(q ⇒ □(q ∨ □¬q))`.
pub fn find_q_relapse(lsts: &Lsts, prop: usize) -> Option<Path> {
    let has = |s: StateId| lsts.labels(s).contains(prop);
    let stage_after = |stage: usize, s: StateId| match stage {
        0 if has(s) => 1,
        1 if !has(s) => 2,
        2 if has(s) => 3,
        st => st,
    };
    let n = lsts.num_states();
    let start = stage_after(0, lsts.initial());
    let adj: Vec<Vec<(ActionId, usize)>> = (0..n * 4)
        .map(|v| {
            let (s, stage) = (v / 4, v % 4);
            lsts.successors(s).iter().map(|&(a, t)| (a, t * 4 + stage_after(stage, t))).collect()
        })
        .collect();
    let steps = graph::shortest_path(&adj, lsts.initial() * 4 + start, |v| v % 4 == 3)?;
    Some(Path { start: lsts.initial(), steps: steps.into_iter().map(|(a, v)| (a, v / 4)).collect() })
}

pub fn detect_q_relapse(lsts: &Lsts, prop: usize) -> bool {
    find_q_relapse(lsts, prop).is_some()
}
