//! Brute-force reference implementations used to cross-check the library.
//! They follow the definitions directly and are only meant for small inputs.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use stublab::models::{random_pn_case, GenParams};
use stublab::{ActionId, ActionSet, AtomicProp, Lsts, PetriNet, StateId};

/// Actions enabled in `s`.
pub fn enabled(l: &Lsts, s: StateId) -> ActionSet {
    l.successors(s).iter().map(|&(a, _)| a).collect()
}

/// States reachable from `s` using only actions outside `rset`, `s` included.
pub fn avoiding_reach(l: &Lsts, s: StateId, rset: &ActionSet) -> BTreeSet<StateId> {
    let mut seen = BTreeSet::from([s]);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &(a, v) in l.successors(u) {
            if !rset.contains(a) && seen.insert(v) {
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Actions of `rset` enabled in every state reachable by avoiding `rset`.
pub fn keys(l: &Lsts, s: StateId, rset: &ActionSet) -> ActionSet {
    let reach = avoiding_reach(l, s, rset);
    rset.iter().filter(|&a| reach.iter().all(|&u| l.successors_by(u, a).next().is_some())).collect()
}

pub fn d0(l: &Lsts, s: StateId, rset: &ActionSet) -> bool {
    let en = enabled(l, s);
    en.is_empty() || !en.intersection(rset).is_empty()
}

pub fn d2(l: &Lsts, s: StateId, rset: &ActionSet) -> bool {
    let k = keys(l, s, rset);
    enabled(l, s).intersection(rset).iter().all(|a| k.contains(a))
}

pub fn d2w(l: &Lsts, s: StateId, rset: &ActionSet) -> bool {
    enabled(l, s).is_empty() || !keys(l, s, rset).is_empty()
}

pub fn v(l: &Lsts, s: StateId, rset: &ActionSet) -> bool {
    let vis = l.visible_actions();
    enabled(l, s).intersection(rset).intersection(&vis).is_empty() || vis.is_subset(rset)
}

pub fn i(l: &Lsts, s: StateId, rset: &ActionSet) -> bool {
    let inv_enabled = enabled(l, s).iter().any(|a| l.is_invisible(a));
    !inv_enabled || keys(l, s, rset).iter().any(|a| l.is_invisible(a))
}

pub fn c4(l: &Lsts, s: StateId, rset: &ActionSet) -> bool {
    ActionSet::full(l.num_actions()).is_subset(rset) || enabled(l, s).intersection(rset).len() == 1
}

/// D1 (or D1p when `primed`) over every `rset`-avoiding path of at most
/// `bound` steps, by explicit path enumeration.
pub fn d1(l: &Lsts, s: StateId, rset: &ActionSet, bound: usize, primed: bool) -> bool {
    let mut stack: Vec<(Vec<StateId>, Vec<ActionId>)> = vec![(vec![s], Vec::new())];
    while let Some((states, word)) = stack.pop() {
        let last = *states.last().unwrap();
        for &(a, target) in l.successors(last) {
            if rset.contains(a) && !commutes(l, &states, &word, a, target, primed) {
                return false;
            }
        }
        if word.len() < bound {
            for &(b, next) in l.successors(last) {
                if !rset.contains(b) {
                    let mut st = states.clone();
                    st.push(next);
                    let mut w = word.clone();
                    w.push(b);
                    stack.push((st, w));
                }
            }
        }
    }
    true
}

/// Is there `s -a-> s'_0 -b1-> s'_1 ... -bn-> target`, with `s_i -a-> s'_i`
/// at every intermediate index when `primed` and `a` is invisible?
fn commutes(l: &Lsts, states: &[StateId], word: &[ActionId], a: ActionId, target: StateId, primed: bool) -> bool {
    let n = word.len();
    let vertical = primed && l.is_invisible(a);
    let mut layer: BTreeSet<StateId> = l.successors_by(states[0], a).collect();
    for (idx, &b) in word.iter().enumerate() {
        let mut next = BTreeSet::new();
        for &y in &layer {
            next.extend(l.successors_by(y, b));
        }
        let i = idx + 1;
        if vertical && i < n {
            let allowed: BTreeSet<StateId> = l.successors_by(states[i], a).collect();
            next = next.intersection(&allowed).copied().collect();
        }
        layer = next;
    }
    layer.contains(&target)
}

/// Collapsed label sequences of all initial paths, up to `k` blocks.
pub fn nostut_prefixes(l: &Lsts, k: usize) -> BTreeSet<Vec<u64>> {
    let start = (l.initial(), vec![l.labels(l.initial()).bits()]);
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut out = BTreeSet::new();
    while let Some((s, word)) = queue.pop_front() {
        out.insert(word.clone());
        for &(_, t) in l.successors(s) {
            let lab = l.labels(t).bits();
            let mut w = word.clone();
            if *w.last().unwrap() != lab {
                if w.len() == k {
                    continue;
                }
                w.push(lab);
            }
            if seen.insert((t, w.clone())) {
                queue.push_back((t, w));
            }
        }
    }
    out
}

/// Collapsed label sequences (up to `k` blocks) of initial paths ending in
/// a deadlock.
pub fn deadlocking_nostuts(l: &Lsts, k: usize) -> BTreeSet<Vec<u64>> {
    let mut out = BTreeSet::new();
    let start = (l.initial(), vec![l.labels(l.initial()).bits()]);
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some((s, word)) = queue.pop_front() {
        if l.is_deadlock(s) {
            out.insert(word.clone());
        }
        for &(_, t) in l.successors(s) {
            let lab = l.labels(t).bits();
            let mut w = word.clone();
            if *w.last().unwrap() != lab {
                if w.len() == k {
                    continue;
                }
                w.push(lab);
            }
            if seen.insert((t, w.clone())) {
                queue.push_back((t, w));
            }
        }
    }
    out
}

/// Visible-action words of all initial paths, up to length `k`.
pub fn visible_prefixes(l: &Lsts, k: usize) -> BTreeSet<Vec<ActionId>> {
    let start = (l.initial(), Vec::new());
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut out = BTreeSet::new();
    while let Some((s, word)) = queue.pop_front() {
        out.insert(word.clone());
        for &(a, t) in l.successors(s) {
            let mut w = word.clone();
            if !l.is_invisible(a) {
                if w.len() == k {
                    continue;
                }
                w.push(a);
            }
            if seen.insert((t, w.clone())) {
                queue.push_back((t, w));
            }
        }
    }
    out
}

/// States reachable from the initial state.
pub fn reachable(l: &Lsts) -> BTreeSet<StateId> {
    let mut seen = BTreeSet::from([l.initial()]);
    let mut queue = VecDeque::from([l.initial()]);
    while let Some(u) = queue.pop_front() {
        for &(_, v) in l.successors(u) {
            if seen.insert(v) {
                queue.push_back(v);
            }
        }
    }
    seen
}

pub fn reachable_deadlocks(l: &Lsts) -> BTreeSet<StateId> {
    reachable(l).into_iter().filter(|&s| l.is_deadlock(s)).collect()
}

pub fn reachable_labels(l: &Lsts) -> BTreeSet<u64> {
    reachable(l).into_iter().map(|s| l.labels(s).bits()).collect()
}

/// The states reached from `from` by the action word, over every
/// nondeterministic branch; empty when some step is missing.
pub fn replay(l: &Lsts, from: StateId, word: &[ActionId]) -> BTreeSet<StateId> {
    let mut layer = BTreeSet::from([from]);
    for &a in word {
        layer = layer.iter().flat_map(|&s| l.successors_by(s, a)).collect();
    }
    layer
}

/// The random bounded nets used by the corpus-wide checks.
pub fn corpus(n: u64) -> Vec<(u64, PetriNet, Vec<AtomicProp>)> {
    (0..n)
        .map(|seed| {
            let p = GenParams { places: 10, transitions: 8, props: 2, token_bound: 3, ..GenParams::with_seed(seed) };
            let (net, props) = random_pn_case(&p);
            (seed, net, props)
        })
        .collect()
}

/// Size and token bound of a corpus net.
pub fn within_corpus_limits(net: &PetriNet, cap: usize) -> bool {
    net.num_places() <= 10
        && net.num_transitions() <= 8
        && net.reachable_markings(cap).map(|ms| ms.iter().all(|m| m.max_tokens() <= 3)).unwrap_or(false)
}
