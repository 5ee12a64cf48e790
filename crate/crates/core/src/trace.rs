//! Canonical trace objects: no-stutter label traces and visible-action words.
//!
//! Infinite traces are always ultimately periodic, written `u v^ω`. The
//! canonical form has the shortest possible `u` and a primitive `v`, so two
//! infinite words are equal exactly when their canonical forms are equal.

use serde::{Deserialize, Serialize};

use crate::lsts::{ActionId, ActionSet, LabelSet};

/// Shape of a no-stutter trace.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "period", rename_all = "snake_case")]
pub enum TraceKind {
    /// The trace of a finite path.
    Finite,
    /// An infinite path whose labels are eventually constant; the last letter
    /// of the word repeats forever.
    InfiniteEventuallyConstant,
    /// An infinite path whose trace is `word · period^ω`.
    InfinitePeriodic(Vec<LabelSet>),
}

/// The label sequence of a path with adjacent repetitions collapsed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NoStutterTrace {
    pub word: Vec<LabelSet>,
    #[serde(flatten)]
    pub kind: TraceKind,
}

/// Shape of a visible-action word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "period", rename_all = "snake_case")]
pub enum VisKind {
    Finite,
    /// Infinite path with finitely many visible actions.
    InfiniteEventuallyEmpty,
    InfinitePeriodic(Vec<ActionId>),
}

/// The projection of a path's actions onto the visible ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VisWord {
    pub word: Vec<ActionId>,
    #[serde(flatten)]
    pub kind: VisKind,
}

/// Removes adjacent duplicates.
pub fn collapse<T: PartialEq + Clone>(seq: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(seq.len());
    for x in seq {
        if out.last() != Some(x) {
            out.push(x.clone());
        }
    }
    out
}

/// The actions of `word` that are not in `proj`.
pub fn vis_projection(word: &[ActionId], proj: &ActionSet) -> Vec<ActionId> {
    word.iter().copied().filter(|a| !proj.contains(*a)).collect()
}

/// Shortest `r` with `v = r^k`.
pub fn primitive_root<T: PartialEq + Clone>(v: &[T]) -> Vec<T> {
    let n = v.len();
    for d in 1..=n {
        if n % d == 0 && (0..n).all(|i| v[i] == v[i % d]) {
            return v[..d].to_vec();
        }
    }
    v.to_vec()
}

/// Canonical `(u, v)` for the infinite word `u v^ω`: `v` primitive and `u`
/// as short as possible. `v` must be nonempty.
pub fn canonical_lasso<T: PartialEq + Clone>(u: &[T], v: &[T]) -> (Vec<T>, Vec<T>) {
    assert!(!v.is_empty(), "period must be nonempty");
    let mut u = u.to_vec();
    let mut v = primitive_root(v);
    while let Some(last) = u.last() {
        if v.last() == Some(last) {
            u.pop();
            v.rotate_right(1);
        } else {
            break;
        }
    }
    (u, v)
}

impl NoStutterTrace {
    /// Trace of a finite path with the given state labels.
    pub fn finite(labels: &[LabelSet]) -> Self {
        Self {
            word: collapse(labels),
            kind: TraceKind::Finite,
        }
    }

    /// Trace of the infinite label sequence `prefix · cycle^ω`.
    ///
    /// `prefix` holds the labels of the stem states before the cycle is
    /// entered, `cycle` the labels of the cycle states starting at the entry
    /// state (which is not repeated at the end).
    pub fn lasso(prefix: &[LabelSet], cycle: &[LabelSet]) -> Self {
        assert!(!cycle.is_empty(), "cycle must visit at least one state");
        let m = cycle.len();
        let Some(j) = (0..m).find(|&j| cycle[j] != cycle[(j + m - 1) % m]) else {
            let mut seq = prefix.to_vec();
            seq.push(cycle[0]);
            return Self {
                word: collapse(&seq),
                kind: TraceKind::InfiniteEventuallyConstant,
            };
        };
        // Rotate so the period starts at a label change; the collapsed period
        // then has distinct first and last letters.
        let mut pre = prefix.to_vec();
        pre.extend_from_slice(&cycle[..j]);
        let mut rotated = cycle[j..].to_vec();
        rotated.extend_from_slice(&cycle[..j]);
        let period = collapse(&rotated);
        let mut stem = collapse(&pre);
        if stem.last() == Some(&period[0]) {
            stem.pop();
        }
        let (word, period) = canonical_lasso(&stem, &period);
        Self {
            word,
            kind: TraceKind::InfinitePeriodic(period),
        }
    }

    pub fn is_infinite(&self) -> bool {
        !matches!(self.kind, TraceKind::Finite)
    }

    /// The letters at positions `0..n` of the trace, for infinite traces
    /// unrolled as far as needed; finite traces are truncated.
    pub fn unroll(&self, n: usize) -> Vec<LabelSet> {
        let mut out: Vec<LabelSet> = self.word.iter().copied().take(n).collect();
        match &self.kind {
            TraceKind::Finite => {}
            TraceKind::InfiniteEventuallyConstant => {
                if let Some(&last) = self.word.last() {
                    out.resize(n.max(out.len()), last);
                }
            }
            TraceKind::InfinitePeriodic(v) => {
                let mut i = 0;
                while out.len() < n {
                    out.push(v[i % v.len()]);
                    i += 1;
                }
            }
        }
        out
    }
}

impl VisWord {
    pub fn finite(visible: Vec<ActionId>) -> Self {
        Self {
            word: visible,
            kind: VisKind::Finite,
        }
    }

    /// Projection of `prefix · cycle^ω` where both are already projected.
    pub fn lasso(prefix: &[ActionId], cycle: &[ActionId]) -> Self {
        if cycle.is_empty() {
            return Self {
                word: prefix.to_vec(),
                kind: VisKind::InfiniteEventuallyEmpty,
            };
        }
        let (word, period) = canonical_lasso(prefix, cycle);
        Self {
            word,
            kind: VisKind::InfinitePeriodic(period),
        }
    }

    pub fn is_infinite(&self) -> bool {
        !matches!(self.kind, VisKind::Finite)
    }
}
