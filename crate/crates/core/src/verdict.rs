//! Three-valued verdicts shared by all checkers.

use serde::{Deserialize, Serialize};

/// What a bounded check actually covered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Bound {
    /// Markings with at most `max_tokens` tokens on each of `places`
    /// (all other places empty), plus the reachable markings when
    /// `reachable_included` is set.
    MarkingBox {
        max_tokens: u32,
        places: Vec<String>,
        reachable_included: bool,
    },
    /// Paths of at most `max_len` steps.
    PathLength { max_len: usize },
    /// Witness enumeration limits.
    Enumeration { repeat: usize, count: usize },
}

/// Outcome of a check: exact success, success within a stated bound, or
/// failure with a concrete witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict<W> {
    Holds,
    BoundedHolds { bound: Bound },
    Fails { witness: W },
}

impl<W> Verdict<W> {
    pub fn fails(witness: W) -> Self {
        Verdict::Fails { witness }
    }

    pub fn bounded(bound: Bound) -> Self {
        Verdict::BoundedHolds { bound }
    }

    /// Holds or BoundedHolds.
    pub fn passes(&self) -> bool {
        !self.is_fails()
    }

    pub fn is_fails(&self) -> bool {
        matches!(self, Verdict::Fails { .. })
    }

    pub fn is_holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, Verdict::BoundedHolds { .. })
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Fails { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn map_witness<V>(self, f: impl FnOnce(W) -> V) -> Verdict<V> {
        match self {
            Verdict::Holds => Verdict::Holds,
            Verdict::BoundedHolds { bound } => Verdict::BoundedHolds { bound },
            Verdict::Fails { witness } => Verdict::Fails { witness: f(witness) },
        }
    }

    /// Short status word: `holds`, `bounded_holds` or `fails`.
    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::BoundedHolds { .. } => "bounded_holds",
            Verdict::Fails { .. } => "fails",
        }
    }
}
