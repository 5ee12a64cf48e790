//! Stubborn-set partial-order reduction laboratory.
//!
//! Labelled state transition systems and Petri nets, the stubborn-set
//! conditions with decision procedures or bounded checkers for each,
//! reduced state-space construction, and oracles that compare the traces
//! of a reduced LSTS with those of the full one.

pub mod cli;
pub mod graph;
pub mod lsts;
pub mod models;
pub mod oracle;
pub mod petri;
pub mod poly;
pub mod props;
pub mod stubborn;
pub mod system;
pub mod trace;
pub mod verdict;

pub use lsts::{ActionId, ActionSet, LabelSet, Lasso, Lsts, LstsBuilder, LstsError, Path, Run, StateId, Transition};
pub use oracle::{Limits, OracleError, OracleWitness};
pub use petri::{build_lsts, Marking, NetLsts, PetriError, PetriNet};
pub use poly::{MultiPoly, PolyError};
pub use props::{AtomicProp, InvisibilityFlags, PropError};
pub use stubborn::{Condition, ConditionWitness, PorMode, ReducedLsts, ReductionFunction, StubbornError};
pub use system::{NetSystem, TransitionSystem};
pub use trace::{NoStutterTrace, VisWord};
pub use verdict::{Bound, Verdict};

/// Any error of the library, with a split between bad input and limits
/// that were too small for a conclusive answer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Lsts(#[from] LstsError),
    #[error(transparent)]
    Petri(#[from] PetriError),
    #[error(transparent)]
    Prop(#[from] PropError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Stubborn(#[from] StubbornError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Model(#[from] models::ModelError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Input(String),
}

impl Error {
    /// Whether the error means "inconclusive within the given limits".
    pub fn is_limit(&self) -> bool {
        match self {
            Error::Oracle(OracleError::CountExceeded(_)) => true,
            Error::Petri(e) => petri_limit(e),
            Error::Prop(PropError::StateCapExceeded(_)) => true,
            Error::Stubborn(e) => match e {
                StubbornError::ClosureCapExceeded(_)
                | StubbornError::ConfigurationCapExceeded(_)
                | StubbornError::StateCapExceeded(_) => true,
                StubbornError::Petri(p) => petri_limit(p),
                _ => false,
            },
            Error::Model(models::ModelError::Petri(p)) => petri_limit(p),
            _ => false,
        }
    }
}

fn petri_limit(e: &PetriError) -> bool {
    matches!(e, PetriError::StateCapExceeded(_) | PetriError::Prop(PropError::StateCapExceeded(_)))
}
