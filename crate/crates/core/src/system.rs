//! A uniform successor interface over explicit LSTSs and Petri nets, so the
//! stubborn-set checkers can run on either without building a full graph.

use std::fmt::Debug;
use std::hash::Hash;

use crate::lsts::{ActionId, ActionSet, Lsts, StateId};
use crate::petri::{Marking, PetriNet};

pub trait TransitionSystem {
    type State: Clone + Eq + Hash + Ord + Debug;

    fn num_actions(&self) -> usize;

    fn is_invisible(&self, a: ActionId) -> bool;

    /// Outgoing `(action, target)` pairs, sorted.
    fn successors(&self, s: &Self::State) -> Vec<(ActionId, Self::State)>;

    fn enabled(&self, s: &Self::State) -> ActionSet {
        self.successors(s).into_iter().map(|(a, _)| a).collect()
    }

    fn visible_actions(&self) -> ActionSet {
        (0..self.num_actions()).filter(|&a| !self.is_invisible(a)).collect()
    }
}

impl TransitionSystem for Lsts {
    type State = StateId;

    fn num_actions(&self) -> usize {
        Lsts::num_actions(self)
    }

    fn is_invisible(&self, a: ActionId) -> bool {
        Lsts::is_invisible(self, a)
    }

    fn successors(&self, s: &StateId) -> Vec<(ActionId, StateId)> {
        Lsts::successors(self, *s).to_vec()
    }
}

/// A Petri net viewed as a transition system over all markings, with a
/// declared invisible transition set.
#[derive(Clone, Debug)]
pub struct NetSystem<'a> {
    pub net: &'a PetriNet,
    pub invisible: ActionSet,
}

impl<'a> NetSystem<'a> {
    pub fn new(net: &'a PetriNet, invisible: ActionSet) -> Self {
        Self { net, invisible }
    }
}

impl TransitionSystem for NetSystem<'_> {
    type State = Marking;

    fn num_actions(&self) -> usize {
        self.net.num_transitions()
    }

    fn is_invisible(&self, a: ActionId) -> bool {
        self.invisible.contains(a)
    }

    fn successors(&self, m: &Marking) -> Vec<(ActionId, Marking)> {
        (0..self.net.num_transitions())
            .filter(|&t| self.net.is_enabled(m, t))
            .map(|t| (t, self.net.fire_unchecked(m, t)))
            .collect()
    }
}
