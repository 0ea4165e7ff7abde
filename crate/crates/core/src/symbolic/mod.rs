//! Chains of symbolic systems: digit sets, labelled graphs, follower
//! automata and exact preimage counting.

mod automaton;
mod chain;
mod digits;
mod graph;

pub use automaton::{determinize, FollowerAutomaton};
pub use chain::{Chain, Word};
pub use digits::{Digit, DigitSystem, LevelStructure, ProjectedAlphabet};
pub use graph::{Edge, LabeledGraph};

/// Validates raw bases and digits into a [`DigitSystem`].
pub fn validate_digit_system(bases: Vec<u32>, digits: Vec<Digit>) -> crate::Result<DigitSystem> {
    DigitSystem::new(bases, digits)
}
