use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::digits::DigitSystem;
use super::graph::LabeledGraph;
use crate::error::Result;

/// Subset-construction DFA over a labelled graph.
///
/// The state reached after reading `x` is the set of vertices at which some
/// path labelled `x` ends (starting anywhere). Only nonempty subsets are
/// states; a missing transition means the word became inadmissible.
#[derive(Debug, Clone)]
pub struct FollowerAutomaton {
    states: Vec<Vec<usize>>,
    transitions: Vec<Vec<Option<usize>>>,
    alphabet_len: usize,
}

/// Determinizes `graph` with edge labels projected to chain level `level` of
/// `system` (level 1 keeps full labels).
pub fn determinize(
    graph: &LabeledGraph,
    system: &DigitSystem,
    level: usize,
) -> Result<FollowerAutomaton> {
    let alphabet = system.level_alphabet(level)?;
    let keep = alphabet.prefix_len();
    let letters: Vec<usize> = graph
        .edges()
        .iter()
        .map(|e| {
            alphabet
                .index_of(&e.label[..keep])
                .expect("edge labels belong to the chain's digit system")
        })
        .collect();
    Ok(FollowerAutomaton::build(graph, &letters, alphabet.len()))
}

impl FollowerAutomaton {
    /// `edge_letters[k]` is the letter carried by edge `k`.
    pub fn build(graph: &LabeledGraph, edge_letters: &[usize], alphabet_len: usize) -> Self {
        let n = graph.vertex_count();
        // moves[v][letter] = targets
        let mut moves = vec![vec![Vec::new(); alphabet_len]; n];
        for (e, &l) in graph.edges().iter().zip(edge_letters) {
            moves[e.source][l].push(e.target);
        }

        let initial: Vec<usize> = (0..n).collect();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        index.insert(initial.clone(), 0);
        let mut states = vec![initial];
        let mut transitions: Vec<Vec<Option<usize>>> = Vec::new();
        let mut next = 0;
        while next < states.len() {
            let mut row = vec![None; alphabet_len];
            for (l, slot) in row.iter_mut().enumerate() {
                let mut target = vec![false; n];
                for &v in &states[next] {
                    for &t in &moves[v][l] {
                        target[t] = true;
                    }
                }
                let set: Vec<usize> = (0..n).filter(|&v| target[v]).collect();
                if set.is_empty() {
                    continue;
                }
                let id = *index.entry(set.clone()).or_insert_with(|| {
                    states.push(set);
                    states.len() - 1
                });
                *slot = Some(id);
            }
            transitions.push(row);
            next += 1;
        }
        Self {
            states,
            transitions,
            alphabet_len,
        }
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn alphabet_len(&self) -> usize {
        self.alphabet_len
    }

    pub fn transition_count(&self) -> usize {
        self.transitions
            .iter()
            .map(|row| row.iter().flatten().count())
            .sum()
    }

    pub fn vertex_set(&self, state: usize) -> &[usize] {
        &self.states[state]
    }

    #[inline]
    pub fn step(&self, state: usize, letter: usize) -> Option<usize> {
        self.transitions[state][letter]
    }

    pub fn run(&self, word: &[usize]) -> Option<usize> {
        word.iter()
            .try_fold(self.initial(), |s, &l| self.step(s, l))
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.run(word).is_some()
    }

    /// True when every state can read every letter, i.e. the language is the
    /// full shift over the alphabet.
    pub fn is_complete(&self) -> bool {
        self.transitions
            .iter()
            .all(|row| row.iter().all(Option::is_some))
    }

    /// Number of admissible words of length `n`.
    pub fn count_words(&self, n: usize) -> BigUint {
        let mut counts = vec![BigUint::zero(); self.state_count()];
        counts[self.initial()] = BigUint::one();
        for _ in 0..n {
            let mut next = vec![BigUint::zero(); self.state_count()];
            for (s, c) in counts.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for t in self.transitions[s].iter().flatten() {
                    next[*t] += c;
                }
            }
            counts = next;
        }
        counts.into_iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::graph::LabeledGraph;

    #[test]
    fn single_self_loop() {
        let sys = DigitSystem::new(vec![2, 2], vec![vec![0, 1]]).unwrap();
        let g = LabeledGraph::single_vertex(sys.digits());
        let a = determinize(&g, &sys, 1).unwrap();
        assert_eq!(a.state_count(), 1);
        assert_eq!(a.transition_count(), 1);
    }

    #[test]
    fn full_shift_encoding_accepts_everything() {
        let sys = DigitSystem::full_product(vec![2, 3]).unwrap();
        let g = LabeledGraph::single_vertex(sys.digits());
        let a = determinize(&g, &sys, 1).unwrap();
        assert!(a.is_complete());
        assert_eq!(a.count_words(4), BigUint::from(6u32.pow(4)));
    }

    #[test]
    fn golden_mean_shift() {
        // labels 0 -> 1 forbidden-11 style presentation
        let sys = DigitSystem::new(vec![2, 2], vec![vec![0, 0], vec![1, 0]]).unwrap();
        let g = LabeledGraph::from_named(
            vec!["a".into(), "b".into()],
            [
                ("a", "a", vec![0, 0]),
                ("a", "b", vec![1, 0]),
                ("b", "a", vec![0, 0]),
            ],
        )
        .unwrap();
        let a = determinize(&g, &sys, 1).unwrap();
        // Fibonacci counts: 2, 3, 5, 8
        let counts: Vec<u64> = (1..=4)
            .map(|n| a.count_words(n).try_into().unwrap())
            .collect();
        assert_eq!(counts, vec![2, 3, 5, 8]);
        assert!(!a.accepts(&[1, 1]));
        assert!(a.accepts(&[1, 0, 1]));
    }
}
