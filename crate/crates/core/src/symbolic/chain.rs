use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::automaton::{determinize, FollowerAutomaton};
use super::digits::{Digit, DigitSystem, LevelStructure};
use super::graph::LabeledGraph;
use crate::error::{Error, Result};

/// A chain `X_1 -> X_2 -> ... -> X_r` of symbolic systems linked by
/// coordinate projections.
///
/// Level `i` keeps the first `r - i + 1` digit coordinates. For a sponge every
/// level is the full shift over its projected alphabet; for a sofic chain
/// level 1 is the shift presented by a labelled graph and the upper levels
/// are its letterwise projections.
#[derive(Debug, Clone)]
pub struct Chain {
    system: DigitSystem,
    levels: LevelStructure,
    // automata[i - 1] recognizes the admissible words of level i
    automata: Vec<FollowerAutomaton>,
    graph: Option<LabeledGraph>,
}

impl Chain {
    pub fn sponge(system: DigitSystem) -> Self {
        let graph = LabeledGraph::single_vertex(system.digits());
        let automata = (1..=system.rank())
            .map(|l| determinize(&graph, &system, l).expect("level in range"))
            .collect();
        Self {
            levels: system.levels(),
            system,
            automata,
            graph: None,
        }
    }

    /// Sofic chain over `bases`; the digit set is the set of edge labels.
    pub fn sofic(bases: Vec<u32>, graph: LabeledGraph) -> Result<Self> {
        let system = DigitSystem::new(bases, graph.labels())?;
        let automata = (1..=system.rank())
            .map(|l| determinize(&graph, &system, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            levels: system.levels(),
            system,
            automata,
            graph: Some(graph),
        })
    }

    /// The chain of the `m`-th iterate: length-`N` words of the result are
    /// length-`mN` words of `self`.
    pub fn power(&self, m: u32) -> Result<Self> {
        match &self.graph {
            None => Ok(Self::sponge(self.system.power(m)?)),
            Some(g) => {
                let bases: Vec<u32> = self.system.bases().iter().map(|b| b.pow(m)).collect();
                Self::sofic(bases, g.power(self.system.bases(), m))
            }
        }
    }

    pub fn system(&self) -> &DigitSystem {
        &self.system
    }

    pub fn levels(&self) -> &LevelStructure {
        &self.levels
    }

    pub fn rank(&self) -> usize {
        self.system.rank()
    }

    pub fn graph(&self) -> Option<&LabeledGraph> {
        self.graph.as_ref()
    }

    pub fn is_full_shift(&self) -> bool {
        self.graph.is_none()
    }

    pub fn automaton(&self, level: usize) -> &FollowerAutomaton {
        &self.automata[level - 1]
    }

    /// True when every level above the bottom is a full shift.
    pub fn upper_levels_full_shift(&self) -> bool {
        self.automaton(2).is_complete()
    }

    /// Number of admissible words of length `n` at `level`.
    pub fn count_words(&self, level: usize, n: usize) -> BigUint {
        self.automaton(level).count_words(n)
    }

    /// Exact number of admissible level-`(v.level - 1)` words of length
    /// `v.len()` projecting letterwise onto `v`.
    pub fn preimage_count(&self, v: &Word) -> Result<BigUint> {
        if v.level < 2 || v.level > self.rank() {
            return Err(Error::LevelOutOfRange {
                level: v.level,
                max: self.rank(),
            });
        }
        if !self.automaton(v.level).accepts(&v.letters) {
            return Err(Error::InadmissibleWord { level: v.level });
        }
        let below = v.level - 1;
        if self.is_full_shift() {
            return Ok(v
                .letters
                .iter()
                .map(|&x| BigUint::from(self.levels.children(v.level, x).len()))
                .product());
        }
        let aut = self.automaton(below);
        let mut counts = vec![BigUint::zero(); aut.state_count()];
        counts[aut.initial()] = BigUint::one();
        for &x in &v.letters {
            let mut next = vec![BigUint::zero(); aut.state_count()];
            for (s, c) in counts.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for &l in self.levels.children(v.level, x) {
                    if let Some(t) = aut.step(s, l) {
                        next[t] += c;
                    }
                }
            }
            counts = next;
        }
        let total: BigUint = counts.into_iter().sum();
        debug_assert!(!total.is_zero(), "projection is surjective");
        Ok(total)
    }
}

/// A word at a given chain level, stored as letter indices into that level's
/// alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    pub level: usize,
    pub letters: Vec<usize>,
}

impl Word {
    pub fn new(level: usize, letters: Vec<usize>) -> Self {
        Self { level, letters }
    }

    /// Resolves symbols (coordinate tuples) against the level's alphabet.
    pub fn from_symbols(chain: &Chain, level: usize, symbols: &[Digit]) -> Result<Self> {
        if level == 0 || level > chain.rank() {
            return Err(Error::LevelOutOfRange {
                level,
                max: chain.rank(),
            });
        }
        let alphabet = chain.levels().alphabet(level);
        let letters = symbols
            .iter()
            .map(|s| {
                alphabet
                    .index_of(s)
                    .ok_or(Error::InadmissibleWord { level })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { level, letters })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        assert_eq!(self.level, other.level);
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::new(self.level, letters)
    }
}
