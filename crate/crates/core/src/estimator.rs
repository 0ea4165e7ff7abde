//! Exact finite-`N` nested cylinder counts.
//!
//! ```text
//! S_N = sum over level-r words x_r of V_r(x_r)^{a_{r-1}}
//! V_{j+1}(x) = sum over level-j words y above x of V_j(y)^{a_{j-1}}
//! V_2(x)     = sum over level-1 words y above x of exp(sup_[y] S_N f)
//! ```
//!
//! Without a potential `V_2` is the number of admissible preimages. Full-shift
//! chains with at most a window-1 potential factorize letter by letter; every
//! other case enumerates levels `r..2` explicitly and runs a dynamic program
//! over the follower automaton for level 1.
//!
//! The outermost words are split into fixed prefix chunks that may run on any
//! number of threads. Chunk sums are combined sequentially in prefix order, so
//! results do not depend on the thread count.

use std::collections::HashMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{pow_log, LogSum, LogWeight, Tally};
use crate::potential::{CompiledPotential, Potential};
use crate::sofic::sofic_weighted_entropy_closed_form;
use crate::sponge::kp_recursion;
use crate::symbolic::Chain;
use crate::weights::Exponents;

pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const DEFAULT_N_MAX: usize = 12;

const MIN_CHUNKS: usize = 64;
const SUBMULTIPLICATIVE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Factorize whenever the chain allows it.
    #[default]
    Auto,
    /// Always enumerate; mostly useful as a cross-check.
    Enumerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EstimatorOptions {
    /// Cap on the number of explicitly enumerated words.
    pub budget: u64,
    pub strategy: Strategy,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            strategy: Strategy::Auto,
        }
    }
}

/// `S_N`, kept as its logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NestedCount {
    pub n: usize,
    pub ln_value: f64,
    pub window: Option<usize>,
}

impl NestedCount {
    pub fn value(&self) -> f64 {
        self.ln_value.exp()
    }

    /// `log S_N / N`.
    pub fn rate(&self) -> f64 {
        self.ln_value / self.n as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateSeries {
    /// `(N, log S_N / N)`.
    pub entries: Vec<(usize, f64)>,
    /// Running minimum of the rates.
    pub fekete_bounds: Vec<f64>,
    pub closed_form: Option<f64>,
}

impl EstimateSeries {
    pub fn fekete_bound(&self) -> Option<f64> {
        self.fekete_bounds.last().copied()
    }

    pub fn last_rate(&self) -> Option<f64> {
        self.entries.last().map(|&(_, v)| v)
    }
}

fn words_needed(chain: &Chain, n: usize, factorized: bool) -> u128 {
    let levels = chain.levels();
    let r = chain.rank();
    let lowest = if factorized { r } else { 2 };
    (lowest..=r)
        .map(|j| (levels.size(j) as u128).checked_pow(n as u32).unwrap_or(u128::MAX))
        .fold(0u128, u128::saturating_add)
}

fn is_factorizable(chain: &Chain, pot: Option<&Potential>, opts: &EstimatorOptions) -> bool {
    opts.strategy == Strategy::Auto && chain.is_full_shift() && pot.is_none_or(|f| f.window() == 1)
}

fn validate(chain: &Chain, a: &Exponents, pot: Option<&Potential>, n: usize) -> Result<()> {
    a.check_rank(chain.rank())?;
    if n == 0 {
        return Err(Error::Validation("word length N must be at least 1".into()));
    }
    if let Some(f) = pot {
        if f.window() > n {
            return Err(Error::PotentialWindowTooLarge {
                window: f.window(),
                n,
            });
        }
    }
    Ok(())
}

fn check_budget(chain: &Chain, n: usize, factorized: bool, budget: u64) -> Result<()> {
    let needed = words_needed(chain, n, factorized);
    if needed > budget as u128 {
        return Err(Error::ComplexityBudgetExceeded { needed, budget });
    }
    Ok(())
}

pub fn nested_count(chain: &Chain, a: &Exponents, pot: Option<&Potential>, n: usize) -> Result<NestedCount> {
    nested_count_with(chain, a, pot, n, &EstimatorOptions::default())
}

pub fn nested_count_with(
    chain: &Chain,
    a: &Exponents,
    pot: Option<&Potential>,
    n: usize,
    opts: &EstimatorOptions,
) -> Result<NestedCount> {
    validate(chain, a, pot, n)?;
    let factorized = is_factorizable(chain, pot, opts);
    check_budget(chain, n, factorized, opts.budget)?;
    let ln_value = if factorized {
        factorized_count(chain, a, pot, n)?
    } else {
        let compiled = pot.map(|f| f.compile(chain)).transpose()?;
        let machine = BottomMachine::new(chain, compiled.as_ref());
        let engine = Engine {
            chain,
            a: a.as_slice(),
            n,
            machine: &machine,
        };
        if compiled.is_some() {
            engine.run::<LogWeight>().expect("log weights do not overflow")
        } else {
            match engine.run::<u128>() {
                Some(v) => v,
                None => engine
                    .run::<BigUint>()
                    .expect("big integers do not overflow"),
            }
        }
    };
    Ok(NestedCount {
        n,
        ln_value,
        window: pot.map(Potential::window),
    })
}

/// The closed form matching `(chain, pot)`, when one exists.
pub fn closed_form_reference(chain: &Chain, a: &Exponents, pot: Option<&Potential>) -> Option<f64> {
    if chain.is_full_shift() && pot.is_none_or(|f| f.window() == 1) {
        kp_recursion(chain.system(), a, pot).ok().map(|z| z.z0().ln())
    } else if pot.is_none() {
        sofic_weighted_entropy_closed_form(chain, a).ok()
    } else {
        None
    }
}

/// `log S_N / N` for `N = max(1, window)..=n_max`.
pub fn entropy_estimate(
    chain: &Chain,
    a: &Exponents,
    pot: Option<&Potential>,
    n_max: usize,
    opts: &EstimatorOptions,
) -> Result<EstimateSeries> {
    let start = pot.map_or(1, Potential::window).max(1);
    validate(chain, a, pot, n_max)?;
    check_budget(chain, n_max, is_factorizable(chain, pot, opts), opts.budget)?;
    let mut entries = Vec::with_capacity(n_max);
    let mut fekete_bounds = Vec::with_capacity(n_max);
    let mut best = f64::INFINITY;
    for n in start..=n_max {
        let rate = nested_count_with(chain, a, pot, n, opts)?.rate();
        best = best.min(rate);
        entries.push((n, rate));
        fekete_bounds.push(best);
    }
    Ok(EstimateSeries {
        entries,
        fekete_bounds,
        closed_form: closed_form_reference(chain, a, pot),
    })
}

/// `S_{N+M} <= S_N S_M (1 + 1e-9)`.
pub fn submultiplicativity_check(
    chain: &Chain,
    a: &Exponents,
    n: usize,
    m: usize,
    opts: &EstimatorOptions,
) -> Result<bool> {
    if m == 0 {
        return Err(Error::Validation("word length M must be at least 1".into()));
    }
    let joint = nested_count_with(chain, a, None, n + m, opts)?.ln_value;
    let left = nested_count_with(chain, a, None, n, opts)?.ln_value;
    let right = nested_count_with(chain, a, None, m, opts)?.ln_value;
    Ok(joint <= left + right + SUBMULTIPLICATIVE_SLACK.ln_1p())
}

/// All words of length `len` over `0..alphabet`, lexicographic.
fn all_prefixes(alphabet: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..alphabet).map(move |l| {
                    let mut q = p.clone();
                    q.push(l);
                    q
                })
            })
            .collect();
    }
    out
}

fn chunk_len(alphabet: usize, n: usize) -> usize {
    let mut len = 0;
    let mut count = 1usize;
    while len < n && count < MIN_CHUNKS && alphabet > 1 {
        len += 1;
        count = count.saturating_mul(alphabet);
    }
    len
}

fn combine(chunks: impl IntoIterator<Item = f64>) -> f64 {
    let mut total = LogSum::default();
    for c in chunks {
        total.push(c);
    }
    total.ln()
}

// ---------------------------------------------------------------------------
// full shifts: every level factorizes into per-letter values

fn factorized_count(chain: &Chain, a: &Exponents, pot: Option<&Potential>, n: usize) -> Result<f64> {
    let z = kp_recursion(chain.system(), a, pot)?;
    let top = a.get(chain.rank() - 1);
    let letter_logs: Vec<f64> = z.level(1).iter().map(|&v| top * v.ln()).collect();
    let prefixes = all_prefixes(letter_logs.len(), chunk_len(letter_logs.len(), n));
    let chunks: Vec<f64> = prefixes
        .par_iter()
        .map(|p| {
            let start: f64 = p.iter().map(|&l| letter_logs[l]).sum();
            let mut acc = LogSum::default();
            sum_words(&letter_logs, n - p.len(), start, &mut acc);
            acc.ln()
        })
        .collect();
    Ok(combine(chunks))
}

fn sum_words(letter_logs: &[f64], remaining: usize, so_far: f64, acc: &mut LogSum) {
    if remaining == 0 {
        acc.push(so_far);
        return;
    }
    for &l in letter_logs {
        sum_words(letter_logs, remaining - 1, so_far + l, acc);
    }
}

// ---------------------------------------------------------------------------
// general chains

/// Level-1 transition system: follower-automaton states, extended by the last
/// `k - 1` letters when a window-`k` potential is present.
struct BottomMachine {
    initial: usize,
    // next[s][letter] = (state, log weight picked up)
    next: Vec<Vec<Option<(usize, f64)>>>,
    // sup of the windows still open at the end of a word
    tail: Vec<f64>,
}

impl BottomMachine {
    fn new(chain: &Chain, pot: Option<&CompiledPotential>) -> Self {
        let aut = chain.automaton(1);
        let letters = aut.alphabet_len();
        let Some(pot) = pot else {
            let next = (0..aut.state_count())
                .map(|s| (0..letters).map(|l| aut.step(s, l).map(|t| (t, 0.0))).collect())
                .collect();
            return Self {
                initial: aut.initial(),
                next,
                tail: vec![0.0; aut.state_count()],
            };
        };
        let memory = pot.window() - 1;
        let window_value = |history: &[usize], letter: usize| -> f64 {
            if history.len() < memory {
                return 0.0;
            }
            let mut w = history.to_vec();
            w.push(letter);
            pot.at(&w)
        };
        let shift = |history: &[usize], letter: usize| -> Vec<usize> {
            let mut h = history.to_vec();
            h.push(letter);
            if h.len() > memory {
                h.remove(0);
            }
            h
        };

        let mut index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut keys: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut next: Vec<Vec<Option<(usize, f64)>>> = Vec::new();
        let start = (aut.initial(), Vec::new());
        index.insert(start.clone(), 0);
        keys.push(start);
        let mut cursor = 0;
        while cursor < keys.len() {
            let (state, history) = keys[cursor].clone();
            let mut row = Vec::with_capacity(letters);
            for l in 0..letters {
                row.push(aut.step(state, l).map(|t| {
                    let key = (t, shift(&history, l));
                    let id = *index.entry(key.clone()).or_insert_with(|| {
                        keys.push(key);
                        keys.len() - 1
                    });
                    (id, window_value(&history, l))
                }));
            }
            next.push(row);
            cursor += 1;
        }

        fn best_tail(next: &[Vec<Option<(usize, f64)>>], s: usize, steps: usize) -> f64 {
            if steps == 0 {
                return 0.0;
            }
            next[s]
                .iter()
                .flatten()
                .map(|&(t, w)| w + best_tail(next, t, steps - 1))
                .fold(f64::NEG_INFINITY, f64::max)
        }
        let tail = (0..next.len()).map(|s| best_tail(&next, s, memory)).collect();
        Self {
            initial: 0,
            next,
            tail,
        }
    }

    fn state_count(&self) -> usize {
        self.next.len()
    }
}

struct Engine<'c> {
    chain: &'c Chain,
    a: &'c [f64],
    n: usize,
    machine: &'c BottomMachine,
}

impl Engine<'_> {
    /// Exponent applied to level-`j` values: `a_{j-1}`.
    fn exponent(&self, level: usize) -> f64 {
        self.a[level - 2]
    }

    fn candidates(&self, level: usize, constraint: Option<&[usize]>, t: usize) -> Vec<usize> {
        match constraint {
            Some(above) => self.chain.levels().children(level + 1, above[t]).to_vec(),
            None => (0..self.chain.levels().size(level)).collect(),
        }
    }

    /// `None` when a `u128` counter overflowed.
    fn run<T: Tally>(&self) -> Option<f64> {
        let r = self.chain.rank();
        let prefixes = all_prefixes(self.chain.levels().size(r), chunk_len(self.chain.levels().size(r), self.n));
        let chunks: Vec<Option<f64>> = prefixes
            .par_iter()
            .map(|p| {
                if r == 2 {
                    self.level2_sum::<T>(None, p)
                } else {
                    self.upper_sum::<T>(r, None, p)
                }
            })
            .collect();
        let chunks: Option<Vec<f64>> = chunks.into_iter().collect();
        Some(combine(chunks?))
    }

    /// `log sum over level-j words y above constraint, starting with prefix,
    /// of V_j(y)^{a_{j-1}}`, for `j >= 3`.
    fn upper_sum<T: Tally>(&self, level: usize, constraint: Option<&[usize]>, prefix: &[usize]) -> Option<f64> {
        let aut = self.chain.automaton(level);
        let Some(state) = aut.run(prefix) else {
            return Some(f64::NEG_INFINITY);
        };
        let mut word = prefix.to_vec();
        let mut acc = LogSum::default();
        self.upper_dfs::<T>(level, constraint, state, &mut word, &mut acc)?;
        Some(acc.ln())
    }

    fn upper_dfs<T: Tally>(
        &self,
        level: usize,
        constraint: Option<&[usize]>,
        state: usize,
        word: &mut Vec<usize>,
        acc: &mut LogSum,
    ) -> Option<()> {
        let t = word.len();
        if t == self.n {
            let inner = if level == 3 {
                self.level2_sum::<T>(Some(word), &[])?
            } else {
                self.upper_sum::<T>(level - 1, Some(word), &[])?
            };
            acc.push(pow_log(inner, self.exponent(level)));
            return Some(());
        }
        let aut = self.chain.automaton(level);
        for l in self.candidates(level, constraint, t) {
            if let Some(next) = aut.step(state, l) {
                word.push(l);
                self.upper_dfs::<T>(level, constraint, next, word, acc)?;
                word.pop();
            }
        }
        Some(())
    }

    /// Level-2 trie carrying the level-1 dynamic program.
    fn level2_sum<T: Tally>(&self, constraint: Option<&[usize]>, prefix: &[usize]) -> Option<f64> {
        let states = self.machine.state_count();
        let mut layers: Vec<Vec<T>> = vec![vec![T::zero(); states]; self.n + 1];
        layers[0][self.machine.initial] = T::one();
        for (t, &y) in prefix.iter().enumerate() {
            if !self.step(&mut layers, t, y)? {
                return Some(f64::NEG_INFINITY);
            }
        }
        let mut acc = LogSum::default();
        self.level2_dfs(constraint, prefix.len(), &mut layers, &mut acc)?;
        Some(acc.ln())
    }

    /// Fills `layers[t + 1]` from `layers[t]` along level-2 letter `y`;
    /// `false` when nothing survives.
    fn step<T: Tally>(&self, layers: &mut [Vec<T>], t: usize, y: usize) -> Option<bool> {
        let (done, rest) = layers.split_at_mut(t + 1);
        let cur = &done[t];
        let out = &mut rest[0];
        out.iter_mut().for_each(|x| *x = T::zero());
        let fiber = self.chain.levels().children(2, y);
        let mut alive = false;
        for (s, value) in cur.iter().enumerate() {
            if value.is_zero() {
                continue;
            }
            for &l in fiber {
                if let Some((target, w)) = self.machine.next[s][l] {
                    out[target].checked_add_assign(&value.scaled(w))?;
                    alive = true;
                }
            }
        }
        Some(alive)
    }

    fn level2_dfs<T: Tally>(
        &self,
        constraint: Option<&[usize]>,
        t: usize,
        layers: &mut [Vec<T>],
        acc: &mut LogSum,
    ) -> Option<()> {
        if t == self.n {
            let mut total = T::zero();
            for (s, value) in layers[t].iter().enumerate() {
                if !value.is_zero() {
                    total.checked_add_assign(&value.scaled(self.machine.tail[s]))?;
                }
            }
            acc.push(pow_log(total.ln(), self.exponent(2)));
            return Some(());
        }
        for y in self.candidates(2, constraint, t) {
            if self.step(layers, t, y)? {
                self.level2_dfs(constraint, t + 1, layers, acc)?;
            }
        }
        Some(())
    }
}

// Exposed for the weighted path so tests can force log-domain counting.
#[doc(hidden)]
pub fn nested_count_log_domain(chain: &Chain, a: &Exponents, n: usize) -> Result<f64> {
    validate(chain, a, None, n)?;
    let machine = BottomMachine::new(chain, None);
    let engine = Engine {
        chain,
        a: a.as_slice(),
        n,
        machine: &machine,
    };
    Ok(engine.run::<LogWeight>().expect("log weights do not overflow"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::symbolic::{DigitSystem, LabeledGraph};

    fn enumerate() -> EstimatorOptions {
        EstimatorOptions {
            strategy: Strategy::Enumerate,
            ..Default::default()
        }
    }

    fn log3_2() -> f64 {
        2f64.ln() / 3f64.ln()
    }

    #[test]
    fn carpet_first_count() {
        let chain = Chain::sponge(catalog::carpet());
        let a = Exponents::new(vec![log3_2()]).unwrap();
        let s1 = nested_count(&chain, &a, None, 1).unwrap().value();
        assert!((s1 - (1.0 + 2f64.powf(log3_2()))).abs() < 1e-14);
    }

    #[test]
    fn carpet_is_multiplicative_on_both_paths() {
        let chain = Chain::sponge(catalog::carpet());
        let a = Exponents::new(vec![log3_2()]).unwrap();
        let z0 = 1.0 + 2f64.powf(log3_2());
        for n in 1..=8 {
            for opts in [EstimatorOptions::default(), enumerate()] {
                let s = nested_count_with(&chain, &a, None, n, &opts).unwrap();
                let expected = n as f64 * z0.ln();
                assert!((s.ln_value - expected).abs() < 1e-12 * expected.max(1.0), "n={n}");
            }
        }
    }

    #[test]
    fn zero_exponents_count_top_words() {
        let chain = catalog::sofic_example_chain();
        let a = Exponents::new(vec![0.0, 0.0]).unwrap();
        for n in 1..=6 {
            let s = nested_count(&chain, &a, None, n).unwrap().value();
            assert!((s - 2f64.powi(n as i32)).abs() < 1e-9);
        }
    }

    #[test]
    fn unit_exponents_count_bottom_words() {
        let chain = catalog::sofic_example_chain();
        let a = Exponents::new(vec![1.0, 1.0]).unwrap();
        for n in 1..=6 {
            let s = nested_count(&chain, &a, None, n).unwrap().ln_value;
            let words = crate::numeric::ln_big(&chain.count_words(1, n));
            assert!((s - words).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        // 40 letters, N = 30: 40^30 > 2^128
        let digits: Vec<Vec<u32>> = (0..40).map(|k| vec![0, k]).collect();
        let sys = DigitSystem::new(vec![2, 40], digits).unwrap();
        let chain = Chain::sponge(sys);
        let a = Exponents::new(vec![0.5]).unwrap();
        let s = nested_count_with(&chain, &a, None, 30, &enumerate()).unwrap();
        assert!((s.ln_value - 15.0 * 40f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn log_domain_matches_exact_counts() {
        let chain = catalog::sofic_example_chain();
        let a = Exponents::new(vec![0.8, 0.5]).unwrap();
        for n in 1..=5 {
            let exact = nested_count(&chain, &a, None, n).unwrap().ln_value;
            let logd = nested_count_log_domain(&chain, &a, n).unwrap();
            assert!((exact - logd).abs() < 1e-12);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let chain = catalog::sofic_example_chain();
        let a = Exponents::new(vec![0.5, 0.5]).unwrap();
        let opts = EstimatorOptions {
            budget: 100,
            ..Default::default()
        };
        assert!(matches!(
            nested_count_with(&chain, &a, None, 6, &opts),
            Err(Error::ComplexityBudgetExceeded { .. })
        ));
    }

    #[test]
    fn window_longer_than_word_is_rejected() {
        let chain = Chain::sponge(catalog::carpet());
        let a = Exponents::new(vec![0.5]).unwrap();
        let f = Potential::new(3, [], Some(0.0)).unwrap();
        assert_eq!(
            nested_count(&chain, &a, Some(&f), 2).unwrap_err(),
            Error::PotentialWindowTooLarge { window: 3, n: 2 }
        );
    }

    #[test]
    fn window_one_potential_matches_both_paths() {
        let chain = Chain::sponge(catalog::carpet());
        let a = Exponents::new(vec![0.6]).unwrap();
        let f = Potential::per_digit([(vec![0, 0], 0.3), (vec![1, 1], -0.2)], Some(0.1)).unwrap();
        for n in 1..=5 {
            let fast = nested_count(&chain, &a, Some(&f), n).unwrap().ln_value;
            let slow = nested_count_with(&chain, &a, Some(&f), n, &enumerate()).unwrap().ln_value;
            assert!((fast - slow).abs() < 1e-12);
        }
    }

    #[test]
    fn window_two_potential_takes_sup_over_extensions() {
        // one level-2 letter, digits {(0,0),(0,1)}; f(xy) = 1 iff x != y.
        // With a = 1, S_N = sum over words of exp(#changes + 1): the last
        // window can always be completed with a change.
        let sys = DigitSystem::new(vec![2, 2], vec![vec![0, 0], vec![0, 1]]).unwrap();
        let chain = Chain::sponge(sys);
        let a = Exponents::new(vec![1.0]).unwrap();
        let d0 = vec![0, 0];
        let d1 = vec![0, 1];
        let f = Potential::new(2, [(vec![d0.clone(), d1.clone()], 1.0), (vec![d1, d0], 1.0)], Some(0.0)).unwrap();
        for n in 2..=6 {
            let s = nested_count(&chain, &a, Some(&f), n).unwrap().value();
            // sum_k C(n-1,k) e^k * 2 * e
            let expected = 2.0 * std::f64::consts::E * (1.0 + std::f64::consts::E).powi(n as i32 - 1);
            assert!((s - expected).abs() < 1e-10 * expected, "n={n}");
        }
    }

    #[test]
    fn constant_potential_shifts_every_path() {
        let chain = catalog::sofic_example_chain();
        let a = Exponents::new(vec![0.7, 0.4]).unwrap();
        let c = 0.9;
        let f = Potential::new(2, [], Some(c)).unwrap();
        for n in 2..=5 {
            let base = nested_count(&chain, &a, None, n).unwrap().ln_value;
            let shifted = nested_count(&chain, &a, Some(&f), n).unwrap().ln_value;
            assert!((shifted - base - 0.28 * c * n as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn series_for_the_carpet_is_flat() {
        let chain = Chain::sponge(catalog::carpet());
        let a = Exponents::new(vec![log3_2()]).unwrap();
        let s = entropy_estimate(&chain, &a, None, 6, &Default::default()).unwrap();
        let z = s.closed_form.unwrap();
        assert_eq!(s.entries.len(), 6);
        for &(_, v) in &s.entries {
            assert!((v - z).abs() < 1e-12);
        }
        let one = entropy_estimate(&chain, &a, None, 1, &Default::default()).unwrap();
        assert_eq!(one.entries.len(), 1);
    }

    #[test]
    fn submultiplicative_examples() {
        let carpet = Chain::sponge(catalog::carpet());
        let a = Exponents::new(vec![log3_2()]).unwrap();
        assert!(submultiplicativity_check(&carpet, &a, 2, 3, &Default::default()).unwrap());
        let sofic = catalog::sofic_example_chain();
        let a = crate::weights::exponents_from_bases(&catalog::SOFIC_BASES).unwrap();
        assert!(submultiplicativity_check(&sofic, &a, 3, 4, &Default::default()).unwrap());
        let ones = Exponents::new(vec![1.0, 1.0]).unwrap();
        assert!(submultiplicativity_check(&sofic, &ones, 2, 2, &Default::default()).unwrap());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let chain = catalog::sofic_example_chain();
        let a = Exponents::new(vec![0.63, 0.41]).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| nested_count(&chain, &a, None, 7).unwrap().ln_value)
        };
        let one = run(1);
        assert_eq!(one.to_bits(), run(3).to_bits());
        assert_eq!(one.to_bits(), run(8).to_bits());
    }

    #[test]
    fn rank_two_sofic_chain() {
        // golden-mean bottom under a full-shift top
        let g = LabeledGraph::from_named(
            vec!["a".into(), "b".into()],
            [
                ("a", "a", vec![0, 0]),
                ("a", "b", vec![0, 1]),
                ("b", "a", vec![1, 0]),
            ],
        )
        .unwrap();
        let chain = Chain::sofic(vec![2, 2], g).unwrap();
        let a = Exponents::new(vec![1.0]).unwrap();
        // all three labels distinct: S_N counts golden-mean words
        let fib = [3.0, 5.0, 8.0, 13.0, 21.0];
        for (n, f) in (1..=5).zip(fib) {
            assert!((nested_count(&chain, &a, None, n).unwrap().value() - f).abs() < 1e-9);
        }
    }
}
