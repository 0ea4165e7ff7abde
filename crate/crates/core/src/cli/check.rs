//! Property suite run by the `check` command.
//!
//! Sponges are checked against their closed forms; sofic chains against exact
//! finite-`N` identities of the nested count at a small probe length.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::RunConfig;
use super::report::CheckOutcome;
use crate::error::{Error, Result};
use crate::estimator::{nested_count_with, submultiplicativity_check, EstimatorOptions};
use crate::numeric::ln_big;
use crate::potential::Potential;
use crate::sofic::{level2_count_matrices, sofic_weighted_entropy_closed_form};
use crate::sponge::{kp_recursion, weighted_entropy_closed_form};
use crate::symbolic::Chain;
use crate::variational::{bernoulli_objective, maximize_bernoulli, optimal_measure_from_recursion};
use crate::weights::{bowen_weights_from_bases, exponents_from_bases, weights_from_exponents, Exponents};

const SEED: u64 = 0x77_7470;
const MONOTONICITY_TRIALS: usize = 200;
const SHIFTS: [f64; 3] = [-1.25, 0.5, 3.0];
const RATIO_MAX_N: usize = 10;

fn outcome(name: &str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn failed(name: &str, err: crate::Error) -> CheckOutcome {
    outcome(name, false, format!("error: {err}"))
}

struct Suite<'c> {
    cfg: &'c RunConfig,
    chain: &'c Chain,
    opts: EstimatorOptions,
    /// Word length for the finite-N identities on sofic chains.
    probe: usize,
}

impl Suite<'_> {
    fn sponge(&self) -> bool {
        self.chain.is_full_shift()
    }

    fn ln_count(&self, a: &Exponents, pot: Option<&Potential>, n: usize) -> Result<f64> {
        Ok(nested_count_with(self.chain, a, pot, n, &self.opts)?.ln_value)
    }

    fn window_one(&self) -> Option<&Potential> {
        self.cfg.potential.as_ref().filter(|f| f.window() == 1)
    }

    fn pressure_shift(&self) -> Result<CheckOutcome> {
        let a = &self.cfg.exponents;
        let w1 = weights_from_exponents(a).get(1);
        let base = self.cfg.potential.clone().unwrap_or_else(|| Potential::constant(0.0));
        let mut worst = 0.0f64;
        for c in SHIFTS {
            let shifted = base.shifted(c);
            let delta = if self.sponge() && base.window() == 1 {
                let sys = self.chain.system();
                kp_recursion(sys, a, Some(&shifted))?.z0().ln() - kp_recursion(sys, a, Some(&base))?.z0().ln()
            } else {
                let n = self.probe.max(base.window());
                (self.ln_count(a, Some(&shifted), n)? - self.ln_count(a, Some(&base), n)?) / n as f64
            };
            worst = worst.max((delta - w1 * c).abs());
        }
        Ok(outcome(
            "pressure_shift",
            worst <= 1e-9,
            format!("max |P(f+c) - P(f) - w_1 c| = {worst:.3e} over c in {SHIFTS:?}"),
        ))
    }

    fn entropy_at(&self, a: &Exponents) -> Result<f64> {
        if self.sponge() {
            weighted_entropy_closed_form(self.chain.system(), a)
        } else {
            self.ln_count(a, None, self.probe)
        }
    }

    fn monotonicity(&self) -> Result<CheckOutcome> {
        let r = self.chain.rank();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut violations = 0;
        let mut worst = 0.0f64;
        for _ in 0..MONOTONICITY_TRIALS {
            let a: Vec<f64> = (0..r - 1).map(|_| rng.gen::<f64>()).collect();
            let i = rng.gen_range(0..r - 1);
            let mut b = a.clone();
            b[i] += rng.gen::<f64>() * (1.0 - a[i]);
            let lo = self.entropy_at(&Exponents::new(a)?)?;
            let hi = self.entropy_at(&Exponents::new(b)?)?;
            if hi < lo - 1e-12 {
                violations += 1;
                worst = worst.max(lo - hi);
            }
        }
        Ok(outcome(
            "monotonicity_in_exponents",
            violations == 0,
            format!("{violations} decreases in {MONOTONICITY_TRIALS} random trials (largest {worst:.3e})"),
        ))
    }

    fn collapses(&self) -> Result<Vec<CheckOutcome>> {
        let r = self.chain.rank();
        let ones = Exponents::uniform(r - 1, 1.0)?;
        let mut top_zero = self.cfg.exponents.as_slice().to_vec();
        top_zero[r - 2] = 0.0;
        let top_zero = Exponents::new(top_zero)?;
        let (unit_got, unit_want, zero_got, zero_want, scale) = if self.sponge() {
            let sys = self.chain.system();
            let d1 = sys.project_alphabet(1)?.len();
            (
                weighted_entropy_closed_form(sys, &ones)?,
                (sys.len() as f64).ln(),
                weighted_entropy_closed_form(sys, &top_zero)?,
                (d1 as f64).ln(),
                "log|D| and log|D_1|",
            )
        } else {
            let n = self.probe;
            (
                self.ln_count(&ones, None, n)?,
                ln_big(&self.chain.count_words(1, n)),
                self.ln_count(&top_zero, None, n)?,
                ln_big(&self.chain.count_words(r, n)),
                "level-1 and level-r word counts",
            )
        };
        let e1 = (unit_got - unit_want).abs();
        let e2 = (zero_got - zero_want).abs();
        Ok(vec![
            outcome(
                "collapse_unit_exponents",
                e1 <= 1e-12,
                format!("a = (1,...,1) against {scale}: error {e1:.3e}"),
            ),
            outcome(
                "collapse_zero_top_exponent",
                e2 <= 1e-12,
                format!("a_(r-1) = 0 against {scale}: error {e2:.3e}"),
            ),
        ])
    }

    fn weights_consistency(&self) -> Result<CheckOutcome> {
        let bases = self.chain.system().bases();
        let from_a = weights_from_exponents(&exponents_from_bases(bases)?);
        let direct = bowen_weights_from_bases(bases)?;
        let err = from_a
            .as_slice()
            .iter()
            .zip(direct.as_slice())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        Ok(outcome(
            "weights_consistency",
            err <= 1e-12,
            format!("max difference {err:.3e}"),
        ))
    }

    fn submultiplicativity(&self) -> Result<CheckOutcome> {
        let limit = self.cfg.n_max.min(8);
        let mut pairs = 0;
        let mut skipped = 0;
        let mut failures = Vec::new();
        for n in 1..limit {
            for m in n..=limit - n {
                match submultiplicativity_check(self.chain, &self.cfg.exponents, n, m, &self.opts) {
                    Ok(true) => pairs += 1,
                    Ok(false) => failures.push((n, m)),
                    Err(Error::ComplexityBudgetExceeded { .. }) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(outcome(
            "submultiplicativity",
            failures.is_empty(),
            format!(
                "{pairs} pairs (N, M) with N + M <= {limit} pass, {skipped} over budget; failing pairs {failures:?}"
            ),
        ))
    }

    fn path_word_ratio(&self) -> Result<CheckOutcome> {
        let Some(graph) = self.chain.graph() else {
            return Ok(outcome(
                "path_word_ratio",
                true,
                "single-vertex presentation: every word is one path".into(),
            ));
        };
        let vertices = graph.vertex_count();
        let letters = self.chain.levels().size(2) as u128;
        let mut n_max = 0;
        let mut visited = 0u128;
        while n_max < RATIO_MAX_N.min(self.cfg.n_max) {
            visited = visited.saturating_add(letters.saturating_pow(n_max as u32 + 1));
            if visited > self.opts.budget as u128 {
                break;
            }
            n_max += 1;
        }
        let (lo, hi, worst) = ratio_extremes(self.chain, n_max);
        let passed = lo >= 1.0 && hi <= vertices as f64;
        let mut detail = format!("paths / words over level-2 words of length <= {n_max}: min {lo:.6}, max {hi:.6}, |V| = {vertices}");
        if let Some((word, paths, words)) = worst.filter(|_| !passed) {
            detail.push_str(&format!("; worst word {word:?} has {paths} paths and {words} words"));
        }
        Ok(outcome("path_word_ratio", passed, detail))
    }

    fn power_scaling(&self) -> Result<CheckOutcome> {
        let a = &self.cfg.exponents;
        let mut worst = 0.0f64;
        let mut notes = Vec::new();
        for m in 2..=3u32 {
            let powered = self.chain.power(m)?;
            // closed forms
            if self.sponge() {
                let sys = self.chain.system();
                let pot = self.window_one();
                let p = kp_recursion(sys, a, pot)?.z0().ln();
                let block = pot.map(|f| f.block_sum(sys, m)).transpose()?;
                let pm = kp_recursion(powered.system(), a, block.as_ref())?.z0().ln();
                worst = worst.max((pm - m as f64 * p).abs() / m as f64);
            } else if let (Ok(h), Ok(hm)) = (
                sofic_weighted_entropy_closed_form(self.chain, a),
                sofic_weighted_entropy_closed_form(&powered, a),
            ) {
                worst = worst.max((hm - m as f64 * h).abs() / m as f64);
            }
            // exact counts: S_1 of the m-th power is S_m
            let s_power = nested_count_with(&powered, a, None, 1, &self.opts)?.ln_value;
            let s_m = self.ln_count(a, None, m as usize)?;
            worst = worst.max((s_power - s_m).abs() / m as f64);
            notes.push(format!("m = {m}"));
        }
        Ok(outcome(
            "power_scaling",
            worst <= 1e-9,
            format!("max |P(T^m) - m P(T)| / m = {worst:.3e} for {}", notes.join(", ")),
        ))
    }

    fn variational(&self) -> Result<Vec<CheckOutcome>> {
        let sys = self.chain.system();
        let a = &self.cfg.exponents;
        let pot = self.window_one();
        let closed = kp_recursion(sys, a, pot)?.z0().ln();
        let p_star = optimal_measure_from_recursion(sys, a, pot)?;
        let v_star = bernoulli_objective(sys, a, &p_star, pot)?.value;
        let e_star = (v_star - closed).abs();
        let mut out = vec![outcome(
            "optimal_measure_attains_closed_form",
            e_star <= 1e-9,
            format!("|objective - log Z_0| = {e_star:.3e}"),
        )];
        match maximize_bernoulli(sys, a, pot, &self.cfg.optimizer) {
            Ok((_, v)) => {
                let gap = closed - v.value;
                out.push(outcome(
                    "variational_bound",
                    (-1e-9..=1e-6).contains(&gap),
                    format!("closed form - optimizer value = {gap:.3e}"),
                ));
            }
            Err(e) => out.push(failed("variational_bound", e)),
        }
        Ok(out)
    }

    fn estimator_oracle(&self) -> Result<CheckOutcome> {
        let a = &self.cfg.exponents;
        let pot = self.window_one();
        let closed = kp_recursion(self.chain.system(), a, pot)?.z0().ln();
        let n_max = self.cfg.n_max.min(6);
        let mut worst = 0.0f64;
        for n in 1..=n_max {
            let rate = self.ln_count(a, pot, n)? / n as f64;
            worst = worst.max((rate - closed).abs());
        }
        Ok(outcome(
            "estimator_matches_closed_form",
            worst <= 1e-10,
            format!("max |log S_N / N - log Z_0| = {worst:.3e} for N <= {n_max}"),
        ))
    }
}

/// A level-2 word with its path and word counts.
pub type RatioWitness = (Vec<Vec<u32>>, u128, u128);

/// Smallest and largest `paths / words` over admissible level-2 words of
/// length `1..=n_max`, with the word attaining the largest ratio.
pub fn ratio_extremes(chain: &Chain, n_max: usize) -> (f64, f64, Option<RatioWitness>) {
    let matrices = level2_count_matrices(chain);
    let levels = chain.levels();
    let alphabet = levels.alphabet(2);
    let by_letter: Vec<_> = alphabet
        .symbols()
        .iter()
        .map(|s| {
            matrices
                .iter()
                .find(|c| &c.label == s)
                .expect("symbol in box")
                .matrix
                .clone()
        })
        .collect();
    let aut = chain.automaton(1);
    let vertices = by_letter[0].dim();

    struct Walk<'w> {
        by_letter: &'w [crate::sofic::IntMatrix],
        levels: &'w crate::symbolic::LevelStructure,
        aut: &'w crate::symbolic::FollowerAutomaton,
        n_max: usize,
        lo: f64,
        hi: f64,
        worst: Option<(Vec<usize>, u128, u128)>,
    }

    fn dfs(w: &mut Walk, word: &mut Vec<usize>, paths: &[u128], words: &[u128]) {
        if !word.is_empty() {
            let p: u128 = paths.iter().sum();
            let c: u128 = words.iter().sum();
            let ratio = p as f64 / c as f64;
            w.lo = w.lo.min(ratio);
            if ratio > w.hi {
                w.hi = ratio;
                w.worst = Some((word.clone(), p, c));
            }
        }
        if word.len() == w.n_max {
            return;
        }
        for y in 0..w.by_letter.len() {
            let m = &w.by_letter[y];
            let n = m.dim();
            let next_paths: Vec<u128> = (0..n)
                .map(|i| (0..n).map(|j| m.get(i, j) as u128 * paths[j]).sum())
                .collect();
            let mut next_words = vec![0u128; w.aut.state_count()];
            for (s, &c) in words.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for &l in w.levels.children(2, y) {
                    if let Some(t) = w.aut.step(s, l) {
                        next_words[t] += c;
                    }
                }
            }
            if next_words.iter().all(|&c| c == 0) {
                continue;
            }
            word.push(y);
            dfs(w, word, &next_paths, &next_words);
            word.pop();
        }
    }

    let mut walk = Walk {
        by_letter: &by_letter,
        levels,
        aut,
        n_max,
        lo: f64::INFINITY,
        hi: f64::NEG_INFINITY,
        worst: None,
    };
    let mut words = vec![0u128; aut.state_count()];
    words[aut.initial()] = 1;
    dfs(&mut walk, &mut Vec::new(), &vec![1u128; vertices], &words);
    let worst = walk.worst.map(|(w, p, c)| {
        (
            w.into_iter().map(|y| alphabet.symbols()[y].clone()).collect(),
            p,
            c,
        )
    });
    (walk.lo, walk.hi, worst)
}

/// Runs every property that applies to the configured system.
pub fn run_checks(cfg: &RunConfig) -> Vec<CheckOutcome> {
    let suite = Suite {
        cfg,
        chain: &cfg.chain,
        opts: cfg.estimator,
        probe: cfg.n_max.min(4),
    };
    let mut out = Vec::new();
    let mut push = |name: &str, r: Result<CheckOutcome>| out.push(r.unwrap_or_else(|e| failed(name, e)));
    push("pressure_shift", suite.pressure_shift());
    push("monotonicity_in_exponents", suite.monotonicity());
    match suite.collapses() {
        Ok(v) => out.extend(v),
        Err(e) => out.push(failed("degenerate_collapses", e)),
    }
    let mut push = |name: &str, r: Result<CheckOutcome>| out.push(r.unwrap_or_else(|e| failed(name, e)));
    push("weights_consistency", suite.weights_consistency());
    push("submultiplicativity", suite.submultiplicativity());
    push("path_word_ratio", suite.path_word_ratio());
    push("power_scaling", suite.power_scaling());
    if suite.sponge() {
        push("estimator_matches_closed_form", suite.estimator_oracle());
        match suite.variational() {
            Ok(v) => out.extend(v),
            Err(e) => out.push(failed("variational_bound", e)),
        }
    }
    out
}
