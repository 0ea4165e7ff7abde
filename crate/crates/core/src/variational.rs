//! The variational side for Bernoulli measures on full-shift sponges.
//!
//! For a product measure with symbol law `p` on `D`, the entropy of its image
//! on level `i` is the Shannon entropy of the marginal of `p` on `D_{r-i+1}`,
//! so the weighted entropy of the measure is `sum_i w_i H(marginal_i)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::shannon_entropy;
use crate::potential::Potential;
use crate::sponge::kp_recursion;
use crate::symbolic::{Digit, DigitSystem};
use crate::weights::{weights_from_exponents, Exponents};

const SUM_TOLERANCE: f64 = 1e-12;
const INITIAL_STEP: f64 = 0.5;
const STALL_ITERATIONS: usize = 50;
const MAX_HALVINGS: usize = 40;
const MAX_DOUBLINGS: usize = 30;

/// Probability law on the digits of a system, ordered like `sys.digits()`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolDistribution {
    p: Vec<f64>,
}

impl SymbolDistribution {
    pub fn new(sys: &DigitSystem, p: Vec<f64>) -> Result<Self> {
        if p.len() != sys.len() {
            return Err(Error::DistributionInvalid(format!(
                "{} probabilities for {} digits",
                p.len(),
                sys.len()
            )));
        }
        if let Some(x) = p.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::DistributionInvalid(format!("entry {x} is not a probability")));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::DistributionInvalid(format!("entries sum to {total}")));
        }
        Ok(Self { p })
    }

    /// From `(digit, probability)` pairs; missing digits get 0.
    pub fn from_pairs(sys: &DigitSystem, pairs: impl IntoIterator<Item = (Digit, f64)>) -> Result<Self> {
        let mut p = vec![0.0; sys.len()];
        for (d, x) in pairs {
            let k = sys
                .index_of(&d)
                .ok_or_else(|| Error::DistributionInvalid(format!("{d:?} is not a digit")))?;
            p[k] += x;
        }
        Self::new(sys, p)
    }

    pub fn uniform(sys: &DigitSystem) -> Self {
        Self {
            p: vec![1.0 / sys.len() as f64; sys.len()],
        }
    }

    pub fn point_mass(sys: &DigitSystem, k: usize) -> Self {
        let mut p = vec![0.0; sys.len()];
        p[k] = 1.0;
        Self { p }
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn total_variation(&self, other: &Self) -> f64 {
        0.5 * self.p.iter().zip(&other.p).map(|(a, b)| (a - b).abs()).sum::<f64>()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationalValue {
    pub value: f64,
    /// `w_i H(marginal on level i)`, `i = 1..r`.
    pub entropy_terms: Vec<f64>,
    /// `w_1 * integral of f`.
    pub potential_term: f64,
}

fn digit_values(sys: &DigitSystem, pot: Option<&Potential>) -> Result<Vec<f64>> {
    match pot {
        None => Ok(vec![0.0; sys.len()]),
        Some(f) => sys.digits().iter().map(|d| f.digit_value(d)).collect(),
    }
}

/// Marginals of `p` on every level, level 1 first.
fn marginals(sys: &DigitSystem, p: &[f64]) -> Vec<Vec<f64>> {
    let levels = sys.levels();
    (1..=sys.rank())
        .map(|level| {
            let mut q = vec![0.0; levels.size(level)];
            for (e, &x) in p.iter().enumerate() {
                q[levels.project_from_bottom(e, level)] += x;
            }
            q
        })
        .collect()
}

struct Objective {
    weights: Vec<f64>,
    f: Vec<f64>,
}

impl Objective {
    fn new(sys: &DigitSystem, a: &Exponents, pot: Option<&Potential>) -> Result<Self> {
        a.check_rank(sys.rank())?;
        Ok(Self {
            weights: weights_from_exponents(a).as_slice().to_vec(),
            f: digit_values(sys, pot)?,
        })
    }

    fn evaluate(&self, sys: &DigitSystem, p: &[f64]) -> VariationalValue {
        let entropy_terms: Vec<f64> = marginals(sys, p)
            .iter()
            .zip(&self.weights)
            .map(|(q, w)| w * shannon_entropy(q))
            .collect();
        let potential_term = self.weights[0] * p.iter().zip(&self.f).map(|(x, f)| x * f).sum::<f64>();
        VariationalValue {
            value: entropy_terms.iter().sum::<f64>() + potential_term,
            entropy_terms,
            potential_term,
        }
    }

    /// Gradient up to an additive constant.
    fn gradient(&self, sys: &DigitSystem, p: &[f64]) -> Vec<f64> {
        let levels = sys.levels();
        let qs = marginals(sys, p);
        (0..p.len())
            .map(|e| {
                let entropy: f64 = qs
                    .iter()
                    .enumerate()
                    .map(|(i, q)| {
                        let x = q[levels.project_from_bottom(e, i + 1)];
                        if x > 0.0 {
                            -self.weights[i] * x.ln()
                        } else {
                            0.0
                        }
                    })
                    .sum();
                entropy + self.weights[0] * self.f[e]
            })
            .collect()
    }
}

/// `sum_i w_i H(marginal_i(p)) + w_1 sum_e p(e) f(e)`.
pub fn bernoulli_objective(
    sys: &DigitSystem,
    a: &Exponents,
    p: &SymbolDistribution,
    pot: Option<&Potential>,
) -> Result<VariationalValue> {
    if p.p.len() != sys.len() {
        return Err(Error::DistributionInvalid(format!(
            "{} probabilities for {} digits",
            p.p.len(),
            sys.len()
        )));
    }
    Ok(Objective::new(sys, a, pot)?.evaluate(sys, &p.p))
}

/// The product of the conditional laws read off the `Z` recursion: extending
/// a prefix `y` by `x` has probability `Z(x)^{exponent} / Z(y)`.
pub fn optimal_measure_from_recursion(
    sys: &DigitSystem,
    a: &Exponents,
    pot: Option<&Potential>,
) -> Result<SymbolDistribution> {
    let z = kp_recursion(sys, a, pot)?;
    let r = sys.rank();
    // exponent applied to Z_k when contracting prefix length k to k - 1
    let exponent = |k: usize| if k == r { 1.0 } else { a.get(r - k) };
    let p = sys
        .digits()
        .iter()
        .map(|d| {
            (1..=r)
                .map(|k| {
                    let child = z.get(&d[..k]).expect("prefix of a digit");
                    let parent = z.get(&d[..k - 1]).expect("prefix of a digit");
                    child.powf(exponent(k)) / parent
                })
                .product()
        })
        .collect();
    Ok(SymbolDistribution { p })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerOptions {
    pub max_iters: usize,
    pub tolerance: f64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            max_iters: 100_000,
            tolerance: 1e-12,
        }
    }
}

/// Exponentiated-gradient ascent from the uniform law.
pub fn maximize_bernoulli(
    sys: &DigitSystem,
    a: &Exponents,
    pot: Option<&Potential>,
    options: &OptimizerOptions,
) -> Result<(SymbolDistribution, VariationalValue)> {
    ascend(sys, a, pot, options, None)
}

/// As [`maximize_bernoulli`], also recording the objective after every iteration.
pub fn maximize_bernoulli_traced(
    sys: &DigitSystem,
    a: &Exponents,
    pot: Option<&Potential>,
    options: &OptimizerOptions,
) -> Result<(SymbolDistribution, VariationalValue, Vec<f64>)> {
    let mut trace = Vec::new();
    let (p, v) = ascend(sys, a, pot, options, Some(&mut trace))?;
    Ok((p, v, trace))
}

/// Exponentiated-gradient point at `step`, normalized.
fn eg_point(p: &[f64], g: &[f64], g_max: f64, step: f64) -> Vec<f64> {
    let mut q: Vec<f64> = p
        .iter()
        .zip(g)
        .map(|(x, gi)| x * (step * (gi - g_max)).exp())
        .collect();
    let total: f64 = q.iter().sum();
    q.iter_mut().for_each(|x| *x /= total);
    q
}

/// Halves `step` until the objective does not decrease, or doubles it while
/// the objective keeps increasing.
fn line_search(
    sys: &DigitSystem,
    objective: &Objective,
    p: &[f64],
    g: &[f64],
    g_max: f64,
    mut step: f64,
    current: f64,
) -> Option<(Vec<f64>, VariationalValue)> {
    let try_step = |step: f64| {
        let q = eg_point(p, g, g_max, step);
        let v = objective.evaluate(sys, &q);
        (q, v)
    };
    let mut best = None;
    for _ in 0..MAX_HALVINGS {
        let (q, v) = try_step(step);
        if v.value >= current {
            best = Some((q, v));
            break;
        }
        step *= 0.5;
    }
    let (mut q, mut v) = best?;
    for _ in 0..MAX_DOUBLINGS {
        step *= 2.0;
        let (q2, v2) = try_step(step);
        if v2.value <= v.value {
            break;
        }
        (q, v) = (q2, v2);
    }
    Some((q, v))
}

fn ascend(
    sys: &DigitSystem,
    a: &Exponents,
    pot: Option<&Potential>,
    options: &OptimizerOptions,
    mut trace: Option<&mut Vec<f64>>,
) -> Result<(SymbolDistribution, VariationalValue)> {
    let objective = Objective::new(sys, a, pot)?;
    let mut p = SymbolDistribution::uniform(sys).p;
    let mut current = objective.evaluate(sys, &p);
    let mut stalled = 0;
    for t in 0..options.max_iters {
        let g = objective.gradient(sys, &p);
        let g_max = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let step = INITIAL_STEP / (1.0 + t as f64 / 100.0);
        let accepted = line_search(sys, &objective, &p, &g, g_max, step, current.value);
        let gain = match accepted {
            Some((q, value)) => {
                let gain = value.value - current.value;
                p = q;
                current = value;
                gain
            }
            None => 0.0,
        };
        if let Some(tr) = trace.as_deref_mut() {
            tr.push(current.value);
        }
        if gain < options.tolerance {
            stalled += 1;
            if stalled >= STALL_ITERATIONS {
                return Ok((SymbolDistribution { p }, current));
            }
        } else {
            stalled = 0;
        }
    }
    Err(Error::DidNotConverge {
        iterations: options.max_iters,
        best_value: current.value,
    })
}
