//! Locally constant potentials on the bottom level of a chain.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::symbolic::{Chain, Digit, DigitSystem};

/// A potential `f` that depends on the first `window` digits of a point.
///
/// Values are looked up in `entries`; words missing from the table take
/// `default` when one is set. Units are nats per symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    window: usize,
    entries: BTreeMap<Vec<Digit>, f64>,
    default: Option<f64>,
}

impl Potential {
    pub fn new(
        window: usize,
        entries: impl IntoIterator<Item = (Vec<Digit>, f64)>,
        default: Option<f64>,
    ) -> Result<Self> {
        if window == 0 {
            return Err(Error::InvalidPotential("window must be at least 1".into()));
        }
        let entries: BTreeMap<Vec<Digit>, f64> = entries.into_iter().collect();
        for (word, &v) in &entries {
            if word.len() != window {
                return Err(Error::InvalidPotential(format!(
                    "table word {word:?} has length {}, window is {window}",
                    word.len()
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidPotential(format!(
                    "value for {word:?} is not finite"
                )));
            }
        }
        if default.is_some_and(|d| !d.is_finite()) {
            return Err(Error::InvalidPotential("default is not finite".into()));
        }
        Ok(Self {
            window,
            entries,
            default,
        })
    }

    /// `f == c`.
    pub fn constant(c: f64) -> Self {
        Self {
            window: 1,
            entries: BTreeMap::new(),
            default: Some(c),
        }
    }

    /// Window-1 potential from a per-digit table.
    pub fn per_digit(values: impl IntoIterator<Item = (Digit, f64)>, default: Option<f64>) -> Result<Self> {
        Self::new(1, values.into_iter().map(|(d, v)| (vec![d], v)), default)
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn entries(&self) -> &BTreeMap<Vec<Digit>, f64> {
        &self.entries
    }

    pub fn default_value(&self) -> Option<f64> {
        self.default
    }

    pub fn value(&self, word: &[Digit]) -> Option<f64> {
        self.entries.get(word).copied().or(self.default)
    }

    /// `f + c`.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            window: self.window,
            entries: self.entries.iter().map(|(k, v)| (k.clone(), v + c)).collect(),
            default: self.default.map(|d| d + c),
        }
    }

    /// Value of a window-1 potential at a digit.
    pub fn digit_value(&self, digit: &Digit) -> Result<f64> {
        if self.window != 1 {
            return Err(Error::WindowUnsupported {
                window: self.window,
            });
        }
        self.value(std::slice::from_ref(digit)).ok_or_else(|| {
            Error::InvalidPotential(format!("no value for digit {digit:?}"))
        })
    }

    /// Birkhoff block sum `S_m f` as a window-1 potential on `sys.power(m)`.
    pub fn block_sum(&self, sys: &DigitSystem, m: u32) -> Result<Self> {
        if self.window != 1 {
            return Err(Error::WindowUnsupported {
                window: self.window,
            });
        }
        let mut blocks: Vec<(Digit, f64)> = vec![(vec![0; sys.rank()], 0.0)];
        for _ in 0..m {
            let mut next = Vec::with_capacity(blocks.len() * sys.len());
            for (acc, s) in &blocks {
                for d in sys.digits() {
                    let merged: Digit = acc
                        .iter()
                        .zip(d)
                        .zip(sys.bases())
                        .map(|((&a, &c), &b)| a * b + c)
                        .collect();
                    next.push((merged, s + self.digit_value(d)?));
                }
            }
            blocks = next;
        }
        Self::per_digit(blocks, None)
    }

    /// Dense table over the admissible level-1 `window`-words of `chain`.
    pub fn compile(&self, chain: &Chain) -> Result<CompiledPotential> {
        let sys = chain.system();
        let n = sys.len();
        let size = (n as u128).checked_pow(self.window as u32).unwrap_or(u128::MAX);
        if size > 10_000_000 {
            return Err(Error::InvalidPotential(format!(
                "window {} over {} letters is too large to tabulate",
                self.window, n
            )));
        }
        let mut values = vec![f64::NAN; size as usize];
        for (word, &v) in &self.entries {
            let code = word.iter().try_fold(0usize, |acc, d| {
                sys.index_of(d).map(|l| acc * n + l)
            });
            match code {
                Some(c) => values[c] = v,
                None => {
                    return Err(Error::InvalidPotential(format!(
                        "table word {word:?} uses a digit outside the system"
                    )))
                }
            }
        }
        // every admissible window must have a value
        let aut = chain.automaton(1);
        let mut stack = vec![(aut.initial(), 0usize, 0usize)];
        while let Some((state, depth, code)) = stack.pop() {
            if depth == self.window {
                if values[code].is_nan() {
                    match self.default {
                        Some(d) => values[code] = d,
                        None => {
                            let word: Vec<Digit> = decode(code, n, self.window)
                                .into_iter()
                                .map(|l| sys.digits()[l].clone())
                                .collect();
                            return Err(Error::InvalidPotential(format!(
                                "no value for admissible word {word:?}"
                            )));
                        }
                    }
                }
                continue;
            }
            for l in 0..n {
                if let Some(t) = aut.step(state, l) {
                    stack.push((t, depth + 1, code * n + l));
                }
            }
        }
        Ok(CompiledPotential {
            window: self.window,
            alphabet_len: n,
            values,
        })
    }
}

fn decode(mut code: usize, n: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = code % n;
        code /= n;
    }
    out
}

/// Potential values indexed by the base-`|D|` code of a window (first letter
/// most significant). Inadmissible windows hold NaN.
#[derive(Debug, Clone)]
pub struct CompiledPotential {
    window: usize,
    alphabet_len: usize,
    values: Vec<f64>,
}

impl CompiledPotential {
    pub fn window(&self) -> usize {
        self.window
    }

    pub fn alphabet_len(&self) -> usize {
        self.alphabet_len
    }

    #[inline]
    pub fn at_code(&self, code: usize) -> f64 {
        self.values[code]
    }

    pub fn at(&self, letters: &[usize]) -> f64 {
        let code = letters.iter().fold(0, |acc, &l| acc * self.alphabet_len + l);
        self.values[code]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn carpet() -> DigitSystem {
        DigitSystem::new(vec![2, 3], vec![vec![0, 0], vec![1, 1], vec![0, 2]]).unwrap()
    }

    #[test]
    fn compile_fills_default() {
        let chain = Chain::sponge(carpet());
        let f = Potential::per_digit([(vec![0, 0], 1.0)], Some(0.0)).unwrap();
        let c = f.compile(&chain).unwrap();
        assert_eq!(c.at(&[0]), 1.0);
        assert_eq!(c.at(&[1]), 0.0);
    }

    #[test]
    fn missing_entry_is_an_error() {
        let chain = Chain::sponge(carpet());
        let f = Potential::per_digit([(vec![0, 0], 1.0)], None).unwrap();
        assert!(matches!(f.compile(&chain), Err(Error::InvalidPotential(_))));
    }

    #[test]
    fn wrong_length_word_rejected() {
        assert!(Potential::new(2, [(vec![vec![0, 0]], 1.0)], None).is_err());
    }

    #[test]
    fn block_sum_adds_values() {
        let sys = carpet();
        let f = Potential::per_digit([(vec![0, 0], 1.0), (vec![1, 1], 0.5)], Some(0.0)).unwrap();
        let g = f.block_sum(&sys, 2).unwrap();
        // (0,0)(1,1) -> (0*2+1, 0*3+1) = (1,1) in the squared system
        assert_eq!(g.value(&[vec![1, 1]]), Some(1.5));
        // (1,1)(1,1) -> (3,4)
        assert_eq!(g.value(&[vec![3, 4]]), Some(1.0));
    }
}
