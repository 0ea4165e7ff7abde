//! Closed forms for full-shift sponge chains via the Kenyon–Peres recursion.
//!
//! For a digit set `D` the recursion runs over digit prefixes. `Z_r` is the
//! weight of a full digit (1, or `exp f(e)` for a window-1 potential),
//! `Z_{r-1}(x)` sums the weights of the extensions of `x`, and each further
//! contraction from prefix length `j` to `j - 1` raises the children to the
//! power `a_{r-j}`:
//!
//! ```text
//! Z_{j-1}(y) = sum over x extending y of Z_j(x)^{a_{r-j}}
//! ```
//!
//! The weighted entropy (or pressure) is `log Z_0`.

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::symbolic::{DigitSystem, ProjectedAlphabet};
use crate::weights::{exponents_from_bases, Exponents};

/// `Z_j` for every prefix length `j = 0..=r`.
#[derive(Debug, Clone)]
pub struct ZTable {
    // values[j][k]: Z_j at the k-th symbol of D_j; values[0] = [Z_0]
    values: Vec<Vec<f64>>,
    alphabets: Vec<ProjectedAlphabet>,
}

impl ZTable {
    pub fn z0(&self) -> f64 {
        self.values[0][0]
    }

    pub fn rank(&self) -> usize {
        self.values.len() - 1
    }

    /// Values at prefix length `j`, ordered like `D_j`.
    pub fn level(&self, j: usize) -> &[f64] {
        &self.values[j]
    }

    /// `Z_j(prefix)` with `j = prefix.len()`; `None` when the prefix is not in `D_j`.
    pub fn get(&self, prefix: &[u32]) -> Option<f64> {
        if prefix.is_empty() {
            return Some(self.z0());
        }
        let alphabet = self.alphabets.get(prefix.len() - 1)?;
        alphabet
            .index_of(prefix)
            .map(|k| self.values[prefix.len()][k])
    }
}

/// Runs the recursion with exponents `a` and an optional window-1 potential.
pub fn kp_recursion(sys: &DigitSystem, a: &Exponents, pot: Option<&Potential>) -> Result<ZTable> {
    let r = sys.rank();
    a.check_rank(r)?;
    if let Some(f) = pot {
        if f.window() != 1 {
            return Err(Error::WindowUnsupported { window: f.window() });
        }
    }
    let levels = sys.levels();
    let mut by_level: Vec<Vec<f64>> = Vec::with_capacity(r);
    let bottom = sys
        .digits()
        .iter()
        .map(|d| match pot {
            Some(f) => f.digit_value(d).map(f64::exp),
            None => Ok(1.0),
        })
        .collect::<Result<Vec<_>>>()?;
    by_level.push(bottom);
    for level in 2..=r {
        // contracting level-1 weights uses exponent 1, level i >= 2 uses a_{i-1}
        let exponent = if level == 2 { 1.0 } else { a.get(level - 2) };
        let below = &by_level[level - 2];
        let here: Vec<f64> = (0..levels.size(level))
            .map(|y| {
                levels
                    .children(level, y)
                    .iter()
                    .map(|&x| below[x].powf(exponent))
                    .sum()
            })
            .collect();
        by_level.push(here);
    }
    let top_exponent = a.get(r - 1);
    let z0: f64 = by_level[r - 1].iter().map(|&z| z.powf(top_exponent)).sum();

    // level i holds prefixes of length r - i + 1
    let mut values = vec![vec![z0]];
    let mut alphabets = Vec::with_capacity(r);
    for j in 1..=r {
        values.push(by_level[r - j].clone());
        alphabets.push(levels.alphabet(r - j + 1).clone());
    }
    Ok(ZTable { values, alphabets })
}

/// `h^a = log Z_0`, in nats.
pub fn weighted_entropy_closed_form(sys: &DigitSystem, a: &Exponents) -> Result<f64> {
    Ok(kp_recursion(sys, a, None)?.z0().ln())
}

/// `P^a(f) = log Z_0(f)` for a window-1 potential.
pub fn weighted_pressure_closed_form(sys: &DigitSystem, a: &Exponents, pot: &Potential) -> Result<f64> {
    Ok(kp_recursion(sys, a, Some(pot))?.z0().ln())
}

/// `log Z_0 / log m_1` with exponents derived from the bases.
pub fn hausdorff_dimension(sys: &DigitSystem) -> Result<f64> {
    let a = exponents_from_bases(sys.bases())?;
    Ok(weighted_entropy_closed_form(sys, &a)? / (sys.bases()[0] as f64).ln())
}

/// Box-counting dimension `sum_j log(|D_j| / |D_{j-1}|) / log m_j`, `|D_0| = 1`.
pub fn minkowski_dimension(sys: &DigitSystem) -> f64 {
    let mut prev = 1usize;
    let mut dim = 0.0;
    for (j, &m) in sys.bases().iter().enumerate() {
        let size = sys
            .project_alphabet(j + 1)
            .expect("prefix length in range")
            .len();
        dim += (size as f64 / prev as f64).ln() / (m as f64).ln();
        prev = size;
    }
    dim
}
