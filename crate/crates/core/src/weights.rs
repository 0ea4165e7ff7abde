//! Exponent vectors `a`, the probability vectors `w_a` derived from them, and
//! the base-derived exponents of a sponge.

use crate::error::{Error, Result};

/// Exponents `a_1..a_{r-1}`, each in `[0, 1]`.
///
/// `a_1` is applied to the innermost (level-1) counts and `a_{r-1}` to the
/// outermost sum.
#[derive(Debug, Clone, PartialEq)]
pub struct Exponents(Vec<f64>);

impl Exponents {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        for (i, &v) in a.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::ExponentOutOfRange {
                    index: i + 1,
                    value: v,
                });
            }
        }
        Ok(Self(a))
    }

    /// All exponents equal to `value`.
    pub fn uniform(len: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; len])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `a_i`, 1-based.
    pub fn get(&self, i: usize) -> f64 {
        self.0[i - 1]
    }

    /// Checks the vector fits a chain of rank `r`.
    pub fn check_rank(&self, r: usize) -> Result<()> {
        if self.0.len() + 1 != r {
            return Err(Error::ExponentLengthMismatch {
                expected: r.saturating_sub(1),
                found: self.0.len(),
            });
        }
        Ok(())
    }
}

/// Probability vector `w_1..w_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// `w_i`, 1-based.
    pub fn get(&self, i: usize) -> f64 {
        self.0[i - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `w_1 = a_1...a_{r-1}`, `w_i = (1 - a_{i-1}) a_i...a_{r-1}`, `w_r = 1 - a_{r-1}`.
pub fn weights_from_exponents(a: &Exponents) -> WeightVector {
    let a = a.as_slice();
    let r = a.len() + 1;
    // tail[i] = a_{i+1} * ... * a_{r-1} (0-based: product of a[i..])
    let mut tail = vec![1.0; r];
    for i in (0..r - 1).rev() {
        tail[i] = a[i] * tail[i + 1];
    }
    let mut w = Vec::with_capacity(r);
    w.push(tail[0]);
    for i in 1..r {
        w.push((1.0 - a[i - 1]) * tail[i]);
    }
    WeightVector(w)
}

fn check_bases(bases: &[u32]) -> Result<()> {
    if bases.len() < 2 {
        return Err(Error::RankTooSmall { rank: bases.len() });
    }
    if let Some((index, &base)) = bases.iter().enumerate().find(|(_, &b)| b < 2) {
        return Err(Error::BaseTooSmall { index, base });
    }
    if bases.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::BasesNotSorted);
    }
    Ok(())
}

/// `a_i = log m_{r-i} / log m_{r-i+1}`; equal neighbouring bases give exactly 1.
pub fn exponents_from_bases(bases: &[u32]) -> Result<Exponents> {
    check_bases(bases)?;
    let r = bases.len();
    let a = (1..r)
        .map(|i| {
            let (lo, hi) = (bases[r - i - 1], bases[r - i]);
            if lo == hi {
                1.0
            } else {
                (lo as f64).ln() / (hi as f64).ln()
            }
        })
        .collect();
    Exponents::new(a)
}

/// Weights read directly off the bases:
/// `(log m_1/log m_r, log m_1/log m_{r-1} - log m_1/log m_r, ..., 1 - log m_1/log m_2)`.
pub fn bowen_weights_from_bases(bases: &[u32]) -> Result<WeightVector> {
    check_bases(bases)?;
    let r = bases.len();
    let l1 = (bases[0] as f64).ln();
    // ratio(k) = log m_1 / log m_k, 1-based k
    let ratio = |k: usize| {
        if bases[k - 1] == bases[0] {
            1.0
        } else {
            l1 / (bases[k - 1] as f64).ln()
        }
    };
    let mut w = Vec::with_capacity(r);
    w.push(ratio(r));
    for i in 2..r {
        w.push(ratio(r - i + 1) - ratio(r - i + 2));
    }
    w.push(1.0 - ratio(2));
    Ok(WeightVector(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn top_heavy_and_bottom_heavy() {
        let w = weights_from_exponents(&Exponents::new(vec![1.0, 1.0]).unwrap());
        assert_eq!(w.as_slice(), &[1.0, 0.0, 0.0]);
        let w = weights_from_exponents(&Exponents::new(vec![0.0]).unwrap());
        assert_eq!(w.as_slice(), &[0.0, 1.0]);
    }

    #[test]
    fn sofic_example_weights() {
        let a1 = 3f64.ln() / 4f64.ln();
        let a2 = 2f64.ln() / 3f64.ln();
        let w = weights_from_exponents(&Exponents::new(vec![a1, a2]).unwrap());
        let expected = [0.5, (1.0 - a1) * a2, 1.0 - a2];
        assert!(close(w.as_slice(), &expected, 1e-15));
        assert!((w.get(2) - 0.130_9).abs() < 1e-4);
        assert!((w.get(3) - 0.369_1).abs() < 1e-4);
    }

    #[test]
    fn exponents_for_small_bases() {
        let a = exponents_from_bases(&[2, 3]).unwrap();
        assert!((a.get(1) - 0.630_93).abs() < 1e-5);
        assert_eq!(exponents_from_bases(&[2, 2, 2]).unwrap().as_slice(), &[1.0, 1.0]);
        let a = exponents_from_bases(&[2, 3, 4]).unwrap();
        assert!((a.get(1) - 3f64.ln() / 4f64.ln()).abs() < 1e-15);
        assert!((a.get(2) - 2f64.ln() / 3f64.ln()).abs() < 1e-15);
        assert_eq!(
            exponents_from_bases(&[3, 2]).unwrap_err(),
            Error::BasesNotSorted
        );
    }

    #[test]
    fn bowen_weights_examples() {
        let w = bowen_weights_from_bases(&[2, 3, 4]).unwrap();
        assert!((w.get(1) - 0.5).abs() < 1e-15);
        assert_eq!(bowen_weights_from_bases(&[2, 2]).unwrap().as_slice(), &[1.0, 0.0]);
        let l = 2f64.ln() / 3f64.ln();
        assert!(close(
            bowen_weights_from_bases(&[2, 3]).unwrap().as_slice(),
            &[l, 1.0 - l],
            1e-15
        ));
    }

    #[test]
    fn out_of_range_exponent() {
        assert!(matches!(
            Exponents::new(vec![0.5, 1.5]),
            Err(Error::ExponentOutOfRange { index: 2, .. })
        ));
    }

    fn sorted_bases() -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(2u32..40, 2..=5).prop_map(|mut v| {
            v.sort_unstable();
            v
        })
    }

    proptest! {
        #[test]
        fn base_routes_agree(bases in sorted_bases()) {
            let via_a = weights_from_exponents(&exponents_from_bases(&bases).unwrap());
            let direct = bowen_weights_from_bases(&bases).unwrap();
            prop_assert!(close(via_a.as_slice(), direct.as_slice(), 1e-12));
        }

        #[test]
        fn weights_form_a_probability_vector(a in prop::collection::vec(0.0f64..=1.0, 1..6)) {
            let w = weights_from_exponents(&Exponents::new(a.clone()).unwrap());
            prop_assert!(w.as_slice().iter().all(|&x| x >= 0.0));
            prop_assert!((w.as_slice().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            let prod: f64 = a.iter().product();
            prop_assert!((w.get(1) - prod).abs() <= 1e-15);
        }
    }
}
