//! Small numeric helpers shared by the estimator and the optimizer.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// Sequential log-domain sum with Neumaier compensation.
///
/// Terms are given as logarithms; `-inf` terms are ignored. The result only
/// depends on the order of the pushes.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogSum {
    reference: f64,
    sum: f64,
    compensation: f64,
}

impl Default for LogSum {
    fn default() -> Self {
        Self {
            reference: f64::NEG_INFINITY,
            sum: 0.0,
            compensation: 0.0,
        }
    }
}

impl LogSum {
    pub(crate) fn push(&mut self, log_term: f64) {
        if log_term == f64::NEG_INFINITY {
            return;
        }
        if log_term > self.reference {
            let scale = (self.reference - log_term).exp();
            self.sum *= scale;
            self.compensation *= scale;
            self.reference = log_term;
        }
        let x = (log_term - self.reference).exp();
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn ln(&self) -> f64 {
        if self.reference == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.reference + (self.sum + self.compensation).ln()
        }
    }
}

/// `x^a` in the log domain, with an empty sum staying empty even for `a = 0`.
#[inline]
pub(crate) fn pow_log(log_x: f64, a: f64) -> f64 {
    if log_x == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        a * log_x
    }
}

/// Natural log of a big integer; `-inf` for zero.
pub(crate) fn ln_big(x: &BigUint) -> f64 {
    if Zero::is_zero(x) {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Shannon entropy in nats; zero-probability entries contribute nothing.
pub(crate) fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.ln())
        .sum()
}

/// Exact nonnegative counter used by the word-counting dynamic programs.
pub(crate) trait Tally: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// `None` on overflow.
    fn checked_add_assign(&mut self, other: &Self) -> Option<()>;
    /// `self * exp(log_factor)`; exact counters are only ever scaled by 0.
    fn scaled(&self, log_factor: f64) -> Self;
    fn ln(&self) -> f64;
}

impl Tally for u128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    #[inline]
    fn checked_add_assign(&mut self, other: &Self) -> Option<()> {
        *self = self.checked_add(*other)?;
        Some(())
    }
    fn scaled(&self, _: f64) -> Self {
        *self
    }
    fn ln(&self) -> f64 {
        (*self as f64).ln()
    }
}

impl Tally for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn checked_add_assign(&mut self, other: &Self) -> Option<()> {
        *self += other;
        Some(())
    }
    fn scaled(&self, _: f64) -> Self {
        self.clone()
    }
    fn ln(&self) -> f64 {
        ln_big(self)
    }
}

/// A positive weight stored as its logarithm; zero is `-inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LogWeight(pub(crate) f64);

impl Tally for LogWeight {
    fn zero() -> Self {
        LogWeight(f64::NEG_INFINITY)
    }
    fn one() -> Self {
        LogWeight(0.0)
    }
    fn is_zero(&self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
    fn checked_add_assign(&mut self, other: &Self) -> Option<()> {
        let (hi, lo) = if self.0 >= other.0 { (self.0, other.0) } else { (other.0, self.0) };
        if lo != f64::NEG_INFINITY {
            self.0 = hi + (lo - hi).exp().ln_1p();
        } else {
            self.0 = hi;
        }
        Some(())
    }
    fn scaled(&self, log_factor: f64) -> Self {
        LogWeight(pow_log(self.0, 1.0) + log_factor)
    }
    fn ln(&self) -> f64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_matches_direct_sum() {
        let terms = [1.0f64, 2.5, 0.125, 7.0, 3.0];
        let mut s = LogSum::default();
        for t in terms {
            s.push(t.ln());
        }
        let direct: f64 = terms.iter().sum();
        assert!((s.ln() - direct.ln()).abs() < 1e-15);
    }

    #[test]
    fn log_sum_handles_huge_terms() {
        let mut s = LogSum::default();
        s.push(1000.0);
        s.push(1000.0);
        assert!((s.ln() - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(LogSum::default().ln(), f64::NEG_INFINITY);
    }

    #[test]
    fn ln_of_big_integers() {
        let x = BigUint::from(3u32).pow(2000);
        assert!((ln_big(&x) - 2000.0 * 3f64.ln()).abs() < 1e-9);
        assert_eq!(ln_big(&BigUint::from(1u32)), 0.0);
    }

    #[test]
    fn log_weight_addition() {
        let mut w = LogWeight::zero();
        w.checked_add_assign(&LogWeight(2f64.ln())).unwrap();
        w.checked_add_assign(&LogWeight(3f64.ln()).scaled(2f64.ln())).unwrap();
        assert!((w.ln() - 8f64.ln()).abs() < 1e-15);
        assert!(LogWeight::zero().scaled(5.0).is_zero());
    }

    #[test]
    fn empty_stays_empty_under_zero_power() {
        assert_eq!(pow_log(f64::NEG_INFINITY, 0.0), f64::NEG_INFINITY);
        assert_eq!(pow_log(2.0, 0.0), 0.0);
    }
}
