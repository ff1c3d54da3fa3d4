//! Exact counts of P-positions and their partial sums.
//!
//! Everything here is arbitrary precision. The sums are accumulated from the
//! recurrence table; the closed forms exist only to be compared against.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest order accepted by the sum functions (the table holds `2^n` values).
pub const MAX_ORDER: u32 = 20;

/// `g(m)` for `m = 1..=len`, filled from
/// `g(1) = 1`, `g(2m) = 4 g(m)`, `g(2m + 1) = g(m) + g(m + 1)`.
#[derive(Debug, Clone)]
pub struct GTable {
    // values[m] = g(m); values[0] is a placeholder.
    values: Vec<BigUint>,
}

impl Default for GTable {
    fn default() -> Self {
        GTable::new()
    }
}

impl GTable {
    pub fn new() -> Self {
        GTable {
            values: vec![BigUint::zero(), BigUint::one()],
        }
    }

    /// Largest `m` currently tabulated.
    pub fn len(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn extend_to(&mut self, m: u64) {
        let m = m as usize;
        self.values.reserve(m.saturating_sub(self.values.len() - 1));
        while self.values.len() <= m {
            let k = self.values.len();
            let half = k / 2;
            let v = if k.is_multiple_of(2) {
                &self.values[half] * 4u32
            } else {
                &self.values[half] + &self.values[half + 1]
            };
            self.values.push(v);
        }
    }

    pub fn g(&mut self, m: u64) -> Result<BigUint> {
        check_positive(m, "m")?;
        self.extend_to(m);
        Ok(self.values[m as usize].clone())
    }

    /// `g(lo) + ... + g(hi)`, empty when `hi < lo`.
    pub fn range_sum(&mut self, lo: u64, hi: u64) -> BigUint {
        if hi < lo {
            return BigUint::zero();
        }
        self.extend_to(hi);
        self.values[lo as usize..=hi as usize].iter().sum()
    }
}

fn check_positive(x: u64, what: &str) -> Result<()> {
    if x < 1 {
        return Err(Error::domain(format!("{what} must be at least 1, got {x}")));
    }
    Ok(())
}

fn check_order(n: u32) -> Result<()> {
    check_positive(n.into(), "order")?;
    if n > MAX_ORDER {
        return Err(Error::capacity("order", n.into(), MAX_ORDER.into()));
    }
    Ok(())
}

/// Number of P-positions of the `m × m` game.
pub fn g(m: u64) -> Result<BigUint> {
    check_positive(m, "m")?;
    // Walk the halving chain instead of filling a table up to m.
    Ok(g_chain(m).0)
}

/// `(g(m), g(m + 1))` by halving.
fn g_chain(m: u64) -> (BigUint, BigUint) {
    if m == 1 {
        return (BigUint::one(), BigUint::from(4u32));
    }
    let (a, b) = g_chain(m / 2);
    if m.is_multiple_of(2) {
        // g(2k) = 4 g(k), g(2k+1) = g(k) + g(k+1)
        let even = &a * 4u32;
        let odd = a + &b;
        (even, odd)
    } else {
        // g(2k+1) = g(k) + g(k+1), g(2k+2) = 4 g(k+1)
        let odd = a + &b;
        (odd, b * 4u32)
    }
}

/// 2-adic valuation: largest `e` with `2^e | x`.
pub fn u(x: u64) -> Result<u32> {
    check_positive(x, "x")?;
    Ok(x.trailing_zeros())
}

/// `g(1) + g(3) + ... + g(2^n - 1)`.
pub fn sum_odd(n: u32) -> Result<BigUint> {
    check_order(n)?;
    let mut table = GTable::new();
    let half = 1u64 << (n - 1);
    table.extend_to(2 * half - 1);
    Ok((1..=half).map(|m| table.values[(2 * m - 1) as usize].clone()).sum())
}

/// `g(1) + ... + g(2^n)`.
pub fn sum_all(n: u32) -> Result<BigUint> {
    check_order(n)?;
    Ok(GTable::new().range_sum(1, 1 << n))
}

/// `g(1) + ... + g(2^k - 1)`.
pub fn sum_below_power(k: u32) -> Result<BigUint> {
    check_order(k)?;
    Ok(GTable::new().range_sum(1, (1 << k) - 1))
}

/// Closed forms the sums are checked against.
pub mod closed {
    use num_bigint::BigUint;

    fn pow(base: u32, e: u32) -> BigUint {
        BigUint::from(base).pow(e)
    }

    /// `6^(n-1)`
    pub fn odd_sum(n: u32) -> BigUint {
        pow(6, n - 1)
    }

    /// `(4^n + 6^n) / 2`
    pub fn total_sum(n: u32) -> BigUint {
        (pow(4, n) + pow(6, n)) / 2u32
    }

    /// `2^(k-1) (3^k - 2^k)`
    pub fn below_power_sum(k: u32) -> BigUint {
        pow(2, k - 1) * (pow(3, k) - pow(2, k))
    }

    /// `6^n`, the value of `g(2^n) + 2 (g(1) + ... + g(2^n - 1))`.
    pub fn six_pow(n: u32) -> BigUint {
        pow(6, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::positions::pattern;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn g_examples() {
        assert_eq!(g(1).unwrap(), big(1));
        for n in 0..40u32 {
            assert_eq!(g(1 << n).unwrap(), BigUint::from(4u32).pow(n));
        }
        assert_eq!(g(3).unwrap(), big(5));
        assert_eq!(g(11).unwrap(), big(4 * 5) + g(5).unwrap());
        assert_eq!(g(11).unwrap(), big(pattern(11).unwrap().len()));
        assert!(g(0).is_err());
    }

    #[test]
    fn table_and_chain_agree() {
        let mut t = GTable::new();
        for m in 1..3000 {
            assert_eq!(t.g(m).unwrap(), g(m).unwrap(), "m={m}");
        }
    }

    #[test]
    fn g_counts_the_pattern() {
        for m in 1..=300u32 {
            assert_eq!(g(m.into()).unwrap(), big(pattern(m).unwrap().len()));
        }
    }

    #[test]
    fn valuation() {
        assert_eq!(u(1), Ok(0));
        assert_eq!(u(8), Ok(3));
        assert_eq!(u(12), Ok(2));
        assert!(u(0).is_err());
    }

    #[test]
    fn sum_examples() {
        assert_eq!(sum_odd(1).unwrap(), big(1));
        // g(1) + g(3) + g(5) + g(7), from pattern counts
        let from_patterns: u64 = [1, 3, 5, 7].iter().map(|&m| pattern(m).unwrap().len()).sum();
        assert_eq!(from_patterns, 36);
        assert_eq!(sum_odd(3).unwrap(), big(36));
        assert_eq!(sum_odd(10).unwrap(), big(10_077_696));
        assert_eq!(sum_all(1).unwrap(), big(5));
        assert_eq!(sum_all(2).unwrap(), big(26));
        // Counted directly from the patterns: the recurrence agrees.
        let counted: u64 = (1..=256).map(|m| pattern(m).unwrap().len()).sum();
        assert_eq!(counted, 872_576);
        assert_eq!(sum_all(8).unwrap(), big(872_576));
        assert!(sum_all(0).is_err());
        assert!(matches!(sum_all(MAX_ORDER + 1), Err(Error::Capacity { .. })));
    }

    #[test]
    fn closed_forms() {
        for n in 1..=14 {
            assert_eq!(sum_odd(n).unwrap(), closed::odd_sum(n));
            assert_eq!(sum_all(n).unwrap(), closed::total_sum(n));
            assert_eq!(sum_below_power(n).unwrap(), closed::below_power_sum(n));
            let lhs = g(1 << n).unwrap() + sum_below_power(n).unwrap() * 2u32;
            assert_eq!(lhs, closed::six_pow(n));
        }
    }
}
