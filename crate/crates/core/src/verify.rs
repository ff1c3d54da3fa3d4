//! Invariant suites run by `choc verify` and the acceptance tests. Each
//! suite counts the individual checks it made and the ones that failed.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::automaton::{ca_pattern, xor_step_identities_hold};
use crate::enumeration::{closed, sum_all, sum_below_power, sum_odd, GTable, MAX_ORDER};
use crate::error::{Error, Result};
use crate::game::{GameState, Outcome, Player, Solver};
use crate::positions::{cell_value, is_p_position, pattern, Cell};
use crate::recursion::{dilate, verify_offdiagonal_empty, RecursiveGenerator};
use crate::sierpinski::{
    check_corner_structure, check_half_congruence, fit_similarity, integer_section, refine,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    /// Brute-force solver against the XOR criterion, every cell of `m ≤ max`.
    Nim,
    /// Dilation and odd-side cell identities, `m ≤ max`.
    Doubling,
    /// Recursive generator and empty side strips, `m ≤ max`.
    Decomposition,
    /// Counting identities for orders `n ≤ max`.
    Sums,
    /// Automaton against the XOR pattern for `m ≤ max`, plus the XOR step
    /// identities for `a, b ≤ 2 max`.
    Ca,
    /// Section counts, similarity, refinement, corner structure, `n ≤ max`.
    Section,
    /// Half-level congruence, `n ≤ max`.
    Half,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Nim,
        Suite::Doubling,
        Suite::Decomposition,
        Suite::Sums,
        Suite::Ca,
        Suite::Section,
        Suite::Half,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Nim => "nim",
            Suite::Doubling => "doubling",
            Suite::Decomposition => "decomposition",
            Suite::Sums => "sums",
            Suite::Ca => "ca",
            Suite::Section => "section",
            Suite::Half => "half",
        }
    }

    pub fn default_bound(self) -> u32 {
        match self {
            Suite::Nim => 12,
            Suite::Doubling | Suite::Decomposition | Suite::Ca => 256,
            Suite::Sums => 16,
            Suite::Section | Suite::Half => 6,
        }
    }

    pub fn max_bound(self) -> u32 {
        match self {
            Suite::Nim => 64,
            Suite::Doubling | Suite::Decomposition | Suite::Ca => 4096,
            Suite::Sums => MAX_ORDER,
            Suite::Section | Suite::Half => 10,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub bound: u32,
    pub checked: u64,
    pub failed: u64,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    fn new(suite: Suite, bound: u32) -> Self {
        SuiteReport {
            suite,
            bound,
            checked: 0,
            failed: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "suite={} checked={} failed={}",
            self.suite, self.checked, self.failed
        )
    }
}

/// Run one suite up to `bound` (its default when `None`).
pub fn run(suite: Suite, bound: Option<u32>) -> Result<SuiteReport> {
    let bound = bound.unwrap_or_else(|| suite.default_bound());
    if bound < 1 {
        return Err(Error::domain("suite bound must be at least 1"));
    }
    if bound > suite.max_bound() {
        return Err(Error::capacity("suite bound", bound.into(), suite.max_bound().into()));
    }
    let mut r = SuiteReport::new(suite, bound);
    match suite {
        Suite::Nim => nim(&mut r)?,
        Suite::Doubling => doubling(&mut r)?,
        Suite::Decomposition => decomposition(&mut r)?,
        Suite::Sums => sums(&mut r)?,
        Suite::Ca => ca(&mut r)?,
        Suite::Section => sections(&mut r)?,
        Suite::Half => half(&mut r),
    }
    Ok(r)
}

fn nim(r: &mut SuiteReport) -> Result<()> {
    let mut solver = Solver::new(r.bound);
    for m in 1..=r.bound {
        for i in 1..=m {
            for j in 1..=m {
                let s = GameState::new(m, m, Cell::new(i, j), Player::Human)?;
                let solved = solver.solve(&s)? == Outcome::P;
                let xor = is_p_position(i, j, m)?;
                r.check(solved == xor, || format!("m={m} cell ({i},{j}): solver P={solved}, xor P={xor}"));
            }
        }
    }
    Ok(())
}

/// 0 for a P-position, 1 otherwise.
fn v(m: u32, i: u32, j: u32) -> Result<u32> {
    Ok(u32::from(cell_value(i, j, m, m)? != 0))
}

fn doubling(r: &mut SuiteReport) -> Result<()> {
    for m in 1..=r.bound {
        for i in 1..=m {
            for j in 1..=m {
                let base = v(m, i, j)?;
                for (e, d) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                    let got = v(2 * m, 2 * i - e, 2 * j - d)?;
                    r.check(got == base, || {
                        format!("v_{}({},{}) != v_{m}({i},{j})", 2 * m, 2 * i - e, 2 * j - d)
                    });
                }
                let odd = v(2 * m + 1, 2 * i, 2 * j)?;
                r.check(odd == base, || format!("v_{}({},{}) != v_{m}({i},{j})", 2 * m + 1, 2 * i, 2 * j));
            }
        }
        let n = m + 1;
        for i in 1..=n {
            for j in 1..=n {
                let got = v(2 * m + 1, 2 * i - 1, 2 * j - 1)?;
                r.check(got == v(n, i, j)?, || {
                    format!("v_{}({},{}) != v_{n}({i},{j})", 2 * m + 1, 2 * i - 1, 2 * j - 1)
                });
                if j <= m {
                    let cross = v(2 * m + 1, 2 * i - 1, 2 * j)?;
                    r.check(cross == 1, || format!("v_{}({},{}) = 0", 2 * m + 1, 2 * i - 1, 2 * j));
                }
                if i <= m {
                    let cross = v(2 * m + 1, 2 * i, 2 * j - 1)?;
                    r.check(cross == 1, || format!("v_{}({},{}) = 0", 2 * m + 1, 2 * i, 2 * j - 1));
                }
            }
        }
        r.check(dilate(&pattern(m)?) == pattern(2 * m)?, || format!("P({}) is not the dilation of P({m})", 2 * m));
    }
    Ok(())
}

fn decomposition(r: &mut SuiteReport) -> Result<()> {
    let mut generator = RecursiveGenerator::default();
    for m in 1..=r.bound {
        let same = generator.pattern(m)? == pattern(m)?;
        r.check(same, || format!("recursive P({m}) differs from the XOR pattern"));
        r.check(verify_offdiagonal_empty(m), || format!("side strips of P({m}) are not empty"));
    }
    Ok(())
}

fn sums(r: &mut SuiteReport) -> Result<()> {
    let mut table = GTable::new();
    for n in 1..=r.bound {
        r.check(sum_odd(n)? == closed::odd_sum(n), || format!("odd-index sum, n={n}"));
        r.check(sum_all(n)? == closed::total_sum(n), || format!("total sum, n={n}"));
        let below = sum_below_power(n)?;
        r.check(below == closed::below_power_sum(n), || format!("sum below 2^{n}"));
        let lhs = table.g(1 << n)? + below * 2u32;
        r.check(lhs == closed::six_pow(n), || format!("g(2^{n}) + 2 sum != 6^{n}"));
    }
    let top = 1u32 << r.bound.min(10);
    for m in 1..=top {
        let count = BigUint::from(pattern(m)?.len());
        r.check(table.g(m.into())? == count, || format!("g({m}) != |P({m})|"));
    }
    Ok(())
}

fn ca(r: &mut SuiteReport) -> Result<()> {
    for m in 1..=r.bound {
        r.check(ca_pattern(m)? == pattern(m)?, || format!("automaton at time {m} differs from P({m})"));
    }
    let top = 2 * u64::from(r.bound);
    for a in 1..=top {
        for b in 1..=top {
            r.check(xor_step_identities_hold(a, b), || format!("XOR step identity fails at a={a}, b={b}"));
        }
    }
    Ok(())
}

fn sections(r: &mut SuiteReport) -> Result<()> {
    let mut table = GTable::new();
    for n in 0..=r.bound {
        for m in 1..=(1i64 << n) {
            let h = integer_section(n, m)?;
            let g = table.g(m as u64)?;
            r.check(BigUint::from(h.len()) == g, || format!("|H({n},{m})| = {} != g({m}) = {g}", h.len()));
            let fit = fit_similarity(&h, &pattern(m as u32)?);
            r.check(fit.is_ok(), || format!("H({n},{m}) vs P({m}): {}", fit.unwrap_err()));
            let fine = integer_section(n + 1, 2 * m)?;
            r.check(refine(&h) == fine, || format!("H({},{}) is not the refinement of H({n},{m})", n + 1, 2 * m));
            if m >= 2 {
                r.check(check_corner_structure(n, m), || format!("corner structure of H({n},{m})"));
            }
        }
    }
    Ok(())
}

fn half(r: &mut SuiteReport) {
    for n in 1..=r.bound {
        for m in 1..(1i64 << n) {
            r.check(check_half_congruence(n, m), || format!("H({n},{m}+1/2) vs half of H({n},{})", 2 * m + 1));
        }
    }
}
