//! Self-similar construction of the pattern without evaluating any cell value:
//! corner/centre decomposition plus 2×2 dilation for even sides.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::positions::{check_side, pattern, Cell, Pattern};

/// `m = 2^(k+1) + s` with `0 <= s < 2^(k+1)`, and `t = 2^(k+1) - s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decomposition {
    pub m: u32,
    pub s: u32,
    pub t: u32,
    pub k: u32,
}

impl Decomposition {
    /// `2^(k+1)`, the stripped leading bit.
    pub fn lead(&self) -> u32 {
        1 << (self.k + 1)
    }
}

pub fn decompose(m: u32) -> Result<Decomposition> {
    if m < 2 {
        return Err(Error::domain(format!(
            "decomposition needs m >= 2, got {m}"
        )));
    }
    let k = 30 - m.leading_zeros();
    let lead = 1u32 << (k + 1);
    let s = m - lead;
    Ok(Decomposition {
        m,
        s,
        t: lead - s,
        k,
    })
}

/// Replace every cell `(i, j)` by the 2×2 block `[2i-1, 2i] × [2j-1, 2j]`.
pub fn dilate(p: &Pattern) -> Pattern {
    let mut out = Pattern::empty(2 * p.side());
    for c in p.iter() {
        for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            out.insert(Cell::new(2 * c.i - 1 + di, 2 * c.j - 1 + dj))
                .expect("dilated cell stays on the doubled board");
        }
    }
    out
}

/// Memoizing recursive generator.
///
/// Sides 1 and 2 are explicit. A power of two has no low bits to split off
/// (`s = 0`, `t = m`), so it is built as the dilation of half its side; every
/// other side is four corner copies of `P(s)` plus a centre copy of `P(t)`.
/// With `use_doubling` set, every even side goes through the dilation.
#[derive(Debug, Default)]
pub struct RecursiveGenerator {
    pub use_doubling: bool,
    cache: HashMap<u32, Pattern>,
}

impl RecursiveGenerator {
    pub fn new(use_doubling: bool) -> Self {
        RecursiveGenerator {
            use_doubling,
            cache: HashMap::new(),
        }
    }

    pub fn pattern(&mut self, m: u32) -> Result<Pattern> {
        check_side(m, "side")?;
        Ok(self.build(m).clone())
    }

    fn build(&mut self, m: u32) -> &Pattern {
        if !self.cache.contains_key(&m) {
            let p = self.compute(m);
            self.cache.insert(m, p);
        }
        &self.cache[&m]
    }

    fn compute(&mut self, m: u32) -> Pattern {
        match m {
            1 => return Pattern::full(1),
            2 => return Pattern::full(2),
            _ => {}
        }
        if m.is_power_of_two() || (self.use_doubling && m.is_multiple_of(2)) {
            return dilate(self.build(m / 2));
        }
        let d = decompose(m).expect("m >= 3");
        let mut out = Pattern::empty(m);
        let corner = self.build(d.s).clone();
        let off = m - d.s;
        for (dx, dy) in [(0, 0), (off, 0), (0, off), (off, off)] {
            corner.stamp_into(&mut out, dx, dy);
        }
        self.build(d.t).clone().stamp_into(&mut out, d.s, d.s);
        out
    }
}

/// Build `P(m)` recursively with a fresh generator.
pub fn pattern_recursive(m: u32) -> Result<Pattern> {
    RecursiveGenerator::default().pattern(m)
}

/// The four strips between neighbouring corner copies, as
/// `(i_lo, i_hi, j_lo, j_hi)`.
fn side_rectangles(d: &Decomposition) -> Vec<(u32, u32, u32, u32)> {
    let (m, s, lead) = (d.m, d.s, d.lead());
    let mid = (s + 1, lead);
    let low = (1, s);
    let high = (m - s + 1, m);
    let mut rects = Vec::new();
    for band in [low, high] {
        rects.push((mid.0, mid.1, band.0, band.1));
        rects.push((band.0, band.1, mid.0, mid.1));
    }
    rects
}

/// No P-position lies between neighbouring corner copies.
pub fn verify_offdiagonal_empty(m: u32) -> bool {
    let Ok(d) = decompose(m) else {
        return true;
    };
    if d.s == 0 {
        return true;
    }
    let Ok(p) = pattern(m) else {
        return false;
    };
    side_rectangles(&d).into_iter().all(|(i0, i1, j0, j1)| {
        (i0..=i1).all(|i| (j0..=j1).all(|j| !p.contains(Cell::new(i, j))))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_examples() {
        let d = decompose(11).unwrap();
        assert_eq!((d.s, d.t, d.k), (3, 5, 2));
        for p in 1..20 {
            let d = decompose(1 << p).unwrap();
            assert_eq!((d.s, d.t), (0, 1 << p));
        }
        let d = decompose(6).unwrap();
        assert_eq!((d.s, d.t), (2, 2));
        assert!(decompose(1).is_err());
        assert!(decompose(0).is_err());
    }

    #[test]
    fn decomposition_invariants() {
        for m in 2..5000 {
            let d = decompose(m).unwrap();
            assert_eq!(d.lead() + d.s, m);
            assert!(d.s < d.lead());
            assert_eq!(d.s + d.t, d.lead());
            assert_eq!(2 * d.s + d.t, m);
        }
    }

    #[test]
    fn recursive_matches_xor() {
        let mut plain = RecursiveGenerator::new(false);
        let mut doubling = RecursiveGenerator::new(true);
        for m in 1..=200 {
            let expect = pattern(m).unwrap();
            assert_eq!(plain.pattern(m).unwrap(), expect, "m={m}");
            assert_eq!(doubling.pattern(m).unwrap(), expect, "m={m}");
        }
    }

    #[test]
    fn eleven_is_built_from_three_and_five() {
        let p11 = pattern_recursive(11).unwrap();
        let p3 = pattern_recursive(3).unwrap();
        for (i0, j0) in [(1, 1), (9, 1), (1, 9), (9, 9)] {
            assert_eq!(p11.window(i0, j0, 3), p3);
        }
        assert_eq!(p11.window(4, 4, 5), pattern_recursive(5).unwrap());
        assert_eq!(p11.len(), 4 * 5 + 9);
    }

    #[test]
    fn even_sides_are_dilations() {
        for p in 1..=60 {
            assert_eq!(
                dilate(&pattern_recursive(p).unwrap()),
                pattern_recursive(2 * p).unwrap()
            );
        }
        assert_eq!(pattern_recursive(1).unwrap().cells(), vec![Cell::new(1, 1)]);
    }

    #[test]
    fn five_regions_partition_the_pattern() {
        for m in 3..=300 {
            let d = decompose(m).unwrap();
            if d.s == 0 {
                continue;
            }
            let p = pattern(m).unwrap();
            let off = m - d.s;
            let in_box = |c: Cell, i0: u32, j0: u32, size: u32| {
                (i0..i0 + size).contains(&c.i) && (j0..j0 + size).contains(&c.j)
            };
            for c in p.iter() {
                let hits = [(1, 1), (1 + off, 1), (1, 1 + off), (1 + off, 1 + off)]
                    .iter()
                    .filter(|&&(i0, j0)| in_box(c, i0, j0, d.s))
                    .count()
                    + usize::from(in_box(c, d.s + 1, d.s + 1, d.t));
                assert_eq!(hits, 1, "m={m} cell {c}");
            }
        }
    }

    #[test]
    fn off_diagonal_strips_are_empty() {
        assert!(verify_offdiagonal_empty(11));
        assert!(verify_offdiagonal_empty(6));
        assert!(verify_offdiagonal_empty(64));
        for m in 1..=400 {
            assert!(verify_offdiagonal_empty(m), "m={m}");
        }
    }
}
