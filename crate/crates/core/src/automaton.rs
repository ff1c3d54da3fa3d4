//! Second-order cellular automaton over GF(2) whose odd cells at time `m`
//! are exactly the P-positions of the `m × m` game:
//!
//! ```text
//! a(i,j; t+2) = a(i,j; t+1) + a(i-1,j; t+1) + a(i,j-1; t+1)
//!             + a(i-1,j-1; t+1) + a(i-1,j-1; t)        (mod 2)
//! ```
//!
//! starting from `a(·; 0) = 0` and `a(·; 1) = δ(1,1)`. Cells with an index
//! below 1 are permanently zero.

use crate::bitgrid::{mask_tail, xor_into, xor_shifted_left_one, BitGrid};
use crate::error::{Error, Result};
use crate::positions::{check_side, Pattern};

/// Two consecutive time slices. `prev` is `a(step)`, `curr` is `a(step + 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaGrid {
    step: u32,
    extent: u32,
    prev: BitGrid,
    curr: BitGrid,
}

impl CaGrid {
    /// Initial slices on an `extent × extent` window.
    pub fn new(extent: u32) -> Result<Self> {
        check_side(extent, "automaton extent")?;
        let e = extent as usize;
        let prev = BitGrid::new(e, e);
        let mut curr = BitGrid::new(e, e);
        curr.set(0, 0, true);
        Ok(CaGrid {
            step: 0,
            extent,
            prev,
            curr,
        })
    }

    pub fn step(&self) -> u32 {
        self.step
    }

    pub fn extent(&self) -> u32 {
        self.extent
    }

    /// `a(step)`
    pub fn prev(&self) -> &BitGrid {
        &self.prev
    }

    /// `a(step + 1)`
    pub fn curr(&self) -> &BitGrid {
        &self.curr
    }

    /// Advance one time step.
    ///
    /// The support of `a(t)` is `[1, t]²`, so producing `a(step + 2)` needs
    /// `extent >= step + 2`; a smaller window would silently drop cells that
    /// later steps depend on.
    pub fn advance(&mut self) -> Result<()> {
        let needed = u64::from(self.step) + 2;
        if u64::from(self.extent) < needed {
            return Err(Error::capacity(
                "automaton steps for this extent",
                needed,
                self.extent.into(),
            ));
        }
        let e = self.extent as usize;
        let mut next = BitGrid::new(e, e);
        for y in 0..e {
            let row = next.row_mut(y);
            let here = self.curr.row(y);
            xor_into(row, here);
            xor_shifted_left_one(row, here);
            if y > 0 {
                let below = self.curr.row(y - 1);
                xor_into(row, below);
                xor_shifted_left_one(row, below);
                xor_shifted_left_one(row, self.prev.row(y - 1));
            }
            mask_tail(row, e);
        }
        self.prev = std::mem::replace(&mut self.curr, next);
        self.step += 1;
        Ok(())
    }

    /// Pure form of [`CaGrid::advance`].
    pub fn step_ca(&self) -> Result<CaGrid> {
        let mut next = self.clone();
        next.advance()?;
        Ok(next)
    }
}

/// P-positions of the `m × m` game read off the automaton at time `m`.
pub fn ca_pattern(m: u32) -> Result<Pattern> {
    let mut grid = CaGrid::new(m)?;
    for _ in 1..m {
        grid.advance()?;
    }
    Ok(Pattern::from_grid(grid.curr))
}

/// Run the automaton to time `m`, handing each `a(t)` for `t = 1..=m` to `frame`.
pub fn trace(m: u32, mut frame: impl FnMut(u32, &BitGrid)) -> Result<()> {
    let mut grid = CaGrid::new(m)?;
    frame(1, grid.curr());
    for t in 2..=m {
        grid.advance()?;
        frame(t, grid.curr());
    }
    Ok(())
}

/// The XOR relations the automaton's correctness rests on, for positive
/// `a`, `b` with `u` the 2-adic valuation:
///
/// * `a ^ b = ((a-1) ^ b) + 1` when `u(a) < u(b)`,
/// * `a ^ b = (a ^ (b-1)) + 1` when `u(a) > u(b)`,
/// * `a ^ b = (a-1) ^ (b-1)` when `u(a) = u(b)`,
/// * `u(a) = u(b)` exactly when `a ^ (b-1) = (a-1) ^ b`.
pub fn xor_step_identities_hold(a: u64, b: u64) -> bool {
    if a == 0 || b == 0 {
        return false;
    }
    let (ua, ub) = (a.trailing_zeros(), b.trailing_zeros());
    let case = match ua.cmp(&ub) {
        std::cmp::Ordering::Less => a ^ b == ((a - 1) ^ b) + 1,
        std::cmp::Ordering::Greater => a ^ b == (a ^ (b - 1)) + 1,
        std::cmp::Ordering::Equal => a ^ b == (a - 1) ^ (b - 1),
    };
    case && ((ua == ub) == ((a ^ (b - 1)) == ((a - 1) ^ b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::positions::{pattern, Cell};

    /// Direct integer evaluation of the recurrence on a window one larger
    /// than needed, reduced mod 2 only at the end. Wrapping adds keep parity.
    fn integer_ca(m: u32) -> Vec<Vec<u64>> {
        let e = m as usize + 2;
        let mut prev = vec![vec![0u64; e]; e];
        let mut curr = vec![vec![0u64; e]; e];
        curr[1][1] = 1;
        for _ in 1..m {
            let mut next = vec![vec![0u64; e]; e];
            for i in 1..e {
                for j in 1..e {
                    next[i][j] = curr[i][j]
                        .wrapping_add(curr[i - 1][j])
                        .wrapping_add(curr[i][j - 1])
                        .wrapping_add(curr[i - 1][j - 1])
                        .wrapping_add(prev[i - 1][j - 1]);
                }
            }
            prev = curr;
            curr = next;
        }
        curr
    }

    #[test]
    fn initial_state() {
        let g = CaGrid::new(5).unwrap();
        assert_eq!(g.step(), 0);
        assert!(g.prev().is_empty());
        assert_eq!(g.curr().iter_ones().collect::<Vec<_>>(), vec![(0, 0)]);
    }

    #[test]
    fn first_steps() {
        let g2 = CaGrid::new(3).unwrap().step_ca().unwrap();
        let ones: Vec<_> = g2.curr().iter_ones().collect();
        assert_eq!(ones, vec![(0, 0), (1, 0), (0, 1), (1, 1)]);
        assert_eq!(ca_pattern(2).unwrap(), pattern(2).unwrap());
        assert_eq!(ca_pattern(3).unwrap(), pattern(3).unwrap());
        assert_eq!(ca_pattern(3).unwrap().len(), 5);
        assert_eq!(ca_pattern(1).unwrap().cells(), vec![Cell::new(1, 1)]);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn bit_kernel_matches_integer_recurrence() {
        for m in 1..=40u32 {
            let ints = integer_ca(m);
            let p = ca_pattern(m).unwrap();
            for i in 1..ints.len() {
                for j in 1..ints.len() {
                    let odd = ints[i][j] % 2 == 1;
                    if i as u32 > m || j as u32 > m {
                        assert!(!odd, "support escaped [1,{m}]^2 at ({i},{j})");
                    } else {
                        assert_eq!(odd, p.contains(Cell::new(i as u32, j as u32)));
                    }
                }
            }
        }
    }

    #[test]
    fn matches_xor_pattern() {
        for m in 1..=130 {
            assert_eq!(ca_pattern(m).unwrap(), pattern(m).unwrap(), "m={m}");
        }
        assert_eq!(ca_pattern(11).unwrap(), pattern(11).unwrap());
        for k in 0..8 {
            let p = ca_pattern(1 << k).unwrap();
            assert_eq!(p.len(), 4u64.pow(k));
        }
    }

    #[test]
    fn support_bound() {
        let mut g = CaGrid::new(70).unwrap();
        for _ in 0..68 {
            g.advance().unwrap();
            let t = g.step() + 1;
            assert!(g.curr().iter_ones().all(|(x, y)| x < t as usize && y < t as usize));
        }
    }

    #[test]
    fn extent_too_small() {
        let mut g = CaGrid::new(3).unwrap();
        g.advance().unwrap();
        g.advance().unwrap();
        assert!(matches!(g.advance(), Err(Error::Capacity { .. })));
        assert!(ca_pattern(0).is_err());
    }

    #[test]
    fn xor_identities() {
        for a in 1..=200 {
            for b in 1..=200 {
                assert!(xor_step_identities_hold(a, b), "{a} {b}");
            }
        }
        assert!(!xor_step_identities_hold(0, 3));
    }

    #[test]
    fn trace_frames() {
        let mut seen = Vec::new();
        trace(6, |t, grid| seen.push((t, grid.count_ones()))).unwrap();
        let counts: Vec<_> = (1..=6).map(|m| pattern(m).unwrap().len()).collect();
        assert_eq!(seen.iter().map(|s| s.1).collect::<Vec<_>>(), counts);
    }
}
