//! The playable game: bar states, cuts, the exhaustive solver used as an
//! independent oracle, and the optimal engine.
//!
//! A bar of width `w` and height `h` with the poison at `(i, j)` is the
//! four-pile Nim position `(i-1, j-1, w-i, h-j)`: every cut shortens exactly
//! one of those four distances.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::positions::{check_side, Cell};

/// Default side bound for the brute-force solver (area bound is its square).
pub const DEFAULT_SOLVE_SIDE: u32 = 64;

/// Environment variable overriding [`DEFAULT_SOLVE_SIDE`].
pub const SOLVE_BOUND_ENV: &str = "CHOC_MAX_SOLVE";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Human,
    Engine,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Human => Player::Engine,
            Player::Engine => Player::Human,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// Cut between columns `cut` and `cut + 1`.
    Vertical,
    /// Cut between rows `cut` and `cut + 1`.
    Horizontal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Move {
    pub axis: Axis,
    pub cut: u32,
}

impl Move {
    pub const fn vertical(cut: u32) -> Self {
        Move {
            axis: Axis::Vertical,
            cut,
        }
    }

    pub const fn horizontal(cut: u32) -> Self {
        Move {
            axis: Axis::Horizontal,
            cut,
        }
    }
}

impl std::fmt::Display for Move {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.axis {
            Axis::Vertical => write!(f, "vertical cut {}", self.cut),
            Axis::Horizontal => write!(f, "horizontal cut {}", self.cut),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    /// The player who just moved wins.
    P,
    /// The player to move wins.
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameState {
    pub w: u32,
    pub h: u32,
    pub poison: Cell,
    pub mover: Player,
}

impl GameState {
    pub fn new(w: u32, h: u32, poison: Cell, mover: Player) -> Result<Self> {
        check_side(w, "bar width")?;
        check_side(h, "bar height")?;
        if !(1..=w).contains(&poison.i) || !(1..=h).contains(&poison.j) {
            return Err(Error::domain(format!(
                "poison {poison} is outside the {w}x{h} bar"
            )));
        }
        Ok(GameState {
            w,
            h,
            poison,
            mover,
        })
    }

    /// Distances from the poison to the left, bottom, right and top edges.
    pub fn piles(&self) -> [u32; 4] {
        let Cell { i, j } = self.poison;
        [i - 1, j - 1, self.w - i, self.h - j]
    }

    /// XOR of the four piles.
    pub fn nim_value(&self) -> u32 {
        self.piles().iter().fold(0, |acc, p| acc ^ p)
    }

    /// A `1 × 1` bar: the mover has to eat the poison.
    pub fn is_terminal(&self) -> bool {
        self.w == 1 && self.h == 1
    }

    /// Winner once the game is over.
    pub fn winner(&self) -> Option<Player> {
        self.is_terminal().then(|| self.mover.other())
    }

    /// Every vertical cut `1..w`, then every horizontal cut `1..h`.
    pub fn legal_moves(&self) -> Vec<Move> {
        (1..self.w)
            .map(Move::vertical)
            .chain((1..self.h).map(Move::horizontal))
            .collect()
    }

    pub fn is_legal(&self, mv: Move) -> bool {
        let bound = match mv.axis {
            Axis::Vertical => self.w,
            Axis::Horizontal => self.h,
        };
        (1..bound).contains(&mv.cut)
    }

    /// Break the bar and hand the piece holding the poison to the opponent.
    pub fn apply_move(&self, mv: Move) -> Result<GameState> {
        if !self.is_legal(mv) {
            let (dim, bound) = match mv.axis {
                Axis::Vertical => ("width", self.w),
                Axis::Horizontal => ("height", self.h),
            };
            return Err(Error::IllegalMove {
                mv,
                reason: format!("cut must lie in 1..{bound} for a bar of {dim} {bound}"),
            });
        }
        Ok(self.apply_unchecked(mv))
    }

    fn apply_unchecked(&self, mv: Move) -> GameState {
        let mut next = *self;
        let k = mv.cut;
        match mv.axis {
            Axis::Vertical if self.poison.i <= k => next.w = k,
            Axis::Vertical => {
                next.w = self.w - k;
                next.poison.i -= k;
            }
            Axis::Horizontal if self.poison.j <= k => next.h = k,
            Axis::Horizontal => {
                next.h = self.h - k;
                next.poison.j -= k;
            }
        }
        next.mover = self.mover.other();
        next
    }
}

fn sorted_piles(s: &GameState) -> [u32; 4] {
    let mut p = s.piles();
    p.sort_unstable();
    p
}

/// Nim-values around one move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoveAnalysis {
    pub before: u32,
    pub after: u32,
    /// Index into [`GameState::piles`] of the pile the move shortens.
    pub pile: usize,
    pub old_pile: u32,
    pub new_pile: u32,
}

pub fn analyze_move(s: &GameState, mv: Move) -> Result<MoveAnalysis> {
    let next = s.apply_move(mv)?;
    let (old, new) = (s.piles(), next.piles());
    let pile = (0..4)
        .find(|&k| old[k] != new[k])
        .expect("a legal cut changes exactly one pile");
    let analysis = MoveAnalysis {
        before: s.nim_value(),
        after: next.nim_value(),
        pile,
        old_pile: old[pile],
        new_pile: new[pile],
    };
    debug_assert_eq!(
        analysis.after,
        analysis.before ^ analysis.old_pile ^ analysis.new_pile
    );
    Ok(analysis)
}

/// The cut that shrinks pile `index` of `s` to `target`.
fn move_reducing(s: &GameState, index: usize, target: u32) -> Move {
    let Cell { i, j } = s.poison;
    match index {
        0 => Move::vertical(i - 1 - target),
        1 => Move::horizontal(j - 1 - target),
        2 => Move::vertical(i + target),
        3 => Move::horizontal(j + target),
        _ => unreachable!("four piles"),
    }
}

/// The engine's move.
///
/// From a nonzero nim-value `X`, take the first pile having `X`'s top bit set
/// and shrink it to `pile ^ X`, which leaves nim-value zero. From `X = 0`
/// there is no winning move; the engine then shortens the largest pile by
/// one, preferring vertical cuts and then lower cut indices.
pub fn best_move(s: &GameState) -> Result<Move> {
    if s.is_terminal() {
        return Err(Error::NoMove);
    }
    let piles = s.piles();
    let x = s.nim_value();
    if x != 0 {
        let top = 1u32 << (31 - x.leading_zeros());
        let index = (0..4)
            .find(|&k| piles[k] & top != 0)
            .expect("some pile carries the top bit of the nim-sum");
        return Ok(move_reducing(s, index, piles[index] ^ x));
    }
    let largest = *piles.iter().max().expect("four piles");
    let mv = (0..4)
        .filter(|&k| piles[k] == largest)
        .map(|k| move_reducing(s, k, largest - 1))
        .min()
        .expect("a non-terminal bar has a nonzero pile");
    Ok(mv)
}

/// Memoizing backward-induction solver. Knows nothing about XOR: a state is
/// P iff every legal cut leads to an N state, and the `1 × 1` bar is P.
///
/// Positions are keyed by their sorted pile tuple, since the game is
/// four-pile Nim and Nim does not care about pile order.
#[derive(Debug, Clone)]
pub struct Solver {
    max_side: u32,
    memo: HashMap<[u32; 4], bool>,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new(configured_solve_side())
    }
}

/// [`DEFAULT_SOLVE_SIDE`] unless overridden by `CHOC_MAX_SOLVE`.
pub fn configured_solve_side() -> u32 {
    std::env::var(SOLVE_BOUND_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&v: &u32| v >= 1)
        .unwrap_or(DEFAULT_SOLVE_SIDE)
}

impl Solver {
    /// Accepts bars with `w * h <= max_side^2`.
    pub fn new(max_side: u32) -> Self {
        Solver {
            max_side,
            memo: HashMap::new(),
        }
    }

    pub fn solve(&mut self, s: &GameState) -> Result<Outcome> {
        let area = u64::from(s.w) * u64::from(s.h);
        let limit = u64::from(self.max_side).pow(2);
        if area > limit {
            return Err(Error::capacity("bar area", area, limit));
        }
        Ok(if self.is_p(s) { Outcome::P } else { Outcome::N })
    }

    fn is_p(&mut self, s: &GameState) -> bool {
        let key = sorted_piles(s);
        if let Some(&p) = self.memo.get(&key) {
            return p;
        }
        let p = s
            .legal_moves()
            .into_iter()
            .all(|mv| !self.is_p(&s.apply_unchecked(mv)));
        self.memo.insert(key, p);
        p
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }
}

/// Classify `s` with a fresh [`Solver`].
pub fn solve(s: &GameState) -> Result<Outcome> {
    Solver::default().solve(s)
}
