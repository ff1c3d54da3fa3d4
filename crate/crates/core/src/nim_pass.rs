//! Four-pile Nim with a single shared pass, classified by brute force and
//! laid over the board of the square game.
//!
//! The pass may be used once per game by either player and never from the
//! terminal position. Cell `(i, j)` of the `m × m` board corresponds to the
//! piles `(i-1, j-1, m-i, m-j)`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::Outcome;
use crate::positions::{check_side, pattern, Cell, Pattern};

/// Largest pile the table solver accepts.
pub const MAX_PILE: u32 = 64;

/// Largest board side for [`overlay`].
pub const MAX_OVERLAY_SIDE: u32 = MAX_PILE;

/// Largest pile for [`game_graph`].
pub const MAX_GRAPH_PILE: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PassState {
    piles: [u32; 4],
    pub pass_available: bool,
}

impl PassState {
    pub fn new(mut piles: [u32; 4], pass_available: bool) -> Self {
        piles.sort_unstable();
        PassState {
            piles,
            pass_available,
        }
    }

    /// Piles in ascending order.
    pub fn piles(&self) -> [u32; 4] {
        self.piles
    }

    pub fn is_terminal(&self) -> bool {
        self.piles == [0; 4]
    }

    /// Every single-pile reduction, then the pass if it is still available.
    pub fn successors(&self) -> Vec<(PassState, bool)> {
        let mut out = Vec::new();
        for k in 0..4 {
            if k > 0 && self.piles[k] == self.piles[k - 1] {
                continue;
            }
            for v in 0..self.piles[k] {
                let mut p = self.piles;
                p[k] = v;
                out.push((PassState::new(p, self.pass_available), false));
            }
        }
        if self.pass_available && !self.is_terminal() {
            out.push((PassState::new(self.piles, false), true));
        }
        out
    }
}

/// Retrograde table of every sorted pile tuple up to a bound, for both
/// values of the pass flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassTable {
    bound: u32,
    // bit 0: P without pass, bit 1: P with pass; indexed by sorted piles
    cells: Vec<u8>,
}

const P_PLAIN: u8 = 1;
const P_PASS: u8 = 2;

impl PassTable {
    pub fn build(bound: u32) -> Result<Self> {
        if bound > MAX_PILE {
            return Err(Error::capacity("pile size", bound.into(), MAX_PILE.into()));
        }
        let side = bound as usize + 1;
        let mut table = PassTable {
            bound,
            cells: vec![0; side.pow(4)],
        };
        // Lexicographic order on sorted tuples is a topological order: any
        // move lowers one pile, and the re-sorted result is smaller.
        for a in 0..=bound {
            for b in a..=bound {
                for c in b..=bound {
                    for d in c..=bound {
                        let piles = [a, b, c, d];
                        let mut bits = 0;
                        if table.all_moves_lose(piles, false) {
                            bits |= P_PLAIN;
                        }
                        let idx = table.index(piles);
                        table.cells[idx] = bits;
                        let pass_loses = piles == [0; 4] || bits & P_PLAIN == 0;
                        if pass_loses && table.all_moves_lose(piles, true) {
                            table.cells[idx] |= P_PASS;
                        }
                    }
                }
            }
        }
        Ok(table)
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    fn index(&self, p: [u32; 4]) -> usize {
        let side = self.bound as usize + 1;
        p.iter().fold(0, |acc, &x| acc * side + x as usize)
    }

    fn is_p_sorted(&self, p: [u32; 4], pass: bool) -> bool {
        let bit = if pass { P_PASS } else { P_PLAIN };
        self.cells[self.index(p)] & bit != 0
    }

    /// Every pile reduction from `piles` reaches an N position.
    fn all_moves_lose(&self, piles: [u32; 4], pass: bool) -> bool {
        (0..4).all(|k| {
            (0..piles[k]).all(|v| {
                let mut next = piles;
                next[k] = v;
                next.sort_unstable();
                !self.is_p_sorted(next, pass)
            })
        })
    }

    pub fn classify(&self, s: &PassState) -> Result<Outcome> {
        let top = s.piles[3];
        if top > self.bound {
            return Err(Error::capacity("pile size", top.into(), self.bound.into()));
        }
        Ok(if self.is_p_sorted(s.piles, s.pass_available) {
            Outcome::P
        } else {
            Outcome::N
        })
    }
}

/// Classify one state with a table just large enough for it.
pub fn solve_pass(s: &PassState) -> Result<Outcome> {
    PassTable::build(s.piles[3])?.classify(s)
}

/// Plain-Nim P-positions (blue) and with-pass P-positions (red) on the
/// `m × m` board.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlayPattern {
    pub m: u32,
    pub blue: Pattern,
    pub red: Pattern,
}

pub fn board_piles(c: Cell, m: u32) -> [u32; 4] {
    [c.i - 1, c.j - 1, m - c.i, m - c.j]
}

pub fn overlay(m: u32) -> Result<OverlayPattern> {
    check_side(m, "side")?;
    if m > MAX_OVERLAY_SIDE {
        return Err(Error::capacity("overlay side", m.into(), MAX_OVERLAY_SIDE.into()));
    }
    overlay_with(&PassTable::build(m - 1)?, m)
}

/// Overlay computed from an existing table (which must cover piles `< m`).
pub fn overlay_with(table: &PassTable, m: u32) -> Result<OverlayPattern> {
    check_side(m, "side")?;
    let mut red = Pattern::empty(m);
    for i in 1..=m {
        for j in 1..=m {
            let c = Cell::new(i, j);
            let s = PassState::new(board_piles(c, m), true);
            if table.classify(&s)? == Outcome::P {
                red.insert(c)?;
            }
        }
    }
    Ok(OverlayPattern {
        m,
        blue: pattern(m)?,
        red,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeKind {
    Take,
    Pass,
}

/// Every state reachable from a start position, with its classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameGraph {
    pub nodes: Vec<(PassState, Outcome)>,
    pub edges: Vec<(usize, usize, EdgeKind)>,
}

pub fn game_graph(start: PassState) -> Result<GameGraph> {
    let top = start.piles[3];
    if top > MAX_GRAPH_PILE {
        return Err(Error::capacity("graph pile size", top.into(), MAX_GRAPH_PILE.into()));
    }
    let table = PassTable::build(top)?;
    let mut ids: HashMap<PassState, usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut queue = std::collections::VecDeque::from([start]);
    ids.insert(start, 0);
    nodes.push((start, table.classify(&start)?));
    while let Some(s) = queue.pop_front() {
        let from = ids[&s];
        for (next, is_pass) in s.successors() {
            let to = match ids.get(&next) {
                Some(&id) => id,
                None => {
                    let id = nodes.len();
                    ids.insert(next, id);
                    nodes.push((next, table.classify(&next)?));
                    queue.push_back(next);
                    id
                }
            };
            let kind = if is_pass { EdgeKind::Pass } else { EdgeKind::Take };
            edges.push((from, to, kind));
        }
    }
    Ok(GameGraph { nodes, edges })
}
