//! Cell values, the XOR criterion and direct generation of the P-position
//! pattern of the square game.
//!
//! Coordinates follow one convention everywhere: `i` is the column
//! (horizontal axis), `j` the row (vertical axis), both 1-based. Renderers
//! draw `j` increasing upward.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bitgrid::BitGrid;
use crate::error::{Error, Result};

/// Largest supported board side.
pub const MAX_SIDE: u32 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub i: u32,
    pub j: u32,
}

impl Cell {
    pub const fn new(i: u32, j: u32) -> Self {
        Cell { i, j }
    }
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

pub(crate) fn check_side(m: u32, what: &'static str) -> Result<()> {
    if m < 1 {
        return Err(Error::domain(format!("{what} must be at least 1, got {m}")));
    }
    if m > MAX_SIDE {
        return Err(Error::capacity(what, m.into(), MAX_SIDE.into()));
    }
    Ok(())
}

/// The nim-sum `(i-1) ^ (j-1) ^ (m-i) ^ (n-j)` of the four distances from
/// cell `(i, j)` to the edges of an `m × n` bar.
pub fn cell_value(i: u32, j: u32, m: u32, n: u32) -> Result<u32> {
    check_side(m, "board width")?;
    check_side(n, "board height")?;
    if !(1..=m).contains(&i) || !(1..=n).contains(&j) {
        return Err(Error::domain(format!(
            "cell ({i},{j}) is outside the {m}x{n} board"
        )));
    }
    Ok((i - 1) ^ (j - 1) ^ (m - i) ^ (n - j))
}

/// Whether poisoning `(i, j)` on the `m × m` bar is a second-player win.
pub fn is_p_position(i: u32, j: u32, m: u32) -> Result<bool> {
    Ok(cell_value(i, j, m, m)? == 0)
}

/// Set of cells of a square `m × m` board, stored as a bit grid
/// (bit set = member).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    m: u32,
    grid: BitGrid,
}

impl Pattern {
    pub fn empty(m: u32) -> Self {
        Pattern {
            m,
            grid: BitGrid::new(m as usize, m as usize),
        }
    }

    pub fn full(m: u32) -> Self {
        let mut p = Pattern::empty(m);
        for y in 0..m as usize {
            let row = p.grid.row_mut(y);
            row.fill(u64::MAX);
            crate::bitgrid::mask_tail(row, m as usize);
        }
        p
    }

    pub(crate) fn from_grid(grid: BitGrid) -> Self {
        debug_assert_eq!(grid.width(), grid.height());
        Pattern {
            m: grid.width() as u32,
            grid,
        }
    }

    pub fn from_cells(m: u32, cells: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let mut p = Pattern::empty(m);
        for c in cells {
            p.insert(c)?;
        }
        Ok(p)
    }

    pub fn side(&self) -> u32 {
        self.m
    }

    pub fn grid(&self) -> &BitGrid {
        &self.grid
    }

    pub fn insert(&mut self, c: Cell) -> Result<()> {
        if !self.in_bounds(c) {
            return Err(Error::domain(format!(
                "cell {c} is outside the {0}x{0} board",
                self.m
            )));
        }
        self.grid.set(c.i as usize - 1, c.j as usize - 1, true);
        Ok(())
    }

    pub fn in_bounds(&self, c: Cell) -> bool {
        (1..=self.m).contains(&c.i) && (1..=self.m).contains(&c.j)
    }

    /// Out-of-bounds cells are simply not members.
    pub fn contains(&self, c: Cell) -> bool {
        self.in_bounds(c) && self.grid.get(c.i as usize - 1, c.j as usize - 1)
    }

    pub fn len(&self) -> u64 {
        self.grid.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Member cells sorted lexicographically by `(i, j)`.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells: Vec<Cell> = self.iter().collect();
        cells.sort_unstable();
        cells
    }

    /// Member cells in storage order (row by row).
    pub fn iter(&self) -> impl Iterator<Item = Cell> + '_ {
        self.grid
            .iter_ones()
            .map(|(x, y)| Cell::new(x as u32 + 1, y as u32 + 1))
    }

    /// Union of this pattern translated by `(dx, dy)` into `target`.
    pub(crate) fn stamp_into(&self, target: &mut Pattern, dx: u32, dy: u32) {
        for c in self.iter() {
            target.grid.set((c.i + dx - 1) as usize, (c.j + dy - 1) as usize, true);
        }
    }

    /// The sub-square of side `size` whose lower-left cell is `(i0, j0)`,
    /// re-indexed from `(1, 1)`.
    pub fn window(&self, i0: u32, j0: u32, size: u32) -> Pattern {
        Pattern::from_grid(self.grid.crop(
            i0 as usize - 1,
            j0 as usize - 1,
            size as usize,
            size as usize,
        ))
    }

    pub fn transpose(&self) -> Pattern {
        let mut out = Pattern::empty(self.m);
        for c in self.iter() {
            out.grid.set(c.j as usize - 1, c.i as usize - 1, true);
        }
        out
    }

    pub fn mirror_i(&self) -> Pattern {
        let mut out = Pattern::empty(self.m);
        for c in self.iter() {
            out.grid.set((self.m - c.i) as usize, c.j as usize - 1, true);
        }
        out
    }

    pub fn mirror_j(&self) -> Pattern {
        let mut out = Pattern::empty(self.m);
        for c in self.iter() {
            out.grid.set(c.i as usize - 1, (self.m - c.j) as usize, true);
        }
        out
    }

    /// Invariant under both axis reflections and the diagonal transpose.
    pub fn is_fully_symmetric(&self) -> bool {
        *self == self.transpose() && *self == self.mirror_i() && *self == self.mirror_j()
    }
}

impl std::fmt::Debug for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Pattern(m={}) ", self.m)?;
        self.grid.fmt(f)
    }
}

/// All P-positions of the `m × m` game.
///
/// Cell `(i, j)` has value `f(i) ^ f(j)` with `f(k) = (k-1) ^ (m-k)`, so the
/// pattern is the union of `G × G` over the classes `G` of columns sharing
/// the same `f`. Each row is a copy of one class mask.
pub fn pattern(m: u32) -> Result<Pattern> {
    check_side(m, "side")?;
    let side = m as usize;
    let f = |k: u32| (k - 1) ^ (m - k);

    let mut class_of = Vec::with_capacity(side);
    let mut index: HashMap<u32, usize> = HashMap::new();
    let mut masks: Vec<Vec<u64>> = Vec::new();
    let words = side.div_ceil(64);
    for k in 1..=m {
        let next = masks.len();
        let c = *index.entry(f(k)).or_insert(next);
        if c == masks.len() {
            masks.push(vec![0; words]);
        }
        let x = (k - 1) as usize;
        masks[c][x / 64] |= 1u64 << (x % 64);
        class_of.push(c);
    }

    let mut grid = BitGrid::new(side, side);
    for (y, &c) in class_of.iter().enumerate() {
        grid.row_mut(y).copy_from_slice(&masks[c]);
    }
    Ok(Pattern::from_grid(grid))
}
