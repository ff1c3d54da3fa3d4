//! P-positions of the square chocolate game.
//!
//! The poison cell `(i, j)` of an `m × m` bar is a second-player win exactly
//! when `(i-1) ^ (j-1) ^ (m-i) ^ (m-j) == 0`. This crate computes that set
//! four independent ways (the XOR criterion, an exhaustive game solver, a
//! recursive corner/centre construction and a second-order cellular
//! automaton), counts it, relates it to horizontal sections of the
//! Sierpiński octahedron, and classifies four-pile Nim with a one-time pass
//! on the same board.

mod bitgrid;
mod error;

pub mod automaton;
pub mod enumeration;
pub mod formats;
pub mod game;
pub mod nim_pass;
pub mod positions;
pub mod recursion;
pub mod sierpinski;
pub mod verify;

pub use bitgrid::BitGrid;
pub use error::{Error, Result};
pub use game::{analyze_move, best_move, solve, Axis, GameState, Move, Outcome, Player, Solver};
pub use positions::{cell_value, is_p_position, pattern, Cell, Pattern, MAX_SIDE};
pub use sierpinski::{Diamond, Octa, Section, SimilarityMap};
