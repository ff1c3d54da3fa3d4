//! Terminal game against the engine.

use std::io::{self, BufRead, Write};

use chocolate_core::{best_move, Axis, GameState, Move, Player};

/// Largest board `choc play` accepts.
pub const MAX_PLAY_SIDE: u32 = 1024;

/// Boards wider or taller than this are described instead of drawn.
const DRAW_LIMIT: u32 = 40;

/// Draw the bar, top row first, with the poison cell as `X`.
pub fn render(s: &GameState) -> String {
    if s.w > DRAW_LIMIT || s.h > DRAW_LIMIT {
        return format!("{}x{} bar, poison at {}\n", s.w, s.h, s.poison);
    }
    let mut text = String::new();
    for j in (1..=s.h).rev() {
        text.push_str(&format!("{j:>3} "));
        for i in 1..=s.w {
            text.push(if s.poison.i == i && s.poison.j == j { 'X' } else { '#' });
        }
        text.push('\n');
    }
    text
}

/// Parse `v k` or `h k`.
pub fn parse_move(line: &str) -> Option<Move> {
    let mut words = line.split_whitespace();
    let axis = match words.next()? {
        "v" | "V" => Axis::Vertical,
        "h" | "H" => Axis::Horizontal,
        _ => return None,
    };
    let cut = words.next()?.parse().ok()?;
    words.next().is_none().then_some(Move { axis, cut })
}

fn short(mv: Move) -> String {
    match mv.axis {
        Axis::Vertical => format!("v {}", mv.cut),
        Axis::Horizontal => format!("h {}", mv.cut),
    }
}

/// Play to the end. Returns the winner, or `None` if the human quit or
/// input ran out.
pub fn play(
    start: GameState,
    mut input: impl BufRead,
    mut out: impl Write,
) -> io::Result<Option<Player>> {
    let mut s = start;
    writeln!(
        out,
        "Break along grid lines: `v k` cuts between columns k and k+1, `h k` between rows k and k+1."
    )?;
    writeln!(out, "Whoever is left with only the poisoned square loses. `q` quits.")?;
    loop {
        write!(out, "\n{}", render(&s))?;
        if let Some(winner) = s.winner() {
            let line = match winner {
                Player::Human => "You win.",
                Player::Engine => "The engine wins.",
            };
            writeln!(out, "{line}")?;
            return Ok(Some(winner));
        }
        let mv = match s.mover {
            Player::Engine => {
                let mv = best_move(&s).expect("non-terminal state has a move");
                writeln!(out, "engine plays {}", short(mv))?;
                mv
            }
            Player::Human => loop {
                write!(out, "your move [v 1..{} | h 1..{}]: ", s.w - 1, s.h - 1)?;
                out.flush()?;
                let mut line = String::new();
                if input.read_line(&mut line)? == 0 {
                    writeln!(out)?;
                    return Ok(None);
                }
                if line.trim() == "q" {
                    return Ok(None);
                }
                match parse_move(&line) {
                    Some(mv) if s.is_legal(mv) => break mv,
                    Some(mv) => writeln!(out, "illegal: {mv} is off the bar")?,
                    None => writeln!(out, "expected `v k` or `h k`")?,
                }
            },
        };
        s = s.apply_move(mv).expect("move was checked");
    }
}
