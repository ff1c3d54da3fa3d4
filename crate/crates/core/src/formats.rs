//! Text serializations: plain PBM patterns, section CSV, SVG drawings,
//! the overlay character grid and DOT game graphs.

use std::fmt::Write as _;

use crate::bitgrid::BitGrid;
use crate::error::{Error, Result};
use crate::game::Outcome;
use crate::nim_pass::{EdgeKind, GameGraph, OverlayPattern};
use crate::positions::{Cell, Pattern};
use crate::sierpinski::{Diamond, Section};

/// Plain PBM (`P1`). The first raster line is the top row `j = m`; bit 1
/// marks a member cell.
pub fn pattern_to_pbm(p: &Pattern) -> String {
    grid_to_pbm(p.grid())
}

/// Same layout for any bit grid (used for automaton frames).
pub fn grid_to_pbm(g: &BitGrid) -> String {
    let (w, h) = (g.width(), g.height());
    let mut out = String::with_capacity(8 + 2 * w * h);
    let _ = writeln!(out, "P1\n{w} {h}");
    for y in (0..h).rev() {
        for x in 0..w {
            if x > 0 {
                out.push(' ');
            }
            out.push(if g.get(x, y) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

pub fn pattern_from_pbm(text: &str) -> Result<Pattern> {
    let mut tokens = text
        .lines()
        .enumerate()
        .map(|(n, line)| (n + 1, line.split('#').next().unwrap_or("")))
        .flat_map(|(n, line)| line.split_whitespace().map(move |t| (n, t)));

    match tokens.next() {
        Some((_, "P1")) => {}
        Some((n, t)) => return Err(Error::parse(n, format!("expected magic P1, found {t:?}"))),
        None => return Err(Error::parse(1, "empty input")),
    }
    let mut dim = |what: &str| -> Result<usize> {
        let (n, t) = tokens
            .next()
            .ok_or_else(|| Error::parse(0, format!("missing {what}")))?;
        t.parse()
            .map_err(|_| Error::parse(n, format!("bad {what} {t:?}")))
    };
    let w = dim("width")?;
    let h = dim("height")?;
    if w != h || w == 0 {
        return Err(Error::parse(2, format!("pattern must be square and nonempty, got {w}x{h}")));
    }
    let m = w as u32;
    let mut p = Pattern::empty(m);
    let mut count = 0usize;
    let mut last_line = 2;
    for (n, t) in tokens {
        last_line = n;
        // Plain PBM may run digits together.
        for ch in t.chars() {
            let bit = match ch {
                '0' => false,
                '1' => true,
                _ => return Err(Error::parse(n, format!("unexpected {ch:?} in raster"))),
            };
            if count >= w * h {
                return Err(Error::parse(n, "more raster bits than the header declares"));
            }
            let (x, row) = (count % w, count / w);
            if bit {
                p.insert(Cell::new(x as u32 + 1, m - row as u32))?;
            }
            count += 1;
        }
    }
    if count != w * h {
        return Err(Error::parse(last_line, format!("expected {} raster bits, found {count}", w * h)));
    }
    Ok(p)
}

/// One line `n,level_num,level_den,cx_num,cy_num,r_num,den` per diamond.
pub fn section_to_csv(s: &Section) -> String {
    let mut out = String::new();
    for d in &s.diamonds {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            s.order, s.level_num, s.level_den, d.cx, d.cy, d.r, s.den
        );
    }
    out
}

pub fn section_from_csv(text: &str) -> Result<Section> {
    let mut header: Option<(u32, i64, i64, i64)> = None;
    let mut diamonds = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let n = n + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::parse(n, format!("expected 7 fields, found {}", fields.len())));
        }
        let mut nums = [0i64; 7];
        for (slot, f) in nums.iter_mut().zip(&fields) {
            *slot = f
                .trim()
                .parse()
                .map_err(|_| Error::parse(n, format!("bad integer {f:?}")))?;
        }
        let order = u32::try_from(nums[0]).map_err(|_| Error::parse(n, "negative order"))?;
        let key = (order, nums[1], nums[2], nums[6]);
        match header {
            None => header = Some(key),
            Some(h) if h != key => {
                return Err(Error::parse(n, "order, level and denominator must agree on every line"))
            }
            Some(_) => {}
        }
        diamonds.push(Diamond {
            cx: nums[3],
            cy: nums[4],
            r: nums[5],
        });
    }
    let (order, level_num, level_den, den) =
        header.ok_or_else(|| Error::parse(0, "no diamonds"))?;
    Ok(Section {
        order,
        level_num,
        level_den,
        den,
        diamonds,
    })
}

const SVG_OPEN: &str = r#"<svg xmlns="http://www.w3.org/2000/svg""#;

fn rects(out: &mut String, p: &Pattern) {
    for c in p.cells() {
        let _ = writeln!(
            out,
            r#"    <rect x="{}" y="{}" width="1" height="1"/>"#,
            c.i - 1,
            c.j - 1
        );
    }
}

/// Unit squares for member cells, viewBox `0 0 m m`, `j` drawn upward.
pub fn pattern_to_svg(p: &Pattern) -> String {
    let m = p.side();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"{SVG_OPEN} viewBox="0 0 {m} {m}" width="512" height="512" shape-rendering="crispEdges">"#
    );
    let _ = writeln!(out, r#"  <g transform="matrix(1 0 0 -1 0 {m})" fill="black">"#);
    rects(&mut out, p);
    out.push_str("  </g>\n</svg>\n");
    out
}

/// Blue plain-Nim cells underneath red with-pass cells.
pub fn overlay_to_svg(o: &OverlayPattern) -> String {
    let m = o.m;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"{SVG_OPEN} viewBox="0 0 {m} {m}" width="512" height="512" shape-rendering="crispEdges">"#
    );
    let _ = writeln!(out, r#"  <g transform="matrix(1 0 0 -1 0 {m})">"#);
    out.push_str("   <g id=\"nim\" fill=\"#1f4fd8\">\n");
    rects(&mut out, &o.blue);
    out.push_str("   </g>\n   <g id=\"nim-with-pass\" fill=\"#d8281f\" fill-opacity=\"0.7\">\n");
    rects(&mut out, &o.red);
    out.push_str("   </g>\n  </g>\n</svg>\n");
    out
}

/// `m` lines, top row first: `0` neither, `B` plain Nim only, `R` with-pass
/// only, `X` both.
pub fn overlay_to_grid(o: &OverlayPattern) -> String {
    let m = o.m;
    let mut out = String::with_capacity((m as usize + 1) * m as usize);
    for j in (1..=m).rev() {
        for i in 1..=m {
            let c = Cell::new(i, j);
            out.push(match (o.blue.contains(c), o.red.contains(c)) {
                (false, false) => '0',
                (true, false) => 'B',
                (false, true) => 'R',
                (true, true) => 'X',
            });
        }
        out.push('\n');
    }
    out
}

fn dyadic(num: i64, den: i64) -> f64 {
    num as f64 / den as f64
}

/// Diamonds of a section in the unit square `[-1, 1]²`, `y` drawn upward.
pub fn section_to_svg(s: &Section) -> String {
    let mut out = String::new();
    let _ = writeln!(out, r#"{SVG_OPEN} viewBox="-1 -1 2 2" width="512" height="512">"#);
    out.push_str("  <g transform=\"scale(1 -1)\" fill=\"black\">\n");
    for d in &s.diamonds {
        let (x, y, r) = (dyadic(d.cx, s.den), dyadic(d.cy, s.den), dyadic(d.r, s.den));
        let _ = writeln!(
            out,
            r#"    <path d="M {} {} L {} {} L {} {} L {} {} Z"/>"#,
            x + r,
            y,
            x,
            y + r,
            x - r,
            y,
            x,
            y - r
        );
    }
    out.push_str("  </g>\n</svg>\n");
    out
}

/// Directed game graph; P positions are double circles, pass edges dashed.
pub fn graph_to_dot(g: &GameGraph) -> String {
    let mut out = String::from("digraph nim_with_pass {\n  rankdir=TB;\n");
    for (id, (s, outcome)) in g.nodes.iter().enumerate() {
        let p = s.piles();
        let shape = match outcome {
            Outcome::P => "doublecircle",
            Outcome::N => "circle",
        };
        let flag = if s.pass_available { "pass" } else { "no pass" };
        let _ = writeln!(
            out,
            "  n{id} [label=\"{} {} {} {}\\n{flag}\", shape={shape}];",
            p[0], p[1], p[2], p[3]
        );
    }
    for (from, to, kind) in &g.edges {
        let style = match kind {
            EdgeKind::Take => "",
            EdgeKind::Pass => " [style=dashed]",
        };
        let _ = writeln!(out, "  n{from} -> n{to}{style};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nim_pass::{game_graph, overlay, PassState};
    use crate::positions::pattern;
    use crate::sierpinski::{half_section, integer_section};
    use proptest::prelude::*;

    #[test]
    fn pbm_of_single_cell() {
        assert_eq!(pattern_to_pbm(&pattern(1).unwrap()), "P1\n1 1\n1\n");
    }

    #[test]
    fn pbm_orientation() {
        let p = Pattern::from_cells(3, [Cell::new(1, 3), Cell::new(3, 1)]).unwrap();
        assert_eq!(pattern_to_pbm(&p), "P1\n3 3\n1 0 0\n0 0 0\n0 0 1\n");
    }

    #[test]
    fn pbm_parsing_tolerates_comments_and_packed_digits() {
        let p = pattern_from_pbm("P1\n# comment\n3 3\n101\n010\n101\n").unwrap();
        assert_eq!(p, pattern(3).unwrap());
    }

    #[test]
    fn pbm_errors() {
        assert!(pattern_from_pbm("").is_err());
        assert!(pattern_from_pbm("P4\n1 1\n1").is_err());
        assert!(pattern_from_pbm("P1\n2 3\n1 1 1 1 1 1").is_err());
        assert!(pattern_from_pbm("P1\n2 2\n1 1 1").is_err());
        assert!(pattern_from_pbm("P1\n2 2\n1 1 1 1 1").is_err());
        assert!(pattern_from_pbm("P1\n2 2\n1 1 2 1").is_err());
    }

    #[test]
    fn csv_lines() {
        let s = integer_section(1, 1).unwrap();
        assert_eq!(section_to_csv(&s), "1,1,2,0,0,1,2\n");
        assert!(section_from_csv("").is_err());
        assert!(section_from_csv("1,1,2,0,0,1\n").is_err());
        assert!(section_from_csv("1,1,2,0,0,1,2\n2,1,2,0,0,1,2\n").is_err());
    }

    #[test]
    fn csv_round_trips_real_sections() {
        for n in 0..=4u32 {
            for m in 1..(1i64 << n) {
                for s in [integer_section(n, m).unwrap(), half_section(n, m).unwrap()] {
                    assert_eq!(section_from_csv(&section_to_csv(&s)).unwrap(), s);
                }
            }
        }
    }

    #[test]
    fn svg_shapes() {
        let svg = pattern_to_svg(&pattern(3).unwrap());
        assert!(svg.contains(r#"viewBox="0 0 3 3""#));
        assert_eq!(svg.matches("<rect").count(), 5);
        let sec = section_to_svg(&integer_section(2, 3).unwrap());
        assert_eq!(sec.matches("<path").count(), 5);
        let o = overlay(6).unwrap();
        let svg = overlay_to_svg(&o);
        assert_eq!(svg.matches("<rect").count() as u64, o.blue.len() + o.red.len());
        assert!(svg.find("nim\"").unwrap() < svg.find("nim-with-pass").unwrap());
    }

    #[test]
    fn grid_codes() {
        let o = overlay(5).unwrap();
        let grid = overlay_to_grid(&o);
        let lines: Vec<_> = grid.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines.iter().all(|l| l.len() == 5));
        // the top-left character is cell (1, 5), a diagonal cell of P(5)
        assert!(matches!(lines[0].as_bytes()[0], b'B' | b'X'));
    }

    #[test]
    fn dot_output() {
        let g = game_graph(PassState::new([1, 1, 0, 0], true)).unwrap();
        let dot = graph_to_dot(&g);
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches("->").count(), g.edges.len());
        assert_eq!(dot.matches("style=dashed").count(), 2);
    }

    proptest! {
        #[test]
        fn pbm_round_trip(m in 1u32..40, bits in proptest::collection::vec(any::<bool>(), 1600)) {
            let cells = (1..=m)
                .flat_map(|i| (1..=m).map(move |j| Cell::new(i, j)))
                .filter(|c| bits[((c.i - 1) * 40 + c.j - 1) as usize]);
            let p = Pattern::from_cells(m, cells).unwrap();
            prop_assert_eq!(pattern_from_pbm(&pattern_to_pbm(&p)).unwrap(), p);
        }

        #[test]
        fn csv_round_trip(order in 0u32..20, level in 1i64..100, den_exp in 0u32..20,
                          ds in proptest::collection::vec((-1000i64..1000, -1000i64..1000, 1i64..50), 1..50)) {
            let s = Section {
                order,
                level_num: level,
                level_den: 1 << den_exp,
                den: 1 << den_exp,
                diamonds: ds.into_iter().map(|(cx, cy, r)| Diamond { cx, cy, r }).collect(),
            };
            prop_assert_eq!(section_from_csv(&section_to_csv(&s)).unwrap(), s);
        }
    }
}
