use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;

use chocolate_core::automaton::{ca_pattern, trace};
use chocolate_core::enumeration::{self, closed};
use chocolate_core::formats;
use chocolate_core::nim_pass::{game_graph, overlay, PassState};
use chocolate_core::recursion::pattern_recursive;
use chocolate_core::sierpinski::{half_section, integer_section};
use chocolate_core::verify::{self, Suite};
use chocolate_core::{pattern, Cell, GameState, Pattern, Player};

use crate::error::CliError;
use crate::play;
use crate::server;

#[derive(Debug, Parser)]
#[command(name = "choc", version, about = "P-positions of the square chocolate game")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Xor,
    Recursive,
    Ca,
}

impl Method {
    pub fn pattern(self, m: u32) -> chocolate_core::Result<Pattern> {
        match self {
            Method::Xor => pattern(m),
            Method::Recursive => pattern_recursive(m),
            Method::Ca => ca_pattern(m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PatternFormat {
    Pbm,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SectionFormat {
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OverlayFormat {
    Grid,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Nim,
    Doubling,
    Decomposition,
    Sums,
    Ca,
    Section,
    Half,
    All,
}

impl SuiteArg {
    fn suites(self) -> Vec<Suite> {
        let one = match self {
            SuiteArg::All => return Suite::ALL.to_vec(),
            SuiteArg::Nim => Suite::Nim,
            SuiteArg::Doubling => Suite::Doubling,
            SuiteArg::Decomposition => Suite::Decomposition,
            SuiteArg::Sums => Suite::Sums,
            SuiteArg::Ca => Suite::Ca,
            SuiteArg::Section => Suite::Section,
            SuiteArg::Half => Suite::Half,
        };
        vec![one]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FirstPlayer {
    Human,
    Engine,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the P-positions of the m x m board.
    Pattern {
        m: u32,
        #[arg(long, value_enum, default_value = "xor")]
        method: Method,
        #[arg(long, value_enum, default_value = "pbm")]
        format: PatternFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write every automaton frame as a PBM into this directory (ca only).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Print the number of P-positions g(m).
    Gvalue { m: u64 },
    /// Print a sum of g and its closed form; fails if they differ.
    Gsum {
        /// g(1) + g(3) + ... + g(2^n - 1)
        #[arg(long, value_name = "N", conflicts_with = "all", required_unless_present = "all")]
        odd: Option<u32>,
        /// g(1) + ... + g(2^n)
        #[arg(long, value_name = "N")]
        all: Option<u32>,
    },
    /// Run invariant suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        /// Bound for every selected suite (each suite has its own default).
        #[arg(long)]
        max: Option<u32>,
    },
    /// Export the section of the order-n octahedron at level m / 2^n.
    Sierpinski {
        n: u32,
        m: i64,
        /// Use the level (m + 1/2) / 2^n instead.
        #[arg(long)]
        half: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: SectionFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Nim-with-pass overlay on the m x m board, or a game graph with --graph.
    Nimpass {
        #[arg(required_unless_present = "graph")]
        m: Option<u32>,
        #[arg(long, value_enum, default_value = "grid")]
        format: OverlayFormat,
        /// Starting piles p1,p2,p3,p4 (pass available); writes Graphviz DOT.
        #[arg(long, value_parser = parse_piles, conflicts_with = "m")]
        graph: Option<[u32; 4]>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Play against the engine on the terminal.
    Play {
        m: u32,
        #[arg(long, value_parser = parse_cell)]
        poison: Option<Cell>,
        #[arg(long, value_enum, default_value = "human")]
        first: FirstPlayer,
    },
    /// Start the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Idle seconds before a game session is dropped.
        #[arg(long, default_value_t = 3600)]
        session_ttl: u64,
    },
}

fn parse_numbers<const N: usize>(s: &str) -> Result<[u32; N], String> {
    let parts: Vec<u32> = s
        .split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|_| format!("expected {N} comma-separated numbers"))
}

fn parse_piles(s: &str) -> Result<[u32; 4], String> {
    parse_numbers::<4>(s)
}

fn parse_cell(s: &str) -> Result<Cell, String> {
    let [i, j] = parse_numbers::<2>(s)?;
    Ok(Cell::new(i, j))
}

fn emit(out: &mut impl Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Execute one parsed command. `input` is only read by `play`.
pub fn run(cli: Cli, input: impl BufRead, mut out: impl Write) -> Result<(), CliError> {
    match cli.command {
        Command::Pattern {
            m,
            method,
            format,
            output,
            trace: trace_dir,
        } => {
            if let Some(dir) = &trace_dir {
                if method != Method::Ca {
                    return Err(CliError::Usage("--trace requires --method ca".into()));
                }
                write_trace(m, dir)?;
            }
            let p = method.pattern(m)?;
            let text = match format {
                PatternFormat::Pbm => formats::pattern_to_pbm(&p),
                PatternFormat::Svg => formats::pattern_to_svg(&p),
            };
            emit(&mut out, output.as_deref(), &text)
        }
        Command::Gvalue { m } => {
            writeln!(out, "{}", enumeration::g(m)?)?;
            Ok(())
        }
        Command::Gsum { odd, all } => {
            let (sum, expected) = match (odd, all) {
                (Some(n), _) => (enumeration::sum_odd(n)?, closed::odd_sum(n)),
                (None, Some(n)) => (enumeration::sum_all(n)?, closed::total_sum(n)),
                (None, None) => return Err(CliError::Usage("pass --odd N or --all N".into())),
            };
            if sum == expected {
                writeln!(out, "{sum} == {expected}")?;
                Ok(())
            } else {
                writeln!(out, "{sum} != {expected}")?;
                Err(CliError::Verification(format!("sum {sum} differs from closed form {expected}")))
            }
        }
        Command::Verify { suite, max } => {
            let mut failed = Vec::new();
            for s in suite.suites() {
                let report = verify::run(s, max)?;
                writeln!(out, "{report}")?;
                if let Some(why) = &report.first_failure {
                    eprintln!("{s}: first failure: {why}");
                    failed.push(s.name());
                }
            }
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Verification(format!("suites failed: {}", failed.join(", "))))
            }
        }
        Command::Sierpinski {
            n,
            m,
            half,
            format,
            output,
        } => {
            let sec = if half { half_section(n, m)? } else { integer_section(n, m)? };
            let text = match format {
                SectionFormat::Csv => formats::section_to_csv(&sec),
                SectionFormat::Svg => formats::section_to_svg(&sec),
            };
            emit(&mut out, output.as_deref(), &text)
        }
        Command::Nimpass {
            m,
            format,
            graph,
            output,
        } => {
            let text = match (graph, m) {
                (Some(piles), _) => formats::graph_to_dot(&game_graph(PassState::new(piles, true))?),
                (None, Some(m)) => {
                    let o = overlay(m)?;
                    match format {
                        OverlayFormat::Grid => formats::overlay_to_grid(&o),
                        OverlayFormat::Svg => formats::overlay_to_svg(&o),
                    }
                }
                (None, None) => return Err(CliError::Usage("pass a side m or --graph".into())),
            };
            emit(&mut out, output.as_deref(), &text)
        }
        Command::Play { m, poison, first } => {
            if m > play::MAX_PLAY_SIDE {
                return Err(chocolate_core::Error::Capacity {
                    what: "board side",
                    value: m.into(),
                    limit: play::MAX_PLAY_SIDE.into(),
                }
                .into());
            }
            let poison = match poison {
                Some(c) => c,
                None if m >= 1 => {
                    let mut rng = rand::thread_rng();
                    Cell::new(rng.gen_range(1..=m), rng.gen_range(1..=m))
                }
                None => Cell::new(1, 1),
            };
            let mover = match first {
                FirstPlayer::Human => Player::Human,
                FirstPlayer::Engine => Player::Engine,
            };
            let start = GameState::new(m, m, poison, mover)?;
            play::play(start, input, out)?;
            Ok(())
        }
        Command::Serve {
            port,
            host,
            session_ttl,
        } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(server::serve(&host, port, std::time::Duration::from_secs(session_ttl)))?;
            Ok(())
        }
    }
}

fn write_trace(m: u32, dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    let mut written = Ok(());
    trace(m, |t, grid| {
        if written.is_ok() {
            let path = dir.join(format!("frame_{t:05}.pbm"));
            written = fs::write(path, formats::grid_to_pbm(grid));
        }
    })?;
    Ok(written?)
}
