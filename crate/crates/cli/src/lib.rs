//! The `choc` command-line tool and its HTTP service.

mod cli;
mod error;
pub mod play;
pub mod server;

pub use cli::{run, Cli, Command, Method};
pub use error::CliError;
