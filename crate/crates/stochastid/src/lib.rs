//! File formats, plots, the parallel experiment driver and the command line
//! for `stochastid-core`.

pub mod cli;
pub mod error;
pub mod experiment;
pub mod io;
pub mod plot;
pub mod schema;

pub use error::{CliError, CliResult};
