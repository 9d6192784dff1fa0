//! File formats and the `hxray` command line for the `heisenberg-xray`
//! library.

pub mod commands;
pub mod error;
pub mod report;
pub mod signal;

pub use error::CliError;
pub use signal::{parse_signal, serialize_signal, SignalFile};
