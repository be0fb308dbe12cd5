//! Script formats, the scaling benchmark, and the `levdiff` command line,
//! on top of [`levdiff_core`].

pub mod bench;
pub mod cli;
pub mod format;

pub use format::{parse, serialize, Format, FormatError};
