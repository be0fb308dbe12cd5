//! Levenshtein distance and shortest edit scripts computed in the same
//! dynamic-programming pass.
//!
//! The table behind the distance keeps, in every cell, a shortest edit
//! script for the two prefixes it relates, so the script for the full
//! inputs is read straight off the last cell with no backtrace.
//!
//! ```
//! use levdiff_core::{shortest_script, tokenize, detokenize, Granularity};
//!
//! let a = tokenize("abac", Granularity::Char);
//! let b = tokenize("aabc", Granularity::Char);
//! let script = shortest_script(&a, &b).unwrap();
//! assert_eq!(script.len(), 2);
//! assert_eq!(detokenize(&script.apply(&a).unwrap()), "aabc");
//! ```
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]

extern crate alloc;

pub mod matrix;
pub mod oracle;
pub mod script;
pub mod tokens;

pub use matrix::{
    backtrace_script, distance, distance_matrix, script_matrix, script_matrix_with_rule,
    shortest_script, DistanceMatrix, MatrixError, OwnedScriptMatrix, ScriptCell, ScriptMatrix,
    TieRule,
};
pub use script::{canonicalize, ApplyError, EditKind, EditOp, EditScript, ScriptError};
pub use tokens::{
    detokenize, tokenize, tokenize_bytes, Granularity, Token, TokenError, TokenSequence,
};
