//! Edit operations, scripts, and applying them to token sequences.
//!
//! Every op carries two coordinates into the *original* sequences:
//! `source_pos` indexes the source, `target_pos` the target. Neither refers
//! to an intermediate state, so a script applies in one left-to-right pass
//! with no offset bookkeeping.
//!
//! * `Insert` places `new` before source token `source_pos` (which may equal
//!   the source length) and it lands at `target_pos` in the output.
//! * `Delete` drops source token `source_pos`; `target_pos` is the number of
//!   target tokens already produced at that point.
//! * `Substitute` replaces source token `source_pos` with `new`, which lands
//!   at `target_pos`.
//!
//! Sorting a valid script by `(source_pos, target_pos)` gives its
//! application order, and no two ops share that pair.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::tokens::{Granularity, Token, TokenError, TokenSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EditKind {
    Insert,
    Delete,
    Substitute,
}

impl EditKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EditKind::Insert => "insert",
            EditKind::Delete => "delete",
            EditKind::Substitute => "substitute",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EditOp {
    Insert {
        source_pos: usize,
        target_pos: usize,
        new: Token,
    },
    Delete {
        source_pos: usize,
        target_pos: usize,
        old: Token,
    },
    Substitute {
        source_pos: usize,
        target_pos: usize,
        old: Token,
        new: Token,
    },
}

impl EditOp {
    pub fn kind(&self) -> EditKind {
        match self {
            EditOp::Insert { .. } => EditKind::Insert,
            EditOp::Delete { .. } => EditKind::Delete,
            EditOp::Substitute { .. } => EditKind::Substitute,
        }
    }

    pub fn source_pos(&self) -> usize {
        match *self {
            EditOp::Insert { source_pos, .. }
            | EditOp::Delete { source_pos, .. }
            | EditOp::Substitute { source_pos, .. } => source_pos,
        }
    }

    pub fn target_pos(&self) -> usize {
        match *self {
            EditOp::Insert { target_pos, .. }
            | EditOp::Delete { target_pos, .. }
            | EditOp::Substitute { target_pos, .. } => target_pos,
        }
    }

    /// The source token this op consumes, if any.
    pub fn old(&self) -> Option<&Token> {
        match self {
            EditOp::Insert { .. } => None,
            EditOp::Delete { old, .. } | EditOp::Substitute { old, .. } => Some(old),
        }
    }

    /// The target token this op produces, if any.
    pub fn new_token(&self) -> Option<&Token> {
        match self {
            EditOp::Delete { .. } => None,
            EditOp::Insert { new, .. } | EditOp::Substitute { new, .. } => Some(new),
        }
    }

    fn consumes_source(&self) -> bool {
        !matches!(self, EditOp::Insert { .. })
    }

    fn produces_target(&self) -> bool {
        !matches!(self, EditOp::Delete { .. })
    }

    /// The op that undoes this one, with the coordinate frames swapped.
    pub fn inverse(&self) -> EditOp {
        match self.clone() {
            EditOp::Insert {
                source_pos,
                target_pos,
                new,
            } => EditOp::Delete {
                source_pos: target_pos,
                target_pos: source_pos,
                old: new,
            },
            EditOp::Delete {
                source_pos,
                target_pos,
                old,
            } => EditOp::Insert {
                source_pos: target_pos,
                target_pos: source_pos,
                new: old,
            },
            EditOp::Substitute {
                source_pos,
                target_pos,
                old,
                new,
            } => EditOp::Substitute {
                source_pos: target_pos,
                target_pos: source_pos,
                old: new,
                new: old,
            },
        }
    }

    fn order_key(&self) -> (usize, usize) {
        (self.source_pos(), self.target_pos())
    }
}

/// Why a list of ops does not form a valid script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptError {
    /// A substitution whose old and new tokens are equal.
    SelfSubstitution { index: usize },
    /// Two ops consume the same source token, or collide at one coordinate pair.
    Conflict { source_pos: usize },
    /// A position lies outside the declared sequence lengths.
    OutOfRange { source_pos: usize, target_pos: usize },
    /// An op's `target_pos` disagrees with where it lands when applied.
    TargetMismatch {
        source_pos: usize,
        expected: usize,
        found: usize,
    },
    /// Inserts minus deletes must equal `target_len - source_len`.
    CountMismatch {
        source_len: usize,
        target_len: usize,
        produced: usize,
    },
}

impl fmt::Display for ScriptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ScriptError::SelfSubstitution { index } => {
                write!(f, "op {index} substitutes a token with itself")
            }
            ScriptError::Conflict { source_pos } => {
                write!(f, "conflicting ops at source position {source_pos}")
            }
            ScriptError::OutOfRange {
                source_pos,
                target_pos,
            } => write!(f, "op position {source_pos},{target_pos} is out of range"),
            ScriptError::TargetMismatch {
                source_pos,
                expected,
                found,
            } => write!(
                f,
                "op at source position {source_pos} declares target position {found}, expected {expected}"
            ),
            ScriptError::CountMismatch {
                source_len,
                target_len,
                produced,
            } => write!(
                f,
                "script turns {source_len} tokens into {produced}, but declares {target_len}"
            ),
        }
    }
}

impl core::error::Error for ScriptError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApplyError {
    LengthMismatch {
        expected: usize,
        found: usize,
    },
    OldTokenMismatch {
        op_index: usize,
        source_pos: usize,
        expected: Token,
        found: Token,
    },
    /// An inserted or substituted token does not fit the source granularity.
    Token(TokenError),
}

impl fmt::Display for ApplyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ApplyError::LengthMismatch { expected, found } => write!(
                f,
                "script expects a source of {expected} tokens, found {found}"
            ),
            ApplyError::OldTokenMismatch {
                op_index,
                source_pos,
                expected,
                found,
            } => write!(
                f,
                "op {op_index} expects {:?} at source position {source_pos}, found {:?}",
                expected.as_str(),
                found.as_str()
            ),
            ApplyError::Token(e) => write!(f, "script produces an invalid token: {e}"),
        }
    }
}

impl core::error::Error for ApplyError {}

/// A validated, canonically ordered edit script between a source of
/// `source_len` tokens and a target of `target_len` tokens.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EditScript {
    ops: Vec<EditOp>,
    source_len: usize,
    target_len: usize,
}

impl EditScript {
    /// The identity script over `len` tokens.
    pub fn empty(len: usize) -> Self {
        EditScript {
            ops: Vec::new(),
            source_len: len,
            target_len: len,
        }
    }

    /// Sorts `ops` into application order and validates them against the
    /// declared lengths.
    pub fn canonicalize(
        mut ops: Vec<EditOp>,
        source_len: usize,
        target_len: usize,
    ) -> Result<Self, ScriptError> {
        for (index, op) in ops.iter().enumerate() {
            if let EditOp::Substitute { old, new, .. } = op {
                if old == new {
                    return Err(ScriptError::SelfSubstitution { index });
                }
            }
        }
        ops.sort_by_key(EditOp::order_key);

        let mut next_source = 0;
        let mut produced = 0;
        let mut prev: Option<(usize, usize)> = None;
        for op in &ops {
            let (sp, tp) = op.order_key();
            if prev == Some((sp, tp)) || sp < next_source {
                return Err(ScriptError::Conflict { source_pos: sp });
            }
            prev = Some((sp, tp));
            let in_range = if op.consumes_source() {
                sp < source_len
            } else {
                sp <= source_len
            };
            if !in_range {
                return Err(ScriptError::OutOfRange {
                    source_pos: sp,
                    target_pos: tp,
                });
            }
            produced += sp - next_source;
            next_source = sp;
            if tp != produced {
                return Err(ScriptError::TargetMismatch {
                    source_pos: sp,
                    expected: produced,
                    found: tp,
                });
            }
            if op.consumes_source() {
                next_source += 1;
            }
            if op.produces_target() {
                produced += 1;
                if produced > target_len {
                    return Err(ScriptError::OutOfRange {
                        source_pos: sp,
                        target_pos: tp,
                    });
                }
            }
        }
        produced += source_len - next_source;
        if produced != target_len {
            return Err(ScriptError::CountMismatch {
                source_len,
                target_len,
                produced,
            });
        }
        Ok(EditScript {
            ops,
            source_len,
            target_len,
        })
    }

    /// Builds a script from ops already in application order and known to
    /// be consistent. Only for producers that construct scripts by walking.
    pub(crate) fn from_ordered_unchecked(
        ops: Vec<EditOp>,
        source_len: usize,
        target_len: usize,
    ) -> Self {
        debug_assert!(ops.windows(2).all(|w| w[0].order_key() < w[1].order_key()));
        EditScript {
            ops,
            source_len,
            target_len,
        }
    }

    pub fn ops(&self) -> &[EditOp] {
        &self.ops
    }

    pub fn into_ops(self) -> Vec<EditOp> {
        self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    pub fn count(&self, kind: EditKind) -> usize {
        self.ops.iter().filter(|op| op.kind() == kind).count()
    }

    /// Applies the script to `source`, checking every consumed token.
    pub fn apply(&self, source: &TokenSequence) -> Result<TokenSequence, ApplyError> {
        if source.len() != self.source_len {
            return Err(ApplyError::LengthMismatch {
                expected: self.source_len,
                found: source.len(),
            });
        }
        let granularity = source.granularity();
        let src = source.tokens();
        let mut out: Vec<Token> = Vec::with_capacity(self.target_len);
        // Source index each output token came from, for word layout.
        let mut origin: Vec<Option<usize>> = Vec::new();
        let track = granularity == Granularity::Word;
        let mut next = 0;

        for (op_index, op) in self.ops.iter().enumerate() {
            let sp = op.source_pos();
            for (k, token) in src[next..sp].iter().enumerate() {
                out.push(token.clone());
                if track {
                    origin.push(Some(next + k));
                }
            }
            next = sp;
            if let Some(old) = op.old() {
                if &src[sp] != old {
                    return Err(ApplyError::OldTokenMismatch {
                        op_index,
                        source_pos: sp,
                        expected: old.clone(),
                        found: src[sp].clone(),
                    });
                }
                next += 1;
            }
            if let Some(new) = op.new_token() {
                if !new.fits(granularity) {
                    return Err(ApplyError::Token(TokenError::Malformed {
                        index: out.len(),
                        granularity,
                    }));
                }
                out.push(new.clone());
                if track {
                    origin.push(match op {
                        EditOp::Substitute { .. } => Some(sp),
                        _ => None,
                    });
                }
            }
        }
        for (k, token) in src[next..].iter().enumerate() {
            out.push(token.clone());
            if track {
                origin.push(Some(next + k));
            }
        }

        if track {
            let separators = word_layout(source, &origin);
            TokenSequence::from_words(out, separators).map_err(ApplyError::Token)
        } else {
            TokenSequence::from_tokens(granularity, out).map_err(ApplyError::Token)
        }
    }

    /// The script that maps the target back to the source.
    pub fn invert(&self) -> EditScript {
        let mut ops: Vec<EditOp> = self.ops.iter().map(EditOp::inverse).collect();
        // Application order is monotone in both coordinates, so swapping
        // frames keeps the ops sorted; sort anyway to stay canonical.
        ops.sort_by_key(EditOp::order_key);
        EditScript {
            ops,
            source_len: self.target_len,
            target_len: self.source_len,
        }
    }
}

/// Whitespace layout for a word sequence produced by `apply`.
///
/// Tokens that came from the source keep the separator that preceded them
/// there; inserted tokens get a single space. Leading and trailing
/// whitespace carry over from the source.
fn word_layout(source: &TokenSequence, origin: &[Option<usize>]) -> Vec<String> {
    let seps = source.separators();
    let m = source.len();
    let leading = seps[0].clone();
    let trailing = if m > 0 { seps[m].clone() } else { String::new() };
    if origin.is_empty() {
        let mut only = leading;
        only.push_str(&trailing);
        return alloc::vec![only];
    }
    let mut layout = Vec::with_capacity(origin.len() + 1);
    layout.push(leading);
    for from in &origin[1..] {
        layout.push(match from {
            Some(s) if *s > 0 => seps[*s].clone(),
            _ => String::from(" "),
        });
    }
    layout.push(trailing);
    layout
}

/// Free-function form of [`EditScript::canonicalize`].
pub fn canonicalize(
    ops: Vec<EditOp>,
    source_len: usize,
    target_len: usize,
) -> Result<EditScript, ScriptError> {
    EditScript::canonicalize(ops, source_len, target_len)
}

impl PartialOrd for EditOp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EditOp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key()
            .cmp(&other.order_key())
            .then_with(|| self.kind().as_str().cmp(other.kind().as_str()))
            .then_with(|| self.old().cmp(&other.old()))
            .then_with(|| self.new_token().cmp(&other.new_token()))
    }
}
