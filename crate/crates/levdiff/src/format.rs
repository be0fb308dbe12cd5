//! Text encodings of edit scripts.
//!
//! Compact, one op per LF-terminated line:
//!
//! ```text
//! @ <source_len> <target_len>
//! +<source_pos>,<target_pos>:<new>
//! -<source_pos>,<target_pos>:<old>
//! ~<source_pos>,<target_pos>:<old>><new>
//! ```
//!
//! Token text percent-encodes `%`, `:`, `>`, `,`, LF and CR as `%XX` with
//! uppercase hex; nothing else is escaped.
//!
//! Verbose renders each op as an English sentence and is output-only.
//!
//! JSON is a single object `{source_len, target_len, ops: [{kind,
//! source_pos, target_pos, old?, new?}]}`.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use levdiff_core::{EditOp, EditScript, ScriptError, Token};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Compact,
    Verbose,
    Json,
}

impl FromStr for Format {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "compact" => Ok(Format::Compact),
            "verbose" => Ok(Format::Verbose),
            "json" => Ok(Format::Json),
            other => Err(FormatError::UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Compact => "compact",
            Format::Verbose => "verbose",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: token encoding does not round-trip: {message}")]
    Encoding { line: usize, message: String },
    #[error("unknown format `{0}` (expected compact, verbose or json)")]
    UnknownFormat(String),
    #[error("the verbose format is output-only and cannot be parsed")]
    VerboseNotParseable,
    #[error("invalid JSON script: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid script: {0}")]
    Script(#[from] ScriptError),
}

pub fn serialize(script: &EditScript, format: Format) -> String {
    match format {
        Format::Compact => to_compact(script),
        Format::Verbose => to_verbose(script),
        Format::Json => to_json(script),
    }
}

pub fn parse(text: &str, format: Format) -> Result<EditScript, FormatError> {
    match format {
        Format::Compact => from_compact(text),
        Format::Verbose => Err(FormatError::VerboseNotParseable),
        Format::Json => from_json(text),
    }
}

pub fn to_compact(script: &EditScript) -> String {
    let mut out = format!("@ {} {}\n", script.source_len(), script.target_len());
    for op in script.ops() {
        out.push_str(&compact_op(op));
        out.push('\n');
    }
    out
}

/// One op in compact notation, without the line terminator.
pub fn compact_op(op: &EditOp) -> String {
    let (sp, tp) = (op.source_pos(), op.target_pos());
    match op {
        EditOp::Insert { new, .. } => format!("+{sp},{tp}:{}", encode(new.as_str())),
        EditOp::Delete { old, .. } => format!("-{sp},{tp}:{}", encode(old.as_str())),
        EditOp::Substitute { old, new, .. } => format!(
            "~{sp},{tp}:{}>{}",
            encode(old.as_str()),
            encode(new.as_str())
        ),
    }
}

fn encode(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '%' | ':' | '>' | ',' | '\n' | '\r' => {
                let _ = write!(out, "%{:02X}", c as u32);
            }
            _ => out.push(c),
        }
    }
    out
}

fn decode(text: &str, line: usize) -> Result<Token, FormatError> {
    let bad = |message: String| FormatError::Encoding { line, message };
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        match c {
            '%' => {
                let hex: String = chars.by_ref().take(2).collect();
                let byte = match hex.as_str() {
                    "25" => '%',
                    "3A" => ':',
                    "3E" => '>',
                    "2C" => ',',
                    "0A" => '\n',
                    "0D" => '\r',
                    _ => return Err(bad(format!("unexpected escape `%{hex}`"))),
                };
                out.push(byte);
            }
            ':' | '>' | ',' | '\r' => return Err(bad(format!("unescaped {c:?} in token"))),
            _ => out.push(c),
        }
    }
    Token::new(out).map_err(|_| FormatError::Malformed {
        line,
        message: "empty token".to_string(),
    })
}

fn parse_pos(text: &str, line: usize) -> Result<usize, FormatError> {
    let canonical = !text.is_empty()
        && text.bytes().all(|b| b.is_ascii_digit())
        && (text == "0" || !text.starts_with('0'));
    if !canonical {
        return Err(FormatError::Malformed {
            line,
            message: format!("invalid position `{text}`"),
        });
    }
    text.parse().map_err(|_| FormatError::Malformed {
        line,
        message: format!("position `{text}` out of range"),
    })
}

pub fn from_compact(text: &str) -> Result<EditScript, FormatError> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = body.split('\n').enumerate().map(|(k, l)| (k + 1, l));
    let malformed = |line: usize, message: &str| FormatError::Malformed {
        line,
        message: message.to_string(),
    };

    let (_, header) = lines.next().expect("split yields at least one item");
    let dims = header
        .strip_prefix("@ ")
        .ok_or_else(|| malformed(1, "expected header `@ <source_len> <target_len>`"))?;
    let (m, n) = dims
        .split_once(' ')
        .ok_or_else(|| malformed(1, "expected header `@ <source_len> <target_len>`"))?;
    let (source_len, target_len) = (parse_pos(m, 1)?, parse_pos(n, 1)?);

    let mut ops = Vec::new();
    for (line, content) in lines {
        let mut it = content.chars();
        let sigil = it
            .next()
            .ok_or_else(|| malformed(line, "empty line"))?;
        let rest = it.as_str();
        let (coords, payload) = rest
            .split_once(':')
            .ok_or_else(|| malformed(line, "expected `<source_pos>,<target_pos>:`"))?;
        let (sp, tp) = coords
            .split_once(',')
            .ok_or_else(|| malformed(line, "expected `<source_pos>,<target_pos>`"))?;
        let (source_pos, target_pos) = (parse_pos(sp, line)?, parse_pos(tp, line)?);
        let op = match sigil {
            '+' => EditOp::Insert {
                source_pos,
                target_pos,
                new: decode(payload, line)?,
            },
            '-' => EditOp::Delete {
                source_pos,
                target_pos,
                old: decode(payload, line)?,
            },
            '~' => {
                let (old, new) = payload
                    .split_once('>')
                    .ok_or_else(|| malformed(line, "substitution needs `<old>><new>`"))?;
                EditOp::Substitute {
                    source_pos,
                    target_pos,
                    old: decode(old, line)?,
                    new: decode(new, line)?,
                }
            }
            other => {
                return Err(malformed(
                    line,
                    &format!("unknown op `{other}` (expected +, - or ~)"),
                ))
            }
        };
        ops.push(op);
    }
    Ok(EditScript::canonicalize(ops, source_len, target_len)?)
}

/// Token text for the verbose format; control whitespace is made visible.
fn visible(token: &Token) -> String {
    let mut out = String::new();
    for c in token.as_str().chars() {
        match c {
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            _ => out.push(c),
        }
    }
    out
}

/// One op as an English sentence. Deletions and substitutions are located
/// by source position, insertions by target position.
pub fn verbose_op(op: &EditOp) -> String {
    match op {
        EditOp::Insert {
            target_pos, new, ..
        } => format!("At position {target_pos} add {}", visible(new)),
        EditOp::Delete {
            source_pos, old, ..
        } => format!("At position {source_pos} delete {}", visible(old)),
        EditOp::Substitute {
            source_pos,
            old,
            new,
            ..
        } => format!(
            "At position {source_pos} substitute {} with {}",
            visible(old),
            visible(new)
        ),
    }
}

pub fn to_verbose(script: &EditScript) -> String {
    let mut out = String::new();
    for op in script.ops() {
        out.push_str(&verbose_op(op));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindDoc {
    Insert,
    Delete,
    Substitute,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OpDoc {
    kind: KindDoc,
    source_pos: usize,
    target_pos: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    old: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    new: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct ScriptDoc {
    source_len: usize,
    target_len: usize,
    ops: Vec<OpDoc>,
}

impl From<&EditScript> for ScriptDoc {
    fn from(script: &EditScript) -> Self {
        let ops = script
            .ops()
            .iter()
            .map(|op| OpDoc {
                kind: match op {
                    EditOp::Insert { .. } => KindDoc::Insert,
                    EditOp::Delete { .. } => KindDoc::Delete,
                    EditOp::Substitute { .. } => KindDoc::Substitute,
                },
                source_pos: op.source_pos(),
                target_pos: op.target_pos(),
                old: op.old().map(|t| t.as_str().to_string()),
                new: op.new_token().map(|t| t.as_str().to_string()),
            })
            .collect();
        ScriptDoc {
            source_len: script.source_len(),
            target_len: script.target_len(),
            ops,
        }
    }
}

pub(crate) fn script_doc(script: &EditScript) -> ScriptDoc {
    ScriptDoc::from(script)
}

pub fn to_json(script: &EditScript) -> String {
    let mut out = serde_json::to_string(&ScriptDoc::from(script)).expect("plain data serializes");
    out.push('\n');
    out
}

pub fn from_json(text: &str) -> Result<EditScript, FormatError> {
    let doc: ScriptDoc = serde_json::from_str(text)?;
    let mut ops = Vec::with_capacity(doc.ops.len());
    for (index, op) in doc.ops.into_iter().enumerate() {
        let token = |t: Option<String>, field: &str| -> Result<Token, FormatError> {
            let text = t.ok_or_else(|| FormatError::Malformed {
                line: index + 1,
                message: format!("op {index} is missing `{field}`"),
            })?;
            Token::new(text).map_err(|_| FormatError::Malformed {
                line: index + 1,
                message: format!("op {index} has an empty `{field}`"),
            })
        };
        let reject = |present: bool, field: &str| {
            if present {
                Err(FormatError::Malformed {
                    line: index + 1,
                    message: format!("op {index} must not carry `{field}`"),
                })
            } else {
                Ok(())
            }
        };
        let (source_pos, target_pos) = (op.source_pos, op.target_pos);
        ops.push(match op.kind {
            KindDoc::Insert => {
                reject(op.old.is_some(), "old")?;
                EditOp::Insert {
                    source_pos,
                    target_pos,
                    new: token(op.new, "new")?,
                }
            }
            KindDoc::Delete => {
                reject(op.new.is_some(), "new")?;
                EditOp::Delete {
                    source_pos,
                    target_pos,
                    old: token(op.old, "old")?,
                }
            }
            KindDoc::Substitute => EditOp::Substitute {
                source_pos,
                target_pos,
                old: token(op.old, "old")?,
                new: token(op.new, "new")?,
            },
        });
    }
    Ok(EditScript::canonicalize(ops, doc.source_len, doc.target_len)?)
}
