//! Brute-force ground truth for small inputs.
//!
//! Nothing here uses the dynamic-programming tables in [`crate::matrix`]:
//! distances come from plain recursion and minimal scripts from exhaustive
//! enumeration. The only exception is [`tie_rule_witness_search`], which
//! runs the matrix under [`TieRule::Unguarded`] on purpose and checks it
//! against the oracle.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::matrix::{script_matrix_with_rule, TieRule};
use crate::script::{EditOp, EditScript};
use crate::tokens::{Granularity, Token, TokenSequence};

/// Largest sequence length [`oracle_distance`] accepts.
pub const DISTANCE_LIMIT: usize = 8;
/// Largest sequence length [`oracle_min_scripts`] accepts.
pub const ENUMERATION_LIMIT: usize = 6;
/// Largest script length [`oracle_min_scripts`] enumerates.
pub const SCRIPT_LEN_LIMIT: usize = 6;
/// Largest string length [`tie_rule_witness_search`] accepts.
pub const PROBE_LEN_LIMIT: usize = 6;
/// Largest alphabet [`tie_rule_witness_search`] accepts.
pub const PROBE_ALPHABET_LIMIT: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// An input exceeds the guard for the requested search.
    Guard { what: &'static str, value: usize, limit: usize },
    GranularityMismatch,
    /// No script of length `<= max_len` turns the source into the target.
    NotFound { max_len: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::Guard { what, value, limit } => {
                write!(f, "{what} {value} exceeds the oracle limit of {limit}")
            }
            OracleError::GranularityMismatch => f.write_str("granularity mismatch"),
            OracleError::NotFound { max_len } => {
                write!(f, "no script of length at most {max_len} reaches the target")
            }
        }
    }
}

impl core::error::Error for OracleError {}

fn guard(what: &'static str, value: usize, limit: usize) -> Result<(), OracleError> {
    if value > limit {
        Err(OracleError::Guard { what, value, limit })
    } else {
        Ok(())
    }
}

/// Levenshtein distance by unmemoized recursion over all three edits plus
/// the free match step. Exponential; inputs are capped at [`DISTANCE_LIMIT`].
pub fn oracle_distance(a: &TokenSequence, b: &TokenSequence) -> Result<usize, OracleError> {
    if a.granularity() != b.granularity() {
        return Err(OracleError::GranularityMismatch);
    }
    guard("source length", a.len(), DISTANCE_LIMIT)?;
    guard("target length", b.len(), DISTANCE_LIMIT)?;
    Ok(recurse(a.tokens(), b.tokens()))
}

fn recurse(a: &[Token], b: &[Token]) -> usize {
    match (a.split_first(), b.split_first()) {
        (None, _) => b.len(),
        (_, None) => a.len(),
        (Some((ha, ta)), Some((hb, tb))) => {
            let delete = 1 + recurse(ta, b);
            let insert = 1 + recurse(a, tb);
            let diagonal = recurse(ta, tb) + usize::from(ha != hb);
            delete.min(insert).min(diagonal)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub min_length: usize,
    /// Number of distinct canonical scripts of `min_length` that work.
    pub witness_count: usize,
    pub witness: EditScript,
}

/// Finds the shortest scripts from `a` to `b` by trying every canonical
/// script of length 0, 1, ..., `max_len`.
///
/// Inserted and substituted tokens range over the tokens occurring in `a`
/// or `b`.
pub fn oracle_min_scripts(
    a: &TokenSequence,
    b: &TokenSequence,
    max_len: usize,
) -> Result<OracleResult, OracleError> {
    if a.granularity() != b.granularity() {
        return Err(OracleError::GranularityMismatch);
    }
    guard("source length", a.len(), ENUMERATION_LIMIT)?;
    guard("target length", b.len(), ENUMERATION_LIMIT)?;
    guard("script length", max_len, SCRIPT_LEN_LIMIT)?;

    let mut alphabet: Vec<Token> = a.tokens().iter().chain(b.tokens()).cloned().collect();
    alphabet.sort();
    alphabet.dedup();

    for len in 0..=max_len {
        let mut search = Enumeration {
            source: a.tokens(),
            target: b.tokens(),
            alphabet: &alphabet,
            ops: Vec::with_capacity(len),
            output: Vec::with_capacity(b.len() + len),
            found: 0,
            first: None,
        };
        search.walk(0, len);
        if let Some(ops) = search.first {
            let witness = EditScript::canonicalize(ops, a.len(), b.len())
                .expect("enumerated scripts are canonical");
            return Ok(OracleResult {
                min_length: len,
                witness_count: search.found,
                witness,
            });
        }
    }
    Err(OracleError::NotFound { max_len })
}

struct Enumeration<'a> {
    source: &'a [Token],
    target: &'a [Token],
    alphabet: &'a [Token],
    ops: Vec<EditOp>,
    output: Vec<Token>,
    found: usize,
    first: Option<Vec<EditOp>>,
}

impl Enumeration<'_> {
    /// Standing before source token `next`, with exactly `budget` ops left
    /// to place. Each canonical script is reached by exactly one path.
    fn walk(&mut self, next: usize, budget: usize) {
        if budget > 0 {
            for k in 0..self.alphabet.len() {
                let new = self.alphabet[k].clone();
                self.ops.push(EditOp::Insert {
                    source_pos: next,
                    target_pos: self.output.len(),
                    new: new.clone(),
                });
                self.output.push(new);
                self.walk(next, budget - 1);
                self.output.pop();
                self.ops.pop();
            }
        }
        if next == self.source.len() {
            if budget == 0 && self.output == self.target {
                self.found += 1;
                if self.first.is_none() {
                    self.first = Some(self.ops.clone());
                }
            }
            return;
        }

        let old = self.source[next].clone();
        self.output.push(old.clone());
        self.walk(next + 1, budget);
        self.output.pop();

        if budget == 0 {
            return;
        }
        self.ops.push(EditOp::Delete {
            source_pos: next,
            target_pos: self.output.len(),
            old: old.clone(),
        });
        self.walk(next + 1, budget - 1);
        self.ops.pop();

        for k in 0..self.alphabet.len() {
            let new = self.alphabet[k].clone();
            if new == old {
                continue;
            }
            self.ops.push(EditOp::Substitute {
                source_pos: next,
                target_pos: self.output.len(),
                old: old.clone(),
                new: new.clone(),
            });
            self.output.push(new);
            self.walk(next + 1, budget - 1);
            self.output.pop();
            self.ops.pop();
        }
    }
}

/// A pair on which the unguarded tie rule yields a longer-than-minimal script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieRuleWitness {
    pub source: String,
    pub target: String,
    pub distance: usize,
    pub unguarded_len: usize,
    pub unguarded_script: EditScript,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieRuleReport {
    pub max_len: usize,
    pub alphabet_size: usize,
    pub pairs_checked: usize,
    pub witness_count: usize,
    /// First witness in enumeration order (shorter strings first).
    pub first_witness: Option<TieRuleWitness>,
    /// Unguarded scripts that failed to turn source into target.
    pub invalid_scripts: usize,
}

/// Runs the unguarded tie rule on every pair of strings of length
/// `<= max_len` over the first `alphabet_size` letters of `abc` and reports
/// pairs where its script is longer than the true distance.
pub fn tie_rule_witness_search(
    max_len: usize,
    alphabet_size: usize,
) -> Result<TieRuleReport, OracleError> {
    guard("string length", max_len, PROBE_LEN_LIMIT)?;
    guard("alphabet size", alphabet_size, PROBE_ALPHABET_LIMIT)?;
    let strings = all_strings(max_len, alphabet_size);
    let mut report = TieRuleReport {
        max_len,
        alphabet_size,
        pairs_checked: 0,
        witness_count: 0,
        first_witness: None,
        invalid_scripts: 0,
    };
    for s in &strings {
        for t in &strings {
            let a = crate::tokens::tokenize(s, Granularity::Char);
            let b = crate::tokens::tokenize(t, Granularity::Char);
            let matrix = script_matrix_with_rule(&a, &b, TieRule::Unguarded)
                .expect("char sequences share granularity");
            let script = matrix.final_script();
            let distance = memo_distance(a.tokens(), b.tokens());
            report.pairs_checked += 1;
            if script.apply(&a).map(|out| out != b).unwrap_or(true) {
                report.invalid_scripts += 1;
            }
            if script.len() > distance {
                report.witness_count += 1;
                if report.first_witness.is_none() {
                    report.first_witness = Some(TieRuleWitness {
                        source: s.clone(),
                        target: t.clone(),
                        distance,
                        unguarded_len: script.len(),
                        unguarded_script: script,
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Every string of length `0..=max_len` over the first `k` letters, shortest
/// first, then lexicographic.
pub fn all_strings(max_len: usize, k: usize) -> Vec<String> {
    let letters: Vec<char> = ('a'..='z').take(k).collect();
    let mut out = alloc::vec![String::new()];
    let mut layer = alloc::vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * k);
        for s in &layer {
            for &c in &letters {
                let mut t = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// The same recursion as [`oracle_distance`], cached on suffix lengths so
/// the probe can sweep large pair sets.
fn memo_distance(a: &[Token], b: &[Token]) -> usize {
    fn go(a: &[Token], b: &[Token], memo: &mut BTreeMap<(usize, usize), usize>) -> usize {
        if let Some(&d) = memo.get(&(a.len(), b.len())) {
            return d;
        }
        let d = match (a.split_first(), b.split_first()) {
            (None, _) => b.len(),
            (_, None) => a.len(),
            (Some((ha, ta)), Some((hb, tb))) => {
                let delete = 1 + go(ta, b, memo);
                let insert = 1 + go(a, tb, memo);
                let diagonal = go(ta, tb, memo) + usize::from(ha != hb);
                delete.min(insert).min(diagonal)
            }
        };
        memo.insert((a.len(), b.len()), d);
        d
    }
    go(a, b, &mut BTreeMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tokens::tokenize;

    fn chars(s: &str) -> TokenSequence {
        tokenize(s, Granularity::Char)
    }

    #[test]
    fn distances() {
        assert_eq!(oracle_distance(&chars("abac"), &chars("aabc")), Ok(2));
        assert_eq!(oracle_distance(&chars(""), &chars("abc")), Ok(3));
        assert_eq!(oracle_distance(&chars("kitt"), &chars("sitt")), Ok(1));
    }

    #[test]
    fn distance_guard() {
        assert!(matches!(
            oracle_distance(&chars("abcdefghi"), &chars("a")),
            Err(OracleError::Guard { limit: 8, .. })
        ));
    }

    #[test]
    fn min_scripts() {
        let r = oracle_min_scripts(&chars("abac"), &chars("aabc"), 3).unwrap();
        assert_eq!(r.min_length, 2);
        assert_eq!(r.witness.apply(&chars("abac")).unwrap(), chars("aabc"));

        let r = oracle_min_scripts(&chars("xyz"), &chars("xyz"), 0).unwrap();
        assert_eq!(r.min_length, 0);
        assert_eq!(r.witness_count, 1);
        assert!(r.witness.is_empty());
    }

    #[test]
    fn swap_needs_two() {
        // Brute enumeration over 1- and 2-op scripts, alphabet {a, b}:
        // "ab" -> "ba" has witnesses sub+sub, del a/ins a, ins b/del b.
        let r = oracle_min_scripts(&chars("ab"), &chars("ba"), 2).unwrap();
        assert_eq!(r.min_length, 2);
        assert_eq!(r.witness_count, 3);
    }

    #[test]
    fn not_found_within_budget() {
        assert_eq!(
            oracle_min_scripts(&chars("ab"), &chars("ba"), 1),
            Err(OracleError::NotFound { max_len: 1 })
        );
    }

    #[test]
    fn strings_enumeration() {
        let s = all_strings(2, 2);
        assert_eq!(s, ["", "a", "b", "aa", "ab", "ba", "bb"]);
    }

    #[test]
    fn probe_guard() {
        assert!(tie_rule_witness_search(7, 2).is_err());
        assert!(tie_rule_witness_search(2, 4).is_err());
    }
}
