//! Splitting text into tokens at character, word, or line granularity.
//!
//! Every granularity round-trips losslessly: `detokenize(&tokenize(t, g)) == t`.
//!
//! * `Char` yields one token per Unicode scalar value.
//! * `Word` yields maximal runs of non-whitespace. The whitespace between
//!   them is kept on the sequence as separator metadata and does not take
//!   part in token comparison.
//! * `Line` yields one token per line, each carrying its `\n` or `\r\n`
//!   terminator. A final unterminated line is a token without terminator.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

/// Unit of atomicity for a diff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Granularity {
    Char,
    Word,
    Line,
}

impl Granularity {
    pub fn as_str(self) -> &'static str {
        match self {
            Granularity::Char => "char",
            Granularity::Word => "word",
            Granularity::Line => "line",
        }
    }
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Granularity {
    type Err = TokenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "char" => Ok(Granularity::Char),
            "word" => Ok(Granularity::Word),
            "line" => Ok(Granularity::Line),
            _ => Err(TokenError::UnknownGranularity),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenError {
    /// Input bytes were not UTF-8; `valid_up_to` is the offset of the first bad byte.
    InvalidUtf8 { valid_up_to: usize },
    EmptyToken,
    /// A token violates the shape its granularity requires.
    Malformed {
        index: usize,
        granularity: Granularity,
    },
    /// Word separators must number `tokens + 1` and contain only whitespace,
    /// with every inner separator non-empty.
    BadSeparators,
    UnknownGranularity,
}

impl fmt::Display for TokenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenError::InvalidUtf8 { valid_up_to } => {
                write!(f, "input is not valid UTF-8 (first invalid byte at offset {valid_up_to})")
            }
            TokenError::EmptyToken => f.write_str("tokens must not be empty"),
            TokenError::Malformed { index, granularity } => {
                write!(f, "token {index} is not a valid {granularity} token")
            }
            TokenError::BadSeparators => f.write_str("invalid word separator layout"),
            TokenError::UnknownGranularity => {
                f.write_str("unknown granularity (expected char, word or line)")
            }
        }
    }
}

impl core::error::Error for TokenError {}

/// A single token. Equality is exact text equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Token(String);

impl Token {
    pub fn new(text: impl Into<String>) -> Result<Self, TokenError> {
        let text = text.into();
        if text.is_empty() {
            return Err(TokenError::EmptyToken);
        }
        Ok(Token(text))
    }

    pub fn from_char(c: char) -> Self {
        let mut s = String::new();
        s.push(c);
        Token(s)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// Whether this token could have come out of `tokenize` at `granularity`.
    pub fn fits(&self, granularity: Granularity) -> bool {
        let s = self.0.as_str();
        match granularity {
            Granularity::Char => s.chars().count() == 1,
            Granularity::Word => !s.chars().any(char::is_whitespace),
            Granularity::Line => match s.find('\n') {
                None => true,
                Some(idx) => idx == s.len() - 1,
            },
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// An ordered sequence of tokens of one granularity.
///
/// For `Word` sequences `separators` holds `len() + 1` whitespace runs:
/// leading, one between each pair of tokens, and trailing. It is empty for
/// the other granularities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TokenSequence {
    granularity: Granularity,
    tokens: Vec<Token>,
    separators: Vec<String>,
}

impl TokenSequence {
    pub fn empty(granularity: Granularity) -> Self {
        let separators = match granularity {
            Granularity::Word => alloc::vec![String::new()],
            _ => Vec::new(),
        };
        TokenSequence {
            granularity,
            tokens: Vec::new(),
            separators,
        }
    }

    /// Builds a sequence from tokens, checking each fits `granularity`.
    /// Word sequences get single spaces between tokens.
    pub fn from_tokens(granularity: Granularity, tokens: Vec<Token>) -> Result<Self, TokenError> {
        let separators = match granularity {
            Granularity::Word => default_separators(tokens.len()),
            _ => Vec::new(),
        };
        Self::from_parts(granularity, tokens, separators)
    }

    /// Builds a word sequence with explicit separators.
    pub fn from_words(tokens: Vec<Token>, separators: Vec<String>) -> Result<Self, TokenError> {
        Self::from_parts(Granularity::Word, tokens, separators)
    }

    fn from_parts(
        granularity: Granularity,
        tokens: Vec<Token>,
        separators: Vec<String>,
    ) -> Result<Self, TokenError> {
        if let Some(index) = tokens.iter().position(|t| !t.fits(granularity)) {
            return Err(TokenError::Malformed { index, granularity });
        }
        if granularity == Granularity::Word {
            let last = tokens.len();
            let ok = separators.len() == tokens.len() + 1
                && separators.iter().enumerate().all(|(k, sep)| {
                    sep.chars().all(char::is_whitespace) && (k == 0 || k == last || !sep.is_empty())
                });
            if !ok {
                return Err(TokenError::BadSeparators);
            }
        } else if !separators.is_empty() {
            return Err(TokenError::BadSeparators);
        }
        Ok(TokenSequence {
            granularity,
            tokens,
            separators,
        })
    }

    pub fn granularity(&self) -> Granularity {
        self.granularity
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn separators(&self) -> &[String] {
        &self.separators
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Token> {
        self.tokens.get(index)
    }

    /// The first `len` tokens (word separators are cut to match, keeping the
    /// separator that followed the last kept token as trailing whitespace).
    pub fn prefix(&self, len: usize) -> TokenSequence {
        let len = len.min(self.tokens.len());
        let separators = if self.granularity == Granularity::Word {
            self.separators[..=len].to_vec()
        } else {
            Vec::new()
        };
        TokenSequence {
            granularity: self.granularity,
            tokens: self.tokens[..len].to_vec(),
            separators,
        }
    }
}

pub(crate) fn default_separators(tokens: usize) -> Vec<String> {
    let mut seps = Vec::with_capacity(tokens + 1);
    seps.push(String::new());
    for _ in 1..tokens {
        seps.push(String::from(" "));
    }
    if tokens > 0 {
        seps.push(String::new());
    }
    seps
}

pub fn tokenize(text: &str, granularity: Granularity) -> TokenSequence {
    match granularity {
        Granularity::Char => TokenSequence {
            granularity,
            tokens: text.chars().map(Token::from_char).collect(),
            separators: Vec::new(),
        },
        Granularity::Line => TokenSequence {
            granularity,
            tokens: text
                .split_inclusive('\n')
                .map(|line| Token(String::from(line)))
                .collect(),
            separators: Vec::new(),
        },
        Granularity::Word => tokenize_words(text),
    }
}

fn tokenize_words(text: &str) -> TokenSequence {
    let mut tokens = Vec::new();
    let mut separators = Vec::new();
    let mut rest = text;
    loop {
        let word_start = rest.find(|c: char| !c.is_whitespace()).unwrap_or(rest.len());
        separators.push(String::from(&rest[..word_start]));
        rest = &rest[word_start..];
        if rest.is_empty() {
            break;
        }
        let word_end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        tokens.push(Token(String::from(&rest[..word_end])));
        rest = &rest[word_end..];
    }
    // Text ending in a word leaves no trailing separator yet.
    if separators.len() == tokens.len() {
        separators.push(String::new());
    }
    TokenSequence {
        granularity: Granularity::Word,
        tokens,
        separators,
    }
}

/// Like [`tokenize`] but for raw bytes, which must be UTF-8.
pub fn tokenize_bytes(bytes: &[u8], granularity: Granularity) -> Result<TokenSequence, TokenError> {
    let text = core::str::from_utf8(bytes).map_err(|e| TokenError::InvalidUtf8 {
        valid_up_to: e.valid_up_to(),
    })?;
    Ok(tokenize(text, granularity))
}

pub fn detokenize(seq: &TokenSequence) -> String {
    let mut out = String::new();
    match seq.granularity {
        Granularity::Word => {
            for (sep, token) in seq.separators.iter().zip(&seq.tokens) {
                out.push_str(sep);
                out.push_str(token.as_str());
            }
            if let Some(trailing) = seq.separators.last() {
                out.push_str(trailing);
            }
        }
        _ => {
            for token in &seq.tokens {
                out.push_str(token.as_str());
            }
        }
    }
    out
}
