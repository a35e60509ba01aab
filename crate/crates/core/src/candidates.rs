//! Candidate scanning.
//!
//! Every occurrence of `.`, `?` or `!` inside a whitespace-delimited token is
//! a candidate, including occurrences in the middle of a token (`D.C.`,
//! `3.5`) and each mark of a run such as `...` or `!!!`. The classifier, not
//! the scanner, decides which of them end a sentence.

use std::fmt;

/// One of the three candidate symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    Period,
    Question,
    Exclamation,
}

impl Mark {
    pub fn from_byte(b: u8) -> Option<Mark> {
        match b {
            b'.' => Some(Mark::Period),
            b'?' => Some(Mark::Question),
            b'!' => Some(Mark::Exclamation),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Mark::Period => '.',
            Mark::Question => '?',
            Mark::Exclamation => '!',
        }
    }
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Space, tab, newline and carriage return. Nothing else separates tokens.
pub fn is_separator(c: char) -> bool {
    matches!(c, ' ' | '\t' | '\n' | '\r')
}

/// A token borrowed from some text, with its byte offset in that text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'a> {
    pub text: &'a str,
    pub start: usize,
}

impl Token<'_> {
    pub fn end(&self) -> usize {
        self.start + self.text.len()
    }
}

/// Splits `text` into maximal runs of non-separator characters.
pub fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if is_separator(c) {
            if let Some(s) = start.take() {
                tokens.push(Token {
                    text: &text[s..i],
                    start: s,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &text[s..],
            start: s,
        });
    }
    tokens
}

/// A putative sentence boundary.
///
/// `prev_word` and `next_word` are `None` at the edges of the token stream;
/// feature extraction renders that as the reserved `NULL` value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Candidate {
    pub mark: Mark,
    pub token: String,
    pub token_index: usize,
    /// Byte index of the mark inside `token`.
    pub offset_in_token: usize,
    pub prev_word: Option<String>,
    pub next_word: Option<String>,
    /// Byte offset of the mark in the scanned stream.
    pub stream_position: usize,
}

impl Candidate {
    pub fn prefix(&self) -> &str {
        &self.token[..self.offset_in_token]
    }

    pub fn suffix(&self) -> &str {
        &self.token[self.offset_in_token + 1..]
    }

    /// True when the mark is the last character of its token.
    pub fn is_token_final(&self) -> bool {
        self.offset_in_token + 1 == self.token.len()
    }
}

/// Tokens immediately left and right of `index`.
pub fn neighbors<S: AsRef<str>>(tokens: &[S], index: usize) -> (Option<&str>, Option<&str>) {
    let prev = index
        .checked_sub(1)
        .and_then(|i| tokens.get(i))
        .map(AsRef::as_ref);
    let next = tokens.get(index + 1).map(AsRef::as_ref);
    (prev, next)
}

/// Scans positioned tokens, e.g. the output of [`tokenize`].
pub fn scan_tokens(tokens: &[Token<'_>]) -> Vec<Candidate> {
    let texts: Vec<&str> = tokens.iter().map(|t| t.text).collect();
    let mut out = Vec::new();
    for (i, tok) in tokens.iter().enumerate() {
        let mut marks = tok
            .text
            .bytes()
            .enumerate()
            .filter_map(|(off, b)| Mark::from_byte(b).map(|m| (off, m)))
            .peekable();
        if marks.peek().is_none() {
            continue;
        }
        let (prev, next) = neighbors(&texts, i);
        for (off, mark) in marks {
            out.push(Candidate {
                mark,
                token: tok.text.to_string(),
                token_index: i,
                offset_in_token: off,
                prev_word: prev.map(str::to_string),
                next_word: next.map(str::to_string),
                stream_position: tok.start + off,
            });
        }
    }
    out
}

/// Scans a bare token sequence. Stream positions are computed as if the
/// tokens were joined with single spaces.
pub fn scan<S: AsRef<str>>(tokens: &[S]) -> Vec<Candidate> {
    let mut pos = 0;
    let positioned: Vec<Token<'_>> = tokens
        .iter()
        .map(|t| {
            let text = t.as_ref();
            let tok = Token { text, start: pos };
            pos += text.len() + 1;
            tok
        })
        .collect();
    scan_tokens(&positioned)
}
