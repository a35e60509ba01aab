//! Annotated corpora, raw input text and abbreviation induction.
//!
//! An annotated corpus holds one sentence per line; the line break is the
//! boundary annotation.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::candidates::{self, Candidate, Mark};
use crate::error::{Error, Result};
use crate::maxent::Outcome;

/// Declared encoding of input files. Candidate marks are always the ASCII
/// bytes `.`, `?` and `!`, which are identical under both encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Encoding {
    #[default]
    Utf8,
    /// ISO-8859-1: every byte maps to the code point of the same value.
    Latin1,
}

impl Encoding {
    pub fn name(self) -> &'static str {
        match self {
            Encoding::Utf8 => "utf8",
            Encoding::Latin1 => "latin1",
        }
    }

    fn decode(self, bytes: Vec<u8>, path: &Path) -> Result<String> {
        match self {
            Encoding::Utf8 => String::from_utf8(bytes).map_err(|e| Error::Decode {
                path: path.to_path_buf(),
                encoding: self.name(),
                offset: e.utf8_error().valid_up_to(),
            }),
            Encoding::Latin1 => Ok(bytes.into_iter().map(char::from).collect()),
        }
    }

    /// Maps a byte offset in decoded text back to the source file.
    pub fn source_offset(self, decoded: &str, offset: usize) -> usize {
        match self {
            Encoding::Utf8 => offset,
            Encoding::Latin1 => decoded[..offset].chars().count(),
        }
    }
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "").as_str() {
            "utf8" => Ok(Encoding::Utf8),
            "latin1" | "iso88591" => Ok(Encoding::Latin1),
            other => Err(Error::Invalid(format!("unknown encoding `{other}`"))),
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn read_text(path: &Path, encoding: Encoding) -> Result<String> {
    let bytes = fs::read(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    encoding.decode(bytes, path)
}

/// Reads a file verbatim.
pub fn load_raw(path: &Path, encoding: Encoding) -> Result<String> {
    read_text(path, encoding)
}

/// Sentences of a boundary-annotated corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedCorpus {
    sentences: Vec<String>,
    token_count: usize,
}

impl AnnotatedCorpus {
    /// Builds a corpus from sentence lines. Blank lines are skipped and
    /// surrounding whitespace is trimmed. Returns `None` if nothing remains.
    pub fn from_lines<I, S>(lines: I) -> Option<AnnotatedCorpus>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let sentences: Vec<String> = lines
            .into_iter()
            .map(|l| l.as_ref().trim_matches(candidates::is_separator).to_string())
            .filter(|l| !l.is_empty())
            .collect();
        if sentences.is_empty() {
            return None;
        }
        let token_count = sentences
            .iter()
            .map(|s| candidates::tokenize(s).len())
            .sum();
        Some(AnnotatedCorpus {
            sentences,
            token_count,
        })
    }

    pub fn parse(text: &str) -> Option<AnnotatedCorpus> {
        AnnotatedCorpus::from_lines(text.lines())
    }

    pub fn sentences(&self) -> &[String] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.token_count
    }

    /// Text in the annotated format, one sentence per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.sentences {
            out.push_str(s);
            out.push('\n');
        }
        out
    }
}

pub fn load_annotated(path: &Path, encoding: Encoding) -> Result<AnnotatedCorpus> {
    let text = read_text(path, encoding)?;
    AnnotatedCorpus::parse(&text).ok_or_else(|| Error::EmptyCorpus(path.to_path_buf()))
}

/// Every candidate of a corpus with its gold label.
#[derive(Debug, Clone)]
pub struct LabeledCandidateSet {
    pub tokens: Vec<String>,
    pub candidates: Vec<(Candidate, Outcome)>,
    pub sentence_count: usize,
    /// Indices of sentences whose final token has no candidate mark.
    pub unterminated: Vec<usize>,
}

impl LabeledCandidateSet {
    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn n_yes(&self) -> usize {
        self.candidates
            .iter()
            .filter(|(_, l)| *l == Outcome::Yes)
            .count()
    }

    pub fn n_no(&self) -> usize {
        self.len() - self.n_yes()
    }
}

/// Scans the corpus as one token stream and labels each candidate: `Yes`
/// iff the mark is the last character of a sentence-final token.
pub fn label_candidates(corpus: &AnnotatedCorpus) -> LabeledCandidateSet {
    let mut tokens = Vec::with_capacity(corpus.token_count());
    let mut final_token = Vec::with_capacity(corpus.token_count());
    let mut unterminated = Vec::new();
    for (i, sentence) in corpus.sentences().iter().enumerate() {
        let toks = candidates::tokenize(sentence);
        let n = toks.len();
        for (j, t) in toks.iter().enumerate() {
            tokens.push(t.text.to_string());
            final_token.push(j + 1 == n);
        }
        if let Some(last) = toks.last() {
            if !last.text.bytes().any(|b| Mark::from_byte(b).is_some()) {
                unterminated.push(i);
            }
        }
    }
    if !unterminated.is_empty() {
        log::warn!(
            "{} sentence(s) end in a token without . ? or !",
            unterminated.len()
        );
    }
    let candidates = candidates::scan(&tokens)
        .into_iter()
        .map(|c| {
            let label = if final_token[c.token_index] && c.is_token_final() {
                Outcome::Yes
            } else {
                Outcome::No
            };
            (c, label)
        })
        .collect();
    LabeledCandidateSet {
        tokens,
        candidates,
        sentence_count: corpus.len(),
        unterminated,
    }
}

/// Tokens known to contain a non-boundary period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbbreviationSet {
    entries: BTreeSet<String>,
    case_sensitive: bool,
}

impl Default for AbbreviationSet {
    fn default() -> Self {
        AbbreviationSet::new(true)
    }
}

impl AbbreviationSet {
    pub fn new(case_sensitive: bool) -> AbbreviationSet {
        AbbreviationSet {
            entries: BTreeSet::new(),
            case_sensitive,
        }
    }

    fn normalize<'a>(&self, token: &'a str) -> std::borrow::Cow<'a, str> {
        if self.case_sensitive {
            token.into()
        } else {
            token.to_lowercase().into()
        }
    }

    /// Adds `token` if it contains a period. Returns whether it was added.
    pub fn insert(&mut self, token: &str) -> bool {
        if !token.contains('.') {
            return false;
        }
        let t = self.normalize(token).into_owned();
        self.entries.insert(t)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.entries.contains(self.normalize(token).as_ref())
    }

    pub fn is_case_sensitive(&self) -> bool {
        self.case_sensitive
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }

    /// One entry per line, sorted.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(e);
            out.push('\n');
        }
        out
    }
}

/// Collects every token holding a `.` candidate labeled `No`. A
/// sentence-final `D.C.` still qualifies through its interior period.
pub fn induce_abbreviations(labeled: &LabeledCandidateSet, case_sensitive: bool) -> AbbreviationSet {
    let mut set = AbbreviationSet::new(case_sensitive);
    for (c, label) in &labeled.candidates {
        if c.mark == Mark::Period && *label == Outcome::No {
            set.insert(&c.token);
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn corpus(lines: &[&str]) -> AnnotatedCorpus {
        AnnotatedCorpus::from_lines(lines).unwrap()
    }

    fn labels(lines: &[&str]) -> Vec<(String, Outcome)> {
        label_candidates(&corpus(lines))
            .candidates
            .into_iter()
            .map(|(c, l)| (c.token, l))
            .collect()
    }

    #[test]
    fn load_minimal_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "Hello world .").unwrap();
        let c = load_annotated(f.path(), Encoding::Utf8).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.token_count(), 3);
    }

    #[test]
    fn load_two_sentences_with_noise() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(
            f,
            "ANLP Corp. chairman Dr. Smith resigned.  \r\n\n\n He lives in Washington, D.C.\n\n"
        )
        .unwrap();
        let c = load_annotated(f.path(), Encoding::Utf8).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.sentences()[1], "He lives in Washington, D.C.");
    }

    #[test]
    fn blank_file_is_an_error() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, "\n  \n\t\n").unwrap();
        assert!(matches!(
            load_annotated(f.path(), Encoding::Utf8),
            Err(Error::EmptyCorpus(_))
        ));
        assert!(matches!(
            load_annotated(Path::new("/nonexistent/corpus.txt"), Encoding::Utf8),
            Err(Error::Read { .. })
        ));
    }

    #[test]
    fn raw_text_is_verbatim() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        write!(f, "A. B.").unwrap();
        assert_eq!(load_raw(f.path(), Encoding::Utf8).unwrap(), "A. B.");

        let empty = tempfile::NamedTempFile::new().unwrap();
        assert_eq!(load_raw(empty.path(), Encoding::Utf8).unwrap(), "");

        let mut bad = tempfile::NamedTempFile::new().unwrap();
        bad.write_all(b"caf\xe9.").unwrap();
        assert!(matches!(
            load_raw(bad.path(), Encoding::Utf8),
            Err(Error::Decode { offset: 3, .. })
        ));
        assert_eq!(load_raw(bad.path(), Encoding::Latin1).unwrap(), "café.");
    }

    #[test]
    fn latin1_offsets_map_back_to_bytes() {
        let text = "café. Ok.";
        let dot = text.find(". ").unwrap();
        assert_eq!(Encoding::Latin1.source_offset(text, dot), 4);
        assert_eq!(Encoding::Utf8.source_offset(text, dot), 5);
    }

    #[test]
    fn label_single_sentence() {
        assert_eq!(labels(&["Hello world ."]), [(".".to_string(), Outcome::Yes)]);
    }

    #[test]
    fn label_worked_example() {
        let l = labels(&["ANLP Corp. chairman Dr. Smith resigned."]);
        let got: Vec<_> = l.iter().map(|(t, o)| (t.as_str(), *o)).collect();
        assert_eq!(
            got,
            [
                ("Corp.", Outcome::No),
                ("Dr.", Outcome::No),
                ("resigned.", Outcome::Yes)
            ]
        );
    }

    #[test]
    fn label_sentence_final_initialism() {
        let l = labels(&["He lives in Washington, D.C."]);
        let got: Vec<_> = l.iter().map(|(t, o)| (t.as_str(), *o)).collect();
        assert_eq!(got, [("D.C.", Outcome::No), ("D.C.", Outcome::Yes)]);
    }

    #[test]
    fn unterminated_sentences_are_flagged() {
        let set = label_candidates(&corpus(&["Markets rally", "Prices rose 3.5 percent."]));
        assert_eq!(set.unterminated, [0]);
        assert_eq!(set.n_yes(), 1);
        assert_eq!(set.n_no(), 1);
    }

    #[test]
    fn neighbors_cross_sentence_lines() {
        let set = label_candidates(&corpus(&["He left.", "She stayed."]));
        let (first, _) = &set.candidates[0];
        assert_eq!(first.next_word.as_deref(), Some("She"));
        assert_eq!(set.candidates[1].0.prev_word.as_deref(), Some("She"));
        assert_eq!(set.candidates[1].0.next_word, None);
    }

    #[test]
    fn abbreviations_from_worked_example() {
        let set = label_candidates(&corpus(&["ANLP Corp. chairman Dr. Smith resigned."]));
        let abbrevs = induce_abbreviations(&set, true);
        assert_eq!(abbrevs.iter().collect::<Vec<_>>(), ["Corp.", "Dr."]);

        let set = label_candidates(&corpus(&["Hello world ."]));
        assert!(induce_abbreviations(&set, true).is_empty());

        let set = label_candidates(&corpus(&["He lives in Washington, D.C."]));
        assert_eq!(
            induce_abbreviations(&set, true).iter().collect::<Vec<_>>(),
            ["D.C."]
        );
    }

    #[test]
    fn question_marks_are_not_abbreviations() {
        let set = label_candidates(&corpus(&["Yahoo! Inc. said why? no."]));
        let abbrevs = induce_abbreviations(&set, true);
        assert_eq!(abbrevs.iter().collect::<Vec<_>>(), ["Inc."]);
    }

    #[test]
    fn case_insensitive_lookup() {
        let set = label_candidates(&corpus(&["See Fig. 3 now."]));
        let abbrevs = induce_abbreviations(&set, false);
        assert!(abbrevs.contains("FIG."));
        assert!(abbrevs.contains("fig."));
        assert!(!induce_abbreviations(&set, true).contains("fig."));
    }

    #[test]
    fn abbreviation_file_is_sorted() {
        let mut a = AbbreviationSet::default();
        a.insert("Mr.");
        a.insert("Corp.");
        a.insert("nodot");
        assert_eq!(a.to_text(), "Corp.\nMr.\n");
    }
}
