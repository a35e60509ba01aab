//! Contextual predicates and the predicate registry.
//!
//! Two template sets are supported. `best` relies on hand-made lexicons of
//! honorifics and corporate designators plus orthographic cues; `portable`
//! only looks at token identities and the abbreviation list induced from the
//! training corpus.

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::candidates::Candidate;
use crate::corpus::{AbbreviationSet, LabeledCandidateSet};
use crate::error::{Error, Result};

/// Rendered value of an empty Prefix/Suffix or a missing neighbor.
pub const NULL: &str = "NULL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TemplateSet {
    Best,
    Portable,
}

impl TemplateSet {
    pub fn name(self) -> &'static str {
        match self {
            TemplateSet::Best => "best",
            TemplateSet::Portable => "portable",
        }
    }
}

impl FromStr for TemplateSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "best" => Ok(TemplateSet::Best),
            "portable" => Ok(TemplateSet::Portable),
            other => Err(Error::Invalid(format!(
                "unknown template set `{other}` (expected best or portable)"
            ))),
        }
    }
}

impl fmt::Display for TemplateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub(crate) fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Hand-crafted word lists used by the `best` templates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceLexicons {
    pub honorifics: BTreeSet<String>,
    pub corporate_designators: BTreeSet<String>,
}

fn parse_lexicon(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect()
}

fn read_lexicon(path: &Path, what: &str) -> Result<BTreeSet<String>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let set = parse_lexicon(&text);
    if set.is_empty() {
        return Err(Error::MissingResource(format!(
            "{what} lexicon {} has no entries",
            path.display()
        )));
    }
    Ok(set)
}

impl ResourceLexicons {
    pub fn from_texts(honorifics: &str, designators: &str) -> ResourceLexicons {
        ResourceLexicons {
            honorifics: parse_lexicon(honorifics),
            corporate_designators: parse_lexicon(designators),
        }
    }

    /// The lists shipped in `data/`.
    pub fn bundled() -> ResourceLexicons {
        ResourceLexicons::from_texts(
            include_str!("../data/honorifics.txt"),
            include_str!("../data/designators.txt"),
        )
    }

    /// Reads both lists; either path being absent is a missing-resource error.
    pub fn load(honorifics: Option<&Path>, designators: Option<&Path>) -> Result<ResourceLexicons> {
        let h = honorifics.ok_or_else(|| {
            Error::MissingResource(
                "honorifics lexicon (--honorifics) is required for best templates".into(),
            )
        })?;
        let d = designators.ok_or_else(|| {
            Error::MissingResource(
                "corporate designator lexicon (--designators) is required for best templates"
                    .into(),
            )
        })?;
        Ok(ResourceLexicons {
            honorifics: read_lexicon(h, "honorifics")?,
            corporate_designators: read_lexicon(d, "corporate designator")?,
        })
    }

    /// Content hash over both lists, independent of file layout and comments.
    pub fn checksum(&self) -> String {
        let mut buf = String::new();
        for h in &self.honorifics {
            buf.push_str(h);
            buf.push('\n');
        }
        buf.push('\0');
        for d in &self.corporate_designators {
            buf.push_str(d);
            buf.push('\n');
        }
        sha256_hex(buf.as_bytes())
    }
}

/// Renders a template value. Empty and missing values become `NULL`; a real
/// value spelled like the sentinel gets a backslash so keys stay injective.
fn value(v: Option<&str>) -> Cow<'_, str> {
    match v {
        None | Some("") => Cow::Borrowed(NULL),
        Some(s) if s.trim_start_matches('\\') == NULL => Cow::Owned(format!("\\{s}")),
        Some(s) => Cow::Borrowed(s),
    }
}

fn first_letter_is_upper(word: &str) -> bool {
    word.chars()
        .find(|c| c.is_alphabetic())
        .is_some_and(char::is_uppercase)
}

fn is_all_caps(word: &str) -> bool {
    word.chars().any(char::is_uppercase) && !word.chars().any(char::is_lowercase)
}

type CharClass = (&'static str, fn(char) -> bool);

fn char_classes(side: &str, text: &str, out: &mut Vec<String>) {
    let classes: [CharClass; 6] = [
        ("Digit", |c| c.is_ascii_digit()),
        ("Upper", char::is_uppercase),
        ("Lower", char::is_lowercase),
        ("Period", |c| c == '.'),
        ("Comma", |c| c == ','),
        ("Quote", |c| matches!(c, '"' | '\'')),
    ];
    for (name, test) in classes {
        if text.chars().any(test) {
            out.push(format!("{side}Has{name}"));
        }
    }
}

fn word_features(side: &str, word: Option<&str>, lex: &ResourceLexicons, out: &mut Vec<String>) {
    let Some(w) = word else {
        out.push(format!("{side}={NULL}"));
        return;
    };
    if first_letter_is_upper(w) {
        out.push(format!("{side}IsCapitalized"));
    }
    if is_all_caps(w) {
        out.push(format!("{side}IsAllCaps"));
    }
    if lex.honorifics.contains(w) {
        out.push(format!("{side}IsHonorific"));
    }
    if lex.corporate_designators.contains(w) {
        out.push(format!("{side}IsCorporateDesignator"));
    }
    if w.ends_with('.') {
        out.push(format!("{side}EndsWithPeriod"));
    }
}

fn finish(mut keys: Vec<String>) -> Vec<String> {
    keys.sort_unstable();
    keys.dedup();
    keys
}

/// Predicates of the resource-backed template set, sorted.
pub fn extract_best(c: &Candidate, lex: &ResourceLexicons) -> Vec<String> {
    let mut out = vec![
        format!("Prefix={}", value(Some(c.prefix()))),
        format!("Suffix={}", value(Some(c.suffix()))),
    ];
    char_classes("Prefix", c.prefix(), &mut out);
    char_classes("Suffix", c.suffix(), &mut out);
    if lex.honorifics.contains(&c.token) {
        out.push("PrefixFeature=Honorific".into());
    }
    if lex.corporate_designators.contains(&c.token) {
        out.push("PrefixFeature=CorporateDesignator".into());
    }
    word_features("PreviousWord", c.prev_word.as_deref(), lex, &mut out);
    word_features("FollowingWord", c.next_word.as_deref(), lex, &mut out);
    finish(out)
}

fn prefix_is_abbreviation(prefix: &str, abbrevs: &AbbreviationSet) -> bool {
    !prefix.is_empty() && (abbrevs.contains(prefix) || abbrevs.contains(&format!("{prefix}.")))
}

/// Predicates of the portable template set, sorted.
pub fn extract_portable(c: &Candidate, abbrevs: &AbbreviationSet) -> Vec<String> {
    const ABBR: &str = "Feature=InducedAbbreviation";
    let mut out = vec![
        format!("Prefix={}", value(Some(c.prefix()))),
        format!("Suffix={}", value(Some(c.suffix()))),
        format!("PreviousWord={}", value(c.prev_word.as_deref())),
        format!("FollowingWord={}", value(c.next_word.as_deref())),
    ];
    if prefix_is_abbreviation(c.prefix(), abbrevs) {
        out.push(format!("Prefix{ABBR}"));
    }
    if !c.suffix().is_empty() && abbrevs.contains(c.suffix()) {
        out.push(format!("Suffix{ABBR}"));
    }
    if c.prev_word.as_deref().is_some_and(|w| abbrevs.contains(w)) {
        out.push(format!("PreviousWord{ABBR}"));
    }
    if c.next_word.as_deref().is_some_and(|w| abbrevs.contains(w)) {
        out.push(format!("FollowingWord{ABBR}"));
    }
    finish(out)
}

/// A template set bound to the resources it needs.
#[derive(Debug, Clone)]
pub enum Extractor {
    Best(ResourceLexicons),
    Portable(AbbreviationSet),
}

impl Extractor {
    pub fn template_set(&self) -> TemplateSet {
        match self {
            Extractor::Best(_) => TemplateSet::Best,
            Extractor::Portable(_) => TemplateSet::Portable,
        }
    }

    pub fn extract(&self, c: &Candidate) -> Vec<String> {
        match self {
            Extractor::Best(lex) => extract_best(c, lex),
            Extractor::Portable(abbrevs) => extract_portable(c, abbrevs),
        }
    }
}

/// Dense index over the predicates retained from training data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateRegistry {
    keys: Vec<String>,
    counts: Vec<u64>,
    index: HashMap<String, u32>,
    cutoff: u64,
}

impl PredicateRegistry {
    /// Rebuilds a registry from stored `(key, count)` pairs in index order.
    pub fn from_entries(entries: Vec<(String, u64)>, cutoff: u64) -> Result<PredicateRegistry> {
        let mut keys = Vec::with_capacity(entries.len());
        let mut counts = Vec::with_capacity(entries.len());
        let mut index = HashMap::with_capacity(entries.len());
        for (i, (key, count)) in entries.into_iter().enumerate() {
            if index.insert(key.clone(), i as u32).is_some() {
                return Err(Error::Format(format!("duplicate predicate `{key}`")));
            }
            keys.push(key);
            counts.push(count);
        }
        Ok(PredicateRegistry {
            keys,
            counts,
            index,
            cutoff,
        })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    pub fn key(&self, index: u32) -> &str {
        &self.keys[index as usize]
    }

    pub fn count(&self, index: u32) -> u64 {
        self.counts[index as usize]
    }

    pub fn get(&self, key: &str) -> Option<u32> {
        self.index.get(key).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &str, u64)> {
        self.keys
            .iter()
            .zip(&self.counts)
            .enumerate()
            .map(|(i, (k, &c))| (i as u32, k.as_str(), c))
    }

    /// Hash binding a model file to this exact registry.
    pub fn fingerprint(&self) -> String {
        let mut buf = format!("cutoff {}\n", self.cutoff);
        for (i, k, c) in self.iter() {
            buf.push_str(&format!("{i}\t{c}\t{k}\n"));
        }
        sha256_hex(buf.as_bytes())
    }

    /// Sorted indices of registered predicates; unseen keys are dropped.
    pub fn encode_keys<S: AsRef<str>>(&self, keys: &[S]) -> Vec<u32> {
        let mut idx: Vec<u32> = keys.iter().filter_map(|k| self.get(k.as_ref())).collect();
        idx.sort_unstable();
        idx.dedup();
        idx
    }
}

/// Counts predicates over the training candidates and keeps those seen at
/// least `cutoff` times. Indices follow key order, so the registry does not
/// depend on corpus order.
pub fn build_registry(
    labeled: &LabeledCandidateSet,
    extractor: &Extractor,
    cutoff: u64,
) -> Result<PredicateRegistry> {
    if labeled.is_empty() {
        return Err(Error::NoCandidates);
    }
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for (c, _) in &labeled.candidates {
        for key in extractor.extract(c) {
            *counts.entry(key).or_default() += 1;
        }
    }
    let max_count = counts.values().copied().max().unwrap_or(0);
    let kept: Vec<(String, u64)> = counts.into_iter().filter(|&(_, n)| n >= cutoff).collect();
    if kept.is_empty() {
        return Err(Error::EmptyRegistry { cutoff, max_count });
    }
    PredicateRegistry::from_entries(kept, cutoff)
}

pub fn encode(c: &Candidate, registry: &PredicateRegistry, extractor: &Extractor) -> Vec<u32> {
    registry.encode_keys(&extractor.extract(c))
}
