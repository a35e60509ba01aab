//! Trained models and their on-disk format.
//!
//! The file is line-oriented UTF-8 text with tab-separated fields:
//!
//! ```text
//! sentbound-model 1
//! templates        portable
//! correction       9
//! pi               1
//! clamp            50
//! cutoff           1
//! abbrev-case      sensitive
//! lexicons         -
//! fingerprint      <sha256 of the registry>
//! correction-alpha <ln alpha yes>  <ln alpha no>
//! registry         <k>
//! <index> <count> <key>                  (k lines)
//! features         <m>
//! <predicate> <yes|no> <ln alpha> <empirical count>   (m lines)
//! abbreviations    <n>
//! <token>                                (n lines)
//! end
//! ```
//!
//! Parameters are written with Rust's shortest round-trip float formatting,
//! so loading reproduces every bit.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::corpus::AbbreviationSet;
use crate::error::{Error, Result};
use crate::features::{PredicateRegistry, TemplateSet};
use crate::maxent::{Feature, MaxentModel, Outcome};

pub const FORMAT_MAGIC: &str = "sentbound-model";
pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub template_set: TemplateSet,
    pub registry: PredicateRegistry,
    pub abbreviations: AbbreviationSet,
    /// Checksum of the lexicons used by `best` templates.
    pub lexicon_checksum: Option<String>,
    pub maxent: MaxentModel,
    pub clamp: f64,
}

impl Model {
    pub fn registry_fingerprint(&self) -> String {
        self.registry.fingerprint()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |fields: &[&str]| {
            out.push_str(&fields.join("\t"));
            out.push('\n');
        };
        let m = &self.maxent;
        line(&[FORMAT_MAGIC, FORMAT_VERSION]);
        line(&["templates", self.template_set.name()]);
        line(&["correction", &m.correction().to_string()]);
        line(&["pi", &m.pi().to_string()]);
        line(&["clamp", &self.clamp.to_string()]);
        line(&["cutoff", &self.registry.cutoff().to_string()]);
        let case = if self.abbreviations.is_case_sensitive() {
            "sensitive"
        } else {
            "insensitive"
        };
        line(&["abbrev-case", case]);
        line(&["lexicons", self.lexicon_checksum.as_deref().unwrap_or("-")]);
        line(&["fingerprint", &self.registry_fingerprint()]);
        let [cy, cn] = m.correction_log_alpha();
        line(&["correction-alpha", &cy.to_string(), &cn.to_string()]);
        line(&["registry", &self.registry.len().to_string()]);
        for (i, key, count) in self.registry.iter() {
            line(&[&i.to_string(), &count.to_string(), key]);
        }
        line(&["features", &m.features().len().to_string()]);
        for f in m.features() {
            line(&[
                &f.predicate.to_string(),
                f.outcome.name(),
                &f.log_alpha.to_string(),
                &f.empirical.to_string(),
            ]);
        }
        line(&["abbreviations", &self.abbreviations.len().to_string()]);
        for a in self.abbreviations.iter() {
            line(&[a]);
        }
        line(&["end"]);
        out
    }

    pub fn from_text(text: &str) -> Result<Model> {
        let mut r = Reader {
            lines: text.split('\n'),
            line_no: 0,
        };
        let header = r.fields()?;
        if header.first() != Some(&FORMAT_MAGIC) {
            return Err(Error::Format("not a sentbound model file".into()));
        }
        let version = header.get(1).copied().unwrap_or("");
        if version != FORMAT_VERSION {
            return Err(Error::Version {
                found: version.to_string(),
                expected: FORMAT_VERSION.to_string(),
            });
        }
        let template_set: TemplateSet = r.value("templates")?.parse()?;
        let correction: u32 = r.parse_value("correction")?;
        let pi: f64 = r.parse_value("pi")?;
        let clamp: f64 = r.parse_value("clamp")?;
        let cutoff: u64 = r.parse_value("cutoff")?;
        let case_sensitive = match r.value("abbrev-case")? {
            "sensitive" => true,
            "insensitive" => false,
            other => return Err(r.error(format!("bad abbrev-case `{other}`"))),
        };
        let lexicon_checksum = match r.value("lexicons")? {
            "-" => None,
            sum => Some(sum.to_string()),
        };
        let fingerprint = r.value("fingerprint")?.to_string();
        let corr = r.keyed("correction-alpha", 2)?;
        let correction_log_alpha = [r.parse(corr[0])?, r.parse(corr[1])?];

        let k: usize = r.parse_value("registry")?;
        let mut entries = Vec::with_capacity(k);
        for i in 0..k {
            let line = r.next_line()?;
            let mut parts = line.splitn(3, '\t');
            let (Some(idx), Some(count), Some(key)) = (parts.next(), parts.next(), parts.next())
            else {
                return Err(r.error("malformed registry entry".into()));
            };
            if r.parse::<usize>(idx)? != i {
                return Err(r.error(format!("registry index {idx} out of order")));
            }
            entries.push((key.to_string(), r.parse(count)?));
        }
        let registry = PredicateRegistry::from_entries(entries, cutoff)?;
        let computed = registry.fingerprint();
        if computed != fingerprint {
            return Err(Error::Fingerprint {
                stored: fingerprint,
                computed,
            });
        }

        let m: usize = r.parse_value("features")?;
        let mut features = Vec::with_capacity(m);
        for _ in 0..m {
            let f = r.fields()?;
            if f.len() != 4 {
                return Err(r.error("malformed feature entry".into()));
            }
            let outcome =
                Outcome::parse(f[1]).ok_or_else(|| r.error(format!("bad outcome `{}`", f[1])))?;
            features.push(Feature {
                predicate: r.parse(f[0])?,
                outcome,
                log_alpha: r.parse(f[2])?,
                empirical: r.parse(f[3])?,
            });
        }
        let maxent =
            MaxentModel::from_parts(features, registry.len(), correction, correction_log_alpha, pi)?;

        let n: usize = r.parse_value("abbreviations")?;
        let mut abbreviations = AbbreviationSet::new(case_sensitive);
        for _ in 0..n {
            let a = r.next_line()?;
            if !abbreviations.insert(a) {
                return Err(r.error(format!("bad abbreviation `{a}`")));
            }
        }
        if r.next_line()? != "end" {
            return Err(r.error("missing end marker".into()));
        }
        Ok(Model {
            template_set,
            registry,
            abbreviations,
            lexicon_checksum,
            maxent,
            clamp,
        })
    }

    /// Writes atomically: the target is either left untouched or fully
    /// replaced.
    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_text().as_bytes())
    }

    pub fn load(path: &Path) -> Result<Model> {
        let text = fs::read_to_string(path).map_err(|source| Error::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Model::from_text(&text)
    }
}

/// Replaces `path` with `bytes` via a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let err = |source| Error::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(bytes).map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}

struct Reader<'a, I: Iterator<Item = &'a str>> {
    lines: I,
    line_no: usize,
}

impl<'a, I: Iterator<Item = &'a str>> Reader<'a, I> {
    fn error(&self, msg: String) -> Error {
        Error::Format(format!("line {}: {msg}", self.line_no))
    }

    fn next_line(&mut self) -> Result<&'a str> {
        self.line_no += 1;
        match self.lines.next() {
            Some(l) => Ok(l.strip_suffix('\r').unwrap_or(l)),
            None => Err(self.error("unexpected end of file".into())),
        }
    }

    fn fields(&mut self) -> Result<Vec<&'a str>> {
        Ok(self.next_line()?.split('\t').collect())
    }

    fn keyed(&mut self, key: &str, arity: usize) -> Result<Vec<&'a str>> {
        let f = self.fields()?;
        if f.first() != Some(&key) || f.len() != arity + 1 {
            return Err(self.error(format!("expected `{key}` with {arity} value(s)")));
        }
        Ok(f[1..].to_vec())
    }

    fn value(&mut self, key: &str) -> Result<&'a str> {
        Ok(self.keyed(key, 1)?[0])
    }

    fn parse<T: std::str::FromStr>(&self, s: &str) -> Result<T> {
        s.parse()
            .map_err(|_| self.error(format!("cannot parse `{s}`")))
    }

    fn parse_value<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let v = self.value(key)?;
        self.parse(v)
    }
}
