//! Training pipeline and the boundary detector used at inference time.

use std::ops::Range;

use crate::candidates::{self, Candidate};
use crate::corpus::{self, AnnotatedCorpus, LabeledCandidateSet};
use crate::error::{Error, Result};
use crate::features::{self, Extractor, ResourceLexicons, TemplateSet};
use crate::maxent::{self, GisConfig, TrainingEvent, TrainingLog};
use crate::model::Model;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub template_set: TemplateSet,
    pub cutoff: u64,
    pub gis: GisConfig,
    pub case_sensitive_abbrevs: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            template_set: TemplateSet::Portable,
            cutoff: 1,
            gis: GisConfig::default(),
            case_sensitive_abbrevs: true,
        }
    }
}

impl TrainConfig {
    pub fn with_templates(template_set: TemplateSet) -> TrainConfig {
        TrainConfig {
            template_set,
            ..TrainConfig::default()
        }
    }
}

/// Encodes every labeled candidate and merges duplicates.
pub fn training_events(
    labeled: &LabeledCandidateSet,
    registry: &features::PredicateRegistry,
    extractor: &Extractor,
) -> Vec<TrainingEvent> {
    maxent::merge_events(
        labeled
            .candidates
            .iter()
            .map(|(c, label)| (features::encode(c, registry, extractor), *label)),
    )
}

/// A model bound to the resources its templates need.
#[derive(Debug, Clone)]
pub struct Detector {
    model: Model,
    extractor: Extractor,
}

/// Output of [`train`].
#[derive(Debug, Clone)]
pub struct Trained {
    pub detector: Detector,
    pub log: TrainingLog,
    pub events: Vec<TrainingEvent>,
}

/// Labels the corpus, induces abbreviations, builds the registry and fits the
/// model. `lexicons` is required for `best` templates and ignored otherwise.
pub fn train(
    corpus: &AnnotatedCorpus,
    config: &TrainConfig,
    lexicons: Option<&ResourceLexicons>,
) -> Result<Trained> {
    let labeled = corpus::label_candidates(corpus);
    train_labeled(&labeled, config, lexicons)
}

pub fn train_labeled(
    labeled: &LabeledCandidateSet,
    config: &TrainConfig,
    lexicons: Option<&ResourceLexicons>,
) -> Result<Trained> {
    if labeled.is_empty() {
        return Err(Error::NoCandidates);
    }
    let abbreviations = corpus::induce_abbreviations(labeled, config.case_sensitive_abbrevs);
    let (extractor, lexicon_checksum) = match config.template_set {
        TemplateSet::Portable => (Extractor::Portable(abbreviations.clone()), None),
        TemplateSet::Best => {
            let lex = lexicons.ok_or_else(|| {
                Error::MissingResource(
                    "best templates need honorific and corporate designator lexicons".into(),
                )
            })?;
            (Extractor::Best(lex.clone()), Some(lex.checksum()))
        }
    };
    let registry = features::build_registry(labeled, &extractor, config.cutoff)?;
    let events = training_events(labeled, &registry, &extractor);
    log::info!(
        "training on {} candidates ({} distinct events, {} predicates, {} abbreviations)",
        labeled.len(),
        events.len(),
        registry.len(),
        abbreviations.len()
    );
    let (maxent, log) = maxent::train_gis(&events, &registry, &config.gis)?;
    log::info!(
        "gis stopped after {} iterations (converged: {}), log-likelihood {:.4}, entropy {:.4} nats",
        log.iterations,
        log.converged,
        log.log_likelihood.last().copied().unwrap_or(f64::NAN),
        maxent.entropy(&events)
    );
    let model = Model {
        template_set: config.template_set,
        registry,
        abbreviations,
        lexicon_checksum,
        maxent,
        clamp: config.gis.clamp,
    };
    Ok(Trained {
        detector: Detector { model, extractor },
        log,
        events,
    })
}

impl Detector {
    /// Binds a loaded model to its resources. A `best` model needs the same
    /// lexicons it was trained with.
    pub fn new(model: Model, lexicons: Option<ResourceLexicons>) -> Result<Detector> {
        let extractor = match model.template_set {
            TemplateSet::Portable => Extractor::Portable(model.abbreviations.clone()),
            TemplateSet::Best => {
                let lex = lexicons.ok_or_else(|| {
                    Error::MissingResource(
                        "model uses best templates; supply --honorifics and --designators".into(),
                    )
                })?;
                let found = lex.checksum();
                if let Some(expected) = &model.lexicon_checksum {
                    if *expected != found {
                        return Err(Error::LexiconMismatch {
                            expected: expected.clone(),
                            found,
                        });
                    }
                }
                Extractor::Best(lex)
            }
        };
        Ok(Detector { model, extractor })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn into_model(self) -> Model {
        self.model
    }

    pub fn template_set(&self) -> TemplateSet {
        self.model.template_set
    }

    /// Fails unless the model was trained with `requested` templates.
    pub fn require_templates(&self, requested: TemplateSet) -> Result<()> {
        if requested != self.model.template_set {
            return Err(Error::TemplateMismatch {
                model: self.model.template_set.name(),
                requested: requested.name(),
            });
        }
        Ok(())
    }

    pub fn encode(&self, c: &Candidate) -> Vec<u32> {
        features::encode(c, &self.model.registry, &self.extractor)
    }

    pub fn prob_yes(&self, c: &Candidate) -> f64 {
        self.model.maxent.conditional_yes(&self.encode(c))
    }

    pub fn is_boundary(&self, c: &Candidate) -> bool {
        maxent::is_boundary(self.prob_yes(c))
    }

    /// Candidates in `text` classified as sentence boundaries.
    pub fn boundaries(&self, text: &str) -> Vec<Candidate> {
        let tokens = candidates::tokenize(text);
        candidates::scan_tokens(&tokens)
            .into_iter()
            .filter(|c| self.is_boundary(c))
            .collect()
    }

    /// Splits `text` into contiguous spans covering every byte. A span ends
    /// after the token holding a boundary mark.
    pub fn segment(&self, text: &str) -> Vec<Range<usize>> {
        let tokens = candidates::tokenize(text);
        let mut cuts: Vec<usize> = candidates::scan_tokens(&tokens)
            .into_iter()
            .filter(|c| self.is_boundary(c))
            .map(|c| tokens[c.token_index].end())
            .collect();
        cuts.dedup();
        spans(text.len(), &cuts)
    }

    /// Sentences of `text`, whitespace-trimmed, with internal line breaks
    /// folded to spaces.
    pub fn sentences(&self, text: &str) -> Vec<String> {
        self.segment(text)
            .into_iter()
            .filter_map(|r| {
                let s = text[r].trim_matches(candidates::is_separator);
                if s.is_empty() {
                    None
                } else {
                    Some(
                        candidates::tokenize(s)
                            .iter()
                            .map(|t| t.text)
                            .collect::<Vec<_>>()
                            .join(" "),
                    )
                }
            })
            .collect()
    }
}

fn spans(len: usize, cuts: &[usize]) -> Vec<Range<usize>> {
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut start = 0;
    for &cut in cuts {
        out.push(start..cut);
        start = cut;
    }
    if start < len {
        out.push(start..len);
    }
    out
}
