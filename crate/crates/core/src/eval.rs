//! Accuracy, error counts and baselines over labeled candidates.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::candidates::Candidate;
use crate::corpus::{self, AnnotatedCorpus, LabeledCandidateSet};
use crate::detector::{self, Detector, TrainConfig};
use crate::error::{Error, Result};
use crate::features::ResourceLexicons;
use crate::maxent::Outcome;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationReport {
    pub sentences: usize,
    pub candidates: usize,
    pub accuracy: f64,
    /// Classified boundary, labeled no.
    pub false_positives: usize,
    /// Classified not-boundary, labeled yes.
    pub false_negatives: usize,
    pub baseline_all_yes: f64,
    pub baseline_token_final: f64,
}

impl EvaluationReport {
    pub fn errors(&self) -> usize {
        self.false_positives + self.false_negatives
    }

    pub fn to_table(&self) -> String {
        let rows = [
            ("Sentences", self.sentences.to_string()),
            ("Candidate P. Marks", self.candidates.to_string()),
            ("Accuracy", format!("{:.1}%", 100.0 * self.accuracy)),
            ("False Positives", self.false_positives.to_string()),
            ("False Negatives", self.false_negatives.to_string()),
            (
                "Baseline (all yes)",
                format!("{:.1}%", 100.0 * self.baseline_all_yes),
            ),
            (
                "Baseline (token-final)",
                format!("{:.1}%", 100.0 * self.baseline_token_final),
            ),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v:>8}");
        }
        out
    }

    pub fn to_key_values(&self) -> String {
        format!(
            "accuracy={}\nfp={}\nfn={}\ncandidates={}\nsentences={}\nbaseline_all_yes={}\nbaseline_token_final={}\n",
            self.accuracy,
            self.false_positives,
            self.false_negatives,
            self.candidates,
            self.sentences,
            self.baseline_all_yes,
            self.baseline_token_final
        )
    }
}

/// Fraction of candidates labeled yes.
pub fn baseline_all_yes(labeled: &LabeledCandidateSet) -> Result<f64> {
    if labeled.is_empty() {
        return Err(Error::NoCandidates);
    }
    Ok(labeled.n_yes() as f64 / labeled.len() as f64)
}

/// Accuracy of "boundary iff the mark ends its token".
pub fn baseline_token_final(labeled: &LabeledCandidateSet) -> Result<f64> {
    if labeled.is_empty() {
        return Err(Error::NoCandidates);
    }
    let correct = labeled
        .candidates
        .iter()
        .filter(|(c, l)| c.is_token_final() == (*l == Outcome::Yes))
        .count();
    Ok(correct as f64 / labeled.len() as f64)
}

/// Scores an arbitrary boundary classifier.
pub fn evaluate_with<F>(labeled: &LabeledCandidateSet, mut is_boundary: F) -> Result<EvaluationReport>
where
    F: FnMut(&Candidate) -> bool,
{
    let baseline_all_yes = baseline_all_yes(labeled)?;
    let baseline_token_final = baseline_token_final(labeled)?;
    let (mut fp, mut fn_) = (0, 0);
    for (c, label) in &labeled.candidates {
        match (is_boundary(c), label) {
            (true, Outcome::No) => fp += 1,
            (false, Outcome::Yes) => fn_ += 1,
            _ => {}
        }
    }
    let n = labeled.len();
    Ok(EvaluationReport {
        sentences: labeled.sentence_count,
        candidates: n,
        accuracy: (n - fp - fn_) as f64 / n as f64,
        false_positives: fp,
        false_negatives: fn_,
        baseline_all_yes,
        baseline_token_final,
    })
}

pub fn evaluate(detector: &Detector, labeled: &LabeledCandidateSet) -> Result<EvaluationReport> {
    evaluate_with(labeled, |c| detector.is_boundary(c))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub size: usize,
    pub report: EvaluationReport,
}

/// Trains one model per size on a prefix of the seeded shuffle of `pool` and
/// evaluates each on `heldout`. Rows come back in the order of `sizes`.
pub fn learning_curve(
    pool: &AnnotatedCorpus,
    heldout: &AnnotatedCorpus,
    sizes: &[usize],
    config: &TrainConfig,
    lexicons: Option<&ResourceLexicons>,
    seed: u64,
) -> Result<Vec<CurvePoint>> {
    if let Some(&size) = sizes.iter().find(|&&s| s > pool.len()) {
        return Err(Error::SizeExceedsCorpus {
            size,
            available: pool.len(),
        });
    }
    if let Some(&bad) = sizes.iter().find(|&&s| s == 0) {
        return Err(Error::Invalid(format!("training size {bad} is empty")));
    }
    let mut order: Vec<&String> = pool.sentences().iter().collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let test = corpus::label_candidates(heldout);
    sizes
        .iter()
        .map(|&size| {
            let subset = AnnotatedCorpus::from_lines(order[..size].iter().map(|s| s.as_str()))
                .ok_or(Error::NoCandidates)?;
            let trained = detector::train(&subset, config, lexicons)?;
            let report = evaluate(&trained.detector, &test)?;
            log::info!("size {size}: accuracy {:.4}", report.accuracy);
            Ok(CurvePoint { size, report })
        })
        .collect()
}

pub fn curve_table(points: &[CurvePoint]) -> String {
    let mut out = format!("{:>10}  {:>8}\n", "sentences", "accuracy");
    for p in points {
        let _ = writeln!(out, "{:>10}  {:>7.1}%", p.size, 100.0 * p.report.accuracy);
    }
    out
}

pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("size,accuracy\n");
    for p in points {
        let _ = writeln!(out, "{},{}", p.size, p.report.accuracy);
    }
    out
}
