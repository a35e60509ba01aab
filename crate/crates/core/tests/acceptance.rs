//! Acceptance suite. Prints one line per criterion and exits non-zero if any
//! gating criterion fails.

mod common;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::*;
use sentbound::candidates::Candidate;
use sentbound::corpus::{self, label_candidates, AnnotatedCorpus, Encoding, LabeledCandidateSet};
use sentbound::detector::{train, Detector, TrainConfig};
use sentbound::eval::{evaluate, evaluate_with};
use sentbound::features::{extract_best, extract_portable, ResourceLexicons, TemplateSet};
use sentbound::maxent::{merge_events, train_gis, GisConfig, Outcome, TrainingEvent};
use sentbound::model::Model;
use sentbound::synthetic;

const TRAIN_SEED: u64 = 2024;
const HELDOUT_SEED: u64 = 7;
const SENTENCES: usize = 500;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> std::result::Result<(), String> {
    ensure(
        elapsed < limit,
        format!("{what} took {elapsed:.2?}, limit {limit:?}"),
    )
}

fn lexicons() -> ResourceLexicons {
    ResourceLexicons::bundled()
}

fn synthetic_train() -> AnnotatedCorpus {
    synthetic::generate(SENTENCES, TRAIN_SEED)
}

fn synthetic_heldout() -> LabeledCandidateSet {
    label_candidates(&synthetic::generate(SENTENCES, HELDOUT_SEED))
}

fn ac1_reference_corpora() -> Option<Check> {
    let train_path = PathBuf::from(std::env::var_os("SENTBOUND_WSJ_TRAIN")?);
    let test_path = PathBuf::from(std::env::var_os("SENTBOUND_WSJ_TEST")?);
    Some((|| {
        let err = |e: sentbound::Error| e.to_string();
        let train_corpus = corpus::load_annotated(&train_path, Encoding::Utf8).map_err(err)?;
        let test = label_candidates(&corpus::load_annotated(&test_path, Encoding::Utf8).map_err(err)?);
        let mut lines = Vec::new();
        for (templates, target) in [(TemplateSet::Best, 0.988), (TemplateSet::Portable, 0.980)] {
            let trained = train(&train_corpus, &TrainConfig::with_templates(templates), Some(&lexicons()))
                .map_err(err)?;
            let r = evaluate(&trained.detector, &test).map_err(err)?;
            let line = format!(
                "{templates}: accuracy {:.2}% (target {:.1}% ± 0.5), fp {}, fn {}",
                100.0 * r.accuracy,
                100.0 * target,
                r.false_positives,
                r.false_negatives
            );
            ensure((r.accuracy - target).abs() <= 0.005, line.clone())?;
            lines.push(line);
        }
        Ok(lines.join("; "))
    })())
}

fn ac2_baseline_identities() -> Check {
    let start = Instant::now();
    let labeled = label_candidates(&synthetic_train());
    let all_yes = evaluate_with(&labeled, |_| true).map_err(|e| e.to_string())?;
    let token_final = evaluate_with(&labeled, Candidate::is_token_final).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let eps = f64::EPSILON;
    ensure(
        (all_yes.accuracy - all_yes.baseline_all_yes).abs() <= eps,
        format!("all-yes {} vs {}", all_yes.accuracy, all_yes.baseline_all_yes),
    )?;
    ensure(
        (token_final.accuracy - token_final.baseline_token_final).abs() <= eps,
        format!(
            "token-final {} vs {}",
            token_final.accuracy, token_final.baseline_token_final
        ),
    )?;
    within(elapsed, Duration::from_secs(1), "baseline evaluation")?;
    Ok(format!(
        "all-yes {:.4}, token-final {:.4} over {} candidates in {elapsed:.2?}",
        all_yes.baseline_all_yes, token_final.baseline_token_final, labeled.len()
    ))
}

fn check_gis_run(name: &str, events: &[TrainingEvent], k: usize, cfg: &GisConfig) -> Check {
    let (model, log) = train_gis(events, &registry(k), cfg).map_err(|e| e.to_string())?;
    for (i, w) in log.log_likelihood.windows(2).enumerate() {
        ensure(
            w[1] >= w[0] - 1e-9,
            format!("{name}: log-likelihood fell at iteration {}: {} -> {}", i + 1, w[0], w[1]),
        )?;
    }
    ensure(log.converged, format!("{name}: no convergence in {} iterations", log.iterations))?;
    let v = model.check_constraints(events, cfg.violation_floor);
    ensure(v <= 1e-3, format!("{name}: max violation {v:e}"))?;
    Ok(format!("{name} {}it", log.iterations))
}

fn ac3_gis_correctness() -> Check {
    let cfg = GisConfig {
        max_iters: 200_000,
        tolerance: 1e-3,
        ..GisConfig::default()
    };
    let mut notes = Vec::new();
    for (name, k, cells) in oracle_corpora() {
        notes.push(check_gis_run(name, &events(&cells), k, &cfg)?);
    }
    let separable = merge_events(std::iter::repeat_n((vec![0], Outcome::Yes), 8));
    notes.push(check_gis_run("all-yes", &separable, 1, &cfg)?);

    let corpus = synthetic_train();
    for templates in [TemplateSet::Portable, TemplateSet::Best] {
        let config = TrainConfig {
            gis: cfg,
            ..TrainConfig::with_templates(templates)
        };
        let start = Instant::now();
        let trained = train(&corpus, &config, Some(&lexicons())).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        let log = &trained.log;
        for w in log.log_likelihood.windows(2) {
            ensure(w[1] >= w[0] - 1e-9, format!("{templates}: log-likelihood fell"))?;
        }
        ensure(log.converged, format!("{templates}: no convergence"))?;
        let v = trained
            .detector
            .model()
            .maxent
            .check_constraints(&trained.events, 1.0);
        ensure(v <= 1e-3, format!("{templates}: max violation {v:e}"))?;
        within(elapsed, Duration::from_secs(10), &format!("{templates} training"))?;
        notes.push(format!(
            "{templates}-500 {}it/{elapsed:.2?} viol {v:.1e}",
            log.iterations
        ));
    }
    Ok(notes.join(", "))
}

fn ac4_oracle_equivalence() -> Check {
    let corpora = oracle_corpora();
    ensure(corpora.len() >= 5, "fewer than five oracle corpora")?;
    let mut worst: f64 = 0.0;
    for (name, k, cells) in &corpora {
        let ev = events(cells);
        ensure(
            *k <= 3 && ev.iter().map(|e| e.multiplicity).sum::<u64>() <= 20,
            format!("{name} exceeds size limits"),
        )?;
        let (model, _) = train_gis(&ev, &registry(*k), &tight_gis()).map_err(|e| e.to_string())?;
        for (c, want) in cells.iter().zip(grid_oracle(cells, *k)) {
            let diff = (model.conditional_yes(c.active) - want).abs();
            worst = worst.max(diff);
            ensure(diff < 1e-3, format!("{name} {:?}: off by {diff:e}", c.active))?;
        }
    }
    let (model, _) = train_gis(&events(&[cell(&[0], 1, 9)]), &registry(1), &GisConfig::default())
        .map_err(|e| e.to_string())?;
    let p = model.conditional_yes(&[0]);
    ensure((p - 0.100).abs() <= 1e-3, format!("9-no/1-yes gives {p}"))?;
    Ok(format!(
        "{} corpora, worst |gis - oracle| {worst:.1e}; 9/1 case p(yes) = {p:.4}",
        corpora.len()
    ))
}

fn ac5_worked_example() -> Check {
    let corpus = AnnotatedCorpus::from_lines(["ANLP Corp. chairman Dr. Smith resigned."]).unwrap();
    let labeled = label_candidates(&corpus);
    let (corp, _) = &labeled.candidates[0];
    ensure(corp.token == "Corp.", "first candidate is not Corp.")?;

    let best = extract_best(corp, &lexicons());
    let best_core = [
        "PreviousWordIsCapitalized",
        "Prefix=Corp",
        "Suffix=NULL",
        "PrefixFeature=CorporateDesignator",
    ];
    for k in best_core {
        ensure(best.iter().any(|b| b == k), format!("best lacks {k}: {best:?}"))?;
    }

    let abbrevs = corpus::induce_abbreviations(&labeled, true);
    let mut portable = extract_portable(corp, &abbrevs);
    portable.sort();
    let mut expected = vec![
        "PreviousWord=ANLP",
        "FollowingWord=chairman",
        "Prefix=Corp",
        "Suffix=NULL",
        "PrefixFeature=InducedAbbreviation",
    ];
    expected.sort();
    ensure(portable == expected, format!("portable gave {portable:?}"))?;
    Ok(format!(
        "best ⊇ {{{}}}; portable = {{{}}}",
        best_core.join(", "),
        expected.join(", ")
    ))
}

fn ac6_synthetic_end_to_end() -> Check {
    let start = Instant::now();
    let corpus = synthetic_train();
    let heldout = synthetic_heldout();
    let mut notes = Vec::new();
    for templates in [TemplateSet::Best, TemplateSet::Portable] {
        let lex = match templates {
            TemplateSet::Best => Some(lexicons()),
            TemplateSet::Portable => None,
        };
        let trained = train(&corpus, &TrainConfig::with_templates(templates), lex.as_ref())
            .map_err(|e| e.to_string())?;
        let r = evaluate(&trained.detector, &heldout).map_err(|e| e.to_string())?;
        let summary = format!(
            "{templates} {:.2}% (fp {}, fn {}) vs baselines {:.1}%/{:.1}%",
            100.0 * r.accuracy,
            r.false_positives,
            r.false_negatives,
            100.0 * r.baseline_all_yes,
            100.0 * r.baseline_token_final
        );
        ensure(
            r.accuracy > r.baseline_all_yes && r.accuracy > r.baseline_token_final,
            format!("does not beat baselines: {summary}"),
        )?;
        ensure(r.accuracy >= 0.95, format!("below 95%: {summary}"))?;
        notes.push(summary);
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30), "end-to-end run")?;
    Ok(format!("{} in {elapsed:.2?}", notes.join("; ")))
}

fn ac7_determinism_and_persistence() -> Check {
    let corpus = synthetic_train();
    let heldout = synthetic_heldout();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut checked = 0;
    for templates in [TemplateSet::Portable, TemplateSet::Best] {
        let cfg = TrainConfig::with_templates(templates);
        let a = train(&corpus, &cfg, Some(&lexicons())).map_err(|e| e.to_string())?;
        let b = train(&corpus, &cfg, Some(&lexicons())).map_err(|e| e.to_string())?;
        let (pa, pb) = (
            dir.path().join(format!("{templates}-a.model")),
            dir.path().join(format!("{templates}-b.model")),
        );
        a.detector.model().save(&pa).map_err(|e| e.to_string())?;
        b.detector.model().save(&pb).map_err(|e| e.to_string())?;
        let (ba, bb) = (std::fs::read(&pa).unwrap(), std::fs::read(&pb).unwrap());
        ensure(ba == bb, format!("{templates}: retrained model files differ"))?;

        let loaded = Model::load(&pa).map_err(|e| e.to_string())?;
        let reloaded = Detector::new(loaded, Some(lexicons())).map_err(|e| e.to_string())?;
        for (c, _) in &heldout.candidates {
            ensure(
                reloaded.prob_yes(c).to_bits() == a.detector.prob_yes(c).to_bits(),
                format!("{templates}: reloaded model disagrees on {}", c.token),
            )?;
            checked += 1;
        }
    }
    Ok(format!(
        "byte-identical retrains; {checked} held-out classifications identical after reload"
    ))
}

fn ac8_throughput() -> Check {
    let trained = train(&synthetic_train(), &TrainConfig::with_templates(TemplateSet::Best), Some(&lexicons()))
        .map_err(|e| e.to_string())?;
    let mut article = String::new();
    let mut words = 0;
    for s in synthetic::generate(200, 99).sentences() {
        if words >= 500 {
            break;
        }
        words += s.split(' ').count();
        article.push_str(s);
        article.push(' ');
    }
    let start = Instant::now();
    let sentences = trained.detector.sentences(&article);
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_millis(1400), "segmentation")?;
    Ok(format!(
        "{words}-word article -> {} sentences in {elapsed:.2?}",
        sentences.len()
    ))
}

fn main() {
    // `cargo test -- <filter>` passes arguments; this suite always runs whole.
    let mut failures = 0;
    let mut report = |id: &str, title: &str, gating: bool, result: Option<Check>| match result {
        None => println!("[SKIP] {id} {title}: reference corpora not supplied"),
        Some(Ok(detail)) => println!("[PASS] {id} {title}: {detail}"),
        Some(Err(detail)) => {
            if gating {
                failures += 1;
                println!("[FAIL] {id} {title}: {detail}");
            } else {
                println!("[WARN] {id} {title} (non-gating): {detail}");
            }
        }
    };
    report("AC1", "reference-corpus accuracy", true, ac1_reference_corpora());
    report("AC2", "baseline identities", true, Some(ac2_baseline_identities()));
    report("AC3", "GIS monotonicity and constraints", true, Some(ac3_gis_correctness()));
    report("AC4", "oracle equivalence", true, Some(ac4_oracle_equivalence()));
    report("AC5", "worked-example predicates", true, Some(ac5_worked_example()));
    report("AC6", "synthetic end-to-end", true, Some(ac6_synthetic_end_to_end()));
    report("AC7", "determinism and persistence", true, Some(ac7_determinism_and_persistence()));
    report("AC8", "segmentation throughput", false, Some(ac8_throughput()));
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all gating acceptance criteria passed");
}
