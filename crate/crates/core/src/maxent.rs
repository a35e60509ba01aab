//! Binary maximum-entropy model trained by Generalized Iterative Scaling.
//!
//! The model weighs outcome `b` in context `x` as
//!
//! ```text
//! w(b, x) = pi * prod_j alpha_j ^ f_j(b, x)
//! ```
//!
//! where each feature `f_j` pairs one contextual predicate with one outcome.
//! Parameters are kept as `ln alpha`. Training maximizes the conditional
//! likelihood of the observed outcomes given their contexts; `pi` cancels in
//! every conditional and stays at 1.
//!
//! GIS needs the active features of every (context, outcome) pair to sum to a
//! constant `C`. One slack feature per outcome fills the gap: it takes the
//! value `C - n(b, x)`, where `n(b, x)` counts the real features firing.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::features::PredicateRegistry;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Yes,
    No,
}

impl Outcome {
    pub const ALL: [Outcome; 2] = [Outcome::Yes, Outcome::No];

    pub fn index(self) -> usize {
        match self {
            Outcome::Yes => 0,
            Outcome::No => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Outcome::Yes => "yes",
            Outcome::No => "no",
        }
    }

    pub fn parse(s: &str) -> Option<Outcome> {
        match s {
            "yes" => Some(Outcome::Yes),
            "no" => Some(Outcome::No),
            _ => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Binary indicator: fires iff `predicate` is active and the outcome matches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feature {
    pub predicate: u32,
    pub outcome: Outcome,
    pub log_alpha: f64,
    /// Weighted number of training events on which the feature fires.
    pub empirical: f64,
}

impl Feature {
    pub fn alpha(&self) -> f64 {
        self.log_alpha.exp()
    }
}

/// A distinct (context, outcome) pair with its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrainingEvent {
    pub active: Vec<u32>,
    pub outcome: Outcome,
    pub multiplicity: u64,
}

/// Merges identical events. The result is sorted, so it does not depend on
/// input order.
pub fn merge_events<I>(events: I) -> Vec<TrainingEvent>
where
    I: IntoIterator<Item = (Vec<u32>, Outcome)>,
{
    let mut merged: BTreeMap<(Vec<u32>, Outcome), u64> = BTreeMap::new();
    for (mut active, outcome) in events {
        active.sort_unstable();
        active.dedup();
        *merged.entry((active, outcome)).or_default() += 1;
    }
    merged
        .into_iter()
        .map(|((active, outcome), multiplicity)| TrainingEvent {
            active,
            outcome,
            multiplicity,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GisConfig {
    pub max_iters: usize,
    /// Stop once the largest relative constraint violation drops below this.
    pub tolerance: f64,
    /// Denominator floor for relative violations.
    pub violation_floor: f64,
    /// Bound on `|ln alpha|`.
    pub clamp: f64,
}

impl Default for GisConfig {
    fn default() -> Self {
        GisConfig {
            max_iters: 100,
            tolerance: 1e-3,
            violation_floor: 1.0,
            clamp: 50.0,
        }
    }
}

/// Per-iteration diagnostics. Entry `i` describes the model after `i`
/// updates.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainingLog {
    pub log_likelihood: Vec<f64>,
    pub max_violation: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxentModel {
    features: Vec<Feature>,
    by_predicate: Vec<[Option<u32>; 2]>,
    correction: u32,
    correction_log_alpha: [f64; 2],
    pi: f64,
}

impl MaxentModel {
    /// Assembles a model from explicit parameters. `features` must reference
    /// predicates below `num_predicates`, each (predicate, outcome) at most once.
    pub fn from_parts(
        mut features: Vec<Feature>,
        num_predicates: usize,
        correction: u32,
        correction_log_alpha: [f64; 2],
        pi: f64,
    ) -> Result<MaxentModel> {
        if !(pi > 0.0 && pi.is_finite()) {
            return Err(Error::Format(format!("pi must be positive, got {pi}")));
        }
        if correction == 0 {
            return Err(Error::Format("correction constant must be positive".into()));
        }
        features.sort_by_key(|f| (f.predicate, f.outcome));
        let mut by_predicate = vec![[None, None]; num_predicates];
        for (i, f) in features.iter().enumerate() {
            let slot = by_predicate
                .get_mut(f.predicate as usize)
                .ok_or_else(|| Error::Format(format!("feature predicate {} out of range", f.predicate)))?;
            if slot[f.outcome.index()].replace(i as u32).is_some() {
                return Err(Error::Format(format!(
                    "duplicate feature ({}, {})",
                    f.predicate, f.outcome
                )));
            }
            if !f.log_alpha.is_finite() {
                return Err(Error::Format(format!("non-finite parameter on feature {i}")));
            }
        }
        Ok(MaxentModel {
            features,
            by_predicate,
            correction,
            correction_log_alpha,
            pi,
        })
    }

    /// Every alpha at 1: both outcomes equally likely everywhere.
    pub fn uniform(num_predicates: usize) -> MaxentModel {
        MaxentModel {
            features: Vec::new(),
            by_predicate: vec![[None, None]; num_predicates],
            correction: 1,
            correction_log_alpha: [0.0; 2],
            pi: 1.0,
        }
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn num_predicates(&self) -> usize {
        self.by_predicate.len()
    }

    pub fn correction(&self) -> u32 {
        self.correction
    }

    pub fn correction_log_alpha(&self) -> [f64; 2] {
        self.correction_log_alpha
    }

    pub fn pi(&self) -> f64 {
        self.pi
    }

    pub fn with_pi(mut self, pi: f64) -> MaxentModel {
        self.pi = pi;
        self
    }

    /// Number of real features firing for each outcome.
    fn active_counts(&self, active: &[u32]) -> [u32; 2] {
        let mut n = [0; 2];
        for &p in active {
            if let Some(slots) = self.by_predicate.get(p as usize) {
                for (k, slot) in slots.iter().enumerate() {
                    n[k] += slot.is_some() as u32;
                }
            }
        }
        n
    }

    /// `ln w(b, x)` for both outcomes, `[yes, no]`.
    pub fn log_scores(&self, active: &[u32]) -> [f64; 2] {
        let mut s = [self.pi.ln(); 2];
        let mut n = [0u32; 2];
        for &p in active {
            let Some(slots) = self.by_predicate.get(p as usize) else {
                continue;
            };
            for (k, slot) in slots.iter().enumerate() {
                if let Some(j) = slot {
                    s[k] += self.features[*j as usize].log_alpha;
                    n[k] += 1;
                }
            }
        }
        for k in 0..2 {
            s[k] += (self.correction as f64 - n[k] as f64) * self.correction_log_alpha[k];
        }
        s
    }

    /// `(w_yes, w_no)`, saturated to the finite positive range.
    pub fn score(&self, active: &[u32]) -> (f64, f64) {
        let [y, n] = self.log_scores(active);
        let squash = |l: f64| l.exp().clamp(f64::MIN_POSITIVE, f64::MAX);
        (squash(y), squash(n))
    }

    pub fn conditional_yes(&self, active: &[u32]) -> f64 {
        let [y, n] = self.log_scores(active);
        1.0 / (1.0 + (n - y).exp())
    }

    pub fn conditional_no(&self, active: &[u32]) -> f64 {
        1.0 - self.conditional_yes(active)
    }

    pub fn conditional(&self, active: &[u32], outcome: Outcome) -> f64 {
        match outcome {
            Outcome::Yes => self.conditional_yes(active),
            Outcome::No => self.conditional_no(active),
        }
    }

    /// Boundary iff `p(yes | x) > 0.5`; an exact tie is not a boundary.
    pub fn classify(&self, active: &[u32]) -> bool {
        is_boundary(self.conditional_yes(active))
    }

    pub fn log_likelihood(&self, events: &[TrainingEvent]) -> f64 {
        events
            .iter()
            .map(|e| e.multiplicity as f64 * self.conditional(&e.active, e.outcome).ln())
            .sum()
    }

    /// Mean conditional entropy of the outcome, in nats, over the empirical
    /// context distribution.
    pub fn entropy(&self, events: &[TrainingEvent]) -> f64 {
        let total: u64 = events.iter().map(|e| e.multiplicity).sum();
        if total == 0 {
            return 0.0;
        }
        let h: f64 = events
            .iter()
            .map(|e| {
                let p = self.conditional_yes(&e.active);
                e.multiplicity as f64 * binary_entropy(p)
            })
            .sum();
        h / total as f64
    }

    /// Relative violation `|expected - empirical| / max(empirical, floor)`
    /// for every feature in order, followed by the yes and no slack features.
    pub fn constraint_violations(&self, events: &[TrainingEvent], floor: f64) -> Vec<f64> {
        let compiled = Compiled::new(self, events);
        compiled.violations(&compiled.expectations(self), floor)
    }

    /// Largest relative constraint violation; 0 for a model without features.
    pub fn check_constraints(&self, events: &[TrainingEvent], floor: f64) -> f64 {
        if self.features.is_empty() {
            return 0.0;
        }
        self.constraint_violations(events, floor)
            .into_iter()
            .fold(0.0, f64::max)
    }
}

pub fn is_boundary(p_yes: f64) -> bool {
    p_yes > 0.5
}

fn binary_entropy(p: f64) -> f64 {
    let term = |q: f64| if q > 0.0 { -q * q.ln() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Events resolved against a fixed feature set.
struct Compiled {
    events: Vec<CompiledEvent>,
    empirical: Vec<f64>,
    correction_empirical: [f64; 2],
}

struct CompiledEvent {
    /// Feature indices firing for yes and for no.
    fired: [Vec<u32>; 2],
    /// Value of each outcome's slack feature, `C - n(b, x)`.
    slack: [f64; 2],
    multiplicity: f64,
    outcome: usize,
}

/// Model expectations of every feature, plus the log-likelihood.
struct Expectations {
    expected: Vec<f64>,
    correction_expected: [f64; 2],
    log_likelihood: f64,
}

impl Compiled {
    fn new(model: &MaxentModel, events: &[TrainingEvent]) -> Compiled {
        let c = model.correction as f64;
        let mut empirical = vec![0.0; model.features.len()];
        let mut correction_empirical = [0.0; 2];
        let compiled = events
            .iter()
            .map(|e| {
                let m = e.multiplicity as f64;
                let b = e.outcome.index();
                let mut fired = [Vec::new(), Vec::new()];
                for &pred in &e.active {
                    let Some(slots) = model.by_predicate.get(pred as usize) else {
                        continue;
                    };
                    for (k, slot) in slots.iter().enumerate() {
                        if let Some(j) = slot {
                            fired[k].push(*j);
                        }
                    }
                }
                for &j in &fired[b] {
                    empirical[j as usize] += m;
                }
                let slack = [c - fired[0].len() as f64, c - fired[1].len() as f64];
                correction_empirical[b] += m * slack[b];
                CompiledEvent {
                    fired,
                    slack,
                    multiplicity: m,
                    outcome: b,
                }
            })
            .collect();
        Compiled {
            events: compiled,
            empirical,
            correction_empirical,
        }
    }

    fn expectations(&self, model: &MaxentModel) -> Expectations {
        let mut x = Expectations {
            expected: vec![0.0; model.features.len()],
            correction_expected: [0.0; 2],
            log_likelihood: 0.0,
        };
        for e in &self.events {
            let s: [f64; 2] = std::array::from_fn(|k| {
                e.fired[k]
                    .iter()
                    .map(|&j| model.features[j as usize].log_alpha)
                    .sum::<f64>()
                    + e.slack[k] * model.correction_log_alpha[k]
            });
            let p_yes = 1.0 / (1.0 + (s[1] - s[0]).exp());
            let p = [p_yes, 1.0 - p_yes];
            x.log_likelihood += e.multiplicity * p[e.outcome].ln();
            for (k, &pk) in p.iter().enumerate() {
                let w = e.multiplicity * pk;
                for &j in &e.fired[k] {
                    x.expected[j as usize] += w;
                }
                x.correction_expected[k] += w * e.slack[k];
            }
        }
        x
    }

    fn violations(&self, x: &Expectations, floor: f64) -> Vec<f64> {
        let rel = |exp: f64, emp: f64| (exp - emp).abs() / emp.max(floor);
        x.expected
            .iter()
            .zip(&self.empirical)
            .map(|(&x, &e)| rel(x, e))
            .chain((0..2).map(|k| rel(x.correction_expected[k], self.correction_empirical[k])))
            .collect()
    }
}

fn feature_name(registry: &PredicateRegistry, f: Option<&Feature>, slack: usize) -> String {
    match f {
        Some(f) => format!("{}&{}", registry.key(f.predicate), f.outcome),
        None => format!("<correction>&{}", Outcome::ALL[slack]),
    }
}

/// Fits a model to `events` by Generalized Iterative Scaling.
///
/// One feature is created for every (predicate, outcome) pair observed in the
/// events, all alphas start at 1 and each iteration applies
/// `alpha_j *= (empirical_j / expected_j) ^ (1 / C)` in batch.
pub fn train_gis(
    events: &[TrainingEvent],
    registry: &PredicateRegistry,
    config: &GisConfig,
) -> Result<(MaxentModel, TrainingLog)> {
    if events.is_empty() || events.iter().all(|e| e.multiplicity == 0) {
        return Err(Error::NoEvents);
    }
    if !(config.clamp > 0.0 && config.clamp.is_finite()) {
        return Err(Error::Invalid(format!("clamp bound {} must be positive", config.clamp)));
    }
    let mut empirical: BTreeMap<(u32, Outcome), f64> = BTreeMap::new();
    for e in events {
        for &p in &e.active {
            if p as usize >= registry.len() {
                return Err(Error::Invalid(format!(
                    "event predicate {p} outside registry of {}",
                    registry.len()
                )));
            }
            *empirical.entry((p, e.outcome)).or_default() += e.multiplicity as f64;
        }
    }
    let features: Vec<Feature> = empirical
        .into_iter()
        .map(|((predicate, outcome), emp)| Feature {
            predicate,
            outcome,
            log_alpha: 0.0,
            empirical: emp,
        })
        .collect();
    let mut model = MaxentModel::from_parts(features, registry.len(), 1, [0.0; 2], 1.0)?;
    let max_active = events
        .iter()
        .flat_map(|e| model.active_counts(&e.active))
        .max()
        .unwrap_or(0);
    model.correction = max_active + 1;
    let inv_c = 1.0 / model.correction as f64;

    let compiled = Compiled::new(&model, events);
    let mut log = TrainingLog::default();
    loop {
        let stats = compiled.expectations(&model);
        let violation = compiled
            .violations(&stats, config.violation_floor)
            .into_iter()
            .fold(0.0, f64::max);
        log.log_likelihood.push(stats.log_likelihood);
        log.max_violation.push(violation);
        log::debug!(
            "gis iteration {}: log-likelihood {:.6}, max violation {:.3e}",
            log.iterations,
            stats.log_likelihood,
            violation
        );
        if violation < config.tolerance {
            log.converged = true;
            break;
        }
        if log.iterations >= config.max_iters {
            break;
        }
        let step = |current: f64, emp: f64, exp: f64| -> f64 {
            let next = if emp == 0.0 {
                -config.clamp
            } else {
                current + inv_c * (emp / exp).ln()
            };
            next.clamp(-config.clamp, config.clamp)
        };
        for (j, f) in model.features.iter_mut().enumerate() {
            f.log_alpha = step(f.log_alpha, compiled.empirical[j], stats.expected[j]);
            if f.log_alpha.is_nan() {
                return Err(Error::NonFinite {
                    feature: feature_name(registry, Some(f), 0),
                    iteration: log.iterations,
                });
            }
        }
        for k in 0..2 {
            let next = step(
                model.correction_log_alpha[k],
                compiled.correction_empirical[k],
                stats.correction_expected[k],
            );
            if next.is_nan() {
                return Err(Error::NonFinite {
                    feature: feature_name(registry, None, k),
                    iteration: log.iterations,
                });
            }
            model.correction_log_alpha[k] = next;
        }
        log.iterations += 1;
    }
    Ok((model, log))
}
