//! Shared fixtures and the independent maximum-likelihood oracle.
#![allow(dead_code)]

use sentbound::features::PredicateRegistry;
use sentbound::maxent::{merge_events, GisConfig, Outcome, TrainingEvent};

/// A context (active predicate set) observed `yes` and `no` times.
pub struct Cell {
    pub active: &'static [u32],
    pub yes: u64,
    pub no: u64,
}

pub const fn cell(active: &'static [u32], yes: u64, no: u64) -> Cell {
    Cell { active, yes, no }
}

pub fn events(cells: &[Cell]) -> Vec<TrainingEvent> {
    merge_events(cells.iter().flat_map(|c| {
        std::iter::repeat_n((c.active.to_vec(), Outcome::Yes), c.yes as usize)
            .chain(std::iter::repeat_n((c.active.to_vec(), Outcome::No), c.no as usize))
    }))
}

pub fn registry(n: usize) -> PredicateRegistry {
    PredicateRegistry::from_entries((0..n).map(|i| (format!("P{i}"), 1)).collect(), 1).unwrap()
}

pub fn tight_gis() -> GisConfig {
    GisConfig {
        max_iters: 500_000,
        tolerance: 1e-7,
        ..GisConfig::default()
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Conditional log-likelihood of `p(yes | x) = sigmoid(bias + sum w_p)`.
fn log_likelihood(cells: &[Cell], theta: &[f64]) -> f64 {
    cells
        .iter()
        .map(|c| {
            let z = theta[0] + c.active.iter().map(|&p| theta[1 + p as usize]).sum::<f64>();
            let p = sigmoid(z);
            c.yes as f64 * p.ln() + c.no as f64 * (1.0 - p).ln()
        })
        .sum()
}

/// Maximizes the likelihood by exhaustive search on a shrinking grid over
/// (bias, one weight per predicate), then returns `p(yes | x)` per cell.
///
/// A binary log-linear model with per-outcome indicator features and a
/// slack feature spans exactly this logistic family, so its maximum
/// likelihood conditionals must coincide.
pub fn grid_oracle(cells: &[Cell], n_predicates: usize) -> Vec<f64> {
    let dims = n_predicates + 1;
    let points = 17usize;
    let mut center = vec![0.0; dims];
    let mut half = 8.0;
    while half > 1e-6 {
        let step = 2.0 * half / (points - 1) as f64;
        let mut best = (f64::NEG_INFINITY, center.clone());
        let total = points.pow(dims as u32);
        let mut theta = vec![0.0; dims];
        for idx in 0..total {
            let mut rem = idx;
            for d in 0..dims {
                theta[d] = center[d] - half + step * (rem % points) as f64;
                rem /= points;
            }
            let ll = log_likelihood(cells, &theta);
            if ll > best.0 {
                best = (ll, theta.clone());
            }
        }
        center = best.1;
        half /= 2.0;
    }
    cells
        .iter()
        .map(|c| sigmoid(center[0] + c.active.iter().map(|&p| center[1 + p as usize]).sum::<f64>()))
        .collect()
}

/// Oracle corpora with at most three predicates and twenty events; none is
/// separable, so every maximum-likelihood conditional is finite.
pub fn oracle_corpora() -> Vec<(&'static str, usize, Vec<Cell>)> {
    vec![
        ("nine-no-one-yes", 1, vec![cell(&[0], 1, 9)]),
        (
            "disjoint-saturated",
            2,
            vec![cell(&[0], 4, 2), cell(&[1], 1, 4), cell(&[], 2, 3)],
        ),
        (
            "overlapping-pair",
            2,
            vec![
                cell(&[0, 1], 3, 1),
                cell(&[0], 1, 2),
                cell(&[1], 2, 2),
                cell(&[], 1, 3),
            ],
        ),
        (
            "three-predicates",
            3,
            vec![
                cell(&[0, 1, 2], 2, 1),
                cell(&[0, 2], 1, 2),
                cell(&[1], 2, 1),
                cell(&[2], 1, 3),
                cell(&[0], 2, 2),
                cell(&[], 1, 2),
            ],
        ),
        (
            "pairs-only",
            3,
            vec![
                cell(&[0, 1], 1, 3),
                cell(&[1, 2], 3, 1),
                cell(&[0, 2], 2, 2),
                cell(&[2], 1, 1),
            ],
        ),
        (
            "nested",
            2,
            vec![cell(&[0], 3, 2), cell(&[0, 1], 1, 4)],
        ),
    ]
}
