//! Conductance-weighted random walks on lattices.
//!
//! Each step moves along an incident edge with probability proportional to
//! its conductance. Trials are reproducible and embarrassingly parallel: the
//! generator is ChaCha8 seeded from the configured seed, with one independent
//! stream per trial, so results are byte-identical regardless of thread
//! count and a trial's trajectory does not depend on `max_steps`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::approximation::{classify_trend, resistance_to_infinity, StopRule, Trend, PLATEAU_TOLERANCE};
use crate::error::Result;
use crate::lattice::{LatticeSpec, LatticeVertex, SwellingSequence};
use crate::solve::SolveConfig;

/// Simulation parameters; `seed` fully determines the outcome.
#[derive(Debug, Clone)]
pub struct WalkConfig {
    pub max_steps: u32,
    pub trials: u32,
    pub seed: u64,
    pub start: LatticeVertex,
}

/// Aggregated return statistics over all trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkStats {
    pub max_steps: u32,
    pub trials: u32,
    pub seed: u64,
    /// Trials that revisited the start within `max_steps`.
    pub returns: u32,
    pub return_frequency: f64,
    /// Binomial standard error sqrt(f (1-f) / trials).
    pub standard_error: f64,
    /// Mean first-return step over returning trials.
    pub mean_first_return_step: Option<f64>,
}

/// Index into `weights` drawn with probability proportional to the weight.
pub fn choose_weighted<R: Rng>(weights: &[f64], rng: &mut R) -> usize {
    debug_assert!(!weights.is_empty());
    let total: f64 = weights.iter().sum();
    let x = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if x < acc {
            return i;
        }
    }
    weights.len() - 1
}

/// Transition weights at `v`: per-neighbor conductances and their total.
/// Probabilities are the weights divided by the total, summing to one by
/// construction.
pub fn transition_weights(lattice: &LatticeSpec, v: &LatticeVertex) -> (Vec<f64>, f64) {
    let neighbors = lattice.neighbors(v);
    let weights: Vec<f64> = neighbors.iter().map(|(_, c)| *c).collect();
    let total = weights.iter().sum();
    (weights, total)
}

/// One step of the walk from `v`.
pub fn walk_step<R: Rng>(lattice: &LatticeSpec, v: &LatticeVertex, rng: &mut R) -> LatticeVertex {
    let neighbors = lattice.neighbors(v);
    if neighbors.iter().all(|(_, c)| *c == neighbors[0].1) {
        // uniform case (all lattices in scope): one draw, no scan
        let i = rng.random_range(0..neighbors.len());
        return neighbors[i].0.clone();
    }
    let weights: Vec<f64> = neighbors.iter().map(|(_, c)| *c).collect();
    let i = choose_weighted(&weights, rng);
    neighbors[i].0.clone()
}

/// First return step of a single trial, if any. The trajectory depends only
/// on `(seed, trial)`, never on the step budget.
fn first_return_step(
    lattice: &LatticeSpec,
    start: &LatticeVertex,
    max_steps: u32,
    seed: u64,
    trial: u32,
) -> Option<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    let mut at = start.clone();
    for step in 1..=max_steps {
        at = walk_step(lattice, &at, &mut rng);
        if &at == start {
            return Some(step);
        }
    }
    None
}

/// Runs all trials and aggregates return statistics. Deterministic given the
/// config; trials run in parallel with per-trial generator streams.
pub fn return_frequency(lattice: &LatticeSpec, cfg: &WalkConfig) -> Result<WalkStats> {
    lattice.validate_vertex(&cfg.start)?;
    let outcomes: Vec<Option<u32>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| first_return_step(lattice, &cfg.start, cfg.max_steps, cfg.seed, trial))
        .collect();
    let returns = outcomes.iter().filter(|o| o.is_some()).count() as u32;
    let total_steps: u64 = outcomes.iter().flatten().map(|&s| s as u64).sum();
    let f = returns as f64 / cfg.trials as f64;
    Ok(WalkStats {
        max_steps: cfg.max_steps,
        trials: cfg.trials,
        seed: cfg.seed,
        returns,
        return_frequency: f,
        standard_error: (f * (1.0 - f) / cfg.trials as f64).sqrt(),
        mean_first_return_step: (returns > 0).then(|| total_steps as f64 / returns as f64),
    })
}

/// Escape-probability estimate derived from the resistance-to-infinity
/// sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum EscapeEstimate {
    /// The sequence plateaued: escape probability
    /// `1 / (vertex conductance * resistance limit)`.
    Transient {
        resistance_limit: f64,
        escape_probability: f64,
    },
    /// The sequence diverges per the trend fit; the escape probability is 0.
    Recurrent { trend: Trend },
    /// Neither a plateau nor a clear divergence at the tested radii.
    Indeterminate { trend: Trend },
}

impl EscapeEstimate {
    pub fn escape_probability(&self) -> Option<f64> {
        match self {
            EscapeEstimate::Transient {
                escape_probability, ..
            } => Some(*escape_probability),
            EscapeEstimate::Recurrent { .. } => Some(0.0),
            EscapeEstimate::Indeterminate { .. } => None,
        }
    }
}

/// Bridges resistance to random-walk escape: if the resistance from `p` to
/// the shorted boundary converges to R, the walk escapes with probability
/// `1 / (c(p) * R)` where `c(p)` is the total conductance at `p`. A plateau
/// is accepted when the last two terms differ by less than
/// [`PLATEAU_TOLERANCE`]; a diverging trend reports escape probability 0.
pub fn escape_probability_via_resistance(
    lattice: &LatticeSpec,
    p: &LatticeVertex,
    stop: &StopRule,
    cfg: &SolveConfig,
) -> Result<EscapeEstimate> {
    let seq = SwellingSequence::around(lattice, std::slice::from_ref(p))?;
    let table = resistance_to_infinity(lattice, p, &seq, stop, cfg)?;
    let trend = classify_trend(&table);
    if table.len() >= 2 {
        let last = table[table.len() - 1].1;
        let prev = table[table.len() - 2].1;
        if (last - prev).abs() < PLATEAU_TOLERANCE {
            let (_, total_conductance) = transition_weights(lattice, p);
            return Ok(EscapeEstimate::Transient {
                resistance_limit: last,
                escape_probability: 1.0 / (total_conductance * last),
            });
        }
    }
    if trend.is_diverging() {
        Ok(EscapeEstimate::Recurrent { trend })
    } else {
        Ok(EscapeEstimate::Indeterminate { trend })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choose_weighted_respects_ratios() {
        // conductances (2, 1, 1) -> probabilities (1/2, 1/4, 1/4)
        let weights = [2.0, 1.0, 1.0];
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            counts[choose_weighted(&weights, &mut rng)] += 1;
        }
        for (count, want) in counts.iter().zip([0.5, 0.25, 0.25]) {
            let f = *count as f64 / n as f64;
            let sigma = (want * (1.0 - want) / n as f64).sqrt();
            assert!(
                (f - want).abs() < 3.0 * sigma,
                "frequency {f} too far from {want}"
            );
        }
    }

    #[test]
    fn walk_step_is_uniform_on_grids() {
        let g1 = LatticeSpec::grid(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 100_000;
        let mut plus = 0usize;
        for _ in 0..n {
            let w = walk_step(&g1, &g1.origin(), &mut rng);
            if w.coords()[0] == 1 {
                plus += 1;
            }
        }
        let f = plus as f64 / n as f64;
        let sigma = (0.25 / n as f64).sqrt();
        assert!((f - 0.5).abs() < 3.0 * sigma);

        let g2 = LatticeSpec::grid(2).unwrap();
        let mut counts = std::collections::HashMap::new();
        for _ in 0..n {
            let w = walk_step(&g2, &g2.origin(), &mut rng);
            *counts.entry(w).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 4);
        let sigma = (0.25 * 0.75 / n as f64).sqrt();
        for (_, c) in counts {
            let f = c as f64 / n as f64;
            assert!((f - 0.25).abs() < 3.0 * sigma, "frequency {f}");
        }
    }

    #[test]
    fn seeded_runs_are_identical() {
        let g2 = LatticeSpec::grid(2).unwrap();
        let cfg = WalkConfig {
            max_steps: 500,
            trials: 400,
            seed: 42,
            start: g2.origin(),
        };
        let a = return_frequency(&g2, &cfg).unwrap();
        let b = return_frequency(&g2, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.return_frequency > 0.0 && a.return_frequency <= 1.0);
    }

    #[test]
    fn trajectories_do_not_depend_on_step_budget() {
        let g1 = LatticeSpec::grid(1).unwrap();
        for trial in 0..50u32 {
            let short = first_return_step(&g1, &g1.origin(), 100, 7, trial);
            let long = first_return_step(&g1, &g1.origin(), 10_000, 7, trial);
            if let Some(s) = short {
                assert_eq!(long, Some(s));
            }
        }
    }

    #[test]
    fn escape_estimate_recurrent_on_the_line() {
        let g1 = LatticeSpec::grid(1).unwrap();
        let est = escape_probability_via_resistance(
            &g1,
            &g1.origin(),
            &StopRule::radii(2, 10),
            &SolveConfig::default(),
        )
        .unwrap();
        assert!(matches!(
            est,
            EscapeEstimate::Recurrent {
                trend: Trend::DivergingLinear
            }
        ));
        assert_eq!(est.escape_probability(), Some(0.0));
    }
}
