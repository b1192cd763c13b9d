//! Seeded continuous-time simulation of the open-boundary TASEP.
//!
//! Occupation times are accumulated in `f64`; this is a statistical check
//! on the exact results, not an exact computation.

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{build_generator, StationaryDistribution};
use crate::rates::Rates;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationRun {
    pub n: usize,
    pub alpha: String,
    pub beta: String,
    pub seed: u64,
    pub events: u64,
    pub burn_in: u64,
    /// Time spent in each state after burn-in, by state index.
    pub occupation: Vec<f64>,
}

impl SimulationRun {
    pub fn total_time(&self) -> f64 {
        self.occupation.iter().sum()
    }

    /// Occupation-time fractions by state index.
    pub fn empirical(&self) -> Vec<f64> {
        let total = self.total_time();
        self.occupation.iter().map(|t| t / total).collect()
    }
}

/// Ten percent of the event budget.
pub fn default_burn_in(events: u64) -> u64 {
    events / 10
}

/// Runs `events` jumps from the empty lattice, discarding the first
/// `burn_in` dwell times.
pub fn simulate(n: usize, rates: &Rates, events: u64, burn_in: u64, seed: u64) -> Result<SimulationRun> {
    if events == 0 || events <= burn_in {
        return Err(Error::EventBudget { events, burn_in });
    }
    let g = build_generator(n, rates)?;
    let moves: Vec<Vec<(usize, f64)>> = (0..g.states())
        .map(|i| {
            g.off_diagonal(i)
                .iter()
                .map(|(j, r)| (*j, r.to_f64().expect("rates are finite")))
                .collect()
        })
        .collect();
    let exit_rate: Vec<f64> = moves.iter().map(|m| m.iter().map(|(_, r)| r).sum()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut occupation = vec![0.0; g.states()];
    let mut state = 0usize;
    for event in 0..events {
        let total = exit_rate[state];
        let dwell: f64 = Exp1.sample(&mut rng);
        if event >= burn_in {
            occupation[state] += dwell / total;
        }
        let mut u = rng.random::<f64>() * total;
        let options = &moves[state];
        let mut next = options[options.len() - 1].0;
        for &(target, rate) in options {
            if u < rate {
                next = target;
                break;
            }
            u -= rate;
        }
        state = next;
    }
    Ok(SimulationRun {
        n,
        alpha: crate::rates::format_rational(rates.alpha()),
        beta: crate::rates::format_rational(rates.beta()),
        seed,
        events,
        burn_in,
        occupation,
    })
}

/// Total-variation distance between an empirical and an exact distribution.
pub fn total_variation(empirical: &[f64], exact: &StationaryDistribution) -> f64 {
    empirical
        .iter()
        .zip(exact.probabilities())
        .map(|(p, q)| (p - q.to_f64().unwrap_or(f64::NAN)).abs())
        .sum::<f64>()
        / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_state_symmetric() {
        let run = simulate(1, &Rates::unit(), 200_000, 1_000, 3).unwrap();
        let p = run.empirical();
        assert!((p[1] - 0.5).abs() < 0.01, "{p:?}");
    }

    #[test]
    fn deterministic() {
        let rates = Rates::from_ratios((1, 2), (1, 3)).unwrap();
        let a = simulate(3, &rates, 10_000, 100, 42).unwrap();
        let b = simulate(3, &rates, 10_000, 100, 42).unwrap();
        assert_eq!(a, b);
        let c = simulate(3, &rates, 10_000, 100, 43).unwrap();
        assert_ne!(a.occupation, c.occupation);
    }

    #[test]
    fn budget_errors() {
        assert!(matches!(simulate(2, &Rates::unit(), 0, 0, 1), Err(Error::EventBudget { .. })));
        assert!(matches!(simulate(2, &Rates::unit(), 10, 10, 1), Err(Error::EventBudget { .. })));
        assert_eq!(default_burn_in(1_000_000), 100_000);
    }
}
