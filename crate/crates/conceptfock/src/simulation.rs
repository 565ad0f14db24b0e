//! Seeded Monte Carlo generation of synthetic yes/no membership judgments.
//!
//! Each simulated subject answers three independent questions: membership in
//! concept A (at rate `mu_a`), in concept B (at rate `mu_b`), and in the
//! combination (at the model value for the supplied parameters).
//!
//! Reproducibility is part of the contract: draws come from ChaCha8
//! (`rand_chacha`), a portable counter-based generator, seeded with the
//! configured 64-bit seed and split into fixed sub-streams 0/1/2 for the
//! A/B/combination questions. A judgment is "yes" when a uniform `f64` draw
//! from `[0, 1)` falls below the rate. Identical configurations therefore
//! produce bit-identical results on every platform, and empirical rates for
//! different trial counts at one seed share their prefix draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::classicality::{CombinationKind, DomainError, MembershipRecord};
use crate::fock::{eval, fit_params, FitStrategy, ModelParams};

const STREAM_A: u64 = 0;
const STREAM_B: u64 = 1;
const STREAM_COMB: u64 = 2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimulationError {
    #[error("trials must be at least 1")]
    ZeroTrials,
    #[error("record kind {record} does not match parameter kind {params}")]
    KindMismatch {
        record: CombinationKind,
        params: CombinationKind,
    },
    #[error("model value {value:.6} lies outside [0, 1]; there is no rate to sample")]
    OutOfRangeModel { value: f64 },
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// One simulation request: how many subjects, which seed, and which record
/// and model parameters drive the rates.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub trials: u64,
    pub seed: u64,
    pub record: MembershipRecord,
    pub params: ModelParams,
}

/// Empirical rates from one run. Each rate is exactly
/// (yes-count) / trials. `refit` holds parameters refitted on the empirical
/// triple at the generator's sector weight, when that fit is feasible.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationResult {
    pub empirical_mu_a: f64,
    pub empirical_mu_b: f64,
    pub empirical_mu_comb: f64,
    pub trials: u64,
    pub refit: Option<ModelParams>,
}

fn yes_count(rate: f64, trials: u64, seed: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..trials).filter(|_| rng.random::<f64>() < rate).count() as u64
}

/// Runs the three judgment streams and refits the angle on the empirical
/// rates.
pub fn simulate(config: &SimulationConfig) -> Result<SimulationResult, SimulationError> {
    if config.trials == 0 {
        return Err(SimulationError::ZeroTrials);
    }
    if config.record.kind() != config.params.kind() {
        return Err(SimulationError::KindMismatch {
            record: config.record.kind(),
            params: config.params.kind(),
        });
    }
    let model = eval(config.record.mu_a(), config.record.mu_b(), &config.params)?;
    if !model.in_range {
        return Err(SimulationError::OutOfRangeModel { value: model.value });
    }
    let rate_comb = model.value.clamp(0.0, 1.0);

    let trials = config.trials;
    let n = trials as f64;
    let empirical_mu_a = yes_count(config.record.mu_a(), trials, config.seed, STREAM_A) as f64 / n;
    let empirical_mu_b = yes_count(config.record.mu_b(), trials, config.seed, STREAM_B) as f64 / n;
    let empirical_mu_comb = yes_count(rate_comb, trials, config.seed, STREAM_COMB) as f64 / n;

    let refit = MembershipRecord::new(
        config.record.exemplar(),
        config.record.concept_a(),
        config.record.concept_b(),
        empirical_mu_a,
        empirical_mu_b,
        empirical_mu_comb,
        config.record.kind(),
    )
    .ok()
    .and_then(|empirical| {
        fit_params(
            &empirical,
            FitStrategy::FixedM(config.params.m_sq()),
            config.params.variant(),
        )
        .ok()
    });

    Ok(SimulationResult {
        empirical_mu_a,
        empirical_mu_b,
        empirical_mu_comb,
        trials,
        refit,
    })
}

/// Absolute error of the empirical combination rate against the analytic
/// model value, for each requested trial count. All runs share the seed, so
/// larger counts extend the smaller ones rather than resampling.
pub fn convergence_sweep(
    record: &MembershipRecord,
    params: &ModelParams,
    trial_counts: &[u64],
    seed: u64,
) -> Result<Vec<(u64, f64)>, SimulationError> {
    let mut out = Vec::with_capacity(trial_counts.len());
    for &trials in trial_counts {
        let config = SimulationConfig {
            trials,
            seed,
            record: record.clone(),
            params: *params,
        };
        let result = simulate(&config)?;
        let analytic = eval(record.mu_a(), record.mu_b(), params)?.value;
        out.push((trials, (result.empirical_mu_comb - analytic).abs()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::ModelVariant;
    use approx::assert_relative_eq;

    fn mint_record() -> MembershipRecord {
        MembershipRecord::new(
            "Mint",
            "Food",
            "Plant",
            0.87,
            0.81,
            0.90,
            CombinationKind::Conjunction,
        )
        .unwrap()
    }

    fn config(trials: u64, seed: u64) -> SimulationConfig {
        let record = mint_record();
        let params = fit_params(
            &record,
            FitStrategy::FixedM(0.3),
            ModelVariant::UnscaledInterference,
        )
        .unwrap();
        SimulationConfig {
            trials,
            seed,
            record,
            params,
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let a = simulate(&config(10_000, 42)).unwrap();
        let b = simulate(&config(10_000, 42)).unwrap();
        assert_eq!(a, b);
        let c = simulate(&config(10_000, 43)).unwrap();
        assert_ne!(a.empirical_mu_comb, c.empirical_mu_comb);
    }

    #[test]
    fn single_trial_is_zero_or_one() {
        for seed in 0..20 {
            let r = simulate(&config(1, seed)).unwrap();
            for v in [r.empirical_mu_a, r.empirical_mu_b, r.empirical_mu_comb] {
                assert!(v == 0.0 || v == 1.0);
            }
        }
    }

    #[test]
    fn half_rate_concentrates() {
        // Zero interference, equal weights: the combination rate is exactly
        // (mu_a + mu_b) / 2 = 0.5.
        let record =
            MembershipRecord::new("x", "A", "B", 0.4, 0.6, 0.5, CombinationKind::Conjunction)
                .unwrap();
        let params = ModelParams::new(
            0.0,
            90.0,
            CombinationKind::Conjunction,
            ModelVariant::Printed,
        )
        .unwrap();
        let result = simulate(&SimulationConfig {
            trials: 10_000,
            seed: 7,
            record,
            params,
        })
        .unwrap();
        // Binomial 3-sigma bound at p = 0.5, N = 1e4 is 0.015.
        assert!((result.empirical_mu_comb - 0.5).abs() < 0.02);
    }

    #[test]
    fn rejects_bad_configs() {
        let mut c = config(0, 1);
        assert_eq!(simulate(&c), Err(SimulationError::ZeroTrials));
        c.trials = 10;
        c.params = ModelParams::new(
            0.3,
            50.0,
            CombinationKind::Disjunction,
            ModelVariant::UnscaledInterference,
        )
        .unwrap();
        assert!(matches!(
            simulate(&c),
            Err(SimulationError::KindMismatch { .. })
        ));
    }

    #[test]
    fn out_of_range_model_rejected() {
        // At zero weights and theta = 180 the sector-1 value is -1.
        let record =
            MembershipRecord::new("x", "A", "B", 0.0, 0.0, 0.0, CombinationKind::Conjunction)
                .unwrap();
        let params = ModelParams::new(
            0.0,
            180.0,
            CombinationKind::Conjunction,
            ModelVariant::Printed,
        )
        .unwrap();
        let err = simulate(&SimulationConfig {
            trials: 10,
            seed: 0,
            record,
            params,
        })
        .unwrap_err();
        assert!(matches!(err, SimulationError::OutOfRangeModel { .. }));
    }

    #[test]
    fn refit_recovers_generator_angle_roughly() {
        let result = simulate(&config(200_000, 11)).unwrap();
        let refit = result.refit.expect("refit should be feasible");
        assert_relative_eq!(refit.m_sq(), 0.3);
        assert!((refit.theta_deg() - 50.2053).abs() < 2.0, "{refit:?}");
    }

    #[test]
    fn sweep_shapes() {
        let record = mint_record();
        let params = fit_params(
            &record,
            FitStrategy::FixedM(0.3),
            ModelVariant::UnscaledInterference,
        )
        .unwrap();
        assert_eq!(convergence_sweep(&record, &params, &[], 1).unwrap(), vec![]);
        let single = convergence_sweep(&record, &params, &[100], 1).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].0, 100);
    }
}
