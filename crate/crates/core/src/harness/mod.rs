//! Seeded samplers and randomized trials for the closure theorems.
//!
//! Every trial draws from its own ChaCha stream `(seed, trial index)`, so a
//! single failing instance can be replayed in isolation and reports do not
//! depend on thread scheduling.

mod limacon;
mod samplers;
mod trials;

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classes::MembershipVerdict;
use crate::error::Result;
use crate::poly::{LambdaParam, Polynomial};

pub use limacon::{
    run_limacon_negative, run_limacon_part, run_limacon_trial, sample_in_domain, LimaconPart, NEGATIVE_ARM_MAX_SAMPLES,
};
pub use samplers::{sample_d, sample_d_with, sample_disk, sample_st, sample_t, DStrategy, SampledD};
pub use trials::{
    estimate_r, run_gauss_lucas_trial, run_half_plane_trial, run_herglotz_trial, run_main_trial,
    run_suffridge_trial, HALF_PLANE_MARGIN,
};

/// Instances closer than this to a class boundary are not counted.
pub const INDETERMINATE_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialWitness {
    pub trial: usize,
    pub part: String,
    pub detail: String,
    pub polys: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub theorem_id: String,
    pub trials: usize,
    pub failures: usize,
    pub indeterminate: usize,
    /// Trials that hit a numerical error (counted as indeterminate as well).
    pub errors: usize,
    /// Smallest margin among passing checks.
    pub worst_margin: f64,
    pub seed: u64,
    pub witnesses: Vec<TrialWitness>,
}

impl TrialReport {
    fn empty(theorem_id: &str, seed: u64) -> Self {
        TrialReport {
            theorem_id: theorem_id.to_string(),
            trials: 0,
            failures: 0,
            indeterminate: 0,
            errors: 0,
            worst_margin: f64::INFINITY,
            seed,
            witnesses: Vec::new(),
        }
    }

    pub fn indeterminate_fraction(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.indeterminate as f64 / self.trials as f64
        }
    }

    /// No failures and an indeterminate share at most `max_indeterminate`.
    pub fn passed(&self, max_indeterminate: f64) -> bool {
        self.failures == 0 && self.indeterminate_fraction() <= max_indeterminate
    }

    /// Folds another report into this one; counts add up and witnesses are appended.
    pub fn merge(&mut self, other: TrialReport) {
        self.trials += other.trials;
        self.failures += other.failures;
        self.indeterminate += other.indeterminate;
        self.errors += other.errors;
        self.worst_margin = self.worst_margin.min(other.worst_margin);
        self.witnesses.extend(other.witnesses);
    }

    pub fn merged(theorem_id: &str, seed: u64, parts: impl IntoIterator<Item = TrialReport>) -> Self {
        let mut out = Self::empty(theorem_id, seed);
        for p in parts {
            out.merge(p);
        }
        out
    }
}

/// Result of one check inside a trial.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Pass { margin: f64 },
    Indeterminate,
    Fail { part: String, detail: String, polys: Vec<Polynomial> },
}

impl Outcome {
    pub fn fail(part: &str, detail: impl Into<String>, polys: Vec<Polynomial>) -> Self {
        Outcome::Fail {
            part: part.to_string(),
            detail: detail.into(),
            polys,
        }
    }

    /// Turns a membership verdict into an outcome given the expected answer.
    pub fn from_verdict(v: &MembershipVerdict, expect: bool, part: &str, polys: &[&Polynomial]) -> Self {
        if v.indeterminate || v.margin.abs() < INDETERMINATE_MARGIN {
            return Outcome::Indeterminate;
        }
        if v.member == expect {
            Outcome::Pass { margin: v.margin.abs() }
        } else {
            Outcome::fail(
                part,
                format!("expected member = {expect}, got {:?} (margin {})", v.witness, v.margin),
                polys.iter().map(|p| (*p).clone()).collect(),
            )
        }
    }

    /// Combines the outcomes of several checks in one trial: any failure wins,
    /// then any indeterminate, otherwise the smallest margin.
    pub fn all(outcomes: impl IntoIterator<Item = Outcome>) -> Outcome {
        let mut margin = f64::INFINITY;
        let mut indeterminate = false;
        for o in outcomes {
            match o {
                Outcome::Fail { .. } => return o,
                Outcome::Indeterminate => indeterminate = true,
                Outcome::Pass { margin: m } => margin = margin.min(m),
            }
        }
        if indeterminate {
            Outcome::Indeterminate
        } else {
            Outcome::Pass { margin }
        }
    }
}

/// The per-trial generator: stream `trial` of the ChaCha generator seeded by `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Runs `trials` independent trials in parallel and collects them in index order.
pub fn run_trials<F>(theorem_id: &str, seed: u64, trials: usize, trial: F) -> TrialReport
where
    F: Fn(usize, &mut ChaCha8Rng) -> Result<Outcome> + Sync,
{
    let outcomes: Vec<Result<Outcome>> = (0..trials)
        .into_par_iter()
        .map(|i| trial(i, &mut trial_rng(seed, i)))
        .collect();
    let mut report = TrialReport::empty(theorem_id, seed);
    report.trials = trials;
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(Outcome::Pass { margin }) => report.worst_margin = report.worst_margin.min(margin),
            Ok(Outcome::Indeterminate) => report.indeterminate += 1,
            Ok(Outcome::Fail { part, detail, polys }) => {
                report.failures += 1;
                report.witnesses.push(TrialWitness { trial: i, part, detail, polys });
            }
            Err(_) => {
                report.errors += 1;
                report.indeterminate += 1;
            }
        }
    }
    report
}

/// `n` in `2..=8` and `lambda` in `{0} ∪ {j (2 pi / n) / 8 : j = 1..7}`.
pub fn standard_grid() -> Vec<LambdaParam> {
    let mut out = Vec::new();
    for n in 2..=8usize {
        for j in 0..8 {
            let lambda = j as f64 * (2.0 * PI / n as f64) / 8.0;
            out.push(LambdaParam::new(n, lambda).expect("grid point is in range"));
        }
    }
    out
}

/// Stable seed for one grid cell, so cells do not share streams.
pub fn cell_seed(seed: u64, lp: &LambdaParam) -> u64 {
    seed ^ ((lp.n() as u64) << 48) ^ lp.lambda().to_bits().rotate_left(17)
}
