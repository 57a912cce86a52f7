//! Random instance generation, invariant suites and the CLI plumbing.
//!
//! Suites draw deterministic per-trial random streams, evaluate a set
//! of numerical invariants, and aggregate violations into a report that
//! serializes identically for identical `(seed, trials, dim)` inputs.

pub mod cli;
pub mod json;
mod suites;

use crate::error::{Error, Result};
use crate::opalg::{eig_hermitian, mat_exp, CMatrix, ConePoint, UnitizedHermitian, UnitizedOperator};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

/// Deterministic generator of random test instances.
#[derive(Debug, Clone)]
pub struct RandomModel {
    /// Master seed; each trial derives its own stream from it.
    pub seed: u64,
    /// Matrix dimension of generated values.
    pub n: usize,
    /// Spectra of generated points are mapped into this interval.
    pub spectral_range: [f64; 2],
    /// Exact norm given to generated tangent vectors.
    pub norm_bound: f64,
}

impl RandomModel {
    pub fn new(seed: u64, n: usize) -> Self {
        RandomModel {
            seed,
            n,
            spectral_range: [0.1, 10.0],
            norm_bound: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let [lo, hi] = self.spectral_range;
        if self.n == 0 {
            return Err(Error::Usage("dimension must be at least 1".into()));
        }
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::Usage(format!(
                "spectral range must satisfy 0 < lo < hi, got [{lo}, {hi}]"
            )));
        }
        if !(self.norm_bound > 0.0) {
            return Err(Error::Usage("norm bound must be positive".into()));
        }
        Ok(())
    }

    /// Independent random stream for one trial.
    pub fn rng_for(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial.wrapping_add(1));
        rng
    }

    /// Hermitian pair with uniform entries, scaled to `norm_bound`.
    pub fn random_tangent<R: Rng>(&self, rng: &mut R) -> UnitizedHermitian {
        let raw = CMatrix::from_fn(self.n, self.n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let sym = (&raw + raw.adjoint()) * Complex64::new(0.5, 0.0);
        let x = UnitizedHermitian::new(rng.random_range(-1.0..1.0), sym)
            .expect("symmetrized matrix is Hermitian");
        let norm = x.hs_norm();
        if norm > 0.0 {
            x.scale(self.norm_bound / norm)
        } else {
            x
        }
    }

    /// Point of the cone whose spectrum fills `spectral_range`, built
    /// as the exponential of an affinely remapped random pair.
    pub fn random_point<R: Rng>(&self, rng: &mut R) -> ConePoint {
        let x = self.random_tangent(rng);
        let lo = self.spectral_range[0].ln();
        let hi = self.spectral_range[1].ln();
        // The spectrum of a unitized pair includes the scalar coordinate
        // itself next to the shifted matrix eigenvalues, so the affine
        // remap must cover the scalar too or the exponential can
        // overflow when the matrix eigenvalues cluster.
        let eig = eig_hermitian(x.hs()).expect("random pair eigensolve");
        let mn = x.scalar() + eig.values.first().copied().unwrap_or(0.0).min(0.0);
        let mx = x.scalar() + eig.values.last().copied().unwrap_or(0.0).max(0.0);
        if mx - mn < 1e-12 {
            let mid = 0.5 * (lo + hi);
            return mat_exp(&UnitizedHermitian::new(mid, CMatrix::zeros(self.n, self.n)).unwrap());
        }
        let alpha = (hi - lo) / (mx - mn);
        let beta = lo - alpha * mn;
        let remapped = &x.scale(alpha) + &UnitizedHermitian::unit(self.n).scale(beta);
        mat_exp(&remapped)
    }

    /// Invertible, generally non-normal operator: a phase times a
    /// product of two positive exponentials. Never singular, so polar
    /// style factorizations stay well posed.
    pub fn random_operator<R: Rng>(&self, rng: &mut R) -> UnitizedOperator {
        let h1 = self.random_tangent(rng).scale(0.5);
        let h2 = self.random_tangent(rng).scale(0.5);
        let theta: f64 = rng.random_range(-3.0..3.0);
        let phase = Complex64::new(theta.cos(), theta.sin());
        let prod = &mat_exp(&h1).op().to_operator() * &mat_exp(&h2).op().to_operator();
        prod.scale_c(phase)
    }
}

/// One evaluated inequality: `measured` must stay at or below `bound`.
#[derive(Debug, Clone)]
pub struct Check {
    pub description: &'static str,
    pub measured: f64,
    pub bound: f64,
}

impl Check {
    pub fn new(description: &'static str, measured: f64, bound: f64) -> Self {
        Check {
            description,
            measured,
            bound,
        }
    }

    pub fn violation(&self) -> f64 {
        self.measured - self.bound
    }
}

/// A recorded violation inside a suite run.
#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    /// Trial index whose derived stream reproduces the instance.
    pub seed: u64,
    pub description: String,
    pub measured: f64,
    pub bound: f64,
}

/// Aggregated outcome of one suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub trials: usize,
    pub dim: usize,
    pub seed: u64,
    pub failures: Vec<Failure>,
    /// Largest `measured - bound` over every check; at most zero
    /// exactly when there are no failures.
    pub max_violation: f64,
    /// Wall-clock seconds; excluded from serialization so reports are
    /// byte-identical for identical inputs.
    #[serde(skip)]
    pub wall_time: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Names of the available suites, in canonical order.
pub const SUITE_NAMES: [&str; 8] = [
    "cat0",
    "minimality",
    "expansive",
    "curvature",
    "triple",
    "projection",
    "decomposition",
    "foliation",
];

fn suite_fn(name: &str) -> Result<fn(&RandomModel, u64) -> Result<Vec<Check>>> {
    Ok(match name {
        "cat0" => suites::cat0,
        "minimality" => suites::minimality,
        "expansive" => suites::expansive,
        "curvature" => suites::curvature,
        "triple" => suites::triple,
        "projection" => suites::projection,
        "decomposition" => suites::decomposition,
        "foliation" => suites::foliation,
        other => {
            return Err(Error::Usage(format!(
                "unknown suite '{other}', expected one of {}",
                SUITE_NAMES.join(", ")
            )))
        }
    })
}

/// Runs a named suite for `trials` independent random instances.
/// Trials execute in parallel but aggregate in trial order, so the
/// report depends only on `(name, seed, trials, dim, ranges)`.
pub fn run_suite(name: &str, model: &RandomModel, trials: usize) -> Result<SuiteReport> {
    model.validate()?;
    let f = suite_fn(name)?;
    let start = Instant::now();
    let per_trial: Vec<(u64, Vec<Check>)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| f(model, t).map(|checks| (t, checks)))
        .collect::<Result<Vec<_>>>()?;
    let mut failures = Vec::new();
    let mut max_violation = f64::NEG_INFINITY;
    for (trial, checks) in &per_trial {
        for check in checks {
            let violation = check.violation();
            max_violation = max_violation.max(violation);
            if violation > 0.0 {
                failures.push(Failure {
                    seed: *trial,
                    description: check.description.to_string(),
                    measured: check.measured,
                    bound: check.bound,
                });
            }
        }
    }
    if max_violation == f64::NEG_INFINITY {
        // No checks ran (zero trials): report a clean pass.
        max_violation = 0.0;
    }
    Ok(SuiteReport {
        suite: name.to_string(),
        trials,
        dim: model.n,
        seed: model.seed,
        failures,
        max_violation,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Applies the `SPDCONE_THREADS` cap to the global worker pool. Safe to
/// call more than once; only the first initialization wins.
pub fn configure_threads() {
    if let Ok(value) = std::env::var("SPDCONE_THREADS") {
        if let Ok(count) = value.trim().parse::<usize>() {
            if count >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(count)
                    .build_global();
            }
        }
    }
}
