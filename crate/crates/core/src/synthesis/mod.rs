// Copyright 2026 The qcshor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Gate synthesis: finding control polygons whose evolution matches a target.
//!
//! The objective is the Frobenius distance `p(X_γ) = ‖Û − U_{X_γ}‖_F` between
//! the SU-normalized target and the evolution of the stacked vertex
//! coordinates. The landscape is rough, so minimization uses a Nelder–Mead
//! polytope with relaunches from the incumbent and a coarse-to-fine `dt`
//! schedule. One-qubit gates are never optimized numerically; see
//! [`single_qubit`].

pub mod nelder_mead;
pub mod noise;
pub mod single_qubit;
pub mod targets;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::propagator::{ControlPath, PathEvolver, PropagationSettings, SplitMatrix, Unitary};
use nelder_mead::{Coefficients, Limits, Stop};

pub use noise::{noise_robustness, NoiseReport};
pub use single_qubit::{pulse_integrals_to_path, pulses_to_path, single_qubit_zxz, Pulse, ZxzAngles};

/// Smallest `ν` with `2kν ≥ 2^{2k} − 1`: enough vertex coordinates to cover
/// the generators of SU(2^k).
pub fn min_vertices(k: usize) -> usize {
    assert!(k >= 1, "gate arity must be positive");
    let generators = (1usize << (2 * k)) - 1;
    generators.div_ceil(2 * k)
}

/// `‖target − U_path‖_F` with Taylor-3 propagation at step `dt`.
pub fn error_function(target: &Unitary, path: &ControlPath, dt: f64) -> Result<f64> {
    path.validate()?;
    let expected = 1usize << path.n;
    if target.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: target.dim(),
        });
    }
    let ev = PathEvolver::new(path.n, path.coupling, PropagationSettings::with_dt(dt))?;
    Ok(ev.distance(&SplitMatrix::new(target.matrix()), &path.flat()))
}

/// One annealing stage: optimize at step `dt` for at most `max_evals` evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub dt: f64,
    pub max_evals: usize,
}

/// Coarse-to-fine schedule spending 40% / 40% / 20% of `budget` at
/// `dt = 0.05, 0.01, 0.001`.
pub fn default_schedule(budget: usize) -> Vec<Stage> {
    let a = budget * 2 / 5;
    vec![
        Stage { dt: 0.05, max_evals: a },
        Stage { dt: 0.01, max_evals: a },
        Stage { dt: 1e-3, max_evals: budget - 2 * a },
    ]
}

#[derive(Debug, Clone)]
pub struct SynthesisProblem {
    pub target: Unitary,
    pub nu: usize,
    pub dt_schedule: Vec<Stage>,
    /// Independent multi-start trials; the stage budgets are split evenly
    /// between them.
    pub restarts: usize,
    /// Evaluation cap of a single polytope run before it is relaunched
    /// around the incumbent; `None` uses [`default_launch_evals`].
    pub launch_evals: Option<usize>,
    pub seed: u64,
    pub tolerance: f64,
}

impl SynthesisProblem {
    /// Problem with the default schedule and `ν = min_vertices(k)`.
    pub fn new(target: Unitary, budget: usize, seed: u64) -> Result<Self> {
        let k = arity(&target)?;
        let p = SynthesisProblem {
            target,
            nu: min_vertices(k),
            dt_schedule: default_schedule(budget),
            restarts: 1,
            launch_evals: None,
            seed,
            tolerance: 1e-6,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn arity(&self) -> usize {
        arity(&self.target).unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        let k = arity(&self.target)?;
        let off = (self.target.determinant() - linalg::ONE).norm();
        if off > 1e-10 {
            return Err(Error::NotSpecialUnitary(off));
        }
        let min = min_vertices(k);
        if self.nu < min {
            return Err(Error::Precondition(format!(
                "{k}-qubit gates need at least {min} vertices (got {})",
                self.nu
            )));
        }
        if self.dt_schedule.is_empty() {
            return Err(Error::InvalidArgument("empty dt schedule".into()));
        }
        for s in &self.dt_schedule {
            PropagationSettings::with_dt(s.dt).validate()?;
        }
        if self.dt_schedule.windows(2).any(|w| w[1].dt > w[0].dt) {
            return Err(Error::InvalidArgument("dt schedule must not increase".into()));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidArgument("restarts must be >= 1".into()));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::InvalidArgument("tolerance must be >= 0".into()));
        }
        Ok(())
    }

    pub fn final_dt(&self) -> f64 {
        self.dt_schedule.last().map_or(1e-3, |s| s.dt)
    }

    pub fn budget(&self) -> usize {
        self.dt_schedule.iter().map(|s| s.max_evals).sum()
    }
}

/// A polytope in `d` dimensions degenerates after a few hundred iterations
/// per dimension, so long runs are split into relaunches of this size.
pub fn default_launch_evals(d: usize) -> usize {
    500 * d
}

fn arity(target: &Unitary) -> Result<usize> {
    let d = target.dim();
    match d {
        2 => Ok(1),
        4 => Ok(2),
        8 => Ok(3),
        _ => Err(Error::InvalidArgument(format!(
            "targets must act on 1-3 qubits (dimension {d})"
        ))),
    }
}

/// Outcome of [`minimize`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisResult {
    pub path: ControlPath,
    /// Error at the final schedule `dt`, recomputed after optimization.
    pub error: f64,
    pub evals: usize,
    /// `(evaluations, best error so far)` pairs, at most [`TRACE_POINTS`] long.
    pub trace: Vec<(usize, f64)>,
    pub converged: bool,
    pub dt: f64,
}

pub const TRACE_POINTS: usize = 10_000;

impl SynthesisResult {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: SynthesisResult = serde_json::from_str(s)?;
        r.path.validate()?;
        Ok(r)
    }
}

/// Gaussian width of the simplex built around an incumbent on relaunch.
const RELAUNCH_SPREAD: f64 = 0.1;
/// Half-width of the box the first simplex is drawn from.
const INITIAL_BOX: f64 = 2.0;

struct TrialOutcome {
    coords: Vec<f64>,
    evals: usize,
    trace: Vec<(usize, f64)>,
}

fn trial_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn run_trial(problem: &SynthesisProblem, index: usize) -> Result<TrialOutcome> {
    let n = problem.arity();
    let d = 2 * n * problem.nu;
    let target = SplitMatrix::new(problem.target.matrix());
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(problem.seed, index));
    let spread = Normal::new(0.0, RELAUNCH_SPREAD).expect("positive spread");
    let per_launch = problem.launch_evals.unwrap_or_else(|| default_launch_evals(d)).max(d + 2);

    let mut incumbent: Option<(Vec<f64>, f64)> = None;
    let mut evals = 0usize;
    let mut trace: Vec<(usize, f64)> = Vec::new();

    for stage in &problem.dt_schedule {
        let ev = PathEvolver::new(n, 1.0, PropagationSettings::with_dt(stage.dt))?;
        let stage_budget = stage.max_evals / problem.restarts;
        let mut used = 0usize;
        if let Some((x, v)) = incumbent.as_mut() {
            *v = ev.distance(&target, x);
            used += 1;
        }
        let goal = problem.tolerance;
        while used < stage_budget {
            if incumbent.as_ref().is_some_and(|(_, v)| *v <= goal) {
                break;
            }
            let simplex: Vec<Vec<f64>> = match &incumbent {
                None => (0..=d)
                    .map(|_| (0..d).map(|_| rng.random_range(-INITIAL_BOX..INITIAL_BOX)).collect())
                    .collect(),
                Some((x, _)) => std::iter::once(x.clone())
                    .chain((0..d).map(|_| x.iter().map(|v| v + spread.sample(&mut rng)).collect()))
                    .collect(),
            };
            let base = evals + used;
            let limits = Limits {
                max_evals: (stage_budget - used).min(per_launch),
                target: goal,
                ftol: 1e-13,
                xtol: 1e-12,
            };
            let prior = incumbent.as_ref().map_or(f64::INFINITY, |(_, v)| *v);
            let out = nelder_mead::run(
                |x| ev.distance(&target, x),
                simplex,
                Coefficients::default(),
                limits,
                |e, v| {
                    if v < prior {
                        trace.push((base + e, v));
                    }
                },
            );
            used += out.evals;
            if out.best_value < prior {
                incumbent = Some((out.best, out.best_value));
            }
            if out.stop == Stop::Target {
                break;
            }
        }
        evals += used;
    }
    let coords = incumbent.map(|(x, _)| x).unwrap_or_else(|| vec![0.0; d]);
    Ok(TrialOutcome {
        coords,
        evals,
        trace,
    })
}

/// Keeps the running minimum and thins the trace to at most `max` points.
fn finish_trace(raw: Vec<(usize, f64)>, max: usize) -> Vec<(usize, f64)> {
    let mut best = f64::INFINITY;
    let mono: Vec<(usize, f64)> = raw
        .into_iter()
        .map(|(e, v)| {
            best = best.min(v);
            (e, best)
        })
        .collect();
    if mono.len() <= max {
        return mono;
    }
    let stride = mono.len().div_ceil(max - 1);
    let mut out: Vec<(usize, f64)> = mono.iter().step_by(stride).copied().collect();
    if out.last() != mono.last() {
        out.push(*mono.last().unwrap());
    }
    out
}

/// Runs the annealed polytope search and returns the best trial.
///
/// Trials are independent and run in parallel; the reduction picks the
/// lowest final error with ties broken by trial index, so the result only
/// depends on the seed.
pub fn minimize(problem: &SynthesisProblem) -> Result<SynthesisResult> {
    problem.validate()?;
    let n = problem.arity();
    let outcomes: Vec<Result<TrialOutcome>> = (0..problem.restarts)
        .into_par_iter()
        .map(|i| run_trial(problem, i))
        .collect();
    let final_dt = problem.final_dt();
    let mut best: Option<(f64, TrialOutcome)> = None;
    let mut total_evals = 0usize;
    for outcome in outcomes {
        let outcome = outcome?;
        total_evals += outcome.evals;
        let path = ControlPath::from_flat(n, &outcome.coords)?;
        let err = error_function(&problem.target, &path, final_dt)?;
        if best.as_ref().is_none_or(|(e, _)| err < *e) {
            best = Some((err, outcome));
        }
    }
    let (error, outcome) = best.expect("at least one trial");
    Ok(SynthesisResult {
        path: ControlPath::from_flat(n, &outcome.coords)?,
        error,
        evals: total_evals,
        trace: finish_trace(outcome.trace, TRACE_POINTS),
        converged: error <= problem.tolerance,
        dt: final_dt,
    })
}
