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

//! Sampling, classical postprocessing and retries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::classical::{self, Postprocess, RetryReason};
use super::{build_shor_circuit, ShorInstance};
use crate::circuit::{self, HistogramRow};
use crate::error::{Error, Result};

/// Bases tried per call before giving up.
pub const MAX_ATTEMPTS: usize = 10;

/// One simulated run with a fixed base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttemptReport {
    pub base: u64,
    pub shots: usize,
    pub nonzero_shots: usize,
    /// Nonzero shots whose period candidate yielded factors.
    pub successful_shots: usize,
    /// Distinct period candidates, ascending.
    pub periods: Vec<u64>,
    pub retries: Vec<(RetryReason, usize)>,
    pub factors: Option<(u64, u64)>,
    pub outcomes: Vec<HistogramRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorReport {
    pub modulus: u64,
    pub seed: u64,
    pub attempts: Vec<AttemptReport>,
    pub factors: Option<(u64, u64)>,
    pub success: bool,
}

impl FactorReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Exact distribution of the x register after the full circuit.
pub fn x_distribution(inst: &ShorInstance) -> Result<Vec<f64>> {
    let circ = build_shor_circuit(inst)?;
    let mut state = inst.initial_state()?;
    circuit::run_circuit_in_place(&circ, &mut state)?;
    circuit::exact_register_distribution(&state, circ.register("x")?)
}

/// Evaluates sampled outcomes for base `a`.
pub fn evaluate_shots(inst: &ShorInstance, samples: &[u64], probs: &[f64]) -> AttemptReport {
    let bits = 2 * inst.n as u32;
    let mut periods = Vec::new();
    let mut retries: Vec<(RetryReason, usize)> = Vec::new();
    let (mut nonzero, mut ok) = (0, 0);
    let mut factors = None;
    for &s in samples {
        if s == 0 {
            continue;
        }
        nonzero += 1;
        let Some(r) = classical::continued_fraction_period(s, bits, inst.modulus, inst.base)
        else {
            continue;
        };
        if !periods.contains(&r) {
            periods.push(r);
        }
        match classical::postprocess(r, inst.base, inst.modulus) {
            Postprocess::Factors(p, q) => {
                ok += 1;
                factors.get_or_insert((p, q));
            }
            Postprocess::Retry(reason) => match retries.iter_mut().find(|(r, _)| *r == reason) {
                Some((_, c)) => *c += 1,
                None => retries.push((reason, 1)),
            },
        }
    }
    periods.sort_unstable();
    AttemptReport {
        base: inst.base,
        shots: samples.len(),
        nonzero_shots: nonzero,
        successful_shots: ok,
        periods,
        retries,
        factors,
        outcomes: circuit::histogram(samples, probs),
    }
}

/// Factors `modulus` by simulating the circuit and sampling `shots` outcomes per
/// base. The first base is `base` when given, later ones are drawn uniformly
/// from the untried coprime residues; at most [`MAX_ATTEMPTS`] bases are tried.
pub fn run_shor(modulus: u64, shots: usize, seed: u64, base: Option<u64>) -> Result<FactorReport> {
    if modulus < 3 || modulus.is_multiple_of(2) {
        return Err(Error::Precondition(format!("{modulus} must be odd and at least 3")));
    }
    if classical::is_prime_power(modulus) {
        return Err(Error::Precondition(format!("{modulus} is prime or a prime power")));
    }
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let width = 4 * super::bit_width(modulus) + 2;
    if width > circuit::MAX_WIDTH {
        return Err(Error::TooManyQubits {
            qubits: width,
            max: circuit::MAX_WIDTH,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut untried: Vec<u64> = (2..modulus).filter(|&a| classical::gcd(a, modulus) == 1).collect();
    let mut attempts = Vec::new();
    let mut next = match base {
        Some(a) => {
            ShorInstance::new(modulus, a)?;
            Some(a)
        }
        None => None,
    };
    while attempts.len() < MAX_ATTEMPTS {
        let a = match next.take() {
            Some(a) => a,
            None if untried.is_empty() => break,
            None => untried[rng.random_range(0..untried.len())],
        };
        untried.retain(|&v| v != a);
        let inst = ShorInstance::new(modulus, a)?;
        let probs = x_distribution(&inst)?;
        let samples = circuit::state::sample_distribution(&probs, shots, rng.random())?;
        let report = evaluate_shots(&inst, &samples, &probs);
        let done = report.factors.is_some();
        attempts.push(report);
        if done {
            break;
        }
    }
    let factors = attempts.iter().find_map(|a| a.factors);
    Ok(FactorReport {
        modulus,
        seed,
        attempts,
        factors,
        success: factors.is_some(),
    })
}
