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

//! Sensitivity of a synthesized path to Gaussian vertex noise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagator::{ControlPath, PathEvolver, PropagationSettings, SplitMatrix, Unitary};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseReport {
    pub levels: Vec<f64>,
    pub mean_errors: Vec<f64>,
    pub noiseless_error: f64,
    /// Least-squares slope of mean error against rms, through the origin.
    pub slope: f64,
    /// Coefficient of determination of that fit (centered total sum of squares).
    pub r_squared: f64,
}

/// Mean error over `trials` i.i.d. displacements of every vertex coordinate
/// by `N(0, level²)`, for each level.
pub fn noise_robustness(
    path: &ControlPath,
    target: &Unitary,
    levels: &[f64],
    trials: usize,
    seed: u64,
    dt: f64,
) -> Result<NoiseReport> {
    path.validate()?;
    if trials < 30 {
        return Err(Error::Precondition(format!("need >= 30 trials, got {trials}")));
    }
    if levels.is_empty() || levels.iter().any(|l| !(*l >= 0.0) || !l.is_finite()) {
        return Err(Error::InvalidArgument("noise levels must be finite and >= 0".into()));
    }
    if target.dim() != 1 << path.n {
        return Err(Error::DimensionMismatch {
            expected: 1 << path.n,
            found: target.dim(),
        });
    }
    let ev = PathEvolver::new(path.n, path.coupling, PropagationSettings::with_dt(dt))?;
    let split = SplitMatrix::new(target.matrix());
    let base = path.flat();
    let noiseless_error = ev.distance(&split, &base);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mean_errors = Vec::with_capacity(levels.len());
    for &level in levels {
        if level == 0.0 {
            mean_errors.push(noiseless_error);
            continue;
        }
        let normal = Normal::new(0.0, level).expect("positive level");
        let samples: Vec<Vec<f64>> = (0..trials)
            .map(|_| base.iter().map(|v| v + normal.sample(&mut rng)).collect())
            .collect();
        let errors: Vec<f64> = samples.par_iter().map(|x| ev.distance(&split, x)).collect();
        mean_errors.push(errors.iter().sum::<f64>() / trials as f64);
    }
    let (slope, r_squared) = fit_through_origin(levels, &mean_errors);
    Ok(NoiseReport {
        levels: levels.to_vec(),
        mean_errors,
        noiseless_error,
        slope,
        r_squared,
    })
}

/// Slope `Σxy/Σx²` and centered `R²` of the origin-constrained line.
pub fn fit_through_origin(x: &[f64], y: &[f64]) -> (f64, f64) {
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a).powi(2)).sum();
    let ss_tot: f64 = y.iter().map(|b| (b - mean).powi(2)).sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    (slope, r2)
}
