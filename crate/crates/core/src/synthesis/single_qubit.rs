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

//! Analytic single-qubit synthesis from alternating σ_z / σ_x pulse integrals.
//!
//! `U = e^{iσ_z θ_z2/2} · e^{iσ_x θ_x/2} · e^{iσ_z θ_z1/2}`, where each angle is
//! the time integral of the corresponding field while only that field is on.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::linalg::{Axis, CMatrix};
use crate::propagator::{ControlPath, Unitary};

/// Pulse integrals `(θ_z1, θ_x, θ_z2)`, applied in that time order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZxzAngles {
    pub z1: f64,
    pub x: f64,
    pub z2: f64,
}

impl ZxzAngles {
    pub fn as_array(&self) -> [f64; 3] {
        [self.z1, self.x, self.z2]
    }

    /// The product the three pulses generate.
    pub fn unitary(&self) -> CMatrix {
        rot(Axis::Z, self.z2) * rot(Axis::X, self.x) * rot(Axis::Z, self.z1)
    }
}

/// `e^{iσ θ/2}` for `σ ∈ {σ_x, σ_z}`.
fn rot(axis: Axis, theta: f64) -> CMatrix {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    match axis {
        Axis::Z => CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::from_polar(1.0, theta / 2.0),
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::from_polar(1.0, -theta / 2.0),
            ],
        ),
        Axis::X => CMatrix::from_row_slice(
            2,
            2,
            &[c.into(), Complex64::new(0.0, s), Complex64::new(0.0, s), c.into()],
        ),
        Axis::Y => unreachable!("no σ_y drive in the charge-qubit model"),
    }
}

/// Maps an angle into `[−2π, 2π)` without changing `e^{iσθ/2}` (period 4π).
fn wrap(theta: f64) -> f64 {
    let w = (theta + 2.0 * PI).rem_euclid(4.0 * PI) - 2.0 * PI;
    if w >= 2.0 * PI {
        w - 4.0 * PI
    } else {
        w
    }
}

/// Euler decomposition of a special unitary 2×2 matrix.
pub fn single_qubit_zxz(u: &Unitary) -> Result<ZxzAngles> {
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: u.dim(),
        });
    }
    let off = (u.determinant() - Complex64::ONE).norm();
    if off > 1e-10 {
        return Err(Error::NotSpecialUnitary(off));
    }
    let m = u.matrix();
    let (a, b) = (m[(0, 0)], m[(0, 1)]);
    // U00 = e^{i(z1+z2)/2} cos(x/2), U01 = i·e^{i(z2−z1)/2} sin(x/2).
    let x = 2.0 * b.norm().atan2(a.norm());
    let sum = if a.norm() > 1e-12 { 2.0 * a.arg() } else { 0.0 };
    let diff = if b.norm() > 1e-12 {
        2.0 * (b.arg() - FRAC_PI_2)
    } else {
        0.0
    };
    let mut angles = ZxzAngles {
        z1: (sum - diff) / 2.0,
        x,
        z2: (sum + diff) / 2.0,
    };
    // sum/diff are only fixed mod 4π, so z1 and z2 may carry a spurious
    // common factor of −1; absorb it with a 2π shift on z2.
    let check = angles.unitary();
    if (check[(0, 0)] + a).norm() + (check[(0, 1)] + b).norm()
        < (check[(0, 0)] - a).norm() + (check[(0, 1)] - b).norm()
    {
        angles.z2 += 2.0 * PI;
    }
    angles.z1 = wrap(angles.z1);
    angles.x = wrap(angles.x);
    angles.z2 = wrap(angles.z2);
    Ok(angles)
}

/// One triangular pulse: field `axis` on `qubit` with time integral `area`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse {
    pub qubit: usize,
    pub axis: Axis,
    pub area: f64,
}

/// Chains triangular pulses (two edges each, peak = area) into an
/// origin-anchored path; zero-area pulses are skipped.
pub fn pulses_to_path(n: usize, pulses: &[Pulse]) -> Result<ControlPath> {
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    for p in pulses.iter().filter(|p| p.area != 0.0) {
        if !p.area.is_finite() {
            return Err(Error::NonFinite("pulse area"));
        }
        if p.qubit >= n {
            return Err(Error::QubitOutOfRange {
                index: p.qubit,
                width: n,
            });
        }
        let mut v = vec![0.0; 2 * n];
        let slot = match p.axis {
            Axis::Z => p.qubit,
            Axis::X => n + p.qubit,
            Axis::Y => {
                return Err(Error::InvalidArgument("σ_y cannot be driven".into()));
            }
        };
        v[slot] = p.area;
        if !vertices.is_empty() {
            vertices.push(vec![0.0; 2 * n]);
        }
        vertices.push(v);
    }
    if vertices.is_empty() {
        return Ok(ControlPath::empty(n));
    }
    ControlPath::new(n, vertices)
}

/// Single-qubit path realizing the given Z–X–Z integrals.
pub fn pulse_integrals_to_path(angles: &ZxzAngles) -> Result<ControlPath> {
    pulses_to_path(
        1,
        &[
            Pulse {
                qubit: 0,
                axis: Axis::Z,
                area: angles.z1,
            },
            Pulse {
                qubit: 0,
                axis: Axis::X,
                area: angles.x,
            },
            Pulse {
                qubit: 0,
                axis: Axis::Z,
                area: angles.z2,
            },
        ],
    )
}
