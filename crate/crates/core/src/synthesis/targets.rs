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

//! Named gate targets, stored in SU(2^k) with qubit 1 as the most significant bit.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::propagator::Unitary;

pub use crate::circuit::gate::{qft_matrix, reverse_bits};
use crate::circuit::gate::permutation;

pub fn cnot_matrix() -> CMatrix {
    permutation(&[0, 1, 3, 2])
}

/// Controlled swap with qubit 1 as control.
pub fn fredkin_matrix() -> CMatrix {
    permutation(&[0, 1, 2, 3, 4, 6, 5, 7])
}

pub fn hadamard_matrix() -> CMatrix {
    crate::circuit::gate::hadamard()
}

/// Phase `e^{2πi·turns}` on `|111⟩`.
pub fn ccphase_matrix(turns: f64) -> CMatrix {
    let mut m = linalg::identity(8);
    m[(7, 7)] = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * turns);
    m
}

/// Rescales a unitary into SU(2^k) with the principal root of its determinant.
pub fn special(m: &CMatrix) -> Result<Unitary> {
    let u = Unitary::new(m.clone())?;
    Unitary::special(linalg::su_normalize(u.matrix()), 1e-10)
}

/// Resolves a gate name: `cnot`, `fredkin`, `hadamard`, `qft3`, `ccphase:<turns>`
/// where `<turns>` is a decimal or `p/q` fraction of a full turn.
pub fn named(name: &str) -> Result<Unitary> {
    let lower = name.to_ascii_lowercase();
    let m = match lower.as_str() {
        "cnot" => cnot_matrix(),
        "fredkin" | "cswap" => fredkin_matrix(),
        "hadamard" | "h" => hadamard_matrix(),
        "qft3" => qft_matrix(3),
        s if s.starts_with("ccphase:") => ccphase_matrix(parse_turns(&s["ccphase:".len()..])?),
        _ => return Err(Error::InvalidArgument(format!("unknown gate {name:?}"))),
    };
    special(&m)
}

fn parse_turns(s: &str) -> Result<f64> {
    let bad = || Error::InvalidArgument(format!("bad phase {s:?}"));
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            p / q
        }
        None => s.trim().parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}
