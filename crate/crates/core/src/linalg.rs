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

//! Dense complex matrix helpers shared by the pulse and circuit layers.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Single-qubit Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

pub fn pauli(axis: Axis) -> CMatrix {
    match axis {
        Axis::X => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        Axis::Y => CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        Axis::Z => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    }
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Kronecker product `a ⊗ b`; the left factor occupies the more significant bits.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Frobenius norm `sqrt(Tr(A†A))`.
pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `‖U†U − I‖_F`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let prod = u.adjoint() * u;
    frobenius_distance(&prod, &identity(n))
}

pub fn determinant(u: &CMatrix) -> Complex64 {
    u.clone().determinant()
}

/// Rescales `g` by the principal root `det(g)^{-1/d}` so the result lies in SU(d).
pub fn su_normalize(g: &CMatrix) -> CMatrix {
    let d = g.nrows() as f64;
    let det = determinant(g);
    // Principal branch is (−π, π]; a det of −1 − 0i would otherwise land on −π.
    let mut arg = det.arg();
    if arg <= -std::f64::consts::PI + 1e-12 {
        arg = std::f64::consts::PI;
    }
    let phase = Complex64::from_polar(1.0, -arg / d);
    g * phase
}

/// Hermiticity defect `‖A − A†‖_F`.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    frobenius_distance(a, &a.adjoint())
}

pub fn is_finite(a: &CMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Serde adapter storing a complex matrix as rows of `[re, im]` pairs.
pub mod serde_matrix {
    use super::CMatrix;
    use num_complex::Complex64;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
        (0..m.nrows())
            .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
            .collect()
    }

    pub fn from_rows(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix, String> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != m) {
            return Err("ragged matrix rows".into());
        }
        Ok(CMatrix::from_fn(n, m, |r, c| {
            Complex64::new(rows[r][c][0], rows[r][c][1])
        }))
    }

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        to_rows(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        from_rows(&rows).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_orders_left_factor_as_msb() {
        let x = pauli(Axis::X);
        let k = kron(&x, &identity(2));
        // |00> -> |10>
        assert_eq!(k[(2, 0)], ONE);
        assert_eq!(k[(1, 0)], ZERO);
    }

    #[test]
    fn defect_of_scaled_identity() {
        let u = identity(2) * Complex64::new(2.0, 0.0);
        assert!((unitarity_defect(&u) - 3.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn su_normalize_gives_unit_determinant() {
        let cnot = CMatrix::from_fn(4, 4, |r, c| {
            let perm = [0, 1, 3, 2];
            if perm[r] == c {
                ONE
            } else {
                ZERO
            }
        });
        let s = su_normalize(&cnot);
        assert!((determinant(&s) - ONE).norm() < 1e-12);
    }
}
