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

//! Register Hamiltonian of an inductively coupled Cooper-pair-box array.
//!
//! Each qubit `i` contributes `−½·B_z^i σ_z^i − ½·B_x^i σ_x^i`, and every pair
//! `i < j` is coupled through `−C·B_x^i B_x^j σ_y^i ⊗ σ_y^j`. Qubit 1 is the most
//! significant bit of basis-state labels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Axis, CMatrix};
use num_complex::Complex64;

/// Magnetic flux quantum `h/2e` in webers.
pub const FLUX_QUANTUM: f64 = 2.067_833_848_461_929e-15;

/// Instantaneous dimensionless control fields of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlVector {
    pub bz: Vec<f64>,
    pub bx: Vec<f64>,
    /// Coupling constant, 1 in natural units.
    pub c: f64,
}

impl ControlVector {
    pub fn new(bz: Vec<f64>, bx: Vec<f64>, c: f64) -> Result<Self> {
        let v = ControlVector { bz, bx, c };
        v.validate()?;
        Ok(v)
    }

    /// All fields zero (the degeneracy point) with unit coupling.
    pub fn zeros(n: usize) -> Self {
        ControlVector {
            bz: vec![0.0; n],
            bx: vec![0.0; n],
            c: 1.0,
        }
    }

    pub fn n(&self) -> usize {
        self.bz.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.bz.is_empty() {
            return Err(Error::InvalidArgument("control vector needs n >= 1".into()));
        }
        if self.bz.len() != self.bx.len() {
            return Err(Error::DimensionMismatch {
                expected: self.bz.len(),
                found: self.bx.len(),
            });
        }
        if !self.c.is_finite() || self.bz.iter().chain(&self.bx).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("control vector"));
        }
        if self.c < 0.0 {
            return Err(Error::InvalidArgument("coupling constant must be >= 0".into()));
        }
        Ok(())
    }
}

/// Physical parameters of a charge-qubit array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceParams {
    pub e_c: f64,
    pub e_j_max: f64,
    /// SQUID flux per qubit in units of the flux quantum.
    pub flux: Vec<f64>,
    pub gate_charge: Vec<f64>,
    /// Coupling inductance (H).
    pub inductance: f64,
    /// Total qubit capacitance in the LC circuit (F).
    pub c_qb: f64,
    /// SQUID capacitance (F).
    pub c_j: f64,
}

impl DeviceParams {
    pub fn validate(&self) -> Result<()> {
        let scalars = [self.e_c, self.e_j_max, self.inductance, self.c_qb, self.c_j];
        if scalars
            .iter()
            .chain(&self.flux)
            .chain(&self.gate_charge)
            .any(|v| !v.is_finite())
        {
            return Err(Error::NonFinite("device parameters"));
        }
        if self.flux.len() != self.gate_charge.len() {
            return Err(Error::DimensionMismatch {
                expected: self.flux.len(),
                found: self.gate_charge.len(),
            });
        }
        if self.flux.is_empty() {
            return Err(Error::InvalidArgument("device needs at least one qubit".into()));
        }
        if self.e_c <= 0.0 || self.e_j_max < 0.0 {
            return Err(Error::InvalidArgument(
                "require e_c > 0 and e_j_max >= 0".into(),
            ));
        }
        if self.inductance <= 0.0 || self.c_qb <= 0.0 || self.c_j <= 0.0 {
            return Err(Error::InvalidArgument(
                "inductance and capacitances must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Dense Hermitian operator on `2^n` dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HermitianOperator(#[serde(with = "linalg::serde_matrix")] CMatrix);

impl HermitianOperator {
    pub const TOLERANCE: f64 = 1e-12;

    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if !linalg::is_finite(&m) {
            return Err(Error::NonFinite("operator"));
        }
        let defect = linalg::hermiticity_defect(&m);
        if defect > Self::TOLERANCE * (1.0 + linalg::frobenius(&m)) {
            return Err(Error::InvalidArgument(format!(
                "operator is not Hermitian (defect {defect:.3e})"
            )));
        }
        Ok(HermitianOperator(m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }
}

/// `I ⊗ … ⊗ σ_axis ⊗ … ⊗ I` with the Pauli matrix at 1-based `site`.
pub fn embed_pauli(axis: Axis, site: usize, n: usize) -> Result<HermitianOperator> {
    if site == 0 || site > n {
        return Err(Error::QubitOutOfRange {
            index: site,
            width: n,
        });
    }
    let left = linalg::identity(1 << (site - 1));
    let right = linalg::identity(1 << (n - site));
    let m = linalg::kron(&linalg::kron(&left, &linalg::pauli(axis)), &right);
    Ok(HermitianOperator(m))
}

/// Assembles the register Hamiltonian for the given control fields.
pub fn assemble_hamiltonian(ctrl: &ControlVector) -> Result<HermitianOperator> {
    ctrl.validate()?;
    let n = ctrl.n();
    let dim = 1usize << n;
    let mut h = CMatrix::zeros(dim, dim);
    for i in 0..n {
        if ctrl.bz[i] != 0.0 {
            h -= embed_pauli(Axis::Z, i + 1, n)?.0 * Complex64::from(0.5 * ctrl.bz[i]);
        }
        if ctrl.bx[i] != 0.0 {
            h -= embed_pauli(Axis::X, i + 1, n)?.0 * Complex64::from(0.5 * ctrl.bx[i]);
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let w = ctrl.c * ctrl.bx[i] * ctrl.bx[j];
            if w != 0.0 {
                let yy = embed_pauli(Axis::Y, i + 1, n)?.0 * embed_pauli(Axis::Y, j + 1, n)?.0;
                h -= yy * Complex64::from(w);
            }
        }
    }
    Ok(HermitianOperator(h))
}

/// Maps device parameters to raw (unrescaled) control fields:
/// `B_x = E_J·cos(πΦ/Φ_0)`, `B_z = E_C·(1 − 2n_g)`, `C = π²L/Φ_0²·(C_qb/C_J)²`.
pub fn device_to_controls(dev: &DeviceParams) -> Result<ControlVector> {
    dev.validate()?;
    // cos(π/2) evaluates to 6e-17 rather than 0; snap the idle point exactly.
    let bx = dev
        .flux
        .iter()
        .map(|phi| {
            let v = dev.e_j_max * (std::f64::consts::PI * phi).cos();
            if v.abs() <= 1e-15 * dev.e_j_max {
                0.0
            } else {
                v
            }
        })
        .collect();
    let bz = dev
        .gate_charge
        .iter()
        .map(|ng| dev.e_c * (1.0 - 2.0 * ng))
        .collect();
    let ratio = dev.c_qb / dev.c_j;
    let c = std::f64::consts::PI.powi(2) * dev.inductance / FLUX_QUANTUM.powi(2) * ratio * ratio;
    ControlVector::new(bz, bx, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ONE, ZERO};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_fields_give_zero_matrix() {
        let h = assemble_hamiltonian(&ControlVector::zeros(2)).unwrap();
        assert_eq!(h.dim(), 4);
        assert!(h.matrix().iter().all(|z| *z == ZERO));
    }

    #[test]
    fn single_z_field() {
        let ctrl = ControlVector::new(vec![1.0], vec![0.0], 1.0).unwrap();
        let h = assemble_hamiltonian(&ctrl).unwrap();
        let expect = CMatrix::from_row_slice(2, 2, &[c(-0.5, 0.0), ZERO, ZERO, c(0.5, 0.0)]);
        assert_eq!(h.matrix(), &expect);
    }

    #[test]
    fn two_qubit_x_drive_matches_hand_expansion() {
        // −½(σx⊗I + I⊗σx) − σy⊗σy, expanded by hand in the |00>,|01>,|10>,|11> basis.
        let ctrl = ControlVector::new(vec![0.0, 0.0], vec![1.0, 1.0], 1.0).unwrap();
        let h = assemble_hamiltonian(&ctrl).unwrap();
        let m = c(-0.5, 0.0);
        #[rustfmt::skip]
        let expect = CMatrix::from_row_slice(4, 4, &[
            ZERO, m,    m,    ONE,
            m,    ZERO, -ONE, m,
            m,    -ONE, ZERO, m,
            ONE,  m,    m,    ZERO,
        ]);
        assert!(linalg::frobenius_distance(h.matrix(), &expect) < 1e-15);
    }

    #[test]
    fn embed_pauli_examples() {
        assert_eq!(embed_pauli(Axis::Z, 1, 1).unwrap().matrix(), &linalg::pauli(Axis::Z));
        let ix = linalg::kron(&linalg::identity(2), &linalg::pauli(Axis::X));
        assert_eq!(embed_pauli(Axis::X, 2, 2).unwrap().matrix(), &ix);
        let yi = linalg::kron(&linalg::pauli(Axis::Y), &linalg::identity(2));
        assert_eq!(embed_pauli(Axis::Y, 1, 2).unwrap().matrix(), &yi);
        assert!(matches!(
            embed_pauli(Axis::X, 3, 2),
            Err(Error::QubitOutOfRange { .. })
        ));
        assert!(embed_pauli(Axis::X, 0, 2).is_err());
    }

    #[test]
    fn rejects_non_finite_controls() {
        let ctrl = ControlVector {
            bz: vec![f64::NAN],
            bx: vec![0.0],
            c: 1.0,
        };
        assert!(matches!(
            assemble_hamiltonian(&ctrl),
            Err(Error::NonFinite(_))
        ));
    }

    fn device(flux: f64, ng: f64) -> DeviceParams {
        DeviceParams {
            e_c: 2.0,
            e_j_max: 0.3,
            flux: vec![flux, flux],
            gate_charge: vec![ng, ng],
            inductance: 3e-9,
            c_qb: 1e-15,
            c_j: 2e-15,
        }
    }

    #[test]
    fn device_mapping_examples() {
        let half = device_to_controls(&device(0.5, 0.5)).unwrap();
        assert_eq!(half.bx, vec![0.0, 0.0]);
        assert_eq!(half.bz, vec![0.0, 0.0]);

        let zero = device_to_controls(&device(0.0, 0.0)).unwrap();
        assert_eq!(zero.bx, vec![0.3, 0.3]);
        assert_eq!(zero.bz, vec![2.0, 2.0]);

        let expect_c = std::f64::consts::PI.powi(2) * 3e-9 / FLUX_QUANTUM.powi(2) * 0.25;
        assert!((zero.c - expect_c).abs() <= 1e-12 * expect_c);
    }

    #[test]
    fn device_validation() {
        let mut d = device(0.0, 0.0);
        d.e_c = 0.0;
        assert!(device_to_controls(&d).is_err());
        let mut d = device(0.0, 0.0);
        d.c_j = -1.0;
        assert!(device_to_controls(&d).is_err());
    }
}
