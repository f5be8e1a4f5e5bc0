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

//! Time-ordered evolution along piecewise-linear control paths.
//!
//! A [`ControlPath`] is a polygon in the `2n`-dimensional control space that
//! starts and ends at the origin. Each edge takes one time unit and is cut
//! into `m = ⌈1/dt⌉` intervals; the evolution operator is the ordered product
//! of single-interval exponentials evaluated at the interval midpoints, with
//! the earliest factor rightmost.

mod kernel;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::register_model::{ControlVector, HermitianOperator};
use kernel::Kernel;

/// Largest register the dense kernels are compiled for.
pub const HARD_MAX_QUBITS: usize = 4;

fn one() -> f64 {
    1.0
}

fn is_one(v: &f64) -> bool {
    *v == 1.0
}

/// Polygonal control path with implicit origin start and end.
///
/// Each vertex stores `bz[1..n]` followed by `bx[1..n]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlPath {
    pub n: usize,
    pub vertices: Vec<Vec<f64>>,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub coupling: f64,
}

impl ControlPath {
    pub fn new(n: usize, vertices: Vec<Vec<f64>>) -> Result<Self> {
        let p = ControlPath {
            n,
            vertices,
            coupling: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds a path from the stacked coordinate vector `X_γ`.
    pub fn from_flat(n: usize, coords: &[f64]) -> Result<Self> {
        if n == 0 || !coords.len().is_multiple_of(2 * n) {
            return Err(Error::InvalidArgument(format!(
                "{} coordinates do not form {n}-qubit vertices",
                coords.len()
            )));
        }
        ControlPath::new(n, coords.chunks(2 * n).map(|c| c.to_vec()).collect())
    }

    /// The path with no vertices: one idle edge from the origin back to itself.
    pub fn empty(n: usize) -> Self {
        ControlPath {
            n,
            vertices: Vec::new(),
            coupling: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("path needs n >= 1".into()));
        }
        for v in &self.vertices {
            if v.len() != 2 * self.n {
                return Err(Error::DimensionMismatch {
                    expected: 2 * self.n,
                    found: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite("path vertex"));
            }
        }
        if !self.coupling.is_finite() || self.coupling < 0.0 {
            return Err(Error::InvalidArgument("coupling must be finite and >= 0".into()));
        }
        Ok(())
    }

    pub fn nu(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> usize {
        self.nu() + 1
    }

    pub fn duration(&self) -> f64 {
        self.edges() as f64
    }

    pub fn flat(&self) -> Vec<f64> {
        self.vertices.concat()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: ControlPath = serde_json::from_str(s)?;
        p.validate()?;
        Ok(p)
    }
}

/// Single-interval integrator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Truncated Taylor series of order `taylor_order`.
    Taylor,
    /// `(1 − iHΔt/2)(1 + iHΔt/2)^{-1}`.
    Cayley,
    /// Exact exponential through the eigendecomposition of `H`.
    Spectral,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "taylor" | "taylor3" => Ok(Method::Taylor),
            "cayley" => Ok(Method::Cayley),
            "spectral" => Ok(Method::Spectral),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PropagationSettings {
    pub dt: f64,
    pub method: Method,
    pub taylor_order: usize,
    pub max_qubits: usize,
}

impl Default for PropagationSettings {
    fn default() -> Self {
        PropagationSettings {
            dt: 1e-3,
            method: Method::Taylor,
            taylor_order: 3,
            max_qubits: 3,
        }
    }
}

impl PropagationSettings {
    pub fn with_dt(dt: f64) -> Self {
        PropagationSettings {
            dt,
            ..Default::default()
        }
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "dt must lie in (0, 1], got {}",
                self.dt
            )));
        }
        if self.taylor_order == 0 {
            return Err(Error::InvalidArgument("taylor_order must be >= 1".into()));
        }
        Ok(())
    }

    /// Intervals per unit edge; `Δt = 1/m` exactly.
    pub fn steps_per_edge(&self) -> usize {
        (1.0 / self.dt - 1e-9).ceil().max(1.0) as usize
    }
}

/// Dense unitary matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Unitary(#[serde(with = "linalg::serde_matrix")] CMatrix);

impl Unitary {
    pub const TOLERANCE: f64 = 1e-8;

    /// Checks `U†U = I` within [`Self::TOLERANCE`].
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if !linalg::is_finite(&m) {
            return Err(Error::NonFinite("unitary"));
        }
        let defect = linalg::unitarity_defect(&m);
        if defect > Self::TOLERANCE {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Unitary(m))
    }

    /// Like [`Unitary::new`] and additionally requires `det = 1` within `tol`.
    pub fn special(m: CMatrix, tol: f64) -> Result<Self> {
        let u = Unitary::new(m)?;
        let off = (u.determinant() - linalg::ONE).norm();
        if off > tol {
            return Err(Error::NotSpecialUnitary(off));
        }
        Ok(u)
    }

    pub fn identity(dim: usize) -> Self {
        Unitary(linalg::identity(dim))
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

    pub fn determinant(&self) -> Complex64 {
        linalg::determinant(&self.0)
    }

    pub fn adjoint(&self) -> Unitary {
        Unitary(self.0.adjoint())
    }

    pub fn defect(&self) -> f64 {
        linalg::unitarity_defect(&self.0)
    }
}

/// Control fields at time `t ∈ [0, ν+1]`, linearly interpolated along the current edge.
pub fn sample_path(path: &ControlPath, t: f64) -> Result<ControlVector> {
    path.validate()?;
    let duration = path.duration();
    if !(0.0..=duration).contains(&t) {
        return Err(Error::TimeOutOfRange { t, duration });
    }
    let dim = 2 * path.n;
    let origin = vec![0.0; dim];
    let nu = path.nu();
    let edge = (t.floor() as usize).min(nu);
    let s = t - edge as f64;
    let from = if edge == 0 { &origin } else { &path.vertices[edge - 1] };
    let to = if edge == nu { &origin } else { &path.vertices[edge] };
    let point: Vec<f64> = from.iter().zip(to).map(|(a, b)| a + s * (b - a)).collect();
    let (bz, bx) = point.split_at(path.n);
    ControlVector::new(bz.to_vec(), bx.to_vec(), path.coupling)
}

/// Approximates `exp(−iHΔt)` with the chosen integrator.
pub fn step(h: &HermitianOperator, dt: f64, method: Method, taylor_order: usize) -> Unitary {
    Unitary(step_matrix(h.matrix(), dt, method, taylor_order))
}

pub(crate) fn step_matrix(h: &CMatrix, dt: f64, method: Method, taylor_order: usize) -> CMatrix {
    let dim = h.nrows();
    let eye = linalg::identity(dim);
    match method {
        Method::Taylor => {
            let a = h * Complex64::new(0.0, -dt);
            let mut term = eye.clone();
            let mut sum = eye;
            for k in 1..=taylor_order {
                term = &term * &a / Complex64::from(k as f64);
                sum += &term;
            }
            sum
        }
        Method::Cayley => {
            let half = h * Complex64::new(0.0, dt / 2.0);
            let numer = &eye - &half;
            let denom = &eye + &half;
            // 1 + iHΔt/2 has eigenvalues 1 + iλΔt/2, never zero for Hermitian H.
            let inv = denom
                .lu()
                .try_inverse()
                .expect("1 + iHΔt/2 is invertible for Hermitian H");
            numer * inv
        }
        Method::Spectral => {
            let eig = nalgebra::SymmetricEigen::new(h.clone());
            let phases = eig
                .eigenvalues
                .map(|l| Complex64::from_polar(1.0, -l * dt));
            let v = &eig.eigenvectors;
            v * CMatrix::from_diagonal(&phases) * v.adjoint()
        }
    }
}

/// `‖U†U − I‖_F`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    linalg::unitarity_defect(u)
}

/// Time-ordered evolution operator of `path`.
pub fn propagate(path: &ControlPath, settings: &PropagationSettings) -> Result<Unitary> {
    path.validate()?;
    let ev = PathEvolver::new(path.n, path.coupling, *settings)?;
    Ok(Unitary(ev.evolve(&path.flat())))
}

/// Split (real, imaginary) row-major copy of a target matrix.
#[derive(Debug, Clone)]
pub struct SplitMatrix {
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl SplitMatrix {
    pub fn new(m: &CMatrix) -> Self {
        let dim = m.nrows();
        let mut re = Vec::with_capacity(dim * dim);
        let mut im = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                re.push(m[(i, j)].re);
                im.push(m[(i, j)].im);
            }
        }
        SplitMatrix { dim, re, im }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

enum AnyKernel {
    D2(Kernel<2>),
    D4(Kernel<4>),
    D8(Kernel<8>),
    D16(Kernel<16>),
}

/// Reusable evaluator of `U_{X_γ}` for a fixed register size and settings.
///
/// Takes the stacked vertex coordinates directly, which is the form the
/// optimizer works with.
pub struct PathEvolver {
    n: usize,
    settings: PropagationSettings,
    kernel: AnyKernel,
}

macro_rules! dispatch {
    ($self:expr, $k:ident => $body:expr) => {
        match &$self.kernel {
            AnyKernel::D2($k) => $body,
            AnyKernel::D4($k) => $body,
            AnyKernel::D8($k) => $body,
            AnyKernel::D16($k) => $body,
        }
    };
}

impl PathEvolver {
    pub fn new(n: usize, coupling: f64, settings: PropagationSettings) -> Result<Self> {
        settings.validate()?;
        let max = settings.max_qubits.min(HARD_MAX_QUBITS);
        if n == 0 {
            return Err(Error::InvalidArgument("register needs n >= 1".into()));
        }
        if n > max {
            return Err(Error::TooManyQubits { qubits: n, max });
        }
        let kernel = match n {
            1 => AnyKernel::D2(Kernel::new(n, coupling)),
            2 => AnyKernel::D4(Kernel::new(n, coupling)),
            3 => AnyKernel::D8(Kernel::new(n, coupling)),
            _ => AnyKernel::D16(Kernel::new(n, coupling)),
        };
        Ok(PathEvolver {
            n,
            settings,
            kernel,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn settings(&self) -> &PropagationSettings {
        &self.settings
    }

    fn check(&self, coords: &[f64]) {
        assert_eq!(coords.len() % (2 * self.n), 0, "ragged vertex coordinates");
    }

    pub fn evolve(&self, coords: &[f64]) -> CMatrix {
        self.check(coords);
        let m = self.settings.steps_per_edge();
        let (method, order) = (self.settings.method, self.settings.taylor_order);
        dispatch!(self, k => {
            let (ur, ui) = k.evolve(coords, m, method, order);
            kernel::split_to_complex(&ur, &ui)
        })
    }

    /// `‖target − U_{X_γ}‖_F`.
    pub fn distance(&self, target: &SplitMatrix, coords: &[f64]) -> f64 {
        self.check(coords);
        assert_eq!(target.dim, self.dim(), "target dimension");
        let m = self.settings.steps_per_edge();
        let (method, order) = (self.settings.method, self.settings.taylor_order);
        dispatch!(self, k => {
            let (ur, ui) = k.evolve(coords, m, method, order);
            kernel::distance(&target.re, &target.im, &ur, &ui)
        })
    }

    /// Real Hamiltonian at one control point, for cross-checks against
    /// [`crate::register_model::assemble_hamiltonian`].
    pub fn hamiltonian(&self, point: &[f64]) -> CMatrix {
        dispatch!(self, k => kernel::to_complex(&k.hamiltonian(point)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::register_model::assemble_hamiltonian;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_path(n: usize, nu: usize, seed: u64) -> ControlPath {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = (0..nu)
            .map(|_| (0..2 * n).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect();
        ControlPath::new(n, v).unwrap()
    }

    #[test]
    fn sample_path_examples() {
        let p = ControlPath::new(1, vec![vec![2.0, -4.0]]).unwrap();
        let at0 = sample_path(&p, 0.0).unwrap();
        assert_eq!((at0.bz[0], at0.bx[0]), (0.0, 0.0));
        let mid = sample_path(&p, 0.5).unwrap();
        assert_eq!((mid.bz[0], mid.bx[0]), (1.0, -2.0));
        let v = sample_path(&p, 1.0).unwrap();
        assert_eq!((v.bz[0], v.bx[0]), (2.0, -4.0));
        let end = sample_path(&p, 2.0).unwrap();
        assert_eq!((end.bz[0], end.bx[0]), (0.0, 0.0));
        assert!(matches!(
            sample_path(&p, 2.5),
            Err(Error::TimeOutOfRange { .. })
        ));
        assert!(sample_path(&p, -0.1).is_err());
    }

    #[test]
    fn kernel_hamiltonian_matches_dense_assembly() {
        for n in 1..=3 {
            let ev = PathEvolver::new(n, 0.7, PropagationSettings::default()).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            let point: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let ctrl = ControlVector::new(point[..n].to_vec(), point[n..].to_vec(), 0.7).unwrap();
            let dense = assemble_hamiltonian(&ctrl).unwrap();
            assert!(linalg::frobenius_distance(&ev.hamiltonian(&point), dense.matrix()) < 1e-14);
        }
    }

    #[test]
    fn degenerate_path_is_identity() {
        let p = ControlPath::new(2, vec![vec![0.0; 4]]).unwrap();
        for method in [Method::Taylor, Method::Cayley, Method::Spectral] {
            let u = propagate(&p, &PropagationSettings::with_dt(0.1).with_method(method)).unwrap();
            assert!(linalg::frobenius_distance(u.matrix(), &linalg::identity(4)) < 1e-15);
        }
    }

    #[test]
    fn triangular_z_pulse_gives_analytic_phase() {
        // ∫B_z dt = π over the triangle, U = exp(iπσ_z/2) = diag(i, −i).
        let p = ControlPath::new(1, vec![vec![PI, 0.0]]).unwrap();
        let u = propagate(&p, &PropagationSettings::with_dt(1e-3).with_method(Method::Spectral)).unwrap();
        let expect = CMatrix::from_row_slice(2, 2, &[linalg::I, linalg::ZERO, linalg::ZERO, -linalg::I]);
        assert!(linalg::frobenius_distance(u.matrix(), &expect) < 1e-12);
        let t = propagate(&p, &PropagationSettings::with_dt(1e-3)).unwrap();
        assert!(linalg::frobenius_distance(t.matrix(), &expect) < 1e-8);
    }

    #[test]
    fn step_examples() {
        let zero = HermitianOperator::new(CMatrix::zeros(2, 2)).unwrap();
        for method in [Method::Taylor, Method::Cayley, Method::Spectral] {
            let u = step(&zero, 0.3, method, 3);
            assert_eq!(u.matrix(), &linalg::identity(2));
        }
        let z = HermitianOperator::new(linalg::pauli(linalg::Axis::Z)).unwrap();
        let u = step(&z, PI, Method::Spectral, 3);
        assert!(linalg::frobenius_distance(u.matrix(), &(-linalg::identity(2))) < 1e-14);

        let x = HermitianOperator::new(linalg::pauli(linalg::Axis::X)).unwrap();
        let exact = step(&x, 0.01, Method::Spectral, 3);
        let approx = step(&x, 0.01, Method::Taylor, 3);
        let worst = exact
            .matrix()
            .iter()
            .zip(approx.matrix().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        // Remainder bound (Δt)^4/4! ≈ 4.2e-10.
        assert!(worst <= 1e-8, "{worst}");
        assert!(worst <= 0.01f64.powi(4) / 24.0 * 1.01);
    }

    #[test]
    fn unitarity_defect_examples() {
        assert_eq!(unitarity_defect(&linalg::identity(3)), 0.0);
        let two = linalg::identity(2) * Complex64::from(2.0);
        assert!((unitarity_defect(&two) - 3.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn spectral_output_is_exactly_unitary_with_unit_determinant() {
        let p = random_path(2, 4, 11);
        let u = propagate(&p, &PropagationSettings::with_dt(1e-2).with_method(Method::Spectral)).unwrap();
        assert!(u.defect() <= 1e-12, "{}", u.defect());
        assert!((u.determinant() - linalg::ONE).norm() <= 1e-12);
    }

    #[test]
    fn taylor_matches_spectral_on_random_path() {
        let p = random_path(2, 4, 3);
        let t = propagate(&p, &PropagationSettings::with_dt(1e-3)).unwrap();
        let s = propagate(&p, &PropagationSettings::with_dt(1e-3).with_method(Method::Spectral)).unwrap();
        let c = propagate(&p, &PropagationSettings::with_dt(1e-3).with_method(Method::Cayley)).unwrap();
        assert!(linalg::frobenius_distance(t.matrix(), s.matrix()) <= 1e-8);
        // Cayley is second order: ~1e-5 at dt=1e-3, below 1e-6 once dt ≤ 2.5e-4.
        assert!(linalg::frobenius_distance(c.matrix(), s.matrix()) <= 5e-5);
        let fine = PropagationSettings::with_dt(2.5e-4);
        let c = propagate(&p, &fine.with_method(Method::Cayley)).unwrap();
        let s = propagate(&p, &fine.with_method(Method::Spectral)).unwrap();
        assert!(linalg::frobenius_distance(c.matrix(), s.matrix()) <= 1e-6);
    }

    #[test]
    fn kernel_cayley_and_spectral_agree_with_dense_product() {
        // Independent route: assemble H at each midpoint and multiply dense steps.
        let p = random_path(2, 2, 5);
        let settings = PropagationSettings::with_dt(0.05).with_method(Method::Cayley);
        let m = settings.steps_per_edge();
        let mut u = linalg::identity(4);
        for k in 0..(p.edges() * m) {
            let t = (k as f64 + 0.5) / m as f64;
            let h = assemble_hamiltonian(&sample_path(&p, t).unwrap()).unwrap();
            u = step(&h, 1.0 / m as f64, Method::Cayley, 3).into_matrix() * u;
        }
        let fast = propagate(&p, &settings).unwrap();
        assert!(linalg::frobenius_distance(fast.matrix(), &u) < 1e-12);
    }

    #[test]
    fn rejects_oversized_registers() {
        let p = random_path(4, 1, 1);
        assert!(matches!(
            propagate(&p, &PropagationSettings::default()),
            Err(Error::TooManyQubits { qubits: 4, max: 3 })
        ));
        let wide = PropagationSettings {
            max_qubits: 4,
            dt: 0.1,
            ..Default::default()
        };
        assert_eq!(propagate(&p, &wide).unwrap().dim(), 16);
    }

    #[test]
    fn path_json_layout() {
        let p = ControlPath::new(2, vec![vec![1.0, 2.0, 3.0, 4.0]]).unwrap();
        let json = serde_json::to_value(&p).unwrap();
        assert_eq!(json, serde_json::json!({"n": 2, "vertices": [[1.0, 2.0, 3.0, 4.0]]}));
        assert_eq!(ControlPath::from_json(&p.to_json().unwrap()).unwrap(), p);
        assert!(ControlPath::from_json(r#"{"n": 2, "vertices": [[1.0]]}"#).is_err());
    }
}
