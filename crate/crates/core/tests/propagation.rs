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


use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcshor::linalg::{self, frobenius_distance, Axis, CMatrix};
use qcshor::propagator::{propagate, ControlPath, Method, PropagationSettings};
use qcshor::synthesis::{pulse_integrals_to_path, single_qubit_zxz, targets};

/// Hamiltonian built directly from Kronecker products of Pauli matrices.
fn oracle_hamiltonian(n: usize, v: &[f64], c: f64) -> CMatrix {
    let one = |axis: Axis, q: usize| {
        (0..n).fold(linalg::identity(1), |acc, k| {
            let f = if k == q { linalg::pauli(axis) } else { linalg::identity(2) };
            linalg::kron(&acc, &f)
        })
    };
    let dim = 1 << n;
    let mut h = CMatrix::zeros(dim, dim);
    for i in 0..n {
        h -= one(Axis::Z, i) * Complex64::new(0.5 * v[i], 0.0);
        h -= one(Axis::X, i) * Complex64::new(0.5 * v[n + i], 0.0);
        for j in (i + 1)..n {
            h -= one(Axis::Y, i) * one(Axis::Y, j) * Complex64::new(c * v[n + i] * v[n + j], 0.0);
        }
    }
    h
}

/// `exp(A)` by scaling and squaring with a long Taylor series.
fn expm(a: &CMatrix) -> CMatrix {
    let norm = linalg::frobenius(a);
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a / Complex64::new(2f64.powi(s as i32), 0.0);
    let dim = a.nrows();
    let mut term = linalg::identity(dim);
    let mut sum = linalg::identity(dim);
    for k in 1..30 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// Midpoint-rule product of exact exponentials along the closed polygon.
fn oracle_propagate(path: &ControlPath, steps: usize) -> CMatrix {
    let n = path.n;
    let origin = vec![0.0; 2 * n];
    let mut pts = vec![origin.clone()];
    pts.extend(path.vertices.iter().cloned());
    pts.push(origin);
    let mut u = linalg::identity(1 << n);
    let dt = 1.0 / steps as f64;
    for w in pts.windows(2) {
        for k in 0..steps {
            let s = (k as f64 + 0.5) * dt;
            let p: Vec<f64> = w[0].iter().zip(&w[1]).map(|(a, b)| a + s * (b - a)).collect();
            let h = oracle_hamiltonian(n, &p, path.coupling);
            u = expm(&(h * Complex64::new(0.0, -dt))) * u;
        }
    }
    u
}

fn random_path(rng: &mut ChaCha8Rng, n: usize, nu: usize) -> ControlPath {
    let v = (0..nu).map(|_| (0..2 * n).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
    ControlPath::new(n, v).unwrap()
}

#[test]
fn spectral_matches_oracle_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=3 {
        let path = random_path(&mut rng, n, 3);
        let s = PropagationSettings::with_dt(0.05).with_method(Method::Spectral);
        let u = propagate(&path, &s).unwrap();
        let want = oracle_propagate(&path, 20);
        assert!(frobenius_distance(u.matrix(), &want) < 1e-11, "n = {n}");
    }
}

#[test]
fn methods_agree_on_three_qubits() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let path = random_path(&mut rng, 3, 11);
    let spectral = propagate(&path, &PropagationSettings::with_dt(1e-3).with_method(Method::Spectral)).unwrap();
    let taylor = propagate(&path, &PropagationSettings::with_dt(1e-3)).unwrap();
    let cayley = propagate(&path, &PropagationSettings::with_dt(2.5e-4).with_method(Method::Cayley)).unwrap();
    assert!(frobenius_distance(taylor.matrix(), spectral.matrix()) < 1e-6);
    // Cayley is second order; checked at a finer step with a looser bound.
    let cayley_ref = propagate(&path, &PropagationSettings::with_dt(2.5e-4).with_method(Method::Spectral)).unwrap();
    let d = frobenius_distance(cayley.matrix(), cayley_ref.matrix());
    assert!(d < 5e-6, "cayley {d:e}");
}

#[test]
fn fine_steps_converge_to_time_ordered_exponential() {
    // The midpoint product approaches the exact time-ordered exponential at
    // second order in dt.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let path = random_path(&mut rng, 2, 4);
    let at = |dt: f64| propagate(&path, &PropagationSettings::with_dt(dt).with_method(Method::Spectral)).unwrap();
    let reference = at(1.0 / 1600.0);
    let e1 = frobenius_distance(at(0.02).matrix(), reference.matrix());
    let e2 = frobenius_distance(at(0.01).matrix(), reference.matrix());
    let ratio = e1 / e2;
    assert!((3.0..5.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn concatenated_paths_multiply() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = random_path(&mut rng, 2, 3);
    let b = random_path(&mut rng, 2, 2);
    let mut joined = a.vertices.clone();
    joined.push(vec![0.0; 4]);
    joined.extend(b.vertices.iter().cloned());
    let ab = ControlPath::new(2, joined).unwrap();
    let s = PropagationSettings::with_dt(0.01);
    let ua = propagate(&a, &s).unwrap();
    let ub = propagate(&b, &s).unwrap();
    let uab = propagate(&ab, &s).unwrap();
    assert!(frobenius_distance(uab.matrix(), &(ub.matrix() * ua.matrix())) < 1e-12);
}

#[test]
fn origin_path_is_identity() {
    for n in 1..=3 {
        for method in [Method::Taylor, Method::Cayley, Method::Spectral] {
            let u = propagate(&ControlPath::empty(n), &PropagationSettings::with_dt(0.1).with_method(method)).unwrap();
            assert_eq!(u.matrix(), &linalg::identity(1 << n));
        }
    }
}

#[test]
fn analytic_pulses_give_ih() {
    let ih = targets::hadamard_matrix() * Complex64::I;
    let angles = single_qubit_zxz(&qcshor::propagator::Unitary::new(ih.clone()).unwrap()).unwrap();
    let path = pulse_integrals_to_path(&angles).unwrap();
    for method in [Method::Spectral, Method::Taylor] {
        let u = propagate(&path, &PropagationSettings::with_dt(1e-3).with_method(method)).unwrap();
        let tol = if method == Method::Spectral { 1e-10 } else { 1e-6 };
        assert!(frobenius_distance(u.matrix(), &ih) < tol, "{method:?}");
    }
}

#[test]
fn path_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let p = random_path(&mut rng, 3, 11);
    assert_eq!(ControlPath::from_json(&p.to_json().unwrap()).unwrap(), p);
    assert!(ControlPath::from_json(r#"{"n":2,"vertices":[[1,2,3]]}"#).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn propagators_are_special_unitary(coords in prop::collection::vec(-2.0f64..2.0, 16)) {
        let path = ControlPath::from_flat(2, &coords).unwrap();
        for method in [Method::Spectral, Method::Cayley] {
            let u = propagate(&path, &PropagationSettings::with_dt(0.02).with_method(method)).unwrap();
            prop_assert!(u.defect() < 1e-12);
            prop_assert!((u.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
        let u = propagate(&path, &PropagationSettings::with_dt(1e-3)).unwrap();
        prop_assert!(u.defect() < 1e-7);
    }

    #[test]
    fn uncoupled_register_factorizes(coords in prop::collection::vec(-2.0f64..2.0, 12)) {
        let mut path = ControlPath::from_flat(2, &coords).unwrap();
        path.coupling = 0.0;
        let single = |q: usize| {
            let v = path.vertices.iter().map(|v| vec![v[q], v[2 + q]]).collect();
            ControlPath::new(1, v).unwrap()
        };
        let s = PropagationSettings::with_dt(0.05).with_method(Method::Spectral);
        let u = propagate(&path, &s).unwrap();
        let u0 = propagate(&single(0), &s).unwrap();
        let u1 = propagate(&single(1), &s).unwrap();
        prop_assert!(frobenius_distance(u.matrix(), &linalg::kron(u0.matrix(), u1.matrix())) < 1e-12);
    }
}
