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

use qcshor::linalg::frobenius_distance;
use qcshor::propagator::{propagate, ControlPath, Method, PropagationSettings, Unitary};
use qcshor::synthesis::{
    error_function, minimize, min_vertices, noise_robustness, pulse_integrals_to_path, single_qubit_zxz, targets,
    Stage, SynthesisProblem, SynthesisResult,
};

fn ih() -> Unitary {
    Unitary::new(targets::hadamard_matrix() * Complex64::I).unwrap()
}

#[test]
fn vertex_condition() {
    assert_eq!(min_vertices(1), 2);
    assert_eq!(min_vertices(2), 4);
    assert_eq!(min_vertices(3), 11);
}

#[test]
fn named_targets_are_special_unitary() {
    for name in ["cnot", "fredkin", "hadamard", "qft3", "ccphase:1/8", "ccphase:0.25"] {
        let u = targets::named(name).unwrap();
        assert!(u.defect() < 1e-12, "{name}");
        assert!((u.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-12, "{name}");
    }
    assert!(targets::named("toffoli?").is_err());
    assert!(targets::named("ccphase:x").is_err());
}

#[test]
fn hadamard_is_synthesized_numerically() {
    let mut p = SynthesisProblem::new(ih(), 0, 7).unwrap();
    p.dt_schedule = vec![
        Stage { dt: 0.05, max_evals: 4000 },
        Stage { dt: 0.01, max_evals: 3000 },
        Stage { dt: 1e-3, max_evals: 3000 },
    ];
    p.tolerance = 1e-7;
    let r = minimize(&p).unwrap();
    assert!(r.converged && r.error <= 1e-7, "{}", r.error);
    // The reported error is the one an independent propagation sees.
    let u = propagate(&r.path, &PropagationSettings::with_dt(1e-3)).unwrap();
    assert!((frobenius_distance(u.matrix(), ih().matrix()) - r.error).abs() < 1e-12);
}

#[test]
fn restarts_are_deterministic_and_split_the_budget() {
    let target = targets::named("cnot").unwrap();
    let mut p = SynthesisProblem::new(target, 0, 21).unwrap();
    p.dt_schedule = vec![Stage { dt: 0.1, max_evals: 1200 }];
    p.restarts = 3;
    p.launch_evals = Some(150);
    let a = minimize(&p).unwrap();
    let b = minimize(&p).unwrap();
    assert_eq!(a, b);
    assert!(a.evals <= 1200);
    assert!(a.trace.windows(2).all(|w| w[1].1 <= w[0].1 && w[1].0 >= w[0].0));
    let back = SynthesisResult::from_json(&a.to_json().unwrap()).unwrap();
    assert_eq!(back, a);
}

#[test]
fn error_function_rejects_mismatched_register() {
    let cnot = targets::named("cnot").unwrap();
    assert!(error_function(&cnot, &ControlPath::empty(3), 0.1).is_err());
}

#[test]
fn noise_on_the_analytic_hadamard_path_is_linear() {
    let target = ih();
    let angles = single_qubit_zxz(&target).unwrap();
    let path = pulse_integrals_to_path(&angles).unwrap();
    let u = propagate(&path, &PropagationSettings::with_dt(1e-3).with_method(Method::Spectral)).unwrap();
    assert!(frobenius_distance(u.matrix(), target.matrix()) < 1e-10);

    let levels = [1e-4, 3e-4, 1e-3, 3e-3, 1e-2];
    let r = noise_robustness(&path, &target, &levels, 200, 5, 1e-2).unwrap();
    assert!(r.noiseless_error < 1e-5, "{}", r.noiseless_error);
    assert!(r.r_squared >= 0.99, "{}", r.r_squared);
    assert!(r.slope > 0.1 && r.slope < 20.0, "{}", r.slope);
    assert!(r.mean_errors.windows(2).all(|w| w[1] > w[0]));
    // Fewer than 30 trials are rejected.
    assert!(noise_robustness(&path, &target, &levels, 10, 5, 1e-2).is_err());
}

/// Extended three-qubit run (~1e6 evaluations, tens of minutes in release).
/// Writes the result to `$QCSHOR_FREDKIN_OUT` when set; the acceptance suite
/// picks up `tests/data/fredkin_path.json` for the noise criterion.
#[test]
#[ignore]
fn fredkin_extended_run() {
    let target = targets::named("fredkin").unwrap();
    let mut p = SynthesisProblem::new(target, 0, 1).unwrap();
    p.dt_schedule = vec![
        Stage { dt: 0.05, max_evals: 800_000 },
        Stage { dt: 0.01, max_evals: 150_000 },
        Stage { dt: 1e-3, max_evals: 50_000 },
    ];
    p.tolerance = 1e-4;
    let r = minimize(&p).unwrap();
    println!("error {:.3e} after {} evaluations", r.error, r.evals);
    if let Ok(out) = std::env::var("QCSHOR_FREDKIN_OUT") {
        std::fs::write(out, r.to_json().unwrap()).unwrap();
    }
    assert!(r.error <= 1e-4, "error {:.3e}", r.error);
}
