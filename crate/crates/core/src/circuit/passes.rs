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

//! Circuit rewriting: QFT decomposition, one-qubit merging, three-qubit splitting.

use num_complex::Complex64;

use super::gate::{controlled, DyadicPhase, Gate};
use super::state::{run_circuit_in_place, Statevector};
use super::{Circuit, Register};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Largest width [`circuit_unitary`] will expand.
pub const MAX_DENSE_WIDTH: usize = 12;

/// Swap-free `m`-qubit QFT with each Hadamard folded into the next controlled
/// phase on its wire and the last three qubits left as one `Qft` block.
/// Controlled phases with angle below `prune` radians are dropped. For
/// `m <= 3` the result is the single block.
pub fn qft_decompose(m: usize, prune: Option<f64>) -> Result<Circuit> {
    Ok(merge_adjacent_gates(&qft_unmerged(m, prune)?))
}

/// [`qft_decompose`] before Hadamards are folded into neighbours.
pub fn qft_unmerged(m: usize, prune: Option<f64>) -> Result<Circuit> {
    if m == 0 {
        return Err(Error::InvalidArgument("QFT needs at least one qubit".into()));
    }
    let eps = prune.unwrap_or(0.0);
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("bad pruning threshold {eps}")));
    }
    let mut c = Circuit::new(m)?;
    c.add_register(Register {
        bit_reversed: true,
        ..Register::new("q", 0, m)
    })?;
    let block = m.saturating_sub(3);
    for j in 0..block {
        c.push(Gate::Hadamard { qubit: j })?;
        for i in j + 1..m {
            let k = (i - j + 1) as u32;
            if 2.0 * std::f64::consts::PI / (k as f64).exp2() < eps {
                continue;
            }
            c.push(Gate::ControlledPhase {
                control: i,
                target: j,
                phase: DyadicPhase::unit(k)?,
            })?;
        }
    }
    c.push(Gate::Qft {
        qubits: (block..m).collect(),
    })?;
    Ok(c)
}

/// Replaces every `Qft`/`InvQft` block wider than three qubits by its unmerged
/// decomposition.
pub fn expand_wide_qft(circ: &Circuit) -> Result<Circuit> {
    let mut out = Circuit {
        gates: Vec::with_capacity(circ.gates.len()),
        blocks: Vec::new(),
        ..circ.clone()
    };
    for g in &circ.gates {
        match g {
            Gate::Qft { qubits } | Gate::InvQft { qubits } if qubits.len() > 3 => {
                let mut sub = qft_unmerged(qubits.len(), None)?;
                if matches!(g, Gate::InvQft { .. }) {
                    sub = sub.inverse();
                }
                out.gates
                    .extend(sub.gates.iter().map(|h| h.map_qubits(|q| qubits[q])));
            }
            other => out.gates.push(other.clone()),
        }
    }
    Ok(out)
}

/// `u` acting on position `slot` of a `k`-qubit local space.
fn embed(u: &CMatrix, slot: usize, k: usize) -> CMatrix {
    let left = linalg::identity(1 << slot);
    let right = linalg::identity(1 << (k - 1 - slot));
    linalg::kron(&linalg::kron(&left, u), &right)
}

fn can_absorb(g: &Gate) -> bool {
    g.arity() <= 3
}

/// Folds every one-qubit gate into the next gate on its wire, or failing that the
/// previous one, when that gate has at most three qubits. The host becomes a
/// `Custom` gate; consecutive one-qubit gates fuse into a single `Custom`.
pub fn merge_adjacent_gates(circ: &Circuit) -> Circuit {
    let mut slots: Vec<Option<Gate>> = circ.gates.iter().cloned().map(Some).collect();
    for i in 0..slots.len() {
        let Some(g) = slots[i].as_ref() else { continue };
        if g.arity() != 1 {
            continue;
        }
        let w = g.qubits()[0];
        let u = g.matrix().expect("one-qubit gates have matrices");
        let touches = |s: &Option<Gate>| s.as_ref().is_some_and(|h| h.qubits().contains(&w));
        if let Some(j) = (i + 1..slots.len()).find(|&j| touches(&slots[j])) {
            let host = slots[j].as_ref().unwrap();
            if can_absorb(host) {
                let qs = host.qubits();
                let slot = qs.iter().position(|&q| q == w).unwrap();
                let m = host.matrix().expect("small gate") * embed(&u, slot, qs.len());
                slots[j] = Some(Gate::Custom { qubits: qs, matrix: m });
                slots[i] = None;
                continue;
            }
        }
        if let Some(j) = (0..i).rev().find(|&j| touches(&slots[j])) {
            let host = slots[j].as_ref().unwrap();
            if can_absorb(host) {
                let qs = host.qubits();
                let slot = qs.iter().position(|&q| q == w).unwrap();
                let m = embed(&u, slot, qs.len()) * host.matrix().expect("small gate");
                slots[j] = Some(Gate::Custom { qubits: qs, matrix: m });
                slots[i] = None;
            }
        }
    }
    Circuit {
        width: circ.width,
        registers: circ.registers.clone(),
        gates: slots.into_iter().flatten().collect(),
        blocks: Vec::new(),
    }
}

fn sqrt_x() -> CMatrix {
    let a = Complex64::new(0.5, 0.5);
    let b = Complex64::new(0.5, -0.5);
    CMatrix::from_row_slice(2, 2, &[a, b, b, a])
}

/// Swap-free QFT as Hadamards and controlled phases.
fn qft_gates(qubits: &[usize]) -> Result<Vec<Gate>> {
    let m = qubits.len();
    let mut out = Vec::new();
    for j in 0..m {
        out.push(Gate::Hadamard { qubit: qubits[j] });
        for i in j + 1..m {
            out.push(Gate::ControlledPhase {
                control: qubits[i],
                target: qubits[j],
                phase: DyadicPhase::unit((i - j + 1) as u32)?,
            });
        }
    }
    Ok(out)
}

/// Rewrites a three-qubit gate into one- and two-qubit gates. Doubly controlled
/// phases use five two-qubit gates, Fredkin seven; smaller gates pass through.
pub fn decompose_to_two_qubit(gate: &Gate) -> Result<Vec<Gate>> {
    let out = match gate {
        g if g.arity() <= 2 => vec![g.clone()],
        Gate::CcPhase {
            controls: [c1, c2],
            target,
            phase,
        } => {
            let h = phase.half()?;
            let cp = |c: usize, p: DyadicPhase| Gate::ControlledPhase {
                control: c,
                target: *target,
                phase: p,
            };
            vec![
                cp(*c2, h),
                Gate::Cnot { control: *c1, target: *c2 },
                cp(*c2, h.neg()),
                Gate::Cnot { control: *c1, target: *c2 },
                cp(*c1, h),
            ]
        }
        Gate::Fredkin { control, a, b } => {
            let v = controlled(&sqrt_x());
            let vd = controlled(&sqrt_x().adjoint());
            vec![
                Gate::Cnot { control: *b, target: *a },
                Gate::Custom { qubits: vec![*a, *b], matrix: v.clone() },
                Gate::Cnot { control: *control, target: *a },
                Gate::Custom { qubits: vec![*a, *b], matrix: vd },
                Gate::Cnot { control: *control, target: *a },
                Gate::Custom { qubits: vec![*control, *b], matrix: v },
                Gate::Cnot { control: *b, target: *a },
            ]
        }
        Gate::Qft { qubits } => qft_gates(qubits)?,
        Gate::InvQft { qubits } => qft_gates(qubits)?.iter().rev().map(Gate::inverse).collect(),
        other => return Err(Error::UnsupportedGate(other.name().to_string())),
    };
    Ok(out)
}

/// Dense unitary of the whole circuit, column by column.
pub fn circuit_unitary(circ: &Circuit) -> Result<CMatrix> {
    if circ.width > MAX_DENSE_WIDTH {
        return Err(Error::TooManyQubits {
            qubits: circ.width,
            max: MAX_DENSE_WIDTH,
        });
    }
    let d = 1usize << circ.width;
    let mut u = CMatrix::zeros(d, d);
    for col in 0..d {
        let mut s = Statevector::basis(circ.width, col)?;
        run_circuit_in_place(circ, &mut s)?;
        for (r, z) in s.amplitudes().iter().enumerate() {
            u[(r, col)] = *z;
        }
    }
    Ok(u)
}

/// Dense unitary of a single gate embedded in `width` qubits.
pub fn gate_unitary(g: &Gate, width: usize) -> Result<CMatrix> {
    let mut c = Circuit::new(width)?;
    c.push(g.clone())?;
    circuit_unitary(&c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::gate;

    fn two_qubit_count(c: &Circuit) -> usize {
        c.gates.iter().filter(|g| g.arity() == 2).count()
    }

    #[test]
    fn qft_decomposition_counts() {
        let c = qft_decompose(3, None).unwrap();
        assert_eq!(c.gates, vec![Gate::Qft { qubits: vec![0, 1, 2] }]);
        for (m, expect) in [(4, 3), (6, 12), (10, 42)] {
            let c = qft_decompose(m, None).unwrap();
            assert_eq!(two_qubit_count(&c), expect, "m={m}");
            assert_eq!(c.gates.iter().filter(|g| g.arity() == 1).count(), 0);
            assert_eq!(c.gates.iter().filter(|g| matches!(g, Gate::Qft { .. })).count(), 1);
            assert_eq!(two_qubit_count(&c), m * (m - 1) / 2 - 3);
        }
        assert_eq!(qft_decompose(2, None).unwrap().gates, vec![Gate::Qft { qubits: vec![0, 1] }]);
        assert!(qft_decompose(0, None).is_err());
    }

    #[test]
    fn qft_decomposition_matches_dft() {
        for m in 1..=8 {
            let c = qft_decompose(m, None).unwrap();
            let u = circuit_unitary(&c).unwrap();
            let err = linalg::frobenius_distance(&u, &gate::qft_matrix(m));
            assert!(err < 1e-10, "m={m} err={err}");
        }
    }

    #[test]
    fn pruned_qft_is_close() {
        let c = qft_decompose(8, Some(0.1)).unwrap();
        assert!(two_qubit_count(&c) < 25);
        let u = circuit_unitary(&c).unwrap();
        let err = linalg::frobenius_distance(&u, &gate::qft_matrix(8));
        assert!(err > 1e-6 && err < 4.0, "{err}");
    }

    #[test]
    fn merge_examples() {
        let mut c = Circuit::new(1).unwrap();
        c.push(Gate::Hadamard { qubit: 0 }).unwrap();
        c.push(Gate::phase(0, 1, 3).unwrap()).unwrap();
        let m = merge_adjacent_gates(&c);
        assert_eq!(m.len(), 1);
        assert!(matches!(&m.gates[0], Gate::Custom { qubits, .. } if qubits.len() == 1));
        assert!(linalg::frobenius_distance(&circuit_unitary(&m).unwrap(), &circuit_unitary(&c).unwrap()) < 1e-12);

        let mut c = Circuit::new(3).unwrap();
        c.push(Gate::phase(1, 1, 2).unwrap()).unwrap();
        c.push(Gate::CcPhase { controls: [0, 1], target: 2, phase: DyadicPhase::unit(3).unwrap() }).unwrap();
        let m = merge_adjacent_gates(&c);
        assert_eq!(m.len(), 1);
        assert_eq!(m.gates[0].arity(), 3);
        assert!(linalg::frobenius_distance(&circuit_unitary(&m).unwrap(), &circuit_unitary(&c).unwrap()) < 1e-12);

        let mut c = Circuit::new(4).unwrap();
        c.push(Gate::Cnot { control: 0, target: 1 }).unwrap();
        c.push(Gate::Fredkin { control: 1, a: 2, b: 3 }).unwrap();
        assert_eq!(merge_adjacent_gates(&c), c);
    }

    #[test]
    fn merge_uses_previous_host_and_skips_large_blocks() {
        let mut c = Circuit::new(5).unwrap();
        c.push(Gate::Cnot { control: 4, target: 0 }).unwrap();
        c.push(Gate::Qft { qubits: vec![0, 1, 2, 3] }).unwrap();
        c.push(Gate::Hadamard { qubit: 4 }).unwrap();
        c.push(Gate::NotX { qubit: 0 }).unwrap();
        let m = merge_adjacent_gates(&c);
        // H on 4 folds back into the CNOT; X on 0 cannot enter the 4-qubit block
        // and the CNOT before it is not adjacent on that wire.
        assert_eq!(m.len(), 3);
        assert!(linalg::frobenius_distance(&circuit_unitary(&m).unwrap(), &circuit_unitary(&c).unwrap()) < 1e-12);
    }

    #[test]
    fn three_qubit_decompositions() {
        let cases = [
            (Gate::CcPhase { controls: [2, 0], target: 1, phase: DyadicPhase::new(3, 3).unwrap() }, 5),
            (Gate::CcPhase { controls: [0, 1], target: 2, phase: DyadicPhase::new(1, 1).unwrap() }, 5),
            (Gate::Fredkin { control: 1, a: 2, b: 0 }, 7),
            (Gate::Fredkin { control: 0, a: 1, b: 2 }, 7),
            (Gate::Qft { qubits: vec![2, 0, 1] }, 3),
            (Gate::InvQft { qubits: vec![0, 1, 2] }, 3),
        ];
        for (g, n2) in cases {
            let parts = decompose_to_two_qubit(&g).unwrap();
            assert_eq!(parts.iter().filter(|p| p.arity() == 2).count(), n2, "{g:?}");
            assert!(parts.iter().all(|p| p.arity() <= 2));
            let mut c = Circuit::new(3).unwrap();
            c.extend(parts).unwrap();
            let err = linalg::frobenius_distance(&circuit_unitary(&c).unwrap(), &gate_unitary(&g, 3).unwrap());
            assert!(err < 1e-10, "{g:?} {err}");
        }
        let cnot = Gate::Cnot { control: 0, target: 1 };
        assert_eq!(decompose_to_two_qubit(&cnot).unwrap(), vec![cnot]);
        let custom = Gate::custom(vec![0, 1, 2], linalg::identity(8)).unwrap();
        assert!(matches!(decompose_to_two_qubit(&custom), Err(Error::UnsupportedGate(_))));
    }

    #[test]
    fn dense_width_limit() {
        assert!(circuit_unitary(&Circuit::new(13).unwrap()).is_err());
    }
}
