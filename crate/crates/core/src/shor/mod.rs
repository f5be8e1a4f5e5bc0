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

//! Shor's factoring circuit: Fourier-basis constant adders, doubly controlled
//! modular adders, controlled modular multipliers and the modular
//! exponentiation they compose into.
//!
//! Layout for an `n`-bit modulus: `x` (2n qubits) at the top, then `y` (n),
//! the scratch register `z` (n+1) and one ancilla, 4n+2 qubits in total.

pub mod classical;
pub mod run;

use serde::{Deserialize, Serialize};

use crate::circuit::{self, Circuit, DyadicPhase, Gate, Register, Statevector};
use crate::error::{Error, Result};

pub use classical::{
    continued_fraction_period, convergent_period_strict, gcd, mod_inverse, mod_pow, postprocess,
    Postprocess, RetryReason,
};
pub use run::{run_shor, AttemptReport, FactorReport, MAX_ATTEMPTS};

/// Bits needed to hold `n`, i.e. `⌈log₂(n+1)⌉`.
pub fn bit_width(n: u64) -> usize {
    (64 - n.leading_zeros()) as usize
}

/// Qubit assignment of the 4n+2-qubit register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub n: usize,
    pub x: Register,
    pub y: Register,
    pub z: Register,
    pub anc: usize,
}

impl Layout {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 30 {
            return Err(Error::InvalidArgument(format!("bit width {n} outside 1..=30")));
        }
        Ok(Layout {
            n,
            x: Register::new("x", 0, 2 * n),
            y: Register::new("y", 2 * n, n),
            z: Register::new("z", 3 * n, n + 1),
            anc: 4 * n + 1,
        })
    }

    pub fn width(&self) -> usize {
        4 * self.n + 2
    }

    pub fn z_qubits(&self) -> Vec<usize> {
        self.z.qubits().collect()
    }

    /// Empty circuit with all four registers declared.
    pub fn circuit(&self) -> Result<Circuit> {
        let mut c = Circuit::new(self.width())?;
        c.add_register(self.x.clone())?;
        c.add_register(self.y.clone())?;
        c.add_register(self.z.clone())?;
        c.add_register(Register::new("anc", self.anc, 1))?;
        Ok(c)
    }

    /// Basis index with the given register values (ancilla 0).
    pub fn basis_index(&self, x: u64, y: u64, z: u64) -> usize {
        let w = self.width();
        self.x.place(x, w) | self.y.place(y, w) | self.z.place(z, w)
    }
}

/// A modulus, a base coprime to it, and the derived bit width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShorInstance {
    pub modulus: u64,
    pub base: u64,
    pub n: usize,
}

impl ShorInstance {
    pub fn new(modulus: u64, base: u64) -> Result<Self> {
        if modulus < 3 {
            return Err(Error::InvalidArgument(format!("modulus {modulus} must be at least 3")));
        }
        if base <= 1 || base >= modulus {
            return Err(Error::InvalidArgument(format!(
                "base {base} must satisfy 1 < a < {modulus}"
            )));
        }
        if gcd(base, modulus) != 1 {
            return Err(Error::InvalidArgument(format!(
                "base {base} shares a factor with {modulus}"
            )));
        }
        Ok(ShorInstance {
            modulus,
            base,
            n: bit_width(modulus),
        })
    }

    pub fn width(&self) -> usize {
        4 * self.n + 2
    }

    pub fn layout(&self) -> Layout {
        Layout::new(self.n).expect("bit width of a u64 modulus")
    }

    /// `|0⟩_x |1⟩_y |0⟩_z |0⟩_anc`.
    pub fn initial_state(&self) -> Result<Statevector> {
        Statevector::basis(self.width(), self.layout().basis_index(0, 1, 0))
    }
}

fn check_modulus(modulus: u64, n: usize) -> Result<()> {
    if modulus < 2 || bit_width(modulus) > n {
        return Err(Error::InvalidArgument(format!(
            "modulus {modulus} does not fit in {n} bits"
        )));
    }
    Ok(())
}

/// Fourier-basis addition of the constant `b` to register `z` (most significant
/// qubit first), conditioned on every qubit in `controls` (at most two).
///
/// After the swap-free QFT, qubit `j` of an m-qubit register (1-based) carries
/// `e^{2πi·z/2^{m−j+1}}`, so adding `b` multiplies it by `e^{2πi·b/2^{m−j+1}}`.
/// Zero phases are omitted.
pub fn phi_add_gates(b: u64, z: &[usize], controls: &[usize]) -> Result<Vec<Gate>> {
    let m = z.len();
    if m == 0 || m > 63 || b >> m != 0 {
        return Err(Error::InvalidArgument(format!(
            "constant {b} does not fit a {m}-qubit register"
        )));
    }
    let mut out = Vec::new();
    for (j, &q) in z.iter().enumerate() {
        let k = (m - j) as u32;
        let phase = DyadicPhase::new(b & ((1u64 << k) - 1), k)?;
        if phase.is_zero() {
            continue;
        }
        out.push(match *controls {
            [] => Gate::PhaseShift { qubit: q, phase },
            [c] => Gate::ControlledPhase {
                control: c,
                target: q,
                phase,
            },
            [c1, c2] => Gate::CcPhase {
                controls: [c1, c2],
                target: q,
                phase,
            },
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "{} controls on a phase adder",
                    controls.len()
                )))
            }
        });
    }
    Ok(out)
}

/// Standalone adder: `controls` control qubits followed by a `width`-qubit
/// register `z`, which is expected in the Fourier basis.
pub fn build_phi_add(b: u64, width: usize, controls: usize) -> Result<Circuit> {
    let mut c = Circuit::new(controls + width)?;
    if controls > 0 {
        c.add_register(Register::new("ctrl", 0, controls))?;
    }
    c.add_register(Register::new("z", controls, width))?;
    let z: Vec<usize> = (controls..controls + width).collect();
    let ctrl: Vec<usize> = (0..controls).collect();
    c.extend(phi_add_gates(b, &z, &ctrl)?)?;
    Ok(c)
}

/// Doubly controlled modular adder acting on `z` in the Fourier basis:
/// `z → z + b mod N` when both controls are set, for `z < N`. The ancilla
/// flags the wrap-around and is returned to zero.
pub fn cc_madd_fourier_gates(
    b: u64,
    modulus: u64,
    c1: usize,
    c2: usize,
    z: &[usize],
    anc: usize,
) -> Result<Vec<Gate>> {
    check_modulus(modulus, z.len() - 1)?;
    if b >= modulus {
        return Err(Error::InvalidArgument(format!("addend {b} not below {modulus}")));
    }
    let inv = |gs: Vec<Gate>| gs.iter().rev().map(Gate::inverse).collect::<Vec<_>>();
    let top = z[0];
    let qft = Gate::Qft { qubits: z.to_vec() };
    let iqft = Gate::InvQft { qubits: z.to_vec() };

    let mut g = Vec::new();
    g.extend(phi_add_gates(b, z, &[c1, c2])?);
    g.extend(inv(phi_add_gates(modulus, z, &[])?));
    g.push(iqft.clone());
    g.push(Gate::Cnot { control: top, target: anc });
    g.push(qft.clone());
    g.extend(phi_add_gates(modulus, z, &[anc])?);
    g.extend(inv(phi_add_gates(b, z, &[c1, c2])?));
    g.push(iqft);
    g.push(Gate::NotX { qubit: top });
    g.push(Gate::Cnot { control: top, target: anc });
    g.push(Gate::NotX { qubit: top });
    g.push(qft);
    g.extend(phi_add_gates(b, z, &[c1, c2])?);
    Ok(g)
}

/// Modular adder on the full layout with computational-basis input and output;
/// controlled by bit `x_bit` of `x` and bit `y_bit` of `y`.
pub fn build_cc_madd(b: u64, modulus: u64, x_bit: usize, y_bit: usize) -> Result<Circuit> {
    let lay = Layout::new(bit_width(modulus))?;
    if x_bit >= 2 * lay.n || y_bit >= lay.n {
        return Err(Error::InvalidArgument("control bit outside its register".into()));
    }
    let z = lay.z_qubits();
    let mut c = lay.circuit()?;
    c.push(Gate::Qft { qubits: z.clone() })?;
    c.extend(cc_madd_fourier_gates(
        b,
        modulus,
        lay.x.bit(x_bit),
        lay.y.bit(y_bit),
        &z,
        lay.anc,
    )?)?;
    c.push(Gate::InvQft { qubits: z })?;
    Ok(c)
}

/// Controlled modular multiplier: `|y⟩|0⟩_z → |b·y mod N⟩|0⟩_z` when `control`
/// is set. Multiplies into `z`, swaps `y ↔ z` with Fredkin gates, then clears
/// `z` by subtracting `b⁻¹·(b·y)`.
pub fn cmmul_gates(b: u64, modulus: u64, lay: &Layout, control: usize) -> Result<Vec<Gate>> {
    check_modulus(modulus, lay.n)?;
    let b = b % modulus;
    let b_inv = mod_inverse(b, modulus)?;
    let z = lay.z_qubits();
    let n = lay.n;
    let mut g = Vec::new();
    g.push(Gate::Qft { qubits: z.clone() });
    for j in 0..n {
        let addend = classical::mod_mul(b, 1 << j, modulus);
        g.extend(cc_madd_fourier_gates(addend, modulus, control, lay.y.bit(j), &z, lay.anc)?);
    }
    g.push(Gate::InvQft { qubits: z.clone() });
    for j in 0..n {
        g.push(Gate::Fredkin {
            control,
            a: lay.y.bit(j),
            b: lay.z.bit(j),
        });
    }
    g.push(Gate::Qft { qubits: z.clone() });
    for j in (0..n).rev() {
        let addend = classical::mod_mul(b_inv, 1 << j, modulus);
        let madd = cc_madd_fourier_gates(addend, modulus, control, lay.y.bit(j), &z, lay.anc)?;
        g.extend(madd.iter().rev().map(Gate::inverse));
    }
    g.push(Gate::InvQft { qubits: z });
    Ok(g)
}

/// Multiplier by `b` controlled on bit `x_bit` of `x`, on the full layout.
pub fn build_cmmul(b: u64, modulus: u64, x_bit: usize) -> Result<Circuit> {
    let lay = Layout::new(bit_width(modulus))?;
    if x_bit >= 2 * lay.n {
        return Err(Error::InvalidArgument("control bit outside x".into()));
    }
    let mut c = lay.circuit()?;
    c.extend(cmmul_gates(b, modulus, &lay, lay.x.bit(x_bit))?)?;
    c.mark("cmmul", 0);
    Ok(c)
}

/// `|x⟩|y⟩|0⟩|0⟩ → |x⟩|y·a^x mod N⟩|0⟩|0⟩` as 2n multipliers by `a^{2^i}`,
/// one per bit of `x`.
pub fn build_modexp(a: u64, modulus: u64) -> Result<Circuit> {
    let inst = ShorInstance::new(modulus, a)?;
    let lay = inst.layout();
    let mut c = lay.circuit()?;
    append_modexp(&mut c, &inst)?;
    Ok(c)
}

fn append_modexp(c: &mut Circuit, inst: &ShorInstance) -> Result<()> {
    let lay = inst.layout();
    let mut factor = inst.base % inst.modulus;
    for i in 0..2 * lay.n {
        let start = c.len();
        c.extend(cmmul_gates(factor, inst.modulus, &lay, lay.x.bit(i))?)?;
        c.mark("cmmul", start);
        factor = classical::mod_mul(factor, factor, inst.modulus);
    }
    Ok(())
}

/// Hadamards on `x`, modular exponentiation, then the decomposed swap-free QFT
/// on `x`, whose register is flagged bit-reversed. The `y = 1` input is part
/// of the initial state, see [`ShorInstance::initial_state`].
pub fn build_shor_circuit(inst: &ShorInstance) -> Result<Circuit> {
    if inst.width() > circuit::MAX_WIDTH {
        return Err(Error::TooManyQubits {
            qubits: inst.width(),
            max: circuit::MAX_WIDTH,
        });
    }
    build_shor_circuit_unchecked(inst)
}

/// [`build_shor_circuit`] without the simulator width cap, for counting.
pub fn build_shor_circuit_unchecked(inst: &ShorInstance) -> Result<Circuit> {
    let lay = inst.layout();
    let mut c = lay.circuit()?;
    c.extend(lay.x.qubits().map(|q| Gate::Hadamard { qubit: q }))?;
    c.mark("hadamard", 0);
    append_modexp(&mut c, inst)?;
    let start = c.len();
    let qft = circuit::qft_decompose(2 * lay.n, None)?;
    let offset = lay.x.start;
    c.extend(qft.gates.iter().map(|g| g.map_qubits(|q| q + offset)))?;
    c.mark("qft", start);
    c.register_mut("x")?.bit_reversed = true;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{run_circuit, Statevector};

    fn run_basis(c: &Circuit, index: usize) -> (usize, f64) {
        let s = run_circuit(c, &Statevector::basis(c.width, index).unwrap()).unwrap();
        s.dominant()
    }

    #[test]
    fn layout_widths() {
        assert_eq!(ShorInstance::new(15, 7).unwrap().width(), 18);
        let i = ShorInstance::new(21, 11).unwrap();
        assert_eq!(i.width(), 22);
        assert_eq!((i.layout().x.len, i.layout().y.len), (10, 5));
        assert!(ShorInstance::new(15, 5).is_err());
        assert!(ShorInstance::new(15, 15).is_err());
        assert!(ShorInstance::new(15, 1).is_err());
    }

    #[test]
    fn phi_add_examples() {
        assert!(phi_add_gates(0, &[0, 1, 2], &[]).unwrap().is_empty());
        assert!(phi_add_gates(8, &[0, 1, 2], &[]).is_err());
        let mut c = Circuit::new(3).unwrap();
        c.push(Gate::Qft { qubits: vec![0, 1, 2] }).unwrap();
        c.append(&build_phi_add(3, 3, 0).unwrap()).unwrap();
        c.push(Gate::InvQft { qubits: vec![0, 1, 2] }).unwrap();
        let (idx, p) = run_basis(&c, 0);
        assert_eq!(idx, 3);
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cc_madd_example() {
        let c = build_cc_madd(3, 5, 0, 0).unwrap();
        let lay = Layout::new(3).unwrap();
        let w = lay.width();
        let on = lay.basis_index(1, 1, 4);
        let (idx, p) = run_basis(&c, on);
        assert!((p - 1.0).abs() < 1e-10);
        assert_eq!((lay.z.value_of(idx, w), lay.x.value_of(idx, w)), (2, 1));
        let off = lay.basis_index(0, 1, 4);
        assert_eq!(run_basis(&c, off).0, off);
    }

    #[test]
    fn cmmul_example() {
        let c = build_cmmul(4, 5, 0).unwrap();
        let lay = Layout::new(3).unwrap();
        let on = lay.basis_index(1, 2, 0);
        let (idx, p) = run_basis(&c, on);
        assert!((p - 1.0).abs() < 1e-10);
        assert_eq!(idx, lay.basis_index(1, 3, 0));
        assert!(build_cmmul(5, 15, 0).is_err());
    }

    #[test]
    fn modexp_counts_blocks() {
        let inst = ShorInstance::new(15, 7).unwrap();
        let c = build_shor_circuit(&inst).unwrap();
        assert_eq!(c.width, 18);
        assert_eq!(c.blocks_named("cmmul").count(), 8);
        assert!(c.register("x").unwrap().bit_reversed);
        assert!(build_shor_circuit(&ShorInstance::new(33, 2).unwrap()).is_err());
    }
}
