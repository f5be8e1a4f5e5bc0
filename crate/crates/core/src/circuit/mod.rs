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

//! Gate-level circuits over named registers, with a statevector simulator and
//! rewriting passes.

pub mod gate;
pub mod passes;
pub mod state;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gate::{DyadicPhase, Gate};
pub use passes::{
    circuit_unitary, decompose_to_two_qubit, expand_wide_qft, merge_adjacent_gates, qft_decompose,
    qft_unmerged,
};
pub use state::{
    apply_gate, exact_register_distribution, histogram, run_circuit, run_circuit_in_place,
    sample_register, write_histogram_csv, HistogramRow, Statevector, MAX_WIDTH,
};

/// A contiguous range of qubits read as an unsigned integer, first qubit most
/// significant. `bit_reversed` marks registers left in reversed bit order by a
/// swap-free Fourier transform; values are then read back to front.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub start: usize,
    pub len: usize,
    #[serde(default)]
    pub bit_reversed: bool,
}

impl Register {
    pub fn new(name: &str, start: usize, len: usize) -> Self {
        Register {
            name: name.to_string(),
            start,
            len,
            bit_reversed: false,
        }
    }

    pub fn qubits(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }

    /// Qubit holding bit `k` (weight 2^k) of the stored value.
    pub fn bit(&self, k: usize) -> usize {
        self.start + self.len - 1 - k
    }

    pub fn check(&self, width: usize) -> Result<()> {
        if self.len == 0 || self.len > 63 {
            return Err(Error::InvalidArgument(format!(
                "register {} has length {}",
                self.name, self.len
            )));
        }
        if self.start + self.len > width {
            return Err(Error::QubitOutOfRange {
                index: self.start + self.len - 1,
                width,
            });
        }
        Ok(())
    }

    /// Value of the register in basis state `index` of a `width`-qubit state.
    pub fn value_of(&self, index: usize, width: usize) -> u64 {
        let raw = ((index >> (width - self.start - self.len)) & ((1usize << self.len) - 1)) as u64;
        if self.bit_reversed {
            gate::reverse_bits(raw as usize, self.len) as u64
        } else {
            raw
        }
    }

    /// Basis-index bits encoding `value`, the inverse of [`Register::value_of`].
    pub fn place(&self, value: u64, width: usize) -> usize {
        let v = value as usize & ((1usize << self.len) - 1);
        let raw = if self.bit_reversed {
            gate::reverse_bits(v, self.len)
        } else {
            v
        };
        raw << (width - self.start - self.len)
    }
}

/// A labeled span `gates[start..end]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub name: String,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub width: usize,
    #[serde(default)]
    pub registers: Vec<Register>,
    pub gates: Vec<Gate>,
    /// Labeled gate spans; rewriting passes drop them.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<Block>,
}

impl Circuit {
    pub fn new(width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::InvalidArgument("circuit needs at least one qubit".into()));
        }
        Ok(Circuit {
            width,
            registers: Vec::new(),
            gates: Vec::new(),
            blocks: Vec::new(),
        })
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Appends the gates of `other`, which must have the same width.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.width != self.width {
            return Err(Error::DimensionMismatch {
                expected: self.width,
                found: other.width,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    /// Labels the gates pushed since index `start`.
    pub fn mark(&mut self, name: &str, start: usize) {
        self.blocks.push(Block {
            name: name.to_string(),
            start,
            end: self.gates.len(),
        });
    }

    pub fn blocks_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Block> + 'a {
        self.blocks.iter().filter(move |b| b.name == name)
    }

    pub fn add_register(&mut self, reg: Register) -> Result<()> {
        reg.check(self.width)?;
        if self.registers.iter().any(|r| r.name == reg.name) {
            return Err(Error::InvalidArgument(format!("duplicate register {}", reg.name)));
        }
        self.registers.push(reg);
        Ok(())
    }

    pub fn register(&self, name: &str) -> Result<&Register> {
        self.registers
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| Error::InvalidArgument(format!("no register named {name:?}")))
    }

    pub fn register_mut(&mut self, name: &str) -> Result<&mut Register> {
        self.registers
            .iter_mut()
            .find(|r| r.name == name)
            .ok_or_else(|| Error::InvalidArgument(format!("no register named {name:?}")))
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 {
            return Err(Error::InvalidArgument("circuit needs at least one qubit".into()));
        }
        for r in &self.registers {
            r.check(self.width)?;
        }
        for b in &self.blocks {
            if b.start > b.end || b.end > self.gates.len() {
                return Err(Error::InvalidArgument(format!("block {} out of range", b.name)));
            }
        }
        self.gates.iter().try_for_each(|g| g.validate(self.width))
    }

    /// Adjoint circuit: gates inverted in reverse order, same layout.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            width: self.width,
            registers: self.registers.clone(),
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            blocks: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Circuit = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }
}
