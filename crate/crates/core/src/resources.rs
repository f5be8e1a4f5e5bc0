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

//! Gate and edge tallies for compiled circuits, and the feasibility arithmetic
//! that turns them into timing requirements.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::str::FromStr;

use crate::circuit::{self, Circuit};
use crate::error::{Error, Result};
use crate::shor::{self, ShorInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    /// Wide QFTs expanded, one-qubit gates merged; three-qubit gates kept.
    #[serde(rename = "mixed_3q")]
    Mixed3q,
    /// As above, with every three-qubit gate split into two-qubit gates first.
    TwoQubitOnly,
}

impl FromStr for CountMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mixed_3q" | "mixed" => Ok(CountMode::Mixed3q),
            "two_qubit_only" | "2q" => Ok(CountMode::TwoQubitOnly),
            _ => Err(Error::InvalidArgument(format!("unknown count mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub one_qubit: u64,
    pub two_qubit: u64,
    pub three_qubit: u64,
    pub mode: CountMode,
}

impl GateCounts {
    pub fn new(one_qubit: u64, two_qubit: u64, three_qubit: u64, mode: CountMode) -> Self {
        GateCounts {
            one_qubit,
            two_qubit,
            three_qubit,
            mode,
        }
    }

    /// Tallies gates by arity without any rewriting.
    pub fn tally(circ: &Circuit, mode: CountMode) -> Result<Self> {
        let mut c = GateCounts::new(0, 0, 0, mode);
        for g in &circ.gates {
            match g.arity() {
                1 => c.one_qubit += 1,
                2 => c.two_qubit += 1,
                3 => c.three_qubit += 1,
                k => {
                    return Err(Error::UnsupportedGate(format!(
                        "{}-qubit {} left after rewriting",
                        k,
                        g.name()
                    )))
                }
            }
        }
        Ok(c)
    }
}

/// The circuit after the rewriting passes of `mode`, before one-qubit merging.
pub fn lowered(circ: &Circuit, mode: CountMode) -> Result<Circuit> {
    let expanded = circuit::expand_wide_qft(circ)?;
    match mode {
        CountMode::Mixed3q => Ok(expanded),
        CountMode::TwoQubitOnly => {
            let mut out = Circuit {
                gates: Vec::with_capacity(expanded.gates.len() * 3),
                ..expanded.clone()
            };
            for g in &expanded.gates {
                out.gates.extend(circuit::decompose_to_two_qubit(g)?);
            }
            Ok(out)
        }
    }
}

/// Gate tallies after the passes of `mode` and one-qubit merging.
///
/// Fails only for `TwoQubitOnly` on circuits holding dense three-qubit gates,
/// which have no fixed two-qubit decomposition here.
pub fn count_gates(circ: &Circuit, mode: CountMode) -> Result<GateCounts> {
    let merged = circuit::merge_adjacent_gates(&lowered(circ, mode)?);
    GateCounts::tally(&merged, mode)
}

/// Path edges charged per gate arity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeWeights {
    pub one_qubit: u64,
    pub two_qubit: u64,
    pub three_qubit: u64,
}

impl Default for EdgeWeights {
    fn default() -> Self {
        EdgeWeights {
            one_qubit: 0,
            two_qubit: 5,
            three_qubit: 12,
        }
    }
}

impl EdgeWeights {
    /// Charges one-qubit gates as three triangular pulses of two edges each.
    pub fn standalone_one_qubit() -> Self {
        EdgeWeights {
            one_qubit: 6,
            ..Self::default()
        }
    }
}

pub fn count_edges(counts: &GateCounts, w: &EdgeWeights) -> u64 {
    counts.one_qubit * w.one_qubit + counts.two_qubit * w.two_qubit + counts.three_qubit * w.three_qubit
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub edges: u64,
    /// Seconds.
    pub coherence_time: f64,
    /// Longest admissible edge duration, seconds.
    pub edge_duration_bound: f64,
    /// Energy scale needed with controls of order one, s⁻¹.
    pub required_angular_frequency: f64,
}

pub fn feasibility(edges: u64, coherence_time: f64) -> Result<FeasibilityReport> {
    if edges == 0 {
        return Err(Error::InvalidArgument("edge count must be positive".into()));
    }
    if !(coherence_time > 0.0) || !coherence_time.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "coherence time {coherence_time} must be positive"
        )));
    }
    let bound = coherence_time / edges as f64;
    Ok(FeasibilityReport {
        edges,
        coherence_time,
        edge_duration_bound: bound,
        required_angular_frequency: 1.0 / bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub bits: u64,
    pub qubits: u64,
    /// `bits³·log₂ bits`, relative to `bits = 5`.
    pub relative_time: f64,
}

pub fn scaling_estimate(bits: u64) -> Result<ScalingReport> {
    if bits < 2 {
        return Err(Error::InvalidArgument(format!("bit count {bits} must be at least 2")));
    }
    let cost = |b: f64| b.powi(3) * b.log2();
    Ok(ScalingReport {
        bits,
        qubits: 4 * bits + 2,
        relative_time: cost(bits as f64) / cost(5.0),
    })
}

/// Two-qubit count of a decomposed QFT against an externally quoted value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QftCount {
    pub m: usize,
    pub two_qubit: u64,
    pub three_qubit: u64,
    pub reference: Option<u64>,
    pub flagged: bool,
}

/// Counts for the QFT widths the Shor circuit uses, `n+1` and `2n`. Quoted
/// counts exist for m = 6 (18) and m = 10 (42); m(m−1)/2 − 3 gives 12 and 42.
pub fn qft_counts(widths: &[usize]) -> Result<Vec<QftCount>> {
    widths
        .iter()
        .map(|&m| {
            let c = GateCounts::tally(&circuit::qft_decompose(m, None)?, CountMode::Mixed3q)?;
            let reference = match m {
                6 => Some(18),
                10 => Some(42),
                _ => None,
            };
            Ok(QftCount {
                m,
                two_qubit: c.two_qubit,
                three_qubit: c.three_qubit,
                reference,
                flagged: reference.is_some_and(|r| r != c.two_qubit),
            })
        })
        .collect()
}

/// Everything `estimate` prints for one modulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub modulus: u64,
    pub base: u64,
    pub qubits: usize,
    /// Tallies after expansion but before one-qubit merging.
    pub unmerged: Vec<GateCounts>,
    pub merged: Vec<GateCounts>,
    pub edge_weights: EdgeWeights,
    pub edges_mixed_3q: u64,
    pub edges_two_qubit_only: u64,
    pub coherence_time: f64,
    pub scaling: Vec<ScalingReport>,
    pub qft: Vec<QftCount>,
}

impl ResourceReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn merged_counts(&self, mode: CountMode) -> &GateCounts {
        self.merged.iter().find(|c| c.mode == mode).expect("both modes present")
    }

    pub fn edges(&self, mode: CountMode) -> u64 {
        match mode {
            CountMode::Mixed3q => self.edges_mixed_3q,
            CountMode::TwoQubitOnly => self.edges_two_qubit_only,
        }
    }

    pub fn feasibility(&self, mode: CountMode) -> Result<FeasibilityReport> {
        feasibility(self.edges(mode), self.coherence_time)
    }

    /// Plain-text summary; `mode` restricts counts and timing to one mode.
    pub fn render_table(&self, mode: Option<CountMode>) -> String {
        let shown = |m: CountMode| mode.is_none_or(|x| x == m);
        let mut s = String::new();
        let _ = writeln!(s, "N = {}, a = {}, {} qubits", self.modulus, self.base, self.qubits);
        let _ = writeln!(s, "{:<16} {:>8} {:>10} {:>10} {:>10}", "mode", "stage", "1-qubit", "2-qubit", "3-qubit");
        for (stage, list) in [("unmerged", &self.unmerged), ("merged", &self.merged)] {
            for c in list.iter().filter(|c| shown(c.mode)) {
                let mode = match c.mode {
                    CountMode::Mixed3q => "mixed_3q",
                    CountMode::TwoQubitOnly => "two_qubit_only",
                };
                let _ = writeln!(
                    s,
                    "{:<16} {:>8} {:>10} {:>10} {:>10}",
                    mode, stage, c.one_qubit, c.two_qubit, c.three_qubit
                );
            }
        }
        let w = &self.edge_weights;
        for m in [CountMode::Mixed3q, CountMode::TwoQubitOnly].into_iter().filter(|m| shown(*m)) {
            let name = match m {
                CountMode::Mixed3q => "mixed_3q",
                CountMode::TwoQubitOnly => "two_qubit_only",
            };
            let _ = writeln!(
                s,
                "{name}: {} edges ({}/{}/{} per 1/2/3-qubit gate)",
                self.edges(m),
                w.one_qubit,
                w.two_qubit,
                w.three_qubit
            );
            if let Ok(f) = self.feasibility(m) {
                let _ = writeln!(
                    s,
                    "  coherence {:.3e} s: edge duration <= {:.3e} s, angular frequency >= {:.3e} 1/s",
                    f.coherence_time, f.edge_duration_bound, f.required_angular_frequency
                );
            }
        }
        for q in &self.qft {
            let note = match (q.reference, q.flagged) {
                (Some(r), true) => format!("  [differs from quoted {r}]"),
                (Some(_), false) => "  [matches quoted value]".to_string(),
                _ => String::new(),
            };
            let _ = writeln!(
                s,
                "QFT m={}: {} two-qubit + {} three-qubit{}",
                q.m, q.two_qubit, q.three_qubit, note
            );
        }
        for sc in &self.scaling {
            let _ = writeln!(
                s,
                "{}-bit modulus: {} qubits, relative time {:.4e}",
                sc.bits, sc.qubits, sc.relative_time
            );
        }
        s
    }
}

/// Compiles the circuit for `(modulus, base)` and reports counts, edges and
/// timing for the given coherence time. Widths beyond the simulator cap are
/// fine here since nothing is simulated.
pub fn estimate(
    modulus: u64,
    base: u64,
    coherence_time: f64,
    weights: EdgeWeights,
    scaling_bits: &[u64],
) -> Result<ResourceReport> {
    let inst = ShorInstance::new(modulus, base)?;
    let circ = shor::build_shor_circuit_unchecked(&inst)?;
    let modes = [CountMode::Mixed3q, CountMode::TwoQubitOnly];
    let mut unmerged = Vec::new();
    let mut merged = Vec::new();
    for mode in modes {
        let low = lowered(&circ, mode)?;
        unmerged.push(GateCounts::tally(&low, mode)?);
        merged.push(GateCounts::tally(&circuit::merge_adjacent_gates(&low), mode)?);
    }
    let edges_mixed_3q = count_edges(&merged[0], &weights);
    let edges_two_qubit_only = count_edges(&merged[1], &weights);
    if !(coherence_time > 0.0) || !coherence_time.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "coherence time {coherence_time} must be positive"
        )));
    }
    Ok(ResourceReport {
        modulus,
        base,
        qubits: inst.width(),
        unmerged,
        merged,
        edge_weights: weights,
        edges_mixed_3q,
        edges_two_qubit_only,
        coherence_time,
        scaling: scaling_bits
            .iter()
            .map(|&b| scaling_estimate(b))
            .collect::<Result<_>>()?,
        qft: qft_counts(&[inst.n + 1, 2 * inst.n])?,
    })
}
