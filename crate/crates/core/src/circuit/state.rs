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

//! Statevector storage and gate application.

use num_complex::Complex64;
use rand::SeedableRng;
use rand::distr::{Distribution, weighted::WeightedIndex};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gate::{DyadicPhase, Gate};
use super::{Circuit, Register};
use crate::error::{Error, Result};
use crate::linalg::{ONE, ZERO};

/// Widest register the simulator will allocate (2^24 amplitudes, 256 MiB).
pub const MAX_WIDTH: usize = 24;

/// Qubit count above which a fused diagonal block is flushed.
const MAX_DIAGONAL_SPAN: usize = 16;

/// Amplitudes per parallel work item.
const CHUNK: usize = 1 << 14;

/// Widest QFT block applied in one pass.
const MAX_LOCAL_QFT: usize = 10;

const LOW_BITS: usize = 12;
const LOW_MASK: usize = (1 << LOW_BITS) - 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    width: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// `|0…0⟩` on `width` qubits.
    pub fn zero(width: usize) -> Result<Self> {
        Self::basis(width, 0)
    }

    pub fn basis(width: usize, index: usize) -> Result<Self> {
        check_width(width)?;
        if index >> width != 0 {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} needs more than {width} qubits"
            )));
        }
        let mut amps = vec![ZERO; 1 << width];
        amps[index] = ONE;
        Ok(Statevector { width, amps })
    }

    /// Wraps raw amplitudes; the length must be a power of two and the norm 1 within 1e-9.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "{len} amplitudes is not a power of two"
            )));
        }
        let width = len.trailing_zeros() as usize;
        check_width(width)?;
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("amplitudes"));
        }
        let s = Statevector { width, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("state norm {norm} is not 1")));
        }
        Ok(s)
    }

    /// Equal superposition over `indices` (which must be distinct).
    pub fn uniform_over(width: usize, indices: &[usize]) -> Result<Self> {
        check_width(width)?;
        if indices.is_empty() {
            return Err(Error::InvalidArgument("empty superposition".into()));
        }
        let a = Complex64::from((indices.len() as f64).sqrt().recip());
        let mut amps = vec![ZERO; 1 << width];
        for &i in indices {
            if i >> width != 0 || amps[i] != ZERO {
                return Err(Error::InvalidArgument(format!("bad basis index {i}")));
            }
            amps[i] = a;
        }
        Ok(Statevector { width, amps })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Statevector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Index of the largest-magnitude amplitude and its probability.
    pub fn dominant(&self) -> (usize, f64) {
        self.amps
            .iter()
            .enumerate()
            .map(|(i, z)| (i, z.norm_sqr()))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best })
    }
}

fn check_width(width: usize) -> Result<()> {
    if width == 0 {
        return Err(Error::InvalidArgument("statevector needs at least one qubit".into()));
    }
    if width > MAX_WIDTH {
        return Err(Error::TooManyQubits {
            qubits: width,
            max: MAX_WIDTH,
        });
    }
    Ok(())
}

/// Primitive amplitude updates the gate set lowers to.
enum Op {
    /// Row-major dense matrix over `qubits`.
    Dense { qubits: Vec<usize>, m: Vec<Complex64> },
    /// Local basis state `c` moves to `perm[c]`.
    Permute { qubits: Vec<usize>, perm: Vec<usize> },
    /// Swap-free Fourier transform (or its inverse) done group by group in a local buffer.
    Fourier { qubits: Vec<usize>, inverse: bool },
    /// Phase per local pattern of `qubits`.
    Diagonal {
        qubits: Vec<usize>,
        table: Vec<Complex64>,
    },
}

/// Phase terms waiting to be folded into one diagonal pass.
#[derive(Default)]
struct PendingDiagonal {
    qubits: Vec<usize>,
    terms: Vec<(Vec<usize>, DyadicPhase)>,
}

impl PendingDiagonal {
    fn push(&mut self, qubits: Vec<usize>, phase: DyadicPhase, out: &mut Vec<Op>) {
        if phase.is_zero() {
            return;
        }
        let extra = qubits.iter().filter(|q| !self.qubits.contains(q)).count();
        if self.qubits.len() + extra > MAX_DIAGONAL_SPAN {
            self.flush(out);
        }
        for &q in &qubits {
            if !self.qubits.contains(&q) {
                self.qubits.push(q);
            }
        }
        self.terms.push((qubits, phase));
    }

    fn flush(&mut self, out: &mut Vec<Op>) {
        if self.terms.is_empty() {
            self.qubits.clear();
            return;
        }
        let qubits = std::mem::take(&mut self.qubits);
        let k = qubits.len();
        let l = self.terms.iter().map(|(_, p)| p.log2_denom()).max().unwrap_or(0);
        let masks: Vec<(usize, u128)> = self
            .terms
            .iter()
            .map(|(qs, p)| {
                let mask = qs
                    .iter()
                    .map(|q| 1usize << (k - 1 - qubits.iter().position(|x| x == q).unwrap()))
                    .fold(0, |a, b| a | b);
                (mask, (p.numer() as u128) << (l - p.log2_denom()))
            })
            .collect();
        let modulus = 1u128 << l;
        let table: Vec<Complex64> = (0..1usize << k)
            .map(|pat| {
                let total = masks
                    .iter()
                    .filter(|(m, _)| pat & m == *m)
                    .fold(0u128, |acc, (_, n)| (acc + n) % modulus);
                if total == 0 {
                    ONE
                } else {
                    DyadicPhase::new(total as u64, l).map(|p| p.value()).unwrap_or(ONE)
                }
            })
            .collect();
        self.terms.clear();
        out.push(Op::Diagonal { qubits, table });
    }
}

fn dense(qubits: Vec<usize>, m: &crate::linalg::CMatrix) -> Op {
    let d = m.nrows();
    let flat = (0..d * d).map(|i| m[(i / d, i % d)]).collect();
    Op::Dense { qubits, m: flat }
}

/// Lowers gates to primitive passes, fusing runs of diagonal gates.
fn lower(gates: &[Gate]) -> Result<Vec<Op>> {
    let mut out = Vec::new();
    let mut diag = PendingDiagonal::default();
    let h = super::gate::hadamard();
    for g in gates {
        if let Some((qs, p)) = g.diagonal_term() {
            diag.push(qs, p, &mut out);
            continue;
        }
        match g {
            Gate::Qft { qubits } | Gate::InvQft { qubits } if qubits.len() <= MAX_LOCAL_QFT => {
                diag.flush(&mut out);
                out.push(Op::Fourier {
                    qubits: qubits.clone(),
                    inverse: matches!(g, Gate::InvQft { .. }),
                });
            }
            Gate::Qft { qubits } => {
                let m = qubits.len();
                for j in 0..m {
                    diag.flush(&mut out);
                    out.push(dense(vec![qubits[j]], &h));
                    for i in j + 1..m {
                        let p = DyadicPhase::unit((i - j + 1) as u32)?;
                        diag.push(vec![qubits[i], qubits[j]], p, &mut out);
                    }
                }
            }
            Gate::InvQft { qubits } => {
                let m = qubits.len();
                for j in (0..m).rev() {
                    for i in (j + 1..m).rev() {
                        let p = DyadicPhase::unit((i - j + 1) as u32)?.neg();
                        diag.push(vec![qubits[i], qubits[j]], p, &mut out);
                    }
                    diag.flush(&mut out);
                    out.push(dense(vec![qubits[j]], &h));
                }
            }
            Gate::NotX { qubit } => {
                diag.flush(&mut out);
                out.push(Op::Permute {
                    qubits: vec![*qubit],
                    perm: vec![1, 0],
                });
            }
            Gate::Cnot { control, target } => {
                diag.flush(&mut out);
                out.push(Op::Permute {
                    qubits: vec![*control, *target],
                    perm: vec![0, 1, 3, 2],
                });
            }
            Gate::Swap { a, b } => {
                diag.flush(&mut out);
                out.push(Op::Permute {
                    qubits: vec![*a, *b],
                    perm: vec![0, 2, 1, 3],
                });
            }
            Gate::Fredkin { control, a, b } => {
                diag.flush(&mut out);
                out.push(Op::Permute {
                    qubits: vec![*control, *a, *b],
                    perm: vec![0, 1, 2, 3, 4, 6, 5, 7],
                });
            }
            other => {
                diag.flush(&mut out);
                out.push(dense(other.qubits(), &other.matrix()?));
            }
        }
    }
    diag.flush(&mut out);
    Ok(out)
}

/// Global offsets of every local pattern, and the sorted bit positions of the gate qubits.
fn layout(width: usize, qubits: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let k = qubits.len();
    let pos: Vec<usize> = qubits.iter().map(|q| width - 1 - q).collect();
    let offsets = (0..1usize << k)
        .map(|l| {
            (0..k)
                .filter(|t| (l >> (k - 1 - t)) & 1 == 1)
                .map(|t| 1usize << pos[t])
                .sum()
        })
        .collect();
    let mut sorted = pos;
    sorted.sort_unstable();
    (offsets, sorted)
}

/// Spreads the bits of `b` around zero bits at the `sorted` positions.
#[inline]
fn insert_zeros(mut b: usize, sorted: &[usize]) -> usize {
    for &p in sorted {
        b = ((b >> p) << (p + 1)) | (b & ((1 << p) - 1));
    }
    b
}

/// Runs `f` on every group of amplitudes a k-qubit op mixes. Chunks are disjoint,
/// so the result does not depend on the number of workers.
fn for_each_group<F>(amps: &mut [Complex64], width: usize, qubits: &[usize], f: F)
where
    F: Fn(&mut [Complex64], &[usize]) + Sync,
{
    let (offsets, sorted) = layout(width, qubits);
    let top = *sorted.last().unwrap();
    let chunk = (1usize << (top + 1)).max(CHUNK.min(amps.len()));
    let per_chunk = chunk >> qubits.len();
    amps.par_chunks_mut(chunk).for_each(|c| {
        let mut idx = vec![0usize; offsets.len()];
        for b in 0..per_chunk {
            let base = insert_zeros(b, &sorted);
            for (slot, off) in idx.iter_mut().zip(&offsets) {
                *slot = base + off;
            }
            f(c, &idx);
        }
    });
}

fn apply_op(amps: &mut [Complex64], width: usize, op: &Op) {
    match op {
        Op::Dense { qubits, m } if qubits.len() == 1 => {
            let stride = 1usize << (width - 1 - qubits[0]);
            let (a, b, c, d) = (m[0], m[1], m[2], m[3]);
            amps.par_chunks_mut((2 * stride).max(CHUNK.min(1 << width)))
                .for_each(|chunk| {
                    for pair in chunk.chunks_mut(2 * stride) {
                        let (lo, hi) = pair.split_at_mut(stride);
                        for (u, v) in lo.iter_mut().zip(hi) {
                            let (x, y) = (*u, *v);
                            *u = a * x + b * y;
                            *v = c * x + d * y;
                        }
                    }
                });
        }
        Op::Dense { qubits, m } => {
            let d = 1 << qubits.len();
            for_each_group(amps, width, qubits, |c, idx| {
                let mut buf = [ZERO; 8];
                for (b, &i) in buf.iter_mut().zip(idx) {
                    *b = c[i];
                }
                for r in 0..d {
                    let row = &m[r * d..(r + 1) * d];
                    c[idx[r]] = row.iter().zip(&buf[..d]).map(|(a, b)| a * b).sum();
                }
            });
        }
        Op::Permute { qubits, perm } => {
            for_each_group(amps, width, qubits, |c, idx| {
                let mut buf = [ZERO; 8];
                for (b, &i) in buf.iter_mut().zip(idx) {
                    *b = c[i];
                }
                for (src, &dst) in perm.iter().enumerate() {
                    c[idx[dst]] = buf[src];
                }
            });
        }
        Op::Fourier { qubits, inverse } => {
            let m = qubits.len();
            let d = 1usize << m;
            let sign = if *inverse { -1.0 } else { 1.0 };
            let twiddle: Vec<Complex64> = (0..=m)
                .map(|k| Complex64::from_polar(1.0, sign * 2.0 * std::f64::consts::PI / (k as f64).exp2()))
                .collect();
            for_each_group(amps, width, qubits, |c, idx| {
                let mut buf = [ZERO; 1 << MAX_LOCAL_QFT];
                let buf = &mut buf[..d];
                for (b, &i) in buf.iter_mut().zip(idx) {
                    *b = c[i];
                }
                if *inverse {
                    for j in (0..m).rev() {
                        for i in (j + 1..m).rev() {
                            local_cphase(buf, m, i, j, twiddle[i - j + 1]);
                        }
                        local_hadamard(buf, m, j);
                    }
                } else {
                    for j in 0..m {
                        local_hadamard(buf, m, j);
                        for i in j + 1..m {
                            local_cphase(buf, m, i, j, twiddle[i - j + 1]);
                        }
                    }
                }
                for (b, &i) in buf.iter().zip(idx) {
                    c[i] = *b;
                }
            });
        }
        Op::Diagonal { qubits, table } => {
            let k = qubits.len();
            // Pattern of index i = lo[i & LOW_MASK] | hi[i >> LOW_BITS].
            let pattern = |i: usize| {
                qubits.iter().enumerate().fold(0usize, |acc, (t, q)| {
                    acc | (((i >> (width - 1 - q)) & 1) << (k - 1 - t))
                })
            };
            let lo: Vec<usize> = (0..1usize << LOW_BITS).map(pattern).collect();
            let hi: Vec<usize> = (0..1usize << width.saturating_sub(LOW_BITS))
                .map(|h| pattern(h << LOW_BITS))
                .collect();
            amps.par_chunks_mut(CHUNK).enumerate().for_each(|(ci, c)| {
                let start = ci * CHUNK;
                for (j, z) in c.iter_mut().enumerate() {
                    let i = start + j;
                    let ph = table[lo[i & LOW_MASK] | hi[i >> LOW_BITS]];
                    if ph != ONE {
                        *z *= ph;
                    }
                }
            });
        }
    }
}

fn local_hadamard(buf: &mut [Complex64], m: usize, t: usize) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bit = 1usize << (m - 1 - t);
    for l in 0..buf.len() {
        if l & bit == 0 {
            let (x, y) = (buf[l], buf[l | bit]);
            buf[l] = (x + y) * h;
            buf[l | bit] = (x - y) * h;
        }
    }
}

fn local_cphase(buf: &mut [Complex64], m: usize, a: usize, b: usize, phase: Complex64) {
    let mask = (1usize << (m - 1 - a)) | (1usize << (m - 1 - b));
    for (l, z) in buf.iter_mut().enumerate() {
        if l & mask == mask {
            *z *= phase;
        }
    }
}

/// Applies one gate in place.
pub fn apply_gate(state: &mut Statevector, gate: &Gate) -> Result<()> {
    gate.validate(state.width)?;
    for op in lower(std::slice::from_ref(gate))? {
        apply_op(&mut state.amps, state.width, &op);
    }
    Ok(())
}

/// Applies the circuit left to right.
pub fn run_circuit(circuit: &Circuit, initial: &Statevector) -> Result<Statevector> {
    let mut state = initial.clone();
    run_circuit_in_place(circuit, &mut state)?;
    Ok(state)
}

pub fn run_circuit_in_place(circuit: &Circuit, state: &mut Statevector) -> Result<()> {
    if circuit.width != state.width {
        return Err(Error::DimensionMismatch {
            expected: circuit.width,
            found: state.width,
        });
    }
    circuit.validate()?;
    for op in lower(&circuit.gates)? {
        apply_op(&mut state.amps, state.width, &op);
    }
    Ok(())
}

/// Marginal probability of every register value, honoring bit reversal.
pub fn exact_register_distribution(state: &Statevector, register: &Register) -> Result<Vec<f64>> {
    register.check(state.width)?;
    let mut probs = vec![0.0; 1 << register.len];
    for (i, z) in state.amps.iter().enumerate() {
        probs[register.value_of(i, state.width) as usize] += z.norm_sqr();
    }
    Ok(probs)
}

/// Draws `shots` i.i.d. register values; deterministic for a given seed.
pub fn sample_register(
    state: &Statevector,
    register: &Register,
    shots: usize,
    seed: u64,
) -> Result<Vec<u64>> {
    let probs = exact_register_distribution(state, register)?;
    sample_distribution(&probs, shots, seed)
}

pub fn sample_distribution(probs: &[f64], shots: usize, seed: u64) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let dist = WeightedIndex::new(probs)
        .map_err(|e| Error::InvalidArgument(format!("bad distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..shots).map(|_| dist.sample(&mut rng) as u64).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub outcome: u64,
    pub count: usize,
    pub probability: f64,
}

/// Sampled counts next to the exact probabilities; outcomes with neither a
/// count nor probability above 1e-12 are omitted.
pub fn histogram(samples: &[u64], probs: &[f64]) -> Vec<HistogramRow> {
    let mut counts = vec![0usize; probs.len()];
    for &s in samples {
        if let Some(c) = counts.get_mut(s as usize) {
            *c += 1;
        }
    }
    counts
        .iter()
        .zip(probs)
        .enumerate()
        .filter(|(_, (c, p))| **c > 0 || **p > 1e-12)
        .map(|(i, (c, p))| HistogramRow {
            outcome: i as u64,
            count: *c,
            probability: *p,
        })
        .collect()
}

pub fn write_histogram_csv<W: std::io::Write>(w: W, rows: &[HistogramRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}
