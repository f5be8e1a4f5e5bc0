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

//! Gate set and exact dyadic phases.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE, ZERO};

/// Largest power-of-two denominator a phase may carry.
pub const MAX_LOG2_DENOM: u32 = 63;

/// The phase `e^{2πi·numer/2^log2_denom}`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPhase", into = "RawPhase")]
pub struct DyadicPhase {
    numer: u64,
    log2_denom: u32,
}

#[derive(Serialize, Deserialize)]
struct RawPhase {
    numer: u64,
    log2_denom: u32,
}

impl TryFrom<RawPhase> for DyadicPhase {
    type Error = Error;
    fn try_from(r: RawPhase) -> Result<Self> {
        DyadicPhase::new(r.numer, r.log2_denom)
    }
}

impl From<DyadicPhase> for RawPhase {
    fn from(p: DyadicPhase) -> Self {
        RawPhase {
            numer: p.numer,
            log2_denom: p.log2_denom,
        }
    }
}

impl DyadicPhase {
    pub const ZERO: DyadicPhase = DyadicPhase {
        numer: 0,
        log2_denom: 0,
    };

    /// Reduces `numer` modulo `2^log2_denom` and cancels common factors of two.
    pub fn new(numer: u64, log2_denom: u32) -> Result<Self> {
        if log2_denom > MAX_LOG2_DENOM {
            return Err(Error::InvalidArgument(format!(
                "phase denominator 2^{log2_denom} exceeds 2^{MAX_LOG2_DENOM}"
            )));
        }
        let mut numer = numer & ((1u64 << log2_denom) - 1);
        let mut log2_denom = log2_denom;
        if numer == 0 {
            return Ok(Self::ZERO);
        }
        while numer & 1 == 0 {
            numer >>= 1;
            log2_denom -= 1;
        }
        Ok(DyadicPhase { numer, log2_denom })
    }

    /// `e^{2πi/2^k}`.
    pub fn unit(k: u32) -> Result<Self> {
        Self::new(1, k)
    }

    pub fn numer(&self) -> u64 {
        self.numer
    }

    pub fn log2_denom(&self) -> u32 {
        self.log2_denom
    }

    pub fn is_zero(&self) -> bool {
        self.numer == 0
    }

    /// Fraction of a full turn in `[0, 1)`.
    pub fn turns(&self) -> f64 {
        self.numer as f64 / (self.log2_denom as f64).exp2()
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * self.turns())
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return *self;
        }
        DyadicPhase {
            numer: (1u64 << self.log2_denom) - self.numer,
            log2_denom: self.log2_denom,
        }
    }

    /// One of the two square roots, the one with turns in `[0, ½)`.
    pub fn half(&self) -> Result<Self> {
        Self::new(self.numer, self.log2_denom + 1)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let l = self.log2_denom.max(other.log2_denom);
        let a = (self.numer as u128) << (l - self.log2_denom);
        let b = (other.numer as u128) << (l - other.log2_denom);
        Self::new(((a + b) & ((1u128 << l) - 1)) as u64, l)
    }
}

/// A gate acting on qubit indices of a circuit (qubit 0 is the most significant bit).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gate {
    Hadamard {
        qubit: usize,
    },
    NotX {
        qubit: usize,
    },
    /// Multiplies `|1⟩` by the phase.
    PhaseShift {
        qubit: usize,
        phase: DyadicPhase,
    },
    ControlledPhase {
        control: usize,
        target: usize,
        phase: DyadicPhase,
    },
    CcPhase {
        controls: [usize; 2],
        target: usize,
        phase: DyadicPhase,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    Swap {
        a: usize,
        b: usize,
    },
    Fredkin {
        control: usize,
        a: usize,
        b: usize,
    },
    /// Swap-free Fourier transform; see [`qft_matrix`].
    Qft {
        qubits: Vec<usize>,
    },
    InvQft {
        qubits: Vec<usize>,
    },
    Custom {
        qubits: Vec<usize>,
        #[serde(with = "linalg::serde_matrix")]
        matrix: CMatrix,
    },
}

impl Gate {
    pub fn phase(qubit: usize, numer: u64, log2_denom: u32) -> Result<Gate> {
        Ok(Gate::PhaseShift {
            qubit,
            phase: DyadicPhase::new(numer, log2_denom)?,
        })
    }

    pub fn custom(qubits: Vec<usize>, matrix: CMatrix) -> Result<Gate> {
        let g = Gate::Custom { qubits, matrix };
        g.check_shape()?;
        Ok(g)
    }

    /// Qubits in the order used by [`Gate::matrix`]; controls come first.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Hadamard { qubit } | Gate::NotX { qubit } | Gate::PhaseShift { qubit, .. } => {
                vec![*qubit]
            }
            Gate::ControlledPhase { control, target, .. } | Gate::Cnot { control, target } => {
                vec![*control, *target]
            }
            Gate::CcPhase {
                controls, target, ..
            } => vec![controls[0], controls[1], *target],
            Gate::Swap { a, b } => vec![*a, *b],
            Gate::Fredkin { control, a, b } => vec![*control, *a, *b],
            Gate::Qft { qubits } | Gate::InvQft { qubits } | Gate::Custom { qubits, .. } => {
                qubits.clone()
            }
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Gate::Qft { qubits } | Gate::InvQft { qubits } | Gate::Custom { qubits, .. } => {
                qubits.len()
            }
            Gate::CcPhase { .. } | Gate::Fredkin { .. } => 3,
            Gate::ControlledPhase { .. } | Gate::Cnot { .. } | Gate::Swap { .. } => 2,
            _ => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::Hadamard { .. } => "hadamard",
            Gate::NotX { .. } => "not_x",
            Gate::PhaseShift { .. } => "phase_shift",
            Gate::ControlledPhase { .. } => "controlled_phase",
            Gate::CcPhase { .. } => "cc_phase",
            Gate::Cnot { .. } => "cnot",
            Gate::Swap { .. } => "swap",
            Gate::Fredkin { .. } => "fredkin",
            Gate::Qft { .. } => "qft",
            Gate::InvQft { .. } => "inv_qft",
            Gate::Custom { .. } => "custom",
        }
    }

    /// True for gates that are diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        matches!(
            self,
            Gate::PhaseShift { .. } | Gate::ControlledPhase { .. } | Gate::CcPhase { .. }
        )
    }

    /// For diagonal gates: the qubits that must all be 1 and the phase applied then.
    pub fn diagonal_term(&self) -> Option<(Vec<usize>, DyadicPhase)> {
        match self {
            Gate::PhaseShift { qubit, phase } => Some((vec![*qubit], *phase)),
            Gate::ControlledPhase {
                control,
                target,
                phase,
            } => Some((vec![*control, *target], *phase)),
            Gate::CcPhase {
                controls,
                target,
                phase,
            } => Some((vec![controls[0], controls[1], *target], *phase)),
            _ => None,
        }
    }

    fn check_shape(&self) -> Result<()> {
        if let Gate::Custom { qubits, matrix } = self {
            if qubits.is_empty() || qubits.len() > 3 {
                return Err(Error::InvalidArgument(format!(
                    "custom gate arity {} outside 1..=3",
                    qubits.len()
                )));
            }
            let d = 1usize << qubits.len();
            if matrix.nrows() != d || matrix.ncols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: matrix.nrows(),
                });
            }
            if !linalg::is_finite(matrix) {
                return Err(Error::NonFinite("custom gate"));
            }
            let defect = linalg::unitarity_defect(matrix);
            if defect > 1e-10 {
                return Err(Error::NotUnitary(defect));
            }
        }
        Ok(())
    }

    /// Checks indices against `width` and the custom matrix, if any.
    pub fn validate(&self, width: usize) -> Result<()> {
        let qs = self.qubits();
        if qs.is_empty() {
            return Err(Error::InvalidArgument(format!("{} gate on no qubits", self.name())));
        }
        for (i, &q) in qs.iter().enumerate() {
            if q >= width {
                return Err(Error::QubitOutOfRange { index: q, width });
            }
            if qs[..i].contains(&q) {
                return Err(Error::InvalidArgument(format!(
                    "{} gate repeats qubit {q}",
                    self.name()
                )));
            }
        }
        self.check_shape()
    }

    /// Same gate with every qubit index passed through `f`.
    pub fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Gate {
        match self {
            Gate::Hadamard { qubit } => Gate::Hadamard { qubit: f(*qubit) },
            Gate::NotX { qubit } => Gate::NotX { qubit: f(*qubit) },
            Gate::PhaseShift { qubit, phase } => Gate::PhaseShift {
                qubit: f(*qubit),
                phase: *phase,
            },
            Gate::ControlledPhase {
                control,
                target,
                phase,
            } => Gate::ControlledPhase {
                control: f(*control),
                target: f(*target),
                phase: *phase,
            },
            Gate::CcPhase {
                controls,
                target,
                phase,
            } => Gate::CcPhase {
                controls: [f(controls[0]), f(controls[1])],
                target: f(*target),
                phase: *phase,
            },
            Gate::Cnot { control, target } => Gate::Cnot {
                control: f(*control),
                target: f(*target),
            },
            Gate::Swap { a, b } => Gate::Swap { a: f(*a), b: f(*b) },
            Gate::Fredkin { control, a, b } => Gate::Fredkin {
                control: f(*control),
                a: f(*a),
                b: f(*b),
            },
            Gate::Qft { qubits } => Gate::Qft {
                qubits: qubits.iter().map(|&q| f(q)).collect(),
            },
            Gate::InvQft { qubits } => Gate::InvQft {
                qubits: qubits.iter().map(|&q| f(q)).collect(),
            },
            Gate::Custom { qubits, matrix } => Gate::Custom {
                qubits: qubits.iter().map(|&q| f(q)).collect(),
                matrix: matrix.clone(),
            },
        }
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::PhaseShift { qubit, phase } => Gate::PhaseShift {
                qubit: *qubit,
                phase: phase.neg(),
            },
            Gate::ControlledPhase {
                control,
                target,
                phase,
            } => Gate::ControlledPhase {
                control: *control,
                target: *target,
                phase: phase.neg(),
            },
            Gate::CcPhase {
                controls,
                target,
                phase,
            } => Gate::CcPhase {
                controls: *controls,
                target: *target,
                phase: phase.neg(),
            },
            Gate::Qft { qubits } => Gate::InvQft {
                qubits: qubits.clone(),
            },
            Gate::InvQft { qubits } => Gate::Qft {
                qubits: qubits.clone(),
            },
            Gate::Custom { qubits, matrix } => Gate::Custom {
                qubits: qubits.clone(),
                matrix: matrix.adjoint(),
            },
            g => g.clone(),
        }
    }

    /// Dense matrix over [`Gate::qubits`], first qubit most significant.
    pub fn matrix(&self) -> Result<CMatrix> {
        let m = match self {
            Gate::Hadamard { .. } => hadamard(),
            Gate::NotX { .. } => permutation(&[1, 0]),
            Gate::PhaseShift { phase, .. } => diag_last(2, phase.value()),
            Gate::ControlledPhase { phase, .. } => diag_last(4, phase.value()),
            Gate::CcPhase { phase, .. } => diag_last(8, phase.value()),
            Gate::Cnot { .. } => permutation(&[0, 1, 3, 2]),
            Gate::Swap { .. } => permutation(&[0, 2, 1, 3]),
            Gate::Fredkin { .. } => permutation(&[0, 1, 2, 3, 4, 6, 5, 7]),
            Gate::Qft { qubits } | Gate::InvQft { qubits } => {
                if qubits.len() > 12 {
                    return Err(Error::TooManyQubits {
                        qubits: qubits.len(),
                        max: 12,
                    });
                }
                let q = qft_matrix(qubits.len());
                if matches!(self, Gate::InvQft { .. }) {
                    q.adjoint()
                } else {
                    q
                }
            }
            Gate::Custom { matrix, .. } => matrix.clone(),
        };
        Ok(m)
    }
}

pub fn hadamard() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[h.into(), h.into(), h.into(), (-h).into()])
}

/// Permutation matrix sending basis state `c` to `perm[c]`.
pub fn permutation(perm: &[usize]) -> CMatrix {
    let d = perm.len();
    CMatrix::from_fn(d, d, |r, c| if perm[c] == r { ONE } else { ZERO })
}

fn diag_last(d: usize, z: Complex64) -> CMatrix {
    let mut m = linalg::identity(d);
    m[(d - 1, d - 1)] = z;
    m
}

/// Controlled version of a single-qubit matrix, control first.
pub fn controlled(u: &CMatrix) -> CMatrix {
    let mut m = linalg::identity(4);
    m.view_mut((2, 2), (2, 2)).copy_from(u);
    m
}

/// Swap-free quantum Fourier transform on `m` qubits:
/// `|x⟩ → 2^{-m/2} Σ_k e^{2πi·xk/2^m} |rev(k)⟩`.
pub fn qft_matrix(m: usize) -> CMatrix {
    let d = 1usize << m;
    let scale = (d as f64).sqrt().recip();
    let mut out = CMatrix::zeros(d, d);
    for x in 0..d {
        for k in 0..d {
            let phase = 2.0 * PI * ((x * k) % d) as f64 / d as f64;
            out[(reverse_bits(k, m), x)] = Complex64::from_polar(scale, phase);
        }
    }
    out
}

pub fn reverse_bits(v: usize, bits: usize) -> usize {
    (0..bits).fold(0, |acc, i| acc | (((v >> i) & 1) << (bits - 1 - i)))
}
