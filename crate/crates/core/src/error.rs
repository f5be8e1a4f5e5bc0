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

use thiserror::Error;

/// Errors raised by the qcshor library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("qubit index {index} out of range for {width} qubits")]
    QubitOutOfRange { index: usize, width: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{qubits} qubits exceeds the configured maximum of {max}")]
    TooManyQubits { qubits: usize, max: usize },

    #[error("time {t} outside path duration [0, {duration}]")]
    TimeOutOfRange { t: f64, duration: f64 },

    #[error("matrix is not unitary (defect {0:.3e})")]
    NotUnitary(f64),

    #[error("matrix is not special unitary (|det - 1| = {0:.3e})")]
    NotSpecialUnitary(f64),

    #[error("{b} has no inverse modulo {modulus}")]
    NotInvertible { b: u64, modulus: u64 },

    #[error("unsupported gate for this operation: {0}")]
    UnsupportedGate(String),

    #[error("{0}")]
    Precondition(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}
