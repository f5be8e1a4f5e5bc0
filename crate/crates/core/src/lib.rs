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

//! Pulse-level gate synthesis for inductively coupled Josephson charge qubits,
//! and a compiler plus statevector simulator for Shor's factoring circuit built
//! from one-, two- and three-qubit gates.

pub mod circuit;
pub mod error;
pub mod linalg;
pub mod propagator;
pub mod register_model;
pub mod resources;
pub mod shor;
pub mod synthesis;

pub use error::{Error, Result};
