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

//! Fixed-dimension evolution kernels.
//!
//! The register Hamiltonian is real symmetric (σ_y ⊗ σ_y is real), so each
//! Taylor factor is evaluated in real arithmetic on the split `U = Ur + i·Ui`.
//! Along one edge `s ∈ [0, 1]` the Hamiltonian is the quadratic
//! `H(s) = H0 + s·H1 + s²·H2`; the three coefficients are built once per edge.

use num_complex::Complex64;

use super::Method;
use crate::linalg::CMatrix;

pub(crate) type Real<const D: usize> = [[f64; D]; D];

#[inline(always)]
fn zero<const D: usize>() -> Real<D> {
    [[0.0; D]; D]
}

#[inline(always)]
fn eye<const D: usize>() -> Real<D> {
    let mut m = zero::<D>();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

/// `out = a · b`.
#[inline(always)]
fn matmul<const D: usize>(a: &Real<D>, b: &Real<D>, out: &mut Real<D>) {
    for i in 0..D {
        let mut row = [0.0; D];
        for k in 0..D {
            let aik = a[i][k];
            let bk = &b[k];
            for j in 0..D {
                row[j] += aik * bk[j];
            }
        }
        out[i] = row;
    }
}

/// Hamiltonian coefficients of one straight edge.
struct EdgeTerms<const D: usize> {
    h0: Real<D>,
    h1: Real<D>,
    h2: Real<D>,
}

/// Precomputed operator structure for an `n`-qubit register with `D = 2^n`.
pub(crate) struct Kernel<const D: usize> {
    n: usize,
    coupling: f64,
}

impl<const D: usize> Kernel<D> {
    pub(crate) fn new(n: usize, coupling: f64) -> Self {
        debug_assert_eq!(1 << n, D);
        Kernel { n, coupling }
    }

    #[inline(always)]
    fn bit(&self, qubit: usize, index: usize) -> usize {
        (index >> (self.n - 1 - qubit)) & 1
    }

    /// Adds `w·σ_z^q` to `m`.
    fn add_z(&self, m: &mut Real<D>, q: usize, w: f64) {
        if w == 0.0 {
            return;
        }
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += if self.bit(q, i) == 0 { w } else { -w };
        }
    }

    fn add_x(&self, m: &mut Real<D>, q: usize, w: f64) {
        if w == 0.0 {
            return;
        }
        let flip = 1 << (self.n - 1 - q);
        for col in 0..D {
            m[col ^ flip][col] += w;
        }
    }

    fn add_yy(&self, m: &mut Real<D>, p: usize, q: usize, w: f64) {
        if w == 0.0 {
            return;
        }
        let flip = (1 << (self.n - 1 - p)) | (1 << (self.n - 1 - q));
        for col in 0..D {
            let sign = if (self.bit(p, col) + self.bit(q, col)).is_multiple_of(2) {
                -1.0
            } else {
                1.0
            };
            m[col ^ flip][col] += sign * w;
        }
    }

    /// Real Hamiltonian at the control point `(bz, bx)`.
    pub(crate) fn hamiltonian(&self, point: &[f64]) -> Real<D> {
        let n = self.n;
        let (bz, bx) = point.split_at(n);
        let mut h = zero::<D>();
        for i in 0..n {
            self.add_z(&mut h, i, -0.5 * bz[i]);
            self.add_x(&mut h, i, -0.5 * bx[i]);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                self.add_yy(&mut h, i, j, -self.coupling * bx[i] * bx[j]);
            }
        }
        h
    }

    fn edge_terms(&self, from: &[f64], to: &[f64]) -> EdgeTerms<D> {
        let n = self.n;
        let d: Vec<f64> = to.iter().zip(from).map(|(b, a)| b - a).collect();
        let (z0, x0) = from.split_at(n);
        let (dz, dx) = d.split_at(n);
        let mut t = EdgeTerms {
            h0: zero::<D>(),
            h1: zero::<D>(),
            h2: zero::<D>(),
        };
        for i in 0..n {
            self.add_z(&mut t.h0, i, -0.5 * z0[i]);
            self.add_x(&mut t.h0, i, -0.5 * x0[i]);
            self.add_z(&mut t.h1, i, -0.5 * dz[i]);
            self.add_x(&mut t.h1, i, -0.5 * dx[i]);
        }
        let c = self.coupling;
        for i in 0..n {
            for j in (i + 1)..n {
                self.add_yy(&mut t.h0, i, j, -c * x0[i] * x0[j]);
                self.add_yy(&mut t.h1, i, j, -c * (x0[i] * dx[j] + dx[i] * x0[j]));
                self.add_yy(&mut t.h2, i, j, -c * dx[i] * dx[j]);
            }
        }
        t
    }

    /// Ordered product of midpoint factors along the polygon
    /// `origin → v_1 → … → v_ν → origin`, one time unit per edge.
    pub(crate) fn evolve(&self, vertices: &[f64], steps_per_edge: usize, method: Method, order: usize) -> (Real<D>, Real<D>) {
        let dim = 2 * self.n;
        let origin = vec![0.0; dim];
        let mut ur = eye::<D>();
        let mut ui = zero::<D>();
        let nu = vertices.len() / dim;
        let dt = 1.0 / steps_per_edge as f64;
        for e in 0..=nu {
            let from = if e == 0 { &origin[..] } else { &vertices[(e - 1) * dim..e * dim] };
            let to = if e == nu { &origin[..] } else { &vertices[e * dim..(e + 1) * dim] };
            if from.iter().chain(to).all(|v| *v == 0.0) {
                continue;
            }
            let terms = self.edge_terms(from, to);
            for k in 0..steps_per_edge {
                let s = (k as f64 + 0.5) * dt;
                let mut h = zero::<D>();
                for i in 0..D {
                    for j in 0..D {
                        h[i][j] = terms.h0[i][j] + s * (terms.h1[i][j] + s * terms.h2[i][j]);
                    }
                }
                match method {
                    Method::Taylor => taylor_apply(&h, dt, order, &mut ur, &mut ui),
                    Method::Cayley | Method::Spectral => {
                        let f = super::step_matrix(&to_complex(&h), dt, method, order);
                        complex_apply(&f, &mut ur, &mut ui);
                    }
                }
            }
        }
        (ur, ui)
    }
}

/// `U ← Σ_{k≤order} (−iHΔt)^k/k! · U` by Horner's rule on the split representation.
#[inline(always)]
fn taylor_apply<const D: usize>(h: &Real<D>, dt: f64, order: usize, ur: &mut Real<D>, ui: &mut Real<D>) {
    let mut vr = *ur;
    let mut vi = *ui;
    let mut hr = zero::<D>();
    let mut hi = zero::<D>();
    for k in (1..=order).rev() {
        let a = dt / k as f64;
        matmul(h, &vr, &mut hr);
        matmul(h, &vi, &mut hi);
        // V = U − i·a·H·V
        for i in 0..D {
            for j in 0..D {
                vr[i][j] = ur[i][j] + a * hi[i][j];
                vi[i][j] = ui[i][j] - a * hr[i][j];
            }
        }
    }
    *ur = vr;
    *ui = vi;
}

fn complex_apply<const D: usize>(f: &CMatrix, ur: &mut Real<D>, ui: &mut Real<D>) {
    let mut nr = zero::<D>();
    let mut ni = zero::<D>();
    for i in 0..D {
        for k in 0..D {
            let z = f[(i, k)];
            for j in 0..D {
                nr[i][j] += z.re * ur[k][j] - z.im * ui[k][j];
                ni[i][j] += z.re * ui[k][j] + z.im * ur[k][j];
            }
        }
    }
    *ur = nr;
    *ui = ni;
}

pub(crate) fn to_complex<const D: usize>(h: &Real<D>) -> CMatrix {
    CMatrix::from_fn(D, D, |i, j| Complex64::new(h[i][j], 0.0))
}

pub(crate) fn split_to_complex<const D: usize>(ur: &Real<D>, ui: &Real<D>) -> CMatrix {
    CMatrix::from_fn(D, D, |i, j| Complex64::new(ur[i][j], ui[i][j]))
}

/// Frobenius distance between `target` (row-major split) and `Ur + i·Ui`.
pub(crate) fn distance<const D: usize>(tr: &[f64], ti: &[f64], ur: &Real<D>, ui: &Real<D>) -> f64 {
    let mut acc = 0.0;
    for i in 0..D {
        for j in 0..D {
            let dr = tr[i * D + j] - ur[i][j];
            let di = ti[i * D + j] - ui[i][j];
            acc += dr * dr + di * di;
        }
    }
    acc.sqrt()
}
