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

//! Nelder–Mead polytope search with standard coefficients.

/// Reflection, expansion, contraction and shrink coefficients.
#[derive(Debug, Clone, Copy)]
pub struct Coefficients {
    pub reflect: f64,
    pub expand: f64,
    pub contract: f64,
    pub shrink: f64,
}

impl Default for Coefficients {
    fn default() -> Self {
        Coefficients {
            reflect: 1.0,
            expand: 2.0,
            contract: 0.5,
            shrink: 0.5,
        }
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stop {
    Budget,
    Target,
    Collapsed,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub best: Vec<f64>,
    pub best_value: f64,
    pub evals: usize,
    pub stop: Stop,
}

/// Stopping thresholds of one polytope run.
#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub max_evals: usize,
    /// Stop as soon as the best value drops to this level.
    pub target: f64,
    /// Simplex is considered collapsed when both the value spread and the
    /// largest vertex distance from the best point fall below these.
    pub ftol: f64,
    pub xtol: f64,
}

/// Minimizes `f` from the given initial simplex of `d + 1` points.
///
/// `on_improve(evals, best)` is called every time the incumbent improves.
pub fn run<F, G>(
    mut f: F,
    simplex: Vec<Vec<f64>>,
    coef: Coefficients,
    limits: Limits,
    mut on_improve: G,
) -> RunOutcome
where
    F: FnMut(&[f64]) -> f64,
    G: FnMut(usize, f64),
{
    let d = simplex[0].len();
    assert_eq!(simplex.len(), d + 1, "simplex needs d + 1 vertices");
    let mut evals = 0usize;
    let mut pts = simplex;
    let mut vals: Vec<f64> = Vec::with_capacity(d + 1);
    let mut best_seen = f64::INFINITY;

    let mut eval = |x: &[f64], evals: &mut usize, best_seen: &mut f64| -> f64 {
        *evals += 1;
        let v = f(x);
        let v = if v.is_nan() { f64::INFINITY } else { v };
        if v < *best_seen {
            *best_seen = v;
            on_improve(*evals, v);
        }
        v
    };

    for p in &pts {
        if evals >= limits.max_evals {
            break;
        }
        vals.push(eval(p, &mut evals, &mut best_seen));
    }
    if vals.len() < pts.len() {
        // Budget ran out while seeding; return the best evaluated vertex.
        let (i, v) = argmin(&vals);
        return RunOutcome {
            best: pts[i].clone(),
            best_value: v,
            evals,
            stop: Stop::Budget,
        };
    }

    let mut order: Vec<usize> = (0..=d).collect();
    let mut centroid = vec![0.0; d];
    let mut trial = vec![0.0; d];
    let mut trial2 = vec![0.0; d];

    let stop = loop {
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));
        let (ib, is, iw) = (order[0], order[d - 1], order[d]);
        if vals[ib] <= limits.target {
            break Stop::Target;
        }
        if evals >= limits.max_evals {
            break Stop::Budget;
        }
        let spread = vals[iw] - vals[ib];
        if spread <= limits.ftol {
            let reach = pts
                .iter()
                .map(|p| {
                    p.iter()
                        .zip(&pts[ib])
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if reach <= limits.xtol {
                break Stop::Collapsed;
            }
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &i in &order[..d] {
            for (c, x) in centroid.iter_mut().zip(&pts[i]) {
                *c += x;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= d as f64);

        let worst = pts[iw].clone();
        along(&centroid, &worst, -coef.reflect, &mut trial);
        let fr = eval(&trial, &mut evals, &mut best_seen);

        if fr < vals[ib] {
            along(&centroid, &worst, -coef.reflect * coef.expand, &mut trial2);
            let fe = if evals < limits.max_evals {
                eval(&trial2, &mut evals, &mut best_seen)
            } else {
                f64::INFINITY
            };
            if fe < fr {
                pts[iw].copy_from_slice(&trial2);
                vals[iw] = fe;
            } else {
                pts[iw].copy_from_slice(&trial);
                vals[iw] = fr;
            }
            continue;
        }
        if fr < vals[is] {
            pts[iw].copy_from_slice(&trial);
            vals[iw] = fr;
            continue;
        }
        if evals >= limits.max_evals {
            continue;
        }
        // Contraction, outside when the reflected point beats the worst one.
        let (fc, accept) = if fr < vals[iw] {
            along(&centroid, &worst, -coef.reflect * coef.contract, &mut trial2);
            let fc = eval(&trial2, &mut evals, &mut best_seen);
            (fc, fc <= fr)
        } else {
            along(&centroid, &worst, coef.contract, &mut trial2);
            let fc = eval(&trial2, &mut evals, &mut best_seen);
            (fc, fc < vals[iw])
        };
        if accept {
            pts[iw].copy_from_slice(&trial2);
            vals[iw] = fc;
            continue;
        }
        let anchor = pts[ib].clone();
        for &i in &order[1..] {
            if evals >= limits.max_evals {
                break;
            }
            for (x, a) in pts[i].iter_mut().zip(&anchor) {
                *x = a + coef.shrink * (*x - a);
            }
            vals[i] = eval(&pts[i], &mut evals, &mut best_seen);
        }
    };

    let (i, v) = argmin(&vals);
    RunOutcome {
        best: pts[i].clone(),
        best_value: v,
        evals,
        stop,
    }
}

/// `out = c + t·(w − c)`.
fn along(c: &[f64], w: &[f64], t: f64, out: &mut [f64]) {
    for ((o, ci), wi) in out.iter_mut().zip(c).zip(w) {
        *o = ci + t * (wi - ci);
    }
}

fn argmin(vals: &[f64]) -> (usize, f64) {
    vals.iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limits(max_evals: usize) -> Limits {
        Limits {
            max_evals,
            target: 0.0,
            ftol: 1e-14,
            xtol: 1e-10,
        }
    }

    #[test]
    fn minimizes_rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let simplex = vec![vec![-1.2, 1.0], vec![-1.0, 1.0], vec![-1.2, 1.2]];
        let out = run(rosen, simplex, Coefficients::default(), limits(5000), |_, _| {});
        assert!(out.best_value < 1e-10, "{}", out.best_value);
        assert!((out.best[0] - 1.0).abs() < 1e-4);
        assert_eq!(out.stop, Stop::Collapsed);
    }

    #[test]
    fn respects_budget_and_reports_improvements() {
        let sphere = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let simplex: Vec<Vec<f64>> = (0..6)
            .map(|i| (0..5).map(|j| if i == j + 1 { 2.0 } else { 1.0 }).collect())
            .collect();
        let mut history = Vec::new();
        let out = run(sphere, simplex, Coefficients::default(), limits(40), |e, v| {
            history.push((e, v))
        });
        assert!(out.evals <= 40);
        assert_eq!(out.stop, Stop::Budget);
        assert!(history.windows(2).all(|w| w[1].1 < w[0].1 && w[1].0 > w[0].0));
        assert_eq!(history.last().unwrap().1, out.best_value);
    }

    #[test]
    fn stops_at_target() {
        let abs = |x: &[f64]| x[0].abs();
        let out = run(
            abs,
            vec![vec![3.0], vec![2.0]],
            Coefficients::default(),
            Limits {
                target: 0.5,
                ..limits(1000)
            },
            |_, _| {},
        );
        assert_eq!(out.stop, Stop::Target);
        assert!(out.best_value <= 0.5);
    }
}
