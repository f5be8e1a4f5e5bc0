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


//! `qcshor` command-line front end.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qcshor::linalg::{self, CMatrix};
use qcshor::propagator::{self, ControlPath, Method, PropagationSettings, Unitary};
use qcshor::resources::{self, CountMode, EdgeWeights};
use qcshor::shor::classical::gcd;
use qcshor::shor::run::run_shor;
use qcshor::synthesis::{self, targets, Stage, SynthesisProblem};
use qcshor::{circuit, Error};

/// Exit status for precondition failures and bad input.
const EXIT_INVALID: u8 = 2;
/// Exit status when synthesis ran out of budget above tolerance.
const EXIT_UNCONVERGED: u8 = 3;
/// Exit status when factoring found no factors.
const EXIT_NO_FACTORS: u8 = 1;

#[derive(Parser, Debug)]
#[command(name = "qcshor", version, about = "Gate synthesis and Shor circuit tools for charge-qubit registers")]
struct Cli {
    /// Random seed shared by all stochastic steps.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Search a control path realizing a target gate.
    Synth(SynthArgs),
    /// Evolve a control path and print the resulting unitary.
    Propagate(PropagateArgs),
    /// Simulate Shor's algorithm for a small modulus.
    Factor(FactorArgs),
    /// Count gates and control-path edges of the compiled circuit.
    Estimate(EstimateArgs),
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Gate name (cnot, fredkin, hadamard, qft3, ccphase:<turns>) or a JSON
    /// matrix file of `[re, im]` rows.
    target: String,
    /// Expected register size; checked against the target dimension.
    #[arg(long)]
    qubits: Option<usize>,
    /// Number of path vertices (default: the minimum for the arity).
    #[arg(long)]
    vertices: Option<usize>,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    /// Total evaluation budget, split 40/40/20 over dt = 0.05, 0.01, 0.001.
    #[arg(long, default_value_t = 100_000)]
    budget: usize,
    /// Explicit schedule `dt:evals,dt:evals,...`; overrides --budget.
    #[arg(long)]
    schedule: Option<String>,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Evaluations per polytope run before relaunching around the incumbent.
    #[arg(long)]
    launch_evals: Option<usize>,
    /// Output file for the result JSON (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PropagateArgs {
    /// Control path JSON, either a bare path or a synthesis result.
    #[arg(long)]
    path: PathBuf,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    /// taylor, cayley or spectral.
    #[arg(long, default_value = "taylor")]
    method: String,
    /// Digits after the decimal point.
    #[arg(long, default_value_t = 6)]
    precision: usize,
}

#[derive(Args, Debug)]
struct FactorArgs {
    #[arg(long = "N", visible_alias = "n")]
    modulus: u64,
    /// Base of the modular exponentiation; random when omitted.
    #[arg(long = "a")]
    base: Option<u64>,
    #[arg(long, default_value_t = 256)]
    shots: usize,
    /// Histogram CSV of the measured register for the final attempt.
    #[arg(long)]
    hist: Option<PathBuf>,
    /// Full report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[arg(long = "N", visible_alias = "n")]
    modulus: u64,
    /// Base (default: smallest base >= 2 coprime to N).
    #[arg(long = "a")]
    base: Option<u64>,
    /// mixed or 2q; both are shown when omitted.
    #[arg(long)]
    mode: Option<String>,
    /// Coherence time in seconds.
    #[arg(long, default_value_t = 1e-6)]
    coherence: f64,
    /// Modulus sizes, in bits, for the scaling table.
    #[arg(long, value_delimiter = ',', default_value = "10,128,512,1024")]
    scaling: Vec<u64>,
    #[arg(long)]
    json: Option<PathBuf>,
}

/// Failure carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: EXIT_INVALID,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_INVALID);
        }
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let outcome = match &cli.command {
        Command::Synth(a) => synth(a, cli.seed),
        Command::Propagate(a) => propagate(a),
        Command::Factor(a) => factor(a, cli.seed),
        Command::Estimate(a) => estimate(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_target(spec: &str) -> Result<Unitary, Failure> {
    let path = Path::new(spec);
    if !path.is_file() {
        return Ok(targets::named(spec)?);
    }
    let text = read_file(path)?;
    let rows: Vec<Vec<[f64; 2]>> =
        serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let m: CMatrix = linalg::serde_matrix::from_rows(&rows).map_err(invalid)?;
    Ok(targets::special(&m)?)
}

fn parse_schedule(s: &str) -> Result<Vec<Stage>, Failure> {
    s.split(',')
        .map(|item| {
            let (dt, evals) = item
                .split_once(':')
                .ok_or_else(|| invalid(format!("schedule entry {item:?} is not dt:evals")))?;
            let dt: f64 = dt.trim().parse().map_err(|_| invalid(format!("bad dt {dt:?}")))?;
            let max_evals: usize = evals
                .trim()
                .parse()
                .map_err(|_| invalid(format!("bad evaluation count {evals:?}")))?;
            Ok(Stage { dt, max_evals })
        })
        .collect()
}

fn synth(a: &SynthArgs, seed: u64) -> Result<(), Failure> {
    let target = load_target(&a.target)?;
    let mut problem = SynthesisProblem::new(target, a.budget, seed)?;
    let k = problem.arity();
    if let Some(q) = a.qubits {
        if q != k {
            return Err(invalid(format!("target acts on {k} qubits, not {q}")));
        }
    }
    if let Some(v) = a.vertices {
        problem.nu = v;
    }
    if let Some(s) = &a.schedule {
        problem.dt_schedule = parse_schedule(s)?;
    }
    problem.restarts = a.restarts;
    problem.tolerance = a.tol;
    problem.launch_evals = a.launch_evals;
    let result = synthesis::minimize(&problem)?;
    let json = result.to_json()?;
    match &a.out {
        Some(p) => write_file(p, &json)?,
        None => println!("{json}"),
    }
    eprintln!(
        "error {:.3e} at dt {} after {} evaluations (nu = {})",
        result.error,
        result.dt,
        result.evals,
        result.path.nu()
    );
    if result.converged {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_UNCONVERGED,
            message: format!("not converged: error {:.3e} above tolerance {:.1e}", result.error, a.tol),
        })
    }
}

/// Accepts a bare path or any object with a `path` field.
fn load_path(file: &Path) -> Result<ControlPath, Failure> {
    let text = read_file(file)?;
    if let Ok(p) = ControlPath::from_json(&text) {
        return Ok(p);
    }
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", file.display())))?;
    match v.get("path") {
        Some(inner) => Ok(ControlPath::from_json(&inner.to_string())?),
        None => Err(invalid(format!("{}: not a control path", file.display()))),
    }
}

fn format_matrix(m: &CMatrix, precision: usize) -> String {
    let mut s = String::new();
    for r in 0..m.nrows() {
        let cells: Vec<String> = (0..m.ncols())
            .map(|c| {
                let z = m[(r, c)];
                // Avoid printing "-0.000000".
                let re = if z.re.abs() < 0.5 * 10f64.powi(-(precision as i32)) { 0.0 } else { z.re };
                let im = if z.im.abs() < 0.5 * 10f64.powi(-(precision as i32)) { 0.0 } else { z.im };
                format!("{re:+.precision$}{im:+.precision$}i")
            })
            .collect();
        let _ = writeln!(s, "{}", cells.join("  "));
    }
    s
}

fn propagate(a: &PropagateArgs) -> Result<(), Failure> {
    let path = load_path(&a.path)?;
    let method: Method = a.method.parse()?;
    let settings = PropagationSettings::with_dt(a.dt).with_method(method);
    let u = propagator::propagate(&path, &settings)?;
    print!("{}", format_matrix(u.matrix(), a.precision));
    println!("defect {:.3e}", u.defect());
    Ok(())
}

fn factor(a: &FactorArgs, seed: u64) -> Result<(), Failure> {
    let report = run_shor(a.modulus, a.shots, seed, a.base)?;
    for at in &report.attempts {
        println!(
            "a = {}: {} shots, {} nonzero, {} yielded factors, periods {:?}",
            at.base, at.shots, at.nonzero_shots, at.successful_shots, at.periods
        );
    }
    if let Some(p) = &a.hist {
        let rows = &report.attempts.last().expect("at least one attempt").outcomes;
        let mut buf = Vec::new();
        circuit::write_histogram_csv(&mut buf, rows)?;
        write_file(p, &String::from_utf8(buf).expect("csv is utf-8"))?;
    }
    if let Some(p) = &a.json {
        write_file(p, &report.to_json()?)?;
    }
    match report.factors {
        Some((p, q)) => {
            println!("{} = {} × {}", report.modulus, p, q);
            Ok(())
        }
        None => Err(Failure {
            code: EXIT_NO_FACTORS,
            message: format!("no factors of {} found in {} attempts", a.modulus, report.attempts.len()),
        }),
    }
}

fn estimate(a: &EstimateArgs) -> Result<(), Failure> {
    let mode = a.mode.as_deref().map(str::parse::<CountMode>).transpose()?;
    let base = match a.base {
        Some(b) => b,
        None => (2..a.modulus)
            .find(|&b| gcd(b, a.modulus) == 1)
            .ok_or_else(|| invalid(format!("no base coprime to {}", a.modulus)))?,
    };
    let report = resources::estimate(a.modulus, base, a.coherence, EdgeWeights::default(), &a.scaling)?;
    print!("{}", report.render_table(mode));
    if let Some(p) = &a.json {
        write_file(p, &report.to_json()?)?;
    }
    Ok(())
}
