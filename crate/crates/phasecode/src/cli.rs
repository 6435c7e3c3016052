//! Sweep configuration and execution, the invariant suite behind `verify`,
//! and the table and dump helpers behind `formulas` and `decompose`.
//!
//! Output is deterministic: grid rows are emitted in lexicographic grid
//! order regardless of worker count, every random quantity is seeded, and
//! floats are printed at 17 significant digits.

use crate::analytics;
use crate::channels::PhaseDamping;
use crate::codes::Code;
use crate::error::{Error, Result};
use crate::protocol::{run_periodic, ChannelSpec, ProtocolReport, ProtocolRun};
use crate::qstate::QState;
use crate::tol;
use crate::trajectories;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Tolerance against which the sweep summary grades measured-vs-form
/// deltas.
pub const SWEEP_TOLERANCE: f64 = 1e-9;

/// Which code a sweep runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeSelector {
    Standard,
    Symmetric(u32),
    TwoQubit,
}

impl CodeSelector {
    pub fn build(&self) -> Result<Code> {
        match self {
            CodeSelector::Standard => Ok(Code::standard()),
            CodeSelector::Symmetric(n) => Code::symmetric(*n),
            CodeSelector::TwoQubit => Ok(Code::two_qubit()),
        }
    }
}

impl FromStr for CodeSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(CodeSelector::Standard),
            "two_qubit" => Ok(CodeSelector::TwoQubit),
            other => {
                if let Some(n) = other.strip_prefix("symmetric:") {
                    let n: u32 = n.parse().map_err(|_| {
                        Error::InvalidConfig(format!("bad code size in {other:?}"))
                    })?;
                    Ok(CodeSelector::Symmetric(n))
                } else {
                    Err(Error::InvalidConfig(format!(
                        "unknown code {other:?}; expected standard | symmetric:N | two_qubit"
                    )))
                }
            }
        }
    }
}

/// Which channel family a sweep runs; the matching parameter list supplies
/// the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Phase,
    Amplitude,
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phase" => Ok(ChannelKind::Phase),
            "amplitude" => Ok(ChannelKind::Amplitude),
            other => Err(Error::InvalidConfig(format!(
                "unknown channel {other:?}; expected phase | amplitude"
            ))),
        }
    }
}

/// How logical amplitude pairs are generated for the grid.
#[derive(Debug, Clone, PartialEq)]
pub enum AmplitudeSpec {
    /// m values of |c0|^2 evenly spaced in (0, 1), phase 0.
    UniformGrid(u32),
    /// m seeded random normalized pairs.
    Random(u32),
    /// Explicit (|c0|^2, relative phase in radians) pairs.
    List(Vec<(f64, f64)>),
}

impl FromStr for AmplitudeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(m) = s.strip_prefix("uniform-grid:") {
            let m: u32 = m
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad grid size in {s:?}")))?;
            if m == 0 {
                return Err(Error::InvalidConfig("uniform-grid needs m >= 1".into()));
            }
            return Ok(AmplitudeSpec::UniformGrid(m));
        }
        if let Some(m) = s.strip_prefix("random:") {
            let m: u32 = m
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad sample count in {s:?}")))?;
            if m == 0 {
                return Err(Error::InvalidConfig("random needs m >= 1".into()));
            }
            return Ok(AmplitudeSpec::Random(m));
        }
        let mut pairs = Vec::new();
        for item in s.split(',') {
            let (v, phase) = match item.split_once('@') {
                Some((v, p)) => (v, p),
                None => (item, "0"),
            };
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad |c0|^2 value {item:?}")))?;
            let phase: f64 = phase
                .trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad phase in {item:?}")))?;
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidConfig(format!(
                    "|c0|^2 must be in [0, 1], got {v}"
                )));
            }
            pairs.push((v, phase));
        }
        if pairs.is_empty() {
            return Err(Error::InvalidConfig("empty amplitude list".into()));
        }
        Ok(AmplitudeSpec::List(pairs))
    }
}

impl AmplitudeSpec {
    /// Concrete normalized amplitude pairs, in grid order.
    fn realize(&self, seed: u64) -> Vec<(Complex64, Complex64)> {
        match self {
            AmplitudeSpec::UniformGrid(m) => (1..=*m)
                .map(|i| {
                    let c0_sq = f64::from(i) / f64::from(m + 1);
                    (
                        Complex64::new(c0_sq.sqrt(), 0.0),
                        Complex64::new((1.0 - c0_sq).sqrt(), 0.0),
                    )
                })
                .collect(),
            AmplitudeSpec::Random(m) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..*m).map(|_| random_amplitude_pair(&mut rng)).collect()
            }
            AmplitudeSpec::List(pairs) => pairs
                .iter()
                .map(|&(c0_sq, phase)| {
                    (
                        Complex64::new(c0_sq.sqrt(), 0.0),
                        Complex64::from_polar((1.0 - c0_sq).sqrt(), phase),
                    )
                })
                .collect(),
        }
    }
}

/// A fully resolved sweep: code, channel grid, amplitude grid, rounds.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub code: CodeSelector,
    pub channel: ChannelKind,
    pub lambdas: Vec<f64>,
    pub gammas: Vec<f64>,
    pub amplitudes: AmplitudeSpec,
    pub rounds: u32,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

/// Flag-level overrides; any field set here wins over the config file.
#[derive(Debug, Clone, Default)]
pub struct SweepOverrides {
    pub code: Option<String>,
    pub channel: Option<String>,
    pub lambda: Option<Vec<f64>>,
    pub gamma: Option<Vec<f64>>,
    pub c0sq: Option<String>,
    pub k: Option<u32>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

/// Builds a sweep config from an optional `key = value` file plus flag
/// overrides. Required keys: code, channel, and the parameter list matching
/// the channel.
pub fn build_config(file: Option<&Path>, overrides: SweepOverrides) -> Result<SweepConfig> {
    let mut code: Option<String> = None;
    let mut channel: Option<String> = None;
    let mut lambda: Option<Vec<f64>> = None;
    let mut gamma: Option<Vec<f64>> = None;
    let mut c0sq: Option<String> = None;
    let mut k: Option<u32> = None;
    let mut seed: Option<u64> = None;
    let mut out: Option<PathBuf> = None;
    let mut workers: Option<usize> = None;

    if let Some(path) = file {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidConfig(format!("cannot read {}: {e}", path.display()))
        })?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("line {}: expected key = value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "code" => code = Some(value.to_string()),
                "channel" => channel = Some(value.to_string()),
                "lambda" => lambda = Some(parse_f64_list(value)?),
                "gamma" => gamma = Some(parse_f64_list(value)?),
                "c0sq" => c0sq = Some(value.to_string()),
                "k" => {
                    k = Some(value.parse().map_err(|_| {
                        Error::InvalidConfig(format!("bad k value {value:?}"))
                    })?)
                }
                "seed" => {
                    seed = Some(value.parse().map_err(|_| {
                        Error::InvalidConfig(format!("bad seed value {value:?}"))
                    })?)
                }
                "out" => out = Some(PathBuf::from(value)),
                "workers" => {
                    workers = Some(value.parse().map_err(|_| {
                        Error::InvalidConfig(format!("bad workers value {value:?}"))
                    })?)
                }
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "line {}: unknown key {other:?}",
                        lineno + 1
                    )))
                }
            }
        }
    }

    // flags override the file
    if overrides.code.is_some() {
        code = overrides.code;
    }
    if overrides.channel.is_some() {
        channel = overrides.channel;
    }
    if overrides.lambda.is_some() {
        lambda = overrides.lambda;
    }
    if overrides.gamma.is_some() {
        gamma = overrides.gamma;
    }
    if overrides.c0sq.is_some() {
        c0sq = overrides.c0sq;
    }
    if overrides.k.is_some() {
        k = overrides.k;
    }
    if overrides.seed.is_some() {
        seed = overrides.seed;
    }
    if overrides.out.is_some() {
        out = overrides.out;
    }
    if overrides.workers.is_some() {
        workers = overrides.workers;
    }

    let code: CodeSelector = code
        .ok_or_else(|| Error::InvalidConfig("missing code".into()))?
        .parse()?;
    let channel: ChannelKind = channel
        .ok_or_else(|| Error::InvalidConfig("missing channel".into()))?
        .parse()?;
    let lambdas = lambda.unwrap_or_default();
    let gammas = gamma.unwrap_or_default();
    match channel {
        ChannelKind::Phase if lambdas.is_empty() => {
            return Err(Error::InvalidConfig(
                "phase channel needs a nonempty lambda list".into(),
            ))
        }
        ChannelKind::Amplitude if gammas.is_empty() => {
            return Err(Error::InvalidConfig(
                "amplitude channel needs a nonempty gamma list".into(),
            ))
        }
        _ => {}
    }
    for l in &lambdas {
        if !l.is_finite() || *l < 0.0 {
            return Err(Error::InvalidConfig(format!("lambda {l} out of domain")));
        }
    }
    for g in &gammas {
        if !(0.0..=1.0).contains(g) {
            return Err(Error::InvalidConfig(format!("gamma {g} out of domain")));
        }
    }
    let amplitudes = match c0sq {
        Some(s) => s.parse()?,
        None => AmplitudeSpec::UniformGrid(3),
    };
    let rounds = k.unwrap_or(1);
    if rounds < 1 {
        return Err(Error::InvalidConfig("k must be >= 1".into()));
    }

    Ok(SweepConfig {
        code,
        channel,
        lambdas,
        gammas,
        amplitudes,
        rounds,
        seed: seed.unwrap_or(0),
        out,
        workers,
    })
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidConfig(format!("bad number {v:?}")))
        })
        .collect()
}

/// The rendered results of a sweep.
#[derive(Debug, Clone)]
pub struct SweepOutput {
    /// Header plus one row per grid point, flat-record fields followed by
    /// |measured - form| delta columns.
    pub csv: String,
    /// Per-formula maxima and pass/fail lines.
    pub summary: String,
    /// Whether every graded delta stayed within [`SWEEP_TOLERANCE`].
    pub within_tolerance: bool,
}

/// Runs the grid and renders CSV plus summary. Grid points execute in
/// parallel; rows are emitted in lexicographic (channel parameter,
/// amplitude) order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    let code = cfg.code.build()?;
    let params: &[f64] = match cfg.channel {
        ChannelKind::Phase => &cfg.lambdas,
        ChannelKind::Amplitude => &cfg.gammas,
    };
    let pairs = cfg.amplitudes.realize(cfg.seed);
    let points: Vec<(f64, (Complex64, Complex64))> = params
        .iter()
        .flat_map(|&p| pairs.iter().map(move |&pair| (p, pair)))
        .collect();

    let dim = 1usize << code.width();
    if points.len() > 50_000 || points.len().saturating_mul(dim) > 2_000_000 {
        return Err(Error::InvalidConfig(format!(
            "sweep capacity exceeded: {} grid points at dimension {dim}",
            points.len()
        )));
    }

    let execute = |&(param, (c0, c1)): &(f64, (Complex64, Complex64))| -> Result<ProtocolReport> {
        let channel = match cfg.channel {
            ChannelKind::Phase => ChannelSpec::Phase { lambda: param },
            ChannelKind::Amplitude => ChannelSpec::Amplitude { gamma: param },
        };
        let run = ProtocolRun::new(&code, channel, c0, c1)?.with_rounds(cfg.rounds)?;
        run_periodic(&run)
    };

    let reports: Vec<ProtocolReport> = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?
            .install(|| points.par_iter().map(execute).collect::<Result<_>>())?,
        None => points.par_iter().map(execute).collect::<Result<_>>()?,
    };

    let mut csv = String::new();
    csv.push_str(ProtocolReport::CSV_HEADER);
    csv.push_str(",delta_p_accept,delta_j,delta_fidelity\n");
    for r in &reports {
        let dp = (r.p_accept_measured - r.p_accept_closed_form).abs();
        let dj = (r.j_measured.value_or_nan() - r.j_closed_form).abs();
        let df = (r.fidelity_measured - r.fidelity_closed_form).abs();
        let _ = writeln!(csv, "{},{dp:.16e},{dj:.16e},{df:.16e}", r.csv_row());
    }

    let (summary, within_tolerance) = render_summary(cfg, &reports);
    Ok(SweepOutput {
        csv,
        summary,
        within_tolerance,
    })
}

fn render_summary(cfg: &SweepConfig, reports: &[ProtocolReport]) -> (String, bool) {
    let mut out = String::new();
    let channel = match cfg.channel {
        ChannelKind::Phase => "phase",
        ChannelKind::Amplitude => "amplitude",
    };
    let code_name = match cfg.code {
        CodeSelector::Standard => "standard".to_string(),
        CodeSelector::Symmetric(n) => format!("symmetric:{n}"),
        CodeSelector::TwoQubit => "two_qubit".to_string(),
    };
    let _ = writeln!(
        out,
        "sweep: {} rows, code {code_name}, channel {channel}, k = {}",
        reports.len(),
        cfg.rounds
    );

    type FieldExtract = fn(&ProtocolReport) -> (f64, f64);

    let mut all_pass = true;
    let deltas_of = |extract: FieldExtract| -> Vec<f64> {
        reports
            .iter()
            .map(|r| {
                let (meas, form) = extract(r);
                (meas - form).abs()
            })
            .filter(|d| d.is_finite())
            .collect()
    };
    let fields: [(&str, FieldExtract); 3] = [
        ("p_accept", |r| (r.p_accept_measured, r.p_accept_closed_form)),
        ("J", |r| (r.j_measured.value_or_nan(), r.j_closed_form)),
        ("fidelity", |r| (r.fidelity_measured, r.fidelity_closed_form)),
    ];
    for (name, extract) in fields {
        let deltas = deltas_of(extract);
        if deltas.is_empty() {
            let _ = writeln!(
                out,
                "max |{name}_meas - {name}_form| : no closed form for this configuration"
            );
            continue;
        }
        let max = deltas.iter().copied().fold(0.0f64, f64::max);
        // the displayed two-qubit fidelity expression is known not to
        // reproduce the simulation (it reads 1 at no damping as
        // 1 - 2|c0|^2|c1|^2); report it instead of grading it
        let soft = name == "fidelity" && cfg.code == CodeSelector::TwoQubit;
        if soft {
            let _ = writeln!(
                out,
                "max |fidelity_meas - fidelity_form| = {max:.3e} over {} rows -> INFO \
                 (two_qubit fidelity form is reported, not graded: the simulated value \
                 follows 1 - 2|c0|^2|c1|^2 (1 - 1/cosh(lambda)) and equals 1 at lambda = 0, \
                 while the displayed form gives 1 - 2|c0|^2|c1|^2)",
                deltas.len()
            );
        } else {
            let pass = max <= SWEEP_TOLERANCE;
            all_pass &= pass;
            let _ = writeln!(
                out,
                "max |{name}_meas - {name}_form| = {max:.3e} over {} rows -> {} (tol {SWEEP_TOLERANCE:.1e})",
                deltas.len(),
                if pass { "PASS" } else { "FAIL" }
            );
        }
    }
    (out, all_pass)
}

fn random_amplitude_pair<R: Rng + ?Sized>(rng: &mut R) -> (Complex64, Complex64) {
    loop {
        let raw = [
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5),
        ];
        let norm = (raw[0].norm_sqr() + raw[1].norm_sqr()).sqrt();
        if norm > 1e-3 {
            let (c0, c1) = (raw[0] / norm, raw[1] / norm);
            if c0.norm() > 1e-3 && c1.norm() > 1e-3 {
                return (c0, c1);
            }
        }
    }
}

/// One line of the invariant suite.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// The rendered invariant suite.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    /// Findings that are documented rather than graded.
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// One line per check; notes appended. Verbose keeps the per-check
    /// detail on the same line either way, so the text is identical across
    /// runs.
    pub fn render(&self, verbose: bool) -> String {
        let mut out = String::new();
        for c in &self.checks {
            if verbose {
                let _ = writeln!(
                    out,
                    "{} {} {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            } else {
                let _ = writeln!(out, "{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "NOTE {n}");
        }
        let _ = writeln!(
            out,
            "verify: {}/{} checks passed",
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len()
        );
        out
    }
}

/// Runs the full invariant suite with fixed seeds: trajectory
/// reconstruction, formula equivalence, the fidelity bound, baseline and
/// crossover comparisons, both watchdog schedules, the two-qubit code,
/// amplitude-damping detection, and Monte-Carlo consistency.
pub fn verify() -> VerifyReport {
    let mut checks = Vec::new();
    let mut notes = Vec::new();

    checks.push(check_trajectory_reconstruction());
    checks.push(check_acceptance_formula());
    checks.push(check_coherence_formula());
    checks.push(check_fidelity_bound());
    checks.push(check_baseline_and_crossover());
    checks.push(check_watchdog_exponential());
    checks.push(check_watchdog_quadratic(&mut notes));
    checks.push(check_two_qubit(&mut notes));
    checks.push(check_amplitude_detection());
    checks.push(check_monte_carlo());

    VerifyReport { checks, notes }
}

fn check_trajectory_reconstruction() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
    let mut max_delta = 0.0f64;
    for width in 1..=6u32 {
        for lambda in [0.01, 0.1, 1.0, 5.0] {
            for _ in 0..3 {
                let psi = QState::random(width, &mut rng).expect("width in range");
                let ens = trajectories::decompose(&psi, lambda).expect("normalized");
                let gram = ens.reconstruct().expect("width in range");
                let damped = PhaseDamping::new(lambda, width)
                    .expect("domain")
                    .apply(&psi.to_density().expect("width in range"))
                    .expect("widths match");
                max_delta = max_delta.max(gram.max_abs_diff(&damped));
            }
        }
    }
    CheckResult {
        name: "trajectory-reconstruction",
        pass: max_delta <= 1e-10,
        detail: format!("max entry delta {max_delta:.3e} (tol 1.0e-10)"),
    }
}

/// The shared simulation grid for the formula checks: N in {2,4,6},
/// lambda in {0.01,...,2}, three seeded random pairs plus the equal-weight
/// pair.
fn formula_grid() -> Vec<(u32, f64, ProtocolReport)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0B);
    let mut out = Vec::new();
    for n in [2u32, 4, 6] {
        let code = Code::symmetric(n).expect("sizes in range");
        for lambda in [0.01, 0.1, 0.5, 1.0, 2.0] {
            let mut pairs: Vec<(Complex64, Complex64)> =
                (0..3).map(|_| random_amplitude_pair(&mut rng)).collect();
            let s = std::f64::consts::FRAC_1_SQRT_2;
            pairs.push((Complex64::new(s, 0.0), Complex64::from_polar(s, 0.7)));
            for (c0, c1) in pairs {
                let run = ProtocolRun::new(&code, ChannelSpec::Phase { lambda }, c0, c1)
                    .expect("normalized pair");
                out.push((n, lambda, run_periodic(&run).expect("valid run")));
            }
        }
    }
    out
}

fn check_acceptance_formula() -> CheckResult {
    let mut max_delta = 0.0f64;
    for (n, lambda, report) in formula_grid() {
        let form = analytics::p_accept_form(n, lambda).expect("domain");
        max_delta = max_delta.max((report.p_accept_measured - form).abs());
    }
    CheckResult {
        name: "acceptance-formula",
        pass: max_delta <= tol::FORMULA_MATCH,
        detail: format!("max |P_meas - P_form| {max_delta:.3e} (tol 1.0e-10)"),
    }
}

fn check_coherence_formula() -> CheckResult {
    let mut max_delta = 0.0f64;
    for (n, lambda, report) in formula_grid() {
        let form = analytics::j_form(n, lambda).expect("domain");
        let j = report.j_measured.value().expect("nonzero amplitudes");
        max_delta = max_delta.max((j - form).abs());
    }
    CheckResult {
        name: "coherence-formula",
        pass: max_delta <= tol::FORMULA_MATCH,
        detail: format!("max |J_meas - J_form| {max_delta:.3e} (tol 1.0e-10)"),
    }
}

fn check_fidelity_bound() -> CheckResult {
    let mut worst_slack = f64::INFINITY;
    let mut max_equality_delta = 0.0f64;
    for (_, _, report) in formula_grid() {
        let j = report.j_measured.value().expect("nonzero amplitudes");
        let bound = (1.0 + j) / 2.0;
        worst_slack = worst_slack.min(report.fidelity_measured - bound);
        let c0_sq = report.c0.norm_sqr();
        if (c0_sq - 0.5).abs() < 1e-12 {
            max_equality_delta =
                max_equality_delta.max((report.fidelity_measured - bound).abs());
        }
    }
    CheckResult {
        name: "fidelity-bound",
        pass: worst_slack >= -tol::STRUCTURAL && max_equality_delta <= tol::FORMULA_MATCH,
        detail: format!(
            "min(F - (1+J)/2) {worst_slack:.3e}; equality delta at |c0|^2 = 1/2: {max_equality_delta:.3e}"
        ),
    }
}

fn check_baseline_and_crossover() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBA5E);
    let code = Code::standard();
    let mut max_delta = 0.0f64;
    for lambda in [0.1, 0.5, 1.0] {
        let (c0, c1) = random_amplitude_pair(&mut rng);
        let run =
            ProtocolRun::new(&code, ChannelSpec::Phase { lambda }, c0, c1).expect("valid");
        let report = run_periodic(&run).expect("valid run");
        let j = report.j_measured.value().expect("nonzero amplitudes");
        max_delta = max_delta.max((j - (-lambda).exp()).abs());
    }
    let mut crossover_ok = true;
    for lambda in [0.1f64, 0.5, 1.0] {
        let baseline = (-lambda).exp();
        let threshold = analytics::crossover_threshold(lambda);
        for n in (2..=64u32).step_by(2) {
            let beats = analytics::j_form(n, lambda).expect("domain") > baseline;
            crossover_ok &= beats == (f64::from(n) > threshold);
        }
    }
    CheckResult {
        name: "baseline-crossover",
        pass: max_delta <= tol::STRUCTURAL && crossover_ok,
        detail: format!(
            "standard-code |J - e^-lambda| {max_delta:.3e} (tol 1.0e-12); \
             crossover N > 2(1+e^lambda) grid consistent: {crossover_ok}"
        ),
    }
}

fn check_watchdog_exponential() -> CheckResult {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let per_round = 0.05f64;
    let mut max_delta = 0.0f64;
    let mut single_beats_periodic = true;
    for n in [4u32, 6] {
        let code = Code::symmetric(n).expect("in range");
        let j_single = analytics::j_form(n, per_round).expect("domain");
        for k in [1u32, 2, 4, 8] {
            let run = ProtocolRun::new(
                &code,
                ChannelSpec::Phase { lambda: per_round },
                Complex64::new(s, 0.0),
                Complex64::new(s, 0.0),
            )
            .expect("normalized")
            .with_rounds(k)
            .expect("k >= 1");
            let report = run_periodic(&run).expect("valid run");
            // the displayed k-th-power forms carry the per-round cross-term
            // exponent, which is twice the per-qubit damping
            let forms = analytics::watchdog_forms(n, 2.0 * per_round, k).expect("domain");
            max_delta = max_delta.max((report.p_accept_measured - forms.p_accept).abs());
            let j = report.j_measured.value().expect("nonzero amplitudes");
            max_delta = max_delta.max((j - forms.j).abs());
            if k >= 2 {
                single_beats_periodic &= j_single > j;
            }
        }
    }
    CheckResult {
        name: "watchdog-exponential",
        pass: max_delta <= 1e-9 && single_beats_periodic,
        detail: format!(
            "max sim-vs-form delta {max_delta:.3e} (tol 1.0e-9); \
             single-shot J beats k-round J at equal per-round damping: {single_beats_periodic}"
        ),
    }
}

fn check_watchdog_quadratic(notes: &mut Vec<String>) -> CheckResult {
    let mut effective = true;
    let mut exceeds_one = false;
    for n in [4u32, 6] {
        for epsilon in [1e-4, 1e-3] {
            for k in [2u32, 4, 8] {
                let q = analytics::quadratic_watchdog_forms(n, epsilon, k).expect("domain");
                effective &= (q.j_periodic - 1.0).abs() < (q.j_single - 1.0).abs();
                exceeds_one |= q.j_single_expansion > 1.0 && q.j_periodic_expansion > 1.0;
            }
        }
    }
    if exceeds_one {
        notes.push(
            "quadratic-schedule J expressions and their printed expansions exceed 1; \
             they are evaluated verbatim and compared only against each other, \
             since no physical channel with that schedule is specified"
                .to_string(),
        );
    }
    CheckResult {
        name: "watchdog-quadratic",
        pass: effective,
        detail: format!(
            "k-round J closer to 1 than single J on every grid point: {effective}"
        ),
    }
}

fn check_two_qubit(notes: &mut Vec<String>) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7200);
    let code = Code::two_qubit();
    let mut max_p_delta = 0.0f64;
    let mut max_f_delta = 0.0f64;
    for lambda in [0.01, 0.1, 0.5, 1.0] {
        let (c0, c1) = random_amplitude_pair(&mut rng);
        let run =
            ProtocolRun::new(&code, ChannelSpec::Phase { lambda }, c0, c1).expect("valid");
        let report = run_periodic(&run).expect("valid run");
        max_p_delta = max_p_delta
            .max((report.p_accept_measured - report.p_accept_closed_form).abs());
        max_f_delta = max_f_delta
            .max((report.fidelity_measured - report.fidelity_closed_form).abs());
    }
    // pin the zero-damping discrepancy of the displayed fidelity form
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let run = ProtocolRun::new(
        &code,
        ChannelSpec::Phase { lambda: 0.0 },
        Complex64::new(s, 0.0),
        Complex64::new(s, 0.0),
    )
    .expect("valid");
    let at_zero = run_periodic(&run).expect("valid run");
    let zero_pinned = (at_zero.fidelity_measured - 1.0).abs() < tol::STRUCTURAL
        && (at_zero.fidelity_closed_form - 0.5).abs() < tol::STRUCTURAL;
    notes.push(format!(
        "two_qubit fidelity form deviates from simulation (max |delta| {max_f_delta:.3e}); \
         at lambda = 0 the simulation returns 1 while the form gives 1 - 2|c0|^2|c1|^2; \
         the form is reported, not graded"
    ));
    CheckResult {
        name: "two-qubit-acceptance",
        pass: max_p_delta <= tol::FORMULA_MATCH && zero_pinned,
        detail: format!(
            "max |P_meas - P_form| {max_p_delta:.3e} (tol 1.0e-10); \
             lambda=0 discrepancy pinned: {zero_pinned}"
        ),
    }
}

fn check_amplitude_detection() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(0xDECAF);
    let mut max_delta = 0.0f64;
    for n in [4u32, 6] {
        let code = Code::symmetric(n).expect("in range");
        for gamma in [0.1, 0.3, 0.7] {
            let (c0, c1) = random_amplitude_pair(&mut rng);
            let run = ProtocolRun::new(&code, ChannelSpec::Amplitude { gamma }, c0, c1)
                .expect("valid");
            let report = crate::protocol::run_amplitude(&run).expect("valid run");
            max_delta = max_delta.max((report.fidelity_measured - 1.0).abs());
            max_delta = max_delta.max((report.p_accept_measured - (1.0 - gamma)).abs());
        }
    }
    CheckResult {
        name: "amplitude-perfect-detection",
        pass: max_delta <= tol::FORMULA_MATCH,
        detail: format!(
            "max deviation from (F = 1, P = 1 - gamma): {max_delta:.3e} (tol 1.0e-10)"
        ),
    }
}

fn check_monte_carlo() -> CheckResult {
    let code = Code::symmetric(4).expect("in range");
    let lambda = 0.2;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let psi2 = code
        .encode(Complex64::new(s, 0.0), Complex64::new(0.0, s))
        .expect("normalized");
    let ens = trajectories::decompose(&psi2, lambda).expect("normalized");
    let exact = analytics::p_accept_form(4, lambda).expect("domain");

    let mut sampler = ens.sampler(0x5EED);
    let mut accept_rng = ChaCha8Rng::seed_from_u64(0x5EED ^ 0xFFFF);
    let draws = 100_000usize;
    let mut accepted = 0usize;
    for _ in 0..draws {
        let (_, state) = sampler.sample();
        let p = code
            .zero_logical()
            .inner(&state)
            .expect("widths match")
            .norm_sqr()
            + code
                .one_logical()
                .inner(&state)
                .expect("widths match")
                .norm_sqr();
        if accept_rng.gen::<f64>() < p {
            accepted += 1;
        }
    }
    let p_hat = accepted as f64 / draws as f64;
    let se = (p_hat * (1.0 - p_hat) / draws as f64).sqrt();
    let sigmas = (p_hat - exact).abs() / se;
    CheckResult {
        name: "monte-carlo-consistency",
        pass: sigmas <= 3.0,
        detail: format!(
            "empirical P {p_hat:.6} vs exact {exact:.6}: {sigmas:.2} standard errors over {draws} draws"
        ),
    }
}

/// One row of the closed-form table.
#[derive(Debug, Clone)]
pub struct FormulaRow {
    pub name: &'static str,
    pub inputs: String,
    pub value: f64,
}

/// Evaluates every named closed form on the given inputs. `filter` keeps
/// only the named evaluator.
pub fn formulas_table(
    n: u32,
    lambda: f64,
    epsilon: f64,
    k: u32,
    c0_sq: f64,
    filter: Option<&str>,
) -> Result<Vec<FormulaRow>> {
    let c1_sq = 1.0 - c0_sq;
    let j = analytics::j_form(n, lambda)?;
    let watchdog = analytics::watchdog_forms(n, lambda, k)?;
    let quad = analytics::quadratic_watchdog_forms(n, epsilon, k)?;
    let two = analytics::two_qubit_forms(lambda, c0_sq, c1_sq)?;
    let mut rows = vec![
        FormulaRow {
            name: "p_accept",
            inputs: format!("N={n} lambda={lambda}"),
            value: analytics::p_accept_form(n, lambda)?,
        },
        FormulaRow {
            name: "j",
            inputs: format!("N={n} lambda={lambda}"),
            value: j,
        },
        FormulaRow {
            name: "fidelity",
            inputs: format!("J=j(N,lambda) c0sq={c0_sq}"),
            value: analytics::fidelity_form(j, c0_sq, c1_sq)?,
        },
        FormulaRow {
            name: "baseline_j",
            inputs: format!("lambda={lambda}"),
            value: analytics::baseline_j_form(lambda)?,
        },
        FormulaRow {
            name: "crossover_threshold",
            inputs: format!("lambda={lambda}"),
            value: analytics::crossover_threshold(lambda),
        },
        FormulaRow {
            name: "watchdog_p",
            inputs: format!("N={n} lambda={lambda} k={k}"),
            value: watchdog.p_accept,
        },
        FormulaRow {
            name: "watchdog_j",
            inputs: format!("N={n} lambda={lambda} k={k}"),
            value: watchdog.j,
        },
        FormulaRow {
            name: "quadratic_j_single",
            inputs: format!("N={n} epsilon={epsilon} k={k}"),
            value: quad.j_single,
        },
        FormulaRow {
            name: "quadratic_j_periodic",
            inputs: format!("N={n} epsilon={epsilon} k={k}"),
            value: quad.j_periodic,
        },
        FormulaRow {
            name: "two_qubit_p",
            inputs: format!("lambda={lambda}"),
            value: two.p_accept,
        },
        FormulaRow {
            name: "two_qubit_fidelity",
            inputs: format!("lambda={lambda} c0sq={c0_sq}"),
            value: two.fidelity,
        },
    ];
    if let Some(name) = filter {
        rows.retain(|r| r.name == name);
        if rows.is_empty() {
            return Err(Error::InvalidConfig(format!(
                "unknown formula {name:?}"
            )));
        }
    }
    Ok(rows)
}

/// Renders the rows with aligned columns and 17-significant-digit values.
pub fn render_formulas(rows: &[FormulaRow]) -> String {
    let name_w = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let inputs_w = rows.iter().map(|r| r.inputs.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        let _ = writeln!(
            out,
            "{:<name_w$}  {:<inputs_w$}  {:.16e}",
            r.name, r.inputs, r.value
        );
    }
    out
}

/// Dumps the code words and the trajectory branches of the damped encoded
/// state, in the (index, amplitude) text format.
pub fn decompose_dump(
    selector: CodeSelector,
    lambda: f64,
    c0_sq: f64,
    phase: f64,
) -> Result<String> {
    if !(0.0..=1.0).contains(&c0_sq) {
        return Err(Error::InvalidConfig(format!(
            "|c0|^2 must be in [0, 1], got {c0_sq}"
        )));
    }
    let code = selector.build()?;
    let c0 = Complex64::new(c0_sq.sqrt(), 0.0);
    let c1 = Complex64::from_polar((1.0 - c0_sq).sqrt(), phase);
    let psi = code.encode(c0, c1)?;
    let ens = trajectories::decompose(&psi, lambda)?;

    let mut out = Vec::new();
    code.write_states(&mut out)
        .expect("writing to a Vec cannot fail");
    let mut out = String::from_utf8(out).expect("ascii");
    let _ = writeln!(
        out,
        "# encoded c0 = {:.16e} {:.16e}, c1 = {:.16e} {:.16e}",
        c0.re, c0.im, c1.re, c1.im
    );
    let _ = writeln!(out, "# damping lambda = {lambda:.16e}");
    let nonzero = ens.branches().iter().filter(|b| b.weight() > 0.0).count();
    let _ = writeln!(
        out,
        "# branches {} nonzero {nonzero}",
        ens.branches().len()
    );
    for branch in ens.branches() {
        let w = branch.weight();
        if w == 0.0 {
            continue;
        }
        let _ = writeln!(out, "branch {} weight {:.16e}", branch.index(), w);
        for &(i, z) in branch.terms() {
            let _ = writeln!(out, "{} {:.16e} {:.16e}", i, z.re, z.im);
        }
    }
    Ok(out)
}
