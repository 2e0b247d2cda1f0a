//! Batch front end: resolve a run configuration from a flat key-value file
//! and command-line flags, run one subcommand and write its reports.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 when the parameters
//! fall outside every enumerated regime, 3 on numerical failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use num_rational::Ratio;
use serde::Serialize;

use crate::analysis::{find_roots, scan_f, verify_limits, LimitOptions, RootOptions};
use crate::constants::{BallGeometry, SpectralConstants};
use crate::error::{Error, Result};
use crate::params::{LocalProblem, ProblemParams, Tolerances};
use crate::regime::{classify, estimate_lambda0, ground_state_level, CaseDescriptor, ExponentClass};
use crate::report::{fscan_csv, oracle_csv, profile_csv, write_atomic, write_report};
use crate::shooting::{LocalSolver, ShootingOptions};
use crate::variational::{minimize_nehari, oracle_compare, OracleOptions};

/// Environment variable holding the worker-thread count.
pub const WORKERS_ENV: &str = "KIRCHHOFF_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "kirchhoff", version, about = "Positive radial solutions of Kirchhoff problems on a ball")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Locate all roots of f(α) = 1 and write report.json and profile_<i>.csv.
    Solve,
    /// Sample D(α) and f(α) and write fscan.csv.
    Scan,
    /// Extrapolate D(α) at the interval ends and write limits.json.
    Limits,
    /// Match the parameters against the enumerated regimes and write report.json.
    Classify,
    /// Compare shooting with the finite-difference minimiser and write oracle.csv.
    Oracle,
    /// Write constants.json for the ball.
    Constants,
}

/// Flags; each may also be given as `key = value` in the `--config` file,
/// with the flag name as key. Flags override the file.
#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Flat key-value configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Coefficient a > 0 of −Δu.
    #[arg(long, global = true)]
    pub a: Option<String>,
    /// Coefficient b ≥ 0 of the nonlocal term.
    #[arg(long, global = true)]
    pub b: Option<String>,
    /// Coefficient λ > 0 of u^{q−1}.
    #[arg(long, global = true)]
    pub lambda: Option<String>,
    /// λ as a multiple of aλ₁ (alternative to --lambda).
    #[arg(long = "lambda-ratio", global = true)]
    pub lambda_ratio: Option<String>,
    /// Coefficient μ > 0 of u^{p−1}.
    #[arg(long, global = true)]
    pub mu: Option<String>,
    /// Exponent q, decimal or rational such as 5/2.
    #[arg(long, global = true)]
    pub q: Option<String>,
    /// Exponent p, decimal or rational such as 10/3.
    #[arg(long, global = true)]
    pub p: Option<String>,
    /// Dimension (default 3).
    #[arg(long = "N", global = true)]
    pub n: Option<String>,
    /// Ball radius (default 1).
    #[arg(long = "R", global = true)]
    pub r: Option<String>,
    /// Relative tolerance of the ODE integrator.
    #[arg(long = "tol-ode", global = true)]
    pub tol_ode: Option<String>,
    /// Target |f(α) − 1| at roots.
    #[arg(long = "tol-root", global = true)]
    pub tol_root: Option<String>,
    /// Number of α samples (scan, solve, oracle).
    #[arg(long = "grid-points", global = true)]
    pub grid_points: Option<String>,
    /// Lower end of the α-range; also λ₀ when N = 3, q > 2, p = 2*.
    #[arg(long = "alpha-min", global = true)]
    pub alpha_min: Option<String>,
    #[arg(long = "alpha-max", global = true)]
    pub alpha_max: Option<String>,
    /// Intervals of the finite-difference grid (oracle, limits).
    #[arg(long = "oracle-points", global = true)]
    pub oracle_points: Option<String>,
    /// Output directory (default ".").
    #[arg(long, global = true)]
    pub out: Option<String>,
}

const KEYS: [&str; 16] = [
    "a",
    "b",
    "lambda",
    "lambda-ratio",
    "mu",
    "q",
    "p",
    "N",
    "R",
    "tol-ode",
    "tol-root",
    "grid-points",
    "alpha-min",
    "alpha-max",
    "oracle-points",
    "out",
];

impl Flags {
    fn entries(&self) -> [(&'static str, &Option<String>); 16] {
        [
            ("a", &self.a),
            ("b", &self.b),
            ("lambda", &self.lambda),
            ("lambda-ratio", &self.lambda_ratio),
            ("mu", &self.mu),
            ("q", &self.q),
            ("p", &self.p),
            ("N", &self.n),
            ("R", &self.r),
            ("tol-ode", &self.tol_ode),
            ("tol-root", &self.tol_root),
            ("grid-points", &self.grid_points),
            ("alpha-min", &self.alpha_min),
            ("alpha-max", &self.alpha_max),
            ("oracle-points", &self.oracle_points),
            ("out", &self.out),
        ]
    }
}

/// Parse `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(Error::Config(format!("line {}: unknown key {k:?}", i + 1)));
        }
        map.insert(k.to_string(), v.to_string());
    }
    Ok(map)
}

/// Parse an exponent exactly: an integer ratio `n/d` or a decimal.
pub fn parse_rational(text: &str) -> Result<Ratio<i128>> {
    let bad = || Error::Config(format!("cannot parse {text:?} as an exact rational"));
    let t = text.trim();
    if t.contains('/') {
        return Ratio::from_str(t).map_err(|_| bad());
    }
    let (int, frac) = t.split_once('.').unwrap_or((t, ""));
    if frac.len() > 30 || !frac.bytes().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: i128 = format!("{int}{frac}").parse().map_err(|_| bad())?;
    Ok(Ratio::new(digits, 10i128.pow(frac.len() as u32)))
}

fn ratio_to_f64(r: Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Fully resolved run configuration, embedded in every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub dim: u32,
    pub radius: f64,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub lambda: Option<f64>,
    pub lambda_ratio: Option<f64>,
    pub mu: Option<f64>,
    /// Exponents as given.
    pub q: Option<String>,
    pub p: Option<String>,
    pub tol_ode: f64,
    pub tol_root: f64,
    pub grid_points: Option<usize>,
    pub alpha_min: Option<f64>,
    pub alpha_max: Option<f64>,
    pub oracle_points: usize,
    pub out: PathBuf,
    pub workers: Option<usize>,
}

fn get<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    map.get(key)
        .map(|v| v.parse::<T>().map_err(|_| Error::Config(format!("invalid value {v:?} for {key}"))))
        .transpose()
}

impl RunConfig {
    /// Merge the config file (if any) with the flags and parse every value.
    pub fn resolve(command: Command, flags: &Flags) -> Result<Self> {
        let mut map = match &flags.config {
            Some(path) => parse_config_text(&std::fs::read_to_string(path).map_err(|e| {
                Error::Config(format!("cannot read {}: {e}", path.display()))
            })?)?,
            None => BTreeMap::new(),
        };
        for (k, v) in flags.entries() {
            if let Some(v) = v {
                map.insert(k.to_string(), v.clone());
            }
        }
        if map.contains_key("lambda") && map.contains_key("lambda-ratio") {
            return Err(Error::Config("give either lambda or lambda-ratio, not both".into()));
        }
        let workers = match std::env::var(WORKERS_ENV) {
            Ok(v) => Some(v.parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(|| {
                Error::Config(format!("{WORKERS_ENV} must be a positive integer, got {v:?}"))
            })?),
            Err(_) => None,
        };
        let defaults = Tolerances::default();
        Ok(Self {
            command,
            dim: get(&map, "N")?.unwrap_or(3),
            radius: get(&map, "R")?.unwrap_or(1.0),
            a: get(&map, "a")?,
            b: get(&map, "b")?,
            lambda: get(&map, "lambda")?,
            lambda_ratio: get(&map, "lambda-ratio")?,
            mu: get(&map, "mu")?,
            q: map.get("q").cloned(),
            p: map.get("p").cloned(),
            tol_ode: get(&map, "tol-ode")?.unwrap_or(defaults.ode_rtol),
            tol_root: get(&map, "tol-root")?.unwrap_or(defaults.root_ftol),
            grid_points: get(&map, "grid-points")?,
            alpha_min: get(&map, "alpha-min")?,
            alpha_max: get(&map, "alpha-max")?,
            oracle_points: get(&map, "oracle-points")?.unwrap_or(OracleOptions::default().points),
            out: PathBuf::from(map.get("out").map(String::as_str).unwrap_or(".")),
            workers,
        })
    }

    pub fn geometry(&self) -> Result<BallGeometry> {
        BallGeometry::new(self.dim, self.radius)
    }

    pub fn tolerances(&self) -> Result<Tolerances> {
        for (name, v) in [("tol-ode", self.tol_ode), ("tol-root", self.tol_root)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Config(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        Ok(Tolerances { ode_rtol: self.tol_ode, ode_atol: 1e-2 * self.tol_ode, root_ftol: self.tol_root, ..Default::default() })
    }

    /// Exponents (q, p); p ≤ 2N/(N−2) is checked in exact arithmetic and
    /// p = 2N/(N−2) is mapped onto the floating critical exponent.
    pub fn exponents(&self) -> Result<(f64, f64)> {
        let geom = self.geometry()?;
        fn need<'a>(v: &'a Option<String>, k: &str) -> Result<&'a str> {
            v.as_deref().ok_or_else(|| Error::Config(format!("missing required parameter {k}")))
        }
        let q = parse_rational(need(&self.q, "q")?)?;
        let p = parse_rational(need(&self.p, "p")?)?;
        let n = i128::from(self.dim);
        let crit = Ratio::new(2 * n, n - 2);
        if p > crit {
            return Err(Error::InvalidParameter(format!("p = {p} exceeds 2N/(N-2) = {crit}")));
        }
        let pf = if p == crit { geom.critical_exponent() } else { ratio_to_f64(p) };
        let qf = if q == Ratio::from_integer(2) { 2.0 } else { ratio_to_f64(q) };
        Ok((qf, pf))
    }

    pub fn local_problem(&self) -> Result<LocalProblem> {
        let (q, p) = self.exponents()?;
        LocalProblem::new(self.geometry()?, q, p)
    }

    /// Full parameter set; resolves λ from `lambda-ratio` when given.
    pub fn problem(&self, consts: &SpectralConstants) -> Result<ProblemParams> {
        let need = |v: Option<f64>, k: &str| v.ok_or_else(|| Error::Config(format!("missing required parameter {k}")));
        let a = need(self.a, "a")?;
        let lambda = match (self.lambda, self.lambda_ratio) {
            (Some(l), _) => l,
            (None, Some(r)) => r * a * consts.lambda1,
            (None, None) => return Err(Error::Config("missing required parameter lambda".into())),
        };
        let (q, p) = self.exponents()?;
        ProblemParams::with_tolerances(
            a,
            need(self.b, "b")?,
            lambda,
            need(self.mu, "mu")?,
            q,
            p,
            self.geometry()?,
            self.tolerances()?,
        )
    }

    fn root_options(&self) -> RootOptions {
        let d = RootOptions::default();
        RootOptions {
            grid_points: self.grid_points.unwrap_or(d.grid_points),
            alpha_min: self.alpha_min,
            alpha_max: self.alpha_max,
            ..d
        }
    }

    fn oracle_options(&self) -> OracleOptions {
        OracleOptions { points: self.oracle_points, ..Default::default() }
    }
}

/// Configuration block of every report: the run configuration plus the
/// resolved problem parameters, when the subcommand has them.
#[derive(Debug, Serialize)]
struct Resolved<'a> {
    run: &'a RunConfig,
    params: Option<ProblemParams>,
}

/// Files written and a one-line summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

/// Process exit status for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::UnsupportedRegime(_) => 2,
        Error::InvalidParameter(_) | Error::Config(_) => 1,
        _ => 3,
    }
}

fn solver_for(problem: &LocalProblem, tol: &Tolerances) -> LocalSolver {
    LocalSolver::new(*problem, ShootingOptions::for_problem(problem, tol))
}

/// λ₀ for N = 3, q > 2, p = 2*: the forced lower end if given, else estimated.
fn lambda0(config: &RunConfig, params: &ProblemParams, solver: &LocalSolver, consts: &SpectralConstants) -> Result<Option<f64>> {
    let needed = ExponentClass::of(params) == ExponentClass::PowerCritical && params.dim() == 3;
    if !needed {
        return Ok(None);
    }
    match config.alpha_min {
        Some(a) => Ok(Some(a)),
        None => estimate_lambda0(solver, consts).map(Some),
    }
}

fn subcritical_m0(solver: &LocalSolver, consts: &SpectralConstants) -> Result<Option<f64>> {
    if solver.problem().is_critical() {
        Ok(None)
    } else {
        ground_state_level(solver, consts).map(Some)
    }
}

/// Run one resolved configuration.
pub fn execute(config: &RunConfig) -> Result<Outcome> {
    let geom = config.geometry()?;
    let consts = SpectralConstants::new(&geom)?;
    let out = &config.out;
    let path = |name: &str| out.join(name);
    match config.command {
        Command::Constants => {
            #[derive(Serialize)]
            struct ConstantsResult {
                geometry: BallGeometry,
                critical_exponent: f64,
                constants: SpectralConstants,
            }
            let result = ConstantsResult { geometry: geom, critical_exponent: geom.critical_exponent(), constants: consts };
            let file = path("constants.json");
            write_report(&file, "constants", &Resolved { run: config, params: None }, &result)?;
            Ok(Outcome { files: vec![file], summary: format!("lambda1 = {}, S = {}", consts.lambda1, consts.sobolev_s) })
        }
        Command::Classify => {
            let params = config.problem(&consts)?;
            let solver = LocalSolver::for_params(&params);
            let m0 = subcritical_m0(&solver, &consts)?;
            let l0 = lambda0(config, &params, &solver, &consts)?;
            let prediction = classify(&params, &consts, m0, l0)?;
            let file = path("report.json");
            write_report(&file, "classify", &Resolved { run: config, params: Some(params) }, &prediction)?;
            Ok(Outcome {
                files: vec![file],
                summary: format!("{:?}: at least {} solution(s)", prediction.case, prediction.guaranteed_count),
            })
        }
        Command::Solve => {
            let params = config.problem(&consts)?;
            let solver = LocalSolver::for_params(&params);
            let m0 = subcritical_m0(&solver, &consts)?;
            let l0 = lambda0(config, &params, &solver, &consts)?;
            let prediction = classify(&params, &consts, m0, l0)?;
            let descriptor = CaseDescriptor::new(&params, &consts, l0)?;
            let report = find_roots(&solver, &params, &consts, &descriptor, Some(&prediction), &config.root_options())?;
            let mut files = Vec::new();
            for (i, sol) in report.solutions.iter().enumerate() {
                let f = path(&format!("profile_{i}.csv"));
                write_atomic(&f, profile_csv(&sol.profile)?.as_bytes())?;
                files.push(f);
            }
            let file = path("report.json");
            write_report(&file, "solve", &Resolved { run: config, params: Some(params) }, &report)?;
            files.insert(0, file);
            if report.agreement == Some(false) {
                warn!("found {} root(s), fewer than the {} guaranteed", report.numeric_count, prediction.guaranteed_count);
            }
            Ok(Outcome {
                files,
                summary: format!(
                    "{:?}: {} root(s) found, {} guaranteed",
                    prediction.case, report.numeric_count, prediction.guaranteed_count
                ),
            })
        }
        Command::Scan => {
            let params = config.problem(&consts)?;
            let solver = LocalSolver::for_params(&params);
            let l0 = lambda0(config, &params, &solver, &consts)?;
            let descriptor = CaseDescriptor::new(&params, &consts, l0)?;
            let scan = scan_f(&solver, &params, &consts, &descriptor, None, &config.root_options())?;
            let file = path("fscan.csv");
            write_atomic(&file, fscan_csv(&scan.samples)?.as_bytes())?;
            let gaps = scan.samples.iter().filter(|s| s.f.is_none()).count();
            Ok(Outcome {
                files: vec![file],
                summary: format!("{} samples on [{:e}, {:e}], {gaps} gap(s)", scan.samples.len(), scan.range.0, scan.range.1),
            })
        }
        Command::Limits => {
            let problem = config.local_problem()?;
            let tol = config.tolerances()?;
            let solver = solver_for(&problem, &tol);
            let m0 = if problem.is_critical() {
                None
            } else {
                let r = minimize_nehari(&problem, 0.0, &config.oracle_options())?;
                info!("ground-state level from the finite-difference minimiser: {}", r.m_alpha);
                Some(r.m_alpha)
            };
            let report = verify_limits(&solver, &consts, m0, &LimitOptions::default())?;
            let file = path("limits.json");
            write_report(&file, "limits", &Resolved { run: config, params: None }, &report)?;
            let passed = report.checks.iter().filter(|c| c.passed).count();
            Ok(Outcome { files: vec![file], summary: format!("{passed} of {} limit checks passed", report.checks.len()) })
        }
        Command::Oracle => {
            let problem = config.local_problem()?;
            let tol = config.tolerances()?;
            let solver = solver_for(&problem, &tol);
            let count = config.grid_points.unwrap_or(10).max(1);
            let lo = config.alpha_min.unwrap_or(0.1 * consts.lambda1);
            let hi = config.alpha_max.unwrap_or(0.9 * consts.lambda1);
            let alphas: Vec<f64> = if count == 1 {
                vec![lo]
            } else {
                (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
            };
            let rows = oracle_compare(&solver, &alphas, &config.oracle_options());
            let file = path("oracle.csv");
            write_atomic(&file, oracle_csv(&rows)?.as_bytes())?;
            let flagged = rows.iter().filter(|r| r.flagged).count();
            Ok(Outcome { files: vec![file], summary: format!("{} rows, {flagged} flagged", rows.len()) })
        }
    }
}

fn init_workers(workers: Option<usize>) {
    if let Some(n) = workers {
        // the global pool can be set once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Parse arguments, run, print the outcome; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = RunConfig::resolve(cli.command, &cli.flags).and_then(|config| {
        init_workers(config.workers);
        execute(&config)
    });
    match result {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Convenience for callers holding a directory and arguments.
pub fn run_in<S: AsRef<str>>(out: &Path, args: &[S]) -> i32 {
    let mut full: Vec<String> = vec!["kirchhoff".into()];
    full.extend(args.iter().map(|s| s.as_ref().to_string()));
    full.push("--out".into());
    full.push(out.display().to_string());
    run(full)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_exact() {
        assert_eq!(parse_rational("10/3").unwrap(), Ratio::new(10, 3));
        assert_eq!(parse_rational("4.5").unwrap(), Ratio::new(9, 2));
        assert_eq!(parse_rational("6").unwrap(), Ratio::from_integer(6));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn config_text() {
        let m = parse_config_text("# run\na = 1\n p = 10/3 # critical for N = 5\n\n").unwrap();
        assert_eq!(m["a"], "1");
        assert_eq!(m["p"], "10/3");
        assert!(matches!(parse_config_text("zeta = 1"), Err(Error::Config(_))));
        assert!(matches!(parse_config_text("a 1"), Err(Error::Config(_))));
    }

    fn config(dim: &str, q: &str, p: &str) -> RunConfig {
        let flags = Flags { n: Some(dim.into()), q: Some(q.into()), p: Some(p.into()), ..Default::default() };
        RunConfig::resolve(Command::Constants, &flags).unwrap()
    }

    #[test]
    fn critical_exponent_check_is_exact() {
        let (_, p) = config("5", "2", "10/3").exponents().unwrap();
        assert_eq!(p, BallGeometry::new(5, 1.0).unwrap().critical_exponent());
        assert!(config("5", "2", "3.3333333333333334").exponents().is_err());
        assert!(config("3", "2", "6.000000000001").exponents().is_err());
        assert!(config("3", "2", "5.99").exponents().is_ok());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("run.cfg");
        std::fs::write(&file, "a = 2\nb = 3\nN = 4\n").unwrap();
        let flags = Flags { config: Some(file), b: Some("5".into()), ..Default::default() };
        let c = RunConfig::resolve(Command::Solve, &flags).unwrap();
        assert_eq!((c.a, c.b, c.dim), (Some(2.0), Some(5.0), 4));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::UnsupportedRegime(String::new())), 2);
        assert_eq!(exit_code(&Error::Config(String::new())), 1);
        assert_eq!(exit_code(&Error::ConvergenceNotReached(String::new())), 3);
        assert_eq!(run(["kirchhoff", "frobnicate"]), 1);
    }
}
