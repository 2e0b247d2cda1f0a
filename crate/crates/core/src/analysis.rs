//! Sweeps of f(α) over the admissible interval: sampling, root location,
//! endpoint limits of D(α) and the a-priori bound on D(α).

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::SpectralConstants;
use crate::error::{Error, Result};
use crate::params::ProblemParams;
use crate::regime::{AlphaInterval, CaseDescriptor, ExponentClass, RegimePrediction};
use crate::roots::{brent, Termination};
use crate::scaling::{f_eval, reconstruct, KirchhoffSolution, SolutionSummary};
use crate::shooting::LocalSolver;

/// One evaluation of f; `gap` holds the failure when D(α) is unavailable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FSample {
    pub alpha: f64,
    pub dirichlet: Option<f64>,
    pub f: Option<f64>,
    pub local_energy: Option<f64>,
    pub gap: Option<String>,
}

impl FSample {
    /// f − 1 when available.
    pub fn excess(&self) -> Option<f64> {
        self.f.map(|f| f - 1.0)
    }
}

fn check_solver(solver: &LocalSolver, params: &ProblemParams) -> Result<()> {
    if *solver.problem() != params.local() {
        return Err(Error::InvalidParameter("solver was built for a different local problem".into()));
    }
    Ok(())
}

/// Energy level above which a critical-exponent solution is rejected as
/// outside the compactness range I_α < S^{N/2}/N (small relative slack).
pub fn compactness_cap(params: &ProblemParams, consts: &SpectralConstants) -> Option<f64> {
    params.is_critical().then(|| {
        let n = params.dim() as f64;
        consts.sobolev_s.powf(n / 2.0) / n * (1.0 + 1e-6)
    })
}

fn sample_one(solver: &LocalSolver, params: &ProblemParams, alpha: f64, energy_cap: Option<f64>) -> FSample {
    let mut s = FSample { alpha, dirichlet: None, f: None, local_energy: None, gap: None };
    match solver.solve(alpha) {
        Ok(sol) => {
            s.dirichlet = Some(sol.dirichlet_energy);
            s.local_energy = Some(sol.local_energy);
            if let Some(cap) = energy_cap.filter(|&cap| sol.local_energy >= cap) {
                s.gap = Some(format!("energy {} above the compactness level {cap}", sol.local_energy));
                return s;
            }
            match f_eval(alpha, sol.dirichlet_energy, params) {
                Ok(f) => s.f = Some(f),
                Err(e) => s.gap = Some(e.to_string()),
            }
        }
        Err(e) => s.gap = Some(e.to_string()),
    }
    s
}

/// Evaluate D(α) and f(α) on `grid` in parallel; failures become gaps.
pub fn sample_f(
    solver: &LocalSolver,
    params: &ProblemParams,
    grid: &[f64],
    energy_cap: Option<f64>,
) -> Result<Vec<FSample>> {
    check_solver(solver, params)?;
    Ok(grid.par_iter().map(|&a| sample_one(solver, params, a, energy_cap)).collect())
}

/// `count` points geometrically spaced from `lo` to `hi`, both included.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect()
}

/// Grid on a bounded interval, geometric in the distance to each end:
/// half the points between `lower + gap_lo·L` and the midpoint, the other
/// half between the midpoint and `upper − gap_hi·L`.
pub fn two_sided_grid(interval: AlphaInterval, gap_lo: f64, gap_hi: f64, count: usize) -> Vec<f64> {
    let len = interval.upper - interval.lower;
    let left = count / 2;
    let right = count - left;
    let mut grid: Vec<f64> = geometric_grid(gap_lo, 0.5, left.max(2))
        .into_iter()
        .map(|x| interval.lower + len * x)
        .chain(geometric_grid(gap_hi, 0.5, right.max(2)).into_iter().map(|y| interval.upper - len * y))
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs());
    grid
}

/// Settings of [`find_roots`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootOptions {
    pub grid_points: usize,
    /// Forced lower end of the scanned α-range.
    pub alpha_min: Option<f64>,
    /// Forced upper end of the scanned α-range.
    pub alpha_max: Option<f64>,
    /// Relative distance kept from finite interval ends.
    pub endpoint_gap: f64,
    /// Number of extensions of the scan range toward an end where f crosses 1.
    pub max_extensions: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self { grid_points: 200, alpha_min: None, alpha_max: None, endpoint_gap: 1e-4, max_extensions: 8 }
    }
}

/// A root α of f(α) = 1 with its bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    pub alpha: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    /// |f(α) − 1|.
    pub f_deviation: f64,
}

/// Roots on either side of the interior probe point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub alpha: f64,
    pub f: Option<f64>,
    pub roots_below: usize,
    pub roots_above: usize,
}

impl ProbeReport {
    /// The probe has f < 1 and at least one root on each side.
    pub fn separates(&self) -> bool {
        self.f.is_some_and(|f| f < 1.0) && self.roots_below >= 1 && self.roots_above >= 1
    }
}

/// All roots of f(α) = 1 found on the scanned range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootReport {
    pub descriptor: CaseDescriptor,
    pub prediction: Option<RegimePrediction>,
    /// Scanned range [alpha_min, alpha_max].
    pub scan_range: (f64, f64),
    pub samples: Vec<FSample>,
    pub roots: Vec<RootRecord>,
    pub summaries: Vec<SolutionSummary>,
    #[serde(skip)]
    pub solutions: Vec<KirchhoffSolution>,
    pub numeric_count: usize,
    /// numeric_count ≥ guaranteed count, when a prediction is available.
    pub agreement: Option<bool>,
    pub probe: Option<ProbeReport>,
    pub warnings: Vec<String>,
}

fn f_at(solver: &LocalSolver, params: &ProblemParams, alpha: f64) -> Result<f64> {
    f_eval(alpha, solver.dirichlet_energy(alpha)?, params)
}

/// Exponent e of the small-α behaviour f ≈ Cα^e, e = (p−4)/(p−q), and the
/// value of f to aim for when extending toward 0 (below 1 for p > 4, where
/// f → 0; above 1 for p < 4, where f → +∞). None when p = 4 or b = 0.
fn lower_end_law(params: &ProblemParams, descriptor: &CaseDescriptor) -> Option<(f64, f64)> {
    if descriptor.interval.lower != 0.0 || params.b == 0.0 || params.p == 4.0 {
        return None;
    }
    let e = (params.p - 4.0) / (params.p - params.q);
    Some((e, if e > 0.0 { 0.5 } else { 2.0 }))
}

/// Smallest lower scan end.
const ALPHA_FLOOR: f64 = 1e-300;

/// Move `end` with `next(end, f(end))` until f − 1 has the sign `above`.
fn extend(
    solver: &LocalSolver,
    params: &ProblemParams,
    mut end: f64,
    above: bool,
    max_extensions: usize,
    next: impl Fn(f64, f64) -> f64,
    warnings: &mut Vec<String>,
) -> f64 {
    for _ in 0..max_extensions {
        match f_at(solver, params, end) {
            Ok(f) if (f > 1.0) == above => break,
            Ok(f) => end = next(end, f),
            Err(e) => {
                warnings.push(format!("scan end {end}: {e}"));
                break;
            }
        }
    }
    end
}

/// Choose the scanned range, pushing toward ends where f → +∞ until f > 1.
fn scan_range(
    solver: &LocalSolver,
    params: &ProblemParams,
    consts: &SpectralConstants,
    descriptor: &CaseDescriptor,
    opts: &RootOptions,
    warnings: &mut Vec<String>,
) -> (f64, f64) {
    let interval = descriptor.interval;
    let unit = if interval.is_bounded() { interval.upper - interval.lower } else { consts.lambda1 };
    let mut lo = opts.alpha_min.unwrap_or(interval.lower + opts.endpoint_gap * unit);
    let mut hi = opts
        .alpha_max
        .unwrap_or(if interval.is_bounded() { interval.upper - opts.endpoint_gap * unit } else { 16.0 * unit });

    if opts.alpha_min.is_none() {
        if let Some((e, target)) = lower_end_law(params, descriptor) {
            // jump along the power law, at least by 1e-2
            let next = |a: f64, f: f64| (a * (target / f).powf(1.0 / e)).min(1e-2 * a).max(ALPHA_FLOOR);
            lo = extend(solver, params, lo, target > 1.0, opts.max_extensions, next, warnings);
        }
    }
    if opts.alpha_max.is_none() && descriptor.f_unbounded_above {
        hi = extend(solver, params, hi, true, opts.max_extensions, |a, _| 10.0 * a, warnings);
    }
    (lo, hi)
}

fn build_grid(descriptor: &CaseDescriptor, lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let interval = descriptor.interval;
    if interval.is_bounded() {
        let len = interval.upper - interval.lower;
        let gap_lo = ((lo - interval.lower) / len).clamp(1e-300, 0.5);
        let gap_hi = ((interval.upper - hi) / len).clamp(1e-300, 0.5);
        two_sided_grid(interval, gap_lo, gap_hi, count)
    } else {
        let base = interval.lower;
        geometric_grid(lo - base, hi - base, count).into_iter().map(|t| base + t).collect()
    }
}

/// Samples of f over the scanned range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FScan {
    /// Scanned range [alpha_min, alpha_max].
    pub range: (f64, f64),
    pub samples: Vec<FSample>,
    pub warnings: Vec<String>,
}

/// Sample f on the scan grid of `descriptor`'s interval, with `probe`
/// inserted when it lies inside the scanned range.
pub fn scan_f(
    solver: &LocalSolver,
    params: &ProblemParams,
    consts: &SpectralConstants,
    descriptor: &CaseDescriptor,
    probe: Option<f64>,
    opts: &RootOptions,
) -> Result<FScan> {
    check_solver(solver, params)?;
    if opts.grid_points < 2 {
        return Err(Error::InvalidParameter("grid needs at least two points".into()));
    }
    let mut warnings = Vec::new();
    let (lo, hi) = scan_range(solver, params, consts, descriptor, opts, &mut warnings);
    if !(lo < hi && lo >= descriptor.interval.lower && hi <= descriptor.interval.upper) {
        return Err(Error::InvalidParameter(format!(
            "scan range [{lo}, {hi}] is not inside the admissible interval ({}, {})",
            descriptor.interval.lower, descriptor.interval.upper
        )));
    }
    let mut grid = build_grid(descriptor, lo, hi, opts.grid_points);
    if let Some(a) = probe.filter(|&a| a > lo && a < hi) {
        grid.push(a);
        grid.sort_by(f64::total_cmp);
    }
    let samples = sample_f(solver, params, &grid, compactness_cap(params, consts))?;
    let gaps = samples.iter().filter(|s| s.f.is_none()).count();
    if gaps > 0 {
        info!("{gaps} of {} samples unavailable", samples.len());
    }
    Ok(FScan { range: (lo, hi), samples, warnings })
}

/// Scan f − 1 over the admissible interval, bisect every sign change and
/// reconstruct a Kirchhoff solution per root.
pub fn find_roots(
    solver: &LocalSolver,
    params: &ProblemParams,
    consts: &SpectralConstants,
    descriptor: &CaseDescriptor,
    prediction: Option<&RegimePrediction>,
    opts: &RootOptions,
) -> Result<RootReport> {
    let probe = prediction.and_then(|p| p.probe_alpha);
    let FScan { range: (lo, hi), samples, mut warnings } = scan_f(solver, params, consts, descriptor, probe, opts)?;
    let probe_alpha = probe.filter(|&a| a > lo && a < hi);

    let valid: Vec<&FSample> = samples.iter().filter(|s| s.f.is_some()).collect();
    let brackets: Vec<(f64, f64)> = valid
        .windows(2)
        .filter(|w| {
            let (e0, e1) = (w[0].excess().unwrap(), w[1].excess().unwrap());
            e0 != 0.0 && (e0 > 0.0) != (e1 > 0.0)
        })
        .map(|w| (w[0].alpha, w[1].alpha))
        .collect();
    let exact: Vec<f64> = valid.iter().filter(|s| s.excess() == Some(0.0)).map(|s| s.alpha).collect();

    let term = Termination {
        ftol: params.tol.root_ftol,
        xtol_rel: 1e-15,
        xtol_abs: 0.0,
        max_iter: 100,
    };
    let found: Vec<Result<(RootRecord, Option<String>)>> = brackets
        .par_iter()
        .map(|&(a, b)| {
            let r = brent(|x| Ok(f_at(solver, params, x)? - 1.0), a, b, term)?;
            let record = RootRecord {
                alpha: r.root,
                bracket: (a, b),
                iterations: r.iterations,
                f_deviation: r.value.abs(),
            };
            Ok((record, coarse_grid_check(solver, params, &record)))
        })
        .collect();

    let mut roots = Vec::new();
    for (res, br) in found.into_iter().zip(&brackets) {
        match res {
            Ok((rec, note)) => {
                if let Some(n) = note {
                    warnings.push(n);
                }
                roots.push(rec);
            }
            Err(e) => warnings.push(format!("root refinement failed in [{}, {}]: {e}", br.0, br.1)),
        }
    }
    for a in exact {
        roots.push(RootRecord { alpha: a, bracket: (a, a), iterations: 0, f_deviation: 0.0 });
    }
    roots.sort_by(|x, y| x.alpha.total_cmp(&y.alpha));

    let mut solutions = Vec::new();
    let mut certified = Vec::new();
    for rec in roots {
        match solver.solve(rec.alpha).and_then(|local| reconstruct(&local, params)) {
            Ok(sol) => {
                solutions.push(sol);
                certified.push(rec);
            }
            Err(e) => warnings.push(format!("root at alpha = {} not certified: {e}", rec.alpha)),
        }
    }
    for w in &warnings {
        warn!("{w}");
    }

    let numeric_count = certified.len();
    let probe = probe_alpha.map(|a| ProbeReport {
        alpha: a,
        f: f_at(solver, params, a).ok(),
        roots_below: certified.iter().filter(|r| r.alpha < a).count(),
        roots_above: certified.iter().filter(|r| r.alpha > a).count(),
    });
    Ok(RootReport {
        descriptor: descriptor.clone(),
        prediction: prediction.cloned(),
        scan_range: (lo, hi),
        samples,
        roots: certified,
        summaries: solutions.iter().map(KirchhoffSolution::summary).collect(),
        solutions,
        numeric_count,
        agreement: prediction.map(|p| numeric_count >= p.guaranteed_count as usize),
        probe,
        warnings,
    })
}

/// Sample the two half-brackets around a root; extra sign changes mean
/// the scan grid merged several roots.
fn coarse_grid_check(solver: &LocalSolver, params: &ProblemParams, rec: &RootRecord) -> Option<String> {
    let (a, b) = rec.bracket;
    let sign = |x: f64| f_at(solver, params, x).ok().map(|f| f > 1.0);
    let (sa, sb) = (sign(a)?, sign(b)?);
    let (ml, mr) = (sign(0.5 * (a + rec.alpha))?, sign(0.5 * (rec.alpha + b))?);
    (ml != sa || mr != sb).then(|| {
        format!("grid too coarse: f - 1 changes sign more than once in [{a}, {b}]; refine the grid")
    })
}

/// Which end of the admissible interval a limit refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Endpoint {
    /// α ↑ λ₁.
    FirstEigenvalue,
    /// α ↓ 0.
    Zero,
    /// α ↓ λ₁/4.
    QuarterEigenvalue,
}

impl Endpoint {
    /// k-th point of the approach sequence, at distance 2^{−k} (relative).
    pub fn approach(self, lambda1: f64, k: i32) -> f64 {
        let h = 2f64.powi(-k);
        match self {
            Self::FirstEigenvalue => lambda1 * (1.0 - h),
            Self::Zero => lambda1 * h,
            Self::QuarterEigenvalue => 0.25 * lambda1 + 0.75 * lambda1 * h,
        }
    }
}

/// Measured versus predicted limit of D(α) at one endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitCheck {
    pub endpoint: Endpoint,
    pub alphas: Vec<f64>,
    pub energies: Vec<Option<f64>>,
    pub extrapolated: Option<f64>,
    pub predicted: f64,
    /// Normalisation of the error (the predicted value, or a reference D for a zero limit).
    pub scale: f64,
    /// |extrapolated − predicted|/scale.
    pub error: Option<f64>,
    pub tolerance: f64,
    /// Successive extrapolants agree to within tolerance·scale.
    pub converged: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub class: ExponentClass,
    pub checks: Vec<LimitCheck>,
}

impl LimitReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Exponents k of the approach points 2^{−k}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitOptions {
    pub k_min: i32,
    pub k_max: i32,
}

impl Default for LimitOptions {
    fn default() -> Self {
        Self { k_min: 4, k_max: 12 }
    }
}

/// Aitken Δ² on the last three values of a sequence.
pub fn aitken(x: &[f64]) -> Option<f64> {
    if x.len() < 3 {
        return None;
    }
    let n = x.len();
    let (x0, x1, x2) = (x[n - 3], x[n - 2], x[n - 1]);
    let d1 = x1 - x0;
    let d2 = x2 - x1;
    let denom = d2 - d1;
    // no acceleration when differences do not shrink geometrically
    if denom.abs() <= 1e-14 * x2.abs().max(1e-300) || d2 * d1 <= 0.0 || d2.abs() >= d1.abs() {
        return Some(x2);
    }
    Some(x2 - d2 * d2 / denom)
}

fn limit_check(
    solver: &LocalSolver,
    consts: &SpectralConstants,
    endpoint: Endpoint,
    predicted: f64,
    scale: f64,
    tolerance: f64,
    opts: &LimitOptions,
) -> LimitCheck {
    let alphas: Vec<f64> = (opts.k_min..=opts.k_max).map(|k| endpoint.approach(consts.lambda1, k)).collect();
    let energies: Vec<Option<f64>> = alphas.par_iter().map(|&a| solver.dirichlet_energy(a).ok()).collect();
    let valid: Vec<f64> = energies.iter().flatten().copied().collect();
    let extrapolated = aitken(&valid);
    let error = extrapolated.map(|e| (e - predicted).abs() / scale);
    // successive extrapolants must agree; with three points only, the
    // extrapolant is compared with the last value
    let previous = if valid.len() >= 4 { aitken(&valid[..valid.len() - 1]) } else { valid.last().copied() };
    let converged = match (extrapolated, previous) {
        (Some(e), Some(prev)) => (e - prev).abs() <= tolerance * scale,
        _ => false,
    };
    LimitCheck {
        endpoint,
        alphas,
        energies,
        extrapolated,
        predicted,
        scale,
        error,
        tolerance,
        converged,
        passed: converged && error.is_some_and(|e| e <= tolerance),
    }
}

/// Extrapolate D(α) toward each endpoint of the admissible interval with a
/// known limit and compare with the predicted value. `m0` defaults to the
/// shooting value at α = 0 for subcritical p.
pub fn verify_limits(
    solver: &LocalSolver,
    consts: &SpectralConstants,
    m0: Option<f64>,
    opts: &LimitOptions,
) -> Result<LimitReport> {
    let problem = *solver.problem();
    let (q, p) = (problem.q, problem.p);
    let n = problem.dim();
    let nf = n as f64;
    let class = match (q == 2.0, problem.is_critical()) {
        (true, false) => ExponentClass::LinearSubcritical,
        (false, false) => ExponentClass::PowerSubcritical,
        (true, true) => ExponentClass::LinearCritical,
        (false, true) => ExponentClass::PowerCritical,
    };
    let s_half = consts.sobolev_s.powf(nf / 2.0);
    let mut checks = Vec::new();
    if class.is_critical() {
        let below = if n == 3 { Endpoint::QuarterEigenvalue } else { Endpoint::Zero };
        if class == ExponentClass::LinearCritical || n >= 4 {
            checks.push(limit_check(solver, consts, below, s_half, s_half, 0.05, opts));
        }
        if class == ExponentClass::LinearCritical {
            checks.push(limit_check(solver, consts, Endpoint::FirstEigenvalue, 0.0, s_half, 0.02, opts));
        }
    } else {
        let m0 = match m0 {
            Some(m) => m,
            None => (0.5 - 1.0 / p) * solver.dirichlet_energy(0.0)?,
        };
        let ground = 2.0 * p / (p - 2.0) * m0;
        checks.push(limit_check(solver, consts, Endpoint::Zero, ground, ground, 0.01, opts));
        if class == ExponentClass::LinearSubcritical {
            let reference = solver.dirichlet_energy(0.5 * consts.lambda1)?;
            checks.push(limit_check(solver, consts, Endpoint::FirstEigenvalue, 0.0, reference, 0.01, opts));
        }
    }
    if let Some(bad) = checks.iter().find(|c| !c.converged) {
        return Err(Error::ConvergenceNotReached(format!(
            "{:?} limit: extrapolation {:?} not settled within {} (values {:?})",
            bad.endpoint, bad.extrapolated, bad.tolerance, bad.energies
        )));
    }
    Ok(LimitReport { class, checks })
}

/// D(α) against the Hölder bound at one α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderPoint {
    pub alpha: f64,
    pub dirichlet: Option<f64>,
    /// bound − D(α).
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderCheck {
    pub bound: f64,
    /// Relative slack allowed above the bound.
    pub slack: f64,
    pub points: Vec<HolderPoint>,
    pub all_hold: bool,
    pub worst_margin: f64,
}

/// The bound λ₁|B|^{(p−2)/p}((2p/(p−2))m₀)^{2/p} + (2p/(p−2))m₀ on D(α), α ∈ (0, λ₁).
pub fn holder_bound(p: f64, m0: f64, consts: &SpectralConstants) -> f64 {
    let ground = 2.0 * p / (p - 2.0) * m0;
    consts.lambda1 * consts.ball_volume.powf((p - 2.0) / p) * ground.powf(2.0 / p) + ground
}

/// Check D(α) ≤ (1 + 1%)·bound on `grid`, for q = 2 and p < 2*.
pub fn holder_bound_check(
    solver: &LocalSolver,
    consts: &SpectralConstants,
    m0: f64,
    grid: &[f64],
) -> Result<HolderCheck> {
    let problem = solver.problem();
    if !(problem.q == 2.0 && !problem.is_critical()) {
        return Err(Error::InvalidParameter("the Hölder bound applies to q = 2, p < 2*".into()));
    }
    let bound = holder_bound(problem.p, m0, consts);
    let slack = 0.01;
    let points: Vec<HolderPoint> = grid
        .par_iter()
        .map(|&alpha| {
            let d = solver.dirichlet_energy(alpha).ok();
            HolderPoint { alpha, dirichlet: d, margin: d.map(|d| bound - d) }
        })
        .collect();
    let all_hold = points.iter().all(|p| p.dirichlet.is_some_and(|d| d <= (1.0 + slack) * bound));
    let worst_margin = points.iter().filter_map(|p| p.margin).fold(f64::INFINITY, f64::min);
    Ok(HolderCheck { bound, slack, points, all_hold, worst_margin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::BallGeometry;
    use crate::regime::classify;

    fn setup(n: u32, a: f64, b: f64, lambda: f64, mu: f64, q: f64, p: f64) -> (ProblemParams, SpectralConstants, LocalSolver) {
        let g = BallGeometry::new(n, 1.0).unwrap();
        let c = SpectralConstants::new(&g).unwrap();
        let pr = ProblemParams::new(a, b, lambda, mu, q, p, g).unwrap();
        let s = LocalSolver::for_params(&pr);
        (pr, c, s)
    }

    #[test]
    fn grids_are_sorted_and_inside() {
        let i = AlphaInterval { lower: 0.0, upper: 10.0 };
        let g = two_sided_grid(i, 1e-4, 1e-4, 50);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g.iter().all(|&a| i.contains(a)));
        assert!((g[0] - 1e-3).abs() < 1e-15 && (g.last().unwrap() - (10.0 - 1e-3)).abs() < 1e-12);
        let g = geometric_grid(1.0, 100.0, 3);
        assert!((g[1] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn aitken_geometric_sequence() {
        let x: Vec<f64> = (0..5).map(|k| 3.0 + 0.5f64.powi(k)).collect();
        assert!((aitken(&x).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(aitken(&x[..2]), None);
    }

    #[test]
    fn near_local_limit_single_root() {
        // b → 0: f ≈ aα/λ, single root at α = λ/a = 3
        let (pr, c, s) = setup(3, 1.0, 1e-12, 3.0, 1.0, 2.0, 4.0);
        let d = CaseDescriptor::new(&pr, &c, None).unwrap();
        let opts = RootOptions { grid_points: 40, ..Default::default() };
        let rep = find_roots(&s, &pr, &c, &d, None, &opts).unwrap();
        assert_eq!(rep.numeric_count, 1, "{:?}", rep.roots);
        assert!((rep.roots[0].alpha - 3.0).abs() < 1e-6);
        assert!(rep.solutions[0].residual <= 1e-6);
    }

    #[test]
    fn root_far_below_the_default_scan_end() {
        // p slightly above 4: f decays like α^{0.05/2.05}, root near 1e-60
        let (pr, c, s) = setup(3, 1.0, 1.0, 5.0, 1.0, 2.0, 4.05);
        let d = CaseDescriptor::new(&pr, &c, None).unwrap();
        let opts = RootOptions { grid_points: 60, ..Default::default() };
        let rep = find_roots(&s, &pr, &c, &d, None, &opts).unwrap();
        assert_eq!(rep.numeric_count, 1, "{:?} {:?}", rep.scan_range, rep.warnings);
        assert!(rep.roots[0].alpha < 1e-20);
        assert!(rep.solutions[0].residual <= 1e-6);
    }

    #[test]
    fn quartic_f_approaches_eigenvalue_ratio() {
        // p = 4: f = aα/λ + bD/μ and D vanishes linearly as α ↑ λ₁
        let (pr, c, s) = setup(3, 1.0, 1.0, 5.0, 1.0, 2.0, 4.0);
        let grid = [c.lambda1 * (1.0 - 2e-3), c.lambda1 * (1.0 - 1e-3)];
        let out = sample_f(&s, &pr, &grid, None).unwrap();
        let (d1, d2) = (out[0].dirichlet.unwrap(), out[1].dirichlet.unwrap());
        assert!((d2 / d1 - 0.5).abs() < 1e-2, "{d1} {d2}");
        let f = out[1].f.unwrap();
        assert!((f - grid[1] / pr.lambda - d2).abs() < 1e-12);
    }

    #[test]
    fn subquartic_f_blows_up_at_zero() {
        let (pr, c, s) = setup(3, 1.0, 1.0, 5.0, 1.0, 2.0, 3.0);
        let f = sample_f(&s, &pr, &[1e-4 * c.lambda1], None).unwrap()[0].f.unwrap();
        assert!(f > 10.0, "{f}");
    }

    #[test]
    fn gaps_beyond_the_eigenvalue() {
        let (pr, c, s) = setup(3, 1.0, 1.0, 5.0, 1.0, 2.0, 4.0);
        let out = sample_f(&s, &pr, &[0.5 * c.lambda1, 1.2 * c.lambda1], None).unwrap();
        assert!(out[0].f.is_some() && out[1].gap.is_some());
    }

    #[test]
    fn above_resonance_quartic_has_root() {
        let (mut pr, c, s) = setup(3, 1.0, 1.0, 1.0, 1.0, 2.0, 4.0);
        let m0 = crate::regime::ground_state_level(&s, &c).unwrap();
        pr.lambda = 2.0 * c.lambda1;
        // 4·m0·b/μ = 2
        pr.b = 0.5 / m0;
        let pred = classify(&pr, &c, Some(m0), None).unwrap();
        let d = CaseDescriptor::new(&pr, &c, None).unwrap();
        let opts = RootOptions { grid_points: 60, ..Default::default() };
        let rep = find_roots(&s, &pr, &c, &d, Some(&pred), &opts).unwrap();
        assert_eq!(rep.agreement, Some(true));
        for r in &rep.roots {
            assert!(r.f_deviation <= 1e-8);
        }
    }

    #[test]
    fn holder_margin_grows_toward_eigenvalue() {
        let (_, c, s) = setup(3, 1.0, 1.0, 1.0, 1.0, 2.0, 4.0);
        let m0 = crate::regime::ground_state_level(&s, &c).unwrap();
        let chk = holder_bound_check(&s, &c, m0, &[0.3 * c.lambda1, 0.9 * c.lambda1]).unwrap();
        assert!(chk.all_hold);
        assert!(chk.points[1].margin.unwrap() > chk.points[0].margin.unwrap());
        assert!(chk.worst_margin > 0.0);
    }
}
