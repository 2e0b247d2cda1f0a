//! Radial shooting for the local problem −Δu = αu^{q−1} + u^{p−1} on the
//! ball, written as u″ + ((N−1)/r)u′ + αu^{q−1} + u^{p−1} = 0 with
//! u(0) = β, u′(0) = 0.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use log::{debug, info, warn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{Dopri5, State};
use crate::params::{LocalProblem, ProblemParams, Tolerances};
use crate::profile::{dirichlet_energy, hermite_value, lp_norm_pow, RadialProfile};
use crate::roots::{brent, Termination};

/// Right-hand side `c_q·u^{q−1} + c_p·u^{p−1}`, extended oddly to u < 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Nonlinearity {
    pub linear_coeff: f64,
    pub q: f64,
    pub power_coeff: f64,
    pub p: f64,
}

impl Nonlinearity {
    /// Nonlinearity of the local problem at parameter α.
    pub fn local(alpha: f64, q: f64, p: f64) -> Self {
        Self { linear_coeff: alpha, q, power_coeff: 1.0, p }
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.linear_coeff * signed_pow(u, self.q - 1.0) + self.power_coeff * signed_pow(u, self.p - 1.0)
    }

    /// 1 + |c_q u^{q−1}| + |c_p u^{p−1}|, the residual normalization.
    pub fn magnitude(&self, u: f64) -> f64 {
        1.0 + (self.linear_coeff * signed_pow(u, self.q - 1.0)).abs()
            + (self.power_coeff * signed_pow(u, self.p - 1.0)).abs()
    }
}

fn signed_pow(u: f64, e: f64) -> f64 {
    if e == 1.0 {
        u
    } else if e == 2.0 {
        u * u.abs()
    } else if e == 3.0 {
        u * u * u
    } else {
        u.signum() * u.abs().powf(e)
    }
}

/// Settings of a single shot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Radius at which a shot without a zero is abandoned.
    pub r_max: f64,
    /// Reference length for the start offset and maximum step.
    pub length_scale: f64,
    /// Series start at h = start_fraction·length_scale (or smaller for steep data).
    pub start_fraction: f64,
    /// Bound on |u|, |u′| beyond which the shot is declared a blowup.
    pub blowup_bound: f64,
    pub max_steps: usize,
}

impl ShotOptions {
    pub fn new(radius: f64, tol: &Tolerances) -> Self {
        Self {
            rtol: tol.ode_rtol,
            atol: tol.ode_atol,
            r_max: 4.0 * radius,
            length_scale: radius,
            start_fraction: 1e-6,
            blowup_bound: 1e200,
            max_steps: 1_000_000,
        }
    }
}

/// Result of integrating from the center.
#[derive(Debug, Clone, PartialEq)]
pub enum ShotOutcome {
    FirstZero { r0: f64, profile: RadialProfile },
    NoZero { reached: f64 },
}

impl ShotOutcome {
    /// First-zero radius, or the abandoned radius when no zero was met.
    pub fn radius(&self) -> f64 {
        match self {
            ShotOutcome::FirstZero { r0, .. } => *r0,
            ShotOutcome::NoZero { reached } => *reached,
        }
    }
}

/// Integrate from u(0) = β, u′(0) = 0 until the first zero of u.
pub fn shoot(alpha: f64, beta: f64, params: &ProblemParams) -> Result<ShotOutcome> {
    let local = params.local();
    let opts = ShootingOptions::for_problem(&local, &params.tol);
    shoot_with(&Nonlinearity::local(alpha, local.q, local.p), local.dim(), beta, &opts.shot)
}

/// Shooting with an explicit nonlinearity.
pub fn shoot_with(nl: &Nonlinearity, dim: u32, beta: f64, opts: &ShotOptions) -> Result<ShotOutcome> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidAmplitude(beta));
    }
    let n = dim as f64;
    let rhs = |r: f64, y: &State<2>| [y[1], -(n - 1.0) / r * y[1] - nl.eval(y[0])];

    let g0 = nl.eval(beta);
    let kappa = (g0.abs() / beta).sqrt();
    let mut h = opts.start_fraction * opts.length_scale;
    if kappa > 0.0 {
        h = h.min(1e-4 / kappa);
    }
    let u1 = beta - g0 * h * h / (2.0 * n);
    let v1 = -g0 * h / n;

    let mut nodes = vec![0.0, h];
    let mut values = vec![beta, u1];
    let mut derivs = vec![0.0, v1];
    let mut second = vec![-g0 / n, rhs(h, &[u1, v1])[1]];

    let mut stepper = Dopri5::new(&rhs, h, [u1, v1], h, opts.rtol, opts.atol);
    let h_cap = 0.05 * opts.length_scale;
    for _ in 0..opts.max_steps {
        if stepper.t >= opts.r_max {
            return Ok(ShotOutcome::NoZero { reached: stepper.t });
        }
        stepper.h_max = h_cap.min(opts.r_max - stepper.t).max(f64::MIN_POSITIVE);
        let before = stepper.clone();
        let step = stepper.advance(&rhs)?;
        let y1 = step.y1;
        if !(y1[0].abs() <= opts.blowup_bound && y1[1].abs() <= opts.blowup_bound) {
            return Err(Error::NonFiniteBlowup { radius: step.t1 });
        }
        if y1[0] > 0.0 {
            nodes.push(step.t1);
            values.push(y1[0]);
            derivs.push(y1[1]);
            second.push(step.f1[1]);
            continue;
        }

        // First sign change inside [t0, t1]: locate it on the step's
        // Hermite interpolant, then polish with Newton on trial steps.
        let a = [step.y0[0], step.y0[1], step.f0[1]];
        let b = [y1[0], y1[1], step.f1[1]];
        let term = Termination { xtol_rel: 1e-15, ..Termination::default() };
        let est = brent(
            |r| Ok(hermite_value(step.t0, step.t1, a, b, r).0),
            step.t0,
            step.t1,
            term,
        )?;
        let full = step.t1 - step.t0;
        let mut s = (est.root - step.t0).clamp(f64::MIN_POSITIVE, full);
        let (mut y, mut f) = before.trial(&rhs, s);
        for _ in 0..4 {
            if y[1] == 0.0 {
                break;
            }
            let next = (s - y[0] / y[1]).clamp(0.5 * s, full);
            if (next - s).abs() <= 1e-15 * (step.t0 + s) {
                break;
            }
            s = next;
            (y, f) = before.trial(&rhs, s);
        }
        let r0 = step.t0 + s;
        if r0 <= *nodes.last().unwrap() {
            // zero coincides with the previous node to rounding
            let last = nodes.len() - 1;
            values[last] = 0.0;
        } else {
            nodes.push(r0);
            values.push(0.0);
            derivs.push(y[1]);
            second.push(f[1] + nl.eval(y[0]) - nl.eval(0.0));
        }
        let r0 = *nodes.last().unwrap();
        let profile = RadialProfile::with_second(nodes, values, derivs, second)?;
        return Ok(ShotOutcome::FirstZero { r0, profile });
    }
    Err(Error::StepSizeUnderflow { radius: stepper.t })
}

/// Amplitude scan and shot settings for [`LocalSolver`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingOptions {
    pub shot: ShotOptions,
    /// Absolute tolerance on |r0(β) − R|.
    pub radius_tol: f64,
    /// Scan range in units of the problem-scaled amplitude.
    pub beta_min_factor: f64,
    pub beta_max_factor: f64,
    pub scans_per_decade: usize,
}

impl ShootingOptions {
    pub fn for_problem(problem: &LocalProblem, tol: &Tolerances) -> Self {
        let radius = problem.radius();
        let mut shot = ShotOptions::new(radius, tol);
        let mut beta_max_factor = 1e6;
        if problem.is_critical() {
            shot.rtol = shot.rtol.min(1e-12);
            shot.atol = shot.atol.min(1e-30);
            // bubble width ~ β^{−2/(N−2)}: in three dimensions amplitudes past
            // 1e5 put it below 1e-10·R, where r0(β) is rounding noise
            beta_max_factor = if problem.dim() == 3 { 1e5 } else { 1e12 };
        }
        Self {
            shot,
            radius_tol: tol.radius_tol * radius,
            beta_min_factor: 1e-3,
            beta_max_factor,
            scans_per_decade: 4,
        }
    }

    /// Amplitude at which the dominant pure-power term alone puts the
    /// first zero near R.
    pub fn amplitude_unit(problem: &LocalProblem, alpha: f64) -> f64 {
        let r2 = problem.radius().powi(2);
        let power_unit = r2.powf(-1.0 / (problem.p - 2.0));
        if problem.q > 2.0 && alpha > 0.0 {
            power_unit.min((alpha * r2).powf(-1.0 / (problem.q - 2.0)))
        } else {
            power_unit
        }
    }

    pub fn beta_grid(&self, problem: &LocalProblem, alpha: f64) -> Vec<f64> {
        let unit = Self::amplitude_unit(problem, alpha);
        let lo = (self.beta_min_factor * unit).ln();
        let hi = (self.beta_max_factor * unit).ln();
        let decades = (hi - lo) / std::f64::consts::LN_10;
        let count = ((decades * self.scans_per_decade as f64).ceil() as usize).max(2);
        (0..=count)
            .map(|i| (lo + (hi - lo) * i as f64 / count as f64).exp())
            .collect()
    }
}

/// Another shooting solution found at the same α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub beta: f64,
    pub dirichlet_energy: f64,
    pub local_energy: f64,
}

/// A solution u_α of the local problem with its energies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalSolution {
    pub alpha: f64,
    pub beta: f64,
    pub dim: u32,
    pub q: f64,
    pub p: f64,
    pub profile: RadialProfile,
    /// D(α) = ∫|∇u_α|².
    pub dirichlet_energy: f64,
    /// I_α(u_α).
    pub local_energy: f64,
    /// ‖u‖_q^q and ‖u‖_p^p.
    pub q_norm_pow: f64,
    pub p_norm_pow: f64,
    /// Other amplitudes solving the same boundary problem, if any.
    pub other_branches: Vec<Branch>,
}

impl LocalSolution {
    pub fn from_profile(alpha: f64, beta: f64, problem: &LocalProblem, profile: RadialProfile) -> Self {
        let dim = problem.dim();
        let d = dirichlet_energy(&profile, dim);
        let qn = lp_norm_pow(&profile, dim, problem.q);
        let pn = lp_norm_pow(&profile, dim, problem.p);
        let energy = 0.5 * d - alpha * qn / problem.q - pn / problem.p;
        Self {
            alpha,
            beta,
            dim,
            q: problem.q,
            p: problem.p,
            profile,
            dirichlet_energy: d,
            local_energy: energy,
            q_norm_pow: qn,
            p_norm_pow: pn,
            other_branches: Vec::new(),
        }
    }

    /// I_α′(u)u = ‖∇u‖² − α‖u‖_q^q − ‖u‖_p^p.
    pub fn nehari_defect(&self) -> f64 {
        self.dirichlet_energy - self.alpha * self.q_norm_pow - self.p_norm_pow
    }

    pub fn nonlinearity(&self) -> Nonlinearity {
        Nonlinearity::local(self.alpha, self.q, self.p)
    }
}

/// Shooting solver for one (N, R, q, p) with a per-α result cache.
#[derive(Debug)]
pub struct LocalSolver {
    problem: LocalProblem,
    options: ShootingOptions,
    cache: RwLock<HashMap<u64, Result<Arc<LocalSolution>>>>,
}

impl LocalSolver {
    pub fn new(problem: LocalProblem, options: ShootingOptions) -> Self {
        Self { problem, options, cache: RwLock::new(HashMap::new()) }
    }

    pub fn for_params(params: &ProblemParams) -> Self {
        let problem = params.local();
        Self::new(problem, ShootingOptions::for_problem(&problem, &params.tol))
    }

    pub fn problem(&self) -> &LocalProblem {
        &self.problem
    }

    pub fn options(&self) -> &ShootingOptions {
        &self.options
    }

    pub fn cached_len(&self) -> usize {
        self.cache.read().unwrap().len()
    }

    /// Solve (P_α), memoized on the bit pattern of α.
    pub fn solve(&self, alpha: f64) -> Result<Arc<LocalSolution>> {
        let key = alpha.to_bits();
        if let Some(hit) = self.cache.read().unwrap().get(&key) {
            return hit.clone();
        }
        let result = solve_uncached(alpha, &self.problem, &self.options).map(Arc::new);
        self.cache.write().unwrap().insert(key, result.clone());
        result
    }

    /// D(α) through the cache.
    pub fn dirichlet_energy(&self, alpha: f64) -> Result<f64> {
        Ok(self.solve(alpha)?.dirichlet_energy)
    }
}

/// Solve (P_α) without caching.
pub fn solve_local(alpha: f64, params: &ProblemParams) -> Result<LocalSolution> {
    let problem = params.local();
    solve_uncached(alpha, &problem, &ShootingOptions::for_problem(&problem, &params.tol))
}

fn solve_uncached(alpha: f64, problem: &LocalProblem, opts: &ShootingOptions) -> Result<LocalSolution> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha must be finite, got {alpha}")));
    }
    let radius = problem.radius();
    let dim = problem.dim();
    let nl = Nonlinearity::local(alpha, problem.q, problem.p);
    let gap = |beta: f64| -> Result<f64> {
        Ok(shoot_with(&nl, dim, beta, &opts.shot)?.radius() - radius)
    };

    let betas = opts.beta_grid(problem, alpha);
    let gaps: Vec<Option<f64>> = betas
        .iter()
        .map(|&b| match gap(b) {
            Ok(g) => Some(g),
            Err(e) => {
                debug!("shot failed at alpha = {alpha}, beta = {b}: {e}");
                None
            }
        })
        .collect();

    let mut roots = Vec::new();
    for i in 0..betas.len() - 1 {
        let (Some(g0), Some(g1)) = (gaps[i], gaps[i + 1]) else { continue };
        if g0 == 0.0 {
            roots.push(betas[i]);
            continue;
        }
        if (g0 > 0.0) == (g1 > 0.0) {
            continue;
        }
        let term = Termination {
            ftol: opts.radius_tol,
            xtol_rel: 1e-15,
            xtol_abs: 0.0,
            max_iter: 200,
        };
        match brent(|x| gap(x.exp()), betas[i].ln(), betas[i + 1].ln(), term) {
            Ok(r) => roots.push(r.root.exp()),
            Err(e) => warn!("amplitude bisection failed at alpha = {alpha}: {e}"),
        }
    }

    let mut solutions = Vec::new();
    for beta in roots {
        match shoot_with(&nl, dim, beta, &opts.shot)? {
            ShotOutcome::FirstZero { r0, profile } if (r0 - radius).abs() <= 10.0 * opts.radius_tol.max(1e-14 * radius) => {
                solutions.push(LocalSolution::from_profile(alpha, beta, problem, profile));
            }
            other => debug!(
                "amplitude {beta} at alpha = {alpha} did not reproduce the boundary zero (r = {})",
                other.radius()
            ),
        }
    }
    if solutions.is_empty() {
        return Err(Error::NoSolutionFound {
            alpha,
            beta_min: betas[0],
            beta_max: *betas.last().unwrap(),
        });
    }
    if solutions.len() > 1 {
        info!("alpha = {alpha}: {} shooting solutions, keeping the least energy one", solutions.len());
    }
    solutions.sort_by(|a, b| a.local_energy.total_cmp(&b.local_energy));
    let mut best = solutions.remove(0);
    best.other_branches = solutions
        .iter()
        .map(|s| Branch { beta: s.beta, dirichlet_energy: s.dirichlet_energy, local_energy: s.local_energy })
        .collect();
    Ok(best)
}

/// Max over `samples` radii of |u″ + ((N−1)/r)u′ + g(u)| / (1 + |g|), with
/// u″ from fourth-order central differences of the interpolated u′.
pub fn profile_residual(profile: &RadialProfile, dim: u32, nl: &Nonlinearity, samples: usize) -> f64 {
    let n = dim as f64;
    let radius = profile.radius();
    let mut worst: f64 = 0.0;
    for j in 0..samples {
        let r = radius * (j as f64 + 0.5) / samples as f64;
        let delta = (1e-2 * profile.spacing_at(r)).min(0.25 * r).min(0.25 * (radius - r));
        let d = |x: f64| profile.deriv(x);
        let ddu = (-d(r + 2.0 * delta) + 8.0 * d(r + delta) - 8.0 * d(r - delta) + d(r - 2.0 * delta))
            / (12.0 * delta);
        let (u, du) = profile.eval(r);
        let res = (ddu + (n - 1.0) / r * du + nl.eval(u)).abs() / nl.magnitude(u);
        worst = worst.max(res);
    }
    worst
}

/// Certified residual of a local solution.
pub fn local_residual(solution: &LocalSolution, samples: usize) -> f64 {
    profile_residual(&solution.profile, solution.dim, &solution.nonlinearity(), samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::BallGeometry;

    fn params(n: u32, q: f64, p: f64) -> ProblemParams {
        ProblemParams::new(1.0, 1.0, 1.0, 1.0, q, p, BallGeometry::new(n, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn zero_amplitude_is_rejected() {
        let p = params(3, 2.0, 4.0);
        assert_eq!(shoot(1.0, 0.0, &p), Err(Error::InvalidAmplitude(0.0)));
        assert!(shoot(1.0, -1.0, &p).is_err());
    }

    #[test]
    fn linear_limit_zero_radius() {
        let pi2 = std::f64::consts::PI.powi(2);
        let p = params(3, 2.0, 4.0);
        let r0 = shoot(pi2, 1e-6, &p).unwrap().radius();
        assert!((r0 - 1.0).abs() < 1e-3, "{r0}");
    }

    #[test]
    fn pure_power_scaling_of_zero() {
        // u_β(r) = βu_1(β^{(p−2)/2}r), so r0(β) = r0(1)/β for p = 4.
        let p = params(3, 2.0, 4.0);
        let mut opts = ShootingOptions::for_problem(&p.local(), &p.tol).shot;
        opts.r_max = 10.0;
        let nl = Nonlinearity::local(0.0, 2.0, 4.0);
        let r1 = shoot_with(&nl, 3, 1.0, &opts).unwrap().radius();
        let r4 = shoot_with(&nl, 3, 4.0, &opts).unwrap().radius();
        // first zero of the n = 3 Lane–Emden function
        assert!((r1 - 6.896_848_619).abs() < 1e-8, "{r1}");
        assert!((r4 - r1 / 4.0).abs() < 1e-9 * r1, "{r1} {r4}");
    }

    #[test]
    fn no_zero_for_small_amplitude_below_eigenvalue() {
        let p = params(3, 2.0, 4.0);
        // linear zero at π/√0.5 > 4R
        match shoot(0.5, 1e-6, &p).unwrap() {
            ShotOutcome::NoZero { reached } => assert!(reached >= 4.0 - 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cache_reuses_results() {
        let solver = LocalSolver::for_params(&params(3, 2.0, 4.0));
        let a = solver.solve(3.0).unwrap();
        let b = solver.solve(3.0).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(solver.cached_len(), 1);
    }
}
