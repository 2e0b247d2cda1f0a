//! Finite-difference ground states of −Δu = αu^{q−1} + u^{p−1} on the ball,
//! obtained by minimising the energy
//!
//! ```text
//! I_α(u) = ½∫|∇u|² − (α/q)∫u^q − (1/p)∫u^p
//! ```
//!
//! over the Nehari set I_α′(u)u = 0. Independent of the shooting solver and
//! used to cross-check it.

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{first_eigenvalue, sphere_area, BallGeometry};
use crate::error::{Error, Result};
use crate::params::LocalProblem;
use crate::roots::{brent, Termination};
use crate::shooting::LocalSolver;

/// Nodal values on the uniform grid r_i = iR/M, i = 0..=M, with v_M = 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub radius: f64,
    pub values: Vec<f64>,
}

impl GridFunction {
    /// Sample `f` at the grid nodes; the boundary value is forced to zero.
    pub fn from_fn(radius: f64, points: usize, f: impl Fn(f64) -> f64) -> Self {
        let h = radius / points as f64;
        let mut values: Vec<f64> = (0..=points).map(|i| f(i as f64 * h)).collect();
        values[points] = 0.0;
        Self { radius, values }
    }

    /// Number of intervals M.
    pub fn points(&self) -> usize {
        self.values.len() - 1
    }

    pub fn step(&self) -> f64 {
        self.radius / self.points() as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.step();
        (0..self.values.len()).map(move |i| i as f64 * h)
    }

    fn scaled(&self, t: f64) -> Self {
        Self { radius: self.radius, values: self.values.iter().map(|v| t * v).collect() }
    }
}

/// Discrete ground state and its energies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub alpha: f64,
    /// Minimal Nehari level m_α.
    pub m_alpha: f64,
    /// ∫|∇u|² of the minimiser.
    pub grad_norm_sq: f64,
    pub q_norm_pow: f64,
    pub p_norm_pow: f64,
    /// |I_α′(u)u| / ∫|∇u|².
    pub nehari_residual: f64,
    pub iterations: usize,
    pub profile: GridFunction,
}

/// Grid size, iteration budget and stopping rule of [`minimize_nehari`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleOptions {
    pub points: usize,
    pub max_iter: usize,
    /// Relative energy decrease below which the descent stops.
    pub stagnation: f64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self { points: 2000, max_iter: 5000, stagnation: 1e-12 }
    }
}

/// Radial discretisation: stiffness from midpoint weights r_{i+½}^{N−1},
/// lumped mass from nodal weights r_i^{N−1}.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    pub dim: u32,
    pub radius: f64,
    pub points: usize,
    /// ω r_{i+½}^{N−1}/h for the edge (i, i+1).
    edge: Vec<f64>,
    /// ω r_i^{N−1} h (trapezoid; the end nodes carry half weight).
    mass: Vec<f64>,
}

impl RadialGrid {
    pub fn new(geom: &BallGeometry, points: usize) -> Result<Self> {
        if points < 4 {
            return Err(Error::InvalidParameter(format!("grid needs at least 4 intervals, got {points}")));
        }
        let (r, k) = (geom.radius, geom.dim as i32 - 1);
        let h = r / points as f64;
        let omega = sphere_area(geom.dim);
        let edge = (0..points).map(|i| omega * ((i as f64 + 0.5) * h).powi(k) / h).collect();
        let mass = (0..=points)
            .map(|i| {
                let w = if i == 0 || i == points { 0.5 } else { 1.0 };
                w * omega * (i as f64 * h).powi(k) * h
            })
            .collect();
        Ok(Self { dim: geom.dim, radius: r, points, edge, mass })
    }

    fn check(&self, v: &GridFunction) -> Result<()> {
        if v.points() != self.points || v.radius != self.radius {
            return Err(Error::InvalidParameter("grid function does not match the grid".into()));
        }
        Ok(())
    }

    /// Σ edge_i (v_{i+1} − v_i)², the discrete ∫|∇v|².
    pub fn dirichlet(&self, v: &GridFunction) -> f64 {
        let u = &v.values;
        self.edge.iter().enumerate().map(|(i, c)| c * (u[i + 1] - u[i]).powi(2)).sum()
    }

    /// Σ mass_i |v_i|^s, the discrete ∫|v|^s.
    pub fn norm_pow(&self, v: &GridFunction, s: f64) -> f64 {
        self.mass.iter().zip(&v.values).map(|(w, x)| w * x.abs().powf(s)).sum()
    }

    /// I_α on the grid.
    pub fn energy(&self, v: &GridFunction, alpha: f64, q: f64, p: f64) -> f64 {
        0.5 * self.dirichlet(v) - alpha / q * self.norm_pow(v, q) - self.norm_pow(v, p) / p
    }

    /// Euclidean gradient of [`energy`](Self::energy) in the nodal values
    /// v_0..v_{M−1}: K v − M(α v^{q−1} + v^{p−1}).
    pub fn gradient(&self, v: &GridFunction, alpha: f64, q: f64, p: f64) -> Vec<f64> {
        let u = &v.values;
        let m = self.points;
        (0..m)
            .map(|i| {
                let left = if i > 0 { self.edge[i - 1] * (u[i] - u[i - 1]) } else { 0.0 };
                let right = self.edge[i] * (u[i] - u[i + 1]);
                let x = u[i].max(0.0);
                left + right - self.mass[i] * (alpha * x.powf(q - 1.0) + x.powf(p - 1.0))
            })
            .collect()
    }

    /// Solve K x = rhs (Thomas algorithm on the SPD tridiagonal stiffness).
    pub fn solve_stiffness(&self, rhs: &[f64]) -> Vec<f64> {
        let m = self.points;
        let diag = |i: usize| self.edge[i] + if i > 0 { self.edge[i - 1] } else { 0.0 };
        let mut c = vec![0.0; m];
        let mut d = vec![0.0; m];
        let mut denom = diag(0);
        c[0] = -self.edge[0] / denom;
        d[0] = rhs[0] / denom;
        for i in 1..m {
            let lower = -self.edge[i - 1];
            denom = diag(i) - lower * c[i - 1];
            c[i] = if i + 1 < m { -self.edge[i] / denom } else { 0.0 };
            d[i] = (rhs[i] - lower * d[i - 1]) / denom;
        }
        for i in (0..m - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        d
    }
}

/// Scale `v` onto the Nehari set: t > 0 with
/// t²∫|∇v|² = αt^q∫v^q + t^p∫v^p.
pub fn nehari_project(grid: &RadialGrid, v: &GridFunction, alpha: f64, q: f64, p: f64) -> Result<GridFunction> {
    grid.check(v)?;
    if v.values.iter().any(|&x| x < 0.0) || v.values.iter().all(|&x| x == 0.0) {
        return Err(Error::ProjectionUndefined("the grid function must be nonnegative and nonzero".into()));
    }
    let d = grid.dirichlet(v);
    let pp = grid.norm_pow(v, p);
    let qq = grid.norm_pow(v, q);
    let t = if q == 2.0 || alpha == 0.0 {
        let excess = if q == 2.0 { d - alpha * qq } else { d };
        if !(excess > 0.0) {
            return Err(Error::ProjectionUndefined(format!(
                "∫|∇v|² − α∫v² = {excess:e} is not positive"
            )));
        }
        (excess / pp).powf(1.0 / (p - 2.0))
    } else {
        // ln t solves α∫v^q e^{(q−2)s} + ∫v^p e^{(p−2)s} = ∫|∇v|², increasing in s
        let g = |s: f64| Ok(alpha * qq * ((q - 2.0) * s).exp() + pp * ((p - 2.0) * s).exp() - d);
        let hi = ((d / pp).ln() / (p - 2.0)).min((d / (alpha * qq)).ln() / (q - 2.0));
        let lo = ((0.5 * d / pp).ln() / (p - 2.0)).min((0.5 * d / (alpha * qq)).ln() / (q - 2.0));
        let term = Termination { ftol: 1e-13 * d, xtol_rel: 1e-15, xtol_abs: 1e-15, max_iter: 200 };
        brent(g, lo, hi, term)?.root.exp()
    };
    Ok(v.scaled(t))
}

fn report(grid: &RadialGrid, u: GridFunction, alpha: f64, q: f64, p: f64, iterations: usize) -> EnergyReport {
    let d = grid.dirichlet(&u);
    let qq = grid.norm_pow(&u, q);
    let pp = grid.norm_pow(&u, p);
    EnergyReport {
        alpha,
        m_alpha: 0.5 * d - alpha / q * qq - pp / p,
        grad_norm_sq: d,
        q_norm_pow: qq,
        p_norm_pow: pp,
        nehari_residual: (d - alpha * qq - pp).abs() / d,
        iterations,
        profile: u,
    }
}

/// Minimise I_α over the discrete Nehari set by projected Sobolev-gradient
/// descent from the bump 1 − (r/R)².
pub fn minimize_nehari(problem: &LocalProblem, alpha: f64, opts: &OracleOptions) -> Result<EnergyReport> {
    let (q, p) = (problem.q, problem.p);
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha must be nonnegative, got {alpha}")));
    }
    if q == 2.0 && alpha >= first_eigenvalue(&problem.geom) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} is not below the first eigenvalue")));
    }
    if problem.is_critical() {
        warn!("critical exponent: the discrete minimiser may under-resolve concentration");
    }
    let grid = RadialGrid::new(&problem.geom, opts.points)?;
    let radius = problem.radius();
    let bump = GridFunction::from_fn(radius, opts.points, |r| 1.0 - (r / radius).powi(2));
    let mut u = nehari_project(&grid, &bump, alpha, q, p)?;
    let mut level = grid.energy(&u, alpha, q, p);
    let m = opts.points;

    for it in 1..=opts.max_iter {
        let euclid = grid.gradient(&u, alpha, q, p);
        let sobolev = grid.solve_stiffness(&euclid);
        let slope: f64 = sobolev.iter().zip(&euclid).map(|(a, b)| a * b).sum();
        let mut tau = 1.0;
        let mut accepted = None;
        while tau > 1e-12 {
            let mut values: Vec<f64> = (0..m).map(|i| (u.values[i] - tau * sobolev[i]).max(0.0)).collect();
            values.push(0.0);
            let trial = GridFunction { radius, values };
            if let Ok(w) = nehari_project(&grid, &trial, alpha, q, p) {
                let e = grid.energy(&w, alpha, q, p);
                if e <= level - 1e-4 * tau * slope {
                    accepted = Some((w, e));
                    break;
                }
            }
            tau *= 0.5;
        }
        let Some((w, e)) = accepted else {
            // no admissible decrease left at working precision
            return Ok(report(&grid, u, alpha, q, p, it));
        };
        let decrease = level - e;
        u = w;
        level = e;
        if decrease <= opts.stagnation * level.abs() {
            return Ok(report(&grid, u, alpha, q, p, it));
        }
    }
    Err(Error::NotConverged {
        iterations: opts.max_iter,
        last: Box::new(report(&grid, u, alpha, q, p, opts.max_iter)),
    })
}

/// Shooting and finite-difference Dirichlet energies at one α.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub alpha: f64,
    pub d_shoot: Option<f64>,
    pub d_oracle: Option<f64>,
    /// |D_oracle − D_shoot| / D_shoot.
    pub gap: Option<f64>,
    pub flagged: bool,
}

/// Relative gap above which a row is flagged.
pub const ORACLE_GAP: f64 = 5e-3;

/// Compare D(α) from shooting with the finite-difference minimiser at each
/// α in parallel; failures of either side leave gaps in the row.
pub fn oracle_compare(solver: &LocalSolver, alphas: &[f64], opts: &OracleOptions) -> Vec<OracleRow> {
    let problem = *solver.problem();
    alphas
        .par_iter()
        .map(|&alpha| {
            let d_shoot = solver.dirichlet_energy(alpha).ok();
            let d_oracle = minimize_nehari(&problem, alpha, opts).ok().map(|r| r.grad_norm_sq);
            let gap = d_shoot.zip(d_oracle).map(|(s, o)| (o - s).abs() / s);
            OracleRow { alpha, d_shoot, d_oracle, gap, flagged: gap.is_some_and(|g| g > ORACLE_GAP) }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn problem(q: f64, p: f64) -> LocalProblem {
        LocalProblem::new(BallGeometry::new(3, 1.0).unwrap(), q, p).unwrap()
    }

    fn opts(points: usize) -> OracleOptions {
        OracleOptions { points, ..Default::default() }
    }

    #[test]
    fn gradient_matches_difference_quotients() {
        let geom = BallGeometry::new(3, 1.0).unwrap();
        let grid = RadialGrid::new(&geom, 60).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = GridFunction::from_fn(1.0, 60, |r| 2.0 * (1.0 - r * r) + 0.3 * (5.0 * r).sin().abs());
        let (alpha, q, p) = (3.0, 2.5, 4.0);
        let g = grid.gradient(&u, alpha, q, p);
        for _ in 0..5 {
            let dir: Vec<f64> = (0..60).map(|_| rng.gen_range(-1.0..1.0)).chain([0.0]).collect();
            let eps = 1e-5;
            let shift = |s: f64| GridFunction {
                radius: 1.0,
                values: u.values.iter().zip(&dir).map(|(a, d)| a + s * d).collect(),
            };
            let fd = (grid.energy(&shift(eps), alpha, q, p) - grid.energy(&shift(-eps), alpha, q, p)) / (2.0 * eps);
            let exact: f64 = g.iter().zip(&dir).map(|(a, b)| a * b).sum();
            assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0), "{fd} {exact}");
        }
    }

    #[test]
    fn stiffness_solve_inverts() {
        let geom = BallGeometry::new(4, 2.0).unwrap();
        let grid = RadialGrid::new(&geom, 50).unwrap();
        let x = GridFunction::from_fn(2.0, 50, |r| (r * 1.3).cos() + 0.1 * r);
        let u = &x.values;
        let kx: Vec<f64> = (0..50)
            .map(|i| {
                let left = if i > 0 { grid.edge[i - 1] * (u[i] - u[i - 1]) } else { 0.0 };
                left + grid.edge[i] * (u[i] - u[i + 1])
            })
            .collect();
        let back = grid.solve_stiffness(&kx);
        for (b, v) in back.iter().zip(&x.values).take(50) {
            assert!((b - v).abs() < 1e-10);
        }
    }

    #[test]
    fn projection_closed_form_and_fixed_point() {
        let geom = BallGeometry::new(3, 1.0).unwrap();
        let grid = RadialGrid::new(&geom, 100).unwrap();
        let v = GridFunction::from_fn(1.0, 100, |r| 1.0 - r * r);
        let w = nehari_project(&grid, &v, 0.0, 2.0, 4.0).unwrap();
        let t = (grid.dirichlet(&v) / grid.norm_pow(&v, 4.0)).sqrt();
        assert!((w.values[0] - t).abs() < 1e-14 * t);
        for (alpha, q) in [(0.0, 2.0), (2.0, 2.0), (2.0, 3.0)] {
            let w = nehari_project(&grid, &v, alpha, q, 4.0).unwrap();
            let again = nehari_project(&grid, &w, alpha, q, 4.0).unwrap();
            assert!((again.values[0] / w.values[0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn projection_undefined_beyond_eigenvalue() {
        let geom = BallGeometry::new(3, 1.0).unwrap();
        let grid = RadialGrid::new(&geom, 400).unwrap();
        let lambda1 = first_eigenvalue(&geom);
        let k = lambda1.sqrt();
        let phi = GridFunction::from_fn(1.0, 400, |r| if r == 0.0 { k } else { (k * r).sin() / r });
        assert!(matches!(
            nehari_project(&grid, &phi, 1.01 * lambda1, 2.0, 4.0),
            Err(Error::ProjectionUndefined(_))
        ));
        let neg = GridFunction::from_fn(1.0, 400, |r| r - 0.5);
        assert!(matches!(nehari_project(&grid, &neg, 0.0, 2.0, 4.0), Err(Error::ProjectionUndefined(_))));
    }

    #[test]
    fn ground_state_level_identities() {
        let r = minimize_nehari(&problem(2.0, 4.0), 0.0, &opts(400)).unwrap();
        assert!(r.m_alpha > 0.0);
        assert!(r.nehari_residual <= 1e-8);
        // α = 0: ∫|∇u|² = (2p/(p−2)) m₀ and I = (½ − 1/p)∫u^p on the Nehari set
        assert!((r.grad_norm_sq - 4.0 * r.m_alpha).abs() <= 1e-8 * r.grad_norm_sq);
        assert!((r.m_alpha - 0.25 * r.p_norm_pow).abs() <= 1e-8 * r.m_alpha);
        assert!(r.profile.values.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn level_decreases_in_alpha() {
        let pr = problem(2.0, 3.0);
        let l1 = first_eigenvalue(&pr.geom);
        let levels: Vec<f64> = [0.0, 0.25, 0.5, 0.75]
            .iter()
            .map(|&c| minimize_nehari(&pr, c * l1, &opts(400)).unwrap().m_alpha)
            .collect();
        assert!(levels.windows(2).all(|w| w[1] <= w[0]), "{levels:?}");
    }

    #[test]
    fn grid_refinement_is_small() {
        let pr = problem(2.0, 4.0);
        let coarse = minimize_nehari(&pr, 0.0, &opts(1000)).unwrap().m_alpha;
        let fine = minimize_nehari(&pr, 0.0, &opts(2000)).unwrap().m_alpha;
        assert!((coarse - fine).abs() <= 2e-3 * fine);
    }

    #[test]
    fn agrees_with_shooting() {
        let geom = BallGeometry::new(3, 1.0).unwrap();
        let pr = problem(2.0, 4.0);
        let solver = LocalSolver::new(pr, crate::shooting::ShootingOptions::for_problem(&pr, &Default::default()));
        let l1 = first_eigenvalue(&geom);
        let rows = oracle_compare(&solver, &[0.3 * l1, 0.7 * l1], &opts(1000));
        assert!(rows.iter().all(|r| !r.flagged && r.gap.is_some()), "{rows:?}");
        let outside = oracle_compare(&solver, &[1.2 * l1], &opts(200));
        assert!(outside[0].d_shoot.is_none() && outside[0].d_oracle.is_none() && !outside[0].flagged);
    }

    #[test]
    fn coarse_grid_is_flagged() {
        let pr = problem(2.0, 3.0);
        let solver = LocalSolver::new(pr, crate::shooting::ShootingOptions::for_problem(&pr, &Default::default()));
        let l1 = first_eigenvalue(&pr.geom);
        let alphas: Vec<f64> = (1..10).map(|i| 0.1 * i as f64 * l1).collect();
        let rows = oracle_compare(&solver, &alphas, &opts(20));
        assert!(rows.iter().any(|r| r.flagged), "{rows:?}");
    }

    #[test]
    fn power_nonlinearity_converges() {
        let r = minimize_nehari(&problem(3.0, 4.5), 2.0, &opts(400)).unwrap();
        assert!(r.nehari_residual <= 1e-8 && r.m_alpha > 0.0);
    }

    #[test]
    fn budget_exhaustion_keeps_last_iterate() {
        let o = OracleOptions { points: 200, max_iter: 1, stagnation: 0.0 };
        match minimize_nehari(&problem(2.0, 4.0), 1.0, &o) {
            Err(Error::NotConverged { iterations, last }) => {
                assert_eq!(iterations, 1);
                assert!(last.m_alpha > 0.0);
            }
            other => panic!("{other:?}"),
        }
    }
}
