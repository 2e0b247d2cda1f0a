//! The scaling reduction. With y = αμ^{(q−2)/(p−2)}/λ,
//!
//! ```text
//! f(α) = a·y^{(p−2)/(p−q)} + b·y^{(p−4)/(p−q)}·μ^{2/(2−p)}·D(α)
//! ```
//!
//! and φ = (λ/(αμ))^{1/(p−q)}·u_α solves the Kirchhoff problem exactly
//! when f(α) = 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ProblemParams;
use crate::profile::{dirichlet_energy, RadialProfile};
use crate::shooting::{local_residual, LocalSolution};

/// |f − 1| accepted by [`reconstruct`], as a multiple of the root tolerance.
pub const CERTIFICATE_FACTOR: f64 = 100.0;

/// x^e with x^0 = 1 for every x > 0.
fn pow_or_one(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        x.powf(e)
    }
}

/// y = αμ^{(q−2)/(p−2)}/λ.
fn reduced_alpha(alpha: f64, params: &ProblemParams) -> f64 {
    let (q, p) = (params.q, params.p);
    alpha * pow_or_one(params.mu, (q - 2.0) / (p - 2.0)) / params.lambda
}

/// The two terms of f(α) for a given Dirichlet energy D(α).
pub fn f_terms(alpha: f64, dirichlet: f64, params: &ProblemParams) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    if !(dirichlet > 0.0 && dirichlet.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "Dirichlet energy must be positive, got {dirichlet}"
        )));
    }
    let (q, p) = (params.q, params.p);
    let y = reduced_alpha(alpha, params);
    let first = params.a * y.powf((p - 2.0) / (p - q));
    let second = params.b
        * pow_or_one(y, (p - 4.0) / (p - q))
        * params.mu.powf(2.0 / (2.0 - p))
        * dirichlet;
    Ok((first, second))
}

/// f(α) evaluated from D(α).
pub fn f_eval(alpha: f64, dirichlet: f64, params: &ProblemParams) -> Result<f64> {
    let (first, second) = f_terms(alpha, dirichlet, params)?;
    Ok(first + second)
}

/// Amplitude factors taking u_α to the Kirchhoff solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingChain {
    /// μ^{1/(2−p)}: u_α ↦ ψ solving −Δψ = αψ^{q−1} + μψ^{p−1}.
    pub t_mu: f64,
    /// (λ/(αμ^{(q−2)/(p−2)}))^{1/(p−q)}: ψ ↦ φ.
    pub s: f64,
    /// (λ/(αμ))^{1/(p−q)}.
    pub total_factor: f64,
}

impl ScalingChain {
    pub fn new(alpha: f64, params: &ProblemParams) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
        }
        let (q, p, mu) = (params.q, params.p, params.mu);
        let t_mu = mu.powf(1.0 / (2.0 - p));
        let s = (params.lambda / (alpha * pow_or_one(mu, (q - 2.0) / (p - 2.0)))).powf(1.0 / (p - q));
        let total_factor = (params.lambda / (alpha * mu)).powf(1.0 / (p - q));
        Ok(Self { t_mu, s, total_factor })
    }

    /// s^{p−q}·α·μ^{(q−2)/(p−2)}, equal to λ by construction.
    pub fn lambda_identity(&self, alpha: f64, params: &ProblemParams) -> f64 {
        let (q, p) = (params.q, params.p);
        self.s.powf(p - q) * alpha * pow_or_one(params.mu, (q - 2.0) / (p - 2.0))
    }
}

/// A positive radial solution φ of the Kirchhoff problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KirchhoffSolution {
    pub params: ProblemParams,
    pub alpha_root: f64,
    /// f(α) at the root.
    pub f_value: f64,
    pub local: LocalSolution,
    pub chain: ScalingChain,
    /// φ = total_factor·u_α.
    pub profile: RadialProfile,
    /// ∫|∇φ|² = total_factor²·D(α).
    pub dirichlet_energy: f64,
    /// a + b∫|∇φ|².
    pub effective_stiffness: f64,
    /// Max relative Kirchhoff residual (see [`kirchhoff_residual`]).
    pub residual: f64,
    /// Max relative residual of u_α in the local problem.
    pub local_residual: f64,
}

/// Scalar data of a [`KirchhoffSolution`], without profiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionSummary {
    pub alpha_root: f64,
    pub f_value: f64,
    /// Central value u_α(0) of the local solution.
    pub local_amplitude: f64,
    /// Central value φ(0).
    pub amplitude: f64,
    pub chain: ScalingChain,
    pub local_dirichlet_energy: f64,
    pub dirichlet_energy: f64,
    pub effective_stiffness: f64,
    pub residual: f64,
    pub local_residual: f64,
}

impl KirchhoffSolution {
    pub fn summary(&self) -> SolutionSummary {
        SolutionSummary {
            alpha_root: self.alpha_root,
            f_value: self.f_value,
            local_amplitude: self.local.beta,
            amplitude: self.chain.total_factor * self.local.beta,
            chain: self.chain,
            local_dirichlet_energy: self.local.dirichlet_energy,
            dirichlet_energy: self.dirichlet_energy,
            effective_stiffness: self.effective_stiffness,
            residual: self.residual,
            local_residual: self.local_residual,
        }
    }
}

/// Default number of sample radii for residuals.
pub const RESIDUAL_SAMPLES: usize = 200;

/// Build φ from a local solution whose α is a root of f = 1.
pub fn reconstruct(local: &LocalSolution, params: &ProblemParams) -> Result<KirchhoffSolution> {
    let f = f_eval(local.alpha, local.dirichlet_energy, params)?;
    let tol = CERTIFICATE_FACTOR * params.tol.root_ftol;
    if !((f - 1.0).abs() <= tol) {
        return Err(Error::NotARoot { alpha: local.alpha, deviation: (f - 1.0).abs() });
    }
    reconstruct_unchecked(local, params)
}

/// [`reconstruct`] without the root check, for off-root diagnostics.
pub fn reconstruct_unchecked(local: &LocalSolution, params: &ProblemParams) -> Result<KirchhoffSolution> {
    let f = f_eval(local.alpha, local.dirichlet_energy, params)?;
    let chain = ScalingChain::new(local.alpha, params)?;
    let t = chain.total_factor;
    let profile = local.profile.scaled(t);
    let energy = t * t * local.dirichlet_energy;
    let mut sol = KirchhoffSolution {
        params: *params,
        alpha_root: local.alpha,
        f_value: f,
        local: local.clone(),
        chain,
        profile,
        dirichlet_energy: energy,
        effective_stiffness: params.a + params.b * energy,
        residual: f64::NAN,
        local_residual: local_residual(local, RESIDUAL_SAMPLES),
    };
    sol.residual = kirchhoff_residual(&sol, RESIDUAL_SAMPLES);
    Ok(sol)
}

/// Max over sample radii of |−AΔφ − λφ^{q−1} − μφ^{p−1}| / (1 + λφ^{q−1} + μφ^{p−1}).
///
/// Δφ = −T·(αu^{q−1} + u^{p−1}) is taken from the local equation for
/// u = φ/T, so this measures the reduction alone; the accuracy of u_α is
/// reported separately in `local_residual`.
pub fn kirchhoff_residual(sol: &KirchhoffSolution, samples: usize) -> f64 {
    let params = &sol.params;
    let t = sol.chain.total_factor;
    let a_eff = params.a + params.b * dirichlet_energy(&sol.profile, params.dim());
    let nl = sol.local.nonlinearity();
    let radius = sol.profile.radius();
    let mut worst: f64 = 0.0;
    for j in 0..samples {
        let r = radius * (j as f64 + 0.5) / samples as f64;
        let phi = sol.profile.value(r).max(0.0);
        let u = phi / t;
        let lhs = a_eff * t * nl.eval(u);
        let rhs = params.lambda * phi.powf(params.q - 1.0) + params.mu * phi.powf(params.p - 1.0);
        worst = worst.max((lhs - rhs).abs() / (1.0 + rhs));
    }
    worst
}
