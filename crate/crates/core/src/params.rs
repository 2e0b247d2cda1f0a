use serde::{Deserialize, Serialize};

use crate::constants::BallGeometry;
use crate::error::{Error, Result};

/// Solver tolerances shared by the whole pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative tolerance of the adaptive Runge–Kutta integrator.
    pub ode_rtol: f64,
    /// Absolute tolerance of the integrator.
    pub ode_atol: f64,
    /// Shooting radius tolerance, relative to the ball radius.
    pub radius_tol: f64,
    /// Target for |f(α) − 1| when bisecting roots in α.
    pub root_ftol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { ode_rtol: 1e-10, ode_atol: 1e-12, radius_tol: 1e-9, root_ftol: 1e-10 }
    }
}

/// Exponents and geometry of the local problem −Δu = αu^{q−1} + u^{p−1}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalProblem {
    pub geom: BallGeometry,
    pub q: f64,
    pub p: f64,
}

impl LocalProblem {
    pub fn new(geom: BallGeometry, q: f64, p: f64) -> Result<Self> {
        let crit = geom.critical_exponent();
        let q = snap(q, 2.0);
        let p = snap(p, crit);
        if !(q >= 2.0) {
            return Err(Error::InvalidParameter(format!("q must be >= 2, got {q}")));
        }
        if !(p > q) {
            return Err(Error::InvalidParameter(format!("need q < p, got q = {q}, p = {p}")));
        }
        if p > crit {
            return Err(Error::InvalidParameter(format!(
                "p = {p} exceeds the critical exponent 2N/(N-2) = {crit}"
            )));
        }
        Ok(Self { geom, q, p })
    }

    pub fn dim(&self) -> u32 {
        self.geom.dim
    }

    pub fn radius(&self) -> f64 {
        self.geom.radius
    }

    pub fn is_linear_q(&self) -> bool {
        self.q == 2.0
    }

    pub fn is_critical(&self) -> bool {
        self.p == self.geom.critical_exponent()
    }
}

/// Snap `x` onto `target` when they agree to a few ulps, so exponents typed
/// as decimals land exactly on 2 or 2N/(N−2).
fn snap(x: f64, target: f64) -> f64 {
    if (x - target).abs() <= 8.0 * f64::EPSILON * target.abs() {
        target
    } else {
        x
    }
}

/// Kirchhoff data (a, b, λ, μ, q, p) on a ball, plus tolerances.
/// a, λ, μ > 0 and b ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub a: f64,
    pub b: f64,
    pub lambda: f64,
    pub mu: f64,
    pub q: f64,
    pub p: f64,
    pub geom: BallGeometry,
    pub tol: Tolerances,
}

impl ProblemParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(a: f64, b: f64, lambda: f64, mu: f64, q: f64, p: f64, geom: BallGeometry) -> Result<Self> {
        Self::with_tolerances(a, b, lambda, mu, q, p, geom, Tolerances::default())
    }

    #[allow(clippy::too_many_arguments)]
    pub fn with_tolerances(
        a: f64,
        b: f64,
        lambda: f64,
        mu: f64,
        q: f64,
        p: f64,
        geom: BallGeometry,
        tol: Tolerances,
    ) -> Result<Self> {
        for (name, v) in [("a", a), ("lambda", lambda), ("mu", mu)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        // b = 0 is the local limit of the reduction
        if !(b >= 0.0 && b.is_finite()) {
            return Err(Error::InvalidParameter(format!("b must be non-negative, got {b}")));
        }
        let local = LocalProblem::new(geom, q, p)?;
        Ok(Self { a, b, lambda, mu, q: local.q, p: local.p, geom, tol })
    }

    pub fn local(&self) -> LocalProblem {
        LocalProblem { geom: self.geom, q: self.q, p: self.p }
    }

    pub fn is_linear_q(&self) -> bool {
        self.local().is_linear_q()
    }

    pub fn is_critical(&self) -> bool {
        self.local().is_critical()
    }

    pub fn dim(&self) -> u32 {
        self.geom.dim
    }
}
