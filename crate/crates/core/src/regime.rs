//! Admissible α-intervals and the parameter conditions that guarantee one
//! or two roots of f(α) = 1.

use std::fmt;

use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::constants::SpectralConstants;
use crate::error::{Error, Result};
use crate::params::ProblemParams;
use crate::shooting::LocalSolver;

/// Relative distance to a boundary below which a comparison is undecided.
pub const BOUNDARY_RTOL: f64 = 1e-12;

/// Exponent class of (q, p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentClass {
    /// q = 2, p < 2*.
    LinearSubcritical,
    /// 2 < q < p < 2*.
    PowerSubcritical,
    /// q = 2, p = 2*.
    LinearCritical,
    /// 2 < q < p = 2*.
    PowerCritical,
}

impl ExponentClass {
    pub fn of(params: &ProblemParams) -> Self {
        match (params.is_linear_q(), params.is_critical()) {
            (true, false) => Self::LinearSubcritical,
            (false, false) => Self::PowerSubcritical,
            (true, true) => Self::LinearCritical,
            (false, true) => Self::PowerCritical,
        }
    }

    pub fn is_critical(self) -> bool {
        matches!(self, Self::LinearCritical | Self::PowerCritical)
    }
}

impl fmt::Display for ExponentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::LinearSubcritical => "q = 2, p < 2*",
            Self::PowerSubcritical => "2 < q < p < 2*",
            Self::LinearCritical => "q = 2, p = 2*",
            Self::PowerCritical => "2 < q < p = 2*",
        };
        f.write_str(s)
    }
}

/// Open interval (lower, upper); `upper` may be +∞.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaInterval {
    pub lower: f64,
    pub upper: f64,
}

impl AlphaInterval {
    pub fn contains(&self, alpha: f64) -> bool {
        alpha > self.lower && alpha < self.upper
    }

    pub fn is_bounded(&self) -> bool {
        self.upper.is_finite()
    }
}

/// Condition under which the computed radial solution is known to be the
/// ground state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialityRecord {
    pub condition: String,
    pub holds: bool,
}

/// Exponent class, admissible α-interval and radiality record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseDescriptor {
    pub class: ExponentClass,
    pub interval: AlphaInterval,
    pub radiality: RadialityRecord,
    /// f(α) → +∞ at the lower end of the interval.
    pub f_unbounded_below: bool,
    /// f(α) → +∞ at the upper end of the interval.
    pub f_unbounded_above: bool,
}

impl CaseDescriptor {
    /// `lambda0` is the lower end for 2 < q, p = 2*, N = 3 and ignored otherwise.
    pub fn new(params: &ProblemParams, consts: &SpectralConstants, lambda0: Option<f64>) -> Result<Self> {
        let class = ExponentClass::of(params);
        let n = params.dim();
        let l1 = consts.lambda1;
        let interval = match class {
            ExponentClass::LinearSubcritical => AlphaInterval { lower: 0.0, upper: l1 },
            ExponentClass::PowerSubcritical => AlphaInterval { lower: 0.0, upper: f64::INFINITY },
            ExponentClass::LinearCritical if n == 3 => AlphaInterval { lower: 0.25 * l1, upper: l1 },
            ExponentClass::LinearCritical => AlphaInterval { lower: 0.0, upper: l1 },
            ExponentClass::PowerCritical if n == 3 => {
                let l0 = lambda0.ok_or_else(|| {
                    Error::InvalidParameter("the lower end lambda0 is required for N = 3, 2 < q, p = 2*".into())
                })?;
                if !(l0 > 0.0 && l0.is_finite()) {
                    return Err(Error::InvalidParameter(format!("lambda0 must be positive, got {l0}")));
                }
                AlphaInterval { lower: l0, upper: f64::INFINITY }
            }
            ExponentClass::PowerCritical => AlphaInterval { lower: 0.0, upper: f64::INFINITY },
        };
        let radiality = radiality_record(params);
        Ok(Self {
            class,
            interval,
            radiality,
            f_unbounded_below: interval.lower == 0.0 && params.p < 4.0,
            f_unbounded_above: !interval.is_bounded(),
        })
    }
}

fn radiality_record(params: &ProblemParams) -> RadialityRecord {
    let n = params.dim();
    let (q, p) = (params.q, params.p);
    if ExponentClass::of(params) == ExponentClass::PowerSubcritical {
        let product = (q - 1.0) * (p + 1.0);
        if n >= 6 {
            RadialityRecord { condition: "N >= 6".into(), holds: true }
        } else {
            RadialityRecord {
                condition: format!("(q-1)(p+1) = {product} <= N/2 = {}", n as f64 / 2.0),
                holds: product <= n as f64 / 2.0,
            }
        }
    } else {
        RadialityRecord { condition: "always".into(), holds: true }
    }
}

/// Enumerated parameter regimes. "Resonance" refers to λ = aλ₁.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeCase {
    /// q = 2, p > 4, λ < aλ₁.
    SuperquarticBelowResonance,
    /// q = 2, p = 4, λ < aλ₁, (2p/(p−2))m₀b/μ < 1.
    QuarticBelowResonance,
    /// q = 2, p = 4, λ > aλ₁, (2p/(p−2))m₀b/μ > 1.
    QuarticAboveResonance,
    /// q = 2, p < 4, λ > aλ₁.
    SubquarticAboveResonance,
    /// q = 2, p < 4, λ < aλ₁ and the two-root inequality.
    SubquarticTwoRoots,
    /// 2 < q, N = 3, p > 4, (q−1)(p+1) ≤ 3/2.
    PowerSuperquarticThreeDim,
    /// 2 < q, N = 3, p = 4, (q−1)(p+1) ≤ 3/2, (2p/(p−2))m₀b/μ < 1.
    PowerQuarticThreeDim,
    /// 2 < q, p < 4, radiality and the two-root inequality.
    PowerSubquarticTwoRoots,
    /// q = 2, p = 6, N = 3, λ < aλ₁, f(λ₁/4⁺) < 1.
    CriticalThreeDimBelowResonance,
    /// q = 2, p = 6, N = 3, λ > aλ₁, f(λ₁/4⁺) > 1.
    CriticalThreeDimAboveResonance,
    /// q = 2, p = 4, N = 4, λ < aλ₁, μ > bS².
    CriticalFourDimBelowResonance,
    /// q = 2, p = 4, N = 4, λ > aλ₁, μ < bS².
    CriticalFourDimAboveResonance,
    /// q = 2, p = 2*, N ≥ 5, λ > aλ₁.
    CriticalHighDimAboveResonance,
    /// q = 2, p = 2*, N ≥ 5, λ < aλ₁ and the two-root inequality.
    CriticalHighDimTwoRoots,
    /// 2 < q, p = 6, N = 3, bound on f at λ₀ below 1.
    PowerCriticalThreeDim,
    /// 2 < q, p = 4, N = 4, μ > bS².
    PowerCriticalFourDim,
    /// 2 < q, p = 2*, N ≥ 5 and the two-root inequality.
    PowerCriticalHighDimTwoRoots,
}

impl RegimeCase {
    pub fn guaranteed_count(self) -> u8 {
        match self {
            Self::SubquarticTwoRoots | Self::PowerSubquarticTwoRoots | Self::CriticalHighDimTwoRoots
            | Self::PowerCriticalHighDimTwoRoots => 2,
            _ => 1,
        }
    }
}

/// Derived constants entering the regime conditions.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AuxiliaryConstants {
    /// Ground-state level of the pure-power problem (S^{N/2}/N when critical).
    pub m0: f64,
    /// λ/(aλ₁).
    pub resonance_ratio: f64,
    /// (2p/(p−2))m₀b/μ, the limit of f at 0 when p = 4 (subcritical).
    pub quartic_limit: Option<f64>,
    /// bS²/μ, the limit of f at 0 when N = 4 (critical).
    pub critical_limit: Option<f64>,
    /// Limit of f at λ₁/4 for q = 2, N = 3, p = 6.
    pub quarter_limit: Option<f64>,
    /// a/4 + bS^{3/2}/(2√μ), the value of `quarter_limit` at λ = λ₁.
    pub quarter_limit_at_unit_ratio: Option<f64>,
    /// Upper bound on f at λ₀ (2 < q, N = 3, p = 6).
    pub lambda0_bound: Option<f64>,
    /// Hölder bound λ₁|B|^{(p−2)/p}((2p/(p−2))m₀)^{2/p} + (2p/(p−2))m₀ on D(α).
    pub holder_bound: Option<f64>,
    /// (2q/(q−2))m₀.
    pub power_energy_bound: Option<f64>,
    /// λ₁|B|^{2/N}S^{(N−2)/2} + S^{N/2}.
    pub critical_holder_bound: Option<f64>,
    /// (2q/(N(q−2)))S^{N/2}.
    pub critical_power_bound: Option<f64>,
}

/// Classification result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimePrediction {
    pub class: ExponentClass,
    /// Case with the largest guaranteed count.
    pub case: RegimeCase,
    pub guaranteed_count: u8,
    /// Every case whose conditions hold.
    pub matched: Vec<RegimeCase>,
    pub constants: AuxiliaryConstants,
    /// Bound on D(α) used by the two-root inequality, if it applies.
    pub energy_bound: Option<f64>,
    /// Left side of the two-root inequality (< 1 guarantees two roots).
    pub two_root_lhs: Option<f64>,
    /// Interior α where f < 1 under the two-root inequality.
    pub probe_alpha: Option<f64>,
    pub radiality: RadialityRecord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Below,
    Above,
    Boundary,
}

fn side(x: f64, threshold: f64) -> Side {
    if (x - threshold).abs() <= BOUNDARY_RTOL * threshold.abs().max(x.abs()) {
        Side::Boundary
    } else if x < threshold {
        Side::Below
    } else {
        Side::Above
    }
}

/// Left side of the two-root inequality for an energy bound `c` on D:
/// (2/((p−2)μ))((p−2)a/(4−p))^{(4−p)/2}(bc)^{(p−2)/2}, the minimum over α
/// of a·y^{(p−2)/(p−q)} + b·c·y^{(p−4)/(p−q)}μ^{2/(2−p)}.
pub fn two_root_lhs(params: &ProblemParams, energy_bound: f64) -> f64 {
    let p = params.p;
    debug_assert!(p < 4.0);
    2.0 / ((p - 2.0) * params.mu)
        * ((p - 2.0) * params.a / (4.0 - p)).powf((4.0 - p) / 2.0)
        * (params.b * energy_bound).powf((p - 2.0) / 2.0)
}

/// The b at which [`two_root_lhs`] equals `target`; the left side scales
/// like b^{(p−2)/2}.
pub fn b_for_two_root_lhs(params: &ProblemParams, energy_bound: f64, target: f64) -> f64 {
    let unit = ProblemParams { b: 1.0, ..*params };
    (target / two_root_lhs(&unit, energy_bound)).powf(2.0 / (params.p - 2.0))
}

/// Minimiser of the upper bound on f: (λ/μ)((4−p)bc/((p−2)a))^{(p−q)/2}.
pub fn probe_alpha(params: &ProblemParams, energy_bound: f64) -> f64 {
    let (q, p) = (params.q, params.p);
    params.lambda / params.mu
        * ((4.0 - p) * params.b * energy_bound / ((p - 2.0) * params.a)).powf((p - q) / 2.0)
}

/// Match the parameters against every enumerated regime.
///
/// `m0` is required for subcritical p; `lambda0` for 2 < q, p = 2*, N = 3.
pub fn classify(
    params: &ProblemParams,
    consts: &SpectralConstants,
    m0: Option<f64>,
    lambda0: Option<f64>,
) -> Result<RegimePrediction> {
    let class = ExponentClass::of(params);
    let n = params.dim();
    let nf = n as f64;
    let (a, b, lambda, mu, q, p) = (params.a, params.b, params.lambda, params.mu, params.q, params.p);
    let l1 = consts.lambda1;
    let s = consts.sobolev_s;
    let s_half = s.powf(nf / 2.0);
    let vol = consts.ball_volume;
    let m0 = if class.is_critical() {
        s_half / nf
    } else {
        m0.ok_or_else(|| Error::InvalidParameter("m0 is required for subcritical p".into()))?
    };
    if !(m0 > 0.0 && m0.is_finite()) {
        return Err(Error::InvalidParameter(format!("m0 must be positive, got {m0}")));
    }

    let mut aux = AuxiliaryConstants { m0, resonance_ratio: lambda / (a * l1), ..Default::default() };
    let resonance = side(lambda, a * l1);
    let radiality = radiality_record(params);
    let mut matched = Vec::new();
    let mut boundaries: Vec<String> = Vec::new();
    let mut energy_bound = None;
    let mut lhs = None;

    let ground = 2.0 * p / (p - 2.0) * m0;
    match class {
        ExponentClass::LinearSubcritical => {
            if resonance == Side::Boundary {
                boundaries.push("lambda = a*lambda1".into());
            }
            let c = l1 * vol.powf((p - 2.0) / p) * ground.powf(2.0 / p) + ground;
            aux.holder_bound = Some(c);
            if p > 4.0 {
                if resonance == Side::Below {
                    matched.push(RegimeCase::SuperquarticBelowResonance);
                }
            } else if p == 4.0 {
                let kappa = ground * b / mu;
                aux.quartic_limit = Some(kappa);
                match (resonance, side(kappa, 1.0)) {
                    (_, Side::Boundary) => boundaries.push("(2p/(p-2)) m0 b / mu = 1".into()),
                    (Side::Below, Side::Below) => matched.push(RegimeCase::QuarticBelowResonance),
                    (Side::Above, Side::Above) => matched.push(RegimeCase::QuarticAboveResonance),
                    _ => {}
                }
            } else {
                if resonance == Side::Above {
                    matched.push(RegimeCase::SubquarticAboveResonance);
                }
                energy_bound = Some(c);
                let l = two_root_lhs(params, c);
                lhs = Some(l);
                if resonance == Side::Below && side(l, 1.0) == Side::Below {
                    matched.push(RegimeCase::SubquarticTwoRoots);
                }
            }
        }
        ExponentClass::PowerSubcritical => {
            let product = (q - 1.0) * (p + 1.0);
            let c1 = 2.0 * q / (q - 2.0) * m0;
            aux.power_energy_bound = Some(c1);
            if n == 3 && product <= 1.5 {
                if p > 4.0 {
                    matched.push(RegimeCase::PowerSuperquarticThreeDim);
                } else if p == 4.0 {
                    let kappa = ground * b / mu;
                    aux.quartic_limit = Some(kappa);
                    if side(kappa, 1.0) == Side::Below {
                        matched.push(RegimeCase::PowerQuarticThreeDim);
                    }
                }
            }
            if p < 4.0 {
                energy_bound = Some(c1);
                let l = two_root_lhs(params, c1);
                lhs = Some(l);
                if radiality.holds && side(l, 1.0) == Side::Below {
                    matched.push(RegimeCase::PowerSubquarticTwoRoots);
                }
            }
        }
        ExponentClass::LinearCritical => {
            if resonance == Side::Boundary {
                boundaries.push("lambda = a*lambda1".into());
            }
            match n {
                3 => {
                    let ratio = l1 / (4.0 * lambda);
                    let limit = a * ratio + b * s.powf(1.5) * ratio.sqrt() / mu.sqrt();
                    aux.quarter_limit = Some(limit);
                    aux.quarter_limit_at_unit_ratio = Some(a / 4.0 + b * s.powf(1.5) / (2.0 * mu.sqrt()));
                    match (resonance, side(limit, 1.0)) {
                        (_, Side::Boundary) => boundaries.push("f(lambda1/4+) = 1".into()),
                        (Side::Below, Side::Below) => matched.push(RegimeCase::CriticalThreeDimBelowResonance),
                        (Side::Above, Side::Above) => matched.push(RegimeCase::CriticalThreeDimAboveResonance),
                        _ => {}
                    }
                }
                4 => {
                    let limit = b * s * s / mu;
                    aux.critical_limit = Some(limit);
                    match (resonance, side(mu, b * s * s)) {
                        (_, Side::Boundary) => boundaries.push("mu = b*S^2".into()),
                        (Side::Below, Side::Above) => matched.push(RegimeCase::CriticalFourDimBelowResonance),
                        (Side::Above, Side::Below) => matched.push(RegimeCase::CriticalFourDimAboveResonance),
                        _ => {}
                    }
                }
                _ => {
                    let c2 = l1 * vol.powf(2.0 / nf) * s.powf((nf - 2.0) / 2.0) + s_half;
                    aux.critical_holder_bound = Some(c2);
                    if resonance == Side::Above {
                        matched.push(RegimeCase::CriticalHighDimAboveResonance);
                    }
                    energy_bound = Some(c2);
                    let l = two_root_lhs(params, c2);
                    lhs = Some(l);
                    if resonance == Side::Below && side(l, 1.0) == Side::Below {
                        matched.push(RegimeCase::CriticalHighDimTwoRoots);
                    }
                }
            }
        }
        ExponentClass::PowerCritical => {
            let c3 = 2.0 * q / (nf * (q - 2.0)) * s_half;
            aux.critical_power_bound = Some(c3);
            match n {
                3 => {
                    let l0 = lambda0.ok_or_else(|| {
                        Error::InvalidParameter("lambda0 is required for N = 3, 2 < q, p = 2*".into())
                    })?;
                    let ratio = l0 / lambda;
                    let bound = a * ratio.powf(4.0 / (6.0 - q)) * mu.powf((q - 2.0) / (6.0 - q))
                        + b * c3 * ratio.powf(2.0 / (6.0 - q)) * mu.powf((q - 4.0) / (6.0 - q));
                    aux.lambda0_bound = Some(bound);
                    match side(bound, 1.0) {
                        Side::Below => matched.push(RegimeCase::PowerCriticalThreeDim),
                        Side::Boundary => boundaries.push("bound at lambda0 = 1".into()),
                        Side::Above => {}
                    }
                }
                4 => {
                    aux.critical_limit = Some(b * s * s / mu);
                    match side(mu, b * s * s) {
                        Side::Above => matched.push(RegimeCase::PowerCriticalFourDim),
                        Side::Boundary => boundaries.push("mu = b*S^2".into()),
                        Side::Below => {}
                    }
                }
                _ => {
                    energy_bound = Some(c3);
                    let l = two_root_lhs(params, c3);
                    lhs = Some(l);
                    if side(l, 1.0) == Side::Below {
                        matched.push(RegimeCase::PowerCriticalHighDimTwoRoots);
                    }
                }
            }
        }
    }

    let Some(&case) = matched.iter().max_by_key(|c| c.guaranteed_count()) else {
        let reason = if boundaries.is_empty() {
            format!("no enumerated case holds for {class} with N = {n}")
        } else {
            format!("parameters on a regime boundary: {}", boundaries.join(", "))
        };
        return Err(Error::UnsupportedRegime(reason));
    };
    let probe = match (energy_bound, case.guaranteed_count()) {
        (Some(c), 2) if b > 0.0 => Some(probe_alpha(params, c)),
        _ => None,
    };
    debug!("classified {class} as {case:?}");
    Ok(RegimePrediction {
        class,
        case,
        guaranteed_count: case.guaranteed_count(),
        matched,
        constants: aux,
        energy_bound,
        two_root_lhs: lhs,
        probe_alpha: probe,
        radiality,
    })
}

/// Ground-state level m₀ of −Δu = u^{p−1}: (1/2 − 1/p)D₀ from the α = 0
/// shooting solution when p < 2*, and S^{N/2}/N when p = 2*.
pub fn ground_state_level(solver: &LocalSolver, consts: &SpectralConstants) -> Result<f64> {
    let problem = solver.problem();
    if problem.is_critical() {
        let n = problem.dim() as f64;
        return Ok(consts.sobolev_s.powf(n / 2.0) / n);
    }
    let p = problem.p;
    let sol = solver.solve(0.0)?;
    Ok((0.5 - 1.0 / p) * sol.dirichlet_energy)
}

/// Smallest α, found by a downward geometric scan and log-bisection, above
/// which shooting succeeds with I_α(u_α) < S^{N/2}/N.
pub fn estimate_lambda0(solver: &LocalSolver, consts: &SpectralConstants) -> Result<f64> {
    let n = solver.problem().dim() as f64;
    let cap = consts.sobolev_s.powf(n / 2.0) / n;
    let admissible = |alpha: f64| match solver.solve(alpha) {
        Ok(s) => s.local_energy < cap,
        Err(_) => false,
    };
    let mut hi = consts.lambda1 * 16.0;
    if !admissible(hi) {
        return Err(Error::ConvergenceNotReached(format!(
            "no admissible alpha at {hi}; cannot estimate lambda0"
        )));
    }
    let floor = consts.lambda1 * 1e-8;
    let mut lo = hi;
    loop {
        lo *= 0.5;
        if lo < floor {
            warn!("lambda0 estimate reached the scan floor {floor}");
            return Ok(hi);
        }
        if !admissible(lo) {
            break;
        }
        hi = lo;
    }
    for _ in 0..30 {
        let mid = (lo * hi).sqrt();
        if admissible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::BallGeometry;

    fn setup(n: u32, a: f64, b: f64, lambda_ratio: f64, mu: f64, q: f64, p: f64) -> (ProblemParams, SpectralConstants) {
        let g = BallGeometry::new(n, 1.0).unwrap();
        let c = SpectralConstants::new(&g).unwrap();
        let pr = ProblemParams::new(a, b, lambda_ratio * a * c.lambda1, mu, q, p, g).unwrap();
        (pr, c)
    }

    #[test]
    fn superquartic_below_resonance() {
        let (pr, c) = setup(3, 1.0, 1.0, 0.5, 1.0, 2.0, 4.5);
        let pred = classify(&pr, &c, Some(10.0), None).unwrap();
        assert_eq!(pred.case, RegimeCase::SuperquarticBelowResonance);
        assert_eq!(pred.guaranteed_count, 1);
    }

    #[test]
    fn quartic_below_resonance_with_small_limit() {
        let m0 = 20.0;
        // 4·m0·b/μ = 0.5
        let (pr, c) = setup(3, 1.0, 0.5 / (4.0 * m0), 0.5, 1.0, 2.0, 4.0);
        let pred = classify(&pr, &c, Some(m0), None).unwrap();
        assert_eq!(pred.case, RegimeCase::QuarticBelowResonance);
        assert!((pred.constants.quartic_limit.unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn critical_four_dim_below_resonance() {
        let g = BallGeometry::new(4, 1.0).unwrap();
        let c = SpectralConstants::new(&g).unwrap();
        let b = 0.1;
        let pr = ProblemParams::new(1.0, b, 0.5 * c.lambda1, 2.0 * b * c.sobolev_s.powi(2), 2.0, 4.0, g).unwrap();
        let pred = classify(&pr, &c, None, None).unwrap();
        assert_eq!(pred.case, RegimeCase::CriticalFourDimBelowResonance);
        assert_eq!(pred.guaranteed_count, 1);
    }

    #[test]
    fn resonance_is_unsupported() {
        let (pr, c) = setup(3, 1.0, 1.0, 1.0, 1.0, 2.0, 4.5);
        assert!(matches!(classify(&pr, &c, Some(10.0), None), Err(Error::UnsupportedRegime(_))));
        let (pr, c) = setup(3, 1.0, 1.0, 1.0, 1.0, 2.0, 3.0);
        assert!(matches!(classify(&pr, &c, Some(10.0), None), Err(Error::UnsupportedRegime(_))));
    }

    #[test]
    fn critical_sobolev_boundary_is_unsupported() {
        let g = BallGeometry::new(4, 1.0).unwrap();
        let c = SpectralConstants::new(&g).unwrap();
        let pr = ProblemParams::new(1.0, 1.0, 0.5 * c.lambda1, c.sobolev_s.powi(2), 3.0, 4.0, g).unwrap();
        assert!(matches!(classify(&pr, &c, None, None), Err(Error::UnsupportedRegime(_))));
    }

    #[test]
    fn unmatched_parameters_are_unsupported() {
        // p > 4, λ > aλ₁: no case
        let (pr, c) = setup(3, 1.0, 1.0, 2.0, 1.0, 2.0, 4.5);
        assert!(matches!(classify(&pr, &c, Some(10.0), None), Err(Error::UnsupportedRegime(_))));
    }

    #[test]
    fn subcritical_requires_m0() {
        let (pr, c) = setup(3, 1.0, 1.0, 0.5, 1.0, 2.0, 4.5);
        assert!(matches!(classify(&pr, &c, None, None), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn probe_minimises_the_bound() {
        let (pr, c) = setup(3, 1.0, 1e-4, 0.5, 1.0, 2.0, 3.0);
        let pred = classify(&pr, &c, Some(30.0), None).unwrap();
        assert_eq!(pred.case, RegimeCase::SubquarticTwoRoots);
        let bound = pred.energy_bound.unwrap();
        let alpha = pred.probe_alpha.unwrap();
        let g = |x: f64| crate::scaling::f_eval(x, bound, &pr).unwrap();
        assert!((g(alpha) - pred.two_root_lhs.unwrap()).abs() < 1e-12);
        assert!(g(alpha * 1.01) > g(alpha) && g(alpha * 0.99) > g(alpha));
        assert!(alpha < pr.lambda / pr.a && alpha < c.lambda1);
    }

    #[test]
    fn vacuous_power_conditions_in_low_dimension() {
        // (q−1)(p+1) > 3/2 whenever q > 2
        let (pr, c) = setup(3, 1.0, 1.0, 0.5, 1.0, 2.5, 4.5);
        assert!(classify(&pr, &c, Some(10.0), None).is_err());
        assert!(!radiality_record(&pr).holds);
    }

    #[test]
    fn intervals() {
        let (pr, c) = setup(3, 1.0, 1.0, 0.5, 1.0, 2.0, 6.0);
        let d = CaseDescriptor::new(&pr, &c, None).unwrap();
        assert_eq!(d.interval.lower, 0.25 * c.lambda1);
        let (pr, c) = setup(3, 1.0, 1.0, 0.5, 1.0, 3.0, 6.0);
        assert!(CaseDescriptor::new(&pr, &c, None).is_err());
        let d = CaseDescriptor::new(&pr, &c, Some(2.0)).unwrap();
        assert_eq!(d.interval.lower, 2.0);
        assert!(!d.interval.is_bounded());
        let (pr, c) = setup(3, 1.0, 1.0, 0.5, 1.0, 2.0, 3.0);
        let d = CaseDescriptor::new(&pr, &c, None).unwrap();
        assert!(d.f_unbounded_below && !d.f_unbounded_above);
    }
}
