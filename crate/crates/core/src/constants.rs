//! Special constants of the ball: first Dirichlet eigenvalue, unit-sphere
//! area, ball volume, Bessel zeros and the best Sobolev constant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::gl20;
use crate::roots::{bisect, Termination};

/// Ball of radius `radius` in ℝ^`dim`, `dim >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallGeometry {
    pub dim: u32,
    pub radius: f64,
}

impl BallGeometry {
    pub fn new(dim: u32, radius: f64) -> Result<Self> {
        if dim < 3 {
            return Err(Error::InvalidParameter(format!("dimension must be >= 3, got {dim}")));
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
        }
        Ok(Self { dim, radius })
    }

    /// Critical Sobolev exponent 2N/(N-2).
    pub fn critical_exponent(&self) -> f64 {
        let n = self.dim as f64;
        2.0 * n / (n - 2.0)
    }

    pub fn volume(&self) -> f64 {
        sphere_area(self.dim) * self.radius.powi(self.dim as i32) / self.dim as f64
    }
}

/// Constants derived from a [`BallGeometry`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralConstants {
    pub lambda1: f64,
    pub sobolev_s: f64,
    pub sphere_area: f64,
    pub ball_volume: f64,
}

impl SpectralConstants {
    pub fn new(geom: &BallGeometry) -> Result<Self> {
        Ok(Self {
            lambda1: first_eigenvalue(geom),
            sobolev_s: sobolev_constant(geom.dim, DEFAULT_TRUNCATION, DEFAULT_QUAD_TOL)?,
            sphere_area: sphere_area(geom.dim),
            ball_volume: geom.volume(),
        })
    }
}

pub const DEFAULT_TRUNCATION: f64 = 1.0e5;
pub const DEFAULT_QUAD_TOL: f64 = 1.0e-12;

/// Γ(m/2) for a positive integer m, exact up to rounding.
pub fn gamma_half(m: u32) -> f64 {
    assert!(m >= 1);
    let (mut g, mut x) = if m.is_multiple_of(2) { (1.0, 1.0) } else { (std::f64::consts::PI.sqrt(), 0.5) };
    let target = m as f64 / 2.0;
    while x < target {
        g *= x;
        x += 1.0;
    }
    g
}

/// Lanczos approximation of Γ(x) for x > 0.
pub fn gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + G + 0.5;
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Surface area of the unit sphere in ℝ^N: 2π^{N/2}/Γ(N/2).
pub fn sphere_area(dim: u32) -> f64 {
    assert!(dim >= 1);
    2.0 * std::f64::consts::PI.powf(dim as f64 / 2.0) / gamma_half(dim)
}

/// Γ(ν+1)(2/x)^ν J_ν(x), i.e. the Bessel series with the leading power
/// factored out. Has the same sign as J_ν(x) for x > 0.
pub fn bessel_j_scaled(nu: f64, x: f64) -> f64 {
    let z = -0.25 * x * x;
    let mut term = 1.0;
    // Neumaier summation
    let mut sum = 1.0;
    let mut comp = 0.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= z / (k * (k + nu));
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) && k > 0.5 * x {
            break;
        }
        if k > 500.0 {
            break;
        }
    }
    sum + comp
}

/// Bessel function of the first kind J_ν(x), x ≥ 0, by power series.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    (0.5 * x).powf(nu) / gamma(nu + 1.0) * bessel_j_scaled(nu, x)
}

/// First positive zero j_{ν,1} of J_ν.
pub fn bessel_first_zero(nu: f64) -> Result<f64> {
    if !(nu >= 0.0 && nu.is_finite()) {
        return Err(Error::InvalidParameter(format!("Bessel order must be >= 0, got {nu}")));
    }
    // j_{ν,1} > ν and J_ν stays positive on (0, ν].
    let step = 0.25;
    let mut lo = nu.max(step);
    let mut hi = lo + step;
    while bessel_j_scaled(nu, hi) > 0.0 {
        lo = hi;
        hi += step;
    }
    let term = Termination { xtol_rel: 2.0 * f64::EPSILON, ..Termination::default() };
    let r = bisect(|x| Ok(bessel_j_scaled(nu, x)), lo, hi, term)?;
    Ok(r.root)
}

/// First Dirichlet eigenvalue of −Δ on the ball: (j_{N/2−1,1}/R)².
pub fn first_eigenvalue(geom: &BallGeometry) -> f64 {
    let nu = geom.dim as f64 / 2.0 - 1.0;
    let j = bessel_first_zero(nu).expect("nu >= 0 for dim >= 2");
    (j / geom.radius).powi(2)
}

/// Best Sobolev constant as the quotient ‖∇U‖²/‖U‖²_{2*} of the bubble
/// U(r) = (1+r²)^{−(N−2)/2}, integrated on [0, truncation] with analytic
/// power-law tails beyond.
pub fn sobolev_constant(dim: u32, truncation: f64, quad_tol: f64) -> Result<f64> {
    if dim < 3 {
        return Err(Error::InvalidParameter(format!("dimension must be >= 3, got {dim}")));
    }
    let n = dim as f64;
    let exponent = dim as i32;
    let grad = |r: f64| (n - 2.0).powi(2) * r.powi(exponent + 1) / (1.0 + r * r).powi(exponent);
    let power = |r: f64| r.powi(exponent - 1) / (1.0 + r * r).powi(exponent);

    let g_int = bubble_integral(truncation, grad);
    let h_int = bubble_integral(truncation, power);

    let t = truncation;
    let g_tail = (n - 2.0) * t.powf(2.0 - n);
    let h_tail = t.powf(-n) / n;
    let g_err = (n - 2.0).powi(2) * t.powf(-n);
    let h_err = n * t.powf(-n - 2.0) / (n + 2.0);

    let g = g_int + g_tail;
    let h = h_int + h_tail;
    let estimate = (g_err / g).max(h_err / h);
    if estimate > quad_tol {
        return Err(Error::TruncationTooSmall { estimate, tolerance: quad_tol });
    }
    let omega = sphere_area(dim);
    Ok(omega.powf(2.0 / n) * g / h.powf((n - 2.0) / n))
}

fn bubble_integral<F: Fn(f64) -> f64>(truncation: f64, f: F) -> f64 {
    let rule = gl20();
    let mut total = 0.0;
    let mut a = 0.0;
    let mut b = 0.25_f64.min(truncation);
    while a < truncation {
        total += rule.integrate(a, b, &f);
        a = b;
        b = (b * 1.5).min(truncation);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn half_order_zero_is_pi() {
        let j = bessel_first_zero(0.5).unwrap();
        assert!((j - PI).abs() < 1e-13, "{j}");
    }

    #[test]
    fn order_zero_and_one() {
        assert!((bessel_first_zero(0.0).unwrap() - 2.404_825_557_695_773).abs() < 1e-12);
        assert!((bessel_first_zero(1.0).unwrap() - 3.831_705_970_207_512).abs() < 1e-12);
    }

    #[test]
    fn negative_order_rejected() {
        assert!(bessel_first_zero(-0.5).is_err());
    }

    #[test]
    fn eigenvalue_of_unit_ball_in_3d() {
        let g = BallGeometry::new(3, 1.0).unwrap();
        assert!((first_eigenvalue(&g) - PI * PI).abs() < 1e-10 * PI * PI);
        let g2 = BallGeometry::new(3, 2.0).unwrap();
        assert!((first_eigenvalue(&g2) - PI * PI / 4.0).abs() < 1e-10);
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn gamma_matches_half_integer_values() {
        for m in 1..12 {
            let a = gamma(m as f64 / 2.0);
            let b = gamma_half(m);
            assert!(((a - b) / b).abs() < 1e-13, "m = {m}: {a} vs {b}");
        }
    }

    #[test]
    fn bessel_half_order_closed_form() {
        // J_{1/2}(x) = sqrt(2/(πx)) sin x
        for x in [0.3, 1.0, 2.5, 4.0] {
            let exact = (2.0 / (PI * x)).sqrt() * x.sin();
            assert!((bessel_j(0.5, x) - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn ball_volume_in_3d() {
        let g = BallGeometry::new(3, 2.0).unwrap();
        assert!((g.volume() - 4.0 / 3.0 * PI * 8.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_geometry() {
        assert!(BallGeometry::new(2, 1.0).is_err());
        assert!(BallGeometry::new(3, 0.0).is_err());
        assert!(BallGeometry::new(3, f64::NAN).is_err());
    }

    #[test]
    fn sobolev_matches_closed_form() {
        // πN(N−2)(Γ(N/2)/Γ(N))^{2/N}, cross-check only.
        for dim in 3..=6u32 {
            let n = dim as f64;
            let closed = PI * n * (n - 2.0) * (gamma_half(dim) / gamma_half(2 * dim)).powf(2.0 / n);
            let s = sobolev_constant(dim, DEFAULT_TRUNCATION, DEFAULT_QUAD_TOL).unwrap();
            assert!(((s - closed) / closed).abs() < 1e-10, "N = {dim}: {s} vs {closed}");
        }
    }

    #[test]
    fn short_truncation_is_rejected() {
        assert!(matches!(
            sobolev_constant(3, 5.0, 1e-10),
            Err(Error::TruncationTooSmall { .. })
        ));
    }
}
