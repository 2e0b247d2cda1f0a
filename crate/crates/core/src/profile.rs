//! Sampled radial functions with quintic Hermite interpolation between
//! nodes, and the radial integrals built on them.

use serde::{Deserialize, Serialize};

use crate::constants::sphere_area;
use crate::error::{Error, Result};
use crate::quadrature::gl10;

/// Radial function sampled at increasing radii `0 = r_0 < … < r_M`.
///
/// Between nodes the profile is the quintic Hermite interpolant of
/// (u, u′, u″), which is fifth-order accurate in u and matches the order
/// of the Runge–Kutta pair that produces the nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    nodes: Vec<f64>,
    values: Vec<f64>,
    derivs: Vec<f64>,
    second: Vec<f64>,
}

impl RadialProfile {
    /// Build from (r, u, u′) samples; u″ at the nodes is estimated from
    /// u′ by three-point differences (exact when u′ is quadratic).
    pub fn new(nodes: Vec<f64>, values: Vec<f64>, derivs: Vec<f64>) -> Result<Self> {
        let second = estimate_second(&nodes, &derivs);
        Self::with_second(nodes, values, derivs, second)
    }

    pub fn with_second(
        nodes: Vec<f64>,
        values: Vec<f64>,
        derivs: Vec<f64>,
        second: Vec<f64>,
    ) -> Result<Self> {
        let m = nodes.len();
        if m < 2 {
            return Err(Error::InvalidParameter("profile needs at least two nodes".into()));
        }
        if values.len() != m || derivs.len() != m || second.len() != m {
            return Err(Error::InvalidParameter("profile arrays differ in length".into()));
        }
        if nodes[0] != 0.0 {
            return Err(Error::InvalidParameter("profile must start at r = 0".into()));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("profile nodes must be strictly increasing".into()));
        }
        Ok(Self { nodes, values, derivs, second })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivs(&self) -> &[f64] {
        &self.derivs
    }

    pub fn second_derivs(&self) -> &[f64] {
        &self.second
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Outer radius of the profile.
    pub fn radius(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// Pointwise multiple `c·u`.
    pub fn scaled(&self, c: f64) -> Self {
        let mul = |v: &[f64]| v.iter().map(|x| c * x).collect::<Vec<_>>();
        Self {
            nodes: self.nodes.clone(),
            values: mul(&self.values),
            derivs: mul(&self.derivs),
            second: mul(&self.second),
        }
    }

    fn interval(&self, r: f64) -> usize {
        let idx = self.nodes.partition_point(|&x| x <= r);
        idx.clamp(1, self.nodes.len() - 1) - 1
    }

    /// Interpolated (u, u′, u″) at `r`; `r` is clamped to the profile range.
    pub fn eval_full(&self, r: f64) -> (f64, f64, f64) {
        let r = r.clamp(0.0, self.radius());
        let i = self.interval(r);
        let seg = Segment {
            x0: self.nodes[i],
            h: self.nodes[i + 1] - self.nodes[i],
            y0: self.values[i],
            d0: self.derivs[i],
            s0: self.second[i],
            y1: self.values[i + 1],
            d1: self.derivs[i + 1],
            s1: self.second[i + 1],
        };
        seg.eval(r)
    }

    /// Interpolated (u, u′) at `r`.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        let (u, du, _) = self.eval_full(r);
        (u, du)
    }

    pub fn value(&self, r: f64) -> f64 {
        self.eval(r).0
    }

    pub fn deriv(&self, r: f64) -> f64 {
        self.eval(r).1
    }

    /// Local node spacing around `r`.
    pub fn spacing_at(&self, r: f64) -> f64 {
        let i = self.interval(r.clamp(0.0, self.radius()));
        self.nodes[i + 1] - self.nodes[i]
    }

    /// ∫₀^R g(r, u, u′) dr by 10-point Gauss–Legendre on every node interval.
    pub fn integrate<F: Fn(f64, f64, f64) -> f64>(&self, g: F) -> f64 {
        let rule = gl10();
        let mut total = 0.0;
        for i in 0..self.nodes.len() - 1 {
            let seg = Segment {
                x0: self.nodes[i],
                h: self.nodes[i + 1] - self.nodes[i],
                y0: self.values[i],
                d0: self.derivs[i],
                s0: self.second[i],
                y1: self.values[i + 1],
                d1: self.derivs[i + 1],
                s1: self.second[i + 1],
            };
            total += rule.integrate(seg.x0, seg.x0 + seg.h, |r| {
                let (u, du, _) = seg.eval(r);
                g(r, u, du)
            });
        }
        total
    }

    /// Largest u′ over the nodes; radial ground states have u′ ≤ 0.
    pub fn max_deriv(&self) -> f64 {
        self.derivs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_interior_value(&self) -> f64 {
        self.values[..self.values.len() - 1].iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    x0: f64,
    h: f64,
    y0: f64,
    d0: f64,
    s0: f64,
    y1: f64,
    d1: f64,
    s1: f64,
}

impl Segment {
    fn eval(&self, r: f64) -> (f64, f64, f64) {
        let h = self.h;
        let t = (r - self.x0) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t3 * t;
        let t5 = t4 * t;

        let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
        let h3 = 0.5 * (t3 - 2.0 * t4 + t5);
        let h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h5 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;

        let dh0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
        let dh1 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
        let dh2 = 0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4);
        let dh3 = 0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4);
        let dh4 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
        let dh5 = -dh0;

        let sh0 = -60.0 * t + 180.0 * t2 - 120.0 * t3;
        let sh1 = -36.0 * t + 96.0 * t2 - 60.0 * t3;
        let sh2 = 0.5 * (2.0 - 18.0 * t + 36.0 * t2 - 20.0 * t3);
        let sh3 = 0.5 * (6.0 * t - 24.0 * t2 + 20.0 * t3);
        let sh4 = -24.0 * t + 84.0 * t2 - 60.0 * t3;
        let sh5 = -sh0;

        let (a0, a1, a2, a3, a4, a5) = (
            self.y0,
            h * self.d0,
            h * h * self.s0,
            h * h * self.s1,
            h * self.d1,
            self.y1,
        );
        let u = a0 * h0 + a1 * h1 + a2 * h2 + a3 * h3 + a4 * h4 + a5 * h5;
        let du = (a0 * dh0 + a1 * dh1 + a2 * dh2 + a3 * dh3 + a4 * dh4 + a5 * dh5) / h;
        let ddu = (a0 * sh0 + a1 * sh1 + a2 * sh2 + a3 * sh3 + a4 * sh4 + a5 * sh5) / (h * h);
        (u, du, ddu)
    }
}

/// Quintic Hermite value on one step, shared with the shooting integrator
/// for zero location.
pub(crate) fn hermite_value(x0: f64, x1: f64, a: [f64; 3], b: [f64; 3], r: f64) -> (f64, f64) {
    let seg = Segment { x0, h: x1 - x0, y0: a[0], d0: a[1], s0: a[2], y1: b[0], d1: b[1], s1: b[2] };
    let (u, du, _) = seg.eval(r);
    (u, du)
}

fn estimate_second(nodes: &[f64], d: &[f64]) -> Vec<f64> {
    let m = nodes.len();
    if m < 3 {
        let s = if m == 2 { (d[1] - d[0]) / (nodes[1] - nodes[0]) } else { 0.0 };
        return vec![s; m];
    }
    // Derivative at x_k of the parabola through three consecutive points.
    let parabola = |i: usize, k: usize| {
        let (x0, x1, x2) = (nodes[i], nodes[i + 1], nodes[i + 2]);
        let (y0, y1, y2) = (d[i], d[i + 1], d[i + 2]);
        let x = nodes[k];
        y0 * ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2))
            + y1 * ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2))
            + y2 * ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1))
    };
    (0..m)
        .map(|k| {
            let i = k.saturating_sub(1).min(m - 3);
            parabola(i, k)
        })
        .collect()
}

/// ω_{N−1}∫₀^R u′(r)² r^{N−1} dr.
pub fn dirichlet_energy(profile: &RadialProfile, dim: u32) -> f64 {
    let k = dim as i32 - 1;
    sphere_area(dim) * profile.integrate(|r, _, du| du * du * r.powi(k))
}

/// ω_{N−1}∫₀^R |u|^s r^{N−1} dr, the s-th power of the L^s norm.
pub fn lp_norm_pow(profile: &RadialProfile, dim: u32, s: f64) -> f64 {
    let k = dim as i32 - 1;
    sphere_area(dim) * profile.integrate(|r, u, _| u.abs().powf(s) * r.powi(k))
}

/// (ω_{N−1}∫₀^R |u|^s r^{N−1} dr)^{1/s}.
pub fn lp_norm(profile: &RadialProfile, dim: u32, s: f64) -> Result<f64> {
    if !(s >= 1.0) {
        return Err(Error::InvalidParameter(format!("L^s exponent must be >= 1, got {s}")));
    }
    Ok(lp_norm_pow(profile, dim, s).powf(1.0 / s))
}
