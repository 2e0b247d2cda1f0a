//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

/// Sign of J_ν(x)·Γ(ν+1)(2/x)^ν = Σ_k (−x²/4)^k / (k! (ν+1)_k), summed in
/// exact rational arithmetic for rational ν = nu_num/nu_den and dyadic x.
fn bessel_series_sign(nu_num: i64, nu_den: i64, x: &BigRational) -> i32 {
    let z = -(x * x) / BigRational::from_integer(BigInt::from(4));
    let nu = BigRational::new(BigInt::from(nu_num), BigInt::from(nu_den));
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    let tiny = BigRational::new(BigInt::one(), BigInt::from(10).pow(40));
    for k in 1..200i64 {
        let kk = BigRational::from_integer(BigInt::from(k));
        term = term * &z / (&kk * (&nu + &kk));
        sum += &term;
        if k > 10 && term.abs() < tiny {
            break;
        }
    }
    if sum.is_zero() {
        0
    } else if sum.is_positive() {
        1
    } else {
        -1
    }
}

/// First positive zero of J_ν by bisection on the exact series, for
/// ν ∈ [0.5, 2] (bracket [2, 6] holds exactly one zero there).
pub fn bessel_zero_oracle(nu_num: i64, nu_den: i64) -> f64 {
    let mut lo = BigRational::from_integer(BigInt::from(2));
    let mut hi = BigRational::from_integer(BigInt::from(6));
    let two = BigRational::from_integer(BigInt::from(2));
    assert_eq!(bessel_series_sign(nu_num, nu_den, &lo), 1);
    assert_eq!(bessel_series_sign(nu_num, nu_den, &hi), -1);
    for _ in 0..60 {
        let mid = (&lo + &hi) / &two;
        if bessel_series_sign(nu_num, nu_den, &mid) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ((lo + hi) / two).to_f64().unwrap()
}

/// u(R) for u″ + ((N−1)/r)u′ + λu = 0, u(0) = 1, by classical RK4 started
/// at r = R/20 from the power series Σ c_k r^{2k}, c_k = −λc_{k−1}/(2k(2k+N−2)).
fn linear_shot(dim: u32, radius: f64, lambda: f64, steps: usize) -> f64 {
    let n = dim as f64;
    let r0 = 0.05 * radius;
    let (mut u, mut du, mut c) = (1.0, 0.0, 1.0);
    for k in 1..30 {
        let kk = k as f64;
        c *= -lambda / (2.0 * kk * (2.0 * kk + n - 2.0));
        u += c * r0.powi(2 * k);
        du += 2.0 * kk * c * r0.powi(2 * k - 1);
    }
    let f = |r: f64, y: [f64; 2]| [y[1], -(n - 1.0) / r * y[1] - lambda * y[0]];
    let h = (radius - r0) / steps as f64;
    let mut y = [u, du];
    for i in 0..steps {
        let r = r0 + i as f64 * h;
        let k1 = f(r, y);
        let k2 = f(r + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
        let k3 = f(r + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
        let k4 = f(r + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for j in 0..2 {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    y[0]
}

/// λ₁ of the Dirichlet Laplacian on B_R: march λ upward until u(R) turns
/// negative, then bisect.
pub fn linear_shooting_eigenvalue(dim: u32, radius: f64) -> f64 {
    let steps = 4_000;
    let scale = 1.0 / (radius * radius);
    let mut lo = 0.5 * scale;
    assert!(linear_shot(dim, radius, lo, steps) > 0.0);
    let mut hi = lo;
    while linear_shot(dim, radius, hi, steps) > 0.0 {
        lo = hi;
        hi *= 1.25;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if linear_shot(dim, radius, mid, steps) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// ‖∇U‖²/‖U‖²_{2*} for U = (1+r²)^{−(N−2)/2}, by the trapezoid rule in
/// t = ln r on [−T, T] (integrands decay exponentially in |t|).
pub fn sobolev_trapezoid(dim: u32) -> f64 {
    let n = dim as f64;
    let crit = 2.0 * n / (n - 2.0);
    let omega = kirchhoff_ball::constants::sphere_area(dim);
    let (t_max, m) = (60.0, 200_000);
    let h = 2.0 * t_max / m as f64;
    let (mut grad, mut pow) = (0.0, 0.0);
    for i in 0..=m {
        let t = -t_max + i as f64 * h;
        let r = t.exp();
        let w = if i == 0 || i == m { 0.5 } else { 1.0 };
        let base = 1.0 + r * r;
        let du = -(n - 2.0) * r * base.powf(-n / 2.0);
        let u = base.powf(-(n - 2.0) / 2.0);
        // dr = r dt
        grad += w * du * du * r.powf(n - 1.0) * r;
        pow += w * u.powf(crit) * r.powf(n - 1.0) * r;
    }
    omega * grad * h / (omega * pow * h).powf(2.0 / crit)
}

/// Closed-form root of f = 1 when b = 0: f = a·y^{(p−2)/(p−q)} with
/// y = αμ^{(q−2)/(p−2)}/λ, so α* = (λ/μ^{(q−2)/(p−2)})·a^{−(p−q)/(p−2)}.
pub fn local_limit_root(a: f64, lambda: f64, mu: f64, q: f64, p: f64) -> f64 {
    lambda / mu.powf((q - 2.0) / (p - 2.0)) * a.powf(-(p - q) / (p - 2.0))
}
