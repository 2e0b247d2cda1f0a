//! Bracketing scalar root finders.
//!
//! Both solvers assume `f(lo)` and `f(hi)` have opposite signs (or one is
//! zero). They never evaluate outside `[lo, hi]`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub root: f64,
    pub value: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Termination {
    /// Stop once `|f(x)| <= ftol`.
    pub ftol: f64,
    /// Stop once the bracket is narrower than `xtol_rel * |x| + xtol_abs`.
    pub xtol_rel: f64,
    pub xtol_abs: f64,
    pub max_iter: usize,
}

impl Default for Termination {
    fn default() -> Self {
        Self {
            ftol: 0.0,
            xtol_rel: 4.0 * f64::EPSILON,
            xtol_abs: 0.0,
            max_iter: 200,
        }
    }
}

fn opposite(a: f64, b: f64) -> bool {
    (a <= 0.0 && b >= 0.0) || (a >= 0.0 && b <= 0.0)
}

/// Plain bisection. Fallible `f` so callers can propagate solver failures.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, term: Termination) -> Result<RootResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(RootResult { root: a, value: 0.0, bracket: (a, a), iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(RootResult { root: b, value: 0.0, bracket: (b, b), iterations: 0 });
    }
    if !opposite(fa, fb) {
        return Err(Error::RootFinding(format!(
            "no sign change on [{a}, {b}]: f = {fa}, {fb}"
        )));
    }
    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    for it in 1..=term.max_iter {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm.abs() < best.1.abs() {
            best = (m, fm);
        }
        if fm == 0.0 || fm.abs() <= term.ftol {
            return Ok(RootResult { root: m, value: fm, bracket: (a, b), iterations: it });
        }
        if opposite(fa, fm) {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
        if (b - a) <= term.xtol_rel * m.abs() + term.xtol_abs {
            return Ok(RootResult { root: best.0, value: best.1, bracket: (a, b), iterations: it });
        }
    }
    Ok(RootResult { root: best.0, value: best.1, bracket: (a, b), iterations: term.max_iter })
}

/// Brent's method (inverse quadratic interpolation with bisection safeguard).
pub fn brent<F>(mut f: F, lo: f64, hi: f64, term: Termination) -> Result<RootResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(RootResult { root: a, value: 0.0, bracket: (a, a), iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(RootResult { root: b, value: 0.0, bracket: (b, b), iterations: 0 });
    }
    if !opposite(fa, fb) {
        return Err(Error::RootFinding(format!(
            "no sign change on [{a}, {b}]: f = {fa}, {fb}"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for it in 1..=term.max_iter {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * (term.xtol_rel * b.abs() + term.xtol_abs);
        let m = 0.5 * (c - b);
        if fb == 0.0 || fb.abs() <= term.ftol || m.abs() <= tol {
            let bracket = (b.min(c), b.max(c));
            return Ok(RootResult { root: b, value: fb, bracket, iterations: it });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Ok(RootResult { root: b, value: fb, bracket: (b.min(c), b.max(c)), iterations: term.max_iter })
}
