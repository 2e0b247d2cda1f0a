//! Dormand–Prince 5(4) stepper with FSAL and standard step-size control.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub type State<const D: usize> = [f64; D];

fn axpy<const D: usize>(y: &State<D>, h: f64, terms: &[(f64, &State<D>)]) -> State<D> {
    let mut out = *y;
    for (c, k) in terms {
        if *c != 0.0 {
            for i in 0..D {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

/// Accepted step: state and derivative at both ends.
#[derive(Debug, Clone, Copy)]
pub struct Step<const D: usize> {
    pub t0: f64,
    pub y0: State<D>,
    pub f0: State<D>,
    pub t1: f64,
    pub y1: State<D>,
    pub f1: State<D>,
}

#[derive(Debug, Clone)]
pub struct Dopri5<const D: usize> {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub h_min: f64,
    pub t: f64,
    pub y: State<D>,
    f: State<D>,
    h: f64,
    pub accepted: usize,
    pub rejected: usize,
}

impl<const D: usize> Dopri5<D> {
    pub fn new<F>(rhs: &F, t0: f64, y0: State<D>, h0: f64, rtol: f64, atol: f64) -> Self
    where
        F: Fn(f64, &State<D>) -> State<D>,
    {
        let f = rhs(t0, &y0);
        Self {
            rtol,
            atol,
            h_max: f64::INFINITY,
            h_min: 0.0,
            t: t0,
            y: y0,
            f,
            h: h0,
            accepted: 0,
            rejected: 0,
        }
    }

    /// Single trial step of size `h` from the current state, without
    /// touching the controller. Returns the fifth-order solution.
    pub fn trial<F>(&self, rhs: &F, h: f64) -> (State<D>, State<D>)
    where
        F: Fn(f64, &State<D>) -> State<D>,
    {
        let (y1, f1, _) = self.raw_step(rhs, h);
        (y1, f1)
    }

    fn raw_step<F>(&self, rhs: &F, h: f64) -> (State<D>, State<D>, State<D>)
    where
        F: Fn(f64, &State<D>) -> State<D>,
    {
        let t = self.t;
        let y = &self.y;
        let k1 = self.f;
        let k2 = rhs(t + C2 * h, &axpy(y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &axpy(y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(t + C4 * h, &axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(
            t + C5 * h,
            &axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            t + h,
            &axpy(y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y1 = axpy(y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = rhs(t + h, &y1);
        let mut err = [0.0; D];
        for i in 0..D {
            err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        (y1, k7, err)
    }

    /// Advance by one accepted step, retrying with smaller steps as needed.
    pub fn advance<F>(&mut self, rhs: &F) -> Result<Step<D>>
    where
        F: Fn(f64, &State<D>) -> State<D>,
    {
        let mut h = self.h.min(self.h_max);
        loop {
            if h <= self.h_min || h <= f64::EPSILON * self.t.abs() {
                return Err(Error::StepSizeUnderflow { radius: self.t });
            }
            let (y1, f1, err) = self.raw_step(rhs, h);
            let mut sum = 0.0;
            let mut finite = true;
            for i in 0..D {
                let sc = self.atol + self.rtol * self.y[i].abs().max(y1[i].abs());
                let e = err[i] / sc;
                sum += e * e;
                finite &= y1[i].is_finite();
            }
            let norm = (sum / D as f64).sqrt();
            if !finite || !norm.is_finite() {
                self.rejected += 1;
                h *= 0.1;
                continue;
            }
            if norm <= 1.0 {
                let fac = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
                let step = Step { t0: self.t, y0: self.y, f0: self.f, t1: self.t + h, y1, f1 };
                self.t += h;
                self.y = y1;
                self.f = f1;
                self.h = (h * fac).min(self.h_max);
                self.accepted += 1;
                return Ok(step);
            }
            self.rejected += 1;
            h *= (0.9 * norm.powf(-0.2)).clamp(0.1, 1.0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let rhs = |_t: f64, y: &[f64; 1]| [-y[0]];
        let mut s = Dopri5::new(&rhs, 0.0, [1.0], 1e-3, 1e-10, 1e-12);
        while s.t < 5.0 {
            s.h_max = 5.0 - s.t;
            s.advance(&rhs).unwrap();
        }
        assert!((s.y[0] - (-5.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn harmonic_oscillator_order() {
        let rhs = |_t: f64, y: &[f64; 2]| [y[1], -y[0]];
        let s = Dopri5::new(&rhs, 0.0, [0.0, 1.0], 0.1, 1.0, 1.0);
        let (y, _) = s.trial(&rhs, 0.1);
        let e1 = (y[0] - 0.1f64.sin()).abs();
        let (y, _) = s.trial(&rhs, 0.05);
        let e2 = (y[0] - 0.05f64.sin()).abs();
        // local error is O(h^6)
        assert!(e1 / e2 > 40.0, "{e1} {e2}");
    }
}
