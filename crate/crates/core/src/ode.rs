//! Explicit Runge–Kutta integration of matrix-valued ODEs `dY/dt = f(t, Y)`
//! onto a prescribed grid of sample times.
//!
//! The adaptive mode is the Dormand–Prince 5(4) pair with FSAL; its local error
//! is measured component-wise on the real and imaginary parts separately. Steps
//! are shortened to land exactly on every sample time. The fixed mode is the
//! classical fourth-order scheme with a constant number of sub-steps per sample
//! interval, which makes the output independent of any error estimate.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::C64;

type M = DMatrix<C64>;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    Adaptive { rtol: f64, atol: f64 },
    Fixed { step: f64 },
}

impl Default for Method {
    fn default() -> Self {
        Method::Adaptive { rtol: 1e-8, atol: 1e-10 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

const MAX_STEPS: usize = 5_000_000;

// Dormand–Prince tableau.
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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// `y + h Σ cᵢ kᵢ`
fn combine(y: &M, h: f64, terms: &[(f64, &M)]) -> M {
    let mut out = y.clone();
    for &(c, k) in terms {
        if c != 0.0 {
            let s = h * c;
            for (o, x) in out.iter_mut().zip(k.iter()) {
                *o += x * s;
            }
        }
    }
    out
}

fn error_norm(y: &M, y_new: &M, err: &M, rtol: f64, atol: f64) -> f64 {
    let mut worst = 0.0f64;
    for ((a, b), e) in y.iter().zip(y_new.iter()).zip(err.iter()) {
        let sre = atol + rtol * a.re.abs().max(b.re.abs());
        let sim = atol + rtol * a.im.abs().max(b.im.abs());
        worst = worst.max(e.re.abs() / sre).max(e.im.abs() / sim);
    }
    worst
}

fn max_norm(y: &M) -> f64 {
    y.iter().fold(0.0, |acc, z| acc.max(z.re.abs()).max(z.im.abs()))
}

/// Integrates from `times[0]` through every entry of `times` (strictly
/// increasing). `sample` sees the state at each sample time and may modify it
/// in place; integration continues from the modified state.
pub fn integrate<F, S>(mut rhs: F, y0: M, times: &[f64], method: Method, mut sample: S) -> Result<Stats>
where
    F: FnMut(f64, &M, &mut M),
    S: FnMut(usize, f64, &mut M) -> Result<()>,
{
    let Some(&t_first) = times.first() else {
        return Ok(Stats::default());
    };
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("sample times must be strictly increasing".into()));
    }
    let mut y = y0;
    sample(0, t_first, &mut y)?;
    match method {
        Method::Adaptive { rtol, atol } => adaptive(&mut rhs, y, times, rtol, atol, &mut sample),
        Method::Fixed { step } => fixed(&mut rhs, y, times, step, &mut sample),
    }
}

fn adaptive<F, S>(rhs: &mut F, mut y: M, times: &[f64], rtol: f64, atol: f64, sample: &mut S) -> Result<Stats>
where
    F: FnMut(f64, &M, &mut M),
    S: FnMut(usize, f64, &mut M) -> Result<()>,
{
    if !(rtol > 0.0 && atol > 0.0) {
        return Err(Error::Config("integrator tolerances must be positive".into()));
    }
    let (r, c) = y.shape();
    let mut stats = Stats::default();
    let mut t = times[0];
    let mut k1 = M::zeros(r, c);
    let mut k2 = M::zeros(r, c);
    let mut k3 = M::zeros(r, c);
    let mut k4 = M::zeros(r, c);
    let mut k5 = M::zeros(r, c);
    let mut k6 = M::zeros(r, c);
    let mut k7 = M::zeros(r, c);

    rhs(t, &y, &mut k1);
    stats.rhs_evals += 1;

    // Initial step from the scale of y and f.
    let scale = atol + rtol * max_norm(&y);
    let d0 = max_norm(&y) / scale;
    let d1 = max_norm(&k1) / scale;
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let mut fsal_valid = true;

    for (idx, &target) in times.iter().enumerate().skip(1) {
        while t < target {
            if stats.accepted + stats.rejected > MAX_STEPS {
                return Err(Error::Stiffness { t, norm: max_norm(&y) });
            }
            if !fsal_valid {
                rhs(t, &y, &mut k1);
                stats.rhs_evals += 1;
                fsal_valid = true;
            }
            let remaining = target - t;
            let lands = h >= remaining * (1.0 - 1e-12);
            let step = if lands { remaining } else { h };
            if step < 1e-14 * t.abs().max(1.0) {
                return Err(Error::Stiffness { t, norm: max_norm(&y) });
            }

            let y2 = combine(&y, step, &[(A21, &k1)]);
            rhs(t + C2 * step, &y2, &mut k2);
            let y3 = combine(&y, step, &[(A31, &k1), (A32, &k2)]);
            rhs(t + C3 * step, &y3, &mut k3);
            let y4 = combine(&y, step, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
            rhs(t + C4 * step, &y4, &mut k4);
            let y5 = combine(&y, step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
            rhs(t + C5 * step, &y5, &mut k5);
            let y6 = combine(&y, step, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
            rhs(t + step, &y6, &mut k6);
            let y_new = combine(&y, step, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            rhs(t + step, &y_new, &mut k7);
            stats.rhs_evals += 6;

            let err = combine(&M::zeros(r, c), step, &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)]);
            let err_norm = error_norm(&y, &y_new, &err, rtol, atol);
            if !err_norm.is_finite() {
                return Err(Error::Stiffness { t, norm: max_norm(&y) });
            }

            if err_norm <= 1.0 {
                stats.accepted += 1;
                t = if lands { target } else { t + step };
                y = y_new;
                std::mem::swap(&mut k1, &mut k7);
                let factor = if err_norm == 0.0 { 5.0 } else { (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0) };
                // A step clipped to a sample time says little about the
                // natural step size, so never shrink h because of it.
                h = if lands { h.max(step * factor) } else { step * factor };
            } else {
                stats.rejected += 1;
                h = step * (0.9 * err_norm.powf(-0.2)).clamp(0.2, 1.0);
            }
        }
        let before = y.clone();
        sample(idx, t, &mut y)?;
        if y != before {
            fsal_valid = false;
        }
    }
    Ok(stats)
}

fn fixed<F, S>(rhs: &mut F, mut y: M, times: &[f64], step: f64, sample: &mut S) -> Result<Stats>
where
    F: FnMut(f64, &M, &mut M),
    S: FnMut(usize, f64, &mut M) -> Result<()>,
{
    if !(step > 0.0) {
        return Err(Error::Config(format!("fixed step must be positive, got {step}")));
    }
    let (r, c) = y.shape();
    let mut stats = Stats::default();
    let mut k1 = M::zeros(r, c);
    let mut k2 = M::zeros(r, c);
    let mut k3 = M::zeros(r, c);
    let mut k4 = M::zeros(r, c);

    for idx in 1..times.len() {
        let (t0, t1) = (times[idx - 1], times[idx]);
        let substeps = ((t1 - t0) / step - 1e-9).ceil().max(1.0) as usize;
        let h = (t1 - t0) / substeps as f64;
        for s in 0..substeps {
            let t = t0 + s as f64 * h;
            rhs(t, &y, &mut k1);
            rhs(t + 0.5 * h, &combine(&y, h, &[(0.5, &k1)]), &mut k2);
            rhs(t + 0.5 * h, &combine(&y, h, &[(0.5, &k2)]), &mut k3);
            rhs(t + h, &combine(&y, h, &[(1.0, &k3)]), &mut k4);
            y = combine(&y, h, &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)]);
            stats.accepted += 1;
            stats.rhs_evals += 4;
        }
        sample(idx, t1, &mut y)?;
    }
    Ok(stats)
}
