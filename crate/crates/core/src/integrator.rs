//! Embedded Dormand-Prince 5(4) integrator with PI step-size control and
//! fourth-order dense output, for complex state vectors.

use ndarray::{Array1, ArrayView1};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerances and limits for adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-10,
            max_steps: 2_000_000,
        }
    }
}

const C2: f64 = 0.2;
const C3: f64 = 0.3;
const C4: f64 = 0.8;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 0.2;
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

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFE: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const FACC1: f64 = 5.0; // 1 / fac1, fac1 = 0.2
const FACC2: f64 = 0.1; // 1 / fac2, fac2 = 10

fn scaled_rms(err: &Array1<Complex64>, y0: &Array1<Complex64>, y1: &Array1<Complex64>, opts: &IntegratorOptions) -> f64 {
    let n = err.len() as f64;
    let sum: f64 = err
        .iter()
        .zip(y0.iter().zip(y1.iter()))
        .map(|(e, (a, b))| {
            let sc = opts.atol + opts.rtol * a.norm().max(b.norm());
            (e.norm() / sc).powi(2)
        })
        .sum();
    (sum / n).sqrt()
}

fn initial_step<F>(rhs: &F, y0: &Array1<Complex64>, f0: &Array1<Complex64>, t_final: f64, opts: &IntegratorOptions) -> f64
where
    F: Fn(f64, &ArrayView1<Complex64>) -> Array1<Complex64>,
{
    let n = y0.len() as f64;
    let sc = |y: &Complex64| opts.atol + opts.rtol * y.norm();
    let d0 = (y0.iter().map(|y| (y.norm() / sc(y)).powi(2)).sum::<f64>() / n).sqrt();
    let d1 = (f0
        .iter()
        .zip(y0.iter())
        .map(|(f, y)| (f.norm() / sc(y)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(t_final);
    let y1 = y0 + &(f0 * Complex64::new(h0, 0.0));
    let f1 = rhs(h0, &y1.view());
    let d2 = (f1
        .iter()
        .zip(f0.iter().zip(y0.iter()))
        .map(|(a, (b, y))| ((a - b).norm() / sc(y)).powi(2))
        .sum::<f64>()
        / n)
        .sqrt()
        / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(t_final)
}

/// Integrate y' = rhs(t, y) from t = 0 to `t_final`, invoking `on_record` at
/// every time in `record_times` (sorted, within [0, t_final]) using dense
/// output. Returns the state at `t_final`.
pub(crate) fn integrate_with_records<F, R>(
    rhs: F,
    y0: Array1<Complex64>,
    t_final: f64,
    record_times: &[f64],
    opts: &IntegratorOptions,
    mut on_record: R,
) -> Result<Array1<Complex64>>
where
    F: Fn(f64, &ArrayView1<Complex64>) -> Array1<Complex64>,
    R: FnMut(f64, &Array1<Complex64>) -> Result<()>,
{
    debug_assert!(record_times.windows(2).all(|w| w[0] < w[1]));
    let mut next_record = 0;
    while next_record < record_times.len() && record_times[next_record] <= 0.0 {
        on_record(record_times[next_record], &y0)?;
        next_record += 1;
    }
    if t_final <= 0.0 {
        return Ok(y0);
    }

    let cm = |x: f64| Complex64::new(x, 0.0);
    let mut t = 0.0f64;
    let mut y = y0;
    let mut k1 = rhs(t, &y.view());
    let mut h = initial_step(&rhs, &y, &k1, t_final, opts);
    let mut facold: f64 = 1e-4;
    let mut rejected = false;
    let tiny = f64::EPSILON * 16.0;

    for _step in 0..opts.max_steps {
        if t >= t_final * (1.0 - tiny) {
            break;
        }
        if h < f64::EPSILON * 16.0 * t.abs().max(1.0) {
            return Err(Error::Stiffness { time: t, step: h });
        }
        let mut last = false;
        if t + h >= t_final {
            h = t_final - t;
            last = true;
        }

        let k2 = rhs(t + C2 * h, &(&y + &(&k1 * cm(h * A21))).view());
        let k3 = rhs(
            t + C3 * h,
            &(&y + &(&k1 * cm(h * A31)) + &(&k2 * cm(h * A32))).view(),
        );
        let k4 = rhs(
            t + C4 * h,
            &(&y + &(&k1 * cm(h * A41)) + &(&k2 * cm(h * A42)) + &(&k3 * cm(h * A43))).view(),
        );
        let k5 = rhs(
            t + C5 * h,
            &(&y
                + &(&k1 * cm(h * A51))
                + &(&k2 * cm(h * A52))
                + &(&k3 * cm(h * A53))
                + &(&k4 * cm(h * A54)))
                .view(),
        );
        let k6 = rhs(
            t + h,
            &(&y
                + &(&k1 * cm(h * A61))
                + &(&k2 * cm(h * A62))
                + &(&k3 * cm(h * A63))
                + &(&k4 * cm(h * A64))
                + &(&k5 * cm(h * A65)))
                .view(),
        );
        let y_new = &y
            + &(&k1 * cm(h * A71))
            + &(&k3 * cm(h * A73))
            + &(&k4 * cm(h * A74))
            + &(&k5 * cm(h * A75))
            + &(&k6 * cm(h * A76));
        let k7 = rhs(t + h, &y_new.view());

        let err_vec = &k1 * cm(h * E1)
            + &(&k3 * cm(h * E3))
            + &(&k4 * cm(h * E4))
            + &(&k5 * cm(h * E5))
            + &(&k6 * cm(h * E6))
            + &(&k7 * cm(h * E7));
        let err = scaled_rms(&err_vec, &y, &y_new, opts);

        let fac11 = err.powf(EXPO1);
        if err <= 1.0 {
            // dense output for any record times inside this step
            if next_record < record_times.len() && record_times[next_record] <= t + h + tiny {
                let ydiff = &y_new - &y;
                let bspl = &(&k1 * cm(h)) - &ydiff;
                let rcont1 = y.clone();
                let rcont2 = ydiff.clone();
                let rcont3 = bspl.clone();
                let rcont4 = &ydiff - &(&k7 * cm(h)) - &bspl;
                let rcont5 = &k1 * cm(h * D1)
                    + &(&k3 * cm(h * D3))
                    + &(&k4 * cm(h * D4))
                    + &(&k5 * cm(h * D5))
                    + &(&k6 * cm(h * D6))
                    + &(&k7 * cm(h * D7));
                while next_record < record_times.len()
                    && record_times[next_record] <= t + h + tiny
                {
                    let tr = record_times[next_record];
                    let theta = ((tr - t) / h).clamp(0.0, 1.0);
                    let th = cm(theta);
                    let th1 = cm(1.0 - theta);
                    let interp = &rcont1
                        + &((&rcont2
                            + &((&rcont3 + &((&rcont4 + &(&rcont5 * th1)) * th)) * th1))
                            * th);
                    on_record(tr, &interp)?;
                    next_record += 1;
                }
            }
            let fac = (fac11 / facold.powf(BETA) / SAFE).clamp(FACC2, FACC1);
            let mut h_new = h / fac;
            if rejected {
                h_new = h_new.min(h);
            }
            facold = err.max(1e-4);
            rejected = false;
            t += h;
            y = y_new;
            k1 = k7;
            if last {
                break;
            }
            h = h_new;
        } else {
            h /= (fac11 / SAFE).min(FACC1);
            rejected = true;
        }
    }

    if t < t_final * (1.0 - tiny) {
        return Err(Error::Stiffness { time: t, step: h });
    }
    while next_record < record_times.len() {
        // only reachable for record times equal to t_final up to rounding
        on_record(record_times[next_record], &y)?;
        next_record += 1;
    }
    Ok(y)
}
