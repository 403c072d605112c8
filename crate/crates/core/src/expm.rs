//! Dense matrix exponential by Pade approximation with scaling and squaring
//! (Higham 2005, as in standard numerical libraries).

use ndarray::{Array2, ArrayView2};
use ndarray_linalg::Inverse;
use num_complex::Complex64;

use crate::error::{Error, Result};

const THETA_3: f64 = 1.495_585_217_958_292e-2;
const THETA_5: f64 = 2.539_398_330_063_230e-1;
const THETA_7: f64 = 9.504_178_996_162_932e-1;
const THETA_9: f64 = 2.097_847_961_257_068;
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

fn one_norm(m: &ArrayView2<Complex64>) -> f64 {
    let mut best: f64 = 0.0;
    for col in m.columns() {
        let s: f64 = col.iter().map(|v| v.norm()).sum();
        best = best.max(s);
    }
    best
}

fn eye(n: usize) -> Array2<Complex64> {
    Array2::eye(n)
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Pade numerator/denominator split for odd orders 3..=9: returns (U, V) with
/// r = (V - U)^-1 (V + U).
fn pade_uv(a: &Array2<Complex64>, b: &[f64]) -> (Array2<Complex64>, Array2<Complex64>) {
    let n = a.nrows();
    let a2 = a.dot(a);
    // Even powers of A: A^0, A^2, A^4, ...
    let mut powers = vec![eye(n)];
    let half_terms = b.len() / 2;
    for _ in 1..half_terms {
        let next = powers.last().unwrap().dot(&a2);
        powers.push(next);
    }
    let mut u_poly = Array2::<Complex64>::zeros((n, n));
    let mut v = Array2::<Complex64>::zeros((n, n));
    for (k, p) in powers.iter().enumerate() {
        u_poly = u_poly + p * re(b[2 * k + 1]);
        v = v + p * re(b[2 * k]);
    }
    (a.dot(&u_poly), v)
}

fn pade_13_uv(a: &Array2<Complex64>) -> (Array2<Complex64>, Array2<Complex64>) {
    let n = a.nrows();
    let a2 = a.dot(a);
    let a4 = a2.dot(&a2);
    let a6 = a4.dot(&a2);
    let b = &B13;
    let u_inner = a6.dot(&(&a6 * re(b[13]) + &a4 * re(b[11]) + &a2 * re(b[9])));
    let u_poly = u_inner + &a6 * re(b[7]) + &a4 * re(b[5]) + &a2 * re(b[3]) + eye(n) * re(b[1]);
    let u = a.dot(&u_poly);
    let v_inner = a6.dot(&(&a6 * re(b[12]) + &a4 * re(b[10]) + &a2 * re(b[8])));
    let v = v_inner + &a6 * re(b[6]) + &a4 * re(b[4]) + &a2 * re(b[2]) + eye(n) * re(b[0]);
    (u, v)
}

fn pade_eval(u: Array2<Complex64>, v: Array2<Complex64>) -> Result<Array2<Complex64>> {
    let denom = &v - &u;
    let numer = &v + &u;
    let inv = denom.inv().map_err(Error::from)?;
    Ok(inv.dot(&numer))
}

/// exp(A) for a square complex matrix.
pub(crate) fn expm(a: &ArrayView2<Complex64>) -> Result<Array2<Complex64>> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let norm = one_norm(a);
    if !norm.is_finite() {
        return Err(Error::NonFinite);
    }
    let a = a.to_owned();
    if norm <= THETA_3 {
        let (u, v) = pade_uv(&a, &B3);
        return pade_eval(u, v);
    }
    if norm <= THETA_5 {
        let (u, v) = pade_uv(&a, &B5);
        return pade_eval(u, v);
    }
    if norm <= THETA_7 {
        let (u, v) = pade_uv(&a, &B7);
        return pade_eval(u, v);
    }
    if norm <= THETA_9 {
        let (u, v) = pade_uv(&a, &B9);
        return pade_eval(u, v);
    }
    let s = ((norm / THETA_13).log2().ceil()).max(0.0) as u32;
    let scaled = &a * re((0.5f64).powi(s as i32));
    let (u, v) = pade_13_uv(&scaled);
    let mut result = pade_eval(u, v)?;
    for _ in 0..s {
        result = result.dot(&result);
    }
    Ok(result)
}
