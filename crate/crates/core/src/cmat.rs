//! Small helpers for dense complex matrices.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex64;

pub(crate) fn dag(m: &ArrayView2<Complex64>) -> Array2<Complex64> {
    let mut out = Array2::zeros((m.ncols(), m.nrows()));
    for ((i, j), v) in m.indexed_iter() {
        out[[j, i]] = v.conj();
    }
    out
}

pub(crate) fn trace(m: &ArrayView2<Complex64>) -> Complex64 {
    m.diag().sum()
}

/// Tr[a b] without forming the product.
pub(crate) fn trace_product(a: &ArrayView2<Complex64>, b: &ArrayView2<Complex64>) -> Complex64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    let mut acc = Complex64::default();
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[[i, j]] * b[[j, i]];
        }
    }
    acc
}

pub(crate) fn max_abs(m: &ArrayView2<Complex64>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

pub(crate) fn max_abs_diff(a: &ArrayView2<Complex64>, b: &ArrayView2<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Max entrywise deviation from Hermiticity, max |M - M^dag|.
pub(crate) fn hermiticity_deviation(m: &ArrayView2<Complex64>) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    dev
}

pub(crate) fn hermitize(m: &ArrayView2<Complex64>) -> Array2<Complex64> {
    let half = Complex64::new(0.5, 0.0);
    let md = dag(m);
    (m.to_owned() + &md) * half
}

pub(crate) fn is_finite(m: &ArrayView2<Complex64>) -> bool {
    m.iter().all(|v| v.re.is_finite() && v.im.is_finite())
}

/// Outer product u v^dag.
pub(crate) fn outer(u: &ArrayView1<Complex64>, v: &ArrayView1<Complex64>) -> Array2<Complex64> {
    let mut out = Array2::zeros((u.len(), v.len()));
    for (i, a) in u.iter().enumerate() {
        for (j, b) in v.iter().enumerate() {
            out[[i, j]] = a * b.conj();
        }
    }
    out
}

/// Column-stacked vec(m): columns concatenated, entry (m, n) at index n*C + m.
pub(crate) fn vec_column_stacked(m: &ArrayView2<Complex64>) -> Array1<Complex64> {
    let c = m.nrows();
    let mut out = Array1::zeros(c * c);
    for n in 0..c {
        for row in 0..c {
            out[n * c + row] = m[[row, n]];
        }
    }
    out
}

pub(crate) fn unvec_column_stacked(v: &ArrayView1<Complex64>, c: usize) -> Array2<Complex64> {
    debug_assert_eq!(v.len(), c * c);
    let mut out = Array2::zeros((c, c));
    for n in 0..c {
        for row in 0..c {
            out[[row, n]] = v[n * c + row];
        }
    }
    out
}
