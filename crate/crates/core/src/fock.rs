//! Bosonic operators on a truncated Fock space.
//!
//! All physics objects in this crate are built from [`TruncatedOperator`]: a
//! dense complex C x C matrix whose row/column index is the Fock occupation
//! number, starting at 0. The cutoff C means states |0> .. |C-1> are retained
//! and `<m|rho|n> = 0` for m, n >= C.

use ndarray::{Array1, Array2};
use ndarray_linalg::{EigValsh, UPLO};
use num_complex::Complex64;

use crate::cmat;
use crate::error::{Error, Result};
use crate::expm::expm;

/// Default tolerance for [`DensityMatrix`] validation.
pub const DENSITY_MATRIX_TOLERANCE: f64 = 1e-9;

/// Dense complex operator on the truncated Fock space with cutoff C.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    cutoff: usize,
    entries: Array2<Complex64>,
}

impl TruncatedOperator {
    /// Wrap a dense matrix, validating that it is square and finite.
    pub fn new(entries: Array2<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        if !cmat::is_finite(&entries.view()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            cutoff: entries.nrows(),
            entries,
        })
    }

    pub(crate) fn from_parts(cutoff: usize, entries: Array2<Complex64>) -> Self {
        debug_assert_eq!(entries.nrows(), cutoff);
        debug_assert_eq!(entries.ncols(), cutoff);
        Self { cutoff, entries }
    }

    pub fn zeros(cutoff: usize) -> Self {
        Self::from_parts(cutoff, Array2::zeros((cutoff, cutoff)))
    }

    pub fn identity(cutoff: usize) -> Self {
        Self::from_parts(cutoff, Array2::eye(cutoff))
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> Array2<Complex64> {
        self.entries
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_parts(self.cutoff, cmat::dag(&self.entries.view()))
    }

    /// Matrix product. Panics on cutoff mismatch, mirroring `ndarray::dot`.
    pub fn dot(&self, other: &Self) -> Self {
        assert_eq!(self.cutoff, other.cutoff, "cutoff mismatch in dot");
        Self::from_parts(self.cutoff, self.entries.dot(&other.entries))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_parts(self.cutoff, &self.entries * factor)
    }

    pub fn trace(&self) -> Complex64 {
        cmat::trace(&self.entries.view())
    }

    pub fn max_abs(&self) -> f64 {
        cmat::max_abs(&self.entries.view())
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        cmat::hermiticity_deviation(&self.entries.view())
    }

    /// [A, B] = AB - BA. Panics on cutoff mismatch.
    pub fn commutator(&self, other: &Self) -> Self {
        assert_eq!(self.cutoff, other.cutoff, "cutoff mismatch in commutator");
        let ab = self.entries.dot(&other.entries);
        let ba = other.entries.dot(&self.entries);
        Self::from_parts(self.cutoff, ab - ba)
    }
}

impl std::ops::Add for &TruncatedOperator {
    type Output = TruncatedOperator;
    fn add(self, rhs: &TruncatedOperator) -> TruncatedOperator {
        assert_eq!(self.cutoff, rhs.cutoff, "cutoff mismatch in add");
        TruncatedOperator::from_parts(self.cutoff, &self.entries + &rhs.entries)
    }
}

impl std::ops::Sub for &TruncatedOperator {
    type Output = TruncatedOperator;
    fn sub(self, rhs: &TruncatedOperator) -> TruncatedOperator {
        assert_eq!(self.cutoff, rhs.cutoff, "cutoff mismatch in sub");
        TruncatedOperator::from_parts(self.cutoff, &self.entries - &rhs.entries)
    }
}

/// Hermitian, unit-trace, positive-semidefinite operator.
///
/// Validation happens at construction: Hermiticity and trace deviations must
/// stay within `tolerance`, and the minimum eigenvalue may not drop below
/// `-tolerance` (integration noise produces tiny negative eigenvalues).
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    op: TruncatedOperator,
    tolerance: f64,
    min_eigenvalue: f64,
}

impl DensityMatrix {
    pub fn new(op: TruncatedOperator) -> Result<Self> {
        Self::with_tolerance(op, DENSITY_MATRIX_TOLERANCE)
    }

    pub fn with_tolerance(op: TruncatedOperator, tolerance: f64) -> Result<Self> {
        let herm = op.hermiticity_deviation();
        if herm > tolerance {
            return Err(Error::NotHermitian {
                deviation: herm,
                tolerance,
            });
        }
        let tr = op.trace();
        let tr_dev = (tr - Complex64::new(1.0, 0.0)).norm();
        if tr_dev > tolerance {
            return Err(Error::TraceNotOne {
                deviation: tr_dev,
                tolerance,
            });
        }
        let eigenvalues = op.entries().eigvalsh(UPLO::Lower)?;
        let min_eigenvalue = eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eigenvalue < -tolerance {
            return Err(Error::NotPositive {
                min_eigenvalue,
                floor: -tolerance,
            });
        }
        Ok(Self {
            op,
            tolerance,
            min_eigenvalue,
        })
    }

    pub fn op(&self) -> &TruncatedOperator {
        &self.op
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        self.op.entries()
    }

    pub fn cutoff(&self) -> usize {
        self.op.cutoff()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Smallest eigenvalue found at validation time.
    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    /// Tr[rho^2].
    pub fn purity(&self) -> f64 {
        cmat::trace_product(&self.op.entries().view(), &self.op.entries().view()).re
    }
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff < 2 {
        return Err(Error::InvalidCutoff { cutoff, min: 2 });
    }
    Ok(())
}

/// Annihilation operator: a[m, m+1] = sqrt(m+1).
pub fn annihilation(cutoff: usize) -> Result<TruncatedOperator> {
    check_cutoff(cutoff)?;
    let mut entries = Array2::zeros((cutoff, cutoff));
    for m in 0..cutoff - 1 {
        entries[[m, m + 1]] = Complex64::new(((m + 1) as f64).sqrt(), 0.0);
    }
    Ok(TruncatedOperator::from_parts(cutoff, entries))
}

/// Creation operator, the conjugate transpose of [`annihilation`].
pub fn creation(cutoff: usize) -> Result<TruncatedOperator> {
    Ok(annihilation(cutoff)?.dagger())
}

/// Number operator a^dag a = diag(0, 1, .., C-1), exact on the whole
/// truncated space.
pub fn number(cutoff: usize) -> Result<TruncatedOperator> {
    check_cutoff(cutoff)?;
    let mut entries = Array2::zeros((cutoff, cutoff));
    for m in 0..cutoff {
        entries[[m, m]] = Complex64::new(m as f64, 0.0);
    }
    Ok(TruncatedOperator::from_parts(cutoff, entries))
}

/// exp(i phi a^dag a): diagonal phases exp(i phi n). At phi = pi this is the
/// parity operator.
pub fn phase_rotation(phi: f64, cutoff: usize) -> Result<TruncatedOperator> {
    check_cutoff(cutoff)?;
    let mut entries = Array2::zeros((cutoff, cutoff));
    for m in 0..cutoff {
        entries[[m, m]] = Complex64::new(0.0, phi * m as f64).exp();
    }
    Ok(TruncatedOperator::from_parts(cutoff, entries))
}

/// Parity operator exp(i pi a^dag a) = diag(1, -1, 1, ...), built exactly
/// rather than through floating-point phases.
pub fn parity(cutoff: usize) -> Result<TruncatedOperator> {
    check_cutoff(cutoff)?;
    let mut entries = Array2::zeros((cutoff, cutoff));
    for m in 0..cutoff {
        entries[[m, m]] = Complex64::new(if m % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
    }
    Ok(TruncatedOperator::from_parts(cutoff, entries))
}

/// Whether |alpha|^2 <= C/4, the guard under which a displacement by `alpha`
/// stays well represented on the truncated space. Violations are advisory,
/// not errors.
pub fn displacement_guard_ok(alpha: Complex64, cutoff: usize) -> bool {
    alpha.norm_sqr() <= cutoff as f64 / 4.0
}

/// Displacement operator D_alpha = exp(alpha a^dag - alpha^* a), computed by
/// scaling-and-squaring on the truncated space. Approximately unitary in the
/// low-occupation block; see [`displacement_guard_ok`].
pub fn displacement(alpha: Complex64, cutoff: usize) -> Result<TruncatedOperator> {
    check_cutoff(cutoff)?;
    let a = annihilation(cutoff)?;
    let adag = a.dagger();
    let generator = &adag.scale(alpha) - &a.scale(alpha.conj());
    let entries = expm(&generator.entries().view())?;
    Ok(TruncatedOperator::from_parts(cutoff, entries))
}

/// Truncated coherent-state amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!),
/// not normalized.
fn coherent_amplitudes(alpha: Complex64, cutoff: usize) -> Array1<Complex64> {
    let mut v = Array1::zeros(cutoff);
    let mut c = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..cutoff {
        v[n] = c;
        c *= alpha / Complex64::new(((n + 1) as f64).sqrt(), 0.0);
    }
    v
}

/// Rank-one projector onto the normalized truncated coherent state |alpha>.
///
/// Errors with [`Error::InsufficientCutoff`] when the truncated vector holds
/// less than 0.999 of the state's norm.
pub fn coherent_state(alpha: Complex64, cutoff: usize) -> Result<DensityMatrix> {
    check_cutoff(cutoff)?;
    let v = coherent_amplitudes(alpha, cutoff);
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm < 0.999 {
        return Err(Error::InsufficientCutoff { norm, cutoff });
    }
    let v = v / Complex64::new(norm, 0.0);
    let mut rho = cmat::outer(&v.view(), &v.view());
    let tr = cmat::trace(&rho.view());
    rho /= tr;
    DensityMatrix::new(TruncatedOperator::from_parts(cutoff, rho))
}

/// Tr[rho op]. Real to within 1e-12 when `op` is Hermitian.
pub fn expectation(rho: &DensityMatrix, op: &TruncatedOperator) -> Result<Complex64> {
    if rho.cutoff() != op.cutoff() {
        return Err(Error::DimensionMismatch {
            left: rho.cutoff(),
            right: op.cutoff(),
        });
    }
    Ok(cmat::trace_product(
        &rho.entries().view(),
        &op.entries().view(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn annihilation_matrix_elements() {
        let a = annihilation(3).unwrap();
        assert_abs_diff_eq!(a.entries()[[0, 1]].re, 1.0, epsilon = 0.0);
        assert_abs_diff_eq!(a.entries()[[1, 2]].re, 2.0f64.sqrt(), epsilon = 0.0);
        let nonzero = a.entries().iter().filter(|v| v.norm() > 0.0).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn annihilation_kills_vacuum() {
        let a = annihilation(5).unwrap();
        let vacuum_column = a.entries().column(0);
        assert!(vacuum_column.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn number_operator_is_diagonal_count() {
        let c_dim = 6;
        let n_direct = number(c_dim).unwrap();
        let n_product = creation(c_dim).unwrap().dot(&annihilation(c_dim).unwrap());
        // sqrt(m)^2 rounds away from m by ~1 ulp
        assert!(cmat::max_abs_diff(&n_direct.entries().view(), &n_product.entries().view()) < 1e-14);
        for m in 0..c_dim {
            assert_abs_diff_eq!(n_direct.entries()[[m, m]].re, m as f64, epsilon = 0.0);
        }
    }

    #[test]
    fn creation_is_exact_adjoint() {
        for cutoff in [2, 4, 9] {
            let a = annihilation(cutoff).unwrap();
            let adag = creation(cutoff).unwrap();
            assert_eq!(adag.entries(), a.dagger().entries());
        }
    }

    #[test]
    fn creation_matrix_elements() {
        let adag = creation(3).unwrap();
        assert_abs_diff_eq!(adag.entries()[[1, 0]].re, 1.0, epsilon = 0.0);
        assert_abs_diff_eq!(adag.entries()[[2, 1]].re, 2.0f64.sqrt(), epsilon = 0.0);
    }

    #[test]
    fn commutator_is_identity_below_truncation_row() {
        // [a, a^dag] = 1 except on the last row/column where truncation breaks it
        let cutoff = 7;
        let a = annihilation(cutoff).unwrap();
        let comm = a.commutator(&a.dagger());
        for i in 0..cutoff - 1 {
            for j in 0..cutoff - 1 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((comm.entries()[[i, j]] - c(want, 0.0)).norm() < 1e-14);
            }
        }
        assert!((comm.entries()[[cutoff - 1, cutoff - 1]] - c(-((cutoff - 1) as f64), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn cutoff_below_two_is_rejected() {
        assert!(matches!(
            annihilation(1),
            Err(Error::InvalidCutoff { cutoff: 1, min: 2 })
        ));
        assert!(matches!(creation(0), Err(Error::InvalidCutoff { .. })));
    }

    #[test]
    fn phase_rotation_zero_is_identity() {
        let u = phase_rotation(0.0, 5).unwrap();
        assert!(cmat::max_abs_diff(&u.entries().view(), &Array2::eye(5).view()) == 0.0);
    }

    #[test]
    fn phase_rotation_pi_is_parity() {
        let u = phase_rotation(std::f64::consts::PI, 4).unwrap();
        for (m, want) in [1.0, -1.0, 1.0, -1.0].iter().enumerate() {
            assert!((u.entries()[[m, m]] - c(*want, 0.0)).norm() < 1e-15);
        }
        let p = parity(4).unwrap();
        assert!(cmat::max_abs_diff(&u.entries().view(), &p.entries().view()) < 1e-14);
    }

    #[test]
    fn phase_rotation_inverse_phase_gives_identity() {
        let phi = 1.234;
        let u = phase_rotation(phi, 6).unwrap();
        let v = phase_rotation(-phi, 6).unwrap();
        let prod = u.dot(&v);
        assert!(cmat::max_abs_diff(&prod.entries().view(), &Array2::eye(6).view()) < 1e-15);
    }

    #[test]
    fn displacement_zero_is_identity() {
        let d = displacement(c(0.0, 0.0), 8).unwrap();
        assert!(cmat::max_abs_diff(&d.entries().view(), &Array2::eye(8).view()) < 1e-14);
    }

    #[test]
    fn displacement_of_vacuum_matches_coherent_amplitudes() {
        // Oracle: analytic coherent-state coefficients at C=40, alpha=1+0.5i
        let cutoff = 40;
        let alpha = c(1.0, 0.5);
        let d = displacement(alpha, cutoff).unwrap();
        let displaced_vacuum = d.entries().column(0);
        let analytic = coherent_amplitudes(alpha, cutoff);
        let max_dev = displaced_vacuum
            .iter()
            .zip(analytic.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0f64, f64::max);
        assert!(max_dev < 1e-10, "max deviation {max_dev}");
    }

    #[test]
    fn displacement_inverse_is_identity_on_retained_block() {
        let cutoff = 40;
        let alpha = c(0.6, 0.8); // |alpha| = 1
        let d = displacement(alpha, cutoff).unwrap();
        let dinv = displacement(-alpha, cutoff).unwrap();
        let prod = d.dot(&dinv);
        let mut max_dev: f64 = 0.0;
        for i in 0..cutoff / 2 {
            for j in 0..cutoff / 2 {
                let want = if i == j { 1.0 } else { 0.0 };
                max_dev = max_dev.max((prod.entries()[[i, j]] - c(want, 0.0)).norm());
            }
        }
        assert!(max_dev < 1e-8, "max deviation {max_dev}");
    }

    #[test]
    fn displacement_guard() {
        assert!(displacement_guard_ok(c(1.0, 0.0), 8));
        assert!(!displacement_guard_ok(c(2.0, 0.0), 8));
    }

    #[test]
    fn coherent_state_at_zero_is_vacuum() {
        let rho = coherent_state(c(0.0, 0.0), 4).unwrap();
        assert!((rho.entries()[[0, 0]] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(rho.purity() > 1.0 - 1e-12);
    }

    #[test]
    fn coherent_state_photon_number() {
        let alpha = c(2.0, 0.0);
        let rho = coherent_state(alpha, 60).unwrap();
        let n = number(60).unwrap();
        let got = expectation(&rho, &n).unwrap();
        let rel = (got.re - alpha.norm_sqr()).abs() / alpha.norm_sqr();
        assert!(rel < 1e-8, "relative error {rel}");
        assert!(got.im.abs() < 1e-12);
    }

    #[test]
    fn coherent_state_is_pure() {
        let rho = coherent_state(c(1.2, -0.3), 40).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coherent_state_cutoff_guard_errors() {
        assert!(matches!(
            coherent_state(c(3.0, 0.0), 5),
            Err(Error::InsufficientCutoff { .. })
        ));
    }

    #[test]
    fn displacement_covariance_of_coherent_state() {
        // coherent_state(alpha) = D_alpha |0><0| D_alpha^dag within 1e-8
        let cutoff = 30;
        let alpha = c(1.0, -0.7);
        let rho = coherent_state(alpha, cutoff).unwrap();
        let d = displacement(alpha, cutoff).unwrap();
        let projected = d.entries().column(0).to_owned();
        let from_displacement = cmat::outer(&projected.view(), &projected.view());
        let dev = cmat::max_abs_diff(&rho.entries().view(), &from_displacement.view());
        assert!(dev < 1e-8, "deviation {dev}");
    }

    #[test]
    fn expectation_on_vacuum() {
        let rho = coherent_state(c(0.0, 0.0), 5).unwrap();
        let n = number(5).unwrap();
        assert!(expectation(&rho, &n).unwrap().norm() < 1e-14);
    }

    #[test]
    fn expectation_of_annihilation_on_diagonal_state_vanishes() {
        // selection rule: a diagonal state has no k=1 coherence
        let mut entries = Array2::zeros((4, 4));
        entries[[0, 0]] = c(0.4, 0.0);
        entries[[1, 1]] = c(0.35, 0.0);
        entries[[2, 2]] = c(0.15, 0.0);
        entries[[3, 3]] = c(0.1, 0.0);
        let rho = DensityMatrix::new(TruncatedOperator::new(entries).unwrap()).unwrap();
        let a = annihilation(4).unwrap();
        assert_eq!(expectation(&rho, &a).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn expectation_of_annihilation_on_coherent_state() {
        let alpha = c(1.5, 0.4);
        let rho = coherent_state(alpha, 60).unwrap();
        let a = annihilation(60).unwrap();
        let got = expectation(&rho, &a).unwrap();
        assert!((got - alpha).norm() < 1e-8);
    }

    #[test]
    fn expectation_cutoff_mismatch() {
        let rho = coherent_state(c(0.0, 0.0), 5).unwrap();
        let n = number(6).unwrap();
        assert!(matches!(
            expectation(&rho, &n),
            Err(Error::DimensionMismatch { left: 5, right: 6 })
        ));
    }

    #[test]
    fn density_matrix_rejects_bad_inputs() {
        // non-Hermitian
        let mut m = Array2::<Complex64>::eye(2);
        m[[0, 1]] = c(0.5, 0.0);
        m[[0, 0]] = c(0.5, 0.0);
        m[[1, 1]] = c(0.5, 0.0);
        assert!(matches!(
            DensityMatrix::new(TruncatedOperator::new(m).unwrap()),
            Err(Error::NotHermitian { .. })
        ));
        // wrong trace
        let m = Array2::<Complex64>::eye(2);
        assert!(matches!(
            DensityMatrix::new(TruncatedOperator::new(m).unwrap()),
            Err(Error::TraceNotOne { .. })
        ));
        // not positive: eigenvalues 1.5, -0.5
        let mut m = Array2::<Complex64>::zeros((2, 2));
        m[[0, 0]] = c(1.5, 0.0);
        m[[1, 1]] = c(-0.5, 0.0);
        assert!(matches!(
            DensityMatrix::new(TruncatedOperator::new(m).unwrap()),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn truncated_operator_rejects_non_square_and_non_finite() {
        let m = Array2::<Complex64>::zeros((2, 3));
        assert!(matches!(
            TruncatedOperator::new(m),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
        let mut m = Array2::<Complex64>::zeros((2, 2));
        m[[0, 0]] = c(f64::NAN, 0.0);
        assert!(matches!(TruncatedOperator::new(m), Err(Error::NonFinite)));
    }
}
