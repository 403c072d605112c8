//! Steady states, sector spectra, Liouvillian gaps, symmetry-broken states,
//! and the second-derivative criticality witness.

use std::cmp::Ordering;

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eig, EigValsh, Solve, SVD, UPLO};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, TruncatedOperator};
use crate::lindblad::{LindbladModel, SymmetryKind};
use crate::symmetry::{sector_liouvillian, u1_sector, z2_sector, SectorMatrix, SymmetrySector};

/// Eigenvalues with |lambda| below this count as zero modes; singular values
/// below `GAP_FLOOR * sigma_max` count toward the null-space dimension.
pub const GAP_FLOOR: f64 = 1e-10;

/// Max-abs residual allowed for L rho_ss = 0.
pub const STEADY_STATE_RESIDUAL: f64 = 1e-10;

/// Relative residual factor for accepted eigenpairs.
pub const EIGENPAIR_RESIDUAL_FACTOR: f64 = 1e-8;

/// Liouvillian eigenvalues may not have a real part above this.
pub const MAX_POSITIVE_REAL_PART: f64 = 1e-8;

/// Sector-tagged eigenvalues and eigenmatrices, slowest first.
///
/// Ordering: ascending |Re lambda|, ties broken by descending Re, then
/// ascending Im. Each eigenmatrix has unit Frobenius norm with its
/// largest-magnitude entry made real-positive.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub sector: SymmetrySector,
    pub pairs: Vec<(Complex64, TruncatedOperator)>,
    /// Number of eigenvalues with |lambda| < GAP_FLOOR; a value above 1 in
    /// sector 0 flags a degenerate steady state.
    pub zero_modes: usize,
}

impl SpectrumResult {
    pub fn eigenvalues(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.pairs.iter().map(|(l, _)| *l)
    }
}

/// The declared spectral ordering.
pub fn spectral_order(a: Complex64, b: Complex64) -> Ordering {
    a.re.abs()
        .partial_cmp(&b.re.abs())
        .unwrap_or(Ordering::Equal)
        .then(b.re.partial_cmp(&a.re).unwrap_or(Ordering::Equal))
        .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
}

fn trace_coefficients(sector: &SymmetrySector) -> Array1<Complex64> {
    let mut t = Array1::zeros(sector.size());
    for (i, &(m, n)) in sector.basis.iter().enumerate() {
        if m == n {
            t[i] = Complex64::new(1.0, 0.0);
        }
    }
    t
}

/// Null-space dimension estimate: singular values below GAP_FLOOR * sigma_max.
fn null_space_dimension(entries: &Array2<Complex64>) -> Result<(usize, Array1<f64>)> {
    let (_, sigma, _) = entries.svd(false, false)?;
    let sigma_max = sigma.iter().cloned().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return Ok((entries.nrows(), sigma));
    }
    let dim = sigma.iter().filter(|&&s| s < GAP_FLOOR * sigma_max).count();
    Ok((dim, sigma))
}

/// Unique steady state of a sector-0 block.
///
/// The zero mode is found by a bordered solve: one row of the block is
/// replaced by the trace functional and the system is solved for the
/// unit-trace null vector. The null-space dimension is estimated first from
/// the singular values so that near-degeneracy is reported, never silently
/// resolved.
pub fn steady_state(block: &SectorMatrix) -> Result<DensityMatrix> {
    let sector = block.sector();
    if sector.k != 0 {
        return Err(Error::WrongSector { got: sector.k });
    }
    let d = block.dim();
    let (nullity, _) = null_space_dimension(block.entries())?;
    if nullity > 1 {
        return Err(Error::DegenerateSteadyState { dimension: nullity });
    }

    let t = trace_coefficients(sector);
    let pivot = t
        .iter()
        .position(|c| c.norm() > 0.0)
        .ok_or(Error::TracelessNullVector)?;
    let mut bordered = block.entries().clone();
    bordered.row_mut(pivot).assign(&t);
    let mut rhs = Array1::zeros(d);
    rhs[pivot] = Complex64::new(1.0, 0.0);
    let coords = bordered.solve(&rhs).map_err(|_| Error::TracelessNullVector)?;

    // embed, scrub the integrator-scale asymmetry, renormalize exactly
    let mut rho = sector.embed(&coords.view());
    rho = crate::cmat::hermitize(&rho.view());
    let trace = crate::cmat::trace(&rho.view());
    if trace.norm() < 1e-12 {
        return Err(Error::TracelessNullVector);
    }
    rho /= trace;

    let final_coords = sector.extract(&rho.view());
    let residual_vec = block.entries().dot(&final_coords);
    let residual = residual_vec.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if residual > STEADY_STATE_RESIDUAL {
        return Err(Error::Numerical {
            detail: format!("steady-state residual {residual:.3e} exceeds {STEADY_STATE_RESIDUAL:.1e}"),
        });
    }
    DensityMatrix::new(TruncatedOperator::from_parts(sector.cutoff, rho))
}

/// The `count` slowest eigenpics of a sector block under the declared
/// ordering, with normalized, phase-fixed eigenmatrices.
pub fn sector_spectrum(block: &SectorMatrix, count: usize) -> Result<SpectrumResult> {
    let d = block.dim();
    if count > d {
        return Err(Error::InvalidConfig {
            reason: format!("requested {count} eigenpairs from a block of dimension {d}"),
        });
    }
    let (values, vectors) = block.entries().eig().map_err(|e| Error::EigenFailure {
        detail: format!("zgeev failed on a {d}-dimensional block: {e}"),
    })?;

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| spectral_order(values[i], values[j]));

    let block_scale = crate::cmat::max_abs(&block.entries().view());
    let zero_modes = values.iter().filter(|l| l.norm() < GAP_FLOOR).count();

    let mut pairs = Vec::with_capacity(count);
    for &idx in order.iter().take(count) {
        let lambda = values[idx];
        if lambda.re > MAX_POSITIVE_REAL_PART {
            return Err(Error::Numerical {
                detail: format!("eigenvalue with positive real part {:.3e}", lambda.re),
            });
        }
        let v = vectors.column(idx).to_owned();
        let residual_vec = block.entries().dot(&v) - &v * lambda;
        let residual = residual_vec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let v_norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let bound = EIGENPAIR_RESIDUAL_FACTOR * block_scale.max(1.0) * d as f64 * v_norm;
        if residual > bound {
            return Err(Error::EigenFailure {
                detail: format!(
                    "eigenpair residual {residual:.3e} exceeds {bound:.3e} (block scale {block_scale:.3e}, dim {d})"
                ),
            });
        }
        // unit Frobenius norm, largest-magnitude entry real-positive
        let mut coords = v / Complex64::new(v_norm, 0.0);
        let mut best = Complex64::default();
        let mut best_norm = -1.0;
        for z in coords.iter() {
            if z.norm() > best_norm {
                best_norm = z.norm();
                best = *z;
            }
        }
        if best_norm > 0.0 {
            coords = coords * (best.conj() / Complex64::new(best.norm(), 0.0));
        }
        let matrix = block.sector().embed(&coords.view());
        pairs.push((
            lambda,
            TruncatedOperator::from_parts(block.sector().cutoff, matrix),
        ));
    }
    Ok(SpectrumResult {
        sector: block.sector().clone(),
        pairs,
        zero_modes,
    })
}

/// Sector block for the model's own symmetry tag.
pub fn sector_block(model: &LindbladModel, k: i64) -> Result<SectorMatrix> {
    let sector = match model.symmetry() {
        SymmetryKind::U1 => u1_sector(model.cutoff(), k)?,
        SymmetryKind::Z2 => z2_sector(model.cutoff(), k)?,
        SymmetryKind::None => {
            return Err(Error::SymmetryViolation {
                reason: "sector blocks need a model with a symmetry tag".into(),
            })
        }
    };
    sector_liouvillian(model, &sector)
}

/// Steady state computed through the model's sector-0 block.
pub fn model_steady_state(model: &LindbladModel) -> Result<DensityMatrix> {
    steady_state(&sector_block(model, 0)?)
}

/// Re Tr[rho_ss obs] for a model, through the sector-0 pipeline.
pub fn steady_state_observable(model: &LindbladModel, observable: &TruncatedOperator) -> Result<f64> {
    let rho = model_steady_state(model)?;
    Ok(crate::fock::expectation(&rho, observable)?.re)
}

/// lambda_0 per sector along a parameter grid.
#[derive(Debug, Clone)]
pub struct GapTrace {
    pub parameter: String,
    pub grid: Vec<f64>,
    /// Scaling parameter N the family was built at.
    pub scale: f64,
    pub sectors: Vec<i64>,
    /// values[i][s] = lambda_0 of sector `sectors[s]` at `grid[i]`.
    pub values: Vec<Vec<Complex64>>,
}

/// Evaluate lambda_0^(k) for each requested sector over a parameter grid.
/// Grid points run in parallel; results are gathered in grid order.
pub fn gap_trace<F>(
    parameter: &str,
    grid: &[f64],
    scale: f64,
    sectors: &[i64],
    build: F,
) -> Result<GapTrace>
where
    F: Fn(f64) -> Result<LindbladModel> + Sync,
{
    if grid.is_empty() {
        return Err(Error::InvalidGrid {
            reason: "empty parameter grid".into(),
        });
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid {
            reason: "grid must be strictly increasing".into(),
        });
    }
    let values: Result<Vec<Vec<Complex64>>> = grid
        .par_iter()
        .map(|&x| {
            let model = build(x)?;
            sectors
                .iter()
                .map(|&k| {
                    let block = sector_block(&model, k)?;
                    let spectrum = sector_spectrum(&block, 1)?;
                    Ok(spectrum.pairs[0].0)
                })
                .collect()
        })
        .collect();
    Ok(GapTrace {
        parameter: parameter.to_string(),
        grid: grid.to_vec(),
        scale,
        sectors: sectors.to_vec(),
        values: values?,
    })
}

/// A symmetry-broken steady-state candidate rho_0 + c (e + e^dag).
#[derive(Debug, Clone)]
pub struct BrokenSteadyState {
    pub state: DensityMatrix,
    /// Coefficient actually used; smaller in magnitude than requested when
    /// positivity clipped it.
    pub c_used: f64,
    pub clipped: bool,
}

/// Build rho_0 + c (eig_k + eig_k^dag), renormalized. When the requested
/// coefficient breaks positivity, the maximal-|c| positive state along the
/// ray is returned and flagged.
pub fn broken_steady_states(
    rho0: &DensityMatrix,
    eigk: &TruncatedOperator,
    c: f64,
) -> Result<BrokenSteadyState> {
    if rho0.cutoff() != eigk.cutoff() {
        return Err(Error::DimensionMismatch {
            left: rho0.cutoff(),
            right: eigk.cutoff(),
        });
    }
    if c == 0.0 {
        return Ok(BrokenSteadyState {
            state: rho0.clone(),
            c_used: 0.0,
            clipped: false,
        });
    }
    let herm_part = eigk.entries() + &crate::cmat::dag(&eigk.entries().view());
    let tolerance = rho0.tolerance();

    let candidate = |coeff: f64| -> Result<Option<DensityMatrix>> {
        let mut rho = rho0.entries() + &herm_part * Complex64::new(coeff, 0.0);
        let trace = crate::cmat::trace(&rho.view());
        if trace.norm() < 1e-12 {
            return Err(Error::Numerical {
                detail: "broken-state candidate has vanishing trace".into(),
            });
        }
        rho /= trace;
        let min_eig = rho
            .eigvalsh(UPLO::Lower)?
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -tolerance {
            return Ok(None);
        }
        Ok(Some(DensityMatrix::with_tolerance(
            TruncatedOperator::from_parts(rho0.cutoff(), rho),
            tolerance,
        )?))
    };

    if let Some(state) = candidate(c)? {
        return Ok(BrokenSteadyState {
            state,
            c_used: c,
            clipped: false,
        });
    }
    // bisect toward the largest-|c| positive state along the ray
    let mut lo = 0.0f64;
    let mut hi = c;
    let mut best: Option<DensityMatrix> = None;
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        match candidate(mid)? {
            Some(state) => {
                best = Some(state);
                lo = mid;
            }
            None => hi = mid,
        }
        if (hi - lo).abs() < 1e-12 * c.abs().max(1.0) {
            break;
        }
    }
    let state = match best {
        Some(s) => s,
        None => rho0.clone(),
    };
    Ok(BrokenSteadyState {
        state,
        c_used: lo,
        clipped: true,
    })
}

/// Central-difference second derivative of a steady-state observable along a
/// uniform parameter grid; the divergence of its maximum with system size is
/// the criticality witness.
#[derive(Debug, Clone)]
pub struct CriticalityWitness {
    pub parameter: String,
    pub grid: Vec<f64>,
    pub step: f64,
    /// Re <obs>_ss at each grid point.
    pub values: Vec<f64>,
    /// second_derivative[i] corresponds to grid[i + 1].
    pub second_derivative: Vec<f64>,
    pub max_location: f64,
    pub max_magnitude: f64,
}

/// Evaluate the witness over a uniform grid with at least 5 points.
pub fn criticality_witness<F>(
    parameter: &str,
    grid: &[f64],
    observable: &TruncatedOperator,
    build: F,
) -> Result<CriticalityWitness>
where
    F: Fn(f64) -> Result<LindbladModel> + Sync,
{
    if grid.len() < 5 {
        return Err(Error::InvalidGrid {
            reason: format!("need at least 5 grid points, got {}", grid.len()),
        });
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid {
            reason: "grid must be strictly increasing".into(),
        });
    }
    let step = grid[1] - grid[0];
    let uniform = grid
        .windows(2)
        .all(|w| ((w[1] - w[0]) - step).abs() <= 1e-9 * step.abs());
    if !uniform {
        return Err(Error::InvalidGrid {
            reason: "grid must be uniform for central differences".into(),
        });
    }
    let values: Result<Vec<f64>> = grid
        .par_iter()
        .map(|&x| {
            let model = build(x)?;
            steady_state_observable(&model, observable)
        })
        .collect();
    let values = values?;
    let mut second_derivative = Vec::with_capacity(grid.len() - 2);
    for i in 1..grid.len() - 1 {
        second_derivative.push((values[i + 1] - 2.0 * values[i] + values[i - 1]) / (step * step));
    }
    let (max_idx, max_magnitude) = second_derivative
        .iter()
        .enumerate()
        .map(|(i, v)| (i, v.abs()))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    Ok(CriticalityWitness {
        parameter: parameter.to_string(),
        grid: grid.to_vec(),
        step,
        values,
        second_derivative,
        max_location: grid[max_idx + 1],
        max_magnitude,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{annihilation, creation, expectation, number, TruncatedOperator};
    use crate::lindblad::LindbladModel;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pure_decay(cutoff: usize) -> LindbladModel {
        LindbladModel::new(
            TruncatedOperator::zeros(cutoff),
            vec![annihilation(cutoff).unwrap()],
            SymmetryKind::U1,
        )
        .unwrap()
    }

    /// Thermal pumping: jumps sqrt(1) a and sqrt(x) a^dag with x < 1 give a
    /// geometric steady state with <n> = x / (1 - x).
    fn thermal_model(x: f64, cutoff: usize) -> LindbladModel {
        LindbladModel::new(
            TruncatedOperator::zeros(cutoff),
            vec![
                annihilation(cutoff).unwrap(),
                creation(cutoff).unwrap().scale(c64(x.sqrt(), 0.0)),
            ],
            SymmetryKind::U1,
        )
        .unwrap()
    }

    #[test]
    fn pure_decay_steady_state_is_vacuum() {
        let model = pure_decay(6);
        let rho = model_steady_state(&model).unwrap();
        assert!((rho.entries()[[0, 0]] - c64(1.0, 0.0)).norm() < 1e-12);
        let rest: f64 = rho
            .entries()
            .indexed_iter()
            .filter(|((i, j), _)| !(*i == 0 && *j == 0))
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max);
        assert!(rest < 1e-12);
    }

    #[test]
    fn thermal_steady_state_matches_detailed_balance() {
        let x = 0.4;
        let cutoff = 50;
        let model = thermal_model(x, cutoff);
        let n = steady_state_observable(&model, &number(cutoff).unwrap()).unwrap();
        let want = x / (1.0 - x);
        assert!((n - want).abs() < 1e-9, "<n> = {n}, want {want}");
    }

    #[test]
    fn pure_decay_spectrum_closed_form() {
        // eigenvalues of D[a] on dyads: -(m + n)/2
        let cutoff = 6;
        let model = pure_decay(cutoff);
        let mut all: Vec<Complex64> = Vec::new();
        for k in -(cutoff as i64 - 1)..=(cutoff as i64 - 1) {
            let block = sector_block(&model, k).unwrap();
            let spectrum = sector_spectrum(&block, block.dim()).unwrap();
            all.extend(spectrum.eigenvalues());
        }
        assert_eq!(all.len(), cutoff * cutoff);
        let mut want: Vec<f64> = (0..cutoff)
            .flat_map(|m| (0..cutoff).map(move |n| -((m + n) as f64) / 2.0))
            .collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut got: Vec<f64> = all.iter().map(|z| z.re).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in got.iter().zip(want.iter()) {
            assert!((g - w).abs() < 1e-10, "{g} vs {w}");
        }
        assert!(all.iter().map(|z| z.im.abs()).fold(0.0, f64::max) < 1e-10);
    }

    #[test]
    fn spectral_ordering_convention() {
        let mut vals = vec![
            c64(-1.0, 0.0),
            c64(0.0, 0.0),
            c64(-0.5, 1.0),
            c64(-0.5, -1.0),
            c64(0.5, 0.0), // |Re| ties with -0.5: descending Re puts +0.5 first
        ];
        vals.sort_by(|a, b| spectral_order(*a, *b));
        assert_eq!(vals[0], c64(0.0, 0.0));
        assert_eq!(vals[1], c64(0.5, 0.0));
        assert_eq!(vals[2], c64(-0.5, -1.0));
        assert_eq!(vals[3], c64(-0.5, 1.0));
        assert_eq!(vals[4], c64(-1.0, 0.0));
    }

    #[test]
    fn eigenmatrix_normalization_and_phase() {
        let model = thermal_model(0.3, 10);
        let block = sector_block(&model, 1).unwrap();
        let spectrum = sector_spectrum(&block, 3).unwrap();
        for (_, matrix) in &spectrum.pairs {
            let frob: f64 = matrix
                .entries()
                .iter()
                .map(|z| z.norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!((frob - 1.0).abs() < 1e-12);
            let largest = matrix
                .entries()
                .iter()
                .cloned()
                .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
                .unwrap();
            assert!(largest.im.abs() < 1e-12 && largest.re > 0.0);
        }
    }

    #[test]
    fn degenerate_null_space_is_reported() {
        // pure dephasing: every diagonal dyad is steady, sector-0 block is 0
        let cutoff = 4;
        let dephasing = number(cutoff).unwrap();
        let model = LindbladModel::new(
            TruncatedOperator::zeros(cutoff),
            vec![dephasing],
            SymmetryKind::U1,
        )
        .unwrap();
        let block = sector_block(&model, 0).unwrap();
        assert!(matches!(
            steady_state(&block),
            Err(Error::DegenerateSteadyState { dimension: 4 })
        ));
    }

    #[test]
    fn steady_state_requires_sector_zero() {
        let model = pure_decay(5);
        let block = sector_block(&model, 1).unwrap();
        assert!(matches!(
            steady_state(&block),
            Err(Error::WrongSector { got: 1 })
        ));
    }

    #[test]
    fn gap_trace_orders_and_sizes() {
        let grid = [0.1, 0.2, 0.3];
        let trace = gap_trace("x", &grid, 1.0, &[0, 1], |x| Ok(thermal_model(x, 12))).unwrap();
        assert_eq!(trace.values.len(), 3);
        assert_eq!(trace.values[0].len(), 2);
        // sector 0 slowest eigenvalue is the steady state's zero
        for row in &trace.values {
            assert!(row[0].norm() < 1e-10);
            assert!(row[1].re < 0.0);
        }
    }

    #[test]
    fn gap_trace_rejects_bad_grids() {
        assert!(matches!(
            gap_trace("x", &[], 1.0, &[0], |x| Ok(thermal_model(x, 8))),
            Err(Error::InvalidGrid { .. })
        ));
        assert!(matches!(
            gap_trace("x", &[0.2, 0.1], 1.0, &[0], |x| Ok(thermal_model(x, 8))),
            Err(Error::InvalidGrid { .. })
        ));
    }

    #[test]
    fn broken_state_carries_an_order_parameter() {
        let cutoff = 12;
        let model = thermal_model(0.3, cutoff);
        let rho0 = model_steady_state(&model).unwrap();
        let block = sector_block(&model, 1).unwrap();
        let spectrum = sector_spectrum(&block, 1).unwrap();
        let eig1 = &spectrum.pairs[0].1;

        let zero = broken_steady_states(&rho0, eig1, 0.0).unwrap();
        assert_eq!(zero.state.entries(), rho0.entries());
        assert!(!zero.clipped);

        let a = annihilation(cutoff).unwrap();
        let unbroken = expectation(&rho0, &a).unwrap();
        assert!(unbroken.norm() < 1e-12);

        let broken = broken_steady_states(&rho0, eig1, 0.05).unwrap();
        let order = expectation(&broken.state, &a).unwrap();
        assert!(order.norm() > 1e-4, "order parameter {order}");
        // not invariant under the symmetry: J rho J^dag != rho
        let j = crate::fock::phase_rotation(1.0, cutoff).unwrap();
        let conj = j.dot(&broken.state.op().clone()).dot(&j.dagger());
        let dev = crate::cmat::max_abs_diff(&conj.entries().view(), &broken.state.entries().view());
        assert!(dev > 1e-6);
    }

    #[test]
    fn broken_state_clips_to_positivity() {
        let cutoff = 10;
        let model = thermal_model(0.2, cutoff);
        let rho0 = model_steady_state(&model).unwrap();
        let block = sector_block(&model, 1).unwrap();
        let eig1 = sector_spectrum(&block, 1).unwrap().pairs.remove(0).1;
        let result = broken_steady_states(&rho0, &eig1, 50.0).unwrap();
        assert!(result.clipped);
        assert!(result.c_used < 50.0);
        assert!(result.state.min_eigenvalue() >= -rho0.tolerance());
    }

    #[test]
    fn witness_second_derivative_matches_analytic_curvature() {
        // <n>_ss = x/(1-x) for the thermal model; d2/dx2 = 2/(1-x)^3
        let cutoff = 40;
        let n_op = number(cutoff).unwrap();
        let grid: Vec<f64> = (0..11).map(|i| 0.30 + 0.02 * i as f64).collect();
        let witness =
            criticality_witness("x", &grid, &n_op, |x| Ok(thermal_model(x, cutoff))).unwrap();
        for (i, d2) in witness.second_derivative.iter().enumerate() {
            let x = grid[i + 1];
            let want = 2.0 / (1.0 - x).powi(3);
            assert!(
                (d2 - want).abs() / want < 0.01,
                "x={x}: got {d2}, want {want}"
            );
        }
        // curvature grows toward larger x on this window
        assert_eq!(
            witness.max_location,
            grid[grid.len() - 2],
            "max at the right edge"
        );
    }

    #[test]
    fn witness_of_identity_is_flat() {
        let cutoff = 16;
        let id = TruncatedOperator::identity(cutoff);
        let grid: Vec<f64> = (0..6).map(|i| 0.1 + 0.05 * i as f64).collect();
        let witness =
            criticality_witness("x", &grid, &id, |x| Ok(thermal_model(x, cutoff))).unwrap();
        assert!(witness.max_magnitude < 1e-6);
    }

    #[test]
    fn witness_rejects_short_and_nonuniform_grids() {
        let id = TruncatedOperator::identity(8);
        let build = |x: f64| Ok(thermal_model(x, 8));
        assert!(matches!(
            criticality_witness("x", &[0.1, 0.2, 0.3], &id, build),
            Err(Error::InvalidGrid { .. })
        ));
        assert!(matches!(
            criticality_witness("x", &[0.1, 0.2, 0.25, 0.4, 0.5], &id, build),
            Err(Error::InvalidGrid { .. })
        ));
    }
}
