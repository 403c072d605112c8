//! Time evolution under the Lindblad generator, observable timelines, and
//! Wigner functions via displaced-parity expectation values.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use ndarray_linalg::{EigValsh, UPLO};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::cmat;
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::fock::{annihilation, number, parity, DensityMatrix, TruncatedOperator};
use crate::integrator::{integrate_with_records, IntegratorOptions};
use crate::lindblad::{liouvillian_apply_arr, LindbladModel, SymmetryKind};
use crate::symmetry::{sector_liouvillian, sector_project, u1_sector, SymmetrySector};

/// Trace deviation allowed at any recorded time.
pub const TRACE_TOLERANCE: f64 = 1e-8;
/// Hermiticity deviation allowed at any recorded time.
pub const HERMITICITY_TOLERANCE: f64 = 1e-8;
/// Eigenvalue floor for recorded states.
pub const POSITIVITY_FLOOR: f64 = -1e-7;
/// Population allowed in the top 10% of Fock levels before the cutoff is
/// declared too small for the trajectory.
pub const TRUNCATION_POPULATION_LIMIT: f64 = 1e-6;
/// Validation tolerance used for the final state of a trajectory.
pub const FINAL_STATE_TOLERANCE: f64 = 1e-7;

/// Named operators to record along a trajectory.
pub type ObservableSet = Vec<(String, TruncatedOperator)>;

/// The paper's default set: photon number, field, and squared field,
/// witnessing the k = 0, 1, 2 sectors respectively.
pub fn default_observables(cutoff: usize) -> Result<ObservableSet> {
    let a = annihilation(cutoff)?;
    Ok(vec![
        ("n".to_string(), number(cutoff)?),
        ("a".to_string(), a.clone()),
        ("a2".to_string(), a.dot(&a)),
    ])
}

/// Integrity diagnostics of a recorded state.
#[derive(Debug, Clone, Copy)]
pub struct StateIntegrity {
    pub time: f64,
    pub trace_deviation: f64,
    pub hermiticity_deviation: f64,
    pub min_eigenvalue: f64,
    /// Population in the top 10% of Fock levels.
    pub edge_population: f64,
}

/// Observable timelines plus the final state of one trajectory.
#[derive(Debug, Clone)]
pub struct EvolutionTrace {
    /// Strictly increasing, starting at 0, in units of 1/Gamma.
    pub times: Vec<f64>,
    /// One complex timeline per recorded observable, aligned with `times`.
    pub observables: Vec<(String, Vec<Complex64>)>,
    pub integrity: Vec<StateIntegrity>,
    /// For sectorwise evolution this carries a tolerance widened by the
    /// discarded band mass; see [`evolve_sectorwise`].
    pub final_state: DensityMatrix,
}

impl EvolutionTrace {
    pub fn observable(&self, name: &str) -> Option<&[Complex64]> {
        self.observables
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }
}

fn record_grid(t_final: f64, n_records: usize) -> Result<Vec<f64>> {
    if t_final <= 0.0 {
        return Err(Error::InvalidConfig {
            reason: format!("t_final must be positive, got {t_final}"),
        });
    }
    if n_records < 2 {
        return Err(Error::InvalidConfig {
            reason: "need at least 2 record times".into(),
        });
    }
    Ok((0..n_records)
        .map(|i| t_final * i as f64 / (n_records - 1) as f64)
        .collect())
}

fn check_observables(cutoff: usize, record: &ObservableSet) -> Result<()> {
    for (_, op) in record {
        if op.cutoff() != cutoff {
            return Err(Error::DimensionMismatch {
                left: cutoff,
                right: op.cutoff(),
            });
        }
    }
    Ok(())
}

fn edge_population(rho: &ArrayView2<Complex64>) -> f64 {
    let c = rho.nrows();
    let guard_levels = c.div_ceil(10);
    (c - guard_levels..c).map(|m| rho[[m, m]].re).sum()
}

struct RecordInspector<'a> {
    record: &'a ObservableSet,
    check_positivity: bool,
    times: Vec<f64>,
    observables: Vec<Vec<Complex64>>,
    integrity: Vec<StateIntegrity>,
}

impl<'a> RecordInspector<'a> {
    fn new(record: &'a ObservableSet, check_positivity: bool) -> Self {
        Self {
            record,
            check_positivity,
            times: Vec::new(),
            observables: vec![Vec::new(); record.len()],
            integrity: Vec::new(),
        }
    }

    fn inspect(&mut self, t: f64, rho: &ArrayView2<Complex64>) -> Result<()> {
        let trace_deviation = (cmat::trace(rho) - Complex64::new(1.0, 0.0)).norm();
        if trace_deviation > TRACE_TOLERANCE {
            return Err(Error::Integrity {
                check: "trace",
                time: t,
                value: trace_deviation,
                bound: TRACE_TOLERANCE,
            });
        }
        let hermiticity_deviation = cmat::hermiticity_deviation(rho);
        if hermiticity_deviation > HERMITICITY_TOLERANCE {
            return Err(Error::Integrity {
                check: "hermiticity",
                time: t,
                value: hermiticity_deviation,
                bound: HERMITICITY_TOLERANCE,
            });
        }
        let pop = edge_population(rho);
        if pop > TRUNCATION_POPULATION_LIMIT {
            return Err(Error::CutoffTooSmall {
                population: pop,
                time: t,
            });
        }
        let min_eigenvalue = cmat::hermitize(rho)
            .eigvalsh(UPLO::Lower)?
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if self.check_positivity && min_eigenvalue < POSITIVITY_FLOOR {
            return Err(Error::Integrity {
                check: "positivity",
                time: t,
                value: min_eigenvalue,
                bound: POSITIVITY_FLOOR,
            });
        }
        for ((_, op), timeline) in self.record.iter().zip(self.observables.iter_mut()) {
            timeline.push(cmat::trace_product(rho, &op.entries().view()));
        }
        self.times.push(t);
        self.integrity.push(StateIntegrity {
            time: t,
            trace_deviation,
            hermiticity_deviation,
            min_eigenvalue,
            edge_population: pop,
        });
        Ok(())
    }

    fn into_trace(self, final_state: DensityMatrix) -> EvolutionTrace {
        EvolutionTrace {
            times: self.times,
            observables: self
                .record
                .iter()
                .map(|(name, _)| name.clone())
                .zip(self.observables)
                .collect(),
            integrity: self.integrity,
            final_state,
        }
    }
}

/// Integrate d rho/dt = L rho with the adaptive 5(4) pair, recording
/// observables at `n_records` uniformly spaced times in [0, t_final].
pub fn evolve(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    t_final: f64,
    record: &ObservableSet,
    n_records: usize,
    opts: &IntegratorOptions,
) -> Result<EvolutionTrace> {
    let c = model.cutoff();
    if rho0.cutoff() != c {
        return Err(Error::DimensionMismatch {
            left: c,
            right: rho0.cutoff(),
        });
    }
    check_observables(c, record)?;
    let times = record_grid(t_final, n_records)?;

    let y0 = Array1::from_iter(rho0.entries().iter().cloned());
    let rhs = |_t: f64, y: &ArrayView1<Complex64>| {
        let rho = ArrayView2::from_shape((c, c), y.as_slice().expect("contiguous state")).unwrap();
        liouvillian_apply_arr(model, &rho)
            .into_shape_with_order(c * c)
            .expect("square output")
    };

    let mut inspector = RecordInspector::new(record, true);
    let y_final = integrate_with_records(rhs, y0, t_final, &times, opts, |t, y| {
        let rho = ArrayView2::from_shape((c, c), y.as_slice().expect("contiguous state")).unwrap();
        inspector.inspect(t, &rho)
    })?;

    let rho_final = Array2::from_shape_vec((c, c), y_final.to_vec()).expect("square state");
    let final_state = DensityMatrix::with_tolerance(
        TruncatedOperator::from_parts(c, rho_final),
        FINAL_STATE_TOLERANCE,
    )?;
    Ok(inspector.into_trace(final_state))
}

/// Evolve each U(1) diagonal band independently under its sector block and
/// reassemble. Observables supported on sectors |k| <= kmax match the full
/// evolution; bands above kmax are discarded, so the final state is validated
/// with a tolerance widened by the discarded mass.
pub fn evolve_sectorwise(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    t_final: f64,
    kmax: usize,
    record: &ObservableSet,
    n_records: usize,
    opts: &IntegratorOptions,
) -> Result<EvolutionTrace> {
    if model.symmetry() != SymmetryKind::U1 {
        return Err(Error::SymmetryViolation {
            reason: "sectorwise evolution requires a U(1)-tagged model".into(),
        });
    }
    let c = model.cutoff();
    if rho0.cutoff() != c {
        return Err(Error::DimensionMismatch {
            left: c,
            right: rho0.cutoff(),
        });
    }
    check_observables(c, record)?;
    let times = record_grid(t_final, n_records)?;

    let ks: Vec<i64> = (-(kmax as i64)..=kmax as i64).collect();
    let mut sectors: Vec<SymmetrySector> = Vec::with_capacity(ks.len());
    for &k in &ks {
        sectors.push(u1_sector(c, k)?);
    }

    // discarded band mass bounds how negative the reassembled state can get
    let mut retained = Array2::<Complex64>::zeros((c, c));
    for sector in &sectors {
        retained = retained + sector_project(rho0.op(), sector).entries();
    }
    let dropped = rho0.entries() - &retained;
    let dropped_norm = cmat::hermitize(&dropped.view())
        .eigvalsh(UPLO::Lower)?
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max);

    // evolve every band, recording coordinates at the shared times
    let band_records: Result<Vec<(Vec<Array1<Complex64>>, Array1<Complex64>)>> = sectors
        .par_iter()
        .map(|sector| {
            let block = sector_liouvillian(model, sector)?;
            let c0 = sector.extract(&rho0.entries().view());
            let mut recorded = Vec::with_capacity(times.len());
            let entries = block.entries().clone();
            let rhs = move |_t: f64, y: &ArrayView1<Complex64>| entries.dot(y);
            let final_coords =
                integrate_with_records(rhs, c0, t_final, &times, opts, |_t, y| {
                    recorded.push(y.clone());
                    Ok(())
                })?;
            Ok((recorded, final_coords))
        })
        .collect();
    let band_records = band_records?;

    let assemble = |coords: &[&Array1<Complex64>]| {
        let mut rho = Array2::<Complex64>::zeros((c, c));
        for (sector, co) in sectors.iter().zip(coords.iter()) {
            rho = rho + sector.embed(&co.view());
        }
        rho
    };

    let mut inspector = RecordInspector::new(record, false);
    for (idx, &t) in times.iter().enumerate() {
        let coords: Vec<&Array1<Complex64>> =
            band_records.iter().map(|(rec, _)| &rec[idx]).collect();
        let rho = assemble(&coords);
        inspector.inspect(t, &rho.view())?;
    }

    let finals: Vec<&Array1<Complex64>> = band_records.iter().map(|(_, f)| f).collect();
    let rho_final = assemble(&finals);
    let tolerance = FINAL_STATE_TOLERANCE + 2.0 * dropped_norm;
    let final_state = DensityMatrix::with_tolerance(
        TruncatedOperator::from_parts(c, rho_final),
        tolerance,
    )?;
    Ok(inspector.into_trace(final_state))
}

/// Uniform grid over a rectangle of complex field amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerGridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub re_points: usize,
    pub im_min: f64,
    pub im_max: f64,
    pub im_points: usize,
}

impl WignerGridSpec {
    /// Square grid centered at the origin.
    pub fn centered(extent: f64, points: usize) -> Self {
        Self {
            re_min: -extent,
            re_max: extent,
            re_points: points,
            im_min: -extent,
            im_max: extent,
            im_points: points,
        }
    }

    fn axis(min: f64, max: f64, points: usize) -> Vec<f64> {
        if points == 1 {
            return vec![min];
        }
        (0..points)
            .map(|i| min + (max - min) * i as f64 / (points - 1) as f64)
            .collect()
    }

    pub fn axes(&self) -> (Vec<f64>, Vec<f64>) {
        (
            Self::axis(self.re_min, self.re_max, self.re_points),
            Self::axis(self.im_min, self.im_max, self.im_points),
        )
    }

    fn validate(&self) -> Result<()> {
        let ok = self.re_points >= 1
            && self.im_points >= 1
            && (self.re_points == 1 || self.re_max > self.re_min)
            && (self.im_points == 1 || self.im_max > self.im_min);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidGrid {
                reason: "Wigner grid axes must be increasing with at least one point".into(),
            })
        }
    }
}

/// W(alpha) sampled on a grid; values[(i, j)] corresponds to
/// re_alpha[i] + i im_alpha[j].
#[derive(Debug, Clone)]
pub struct WignerGrid {
    pub re_alpha: Vec<f64>,
    pub im_alpha: Vec<f64>,
    pub values: Array2<f64>,
    /// Grid indices where |alpha|^2 > C/4, i.e. where the displaced parity is
    /// not guaranteed well represented at this cutoff.
    pub guard_violations: Vec<(usize, usize)>,
    pub max_imaginary_residue: f64,
}

impl WignerGrid {
    /// Riemann-sum normalization; approximately 1 when the grid covers the
    /// state's support.
    pub fn normalization(&self) -> f64 {
        if self.re_alpha.len() < 2 || self.im_alpha.len() < 2 {
            return f64::NAN;
        }
        let dre = self.re_alpha[1] - self.re_alpha[0];
        let dim = self.im_alpha[1] - self.im_alpha[0];
        self.values.sum() * dre * dim
    }
}

/// Precomputed displaced-parity kernels D_alpha P D_alpha^dag for one grid,
/// reusable across snapshots of the same trajectory.
pub struct WignerEvaluator {
    cutoff: usize,
    re_alpha: Vec<f64>,
    im_alpha: Vec<f64>,
    kernels: Vec<Array2<Complex64>>,
    guard_violations: Vec<(usize, usize)>,
}

impl WignerEvaluator {
    pub fn new(spec: &WignerGridSpec, cutoff: usize) -> Result<Self> {
        spec.validate()?;
        let (re_alpha, im_alpha) = spec.axes();
        let a = annihilation(cutoff)?;
        let adag = a.dagger();
        let p = parity(cutoff)?;
        let points: Vec<(usize, usize, Complex64)> = re_alpha
            .iter()
            .enumerate()
            .flat_map(|(i, &re)| {
                im_alpha
                    .iter()
                    .enumerate()
                    .map(move |(j, &im)| (i, j, Complex64::new(re, im)))
            })
            .collect();
        let kernels: Result<Vec<Array2<Complex64>>> = points
            .par_iter()
            .map(|&(_, _, alpha)| {
                let generator = &adag.scale(alpha) - &a.scale(alpha.conj());
                let d = expm(&generator.entries().view())?;
                let dd = cmat::dag(&d.view());
                Ok(d.dot(p.entries()).dot(&dd))
            })
            .collect();
        let guard_violations = points
            .iter()
            .filter(|&&(_, _, alpha)| alpha.norm_sqr() > cutoff as f64 / 4.0)
            .map(|&(i, j, _)| (i, j))
            .collect();
        Ok(Self {
            cutoff,
            re_alpha,
            im_alpha,
            kernels: kernels?,
            guard_violations,
        })
    }

    pub fn estimated_bytes(spec: &WignerGridSpec, cutoff: usize) -> usize {
        spec.re_points * spec.im_points * cutoff * cutoff * std::mem::size_of::<Complex64>()
    }

    /// W(alpha) = (2/pi) Tr[D_alpha P D_alpha^dag rho] over the grid.
    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<WignerGrid> {
        if rho.cutoff() != self.cutoff {
            return Err(Error::DimensionMismatch {
                left: self.cutoff,
                right: rho.cutoff(),
            });
        }
        let scale = 2.0 / std::f64::consts::PI;
        let raw: Vec<Complex64> = self
            .kernels
            .par_iter()
            .map(|kernel| cmat::trace_product(&kernel.view(), &rho.entries().view()))
            .collect();
        let max_imaginary_residue = raw.iter().map(|z| z.im.abs()).fold(0.0, f64::max) * scale;
        if max_imaginary_residue > 1e-10 {
            return Err(Error::Numerical {
                detail: format!(
                    "Wigner values should be real; imaginary residue {max_imaginary_residue:.3e}"
                ),
            });
        }
        let (nr, ni) = (self.re_alpha.len(), self.im_alpha.len());
        let mut values = Array2::zeros((nr, ni));
        for (flat, z) in raw.iter().enumerate() {
            values[[flat / ni, flat % ni]] = scale * z.re;
        }
        Ok(WignerGrid {
            re_alpha: self.re_alpha.clone(),
            im_alpha: self.im_alpha.clone(),
            values,
            guard_violations: self.guard_violations.clone(),
            max_imaginary_residue,
        })
    }
}

/// One-shot Wigner function of a state.
pub fn wigner(rho: &DensityMatrix, spec: &WignerGridSpec) -> Result<WignerGrid> {
    WignerEvaluator::new(spec, rho.cutoff())?.evaluate(rho)
}

/// Tr[a^n rho^(k)] for each supplied sector projection. Structurally zero
/// whenever n != k: a^n only connects dyads on the n-th diagonal.
pub fn sector_selection_rule_check(
    parts: &[(i64, TruncatedOperator)],
    n: u32,
) -> Result<Vec<(i64, Complex64)>> {
    let Some((_, first)) = parts.first() else {
        return Ok(Vec::new());
    };
    let c = first.cutoff();
    let a = annihilation(c)?;
    let mut a_pow = TruncatedOperator::identity(c);
    for _ in 0..n {
        a_pow = a_pow.dot(&a);
    }
    parts
        .iter()
        .map(|(k, part)| {
            if part.cutoff() != c {
                return Err(Error::DimensionMismatch {
                    left: c,
                    right: part.cutoff(),
                });
            }
            Ok((
                *k,
                cmat::trace_product(&a_pow.entries().view(), &part.entries().view()),
            ))
        })
        .collect()
}
