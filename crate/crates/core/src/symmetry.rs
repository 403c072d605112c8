//! Weak-symmetry sectors of the Liouvillian.
//!
//! A weak symmetry J (with J^dag J = 1) commutes with the generator as a
//! superoperator, [L, J . J^dag] = 0, which block-diagonalizes L over sets of
//! Fock dyads |m><n|. For U(1) (J = exp(i phi a^dag a)) the sectors are the
//! matrix diagonals m - n = k; for Z2 (J = parity) they are the even and odd
//! offsets (m - n) mod 2.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::cmat;
use crate::error::{Error, Result};
use crate::fock::TruncatedOperator;
use crate::lindblad::{liouvillian_apply_dyad, liouvillian_apply_rank_one, LindbladModel, SymmetryKind};

/// Cross-sector leakage above this (scaled by the generator's magnitude)
/// counts as a genuine symmetry violation rather than rounding.
pub const LEAKAGE_TOLERANCE: f64 = 1e-10;

/// Sector-0 action above this fails the SSB-removal condition.
pub const SECTOR_ZERO_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryGroup {
    U1,
    Z2,
}

/// One weak-symmetry sector: the label k plus the explicit list of (row,
/// column) Fock index pairs spanning it. Bases are ordered by ascending row
/// index (then ascending column for Z2) so that index maps are reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetrySector {
    pub group: SymmetryGroup,
    pub k: i64,
    pub cutoff: usize,
    pub basis: Vec<(usize, usize)>,
}

impl SymmetrySector {
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    /// Symmetry eigenvalue u^(k) under conjugation by exp(i phi a^dag a):
    /// exp(-i phi k). For Z2 the relevant angle is phi = pi, giving +1 / -1.
    pub fn u(&self, phi: f64) -> Complex64 {
        Complex64::new(0.0, -phi * self.k as f64).exp()
    }

    /// Whether the dyad |m><n| belongs to this sector.
    pub fn contains(&self, m: usize, n: usize) -> bool {
        let diff = m as i64 - n as i64;
        match self.group {
            SymmetryGroup::U1 => diff == self.k,
            SymmetryGroup::Z2 => diff.rem_euclid(2) == self.k,
        }
    }

    /// Coordinates of `rho` on this sector's basis dyads.
    pub fn extract(&self, rho: &ArrayView2<Complex64>) -> Array1<Complex64> {
        let mut out = Array1::zeros(self.size());
        for (idx, &(m, n)) in self.basis.iter().enumerate() {
            out[idx] = rho[[m, n]];
        }
        out
    }

    /// Embed sector coordinates back into a full C x C matrix.
    pub fn embed(&self, coords: &ArrayView1<Complex64>) -> Array2<Complex64> {
        assert_eq!(coords.len(), self.size(), "coordinate length mismatch");
        let mut out = Array2::zeros((self.cutoff, self.cutoff));
        for (idx, &(m, n)) in self.basis.iter().enumerate() {
            out[[m, n]] = coords[idx];
        }
        out
    }
}

/// U(1) sector k: dyads {(m, m-k)}, of size C - |k|.
pub fn u1_sector(cutoff: usize, k: i64) -> Result<SymmetrySector> {
    let c = cutoff as i64;
    if k.abs() > c - 1 {
        return Err(Error::SectorOutOfRange { label: k, cutoff });
    }
    let m_lo = k.max(0);
    let m_hi = c - 1 + k.min(0);
    let basis = (m_lo..=m_hi)
        .map(|m| (m as usize, (m - k) as usize))
        .collect();
    Ok(SymmetrySector {
        group: SymmetryGroup::U1,
        k,
        cutoff,
        basis,
    })
}

/// U(1) sectors k = -kmax ..= kmax.
pub fn u1_sectors(cutoff: usize, kmax: usize) -> Result<Vec<SymmetrySector>> {
    if kmax > cutoff - 1 {
        return Err(Error::SectorOutOfRange {
            label: kmax as i64,
            cutoff,
        });
    }
    (-(kmax as i64)..=kmax as i64)
        .map(|k| u1_sector(cutoff, k))
        .collect()
}

/// Z2 sector k in {0, 1}: dyads with (m - n) mod 2 = k.
pub fn z2_sector(cutoff: usize, k: i64) -> Result<SymmetrySector> {
    if cutoff < 2 {
        return Err(Error::InvalidCutoff { cutoff, min: 2 });
    }
    if !(k == 0 || k == 1) {
        return Err(Error::SectorOutOfRange { label: k, cutoff });
    }
    let mut basis = Vec::with_capacity(cutoff * cutoff / 2 + 1);
    for m in 0..cutoff {
        for n in 0..cutoff {
            if (m as i64 - n as i64).rem_euclid(2) == k {
                basis.push((m, n));
            }
        }
    }
    Ok(SymmetrySector {
        group: SymmetryGroup::Z2,
        k,
        cutoff,
        basis,
    })
}

/// Both Z2 sectors, k = 0 then k = 1.
pub fn z2_sectors(cutoff: usize) -> Result<Vec<SymmetrySector>> {
    Ok(vec![z2_sector(cutoff, 0)?, z2_sector(cutoff, 1)?])
}

/// Sectors matching a model's symmetry tag, up to `kmax` for U(1).
pub fn sectors_for(model: &LindbladModel, kmax: usize) -> Result<Vec<SymmetrySector>> {
    match model.symmetry() {
        SymmetryKind::U1 => u1_sectors(model.cutoff(), kmax),
        SymmetryKind::Z2 => z2_sectors(model.cutoff()),
        SymmetryKind::None => Err(Error::SymmetryViolation {
            reason: "model carries no symmetry tag".into(),
        }),
    }
}

/// Zero out everything except the sector's dyads. Summing the projections
/// over a full sector set reconstructs `rho` exactly.
///
/// Panics on cutoff mismatch.
pub fn sector_project(rho: &TruncatedOperator, sector: &SymmetrySector) -> TruncatedOperator {
    assert_eq!(rho.cutoff(), sector.cutoff, "cutoff mismatch in projection");
    let mut out = Array2::zeros((sector.cutoff, sector.cutoff));
    for &(m, n) in &sector.basis {
        out[[m, n]] = rho.entries()[[m, n]];
    }
    TruncatedOperator::from_parts(sector.cutoff, out)
}

/// The generator restricted to one sector: B[i, j] is the coefficient of
/// basis dyad i in L(dyad j), so sector dynamics is c' = B c.
#[derive(Debug, Clone)]
pub struct SectorMatrix {
    sector: SymmetrySector,
    entries: Array2<Complex64>,
}

impl SectorMatrix {
    pub fn sector(&self) -> &SymmetrySector {
        &self.sector
    }

    pub fn dim(&self) -> usize {
        self.sector.size()
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }
}

/// Restrict the generator to a sector, verifying closure: applying L to any
/// sector dyad must not leak outside the sector (tolerance scaled by the
/// generator's magnitude).
pub fn sector_liouvillian(model: &LindbladModel, sector: &SymmetrySector) -> Result<SectorMatrix> {
    let c = model.cutoff();
    if sector.cutoff != c {
        return Err(Error::DimensionMismatch {
            left: c,
            right: sector.cutoff,
        });
    }
    let d = sector.size();
    // (m, n) -> basis index lookup
    let mut grid = vec![usize::MAX; c * c];
    for (idx, &(m, n)) in sector.basis.iter().enumerate() {
        grid[m * c + n] = idx;
    }

    let columns: Vec<(Array1<Complex64>, f64, f64)> = sector
        .basis
        .par_iter()
        .map(|&(m, n)| {
            let out = liouvillian_apply_dyad(model, m, n);
            let mut col = Array1::zeros(d);
            let mut leak: f64 = 0.0;
            let mut scale: f64 = 0.0;
            for ((p, q), v) in out.indexed_iter() {
                let mag = v.norm();
                scale = scale.max(mag);
                let idx = grid[p * c + q];
                if idx != usize::MAX {
                    col[idx] = *v;
                } else {
                    leak = leak.max(mag);
                }
            }
            (col, leak, scale)
        })
        .collect();

    let max_leak = columns.iter().map(|(_, l, _)| *l).fold(0.0, f64::max);
    let scale = columns.iter().map(|(_, _, s)| *s).fold(0.0, f64::max);
    let threshold = LEAKAGE_TOLERANCE * scale.max(1.0);
    if max_leak > threshold {
        return Err(Error::NotBlockDiagonal {
            leakage: max_leak,
            tolerance: threshold,
        });
    }

    let mut entries = Array2::zeros((d, d));
    for (j, (col, _, _)) in columns.into_iter().enumerate() {
        entries.column_mut(j).assign(&col);
    }
    Ok(SectorMatrix {
        sector: sector.clone(),
        entries,
    })
}

/// Outcome of the weak-symmetry check [L, J . J^dag] = 0 over all Fock dyads.
#[derive(Debug, Clone)]
pub struct SymmetryReport {
    /// max over dyads of max|L(J rho J^dag) - J (L rho) J^dag|
    pub max_leakage: f64,
    /// max |J^dag J - 1|, a sanity check on the supplied symmetry operator
    pub unitarity_deviation: f64,
    pub tolerance: f64,
    pub dyads_checked: usize,
    pub passed: bool,
}

/// Check L(J rho J^dag) = J (L rho) J^dag on the spanning set of Fock dyads.
pub fn verify_weak_symmetry(model: &LindbladModel, j_op: &TruncatedOperator) -> Result<SymmetryReport> {
    let c = model.cutoff();
    if j_op.cutoff() != c {
        return Err(Error::DimensionMismatch {
            left: c,
            right: j_op.cutoff(),
        });
    }
    let j = j_op.entries();
    let jd = cmat::dag(&j.view());
    let unitarity_deviation =
        cmat::max_abs_diff(&jd.dot(j).view(), &Array2::<Complex64>::eye(c).view());
    // conjugation by a diagonal J is O(C^2); both preset symmetries are diagonal
    let diagonal_phases: Option<Vec<Complex64>> = {
        let off_diag_max = j
            .indexed_iter()
            .filter(|((p, q), _)| p != q)
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max);
        if off_diag_max == 0.0 {
            Some((0..c).map(|i| j[[i, i]]).collect())
        } else {
            None
        }
    };

    let pairs: Vec<(usize, usize)> = (0..c)
        .flat_map(|m| (0..c).map(move |n| (m, n)))
        .collect();
    let max_leakage = pairs
        .par_iter()
        .map(|&(m, n)| {
            // J |m><n| J^dag = (J e_m)(J e_n)^dag is rank one
            let jm = j.column(m).to_owned();
            let jn = j.column(n).to_owned();
            let lhs = liouvillian_apply_rank_one(model, &jm.view(), &jn.view());
            let mid = liouvillian_apply_dyad(model, m, n);
            let rhs = match &diagonal_phases {
                Some(phases) => {
                    let mut out = mid;
                    for ((p, q), v) in out.indexed_iter_mut() {
                        *v *= phases[p] * phases[q].conj();
                    }
                    out
                }
                None => j.dot(&mid).dot(&jd),
            };
            cmat::max_abs_diff(&lhs.view(), &rhs.view())
        })
        .reduce(|| 0.0, f64::max);

    Ok(SymmetryReport {
        max_leakage,
        unitarity_deviation,
        tolerance: LEAKAGE_TOLERANCE,
        dyads_checked: c * c,
        passed: max_leakage < LEAKAGE_TOLERANCE,
    })
}

/// How an added dissipator acts on one sector.
#[derive(Debug, Clone)]
pub struct SectorAction {
    pub k: i64,
    /// max over basis dyads of max|D[L](dyad)|
    pub max_action: f64,
    /// When D[L] acts as a uniform scalar s on every basis dyad, that scalar;
    /// this is the eigenvalue shift the dissipator induces on the sector.
    pub scalar_shift: Option<Complex64>,
}

/// Report of the SSB-removal condition: sector 0 untouched, every other
/// sector visibly affected.
#[derive(Debug, Clone)]
pub struct SsbRemovalReport {
    pub sectors: Vec<SectorAction>,
    pub sector_zero_max: f64,
    pub passed: bool,
}

/// Check whether D[l_add] annihilates sector 0 while acting nontrivially on
/// every k != 0 sector, and measure the per-sector scalar shifts.
pub fn ssb_removal_check(
    model: &LindbladModel,
    l_add: &TruncatedOperator,
    sectors: &[SymmetrySector],
) -> Result<SsbRemovalReport> {
    let c = model.cutoff();
    if l_add.cutoff() != c {
        return Err(Error::DimensionMismatch {
            left: c,
            right: l_add.cutoff(),
        });
    }
    let probe = LindbladModel::new(
        TruncatedOperator::zeros(c),
        vec![l_add.clone()],
        SymmetryKind::None,
    )?;

    let mut actions = Vec::with_capacity(sectors.len());
    let mut sector_zero_max: f64 = 0.0;
    let mut nonzero_ok = true;
    for sector in sectors {
        if sector.cutoff != c {
            return Err(Error::DimensionMismatch {
                left: c,
                right: sector.cutoff,
            });
        }
        let mut max_action: f64 = 0.0;
        let mut shift: Option<Complex64> = None;
        let mut scalar = true;
        for &(m, n) in &sector.basis {
            let out = liouvillian_apply_dyad(&probe, m, n);
            let s = out[[m, n]];
            max_action = max_action.max(cmat::max_abs(&out.view()));
            let residual = out
                .indexed_iter()
                .filter(|((p, q), _)| (*p, *q) != (m, n))
                .map(|(_, v)| v.norm())
                .fold(0.0f64, f64::max);
            if residual > SECTOR_ZERO_TOLERANCE * s.norm().max(1.0) {
                scalar = false;
            }
            match shift {
                None => shift = Some(s),
                Some(prev) => {
                    if (prev - s).norm() > SECTOR_ZERO_TOLERANCE * prev.norm().max(1.0) {
                        scalar = false;
                    }
                }
            }
        }
        if sector.k == 0 {
            sector_zero_max = sector_zero_max.max(max_action);
        } else if max_action <= SECTOR_ZERO_TOLERANCE {
            nonzero_ok = false;
        }
        actions.push(SectorAction {
            k: sector.k,
            max_action,
            scalar_shift: if scalar { shift } else { None },
        });
    }
    let passed = sector_zero_max < SECTOR_ZERO_TOLERANCE && nonzero_ok;
    Ok(SsbRemovalReport {
        sectors: actions,
        sector_zero_max,
        passed,
    })
}
