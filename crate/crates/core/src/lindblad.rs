//! The Lindblad generator: d rho / dt = -i[H, rho] + sum_j D[L_j] rho,
//! with D[L] rho = L rho L^dag - (L^dag L rho + rho L^dag L)/2.
//!
//! Rates are pre-folded into the jump operators (each stored operator is
//! sqrt(rate) * operator), and everything is expressed in natural units where
//! the photon loss rate Gamma = 1.

use ndarray::linalg::kron;
use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::cmat;
use crate::error::{Error, Result};
use crate::fock::TruncatedOperator;

/// Hermiticity tolerance required of the Hamiltonian at model construction.
pub const HAMILTONIAN_HERMITICITY_TOLERANCE: f64 = 1e-12;

/// Largest cutoff for which [`vectorize`] will build the dense C^2 x C^2
/// superoperator by default.
pub const DEFAULT_VECTORIZE_CUTOFF: usize = 60;

/// Weak-symmetry tag carried by a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryKind {
    /// Phase rotations exp(i phi a^dag a) for any phi.
    U1,
    /// Photon-number parity.
    Z2,
    /// No declared symmetry.
    None,
}

/// Hamiltonian plus pre-scaled jump operators; defines the Lindblad generator.
#[derive(Debug, Clone)]
pub struct LindbladModel {
    hamiltonian: TruncatedOperator,
    jumps: Vec<TruncatedOperator>,
    symmetry: SymmetryKind,
    cutoff: usize,
    // cached per jump: L^dag and L^dag L
    jump_daggers: Vec<Array2<Complex64>>,
    jump_norm_ops: Vec<Array2<Complex64>>,
    hamiltonian_is_zero: bool,
}

impl LindbladModel {
    pub fn new(
        hamiltonian: TruncatedOperator,
        jumps: Vec<TruncatedOperator>,
        symmetry: SymmetryKind,
    ) -> Result<Self> {
        let cutoff = hamiltonian.cutoff();
        let herm = hamiltonian.hermiticity_deviation();
        if herm > HAMILTONIAN_HERMITICITY_TOLERANCE {
            return Err(Error::NotHermitian {
                deviation: herm,
                tolerance: HAMILTONIAN_HERMITICITY_TOLERANCE,
            });
        }
        for jump in &jumps {
            if jump.cutoff() != cutoff {
                return Err(Error::DimensionMismatch {
                    left: cutoff,
                    right: jump.cutoff(),
                });
            }
        }
        let jump_daggers: Vec<_> = jumps
            .iter()
            .map(|l| cmat::dag(&l.entries().view()))
            .collect();
        let jump_norm_ops: Vec<_> = jumps
            .iter()
            .zip(&jump_daggers)
            .map(|(l, ld)| ld.dot(l.entries()))
            .collect();
        let hamiltonian_is_zero = hamiltonian.max_abs() == 0.0;
        Ok(Self {
            hamiltonian,
            jumps,
            symmetry,
            cutoff,
            jump_daggers,
            jump_norm_ops,
            hamiltonian_is_zero,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn symmetry(&self) -> SymmetryKind {
        self.symmetry
    }

    pub fn hamiltonian(&self) -> &TruncatedOperator {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[TruncatedOperator] {
        &self.jumps
    }

    /// New model with `jump` appended; `self` is unchanged. The symmetry tag
    /// is kept as-is: callers adding a symmetry-breaking operator should
    /// re-verify with [`crate::symmetry::verify_weak_symmetry`].
    pub fn add_dissipator(&self, jump: TruncatedOperator) -> Result<Self> {
        if jump.cutoff() != self.cutoff {
            return Err(Error::DimensionMismatch {
                left: self.cutoff,
                right: jump.cutoff(),
            });
        }
        let mut jumps = self.jumps.clone();
        jumps.push(jump);
        Self::new(self.hamiltonian.clone(), jumps, self.symmetry)
    }
}

/// D[L] rho = L rho L^dag - (L^dag L rho + rho L^dag L)/2.
pub fn dissipator_apply(
    jump: &TruncatedOperator,
    rho: &TruncatedOperator,
) -> Result<TruncatedOperator> {
    if jump.cutoff() != rho.cutoff() {
        return Err(Error::DimensionMismatch {
            left: jump.cutoff(),
            right: rho.cutoff(),
        });
    }
    let l = jump.entries();
    let ld = cmat::dag(&l.view());
    let k = ld.dot(l);
    let half = Complex64::new(0.5, 0.0);
    let out = l.dot(rho.entries()).dot(&ld) - (k.dot(rho.entries()) + rho.entries().dot(&k)) * half;
    Ok(TruncatedOperator::from_parts(rho.cutoff(), out))
}

/// L rho = -i[H, rho] + sum_j D[L_j] rho.
pub fn liouvillian_apply(model: &LindbladModel, rho: &TruncatedOperator) -> Result<TruncatedOperator> {
    if model.cutoff() != rho.cutoff() {
        return Err(Error::DimensionMismatch {
            left: model.cutoff(),
            right: rho.cutoff(),
        });
    }
    Ok(TruncatedOperator::from_parts(
        model.cutoff(),
        liouvillian_apply_arr(model, &rho.entries().view()),
    ))
}

/// Unchecked dense application, the hot path for time evolution.
pub(crate) fn liouvillian_apply_arr(
    model: &LindbladModel,
    rho: &ArrayView2<Complex64>,
) -> Array2<Complex64> {
    let c = model.cutoff;
    let half = Complex64::new(0.5, 0.0);
    let mut out = Array2::<Complex64>::zeros((c, c));
    if !model.hamiltonian_is_zero {
        let h = model.hamiltonian.entries();
        let comm = h.dot(rho) - rho.dot(h);
        out = out + comm * Complex64::new(0.0, -1.0);
    }
    for (j, jump) in model.jumps.iter().enumerate() {
        let l = jump.entries();
        let ld = &model.jump_daggers[j];
        let k = &model.jump_norm_ops[j];
        out = out + l.dot(rho).dot(ld) - (k.dot(rho) + rho.dot(k)) * half;
    }
    out
}

/// L applied to the rank-one operator u v^dag, in O(C^2) per jump.
pub(crate) fn liouvillian_apply_rank_one(
    model: &LindbladModel,
    u: &ArrayView1<Complex64>,
    v: &ArrayView1<Complex64>,
) -> Array2<Complex64> {
    let c = model.cutoff;
    let half = Complex64::new(0.5, 0.0);
    let mut out = Array2::<Complex64>::zeros((c, c));
    if !model.hamiltonian_is_zero {
        let h = model.hamiltonian.entries();
        let hu = h.dot(u);
        let hdv = cmat::dag(&h.view()).dot(v);
        out = out + (cmat::outer(&hu.view(), v) - cmat::outer(u, &hdv.view()))
            * Complex64::new(0.0, -1.0);
    }
    for (j, jump) in model.jumps.iter().enumerate() {
        let l = jump.entries();
        let k = &model.jump_norm_ops[j];
        let lu = l.dot(u);
        let lv = l.dot(v);
        let ku = k.dot(u);
        // K is Hermitian, so (u v^dag K) = outer(u, K v)
        let kv = k.dot(v);
        out = out + cmat::outer(&lu.view(), &lv.view())
            - (cmat::outer(&ku.view(), v) + cmat::outer(u, &kv.view())) * half;
    }
    out
}

/// L applied to the Fock dyad |m><n|, reading columns straight off the
/// operators; O(C^2) per jump. This is what makes sector-block construction
/// scale as C^3 instead of C^5.
pub(crate) fn liouvillian_apply_dyad(
    model: &LindbladModel,
    m: usize,
    n: usize,
) -> Array2<Complex64> {
    let c = model.cutoff;
    let half = Complex64::new(0.5, 0.0);
    let minus_i = Complex64::new(0.0, -1.0);
    let mut out = Array2::<Complex64>::zeros((c, c));
    if !model.hamiltonian_is_zero {
        let h = model.hamiltonian.entries();
        // -i H E: column n gets -i H[:, m]; +i E H: row m gets +i H[n, :]
        for row in 0..c {
            out[[row, n]] += minus_i * h[[row, m]];
        }
        for col in 0..c {
            out[[m, col]] -= minus_i * h[[n, col]];
        }
    }
    for (j, jump) in model.jumps.iter().enumerate() {
        let l = jump.entries();
        let k = &model.jump_norm_ops[j];
        // L E L^dag = outer(L[:, m], L[:, n])
        for row in 0..c {
            let lm = l[[row, m]];
            if lm.norm_sqr() == 0.0 {
                continue;
            }
            for col in 0..c {
                out[[row, col]] += lm * l[[col, n]].conj();
            }
        }
        // -1/2 K E: column n; -1/2 E K: row m
        for row in 0..c {
            out[[row, n]] -= half * k[[row, m]];
        }
        for col in 0..c {
            out[[m, col]] -= half * k[[n, col]];
        }
    }
    out
}

/// Dense matrix form of the Liouvillian in the column-stacking convention:
/// vec(rho) concatenates the columns of rho, and
/// M = -i (I (x) H - H^T (x) I)
///   + sum_j [ conj(L) (x) L - 1/2 I (x) (L^dag L) - 1/2 (L^dag L)^T (x) I ].
#[derive(Debug, Clone)]
pub struct SuperoperatorMatrix {
    cutoff: usize,
    entries: Array2<Complex64>,
}

impl SuperoperatorMatrix {
    pub fn dim(&self) -> usize {
        self.cutoff * self.cutoff
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    /// M vec(rho), reshaped back to a matrix.
    pub fn apply(&self, rho: &TruncatedOperator) -> Result<TruncatedOperator> {
        if rho.cutoff() != self.cutoff {
            return Err(Error::DimensionMismatch {
                left: self.cutoff,
                right: rho.cutoff(),
            });
        }
        let v = cmat::vec_column_stacked(&rho.entries().view());
        let out = self.entries.dot(&v);
        Ok(TruncatedOperator::from_parts(
            self.cutoff,
            cmat::unvec_column_stacked(&out.view(), self.cutoff),
        ))
    }

    /// Index of matrix entry (m, n) in vec(rho).
    pub fn vec_index(&self, m: usize, n: usize) -> usize {
        n * self.cutoff + m
    }
}

/// Build the dense superoperator, refusing above `DEFAULT_VECTORIZE_CUTOFF`.
pub fn vectorize(model: &LindbladModel) -> Result<SuperoperatorMatrix> {
    vectorize_bounded(model, DEFAULT_VECTORIZE_CUTOFF)
}

/// Build the dense superoperator with an explicit cutoff bound.
pub fn vectorize_bounded(model: &LindbladModel, max_cutoff: usize) -> Result<SuperoperatorMatrix> {
    let c = model.cutoff();
    if c > max_cutoff {
        return Err(Error::VectorizeBound {
            cutoff: c,
            max: max_cutoff,
        });
    }
    let eye = Array2::<Complex64>::eye(c);
    let minus_i = Complex64::new(0.0, -1.0);
    let half = Complex64::new(0.5, 0.0);
    let mut m = Array2::<Complex64>::zeros((c * c, c * c));
    if !model.hamiltonian_is_zero {
        let h = model.hamiltonian.entries();
        let ht = h.t().to_owned();
        m = m + (kron(&eye, h) - kron(&ht, &eye)) * minus_i;
    }
    for (j, jump) in model.jumps.iter().enumerate() {
        let l = jump.entries();
        let lconj = l.mapv(|z| z.conj());
        let k = &model.jump_norm_ops[j];
        let kt = k.t().to_owned();
        m = m + kron(&lconj, l) - (kron(&eye, k) + kron(&kt, &eye)) * half;
    }
    let result = SuperoperatorMatrix {
        cutoff: c,
        entries: m,
    };
    verify_superoperator(model, &result)?;
    Ok(result)
}

/// Trace preservation (vec(I)^dag M = 0) plus agreement with the direct
/// application on a small random Hermitian sample.
fn verify_superoperator(model: &LindbladModel, sup: &SuperoperatorMatrix) -> Result<()> {
    let c = sup.cutoff;
    let scale = cmat::max_abs(&sup.entries.view()).max(1.0);
    for col in 0..c * c {
        let mut acc = Complex64::default();
        for diag in 0..c {
            acc += sup.entries[[sup.vec_index(diag, diag), col]];
        }
        if acc.norm() > 1e-10 * scale {
            return Err(Error::Numerical {
                detail: format!(
                    "superoperator does not preserve trace: residual {:.3e}",
                    acc.norm()
                ),
            });
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed_ab1e);
    for _ in 0..3 {
        let rho = random_hermitian(c, &mut rng);
        let direct = liouvillian_apply_arr(model, &rho.view());
        let via_matrix = sup
            .entries
            .dot(&cmat::vec_column_stacked(&rho.view()));
        let via_matrix = cmat::unvec_column_stacked(&via_matrix.view(), c);
        let dev = cmat::max_abs_diff(&direct.view(), &via_matrix.view());
        if dev > 1e-12 * scale {
            return Err(Error::Numerical {
                detail: format!("superoperator disagrees with direct application by {dev:.3e}"),
            });
        }
    }
    Ok(())
}

pub(crate) fn random_hermitian(c: usize, rng: &mut StdRng) -> Array2<Complex64> {
    let mut m = Array2::<Complex64>::zeros((c, c));
    for i in 0..c {
        m[[i, i]] = Complex64::new(rng.random::<f64>() - 0.5, 0.0);
        for j in i + 1..c {
            let z = Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            m[[i, j]] = z;
            m[[j, i]] = z.conj();
        }
    }
    m
}

#[cfg(test)]
pub(crate) fn basis_vector(c: usize, idx: usize) -> Array1<Complex64> {
    let mut v = Array1::zeros(c);
    v[idx] = Complex64::new(1.0, 0.0);
    v
}
