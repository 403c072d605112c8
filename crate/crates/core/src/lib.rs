//! Liouvillian machinery for driven-dissipative bosonic models on a truncated
//! Fock space: Lindblad generators, weak-symmetry sector decomposition,
//! steady states and sector spectra, time evolution, and Wigner functions.
//!
//! The two shipped models — a gain-saturated laser with a U(1) weak symmetry
//! and a two-photon Kerr resonator with a Z2 weak symmetry — exhibit
//! second-order dissipative phase transitions whose spontaneous symmetry
//! breaking can be switched off by an extra dissipator (dephasing for U(1), a
//! parity jump for Z2) without touching any sector-0 quantity.
//!
//! Sector blocks, not sparsity, are the scaling mechanism: a U(1) sector of
//! the C^2-dimensional operator space is only C-dimensional, so steady states
//! and gaps stay cheap while full vectorization is reserved for small-cutoff
//! cross-checks.

pub mod dynamics;
pub mod error;
pub mod fock;
pub mod lindblad;
pub mod models;
pub mod spectral;
pub mod symmetry;

mod cmat;
mod expm;
mod integrator;
mod stack;

pub use error::{Error, Result};
pub use fock::{DensityMatrix, TruncatedOperator};
pub use integrator::IntegratorOptions;
pub use lindblad::{LindbladModel, SuperoperatorMatrix, SymmetryKind};
pub use models::GAMMA;
pub use spectral::{GapTrace, SpectrumResult};
pub use symmetry::{SectorMatrix, SymmetryGroup, SymmetrySector};
