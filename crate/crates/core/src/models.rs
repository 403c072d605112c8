//! The two demonstration models with their thermodynamic-limit scalings and
//! SSB-removal dissipators, plus cutoff selection.
//!
//! Everything is in natural units (Gamma = 1), so rates are multiples of the
//! photon loss rate. The scaling parameter N enters only through B/N (laser)
//! and U/N (Kerr): rescaled observables such as <a^dag a>/N converge as N
//! grows, and the critical nonanalyticity sharpens.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{annihilation, number, parity, TruncatedOperator};
use crate::lindblad::{LindbladModel, SymmetryKind};
use crate::spectral::steady_state_observable;

/// Photon loss rate defining the natural units.
pub const GAMMA: f64 = 1.0;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Matrix elements of a a^dag on the retained Fock space: diag(n + 1).
///
/// Taking matrix elements of the untruncated operator (rather than the
/// product of truncated ladder operators, which zeroes the top corner) is
/// what keeps dephasing an exact scalar on every symmetry sector.
fn photon_plus_one(cutoff: usize) -> Result<TruncatedOperator> {
    Ok(&number(cutoff)? + &TruncatedOperator::identity(cutoff))
}

/// Laser (gain + saturation + loss) configuration, rates in units of Gamma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserConfig {
    /// Medium gain rate A.
    pub gain: f64,
    /// Gain-saturation rate B, before the 1/N rescaling.
    pub saturation: f64,
    /// Cavity frequency omega; zero in the default rotating frame.
    pub omega: f64,
    /// Additional dephasing rate eta; the SSB-removal knob.
    pub dephasing: f64,
    /// Scaling parameter N (real-valued to allow fine sweeps).
    pub scale: f64,
    /// Fock cutoff C. Zero is allowed in stored configs to mean "choose
    /// automatically"; builders reject it.
    pub cutoff: usize,
}

impl LaserConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gain > 0.0) || !(self.saturation > 0.0) || !(self.scale > 0.0) {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "laser rates must satisfy A > 0, B > 0, N > 0 (got A={}, B={}, N={})",
                    self.gain, self.saturation, self.scale
                ),
            });
        }
        if self.dephasing < 0.0 {
            return Err(Error::InvalidConfig {
                reason: format!("dephasing rate eta must be >= 0, got {}", self.dephasing),
            });
        }
        Ok(())
    }

    /// Weak-gain validity ratio B (<n> + 1) / (2A) at the rescaled B; the
    /// model is advisory-valid while this stays well below 1 (warn above 0.1).
    pub fn weak_gain_ratio(&self, n_estimate: f64) -> f64 {
        (self.saturation / self.scale) * (n_estimate + 1.0) / (2.0 * self.gain)
    }
}

/// Build the laser model: H = omega a^dag a and jumps
/// L1 = a^dag (2A - (B/N) a a^dag) / (2 sqrt(A)),
/// L2 = sqrt(3(B/N)/4) a a^dag,
/// L3 = sqrt(Gamma) a,
/// plus L4 = sqrt(eta/4) a a^dag when eta > 0. U(1) weak symmetry.
pub fn laser_model(cfg: &LaserConfig) -> Result<LindbladModel> {
    cfg.validate()?;
    let c = cfg.cutoff;
    let b_scaled = cfg.saturation / cfg.scale;
    let a = annihilation(c)?;
    let aad = photon_plus_one(c)?;

    let gain_core = &TruncatedOperator::identity(c).scale(re(2.0 * cfg.gain))
        - &aad.scale(re(b_scaled));
    let l1 = a
        .dagger()
        .dot(&gain_core)
        .scale(re(1.0 / (2.0 * cfg.gain.sqrt())));
    let l2 = aad.scale(re((3.0 * b_scaled / 4.0).sqrt()));
    let l3 = a.scale(re(GAMMA.sqrt()));
    let mut jumps = vec![l1, l2, l3];
    if cfg.dephasing > 0.0 {
        jumps.push(aad.scale(re((cfg.dephasing / 4.0).sqrt())));
    }
    let hamiltonian = number(c)?.scale(re(cfg.omega));
    LindbladModel::new(hamiltonian, jumps, SymmetryKind::U1)
}

/// Two-photon Kerr resonator configuration, rates in units of Gamma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KerrConfig {
    /// Cavity-to-pump detuning Delta.
    pub detuning: f64,
    /// Two-photon drive intensity G (zero allowed: undriven lossy cavity).
    pub drive: f64,
    /// Kerr interaction U, before the 1/N rescaling.
    pub kerr: f64,
    /// Parity-jump rate zeta; the SSB-removal knob.
    pub parity_jump: f64,
    /// Scaling parameter N.
    pub scale: f64,
    /// Fock cutoff C (zero in stored configs means "choose automatically").
    pub cutoff: usize,
}

impl KerrConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.kerr > 0.0) || !(self.scale > 0.0) || self.drive < 0.0 {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "Kerr rates must satisfy U > 0, N > 0, G >= 0 (got U={}, N={}, G={})",
                    self.kerr, self.scale, self.drive
                ),
            });
        }
        if self.parity_jump < 0.0 {
            return Err(Error::InvalidConfig {
                reason: format!("parity-jump rate zeta must be >= 0, got {}", self.parity_jump),
            });
        }
        Ok(())
    }
}

/// Build the Kerr model: H = -Delta a^dag a + i(G/2)(a^dag^2 - a^2)
/// + (U/2N) a^dag^2 a^2, jump sqrt(Gamma) a, plus sqrt(zeta) J when
/// zeta > 0 (J = parity). Z2 weak symmetry.
pub fn kerr_model(cfg: &KerrConfig) -> Result<LindbladModel> {
    cfg.validate()?;
    let c = cfg.cutoff;
    let u_scaled = cfg.kerr / cfg.scale;
    let a = annihilation(c)?;
    let a2 = a.dot(&a);
    let ad2 = a2.dagger();

    let mut h = number(c)?.scale(re(-cfg.detuning));
    h = &h + &(&ad2 - &a2).scale(Complex64::new(0.0, cfg.drive / 2.0));
    h = &h + &ad2.dot(&a2).scale(re(u_scaled / 2.0));

    let mut jumps = vec![a.scale(re(GAMMA.sqrt()))];
    if cfg.parity_jump > 0.0 {
        jumps.push(parity(c)?.scale(re(cfg.parity_jump.sqrt())));
    }
    LindbladModel::new(h, jumps, SymmetryKind::Z2)
}

/// One row of a cutoff-convergence table.
#[derive(Debug, Clone, Copy)]
pub struct CutoffSample {
    pub cutoff: usize,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct CutoffSuggestion {
    /// Smallest scheduled cutoff at which the observable stopped moving.
    pub cutoff: usize,
    pub table: Vec<CutoffSample>,
}

fn next_cutoff(c: usize) -> usize {
    c * 3 / 2
}

/// Walk the cutoff schedule 10, 15, 22, 33, ... (x1.5) until the steady-state
/// observable changes by less than `tol` (relative) between consecutive
/// steps; returns the converged cutoff and the whole table.
pub fn suggest_cutoff<M, O>(
    build: M,
    observable: O,
    tol: f64,
    max_cutoff: usize,
) -> Result<CutoffSuggestion>
where
    M: Fn(usize) -> Result<LindbladModel>,
    O: Fn(usize) -> Result<TruncatedOperator>,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig {
            reason: format!("convergence tolerance must be positive, got {tol}"),
        });
    }
    let eval = |c: usize| -> Result<f64> {
        let model = build(c)?;
        if model.cutoff() != c {
            return Err(Error::DimensionMismatch {
                left: c,
                right: model.cutoff(),
            });
        }
        steady_state_observable(&model, &observable(c)?)
    };

    let mut cutoff = 10;
    let mut value = eval(cutoff)?;
    let mut table = vec![CutoffSample { cutoff, value }];
    loop {
        let next = next_cutoff(cutoff);
        if next > max_cutoff {
            return Err(Error::CutoffNotConverged {
                last_cutoff: cutoff,
                max_cutoff,
                tolerance: tol,
            });
        }
        let next_value = eval(next)?;
        table.push(CutoffSample {
            cutoff: next,
            value: next_value,
        });
        let denom = next_value.abs();
        let converged = if denom < 1e-12 {
            (next_value - value).abs() < tol
        } else {
            (next_value - value).abs() / denom < tol
        };
        if converged {
            return Ok(CutoffSuggestion {
                cutoff: next,
                table,
            });
        }
        cutoff = next;
        value = next_value;
    }
}

/// Which base model a preset builds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PresetModel {
    Laser(LaserConfig),
    Kerr(KerrConfig),
}

/// A shipped figure-reproduction parameter set.
#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    /// Base configuration; `cutoff = 0` means choose automatically.
    pub model: PresetModel,
    /// Parameter the demonstration sweeps (the gain A or the drive G).
    pub sweep_parameter: &'static str,
    pub sweep_start: f64,
    pub sweep_stop: f64,
    pub sweep_step: f64,
    pub scale_values: &'static [f64],
    /// SSB-removal rates (eta or zeta) to compare.
    pub removal_rates: &'static [f64],
}

/// `laser-fig1`: B = 0.1/N, omega = 0, gain swept over (0, 2]; the gain
/// jump carries 1/sqrt(A), so the sweep starts one step above zero.
pub const LASER_FIG1: Preset = Preset {
    name: "laser-fig1",
    model: PresetModel::Laser(LaserConfig {
        gain: 1.25,
        saturation: 0.1,
        omega: 0.0,
        dephasing: 0.0,
        scale: 1.0,
        cutoff: 0,
    }),
    sweep_parameter: "A",
    sweep_start: 0.05,
    sweep_stop: 2.0,
    sweep_step: 0.05,
    scale_values: &[1.0, 2.0, 5.0, 10.0],
    removal_rates: &[0.0, 0.2],
};

/// `kerr-fig2`: Delta = 10, U = 10 (before the 1/N rescaling), drive swept.
pub const KERR_FIG2: Preset = Preset {
    name: "kerr-fig2",
    model: PresetModel::Kerr(KerrConfig {
        detuning: 10.0,
        drive: 3.0,
        kerr: 10.0,
        parity_jump: 0.0,
        scale: 1.0,
        cutoff: 0,
    }),
    sweep_parameter: "G",
    sweep_start: 0.25,
    sweep_stop: 12.5,
    sweep_step: 0.25,
    scale_values: &[1.0, 2.0, 5.0],
    removal_rates: &[0.0, 0.2],
};

pub fn preset(name: &str) -> Option<Preset> {
    match name {
        "laser-fig1" => Some(LASER_FIG1),
        "kerr-fig2" => Some(KERR_FIG2),
        _ => None,
    }
}

pub fn preset_names() -> &'static [&'static str] {
    &["laser-fig1", "kerr-fig2"]
}
