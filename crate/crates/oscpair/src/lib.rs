//! Second-moment dynamics of two identical, arbitrarily coupled damped
//! quantum oscillators, each attached to its own Ohmic thermal bath.
//!
//! The reduced density matrix of the pair stays Gaussian for Gaussian
//! initial data, so the full state is carried by three numbers per time:
//! the spatial variances of each oscillator and their covariance. This
//! crate evaluates those moments exactly (up to quadrature tolerance)
//! from the influence-functional solution:
//!
//! * [`units`] — parameter validation and CGS ↔ natural-unit conversion,
//! * [`modes`] — classical normal modes, decay rates and boundary-value
//!   trajectories of the coupled damped pair,
//! * [`kinematics`] — the deterministic time-function tables (`s`, `b`,
//!   `b'`, `n`, `m`, `D`, `Π`) that carry the classical action,
//! * [`bath`] — the thermally weighted influence integrals `C1`, `C2`,
//!   `E1` (semi-analytic time integration + adaptive frequency
//!   quadrature),
//! * [`density`] — assembly of the Gaussian coefficients and the
//!   physical moments, plus the independent uncoupled closed form,
//! * [`fdt`] — the fluctuation–dissipation baseline variance, plateau
//!   extraction and the coupling/temperature scans,
//! * [`quad`] — Gauss–Kronrod and Filon-type quadrature primitives,
//! * [`timegrid`] — evaluation grids that step off the singular times
//!   `t = kπ/Ω` of the boundary-value propagator.
//!
//! Everything is computed in natural units `ℏ = M = ω₀ = k_B = 1`;
//! variances are reported in units of the ground-state dispersion
//! `ℏ/2Mω₀` where noted. The crate is `no_std`-compatible (with `alloc`);
//! the in-memory kernel cache requires the `std` feature.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod math;
pub mod units;
pub mod modes;
pub mod kinematics;
pub mod quad;
pub mod bath;
pub mod density;
pub mod fdt;
pub mod timegrid;

pub use bath::{BathKernels, F14Reading, QuadratureSpec};
pub use density::{MomentState, NormalizedMoments};
pub use fdt::SteadyState;
pub use kinematics::KinematicSet;
pub use modes::ModeStructure;
pub use units::SystemParams;

/// Evaluate the full moment pipeline at one time point.
///
/// Convenience wrapper: normal modes → kinematic tables → bath kernels →
/// Gaussian coefficients → moments. Each stage is also available
/// separately for callers that want to share intermediates (e.g. a
/// kernel cache over a time grid).
pub fn evolve_moments(
    params: &SystemParams,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<MomentState, PipelineError> {
    let modes = modes::mode_structure(params).map_err(PipelineError::Modes)?;
    let kernels = bath::bath_integrals(t, params, &modes, spec).map_err(PipelineError::Bath)?;
    evolve_moments_with_kernels(params, t, &modes, &kernels)
}

/// Same as [`evolve_moments`] but with precomputed bath kernels.
pub fn evolve_moments_with_kernels(
    params: &SystemParams,
    t: f64,
    modes: &ModeStructure,
    kernels: &BathKernels,
) -> Result<MomentState, PipelineError> {
    let kin = KinematicSet::evaluate(t, params, modes).map_err(PipelineError::Kinematics)?;
    let im = density::intermediates(&kin, kernels, params.a1(), params.a2())
        .map_err(PipelineError::Density)?;
    let beta = density::beta_coefficients(&im, &kin, kernels);
    density::moments(t, &beta).map_err(PipelineError::Density)
}

/// Error from any stage of the moment pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum PipelineError {
    Modes(modes::ModeError),
    Kinematics(kinematics::KinematicsError),
    Bath(bath::BathError),
    Density(density::DensityError),
}

impl core::fmt::Display for PipelineError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PipelineError::Modes(e) => write!(f, "mode analysis: {e}"),
            PipelineError::Kinematics(e) => write!(f, "kinematics: {e}"),
            PipelineError::Bath(e) => write!(f, "bath integrals: {e}"),
            PipelineError::Density(e) => write!(f, "density matrix: {e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PipelineError {}
