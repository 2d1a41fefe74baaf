//! Classical normal-mode analysis of the coupled damped pair and the
//! boundary-value trajectories of the propagator.
//!
//! For identical oscillators the X-branch equations
//! `Ẍᵢ + 2γẊᵢ + ω₀²Xᵢ = (λ/M)Xⱼ` decouple in the sum/difference
//! combinations with eigenfrequencies `Ω₁,₂² = ω₀² − γ² ∓ λ/M`
//! (ordered `Ω₁ < ω₀ < Ω₂` for λ > 0), common decay rate γ and real
//! amplitude ratios r₁ = 1, r₂ = −1. The ξ-branch is the time-mirrored
//! (anti-damped) copy.

use crate::math::{self, abs, cos, sin, sqrt};
use crate::units::SystemParams;

/// Guard on |sin(Ωt)|: the boundary-value problem is singular at
/// t = kπ/Ω and evaluation is refused closer than this.
pub const EPS_SING: f64 = 1e-8;

/// Normal-mode data of the identical-oscillator pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeStructure {
    /// Soft (symmetric) mode frequency, Ω₁² = ω₀² − γ² − λ/M.
    pub omega1: f64,
    /// Stiff (antisymmetric) mode frequency, Ω₂² = ω₀² − γ² + λ/M.
    pub omega2: f64,
    /// Per-mode decay rates; both equal γ for identical damping.
    pub delta1: f64,
    pub delta2: f64,
    /// Amplitude ratios of Eq. set (A14): +1 and −1 here.
    pub r1: f64,
    pub r2: f64,
}

/// Symmetric/antisymmetric decomposition of the Hamiltonian: two
/// uncoupled oscillators with mass M′ = M/2 and squared frequencies
/// ω₀² ± λ/M. The minus mode goes soft as λ̃ → 1, where the pair
/// contains an effective free particle with classical spreading
/// ⟨x²⟩ = 2Dt, D = k_BT/Mγ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoupledModes {
    pub mass_prime: f64,
    pub omega_plus_sq: f64,
    pub omega_minus_sq: f64,
    pub free_particle: bool,
    /// Free-particle diffusion constants k_BTᵢ/Mγ (natural units) for
    /// each bath temperature; meaningful when `free_particle` is set.
    pub diffusion1: f64,
    pub diffusion2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModeError {
    /// λ̃ ≥ 1 − γ̃²: the soft mode is non-oscillatory and the dynamics
    /// pipeline does not apply. Carries the decoupled-mode diagnostic.
    FreeParticleRegime { diag: DecoupledModes },
    /// Boundary-value horizon too close to t = kπ/Ω.
    SingularHorizon { mode: u8, sin_value: f64 },
}

impl core::fmt::Display for ModeError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ModeError::FreeParticleRegime { diag } => write!(
                f,
                "free-particle regime: ω₋² = {} ≤ 0 (M′ = {}, ⟨x²⟩ = 2Dt with D = {} / {})",
                diag.omega_minus_sq, diag.mass_prime, diag.diffusion1, diag.diffusion2
            ),
            ModeError::SingularHorizon { mode, sin_value } => write!(
                f,
                "singular horizon: |sin(Ω{mode}t)| = {sin_value:e} below the 1e-8 guard"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ModeError {}

/// Normal-mode frequencies, decay rates and amplitude ratios.
///
/// Requires both mode frequencies real: |λ̃| < 1 − γ̃². Outside that
/// the pair contains a free-particle mode and the error carries the
/// [`decoupled_modes`] diagnostic.
pub fn mode_structure(params: &SystemParams) -> Result<ModeStructure, ModeError> {
    let w0sq = params.omega0() * params.omega0();
    let g = params.gamma();
    let lam = params.lambda() / params.mass();
    let o1sq = w0sq - g * g - lam;
    let o2sq = w0sq - g * g + lam;
    if o1sq <= 0.0 || o2sq <= 0.0 {
        return Err(ModeError::FreeParticleRegime { diag: decoupled_modes(params) });
    }
    Ok(ModeStructure {
        omega1: sqrt(o1sq),
        omega2: sqrt(o2sq),
        delta1: g,
        delta2: g,
        r1: 1.0,
        r2: -1.0,
    })
}

/// Hamiltonian normal-mode decomposition (diagnostic, valid for any λ̃).
pub fn decoupled_modes(params: &SystemParams) -> DecoupledModes {
    let w0sq = params.omega0() * params.omega0();
    let lam = params.lambda() / params.mass();
    let omega_minus_sq = w0sq - lam;
    let omega_plus_sq = w0sq + lam;
    DecoupledModes {
        mass_prime: params.mass() / 2.0,
        omega_plus_sq,
        omega_minus_sq,
        free_particle: omega_minus_sq.min(omega_plus_sq) <= 0.0,
        diffusion1: params.theta1() / (params.mass() * params.gamma()),
        diffusion2: params.theta2() / (params.mass() * params.gamma()),
    }
}

/// General (non-identical) mode diagnostic: quartic roots, implicit decay
/// rates, complex amplitude ratios and loss angles.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralModes {
    pub omega1: f64,
    pub omega2: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// Amplitude ratios; `None` when λ = 0 makes them divergent (1/λ).
    pub r1: Option<math::Complex64>,
    pub r2: Option<math::Complex64>,
    pub kappa1: f64,
    pub kappa2: f64,
    /// Set when λ → 0 made the ratios blow up.
    pub ratios_divergent: bool,
}

/// Outcome of the general quartic: real mode pair or a complex-frequency
/// report when the discriminant under the outer square root is negative.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneralModeResult {
    Real(GeneralModes),
    ComplexFrequencies { re: f64, im: f64, delta: f64 },
}

/// Evaluate the general two-oscillator mode diagnostic.
///
/// The decay rate δ appears on both sides of the defining relations; a
/// fixed-point iteration from δ = (γ₁+γ₂)/2 resolves it (terms cubic in
/// the damping are dropped, as in the underlying approximation). This
/// path is a diagnostic only: the dynamics pipeline is restricted to
/// identical oscillators.
#[allow(clippy::too_many_arguments)]
pub fn general_mode_diagnostic(
    omega01: f64,
    omega02: f64,
    gamma1: f64,
    gamma2: f64,
    mass1: f64,
    mass2: f64,
    lambda: f64,
) -> GeneralModeResult {
    let w1sq = omega01 * omega01;
    let w2sq = omega02 * omega02;

    // Fixed point for the common δ entering Δ₁, Δ₂ and the quartic roots.
    let mut delta = 0.5 * (gamma1 + gamma2);
    let mut roots = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let d1g = 2.0 * gamma1 * delta - delta * delta;
        let d2g = 2.0 * gamma2 * delta - delta * delta;
        let big_delta1 = 4.0 * (gamma1 - delta) * (gamma2 - delta) - d1g - d2g;
        // The printed Δ₂ carries a dimensionally spurious ω₀₁²+ω₀₂² term;
        // the identical-oscillator reduction to Ω² = ω₀² − γ² ∓ λ/M fixes
        // Δ₂ = (2γ₁δ−δ²)(2γ₂δ−δ²) − (2γ₁δ−δ²)ω₀₂² − (2γ₂δ−δ²)ω₀₁².
        let big_delta2 = d1g * d2g - d1g * w2sq - d2g * w1sq;
        let half_b = 0.5 * (w1sq + w2sq + big_delta1);
        let disc = half_b * half_b - big_delta2 - w1sq * w2sq + lambda * lambda / (mass1 * mass2);
        if disc < 0.0 {
            return GeneralModeResult::ComplexFrequencies {
                re: half_b,
                im: sqrt(-disc),
                delta,
            };
        }
        let root = sqrt(disc);
        let o1sq = half_b - root;
        let o2sq = half_b + root;
        if o1sq <= 0.0 {
            // soft mode went imaginary: report as complex frequencies
            return GeneralModeResult::ComplexFrequencies { re: o1sq, im: 0.0, delta };
        }
        roots = (sqrt(o1sq), sqrt(o2sq));
        // δ(ω²) from the damping relation, evaluated at the mean of the
        // two roots for a single common fixed point
        let d_of = |wsq: f64| {
            ((wsq - w2sq) * gamma1 + (wsq - w1sq) * gamma2) / ((wsq - w2sq) + (wsq - w1sq))
        };
        let new_delta = 0.5 * (d_of(o1sq) + d_of(o2sq));
        if abs(new_delta - delta) < 1e-15 {
            delta = new_delta;
            break;
        }
        delta = new_delta;
    }

    let (omega1, omega2) = roots;
    let d_of = |wsq: f64| {
        ((wsq - w2sq) * gamma1 + (wsq - w1sq) * gamma2) / ((wsq - w2sq) + (wsq - w1sq))
    };
    let delta1 = d_of(omega1 * omega1);
    let delta2 = d_of(omega2 * omega2);

    let ratios_divergent = abs(lambda) < 1e-300;
    let ratio = |w0sq: f64, g: f64, w: f64, d: f64, m: f64| -> Option<math::Complex64> {
        if ratios_divergent {
            None
        } else {
            let re = w0sq - 2.0 * g * d + d * d - w * w;
            let im = 2.0 * w * (g - d);
            Some(math::Complex64::new(re, im) / (lambda / m))
        }
    };
    let r1 = ratio(w1sq, gamma1, omega1, delta1, mass1);
    let r2 = ratio(w2sq, gamma2, omega2, delta2, mass2);
    let kappa = |w0sq: f64, g: f64, w: f64, d: f64| {
        libm::atan2(2.0 * w * (g - d), w0sq - 2.0 * g * d + d * d - w * w)
    };
    GeneralModeResult::Real(GeneralModes {
        omega1,
        omega2,
        delta1,
        delta2,
        r1,
        r2,
        kappa1: kappa(w1sq, gamma1, omega1, delta1),
        kappa2: kappa(w2sq, gamma2, omega2, delta2),
        ratios_divergent,
    })
}

/// Boundary data for the classical boundary-value trajectories.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryEndpoints {
    pub xi1: f64,
    pub xi2: f64,
    pub xf1: f64,
    pub xf2: f64,
    pub xii1: f64,
    pub xii2: f64,
    pub xif1: f64,
    pub xif2: f64,
    /// Horizon t of the boundary-value problem.
    pub t: f64,
}

/// The four classical trajectories at intermediate time τ ∈ [0, t].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub x1: f64,
    pub x2: f64,
    pub xi1: f64,
    pub xi2: f64,
}

/// Evaluate the X- and ξ-branch boundary-value trajectories.
///
/// The X-branch decays like e^{−γτ} with e^{+γt} boundary factors; the
/// ξ-branch is the mirror image with the signs of γ flipped.
pub fn classical_trajectory(
    modes: &ModeStructure,
    ends: &TrajectoryEndpoints,
    gamma: f64,
    tau: f64,
) -> Result<TrajectoryPoint, ModeError> {
    let t = ends.t;
    let (s1t, c1t) = math::sin_cos(modes.omega1 * t);
    let (s2t, c2t) = math::sin_cos(modes.omega2 * t);
    if abs(s1t) < EPS_SING {
        return Err(ModeError::SingularHorizon { mode: 1, sin_value: s1t });
    }
    if abs(s2t) < EPS_SING {
        return Err(ModeError::SingularHorizon { mode: 2, sin_value: s2t });
    }

    let egt = math::exp(gamma * t);
    let emgt = math::exp(-gamma * t);
    let egtau = math::exp(gamma * tau);
    let emgtau = math::exp(-gamma * tau);
    let s1 = sin(modes.omega1 * tau);
    let c1 = cos(modes.omega1 * tau);
    let s2 = sin(modes.omega2 * tau);
    let c2 = cos(modes.omega2 * tau);

    // X-branch: sum combination rides mode 1, difference rides mode 2.
    let xsum_i = 0.5 * (ends.xi1 + ends.xi2);
    let xdif_i = 0.5 * (ends.xi2 - ends.xi1);
    let a1 = (ends.xf1 + ends.xf2) / (2.0 * s1t) * egt - c1t / s1t * xsum_i;
    let a2 = (ends.xf2 - ends.xf1) / (2.0 * s2t) * egt - c2t / s2t * xdif_i;
    let mode1_x = (a1 * s1 + xsum_i * c1) * emgtau;
    let mode2_x = (a2 * s2 + xdif_i * c2) * emgtau;
    let x1 = mode1_x - mode2_x;
    let x2 = mode1_x + mode2_x;

    // ξ-branch: identical structure with γ → −γ.
    let psum_i = 0.5 * (ends.xii1 + ends.xii2);
    let pdif_i = 0.5 * (ends.xii2 - ends.xii1);
    let b1 = (ends.xif1 + ends.xif2) / (2.0 * s1t) * emgt - c1t / s1t * psum_i;
    let b2 = (ends.xif2 - ends.xif1) / (2.0 * s2t) * emgt - c2t / s2t * pdif_i;
    let mode1_xi = (b1 * s1 + psum_i * c1) * egtau;
    let mode2_xi = (b2 * s2 + pdif_i * c2) * egtau;
    let xi1 = mode1_xi - mode2_xi;
    let xi2 = mode1_xi + mode2_xi;

    Ok(TrajectoryPoint { x1, x2, xi1, xi2 })
}
