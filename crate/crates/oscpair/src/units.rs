//! Physical parameters, CGS → natural-unit conversion and admissibility
//! checks.
//!
//! Internally everything runs in natural units `ℏ = M = ω₀ = k_B = 1`:
//! damping and coupling become the dimensionless `γ̃ = γ/ω₀` and
//! `λ̃ = λ/Mω₀²`, bath temperatures become `θ = k_B T/ℏω₀`, and lengths²
//! are measured in `ℏ/Mω₀` (so the ground-state dispersion `ℏ/2Mω₀`
//! equals 0.5 internally).

use crate::math;

/// Planck constant, erg·s.
pub const HBAR_CGS: f64 = 1.0546e-27;
/// Boltzmann constant, erg/K.
pub const KB_CGS: f64 = 1.3807e-16;

/// Ground-state dispersion `ℏ/2Mω₀` in internal length² units.
pub const NATURAL_DISPERSION: f64 = 0.5;

/// Laboratory-frame (CGS) inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawParams {
    pub mass_g: f64,
    pub omega0_radps: f64,
    pub gamma_radps: f64,
    /// Coupling constant λ, g/s² (erg/cm²).
    pub lambda_cgs: f64,
    pub t1_kelvin: f64,
    pub t2_kelvin: f64,
    pub sigma01_sq_cm2: f64,
    pub sigma02_sq_cm2: f64,
}

/// The dimensional scales a [`SystemParams`] was built from; retained so
/// natural-unit results can be mapped back to CGS exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CgsScales {
    pub mass_g: f64,
    pub omega0_radps: f64,
}

impl CgsScales {
    /// Internal length² unit `ℏ/Mω₀` in cm².
    pub fn length_sq_cm2(&self) -> f64 {
        HBAR_CGS / (self.mass_g * self.omega0_radps)
    }
}

/// Dimensionless system parameters in natural units.
///
/// Immutable after construction; safe to share across parallel workers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    scales: CgsScales,
    gamma: f64,
    lambda_tilde: f64,
    sigma01_sq: f64,
    sigma02_sq: f64,
    theta1: f64,
    theta2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamError {
    /// |λ| exceeds Mω₀²; the admissible range is −Mω₀² ≤ λ ≤ Mω₀².
    CouplingOutOfRange { lambda_tilde: f64 },
    NonPositive { name: &'static str, value: f64 },
    NonFinite { name: &'static str, value: f64 },
}

impl core::fmt::Display for ParamError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ParamError::CouplingOutOfRange { lambda_tilde } => write!(
                f,
                "coupling λ̃ = {lambda_tilde} outside the admissible range |λ| ≤ Mω₀² (|λ̃| ≤ 1)"
            ),
            ParamError::NonPositive { name, value } => {
                write!(f, "{name} must be positive, got {value}")
            }
            ParamError::NonFinite { name, value } => {
                write!(f, "{name} must be finite, got {value}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ParamError {}

fn check_finite(name: &'static str, value: f64) -> Result<(), ParamError> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(ParamError::NonFinite { name, value })
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<(), ParamError> {
    check_finite(name, value)?;
    if value > 0.0 {
        Ok(())
    } else {
        Err(ParamError::NonPositive { name, value })
    }
}

impl SystemParams {
    /// Build directly from dimensionless quantities.
    ///
    /// `sigma01_sq`/`sigma02_sq` are in internal length² units `ℏ/Mω₀`
    /// (natural dispersion = 0.5), `theta = k_B T/ℏω₀ ≥ 0`.
    pub fn new(
        scales: CgsScales,
        gamma: f64,
        lambda_tilde: f64,
        sigma01_sq: f64,
        sigma02_sq: f64,
        theta1: f64,
        theta2: f64,
    ) -> Result<Self, ParamError> {
        check_positive("mass_g", scales.mass_g)?;
        check_positive("omega0_radps", scales.omega0_radps)?;
        check_positive("gamma", gamma)?;
        check_positive("sigma01_sq", sigma01_sq)?;
        check_positive("sigma02_sq", sigma02_sq)?;
        check_finite("lambda_tilde", lambda_tilde)?;
        check_finite("theta1", theta1)?;
        check_finite("theta2", theta2)?;
        if theta1 < 0.0 {
            return Err(ParamError::NonPositive { name: "theta1", value: theta1 });
        }
        if theta2 < 0.0 {
            return Err(ParamError::NonPositive { name: "theta2", value: theta2 });
        }
        if math::abs(lambda_tilde) > 1.0 {
            return Err(ParamError::CouplingOutOfRange { lambda_tilde });
        }
        let p = Self { scales, gamma, lambda_tilde, sigma01_sq, sigma02_sq, theta1, theta2 };
        // derived a_i = 1/8σ² must come out finite and positive
        check_positive("a1", p.a1())?;
        check_positive("a2", p.a2())?;
        Ok(p)
    }

    /// Oscillator mass in natural units (identically 1).
    #[inline]
    pub fn mass(&self) -> f64 {
        1.0
    }

    /// Eigenfrequency in natural units (identically 1).
    #[inline]
    pub fn omega0(&self) -> f64 {
        1.0
    }

    /// Damping γ in units of ω₀.
    #[inline]
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Normalized coupling λ̃ = λ/Mω₀²; equals λ in natural units.
    #[inline]
    pub fn lambda_tilde(&self) -> f64 {
        self.lambda_tilde
    }

    /// Coupling λ in natural units.
    #[inline]
    pub fn lambda(&self) -> f64 {
        self.lambda_tilde
    }

    #[inline]
    pub fn sigma01_sq(&self) -> f64 {
        self.sigma01_sq
    }

    #[inline]
    pub fn sigma02_sq(&self) -> f64 {
        self.sigma02_sq
    }

    /// Bath temperatures θ = k_B T/ℏω₀.
    #[inline]
    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    #[inline]
    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    /// Initial-Gaussian width parameter a₁ = 1/8σ₀₁².
    #[inline]
    pub fn a1(&self) -> f64 {
        1.0 / (8.0 * self.sigma01_sq)
    }

    /// a₂ = 1/8σ₀₂².
    #[inline]
    pub fn a2(&self) -> f64 {
        1.0 / (8.0 * self.sigma02_sq)
    }

    #[inline]
    pub fn scales(&self) -> CgsScales {
        self.scales
    }

    /// Copy with a different coupling (used by λ-scans).
    pub fn with_lambda(&self, lambda_tilde: f64) -> Result<Self, ParamError> {
        Self::new(
            self.scales,
            self.gamma,
            lambda_tilde,
            self.sigma01_sq,
            self.sigma02_sq,
            self.theta1,
            self.theta2,
        )
    }

    /// Copy with different bath temperatures (used by temperature scans).
    pub fn with_thetas(&self, theta1: f64, theta2: f64) -> Result<Self, ParamError> {
        Self::new(
            self.scales,
            self.gamma,
            self.lambda_tilde,
            self.sigma01_sq,
            self.sigma02_sq,
            theta1,
            theta2,
        )
    }

    /// Copy with swapped oscillator/bath data: (θ₁,σ₀₁²) ↔ (θ₂,σ₀₂²).
    pub fn exchanged(&self) -> Self {
        Self {
            scales: self.scales,
            gamma: self.gamma,
            lambda_tilde: self.lambda_tilde,
            sigma01_sq: self.sigma02_sq,
            sigma02_sq: self.sigma01_sq,
            theta1: self.theta2,
            theta2: self.theta1,
        }
    }

    /// Map back to laboratory CGS values.
    pub fn to_cgs(&self) -> RawParams {
        let m = self.scales.mass_g;
        let w0 = self.scales.omega0_radps;
        let len2 = self.scales.length_sq_cm2();
        RawParams {
            mass_g: m,
            omega0_radps: w0,
            gamma_radps: self.gamma * w0,
            lambda_cgs: self.lambda_tilde * m * w0 * w0,
            t1_kelvin: self.theta1 * HBAR_CGS * w0 / KB_CGS,
            t2_kelvin: self.theta2 * HBAR_CGS * w0 / KB_CGS,
            sigma01_sq_cm2: self.sigma01_sq * len2,
            sigma02_sq_cm2: self.sigma02_sq * len2,
        }
    }
}

/// Convert laboratory CGS inputs to dimensionless [`SystemParams`].
pub fn to_natural_units(raw: &RawParams) -> Result<SystemParams, ParamError> {
    check_positive("mass_g", raw.mass_g)?;
    check_positive("omega0_radps", raw.omega0_radps)?;
    for (name, v) in [
        ("gamma_radps", raw.gamma_radps),
        ("lambda_cgs", raw.lambda_cgs),
        ("t1_kelvin", raw.t1_kelvin),
        ("t2_kelvin", raw.t2_kelvin),
        ("sigma01_sq_cm2", raw.sigma01_sq_cm2),
        ("sigma02_sq_cm2", raw.sigma02_sq_cm2),
    ] {
        check_finite(name, v)?;
    }
    let scales = CgsScales { mass_g: raw.mass_g, omega0_radps: raw.omega0_radps };
    let m_w0_sq = raw.mass_g * raw.omega0_radps * raw.omega0_radps;
    let lambda_tilde = raw.lambda_cgs / m_w0_sq;
    if math::abs(lambda_tilde) > 1.0 {
        return Err(ParamError::CouplingOutOfRange { lambda_tilde });
    }
    let len2 = scales.length_sq_cm2();
    let theta_of = |t_k: f64| KB_CGS * t_k / (HBAR_CGS * raw.omega0_radps);
    SystemParams::new(
        scales,
        raw.gamma_radps / raw.omega0_radps,
        lambda_tilde,
        raw.sigma01_sq_cm2 / len2,
        raw.sigma02_sq_cm2 / len2,
        theta_of(raw.t1_kelvin),
        theta_of(raw.t2_kelvin),
    )
}

/// The paper's reference oscillator: M = 10⁻²³ g, ω₀ = 10¹³ rad/s.
pub fn reference_scales() -> CgsScales {
    CgsScales { mass_g: 1e-23, omega0_radps: 1e13 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::rel_diff;

    fn raw_reference() -> RawParams {
        RawParams {
            mass_g: 1e-23,
            omega0_radps: 1e13,
            gamma_radps: 0.01e13,
            lambda_cgs: 0.1 * 1e-23 * 1e26,
            t1_kelvin: 300.0,
            t2_kelvin: 700.0,
            sigma01_sq_cm2: 0.5 * HBAR_CGS / (1e-23 * 1e13),
            sigma02_sq_cm2: 5.0 * HBAR_CGS / (1e-23 * 1e13),
        }
    }

    #[test]
    fn paper_damping_converts_to_natural() {
        // γ = 0.01 ω₀ → γ̃ = 0.01
        let p = to_natural_units(&raw_reference()).unwrap();
        assert!(rel_diff(p.gamma(), 0.01, 1e-300) < 1e-15);
        assert!(rel_diff(p.lambda_tilde(), 0.1, 1e-300) < 1e-15);
        assert!(rel_diff(p.sigma01_sq(), 0.5, 1e-300) < 1e-12);
        assert!(rel_diff(p.sigma02_sq(), 5.0, 1e-300) < 1e-12);
    }

    #[test]
    fn zero_temperature_maps_to_zero_theta() {
        let mut raw = raw_reference();
        raw.t1_kelvin = 0.0;
        let p = to_natural_units(&raw).unwrap();
        assert_eq!(p.theta1(), 0.0);
    }

    #[test]
    fn room_temperature_theta() {
        // θ = k_B·300K / ℏω₀ with the pinned constants:
        //   (1.3807e-16 · 300) / (1.0546e-27 · 1e13) = 3.92765…
        let p = to_natural_units(&raw_reference()).unwrap();
        assert!(rel_diff(p.theta1(), 3.92765, 1e-300) < 1e-5);
        assert!(rel_diff(p.theta2(), 9.16452, 1e-300) < 1e-5);
    }

    #[test]
    fn round_trip_reproduces_raw_to_12_digits() {
        let raw = raw_reference();
        let back = to_natural_units(&raw).unwrap().to_cgs();
        assert!(rel_diff(back.mass_g, raw.mass_g, 1e-300) < 1e-12);
        assert!(rel_diff(back.omega0_radps, raw.omega0_radps, 1e-300) < 1e-12);
        assert!(rel_diff(back.gamma_radps, raw.gamma_radps, 1e-300) < 1e-12);
        assert!(rel_diff(back.lambda_cgs, raw.lambda_cgs, 1e-300) < 1e-12);
        assert!(rel_diff(back.t1_kelvin, raw.t1_kelvin, 1e-300) < 1e-12);
        assert!(rel_diff(back.t2_kelvin, raw.t2_kelvin, 1e-300) < 1e-12);
        assert!(rel_diff(back.sigma01_sq_cm2, raw.sigma01_sq_cm2, 1e-300) < 1e-12);
        assert!(rel_diff(back.sigma02_sq_cm2, raw.sigma02_sq_cm2, 1e-300) < 1e-12);
    }

    #[test]
    fn a_times_sigma_is_exactly_one_eighth() {
        for sigma in [0.037, 0.5, 5.0, 123.0] {
            let p = SystemParams::new(reference_scales(), 0.01, 0.0, sigma, sigma, 1.0, 1.0)
                .unwrap();
            // a = 1/8σ² gives a·σ² = 1/8 exactly in IEEE arithmetic
            assert_eq!(p.a1() * p.sigma01_sq(), 0.125);
        }
    }

    #[test]
    fn coupling_bound_is_enforced() {
        let mut raw = raw_reference();
        raw.lambda_cgs = 1.2 * 1e-23 * 1e26;
        match to_natural_units(&raw) {
            Err(ParamError::CouplingOutOfRange { lambda_tilde }) => {
                assert!(rel_diff(lambda_tilde, 1.2, 1e-300) < 1e-12)
            }
            other => panic!("expected coupling error, got {other:?}"),
        }
        // λ̃ = 1 is the closed boundary and must be accepted
        raw.lambda_cgs = 1e-23 * 1e26;
        assert!(to_natural_units(&raw).is_ok());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(SystemParams::new(reference_scales(), 0.0, 0.0, 0.5, 0.5, 1.0, 1.0).is_err());
        assert!(SystemParams::new(reference_scales(), 0.01, 0.0, -0.5, 0.5, 1.0, 1.0).is_err());
        assert!(SystemParams::new(reference_scales(), 0.01, 0.0, 0.5, 0.5, -1.0, 1.0).is_err());
        assert!(SystemParams::new(reference_scales(), 0.01, f64::NAN, 0.5, 0.5, 1.0, 1.0).is_err());
    }
}
