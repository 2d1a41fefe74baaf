//! Deterministic time functions of the propagator: the `s` integrals,
//! the `b`/`b'` tables, the `n`/`m` boundary factors and the `D`/`Π`
//! action coefficients.
//!
//! Everything here is elementary trigonometry of the two mode
//! frequencies, but two numerical traps need care:
//!
//! * `s₇…s₁₄` are printed over the difference `Ω₁² − Ω₂²` and cancel
//!   catastrophically as λ → 0. They are evaluated here in an exactly
//!   equivalent sum/difference-angle form whose only limit is a `sinc`,
//!   so the degenerate point Ω₁ = Ω₂ is regular.
//! * `n₁,₂ = e^{γt}/2sin(Ω₁,₂t)` grows exponentially. The tables store
//!   the bounded part `n̂ = 1/2sin(Ωt)` and the factor `e^{γt}` stays
//!   symbolic until it cancels downstream; quantities carrying one power
//!   of it are suffixed `_hat`.

use crate::math::{self, abs, sin_cos, sinc};
use crate::modes::{ModeStructure, EPS_SING};
use crate::units::SystemParams;

#[derive(Debug, Clone, PartialEq)]
pub enum KinematicsError {
    /// t within the singular set {kπ/Ω₁, kπ/Ω₂} where n and m diverge.
    SingularTime { mode: u8, t: f64, sin_value: f64 },
}

impl core::fmt::Display for KinematicsError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            KinematicsError::SingularTime { mode, t, sin_value } => write!(
                f,
                "singular time t = {t}: |sin(Ω{mode}t)| = {sin_value:e} below the guard"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for KinematicsError {}

/// The fourteen s-integrals. `s11..s14` repeat `s7..s10` per their
/// definitions; both names are kept so the tables read like the source
/// relations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SFunctions {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub s4: f64,
    pub s5: f64,
    pub s6: f64,
    pub s7: f64,
    pub s8: f64,
    pub s9: f64,
    pub s10: f64,
}

impl SFunctions {
    #[inline]
    pub fn s11(&self) -> f64 {
        self.s7
    }
    #[inline]
    pub fn s12(&self) -> f64 {
        self.s9
    }
    #[inline]
    pub fn s13(&self) -> f64 {
        self.s8
    }
    #[inline]
    pub fn s14(&self) -> f64 {
        self.s10
    }
}

/// Evaluate s₁…s₁₄ at time t for mode frequencies Ω₁, Ω₂.
///
/// The cross-mode functions are computed from the identities
///
/// ```text
/// s₇  = sin(St)/2S + sin(Δt)/2Δ               S = Ω₁+Ω₂
/// s₈  = (1−cos St)/2S − (t²Δ/4)·sinc²(Δt/2)   Δ = Ω₁−Ω₂
/// s₉  = (1−cos St)/2S + (t²Δ/4)·sinc²(Δt/2)
/// s₁₀ = sin(Δt)/2Δ − sin(St)/2S
/// ```
///
/// which are algebraically identical to the 1/(Ω₁²−Ω₂²) forms but stay
/// fully conditioned through Ω₁ → Ω₂ (the 1/Δ pieces are sincs).
pub fn s_functions(t: f64, omega1: f64, omega2: f64) -> SFunctions {
    let (sn1, cs1) = sin_cos(omega1 * t);
    let (sn2, cs2) = sin_cos(omega2 * t);

    // s₁…s₆: single-mode integrals, t/2 ± sin(2Ωt)/4Ω and sin²(Ωt)/2Ω
    let s1 = t / 2.0 + sn1 * cs1 / (2.0 * omega1);
    let s2 = t / 2.0 - sn1 * cs1 / (2.0 * omega1);
    let s3 = t / 2.0 + sn2 * cs2 / (2.0 * omega2);
    let s4 = t / 2.0 - sn2 * cs2 / (2.0 * omega2);
    let s5 = sn1 * sn1 / (2.0 * omega1);
    let s6 = sn2 * sn2 / (2.0 * omega2);

    let big_s = omega1 + omega2;
    let delta = omega1 - omega2;
    let (sn_s, cs_s) = sin_cos(big_s * t);
    let sin_delta_over = 0.5 * t * sinc(delta * t);
    let half_sinc = sinc(0.5 * delta * t);
    let half_sinc_sq = 0.25 * t * t * delta * half_sinc * half_sinc;

    let s7 = sn_s / (2.0 * big_s) + sin_delta_over;
    let s8 = (1.0 - cs_s) / (2.0 * big_s) - half_sinc_sq;
    let s9 = (1.0 - cs_s) / (2.0 * big_s) + half_sinc_sq;
    let s10 = sin_delta_over - sn_s / (2.0 * big_s);

    SFunctions { s1, s2, s3, s4, s5, s6, s7, s8, s9, s10 }
}

/// Direct transcription of the 1/(Ω₁²−Ω₂²) forms of s₇…s₁₀.
/// Ill-conditioned near Ω₁ = Ω₂; kept as the comparison target for the
/// stable forms above.
pub fn s_cross_direct(t: f64, omega1: f64, omega2: f64) -> (f64, f64, f64, f64) {
    let (sn1, cs1) = sin_cos(omega1 * t);
    let (sn2, cs2) = sin_cos(omega2 * t);
    let den = omega1 * omega1 - omega2 * omega2;
    let s7 = (omega1 * cs2 * sn1 - omega2 * cs1 * sn2) / den;
    let s8 = (-omega2 + omega2 * cs2 * cs1 + omega1 * sn1 * sn2) / den;
    let s9 = (omega1 - omega1 * cs2 * cs1 - omega2 * sn1 * sn2) / den;
    let s10 = (omega2 * cs2 * sn1 - omega1 * cs1 * sn2) / den;
    (s7, s8, s9, s10)
}

/// The b and b′ tables. `b[0]` is b₁, …, `b[15]` is b₁₆.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BTables {
    pub b: [f64; 16],
    pub bp: [f64; 16],
}

/// Linear combinations of the s-values, exactly as tabulated.
pub fn b_tables(s: &SFunctions, omega1: f64, omega2: f64, gamma: f64, omega0: f64) -> BTables {
    let w = omega0 * omega0 - gamma * gamma;
    let o1 = omega1;
    let o2 = omega2;
    let oo = omega1 * omega2;
    let (s1, s2, s3, s4, s5, s6) = (s.s1, s.s2, s.s3, s.s4, s.s5, s.s6);
    let (s7, s8, s9, s10) = (s.s7, s.s8, s.s9, s.s10);
    let (s11, s12, s13, s14) = (s.s11(), s.s12(), s.s13(), s.s14());

    let b1 = o1 * o1 * s1 - w * s2 - 2.0 * o1 * gamma * s5;
    let b2 = -o1 * o1 * s5 - w * s5 - o1 * gamma * (s1 - s2);
    let b3 = -o1 * o1 * s5 - w * s5 - o1 * gamma * (s1 - s2);
    let b4 = o1 * o1 * s2 - w * s1 + 2.0 * o1 * gamma * s5;
    let b5 = -oo * s7 + w * s10 + o1 * gamma * s8 + o2 * gamma * s9;
    let b6 = oo * s8 + w * s9 + o1 * gamma * s7 - o2 * gamma * s10;
    let b7 = oo * s9 + w * s8 - o1 * gamma * s10 + o2 * gamma * s7;
    let b8 = -oo * s10 + w * s7 - o1 * gamma * s9 - o2 * gamma * s8;
    let b9 = -oo * s11 + w * s14 + o2 * gamma * s12 + o1 * gamma * s13;
    let b10 = oo * s12 + w * s13 + o2 * gamma * s11 - o1 * gamma * s14;
    let b11 = oo * s13 + w * s12 - o2 * gamma * s14 + o1 * gamma * s11;
    let b12 = -oo * s14 + w * s11 - o2 * gamma * s13 - o1 * gamma * s12;
    let b13 = o2 * o2 * s3 - w * s4 - 2.0 * o2 * gamma * s6;
    let b14 = -o2 * o2 * s6 - w * s6 + o2 * gamma * (s4 - s3);
    let b15 = -o2 * o2 * s6 - w * s6 + o2 * gamma * (s4 - s3);
    let b16 = o2 * o2 * s4 - w * s3 + 2.0 * o2 * gamma * s6;

    let bp1 = o2 * o2 * s3 - w * s4 - 2.0 * o2 * gamma * s6;
    let bp2 = -o2 * o2 * s6 - w * s6 - o2 * gamma * (s3 - s4);
    let bp3 = -o2 * o2 * s6 - w * s6 - o2 * gamma * (s3 - s4);
    let bp4 = o2 * o2 * s4 - w * s3 + 2.0 * o2 * gamma * s6;
    let bp5 = oo * s7 - w * s10 - o1 * gamma * s8 - o2 * gamma * s9;
    let bp6 = -oo * s8 - w * s9 - o1 * gamma * s7 + o2 * gamma * s10;
    let bp7 = oo * s10 - w * s7 + o1 * gamma * s9 + o2 * gamma * s8;
    let bp8 = -oo * s9 - w * s8 + o1 * gamma * s10 - o2 * gamma * s7;
    let bp9 = oo * s11 - w * s14 - o2 * gamma * s12 - o1 * gamma * s13;
    let bp10 = -oo * s12 - w * s13 - o2 * gamma * s11 + o1 * gamma * s14;
    let bp11 = -oo * s13 - w * s12 + o2 * gamma * s14 - o1 * gamma * s11;
    let bp12 = oo * s14 - w * s11 + o2 * gamma * s13 + o1 * gamma * s12;
    let bp13 = o1 * o1 * s1 - w * s2 - 2.0 * o1 * gamma * s5;
    let bp14 = -o1 * o1 * s5 - w * s5 + o1 * gamma * (s2 - s1);
    let bp15 = -o1 * o1 * s5 - w * s5 + o1 * gamma * (s2 - s1);
    let bp16 = o1 * o1 * s2 - w * s1 + 2.0 * o1 * gamma * s5;

    BTables {
        b: [b1, b2, b3, b4, b5, b6, b7, b8, b9, b10, b11, b12, b13, b14, b15, b16],
        bp: [
            bp1, bp2, bp3, bp4, bp5, bp6, bp7, bp8, bp9, bp10, bp11, bp12, bp13, bp14, bp15, bp16,
        ],
    }
}

/// The D-combinations and Π-functions entering the Gaussian
/// coefficients. Quantities carrying one factor of `e^{γt}` are stored
/// with that factor removed (`_hat`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DPiSet {
    /// e^{−γt}·D₃ = e^{−γt}·D′₃.
    pub d3_hat: f64,
    /// D₄ = D′₄ (no exponential factor).
    pub d4: f64,
    /// e^{−γt}·(D₉+D′₉) = e^{−γt}·(D₁₀+D′₁₀).
    pub d9_sum_hat: f64,
    /// D₁₁+D′₁₁ = D₁₂+D′₁₂.
    pub d11_sum: f64,
    /// e^{−γt}·Π₅ = e^{−γt}·Π₈.
    pub pi5_hat: f64,
    /// e^{−γt}·Π₆ = e^{−γt}·Π₇.
    pub pi6_hat: f64,
    /// Π₁₃ = Π₁₆.
    pub pi13: f64,
    /// Π₁₄ = Π₁₅.
    pub pi14: f64,
}

/// Assemble the D-combinations and Π-functions from the b tables.
///
/// `half_csc1,2` are n̂₁,₂ = 1/2sin(Ω₁,₂t); the caller guarantees they
/// are finite (singular times are rejected upstream).
#[allow(clippy::too_many_arguments)]
pub fn d_pi_functions(
    bt: &BTables,
    s: &SFunctions,
    m1: f64,
    m2: f64,
    half_csc1: f64,
    half_csc2: f64,
    lambda: f64,
    mass: f64,
) -> DPiSet {
    let b = &bt.b;
    let bp = &bt.bp;
    let n1 = half_csc1;
    let n2 = half_csc2;
    let half_m = mass / 2.0;

    // row sums pairing each table entry with its mirror image
    let r1a = b[0] + bp[12]; // b₁ + b′₁₃
    let r1b = b[2] + bp[14]; // b₃ + b′₁₅
    let r1c = b[1] + bp[13]; // b₂ + b′₁₄
    let r1d = b[3] + bp[15]; // b₄ + b′₁₆
    let r2a = b[12] + bp[0]; // b₁₃ + b′₁
    let r2b = b[14] + bp[2]; // b₁₅ + b′₃
    let r2c = b[13] + bp[1]; // b₁₄ + b′₂
    let r2d = b[15] + bp[3]; // b₁₆ + b′₄

    let d3_hat = half_m * (-m1 * n1 * r1a + n1 * r1b / 2.0 - m2 * n2 * r2a + n2 * r2b / 2.0);
    let mode1_quad = m1 * m1 * r1a - m1 * r1b / 2.0 - m1 * r1c / 2.0 + r1d / 4.0;
    let mode2_quad = m2 * m2 * r2a - m2 * r2b / 2.0 - m2 * r2c / 2.0 + r2d / 4.0;
    let d4 = half_m * (mode1_quad + mode2_quad);
    let d9_sum_hat = half_m * (-m1 * n1 * r1a + n1 * r1b / 2.0 + m2 * n2 * r2a - n2 * r2b / 2.0);
    // The m₂² argument of this difference is the mode-2 row pair
    // (b₁₃+b′₁); with the mode-1 pair in its place the t-linear pieces
    // fail to cancel against Π₁₄ and the coefficient grows without
    // bound.
    let d11_sum = half_m * (mode1_quad - mode2_quad);

    let pi5_hat = lambda * (-n1 * m1 * s.s2 + n1 * s.s5 / 2.0 + n2 * m2 * s.s4 - n2 * s.s6 / 2.0);
    let pi6_hat = lambda * (-n1 * m1 * s.s2 + n1 * s.s5 / 2.0 - n2 * m2 * s.s4 + n2 * s.s6 / 2.0);
    let pi13 = lambda
        * (m1 * m1 * s.s2 - m1 * s.s5 + s.s1 / 4.0 - m2 * m2 * s.s4 + m2 * s.s6 - s.s3 / 4.0);
    let pi14 = lambda
        * (m1 * m1 * s.s2 - m1 * s.s5 + s.s1 / 4.0 + m2 * m2 * s.s4 - m2 * s.s6 + s.s3 / 4.0);

    DPiSet { d3_hat, d4, d9_sum_hat, d11_sum, pi5_hat, pi6_hat, pi13, pi14 }
}

/// Every deterministic time function at one time point.
#[derive(Debug, Clone, PartialEq)]
pub struct KinematicSet {
    pub t: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub mass: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub s: SFunctions,
    pub tables: BTables,
    /// m₁,₂ = cot(Ω₁,₂t)/2.
    pub m1: f64,
    pub m2: f64,
    /// n̂₁,₂ = 1/2sin(Ω₁,₂t); n = e^{γt}·n̂, n̄ = e^{−γt}·n̂.
    pub half_csc1: f64,
    pub half_csc2: f64,
    /// e^{−γt} and e^{−2γt}.
    pub u: f64,
    pub u2: f64,
    pub dpi: DPiSet,
}

impl KinematicSet {
    /// Evaluate all tables at time t > 0 (off the singular set).
    pub fn evaluate(
        t: f64,
        params: &SystemParams,
        modes: &ModeStructure,
    ) -> Result<Self, KinematicsError> {
        let (sn1, cs1) = sin_cos(modes.omega1 * t);
        let (sn2, cs2) = sin_cos(modes.omega2 * t);
        if abs(sn1) < EPS_SING {
            return Err(KinematicsError::SingularTime { mode: 1, t, sin_value: sn1 });
        }
        if abs(sn2) < EPS_SING {
            return Err(KinematicsError::SingularTime { mode: 2, t, sin_value: sn2 });
        }
        let s = s_functions(t, modes.omega1, modes.omega2);
        let tables = b_tables(&s, modes.omega1, modes.omega2, params.gamma(), params.omega0());
        let m1 = cs1 / (2.0 * sn1);
        let m2 = cs2 / (2.0 * sn2);
        let half_csc1 = 1.0 / (2.0 * sn1);
        let half_csc2 = 1.0 / (2.0 * sn2);
        let dpi = d_pi_functions(
            &tables,
            &s,
            m1,
            m2,
            half_csc1,
            half_csc2,
            params.lambda(),
            params.mass(),
        );
        let u = math::exp(-params.gamma() * t);
        Ok(Self {
            t,
            gamma: params.gamma(),
            lambda: params.lambda(),
            mass: params.mass(),
            omega1: modes.omega1,
            omega2: modes.omega2,
            s,
            tables,
            m1,
            m2,
            half_csc1,
            half_csc2,
            u,
            u2: u * u,
            dpi,
        })
    }

    /// n₁ = e^{γt}/2sin(Ω₁t). Overflows for γt ≳ 709; the assembly path
    /// uses the hatted fields instead.
    pub fn n1(&self) -> f64 {
        self.half_csc1 / self.u
    }

    pub fn n2(&self) -> f64 {
        self.half_csc2 / self.u
    }

    /// n̄₁ = e^{−γt}/2sin(Ω₁t).
    pub fn nbar1(&self) -> f64 {
        self.half_csc1 * self.u
    }

    pub fn nbar2(&self) -> f64 {
        self.half_csc2 * self.u
    }

    /// (D₃ + Π₅)·e^{−γt} = (D′₃ + Π₈)·e^{−γt}: the diagonal X_f–ξ_i
    /// action coefficient, scaled.
    #[inline]
    pub fn fd_hat(&self) -> f64 {
        self.dpi.d3_hat + self.dpi.pi5_hat
    }

    /// (D₉+D′₉+Π₆)·e^{−γt} = (D₁₀+D′₁₀+Π₇)·e^{−γt}: the cross X_f–ξ_i
    /// coefficient, scaled.
    #[inline]
    pub fn fx_hat(&self) -> f64 {
        self.dpi.d9_sum_hat + self.dpi.pi6_hat
    }

    /// D₄ + Π₁₃ = D′₄ + Π₁₆: the diagonal X_i–ξ_i coefficient.
    #[inline]
    pub fn gd(&self) -> f64 {
        self.dpi.d4 + self.dpi.pi13
    }

    /// D₁₁+D′₁₁+Π₁₄ = D₁₂+D′₁₂+Π₁₅: the cross X_i–ξ_i coefficient.
    #[inline]
    pub fn gx(&self) -> f64 {
        self.dpi.d11_sum + self.dpi.pi14
    }
}
