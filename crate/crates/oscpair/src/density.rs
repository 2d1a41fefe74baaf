//! Assembly of the Gaussian density-matrix coefficients and the physical
//! second moments, plus the independent single-oscillator closed form
//! for the uncoupled limit.
//!
//! The cascade e → Z → Y → β is evaluated exactly as the source
//! relations read, with one bookkeeping twist: every intermediate is
//! graded by its power of `W = e^{γt}` (C, E ~ W²; D₃-type and Z₂, Z₃ ~
//! W¹; D₄-type, e₃, Z₆, Y₁ ~ W⁰; e₅, e₆, Y₄, Y₅ ~ W⁻¹; e₄ ~ W⁻²) and
//! only the W-free mantissas are stored. All W powers cancel identically
//! in β₁₁, β₂₂, β₁₂; what remains are explicit factors of `e^{−2γt}`
//! multiplying the sub-leading terms, so nothing overflows at any
//! horizon. Y₄ and Y₅ are purely imaginary and are carried as their
//! imaginary parts with the i² = −1 signs folded into the β formulas; a
//! complex-arithmetic reference path lives in the tests.
//!
//! ℏ is kept symbolic (= 1) so each line can be audited against the
//! printed relations.

use crate::bath::BathKernels;
use crate::kinematics::KinematicSet;
use crate::math::{self, abs};

const HBAR: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub enum DensityError {
    /// Z₁ ≤ 0 or Y₁ ≤ 0: the Gaussian integrals lose normalizability,
    /// which signals a kernel-sign or singular-time fault upstream.
    NonNormalizable { z1_hat: f64, y1: f64 },
    /// β matrix not positive definite; flagged, not silently returned.
    DegenerateGaussian { beta11: f64, beta22: f64, beta12: f64 },
}

impl core::fmt::Display for DensityError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DensityError::NonNormalizable { z1_hat, y1 } => {
                write!(f, "non-normalizable state: Ẑ₁ = {z1_hat}, Y₁ = {y1}")
            }
            DensityError::DegenerateGaussian { beta11, beta22, beta12 } => write!(
                f,
                "degenerate Gaussian: β₁₁ = {beta11}, β₂₂ = {beta22}, β₁₂ = {beta12}"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DensityError {}

/// The e/Z/Y intermediates, stored as W-free mantissas (see module
/// docs for the grading). `y4_im_hat`/`y5_im_hat` are the imaginary
/// parts of Y₄/Y₅ scaled by W.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intermediates {
    pub e3: f64,
    pub e4_hat: f64,
    pub e5_hat: f64,
    pub e6_hat: f64,
    pub z1_hat: f64,
    pub z2_hat: f64,
    pub z3_hat: f64,
    pub z6: f64,
    pub y1: f64,
    pub y4_im_hat: f64,
    pub y5_im_hat: f64,
    /// Shared denominators: P̂ = Ĉ₂ + u²ℏa₂, Q̂ = 4ℏa₂P̂ + u²(D′₄+Π₁₆)²,
    /// Â₂ = Ĉ₂/ℏ + u²a₂.
    pub p_hat: f64,
    pub q_hat: f64,
    pub a2_hat: f64,
    /// Kinematic action coefficients carried along for the β assembly.
    pub fd_hat: f64,
    pub fx_hat: f64,
    pub gd: f64,
    pub gx: f64,
    pub u: f64,
    pub u2: f64,
}

/// Evaluate the e/Z/Y cascade from the kinematic tables and bath
/// kernels. `a1`, `a2` are the initial-Gaussian width parameters.
pub fn intermediates(
    kin: &KinematicSet,
    bk: &BathKernels,
    a1: f64,
    a2: f64,
) -> Result<Intermediates, DensityError> {
    let u = kin.u;
    let u2 = kin.u2;
    let fd = kin.fd_hat();
    let fx = kin.fx_hat();
    let gd = kin.gd();
    let gx = kin.gx();
    let c1 = bk.c1_hat;
    let c2 = bk.c2_hat;
    let e1 = bk.e1_hat;

    // common denominators, computed once
    let p_hat = c2 + u2 * HBAR * a2;
    let q_hat = 4.0 * HBAR * a2 * p_hat + u2 * gd * gd;
    let a2_hat = c2 / HBAR + u2 * a2;

    let e3 = gx - e1 * gd / (2.0 * p_hat);
    let e4_hat = gx * gd / (2.0 * p_hat);
    let e5_hat = fd * gd / (2.0 * p_hat);
    let e6_hat = fx * gd / (2.0 * p_hat);

    let z1_hat = c1 / HBAR - e1 * e1 / (4.0 * HBAR * p_hat)
        + u2 * (a1 + e3 * e3 * a2_hat / q_hat);
    if !(z1_hat > 0.0) {
        return Err(DensityError::NonNormalizable { z1_hat, y1: f64::NAN });
    }
    let z2_hat = fd - e1 * fx / (2.0 * p_hat) - u2 * 2.0 * e3 * e6_hat * p_hat / q_hat;
    let z3_hat = fx - e1 * fd / (2.0 * p_hat) - u2 * 2.0 * e3 * e5_hat * p_hat / q_hat;
    let z6 = gd - e1 * gx / (2.0 * p_hat) - u2 * 2.0 * e3 * e4_hat * p_hat / q_hat;

    let y1 = a1
        + u2 * (gx * gx / (4.0 * HBAR * p_hat) + z6 * z6 / (4.0 * HBAR * HBAR * z1_hat)
            - u2 * e4_hat * e4_hat * a2_hat / q_hat);
    if !(y1 > 0.0) {
        return Err(DensityError::NonNormalizable { z1_hat, y1 });
    }
    let y4_im_hat = fd * gx / (2.0 * p_hat) - u2 * 2.0 * e4_hat * e5_hat * p_hat / q_hat
        + z3_hat * z6 / (2.0 * HBAR * z1_hat);
    let y5_im_hat = fx * gx / (2.0 * p_hat) - u2 * 2.0 * e4_hat * e6_hat * p_hat / q_hat
        + z2_hat * z6 / (2.0 * HBAR * z1_hat);

    Ok(Intermediates {
        e3,
        e4_hat,
        e5_hat,
        e6_hat,
        z1_hat,
        z2_hat,
        z3_hat,
        z6,
        y1,
        y4_im_hat,
        y5_im_hat,
        p_hat,
        q_hat,
        a2_hat,
        fd_hat: fd,
        fx_hat: fx,
        gd,
        gx,
        u,
        u2,
    })
}

/// The Gaussian coefficients β₁₁, β₂₂, β₁₂.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaCoefficients {
    pub beta11: f64,
    pub beta22: f64,
    pub beta12: f64,
}

/// Assemble β₁₁, β₂₂, β₁₂. The Y-terms enter through their imaginary
/// parts with i² = −1 folded in (Y₅²/ℏ²Y₁ = −ŷ₅²/ℏ²Y₁), and every W
/// power cancels, leaving e^{−2γt} on the sub-leading groups.
pub fn beta_coefficients(
    im: &Intermediates,
    _kin: &KinematicSet,
    _bk: &BathKernels,
) -> BetaCoefficients {
    let u2 = im.u2;
    let h2 = HBAR * HBAR;
    let beta11 = 2.0
        * (im.fx_hat * im.fx_hat / (HBAR * im.p_hat) + im.z2_hat * im.z2_hat / (h2 * im.z1_hat)
            - u2 * (4.0 * im.e6_hat * im.e6_hat * im.a2_hat / im.q_hat
                + im.y5_im_hat * im.y5_im_hat / (h2 * im.y1)));
    let beta22 = 2.0
        * (im.fd_hat * im.fd_hat / (HBAR * im.p_hat) + im.z3_hat * im.z3_hat / (h2 * im.z1_hat)
            - u2 * (4.0 * im.e5_hat * im.e5_hat * im.a2_hat / im.q_hat
                + im.y4_im_hat * im.y4_im_hat / (h2 * im.y1)));
    let beta12 = 2.0 * im.fd_hat * im.fx_hat / (HBAR * im.p_hat)
        + 2.0 * im.z2_hat * im.z3_hat / (h2 * im.z1_hat)
        - u2 * (8.0 * im.e5_hat * im.e6_hat * im.a2_hat / im.q_hat
            + 2.0 * im.y4_im_hat * im.y5_im_hat / (h2 * im.y1));
    BetaCoefficients { beta11, beta22, beta12 }
}

/// Physical second moments at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState {
    pub t: f64,
    pub beta11: f64,
    pub beta22: f64,
    pub beta12: f64,
    /// ⟨x₁²⟩ and ⟨x₂²⟩, internal length² units (ℏ/Mω₀).
    pub sigma1_sq: f64,
    pub sigma2_sq: f64,
    /// ⟨x₁x₂⟩.
    pub cov: f64,
}

/// Moments normalized to the equilibrium baselines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedMoments {
    pub sigma1: f64,
    pub sigma2: f64,
    pub cov: f64,
}

impl MomentState {
    /// σ̃ᵢ² = σᵢ²/σᵢ²(FDT), covariance scaled by √(σ₁²σ₂²)(FDT).
    pub fn normalized(&self, fdt1: f64, fdt2: f64) -> NormalizedMoments {
        NormalizedMoments {
            sigma1: self.sigma1_sq / fdt1,
            sigma2: self.sigma2_sq / fdt2,
            cov: self.cov / math::sqrt(fdt1 * fdt2),
        }
    }

    /// |cov| < √(σ₁²σ₂²) with margin; true for every non-degenerate state.
    pub fn is_positive_definite(&self) -> bool {
        self.cov * self.cov < self.sigma1_sq * self.sigma2_sq
    }
}

/// Invert the β quadratic form into variances and covariance.
pub fn moments(t: f64, beta: &BetaCoefficients) -> Result<MomentState, DensityError> {
    let det = beta.beta11 * beta.beta22 - beta.beta12 * beta.beta12;
    if !(beta.beta11 > 0.0 && beta.beta22 > 0.0 && det > 0.0) {
        return Err(DensityError::DegenerateGaussian {
            beta11: beta.beta11,
            beta22: beta.beta22,
            beta12: beta.beta12,
        });
    }
    Ok(MomentState {
        t,
        beta11: beta.beta11,
        beta22: beta.beta22,
        beta12: beta.beta12,
        sigma1_sq: beta.beta22 / det,
        sigma2_sq: beta.beta11 / det,
        cov: beta.beta12 / det,
    })
}

/// Independent closed-form path for the uncoupled (λ = 0) variance of a
/// single damped oscillator against its own bath:
///
///   σ²(t) = [D₄² + 4ℏa(C + ℏa)] / [8a D₃²]
///
/// with D₃, D₄ the single-mode action coefficients assembled from the
/// full b/b′ tables at Ω₁ = Ω₂ = √(ω₀²−γ²) and C the same influence
/// integral the coupled pipeline uses. Written with the determinant
/// factored so no near-1 cancellation appears at late times.
pub fn uncoupled_variance(
    t: f64,
    theta: f64,
    a: f64,
    gamma: f64,
    spec: &crate::bath::QuadratureSpec,
) -> Result<f64, crate::PipelineError> {
    use crate::PipelineError;
    let scales = crate::units::CgsScales { mass_g: 1e-23, omega0_radps: 1e13 };
    let sigma = 1.0 / (8.0 * a);
    let params = crate::units::SystemParams::new(scales, gamma, 0.0, sigma, sigma, theta, theta)
        .map_err(|_| {
            PipelineError::Density(DensityError::NonNormalizable { z1_hat: a, y1: a })
        })?;
    let modes = crate::modes::mode_structure(&params).map_err(PipelineError::Modes)?;
    let bk = crate::bath::bath_integrals(t, &params, &modes, spec).map_err(PipelineError::Bath)?;
    uncoupled_variance_with_kernel(t, a, gamma, &params, &modes, bk.c1_hat)
        .map_err(PipelineError::Kinematics)
}

/// Closed-form path with a precomputed scaled kernel value Ĉ = e^{−2γt}C.
pub fn uncoupled_variance_with_kernel(
    t: f64,
    a: f64,
    _gamma: f64,
    params: &crate::units::SystemParams,
    modes: &crate::modes::ModeStructure,
    c_hat: f64,
) -> Result<f64, crate::kinematics::KinematicsError> {
    use crate::kinematics as kn;
    let omega = modes.omega1; // = omega2 at λ = 0
    let (sn, cs) = math::sin_cos(omega * t);
    if abs(sn) < crate::modes::EPS_SING {
        return Err(kn::KinematicsError::SingularTime { mode: 1, t, sin_value: sn });
    }
    let s = kn::s_functions(t, omega, omega);
    let bt = kn::b_tables(&s, omega, omega, params.gamma(), params.omega0());
    let b = &bt.b;
    let bp = &bt.bp;
    let n_hat = 1.0 / (2.0 * sn);
    let m = cs / (2.0 * sn);
    let mass = params.mass();

    // single-mode reduction of the action coefficients over the merged
    // tables: D₃ = (M/2)[−mn Σa + n Σb/2], D₄ = (M/2)[m²Σa − mΣc/2 + Σd/4]
    let sum_a = b[0] + b[12] + bp[0] + bp[12];
    let sum_b = b[2] + b[14] + bp[2] + bp[14];
    let sum_c = b[1] + b[2] + b[13] + b[14] + bp[1] + bp[2] + bp[13] + bp[14];
    let sum_d = b[3] + b[15] + bp[3] + bp[15];
    let d3_hat = (mass / 2.0) * (-m * n_hat * sum_a + n_hat * sum_b / 2.0);
    let d4 = (mass / 2.0) * (m * m * sum_a - m * sum_c / 2.0 + sum_d / 4.0);

    let u2 = math::exp(-2.0 * params.gamma() * t);
    let numer = u2 * d4 * d4 + 4.0 * HBAR * a * (c_hat + u2 * HBAR * a);
    Ok(numer / (8.0 * a * d3_hat * d3_hat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{bath_integrals, QuadratureSpec};
    use crate::kinematics::KinematicSet;
    use crate::math::{rel_diff, Complex64};
    use crate::modes::mode_structure;
    use crate::units::{reference_scales, SystemParams};

    fn params(lambda: f64, theta1: f64, theta2: f64, s1: f64, s2: f64) -> SystemParams {
        SystemParams::new(reference_scales(), 0.01, lambda, s1, s2, theta1, theta2).unwrap()
    }

    fn pipeline_at(p: &SystemParams, t: f64) -> (KinematicSet, BathKernels, Intermediates) {
        let m = mode_structure(p).unwrap();
        let kin = KinematicSet::evaluate(t, p, &m).unwrap();
        let bk = bath_integrals(t, p, &m, &QuadratureSpec::default()).unwrap();
        let im = intermediates(&kin, &bk, p.a1(), p.a2()).unwrap();
        (kin, bk, im)
    }

    #[test]
    fn moments_identity_case() {
        let beta = BetaCoefficients { beta11: 1.0, beta22: 1.0, beta12: 0.0 };
        let m = moments(0.0, &beta).unwrap();
        assert_eq!((m.sigma1_sq, m.sigma2_sq, m.cov), (1.0, 1.0, 0.0));
    }

    #[test]
    fn moments_two_by_two_inverse() {
        let beta = BetaCoefficients { beta11: 2.0, beta22: 2.0, beta12: 1.0 };
        let m = moments(0.0, &beta).unwrap();
        assert!(rel_diff(m.sigma1_sq, 2.0 / 3.0, 1e-15) < 1e-14);
        assert!(rel_diff(m.sigma2_sq, 2.0 / 3.0, 1e-15) < 1e-14);
        assert!(rel_diff(m.cov, 1.0 / 3.0, 1e-15) < 1e-14);
        assert!(m.is_positive_definite());
    }

    #[test]
    fn moments_rejects_degenerate_beta() {
        let beta = BetaCoefficients { beta11: 1.0, beta22: 1.0, beta12: 1.0 };
        assert!(matches!(moments(0.0, &beta), Err(DensityError::DegenerateGaussian { .. })));
        let beta = BetaCoefficients { beta11: -1.0, beta22: 1.0, beta12: 0.0 };
        assert!(moments(0.0, &beta).is_err());
    }

    #[test]
    fn zero_coupling_collapses_the_cascade() {
        // e₃ = e₄ = e₆ = 0, Z₃ = 0, Y₄ = 0, Z₂ = D₃, Z₆ = D₄,
        // e₅ = D′₃D′₄/2(C₂+ℏa₂), Z₁ = C₁/ℏ + a₁, Y₅ = iZ₂Z₆/2ℏZ₁
        let p = params(0.0, 2.0, 7.0, 0.5, 0.5);
        let t = 6.1;
        let (kin, bk, im) = pipeline_at(&p, t);
        let scale = abs(im.z2_hat) + 1.0;
        assert!(abs(im.e3) < 1e-10 * scale);
        assert!(abs(im.e4_hat) < 1e-10 * scale);
        assert!(abs(im.e6_hat) < 1e-10 * scale);
        assert!(abs(im.z3_hat) < 1e-10 * scale);
        assert!(abs(im.y4_im_hat) < 1e-10 * scale);
        assert!(rel_diff(im.z2_hat, kin.fd_hat(), 1e-12) < 1e-10);
        assert!(rel_diff(im.z6, kin.gd(), 1e-12) < 1e-10);
        let e5_expect = kin.fd_hat() * kin.gd() / (2.0 * im.p_hat);
        assert!(rel_diff(im.e5_hat, e5_expect, 1e-12) < 1e-10);
        let z1_expect = bk.c1_hat / HBAR + kin.u2 * p.a1();
        assert!(rel_diff(im.z1_hat, z1_expect, 1e-12) < 1e-10);
        let y5_expect = im.z2_hat * im.z6 / (2.0 * HBAR * im.z1_hat);
        assert!(rel_diff(im.y5_im_hat, y5_expect, 1e-12) < 1e-10);
    }

    #[test]
    fn small_time_z1_approaches_a1() {
        let p = params(0.3, 2.0, 5.0, 0.5, 0.5);
        let t = 1e-3;
        let (_, _, im) = pipeline_at(&p, t);
        // Z₁ (unhatted) = Ẑ₁/u² → a₁ + O(t)
        let z1 = im.z1_hat / im.u2;
        assert!(abs(z1 - p.a1()) < 5e-3, "Z₁ = {z1} vs a₁ = {}", p.a1());
    }

    #[test]
    fn complex_reference_path_matches_folded_signs() {
        // Evaluate (B-style) Y₄, Y₅ and the β's in raw complex
        // arithmetic from the unscaled printed formulas and compare
        // against the graded real-arithmetic production path.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for trial in 0..20 {
            let lam = rng.gen_range(-0.85..0.85);
            let th1 = rng.gen_range(0.0..8.0);
            let th2 = rng.gen_range(0.0..8.0);
            let s1 = rng.gen_range(0.2..4.0);
            let s2 = rng.gen_range(0.2..4.0);
            let t = rng.gen_range(0.5..40.0);
            let p = params(lam, th1, th2, s1, s2);
            let m = mode_structure(&p).unwrap();
            let kin = match KinematicSet::evaluate(t, &p, &m) {
                Ok(k) => k,
                Err(_) => continue, // singular draw
            };
            let bk = bath_integrals(t, &p, &m, &QuadratureSpec::default()).unwrap();
            let im = intermediates(&kin, &bk, p.a1(), p.a2()).unwrap();

            // raw (unscaled) ingredients
            let i = Complex64::new(0.0, 1.0);
            let w = 1.0 / kin.u; // e^{γt}
            let (a1, a2) = (p.a1(), p.a2());
            let c1 = bk.c1();
            let c2 = bk.c2();
            let e1 = bk.e1();
            let fd = kin.fd_hat() * w;
            let fx = kin.fx_hat() * w;
            let gd = kin.gd();
            let gx = kin.gx();
            let pp = c2 + HBAR * a2;
            let q = 4.0 * HBAR * a2 * pp + gd * gd;
            let a2h = c2 / HBAR + a2;
            let e3 = gx - e1 * gd / (2.0 * pp);
            let e4 = gx * gd / (2.0 * pp);
            let e5 = fd * gd / (2.0 * pp);
            let e6 = fx * gd / (2.0 * pp);
            let z1 = c1 / HBAR + a1 - e1 * e1 / (4.0 * HBAR * pp) + e3 * e3 * a2h / q;
            let z2 = fd - e1 * fx / (2.0 * pp) - 2.0 * e3 * e6 * pp / q;
            let z3 = fx - e1 * fd / (2.0 * pp) - 2.0 * e3 * e5 * pp / q;
            let z6 = gd - e1 * gx / (2.0 * pp) - 2.0 * e3 * e4 * pp / q;
            let y1 = a1 + gx * gx / (4.0 * HBAR * pp) - e4 * e4 * a2h / q
                + z6 * z6 / (4.0 * HBAR * HBAR * z1);
            let y4 = i * (fd * gx / (2.0 * pp)) - i * (2.0 * e4 * e5 * pp / q)
                + i * (z3 * z6 / (2.0 * HBAR * z1));
            let y5 = i * (fx * gx / (2.0 * pp)) - i * (2.0 * e4 * e6 * pp / q)
                + i * (z2 * z6 / (2.0 * HBAR * z1));

            // the complex path must be purely imaginary
            assert!(abs(y4.re) < 1e-10 * (y4.norm() + 1.0));
            assert!(abs(y5.re) < 1e-10 * (y5.norm() + 1.0));
            // and match the graded representation
            assert!(
                rel_diff(y4.im, im.y4_im_hat * kin.u, 1e-9) < 1e-7,
                "trial {trial}: Y₄ {} vs {}",
                y4.im,
                im.y4_im_hat * kin.u
            );
            assert!(rel_diff(y5.im, im.y5_im_hat * kin.u, 1e-9) < 1e-7);

            // raw complex β assembly with Y² entering as squares
            let h2 = HBAR * HBAR;
            let b11c = 2.0
                * (Complex64::new(
                    fx * fx / (HBAR * pp) + z2 * z2 / (h2 * z1)
                        - 4.0 * e6 * e6 * a2h / q,
                    0.0,
                ) + y5 * y5 / (h2 * y1));
            let b22c = 2.0
                * (Complex64::new(
                    fd * fd / (HBAR * pp) + z3 * z3 / (h2 * z1)
                        - 4.0 * e5 * e5 * a2h / q,
                    0.0,
                ) + y4 * y4 / (h2 * y1));
            let b12c = Complex64::new(
                2.0 * fd * fx / (HBAR * pp) + 2.0 * z2 * z3 / (h2 * z1)
                    - 8.0 * e5 * e6 * a2h / q,
                0.0,
            ) + 2.0 * y4 * y5 / (h2 * y1);

            let beta = beta_coefficients(&im, &kin, &bk);
            assert!(abs(b11c.im) < 1e-9 * abs(b11c.re));
            assert!(rel_diff(b11c.re, beta.beta11, 1e-9) < 1e-7, "trial {trial}");
            assert!(rel_diff(b22c.re, beta.beta22, 1e-9) < 1e-7);
            assert!(rel_diff(b12c.re, beta.beta12, 1e-9) < 3e-6);
        }
    }

    #[test]
    fn exchange_symmetry_swaps_the_moments() {
        // swapping (θ₁,σ₀₁²) ↔ (θ₂,σ₀₂²) swaps σ₁² ↔ σ₂² and keeps cov
        let p = params(0.4, 3.9277, 9.1645, 5.0, 0.5);
        let q = p.exchanged();
        for &t in &[1.3, 17.9, 230.4] {
            let (kin_p, bk_p, im_p) = pipeline_at(&p, t);
            let (kin_q, bk_q, im_q) = pipeline_at(&q, t);
            let mp = moments(t, &beta_coefficients(&im_p, &kin_p, &bk_p)).unwrap();
            let mq = moments(t, &beta_coefficients(&im_q, &kin_q, &bk_q)).unwrap();
            assert!(rel_diff(mp.sigma1_sq, mq.sigma2_sq, 1e-12) < 1e-7, "t={t}");
            assert!(rel_diff(mp.sigma2_sq, mq.sigma1_sq, 1e-12) < 1e-7, "t={t}");
            assert!(rel_diff(mp.cov, mq.cov, 1e-12) < 1e-6, "t={t}");
        }
    }

    #[test]
    fn general_pipeline_equals_closed_form_at_zero_coupling() {
        let p = params(0.0, 3.9277, 3.9277, 0.5, 0.5);
        let spec = QuadratureSpec::default();
        for &t in &[0.7, 5.3, 52.1, 400.0] {
            let (kin, bk, im) = pipeline_at(&p, t);
            let general = moments(t, &beta_coefficients(&im, &kin, &bk)).unwrap();
            let closed = uncoupled_variance(t, p.theta1(), p.a1(), p.gamma(), &spec).unwrap();
            assert!(
                rel_diff(general.sigma1_sq, closed, 1e-12) < 1e-8,
                "t={t}: general {} vs closed {}",
                general.sigma1_sq,
                closed
            );
            assert!(abs(general.cov) < 1e-8 * general.sigma1_sq);
        }
    }

    #[test]
    fn initial_state_is_recovered_at_small_time() {
        for (s1, s2) in [(0.5, 0.5), (5.0, 0.5)] {
            let p = params(0.3, 3.9277, 9.1645, s1, s2);
            let t = 1e-3;
            let (kin, bk, im) = pipeline_at(&p, t);
            let m = moments(t, &beta_coefficients(&im, &kin, &bk)).unwrap();
            assert!(rel_diff(m.sigma1_sq, s1, 1e-12) < 1e-4, "σ₁² {} vs {s1}", m.sigma1_sq);
            assert!(rel_diff(m.sigma2_sq, s2, 1e-12) < 1e-4);
            assert!(abs(m.cov) < 1e-4 * math::sqrt(s1 * s2));
        }
    }
}
