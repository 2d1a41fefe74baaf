//! The three thermally weighted influence integrals `C₁(t)`, `C₂(t)`,
//! `E₁(t)`: all of the stochastic/thermal content of the model.
//!
//! Each integral has the shape
//!
//! ```text
//! R(t) = (2Mγ/π) Σ_baths ∫₀^ωc dω ω coth(ω/2θ)
//!        ∫₀ᵗ dτ ∫₀^τ ds K(τ,s) cos(ω(τ−s)) e^{γ(τ+s)}
//! ```
//!
//! where `K` is one of three fixed combinations of sixteen trig products
//! `f₁…f₁₆` weighted by the boundary factors `m₁,₂(t)`. The inner double
//! time integral is elementary: expanding every trig factor into complex
//! exponentials turns it into sums of
//! `∫₀ᵗ e^{z₁τ} (e^{z₂τ}−1)/z₂ dτ` with `Re z = γ`, evaluated in closed
//! form. Two structural facts make the outer ω-integral cheap:
//!
//! * scaling the result by `e^{−2γt}` cancels every growing exponential
//!   analytically (the `e^{(z₁+z₂)t}` factor becomes a pure phase), so
//!   no exponential is ever materialized;
//! * the ω-dependence splits into a rational part (Lorentzian peaks at
//!   Ω₁, Ω₂ of width γ — handled by adaptive Gauss–Kronrod panels split
//!   at the resonances) plus an `e^{±iωt}`-oscillatory part whose
//!   amplitude carries an explicit factor `e^{−γt}` (handled by a Filon
//!   rule, so late times never need oscillation-resolving panels).
//!
//! The bath is Ohmic with a sharp frequency cutoff `ω_c`; after the time
//! integration the integrand decays like 1/ω², so the cutoff converges
//! and is reported with every result.

use alloc::vec::Vec;

use crate::math::{self, abs, cis, cos, omega_coth, sin, Complex64};
use crate::modes::{ModeStructure, EPS_SING};
use crate::quad::{self, QuadError};
use crate::units::SystemParams;

/// Which trig product the table position f₁₄ denotes.
///
/// The two candidate readings agree identically at λ = 0 (where
/// Ω₁ = Ω₂) and differ only for coupled oscillators. The default pairs
/// f₁₃/f₁₄ as the mode-2 analogue of f₉/f₁₀, which is the reading
/// reproduced by expanding the ξ-branch trajectory products; the
/// alternative keeps the table row exactly as printed in the source
/// relations (a duplicate of f₁₆). See `tests/oracles.rs` for the
/// trajectory-product check that pins the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum F14Reading {
    /// f₁₄ = cos(Ω₂τ)·sin(Ω₂s) (default).
    ModeTwoPair,
    /// f₁₄ = cos(Ω₂τ)·sin(Ω₁s), duplicating f₁₆.
    Printed,
}

impl Default for F14Reading {
    fn default() -> Self {
        F14Reading::ModeTwoPair
    }
}

/// Frequency-quadrature policy for the bath integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Sharp bath cutoff, units of ω₀. Must exceed Ω₂.
    pub omega_cutoff: f64,
    /// Relative tolerance; admissible range (1e-14, 1e-2).
    pub rel_tol: f64,
    /// Absolute error floor.
    pub abs_floor: f64,
    /// Panel-split budget per integral.
    pub max_splits: usize,
    /// Split initial panels at ω = Ω₁,₂ ± kγ.
    pub resonance_split: bool,
    pub f14: F14Reading,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            omega_cutoff: 50.0,
            rel_tol: 1e-9,
            abs_floor: 1e-14,
            max_splits: 800,
            resonance_split: true,
            f14: F14Reading::ModeTwoPair,
        }
    }
}

/// The influence integrals at one time, scaled by e^{−2γt}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathKernels {
    pub t: f64,
    /// e^{−2γt}·C₁(t) and friends; the raw values are recovered by
    /// `c1()` etc. while they fit in an f64.
    pub c1_hat: f64,
    pub c2_hat: f64,
    pub e1_hat: f64,
    /// Quadrature error estimates for the hatted values.
    pub c1_err: f64,
    pub c2_err: f64,
    pub e1_err: f64,
    /// e^{−2γt}, the scale joining hatted and raw values.
    pub u2: f64,
}

impl BathKernels {
    pub fn c1(&self) -> f64 {
        self.c1_hat / self.u2
    }
    pub fn c2(&self) -> f64 {
        self.c2_hat / self.u2
    }
    pub fn e1(&self) -> f64 {
        self.e1_hat / self.u2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BathError {
    CutoffBelowModes { omega_cutoff: f64, omega2: f64 },
    ToleranceOutOfRange { rel_tol: f64 },
    SingularTime { mode: u8, t: f64 },
    Quad { which: &'static str, source: QuadError },
}

impl core::fmt::Display for BathError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            BathError::CutoffBelowModes { omega_cutoff, omega2 } => {
                write!(f, "cutoff ω_c = {omega_cutoff} must exceed Ω₂ = {omega2}")
            }
            BathError::ToleranceOutOfRange { rel_tol } => {
                write!(f, "relative tolerance {rel_tol:e} outside (1e-14, 1e-2)")
            }
            BathError::SingularTime { mode, t } => {
                write!(f, "bath integrals at singular time t = {t} (mode {mode})")
            }
            BathError::Quad { which, source } => write!(f, "{which}: {source}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for BathError {}

const SIN: usize = 0;
const COS: usize = 1;

/// (mode of τ-factor, mode of s-factor, trig of τ, trig of s) for
/// f₁…f₁₆; modes are 0-based.
fn basis_table(f14: F14Reading) -> [(usize, usize, usize, usize); 16] {
    let f14_entry = match f14 {
        F14Reading::ModeTwoPair => (1, 1, COS, SIN),
        F14Reading::Printed => (1, 0, COS, SIN),
    };
    [
        (0, 0, SIN, SIN), // f₁
        (1, 1, SIN, SIN), // f₂
        (0, 1, SIN, SIN), // f₃
        (1, 0, SIN, SIN), // f₄
        (0, 0, COS, COS), // f₅
        (1, 1, COS, COS), // f₆
        (0, 1, COS, COS), // f₇
        (1, 0, COS, COS), // f₈
        (0, 0, SIN, COS), // f₉
        (0, 0, COS, SIN), // f₁₀
        (0, 1, SIN, COS), // f₁₁
        (0, 1, COS, SIN), // f₁₂
        (1, 1, SIN, COS), // f₁₃
        f14_entry,        // f₁₄
        (1, 0, SIN, COS), // f₁₅
        (1, 0, COS, SIN), // f₁₆
    ]
}

/// The sixteen trig products f₁…f₁₆ at (τ, s).
pub fn kernel_basis(
    tau: f64,
    s: f64,
    omega1: f64,
    omega2: f64,
    f14: F14Reading,
) -> [f64; 16] {
    let table = basis_table(f14);
    let omega = [omega1, omega2];
    let mut out = [0.0; 16];
    for (i, &(a, b, p, q)) in table.iter().enumerate() {
        let ft = if p == SIN { sin(omega[a] * tau) } else { cos(omega[a] * tau) };
        let fs = if q == SIN { sin(omega[b] * s) } else { cos(omega[b] * s) };
        out[i] = ft * fs;
    }
    out
}

/// Weight vectors over f₁…f₁₆ for the three kernel combinations:
/// the native diagonal `C₁⁽¹⁾ = C₂⁽²⁾`, the cross `C₁⁽²⁾ = C₂⁽¹⁾` and
/// the shared `E₁⁽¹⁾ = E₁⁽²⁾`.
fn kernel_weights(m1: f64, m2: f64) -> [[f64; 16]; 3] {
    let diag = [
        m1 * m1,
        m2 * m2,
        m1 * m2,
        m1 * m2,
        0.25,
        0.25,
        0.25,
        0.25,
        -m1 / 2.0,
        -m1 / 2.0,
        -m1 / 2.0,
        -m2 / 2.0,
        -m2 / 2.0,
        -m2 / 2.0,
        -m2 / 2.0,
        -m1 / 2.0,
    ];
    let cross = [
        m1 * m1,
        m2 * m2,
        -m1 * m2,
        -m1 * m2,
        0.25,
        0.25,
        -0.25,
        -0.25,
        -m1 / 2.0,
        -m1 / 2.0,
        m1 / 2.0,
        m2 / 2.0,
        -m2 / 2.0,
        -m2 / 2.0,
        m2 / 2.0,
        m1 / 2.0,
    ];
    let e = [
        2.0 * m1 * m1,
        -2.0 * m2 * m2,
        0.0,
        0.0,
        0.5,
        -0.5,
        0.0,
        0.0,
        -m1,
        -m1,
        0.0,
        0.0,
        m2,
        m2,
        0.0,
        0.0,
    ];
    [diag, cross, e]
}

/// Pointwise kernel combinations (C⁽¹⁾-type, C⁽²⁾-type, E-type) at
/// (τ, s), with the boundary factors m₁,₂ taken at the horizon t.
pub fn kernel_ce(
    tau: f64,
    s: f64,
    m1: f64,
    m2: f64,
    modes: &ModeStructure,
    f14: F14Reading,
) -> (f64, f64, f64) {
    let f = kernel_basis(tau, s, modes.omega1, modes.omega2, f14);
    let w = kernel_weights(m1, m2);
    let dot = |wv: &[f64; 16]| -> f64 { wv.iter().zip(f.iter()).map(|(a, b)| a * b).sum() };
    (dot(&w[0]), dot(&w[1]), dot(&w[2]))
}

/// Closed-form evaluator for the scaled inner double time integral
///
///   Î_K(ω) = e^{−2γt} ∬ K(τ,s) cos(ω(τ−s)) e^{γ(τ+s)} ds dτ
///
/// for all three kernels at once, split into a rational part and the
/// coefficient of e^{+iωt} (the e^{−iωt} coefficient is its conjugate).
pub struct InnerEngine {
    t: f64,
    gamma: f64,
    u: f64,
    u2: f64,
    omega: [f64; 2],
    /// e^{i(σΩ_a + ρΩ_b)t}, indexed [a][σ][b][ρ] with σ,ρ ∈ {+,−} as 0,1.
    e2: [[[[Complex64; 2]; 2]; 2]; 2],
    /// e^{iσΩ_a t}, indexed [a][σ].
    eia: [[Complex64; 2]; 2],
    weights: [[f64; 16]; 3],
    basis: [(usize, usize, usize, usize); 16],
}

/// Complex expansion coefficients: trig(x) = Σ_σ coef[trig][σ] e^{iσx}.
const TRIG_COEF: [[Complex64; 2]; 2] = [
    // sin: (e^{ix} − e^{−ix}) / 2i
    [Complex64::new(0.0, -0.5), Complex64::new(0.0, 0.5)],
    // cos: (e^{ix} + e^{−ix}) / 2
    [Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)],
];

const SIGN: [f64; 2] = [1.0, -1.0];

impl InnerEngine {
    pub fn new(t: f64, gamma: f64, modes: &ModeStructure, m1: f64, m2: f64, f14: F14Reading) -> Self {
        let omega = [modes.omega1, modes.omega2];
        let mut e2 = [[[[Complex64::new(0.0, 0.0); 2]; 2]; 2]; 2];
        let mut eia = [[Complex64::new(0.0, 0.0); 2]; 2];
        for a in 0..2 {
            for sa in 0..2 {
                eia[a][sa] = cis(SIGN[sa] * omega[a] * t);
                for b in 0..2 {
                    for rb in 0..2 {
                        e2[a][sa][b][rb] = cis((SIGN[sa] * omega[a] + SIGN[rb] * omega[b]) * t);
                    }
                }
            }
        }
        let u = math::exp(-gamma * t);
        Self {
            t,
            gamma,
            u,
            u2: u * u,
            omega,
            e2,
            eia,
            weights: kernel_weights(m1, m2),
            basis: basis_table(f14),
        }
    }

    #[inline]
    pub fn u2(&self) -> f64 {
        self.u2
    }

    /// Rational part and e^{+iωt}-coefficient of Î_K(ω) for the three
    /// kernels (diag, cross, E).
    pub fn smooth_and_osc(&self, w: f64) -> ([f64; 3], [Complex64; 3]) {
        // z[a][σ][ε] = γ + i(σΩ_a + εω)
        let mut z = [[[Complex64::new(0.0, 0.0); 2]; 2]; 2];
        for a in 0..2 {
            for sa in 0..2 {
                for e in 0..2 {
                    z[a][sa][e] = Complex64::new(self.gamma, SIGN[sa] * self.omega[a] + SIGN[e] * w);
                }
            }
        }
        // per (a,σ,b,ρ): mean of the two ε rational terms, and the ε=+1
        // oscillatory coefficient −u e^{iσΩ_a t}/(2 z₁⁺z₂⁺)
        let mut wsum = [[[[Complex64::new(0.0, 0.0); 2]; 2]; 2]; 2];
        let mut wosc = [[[[Complex64::new(0.0, 0.0); 2]; 2]; 2]; 2];
        for a in 0..2 {
            for sa in 0..2 {
                for b in 0..2 {
                    for rb in 0..2 {
                        let zsum = Complex64::new(
                            2.0 * self.gamma,
                            SIGN[sa] * self.omega[a] + SIGN[rb] * self.omega[b],
                        );
                        let head = (self.e2[a][sa][b][rb] - self.u2) / zsum;
                        // ε = +1: z₁ = γ+i(σΩ_a+ω), z₂ = γ+i(ρΩ_b−ω)
                        let z1p = z[a][sa][0];
                        let z2p = z[b][rb][1];
                        // ε = −1 swaps the roles
                        let z1m = z[a][sa][1];
                        let z2m = z[b][rb][0];
                        let wp = (head + self.u2 / z1p) / z2p;
                        let wm = (head + self.u2 / z1m) / z2m;
                        wsum[a][sa][b][rb] = (wp + wm) * 0.5;
                        wosc[a][sa][b][rb] = -(self.eia[a][sa] * self.u * 0.5) / (z1p * z2p);
                    }
                }
            }
        }
        let mut smooth = [Complex64::new(0.0, 0.0); 3];
        let mut osc = [Complex64::new(0.0, 0.0); 3];
        for (i, &(a, b, p, q)) in self.basis.iter().enumerate() {
            let mut val = Complex64::new(0.0, 0.0);
            let mut ov = Complex64::new(0.0, 0.0);
            for sa in 0..2 {
                for rb in 0..2 {
                    let cd = TRIG_COEF[p][sa] * TRIG_COEF[q][rb];
                    val += cd * wsum[a][sa][b][rb];
                    ov += cd * wosc[a][sa][b][rb];
                }
            }
            for k in 0..3 {
                let wk = self.weights[k][i];
                smooth[k] += val * wk;
                osc[k] += ov * wk;
            }
        }
        ([smooth[0].re, smooth[1].re, smooth[2].re], osc)
    }

    /// Full closed form of Î_K(ω) at a single frequency (rational plus
    /// oscillatory recombined); used by the brute-force cross checks.
    pub fn closed_at(&self, w: f64) -> [f64; 3] {
        let (smooth, osc) = self.smooth_and_osc(w);
        let phase = cis(w * self.t);
        let mut out = [0.0; 3];
        for k in 0..3 {
            out[k] = smooth[k] + 2.0 * (phase * osc[k]).re;
        }
        out
    }
}

/// Initial ω-panel edges: resonance bands Ω ± {1,5}γ, a low-frequency
/// split tracking the thermal scale, and a few background splits.
pub fn omega_panels(modes: &ModeStructure, gamma: f64, theta: f64, spec: &QuadratureSpec) -> Vec<f64> {
    let wc = spec.omega_cutoff;
    let mut pts: Vec<f64> = Vec::with_capacity(20);
    pts.push(0.0);
    pts.push(wc);
    if spec.resonance_split {
        for &om in &[modes.omega1, modes.omega2] {
            for &k in &[5.0, 1.0] {
                pts.push(om - k * gamma);
                pts.push(om + k * gamma);
            }
        }
    }
    if theta > 0.0 && 2.0 * theta < 0.5 * modes.omega1 {
        pts.push(2.0 * theta);
    }
    for &bg in &[0.5, 2.0, 5.0, 10.0, 20.0] {
        pts.push(bg);
    }
    pts.retain(|&x| (0.0..=wc).contains(&x));
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| abs(*a - *b) < 1e-9);
    pts
}

/// One thermally weighted ω-integral of the scaled inner integral for
/// kernel `k` against bath temperature θ. Returns (value, error).
fn integrate_kernel(
    engine: &InnerEngine,
    k: usize,
    theta: f64,
    modes: &ModeStructure,
    gamma: f64,
    spec: &QuadratureSpec,
    which: &'static str,
) -> Result<(f64, f64), BathError> {
    let edges = omega_panels(modes, gamma, theta, spec);
    let smooth_f = |w: f64| omega_coth(w, theta) * engine.smooth_and_osc(w).0[k];

    // scale estimate from the un-split panels, then the real run
    let mut scale = 0.0;
    for win in edges.windows(2) {
        let (v, _) = quad::kronrod15(&smooth_f, win[0], win[1]);
        scale += v;
    }
    let tol_abs = (spec.rel_tol * abs(scale)).max(spec.abs_floor);
    let (smooth_val, smooth_err) = quad::adaptive(&smooth_f, &edges, tol_abs, spec.max_splits)
        .map_err(|source| BathError::Quad { which, source })?;

    let osc_g = |w: f64| engine.smooth_and_osc(w).1[k] * omega_coth(w, theta);
    let (osc_val, osc_err) = quad::filon_adaptive(&osc_g, &edges, engine.t, tol_abs, spec.max_splits);

    Ok((smooth_val + 2.0 * osc_val.re, smooth_err + 2.0 * osc_err))
}

/// Compute the three influence integrals at time t.
///
/// `C₁` weights the native kernel with θ₁ and the cross kernel with θ₂;
/// `C₂` mirrors it; `E₁` uses the shared kernel with both baths.
pub fn bath_integrals(
    t: f64,
    params: &SystemParams,
    modes: &ModeStructure,
    spec: &QuadratureSpec,
) -> Result<BathKernels, BathError> {
    if spec.omega_cutoff <= modes.omega2 {
        return Err(BathError::CutoffBelowModes {
            omega_cutoff: spec.omega_cutoff,
            omega2: modes.omega2,
        });
    }
    if spec.rel_tol <= 1e-14 || spec.rel_tol >= 1e-2 {
        return Err(BathError::ToleranceOutOfRange { rel_tol: spec.rel_tol });
    }
    let sn1 = sin(modes.omega1 * t);
    let sn2 = sin(modes.omega2 * t);
    if abs(sn1) < EPS_SING {
        return Err(BathError::SingularTime { mode: 1, t });
    }
    if abs(sn2) < EPS_SING {
        return Err(BathError::SingularTime { mode: 2, t });
    }
    let m1 = cos(modes.omega1 * t) / (2.0 * sn1);
    let m2 = cos(modes.omega2 * t) / (2.0 * sn2);
    let gamma = params.gamma();
    let engine = InnerEngine::new(t, gamma, modes, m1, m2, spec.f14);

    let pref = 2.0 * params.mass() * gamma / math::PI;
    let run = |k: usize, theta: f64, which: &'static str| -> Result<(f64, f64), BathError> {
        integrate_kernel(&engine, k, theta, modes, gamma, spec, which)
    };
    let (d1, d1e) = run(0, params.theta1(), "C diag, bath 1")?;
    let (x2, x2e) = run(1, params.theta2(), "C cross, bath 2")?;
    let (x1, x1e) = run(1, params.theta1(), "C cross, bath 1")?;
    let (d2, d2e) = run(0, params.theta2(), "C diag, bath 2")?;
    let (e1a, e1ae) = run(2, params.theta1(), "E, bath 1")?;
    let (e1b, e1be) = run(2, params.theta2(), "E, bath 2")?;

    Ok(BathKernels {
        t,
        c1_hat: pref * (d1 + x2),
        c2_hat: pref * (x1 + d2),
        e1_hat: pref * (e1a + e1b),
        c1_err: pref * (d1e + x2e),
        c2_err: pref * (x1e + d2e),
        e1_err: pref * (e1ae + e1be),
        u2: engine.u2(),
    })
}

/// Thread-safe memoization of [`bath_integrals`] keyed on the exact bit
/// patterns of every input. λ-scans and plateau extraction re-request
/// identical (t, θ, λ̃, spec) tuples constantly.
#[cfg(feature = "std")]
pub mod cache {
    use super::{bath_integrals, BathError, BathKernels, F14Reading, QuadratureSpec};
    use crate::modes::ModeStructure;
    use crate::units::SystemParams;
    use std::collections::BTreeMap;
    use std::sync::Mutex;

    #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
    struct Key {
        t: u64,
        gamma: u64,
        lambda: u64,
        theta1: u64,
        theta2: u64,
        cutoff: u64,
        rel_tol: u64,
        f14_printed: bool,
        resonance_split: bool,
    }

    impl Key {
        fn new(t: f64, params: &SystemParams, spec: &QuadratureSpec) -> Self {
            Self {
                t: t.to_bits(),
                gamma: params.gamma().to_bits(),
                lambda: params.lambda_tilde().to_bits(),
                theta1: params.theta1().to_bits(),
                theta2: params.theta2().to_bits(),
                cutoff: spec.omega_cutoff.to_bits(),
                rel_tol: spec.rel_tol.to_bits(),
                f14_printed: spec.f14 == F14Reading::Printed,
                resonance_split: spec.resonance_split,
            }
        }
    }

    /// Concurrent-insert-safe kernel cache.
    #[derive(Default)]
    pub struct KernelCache {
        map: Mutex<BTreeMap<Key, BathKernels>>,
    }

    impl KernelCache {
        pub fn new() -> Self {
            Self::default()
        }

        pub fn len(&self) -> usize {
            self.map.lock().expect("cache poisoned").len()
        }

        pub fn is_empty(&self) -> bool {
            self.len() == 0
        }

        pub fn get_or_compute(
            &self,
            t: f64,
            params: &SystemParams,
            modes: &ModeStructure,
            spec: &QuadratureSpec,
        ) -> Result<BathKernels, BathError> {
            let key = Key::new(t, params, spec);
            if let Some(hit) = self.map.lock().expect("cache poisoned").get(&key) {
                return Ok(*hit);
            }
            let computed = bath_integrals(t, params, modes, spec)?;
            self.map.lock().expect("cache poisoned").insert(key, computed);
            Ok(computed)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::rel_diff;
    use crate::modes::mode_structure;
    use crate::units::{reference_scales, SystemParams};

    fn params(lambda: f64, gamma: f64, theta1: f64, theta2: f64) -> SystemParams {
        SystemParams::new(reference_scales(), gamma, lambda, 0.5, 0.5, theta1, theta2).unwrap()
    }

    #[test]
    fn basis_values_at_origin() {
        // f₁…f₄ = 0, f₅…f₈ = 1, f₉…f₁₆ = 0 at τ = s = 0
        let f = kernel_basis(0.0, 0.0, 0.9, 1.1, F14Reading::ModeTwoPair);
        for i in 0..4 {
            assert_eq!(f[i], 0.0);
        }
        for i in 4..8 {
            assert_eq!(f[i], 1.0);
        }
        for i in 8..16 {
            assert_eq!(f[i], 0.0);
        }
    }

    #[test]
    fn degenerate_modes_collapse_basis() {
        // Ω₁ = Ω₂ ⇒ f₃ = f₁, f₇ = f₅, f₁₁ = f₉, and the two f₁₄
        // readings coincide
        let (tau, s, o) = (1.3, 0.4, 0.95);
        let f = kernel_basis(tau, s, o, o, F14Reading::ModeTwoPair);
        assert_eq!(f[2], f[0]);
        assert_eq!(f[6], f[4]);
        assert_eq!(f[10], f[8]);
        let g = kernel_basis(tau, s, o, o, F14Reading::Printed);
        assert_eq!(f, g);
    }

    #[test]
    fn basis_transpose_symmetry() {
        // f₉(τ,s) = f₁₀(s,τ)
        let (o1, o2) = (0.8, 1.25);
        let a = kernel_basis(0.7, 0.2, o1, o2, F14Reading::ModeTwoPair);
        let b = kernel_basis(0.2, 0.7, o1, o2, F14Reading::ModeTwoPair);
        assert!(rel_diff(a[8], b[9], 1e-15) < 1e-13);
    }

    #[test]
    fn e_kernel_vanishes_pointwise_at_zero_coupling() {
        let p = params(0.0, 0.01, 3.9, 9.2);
        let m = mode_structure(&p).unwrap();
        let t = 5.0;
        let m1 = cos(m.omega1 * t) / (2.0 * sin(m.omega1 * t));
        for &(tau, s) in &[(0.3, 0.1), (2.2, 1.9), (4.9, 0.05)] {
            let (_, cx, e) = kernel_ce(tau, s, m1, m1, &m, F14Reading::ModeTwoPair);
            assert!(abs(e) < 1e-14, "E≠0 at ({tau},{s})");
            // the cross kernel also vanishes: C₁ depends only on θ₁
            assert!(abs(cx) < 1e-14, "cross≠0 at ({tau},{s})");
        }
    }

    #[test]
    fn closed_inner_integral_matches_midpoint_quadrature() {
        // one random-ish parameter point, moderate accuracy 2-D check of
        // the complex-exponential closed form
        let p = params(0.3, 0.05, 1.0, 2.0);
        let m = mode_structure(&p).unwrap();
        let t = 2.1;
        let sn1 = sin(m.omega1 * t);
        let sn2 = sin(m.omega2 * t);
        let m1 = cos(m.omega1 * t) / (2.0 * sn1);
        let m2 = cos(m.omega2 * t) / (2.0 * sn2);
        let engine = InnerEngine::new(t, p.gamma(), &m, m1, m2, F14Reading::ModeTwoPair);
        let omega = 1.7;
        let closed = engine.closed_at(omega);

        let n = 700;
        let h = t / n as f64;
        let mut acc = [0.0; 3];
        for i in 0..n {
            let tau = (i as f64 + 0.5) * h;
            let inner_n = ((tau / t * n as f64) as usize).max(1);
            let hs = tau / inner_n as f64;
            for j in 0..inner_n {
                let s = (j as f64 + 0.5) * hs;
                let (kd, kx, ke) = kernel_ce(tau, s, m1, m2, &m, F14Reading::ModeTwoPair);
                let w = cos(omega * (tau - s)) * math::exp(p.gamma() * (tau + s - 2.0 * t)) * h * hs;
                acc[0] += kd * w;
                acc[1] += kx * w;
                acc[2] += ke * w;
            }
        }
        for k in 0..3 {
            assert!(
                abs(closed[k] - acc[k]) < 2e-4 * (abs(closed[k]) + 1e-2),
                "kernel {k}: closed {} vs brute {}",
                closed[k],
                acc[k]
            );
        }
    }

    #[test]
    fn kernels_vanish_as_gamma_to_zero() {
        // the 2Mγ/π prefactor kills everything at γ → 0⁺
        let p = params(0.2, 1e-9, 2.0, 3.0);
        let m = mode_structure(&p).unwrap();
        let k = bath_integrals(4.0, &p, &m, &QuadratureSpec::default()).unwrap();
        assert!(abs(k.c1_hat) < 1e-8);
        assert!(abs(k.c2_hat) < 1e-8);
        assert!(abs(k.e1_hat) < 1e-8);
    }

    #[test]
    fn kernels_vanish_quadratically_at_small_time() {
        let p = params(0.2, 0.01, 2.0, 3.0);
        let m = mode_structure(&p).unwrap();
        let spec = QuadratureSpec::default();
        let k1 = bath_integrals(1e-2, &p, &m, &spec).unwrap();
        let k2 = bath_integrals(2e-2, &p, &m, &spec).unwrap();
        assert!(abs(k1.c1_hat) < 1e-2);
        // O(t²): doubling t should quadruple, allow slack for O(t³)
        let ratio = k2.c1_hat / k1.c1_hat;
        assert!(ratio > 3.0 && ratio < 5.0, "ratio {ratio}");
    }

    #[test]
    fn zero_coupling_separates_bath_temperatures() {
        // C₁ must not change when θ₂ changes (λ = 0)
        let spec = QuadratureSpec::default();
        let t = 7.3;
        let pa = params(0.0, 0.01, 3.9277, 9.1645);
        let pb = params(0.0, 0.01, 3.9277, 0.3);
        let ma = mode_structure(&pa).unwrap();
        let ka = bath_integrals(t, &pa, &ma, &spec).unwrap();
        let kb = bath_integrals(t, &pb, &ma, &spec).unwrap();
        assert!(rel_diff(ka.c1_hat, kb.c1_hat, 1e-12) < 1e-8);
        // E₁ vanishes identically
        assert!(abs(ka.e1_hat) < 1e-10 * abs(ka.c1_hat).max(abs(ka.c2_hat)));
        // and C₂ tracks its own bath only
        let pc = params(0.0, 0.01, 0.5, 9.1645);
        let kc = bath_integrals(t, &pc, &ma, &spec).unwrap();
        assert!(rel_diff(ka.c2_hat, kc.c2_hat, 1e-12) < 1e-8);
    }

    #[test]
    fn heating_is_monotone_in_temperature() {
        let spec = QuadratureSpec::default();
        let t = 11.0;
        let mut prev = None;
        for theta in [0.0, 0.5, 2.0, 4.0, 9.0] {
            let p = params(0.25, 0.01, theta, 1.0);
            let m = mode_structure(&p).unwrap();
            let k = bath_integrals(t, &p, &m, &spec).unwrap();
            if let Some(prev_c1) = prev {
                assert!(k.c1_hat > prev_c1, "C₁ not monotone at θ = {theta}");
            }
            prev = Some(k.c1_hat);
        }
    }

    #[test]
    fn c_kernels_are_nonnegative() {
        let spec = QuadratureSpec::default();
        for &(lam, t) in &[(0.0, 3.0), (0.4, 9.7), (-0.7, 21.3), (0.9, 50.0)] {
            let p = params(lam, 0.01, 3.9277, 9.1645);
            let m = mode_structure(&p).unwrap();
            let k = bath_integrals(t, &p, &m, &spec).unwrap();
            assert!(k.c1_hat >= 0.0, "C₁ < 0 at λ={lam}, t={t}");
            assert!(k.c2_hat >= 0.0, "C₂ < 0 at λ={lam}, t={t}");
        }
    }

    #[test]
    fn cutoff_convergence_at_default_parameters() {
        // |R(ω_c=100) − R(ω_c=50)| / |R| below 1e-3 at the default point
        let p = params(0.1, 0.01, 3.9277, 9.1645);
        let m = mode_structure(&p).unwrap();
        let t = 1000.0 - 0.37; // generic late time off the singular set
        let s50 = QuadratureSpec::default();
        let s100 = QuadratureSpec { omega_cutoff: 100.0, ..s50 };
        let k50 = bath_integrals(t, &p, &m, &s50).unwrap();
        let k100 = bath_integrals(t, &p, &m, &s100).unwrap();
        assert!(rel_diff(k50.c1_hat, k100.c1_hat, 1e-12) < 1e-3);
        assert!(rel_diff(k50.c2_hat, k100.c2_hat, 1e-12) < 1e-3);
        // doubling the cutoff moves the result by less than the
        // reported error estimate at this late time
        assert!(abs(k50.c1_hat - k100.c1_hat) <= k50.c1_err + k100.c1_err);
    }

    #[test]
    fn spec_validation() {
        let p = params(0.1, 0.01, 1.0, 1.0);
        let m = mode_structure(&p).unwrap();
        let bad_cutoff = QuadratureSpec { omega_cutoff: 1.0, ..Default::default() };
        assert!(matches!(
            bath_integrals(3.0, &p, &m, &bad_cutoff),
            Err(BathError::CutoffBelowModes { .. })
        ));
        let bad_tol = QuadratureSpec { rel_tol: 0.5, ..Default::default() };
        assert!(matches!(
            bath_integrals(3.0, &p, &m, &bad_tol),
            Err(BathError::ToleranceOutOfRange { .. })
        ));
    }

    #[cfg(feature = "std")]
    #[test]
    fn cache_returns_identical_values() {
        let p = params(0.3, 0.01, 2.0, 5.0);
        let m = mode_structure(&p).unwrap();
        let spec = QuadratureSpec::default();
        let cache = cache::KernelCache::new();
        let a = cache.get_or_compute(5.0, &p, &m, &spec).unwrap();
        let b = cache.get_or_compute(5.0, &p, &m, &spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(cache.len(), 1);
    }
}
