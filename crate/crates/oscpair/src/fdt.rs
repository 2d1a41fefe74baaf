//! Equilibrium baseline and long-time analysis: the
//! fluctuation–dissipation variance, plateau extraction from moment time
//! series and the coupling/temperature scans.

use alloc::string::String;
use alloc::vec::Vec;

use crate::bath::QuadratureSpec;
use crate::density::MomentState;
use crate::math::{self, abs, omega_coth};
use crate::modes::mode_structure;
use crate::quad::{self, QuadError};
use crate::timegrid;
use crate::units::SystemParams;
use crate::PipelineError;

/// Equilibrium position variance of one damped oscillator at bath
/// temperature θ:
///
///   σ²(FDT) = (ℏ/πM) ∫₀^∞ dν coth(ν/2θ) · 2γν / [(ν²−ω₀²)² + 4γ²ν²]
///
/// in natural units. The integrand is finite at ν → 0 (the θ > 0 limit
/// is 4γθ/π, the θ = 0 value is 0) and decays like 1/ν³, so the
/// numerical range [0, ν_max] plus an analytic 1/ν_max² tail converges
/// quickly. Returns (value, error estimate) in internal length² units.
pub fn fdt_variance(theta: f64, gamma: f64, spec: &QuadratureSpec) -> Result<(f64, f64), QuadError> {
    let f = |nu: f64| {
        let lorentz = (nu * nu - 1.0) * (nu * nu - 1.0) + 4.0 * gamma * gamma * nu * nu;
        omega_coth(nu, theta) * 2.0 * gamma / (math::PI * lorentz)
    };
    let nu_max = 60.0f64.max(30.0 * theta);
    let mut edges: Vec<f64> = Vec::new();
    edges.push(0.0);
    if theta > 0.0 && 2.0 * theta < 0.4 {
        edges.push(2.0 * theta);
    }
    for e in [1.0 - 5.0 * gamma, 1.0 - gamma, 1.0 + gamma, 1.0 + 5.0 * gamma, 2.0, 5.0, 15.0] {
        if e > 0.0 && e < nu_max {
            edges.push(e);
        }
    }
    edges.push(nu_max);
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    edges.dedup_by(|a, b| abs(*a - *b) < 1e-12);

    let mut scale = 0.0;
    for w in edges.windows(2) {
        scale += quad::kronrod15(&f, w[0], w[1]).0;
    }
    let tol = (spec.rel_tol * abs(scale)).max(spec.abs_floor);
    let (value, err) = quad::adaptive(&f, &edges, tol, spec.max_splits)?;
    // coth → 1 tail: (1/π)∫_{ν_max}^∞ 2γ/ν³ dν = γ/(π ν_max²)
    let tail = gamma / (math::PI * nu_max * nu_max);
    Ok((value + tail, err + 0.1 * tail))
}

/// Plateau-extraction policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    /// Trailing fraction of the series that forms the plateau window.
    pub fraction: f64,
    /// Flatness bound (max−min)/mean for a converged plateau.
    pub flatness_tol: f64,
    /// Half-window mean agreement bound.
    pub half_tol: f64,
}

impl Default for WindowSpec {
    fn default() -> Self {
        Self { fraction: 0.25, flatness_tol: 0.01, half_tol: 0.01 }
    }
}

/// Long-time plateau values of the normalized moments.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    /// σ̃₁²(∞), σ̃₂²(∞): plateau variances over σ²(FDT).
    pub sigma1_norm: f64,
    pub sigma2_norm: f64,
    /// Plateau covariance over √(σ₁²σ₂²)(FDT).
    pub cov_norm: f64,
    /// Plateau window [t_a, t_b].
    pub window: (f64, f64),
    /// (max−min)/mean over the window, per variance.
    pub flatness1: f64,
    pub flatness2: f64,
    pub converged: bool,
    /// Relative growth rate (1/σ̃²)·dσ̃²/dt over the window; positive and
    /// large when the series is still rising (divergent regime).
    pub growth_rate: f64,
    /// Window points that failed evaluation (flagged states).
    pub failed_points: usize,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn flatness(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in xs {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    (hi - lo) / abs(m).max(1e-300)
}

/// Least-squares slope of y(t) over the window, divided by mean(y).
fn relative_slope(ts: &[f64], ys: &[f64]) -> f64 {
    let n = ts.len() as f64;
    let tm = mean(ts);
    let ym = mean(ys);
    let mut num = 0.0;
    let mut den = 0.0;
    for (&t, &y) in ts.iter().zip(ys) {
        num += (t - tm) * (y - ym);
        den += (t - tm) * (t - tm);
    }
    if den == 0.0 || n < 2.0 {
        return 0.0;
    }
    (num / den) / abs(ym).max(1e-300)
}

/// Extract the quasi-stationary plateau from a normalized moment series.
///
/// The plateau is the mean over the trailing window; convergence
/// requires both variances flat within `flatness_tol` and the two
/// half-window means agreeing within `half_tol`. The series should span
/// several damping times (the default horizon is 10/γ).
pub fn steady_state(
    series: &[(f64, MomentState)],
    fdt1: f64,
    fdt2: f64,
    w: &WindowSpec,
    failed_points: usize,
) -> SteadyState {
    let t_end = series.last().map(|p| p.0).unwrap_or(0.0);
    let t_a = t_end * (1.0 - w.fraction);
    let in_window: Vec<&(f64, MomentState)> =
        series.iter().filter(|p| p.0 >= t_a).collect();
    let ts: Vec<f64> = in_window.iter().map(|p| p.0).collect();
    let s1: Vec<f64> = in_window.iter().map(|p| p.1.sigma1_sq / fdt1).collect();
    let s2: Vec<f64> = in_window.iter().map(|p| p.1.sigma2_sq / fdt2).collect();
    let cv: Vec<f64> =
        in_window.iter().map(|p| p.1.cov / math::sqrt(fdt1 * fdt2)).collect();
    if ts.len() < 4 {
        return SteadyState {
            sigma1_norm: f64::NAN,
            sigma2_norm: f64::NAN,
            cov_norm: f64::NAN,
            window: (t_a, t_end),
            flatness1: f64::INFINITY,
            flatness2: f64::INFINITY,
            converged: false,
            growth_rate: f64::NAN,
            failed_points,
        };
    }
    let half = ts.len() / 2;
    let half_diff = |xs: &[f64]| {
        let a = mean(&xs[..half]);
        let b = mean(&xs[half..]);
        abs(a - b) / abs(mean(xs)).max(1e-300)
    };
    let flat1 = flatness(&s1);
    let flat2 = flatness(&s2);
    let converged = flat1 < w.flatness_tol
        && flat2 < w.flatness_tol
        && half_diff(&s1) < w.half_tol
        && half_diff(&s2) < w.half_tol
        && failed_points == 0;
    let growth = 0.5 * (relative_slope(&ts, &s1) + relative_slope(&ts, &s2));
    SteadyState {
        sigma1_norm: mean(&s1),
        sigma2_norm: mean(&s2),
        cov_norm: mean(&cv),
        window: (t_a, t_end),
        flatness1: flat1,
        flatness2: flat2,
        converged,
        growth_rate: growth,
        failed_points,
    }
}

/// Evaluate the moment pipeline over the trailing window only and
/// extract the plateau. This is the per-grid-point unit of the scans.
pub fn steady_state_at(
    params: &SystemParams,
    t_end: f64,
    window_points: usize,
    spec: &QuadratureSpec,
    w: &WindowSpec,
) -> Result<SteadyState, PipelineError> {
    let modes = mode_structure(params).map_err(PipelineError::Modes)?;
    let fdt1 = fdt_variance(params.theta1(), params.gamma(), spec)
        .map_err(|e| PipelineError::Bath(crate::bath::BathError::Quad { which: "fdt", source: e }))?
        .0;
    let fdt2 = fdt_variance(params.theta2(), params.gamma(), spec)
        .map_err(|e| PipelineError::Bath(crate::bath::BathError::Quad { which: "fdt", source: e }))?
        .0;
    let t_a = t_end * (1.0 - w.fraction);
    let grid = timegrid::linear_grid(t_a, t_end, window_points);
    let grid = timegrid::shift_grid(&grid, &modes, &timegrid::SingularShift::default()).0;
    let mut series: Vec<(f64, MomentState)> = Vec::with_capacity(grid.len());
    let mut failed = 0usize;
    let mut last_err: Option<PipelineError> = None;
    for &t in &grid {
        match crate::evolve_moments(params, t, spec) {
            Ok(m) => series.push((t, m)),
            Err(e @ PipelineError::Density(_)) => {
                // flagged, not fatal: divergence scans report these
                failed += 1;
                last_err = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    if series.len() < 4 {
        return Err(last_err.unwrap_or(PipelineError::Density(
            crate::density::DensityError::DegenerateGaussian {
                beta11: f64::NAN,
                beta22: f64::NAN,
                beta12: f64::NAN,
            },
        )));
    }
    Ok(steady_state(&series, fdt1, fdt2, w, failed))
}

/// One scan row.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    /// The scanned abscissa: λ̃ for coupling scans, θ₂ for temperature
    /// scans.
    pub x: f64,
    pub steady: Result<SteadyState, String>,
}

/// Steady states over a coupling grid (sequential; the CLI parallelizes
/// over [`steady_state_at`] directly).
pub fn scan_lambda(
    base: &SystemParams,
    lambda_grid: &[f64],
    t_end: f64,
    window_points: usize,
    spec: &QuadratureSpec,
    w: &WindowSpec,
) -> Vec<ScanPoint> {
    lambda_grid
        .iter()
        .map(|&lam| {
            let steady = base
                .with_lambda(lam)
                .map_err(|e| alloc::format!("{e}"))
                .and_then(|p| {
                    steady_state_at(&p, t_end, window_points, spec, w)
                        .map_err(|e| alloc::format!("{e}"))
                });
            ScanPoint { x: lam, steady }
        })
        .collect()
}

/// Steady states versus θ₂ at fixed θ₁.
pub fn scan_temperature(
    base: &SystemParams,
    theta2_grid: &[f64],
    t_end: f64,
    window_points: usize,
    spec: &QuadratureSpec,
    w: &WindowSpec,
) -> Vec<ScanPoint> {
    theta2_grid
        .iter()
        .map(|&th2| {
            let steady = base
                .with_thetas(base.theta1(), th2)
                .map_err(|e| alloc::format!("{e}"))
                .and_then(|p| {
                    steady_state_at(&p, t_end, window_points, spec, w)
                        .map_err(|e| alloc::format!("{e}"))
                });
            ScanPoint { x: th2, steady }
        })
        .collect()
}
