//! Quadrature primitives: a globally adaptive 15-point Gauss–Kronrod
//! integrator for smooth integrands and a Filon-type rule for factors
//! `g(ω)·e^{iωt}` whose oscillation is handled analytically.

use alloc::vec::Vec;

use crate::math::{abs, cis, Complex64};

/// Kronrod abscissae for the 15-point rule (positive half).
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];

/// Kronrod weights.
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

/// Embedded 7-point Gauss weights (odd Kronrod abscissae).
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One 15-point Kronrod panel with embedded error estimate.
pub fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let err = abs((kronrod - gauss) * half);
    (value, err)
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuadError {
    /// Global error target not reached within the panel budget; carries
    /// the worst remaining panel.
    NonConvergence { worst_panel: (f64, f64), panel_error: f64, total_error: f64 },
}

impl core::fmt::Display for QuadError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            QuadError::NonConvergence { worst_panel, panel_error, total_error } => write!(
                f,
                "quadrature not converged: worst panel [{}, {}] err {panel_error:e}, total {total_error:e}",
                worst_panel.0, worst_panel.1
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for QuadError {}

/// Globally adaptive Gauss–Kronrod integration over a pre-split panel
/// list. The worst panel is bisected until the summed error estimate
/// meets `tol_abs` or the split budget `max_splits` runs out.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    edges: &[f64],
    tol_abs: f64,
    max_splits: usize,
) -> Result<(f64, f64), QuadError> {
    struct Panel {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
    }
    let mut panels: Vec<Panel> = Vec::with_capacity(edges.len() + max_splits);
    for w in edges.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, err) = kronrod15(f, w[0], w[1]);
        panels.push(Panel { a: w[0], b: w[1], value, err });
    }
    for _ in 0..max_splits {
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        if total_err <= tol_abs {
            break;
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.err.partial_cmp(&b.1.err).unwrap_or(core::cmp::Ordering::Equal))
            .expect("panel list not empty");
        let Panel { a, b, .. } = panels[idx];
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break; // panel at floating-point resolution
        }
        let (v1, e1) = kronrod15(f, a, mid);
        let (v2, e2) = kronrod15(f, mid, b);
        panels[idx] = Panel { a, b: mid, value: v1, err: e1 };
        panels.push(Panel { a: mid, b, value: v2, err: e2 });
    }
    let value: f64 = panels.iter().map(|p| p.value).sum();
    let total_error: f64 = panels.iter().map(|p| p.err).sum();
    if total_error > tol_abs {
        let worst = panels
            .iter()
            .max_by(|a, b| a.err.partial_cmp(&b.err).unwrap_or(core::cmp::Ordering::Equal))
            .expect("panel list not empty");
        return Err(QuadError::NonConvergence {
            worst_panel: (worst.a, worst.b),
            panel_error: worst.err,
            total_error,
        });
    }
    Ok((value, total_error))
}

// ---------------------------------------------------------------------
// Filon-type rule: ∫ g(ω) e^{iωt} dω with g interpolated by a degree-10
// polynomial on Chebyshev nodes and the moments ∫ vᵏ e^{iTv} dv done in
// closed form, so the oscillation never has to be resolved by panels.
// ---------------------------------------------------------------------

const FILON_N: usize = 11;

/// Chebyshev–Lobatto nodes on [-1, 1], v_j = cos(jπ/10), descending.
fn filon_nodes() -> [f64; FILON_N] {
    let mut nodes = [0.0; FILON_N];
    for (j, n) in nodes.iter_mut().enumerate() {
        *n = libm::cos(j as f64 * core::f64::consts::PI / (FILON_N - 1) as f64);
    }
    nodes
}

/// Monomial coefficients of the Lagrange basis polynomials ℓ_j on the
/// Lobatto nodes; `coeff[j][k]` multiplies v^k.
fn lagrange_coeffs(nodes: &[f64; FILON_N]) -> [[f64; FILON_N]; FILON_N] {
    let mut out = [[0.0; FILON_N]; FILON_N];
    for j in 0..FILON_N {
        // numerator polynomial Π_{i≠j}(v − v_i), built incrementally
        let mut poly = [0.0; FILON_N];
        poly[0] = 1.0;
        let mut deg = 0;
        let mut denom = 1.0;
        for i in 0..FILON_N {
            if i == j {
                continue;
            }
            denom *= nodes[j] - nodes[i];
            let mut next = [0.0; FILON_N];
            for (k, c) in poly.iter().enumerate().take(deg + 1) {
                next[k + 1] += c;
                next[k] -= c * nodes[i];
            }
            poly = next;
            deg += 1;
        }
        for k in 0..FILON_N {
            out[j][k] = poly[k] / denom;
        }
    }
    out
}

/// Moments μ_k(T) = ∫_{-1}^{1} v^k e^{iTv} dv for k = 0..FILON_N.
fn moments(t_half: f64) -> [Complex64; FILON_N] {
    let mut mu = [Complex64::new(0.0, 0.0); FILON_N];
    if abs(t_half) < 35.0 {
        // power series in (iT): μ_k = Σ_m (iT)^m/m! · 2/(k+m+1), even k+m
        let it = Complex64::new(0.0, t_half);
        for (k, mu_k) in mu.iter_mut().enumerate() {
            let mut term = Complex64::new(1.0, 0.0); // (iT)^m / m!
            let mut sum = Complex64::new(0.0, 0.0);
            for m in 0..160 {
                if (k + m) % 2 == 0 {
                    let add = term * (2.0 / (k + m + 1) as f64);
                    sum += add;
                    if add.norm() < 1e-18 * sum.norm() + 1e-300 {
                        break;
                    }
                }
                term = term * it / (m + 1) as f64;
            }
            *mu_k = sum;
        }
    } else {
        // upward recursion, stable for |T| ≳ k
        let it = Complex64::new(0.0, t_half);
        let eip = cis(t_half);
        let eim = cis(-t_half);
        mu[0] = (eip - eim) / it;
        for k in 1..FILON_N {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            mu[k] = (eip - eim * sign) / it - (k as f64) * mu[k - 1] / it;
        }
    }
    mu
}

/// ∫_a^b g(ω) e^{iωt} dω on one panel by degree-10 interpolation of g.
pub fn filon_panel<G: Fn(f64) -> Complex64>(g: &G, a: f64, b: f64, t: f64) -> Complex64 {
    let nodes = filon_nodes();
    let coeffs = lagrange_coeffs(&nodes);
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mu = moments(t * half);
    let phase = cis(t * center) * half;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..FILON_N {
        let gj = g(center + half * nodes[j]);
        let mut wj = Complex64::new(0.0, 0.0);
        for k in 0..FILON_N {
            wj += mu[k] * coeffs[j][k];
        }
        acc += gj * wj;
    }
    acc * phase
}

/// Adaptive Filon integration: each panel is compared against its two
/// halves and split while the difference exceeds `tol_abs`. Returns
/// (value, error estimate).
pub fn filon_adaptive<G: Fn(f64) -> Complex64>(
    g: &G,
    edges: &[f64],
    t: f64,
    tol_abs: f64,
    max_splits: usize,
) -> (Complex64, f64) {
    struct Panel {
        a: f64,
        b: f64,
        value: Complex64,
        err: f64,
    }
    fn eval<G: Fn(f64) -> Complex64>(g: &G, a: f64, b: f64, t: f64) -> (Complex64, f64) {
        let whole = filon_panel(g, a, b, t);
        let mid = 0.5 * (a + b);
        let halves = filon_panel(g, a, mid, t) + filon_panel(g, mid, b, t);
        let err = (whole - halves).norm();
        (halves, err)
    }
    let mut panels: Vec<Panel> = Vec::new();
    for w in edges.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, err) = eval(g, w[0], w[1], t);
        panels.push(Panel { a: w[0], b: w[1], value, err });
    }
    for _ in 0..max_splits {
        let total: f64 = panels.iter().map(|p| p.err).sum();
        if total <= tol_abs {
            break;
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.err.partial_cmp(&b.1.err).unwrap_or(core::cmp::Ordering::Equal))
            .expect("panel list not empty");
        let Panel { a, b, .. } = panels[idx];
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let (v1, e1) = eval(g, a, mid, t);
        let (v2, e2) = eval(g, mid, b, t);
        panels[idx] = Panel { a, b: mid, value: v1, err: e1 };
        panels.push(Panel { a: mid, b, value: v2, err: e2 });
    }
    let value = panels.iter().fold(Complex64::new(0.0, 0.0), |acc, p| acc + p.value);
    let err = panels.iter().map(|p| p.err).sum();
    (value, err)
}
