//! Evaluation-time grids that step off the singular set
//! {kπ/Ω₁, kπ/Ω₂} of the boundary-value propagator.
//!
//! The individual propagator functions n, m diverge at those times while
//! the physical moments stay finite only through cancellations the
//! printed formulas do not make explicit, so grid points are nudged off
//! the singular set instead of evaluated on it.

use alloc::vec::Vec;

use crate::math::{abs, exp, ln, round, PI};
use crate::modes::ModeStructure;

/// Shift policy: points closer than `eps` to a singular time move
/// `step` past it (re-checked against both modes).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularShift {
    pub eps: f64,
    pub step: f64,
}

impl Default for SingularShift {
    fn default() -> Self {
        Self { eps: 1e-8, step: 3e-8 }
    }
}

/// Distance from t to the nearest singular time of either mode.
pub fn singular_distance(t: f64, modes: &ModeStructure) -> f64 {
    let mut dist = f64::INFINITY;
    for &omega in &[modes.omega1, modes.omega2] {
        let k = round(t * omega / PI);
        let near = k * PI / omega;
        dist = dist.min(abs(t - near));
    }
    dist
}

/// Move a single point off the singular set. Returns the (possibly
/// shifted) time and whether a shift happened.
pub fn shift_point(t: f64, modes: &ModeStructure, policy: &SingularShift) -> (f64, bool) {
    let mut t = t;
    let mut shifted = false;
    // a shift past one mode's singular time can land on the other's
    for _ in 0..8 {
        let mut moved = false;
        for &omega in &[modes.omega1, modes.omega2] {
            let k = round(t * omega / PI);
            let near = k * PI / omega;
            if abs(t - near) < policy.eps {
                t = near + policy.eps.max(policy.step);
                shifted = true;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    (t, shifted)
}

/// Shift every grid point; returns the new grid and the shift count.
pub fn shift_grid(grid: &[f64], modes: &ModeStructure, policy: &SingularShift) -> (Vec<f64>, usize) {
    let mut shifts = 0;
    let out = grid
        .iter()
        .map(|&t| {
            let (tt, s) = shift_point(t, modes, policy);
            if s {
                shifts += 1;
            }
            tt
        })
        .collect();
    (out, shifts)
}

/// n points, linear from a to b inclusive.
pub fn linear_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return alloc::vec![b];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// n points, logarithmic from a to b inclusive (a > 0).
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return alloc::vec![b];
    }
    let la = ln(a);
    let lb = ln(b);
    (0..n).map(|i| exp(la + (lb - la) * i as f64 / (n - 1) as f64)).collect()
}
