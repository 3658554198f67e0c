//! PT-phase classification, the exceptional line, and the Hermitian winding
//! number.
//!
//! With `x = cos k` the quantity `ε_k²/4 = (μ − Jx)² − Δ²(1 − x²)` is a
//! quadratic in `x` with non-negative leading coefficient `J² + Δ²`, so its
//! minimum over the Brillouin zone and the set where it is negative are both
//! available in closed form.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{quarter_dispersion_sq, HermParams, MomentumGrid, NhParams};

pub const DEFAULT_EP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PhaseLabel {
    /// Every `ε_k` is real.
    Unbroken,
    /// On `μ² − Δ² = J²`: the spectrum is real and `ε_{k_c} = 0` at a
    /// Jordan-block momentum.
    ExceptionalLine { k_c: f64 },
    /// Some `ε_k` is imaginary; carries the fraction of `k ∈ (0, π)` with
    /// `ε_k² < 0`.
    ///
    /// The gapless Hermitian segment `Δ = 0, |μ| < |J|` is the closure of the
    /// broken region and is reported here with a zero fraction.
    Broken { broken_fraction: f64 },
}

impl PhaseLabel {
    pub fn name(&self) -> &'static str {
        match self {
            PhaseLabel::Unbroken => "unbroken",
            PhaseLabel::ExceptionalLine { .. } => "exceptional",
            PhaseLabel::Broken { .. } => "broken",
        }
    }

    pub fn critical_momentum(&self) -> Option<f64> {
        match self {
            PhaseLabel::ExceptionalLine { k_c } => Some(*k_c),
            _ => None,
        }
    }

    pub fn broken_fraction(&self) -> f64 {
        match self {
            PhaseLabel::Broken { broken_fraction } => *broken_fraction,
            _ => 0.0,
        }
    }
}

/// Coefficients of `ε²/4` as `a x² + b x + c` in `x = cos k`.
fn quadratic(p: &NhParams) -> (f64, f64, f64) {
    let a = p.j * p.j + p.delta * p.delta;
    let b = -2.0 * p.mu * p.j;
    let c = p.mu * p.mu - p.delta * p.delta;
    (a, b, c)
}

/// `min_{k ∈ [0, π]} ε_k² / 4`.
pub fn min_quarter_dispersion_sq(p: &NhParams) -> f64 {
    let (a, b, c) = quadratic(p);
    let at = |x: f64| (a * x + b) * x + c;
    if a == 0.0 {
        return c;
    }
    let vertex = -b / (2.0 * a);
    if vertex.abs() <= 1.0 {
        // closed form of the vertex value, free of cancellation
        let d2 = p.delta * p.delta;
        d2 * (p.mu * p.mu - p.j * p.j - d2) / a
    } else {
        at(-1.0).min(at(1.0))
    }
}

fn on_exceptional_line(p: &NhParams, tol: f64) -> bool {
    (p.mu * p.mu - p.delta * p.delta - p.j * p.j).abs() <= tol && p.mu.abs() >= p.j.abs()
}

/// Exact measure of `{k ∈ (0, π) : ε_k² < 0}` divided by `π`.
pub fn broken_fraction(p: &NhParams) -> f64 {
    let (a, b, c) = quadratic(p);
    if a == 0.0 {
        return if c < 0.0 { 1.0 } else { 0.0 };
    }
    let disc = b * b - 4.0 * a * c;
    if disc <= 0.0 {
        return 0.0;
    }
    let sq = disc.sqrt();
    // stable root pair
    let sgn = if b >= 0.0 { 1.0 } else { -1.0 };
    let q = -0.5 * (b + sgn * sq);
    let (mut x1, mut x2) = if q == 0.0 {
        (-sq / (2.0 * a), sq / (2.0 * a))
    } else {
        (q / a, c / q)
    };
    if x1 > x2 {
        std::mem::swap(&mut x1, &mut x2);
    }
    let lo = x1.max(-1.0);
    let hi = x2.min(1.0);
    if lo >= hi {
        return 0.0;
    }
    // cos is decreasing on (0, π)
    ((lo.acos() - hi.acos()) / PI).clamp(0.0, 1.0)
}

pub fn classify(p: &NhParams, tol: f64) -> PhaseLabel {
    if on_exceptional_line(p, tol) {
        let k_c = (p.j * p.mu / (p.j * p.j + p.delta * p.delta))
            .clamp(-1.0, 1.0)
            .acos();
        return PhaseLabel::ExceptionalLine { k_c };
    }
    if min_quarter_dispersion_sq(p) > 0.0 {
        PhaseLabel::Unbroken
    } else {
        PhaseLabel::Broken {
            broken_fraction: broken_fraction(p),
        }
    }
}

/// `k_c = arccos(J/μ_c)` for a point on the exceptional line.
pub fn critical_momentum(p: &NhParams, tol: f64) -> Result<f64> {
    if p.j == 0.0 {
        return Err(Error::Validation("critical momentum needs J ≠ 0".into()));
    }
    match classify(p, tol) {
        PhaseLabel::ExceptionalLine { k_c } => Ok(k_c),
        other => Err(Error::Validation(format!(
            "(J, Δ, μ) = ({}, {}, {}) is not on the exceptional line (classified {})",
            p.j,
            p.delta,
            p.mu,
            other.name()
        ))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub delta_c: f64,
    pub mu_c: f64,
}

/// Samples of both branches `μ_c = ±√(J² + Δ_c²)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalCurve {
    pub j: f64,
    pub samples: Vec<CurveSample>,
}

pub fn exceptional_curve(j: f64, min: f64, max: f64, step: f64) -> Result<ExceptionalCurve> {
    if step.is_nan() || step <= 0.0 || !min.is_finite() || !max.is_finite() || max < min {
        return Err(Error::Validation(format!("bad Δ range {min}:{max}:{step}")));
    }
    let span = ((max - min) / step + 1e-9).floor();
    if span.is_nan() || span >= 1e7 {
        return Err(Error::Validation(format!(
            "Δ range {min}:{max}:{step} is too fine"
        )));
    }
    let count = span as usize + 1;
    let mut samples = Vec::with_capacity(2 * count);
    for i in 0..count {
        let delta_c = min + i as f64 * step;
        let mu = j.hypot(delta_c);
        samples.push(CurveSample { delta_c, mu_c: mu });
        samples.push(CurveSample { delta_c, mu_c: -mu });
    }
    Ok(ExceptionalCurve { j, samples })
}

/// Grid momenta with `ε_k² < 0`.
pub fn broken_momenta(p: &NhParams, grid: &MomentumGrid) -> Vec<f64> {
    grid.all()
        .into_iter()
        .filter(|&k| quarter_dispersion_sq(k, p) < 0.0)
        .collect()
}

pub const DEFAULT_WINDING_POINTS: usize = 2000;

/// Winding of `d(k) = (Δ_h sin k, μ_h − J cos k)` around the origin as `k`
/// runs once over the Brillouin zone, counterclockwise positive with `Δ_h sin k`
/// on the horizontal axis.
pub fn winding_number(p: &HermParams) -> Result<i32> {
    winding_number_with(p, DEFAULT_WINDING_POINTS)
}

pub fn winding_number_with(p: &HermParams, points: usize) -> Result<i32> {
    if points < 3 {
        return Err(Error::Validation("winding needs at least 3 points".into()));
    }
    let scale = p.j.abs() + p.mu_h.abs() + p.delta_h.abs();
    let gap_tol = 1e-12 * scale.max(1.0);
    // d vanishes only at k ∈ {0, π} with μ_h = ±J, or for Δ_h = 0 with |μ_h| ≤ |J|
    let closes = (p.mu_h.abs() - p.j.abs()).abs() <= gap_tol
        || (p.delta_h.abs() <= gap_tol && p.mu_h.abs() <= p.j.abs());
    if closes {
        return Err(Error::Degenerate(format!(
            "gap closes for (J, Δ_h, μ_h) = ({}, {}, {})",
            p.j, p.delta_h, p.mu_h
        )));
    }
    let d = |k: f64| (p.delta_h * k.sin(), p.mu_h - p.j * k.cos());
    let mut total = 0.0;
    let (mut x0, mut y0) = d(-PI);
    for i in 1..=points {
        let k = -PI + 2.0 * PI * i as f64 / points as f64;
        let (x1, y1) = d(k);
        if x1.hypot(y1) <= gap_tol {
            return Err(Error::Degenerate(format!("d(k) vanishes near k = {k}")));
        }
        // signed angle between consecutive vectors
        total += (x0 * y1 - y0 * x1).atan2(x0 * x1 + y0 * y1);
        (x0, y0) = (x1, y1);
    }
    Ok((total / (2.0 * PI)).round() as i32)
}
