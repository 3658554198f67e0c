//! Composite Simpson quadrature with a Richardson error estimate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    /// Number of Simpson sub-intervals (even).
    pub intervals: usize,
    pub value: f64,
    /// `|S_n − S_{n/2}| / 15`.
    pub est_error: f64,
}

/// Integrates `f` over `[a, b]` with `intervals` Simpson panels, reporting the
/// difference against the half-resolution rule as the error estimate.
pub fn simpson<F>(f: F, a: f64, b: f64, intervals: usize) -> Result<Quadrature>
where
    F: Fn(f64) -> Result<f64>,
{
    if intervals < 4 || !intervals.is_multiple_of(4) {
        return Err(Error::Validation(format!(
            "Simpson needs a positive multiple of 4 intervals, got {intervals}"
        )));
    }
    let h = (b - a) / intervals as f64;
    let samples = (0..=intervals)
        .map(|i| f(a + i as f64 * h))
        .collect::<Result<Vec<f64>>>()?;
    let fine = simpson_sum(&samples, h, 1);
    let coarse = simpson_sum(&samples, 2.0 * h, 2);
    Ok(Quadrature {
        intervals,
        value: fine,
        est_error: (fine - coarse).abs() / 15.0,
    })
}

fn simpson_sum(samples: &[f64], h: f64, stride: usize) -> f64 {
    let pts: Vec<f64> = samples.iter().step_by(stride).copied().collect();
    let n = pts.len() - 1;
    let mut acc = pts[0] + pts[n];
    for (i, v) in pts.iter().enumerate().take(n).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}
