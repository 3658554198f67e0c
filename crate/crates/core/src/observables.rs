//! Pair-density observables and the overlap with the Hermitian ground state.
//!
//! For the quenched vacuum every sector obeys `|b|² = q²`, `|a|² = 1 + q²` with
//! `q = 2Δ sin k · sin(ε_k t)/ε_k`, which is real in every regime (it becomes a
//! `sinh` quotient for imaginary `ε_k` and `2Δ sin k · t` at the exceptional
//! point). The closed forms below are written in terms of `q`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve_vacuum, sinc, ManyBodyState, GROWTH_LIMIT};
use crate::error::{Error, Result};
use crate::model::{
    bogoliubov_angle, dispersion_nh, ground_mode_h, is_self_paired, HermParams, MomentumGrid,
    NhParams, C64,
};
use crate::quadrature::simpson;

pub const DEFAULT_TIME_INTERVALS: usize = 2048;
pub const DEFAULT_MOMENTUM_INTERVALS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub time_intervals: usize,
    pub momentum_intervals: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            time_intervals: DEFAULT_TIME_INTERVALS,
            momentum_intervals: DEFAULT_MOMENTUM_INTERVALS,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Period {
    /// `π / ε_k` for real nonzero `ε_k`.
    Finite(f64),
    /// Exceptional point.
    Infinite,
    /// Imaginary `ε_k`: monotone growth, no period.
    Aperiodic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairDensityRecord {
    pub k: f64,
    pub t: f64,
    /// `N_k(t) ∈ [0, 1/2]`.
    pub n_k: f64,
    /// Dirac norm squared of the evolved sector.
    pub norm_sq: f64,
    pub period: Period,
}

fn period_of(k: f64, p: &NhParams) -> Period {
    let eps = dispersion_nh(k, p);
    if eps.is_zero() {
        Period::Infinite
    } else if eps.is_real() {
        Period::Finite(PI / eps.value().re)
    } else {
        Period::Aperiodic
    }
}

/// `q = 2Δ sin k · t · sinc(ε_k t)`.
fn pair_amplitude(k: f64, p: &NhParams, t: f64) -> Result<f64> {
    let eps = dispersion_nh(k, p).value();
    if eps.im * t.abs() >= GROWTH_LIMIT {
        return Err(Error::NumericRange(format!(
            "|Im ε|·t = {} exceeds {GROWTH_LIMIT}",
            eps.im * t.abs()
        )));
    }
    if is_self_paired(k) {
        return Ok(0.0);
    }
    Ok(2.0 * p.delta * k.sin() * t * sinc(eps * t).re)
}

/// `N_k(t) = [Δ sin k sin(tε_k)]² / [(ε_k/2)² + 2(Δ sin k sin(tε_k))²]`,
/// continued to `τ²/(1 + 2τ²)` at the exceptional point.
pub fn pair_density(k: f64, p: &NhParams, t: f64) -> Result<PairDensityRecord> {
    let q2 = pair_amplitude(k, p, t)?.powi(2);
    Ok(PairDensityRecord {
        k,
        t,
        n_k: q2 / (1.0 + 2.0 * q2),
        norm_sq: 1.0 + 2.0 * q2,
        period: period_of(k, p),
    })
}

/// `⟨ψ_k(t)|ψ_k(t)⟩ = 2|sin 2θ_k|² |sin(ε_k t)|² + 1`; at the exceptional
/// point, where the angle does not exist, `1 + 2τ²`.
pub fn sector_norm(k: f64, p: &NhParams, t: f64) -> Result<f64> {
    match bogoliubov_angle(k, p) {
        Ok(mode) => {
            let eps = dispersion_nh(k, p).value();
            if eps.im * t.abs() >= GROWTH_LIMIT {
                return Err(Error::NumericRange("sector norm overflow".into()));
            }
            let s = (eps * t).sin().norm_sqr();
            Ok(2.0 * mode.sin_2theta().norm_sqr() * s + 1.0)
        }
        Err(Error::DefectiveMode { .. }) => {
            let tau = 2.0 * p.delta * k.sin() * t;
            Ok(1.0 + 2.0 * tau * tau)
        }
        Err(e) => Err(e),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum AverageKind {
    /// Time average `N̄_k` at momentum `k`.
    OverTime { k: f64 },
    /// Brillouin-zone average `N̄(t)` at time `t`.
    OverMomentum { t: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AverageRecord {
    pub kind: AverageKind,
    pub value: f64,
    pub rule: &'static str,
    pub intervals: usize,
    pub est_error: f64,
}

/// `N̄_k = (1/T_k) ∫_0^{T_k} N_k(t) dt` over one period `T_k = π/ε_k`.
pub fn avg_pair_density_time(
    k: f64,
    p: &NhParams,
    quad: &QuadratureSettings,
) -> Result<AverageRecord> {
    let kind = AverageKind::OverTime { k };
    let period = match period_of(k, p) {
        Period::Finite(period) => period,
        Period::Infinite => {
            if is_self_paired(k) || p.delta == 0.0 {
                // no pairing: N_k vanishes identically
                return Ok(AverageRecord {
                    kind,
                    value: 0.0,
                    rule: "exact",
                    intervals: 0,
                    est_error: 0.0,
                });
            }
            return Err(Error::InfinitePeriod { k });
        }
        Period::Aperiodic => {
            return Err(Error::Validation(format!(
                "ε_k is imaginary at k = {k}; N_k has no period"
            )))
        }
    };
    if is_self_paired(k) || p.delta == 0.0 {
        return Ok(AverageRecord {
            kind,
            value: 0.0,
            rule: "exact",
            intervals: 0,
            est_error: 0.0,
        });
    }
    let q = simpson(
        |t| pair_density(k, p, t).map(|r| r.n_k),
        0.0,
        period,
        quad.time_intervals,
    )?;
    Ok(AverageRecord {
        kind,
        value: q.value / period,
        rule: "composite-simpson",
        intervals: q.intervals,
        est_error: q.est_error / period,
    })
}

/// `N̄(t) = (1/π) ∫_0^π N_k(t) dk`.
pub fn avg_pair_density_momentum(
    p: &NhParams,
    t: f64,
    quad: &QuadratureSettings,
) -> Result<AverageRecord> {
    if !t.is_finite() {
        return Err(Error::Validation(format!("time must be finite, got {t}")));
    }
    let q = simpson(
        |k| pair_density(k, p, t).map(|r| r.n_k),
        0.0,
        PI,
        quad.momentum_intervals,
    )?;
    Ok(AverageRecord {
        kind: AverageKind::OverMomentum { t },
        value: q.value / PI,
        rule: "composite-simpson",
        intervals: q.intervals,
        est_error: q.est_error / PI,
    })
}

/// `N(t) = Σ_{0<k<π} N_k(t)` over the grid's paired momenta.
pub fn total_pair_number(p: &NhParams, grid: &MomentumGrid, t: f64) -> Result<f64> {
    grid.paired()
        .iter()
        .map(|&k| pair_density(k, p, t).map(|r| r.n_k))
        .sum()
}

/// How a self-paired momentum (`k = 0` or `π`) enters `O(t)`.
///
/// There the quenched state stays in the empty mode, so the momentum
/// contributes 1 when the reference mode is empty and 0 when it is filled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelfPairedRule {
    /// The reference mode is the `b = 0` limit of `(1, b_k^-)/√Ω`, i.e. the
    /// empty mode, for every parameter set.
    #[default]
    Empty,
    /// The reference mode is the true single-mode ground state: filled iff
    /// `μ_h < J cos k`.
    Occupation,
}

impl SelfPairedRule {
    fn reference_mode(self, k: f64, hp: &HermParams) -> [f64; 2] {
        match self {
            SelfPairedRule::Empty => [1.0, 0.0],
            SelfPairedRule::Occupation => ground_mode_h(k, hp),
        }
    }
}

/// Modulus of the Dirac overlap between the Hermitian ground mode and a
/// sector state, after normalizing the latter.
pub fn overlap_with_ground(k: f64, hp: &HermParams, a: C64, b: C64) -> f64 {
    let g = ground_mode_h(k, hp);
    overlap_with(g, a, b)
}

fn overlap_with(g: [f64; 2], a: C64, b: C64) -> f64 {
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    ((g[0] * a + g[1] * b) / n).norm().min(1.0)
}

/// `O_k(t) = |⟨φ_k^-|ψ_k(t)⟩|` with `ψ_k(t)` normalized.
pub fn overlap_mode(k: f64, p: &NhParams, hp: &HermParams, t: f64) -> Result<f64> {
    if is_self_paired(k) || k <= 0.0 || k >= PI {
        return Err(Error::Validation(format!(
            "overlap_mode needs 0 < k < π, got {k}"
        )));
    }
    let s = evolve_vacuum(k, p, t)?;
    Ok(overlap_with_ground(k, hp, s.a, s.b))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeOverlap {
    pub k: f64,
    pub o_k: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapRecord {
    pub t: f64,
    /// One entry per grid momentum in `[0, π]`, ascending.
    pub modes: Vec<ModeOverlap>,
    /// `O(t) = (1/N)[O_0 + 2 Σ_{0<k<π} O_k + O_π]`.
    pub o_total: f64,
}

/// Overlap diagnostic of a product state that covers `grid`.
pub fn overlap_of_state(
    hp: &HermParams,
    grid: &MomentumGrid,
    t: f64,
    state: &ManyBodyState,
    rule: SelfPairedRule,
) -> OverlapRecord {
    let mut modes = Vec::with_capacity(state.paired.len() + state.self_paired.len());
    let mut sum = 0.0;
    for &(k, [e, o]) in &state.self_paired {
        let o_k = overlap_with(rule.reference_mode(k, hp), e, o);
        sum += o_k;
        modes.push(ModeOverlap { k, o_k });
    }
    for (k, s) in &state.paired {
        let o_k = overlap_with_ground(*k, hp, s.a, s.b);
        sum += 2.0 * o_k;
        modes.push(ModeOverlap { k: *k, o_k });
    }
    modes.sort_by(|x, y| x.k.total_cmp(&y.k));
    OverlapRecord {
        t,
        modes,
        o_total: sum / grid.n_sites() as f64,
    }
}

/// `O(t)` for the quenched vacuum.
pub fn overlap_total(
    p: &NhParams,
    hp: &HermParams,
    grid: &MomentumGrid,
    t: f64,
    rule: SelfPairedRule,
) -> Result<OverlapRecord> {
    let paired = grid
        .paired()
        .iter()
        .map(|&k| Ok((k, evolve_vacuum(k, p, t)?)))
        .collect::<Result<Vec<_>>>()?;
    let state = ManyBodyState {
        paired,
        // the empty self-paired modes only pick up a phase
        self_paired: grid
            .self_paired()
            .iter()
            .map(|&k| (k, [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]))
            .collect(),
    };
    Ok(overlap_of_state(hp, grid, t, &state, rule))
}
