//! Exact sector propagators and product-state evolution.
//!
//! Every sector generator `M` is traceless with `M² = ε² I`, so
//!
//! ```text
//! exp(−iMt) = cos(εt) I − i t sinc(εt) M
//! ```
//!
//! holds for real `ε`, imaginary `ε`, and `ε = 0`, where `M` is nilpotent and
//! the propagator collapses to `I − iMt`. Both `cos` and `sinc` are even, so
//! the branch of `ε` never matters.

use crate::error::{Error, Result};
use crate::model::{
    dispersion_h, dispersion_nh, is_self_paired, sector_matrix_h, sector_matrix_nh, HermParams,
    MomentumGrid, NhParams, SectorMatrix, C64,
};

/// Largest `|Im ε| · |t|` accepted before the broken-phase growth overflows.
pub const GROWTH_LIMIT: f64 = 700.0;

/// Below this `|εt|` the sinc factor is evaluated by its Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-4;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// `sin z / z`, continuous through `z = 0`.
pub fn sinc(z: C64) -> C64 {
    if z.norm() < SERIES_THRESHOLD {
        let z2 = z * z;
        ONE - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// Occupied odd-parity state of a pair sector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OddOccupation {
    /// `|10⟩ = c_k† |0⟩`
    Plus,
    /// `|01⟩ = c_{-k}† |0⟩`
    Minus,
}

/// State of one `(k, -k)` sector.
///
/// Even states carry the amplitudes of `|00⟩` and `|11⟩`. Odd states are
/// zero-energy eigenstates; `a` then holds their amplitude and `b` is unused.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorState {
    pub a: C64,
    pub b: C64,
    pub odd: Option<OddOccupation>,
}

impl SectorState {
    pub fn even(a: C64, b: C64) -> Self {
        Self { a, b, odd: None }
    }

    pub fn vacuum() -> Self {
        Self::even(ONE, ZERO)
    }

    pub fn odd(which: OddOccupation) -> Self {
        Self {
            a: ONE,
            b: ZERO,
            odd: Some(which),
        }
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        [self.a, self.b]
    }

    /// Dirac norm squared.
    pub fn norm_sqr(&self) -> f64 {
        match self.odd {
            Some(_) => self.a.norm_sqr(),
            None => self.a.norm_sqr() + self.b.norm_sqr(),
        }
    }

    /// Copy scaled to unit Dirac norm.
    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        Self {
            a: self.a / n,
            b: self.b / n,
            odd: self.odd,
        }
    }

    /// `|b|² / (|a|² + |b|²)`, the pair occupation `⟨n_k n_{-k}⟩`.
    pub fn pair_fraction(&self) -> f64 {
        match self.odd {
            Some(_) => 0.0,
            None => self.b.norm_sqr() / self.norm_sqr(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropagatorRegime {
    Generic,
    /// `|εt|` below [`SERIES_THRESHOLD`], including the exceptional point.
    NearEpSeries,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorPropagator {
    pub matrix: SectorMatrix,
    pub k: f64,
    pub t: f64,
    pub regime: PropagatorRegime,
}

impl SectorPropagator {
    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        self.matrix.apply(v)
    }
}

/// `exp(−iMt)` for a traceless `M` with `M² = eps² I`.
pub fn traceless_exp(
    m: &SectorMatrix,
    eps: C64,
    t: f64,
) -> Result<(SectorMatrix, PropagatorRegime)> {
    if !t.is_finite() {
        return Err(Error::Validation(format!("time must be finite, got {t}")));
    }
    if eps.im.abs() * t.abs() >= GROWTH_LIMIT {
        return Err(Error::NumericRange(format!(
            "|Im ε|·t = {} exceeds {GROWTH_LIMIT}",
            eps.im.abs() * t.abs()
        )));
    }
    let x = eps * t;
    let regime = if x.norm() < SERIES_THRESHOLD {
        PropagatorRegime::NearEpSeries
    } else {
        PropagatorRegime::Generic
    };
    let u = SectorMatrix::identity()
        .scale(x.cos())
        .add(&m.scale(C64::new(0.0, -t) * sinc(x)));
    Ok((u, regime))
}

pub fn sector_propagator(k: f64, p: &NhParams, t: f64) -> Result<SectorPropagator> {
    let m = sector_matrix_nh(k, p);
    let (matrix, regime) = traceless_exp(&m, dispersion_nh(k, p).value(), t)?;
    Ok(SectorPropagator {
        matrix,
        k,
        t,
        regime,
    })
}

/// Propagator of the Hermitian sector; unitary.
pub fn sector_propagator_h(k: f64, p: &HermParams, t: f64) -> Result<SectorPropagator> {
    let m = sector_matrix_h(k, p);
    let eps = C64::new(dispersion_h(k, p), 0.0);
    let (matrix, regime) = traceless_exp(&m, eps, t)?;
    Ok(SectorPropagator {
        matrix,
        k,
        t,
        regime,
    })
}

/// `U_k(t) |00⟩`.
///
/// Off the exceptional point this equals
/// `(e^{iεt} − 2i sin(εt) sin²θ_k) |00⟩ − sin 2θ_k sin(εt) |11⟩`; at `k_c` it
/// is `(1 + iτ)|00⟩ − iτ|11⟩` with `τ = 2Δ²t/μ`.
pub fn evolve_vacuum(k: f64, p: &NhParams, t: f64) -> Result<SectorState> {
    let u = sector_propagator(k, p, t)?;
    let [a, b] = u.apply([ONE, ZERO]);
    Ok(SectorState::even(a, b))
}

pub fn evolve_state(k: f64, p: &NhParams, t: f64, s: &SectorState) -> Result<SectorState> {
    let u = sector_propagator(k, p, t)?;
    if s.odd.is_some() {
        return Ok(*s);
    }
    let [a, b] = u.apply(s.amplitudes());
    Ok(SectorState::even(a, b))
}

/// Product state over all sectors of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ManyBodyState {
    /// One entry per paired momentum `k ∈ (0, π)`, in grid order.
    pub paired: Vec<(f64, SectorState)>,
    /// `(k, [empty, occupied])` for each self-paired momentum.
    pub self_paired: Vec<(f64, [C64; 2])>,
}

impl ManyBodyState {
    pub fn vacuum(grid: &MomentumGrid) -> Self {
        Self {
            paired: grid
                .paired()
                .iter()
                .map(|&k| (k, SectorState::vacuum()))
                .collect(),
            self_paired: grid
                .self_paired()
                .iter()
                .map(|&k| (k, [ONE, ZERO]))
                .collect(),
        }
    }

    /// Dirac norm squared of the full product.
    pub fn norm_sqr(&self) -> f64 {
        let pairs: f64 = self.paired.iter().map(|(_, s)| s.norm_sqr()).product();
        let singles: f64 = self
            .self_paired
            .iter()
            .map(|(_, [e, o])| e.norm_sqr() + o.norm_sqr())
            .product();
        pairs * singles
    }

    /// `Σ_{k>0} ⟨n_k n_{-k}⟩` in the normalized state.
    pub fn pair_number(&self) -> f64 {
        self.paired.iter().map(|(_, s)| s.pair_fraction()).sum()
    }

    fn covers(&self, grid: &MomentumGrid) -> bool {
        let same = |a: &[f64], b: &mut dyn Iterator<Item = f64>| {
            let b: Vec<f64> = b.collect();
            a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12)
        };
        same(grid.paired(), &mut self.paired.iter().map(|(k, _)| *k))
            && same(
                grid.self_paired(),
                &mut self.self_paired.iter().map(|(k, _)| *k),
            )
    }
}

/// Sector-wise evolution. Self-paired momenta have no pairing term; their
/// occupied amplitude picks up `e^{−2i(μ − J cos k)t}`.
pub fn evolve_many_body(
    p: &NhParams,
    grid: &MomentumGrid,
    t: f64,
    s: &ManyBodyState,
) -> Result<ManyBodyState> {
    if !s.covers(grid) {
        return Err(Error::Validation(
            "state does not cover the momentum grid".into(),
        ));
    }
    let paired = s
        .paired
        .iter()
        .map(|(k, st)| Ok((*k, evolve_state(*k, p, t, st)?)))
        .collect::<Result<Vec<_>>>()?;
    let self_paired = s
        .self_paired
        .iter()
        .map(|&(k, [e, o])| {
            debug_assert!(is_self_paired(k));
            let phase = C64::new(0.0, -2.0 * (p.mu - p.j * k.cos()) * t).exp();
            (k, [e, o * phase])
        })
        .collect();
    Ok(ManyBodyState {
        paired,
        self_paired,
    })
}
