//! Chain parameters, momentum grids and the exact per-momentum solution.
//!
//! Each pair of momenta `(k, -k)` with `0 < k < π` spans a four-dimensional
//! Fock space. The odd-parity states `|10⟩, |01⟩` have zero energy, so all
//! structure sits in the even-parity block on the ordered basis
//! `(|00⟩, |11⟩)`, where `|11⟩ = c_k† c_{-k}† |0⟩`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Below this `|sin k|` a momentum is treated as one of the self-paired
/// points `0` or `π`.
pub const SELF_PAIRED_TOL: f64 = 1e-12;

/// Couplings of the chain with imaginary pairing `iΔ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NhParams {
    pub j: f64,
    pub delta: f64,
    pub mu: f64,
}

impl NhParams {
    pub fn new(j: f64, delta: f64, mu: f64) -> Result<Self> {
        check_finite(&[("J", j), ("delta", delta), ("mu", mu)])?;
        Ok(Self { j, delta, mu })
    }

    /// Scale used to decide when a computed `ε_k²` is zero up to roundoff.
    fn energy_scale_sq(&self) -> f64 {
        let a = self.mu.abs() + self.j.abs();
        a * a + self.delta * self.delta
    }
}

/// Couplings of the ordinary (Hermitian) Kitaev chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermParams {
    pub j: f64,
    pub delta_h: f64,
    pub mu_h: f64,
}

impl HermParams {
    pub fn new(j: f64, delta_h: f64, mu_h: f64) -> Result<Self> {
        check_finite(&[("J", j), ("delta_h", delta_h), ("mu_h", mu_h)])?;
        Ok(Self { j, delta_h, mu_h })
    }
}

fn check_finite(values: &[(&str, f64)]) -> Result<()> {
    for (name, v) in values {
        if !v.is_finite() {
            return Err(Error::Validation(format!("{name} must be finite, got {v}")));
        }
    }
    Ok(())
}

/// The allowed momenta `2πm/N` of a periodic ring, reduced to `(-π, π]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumGrid {
    n_sites: usize,
    paired: Vec<f64>,
    self_paired: Vec<f64>,
}

impl MomentumGrid {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Representatives `k ∈ (0, π)` of the `(k, -k)` pairs, ascending.
    pub fn paired(&self) -> &[f64] {
        &self.paired
    }

    /// The subset of `{0, π}` present on the grid.
    pub fn self_paired(&self) -> &[f64] {
        &self.self_paired
    }

    /// Every grid momentum in `(-π, π]`, ascending.
    pub fn all(&self) -> Vec<f64> {
        let mut ks: Vec<f64> = self
            .paired
            .iter()
            .flat_map(|&k| [k, -k])
            .chain(self.self_paired.iter().copied())
            .collect();
        ks.sort_by(f64::total_cmp);
        ks
    }
}

pub fn momentum_grid(n_sites: usize) -> Result<MomentumGrid> {
    if n_sites < 2 {
        return Err(Error::Validation(format!(
            "a ring needs at least 2 sites, got {n_sites}"
        )));
    }
    let n = n_sites as f64;
    let paired = (1..n_sites.div_ceil(2))
        .map(|m| 2.0 * PI * m as f64 / n)
        .collect();
    let mut self_paired = vec![0.0];
    if n_sites.is_multiple_of(2) {
        self_paired.push(PI);
    }
    Ok(MomentumGrid {
        n_sites,
        paired,
        self_paired,
    })
}

pub fn is_self_paired(k: f64) -> bool {
    k.sin().abs() < SELF_PAIRED_TOL
}

/// `Δ sin k`, forced to an exact zero at the self-paired momenta.
fn pairing_amplitude(k: f64, delta: f64) -> f64 {
    if is_self_paired(k) {
        0.0
    } else {
        delta * k.sin()
    }
}

/// A 2×2 complex matrix on the even-parity basis `(|00⟩, |11⟩)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorMatrix(pub [[C64; 2]; 2]);

impl SectorMatrix {
    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        SectorMatrix([[one, ZERO], [ZERO, one]])
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.0;
        SectorMatrix([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        SectorMatrix([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        SectorMatrix(out)
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Even-parity block of the sector Hamiltonian with imaginary pairing:
/// `2 [[J cos k − μ, −Δ sin k], [Δ sin k, μ − J cos k]]`.
pub fn sector_matrix_nh(k: f64, p: &NhParams) -> SectorMatrix {
    let d = p.j * k.cos() - p.mu;
    let s = pairing_amplitude(k, p.delta);
    SectorMatrix([
        [C64::new(2.0 * d, 0.0), C64::new(-2.0 * s, 0.0)],
        [C64::new(2.0 * s, 0.0), C64::new(-2.0 * d, 0.0)],
    ])
}

/// Even-parity block of the Hermitian sector Hamiltonian; real symmetric.
pub fn sector_matrix_h(k: f64, p: &HermParams) -> SectorMatrix {
    let d = p.j * k.cos() - p.mu_h;
    let s = pairing_amplitude(k, p.delta_h);
    SectorMatrix([
        [C64::new(2.0 * d, 0.0), C64::new(2.0 * s, 0.0)],
        [C64::new(2.0 * s, 0.0), C64::new(-2.0 * d, 0.0)],
    ])
}

/// Quasiparticle energy `ε_k`; either real and non-negative, or purely
/// imaginary with positive imaginary part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexEnergy(pub C64);

impl ComplexEnergy {
    pub fn value(&self) -> C64 {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0 == ZERO
    }

    pub fn is_real(&self) -> bool {
        self.0.im == 0.0
    }

    pub fn squared(&self) -> f64 {
        let z = self.0;
        z.re * z.re - z.im * z.im
    }
}

/// `(μ − J cos k)² − Δ² sin² k`, i.e. `ε_k² / 4`, with values indistinguishable
/// from roundoff snapped to zero.
pub fn quarter_dispersion_sq(k: f64, p: &NhParams) -> f64 {
    let d = p.mu - p.j * k.cos();
    let s = pairing_amplitude(k, p.delta);
    let f = d * d - s * s;
    if f.abs() <= 64.0 * f64::EPSILON * p.energy_scale_sq() {
        0.0
    } else {
        f
    }
}

pub fn dispersion_nh(k: f64, p: &NhParams) -> ComplexEnergy {
    let f = quarter_dispersion_sq(k, p);
    if f >= 0.0 {
        ComplexEnergy(C64::new(2.0 * f.sqrt(), 0.0))
    } else {
        ComplexEnergy(C64::new(0.0, 2.0 * (-f).sqrt()))
    }
}

pub fn dispersion_h(k: f64, p: &HermParams) -> f64 {
    let d = p.mu_h - p.j * k.cos();
    let s = pairing_amplitude(k, p.delta_h);
    2.0 * d.hypot(s)
}

/// Complex Bogoliubov angle, stored as `(cos θ_k, sin θ_k)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BogoliubovMode {
    pub cos_theta: C64,
    pub sin_theta: C64,
}

impl BogoliubovMode {
    pub fn cos_2theta(&self) -> C64 {
        self.cos_theta * self.cos_theta - self.sin_theta * self.sin_theta
    }

    pub fn sin_2theta(&self) -> C64 {
        2.0 * self.sin_theta * self.cos_theta
    }
}

/// Solves `tan 2θ_k = iΔ sin k / (μ − J cos k)` on the branch with
/// `cos 2θ = 2(μ − J cos k)/ε_k` and `sin 2θ = 2iΔ sin k/ε_k`.
pub fn bogoliubov_angle(k: f64, p: &NhParams) -> Result<BogoliubovMode> {
    let eps = dispersion_nh(k, p);
    if eps.is_zero() {
        return Err(Error::DefectiveMode { k });
    }
    let e = eps.value();
    let cos2 = C64::new(2.0 * (p.mu - p.j * k.cos()), 0.0) / e;
    let sin2 = C64::new(0.0, 2.0 * pairing_amplitude(k, p.delta)) / e;
    let one = C64::new(1.0, 0.0);
    // near cos 2θ = −1 the half-angle cosine cancels; start from sin θ there
    if cos2.re >= 0.0 {
        let cos_theta = ((one + cos2) / 2.0).sqrt();
        Ok(BogoliubovMode {
            cos_theta,
            sin_theta: sin2 / (2.0 * cos_theta),
        })
    } else {
        let sin_theta = ((one - cos2) / 2.0).sqrt();
        Ok(BogoliubovMode {
            cos_theta: sin2 / (2.0 * sin_theta),
            sin_theta,
        })
    }
}

/// Coefficients of the even-sector eigenstates `(1, β^±)/√Ω^±`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenAmplitudes {
    pub beta_plus: C64,
    pub beta_minus: C64,
    pub omega_plus: f64,
    pub omega_minus: f64,
}

impl EigenAmplitudes {
    fn from_betas(beta_plus: C64, beta_minus: C64) -> Self {
        Self {
            beta_plus,
            beta_minus,
            omega_plus: 1.0 + beta_plus.norm_sqr(),
            omega_minus: 1.0 + beta_minus.norm_sqr(),
        }
    }

    /// Dirac-normalized eigenvector for energy `+ε` (`plus = true`) or `−ε`.
    pub fn state(&self, plus: bool) -> [C64; 2] {
        let (beta, omega) = if plus {
            (self.beta_plus, self.omega_plus)
        } else {
            (self.beta_minus, self.omega_minus)
        };
        let n = omega.sqrt();
        [C64::new(1.0 / n, 0.0), beta / n]
    }
}

/// `β_k^± = Δ sin k / (J cos k − μ ± ε_k/2)`; eigenvalue `±ε_k`.
///
/// Without pairing (`Δ sin k = 0`) both coefficients are zero and the
/// eigenstates are the basis states.
pub fn eigen_amplitudes_nh(k: f64, p: &NhParams) -> Result<EigenAmplitudes> {
    let eps = dispersion_nh(k, p);
    if eps.is_zero() {
        return Err(Error::DefectiveMode { k });
    }
    let s = pairing_amplitude(k, p.delta);
    if s == 0.0 {
        return Ok(EigenAmplitudes::from_betas(ZERO, ZERO));
    }
    let d = C64::new(p.j * k.cos() - p.mu, 0.0);
    let half = eps.value() / 2.0;
    let s = C64::new(s, 0.0);
    // β^+β^- = 1: take the larger denominator and invert for the other
    if (d + half).norm() >= (d - half).norm() {
        let bp = s / (d + half);
        Ok(EigenAmplitudes::from_betas(bp, bp.inv()))
    } else {
        let bm = s / (d - half);
        Ok(EigenAmplitudes::from_betas(bm.inv(), bm))
    }
}

/// Hermitian analogue: `b_k^± = Δ_h sin k / (J cos k − μ_h ± ε_h/2)`.
///
/// The coefficient whose denominator does not cancel is evaluated directly
/// and the other follows from `b^+ b^- = −1`.
pub fn eigen_amplitudes_h(k: f64, p: &HermParams) -> EigenAmplitudes {
    let s = pairing_amplitude(k, p.delta_h);
    if s == 0.0 {
        return EigenAmplitudes::from_betas(ZERO, ZERO);
    }
    let d = p.j * k.cos() - p.mu_h;
    let r = d.hypot(s);
    let (bp, bm) = if d >= 0.0 {
        let bp = s / (d + r);
        (bp, -1.0 / bp)
    } else {
        let bm = s / (d - r);
        (-1.0 / bm, bm)
    };
    EigenAmplitudes::from_betas(C64::new(bp, 0.0), C64::new(bm, 0.0))
}

/// Unit-norm ground mode of the Hermitian sector at momentum `k`.
///
/// For `0 < k < π` this is the eigenvector of [`sector_matrix_h`] with
/// eigenvalue `−ε_h(k)`, sign-fixed so the `|00⟩` amplitude is non-negative.
/// At a self-paired momentum (or with no pairing) the mode is a basis state:
/// occupied iff `μ_h < J cos k`.
pub fn ground_mode_h(k: f64, p: &HermParams) -> [f64; 2] {
    let d = p.j * k.cos() - p.mu_h;
    let s = pairing_amplitude(k, p.delta_h);
    if s == 0.0 {
        return if d > 0.0 { [0.0, 1.0] } else { [1.0, 0.0] };
    }
    let r = d.hypot(s);
    // Two proportional forms of the same eigenvector; use the one free of
    // cancellation.
    let (x, y) = if d >= 0.0 { (s, -(d + r)) } else { (r - d, -s) };
    let n = x.hypot(y);
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    [sign * x / n, sign * y / n]
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn ep_point() -> NhParams {
        NhParams::new(1.0, 3f64.sqrt(), 2.0).unwrap()
    }

    #[test]
    fn grid_four_sites() {
        let g = momentum_grid(4).unwrap();
        assert_eq!(g.paired().len(), 1);
        assert!((g.paired()[0] - PI / 2.0).abs() < TOL);
        assert_eq!(g.self_paired(), &[0.0, PI]);
        assert_eq!(g.all().len(), 4);
    }

    #[test]
    fn common_grid_sizes() {
        let g = momentum_grid(61).unwrap();
        assert_eq!(g.paired().len(), 30);
        assert_eq!(g.self_paired(), &[0.0]);
        let g = momentum_grid(40).unwrap();
        assert_eq!(g.paired().len(), 19);
        assert_eq!(g.self_paired(), &[0.0, PI]);
    }

    #[test]
    fn grid_rejects_tiny_rings() {
        assert!(matches!(momentum_grid(1), Err(Error::Validation(_))));
        assert!(matches!(momentum_grid(0), Err(Error::Validation(_))));
        assert!(momentum_grid(2).unwrap().paired().is_empty());
    }

    #[test]
    fn grid_invariants() {
        for n in 2..50 {
            let g = momentum_grid(n).unwrap();
            assert_eq!(2 * g.paired().len() + g.self_paired().len(), n);
            assert!(g.paired().windows(2).all(|w| w[0] < w[1]));
            assert!(g.paired().iter().all(|&k| k > 0.0 && k < PI));
            for k in g.all() {
                let m = k * n as f64 / (2.0 * PI);
                assert!((m - m.round()).abs() < 1e-9);
                assert!(k > -PI && k <= PI);
            }
        }
    }

    #[test]
    fn nh_sector_matrix_examples() {
        let m = sector_matrix_nh(PI / 3.0, &ep_point());
        let want = [[-3.0, -3.0], [3.0, 3.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(m.0[i][j], C64::new(want[i][j], 0.0), 1e-12));
            }
        }
        let m = sector_matrix_nh(PI / 2.0, &ep_point());
        let r3 = 2.0 * 3f64.sqrt();
        let want = [[-4.0, -r3], [r3, 4.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(m.0[i][j], C64::new(want[i][j], 0.0), 1e-12));
            }
        }
        let p = NhParams::new(0.7, 1.3, -0.4).unwrap();
        let m = sector_matrix_nh(0.0, &p);
        assert_eq!(m.0[0][1], ZERO);
        assert_eq!(m.0[1][0], ZERO);
        assert!(close(m.0[0][0], C64::new(2.0 * (0.7 + 0.4), 0.0), TOL));
        assert!(close(m.0[1][1], C64::new(-2.0 * (0.7 + 0.4), 0.0), TOL));
        assert!(m.trace().norm() < TOL);
    }

    #[test]
    fn hermitian_sector_matrix_examples() {
        let m = sector_matrix_h(PI / 2.0, &HermParams::new(1.0, 1.0, 0.0).unwrap());
        assert!(close(m.0[0][0], ZERO, TOL) && close(m.0[1][1], ZERO, TOL));
        assert!(close(m.0[0][1], C64::new(2.0, 0.0), TOL));
        assert!(close(m.0[1][0], C64::new(2.0, 0.0), TOL));

        let m = sector_matrix_h(0.0, &HermParams::new(1.0, 1.0, -5.0).unwrap());
        assert!(close(m.0[0][0], C64::new(12.0, 0.0), TOL));
        assert!(close(m.0[1][1], C64::new(-12.0, 0.0), TOL));

        let r2 = 2f64.sqrt();
        let m = sector_matrix_h(PI / 4.0, &HermParams::new(1.0, 1.0, r2).unwrap());
        let want = [[-r2, r2], [r2, r2]];
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(m.0[i][j], C64::new(want[i][j], 0.0), 1e-12));
            }
        }
    }

    #[test]
    fn dispersion_examples() {
        assert!(dispersion_nh(PI / 3.0, &ep_point()).is_zero());
        assert!(close(
            dispersion_nh(PI / 2.0, &ep_point()).value(),
            C64::new(2.0, 0.0),
            TOL
        ));
        let broken = NhParams::new(1.0, 2.0, 1.0).unwrap();
        assert!(close(
            dispersion_nh(PI / 2.0, &broken).value(),
            C64::new(0.0, 2.0 * 3f64.sqrt()),
            TOL
        ));

        let h = HermParams::new(1.0, 1.0, 0.0).unwrap();
        assert!((dispersion_h(PI / 2.0, &h) - 2.0).abs() < TOL);
        let h = HermParams::new(1.0, 1.0, -5.0).unwrap();
        assert!((dispersion_h(0.0, &h) - 12.0).abs() < TOL);
        // direct substitution: 2√((√2 − √2/2)² + 1/2)
        let r2 = 2f64.sqrt();
        let h = HermParams::new(1.0, 1.0, r2).unwrap();
        let want = 2.0 * ((r2 - r2 / 2.0).powi(2) + 0.5).sqrt();
        assert!((dispersion_h(PI / 4.0, &h) - want).abs() < TOL);
        assert!((want - 2.0).abs() < TOL);
    }

    #[test]
    fn bogoliubov_examples() {
        let p = NhParams::new(1.0, 0.8, 2.5).unwrap();
        for k in [0.0, PI] {
            let m = bogoliubov_angle(k, &p).unwrap();
            assert!(close(m.cos_theta, C64::new(1.0, 0.0), TOL));
            assert!(close(m.sin_theta, ZERO, TOL));
        }
        let m = bogoliubov_angle(PI / 2.0, &ep_point()).unwrap();
        let s2 = m.sin_2theta();
        assert!(close(s2 * s2, C64::new(-3.0, 0.0), 1e-12));
        assert!((s2.norm_sqr() - 3.0).abs() < 1e-12);
        let tan = s2 / m.cos_2theta();
        assert!(close(tan, C64::new(0.0, 3f64.sqrt() / 2.0), 1e-12));
        assert!(matches!(
            bogoliubov_angle(PI / 3.0, &ep_point()),
            Err(Error::DefectiveMode { .. })
        ));
    }

    #[test]
    fn eigen_amplitude_examples() {
        let a = eigen_amplitudes_nh(PI / 2.0, &ep_point()).unwrap();
        let r3 = 3f64.sqrt();
        assert!(close(a.beta_plus, C64::new(-r3, 0.0), 1e-12));
        assert!(close(a.beta_minus, C64::new(-1.0 / r3, 0.0), 1e-12));
        assert!(close(a.beta_plus * a.beta_minus, C64::new(1.0, 0.0), 1e-12));
        assert!((a.omega_plus - 4.0).abs() < 1e-12);

        let p = NhParams::new(1.0, 0.5, 0.3).unwrap();
        let a = eigen_amplitudes_nh(PI, &p).unwrap();
        assert_eq!(a.beta_plus, ZERO);
        assert_eq!(a.beta_minus, ZERO);

        assert!(matches!(
            eigen_amplitudes_nh(PI / 3.0, &ep_point()),
            Err(Error::DefectiveMode { .. })
        ));
    }

    #[test]
    fn eigenstates_satisfy_eigen_equation() {
        let p = ep_point();
        for k in [0.3, PI / 2.0, 2.0, 2.9] {
            let m = sector_matrix_nh(k, &p);
            let eps = dispersion_nh(k, &p).value();
            let a = eigen_amplitudes_nh(k, &p).unwrap();
            for (plus, lambda) in [(true, eps), (false, -eps)] {
                let v = a.state(plus);
                let mv = m.apply(v);
                assert!(close(mv[0], lambda * v[0], 1e-10));
                assert!(close(mv[1], lambda * v[1], 1e-10));
            }
        }
    }

    #[test]
    fn ground_mode_examples() {
        let g = ground_mode_h(PI / 2.0, &HermParams::new(1.0, 1.0, 0.0).unwrap());
        let r = 1.0 / 2f64.sqrt();
        assert!((g[0] - r).abs() < TOL && (g[1] + r).abs() < TOL);

        // topological: the k → 0 limit is the filled pair
        let g = ground_mode_h(1e-7, &HermParams::new(1.0, 1.0, 0.5).unwrap());
        assert!(g[0].abs() < 1e-6 && (g[1].abs() - 1.0).abs() < 1e-12);
        // trivial with μ_h > J: the k → 0 limit is empty
        let g = ground_mode_h(1e-7, &HermParams::new(1.0, 1.0, 5.0).unwrap());
        assert!((g[0] - 1.0).abs() < 1e-12 && g[1].abs() < 1e-6);
        // trivial with μ_h < −J: the chemical potential fills the mode
        let g = ground_mode_h(1e-7, &HermParams::new(1.0, 1.0, -5.0).unwrap());
        assert!(g[0].abs() < 1e-6 && (g[1].abs() - 1.0).abs() < 1e-12);

        // self-paired momenta follow the occupation rule
        let h = HermParams::new(1.0, 1.0, 0.5).unwrap();
        assert_eq!(ground_mode_h(0.0, &h), [0.0, 1.0]);
        assert_eq!(ground_mode_h(PI, &h), [1.0, 0.0]);
    }

    #[test]
    fn ground_mode_is_lowest_eigenvector() {
        let h = HermParams::new(1.0, -0.7, 0.4).unwrap();
        for k in [0.1, 0.9, PI / 2.0, 2.5, 3.1] {
            let g = ground_mode_h(k, &h);
            let v = [C64::new(g[0], 0.0), C64::new(g[1], 0.0)];
            let mv = sector_matrix_h(k, &h).apply(v);
            let e = -dispersion_h(k, &h);
            assert!(close(mv[0], e * v[0], 1e-12));
            assert!(close(mv[1], e * v[1], 1e-12));
            assert!((g[0].hypot(g[1]) - 1.0).abs() < 1e-14);
        }
    }
}
