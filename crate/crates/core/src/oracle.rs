//! Brute-force real-space many-body construction for small rings.
//!
//! Basis states are occupation bitstrings with site 0 as the least
//! significant bit. The state with occupied sites `j1 < j2 < ... < jm` is
//! `c_{j1}† c_{j2}† ... c_{jm}† |0⟩`, so `c_j` and `c_j†` carry the string
//! sign `(−1)^{#occupied sites below j}`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve_many_body, ManyBodyState};
use crate::error::{Error, Result};
use crate::model::{ground_mode_h, momentum_grid, HermParams, MomentumGrid, NhParams, C64};
use crate::observables::{overlap_of_state, SelfPairedRule};

pub const MAX_SITES: usize = 12;
pub const MAX_PT_SITES: usize = 10;
pub const MAX_CONSISTENCY_SITES: usize = 10;
pub const MAX_CONSISTENCY_TIME: f64 = 5.0;
pub const DEFAULT_ORACLE_TOL: f64 = 1e-8;

/// Target accuracy of the matrix exponential.
const EXPM_TOL: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ChainParams {
    NonHermitian(NhParams),
    Hermitian(HermParams),
}

impl ChainParams {
    fn j(&self) -> f64 {
        match self {
            ChainParams::NonHermitian(p) => p.j,
            ChainParams::Hermitian(p) => p.j,
        }
    }

    fn mu(&self) -> f64 {
        match self {
            ChainParams::NonHermitian(p) => p.mu,
            ChainParams::Hermitian(p) => p.mu_h,
        }
    }

    /// Coefficients of `c_j† c_{j+1}†` and `c_{j+1} c_j`.
    fn pairing(&self) -> (C64, C64) {
        match self {
            ChainParams::NonHermitian(p) => (C64::new(0.0, -p.delta), C64::new(0.0, -p.delta)),
            ChainParams::Hermitian(p) => (C64::new(0.0, -p.delta_h), C64::new(0.0, p.delta_h)),
        }
    }
}

/// Switches for negative controls.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseOptions {
    /// Treat the fermions as hard-core bosons. Breaks every fermionic check.
    pub drop_string_sign: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Create(usize),
    Annihilate(usize),
}

#[derive(Clone, Copy, Debug)]
struct Fermions {
    drop_string_sign: bool,
}

impl Fermions {
    fn sign(&self, state: usize, site: usize) -> f64 {
        if self.drop_string_sign {
            return 1.0;
        }
        let below = state & ((1usize << site) - 1);
        if below.count_ones().is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    fn apply(&self, op: Op, state: usize) -> Option<(usize, f64)> {
        match op {
            Op::Create(j) => (state >> j & 1 == 0).then(|| (state | 1 << j, self.sign(state, j))),
            Op::Annihilate(j) => {
                (state >> j & 1 == 1).then(|| (state & !(1 << j), self.sign(state, j)))
            }
        }
    }

    /// Applies `ops[0] ops[1] ... ops[n-1]` to a basis state (rightmost first).
    fn apply_string(&self, ops: &[Op], state: usize) -> Option<(usize, f64)> {
        ops.iter().rev().try_fold((state, 1.0), |(s, sign), &op| {
            self.apply(op, s).map(|(s2, sg)| (s2, sign * sg))
        })
    }
}

fn parity(state: usize) -> usize {
    state.count_ones() as usize % 2
}

/// `H` stored as its two fermion-parity blocks.
#[derive(Clone, Debug)]
pub struct DenseHamiltonian {
    pub sites: usize,
    pub params: ChainParams,
    pub options: DenseOptions,
    /// `blocks[0]` acts on even occupation, `blocks[1]` on odd.
    pub blocks: [DMatrix<C64>; 2],
    /// Basis states of each block, ascending.
    pub block_states: [Vec<usize>; 2],
    position: Vec<usize>,
}

impl DenseHamiltonian {
    pub fn dimension(&self) -> usize {
        1 << self.sites
    }

    /// `⟨row|H|col⟩` in the occupation basis.
    pub fn element(&self, row: usize, col: usize) -> C64 {
        if parity(row) != parity(col) {
            return ZERO;
        }
        self.blocks[parity(row)][(self.position[row], self.position[col])]
    }

    /// The full `2^L × 2^L` matrix.
    pub fn to_full(&self) -> DMatrix<C64> {
        let d = self.dimension();
        DMatrix::from_fn(d, d, |r, c| self.element(r, c))
    }

    /// Largest `‖H − H†‖` entry.
    pub fn hermiticity_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| (b - b.adjoint()).camax())
            .fold(0.0, f64::max)
    }
}

pub fn build_dense(params: ChainParams, sites: usize) -> Result<DenseHamiltonian> {
    build_dense_with(params, sites, DenseOptions::default())
}

pub fn build_dense_with(
    params: ChainParams,
    sites: usize,
    options: DenseOptions,
) -> Result<DenseHamiltonian> {
    if !(2..=MAX_SITES).contains(&sites) {
        return Err(Error::Validation(format!(
            "dense construction needs 2 ≤ L ≤ {MAX_SITES}, got {sites}"
        )));
    }
    let dim = 1usize << sites;
    let mut block_states: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    let mut position = vec![0; dim];
    for (s, pos) in position.iter_mut().enumerate() {
        let b = parity(s);
        *pos = block_states[b].len();
        block_states[b].push(s);
    }

    let j = params.j();
    let mu = params.mu();
    let (create_pair, annihilate_pair) = params.pairing();
    let mut terms: Vec<(C64, Vec<Op>)> = Vec::new();
    for site in 0..sites {
        let next = (site + 1) % sites;
        terms.push((
            C64::new(-j, 0.0),
            vec![Op::Create(site), Op::Annihilate(next)],
        ));
        terms.push((
            C64::new(-j, 0.0),
            vec![Op::Create(next), Op::Annihilate(site)],
        ));
        terms.push((create_pair, vec![Op::Create(site), Op::Create(next)]));
        terms.push((
            annihilate_pair,
            vec![Op::Annihilate(next), Op::Annihilate(site)],
        ));
    }

    let f = Fermions {
        drop_string_sign: options.drop_string_sign,
    };
    let blocks = [0, 1].map(|b| {
        let states = &block_states[b];
        let mut m = DMatrix::from_element(states.len(), states.len(), ZERO);
        for (col, &s) in states.iter().enumerate() {
            let n = s.count_ones() as f64;
            m[(col, col)] += C64::new(mu * (2.0 * n - sites as f64), 0.0);
            for (coef, ops) in &terms {
                if let Some((out, sign)) = f.apply_string(ops, s) {
                    m[(position[out], col)] += coef * sign;
                }
            }
        }
        m
    });

    Ok(DenseHamiltonian {
        sites,
        params,
        options,
        blocks,
        block_states,
        position,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    pub sites: usize,
    pub amplitudes: DVector<C64>,
}

impl DenseState {
    pub fn vacuum(sites: usize) -> Self {
        let mut amplitudes = DVector::from_element(1 << sites, ZERO);
        amplitudes[0] = C64::new(1.0, 0.0);
        Self { sites, amplitudes }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }
}

fn one_norm(m: &DMatrix<C64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn expm_scaled(a: &DMatrix<C64>, squarings: u32) -> Result<DMatrix<C64>> {
    let n = a.nrows();
    let scaled = a.scale(0.5f64.powi(squarings as i32));
    let mut sum = DMatrix::<C64>::identity(n, n);
    let mut term = DMatrix::<C64>::identity(n, n);
    let mut converged = false;
    for i in 1..=40 {
        term = &term * &scaled / C64::new(i as f64, 0.0);
        sum += &term;
        if one_norm(&term) <= 1e-17 * one_norm(&sum) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence("Taylor series did not converge".into()));
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// `exp(A)` by scaling and squaring with a truncated Taylor series. The
/// result is compared against one extra halving step.
pub fn expm(a: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    if !a.is_square() {
        return Err(Error::Validation("expm needs a square matrix".into()));
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NumericRange("non-finite matrix entry".into()));
    }
    let norm = one_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    if squarings > 60 {
        return Err(Error::NumericRange(format!("‖A‖₁ = {norm} is too large")));
    }
    let e = expm_scaled(a, squarings)?;
    let check = expm_scaled(a, squarings + 1)?;
    let scale = one_norm(&e);
    if !scale.is_finite() {
        return Err(Error::NumericRange("matrix exponential overflowed".into()));
    }
    let diff = one_norm(&(&e - &check));
    // squaring amplifies rounding by roughly the number of squarings
    let allowed = EXPM_TOL * (1.0 + squarings as f64) * scale.max(1.0);
    if diff > allowed {
        return Err(Error::Convergence(format!(
            "step-halving mismatch {diff:e} exceeds {allowed:e}"
        )));
    }
    Ok(e)
}

/// `exp(−iHt) s`, block by block.
pub fn dense_evolve(h: &DenseHamiltonian, t: f64, s: &DenseState) -> Result<DenseState> {
    if s.sites != h.sites {
        return Err(Error::Validation(format!(
            "state has {} sites, Hamiltonian {}",
            s.sites, h.sites
        )));
    }
    if !t.is_finite() {
        return Err(Error::Validation(format!("time must be finite, got {t}")));
    }
    let mut out = DVector::from_element(s.amplitudes.len(), ZERO);
    for b in 0..2 {
        let states = &h.block_states[b];
        let v = DVector::from_iterator(states.len(), states.iter().map(|&i| s.amplitudes[i]));
        if v.iter().all(|z| *z == ZERO) {
            continue;
        }
        let u = expm(&h.blocks[b].map(|z| z * C64::new(0.0, -t)))?;
        let w = u * v;
        for (idx, &i) in states.iter().enumerate() {
            out[i] = w[idx];
        }
    }
    Ok(DenseState {
        sites: s.sites,
        amplitudes: out,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PtReport {
    pub symmetric: bool,
    /// Largest entry of `|P conj(H) P⁻¹ − H|`.
    pub residual: f64,
}

/// Site reflection `j → L−1−j` as a signed permutation of basis states.
fn reflect(state: usize, sites: usize, f: &Fermions) -> (usize, f64) {
    let occupied: Vec<usize> = (0..sites).filter(|&j| state >> j & 1 == 1).collect();
    let ops: Vec<Op> = occupied
        .iter()
        .map(|&j| Op::Create(sites - 1 - j))
        .collect();
    f.apply_string(&ops, 0)
        .expect("reflected sites are distinct")
}

pub fn pt_check(h: &DenseHamiltonian, tol: f64) -> Result<PtReport> {
    if h.sites > MAX_PT_SITES {
        return Err(Error::Validation(format!(
            "pt_check needs L ≤ {MAX_PT_SITES}, got {}",
            h.sites
        )));
    }
    let f = Fermions {
        drop_string_sign: h.options.drop_string_sign,
    };
    let image: Vec<(usize, f64)> = (0..h.dimension())
        .map(|s| reflect(s, h.sites, &f))
        .collect();
    let mut residual = 0.0f64;
    for b in 0..2 {
        for &col in &h.block_states[b] {
            for &row in &h.block_states[b] {
                let (pr, sr) = image[row];
                let (pc, sc) = image[col];
                // P is real and orthogonal: (P H* Pᵀ)_{P r, P c} = s_r s_c H*_{r c}
                let transformed = h.element(row, col).conj() * (sr * sc);
                residual = residual.max((transformed - h.element(pr, pc)).norm());
            }
        }
    }
    Ok(PtReport {
        symmetric: residual <= tol,
        residual,
    })
}

/// Applies the momentum-mode annihilator `c_k = L^{-1/2} Σ_j e^{−ikj} c_j`.
fn annihilate_mode(v: &DVector<C64>, sites: usize, k: f64, f: &Fermions) -> DVector<C64> {
    let norm = 1.0 / (sites as f64).sqrt();
    let mut out = DVector::from_element(v.len(), ZERO);
    for (s, &amp) in v.iter().enumerate() {
        if amp == ZERO {
            continue;
        }
        for j in 0..sites {
            if let Some((s2, sign)) = f.apply(Op::Annihilate(j), s) {
                let phase = C64::from_polar(norm, -k * j as f64);
                out[s2] += amp * phase * sign;
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub sites: usize,
    pub t: f64,
    pub pair_number_dense: f64,
    pub pair_number_momentum: f64,
    pub pair_number_dev: f64,
    /// Relative deviation of the Dirac norm.
    pub norm_dev: f64,
    pub overlap_dense: Option<f64>,
    pub overlap_momentum: Option<f64>,
    pub overlap_dev: Option<f64>,
    pub max_dev: f64,
    pub tol: f64,
    pub pass: bool,
}

pub fn momentum_consistency(
    p: &NhParams,
    sites: usize,
    t: f64,
    hp: Option<&HermParams>,
    tol: f64,
) -> Result<ConsistencyReport> {
    momentum_consistency_with(p, sites, t, hp, tol, DenseOptions::default())
}

/// Evolves the vacuum both on the dense ring and sector by sector and
/// compares the pair number, the Dirac norm and, given `hp`, the overlap.
pub fn momentum_consistency_with(
    p: &NhParams,
    sites: usize,
    t: f64,
    hp: Option<&HermParams>,
    tol: f64,
    options: DenseOptions,
) -> Result<ConsistencyReport> {
    if !(4..=MAX_CONSISTENCY_SITES).contains(&sites) {
        return Err(Error::Validation(format!(
            "momentum consistency needs 4 ≤ L ≤ {MAX_CONSISTENCY_SITES}, got {sites}"
        )));
    }
    if !(0.0..=MAX_CONSISTENCY_TIME).contains(&t) {
        return Err(Error::Validation(format!(
            "momentum consistency needs 0 ≤ t ≤ {MAX_CONSISTENCY_TIME}, got {t}"
        )));
    }
    let grid = momentum_grid(sites)?;
    let h = build_dense_with(ChainParams::NonHermitian(*p), sites, options)?;
    let psi = dense_evolve(&h, t, &DenseState::vacuum(sites))?;
    let momentum = evolve_many_body(p, &grid, t, &ManyBodyState::vacuum(&grid))?;

    let f = Fermions {
        drop_string_sign: options.drop_string_sign,
    };
    let n2 = psi.norm_sqr();
    let mut pair_number_dense = 0.0;
    let mut pair_coherence = Vec::with_capacity(grid.paired().len());
    for &k in grid.paired() {
        let ck = annihilate_mode(&psi.amplitudes, sites, k, &f);
        let pair = annihilate_mode(&ck, sites, -k, &f);
        let nn = pair.norm_squared() / n2;
        pair_number_dense += nn;
        pair_coherence.push((k, nn, psi.amplitudes.dotc(&pair) / n2));
    }
    let pair_number_momentum = momentum.pair_number();
    let pair_number_dev = (pair_number_dense - pair_number_momentum).abs();
    let norm_momentum = momentum.norm_sqr();
    let norm_dev = (n2 - norm_momentum).abs() / norm_momentum;

    let (overlap_dense, overlap_momentum, overlap_dev) = match hp {
        Some(hp) => {
            let dense = dense_overlap(hp, &grid, &psi, &pair_coherence, &f);
            let mom = overlap_of_state(hp, &grid, t, &momentum, SelfPairedRule::Empty).o_total;
            (Some(dense), Some(mom), Some((dense - mom).abs()))
        }
        None => (None, None, None),
    };

    let max_dev = [pair_number_dev, norm_dev, overlap_dev.unwrap_or(0.0)]
        .into_iter()
        .fold(
            0.0,
            |a: f64, b| if b.is_nan() { f64::NAN } else { a.max(b) },
        );
    Ok(ConsistencyReport {
        sites,
        t,
        pair_number_dense,
        pair_number_momentum,
        pair_number_dev,
        norm_dev,
        overlap_dense,
        overlap_momentum,
        overlap_dev,
        max_dev,
        tol,
        pass: max_dev < tol,
    })
}

/// `O(t)` from reduced single-sector data of the dense state. A pair sector
/// with reference mode `(g_a, g_b)` contributes
/// `√(g_a²(1 − ⟨nn⟩) + g_b²⟨nn⟩ + 2 g_a g_b Re⟨c_{−k}c_k⟩)`.
fn dense_overlap(
    hp: &HermParams,
    grid: &MomentumGrid,
    psi: &DenseState,
    pair_coherence: &[(f64, f64, C64)],
    f: &Fermions,
) -> f64 {
    let n2 = psi.norm_sqr();
    let mut sum = 0.0;
    for &k in grid.self_paired() {
        let occ = annihilate_mode(&psi.amplitudes, psi.sites, k, f).norm_squared() / n2;
        // empty reference mode
        sum += (1.0 - occ).max(0.0).sqrt();
    }
    for &(k, nn, x) in pair_coherence {
        let [ga, gb] = ground_mode_h(k, hp);
        let o2 = ga * ga * (1.0 - nn) + gb * gb * nn + 2.0 * ga * gb * x.re;
        sum += 2.0 * o2.max(0.0).sqrt();
    }
    debug_assert!(grid.paired().iter().all(|&k| k > 0.0 && k < PI));
    sum / grid.n_sites() as f64
}
