//! The operations behind each subcommand. Each returns tables plus a JSON
//! summary; the binary only parses flags and writes files.

use std::f64::consts::PI;

use serde_json::json;

use crate::config::{Command, GridSpec, RunConfig};
use crate::dynamics::evolve_vacuum;
use crate::error::{Error, Result};
use crate::model::{dispersion_nh, momentum_grid, HermParams, NhParams};
use crate::observables::{
    avg_pair_density_momentum, avg_pair_density_time, overlap_total, pair_density,
    QuadratureSettings,
};
use crate::oracle::{
    build_dense_with, momentum_consistency_with, pt_check, ChainParams, DenseOptions,
    DEFAULT_ORACLE_TOL, MAX_CONSISTENCY_SITES,
};
use crate::phase::{classify, PhaseLabel};
use crate::sweep::par_map;
use crate::table::{ColumnKind, ResultTable};

pub const DEFAULT_DISPERSION_NODES: usize = 401;
pub const DEFAULT_DYNAMICS_SITES: usize = 40;
pub const DEFAULT_OVERLAP_SITES: usize = 61;
pub const DEFAULT_ORACLE_SITES: usize = 6;
pub const PT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutput {
    pub tables: Vec<ResultTable>,
    /// Machine-readable summary, written next to the tables.
    pub summary: serde_json::Value,
    /// `false` when a check ran to completion but did not pass.
    pub passed: bool,
}

pub fn run(cfg: &RunConfig) -> Result<CommandOutput> {
    cfg.validate()?;
    match cfg.command {
        Command::PhaseDiagram => cmd_phase_diagram(cfg),
        Command::Dispersion => cmd_dispersion(cfg),
        Command::Evolve => cmd_evolve(cfg),
        Command::PairDynamics => cmd_pair_dynamics(cfg),
        Command::Overlap => cmd_overlap(cfg),
        Command::OracleCheck => cmd_oracle_check(cfg),
    }
}

fn workers(cfg: &RunConfig) -> usize {
    cfg.workers.unwrap_or(1)
}

fn required<'a>(g: &'a Option<GridSpec>, name: &str) -> Result<&'a GridSpec> {
    g.as_ref()
        .ok_or_else(|| Error::Validation(format!("--{name} is required")))
}

fn nh_params(cfg: &RunConfig) -> Result<NhParams> {
    NhParams::new(
        cfg.j,
        required(&cfg.delta, "delta")?.scalar("delta")?,
        required(&cfg.mu, "mu")?.scalar("mu")?,
    )
}

/// `Δ_h` defaults to `Δ`.
fn herm_params(cfg: &RunConfig, p: &NhParams) -> Result<HermParams> {
    let mu_h = cfg
        .mu_h
        .ok_or_else(|| Error::Validation("--mu-h is required".into()))?;
    HermParams::new(cfg.j, cfg.delta_h.unwrap_or(p.delta), mu_h)
}

fn times(cfg: &RunConfig, default: &str) -> Result<Vec<f64>> {
    let ts = match &cfg.times {
        Some(g) => g.values()?,
        None => default.parse::<GridSpec>()?.values()?,
    };
    if let Some(t) = ts.iter().find(|t| **t < 0.0) {
        return Err(Error::Validation(format!(
            "times must be non-negative, got {t}"
        )));
    }
    Ok(ts)
}

fn quadrature(cfg: &RunConfig) -> Result<QuadratureSettings> {
    let mut q = QuadratureSettings::default();
    if let Some(n) = cfg.t_nodes {
        q.time_intervals = n;
    }
    if let Some(n) = cfg.k_nodes {
        q.momentum_intervals = n;
    }
    for (name, n) in [
        ("t-nodes", q.time_intervals),
        ("k-nodes", q.momentum_intervals),
    ] {
        if n < 4 || !n.is_multiple_of(4) {
            return Err(Error::Validation(format!(
                "--{name} must be a positive multiple of 4, got {n}"
            )));
        }
    }
    Ok(q)
}

fn sites(cfg: &RunConfig, default: usize) -> usize {
    cfg.sites.unwrap_or(default)
}

/// Momentum of the exceptional point when `p` sits on the exceptional line.
fn continuum_kc(p: &NhParams, tol: f64) -> Option<f64> {
    classify(p, tol)
        .critical_momentum()
        .filter(|k| *k > 0.0 && *k < PI)
}

pub fn cmd_phase_diagram(cfg: &RunConfig) -> Result<CommandOutput> {
    let mus = required(&cfg.mu, "mu")?.values()?;
    let deltas = required(&cfg.delta, "delta")?.values()?;
    NhParams::new(cfg.j, 0.0, 0.0)?;
    let points: Vec<(f64, f64)> = mus
        .iter()
        .flat_map(|&mu| deltas.iter().map(move |&d| (mu, d)))
        .collect();
    let labels = par_map(workers(cfg), &points, |&(mu, d)| {
        Ok(classify(&NhParams::new(cfg.j, d, mu)?, cfg.tol_ep))
    })?;
    let mut t = ResultTable::new(
        "phase_diagram",
        &[
            ("mu", ColumnKind::Real),
            ("delta", ColumnKind::Real),
            ("label", ColumnKind::Text),
            ("k_c", ColumnKind::Real),
            ("broken_fraction", ColumnKind::Real),
        ],
    );
    let mut counts = [0usize; 3];
    for (&(mu, d), label) in points.iter().zip(&labels) {
        counts[match label {
            PhaseLabel::Unbroken => 0,
            PhaseLabel::ExceptionalLine { .. } => 1,
            PhaseLabel::Broken { .. } => 2,
        }] += 1;
        t.push(vec![
            mu.into(),
            d.into(),
            label.name().into(),
            label.critical_momentum().into(),
            label.broken_fraction().into(),
        ]);
    }
    Ok(CommandOutput {
        tables: vec![t],
        summary: json!({
            "points": points.len(),
            "unbroken": counts[0],
            "exceptional": counts[1],
            "broken": counts[2],
        }),
        passed: true,
    })
}

pub fn cmd_dispersion(cfg: &RunConfig) -> Result<CommandOutput> {
    let p = nh_params(cfg)?;
    let nodes = cfg.k_nodes.unwrap_or(DEFAULT_DISPERSION_NODES);
    if nodes < 2 {
        return Err(Error::Validation(format!(
            "--k-nodes must be at least 2, got {nodes}"
        )));
    }
    let mut ks: Vec<(f64, bool)> = (0..nodes)
        .map(|i| (-PI + 2.0 * PI * i as f64 / (nodes - 1) as f64, false))
        .collect();
    let kc = continuum_kc(&p, cfg.tol_ep);
    if let Some(kc) = kc {
        ks.push((kc, true));
        ks.push((-kc, true));
        ks.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    let mut t = ResultTable::new(
        "dispersion",
        &[
            ("k", ColumnKind::Real),
            ("re_eps", ColumnKind::Real),
            ("im_eps", ColumnKind::Real),
            ("ep", ColumnKind::Int),
        ],
    );
    let mut broken_nodes = 0;
    for (k, forced) in ks {
        let eps = dispersion_nh(k, &p);
        let e = eps.value();
        if e.im != 0.0 {
            broken_nodes += 1;
        }
        t.push(vec![
            k.into(),
            e.re.into(),
            e.im.into(),
            (forced || eps.is_zero()).into(),
        ]);
    }
    Ok(CommandOutput {
        tables: vec![t],
        summary: json!({
            "phase": classify(&p, cfg.tol_ep).name(),
            "k_c": kc,
            "imaginary_nodes": broken_nodes,
        }),
        passed: true,
    })
}

/// Grid momenta `0 < k < π` plus the continuum exceptional momentum.
fn dynamics_momenta(
    p: &NhParams,
    cfg: &RunConfig,
    default_sites: usize,
) -> Result<Vec<(f64, bool)>> {
    let grid = momentum_grid(sites(cfg, default_sites))?;
    let mut ks: Vec<(f64, bool)> = grid.paired().iter().map(|&k| (k, false)).collect();
    if let Some(kc) = continuum_kc(p, cfg.tol_ep) {
        if !ks.iter().any(|(k, _)| (k - kc).abs() < 1e-12) {
            ks.push((kc, true));
            ks.sort_by(|a, b| a.0.total_cmp(&b.0));
        }
    }
    Ok(ks)
}

pub fn cmd_evolve(cfg: &RunConfig) -> Result<CommandOutput> {
    let p = nh_params(cfg)?;
    let ks = dynamics_momenta(&p, cfg, DEFAULT_DYNAMICS_SITES)?;
    let ts = times(cfg, "0:30:0.5")?;
    let points: Vec<(f64, bool, f64)> = ks
        .iter()
        .flat_map(|&(k, c)| ts.iter().map(move |&t| (k, c, t)))
        .collect();
    let states = par_map(workers(cfg), &points, |&(k, _, t)| evolve_vacuum(k, &p, t))?;
    let mut table = ResultTable::new(
        "amplitudes",
        &[
            ("k", ColumnKind::Real),
            ("t", ColumnKind::Real),
            ("a", ColumnKind::Complex),
            ("b", ColumnKind::Complex),
            ("norm_sq", ColumnKind::Real),
            ("n_k", ColumnKind::Real),
            ("continuum", ColumnKind::Int),
        ],
    );
    for (&(k, c, t), s) in points.iter().zip(&states) {
        table.push(vec![
            k.into(),
            t.into(),
            s.a.into(),
            s.b.into(),
            s.norm_sqr().into(),
            s.pair_fraction().into(),
            c.into(),
        ]);
    }
    Ok(CommandOutput {
        tables: vec![table],
        summary: json!({ "momenta": ks.len(), "times": ts.len() }),
        passed: true,
    })
}

pub fn cmd_pair_dynamics(cfg: &RunConfig) -> Result<CommandOutput> {
    let p = nh_params(cfg)?;
    let quad = quadrature(cfg)?;
    let ks = dynamics_momenta(&p, cfg, DEFAULT_DYNAMICS_SITES)?;
    let ts = times(cfg, "0:30:0.5")?;
    let w = workers(cfg);

    let points: Vec<(f64, bool, f64)> = ks
        .iter()
        .flat_map(|&(k, c)| ts.iter().map(move |&t| (k, c, t)))
        .collect();
    let records = par_map(w, &points, |&(k, _, t)| pair_density(k, &p, t))?;
    let mut nk_t = ResultTable::new(
        "nk_t",
        &[
            ("k", ColumnKind::Real),
            ("t", ColumnKind::Real),
            ("n_k", ColumnKind::Real),
            ("norm_sq", ColumnKind::Real),
            ("continuum", ColumnKind::Int),
        ],
    );
    for (&(k, c, t), r) in points.iter().zip(&records) {
        nk_t.push(vec![
            k.into(),
            t.into(),
            r.n_k.into(),
            r.norm_sq.into(),
            c.into(),
        ]);
    }

    let averages = par_map(w, &ks, |&(k, _)| {
        match avg_pair_density_time(k, &p, &quad) {
            Ok(r) => Ok((Some(r.value), Some(r.est_error), r.rule)),
            Err(Error::InfinitePeriod { .. }) => Ok((Some(0.5), None, "ep-asymptote")),
            Err(Error::Validation(_)) if !dispersion_nh(k, &p).is_real() => {
                Ok((None, None, "aperiodic"))
            }
            Err(e) => Err(e),
        }
    })?;
    let mut nbar_k = ResultTable::new(
        "nbar_k",
        &[
            ("k", ColumnKind::Real),
            ("nbar_k", ColumnKind::Real),
            ("est_error", ColumnKind::Real),
            ("status", ColumnKind::Text),
            ("continuum", ColumnKind::Int),
        ],
    );
    for (&(k, c), (v, err, status)) in ks.iter().zip(&averages) {
        nbar_k.push(vec![
            k.into(),
            (*v).into(),
            (*err).into(),
            (*status).into(),
            c.into(),
        ]);
    }

    let series = par_map(w, &ts, |&t| avg_pair_density_momentum(&p, t, &quad))?;
    let mut nbar_t = ResultTable::new(
        "nbar_t",
        &[
            ("t", ColumnKind::Real),
            ("nbar_t", ColumnKind::Real),
            ("est_error", ColumnKind::Real),
        ],
    );
    for (&t, r) in ts.iter().zip(&series) {
        nbar_t.push(vec![t.into(), r.value.into(), r.est_error.into()]);
    }

    Ok(CommandOutput {
        tables: vec![nk_t, nbar_k, nbar_t],
        summary: json!({
            "phase": classify(&p, cfg.tol_ep).name(),
            "k_c": continuum_kc(&p, cfg.tol_ep),
            "momenta": ks.len(),
            "times": ts.len(),
            "quadrature": {
                "rule": "composite-simpson",
                "time_intervals": quad.time_intervals,
                "momentum_intervals": quad.momentum_intervals,
            },
        }),
        passed: true,
    })
}

pub fn cmd_overlap(cfg: &RunConfig) -> Result<CommandOutput> {
    let p = nh_params(cfg)?;
    let hp = herm_params(cfg, &p)?;
    let grid = momentum_grid(sites(cfg, DEFAULT_OVERLAP_SITES))?;
    let ts = times(cfg, "50,100")?;
    let records = par_map(workers(cfg), &ts, |&t| {
        overlap_total(&p, &hp, &grid, t, cfg.self_paired)
    })?;
    let mut per_k = ResultTable::new(
        "overlap_k",
        &[
            ("t", ColumnKind::Real),
            ("k", ColumnKind::Real),
            ("o_k", ColumnKind::Real),
        ],
    );
    let mut total = ResultTable::new(
        "overlap_t",
        &[("t", ColumnKind::Real), ("o_total", ColumnKind::Real)],
    );
    for r in &records {
        for m in &r.modes {
            per_k.push(vec![r.t.into(), m.k.into(), m.o_k.into()]);
        }
        total.push(vec![r.t.into(), r.o_total.into()]);
    }
    Ok(CommandOutput {
        tables: vec![per_k, total],
        summary: json!({
            "sites": grid.n_sites(),
            "self_paired_rule": cfg.self_paired,
            "o_total": records.iter().map(|r| json!({"t": r.t, "o": r.o_total})).collect::<Vec<_>>(),
        }),
        passed: true,
    })
}

pub fn cmd_oracle_check(cfg: &RunConfig) -> Result<CommandOutput> {
    let p = nh_params(cfg)?;
    let l = sites(cfg, DEFAULT_ORACLE_SITES);
    if l > MAX_CONSISTENCY_SITES {
        return Err(Error::Validation(format!(
            "oracle-check needs L ≤ {MAX_CONSISTENCY_SITES}, got {l}"
        )));
    }
    let t = cfg.t.unwrap_or(1.0);
    let hp = match cfg.mu_h {
        Some(_) => Some(herm_params(cfg, &p)?),
        None => None,
    };
    let options = DenseOptions {
        drop_string_sign: cfg.corrupt_sign,
    };
    let report = momentum_consistency_with(&p, l, t, hp.as_ref(), DEFAULT_ORACLE_TOL, options)?;
    let h = build_dense_with(ChainParams::NonHermitian(p), l, options)?;
    let pt = pt_check(&h, PT_TOL)?;
    let passed = report.pass && pt.symmetric;

    let mut table = ResultTable::new(
        "oracle",
        &[
            ("sites", ColumnKind::Int),
            ("t", ColumnKind::Real),
            ("pair_number_dense", ColumnKind::Real),
            ("pair_number_momentum", ColumnKind::Real),
            ("pair_number_dev", ColumnKind::Real),
            ("norm_dev", ColumnKind::Real),
            ("overlap_dev", ColumnKind::Real),
            ("pt_residual", ColumnKind::Real),
            ("pass", ColumnKind::Int),
        ],
    );
    table.push(vec![
        l.into(),
        t.into(),
        report.pair_number_dense.into(),
        report.pair_number_momentum.into(),
        report.pair_number_dev.into(),
        report.norm_dev.into(),
        report.overlap_dev.into(),
        pt.residual.into(),
        passed.into(),
    ]);
    Ok(CommandOutput {
        tables: vec![table],
        summary: json!({
            "consistency": report,
            "pt": pt,
            "pass": passed,
        }),
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::Value;

    fn cfg(command: Command, delta: &str, mu: &str) -> RunConfig {
        let mut c = RunConfig::new(command);
        c.delta = Some(delta.parse().unwrap());
        c.mu = Some(mu.parse().unwrap());
        c
    }

    #[test]
    fn phase_diagram_single_exceptional_point() {
        let out = run(&cfg(Command::PhaseDiagram, "1.7320508075688772", "2")).unwrap();
        let t = &out.tables[0];
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0][2], Value::Text("exceptional".into()));
        assert!((t.reals("k_c")[0] - PI / 3.0).abs() < 1e-9);
    }

    #[test]
    fn phase_diagram_hermitian_limit() {
        let out = run(&cfg(Command::PhaseDiagram, "0", "-3:3:0.5")).unwrap();
        let t = &out.tables[0];
        for (mu, row) in t.reals("mu").iter().zip(&t.rows) {
            let label = match &row[2] {
                Value::Text(s) => s.clone(),
                _ => unreachable!(),
            };
            if mu.abs() > 1.0 {
                assert_eq!(label, "unbroken");
            } else if mu.abs() == 1.0 {
                assert_eq!(label, "exceptional");
            } else {
                // gapless Fermi sea: zero-measure broken set
                assert_eq!(label, "broken");
                assert_eq!(t.reals("broken_fraction")[0], 0.0);
            }
        }
    }

    #[test]
    fn dispersion_examples() {
        let out = run(&cfg(Command::Dispersion, "1.7320508075688772", "2")).unwrap();
        let t = &out.tables[0];
        let ks = t.reals("k");
        let re = t.reals("re_eps");
        let ep = t.reals("ep");
        let i = ks
            .iter()
            .position(|k| (k - PI / 3.0).abs() < 1e-12)
            .unwrap();
        assert_eq!(ep[i], 1.0);
        assert!(re[i].abs() < 1e-6);

        let out = run(&cfg(Command::Dispersion, "0", "2")).unwrap();
        assert!(out.tables[0].reals("im_eps").iter().all(|v| *v == 0.0));

        let out = run(&cfg(Command::Dispersion, "2", "1")).unwrap();
        let t = &out.tables[0];
        let both = t
            .reals("re_eps")
            .iter()
            .zip(t.reals("im_eps"))
            .filter(|(r, i)| **r == 0.0 && *i != 0.0)
            .count();
        assert!(both > 10);
    }

    #[test]
    fn pair_dynamics_tables() {
        let mut c = cfg(Command::PairDynamics, "1.7320508075688772", "2");
        c.times = Some("0".parse().unwrap());
        let out = run(&c).unwrap();
        assert_eq!(out.tables.len(), 3);
        assert!(out.tables[0].reals("n_k").iter().all(|v| *v == 0.0));
        // k_c = π/3 is not on the 40-site grid, so it comes in as a continuum row
        let nbar = &out.tables[1];
        let cont = nbar.reals("continuum");
        let i = cont.iter().position(|c| *c == 1.0).unwrap();
        assert_eq!(nbar.reals("nbar_k")[i], 0.5);
        assert_eq!(nbar.rows[i][3], Value::Text("ep-asymptote".into()));

        c.times = Some("0:40:4".parse().unwrap());
        let out = run(&c).unwrap();
        let nk = &out.tables[0];
        let ep_row: Vec<f64> = nk
            .reals("n_k")
            .iter()
            .zip(nk.reals("continuum"))
            .filter(|(_, c)| *c == 1.0)
            .map(|(n, _)| *n)
            .collect();
        assert!(ep_row.windows(2).all(|w| w[0] <= w[1]));
        assert!((ep_row.last().unwrap() - 0.5).abs() < 1e-3);
    }

    #[test]
    fn pair_dynamics_rejects_bad_nodes() {
        let mut c = cfg(Command::PairDynamics, "1", "2");
        c.t_nodes = Some(10);
        assert!(matches!(run(&c), Err(Error::Validation(_))));
    }

    #[test]
    fn overlap_reference_point() {
        let mut c = cfg(Command::Overlap, "1", "1.4142135623730951");
        c.mu_h = Some(0.9);
        let out = run(&c).unwrap();
        let o = out.tables[1].reals("o_total");
        assert!(
            (o[0] - 0.936).abs() < 0.02 && (o[1] - 0.939).abs() < 0.02,
            "{o:?}"
        );
    }

    #[test]
    fn oracle_check_examples() {
        let c = cfg(Command::OracleCheck, "1.7320508075688772", "2");
        assert!(run(&c).unwrap().passed);
        let mut bad = c.clone();
        bad.corrupt_sign = true;
        assert!(!run(&bad).unwrap().passed);
        let mut big = c.clone();
        big.sites = Some(14);
        assert_eq!(run(&big).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn missing_parameters() {
        let c = RunConfig::new(Command::Dispersion);
        assert!(matches!(run(&c), Err(Error::Validation(_))));
        let c = cfg(Command::Overlap, "1", "1");
        assert!(matches!(run(&c), Err(Error::Validation(_))));
        let c = cfg(Command::Dispersion, "1,2", "1");
        assert!(matches!(run(&c), Err(Error::Validation(_))));
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let mut c = cfg(Command::PairDynamics, "1.7320508075688772", "2");
        c.times = Some("0:10:0.5".parse().unwrap());
        let one = run(&c).unwrap();
        c.workers = Some(4);
        let four = run(&c).unwrap();
        for (a, b) in one.tables.iter().zip(&four.tables) {
            assert_eq!(a.to_csv_string().unwrap(), b.to_csv_string().unwrap());
        }
    }
}
