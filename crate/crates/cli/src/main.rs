//! `nhkitaev`: phase diagrams, dispersions, quench dynamics, overlaps and the
//! dense oracle check from the command line.
//!
//! Exit status is 0 on success, 1 on invalid input, 2 on numeric failure
//! (including a failed oracle check).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use nhkitaev::commands::{run, CommandOutput};
use nhkitaev::config::{Command, GridSpec, RunConfig};
use nhkitaev::observables::SelfPairedRule;
use nhkitaev::Error;

const WORKERS_ENV: &str = "KITAEV_WORKERS";

#[derive(Parser, Debug)]
#[command(
    name = "nhkitaev",
    version,
    about = "Kitaev chain with imaginary p-wave pairing"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Classify a (μ, Δ) grid.
    PhaseDiagram(Flags),
    /// Quasiparticle spectrum over k.
    Dispersion(Flags),
    /// Evolved vacuum amplitudes per sector.
    Evolve(Flags),
    /// N_k(t), its time average and its momentum average.
    PairDynamics(Flags),
    /// Overlap with the Hermitian ground state.
    Overlap(Flags),
    /// Compare against the dense real-space construction.
    OracleCheck(Flags),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SelfPairedArg {
    Empty,
    Occupation,
}

#[derive(clap::Args, Debug)]
#[command(allow_negative_numbers = true)]
struct Flags {
    /// JSON run configuration; flags given alongside override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    j: Option<f64>,
    /// Value, `min:max:step` or `a,b,c`.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<GridSpec>,
    /// Value, `min:max:step` or `a,b,c`.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<GridSpec>,
    #[arg(long)]
    delta_h: Option<f64>,
    #[arg(long)]
    mu_h: Option<f64>,
    #[arg(long)]
    sites: Option<usize>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    times: Option<GridSpec>,
    #[arg(long)]
    k_nodes: Option<usize>,
    #[arg(long)]
    t_nodes: Option<usize>,
    #[arg(long)]
    tol_ep: Option<f64>,
    /// Worker threads (default: $KITAEV_WORKERS, else 1).
    #[arg(long)]
    workers: Option<usize>,
    /// Directory for CSV tables, config.json and meta.json.
    #[arg(long)]
    out: Option<PathBuf>,
    /// How k = 0, π enter the total overlap.
    #[arg(long, value_enum)]
    self_paired: Option<SelfPairedArg>,
    #[arg(long, hide = true)]
    corrupt_sign: bool,
}

impl Sub {
    fn split(self) -> (Command, Flags) {
        match self {
            Sub::PhaseDiagram(f) => (Command::PhaseDiagram, f),
            Sub::Dispersion(f) => (Command::Dispersion, f),
            Sub::Evolve(f) => (Command::Evolve, f),
            Sub::PairDynamics(f) => (Command::PairDynamics, f),
            Sub::Overlap(f) => (Command::Overlap, f),
            Sub::OracleCheck(f) => (Command::OracleCheck, f),
        }
    }
}

fn load_config(command: Command, flags: Flags) -> Result<RunConfig, Error> {
    let mut cfg = match &flags.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::new(command),
    };
    cfg.command = command;
    macro_rules! set {
        ($($field:ident),*) => {$(
            if let Some(v) = flags.$field {
                cfg.$field = Some(v);
            }
        )*};
    }
    set!(delta, mu, delta_h, mu_h, sites, t, times, k_nodes, t_nodes, out);
    if let Some(j) = flags.j {
        cfg.j = j;
    }
    if let Some(tol) = flags.tol_ep {
        cfg.tol_ep = tol;
    }
    if let Some(rule) = flags.self_paired {
        cfg.self_paired = match rule {
            SelfPairedArg::Empty => SelfPairedRule::Empty,
            SelfPairedArg::Occupation => SelfPairedRule::Occupation,
        };
    }
    cfg.corrupt_sign |= flags.corrupt_sign;
    cfg.workers = match flags.workers {
        Some(w) => Some(w),
        None if cfg.workers.is_some() => cfg.workers,
        None => match std::env::var(WORKERS_ENV) {
            Ok(s) => Some(s.trim().parse().map_err(|_| {
                Error::Validation(format!(
                    "{WORKERS_ENV} must be a positive integer, got {s:?}"
                ))
            })?),
            Err(_) => None,
        },
    };
    cfg.validate()?;
    Ok(cfg)
}

fn io_error(path: &Path, e: io::Error) -> Error {
    Error::Validation(format!("{}: {e}", path.display()))
}

fn write_outputs(cfg: &RunConfig, out: &CommandOutput) -> Result<(), Error> {
    let Some(dir) = &cfg.out else {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        for t in &out.tables {
            writeln!(lock, "# {}", t.name).map_err(|e| io_error(Path::new("<stdout>"), e))?;
            t.write_csv(&mut lock)?;
        }
        return Ok(());
    };
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    for t in &out.tables {
        let path = dir.join(format!("{}.csv", t.name));
        let file = fs::File::create(&path).map_err(|e| io_error(&path, e))?;
        t.write_csv(io::BufWriter::new(file))?;
    }
    let path = dir.join("config.json");
    fs::write(&path, cfg.to_json() + "\n").map_err(|e| io_error(&path, e))?;
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = serde_json::json!({
        "tool": "nhkitaev",
        "version": env!("CARGO_PKG_VERSION"),
        "timestamp_unix": timestamp,
        "config": cfg,
        "tables": out.tables.iter().map(|t| format!("{}.csv", t.name)).collect::<Vec<_>>(),
        "summary": out.summary,
    });
    let path = dir.join("meta.json");
    let text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
    fs::write(&path, text + "\n").map_err(|e| io_error(&path, e))?;
    println!(
        "{}",
        serde_json::to_string(&out.summary).expect("summary serializes")
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    let (command, flags) = cli.command.split();
    let result = load_config(command, flags).and_then(|cfg| {
        let out = run(&cfg)?;
        write_outputs(&cfg, &out)?;
        Ok(out)
    });
    match result {
        Ok(out) if out.passed => ExitCode::SUCCESS,
        Ok(out) => {
            eprintln!("check failed: {}", out.summary);
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
