//! Command-line front end: every analysis of the `kuramoto-duo` library as a
//! subcommand emitting CSV or JSON.

mod config;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use kuramoto_duo::output::{self, fmt_num};
use kuramoto_duo::sde_sim::{
    compare_to_theory, simulate, stationary_estimate, MatchReport, StationaryEstimate,
};
use kuramoto_duo::steady_state::{simplified_density, PhaseState};
use kuramoto_duo::{
    beta_zero, classify_region, eval_v, eval_v_double_prime, eval_v_prime, eval_w, find_solutions,
    r_of_c_approx, stationary_density, symmetric_class, trace_curve, unsync_only_sufficient,
    Community, CouplingParams, Curve, Psi, SolutionPoint,
};

use config::{set_axis, SimConfigFile, SweepPsi, SweepSpec};

/// Caps the worker count of `sweep`; 0 or unset lets rayon decide.
pub const THREADS_ENV: &str = "KURAMOTO_DUO_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(kuramoto_duo::Error),
    Io(io::Error),
}

impl From<kuramoto_duo::Error> for CliError {
    fn from(e: kuramoto_duo::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "kuramoto-duo",
    version,
    about = "Steady states of the two-community noisy Kuramoto model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Couplings {
    #[arg(long = "K1", allow_negative_numbers = true)]
    k1: f64,
    #[arg(long = "K2", allow_negative_numbers = true)]
    k2: f64,
    #[arg(long = "L1", allow_negative_numbers = true)]
    l1: f64,
    #[arg(long = "L2", allow_negative_numbers = true)]
    l2: f64,
}

impl Couplings {
    fn params(&self) -> Result<CouplingParams, CliError> {
        Ok(CouplingParams::new(self.k1, self.k2, self.l1, self.l2)?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    #[value(name = "V")]
    V,
    #[value(name = "W")]
    W,
    #[value(name = "Vp")]
    Vp,
    #[value(name = "Vpp")]
    Vpp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PsiArg {
    #[value(name = "0")]
    Zero,
    #[value(name = "pi")]
    Pi,
    #[value(name = "both")]
    Both,
}

impl PsiArg {
    fn phases(self) -> Vec<Psi> {
        match self {
            PsiArg::Zero => vec![Psi::Zero],
            PsiArg::Pi => vec![Psi::Pi],
            PsiArg::Both => vec![Psi::Zero, Psi::Pi],
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate V, W or a derivative of V at one point.
    Vfun {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, value_enum, default_value = "V")]
        which: Which,
    },
    /// Sample both self-consistency curves.
    Curves {
        #[command(flatten)]
        c: Couplings,
        #[arg(long, default_value_t = 2001)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the steady states; the CSV goes to stdout, the summary to stderr.
    Solve {
        #[command(flatten)]
        c: Couplings,
        #[arg(long, value_enum, default_value = "both")]
        psi: PsiArg,
    },
    /// Parameter region and its largest solution count.
    Classify {
        #[command(flatten)]
        c: Couplings,
    },
    /// Symmetry class and symmetric solution.
    Symmetric {
        #[command(flatten)]
        c: Couplings,
    },
    /// Stationary phase density of one community.
    Density {
        #[command(flatten)]
        c: Couplings,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        omega: f64,
        #[arg(long = "D", default_value_t = 1.0)]
        noise_d: f64,
        #[arg(long, default_value_t = 1024)]
        ntheta: usize,
        #[arg(long, default_value_t = 1)]
        community: u8,
        #[arg(long, default_value_t = 0.5)]
        alpha1: f64,
        /// Order parameters; default is the strongest in-phase steady state.
        #[arg(long, requires = "r2")]
        r1: Option<f64>,
        #[arg(long, requires = "r1")]
        r2: Option<f64>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        psi1: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        psi2: f64,
        /// Write the density normalized as exp[K r cos + L r' cos] instead.
        #[arg(long)]
        simplified: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a finite-size simulation from a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for series.csv, estimate.json and comparison.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Region and solution-count raster over one or two parameter axes.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses `argv` (program name first), runs the command, and returns the exit code:
/// 0 on success, 2 on usage errors, 1 on domain and i/o errors.
pub fn run<O: Write, E: Write>(argv: &[String], out: &mut O, err: &mut E) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                2
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch<O: Write, E: Write>(cmd: Command, out: &mut O, err: &mut E) -> Result<(), CliError> {
    match cmd {
        Command::Vfun { x, which } => {
            let y = match which {
                Which::V => eval_v(x)?,
                Which::W => eval_w(x)?,
                Which::Vp => eval_v_prime(x)?,
                Which::Vpp => eval_v_double_prime(x)?,
            };
            writeln!(out, "{}", fmt_num(y))?;
        }
        Command::Curves { c, grid, out: path } => {
            let p = c.params()?;
            let traces = vec![
                trace_curve(Curve::Gamma1, &p, grid)?,
                trace_curve(Curve::Gamma2, &p, grid)?,
            ];
            emit(path.as_deref(), out, |w| output::write_curves(w, &traces))?;
        }
        Command::Solve { c, psi } => {
            let p = c.params()?;
            let mut sols = Vec::new();
            for phase in psi.phases() {
                sols.extend(find_solutions(&p, phase)?);
            }
            output::write_solutions(&mut *out, &p, &sols)?;
            let region = classify_region(&p)?;
            let (suff, which) = unsync_only_sufficient(&p)?;
            writeln!(err, "region {region} (max {})", region.max_solutions())?;
            writeln!(err, "beta0 {}", fmt_num(beta_zero(&p)))?;
            if suff {
                let list: Vec<String> = which.iter().map(|c| c.to_string()).collect();
                writeln!(
                    err,
                    "unsynchronized-only conditions hold: {}",
                    list.join(",")
                )?;
            } else {
                writeln!(err, "unsynchronized-only conditions hold: none")?;
            }
        }
        Command::Classify { c } => {
            let region = classify_region(&c.params()?)?;
            writeln!(out, "{region}, max {}", region.max_solutions())?;
        }
        Command::Symmetric { c } => {
            let p = c.params()?;
            match symmetric_class(&p)? {
                Some(s) => {
                    let approx = r_of_c_approx(s.level_c);
                    writeln!(out, "C,r_of_C,approx,rel_error")?;
                    writeln!(
                        out,
                        "{},{},{},{}",
                        fmt_num(s.level_c),
                        fmt_num(s.r_of_c),
                        fmt_num(approx),
                        fmt_num((approx - s.r_of_c).abs() / s.r_of_c)
                    )?;
                }
                None => writeln!(
                    out,
                    "no symmetry class: K1+L1={}, K2+L2={}",
                    fmt_num(p.k1 + p.l1),
                    fmt_num(p.k2 + p.l2)
                )?,
            }
        }
        Command::Density {
            c,
            omega,
            noise_d,
            ntheta,
            community,
            alpha1,
            r1,
            r2,
            psi1,
            psi2,
            simplified,
            out: path,
        } => {
            let p = c.params()?;
            let community = match community {
                1 => Community::One,
                2 => Community::Two,
                other => {
                    return Err(CliError::Usage(format!(
                        "community must be 1 or 2, got {other}"
                    )))
                }
            };
            let state = match (r1, r2) {
                (Some(r1), Some(r2)) => PhaseState::new(r1, psi1, r2, psi2),
                _ => {
                    let best = find_solutions(&p, Psi::Zero)?
                        .into_iter()
                        .max_by(|a, b| (a.r1 + a.r2).total_cmp(&(b.r1 + b.r2)))
                        .expect("origin is always a solution");
                    PhaseState::new(best.r1, psi1, best.r2, psi1)
                }
            };
            let profile = if simplified {
                simplified_density(community, &p, &state, ntheta)?
            } else {
                stationary_density(
                    community,
                    &p,
                    (alpha1, 1.0 - alpha1),
                    noise_d,
                    &state,
                    omega,
                    ntheta,
                )?
            };
            emit(path.as_deref(), out, |w| output::write_density(w, &profile))?;
        }
        Command::Simulate {
            config,
            seed,
            out: dir,
        } => {
            let text = read_config(&config)?;
            let file = SimConfigFile::parse(&text)?;
            let mut cfg = file.to_config()?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let tol = file.tol.unwrap_or(0.05);
            let series = simulate(&cfg)?;
            let est = stationary_estimate(&series, cfg.burn_in)?;
            let sols = all_solutions(&cfg.params)?;
            let report = compare_to_theory(&est, &sols, tol)?;
            let summary = SimSummary {
                estimate: est,
                comparison: report,
            };
            if let Some(dir) = dir {
                fs::create_dir_all(&dir)?;
                write_atomic(&dir.join("series.csv"), |w| {
                    output::write_series(w, &series)
                })?;
                write_atomic(&dir.join("estimate.json"), |w| write_json(w, &est))?;
                write_atomic(&dir.join("comparison.json"), |w| write_json(w, &report))?;
            }
            write_json(&mut *out, &summary)?;
        }
        Command::Sweep { config, out: dir } => {
            let spec = SweepSpec::parse(&read_config(&config)?)?;
            sweep(&spec, &dir, err)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SimSummary {
    estimate: StationaryEstimate,
    comparison: MatchReport,
}

fn read_config(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))
}

fn write_json<W: Write, T: Serialize>(mut w: W, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, value).map_err(io::Error::from)?;
    writeln!(w)
}

/// Writes through a temporary file in the target directory, then renames it into place.
fn write_atomic<F>(path: &Path, body: F) -> io::Result<()>
where
    F: FnOnce(&mut io::BufWriter<&mut fs::File>) -> io::Result<()>,
{
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut w = io::BufWriter::new(tmp.as_file_mut());
        body(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn emit<O, F>(path: Option<&Path>, out: &mut O, body: F) -> io::Result<()>
where
    O: Write,
    F: Fn(&mut dyn Write) -> io::Result<()>,
{
    match path {
        Some(p) => write_atomic(p, |w| body(w)),
        None => body(out),
    }
}

fn thread_cap() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(s) => s.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "{THREADS_ENV} must be a nonnegative integer, got {s:?}"
            ))
        }),
    }
}

fn sweep<E: Write>(spec: &SweepSpec, dir: &Path, err: &mut E) -> Result<(), CliError> {
    let (axes, base) = spec.resolve()?;
    let mut cells: Vec<[f64; 4]> = Vec::new();
    let ny = axes.get(1).map_or(1, |a| a.n);
    for i in 0..axes[0].n {
        for j in 0..ny {
            let mut v = base;
            set_axis(&mut v, axes[0].axis, axes[0].value(i));
            if let Some(y) = axes.get(1) {
                set_axis(&mut v, y.axis, y.value(j));
            }
            cells.push(v);
        }
    }
    let skipped = cells.iter().filter(|v| v[2] == 0.0 || v[3] == 0.0).count();
    cells.retain(|v| v[2] != 0.0 && v[3] != 0.0);
    if skipped > 0 {
        writeln!(
            err,
            "skipped {skipped} grid cells with a zero cross coupling"
        )?;
    }

    let phases: Vec<(Psi, &str)> = match spec.psi {
        SweepPsi::Zero => vec![(Psi::Zero, "regions_psi0.csv")],
        SweepPsi::Pi => vec![(Psi::Pi, "regions_pi.csv")],
        SweepPsi::Both => vec![(Psi::Zero, "regions_psi0.csv"), (Psi::Pi, "regions_pi.csv")],
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_cap()?)
        .build()
        .map_err(|e| CliError::Io(io::Error::other(e)))?;
    fs::create_dir_all(dir)?;
    for (psi, name) in phases {
        let rows: Result<Vec<String>, kuramoto_duo::Error> = pool.install(|| {
            cells
                .par_iter()
                .map(|v| {
                    let p = CouplingParams::new(v[0], v[1], v[2], v[3])?;
                    let n = find_solutions(&p, psi)?.len();
                    Ok(output::region_row(&p, classify_region(&p)?, n))
                })
                .collect()
        });
        let rows = rows?;
        write_atomic(&dir.join(name), |w| {
            writeln!(w, "{}", output::REGIONS_HEADER)?;
            for r in &rows {
                writeln!(w, "{r}")?;
            }
            Ok(())
        })?;
    }
    Ok(())
}

/// Solutions of both phase classes, origin listed once.
fn all_solutions(p: &CouplingParams) -> kuramoto_duo::Result<Vec<SolutionPoint>> {
    let mut sols = find_solutions(p, Psi::Zero)?;
    sols.extend(
        find_solutions(p, Psi::Pi)?
            .into_iter()
            .filter(|s| !s.is_unsynchronized()),
    );
    Ok(sols)
}
