//! The `badflow` command line: argument definitions, run manifests and
//! output writers. Every output file carries a manifest (the resolved
//! configuration, tool version, wall-clock time) next to its payload; the
//! payload depends only on the configuration.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cantor::scans::{empirical_shah_constant, eq_fraction, eq_membership, fraction_below, shortest_profile, wedge_hypothesis};
use crate::cantor::taxonomy::{dead_indices, detect_dangerous, richness_report, WindowKind};
use crate::cantor::{build_sequence, classify_tree, recheck_survivors, ConstructionConfig};
use crate::curve::moment_curve;
use crate::diophantine::{badness_constant_direct, correspondence_check, dual_only_zero_solution, orbit_trace, Convention, Point};
use crate::error::Error;
use crate::exterior::SquareMatrix;
use crate::flows::Weight;
use crate::lattice::{enumerate_primitive_sublattices, successive_minima, sublattice_covolume, LatticeBasis};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Environment variable consulted when `--workers` is absent.
pub const WORKERS_ENV: &str = "BADFLOW_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "badflow", version, about = "Weighted badly approximable points: orbits, badness tests and interval constructions")]
pub struct Cli {
    /// Worker threads (defaults to the machine's parallelism). Never changes output.
    #[arg(long, global = true, env = WORKERS_ENV)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample λ₁ along a lattice orbit and write a CSV trace.
    Orbit(OrbitArgs),
    /// Direct and/or dual badness tests for a point.
    BadCheck(BadCheckArgs),
    /// Build the interval construction and write tree, richness and survivors.
    Cantor(CantorArgs),
    /// Parameter scans over the construction and lattice primitives.
    #[command(subcommand)]
    Scan(ScanCommand),
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    /// Comma-separated coordinates (decimal, a/b, golden, sqrt:N, liouville:K).
    #[arg(long)]
    pub x: String,
    #[arg(long, value_delimiter = ',', value_parser = parse_number)]
    pub weight: Vec<f64>,
    #[arg(long, default_value = "aV")]
    pub convention: String,
    #[arg(long = "T", default_value_t = 30.0)]
    pub big_t: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BadMode {
    Direct,
    Dual,
    Both,
}

#[derive(Debug, Args)]
pub struct BadCheckArgs {
    #[arg(long)]
    pub x: String,
    #[arg(long, value_delimiter = ',', value_parser = parse_number)]
    pub weight: Vec<f64>,
    /// Horizon of the direct test and `N` of the dual test.
    #[arg(long = "Q", default_value_t = 100_000)]
    pub horizon: u64,
    #[arg(long, value_enum, default_value = "both")]
    pub mode: BadMode,
    /// Constant of the dual system `|a₀ + a·x| < c/N`.
    #[arg(long, default_value_t = 1e-3)]
    pub c: f64,
    /// Longest orbit followed by the consistency check.
    #[arg(long, default_value_t = 40.0)]
    pub t_max: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConstructionArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value = "moment")]
    pub curve: String,
    /// Defaults to the uniform weight.
    #[arg(long, value_delimiter = ',', value_parser = parse_number)]
    pub weight: Vec<f64>,
    #[arg(long = "R", default_value_t = 16)]
    pub subdivision: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 4)]
    pub depth: u32,
    #[arg(long, default_value_t = 0.25)]
    pub rho: f64,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub l_min: Option<u32>,
    #[arg(long)]
    pub l_max: Option<u32>,
    #[arg(long)]
    pub l_gen: Option<u32>,
}

#[derive(Debug, Args)]
pub struct CantorArgs {
    #[command(flatten)]
    pub construction: ConstructionArgs,
    #[arg(long, default_value = "cantor-out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum ScanCommand {
    /// Dangerous (or extremely dangerous) windows at generation `q`.
    Dangerous(DangerousArgs),
    /// Membership in the covering set at level `q`.
    Eq(EqArgs),
    /// Share of parameters whose flowed lattice leaves `K_ε`.
    Nondiv(NondivArgs),
    /// Empirical lower-bound constant for `max_x ‖g_r(t)U(φ(x))v‖ / ‖v‖`.
    Shah(ShahArgs),
    /// Successive minima of a lattice.
    Minima(LatticeArgs),
    /// Primitive sublattices of small covolume.
    Sublattices(SublatticeArgs),
}

#[derive(Debug, Args)]
pub struct DangerousArgs {
    #[command(flatten)]
    pub construction: ConstructionArgs,
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub l: Option<u32>,
    /// Scan extremely dangerous windows with this `l′` instead.
    #[arg(long)]
    pub l_prime: Option<f64>,
    /// Drop the requirement that windows cover a dead interval.
    #[arg(long)]
    pub all_windows: bool,
    /// `lo,hi`
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 1.0])]
    pub region: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EqArgs {
    #[command(flatten)]
    pub construction: ConstructionArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    pub q: Vec<u32>,
    /// Test a single parameter instead of a grid.
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NondivArgs {
    #[command(flatten)]
    pub construction: ConstructionArgs,
    #[arg(long)]
    pub t: f64,
    /// `lo,hi`
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 1.0])]
    pub interval: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ShahArgs {
    #[command(flatten)]
    pub construction: ConstructionArgs,
    #[arg(long)]
    pub t: f64,
    #[arg(long, default_value_t = 2)]
    pub grade: usize,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    /// `identity`, `diag:a,b,…` or `rows:a,b;c,d` (basis vectors are the columns).
    #[arg(long, default_value = "identity")]
    pub lattice: String,
    /// Dimension of `identity`.
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SublatticeArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub rho: f64,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_resource() { EXIT_RESOURCE } else { EXIT_USAGE };
        CliError { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError { code: EXIT_FAILURE, message: format!("i/o error: {e}") }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError { code: EXIT_USAGE, message: msg.into() }
}

/// `a/b` or a decimal.
pub fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) = (a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?);
            if b == 0.0 {
                return Err("zero denominator".into());
            }
            Ok(a / b)
        }
        None => s.parse().map_err(|e| format!("{e}")),
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Value,
    pub version: String,
    pub wall_clock_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub workers: usize,
}

struct Context {
    started: Instant,
    workers: usize,
}

impl Context {
    fn manifest(&self, command: &str, config: Value, seed: Option<u64>) -> RunManifest {
        RunManifest {
            command: command.into(),
            config,
            version: env!("CARGO_PKG_VERSION").into(),
            wall_clock_s: self.started.elapsed().as_secs_f64(),
            seed,
            workers: self.workers,
        }
    }
}

/// `{"manifest": …, "payload": …}`, pretty-printed with a trailing newline.
pub fn json_document(manifest: &RunManifest, payload: &impl Serialize) -> Result<String, CliError> {
    let doc = json!({ "manifest": manifest, "payload": payload });
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError { code: EXIT_FAILURE, message: e.to_string() })?;
    s.push('\n');
    Ok(s)
}

/// A `#`-prefixed manifest line followed by the CSV payload.
pub fn csv_document(manifest: &RunManifest, header: &str, rows: &[String]) -> Result<String, CliError> {
    let m = serde_json::to_string(manifest).map_err(|e| CliError { code: EXIT_FAILURE, message: e.to_string() })?;
    let mut s = format!("# {m}\n{header}\n");
    for r in rows {
        s.push_str(r);
        s.push('\n');
    }
    Ok(s)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn weight_or_uniform(w: &[f64], n: usize) -> Result<Weight, CliError> {
    if w.is_empty() {
        Ok(Weight::uniform(n))
    } else {
        Ok(Weight::new(w.to_vec())?)
    }
}

fn pair(v: &[f64], name: &str) -> Result<(f64, f64), CliError> {
    match v {
        [lo, hi] => Ok((*lo, *hi)),
        _ => Err(usage(format!("--{name} takes exactly two values lo,hi"))),
    }
}

fn construction(a: &ConstructionArgs) -> Result<ConstructionConfig, CliError> {
    if a.curve != "moment" {
        return Err(usage(format!("unknown curve '{}' (supported: moment)", a.curve)));
    }
    let w = weight_or_uniform(&a.weight, a.n)?;
    if w.n() != a.n {
        return Err(usage(format!("--weight has {} entries but --n is {}", w.n(), a.n)));
    }
    let mut cfg = ConstructionConfig::new(&moment_curve(a.n)?, w, a.subdivision, a.m, a.depth)?.with_rho(a.rho)?;
    if let Some(eta) = a.eta {
        cfg = cfg.with_eta(eta)?;
    }
    cfg.l_min = a.l_min.unwrap_or(cfg.l_min);
    cfg.l_max = a.l_max.or(cfg.l_max);
    cfg.l_gen = a.l_gen.unwrap_or(cfg.l_gen);
    cfg.validate()?;
    Ok(cfg)
}

fn config_value(cfg: &ConstructionConfig) -> Value {
    serde_json::to_value(cfg.summary()).expect("config summary serializes")
}

fn parse_lattice(a: &LatticeArgs) -> Result<LatticeBasis, CliError> {
    let spec = a.lattice.trim();
    if spec == "identity" {
        if a.dim == 0 {
            return Err(usage("--dim must be positive"));
        }
        return Ok(LatticeBasis::standard(a.dim));
    }
    let nums = |s: &str| s.split(',').map(|x| parse_number(x).map_err(usage)).collect::<Result<Vec<f64>, CliError>>();
    if let Some(rest) = spec.strip_prefix("diag:") {
        return Ok(LatticeBasis::new(SquareMatrix::diagonal(&nums(rest)?))?);
    }
    if let Some(rest) = spec.strip_prefix("rows:") {
        let rows = rest.split(';').map(nums).collect::<Result<Vec<_>, _>>()?;
        return Ok(LatticeBasis::new(SquareMatrix::from_rows(&rows)?)?);
    }
    Err(usage(format!("unrecognized lattice '{spec}'")))
}

/// Parse arguments, set up the worker pool and run. Returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let workers = match cli.workers {
        Some(0) => {
            eprintln!("error: --workers must be positive");
            return EXIT_USAGE;
        }
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return EXIT_FAILURE;
        }
    };
    let ctx = Context { started: Instant::now(), workers };
    match pool.install(|| run(&cli.command, &ctx)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn run(cmd: &Command, ctx: &Context) -> Result<(), CliError> {
    match cmd {
        Command::Orbit(a) => cmd_orbit(a, ctx),
        Command::BadCheck(a) => cmd_bad_check(a, ctx),
        Command::Cantor(a) => cmd_cantor(a, ctx),
        Command::Scan(s) => match s {
            ScanCommand::Dangerous(a) => cmd_scan_dangerous(a, ctx),
            ScanCommand::Eq(a) => cmd_scan_eq(a, ctx),
            ScanCommand::Nondiv(a) => cmd_scan_nondiv(a, ctx),
            ScanCommand::Shah(a) => cmd_scan_shah(a, ctx),
            ScanCommand::Minima(a) => cmd_scan_minima(a, ctx),
            ScanCommand::Sublattices(a) => cmd_scan_sublattices(a, ctx),
        },
    }
}

fn cmd_orbit(a: &OrbitArgs, ctx: &Context) -> Result<(), CliError> {
    let x: Point = a.x.parse()?;
    let w = Weight::new(a.weight.clone())?;
    let conv: Convention = a.convention.parse()?;
    let trace = orbit_trace(&x, &w, conv, a.big_t, a.step)?;
    let rows: Vec<String> =
        (0..trace.times.len()).map(|k| format!("{},{},{}", trace.times[k], trace.lambda1[k], trace.floor_so_far[k])).collect();
    let config = json!({ "x": x.spec(), "weight": w.as_slice(), "convention": conv.to_string(), "T": a.big_t, "step": a.step });
    let doc = csv_document(&ctx.manifest("orbit", config, None), "t,lambda1,certified_floor_so_far", &rows)?;
    emit(a.out.as_deref(), &doc)
}

fn cmd_bad_check(a: &BadCheckArgs, ctx: &Context) -> Result<(), CliError> {
    let x: Point = a.x.parse()?;
    let w = Weight::new(a.weight.clone())?;
    let mut payload = serde_json::Map::new();
    payload.insert("mode".into(), json!(a.mode));
    if a.mode != BadMode::Dual {
        let r = badness_constant_direct(&x, &w, a.horizon)?;
        payload.insert("constant".into(), json!(r.constant));
        payload.insert("witness".into(), json!(r.witness));
        payload.insert("horizon".into(), json!(r.horizon));
    }
    if a.mode != BadMode::Direct {
        let only_zero = dual_only_zero_solution(&x, &w, a.c, a.horizon as f64)?;
        payload.insert("dual".into(), json!({ "c": a.c, "N": a.horizon, "only_zero_solution": only_zero }));
    }
    if a.mode == BadMode::Both {
        let c = correspondence_check(&x, &w, a.horizon, a.t_max)?;
        payload.insert("verdict".into(), json!(c.verdict));
        payload.insert("correspondence".into(), serde_json::to_value(&c).expect("report serializes"));
    }
    let config = json!({ "x": x.spec(), "weight": w.as_slice(), "Q": a.horizon, "mode": a.mode, "c": a.c, "t_max": a.t_max });
    emit(a.out.as_deref(), &json_document(&ctx.manifest("bad-check", config, None), &payload)?)
}

/// CSV header of `survivors.csv` for a curve in `R^n` and depth `Q`.
pub fn survivors_header(n: usize, depth: u32) -> String {
    let mut cols = vec!["index".to_string(), "lo".into(), "hi".into(), "midpoint".into()];
    cols.extend((1..=n).map(|i| format!("phi{i}")));
    cols.extend((0..=depth).map(|q| format!("norm_q{q}")));
    cols.push("recheck_pass".into());
    cols.join(",")
}

fn cmd_cantor(a: &CantorArgs, ctx: &Context) -> Result<(), CliError> {
    let cfg = construction(&a.construction)?;
    let mut tree = build_sequence(&cfg)?;
    classify_tree(&cfg, &mut tree)?;
    let richness = if tree.depth() >= 1 {
        serde_json::to_value(richness_report(&tree)?).expect("report serializes")
    } else {
        json!({ "generations": [], "d_upper": 0.0, "survivors": tree.survivors().map(|n| (n.lo, n.hi)).collect::<Vec<_>>() })
    };
    let survivors = recheck_survivors(&cfg, &tree)?;
    let rows: Vec<String> = survivors
        .iter()
        .map(|s| {
            let mut cells = vec![s.index.to_string(), s.lo.to_string(), s.hi.to_string(), s.midpoint.to_string()];
            cells.extend(s.point.iter().map(|v| v.to_string()));
            cells.extend(s.norms.iter().map(|v| v.to_string()));
            cells.push(s.recheck_pass.to_string());
            cells.join(",")
        })
        .collect();
    fs::create_dir_all(&a.out_dir)?;
    let config = config_value(&cfg);
    fs::write(a.out_dir.join("tree.json"), json_document(&ctx.manifest("cantor", config.clone(), None), &tree)?)?;
    fs::write(a.out_dir.join("richness.json"), json_document(&ctx.manifest("cantor", config.clone(), None), &richness)?)?;
    let csv = csv_document(&ctx.manifest("cantor", config, None), &survivors_header(cfg.n(), cfg.depth), &rows)?;
    fs::write(a.out_dir.join("survivors.csv"), csv)?;
    Ok(())
}

fn cmd_scan_dangerous(a: &DangerousArgs, ctx: &Context) -> Result<(), CliError> {
    let mut ca = a.construction.clone();
    ca.depth = ca.depth.max(a.q);
    let cfg = construction(&ca)?;
    let kind = match (a.l, a.l_prime) {
        (Some(l), None) => WindowKind::Dangerous { l },
        (None, Some(l_prime)) => WindowKind::ExtremelyDangerous { l_prime },
        _ => return Err(usage("give exactly one of --l and --l-prime")),
    };
    let dead = if a.all_windows {
        None
    } else {
        let mut c = cfg.clone();
        c.depth = a.q;
        Some(dead_indices(&build_sequence(&c)?, a.q))
    };
    let scan = detect_dangerous(&cfg, dead.as_ref(), a.q, kind, pair(&a.region, "region")?)?;
    let mut config = config_value(&cfg);
    config["scan"] = json!({ "q": a.q, "kind": kind, "all_windows": a.all_windows, "region": a.region });
    let payload = json!({ "count": scan.records.len(), "undecided": scan.undecided, "records": scan.records });
    emit(a.out.as_deref(), &json_document(&ctx.manifest("scan dangerous", config, None), &payload)?)
}

fn cmd_scan_eq(a: &EqArgs, ctx: &Context) -> Result<(), CliError> {
    let cfg = construction(&a.construction)?;
    let mut rows = vec![];
    for &q in &a.q {
        rows.push(match a.s {
            Some(s) => {
                let w = eq_membership(&cfg, s, q)?;
                json!({ "q": q, "s": s, "member": w.is_some(), "witness": w })
            }
            None => json!({ "q": q, "grid": a.grid, "fraction": eq_fraction(&cfg, q, a.grid)? }),
        });
    }
    let mut config = config_value(&cfg);
    config["scan"] = json!({ "q": a.q, "s": a.s, "grid": a.grid });
    emit(a.out.as_deref(), &json_document(&ctx.manifest("scan eq", config, None), &json!({ "results": rows }))?)
}

fn cmd_scan_nondiv(a: &NondivArgs, ctx: &Context) -> Result<(), CliError> {
    let cfg = construction(&a.construction)?;
    let interval = pair(&a.interval, "interval")?;
    let norms = shortest_profile(&cfg, a.t, interval, a.grid)?;
    let hypothesis = wedge_hypothesis(&cfg, a.t, interval)?;
    let rows: Vec<Value> = a
        .eps
        .iter()
        .map(|&e| {
            if !(e > 0.0) {
                return Err(usage("eps must be positive"));
            }
            Ok(json!({ "eps": e, "fraction": fraction_below(&norms, e) }))
        })
        .collect::<Result<_, _>>()?;
    let mut config = config_value(&cfg);
    config["scan"] = json!({ "t": a.t, "interval": a.interval, "eps": a.eps, "grid": a.grid });
    let payload = json!({ "hypothesis": hypothesis, "results": rows });
    emit(a.out.as_deref(), &json_document(&ctx.manifest("scan nondiv", config, None), &payload)?)
}

fn cmd_scan_shah(a: &ShahArgs, ctx: &Context) -> Result<(), CliError> {
    let cfg = construction(&a.construction)?;
    let sweep = empirical_shah_constant(&cfg, a.grade, a.t, a.samples, a.seed)?;
    let mut config = config_value(&cfg);
    config["scan"] = json!({ "t": a.t, "grade": a.grade, "samples": a.samples });
    emit(a.out.as_deref(), &json_document(&ctx.manifest("scan shah", config, Some(a.seed)), &sweep)?)
}

fn cmd_scan_minima(a: &LatticeArgs, ctx: &Context) -> Result<(), CliError> {
    let l = parse_lattice(a)?;
    let p = successive_minima(&l)?;
    let payload = json!({ "minima": p.minima, "witnesses": p.witnesses, "vectors": p.vectors });
    let config = json!({ "lattice": a.lattice, "dim": l.dim() });
    emit(a.out.as_deref(), &json_document(&ctx.manifest("scan minima", config, None), &payload)?)
}

fn cmd_scan_sublattices(a: &SublatticeArgs, ctx: &Context) -> Result<(), CliError> {
    let l = parse_lattice(&a.lattice)?;
    let found = enumerate_primitive_sublattices(&l, a.k, a.rho)?;
    let items: Vec<Value> = found
        .iter()
        .map(|s| Ok(json!({ "vectors": s.vectors(), "covolume": sublattice_covolume(s, &l)? })))
        .collect::<Result<_, Error>>()?;
    let config = json!({ "lattice": a.lattice.lattice, "dim": l.dim(), "k": a.k, "rho": a.rho });
    let payload = json!({ "count": items.len(), "sublattices": items });
    emit(a.lattice.out.as_deref(), &json_document(&ctx.manifest("scan sublattices", config, None), &payload)?)
}
