//! Command-line driver: `resonance`, `transport`, `solve`, `approx-error` and `inflate`.
//!
//! Every run writes `<name>.csv` and `<name>.meta.json` into `--output-dir`. A
//! `--config` file of `key=value` lines supplies defaults that flags override.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::approx::{error_order, ApproxOrder, ErrorOrderConfig};
use crate::error::{Error, Result};
use crate::inflation::{records_to_csv, run_inflation, Case, ExperimentSpec};
use crate::modes::{wiener_norm, ModeField, ModeIndex, Rational};
use crate::resonance::{enumerate_resonant, resonant_cubic_1d, resonant_cubic_multid, ResonantTuple};
use crate::spectral::{self, SolverConfig, SplitStepSolver};
use crate::transport::{build_system, integrate_corrector, integrate_transport};

#[derive(Parser, Debug)]
#[command(name = "nls-inflation", version, about = "Geometric-optics and norm-inflation experiments for periodic NLS")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate resonant tuples for a target mode
    #[command(args_override_self = true)]
    Resonance(ResonanceArgs),
    /// Integrate the amplitude system (and the 1-D cubic corrector when --eps is given)
    #[command(args_override_self = true)]
    Transport(TransportArgs),
    /// Run the split-step solver from plane-wave data
    #[command(args_override_self = true)]
    Solve(SolveArgs),
    /// Measure approximation error orders against the solver
    #[command(name = "approx-error", args_override_self = true)]
    ApproxError(ApproxErrorArgs),
    /// Run a norm-inflation sweep
    #[command(args_override_self = true)]
    Inflate(InflateArgs),
}

#[derive(Args, Debug, Serialize)]
struct Common {
    /// Directory for the CSV and metadata files
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,
    /// File stem of the outputs (defaults to the subcommand name)
    #[arg(long)]
    name: Option<String>,
    /// Optional file of key=value defaults
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker thread cap
    #[arg(long)]
    threads: Option<usize>,
    /// Recorded in metadata; no subcommand draws random numbers
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct ResonanceArgs {
    #[arg(long, default_value_t = 1)]
    sigma: usize,
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Target mode, e.g. `0` or `1,-2`
    #[arg(long, allow_hyphen_values = true)]
    j: String,
    /// Box half-width
    #[arg(long = "K")]
    k: i64,
    /// `oracle` (brute force) or `closed` (cubic closed forms)
    #[arg(long, default_value = "oracle")]
    method: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct DataArgs {
    /// Unit-amplitude modes separated by `;`, e.g. `1;2` or `1,0;0,1;1,1`
    #[arg(long, allow_hyphen_values = true)]
    modes: Option<String>,
    /// Mode-field JSON file (slow modes)
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, default_value_t = 1)]
    sigma: usize,
    #[arg(long)]
    renormalized: bool,
}

#[derive(Args, Debug, Serialize)]
struct TransportArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long = "T", default_value_t = 1.0)]
    t_end: f64,
    /// Step; defaults to min(1e-3, eps/200) with a corrector, 1e-3 otherwise
    #[arg(long)]
    dt: Option<f64>,
    /// Semiclassical parameter; enables the corrector (d = sigma = 1)
    #[arg(long, value_parser = eps_arg)]
    eps: Option<f64>,
    /// Closure box half-width (defaults to twice the largest data component)
    #[arg(long = "K")]
    k: Option<i64>,
    /// Write every n-th sample
    #[arg(long, default_value_t = 1)]
    every: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct SolveArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, value_parser = eps_arg)]
    eps: f64,
    #[arg(long = "T", default_value_t = 0.5)]
    t_end: f64,
    /// Defaults to eps/100
    #[arg(long)]
    dt: Option<f64>,
    /// +1 defocusing, -1 focusing
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    mu: f64,
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct ApproxErrorArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value = "first")]
    order: String,
    /// Comma-separated, each `1/n` or a decimal equal to one
    #[arg(long, default_value = "1/8,1/16,1/32,1/64")]
    eps_list: String,
    #[arg(long = "T", default_value_t = 0.5)]
    t_end: f64,
    /// Solver step as a multiple of eps
    #[arg(long, default_value_t = 0.01)]
    dt_ratio: f64,
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    mu: f64,
    #[arg(long = "K")]
    k: Option<i64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Serialize)]
struct InflateArgs {
    #[arg(long)]
    case: String,
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    r: f64,
    /// Norm exponent, a number >= 1 or `inf`
    #[arg(long, default_value = "2")]
    p: String,
    /// Reduced rational `p/q`; chosen automatically when absent
    #[arg(long)]
    beta: Option<String>,
    #[arg(long = "baseN-list")]
    base_n_list: Option<String>,
    #[arg(long, default_value_t = 0.1)]
    tau: f64,
    #[arg(long)]
    sigma: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long = "K")]
    k: Option<i64>,
    #[arg(long)]
    cross_validate: bool,
    #[command(flatten)]
    common: Common,
}

/// Parses `argv` (including the program name), runs the subcommand and returns the exit code.
///
/// Failures print one line `error: <reason>: <message>` to stderr and return 2.
pub fn parse_and_dispatch<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let argv = match inject_config(argv) {
        Ok(a) => a,
        Err(e) => return report(e.reason(), &e.to_string()),
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("").trim_start_matches("error: ");
            return report("invalid-arguments", first);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => report(e.reason(), &e.to_string()),
    }
}

fn report(reason: &str, message: &str) -> i32 {
    eprintln!("error: {reason}: {}", message.replace('\n', " "));
    2
}

/// Inserts `--key value` pairs from the config file right after the subcommand, so
/// that flags given on the command line (which come later) override them.
fn inject_config(argv: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    for (i, a) in argv.iter().enumerate() {
        if a == "--config" {
            path = argv.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else {
        return Ok(argv);
    };
    if argv.len() < 2 {
        return Ok(argv);
    }
    let text = fs::read_to_string(&path)?;
    let mut injected = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidParameters(format!("{path}:{}: expected key=value", lineno + 1))
        })?;
        let (key, value) = (key.trim().replace('_', "-"), value.trim());
        if key.is_empty() || key.starts_with('-') || key == "config" || key.contains(char::is_whitespace) {
            return Err(Error::InvalidParameters(format!("{path}:{}: invalid key '{key}'", lineno + 1)));
        }
        match value {
            "true" => injected.push(format!("--{key}")),
            "false" => {}
            _ => injected.push(format!("--{key}={value}")),
        }
    }
    let mut out = Vec::with_capacity(argv.len() + injected.len());
    out.extend_from_slice(&argv[..2]);
    out.extend(injected);
    out.extend_from_slice(&argv[2..]);
    Ok(out)
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Resonance(a) => with_threads(&a.common, || resonance(&a)),
        Command::Transport(a) => with_threads(&a.common, || transport(&a)),
        Command::Solve(a) => with_threads(&a.common, || solve(&a)),
        Command::ApproxError(a) => with_threads(&a.common, || approx_error(&a)),
        Command::Inflate(a) => with_threads(&a.common, || inflate(&a)),
    }
}

fn with_threads<T>(common: &Common, f: impl FnOnce() -> Result<T> + Send) -> Result<T>
where
    T: Send,
{
    match common.threads {
        None => f(),
        Some(0) => Err(Error::InvalidParameters("--threads must be >= 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParameters(format!("thread pool: {e}")))?
            .install(f),
    }
}

struct Outputs {
    dir: PathBuf,
    stem: String,
}

impl Outputs {
    fn new(common: &Common, default: &str) -> Result<Self> {
        fs::create_dir_all(&common.output_dir)?;
        Ok(Outputs {
            dir: common.output_dir.clone(),
            stem: common.name.clone().unwrap_or_else(|| default.to_string()),
        })
    }

    fn path(&self, suffix: &str) -> PathBuf {
        self.dir.join(format!("{}{suffix}", self.stem))
    }

    fn write(&self, suffix: &str, contents: &str) -> Result<PathBuf> {
        let p = self.path(suffix);
        fs::write(&p, contents)?;
        Ok(p)
    }

    fn write_meta(&self, subcommand: &str, parameters: &impl Serialize, derived: Value) -> Result<PathBuf> {
        let meta = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": subcommand,
            "parameters": serde_json::to_value(parameters)?,
            "derived": derived,
        });
        self.write(".meta.json", &(serde_json::to_string_pretty(&meta)? + "\n"))
    }
}

/// `1` or `1,-2`, optionally in parentheses.
pub fn parse_mode(s: &str) -> Result<ModeIndex> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    let comps: std::result::Result<Vec<i64>, _> = inner.split(',').map(|c| c.trim().parse::<i64>()).collect();
    match comps {
        Ok(c) if !c.is_empty() => Ok(ModeIndex::new(&c)),
        _ => Err(Error::InvalidParameters(format!("cannot parse mode '{s}'"))),
    }
}

/// Modes separated by `;`.
pub fn parse_mode_list(s: &str) -> Result<Vec<ModeIndex>> {
    s.split(';').filter(|t| !t.trim().is_empty()).map(parse_mode).collect()
}

/// `1/8`, `0.125` or `8` style values; each must be the reciprocal of an integer.
pub fn parse_eps(s: &str) -> Result<f64> {
    let t = s.trim();
    let bad = || Error::InvalidParameters(format!("cannot parse eps '{t}'"));
    let eps = match t.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            a / b
        }
        None => t.parse().map_err(|_| bad())?,
    };
    let inv = 1.0 / eps;
    if !(eps > 0.0 && eps <= 1.0) || (inv - inv.round()).abs() > 1e-9 * inv {
        return Err(Error::InvalidParameters(format!("eps = {t} is not 1/n for an integer n >= 1")));
    }
    Ok(1.0 / inv.round())
}

fn eps_arg(s: &str) -> std::result::Result<f64, String> {
    parse_eps(s).map_err(|e| e.to_string())
}

fn parse_p(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" | "infinity" | "Inf" => Ok(f64::INFINITY),
        t => t
            .parse()
            .map_err(|_| Error::InvalidParameters(format!("cannot parse norm exponent '{t}'"))),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::InvalidParameters(format!("cannot parse {what} '{}'", t.trim())))
        })
        .collect()
}

fn load_data(data: &DataArgs) -> Result<ModeField> {
    let field = match (&data.modes, &data.input) {
        (Some(_), Some(_)) => {
            return Err(Error::InvalidParameters("give either --modes or --input, not both".into()));
        }
        (Some(m), None) => ModeField::unit_modes(data.d, parse_mode_list(m)?)?,
        (None, Some(path)) => serde_json::from_str(&fs::read_to_string(path)?)?,
        (None, None) => return Err(Error::InvalidParameters("initial data needs --modes or --input".into())),
    };
    if field.dim() != data.d {
        return Err(Error::DimensionMismatch {
            expected: data.d,
            found: field.dim(),
        });
    }
    if field.is_empty() {
        return Err(Error::EmptySupport);
    }
    Ok(field)
}

fn mode_columns(prefix: &str, d: usize) -> Vec<String> {
    if d == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=d).map(|i| format!("{prefix}_{i}")).collect()
    }
}

fn push_mode(row: &mut Vec<String>, m: &ModeIndex) {
    row.extend(m.components().iter().map(|c| c.to_string()));
}

fn resonance(a: &ResonanceArgs) -> Result<()> {
    let j = parse_mode(&a.j)?;
    if j.dim() != a.d {
        return Err(Error::DimensionMismatch {
            expected: a.d,
            found: j.dim(),
        });
    }
    let tuples: Vec<ResonantTuple> = match (a.method.as_str(), a.sigma, a.d) {
        ("oracle", _, _) => enumerate_resonant(&j, a.sigma, a.k)?,
        ("closed", 1, 1) => resonant_cubic_1d(&j, a.k)?,
        ("closed", 1, _) => resonant_cubic_multid(&j, a.k)?,
        ("closed", _, _) => {
            return Err(Error::Unsupported("closed forms exist for sigma = 1 only".into()));
        }
        (m, _, _) => return Err(Error::InvalidParameters(format!("unknown method '{m}' (oracle or closed)"))),
    };
    let mut header = vec!["sigma".to_string(), "d".to_string()];
    header.extend(mode_columns("j", a.d));
    for l in 1..=2 * a.sigma + 1 {
        header.extend(mode_columns(&format!("k{l}"), a.d));
    }
    let mut csv = header.join(",") + "\n";
    for t in &tuples {
        let mut row = vec![a.sigma.to_string(), a.d.to_string()];
        push_mode(&mut row, &t.target);
        for e in &t.entries {
            push_mode(&mut row, e);
        }
        csv.push_str(&(row.join(",") + "\n"));
    }
    let out = Outputs::new(&a.common, "resonance")?;
    out.write(".csv", &csv)?;
    out.write_meta("resonance", a, json!({ "count": tuples.len() }))?;
    Ok(())
}

fn transport(a: &TransportArgs) -> Result<()> {
    let alpha = load_data(&a.data)?;
    let support: Vec<ModeIndex> = alpha.support().cloned().collect();
    let widest = support.iter().map(|m| m.linf()).max().unwrap_or(1);
    let k_box = a.k.unwrap_or(2 * widest);
    let sys = build_system(&support, a.data.sigma, a.data.d, a.data.renormalized, k_box)?;
    if a.every == 0 {
        return Err(Error::InvalidParameters("--every must be >= 1".into()));
    }
    let eps = a.eps;
    let dt = a.dt.unwrap_or_else(|| match eps {
        Some(e) => 1e-3f64.min(e / 200.0),
        None => 1e-3,
    });
    let traj = integrate_transport(&alpha, &sys, a.t_end, dt)?;
    let corr = eps.map(|e| integrate_corrector(&traj, &sys, e, dt)).transpose()?;

    let mut modes: Vec<ModeIndex> = sys.active_modes().to_vec();
    if let Some(c) = &corr {
        for m in c.modes() {
            if !modes.contains(m) {
                modes.push(m.clone());
            }
        }
        modes.sort();
    }
    let mut header = vec!["t".to_string()];
    header.extend(mode_columns("j", a.data.d));
    header.extend(["re_a", "im_a", "re_b", "im_b"].map(String::from));
    let mut csv = header.join(",") + "\n";
    let last = traj.len() - 1;
    for i in (0..traj.len()).filter(|i| i % a.every == 0 || *i == last) {
        for m in &modes {
            let av = traj.value(i, m);
            let bv = corr.as_ref().map(|c| c.value(i, m)).unwrap_or_default();
            let _ = writeln!(
                csv,
                "{:e},{},{:e},{:e},{:e},{:e}",
                traj.times()[i],
                m.components().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
                av.re,
                av.im,
                bv.re,
                bv.im
            );
        }
    }
    let out = Outputs::new(&a.common, "transport")?;
    out.write(".csv", &csv)?;
    let created: Vec<String> = sys
        .active_modes()
        .iter()
        .filter(|m| !support.contains(m))
        .map(|m| m.to_string())
        .collect();
    out.write_meta(
        "transport",
        a,
        json!({
            "dt": dt,
            "k_box": k_box,
            "active_modes": sys.active_modes().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "created_modes": created,
            "corrector_modes": corr.as_ref().map(|c| c.modes().iter().map(|m| m.to_string()).collect::<Vec<_>>()),
        }),
    )?;
    Ok(())
}

fn solve(a: &SolveArgs) -> Result<()> {
    let alpha = load_data(&a.data)?;
    let eps = a.eps;
    let cfg = SolverConfig {
        eps,
        dt: a.dt.unwrap_or(eps / 100.0),
        sigma: a.data.sigma,
        renormalized: a.data.renormalized,
        mu: a.mu,
    };
    cfg.validate()?;
    if !(a.t_end > 0.0) || a.samples == 0 {
        return Err(Error::InvalidParameters("need T > 0 and samples >= 1".into()));
    }
    let n = cfg.inverse_eps()? as i64;
    let widest = alpha.support().map(|m| m.linf()).max().unwrap_or(1);
    let points = spectral::grid_size_for(widest, eps, cfg.sigma);
    let physical = {
        let mut f = ModeField::new(alpha.dim());
        for (j, c) in alpha.iter() {
            f.set(j.scale(n), *c)?;
        }
        f
    };
    let mut u = spectral::modes_to_grid(&physical, points)?;
    let mut solver = SplitStepSolver::new(alpha.dim(), points, cfg)?;
    let mut csv = String::from("t,mass,wiener_norm\n");
    let interval = a.t_end / a.samples as f64;
    for s in 0..=a.samples {
        if s > 0 {
            solver.advance(&mut u, interval)?;
        }
        let coeffs = spectral::grid_coefficients(&u);
        let wiener: f64 = coeffs.iter().map(|c| c.norm()).sum();
        let _ = writeln!(csv, "{:e},{:e},{:e}", s as f64 * interval, u.mass(), wiener);
    }
    let mut slow = spectral::grid_to_slow_modes(&u, n as usize)?;
    slow.prune(1e-14);
    let out = Outputs::new(&a.common, "solve")?;
    out.write(".csv", &csv)?;
    out.write(".final.json", &(serde_json::to_string(&slow)? + "\n"))?;
    out.write_meta(
        "solve",
        a,
        json!({ "grid_points": points, "dt": cfg.dt, "final_slow_wiener_norm": wiener_norm(&slow) }),
    )?;
    Ok(())
}

fn approx_error(a: &ApproxErrorArgs) -> Result<()> {
    let alpha = load_data(&a.data)?;
    let order: ApproxOrder = a.order.parse()?;
    let eps_list: Vec<f64> = a.eps_list.split(',').map(parse_eps).collect::<Result<_>>()?;
    let support: Vec<ModeIndex> = alpha.support().cloned().collect();
    let widest = support.iter().map(|m| m.linf()).max().unwrap_or(1);
    let k_box = a.k.unwrap_or(2 * widest);
    let sys = build_system(&support, a.data.sigma, a.data.d, a.data.renormalized, k_box)?;
    let cfg = ErrorOrderConfig {
        solver_dt_ratio: a.dt_ratio,
        samples: a.samples,
        mu: a.mu,
    };
    if a.mu != 1.0 && a.mu != -1.0 {
        return Err(Error::InvalidParameters(format!("mu = {} must be +1 or -1", a.mu)));
    }
    let report = error_order(&alpha, &sys, &cfg, &eps_list, order, a.t_end)?;
    let mut csv = String::from("eps,sup_error\n");
    for p in &report.points {
        let _ = writeln!(csv, "{:e},{:e}", p.eps, p.sup_error);
    }
    let _ = writeln!(csv, "# fit slope={:.6},residual={:.6}", report.slope, report.residual);
    let out = Outputs::new(&a.common, "approx-error")?;
    out.write(".csv", &csv)?;
    out.write_meta("approx-error", a, serde_json::to_value(&report)?)?;
    Ok(())
}

fn inflate(a: &InflateArgs) -> Result<()> {
    let case: Case = a.case.parse()?;
    let mut spec = ExperimentSpec::new(case, a.s);
    spec.r = a.r;
    spec.p = parse_p(&a.p)?;
    spec.beta = a.beta.as_deref().map(str::parse::<Rational>).transpose()?;
    if let Some(list) = &a.base_n_list {
        spec.base_n_list = parse_list(list, "baseN")?;
    }
    spec.tau = a.tau;
    spec.sigma = a.sigma.unwrap_or(spec.sigma);
    spec.d = a.d.unwrap_or(spec.d);
    spec.k_box = a.k;
    spec.cross_validate = a.cross_validate;
    let run = run_inflation(&spec)?;
    let out = Outputs::new(&a.common, "inflate")?;
    out.write(".csv", &records_to_csv(&run.records))?;
    let mut derived = serde_json::to_value(&run)?;
    if let Value::Object(map) = &mut derived {
        map.remove("records");
        map.insert("beta".into(), Value::String(run.beta.to_string()));
    }
    out.write_meta("inflate", a, derived)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_helpers() {
        assert_eq!(parse_mode("(1,-2)").unwrap(), ModeIndex::from([1, -2]));
        assert_eq!(parse_mode_list("1;2").unwrap().len(), 2);
        assert!(parse_mode("a").is_err());
        assert_eq!(parse_eps("1/16").unwrap(), 0.0625);
        assert_eq!(parse_eps("0.125").unwrap(), 0.125);
        assert!(parse_eps("0.3").is_err());
        assert!(parse_p("inf").unwrap().is_infinite());
    }

    #[test]
    fn config_injection_order() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.cfg");
        fs::write(&cfg, "# defaults\ns=-0.9\ncross_validate=true\nr=false\n").unwrap();
        let argv: Vec<String> = ["bin", "inflate", "--config", cfg.to_str().unwrap(), "--s", "-0.5"]
            .map(String::from)
            .to_vec();
        let out = inject_config(argv).unwrap();
        assert_eq!(&out[2..4], &["--s=-0.9".to_string(), "--cross-validate".to_string()]);
        assert_eq!(out.last().unwrap(), "-0.5");
    }
}
