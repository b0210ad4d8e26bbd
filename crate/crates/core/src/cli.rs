//! Command-line front end: `sweep`, `figures`, `verify` and `state`.
//!
//! Exit codes: 0 on success, 1 when a verification fails (or a file cannot be
//! written), 2 on usage errors.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analytic::e_general;
use crate::error::Error;
use crate::gme::scenario_gme;
use crate::hawking::BlackHoleParams;
use crate::modes_state::{label_string, scenario_density, ScenarioSpec, ORACLE_MODE_CAP};
use crate::sweep::dilaton_grid;
use crate::verify::{full_suite, full_suite_with, GridSize, ORACLE_TOL};

#[derive(Debug, Parser)]
#[command(
    name = "dilaton-gme",
    version,
    about = "Genuine N-partite entanglement near a GHS dilaton black hole"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entanglement as a function of the dilaton, as CSV.
    Sweep(SweepArgs),
    /// Write the fig1/fig2/fig3 curve data (and optional SVG plots).
    Figures(FiguresArgs),
    /// Run the verification suite and print a JSON report.
    Verify(VerifyArgs),
    /// Dump the reduced density matrix of one scenario as CSV triplets.
    State(StateArgs),
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = FRAC_PI_4)]
    pub theta: f64,
    #[arg(long)]
    pub n_horizon: u32,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub q: Option<u32>,
    /// Shorthand for `--p n --q 0`.
    #[arg(long, conflicts_with_all = ["p", "q", "inaccessible"])]
    pub accessible: bool,
    /// Shorthand for `--p 0 --q n`.
    #[arg(long, conflicts_with_all = ["p", "q"])]
    pub inaccessible: bool,
    #[arg(long, default_value_t = 0.0)]
    pub d_min: f64,
    /// Defaults to the mass.
    #[arg(long)]
    pub d_max: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    /// Also compute every row through the explicit partial trace.
    #[arg(long)]
    pub oracle: bool,
    /// Party count for `--oracle`; defaults to `n + 1`.
    #[arg(long)]
    pub n_parties: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FiguresArgs {
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 2001)]
    pub steps: usize,
    /// Also render line plots next to the CSV files.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridChoice {
    Small,
    Default,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = GridChoice::Default)]
    pub grid: GridChoice,
    /// Offset added to the closed form before the oracle comparison; used to
    /// check that failures are reported.
    #[arg(long, hide = true)]
    pub inject_fault: Option<f64>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[arg(long)]
    pub n_parties: usize,
    #[arg(long)]
    pub n_horizon: usize,
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub q: usize,
    #[arg(long, default_value_t = FRAC_PI_4)]
    pub theta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, conflicts_with = "charge")]
    pub dilaton: Option<f64>,
    /// Sets the dilaton through `D = Q^2 / 2M`.
    #[arg(long)]
    pub charge: Option<f64>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Stdout text plus an optional trailing failure.
pub struct Outcome {
    pub stdout: String,
    pub error: Option<CliError>,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            error: None,
        }
    }
}

/// Shortest round-trip-safe form with 17 significant digits.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Figures(a) => cmd_figures(&a).map(Outcome::ok),
        Command::Verify(a) => cmd_verify(&a),
        Command::State(a) => cmd_state(&a).map(Outcome::ok),
    }
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<Outcome, CliError> {
    let n = args.n_horizon;
    let (p, q) = if args.accessible {
        (n, 0)
    } else if args.inaccessible {
        (0, n)
    } else {
        match (args.p, args.q) {
            (Some(p), Some(q)) => (p, q),
            (Some(p), None) if p <= n => (p, n - p),
            (None, Some(q)) if q <= n => (n - q, q),
            _ => {
                return Err(CliError::Usage(
                    "give --p and --q, or --accessible/--inaccessible".into(),
                ))
            }
        }
    };
    if p + q != n {
        return Err(CliError::Usage(format!(
            "p + q = {} differs from --n-horizon {n}",
            p + q
        )));
    }
    let base = BlackHoleParams::new(args.mass, 0.0, args.omega)?;
    let d_max = args.d_max.unwrap_or(args.mass);
    if d_max > args.mass {
        return Err(CliError::Usage(format!(
            "--d-max {d_max} exceeds --mass {}",
            args.mass
        )));
    }
    if !(args.d_min >= 0.0 && args.d_min <= d_max) {
        return Err(CliError::Usage(format!(
            "--d-min {} outside [0, {d_max}]",
            args.d_min
        )));
    }
    if args.steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&args.theta) {
        return Err(CliError::Usage(format!(
            "--theta {} outside [0, pi/2]",
            args.theta
        )));
    }
    let spec = if args.oracle {
        let n_parties = args.n_parties.unwrap_or(n as usize + 1);
        let spec = ScenarioSpec::new(n_parties, n as usize, p as usize, q as usize, args.theta)?;
        if n_parties + n as usize > ORACLE_MODE_CAP {
            return Err(Error::ScaleCap {
                size: n_parties + n as usize,
                cap: ORACLE_MODE_CAP,
            }
            .into());
        }
        Some(spec)
    } else {
        None
    };

    let mut out = String::from("D,alpha,beta,E_analytic");
    if spec.is_some() {
        out.push_str(",E_oracle");
    }
    out.push('\n');
    let mut worst: f64 = 0.0;
    for d in dilaton_grid(args.d_min, d_max, args.steps) {
        let pair = base.with_dilaton(d)?.bogoliubov();
        let e = e_general(args.theta, &pair, p, q);
        write!(
            out,
            "{},{},{},{}",
            fmt_num(d),
            fmt_num(pair.alpha()),
            fmt_num(pair.beta()),
            fmt_num(e)
        )
        .unwrap();
        if let Some(spec) = &spec {
            let oracle = scenario_gme(spec, &pair)?;
            worst = worst.max((oracle - e).abs());
            write!(out, ",{}", fmt_num(oracle)).unwrap();
        }
        out.push('\n');
    }
    let error = (worst > ORACLE_TOL).then(|| {
        CliError::Failed(format!(
            "oracle disagrees with the closed form by {worst:e}"
        ))
    });
    Ok(Outcome { stdout: out, error })
}

/// One curve of a figure.
struct Curve {
    header: String,
    p: u32,
    q: u32,
    theta: f64,
}

fn theta_tag(theta: f64) -> &'static str {
    if theta == PI / 12.0 {
        "pi_12"
    } else if theta == FRAC_PI_6 {
        "pi_6"
    } else {
        "pi_4"
    }
}

fn figure_curves() -> [(&'static str, Vec<Curve>); 3] {
    let panels = [FRAC_PI_6, FRAC_PI_4];
    let fig1 = [5, 20, 80]
        .iter()
        .flat_map(|&n| {
            panels.iter().map(move |&t| Curve {
                header: format!("E_n{n}_theta_{}", theta_tag(t)),
                p: n,
                q: 0,
                theta: t,
            })
        })
        .collect();
    let fig2 = [8, 10, 12]
        .iter()
        .flat_map(|&n| {
            panels.iter().map(move |&t| Curve {
                header: format!("E_n{n}_theta_{}", theta_tag(t)),
                p: 0,
                q: n,
                theta: t,
            })
        })
        .collect();
    let fig3 = [(8, 4), (32, 2), (4, 8), (2, 32)]
        .iter()
        .flat_map(|&(p, q)| {
            [PI / 12.0, FRAC_PI_6, FRAC_PI_4]
                .into_iter()
                .map(move |t| Curve {
                    header: format!("E_p{p}_q{q}_theta_{}", theta_tag(t)),
                    p,
                    q,
                    theta: t,
                })
        })
        .collect();
    [("fig1", fig1), ("fig2", fig2), ("fig3", fig3)]
}

/// Writes `fig1.csv`, `fig2.csv` and `fig3.csv` (`M = omega = 1`) and returns
/// a short listing of the files written.
pub fn cmd_figures(args: &FiguresArgs) -> Result<String, CliError> {
    if args.steps < 2 {
        return Err(CliError::Usage("--steps must be at least 2".into()));
    }
    fs::create_dir_all(&args.out_dir).map_err(|e| io_error(&args.out_dir, e))?;
    let base = BlackHoleParams::new(1.0, 0.0, 1.0)?;
    let grid = dilaton_grid(0.0, 1.0, args.steps);
    let pairs: Vec<_> = grid
        .iter()
        .map(|&d| base.with_dilaton(d).map(|h| h.bogoliubov()))
        .collect::<Result<_, _>>()?;

    let mut listing = String::new();
    for (name, curves) in figure_curves() {
        let columns: Vec<Vec<f64>> = curves
            .iter()
            .map(|c| {
                pairs
                    .iter()
                    .map(|pair| e_general(c.theta, pair, c.p, c.q))
                    .collect()
            })
            .collect();
        let mut csv = String::from("D");
        for c in &curves {
            csv.push(',');
            csv.push_str(&c.header);
        }
        csv.push('\n');
        for (i, d) in grid.iter().enumerate() {
            csv.push_str(&fmt_num(*d));
            for col in &columns {
                csv.push(',');
                csv.push_str(&fmt_num(col[i]));
            }
            csv.push('\n');
        }
        let path = args.out_dir.join(format!("{name}.csv"));
        fs::write(&path, csv).map_err(|e| io_error(&path, e))?;
        writeln!(listing, "{}", path.display()).unwrap();

        if args.svg {
            let headers: Vec<&str> = curves.iter().map(|c| c.header.as_str()).collect();
            let svg = render_svg(name, &grid, &headers, &columns);
            let path = args.out_dir.join(format!("{name}.svg"));
            fs::write(&path, svg).map_err(|e| io_error(&path, e))?;
            writeln!(listing, "{}", path.display()).unwrap();
        }
    }
    Ok(listing)
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Failed(format!("{}: {e}", path.display()))
}

const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// Minimal line plot: E against D with one polyline per column.
fn render_svg(title: &str, xs: &[f64], headers: &[&str], columns: &[Vec<f64>]) -> String {
    let (w, h, left, right, top, bottom) = (720.0, 440.0, 60.0, 200.0, 30.0, 50.0);
    let (pw, ph) = (w - left - right, h - top - bottom);
    let (x0, x1) = (xs[0], xs[xs.len() - 1]);
    let y_max = columns
        .iter()
        .flatten()
        .copied()
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| top + ph - y / y_max * ph;

    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#).unwrap();
    writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="18" text-anchor="middle">{title}</text>"#,
        left + pw / 2.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<path d="M{left},{top} V{} H{}" fill="none" stroke="black"/>"#,
        top + ph,
        left + pw
    )
    .unwrap();
    for k in 0..=4 {
        let fx = x0 + (x1 - x0) * k as f64 / 4.0;
        let fy = y_max * k as f64 / 4.0;
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{fx:.2}</text>"#,
            sx(fx),
            top + ph + 16.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{fy:.3}</text>"#,
            left - 6.0,
            sy(fy) + 4.0
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">D</text>"#,
        left + pw / 2.0,
        h - 10.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle">E</text>"#,
        top + ph / 2.0
    )
    .unwrap();
    for (i, (col, name)) in columns.iter().zip(headers).enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = xs
            .iter()
            .zip(col)
            .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" points="{}"/>"#,
            points.join(" ")
        )
        .unwrap();
        let ly = top + 14.0 * i as f64 + 10.0;
        writeln!(
            s,
            r#"<text x="{}" y="{ly}" fill="{color}">{name}</text>"#,
            left + pw + 10.0
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let size = match args.grid {
        GridChoice::Small => GridSize::Small,
        GridChoice::Default => GridSize::Default,
    };
    let report = match args.inject_fault {
        None => full_suite(size)?,
        Some(offset) => full_suite_with(size, move |pt, pair| {
            e_general(
                pt.spec.theta(),
                pair,
                pt.spec.p() as u32,
                pt.spec.q() as u32,
            ) + offset
        })?,
    };
    let mut stdout = report.to_json();
    stdout.push('\n');
    let error = (!report.passed()).then(|| {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| c.status == crate::verify::Status::Fail)
            .map(|c| c.name.as_str())
            .collect();
        CliError::Failed(format!("failed checks: {}", failed.join(", ")))
    });
    Ok(Outcome { stdout, error })
}

/// Upper-triangle triplets (the matrix is symmetric) after a mode legend.
pub fn cmd_state(args: &StateArgs) -> Result<String, CliError> {
    let params = match (args.dilaton, args.charge) {
        (_, Some(charge)) => BlackHoleParams::from_charge(args.mass, charge, args.omega)?,
        (d, None) => BlackHoleParams::new(args.mass, d.unwrap_or(0.0), args.omega)?,
    };
    let spec = ScenarioSpec::new(args.n_parties, args.n_horizon, args.p, args.q, args.theta)?;
    let rho = scenario_density(&spec, &params.bogoliubov())?;
    let width = rho.n_modes();
    let mut out = String::from("# modes");
    for m in rho.modes() {
        write!(out, ",{m}").unwrap();
    }
    out.push_str("\nrow,col,value\n");
    for ((r, c), v) in rho.entries().filter(|((r, c), _)| r <= c) {
        writeln!(
            out,
            "{},{},{}",
            label_string(r, width),
            label_string(c, width),
            fmt_num(v)
        )
        .unwrap();
    }
    Ok(out)
}
