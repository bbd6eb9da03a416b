//! Command-line driver for the satlab experiments.
//!
//! Each subcommand runs one experiment, writes its records as CSV or JSON
//! (PPM for `render`) to `--out` or stdout, and prints a one-line summary on
//! stderr. Exit codes: 0 success, 1 an asserted bound was violated, 2 the
//! numerics failed, 64 malformed input.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod report;

use std::f64::consts::{LN_2, PI};
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use satlab_core::asymp::{
    corollary_check, divergence_scan, kendall_tau, lambda_of_t, log_grid, residue_contour, residue_fit, small_limb_scan,
    CorollaryRecord, ExperimentRecord, LimbScanRecord, ResidueReport,
};
use satlab_core::hgeom::{affine_between_tori, claim_case, dist_hr, quadruple_search, SearchConfig};
use satlab_core::params::{big_lambda, c_of_lambda, LimbScanConfig};
use satlab_core::qdyn::{find_misiurewicz, misiurewicz_seeds, MisiurewiczPoint};
use satlab_core::render::{encode_ppm, membership_csv, render_locus, satellite_component, Plane, Viewport};
use satlab_core::{Complex64, Error, IrreducibleRational, Tolerances};

pub use report::{emit_report, Cell, Format, Row};

/// Every default used by the commands.
pub mod defaults {
    /// Fit grid for `residue`, in `t`.
    pub const RESIDUE_TMIN: f64 = 1e-4;
    pub const RESIDUE_TMAX: f64 = 1e-2;
    pub const RESIDUE_POINTS: usize = 12;
    /// Grid for `expand`.
    pub const EXPAND_TMIN: f64 = 1e-4;
    pub const EXPAND_TMAX: f64 = 1e-1;
    pub const EXPAND_POINTS: usize = 20;
    /// Grid for `diverge`.
    pub const DIVERGE_TMIN: f64 = 1e-6;
    pub const DIVERGE_TMAX: f64 = 1e-2;
    pub const DIVERGE_POINTS: usize = 41;
    /// Records of `diverge` with `t` at most this form the tail that must
    /// be monotone. With fewer than two such records the whole grid is used.
    pub const DIVERGE_TAIL: f64 = 1e-3;
    /// Sublimb range `n` for `limbs` and `corollary`.
    pub const N_MIN: i64 = 2;
    pub const N_MAX: i64 = 8;
    /// Largest denominator accepted by the residue contour.
    pub const Q_CAP: i64 = 7;
    /// Slack on the residue lower bound, absorbing quadrature rounding.
    pub const RESIDUE_SLACK: f64 = 1e-6;
    /// Quadruple search.
    pub const TORI_EPS: f64 = 0.1;
    pub const TORI_GRID: usize = 32;
    /// Agreement of `log K` with the distance.
    pub const TORI_LOGK_TOL: f64 = 1e-10;
    /// Rendering.
    pub const RENDER_SIZE: usize = 512;
    pub const RENDER_MAX_ITER: usize = 1000;
    pub const SMALL_CENTER: (f64, f64) = (1.0, 0.0);
    pub const SMALL_HALF_WIDTH: f64 = 3.2;
    pub const BIG_HALF_WIDTH: f64 = 1.0;
    /// Seed search for `misiurewicz` when no seed is given.
    pub const MISIUREWICZ_GRID: usize = 241;
    pub const MISIUREWICZ_HALF_WIDTH: f64 = 3.2;
}

/// What each command checks, as printed by `--list-checks`.
pub const CHECKS: &[(&str, &str)] = &[
    ("residue", "Re Res_{p/q} >= 1/(2 log 2) + q/4 for q >= 2 and Re Res_{0/1} >= 1 (Buff-Epstein lower bound); fit of the second order expansion against the contour value is reported"),
    ("expand", "Lambda(e^{it}) = -it/q - Res_{p/q} (it/q)^2 + O(t^3): the second order remainder is smaller than the first order one at every t"),
    ("diverge", "d(Lambda(e^{it}), M(e^{it})) increases as t decreases over the tail t <= 1e-3 when q != Q; the bound 2 log(|Q-q|/t) is reported alongside"),
    ("limbs", "n times the hyperbolic diameter of the (n^2-1)/n^3 sublimbs does not grow with n (Kendall tau <= 0); root scaling against Res_{p/q} is reported"),
    ("corollary", "distance between the (n^2-1)/n^3 sublimb roots of p/q and P/Q increases strictly with n when q != Q"),
    ("tori", "the affine stretch between the tori has log K equal to the distance, and a lattice quadruple of the predicted case has log(mod) >= d - eps"),
    ("render", "in the Lambda plane, the satellite component lies in the disk |Lambda - log 2| <= log 2 up to one pixel diagonal"),
    ("misiurewicz", "P_lambda^{qm}(-lambda^2/4) = 0 with m minimal; no bound is asserted"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    BoundViolated = 1,
    Numerical = 2,
    Usage = 64,
}

/// A rational as given on the command line, reduced to lowest terms.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalArg {
    pub value: IrreducibleRational,
    pub text: String,
    pub reduced: bool,
}

fn parse_rational(s: &str) -> Result<RationalArg, String> {
    let (p, q) = s.split_once('/').ok_or_else(|| format!("expected p/q, got {s:?}"))?;
    let p: i64 = p.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let q: i64 = q.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    let (value, reduced) = IrreducibleRational::reduced(p, q).map_err(|e| e.to_string())?;
    Ok(RationalArg { value, text: s.to_string(), reduced })
}

/// `re,im` or a bare real.
fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("expected re,im, got {s:?}"));
    let z = match s.split_once(',') {
        Some((re, im)) => Complex64::new(parse(re)?, parse(im)?),
        None => Complex64::new(parse(s)?, 0.0),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "satlab", version, about = "Experiments on the satellite limbs of the quadratic family")]
pub struct Cli {
    /// Print what each command checks and exit.
    #[arg(long)]
    pub list_checks: bool,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format for tabular commands.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON file overriding numerical tolerances; missing fields keep defaults.
    #[arg(long, global = true)]
    pub tolerances: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Args)]
pub struct Grid {
    #[arg(long)]
    pub tmin: Option<f64>,
    #[arg(long)]
    pub tmax: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
}

impl Grid {
    fn resolve(&self, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, String> {
        let (lo, hi, n) = (self.tmin.unwrap_or(lo), self.tmax.unwrap_or(hi), self.points.unwrap_or(n));
        if !(lo > 0.0 && lo <= hi && hi <= PI / 4.0) {
            return Err(format!("need 0 < tmin <= tmax <= pi/4, got {lo} and {hi}"));
        }
        if n == 0 || (n == 1 && lo != hi) {
            return Err("the t grid needs at least one point, and two when tmin < tmax".into());
        }
        Ok(if n == 1 { vec![hi] } else { log_grid(lo, hi, n) })
    }
}

#[derive(Debug, Clone, Args)]
pub struct NRange {
    #[arg(long, default_value_t = defaults::N_MIN)]
    pub nmin: i64,
    #[arg(long, default_value_t = defaults::N_MAX)]
    pub nmax: i64,
}

impl NRange {
    fn resolve(&self) -> Result<Vec<i64>, String> {
        if self.nmin < 2 || self.nmax < self.nmin {
            return Err(format!("need 2 <= nmin <= nmax, got {} and {}", self.nmin, self.nmax));
        }
        Ok((self.nmin..=self.nmax).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlaneArg {
    /// The `lambda` plane of `P_lambda`.
    Small,
    /// The `Lambda = Log(lambda^q)` plane of a satellite.
    Big,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Residue of the satellite root: contour value against the fit.
    Residue {
        #[arg(long, value_parser = parse_rational)]
        pq: RationalArg,
        #[command(flatten)]
        grid: Grid,
    },
    /// Lambda(e^{it}) against its first and second order expansions.
    Expand {
        #[arg(long, value_parser = parse_rational)]
        pq: RationalArg,
        #[command(flatten)]
        grid: Grid,
    },
    /// Hyperbolic distance between Lambda(e^{it}) and M(e^{it}).
    Diverge {
        #[arg(long, value_parser = parse_rational)]
        pq: RationalArg,
        #[arg(long = "PQ", value_parser = parse_rational)]
        big_pq: RationalArg,
        #[command(flatten)]
        grid: Grid,
    },
    /// Root position and diameters of the (n^2-1)/n^3 sublimbs.
    Limbs {
        #[arg(long, value_parser = parse_rational)]
        pq: RationalArg,
        #[command(flatten)]
        range: NRange,
        /// Pixels per side of the final limb scan.
        #[arg(long)]
        resolution: Option<usize>,
    },
    /// Distances between corresponding sublimb roots of two satellites.
    Corollary {
        #[arg(long, value_parser = parse_rational)]
        pq: RationalArg,
        #[arg(long = "PQ", value_parser = parse_rational)]
        big_pq: RationalArg,
        #[command(flatten)]
        range: NRange,
    },
    /// Affine stretch and lattice quadruple between two tori.
    Tori {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        l1: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        l2: Complex64,
        #[arg(long, default_value_t = defaults::TORI_EPS)]
        eps: f64,
        #[arg(long, default_value_t = defaults::TORI_GRID)]
        grid: usize,
    },
    /// Picture of the connectedness locus as a binary PPM.
    Render {
        #[arg(long, value_enum, default_value_t = PlaneArg::Small)]
        plane: PlaneArg,
        /// Required for the big plane.
        #[arg(long, value_parser = parse_rational)]
        pq: Option<RationalArg>,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        center: Option<Complex64>,
        #[arg(long)]
        half_width: Option<f64>,
        #[arg(long, default_value_t = defaults::RENDER_SIZE)]
        width: usize,
        /// Defaults to the width; the half height follows the aspect ratio.
        #[arg(long)]
        height: Option<usize>,
        #[arg(long, default_value_t = defaults::RENDER_MAX_ITER)]
        max_iter: usize,
        /// Also write per-pixel membership as CSV.
        #[arg(long)]
        membership: Option<PathBuf>,
    },
    /// Parameter whose critical value lands on 0 after m blocks of q steps.
    Misiurewicz {
        #[arg(long, value_parser = parse_rational)]
        pq: RationalArg,
        #[arg(long, default_value_t = 1)]
        blocks: usize,
        /// Newton seed in the lambda plane; a grid search is used otherwise.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        seed: Option<Complex64>,
    },
}

/// A validated invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, String> {
        let command = cli.command.ok_or("a subcommand is required (see --help)")?;
        let tolerances = match &cli.tolerances {
            Some(path) => {
                let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
                serde_json::from_reader(BufReader::new(file)).map_err(|e| format!("{}: {e}", path.display()))?
            }
            None => Tolerances::default(),
        };
        let single = matches!(command, Command::Residue { .. } | Command::Tori { .. } | Command::Misiurewicz { .. });
        let format = cli.format.unwrap_or(if single { Format::Json } else { Format::Csv });
        Ok(Self { command, out: cli.out, format, tolerances })
    }
}

/// How a run ended, before conversion to an exit code.
#[derive(Debug)]
enum Failure {
    Bound(String),
    Numerical(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::NotCoprime { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numerical(format!("i/o: {e}"))
    }
}

type Outcome = Result<String, Failure>;

/// Runs one experiment and returns its exit code.
pub fn run(config: &RunConfig) -> ExitCode {
    for arg in rationals(&config.command) {
        if arg.reduced {
            eprintln!("note: {} reduced to {}", arg.text, arg.value);
        }
    }
    let out = config.out.as_deref();
    let outcome = match &config.command {
        Command::Residue { pq, grid } => residue(pq.value, grid, config, out),
        Command::Expand { pq, grid } => expand(pq.value, grid, config, out),
        Command::Diverge { pq, big_pq, grid } => diverge(pq.value, big_pq.value, grid, config, out),
        Command::Limbs { pq, range, resolution } => limbs(pq.value, range, *resolution, config, out),
        Command::Corollary { pq, big_pq, range } => corollary(pq.value, big_pq.value, range, config, out),
        Command::Tori { l1, l2, eps, grid } => tori(*l1, *l2, *eps, *grid, config, out),
        Command::Render { .. } => render(&config.command, out),
        Command::Misiurewicz { pq, blocks, seed } => misiurewicz(pq.value, *blocks, *seed, config, out),
    };
    match outcome {
        Ok(summary) => {
            eprintln!("{summary}");
            ExitCode::Success
        }
        Err(Failure::Bound(msg)) => {
            eprintln!("bound violated: {msg}");
            ExitCode::BoundViolated
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::Numerical
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage: {msg}");
            ExitCode::Usage
        }
    }
}

fn rationals(command: &Command) -> Vec<&RationalArg> {
    match command {
        Command::Residue { pq, .. } | Command::Expand { pq, .. } | Command::Limbs { pq, .. } | Command::Misiurewicz { pq, .. } => {
            vec![pq]
        }
        Command::Diverge { pq, big_pq, .. } | Command::Corollary { pq, big_pq, .. } => vec![pq, big_pq],
        Command::Render { pq, .. } => pq.iter().collect(),
        Command::Tori { .. } => Vec::new(),
    }
}

fn check_q_cap(pq: IrreducibleRational) -> Result<(), Failure> {
    if pq.q() > defaults::Q_CAP {
        return Err(Failure::Usage(format!("{pq} has q > {}, beyond the double precision range", defaults::Q_CAP)));
    }
    Ok(())
}

fn push_complex(cells: &mut Vec<Cell>, z: Complex64) {
    cells.push(Cell::Float(z.re));
    cells.push(Cell::Float(z.im));
}

/// Lower bound on `Re Res_{p/q}`.
pub fn residue_bound(q: i64) -> f64 {
    if q == 1 {
        1.0
    } else {
        1.0 / (2.0 * LN_2) + q as f64 / 4.0
    }
}

struct ResidueRow {
    report: ResidueReport,
    bound: f64,
}

impl Row for ResidueRow {
    const SCHEMA: &'static str = "residue";
    fn header() -> &'static [&'static str] {
        &[
            "pq", "res_contour_re", "res_contour_im", "res_fit_re", "res_fit_im", "res1_fit_re", "res1_fit_im", "fit_residual", "points",
            "relative_gap", "bound",
        ]
    }
    fn cells(&self) -> Vec<Cell> {
        let r = &self.report;
        let mut c = vec![Cell::Text(r.pq.to_string())];
        push_complex(&mut c, r.res_contour);
        push_complex(&mut c, r.res_fit);
        push_complex(&mut c, r.res1_fit);
        c.extend([Cell::Float(r.fit_residual), Cell::Int(r.points as i64), Cell::Float(r.relative_gap()), Cell::Float(self.bound)]);
        c
    }
}

fn residue(pq: IrreducibleRational, grid: &Grid, config: &RunConfig, out: Option<&Path>) -> Outcome {
    check_q_cap(pq)?;
    let ts = grid
        .resolve(defaults::RESIDUE_TMIN, defaults::RESIDUE_TMAX, defaults::RESIDUE_POINTS)
        .map_err(Failure::Usage)?;
    let report = residue_fit(pq, &ts, &config.tolerances)?;
    let row = ResidueRow { bound: residue_bound(pq.q()), report };
    emit_report(std::slice::from_ref(&row), config.format, out)?;
    let re = row.report.res_contour.re;
    if re < row.bound - defaults::RESIDUE_SLACK {
        return Err(Failure::Bound(format!("Re Res_{pq} = {re:.9} below {:.9}", row.bound)));
    }
    Ok(format!(
        "residue {pq}: Re Res = {re:.9} >= {:.9}; fit gap {:.2e}",
        row.bound,
        row.report.relative_gap()
    ))
}

struct ExpandRow {
    t: f64,
    lambda: Complex64,
    first: Complex64,
    second: Complex64,
}

impl ExpandRow {
    fn errors(&self) -> (f64, f64) {
        ((self.lambda - self.first).norm(), (self.lambda - self.second).norm())
    }
}

impl Row for ExpandRow {
    const SCHEMA: &'static str = "expand";
    fn header() -> &'static [&'static str] {
        &["t", "lambda_re", "lambda_im", "first_re", "first_im", "second_re", "second_im", "error_first", "error_second"]
    }
    fn cells(&self) -> Vec<Cell> {
        let mut c = vec![Cell::Float(self.t)];
        push_complex(&mut c, self.lambda);
        push_complex(&mut c, self.first);
        push_complex(&mut c, self.second);
        let (e1, e2) = self.errors();
        c.extend([Cell::Float(e1), Cell::Float(e2)]);
        c
    }
}

fn expand(pq: IrreducibleRational, grid: &Grid, config: &RunConfig, out: Option<&Path>) -> Outcome {
    check_q_cap(pq)?;
    let ts = grid
        .resolve(defaults::EXPAND_TMIN, defaults::EXPAND_TMAX, defaults::EXPAND_POINTS)
        .map_err(Failure::Usage)?;
    let res = residue_contour(pq, &config.tolerances)?;
    let q = pq.q() as f64;
    let rows = ts
        .iter()
        .map(|&t| {
            let x = Complex64::new(0.0, t / q);
            let first = -x;
            Ok(ExpandRow { t, lambda: lambda_of_t(pq, t, &config.tolerances)?.value(), first, second: first - res * x * x })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    emit_report(&rows, config.format, out)?;
    if let Some(bad) = rows.iter().find(|r| r.errors().1 >= r.errors().0) {
        let (e1, e2) = bad.errors();
        return Err(Failure::Bound(format!("at t = {:e} the second order error {e2:.3e} is not below {e1:.3e}", bad.t)));
    }
    let worst = rows.iter().map(|r| r.errors().1 / r.t.powi(3)).fold(0.0, f64::max);
    Ok(format!("expand {pq}: {} points, max |second order error| / t^3 = {worst:.3e}", rows.len()))
}

impl Row for ExperimentRecord {
    const SCHEMA: &'static str = "diverge";
    fn header() -> &'static [&'static str] {
        &["t", "lambda_re", "lambda_im", "m_re", "m_im", "dist", "bound", "bound_ordered"]
    }
    fn cells(&self) -> Vec<Cell> {
        let mut c = vec![Cell::Float(self.t)];
        push_complex(&mut c, self.lambda.value());
        push_complex(&mut c, self.m.value());
        c.extend([Cell::Float(self.dist), Cell::Float(self.bound), Cell::Float(self.bound_ordered)]);
        c
    }
}

fn diverge(pq: IrreducibleRational, big: IrreducibleRational, grid: &Grid, config: &RunConfig, out: Option<&Path>) -> Outcome {
    let ts = grid
        .resolve(defaults::DIVERGE_TMIN, defaults::DIVERGE_TMAX, defaults::DIVERGE_POINTS)
        .map_err(Failure::Usage)?;
    let records = divergence_scan(pq, big, &ts, &config.tolerances)?;
    emit_report(&records, config.format, out)?;
    let last = records.last().expect("grid is non-empty");
    if pq.q() == big.q() {
        return Ok(format!("diverge {pq} vs {big}: equal denominators, d = {:.6} at t = {:.3e}; no bound asserted", last.dist, last.t));
    }
    let tail: Vec<&ExperimentRecord> = records.iter().filter(|r| r.t <= defaults::DIVERGE_TAIL).collect();
    let tail = if tail.len() >= 2 { tail } else { records.iter().collect() };
    // The grid runs from large to small t, so the distance must increase.
    if let Some(w) = tail.windows(2).find(|w| w[1].dist <= w[0].dist) {
        return Err(Failure::Bound(format!(
            "d = {:.9} at t = {:e} does not exceed d = {:.9} at t = {:e}",
            w[1].dist, w[1].t, w[0].dist, w[0].t
        )));
    }
    Ok(format!(
        "diverge {pq} vs {big}: d increasing over {} tail points, d = {:.6} at t = {:.3e} (2 log(1/t) = {:.6})",
        tail.len(),
        last.dist,
        last.t,
        2.0 * (1.0 / last.t).ln()
    ))
}

impl Row for LimbScanRecord {
    const SCHEMA: &'static str = "limbs";
    fn header() -> &'static [&'static str] {
        &["n", "root_re", "root_im", "re_lower_bound", "scaled_root", "hyp_diam", "euclid_diam", "n_hyp_diam"]
    }
    fn cells(&self) -> Vec<Cell> {
        let mut c = vec![Cell::Int(self.n)];
        push_complex(&mut c, self.root_lambda.value());
        c.extend([
            Cell::Float(self.re_lower_bound),
            Cell::Float(self.scaled_root),
            Cell::Float(self.hyp_diam),
            Cell::Float(self.euclid_diam),
            Cell::Float(self.n as f64 * self.hyp_diam),
        ]);
        c
    }
}

fn limbs(pq: IrreducibleRational, range: &NRange, resolution: Option<usize>, config: &RunConfig, out: Option<&Path>) -> Outcome {
    check_q_cap(pq)?;
    let ns = range.resolve().map_err(Failure::Usage)?;
    let mut scan = LimbScanConfig::default();
    if let Some(r) = resolution {
        if r < 16 {
            return Err(Failure::Usage("resolution must be at least 16".into()));
        }
        scan.resolution = r;
        scan.coarse_resolution = scan.coarse_resolution.min(r);
    }
    let records = small_limb_scan(pq, &ns, &scan, &config.tolerances)?;
    emit_report(&records, config.format, out)?;
    let scaled: Vec<f64> = records.iter().map(|r| r.n as f64 * r.hyp_diam).collect();
    let tau = kendall_tau(&scaled);
    if tau > 0.0 {
        return Err(Failure::Bound(format!("n hyp_diam grows with n (Kendall tau {tau:.3})")));
    }
    let max = scaled.iter().cloned().fold(0.0, f64::max);
    Ok(format!("limbs {pq}: n hyp_diam <= {max:.4e} over n = {}..{}, Kendall tau {tau:.3}", range.nmin, range.nmax))
}

impl Row for CorollaryRecord {
    const SCHEMA: &'static str = "corollary";
    fn header() -> &'static [&'static str] {
        &["n", "lambda_re", "lambda_im", "m_re", "m_im", "dist"]
    }
    fn cells(&self) -> Vec<Cell> {
        let mut c = vec![Cell::Int(self.n)];
        push_complex(&mut c, self.lambda.value());
        push_complex(&mut c, self.m.value());
        c.push(Cell::Float(self.dist));
        c
    }
}

fn corollary(pq: IrreducibleRational, big: IrreducibleRational, range: &NRange, config: &RunConfig, out: Option<&Path>) -> Outcome {
    let ns = range.resolve().map_err(Failure::Usage)?;
    let records = corollary_check(pq, big, &ns, &config.tolerances)?;
    emit_report(&records, config.format, out)?;
    let (first, last) = (records[0].dist, records[records.len() - 1].dist);
    if pq.q() != big.q() {
        if let Some(w) = records.windows(2).find(|w| w[1].dist <= w[0].dist) {
            return Err(Failure::Bound(format!("d = {:.9} at n = {} does not exceed d = {:.9} at n = {}", w[1].dist, w[1].n, w[0].dist, w[0].n)));
        }
    }
    Ok(format!("corollary {pq} vs {big}: d from {first:.6} to {last:.6} (increase {:.4})", last - first))
}

struct ToriRow {
    l1: Complex64,
    l2: Complex64,
    dist: f64,
    k: f64,
    log_k: f64,
    mu: Complex64,
    predicted: String,
    case: String,
    quadruple: [i64; 4],
    log_ratio: f64,
}

impl Row for ToriRow {
    const SCHEMA: &'static str = "tori";
    fn header() -> &'static [&'static str] {
        &[
            "l1_re", "l1_im", "l2_re", "l2_im", "dist", "k", "log_k", "mu_re", "mu_im", "predicted_case", "case", "p", "q", "r", "s", "log_ratio",
        ]
    }
    fn cells(&self) -> Vec<Cell> {
        let mut c = Vec::new();
        push_complex(&mut c, self.l1);
        push_complex(&mut c, self.l2);
        c.extend([Cell::Float(self.dist), Cell::Float(self.k), Cell::Float(self.log_k)]);
        push_complex(&mut c, self.mu);
        c.extend([Cell::Text(self.predicted.clone()), Cell::Text(self.case.clone())]);
        c.extend(self.quadruple.iter().map(|&n| Cell::Int(n)));
        c.push(Cell::Float(self.log_ratio));
        c
    }
}

fn tori(l1: Complex64, l2: Complex64, eps: f64, grid: usize, config: &RunConfig, out: Option<&Path>) -> Outcome {
    if !(eps > 0.0) || grid < 4 {
        return Err(Failure::Usage("need eps > 0 and grid >= 4".into()));
    }
    let stretch = affine_between_tori(l1, l2)?;
    let dist = dist_hr(l1, l2)?;
    let predicted = claim_case(l1, l2);
    let search = SearchConfig { grid, ..SearchConfig::default() };
    let w = quadruple_search(l1, l2, eps, &search)?;
    let row = ToriRow {
        l1,
        l2,
        dist,
        k: stretch.k,
        log_k: stretch.log_k,
        mu: stretch.mu,
        predicted: format!("{predicted:?}"),
        case: format!("{:?}", w.case),
        quadruple: [w.quadruple.p, w.quadruple.q, w.quadruple.r, w.quadruple.s],
        log_ratio: w.log_ratio,
    };
    emit_report(std::slice::from_ref(&row), config.format, out)?;
    if (stretch.log_k - dist).abs() > defaults::TORI_LOGK_TOL {
        return Err(Failure::Bound(format!("log K = {:.12} differs from d = {dist:.12}", stretch.log_k)));
    }
    if w.case != predicted || w.log_ratio < dist - eps {
        return Err(Failure::Bound(format!(
            "witness of case {:?} with log ratio {:.6} against d - eps = {:.6} (predicted {predicted:?})",
            w.case,
            w.log_ratio,
            dist - eps
        )));
    }
    Ok(format!("tori: d = {dist:.6} = log K; case {:?} witness with log ratio {:.6}", w.case, w.log_ratio))
}

fn render(command: &Command, out: Option<&Path>) -> Outcome {
    let Command::Render { plane, pq, center, half_width, width, height, max_iter, membership } = command else {
        unreachable!("render called with another command")
    };
    let plane = match (plane, pq) {
        (PlaneArg::Small, _) => Plane::LambdaSmall,
        (PlaneArg::Big, Some(pq)) => Plane::LambdaBig(pq.value),
        (PlaneArg::Big, None) => return Err(Failure::Usage("--plane big needs --pq".into())),
    };
    let (default_center, default_half) = match plane {
        Plane::LambdaSmall => (Complex64::new(defaults::SMALL_CENTER.0, defaults::SMALL_CENTER.1), defaults::SMALL_HALF_WIDTH),
        Plane::LambdaBig(_) => (Complex64::new(LN_2, 0.0), defaults::BIG_HALF_WIDTH),
    };
    let height = height.unwrap_or(*width);
    let half_width = half_width.unwrap_or(default_half);
    if *width == 0 || height == 0 || *max_iter == 0 {
        return Err(Failure::Usage("width, height and max-iter must be positive".into()));
    }
    let half_height = half_width * height as f64 / *width as f64;
    let view = Viewport::new(center.unwrap_or(default_center), half_width, half_height, *width, height, plane)?;
    let image = render_locus(&view, *max_iter);
    report::write_output(&encode_ppm(&image), out)?;
    if let Some(path) = membership {
        report::write_output(membership_csv(&view, *max_iter).as_bytes(), Some(path))?;
    }
    let Plane::LambdaBig(pq) = plane else {
        return Ok(format!("render: {}x{} lambda plane, max_iter {max_iter}", width, height));
    };
    if view.locate(Complex64::new(0.0, 0.0)).is_none() {
        return Ok(format!("render: {}x{} Lambda plane of {pq}; root outside the view, no disk check", width, height));
    }
    let component = satellite_component(&view, *max_iter)?;
    let slack = LN_2 + view.pixel_diagonal();
    let outside = component.iter_set().filter(|&(x, y)| (view.pixel(x, y) - LN_2).norm() > slack).count();
    if outside > 0 {
        return Err(Failure::Bound(format!("{outside} pixels of the satellite lie outside |Lambda - log 2| <= log 2")));
    }
    Ok(format!("render: {}x{} Lambda plane of {pq}; {} satellite pixels, all in the disk", width, height, component.count()))
}

struct MisiurewiczRow {
    pq: IrreducibleRational,
    point: MisiurewiczPoint,
    big: Option<Complex64>,
}

impl Row for MisiurewiczRow {
    const SCHEMA: &'static str = "misiurewicz";
    fn header() -> &'static [&'static str] {
        &["pq", "blocks", "lambda_re", "lambda_im", "c_re", "c_im", "big_lambda_re", "big_lambda_im", "residual"]
    }
    fn cells(&self) -> Vec<Cell> {
        let mut c = vec![Cell::Text(self.pq.to_string()), Cell::Int(self.point.blocks as i64)];
        push_complex(&mut c, self.point.lambda);
        push_complex(&mut c, c_of_lambda(self.point.lambda));
        push_complex(&mut c, self.big.unwrap_or(Complex64::new(f64::NAN, f64::NAN)));
        c.push(Cell::Float(self.point.residual));
        c
    }
}

fn misiurewicz(pq: IrreducibleRational, blocks: usize, seed: Option<Complex64>, config: &RunConfig, out: Option<&Path>) -> Outcome {
    if blocks == 0 {
        return Err(Failure::Usage("blocks must be positive".into()));
    }
    let point = match seed {
        Some(s) => find_misiurewicz(pq, blocks, s, &config.tolerances)?,
        None => {
            let center = Complex64::new(defaults::SMALL_CENTER.0, defaults::SMALL_CENTER.1);
            misiurewicz_seeds(pq, blocks, center, defaults::MISIUREWICZ_HALF_WIDTH, defaults::MISIUREWICZ_GRID)
                .into_iter()
                .find_map(|s| find_misiurewicz(pq, blocks, s, &config.tolerances).ok())
                .ok_or_else(|| Failure::Numerical("no seed converged to a minimal point".into()))?
        }
    };
    let row = MisiurewiczRow { pq, point, big: big_lambda(pq, point.lambda).ok().map(|b| b.value()) };
    emit_report(std::slice::from_ref(&row), config.format, out)?;
    Ok(format!("misiurewicz {pq}, m = {blocks}: lambda = {:.12} (residual {:.1e})", point.lambda, point.residual))
}
