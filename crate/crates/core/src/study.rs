//! Grid-refinement studies: configuration, execution across grids, observed
//! rates and the CSV / markdown / log-log outputs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::cbcfd1d::Scheme1D;
use crate::cbcfd2d::Scheme2D;
use crate::error::{Error, Result};
use crate::mms::{example1, example2, CosineFamily, ErrorReport, ForcingVariant, MmsProblem};
use crate::ops::Stencil;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProblemId {
    Example1,
    Example2,
    /// Key-value file describing a [`CosineFamily`] member.
    Custom(PathBuf),
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "example1" => Ok(ProblemId::Example1),
            "example2" => Ok(ProblemId::Example2),
            "" => Err(Error::config("problem", "empty problem id")),
            path => Ok(ProblemId::Custom(PathBuf::from(path))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SchemeChoice {
    #[default]
    Cbcfd,
    Bcfd,
    Both,
}

impl SchemeChoice {
    pub fn stencils(self) -> Vec<Stencil> {
        match self {
            SchemeChoice::Cbcfd => vec![Stencil::Compact],
            SchemeChoice::Bcfd => vec![Stencil::Classical],
            SchemeChoice::Both => vec![Stencil::Compact, Stencil::Classical],
        }
    }
}

impl FromStr for SchemeChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "cbcfd" => Ok(SchemeChoice::Cbcfd),
            "bcfd" => Ok(SchemeChoice::Bcfd),
            "both" => Ok(SchemeChoice::Both),
            other => Err(Error::config("scheme", format!("expected cbcfd, bcfd or both, got `{other}`"))),
        }
    }
}

impl FromStr for ForcingVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "derived" => Ok(ForcingVariant::Derived),
            "printed" => Ok(ForcingVariant::Printed),
            other => Err(Error::config("forcing", format!("expected derived or printed, got `{other}`"))),
        }
    }
}

/// `dt = c h^q`, rounded down so that it divides the final time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DtRule {
    pub c: f64,
    pub q: f64,
}

impl Default for DtRule {
    fn default() -> Self {
        Self { c: 1.0, q: 2.0 }
    }
}

impl DtRule {
    /// Largest step not exceeding `c h^q` with an integer number of steps to `final_time`.
    pub fn step(&self, h: f64, final_time: f64) -> f64 {
        let target = self.c * h.powf(self.q);
        let steps = (final_time / target - 1e-9).ceil().max(1.0);
        final_time / steps
    }
}

impl FromStr for DtRule {
    type Err = Error;

    /// Accepts `h^q` or `c*h^q`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::config("dt-rule", format!("expected `h^q` or `c*h^q`, got `{s}`"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (c, rest) = match compact.split_once('*') {
            Some((c, rest)) => (c.parse::<f64>().map_err(|_| bad())?, rest),
            None => (1.0, compact.as_str()),
        };
        let q = rest.strip_prefix("h^").ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?;
        Ok(Self { c, q })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemId,
    pub scheme: SchemeChoice,
    /// `M` in 1D, `N1 = N2` in 2D.
    pub grids: Vec<usize>,
    pub dt_rule: DtRule,
    pub final_time: f64,
    pub out: PathBuf,
    pub forcing: ForcingVariant,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: ProblemId::Example1,
            scheme: SchemeChoice::Cbcfd,
            grids: vec![20, 40, 80],
            dt_rule: DtRule::default(),
            final_time: 1.0,
            out: PathBuf::from("out"),
            forcing: ForcingVariant::Derived,
        }
    }
}

pub fn parse_grids(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|g| {
            g.trim()
                .parse::<usize>()
                .map_err(|_| Error::config("grids", format!("`{}` is not a grid size", g.trim())))
        })
        .collect()
}

fn parse_number(field: &str, value: &str) -> Result<f64> {
    value
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::config(field, format!("`{value}` is not a number")))
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::config("config", format!("line {}: expected `key = value`", no + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "problem" => self.problem = value.parse()?,
            "scheme" => self.scheme = value.parse()?,
            "grids" => self.grids = parse_grids(value)?,
            "dt_rule" | "dt-rule" => self.dt_rule = value.parse()?,
            "T" | "final_time" => self.final_time = parse_number("T", value)?,
            "out" => self.out = PathBuf::from(value),
            "forcing" => self.forcing = value.parse()?,
            other => return Err(Error::config(other, "unknown key")),
        }
        Ok(())
    }

    /// Defaults overridden by the settings in `text`.
    pub fn from_config_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (k, v) in parse_key_values(text)? {
            cfg.set(&k, &v)?;
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grids.is_empty() {
            return Err(Error::config("grids", "at least one grid is required"));
        }
        if let Some(n) = self.grids.iter().find(|&&n| n < 4) {
            return Err(Error::config("grids", format!("every grid needs at least 4 cells, got {n}")));
        }
        if self.grids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("grids", "grid sizes must be strictly increasing"));
        }
        if !(self.dt_rule.q > 0.0 && self.dt_rule.c > 0.0) {
            return Err(Error::config("dt-rule", "c and q must be positive"));
        }
        if !(self.final_time > 0.0 && self.final_time.is_finite()) {
            return Err(Error::config("T", "final time must be positive"));
        }
        Ok(())
    }

    /// Builds the problem, with the configured final time.
    pub fn resolve_problem(&self) -> Result<MmsProblem<f64>> {
        let mut problem = match &self.problem {
            ProblemId::Example1 => MmsProblem::OneD(example1(self.forcing)),
            ProblemId::Example2 => MmsProblem::TwoD(example2(self.forcing)),
            ProblemId::Custom(path) => {
                if self.forcing == ForcingVariant::Printed {
                    return Err(Error::config("forcing", "custom problems only have a derived forcing"));
                }
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::config("problem", format!("{}: {e}", path.display())))?;
                parse_custom_problem(&text, self.final_time)?
            }
        };
        match &mut problem {
            MmsProblem::OneD(s) => s.final_time = self.final_time,
            MmsProblem::TwoD(s) => s.final_time = self.final_time,
        }
        Ok(problem)
    }
}

/// Reads a cosine-family problem: keys `dim` (1 or 2), `a`, `b`,
/// `time_power`, `b_time_power`, `wavenumber`.
pub fn parse_custom_problem(text: &str, final_time: f64) -> Result<MmsProblem<f64>> {
    let mut family = CosineFamily {
        a: 1.0,
        b: 1.0,
        b_time_power: 0,
        time_power: 1,
        wavenumber: 1,
        final_time,
    };
    let mut dim = 1;
    let int = |field: &str, v: &str| -> Result<u32> {
        v.parse::<u32>()
            .map_err(|_| Error::config(field, format!("`{v}` is not a non-negative integer")))
    };
    for (k, v) in parse_key_values(text)? {
        match k.as_str() {
            "dim" => dim = int("dim", &v)?,
            "a" => family.a = parse_number("a", &v)?,
            "b" => family.b = parse_number("b", &v)?,
            "time_power" => family.time_power = int("time_power", &v)?,
            "b_time_power" => family.b_time_power = int("b_time_power", &v)?,
            "wavenumber" => family.wavenumber = int("wavenumber", &v)?,
            other => return Err(Error::config(other, "unknown problem key")),
        }
    }
    if !(family.a > 0.0) {
        return Err(Error::config("a", "must be positive"));
    }
    if family.wavenumber == 0 {
        return Err(Error::config("wavenumber", "must be at least 1"));
    }
    match dim {
        1 => Ok(MmsProblem::OneD(family.one_d())),
        2 => Ok(MmsProblem::TwoD(family.two_d())),
        _ => Err(Error::config("dim", "must be 1 or 2")),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub n: usize,
    pub h: f64,
    pub dt: f64,
    /// Final errors, or the solver failure message.
    pub outcome: std::result::Result<ErrorReport<f64>, String>,
    pub rate_p: Option<f64>,
    pub rate_u: Option<f64>,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub scheme: Stencil,
    pub rows: Vec<ReportRow>,
}

/// `ln(e0 / e1) / ln(h0 / h1)`.
pub fn observed_rate(e0: f64, e1: f64, h0: f64, h1: f64) -> f64 {
    (e0 / e1).ln() / (h0 / h1).ln()
}

impl ConvergenceReport {
    pub fn new(scheme: Stencil, mut rows: Vec<ReportRow>) -> Self {
        for r in 1..rows.len() {
            let (prev, cur) = (&rows[r - 1], &rows[r]);
            let rates = match (&prev.outcome, &cur.outcome) {
                (Ok(a), Ok(b)) => Some((
                    observed_rate(a.pressure, b.pressure, prev.h, cur.h),
                    observed_rate(a.velocity, b.velocity, prev.h, cur.h),
                )),
                _ => None,
            };
            rows[r].rate_p = rates.map(|r| r.0);
            rows[r].rate_u = rates.map(|r| r.1);
        }
        Self { scheme, rows }
    }

    pub fn failures(&self) -> impl Iterator<Item = (usize, &str)> {
        self.rows
            .iter()
            .filter_map(|r| r.outcome.as_ref().err().map(|e| (r.n, e.as_str())))
    }

    pub fn pressure_rates(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.rate_p).collect()
    }

    pub fn velocity_rates(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.rate_u).collect()
    }
}

/// Runs one grid of `problem` and returns the final errors.
pub fn run_grid(problem: &MmsProblem<f64>, stencil: Stencil, n: usize, dt: f64) -> Result<ErrorReport<f64>> {
    let errors = match problem {
        MmsProblem::OneD(spec) => Scheme1D::new(spec.clone(), n, dt, stencil)?.run()?.errors,
        MmsProblem::TwoD(spec) => Scheme2D::new(spec.clone(), n, n, dt, stencil)?.run()?.errors,
    };
    errors.ok_or_else(|| Error::Contract("problem has no exact solution".into()))
}

fn grid_spacing(problem: &MmsProblem<f64>, n: usize) -> f64 {
    match problem {
        MmsProblem::OneD(s) => s.length / n as f64,
        MmsProblem::TwoD(s) => s.lx.max(s.ly) / n as f64,
    }
}

/// Runs every (scheme, grid) pair in parallel and returns one report per
/// scheme, rows ordered by grid. A failing grid is recorded in its row.
pub fn run_study(config: &RunConfig) -> Result<Vec<ConvergenceReport>> {
    config.validate()?;
    let problem = config.resolve_problem()?;
    let jobs: Vec<(Stencil, usize)> = config
        .scheme
        .stencils()
        .into_iter()
        .flat_map(|s| config.grids.iter().map(move |&n| (s, n)))
        .collect();
    let rows: Vec<(Stencil, ReportRow)> = jobs
        .par_iter()
        .map(|&(stencil, n)| {
            let h = grid_spacing(&problem, n);
            let dt = config.dt_rule.step(h, config.final_time);
            let start = Instant::now();
            let outcome = run_grid(&problem, stencil, n, dt).map_err(|e| e.to_string());
            let seconds = start.elapsed().as_secs_f64();
            match &outcome {
                Ok(e) => log::info!("{} n={n}: err_p={:e} err_u={:e} ({seconds:.2}s)", stencil.label(), e.pressure, e.velocity),
                Err(msg) => log::error!("{} n={n} failed: {msg}", stencil.label()),
            }
            let row = ReportRow { n, h, dt, outcome, rate_p: None, rate_u: None, seconds };
            (stencil, row)
        })
        .collect();
    Ok(config
        .scheme
        .stencils()
        .into_iter()
        .map(|s| {
            let mine = rows.iter().filter(|(st, _)| *st == s).map(|(_, r)| r.clone()).collect();
            ConvergenceReport::new(s, mine)
        })
        .collect())
}

pub const CSV_HEADER: [&str; 9] = ["scheme", "n", "h", "dt", "err_p", "rate_p", "err_u", "rate_u", "seconds"];

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_sci(x: Option<f64>) -> String {
    x.map(sci).unwrap_or_default()
}

/// Writes all rows of all reports; failed grids have empty error fields.
pub fn emit_csv(reports: &[ConvergenceReport], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    for rep in reports {
        for r in &rep.rows {
            let (ep, eu) = match &r.outcome {
                Ok(e) => (sci(e.pressure), sci(e.velocity)),
                Err(_) => (String::new(), String::new()),
            };
            w.write_record([
                rep.scheme.label().to_string(),
                r.n.to_string(),
                sci(r.h),
                sci(r.dt),
                ep,
                opt_sci(r.rate_p),
                eu,
                opt_sci(r.rate_u),
                format!("{:.3e}", r.seconds),
            ])
            .map_err(csv_error)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

/// Markdown tables laid out as `h | pressure error | rate | velocity error | rate`.
pub fn render_markdown(reports: &[ConvergenceReport]) -> String {
    let mut s = String::new();
    for rep in reports {
        let _ = writeln!(s, "### {}\n", rep.scheme.label().to_uppercase());
        s.push_str("| h | dt | ‖p − P‖ | rate | ‖ũ − Ũ‖ | rate | seconds |\n");
        s.push_str("|---|---|---|---|---|---|---|\n");
        for r in &rep.rows {
            let rate = |x: Option<f64>| x.map(|v| format!("{v:.4}")).unwrap_or_else(|| "---".into());
            match &r.outcome {
                Ok(e) => {
                    let _ = writeln!(
                        s,
                        "| 1/{} | {:.3e} | {:.2e} | {} | {:.2e} | {} | {:.2} |",
                        r.n,
                        r.dt,
                        e.pressure,
                        rate(r.rate_p),
                        e.velocity,
                        rate(r.rate_u),
                        r.seconds
                    );
                }
                Err(msg) => {
                    let _ = writeln!(s, "| 1/{} | {:.3e} | failed: {} | | | | {:.2} |", r.n, r.dt, msg.replace('|', "/"), r.seconds);
                }
            }
        }
        s.push('\n');
    }
    s
}

pub fn emit_markdown(reports: &[ConvergenceReport], path: &Path) -> Result<()> {
    fs::write(path, render_markdown(reports))?;
    Ok(())
}

/// Least-squares slope of `y` against `x`.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let (mx, my) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `(log10 h, log10 err_p)` for the successful rows of a report.
pub fn loglog_points(report: &ConvergenceReport) -> Vec<(f64, f64)> {
    report
        .rows
        .iter()
        .filter_map(|r| r.outcome.as_ref().ok().map(|e| (r.h.log10(), e.pressure.log10())))
        .collect()
}

/// Renders the log-log data: one block per scheme followed by reference
/// lines of slope 4 and 2. Blocks are separated by two blank lines.
pub fn render_loglog(reports: &[ConvergenceReport]) -> String {
    let blocks: Vec<(Stencil, Vec<(f64, f64)>)> =
        reports.iter().map(|r| (r.scheme, loglog_points(r))).collect();
    let all_x: Vec<f64> = blocks.iter().flat_map(|(_, p)| p.iter().map(|q| q.0)).collect();
    let (x_lo, x_hi) = all_x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(*x), hi.max(*x)));

    // Finest point = smallest h.
    let finest = |s: Stencil| {
        blocks
            .iter()
            .find(|(st, _)| *st == s)
            .and_then(|(_, p)| p.iter().copied().min_by(|a, b| a.0.total_cmp(&b.0)))
    };
    let fallback = blocks.iter().find_map(|(_, p)| p.iter().copied().min_by(|a, b| a.0.total_cmp(&b.0)));
    let anchor4 = finest(Stencil::Compact).or(fallback);
    let anchor2 = finest(Stencil::Classical).or(fallback);

    let mut s = String::new();
    s.push_str("# columns: log10(h) log10(err_p)\n");
    s.push_str("# reference slope 4 passes through the finest cbcfd point, slope 2 through the finest bcfd point\n");
    s.push_str("# (either falls back to the finest point of the first scheme present)\n");
    for (scheme, pts) in &blocks {
        match least_squares_slope(pts) {
            Some(k) => {
                let _ = writeln!(s, "# least-squares slope {}: {k:.4}", scheme.label());
            }
            None => {
                let _ = writeln!(s, "# least-squares slope {}: n/a", scheme.label());
            }
        }
    }
    let mut first = true;
    let mut block = |s: &mut String, title: String, pts: &[(f64, f64)]| {
        if !first {
            s.push_str("\n\n");
        }
        first = false;
        let _ = writeln!(s, "# {title}");
        for (x, y) in pts {
            let _ = writeln!(s, "{} {}", sci(*x), sci(*y));
        }
    };
    for (scheme, pts) in &blocks {
        block(&mut s, format!("scheme {}", scheme.label()), pts);
    }
    if x_lo.is_finite() {
        for (slope, anchor) in [(4.0, anchor4), (2.0, anchor2)] {
            if let Some((ax, ay)) = anchor {
                let line = [(x_lo, ay + slope * (x_lo - ax)), (x_hi, ay + slope * (x_hi - ax))];
                block(&mut s, format!("reference slope {slope}"), &line);
            }
        }
    }
    s
}

pub fn emit_loglog_data(reports: &[ConvergenceReport], path: &Path) -> Result<()> {
    fs::write(path, render_loglog(reports))?;
    Ok(())
}

/// Writes `convergence.csv`, `convergence.md` and `loglog.dat` into `dir`.
pub fn write_outputs(reports: &[ConvergenceReport], dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let paths = [dir.join("convergence.csv"), dir.join("convergence.md"), dir.join("loglog.dat")];
    emit_csv(reports, &paths[0])?;
    emit_markdown(reports, &paths[1])?;
    emit_loglog_data(reports, &paths[2])?;
    Ok(paths.to_vec())
}
