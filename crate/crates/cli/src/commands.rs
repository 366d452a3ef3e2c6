//! The subcommands, each turning a checked configuration into a table.

use std::fmt::Write as _;

use tdsts::analytic::{
    entropy_sum, photon_stats, prob_p, prob_x, quadrature_variances, rho_position, uncertainty_product, wavefunction,
    xp_moments, Coherence,
};
use tdsts::oracle::gaussian::gaussian_tfd_state;
use tdsts::validate::{Measure, SuiteReport};
use tdsts::{Execution, StateSpec};

use crate::config::{AlphaConfig, ConfigError, GridSpec, RunConfig, TempEntry};
use crate::output::{Block, Cell, Table};

pub const EVALUATE_COLUMNS: [&str; 9] =
    ["t", "mean_x", "var_x", "mean_p", "var_p", "uncertainty_product", "entropy_sum", "dY1_sq", "dY2_sq"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DensityKind {
    Position,
    Momentum,
    Wavefunction,
    Rho,
}

fn state(cfg: &RunConfig) -> Result<StateSpec, ConfigError> {
    cfg.spec().map_err(|message| ConfigError { source: "config".into(), message })
}

fn evaluate_row(spec: &StateSpec, t: f64) -> Vec<Cell> {
    let m = xp_moments(spec, t);
    let (dy1, dy2) = quadrature_variances(spec, t, 0.0);
    [t, m.mean_x, m.var_x, m.mean_p, m.var_p, uncertainty_product(spec, t), entropy_sum(spec, t), dy1, dy2]
        .into_iter()
        .map(Cell::from)
        .collect()
}

fn photon_block(spec: &StateSpec) -> Block {
    let s = photon_stats(spec);
    let g2 = match s.g2 {
        Coherence::Defined(v) => Cell::Num(v),
        Coherence::Undefined => Cell::Undefined,
    };
    Block { name: "photon_stats", entries: vec![("mean_n", s.mean_n.into()), ("var_n", s.var_n.into()), ("g2", g2)] }
}

pub fn evaluate(cfg: &RunConfig, exec: Execution) -> Result<Table, ConfigError> {
    let spec = state(cfg)?;
    let mut table = Table::new(EVALUATE_COLUMNS);
    for row in exec.map(&cfg.time_grid.times(), |&t| evaluate_row(&spec, t)) {
        table.push(row);
    }
    table.block = Some(photon_block(&spec));
    Ok(table)
}

/// `points` evenly spaced samples spanning `mean ± halfwidth_sigmas·std`.
fn axis(mean: f64, std: f64, grid: GridSpec) -> Vec<f64> {
    let half = grid.halfwidth_sigmas * std;
    let step = 2.0 * half / (grid.points - 1) as f64;
    (0..grid.points).map(|k| mean - half + step * k as f64).collect()
}

pub fn density(cfg: &RunConfig, kind: DensityKind, exec: Execution) -> Result<Table, ConfigError> {
    let spec = state(cfg)?;
    let times = cfg.time_grid.times();
    let mut table = match kind {
        DensityKind::Position => Table::new(["t", "x", "density"]),
        DensityKind::Momentum => Table::new(["t", "p", "density"]),
        DensityKind::Wavefunction => Table::new(["t", "x", "x_tilde", "re", "im"]),
        DensityKind::Rho => Table::new(["t", "x", "x_prime", "re", "im"]),
    };
    for &t in &times {
        let m = xp_moments(&spec, t);
        let xs = axis(m.mean_x, m.std_x(), cfg.grids.x);
        let rows: Vec<Vec<Cell>> = match kind {
            DensityKind::Position => exec.map(&xs, |&x| vec![t.into(), x.into(), prob_x(&spec, x, t).into()]),
            DensityKind::Momentum => {
                let ps = axis(m.mean_p, m.std_p(), cfg.grids.p);
                exec.map(&ps, |&p| vec![t.into(), p.into(), prob_p(&spec, p, t).into()])
            }
            DensityKind::Wavefunction => {
                // the tilde mode has no closed-form moments of its own; its marginal comes from the covariance
                let g = gaussian_tfd_state(&spec, t);
                let xts = axis(g.mean[2], g.cov[(2, 2)].sqrt(), cfg.grids.x);
                let pairs: Vec<(f64, f64)> = xs.iter().flat_map(|&x| xts.iter().map(move |&xt| (x, xt))).collect();
                exec.map(&pairs, |&(x, xt)| {
                    let psi = wavefunction(&spec, x, xt, t);
                    vec![t.into(), x.into(), xt.into(), psi.re.into(), psi.im.into()]
                })
            }
            DensityKind::Rho => {
                let pairs: Vec<(f64, f64)> = xs.iter().flat_map(|&x| xs.iter().map(move |&xp| (x, xp))).collect();
                // ⟨x|ρ|x'⟩
                exec.map(&pairs, |&(x, xp)| {
                    let rho = rho_position(&spec, xp, x, t);
                    vec![t.into(), x.into(), xp.into(), rho.re.into(), rho.im.into()]
                })
            }
        };
        for row in rows {
            table.push(row);
        }
    }
    Ok(table)
}

/// A scalar parameter a sweep can vary.
#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    R,
    Phi,
    AlphaRe,
    AlphaIm,
    AlphaMod,
    AlphaArg,
    /// Entry `index` of the input (`detector = false`) or detector list.
    /// `Some(true)` forces an absolute temperature, `Some(false)` a reduced one,
    /// `None` keeps the form the entry already has.
    Temp { detector: bool, index: usize, absolute: Option<bool> },
}

impl Axis {
    pub fn parse(path: &str) -> Option<Self> {
        let simple = match path {
            "r" | "squeeze.r" => Some(Axis::R),
            "phi" | "squeeze.phi" => Some(Axis::Phi),
            "alpha.re" => Some(Axis::AlphaRe),
            "alpha.im" => Some(Axis::AlphaIm),
            "alpha.mod" => Some(Axis::AlphaMod),
            "alpha.arg" => Some(Axis::AlphaArg),
            _ => None,
        };
        if simple.is_some() {
            return simple;
        }
        let rest = path.strip_prefix("temps.")?;
        let (detector, rest) = if let Some(r) = rest.strip_prefix("input[") {
            (false, r)
        } else {
            (true, rest.strip_prefix("detector[")?)
        };
        let (index, tail) = rest.split_once(']')?;
        let index = index.parse().ok()?;
        let absolute = match tail {
            "" => None,
            ".T" => Some(true),
            ".tau" => Some(false),
            _ => return None,
        };
        Some(Axis::Temp { detector, index, absolute })
    }

    /// A copy of `cfg` with this parameter set to `value`.
    pub fn apply(&self, cfg: &RunConfig, value: f64) -> Result<RunConfig, String> {
        let mut cfg = cfg.clone();
        let s = &mut cfg.state;
        let domain = |e: tdsts::Error| format!("state.alpha: {e}");
        match *self {
            Axis::R => s.squeeze.r = value,
            Axis::Phi => s.squeeze.phi = value,
            Axis::AlphaRe | Axis::AlphaIm => {
                let mut a = s.alpha.cartesian().map_err(domain)?;
                if *self == Axis::AlphaRe {
                    a.re = Some(value);
                } else {
                    a.im = Some(value);
                }
                s.alpha = a;
            }
            Axis::AlphaMod | Axis::AlphaArg => {
                let mut a: AlphaConfig = s.alpha.polar().map_err(domain)?;
                if *self == Axis::AlphaMod {
                    a.modulus = Some(value);
                } else {
                    a.arg = Some(value);
                }
                s.alpha = a;
            }
            Axis::Temp { detector, index, absolute } => {
                let (list, name) =
                    if detector { (&mut s.temps.detector, "detector") } else { (&mut s.temps.input, "input") };
                let entry = list
                    .get_mut(index)
                    .ok_or_else(|| format!("state.temps.{name}[{index}]: no such entry to sweep"))?;
                let absolute = absolute.unwrap_or(entry.absolute.is_some());
                *entry = if absolute {
                    TempEntry { absolute: Some(value), tau: None }
                } else {
                    TempEntry { absolute: None, tau: Some(value) }
                };
            }
        }
        cfg.spec()?;
        Ok(cfg)
    }
}

#[derive(Debug)]
pub enum SweepError {
    UnknownAxis(String),
    BadValues(String),
    Config(String),
}

impl std::fmt::Display for SweepError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepError::UnknownAxis(p) => write!(
                f,
                "unknown axis {p:?}; expected r, phi, alpha.re, alpha.im, alpha.mod, alpha.arg, \
                 temps.input[i] or temps.detector[i] (optionally suffixed .T or .tau)"
            ),
            SweepError::BadValues(m) => write!(f, "--values: {m}"),
            SweepError::Config(m) => write!(f, "{m}"),
        }
    }
}

pub fn parse_values(list: &str) -> Result<Vec<f64>, SweepError> {
    let values = list
        .split(',')
        .map(|v| {
            let v = v.trim();
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| SweepError::BadValues(format!("not a finite number: {v:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(SweepError::BadValues("empty list".into()));
    }
    Ok(values)
}

/// Long-form table: the axis column followed by the evaluate columns, ordered
/// by axis value and then time.
pub fn sweep(cfg: &RunConfig, path: &str, values: &[f64], exec: Execution) -> Result<Table, SweepError> {
    let axis = Axis::parse(path).ok_or_else(|| SweepError::UnknownAxis(path.to_string()))?;
    let mut values = values.to_vec();
    values.sort_by(f64::total_cmp);
    let specs = values
        .iter()
        .map(|&v| axis.apply(cfg, v).and_then(|c| c.spec()).map(|s| (v, s)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(SweepError::Config)?;
    let times = cfg.time_grid.times();
    let jobs: Vec<(usize, f64)> = (0..specs.len()).flat_map(|i| times.iter().map(move |&t| (i, t))).collect();
    let rows = exec.map(&jobs, |&(i, t)| {
        let (v, spec) = &specs[i];
        let mut row = vec![Cell::Num(*v)];
        row.extend(evaluate_row(spec, t));
        row
    });
    let mut table = Table::new(std::iter::once(path).chain(EVALUATE_COLUMNS));
    for row in rows {
        table.push(row);
    }
    Ok(table)
}

fn measure(m: Measure) -> &'static str {
    match m {
        Measure::Absolute => "abs",
        Measure::Relative => "rel",
        Measure::Below => "below",
    }
}

/// Fixed-width report, one line per check, with a verdict per criterion.
pub fn format_report(report: &SuiteReport) -> String {
    let mut out = String::new();
    for c in &report.criteria {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        let limit = c.time_limit.map(|l| format!(" / {}s", l.as_secs())).unwrap_or_default();
        let _ = writeln!(out, "criterion {} [{verdict}] {} ({:.2}s{limit})", c.id, c.title, c.elapsed.as_secs_f64());
        let _ = writeln!(
            out,
            "  {:<14} {:<5} {:>9} {:>6} {:>10} {:>10} {:>8}  {:<6} quantity",
            "tag", "kind", "limit", "cases", "max_abs", "max_rel", "failures", "status"
        );
        for ch in &c.checks {
            let _ = writeln!(
                out,
                "  {:<14} {:<5} {:>9.1e} {:>6} {:>10.3e} {:>10.3e} {:>8}  {:<6} {}",
                ch.tag.name(),
                measure(ch.measure),
                ch.limit,
                ch.cases,
                ch.max_abs,
                ch.max_rel,
                ch.failures,
                if ch.passed() { "ok" } else { "FAIL" },
                ch.quantity
            );
            if let (false, Some(first)) = (ch.passed(), &ch.first_failure) {
                let _ = writeln!(out, "      first failure: {first}");
            }
        }
        if !c.within_time() {
            let _ = writeln!(out, "  runtime exceeded the limit");
        }
    }
    out
}
