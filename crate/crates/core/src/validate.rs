//! Analytic-versus-oracle acceptance suite.
//!
//! Each criterion draws seeded random states, evaluates the closed forms and
//! an independent reference, and records the worst error per quantity tag.
//! A criterion passes when every check is within its limit and the run
//! finished inside its time budget.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::{
    entropy_sum, mgf, nth_moment, photon_stats, prob_p, prob_x, quadrature_variances,
    rho_position, rho_position_dsts, wavefunction, xp_moments, Coherence, PhotonStats, Quadrature,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::{
    braid_displacement, Displacement, OscillatorParams, Squeeze, StateSpec, Temperature,
    ThermalAngles, ThermalSpec,
};
use crate::oracle::fock::{fock_expectations, fock_tfd_trajectory, ordering_overlap, wavefunction_from_fock};
use crate::oracle::gaussian::{gaussian_photon_stats, gaussian_tfd_state, reduce_physical};
use crate::oracle::quadrature::quad_integrate;

pub const DEFAULT_SEED: u64 = 0x7d57_5eed;
pub const DEFAULT_DRAWS: usize = 200;
pub const DEFAULT_QUAD_POINTS: usize = 2001;
const HALFWIDTH: f64 = 10.0;
const WAVEFUNCTION_DRAWS: usize = 10;
const FOCK_TIMES: usize = 8;

/// Quantity a check is about. Printed in reports and used to pick a
/// formula for the negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    Braid,
    ThermalAngle,
    AngleAddition,
    Wavefunction,
    Rho,
    RhoReduction,
    ProbX,
    MeanX,
    VarX,
    ProbP,
    MeanP,
    VarP,
    Uncertainty,
    Entropy,
    QuadVariance,
    Mgf,
    NthMoment,
    MeanN,
    VarN,
    G2,
}

impl Tag {
    pub const ALL: [Tag; 20] = [
        Tag::Braid,
        Tag::ThermalAngle,
        Tag::AngleAddition,
        Tag::Wavefunction,
        Tag::Rho,
        Tag::RhoReduction,
        Tag::ProbX,
        Tag::MeanX,
        Tag::VarX,
        Tag::ProbP,
        Tag::MeanP,
        Tag::VarP,
        Tag::Uncertainty,
        Tag::Entropy,
        Tag::QuadVariance,
        Tag::Mgf,
        Tag::NthMoment,
        Tag::MeanN,
        Tag::VarN,
        Tag::G2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Tag::Braid => "braid",
            Tag::ThermalAngle => "thermal-angle",
            Tag::AngleAddition => "angle-addition",
            Tag::Wavefunction => "wavefunction",
            Tag::Rho => "rho",
            Tag::RhoReduction => "rho-reduction",
            Tag::ProbX => "prob-x",
            Tag::MeanX => "mean-x",
            Tag::VarX => "var-x",
            Tag::ProbP => "prob-p",
            Tag::MeanP => "mean-p",
            Tag::VarP => "var-p",
            Tag::Uncertainty => "uncertainty",
            Tag::Entropy => "entropy",
            Tag::QuadVariance => "quad-variance",
            Tag::Mgf => "mgf",
            Tag::NthMoment => "nth-moment",
            Tag::MeanN => "mean-n",
            Tag::VarN => "var-n",
            Tag::G2 => "g2",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Tag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown tag {s:?}")))
    }
}

/// How a check's error is compared with its limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// `max_abs ≤ limit`
    Absolute,
    /// `max_rel ≤ limit`
    Relative,
    /// `max_abs < limit`, for strict inequalities
    Below,
}

/// Worst-case outcome of one comparison over all cases of a criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub tag: Tag,
    pub quantity: &'static str,
    pub measure: Measure,
    pub limit: f64,
    pub cases: usize,
    pub max_abs: f64,
    pub max_rel: f64,
    /// Cases that could not be evaluated (oracle non-convergence and the like).
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl Check {
    fn new(tag: Tag, quantity: &'static str, measure: Measure, limit: f64) -> Self {
        Self {
            tag,
            quantity,
            measure,
            limit,
            cases: 0,
            max_abs: 0.0,
            max_rel: 0.0,
            failures: 0,
            first_failure: None,
        }
    }

    /// The error the limit applies to.
    pub fn error(&self) -> f64 {
        match self.measure {
            Measure::Relative => self.max_rel,
            Measure::Absolute | Measure::Below => self.max_abs,
        }
    }

    pub fn passed(&self) -> bool {
        let within = match self.measure {
            Measure::Below => self.max_abs < self.limit,
            _ => self.error() <= self.limit,
        };
        self.failures == 0 && self.cases > 0 && within
    }

    /// `|a − b|` and `|a − b| / max(|b|, floor)`.
    fn compare(&mut self, analytic: f64, reference: f64, floor: f64) {
        let abs = (analytic - reference).abs();
        let rel = abs / reference.abs().max(floor);
        self.observe(abs, if abs.is_nan() { f64::NAN } else { rel });
    }

    fn compare_complex(&mut self, analytic: Complex64, reference: Complex64, floor: f64) {
        let abs = (analytic - reference).norm();
        self.observe(abs, abs / reference.norm().max(floor));
    }

    /// Records a precomputed error, used for both columns.
    fn value(&mut self, v: f64) {
        self.observe(v, v);
    }

    fn observe(&mut self, abs: f64, rel: f64) {
        self.cases += 1;
        // NaN must fail the check, so it wins over any finite maximum
        self.max_abs = if abs.is_nan() || self.max_abs.is_nan() { f64::NAN } else { self.max_abs.max(abs) };
        self.max_rel = if rel.is_nan() || self.max_rel.is_nan() { f64::NAN } else { self.max_rel.max(rel) };
    }

    fn fail(&mut self, reason: impl Into<String>) {
        self.cases += 1;
        self.failures += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some(reason.into());
        }
    }

    fn merge(&mut self, other: &Check) {
        self.cases += other.cases;
        self.failures += other.failures;
        for (mine, theirs) in [(&mut self.max_abs, other.max_abs), (&mut self.max_rel, other.max_rel)] {
            *mine = if mine.is_nan() || theirs.is_nan() { f64::NAN } else { mine.max(theirs) };
        }
        if self.first_failure.is_none() {
            self.first_failure.clone_from(&other.first_failure);
        }
    }
}

/// Result of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
    pub time_limit: Option<Duration>,
}

impl CriterionReport {
    pub fn within_time(&self) -> bool {
        self.time_limit.is_none_or(|limit| self.elapsed <= limit)
    }

    pub fn passed(&self) -> bool {
        self.within_time() && self.checks.iter().all(Check::passed)
    }

    pub fn failing_tags(&self) -> Vec<Tag> {
        let mut tags: Vec<Tag> = self.checks.iter().filter(|c| !c.passed()).map(|c| c.tag).collect();
        tags.sort();
        tags.dedup();
        tags
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub criteria: Vec<CriterionReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(CriterionReport::passed)
    }

    pub fn failing_tags(&self) -> Vec<Tag> {
        let mut tags: Vec<Tag> = self.criteria.iter().flat_map(CriterionReport::failing_tags).collect();
        tags.sort();
        tags.dedup();
        tags
    }
}

/// One evaluation point: a state and a time.
#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub spec: StateSpec,
    pub t: f64,
}

/// Parameter box random states are drawn from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DrawBox {
    pub max_alpha: f64,
    pub max_r: f64,
    /// Upper bound on each reduced temperature `k_bT/ħω`.
    pub max_tau: f64,
    /// Upper bound on `ωt`.
    pub max_phase: f64,
}

impl DrawBox {
    pub const FULL: Self = Self { max_alpha: 2.0, max_r: 1.5, max_tau: 3.0, max_phase: 4.0 * PI };
    /// The box in which the Fock oracle is compared.
    pub const RESTRICTED: Self = Self { max_alpha: 1.5, max_r: 1.0, max_tau: 1.5, max_phase: 4.0 * PI };
    /// A smaller box on which a cutoff of 60 loses less than 1e-12 of the norm.
    pub const FOCK_CONVERGENT: Self = Self { max_alpha: 1.0, max_r: 0.5, max_tau: 0.5, max_phase: 4.0 * PI };

    pub fn sample<R: Rng>(&self, rng: &mut R, osc: &OscillatorParams) -> Case {
        let alpha = Displacement::from_polar(rng.random::<f64>() * self.max_alpha, rng.random::<f64>() * 2.0 * PI)
            .expect("bounded draw");
        let squeeze = Squeeze::new(rng.random::<f64>() * self.max_r, rng.random::<f64>() * 2.0 * PI)
            .expect("bounded draw");
        let thermal = ThermalSpec::single(
            Temperature::Reduced(rng.random::<f64>() * self.max_tau),
            Temperature::Reduced(rng.random::<f64>() * self.max_tau),
        );
        let t = rng.random::<f64>() * self.max_phase / osc.omega();
        Case { spec: StateSpec::new(*osc, alpha, squeeze, thermal).expect("bounded draw"), t }
    }

    /// `n` draws from an independent stream per `stream` id.
    pub fn sample_many(&self, seed: u64, stream: u64, n: usize, osc: &OscillatorParams) -> Vec<Case> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        (0..n).map(|_| self.sample(&mut rng, osc)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub draws: usize,
    pub osc: OscillatorParams,
    pub fock_cutoff: usize,
    pub quad_points: usize,
    /// Extra cases appended to every criterion's random draws.
    pub fixed: Vec<Case>,
    /// Perturbs the closed form behind one tag; used as a negative control.
    pub corrupt: Option<Tag>,
    pub execution: Execution,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            draws: DEFAULT_DRAWS,
            osc: OscillatorParams::natural(),
            fock_cutoff: crate::oracle::fock::DEFAULT_CUTOFF,
            quad_points: DEFAULT_QUAD_POINTS,
            fixed: Vec::new(),
            corrupt: None,
            execution: Execution::default(),
        }
    }
}

impl SuiteConfig {
    fn cases(&self, area: DrawBox, stream: u64, n: usize) -> Vec<Case> {
        let mut cases = area.sample_many(self.seed, stream, n, &self.osc);
        cases.extend(self.fixed.iter().cloned());
        cases
    }

    /// Applies the negative-control perturbation to an analytic value.
    fn taint(&self, tag: Tag, v: f64) -> f64 {
        if self.corrupt == Some(tag) {
            v * (1.0 + 1e-3) + 1e-3
        } else {
            v
        }
    }

    fn taint_complex(&self, tag: Tag, v: Complex64) -> Complex64 {
        if self.corrupt == Some(tag) {
            v * (1.0 + 1e-3)
        } else {
            v
        }
    }

    fn validate(&self) -> Result<()> {
        if self.draws == 0 {
            return Err(Error::Contract("at least one draw is required".into()));
        }
        if self.quad_points < 101 || self.quad_points.is_multiple_of(2) {
            return Err(Error::Contract(format!(
                "quadrature needs an odd point count ≥ 101, got {}",
                self.quad_points
            )));
        }
        if self.fock_cutoff < crate::oracle::fock::MIN_CUTOFF {
            return Err(Error::Contract(format!("Fock cutoff too small: {}", self.fock_cutoff)));
        }
        Ok(())
    }
}

pub const CRITERIA: [u8; 8] = [1, 2, 3, 4, 5, 6, 7, 8];

/// Runs every criterion.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let criteria = CRITERIA.iter().map(|&id| run_criterion(id, cfg)).collect::<Result<_>>()?;
    Ok(SuiteReport { criteria })
}

pub fn run_criterion(id: u8, cfg: &SuiteConfig) -> Result<CriterionReport> {
    cfg.validate()?;
    let start = Instant::now();
    let (title, limit, checks) = match id {
        1 => ("moment agreement with the covariance oracle", Some(5), moment_agreement(cfg)),
        2 => ("photon statistics against both oracles", Some(60), photon_statistics(cfg)),
        3 => ("density normalisation, diagonal, Hermiticity, reduction", None, density_integrity(cfg)?),
        4 => ("uncertainty bound and entropy sum", None, uncertainty_entropy(cfg)?),
        5 => ("thermal identities and braiding", None, identities(cfg)),
        6 => ("wavefunction against Fock reconstruction", Some(60), wavefunction_check(cfg)),
        7 => ("moment generating function and raw moments", None, mgf_moments(cfg)?),
        8 => ("rotated quadrature variances", None, quadrature_check(cfg)),
        other => return Err(Error::Contract(format!("no criterion {other}"))),
    };
    Ok(CriterionReport {
        id,
        title,
        checks,
        elapsed: start.elapsed(),
        time_limit: limit.map(Duration::from_secs),
    })
}

/// Runs `f` over `cases` with per-case copies of `template`, then merges.
fn sweep<F>(cfg: &SuiteConfig, cases: &[Case], template: Vec<Check>, f: F) -> Vec<Check>
where
    F: Fn(&Case, &mut [Check]) + Sync + Send,
{
    let partial = cfg.execution.map(cases, |case| {
        let mut local = template.clone();
        f(case, &mut local);
        local
    });
    let mut total = template;
    for local in &partial {
        for (acc, part) in total.iter_mut().zip(local) {
            acc.merge(part);
        }
    }
    total
}

/// Fallible variant of [`sweep`]; the first error aborts the criterion.
fn try_sweep<F>(cfg: &SuiteConfig, cases: &[Case], template: Vec<Check>, f: F) -> Result<Vec<Check>>
where
    F: Fn(&Case, &mut [Check]) -> Result<()> + Sync + Send,
{
    let errors = std::sync::Mutex::new(None);
    let checks = sweep(cfg, cases, template, |case, local| {
        if let Err(e) = f(case, local) {
            errors.lock().expect("unpoisoned").get_or_insert(e);
        }
    });
    match errors.into_inner().expect("unpoisoned") {
        Some(e) => Err(e),
        None => Ok(checks),
    }
}

fn photon_compare(checks: &mut [Check], analytic: &PhotonStats, reference: &PhotonStats) {
    checks[0].compare(analytic.mean_n, reference.mean_n, 1.0);
    checks[1].compare(analytic.var_n, reference.var_n, 1.0);
    match (analytic.g2, reference.g2) {
        (Coherence::Defined(a), Coherence::Defined(b)) => checks[2].compare(a, b, 1.0),
        (Coherence::Undefined, Coherence::Undefined) => checks[2].value(0.0),
        (a, b) => checks[2].fail(format!("g2 definedness differs: {a} vs {b}")),
    }
}

fn moment_agreement(cfg: &SuiteConfig) -> Vec<Check> {
    let cases = cfg.cases(DrawBox::FULL, 1, cfg.draws);
    let template = vec![
        Check::new(Tag::MeanX, "mean_x vs covariance oracle", Measure::Relative, 1e-10),
        Check::new(Tag::VarX, "var_x vs covariance oracle", Measure::Relative, 1e-10),
        Check::new(Tag::MeanP, "mean_p vs covariance oracle", Measure::Relative, 1e-10),
        Check::new(Tag::VarP, "var_p vs covariance oracle", Measure::Relative, 1e-10),
    ];
    sweep(cfg, &cases, template, |case, c| {
        let osc = case.spec.osc();
        let m = xp_moments(&case.spec, case.t);
        let g = match reduce_physical(&gaussian_tfd_state(&case.spec, case.t)) {
            Ok(g) => g,
            Err(e) => return c.iter_mut().for_each(|k| k.fail(e.to_string())),
        };
        // means are compared against the vacuum spread, not their possibly vanishing size
        let (sx, sp) = (osc.length_scale() / 2f64.sqrt(), osc.momentum_scale() / 2f64.sqrt());
        c[0].compare(cfg.taint(Tag::MeanX, m.mean_x), g.mean[0], sx);
        c[1].compare(cfg.taint(Tag::VarX, m.var_x), g.cov[(0, 0)], 0.0);
        c[2].compare(cfg.taint(Tag::MeanP, m.mean_p), g.mean[1], sp);
        c[3].compare(cfg.taint(Tag::VarP, m.var_p), g.cov[(1, 1)], 0.0);
    })
}

fn tainted_photon_stats(cfg: &SuiteConfig, spec: &StateSpec) -> PhotonStats {
    let s = photon_stats(spec);
    PhotonStats {
        mean_n: cfg.taint(Tag::MeanN, s.mean_n),
        var_n: cfg.taint(Tag::VarN, s.var_n),
        g2: match s.g2 {
            Coherence::Defined(v) => Coherence::Defined(cfg.taint(Tag::G2, v)),
            Coherence::Undefined => Coherence::Undefined,
        },
    }
}

fn photon_statistics(cfg: &SuiteConfig) -> Vec<Check> {
    let full = cfg.cases(DrawBox::FULL, 2, cfg.draws);
    let mut checks = sweep(
        cfg,
        &full,
        vec![
            Check::new(Tag::MeanN, "mean_n vs Wick evaluation", Measure::Relative, 1e-10),
            Check::new(Tag::VarN, "var_n vs Wick evaluation", Measure::Relative, 1e-10),
            Check::new(Tag::G2, "g2 vs Wick evaluation", Measure::Relative, 1e-10),
        ],
        |case, c| {
            let osc = case.spec.osc();
            let reference = reduce_physical(&gaussian_tfd_state(&case.spec, case.t))
                .and_then(|g| gaussian_photon_stats(&g, osc));
            match reference {
                Ok(r) => photon_compare(c, &tainted_photon_stats(cfg, &case.spec), &r),
                Err(e) => c.iter_mut().for_each(|k| k.fail(e.to_string())),
            }
        },
    );

    let restricted = cfg.cases(DrawBox::RESTRICTED, 3, cfg.draws);
    let cutoff = cfg.fock_cutoff;
    checks.extend(sweep(
        cfg,
        &restricted,
        vec![
            Check::new(Tag::MeanN, "mean_n vs Fock oracle", Measure::Relative, 1e-6),
            Check::new(Tag::VarN, "var_n vs Fock oracle", Measure::Relative, 1e-6),
            Check::new(Tag::G2, "g2 vs Fock oracle", Measure::Relative, 1e-6),
            Check::new(Tag::MeanN, "Fock photon moments across 8 times", Measure::Relative, 1e-10),
        ],
        |case, c| {
            let osc = case.spec.osc();
            let times: Vec<f64> =
                (0..FOCK_TIMES).map(|k| case.t + k as f64 * 0.37 * osc.period()).collect();
            let states = match fock_tfd_trajectory(&case.spec, &times, cutoff) {
                Ok(s) => s,
                Err(e) => return c.iter_mut().for_each(|k| k.fail(e.to_string())),
            };
            let stats: Vec<PhotonStats> =
                states.iter().map(|s| fock_expectations(s, osc).photon_stats()).collect();
            let (head, tail) = c.split_at_mut(3);
            photon_compare(head, &tainted_photon_stats(cfg, &case.spec), &stats[0]);
            for (i, a) in stats.iter().enumerate() {
                for b in &stats[i + 1..] {
                    tail[0].compare(a.mean_n, b.mean_n, 1.0);
                    tail[0].compare(a.var_n + a.mean_n * a.mean_n, b.var_n + b.mean_n * b.mean_n, 1.0);
                    if let (Some(x), Some(y)) = (a.g2.value(), b.g2.value()) {
                        tail[0].compare(x, y, 1.0);
                    }
                }
            }
        },
    ));
    checks
}

fn density_integrity(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let cases = cfg.cases(DrawBox::FULL, 4, cfg.draws);
    let template = vec![
        Check::new(Tag::ProbX, "position density normalisation", Measure::Absolute, 1e-8),
        Check::new(Tag::ProbP, "momentum density normalisation", Measure::Absolute, 1e-8),
        Check::new(Tag::Rho, "trace of the position density matrix", Measure::Absolute, 1e-8),
        Check::new(Tag::Rho, "diagonal vs position density (101 points)", Measure::Relative, 1e-12),
        Check::new(Tag::Rho, "Hermiticity (21 x 21 grid)", Measure::Relative, 1e-13),
        Check::new(Tag::RhoReduction, "no detector noise at t=0 vs DSTS form", Measure::Relative, 1e-12),
    ];
    let points = cfg.quad_points;
    try_sweep(cfg, &cases, template, |case, c| {
        let (spec, t) = (&case.spec, case.t);
        let m = xp_moments(spec, t);
        let (sx, sp) = (m.std_x(), m.std_p());
        let peak = 1.0 / ((2.0 * PI).sqrt() * sx);

        let nx = quad_integrate(|x| cfg.taint(Tag::ProbX, prob_x(spec, x, t)), m.mean_x, sx, HALFWIDTH, points)?;
        c[0].value((nx - 1.0).abs());
        let np = quad_integrate(|p| cfg.taint(Tag::ProbP, prob_p(spec, p, t)), m.mean_p, sp, HALFWIDTH, points)?;
        c[1].value((np - 1.0).abs());
        let rho = |a: f64, b: f64| cfg.taint_complex(Tag::Rho, rho_position(spec, a, b, t));
        let tr = quad_integrate(|x| rho(x, x).re, m.mean_x, sx, HALFWIDTH, points)?;
        c[2].value((tr - 1.0).abs());

        for k in 0..101 {
            let x = m.mean_x + sx * (-5.0 + 0.1 * k as f64);
            c[3].compare_complex(rho(x, x), Complex64::new(prob_x(spec, x, t), 0.0), peak);
        }
        let grid: Vec<f64> = (0..21).map(|k| m.mean_x + sx * (-3.0 + 0.3 * k as f64)).collect();
        for &a in &grid {
            for &b in &grid {
                c[4].compare_complex(rho(a, b), rho(b, a).conj(), peak);
            }
        }

        let quiet = spec.with_thermal(ThermalSpec { input: spec.thermal().input.clone(), detector: Vec::new() })?;
        let m0 = xp_moments(&quiet, 0.0);
        let peak0 = 1.0 / ((2.0 * PI).sqrt() * m0.std_x());
        let grid0: Vec<f64> = (0..11).map(|k| m0.mean_x + m0.std_x() * (-3.0 + 0.6 * k as f64)).collect();
        for &a in &grid0 {
            for &b in &grid0 {
                let analytic = cfg.taint_complex(Tag::RhoReduction, rho_position(&quiet, a, b, 0.0));
                c[5].compare_complex(analytic, rho_position_dsts(&quiet, a, b), peak0);
            }
        }
        Ok(())
    })
}

/// `−∫ρ ln ρ` of a density sampled by quadrature.
fn differential_entropy<F: Fn(f64) -> f64>(density: F, center: f64, sigma: f64, points: usize) -> Result<f64> {
    quad_integrate(
        |u| {
            let v = density(u);
            if v > 0.0 {
                -v * v.ln()
            } else {
                0.0
            }
        },
        center,
        sigma,
        HALFWIDTH,
        points,
    )
}

fn uncertainty_entropy(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let cases = cfg.cases(DrawBox::FULL, 5, cfg.draws);
    let template = vec![
        Check::new(Tag::Uncertainty, "violation of the thermal bound (64-point period grid)", Measure::Relative, 1e-12),
        Check::new(Tag::Uncertainty, "grid minimum vs thermal bound", Measure::Relative, 1e-9),
        Check::new(Tag::Entropy, "entropy sum vs ln(2 pi e dx dp)", Measure::Absolute, 1e-12),
        Check::new(Tag::Entropy, "entropy sum vs quadrature entropies", Measure::Absolute, 1e-6),
    ];
    let points = cfg.quad_points;
    try_sweep(cfg, &cases, template, |case, c| {
        let spec = &case.spec;
        let osc = spec.osc();
        let bound = 0.5 * osc.hbar() * spec.angles().cosh_2total;
        let phi = spec.squeeze().phi();
        let mut lowest = f64::INFINITY;
        for k in 0..64 {
            // anchored so that 2ωt − φ steps through kπ/32
            let t = (phi + k as f64 * PI / 32.0) / (2.0 * osc.omega());
            let m = xp_moments(spec, t);
            let product = cfg.taint(Tag::Uncertainty, (m.var_x * m.var_p).sqrt());
            c[0].value(((bound - product) / bound).max(0.0));
            lowest = lowest.min(product);
        }
        c[1].compare(lowest, bound, 0.0);

        let m = xp_moments(spec, case.t);
        let s = cfg.taint(Tag::Entropy, entropy_sum(spec, case.t));
        c[2].compare(s, (2.0 * PI * E * m.std_x() * m.std_p()).ln(), 1.0);
        let hx = differential_entropy(|x| prob_x(spec, x, case.t), m.mean_x, m.std_x(), points)?;
        let hp = differential_entropy(|p| prob_p(spec, p, case.t), m.mean_p, m.std_p(), points)?;
        c[3].compare(s, hx + hp, 1.0);
        Ok(())
    })
}

fn identities(cfg: &SuiteConfig) -> Vec<Check> {
    let mut addition = Check::new(Tag::AngleAddition, "cosh 2(t1+t2) vs coth coth + csch csch", Measure::Relative, 1e-12);
    let mut single = Check::new(Tag::ThermalAngle, "(cosh t + sinh t)^2 vs coth(beta hw/4)", Measure::Relative, 1e-12);
    let mut double = Check::new(Tag::ThermalAngle, "cosh 2t vs coth(beta hw/2)", Measure::Relative, 1e-12);
    let osc = cfg.osc;
    let taus: Vec<f64> = (0..60).map(|k| 0.05 + (3.0 - 0.05) * k as f64 / 59.0).collect();
    let angle = |tau: f64| Temperature::Reduced(tau).angle(&osc).expect("positive temperature");
    let coth = |x: f64| 1.0 / x.tanh();
    let csch = |x: f64| 1.0 / x.sinh();
    for &a in &taus {
        let ta = angle(a);
        let s = cfg.taint(Tag::ThermalAngle, (ta.cosh() + ta.sinh()).powi(2));
        single.compare(s, coth(0.25 / a), 0.0);
        double.compare(cfg.taint(Tag::ThermalAngle, (2.0 * ta).cosh()), coth(0.5 / a), 0.0);
        for &b in &taus {
            let joint = ThermalAngles::from_angles(ta, angle(b)).expect("finite angles").cosh_2total;
            let (xa, xb) = (0.5 / a, 0.5 / b);
            let reference = coth(xa) * coth(xb) + csch(xa) * csch(xb);
            addition.compare(cfg.taint(Tag::AngleAddition, joint), reference, 0.0);
        }
    }

    let cases = cfg.cases(DrawBox::RESTRICTED, 6, cfg.draws);
    let cutoff = cfg.fock_cutoff;
    let mut checks = vec![addition, single, double];
    checks.extend(sweep(
        cfg,
        &cases,
        vec![Check::new(Tag::Braid, "1 - |<S D 0|D' S 0>| in Fock space", Measure::Absolute, 1e-8)],
        |case, c| {
            let (alpha, z) = (case.spec.alpha(), case.spec.squeeze());
            let mut braided = braid_displacement(alpha, z);
            if cfg.corrupt == Some(Tag::Braid) {
                braided = Displacement::new(braided.re() * (1.0 + 1e-3) + 1e-3, braided.im())
                    .expect("finite displacement");
            }
            match ordering_overlap(alpha, z, braided, cutoff) {
                Ok(o) => c[0].value((1.0 - o).max(0.0)),
                Err(e) => c[0].fail(e.to_string()),
            }
        },
    ));
    checks
}

fn wavefunction_check(cfg: &SuiteConfig) -> Vec<Check> {
    let cases = cfg.cases(DrawBox::RESTRICTED, 7, WAVEFUNCTION_DRAWS);
    let cutoff = cfg.fock_cutoff;
    let template = vec![Check::new(
        Tag::Wavefunction,
        "5 x 5 grid vs Fock reconstruction, one fitted phase",
        Measure::Absolute,
        1e-6,
    )];
    sweep(cfg, &cases, template, |case, c| {
        let (spec, t) = (&case.spec, case.t);
        let osc = spec.osc();
        let state = match fock_tfd_trajectory(spec, &[t], cutoff) {
            Ok(mut s) => s.remove(0),
            Err(e) => return c[0].fail(e.to_string()),
        };
        let g = gaussian_tfd_state(spec, t);
        let axis = |mean: f64, var: f64| -> Vec<f64> {
            (0..5).map(|k| mean + var.sqrt() * (-3.0 + 1.5 * k as f64)).collect()
        };
        let xs = axis(g.mean[0], g.cov[(0, 0)]);
        let xts = axis(g.mean[2], g.cov[(2, 2)]);
        let mut pairs = Vec::with_capacity(25);
        for &x in &xs {
            for &xt in &xts {
                let a = cfg.taint_complex(Tag::Wavefunction, wavefunction(spec, x, xt, t));
                pairs.push((a, wavefunction_from_fock(&state, osc, x, xt)));
            }
        }
        // fit the global phase at the largest analytic amplitude
        let &(a0, f0) = pairs
            .iter()
            .max_by(|p, q| p.0.norm().total_cmp(&q.0.norm()))
            .expect("non-empty grid");
        let phase = (f0 / a0).arg();
        let rotate = Complex64::from_polar(1.0, phase);
        let scale = osc.length_scale();
        for (a, f) in pairs {
            c[0].value(((a * rotate - f) * scale).norm());
        }
    })
}

/// n-th derivative at 0 by central differences, Richardson-extrapolated over
/// steps shrinking geometrically from `h0`. A gentle ratio keeps the smallest
/// step large enough that round-off stays below the truncation error.
fn derivative_at_zero<F: Fn(f64) -> f64>(f: F, n: u32, h0: f64) -> f64 {
    const LEVELS: usize = 8;
    const RATIO: f64 = 1.35;
    let central = |h: f64| -> f64 {
        let mut acc = 0.0;
        let mut binom = 1.0;
        for k in 0..=n {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * binom * f((0.5 * n as f64 - k as f64) * h);
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
        acc / h.powi(n as i32)
    };
    let mut table = [[0.0; LEVELS]; LEVELS];
    for i in 0..LEVELS {
        table[i][0] = central(h0 / RATIO.powi(i as i32));
        for j in 1..=i {
            let w = RATIO.powi(2 * j as i32);
            table[i][j] = table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (w - 1.0);
        }
    }
    table[LEVELS - 1][LEVELS - 1]
}

fn mgf_moments(cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let cases = cfg.cases(DrawBox::FULL, 8, cfg.draws);
    let template = vec![
        Check::new(Tag::Mgf, "mgf vs quadrature, lambda in {-0.5, 0.3, 1.0}", Measure::Relative, 1e-8),
        Check::new(Tag::NthMoment, "n <= 6 vs finite-difference derivatives", Measure::Relative, 1e-6),
        Check::new(Tag::NthMoment, "n = 1, 2 vs closed-form mean and variance", Measure::Relative, 1e-13),
    ];
    let points = cfg.quad_points;
    try_sweep(cfg, &cases, template, |case, c| {
        let (spec, t) = (&case.spec, case.t);
        let osc = spec.osc();
        let m = xp_moments(spec, t);
        for which in [Quadrature::Position, Quadrature::Momentum] {
            let (mean, var, unit) = match which {
                Quadrature::Position => (m.mean_x, m.var_x, osc.length_scale()),
                Quadrature::Momentum => (m.mean_p, m.var_p, osc.momentum_scale()),
            };
            let density = |u: f64| match which {
                Quadrature::Position => prob_x(spec, u, t),
                Quadrature::Momentum => prob_p(spec, u, t),
            };
            let sigma = var.sqrt();
            for lambda in [-0.5, 0.3, 1.0].map(|l| l / unit) {
                let analytic = cfg.taint(Tag::Mgf, mgf(spec, which, lambda, t));
                // the tilted density peaks at μ + λσ²; integrate there, scaled by e^{-λ·centre}
                let centre = mean + lambda * var;
                let shifted = quad_integrate(|u| (lambda * (u - centre)).exp() * density(u), centre, sigma, HALFWIDTH, points)?;
                c[0].compare(analytic, shifted * (lambda * centre).exp(), 0.0);
            }

            let scale = (var + mean * mean).sqrt();
            let h0 = 0.8 / scale;
            for n in 0..=6u32 {
                let analytic = cfg.taint(Tag::NthMoment, nth_moment(spec, which, n, t));
                let numeric = derivative_at_zero(|l| mgf(spec, which, l, t), n, h0);
                c[1].compare(analytic, numeric, scale.powi(n as i32));
            }
            let first = cfg.taint(Tag::NthMoment, nth_moment(spec, which, 1, t));
            let second = cfg.taint(Tag::NthMoment, nth_moment(spec, which, 2, t));
            c[2].compare(first, mean, sigma);
            c[2].compare(second, var + mean * mean, 0.0);
        }
        Ok(())
    })
}

fn quadrature_check(cfg: &SuiteConfig) -> Vec<Check> {
    let cases = cfg.cases(DrawBox::FULL, 9, cfg.draws);
    let template = vec![
        Check::new(Tag::QuadVariance, "rotation 0 vs scaled var_x, var_p", Measure::Relative, 1e-12),
        Check::new(Tag::QuadVariance, "min over rotation of dY2^2 / (cosh 2T cosh 2r / 4), r > 0", Measure::Below, 1.0),
    ];
    sweep(cfg, &cases, template, |case, c| {
        let (spec, t) = (&case.spec, case.t);
        let osc = spec.osc();
        let m = xp_moments(spec, t);
        let (y1, y2) = quadrature_variances(spec, t, 0.0);
        let hbar = osc.hbar();
        let mw = osc.mass() * osc.omega();
        c[0].compare(cfg.taint(Tag::QuadVariance, y1), mw / (2.0 * hbar) * m.var_x, 0.0);
        c[0].compare(cfg.taint(Tag::QuadVariance, y2), m.var_p / (2.0 * mw * hbar), 0.0);

        let r = spec.squeeze().r();
        if r > 0.0 {
            let reference = 0.25 * spec.angles().cosh_2total * (2.0 * r).cosh();
            let lowest = (0..64)
                .map(|k| quadrature_variances(spec, t, k as f64 * PI / 64.0).1)
                .fold(f64::INFINITY, f64::min);
            c[1].value(cfg.taint(Tag::QuadVariance, lowest) / reference);
        }
    })
}
