//! End-to-end pipelines: the `S = {2}` verification, the `Spec Z` variant,
//! prime sweeps and the constants block, all producing a
//! [`VerificationReport`].

mod identities;
mod report;
mod s2;
mod z;

use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::{self, CacheOutcome};
use crate::padic::is_prime;
use crate::polylog::{PolylogConfig, PolylogFamily};
use crate::{Error, Result};

pub use identities::{functional_equations, inversion_identity, sample_points, IdentityCheck};
pub use report::{read_report, render, render_sweep, write_report, write_text, ReportFormat, SCHEMA_VERSION};
pub use s2::{cmd_constants, cmd_verify_s2, expected_points, relation_functions};
pub use z::cmd_verify_z;

/// Digits of slack between the target precision and the checks on derived
/// quantities (functional equations, closed forms, `F_4(b)`).
pub const LOSS_BUDGET: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Site {
    /// `X = P^1 \ {0, 1, ∞}` over `Z[1/2]`.
    ZMinus2,
    /// `X` over `Z`.
    Z,
}

impl Site {
    pub fn name(self) -> &'static str {
        match self {
            Site::ZMinus2 => "z-minus-2",
            Site::Z => "z",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub p: u64,
    pub prec: u32,
    pub kmax: u32,
    pub site: Site,
    pub match_digits: u32,
    pub cache_dir: Option<PathBuf>,
    pub format: ReportFormat,
    /// Seed for the sampled identity checks.
    pub seed: u64,
    /// Number of sample points per identity.
    pub samples: usize,
    /// Whether to recompute the ODE/Frobenius residuals of the family.
    pub audit: bool,
}

impl RunConfig {
    pub fn new(p: u64, prec: u32) -> Self {
        RunConfig {
            p,
            prec,
            kmax: 4,
            site: Site::ZMinus2,
            match_digits: 20,
            cache_dir: None,
            format: ReportFormat::Text,
            seed: 0x5eed,
            samples: 25,
            audit: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 3 || !is_prime(self.p) {
            return Err(Error::InvalidPrime(self.p));
        }
        if self.prec <= LOSS_BUDGET {
            return Err(Error::Config(format!("precision must exceed the loss budget {LOSS_BUDGET}")));
        }
        if self.match_digits == 0 || self.match_digits > self.prec - LOSS_BUDGET {
            return Err(Error::Config(format!(
                "match digits must lie in 1..={} for precision {}",
                self.prec - LOSS_BUDGET,
                self.prec
            )));
        }
        let need = match self.site {
            Site::ZMinus2 => 4,
            Site::Z => 3,
        };
        if self.kmax < need {
            return Err(Error::Config(format!("site {} needs kmax >= {need}", self.site.name())));
        }
        Ok(())
    }

    pub fn polylog_config(&self) -> Result<PolylogConfig> {
        PolylogConfig::new(self.p, self.prec, self.kmax)
    }

    fn echo(&self, pc: &PolylogConfig) -> ConfigEcho {
        ConfigEcho {
            p: self.p,
            prec: self.prec,
            kmax: self.kmax,
            site: self.site,
            match_digits: self.match_digits,
            work_prec: pc.work_prec,
            trunc: pc.trunc,
            seed: self.seed,
            samples: self.samples,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// More common zeros than expected.
    FailExtra,
    /// An observation about a conjecture rather than a failed computation.
    Finding,
    NotApplicable,
}

impl CheckStatus {
    pub fn label(self) -> &'static str {
        match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::FailExtra => "FAIL-EXTRA",
            CheckStatus::Finding => "FINDING",
            CheckStatus::NotApplicable => "N/A",
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(self, CheckStatus::Fail | CheckStatus::FailExtra)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
    /// Observed valuation or margin, when the check is numeric.
    pub observed: Option<i64>,
    pub threshold: Option<i64>,
}

impl Check {
    pub fn new(name: &str, status: CheckStatus, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), status, detail: detail.into(), observed: None, threshold: None }
    }

    /// PASS iff `observed >= threshold`.
    pub fn at_least(name: &str, observed: i64, threshold: i64, detail: impl Into<String>) -> Self {
        let status = if observed >= threshold { CheckStatus::Pass } else { CheckStatus::Fail };
        Check {
            name: name.to_string(),
            status,
            detail: detail.into(),
            observed: Some(observed),
            threshold: Some(threshold),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub p: u64,
    pub prec: u32,
    pub kmax: u32,
    pub site: Site,
    pub match_digits: u32,
    pub work_prec: u32,
    pub trunc: usize,
    pub seed: u64,
    pub samples: usize,
}

/// p-adic constants as digit strings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constants {
    pub log2: String,
    /// `ζ_p(k)` for `2 <= k <= kmax`.
    pub zeta: Vec<(u32, String)>,
    pub li2_half: String,
    pub li3_half: String,
    pub li4_half: Option<String>,
    pub c1: String,
    pub c1_reconstruction: Option<String>,
    /// `v(c1 - 7/8)`.
    pub c1_minus_7_8_valuation: i64,
    pub c_p: Option<String>,
    /// `C^p / c1`, the coefficient of `log z · Li_3` in `F_4`.
    pub c2: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootEntry {
    pub residue: u64,
    pub value: String,
    pub multiplicity: usize,
    pub certified: bool,
    pub reconstruction: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionZeros {
    pub name: String,
    /// Zeros in `X(Z_p)` with multiplicity.
    pub count: usize,
    /// Zeros counted by Strassman that do not lie in `Q_p`.
    pub non_rational: usize,
    pub roots: Vec<RootEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommonZeroEntry {
    pub residue: u64,
    pub value: String,
    pub certified: bool,
    /// Smallest valuation of the other functions at the point.
    pub min_residual: i64,
    pub reconstruction: Option<String>,
}

/// A Teichmüller pair `ω(a) + ω(b) = 1` and the odd polylogarithms there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZCandidate {
    pub residue: u64,
    pub partner: u64,
    pub point: String,
    /// `v(log(1 - z))` from the constructed family.
    pub log1mz_valuation: i64,
    /// `(k, Li_k(z), v(Li_k(z)))` for odd `k >= 3`.
    pub li_odd: Vec<(u32, String, i64)>,
    /// Whether every `Li_k`, odd `k >= 3`, vanishes to the match precision.
    pub in_locus: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionAudit {
    pub ode_margin: Option<i64>,
    pub frobenius_margin: Option<i64>,
    /// Worst held-out Taylor mismatch valuation over the weights.
    pub ml_held_out: Option<i64>,
    pub ml_d0_valuation: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub command: String,
    pub config: ConfigEcho,
    pub constants: Option<Constants>,
    pub zero_sets: Vec<FunctionZeros>,
    pub common_zeros: Vec<CommonZeroEntry>,
    pub z_candidates: Vec<ZCandidate>,
    pub checks: Vec<Check>,
    pub precision: PrecisionAudit,
    pub warnings: Vec<String>,
    /// Wall-clock milliseconds per stage; not part of the payload.
    pub timing_ms: Vec<(String, u64)>,
}

impl VerificationReport {
    fn new(command: &str, cfg: &RunConfig, pc: &PolylogConfig) -> Self {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            config: cfg.echo(pc),
            constants: None,
            zero_sets: Vec::new(),
            common_zeros: Vec::new(),
            z_candidates: Vec::new(),
            checks: Vec::new(),
            precision: PrecisionAudit::default(),
            warnings: Vec::new(),
            timing_ms: Vec::new(),
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// FAIL if any check failed, else FINDING if any finding, else PASS.
    pub fn overall(&self) -> CheckStatus {
        if self.checks.iter().any(|c| c.status.is_failure()) {
            CheckStatus::Fail
        } else if self.checks.iter().any(|c| c.status == CheckStatus::Finding) {
            CheckStatus::Finding
        } else {
            CheckStatus::Pass
        }
    }

    /// The report without timings, for determinism comparisons.
    pub fn payload(&self) -> VerificationReport {
        VerificationReport { timing_ms: Vec::new(), ..self.clone() }
    }

    /// Rational reconstructions of the common zeros.
    pub fn common_zero_rationals(&self) -> Vec<Option<String>> {
        self.common_zeros.iter().map(|z| z.reconstruction.clone()).collect()
    }
}

struct Stopwatch {
    start: Instant,
}

impl Stopwatch {
    fn start() -> Self {
        Stopwatch { start: Instant::now() }
    }

    fn lap(&mut self, report: &mut VerificationReport, stage: &str) {
        report.timing_ms.push((stage.to_string(), self.start.elapsed().as_millis() as u64));
        self.start = Instant::now();
    }
}

/// Builds or loads the family, recording the cache outcome as a warning.
fn family(cfg: &RunConfig, pc: &PolylogConfig, report: &mut VerificationReport) -> Result<PolylogFamily> {
    let dir = cfg.cache_dir.clone().or_else(cache::default_dir);
    let (fam, outcome) = cache::load_or_build(pc, dir.as_deref())?;
    if let CacheOutcome::Written(_, Some(note)) = outcome {
        report.warnings.push(note);
    }
    Ok(fam)
}

/// Residual audit of the family; fills [`PrecisionAudit`] and adds checks.
fn audit_family(fam: &PolylogFamily, cfg: &RunConfig, report: &mut VerificationReport) -> Result<()> {
    let n = cfg.prec as i64;
    let mut held = i64::MAX;
    let mut d0 = i64::MAX;
    for k in 1..=cfg.kmax {
        let g = fam.g(k)?;
        held = held.min(g.held_out_residual);
        d0 = d0.min(g.d0_valuation());
    }
    report.precision.ml_held_out = Some(held);
    report.precision.ml_d0_valuation = Some(d0);
    report.checks.push(Check::at_least(
        "ml-fit held-out coefficients",
        held,
        n - 4,
        "worst valuation of held-out Taylor mismatches",
    ));
    if cfg.audit {
        let ode = fam.ode_residuals()?;
        let frob = fam.frobenius_residuals()?;
        let om = ode.iter().map(|r| r.margin).min().unwrap_or(i64::MAX);
        let fm = frob.iter().map(|r| r.margin).min().unwrap_or(i64::MAX);
        report.precision.ode_margin = Some(om);
        report.precision.frobenius_margin = Some(fm);
        report.checks.push(Check::at_least("ODE residuals", om, 0, "margin over the budget N - k floor(log_p j)"));
        report.checks.push(Check::at_least(
            "Frobenius residuals",
            fm,
            0,
            "margin over the budget N - k floor(log_p j)",
        ));
    }
    Ok(())
}

/// One row of a sweep summary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p: u64,
    pub status: CheckStatus,
    pub c1_reconstruction: Option<String>,
    pub common_zeros: Vec<Option<String>>,
    pub elapsed_ms: u64,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub reports: Vec<VerificationReport>,
}

impl SweepReport {
    pub fn overall(&self) -> CheckStatus {
        if self.rows.iter().any(|r| r.status.is_failure()) {
            CheckStatus::Fail
        } else if self.rows.iter().any(|r| r.status == CheckStatus::Finding) {
            CheckStatus::Finding
        } else {
            CheckStatus::Pass
        }
    }
}

/// Runs the pipeline of `template.site` for each prime; failures of one
/// prime are recorded in its row and do not stop the others.
pub fn cmd_sweep(primes: &[u64], template: &RunConfig) -> SweepReport {
    let results: Vec<(SweepRow, Option<VerificationReport>)> = primes
        .par_iter()
        .map(|&p| {
            let cfg = RunConfig { p, ..template.clone() };
            let start = Instant::now();
            let run = match cfg.site {
                Site::ZMinus2 => cmd_verify_s2(&cfg),
                Site::Z => cmd_verify_z(&cfg),
            };
            let elapsed_ms = start.elapsed().as_millis() as u64;
            match run {
                Ok(r) => {
                    let row = SweepRow {
                        p,
                        status: r.overall(),
                        c1_reconstruction: r.constants.as_ref().and_then(|c| c.c1_reconstruction.clone()),
                        common_zeros: r.common_zero_rationals(),
                        elapsed_ms,
                        error: None,
                    };
                    (row, Some(r))
                }
                Err(e) => {
                    let row = SweepRow {
                        p,
                        status: CheckStatus::Fail,
                        c1_reconstruction: None,
                        common_zeros: Vec::new(),
                        elapsed_ms,
                        error: Some(e.to_string()),
                    };
                    (row, None)
                }
            }
        })
        .collect();
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for (row, rep) in results {
        rows.push(row);
        reports.extend(rep);
    }
    SweepReport { rows, reports }
}

/// Builds (or loads) the family and reports its residual audit.
pub fn cmd_build(cfg: &RunConfig) -> Result<VerificationReport> {
    let pc = cfg.polylog_config()?;
    let mut report = VerificationReport::new("build", cfg, &pc);
    let mut sw = Stopwatch::start();
    let fam = family(cfg, &pc, &mut report)?;
    sw.lap(&mut report, "build");
    audit_family(&fam, cfg, &mut report)?;
    sw.lap(&mut report, "audit");
    Ok(report)
}
