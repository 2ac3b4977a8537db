//! The `S = {2}` pipeline: `F_2`, `F_4`, their common zeros and the
//! constants they are built from.

use std::collections::BTreeMap;

use super::identities::{functional_equations, inversion_identity};
use super::{
    audit_family, family, Check, CheckStatus, CommonZeroEntry, Constants, FunctionZeros, RootEntry, RunConfig,
    Stopwatch, VerificationReport, LOSS_BUDGET,
};
use crate::coleman::{common_zeroes, ColemanFunction};
use crate::motivic::{f_coefficients, FCoefficients, FTerm, MotivicValues};
use crate::padic::{rational_reconstruction, PadicNumber};
use crate::polylog::PolylogFamily;
use crate::series::RootSet;
use crate::{Error, Result};

/// The S-integral points of `P^1 \ {0, 1, ∞}` for `S = {2}`, in report order.
pub fn expected_points() -> [(i64, i64); 3] {
    [(2, 1), (1, 2), (-1, 1)]
}

fn ratio_label(num: i64, den: i64) -> String {
    if den == 1 {
        num.to_string()
    } else {
        format!("{num}/{den}")
    }
}

struct ConstantValues {
    log2: PadicNumber,
    zeta3: PadicNumber,
    li3_half: PadicNumber,
    li4_half: Option<PadicNumber>,
}

/// Fills the constants block and its checks. Returns the motivic values
/// when `ζ_p(3)` is usable.
fn constants(fam: &PolylogFamily, cfg: &RunConfig, report: &mut VerificationReport) -> Result<Option<MotivicValues>> {
    let n = cfg.prec as i64;
    let half = fam.number(1, 2);
    let log2 = fam.log_of(2, 1)?;
    let li2_half = fam.eval_li(2, &half)?;
    let li3_half = fam.eval_li(3, &half)?;
    let li4_half = if cfg.kmax >= 4 { Some(fam.eval_li(4, &half)?) } else { None };
    let v = ConstantValues { log2, zeta3: fam.zeta_value(3)?, li3_half, li4_half };
    let mut block = Constants {
        log2: v.log2.to_digit_string(),
        zeta: fam.zeta_table().iter().map(|(k, z)| (*k, z.to_digit_string())).collect(),
        li2_half: li2_half.to_digit_string(),
        li3_half: v.li3_half.to_digit_string(),
        li4_half: v.li4_half.as_ref().map(PadicNumber::to_digit_string),
        ..Constants::default()
    };

    for (k, z) in fam.zeta_table() {
        if k % 2 == 0 {
            report.checks.push(Check::at_least(
                &format!("zeta_p({k}) vanishes"),
                z.valuation(),
                n - 6,
                "even zeta values are zero",
            ));
        }
    }
    let l2sq = &v.log2 * &v.log2;
    let d = &li2_half + &(&l2sq * &half);
    report.checks.push(Check::at_least(
        "Li2(1/2) = -(log 2)^2/2",
        d.valuation(),
        n - LOSS_BUDGET as i64,
        "direct evaluation",
    ));
    let cube = v.log2.pow(3)?;
    let d = &(&v.li3_half - &(&fam.number(7, 8) * &v.zeta3)) - &(&cube * &fam.number(1, 6));
    report.checks.push(Check::at_least(
        "Li3(1/2) = 7/8 zeta(3) + (log 2)^3/6",
        d.valuation(),
        n - LOSS_BUDGET as i64,
        "direct evaluation",
    ));
    let li3_m1 = fam.eval_li(3, &fam.number(-1, 1))?;
    let d = &(&(&(&v.li3_half * &fam.number(2, 1)) + &li3_m1) - &(&cube * &fam.number(1, 3))) - &v.zeta3;
    report.checks.push(Check::at_least(
        "2 Li3(1/2) + Li3(-1) - (log 2)^3/3 = zeta(3)",
        d.valuation(),
        n - LOSS_BUDGET as i64,
        "Li3 three-term identity at z = 1/2",
    ));

    let li4 = v.li4_half.clone().unwrap_or_else(|| fam.number(0, 1));
    let mv = match MotivicValues::new(v.log2.clone(), v.zeta3.clone(), v.li3_half.clone(), li4) {
        Ok(mv) => mv,
        Err(e) => {
            report.checks.push(Check::new(
                "zeta_p(3) nonzero",
                CheckStatus::Fail,
                format!("{e}; the non-vanishing of zeta_p(3) is assumed by the construction"),
            ));
            report.constants = Some(block);
            return Ok(None);
        }
    };
    report.checks.push(Check::new(
        "zeta_p(3) nonzero",
        CheckStatus::Pass,
        format!("valuation {}", v.zeta3.valuation()),
    ));
    let c1_defect = (&mv.c1 - &fam.number(7, 8)).valuation();
    let rec = crate::motivic::synthesis::stable_reconstruction(&mv.c1).map(|r| r.to_string());
    block.c1 = mv.c1.to_digit_string();
    block.c1_minus_7_8_valuation = c1_defect;
    block.c1_reconstruction = rec.clone();
    report.checks.push(Check::at_least("c1 - 7/8", c1_defect, n - 6, "c1 = (Li3(1/2) - (log 2)^3/6)/zeta(3)"));
    let status = if rec.as_deref() == Some("7/8") { CheckStatus::Pass } else { CheckStatus::Fail };
    report.checks.push(Check::new(
        "c1 reconstruction",
        status,
        format!("stable reconstruction: {}", rec.as_deref().unwrap_or("none")),
    ));
    report.constants = Some(block);
    Ok(Some(mv))
}

/// `Σ coeff · X1^a Y1^b Y2^c Y3^d Y4^e` with `X1 = log z`, `Y1 = Li_1`,
/// `Yk = Li_k`.
fn pull_back(fam: &PolylogFamily, terms: &[FTerm]) -> Result<ColemanFunction> {
    let mut base = vec![fam.logz().clone()];
    for k in 1..=4 {
        base.push(fam.li(k)?.clone());
    }
    let mut acc: Option<ColemanFunction> = None;
    for t in terms {
        let mut f: Option<ColemanFunction> = None;
        for (b, &e) in base.iter().zip(&t.exponents) {
            if e == 0 {
                continue;
            }
            let pw = b.pow(e);
            f = Some(match f {
                None => pw,
                Some(g) => &g * &pw,
            });
        }
        let f = match f {
            Some(f) => f.scale(&t.coeff),
            None => fam.logz().scale(&fam.number(0, 1)).add_constant(&t.coeff),
        };
        acc = Some(match acc {
            None => f,
            Some(a) => &a + &f,
        });
    }
    acc.ok_or_else(|| Error::ConstructionCheck("empty relation".into()))
}

/// `F_2` and `F_4` as Coleman functions on `X(Z_p)`.
pub fn relation_functions(fam: &PolylogFamily, fc: &FCoefficients) -> Result<(ColemanFunction, ColemanFunction)> {
    Ok((pull_back(fam, &fc.f2)?, pull_back(fam, &fc.f4)?))
}

fn reconstruct(z: &PadicNumber, digits: u32) -> Option<String> {
    rational_reconstruction(z, digits).ok().map(|r| r.to_string())
}

fn zero_listing(name: &str, sets: &BTreeMap<u64, RootSet>, digits: u32) -> FunctionZeros {
    let mut roots = Vec::new();
    for (a, rs) in sets {
        for r in &rs.roots {
            roots.push(RootEntry {
                residue: *a,
                value: r.root.to_digit_string(),
                multiplicity: r.multiplicity,
                certified: r.certified,
                reconstruction: if r.certified { reconstruct(&r.root, digits) } else { None },
            });
        }
    }
    FunctionZeros {
        name: name.to_string(),
        count: roots.iter().map(|r| r.multiplicity).sum(),
        non_rational: sets.values().map(|r| r.non_rational).sum(),
        roots,
    }
}

fn failed(mut report: VerificationReport, stage: &str, e: Error) -> VerificationReport {
    report.checks.push(Check::new(stage, CheckStatus::Fail, e.to_string()));
    report
}

/// Verifies that the common zeros of `F_2`, `F_4` on `X(Z_p)` are exactly
/// `2, 1/2, -1`.
pub fn cmd_verify_s2(cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let pc = cfg.polylog_config()?;
    let mut report = VerificationReport::new("verify-s2", cfg, &pc);
    let mut sw = Stopwatch::start();
    let fam = match family(cfg, &pc, &mut report) {
        Ok(f) => f,
        Err(e) => return Ok(failed(report, "family construction", e)),
    };
    sw.lap(&mut report, "build");
    if let Err(e) = run_s2(&fam, cfg, &mut report, &mut sw) {
        return Ok(failed(report, "pipeline", e));
    }
    Ok(report)
}

fn run_s2(fam: &PolylogFamily, cfg: &RunConfig, report: &mut VerificationReport, sw: &mut Stopwatch) -> Result<()> {
    let n = cfg.prec as i64;
    let digits = cfg.match_digits;
    let Some(mv) = constants(fam, cfg, report)? else {
        return Ok(());
    };
    let fc: FCoefficients = f_coefficients(&mv)?;
    if let Some(c) = report.constants.as_mut() {
        c.c_p = Some(fc.c_p.to_digit_string());
        c.c2 = Some(fc.f4_logz_li3.to_digit_string());
    }
    report.checks.push(Check::at_least(
        "C^p / c1 matches the synthesized F4",
        fc.c_p_consistency,
        n - LOSS_BUDGET as i64,
        "coefficient of log z Li3 in F4 against C^p/c1",
    ));
    sw.lap(report, "constants");

    let (f2, f4) = relation_functions(fam, &fc)?;
    for (num, den) in expected_points() {
        let b = fam.number(num, den);
        for (name, f) in [("F2", &f2), ("F4", &f4)] {
            report.checks.push(Check::at_least(
                &format!("{name}({}) = 0", ratio_label(num, den)),
                f.eval(&b)?.valuation(),
                n - LOSS_BUDGET as i64,
                "direct evaluation at the S-integral point",
            ));
        }
    }

    let cz = common_zeroes(&[f2.clone(), f4.clone()], digits as i64)?;
    let z2 = f2.zeros()?;
    let z4 = f4.zeros()?;
    report.zero_sets.push(zero_listing("F2", &z2, digits));
    report.zero_sets.push(zero_listing("F4", &z4, digits));
    report.warnings.extend(cz.warnings.iter().cloned());
    let status = if cz.warnings.is_empty() { CheckStatus::Pass } else { CheckStatus::Fail };
    report.checks.push(Check::new("all zeros certified", status, format!("{} uncertified zero(s)", cz.warnings.len())));

    let mut common: Vec<CommonZeroEntry> = cz
        .points
        .iter()
        .map(|z| CommonZeroEntry {
            residue: z.residue,
            value: z.point.to_digit_string(),
            certified: z.certified,
            min_residual: z.min_residual,
            reconstruction: reconstruct(&z.point, digits),
        })
        .collect();
    common.sort_by(|a, b| (a.residue, &a.value).cmp(&(b.residue, &b.value)));
    for (num, den) in expected_points() {
        let label = ratio_label(num, den);
        let hit = common.iter().find(|z| z.reconstruction.as_deref() == Some(label.as_str()));
        let (status, detail) = match hit {
            Some(z) if z.certified => (CheckStatus::Pass, format!("certified, residual valuation {}", z.min_residual)),
            Some(_) => (CheckStatus::Fail, "found but not certified".to_string()),
            None => (CheckStatus::Fail, "missing from the common zeros".to_string()),
        };
        report.checks.push(Check::new(&format!("common zero {label}"), status, detail));
    }
    let expected: Vec<String> = expected_points().iter().map(|(a, b)| ratio_label(*a, *b)).collect();
    let extras: Vec<&CommonZeroEntry> =
        common.iter().filter(|z| !z.reconstruction.as_ref().is_some_and(|r| expected.contains(r))).collect();
    let (status, detail) = if extras.is_empty() {
        (CheckStatus::Pass, format!("{} common zeros, all expected", common.len()))
    } else if extras.iter().all(|z| z.certified) {
        let list: Vec<String> = extras.iter().map(|z| format!("{} (residue {})", z.value, z.residue)).collect();
        (CheckStatus::FailExtra, format!("unexpected certified common zeros: {}", list.join(", ")))
    } else {
        (CheckStatus::Fail, format!("{} unexpected common zeros, some uncertified", extras.len()))
    };
    report.checks.push(Check::new("no extra common zeros", status, detail));
    report.common_zeros = common;
    sw.lap(report, "zeros");

    identity_checks(fam, cfg, report)?;
    sw.lap(report, "identities");
    audit_family(fam, cfg, report)?;
    sw.lap(report, "audit");
    Ok(())
}

fn identity_checks(fam: &PolylogFamily, cfg: &RunConfig, report: &mut VerificationReport) -> Result<()> {
    let threshold = cfg.prec as i64 - LOSS_BUDGET as i64;
    let mut all = functional_equations(fam, cfg.samples, cfg.seed)?;
    all.extend(inversion_identity(fam, cfg.samples, cfg.seed)?);
    for c in all {
        let detail = format!("{} sample points", c.samples);
        report.checks.push(match c.min_valuation {
            Some(v) => Check::at_least(&c.name, v, threshold, detail),
            None => Check::new(&c.name, CheckStatus::NotApplicable, "no admissible residue disk"),
        });
    }
    Ok(())
}

/// The constants block with its checks.
pub fn cmd_constants(cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let pc = cfg.polylog_config()?;
    let mut report = VerificationReport::new("constants", cfg, &pc);
    let mut sw = Stopwatch::start();
    let fam = family(cfg, &pc, &mut report)?;
    sw.lap(&mut report, "build");
    if let Some(mv) = constants(&fam, cfg, &mut report)? {
        if cfg.kmax >= 4 {
            let fc = f_coefficients(&mv)?;
            if let Some(c) = report.constants.as_mut() {
                c.c_p = Some(fc.c_p.to_digit_string());
                c.c2 = Some(fc.f4_logz_li3.to_digit_string());
            }
        }
    }
    sw.lap(&mut report, "constants");
    Ok(report)
}
