//! The `Spec Z` variant: Teichmüller pairs `ω(a) + ω(b) = 1` and the odd
//! polylogarithms at them.

use super::{audit_family, family, Check, CheckStatus, RunConfig, Stopwatch, VerificationReport, ZCandidate};
use crate::padic::teichmuller;
use crate::polylog::PolylogFamily;
use crate::Result;

/// Computes the locus cut out by `log z`, `log(1-z)` and `Li_k`, odd
/// `3 <= k <= kmax`. Empty is PASS; a nonempty locus is a FINDING.
pub fn cmd_verify_z(cfg: &RunConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let pc = cfg.polylog_config()?;
    let mut report = VerificationReport::new("verify-z", cfg, &pc);
    let mut sw = Stopwatch::start();
    let fam = match family(cfg, &pc, &mut report) {
        Ok(f) => f,
        Err(e) => {
            report.checks.push(Check::new("family construction", CheckStatus::Fail, e.to_string()));
            return Ok(report);
        }
    };
    sw.lap(&mut report, "build");
    if let Err(e) = run_z(&fam, cfg, &mut report) {
        report.checks.push(Check::new("pipeline", CheckStatus::Fail, e.to_string()));
        return Ok(report);
    }
    sw.lap(&mut report, "locus");
    audit_family(&fam, cfg, &mut report)?;
    sw.lap(&mut report, "audit");
    Ok(report)
}

fn run_z(fam: &PolylogFamily, cfg: &RunConfig, report: &mut VerificationReport) -> Result<()> {
    let ctx = fam.context();
    let p = cfg.p;
    let digits = cfg.match_digits as i64;
    let zeta3 = fam.zeta_value(3)?;
    report.checks.push(if zeta3.is_zero() {
        Check::new(
            "zeta_p(3) nonzero",
            CheckStatus::Fail,
            "zeta_p(3) vanishes to the working precision; the construction assumes it does not",
        )
    } else {
        Check::new("zeta_p(3) nonzero", CheckStatus::Pass, format!("valuation {}", zeta3.valuation()))
    });

    let one = fam.number(1, 1);
    let mut roots_ok = true;
    let mut log_ok = true;
    for a in fam.centers().keys().copied() {
        let w = teichmuller(a, ctx)?;
        let b = (p + 1 - a) % p;
        let partner = teichmuller(b, ctx)?;
        if !(&one - &w).agrees_with(&partner, ctx.prec() as i64) {
            continue;
        }
        roots_ok &= (&w.pow((p - 1) as i64)? - &one).valuation() >= digits;
        let log1mz_valuation = fam.eval_log1mz(&w)?.valuation();
        log_ok &= log1mz_valuation >= digits && fam.eval_logz(&w)?.valuation() >= digits;
        let mut li_odd = Vec::new();
        for k in (3..=cfg.kmax).step_by(2) {
            let v = fam.eval_li(k, &w)?;
            li_odd.push((k, v.to_digit_string(), v.valuation()));
        }
        let in_locus = li_odd.iter().all(|(_, _, v)| *v >= digits);
        report.z_candidates.push(ZCandidate {
            residue: a,
            partner: b,
            point: w.to_digit_string(),
            log1mz_valuation,
            li_odd,
            in_locus,
        });
    }
    let n = report.z_candidates.len();
    report.checks.push(Check::new(
        "candidates are roots of unity",
        if roots_ok { CheckStatus::Pass } else { CheckStatus::Fail },
        format!("{n} Teichmüller pair(s), z^(p-1) = 1 checked to {digits} digits"),
    ));
    report.checks.push(Check::new(
        "log z and log(1-z) vanish at candidates",
        if log_ok { CheckStatus::Pass } else { CheckStatus::Fail },
        "evaluated from the constructed family",
    ));
    let locus: Vec<String> =
        report.z_candidates.iter().filter(|c| c.in_locus).map(|c| format!("residue {}", c.residue)).collect();
    report.checks.push(if locus.is_empty() {
        Check::new("Spec Z locus is empty", CheckStatus::Pass, format!("{n} candidate(s), none in the locus"))
    } else {
        Check::new(
            "Spec Z locus is empty",
            CheckStatus::Finding,
            format!("odd polylogarithms vanish at {}", locus.join(", ")),
        )
    });
    Ok(())
}
