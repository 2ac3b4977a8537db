//! Text and JSON rendering of [`VerificationReport`].

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{expected_points, CheckStatus, SweepReport, VerificationReport};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Text,
}

pub fn render(report: &VerificationReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => serde_json::to_string_pretty(report).map_err(|e| Error::Parse(e.to_string())),
        ReportFormat::Text => Ok(render_text(report)),
    }
}

fn render_text(r: &VerificationReport) -> String {
    let mut s = String::new();
    let c = &r.config;
    let _ = writeln!(s, "kim-verify {}", r.command);
    let _ = writeln!(
        s,
        "config: p={} N={} kmax={} site={} match={} N_work={} trunc={} seed={:#x} samples={}",
        c.p,
        c.prec,
        c.kmax,
        c.site.name(),
        c.match_digits,
        c.work_prec,
        c.trunc,
        c.seed,
        c.samples
    );
    if let Some(k) = &r.constants {
        let _ = writeln!(s, "log 2        = {}", k.log2);
        for (n, z) in &k.zeta {
            let _ = writeln!(s, "zeta_p({n})    = {z}");
        }
        let _ = writeln!(s, "Li2(1/2)     = {}", k.li2_half);
        let _ = writeln!(s, "Li3(1/2)     = {}", k.li3_half);
        if let Some(l) = &k.li4_half {
            let _ = writeln!(s, "Li4(1/2)     = {l}");
        }
        if !k.c1.is_empty() {
            let _ = writeln!(
                s,
                "c1           = {} (reconstruction {}, v(c1 - 7/8) = {})",
                k.c1,
                k.c1_reconstruction.as_deref().unwrap_or("none"),
                k.c1_minus_7_8_valuation
            );
        }
        if let Some(cp) = &k.c_p {
            let _ = writeln!(s, "C^p          = {cp}");
        }
        if let Some(c2) = &k.c2 {
            let _ = writeln!(s, "C^p/c1       = {c2}");
        }
    }
    for z in &r.zero_sets {
        let _ = writeln!(s, "{}: {} zero(s) in X(Z_p), {} outside Q_p", z.name, z.count, z.non_rational);
    }
    if r.command == "verify-s2" {
        let _ = writeln!(s, "common zeros: {}", r.common_zeros.len());
        let expected: Vec<String> =
            expected_points().iter().map(|(a, b)| if *b == 1 { a.to_string() } else { format!("{a}/{b}") }).collect();
        let mut order: Vec<usize> = Vec::new();
        for e in &expected {
            order.extend(
                (0..r.common_zeros.len()).filter(|&i| r.common_zeros[i].reconstruction.as_deref() == Some(e.as_str())),
            );
        }
        let rest: Vec<usize> = (0..r.common_zeros.len()).filter(|i| !order.contains(i)).collect();
        order.extend(rest);
        for i in order {
            let z = &r.common_zeros[i];
            let _ = writeln!(
                s,
                "  {:>6}  residue {:>3}  {}  {}",
                z.reconstruction.as_deref().unwrap_or("?"),
                z.residue,
                if z.certified { "certified" } else { "UNCERTIFIED" },
                z.value
            );
        }
    }
    for z in &r.z_candidates {
        let lis: Vec<String> = z.li_odd.iter().map(|(k, _, v)| format!("v(Li{k})={v}")).collect();
        let _ = writeln!(
            s,
            "candidate residue {} (1 - z has residue {}): {}{}",
            z.residue,
            z.partner,
            lis.join(" "),
            if z.in_locus { "  IN LOCUS" } else { "" }
        );
    }
    for ch in &r.checks {
        let num = match (ch.observed, ch.threshold) {
            (Some(o), Some(t)) => format!(" [{o} >= {t}]"),
            _ => String::new(),
        };
        let _ = writeln!(s, "{:<10} {}{}: {}", ch.status.label(), ch.name, num, ch.detail);
    }
    for w in &r.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    if !r.timing_ms.is_empty() {
        let t: Vec<String> = r.timing_ms.iter().map(|(k, v)| format!("{k} {v}ms")).collect();
        let _ = writeln!(s, "timing: {}", t.join(", "));
    }
    let _ = writeln!(s, "overall: {}", r.overall().label());
    s
}

/// Writes the rendered report to `path`, or stdout when `None`.
pub fn write_report(report: &VerificationReport, path: Option<&Path>, format: ReportFormat) -> Result<()> {
    write_text(&render(report, format)?, path)
}

/// Reads a JSON report, rejecting other schema versions.
pub fn read_report(path: &Path) -> Result<VerificationReport> {
    let io = |e: std::io::Error| Error::Io { path: path.display().to_string(), message: e.to_string() };
    let text = fs::read_to_string(path).map_err(io)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let found = value
        .get("schema_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::Parse("missing schema_version".into()))? as u32;
    if found != SCHEMA_VERSION {
        return Err(Error::SchemaVersion { expected: SCHEMA_VERSION, found });
    }
    serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))
}

/// Summary table (text) or the full sweep document (JSON).
pub fn render_sweep(sweep: &SweepReport, format: ReportFormat) -> Result<String> {
    if format == ReportFormat::Json {
        return serde_json::to_string_pretty(sweep).map_err(|e| Error::Parse(e.to_string()));
    }
    let mut s = String::new();
    let _ = writeln!(s, "{:>5}  {:<10} {:<6} {:<24} {:>9}", "p", "status", "c1", "common zeros", "time");
    for row in &sweep.rows {
        let zeros: Vec<&str> = row.common_zeros.iter().map(|z| z.as_deref().unwrap_or("?")).collect();
        let _ = writeln!(
            s,
            "{:>5}  {:<10} {:<6} {:<24} {:>7}ms{}",
            row.p,
            row.status.label(),
            row.c1_reconstruction.as_deref().unwrap_or("-"),
            format!("{{{}}}", zeros.join(", ")),
            row.elapsed_ms,
            row.error.as_ref().map(|e| format!("  error: {e}")).unwrap_or_default()
        );
    }
    for r in &sweep.reports {
        for ch in r.checks.iter().filter(|c| c.status != CheckStatus::Pass && c.status != CheckStatus::NotApplicable) {
            let _ = writeln!(s, "p={}: {} {}: {}", r.config.p, ch.status.label(), ch.name, ch.detail);
        }
    }
    let _ = writeln!(s, "overall: {}", sweep.overall().label());
    Ok(s)
}

/// Writes rendered text to `path`, or stdout when `None`.
pub fn write_text(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io { path: p.display().to_string(), message: e.to_string() }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
