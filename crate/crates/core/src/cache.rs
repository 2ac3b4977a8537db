//! On-disk cache of polylogarithm families.
//!
//! One JSON document per parameter set holds every disk expansion, the
//! Mittag-Leffler coefficients and the zeta table, all p-adic values as
//! lossless digit strings.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coleman::ColemanFunction;
use crate::padic::{teichmuller, PadicContext, PadicNumber};
use crate::polylog::{GFunction, PolylogConfig, PolylogFamily};
use crate::series::{DiskSeries, TailBound};
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "KIM_VERIFY_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct SeriesDoc {
    coeffs: Vec<String>,
    tail: TailBound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct DiskDoc {
    residue: u64,
    logz: SeriesDoc,
    log1mz: SeriesDoc,
    li: Vec<SeriesDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct GDoc {
    k: u32,
    s_coeffs: Vec<String>,
    fit_terms: usize,
    fit_residual: i64,
    held_out_residual: i64,
    held_out_end: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct CacheDoc {
    format_version: u32,
    p: u64,
    prec: u32,
    #[serde(rename = "N_work")]
    n_work: u32,
    kmax: u32,
    trunc: usize,
    disks: Vec<DiskDoc>,
    ml: Vec<GDoc>,
    zeta: BTreeMap<u32, String>,
}

/// How a family was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheOutcome {
    Disabled,
    Hit(PathBuf),
    /// Built and written; carries a note when an unusable file was replaced.
    Written(PathBuf, Option<String>),
}

fn series_doc(s: &DiskSeries) -> SeriesDoc {
    SeriesDoc { coeffs: s.coeffs().iter().map(PadicNumber::to_digit_string).collect(), tail: s.tail() }
}

fn series_from(doc: &SeriesDoc, center: &PadicNumber, ctx: &Arc<PadicContext>) -> Result<DiskSeries> {
    let coeffs = doc.coeffs.iter().map(|c| PadicNumber::from_digit_string(ctx, c)).collect::<Result<_>>()?;
    Ok(DiskSeries::new(center.clone(), coeffs, doc.tail))
}

fn to_doc(f: &PolylogFamily) -> Result<CacheDoc> {
    let cfg = f.config();
    let mut disks = Vec::new();
    for &a in f.centers().keys() {
        let piece = |c: &ColemanFunction| series_doc(c.piece(a).expect("domain disk"));
        let li = (1..=cfg.kmax).map(|k| f.li(k).map(piece)).collect::<Result<_>>()?;
        disks.push(DiskDoc { residue: a, logz: piece(f.logz()), log1mz: piece(f.log1mz()), li });
    }
    let ml = (1..=cfg.kmax)
        .map(|k| {
            let g = f.g(k)?;
            Ok(GDoc {
                k,
                s_coeffs: g.s_coeffs().iter().map(PadicNumber::to_digit_string).collect(),
                fit_terms: g.fit_terms,
                fit_residual: g.fit_residual,
                held_out_residual: g.held_out_residual,
                held_out_end: g.held_out_end,
            })
        })
        .collect::<Result<_>>()?;
    let zeta = f.zeta_table().iter().map(|(k, v)| (*k, v.to_digit_string())).collect();
    Ok(CacheDoc {
        format_version: FORMAT_VERSION,
        p: cfg.p,
        prec: cfg.prec,
        n_work: cfg.work_prec,
        kmax: cfg.kmax,
        trunc: cfg.trunc,
        disks,
        ml,
        zeta,
    })
}

fn from_doc(doc: &CacheDoc, cfg: &PolylogConfig) -> Result<PolylogFamily> {
    if doc.format_version != FORMAT_VERSION {
        return Err(Error::SchemaVersion { expected: FORMAT_VERSION, found: doc.format_version });
    }
    if (doc.p, doc.prec, doc.n_work, doc.kmax, doc.trunc) != (cfg.p, cfg.prec, cfg.work_prec, cfg.kmax, cfg.trunc) {
        return Err(Error::Config("cached family has different parameters".into()));
    }
    let ctx = PadicContext::new(cfg.p, cfg.work_prec)?;
    let domain = cfg.domain();
    if doc.disks.iter().map(|d| d.residue).collect::<Vec<_>>() != domain {
        return Err(Error::Config("cached family has a different domain".into()));
    }
    let mut logz = BTreeMap::new();
    let mut log1mz = BTreeMap::new();
    let mut li: Vec<BTreeMap<u64, DiskSeries>> = vec![BTreeMap::new(); cfg.kmax as usize];
    for d in &doc.disks {
        let c = teichmuller(d.residue, &ctx)?;
        logz.insert(d.residue, series_from(&d.logz, &c, &ctx)?);
        log1mz.insert(d.residue, series_from(&d.log1mz, &c, &ctx)?);
        if d.li.len() != cfg.kmax as usize {
            return Err(Error::Config("cached family has the wrong number of weights".into()));
        }
        for (k, s) in d.li.iter().enumerate() {
            li[k].insert(d.residue, series_from(s, &c, &ctx)?);
        }
    }
    let g = doc
        .ml
        .iter()
        .map(|g| {
            let coeffs: Vec<PadicNumber> =
                g.s_coeffs.iter().map(|c| PadicNumber::from_digit_string(&ctx, c)).collect::<Result<_>>()?;
            GFunction::from_s_coeffs(
                g.k,
                &ctx,
                &coeffs,
                g.fit_terms,
                g.fit_residual,
                g.held_out_residual,
                g.held_out_end,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let zeta =
        doc.zeta.iter().map(|(k, v)| Ok((*k, PadicNumber::from_digit_string(&ctx, v)?))).collect::<Result<_>>()?;
    let li = li.into_iter().map(|m| ColemanFunction::new(cfg.p, m)).collect();
    PolylogFamily::from_parts(
        cfg.clone(),
        ctx,
        ColemanFunction::new(cfg.p, logz),
        ColemanFunction::new(cfg.p, log1mz),
        li,
        g,
        zeta,
    )
}

/// Cache file for a configuration inside `dir`.
pub fn cache_file(dir: &Path, cfg: &PolylogConfig) -> PathBuf {
    dir.join(format!("polylog-p{}-N{}-W{}-k{}-T{}.json", cfg.p, cfg.prec, cfg.work_prec, cfg.kmax, cfg.trunc))
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io { path: path.display().to_string(), message: e.to_string() }
}

pub fn save(f: &PolylogFamily, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
    }
    let doc = to_doc(f)?;
    let text = serde_json::to_string(&doc).map_err(|e| io_err(path, e))?;
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, text).map_err(|e| io_err(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))
}

pub fn load(path: &Path, cfg: &PolylogConfig) -> Result<PolylogFamily> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let found = value.get("format_version").and_then(serde_json::Value::as_u64).unwrap_or(0) as u32;
    if found != FORMAT_VERSION {
        return Err(Error::SchemaVersion { expected: FORMAT_VERSION, found });
    }
    let doc: CacheDoc = serde_json::from_value(value).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    from_doc(&doc, cfg)
}

/// Loads the family from `dir` if present and valid, otherwise builds and
/// stores it.
pub fn load_or_build(cfg: &PolylogConfig, dir: Option<&Path>) -> Result<(PolylogFamily, CacheOutcome)> {
    let Some(dir) = dir else {
        return Ok((PolylogFamily::build(cfg)?, CacheOutcome::Disabled));
    };
    let path = cache_file(dir, cfg);
    let mut note = None;
    if path.exists() {
        match load(&path, cfg) {
            Ok(f) => return Ok((f, CacheOutcome::Hit(path))),
            Err(e) => note = Some(format!("replaced unusable cache file: {e}")),
        }
    }
    let f = PolylogFamily::build(cfg)?;
    save(&f, &path)?;
    Ok((f, CacheOutcome::Written(path, note)))
}

/// The directory from [`CACHE_DIR_ENV`], if set and nonempty.
pub fn default_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_lossless() {
        let cfg = PolylogConfig::new(5, 8, 3).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let (cold, outcome) = load_or_build(&cfg, Some(dir.path())).unwrap();
        assert!(matches!(outcome, CacheOutcome::Written(_, None)));
        let (warm, outcome) = load_or_build(&cfg, Some(dir.path())).unwrap();
        assert!(matches!(outcome, CacheOutcome::Hit(_)));
        assert_eq!(to_doc(&cold).unwrap(), to_doc(&warm).unwrap());
        let z = warm.number(3, 7);
        assert_eq!(cold.eval_li(3, &z).unwrap(), warm.eval_li(3, &z).unwrap());
    }

    #[test]
    fn version_mismatch_is_reported_and_replaced() {
        let cfg = PolylogConfig::new(5, 8, 2).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = cache_file(dir.path(), &cfg);
        fs::write(&path, r#"{"format_version": 99}"#).unwrap();
        assert_eq!(load(&path, &cfg).unwrap_err(), Error::SchemaVersion { expected: FORMAT_VERSION, found: 99 });
        let (_, outcome) = load_or_build(&cfg, Some(dir.path())).unwrap();
        assert!(matches!(outcome, CacheOutcome::Written(_, Some(_))));
    }
}
