use chabauty_kim::motivic::{f_coefficients, MotivicValues};
use chabauty_kim::verify::{
    cmd_constants, cmd_sweep, cmd_verify_s2, cmd_verify_z, read_report, relation_functions, render, write_report,
    CheckStatus, ReportFormat, RunConfig, Site,
};
use chabauty_kim::{Error, PadicNumber, PolylogConfig, PolylogFamily};

fn small(p: u64) -> RunConfig {
    RunConfig { match_digits: 12, samples: 8, ..RunConfig::new(p, 24) }
}

#[test]
fn reports_are_deterministic() {
    let cfg = small(5);
    let a = cmd_verify_s2(&cfg).unwrap();
    let b = cmd_verify_s2(&cfg).unwrap();
    assert_eq!(a.payload(), b.payload());
    assert_eq!(a.overall(), CheckStatus::Pass, "{}", render(&a, ReportFormat::Text).unwrap());
}

#[test]
fn warm_and_cold_cache_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig { cache_dir: Some(dir.path().to_path_buf()), ..small(7) };
    let cold = cmd_verify_s2(&cfg).unwrap();
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let warm = cmd_verify_s2(&cfg).unwrap();
    assert_eq!(cold.payload(), warm.payload());
    let uncached = cmd_verify_s2(&small(7)).unwrap();
    assert_eq!(uncached.payload(), warm.payload());
}

#[test]
fn text_lists_the_integral_points_in_fixed_order() {
    let r = cmd_verify_s2(&small(7)).unwrap();
    let text = render(&r, ReportFormat::Text).unwrap();
    let pos = |s: &str| text.find(&format!("  {s}  residue")).unwrap_or_else(|| panic!("{s} missing:\n{text}"));
    assert!(pos("     2") < pos("   1/2"));
    assert!(pos("   1/2") < pos("    -1"));
    assert!(text.trim_end().ends_with("overall: PASS"));
}

#[test]
fn json_round_trip_and_schema_check() {
    let r = cmd_constants(&small(5)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    write_report(&r, Some(&path), ReportFormat::Json).unwrap();
    assert_eq!(read_report(&path).unwrap(), r);

    let text = std::fs::read_to_string(&path).unwrap().replacen("\"schema_version\": 1", "\"schema_version\": 99", 1);
    std::fs::write(&path, text).unwrap();
    assert_eq!(read_report(&path).unwrap_err(), Error::SchemaVersion { expected: 1, found: 99 });

    let missing = dir.path().join("no/such/dir/report.json");
    match write_report(&r, Some(&missing), ReportFormat::Json).unwrap_err() {
        Error::Io { path, .. } => assert!(path.contains("no/such/dir")),
        e => panic!("unexpected {e:?}"),
    }
}

#[test]
fn sweep_matches_single_runs() {
    let cfg = small(11);
    let single = cmd_verify_s2(&cfg).unwrap();
    let sweep = cmd_sweep(&[11], &cfg);
    assert_eq!(sweep.rows.len(), 1);
    assert_eq!(sweep.reports[0].payload(), single.payload());
    assert_eq!(sweep.rows[0].common_zeros, single.common_zero_rationals());

    let empty = cmd_sweep(&[], &cfg);
    assert!(empty.rows.is_empty() && empty.overall() == CheckStatus::Pass);
}

#[test]
fn sweep_isolates_failing_primes() {
    let sweep = cmd_sweep(&[9, 5], &small(5));
    assert_eq!(sweep.rows[0].status, CheckStatus::Fail);
    assert!(sweep.rows[0].error.as_deref().unwrap().contains("not an odd prime"));
    assert_eq!(sweep.rows[1].status, CheckStatus::Pass);
}

#[test]
fn common_zeros_are_zeros_of_both_functions() {
    let cfg = small(13);
    let r = cmd_verify_s2(&cfg).unwrap();
    let fam = PolylogFamily::build(&PolylogConfig::new(13, 24, 4).unwrap()).unwrap();
    let half = fam.number(1, 2);
    let li = |k| fam.eval_li(k, &half).unwrap();
    let mv = MotivicValues::new(fam.log_of(2, 1).unwrap(), fam.zeta_value(3).unwrap(), li(3), li(4)).unwrap();
    let (f2, f4) = relation_functions(&fam, &f_coefficients(&mv).unwrap()).unwrap();
    assert_eq!(r.common_zeros.len(), 3);
    for z in &r.common_zeros {
        let pt = PadicNumber::from_digit_string(fam.context(), &z.value).unwrap();
        assert!(f2.eval(&pt).unwrap().valuation() >= cfg.match_digits as i64);
        assert!(f4.eval(&pt).unwrap().valuation() >= cfg.match_digits as i64);
    }
    for (b, _) in [(2, 1), (1, 2), (-1, 1)].map(|(n, d)| (fam.number(n, d), ())) {
        assert!(f4.eval(&b).unwrap().valuation() >= 24 - 8);
    }
}

#[test]
fn configuration_errors() {
    assert_eq!(cmd_verify_s2(&small(9)).unwrap_err(), Error::InvalidPrime(9));
    assert!(matches!(cmd_verify_s2(&RunConfig { kmax: 3, ..small(5) }), Err(Error::Config(_))));
    assert!(matches!(cmd_verify_s2(&RunConfig { match_digits: 20, ..small(5) }), Err(Error::Config(_))));
    assert!(matches!(cmd_verify_z(&RunConfig { site: Site::Z, kmax: 2, ..small(5) }), Err(Error::Config(_))));
}

#[test]
fn spec_z_candidates_at_seven() {
    let r = cmd_verify_z(&RunConfig { site: Site::Z, kmax: 3, ..small(7) }).unwrap();
    let pairs: Vec<(u64, u64)> = r.z_candidates.iter().map(|c| (c.residue, c.partner)).collect();
    assert_eq!(pairs, vec![(3, 5), (5, 3)]);
    assert!(r.z_candidates.iter().all(|c| !c.in_locus && c.li_odd.len() == 1));
    assert_eq!(r.overall(), CheckStatus::Pass);
}
