mod common;

use chabauty_kim::motivic::matrix::li3_word_values;
use chabauty_kim::motivic::synthesis::expand_li3;
use chabauty_kim::verify::sample_points;
use chabauty_kim::{PolylogConfig, PolylogFamily};

fn family(p: u64, n: u32) -> PolylogFamily {
    PolylogFamily::build(&PolylogConfig::new(p, n, 4).unwrap()).unwrap()
}

#[test]
fn zeta_values_match_the_kubota_leopoldt_oracle() {
    for p in [5, 7, 13] {
        let fam = family(p, 20);
        for k in 2..=4 {
            let oracle = common::zeta_oracle(k, fam.context());
            let v = (&oracle - &fam.zeta_value(k).unwrap()).valuation();
            assert!(v >= 18, "p={p} k={k}: agreement to {v} digits");
        }
    }
}

#[test]
fn li1_is_minus_log_one_minus_z() {
    let fam = family(11, 20);
    for z in sample_points(&fam, 10, 3, |_| true) {
        let d = &fam.eval_li(1, &z).unwrap() + &fam.eval_log1mz(&z).unwrap();
        assert!(d.valuation() >= 18);
    }
}

#[test]
fn li3_word_values_against_the_family() {
    let fam = family(7, 20);
    for z in sample_points(&fam, 10, 11, |_| true) {
        let lb = fam.eval_logz(&z).unwrap();
        let l1b = fam.eval_log1mz(&z).unwrap();
        let li2 = fam.eval_li(2, &z).unwrap();
        let li3 = fam.eval_li(3, &z).unwrap();
        let w = li3_word_values(&lb, &l1b, &li2, &li3);
        let lb2 = &lb * &lb;
        assert!((&w.v1v1v1 + &(&lb2 * &l1b)).valuation() >= 16);
        let want = &(&(&lb2 * &l1b) * &fam.number(1, 2)) + &(&lb * &li2);
        assert!((&w.v1v2 - &want).valuation() >= 16);
        assert!(w.v2v1.valuation() >= 16);
    }
}

#[test]
fn li3_expansions_at_integral_points() {
    let fam = family(11, 30);
    let log2 = fam.log_of(2, 1).unwrap();
    let zeta3 = fam.zeta_value(3).unwrap();
    for (num, den, s, t) in [(1, 2, "7/8", "1/6"), (-1, 1, "-3/4", "0")] {
        let b = fam.number(num, den);
        let e = expand_li3(
            &fam.eval_logz(&b).unwrap(),
            &fam.eval_log1mz(&b).unwrap(),
            &fam.eval_li(3, &b).unwrap(),
            &log2,
            &zeta3,
        )
        .unwrap();
        assert_eq!(e.s_rational.map(|r| r.to_string()).as_deref(), Some(s), "b = {num}/{den}");
        assert_eq!(e.t_rational.map(|r| r.to_string()).as_deref(), Some(t), "b = {num}/{den}");
    }
}
