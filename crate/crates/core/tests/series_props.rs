use chabauty_kim::padic::teichmuller;
use chabauty_kim::{DiskSeries, PadicContext, PadicNumber, TailBound};
use proptest::prelude::*;

const P: u64 = 7;
const PREC: u32 = 30;

/// `Π (z - c - p u_i)` on the disk of `c`.
fn product_of_linears(c: &PadicNumber, us: &[i64]) -> DiskSeries {
    let ctx = c.context();
    let mut f = DiskSeries::constant(c, &PadicNumber::one(ctx), 0);
    for &u in us {
        let root = PadicNumber::from_i64(ctx, P as i64 * u);
        let lin = DiskSeries::new(c.clone(), vec![-root, PadicNumber::one(ctx)], TailBound::exact());
        f = f.arith(&lin, chabauty_kim::series::SeriesOp::Mul).unwrap();
    }
    f
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-10_000i64..10_000, 1..8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn roots_of_split_polynomials_are_found(a in 2u64..P, us in prop::collection::btree_set(0i64..P as i64, 1..5)) {
        let ctx = PadicContext::new(P, PREC).unwrap();
        let c = teichmuller(a, &ctx).unwrap();
        let us: Vec<i64> = us.into_iter().collect();
        let f = product_of_linears(&c, &us);
        let rs = f.find_roots().unwrap();
        prop_assert_eq!(rs.count, us.len());
        prop_assert_eq!(rs.non_rational, 0);
        prop_assert!(rs.all_certified());
        for u in &us {
            let want = &c + &PadicNumber::from_i64(&ctx, P as i64 * u);
            prop_assert!(rs.roots.iter().any(|r| r.root.agrees_with(&want, PREC as i64 - 2)));
        }
    }

    #[test]
    fn strassman_count_matches_located_roots(a in 2u64..P, cs in coeffs()) {
        let ctx = PadicContext::new(P, PREC).unwrap();
        let c = teichmuller(a, &ctx).unwrap();
        let coeffs: Vec<PadicNumber> = cs.iter().map(|x| PadicNumber::from_i64(&ctx, *x)).collect();
        prop_assume!(coeffs.iter().any(|x| !x.is_zero()));
        let f = DiskSeries::new(c, coeffs, TailBound::exact());
        let rs = f.find_roots().unwrap();
        let located: usize = rs.roots.iter().map(|r| r.multiplicity).sum();
        prop_assert_eq!(located + rs.non_rational, f.strassman_count().unwrap());
    }

    #[test]
    fn evaluation_is_a_ring_map(a in 2u64..P, f in coeffs(), g in coeffs(), t in -1000i64..1000) {
        let ctx = PadicContext::new(P, PREC).unwrap();
        let c = teichmuller(a, &ctx).unwrap();
        let mk = |v: &[i64]| DiskSeries::new(c.clone(), v.iter().map(|x| PadicNumber::from_i64(&ctx, *x)).collect(), TailBound::exact());
        let (f, g) = (mk(&f), mk(&g));
        let z = &c + &PadicNumber::from_i64(&ctx, P as i64 * t);
        let prod = f.arith(&g, chabauty_kim::series::SeriesOp::Mul).unwrap().eval(&z).unwrap();
        let sum = f.arith(&g, chabauty_kim::series::SeriesOp::Add).unwrap().eval(&z).unwrap();
        let (fz, gz) = (f.eval(&z).unwrap(), g.eval(&z).unwrap());
        prop_assert!((&prod - &(&fz * &gz)).valuation() >= PREC as i64 - 1);
        prop_assert!((&sum - &(&fz + &gz)).valuation() >= PREC as i64 - 1);
    }

    #[test]
    fn derivative_inverts_integration(a in 2u64..P, f in coeffs()) {
        let ctx = PadicContext::new(P, PREC).unwrap();
        let c = teichmuller(a, &ctx).unwrap();
        let s = DiskSeries::new(c, f.iter().map(|x| PadicNumber::from_i64(&ctx, *x)).collect(), TailBound::exact());
        let back = s.integrate(&PadicNumber::from_i64(&ctx, 3)).derivative();
        for i in 0..f.len() {
            prop_assert!((&back.coeff(i) - &s.coeff(i)).valuation() >= PREC as i64 - 4);
        }
    }
}
