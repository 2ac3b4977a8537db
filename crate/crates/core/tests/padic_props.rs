use chabauty_kim::padic::{padic_log, rational_reconstruction, teichmuller};
use chabauty_kim::{PadicContext, PadicNumber};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11, 13])
}

fn unit(p: u64) -> impl Strategy<Value = i64> {
    (1i64..1_000_000).prop_filter("unit", move |n| n % p as i64 != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn log_is_a_homomorphism((p, a, b) in prime().prop_flat_map(|p| (Just(p), unit(p), unit(p)))) {
        let ctx = PadicContext::new(p, 20).unwrap();
        let x = PadicNumber::from_i64(&ctx, a);
        let y = PadicNumber::from_i64(&ctx, b);
        let lhs = padic_log(&(&x * &y)).unwrap();
        let rhs = &padic_log(&x).unwrap() + &padic_log(&y).unwrap();
        prop_assert!((&lhs - &rhs).valuation() >= 19);
    }

    #[test]
    fn reconstruction_round_trip((p, n, d) in prime().prop_flat_map(|p| (Just(p), -5000i64..5000, 1i64..5000))) {
        prop_assume!(d % p as i64 != 0);
        let ctx = PadicContext::new(p, 40).unwrap();
        let x = PadicNumber::from_frac(&ctx, n, d);
        let r = rational_reconstruction(&x, 40).unwrap();
        let g = n.gcd(&d);
        prop_assert_eq!(r.numerator, BigInt::from(n / g));
        prop_assert_eq!(r.denominator, BigInt::from(d / g));
    }

    #[test]
    fn teichmuller_is_a_root_of_unity((p, a) in prime().prop_flat_map(|p| (Just(p), 1..p))) {
        let ctx = PadicContext::new(p, 25).unwrap();
        let w = teichmuller(a, &ctx).unwrap();
        prop_assert_eq!(w.residue(), Some(a));
        let one = PadicNumber::one(&ctx);
        prop_assert!((&w.pow((p - 1) as i64).unwrap() - &one).valuation() >= 25);
        prop_assert!(padic_log(&w).unwrap().valuation() >= 25);
    }

    #[test]
    fn division_inverts_multiplication((p, a, b) in prime().prop_flat_map(|p| (Just(p), -1_000_000i64..1_000_000, unit(p)))) {
        let ctx = PadicContext::new(p, 30).unwrap();
        let x = PadicNumber::from_i64(&ctx, a);
        let y = PadicNumber::from_i64(&ctx, b);
        let q = (&x * &y).checked_div(&y).unwrap();
        prop_assert!((&q - &x).valuation() >= 30);
    }

    #[test]
    fn digit_strings_round_trip((p, n, d) in prime().prop_flat_map(|p| (Just(p), -10_000i64..10_000, 1i64..10_000))) {
        let ctx = PadicContext::new(p, 15).unwrap();
        let x = PadicNumber::from_frac(&ctx, n, d);
        let y = PadicNumber::from_digit_string(&ctx, &x.to_digit_string()).unwrap();
        prop_assert_eq!(x, y);
    }
}
