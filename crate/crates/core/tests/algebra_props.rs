use chabauty_kim::motivic::{shuffle, Letter, NilpotentMatrix, ShufflePoly, UnipotentMatrix, Word};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn alphabet() -> Vec<Letter> {
    vec![Letter::new("x", 1), Letter::new("y", 1), Letter::new("z", 3)]
}

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0usize..3, 0..=max_len).prop_map(|ix| {
        let a = alphabet();
        Word(ix.into_iter().map(|i| a[i].clone()).collect())
    })
}

fn as_poly(w: &Word) -> ShufflePoly<BigRational> {
    ShufflePoly::word(w.clone(), BigRational::one())
}

fn binom(n: usize, k: usize) -> BigRational {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(r)
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-50i64..50, 1i64..20).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn strictly_upper(n: usize) -> impl Strategy<Value = Vec<Vec<BigRational>>> {
    prop::collection::vec(rational(), n * (n - 1) / 2).prop_map(move |xs| {
        let mut rows = vec![vec![BigRational::zero(); n]; n];
        let mut it = xs.into_iter();
        for i in 0..n {
            for j in i + 1..n {
                rows[i][j] = it.next().unwrap();
            }
        }
        rows
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shuffle_is_commutative(a in word(3), b in word(3)) {
        prop_assert_eq!(shuffle(&a, &b), shuffle(&b, &a));
    }

    #[test]
    fn shuffle_is_associative(a in word(2), b in word(2), c in word(2)) {
        let left = shuffle(&a, &b).shuffle(&as_poly(&c));
        let right = as_poly(&a).shuffle(&shuffle(&b, &c));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn empty_word_is_the_unit(a in word(6)) {
        prop_assert_eq!(shuffle(&Word::empty(), &a), as_poly(&a));
    }

    #[test]
    fn shuffle_is_graded(a in word(3), b in word(3)) {
        let s = shuffle(&a, &b);
        let total: BigRational = s.terms().map(|(_, c)| c.clone()).sum();
        prop_assert_eq!(total, binom(a.len() + b.len(), a.len()));
        prop_assert!(s.terms().all(|(w, _)| w.degree() == a.degree() + b.degree()));
    }

    #[test]
    fn exp_and_log_are_inverse(n in strictly_upper(5)) {
        let nil = NilpotentMatrix::new(n).unwrap();
        let u = nil.exp();
        prop_assert_eq!(u.log(), nil);
        let back = UnipotentMatrix::new(u.rows().clone()).unwrap();
        prop_assert_eq!(back.log().exp(), u);
    }
}
