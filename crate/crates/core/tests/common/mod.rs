//! Oracles shared by the integration tests.

#![allow(dead_code)]

use std::sync::Arc;

use chabauty_kim::{PadicContext, PadicNumber};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `B_0 .. B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::one()];
    for m in 1..=n {
        let mut s = BigRational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            s += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// `ζ_p(k)` from the Kubota–Leopoldt value
/// `L_p(k, ω^(1-k)) = 1/(p(k-1)) Σ_{a=1}^{p-1} Σ_j C(1-k, j) B_j p^j a^(1-k-j)`
/// and `L_p(k, ω^(1-k)) = (1 - p^(-k)) ζ_p(k)`.
pub fn zeta_oracle(k: u32, ctx: &Arc<PadicContext>) -> PadicNumber {
    let p = ctx.p();
    let jmax = ctx.prec() as usize + 8;
    let b = bernoulli(jmax);
    let k = k as i64;
    let mut acc = PadicNumber::exact_zero(ctx);
    for a in 1..p as i64 {
        let mut binom = BigRational::one();
        for (j, bj) in b.iter().enumerate() {
            let q = binom.clone() * bj * BigRational::from_integer(BigInt::from(p).pow(j as u32))
                / BigRational::from_integer(BigInt::from(a).pow((k - 1) as u32 + j as u32));
            acc = &acc + &PadicNumber::from_ratio(ctx, &q);
            binom *= BigRational::new(BigInt::from(1 - k - j as i64), BigInt::from(j as i64 + 1));
        }
    }
    let lp = acc.checked_div(&PadicNumber::from_i64(ctx, p as i64 * (k - 1))).unwrap();
    let euler = &PadicNumber::one(ctx) - &PadicNumber::from_i64(ctx, p as i64).pow(-k).unwrap();
    lp.checked_div(&euler).unwrap()
}
