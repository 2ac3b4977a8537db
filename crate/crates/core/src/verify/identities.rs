//! Polylogarithm identities checked at random points of `X(Z_p)`.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::padic::PadicNumber;
use crate::polylog::PolylogFamily;
use crate::Result;

/// Worst valuation of an identity's defect over the sample points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub samples: usize,
    /// `None` when no admissible point exists.
    pub min_valuation: Option<i64>,
    pub worst_point: Option<String>,
}

/// `n` points `a + p u` with residue `a` uniform among the admissible ones
/// and `u` uniform modulo `p^(W-1)`.
pub fn sample_points(fam: &PolylogFamily, n: usize, seed: u64, admissible: impl Fn(u64) -> bool) -> Vec<PadicNumber> {
    let ctx = fam.context();
    let p = ctx.p();
    let residues: Vec<u64> = fam.config().domain().into_iter().filter(|a| admissible(*a)).collect();
    if residues.is_empty() {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    (0..n)
        .map(|_| {
            let a = residues[rng.gen_range(0..residues.len())];
            let mut x = BigInt::from(0);
            for _ in 1..ctx.prec() {
                x = x * p + rng.gen_range(0..p);
            }
            PadicNumber::from_bigint(ctx, &(x * p + a))
        })
        .collect()
}

fn worst(name: &str, defects: Vec<(PadicNumber, PadicNumber)>) -> IdentityCheck {
    let samples = defects.len();
    let worst = defects.iter().min_by_key(|(_, d)| d.valuation());
    IdentityCheck {
        name: name.to_string(),
        samples,
        min_valuation: worst.map(|(_, d)| d.valuation()),
        worst_point: worst.map(|(z, _)| z.to_digit_string()),
    }
}

/// The four functional equations, in the order returned:
///
/// 1. `Li_2(z) + Li_2(1-z) + log z log(1-z) = 0`
/// 2. `Li_2(z) + Li_2(z/(z-1)) + log(1-z)^2/2 = 0`
/// 3. `Li_3(z) + Li_3(1-z) + Li_3(z/(z-1)) - log(1-z)^3/6 + log z log(1-z)^2/2 = ζ(3)`
/// 4. `Li_3(z^2) - 4 Li_3(z) - 4 Li_3(-z) = 0`, on disks with `z^2`, `-z` in `X(Z_p)`
pub fn functional_equations(fam: &PolylogFamily, n: usize, seed: u64) -> Result<Vec<IdentityCheck>> {
    let p = fam.config().p;
    let one = fam.number(1, 1);
    let half = fam.number(1, 2);
    let sixth = fam.number(1, 6);
    let zeta3 = fam.zeta_value(3)?;
    let pts = sample_points(fam, n, seed, |_| true);

    let mut e1 = Vec::new();
    let mut e2 = Vec::new();
    let mut e3 = Vec::new();
    for z in &pts {
        let w = &one - z;
        let u = z.checked_div(&(z - &one))?;
        let lz = fam.eval_logz(z)?;
        let l1 = fam.eval_log1mz(z)?;
        let d1 = &(&fam.eval_li(2, z)? + &fam.eval_li(2, &w)?) + &(&lz * &l1);
        let d2 = &(&fam.eval_li(2, z)? + &fam.eval_li(2, &u)?) + &(&(&l1 * &l1) * &half);
        let lhs3 = &(&(&fam.eval_li(3, z)? + &fam.eval_li(3, &w)?) + &fam.eval_li(3, &u)?) - &(&l1.pow(3)? * &sixth);
        let lhs3 = &lhs3 + &(&(&lz * &(&l1 * &l1)) * &half);
        e1.push((z.clone(), d1));
        e2.push((z.clone(), d2));
        e3.push((z.clone(), &lhs3 - &zeta3));
    }

    let four = fam.number(4, 1);
    let pts4 = sample_points(fam, n, seed.wrapping_add(1), |a| a != p - 1);
    let mut e4 = Vec::new();
    for z in &pts4 {
        let d = &(&fam.eval_li(3, &(z * z))? - &(&four * &fam.eval_li(3, z)?)) - &(&four * &fam.eval_li(3, &-z)?);
        e4.push((z.clone(), d));
    }
    Ok(vec![
        worst("Li2 reflection", e1),
        worst("Li2 Landen", e2),
        worst("Li3 three-term identity", e3),
        worst("Li3 duplication", e4),
    ])
}

/// `Li_k(z) + (-1)^k Li_k(1/z) + log(z)^k / k! = 0` for `1 <= k <= kmax`.
pub fn inversion_identity(fam: &PolylogFamily, n: usize, seed: u64) -> Result<Vec<IdentityCheck>> {
    let pts = sample_points(fam, n, seed.wrapping_add(2), |_| true);
    let mut out = Vec::new();
    let mut fact = 1i64;
    for k in 1..=fam.config().kmax {
        fact *= k as i64;
        let inv_fact = fam.number(1, fact);
        let mut defects = Vec::new();
        for z in &pts {
            let zi = z.inverse()?;
            let a = fam.eval_li(k, z)?;
            let b = fam.eval_li(k, &zi)?;
            let s = if k % 2 == 0 { &a + &b } else { &a - &b };
            let d = &s + &(&fam.eval_logz(z)?.pow(k as i64)? * &inv_fact);
            defects.push((z.clone(), d));
        }
        out.push(worst(&format!("inversion identity k={k}"), defects));
    }
    Ok(out)
}
