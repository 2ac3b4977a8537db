//! Capped-precision arithmetic in `Q_p`.
//!
//! A [`PadicNumber`] is either an exact zero, a zero known only modulo
//! `p^M`, or `p^v * u` with `u` a unit known modulo `p^(M - v)`. Every number
//! carries its absolute precision `M`; arithmetic never reports more digits
//! than the ultrametric rules justify.

use std::cmp::min;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// The prime and working relative precision shared by a family of numbers.
#[derive(Debug)]
pub struct PadicContext {
    p: u64,
    prec: u32,
    powers: Vec<BigUint>,
}

impl PadicContext {
    pub fn new(p: u64, prec: u32) -> Result<Arc<Self>> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if prec == 0 {
            return Err(Error::InvalidPrecision);
        }
        let pb = BigUint::from(p);
        let mut powers = Vec::with_capacity(prec as usize + 1);
        powers.push(BigUint::one());
        for i in 0..prec as usize {
            let next = &powers[i] * &pb;
            powers.push(next);
        }
        Ok(Arc::new(PadicContext { p, prec, powers }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Working relative precision in p-adic digits.
    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// `p^e` for `0 <= e <= prec`.
    pub fn pow_p(&self, e: u32) -> &BigUint {
        &self.powers[e as usize]
    }

    fn same_as(&self, other: &PadicContext) -> bool {
        self.p == other.p && self.prec == other.prec
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// p-adic valuation of a nonzero integer together with its prime-to-p part.
fn split_p(x: &BigUint, p: u64) -> (u32, BigUint) {
    let mut x = x.clone();
    let mut k = 0;
    loop {
        let (q, r) = x.div_rem(&BigUint::from(p));
        if !r.is_zero() {
            return (k, x);
        }
        x = q;
        k += 1;
    }
}

pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0);
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    ExactZero,
    /// Zero modulo `p^abs`.
    Zero {
        abs: i64,
    },
    /// `p^val * unit`, `unit` a unit known modulo `p^rel`.
    Value {
        val: i64,
        rel: u32,
        unit: BigUint,
    },
}

/// Result of comparing a number against zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroTest {
    Exact,
    /// Indistinguishable from zero; known to vanish modulo `p^M`.
    ToPrecision(i64),
    NonZero {
        valuation: i64,
    },
}

#[derive(Clone)]
pub struct PadicNumber {
    ctx: Arc<PadicContext>,
    repr: Repr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl PadicNumber {
    pub fn exact_zero(ctx: &Arc<PadicContext>) -> Self {
        PadicNumber { ctx: ctx.clone(), repr: Repr::ExactZero }
    }

    /// Zero known modulo `p^abs`.
    pub fn zero_mod(ctx: &Arc<PadicContext>, abs: i64) -> Self {
        PadicNumber { ctx: ctx.clone(), repr: Repr::Zero { abs } }
    }

    pub fn one(ctx: &Arc<PadicContext>) -> Self {
        Self::from_i64(ctx, 1)
    }

    pub fn from_i64(ctx: &Arc<PadicContext>, n: i64) -> Self {
        Self::from_bigint(ctx, &BigInt::from(n))
    }

    pub fn from_bigint(ctx: &Arc<PadicContext>, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::exact_zero(ctx);
        }
        let (k, u) = split_p(n.magnitude(), ctx.p);
        let rel = ctx.prec;
        let m = ctx.pow_p(rel);
        let mut unit = u % m;
        if n.sign() == Sign::Minus {
            unit = m - unit;
        }
        PadicNumber { ctx: ctx.clone(), repr: Repr::Value { val: k as i64, rel, unit } }
    }

    pub fn from_frac(ctx: &Arc<PadicContext>, num: i64, den: i64) -> Self {
        Self::from_ratio(ctx, &BigRational::new(num.into(), den.into()))
    }

    /// Embeds a rational at relative precision `N`.
    pub fn from_ratio(ctx: &Arc<PadicContext>, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::exact_zero(ctx);
        }
        let n = Self::from_bigint(ctx, q.numer());
        let d = Self::from_bigint(ctx, q.denom());
        &n / &d
    }

    /// Builds `p^val * unit` where `unit` is taken modulo `p^rel`.
    pub fn from_parts(ctx: &Arc<PadicContext>, val: i64, unit: &BigUint, rel: u32) -> Self {
        let rel = min(rel, ctx.prec);
        let u = unit % ctx.pow_p(rel);
        if u.is_zero() {
            return Self::zero_mod(ctx, val + rel as i64);
        }
        let (k, u) = split_p(&u, ctx.p);
        let rel = rel - k;
        PadicNumber { ctx: ctx.clone(), repr: Repr::Value { val: val + k as i64, rel, unit: u } }
    }

    /// Builds the number represented by the integer residue `x mod p^abs`.
    pub fn from_residue(ctx: &Arc<PadicContext>, x: &BigUint, abs: u32) -> Self {
        let abs = min(abs, ctx.prec);
        Self::from_parts(ctx, 0, x, abs)
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p
    }

    /// Valuation, or a lower bound for it when the number is indistinguishable
    /// from zero (`i64::MAX` for an exact zero).
    pub fn valuation(&self) -> i64 {
        match &self.repr {
            Repr::ExactZero => i64::MAX,
            Repr::Zero { abs } => *abs,
            Repr::Value { val, .. } => *val,
        }
    }

    /// Absolute precision; `None` for an exact zero.
    pub fn abs_prec(&self) -> Option<i64> {
        match &self.repr {
            Repr::ExactZero => None,
            Repr::Zero { abs } => Some(*abs),
            Repr::Value { val, rel, .. } => Some(val + *rel as i64),
        }
    }

    /// Relative precision of a nonzero value.
    pub fn rel_prec(&self) -> Option<u32> {
        match &self.repr {
            Repr::Value { rel, .. } => Some(*rel),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        !matches!(self.repr, Repr::Value { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::ExactZero)
    }

    pub fn zero_test(&self) -> ZeroTest {
        match &self.repr {
            Repr::ExactZero => ZeroTest::Exact,
            Repr::Zero { abs } => ZeroTest::ToPrecision(*abs),
            Repr::Value { val, .. } => ZeroTest::NonZero { valuation: *val },
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.repr, Repr::Value { val: 0, .. })
    }

    /// Reduction modulo `p` of a number of non-negative valuation.
    pub fn residue(&self) -> Option<u64> {
        match &self.repr {
            Repr::ExactZero => Some(0),
            Repr::Zero { abs } => (*abs >= 1).then_some(0),
            Repr::Value { val, unit, .. } => match val.cmp(&0) {
                std::cmp::Ordering::Less => None,
                std::cmp::Ordering::Greater => Some(0),
                std::cmp::Ordering::Equal => (unit % self.ctx.p).to_u64(),
            },
        }
    }

    /// Unit part and its relative precision.
    pub fn unit_part(&self) -> Option<(&BigUint, u32)> {
        match &self.repr {
            Repr::Value { unit, rel, .. } => Some((unit, *rel)),
            _ => None,
        }
    }

    /// The integer in `[0, p^M)` congruent to `self` modulo `p^M`, for
    /// numbers of non-negative valuation known to absolute precision `>= M`.
    pub fn lift_mod(&self, m: u32) -> Option<BigUint> {
        if m > self.ctx.prec {
            return None;
        }
        let modulus = self.ctx.pow_p(m);
        match &self.repr {
            Repr::ExactZero => Some(BigUint::zero()),
            Repr::Zero { abs } => (*abs >= m as i64).then(BigUint::zero),
            Repr::Value { val, rel, unit } => {
                if *val < 0 || val + (*rel as i64) < m as i64 {
                    return None;
                }
                if *val >= m as i64 {
                    return Some(BigUint::zero());
                }
                Some((unit * self.ctx.pow_p(*val as u32)) % modulus)
            }
        }
    }

    /// Caps the absolute precision at `abs`.
    pub fn with_abs_prec(&self, abs: i64) -> Self {
        match &self.repr {
            Repr::ExactZero => Self::zero_mod(&self.ctx, abs),
            Repr::Zero { abs: a } => Self::zero_mod(&self.ctx, min(*a, abs)),
            Repr::Value { val, rel, unit } => {
                if abs <= *val {
                    Self::zero_mod(&self.ctx, abs)
                } else if abs >= val + *rel as i64 {
                    self.clone()
                } else {
                    let r = (abs - val) as u32;
                    PadicNumber {
                        ctx: self.ctx.clone(),
                        repr: Repr::Value { val: *val, rel: r, unit: unit % self.ctx.pow_p(r) },
                    }
                }
            }
        }
    }

    /// `true` when `self - other` vanishes to at least `digits` digits.
    pub fn agrees_with(&self, other: &PadicNumber, digits: i64) -> bool {
        (self - other).valuation() >= digits
    }

    fn check_ctx(&self, other: &PadicNumber) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx.same_as(&other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(self.ctx.p, self.ctx.prec, other.ctx.p, other.ctx.prec))
        }
    }

    pub fn arith(&self, other: &PadicNumber, op: ArithOp) -> Result<PadicNumber> {
        self.check_ctx(other)?;
        Ok(match op {
            ArithOp::Add => self.add_impl(other),
            ArithOp::Sub => self.add_impl(&other.neg_impl()),
            ArithOp::Mul => self.mul_impl(other),
            ArithOp::Div => self.mul_impl(&other.inverse()?),
        })
    }

    pub fn checked_div(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.arith(other, ArithOp::Div)
    }

    fn add_impl(&self, other: &PadicNumber) -> PadicNumber {
        let ctx = &self.ctx;
        match (&self.repr, &other.repr) {
            (Repr::ExactZero, _) => other.clone(),
            (_, Repr::ExactZero) => self.clone(),
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => Self::zero_mod(ctx, min(*a, *b)),
            (Repr::Zero { abs }, Repr::Value { .. }) => other.with_abs_prec(*abs),
            (Repr::Value { .. }, Repr::Zero { abs }) => self.with_abs_prec(*abs),
            (Repr::Value { val: v1, rel: r1, unit: u1 }, Repr::Value { val: v2, rel: r2, unit: u2 }) => {
                let v = min(*v1, *v2);
                let abs = min(v1 + *r1 as i64, v2 + *r2 as i64);
                if abs <= v {
                    return Self::zero_mod(ctx, abs);
                }
                let m = (abs - v) as u32;
                let modulus = ctx.pow_p(m);
                let term = |u: &BigUint, vi: i64| -> Option<BigUint> {
                    let shift = (vi - v) as u32;
                    (shift < m).then(|| u * ctx.pow_p(shift))
                };
                let mut x = BigUint::zero();
                if let Some(t) = term(u1, *v1) {
                    x += t;
                }
                if let Some(t) = term(u2, *v2) {
                    x += t;
                }
                x %= modulus;
                if x.is_zero() {
                    return Self::zero_mod(ctx, abs);
                }
                let (k, u) = split_p(&x, ctx.p);
                PadicNumber { ctx: ctx.clone(), repr: Repr::Value { val: v + k as i64, rel: m - k, unit: u } }
            }
        }
    }

    fn neg_impl(&self) -> PadicNumber {
        match &self.repr {
            Repr::Value { val, rel, unit } => PadicNumber {
                ctx: self.ctx.clone(),
                repr: Repr::Value { val: *val, rel: *rel, unit: self.ctx.pow_p(*rel) - unit },
            },
            _ => self.clone(),
        }
    }

    fn mul_impl(&self, other: &PadicNumber) -> PadicNumber {
        let ctx = &self.ctx;
        match (&self.repr, &other.repr) {
            (Repr::ExactZero, _) | (_, Repr::ExactZero) => Self::exact_zero(ctx),
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => Self::zero_mod(ctx, a + b),
            (Repr::Zero { abs }, Repr::Value { val, .. }) | (Repr::Value { val, .. }, Repr::Zero { abs }) => {
                Self::zero_mod(ctx, abs + val)
            }
            (Repr::Value { val: v1, rel: r1, unit: u1 }, Repr::Value { val: v2, rel: r2, unit: u2 }) => {
                let rel = min(*r1, *r2);
                let unit = (u1 * u2) % ctx.pow_p(rel);
                PadicNumber { ctx: ctx.clone(), repr: Repr::Value { val: v1 + v2, rel, unit } }
            }
        }
    }

    pub fn inverse(&self) -> Result<PadicNumber> {
        match &self.repr {
            Repr::Value { val, rel, unit } => {
                let m = self.ctx.pow_p(*rel);
                let inv = if *rel == 0 { BigUint::zero() } else { unit.modinv(m).expect("units are invertible") };
                Ok(PadicNumber { ctx: self.ctx.clone(), repr: Repr::Value { val: -val, rel: *rel, unit: inv } })
            }
            _ => Err(Error::DivisionByZero),
        }
    }

    /// Integer power; negative exponents require a nonzero value.
    pub fn pow(&self, e: i64) -> Result<PadicNumber> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        Ok(match &self.repr {
            Repr::ExactZero => {
                if e == 0 {
                    Self::one(&self.ctx)
                } else {
                    self.clone()
                }
            }
            Repr::Zero { abs } => {
                if e == 0 {
                    Self::one(&self.ctx)
                } else {
                    Self::zero_mod(&self.ctx, abs * e)
                }
            }
            Repr::Value { val, rel, unit } => {
                let m = self.ctx.pow_p(*rel);
                PadicNumber {
                    ctx: self.ctx.clone(),
                    repr: Repr::Value { val: val * e, rel: *rel, unit: unit.modpow(&BigUint::from(e as u64), m) },
                }
            }
        })
    }

    /// Multiplies by `p^k` (exact shift of the valuation).
    pub fn shift(&self, k: i64) -> PadicNumber {
        match &self.repr {
            Repr::ExactZero => self.clone(),
            Repr::Zero { abs } => Self::zero_mod(&self.ctx, abs + k),
            Repr::Value { val, rel, unit } => {
                PadicNumber { ctx: self.ctx.clone(), repr: Repr::Value { val: val + k, rel: *rel, unit: unit.clone() } }
            }
        }
    }

    /// Base-p digits of the unit part, least significant first.
    fn unit_digits(&self) -> Vec<u64> {
        let mut out = Vec::new();
        if let Repr::Value { unit, rel, .. } = &self.repr {
            let mut x = unit.clone();
            for _ in 0..*rel {
                let (q, r) = x.div_rem(&BigUint::from(self.ctx.p));
                out.push(r.to_u64().unwrap_or(0));
                x = q;
            }
        }
        out
    }

    /// Lossless textual form: `0` (exact zero), `~:M` (zero mod p^M) or
    /// `v:d0.d1.d2…:M` with the base-p digits of the unit part.
    pub fn to_digit_string(&self) -> String {
        match &self.repr {
            Repr::ExactZero => "0".to_string(),
            Repr::Zero { abs } => format!("~:{abs}"),
            Repr::Value { val, rel, .. } => {
                let digits: Vec<String> = self.unit_digits().iter().map(u64::to_string).collect();
                format!("{}:{}:{}", val, digits.join("."), val + *rel as i64)
            }
        }
    }

    pub fn from_digit_string(ctx: &Arc<PadicContext>, s: &str) -> Result<PadicNumber> {
        let bad = || Error::Parse(format!("malformed p-adic digit string `{s}`"));
        if s == "0" {
            return Ok(Self::exact_zero(ctx));
        }
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["~", abs] => Ok(Self::zero_mod(ctx, abs.parse().map_err(|_| bad())?)),
            [val, digits, abs] => {
                let val: i64 = val.parse().map_err(|_| bad())?;
                let abs: i64 = abs.parse().map_err(|_| bad())?;
                let mut unit = BigUint::zero();
                let mut place = BigUint::one();
                let ds: Vec<&str> = if digits.is_empty() { vec![] } else { digits.split('.').collect() };
                for d in &ds {
                    let d: u64 = d.parse().map_err(|_| bad())?;
                    if d >= ctx.p {
                        return Err(bad());
                    }
                    unit += &place * d;
                    place *= ctx.p;
                }
                let rel = abs - val;
                if rel != ds.len() as i64 || rel <= 0 || rel > ctx.prec as i64 {
                    return Err(bad());
                }
                if (&unit % ctx.p).is_zero() {
                    return Err(bad());
                }
                Ok(PadicNumber { ctx: ctx.clone(), repr: Repr::Value { val, rel: rel as u32, unit } })
            }
            _ => Err(bad()),
        }
    }
}

impl PartialEq for PadicNumber {
    /// Representational equality (same digits and same precision).
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same_as(&other.ctx) && self.repr == other.repr
    }
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.ctx.p;
        match &self.repr {
            Repr::ExactZero => write!(f, "0"),
            Repr::Zero { abs } => write!(f, "O({p}^{abs})"),
            Repr::Value { val, rel, .. } => {
                let mut first = true;
                for (i, d) in self.unit_digits().iter().enumerate() {
                    if *d == 0 {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    let e = val + i as i64;
                    match e {
                        0 => write!(f, "{d}")?,
                        1 => write!(f, "{d}*{p}")?,
                        _ => write!(f, "{d}*{p}^{e}")?,
                    }
                }
                write!(f, " + O({p}^{})", val + *rel as i64)
            }
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:expr) => {
        impl $tr<&PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: &PadicNumber) -> PadicNumber {
                self.arith(rhs, $op).unwrap_or_else(|e| panic!("p-adic {:?}: {e}", $op))
            }
        }
        impl $tr<PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: PadicNumber) -> PadicNumber {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&PadicNumber> for PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: &PadicNumber) -> PadicNumber {
                (&self).$method(rhs)
            }
        }
        impl $tr<PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            fn $method(self, rhs: PadicNumber) -> PadicNumber {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, ArithOp::Add);
forward_binop!(Sub, sub, ArithOp::Sub);
forward_binop!(Mul, mul, ArithOp::Mul);
forward_binop!(Div, div, ArithOp::Div);

impl Neg for &PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_impl()
    }
}

impl Neg for PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_impl()
    }
}

/// Teichmüller lift `ω(a)`: the `(p-1)`-st root of unity congruent to `a`.
pub fn teichmuller(a: u64, ctx: &Arc<PadicContext>) -> Result<PadicNumber> {
    let p = ctx.p;
    if a.is_multiple_of(p) {
        return Err(Error::InvalidResidue(a));
    }
    let m = ctx.pow_p(ctx.prec);
    let exp = BigUint::from(p);
    let mut x = BigUint::from(a % p);
    // Each application of x -> x^p fixes one more digit.
    for _ in 0..=ctx.prec {
        let next = x.modpow(&exp, m);
        if next == x {
            break;
        }
        x = next;
    }
    Ok(PadicNumber::from_residue(ctx, &x, ctx.prec))
}

/// Number of terms `J` of `Σ ±t^j/j` needed when `v(t) >= vt`: the smallest
/// `J` with `j·vt - v_p(j) >= target` for all `j > J`.
fn log_series_terms(target: i64, vt: i64, p: u64) -> u64 {
    let floor_log = |j: u64| -> i64 {
        let mut k = 0;
        let mut q = j;
        while q >= p {
            q /= p;
            k += 1;
        }
        k
    };
    // j*vt - floor(log_p j) is non-decreasing for vt >= 1.
    let mut j = 1u64;
    let mut last_bad = 0;
    while (j as i64) * vt - floor_log(j) - (vt + 1) < target {
        if (j as i64) * vt - floor_log(j) < target {
            last_bad = j;
        }
        j += 1;
    }
    last_bad
}

/// Iwasawa logarithm of a unit: `log(u) = log(u/ω(ū))`.
pub fn padic_log(u: &PadicNumber) -> Result<PadicNumber> {
    let ctx = u.context().clone();
    let val = u.valuation();
    if u.is_zero() || val != 0 {
        return Err(Error::NotAUnit(val));
    }
    let target = u.abs_prec().expect("nonzero");
    let w = teichmuller(u.residue().expect("unit"), &ctx)?;
    let t = &(u / &w) - &PadicNumber::one(&ctx);
    if t.is_zero() {
        return Ok(PadicNumber::zero_mod(&ctx, target));
    }
    let vt = t.valuation();
    let terms = log_series_terms(target, vt, ctx.p);
    let mut acc = PadicNumber::zero_mod(&ctx, target);
    let mut power = t.clone();
    for j in 1..=terms {
        let term = &power / &PadicNumber::from_i64(&ctx, j as i64);
        acc = if j % 2 == 1 { &acc + &term } else { &acc - &term };
        power = &power * &t;
    }
    Ok(acc)
}

/// `num/den` with `|num|, |den| <= floor(sqrt(p^M/2))` and `p ∤ den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconstructedRational {
    pub numerator: BigInt,
    pub denominator: BigInt,
}

impl ReconstructedRational {
    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(self.numerator.clone(), self.denominator.clone())
    }
}

impl fmt::Display for ReconstructedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_one() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

/// Lattice (half extended-Euclid) reconstruction of a small rational from
/// its image modulo `p^M`.
pub fn rational_reconstruction(x: &PadicNumber, m: u32) -> Result<ReconstructedRational> {
    let ctx = x.context();
    if m == 0 || m > ctx.prec {
        return Err(Error::InsufficientPrecision(format!("reconstruction modulus p^{m}")));
    }
    if x.valuation() < 0 {
        return Err(Error::NoReconstruction);
    }
    let residue = x
        .lift_mod(m)
        .ok_or_else(|| Error::InsufficientPrecision(format!("value known to {:?} digits, need {m}", x.abs_prec())))?;
    let modulus = BigInt::from(ctx.pow_p(m).clone());
    let bound: BigInt = (&modulus / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (modulus.clone(), BigInt::from(residue));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    let (mut num, mut den) = (r1, s1);
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    let p = BigInt::from(ctx.p);
    if den.is_zero() || den > bound || (&den % &p).is_zero() || !num.gcd(&den).is_one() {
        return Err(Error::NoReconstruction);
    }
    Ok(ReconstructedRational { numerator: num, denominator: den })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, n: u32) -> Arc<PadicContext> {
        PadicContext::new(p, n).unwrap()
    }

    #[test]
    fn rejects_bad_contexts() {
        assert_eq!(PadicContext::new(2, 10).unwrap_err(), Error::InvalidPrime(2));
        assert_eq!(PadicContext::new(9, 10).unwrap_err(), Error::InvalidPrime(9));
        assert_eq!(PadicContext::new(5, 0).unwrap_err(), Error::InvalidPrecision);
    }

    #[test]
    fn additive_identity_and_valuation() {
        let c = ctx(11, 30);
        let x = PadicNumber::from_frac(&c, 7, 3);
        assert_eq!(&x + &PadicNumber::exact_zero(&c), x);
        let u = PadicNumber::from_i64(&c, 5);
        let pu = &PadicNumber::from_i64(&c, 11) * &u;
        assert_eq!(pu.valuation(), 1);
    }

    #[test]
    fn half_times_two_is_one() {
        for n in [1, 5, 30] {
            let c = ctx(11, n);
            let half = PadicNumber::from_frac(&c, 1, 2);
            let two = PadicNumber::from_i64(&c, 2);
            assert_eq!(&half * &two, PadicNumber::one(&c));
        }
    }

    #[test]
    fn cancellation_loses_precision_not_correctness() {
        let c = ctx(5, 10);
        let a = PadicNumber::from_i64(&c, 1 + 125);
        let b = PadicNumber::one(&c);
        let d = &a - &b;
        assert_eq!(d.valuation(), 3);
        assert_eq!(d.abs_prec(), Some(10));
        let z = &a - &a;
        assert_eq!(z.zero_test(), ZeroTest::ToPrecision(10));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let c = ctx(7, 10);
        let one = PadicNumber::one(&c);
        assert_eq!(one.checked_div(&PadicNumber::exact_zero(&c)), Err(Error::DivisionByZero));
        let approx = &one - &one;
        assert_eq!(one.checked_div(&approx), Err(Error::DivisionByZero));
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = PadicNumber::one(&ctx(7, 10));
        let b = PadicNumber::one(&ctx(11, 10));
        assert!(matches!(a.arith(&b, ArithOp::Add), Err(Error::ContextMismatch(..))));
    }

    #[test]
    fn teichmuller_basics() {
        let c = ctx(11, 30);
        assert_eq!(teichmuller(1, &c).unwrap(), PadicNumber::one(&c));
        assert_eq!(teichmuller(10, &c).unwrap(), PadicNumber::from_i64(&c, -1));
        assert_eq!(teichmuller(0, &c).unwrap_err(), Error::InvalidResidue(0));
        let one = PadicNumber::one(&c);
        for a in 1..11 {
            let w = teichmuller(a, &c).unwrap();
            assert_eq!(w.residue(), Some(a));
            let diff = &w.pow(10).unwrap() - &one;
            assert!(diff.valuation() >= 30, "a={a}: {diff}");
            assert_eq!(w.pow(11).unwrap(), w);
        }
    }

    #[test]
    fn log_homomorphism_on_powers_of_two() {
        let c = ctx(11, 30);
        let l8 = padic_log(&PadicNumber::from_i64(&c, 8)).unwrap();
        let l2 = padic_log(&PadicNumber::from_i64(&c, 2)).unwrap();
        let d = &l8 - &(&PadicNumber::from_i64(&c, 3) * &l2);
        assert!(d.is_zero());
        assert!(d.valuation() >= 30);
        assert!(padic_log(&PadicNumber::one(&c)).unwrap().is_zero());
    }

    #[test]
    fn log_kills_roots_of_unity_and_rejects_non_units() {
        let c = ctx(7, 20);
        for a in 1..7 {
            assert!(padic_log(&teichmuller(a, &c).unwrap()).unwrap().is_zero());
        }
        assert_eq!(padic_log(&PadicNumber::from_i64(&c, 7)).unwrap_err(), Error::NotAUnit(1));
        assert!(padic_log(&PadicNumber::exact_zero(&c)).is_err());
    }

    #[test]
    fn log_matches_series_for_one_plus_p() {
        // log(1+p) = p - p^2/2 + p^3/3 - ...
        let c = ctx(5, 12);
        let t = PadicNumber::from_i64(&c, 5);
        let mut expect = PadicNumber::zero_mod(&c, 12);
        let mut pw = t.clone();
        for j in 1..40i64 {
            let term = &pw / &PadicNumber::from_i64(&c, j);
            expect = if j % 2 == 1 { &expect + &term } else { &expect - &term };
            pw = &pw * &t;
        }
        let got = padic_log(&PadicNumber::from_i64(&c, 6)).unwrap();
        assert!(got.agrees_with(&expect, 12));
    }

    #[test]
    fn reconstruction_round_trips() {
        let c = ctx(11, 30);
        for (n, d) in [(1, 2), (-1, 1), (2, 1), (7, 8), (0, 1), (-13, 24)] {
            let x = PadicNumber::from_frac(&c, n, d);
            let r = rational_reconstruction(&x, 20).unwrap();
            assert_eq!(r.to_ratio(), BigRational::new(n.into(), d.into()));
        }
    }

    #[test]
    fn reconstruction_fails_on_large_values() {
        let c = ctx(3, 10);
        // 3^10 = 59049, bound = 171: 12345/9877 has no small representative.
        let x = PadicNumber::from_frac(&c, 12345, 9877);
        assert_eq!(rational_reconstruction(&x, 10).unwrap_err(), Error::NoReconstruction);
        let y = PadicNumber::from_frac(&c, 1, 3);
        assert_eq!(rational_reconstruction(&y, 10).unwrap_err(), Error::NoReconstruction);
    }

    #[test]
    fn digit_string_round_trip() {
        let c = ctx(11, 8);
        for x in [
            PadicNumber::from_frac(&c, -7, 121),
            PadicNumber::exact_zero(&c),
            PadicNumber::zero_mod(&c, 5),
            PadicNumber::from_i64(&c, 11 * 11 * 3),
        ] {
            let s = x.to_digit_string();
            assert_eq!(PadicNumber::from_digit_string(&c, &s).unwrap(), x, "{s}");
        }
        assert!(PadicNumber::from_digit_string(&c, "1:12:2").is_err());
    }
}
