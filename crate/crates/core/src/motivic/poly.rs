//! Coefficient rings and sparse Laurent polynomials over `Q`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::padic::PadicNumber;

/// The arithmetic needed by shuffle polynomials and unipotent matrices.
///
/// `*_like` constructors take a witness so that context-carrying rings
/// (p-adic numbers) can build constants.
pub trait Ring: Clone + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_rational_like(&self, q: &BigRational) -> Self;
    fn r_add(&self, o: &Self) -> Self;
    fn r_sub(&self, o: &Self) -> Self;
    fn r_mul(&self, o: &Self) -> Self;
    fn r_neg(&self) -> Self;
    /// Exact zero, or zero to the available precision.
    fn is_zero_elem(&self) -> bool;
}

/// Rings whose constants need no witness.
pub trait ExactRing: Ring + PartialEq {
    fn from_rational(q: &BigRational) -> Self;
    fn exact_zero() -> Self {
        Self::from_rational(&BigRational::zero())
    }
    fn exact_one() -> Self {
        Self::from_rational(&BigRational::one())
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Ring for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn from_rational_like(&self, q: &BigRational) -> Self {
        q.clone()
    }
    fn r_add(&self, o: &Self) -> Self {
        self + o
    }
    fn r_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn r_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn r_neg(&self) -> Self {
        -self
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl ExactRing for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

impl Ring for PadicNumber {
    fn zero_like(&self) -> Self {
        PadicNumber::exact_zero(self.context())
    }
    fn one_like(&self) -> Self {
        PadicNumber::one(self.context())
    }
    fn from_rational_like(&self, q: &BigRational) -> Self {
        PadicNumber::from_ratio(self.context(), q)
    }
    fn r_add(&self, o: &Self) -> Self {
        self + o
    }
    fn r_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn r_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn r_neg(&self) -> Self {
        -self
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

/// A monomial `Π x_i^(e_i)` with integer (possibly negative) exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(BTreeMap<String, i32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: &str) -> Self {
        Self::var_pow(name, 1)
    }

    pub fn var_pow(name: &str, e: i32) -> Self {
        let mut m = BTreeMap::new();
        if e != 0 {
            m.insert(name.to_string(), e);
        }
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, name: &str) -> i32 {
        self.0.get(name).copied().unwrap_or(0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (&str, i32)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        for (k, e) in &o.0 {
            let entry = m.entry(k.clone()).or_insert(0);
            *entry += e;
            if *entry == 0 {
                m.remove(k);
            }
        }
        Monomial(m)
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|(k, e)| (k.clone(), -e)).collect())
    }

    /// Sum of the exponents.
    pub fn total_degree(&self) -> i32 {
        self.0.values().sum()
    }

    /// Removes the variable `name`, returning its exponent.
    pub fn split_off(&self, name: &str) -> (i32, Monomial) {
        let mut m = self.0.clone();
        let e = m.remove(name).unwrap_or(0);
        (e, Monomial(m))
    }

    /// Total degree under a weighting of the variables (unlisted: 0).
    pub fn weight(&self, weights: &BTreeMap<&str, i32>) -> i32 {
        self.0.iter().map(|(k, e)| weights.get(k.as_str()).copied().unwrap_or(0) * e).sum()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.0.iter().map(|(k, e)| if *e == 1 { k.clone() } else { format!("{k}^{e}") }).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Sparse Laurent polynomial with coefficients in `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<R> {
    terms: BTreeMap<Monomial, R>,
}

/// Laurent polynomials over `Q`.
pub type SymPoly = Poly<BigRational>;

impl<R: ExactRing> Default for Poly<R> {
    fn default() -> Self {
        Poly { terms: BTreeMap::new() }
    }
}

impl<R: ExactRing> Poly<R> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: R) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_q(q: BigRational) -> Self {
        Self::constant(R::from_rational(&q))
    }

    pub fn int(n: i64) -> Self {
        Self::from_q(rat(n, 1))
    }

    pub fn var(name: &str) -> Self {
        Self::term(R::exact_one(), Monomial::var(name))
    }

    pub fn term(c: R, m: Monomial) -> Self {
        let mut p = Self::zero();
        if !c.is_zero_elem() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> R {
        self.terms.get(m).cloned().unwrap_or_else(R::exact_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: &R) {
        let next = match self.terms.get(&m) {
            Some(x) => x.r_add(c),
            None => c.clone(),
        };
        if next.is_zero_elem() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, next);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.r_neg())).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), &c1.r_mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(m.clone(), &x.r_mul(c));
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(R::exact_one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes `name -> value`; negative exponents need `value_inv`.
    pub fn substitute(&self, name: &str, value: &Self, value_inv: Option<&Self>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(name);
            let factor = if e >= 0 {
                value.pow(e as u32)
            } else {
                value_inv.expect("negative exponent needs an inverse").pow((-e) as u32)
            };
            out = out.add(&factor.mul(&Self::term(c.clone(), rest)));
        }
        out
    }

    /// Collects coefficients with respect to the variables in `vars`.
    pub fn collect(&self, vars: &[&str]) -> BTreeMap<Monomial, Self> {
        let mut out: BTreeMap<Monomial, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut key = Monomial::one();
            let mut rest = m.clone();
            for v in vars {
                let (e, r) = rest.split_off(v);
                rest = r;
                key = key.mul(&Monomial::var_pow(v, e));
            }
            let entry = out.entry(key).or_default();
            *entry = entry.add(&Self::term(c.clone(), rest));
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// The variables occurring with nonzero exponent.
    pub fn variables(&self) -> Vec<String> {
        let mut v: Vec<String> = self.terms.keys().flat_map(|m| m.0.keys().cloned()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Evaluates with a ring-valued assignment; `inv` supplies inverses for
    /// negative exponents.
    pub fn eval_with<S: Ring>(
        &self,
        like: &S,
        coeff: impl Fn(&R) -> S,
        value: impl Fn(&str) -> S,
        inv: impl Fn(&str) -> S,
    ) -> S {
        let mut acc = like.zero_like();
        for (m, c) in &self.terms {
            let mut t = coeff(c);
            for (name, e) in m.factors() {
                let base = if e > 0 { value(name) } else { inv(name) };
                for _ in 0..e.unsigned_abs() {
                    t = t.r_mul(&base);
                }
            }
            acc = acc.r_add(&t);
        }
        acc
    }
}

impl SymPoly {
    /// Inverse of a single term `c·m`, `None` for anything else.
    pub fn monomial_inverse(&self) -> Option<SymPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        Some(SymPoly::term(c.recip(), m.inverse()))
    }

    /// The constant value of a polynomial without variables.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// Evaluates at p-adic values of the variables.
    pub fn eval_padic(&self, like: &PadicNumber, value: impl Fn(&str) -> PadicNumber) -> crate::Result<PadicNumber> {
        let mut acc = like.zero_like();
        for (m, c) in &self.terms {
            let mut t = PadicNumber::from_ratio(like.context(), c);
            for (name, e) in m.factors() {
                let v = value(name);
                t = &t * &v.pow(e as i64)?;
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }
}

impl<R: ExactRing> Ring for Poly<R> {
    fn zero_like(&self) -> Self {
        Self::zero()
    }
    fn one_like(&self) -> Self {
        Self::int(1)
    }
    fn from_rational_like(&self, q: &BigRational) -> Self {
        Self::from_q(q.clone())
    }
    fn r_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn r_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn r_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn r_neg(&self) -> Self {
        self.neg()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl<R: ExactRing> ExactRing for Poly<R> {
    fn from_rational(q: &BigRational) -> Self {
        Poly::constant(R::from_rational(q))
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (m.is_one(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => write!(f, "{m}")?,
                (false, false) => write!(f, "{a}*{m}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly<SymPoly> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})*{m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_arithmetic() {
        let x = SymPoly::var("x");
        let xi = SymPoly::term(BigRational::one(), Monomial::var_pow("x", -1));
        assert_eq!(x.mul(&xi), SymPoly::int(1));
        let p = x.add(&SymPoly::int(1)).pow(2);
        assert_eq!(p.to_string(), "1 + 2*x + x^2");
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn substitution_and_collection() {
        let x = SymPoly::var("x");
        let y = SymPoly::var("y");
        let p = x.mul(&y).add(&x.scale(&rat(3, 2)));
        let q = p.substitute("x", &SymPoly::int(2), None);
        assert_eq!(q, y.scale(&rat(2, 1)).add(&SymPoly::int(3)));
        let c = p.collect(&["x"]);
        assert_eq!(c[&Monomial::var("x")], y.add(&SymPoly::from_q(rat(3, 2))));
    }
}
