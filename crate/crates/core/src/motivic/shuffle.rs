//! Words, the shuffle product and deconcatenation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::poly::{rat, Ring};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub name: String,
    pub degree: u32,
}

impl Letter {
    pub fn new(name: &str, degree: u32) -> Self {
        assert!(degree >= 1, "letters have positive degree");
        Letter { name: name.to_string(), degree }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(ls: &[&Letter]) -> Self {
        Word(ls.iter().map(|l| (*l).clone()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|l| l.degree).sum()
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(o.0.iter().cloned());
        Word(v)
    }

    /// All splittings `w = u v`, including the trivial ones.
    pub fn splittings(&self) -> Vec<(Word, Word)> {
        (0..=self.len()).map(|i| (Word(self.0[..i].to_vec()), Word(self.0[i..].to_vec()))).collect()
    }

    /// Every word over `alphabet` of length at most `max_len`.
    pub fn all_up_to(alphabet: &[Letter], max_len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for l in alphabet {
                    let mut v = w.0.clone();
                    v.push(l.clone());
                    next.push(Word(v));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        let names: Vec<&str> = self.0.iter().map(|l| l.name.as_str()).collect();
        write!(f, "{}", names.join("."))
    }
}

/// Sum over interleavings of `a` and `b` preserving the order inside each.
pub fn shuffle(a: &Word, b: &Word) -> ShufflePoly<BigRational> {
    let mut counts: BTreeMap<Word, i64> = BTreeMap::new();
    fn rec(a: &[Letter], b: &[Letter], prefix: &mut Vec<Letter>, out: &mut BTreeMap<Word, i64>) {
        if a.is_empty() || b.is_empty() {
            let mut w = prefix.clone();
            w.extend_from_slice(a);
            w.extend_from_slice(b);
            *out.entry(Word(w)).or_insert(0) += 1;
            return;
        }
        prefix.push(a[0].clone());
        rec(&a[1..], b, prefix, out);
        prefix.pop();
        prefix.push(b[0].clone());
        rec(a, &b[1..], prefix, out);
        prefix.pop();
    }
    rec(&a.0, &b.0, &mut Vec::new(), &mut counts);
    ShufflePoly { terms: counts.into_iter().map(|(w, c)| (w, BigRational::from(BigInt::from(c)))).collect() }
}

/// A finite linear combination of words.
///
/// Read as an element of the shuffle algebra (dual functionals `f_w`) the
/// product is [`ShufflePoly::shuffle`]; read as a noncommutative polynomial it
/// is [`ShufflePoly::concat`].
#[derive(Clone, Debug, PartialEq)]
pub struct ShufflePoly<R> {
    terms: BTreeMap<Word, R>,
}

impl<R: Ring> ShufflePoly<R> {
    pub fn zero() -> Self {
        ShufflePoly { terms: BTreeMap::new() }
    }

    pub fn word(w: Word, c: R) -> Self {
        let mut s = Self::zero();
        s.add_term(w, &c);
        s
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &R)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Option<&R> {
        self.terms.get(w)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The degrees of the words present.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(Word::degree).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn add_term(&mut self, w: Word, c: &R) {
        let next = match self.terms.get(&w) {
            Some(x) => x.r_add(c),
            None => c.clone(),
        };
        if next.is_zero_elem() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, next);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale_neg())
    }

    fn scale_neg(&self) -> Self {
        ShufflePoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.r_neg())).collect() }
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), &x.r_mul(c));
        }
        out
    }

    fn bilinear(&self, o: &Self, f: impl Fn(&Word, &Word) -> ShufflePoly<BigRational>) -> Self {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                let c = c1.r_mul(c2);
                for (w, k) in f(w1, w2).terms {
                    out.add_term(w, &c.r_mul(&c.from_rational_like(&k)));
                }
            }
        }
        out
    }

    pub fn shuffle(&self, o: &Self) -> Self {
        self.bilinear(o, shuffle)
    }

    pub fn concat(&self, o: &Self) -> Self {
        self.bilinear(o, |a, b| ShufflePoly::word(a.concat(b), BigRational::one()))
    }

    /// Drops words of degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Self {
        ShufflePoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.degree() <= max_degree)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// `[a, b] = ab - ba` in the concatenation algebra.
    pub fn bracket(&self, o: &Self) -> Self {
        self.concat(o).sub(&o.concat(self))
    }

    /// `exp` in the completed concatenation algebra, truncated at
    /// `max_degree`; `self` must have no constant term.
    pub fn exp_truncated(&self, max_degree: u32, one: &R) -> Self {
        assert!(self.terms.keys().all(|w| !w.is_empty()), "exp needs a series without constant term");
        let mut acc = Self::word(Word::empty(), one.clone());
        let mut power = acc.clone();
        for k in 1..=max_degree {
            power = power.concat(self).truncate(max_degree).scale(&one.from_rational_like(&rat(1, k as i64)));
            acc = acc.add(&power);
        }
        acc
    }

    /// Deconcatenation of every word into two nonempty pieces.
    pub fn reduced_deconcatenation(&self) -> BTreeMap<(Word, Word), R> {
        let mut out: BTreeMap<(Word, Word), R> = BTreeMap::new();
        for (w, c) in &self.terms {
            for (u, v) in w.splittings() {
                if u.is_empty() || v.is_empty() {
                    continue;
                }
                let key = (u, v);
                let next = match out.get(&key) {
                    Some(x) => x.r_add(c),
                    None => c.clone(),
                };
                if next.is_zero_elem() {
                    out.remove(&key);
                } else {
                    out.insert(key, next);
                }
            }
        }
        out
    }

    /// Converts the coefficients into another ring.
    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S) -> ShufflePoly<S> {
        let mut out = ShufflePoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &f(c));
        }
        out
    }
}

impl<R: Ring + fmt::Display> fmt::Display for ShufflePoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("({c})·{w}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
