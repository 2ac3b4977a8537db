//! Truncated power series on a residue disk `{z : v(z - c) >= 1}`.
//!
//! A [`DiskSeries`] stores `a_0 .. a_T` in the local coordinate `t = z - c`
//! together with a [`TailBound`] for the omitted coefficients. Every
//! operation propagates both the per-coefficient precision and the tail.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::padic::{PadicContext, PadicNumber};
use crate::{Error, Result};

/// Stand-in for an infinite valuation bound.
pub const EXACT: i64 = i64::MAX / 4;

/// For `i > T`: `v(a_i) >= floor - log_loss * floor(log_p i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailBound {
    pub floor: i64,
    pub log_loss: u32,
}

impl TailBound {
    pub fn new(floor: i64, log_loss: u32) -> Self {
        TailBound { floor, log_loss }
    }

    /// The tail of a polynomial.
    pub fn exact() -> Self {
        TailBound { floor: EXACT, log_loss: 0 }
    }

    pub fn is_exact(&self) -> bool {
        self.floor >= EXACT / 2
    }

    /// Lower bound for `v(a_i)`.
    pub fn at(&self, i: usize, p: u64) -> i64 {
        if self.is_exact() {
            return EXACT;
        }
        self.floor - self.log_loss as i64 * floor_log(i as u64, p)
    }

    /// `min_{i > trunc} (v(a_i) + i * vt)`, the valuation of the omitted part
    /// of the series at a point with `v(t) >= vt >= 1`.
    pub fn eval_error(&self, trunc: usize, vt: i64, p: u64) -> i64 {
        if self.is_exact() {
            return EXACT;
        }
        let first = trunc as u64 + 1;
        let mut best = self.at(first as usize, p) + first as i64 * vt;
        // Between consecutive powers of p the bound increases with i, so only
        // i = T + 1 and the powers of p beyond it need checking.
        let mut k = floor_log(first, p) + 1;
        let mut q = p.checked_pow(k as u32);
        while let Some(qq) = q.filter(|&qq| qq < 1 << 40) {
            best = best.min(self.floor - self.log_loss as i64 * k + qq as i64 * vt);
            k += 1;
            q = qq.checked_mul(p);
        }
        best
    }
}

pub fn floor_log(i: u64, p: u64) -> i64 {
    let mut k = 0;
    let mut q = i;
    while q >= p {
        q /= p;
        k += 1;
    }
    k
}

#[derive(Clone, Debug)]
pub struct DiskSeries {
    center: PadicNumber,
    coeffs: Vec<PadicNumber>,
    tail: TailBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

/// A located zero of a [`DiskSeries`], in the `z` coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct RootRecord {
    pub root: PadicNumber,
    pub multiplicity: usize,
    pub certified: bool,
    pub residual_valuation: i64,
}

/// All zeros of a series on its disk.
#[derive(Clone, Debug)]
pub struct RootSet {
    /// Strassman count: zeros with multiplicity in the closed disk over `C_p`.
    pub count: usize,
    pub roots: Vec<RootRecord>,
    /// Zeros (with multiplicity) lying in the disk but not in `Q_p`.
    pub non_rational: usize,
    /// Residual valuation required for certification.
    pub threshold: i64,
}

impl RootSet {
    pub fn all_certified(&self) -> bool {
        self.roots.iter().all(|r| r.certified)
    }
}

fn sat_add(a: i64, b: i64) -> i64 {
    a.saturating_add(b).min(EXACT)
}

impl DiskSeries {
    pub fn new(center: PadicNumber, coeffs: Vec<PadicNumber>, tail: TailBound) -> Self {
        assert!(!coeffs.is_empty(), "a disk series needs at least a constant term");
        DiskSeries { center, coeffs, tail }
    }

    pub fn zero(center: &PadicNumber, trunc: usize) -> Self {
        let z = PadicNumber::exact_zero(center.context());
        DiskSeries::new(center.clone(), vec![z; trunc + 1], TailBound::exact())
    }

    pub fn constant(center: &PadicNumber, value: &PadicNumber, trunc: usize) -> Self {
        let mut s = Self::zero(center, trunc);
        s.coeffs[0] = value.clone();
        s
    }

    /// The coordinate function `z = c + t`.
    pub fn variable(center: &PadicNumber, trunc: usize) -> Self {
        let mut s = Self::constant(center, center, trunc.max(1));
        s.coeffs[1] = PadicNumber::one(center.context());
        s
    }

    /// `1 / (c + t) = Σ (-1)^j t^j / c^(j+1)`.
    pub fn geometric(center: &PadicNumber, trunc: usize) -> Result<Self> {
        if center.valuation() != 0 {
            return Err(Error::NotAUnit(center.valuation()));
        }
        let cinv = center.inverse()?;
        let step = -&cinv;
        let mut coeffs = Vec::with_capacity(trunc + 1);
        let mut cur = cinv;
        for _ in 0..=trunc {
            let next = &cur * &step;
            coeffs.push(cur);
            cur = next;
        }
        Ok(DiskSeries::new(center.clone(), coeffs, TailBound::new(0, 0)))
    }

    pub fn center(&self) -> &PadicNumber {
        &self.center
    }

    pub fn coeffs(&self) -> &[PadicNumber] {
        &self.coeffs
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tail(&self) -> TailBound {
        self.tail
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        self.center.context()
    }

    pub fn p(&self) -> u64 {
        self.center.p()
    }

    /// Coefficient `i`; beyond the truncation this is a zero known to the
    /// tail bound.
    pub fn coeff(&self, i: usize) -> PadicNumber {
        match self.coeffs.get(i) {
            Some(a) => a.clone(),
            None if self.tail.is_exact() => PadicNumber::exact_zero(self.context()),
            None => PadicNumber::zero_mod(self.context(), self.tail.at(i, self.p())),
        }
    }

    /// Largest `F` with `v(a_i) >= F - L floor(log_p i)` for all `i`, with
    /// `L` the tail's log loss.
    pub fn coefficient_floor(&self) -> i64 {
        let p = self.p();
        let l = self.tail.log_loss as i64;
        let mut f = self.tail.floor;
        for (i, a) in self.coeffs.iter().enumerate() {
            f = f.min(sat_add(a.valuation(), l * floor_log(i.max(1) as u64, p)));
        }
        f
    }

    /// Minimum over the stored coefficients of their valuation (lower bound).
    pub fn min_valuation(&self) -> i64 {
        self.coeffs.iter().map(|a| a.valuation().min(EXACT)).min().unwrap_or(EXACT)
    }

    /// Minimum absolute precision among stored coefficients (`EXACT` when all
    /// are exact zeros).
    pub fn min_abs_prec(&self) -> i64 {
        self.coeffs.iter().filter_map(|a| a.abs_prec()).min().unwrap_or(EXACT)
    }

    fn check_center(&self, other: &DiskSeries) -> Result<()> {
        if self.center == other.center {
            Ok(())
        } else {
            Err(Error::CenterMismatch)
        }
    }

    /// An exact polynomial extended by zero coefficients to order `n`.
    fn padded(&self, n: usize) -> DiskSeries {
        let mut out = self.clone();
        if self.tail.is_exact() && n > self.trunc() {
            out.coeffs.resize(n + 1, PadicNumber::exact_zero(self.context()));
        }
        out
    }

    pub fn arith(&self, other: &DiskSeries, op: SeriesOp) -> Result<DiskSeries> {
        self.check_center(other)?;
        let both_poly = self.tail.is_exact() && other.tail.is_exact();
        if self.trunc() != other.trunc()
            && (self.tail.is_exact() || other.tail.is_exact())
            && !(both_poly && op == SeriesOp::Mul)
        {
            let n = self.trunc().max(other.trunc());
            let (a, b) = (self.padded(n), other.padded(n));
            if a.trunc() == b.trunc() {
                return a.arith(&b, op);
            }
        }
        let trunc = if both_poly && op == SeriesOp::Mul {
            self.trunc() + other.trunc()
        } else {
            self.trunc().min(other.trunc())
        };
        match op {
            SeriesOp::Add | SeriesOp::Sub => {
                let coeffs = (0..=trunc)
                    .map(|i| {
                        if op == SeriesOp::Add {
                            &self.coeffs[i] + &other.coeffs[i]
                        } else {
                            &self.coeffs[i] - &other.coeffs[i]
                        }
                    })
                    .collect();
                let tail = if self.tail.is_exact() && other.tail.is_exact() && self.trunc() == other.trunc() {
                    TailBound::exact()
                } else {
                    TailBound::new(
                        self.coefficient_floor().min(other.coefficient_floor()),
                        self.tail.log_loss.max(other.tail.log_loss),
                    )
                };
                Ok(DiskSeries::new(self.center.clone(), coeffs, tail))
            }
            SeriesOp::Mul => {
                let ctx = self.context();
                let mut coeffs = vec![PadicNumber::exact_zero(ctx); trunc + 1];
                for (i, a) in self.coeffs.iter().take(trunc + 1).enumerate() {
                    if a.is_exact_zero() {
                        continue;
                    }
                    for (j, b) in other.coeffs.iter().take(trunc + 1 - i).enumerate() {
                        if b.is_exact_zero() {
                            continue;
                        }
                        coeffs[i + j] = &coeffs[i + j] + &(a * b);
                    }
                }
                let tail = if both_poly {
                    TailBound::exact()
                } else {
                    TailBound::new(
                        sat_add(self.coefficient_floor(), other.coefficient_floor()),
                        self.tail.log_loss + other.tail.log_loss,
                    )
                };
                Ok(DiskSeries::new(self.center.clone(), coeffs, tail))
            }
        }
    }

    pub fn scale(&self, lambda: &PadicNumber) -> DiskSeries {
        if lambda.is_exact_zero() {
            return Self::zero(&self.center, self.trunc());
        }
        let coeffs = self.coeffs.iter().map(|a| a * lambda).collect();
        let tail = if self.tail.is_exact() {
            self.tail
        } else {
            TailBound::new(sat_add(self.tail.floor, lambda.valuation()), self.tail.log_loss)
        };
        DiskSeries::new(self.center.clone(), coeffs, tail)
    }

    pub fn add_constant(&self, lambda: &PadicNumber) -> DiskSeries {
        let mut out = self.clone();
        out.coeffs[0] = &out.coeffs[0] + lambda;
        out
    }

    pub fn pow(&self, e: u32) -> DiskSeries {
        let mut acc = Self::constant(&self.center, &PadicNumber::one(self.context()), self.trunc());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `d/dt`.
    pub fn derivative(&self) -> DiskSeries {
        let ctx = self.context();
        let t = self.trunc();
        let mut coeffs: Vec<PadicNumber> =
            (1..=t).map(|j| &self.coeffs[j] * &PadicNumber::from_i64(ctx, j as i64)).collect();
        if coeffs.is_empty() {
            coeffs.push(PadicNumber::exact_zero(ctx));
        }
        let tail = if self.tail.is_exact() {
            self.tail
        } else {
            let l = self.tail.log_loss;
            TailBound::new(self.coefficient_floor() - l as i64, l)
        };
        
        DiskSeries::new(self.center.clone(), coeffs, tail)
    }

    pub fn truncate(&self, trunc: usize) -> DiskSeries {
        if trunc >= self.trunc() {
            return self.clone();
        }
        let floor = self.coefficient_floor();
        let tail = if self.tail.is_exact() && self.coeffs[trunc + 1..].iter().all(|a| a.is_exact_zero()) {
            TailBound::exact()
        } else {
            TailBound::new(floor, self.tail.log_loss)
        };
        DiskSeries::new(self.center.clone(), self.coeffs[..=trunc].to_vec(), tail)
    }

    /// Caps every coefficient at absolute precision `abs`.
    pub fn with_abs_prec(&self, abs: i64) -> DiskSeries {
        let coeffs = self.coeffs.iter().map(|a| a.with_abs_prec(abs)).collect();
        DiskSeries::new(self.center.clone(), coeffs, self.tail)
    }

    /// Evaluates at local coordinate `t` with `v(t) >= 1`.
    pub fn eval_t(&self, t: &PadicNumber) -> Result<PadicNumber> {
        let ctx = self.context();
        if t.is_exact_zero() {
            return Ok(self.coeffs[0].clone());
        }
        let vt = t.valuation();
        if vt < 1 {
            return Err(Error::OutsideDomain(t.residue().unwrap_or(0)));
        }
        let mut acc = PadicNumber::exact_zero(ctx);
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * t) + a;
        }
        let err = self.tail.eval_error(self.trunc(), vt, self.p());
        if err < EXACT {
            acc = &acc + &PadicNumber::zero_mod(ctx, err);
        }
        Ok(acc)
    }

    /// Evaluates at a point `z` of the disk.
    pub fn eval(&self, z: &PadicNumber) -> Result<PadicNumber> {
        let t = z.arith(&self.center, crate::padic::ArithOp::Sub)?;
        self.eval_t(&t)
    }

    /// `F` with `F(c) = constant` and `(c + t) F'(t) = f(t)`.
    pub fn integrate_dlog(&self, constant: &PadicNumber) -> Result<DiskSeries> {
        let geom = Self::geometric(&self.center, self.trunc())?;
        let h = self.arith(&geom, SeriesOp::Mul)?;
        Ok(h.integrate(constant))
    }

    /// Termwise antiderivative `t^j -> t^(j+1)/(j+1)` with given constant.
    pub fn integrate(&self, constant: &PadicNumber) -> DiskSeries {
        let ctx = self.context();
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(constant.clone());
        for (j, a) in self.coeffs.iter().enumerate() {
            coeffs.push(a / &PadicNumber::from_i64(ctx, j as i64 + 1));
        }
        let tail = if self.tail.is_exact() {
            TailBound::exact()
        } else {
            TailBound::new(self.coefficient_floor(), self.tail.log_loss + 1)
        };
        
        DiskSeries::new(self.center.clone(), coeffs, tail)
    }

    /// `f(z^p)` re-expanded about `center`, for `f` centred at `c'` with
    /// `v(center^p - c') >= 1`.
    pub fn compose_pow_p(&self, center: &PadicNumber) -> Result<DiskSeries> {
        let ctx = self.context().clone();
        let p = self.p() as usize;
        if center.valuation() != 0 {
            return Err(Error::NotAUnit(center.valuation()));
        }
        let delta = &center.pow(p as i64)? - &self.center;
        if delta.valuation() < 1 {
            return Err(Error::ImageDiskMismatch);
        }
        // q(t) = (c + t)^p - c' = delta + Σ_{j>=1} C(p, j) c^(p-j) t^j.
        let mut q = Vec::with_capacity(p + 1);
        q.push(delta);
        let mut binom = 1i64;
        for j in 1..=p {
            binom = binom * (p as i64 - j as i64 + 1) / j as i64;
            q.push(&PadicNumber::from_i64(&ctx, binom) * &center.pow((p - j) as i64)?);
        }
        let trunc = self.trunc();
        // A polynomial composes to a polynomial of degree d * p.
        let out_trunc = if self.tail.is_exact() {
            let d = self.coeffs.iter().rposition(|a| !a.is_exact_zero()).unwrap_or(0);
            trunc.max(d * p)
        } else {
            trunc
        };
        let zero = PadicNumber::exact_zero(&ctx);
        let mut acc = vec![zero.clone(); out_trunc + 1];
        acc[0] = self.coeffs[trunc].clone();
        for i in (0..trunc).rev() {
            let mut next = vec![zero.clone(); out_trunc + 1];
            for (n, a) in acc.iter().enumerate() {
                if a.is_exact_zero() {
                    continue;
                }
                for (j, qj) in q.iter().enumerate() {
                    if n + j > out_trunc {
                        break;
                    }
                    next[n + j] = &next[n + j] + &(a * qj);
                }
            }
            next[0] = &next[0] + &self.coeffs[i];
            acc = next;
        }
        if self.tail.is_exact() {
            return Ok(DiskSeries::new(center.clone(), acc, TailBound::exact()));
        }
        let (floor, loss) = (self.coefficient_floor(), self.tail.log_loss);
        let tail = TailBound::new(floor, loss);
        // a_i, i > T, contributes to coefficient n with valuation
        // >= v(a_i) + i - floor(n/p).
        let base = tail.eval_error(trunc, 1, self.p());
        for (n, a) in acc.iter_mut().enumerate() {
            *a = a.with_abs_prec(base - (n / p) as i64);
        }
        Ok(DiskSeries::new(center.clone(), acc, tail))
    }

    fn local_poly(&self) -> LocalPoly {
        let ctx = self.context();
        let p = self.p();
        let err = self.tail.eval_error(self.trunc(), 1, p);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, a) in self.coeffs.iter().enumerate() {
            coeffs.push(a.shift(i as i64));
        }
        let mut lp = LocalPoly { ctx: ctx.clone(), coeffs, err };
        lp.cap();
        lp
    }

    /// Number of zeros (with multiplicity) on the closed disk `v(t) >= 1`.
    pub fn strassman_count(&self) -> Result<usize> {
        Ok(self.local_poly().strassman()?.1)
    }

    /// Locates all zeros on the disk, in the `z` coordinate.
    pub fn find_roots(&self) -> Result<RootSet> {
        let lp = self.local_poly();
        let (m, count) = lp.strassman()?;
        let min_abs = lp.coeffs.iter().filter_map(|a| a.abs_prec()).min().unwrap_or(EXACT);
        let threshold = lp.err.min(min_abs) - 1;
        let mut found = Vec::new();
        let mut non_rational = 0;
        let ctx = self.context().clone();
        let normalized = lp.normalize(m);
        let path = Path { base: PadicNumber::exact_zero(&ctx), depth: 0 };
        descend(&normalized, &path, count, &mut found, &mut non_rational);
        let p = PadicNumber::from_i64(&ctx, self.p() as i64);
        let mut roots: Vec<RootRecord> = found
            .into_iter()
            .map(|(s, mult, certified)| {
                let z = &self.center + &(&p * &s);
                let residual = self.eval(&z).map(|v| v.valuation().min(EXACT)).unwrap_or(i64::MIN);
                RootRecord {
                    root: z,
                    multiplicity: mult,
                    certified: certified && residual >= threshold,
                    residual_valuation: residual,
                }
            })
            .collect();
        roots.sort_by_key(|a| a.root.to_digit_string());
        Ok(RootSet { count, roots, non_rational, threshold })
    }
}

/// `Σ coeffs_i s^i + R(s)` with `R` of Gauss valuation `>= err` on `s ∈ Z_p`.
#[derive(Clone, Debug)]
struct LocalPoly {
    ctx: Arc<PadicContext>,
    coeffs: Vec<PadicNumber>,
    err: i64,
}

struct Path {
    /// `s_original = base + p^depth * s_current`.
    base: PadicNumber,
    depth: i64,
}

impl LocalPoly {
    fn cap(&mut self) {
        if self.err >= EXACT {
            return;
        }
        for a in self.coeffs.iter_mut() {
            *a = a.with_abs_prec(self.err);
        }
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(|a| a.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Minimal coefficient valuation and the last index attaining it.
    fn strassman(&self) -> Result<(i64, usize)> {
        let mut m = EXACT;
        for a in &self.coeffs {
            if !a.is_zero() {
                m = m.min(a.valuation());
            }
        }
        if m >= self.err {
            return Err(Error::Inconclusive("all coefficients vanish to the working precision".into()));
        }
        for a in &self.coeffs {
            if a.is_zero() && !a.is_exact_zero() && a.valuation() <= m {
                return Err(Error::Inconclusive(format!(
                    "a coefficient is only known modulo p^{} but the minimum valuation is {m}",
                    a.valuation()
                )));
            }
        }
        let n = self.coeffs.iter().rposition(|a| !a.is_zero() && a.valuation() == m).expect("min attained");
        Ok((m, n))
    }

    fn normalize(&self, m: i64) -> LocalPoly {
        LocalPoly {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|a| a.shift(-m)).collect(),
            err: self.err - m,
        }
    }

    fn reduction(&self, degree: usize) -> Vec<u64> {
        self.coeffs[..=degree].iter().map(|a| a.residue().expect("integral")).collect()
    }

    fn eval(&self, s: &PadicNumber) -> PadicNumber {
        let mut acc = PadicNumber::exact_zero(&self.ctx);
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * s) + a;
        }
        &acc + &PadicNumber::zero_mod(&self.ctx, self.err)
    }

    fn derivative_eval(&self, s: &PadicNumber) -> PadicNumber {
        let mut acc = PadicNumber::exact_zero(&self.ctx);
        for (i, a) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = &(&acc * s) + &(a * &PadicNumber::from_i64(&self.ctx, i as i64));
        }
        acc
    }

    /// `P(r + p s')` as a polynomial in `s'`.
    fn shift(&self, r: u64) -> LocalPoly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        if r != 0 {
            let rr = PadicNumber::from_i64(&self.ctx, r as i64);
            for i in 0..n {
                for j in (i..n - 1).rev() {
                    let add = &c[j + 1] * &rr;
                    c[j] = &c[j] + &add;
                }
            }
        }
        let coeffs = c.into_iter().enumerate().map(|(i, a)| a.shift(i as i64)).collect();
        let mut out = LocalPoly { ctx: self.ctx.clone(), coeffs, err: self.err };
        out.cap();
        out
    }
}

fn poly_eval_mod(poly: &[u64], r: u64, p: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &a| (acc * r + a) % p)
}

/// Multiplicity of `r` as a root of `poly` over `F_p`.
fn multiplicity_mod(poly: &[u64], r: u64, p: u64) -> usize {
    let mut cur = poly.to_vec();
    let mut k = 0;
    while cur.len() > 1 && poly_eval_mod(&cur, r, p) == 0 {
        // Synthetic division by (s - r).
        let n = cur.len();
        let mut q = vec![0; n - 1];
        let mut carry = 0;
        for i in (1..n).rev() {
            carry = (cur[i] + carry * r) % p;
            q[i - 1] = carry;
        }
        cur = q;
        k += 1;
    }
    k
}

/// Records `(s, multiplicity, converged)` for the zeros of a normalized
/// polynomial known to have `count` zeros in `Z_p`-disk.
fn descend(
    poly: &LocalPoly,
    path: &Path,
    count: usize,
    out: &mut Vec<(PadicNumber, usize, bool)>,
    non_rational: &mut usize,
) {
    if count == 0 {
        return;
    }
    let ctx = &poly.ctx;
    let p = ctx.p();
    let red = poly.reduction(count);
    let mut located = 0;
    for r in 0..p {
        let mult = multiplicity_mod(&red, r, p);
        if mult == 0 {
            continue;
        }
        located += mult;
        let scale = PadicNumber::one(ctx).shift(path.depth);
        if mult == 1 {
            let s = newton(poly, r);
            out.push((&path.base + &(&scale * &s), 1, true));
            continue;
        }
        let shifted = poly.shift(r);
        let next_path =
            Path { base: &path.base + &(&scale * &PadicNumber::from_i64(ctx, r as i64)), depth: path.depth + 1 };
        match shifted.strassman() {
            // Zeros with 0 < v(s - r) < 1 lie in ramified extensions.
            Ok((m, n)) if n <= mult => {
                *non_rational += mult - n;
                descend(&shifted.normalize(m), &next_path, n, out, non_rational);
            }
            _ => {
                // Precision exhausted before the cluster separated.
                let approx = next_path.base.with_abs_prec(next_path.depth);
                out.push((approx, mult, false));
            }
        }
    }
    *non_rational += count - located;
}

fn newton(poly: &LocalPoly, r: u64) -> PadicNumber {
    let ctx = &poly.ctx;
    let mut s = PadicNumber::from_i64(ctx, r as i64);
    for _ in 0..(2 * (64 - (ctx.prec() as u64).leading_zeros()) + 8) {
        let f = poly.eval(&s);
        let d = poly.derivative_eval(&s);
        let step = match f.checked_div(&d) {
            Ok(x) => x,
            Err(_) => break,
        };
        let next = &s - &step;
        let done = step.is_zero();
        s = next;
        if done {
            break;
        }
    }
    s
}

macro_rules! series_binop {
    ($tr:ident, $method:ident, $op:expr) => {
        impl $tr<&DiskSeries> for &DiskSeries {
            type Output = DiskSeries;
            fn $method(self, rhs: &DiskSeries) -> DiskSeries {
                self.arith(rhs, $op).unwrap_or_else(|e| panic!("series {:?}: {e}", $op))
            }
        }
        impl $tr<DiskSeries> for DiskSeries {
            type Output = DiskSeries;
            fn $method(self, rhs: DiskSeries) -> DiskSeries {
                (&self).$method(&rhs)
            }
        }
    };
}

series_binop!(Add, add, SeriesOp::Add);
series_binop!(Sub, sub, SeriesOp::Sub);
series_binop!(Mul, mul, SeriesOp::Mul);

impl Neg for &DiskSeries {
    type Output = DiskSeries;
    fn neg(self) -> DiskSeries {
        let coeffs = self.coeffs.iter().map(|a| -a).collect();
        DiskSeries::new(self.center.clone(), coeffs, self.tail)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{padic_log, teichmuller};

    fn ctx(p: u64, n: u32) -> Arc<PadicContext> {
        PadicContext::new(p, n).unwrap()
    }

    fn poly(c: &PadicNumber, coeffs: &[i64]) -> DiskSeries {
        let ctx = c.context();
        let cs = coeffs.iter().map(|&a| PadicNumber::from_i64(ctx, a)).collect();
        DiskSeries::new(c.clone(), cs, TailBound::exact())
    }

    #[test]
    fn basic_arithmetic() {
        let k = ctx(5, 20);
        let c = teichmuller(2, &k).unwrap();
        let f = poly(&c, &[1, 1, 0, 0]);
        let g = poly(&c, &[1, -1, 0, 0]);
        let h = &f * &g;
        let expect = poly(&c, &[1, 0, -1, 0]);
        for (a, b) in h.coeffs().iter().zip(expect.coeffs()) {
            assert!((a - b).is_zero());
        }
        let z = DiskSeries::zero(&c, 3);
        let s = &f + &z;
        assert_eq!(s.coeffs(), f.coeffs());
        let zero = f.scale(&PadicNumber::exact_zero(&k));
        assert!(zero.coeffs().iter().all(|a| a.is_exact_zero()));
    }

    #[test]
    fn center_mismatch() {
        let k = ctx(5, 20);
        let f = poly(&teichmuller(2, &k).unwrap(), &[1]);
        let g = poly(&teichmuller(3, &k).unwrap(), &[1]);
        assert_eq!(f.arith(&g, SeriesOp::Add).unwrap_err(), Error::CenterMismatch);
    }

    #[test]
    fn frobenius_of_identity() {
        let k = ctx(5, 20);
        let c = teichmuller(2, &k).unwrap();
        let id = DiskSeries::variable(&c, 12);
        let f = id.compose_pow_p(&c).unwrap();
        // (c + t)^5 = c^5 + 5c^4 t + 10 c^3 t^2 + ...
        assert!(f.coeffs()[1].valuation() >= 1);
        assert_eq!(f.coeffs()[5].valuation(), 0);
        for x in [5i64, 10, 35] {
            let t = PadicNumber::from_i64(&k, x);
            let z = &c + &t;
            let got = f.eval_t(&t).unwrap();
            let want = z.pow(5).unwrap();
            assert!(got.agrees_with(&want, 19), "{got} vs {want}; {:?}", f.coeffs());
        }
        let konst = DiskSeries::constant(&c, &PadicNumber::from_i64(&k, 7), 5);
        assert_eq!(konst.compose_pow_p(&c).unwrap().coeffs()[0], PadicNumber::from_i64(&k, 7));
        let bad = teichmuller(3, &k).unwrap();
        assert_eq!(id.compose_pow_p(&bad).unwrap_err(), Error::ImageDiskMismatch);
    }

    #[test]
    fn dlog_of_one_is_log() {
        let k = ctx(7, 25);
        let c = teichmuller(3, &k).unwrap();
        let one = DiskSeries::constant(&c, &PadicNumber::one(&k), 40);
        let one = DiskSeries::new(c.clone(), one.coeffs().to_vec(), TailBound::exact());
        let f = one.integrate_dlog(&PadicNumber::exact_zero(&k)).unwrap();
        for x in [7i64, 14, 49 * 3] {
            let t = PadicNumber::from_i64(&k, x);
            let z = &c + &t;
            let expect = padic_log(&z).unwrap();
            let got = f.eval_t(&t).unwrap();
            assert!(got.agrees_with(&expect, 23), "{got} vs {expect}");
        }
        let zero = DiskSeries::zero(&c, 10).integrate_dlog(&PadicNumber::from_i64(&k, 3)).unwrap();
        assert_eq!(zero.coeffs()[0], PadicNumber::from_i64(&k, 3));
        assert!(zero.coeffs()[1..].iter().all(|a| a.is_zero()));
    }

    #[test]
    fn strassman_counts() {
        let k = ctx(5, 20);
        let c = teichmuller(2, &k).unwrap();
        assert_eq!(poly(&c, &[3]).strassman_count().unwrap(), 0);
        assert_eq!(poly(&c, &[0, 1]).strassman_count().unwrap(), 1);
        // (t - 5)(t - 10) = t^2 - 15 t + 50
        assert_eq!(poly(&c, &[50, -15, 1]).strassman_count().unwrap(), 2);
        assert!(DiskSeries::zero(&c, 4).with_abs_prec(10).strassman_count().is_err());
    }

    #[test]
    fn roots_of_small_polynomials() {
        let k = ctx(5, 20);
        let c = teichmuller(2, &k).unwrap();
        let rs = poly(&c, &[-5, 1]).find_roots().unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert!(rs.roots[0].certified);
        assert!(rs.roots[0].root.agrees_with(&(&c + &PadicNumber::from_i64(&k, 5)), 19));
        assert!(poly(&c, &[1, 1]).find_roots().unwrap().roots.is_empty());
        let two = poly(&c, &[50, -15, 1]).find_roots().unwrap();
        assert_eq!(two.roots.len(), 2);
        assert!(two.all_certified());
    }

    #[test]
    fn double_root_is_flagged() {
        let k = ctx(5, 12);
        let c = teichmuller(2, &k).unwrap();
        // (t - 5)^2
        let rs = poly(&c, &[25, -10, 1]).find_roots().unwrap();
        assert_eq!(rs.count, 2);
        assert_eq!(rs.roots.len(), 1);
        assert_eq!(rs.roots[0].multiplicity, 2);
        assert!(!rs.roots[0].certified);
    }

    #[test]
    fn irrational_roots_are_accounted() {
        let k = ctx(5, 12);
        let c = teichmuller(2, &k).unwrap();
        // t^2 - 2*25: roots ±5 sqrt(2), and 2 is not a square mod 5.
        let rs = poly(&c, &[-50, 0, 1]).find_roots().unwrap();
        assert_eq!(rs.count, 2);
        assert!(rs.roots.is_empty());
        assert_eq!(rs.non_rational, 2);
    }

    #[test]
    fn ramified_cluster_is_accounted() {
        let k = ctx(5, 12);
        let c = teichmuller(2, &k).unwrap();
        // (t - 5)^2 - 5^3: roots 5 ± 5 sqrt(5).
        let rs = poly(&c, &[-100, -10, 1]).find_roots().unwrap();
        assert_eq!(rs.count, 2);
        assert!(rs.roots.is_empty());
        assert_eq!(rs.non_rational, 2);
    }

    #[test]
    fn tail_error_bound() {
        let tb = TailBound::new(0, 1);
        // min over i > 5 of i - floor(log_3 i) at v(t) = 1: i = 6 gives 5, i = 9 gives 7.
        assert_eq!(tb.eval_error(5, 1, 3), 5);
        assert_eq!(TailBound::new(0, 4).eval_error(80, 1, 3), 81 - 16);
    }
}
