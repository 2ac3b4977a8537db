//! Coleman polylogarithms `Li_1 .. Li_kmax`, `log z` and `log(1 - z)` on the
//! residue disks of `X(Z_p)`, and the p-adic zeta values.
//!
//! For each weight `k` the overconvergent function
//! `g_k(z) = Li_k(z) - p^(-k) Li_k(z^p) = Σ_{p ∤ m} z^m / m^k`
//! is expanded in `s = 1/(1 - z)` (a Mittag-Leffler expansion at `z = 1`).
//! On the disk of a Teichmüller point `c` Frobenius fixes `c`, so
//! `Li_k(c) = g_k(c) / (1 - p^(-k))`; the rest of the disk expansion follows
//! from `d Li_k = Li_(k-1) dz/z`. The Frobenius identity on whole disks is
//! then an independent check.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::coleman::ColemanFunction;
use crate::padic::{padic_log, teichmuller, PadicContext, PadicNumber};
use crate::series::{floor_log, DiskSeries, TailBound};
use crate::{Error, Result};

/// Parameters of a polylogarithm family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolylogConfig {
    pub p: u64,
    /// Target precision `N` in p-adic digits.
    pub prec: u32,
    pub kmax: u32,
    /// Relative precision of the internal computations.
    pub work_prec: u32,
    /// Truncation order of `Li_1` and the logarithms on each disk.
    pub trunc: usize,
}

impl PolylogConfig {
    pub fn new(p: u64, prec: u32, kmax: u32) -> Result<Self> {
        if p < 3 || !crate::padic::is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if prec == 0 {
            return Err(Error::InvalidPrecision);
        }
        if kmax == 0 {
            return Err(Error::Config("kmax must be at least 1".into()));
        }
        let work_prec = prec + 2 * kmax + 10;
        Ok(PolylogConfig { p, prec, kmax, work_prec, trunc: default_trunc(p, work_prec, kmax) })
    }

    pub fn with_work_prec(mut self, work_prec: u32) -> Self {
        self.work_prec = work_prec;
        self.trunc = default_trunc(self.p, work_prec, self.kmax);
        self
    }

    pub fn with_trunc(mut self, trunc: usize) -> Self {
        self.trunc = trunc;
        self
    }

    /// Residues `a` whose disks make up `X(Z_p)`.
    pub fn domain(&self) -> Vec<u64> {
        (2..self.p).collect()
    }
}

/// Smallest `T` with `i - kmax floor(log_p i) > W + 4` for every `i > T`.
fn default_trunc(p: u64, work_prec: u32, kmax: u32) -> usize {
    let mut t = work_prec as usize;
    loop {
        let tb = TailBound::new(0, kmax);
        if tb.eval_error(t, 1, p) > work_prec as i64 + 4 {
            return t;
        }
        t += 1;
    }
}

/// Taylor coefficients `e_0 .. e_M` of `g_k` at `z = 0`: `e_m = 1/m^k` for
/// `p ∤ m`, else `0`.
pub fn g_taylor_at_zero(k: u32, m: usize, ctx: &Arc<PadicContext>) -> Vec<PadicNumber> {
    let q = ctx.pow_p(ctx.prec()).clone();
    taylor_residues(k, m, ctx.p(), &q)
        .into_iter()
        .map(
            |x| {
                if x.is_zero() {
                    PadicNumber::exact_zero(ctx)
                } else {
                    PadicNumber::from_residue(ctx, &x, ctx.prec())
                }
            },
        )
        .collect()
}

fn taylor_residues(k: u32, m: usize, p: u64, q: &BigUint) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); m + 1];
    for (i, e) in out.iter_mut().enumerate().skip(1) {
        if !(i as u64).is_multiple_of(p) {
            let mi = BigUint::from(i as u64).modinv(q).expect("p-adic unit");
            *e = mi.modpow(&BigUint::from(k), q);
        }
    }
    out
}

fn sub_mod(a: &BigUint, b: &BigUint, q: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        q - (b - a)
    }
}

fn add_mod(a: &BigUint, b: &BigUint, q: &BigUint) -> BigUint {
    let s = a + b;
    if &s >= q {
        s - q
    } else {
        s
    }
}

/// Mittag-Leffler data of `g_k`: `g_k(z) = Σ_j d_j (z - 1)^(-j)`.
#[derive(Clone, Debug)]
pub struct GFunction {
    pub k: u32,
    ctx: Arc<PadicContext>,
    /// `d'_j = (-1)^j d_j` as residues modulo `p^W`: `g_k = Σ d'_j s^j`.
    shifted: Vec<BigUint>,
    /// Number of Taylor coefficients used for the fit.
    pub fit_terms: usize,
    /// Valuation of the worst mismatch on coefficients `1..=fit_terms`.
    pub fit_residual: i64,
    /// Valuation of the worst mismatch on held-out coefficients.
    pub held_out_residual: i64,
    /// Range `(fit_terms, held_out_end]` of held-out coefficients.
    pub held_out_end: usize,
}

/// Residue modulo `p^W` as a number of absolute precision `W`.
fn residue_number(ctx: &Arc<PadicContext>, x: &BigUint) -> PadicNumber {
    PadicNumber::from_residue(ctx, x, ctx.prec())
}

fn residue_valuation(x: &BigUint, ctx: &PadicContext) -> i64 {
    if x.is_zero() {
        return ctx.prec() as i64;
    }
    let mut v = 0;
    let mut y = x.clone();
    let p = BigUint::from(ctx.p());
    while (&y % &p).is_zero() {
        y /= &p;
        v += 1;
    }
    v
}

/// Fits `g_k` from its Taylor coefficients at `0`.
///
/// With `σ = z/(1 - z)` the coefficients `b_n` of `g_k` in `σ` are the
/// iterated forward differences of `e_m`; the substitution `σ = s - 1` then
/// gives the coefficients in `s = 1/(1 - z) = -1/(z - 1)`. Both steps are
/// unimodular over the integers, so everything is exact modulo `p^W`.
/// `fit_terms` Taylor coefficients feed the fit; `held_out` further ones
/// are only used for validation.
pub fn ml_fit(k: u32, fit_terms: usize, held_out: usize, ctx: &Arc<PadicContext>) -> Result<GFunction> {
    if k == 0 || fit_terms == 0 {
        return Err(Error::Config("ml_fit needs k >= 1 and at least one coefficient".into()));
    }
    let p = ctx.p();
    let q = ctx.pow_p(ctx.prec()).clone();
    let total = fit_terms + held_out;
    let e_all = taylor_residues(k, total, p, &q);

    // b_n = (Δ^(n-1) e)_1 for n = 1..=fit_terms.
    let mut b = vec![BigUint::zero(); fit_terms + 1];
    let mut row: Vec<BigUint> = e_all[1..=fit_terms].to_vec();
    for bn in b.iter_mut().skip(1) {
        *bn = row[0].clone();
        let next: Vec<BigUint> = row.windows(2).map(|w| sub_mod(&w[1], &w[0], &q)).collect();
        row = next;
    }
    let j_max = b.iter().rposition(|x| !x.is_zero()).unwrap_or(0);
    // The σ-coefficients must die out well before the fitted range ends.
    let window = 2 * (p as usize - 1) + 4;
    if j_max + window > fit_terms {
        return Err(Error::InsufficientPrecision(format!(
            "Mittag-Leffler coefficients of g_{k} have not decayed below p^{} by index {fit_terms}",
            ctx.prec()
        )));
    }

    // Σ b_n (s - 1)^n: Taylor shift by -1.
    let mut d = b[..=j_max].to_vec();
    let n = d.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            d[j] = sub_mod(&d[j], &d[j + 1], &q);
        }
    }

    let mut g = GFunction {
        k,
        ctx: ctx.clone(),
        shifted: d,
        fit_terms,
        fit_residual: 0,
        held_out_residual: 0,
        held_out_end: total,
    };
    // Re-expand about 0 and compare with e_m.
    let one = BigUint::one();
    let taylor = g.expansion_residues(&one, total);
    let mut fit_res = ctx.prec() as i64;
    let mut held_res = ctx.prec() as i64;
    for m in 0..=total {
        let v = residue_valuation(&sub_mod(&taylor[m], &e_all[m], &q), ctx);
        if m <= fit_terms {
            fit_res = fit_res.min(v);
        } else {
            held_res = held_res.min(v);
        }
    }
    g.fit_residual = fit_res;
    g.held_out_residual = held_res;
    Ok(g)
}

impl GFunction {
    /// Rebuilds a fit from its coefficients in `s = 1/(1 - z)`.
    pub(crate) fn from_s_coeffs(
        k: u32,
        ctx: &Arc<PadicContext>,
        s_coeffs: &[PadicNumber],
        fit_terms: usize,
        fit_residual: i64,
        held_out_residual: i64,
        held_out_end: usize,
    ) -> Result<Self> {
        let shifted = s_coeffs
            .iter()
            .map(|c| {
                c.lift_mod(ctx.prec())
                    .ok_or_else(|| Error::InsufficientPrecision("stored coefficient below working precision".into()))
            })
            .collect::<Result<_>>()?;
        Ok(GFunction { k, ctx: ctx.clone(), shifted, fit_terms, fit_residual, held_out_residual, held_out_end })
    }

    /// `d_0 .. d_J`, coefficients of `(z - 1)^(-j)`.
    pub fn ml_coeffs(&self) -> Vec<PadicNumber> {
        let q = self.ctx.pow_p(self.ctx.prec());
        self.shifted
            .iter()
            .enumerate()
            .map(|(j, x)| {
                let y = if j % 2 == 1 && !x.is_zero() { q - x } else { x.clone() };
                residue_number(&self.ctx, &y)
            })
            .collect()
    }

    /// Coefficients in `s = 1/(1 - z)`.
    pub fn s_coeffs(&self) -> Vec<PadicNumber> {
        self.shifted.iter().map(|x| residue_number(&self.ctx, x)).collect()
    }

    pub fn terms(&self) -> usize {
        self.shifted.len()
    }

    /// Valuation of `d_0` (the value at infinity).
    pub fn d0_valuation(&self) -> i64 {
        residue_valuation(&self.shifted[0], &self.ctx)
    }

    /// Taylor coefficients `0..=n` about the point with `1/(1 - c) = s0`,
    /// as residues modulo `p^W`.
    fn expansion_residues(&self, s0: &BigUint, n: usize) -> Vec<BigUint> {
        let q = self.ctx.pow_p(self.ctx.prec());
        // s^j = s0^j Σ_i C(i + j - 1, i) s0^i t^i; the inner sums over j are
        // iterated suffix sums of w_j = d'_j s0^j.
        let mut w: Vec<BigUint> = Vec::with_capacity(self.shifted.len());
        let mut pw = BigUint::one();
        for d in &self.shifted {
            w.push((d * &pw) % q);
            pw = (&pw * s0) % q;
        }
        let mut level: Vec<BigUint> = w[1..].to_vec();
        let mut out = Vec::with_capacity(n + 1);
        let mut s0_pow = BigUint::one();
        for i in 0..=n {
            let mut acc = BigUint::zero();
            for x in level.iter_mut().rev() {
                acc = add_mod(&acc, x, q);
                *x = acc.clone();
            }
            let mut c = level.first().cloned().unwrap_or_default();
            if i == 0 {
                c = add_mod(&c, &w[0], q);
            }
            out.push((c * &s0_pow) % q);
            s0_pow = (&s0_pow * s0) % q;
        }
        out
    }

    /// Local expansion of `g_k` on the disk of `center`.
    pub fn disk_series(&self, center: &PadicNumber, trunc: usize) -> Result<DiskSeries> {
        let one = PadicNumber::one(&self.ctx);
        let s0 = (&one - center).inverse()?;
        let s0r = s0
            .lift_mod(self.ctx.prec())
            .ok_or_else(|| Error::InsufficientPrecision("centre not known to the working precision".into()))?;
        let coeffs = self.expansion_residues(&s0r, trunc).iter().map(|x| residue_number(&self.ctx, x)).collect();
        Ok(DiskSeries::new(center.clone(), coeffs, TailBound::new(0, 0)))
    }

    /// `g_k(z)` for `z` with `z - 1` a unit.
    pub fn eval(&self, z: &PadicNumber) -> Result<PadicNumber> {
        let one = PadicNumber::one(&self.ctx);
        let w = &one - z;
        if w.valuation() != 0 {
            return Err(Error::OutsideDomain(z.residue().unwrap_or(1)));
        }
        let s = w.inverse()?;
        let mut acc = PadicNumber::exact_zero(&self.ctx);
        for d in self.s_coeffs().iter().rev() {
            acc = &(&acc * &s) + d;
        }
        Ok(acc)
    }
}

/// Residual report of one defining identity on one disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskResidual {
    pub k: u32,
    pub residue: u64,
    /// Smallest coefficient valuation of the residual series.
    pub min_valuation: i64,
    /// Smallest margin `v(r_j) - (N - k floor(log_p j))` over coefficients.
    pub margin: i64,
}

impl DiskResidual {
    pub fn passes(&self) -> bool {
        self.margin >= 0
    }
}

/// `log z`, `log(1 - z)`, `Li_1 .. Li_kmax` on every disk, with zeta values.
#[derive(Clone, Debug)]
pub struct PolylogFamily {
    config: PolylogConfig,
    ctx: Arc<PadicContext>,
    centers: BTreeMap<u64, PadicNumber>,
    logz: ColemanFunction,
    log1mz: ColemanFunction,
    li: Vec<ColemanFunction>,
    g: Vec<GFunction>,
    zeta: BTreeMap<u32, PadicNumber>,
}

fn fit_terms_for(p: u64, work_prec: u32) -> usize {
    (p as usize - 1) * (work_prec as usize + 6) + 30
}

impl PolylogFamily {
    pub fn build(config: &PolylogConfig) -> Result<Self> {
        let ctx = PadicContext::new(config.p, config.work_prec)?;
        let fit = fit_terms_for(config.p, config.work_prec);
        let held = 2 * config.p as usize + 10;
        let g: Vec<GFunction> =
            (1..=config.kmax).into_par_iter().map(|k| ml_fit(k, fit, held, &ctx)).collect::<Result<_>>()?;
        let pieces: Vec<(u64, DiskPieces)> = config
            .domain()
            .into_par_iter()
            .map(|a| Ok((a, build_disk(a, config, &ctx, &g)?)))
            .collect::<Result<_>>()?;
        let mut centers = BTreeMap::new();
        let mut logz = BTreeMap::new();
        let mut log1mz = BTreeMap::new();
        let mut li: Vec<BTreeMap<u64, DiskSeries>> = vec![BTreeMap::new(); config.kmax as usize];
        for (a, dp) in pieces {
            centers.insert(a, dp.center);
            logz.insert(a, dp.logz);
            log1mz.insert(a, dp.log1mz);
            for (k, s) in dp.li.into_iter().enumerate() {
                li[k].insert(a, s);
            }
        }
        let li: Vec<ColemanFunction> = li.into_iter().map(|m| ColemanFunction::new(config.p, m)).collect();
        let mut fam = PolylogFamily {
            config: config.clone(),
            ctx,
            centers,
            logz: ColemanFunction::new(config.p, logz),
            log1mz: ColemanFunction::new(config.p, log1mz),
            li,
            g,
            zeta: BTreeMap::new(),
        };
        for k in 2..=config.kmax {
            let z = fam.compute_zeta(k)?;
            fam.zeta.insert(k, z);
        }
        Ok(fam)
    }

    /// Reassembles a family from stored parts (see the expansion cache).
    pub(crate) fn from_parts(
        config: PolylogConfig,
        ctx: Arc<PadicContext>,
        logz: ColemanFunction,
        log1mz: ColemanFunction,
        li: Vec<ColemanFunction>,
        g: Vec<GFunction>,
        zeta: BTreeMap<u32, PadicNumber>,
    ) -> Result<Self> {
        let mut centers = BTreeMap::new();
        for a in config.domain() {
            centers.insert(a, teichmuller(a, &ctx)?);
        }
        Ok(PolylogFamily { config, ctx, centers, logz, log1mz, li, g, zeta })
    }

    fn compute_zeta(&self, k: u32) -> Result<PadicNumber> {
        if k < 2 {
            return Err(Error::ZetaUndefined(k));
        }
        let minus_one = &self.centers[&(self.config.p - 1)];
        let value = self.li(k)?.piece(self.config.p - 1).expect("disk of -1").coeffs()[0].clone();
        debug_assert_eq!(minus_one, &PadicNumber::from_i64(&self.ctx, -1));
        let two = PadicNumber::from_i64(&self.ctx, 2);
        let factor = &two.pow(1 - k as i64)? - &PadicNumber::one(&self.ctx);
        value.checked_div(&factor)
    }

    pub fn config(&self) -> &PolylogConfig {
        &self.config
    }

    pub fn context(&self) -> &Arc<PadicContext> {
        &self.ctx
    }

    pub fn centers(&self) -> &BTreeMap<u64, PadicNumber> {
        &self.centers
    }

    pub fn logz(&self) -> &ColemanFunction {
        &self.logz
    }

    pub fn log1mz(&self) -> &ColemanFunction {
        &self.log1mz
    }

    pub fn li(&self, k: u32) -> Result<&ColemanFunction> {
        if k == 0 || k > self.config.kmax {
            return Err(Error::Config(format!("Li_{k} is outside 1..={}", self.config.kmax)));
        }
        Ok(&self.li[k as usize - 1])
    }

    pub fn g(&self, k: u32) -> Result<&GFunction> {
        if k == 0 || k > self.config.kmax {
            return Err(Error::Config(format!("g_{k} is outside 1..={}", self.config.kmax)));
        }
        Ok(&self.g[k as usize - 1])
    }

    /// `ζ_p(k) = Li_k(-1) / (2^(1-k) - 1)`.
    pub fn zeta_value(&self, k: u32) -> Result<PadicNumber> {
        self.zeta.get(&k).cloned().ok_or(Error::ZetaUndefined(k))
    }

    pub fn zeta_table(&self) -> &BTreeMap<u32, PadicNumber> {
        &self.zeta
    }

    pub fn number(&self, num: i64, den: i64) -> PadicNumber {
        PadicNumber::from_frac(&self.ctx, num, den)
    }

    pub fn eval_li(&self, k: u32, z: &PadicNumber) -> Result<PadicNumber> {
        self.li(k)?.eval(z)
    }

    pub fn eval_logz(&self, z: &PadicNumber) -> Result<PadicNumber> {
        self.logz.eval(z)
    }

    pub fn eval_log1mz(&self, z: &PadicNumber) -> Result<PadicNumber> {
        self.log1mz.eval(z)
    }

    /// The p-adic logarithm of a rational unit such as `2`.
    pub fn log_of(&self, num: i64, den: i64) -> Result<PadicNumber> {
        padic_log(&self.number(num, den))
    }

    /// Coefficientwise precision budget at index `j` for weight `k`.
    fn budget(&self, k: u32, j: usize) -> i64 {
        self.config.prec as i64 - k as i64 * floor_log(j.max(1) as u64, self.config.p)
    }

    fn residual(&self, k: u32, residue: u64, r: &DiskSeries) -> DiskResidual {
        let mut margin = i64::MAX;
        for (j, c) in r.coeffs().iter().enumerate() {
            margin = margin.min(c.valuation().min(i64::MAX / 4) - self.budget(k, j));
        }
        DiskResidual { k, residue, min_valuation: r.min_valuation(), margin }
    }

    /// `(c + t) d/dt Li_k - Li_(k-1)` for `k >= 2`, and
    /// `(1 - z) d/dt Li_1 - 1` for `k = 1`, on every disk.
    pub fn ode_residuals(&self) -> Result<Vec<DiskResidual>> {
        let mut jobs = Vec::new();
        for k in 1..=self.config.kmax {
            for &a in self.centers.keys() {
                jobs.push((k, a));
            }
        }
        jobs.par_iter()
            .map(|&(k, a)| {
                let c = &self.centers[&a];
                let f = self.li(k)?.piece(a).expect("domain disk");
                let trunc = f.trunc();
                let r = if k == 1 {
                    let one = PadicNumber::one(&self.ctx);
                    let w = &DiskSeries::constant(c, &one, trunc) - &DiskSeries::variable(c, trunc);
                    let lhs = &w * &f.derivative();
                    lhs.add_constant(&-&one)
                } else {
                    let lower = self.li(k - 1)?.piece(a).expect("domain disk");
                    let z = DiskSeries::variable(c, trunc);
                    &(&z * &f.derivative()) - lower
                };
                Ok(self.residual(k, a, &r))
            })
            .collect()
    }

    /// `Li_k - p^(-k) Li_k(z^p) - g_k` on every disk.
    pub fn frobenius_residuals(&self) -> Result<Vec<DiskResidual>> {
        let mut jobs = Vec::new();
        for k in 1..=self.config.kmax {
            for &a in self.centers.keys() {
                jobs.push((k, a));
            }
        }
        let pk_inv = |k: u32| PadicNumber::one(&self.ctx).shift(-(k as i64));
        jobs.par_iter()
            .map(|&(k, a)| {
                let c = &self.centers[&a];
                let f = self.li(k)?.piece(a).expect("domain disk");
                let frob = f.compose_pow_p(c)?;
                let gk = self.g(k)?.disk_series(c, f.trunc())?;
                let r = &(f - &frob.scale(&pk_inv(k))) - &gk;
                Ok(self.residual(k, a, &r))
            })
            .collect()
    }
}

struct DiskPieces {
    center: PadicNumber,
    logz: DiskSeries,
    log1mz: DiskSeries,
    li: Vec<DiskSeries>,
}

fn build_disk(a: u64, config: &PolylogConfig, ctx: &Arc<PadicContext>, g: &[GFunction]) -> Result<DiskPieces> {
    let t = config.trunc;
    let c = teichmuller(a, ctx)?;
    let one = PadicNumber::one(ctx);
    let one_minus_c = &one - &c;
    let cinv = c.inverse()?;
    let s0 = one_minus_c.inverse()?;

    // log z = log c + Σ (-1)^(j+1) (t/c)^j / j
    let mut lz = Vec::with_capacity(t + 1);
    lz.push(padic_log(&c)?);
    // log(1 - z) = log(1 - c) - Σ (s0 t)^j / j
    let mut l1 = Vec::with_capacity(t + 1);
    l1.push(padic_log(&one_minus_c)?);
    let mut pc = one.clone();
    let mut ps = one.clone();
    for j in 1..=t {
        pc = &pc * &cinv;
        ps = &ps * &s0;
        let jj = PadicNumber::from_i64(ctx, j as i64);
        let term = &pc / &jj;
        lz.push(if j % 2 == 1 { term } else { -&term });
        l1.push(-&(&ps / &jj));
    }
    let logz = DiskSeries::new(c.clone(), lz, TailBound::new(0, 1));
    let log1mz = DiskSeries::new(c.clone(), l1, TailBound::new(0, 1));

    let mut li = Vec::with_capacity(config.kmax as usize);
    li.push(-&log1mz);
    for k in 2..=config.kmax {
        // c is fixed by Frobenius: Li_k(c) (1 - p^(-k)) = g_k(c).
        let gk = g[k as usize - 1].eval(&c)?;
        let pk = one.shift(k as i64);
        let value = &(&gk * &pk) / &(&pk - &one);
        let prev = li.last().expect("weight 1 present");
        li.push(prev.integrate_dlog(&value)?);
    }
    Ok(DiskPieces { center: c, logz, log1mz, li })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_coefficients_skip_multiples_of_p() {
        let ctx = PadicContext::new(5, 10).unwrap();
        let e = g_taylor_at_zero(1, 12, &ctx);
        assert!(e[0].is_exact_zero());
        assert_eq!(e[2], PadicNumber::from_frac(&ctx, 1, 2));
        assert!(e[5].is_exact_zero());
        assert!(e[10].is_exact_zero());
        let e3 = g_taylor_at_zero(3, 4, &ctx);
        assert_eq!(e3[2], PadicNumber::from_frac(&ctx, 1, 8));
    }

    #[test]
    fn taylor_partial_sum_matches_logs() {
        // Σ_{p∤m} p^m/m = -log(1 - p) + p^(-1) log(1 - p^p)
        let ctx = PadicContext::new(7, 20).unwrap();
        let e = g_taylor_at_zero(1, 40, &ctx);
        let z = PadicNumber::from_i64(&ctx, 7);
        let mut sum = PadicNumber::exact_zero(&ctx);
        let mut zp = PadicNumber::one(&ctx);
        for em in &e {
            sum = &sum + &(em * &zp);
            zp = &zp * &z;
        }
        let one = PadicNumber::one(&ctx);
        let l1 = padic_log(&(&one - &z)).unwrap();
        let l2 = padic_log(&(&one - &z.pow(7).unwrap())).unwrap();
        let expect = &l2.shift(-1) - &l1;
        assert!(sum.agrees_with(&expect, 18), "{sum} vs {expect}");
    }

    #[test]
    fn ml_fit_weight_one_matches_closed_form() {
        let p = 5;
        let ctx = PadicContext::new(p, 20).unwrap();
        let g = ml_fit(1, fit_terms_for(p, 20), 20, &ctx).unwrap();
        assert!(g.held_out_residual >= 20);
        assert!(g.d0_valuation() >= 18);
        let one = PadicNumber::one(&ctx);
        for a in [2u64, 3, 4] {
            for lift in [0i64, 5, 35, 125] {
                let z = PadicNumber::from_i64(&ctx, a as i64 + lift);
                let zp = z.pow(p as i64).unwrap();
                let expect = &padic_log(&(&one - &zp)).unwrap().shift(-1) - &padic_log(&(&one - &z)).unwrap();
                let got = g.eval(&z).unwrap();
                assert!(got.agrees_with(&expect, 18), "z={z}: {got} vs {expect}");
            }
        }
    }

    #[test]
    fn ml_fit_inversion_symmetry() {
        let ctx = PadicContext::new(7, 20).unwrap();
        for k in 1..=3u32 {
            let g = ml_fit(k, fit_terms_for(7, 20), 20, &ctx).unwrap();
            for a in [2i64, 3, 5] {
                let z = PadicNumber::from_i64(&ctx, a + 14);
                let lhs = g.eval(&z.inverse().unwrap()).unwrap();
                let rhs = g.eval(&z).unwrap();
                let rhs = if k % 2 == 1 { rhs } else { -&rhs };
                assert!(lhs.agrees_with(&rhs, 18), "k={k}");
            }
        }
    }

    #[test]
    fn ml_fit_detects_too_few_terms() {
        let ctx = PadicContext::new(7, 20).unwrap();
        assert!(matches!(ml_fit(2, 30, 10, &ctx), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn small_family_identities() {
        let cfg = PolylogConfig::new(7, 12, 3).unwrap();
        let fam = PolylogFamily::build(&cfg).unwrap();
        // Li_1 = -log(1 - z)
        let z = fam.number(3, 1);
        let a = fam.eval_li(1, &z).unwrap();
        let b = fam.eval_log1mz(&z).unwrap();
        assert!((&a + &b).valuation() >= 12);
        // ζ_p(2) = 0
        assert!(fam.zeta_value(2).unwrap().valuation() >= 12);
        assert_eq!(fam.zeta_value(1).unwrap_err(), Error::ZetaUndefined(1));
        for r in fam.ode_residuals().unwrap() {
            assert!(r.passes(), "{r:?}");
        }
        for r in fam.frobenius_residuals().unwrap() {
            assert!(r.passes(), "{r:?}");
        }
    }
}
