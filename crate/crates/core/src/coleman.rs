//! Locally analytic functions on `X(Z_p)`: one [`DiskSeries`] per residue
//! disk, and common zeros of several such functions.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use rayon::prelude::*;

use crate::padic::{teichmuller, PadicNumber};
use crate::series::{DiskSeries, RootRecord, RootSet, SeriesOp};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct ColemanFunction {
    p: u64,
    pieces: BTreeMap<u64, DiskSeries>,
}

impl ColemanFunction {
    pub fn new(p: u64, pieces: BTreeMap<u64, DiskSeries>) -> Self {
        ColemanFunction { p, pieces }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn domain(&self) -> Vec<u64> {
        self.pieces.keys().copied().collect()
    }

    pub fn piece(&self, residue: u64) -> Option<&DiskSeries> {
        self.pieces.get(&residue)
    }

    pub fn pieces(&self) -> &BTreeMap<u64, DiskSeries> {
        &self.pieces
    }

    fn zip(&self, other: &ColemanFunction, op: SeriesOp) -> Result<ColemanFunction> {
        if self.p != other.p || !self.pieces.keys().eq(other.pieces.keys()) {
            return Err(Error::DomainMismatch);
        }
        let pieces =
            self.pieces.iter().map(|(a, f)| Ok((*a, f.arith(&other.pieces[a], op)?))).collect::<Result<_>>()?;
        Ok(ColemanFunction { p: self.p, pieces })
    }

    pub fn arith(&self, other: &ColemanFunction, op: SeriesOp) -> Result<ColemanFunction> {
        self.zip(other, op)
    }

    fn map(&self, f: impl Fn(&DiskSeries) -> DiskSeries) -> ColemanFunction {
        ColemanFunction { p: self.p, pieces: self.pieces.iter().map(|(a, s)| (*a, f(s))).collect() }
    }

    pub fn scale(&self, lambda: &PadicNumber) -> ColemanFunction {
        self.map(|s| s.scale(lambda))
    }

    pub fn add_constant(&self, lambda: &PadicNumber) -> ColemanFunction {
        self.map(|s| s.add_constant(lambda))
    }

    pub fn pow(&self, e: u32) -> ColemanFunction {
        self.map(|s| s.pow(e))
    }

    /// Evaluates at a point of `X(Z_p)`.
    pub fn eval(&self, z: &PadicNumber) -> Result<PadicNumber> {
        let r = z.residue().ok_or(Error::OutsideDomain(0))?;
        let piece = self.pieces.get(&r).ok_or(Error::OutsideDomain(r))?;
        piece.eval(z)
    }

    pub fn eval_ratio(&self, q: &BigRational) -> Result<PadicNumber> {
        let any = self.pieces.values().next().ok_or(Error::DomainMismatch)?;
        self.eval(&PadicNumber::from_ratio(any.context(), q))
    }

    /// Zeros on every disk.
    pub fn zeros(&self) -> Result<BTreeMap<u64, RootSet>> {
        let found: Vec<(u64, RootSet)> =
            self.pieces.par_iter().map(|(a, s)| Ok((*a, s.find_roots()?))).collect::<Result<_>>()?;
        Ok(found.into_iter().collect())
    }
}

macro_rules! coleman_binop {
    ($tr:ident, $method:ident, $op:expr) => {
        impl $tr<&ColemanFunction> for &ColemanFunction {
            type Output = ColemanFunction;
            fn $method(self, rhs: &ColemanFunction) -> ColemanFunction {
                self.zip(rhs, $op).unwrap_or_else(|e| panic!("Coleman {:?}: {e}", $op))
            }
        }
        impl $tr<ColemanFunction> for ColemanFunction {
            type Output = ColemanFunction;
            fn $method(self, rhs: ColemanFunction) -> ColemanFunction {
                (&self).$method(&rhs)
            }
        }
    };
}

coleman_binop!(Add, add, SeriesOp::Add);
coleman_binop!(Sub, sub, SeriesOp::Sub);
coleman_binop!(Mul, mul, SeriesOp::Mul);

impl Neg for &ColemanFunction {
    type Output = ColemanFunction;
    fn neg(self) -> ColemanFunction {
        self.map(|s| -s)
    }
}

/// A point where all functions vanish.
#[derive(Clone, Debug, PartialEq)]
pub struct CommonZero {
    pub point: PadicNumber,
    pub residue: u64,
    pub certified: bool,
    /// Smallest valuation of the other functions at the point.
    pub min_residual: i64,
}

#[derive(Clone, Debug, Default)]
pub struct CommonZeroes {
    pub points: Vec<CommonZero>,
    /// Number of zeros (with multiplicity, located in `Q_p`) of each input.
    pub counts: Vec<usize>,
    /// Zeros outside `Q_p` of each input.
    pub non_rational: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Zeros of `fs[0]` at which every other function vanishes to
/// `match_digits` digits and has a zero within `p^(-match_digits)`.
pub fn common_zeroes(fs: &[ColemanFunction], match_digits: i64) -> Result<CommonZeroes> {
    let Some(first) = fs.first() else {
        return Ok(CommonZeroes::default());
    };
    for f in &fs[1..] {
        if f.p != first.p || f.domain() != first.domain() {
            return Err(Error::DomainMismatch);
        }
    }
    let zero_sets: Vec<BTreeMap<u64, RootSet>> = fs.iter().map(|f| f.zeros()).collect::<Result<_>>()?;
    let mut out = CommonZeroes::default();
    for (i, zs) in zero_sets.iter().enumerate() {
        out.counts.push(zs.values().flat_map(|r| r.roots.iter()).map(|r| r.multiplicity).sum());
        out.non_rational.push(zs.values().map(|r| r.non_rational).sum());
        for (a, rs) in zs {
            for r in rs.roots.iter().filter(|r| !r.certified) {
                out.warnings.push(format!(
                    "function {i}: uncertified zero of multiplicity {} on disk {a} near {} (residual valuation {})",
                    r.multiplicity,
                    r.root.to_digit_string(),
                    r.residual_valuation
                ));
            }
        }
    }
    for (a, rs) in &zero_sets[0] {
        for cand in &rs.roots {
            let mut ok = true;
            let mut certified = cand.certified;
            let mut min_res = i64::MAX;
            for (f, zs) in fs.iter().zip(&zero_sets).skip(1) {
                let val = f.eval(&cand.root)?.valuation();
                min_res = min_res.min(val);
                let partner: Option<&RootRecord> =
                    zs.get(a).and_then(|s| s.roots.iter().find(|r| cand.root.agrees_with(&r.root, match_digits)));
                match partner {
                    Some(r) if val >= match_digits => certified &= r.certified,
                    _ => ok = false,
                }
            }
            if ok {
                out.points.push(CommonZero { point: cand.root.clone(), residue: *a, certified, min_residual: min_res });
            }
        }
    }
    Ok(out)
}

/// Teichmüller points of the domain of `f`.
pub fn teichmuller_points(f: &ColemanFunction) -> Result<Vec<PadicNumber>> {
    let ctx = f.pieces.values().next().ok_or(Error::DomainMismatch)?.context().clone();
    f.domain().into_iter().map(|a| teichmuller(a, &ctx)).collect()
}
