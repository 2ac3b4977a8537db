//! The image of `λ`, the `F_2`/`F_4` relations and their p-adic evaluation.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::hopf::{gen, half_expansions, li4_half_abstract, nu, poly_to_shuffle, MotPoly, C1, LI4_HALF, LOG2, ZETA3};
use super::matrix::{word_product, NilpotentMatrix};
use super::poly::{Monomial, Ring, SymPoly};
use super::shuffle::{Letter, ShufflePoly, Word};
use crate::padic::{rational_reconstruction, PadicNumber, ReconstructedRational};
use crate::{Error, Result};

/// Coordinates of `λ(ρ)` on `φ_1', φ_1, φ_11, φ_111, φ_3, φ_1111, φ_13, φ_31`
/// and the residuals of the five image equations.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaImage<R> {
    pub x1p: R,
    pub x1: R,
    pub x11: R,
    pub x111: R,
    pub x3: R,
    pub x1111: R,
    pub x13: R,
    pub x31: R,
    pub residuals: [R; 5],
}

impl<R: Ring> LambdaImage<R> {
    pub fn coordinates(&self) -> [R; 8] {
        [
            self.x1p.clone(),
            self.x1.clone(),
            self.x11.clone(),
            self.x111.clone(),
            self.x3.clone(),
            self.x1111.clone(),
            self.x13.clone(),
            self.x31.clone(),
        ]
    }
}

/// `x_11 - x_1 x_1'`, `x_111 - x_1 x_1'^2`, `x_1111 - x_1 x_1'^3`,
/// `x_13 - x_1' x_3`, `x_31`.
pub fn image_equations<R: Ring>(c: &[R; 8]) -> [R; 5] {
    let [x1p, x1, x11, x111, x3, x1111, x13, x31] = c;
    let x1p2 = x1p.r_mul(x1p);
    [
        x11.r_sub(&x1.r_mul(x1p)),
        x111.r_sub(&x1.r_mul(&x1p2)),
        x1111.r_sub(&x1.r_mul(&x1p2).r_mul(x1p)),
        x13.r_sub(&x1p.r_mul(x3)),
        x31.clone(),
    ]
}

/// `λ(ρ)` for the homomorphism with `r^D r(v_{-1})` having superdiagonal
/// `(a, a, a, -b)` and `r^D r(v_{-3})` the single entry `-d` at `(1, 4)`.
pub fn lambda_image<R: Ring>(a: &R, b: &R, d: &R) -> LambdaImage<R> {
    let z = a.zero_like();
    let mut m1 = vec![vec![z.clone(); 5]; 5];
    m1[0][1] = a.clone();
    m1[1][2] = a.clone();
    m1[2][3] = a.clone();
    m1[3][4] = b.r_neg();
    let mut m3 = vec![vec![z.clone(); 5]; 5];
    m3[1][4] = d.r_neg();
    let m1 = NilpotentMatrix::new(m1).expect("strictly upper triangular");
    let m3 = NilpotentMatrix::new(m3).expect("strictly upper triangular");
    let (n1, n3) = (nu(1), nu(3));
    let pick = |l: &Letter| if *l == n1 { m1.clone() } else { m3.clone() };
    let coord = |w: Word| {
        let deg = w.degree() as usize;
        word_product(&w, pick, a, 5)[4 - deg][4].clone()
    };
    let x1p = m1.entry(2, 3).clone();
    let x1 = coord(Word::from_letters(&[&n1]));
    let x11 = coord(Word::from_letters(&[&n1, &n1]));
    let x111 = coord(Word::from_letters(&[&n1, &n1, &n1]));
    let x3 = coord(Word::from_letters(&[&n3]));
    let x1111 = coord(Word::from_letters(&[&n1, &n1, &n1, &n1]));
    let x13 = coord(Word::from_letters(&[&n1, &n3]));
    let x31 = coord(Word::from_letters(&[&n3, &n1]));
    let coords = [x1p, x1, x11, x111, x3, x1111, x13, x31];
    let residuals = image_equations(&coords);
    let [x1p, x1, x11, x111, x3, x1111, x13, x31] = coords;
    LambdaImage { x1p, x1, x11, x111, x3, x1111, x13, x31, residuals }
}

/// Names of the standard coordinates on `A^5`.
pub const COORDS: [&str; 5] = ["X1", "Y1", "Y2", "Y3", "Y4"];

/// The relations `F_2 = Y2 - P_2(X1, Y1)` and `F_4 = Y4 - P_4(X1, Y1, Y3)`
/// cutting out the image of the Selmer scheme, with coefficients Laurent
/// polynomials in `log(2)`, `zeta(3)`, `Li4(1/2)`, `c1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Relations {
    pub f2: SymPoly,
    pub f4: SymPoly,
}

struct BasisElement {
    coord: &'static str,
    weight: u32,
    element: MotPoly,
}

/// Concrete basis of `A_1' ⊕ A_1 ⊕ ... ⊕ A_4` with coordinate names.
fn concrete_basis() -> Vec<BasisElement> {
    let l = gen(LOG2);
    let e = |coord, weight, element| BasisElement { coord, weight, element };
    vec![
        e("y_l'", 1, l.clone()),
        e("y_l", 1, l.clone()),
        e("y_l2", 2, l.pow(2)),
        e("y_l3", 3, l.pow(3)),
        e("y_z", 3, gen(ZETA3)),
        e("y_l4", 4, l.pow(4)),
        e("y_lz", 4, l.mul(&gen(ZETA3))),
        e("y_L", 4, gen(LI4_HALF)),
    ]
}

const FREE: [&str; 3] = ["y_l'", "y_l", "y_z"];

/// Solves `eq = 0` for `v`, provided `eq` is linear in `v` with an
/// invertible monomial coefficient free of the variables in `avoid`.
fn solve_for(eq: &SymPoly, v: &str, avoid: &[&str]) -> Option<SymPoly> {
    let parts = eq.collect(&[v]);
    let lin = parts.get(&Monomial::var(v))?;
    if parts.keys().any(|m| m.exponent(v) > 1 || m.exponent(v) < 0) {
        return None;
    }
    if lin.variables().iter().any(|x| avoid.contains(&x.as_str())) {
        return None;
    }
    let inv = lin.monomial_inverse()?;
    let rest = parts.get(&Monomial::one()).cloned().unwrap_or_default();
    Some(rest.neg().mul(&inv))
}

fn substitute_all(p: &SymPoly, sol: &BTreeMap<String, SymPoly>) -> SymPoly {
    sol.iter().fold(p.clone(), |acc, (v, val)| acc.substitute(v, val, None))
}

/// Derives [`Relations`] from the image equations, the expansion of
/// `Li^U_4(1/2)` in the `φ` basis and the period map.
pub fn synthesize_relations() -> Result<Relations> {
    let exp = half_expansions()?;
    let li4 = li4_half_abstract(&exp)?;
    let basis = concrete_basis();
    let all_vars: Vec<&str> = basis.iter().map(|b| b.coord).collect();

    // Coordinates x_w of Σ y_e e in the φ basis.
    let mut x: BTreeMap<Word, SymPoly> = BTreeMap::new();
    for b in basis.iter().filter(|b| b.coord != "y_l'") {
        let image: ShufflePoly<SymPoly> = if b.coord == "y_L" { li4.clone() } else { poly_to_shuffle(&b.element)? };
        for (w, c) in image.terms() {
            let e = x.entry(w.clone()).or_default();
            *e = e.add(&SymPoly::var(b.coord).mul(c));
        }
    }
    let (n1, n3) = (nu(1), nu(3));
    let xw = |ls: &[&Letter]| x.get(&Word::from_letters(ls)).cloned().unwrap_or_default();
    let coords = [
        SymPoly::var("y_l'"),
        xw(&[&n1]),
        xw(&[&n1, &n1]),
        xw(&[&n1, &n1, &n1]),
        xw(&[&n3]),
        xw(&[&n1, &n1, &n1, &n1]),
        xw(&[&n1, &n3]),
        xw(&[&n3, &n1]),
    ];
    let mut eqs: Vec<SymPoly> = image_equations(&coords).to_vec();

    // Eliminate the dependent y's.
    let mut sol: BTreeMap<String, SymPoly> = BTreeMap::new();
    let dependent: Vec<&str> = all_vars.iter().copied().filter(|v| !FREE.contains(v)).collect();
    while !eqs.is_empty() {
        let found = eqs.iter().enumerate().find_map(|(i, eq)| {
            dependent
                .iter()
                .filter(|v| !sol.contains_key(**v))
                .find_map(|v| solve_for(eq, v, &all_vars).map(|s| (i, *v, s)))
        });
        let Some((i, v, s)) = found else {
            return Err(Error::ConstructionCheck("image equations are not triangular".into()));
        };
        eqs.remove(i);
        for val in sol.values_mut() {
            *val = val.substitute(v, &s, None);
        }
        sol.insert(v.to_string(), s.clone());
        eqs = eqs.iter().map(|e| e.substitute(v, &s, None)).filter(|e| !e.is_zero()).collect();
    }

    // Period map to A^5.
    let period = |m: &MotPoly| -> SymPoly {
        let mut acc = SymPoly::zero();
        for (mono, c) in m.terms() {
            let mut t = c.clone();
            for (g, e) in mono.factors() {
                t = t.mul(&SymPoly::var(g).pow(e as u32));
            }
            acc = acc.add(&t);
        }
        acc
    };
    let mut image = [SymPoly::zero(), SymPoly::zero(), SymPoly::zero(), SymPoly::zero(), SymPoly::zero()];
    for b in &basis {
        let slot = if b.coord == "y_l'" { 0 } else { b.weight as usize };
        image[slot] = image[slot].add(&SymPoly::var(b.coord).mul(&period(&b.element)));
    }
    let image: Vec<SymPoly> = image.iter().map(|p| substitute_all(p, &sol)).collect();

    // Invert the triangular part, collect the rest as relations.
    let mut inverse: BTreeMap<String, SymPoly> = BTreeMap::new();
    let mut relations = BTreeMap::new();
    for (name, expr) in COORDS.iter().zip(&image) {
        let expr = substitute_all(expr, &inverse);
        let open: Vec<&str> = FREE.iter().copied().filter(|v| !inverse.contains_key(*v)).collect();
        let present: Vec<&str> = open.iter().copied().filter(|v| expr.variables().iter().any(|x| x == v)).collect();
        match present.as_slice() {
            [] => {
                relations.insert(*name, SymPoly::var(name).sub(&expr));
            }
            [v] => {
                let eq = expr.sub(&SymPoly::var(name));
                let s = solve_for(&eq, v, &all_vars)
                    .ok_or_else(|| Error::ConstructionCheck(format!("cannot solve {name} for {v}")))?;
                inverse.insert(v.to_string(), s);
            }
            _ => return Err(Error::ConstructionCheck(format!("{name} involves several new parameters"))),
        }
    }
    let take =
        |n: &str| relations.get(n).cloned().ok_or_else(|| Error::ConstructionCheck(format!("no relation for {n}")));
    Ok(Relations { f2: take("Y2")?, f4: take("Y4")? })
}

/// [`synthesize_relations`], computed once.
pub fn relations() -> Result<&'static Relations> {
    static CELL: OnceLock<std::result::Result<Relations, Error>> = OnceLock::new();
    CELL.get_or_init(synthesize_relations).as_ref().map_err(Clone::clone)
}

/// Named constants entering the relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SymbolicConstant {
    Log2,
    Zeta3,
    Li4Half,
    C1,
}

impl SymbolicConstant {
    pub const ALL: [SymbolicConstant; 4] =
        [SymbolicConstant::Log2, SymbolicConstant::Zeta3, SymbolicConstant::Li4Half, SymbolicConstant::C1];

    pub fn symbol(self) -> &'static str {
        match self {
            SymbolicConstant::Log2 => LOG2,
            SymbolicConstant::Zeta3 => ZETA3,
            SymbolicConstant::Li4Half => LI4_HALF,
            SymbolicConstant::C1 => C1,
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.symbol() == s)
    }

    pub fn evaluate(self, v: &MotivicValues) -> PadicNumber {
        match self {
            SymbolicConstant::Log2 => v.log2.clone(),
            SymbolicConstant::Zeta3 => v.zeta3.clone(),
            SymbolicConstant::Li4Half => v.li4_half.clone(),
            SymbolicConstant::C1 => v.c1.clone(),
        }
    }
}

/// p-adic values of the constants. `c1` is computed, never assumed.
#[derive(Clone, Debug)]
pub struct MotivicValues {
    pub log2: PadicNumber,
    pub zeta3: PadicNumber,
    pub li3_half: PadicNumber,
    pub li4_half: PadicNumber,
    pub c1: PadicNumber,
}

impl MotivicValues {
    pub fn new(log2: PadicNumber, zeta3: PadicNumber, li3_half: PadicNumber, li4_half: PadicNumber) -> Result<Self> {
        let e = expand_li3_half(&log2, &li3_half, &zeta3)?;
        Ok(MotivicValues { log2, zeta3, li3_half, li4_half, c1: e.s })
    }
}

/// `Li_3(b) = s ζ(3) + t (log 2)^3` for `b ∈ {2, 1/2, -1}`.
#[derive(Clone, Debug)]
pub struct Li3Expansion {
    pub s: PadicNumber,
    pub t: PadicNumber,
    /// Set when reconstruction agrees at two precision levels.
    pub s_rational: Option<ReconstructedRational>,
    pub t_rational: Option<ReconstructedRational>,
}

/// Reconstructs at the full absolute precision of `x` and four digits
/// lower; returns the rational only if both agree.
pub fn stable_reconstruction(x: &PadicNumber) -> Option<ReconstructedRational> {
    let hi = x.abs_prec().unwrap_or(x.context().prec() as i64).min(x.context().prec() as i64);
    if hi < 8 {
        return None;
    }
    let a = rational_reconstruction(x, hi as u32).ok()?;
    let b = rational_reconstruction(x, (hi - 4) as u32).ok()?;
    (a == b).then_some(a)
}

/// `t = -(log b)^2 log(1-b) / (6 (log 2)^3)` and
/// `s = ((log b)^2 log(1-b)/6 + Li_3(b)) / ζ(3)`.
pub fn expand_li3(
    log_b: &PadicNumber,
    log_1mb: &PadicNumber,
    li3_b: &PadicNumber,
    log2: &PadicNumber,
    zeta3: &PadicNumber,
) -> Result<Li3Expansion> {
    if zeta3.is_zero() {
        return Err(Error::VanishingDenominator("zeta_p(3)".into()));
    }
    if log2.is_zero() {
        return Err(Error::VanishingDenominator("log_p(2)".into()));
    }
    let ctx = log2.context();
    let w = &(log_b * log_b) * log_1mb;
    let t = (-&w).checked_div(&(&PadicNumber::from_i64(ctx, 6) * &log2.pow(3)?))?;
    let num = &w.checked_div(&PadicNumber::from_i64(ctx, 6))? + li3_b;
    let s = num.checked_div(zeta3)?;
    Ok(Li3Expansion { s_rational: stable_reconstruction(&s), t_rational: stable_reconstruction(&t), s, t })
}

/// [`expand_li3`] at `b = 1/2`; `s` is the constant `c1`.
pub fn expand_li3_half(log2: &PadicNumber, li3_half: &PadicNumber, zeta3: &PadicNumber) -> Result<Li3Expansion> {
    let l = -log2;
    expand_li3(&l, &l, li3_half, log2, zeta3)
}

/// One monomial `coeff · X1^a Y1^b Y2^c Y3^d Y4^e` of a relation.
#[derive(Clone, Debug)]
pub struct FTerm {
    pub exponents: [u32; 5],
    pub coeff: PadicNumber,
    pub symbolic: SymPoly,
}

/// The relations evaluated p-adically, plus their coefficients in the
/// variables `log z`, `log(1-z)`, `Li_k(z)`.
#[derive(Clone, Debug)]
pub struct FCoefficients {
    pub c_p: PadicNumber,
    pub c1: PadicNumber,
    pub c1_rational: Option<ReconstructedRational>,
    pub f2: Vec<FTerm>,
    pub f4: Vec<FTerm>,
    /// Coefficient of `log z · log(1-z)` in `F_2`.
    pub f2_logz_log1mz: PadicNumber,
    /// Coefficient of `log z · Li_3` in `F_4`.
    pub f4_logz_li3: PadicNumber,
    /// Coefficient of `(log z)^3 log(1-z)` in `F_4`.
    pub f4_logz3_log1mz: PadicNumber,
    /// Valuation of `c1 · f4_logz_li3 - C^p`.
    pub c_p_consistency: i64,
}

fn evaluate_relation(rel: &SymPoly, v: &MotivicValues) -> Result<Vec<FTerm>> {
    let parts = rel.collect(&COORDS);
    let mut out = Vec::new();
    for (m, c) in parts {
        let mut exponents = [0u32; 5];
        for (i, name) in COORDS.iter().enumerate() {
            let e = m.exponent(name);
            if e < 0 {
                return Err(Error::ConstructionCheck("relation is not polynomial in the coordinates".into()));
            }
            exponents[i] = e as u32;
        }
        let value = |s: &str| {
            SymbolicConstant::from_symbol(s).map(|k| k.evaluate(v)).expect("relations only involve named constants")
        };
        let coeff = c.eval_padic(&v.log2, value)?;
        out.push(FTerm { exponents, coeff, symbolic: c });
    }
    Ok(out)
}

fn term_coeff(terms: &[FTerm], exps: [u32; 5], like: &PadicNumber) -> PadicNumber {
    terms.iter().find(|t| t.exponents == exps).map(|t| t.coeff.clone()).unwrap_or_else(|| like.zero_like())
}

/// `C^p = (log 2)^3/(24 ζ(3)) + Li_4(1/2)/(log 2 · ζ(3))`.
pub fn c_p(v: &MotivicValues) -> Result<PadicNumber> {
    let ctx = v.log2.context();
    let a = v.log2.pow(3)?.checked_div(&(&PadicNumber::from_i64(ctx, 24) * &v.zeta3))?;
    let b = v.li4_half.checked_div(&(&v.log2 * &v.zeta3))?;
    Ok(&a + &b)
}

/// Evaluates the synthesized relations at the given constants.
pub fn f_coefficients(v: &MotivicValues) -> Result<FCoefficients> {
    for (name, x) in [("zeta_p(3)", &v.zeta3), ("log_p(2)", &v.log2), ("c1", &v.c1)] {
        if x.is_zero() {
            return Err(Error::VanishingDenominator(name.into()));
        }
    }
    let rel = relations()?;
    let f2 = evaluate_relation(&rel.f2, v)?;
    let f4 = evaluate_relation(&rel.f4, v)?;
    let like = &v.log2;
    // Y1 = -log(1-z), so coefficients of X1^a Y1 change sign.
    let f2_logz_log1mz = -&term_coeff(&f2, [1, 1, 0, 0, 0], like);
    let f4_logz_li3 = term_coeff(&f4, [1, 0, 0, 1, 0], like);
    let f4_logz3_log1mz = -&term_coeff(&f4, [3, 1, 0, 0, 0], like);
    let c_p = c_p(v)?;
    let c_p_consistency = (&(&v.c1 * &f4_logz_li3) - &c_p).valuation();
    Ok(FCoefficients {
        c1_rational: stable_reconstruction(&v.c1),
        c1: v.c1.clone(),
        c_p,
        f2,
        f4,
        f2_logz_log1mz,
        f4_logz_li3,
        f4_logz3_log1mz,
        c_p_consistency,
    })
}

/// Matrices of `(F_φ)_k` for `k <= 3`: rows indexed by words in
/// `v_{-1}, v_{-2}, v_{-3}` of degree `k`, columns by the concrete basis of
/// weight `k` (`log 2`; `(log 2)^2`; `(log 2)^3, ζ(3)`).
#[derive(Clone, Debug)]
pub struct FphiMatrix {
    pub level: u32,
    pub rows: Vec<Word>,
    pub columns: Vec<MotPoly>,
    pub entries: Vec<Vec<PadicNumber>>,
}

pub fn v_letter(k: u32) -> Letter {
    Letter::new(&format!("v-{k}"), k)
}

fn fphi_of(m: &MotPoly, log2: &PadicNumber, zeta3: &PadicNumber) -> Result<ShufflePoly<PadicNumber>> {
    let mut out = ShufflePoly::zero();
    for (mono, c) in m.terms() {
        let c = c.as_rational().ok_or_else(|| Error::ConstructionCheck("symbolic coefficient".into()))?;
        let mut acc = ShufflePoly::word(Word::empty(), PadicNumber::from_ratio(log2.context(), &c));
        for (g, e) in mono.factors() {
            let f = match g {
                LOG2 => ShufflePoly::word(Word(vec![v_letter(1)]), log2.clone()),
                ZETA3 => ShufflePoly::word(Word(vec![v_letter(3)]), zeta3.clone()),
                other => return Err(Error::ConstructionCheck(format!("no Frobenius value for {other}"))),
            };
            for _ in 0..e {
                acc = acc.shuffle(&f);
            }
        }
        out = out.add(&acc);
    }
    Ok(out)
}

pub fn fphi_matrices(log2: &PadicNumber, zeta3: &PadicNumber) -> Result<Vec<FphiMatrix>> {
    let (v1, v2, v3) = (v_letter(1), v_letter(2), v_letter(3));
    let l = gen(LOG2);
    let levels = [
        (1, vec![Word::from_letters(&[&v1])], vec![l.clone()]),
        (2, vec![Word::from_letters(&[&v1, &v1]), Word::from_letters(&[&v2])], vec![l.pow(2)]),
        (
            3,
            vec![
                Word::from_letters(&[&v1, &v1, &v1]),
                Word::from_letters(&[&v1, &v2]),
                Word::from_letters(&[&v2, &v1]),
                Word::from_letters(&[&v3]),
            ],
            vec![l.pow(3), gen(ZETA3)],
        ),
    ];
    let mut out = Vec::new();
    for (level, rows, columns) in levels {
        let images: Vec<ShufflePoly<PadicNumber>> =
            columns.iter().map(|c| fphi_of(c, log2, zeta3)).collect::<Result<_>>()?;
        let entries = rows
            .iter()
            .map(|w| images.iter().map(|f| f.coeff(w).cloned().unwrap_or_else(|| log2.zero_like())).collect())
            .collect();
        out.push(FphiMatrix { level, rows, columns, entries });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motivic::poly::rat;
    use crate::padic::PadicContext;
    use num_rational::BigRational;

    fn r(n: i64) -> BigRational {
        rat(n, 1)
    }

    #[test]
    fn lambda_image_values() {
        let z = lambda_image(&r(0), &r(0), &r(0));
        assert!(z.coordinates().iter().all(|x| *x == r(0)));
        let o = lambda_image(&r(1), &r(1), &r(1));
        assert_eq!(o.coordinates(), [r(1), r(-1), r(-1), r(-1), r(-1), r(-1), r(-1), r(0)]);
        assert!(o.residuals.iter().all(|x| *x == r(0)));
    }

    #[test]
    fn lambda_image_symbolic() {
        let (a, b, d) = (SymPoly::var("a"), SymPoly::var("b"), SymPoly::var("d"));
        let im = lambda_image(&a, &b, &d);
        assert_eq!(im.x1111, a.pow(3).mul(&b).neg());
        assert_eq!(im.x13, a.mul(&d).neg());
        assert!(im.x31.is_zero());
        assert!(im.residuals.iter().all(SymPoly::is_zero));
    }

    #[test]
    fn relations_have_the_expected_shape() {
        let rel = synthesize_relations().unwrap();
        let v = |s: &str| SymPoly::var(s);
        let f2 = v("Y2").sub(&v("X1").mul(&v("Y1")).scale(&rat(1, 2)));
        assert_eq!(rel.f2, f2);
        // K = C^p / c1 with C^p = L^3/(24 Z) + H/(L Z).
        let inv = |s: &str| SymPoly::term(rat(1, 1), Monomial::var_pow(s, -1));
        let cp = v(LOG2).pow(3).mul(&inv(ZETA3)).scale(&rat(1, 24)).add(&v(LI4_HALF).mul(&inv(LOG2)).mul(&inv(ZETA3)));
        let k = cp.mul(&inv(C1));
        let x1 = v("X1");
        let f4 = v("Y4")
            .sub(&x1.pow(3).mul(&v("Y1")).scale(&rat(1, 24)))
            .add(&k.mul(&x1.mul(&v("Y3")).sub(&x1.pow(3).mul(&v("Y1")).scale(&rat(1, 6)))));
        assert_eq!(rel.f4, f4);
    }

    fn values(p: u64, n: u32, li4: Option<PadicNumber>) -> MotivicValues {
        let ctx = PadicContext::new(p, n).unwrap();
        let log2 = PadicNumber::from_frac(&ctx, 3 * p as i64, 7);
        let zeta3 = PadicNumber::from_frac(&ctx, (p * p * p) as i64, 5);
        let li3 =
            &PadicNumber::from_frac(&ctx, 7, 8) * &zeta3 + &log2.pow(3).unwrap() * &PadicNumber::from_frac(&ctx, 1, 6);
        let li4 = li4.unwrap_or_else(|| PadicNumber::from_frac(&ctx, p as i64, 9));
        MotivicValues::new(log2, zeta3, li3, li4).unwrap()
    }

    #[test]
    fn coefficients_at_sample_constants() {
        let v = values(11, 30, None);
        let f = f_coefficients(&v).unwrap();
        let ctx = v.log2.context();
        assert_eq!(f.f2_logz_log1mz, PadicNumber::from_frac(ctx, 1, 2));
        assert!(f.c_p_consistency >= 20);
        assert_eq!(f.c1_rational.unwrap().to_string(), "7/8");
        let expected = &(&f.f4_logz_li3 * &PadicNumber::from_frac(ctx, 1, 6)) + &PadicNumber::from_frac(ctx, 1, 24);
        assert!(f.f4_logz3_log1mz.agrees_with(&expected, 20));
    }

    #[test]
    fn vanishing_c_p_leaves_the_pure_term() {
        let base = values(7, 30, None);
        let ctx = base.log2.context().clone();
        let li4 = -&(&base.log2.pow(4).unwrap() * &PadicNumber::from_frac(&ctx, 1, 24));
        let v = values(7, 30, Some(li4));
        let f = f_coefficients(&v).unwrap();
        assert!(f.c_p.is_zero());
        assert!(f.f4_logz_li3.is_zero());
        assert!(f.f4_logz3_log1mz.agrees_with(&PadicNumber::from_frac(&ctx, 1, 24), 15));
    }

    #[test]
    fn zero_zeta_is_rejected() {
        let ctx = PadicContext::new(5, 10).unwrap();
        let l = PadicNumber::from_i64(&ctx, 5);
        let z = PadicNumber::zero_mod(&ctx, 10);
        assert!(matches!(expand_li3_half(&l, &l, &z), Err(Error::VanishingDenominator(_))));
    }

    #[test]
    fn li3_expansion_degenerate_point() {
        let ctx = PadicContext::new(13, 20).unwrap();
        let zero = PadicNumber::exact_zero(&ctx);
        let log2 = PadicNumber::from_i64(&ctx, 13);
        let zeta3 = PadicNumber::from_i64(&ctx, 13 * 13 * 13);
        let li3 = PadicNumber::from_frac(&ctx, 17, 3);
        let e = expand_li3(&zero, &log2, &li3, &log2, &zeta3).unwrap();
        assert!(e.s.agrees_with(&li3.checked_div(&zeta3).unwrap(), 15));
        assert!(e.t.is_zero());
    }

    #[test]
    fn fphi_levels() {
        let ctx = PadicContext::new(11, 20).unwrap();
        let log2 = PadicNumber::from_frac(&ctx, 11, 3);
        let zeta3 = PadicNumber::from_frac(&ctx, 121, 5);
        let m = fphi_matrices(&log2, &zeta3).unwrap();
        assert_eq!(m[0].entries, vec![vec![log2.clone()]]);
        let two = PadicNumber::from_i64(&ctx, 2);
        assert_eq!(m[1].entries[0][0], &two * &log2.pow(2).unwrap());
        assert!(m[1].entries[1][0].is_zero());
        let six = PadicNumber::from_i64(&ctx, 6);
        assert_eq!(m[2].entries[0][0], &six * &log2.pow(3).unwrap());
        assert_eq!(m[2].entries[3][1], zeta3);
        for (i, j) in [(0, 1), (1, 0), (1, 1), (2, 0), (2, 1), (3, 0)] {
            assert!(m[2].entries[i][j].is_zero());
        }
    }
}
