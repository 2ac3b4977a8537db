//! Reduced coproducts of polylogarithmic motivic periods.
//!
//! Elements are polynomials in generators (`log^U b`, `Li^U_k b`, `log^U 2`,
//! `ζ^U(3)`, ...) with coefficients in `Q[c1^±1]`. The reduced coproduct of a
//! generator comes from the κ-matrix, `d(κ_ij) = Σ_{i<l<j} κ_il ⊗ κ_lj`, and
//! is extended multiplicatively through `Δ = 1⊗x + x⊗1 + d`.

use std::collections::BTreeMap;

use super::matrix::{alpha_matrix, UnipotentMatrix};
use super::poly::{rat, Monomial, Poly, SymPoly};
use super::shuffle::{Letter, ShufflePoly, Word};
use crate::{Error, Result};

/// Polynomials in motivic generators over `Q[c1^±1]`.
pub type MotPoly = Poly<SymPoly>;

pub const LOG_B: &str = "log(b)";
pub const LOG_1MB: &str = "log(1-b)";
pub const LOG2: &str = "log(2)";
pub const ZETA3: &str = "zeta(3)";
pub const LI4_HALF: &str = "Li4(1/2)";
/// The scalar `c1` with `Li3(1/2) = c1·ζ(3) + (log 2)^3/6`.
pub const C1: &str = "c1";

pub fn li_b(k: usize) -> String {
    format!("Li{k}(b)")
}

pub fn gen(name: &str) -> MotPoly {
    MotPoly::var(name)
}

fn q(n: i64, d: i64) -> SymPoly {
    SymPoly::from_q(rat(n, d))
}

/// A finite sum of pure tensors of generator monomials.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Tensor {
    terms: BTreeMap<Vec<Monomial>, SymPoly>,
}

impl Tensor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn pure(factors: Vec<Monomial>, c: SymPoly) -> Self {
        let mut t = Self::zero();
        t.add_term(factors, &c);
        t
    }

    /// `a ⊗ b`, expanded bilinearly.
    pub fn of(a: &MotPoly, b: &MotPoly) -> Self {
        let mut t = Self::zero();
        for (m1, c1) in a.terms() {
            for (m2, c2) in b.terms() {
                t.add_term(vec![m1.clone(), m2.clone()], &c1.mul(c2));
            }
        }
        t
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Monomial>, &SymPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &[Monomial]) -> SymPoly {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, key: Vec<Monomial>, c: &SymPoly) {
        let next = match self.terms.get(&key) {
            Some(x) => x.add(c),
            None => c.clone(),
        };
        if next.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, next);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&q(-1, 1)))
    }

    pub fn scale(&self, c: &SymPoly) -> Self {
        let mut out = Self::zero();
        for (k, x) in &self.terms {
            out.add_term(k.clone(), &x.mul(c));
        }
        out
    }

    /// Factorwise product in the tensor power of the algebra.
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                assert_eq!(k1.len(), k2.len(), "tensor arity mismatch");
                let key = k1.iter().zip(k2).map(|(a, b)| a.mul(b)).collect();
                out.add_term(key, &c1.mul(c2));
            }
        }
        out
    }

    /// Replaces every factor monomial by a polynomial and expands.
    pub fn substitute(&self, f: &impl Fn(&Monomial) -> MotPoly) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            let mut acc = vec![(Vec::new(), c.clone())];
            for m in k {
                let image = f(m);
                let mut next = Vec::new();
                for (key, coeff) in &acc {
                    for (m2, c2) in image.terms() {
                        let mut key2: Vec<Monomial> = key.clone();
                        key2.push(m2.clone());
                        next.push((key2, coeff.mul(c2)));
                    }
                }
                acc = next;
            }
            for (key, coeff) in acc {
                out.add_term(key, &coeff);
            }
        }
        out
    }
}

/// Substitutes generators inside a polynomial.
pub fn substitute_generators(p: &MotPoly, f: &impl Fn(&str) -> Option<MotPoly>) -> MotPoly {
    let mut out = MotPoly::zero();
    for (m, c) in p.terms() {
        let mut t = MotPoly::constant(c.clone());
        for (name, e) in m.factors() {
            assert!(e >= 0, "motivic generators do not have inverses");
            let base = f(name).unwrap_or_else(|| gen(name));
            t = t.mul(&base.pow(e as u32));
        }
        out = out.add(&t);
    }
    out
}

/// Reduced coproducts of generators; unlisted generators are primitive.
#[derive(Clone, Debug, Default)]
pub struct Coproduct {
    rules: BTreeMap<String, Tensor>,
}

impl Coproduct {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_rule(mut self, generator: &str, d: Tensor) -> Self {
        self.rules.insert(generator.to_string(), d);
        self
    }

    fn full_generator(&self, g: &str) -> Tensor {
        let one = Monomial::one();
        let gm = Monomial::var(g);
        let base = Tensor::pure(vec![one.clone(), gm.clone()], q(1, 1)).add(&Tensor::pure(vec![gm, one], q(1, 1)));
        match self.rules.get(g) {
            Some(d) => base.add(d),
            None => base,
        }
    }

    /// `d(m) = Δ(m) - 1⊗m - m⊗1`, with `d(1) = 0`.
    pub fn reduced_monomial(&self, m: &Monomial) -> Tensor {
        if m.is_one() {
            return Tensor::zero();
        }
        let one = Monomial::one();
        let mut acc = Tensor::pure(vec![one.clone(), one.clone()], q(1, 1));
        for (g, e) in m.factors() {
            assert!(e >= 0, "motivic generators do not have inverses");
            let dg = self.full_generator(g);
            for _ in 0..e {
                acc = acc.mul(&dg);
            }
        }
        acc.sub(&Tensor::pure(vec![one.clone(), m.clone()], q(1, 1))).sub(&Tensor::pure(vec![m.clone(), one], q(1, 1)))
    }

    pub fn reduced(&self, p: &MotPoly) -> Tensor {
        let mut out = Tensor::zero();
        for (m, c) in p.terms() {
            out = out.add(&self.reduced_monomial(m).scale(c));
        }
        out
    }

    /// `d` applied to factor `k` of every pure tensor.
    pub fn apply_at(&self, t: &Tensor, k: usize) -> Tensor {
        let mut out = Tensor::zero();
        for (key, c) in t.terms() {
            for (dk, c2) in self.reduced_monomial(&key[k]).terms() {
                let mut nk = key[..k].to_vec();
                nk.extend(dk.iter().cloned());
                nk.extend(key[k + 1..].iter().cloned());
                out.add_term(nk, &c.mul(c2));
            }
        }
        out
    }
}

/// `d(κ_ij) = Σ_{i<l<j} κ_il ⊗ κ_lj`.
pub fn reduced_coproduct(i: usize, j: usize, m: &UnipotentMatrix<MotPoly>) -> Tensor {
    let mut out = Tensor::zero();
    for l in i + 1..j {
        out = out.add(&Tensor::of(m.entry(i, l), m.entry(l, j)));
    }
    out
}

/// The `(n+1)×(n+1)` κ-matrix of a generic point `b`: the Albanese matrix
/// with entries `log^U b`, `-log^U(1-b)`, `Li^U_k b`.
pub fn kappa_matrix(n: usize) -> UnipotentMatrix<MotPoly> {
    let mut li = vec![gen(LOG_1MB).neg()];
    li.extend((2..=n).map(|k| gen(&li_b(k))));
    alpha_matrix(&gen(LOG_B), &li)
}

/// Coproduct rules for `Li^U_k b`, `k <= n`, read off the κ-matrix.
pub fn generic_coproduct(n: usize) -> Coproduct {
    let kappa = kappa_matrix(n);
    (2..=n).fold(Coproduct::new(), |c, k| c.with_rule(&li_b(k), reduced_coproduct(n - k, n, &kappa)))
}

/// Solves `Σ r_i cols[i] = target` over `Q[c1^±1]` by elimination with
/// monomial pivots. Columns without a pivot get coefficient zero.
pub fn solve_linear<K: Ord + Clone>(
    cols: &[BTreeMap<K, SymPoly>],
    target: &BTreeMap<K, SymPoly>,
) -> Result<Vec<SymPoly>> {
    let mut keys: Vec<K> = cols.iter().flat_map(|c| c.keys().cloned()).chain(target.keys().cloned()).collect();
    keys.sort();
    keys.dedup();
    let n = cols.len();
    let mut rows: Vec<Vec<SymPoly>> = keys
        .iter()
        .map(|k| {
            let mut r: Vec<SymPoly> = cols.iter().map(|c| c.get(k).cloned().unwrap_or_default()).collect();
            r.push(target.get(k).cloned().unwrap_or_default());
            r
        })
        .collect();
    let mut pivot_row = vec![None; n];
    let mut used = vec![false; rows.len()];
    for c in 0..n {
        let Some(r) = (0..rows.len()).find(|&r| !used[r] && rows[r][c].monomial_inverse().is_some()) else {
            if rows.iter().enumerate().any(|(r, row)| !used[r] && !row[c].is_zero()) {
                return Err(Error::ConstructionCheck("non-invertible pivot in linear solve".into()));
            }
            continue;
        };
        let inv = rows[r][c].monomial_inverse().expect("checked");
        rows[r] = rows[r].iter().map(|x| x.mul(&inv)).collect();
        for r2 in 0..rows.len() {
            if r2 != r && !rows[r2][c].is_zero() {
                let f = rows[r2][c].clone();
                let pr = rows[r].clone();
                rows[r2] = rows[r2].iter().zip(&pr).map(|(x, y)| x.sub(&f.mul(y))).collect();
            }
        }
        used[r] = true;
        pivot_row[c] = Some(r);
    }
    if rows.iter().enumerate().any(|(r, row)| !used[r] && !row[n].is_zero()) {
        return Err(Error::ConstructionCheck("target is not in the span".into()));
    }
    Ok(pivot_row.iter().map(|r| r.map(|r| rows[r][n].clone()).unwrap_or_default()).collect())
}

fn tensor_map(t: &Tensor) -> BTreeMap<Vec<Monomial>, SymPoly> {
    t.terms().map(|(k, c)| (k.clone(), c.clone())).collect()
}

/// Expansions of `Li^U_k(1/2)` in `log^U 2`, `ζ^U(3)`, `Li^U_4(1/2)`.
#[derive(Clone, Debug)]
pub struct HalfExpansions {
    pub li2: MotPoly,
    pub li3: MotPoly,
    /// `d(Li^U_4(1/2))` in the concrete generators.
    pub d_li4: Tensor,
}

fn specialize_half(t: &Tensor, li2: &MotPoly, li3: &MotPoly) -> Tensor {
    let minus_l = gen(LOG2).neg();
    let li2b = li_b(2);
    let li3b = li_b(3);
    let f = |name: &str| -> Option<MotPoly> {
        if name == LOG_B || name == LOG_1MB {
            Some(minus_l.clone())
        } else if name == li2b {
            Some(li2.clone())
        } else if name == li3b {
            Some(li3.clone())
        } else {
            None
        }
    };
    t.substitute(&|m: &Monomial| substitute_generators(&MotPoly::term(q(1, 1), m.clone()), &f))
}

/// Solves `d(Li^U_2(1/2)) ∈ d(Q·(log^U 2)^2)` and
/// `d(Li^U_3(1/2)) ∈ d(Q·(log^U 2)^3)`; the weight-3 kernel of `d` is
/// spanned by `ζ^U(3)`, whose coefficient is the symbol `c1`.
pub fn half_expansions() -> Result<HalfExpansions> {
    let generic = generic_coproduct(4);
    let concrete = Coproduct::new();
    let l = gen(LOG2);
    let d_li2_b = generic.reduced(&gen(&li_b(2)));
    let target2 = specialize_half(&d_li2_b, &MotPoly::zero(), &MotPoly::zero());
    let r = solve_linear(&[tensor_map(&concrete.reduced(&l.pow(2)))], &tensor_map(&target2))?;
    let li2 = l.pow(2).scale(&r[0]);

    let d_li3_b = generic.reduced(&gen(&li_b(3)));
    let target3 = specialize_half(&d_li3_b, &li2, &MotPoly::zero());
    if !concrete.reduced(&gen(ZETA3)).is_zero() {
        return Err(Error::ConstructionCheck("zeta(3) must be primitive".into()));
    }
    let t = solve_linear(&[tensor_map(&concrete.reduced(&l.pow(3)))], &tensor_map(&target3))?;
    let li3 = l.pow(3).scale(&t[0]).add(&gen(ZETA3).scale(&SymPoly::var(C1)));

    let d_li4_b = generic.reduced(&gen(&li_b(4)));
    let d_li4 = specialize_half(&d_li4_b, &li2, &li3);
    Ok(HalfExpansions { li2, li3, d_li4 })
}

/// Coproduct on the concrete generators with `Li^U_4(1/2)` included.
pub fn concrete_coproduct(exp: &HalfExpansions) -> Coproduct {
    Coproduct::new().with_rule(LI4_HALF, exp.d_li4.clone())
}

/// The tensor basis `l⊗ζ, l⊗l³, l²⊗l², l³⊗l, ζ⊗l` of the weight-4 part of
/// the reduced coproduct (`l = log^U 2`, `ζ = ζ^U(3)`).
pub fn tensor_basis() -> Vec<[Monomial; 2]> {
    let l = |e| Monomial::var_pow(LOG2, e);
    let z = Monomial::var(ZETA3);
    vec![[l(1), z.clone()], [l(1), l(3)], [l(2), l(2)], [l(3), l(1)], [z, l(1)]]
}

/// The basis `(log^U 2)^4, (log^U 2)ζ^U(3), Li^U_4(1/2)` of weight 4.
pub fn weight_four_basis() -> Vec<MotPoly> {
    vec![gen(LOG2).pow(4), gen(LOG2).mul(&gen(ZETA3)), gen(LI4_HALF)]
}

/// The 5×3 matrix of `d` on [`weight_four_basis`] together with a nonzero
/// 3×3 minor certifying rank 3 whenever `c1 ≠ 0`.
#[derive(Clone, Debug)]
pub struct DbMatrix {
    pub entries: Vec<Vec<SymPoly>>,
    pub minor_rows: [usize; 3],
    pub minor_det: SymPoly,
}

fn det3(m: &[Vec<SymPoly>; 3]) -> SymPoly {
    let t = |a: usize, b: usize, c: usize| m[0][a].mul(&m[1][b]).mul(&m[2][c]);
    t(0, 1, 2).add(&t(1, 2, 0)).add(&t(2, 0, 1)).sub(&t(2, 1, 0)).sub(&t(0, 2, 1)).sub(&t(1, 0, 2))
}

pub fn db_matrix() -> Result<DbMatrix> {
    let exp = half_expansions()?;
    let d = concrete_coproduct(&exp);
    let basis = tensor_basis();
    let mut entries = vec![vec![SymPoly::zero(); 3]; basis.len()];
    for (c, b) in weight_four_basis().iter().enumerate() {
        let t = d.reduced(b);
        let mut rest = t.clone();
        for (r, key) in basis.iter().enumerate() {
            entries[r][c] = t.coeff(key);
            rest = rest.sub(&Tensor::pure(key.to_vec(), t.coeff(key)));
        }
        if !rest.is_zero() {
            return Err(Error::ConstructionCheck(format!("d of basis element {c} leaves the tensor basis")));
        }
    }
    let minor_rows = [0, 1, 4];
    let minor = [entries[0].clone(), entries[1].clone(), entries[4].clone()];
    Ok(DbMatrix { minor_det: det3(&minor), entries, minor_rows })
}

pub fn nu(k: u32) -> Letter {
    Letter::new(&format!("ν{k}"), k)
}

/// Image of a concrete monomial in the shuffle algebra on `ν1, ν3` under
/// `log^U 2 -> φ_1`, `ζ^U(3) -> φ_3`.
pub fn to_shuffle(m: &Monomial) -> Result<ShufflePoly<SymPoly>> {
    let mut acc = ShufflePoly::word(Word::empty(), q(1, 1));
    for (g, e) in m.factors() {
        let letter = match g {
            LOG2 => nu(1),
            ZETA3 => nu(3),
            other => return Err(Error::ConstructionCheck(format!("no shuffle image for {other}"))),
        };
        let w = ShufflePoly::word(Word(vec![letter]), q(1, 1));
        for _ in 0..e {
            acc = acc.shuffle(&w);
        }
    }
    Ok(acc)
}

pub fn poly_to_shuffle(p: &MotPoly) -> Result<ShufflePoly<SymPoly>> {
    let mut out = ShufflePoly::zero();
    for (m, c) in p.terms() {
        out = out.add(&to_shuffle(m)?.scale(c));
    }
    Ok(out)
}

/// `Li^U_4(1/2)` in the abstract basis `φ_w`, `w ∈ {1111, 13, 31}`, found by
/// matching reduced coproducts with deconcatenation.
pub fn li4_half_abstract(exp: &HalfExpansions) -> Result<ShufflePoly<SymPoly>> {
    let mut target: BTreeMap<(Word, Word), SymPoly> = BTreeMap::new();
    for (key, c) in exp.d_li4.terms() {
        let a = to_shuffle(&key[0])?;
        let b = to_shuffle(&key[1])?;
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                let e = target.entry((wa.clone(), wb.clone())).or_default();
                *e = e.add(&c.mul(ca).mul(cb));
            }
        }
    }
    target.retain(|_, v| !v.is_zero());
    let (n1, n3) = (nu(1), nu(3));
    let words =
        [Word::from_letters(&[&n1, &n1, &n1, &n1]), Word::from_letters(&[&n1, &n3]), Word::from_letters(&[&n3, &n1])];
    let cols: Vec<BTreeMap<(Word, Word), SymPoly>> =
        words.iter().map(|w| ShufflePoly::word(w.clone(), q(1, 1)).reduced_deconcatenation()).collect();
    let r = solve_linear(&cols, &target)?;
    let mut out = ShufflePoly::zero();
    for (w, c) in words.iter().zip(r) {
        out.add_term(w.clone(), &c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(name: &str, e: i32) -> Monomial {
        Monomial::var_pow(name, e)
    }

    #[test]
    fn weight_one_entries_are_primitive() {
        let k = kappa_matrix(4);
        for i in 0..4 {
            assert!(reduced_coproduct(i, i + 1, &k).is_zero());
        }
    }

    #[test]
    fn li2_coproduct() {
        let d = generic_coproduct(2).reduced(&gen(&li_b(2)));
        assert_eq!(d, Tensor::of(&gen(LOG_B), &gen(LOG_1MB).neg()));
    }

    #[test]
    fn square_of_log_two() {
        let d = Coproduct::new().reduced(&gen(LOG2).pow(2));
        assert_eq!(d, Tensor::pure(vec![m(LOG2, 1), m(LOG2, 1)], q(2, 1)));
    }

    #[test]
    fn entry_rule_agrees_with_the_hopf_rule() {
        let k = kappa_matrix(4);
        let d = generic_coproduct(4);
        for i in 0..5 {
            for j in i + 1..5 {
                assert_eq!(reduced_coproduct(i, j, &k), d.reduced(k.entry(i, j)), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn coassociativity_on_kappa_entries() {
        let k = kappa_matrix(4);
        let d = generic_coproduct(4);
        for i in 0..5 {
            for j in i + 1..5 {
                let dk = d.reduced(k.entry(i, j));
                assert_eq!(d.apply_at(&dk, 0), d.apply_at(&dk, 1), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn values_at_one_half() {
        let e = half_expansions().unwrap();
        assert_eq!(e.li2, gen(LOG2).pow(2).scale(&q(-1, 2)));
        let expected = gen(LOG2).pow(3).scale(&q(1, 6)).add(&gen(ZETA3).scale(&SymPoly::var(C1)));
        assert_eq!(e.li3, expected);
    }

    #[test]
    fn db_matrix_columns() {
        let db = db_matrix().unwrap();
        let col = |c: usize| db.entries.iter().map(|r| r[c].clone()).collect::<Vec<_>>();
        let ints = |v: [i64; 5]| v.iter().map(|x| q(*x, 1)).collect::<Vec<_>>();
        assert_eq!(col(0), ints([0, 4, 6, 4, 0]));
        assert_eq!(col(1), ints([1, 0, 0, 0, 1]));
        assert_eq!(col(2), vec![SymPoly::var(C1).neg(), q(-1, 6), q(-1, 4), q(-1, 6), q(0, 1)]);
        assert_eq!(db.minor_det, SymPoly::var(C1).scale(&rat(-4, 1)));
    }

    #[test]
    fn li4_half_in_the_abstract_basis() {
        let e = half_expansions().unwrap();
        let a = li4_half_abstract(&e).unwrap();
        let (n1, n3) = (nu(1), nu(3));
        assert_eq!(a.coeff(&Word::from_letters(&[&n1, &n1, &n1, &n1])), Some(&q(-1, 1)));
        assert_eq!(a.coeff(&Word::from_letters(&[&n1, &n3])), Some(&SymPoly::var(C1).neg()));
        assert_eq!(a.coeff(&Word::from_letters(&[&n3, &n1])), None);
        let lz = poly_to_shuffle(&gen(LOG2).mul(&gen(ZETA3))).unwrap();
        assert_eq!(lz.len(), 2);
        let l4 = poly_to_shuffle(&gen(LOG2).pow(4)).unwrap();
        assert_eq!(l4.coeff(&Word::from_letters(&[&n1, &n1, &n1, &n1])), Some(&q(24, 1)));
    }
}
