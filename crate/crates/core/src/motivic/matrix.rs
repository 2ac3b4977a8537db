//! Unitriangular matrices: Deligne's representation of the polylogarithmic
//! quotient, exact matrix logarithms and word evaluations.

use std::fmt;

use super::poly::{rat, Ring};
use super::shuffle::{Letter, ShufflePoly, Word};
use crate::{Error, Result};

type Rows<R> = Vec<Vec<R>>;

fn mat_mul<R: Ring>(a: &Rows<R>, b: &Rows<R>, like: &R) -> Rows<R> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = like.zero_like();
                    for (k, bk) in b.iter().enumerate() {
                        if !a[i][k].is_zero_elem() && !bk[j].is_zero_elem() {
                            acc = acc.r_add(&a[i][k].r_mul(&bk[j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn mat_add<R: Ring>(a: &Rows<R>, b: &Rows<R>) -> Rows<R> {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.r_add(y)).collect()).collect()
}

fn mat_scale<R: Ring>(a: &Rows<R>, c: &R) -> Rows<R> {
    a.iter().map(|r| r.iter().map(|x| x.r_mul(c)).collect()).collect()
}

fn zeros<R: Ring>(n: usize, like: &R) -> Rows<R> {
    vec![vec![like.zero_like(); n]; n]
}

fn identity_rows<R: Ring>(n: usize, like: &R) -> Rows<R> {
    let mut m = zeros(n, like);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = like.one_like();
    }
    m
}

/// An upper triangular matrix with ones on the diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct UnipotentMatrix<R> {
    rows: Rows<R>,
}

/// A strictly upper triangular matrix, e.g. the logarithm of a
/// [`UnipotentMatrix`].
#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentMatrix<R> {
    rows: Rows<R>,
}

fn check_square<R>(rows: &Rows<R>) -> Result<()> {
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
        return Err(Error::NotUnitriangular);
    }
    Ok(())
}

impl<R: Ring> UnipotentMatrix<R> {
    pub fn new(rows: Rows<R>) -> Result<Self> {
        check_square(&rows)?;
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let ok = match i.cmp(&j) {
                    std::cmp::Ordering::Greater => x.is_zero_elem(),
                    std::cmp::Ordering::Equal => x.r_sub(&x.one_like()).is_zero_elem(),
                    std::cmp::Ordering::Less => true,
                };
                if !ok {
                    return Err(Error::NotUnitriangular);
                }
            }
        }
        Ok(UnipotentMatrix { rows })
    }

    pub fn identity(size: usize, like: &R) -> Self {
        UnipotentMatrix { rows: identity_rows(size, like) }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &R {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &Rows<R> {
        &self.rows
    }

    fn like(&self) -> &R {
        &self.rows[0][0]
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.size() != o.size() {
            return Err(Error::NotUnitriangular);
        }
        Ok(UnipotentMatrix { rows: mat_mul(&self.rows, &o.rows, self.like()) })
    }

    /// `log(1 + ν) = Σ (-1)^(j+1) ν^j / j`, a finite sum.
    pub fn log(&self) -> NilpotentMatrix<R> {
        let like = self.like().clone();
        let n = self.size();
        let nu = mat_add(&self.rows, &mat_scale(&identity_rows(n, &like), &like.one_like().r_neg()));
        let mut acc = zeros(n, &like);
        let mut power = nu.clone();
        for j in 1..n {
            let sign = if j % 2 == 1 { 1 } else { -1 };
            acc = mat_add(&acc, &mat_scale(&power, &like.from_rational_like(&rat(sign, j as i64))));
            power = mat_mul(&power, &nu, &like);
        }
        NilpotentMatrix { rows: acc }
    }

    /// The `k`-th superdiagonal of `log M` for `k = 1 .. size-1`.
    pub fn superdiagonals(&self) -> Vec<Vec<R>> {
        self.log().superdiagonals()
    }
}

impl<R: Ring> NilpotentMatrix<R> {
    pub fn new(rows: Rows<R>) -> Result<Self> {
        check_square(&rows)?;
        for (i, row) in rows.iter().enumerate() {
            if row[..=i].iter().any(|x| !x.is_zero_elem()) {
                return Err(Error::NotUnitriangular);
            }
        }
        Ok(NilpotentMatrix { rows })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &R {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &Rows<R> {
        &self.rows
    }

    pub fn mul(&self, o: &Self) -> Self {
        NilpotentMatrix { rows: mat_mul(&self.rows, &o.rows, &self.rows[0][0]) }
    }

    pub fn exp(&self) -> UnipotentMatrix<R> {
        let like = self.rows[0][0].clone();
        let n = self.size();
        let mut acc = identity_rows(n, &like);
        let mut power = identity_rows(n, &like);
        for j in 1..n {
            power = mat_scale(&mat_mul(&power, &self.rows, &like), &like.from_rational_like(&rat(1, j as i64)));
            acc = mat_add(&acc, &power);
        }
        UnipotentMatrix { rows: acc }
    }

    pub fn superdiagonals(&self) -> Vec<Vec<R>> {
        let n = self.size();
        (1..n).map(|k| (0..n - k).map(|i| self.rows[i][i + k].clone()).collect()).collect()
    }

    /// The part of the matrix on the `k`-th superdiagonal.
    pub fn graded_piece(&self, k: usize) -> NilpotentMatrix<R> {
        let like = &self.rows[0][0];
        let n = self.size();
        let mut rows = zeros(n, like);
        for i in 0..n.saturating_sub(k) {
            rows[i][i + k] = self.rows[i][i + k].clone();
        }
        NilpotentMatrix { rows }
    }
}

impl<R: Ring + fmt::Display> fmt::Display for UnipotentMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// The `(n+1)×(n+1)` matrix attached to `L_x` and `L_{x^j y}` (`j = 0..n-1`):
/// entry `(i, j)` is `L_x^(j-i)/(j-i)!` for `j < n`, and the last column is
/// `(i, n) = -L_{x^(n-1-i) y}`.
pub fn claim_matrix<R: Ring>(l_x: &R, l_xjy: &[R]) -> UnipotentMatrix<R> {
    let n = l_xjy.len();
    let mut rows = identity_rows(n + 1, l_x);
    let mut powers = vec![l_x.one_like()];
    for k in 1..n {
        let next = powers[k - 1].r_mul(l_x).r_mul(&l_x.from_rational_like(&rat(1, k as i64)));
        powers.push(next);
    }
    for i in 0..n {
        rows[i][i + 1..n].clone_from_slice(&powers[1..n - i]);
        rows[i][n] = l_xjy[n - 1 - i].r_neg();
    }
    UnipotentMatrix { rows }
}

/// Checks `L_∅ = 1` and `L_u L_v = Σ_{w ∈ u ш v} L_w` for every pair of
/// words over `alphabet` with `|u| + |v| <= max_len`.
pub fn check_grouplike<R: Ring>(l: &impl Fn(&Word) -> R, alphabet: &[Letter], max_len: usize) -> Result<()> {
    let unit = l(&Word::empty());
    if !unit.r_sub(&unit.one_like()).is_zero_elem() {
        return Err(Error::NotGrouplike("coefficient of the empty word is not 1".into()));
    }
    let words = Word::all_up_to(alphabet, max_len);
    for u in words.iter().filter(|w| !w.is_empty()) {
        for v in words.iter().filter(|w| !w.is_empty() && w.len() + u.len() <= max_len) {
            let lhs = l(u).r_mul(&l(v));
            let mut rhs = unit.zero_like();
            for (w, k) in super::shuffle::shuffle(u, v).terms() {
                rhs = rhs.r_add(&l(w).r_mul(&unit.from_rational_like(k)));
            }
            if !lhs.r_sub(&rhs).is_zero_elem() {
                return Err(Error::NotGrouplike(format!("shuffle relation fails for ({u}, {v})")));
            }
        }
    }
    Ok(())
}

/// The matrix of a grouplike series `Σ L_w w` on words in `x, y`, acting on
/// the `(n+1)`-dimensional polylogarithmic quotient.
pub fn group_matrix<R: Ring>(l: impl Fn(&Word) -> R, x: &Letter, y: &Letter, n: usize) -> Result<UnipotentMatrix<R>> {
    check_grouplike(&l, &[x.clone(), y.clone()], n)?;
    let l_x = l(&Word(vec![x.clone()]));
    let l_xjy: Vec<R> = (0..n)
        .map(|j| {
            let mut w = vec![x.clone(); j];
            w.push(y.clone());
            l(&Word(w))
        })
        .collect();
    Ok(claim_matrix(&l_x, &l_xjy))
}

/// `l_x x + Σ_j l_j ad_x^j(y)` as a noncommutative polynomial.
pub fn lie_element<R: Ring>(l_x: &R, l_j: &[R], x: &Letter, y: &Letter) -> ShufflePoly<R> {
    let xs = ShufflePoly::word(Word(vec![x.clone()]), l_x.one_like());
    let mut ad = ShufflePoly::word(Word(vec![y.clone()]), l_x.one_like());
    let mut out = xs.scale(l_x);
    for c in l_j {
        out = out.add(&ad.scale(c));
        ad = xs.bracket(&ad);
    }
    out
}

/// The image of [`lie_element`] in the Lie algebra of the quotient:
/// superdiagonal `l_x`, last column `-l_j`.
pub fn lie_matrix<R: Ring>(l_x: &R, l_j: &[R]) -> NilpotentMatrix<R> {
    let n = l_j.len();
    let mut rows = zeros(n + 1, l_x);
    for i in 0..n {
        if i + 1 < n {
            rows[i][i + 1] = l_x.clone();
        }
        rows[i][n] = l_j[n - 1 - i].r_neg();
    }
    NilpotentMatrix { rows }
}

/// The unipotent Albanese matrix at a point: `L_x = log z` and
/// `L_{x^(j-1) y} = -Li_j(z)`; `li[k-1]` holds `Li_k(z)` with
/// `Li_1 = -log(1-z)`.
pub fn alpha_matrix<R: Ring>(log_z: &R, li: &[R]) -> UnipotentMatrix<R> {
    let l: Vec<R> = li.iter().map(Ring::r_neg).collect();
    claim_matrix(log_z, &l)
}

/// `M_{w_1} ··· M_{w_k}`, each letter mapped to a matrix by `m`.
pub fn word_product<R: Ring>(word: &Word, m: impl Fn(&Letter) -> NilpotentMatrix<R>, like: &R, size: usize) -> Rows<R> {
    let mut acc = identity_rows(size, like);
    for l in &word.0 {
        acc = mat_mul(&acc, &m(l).rows, like);
    }
    acc
}

/// `Li_3^{Fφ}(b)` on the words of degree 3 in `v_{-1}, v_{-2}, v_{-3}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Li3WordValues<R> {
    pub v1v1v1: R,
    pub v1v2: R,
    pub v2v1: R,
    pub v3: R,
}

/// Reads the north-east corner of the products of the graded pieces of
/// `log M`, `M` the 4×4 Albanese matrix of `b`.
pub fn li3_word_values<R: Ring>(log_b: &R, log_1mb: &R, li2: &R, li3: &R) -> Li3WordValues<R> {
    let m = alpha_matrix(log_b, &[log_1mb.r_neg(), li2.clone(), li3.clone()]);
    let lg = m.log();
    let v = |k: usize| lg.graded_piece(k);
    let corner = |mats: &[usize]| -> R {
        let mut acc = identity_rows(4, log_b);
        for &k in mats {
            acc = mat_mul(&acc, &v(k).rows, log_b);
        }
        acc[0][3].clone()
    };
    Li3WordValues { v1v1v1: corner(&[1, 1, 1]), v1v2: corner(&[1, 2]), v2v1: corner(&[2, 1]), v3: corner(&[3]) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motivic::poly::SymPoly;
    use num_rational::BigRational;

    fn sym(s: &str) -> SymPoly {
        SymPoly::var(s)
    }

    #[test]
    fn identity_has_zero_log() {
        let m = UnipotentMatrix::identity(4, &rat(0, 1));
        assert!(m.superdiagonals().iter().flatten().all(|x| *x == rat(0, 1)));
    }

    #[test]
    fn rejects_non_unitriangular() {
        let rows = vec![vec![rat(1, 1), rat(2, 1)], vec![rat(0, 1), rat(2, 1)]];
        assert_eq!(UnipotentMatrix::new(rows).unwrap_err(), Error::NotUnitriangular);
    }

    #[test]
    fn trivial_character_gives_identity() {
        let x = Letter::new("x", 1);
        let y = Letter::new("y", 1);
        let m = group_matrix(|w: &Word| if w.is_empty() { rat(1, 1) } else { rat(0, 1) }, &x, &y, 3).unwrap();
        assert_eq!(m, UnipotentMatrix::identity(4, &rat(0, 1)));
    }

    #[test]
    fn non_grouplike_is_rejected() {
        let x = Letter::new("x", 1);
        let y = Letter::new("y", 1);
        let l = |_: &Word| -> BigRational { rat(1, 1) };
        assert!(matches!(group_matrix(l, &x, &y, 2), Err(Error::NotGrouplike(_))));
    }

    #[test]
    fn albanese_superdiagonals() {
        let (lb, l1b, li2, li3) = (sym("lb"), sym("l1b"), sym("Li2"), sym("Li3"));
        let m = alpha_matrix(&lb, &[l1b.neg(), li2.clone(), li3.clone()]);
        let sd = m.superdiagonals();
        assert_eq!(sd[0], vec![lb.clone(), lb.clone(), l1b.neg()]);
        assert!(sd[1][0].is_zero());
        let half = SymPoly::from_q(rat(1, 2));
        assert_eq!(sd[1][1], half.mul(&lb).mul(&l1b).add(&li2));
        let expected = SymPoly::from_q(rat(-1, 12)).mul(&lb.pow(2)).mul(&l1b).sub(&half.mul(&lb).mul(&li2)).add(&li3);
        assert_eq!(sd[2][0], expected);
    }

    #[test]
    fn li3_words() {
        let (lb, l1b, li2, li3) = (sym("lb"), sym("l1b"), sym("Li2"), sym("Li3"));
        let w = li3_word_values(&lb, &l1b, &li2, &li3);
        assert_eq!(w.v1v1v1, lb.pow(2).mul(&l1b).neg());
        assert!(w.v2v1.is_zero());
        let half = SymPoly::from_q(rat(1, 2));
        assert_eq!(w.v1v2, half.mul(&lb.pow(2)).mul(&l1b).add(&lb.mul(&li2)));
        let v3 = li3_word_values(&lb, &l1b, &li2, &li3).v3;
        assert_eq!(v3, alpha_matrix(&lb, &[l1b.neg(), li2, li3]).superdiagonals()[2][0]);
    }

    #[test]
    fn exp_of_lie_matrix_is_the_group_matrix() {
        let x = Letter::new("x", 1);
        let y = Letter::new("y", 1);
        let lx = sym("a");
        let lj: Vec<SymPoly> = (0..4).map(|j| sym(&format!("c{j}"))).collect();
        let series = lie_element(&lx, &lj, &x, &y).exp_truncated(4, &SymPoly::int(1));
        let l = |w: &Word| series.coeff(w).cloned().unwrap_or_else(SymPoly::zero);
        let g = group_matrix(l, &x, &y, 4).unwrap();
        let e = lie_matrix(&lx, &lj).exp();
        assert_eq!(g, e);
        assert_eq!(g.log(), lie_matrix(&lx, &lj));
    }
}
