//! Dense linear algebra over an exact field.
//!
//! One elimination routine serves both pointwise work (rationals) and
//! generic work (rational functions). Pivots are chosen by cost, so constant
//! entries are preferred over ones that may vanish somewhere; the chosen
//! non-constant pivots are kept as the locus where a generic rank can drop.

use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Expr, Poly};

pub trait Scalar: Clone + PartialEq + Debug {
    fn fzero() -> Self;
    fn fone() -> Self;
    fn is_fzero(&self) -> bool;
    fn fadd(&self, o: &Self) -> Self;
    fn fsub(&self, o: &Self) -> Self;
    fn fmul(&self, o: &Self) -> Self;
    /// `o` is nonzero.
    fn fdiv(&self, o: &Self) -> Self;
    fn fneg(&self) -> Self;
    /// 0 for a nonzero constant; larger means less attractive as a pivot.
    fn pivot_cost(&self) -> usize;
}

impl Scalar for BigRational {
    fn fzero() -> Self {
        Zero::zero()
    }
    fn fone() -> Self {
        One::one()
    }
    fn is_fzero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fdiv(&self, o: &Self) -> Self {
        self / o
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn pivot_cost(&self) -> usize {
        0
    }
}

impl Scalar for Expr {
    fn fzero() -> Self {
        Expr::zero()
    }
    fn fone() -> Self {
        Expr::one()
    }
    fn is_fzero(&self) -> bool {
        Expr::is_zero(self)
    }
    fn fadd(&self, o: &Self) -> Self {
        self + o
    }
    fn fsub(&self, o: &Self) -> Self {
        self - o
    }
    fn fmul(&self, o: &Self) -> Self {
        self * o
    }
    fn fdiv(&self, o: &Self) -> Self {
        self / o
    }
    fn fneg(&self) -> Self {
        -self
    }
    fn pivot_cost(&self) -> usize {
        self.complexity()
    }
}

pub type Matrix<T> = Vec<Vec<T>>;

/// Reduced row echelon form with the pivot history.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    /// Nonzero rows of the reduced form; row `i` has a 1 in column `pivots[i]`.
    pub rows: Matrix<T>,
    pub pivots: Vec<usize>,
    /// Pivot values at the moment they were chosen.
    pub pivot_values: Vec<T>,
    /// Original row index of each pivot row.
    pub source_rows: Vec<usize>,
    pub ncols: usize,
}

impl<T: Scalar> Echelon<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Kernel basis: one vector per free column, with a 1 in that column.
    pub fn kernel(&self) -> Matrix<T> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![T::fzero(); self.ncols];
                v[f] = T::fone();
                for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                    v[pc] = row[f].fneg();
                }
                v
            })
            .collect()
    }
}

impl Echelon<Expr> {
    /// Monic numerators of the non-constant pivots: the rank may drop only
    /// where one of them vanishes (or where an input entry has a pole).
    pub fn loci(&self) -> Vec<Poly> {
        let mut out: Vec<Poly> = Vec::new();
        for p in &self.pivot_values {
            if !p.is_constant() {
                let n = p.numer().monic();
                if !out.contains(&n) {
                    out.push(n);
                }
            }
        }
        out
    }
}

/// Row-reduce with cost-ordered full pivoting; ties go to the leftmost
/// column, then the topmost row.
pub fn rref<T: Scalar>(m: &[Vec<T>], ncols: usize) -> Echelon<T> {
    rref_restricted(m, ncols, ncols)
}

/// As [`rref`], but pivots are only taken in the first `usable` columns.
fn rref_restricted<T: Scalar>(m: &[Vec<T>], ncols: usize, usable: usize) -> Echelon<T> {
    let mut rows: Matrix<T> = m.to_vec();
    let mut origin: Vec<usize> = (0..rows.len()).collect();
    for r in &rows {
        assert_eq!(r.len(), ncols, "ragged matrix");
    }
    let mut pivots = Vec::new();
    let mut pivot_values = Vec::new();
    let mut k = 0;
    while k < rows.len() {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in rows.iter().enumerate().skip(k) {
            for (j, x) in row.iter().enumerate().take(usable) {
                if pivots.contains(&j) || x.is_fzero() {
                    continue;
                }
                let key = (x.pivot_cost(), j, i);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
        let Some((_, pc, pr)) = best else { break };
        rows.swap(k, pr);
        origin.swap(k, pr);
        let pv = rows[k][pc].clone();
        let inv_row: Vec<T> = if pv.pivot_cost() == 0 && pv == T::fone() {
            rows[k].clone()
        } else {
            rows[k].iter().map(|x| if x.is_fzero() { T::fzero() } else { x.fdiv(&pv) }).collect()
        };
        rows[k] = inv_row;
        for i in 0..rows.len() {
            if i == k || rows[i][pc].is_fzero() {
                continue;
            }
            let f = rows[i][pc].clone();
            for j in 0..ncols {
                if rows[k][j].is_fzero() {
                    continue;
                }
                let t = f.fmul(&rows[k][j]);
                rows[i][j] = rows[i][j].fsub(&t);
            }
        }
        pivots.push(pc);
        pivot_values.push(pv);
        k += 1;
    }
    rows.truncate(k);
    origin.truncate(k);
    Echelon { rows, pivots, pivot_values, source_rows: origin, ncols }
}

pub fn rank<T: Scalar>(m: &[Vec<T>], ncols: usize) -> usize {
    rref(m, ncols).rank()
}

pub fn kernel<T: Scalar>(m: &[Vec<T>], ncols: usize) -> Matrix<T> {
    rref(m, ncols).kernel()
}

/// Some solution of `m x = rhs`, or `None` if inconsistent.
pub fn solve<T: Scalar>(m: &[Vec<T>], ncols: usize, rhs: &[T]) -> Option<Vec<T>> {
    assert_eq!(m.len(), rhs.len());
    let aug: Matrix<T> = m
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    // pivot only among the original columns
    let ech = rref_restricted(&aug, ncols + 1, ncols);
    let mut x = vec![T::fzero(); ncols];
    for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
        x[pc] = row[ncols].clone();
    }
    // consistency: every equation holds
    for (r, b) in m.iter().zip(rhs) {
        let mut s = T::fzero();
        for (a, xi) in r.iter().zip(&x) {
            if !a.is_fzero() && !xi.is_fzero() {
                s = s.fadd(&a.fmul(xi));
            }
        }
        if s != *b {
            return None;
        }
    }
    Some(x)
}

/// Inverse of a square matrix, or `None` if singular.
pub fn inverse<T: Scalar>(m: &[Vec<T>]) -> Option<Matrix<T>> {
    let n = m.len();
    let aug: Matrix<T> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            assert_eq!(r.len(), n, "inverse of a non-square matrix");
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { T::fone() } else { T::fzero() }));
            r
        })
        .collect();
    let ech = rref_restricted(&aug, 2 * n, n);
    if ech.rank() < n {
        return None;
    }
    let mut inv = vec![vec![T::fzero(); n]; n];
    for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
        inv[pc] = row[n..].to_vec();
    }
    Some(inv)
}

pub fn mat_vec<T: Scalar>(m: &[Vec<T>], v: &[T]) -> Vec<T> {
    m.iter()
        .map(|r| {
            r.iter().zip(v).fold(T::fzero(), |s, (a, b)| {
                if a.is_fzero() || b.is_fzero() {
                    s
                } else {
                    s.fadd(&a.fmul(b))
                }
            })
        })
        .collect()
}

/// Sample points for rank certificates: small rationals, fixed sequence.
fn sample_point(vars: &std::collections::BTreeSet<super::VarName>, seed: u64) -> super::RationalPoint {
    let mut state = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ 0x2545_f491_4f6c_dd1d;
    vars.iter()
        .map(|v| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let n = (state % 61) as i64 - 30;
            let d = (state >> 32) % 7 + 1;
            (v.clone(), BigRational::new(n.into(), (d as i64).into()))
        })
        .collect()
}

/// Generic rank of a matrix of rational functions.
///
/// The rank at a point never exceeds the generic rank, so a point reaching
/// the largest possible value settles it; otherwise fraction-free
/// elimination on the cleared polynomial matrix decides.
pub fn generic_rank(m: &[Vec<Expr>], ncols: usize) -> usize {
    let full = m.len().min(ncols);
    let vars: std::collections::BTreeSet<super::VarName> = m.iter().flatten().flat_map(|e| e.vars()).collect();
    for seed in 0..2 {
        let pt = sample_point(&vars, seed);
        if let Ok(num) = eval_matrix(m, &pt) {
            if rank(&num, ncols) == full {
                return full;
            }
        }
    }
    bareiss_rank(m, ncols)
}

fn bareiss_rank(m: &[Vec<Expr>], ncols: usize) -> usize {
    bareiss(m, ncols).0
}

/// Fraction-free elimination: the generic rank and the monic non-constant
/// pivots. Each pivot is a minor of the denominator-cleared matrix, so off
/// their zeros (and off poles) the rank equals the generic rank.
pub fn bareiss(m: &[Vec<Expr>], ncols: usize) -> (usize, Vec<Poly>) {
    // clear denominators row by row
    let mut a: Vec<Vec<Poly>> = m
        .iter()
        .map(|row| {
            let mut l = Poly::one();
            for e in row {
                if !e.denom().is_one() {
                    let g = super::gcd(&l, e.denom());
                    l = l.mul(&e.denom().div_exact(&g).expect("gcd divides"));
                }
            }
            row.iter()
                .map(|e| e.numer().mul(&l.div_exact(e.denom()).expect("lcm is a multiple")))
                .collect()
        })
        .collect();
    let nrows = a.len();
    let mut used = vec![false; ncols];
    let mut prev = Poly::one();
    let mut loci = Vec::new();
    let mut r = 0;
    while r < nrows {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(r) {
            for (j, x) in row.iter().enumerate() {
                if used[j] || x.is_zero() {
                    continue;
                }
                let key = (x.num_terms(), j, i);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
        let Some((_, pc, pr)) = best else { break };
        a.swap(r, pr);
        used[pc] = true;
        let piv = a[r][pc].clone();
        for i in r + 1..nrows {
            let f = a[i][pc].clone();
            for j in 0..ncols {
                let v = piv.mul(&a[i][j]).sub(&f.mul(&a[r][j]));
                a[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        if !piv.is_constant() {
            let p = piv.monic();
            if !loci.contains(&p) {
                loci.push(p);
            }
        }
        prev = piv;
        r += 1;
    }
    (r, loci)
}

/// Evaluate a matrix of expressions at a point.
pub fn eval_matrix(
    m: &[Vec<Expr>],
    pt: &super::RationalPoint,
) -> Result<Matrix<BigRational>, super::ExprError> {
    m.iter().map(|r| r.iter().map(|e| e.eval(pt)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::ex;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn rational_rank_and_kernel() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        assert_eq!(rank(&m, 3), 1);
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&m, v).iter().all(|x| x.is_fzero()));
        }
    }

    #[test]
    fn symbolic_kernel_prefers_constant_pivots() {
        // rows of the Cartan fiber map: rank one, kernel of dim two
        let m = vec![
            vec![ex("0"), ex("t^2"), ex("t")],
            vec![ex("0"), ex("t"), ex("1")],
        ];
        let e = rref(&m, 3);
        assert_eq!(e.rank(), 1);
        assert_eq!(e.pivots, vec![2]);
        assert!(e.loci().is_empty());
        let k = e.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&m, v).iter().all(|x| x.is_fzero()));
        }
    }

    #[test]
    fn records_nonconstant_pivot() {
        let m = vec![vec![ex("t"), ex("0")], vec![ex("0"), ex("t - 1")]];
        let e = rref(&m, 2);
        assert_eq!(e.rank(), 2);
        assert_eq!(e.loci().len(), 2);
    }

    #[test]
    fn solve_and_inverse() {
        let m = vec![vec![ex("1"), ex("x")], vec![ex("0"), ex("y")]];
        let inv = inverse(&m).unwrap();
        assert_eq!(inv[0][1], ex("-x/y"));
        assert_eq!(inv[1][1], ex("1/y"));
        let x = solve(&m, 2, &[ex("1"), ex("y")]).unwrap();
        assert_eq!(x, vec![ex("1 - x"), ex("1")]);
        let sing = vec![vec![q(1), q(1)], vec![q(1), q(1)]];
        assert!(inverse(&sing).is_none());
        assert!(solve(&sing, 2, &[q(0), q(1)]).is_none());
    }
}
