use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{Monomial, Poly, VarName};
use super::ExprError;

/// Binary field operations accepted by [`Expr::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An exact rational function `numerator / denominator` over ℚ.
///
/// Always held in canonical form: the two polynomials are coprime and the
/// denominator is monic under the graded lexicographic order, so structural
/// equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expr {
    num: Poly,
    den: Poly,
}

impl Expr {
    pub fn zero() -> Self {
        Expr { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Expr::from_poly(Poly::one())
    }

    pub fn int(n: i64) -> Self {
        Expr::from_poly(Poly::from_int(n))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator in rational literal");
        Expr::constant(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn constant(c: BigRational) -> Self {
        Expr::from_poly(Poly::constant(c))
    }

    pub fn var(v: &VarName) -> Self {
        Expr::from_poly(Poly::var(v.clone()))
    }

    pub fn from_poly(num: Poly) -> Self {
        Expr { num, den: Poly::one() }
    }

    /// Canonicalize `num / den`.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self, ExprError> {
        if den.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Expr::zero();
        }
        if let Some(c) = den.constant_value() {
            return Expr { num: num.scale(&c.recip()), den: Poly::one() };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            Expr { num, den }
        } else {
            let inv = lc.recip();
            Expr { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    /// Normalizes a pair already known to be coprime.
    fn reduced(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Expr::zero();
        }
        let lc = den.leading_coeff();
        if lc.is_one() {
            Expr { num, den }
        } else {
            let inv = lc.recip();
            Expr { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<VarName> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn contains_var(&self, v: &VarName) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    /// Rough size used to prefer simple pivots in elimination.
    pub fn complexity(&self) -> usize {
        if self.is_constant() {
            return 0;
        }
        self.num.num_terms()
            + self.den.num_terms()
            + (self.num.total_degree() + self.den.total_degree()) as usize
    }

    pub fn arith(&self, op: ArithOp, rhs: &Expr) -> Result<Expr, ExprError> {
        Ok(match op {
            ArithOp::Add => self + rhs,
            ArithOp::Sub => self - rhs,
            ArithOp::Mul => self * rhs,
            ArithOp::Div => self.checked_div(rhs)?,
        })
    }

    pub fn checked_div(&self, rhs: &Expr) -> Result<Expr, ExprError> {
        if rhs.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(self * &rhs.recip_unchecked())
    }

    pub fn recip(&self) -> Result<Expr, ExprError> {
        if self.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(self.recip_unchecked())
    }

    fn recip_unchecked(&self) -> Expr {
        // already coprime; only the scale needs fixing
        let lc = self.num.leading_coeff();
        let inv = lc.recip();
        Expr { num: self.den.scale(&inv), den: self.num.scale(&inv) }
    }

    pub fn scale(&self, c: &BigRational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: u32) -> Expr {
        Expr { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn diff(&self, v: &VarName) -> Expr {
        if !self.den.contains_var(v) {
            return Expr { num: self.num.diff(v), den: self.den.clone() }.renormalized();
        }
        // (p/q)' = (p'h − pk) / (g h²) with g = gcd(q, q'), h = q/g, k = q'/g;
        // a common factor of that pair must divide g
        let dq = self.den.diff(v);
        let g = gcd(&self.den, &dq);
        let h = self.den.div_exact(&g).expect("gcd divides");
        let k = dq.div_exact(&g).expect("gcd divides");
        let n = self.num.diff(v).mul(&h).sub(&self.num.mul(&k));
        if n.is_zero() {
            return Expr::zero();
        }
        let den = g.mul(&h).mul(&h);
        if g.is_constant() || gcd(&n, &g).is_one() {
            return Expr::reduced(n, den);
        }
        Expr::canonical(n, den)
    }

    fn renormalized(self) -> Expr {
        if self.num.is_zero() {
            Expr::zero()
        } else if self.den.is_one() {
            self
        } else {
            Expr::canonical(self.num, self.den)
        }
    }

    /// Antiderivative in `v` with zero constant term; requires the
    /// denominator to be free of `v`.
    pub fn antiderive_poly(&self, v: &VarName) -> Result<Expr, ExprError> {
        if self.den.contains_var(v) {
            return Err(ExprError::NonPolynomial(v.to_string()));
        }
        Ok(Expr { num: self.num.integrate(v), den: self.den.clone() }.renormalized())
    }

    /// Simultaneous substitution of variables by expressions.
    pub fn substitute(&self, bindings: &BTreeMap<VarName, Expr>) -> Result<Expr, ExprError> {
        if !self.vars().iter().any(|v| bindings.contains_key(v)) {
            return Ok(self.clone());
        }
        let mut cache: BTreeMap<(VarName, u32), Expr> = BTreeMap::new();
        let n = substitute_poly(&self.num, bindings, &mut cache);
        let d = substitute_poly(&self.den, bindings, &mut cache);
        if d.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(&n * &d.recip_unchecked())
    }

    pub fn eval(&self, pt: &RationalPoint) -> Result<BigRational, ExprError> {
        let lookup = |v: &VarName| pt.get(v).cloned();
        let d = self.den.eval(&lookup)?;
        if d.is_zero() {
            return Err(ExprError::ZeroDenominator);
        }
        let n = self.num.eval(&lookup)?;
        Ok(n / d)
    }
}

fn substitute_poly(
    p: &Poly,
    bindings: &BTreeMap<VarName, Expr>,
    cache: &mut BTreeMap<(VarName, u32), Expr>,
) -> Expr {
    let mut acc = Expr::zero();
    for (m, c) in p.terms() {
        let mut t = Expr::constant(c.clone());
        let mut kept = Monomial::one();
        for (v, e) in m.factors() {
            match bindings.get(v) {
                Some(val) => {
                    let key = (v.clone(), *e);
                    let pw = cache.entry(key).or_insert_with(|| val.pow(*e)).clone();
                    t = &t * &pw;
                }
                None => kept = kept.mul(&Monomial::var(v.clone(), *e)),
            }
        }
        if !kept.is_one() {
            t = &t * &Expr::from_poly(Poly::term(BigRational::one(), kept));
        }
        acc = &acc + &t;
    }
    acc
}

/// Assignment of exact rational values to variables.
pub type RationalPoint = BTreeMap<VarName, BigRational>;

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return Expr::from_poly(self.num.add(&rhs.num));
            }
            return Expr::canonical(self.num.add(&rhs.num), self.den.clone());
        }
        // a/b + c stays reduced: gcd(a + cb, b) = gcd(a, b) = 1
        if rhs.den.is_one() {
            return Expr::reduced(self.num.add(&rhs.num.mul(&self.den)), self.den.clone());
        }
        if self.den.is_one() {
            return Expr::reduced(self.num.mul(&rhs.den).add(&rhs.num), rhs.den.clone());
        }
        // only factors of g = gcd(b, d) can cancel in a/b + c/d
        let g = gcd(&self.den, &rhs.den);
        if g.is_one() {
            let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
            return Expr::reduced(num, self.den.mul(&rhs.den));
        }
        let ld = self.den.div_exact(&g).expect("gcd divides");
        let rd = rhs.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&rd).add(&rhs.num.mul(&ld));
        if num.is_zero() {
            return Expr::zero();
        }
        let h = gcd(&num, &g);
        if h.is_one() {
            return Expr::reduced(num, self.den.mul(&rd));
        }
        let num = num.div_exact(&h).expect("gcd divides");
        let g = g.div_exact(&h).expect("gcd divides");
        Expr::reduced(num, ld.mul(&rd).mul(&g))
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        self + &(-rhs)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        if self.is_zero() || rhs.is_zero() {
            return Expr::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Expr::from_poly(self.num.mul(&rhs.num));
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        // cross-cancel: inputs are reduced, so only num/den pairs across
        // operands can share factors
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let (a, d) = if g1.is_one() {
            (self.num.clone(), rhs.den.clone())
        } else {
            (self.num.div_exact(&g1).unwrap(), rhs.den.div_exact(&g1).unwrap())
        };
        let (c, b) = if g2.is_one() {
            (rhs.num.clone(), self.den.clone())
        } else {
            (rhs.num.div_exact(&g2).unwrap(), self.den.div_exact(&g2).unwrap())
        };
        let num = a.mul(&c);
        let den = b.mul(&d);
        let lc = den.leading_coeff();
        let inv = lc.recip();
        Expr { num: num.scale(&inv), den: den.scale(&inv) }
    }
}

impl Div for &Expr {
    type Output = Expr;
    /// Panics on a zero divisor; use [`Expr::checked_div`] for fallible input.
    fn div(self, rhs: &Expr) -> Expr {
        self.checked_div(rhs).expect("division by the zero expression")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr {
                (&self).$m(rhs)
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |a, b| &a + &b)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<&VarName> for Expr {
    fn from(v: &VarName) -> Self {
        Expr::var(v)
    }
}

impl fmt::Display for Expr {
    /// Canonical text; parses back to an identical value.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() == 1 {
            write!(f, "{}", self.num)?;
        } else {
            write!(f, "({})", self.num)?;
        }
        let simple_den = self.den.num_terms() == 1
            && self.den.leading_coeff().is_one()
            && self.den.leading().is_some_and(|(m, _)| m.factors().len() == 1);
        if simple_den {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
