//! Multivariate polynomial GCD over the rationals.
//!
//! Heuristic integer GCD first (evaluate one variable at a large integer,
//! recurse, rebuild by ξ-adic expansion, confirm by exact division). When
//! that gives up, a recursive primitive PRS. Results are monic under the
//! graded lexicographic order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{Monomial, Poly, VarName};

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m = ma.gcd(&mb);
    let a1 = if ma.is_one() { a.clone() } else { a.div_monomial(&ma).expect("content divides") };
    let b1 = if mb.is_one() { b.clone() } else { b.div_monomial(&mb).expect("content divides") };
    let g = if coprime_probe(&a1, &b1) {
        Poly::one()
    } else {
        heuristic(&a1, &b1).unwrap_or_else(|| gcd_reduced(&a1, &b1))
    };
    if m.is_one() {
        g.monic()
    } else {
        g.mul_monomial(&m).monic()
    }
}

const P: u64 = (1 << 61) - 1;

fn mulp(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powp(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulp(r, a);
        }
        a = mulp(a, a);
        e >>= 1;
    }
    r
}

fn invp(a: u64) -> u64 {
    powp(a, P - 2)
}

fn modp(n: &BigInt) -> u64 {
    let r = n.mod_floor(&BigInt::from(P));
    r.iter_u64_digits().next().unwrap_or(0)
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    (z ^ (z >> 31)) % P
}

/// Image of `p` in `F_P[x]` with every other variable sent to `vals`;
/// `None` if a coefficient denominator vanishes mod P.
fn image(p: &Poly, x: &VarName, vals: &dyn Fn(&VarName) -> u64) -> Option<Vec<u64>> {
    let mut out = vec![0u64; p.degree_in(x) as usize + 1];
    let mut powers: std::collections::HashMap<(&VarName, u32), u64> = std::collections::HashMap::new();
    for (m, c) in p.terms() {
        let mut t = modp(c.numer());
        if !c.denom().is_one() {
            let d = modp(c.denom());
            if d == 0 {
                return None;
            }
            t = mulp(t, invp(d));
        }
        let mut e = 0;
        for (v, k) in m.factors() {
            if v == x {
                e = *k as usize;
            } else {
                let pk = *powers.entry((v, *k)).or_insert_with(|| powp(vals(v), *k as u64));
                t = mulp(t, pk);
            }
        }
        out[e] = (out[e] + t) % P;
    }
    Some(out)
}

fn trim_p(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn rem_p(mut f: Vec<u64>, g: &[u64]) -> Vec<u64> {
    let inv = invp(*g.last().expect("nonzero divisor"));
    while f.len() >= g.len() {
        let q = mulp(*f.last().unwrap(), inv);
        let shift = f.len() - g.len();
        for (i, gi) in g.iter().enumerate() {
            f[i + shift] = (f[i + shift] + P - mulp(q, *gi)) % P;
        }
        trim_p(&mut f);
    }
    f
}

fn gcd_degree_p(mut f: Vec<u64>, mut g: Vec<u64>) -> usize {
    trim_p(&mut f);
    trim_p(&mut g);
    while !g.is_empty() {
        let r = rem_p(f, &g);
        f = g;
        g = r;
    }
    f.len().saturating_sub(1)
}

/// True only when `a` and `b` are certainly coprime: for every shared
/// variable a degree-preserving image in `F_P[x]` has a constant gcd.
fn coprime_probe(a: &Poly, b: &Poly) -> bool {
    let common: Vec<VarName> = a.vars().intersection(&b.vars()).cloned().collect();
    let mut state = 0x5eed_u64;
    'vars: for x in &common {
        let (da, db) = (a.degree_in(x) as usize, b.degree_in(x) as usize);
        for _ in 0..2 {
            let mut vals = std::collections::BTreeMap::new();
            for v in a.vars().union(&b.vars()) {
                vals.insert(v.clone(), splitmix(&mut state));
            }
            let at = |v: &VarName| vals[v];
            let (Some(fa), Some(fb)) = (image(a, x, &at), image(b, x, &at)) else {
                return false;
            };
            if fa[da] == 0 || fb[db] == 0 {
                continue;
            }
            if gcd_degree_p(fa, fb) == 0 {
                continue 'vars;
            }
            return false;
        }
        return false;
    }
    true
}

/// Integer-coefficient multiple of `p` with coprime coefficients.
fn integer_primitive(p: &Poly) -> Poly {
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for (_, c) in p.terms() {
        den = den.lcm(c.denom());
        num = num.gcd(c.numer());
    }
    if num.is_zero() {
        return Poly::zero();
    }
    p.scale(&BigRational::new(den, num))
}

fn max_norm(p: &Poly) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

fn int_content(p: &Poly) -> BigInt {
    p.terms().fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()))
}

/// `p` with `x` replaced by the integer `xi`.
fn eval_at(p: &Poly, x: &VarName, xi: &BigInt) -> Poly {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let (e, rest) = m.split_off(x);
        let k = num_traits::pow::pow(xi.clone(), e as usize);
        out.add_term(rest, c * BigRational::from_integer(k));
    }
    out
}

/// Inverse of evaluation at `xi` for coefficients below `xi/2` in size.
fn xi_adic(h: &Poly, x: &VarName, xi: &BigInt) -> Poly {
    let half = xi / 2;
    let mut out = Poly::zero();
    for (m, c) in h.terms() {
        let mut n = c.numer().clone();
        let mut e = 0u32;
        while !n.is_zero() {
            let mut d = n.mod_floor(xi);
            if d > half {
                d -= xi;
            }
            if !d.is_zero() {
                out.add_term(m.mul(&Monomial::var(x.clone(), e)), BigRational::from_integer(d.clone()));
            }
            n = (n - d) / xi;
            e += 1;
        }
    }
    out
}

const HEURISTIC_TRIES: usize = 6;

fn heuristic(a: &Poly, b: &Poly) -> Option<Poly> {
    let mut vars: Vec<VarName> = a.vars().union(&b.vars()).cloned().collect();
    vars.sort_by_key(|v| std::cmp::Reverse(a.degree_in(v).max(b.degree_in(v))));
    heuristic_z(&integer_primitive(a), &integer_primitive(b), &vars)
}

/// GCD over the integers of integer polynomials in `vars`, up to sign.
fn heuristic_z(f: &Poly, g: &Poly, vars: &[VarName]) -> Option<Poly> {
    let (cf, cg) = (int_content(f), int_content(g));
    let c = BigRational::from_integer(cf.gcd(&cg));
    if f.is_constant() || g.is_constant() {
        return Some(Poly::constant(c));
    }
    let f = f.scale(&BigRational::from_integer(cf).recip());
    let g = g.scale(&BigRational::from_integer(cg).recip());
    let Some((x, rest)) = vars.split_last() else {
        return Some(Poly::constant(c));
    };
    if !f.contains_var(x) && !g.contains_var(x) {
        return heuristic_z(&f, &g, rest).map(|h| h.scale(&c));
    }
    let two = BigInt::from(2);
    let mut xi = max_norm(&f).min(max_norm(&g)) * &two + BigInt::from(29);
    for _ in 0..HEURISTIC_TRIES {
        let (ff, gg) = (eval_at(&f, x, &xi), eval_at(&g, x, &xi));
        if !ff.is_zero() && !gg.is_zero() {
            if let Some(hh) = heuristic_z(&ff, &gg, rest) {
                let h = xi_adic(&hh, x, &xi);
                if !h.is_zero() {
                    let h = h.scale(&BigRational::from_integer(int_content(&h)).recip());
                    if f.div_exact(&h).is_some() && g.div_exact(&h).is_some() {
                        return Some(h.scale(&c));
                    }
                }
            }
        }
        xi = &xi * BigInt::from(73794) * xi.sqrt().sqrt() / BigInt::from(27011);
    }
    None
}

fn gcd_reduced(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let (am, bm) = (a.monic(), b.monic());
    if am == bm {
        return am;
    }
    // cheap divisibility probes before the PRS
    if b.total_degree() <= a.total_degree() && a.div_exact(b).is_some() {
        return bm;
    }
    if a.total_degree() <= b.total_degree() && b.div_exact(a).is_some() {
        return am;
    }

    let va = a.vars();
    let vb = b.vars();
    if let Some(v) = va.difference(&vb).next() {
        return gcd(&content(a, v), b);
    }
    if let Some(v) = vb.difference(&va).next() {
        return gcd(a, &content(b, v));
    }

    let x = va
        .iter()
        .min_by_key(|v| a.degree_in(v).max(b.degree_in(v)))
        .cloned()
        .expect("non-constant polynomial has a variable");

    let ua = a.to_univariate(&x);
    let ub = b.to_univariate(&x);
    let ca = content_of(&ua);
    let cb = content_of(&ub);
    let c = gcd(&ca, &cb);
    let pa = divide_coeffs(&ua, &ca);
    let pb = divide_coeffs(&ub, &cb);

    let (mut f, mut g) = if pa.len() >= pb.len() { (pa, pb) } else { (pb, pa) };
    loop {
        let r = prem(&f, &g);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            g = vec![Poly::one()];
            break;
        }
        let cr = content_of(&r);
        let mut r = divide_coeffs(&r, &cr);
        normalize_scale(&mut r);
        f = g;
        g = r;
    }
    let cg = content_of(&g);
    let g = divide_coeffs(&g, &cg);
    Poly::from_univariate(&g, &x).mul(&c)
}

/// GCD of the coefficients of `p` viewed as a polynomial in `v`.
fn content(p: &Poly, v: &VarName) -> Poly {
    content_of(&p.to_univariate(v))
}

fn content_of(coeffs: &[Poly]) -> Poly {
    let mut nonzero = coeffs.iter().filter(|c| !c.is_zero());
    let Some(first) = nonzero.next() else {
        return Poly::zero();
    };
    let mut g = first.monic();
    // small coefficients first tends to hit 1 sooner
    let mut rest: Vec<&Poly> = nonzero.collect();
    rest.sort_by_key(|c| (c.total_degree(), c.num_terms()));
    for c in rest {
        if g.is_one() {
            break;
        }
        g = gcd(&g, c);
    }
    g
}

fn divide_coeffs(coeffs: &[Poly], c: &Poly) -> Vec<Poly> {
    if c.is_one() {
        return coeffs.to_vec();
    }
    coeffs
        .iter()
        .map(|a| a.div_exact(c).expect("content divides every coefficient"))
        .collect()
}

fn normalize_scale(coeffs: &mut [Poly]) {
    if let Some(lead) = coeffs.last() {
        let lc = lead.leading_coeff();
        if !num_traits::Zero::is_zero(&lc) {
            let inv = num_traits::Inv::inv(lc);
            for c in coeffs.iter_mut() {
                *c = c.scale(&inv);
            }
        }
    }
}

fn trim(v: &mut Vec<Poly>) {
    while v.last().is_some_and(Poly::is_zero) {
        v.pop();
    }
}

/// Pseudo-remainder of univariate polynomials with polynomial coefficients.
fn prem(f: &[Poly], g: &[Poly]) -> Vec<Poly> {
    let mut r: Vec<Poly> = f.to_vec();
    trim(&mut r);
    let dg = g.len() - 1;
    let lcg = &g[dg];
    while r.len() > dg {
        let dr = r.len() - 1;
        let lcr = r[dr].clone();
        let shift = dr - dg;
        for c in r.iter_mut() {
            *c = c.mul(lcg);
        }
        for (k, gk) in g.iter().enumerate() {
            let t = gk.mul(&lcr);
            r[k + shift] = r[k + shift].sub(&t);
        }
        trim(&mut r);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn gcd_of_shared_factor() {
        let a = p("(x + y)*(x - 2*y + z)");
        let b = p("(x + y)*(z^2 + 1)");
        assert_eq!(gcd(&a, &b), p("x + y"));
    }

    #[test]
    fn gcd_coprime_is_one() {
        assert_eq!(gcd(&p("x^2 + y^2 + 1"), &p("x - y")), Poly::one());
    }

    #[test]
    fn gcd_with_monomial_content() {
        let a = p("x^3*y*(t - 1)");
        let b = p("x*y^2*(t - 1)^2");
        assert_eq!(gcd(&a, &b), p("x*y*(t - 1)").monic());
    }

    #[test]
    fn gcd_with_variable_only_on_one_side() {
        let a = p("(a*t + 1)*(b + 2)");
        let b = p("(a*t + 1)*t");
        assert_eq!(gcd(&a, &b), p("a*t + 1").monic());
    }

    #[test]
    fn gcd_three_variable_cubic() {
        let g = p("x*y - z^2 + 3");
        let a = g.mul(&p("x^2 + z"));
        let b = g.mul(&p("y^2 - x*z + 1"));
        assert_eq!(gcd(&a, &b), g.monic());
    }
}
