//! Random instances shared by the property suites.
#![allow(dead_code)]

use eds_core::exterior::{Chart, DForm, SmoothMap, VectorField};
use eds_core::pfaffian::PfaffSystem;
use eds_core::symcore::{var, Expr, Monomial, Poly};
use num_rational::BigRational;
use proptest::prelude::*;

pub fn chart(names: &[&str]) -> Chart {
    Chart::new(names).unwrap()
}

/// Polynomial with up to `terms` terms, small coefficients and exponents.
pub fn poly(names: &'static [&'static str], terms: usize, max_exp: u32) -> impl Strategy<Value = Poly> {
    let n = names.len();
    prop::collection::vec((-3i64..=3, prop::collection::vec(0..=max_exp, n)), 1..=terms).prop_map(move |ts| {
        let mut acc = Poly::zero();
        for (c, exps) in ts {
            let mut m = Monomial::one();
            for (name, e) in names.iter().zip(exps) {
                if e > 0 {
                    m = m.mul(&Monomial::var(var(name), e));
                }
            }
            acc = acc.add(&Poly::term(BigRational::from_integer(c.into()), m));
        }
        acc
    })
}

/// Polynomial, sometimes over `1 + c·v²` for a chart coordinate `v`.
pub fn expr(names: &'static [&'static str]) -> impl Strategy<Value = Expr> {
    expr_sized(names, 2)
}

pub fn expr_sized(names: &'static [&'static str], max_exp: u32) -> impl Strategy<Value = Expr> {
    let n = names.len();
    (poly(names, 3, max_exp), prop::option::weighted(0.3, (1i64..=3, 0..n))).prop_map(move |(p, den)| match den {
        None => Expr::from_poly(p),
        Some((c, i)) => {
            let v = Poly::var(var(names[i])).pow(2).scale(&BigRational::from_integer(c.into()));
            Expr::from_parts(p, Poly::one().add(&v)).unwrap()
        }
    })
}

pub fn exprs(names: &'static [&'static str], k: usize) -> impl Strategy<Value = Vec<Expr>> {
    prop::collection::vec(expr(names), k)
}

pub fn one_form(names: &'static [&'static str]) -> impl Strategy<Value = DForm> {
    exprs(names, names.len()).prop_map(move |cs| DForm::one_form(&chart(names), cs))
}

/// Independent coefficient on every `dxi∧dxj`.
pub fn two_form(names: &'static [&'static str]) -> impl Strategy<Value = DForm> {
    let n = names.len();
    exprs(names, n * (n - 1) / 2).prop_map(move |cs| {
        let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| vec![i, j]));
        DForm::from_terms(&chart(names), 2, pairs.zip(cs)).unwrap()
    })
}

/// Field with multilinear numerators, keeping nested brackets small.
pub fn field(names: &'static [&'static str]) -> impl Strategy<Value = VectorField> {
    prop::collection::vec(expr_sized(names, 1), names.len())
        .prop_map(move |cs| VectorField::new(&chart(names), cs).unwrap())
}

/// Polynomial map from `src` coordinates to `dst` coordinates.
pub fn poly_map(src: &'static [&'static str], dst: &'static [&'static str]) -> impl Strategy<Value = SmoothMap> {
    poly_map_deg(src, dst, 2)
}

pub fn poly_map_deg(src: &'static [&'static str], dst: &'static [&'static str], max_exp: u32) -> impl Strategy<Value = SmoothMap> {
    prop::collection::vec(poly(src, 3, max_exp), dst.len())
        .prop_map(move |ps| SmoothMap::new(&chart(src), &chart(dst), ps.into_iter().map(Expr::from_poly).collect()).unwrap())
}

pub const FLAG_CHART: &[&str] = &["x0", "x1", "x2", "x3", "x4"];

/// Rank-2 distribution on five coordinates in solved form
/// `dx_k − a_k dx0 − b_k dx1`, k = 2, 3, 4.
pub fn solved_rank2() -> impl Strategy<Value = PfaffSystem> {
    prop::collection::vec((poly(FLAG_CHART, 2, 1), poly(FLAG_CHART, 2, 1)), 3).prop_map(|ab| {
        let c = chart(FLAG_CHART);
        let gens = ab
            .into_iter()
            .enumerate()
            .map(|(i, (a, b))| {
                let mut cs = vec![Expr::zero(); 5];
                cs[0] = -Expr::from_poly(a);
                cs[1] = -Expr::from_poly(b);
                cs[i + 2] = Expr::one();
                DForm::one_form(&c, cs)
            })
            .collect();
        PfaffSystem::new(&c, gens).unwrap()
    })
}
