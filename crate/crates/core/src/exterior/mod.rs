//! Differential forms, vector fields and maps on coordinate charts.

mod chart;
mod form;
mod map;
mod reduce;
mod vector;

pub use chart::Chart;
pub use form::{DForm, FormJson, TermJson};
pub use map::SmoothMap;
pub use reduce::{subsets, Coframe, Ideal};
pub use vector::VectorField;

use crate::error::{Error, Result};

pub fn wedge(a: &DForm, b: &DForm) -> Result<DForm> {
    if a.chart() != b.chart() {
        return Err(Error::ChartMismatch);
    }
    Ok(a.wedge(b))
}

pub fn d(a: &DForm) -> DForm {
    a.d()
}

pub fn interior(x: &VectorField, a: &DForm) -> Result<DForm> {
    if x.chart() != a.chart() {
        return Err(Error::ChartMismatch);
    }
    if a.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    Ok(a.interior(x))
}

pub fn pullback(phi: &SmoothMap, a: &DForm) -> Result<DForm> {
    phi.pullback(a)
}

pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    if x.chart() != y.chart() {
        return Err(Error::ChartMismatch);
    }
    Ok(x.lie_bracket(y))
}

/// Normal form of `a` modulo the algebraic ideal generated by `ideal`.
pub fn reduce_mod(a: &DForm, ideal: &[DForm]) -> Result<DForm> {
    if ideal.iter().any(|g| g.chart() != a.chart()) {
        return Err(Error::ChartMismatch);
    }
    Ok(Ideal::new(a.chart(), ideal)?.reduce(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::ex;

    fn jet() -> Chart {
        Chart::new(&["x", "y", "z", "p", "q", "t"]).unwrap()
    }

    fn cartan_forms(c: &Chart) -> [DForm; 3] {
        [
            DForm::from_pairs(c, &[("z", ex("1")), ("x", ex("-p")), ("y", ex("-q"))]).unwrap(),
            DForm::from_pairs(c, &[("p", ex("1")), ("x", ex("-t^3/3")), ("y", ex("-t^2/2"))]).unwrap(),
            DForm::from_pairs(c, &[("q", ex("1")), ("x", ex("-t^2/2")), ("y", ex("-t"))]).unwrap(),
        ]
    }

    fn dx(c: &Chart, n: &str) -> DForm {
        DForm::dx(c, n).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let c = jet();
        assert_eq!(dx(&c, "x").wedge(&dx(&c, "y")), dx(&c, "y").wedge(&dx(&c, "x")).neg());
        let w2 = DForm::from_pairs(&c, &[("x", ex("t")), ("y", ex("1"))]).unwrap();
        let got = w2.wedge(&dx(&c, "t"));
        let want = dx(&c, "x").wedge(&dx(&c, "t")).scale(&ex("t")).add(&dx(&c, "y").wedge(&dx(&c, "t")));
        assert_eq!(got, want);
        let [w0, ..] = cartan_forms(&c);
        assert!(w0.wedge(&w0).is_zero());
    }

    #[test]
    fn d_examples() {
        let c = jet();
        let [w0, w1, _] = cartan_forms(&c);
        let want0 = dx(&c, "x").wedge(&dx(&c, "p")).add(&dx(&c, "y").wedge(&dx(&c, "q")));
        assert_eq!(w0.d(), want0);
        let dt = dx(&c, "t");
        let want1 = dt
            .wedge(&dx(&c, "x"))
            .scale(&ex("-t^2"))
            .sub(&dt.wedge(&dx(&c, "y")).scale(&ex("t")));
        assert_eq!(w1.d(), want1);
        assert!(dx(&c, "x").d().is_zero());
    }

    #[test]
    fn interior_examples() {
        let c = jet();
        let dtdx = dx(&c, "t").wedge(&dx(&c, "x"));
        let et = VectorField::coordinate(&c, "t").unwrap();
        assert_eq!(interior(&et, &dtdx).unwrap(), dx(&c, "x"));
        let ex_ = VectorField::coordinate(&c, "x").unwrap();
        assert!(interior(&ex_, &dx(&c, "y").wedge(&dx(&c, "t"))).unwrap().is_zero());
        assert_eq!(interior(&ex_, &DForm::function(&c, ex("x"))), Err(Error::DegreeZero));

        let ch = VectorField::from_pairs(
            &c,
            &[("x", ex("1")), ("y", ex("-t")), ("z", ex("p - t*q")), ("p", ex("-t^3/6")), ("q", ex("-t^2/2"))],
        )
        .unwrap();
        let f = cartan_forms(&c);
        for w in &f {
            let r = reduce_mod(&interior(&ch, &w.d()).unwrap(), &f).unwrap();
            assert!(r.is_zero(), "{r}");
        }
    }

    #[test]
    fn pullback_examples() {
        // graph of a solution in the nontransversal chart (x, y, z, p, q, t, b)
        let tgt = Chart::new(&["x", "y", "z", "p", "q", "t", "b"]).unwrap();
        let src = Chart::new(&["x", "t"]).unwrap();
        let wy = DForm::from_pairs(&tgt, &[("y", ex("1")), ("x", ex("t")), ("t", ex("-b"))]).unwrap();
        let y0 = ex("t^2");
        let comps = vec![
            ex("x"),
            &ex("-t*x") + &y0,
            ex("0"),
            ex("0"),
            ex("0"),
            ex("t"),
            &ex("-x") + &y0.diff(&crate::symcore::var("t")),
        ];
        let phi = SmoothMap::new(&src, &tgt, comps).unwrap();
        assert!(phi.pullback(&wy).unwrap().is_zero());

        let b = Chart::new(&["x1", "x2", "x3", "x4", "x5"]).unwrap();
        let tau = Chart::new(&["tau"]).unwrap();
        let phi_t = ex("tau^2");
        let x3 = ex("tau^3/6");
        let curve = SmoothMap::new(&tau, &b, vec![ex("0"), ex("0"), x3, phi_t, ex("tau")]).unwrap();
        let a3 = DForm::from_pairs(&b, &[("x3", ex("1")), ("x5", ex("x4/2")), ("x4", ex("-x5/2"))]).unwrap();
        assert!(curve.pullback(&a3).unwrap().is_zero());

        let id = SmoothMap::identity(&tgt);
        assert_eq!(id.pullback(&dx(&tgt, "x")).unwrap(), dx(&tgt, "x"));
        assert_eq!(id.pullback(&DForm::dx(&src, "x").unwrap()), Err(Error::ChartMismatch));
    }

    #[test]
    fn bracket_examples() {
        let c = jet();
        let dxf = VectorField::coordinate(&c, "x").unwrap();
        let xdy = VectorField::from_pairs(&c, &[("y", ex("x"))]).unwrap();
        assert_eq!(dxf.lie_bracket(&xdy), VectorField::coordinate(&c, "y").unwrap());
        assert!(xdy.lie_bracket(&xdy).is_zero());
        let dt = VectorField::coordinate(&c, "t").unwrap();
        let e1 = VectorField::from_pairs(&c, &[("x", ex("1")), ("z", ex("p")), ("p", ex("-t"))]).unwrap();
        assert_eq!(dt.lie_bracket(&e1), VectorField::from_pairs(&c, &[("p", ex("-1"))]).unwrap());
    }

    #[test]
    fn reduce_examples() {
        let c = jet();
        let f = cartan_forms(&c);
        let w2t = DForm::from_pairs(&c, &[("x", ex("t")), ("y", ex("1"))]).unwrap().wedge(&dx(&c, "t"));
        let r = reduce_mod(&f[2].d(), &f).unwrap();
        assert_eq!(r, reduce_mod(&w2t, &f).unwrap());
        assert!(!r.is_zero());
        let hat1 = f[1].sub(&f[2].scale(&ex("t")));
        let ideal = [f[0].clone(), hat1.clone(), f[2].clone()];
        assert!(reduce_mod(&hat1.d(), &ideal).unwrap().is_zero());
        assert!(reduce_mod(&f[0], &f[..1]).unwrap().is_zero());
        assert_eq!(reduce_mod(&f[0], &[f[0].clone(), f[0].scale(&ex("2"))]), Err(Error::DependentGenerators));
    }

    #[test]
    fn form_json_round_trip() {
        let c = jet();
        let f = cartan_forms(&c)[1].d();
        let j = serde_json::to_string(&f.to_json()).unwrap();
        let back: FormJson = serde_json::from_str(&j).unwrap();
        assert_eq!(DForm::from_json(&c, &back).unwrap(), f);
    }

    #[test]
    fn coframe_expansion_recovers_form() {
        let c = jet();
        let f = cartan_forms(&c);
        let mut forms = f.to_vec();
        forms.extend(["x", "y", "t"].iter().map(|n| dx(&c, n)));
        let cf = Coframe::new(forms.clone()).unwrap();
        let a = f[0].d();
        let mut back = DForm::zero(&c, 2);
        for (idx, coef) in cf.expand(&a) {
            back = back.add(&forms[idx[0]].wedge(&forms[idx[1]]).scale(&coef));
        }
        assert_eq!(back, a);
    }
}
