use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{Chart, VectorField};
use crate::error::{Error, Result};
use crate::symcore::{parse, Expr, RationalPoint, VarName};

/// A differential k-form `Σ a_I dx_I` over strictly increasing index tuples.
#[derive(Clone, PartialEq, Eq)]
pub struct DForm {
    chart: Chart,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Expr>,
}

/// Sort `idx` in place; returns the permutation sign, or `None` on a repeat.
pub(crate) fn sort_with_sign(idx: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

impl DForm {
    pub fn zero(chart: &Chart, degree: usize) -> Self {
        DForm { chart: chart.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn function(chart: &Chart, f: Expr) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(Vec::new(), f);
        }
        DForm { chart: chart.clone(), degree: 0, terms }
    }

    /// The coordinate differential `d name`.
    pub fn dx(chart: &Chart, name: &str) -> Result<Self> {
        let i = chart.index(name).ok_or_else(|| Error::BadChart(format!("no coordinate `{name}`")))?;
        Ok(Self::basis(chart, i))
    }

    pub fn basis(chart: &Chart, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![i], Expr::one());
        DForm { chart: chart.clone(), degree: 1, terms }
    }

    /// 1-form from its full coefficient vector in chart order.
    pub fn one_form(chart: &Chart, coeffs: Vec<Expr>) -> Self {
        assert_eq!(coeffs.len(), chart.dim());
        let terms = coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (vec![i], c))
            .collect();
        DForm { chart: chart.clone(), degree: 1, terms }
    }

    /// 1-form from `(coordinate, coefficient)` pairs.
    pub fn from_pairs(chart: &Chart, pairs: &[(&str, Expr)]) -> Result<Self> {
        let mut acc = DForm::zero(chart, 1);
        for (n, c) in pairs {
            acc = acc.add(&DForm::dx(chart, n)?.scale(c));
        }
        Ok(acc)
    }

    /// Builds from arbitrary index tuples, sorting them with sign.
    pub fn from_terms(
        chart: &Chart,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, Expr)>,
    ) -> Result<Self> {
        let mut acc: BTreeMap<Vec<usize>, Expr> = BTreeMap::new();
        for (mut idx, c) in terms {
            if idx.len() != degree || idx.iter().any(|&i| i >= chart.dim()) {
                return Err(Error::Input(format!("bad index tuple {idx:?} for a {degree}-form")));
            }
            let Some(sign) = sort_with_sign(&mut idx) else { continue };
            let c = if sign < 0 { -c } else { c };
            add_into(&mut acc, idx, c);
        }
        Ok(DForm { chart: chart.clone(), degree, terms: acc })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, Expr> {
        &self.terms
    }

    pub fn coeff(&self, idx: &[usize]) -> Expr {
        self.terms.get(idx).cloned().unwrap_or_else(Expr::zero)
    }

    /// Coefficient of `dx_I` with the tuple given by coordinate names.
    pub fn coeff_of(&self, names: &[&str]) -> Expr {
        let mut idx: Vec<usize> = names.iter().map(|n| self.chart.idx(n)).collect();
        match sort_with_sign(&mut idx) {
            Some(s) if s < 0 => -self.coeff(&idx),
            Some(_) => self.coeff(&idx),
            None => Expr::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value of a 0-form.
    pub fn as_function(&self) -> Expr {
        assert_eq!(self.degree, 0);
        self.coeff(&[])
    }

    /// Coefficients of a 1-form in chart order.
    pub fn coeff_vector(&self) -> Vec<Expr> {
        assert_eq!(self.degree, 1);
        (0..self.chart.dim()).map(|i| self.coeff(&[i])).collect()
    }

    fn same_chart(&self, o: &DForm) {
        assert!(self.chart == o.chart, "forms on different charts");
    }

    pub fn add(&self, o: &DForm) -> DForm {
        self.same_chart(o);
        assert_eq!(self.degree, o.degree, "adding forms of different degree");
        let mut terms = self.terms.clone();
        for (k, v) in &o.terms {
            add_into(&mut terms, k.clone(), v.clone());
        }
        DForm { chart: self.chart.clone(), degree: self.degree, terms }
    }

    pub fn sub(&self, o: &DForm) -> DForm {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> DForm {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, f: &Expr) -> DForm {
        if f.is_zero() {
            return DForm::zero(&self.chart, self.degree);
        }
        self.map_coeffs(|c| c * f)
    }

    fn map_coeffs(&self, f: impl Fn(&Expr) -> Expr) -> DForm {
        let terms = self
            .terms
            .iter()
            .filter_map(|(k, v)| {
                let c = f(v);
                (!c.is_zero()).then(|| (k.clone(), c))
            })
            .collect();
        DForm { chart: self.chart.clone(), degree: self.degree, terms }
    }

    pub fn wedge(&self, o: &DForm) -> DForm {
        self.same_chart(o);
        let mut terms = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let mut idx: Vec<usize> = a.iter().chain(b).copied().collect();
                let Some(sign) = sort_with_sign(&mut idx) else { continue };
                let c = ca * cb;
                add_into(&mut terms, idx, if sign < 0 { -c } else { c });
            }
        }
        DForm { chart: self.chart.clone(), degree: self.degree + o.degree, terms }
    }

    /// Exterior derivative; symbols outside the chart are treated as constants.
    pub fn d(&self) -> DForm {
        let mut terms = BTreeMap::new();
        for (idx, c) in &self.terms {
            for (j, v) in self.chart.coords().iter().enumerate() {
                if idx.contains(&j) || !c.contains_var(v) {
                    continue;
                }
                let dc = c.diff(v);
                let mut full = Vec::with_capacity(idx.len() + 1);
                full.push(j);
                full.extend_from_slice(idx);
                let sign = sort_with_sign(&mut full).expect("j not in idx");
                add_into(&mut terms, full, if sign < 0 { -dc } else { dc });
            }
        }
        DForm { chart: self.chart.clone(), degree: self.degree + 1, terms }
    }

    /// `X ⌟ self`; panics on a 0-form.
    pub fn interior(&self, x: &VectorField) -> DForm {
        assert!(self.degree >= 1, "interior product of a function");
        assert!(self.chart == *x.chart(), "field and form on different charts");
        let mut terms = BTreeMap::new();
        for (idx, c) in &self.terms {
            for (pos, &i) in idx.iter().enumerate() {
                let xi = x.coeff(i);
                if xi.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(pos);
                let t = c * xi;
                add_into(&mut terms, rest, if pos % 2 == 1 { -t } else { t });
            }
        }
        DForm { chart: self.chart.clone(), degree: self.degree - 1, terms }
    }

    /// `self(v_1, …, v_k)` on component vectors.
    pub fn eval_on(&self, vs: &[&[Expr]]) -> Expr {
        assert_eq!(vs.len(), self.degree);
        let mut acc = Expr::zero();
        for (idx, c) in &self.terms {
            let m: Vec<Vec<Expr>> = vs.iter().map(|v| idx.iter().map(|&i| v[i].clone()).collect()).collect();
            let det = determinant(&m);
            if !det.is_zero() {
                acc = &acc + &(c * &det);
            }
        }
        acc
    }

    pub fn eval_on_fields(&self, xs: &[&VectorField]) -> Expr {
        let vs: Vec<&[Expr]> = xs.iter().map(|x| x.coeffs()).collect();
        self.eval_on(&vs)
    }

    pub fn substitute(&self, b: &BTreeMap<VarName, Expr>) -> Result<DForm> {
        let mut terms = BTreeMap::new();
        for (k, v) in &self.terms {
            let c = v.substitute(b)?;
            if !c.is_zero() {
                terms.insert(k.clone(), c);
            }
        }
        Ok(DForm { chart: self.chart.clone(), degree: self.degree, terms })
    }

    /// Coefficients evaluated at a point.
    pub fn eval_at(&self, pt: &RationalPoint) -> Result<BTreeMap<Vec<usize>, BigRational>> {
        let mut out = BTreeMap::new();
        for (k, v) in &self.terms {
            let x = v.eval(pt)?;
            if !num_traits::Zero::is_zero(&x) {
                out.insert(k.clone(), x);
            }
        }
        Ok(out)
    }

    /// Re-express on a chart containing every coordinate this form uses.
    pub fn extend_to(&self, target: &Chart) -> Result<DForm> {
        let map: Vec<usize> = self
            .chart
            .coords()
            .iter()
            .map(|v| target.index_of(v).ok_or(Error::ChartMismatch))
            .collect::<Result<_>>()?;
        DForm::from_terms(
            target,
            self.degree,
            self.terms.iter().map(|(k, v)| (k.iter().map(|&i| map[i]).collect(), v.clone())),
        )
    }

    pub fn to_json(&self) -> FormJson {
        FormJson {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| TermJson { indices: k.clone(), coeff: v.to_string() })
                .collect(),
        }
    }

    pub fn from_json(chart: &Chart, j: &FormJson) -> Result<DForm> {
        let terms = j
            .terms
            .iter()
            .map(|t| Ok((t.indices.clone(), parse(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        DForm::from_terms(chart, j.degree, terms)
    }
}

/// Serialized shape of a form: coefficients in the expression grammar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub degree: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub indices: Vec<usize>,
    pub coeff: String,
}

fn add_into(terms: &mut BTreeMap<Vec<usize>, Expr>, k: Vec<usize>, c: Expr) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(k) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let s = e.get() + &c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// Determinant by cofactor expansion; only used for small k.
pub(crate) fn determinant(m: &[Vec<Expr>]) -> Expr {
    match m.len() {
        0 => Expr::one(),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        n => {
            let mut acc = Expr::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Expr>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let t = &m[0][j] * &determinant(&minor);
                acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

impl fmt::Display for DForm {
    /// Human-readable, e.g. `dz - p*dx - q*dy` or `t*dx∧dt`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (idx, c)) in self.terms.iter().enumerate() {
            let basis: Vec<String> = idx.iter().map(|&i| format!("d{}", self.chart.coord(i))).collect();
            let basis = basis.join("∧");
            let cs = c.to_string();
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if c.numer().num_terms() == 1 => (true, rest.to_string()),
                _ => (false, cs.clone()),
            };
            if n > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            if idx.is_empty() {
                f.write_str(&body)?;
            } else if body == "1" {
                f.write_str(&basis)?;
            } else if c.numer().num_terms() == 1 && c.is_polynomial() {
                write!(f, "{body}*{basis}")?;
            } else {
                write!(f, "({body})*{basis}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
