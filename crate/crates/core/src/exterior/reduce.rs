use std::collections::BTreeMap;

use super::{Chart, DForm, VectorField};
use crate::error::{Error, Result};
use crate::symcore::linalg::{inverse, rref};
use crate::symcore::{Expr, Poly};

/// All strictly increasing `k`-subsets of `items`.
pub fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

/// A full coframe with its dual frame.
#[derive(Clone, Debug)]
pub struct Coframe {
    chart: Chart,
    forms: Vec<DForm>,
    dual: Vec<VectorField>,
}

impl Coframe {
    pub fn new(forms: Vec<DForm>) -> Result<Self> {
        let chart = forms.first().ok_or(Error::DependentGenerators)?.chart().clone();
        if forms.len() != chart.dim() || forms.iter().any(|f| f.degree() != 1 || *f.chart() != chart) {
            return Err(Error::Input("a coframe needs dim-many 1-forms on one chart".into()));
        }
        let m: Vec<Vec<Expr>> = forms.iter().map(DForm::coeff_vector).collect();
        let inv = inverse(&m).ok_or(Error::DependentGenerators)?;
        let n = chart.dim();
        let dual = (0..n)
            .map(|k| VectorField::new(&chart, (0..n).map(|j| inv[j][k].clone()).collect()))
            .collect::<Result<_>>()?;
        Ok(Coframe { chart, forms, dual })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn forms(&self) -> &[DForm] {
        &self.forms
    }

    pub fn dual(&self) -> &[VectorField] {
        &self.dual
    }

    /// Coefficients of `a` in the basis of wedge products of coframe forms.
    pub fn expand(&self, a: &DForm) -> BTreeMap<Vec<usize>, Expr> {
        let all: Vec<usize> = (0..self.forms.len()).collect();
        let mut out = BTreeMap::new();
        for idx in subsets(&all, a.degree()) {
            let vs: Vec<&VectorField> = idx.iter().map(|&i| &self.dual[i]).collect();
            let c = a.eval_on_fields(&vs);
            if !c.is_zero() {
                out.insert(idx, c);
            }
        }
        out
    }
}

/// The algebraic ideal generated by independent 1-forms, completed to a
/// coframe by coordinate differentials.
#[derive(Clone, Debug)]
pub struct Ideal {
    chart: Chart,
    gens: Vec<DForm>,
    /// Coordinates whose differentials complete the generators.
    free: Vec<usize>,
    /// Fields annihilated by the generators, dual to the free differentials.
    complement: Vec<VectorField>,
    loci: Vec<Poly>,
}

impl Ideal {
    pub fn new(chart: &Chart, gens: &[DForm]) -> Result<Self> {
        for g in gens {
            if g.degree() != 1 || g.chart() != chart {
                return Err(Error::Input("ideal generators must be 1-forms on the chart".into()));
            }
        }
        let m: Vec<Vec<Expr>> = gens.iter().map(DForm::coeff_vector).collect();
        let ech = rref(&m, chart.dim());
        if ech.rank() < gens.len() {
            return Err(Error::DependentGenerators);
        }
        let free = ech.free_columns();
        let complement = ech
            .kernel()
            .into_iter()
            .map(|v| VectorField::new(chart, v))
            .collect::<Result<_>>()?;
        Ok(Ideal { chart: chart.clone(), gens: gens.to_vec(), free, complement, loci: ech.loci() })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn gens(&self) -> &[DForm] {
        &self.gens
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }

    /// Basis of the common kernel of the generators.
    pub fn kernel_fields(&self) -> &[VectorField] {
        &self.complement
    }

    /// Polynomials whose vanishing invalidates the completion.
    pub fn loci(&self) -> &[Poly] {
        &self.loci
    }

    /// Normal form: the part of `a` free of generator directions.
    pub fn reduce(&self, a: &DForm) -> DForm {
        assert!(*a.chart() == self.chart, "form and ideal on different charts");
        let k = a.degree();
        if k == 0 {
            return a.clone();
        }
        let pos: Vec<usize> = (0..self.free.len()).collect();
        let mut terms = Vec::new();
        for s in subsets(&pos, k) {
            let vs: Vec<&VectorField> = s.iter().map(|&i| &self.complement[i]).collect();
            let c = a.eval_on_fields(&vs);
            if !c.is_zero() {
                terms.push((s.iter().map(|&i| self.free[i]).collect(), c));
            }
        }
        DForm::from_terms(&self.chart, k, terms).expect("indices are valid")
    }

    pub fn contains(&self, a: &DForm) -> bool {
        self.reduce(a).is_zero()
    }
}
