use std::collections::BTreeMap;

use super::{Chart, DForm};
use crate::error::{Error, Result};
use crate::symcore::{Expr, VarName};

/// A map between charts, given by target coordinates as functions of
/// source coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothMap {
    source: Chart,
    target: Chart,
    components: Vec<Expr>,
}

impl SmoothMap {
    pub fn new(source: &Chart, target: &Chart, components: Vec<Expr>) -> Result<Self> {
        if components.len() != target.dim() {
            return Err(Error::Input(format!(
                "map has {} components for a {}-dimensional target",
                components.len(),
                target.dim()
            )));
        }
        Ok(SmoothMap { source: source.clone(), target: target.clone(), components })
    }

    pub fn identity(chart: &Chart) -> Self {
        let components = chart.coords().iter().map(Expr::var).collect();
        SmoothMap { source: chart.clone(), target: chart.clone(), components }
    }

    pub fn source(&self) -> &Chart {
        &self.source
    }

    pub fn target(&self) -> &Chart {
        &self.target
    }

    pub fn components(&self) -> &[Expr] {
        &self.components
    }

    pub fn component(&self, name: &str) -> &Expr {
        &self.components[self.target.idx(name)]
    }

    fn bindings(&self) -> BTreeMap<VarName, Expr> {
        self.target.coords().iter().cloned().zip(self.components.iter().cloned()).collect()
    }

    /// `f ∘ φ` for a function on the target.
    pub fn pull_fn(&self, f: &Expr) -> Result<Expr> {
        Ok(f.substitute(&self.bindings())?)
    }

    /// Jacobian rows: `∂φ_i/∂u_j` for target `i`, source `j`.
    pub fn jacobian(&self) -> Vec<Vec<Expr>> {
        self.components
            .iter()
            .map(|c| self.source.coords().iter().map(|u| c.diff(u)).collect())
            .collect()
    }

    pub fn pullback(&self, a: &DForm) -> Result<DForm> {
        if *a.chart() != self.target {
            return Err(Error::ChartMismatch);
        }
        let b = self.bindings();
        let dphi: Vec<DForm> = self
            .jacobian()
            .into_iter()
            .map(|row| DForm::one_form(&self.source, row))
            .collect();
        let mut acc = DForm::zero(&self.source, a.degree());
        for (idx, c) in a.terms() {
            let mut t = DForm::function(&self.source, c.substitute(&b)?);
            for &i in idx {
                if t.is_zero() {
                    break;
                }
                t = t.wedge(&dphi[i]);
            }
            if !t.is_zero() {
                acc = acc.add(&t);
            }
        }
        Ok(acc)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SmoothMap) -> Result<SmoothMap> {
        if other.source != self.target {
            return Err(Error::ChartMismatch);
        }
        let b = self.bindings();
        let components = other
            .components
            .iter()
            .map(|c| c.substitute(&b))
            .collect::<std::result::Result<_, _>>()?;
        Ok(SmoothMap { source: self.source.clone(), target: other.target.clone(), components })
    }
}
