use std::fmt;

use num_rational::BigRational;

use super::Chart;
use crate::error::{Error, Result};
use crate::symcore::{Expr, RationalPoint};

/// A vector field `Σ c_i ∂/∂x_i` on a chart.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    chart: Chart,
    coeffs: Vec<Expr>,
}

impl VectorField {
    pub fn new(chart: &Chart, coeffs: Vec<Expr>) -> Result<Self> {
        if coeffs.len() != chart.dim() {
            return Err(Error::Input(format!(
                "vector field has {} components on a {}-dimensional chart",
                coeffs.len(),
                chart.dim()
            )));
        }
        Ok(VectorField { chart: chart.clone(), coeffs })
    }

    pub fn zero(chart: &Chart) -> Self {
        VectorField { chart: chart.clone(), coeffs: vec![Expr::zero(); chart.dim()] }
    }

    /// `∂/∂x_i`.
    pub fn basis(chart: &Chart, i: usize) -> Self {
        let mut v = Self::zero(chart);
        v.coeffs[i] = Expr::one();
        v
    }

    pub fn coordinate(chart: &Chart, name: &str) -> Result<Self> {
        let i = chart.index(name).ok_or_else(|| Error::BadChart(format!("no coordinate `{name}`")))?;
        Ok(Self::basis(chart, i))
    }

    /// From `(coordinate, coefficient)` pairs; other components vanish.
    pub fn from_pairs(chart: &Chart, pairs: &[(&str, Expr)]) -> Result<Self> {
        let mut v = Self::zero(chart);
        for (n, c) in pairs {
            let i = chart.index(n).ok_or_else(|| Error::BadChart(format!("no coordinate `{n}`")))?;
            v.coeffs[i] = &v.coeffs[i] + c;
        }
        Ok(v)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn coeffs(&self) -> &[Expr] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Expr {
        &self.coeffs[i]
    }

    pub fn component(&self, name: &str) -> &Expr {
        &self.coeffs[self.chart.idx(name)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Expr::is_zero)
    }

    /// Directional derivative `X(f)`.
    pub fn apply(&self, f: &Expr) -> Expr {
        let mut acc = Expr::zero();
        for (c, v) in self.coeffs.iter().zip(self.chart.coords()) {
            if c.is_zero() || !f.contains_var(v) {
                continue;
            }
            acc = &acc + &(c * &f.diff(v));
        }
        acc
    }

    pub fn lie_bracket(&self, o: &VectorField) -> VectorField {
        assert!(self.chart == o.chart, "fields on different charts");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&o.coeffs)
            .map(|(a, b)| &self.apply(b) - &o.apply(a))
            .collect();
        VectorField { chart: self.chart.clone(), coeffs }
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        assert!(self.chart == o.chart, "fields on different charts");
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        VectorField { chart: self.chart.clone(), coeffs }
    }

    pub fn sub(&self, o: &VectorField) -> VectorField {
        self.add(&o.scale(&Expr::int(-1)))
    }

    pub fn scale(&self, f: &Expr) -> VectorField {
        VectorField { chart: self.chart.clone(), coeffs: self.coeffs.iter().map(|c| c * f).collect() }
    }

    pub fn eval(&self, pt: &RationalPoint) -> Result<Vec<BigRational>> {
        Ok(self.coeffs.iter().map(|c| c.eval(pt)).collect::<std::result::Result<_, _>>()?)
    }
}

impl fmt::Display for VectorField {
    /// e.g. `∂x - t*∂y + (p - q*t)*∂z`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, v) in self.coeffs.iter().zip(self.chart.coords()) {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "∂{v}")?;
            } else if c.is_constant() || (c.is_polynomial() && c.numer().num_terms() == 1) {
                write!(f, "{c}*∂{v}")?;
            } else {
                write!(f, "({c})*∂{v}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
