use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::symcore::VarName;

/// Ordered coordinate names of a local chart.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chart(Arc<[VarName]>);

impl Chart {
    pub fn new(names: &[&str]) -> Result<Self> {
        let vars = names.iter().map(|n| VarName::new(n)).collect::<std::result::Result<Vec<_>, _>>()?;
        Chart::from_vars(vars)
    }

    pub fn from_vars(vars: Vec<VarName>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::BadChart("no coordinates".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::BadChart(format!("duplicate coordinate `{v}`")));
            }
        }
        Ok(Chart(vars.into()))
    }

    pub fn coords(&self) -> &[VarName] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coord(&self, i: usize) -> &VarName {
        &self.0[i]
    }

    pub fn index_of(&self, v: &VarName) -> Option<usize> {
        self.0.iter().position(|c| c == v)
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|c| c.as_str() == name)
    }

    /// Index of a coordinate that must exist; panics otherwise.
    pub fn idx(&self, name: &str) -> usize {
        self.index(name).unwrap_or_else(|| panic!("no coordinate `{name}` in {self}"))
    }

    /// This chart with extra coordinates appended.
    pub fn extended(&self, extra: &[&str]) -> Result<Chart> {
        let mut vars = self.0.to_vec();
        for n in extra {
            vars.push(VarName::new(n)?);
        }
        Chart::from_vars(vars)
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
