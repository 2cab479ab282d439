//! Graded symbol algebras of filtered manifolds at a point, and comparison
//! with the two seven-dimensional models `f0` and `f1`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{Chart, Coframe, DForm, Ideal, VectorField};
use crate::pfaffian::{weak_flag, PfaffSystem};
use crate::prolong::{ChartKind, ProlongChart};
use crate::symcore::linalg::{kernel, rank};
use crate::symcore::{Expr, RationalPoint};

/// Decreasing filtration `F^{-1} ⊂ F^{-2} ⊂ … ⊂ TM`, each stage given by
/// its annihilating 1-forms.
#[derive(Clone, Debug)]
pub struct Filtration {
    chart: Chart,
    stages: Vec<Vec<DForm>>,
}

impl Filtration {
    pub fn new(chart: &Chart, stages: Vec<Vec<DForm>>) -> Result<Self> {
        if stages.is_empty() || !stages.last().unwrap().is_empty() {
            return Err(Error::Input("the last stage of a filtration must be the whole tangent bundle".into()));
        }
        for w in stages.windows(2) {
            if w[1].len() >= w[0].len() {
                return Err(Error::Input("filtration stages must strictly increase".into()));
            }
            if !w[1].is_empty() {
                let big = Ideal::new(chart, &w[0])?;
                if w[1].iter().any(|g| !big.contains(g)) {
                    return Err(Error::Input("filtration stages are not nested".into()));
                }
            }
        }
        for s in &stages {
            if s.iter().any(|g| g.chart() != chart || g.degree() != 1) {
                return Err(Error::ChartMismatch);
            }
            if !s.is_empty() {
                Ideal::new(chart, s)?;
            }
        }
        Ok(Filtration { chart: chart.clone(), stages })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn stages(&self) -> &[Vec<DForm>] {
        &self.stages
    }

    /// Depth `μ`: `F^{-μ} = TM`.
    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    /// Ranks of `F^{-1}, F^{-2}, …`.
    pub fn ranks(&self) -> Vec<usize> {
        self.stages.iter().map(|s| self.chart.dim() - s.len()).collect()
    }

    /// Dimensions of `g_{-1}, g_{-2}, …`.
    pub fn graded_dims(&self) -> Vec<usize> {
        let r = self.ranks();
        (0..r.len()).map(|k| if k == 0 { r[0] } else { r[k] - r[k - 1] }).collect()
    }

    /// Filtration degree of a field: `-k` for the first stage containing it.
    pub fn degree_of(&self, x: &VectorField) -> i32 {
        let k = self
            .stages
            .iter()
            .position(|s| s.iter().all(|g| g.interior(x).as_function().is_zero()))
            .unwrap_or(self.stages.len() - 1);
        -(k as i32 + 1)
    }

    fn contains(&self, stage: usize, x: &VectorField) -> bool {
        self.stages[stage].iter().all(|g| g.interior(x).as_function().is_zero())
    }

    /// `[F^p, F^q] ⊂ F^{p+q}` on the given spanning sections.
    pub fn bracket_compatible(&self, fields: &[VectorField]) -> bool {
        let degs: Vec<i32> = fields.iter().map(|f| self.degree_of(f)).collect();
        let mu = self.depth();
        for i in 0..fields.len() {
            for j in i + 1..fields.len() {
                let stage = ((-degs[i] - degs[j]) as usize).min(mu) - 1;
                if !self.contains(stage, &fields[i].lie_bracket(&fields[j])) {
                    return false;
                }
            }
        }
        true
    }
}

/// A coframe and its dual frame, ordered by filtration degree.
#[derive(Clone, Debug)]
pub struct AdaptedFrame {
    pub labels: Vec<String>,
    pub degrees: Vec<i32>,
    pub forms: Vec<DForm>,
    pub fields: Vec<VectorField>,
}

impl AdaptedFrame {
    pub fn new(f: &Filtration, labels: Vec<String>, forms: Vec<DForm>) -> Result<Self> {
        if labels.len() != forms.len() {
            return Err(Error::Input("one label per coframe element is required".into()));
        }
        let cf = Coframe::new(forms.clone())?;
        let fields = cf.dual().to_vec();
        let degrees: Vec<i32> = fields.iter().map(|x| f.degree_of(x)).collect();
        // stage k must be spanned by the first rank(F^{-k}) fields
        let mut start = 0;
        for (k, r) in f.ranks().into_iter().enumerate() {
            if degrees[start..r].iter().any(|&d| d != -(k as i32 + 1)) {
                return Err(Error::Input(format!("frame is not adapted to the filtration at stage {}", k + 1)));
            }
            start = r;
        }
        Ok(AdaptedFrame { labels, degrees, forms, fields })
    }

    /// Same frame with each field multiplied by a function.
    pub fn rescaled(&self, units: &[Expr]) -> Vec<VectorField> {
        self.fields.iter().zip(units).map(|(x, u)| x.scale(u)).collect()
    }
}

/// Nilpotent graded Lie algebra with exact structure constants on a
/// labelled homogeneous basis.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedAlgebra {
    pub labels: Vec<String>,
    pub degrees: Vec<i32>,
    /// `c[i][j][k]`: coefficient of basis vector `k` in `[e_i, e_j]`.
    pub c: Vec<Vec<Vec<BigRational>>>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

impl GradedAlgebra {
    pub fn zero(labels: Vec<String>, degrees: Vec<i32>) -> Self {
        let n = labels.len();
        GradedAlgebra { labels, degrees, c: vec![vec![vec![BigRational::zero(); n]; n]; n] }
    }

    /// Builds an algebra from `[e_i, e_j] = Σ v e_k` entries; antisymmetry is
    /// filled in.
    pub fn from_table(labels: &[&str], degrees: &[i32], entries: &[(usize, usize, usize, i64)]) -> Self {
        let mut g = GradedAlgebra::zero(labels.iter().map(|s| s.to_string()).collect(), degrees.to_vec());
        for &(i, j, k, v) in entries {
            g.c[i][j][k] = q(v);
            g.c[j][i][k] = q(-v);
        }
        g
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// `dim g_{-1}, dim g_{-2}, …` down to the lowest occurring degree.
    pub fn dims(&self) -> Vec<usize> {
        let mu = self.degrees.iter().map(|d| -d).max().unwrap_or(0);
        (1..=mu).map(|p| self.degrees.iter().filter(|&&d| d == -p).count()).collect()
    }

    fn of_degree(&self, p: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == p).collect()
    }

    pub fn bracket(&self, u: &[BigRational], v: &[BigRational]) -> Vec<BigRational> {
        let n = self.dim();
        let mut out = vec![BigRational::zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                let s = &u[i] * &v[j];
                for k in 0..n {
                    out[k] += &s * &self.c[i][j][k];
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.dim()];
        v[i] = BigRational::one();
        v
    }

    pub fn antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| self.c[i][j][k] == -self.c[j][i][k].clone())))
    }

    pub fn jacobi(&self) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (a, b, c) = (self.unit(i), self.unit(j), self.unit(k));
                    let t1 = self.bracket(&a, &self.bracket(&b, &c));
                    let t2 = self.bracket(&b, &self.bracket(&c, &a));
                    let t3 = self.bracket(&c, &self.bracket(&a, &b));
                    if (0..n).any(|m| !(&t1[m] + &t2[m] + &t3[m]).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Every nonzero constant respects degrees.
    pub fn graded(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| self.c[i][j][k].is_zero() || self.degrees[k] == self.degrees[i] + self.degrees[j]))
        })
    }

    /// `[g_p, g_{-1}] = g_{p-1}` for all `p < 0` above the bottom.
    pub fn generating(&self) -> bool {
        let mu = self.dims().len() as i32;
        let minus1 = self.of_degree(-1);
        for p in (2..=mu).map(|p| -p) {
            let target = self.of_degree(p);
            let rows: Vec<Vec<BigRational>> = self
                .of_degree(p + 1)
                .iter()
                .flat_map(|&i| minus1.iter().map(move |&j| (i, j)))
                .map(|(i, j)| target.iter().map(|&k| self.c[i][j][k].clone()).collect())
                .collect();
            if rank(&rows, target.len()) != target.len() {
                return false;
            }
        }
        true
    }

    /// `dim {Y ∈ g_{-3} : [Y, g_{-1}] = 0}`.
    pub fn k_invariant(&self) -> usize {
        let g3 = self.of_degree(-3);
        let g1 = self.of_degree(-1);
        // rows: (j, k) pairs, columns: basis of g_{-3}
        let mut m = Vec::new();
        for &j in &g1 {
            for k in 0..self.dim() {
                m.push(g3.iter().map(|&i| self.c[i][j][k].clone()).collect::<Vec<_>>());
            }
        }
        kernel(&m, g3.len()).len()
    }

    /// Whether `other` equals this algebra after `e_i ↦ ±e_i`; returns the signs.
    pub fn sign_match(&self, other: &GradedAlgebra) -> Option<Vec<i8>> {
        if self.labels != other.labels || self.degrees != other.degrees {
            return None;
        }
        let n = self.dim();
        for mask in 0u32..(1 << n) {
            let s: Vec<i8> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            let ok = (0..n).all(|i| {
                (0..n).all(|j| {
                    (0..n).all(|k| {
                        let f = s[i] * s[j] * s[k];
                        let v = if f == 1 { self.c[i][j][k].clone() } else { -self.c[i][j][k].clone() };
                        v == other.c[i][j][k]
                    })
                })
            });
            if ok {
                return Some(s);
            }
        }
        None
    }

    pub fn report(&self, model: Model) -> SymbolReport {
        let n = self.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let coeffs: BTreeMap<String, String> = (0..n)
                    .filter(|&k| !self.c[i][j][k].is_zero())
                    .map(|k| (self.labels[k].clone(), self.c[i][j][k].to_string()))
                    .collect();
                if !coeffs.is_empty() {
                    brackets.push(BracketEntry {
                        deg_pair: [self.degrees[i], self.degrees[j]],
                        basis_pair: [self.labels[i].clone(), self.labels[j].clone()],
                        result_coeffs: coeffs,
                    });
                }
            }
        }
        SymbolReport { dims: self.dims(), brackets, generating: self.generating(), model }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BracketEntry {
    pub deg_pair: [i32; 2],
    pub basis_pair: [String; 2],
    pub result_coeffs: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolReport {
    pub dims: Vec<usize>,
    pub brackets: Vec<BracketEntry>,
    pub generating: bool,
    pub model: Model,
}

fn eval_degenerate(e: &Expr, pt: &RationalPoint) -> Result<BigRational> {
    e.eval(pt).map_err(|err| Error::Degenerate(format!("frame undefined at the point: {err}")))
}

fn check_regular(frame: &AdaptedFrame, pt: &RationalPoint) -> Result<()> {
    let m: Vec<Vec<BigRational>> = frame
        .forms
        .iter()
        .map(|f| f.coeff_vector().iter().map(|c| eval_degenerate(c, pt)).collect())
        .collect::<Result<_>>()?;
    if rank(&m, frame.forms.len()) != frame.forms.len() {
        return Err(Error::Degenerate("coframe is singular at the point".into()));
    }
    Ok(())
}

/// Structure constants from `c_ij^k = -dα_k(X_i, X_j)` at the point, kept
/// in degree `deg i + deg j` only.
pub fn graded_symbol(f: &Filtration, frame: &AdaptedFrame, pt: &RationalPoint) -> Result<GradedAlgebra> {
    if frame.forms.first().map(|a| a.chart()) != Some(f.chart()) {
        return Err(Error::ChartMismatch);
    }
    check_regular(frame, pt)?;
    let n = frame.forms.len();
    let mu = f.depth() as i32;
    let d: Vec<DForm> = frame.forms.iter().map(DForm::d).collect();
    let mut g = GradedAlgebra::zero(frame.labels.clone(), frame.degrees.clone());
    for i in 0..n {
        for j in i + 1..n {
            let deg = frame.degrees[i] + frame.degrees[j];
            if deg < -mu {
                continue;
            }
            for k in (0..n).filter(|&k| frame.degrees[k] == deg) {
                let v = -eval_degenerate(&d[k].eval_on_fields(&[&frame.fields[i], &frame.fields[j]]), pt)?;
                g.c[j][i][k] = -v.clone();
                g.c[i][j][k] = v;
            }
        }
    }
    Ok(g)
}

/// Same constants from direct Lie brackets of the frame fields, optionally
/// rescaled by `units` (functions equal to 1 at the point).
pub fn graded_symbol_direct(
    f: &Filtration,
    frame: &AdaptedFrame,
    pt: &RationalPoint,
    units: Option<&[Expr]>,
) -> Result<GradedAlgebra> {
    check_regular(frame, pt)?;
    let fields = match units {
        Some(u) => {
            if u.len() != frame.fields.len() || u.iter().any(|e| e.eval(pt).map(|v| !v.is_one()).unwrap_or(true)) {
                return Err(Error::Input("rescaling functions must equal 1 at the point".into()));
            }
            frame.rescaled(u)
        }
        None => frame.fields.clone(),
    };
    let n = fields.len();
    let mu = f.depth() as i32;
    let mut g = GradedAlgebra::zero(frame.labels.clone(), frame.degrees.clone());
    for i in 0..n {
        for j in i + 1..n {
            let deg = frame.degrees[i] + frame.degrees[j];
            if deg < -mu {
                continue;
            }
            let b = fields[i].lie_bracket(&fields[j]);
            for k in (0..n).filter(|&k| frame.degrees[k] == deg) {
                let v = eval_degenerate(&frame.forms[k].interior(&b).as_function(), pt)?;
                g.c[j][i][k] = -v.clone();
                g.c[i][j][k] = v;
            }
        }
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    F0,
    F1,
    Neither,
}

pub const F0_LABELS: [&str; 7] = ["X_w1", "X_w2", "X_a", "X_pi", "X_1", "X_2", "X_0"];
pub const F1_LABELS: [&str; 7] = ["X_w1", "X_pi", "X_b", "X_w2", "X_1", "X_2", "X_0"];
const MODEL_DEGREES: [i32; 7] = [-1, -1, -1, -2, -3, -3, -4];

/// `[X_a, X_w2] = X_pi`, `[X_pi, X_w2] = X_2`, `[X_1, X_w1] = [X_2, X_w2] = X_0`.
pub fn f0() -> GradedAlgebra {
    GradedAlgebra::from_table(&F0_LABELS, &MODEL_DEGREES, &[(2, 1, 3, 1), (3, 1, 5, 1), (4, 0, 6, 1), (5, 1, 6, 1)])
}

/// `[X_b, X_pi] = X_w2`, `[X_pi, X_w2] = X_2`, `[X_1, X_w1] = X_0`.
pub fn f1() -> GradedAlgebra {
    GradedAlgebra::from_table(&F1_LABELS, &MODEL_DEGREES, &[(2, 1, 3, 1), (1, 3, 5, 1), (4, 0, 6, 1)])
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelMatch {
    pub model: Model,
    pub k: usize,
    pub generating: bool,
    /// Structure constants agree with the model table after the sign flips.
    pub full_match: bool,
    pub signs: Option<Vec<i8>>,
}

pub fn generating_check(g: &GradedAlgebra) -> bool {
    g.generating()
}

pub fn match_model(g: &GradedAlgebra) -> Result<ModelMatch> {
    if g.dims() != [3, 1, 2, 1] {
        return Err(Error::Input(format!("graded dimensions {:?} differ from (3, 1, 2, 1)", g.dims())));
    }
    let k = g.k_invariant();
    let generating = g.generating();
    let model = match k {
        0 => Model::F0,
        1 => Model::F1,
        _ => Model::Neither,
    };
    let signs = match model {
        Model::F0 => g.sign_match(&f0()),
        Model::F1 => g.sign_match(&f1()),
        Model::Neither => None,
    };
    Ok(ModelMatch { model, k, generating, full_match: signs.is_some(), signs })
}

/// Filtration `(D̂, ∂D̂, {ϖ₀ = 0}, T)` and the adapted frame of a first
/// prolongation chart.
pub fn symbol_setup(p: &ProlongChart) -> Result<(Filtration, AdaptedFrame)> {
    if p.depth != 1 {
        return Err(Error::Input("symbol frames are defined on first prolongation charts".into()));
    }
    let g = p.generators();
    let stages = vec![g.to_vec(), g[..3].to_vec(), g[..1].to_vec(), vec![]];
    let filt = Filtration::new(&p.chart, stages)?;
    let n = &p.next;
    let forms = vec![n.omega1.clone(), n.sigma.clone(), n.rho.clone(), g[3].clone(), g[1].clone(), g[2].clone(), g[0].clone()];
    let labels = match p.kind {
        ChartKind::Transversal => F0_LABELS,
        ChartKind::Nontransversal => F1_LABELS,
    };
    let frame = AdaptedFrame::new(&filt, labels.iter().map(|s| s.to_string()).collect(), forms)?;
    Ok((filt, frame))
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagComparison {
    pub filtration_ranks: Vec<usize>,
    pub weak_flag_ranks: Vec<usize>,
    pub agrees: bool,
}

/// Compares the filtration with the weak derived flag of its first stage.
pub fn compare_with_flag(f: &Filtration) -> Result<FlagComparison> {
    let sys = PfaffSystem::new(f.chart(), f.stages()[0].clone())?;
    let flag = weak_flag(&sys, f.depth() + 1)?;
    let ranks = f.ranks();
    let mut agrees = flag.ranks == ranks;
    if agrees {
        for (k, basis) in flag.bases.iter().enumerate() {
            agrees &= basis.iter().all(|x| f.contains(k, x));
        }
    }
    Ok(FlagComparison { filtration_ranks: ranks, weak_flag_ranks: flag.ranks, agrees })
}
