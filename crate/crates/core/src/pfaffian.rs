//! Pfaffian systems: dual frames, derived flags, Cauchy characteristics.

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{Chart, DForm, FormJson, Ideal, VectorField};
use crate::symcore::linalg::{bareiss, generic_rank, rank, rref};
use crate::symcore::{Expr, Poly, RationalPoint};

/// A distribution given by its annihilating 1-forms.
#[derive(Clone, Debug)]
pub struct PfaffSystem {
    chart: Chart,
    generators: Vec<DForm>,
    ideal: Ideal,
}

impl PfaffSystem {
    pub fn new(chart: &Chart, generators: Vec<DForm>) -> Result<Self> {
        let ideal = Ideal::new(chart, &generators)?;
        if generators.len() >= chart.dim() {
            return Err(Error::Input("a Pfaffian system needs rank at least 1".into()));
        }
        Ok(PfaffSystem { chart: chart.clone(), generators, ideal })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn generators(&self) -> &[DForm] {
        &self.generators
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn rank(&self) -> usize {
        self.chart.dim() - self.generators.len()
    }

    pub fn reduce(&self, a: &DForm) -> DForm {
        self.ideal.reduce(a)
    }

    /// Fields spanning the distribution, one per free coordinate, each with
    /// a 1 in that coordinate's slot.
    pub fn dual_frame(&self) -> Vec<VectorField> {
        self.ideal.kernel_fields().to_vec()
    }

    pub fn to_json(&self) -> Vec<FormJson> {
        self.generators.iter().map(DForm::to_json).collect()
    }

    /// Whether `x` lies in the distribution.
    pub fn contains_field(&self, x: &VectorField) -> bool {
        self.generators.iter().all(|g| g.eval_on_fields(&[x]).is_zero())
    }

    /// Annihilator of the span of `fields`, as a system on the same chart.
    pub fn from_fields(chart: &Chart, fields: &[VectorField]) -> Result<PfaffSystem> {
        let m: Vec<Vec<Expr>> = fields.iter().map(|f| f.coeffs().to_vec()).collect();
        let ech = rref(&m, chart.dim());
        let gens: Vec<DForm> = ech.kernel().into_iter().map(|v| DForm::one_form(chart, v)).collect();
        PfaffSystem::new(chart, gens)
    }
}

/// Result of a generic linear-algebra computation: the value plus the
/// polynomials on whose zero set the generic answer may fail.
#[derive(Clone, Debug)]
pub struct WithLoci<T> {
    pub value: T,
    pub loci: Vec<Poly>,
}

/// First derived system via the annihilator formula: combinations of
/// generators whose exterior derivative lies in the ideal.
pub fn derived(s: &PfaffSystem) -> Result<WithLoci<PfaffSystem>> {
    let free = s.ideal.free().to_vec();
    let pairs = crate::exterior::subsets(&(0..free.len()).collect::<Vec<_>>(), 2);
    let reduced: Vec<DForm> = s.generators.iter().map(|g| s.reduce(&g.d())).collect();
    // rows: free 2-index; columns: generators
    let m: Vec<Vec<Expr>> = pairs
        .iter()
        .map(|pq| {
            let idx = vec![free[pq[0]], free[pq[1]]];
            reduced.iter().map(|r| r.coeff(&idx)).collect()
        })
        .collect();
    let ech = rref(&m, s.generators.len());
    let gens: Vec<DForm> = ech
        .kernel()
        .into_iter()
        .map(|c| {
            c.iter()
                .zip(&s.generators)
                .filter(|(ci, _)| !ci.is_zero())
                .fold(DForm::zero(&s.chart, 1), |acc, (ci, g)| acc.add(&g.scale(ci)))
        })
        .collect();
    let loci = ech.loci();
    if gens.is_empty() {
        // full tangent bundle: represent with no generators
        return Ok(WithLoci {
            value: PfaffSystem { chart: s.chart.clone(), ideal: Ideal::new(&s.chart, &[])?, generators: gens },
            loci,
        });
    }
    Ok(WithLoci { value: PfaffSystem::new(&s.chart, gens)?, loci })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FlagMode {
    Strong,
    Weak,
}

/// Flag of distributions `D = D^{-1} ⊂ D^{-2} ⊂ …` given by spanning fields.
#[derive(Clone, Debug)]
pub struct DerivedFlag {
    pub mode: FlagMode,
    pub chart: Chart,
    /// Independent fields spanning each stage; stage `k` extends stage `k-1`.
    pub bases: Vec<Vec<VectorField>>,
    /// Every field computed for each stage, dependent ones included.
    pub spanning: Vec<Vec<VectorField>>,
    pub ranks: Vec<usize>,
    pub loci: Vec<Poly>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlagReport {
    pub mode: FlagMode,
    pub ranks: Vec<usize>,
    pub degeneracy_loci: Vec<String>,
}

impl DerivedFlag {
    pub fn report(&self) -> FlagReport {
        FlagReport {
            mode: self.mode,
            ranks: self.ranks.clone(),
            degeneracy_loci: self.loci.iter().map(|p| p.to_string()).collect(),
        }
    }

    /// Stage `k` (1-based) as a Pfaffian system; `None` for the full
    /// tangent bundle.
    pub fn stage_system(&self, k: usize) -> Result<Option<PfaffSystem>> {
        let b = &self.bases[k - 1];
        if b.len() == self.chart.dim() {
            return Ok(None);
        }
        PfaffSystem::from_fields(&self.chart, b).map(Some)
    }

    /// Ranks strictly increase and then stay constant.
    pub fn monotone(&self) -> bool {
        let r = &self.ranks;
        r.windows(2).all(|w| w[0] <= w[1])
            && r.windows(2).skip_while(|w| w[0] < w[1]).all(|w| w[0] == w[1])
    }

    /// Checks `[D^{-p}, D^{-q}] ⊂ D^{-(p+q)}` on basis sections.
    pub fn bracket_compatible(&self) -> bool {
        let n = self.bases.len();
        for p in 1..=n {
            for q in p..=n {
                let target = &self.bases[(p + q).min(n) - 1];
                if target.len() == self.chart.dim() {
                    continue;
                }
                let base: Vec<Vec<Expr>> = target.iter().map(|f| f.coeffs().to_vec()).collect();
                let r0 = base.len();
                for x in &self.bases[p - 1] {
                    for y in &self.bases[q - 1] {
                        let mut m = base.clone();
                        m.push(x.lie_bracket(y).coeffs().to_vec());
                        if generic_rank(&m, self.chart.dim()) > r0 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Greedy extension of `basis` by those `fields` that raise the rank.
fn extend_basis(chart: &Chart, basis: &[VectorField], fields: &[VectorField]) -> (Vec<VectorField>, Vec<Poly>) {
    let mut out = basis.to_vec();
    let mut cur: Vec<Vec<Expr>> = basis.iter().map(|f| f.coeffs().to_vec()).collect();
    for f in fields {
        if cur.len() == chart.dim() {
            break;
        }
        cur.push(f.coeffs().to_vec());
        if generic_rank(&cur, chart.dim()) == cur.len() {
            out.push(f.clone());
        } else {
            cur.pop();
        }
    }
    (out, bareiss(&cur, chart.dim()).1)
}

fn flag(s: &PfaffSystem, max_depth: usize, mode: FlagMode) -> Result<DerivedFlag> {
    if max_depth < 1 {
        return Err(Error::Input("max_depth must be at least 1".into()));
    }
    let chart = s.chart.clone();
    let d1 = s.dual_frame();
    let mut bases = vec![d1.clone()];
    let mut spanning = vec![d1.clone()];
    let mut ranks = vec![d1.len()];
    let mut loci: Vec<Poly> = Vec::new();
    while bases.len() < max_depth {
        let prev = bases.last().unwrap().clone();
        let left = match mode {
            FlagMode::Weak => d1.clone(),
            FlagMode::Strong => prev.clone(),
        };
        let mut new_fields = Vec::new();
        for x in &left {
            for y in &prev {
                let b = x.lie_bracket(y);
                if !b.is_zero() {
                    new_fields.push(b);
                }
            }
        }
        let (basis, l) = extend_basis(&chart, &prev, &new_fields);
        for p in l {
            if !loci.contains(&p) {
                loci.push(p);
            }
        }
        let mut span = prev.clone();
        span.extend(new_fields);
        let stable = basis.len() == prev.len();
        ranks.push(basis.len());
        bases.push(basis);
        spanning.push(span);
        if stable || ranks.last() == Some(&chart.dim()) {
            if stable {
                // drop the repeated stage
                ranks.pop();
                bases.pop();
                spanning.pop();
            }
            break;
        }
    }
    Ok(DerivedFlag { mode, chart, bases, spanning, ranks, loci })
}

/// Weak derived flag `∂^{(k)}D = ∂^{(k-1)}D + [D, ∂^{(k-1)}D]`.
pub fn weak_flag(s: &PfaffSystem, max_depth: usize) -> Result<DerivedFlag> {
    flag(s, max_depth, FlagMode::Weak)
}

/// Strong derived flag `∂D = D + [D, D]`, iterated.
pub fn derived_flag(s: &PfaffSystem, max_depth: usize) -> Result<DerivedFlag> {
    flag(s, max_depth, FlagMode::Strong)
}

/// Pointwise ranks of the stages of a flag.
pub fn growth_at(flag: &DerivedFlag, pt: &RationalPoint) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (k, span) in flag.spanning.iter().enumerate() {
        let m: Vec<Vec<BigRational>> = span
            .iter()
            .map(|f| f.eval(pt))
            .collect::<Result<_>>()
            .map_err(|e| Error::Degenerate(format!("frame undefined at the point: {e}")))?;
        let r = rank(&m, flag.chart.dim());
        if r != flag.ranks[k] {
            return Err(Error::Degenerate(format!(
                "stage {} has rank {} at the point instead of {}",
                k + 1,
                r,
                flag.ranks[k]
            )));
        }
        out.push(r);
    }
    Ok(out)
}

/// Cauchy characteristics: fields `X` of the system with `X ⌟ dg ≡ 0` for
/// every generator `g`.
#[derive(Clone, Debug)]
pub struct Cauchy {
    pub fields: Vec<VectorField>,
    pub loci: Vec<Poly>,
}

impl Cauchy {
    pub fn rank(&self) -> usize {
        self.fields.len()
    }
}

pub fn cauchy_char(s: &PfaffSystem) -> Result<Cauchy> {
    let frame = s.dual_frame();
    let free = s.ideal.free().to_vec();
    let dg: Vec<DForm> = s.generators.iter().map(DForm::d).collect();
    // column j holds the conditions contributed by frame field j
    let cols: Vec<Vec<Expr>> = frame
        .iter()
        .map(|e| {
            let mut col = Vec::new();
            for g in &dg {
                let r = s.reduce(&g.interior(e));
                col.extend(free.iter().map(|&k| r.coeff(&[k])));
            }
            col
        })
        .collect();
    let nrows = cols.first().map_or(0, Vec::len);
    let m: Vec<Vec<Expr>> = (0..nrows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    let ech = rref(&m, frame.len());
    let fields = ech
        .kernel()
        .into_iter()
        .map(|xi| {
            let f = xi
                .iter()
                .zip(&frame)
                .filter(|(c, _)| !c.is_zero())
                .fold(VectorField::zero(&s.chart), |acc, (c, e)| acc.add(&e.scale(c)));
            normalize_field(&f)
        })
        .collect();
    Ok(Cauchy { fields, loci: ech.loci() })
}

/// Scale so the first nonzero coordinate component is 1.
pub fn normalize_field(f: &VectorField) -> VectorField {
    match f.coeffs().iter().find(|c| !c.is_zero()) {
        Some(c) if !c.is_one() => f.scale(&c.recip().expect("nonzero")),
        _ => f.clone(),
    }
}

/// Whether the span of `fields` is closed under brackets.
pub fn involutive(chart: &Chart, fields: &[VectorField]) -> bool {
    let base: Vec<Vec<Expr>> = fields.iter().map(|f| f.coeffs().to_vec()).collect();
    let r0 = generic_rank(&base, chart.dim());
    for (i, x) in fields.iter().enumerate() {
        for y in &fields[i + 1..] {
            let mut m = base.clone();
            m.push(x.lie_bracket(y).coeffs().to_vec());
            if generic_rank(&m, chart.dim()) > r0 {
                return false;
            }
        }
    }
    true
}

/// Whether the annihilator-formula derived system and the second stage of
/// the bracket flag agree in rank and span.
pub fn derived_agrees_with_flag(s: &PfaffSystem) -> Result<bool> {
    let der = derived(s)?.value;
    let fl = weak_flag(s, 2)?;
    let stage2 = fl.bases.get(1).unwrap_or(&fl.bases[0]);
    if der.rank() != stage2.len() {
        return Ok(false);
    }
    Ok(stage2.iter().all(|x| der.contains_field(x)))
}
