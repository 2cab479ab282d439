//! Rank-2 prolongations of involutive systems: adapted coframe, the two
//! fiber charts with their canonical systems, the chart transition, strata
//! and iterated prolongations.

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{Chart, Coframe, DForm, FormJson, SmoothMap, VectorField};
use crate::jetclassify::{classify_type, fiber_at, FiberDescriptor, RChart, SolvedSystem, TypeLabel};
use crate::pfaffian::PfaffSystem;
use crate::symcore::linalg::{kernel, rank, Scalar};
use crate::symcore::{var, Expr, RationalPoint};

/// Normal coframe of an involutive system:
/// `dϖ̂₁ ≡ 0`, `dϖ̂₂ ≡ ω₂∧π`, `dϖ₀ ≡ ω₁∧ϖ̂₁ + ω₂∧ϖ̂₂`.
#[derive(Clone, Debug)]
pub struct AdaptedCoframe {
    pub w0: DForm,
    pub hat1: DForm,
    pub hat2: DForm,
    pub omega1: DForm,
    pub omega2: DForm,
    pub pi: DForm,
    /// Human-readable record of every normalization applied.
    pub scalings: Vec<String>,
}

impl AdaptedCoframe {
    pub fn forms(&self) -> [&DForm; 6] {
        [&self.w0, &self.hat1, &self.hat2, &self.omega1, &self.omega2, &self.pi]
    }

    pub fn coframe(&self) -> Result<Coframe> {
        Coframe::new(self.forms().iter().map(|f| (*f).clone()).collect())
    }
}

/// First nonzero entry scaled to 1.
fn normalize(v: &[Expr]) -> (Vec<Expr>, Expr) {
    let lead = v.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(Expr::one);
    let inv = lead.recip().expect("nonzero");
    (v.iter().map(|c| c * &inv).collect(), lead)
}

pub fn adapted_coframe(r: &RChart) -> Result<AdaptedCoframe> {
    let fm = r.fiber_matrix();
    // reduced dϖ₁, dϖ₂ on (e1∧e2, e1∧e3, e2∧e3), as columns
    let m: Vec<Vec<Expr>> = (0..3).map(|k| vec![fm[1][k].clone(), fm[2][k].clone()]).collect();
    let ker = kernel(&m, 2);
    if ker.len() != 1 {
        return Err(Error::NotTypeI(format!(
            "expected a one-dimensional space of closed combinations of ϖ₁, ϖ₂, found {}",
            ker.len()
        )));
    }
    let mut scalings = Vec::new();
    let (c, lead) = normalize(&ker[0]);
    if !lead.is_one() {
        scalings.push(format!("closed combination normalized by 1/({lead})"));
    }
    let hat1 = r.w1.scale(&c[0]).add(&r.w2.scale(&c[1]));
    let (hat2, omega_row) = if !c[0].is_zero() { (r.w2.clone(), &fm[2]) } else { (r.w1.clone(), &fm[1]) };
    // Ω ≡ Ω12 dx∧dy + Ω13 dx∧dm + Ω23 dy∧dm modulo the system
    let [o12, o13, o23] = omega_row.clone();
    if o13.is_zero() && o23.is_zero() {
        return Err(Error::NotTypeI("vertical pairing of dϖ̂₂ vanishes".into()));
    }
    let chart = &r.chart;
    let m_name = r.sys.parameter().to_string();
    let omega2 = DForm::from_pairs(chart, &[("x", o13.clone()), ("y", o23.clone())])?;
    // π = dm + u dx + v dy with Ω13 v − Ω23 u = Ω12
    let (u, v) = if o13.pivot_cost() <= o23.pivot_cost() && !o13.is_zero() {
        (Expr::zero(), &o12 / &o13)
    } else {
        (-(&o12 / &o23), Expr::zero())
    };
    let pi = DForm::from_pairs(chart, &[(m_name.as_str(), Expr::one()), ("x", u), ("y", v)])?;

    // dϖ₀ ≡ ϖ̂₁∧A + ϖ̂₂∧B modulo ϖ₀
    let dx = DForm::dx(chart, "x")?;
    let dy = DForm::dx(chart, "y")?;
    let dm = DForm::dx(chart, &m_name)?;
    let k = Coframe::new(vec![r.w0.clone(), hat1.clone(), hat2.clone(), dx.clone(), dy.clone(), dm])?;
    let e = k.expand(&r.w0.d());
    let get = |i: usize, j: usize| e.get(&vec![i, j]).cloned().unwrap_or_else(Expr::zero);
    for (i, j) in [(3, 4), (3, 5), (4, 5), (1, 5), (2, 5)] {
        if !get(i, j).is_zero() {
            return Err(Error::Verification(format!("unexpected component in dϖ₀ at ({i}, {j})")));
        }
    }
    let a = dx.scale(&get(1, 3)).add(&dy.scale(&get(1, 4)));
    let b = dx.scale(&get(2, 3)).add(&dy.scale(&get(2, 4)));
    let omega1 = a.neg();
    let minus_b = b.neg();
    let mut w0 = r.w0.clone();
    if minus_b != omega2 {
        // −B must be a multiple of ω₂; rescale ϖ₀ to absorb it
        let (bx, by) = (minus_b.coeff_of(&["x"]), minus_b.coeff_of(&["y"]));
        let (ox, oy) = (o13.clone(), o23.clone());
        if !(&(&bx * &oy) - &(&by * &ox)).is_zero() {
            return Err(Error::Verification("dϖ₀ is not adapted to ω₂".into()));
        }
        let factor = if !bx.is_zero() { &ox / &bx } else { &oy / &by };
        w0 = w0.scale(&factor);
        scalings.push(format!("ϖ₀ multiplied by {factor}"));
    }
    let out = AdaptedCoframe { w0, hat1, hat2, omega1, omega2, pi, scalings };
    verify_adapted(&out)?;
    Ok(out)
}

/// Re-derives the three structure equations from scratch.
pub fn verify_adapted(a: &AdaptedCoframe) -> Result<()> {
    let cf = a.coframe()?;
    let chart = a.w0.chart();
    let ideal = crate::exterior::Ideal::new(chart, &[a.w0.clone(), a.hat1.clone(), a.hat2.clone()])?;
    if !ideal.reduce(&a.hat1.d()).is_zero() {
        return Err(Error::Verification("dϖ̂₁ is not in the ideal".into()));
    }
    if !ideal.reduce(&a.hat2.d().sub(&a.omega2.wedge(&a.pi))).is_zero() {
        return Err(Error::Verification("dϖ̂₂ differs from ω₂∧π".into()));
    }
    let want = a.omega1.wedge(&a.hat1).add(&a.omega2.wedge(&a.hat2));
    let diff = cf.expand(&a.w0.d().sub(&want));
    // allowed: anything with ϖ₀, or ϖ̂₁∧ϖ̂₂
    if diff.keys().any(|k| k[0] != 0 && *k != vec![1, 2]) {
        return Err(Error::Verification("dϖ₀ congruence fails".into()));
    }
    Ok(())
}

/// Data carried from one prolongation level to the next: the canonical
/// system and a splitting `d θ ≡ σ∧ρ` of its last generator.
#[derive(Clone, Debug)]
pub struct Level {
    pub chart: Chart,
    pub gens: Vec<DForm>,
    pub omega1: DForm,
    pub sigma: DForm,
    pub rho: DForm,
    pub vertical: VectorField,
}

impl Level {
    pub fn root(r: &RChart, a: &AdaptedCoframe) -> Level {
        Level {
            chart: r.chart.clone(),
            gens: vec![a.w0.clone(), a.hat1.clone(), a.hat2.clone()],
            omega1: a.omega1.clone(),
            sigma: a.omega2.clone(),
            rho: a.pi.clone(),
            vertical: r.vertical.clone(),
        }
    }

    pub fn system(&self) -> Result<PfaffSystem> {
        PfaffSystem::new(&self.chart, self.gens.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartKind {
    /// `θ = ρ − a σ`; the plane never contains the fiber direction.
    Transversal,
    /// `θ = σ − b ρ`; the plane contains the fiber direction where `b = 0`.
    Nontransversal,
}

#[derive(Clone, Debug)]
pub struct ProlongChart {
    pub depth: usize,
    pub kind: ChartKind,
    pub fiber_var: String,
    pub chart: Chart,
    pub theta: DForm,
    /// The function in `dθ ≡ σ∧(dc + f ω₁)`.
    pub f: Expr,
    pub next: Level,
    /// Fiber direction of the parent, extended to this chart.
    pub parent_vertical: VectorField,
    /// Index path of kinds from the base, e.g. `[Transversal, Nontransversal]`.
    pub path: Vec<ChartKind>,
}

impl ProlongChart {
    pub fn canonical(&self) -> Result<PfaffSystem> {
        self.next.system()
    }

    pub fn generators(&self) -> &[DForm] {
        &self.next.gens
    }
}

pub fn fiber_name(depth: usize, kind: ChartKind) -> String {
    let base = match kind {
        ChartKind::Transversal => "a",
        ChartKind::Nontransversal => "b",
    };
    if depth == 1 {
        base.to_string()
    } else {
        format!("{base}{depth}")
    }
}

fn extend_field(v: &VectorField, chart: &Chart) -> Result<VectorField> {
    let mut coeffs = vec![Expr::zero(); chart.dim()];
    for (c, name) in v.coeffs().iter().zip(v.chart().coords()) {
        coeffs[chart.index_of(name).ok_or(Error::ChartMismatch)?] = c.clone();
    }
    VectorField::new(chart, coeffs)
}

/// One prolongation step from `level` in the given chart kind.
pub fn child(level: &Level, kind: ChartKind, depth: usize, path: &[ChartKind]) -> Result<ProlongChart> {
    let name = fiber_name(depth, kind);
    let chart = level.chart.extended(&[&name])?;
    let ext = |f: &DForm| f.extend_to(&chart);
    let gens: Vec<DForm> = level.gens.iter().map(ext).collect::<Result<_>>()?;
    let (omega1, sigma, rho) = (ext(&level.omega1)?, ext(&level.sigma)?, ext(&level.rho)?);
    let c = Expr::var(&var(&name));
    let (theta, keep) = match kind {
        ChartKind::Transversal => (rho.sub(&sigma.scale(&c)), sigma),
        ChartKind::Nontransversal => (sigma.sub(&rho.scale(&c)), rho),
    };
    let dc = DForm::dx(&chart, &name)?;
    let ng = gens.len();
    let mut forms = gens.clone();
    forms.extend([theta.clone(), omega1.clone(), keep.clone(), dc.clone()]);
    let cf = Coframe::new(forms)?;
    let e = cf.expand(&theta.d());
    let get = |i: usize, j: usize| e.get(&vec![i, j]).cloned().unwrap_or_else(Expr::zero);
    let (iw, ik, id) = (ng + 1, ng + 2, ng + 3);
    if !get(ik, id).is_one() || !get(iw, id).is_zero() {
        return Err(Error::Verification(format!(
            "dθ has unexpected fiber components ({}, {}) on chart {chart}",
            get(ik, id),
            get(iw, id)
        )));
    }
    let f = -get(iw, ik);
    let rho_next = dc.add(&omega1.scale(&f));
    let mut next_gens = gens;
    next_gens.push(theta.clone());
    let mut p = path.to_vec();
    p.push(kind);
    Ok(ProlongChart {
        depth,
        kind,
        fiber_var: name.clone(),
        parent_vertical: extend_field(&level.vertical, &chart)?,
        next: Level {
            chart: chart.clone(),
            gens: next_gens,
            omega1,
            sigma: keep,
            rho: rho_next,
            vertical: VectorField::coordinate(&chart, &name)?,
        },
        chart,
        theta,
        f,
        path: p,
    })
}

/// `(v, a) ↦ (v, 1/a)` from a transversal chart to its sibling.
#[derive(Clone, Debug)]
pub struct Transition {
    pub source: ProlongChart,
    pub target: ProlongChart,
    pub map: SmoothMap,
}

impl Transition {
    pub fn between(source: &ProlongChart, target: &ProlongChart) -> Result<Transition> {
        let a = Expr::var(&var(&source.fiber_var));
        let comps = target
            .chart
            .coords()
            .iter()
            .map(|v| {
                if v.as_str() == target.fiber_var {
                    Ok(a.recip()?)
                } else if source.chart.index_of(v).is_some() {
                    Ok(Expr::var(v))
                } else {
                    Err(Error::ChartMismatch)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Transition { source: source.clone(), target: target.clone(), map: SmoothMap::new(&source.chart, &target.chart, comps)? })
    }

    pub fn domain(&self) -> String {
        format!("{} != 0", self.source.fiber_var)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TransitionReport {
    pub passed: bool,
    /// Normal forms of the pulled-back generators; all zero on success.
    pub residues: Vec<String>,
    /// Whether the composite with the inverse map is the identity.
    pub round_trip: bool,
}

pub fn transition_check(t: &Transition) -> Result<TransitionReport> {
    let ideal = crate::exterior::Ideal::new(&t.source.chart, t.source.generators())?;
    let mut residues = Vec::new();
    for g in t.target.generators() {
        residues.push(ideal.reduce(&t.map.pullback(g)?).to_string());
    }
    // inverse: (v, b) ↦ (v, 1/b)
    let b = Expr::var(&var(&t.target.fiber_var));
    let inv_comps = t
        .source
        .chart
        .coords()
        .iter()
        .map(|v| if v.as_str() == t.source.fiber_var { b.recip().map_err(Error::from) } else { Ok(Expr::var(v)) })
        .collect::<Result<Vec<_>>>()?;
    let inv = SmoothMap::new(&t.target.chart, &t.source.chart, inv_comps)?;
    let round = t.map.then(&inv)?;
    let round_trip = round.components().iter().zip(t.source.chart.coords()).all(|(c, v)| *c == Expr::var(v));
    Ok(TransitionReport { passed: residues.iter().all(|r| r == "0"), residues, round_trip })
}

/// Transition check against arbitrary generators, for negative controls.
pub fn pulled_residues(t: &Transition, target_gens: &[DForm]) -> Result<Vec<DForm>> {
    let ideal = crate::exterior::Ideal::new(&t.source.chart, t.source.generators())?;
    target_gens.iter().map(|g| Ok(ideal.reduce(&t.map.pullback(g)?))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Stratum {
    #[serde(rename = "sigma0")]
    Sigma0,
    #[serde(rename = "sigma1")]
    Sigma1,
}

/// Whether the tautological plane at the point contains the fiber direction.
pub fn stratify(p: &ProlongChart, pt: &RationalPoint) -> Result<Stratum> {
    let v = p.theta.eval_on_fields(&[&p.parent_vertical]).eval(pt)?;
    Ok(if v.is_zero() { Stratum::Sigma1 } else { Stratum::Sigma0 })
}

/// Both charts over an involutive base plus their transition.
#[derive(Clone, Debug)]
pub struct Prolongation {
    pub adapted: AdaptedCoframe,
    pub transversal: ProlongChart,
    pub nontransversal: ProlongChart,
    pub transition: Transition,
}

#[derive(Clone, Debug)]
pub enum ProlongOutcome {
    Charts(Box<Prolongation>),
    /// Non-involutive: at most one integral element per point.
    Trivial { label: TypeLabel, fibers: Vec<FiberDescriptor> },
}

/// Classifies at every sample point, then prolongs.
pub fn prolong(r: &RChart, sys: &SolvedSystem, samples: &[RationalPoint]) -> Result<ProlongOutcome> {
    if samples.is_empty() {
        return Err(Error::Input("at least one sample point is required".into()));
    }
    let mut label: Option<TypeLabel> = None;
    for pt in samples {
        let l = classify_type(r, sys, pt)?.label;
        match &label {
            None => label = Some(l),
            Some(prev) if *prev != l => {
                return Err(Error::MixedType(format!("{prev} and {l} among the sample points")));
            }
            _ => {}
        }
    }
    let label = label.unwrap();
    if label != TypeLabel::I {
        let fibers = samples.iter().map(|pt| fiber_at(r, pt)).collect::<Result<_>>()?;
        return Ok(ProlongOutcome::Trivial { label, fibers });
    }
    Ok(ProlongOutcome::Charts(Box::new(prolong_involutive(r)?)))
}

pub fn prolong_involutive(r: &RChart) -> Result<Prolongation> {
    let adapted = adapted_coframe(r)?;
    let root = Level::root(r, &adapted);
    let transversal = child(&root, ChartKind::Transversal, 1, &[])?;
    let nontransversal = child(&root, ChartKind::Nontransversal, 1, &[])?;
    let transition = Transition::between(&transversal, &nontransversal)?;
    Ok(Prolongation { adapted, transversal, nontransversal, transition })
}

/// Integral 2-planes of a rank-3 system at a point: the kernel dimension of
/// `η ↦ (dg(η))_g` on `Λ²D`.
pub fn fiber_kernel_dim(s: &PfaffSystem, pt: &RationalPoint) -> Result<usize> {
    let fr = s.dual_frame();
    if fr.len() != 3 {
        return Err(Error::Input("fiber dimension is defined here for rank-3 systems".into()));
    }
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for g in s.generators() {
        let dg = g.d();
        let row = pairs
            .iter()
            .map(|&(i, j)| dg.eval_on_fields(&[&fr[i], &fr[j]]).eval(pt))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Degenerate(e.to_string()))?;
        rows.push(row);
    }
    Ok(3 - rank(&rows, 3))
}

/// Random rational point on a chart at which every listed expression is
/// defined and nonzero.
pub fn random_point(chart: &Chart, rng: &mut ChaCha8Rng, avoid: &[Expr]) -> RationalPoint {
    loop {
        let pt: RationalPoint = chart
            .coords()
            .iter()
            .map(|v| {
                let n: i64 = rng.gen_range(-9..=9);
                let d: i64 = rng.gen_range(1..=4);
                (v.clone(), BigRational::new(n.into(), d.into()))
            })
            .collect();
        if avoid.iter().all(|e| e.eval(&pt).is_ok_and(|x| !x.is_zero())) {
            return pt;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelCheck {
    pub depth: usize,
    pub charts: usize,
    /// Kernel dimensions at the sample points, chart by chart.
    pub kernel_dims: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Tower {
    pub levels: Vec<Vec<ProlongChart>>,
    pub checks: Vec<LevelCheck>,
}

/// Iterated prolongation to `depth` levels, checking the fiber dimension
/// at `samples` seeded random points on every chart.
pub fn tower(r: &RChart, depth: usize, samples: usize, seed: u64) -> Result<Tower> {
    if depth < 1 {
        return Err(Error::Input("depth must be at least 1".into()));
    }
    let adapted = adapted_coframe(r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut frontier = vec![(Level::root(r, &adapted), Vec::<ChartKind>::new())];
    let mut levels = Vec::new();
    let mut checks = Vec::new();
    for k in 1..=depth {
        let mut charts = Vec::new();
        for (lvl, path) in &frontier {
            for kind in [ChartKind::Transversal, ChartKind::Nontransversal] {
                charts.push(child(lvl, kind, k, path)?);
            }
        }
        let mut dims = Vec::new();
        for c in &charts {
            let sys = c.canonical()?;
            let avoid: Vec<Expr> = sys
                .dual_frame()
                .iter()
                .flat_map(|f| f.coeffs().iter().map(|e| Expr::from_poly(e.denom().clone())))
                .collect();
            let mut ds = Vec::new();
            for _ in 0..samples {
                let pt = random_point(&c.chart, &mut rng, &avoid);
                let d = fiber_kernel_dim(&sys, &pt)?;
                if d != 2 {
                    return Err(Error::Degenerate(format!("fiber dimension {d} on chart {} at depth {k}", c.chart)));
                }
                ds.push(d);
            }
            dims.push(ds);
        }
        checks.push(LevelCheck { depth: k, charts: charts.len(), kernel_dims: dims });
        frontier = charts.iter().map(|c| (c.next.clone(), c.path.clone())).collect();
        levels.push(charts);
    }
    Ok(Tower { levels, checks })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartReport {
    pub kind: ChartKind,
    pub coordinates: Vec<String>,
    pub theta: String,
    pub generators: Vec<FormJson>,
    pub f_expr: String,
}

impl ProlongChart {
    pub fn report(&self) -> ChartReport {
        ChartReport {
            kind: self.kind,
            coordinates: self.chart.coords().iter().map(|v| v.to_string()).collect(),
            theta: self.theta.to_string(),
            generators: self.generators().iter().map(DForm::to_json).collect(),
            f_expr: self.f.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TransitionJson {
    pub domain: String,
    pub map: std::collections::BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumSample {
    pub chart: ChartKind,
    #[serde(serialize_with = "ser_point")]
    pub point: RationalPoint,
    pub stratum: Stratum,
}

fn ser_point<S: serde::Serializer>(pt: &RationalPoint, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::io::point_to_json(pt).serialize(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProlongReport {
    pub adapted_coframe: std::collections::BTreeMap<String, String>,
    pub scalings: Vec<String>,
    pub charts: Vec<ChartReport>,
    pub transition: TransitionJson,
    pub strata_samples: Vec<StratumSample>,
}

impl Prolongation {
    /// Report with strata evaluated over `base` points with fiber coordinate
    /// 0 and 1 on each chart.
    pub fn report(&self, base: &[RationalPoint]) -> Result<ProlongReport> {
        let a = &self.adapted;
        let names = ["w0", "w1_hat", "w2_hat", "omega1", "omega2", "pi"];
        let adapted_coframe = names.iter().zip(a.forms()).map(|(n, f)| (n.to_string(), f.to_string())).collect();
        let map = self
            .transition
            .map
            .target()
            .coords()
            .iter()
            .zip(self.transition.map.components())
            .map(|(v, c)| (v.to_string(), c.to_string()))
            .collect();
        let mut strata_samples = Vec::new();
        for pt in base {
            for c in [&self.transversal, &self.nontransversal] {
                for v in [0, 1] {
                    let mut p = pt.clone();
                    p.insert(var(&c.fiber_var), BigRational::from_integer(v.into()));
                    strata_samples.push(StratumSample { chart: c.kind, stratum: stratify(c, &p)?, point: p });
                }
            }
        }
        Ok(ProlongReport {
            adapted_coframe,
            scalings: a.scalings.clone(),
            charts: vec![self.transversal.report(), self.nontransversal.report()],
            transition: TransitionJson { domain: self.transition.domain(), map },
            strata_samples,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetclassify::build_chart;
    use crate::symcore::{ex, point};

    fn cartan() -> (SolvedSystem, RChart) {
        let s = SolvedSystem::new(&[("r", ex("t^3/3")), ("s", ex("t^2/2"))], "t").unwrap();
        let r = build_chart(&s).unwrap();
        (s, r)
    }

    #[test]
    fn cartan_adapted_coframe() {
        let (_, r) = cartan();
        let a = adapted_coframe(&r).unwrap();
        assert_eq!(a.hat1, r.w1.sub(&r.w2.scale(&ex("t"))));
        assert_eq!(a.omega1, DForm::dx(&r.chart, "x").unwrap());
        assert_eq!(a.omega2, DForm::from_pairs(&r.chart, &[("x", ex("t")), ("y", ex("1"))]).unwrap());
        assert_eq!(a.pi, DForm::dx(&r.chart, "t").unwrap());
        assert!(a.scalings.is_empty());
    }

    #[test]
    fn flat_adapted_coframe() {
        let s = SolvedSystem::new(&[("r", ex("0")), ("s", ex("0"))], "t").unwrap();
        let r = build_chart(&s).unwrap();
        let a = adapted_coframe(&r).unwrap();
        assert_eq!(a.hat1, DForm::dx(&r.chart, "p").unwrap());
        assert_eq!(a.omega2, DForm::dx(&r.chart, "y").unwrap());
        assert_eq!(a.pi, DForm::dx(&r.chart, "t").unwrap());
        assert_eq!(a.omega1, DForm::dx(&r.chart, "x").unwrap());
    }

    #[test]
    fn finite_type_has_no_adapted_coframe() {
        let s = SolvedSystem::new(&[("r", ex("-t")), ("s", ex("0"))], "t").unwrap();
        assert!(matches!(adapted_coframe(&build_chart(&s).unwrap()), Err(Error::NotTypeI(_))));
    }

    #[test]
    fn cartan_charts() {
        let (_, r) = cartan();
        let p = prolong_involutive(&r).unwrap();
        let c = &p.transversal.chart;
        let want_t = DForm::from_pairs(c, &[("t", ex("1")), ("x", ex("-t*a")), ("y", ex("-a"))]).unwrap();
        assert_eq!(p.transversal.theta, want_t);
        let c = &p.nontransversal.chart;
        let want_y = DForm::from_pairs(c, &[("y", ex("1")), ("x", ex("t")), ("t", ex("-b"))]).unwrap();
        assert_eq!(p.nontransversal.theta, want_y);
        assert_eq!(p.transversal.f, ex("-a^2"));
        assert_eq!(p.nontransversal.f, ex("1"));
        let rep = transition_check(&p.transition).unwrap();
        assert!(rep.passed && rep.round_trip, "{rep:?}");
    }

    #[test]
    fn strata() {
        let (_, r) = cartan();
        let p = prolong_involutive(&r).unwrap();
        let base = [("x", 1), ("y", 2), ("z", 0), ("p", 1), ("q", -1), ("t", 3)];
        let mut b0 = base.to_vec();
        b0.push(("b", 0));
        assert_eq!(stratify(&p.nontransversal, &point(&b0)).unwrap(), Stratum::Sigma1);
        let mut b1 = base.to_vec();
        b1.push(("b", 1));
        assert_eq!(stratify(&p.nontransversal, &point(&b1)).unwrap(), Stratum::Sigma0);
        let mut a0 = base.to_vec();
        a0.push(("a", 0));
        assert_eq!(stratify(&p.transversal, &point(&a0)).unwrap(), Stratum::Sigma0);
    }

    #[test]
    fn corrupted_theta_leaves_residue() {
        let (_, r) = cartan();
        let p = prolong_involutive(&r).unwrap();
        let mut bad = p.nontransversal.generators().to_vec();
        let last = bad.pop().unwrap();
        bad.push(last.add(&DForm::dx(&p.nontransversal.chart, "x").unwrap()));
        let res = pulled_residues(&p.transition, &bad).unwrap();
        assert!(!res.last().unwrap().is_zero());
    }

    #[test]
    fn non_involutive_prolongation_is_trivial() {
        let s = SolvedSystem::new(&[("r", ex("-t")), ("s", ex("0"))], "t").unwrap();
        let r = build_chart(&s).unwrap();
        let pt = point(&[("x", 0), ("y", 0), ("z", 0), ("p", 0), ("q", 0), ("t", 1)]);
        assert!(matches!(prolong(&r, &s, &[pt]).unwrap(), ProlongOutcome::Trivial { label: TypeLabel::II, .. }));
    }

    #[test]
    fn tower_depth_one_matches_prolong() {
        let (_, r) = cartan();
        let t = tower(&r, 1, 2, 7).unwrap();
        let p = prolong_involutive(&r).unwrap();
        assert_eq!(t.levels[0][0].theta, p.transversal.theta);
        assert_eq!(t.levels[0][1].theta, p.nontransversal.theta);
    }
}
