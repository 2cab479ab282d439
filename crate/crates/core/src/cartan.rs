//! Cartan's system `r = t³/3, s = t²/2`: adapted coframe and charts, the
//! Cauchy quotient onto the flat (2,3,5) model, and the two constructions
//! of its singular solutions.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{Chart, DForm, SmoothMap, VectorField};
use crate::jetclassify::{build_chart, fiber_at, RChart, SolvedSystem};
use crate::pfaffian::{cauchy_char, normalize_field, PfaffSystem};
use crate::prolong::{prolong_involutive, random_point};
use crate::symcore::linalg::{kernel, rank};
use crate::symcore::{ex, gcd, var, Expr, Poly, RationalPoint, VarName};

pub fn cartan_system() -> SolvedSystem {
    SolvedSystem::new(&[("r", ex("t^3/3")), ("s", ex("t^2/2"))], "t").expect("fixed system")
}

pub fn cartan_chart() -> RChart {
    build_chart(&cartan_system()).expect("fixed system")
}

/// The characteristic field `∂x − t∂y + (p − tq)∂z − (t³/6)∂p − (t²/2)∂q`.
pub fn cauchy_field(c: &Chart) -> VectorField {
    VectorField::from_pairs(
        c,
        &[("x", ex("1")), ("y", ex("-t")), ("z", ex("p - t*q")), ("p", ex("-t^3/6")), ("q", ex("-t^2/2"))],
    )
    .expect("jet chart")
}

#[derive(Clone, Debug, Serialize)]
pub struct CoveringReport {
    pub hat1: String,
    pub omega1: String,
    pub omega2: String,
    pub pi: String,
    pub w_t: String,
    pub w_y: String,
    pub points_checked: usize,
    /// Every integral element with `dy∧dt ≠ 0` also has `dx∧dt ≠ 0`.
    pub yt_inside_xt: bool,
}

/// Whether, in a 2-dimensional pencil of integral elements given by their
/// `(e1∧e2, e1∧e3, e2∧e3)` components, vanishing `dx∧dt` forces vanishing
/// `dy∧dt`.
fn yt_inside_xt(basis: &[[BigRational; 3]]) -> bool {
    let rows: Vec<Vec<BigRational>> = vec![basis.iter().map(|v| v[1].clone()).collect()];
    kernel(&rows, basis.len()).iter().all(|coef| {
        let c23: BigRational = basis.iter().zip(coef).map(|(v, c)| &v[2] * c).sum();
        c23.is_zero()
    })
}

pub fn coframe_and_covering(samples: usize, seed: u64) -> Result<CoveringReport> {
    let r = cartan_chart();
    let p = prolong_involutive(&r)?;
    let a = &p.adapted;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = true;
    for i in 0..samples {
        let mut pt = random_point(&r.chart, &mut rng, &[]);
        if i % 2 == 0 {
            pt.insert(var("t"), BigRational::zero());
        }
        let f = fiber_at(&r, &pt)?;
        ok &= f.kernel_dim == 2 && yt_inside_xt(&f.kernel_basis);
    }
    Ok(CoveringReport {
        hat1: a.hat1.to_string(),
        omega1: a.omega1.to_string(),
        omega2: a.omega2.to_string(),
        pi: a.pi.to_string(),
        w_t: p.transversal.theta.to_string(),
        w_y: p.nontransversal.theta.to_string(),
        points_checked: samples,
        yt_inside_xt: ok,
    })
}

/// Quotient of `R` by the Cauchy characteristic and a section of it.
#[derive(Clone, Debug)]
pub struct LeafChart {
    /// `R → B`, components `x1 … x5`.
    pub quotient: SmoothMap,
    /// `B × ℝ(λ) → R`.
    pub lift: SmoothMap,
}

pub fn base_chart() -> Chart {
    Chart::new(&["x1", "x2", "x3", "x4", "x5"]).expect("fixed chart")
}

pub fn leaf_chart() -> Result<LeafChart> {
    let r = cartan_chart();
    let quotient = SmoothMap::new(
        &r.chart,
        &base_chart(),
        vec![ex("z - x*p + x*q*t + x^2*t^3/6"), ex("p - q*t + y*t^2/2 + t^3*x/6"), ex("-q + y*t/2"), ex("y + x*t"), ex("-t")],
    )?;
    let bl = Chart::new(&["x1", "x2", "x3", "x4", "x5", "lam"])?;
    let lift = SmoothMap::new(
        &bl,
        &r.chart,
        vec![
            ex("lam"),
            ex("x4 + lam*x5"),
            ex("x1 + lam*x2 - lam*x4*x5^2/2 - lam^2*x5^3/6"),
            ex("x2 + x3*x5 + lam*x5^3/6"),
            ex("-x3 - x4*x5/2 - lam*x5^2/2"),
            ex("-x5"),
        ],
    )?;
    Ok(LeafChart { quotient, lift })
}

#[derive(Clone, Debug, Serialize)]
pub struct LeafReport {
    pub annihilated: Vec<bool>,
    pub lift_then_quotient: bool,
    pub quotient_then_lift: bool,
}

impl LeafChart {
    pub fn verify(&self) -> Result<LeafReport> {
        let ch = cauchy_field(self.quotient.source());
        let annihilated = self.quotient.components().iter().map(|f| ch.apply(f).is_zero()).collect();
        // B × λ → R → B should forget λ
        let lq = self.lift.then(&self.quotient)?;
        let lift_then_quotient = lq.components().iter().zip(base_chart().coords()).all(|(c, v)| *c == Expr::var(v));
        // R → B × λ (λ = x) → R should be the identity
        let mut comps = self.quotient.components().to_vec();
        comps.push(ex("x"));
        let up = SmoothMap::new(self.quotient.source(), self.lift.source(), comps)?;
        let ql = up.then(&self.lift)?;
        let quotient_then_lift = ql.components().iter().zip(ql.target().coords()).all(|(c, v)| *c == Expr::var(v));
        Ok(LeafReport { annihilated, lift_then_quotient, quotient_then_lift })
    }
}

/// `{α₁ = α₂ = α₃ = 0}` on `(x1, …, x5)`.
pub fn db_system() -> PfaffSystem {
    let b = base_chart();
    let forms = vec![
        DForm::from_pairs(&b, &[("x1", ex("1")), ("x4", ex("x3 + x4*x5/2"))]),
        DForm::from_pairs(&b, &[("x2", ex("1")), ("x5", ex("x3 - x4*x5/2"))]),
        DForm::from_pairs(&b, &[("x3", ex("1")), ("x5", ex("x4/2")), ("x4", ex("-x5/2"))]),
    ];
    PfaffSystem::new(&b, forms.into_iter().collect::<Result<_>>().expect("fixed forms")).expect("independent")
}

#[derive(Clone, Debug, Serialize)]
pub struct FormRelations {
    /// `ϖ₀ = p*α₁ + x p*α₂`
    pub w0: bool,
    /// `ϖ₁ = p*α₂ − t p*α₃`
    pub w1: bool,
    /// `ϖ₂ = −p*α₃`
    pub w2: bool,
    /// `ϖ₁ = p*α₂ − x p*α₃`; fails, since `p*α₂` carries `−t dq`.
    pub w1_with_x: bool,
}

pub fn form_relations() -> Result<FormRelations> {
    let r = cartan_chart();
    let leaf = leaf_chart()?;
    let db = db_system();
    let a: Vec<DForm> = db.generators().iter().map(|g| leaf.quotient.pullback(g)).collect::<Result<_>>()?;
    let (x, t) = (ex("x"), ex("t"));
    Ok(FormRelations {
        w0: r.w0 == a[0].add(&a[1].scale(&x)),
        w1: r.w1 == a[1].sub(&a[2].scale(&t)),
        w2: r.w2 == a[2].neg(),
        w1_with_x: r.w1 == a[1].sub(&a[2].scale(&x)),
    })
}

/// A surface in the nontransversal prolongation chart `(x, y, z, p, q, t, b)`.
#[derive(Clone, Debug)]
pub struct SolutionSurface {
    pub map: SmoothMap,
    pub free_function: Expr,
    /// Set when the free function's derivative does not vanish at 0.
    pub warning: Option<String>,
    /// The integral curve of `D_B` behind a second-approach surface.
    pub curve: Option<SmoothMap>,
    /// Slots where the closed formulas disagree with the re-derivation.
    pub mismatches: Vec<String>,
}

impl SolutionSurface {
    /// Projection into `R`, dropping `b`.
    pub fn r_map(&self) -> Result<SmoothMap> {
        let r = cartan_chart();
        SmoothMap::new(self.map.source(), &r.chart, self.map.components()[..6].to_vec())
    }
}

pub fn surface_chart() -> Chart {
    Chart::new(&["x", "t"]).expect("fixed chart")
}

pub fn solution_target() -> Chart {
    Chart::new(&["x", "y", "z", "p", "q", "t", "b"]).expect("fixed chart")
}

fn require_univariate(f: &Expr, v: &str) -> Result<()> {
    let vn = var(v);
    if !f.is_polynomial() || f.vars().iter().any(|u| *u != vn) {
        return Err(Error::Input(format!("free function must be a polynomial in {v}, got {f}")));
    }
    Ok(())
}

fn origin_warning(f: &Expr, v: &str) -> Result<Option<String>> {
    let d0 = f.diff(&var(v)).eval(&[(var(v), BigRational::zero())].into_iter().collect())?;
    Ok((!d0.is_zero()).then(|| format!("derivative of the free function is {d0} at 0; the surface does not pass the origin singularly")))
}

/// Closed formulas for the surface generated by `y₀(t)`.
pub fn solve_i(y0: &Expr) -> Result<SolutionSurface> {
    require_univariate(y0, "t")?;
    let t = var("t");
    let int = |e: &Expr| e.antiderive_poly(&t);
    let (x, tt) = (ex("x"), ex("t"));
    let iy0 = int(y0)?;
    let ity0 = int(&(&tt * y0))?;
    let iy02 = int(&(y0 * y0))?;
    let y = &(-&(&tt * &x)) + y0;
    let q = &(&(&ex("-t^2/2") * &x) + &(&tt * y0)) - &iy0;
    let p = &(&(&ex("-t^3/6") * &x) + &(&ex("t^2/2") * y0)) - &ity0;
    let z = &(&(&(&ex("t^3/6") * &x.pow(2)) - &(&x * &(&(&(&ex("t^2/2") * y0) + &ity0) - &(&tt * &iy0))))
        + &(&(&(&ex("t/2") * &y0.pow(2)) + &iy02.scale(&BigRational::new(1.into(), 2.into()))) - &(y0 * &iy0)))
        + &Expr::zero();
    let b = &(-&x) + &y0.diff(&t);
    let comps = vec![x, y, z, p, q, tt, b];
    let re = rederive_i(y0)?;
    let names = ["x", "y", "z", "p", "q", "t", "b"];
    let mismatches = names.iter().zip(comps.iter().zip(&re)).filter(|(_, (a, b))| a != b).map(|(n, _)| n.to_string()).collect();
    Ok(SolutionSurface {
        map: SmoothMap::new(&surface_chart(), &solution_target(), comps)?,
        free_function: y0.clone(),
        warning: origin_warning(y0, "t")?,
        curve: None,
        mismatches,
    })
}

/// Integrates the pulled-back equations directly:
/// `y_x = −t`, `y_t = b`, `q_x = −t²/2`, `q_t = t y_t`, `p_x = −t³/6`,
/// `p_t = (t²/2) y_t`, `z_x = p − t q`, `z_t = q y_t`.
pub fn rederive_i(y0: &Expr) -> Result<Vec<Expr>> {
    let t = var("t");
    let (x, tt) = (ex("x"), ex("t"));
    let dy0 = y0.diff(&t);
    let qq = (&tt * &dy0).antiderive_poly(&t)?;
    let pp = (&ex("t^2/2") * &dy0).antiderive_poly(&t)?;
    let zz = (&qq * &dy0).antiderive_poly(&t)?;
    let y = &(-&(&tt * &x)) + y0;
    let q = &(&ex("-t^2/2") * &x) + &qq;
    let p = &(&ex("-t^3/6") * &x) + &pp;
    let z = &(&(&ex("t^3/6") * &x.pow(2)) + &(&x * &(&pp - &(&tt * &qq)))) + &zz;
    let b = y.diff(&t);
    Ok(vec![x, y, z, p, q, tt, b])
}

/// The integral curve of `D_B` generated by `φ(τ)`.
pub fn db_curve(phi: &Expr) -> Result<SmoothMap> {
    require_univariate(phi, "tau")?;
    let tau = var("tau");
    let int = |e: &Expr| e.antiderive_poly(&tau);
    let tt = ex("tau");
    let dphi = phi.diff(&tau);
    let iphi = int(phi)?;
    let x1 = int(&(&(&dphi * &iphi) - &(&(phi * &dphi) * &tt)))?;
    let x2 = int(&iphi)?;
    let x3 = int(&(phi - &(&tt * &dphi)))?.scale(&BigRational::new((-1).into(), 2.into()));
    SmoothMap::new(&Chart::new(&["tau"])?, &base_chart(), vec![x1, x2, x3, phi.clone(), tt])
}

/// Second construction: an integral curve of `D_B` swept by the lift with
/// `λ = x`, `τ = −t`.
pub fn solve_ii(phi: &Expr) -> Result<SolutionSurface> {
    let curve = db_curve(phi)?;
    let db = db_system();
    for g in db.generators() {
        if !curve.pullback(g)?.is_zero() {
            return Err(Error::Verification("curve is not integral for D_B".into()));
        }
    }
    let leaf = leaf_chart()?;
    let to_curve: BTreeMap<VarName, Expr> = [(var("tau"), ex("-t"))].into_iter().collect();
    let mut bind: BTreeMap<VarName, Expr> = BTreeMap::new();
    for (v, c) in base_chart().coords().iter().zip(curve.components()) {
        bind.insert(v.clone(), c.substitute(&to_curve)?);
    }
    bind.insert(var("lam"), ex("x"));
    let mut comps: Vec<Expr> = leaf.lift.components().iter().map(|c| c.substitute(&bind)).collect::<std::result::Result<_, _>>()?;
    let b = comps[1].diff(&var("t"));
    comps.push(b);
    Ok(SolutionSurface {
        map: SmoothMap::new(&surface_chart(), &solution_target(), comps)?,
        free_function: phi.clone(),
        warning: origin_warning(phi, "tau")?,
        curve: Some(curve),
        mismatches: Vec::new(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SolutionChecks {
    pub pullbacks_zero: bool,
    pub w_y_zero: bool,
    /// Monic generator of the ideal of 2×2 minors of the `J¹` projection.
    pub nonimmersion_locus: String,
    /// Some minor is a constant multiple of the generator, so the minors
    /// generate exactly that principal ideal.
    pub principal: bool,
    pub through_origin: bool,
    pub immersion_samples: usize,
    pub immersion_ok: bool,
}

/// Generator of the minors ideal, when principal.
pub fn nonimmersion_generator(s: &SolutionSurface) -> Result<(Poly, bool)> {
    let r = s.r_map()?;
    let jac = r.jacobian();
    // rows: x, y, z, p, q; columns: x, t
    let mut minors = Vec::new();
    for i in 0..5 {
        for j in i + 1..5 {
            let m = &(&jac[i][0] * &jac[j][1]) - &(&jac[i][1] * &jac[j][0]);
            if !m.is_zero() {
                if !m.is_polynomial() {
                    return Err(Error::Verification("non-polynomial minor".into()));
                }
                minors.push(m.numer().clone());
            }
        }
    }
    let g = minors.iter().fold(Poly::zero(), |acc, m| gcd(&acc, m));
    let mut g = if g.is_zero() { g } else { g.monic() };
    let principal = minors.iter().any(|m| m.monic() == g);
    // prefer the form x − h(t) when g is linear in x
    let x = var("x");
    if g.degree_in(&x) == 1 {
        if let Some(c) = g.diff(&x).constant_value() {
            g = g.scale(&c.recip());
        }
    }
    Ok((g, principal))
}

/// `⟨a⟩ = ⟨b⟩` over the rationals.
pub fn same_principal_ideal(a: &Poly, b: &Poly) -> bool {
    a.is_zero() && b.is_zero() || (!a.is_zero() && !b.is_zero() && a.monic() == b.monic())
}

pub fn verify_solution(s: &SolutionSurface, samples: usize, seed: u64) -> Result<SolutionChecks> {
    let rc = cartan_chart();
    let r = s.r_map()?;
    let mut pullbacks_zero = true;
    for w in [&rc.w0, &rc.w1, &rc.w2] {
        pullbacks_zero &= r.pullback(w)?.is_zero();
    }
    let c = solution_target();
    let wy = DForm::from_pairs(&c, &[("y", ex("1")), ("x", ex("t")), ("t", ex("-b"))])?;
    let w_y_zero = s.map.pullback(&wy)?.is_zero();
    let (g, principal) = nonimmersion_generator(s)?;
    let origin: RationalPoint = [(var("x"), BigRational::zero()), (var("t"), BigRational::zero())].into_iter().collect();
    let through_origin = Expr::from_poly(g.clone()).eval(&origin)?.is_zero();
    let jac = r.jacobian();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut immersion_ok = true;
    for _ in 0..samples {
        let pt = random_point(&surface_chart(), &mut rng, &[Expr::from_poly(g.clone())]);
        let m: Vec<Vec<BigRational>> = jac[..5].iter().map(|row| row.iter().map(|e| e.eval(&pt)).collect()).collect::<std::result::Result<_, _>>()?;
        immersion_ok &= rank(&m, 2) == 2;
    }
    Ok(SolutionChecks {
        pullbacks_zero,
        w_y_zero,
        nonimmersion_locus: g.to_string(),
        principal,
        through_origin,
        immersion_samples: samples,
        immersion_ok,
    })
}

/// `φ(τ) := y₀(−τ)`.
pub fn phi_from_y0(y0: &Expr) -> Result<Expr> {
    let bind: BTreeMap<VarName, Expr> = [(var("t"), ex("-tau"))].into_iter().collect();
    Ok(y0.substitute(&bind)?)
}

pub fn compare_solutions(y0: &Expr) -> Result<bool> {
    let a = solve_i(y0)?;
    let b = solve_ii(&phi_from_y0(y0)?)?;
    Ok(a.map.components() == b.map.components())
}

#[derive(Clone, Debug, Serialize)]
pub struct SolutionJson {
    pub parameters: [&'static str; 2],
    pub components: BTreeMap<String, String>,
    pub free_function: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub formula_mismatches: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<SolutionChecks>,
}

impl SolutionSurface {
    pub fn to_json(&self, checks: Option<SolutionChecks>) -> SolutionJson {
        let named = |m: &SmoothMap| -> BTreeMap<String, String> {
            m.target().coords().iter().zip(m.components()).map(|(v, c)| (v.to_string(), c.to_string())).collect()
        };
        SolutionJson {
            parameters: ["x", "t"],
            components: named(&self.map),
            free_function: self.free_function.to_string(),
            warning: self.warning.clone(),
            curve: self.curve.as_ref().map(named),
            formula_mismatches: self.mismatches.clone(),
            checks,
        }
    }
}

/// Generator of the Cauchy characteristic of the Cartan system, scaled so
/// its first nonzero component is 1.
pub fn cauchy_generator() -> Result<Vec<VectorField>> {
    let c = cauchy_char(&cartan_chart().system()?)?;
    Ok(c.fields.iter().map(normalize_field).collect())
}
