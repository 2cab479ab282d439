//! Solved second-order systems `{u = f, v = g}` in two independent
//! variables: the locus R, its integral-element fibers and the type label.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{Chart, DForm, VectorField};
use crate::pfaffian::{cauchy_char, PfaffSystem};
use crate::symcore::linalg::{kernel, rank, rref};
use crate::symcore::{parse, var, Expr, RationalPoint, VarName};

const SECOND: [&str; 3] = ["r", "s", "t"];
const BASE: [&str; 5] = ["x", "y", "z", "p", "q"];

/// Two of `r, s, t` solved in terms of `x, y, z, p, q` and the third.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvedSystem {
    solved: BTreeMap<String, Expr>,
    parameter: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolvedSystemJson {
    pub solved: BTreeMap<String, String>,
    pub parameter: String,
}

impl SolvedSystem {
    pub fn new(solved: &[(&str, Expr)], parameter: &str) -> Result<Self> {
        let map: BTreeMap<String, Expr> = solved.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
        Self::from_map(map, parameter.to_string())
    }

    fn from_map(solved: BTreeMap<String, Expr>, parameter: String) -> Result<Self> {
        if solved.len() != 2 || solved.keys().any(|k| !SECOND.contains(&k.as_str())) {
            return Err(Error::Input("exactly two of r, s, t must be solved".into()));
        }
        if !SECOND.contains(&parameter.as_str()) || solved.contains_key(&parameter) {
            return Err(Error::Input("the parameter must be the unsolved one of r, s, t".into()));
        }
        let allowed: Vec<VarName> = BASE.iter().chain([&parameter.as_str()]).map(|n| var(n)).collect();
        for (k, e) in &solved {
            if let Some(bad) = e.vars().into_iter().find(|v| !allowed.contains(v)) {
                return Err(Error::Input(format!("`{k}` depends on `{bad}`, outside (x, y, z, p, q, {parameter})")));
            }
        }
        Ok(SolvedSystem { solved, parameter })
    }

    pub fn from_json(j: &SolvedSystemJson) -> Result<Self> {
        let mut solved = BTreeMap::new();
        for (k, v) in &j.solved {
            solved.insert(k.clone(), parse(v)?);
        }
        Self::from_map(solved, j.parameter.clone())
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let j: SolvedSystemJson = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
        Self::from_json(&j)
    }

    pub fn to_json(&self) -> SolvedSystemJson {
        SolvedSystemJson {
            solved: self.solved.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
            parameter: self.parameter.clone(),
        }
    }

    pub fn parameter(&self) -> &str {
        &self.parameter
    }

    pub fn solved(&self) -> &BTreeMap<String, Expr> {
        &self.solved
    }

    /// Value of `r`, `s` or `t` on R.
    pub fn second(&self, name: &str) -> Expr {
        if name == self.parameter {
            Expr::var(&var(name))
        } else {
            self.solved[name].clone()
        }
    }

    /// Exchange the roles of `x` and `y` (so `p ↔ q`, `r ↔ t`).
    pub fn swap_xy(&self) -> SolvedSystem {
        let b = swap_bindings();
        let rename = |k: &str| match k {
            "r" => "t".to_string(),
            "t" => "r".to_string(),
            o => o.to_string(),
        };
        let solved = self
            .solved
            .iter()
            .map(|(k, v)| (rename(k), v.substitute(&b).expect("renaming cannot create poles")))
            .collect();
        SolvedSystem { solved, parameter: rename(&self.parameter) }
    }
}

fn swap_bindings() -> BTreeMap<VarName, Expr> {
    [("x", "y"), ("y", "x"), ("p", "q"), ("q", "p"), ("r", "t"), ("t", "r")]
        .iter()
        .map(|(a, b)| (var(a), Expr::var(&var(b))))
        .collect()
}

/// Point on J² or R with `x ↔ y`, `p ↔ q`, `r ↔ t` exchanged.
pub fn swap_point(pt: &RationalPoint) -> RationalPoint {
    pt.iter()
        .map(|(k, v)| {
            let n = match k.as_str() {
                "x" => "y",
                "y" => "x",
                "p" => "q",
                "q" => "p",
                "r" => "t",
                "t" => "r",
                o => o,
            };
            (var(n), v.clone())
        })
        .collect()
}

/// The locus R with the restricted contact forms and the adapted frame.
#[derive(Clone, Debug)]
pub struct RChart {
    pub sys: SolvedSystem,
    pub chart: Chart,
    pub w0: DForm,
    pub w1: DForm,
    pub w2: DForm,
    pub vertical: VectorField,
    /// `e1 = ∂x + p∂z + r∂p + s∂q`, `e2 = ∂y + q∂z + s∂p + t∂q`, `e3` vertical.
    pub frame: [VectorField; 3],
}

impl RChart {
    pub fn system(&self) -> Result<PfaffSystem> {
        PfaffSystem::new(&self.chart, vec![self.w0.clone(), self.w1.clone(), self.w2.clone()])
    }

    /// Same locus with `(ϖ₁, ϖ₂)` replaced by `(a ϖ₁ + b ϖ₂, c ϖ₁ + d ϖ₂)`.
    pub fn mixed(&self, a: &Expr, b: &Expr, c: &Expr, d: &Expr) -> Result<RChart> {
        if (&(a * d) - &(b * c)).is_zero() {
            return Err(Error::Input("mixing matrix is singular".into()));
        }
        let mut out = self.clone();
        out.w1 = self.w1.scale(a).add(&self.w2.scale(b));
        out.w2 = self.w1.scale(c).add(&self.w2.scale(d));
        Ok(out)
    }

    /// Rows `dϖ₀, dϖ₁, dϖ₂` evaluated on `(e1∧e2, e1∧e3, e2∧e3)`.
    pub fn fiber_matrix(&self) -> [[Expr; 3]; 3] {
        let [e1, e2, e3] = &self.frame;
        let pairs = [(e1, e2), (e1, e3), (e2, e3)];
        let row = |w: &DForm| {
            let dw = w.d();
            pairs.map(|(a, b)| dw.eval_on_fields(&[a, b]))
        };
        [row(&self.w0), row(&self.w1), row(&self.w2)]
    }
}

pub fn build_chart(sys: &SolvedSystem) -> Result<RChart> {
    let m = sys.parameter.as_str();
    let chart = Chart::new(&["x", "y", "z", "p", "q", m])?;
    let (r, s, t) = (sys.second("r"), sys.second("s"), sys.second("t"));
    let one = Expr::one();
    let w0 = DForm::from_pairs(&chart, &[("z", one.clone()), ("x", -ex_var("p")), ("y", -ex_var("q"))])?;
    let w1 = DForm::from_pairs(&chart, &[("p", one.clone()), ("x", -&r), ("y", -&s)])?;
    let w2 = DForm::from_pairs(&chart, &[("q", one.clone()), ("x", -&s), ("y", -&t)])?;
    let e1 = VectorField::from_pairs(&chart, &[("x", one.clone()), ("z", ex_var("p")), ("p", r.clone()), ("q", s.clone())])?;
    let e2 = VectorField::from_pairs(&chart, &[("y", one.clone()), ("z", ex_var("q")), ("p", s.clone()), ("q", t.clone())])?;
    let e3 = VectorField::coordinate(&chart, m)?;
    Ok(RChart { sys: sys.clone(), chart, w0, w1, w2, vertical: e3.clone(), frame: [e1, e2, e3] })
}

fn ex_var(n: &str) -> Expr {
    Expr::var(&var(n))
}

/// Rank certificate for the `(r, s, t)`-gradients of `F, G`.
#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub generic_rank: usize,
    /// Columns of the certifying 2×2 minor and its value.
    pub minor_columns: [String; 2],
    pub minor: String,
    pub point_ranks: Vec<usize>,
    pub regular: bool,
}

/// `(F_r, F_s, F_t)` and `(G_r, G_s, G_t)` for `F = u − f`, `G = v − g`.
pub fn gradients(sys: &SolvedSystem) -> [[Expr; 3]; 2] {
    let keys: Vec<&String> = sys.solved.keys().collect();
    let m = var(&sys.parameter);
    let row = |k: &str| {
        let f = &sys.solved[k];
        SECOND.map(|c| {
            if c == k {
                Expr::one()
            } else if c == sys.parameter {
                -f.diff(&m)
            } else {
                Expr::zero()
            }
        })
    };
    [row(keys[0]), row(keys[1])]
}

pub fn regularity_check(sys: &SolvedSystem, pts: &[RationalPoint]) -> Result<RegularityReport> {
    let g = gradients(sys);
    let keys: Vec<&String> = sys.solved.keys().collect();
    let ci = keys.iter().map(|k| SECOND.iter().position(|c| c == k).unwrap()).collect::<Vec<_>>();
    let minor = &(&g[0][ci[0]] * &g[1][ci[1]]) - &(&g[0][ci[1]] * &g[1][ci[0]]);
    let point_ranks = pts
        .iter()
        .map(|pt| Ok(rank(&eval_rows(&g, pt)?, 3)))
        .collect::<Result<Vec<_>>>()?;
    let generic_rank = rank(&g.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), 3);
    Ok(RegularityReport {
        generic_rank,
        minor_columns: [keys[0].clone(), keys[1].clone()],
        minor: minor.to_string(),
        regular: generic_rank == 2 && point_ranks.iter().all(|&r| r == 2),
        point_ranks,
    })
}

/// Regularity for an arbitrary pair `F, G` on J²; points must bind the
/// variables the gradients involve.
pub fn regularity_check_raw(f: &Expr, g: &Expr, pts: &[RationalPoint]) -> Result<RegularityReport> {
    let grad = [SECOND.map(|c| f.diff(&var(c))), SECOND.map(|c| g.diff(&var(c)))];
    let rows: Vec<Vec<Expr>> = grad.iter().map(|r| r.to_vec()).collect();
    let ech = rref(&rows, 3);
    let generic_rank = ech.rank();
    let mut cols = [0usize, 1];
    let mut minor = Expr::zero();
    'outer: for a in 0..3 {
        for b in a + 1..3 {
            let m = &(&grad[0][a] * &grad[1][b]) - &(&grad[0][b] * &grad[1][a]);
            if !m.is_zero() {
                cols = [a, b];
                minor = m;
                break 'outer;
            }
        }
    }
    let point_ranks = pts
        .iter()
        .map(|pt| Ok(rank(&eval_rows(&grad, pt)?, 3)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RegularityReport {
        generic_rank,
        minor_columns: [SECOND[cols[0]].to_string(), SECOND[cols[1]].to_string()],
        minor: minor.to_string(),
        regular: generic_rank == 2 && point_ranks.iter().all(|&r| r == 2),
        point_ranks,
    })
}

fn eval_rows<const N: usize>(rows: &[[Expr; N]], pt: &RationalPoint) -> Result<Vec<Vec<BigRational>>> {
    rows.iter()
        .map(|r| r.iter().map(|e| e.eval(pt).map_err(Error::from)).collect())
        .collect()
}

/// Integral 2-planes of D at a point, as the kernel of
/// `η ↦ (dϖ₁(η), dϖ₂(η))` on `Λ²D`.
#[derive(Clone, Debug, Serialize)]
pub struct FiberDescriptor {
    #[serde(serialize_with = "ser_point")]
    pub point: RationalPoint,
    pub kernel_dim: usize,
    pub generic_kernel_dim: usize,
    /// Coefficients on `(e1∧e2, e1∧e3, e2∧e3)`.
    #[serde(serialize_with = "ser_vectors")]
    pub kernel_basis: Vec<[BigRational; 3]>,
    /// Per basis element: whether the plane is transversal to the fiber.
    pub transversal: Vec<bool>,
    pub has_transversal: bool,
    pub has_nontransversal: bool,
    /// The same kernel vectors as ambient bivectors on the chart.
    pub ambient: Vec<String>,
}

fn ser_point<S: serde::Serializer>(pt: &RationalPoint, s: S) -> std::result::Result<S::Ok, S::Error> {
    crate::io::point_to_json(pt).serialize(s)
}

fn ser_vectors<S: serde::Serializer>(v: &[[BigRational; 3]], s: S) -> std::result::Result<S::Ok, S::Error> {
    let out: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    out.serialize(s)
}

pub fn fiber_at(r: &RChart, pt: &RationalPoint) -> Result<FiberDescriptor> {
    let fm = r.fiber_matrix();
    let vals = eval_rows(&fm, pt).map_err(|e| Error::Degenerate(format!("frame undefined at the point: {e}")))?;
    if vals[0].iter().any(|x| !x.is_zero()) {
        return Err(Error::Verification("dϖ₀ does not vanish on Λ²D".into()));
    }
    let l = vals[1..].to_vec();
    let ker = kernel(&l, 3);
    let generic = 3 - rank(&[fm[1].to_vec(), fm[2].to_vec()], 3);
    let basis: Vec<[BigRational; 3]> = ker.into_iter().map(|v| [v[0].clone(), v[1].clone(), v[2].clone()]).collect();
    let transversal: Vec<bool> = basis.iter().map(|v| !v[0].is_zero()).collect();
    let kd = basis.len();
    let has_transversal = transversal.iter().any(|&t| t);
    let has_nontransversal = kd == 2 || (kd == 1 && !transversal[0]);
    let [e1, e2, e3] = &r.frame;
    let ambient = basis
        .iter()
        .map(|c| {
            let terms: Vec<String> = [(e1, e2), (e1, e3), (e2, e3)]
                .iter()
                .zip(c)
                .filter(|(_, x)| !x.is_zero())
                .map(|((a, b), x)| format!("{x}*({})∧({})", eval_field(a, pt), eval_field(b, pt)))
                .collect();
            terms.join(" + ")
        })
        .collect();
    Ok(FiberDescriptor {
        point: pt.clone(),
        kernel_dim: kd,
        generic_kernel_dim: generic,
        kernel_basis: basis,
        transversal,
        has_transversal,
        has_nontransversal,
        ambient,
    })
}

fn eval_field(f: &VectorField, pt: &RationalPoint) -> String {
    let vals: Vec<Expr> = f.coeffs().iter().map(|c| c.eval(pt).map(Expr::constant).unwrap_or_else(|_| c.clone())).collect();
    VectorField::new(f.chart(), vals).map(|v| v.to_string()).unwrap_or_default()
}

/// Binary quadrics of the two gradients and the discriminant of the
/// discriminant of their pencil.
#[derive(Clone, Debug)]
pub struct SymbolPencil {
    pub qf: [Expr; 3],
    pub qg: [Expr; 3],
    /// `disc(λ Q_F + μ Q_G) = a λ² + b λμ + c μ²`.
    pub pencil_disc: [Expr; 3],
    pub delta: Expr,
}

pub fn symbol_pencil(sys: &SolvedSystem) -> SymbolPencil {
    let [qf, qg] = gradients(sys);
    let four = Expr::int(4);
    let two = Expr::int(2);
    let a = &(&qf[1] * &qf[1]) - &(&four * &(&qf[0] * &qf[2]));
    let b = &(&two * &(&qf[1] * &qg[1])) - &(&four * &(&(&qf[0] * &qg[2]) + &(&qg[0] * &qf[2])));
    let c = &(&qg[1] * &qg[1]) - &(&four * &(&qg[0] * &qg[2]));
    let delta = &(&b * &b) - &(&four * &(&a * &c));
    SymbolPencil { qf, qg, pencil_disc: [a, b, c], delta }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeLabel {
    I,
    II,
    III,
    IV,
    Degenerate(String),
}

impl TypeLabel {
    pub fn short(&self) -> &'static str {
        match self {
            TypeLabel::I => "I",
            TypeLabel::II => "II",
            TypeLabel::III => "III",
            TypeLabel::IV => "IV",
            TypeLabel::Degenerate(_) => "Degenerate",
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeLabel::Degenerate(r) => write!(f, "Degenerate({r})"),
            o => f.write_str(o.short()),
        }
    }
}

impl Serialize for TypeLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.short())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificates {
    pub minors: Vec<String>,
    pub loci: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    #[serde(rename = "type")]
    pub label: TypeLabel,
    pub reason: Option<String>,
    pub kernel_dim: usize,
    pub transversal: bool,
    pub delta: String,
    pub delta_sign: i8,
    pub cauchy_rank: usize,
    /// Whether the Cauchy-characteristic criterion agrees with the label.
    pub cauchy_consistent: bool,
    pub certificates: Certificates,
}

pub fn classify_type(r: &RChart, sys: &SolvedSystem, pt: &RationalPoint) -> Result<ClassReport> {
    let fib = fiber_at(r, pt)?;
    let pencil = symbol_pencil(sys);
    let dval = pencil.delta.eval(pt)?;
    let delta_sign: i8 = if dval.is_zero() { 0 } else if dval.is_positive() { 1 } else { -1 };
    let ch = cauchy_char(&r.system()?)?;
    let label = if fib.kernel_dim != fib.generic_kernel_dim {
        TypeLabel::Degenerate(format!(
            "fiber dimension {} differs from the generic value {}",
            fib.kernel_dim, fib.generic_kernel_dim
        ))
    } else {
        match fib.kernel_dim {
            2 => TypeLabel::I,
            1 if fib.transversal[0] => match delta_sign {
                1 => TypeLabel::II,
                -1 => TypeLabel::III,
                _ => TypeLabel::Degenerate("symbol pencil discriminant vanishes".into()),
            },
            1 => TypeLabel::IV,
            _ => TypeLabel::Degenerate("no integral elements".into()),
        }
    };
    let cauchy_consistent = match label {
        TypeLabel::I => ch.rank() == 1,
        TypeLabel::II | TypeLabel::III | TypeLabel::IV => ch.rank() == 0,
        TypeLabel::Degenerate(_) => true,
    };
    let reg = regularity_check(sys, &[])?;
    let fm = r.fiber_matrix();
    let lrows = vec![fm[1].to_vec(), fm[2].to_vec()];
    let loci: Vec<String> = rref(&lrows, 3).loci().iter().map(|p| p.to_string()).collect();
    let reason = match &label {
        TypeLabel::Degenerate(s) => Some(s.clone()),
        _ => None,
    };
    Ok(ClassReport {
        reason,
        kernel_dim: fib.kernel_dim,
        transversal: fib.has_transversal,
        delta: pencil.delta.to_string(),
        delta_sign,
        cauchy_rank: ch.rank(),
        cauchy_consistent,
        certificates: Certificates { minors: vec![reg.minor], loci },
        label,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TransversalFiber {
    Line,
    Point,
    Empty,
}

pub fn transversal_fiber(r: &RChart, pt: &RationalPoint) -> Result<TransversalFiber> {
    let f = fiber_at(r, pt)?;
    Ok(transversal_part(&f))
}

pub fn transversal_part(f: &FiberDescriptor) -> TransversalFiber {
    match (f.kernel_dim, f.has_transversal) {
        (2, true) => TransversalFiber::Line,
        (1, true) => TransversalFiber::Point,
        _ => TransversalFiber::Empty,
    }
}

/// Whether every integral element at the point is transversal.
pub fn transversal_is_full(f: &FiberDescriptor) -> bool {
    f.kernel_dim > 0 && !f.has_nontransversal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{ex, point};

    fn sys(pairs: &[(&str, &str)], m: &str) -> SolvedSystem {
        let p: Vec<(&str, Expr)> = pairs.iter().map(|(k, v)| (*k, ex(v))).collect();
        SolvedSystem::new(&p, m).unwrap()
    }

    fn at(m: &str, v: i64) -> RationalPoint {
        point(&[("x", 0), ("y", 0), ("z", 0), ("p", 0), ("q", 0), (m, v)])
    }

    #[test]
    fn build_chart_examples() {
        let c = build_chart(&sys(&[("r", "t^3/3"), ("s", "t^2/2")], "t")).unwrap();
        let want = DForm::from_pairs(&c.chart, &[("p", ex("1")), ("x", ex("-t^3/3")), ("y", ex("-t^2/2"))]).unwrap();
        assert_eq!(c.w1, want);
        let z = build_chart(&sys(&[("r", "0"), ("s", "0")], "t")).unwrap();
        assert_eq!(z.w1, DForm::dx(&z.chart, "p").unwrap());
        assert_eq!(z.w2, DForm::from_pairs(&z.chart, &[("q", ex("1")), ("y", ex("-t"))]).unwrap());
        let d = build_chart(&sys(&[("r", "0"), ("t", "0")], "s")).unwrap();
        assert_eq!(d.w1, DForm::from_pairs(&d.chart, &[("p", ex("1")), ("y", ex("-s"))]).unwrap());
        assert_eq!(d.w2, DForm::from_pairs(&d.chart, &[("q", ex("1")), ("x", ex("-s"))]).unwrap());
    }

    #[test]
    fn malformed_systems_are_rejected() {
        assert!(SolvedSystem::new(&[("r", ex("0"))], "t").is_err());
        assert!(SolvedSystem::new(&[("r", ex("0")), ("s", ex("0"))], "s").is_err());
        assert!(SolvedSystem::new(&[("r", ex("s")), ("t", ex("0"))], "t").is_err());
        assert!(SolvedSystem::parse_json(r#"{"solved": {"r": "t^", "s": "0"}, "parameter": "t"}"#).is_err());
    }

    #[test]
    fn regularity() {
        let r = regularity_check(&sys(&[("r", "t^3/3"), ("s", "t^2/2")], "t"), &[at("t", 1)]).unwrap();
        assert_eq!(r.minor, "1");
        assert!(r.regular);
        let r = regularity_check(&sys(&[("r", "0"), ("t", "0")], "s"), &[]).unwrap();
        assert_eq!(r.minor_columns, ["r".to_string(), "t".to_string()]);
        let f = ex("r - t^3/3");
        let bad = regularity_check_raw(&f, &f, &[point(&[("t", 1)])]).unwrap();
        assert_eq!(bad.generic_rank, 1);
        assert!(!bad.regular);
    }

    #[test]
    fn fibers() {
        let c = build_chart(&sys(&[("r", "t^3/3"), ("s", "t^2/2")], "t")).unwrap();
        let f = fiber_at(&c, &at("t", 1)).unwrap();
        assert_eq!(f.kernel_dim, 2);
        assert!(f.has_transversal && f.has_nontransversal);
        let f = fiber_at(&build_chart(&sys(&[("r", "-t"), ("s", "0")], "t")).unwrap(), &at("t", 3)).unwrap();
        assert_eq!((f.kernel_dim, f.transversal.clone()), (1, vec![true]));
        let c = build_chart(&sys(&[("r", "q"), ("s", "0")], "t")).unwrap();
        let f = fiber_at(&c, &at("t", 1)).unwrap();
        assert_eq!((f.kernel_dim, f.transversal.clone()), (1, vec![false]));
        // the kernel is spanned by e1∧e3
        assert!(f.kernel_basis[0][0].is_zero() && f.kernel_basis[0][2].is_zero());
    }

    #[test]
    fn pencil_discriminant() {
        assert!(symbol_pencil(&sys(&[("r", "t^3/3"), ("s", "t^2/2")], "t")).delta.is_zero());
        assert_eq!(symbol_pencil(&sys(&[("r", "-t"), ("s", "0")], "t")).delta, ex("16"));
        assert_eq!(symbol_pencil(&sys(&[("r", "t"), ("s", "0")], "t")).delta, ex("-16"));
        assert_eq!(symbol_pencil(&sys(&[("r", "0"), ("t", "0")], "s")).delta, ex("16"));
    }

    fn label(pairs: &[(&str, &str)], m: &str, v: i64) -> TypeLabel {
        let s = sys(pairs, m);
        classify_type(&build_chart(&s).unwrap(), &s, &at(m, v)).unwrap().label
    }

    #[test]
    fn classification() {
        assert_eq!(label(&[("r", "t^3/3"), ("s", "t^2/2")], "t", 1), TypeLabel::I);
        assert_eq!(label(&[("r", "0"), ("t", "0")], "s", 1), TypeLabel::II);
        assert_eq!(label(&[("r", "-t"), ("s", "0")], "t", 1), TypeLabel::II);
        assert_eq!(label(&[("r", "t"), ("s", "0")], "t", 1), TypeLabel::III);
        assert_eq!(label(&[("r", "q"), ("s", "0")], "t", 1), TypeLabel::IV);
        assert!(matches!(label(&[("r", "q"), ("s", "0")], "t", 0), TypeLabel::Degenerate(_)));
    }

    #[test]
    fn transversal_fibers() {
        let tf = |pairs: &[(&str, &str)], v| {
            let s = sys(pairs, "t");
            transversal_fiber(&build_chart(&s).unwrap(), &at("t", v)).unwrap()
        };
        assert_eq!(tf(&[("r", "t^3/3"), ("s", "t^2/2")], 1), TransversalFiber::Line);
        assert_eq!(tf(&[("r", "-t"), ("s", "0")], 1), TransversalFiber::Point);
        assert_eq!(tf(&[("r", "q"), ("s", "0")], 1), TransversalFiber::Empty);
    }

    #[test]
    fn swap_exchanges_roles() {
        let s = sys(&[("r", "t^3/3"), ("s", "t^2/2")], "t").swap_xy();
        assert_eq!(s.parameter(), "r");
        assert_eq!(s.solved()["t"], ex("r^3/3"));
    }
}
