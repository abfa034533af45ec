//! Point-count bounds as exact evaluators over (dimension, degree)
//! sequences.
//!
//! Everything here is integer arithmetic generic over [`Count`]; the
//! Gröbner machinery only enters through [`variety_parts`], which lifts a
//! loaded variety to its sequence.
//!
//! The main quantity is
//!
//! ```text
//! B_n(S) = Σ δ_i (π_{d_i} - π_{2d_i - n}) + π_{2D - n},   D = max d_i
//! ```
//!
//! and its hyperplane-section form, which decrements every index by one.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::projgeom::pi;
use crate::scalar::{ipow, Count};
use crate::variety::{Irredundancy, Variety};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("bad sequence: {0}")]
    BadSequence(String),
    #[error("component dimension {dim} is not below n = {n}")]
    DimensionTooLarge { dim: i64, n: i64 },
    #[error("need at least two components, got {0}")]
    TooFewComponents(usize),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("components are not irredundant: {0}")]
    NotIrredundant(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BoundKind {
    /// Σ δ_i q^{d_i} for affine varieties.
    #[serde(rename = "affine_thm21")]
    Affine,
    /// B_n(S).
    #[serde(rename = "projective_thm31")]
    Projective,
    /// B_n(S) for an equidimensional sequence, with δ the total degree.
    #[serde(rename = "equidim_cor33")]
    Equidimensional,
    /// δ q^{n-1} + π_{n-2} for hypersurfaces.
    #[serde(rename = "serre")]
    Serre,
    /// Unions of linear subspaces.
    #[serde(rename = "linear_prop56")]
    LinearArrangement,
    /// The sharper, unproven candidate for non-equidimensional inputs.
    #[serde(rename = "question1")]
    Question1,
    /// Exact count δ q^d + π_{d-1} of a tubular set.
    #[serde(rename = "tubular")]
    Tubular,
    /// B_{n-1} of a hyperplane section, independent of the hyperplane.
    #[serde(rename = "section_cor43")]
    Section,
}

impl BoundKind {
    pub const ALL: [BoundKind; 8] = [
        BoundKind::Affine,
        BoundKind::Projective,
        BoundKind::Equidimensional,
        BoundKind::Serre,
        BoundKind::LinearArrangement,
        BoundKind::Question1,
        BoundKind::Tubular,
        BoundKind::Section,
    ];

    pub fn token(self) -> &'static str {
        match self {
            BoundKind::Affine => "affine_thm21",
            BoundKind::Projective => "projective_thm31",
            BoundKind::Equidimensional => "equidim_cor33",
            BoundKind::Serre => "serre",
            BoundKind::LinearArrangement => "linear_prop56",
            BoundKind::Question1 => "question1",
            BoundKind::Tubular => "tubular",
            BoundKind::Section => "section_cor43",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for BoundKind {
    type Err = String;

    /// Accepts the full token or its short form (`thm31`, `prop56`, ...).
    fn from_str(s: &str) -> Result<Self, String> {
        BoundKind::ALL
            .into_iter()
            .find(|k| {
                let t = k.token();
                s == t || t.rsplit('_').next() == Some(s) || t.split('_').next() == Some(s)
            })
            .ok_or_else(|| format!("unknown bound kind `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HypothesisStatus {
    Verified,
    Declared,
    Violated,
}

/// One entry of a (dimension, degree) sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part<T> {
    pub name: String,
    pub dim: i64,
    pub deg: T,
}

/// Names the entries X1, X2, ...
pub fn parts<T: Count>(seq: &[(i64, T)]) -> Vec<Part<T>> {
    seq.iter()
        .enumerate()
        .map(|(i, &(dim, deg))| Part {
            name: format!("X{}", i + 1),
            dim,
            deg,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentTerm<T: Count> {
    pub name: String,
    pub dim: i64,
    pub deg: T,
    pub term: T,
}

/// Another bound evaluated on the same input, with `difference` = its
/// value minus this report's total.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Comparison<T: Count> {
    pub against: BoundKind,
    pub value: T,
    pub difference: T,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport<T: Count> {
    pub kind: BoundKind,
    pub n: Option<i64>,
    pub q: T,
    pub per_component: Vec<ComponentTerm<T>>,
    pub tail: Option<T>,
    pub total: T,
    pub conjectural: bool,
    pub hypotheses: BTreeMap<String, HypothesisStatus>,
    /// Input positions in the order the terms are listed, when sorted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison<T>>,
}

impl<T: Count> BoundReport<T> {
    fn new(kind: BoundKind, n: Option<i64>, q: T, per_component: Vec<ComponentTerm<T>>, tail: Option<T>) -> Self {
        let total = per_component.iter().map(|t| t.term).sum::<T>() + tail.unwrap_or_else(T::zero);
        BoundReport {
            kind,
            n,
            q,
            per_component,
            tail,
            total,
            conjectural: kind == BoundKind::Question1,
            hypotheses: BTreeMap::new(),
            order: None,
            comparison: None,
        }
    }

    fn hypothesis(mut self, name: &str, status: HypothesisStatus) -> Self {
        self.hypotheses.insert(name.to_string(), status);
        self
    }

    fn compare(mut self, against: BoundKind, value: T) -> Self {
        self.comparison = Some(Comparison {
            against,
            value,
            difference: value - self.total,
        });
        self
    }
}

fn check_q<T: Count>(q: T) -> Result<(), BoundError> {
    if q < T::of(2) {
        return Err(BoundError::BadParameters(format!("q = {q} is below 2")));
    }
    Ok(())
}

fn check_parts<T: Count>(ps: &[Part<T>], n: Option<i64>) -> Result<(), BoundError> {
    if ps.is_empty() {
        return Err(BoundError::BadSequence("no components".into()));
    }
    for p in ps {
        if p.dim < 0 {
            return Err(BoundError::BadSequence(format!("{}: negative dimension {}", p.name, p.dim)));
        }
        if p.deg < T::one() {
            return Err(BoundError::BadSequence(format!("{}: degree {} below 1", p.name, p.deg)));
        }
        if let Some(n) = n {
            if p.dim >= n {
                return Err(BoundError::DimensionTooLarge { dim: p.dim, n });
            }
        }
    }
    Ok(())
}

/// Stable sort by decreasing dimension, then decreasing degree.
fn sorted<T: Count>(ps: &[Part<T>]) -> (Vec<Part<T>>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..ps.len()).collect();
    idx.sort_by(|&a, &b| (ps[b].dim, ps[b].deg).cmp(&(ps[a].dim, ps[a].deg)));
    (idx.iter().map(|&i| ps[i].clone()).collect(), idx)
}

/// Σ δ_i q^{d_i}.
pub fn bound_affine<T: Count>(ps: &[Part<T>], q: T) -> Result<BoundReport<T>, BoundError> {
    check_q(q)?;
    check_parts(ps, None)?;
    let terms = ps
        .iter()
        .map(|p| ComponentTerm {
            name: p.name.clone(),
            dim: p.dim,
            deg: p.deg,
            term: p.deg * ipow(q, p.dim as u32),
        })
        .collect();
    Ok(BoundReport::new(BoundKind::Affine, None, q, terms, None))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// B_n itself.
    Ambient,
    /// B_{n-1} of a section by a hyperplane containing no component.
    Section,
}

fn bn_raw<T: Count>(ps: &[Part<T>], n: i64, q: T, shift: i64) -> (Vec<ComponentTerm<T>>, T) {
    let big_d = ps.iter().map(|p| p.dim).max().unwrap_or(-1);
    let terms = ps
        .iter()
        .map(|p| ComponentTerm {
            name: p.name.clone(),
            dim: p.dim,
            deg: p.deg,
            term: p.deg * (pi(p.dim - shift, q) - pi(2 * p.dim - n - shift, q)),
        })
        .collect();
    (terms, pi(2 * big_d - n - shift, q))
}

pub fn bound_bn<T: Count>(ps: &[Part<T>], n: i64, q: T, mode: Mode) -> Result<BoundReport<T>, BoundError> {
    check_q(q)?;
    check_parts(ps, Some(n))?;
    let (kind, shift) = match mode {
        Mode::Ambient => (BoundKind::Projective, 0),
        Mode::Section => (BoundKind::Section, 1),
    };
    let (terms, tail) = bn_raw(ps, n, q, shift);
    Ok(BoundReport::new(kind, Some(n), q, terms, Some(tail)).hypothesis("dims_below_n", HypothesisStatus::Verified))
}

/// B_n for an equidimensional sequence, collapsed to δ(π_d - π_{2d-n}) +
/// π_{2d-n} with δ the total degree.
pub fn bound_equidimensional<T: Count>(ps: &[Part<T>], n: i64, q: T) -> Result<BoundReport<T>, BoundError> {
    check_q(q)?;
    check_parts(ps, Some(n))?;
    let d = ps[0].dim;
    if ps.iter().any(|p| p.dim != d) {
        return Err(BoundError::BadSequence("components have different dimensions".into()));
    }
    let delta: T = ps.iter().map(|p| p.deg).sum();
    let term = ComponentTerm {
        name: "union".into(),
        dim: d,
        deg: delta,
        term: delta * (pi(d, q) - pi(2 * d - n, q)),
    };
    Ok(BoundReport::new(BoundKind::Equidimensional, Some(n), q, vec![term], Some(pi(2 * d - n, q)))
        .hypothesis("equidimensional", HypothesisStatus::Verified))
}

/// δ q^{n-1} + π_{n-2}.
pub fn bound_serre<T: Count>(n: i64, delta: T, q: T) -> Result<BoundReport<T>, BoundError> {
    check_q(q)?;
    if n < 2 || delta < T::one() {
        return Err(BoundError::BadParameters(format!("need n >= 2 and degree >= 1, got n = {n}, degree = {delta}")));
    }
    let term = ComponentTerm {
        name: "hypersurface".into(),
        dim: n - 1,
        deg: delta,
        term: delta * ipow(q, (n - 1) as u32),
    };
    Ok(BoundReport::new(BoundKind::Serre, Some(n), q, vec![term], Some(pi(n - 2, q))))
}

/// The linear-arrangement bound with its gap to B_n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearArrangementBound<T: Count> {
    pub report: BoundReport<T>,
    /// B_n minus this bound: Σ_{i≥2} (π_{d_i + d_1 - n} - π_{2d_i - n}).
    pub gap: T,
}

pub fn bound_linear_arrangement<T: Count>(dims: &[i64], n: i64, q: T) -> Result<LinearArrangementBound<T>, BoundError> {
    check_q(q)?;
    if dims.len() < 2 {
        return Err(BoundError::TooFewComponents(dims.len()));
    }
    let named: Vec<Part<T>> = dims
        .iter()
        .enumerate()
        .map(|(i, &d)| Part {
            name: format!("L{}", i + 1),
            dim: d,
            deg: T::one(),
        })
        .collect();
    check_parts(&named, Some(n))?;
    let (ps, order) = sorted(&named);
    let d1 = ps[0].dim;
    let mut terms = vec![ComponentTerm {
        name: ps[0].name.clone(),
        dim: d1,
        deg: T::one(),
        term: pi(d1, q),
    }];
    let mut gap = T::zero();
    for p in &ps[1..] {
        terms.push(ComponentTerm {
            name: p.name.clone(),
            dim: p.dim,
            deg: T::one(),
            term: pi(p.dim, q) - pi(p.dim + d1 - n, q),
        });
        gap = gap + pi(p.dim + d1 - n, q) - pi(2 * p.dim - n, q);
    }
    let mut report = BoundReport::new(BoundKind::LinearArrangement, Some(n), q, terms, None)
        .hypothesis("linear_components", HypothesisStatus::Declared);
    report.order = Some(order);
    let thm = bound_bn(&ps, n, q, Mode::Ambient)?.total;
    let report = report.compare(BoundKind::Projective, thm);
    debug_assert_eq!(thm - report.total, gap);
    Ok(LinearArrangementBound { report, gap })
}

/// Σ δ_i (π_{d_i} - π_{d_i + d_1 - n}) + π_{2d_1 - n}, sorted by
/// decreasing dimension. Always marked conjectural.
pub fn bound_question1<T: Count>(ps: &[Part<T>], n: i64, q: T) -> Result<BoundReport<T>, BoundError> {
    check_q(q)?;
    check_parts(ps, Some(n))?;
    let (sorted_ps, order) = sorted(ps);
    let d1 = sorted_ps[0].dim;
    let terms = sorted_ps
        .iter()
        .map(|p| ComponentTerm {
            name: p.name.clone(),
            dim: p.dim,
            deg: p.deg,
            term: p.deg * (pi(p.dim, q) - pi(p.dim + d1 - n, q)),
        })
        .collect();
    let mut report = BoundReport::new(BoundKind::Question1, Some(n), q, terms, Some(pi(2 * d1 - n, q)));
    report.order = Some(order);
    let thm = bound_bn(ps, n, q, Mode::Ambient)?.total;
    Ok(report.compare(BoundKind::Projective, thm))
}

/// δ q^d + π_{d-1}.
pub fn tubular_count<T: Count>(delta: T, d: i64, q: T) -> Result<T, BoundError> {
    check_q(q)?;
    if delta < T::one() || d < 1 {
        return Err(BoundError::BadParameters(format!("need degree >= 1 and d >= 1, got {delta}, {d}")));
    }
    Ok(delta * ipow(q, d as u32) + pi(d - 1, q))
}

/// The tubular count next to the equidimensional bound in P^n.
pub fn tubular_report<T: Count>(delta: T, d: i64, n: i64, q: T) -> Result<BoundReport<T>, BoundError> {
    let total = tubular_count(delta, d, q)?;
    let term = ComponentTerm {
        name: "tubular".into(),
        dim: d,
        deg: delta,
        term: delta * ipow(q, d as u32),
    };
    let report = BoundReport::new(BoundKind::Tubular, Some(n), q, vec![term], Some(pi(d - 1, q)));
    debug_assert_eq!(report.total, total);
    let eq = bound_equidimensional(&[Part { name: "X".into(), dim: d, deg: delta }], n, q)?;
    Ok(report.compare(BoundKind::Equidimensional, eq.total))
}

/// Both sides of the key inequality for nonlinear components that are
/// not in any hyperplane, plus the chart inequality q^d ≤ π_d - π_{2d-n}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LemmaMargins<T: Count> {
    /// δ(π_d - π_{2d-n})
    pub lhs: T,
    /// δ(π_d - π_{2d-n+1}) + π_{2d-n+1}
    pub rhs: T,
    pub margin: T,
    /// (δ-1) q^{2d-n+1} - π_{2d-n}, which equals the margin when
    /// 2d - n + 1 ≥ 0; absent otherwise.
    pub closed_form: Option<T>,
    /// π_d - π_{2d-n} - q^d
    pub chart_margin: T,
}

pub fn lemma48_margin<T: Count>(d: i64, delta: T, n: i64, q: T) -> Result<LemmaMargins<T>, BoundError> {
    if d <= 0 || delta <= T::one() || q < T::of(2) || n <= d {
        return Err(BoundError::BadParameters(format!(
            "need d > 0, degree > 1, q >= 2 and n > d; got d = {d}, degree = {delta}, n = {n}, q = {q}"
        )));
    }
    let e = 2 * d - n;
    let lhs = delta * (pi(d, q) - pi(e, q));
    let rhs = delta * (pi(d, q) - pi(e + 1, q)) + pi(e + 1, q);
    let closed_form = (e + 1 >= 0).then(|| (delta - T::one()) * ipow(q, (e + 1) as u32) - pi(e, q));
    Ok(LemmaMargins {
        lhs,
        rhs,
        margin: lhs - rhs,
        closed_form,
        chart_margin: pi(d, q) - pi(e, q) - ipow(q, d as u32),
    })
}

/// How B_n relates to q times its section form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScaleRelation<T: Count> {
    pub ambient: T,
    pub section: T,
    /// ambient - q * section
    pub adjustment: T,
    /// Σ_{2d_i < n} δ_i + [2D ≥ n]: the part that multiplication by q
    /// does not reproduce.
    pub predicted: T,
    /// Components whose ambient term is exactly q times the section term.
    pub exact_terms: Vec<bool>,
}

pub fn scale_relation<T: Count>(ps: &[Part<T>], n: i64, q: T) -> Result<ScaleRelation<T>, BoundError> {
    let a = bound_bn(ps, n, q, Mode::Ambient)?;
    let s = bound_bn(ps, n, q, Mode::Section)?;
    let big_d = ps.iter().map(|p| p.dim).max().unwrap_or(-1);
    let mut predicted = if 2 * big_d >= n { T::one() } else { T::zero() };
    for p in ps {
        if 2 * p.dim < n {
            predicted = predicted + p.deg;
        }
    }
    let exact_terms = a
        .per_component
        .iter()
        .zip(&s.per_component)
        .map(|(x, y)| x.term == q * y.term)
        .collect();
    Ok(ScaleRelation {
        ambient: a.total,
        section: s.total,
        adjustment: a.total - q * s.total,
        predicted,
        exact_terms,
    })
}

/// The (dimension, degree) sequence of a loaded variety; components with
/// empty scheme are dropped.
pub fn variety_parts(v: &Variety) -> Vec<Part<i64>> {
    v.sequence()
        .into_iter()
        .map(|(name, dim, deg)| Part { name, dim, deg })
        .collect()
}

/// Evaluates a bound on a loaded variety and records which hypotheses
/// were machine-checked. Certified redundancy is an error.
pub fn bound_for_variety(v: &Variety, kind: BoundKind) -> Result<BoundReport<i64>, BoundError> {
    if v.irredundancy == Irredundancy::Violated {
        let c = &v.containments[0];
        return Err(BoundError::NotIrredundant(format!("{} lies in {}", c.inner, c.outer)));
    }
    let ps = variety_parts(v);
    let n = v.n as i64;
    let q = v.field.order() as i64;
    let mut report = match kind {
        BoundKind::Affine => bound_affine(&ps, q)?,
        BoundKind::Projective => bound_bn(&ps, n, q, Mode::Ambient)?,
        BoundKind::Section => bound_bn(&ps, n, q, Mode::Section)?,
        BoundKind::Equidimensional => bound_equidimensional(&ps, n, q)?,
        BoundKind::Question1 => bound_question1(&ps, n, q)?,
        BoundKind::Serre => {
            if ps.len() != 1 || ps[0].dim != n - 1 {
                return Err(BoundError::BadSequence("expected a single hypersurface component".into()));
            }
            bound_serre(n, ps[0].deg, q)?
        }
        BoundKind::LinearArrangement => {
            if v.components.iter().any(|c| !c.is_linear) {
                return Err(BoundError::BadSequence("every component must be linear".into()));
            }
            let dims: Vec<i64> = ps.iter().map(|p| p.dim).collect();
            let mut r = bound_linear_arrangement(&dims, n, q)?.report;
            r.hypotheses.insert("linear_components".into(), HypothesisStatus::Verified);
            r
        }
        BoundKind::Tubular => {
            if ps.len() != 1 {
                return Err(BoundError::BadSequence("the tubular count takes one (d, degree) pair".into()));
            }
            tubular_report(ps[0].deg, ps[0].dim, n, q)?
        }
    };
    let irredundant = match v.irredundancy {
        Irredundancy::Verified => HypothesisStatus::Verified,
        _ => HypothesisStatus::Declared,
    };
    // linear subspaces are irreducible; anything else is taken on trust
    let irreducible = if v.components.iter().all(|c| c.is_linear) {
        HypothesisStatus::Verified
    } else {
        HypothesisStatus::Declared
    };
    report.hypotheses.insert("irredundant".into(), irredundant);
    report.hypotheses.insert("irreducible_components".into(), irreducible);
    Ok(report)
}
