//! Exhaustive verification sweeps. Each row pairs an observed value with
//! the bound it must respect; a sweep fails when any row is violated.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{
    bound_equidimensional, bound_linear_arrangement, bound_serre, lemma48_margin, parts, BoundError, BoundKind,
};
use crate::constructions::{
    build_arrangement, build_flower, build_partial_spread, linear_variety, union_point_count, ConstructionError,
};
use crate::gf::{Fe, GaloisField};
use crate::mpoly::{monomials_of_degree, CompiledPoly, Monomial, Polynomial};
use crate::projgeom::{enumerate_points, pi, point_count, LinearSubspace};
use crate::scalar::ipow;
use crate::variety::{count_points, VarietyError};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("the sweep needs {needed} point evaluations, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("bad sweep parameters: {0}")]
    BadParameters(String),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Variety(#[from] VarietyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SweepFamily {
    /// Every hypersurface of the given degree in P^n(F_q), up to scalar.
    AllHypersurfaces { n: usize, q: u32, degree: u32 },
    /// The spreads, flowers and arrangements the builders produce over F_q.
    Constructions { q: u32 },
    /// π_k = qπ_{k-1} + 1 and π_k - π_l = q(π_{k-1} - π_{l-1}) for
    /// 0 ≤ l ≤ k ≤ max_index.
    IdentityGrid { qs: Vec<i64>, max_index: i64 },
    /// The component margin and chart margin from the bounds module for
    /// 1 ≤ d ≤ max_d, d < n ≤ max_n, 2 ≤ δ ≤ max_degree.
    LemmaGrid {
        qs: Vec<i64>,
        max_d: i64,
        max_n: i64,
        max_degree: i64,
    },
}

/// How a row is judged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// count ≤ bound
    AtMost,
    /// count = bound
    Equal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub kind: String,
    pub n: i64,
    pub q: i64,
    pub dims: Vec<i64>,
    pub degs: Vec<i64>,
    pub bound: i64,
    pub count: i64,
    pub tight: bool,
    pub hypotheses: Vec<String>,
    pub check: Check,
    /// What was counted, e.g. the form of a hypersurface.
    pub instance: String,
}

impl SweepRow {
    pub fn margin(&self) -> i64 {
        self.bound - self.count
    }

    pub fn violated(&self) -> bool {
        match self.check {
            Check::AtMost => self.count > self.bound,
            Check::Equal => self.count != self.bound,
        }
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(";")
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub spec: SweepFamily,
    pub rows: Vec<SweepRow>,
    pub violations: usize,
    /// Instances attaining the largest count, for hypersurface sweeps.
    pub extremal: Vec<String>,
    pub max_count: Option<i64>,
}

impl SweepReport {
    fn new(spec: SweepFamily, rows: Vec<SweepRow>) -> Self {
        let violations = rows.iter().filter(|r| r.violated()).count();
        SweepReport {
            spec,
            rows,
            violations,
            extremal: Vec::new(),
            max_count: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// CSV with columns `kind,n,q,dims,degs,bound,count,tight,hypotheses`;
    /// list-valued cells are `;`-separated.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["kind", "n", "q", "dims", "degs", "bound", "count", "tight", "hypotheses"])
            .expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.kind.clone(),
                r.n.to_string(),
                r.q.to_string(),
                join(&r.dims),
                join(&r.degs),
                r.bound.to_string(),
                r.count.to_string(),
                r.tight.to_string(),
                r.hypotheses.join(";"),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
    }
}

pub fn run_sweep(spec: &SweepFamily, budget: u64) -> Result<SweepReport, SweepError> {
    match spec {
        SweepFamily::AllHypersurfaces { n, q, degree } => hypersurface_sweep(*n, *q, *degree, budget),
        SweepFamily::Constructions { q } => construction_sweep(*q, budget),
        SweepFamily::IdentityGrid { qs, max_index } => identity_grid(qs, *max_index),
        SweepFamily::LemmaGrid {
            qs,
            max_d,
            max_n,
            max_degree,
        } => lemma_grid(qs, *max_d, *max_n, *max_degree),
    }
}

fn field(q: u32) -> Result<Arc<GaloisField>, SweepError> {
    GaloisField::with_order(q as u64)
        .map(GaloisField::shared)
        .map_err(|e| SweepError::BadParameters(e.to_string()))
}

/// Number of hypersurfaces visited: all nonzero forms for q = 2, forms
/// with leading coefficient 1 otherwise.
pub fn hypersurface_count(n: usize, q: u32, degree: u32) -> u64 {
    let m = monomials_of_degree(n + 1, degree).len() as u32;
    let q = q as u64;
    (q.pow(m) - 1) / (q - 1)
}

/// Coefficient vector of the idx-th form: the first nonzero coefficient
/// is 1, the rest run through element codes.
fn nth_form(q: u64, m: usize, idx: u64) -> Vec<u32> {
    // forms whose leading coefficient sits at position i number q^{m-1-i}
    let mut rest = idx;
    for lead in 0..m {
        let block = q.pow((m - 1 - lead) as u32);
        if rest < block {
            let mut c = vec![0u32; m];
            c[lead] = 1;
            for k in (lead + 1..m).rev() {
                c[k] = (rest % q) as u32;
                rest /= q;
            }
            return c;
        }
        rest -= block;
    }
    unreachable!("index beyond the form count")
}

fn hypersurface_sweep(n: usize, q: u32, degree: u32, budget: u64) -> Result<SweepReport, SweepError> {
    if n < 2 || degree == 0 {
        return Err(SweepError::BadParameters("need n >= 2 and degree >= 1".into()));
    }
    let f = field(q)?;
    let monos = monomials_of_degree(n + 1, degree);
    let forms = hypersurface_count(n, q, degree);
    let needed = forms.saturating_mul(point_count(n, q));
    if needed > budget {
        return Err(SweepError::BudgetExceeded { needed, budget });
    }
    // monomial values at every point, row per point
    let table: Vec<Vec<Fe>> = enumerate_points(n, &f)
        .map(|p| {
            monos
                .iter()
                .map(|m| CompiledPoly::new(&Polynomial::term(Arc::clone(&f), n + 1, m.clone(), Fe::ONE)).eval(&f, p.coords()))
                .collect()
        })
        .collect();
    let bound = bound_serre(n as i64, degree as i64, q as i64)?.total;
    let counts: Vec<i64> = (0..forms)
        .into_par_iter()
        .map(|idx| {
            let c = nth_form(q as u64, monos.len(), idx);
            table
                .iter()
                .filter(|vals| {
                    let mut acc = Fe::ZERO;
                    for (&ci, &v) in c.iter().zip(vals.iter()) {
                        if ci != 0 {
                            acc = f.add(acc, f.mul(Fe(ci), v));
                        }
                    }
                    acc.is_zero()
                })
                .count() as i64
        })
        .collect();
    let text = |idx: u64| {
        let c = nth_form(q as u64, monos.len(), idx);
        let terms: Vec<(Monomial, Fe)> = monos.iter().cloned().zip(c.into_iter().map(Fe)).collect();
        Polynomial::from_terms(Arc::clone(&f), n + 1, terms).to_text()
    };
    let rows = counts
        .iter()
        .enumerate()
        .map(|(idx, &count)| SweepRow {
            kind: BoundKind::Serre.token().into(),
            n: n as i64,
            q: q as i64,
            dims: vec![n as i64 - 1],
            degs: vec![degree as i64],
            bound,
            count,
            tight: count == bound,
            hypotheses: vec!["hypersurface".into()],
            check: Check::AtMost,
            instance: text(idx as u64),
        })
        .collect();
    let mut report = SweepReport::new(
        SweepFamily::AllHypersurfaces { n, q, degree },
        rows,
    );
    let max = counts.iter().copied().max();
    report.max_count = max;
    report.extremal = counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| Some(c) == max)
        .map(|(i, _)| text(i as u64))
        .collect();
    Ok(report)
}

struct Built {
    label: String,
    n: usize,
    kind: BoundKind,
    dims: Vec<i64>,
    members: Vec<LinearSubspace>,
    bound: i64,
}

fn construction_sweep(q: u32, budget: u64) -> Result<SweepReport, SweepError> {
    let f = field(q)?;
    let qi = q as i64;
    let mut built = Vec::new();
    let equi = |n: usize, d: usize, r: usize| -> Result<i64, SweepError> {
        Ok(bound_equidimensional(&parts(&[(d as i64, r as i64)]), n as i64, qi)?.total)
    };
    for (n, d, r) in [(3, 1, (qi * qi + 1) as usize), (3, 1, 2), (4, 1, 3)] {
        let s = build_partial_spread(n, d, r, &f)?;
        built.push(Built {
            label: format!("spread n={n} d={d} r={r}"),
            n,
            kind: BoundKind::Equidimensional,
            dims: vec![d as i64; r],
            members: s.members,
            bound: equi(n, d, r)?,
        });
    }
    for (n, d, r) in [(4, 2, 3), (3, 2, 2)] {
        let fl = build_flower(n, d, r, &f)?;
        built.push(Built {
            label: format!("flower n={n} d={d} r={r}"),
            n,
            kind: BoundKind::Equidimensional,
            dims: vec![d as i64; r],
            members: fl.petals,
            bound: equi(n, d, r)?,
        });
    }
    for (dims, n) in [(vec![2, 1], 3), (vec![2, 2], 4), (vec![1, 1], 3), (vec![2, 1, 1], 3)] {
        let a = build_arrangement(&dims, n, &f)?;
        built.push(Built {
            label: format!("arrangement n={n} dims={}", join(&dims)),
            n,
            kind: BoundKind::LinearArrangement,
            bound: bound_linear_arrangement(&dims, n as i64, qi)?.report.total,
            dims: a.dims(),
            members: a.members,
        });
    }
    let mut rows = Vec::new();
    for b in built {
        let union = union_point_count(&f, &b.members) as i64;
        let enumerated = if point_count(b.n, q) <= budget {
            let v = linear_variety(&f, b.n, &b.members, "L")?;
            Some(count_points(&v, budget)?.value as i64)
        } else {
            None
        };
        let degs = vec![1; b.dims.len()];
        rows.push(SweepRow {
            kind: b.kind.token().into(),
            n: b.n as i64,
            q: qi,
            dims: b.dims.clone(),
            degs: degs.clone(),
            bound: b.bound,
            count: union,
            tight: union == b.bound,
            hypotheses: vec!["linear_components".into()],
            check: Check::Equal,
            instance: b.label.clone(),
        });
        // the member-union count against a scan of P^n
        if let Some(e) = enumerated {
            rows.push(SweepRow {
                kind: "enumeration".into(),
                n: b.n as i64,
                q: qi,
                dims: b.dims,
                degs,
                bound: union,
                count: e,
                tight: e == union,
                hypotheses: vec!["linear_components".into()],
                check: Check::Equal,
                instance: b.label,
            });
        }
    }
    Ok(SweepReport::new(SweepFamily::Constructions { q }, rows))
}

fn check_qs(qs: &[i64]) -> Result<(), SweepError> {
    if qs.is_empty() || qs.iter().any(|&q| q < 2) {
        return Err(SweepError::BadParameters("need at least one q, each >= 2".into()));
    }
    Ok(())
}

fn identity_grid(qs: &[i64], max_index: i64) -> Result<SweepReport, SweepError> {
    check_qs(qs)?;
    let mut rows = Vec::new();
    for &q in qs {
        for k in 0..=max_index {
            rows.push(SweepRow {
                kind: "identity_step".into(),
                n: k,
                q,
                dims: vec![k],
                degs: Vec::new(),
                bound: pi(k, q),
                count: q * pi(k - 1, q) + 1,
                tight: true,
                hypotheses: Vec::new(),
                check: Check::Equal,
                instance: format!("pi_{k} = q pi_{} + 1", k - 1),
            });
            for l in 0..=k {
                rows.push(SweepRow {
                    kind: "identity_difference".into(),
                    n: k,
                    q,
                    dims: vec![k, l],
                    degs: Vec::new(),
                    bound: pi(k, q) - pi(l, q),
                    count: q * (pi(k - 1, q) - pi(l - 1, q)),
                    tight: true,
                    hypotheses: Vec::new(),
                    check: Check::Equal,
                    instance: format!("pi_{k} - pi_{l} = q (pi_{} - pi_{})", k - 1, l - 1),
                });
            }
        }
    }
    for r in &mut rows {
        r.tight = r.bound == r.count;
    }
    Ok(SweepReport::new(
        SweepFamily::IdentityGrid {
            qs: qs.to_vec(),
            max_index,
        },
        rows,
    ))
}

fn lemma_grid(qs: &[i64], max_d: i64, max_n: i64, max_degree: i64) -> Result<SweepReport, SweepError> {
    check_qs(qs)?;
    let mut rows = Vec::new();
    for &q in qs {
        for d in 1..=max_d {
            for n in d + 1..=max_n {
                for delta in 2..=max_degree {
                    let m = lemma48_margin(d, delta, n, q)?;
                    let base = |kind: &str, bound: i64, count: i64, instance: String| SweepRow {
                        kind: kind.into(),
                        n,
                        q,
                        dims: vec![d],
                        degs: vec![delta],
                        bound,
                        count,
                        tight: bound == count,
                        hypotheses: vec!["not_in_hyperplane".into()],
                        check: Check::AtMost,
                        instance,
                    };
                    rows.push(base("component_margin", m.lhs, m.rhs, format!("margin {}", m.margin)));
                    // the chart margin does not involve δ
                    if delta == 2 {
                        let total = pi(d, q) - pi(2 * d - n, q);
                        rows.push(base("chart_margin", total, ipow(q, d as u32), format!("margin {}", m.chart_margin)));
                    }
                }
            }
        }
    }
    Ok(SweepReport::new(
        SweepFamily::LemmaGrid {
            qs: qs.to_vec(),
            max_d,
            max_n,
            max_degree,
        },
        rows,
    ))
}
