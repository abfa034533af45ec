//! Point-hyperplane incidence graphs on enumerated varieties.
//!
//! Fix a rational point P. One side of the graph holds rational points of
//! X other than P, the other the rational hyperplanes through P, and Q ~ H
//! when Q ∈ H. Two hyperplanes through P contain any other point Q in
//! exactly π_{n-2} ways, so the edge count is (|X(F_q)| - 1)·π_{n-2}. The
//! census builds the graph from data and checks that identity together
//! with the upper estimates on each hyperplane valency.
//!
//! With a linear component L ∋ P the graph instead uses the points off L
//! and the hyperplanes through P not containing L.

use std::collections::HashSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{bound_bn, variety_parts, BoundError, Mode};
use crate::projgeom::{enumerate_hyperplanes, pi, point_count, HyperplaneFilter, ProjError, ProjectivePoint};
use crate::variety::{classify_components, count_projective, Variety, VarietyError};

#[derive(Debug, Error)]
pub enum IncidenceError {
    #[error("the base point is not a rational point of the variety")]
    PointNotOnVariety,
    #[error("the base point does not lie on {0}")]
    PointNotOnL(String),
    #[error("component {0} is not a linear subspace")]
    NotLinear(String),
    #[error("component {0} is a hyperplane")]
    LIsHyperplane(String),
    #[error("no component named {0}")]
    UnknownComponent(String),
    #[error("enumeration needs {needed} points, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error(transparent)]
    Variety(VarietyError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Proj(#[from] ProjError),
}

impl From<VarietyError> for IncidenceError {
    fn from(e: VarietyError) -> Self {
        match e {
            VarietyError::BudgetExceeded { needed, budget } => IncidenceError::BudgetExceeded { needed, budget },
            other => IncidenceError::Variety(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CensusRegime {
    Assumption1,
    LinearComponent,
}

#[derive(Debug, Clone, Serialize)]
pub struct HyperplaneValency {
    /// Coefficients of the defining form.
    pub form: ProjectivePoint,
    pub text: String,
    pub valency: u64,
    /// |(X ∩ H)(F_q)| from a separate enumeration of the section, when the
    /// budget allows.
    pub section_count: Option<u64>,
}

/// Upper estimates checked against the census of a variety satisfying
/// Assumption 1 (no component inside a rational hyperplane).
#[derive(Debug, Clone, Serialize)]
pub struct InequalityChain {
    /// B_{n-1} of a hyperplane section.
    pub section_bound: i64,
    /// Every valency is at most section_bound - 1.
    pub valencies_ok: bool,
    pub max_valency: u64,
    /// edge_count ≤ π_{n-1}(section_bound - 1).
    pub aggregate_rhs: i64,
    pub aggregate_ok: bool,
    pub branch: Branch,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Branch {
    /// section_bound ≥ π_{n-1}: then B_n ≥ π_n, so B_n holds trivially.
    Saturated { bn: i64, pi_n: i64, holds: bool },
    /// section_bound < π_{n-1}: the count is at most
    /// 1 + (π_{n-1}/π_{n-2})(section_bound - 1), stored as a fraction.
    Averaged {
        numerator: i64,
        denominator: i64,
        observed: u64,
        holds: bool,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct IncidenceCensus {
    pub regime: CensusRegime,
    pub n: usize,
    pub q: u32,
    pub base_point: ProjectivePoint,
    /// The linear component for the linear-component census.
    pub linear_component: Option<String>,
    pub point_count: u64,
    pub v1_size: u64,
    pub v2_size: u64,
    pub expected_v2_size: u64,
    pub edge_count: u64,
    pub per_point_valency: u64,
    pub valencies: Vec<HyperplaneValency>,
    /// edge_count = v1_size × per_point_valency.
    pub identity_holds: bool,
    /// Each valency matches its section count minus the removed points.
    pub sections_agree: Option<bool>,
    pub chain: Option<InequalityChain>,
}

impl IncidenceCensus {
    /// All checks that were run passed.
    pub fn consistent(&self) -> bool {
        let chain_ok = self.chain.as_ref().is_none_or(|c| {
            c.valencies_ok
                && c.aggregate_ok
                && match c.branch {
                    Branch::Saturated { holds, .. } | Branch::Averaged { holds, .. } => holds,
                }
        });
        self.identity_holds
            && self.v2_size == self.expected_v2_size
            && self.valencies.iter().map(|v| v.valency).sum::<u64>() == self.edge_count
            && self.sections_agree.unwrap_or(true)
            && chain_ok
    }

    /// The counting argument written out with this census's numbers.
    pub fn trace(&self) -> String {
        let mut s = String::new();
        let n = self.n as i64;
        let _ = writeln!(s, "regime {:?}, n = {}, q = {}", self.regime, self.n, self.q);
        let _ = writeln!(s, "|X(F_q)| = {}", self.point_count);
        let _ = writeln!(s, "|V1| = {}", self.v1_size);
        let _ = writeln!(s, "|V2| = {} (expected {})", self.v2_size, self.expected_v2_size);
        let _ = writeln!(
            s,
            "|E| = {} = {} x {} : {}",
            self.edge_count,
            self.v1_size,
            self.per_point_valency,
            ok(self.identity_holds)
        );
        if let Some(c) = &self.chain {
            let _ = writeln!(
                s,
                "max valency {} <= B_{}(X.H) - 1 = {} : {}",
                c.max_valency,
                n - 1,
                c.section_bound - 1,
                ok(c.valencies_ok)
            );
            let _ = writeln!(
                s,
                "|E| = {} <= pi_{}(B_{} - 1) = {} : {}",
                self.edge_count,
                n - 1,
                n - 1,
                c.aggregate_rhs,
                ok(c.aggregate_ok)
            );
            match c.branch {
                Branch::Saturated { bn, pi_n, holds } => {
                    let _ = writeln!(s, "B_{} >= pi_{}, so B_{} = {} >= pi_{} = {} : {}", n - 1, n - 1, n, bn, n, pi_n, ok(holds));
                }
                Branch::Averaged {
                    numerator,
                    denominator,
                    observed,
                    holds,
                } => {
                    let _ = writeln!(
                        s,
                        "|X(F_q)| = {} <= 1 + pi_{}(B_{} - 1)/pi_{} = {}/{} : {}",
                        observed,
                        n - 1,
                        n - 1,
                        n - 2,
                        numerator,
                        denominator,
                        ok(holds)
                    );
                }
            }
        }
        s
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

struct Graph {
    valencies: Vec<HyperplaneValency>,
    v2_size: u64,
    edge_count: u64,
}

fn build_graph(
    v: &Variety,
    v1: &[ProjectivePoint],
    filter: HyperplaneFilter<'_>,
    removed: &HashSet<ProjectivePoint>,
    budget: u64,
) -> Result<(Graph, Option<bool>), IncidenceError> {
    let field = &v.field;
    let hyperplanes = enumerate_hyperplanes(v.n, field, filter)?;
    let sections = (hyperplanes.len() as u64).saturating_mul(point_count(v.n, field.order())) <= budget;
    let valencies = hyperplanes
        .par_iter()
        .map(|h| {
            let valency = v1.iter().filter(|p| h.contains_point(field, p)).count() as u64;
            let form = crate::mpoly::Polynomial::linear_form(field.clone(), h.form.coords());
            let section_count = if sections {
                Some(count_projective(field, v.n, &v.section_union(&form), budget)?)
            } else {
                None
            };
            Ok(HyperplaneValency {
                text: form.to_text(),
                form: h.form.clone(),
                valency,
                section_count,
            })
        })
        .collect::<Result<Vec<_>, VarietyError>>()?;
    let agree = sections.then(|| {
        valencies.iter().zip(&hyperplanes).all(|(val, h)| {
            let gone = removed.iter().filter(|p| h.contains_point(field, p)).count() as u64;
            val.section_count == Some(val.valency + gone)
        })
    });
    let edge_count = valencies.iter().map(|x| x.valency).sum();
    Ok((
        Graph {
            v2_size: valencies.len() as u64,
            valencies,
            edge_count,
        },
        agree,
    ))
}

/// Census for the graph on X(F_q) ∖ {P} and the hyperplanes through P.
/// The estimates against B_{n-1} are checked only when the classifier
/// confirms that no component lies in a rational hyperplane.
pub fn census_assumption1(v: &Variety, p: &ProjectivePoint, budget: u64) -> Result<IncidenceCensus, IncidenceError> {
    let points = v.rational_points(budget)?;
    if !points.contains(p) {
        return Err(IncidenceError::PointNotOnVariety);
    }
    let n = v.n as i64;
    let q = v.field.order() as i64;
    let v1: Vec<ProjectivePoint> = points.iter().filter(|x| *x != p).cloned().collect();
    let removed = HashSet::from([p.clone()]);
    let filter = HyperplaneFilter {
        through: Some(p),
        ..Default::default()
    };
    let (g, sections_agree) = build_graph(v, &v1, filter, &removed, budget)?;
    let per_point = pi(n - 2, q) as u64;
    let point_count = points.len() as u64;

    let chain = if classify_components(v).assumption1 {
        let ps = variety_parts(v);
        let section_bound = bound_bn(&ps, n, q, Mode::Section)?.total;
        let max_valency = g.valencies.iter().map(|x| x.valency).max().unwrap_or(0);
        let aggregate_rhs = pi(n - 1, q) * (section_bound - 1);
        let branch = if section_bound >= pi(n - 1, q) {
            let bn = bound_bn(&ps, n, q, Mode::Ambient)?.total;
            Branch::Saturated {
                bn,
                pi_n: pi(n, q),
                holds: bn >= pi(n, q),
            }
        } else {
            let denominator = pi(n - 2, q);
            let numerator = denominator + pi(n - 1, q) * (section_bound - 1);
            Branch::Averaged {
                numerator,
                denominator,
                observed: point_count,
                holds: (point_count as i64) * denominator <= numerator,
            }
        };
        Some(InequalityChain {
            section_bound,
            valencies_ok: (max_valency as i64) < section_bound,
            max_valency,
            aggregate_rhs,
            aggregate_ok: (g.edge_count as i64) <= aggregate_rhs,
            branch,
        })
    } else {
        None
    };

    Ok(IncidenceCensus {
        regime: CensusRegime::Assumption1,
        n: v.n,
        q: v.field.order(),
        base_point: p.clone(),
        linear_component: None,
        point_count,
        v1_size: v1.len() as u64,
        v2_size: g.v2_size,
        expected_v2_size: pi(n - 1, q) as u64,
        identity_holds: g.edge_count == v1.len() as u64 * per_point,
        edge_count: g.edge_count,
        per_point_valency: per_point,
        valencies: g.valencies,
        sections_agree,
        chain,
    })
}

/// Census for the graph on (X ∖ L)(F_q) and the hyperplanes through P
/// that do not contain the linear component L.
pub fn census_linear_component(
    v: &Variety,
    l_name: &str,
    p: &ProjectivePoint,
    budget: u64,
) -> Result<IncidenceCensus, IncidenceError> {
    let comp = v
        .component(l_name)
        .ok_or_else(|| IncidenceError::UnknownComponent(l_name.to_string()))?;
    let l = comp
        .linear_subspace()
        .ok_or_else(|| IncidenceError::NotLinear(l_name.to_string()))?;
    let n = v.n as i64;
    let d_l = l.dim();
    if d_l == n - 1 {
        return Err(IncidenceError::LIsHyperplane(l_name.to_string()));
    }
    if !l.contains_point(&v.field, p) {
        return Err(IncidenceError::PointNotOnL(l_name.to_string()));
    }
    let q = v.field.order() as i64;
    let points = v.rational_points(budget)?;
    let (on_l, v1): (Vec<ProjectivePoint>, Vec<ProjectivePoint>) =
        points.iter().cloned().partition(|x| l.contains_point(&v.field, x));
    let removed: HashSet<ProjectivePoint> = on_l.into_iter().collect();
    let filter = HyperplaneFilter {
        through: Some(p),
        excluding_containing: Some(&l),
        ..Default::default()
    };
    let (g, sections_agree) = build_graph(v, &v1, filter, &removed, budget)?;
    let per_point = (pi(n - 2, q) - pi(n - d_l - 2, q)) as u64;
    Ok(IncidenceCensus {
        regime: CensusRegime::LinearComponent,
        n: v.n,
        q: v.field.order(),
        base_point: p.clone(),
        linear_component: Some(l_name.to_string()),
        point_count: points.len() as u64,
        v1_size: v1.len() as u64,
        v2_size: g.v2_size,
        expected_v2_size: (pi(n - 1, q) - pi(n - d_l - 1, q)) as u64,
        identity_holds: g.edge_count == v1.len() as u64 * per_point,
        edge_count: g.edge_count,
        per_point_valency: per_point,
        valencies: g.valencies,
        sections_agree,
        chain: None,
    })
}
