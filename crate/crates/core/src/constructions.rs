//! Unions of linear subspaces whose point counts meet the bounds:
//! partial spreads (pairwise disjoint), flowers (pairwise meeting in one
//! common core), and arrangements with a dominant first member.
//!
//! Spreads with n = 2d + 1 come from field reduction: identify F_q^{2(d+1)}
//! with GF(q^{d+1})^2 and take the subspaces {(x, λx)} and {(0, x)}.
//! Other spreads are packed greedily, with no claim of optimality. A
//! flower with core M is a spread in the quotient by M, lifted back.

use std::collections::HashSet;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::bounds::{bound_linear_arrangement, BoundError};
use crate::gf::{Fe, GaloisField};
use crate::linalg::{self, Row};
use crate::mpoly::Polynomial;
use crate::projgeom::{pi, LinearSubspace, ProjectivePoint};
use crate::variety::{
    count_points, write_variety, Component, ComponentDoc, Variety, VarietyError, DEFAULT_POINT_BUDGET,
};

/// Subspace candidates examined before a search gives up.
const SEARCH_LIMIT: u64 = 2_000_000;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("asked for {requested} members, the builder reached {achieved}")]
    Infeasible { requested: usize, achieved: usize },
    #[error("no subspace of dimension {dim} satisfies the constraints for member {index}")]
    NoCandidate { index: usize, dim: i64 },
    #[error("invalid configuration: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

// Univariate polynomials over a finite field, ascending coefficients,
// without trailing zeros.

fn trim(mut a: Vec<Fe>) -> Vec<Fe> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn poly_rem(f: &GaloisField, a: &[Fe], g: &[Fe]) -> Vec<Fe> {
    let mut r = trim(a.to_vec());
    let lead_inv = f.inv(*g.last().expect("nonzero divisor")).expect("nonzero");
    while r.len() >= g.len() {
        let shift = r.len() - g.len();
        let c = f.mul(*r.last().expect("nonempty"), lead_inv);
        for (i, &gi) in g.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, gi));
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(f: &GaloisField, a: &[Fe], b: &[Fe], g: &[Fe]) -> Vec<Fe> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![Fe::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = f.add(r[i + j], f.mul(x, y));
        }
    }
    poly_rem(f, &r, g)
}

/// Monic polynomials of degree `deg`, in code order of the lower
/// coefficients.
fn monic_polys(f: &GaloisField, deg: usize) -> impl Iterator<Item = Vec<Fe>> + '_ {
    let q = f.order() as u64;
    (0..q.pow(deg as u32)).map(move |mut idx| {
        let mut p = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            p.push(Fe((idx % q) as u32));
            idx /= q;
        }
        p.push(Fe::ONE);
        p
    })
}

fn is_irreducible(f: &GaloisField, g: &[Fe]) -> bool {
    let m = g.len() - 1;
    (1..=m / 2).all(|k| monic_polys(f, k).all(|h| !poly_rem(f, g, &h).is_empty()))
}

/// The first irreducible monic polynomial of degree m over the field.
pub fn irreducible_poly(f: &GaloisField, m: usize) -> Vec<Fe> {
    monic_polys(f, m)
        .find(|g| is_irreducible(f, g))
        .expect("irreducible polynomials exist in every degree")
}

/// The q^{d+1} + 1 members of the field-reduction spread of P^{2d+1}.
fn field_reduction_spread(f: &GaloisField, d: usize, limit: usize) -> Vec<LinearSubspace> {
    let m = d + 1;
    let n = 2 * m - 1;
    let g = irreducible_poly(f, m);
    let q = f.order() as u64;
    let total = q.pow(m as u32) + 1;
    let mut out = Vec::new();
    for idx in 0..total.min(limit as u64) {
        let rows: Vec<Row> = if idx + 1 == total {
            (0..m)
                .map(|i| {
                    let mut r = vec![Fe::ZERO; 2 * m];
                    r[m + i] = Fe::ONE;
                    r
                })
                .collect()
        } else {
            let mut c = idx;
            let lambda: Vec<Fe> = (0..m)
                .map(|_| {
                    let v = Fe((c % q) as u32);
                    c /= q;
                    v
                })
                .collect();
            let lambda = trim(lambda);
            (0..m)
                .map(|i| {
                    let mut yi = vec![Fe::ZERO; i + 1];
                    yi[i] = Fe::ONE;
                    let img = poly_mulmod(f, &lambda, &yi, &g);
                    let mut r = vec![Fe::ZERO; 2 * m];
                    r[i] = Fe::ONE;
                    for (k, &c) in img.iter().enumerate() {
                        r[m + k] = c;
                    }
                    r
                })
                .collect()
        };
        out.push(LinearSubspace::from_rows(f, n, &rows).expect("rows have 2m entries"));
    }
    out
}

/// All projective subspaces of dimension `dim` in P^n, by pivot columns
/// and then free entries in code order.
pub fn subspaces(f: &GaloisField, n: usize, dim: i64) -> Box<dyn Iterator<Item = LinearSubspace> + '_> {
    let k = (dim + 1) as usize;
    let cols = n + 1;
    if dim < 0 || k > cols {
        return Box::new(std::iter::empty());
    }
    let mut combos = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        combos.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < cols - k + i) else {
            break;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    let q = f.order() as u64;
    Box::new(combos.into_iter().flat_map(move |piv| {
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|t| {
                let piv = piv.clone();
                (piv[t] + 1..cols).filter(move |c| !piv.contains(c)).map(move |c| (t, c))
            })
            .collect();
        let count = q.pow(free.len() as u32);
        (0..count).map(move |mut idx| {
            let mut rows = vec![vec![Fe::ZERO; cols]; k];
            for (t, &p) in piv.iter().enumerate() {
                rows[t][p] = Fe::ONE;
            }
            for &(t, c) in free.iter().rev() {
                rows[t][c] = Fe((idx % q) as u32);
                idx /= q;
            }
            LinearSubspace::from_rows(f, n, &rows).expect("sized rows")
        })
    }))
}

fn disjoint(f: &GaloisField, a: &LinearSubspace, b: &LinearSubspace) -> bool {
    let mut rows = a.rows().to_vec();
    rows.extend(b.rows().iter().cloned());
    linalg::rank(f, &rows, a.ambient() + 1) == a.rows().len() + b.rows().len()
}

/// Common interface of spreads and flowers.
pub trait LinearConfiguration {
    fn n(&self) -> usize;
    fn d(&self) -> usize;
    fn members(&self) -> &[LinearSubspace];
    /// Checks the defining intersection pattern by rank computations.
    fn validate(&self, field: &GaloisField) -> Result<(), ConstructionError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpreadMethod {
    FieldReduction,
    Greedy,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpreadSpec {
    pub n: usize,
    pub d: usize,
    pub method: SpreadMethod,
    pub members: Vec<LinearSubspace>,
}

impl LinearConfiguration for SpreadSpec {
    fn n(&self) -> usize {
        self.n
    }
    fn d(&self) -> usize {
        self.d
    }
    fn members(&self) -> &[LinearSubspace] {
        &self.members
    }
    fn validate(&self, f: &GaloisField) -> Result<(), ConstructionError> {
        if 2 * self.d >= self.n {
            return Err(ConstructionError::InvalidSpec(format!("2d = {} is not below n = {}", 2 * self.d, self.n)));
        }
        check_dims(&self.members, self.n, self.d)?;
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i + 1..] {
                if !disjoint(f, a, b) {
                    return Err(ConstructionError::InvalidSpec("two members meet".into()));
                }
            }
        }
        Ok(())
    }
}

fn check_dims(members: &[LinearSubspace], n: usize, d: usize) -> Result<(), ConstructionError> {
    if members.is_empty() {
        return Err(ConstructionError::InvalidSpec("no members".into()));
    }
    for m in members {
        if m.ambient() != n || m.dim() != d as i64 {
            return Err(ConstructionError::InvalidSpec(format!(
                "member of dimension {} in P^{}, expected {} in P^{}",
                m.dim(),
                m.ambient(),
                d,
                n
            )));
        }
    }
    Ok(())
}

pub fn build_partial_spread(n: usize, d: usize, r: usize, f: &GaloisField) -> Result<SpreadSpec, ConstructionError> {
    if 2 * d >= n {
        return Err(ConstructionError::BadParameters(format!("a spread needs 2d < n, got d = {d}, n = {n}")));
    }
    if r == 0 {
        return Err(ConstructionError::BadParameters("need at least one member".into()));
    }
    let (method, members) = if n == 2 * d + 1 {
        (SpreadMethod::FieldReduction, field_reduction_spread(f, d, r))
    } else {
        let mut chosen: Vec<LinearSubspace> = Vec::new();
        let mut covered: HashSet<ProjectivePoint> = HashSet::new();
        for cand in subspaces(f, n, d as i64).take(SEARCH_LIMIT as usize) {
            let pts = cand.points(f);
            if pts.iter().any(|p| covered.contains(p)) {
                continue;
            }
            covered.extend(pts);
            chosen.push(cand);
            if chosen.len() == r {
                break;
            }
        }
        (SpreadMethod::Greedy, chosen)
    };
    if members.len() < r {
        return Err(ConstructionError::Infeasible {
            requested: r,
            achieved: members.len(),
        });
    }
    let spec = SpreadSpec { n, d, method, members };
    spec.validate(f)?;
    Ok(spec)
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowerSpec {
    pub n: usize,
    pub d: usize,
    pub core: LinearSubspace,
    pub petals: Vec<LinearSubspace>,
}

impl LinearConfiguration for FlowerSpec {
    fn n(&self) -> usize {
        self.n
    }
    fn d(&self) -> usize {
        self.d
    }
    fn members(&self) -> &[LinearSubspace] {
        &self.petals
    }
    fn validate(&self, f: &GaloisField) -> Result<(), ConstructionError> {
        if self.d >= self.n || 2 * self.d < self.n {
            return Err(ConstructionError::InvalidSpec(format!(
                "a flower needs d < n <= 2d, got d = {}, n = {}",
                self.d, self.n
            )));
        }
        check_dims(&self.petals, self.n, self.d)?;
        if self.core.dim() != (2 * self.d - self.n) as i64 {
            return Err(ConstructionError::InvalidSpec("core has the wrong dimension".into()));
        }
        for (i, a) in self.petals.iter().enumerate() {
            for b in &self.petals[i + 1..] {
                if a.intersection(f, b) != self.core {
                    return Err(ConstructionError::InvalidSpec("two petals do not meet exactly in the core".into()));
                }
            }
        }
        Ok(())
    }
}

pub fn build_flower(n: usize, d: usize, r: usize, f: &GaloisField) -> Result<FlowerSpec, ConstructionError> {
    if d >= n || 2 * d < n {
        return Err(ConstructionError::BadParameters(format!("a flower needs d < n <= 2d, got d = {d}, n = {n}")));
    }
    if r < 2 {
        return Err(ConstructionError::BadParameters("a flower needs at least two petals".into()));
    }
    let e = 2 * d - n;
    let core = LinearSubspace::coordinate(n, &(0..=e).collect::<Vec<_>>());
    // quotient P^{2(n-d)-1}, petals become (n-d-1)-dimensional
    let dq = n - d - 1;
    let down = field_reduction_spread(f, dq, r);
    if down.len() < r {
        return Err(ConstructionError::Infeasible {
            requested: r,
            achieved: down.len(),
        });
    }
    let petals = down
        .iter()
        .map(|m| {
            let mut rows: Vec<Row> = core.rows().to_vec();
            for row in m.rows() {
                let mut lifted = vec![Fe::ZERO; e + 1];
                lifted.extend_from_slice(row);
                rows.push(lifted);
            }
            LinearSubspace::from_rows(f, n, &rows).expect("lifted rows have n + 1 entries")
        })
        .collect();
    let spec = FlowerSpec { n, d, core, petals };
    spec.validate(f)?;
    Ok(spec)
}

/// δ(π_d - π_{2d-n}) + π_{2d-n} with δ the member count, after checking
/// that the configuration really is a spread or flower.
pub fn exact_linear_count(spec: &impl LinearConfiguration, f: &GaloisField) -> Result<i64, ConstructionError> {
    spec.validate(f)?;
    let (n, d) = (spec.n() as i64, spec.d() as i64);
    let q = f.order() as i64;
    let delta = spec.members().len() as i64;
    Ok(delta * (pi(d, q) - pi(2 * d - n, q)) + pi(2 * d - n, q))
}

/// Linear subspaces L_1, ..., L_r (sorted by decreasing dimension) whose
/// union has as many points as the linear-arrangement bound allows.
#[derive(Debug, Clone, Serialize)]
pub struct Arrangement {
    pub n: usize,
    /// Input positions in member order.
    pub order: Vec<usize>,
    pub members: Vec<LinearSubspace>,
}

/// Builds the arrangement: L_1 and L_2 are coordinate subspaces meeting in
/// dimension max(d_1 + d_2 - n, -1); each later L_i is the first subspace
/// in enumeration order that meets L_1 in dimension max(d_i + d_1 - n, -1)
/// inside L_1 ∩ L_2 and meets every earlier L_j only inside L_1.
pub fn build_arrangement(dims: &[i64], n: usize, f: &GaloisField) -> Result<Arrangement, ConstructionError> {
    if dims.len() < 2 {
        return Err(ConstructionError::BadParameters("need at least two members".into()));
    }
    if let Some(&d) = dims.iter().find(|&&d| d < 0 || d >= n as i64) {
        return Err(ConstructionError::BadParameters(format!("dimension {d} outside 0..{n}")));
    }
    let mut order: Vec<usize> = (0..dims.len()).collect();
    order.sort_by(|&a, &b| dims[b].cmp(&dims[a]));
    let ds: Vec<i64> = order.iter().map(|&i| dims[i]).collect();
    let ni = n as i64;
    let d1 = ds[0] as usize;
    let l1 = LinearSubspace::coordinate(n, &(0..=d1).collect::<Vec<_>>());
    let c = (ds[0] + ds[1] - ni).max(-1);
    let mut idx: Vec<usize> = (0..=c).map(|i| i as usize).collect();
    idx.extend(d1 + 1..=d1 + (ds[1] - c) as usize);
    let l2 = LinearSubspace::coordinate(n, &idx);
    let k = l1.intersection(f, &l2);
    let mut members = vec![l1.clone(), l2];
    for (i, &di) in ds.iter().enumerate().skip(2) {
        let want = (di + ds[0] - ni).max(-1);
        let found = subspaces(f, n, di).take(SEARCH_LIMIT as usize).find(|cand| {
            let meet = l1.intersection(f, cand);
            meet.dim() == want
                && k.contains(f, &meet)
                && members[1..].iter().all(|m| l1.contains(f, &m.intersection(f, cand)))
        });
        match found {
            Some(m) => members.push(m),
            None => return Err(ConstructionError::NoCandidate { index: i + 1, dim: di }),
        }
    }
    Ok(Arrangement { n, order, members })
}

impl Arrangement {
    pub fn dims(&self) -> Vec<i64> {
        self.members.iter().map(LinearSubspace::dim).collect()
    }

    /// The linear-arrangement bound for these dimensions.
    pub fn bound(&self, f: &GaloisField) -> Result<i64, ConstructionError> {
        Ok(bound_linear_arrangement(&self.dims(), self.n as i64, f.order() as i64)?.report.total)
    }
}

/// Union of linear subspaces as a variety, one linear component each.
pub fn linear_variety(
    field: &Arc<GaloisField>,
    n: usize,
    members: &[LinearSubspace],
    prefix: &str,
) -> Result<Variety, ConstructionError> {
    let comps = members
        .iter()
        .enumerate()
        .map(|(i, m)| Component::linear(&format!("{prefix}{}", i + 1), field, m))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Variety::new(Arc::clone(field), n, comps)?)
}

/// Variety-format document with one linear component per member.
pub fn linear_document(field: &Arc<GaloisField>, n: usize, members: &[LinearSubspace], prefix: &str) -> String {
    let comps: Vec<ComponentDoc> = members
        .iter()
        .enumerate()
        .map(|(i, m)| ComponentDoc {
            name: format!("{prefix}{}", i + 1),
            dim: Some(m.dim()),
            deg: Some(1),
            irreducible: true,
            polys: m
                .equations(field)
                .iter()
                .map(|row| Polynomial::linear_form(Arc::clone(field), row).to_text())
                .collect(),
        })
        .collect();
    write_variety(field, n, &comps)
}

/// Points of the union, counted by collecting the points of each member.
pub fn union_point_count(f: &GaloisField, members: &[LinearSubspace]) -> usize {
    let mut all = HashSet::new();
    for m in members {
        all.extend(m.points(f));
    }
    all.len()
}

/// Formula value next to an enumerated count of the same union.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub formula: i64,
    /// Absent when P^n is too large to enumerate.
    pub enumerated: Option<u64>,
    pub agrees: bool,
}

/// Enumerates P^n when it has at most `limit` points and compares with
/// the given formula value.
pub fn certify(
    field: &Arc<GaloisField>,
    n: usize,
    members: &[LinearSubspace],
    formula: i64,
    limit: u64,
) -> Result<Certificate, ConstructionError> {
    let size = crate::projgeom::point_count(n, field.order());
    let enumerated = if size <= limit.min(DEFAULT_POINT_BUDGET) {
        let v = linear_variety(field, n, members, "L")?;
        Some(count_points(&v, DEFAULT_POINT_BUDGET)?.value)
    } else {
        None
    };
    Ok(Certificate {
        formula,
        enumerated,
        agrees: enumerated.is_none_or(|e| e as i64 == formula),
    })
}
