//! Points, linear subspaces and hyperplanes of P^n(F_q), and the numbers
//! π_j = |P^j(F_q)|.
//!
//! Points are listed block by block: first those whose leading nonzero
//! coordinate is x0, then x1, and so on; inside a block the free tail
//! coordinates run lexicographically in element-code order. For n = 1,
//! q = 2 this gives (1:0), (1:1), (0:1).
//!
//! Hyperplanes through a point P are counted by π_{n-1} and every other
//! point lies on π_{n-2} of them, so the incidence graph of a point set
//! V1 against those hyperplanes has |V1| π_{n-2} edges. (One printed
//! version of this identity has π_{n-1} as the middle factor; π_{n-2} is
//! the one consistent with the per-point valency, and is what we use.)

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gf::{Fe, GaloisField};
use crate::linalg::{self, Row};
use crate::scalar::Count;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjError {
    #[error("expected {expected} homogeneous coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("inconsistent hyperplane filters: {0}")]
    InconsistentFilters(String),
}

/// π_j = 1 + q + ... + q^j, and 0 for j < 0. Panics on overflow.
pub fn pi<T: Count>(j: i64, q: T) -> T {
    let mut acc = T::zero();
    for _ in 0..=j {
        acc = acc
            .checked_mul(&q)
            .and_then(|v| v.checked_add(&T::one()))
            .unwrap_or_else(|| panic!("pi({j}, {q}) overflows the counting scalar"));
    }
    acc
}

/// Cached π_{-1} .. π_J for one q.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiSequence<T: Count> {
    q: T,
    values: Vec<T>,
}

impl<T: Count> PiSequence<T> {
    pub fn new(q: T, max_index: i64) -> Self {
        let mut values = Vec::with_capacity(max_index.max(0) as usize + 1);
        let mut acc = T::zero();
        for _ in 0..=max_index {
            acc = acc * q + T::one();
            values.push(acc);
        }
        PiSequence { q, values }
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn max_index(&self) -> i64 {
        self.values.len() as i64 - 1
    }

    /// π_j; indices past the cache are computed directly.
    pub fn get(&self, j: i64) -> T {
        if j < 0 {
            T::zero()
        } else if let Some(&v) = self.values.get(j as usize) {
            v
        } else {
            pi(j, self.q)
        }
    }

    /// Every violation of π_n = qπ_{n-1} + 1 and
    /// π_k - π_l = q(π_{k-1} - π_{l-1}) over the cached range, as (k, l)
    /// pairs; the first identity is reported with l = -1.
    pub fn identity_violations(&self) -> Vec<(i64, i64)> {
        let q = self.q;
        let top = self.max_index();
        let mut bad = Vec::new();
        for k in 0..=top {
            if self.get(k) != q * self.get(k - 1) + T::one() {
                bad.push((k, -1));
            }
            let closed = (num_traits::pow(q, k as usize + 1) - T::one()) / (q - T::one());
            if self.get(k) != closed {
                bad.push((k, k));
            }
            for l in 0..=k {
                if self.get(k) - self.get(l) != q * (self.get(k - 1) - self.get(l - 1)) {
                    bad.push((k, l));
                }
            }
        }
        bad
    }
}

/// Homogeneous coordinates with leading nonzero entry 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProjectivePoint {
    coords: Vec<Fe>,
}

impl ProjectivePoint {
    pub fn normalize(field: &GaloisField, coords: &[Fe]) -> Result<Self, ProjError> {
        let lead = coords
            .iter()
            .copied()
            .find(|c| !c.is_zero())
            .ok_or(ProjError::ZeroVector)?;
        let inv = field.inv(lead).expect("nonzero");
        Ok(ProjectivePoint {
            coords: coords.iter().map(|&c| field.mul(c, inv)).collect(),
        })
    }

    /// Parses `(c0:c1:...:cn)` or `c0,c1,...,cn` and normalizes.
    pub fn parse(field: &GaloisField, text: &str) -> Result<Self, crate::gf::GfError> {
        let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
        let coords = inner
            .split([':', ','])
            .map(|s| field.parse_element(s.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::normalize(field, &coords).map_err(|_| crate::gf::GfError::DivisionByZero)
    }

    pub fn coords(&self) -> &[Fe] {
        &self.coords
    }

    /// Ambient projective dimension.
    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn display<'a>(&'a self, field: &'a GaloisField) -> PointDisplay<'a> {
        PointDisplay { point: self, field }
    }

    /// Coordinate-wise q-th power; fixes every rational point.
    pub fn frobenius(&self, field: &GaloisField) -> Self {
        ProjectivePoint {
            coords: self.coords.iter().map(|&c| field.frobenius(c)).collect(),
        }
    }
}

pub struct PointDisplay<'a> {
    point: &'a ProjectivePoint,
    field: &'a GaloisField,
}

impl fmt::Display for PointDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.point.coords.iter().map(|&c| self.field.format(c)).collect();
        write!(f, "({})", parts.join(":"))
    }
}

/// |P^n(F_q)| as u64 (for enumeration bookkeeping).
pub fn point_count(n: usize, q: u32) -> u64 {
    pi::<i128>(n as i64, q as i128) as u64
}

/// Walks the points of P^n in enumeration order starting at any index.
#[derive(Debug, Clone)]
pub struct PointCursor {
    q: u32,
    coords: Vec<Fe>,
    pivot: usize,
    remaining: u64,
}

impl PointCursor {
    pub fn new(n: usize, q: u32, start: u64, len: u64) -> Self {
        let mut pivot = 0;
        let mut idx = start;
        loop {
            let block = (q as u64).pow((n - pivot) as u32);
            if idx < block || pivot == n {
                break;
            }
            idx -= block;
            pivot += 1;
        }
        let mut coords = vec![Fe::ZERO; n + 1];
        coords[pivot] = Fe::ONE;
        for j in (pivot + 1..=n).rev() {
            coords[j] = Fe((idx % q as u64) as u32);
            idx /= q as u64;
        }
        PointCursor {
            q,
            coords,
            pivot,
            remaining: len,
        }
    }

    pub fn current(&self) -> &[Fe] {
        &self.coords
    }

    /// Moves to the next point; false once `len` points were visited.
    pub fn advance(&mut self) -> bool {
        if self.remaining == 0 {
            return false;
        }
        self.remaining -= 1;
        if self.remaining == 0 {
            return false;
        }
        let n = self.coords.len() - 1;
        for j in (self.pivot + 1..=n).rev() {
            if self.coords[j].0 + 1 < self.q {
                self.coords[j].0 += 1;
                return true;
            }
            self.coords[j] = Fe::ZERO;
        }
        self.coords[self.pivot] = Fe::ZERO;
        self.pivot += 1;
        if self.pivot > n {
            self.remaining = 0;
            return false;
        }
        self.coords[self.pivot] = Fe::ONE;
        true
    }
}

/// All π_n points of P^n(F_q) in enumeration order.
pub fn enumerate_points(n: usize, field: &GaloisField) -> impl Iterator<Item = ProjectivePoint> {
    let total = point_count(n, field.order());
    let mut cursor = PointCursor::new(n, field.order(), 0, total);
    let mut first = total > 0;
    std::iter::from_fn(move || {
        if first {
            first = false;
        } else if !cursor.advance() {
            return None;
        }
        Some(ProjectivePoint {
            coords: cursor.current().to_vec(),
        })
    })
}

/// A projective linear subspace, stored as the reduced row echelon basis
/// of its cone. Equal subspaces have identical bases.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LinearSubspace {
    n: usize,
    rows: Vec<Row>,
}

impl LinearSubspace {
    pub fn from_rows(field: &GaloisField, n: usize, rows: &[Row]) -> Result<Self, ProjError> {
        if let Some(r) = rows.iter().find(|r| r.len() != n + 1) {
            return Err(ProjError::DimensionMismatch {
                expected: n + 1,
                got: r.len(),
            });
        }
        let (rows, _) = linalg::rref(field, rows, n + 1);
        Ok(LinearSubspace { n, rows })
    }

    /// Span of the unit vectors e_i for the given indices.
    pub fn coordinate(n: usize, indices: &[usize]) -> Self {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        let rows = idx
            .iter()
            .map(|&i| {
                let mut r = vec![Fe::ZERO; n + 1];
                r[i] = Fe::ONE;
                r
            })
            .collect();
        LinearSubspace { n, rows }
    }

    /// The subspace `{x : equations . x = 0}`.
    pub fn from_equations(field: &GaloisField, n: usize, equations: &[Row]) -> Result<Self, ProjError> {
        if let Some(r) = equations.iter().find(|r| r.len() != n + 1) {
            return Err(ProjError::DimensionMismatch {
                expected: n + 1,
                got: r.len(),
            });
        }
        Self::from_rows(field, n, &linalg::kernel(field, equations, n + 1))
    }

    pub fn point(p: &ProjectivePoint) -> Self {
        LinearSubspace {
            n: p.n(),
            rows: vec![p.coords.clone()],
        }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    /// Projective dimension; -1 for the empty subspace.
    pub fn dim(&self) -> i64 {
        self.rows.len() as i64 - 1
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Linear forms cutting the subspace out, one per codimension.
    pub fn equations(&self, field: &GaloisField) -> Vec<Row> {
        linalg::kernel(field, &self.rows, self.n + 1)
    }

    pub fn contains_point(&self, field: &GaloisField, p: &ProjectivePoint) -> bool {
        let mut rows = self.rows.clone();
        rows.push(p.coords.clone());
        linalg::rank(field, &rows, self.n + 1) == self.rows.len()
    }

    pub fn contains(&self, field: &GaloisField, other: &LinearSubspace) -> bool {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        linalg::rank(field, &rows, self.n + 1) == self.rows.len()
    }

    pub fn join(&self, field: &GaloisField, other: &LinearSubspace) -> LinearSubspace {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        LinearSubspace::from_rows(field, self.n, &rows).expect("same ambient space")
    }

    pub fn intersection(&self, field: &GaloisField, other: &LinearSubspace) -> LinearSubspace {
        let mut eqs = self.equations(field);
        eqs.extend(other.equations(field));
        LinearSubspace::from_equations(field, self.n, &eqs).expect("same ambient space")
    }

    /// All rational points. Combinations of the echelon rows with
    /// normalized coefficients come out normalized already.
    pub fn points(&self, field: &GaloisField) -> Vec<ProjectivePoint> {
        if self.rows.is_empty() {
            return Vec::new();
        }
        let k = self.rows.len() - 1;
        enumerate_points(k, field)
            .map(|c| {
                let mut v = vec![Fe::ZERO; self.n + 1];
                for (coef, row) in c.coords.iter().zip(&self.rows) {
                    if coef.is_zero() {
                        continue;
                    }
                    for (x, &r) in v.iter_mut().zip(row) {
                        *x = field.add(*x, field.mul(*coef, r));
                    }
                }
                ProjectivePoint { coords: v }
            })
            .collect()
    }

    pub fn rows_text(&self, field: &GaloisField) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&c| field.format(c)).collect())
            .collect()
    }
}

/// A rational hyperplane with its normalized defining form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperplane {
    pub form: ProjectivePoint,
    pub space: LinearSubspace,
}

impl Hyperplane {
    pub fn from_form(field: &GaloisField, form: &[Fe]) -> Result<Self, ProjError> {
        let form = ProjectivePoint::normalize(field, form)?;
        let space = LinearSubspace::from_equations(field, form.n(), std::slice::from_ref(&form.coords))?;
        Ok(Hyperplane { form, space })
    }

    pub fn contains_point(&self, field: &GaloisField, p: &ProjectivePoint) -> bool {
        linalg::dot(field, &self.form.coords, &p.coords).is_zero()
    }

    pub fn contains(&self, field: &GaloisField, l: &LinearSubspace) -> bool {
        l.rows.iter().all(|r| linalg::dot(field, &self.form.coords, r).is_zero())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct HyperplaneFilter<'a> {
    pub through: Option<&'a ProjectivePoint>,
    pub containing: Option<&'a LinearSubspace>,
    pub excluding_containing: Option<&'a LinearSubspace>,
}

/// Rational hyperplanes of P^n passing the filters, in the enumeration
/// order of their defining forms.
pub fn enumerate_hyperplanes(
    n: usize,
    field: &GaloisField,
    filter: HyperplaneFilter<'_>,
) -> Result<Vec<Hyperplane>, ProjError> {
    let check = |m: usize| {
        if m != n {
            Err(ProjError::DimensionMismatch {
                expected: n + 1,
                got: m + 1,
            })
        } else {
            Ok(())
        }
    };
    if let Some(p) = filter.through {
        check(p.n())?;
    }
    for l in [filter.containing, filter.excluding_containing].into_iter().flatten() {
        check(l.ambient())?;
    }
    if let Some(p) = filter.through {
        for l in [filter.containing, filter.excluding_containing].into_iter().flatten() {
            if !l.contains_point(field, p) {
                return Err(ProjError::InconsistentFilters(format!(
                    "{} does not lie on the given subspace",
                    p.display(field)
                )));
            }
        }
    }
    if let (Some(c), Some(x)) = (filter.containing, filter.excluding_containing) {
        if c.contains(field, x) {
            return Err(ProjError::InconsistentFilters(
                "every hyperplane containing the first subspace contains the excluded one".into(),
            ));
        }
    }
    let mut out = Vec::new();
    for form in enumerate_points(n, field) {
        let on = |row: &Row| linalg::dot(field, &form.coords, row).is_zero();
        if filter.through.is_some_and(|p| !on(&p.coords)) {
            continue;
        }
        if filter.containing.is_some_and(|l| !l.rows.iter().all(on)) {
            continue;
        }
        if filter.excluding_containing.is_some_and(|l| l.rows.iter().all(on)) {
            continue;
        }
        let space = LinearSubspace::from_equations(field, n, std::slice::from_ref(&form.coords))?;
        out.push(Hyperplane { form, space });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn gf(q: u64) -> GaloisField {
        GaloisField::with_order(q).unwrap()
    }

    #[test]
    fn pi_values() {
        assert_eq!(pi(-1, 5i64), 0);
        assert_eq!(pi(3, 2i64), 15);
        assert_eq!(pi(2, 3i64), 13);
        let s = PiSequence::new(4i64, 6);
        assert_eq!(s.get(2), 21);
        assert_eq!(s.get(-3), 0);
        assert_eq!(s.get(9), pi(9, 4));
        assert!(s.identity_violations().is_empty());
    }

    #[test]
    fn points_of_the_projective_line() {
        let f = gf(2);
        let pts: Vec<String> = enumerate_points(1, &f).map(|p| p.display(&f).to_string()).collect();
        assert_eq!(pts, vec!["(1:0)", "(1:1)", "(0:1)"]);
    }

    #[test]
    fn point_counts_match_pi() {
        for (n, q) in [(3usize, 2u64), (2, 4), (2, 3), (0, 5), (3, 3)] {
            let f = gf(q);
            let pts: Vec<_> = enumerate_points(n, &f).collect();
            assert_eq!(pts.len() as i64, pi(n as i64, q as i64));
            let set: HashSet<_> = pts.iter().collect();
            assert_eq!(set.len(), pts.len());
        }
    }

    #[test]
    fn cursor_can_start_anywhere() {
        let f = gf(3);
        let all: Vec<_> = enumerate_points(3, &f).collect();
        for start in [0u64, 1, 26, 27, 30, 39] {
            let mut c = PointCursor::new(3, 3, start, 40 - start);
            let mut seen = vec![c.current().to_vec()];
            while c.advance() {
                seen.push(c.current().to_vec());
            }
            let expect: Vec<Vec<Fe>> = all[start as usize..].iter().map(|p| p.coords.clone()).collect();
            assert_eq!(seen, expect);
        }
    }

    #[test]
    fn hyperplane_filters() {
        let f = gf(2);
        let p = ProjectivePoint::parse(&f, "(1:0:0:0)").unwrap();
        let line = LinearSubspace::coordinate(3, &[0, 1]);
        let through = HyperplaneFilter {
            through: Some(&p),
            ..Default::default()
        };
        assert_eq!(enumerate_hyperplanes(3, &f, through).unwrap().len(), 7);
        let containing = HyperplaneFilter {
            containing: Some(&line),
            ..Default::default()
        };
        assert_eq!(enumerate_hyperplanes(3, &f, containing).unwrap().len(), 3);
        let excl = HyperplaneFilter {
            through: Some(&p),
            excluding_containing: Some(&line),
            ..Default::default()
        };
        assert_eq!(enumerate_hyperplanes(3, &f, excl).unwrap().len(), 4);

        let off = ProjectivePoint::parse(&f, "(0:0:0:1)").unwrap();
        let bad = HyperplaneFilter {
            through: Some(&off),
            containing: Some(&line),
            ..Default::default()
        };
        assert!(matches!(
            enumerate_hyperplanes(3, &f, bad),
            Err(ProjError::InconsistentFilters(_))
        ));
    }

    #[test]
    fn subspace_operations() {
        let f = gf(3);
        let a = LinearSubspace::coordinate(3, &[0, 1]);
        let b = LinearSubspace::coordinate(3, &[1, 2]);
        let c = LinearSubspace::coordinate(3, &[2, 3]);
        assert_eq!(a.intersection(&f, &b), LinearSubspace::coordinate(3, &[1]));
        assert!(a.intersection(&f, &c).is_empty());
        assert_eq!(a.join(&f, &c).dim(), 3);
        assert_eq!(a.points(&f).len(), 4);
        let plane = a.join(&f, &b);
        assert!(plane.contains(&f, &a));
        assert!(!a.contains(&f, &plane));
        for p in plane.points(&f) {
            assert!(plane.contains_point(&f, &p));
            assert_eq!(ProjectivePoint::normalize(&f, p.coords()).unwrap(), p);
        }
    }
}
