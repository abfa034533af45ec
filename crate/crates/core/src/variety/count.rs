//! Exhaustive rational point enumeration, split across rayon workers.

use rayon::prelude::*;

use crate::gf::{Fe, GaloisField};
use crate::mpoly::{CompiledPoly, Polynomial};
use crate::projgeom::{point_count, PointCursor, ProjectivePoint};

use super::VarietyError;

const CHUNK: u64 = 4096;

/// A union of zero sets: a point is in it when every polynomial of at
/// least one system vanishes there.
pub struct UnionOfSystems {
    systems: Vec<Vec<CompiledPoly>>,
}

impl UnionOfSystems {
    pub fn new<'a>(systems: impl IntoIterator<Item = &'a [Polynomial]>) -> Self {
        UnionOfSystems {
            systems: systems
                .into_iter()
                .map(|s| s.iter().map(CompiledPoly::new).collect())
                .collect(),
        }
    }

    pub fn contains(&self, field: &GaloisField, point: &[Fe]) -> bool {
        self.systems
            .iter()
            .any(|sys| sys.iter().all(|p| p.vanishes(field, point)))
    }
}

fn check_budget(needed: u64, budget: u64) -> Result<(), VarietyError> {
    if needed > budget {
        Err(VarietyError::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

fn chunks(total: u64) -> Vec<(u64, u64)> {
    (0..total.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, CHUNK.min(total - c * CHUNK)))
        .collect()
}

/// Rational points of P^n in the union, in enumeration order.
pub fn projective_points(
    field: &GaloisField,
    n: usize,
    union: &UnionOfSystems,
    budget: u64,
) -> Result<Vec<ProjectivePoint>, VarietyError> {
    let total = point_count(n, field.order());
    check_budget(total, budget)?;
    let parts: Vec<Vec<ProjectivePoint>> = chunks(total)
        .into_par_iter()
        .map(|(start, len)| {
            let mut out = Vec::new();
            let mut cur = PointCursor::new(n, field.order(), start, len);
            loop {
                if union.contains(field, cur.current()) {
                    out.push(ProjectivePoint::normalize(field, cur.current()).expect("nonzero"));
                }
                if !cur.advance() {
                    break;
                }
            }
            out
        })
        .collect();
    Ok(parts.into_iter().flatten().collect())
}

pub fn count_projective(
    field: &GaloisField,
    n: usize,
    union: &UnionOfSystems,
    budget: u64,
) -> Result<u64, VarietyError> {
    let total = point_count(n, field.order());
    check_budget(total, budget)?;
    Ok(chunks(total)
        .into_par_iter()
        .map(|(start, len)| {
            let mut hits = 0;
            let mut cur = PointCursor::new(n, field.order(), start, len);
            loop {
                if union.contains(field, cur.current()) {
                    hits += 1;
                }
                if !cur.advance() {
                    break;
                }
            }
            hits
        })
        .sum())
}

/// Rational points of A^m in the union.
pub fn count_affine(
    field: &GaloisField,
    m: usize,
    union: &UnionOfSystems,
    budget: u64,
) -> Result<u64, VarietyError> {
    let q = field.order() as u64;
    let total = q
        .checked_pow(m as u32)
        .ok_or(VarietyError::BudgetExceeded { needed: u64::MAX, budget })?;
    check_budget(total, budget)?;
    Ok(chunks(total)
        .into_par_iter()
        .map(|(start, len)| {
            let mut pt = vec![Fe::ZERO; m];
            let mut hits = 0;
            for idx in start..start + len {
                let mut r = idx;
                for x in pt.iter_mut().rev() {
                    *x = Fe((r % q) as u32);
                    r /= q;
                }
                if union.contains(field, &pt) {
                    hits += 1;
                }
            }
            hits
        })
        .sum())
}
