//! Affine charts: the complement of a rational hyperplane H = {h = 0}.
//!
//! With pivot i the first variable in h and h normalized so h_i = 1, the
//! chart is A^n with coordinates x_j (j ≠ i), embedded by
//! x_i = 1 - Σ_{j≠i} h_j x_j. Each component's generators are pulled back
//! along that embedding.

use std::sync::Arc;

use serde::Serialize;

use crate::groebner::{buchberger, hilbert, Ideal};
use crate::mpoly::{Monomial, MonomialOrder, Polynomial};

use super::{count_affine, count_projective, UnionOfSystems, Variety, VarietyError};

#[derive(Debug, Clone, Serialize)]
pub struct ChartComponent {
    pub name: String,
    /// The component misses the chart entirely.
    pub inside_hyperplane: bool,
    pub equations: Vec<Polynomial>,
    /// Dimension and degree of the chart's projective closure; -1 and 0
    /// when the chart is empty.
    pub affine_dim: i64,
    pub affine_deg: i64,
    pub projective_dim: i64,
    pub projective_deg: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AffineChart {
    pub hyperplane: Polynomial,
    pub pivot: usize,
    pub components: Vec<ChartComponent>,
    pub projective_count: u64,
    pub section_count: u64,
    pub affine_count: u64,
}

impl AffineChart {
    /// (dim, deg) of the chart components that are not inside H.
    pub fn sequence(&self) -> Vec<(i64, i64)> {
        self.components
            .iter()
            .filter(|c| !c.inside_hyperplane)
            .map(|c| (c.affine_dim, c.affine_deg))
            .collect()
    }
}

pub fn affine_chart(v: &Variety, h: &Polynomial, budget: u64) -> Result<AffineChart, VarietyError> {
    let field = &v.field;
    let nv = v.n + 1;
    if h.nvars() != nv || !h.is_homogeneous() || h.degree() != Some(1) {
        return Err(VarietyError::NotHyperplane);
    }
    let coeffs: Vec<_> = (0..nv).map(|i| h.coeff(&Monomial::var(nv, i))).collect();
    let pivot = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero form");
    let inv = field.inv(coeffs[pivot]).expect("nonzero");
    let h = h.scale(inv);
    let m = v.n;
    let mut images = Vec::with_capacity(nv);
    for j in 0..nv {
        if j == pivot {
            let mut img = Polynomial::constant(Arc::clone(field), m, field.one());
            for (k, &c) in coeffs.iter().enumerate() {
                if k != pivot && !c.is_zero() {
                    let kk = if k > pivot { k - 1 } else { k };
                    img.add_term(Monomial::var(m, kk), field.neg(field.mul(c, inv)));
                }
            }
            images.push(img);
        } else {
            let jj = if j > pivot { j - 1 } else { j };
            images.push(Polynomial::var(Arc::clone(field), m, jj));
        }
    }

    let mut components = Vec::with_capacity(v.components.len());
    for c in &v.components {
        let gerr = |source| VarietyError::Groebner {
            component: c.name.clone(),
            source,
        };
        let equations: Vec<Polynomial> = c.ideal.iter().map(|g| g.substitute(&images)).collect();
        let ideal = Ideal::new(Arc::clone(field), m, equations.clone()).map_err(gerr)?;
        let basis = buchberger(&ideal, MonomialOrder::Grevlex).map_err(gerr)?;
        let inside = basis.is_unit();
        let (affine_dim, affine_deg) = if inside {
            (-1, 0)
        } else {
            // a grevlex basis homogenizes to generators of the closure
            let closure = basis
                .basis()
                .iter()
                .map(|p| p.homogenize(m).expect("index in range"));
            let closure = Ideal::new(Arc::clone(field), m + 1, closure).map_err(gerr)?;
            let hb = buchberger(&closure, MonomialOrder::Grevlex).map_err(gerr)?;
            let hd = hilbert(&hb).map_err(gerr)?;
            (hd.dim, hd.degree)
        };
        components.push(ChartComponent {
            name: c.name.clone(),
            inside_hyperplane: inside,
            equations,
            affine_dim,
            affine_deg,
            projective_dim: c.dim,
            projective_deg: c.deg,
        });
    }

    let chart_union = UnionOfSystems::new(components.iter().map(|c| c.equations.as_slice()));
    let affine_count = count_affine(field, m, &chart_union, budget)?;
    let section_count = count_projective(field, v.n, &v.section_union(&h), budget)?;
    let projective_count = count_projective(field, v.n, &v.union(), budget)?;
    Ok(AffineChart {
        hyperplane: h,
        pivot,
        components,
        projective_count,
        section_count,
        affine_count,
    })
}
