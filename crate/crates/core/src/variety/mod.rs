//! Projective varieties given by a user-supplied decomposition into
//! components, with Gröbner-derived dimension and degree per component.
//!
//! The decomposition is input: we compute dimensions and degrees, look for
//! containments between components, and count points, but we never check
//! irreducibility. Whether the listed components are irredundant is
//! reported as `verified` (all components linear, so containment is exact
//! linear algebra), `violated` (a containment certificate was found), or
//! `unverified`.

mod chart;
mod count;
mod format;

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::gf::{GaloisField, GfError};
use crate::groebner::{buchberger, hilbert, GroebnerBasis, GroebnerError, HilbertData, Ideal};
use crate::mpoly::{Monomial, MonomialOrder, PolyError, Polynomial};
use crate::projgeom::{enumerate_points, LinearSubspace, ProjectivePoint};

pub use chart::{affine_chart, AffineChart, ChartComponent};
pub use count::{count_affine, count_projective, projective_points, UnionOfSystems};
pub use format::{load_variety, write_variety, ComponentDoc};

/// Default cap on the number of points visited by one enumeration.
pub const DEFAULT_POINT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum VarietyError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("component {component}: {source}")]
    Poly { component: String, source: PolyError },
    #[error("component {component}: {source}")]
    Groebner { component: String, source: GroebnerError },
    #[error("component {component}: declared {what} {declared}, computed {computed}")]
    DeclarationMismatch {
        component: String,
        what: &'static str,
        declared: i64,
        computed: i64,
    },
    #[error("component {component} has dimension {dim}, which fills the ambient space")]
    Degenerate { component: String, dim: i64 },
    #[error("component {0} is not given by homogeneous polynomials")]
    NotHomogeneous(String),
    #[error("component {component} lives in {got} variables, expected {expected}")]
    WrongRing { component: String, expected: usize, got: usize },
    #[error("enumeration needs {needed} points, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("expected a nonzero linear form")]
    NotHyperplane,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Irreducibility {
    /// Nothing was said.
    Unstated,
    /// `irreducible=yes`
    Yes,
    /// `irreducible=declared`
    Declared,
}

#[derive(Debug, Clone, Serialize)]
pub struct Component {
    pub name: String,
    pub ideal: Vec<Polynomial>,
    pub declared_dim: Option<i64>,
    pub declared_deg: Option<i64>,
    pub irreducible: Irreducibility,
    pub dim: i64,
    pub deg: i64,
    pub is_linear: bool,
    pub hyperplane_forms: Vec<Polynomial>,
    pub hilbert: HilbertData,
    #[serde(skip)]
    pub basis: GroebnerBasis,
}

impl Component {
    pub fn new(
        name: &str,
        field: &Arc<GaloisField>,
        nvars: usize,
        gens: Vec<Polynomial>,
        declared_dim: Option<i64>,
        declared_deg: Option<i64>,
        irreducible: Irreducibility,
    ) -> Result<Self, VarietyError> {
        let gerr = |source| VarietyError::Groebner {
            component: name.to_string(),
            source,
        };
        if let Some(g) = gens.iter().find(|g| g.nvars() != nvars) {
            return Err(VarietyError::WrongRing {
                component: name.to_string(),
                expected: nvars,
                got: g.nvars(),
            });
        }
        let ideal = Ideal::new(Arc::clone(field), nvars, gens).map_err(gerr)?;
        if !ideal.is_homogeneous() {
            return Err(VarietyError::NotHomogeneous(name.to_string()));
        }
        let basis = buchberger(&ideal, MonomialOrder::Grevlex).map_err(gerr)?;
        let hilbert = hilbert(&basis).map_err(gerr)?;
        for (what, declared, computed) in [
            ("dim", declared_dim, hilbert.dim),
            ("deg", declared_deg, hilbert.degree),
        ] {
            if let Some(d) = declared {
                if d != computed {
                    return Err(VarietyError::DeclarationMismatch {
                        component: name.to_string(),
                        what,
                        declared: d,
                        computed,
                    });
                }
            }
        }
        let hyperplane_forms = basis.linear_forms();
        let is_linear = !basis.is_unit() && {
            let lin = Ideal::new(Arc::clone(field), nvars, hyperplane_forms.clone()).map_err(gerr)?;
            let lin_basis = buchberger(&lin, MonomialOrder::Grevlex).map_err(gerr)?;
            ideal.gens().iter().all(|g| lin_basis.contains(g))
        };
        Ok(Component {
            name: name.to_string(),
            ideal: ideal.gens().to_vec(),
            declared_dim,
            declared_deg,
            irreducible,
            dim: hilbert.dim,
            deg: hilbert.degree,
            is_linear,
            hyperplane_forms,
            hilbert,
            basis,
        })
    }

    /// The component cut out by the equations of a linear subspace.
    pub fn linear(name: &str, field: &Arc<GaloisField>, space: &LinearSubspace) -> Result<Self, VarietyError> {
        let nvars = space.ambient() + 1;
        let gens = space
            .equations(field)
            .iter()
            .map(|row| Polynomial::linear_form(Arc::clone(field), row))
            .collect();
        Component::new(name, field, nvars, gens, None, None, Irreducibility::Yes)
    }

    pub fn is_empty_scheme(&self) -> bool {
        self.dim < 0
    }

    /// For linear components, the subspace they define.
    pub fn linear_subspace(&self) -> Option<LinearSubspace> {
        if !self.is_linear {
            return None;
        }
        let field = self.basis.field();
        let n = self.basis.nvars() - 1;
        let eqs: Vec<Vec<_>> = self
            .hyperplane_forms
            .iter()
            .map(|f| {
                (0..=n)
                    .map(|i| f.coeff(&crate::mpoly::Monomial::var(n + 1, i)))
                    .collect()
            })
            .collect();
        LinearSubspace::from_equations(field, n, &eqs).ok()
    }

    pub fn contains_point(&self, p: &ProjectivePoint) -> bool {
        self.ideal.iter().all(|g| g.eval_unchecked(p.coords()).is_zero())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Irredundancy {
    Verified,
    Unverified,
    Violated,
}

/// `inner ⊆ outer`, certified by every generator of the outer ideal lying
/// in the inner one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Containment {
    pub inner: String,
    pub outer: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Variety {
    pub n: usize,
    pub field: Arc<GaloisField>,
    pub components: Vec<Component>,
    /// Largest component dimension, -1 if there is none.
    #[serde(rename = "D")]
    pub max_dim: i64,
    pub irredundancy: Irredundancy,
    pub containments: Vec<Containment>,
}

impl Variety {
    pub fn new(field: Arc<GaloisField>, n: usize, components: Vec<Component>) -> Result<Self, VarietyError> {
        for c in &components {
            if c.basis.nvars() != n + 1 {
                return Err(VarietyError::WrongRing {
                    component: c.name.clone(),
                    expected: n + 1,
                    got: c.basis.nvars(),
                });
            }
            if c.dim >= n as i64 {
                return Err(VarietyError::Degenerate {
                    component: c.name.clone(),
                    dim: c.dim,
                });
            }
        }
        let mut containments = Vec::new();
        for (i, a) in components.iter().enumerate() {
            for (j, b) in components.iter().enumerate() {
                if i != j && b.ideal.iter().all(|g| a.basis.contains(g)) {
                    containments.push(Containment {
                        inner: a.name.clone(),
                        outer: b.name.clone(),
                    });
                }
            }
        }
        let irredundancy = if !containments.is_empty() {
            Irredundancy::Violated
        } else if components.iter().all(|c| c.is_linear) {
            Irredundancy::Verified
        } else {
            Irredundancy::Unverified
        };
        let max_dim = components.iter().map(|c| c.dim).max().unwrap_or(-1);
        Ok(Variety {
            n,
            field,
            components,
            max_dim,
            irredundancy,
            containments,
        })
    }

    pub fn union(&self) -> UnionOfSystems {
        UnionOfSystems::new(self.components.iter().map(|c| c.ideal.as_slice()))
    }

    /// (name, dimension, degree) of every nonempty component.
    pub fn sequence(&self) -> Vec<(String, i64, i64)> {
        self.components
            .iter()
            .filter(|c| !c.is_empty_scheme())
            .map(|c| (c.name.clone(), c.dim, c.deg))
            .collect()
    }

    pub fn component(&self, name: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.name == name)
    }

    pub fn rational_points(&self, budget: u64) -> Result<Vec<ProjectivePoint>, VarietyError> {
        projective_points(&self.field, self.n, &self.union(), budget)
    }

    /// The variety cut with one more linear form per component.
    pub fn section_union(&self, form: &Polynomial) -> UnionOfSystems {
        let systems: Vec<Vec<Polynomial>> = self
            .components
            .iter()
            .map(|c| {
                let mut s = c.ideal.clone();
                s.push(form.clone());
                s
            })
            .collect();
        UnionOfSystems::new(systems.iter().map(Vec::as_slice))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Enumeration,
    Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PointCount {
    pub value: u64,
    pub method: CountMethod,
}

/// Number of rational points on the union of the components.
pub fn count_points(v: &Variety, budget: u64) -> Result<PointCount, VarietyError> {
    Ok(PointCount {
        value: count_projective(&v.field, v.n, &v.union(), budget)?,
        method: CountMethod::Enumeration,
    })
}

/// Number of rational points on the zero set of one homogeneous system.
pub fn count_ideal_points(
    field: &GaloisField,
    n: usize,
    gens: &[Polynomial],
    budget: u64,
) -> Result<PointCount, VarietyError> {
    Ok(PointCount {
        value: count_projective(field, n, &UnionOfSystems::new([gens]), budget)?,
        method: CountMethod::Enumeration,
    })
}

/// Which case of the point-count argument a variety falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// No component lies in a rational hyperplane.
    Assumption1,
    /// Every component is linear or in no hyperplane, and one is a
    /// hyperplane.
    HyperplaneComponent,
    /// As above with exactly one linear component, of codimension ≥ 2.
    SingleLinear,
    /// As above with several linear components, none a hyperplane.
    SeveralLinear,
    /// Some nonlinear component lies in a rational hyperplane.
    General,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentClass {
    pub name: String,
    pub dim: i64,
    pub linear_forms: Vec<Polynomial>,
    pub in_rational_hyperplane: bool,
    pub is_linear: bool,
    pub is_hyperplane: bool,
    /// Rational hyperplanes dividing a principal, nonlinear component;
    /// such a component is reducible with a piece inside a hyperplane.
    pub linear_factors: Vec<ProjectivePoint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub components: Vec<ComponentClass>,
    pub assumption1: bool,
    pub assumption2: bool,
    pub regime: Regime,
}

/// Rational linear forms h (normalized) with h | f. Tests each
/// hyperplane by substituting its parametrization into f.
pub fn rational_linear_factors(field: &Arc<GaloisField>, f: &Polynomial) -> Vec<ProjectivePoint> {
    let nv = f.nvars();
    if nv == 0 || f.is_zero() {
        return Vec::new();
    }
    enumerate_points(nv - 1, field)
        .filter(|h| {
            let c = h.coords();
            let pivot = c.iter().position(|x| !x.is_zero()).expect("nonzero form");
            let images: Vec<Polynomial> = (0..nv)
                .map(|j| {
                    if j != pivot {
                        return Polynomial::var(Arc::clone(field), nv, j);
                    }
                    let mut img = Polynomial::zero(Arc::clone(field), nv);
                    for (k, &ck) in c.iter().enumerate() {
                        if k != pivot && !ck.is_zero() {
                            img.add_term(Monomial::var(nv, k), field.neg(ck));
                        }
                    }
                    img
                })
                .collect();
            f.substitute(&images).is_zero()
        })
        .collect()
}

pub fn classify_components(v: &Variety) -> Classification {
    let components: Vec<ComponentClass> = v
        .components
        .iter()
        .map(|c| ComponentClass {
            name: c.name.clone(),
            dim: c.dim,
            linear_forms: c.hyperplane_forms.clone(),
            in_rational_hyperplane: !c.hyperplane_forms.is_empty() || c.basis.is_unit(),
            is_linear: c.is_linear,
            is_hyperplane: c.is_linear && c.dim == v.n as i64 - 1,
            linear_factors: match c.basis.basis() {
                [f] if !c.is_linear => rational_linear_factors(&v.field, f),
                _ => Vec::new(),
            },
        })
        .collect();
    let assumption1 = components
        .iter()
        .all(|c| !c.in_rational_hyperplane && c.linear_factors.is_empty());
    let assumption2 = components
        .iter()
        .all(|c| c.is_linear || (!c.in_rational_hyperplane && c.linear_factors.is_empty()));
    let linear = components.iter().filter(|c| c.is_linear).count();
    let regime = if assumption1 {
        Regime::Assumption1
    } else if !assumption2 {
        Regime::General
    } else if components.iter().any(|c| c.is_hyperplane) {
        Regime::HyperplaneComponent
    } else if linear == 1 {
        Regime::SingleLinear
    } else {
        Regime::SeveralLinear
    };
    Classification {
        components,
        assumption1,
        assumption2,
        regime,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWISTED: &str = "\
field p=2 k=1
space n=3
component name=twisted dim=1 deg=3 irreducible=yes
  poly x0*x2 - x1^2
  poly x1*x3 - x2^2
  poly x0*x3 - x1*x2
";

    #[test]
    fn twisted_cubic_loads() {
        let v = load_variety(TWISTED).unwrap();
        let c = &v.components[0];
        assert_eq!((c.dim, c.deg), (1, 3));
        assert!(!c.is_linear);
        assert!(c.hyperplane_forms.is_empty());
        assert_eq!(v.irredundancy, Irredundancy::Unverified);
        assert_eq!(count_points(&v, DEFAULT_POINT_BUDGET).unwrap().value, 3);
        let cls = classify_components(&v);
        assert!(cls.assumption1);
        assert_eq!(cls.regime, Regime::Assumption1);
    }

    #[test]
    fn containment_is_detected() {
        let doc = "field p=2 k=1\nspace n=3\ncomponent name=plane\n poly x0\ncomponent name=line\n poly x0\n poly x1\n";
        let v = load_variety(doc).unwrap();
        assert_eq!(v.irredundancy, Irredundancy::Violated);
        assert_eq!(
            v.containments,
            vec![Containment {
                inner: "line".into(),
                outer: "plane".into()
            }]
        );
        let skew = "field p=2 k=1\nspace n=3\ncomponent name=a\n poly x0\n poly x1\ncomponent name=b\n poly x2\n poly x3\n";
        assert_eq!(load_variety(skew).unwrap().irredundancy, Irredundancy::Verified);
    }

    #[test]
    fn full_space_is_degenerate() {
        let doc = "field p=3 k=1\nspace n=2\ncomponent name=all\n";
        assert!(matches!(load_variety(doc), Err(VarietyError::Degenerate { .. })));
    }

    #[test]
    fn declaration_mismatch() {
        let doc = "field p=2 k=1\nspace n=2\ncomponent name=c deg=3\n poly x0*x1 - x2^2\n";
        assert!(matches!(
            load_variety(doc),
            Err(VarietyError::DeclarationMismatch { what: "deg", declared: 3, computed: 2, .. })
        ));
    }

    #[test]
    fn point_counts() {
        let f = GaloisField::with_order(2).unwrap().shared();
        let x0 = Polynomial::var(Arc::clone(&f), 4, 0);
        assert_eq!(count_ideal_points(&f, 3, &[x0], 100).unwrap().value, 7);
        let all: Vec<_> = (0..4).map(|i| Polynomial::var(Arc::clone(&f), 4, i)).collect();
        assert_eq!(count_ideal_points(&f, 3, &all, 100).unwrap().value, 0);
        assert!(matches!(
            count_ideal_points(&f, 3, &all, 10),
            Err(VarietyError::BudgetExceeded { needed: 15, budget: 10 })
        ));
    }

    #[test]
    fn classification_regimes() {
        let conic = "field p=2 k=1\nspace n=3\ncomponent name=c\n poly x3\n poly x0*x2 - x1^2\n";
        let v = load_variety(conic).unwrap();
        let cls = classify_components(&v);
        assert!(cls.components[0].in_rational_hyperplane);
        assert!(!cls.components[0].is_linear);
        assert_eq!(cls.regime, Regime::General);

        let line = "field p=2 k=1\nspace n=3\ncomponent name=l\n poly x0\n poly x1\n";
        let cls = classify_components(&load_variety(line).unwrap());
        assert!(cls.components[0].is_linear);
        assert_eq!(cls.regime, Regime::SingleLinear);

        let plane = "field p=3 k=1\nspace n=3\ncomponent name=h\n poly x0 + x1\n";
        let cls = classify_components(&load_variety(plane).unwrap());
        assert_eq!(cls.regime, Regime::HyperplaneComponent);
    }

    #[test]
    fn linear_component_subspace() {
        let f = GaloisField::with_order(3).unwrap().shared();
        let l = LinearSubspace::coordinate(3, &[0, 2]);
        let c = Component::linear("l", &f, &l).unwrap();
        assert_eq!((c.dim, c.deg), (1, 1));
        assert!(c.is_linear);
        assert_eq!(c.linear_subspace().unwrap(), l);
    }

    #[test]
    fn linear_factor_breaks_assumption1() {
        let doc = "field p=2\nspace n=2\ncomponent\n poly x0*x1^2 + x0*x1*x2 + x0^2*x2 + x1*x2^2\n";
        let cls = classify_components(&load_variety(doc).unwrap());
        assert!(cls.components[0].linear_factors.is_empty());
        // (x0 + x2)(x1^2 + x1*x2 + x2^2) contains the line x0 + x2 = 0
        let doc = "field p=2\nspace n=2\ncomponent\n poly x0*x1^2 + x0*x1*x2 + x0*x2^2 + x1^2*x2 + x1*x2^2 + x2^3\n";
        let cls = classify_components(&load_variety(doc).unwrap());
        let f = GaloisField::with_order(2).unwrap();
        let forms: Vec<String> = cls.components[0].linear_factors.iter().map(|h| h.display(&f).to_string()).collect();
        assert_eq!(forms, vec!["(1:0:1)".to_string()]);
        assert!(!cls.assumption1);
        assert_eq!(cls.regime, Regime::General);
    }
}
