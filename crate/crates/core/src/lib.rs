//! Rational points on projective varieties over finite fields: field and
//! polynomial arithmetic, Gröbner bases and Hilbert polynomials, exact
//! point counts, upper bounds in terms of component dimensions and
//! degrees, and the linear configurations that attain them.
//!
//! Counting code is generic over [`scalar::Count`]; the aliases below fix
//! the two widths in use.

pub mod bounds;
pub mod constructions;
pub mod expr;
pub mod gf;
pub mod groebner;
pub mod incidence;
pub mod linalg;
pub mod mpoly;
pub mod projgeom;
pub mod scalar;
pub mod sweep;
pub mod variety;

use thiserror::Error;

pub use gf::{Fe, GaloisField};
pub use mpoly::Polynomial;
pub use projgeom::{LinearSubspace, ProjectivePoint};
pub use variety::{load_variety, Variety};

pub type PiTable = projgeom::PiSequence<i64>;
pub type WidePiTable = projgeom::PiSequence<i128>;
pub type Report = bounds::BoundReport<i64>;
pub type WideReport = bounds::BoundReport<i128>;

/// Any error raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] gf::GfError),
    #[error(transparent)]
    Poly(#[from] mpoly::PolyError),
    #[error(transparent)]
    Groebner(#[from] groebner::GroebnerError),
    #[error(transparent)]
    Proj(#[from] projgeom::ProjError),
    #[error(transparent)]
    Variety(#[from] variety::VarietyError),
    #[error(transparent)]
    Bound(#[from] bounds::BoundError),
    #[error(transparent)]
    Construction(#[from] constructions::ConstructionError),
    #[error(transparent)]
    Incidence(#[from] incidence::IncidenceError),
    #[error(transparent)]
    Sweep(#[from] sweep::SweepError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
