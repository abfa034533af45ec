//! Multivariate polynomials over GF(q) with dense exponent vectors.
//!
//! Variables are `x0 .. x{nvars-1}`; with the `grevlex` and `lex` orders
//! `x0` is the largest variable. Dehomogenizing at `x_i` drops that
//! variable and shifts the later ones down by one index.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{self, Fold, SyntaxError};
use crate::gf::{Fe, GaloisField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("the generator `a` is not defined over the prime field GF({0})")]
    WrongField(u32),
    #[error("point has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableIndex { index: usize, nvars: usize },
    #[error("coordinate {0:?} is not an element of the field")]
    ForeignCoordinate(Fe),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        other
            .divides(self)
            .then(|| Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    fn format(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    Lex,
    #[default]
    Grevlex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.0.iter().cmp(b.0.iter()),
            MonomialOrder::Grevlex => a.degree().cmp(&b.degree()).then_with(|| {
                for (x, y) in a.0.iter().zip(&b.0).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lex" => Ok(MonomialOrder::Lex),
            "grevlex" => Ok(MonomialOrder::Grevlex),
            other => Err(format!("unknown monomial order {other:?}")),
        }
    }
}

/// A polynomial in `nvars` variables over a shared field.
#[derive(Clone)]
pub struct Polynomial {
    field: Arc<GaloisField>,
    nvars: usize,
    terms: BTreeMap<Monomial, Fe>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms && *self.field == *other.field
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Polynomial {
    pub fn zero(field: Arc<GaloisField>, nvars: usize) -> Self {
        Polynomial {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: Arc<GaloisField>, nvars: usize, c: Fe) -> Self {
        Self::term(field, nvars, Monomial::one(nvars), c)
    }

    pub fn var(field: Arc<GaloisField>, nvars: usize, i: usize) -> Self {
        Self::term(field, nvars, Monomial::var(nvars, i), Fe::ONE)
    }

    pub fn term(field: Arc<GaloisField>, nvars: usize, m: Monomial, c: Fe) -> Self {
        debug_assert_eq!(m.nvars(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { field, nvars, terms }
    }

    /// Sums the given terms, combining repeated monomials.
    pub fn from_terms(
        field: Arc<GaloisField>,
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, Fe)>,
    ) -> Self {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Degree-1 form `sum c_i x_i`.
    pub fn linear_form(field: Arc<GaloisField>, coeffs: &[Fe]) -> Self {
        let n = coeffs.len();
        Self::from_terms(
            field,
            n,
            coeffs.iter().enumerate().map(|(i, &c)| (Monomial::var(n, i), c)),
        )
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Fe {
        self.terms.get(m).copied().unwrap_or(Fe::ZERO)
    }

    /// Terms in exponent-lexicographic order (the storage order).
    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, Fe)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    /// Terms sorted descending in `order`.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(Monomial, Fe)> {
        let mut v: Vec<(Monomial, Fe)> = self.terms.iter().map(|(m, &c)| (m.clone(), c)).collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, Fe)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .map(|(m, &c)| (m, c))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// The zero polynomial counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Fe) {
        if c.is_zero() {
            return;
        }
        let f = Arc::clone(&self.field);
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_compat(&self, other: &Polynomial) {
        assert_eq!(self.nvars, other.nvars, "polynomials in different rings");
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field,
            "polynomials over different fields"
        );
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_compat(other);
        let mut r = self.clone();
        for (m, &c) in &other.terms {
            r.add_term(m.clone(), c);
        }
        r
    }

    pub fn neg(&self) -> Polynomial {
        let f = &self.field;
        Polynomial {
            field: Arc::clone(f),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fe) -> Polynomial {
        if c.is_zero() {
            return Self::zero(Arc::clone(&self.field), self.nvars);
        }
        let f = &self.field;
        Polynomial {
            field: Arc::clone(f),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &x)| (m.clone(), f.mul(x, c))).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: Fe) -> Polynomial {
        if c.is_zero() {
            return Self::zero(Arc::clone(&self.field), self.nvars);
        }
        let f = &self.field;
        Polynomial {
            field: Arc::clone(f),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(x, &d)| (x.mul(m), f.mul(d, c))).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check_compat(other);
        let mut r = Self::zero(Arc::clone(&self.field), self.nvars);
        for (m, &c) in &self.terms {
            for (n, &d) in &other.terms {
                r.add_term(m.mul(n), self.field.mul(c, d));
            }
        }
        r
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut acc = Self::constant(Arc::clone(&self.field), self.nvars, Fe::ONE);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Scales so the leading coefficient in `order` is one.
    pub fn monic(&self, order: MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field.inv(c).expect("nonzero leading coefficient")),
        }
    }

    pub fn evaluate(&self, point: &[Fe]) -> Result<Fe, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        if let Some(&bad) = point.iter().find(|c| !self.field.contains(**c)) {
            return Err(PolyError::ForeignCoordinate(bad));
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[Fe]) -> Fe {
        let f = &self.field;
        let mut acc = Fe::ZERO;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = f.mul(t, f.pow(*x, e as u64));
                    if t.is_zero() {
                        break;
                    }
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Substitutes `images[i]` for `x_i`; all images share one ring.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target = images
            .first()
            .map(|p| p.nvars)
            .unwrap_or(0);
        let mut r = Self::zero(Arc::clone(&self.field), target);
        for (m, &c) in &self.terms {
            let mut t = Self::constant(Arc::clone(&self.field), target, c);
            for (img, &e) in images.iter().zip(&m.0) {
                if e > 0 {
                    t = t.mul(&img.pow(e));
                }
            }
            r = r.add(&t);
        }
        r
    }

    /// Sets `x_i = 1` and removes the variable.
    pub fn dehomogenize(&self, i: usize) -> Result<Polynomial, PolyError> {
        if i >= self.nvars {
            return Err(PolyError::VariableIndex {
                index: i,
                nvars: self.nvars,
            });
        }
        if !self.is_homogeneous() {
            return Err(PolyError::NotHomogeneous);
        }
        let mut r = Self::zero(Arc::clone(&self.field), self.nvars - 1);
        for (m, &c) in &self.terms {
            let mut e = m.0.clone();
            e.remove(i);
            r.add_term(Monomial(e), c);
        }
        Ok(r)
    }

    /// Inserts a new variable at index `i` and pads every term with a
    /// power of it up to the total degree.
    pub fn homogenize(&self, i: usize) -> Result<Polynomial, PolyError> {
        if i > self.nvars {
            return Err(PolyError::VariableIndex {
                index: i,
                nvars: self.nvars + 1,
            });
        }
        let top = self.degree().unwrap_or(0);
        let mut r = Self::zero(Arc::clone(&self.field), self.nvars + 1);
        for (m, &c) in &self.terms {
            let mut e = m.0.clone();
            e.insert(i, top - m.degree());
            r.add_term(Monomial(e), c);
        }
        Ok(r)
    }

    /// Renders with the field's element syntax, grevlex-descending.
    pub fn to_text(&self) -> String {
        let f = &self.field;
        let terms = self.sorted_terms(MonomialOrder::Grevlex);
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in terms.iter().enumerate() {
            let (neg, mag) = if f.degree() == 1 && f.characteristic() > 2 && c.code() > f.characteristic() / 2 {
                (true, f.neg(*c))
            } else {
                (false, *c)
            };
            let coeff = f.format(mag);
            let body = match (m.is_one(), coeff.as_str()) {
                (true, _) => coeff.clone(),
                (false, "1") => m.format(),
                (false, s) if s.contains('+') => format!("({s})*{}", m.format()),
                (false, s) => format!("{s}*{}", m.format()),
            };
            let body = if m.is_one() && coeff.contains('+') && terms.len() > 1 {
                format!("({body})")
            } else {
                body
            };
            match (idx, neg) {
                (0, false) => out.push_str(&body),
                (0, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

struct PolyFold<'a> {
    field: &'a Arc<GaloisField>,
    nvars: usize,
}

impl Fold for PolyFold<'_> {
    type Value = Polynomial;
    type Error = PolyError;

    fn int(&self, v: u64) -> Result<Polynomial, PolyError> {
        let c = Fe((v % self.field.characteristic() as u64) as u32);
        Ok(Polynomial::constant(Arc::clone(self.field), self.nvars, c))
    }

    fn sym(&self, name: &str) -> Result<Polynomial, PolyError> {
        if name == "a" {
            return match self.field.generator() {
                Some(g) => Ok(Polynomial::constant(Arc::clone(self.field), self.nvars, g)),
                None => Err(PolyError::WrongField(self.field.characteristic())),
            };
        }
        let idx = name
            .strip_prefix('x')
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|d| d.parse::<usize>().ok());
        match idx {
            Some(i) if i < self.nvars => Ok(Polynomial::var(Arc::clone(self.field), self.nvars, i)),
            _ => Err(PolyError::UnknownVariable(name.into())),
        }
    }

    fn neg(&self, a: Polynomial) -> Polynomial {
        a.neg()
    }

    fn add(&self, a: Polynomial, b: Polynomial) -> Polynomial {
        Polynomial::add(&a, &b)
    }

    fn sub(&self, a: Polynomial, b: Polynomial) -> Polynomial {
        Polynomial::sub(&a, &b)
    }

    fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        Polynomial::mul(a, b)
    }

    fn one(&self) -> Polynomial {
        Polynomial::constant(Arc::clone(self.field), self.nvars, Fe::ONE)
    }

    fn pow(&self, a: &Polynomial, e: u32) -> Polynomial {
        a.pow(e)
    }
}

/// Parses polynomial text over `field` in variables `x0..x{nvars-1}`.
/// Coefficients reducing to zero leave the canonical zero polynomial.
/// Monomials of total degree `deg` in `nvars` variables, with larger
/// exponents on earlier variables first.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn go(nvars: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(left);
            out.push(Monomial::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            go(nvars, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars > 0 {
        go(nvars, deg, &mut Vec::new(), &mut out);
    }
    out
}

pub fn parse_poly(text: &str, field: &Arc<GaloisField>, nvars: usize) -> Result<Polynomial, PolyError> {
    let e = expr::parse(text)?;
    PolyFold { field, nvars }.fold(&e)
}

/// Dense evaluation form for the point-counting loops.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    terms: Vec<(Fe, Vec<(usize, u32)>)>,
}

impl CompiledPoly {
    pub fn new(p: &Polynomial) -> Self {
        CompiledPoly {
            terms: p
                .terms
                .iter()
                .map(|(m, &c)| {
                    let factors = m
                        .0
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| (i, e))
                        .collect();
                    (c, factors)
                })
                .collect(),
        }
    }

    pub fn eval(&self, field: &GaloisField, point: &[Fe]) -> Fe {
        let mut acc = Fe::ZERO;
        for (c, factors) in &self.terms {
            let mut t = *c;
            for &(i, e) in factors {
                let x = point[i];
                t = field.mul(t, if e == 1 { x } else { field.pow(x, e as u64) });
                if t.is_zero() {
                    break;
                }
            }
            acc = field.add(acc, t);
        }
        acc
    }

    pub fn vanishes(&self, field: &GaloisField, point: &[Fe]) -> bool {
        self.eval(field, point).is_zero()
    }
}
