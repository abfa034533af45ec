//! Exact arithmetic in GF(p) and GF(p^k).
//!
//! An element of GF(p^k) is a polynomial of degree < k in the generator `a`
//! with coefficients mod p. It is stored packed as a single integer code
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`, so element order (and enumeration
//! order) is lexicographic on the coefficients read from the highest power
//! of `a` down. Zero has code 0 and one has code 1.

use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::expr::{self, Fold, SyntaxError};

/// Largest field order accepted. Desk-scale only.
pub const MAX_ORDER: u32 = 1 << 16;

/// Fields at most this large get a full multiplication table.
const MUL_TABLE_LIMIT: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0} is reducible over GF({1})")]
    ReducibleModulus(String, u32),
    #[error("GF({p}^{k}) needs an explicit modulus")]
    MissingModulus { p: u32, k: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported maximum")]
    TooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element code {0} does not belong to this field")]
    FieldMismatch(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("unknown symbol {0:?} in field element")]
    UnknownSymbol(String),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

/// A field element, meaningful only together with the [`GaloisField`] that
/// produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fe(pub(crate) u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    /// The packed coefficient code.
    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Serialize for Fe {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u32(self.0)
    }
}

/// GF(p^k) with its defining modulus and precomputed tables.
#[derive(Clone)]
pub struct GaloisField {
    p: u32,
    k: u32,
    q: u32,
    /// Monic, ascending coefficients, length k + 1. `None` for prime fields.
    modulus: Option<Vec<u32>>,
    mul_table: Option<Vec<u32>>,
    inv_table: Vec<u32>,
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for GaloisField {}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.modulus {
            None => write!(f, "GF({})", self.p),
            Some(_) => write!(f, "GF({}^{} mod {})", self.p, self.k, self.modulus_text().unwrap_or_default()),
        }
    }
}

impl Serialize for GaloisField {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GaloisField", 4)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("modulus", &self.modulus_text())?;
        st.end()
    }
}

impl fmt::Display for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits `q` as `p^k`, or fails if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p as u32, k))
}

/// Built-in moduli, ascending coefficients.
fn builtin_modulus(p: u32, k: u32) -> Option<Vec<u32>> {
    match (p, k) {
        (2, 2) => Some(vec![1, 1, 1]),    // x^2+x+1
        (2, 3) => Some(vec![1, 1, 0, 1]), // x^3+x+1
        (3, 2) => Some(vec![1, 0, 1]),    // x^2+1
        (2, 4) => Some(vec![1, 1, 0, 0, 1]), // x^4+x+1
        _ => None,
    }
}

// Dense univariate polynomials over GF(p), ascending, used for the modulus.

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    // p is prime so a^(p-2) is the inverse.
    let mut acc = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn poly_rem_p(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    trim(&mut r);
    let dd = den.len() - 1;
    let lead_inv = inv_mod_p(den[dd], p) as u64;
    while r.len() > dd {
        let shift = r.len() - 1 - dd;
        let c = r[r.len() - 1] as u64 * lead_inv % p as u64;
        for (i, &d) in den.iter().enumerate() {
            let sub = c * d as u64 % p as u64;
            let slot = &mut r[shift + i];
            *slot = ((*slot as u64 + p as u64 - sub) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

/// Exhaustive trial division by every monic polynomial of degree 1..=deg/2.
fn is_irreducible_p(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                cand.push((c % p as u64) as u32);
                c /= p as u64;
            }
            cand.push(1);
            if poly_rem_p(poly, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn format_upoly(coeffs: &[u32], var: &str) -> String {
    let mut parts = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        parts.push(match (c, i) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}*{mono}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

struct UniFold {
    p: u32,
}

impl Fold for UniFold {
    type Value = Vec<u32>;
    type Error = GfError;

    fn int(&self, v: u64) -> Result<Vec<u32>, GfError> {
        let mut r = vec![(v % self.p as u64) as u32];
        trim(&mut r);
        Ok(r)
    }

    fn sym(&self, name: &str) -> Result<Vec<u32>, GfError> {
        if name == "x" {
            Ok(vec![0, 1])
        } else {
            Err(GfError::UnknownSymbol(name.into()))
        }
    }

    fn neg(&self, a: Vec<u32>) -> Vec<u32> {
        a.into_iter().map(|c| (self.p - c) % self.p).collect()
    }

    fn add(&self, a: Vec<u32>, b: Vec<u32>) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut r: Vec<u32> = (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % self.p)
            .collect();
        trim(&mut r);
        r
    }

    fn sub(&self, a: Vec<u32>, b: Vec<u32>) -> Vec<u32> {
        let nb = self.neg(b);
        self.add(a, nb)
    }

    fn mul(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x as u64 * y as u64) % self.p as u64;
            }
        }
        let mut r: Vec<u32> = r.into_iter().map(|c| c as u32).collect();
        trim(&mut r);
        r
    }

    fn one(&self) -> Vec<u32> {
        vec![1]
    }
}

/// Parses a univariate polynomial in `x` with integer coefficients mod `p`.
pub fn parse_modulus(text: &str, p: u32) -> Result<Vec<u32>, GfError> {
    let e = expr::parse(text)?;
    UniFold { p }.fold(&e)
}

impl GaloisField {
    /// Builds GF(p^k). The modulus may be omitted for prime fields and for
    /// GF(4), GF(8), GF(9) and GF(16), which have built-in moduli.
    pub fn new(p: u32, k: u32, modulus: Option<&str>) -> Result<Self, GfError> {
        if !is_prime(p as u64) {
            return Err(GfError::NotPrime(p));
        }
        if k == 0 {
            return Err(GfError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(k).filter(|&q| q <= MAX_ORDER as u64);
        let q = match q {
            Some(q) => q as u32,
            None => return Err(GfError::TooLarge((p as u64).saturating_pow(k))),
        };
        let modulus = match (k, modulus) {
            (1, None) => None,
            (1, Some(m)) => {
                return Err(GfError::InvalidModulus(format!(
                    "prime field GF({p}) takes no modulus (got {m})"
                )))
            }
            (_, Some(text)) => {
                let mut m = parse_modulus(text, p)?;
                if m.len() != k as usize + 1 {
                    return Err(GfError::InvalidModulus(format!(
                        "{text} has degree {} mod {p}, expected {k}",
                        m.len() as i64 - 1
                    )));
                }
                let lead = inv_mod_p(m[k as usize], p) as u64;
                for c in m.iter_mut() {
                    *c = (*c as u64 * lead % p as u64) as u32;
                }
                if !is_irreducible_p(&m, p) {
                    return Err(GfError::ReducibleModulus(format_upoly(&m, "x"), p));
                }
                Some(m)
            }
            (_, None) => Some(builtin_modulus(p, k).ok_or(GfError::MissingModulus { p, k })?),
        };
        Ok(Self::build(p, k, q, modulus))
    }

    /// GF(q) for a prime power `q`, using the built-in moduli for q in
    /// {4, 8, 9, 16}.
    pub fn with_order(q: u64) -> Result<Self, GfError> {
        let (p, k) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        Self::new(p, k, None)
    }

    /// Shared handle, the form polynomials and geometry objects hold.
    pub fn shared(self) -> Arc<Self> {
        Arc::new(self)
    }

    fn build(p: u32, k: u32, q: u32, modulus: Option<Vec<u32>>) -> Self {
        let mut f = GaloisField {
            p,
            k,
            q,
            modulus,
            mul_table: None,
            inv_table: Vec::new(),
        };
        if q <= MUL_TABLE_LIMIT {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in a..q {
                    let c = f.mul_slow(Fe(a), Fe(b)).0;
                    t[(a * q + b) as usize] = c;
                    t[(b * q + a) as usize] = c;
                }
            }
            f.mul_table = Some(t);
        }
        let mut inv = vec![0u32; q as usize];
        for a in 1..q {
            if inv[a as usize] != 0 {
                continue;
            }
            let b = f.pow(Fe(a), (q - 2) as u64).0;
            inv[a as usize] = b;
            inv[b as usize] = a;
        }
        f.inv_table = inv;
        f
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Ascending monic modulus coefficients, if this is an extension field.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn modulus_text(&self) -> Option<String> {
        self.modulus.as_ref().map(|m| format_upoly(m, "x"))
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// The class of `x` modulo the modulus, printed `a`. Prime fields have
    /// no generator symbol.
    pub fn generator(&self) -> Option<Fe> {
        (self.k > 1).then_some(Fe(self.p))
    }

    pub fn element(&self, code: u32) -> Result<Fe, GfError> {
        if code < self.q {
            Ok(Fe(code))
        } else {
            Err(GfError::FieldMismatch(code))
        }
    }

    pub fn contains(&self, e: Fe) -> bool {
        e.0 < self.q
    }

    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.p as i64) as u32)
    }

    /// Element from ascending coefficients in the generator.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Fe {
        let mut code = 0u32;
        for &c in coeffs.iter().take(self.k as usize).rev() {
            code = code * self.p + c % self.p;
        }
        Fe(code)
    }

    /// Ascending coefficients of length k.
    pub fn coeffs(&self, e: Fe) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut c = e.0;
        for _ in 0..self.k {
            out.push(c % self.p);
            c /= self.p;
        }
        out
    }

    /// All q elements in code order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.q).map(Fe)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.q).map(Fe)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.k == 1 {
            return Fe((a.0 + b.0) % self.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut code = 0;
        let mut place = 1;
        for _ in 0..self.k {
            code += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        Fe(code)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.k == 1 {
            return Fe((self.p - a.0) % self.p);
        }
        let mut x = a.0;
        let mut code = 0;
        let mut place = 1;
        for _ in 0..self.k {
            code += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        Fe(code)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        match &self.mul_table {
            Some(t) => Fe(t[(a.0 * self.q + b.0) as usize]),
            None => self.mul_slow(a, b),
        }
    }

    fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let p = self.p as u64;
        let Some(m) = &self.modulus else {
            return Fe((a.0 as u64 * b.0 as u64 % p) as u32);
        };
        let (x, y) = (self.coeffs(a), self.coeffs(b));
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi as u64 * yj as u64) % p;
            }
        }
        // reduce with the monic modulus: x^k = -(m_0 + ... + m_{k-1} x^{k-1})
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &mi) in m.iter().take(k).enumerate() {
                let slot = &mut prod[top - k + i];
                *slot = (*slot + (p - c) * mi as u64) % p;
            }
        }
        let low: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        self.from_coeffs(&low)
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        (!a.is_zero()).then(|| Fe(self.inv_table[a.0 as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, GfError> {
        let bi = self.inv(b).ok_or(GfError::DivisionByZero)?;
        Ok(self.mul(a, bi))
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut acc = Fe::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The absolute Frobenius x -> x^p.
    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p as u64)
    }

    /// Prints `e` as a polynomial in the generator `a`.
    pub fn format(&self, e: Fe) -> String {
        if self.k == 1 {
            return e.0.to_string();
        }
        format_upoly(&self.coeffs(e), "a")
    }

    /// Parses an element written with integers and the generator `a`.
    pub fn parse_element(&self, text: &str) -> Result<Fe, GfError> {
        let e = expr::parse(text)?;
        ElemFold { field: self }.fold(&e)
    }
}

struct ElemFold<'a> {
    field: &'a GaloisField,
}

impl Fold for ElemFold<'_> {
    type Value = Fe;
    type Error = GfError;

    fn int(&self, v: u64) -> Result<Fe, GfError> {
        Ok(Fe((v % self.field.p as u64) as u32))
    }

    fn sym(&self, name: &str) -> Result<Fe, GfError> {
        match (name, self.field.generator()) {
            ("a", Some(g)) => Ok(g),
            _ => Err(GfError::UnknownSymbol(name.into())),
        }
    }

    fn neg(&self, a: Fe) -> Fe {
        self.field.neg(a)
    }

    fn add(&self, a: Fe, b: Fe) -> Fe {
        self.field.add(a, b)
    }

    fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.field.sub(a, b)
    }

    fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        self.field.mul(*a, *b)
    }

    fn one(&self) -> Fe {
        Fe::ONE
    }
}

/// Arithmetic operation selector for [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Checked binary arithmetic. For `Pow` the second operand is the exponent
/// given as a raw integer in `rhs.code()`.
pub fn field_arith(field: &GaloisField, op: FieldOp, a: Fe, rhs: Fe) -> Result<Fe, GfError> {
    if !field.contains(a) {
        return Err(GfError::FieldMismatch(a.0));
    }
    if op != FieldOp::Pow && !field.contains(rhs) {
        return Err(GfError::FieldMismatch(rhs.0));
    }
    Ok(match op {
        FieldOp::Add => field.add(a, rhs),
        FieldOp::Sub => field.sub(a, rhs),
        FieldOp::Mul => field.mul(a, rhs),
        FieldOp::Div => field.div(a, rhs)?,
        FieldOp::Pow => field.pow(a, rhs.0 as u64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_field_examples() {
        let f2 = GaloisField::new(2, 1, None).unwrap();
        assert_eq!(f2.order(), 2);
        let f4 = GaloisField::new(2, 2, Some("x^2+x+1")).unwrap();
        assert_eq!(f4.order(), 4);
        assert_eq!(GaloisField::new(4, 1, None), Err(GfError::NotPrime(4)));
    }

    #[test]
    fn modulus_errors() {
        assert!(matches!(
            GaloisField::new(2, 2, Some("x^2+1")),
            Err(GfError::ReducibleModulus(..))
        ));
        assert_eq!(
            GaloisField::new(5, 2, None),
            Err(GfError::MissingModulus { p: 5, k: 2 })
        );
        assert!(matches!(
            GaloisField::new(2, 3, Some("x^2+x+1")),
            Err(GfError::InvalidModulus(_))
        ));
        assert!(matches!(
            GaloisField::new(3, 1, Some("x+1")),
            Err(GfError::InvalidModulus(_))
        ));
        // x^2+1 is reducible mod 5 (2^2 = -1)
        assert!(matches!(
            GaloisField::new(5, 2, Some("x^2+1")),
            Err(GfError::ReducibleModulus(..))
        ));
        assert!(GaloisField::new(5, 2, Some("x^2+2")).is_ok());
        assert!(GaloisField::new(5, 2, Some("3*x^2+1")).is_ok());
    }

    #[test]
    fn modulus_has_no_root_in_gf2() {
        // the oracle for x^2+x+1: plug in both elements of GF(2)
        for x in 0u32..2 {
            assert_eq!((x * x + x + 1) % 2, 1);
        }
    }

    #[test]
    fn gf4_generator_times_successor_is_one() {
        let f = GaloisField::new(2, 2, Some("x^2+x+1")).unwrap();
        let a = f.generator().unwrap();
        let a1 = f.add(a, f.one());
        assert_eq!(f.mul(a, a1), f.one());
        assert_eq!(f.mul(a, a), a1);
        assert_eq!(f.format(a1), "a+1");
    }

    #[test]
    fn prime_field_examples() {
        let f5 = GaloisField::new(5, 1, None).unwrap();
        assert_eq!(f5.add(Fe(3), Fe(4)), Fe(2));
        let f7 = GaloisField::new(7, 1, None).unwrap();
        assert_eq!(field_arith(&f7, FieldOp::Pow, Fe(3), Fe(6)), Ok(Fe(1)));
        assert_eq!(
            field_arith(&f7, FieldOp::Div, Fe(3), Fe(0)),
            Err(GfError::DivisionByZero)
        );
        assert_eq!(
            field_arith(&f7, FieldOp::Add, Fe(9), Fe(0)),
            Err(GfError::FieldMismatch(9))
        );
    }

    #[test]
    fn enumeration_order() {
        let f2 = GaloisField::new(2, 1, None).unwrap();
        assert_eq!(f2.elements().collect::<Vec<_>>(), vec![Fe(0), Fe(1)]);
        let f4 = GaloisField::with_order(4).unwrap();
        let els: Vec<_> = f4.elements().collect();
        assert_eq!(els.len(), 4);
        let mut dedup = els.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), 4);
        assert_eq!(els[0], Fe::ZERO);
    }

    #[test]
    fn gf9_frobenius_sweep() {
        let f9 = GaloisField::new(3, 2, Some("x^2+1")).unwrap();
        assert_eq!(f9.elements().count(), 9);
        for e in f9.elements() {
            assert_eq!(f9.pow(e, 9), e);
        }
    }

    fn small_fields() -> Vec<GaloisField> {
        [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16]
            .iter()
            .map(|&q| GaloisField::with_order(q).unwrap())
            .collect()
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in small_fields() {
            let els: Vec<Fe> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.pow(a, f.order() as u64), a, "{f:?}");
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                if let Some(ai) = f.inv(a) {
                    assert_eq!(f.mul(a, ai), Fe::ONE);
                    assert_eq!(f.div(Fe::ONE, a).map(|x| f.mul(a, x)), Ok(Fe::ONE));
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn slow_path_matches_table() {
        // GF(3^6) has no multiplication table; compare against GF(3^6)'s own
        // schoolbook product and Fermat.
        let f = GaloisField::new(3, 6, Some("x^6+2*x^4+x^2+2*x+2")).unwrap();
        assert_eq!(f.order(), 729);
        for code in [1u32, 2, 5, 100, 377, 728] {
            let e = Fe(code);
            assert_eq!(f.pow(e, 729), e);
            assert_eq!(f.mul(e, f.inv(e).unwrap()), Fe::ONE);
        }
    }

    #[test]
    fn parse_and_format_elements() {
        let f9 = GaloisField::with_order(9).unwrap();
        for e in f9.elements() {
            assert_eq!(f9.parse_element(&f9.format(e)), Ok(e));
        }
        assert_eq!(f9.parse_element("a^2"), Ok(f9.from_int(-1)));
        let f5 = GaloisField::with_order(5).unwrap();
        assert!(matches!(f5.parse_element("a"), Err(GfError::UnknownSymbol(_))));
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
