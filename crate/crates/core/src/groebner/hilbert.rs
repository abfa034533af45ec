//! Hilbert function and Hilbert polynomial of a homogeneous quotient.
//!
//! The Hilbert function of `S/I` equals that of `S/LT(I)`. We get it from
//! the Hilbert series numerator of the monomial ideal `LT(I)`, which also
//! tells us from which degree on the function is polynomial. The values are
//! then scanned until the (d+1)-st finite difference vanishes on a window of
//! `max(nvars, 4)` consecutive degrees, and the polynomial is interpolated
//! from that window.

use std::collections::HashMap;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{buchberger, GroebnerBasis, GroebnerError, Ideal};
use crate::mpoly::{Monomial, MonomialOrder, Polynomial};

/// Hard cap on the degree up to which the Hilbert function is scanned.
pub const MAX_HILBERT_DEGREE: u32 = 60;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertData {
    /// h(0), h(1), ..., h(T)
    pub values: Vec<i64>,
    /// Ascending coefficients of the Hilbert polynomial.
    pub poly_coeffs: Vec<Rational64>,
    /// Projective dimension; -1 when the scheme is empty.
    pub dim: i64,
    /// `dim!` times the leading coefficient; 0 when the scheme is empty.
    pub degree: i64,
    /// First degree of the window the polynomial was read from.
    pub stable_from: u32,
}

impl HilbertData {
    /// No points over the algebraic closure. The dim = -1, degree = 0
    /// convention is ours; nothing standard fixes it.
    pub fn is_empty_scheme(&self) -> bool {
        self.dim < 0
    }

    pub fn eval_poly(&self, t: i64) -> Rational64 {
        let x = Rational64::from_integer(t);
        self.poly_coeffs
            .iter()
            .rev()
            .fold(Rational64::zero(), |acc, c| acc * x + c)
    }
}

impl Serialize for HilbertData {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let coeffs: Vec<[i64; 2]> = self
            .poly_coeffs
            .iter()
            .map(|c| [*c.numer(), *c.denom()])
            .collect();
        let mut st = s.serialize_struct("HilbertData", 6)?;
        st.serialize_field("values", &self.values)?;
        st.serialize_field("poly_coeffs", &coeffs)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("stable_from", &self.stable_from)?;
        st.serialize_field("empty_scheme", &self.is_empty_scheme())?;
        st.end()
    }
}

// Univariate integer polynomials in t, ascending.

fn padd(a: &[i64], b: &[i64]) -> Vec<i64> {
    let n = a.len().max(b.len());
    let mut r: Vec<i64> = (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect();
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

fn pmul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r
}

fn one_minus_t_pow(d: u32) -> Vec<i64> {
    let mut v = vec![0; d as usize + 1];
    v[0] += 1;
    v[d as usize] -= 1;
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| (m.degree(), m.clone()));
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for m in gens {
        if !out.iter().any(|g| g.divides(&m)) {
            out.push(m);
        }
    }
    out
}

/// Numerator K(t) with HS(S/I) = K(t) / (1 - t)^nvars.
fn series_numerator(gens: Vec<Monomial>, memo: &mut HashMap<Vec<Monomial>, Vec<i64>>) -> Vec<i64> {
    let gens = minimalize(gens);
    if gens.is_empty() {
        return vec![1];
    }
    if let Some(v) = memo.get(&gens) {
        return v.clone();
    }
    let pairwise_coprime = gens
        .iter()
        .enumerate()
        .all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    let result = if pairwise_coprime {
        gens.iter()
            .fold(vec![1], |acc, m| pmul(&acc, &one_minus_t_pow(m.degree())))
    } else {
        // I = J + (m):  K(I) = K(J) - t^deg(m) K(J : m)
        let m = gens.last().expect("nonempty").clone();
        let rest: Vec<Monomial> = gens[..gens.len() - 1].to_vec();
        let colon: Vec<Monomial> = rest
            .iter()
            .map(|g| g.lcm(&m).div(&m).expect("lcm divisible"))
            .collect();
        let kj = series_numerator(rest, memo);
        let kc = series_numerator(colon, memo);
        let mut shifted = vec![0; m.degree() as usize];
        shifted.extend(kc.iter().map(|c| -c));
        padd(&kj, &shifted)
    };
    memo.insert(gens, result.clone());
    result
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Number of monomials of degree `t` in `nvars` variables outside the
/// monomial ideal, read off the series numerator.
fn hilbert_value(numer: &[i64], nvars: usize, t: i64) -> i64 {
    if nvars == 0 {
        return numer.get(t as usize).copied().unwrap_or(0);
    }
    let n = nvars as i64;
    numer
        .iter()
        .enumerate()
        .map(|(k, &c)| c * binom(t - k as i64 + n - 1, n - 1))
        .sum()
}

/// Direct count of standard monomials of degree `t` by enumerating all
/// monomials of that degree. Exponential; intended as an oracle.
pub fn standard_monomial_count(nvars: usize, gens: &[Monomial], t: u32) -> i64 {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, gens: &[Monomial], count: &mut i64) {
        let n = cur.len();
        if i == n - 1 {
            cur[i] = left;
            let m = Monomial::new(cur.clone());
            if !gens.iter().any(|g| g.divides(&m)) {
                *count += 1;
            }
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, gens, count);
        }
    }
    if nvars == 0 {
        return i64::from(t == 0 && gens.is_empty());
    }
    let mut cur = vec![0; nvars];
    let mut count = 0;
    rec(0, t, &mut cur, gens, &mut count);
    count
}

fn interpolate(window: &[i64], start: u32, d: usize) -> Vec<Rational64> {
    // Newton forward form: P(t) = sum_j Delta^j h(s) * C(t - s, j)
    let mut diffs = Vec::with_capacity(d + 1);
    let mut row: Vec<i64> = window[..=d].to_vec();
    for _ in 0..=d {
        diffs.push(row[0]);
        row = row.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let s = start as i64;
    let mut coeffs = vec![Rational64::zero(); d + 1];
    // basis polynomial C(t - s, j) in ascending coefficients
    let mut basis = vec![Rational64::one()];
    for (j, &dj) in diffs.iter().enumerate() {
        for (i, b) in basis.iter().enumerate() {
            coeffs[i] += b * Rational64::from_integer(dj);
        }
        // multiply basis by (t - s - j) / (j + 1)
        let shift = Rational64::from_integer(-(s + j as i64));
        let scale = Rational64::new(1, j as i64 + 1);
        let mut next = vec![Rational64::zero(); basis.len() + 1];
        for (i, b) in basis.iter().enumerate() {
            next[i] += b * shift * scale;
            next[i + 1] += b * scale;
        }
        basis = next;
    }
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

fn factorial(n: i64) -> i64 {
    (1..=n).product()
}

/// Hilbert data of the quotient by a monomial ideal.
pub fn hilbert_from_monomials(nvars: usize, gens: &[Monomial]) -> Result<HilbertData, GroebnerError> {
    let numer = series_numerator(gens.to_vec(), &mut HashMap::new());
    // h(t) = P(t) for every t >= deg K - nvars + 1
    let exact_from = (numer.len() as i64 - 1 - nvars as i64 + 1).max(0) as u32;
    let window = nvars.max(4);
    let mut values: Vec<i64> = Vec::new();
    for t in 0..=MAX_HILBERT_DEGREE {
        values.push(hilbert_value(&numer, nvars, t as i64));
        // try every candidate degree, smallest first; d = -1 is the zero tail
        for d in -1..nvars as i64 {
            let needed = window + (d + 1) as usize;
            if values.len() < needed {
                break;
            }
            let start = values.len() - needed;
            if (start as u32) < exact_from {
                break;
            }
            let tail = &values[start..];
            let mut diff = tail.to_vec();
            for _ in 0..=d {
                diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
            }
            if d < 0 {
                diff = tail.to_vec();
            }
            if diff.iter().all(|&x| x == 0) {
                if d < 0 {
                    return Ok(HilbertData {
                        values,
                        poly_coeffs: Vec::new(),
                        dim: -1,
                        degree: 0,
                        stable_from: start as u32,
                    });
                }
                let coeffs = interpolate(tail, start as u32, d as usize);
                let lead = *coeffs.last().expect("nonzero polynomial");
                let deg = lead * Rational64::from_integer(factorial(d));
                assert!(deg.is_integer(), "degree must be an integer");
                return Ok(HilbertData {
                    values,
                    poly_coeffs: coeffs,
                    dim: d,
                    degree: deg.to_integer(),
                    stable_from: start as u32,
                });
            }
        }
    }
    Err(GroebnerError::HilbertBudgetExceeded(MAX_HILBERT_DEGREE))
}

/// Hilbert data of `S / I` for the ideal with this Gröbner basis.
pub fn hilbert(g: &GroebnerBasis) -> Result<HilbertData, GroebnerError> {
    if !g.is_homogeneous() {
        return Err(GroebnerError::NotHomogeneous);
    }
    hilbert_from_monomials(g.nvars(), g.leading_monomials())
}

/// Result of cutting an ideal with a hyperplane.
#[derive(Debug, Clone)]
pub struct Section {
    pub ideal: Ideal,
    pub basis: GroebnerBasis,
    pub hilbert: HilbertData,
}

/// `I + (h)` for a linear form `h`, with its basis and Hilbert data.
pub fn hyperplane_section(
    ideal: &Ideal,
    h: &Polynomial,
    order: MonomialOrder,
) -> Result<Section, GroebnerError> {
    if !h.is_homogeneous() || h.degree() != Some(1) {
        return Err(GroebnerError::NotLinearForm);
    }
    if !ideal.is_homogeneous() {
        return Err(GroebnerError::NotHomogeneous);
    }
    let cut = ideal.with(h.clone())?;
    let basis = buchberger(&cut, order)?;
    let hilbert = hilbert(&basis)?;
    Ok(Section {
        ideal: cut,
        basis,
        hilbert,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::GaloisField;
    use crate::mpoly::parse_poly;
    use std::sync::Arc;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    fn ideal(q: u64, nvars: usize, gens: &[&str]) -> Ideal {
        let f = GaloisField::with_order(q).unwrap().shared();
        let ps = gens.iter().map(|g| parse_poly(g, &f, nvars).unwrap());
        Ideal::new(Arc::clone(&f), nvars, ps).unwrap()
    }

    #[test]
    fn reducible_conic_in_plane() {
        // (x0 x1) in P^2: C(t+2,2) - C(t,2) = 2t + 1
        let h = hilbert_from_monomials(3, &[mono(&[1, 1, 0])]).unwrap();
        for t in 0..10i64 {
            let oracle = binom(t + 2, 2) - binom(t, 2);
            if let Some(&v) = h.values.get(t as usize) {
                assert_eq!(v, oracle);
            }
            assert_eq!(h.eval_poly(t), Rational64::from(oracle));
        }
        assert_eq!(h.dim, 1);
        assert_eq!(h.degree, 2);
        assert_eq!(h.poly_coeffs, vec![Rational64::from(1), Rational64::from(2)]);
    }

    #[test]
    fn line_and_points() {
        let h = hilbert_from_monomials(3, &[mono(&[1, 0, 0])]).unwrap();
        assert_eq!((h.dim, h.degree), (1, 1));
        let h = hilbert_from_monomials(3, &[mono(&[1, 0, 0]), mono(&[0, 1, 0])]).unwrap();
        assert_eq!((h.dim, h.degree), (0, 1));
        let h = hilbert_from_monomials(2, &[mono(&[0, 0])]).unwrap();
        assert!(h.is_empty_scheme());
        assert_eq!(h.degree, 0);
        let h = hilbert_from_monomials(2, &[mono(&[1, 0]), mono(&[0, 3])]).unwrap();
        assert!(h.is_empty_scheme());
    }

    #[test]
    fn zero_ideal_is_whole_space() {
        let h = hilbert_from_monomials(4, &[]).unwrap();
        assert_eq!((h.dim, h.degree), (3, 1));
    }

    #[test]
    fn twisted_cubic_hilbert_polynomial() {
        let i = ideal(2, 4, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]);
        let g = buchberger(&i, MonomialOrder::Grevlex).unwrap();
        let h = hilbert(&g).unwrap();
        assert_eq!((h.dim, h.degree), (1, 3));
        assert_eq!(h.poly_coeffs, vec![Rational64::from(1), Rational64::from(3)]);
        let gl = buchberger(&i, MonomialOrder::Lex).unwrap();
        let hl = hilbert(&gl).unwrap();
        assert_eq!((hl.dim, hl.degree), (1, 3));
    }

    #[test]
    fn hyperplane_sections() {
        let i = ideal(2, 4, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]);
        let x3 = parse_poly("x3", i.field(), 4).unwrap();
        let s = hyperplane_section(&i, &x3, MonomialOrder::Grevlex).unwrap();
        assert_eq!((s.hilbert.dim, s.hilbert.degree), (0, 3));

        let line = ideal(2, 4, &["x0", "x1"]);
        let x2 = parse_poly("x2", line.field(), 4).unwrap();
        let s = hyperplane_section(&line, &x2, MonomialOrder::Grevlex).unwrap();
        assert_eq!((s.hilbert.dim, s.hilbert.degree), (0, 1));

        let plane = ideal(2, 4, &["x0"]);
        let x0 = parse_poly("x0", plane.field(), 4).unwrap();
        let s = hyperplane_section(&plane, &x0, MonomialOrder::Grevlex).unwrap();
        assert_eq!((s.hilbert.dim, s.hilbert.degree), (2, 1));
        assert_eq!(s.basis.basis().len(), 1);

        let quad = parse_poly("x0^2", plane.field(), 4).unwrap();
        assert_eq!(
            hyperplane_section(&plane, &quad, MonomialOrder::Grevlex).err(),
            Some(GroebnerError::NotLinearForm)
        );
    }

    #[test]
    fn non_homogeneous_rejected() {
        let i = ideal(3, 2, &["x0 - 1"]);
        let g = buchberger(&i, MonomialOrder::Grevlex).unwrap();
        assert_eq!(hilbert(&g), Err(GroebnerError::NotHomogeneous));
    }

    #[test]
    fn numerator_matches_enumeration() {
        let gens = vec![mono(&[2, 1, 0, 0]), mono(&[0, 2, 2, 0]), mono(&[1, 0, 0, 3]), mono(&[0, 0, 1, 1])];
        let h = hilbert_from_monomials(4, &gens).unwrap();
        for (t, &v) in h.values.iter().enumerate().take(12) {
            assert_eq!(v, standard_monomial_count(4, &gens, t as u32));
        }
    }

    #[test]
    fn serializes_rationals_as_pairs() {
        let h = hilbert_from_monomials(3, &[mono(&[2, 0, 0])]).unwrap();
        let v = serde_json::to_value(&h).unwrap();
        assert_eq!(v["dim"], 1);
        assert_eq!(v["degree"], 2);
        assert_eq!(v["poly_coeffs"][1], serde_json::json!([2, 1]));
    }
}
