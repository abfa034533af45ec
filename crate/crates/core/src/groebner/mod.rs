//! Ideals, Buchberger's algorithm and normal forms.
//!
//! Pairs are processed with the normal selection strategy (smallest lcm
//! degree first, ties broken by the monomial order and then by pair index)
//! and pruned with Buchberger's product and chain criteria. The output is
//! always the reduced basis: minimal, inter-reduced and monic, sorted by
//! descending leading monomial.

mod hilbert;

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{Fe, GaloisField};
use crate::mpoly::{Monomial, MonomialOrder, Polynomial};

pub use hilbert::{
    hilbert, hilbert_from_monomials, hyperplane_section, standard_monomial_count, HilbertData,
    Section, MAX_HILBERT_DEGREE,
};

/// Default cap on reduction steps for one Gröbner computation.
pub const DEFAULT_STEP_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("work budget of {0} reduction steps exceeded")]
    BudgetExceeded(u64),
    #[error("Hilbert function did not stabilize by degree {0}")]
    HilbertBudgetExceeded(u32),
    #[error("ideal is not homogeneous")]
    NotHomogeneous,
    #[error("generators live in different rings")]
    RingMismatch,
    #[error("expected a nonzero homogeneous form of degree 1")]
    NotLinearForm,
    #[error("the scheme is empty")]
    EmptyScheme,
}

/// A finitely generated ideal. Zero generators are dropped on
/// construction, so an empty generator list is the zero ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    field: Arc<GaloisField>,
    nvars: usize,
    gens: Vec<Polynomial>,
}

impl Ideal {
    pub fn new(
        field: Arc<GaloisField>,
        nvars: usize,
        gens: impl IntoIterator<Item = Polynomial>,
    ) -> Result<Self, GroebnerError> {
        let mut out = Vec::new();
        for g in gens {
            if g.nvars() != nvars || **g.field() != *field {
                return Err(GroebnerError::RingMismatch);
            }
            if !g.is_zero() {
                out.push(g);
            }
        }
        Ok(Ideal {
            field,
            nvars,
            gens: out,
        })
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(Polynomial::is_homogeneous)
    }

    /// `self + (extra)`.
    pub fn with(&self, extra: Polynomial) -> Result<Ideal, GroebnerError> {
        Ideal::new(
            Arc::clone(&self.field),
            self.nvars,
            self.gens.iter().cloned().chain(std::iter::once(extra)),
        )
    }
}

/// Monomial key ordered by a fixed monomial order.
#[derive(Clone, PartialEq, Eq)]
struct Key(Monomial, MonomialOrder);

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.1.cmp(&self.0, &other.0)
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Working polynomial: terms sorted descending in the active order, head
/// coefficient one.
#[derive(Debug, Clone)]
struct Work {
    terms: Vec<(Monomial, Fe)>,
}

impl Work {
    fn from_poly(p: &Polynomial, order: MonomialOrder) -> Work {
        Work {
            terms: p.sorted_terms(order),
        }
    }

    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn make_monic(&mut self, f: &GaloisField) {
        if let Some(&(_, c)) = self.terms.first() {
            let ci = f.inv(c).expect("nonzero head");
            for t in &mut self.terms {
                t.1 = f.mul(t.1, ci);
            }
        }
    }

    fn to_poly(&self, field: &Arc<GaloisField>, nvars: usize) -> Polynomial {
        Polynomial::from_terms(Arc::clone(field), nvars, self.terms.iter().cloned())
    }
}

struct Reducer<'a> {
    field: &'a GaloisField,
    order: MonomialOrder,
    steps: u64,
    budget: u64,
}

impl Reducer<'_> {
    /// Full reduction of `f` by `basis`. `pick` chooses among the indices of
    /// basis elements whose head divides the current term.
    fn reduce(
        &mut self,
        f: &[(Monomial, Fe)],
        basis: &[Work],
        pick: &mut dyn FnMut(&[usize]) -> usize,
    ) -> Result<Vec<(Monomial, Fe)>, GroebnerError> {
        let fld = self.field;
        let mut pending: BTreeMap<Key, Fe> = f
            .iter()
            .map(|(m, c)| (Key(m.clone(), self.order), *c))
            .collect();
        let mut remainder = Vec::new();
        let mut candidates = Vec::new();
        while let Some((Key(m, _), c)) = pending.pop_last() {
            candidates.clear();
            candidates.extend(
                basis
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| g.lm().divides(&m))
                    .map(|(i, _)| i),
            );
            if candidates.is_empty() {
                remainder.push((m, c));
                continue;
            }
            self.steps += 1;
            if self.steps > self.budget {
                return Err(GroebnerError::BudgetExceeded(self.budget));
            }
            let g = &basis[candidates[pick(&candidates)]];
            let shift = m.div(g.lm()).expect("head divides");
            // subtract c * shift * g; the head cancels exactly
            for (gm, gc) in g.terms.iter().skip(1) {
                let key = Key(gm.mul(&shift), self.order);
                let delta = fld.neg(fld.mul(c, *gc));
                match pending.entry(key) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(delta);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let s = fld.add(*o.get(), delta);
                        if s.is_zero() {
                            o.remove();
                        } else {
                            *o.get_mut() = s;
                        }
                    }
                }
            }
        }
        Ok(remainder)
    }
}

fn first(_: &[usize]) -> usize {
    0
}

fn s_poly(f: &Work, g: &Work, fld: &GaloisField, order: MonomialOrder) -> Vec<(Monomial, Fe)> {
    let l = f.lm().lcm(g.lm());
    let sf = l.div(f.lm()).expect("lcm");
    let sg = l.div(g.lm()).expect("lcm");
    let mut acc: BTreeMap<Key, Fe> = BTreeMap::new();
    for (m, c) in f.terms.iter().skip(1) {
        acc.insert(Key(m.mul(&sf), order), *c);
    }
    for (m, c) in g.terms.iter().skip(1) {
        let key = Key(m.mul(&sg), order);
        let v = fld.sub(acc.get(&key).copied().unwrap_or(Fe::ZERO), *c);
        if v.is_zero() {
            acc.remove(&key);
        } else {
            acc.insert(key, v);
        }
    }
    acc.into_iter().rev().map(|(Key(m, _), c)| (m, c)).collect()
}

/// A reduced Gröbner basis together with its order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    field: Arc<GaloisField>,
    nvars: usize,
    order: MonomialOrder,
    basis: Vec<Polynomial>,
    leading: Vec<Monomial>,
}

impl GroebnerBasis {
    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leading
    }

    pub fn is_unit(&self) -> bool {
        self.leading.iter().any(Monomial::is_one)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.basis.iter().all(Polynomial::is_homogeneous)
    }

    fn works(&self) -> Vec<Work> {
        self.basis.iter().map(|p| Work::from_poly(p, self.order)).collect()
    }

    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        self.normal_form_with(f, &mut first)
    }

    /// Normal form where `pick` selects the reducer whenever several basis
    /// heads divide the current term. The result does not depend on it.
    pub fn normal_form_with(&self, f: &Polynomial, pick: &mut dyn FnMut(&[usize]) -> usize) -> Polynomial {
        assert_eq!(f.nvars(), self.nvars, "polynomial and basis in different rings");
        let mut r = Reducer {
            field: &self.field,
            order: self.order,
            steps: 0,
            budget: u64::MAX,
        };
        let terms = r
            .reduce(&f.sorted_terms(self.order), &self.works(), pick)
            .expect("unbounded budget");
        Polynomial::from_terms(Arc::clone(&self.field), self.nvars, terms)
    }

    pub fn contains(&self, f: &Polynomial) -> bool {
        self.normal_form(f).is_zero()
    }

    /// Checks the Buchberger criterion: every S-polynomial reduces to zero.
    pub fn satisfies_buchberger_criterion(&self) -> bool {
        let ws = self.works();
        let mut r = Reducer {
            field: &self.field,
            order: self.order,
            steps: 0,
            budget: u64::MAX,
        };
        for i in 0..ws.len() {
            for j in i + 1..ws.len() {
                let s = s_poly(&ws[i], &ws[j], &self.field, self.order);
                match r.reduce(&s, &ws, &mut first) {
                    Ok(rem) if rem.is_empty() => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// Reducedness: monic heads, and no head divides any term of another
    /// basis element.
    pub fn is_reduced(&self) -> bool {
        for (i, g) in self.basis.iter().enumerate() {
            if g.leading_term(self.order).map(|(_, c)| c) != Some(Fe::ONE) {
                return false;
            }
            for (j, h) in self.basis.iter().enumerate() {
                if i != j && h.iter().any(|(m, _)| self.leading[i].divides(m)) {
                    return false;
                }
            }
        }
        true
    }

    /// Degree-1 elements of the basis. For a homogeneous ideal they span
    /// the degree-1 part of the ideal.
    pub fn linear_forms(&self) -> Vec<Polynomial> {
        self.basis
            .iter()
            .filter(|p| p.is_homogeneous() && p.degree() == Some(1))
            .cloned()
            .collect()
    }
}

pub fn buchberger(ideal: &Ideal, order: MonomialOrder) -> Result<GroebnerBasis, GroebnerError> {
    buchberger_with_budget(ideal, order, DEFAULT_STEP_BUDGET)
}

pub fn buchberger_with_budget(
    ideal: &Ideal,
    order: MonomialOrder,
    budget: u64,
) -> Result<GroebnerBasis, GroebnerError> {
    let fld = ideal.field.as_ref();
    let mut red = Reducer {
        field: fld,
        order,
        steps: 0,
        budget,
    };
    let mut g: Vec<Work> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for p in ideal.gens() {
        let terms = red.reduce(&p.sorted_terms(order), &g, &mut first)?;
        if terms.is_empty() {
            continue;
        }
        let mut w = Work { terms };
        w.make_monic(fld);
        let k = g.len();
        g.push(w);
        pending.extend((0..k).map(|i| (i, k)));
    }
    while !pending.is_empty() {
        let &(i, j) = pending
            .iter()
            .min_by(|a, b| {
                let la = g[a.0].lm().lcm(g[a.1].lm());
                let lb = g[b.0].lm().lcm(g[b.1].lm());
                la.degree()
                    .cmp(&lb.degree())
                    .then_with(|| order.cmp(&la, &lb))
                    .then_with(|| a.cmp(b))
            })
            .expect("nonempty");
        pending.remove(&(i, j));
        let (fi, fj) = (&g[i], &g[j]);
        if fi.lm().is_coprime(fj.lm()) {
            continue;
        }
        let l = fi.lm().lcm(fj.lm());
        let chain = (0..g.len()).any(|k| {
            k != i
                && k != j
                && g[k].lm().divides(&l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_poly(fi, fj, fld, order);
        let r = red.reduce(&s, &g, &mut first)?;
        if r.is_empty() {
            continue;
        }
        let mut w = Work { terms: r };
        w.make_monic(fld);
        let k = g.len();
        g.push(w);
        pending.extend((0..k).map(|i| (i, k)));
    }
    // minimalize
    let mut keep: Vec<Work> = Vec::new();
    for (idx, w) in g.iter().enumerate() {
        let redundant = g.iter().enumerate().any(|(o, v)| {
            o != idx && v.lm().divides(w.lm()) && (v.lm() != w.lm() || o < idx)
        });
        if !redundant {
            keep.push(w.clone());
        }
    }
    // inter-reduce tails
    let mut reduced = Vec::with_capacity(keep.len());
    for idx in 0..keep.len() {
        let others: Vec<Work> = keep
            .iter()
            .enumerate()
            .filter(|(o, _)| *o != idx)
            .map(|(_, w)| w.clone())
            .collect();
        let head = keep[idx].terms[0].clone();
        let tail = red.reduce(&keep[idx].terms[1..], &others, &mut first)?;
        let mut terms = vec![head];
        terms.extend(tail);
        reduced.push(Work { terms });
    }
    reduced.sort_by(|a, b| order.cmp(b.lm(), a.lm()));
    let leading = reduced.iter().map(|w| w.lm().clone()).collect();
    let basis = reduced
        .iter()
        .map(|w| w.to_poly(&ideal.field, ideal.nvars))
        .collect();
    Ok(GroebnerBasis {
        field: Arc::clone(&ideal.field),
        nvars: ideal.nvars,
        order,
        basis,
        leading,
    })
}

/// Normal form of `f` against `g` (free-function form).
pub fn normal_form(f: &Polynomial, g: &GroebnerBasis) -> Polynomial {
    g.normal_form(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::parse_poly;

    fn ideal(q: u64, nvars: usize, gens: &[&str]) -> Ideal {
        let f = GaloisField::with_order(q).unwrap().shared();
        let ps = gens.iter().map(|g| parse_poly(g, &f, nvars).unwrap());
        Ideal::new(Arc::clone(&f), nvars, ps).unwrap()
    }

    const TWISTED: [&str; 3] = ["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"];

    #[test]
    fn twisted_cubic_basis() {
        let i = ideal(2, 4, &TWISTED);
        let g = buchberger(&i, MonomialOrder::Grevlex).unwrap();
        assert_eq!(g.basis().len(), 3);
        assert!(g.satisfies_buchberger_criterion());
        assert!(g.is_reduced());
        for p in i.gens() {
            assert!(g.contains(p));
        }
        // and conversely each basis element lies in the ideal of the gens:
        // they are the generators up to sign here.
        let mut expect: Vec<Polynomial> = i.gens().iter().map(|p| p.monic(MonomialOrder::Grevlex)).collect();
        let mut got = g.basis().to_vec();
        expect.sort_by_key(|p| p.to_text());
        got.sort_by_key(|p| p.to_text());
        assert_eq!(expect, got);
    }

    #[test]
    fn duplicate_and_linear() {
        let i = ideal(3, 2, &["x0", "x0"]);
        let g = buchberger(&i, MonomialOrder::Grevlex).unwrap();
        assert_eq!(g.basis().len(), 1);
        assert_eq!(g.basis()[0].to_text(), "x0");
        let i = ideal(3, 2, &["x0 + x1", "x1"]);
        let g = buchberger(&i, MonomialOrder::Grevlex).unwrap();
        let texts: Vec<String> = g.basis().iter().map(|p| p.to_text()).collect();
        assert_eq!(texts, vec!["x0", "x1"]);
    }

    #[test]
    fn normal_form_examples() {
        let i = ideal(2, 3, &["x0*x2 - x1^2"]);
        let g = buchberger(&i, MonomialOrder::Grevlex).unwrap();
        let f = parse_poly("x1^2", i.field(), 3).unwrap();
        assert_eq!(normal_form(&f, &g).to_text(), "x0*x2");
        let gen = &i.gens()[0];
        assert!(normal_form(gen, &g).is_zero());
        let i = ideal(2, 3, &["x0"]);
        let g = buchberger(&i, MonomialOrder::Grevlex).unwrap();
        let one = parse_poly("1", i.field(), 3).unwrap();
        assert_eq!(normal_form(&one, &g), one);
    }

    #[test]
    fn unit_ideal_and_zero_ideal() {
        let i = ideal(5, 2, &["x0 + 1", "x0"]);
        let g = buchberger(&i, MonomialOrder::Lex).unwrap();
        assert!(g.is_unit());
        let z = ideal(5, 2, &["0"]);
        assert!(z.is_zero());
        let g = buchberger(&z, MonomialOrder::Grevlex).unwrap();
        assert!(g.basis().is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let i = ideal(7, 4, &TWISTED);
        assert_eq!(
            buchberger_with_budget(&i, MonomialOrder::Lex, 1),
            Err(GroebnerError::BudgetExceeded(1))
        );
    }

    #[test]
    fn lex_basis_of_affine_system() {
        // x0^2 + x1^2 - 1, x0 - x1 over GF(7): lex basis eliminates x0
        let i = ideal(7, 2, &["x0^2 + x1^2 - 1", "x0 - x1"]);
        let g = buchberger(&i, MonomialOrder::Lex).unwrap();
        assert!(g.satisfies_buchberger_criterion());
        assert!(g.is_reduced());
        let texts: Vec<String> = g.basis().iter().map(|p| p.to_text()).collect();
        // 2 x1^2 = 1  =>  x1^2 = 4 = -3 (mod 7)
        assert_eq!(texts, vec!["x0 - x1", "x1^2 + 3"]);
    }
}
