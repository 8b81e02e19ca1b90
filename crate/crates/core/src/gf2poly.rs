//! Sparse polynomials and truncated power series over GF(2) in graded
//! generators.
//!
//! A [`Poly`] is a set of [`Monomial`]s: coefficients live in GF(2), so a term
//! is either present or absent and adding a term twice removes it. Terms are
//! kept sorted in the canonical order (ascending total degree, then
//! lexicographic on exponent vectors with larger exponents on earlier
//! generators first), which is also the print order.

use std::cmp::Ordering;
use std::fmt::Write as _;

use rustc_hash::{FxHashMap, FxHashSet};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A graded generator. `id` is the declaration index and fixes the canonical
/// generator order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GenSym {
    pub id: u32,
    pub name: String,
    pub degree: u32,
    pub weight: u32,
}

/// An ordered table of generators; every [`Monomial`] built through it carries
/// its degree and weight.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Gens {
    syms: Vec<GenSym>,
    by_name: FxHashMap<String, u32>,
}

impl Gens {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a generator and returns its id.
    pub fn push(&mut self, name: impl Into<String>, degree: u32, weight: u32) -> u32 {
        let id = self.syms.len() as u32;
        let name = name.into();
        self.by_name.insert(name.clone(), id);
        self.syms.push(GenSym {
            id,
            name,
            degree,
            weight: weight.max(1),
        });
        id
    }

    pub fn len(&self) -> usize {
        self.syms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syms.is_empty()
    }

    pub fn get(&self, id: u32) -> &GenSym {
        &self.syms[id as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = &GenSym> {
        self.syms.iter()
    }

    pub fn lookup(&self, name: &str) -> Option<u32> {
        self.by_name.get(name).copied()
    }

    pub fn monomial(&self, id: u32, exp: u32) -> Monomial {
        if exp == 0 {
            return Monomial::one();
        }
        let g = self.get(id);
        let mut factors = SmallVec::new();
        factors.push((id, exp));
        Monomial {
            degree: g.degree * exp,
            weight: g.weight * exp,
            factors,
        }
    }

    pub fn var(&self, id: u32) -> Poly {
        Poly::from_monomial(self.monomial(id, 1))
    }

    /// Builds a monomial from `(id, exponent)` pairs in any order.
    pub fn monomial_from(&self, pairs: &[(u32, u32)]) -> Monomial {
        pairs
            .iter()
            .fold(Monomial::one(), |m, &(id, e)| m.mul(&self.monomial(id, e)))
    }

    /// Canonical text for a monomial, e.g. `xi1^3 xi2`.
    pub fn fmt_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        let mut out = String::new();
        for (k, &(id, e)) in m.factors.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            let name = &self.get(id).name;
            let compound = name.contains(char::is_whitespace);
            match (compound, e) {
                (false, 1) => out.push_str(name),
                (false, _) => {
                    let _ = write!(out, "{name}^{e}");
                }
                (true, 1) => out.push_str(name),
                (true, _) => {
                    let _ = write!(out, "({name})^{e}");
                }
            }
        }
        out
    }

    /// Canonical text for a polynomial; `0` for the empty sum.
    pub fn fmt_poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        p.terms
            .iter()
            .map(|m| self.fmt_monomial(m))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Term list form used by the JSON output: one `[name, exponent]` list per
    /// term, the unit monomial being the empty list.
    pub fn term_list(&self, p: &Poly) -> Vec<Vec<(String, u32)>> {
        p.terms
            .iter()
            .map(|m| {
                m.factors
                    .iter()
                    .map(|&(id, e)| (self.get(id).name.clone(), e))
                    .collect()
            })
            .collect()
    }

    /// Inverse of [`Gens::term_list`].
    pub fn from_term_list(&self, terms: &[Vec<(String, u32)>]) -> Result<Poly> {
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let mut m = Monomial::one();
            for (name, e) in t {
                let id = self
                    .lookup(name)
                    .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
                m = m.mul(&self.monomial(id, *e));
            }
            out.push(m);
        }
        Ok(Poly::from_monomials(out))
    }
}

/// A monomial with its cached total degree and weight. Factors are sorted by
/// generator id with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    weight: u32,
    factors: SmallVec<[(u32, u32); 4]>,
}

impl Monomial {
    pub fn one() -> Self {
        Self {
            degree: 0,
            weight: 0,
            factors: SmallVec::new(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    pub fn exponent(&self, id: u32) -> u32 {
        self.factors
            .iter()
            .find(|f| f.0 == id)
            .map(|f| f.1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors = SmallVec::with_capacity(self.factors.len() + other.factors.len());
        let (a, b) = (&self.factors, &other.factors);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    factors.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    factors.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    factors.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        factors.extend_from_slice(&a[i..]);
        factors.extend_from_slice(&b[j..]);
        Monomial {
            degree: self.degree + other.degree,
            weight: self.weight + other.weight,
            factors,
        }
    }

    /// Doubles every exponent.
    pub fn square(&self) -> Monomial {
        Monomial {
            degree: 2 * self.degree,
            weight: 2 * self.weight,
            factors: self.factors.iter().map(|&(id, e)| (id, 2 * e)).collect(),
        }
    }

    /// Square root when every exponent is even.
    pub fn sqrt(&self) -> Option<Monomial> {
        if self.factors.iter().any(|f| f.1 % 2 == 1) {
            return None;
        }
        Some(Monomial {
            degree: self.degree / 2,
            weight: self.weight / 2,
            factors: self.factors.iter().map(|&(id, e)| (id, e / 2)).collect(),
        })
    }
}

/// Lexicographic comparison of the dense exponent vectors (generator 0 first).
fn dense_lex(a: &[(u32, u32)], b: &[(u32, u32)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {
                    if x.1 != y.1 {
                        return x.1.cmp(&y.1);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| dense_lex(&other.factors, &self.factors))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A GF(2) linear combination of monomials, stored as a sorted set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: Vec<Monomial>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_monomial(Monomial::one())
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self { terms: vec![m] }
    }

    /// Sums the given monomials; repeated monomials cancel in pairs.
    pub fn from_monomials(ms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut set = FxHashSet::default();
        for m in ms {
            if !set.remove(&m) {
                set.insert(m);
            }
        }
        Self::from_set(set)
    }

    fn from_set(set: FxHashSet<Monomial>) -> Self {
        let mut terms: Vec<_> = set.into_iter().collect();
        terms.sort_unstable();
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.binary_search(m).is_ok()
    }

    /// Largest total degree of a term.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.last().map(Monomial::degree)
    }

    /// The common degree of all terms, if there is one (the zero polynomial
    /// is homogeneous of every degree and returns `None`).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let first = self.terms.first()?.degree;
        self.terms
            .iter()
            .all(|m| m.degree == first)
            .then_some(first)
    }

    /// Symmetric difference of the term sets.
    pub fn add(&self, other: &Poly) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut terms = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    terms.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    terms.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&a[i..]);
        terms.extend_from_slice(&b[j..]);
        Poly { terms }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        if other.is_zero() {
            return;
        }
        *self = self.add(other);
    }

    pub fn add_monomial(&mut self, m: Monomial) {
        match self.terms.binary_search(&m) {
            Ok(k) => {
                self.terms.remove(k);
            }
            Err(k) => self.terms.insert(k, m),
        }
    }

    /// Product; with `cap`, terms of degree above it are never formed.
    pub fn mul(&self, other: &Poly, cap: Option<u32>) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let cap = cap.unwrap_or(u32::MAX);
        let mut set = FxHashSet::default();
        for a in &self.terms {
            if a.degree > cap {
                break;
            }
            for b in &other.terms {
                if a.degree + b.degree > cap {
                    break;
                }
                let m = a.mul(b);
                if !set.remove(&m) {
                    set.insert(m);
                }
            }
        }
        Self::from_set(set)
    }

    pub fn mul_monomial(&self, m: &Monomial, cap: Option<u32>) -> Poly {
        let cap = cap.unwrap_or(u32::MAX);
        let terms: Vec<_> = self
            .terms
            .iter()
            .take_while(|a| a.degree + m.degree <= cap)
            .map(|a| a.mul(m))
            .collect();
        // Multiplication by a monomial is injective and preserves the
        // degree-then-lex order, so no re-sort is needed.
        Poly { terms }
    }

    pub fn pow(&self, e: u32, cap: Option<u32>) -> Poly {
        let mut result = Poly::one();
        let mut base = self.truncate(cap.unwrap_or(u32::MAX));
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, cap);
            }
            e >>= 1;
            if e > 0 {
                base = base.frobenius().truncate(cap.unwrap_or(u32::MAX));
            }
        }
        result
    }

    /// Terms of total degree exactly `d`.
    pub fn graded_component(&self, d: i64) -> Poly {
        if d < 0 || d > u32::MAX as i64 {
            return Poly::zero();
        }
        let d = d as u32;
        let lo = self.terms.partition_point(|m| m.degree < d);
        let hi = self.terms.partition_point(|m| m.degree <= d);
        Poly {
            terms: self.terms[lo..hi].to_vec(),
        }
    }

    /// Drops every term of degree above `cap`.
    pub fn truncate(&self, cap: u32) -> Poly {
        let hi = self.terms.partition_point(|m| m.degree <= cap);
        Poly {
            terms: self.terms[..hi].to_vec(),
        }
    }

    /// `p^2`, computed by doubling exponents.
    pub fn frobenius(&self) -> Poly {
        // Squaring is injective on monomials and preserves the canonical order.
        Poly {
            terms: self.terms.iter().map(Monomial::square).collect(),
        }
    }

    /// Square root of a polynomial that is a square, i.e. every exponent even.
    pub fn sqrt(&self) -> Option<Poly> {
        let terms = self
            .terms
            .iter()
            .map(Monomial::sqrt)
            .collect::<Option<Vec<_>>>()?;
        Some(Poly { terms })
    }

    /// The ring map sending generator `id` to `image(id)`, truncated at `cap`.
    pub fn substitute(&self, image: impl Fn(u32) -> Poly, cap: Option<u32>) -> Poly {
        let mut powers: FxHashMap<(u32, u32), Poly> = FxHashMap::default();
        let mut out = Poly::zero();
        for m in &self.terms {
            let mut acc = Poly::one();
            for &(id, e) in &m.factors {
                let p = powers
                    .entry((id, e))
                    .or_insert_with(|| image(id).pow(e, cap))
                    .clone();
                acc = acc.mul(&p, cap);
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign(&acc);
        }
        out
    }
}

/// Binomial coefficient mod 2 under the polynomial convention: zero for
/// negative `b`, Lucas' rule for `a >= 0`, and
/// `binom(a, b) = (-1)^b binom(b - a - 1, b)` for negative `a`.
pub fn binom2(a: i64, b: i64) -> bool {
    if b < 0 {
        return false;
    }
    if a < 0 {
        return binom2(b - a - 1, b);
    }
    b <= a && (b & (a - b)) == 0
}

/// A power series truncated above total degree `cap`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    body: Poly,
    cap: u32,
}

impl TruncatedSeries {
    pub fn new(body: Poly, cap: u32) -> Self {
        Self {
            body: body.truncate(cap),
            cap,
        }
    }

    pub fn body(&self) -> &Poly {
        &self.body
    }

    pub fn into_body(self) -> Poly {
        self.body
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let cap = self.cap.min(other.cap);
        TruncatedSeries {
            body: self.body.mul(&other.body, Some(cap)),
            cap,
        }
    }

    /// Multiplicative inverse, built one degree at a time from
    /// `t_d = sum_{k >= 1} s_k t_{d-k}`.
    pub fn invert(&self) -> Result<TruncatedSeries> {
        if !self.body.graded_component(0).is_one() {
            return Err(Error::NoConstantTerm);
        }
        let cap = self.cap;
        let pieces: Vec<Poly> = (0..=cap as i64)
            .map(|d| self.body.graded_component(d))
            .collect();
        let mut inv: Vec<Poly> = vec![Poly::one()];
        for d in 1..=cap as usize {
            let mut t = Poly::zero();
            for k in 1..=d {
                if pieces[k].is_zero() || inv[d - k].is_zero() {
                    continue;
                }
                t.add_assign(&pieces[k].mul(&inv[d - k], None));
            }
            inv.push(t);
        }
        let body = inv.iter().fold(Poly::zero(), |acc, p| acc.add(p));
        Ok(TruncatedSeries { body, cap })
    }
}
