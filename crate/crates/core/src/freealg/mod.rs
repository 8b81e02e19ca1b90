//! Free `E_n` and `E_∞` algebras on graded generators.
//!
//! The homology of a free `E_∞` algebra is polynomial on the classes
//! `Q^J e` with `J` admissible and of excess above `|e|`; for finite `n` and
//! a single generator it is polynomial on `Q_J e` with lower indices
//! nondecreasing in `1..n-1`. Classes are enumerated up to a degree cap and
//! interned as generators of a [`Gens`] table, so elements are ordinary
//! [`Poly`] values.

pub mod bracket;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::gf2poly::{Gens, Monomial, Poly};
use crate::opcalc::{adem_pairs_lower, normalize_upper_indices, OpKind, OpSym, OpWord, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// `E_n` for finite `n >= 1`.
    En(u32),
    Einf,
}

impl Flavor {
    /// Parses `Einf`, `E_inf`, or `En` together with an explicit `n`.
    pub fn parse(name: &str, n: Option<u32>) -> Result<Self> {
        match name {
            "Einf" | "E_inf" | "Einfty" | "inf" => Ok(Flavor::Einf),
            "En" | "E_n" => match n {
                Some(0) => Err(Error::UnsupportedFlavor("E_0".into())),
                Some(n) => Ok(Flavor::En(n)),
                None => Err(Error::Usage("--flavor En needs --n".into())),
            },
            other => {
                let digits = other.strip_prefix("E_").or_else(|| other.strip_prefix('E'));
                match digits.and_then(|d| d.parse::<u32>().ok()) {
                    Some(n) if n >= 1 => Ok(Flavor::En(n)),
                    _ => Err(Error::UnsupportedFlavor(other.to_string())),
                }
            }
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::En(n) => write!(f, "E_{n}"),
            Flavor::Einf => f.write_str("E_inf"),
        }
    }
}

/// A polynomial generator `Q^J e` (upper indices, `E_∞`) or `Q_J e` (lower
/// indices, finite `n`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AdmissibleClass {
    pub gen: u32,
    pub word: Vec<i64>,
    pub degree: u32,
    pub weight: u32,
}

/// Declaration of one free generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenDecl {
    pub name: String,
    pub degree: u32,
    pub weight: u32,
}

impl GenDecl {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Self {
            name: name.into(),
            degree,
            weight: 1,
        }
    }

    /// Parses `name:degree[:weight]`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.trim().split(':').collect();
        let bad = || {
            Error::Usage(format!(
                "bad generator declaration `{text}` (want name:deg[:weight])"
            ))
        };
        let (name, deg, weight) = match parts.as_slice() {
            [n, d] => (*n, *d, "1"),
            [n, d, w] => (*n, *d, *w),
            _ => return Err(bad()),
        };
        let valid_name = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid_name {
            return Err(bad());
        }
        let degree = deg.parse().map_err(|_| bad())?;
        let weight: u32 = weight.parse().map_err(|_| bad())?;
        if weight == 0 {
            return Err(bad());
        }
        Ok(Self {
            name: name.to_string(),
            degree,
            weight,
        })
    }

    /// Parses a comma-separated list of declarations.
    pub fn parse_list(text: &str) -> Result<Vec<Self>> {
        text.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(Self::parse)
            .collect()
    }
}

#[derive(Debug)]
pub struct FreeAlgebra {
    flavor: Flavor,
    decls: Vec<GenDecl>,
    cap: u32,
    classes: Vec<AdmissibleClass>,
    class_gens: Gens,
    index: FxHashMap<(u32, Vec<i64>), u32>,
    /// `Σ_s Q^s c` (E_∞) or `Σ_i Q_i c` (E_n) per class, filled lazily.
    totals: Mutex<FxHashMap<u32, Poly>>,
    class_ops: Mutex<FxHashMap<(i64, u32), Poly>>,
    /// `P_d` on generators, keyed by `(gen, d)`; absent entries are 0.
    seeds: FxHashMap<(u32, i64), Poly>,
    p_memo: Mutex<FxHashMap<(i64, u32), Poly>>,
}

impl FreeAlgebra {
    /// Builds the algebra with all classes of degree at most `cap`.
    pub fn new(flavor: Flavor, decls: Vec<GenDecl>, cap: u32) -> Result<Self> {
        if let Flavor::En(n) = flavor {
            if n == 0 {
                return Err(Error::UnsupportedFlavor("E_0".into()));
            }
            if decls.len() > 1 {
                return Err(Error::UnsupportedFlavor(format!(
                    "E_{n} with {} generators (only one generator is supported for finite n)",
                    decls.len()
                )));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for d in &decls {
            if !seen.insert(d.name.as_str()) {
                return Err(Error::Usage(format!(
                    "generator `{}` declared twice",
                    d.name
                )));
            }
        }
        let mut classes = Vec::new();
        for (g, d) in decls.iter().enumerate() {
            match flavor {
                Flavor::Einf => enumerate_upper(g as u32, d, cap, &mut classes),
                Flavor::En(n) => enumerate_lower(g as u32, d, n, cap, &mut classes),
            }
        }
        classes.sort_by(|a, b| (a.degree, a.gen, &a.word).cmp(&(b.degree, b.gen, &b.word)));
        let mut class_gens = Gens::new();
        let mut index = FxHashMap::default();
        for c in &classes {
            let name = class_name(flavor, &decls[c.gen as usize].name, &c.word);
            let id = class_gens.push(name, c.degree, c.weight);
            index.insert((c.gen, c.word.clone()), id);
        }
        Ok(Self {
            flavor,
            decls,
            cap,
            classes,
            class_gens,
            index,
            totals: Mutex::new(FxHashMap::default()),
            class_ops: Mutex::new(FxHashMap::default()),
            seeds: FxHashMap::default(),
            p_memo: Mutex::new(FxHashMap::default()),
        })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn decls(&self) -> &[GenDecl] {
        &self.decls
    }

    pub fn classes(&self) -> &[AdmissibleClass] {
        &self.classes
    }

    pub fn class_gens(&self) -> &Gens {
        &self.class_gens
    }

    pub fn format(&self, p: &Poly) -> String {
        self.class_gens.fmt_poly(p)
    }

    /// The class of a declared generator.
    pub fn generator(&self, name: &str) -> Result<Poly> {
        let g = self
            .decls
            .iter()
            .position(|d| d.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        self.class(g as u32, &[])
    }

    /// The class `Q^J e_g` (or `Q_J e_g`); the word must be a basis word.
    pub fn class(&self, gen: u32, word: &[i64]) -> Result<Poly> {
        self.class_id(gen, word).map(|id| self.class_gens.var(id))
    }

    fn class_id(&self, gen: u32, word: &[i64]) -> Result<u32> {
        if let Some(&id) = self.index.get(&(gen, word.to_vec())) {
            return Ok(id);
        }
        let degree = self.word_degree(gen, word);
        Err(Error::CapTooSmall {
            needed: degree,
            cap: self.cap,
        })
    }

    fn word_degree(&self, gen: u32, word: &[i64]) -> i64 {
        let mut m = self.decls[gen as usize].degree as i64;
        for &j in word.iter().rev() {
            m = match self.flavor {
                Flavor::Einf => m + j,
                Flavor::En(_) => 2 * m + j,
            };
        }
        m
    }

    /// Polynomial generators of degree at most `maxdeg`.
    pub fn generators(&self, maxdeg: u32) -> Vec<&AdmissibleClass> {
        self.classes.iter().filter(|c| c.degree <= maxdeg).collect()
    }

    /// Monomials in the polynomial generators, grouped by degree `0..=maxdeg`
    /// and listed in canonical order.
    pub fn basis(&self, maxdeg: u32) -> Result<BTreeMap<u32, Vec<Monomial>>> {
        self.check_cap(maxdeg as i64)?;
        if self.classes.iter().any(|c| c.degree == 0) {
            return Err(Error::InfiniteGradedPiece(0));
        }
        let gens: Vec<(u32, u32)> = self
            .classes
            .iter()
            .enumerate()
            .filter(|(_, c)| c.degree <= maxdeg)
            .map(|(id, c)| (id as u32, c.degree))
            .collect();
        let mut out: BTreeMap<u32, Vec<Monomial>> = (0..=maxdeg).map(|d| (d, Vec::new())).collect();
        let mut stack: Vec<(usize, Monomial)> = vec![(0, Monomial::one())];
        while let Some((start, m)) = stack.pop() {
            out.get_mut(&m.degree()).unwrap().push(m.clone());
            for (k, &(id, deg)) in gens.iter().enumerate().skip(start) {
                if m.degree() + deg > maxdeg {
                    continue;
                }
                let next = m.mul(&self.class_gens.monomial(id, 1));
                stack.push((k, next));
            }
        }
        for v in out.values_mut() {
            v.sort();
        }
        Ok(out)
    }

    /// Dimension of each graded piece in degrees `0..=maxdeg`.
    pub fn poincare(&self, maxdeg: u32) -> Result<Vec<usize>> {
        Ok(self.basis(maxdeg)?.into_values().map(|v| v.len()).collect())
    }

    /// Registers `P_d` of a non-sphere generator. The value must be
    /// homogeneous of degree `|g| - d`.
    pub fn set_steenrod_seed(&mut self, gen: &str, d: i64, value: Poly) -> Result<()> {
        let g = self
            .decls
            .iter()
            .position(|x| x.name == gen)
            .ok_or_else(|| Error::UnknownGenerator(gen.to_string()))?;
        let want = self.decls[g].degree as i64 - d;
        if d <= 0 || want < 0 {
            return Err(Error::Usage(format!("P_{d} cannot be seeded on `{gen}`")));
        }
        if value.terms().iter().any(|m| m.degree() as i64 != want) {
            return Err(Error::NonHomogeneous);
        }
        self.seeds.insert((g as u32, d), value);
        self.p_memo.get_mut().unwrap().clear();
        Ok(())
    }

    pub(crate) fn steenrod_seed(&self, gen: u32, d: i64) -> Result<Poly> {
        if d == 0 {
            return self.class(gen, &[]);
        }
        Ok(self.seeds.get(&(gen, d)).cloned().unwrap_or_default())
    }

    pub(crate) fn p_memo_get(&self, d: i64, id: u32) -> Option<Poly> {
        self.p_memo.lock().unwrap().get(&(d, id)).cloned()
    }

    pub(crate) fn p_memo_put(&self, d: i64, id: u32, value: Poly) {
        self.p_memo.lock().unwrap().insert((d, id), value);
    }

    pub fn multiply(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul(b, None)
    }

    fn check_cap(&self, needed: i64) -> Result<()> {
        if needed > self.cap as i64 {
            return Err(Error::CapTooSmall {
                needed,
                cap: self.cap,
            });
        }
        Ok(())
    }

    /// Applies a Dyer–Lashof or Steenrod operation symbol.
    pub fn apply_sym(&self, sym: OpSym, p: &Poly) -> Result<Poly> {
        match (sym.kind, self.flavor) {
            (OpKind::SteenrodP, Flavor::Einf) => {
                crate::nishida::steenrod_action_free(self, sym.index, p)
            }
            (OpKind::SteenrodP, Flavor::En(_)) => Err(Error::UnsupportedFlavor(
                "Steenrod operations are evaluated in E_inf algebras".into(),
            )),
            (OpKind::UpperQ, Flavor::Einf) => self.apply_upper(sym.index, p),
            (OpKind::LowerQ, Flavor::En(n)) => {
                if sym.index < 0 || sym.index >= n as i64 {
                    return Err(Error::IndexOutOfRange {
                        index: sym.index,
                        n,
                    });
                }
                self.apply_by_degree(p, |d| Some(d + sym.index))
            }
            (OpKind::LowerQ, Flavor::Einf) => {
                if sym.index < 0 {
                    return Err(Error::Usage(format!("`{sym}` has a negative lower index")));
                }
                self.apply_by_degree(p, |d| Some(d + sym.index))
            }
            (OpKind::UpperQ, Flavor::En(n)) => {
                let s = sym.index;
                for m in p.terms() {
                    let i = s - m.degree() as i64;
                    if i >= n as i64 {
                        return Err(Error::IndexOutOfRange { index: i, n });
                    }
                }
                self.apply_by_degree(p, |_| Some(s))
            }
        }
    }

    pub fn apply_word(&self, w: &OpWord, p: &Poly) -> Result<Poly> {
        let mut cur = p.clone();
        for &sym in w.symbols().iter().rev() {
            if cur.is_zero() {
                break;
            }
            cur = self.apply_sym(sym, &cur)?;
        }
        Ok(cur)
    }

    /// Splits `p` into homogeneous pieces and applies the upper operation
    /// chosen for each degree.
    fn apply_by_degree(&self, p: &Poly, upper: impl Fn(i64) -> Option<i64>) -> Result<Poly> {
        let mut out = Poly::zero();
        for m in p.terms() {
            if let Some(s) = upper(m.degree() as i64) {
                out.add_assign(&self.q_on_monomial(s, m)?);
            }
        }
        Ok(out)
    }

    /// `Q^s p` (upper indexing). For finite `n` this is `Q_{s-|m|}` on each
    /// monomial `m`.
    pub fn apply_upper(&self, s: i64, p: &Poly) -> Result<Poly> {
        self.apply_by_degree(p, |_| Some(s))
    }

    fn q_on_monomial(&self, s: i64, m: &Monomial) -> Result<Poly> {
        let deg = m.degree() as i64;
        if s < deg {
            return Ok(Poly::zero());
        }
        if m.is_one() {
            return Ok(if s == 0 { Poly::one() } else { Poly::zero() });
        }
        if s == deg {
            return Ok(Poly::from_monomial(m.square()));
        }
        if let [(id, 1)] = m.factors() {
            return self.class_op(s, *id);
        }
        let target = s + deg;
        self.check_cap(target)?;
        let cap = Some(target as u32);
        let mut acc = Poly::one();
        for &(id, e) in m.factors() {
            acc = acc.mul(&self.total(id, target)?.pow(e, cap), cap);
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc.graded_component(target))
    }

    /// Total operation on a class, truncated at `bound`.
    fn total(&self, id: u32, bound: i64) -> Result<Poly> {
        if let Some(t) = self.totals.lock().unwrap().get(&id) {
            return Ok(t.truncate(bound as u32));
        }
        let c = &self.classes[id as usize];
        let d = c.degree as i64;
        let top = match self.flavor {
            Flavor::Einf => self.cap as i64 - d,
            Flavor::En(n) => (d + n as i64 - 1).min(self.cap as i64 - d),
        };
        let mut t = Poly::zero();
        for s in d..=top {
            t.add_assign(&self.class_op(s, id)?);
        }
        self.totals.lock().unwrap().insert(id, t.clone());
        Ok(t.truncate(bound as u32))
    }

    /// `Q^s` on a single class.
    fn class_op(&self, s: i64, id: u32) -> Result<Poly> {
        let c = &self.classes[id as usize];
        let d = c.degree as i64;
        if s < d {
            return Ok(Poly::zero());
        }
        if s == d {
            return Ok(Poly::from_monomial(self.class_gens.monomial(id, 2)));
        }
        self.check_cap(s + d)?;
        if let Some(hit) = self.class_ops.lock().unwrap().get(&(s, id)) {
            return Ok(hit.clone());
        }
        let out = match self.flavor {
            Flavor::Einf => self.class_op_upper(s, c)?,
            Flavor::En(_) => self.class_op_lower(s - d, c)?,
        };
        self.class_ops.lock().unwrap().insert((s, id), out.clone());
        Ok(out)
    }

    fn class_op_upper(&self, s: i64, c: &AdmissibleClass) -> Result<Poly> {
        if c.word.first().is_none_or(|&j| s <= 2 * j) {
            let mut word = Vec::with_capacity(c.word.len() + 1);
            word.push(s);
            word.extend_from_slice(&c.word);
            return self.class(c.gen, &word);
        }
        let mut full = vec![s];
        full.extend_from_slice(&c.word);
        let base = self.class(c.gen, &[])?;
        let mut out = Poly::zero();
        for w in normalize_upper_indices(&full, Strategy::LeftmostFirst) {
            let mut cur = base.clone();
            for &j in w.iter().rev() {
                cur = self.apply_upper(j, &cur)?;
                if cur.is_zero() {
                    break;
                }
            }
            out.add_assign(&cur);
        }
        Ok(out)
    }

    /// `Q_i` on a class `Q_I e` with `i >= 1`.
    fn class_op_lower(&self, i: i64, c: &AdmissibleClass) -> Result<Poly> {
        if c.word.first().is_none_or(|&j| i <= j) {
            let mut word = Vec::with_capacity(c.word.len() + 1);
            word.push(i);
            word.extend_from_slice(&c.word);
            return self.class(c.gen, &word);
        }
        let (first, rest) = c.word.split_first().unwrap();
        let inner = self.class(c.gen, rest)?;
        let mut out = Poly::zero();
        for (a, b) in adem_pairs_lower(i, *first)? {
            let step = self.apply_by_degree(&inner, |d| Some(d + b))?;
            out.add_assign(&self.apply_by_degree(&step, |d| Some(d + a))?);
        }
        Ok(out)
    }
}

fn enumerate_upper(gen: u32, decl: &GenDecl, cap: u32, out: &mut Vec<AdmissibleClass>) {
    let mut stack = vec![(Vec::<i64>::new(), decl.degree as i64, decl.weight)];
    while let Some((word, deg, weight)) = stack.pop() {
        if deg > cap as i64 {
            continue;
        }
        // Prepending j keeps the word admissible when j <= 2 j_1 and keeps
        // the excess above |e| exactly when j exceeds the current degree.
        let hi = word
            .first()
            .map_or(cap as i64 - deg, |&j1| (2 * j1).min(cap as i64 - deg));
        for j in deg + 1..=hi {
            let mut w = Vec::with_capacity(word.len() + 1);
            w.push(j);
            w.extend_from_slice(&word);
            stack.push((w, deg + j, weight * 2));
        }
        out.push(AdmissibleClass {
            gen,
            word,
            degree: deg as u32,
            weight,
        });
    }
}

fn enumerate_lower(gen: u32, decl: &GenDecl, n: u32, cap: u32, out: &mut Vec<AdmissibleClass>) {
    let mut stack = vec![(Vec::<i64>::new(), decl.degree as i64, decl.weight)];
    while let Some((word, deg, weight)) = stack.pop() {
        if deg > cap as i64 {
            continue;
        }
        let hi = word.first().map_or(n as i64 - 1, |&j| j);
        for i in 1..=hi {
            let mut w = Vec::with_capacity(word.len() + 1);
            w.push(i);
            w.extend_from_slice(&word);
            stack.push((w, 2 * deg + i, weight * 2));
        }
        out.push(AdmissibleClass {
            gen,
            word,
            degree: deg as u32,
            weight,
        });
    }
}

fn class_name(flavor: Flavor, gen: &str, word: &[i64]) -> String {
    let mut s = String::new();
    for &j in word {
        match flavor {
            Flavor::Einf => s.push_str(&format!("Q^{j} ")),
            Flavor::En(_) => s.push_str(&format!("Q_{j} ")),
        }
    }
    s.push_str(gen);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn einf(deg: u32, cap: u32) -> FreeAlgebra {
        FreeAlgebra::new(Flavor::Einf, vec![GenDecl::new("x", deg)], cap).unwrap()
    }

    #[test]
    fn e2_poincare_matches_dual_steenrod() {
        let e2 = FreeAlgebra::new(Flavor::En(2), vec![GenDecl::new("x", 1)], 20).unwrap();
        let dims = e2.poincare(20).unwrap();
        assert_eq!(&dims[..8], &[1, 1, 1, 2, 2, 2, 3, 4]);
    }

    #[test]
    fn einf_degree_one_counts() {
        // Generators x (1), Q^2 x (3), Q^3 x (4), Q^4 x (5), ...
        let a = einf(1, 8);
        assert_eq!(a.poincare(5).unwrap(), vec![1, 1, 1, 2, 3, 4]);
    }

    #[test]
    fn e2_basis_small() {
        let e2 = FreeAlgebra::new(Flavor::En(2), vec![GenDecl::new("x", 1)], 8).unwrap();
        let b = e2.basis(3).unwrap();
        let show = |d| {
            b[&d]
                .iter()
                .map(|m| e2.class_gens().fmt_monomial(m))
                .collect::<Vec<_>>()
        };
        assert_eq!(show(1), vec!["x"]);
        assert_eq!(show(2), vec!["x^2"]);
        assert_eq!(show(3), vec!["x^3", "Q_1 x"]);
    }

    #[test]
    fn squaring_instability_and_excess_boundary() {
        let a = einf(1, 12);
        let x = a.generator("x").unwrap();
        assert_eq!(a.apply_upper(1, &x).unwrap(), x.frobenius());
        assert!(a.apply_upper(0, &x).unwrap().is_zero());
        let q2x = a.apply_upper(2, &x).unwrap();
        assert_eq!(a.format(&q2x), "Q^2 x");
        assert_eq!(a.apply_upper(3, &q2x).unwrap(), q2x.frobenius());
        assert_eq!(a.apply_upper(0, &Poly::one()).unwrap(), Poly::one());
        assert!(a.apply_upper(2, &Poly::one()).unwrap().is_zero());
    }

    #[test]
    fn inadmissible_prepend_uses_adem() {
        let a = einf(1, 12);
        let x = a.generator("x").unwrap();
        let q1x = a.apply_upper(1, &x).unwrap();
        // Q^4 Q^1 = Q^3 Q^2.
        let lhs = a.apply_upper(4, &q1x).unwrap();
        let rhs = a.apply_upper(3, &a.apply_upper(2, &x).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn degree_zero_generator() {
        let a = einf(0, 4);
        assert_eq!(a.basis(0), Err(Error::InfiniteGradedPiece(0)));
        let gens: Vec<_> = a.generators(0).iter().map(|c| c.word.clone()).collect();
        assert_eq!(gens, vec![Vec::<i64>::new()]);
    }

    #[test]
    fn multi_generator_en_rejected() {
        let r = FreeAlgebra::new(
            Flavor::En(2),
            vec![GenDecl::new("x", 1), GenDecl::new("y", 1)],
            4,
        );
        assert!(matches!(r, Err(Error::UnsupportedFlavor(_))));
    }

    #[test]
    fn lower_index_range() {
        let e2 = FreeAlgebra::new(Flavor::En(2), vec![GenDecl::new("x", 1)], 8).unwrap();
        let x = e2.generator("x").unwrap();
        assert!(matches!(
            e2.apply_sym(OpSym::lower(2), &x),
            Err(Error::IndexOutOfRange { index: 2, n: 2 })
        ));
    }

    #[test]
    fn gen_decl_parsing() {
        assert_eq!(GenDecl::parse("x:3").unwrap(), GenDecl::new("x", 3));
        assert_eq!(GenDecl::parse("y:2:4").unwrap().weight, 4);
        assert!(GenDecl::parse("x").is_err());
        assert!(GenDecl::parse("1x:2").is_err());
        assert!(GenDecl::parse("x:2:0").is_err());
        assert_eq!(Flavor::parse("E3", None).unwrap(), Flavor::En(3));
        assert_eq!(Flavor::parse("En", Some(2)).unwrap(), Flavor::En(2));
        assert!(Flavor::parse("Ex", None).is_err());
    }
}
