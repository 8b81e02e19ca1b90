//! Symbolic `E_n` algebras with Browder bracket, `n >= 2`, on any number of
//! generators.
//!
//! Elements are polynomials in atoms `Q_I λ`, where `λ` is a Lyndon word
//! over the generators (standing for its standard bracketing) and `I` is a
//! nondecreasing word of lower indices in `1..n-1`. Brackets are pushed onto
//! atoms by the Leibniz rule, killed by Dyer–Lashof vanishing, reduced by
//! the adjoint identity, and pure Lie brackets are expanded in the Lyndon
//! basis.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Mutex;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::freealg::{Flavor, FreeAlgebra, GenDecl};
use crate::opcalc::adem_pairs_lower;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    /// Lower indices, outermost first.
    pub ops: Vec<i64>,
    /// A Lyndon word of generator ids.
    pub lie: Vec<u32>,
}

type Mono = BTreeMap<Atom, u32>;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Elem(BTreeSet<Mono>);

impl Elem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self(BTreeSet::from([Mono::new()]))
    }

    fn from_atom(a: Atom) -> Self {
        Self(BTreeSet::from([Mono::from([(a, 1)])]))
    }

    fn from_mono(m: Mono) -> Self {
        Self(BTreeSet::from([m]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn toggle(&mut self, m: Mono) {
        if !self.0.remove(&m) {
            self.0.insert(m);
        }
    }

    pub fn add(&self, other: &Elem) -> Elem {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Elem) {
        for m in &other.0 {
            self.toggle(m.clone());
        }
    }

    pub fn mul(&self, other: &Elem) -> Elem {
        let mut out = Elem::zero();
        for a in &self.0 {
            for b in &other.0 {
                out.toggle(mono_mul(a, b));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Elem {
        (0..e).fold(Elem::one(), |acc, _| acc.mul(self))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut out = a.clone();
    for (atom, e) in b {
        *out.entry(atom.clone()).or_insert(0) += e;
    }
    out
}

/// `m / a`: removes one factor `a`.
fn mono_div(m: &Mono, a: &Atom) -> Mono {
    let mut out = m.clone();
    match out.get_mut(a) {
        Some(e) if *e > 1 => *e -= 1,
        _ => {
            out.remove(a);
        }
    }
    out
}

type Assoc = BTreeSet<Vec<u32>>;

fn assoc_toggle(p: &mut Assoc, w: Vec<u32>) {
    if !p.remove(&w) {
        p.insert(w);
    }
}

fn assoc_mul(a: &Assoc, b: &Assoc) -> Assoc {
    let mut out = Assoc::new();
    for u in a {
        for v in b {
            let mut w = u.clone();
            w.extend_from_slice(v);
            assoc_toggle(&mut out, w);
        }
    }
    out
}

pub fn is_lyndon(w: &[u32]) -> bool {
    !w.is_empty() && (1..w.len()).all(|k| w[k..] > *w)
}

/// Splits a Lyndon word of length at least 2 at its longest proper Lyndon
/// suffix.
fn standard_split(w: &[u32]) -> (&[u32], &[u32]) {
    let k = (1..w.len()).find(|&k| is_lyndon(&w[k..])).unwrap();
    w.split_at(k)
}

/// Which identity of the bracket calculus to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    Antisymmetry,
    SelfBracket,
    Unit,
    Leibniz,
    Jacobi,
    DlVanishing,
    TopAdditivity,
    TopCartan,
    Adjoint,
}

impl Identity {
    pub const ALL: [Identity; 9] = [
        Identity::Antisymmetry,
        Identity::SelfBracket,
        Identity::Unit,
        Identity::Leibniz,
        Identity::Jacobi,
        Identity::DlVanishing,
        Identity::TopAdditivity,
        Identity::TopCartan,
        Identity::Adjoint,
    ];

    pub fn parse(name: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == name)
            .ok_or_else(|| Error::MalformedIdentityArgs(format!("unknown identity `{name}`")))
    }

    pub fn name(self) -> &'static str {
        match self {
            Identity::Antisymmetry => "antisymmetry",
            Identity::SelfBracket => "self",
            Identity::Unit => "unit",
            Identity::Leibniz => "leibniz",
            Identity::Jacobi => "jacobi",
            Identity::DlVanishing => "dl_vanishing",
            Identity::TopAdditivity => "top_additivity",
            Identity::TopCartan => "top_cartan",
            Identity::Adjoint => "adjoint",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Identity::SelfBracket | Identity::Unit => 1,
            Identity::Leibniz | Identity::Jacobi => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub identity: Identity,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    pub note: Option<String>,
}

#[derive(Debug)]
pub struct BracketAlgebra {
    n: u32,
    gens: Vec<GenDecl>,
    expansions: Mutex<FxHashMap<Vec<u32>, Assoc>>,
}

impl BracketAlgebra {
    pub fn new(n: u32, gens: Vec<GenDecl>) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedFlavor("E_0".into()));
        }
        Ok(Self {
            n,
            gens,
            expansions: Mutex::new(FxHashMap::default()),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn top(&self) -> i64 {
        self.n as i64 - 1
    }

    pub fn generator(&self, name: &str) -> Result<Elem> {
        let id = self
            .gens
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(Elem::from_atom(Atom {
            ops: Vec::new(),
            lie: vec![id as u32],
        }))
    }

    pub fn atom_degree(&self, a: &Atom) -> i64 {
        let lie: i64 = a
            .lie
            .iter()
            .map(|&g| self.gens[g as usize].degree as i64)
            .sum::<i64>()
            + (a.lie.len() as i64 - 1) * self.top();
        a.ops.iter().rev().fold(lie, |m, &i| 2 * m + i)
    }

    fn mono_degree(&self, m: &Mono) -> i64 {
        m.iter().map(|(a, &e)| e as i64 * self.atom_degree(a)).sum()
    }

    /// The degree of a homogeneous element (`None` for 0 or mixed degrees).
    pub fn degree(&self, e: &Elem) -> Option<i64> {
        let mut it = e.0.iter().map(|m| self.mono_degree(m));
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    fn expansion(&self, w: &[u32]) -> Assoc {
        if let Some(hit) = self.expansions.lock().unwrap().get(w) {
            return hit.clone();
        }
        let out = if w.len() == 1 {
            Assoc::from([w.to_vec()])
        } else {
            let (u, v) = standard_split(w);
            let (pu, pv) = (self.expansion(u), self.expansion(v));
            let mut p = assoc_mul(&pu, &pv);
            for t in assoc_mul(&pv, &pu) {
                assoc_toggle(&mut p, t);
            }
            p
        };
        self.expansions
            .lock()
            .unwrap()
            .insert(w.to_vec(), out.clone());
        out
    }

    /// Bracket of two Lyndon words, written in the Lyndon basis.
    fn lie_bracket(&self, u: &[u32], v: &[u32]) -> Elem {
        if u == v {
            return Elem::zero();
        }
        let (pu, pv) = (self.expansion(u), self.expansion(v));
        let mut rest = assoc_mul(&pu, &pv);
        for t in assoc_mul(&pv, &pu) {
            assoc_toggle(&mut rest, t);
        }
        let mut out = Elem::zero();
        // The expansion of a Lyndon word has that word as its least term.
        while let Some(w) = rest.first().cloned() {
            debug_assert!(is_lyndon(&w));
            for t in self.expansion(&w) {
                assoc_toggle(&mut rest, t);
            }
            out.toggle(Mono::from([(
                Atom {
                    ops: Vec::new(),
                    lie: w,
                },
                1,
            )]));
        }
        out
    }

    fn bracket_atoms(&self, a: &Atom, b: &Atom) -> Elem {
        if a == b {
            return Elem::zero();
        }
        for (x, y) in [(a, b), (b, a)] {
            if let Some((&outer, inner)) = x.ops.split_first() {
                if outer < self.top() {
                    return Elem::zero();
                }
                // [Q_{n-1} x', y] = [x', [x', y]].
                let x1 = Atom {
                    ops: inner.to_vec(),
                    lie: x.lie.clone(),
                };
                let inner_br = self.bracket_atoms(&x1, y);
                return self.bracket(&Elem::from_atom(x1), &inner_br);
            }
        }
        self.lie_bracket(&a.lie, &b.lie)
    }

    /// The Browder bracket, extended by the Leibniz rule in both slots.
    /// For `n = 1` it is the commutator, which vanishes in this commutative
    /// representation.
    pub fn bracket(&self, x: &Elem, y: &Elem) -> Elem {
        let mut out = Elem::zero();
        if self.n == 1 {
            return out;
        }
        for u in &x.0 {
            for v in &y.0 {
                for (a, &ea) in u {
                    if ea % 2 == 0 {
                        continue;
                    }
                    for (b, &eb) in v {
                        if eb % 2 == 0 {
                            continue;
                        }
                        let br = self.bracket_atoms(a, b);
                        if br.is_zero() {
                            continue;
                        }
                        let cofactor = Elem::from_mono(mono_mul(&mono_div(u, a), &mono_div(v, b)));
                        out.add_assign(&br.mul(&cofactor));
                    }
                }
            }
        }
        out
    }

    fn check_index(&self, r: i64) -> Result<()> {
        if r < 0 || r > self.top() {
            return Err(Error::IndexOutOfRange {
                index: r,
                n: self.n,
            });
        }
        Ok(())
    }

    /// `Q_r`, applied separately to each homogeneous component.
    pub fn apply_lower(&self, r: i64, x: &Elem) -> Result<Elem> {
        self.check_index(r)?;
        let mut by_degree: BTreeMap<i64, Vec<&Mono>> = BTreeMap::new();
        for m in &x.0 {
            by_degree.entry(self.mono_degree(m)).or_default().push(m);
        }
        let mut out = Elem::zero();
        for terms in by_degree.values() {
            for m in terms {
                out.add_assign(&self.q_mono(r, m)?);
            }
            if r == self.top() {
                for (k, a) in terms.iter().enumerate() {
                    for b in &terms[k + 1..] {
                        out.add_assign(&self.bracket(
                            &Elem::from_mono((*a).clone()),
                            &Elem::from_mono((*b).clone()),
                        ));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `Q^s`, read as `Q_{s-|m|}` on each homogeneous component.
    pub fn apply_upper(&self, s: i64, x: &Elem) -> Result<Elem> {
        let mut by_degree: BTreeMap<i64, Elem> = BTreeMap::new();
        for m in &x.0 {
            by_degree
                .entry(self.mono_degree(m))
                .or_default()
                .toggle(m.clone());
        }
        let mut out = Elem::zero();
        for (d, part) in by_degree {
            if s >= d {
                out.add_assign(&self.apply_lower(s - d, &part)?);
            }
        }
        Ok(out)
    }

    fn q_mono(&self, r: i64, m: &Mono) -> Result<Elem> {
        if m.is_empty() {
            return Ok(if r == 0 { Elem::one() } else { Elem::zero() });
        }
        if r == 0 {
            return Ok(Elem::from_mono(mono_mul(m, m)));
        }
        let a = m.keys().next().unwrap().clone();
        let rest = mono_div(m, &a);
        let mut out = Elem::zero();
        for p in 0..=r {
            let qa = self.q_atom(p, &a)?;
            if qa.is_zero() {
                continue;
            }
            out.add_assign(&qa.mul(&self.q_mono(r - p, &rest)?));
        }
        if r == self.top() {
            let ea = Elem::from_atom(a);
            let er = Elem::from_mono(rest);
            out.add_assign(&ea.mul(&self.bracket(&ea, &er)).mul(&er));
        }
        Ok(out)
    }

    fn q_atom(&self, r: i64, a: &Atom) -> Result<Elem> {
        if r == 0 {
            return Ok(Elem::from_mono(Mono::from([(a.clone(), 2)])));
        }
        match a.ops.split_first() {
            Some((&first, rest)) if r > first => {
                let inner = Atom {
                    ops: rest.to_vec(),
                    lie: a.lie.clone(),
                };
                let mut out = Elem::zero();
                for (x, y) in adem_pairs_lower(r, first)? {
                    let step = self.q_atom(y, &inner)?;
                    out.add_assign(&self.apply_lower(x, &step)?);
                }
                Ok(out)
            }
            _ => {
                let mut ops = Vec::with_capacity(a.ops.len() + 1);
                ops.push(r);
                ops.extend_from_slice(&a.ops);
                Ok(Elem::from_atom(Atom {
                    ops,
                    lie: a.lie.clone(),
                }))
            }
        }
    }

    fn fmt_lie(&self, w: &[u32]) -> String {
        if w.len() == 1 {
            return self.gens[w[0] as usize].name.clone();
        }
        let (u, v) = standard_split(w);
        format!("[{},{}]", self.fmt_lie(u), self.fmt_lie(v))
    }

    fn fmt_atom(&self, a: &Atom) -> String {
        let mut s = String::new();
        for i in &a.ops {
            s.push_str(&format!("Q_{i} "));
        }
        s.push_str(&self.fmt_lie(&a.lie));
        s
    }

    pub fn format(&self, e: &Elem) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut monos: Vec<&Mono> = e.0.iter().collect();
        monos.sort_by_key(|m| self.mono_degree(m));
        monos
            .iter()
            .map(|m| {
                if m.is_empty() {
                    return "1".to_string();
                }
                m.iter()
                    .map(|(a, &e)| {
                        let name = self.fmt_atom(a);
                        match (e, a.ops.is_empty()) {
                            (1, _) => name,
                            (_, true) => format!("{name}^{e}"),
                            (_, false) => format!("({name})^{e}"),
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// One `[atom, exponent]` list per term, in the order of [`Self::format`].
    pub fn term_list(&self, e: &Elem) -> Vec<Vec<(String, u32)>> {
        let mut monos: Vec<&Mono> = e.0.iter().collect();
        monos.sort_by_key(|m| self.mono_degree(m));
        monos
            .iter()
            .map(|m| m.iter().map(|(a, &k)| (self.fmt_atom(a), k)).collect())
            .collect()
    }

    /// Evaluates both sides of an identity on the given arguments.
    pub fn check(&self, identity: Identity, args: &[Elem]) -> Result<IdentityReport> {
        if args.len() != identity.arity() {
            return Err(Error::MalformedIdentityArgs(format!(
                "{identity} takes {} argument(s), got {}",
                identity.arity(),
                args.len()
            )));
        }
        let note = (self.n == 1).then(|| {
            "E_1: the bracket is the commutator xy + yx, zero in the commutative representation"
                .to_string()
        });
        let top = self.top();
        let br = |a: &Elem, b: &Elem| self.bracket(a, b);
        let (lhs, rhs) = match identity {
            Identity::Antisymmetry => (br(&args[0], &args[1]), br(&args[1], &args[0])),
            Identity::SelfBracket => (br(&args[0], &args[0]), Elem::zero()),
            Identity::Unit => (br(&args[0], &Elem::one()), Elem::zero()),
            Identity::Leibniz => {
                let (x, y, z) = (&args[0], &args[1], &args[2]);
                (br(x, &y.mul(z)), br(x, y).mul(z).add(&y.mul(&br(x, z))))
            }
            Identity::Jacobi => {
                let (x, y, z) = (&args[0], &args[1], &args[2]);
                let sum = br(x, &br(y, z))
                    .add(&br(y, &br(z, x)))
                    .add(&br(z, &br(x, y)));
                (sum, Elem::zero())
            }
            Identity::DlVanishing => {
                let mut lhs = Elem::zero();
                for r in 0..top {
                    let v = br(&args[0], &self.apply_lower(r, &args[1])?);
                    lhs.add_assign(&v);
                    if !v.is_zero() {
                        break;
                    }
                }
                (lhs, Elem::zero())
            }
            Identity::TopAdditivity => {
                let (x, y) = (&args[0], &args[1]);
                self.require_homogeneous(&[x, y], true)?;
                (
                    self.apply_lower(top, &x.add(y))?,
                    self.apply_lower(top, x)?
                        .add(&self.apply_lower(top, y)?)
                        .add(&br(x, y)),
                )
            }
            Identity::TopCartan => {
                let (x, y) = (&args[0], &args[1]);
                self.require_homogeneous(&[x, y], false)?;
                let mut rhs = x.mul(&br(x, y)).mul(y);
                for p in 0..=top {
                    rhs.add_assign(&self.apply_lower(p, x)?.mul(&self.apply_lower(top - p, y)?));
                }
                (self.apply_lower(top, &x.mul(y))?, rhs)
            }
            Identity::Adjoint => {
                let (x, y) = (&args[0], &args[1]);
                self.require_homogeneous(&[y], false)?;
                (br(x, &self.apply_lower(top, y)?), br(y, &br(y, x)))
            }
        };
        Ok(IdentityReport {
            identity,
            holds: lhs == rhs,
            lhs: self.format(&lhs),
            rhs: self.format(&rhs),
            note,
        })
    }

    fn require_homogeneous(&self, args: &[&Elem], same: bool) -> Result<()> {
        let degs: Vec<Option<i64>> = args
            .iter()
            .map(|e| if e.is_zero() { Some(0) } else { self.degree(e) })
            .collect();
        if degs.iter().any(Option::is_none) {
            return Err(Error::MalformedIdentityArgs(
                "arguments must be homogeneous".into(),
            ));
        }
        let nonzero: Vec<i64> = args
            .iter()
            .zip(&degs)
            .filter(|(e, _)| !e.is_zero())
            .map(|(_, d)| d.unwrap())
            .collect();
        if same && nonzero.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::MalformedIdentityArgs(
                "top additivity needs arguments of equal degree".into(),
            ));
        }
        Ok(())
    }
}

/// Checks that brackets of all basis monomials of the free `E_n` algebra on
/// one generator of degree `gen_degree` vanish through `maxdeg`. For `n = 1`
/// the bracket is the commutator and the check is trivially true.
pub fn single_gen_bracket_triviality(n: u32, gen_degree: u32, maxdeg: u32) -> Result<bool> {
    if n == 1 {
        return Ok(true);
    }
    let decl = GenDecl::new("x", gen_degree);
    let free = FreeAlgebra::new(Flavor::En(n), vec![decl.clone()], maxdeg)?;
    let br = BracketAlgebra::new(n, vec![decl])?;
    let basis = free.basis(maxdeg)?;
    let classes = free.classes();
    let elems: Vec<Elem> = basis
        .values()
        .flatten()
        .map(|m| {
            Elem::from_mono(
                m.factors()
                    .iter()
                    .map(|&(id, e)| {
                        let c = &classes[id as usize];
                        (
                            Atom {
                                ops: c.word.clone(),
                                lie: vec![0],
                            },
                            e,
                        )
                    })
                    .collect(),
            )
        })
        .collect();
    for (k, a) in elems.iter().enumerate() {
        for b in &elems[k..] {
            if !br.bracket(a, b).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
