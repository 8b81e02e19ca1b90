//! Concrete algebras with a Dyer–Lashof action: the dual Steenrod algebra
//! `A_*` and the Thom spectrum homologies `H_*MO`, `H_*MU`.
//!
//! Every model stores, for each coordinate generator `g`, the total
//! operation `Σ_s Q^s g` as a truncated polynomial. The total operation is
//! multiplicative (Cartan formula), so `Q^s m` for a monomial `m` is the
//! degree `s + |m|` part of the product of the totals of its factors.
//! For `A_*` the coordinates are the conjugates `ξ̄_i`, on which the
//! operations are known in closed form; for `MO`/`MU` they are `a_k`/`b_k`.

mod obstruction;
mod subalg;

pub use obstruction::{bp_splitting_obstruction, cup_one_int, BpObstruction};
pub use subalg::{
    closure_check, membership, xn_growth, ChainLink, ExpRule, OpSelector, SubalgebraSpec, Violation,
};

use std::fmt;
use std::sync::Mutex;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::gf2poly::{binom2, Gens, Monomial, Poly, TruncatedSeries};
use crate::opcalc::{OpKind, OpPoly, OpSym, OpWord};

pub const DEFAULT_A_CAP: u32 = 31;
pub const DEFAULT_THOM_CAP: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    A,
    MO,
    MU,
}

impl ModelKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "A" | "A*" => Ok(ModelKind::A),
            "MO" => Ok(ModelKind::MO),
            "MU" => Ok(ModelKind::MU),
            other => Err(Error::Usage(format!(
                "unknown model `{other}` (expected A, MO or MU)"
            ))),
        }
    }

    pub fn default_cap(self) -> u32 {
        match self {
            ModelKind::A => DEFAULT_A_CAP,
            ModelKind::MO | ModelKind::MU => DEFAULT_THOM_CAP,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::A => "A",
            ModelKind::MO => "MO",
            ModelKind::MU => "MU",
        })
    }
}

/// A presented algebra with its operation tables, built once and then
/// read-only apart from a memo of monomial evaluations.
#[derive(Debug)]
pub struct ModelAlgebra {
    kind: ModelKind,
    cap: u32,
    gens: Gens,
    /// `ξ̄_i` named `xibar{i}`; only for `A`.
    bar_gens: Gens,
    /// `ξ̄_i` in ξ-coordinates, indexed by `i - 1`; only for `A`.
    conj: Vec<Poly>,
    /// `(1 + ξ_1 + ξ_2 + …)^{-1}`; only for `A`.
    steinberger: Poly,
    /// Total operation on each coordinate generator, in output coordinates.
    totals: Vec<Poly>,
    memo: Mutex<FxHashMap<(i64, Monomial), Poly>>,
}

impl ModelAlgebra {
    pub fn new(kind: ModelKind, cap: u32) -> Result<Self> {
        match kind {
            ModelKind::A => Self::dual_steenrod(cap),
            ModelKind::MO => Self::thom(kind, cap, 1),
            ModelKind::MU => Self::thom(kind, cap, 2),
        }
    }

    pub fn with_default_cap(kind: ModelKind) -> Result<Self> {
        Self::new(kind, kind.default_cap())
    }

    fn dual_steenrod(cap: u32) -> Result<Self> {
        if cap < 1 {
            return Err(Error::CapTooSmall { needed: 1, cap });
        }
        let mut gens = Gens::new();
        let mut bar_gens = Gens::new();
        let mut i = 1u32;
        while (1u64 << i) - 1 <= cap as u64 {
            let d = (1u32 << i) - 1;
            gens.push(format!("xi{i}"), d, 1);
            bar_gens.push(format!("xibar{i}"), d, 1);
            i += 1;
        }
        let top = gens.len();

        // ξ̄_n = Σ_{i=1}^{n} ξ_i^{2^{n-i}} ξ̄_{n-i}, with ξ̄_0 = 1.
        let mut conj: Vec<Poly> = Vec::with_capacity(top);
        for n in 1..=top {
            let mut acc = Poly::zero();
            for i in 1..=n {
                let xi_pow = gens.var(i as u32 - 1).pow(1 << (n - i), Some(cap));
                let prev = if n == i {
                    Poly::one()
                } else {
                    conj[n - i - 1].clone()
                };
                acc.add_assign(&xi_pow.mul(&prev, Some(cap)));
            }
            conj.push(acc);
        }

        let total_xi = (0..top as u32).fold(Poly::one(), |acc, id| acc.add(&gens.var(id)));
        let steinberger = TruncatedSeries::new(total_xi, cap).invert()?.into_body();

        let mut model = ModelAlgebra {
            kind: ModelKind::A,
            cap,
            gens,
            bar_gens,
            conj,
            steinberger,
            totals: Vec::new(),
            memo: Mutex::new(FxHashMap::default()),
        };
        let mut totals = Vec::with_capacity(top);
        for i in 1..=top as u32 {
            let d = (1i64 << i) - 1;
            let mut t = Poly::zero();
            for s in d..=(cap as i64 - d) {
                t.add_assign(&model.q_on_xibar(s, i)?);
            }
            totals.push(t);
        }
        model.totals = totals;
        Ok(model)
    }

    /// `unit` is the degree of the first generator: 1 for `a_i`, 2 for `b_i`.
    fn thom(kind: ModelKind, cap: u32, unit: u32) -> Result<Self> {
        let prefix = if kind == ModelKind::MO { "a" } else { "b" };
        let mut gens = Gens::new();
        for k in 1..=cap / unit {
            gens.push(format!("{prefix}_{k}"), unit * k, 1);
        }
        let top = gens.len() as i64;
        let g = |k: i64| -> Poly {
            match k {
                0 => Poly::one(),
                k if k <= top => gens.var(k as u32 - 1),
                _ => Poly::zero(),
            }
        };
        let total_series = (0..=top).fold(Poly::zero(), |acc, k| acc.add(&g(k)));
        let inv = TruncatedSeries::new(total_series, cap)
            .invert()?
            .into_body();

        let mut totals = Vec::with_capacity(top as usize);
        for k in 1..=top {
            // Numerator Σ_{n ≥ k} Σ_{u=0}^{k} binom(n-k+u-1, u) g_{n+u} g_{k-u};
            // each summand has degree unit·(n+k).
            let mut num = Poly::zero();
            let mut n = k;
            while unit as i64 * (n + k) <= cap as i64 {
                for u in 0..=k {
                    if binom2(n - k + u - 1, u) {
                        num.add_assign(&g(n + u).mul(&g(k - u), Some(cap)));
                    }
                }
                n += 1;
            }
            totals.push(num.mul(&inv, Some(cap)));
        }
        Ok(ModelAlgebra {
            kind,
            cap,
            gens,
            bar_gens: Gens::new(),
            conj: Vec::new(),
            steinberger: Poly::zero(),
            totals,
            memo: Mutex::new(FxHashMap::default()),
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn gens(&self) -> &Gens {
        &self.gens
    }

    /// Generators named `xibar{i}`, for printing in conjugate coordinates.
    pub fn bar_gens(&self) -> &Gens {
        &self.bar_gens
    }

    pub fn format(&self, p: &Poly) -> String {
        self.gens.fmt_poly(p)
    }

    /// Prints an element of `A_*` in ξ̄-coordinates.
    pub fn format_bar(&self, p: &Poly) -> String {
        self.bar_gens.fmt_poly(&self.conjugate(p))
    }

    pub fn gen(&self, index: u32) -> Result<Poly> {
        if index == 0 || index as usize > self.gens.len() {
            return Err(Error::CapTooSmall {
                needed: index as i64,
                cap: self.cap,
            });
        }
        Ok(self.gens.var(index - 1))
    }

    /// `ξ̄_i` in ξ-coordinates.
    pub fn xibar(&self, i: u32) -> Result<Poly> {
        self.require_a("conjugate generators")?;
        self.conj
            .get(i as usize - 1)
            .cloned()
            .ok_or(Error::CapTooSmall {
                needed: (1i64 << i) - 1,
                cap: self.cap,
            })
    }

    /// Resolves an identifier: a generator name, or `xibar{i}` for `A`.
    pub fn lookup(&self, name: &str) -> Result<Poly> {
        if let Some(id) = self.gens.lookup(name) {
            return Ok(self.gens.var(id));
        }
        if let Some(id) = self.bar_gens.lookup(name) {
            return Ok(self.conj[id as usize].clone());
        }
        Err(Error::UnknownGenerator(name.to_string()))
    }

    fn require_a(&self, what: &str) -> Result<()> {
        if self.kind != ModelKind::A {
            return Err(Error::Unsupported(format!(
                "{what} exist only in the dual Steenrod algebra"
            )));
        }
        Ok(())
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

    /// The antipode of `A_*`, extended multiplicatively from the `ξ̄_i`.
    pub fn conjugate(&self, p: &Poly) -> Poly {
        if self.kind != ModelKind::A {
            return p.clone();
        }
        p.substitute(|id| self.conj[id as usize].clone(), Some(self.cap))
    }

    /// `Q^s ξ_1`: the degree `s + 1` part of `(1 + ξ_1 + ξ_2 + …)^{-1}`.
    pub fn steinberger_q_on_xi1(&self, s: i64) -> Result<Poly> {
        self.require_a("Steinberger's series")?;
        if s < 1 {
            return Ok(Poly::zero());
        }
        self.check_cap(s + 1)?;
        Ok(self.steinberger.graded_component(s + 1))
    }

    /// `Q^s ξ̄_i`: equal to `Q^{s + 2^i - 2} ξ_1` when `s ≡ 0, -1 mod 2^i` and
    /// zero otherwise (and zero below the degree of `ξ̄_i`).
    pub fn q_on_xibar(&self, s: i64, i: u32) -> Result<Poly> {
        self.require_a("conjugate generators")?;
        if i == 0 {
            return Err(Error::Usage("conjugate generators start at xibar1".into()));
        }
        let period = 1i64 << i;
        let d = period - 1;
        if s < d {
            return Ok(Poly::zero());
        }
        self.check_cap(s + d)?;
        if i == 1 {
            return self.steinberger_q_on_xi1(s);
        }
        let r = s.rem_euclid(period);
        if r == 0 || r == period - 1 {
            self.steinberger_q_on_xi1(s + period - 2)
        } else {
            Ok(Poly::zero())
        }
    }

    /// Expresses `p` in the coordinates the totals are indexed by.
    fn action_coords(&self, p: &Poly) -> Poly {
        self.conjugate(p)
    }

    fn q_on_monomial(&self, s: i64, m: &Monomial) -> Result<Poly> {
        let target = s + m.degree() as i64;
        if s < m.degree() as i64 {
            return Ok(if m.is_one() && s == 0 {
                Poly::one()
            } else {
                Poly::zero()
            });
        }
        self.check_cap(target)?;
        let key = (s, m.clone());
        if let Some(hit) = self.memo.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let cap = Some(target as u32);
        let mut acc = Poly::one();
        for &(id, e) in m.factors() {
            acc = acc.mul(&self.totals[id as usize].pow(e, cap), cap);
            if acc.is_zero() {
                break;
            }
        }
        let out = acc.graded_component(target);
        self.memo.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// `Q^s p`, extended over sums and products.
    pub fn apply_upper(&self, s: i64, p: &Poly) -> Result<Poly> {
        let coords = self.action_coords(p);
        let mut out = Poly::zero();
        for m in coords.terms() {
            out.add_assign(&self.q_on_monomial(s, m)?);
        }
        Ok(out)
    }

    /// Applies one symbol; lower indices are converted degree by degree.
    pub fn apply_sym(&self, sym: OpSym, p: &Poly) -> Result<Poly> {
        match sym.kind {
            OpKind::UpperQ => self.apply_upper(sym.index, p),
            OpKind::LowerQ => {
                if sym.index < 0 {
                    return Err(Error::Usage(format!("`{sym}` has a negative lower index")));
                }
                let mut out = Poly::zero();
                let mut rest = p.clone();
                while let Some(m) = rest.terms().first() {
                    let d = m.degree() as i64;
                    let piece = rest.graded_component(d);
                    rest = rest.add(&piece);
                    out.add_assign(&self.apply_upper(d + sym.index, &piece)?);
                }
                Ok(out)
            }
            OpKind::SteenrodP => Err(Error::Unsupported(format!(
                "Steenrod operations are not modelled on {}",
                self.kind
            ))),
        }
    }

    /// Evaluates a word, innermost symbol first.
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

    pub fn apply_oppoly(&self, w: &OpPoly, p: &Poly) -> Result<Poly> {
        let mut out = Poly::zero();
        for word in w.words() {
            out.add_assign(&self.apply_word(word, p)?);
        }
        Ok(out)
    }

    /// `Q^j` applied to the `k`-th Thom generator, read off the series
    /// `Σ_j Q^j g_k = N_k · (Σ_n g_n)^{-1}`.
    pub fn priddy_q(&self, j: i64, k: u32) -> Result<Poly> {
        if self.kind == ModelKind::A {
            return Err(Error::Unsupported(
                "the series formula applies to MO and MU".into(),
            ));
        }
        if k == 0 {
            return Err(Error::Usage("generators are indexed from 1".into()));
        }
        let unit = self.unit_degree() as i64;
        let target = j + unit * k as i64;
        self.check_cap(target)?;
        Ok(self.totals[k as usize - 1].graded_component(target))
    }

    fn unit_degree(&self) -> u32 {
        match self.kind {
            ModelKind::MU => 2,
            _ => 1,
        }
    }

    /// Checks `Q^n a_k ≡ binom(n-1, k) a_{n+k}` (for MU: `Q^{2n} b_k` and
    /// `b_{n+k}`) modulo decomposables.
    pub fn leading_term_check(&self, n: i64, k: u32) -> Result<bool> {
        let unit = self.unit_degree() as i64;
        let value = self.priddy_q(unit * n, k)?;
        let idx = n + k as i64;
        let has = if idx >= 1 && idx as usize <= self.gens.len() {
            value.contains(&self.gens.monomial(idx as u32 - 1, 1))
        } else {
            false
        };
        Ok(has == binom2(n - 1, k as i64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(cap: u32) -> ModelAlgebra {
        ModelAlgebra::new(ModelKind::A, cap).unwrap()
    }

    #[test]
    fn conjugates() {
        let m = a(31);
        assert_eq!(m.format(&m.xibar(1).unwrap()), "xi1");
        assert_eq!(m.format(&m.xibar(2).unwrap()), "xi1^3 + xi2");
        let xi3 = m.gen(3).unwrap();
        assert_eq!(m.conjugate(&m.conjugate(&xi3)), xi3);
    }

    #[test]
    fn steinberger_generators() {
        let m = a(31);
        let xi1 = m.gen(1).unwrap();
        assert_eq!(m.steinberger_q_on_xi1(1).unwrap(), xi1.mul(&xi1, None));
        assert_eq!(m.steinberger_q_on_xi1(2).unwrap(), m.xibar(2).unwrap());
        assert_eq!(m.steinberger_q_on_xi1(6).unwrap(), m.xibar(3).unwrap());
        assert_eq!(
            m.steinberger_q_on_xi1(40),
            Err(Error::CapTooSmall {
                needed: 41,
                cap: 31
            })
        );
    }

    #[test]
    fn operations_on_conjugates() {
        let m = a(31);
        assert_eq!(m.q_on_xibar(4, 2).unwrap(), m.xibar(3).unwrap());
        assert!(m.q_on_xibar(5, 2).unwrap().is_zero());
        for i in 1..=3 {
            assert_eq!(
                m.q_on_xibar(1 << i, i).unwrap(),
                m.xibar(i + 1).unwrap(),
                "Q_1 xibar{i}"
            );
        }
        // The rule reproduces squaring at the degree of xibar_i.
        for i in 1..=4u32 {
            let xb = m.xibar(i).unwrap();
            assert_eq!(
                m.q_on_xibar((1 << i) - 1, i).unwrap(),
                xb.mul(&xb, None),
                "Q^|xibar{i}| xibar{i}"
            );
        }
    }

    #[test]
    fn action_on_squares_and_unit() {
        let m = a(31);
        let xi1 = m.gen(1).unwrap();
        let sq = xi1.mul(&xi1, None);
        let lhs = m
            .apply_upper(8, &sq)
            .unwrap()
            .add(&xi1.pow(4, None).mul(&m.apply_upper(4, &sq).unwrap(), None));
        assert!(lhs.is_zero());
        assert!(m.apply_upper(1, &Poly::one()).unwrap().is_zero());
        assert!(m.apply_upper(0, &Poly::one()).unwrap().is_one());
    }

    #[test]
    fn priddy_examples() {
        let mu = ModelAlgebra::new(ModelKind::MU, 12).unwrap();
        assert_eq!(
            mu.format(&mu.priddy_q(4, 1).unwrap()),
            "b_1^3 + b_1 b_2 + b_3"
        );
        assert_eq!(
            mu.format(&mu.priddy_q(6, 2).unwrap()),
            "b_1 b_2^2 + b_1 b_4 + b_2 b_3 + b_5"
        );
        let mo = ModelAlgebra::new(ModelKind::MO, 12).unwrap();
        let a1 = mo.gen(1).unwrap();
        assert_eq!(mo.priddy_q(1, 1).unwrap(), a1.mul(&a1, None));
        assert!(mo.leading_term_check(4, 2).unwrap());
        assert!(mu.leading_term_check(4, 1).unwrap());
        assert!(mu
            .priddy_q(8, 1)
            .unwrap()
            .contains(&mu.gens().monomial(4, 1)));
        assert!(mo.leading_term_check(3, 1).unwrap());
        assert!(!mo
            .priddy_q(3, 1)
            .unwrap()
            .contains(&mo.gens().monomial(3, 1)));
    }
}
