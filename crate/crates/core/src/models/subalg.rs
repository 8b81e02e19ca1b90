//! Monomial subalgebras of `A_*` described by per-variable exponent rules in
//! conjugate coordinates, and closure checks against Dyer–Lashof operations.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2poly::{Monomial, Poly};
use crate::models::{ModelAlgebra, ModelKind};
use crate::opcalc::{OpKind, OpSym};

/// Allowed exponents of one `ξ̄_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpRule {
    /// Exponents must be multiples of the given step.
    Multiple(u32),
    Forbidden,
}

impl ExpRule {
    fn admits(self, e: u32) -> bool {
        match self {
            ExpRule::Multiple(step) => e.is_multiple_of(step),
            ExpRule::Forbidden => e == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubalgebraSpec {
    name: String,
    /// Rules for `ξ̄_1, ξ̄_2, …`; variables past the end use `tail`.
    head: Vec<ExpRule>,
    tail: ExpRule,
}

impl SubalgebraSpec {
    pub fn new(name: impl Into<String>, head: Vec<ExpRule>, tail: ExpRule) -> Self {
        Self {
            name: name.into(),
            head,
            tail,
        }
    }

    /// Connective Morava K-theory: `F_2[ξ̄_1, …, ξ̄_n, ξ̄_{n+1}^2, ξ̄_{n+2}, …]`.
    /// `k(0)` is `HZ`.
    pub fn k(n: u32) -> Self {
        let mut head = vec![ExpRule::Multiple(1); n as usize];
        head.push(ExpRule::Multiple(2));
        Self::new(format!("k({n})"), head, ExpRule::Multiple(1))
    }

    /// Integral connective Morava K-theory:
    /// `F_2[ξ̄_1^2, ξ̄_2, …, ξ̄_n, ξ̄_{n+1}^2, ξ̄_{n+2}, …]`.
    pub fn kz(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Usage("kZ(n) is defined for n >= 1".into()));
        }
        let mut head = vec![ExpRule::Multiple(2)];
        head.extend(std::iter::repeat_n(ExpRule::Multiple(1), n as usize - 1));
        head.push(ExpRule::Multiple(2));
        Ok(Self::new(format!("kZ({n})"), head, ExpRule::Multiple(1)))
    }

    /// `H_*BP = F_2[ξ_1^2, ξ_2^2, …]`: every exponent even. Squaring is the
    /// Frobenius, so the squares subalgebra reads the same in either basis.
    pub fn bp() -> Self {
        Self::new("BP", Vec::new(), ExpRule::Multiple(2))
    }

    /// Image of `H_*X(2)`: `F_2[ξ_1^2]`.
    pub fn x2_image() -> Self {
        Self::new("X2image", vec![ExpRule::Multiple(2)], ExpRule::Forbidden)
    }

    /// `F_2[ξ̄_1^2, …, ξ̄_k^2]`.
    pub fn squares_up_to(k: u32) -> Self {
        Self::new(
            format!("F2[xibar1^2..xibar{k}^2]"),
            vec![ExpRule::Multiple(2); k as usize],
            ExpRule::Forbidden,
        )
    }

    /// Parses `k(n)`, `kZ(n)`, `BP` or `X2image`.
    pub fn parse(name: &str) -> Result<Self> {
        let name = name.trim();
        let arg = |prefix: &str| -> Option<Result<u32>> {
            let inner = name.strip_prefix(prefix)?.strip_suffix(')')?;
            Some(
                inner
                    .trim()
                    .parse()
                    .map_err(|_| Error::Usage(format!("bad subalgebra index in `{name}`"))),
            )
        };
        if let Some(n) = arg("k(") {
            return Ok(Self::k(n?));
        }
        if let Some(n) = arg("kZ(") {
            return Self::kz(n?);
        }
        match name {
            "BP" => Ok(Self::bp()),
            "X2image" | "X(2)" => Ok(Self::x2_image()),
            other => Err(Error::Usage(format!(
                "unknown subalgebra `{other}` (expected k(n), kZ(n), BP, X2image)"
            ))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Rule for `ξ̄_i`, `i >= 1`.
    pub fn rule(&self, i: u32) -> ExpRule {
        self.head.get(i as usize - 1).copied().unwrap_or(self.tail)
    }

    /// Whether a monomial in ξ̄-coordinates (ids `i - 1`) satisfies every rule.
    pub fn admits(&self, m: &Monomial) -> bool {
        m.factors()
            .iter()
            .all(|&(id, e)| self.rule(id + 1).admits(e))
    }

    /// Polynomial generators `ξ̄_i^step` of degree at most `maxdeg`, as
    /// `(i, step)`.
    pub fn generators(&self, maxdeg: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        let mut i = 1u32;
        while (1u64 << i) - 1 <= maxdeg as u64 {
            if let ExpRule::Multiple(step) = self.rule(i) {
                if step as u64 * ((1u64 << i) - 1) <= maxdeg as u64 {
                    out.push((i, step));
                }
            }
            i += 1;
        }
        out
    }
}

impl fmt::Display for SubalgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Membership of an element of `A_*` given in ξ-coordinates.
pub fn membership(model: &ModelAlgebra, sub: &SubalgebraSpec, p: &Poly) -> bool {
    model.conjugate(p).terms().iter().all(|m| sub.admits(m))
}

/// Operations a closure check applies to each generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpSelector {
    Sym(OpSym),
    /// Every `Q^s` whose image lies within the degree bound.
    AllUpper,
}

impl OpSelector {
    /// Parses a comma-separated list such as `Q_1,Q^4`, or `all`.
    pub fn parse_list(text: &str) -> Result<Vec<OpSelector>> {
        text.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                if t.eq_ignore_ascii_case("all") {
                    return Ok(OpSelector::AllUpper);
                }
                let word = crate::parse::parse_op_word(t)?;
                match word.symbols() {
                    [sym] if sym.kind != OpKind::SteenrodP => Ok(OpSelector::Sym(*sym)),
                    _ => Err(Error::Usage(format!(
                        "`{t}` is not a single Dyer-Lashof operation"
                    ))),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// The generator, in ξ-coordinates.
    pub generator: Poly,
    pub op: OpSym,
    pub image: Poly,
    /// `generator -> image` printed in ξ̄-coordinates.
    pub text: String,
}

/// Applies each operation to each polynomial generator of `sub` of degree at
/// most `maxdeg` and reports the images that leave `sub`. Checking the
/// generators suffices: the Cartan formula carries closure to products.
pub fn closure_check(
    model: &ModelAlgebra,
    sub: &SubalgebraSpec,
    ops: &[OpSelector],
    maxdeg: u32,
) -> Result<Vec<Violation>> {
    if model.kind() != ModelKind::A {
        return Err(Error::Unsupported("closure checks run in A".into()));
    }
    if maxdeg > model.cap() {
        return Err(Error::CapTooSmall {
            needed: maxdeg as i64,
            cap: model.cap(),
        });
    }
    let mut out = Vec::new();
    for (i, step) in sub.generators(maxdeg) {
        let g = model.xibar(i)?.pow(step, Some(model.cap()));
        let deg = (step * ((1 << i) - 1)) as i64;
        let mut upper = Vec::new();
        for sel in ops {
            match *sel {
                OpSelector::Sym(sym) => {
                    let s = match sym.kind {
                        OpKind::LowerQ => deg + sym.index,
                        _ => sym.index,
                    };
                    upper.push((sym, s));
                }
                OpSelector::AllUpper => {
                    upper.extend((deg..=maxdeg as i64 - deg).map(|s| (OpSym::upper(s), s)));
                }
            }
        }
        for (sym, s) in upper {
            if s + deg > maxdeg as i64 {
                continue;
            }
            let image = model.apply_upper(s, &g)?;
            if !membership(model, sub, &image) {
                out.push(Violation {
                    text: format!("{} -> {}", model.format_bar(&g), model.format_bar(&image)),
                    generator: g.clone(),
                    op: sym,
                    image,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainLink {
    pub element: Poly,
    /// The same element predicted by the closed-form rule on `ξ̄_i`.
    pub by_rule: Poly,
    pub degree: u32,
    /// Not in the subalgebra generated by the earlier links.
    pub escapes_prefix: bool,
}

/// Iterates `Q_2` from `ξ_1^2` while the degree stays within `maxdeg`.
pub fn xn_growth(model: &ModelAlgebra, maxdeg: u32) -> Result<Vec<ChainLink>> {
    if maxdeg < 2 {
        return Err(Error::Usage("the chain starts in degree 2".into()));
    }
    if maxdeg > model.cap() {
        return Err(Error::CapTooSmall {
            needed: maxdeg as i64,
            cap: model.cap(),
        });
    }
    let xi1 = model.gen(1)?;
    let mut cur = xi1.mul(&xi1, None);
    let mut chain = Vec::new();
    let mut i = 1u32;
    loop {
        let degree = 2 * ((1u32 << i) - 1);
        if degree > maxdeg {
            break;
        }
        // Q_2(ξ̄_{i-1}^2) = (Q^{|ξ̄_{i-1}|+1} ξ̄_{i-1})^2 by the Cartan formula.
        let by_rule = if i == 1 {
            xi1.mul(&xi1, None)
        } else {
            let prev_deg = (1i64 << (i - 1)) - 1;
            model.q_on_xibar(prev_deg + 1, i - 1)?.frobenius()
        };
        let prefix = SubalgebraSpec::squares_up_to(i - 1);
        chain.push(ChainLink {
            escapes_prefix: !membership(model, &prefix, &cur),
            element: cur.clone(),
            by_rule,
            degree,
        });
        if 2 * degree + 2 > maxdeg {
            break;
        }
        cur = model.apply_sym(OpSym::lower(2), &cur)?;
        i += 1;
    }
    Ok(chain)
}
