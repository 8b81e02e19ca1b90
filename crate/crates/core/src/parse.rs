//! Expression language.
//!
//! ```text
//! expr    = term ('+' term)*
//! term    = factor ('*'? factor)*
//! factor  = op* power
//! power   = primary ('^' int)?
//! primary = ident | int | '(' expr ')' | '[' expr ',' expr ']'
//! op      = ('Q^' int | 'Q_' int | 'P_' int | 'Sq_1') ('^' int)?
//! ```
//!
//! Operator words bind tighter than `*`, which binds tighter than `+`;
//! `Q_1^2 x` is `Q_1 Q_1 x`.

use std::fmt;

use crate::error::{Error, Result};
use crate::opcalc::{OpKind, OpPoly, OpSym, OpWord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Ident(String),
    Int(i64),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    /// Outermost symbol first.
    Apply(OpWord, Box<Expr>),
    Bracket(Box<Expr>, Box<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Ident(s) => f.write_str(s),
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Add(a, b) => write!(f, "{a} + {b}"),
            Expr::Mul(a, b) => {
                let wrap = |e: &Expr| matches!(e, Expr::Add(..));
                match (wrap(a), wrap(b)) {
                    (false, false) => write!(f, "{a} * {b}"),
                    (true, false) => write!(f, "({a}) * {b}"),
                    (false, true) => write!(f, "{a} * ({b})"),
                    (true, true) => write!(f, "({a}) * ({b})"),
                }
            }
            Expr::Pow(a, e) => match **a {
                Expr::Ident(_) | Expr::Int(_) | Expr::Bracket(..) => write!(f, "{a}^{e}"),
                _ => write!(f, "({a})^{e}"),
            },
            Expr::Apply(w, a) => match **a {
                Expr::Add(..) | Expr::Mul(..) => write!(f, "{w} ({a})"),
                _ => write!(f, "{w} {a}"),
            },
            Expr::Bracket(a, b) => write!(f, "[{a}, {b}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Op(OpSym),
    Ident(String),
    Int(i64),
    Plus,
    Star,
    Caret,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let read_int = |i: &mut usize, allow_sign: bool| -> Option<i64> {
        let start = *i;
        if allow_sign && *i < b.len() && b[*i] == b'-' {
            *i += 1;
        }
        let digits = *i;
        while *i < b.len() && b[*i].is_ascii_digit() {
            *i += 1;
        }
        if *i == digits {
            *i = start;
            return None;
        }
        text[start..*i].parse().ok()
    };
    while i < b.len() {
        let c = b[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'*' => out.push((start, Tok::Star)),
            b'^' => out.push((start, Tok::Caret)),
            b'(' => out.push((start, Tok::LParen)),
            b')' => out.push((start, Tok::RParen)),
            b'[' => out.push((start, Tok::LBrack)),
            b']' => out.push((start, Tok::RBrack)),
            b',' => out.push((start, Tok::Comma)),
            b'0'..=b'9' => {
                let n =
                    read_int(&mut i, false).ok_or_else(|| syntax(start, "integer out of range"))?;
                out.push((start, Tok::Int(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                if c == b'Q' && b.get(i + 1) == Some(&b'^') {
                    i += 2;
                    let n = read_int(&mut i, true)
                        .ok_or_else(|| syntax(i, "expected an integer after `Q^`"))?;
                    out.push((start, Tok::Op(OpSym::upper(n))));
                    continue;
                }
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                out.push((start, classify(word)));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(syntax(i, format!("unexpected character `{ch}`")));
            }
        }
        i += 1;
    }
    Ok(out)
}

/// `Q_<int>`, `P_<int>` and `Sq_1` are operators; anything else is a name.
/// The cup-1 square `Sq_1` acts on homology as `Q_1`.
fn classify(word: &str) -> Tok {
    let num = |rest: &str| -> Option<i64> {
        (!rest.is_empty() && rest.bytes().all(|c| c.is_ascii_digit()))
            .then(|| rest.parse().ok())
            .flatten()
    };
    if word == "Sq_1" {
        return Tok::Op(OpSym::lower(1));
    }
    if let Some(n) = word.strip_prefix("Q_").and_then(num) {
        return Tok::Op(OpSym::lower(n));
    }
    if let Some(n) = word.strip_prefix("P_").and_then(num) {
        return Tok::Op(OpSym::p(n));
    }
    Tok::Ident(word.to_string())
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let at = self.offset();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(syntax(at, format!("expected {what}"))),
        }
    }

    fn exponent(&mut self) -> Result<Option<u32>> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(None);
        }
        self.pos += 1;
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) if n >= 0 && n <= u32::MAX as i64 => Ok(Some(n as u32)),
            _ => Err(syntax(at, "expected a nonnegative integer exponent")),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn starts_factor(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Op(_) | Tok::Ident(_) | Tok::Int(_) | Tok::LParen | Tok::LBrack)
        )
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else if !self.starts_factor() {
                break;
            }
            let rhs = self.factor()?;
            lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn ops(&mut self) -> Result<Vec<OpSym>> {
        let mut syms = Vec::new();
        while let Some(Tok::Op(sym)) = self.peek().cloned() {
            self.pos += 1;
            let reps = self.exponent()?.unwrap_or(1);
            syms.extend(std::iter::repeat_n(sym, reps as usize));
        }
        Ok(syms)
    }

    fn factor(&mut self) -> Result<Expr> {
        let syms = self.ops()?;
        let base = self.primary()?;
        let base = match self.exponent()? {
            Some(e) => Expr::Pow(Box::new(base), e),
            None => base,
        };
        Ok(if syms.is_empty() {
            base
        } else {
            Expr::Apply(OpWord(syms), Box::new(base))
        })
    }

    fn primary(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Ident(s)) => Ok(Expr::Ident(s)),
            Some(Tok::Int(n)) => Ok(Expr::Int(n)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::LBrack) => {
                let a = self.expr()?;
                self.expect(Tok::Comma, "`,` inside a bracket")?;
                let b = self.expr()?;
                self.expect(Tok::RBrack, "`]`")?;
                Ok(Expr::Bracket(Box::new(a), Box::new(b)))
            }
            Some(_) => Err(syntax(at, "expected a generator, integer, `(` or `[`")),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.offset(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Parses a bare operation word such as `Q^4 Q^1`, `Q_3 Q_1` or
/// `P_2 Q^4 Q^1`. The text `1` is the empty word.
pub fn parse_op_word(text: &str) -> Result<OpWord> {
    let toks = lex(text)?;
    if toks.len() == 1 && toks[0].1 == Tok::Int(1) {
        return Ok(OpWord::identity());
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let syms = p.ops()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.offset(), "expected an operation symbol"));
    }
    if syms.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(OpWord(syms))
}

/// Parses a `+`-separated sum of operation words; `0` is the empty sum.
pub fn parse_op_poly(text: &str) -> Result<OpPoly> {
    if text.trim() == "0" {
        return Ok(OpPoly::zero());
    }
    let mut out = OpPoly::zero();
    let mut offset = 0;
    for part in text.split('+') {
        let w = parse_op_word(part).map_err(|e| match e {
            Error::Syntax { pos, msg } => syntax(pos + offset, msg),
            other => other,
        })?;
        out.toggle(w);
        offset += part.len() + 1;
    }
    Ok(out)
}

/// Semantics for [`Expr`] in a particular algebra.
pub trait Context {
    type Value: Clone;
    fn ident(&self, name: &str) -> Result<Self::Value>;
    /// Integers are read mod 2.
    fn int(&self, n: i64) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn pow(&self, a: &Self::Value, e: u32) -> Result<Self::Value>;
    fn apply(&self, sym: OpSym, a: &Self::Value) -> Result<Self::Value>;
    fn bracket(&self, _a: &Self::Value, _b: &Self::Value) -> Result<Self::Value> {
        Err(Error::Unsupported(
            "brackets are only defined in E_n algebras (--flavor En)".into(),
        ))
    }
}

pub fn eval<C: Context>(ctx: &C, e: &Expr) -> Result<C::Value> {
    match e {
        Expr::Ident(s) => ctx.ident(s),
        Expr::Int(n) => ctx.int(*n),
        Expr::Add(a, b) => ctx.add(&eval(ctx, a)?, &eval(ctx, b)?),
        Expr::Mul(a, b) => ctx.mul(&eval(ctx, a)?, &eval(ctx, b)?),
        Expr::Pow(a, k) => ctx.pow(&eval(ctx, a)?, *k),
        Expr::Apply(w, a) => {
            let mut v = eval(ctx, a)?;
            for &sym in w.symbols().iter().rev() {
                v = ctx.apply(sym, &v)?;
            }
            Ok(v)
        }
        Expr::Bracket(a, b) => ctx.bracket(&eval(ctx, a)?, &eval(ctx, b)?),
    }
}

/// Whether every symbol in the word has the given kind.
pub fn word_kind(w: &OpWord) -> Option<OpKind> {
    let first = w.symbols().first()?.kind;
    w.all_of(first).then_some(first)
}
