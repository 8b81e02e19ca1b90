//! Operation words: admissibility, Adem rewriting in upper and lower
//! indexing, index conversion, suspension and weight-2 operation tables.
//!
//! Words are written outermost first: `[Q^a, Q^b]` is the composite
//! `Q^a ∘ Q^b`, so the last symbol acts first.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2poly::binom2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpKind {
    UpperQ,
    LowerQ,
    SteenrodP,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpSym {
    pub kind: OpKind,
    pub index: i64,
}

impl OpSym {
    pub fn upper(s: i64) -> Self {
        Self {
            kind: OpKind::UpperQ,
            index: s,
        }
    }

    pub fn lower(i: i64) -> Self {
        Self {
            kind: OpKind::LowerQ,
            index: i,
        }
    }

    pub fn p(d: i64) -> Self {
        Self {
            kind: OpKind::SteenrodP,
            index: d,
        }
    }
}

impl fmt::Display for OpSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            OpKind::UpperQ => write!(f, "Q^{}", self.index),
            OpKind::LowerQ => write!(f, "Q_{}", self.index),
            OpKind::SteenrodP => write!(f, "P_{}", self.index),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpWord(pub Vec<OpSym>);

impl OpWord {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn upper(indices: &[i64]) -> Self {
        Self(indices.iter().map(|&s| OpSym::upper(s)).collect())
    }

    pub fn lower(indices: &[i64]) -> Self {
        Self(indices.iter().map(|&i| OpSym::lower(i)).collect())
    }

    pub fn symbols(&self) -> &[OpSym] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn all_of(&self, kind: OpKind) -> bool {
        self.0.iter().all(|s| s.kind == kind)
    }

    pub fn indices(&self) -> Vec<i64> {
        self.0.iter().map(|s| s.index).collect()
    }

    pub fn concat(&self, other: &OpWord) -> OpWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        OpWord(v)
    }
}

impl fmt::Display for OpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A GF(2) sum of operation words.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct OpPoly {
    words: BTreeSet<OpWord>,
}

impl OpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_word(w: OpWord) -> Self {
        let mut p = Self::zero();
        p.toggle(w);
        p
    }

    pub fn toggle(&mut self, w: OpWord) {
        if !self.words.remove(&w) {
            self.words.insert(w);
        }
    }

    pub fn add(&self, other: &OpPoly) -> OpPoly {
        let words = self
            .words
            .symmetric_difference(&other.words)
            .cloned()
            .collect();
        OpPoly { words }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &OpWord> {
        self.words.iter()
    }
}

impl FromIterator<OpWord> for OpPoly {
    fn from_iter<I: IntoIterator<Item = OpWord>>(iter: I) -> Self {
        let mut p = OpPoly::zero();
        for w in iter {
            p.toggle(w);
        }
        p
    }
}

impl fmt::Display for OpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.words.is_empty() {
            return f.write_str("0");
        }
        for (k, w) in self.words.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

pub fn is_admissible_upper(word: &[i64]) -> bool {
    word.windows(2).all(|p| p[0] <= 2 * p[1])
}

/// Lower-indexed words are admissible when indices never decrease from the
/// outside in.
pub fn is_admissible_lower(word: &[i64]) -> bool {
    word.windows(2).all(|p| p[0] <= p[1])
}

pub fn excess(word: &[i64]) -> Result<i64> {
    let (first, rest) = word.split_first().ok_or(Error::EmptyWord)?;
    Ok(first - rest.iter().sum::<i64>())
}

/// Index pairs `(outer, inner)` of the upper Adem expansion of `Q^r Q^s`.
pub fn adem_pairs_upper(r: i64, s: i64) -> Result<Vec<(i64, i64)>> {
    if r <= 2 * s {
        return Err(Error::NotInadmissible { r, s });
    }
    // binom(i-s-1, 2i-r) vanishes unless 2i >= r and i-s-1 >= 2i-r.
    let lo = (r + 1).div_euclid(2);
    let hi = r - s - 1;
    Ok((lo..=hi)
        .filter(|&i| binom2(i - s - 1, 2 * i - r))
        .map(|i| (s + r - i, i))
        .collect())
}

pub fn adem_expand_upper(r: i64, s: i64) -> Result<OpPoly> {
    let pairs = adem_pairs_upper(r, s)?;
    let out: OpPoly = pairs.iter().map(|&(a, b)| OpWord::upper(&[a, b])).collect();
    debug_assert!(out.words().all(|w| is_admissible_upper(&w.indices())));
    Ok(out)
}

/// Index pairs of the lower Adem expansion of `Q_r Q_s`, `r > s`. Terms whose
/// outer index would be negative are dropped.
pub fn adem_pairs_lower(r: i64, s: i64) -> Result<Vec<(i64, i64)>> {
    if r <= s || s < 0 {
        return Err(Error::NotInadmissible { r, s });
    }
    let lo = (r + s + 1).div_euclid(2);
    let hi = r - 1;
    Ok((lo..=hi)
        .filter(|&j| binom2(j - s - 1, 2 * j - r - s))
        .map(|j| (r + 2 * s - 2 * j, j))
        .filter(|&(a, _)| a >= 0)
        .collect())
}

pub fn adem_expand_lower(r: i64, s: i64) -> Result<OpPoly> {
    let pairs = adem_pairs_lower(r, s)?;
    Ok(pairs.iter().map(|&(a, b)| OpWord::lower(&[a, b])).collect())
}

/// Which inadmissible pair a rewriting step acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    LeftmostFirst,
    RightmostFirst,
}

/// Rewrites a word to a sum of words without bad pairs.
///
/// Each step replaces an adjacent pair `(a, b)` by pairs `(a', b')` with
/// `b' > b` and leaves everything to the right alone, so words strictly grow
/// when compared from the right. Popping the smallest pending word in that
/// order means no word is ever revisited, and coefficients cancel exactly.
fn rewrite(
    word: &[i64],
    strategy: Strategy,
    bad: impl Fn(i64, i64) -> bool,
    expand: impl Fn(i64, i64) -> Vec<(i64, i64)>,
) -> BTreeSet<Vec<i64>> {
    let key = |w: &[i64]| w.iter().rev().copied().collect::<Vec<_>>();
    let mut pending: BTreeSet<Vec<i64>> = BTreeSet::new();
    pending.insert(key(word));
    let mut done: BTreeSet<Vec<i64>> = BTreeSet::new();
    while let Some(rk) = pending.pop_first() {
        let w: Vec<i64> = rk.iter().rev().copied().collect();
        let mut positions = (0..w.len().saturating_sub(1)).filter(|&k| bad(w[k], w[k + 1]));
        let pos = match strategy {
            Strategy::LeftmostFirst => positions.next(),
            Strategy::RightmostFirst => positions.last(),
        };
        match pos {
            None => {
                if !done.remove(&w) {
                    done.insert(w);
                }
            }
            Some(k) => {
                for (a, b) in expand(w[k], w[k + 1]) {
                    let mut nw = w.clone();
                    nw[k] = a;
                    nw[k + 1] = b;
                    let nk = key(&nw);
                    if !pending.remove(&nk) {
                        pending.insert(nk);
                    }
                }
            }
        }
    }
    done
}

/// Admissible normal form of an upper-indexed word (given by its indices).
pub fn normalize_upper_indices(word: &[i64], strategy: Strategy) -> BTreeSet<Vec<i64>> {
    rewrite(
        word,
        strategy,
        |a, b| a > 2 * b,
        |a, b| adem_pairs_upper(a, b).unwrap_or_default(),
    )
}

pub fn normalize_upper(word: &OpWord) -> Result<OpPoly> {
    normalize_upper_with(word, Strategy::LeftmostFirst)
}

pub fn normalize_upper_with(word: &OpWord, strategy: Strategy) -> Result<OpPoly> {
    if !word.all_of(OpKind::UpperQ) {
        return Err(Error::Usage(format!(
            "`{word}` mixes symbol kinds; expected only upper-indexed Q"
        )));
    }
    Ok(normalize_upper_indices(&word.indices(), strategy)
        .into_iter()
        .map(|w| OpWord::upper(&w))
        .collect())
}

/// Lower-indexed normal form, rewriting `Q_r Q_s` with `r > s`.
pub fn normalize_lower_indices(word: &[i64]) -> BTreeSet<Vec<i64>> {
    rewrite(
        word,
        Strategy::LeftmostFirst,
        |a, b| a > b,
        |a, b| adem_pairs_lower(a, b).unwrap_or_default(),
    )
}

pub fn normalize_lower(word: &OpWord) -> Result<OpPoly> {
    if !word.all_of(OpKind::LowerQ) || word.0.iter().any(|s| s.index < 0) {
        return Err(Error::Usage(format!(
            "`{word}` is not a word of lower-indexed Q with nonnegative indices"
        )));
    }
    Ok(normalize_lower_indices(&word.indices())
        .into_iter()
        .map(|w| OpWord::lower(&w))
        .collect())
}

/// Converts a lower-indexed word acting on a class of degree `base_degree`
/// to upper indexing, returning the upper word and the final degree.
pub fn to_upper(word: &OpWord, base_degree: i64) -> Result<(OpWord, i64)> {
    if !word.all_of(OpKind::LowerQ) {
        return Err(Error::Usage(format!("`{word}` is not lower-indexed")));
    }
    let mut m = base_degree;
    let mut out = vec![0; word.len()];
    for (k, sym) in word.0.iter().enumerate().rev() {
        out[k] = m + sym.index;
        m = 2 * m + sym.index;
    }
    Ok((OpWord::upper(&out), m))
}

pub fn to_lower(word: &OpWord, base_degree: i64) -> Result<OpWord> {
    if !word.all_of(OpKind::UpperQ) {
        return Err(Error::Usage(format!("`{word}` is not upper-indexed")));
    }
    let mut m = base_degree;
    let mut out = vec![0; word.len()];
    for (k, sym) in word.0.iter().enumerate().rev() {
        let i = sym.index - m;
        if i < 0 {
            return Err(Error::UnstableWord {
                position: k,
                index: i,
            });
        }
        out[k] = i;
        m += sym.index;
    }
    Ok(OpWord::lower(&out))
}

/// Applies the suspension `times` times: `σ Q_0 = 0`, `σ Q_r = Q_{r-1}`.
pub fn suspend(p: &OpPoly, times: u32) -> Result<OpPoly> {
    let mut out = OpPoly::zero();
    for w in p.words() {
        if !w.all_of(OpKind::LowerQ) {
            return Err(Error::Usage(format!(
                "suspension acts on lower-indexed words, got `{w}`"
            )));
        }
        let t = times as i64;
        if w.0.iter().all(|s| s.index >= t) {
            out.toggle(OpWord(
                w.0.iter().map(|s| OpSym::lower(s.index - t)).collect(),
            ));
        }
    }
    Ok(out)
}

/// Operadic level of an E_n structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(n) => write!(f, "{n}"),
            Level::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight2Row {
    pub op: OpSym,
    pub target_degree: i64,
    /// Image under `σ^1, σ^2, …`; `None` means the suspended operation is 0.
    pub suspensions: Vec<Option<OpSym>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weight2Table {
    pub m: i64,
    pub n: Level,
    pub rows: Vec<Weight2Row>,
}

/// Rows shown for the stable (n = ∞) table.
pub const STABLE_WINDOW: i64 = 8;

/// Weight-2 operations on a class of degree `m`: one per cell of the stunted
/// projective space `RP^{m+n-1}_m`.
pub fn weight2_table(m: i64, n: Level) -> Result<Weight2Table> {
    if m < 0 {
        return Err(Error::Usage("source degree must be nonnegative".into()));
    }
    let rows = match n {
        Level::Finite(0) => return Err(Error::Usage("operadic level must be at least 1".into())),
        Level::Finite(n) => (0..n as i64)
            .map(|i| Weight2Row {
                op: OpSym::lower(i),
                target_degree: 2 * m + i,
                suspensions: (1..=n as i64)
                    .map(|k| (i >= k).then(|| OpSym::lower(i - k)))
                    .collect(),
            })
            .collect(),
        Level::Infinite => (m..m + STABLE_WINDOW)
            .map(|r| Weight2Row {
                op: OpSym::upper(r),
                target_degree: m + r,
                suspensions: vec![Some(OpSym::upper(r))],
            })
            .collect(),
    };
    Ok(Weight2Table { m, n, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(p: &OpPoly) -> String {
        p.to_string()
    }

    #[test]
    fn admissibility_and_excess() {
        assert!(is_admissible_upper(&[3, 2]));
        assert!(!is_admissible_upper(&[5, 2]));
        assert!(is_admissible_upper(&[]));
        assert_eq!(excess(&[3, 2]), Ok(1));
        assert_eq!(excess(&[5]), Ok(5));
        assert_eq!(excess(&[4, 2, 1]), Ok(1));
        assert_eq!(excess(&[]), Err(Error::EmptyWord));
    }

    #[test]
    fn upper_adem_examples() {
        assert_eq!(show(&adem_expand_upper(4, 1).unwrap()), "Q^3 Q^2");
        assert_eq!(show(&adem_expand_upper(6, 2).unwrap()), "Q^5 Q^3");
        assert!(adem_expand_upper(5, 2).unwrap().is_zero());
        assert_eq!(
            adem_expand_upper(4, 2),
            Err(Error::NotInadmissible { r: 4, s: 2 })
        );
    }

    #[test]
    fn normalize_examples() {
        let n = |w: &[i64]| normalize_upper(&OpWord::upper(w)).unwrap().to_string();
        assert_eq!(n(&[4, 1]), "Q^3 Q^2");
        assert_eq!(n(&[3, 2]), "Q^3 Q^2");
        for k in 1..=10 {
            assert_eq!(
                normalize_upper(&OpWord::upper(&[2 * k + 2, k])).unwrap(),
                OpPoly::from_word(OpWord::upper(&[2 * k + 1, k + 1]))
            );
        }
        let nf = normalize_upper(&OpWord::upper(&[9, 4, 2])).unwrap();
        assert!(nf.words().all(|w| is_admissible_upper(&w.indices())));
    }

    #[test]
    fn lower_adem_examples() {
        assert_eq!(
            adem_expand_lower(3, 3),
            Err(Error::NotInadmissible { r: 3, s: 3 })
        );
        // Q_1 Q_0: j ranges over {1}..{0}; nothing survives.
        assert!(adem_expand_lower(1, 0).unwrap().is_zero());
        // Q_2 Q_1: j would have to lie in 2..=1.
        assert!(adem_expand_lower(2, 1).unwrap().is_zero());
        assert_eq!(show(&adem_expand_lower(3, 1).unwrap()), "Q_1 Q_2");
    }

    #[test]
    fn index_conversion() {
        let (w, d) = to_upper(&OpWord::lower(&[1]), 1).unwrap();
        assert_eq!((w.to_string(), d), ("Q^2".to_string(), 3));
        let (w, d) = to_upper(&OpWord::lower(&[1, 1]), 1).unwrap();
        assert_eq!((w.to_string(), d), ("Q^4 Q^2".to_string(), 7));
        let (w, d) = to_upper(&OpWord::lower(&[0]), 5).unwrap();
        assert_eq!((w.to_string(), d), ("Q^5".to_string(), 10));
        assert_eq!(
            to_lower(&OpWord::upper(&[2]), 1).unwrap().to_string(),
            "Q_1"
        );
        assert!(matches!(
            to_lower(&OpWord::upper(&[0]), 1),
            Err(Error::UnstableWord { index: -1, .. })
        ));
    }

    #[test]
    fn suspension_rules() {
        let q0 = OpPoly::from_word(OpWord::lower(&[0]));
        assert!(suspend(&q0, 1).unwrap().is_zero());
        let w = OpPoly::from_word(OpWord::lower(&[3, 1]));
        assert_eq!(suspend(&w, 1).unwrap().to_string(), "Q_2 Q_0");
        assert!(suspend(&w, 2).unwrap().is_zero());
    }

    #[test]
    fn weight_two_tables() {
        let t = weight2_table(3, Level::Finite(2)).unwrap();
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.rows[0].target_degree, 6);
        assert_eq!(t.rows[1].target_degree, 7);
        assert!(t.rows.iter().all(|r| r.suspensions[1].is_none()));
        let t = weight2_table(0, Level::Finite(1)).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].op, OpSym::lower(0));
        let t = weight2_table(2, Level::Infinite).unwrap();
        assert!(t.rows.iter().all(|r| r.suspensions == vec![Some(r.op)]));
        assert_eq!(t.rows[0].op, OpSym::upper(2));
    }
}
