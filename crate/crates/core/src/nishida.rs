//! Steenrod operations `P_d` on the homology of free `E_∞` algebras, and
//! normalization of mixed `P`/`Q` words via the Nishida relations.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::freealg::{Flavor, FreeAlgebra};
use crate::gf2poly::{binom2, Monomial, Poly};
use crate::opcalc::{normalize_upper_indices, OpKind, OpPoly, OpSym, OpWord, Strategy};

/// `P_r Q^s = Σ_i binom(s-r, r-2i) Q^{s-r+i} P_i`.
pub fn nishida_expand(r: i64, s: i64) -> Result<OpPoly> {
    if r < 0 {
        return Err(Error::Usage(format!("P_{r} has a negative index")));
    }
    Ok((0..=r / 2)
        .filter(|&i| binom2(s - r, r - 2 * i))
        .map(|i| OpWord(vec![OpSym::upper(s - r + i), OpSym::p(i)]))
        .collect())
}

/// `P_r Q_s x = Σ_i binom(|x|+s-r, r-2i) Q_{s-r+2i} P_i x` for `|x| = deg`;
/// terms with a negative lower index are dropped.
pub fn nishida_lower(r: i64, s: i64, deg: i64) -> Result<OpPoly> {
    if r < 0 || s < 0 || deg < 0 {
        return Err(Error::Usage(
            "indices and degree must be nonnegative".into(),
        ));
    }
    Ok((0..=r / 2)
        .filter(|&i| binom2(deg + s - r, r - 2 * i) && s - r + 2 * i >= 0)
        .map(|i| OpWord(vec![OpSym::lower(s - r + 2 * i), OpSym::p(i)]))
        .collect())
}

/// Moves every `P` to the right of every `Q`, drops `P_0`, and puts the
/// `Q` part of each word in admissible form. `P` words stay unreduced.
pub fn normalize_mixed(w: &OpWord) -> Result<OpPoly> {
    if w.symbols().iter().any(|s| s.kind == OpKind::LowerQ) {
        return Err(Error::Usage(format!(
            "`{w}` uses lower indices; mixed words are normalized in upper indexing"
        )));
    }
    if w.symbols()
        .iter()
        .any(|s| s.kind == OpKind::SteenrodP && s.index < 0)
    {
        return Err(Error::Usage(format!("`{w}` has a negative P index")));
    }
    let strip = |v: &[OpSym]| -> Vec<OpSym> {
        v.iter()
            .copied()
            .filter(|s| !(s.kind == OpKind::SteenrodP && s.index == 0))
            .collect()
    };
    let mut pending: BTreeSet<Vec<OpSym>> = BTreeSet::from([strip(w.symbols())]);
    let mut sorted = OpPoly::zero();
    while let Some(word) = pending.pop_first() {
        let pos = word
            .windows(2)
            .position(|p| p[0].kind == OpKind::SteenrodP && p[1].kind == OpKind::UpperQ);
        match pos {
            None => sorted.toggle(OpWord(word)),
            Some(k) => {
                for rep in nishida_expand(word[k].index, word[k + 1].index)?.words() {
                    let mut nw = word[..k].to_vec();
                    nw.extend_from_slice(rep.symbols());
                    nw.extend_from_slice(&word[k + 2..]);
                    let nw = strip(&nw);
                    if !pending.remove(&nw) {
                        pending.insert(nw);
                    }
                }
            }
        }
    }
    let mut out = OpPoly::zero();
    for word in sorted.words() {
        let split = word
            .symbols()
            .iter()
            .position(|s| s.kind == OpKind::SteenrodP)
            .unwrap_or(word.len());
        let (q, p) = word.symbols().split_at(split);
        let q_idx: Vec<i64> = q.iter().map(|s| s.index).collect();
        for nq in normalize_upper_indices(&q_idx, Strategy::LeftmostFirst) {
            let mut syms: Vec<OpSym> = nq.into_iter().map(OpSym::upper).collect();
            syms.extend_from_slice(p);
            out.toggle(OpWord(syms));
        }
    }
    Ok(out)
}

/// `P_d` on an element of a free `E_∞` algebra. Generators are sphere
/// classes unless a seed is registered with [`FreeAlgebra::set_steenrod_seed`].
pub fn steenrod_action_free(alg: &FreeAlgebra, d: i64, elem: &Poly) -> Result<Poly> {
    if alg.flavor() != Flavor::Einf {
        return Err(Error::UnsupportedFlavor(
            "Steenrod operations are evaluated in E_inf algebras".into(),
        ));
    }
    if d < 0 {
        return Err(Error::Usage(format!("P_{d} has a negative index")));
    }
    if d == 0 {
        return Ok(elem.clone());
    }
    let mut out = Poly::zero();
    for m in elem.terms() {
        out.add_assign(&p_on_monomial(alg, d, m)?);
    }
    Ok(out)
}

fn p_on_monomial(alg: &FreeAlgebra, d: i64, m: &Monomial) -> Result<Poly> {
    let deg = m.degree() as i64;
    if d > deg {
        return Ok(Poly::zero());
    }
    if let [(id, 1)] = m.factors() {
        return p_on_class(alg, d, *id);
    }
    let target = deg - d;
    let mut acc = Poly::one();
    for &(id, e) in m.factors() {
        let c_deg = alg.classes()[id as usize].degree as i64;
        let mut total = Poly::zero();
        for k in 0..=c_deg {
            total.add_assign(&p_on_class(alg, k, id)?);
        }
        acc = acc.mul(&total.pow(e, None), None);
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc.graded_component(target))
}

fn p_on_class(alg: &FreeAlgebra, d: i64, id: u32) -> Result<Poly> {
    let c = &alg.classes()[id as usize];
    if d == 0 {
        return Ok(alg.class_gens().var(id));
    }
    if d > c.degree as i64 {
        return Ok(Poly::zero());
    }
    if c.word.is_empty() {
        return alg.steenrod_seed(c.gen, d);
    }
    if let Some(hit) = alg.p_memo_get(d, id) {
        return Ok(hit);
    }
    let mut syms = vec![OpSym::p(d)];
    syms.extend(c.word.iter().map(|&j| OpSym::upper(j)));
    let mut out = Poly::zero();
    for w in normalize_mixed(&OpWord(syms))?.words() {
        let mut cur = alg.class(c.gen, &[])?;
        for &sym in w.symbols().iter().rev() {
            cur = match sym.kind {
                OpKind::SteenrodP => steenrod_action_free(alg, sym.index, &cur)?,
                _ => alg.apply_upper(sym.index, &cur)?,
            };
            if cur.is_zero() {
                break;
            }
        }
        out.add_assign(&cur);
    }
    alg.p_memo_put(d, id, out.clone());
    Ok(out)
}

/// Checks `P_3 x = P_2 P_1 x` on every basis monomial of degree at most
/// `maxdeg`.
pub fn verify_p_adem(alg: &FreeAlgebra, maxdeg: u32) -> Result<bool> {
    for m in alg.basis(maxdeg)?.into_values().flatten() {
        let x = Poly::from_monomial(m);
        let lhs = steenrod_action_free(alg, 3, &x)?;
        let rhs = steenrod_action_free(alg, 2, &steenrod_action_free(alg, 1, &x)?)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `P_{d|u|}(u^d) = (P_{|u|} u)^d`.
pub fn power_identity_check(alg: &FreeAlgebra, u: &Poly, d: u32) -> Result<bool> {
    let deg = match u.homogeneous_degree() {
        Some(deg) => deg as i64,
        None if u.is_zero() => return Ok(true),
        None => return Err(Error::NonHomogeneous),
    };
    let lhs = steenrod_action_free(alg, d as i64 * deg, &u.pow(d, None))?;
    let rhs = steenrod_action_free(alg, deg, u)?.pow(d, None);
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::GenDecl;

    fn show(p: &OpPoly) -> String {
        p.to_string()
    }

    #[test]
    fn expansions() {
        assert_eq!(show(&nishida_expand(1, 2).unwrap()), "Q^1 P_0");
        assert_eq!(show(&nishida_expand(2, 2).unwrap()), "Q^1 P_1");
        assert_eq!(show(&nishida_expand(0, 5).unwrap()), "Q^5 P_0");
        assert_eq!(show(&nishida_lower(0, 3, 2).unwrap()), "Q_3 P_0");
    }

    #[test]
    fn mixed_normal_forms() {
        let w = |syms: Vec<OpSym>| OpWord(syms);
        assert_eq!(
            show(&normalize_mixed(&w(vec![OpSym::p(1), OpSym::upper(2)])).unwrap()),
            "Q^1"
        );
        assert_eq!(
            show(&normalize_mixed(&w(vec![OpSym::upper(3), OpSym::p(2)])).unwrap()),
            "Q^3 P_2"
        );
    }

    #[test]
    fn free_algebra_action() {
        let alg = FreeAlgebra::new(Flavor::Einf, vec![GenDecl::new("x", 1)], 12).unwrap();
        let x = alg.generator("x").unwrap();
        assert!(steenrod_action_free(&alg, 1, &x).unwrap().is_zero());
        let q2x = alg.apply_upper(2, &x).unwrap();
        assert_eq!(steenrod_action_free(&alg, 1, &q2x).unwrap(), x.frobenius());
        assert_eq!(steenrod_action_free(&alg, 0, &q2x).unwrap(), q2x);
        assert!(verify_p_adem(&alg, 12).unwrap());
        assert!(power_identity_check(&alg, &q2x, 2).unwrap());
        assert_eq!(
            power_identity_check(&alg, &x.add(&q2x), 2),
            Err(Error::NonHomogeneous)
        );
    }
}
