//! Verification suites: bounded exhaustive checks of the structural
//! identities, grouped by area.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::freealg::bracket::{single_gen_bracket_triviality, BracketAlgebra, Elem, Identity};
use crate::freealg::{Flavor, FreeAlgebra, GenDecl};
use crate::gf2poly::Poly;
use crate::models::{
    bp_splitting_obstruction, closure_check, cup_one_int, xn_growth, ModelAlgebra, ModelKind,
    OpSelector, SubalgebraSpec,
};
use crate::nishida::{
    nishida_expand, nishida_lower, normalize_mixed, power_identity_check, steenrod_action_free,
    verify_p_adem,
};
use crate::opcalc::{
    is_admissible_upper, normalize_upper_indices, suspend, to_lower, to_upper, weight2_table,
    Level, OpKind, OpPoly, OpSym, OpWord, Strategy,
};

pub const SUITES: [&str; 9] = [
    "adem",
    "lower-adem",
    "steinberger",
    "priddy",
    "nishida",
    "bracket",
    "freebasis",
    "cupone",
    "obstructions",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    pub detail: String,
}

impl Check {
    fn new(name: &str, checked: u64, failure: Option<String>) -> Self {
        Self {
            name: name.to_string(),
            passed: failure.is_none(),
            checked,
            detail: failure.unwrap_or_else(|| "ok".into()),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Bounds {
    pub maxidx: Option<i64>,
    pub maxdeg: Option<u32>,
}

pub fn run_suite(name: &str, b: Bounds) -> Result<Vec<Check>> {
    match name {
        "adem" => adem(b.maxidx.unwrap_or(20)),
        "lower-adem" => lower_adem(b.maxidx.unwrap_or(8), b.maxdeg.unwrap_or(8) as i64),
        "steinberger" => steinberger(),
        "priddy" => priddy(),
        "nishida" => nishida(b.maxdeg.unwrap_or(16)),
        "bracket" => bracket(b.maxdeg.unwrap_or(9)),
        "freebasis" => freebasis(b.maxdeg.unwrap_or(20)),
        "cupone" => cupone(b.maxidx.unwrap_or(20)),
        "obstructions" => obstructions(),
        other => Err(Error::Usage(format!(
            "unknown suite `{other}` (expected one of {})",
            SUITES.join(", ")
        ))),
    }
}

/// Short description of what a suite exercises.
pub fn provenance(name: &str) -> &'static str {
    match name {
        "adem" => {
            "upper Adem relations: secondary test vector, idempotence, confluence, soundness on A_*"
        }
        "lower-adem" => "lower-indexed Adem relations against upper indexing",
        "steinberger" => "Steinberger's action on the dual Steenrod algebra",
        "priddy" => "Kochman-Priddy series for H_*MO and H_*MU",
        "nishida" => "Nishida relations and Steenrod operations on free E_inf algebras",
        "bracket" => "Browder bracket identities for E_n algebras",
        "freebasis" => "bases of free E_n and E_inf algebras",
        "cupone" => "cup-1 squares of integers",
        "obstructions" => "closure of k(n), growth of X(n), BP -> MU splitting",
        _ => "",
    }
}

fn words(len: usize, max: i64) -> impl Iterator<Item = Vec<i64>> {
    let total = (max + 1).pow(len as u32);
    (0..total).map(move |mut code| {
        let mut w = vec![0; len];
        for slot in w.iter_mut().rev() {
            *slot = code % (max + 1);
            code /= max + 1;
        }
        w
    })
}

fn as_oppoly(set: &BTreeSet<Vec<i64>>) -> OpPoly {
    set.iter().map(|w| OpWord::upper(w)).collect()
}

/// The dual Steenrod algebra truncated high enough to evaluate any word of
/// length three with indices up to `maxidx` on `ξ_1`.
pub fn a_for_words(maxidx: i64) -> Result<ModelAlgebra> {
    ModelAlgebra::new(ModelKind::A, (1 + 3 * maxidx).max(31) as u32)
}

pub fn adem(maxidx: i64) -> Result<Vec<Check>> {
    let mut out = Vec::new();

    let mut fail = None;
    for n in 1..=10 {
        let got = normalize_upper_indices(&[2 * n + 2, n], Strategy::LeftmostFirst);
        if got != BTreeSet::from([vec![2 * n + 1, n + 1]]) {
            fail = Some(format!("Q^{} Q^{n} -> {}", 2 * n + 2, as_oppoly(&got)));
            break;
        }
    }
    out.push(Check::new("secondary_relation_vector", 10, fail));

    let (mut idem, mut conf, mut count) = (None, None, 0u64);
    for w in words(3, maxidx) {
        count += 1;
        let left = normalize_upper_indices(&w, Strategy::LeftmostFirst);
        if idem.is_none() {
            for v in &left {
                if !is_admissible_upper(v)
                    || normalize_upper_indices(v, Strategy::LeftmostFirst)
                        != BTreeSet::from([v.clone()])
                {
                    idem = Some(format!("{:?} -> {}", w, as_oppoly(&left)));
                }
            }
        }
        if conf.is_none() {
            let right = normalize_upper_indices(&w, Strategy::RightmostFirst);
            if right != left {
                conf = Some(format!(
                    "{:?}: leftmost {} vs rightmost {}",
                    w,
                    as_oppoly(&left),
                    as_oppoly(&right)
                ));
            }
        }
    }
    out.push(Check::new("idempotence", count, idem));
    out.push(Check::new("confluence", count, conf));

    let soundness_max = maxidx.min(16);
    let a = a_for_words(soundness_max)?;
    let xi1 = a.gen(1)?;
    let mut fail = None;
    let mut count = 0u64;
    for len in 1..=3 {
        for w in words(len, soundness_max) {
            count += 1;
            let direct = a.apply_word(&OpWord::upper(&w), &xi1)?;
            let normal = normalize_upper_indices(&w, Strategy::LeftmostFirst);
            let via = a.apply_oppoly(&as_oppoly(&normal), &xi1)?;
            if direct != via {
                fail = Some(format!(
                    "{:?} on xi1: {} vs {}",
                    w,
                    a.format(&direct),
                    a.format(&via)
                ));
                break;
            }
        }
    }
    out.push(Check::new("soundness_on_xi1", count, fail));
    Ok(out)
}

/// Upper words that survive instability on a class of degree `m`, in lower
/// indexing.
fn stable_lower(p: &OpPoly, m: i64) -> BTreeSet<OpWord> {
    p.words().filter_map(|w| to_lower(w, m).ok()).collect()
}

pub fn lower_adem(max: i64, maxdeg: i64) -> Result<Vec<Check>> {
    let mut fail = None;
    let mut count = 0u64;
    'outer: for r in 1..=max {
        for s in 0..r {
            let lower = crate::opcalc::adem_expand_lower(r, s)?;
            for m in 0..=maxdeg {
                count += 1;
                let (up, _) = to_upper(&OpWord::lower(&[r, s]), m)?;
                let normal = as_oppoly(&normalize_upper_indices(
                    &up.indices(),
                    Strategy::LeftmostFirst,
                ));
                let lhs: BTreeSet<OpWord> = lower.words().cloned().collect();
                let rhs = stable_lower(&normal, m);
                if lhs != rhs {
                    fail = Some(format!(
                        "Q_{r} Q_{s} at degree {m}: {} vs {}",
                        lower,
                        rhs.into_iter().collect::<OpPoly>()
                    ));
                    break 'outer;
                }
            }
        }
    }
    let mut out = vec![Check::new("lower_upper_coherence", count, fail)];

    let mut fail = None;
    let mut count = 0u64;
    for w in words(2, max).chain(words(3, max.min(5))) {
        for m in 0..=maxdeg {
            count += 1;
            let lw = OpWord::lower(&w);
            let (up, _) = to_upper(&lw, m)?;
            if to_lower(&up, m)? != lw {
                fail = Some(format!("round trip of {lw} at degree {m}"));
            }
        }
    }
    out.push(Check::new("index_round_trip", count, fail));

    let mut fail = None;
    let mut count = 0u64;
    for w in words(2, max) {
        let p = OpPoly::from_word(OpWord::lower(&w));
        for a in 0..=3 {
            for b in 0..=3 {
                count += 1;
                if suspend(&suspend(&p, a)?, b)? != suspend(&p, a + b)? {
                    fail = Some(format!("σ^{a} σ^{b} on {p}"));
                }
            }
        }
    }
    out.push(Check::new("suspension_homomorphism", count, fail));

    let mut fail = None;
    let mut count = 0u64;
    for m in 0..=6 {
        for n in 1..=5u32 {
            count += 1;
            let t = weight2_table(m, Level::Finite(n))?;
            let ok = t.rows.len() == n as usize
                && t.rows
                    .iter()
                    .all(|r| r.suspensions[n as usize - 1].is_none());
            if !ok {
                fail = Some(format!("weight-2 table (m={m}, n={n})"));
            }
        }
    }
    out.push(Check::new("weight2_tables", count, fail));
    Ok(out)
}

pub fn steinberger() -> Result<Vec<Check>> {
    let a = ModelAlgebra::new(ModelKind::A, 31)?;
    let mut out = Vec::new();

    let mut fail = None;
    for i in 1..=5u32 {
        let lhs = a.steinberger_q_on_xi1((1 << i) - 2)?;
        let rhs = a.conjugate(&a.gen(i)?);
        if i > 1 && lhs != rhs {
            fail = Some(format!(
                "Q^{} xi1 = {} vs {}",
                (1 << i) - 2,
                a.format(&lhs),
                a.format(&rhs)
            ));
        }
        if i == 1 && !lhs.is_zero() {
            fail = Some("Q^0 xi1 should vanish below degree".into());
        }
    }
    // For i = 1 the identity reads Q^0 ξ_1 = ξ̄_1, which instability forbids;
    // the squaring rule Q^1 ξ_1 = ξ_1^2 holds instead.
    if a.steinberger_q_on_xi1(1)? != a.gen(1)?.frobenius() {
        fail = Some("Q^1 xi1 is not xi1^2".into());
    }
    out.push(Check::new("q_2i_minus_2_xi1_is_conjugate", 5, fail));

    let mut fail = None;
    for i in 1..=4u32 {
        let got = a.apply_upper(1 << i, &a.xibar(i)?)?;
        if got != a.xibar(i + 1)? {
            fail = Some(format!("Q^{} xibar{i} = {}", 1 << i, a.format_bar(&got)));
        }
    }
    out.push(Check::new("q1_xibar_i_is_xibar_i_plus_1", 4, fail));

    let mut fail = None;
    let mut count = 0u64;
    for i in 1..=3u32 {
        let period = 1i64 << i;
        for s in 0..=24 {
            let r = s % period;
            if r == 0 || r == period - 1 {
                continue;
            }
            count += 1;
            let rule = a.q_on_xibar(s, i)?;
            let series = a.apply_upper(s, &a.xibar(i)?)?;
            if !rule.is_zero() || !series.is_zero() {
                fail = Some(format!("Q^{s} xibar{i} should vanish"));
            }
        }
    }
    out.push(Check::new("vanishing_off_residues", count, fail));

    let mut fail = None;
    for i in 1..=5u32 {
        let x = a.gen(i)?;
        if a.conjugate(&a.conjugate(&x)) != x {
            fail = Some(format!("conjugation is not an involution on xi{i}"));
        }
    }
    out.push(Check::new("conjugation_involution", 5, fail));

    // Series value against evaluation through the rule table (ξ_1 = ξ̄_1)
    // and through a length-two word Q^{s-1} Q^1 ξ_1 = Q^{s-1}(ξ_1^2).
    let mut fail = None;
    let xi1 = a.gen(1)?;
    for s in 1..=20 {
        let series = a.steinberger_q_on_xi1(s)?;
        let via_rule = a.apply_upper(s, &xi1)?;
        if series != via_rule {
            fail = Some(format!("Q^{s} xi1 disagrees between series and rule"));
        }
    }
    for t in 1..=14i64 {
        let word = a.apply_word(&OpWord::upper(&[2 * t, 1]), &xi1)?;
        let collapse = a.apply_upper(t, &xi1)?.frobenius();
        if word != collapse {
            fail = Some(format!("Q^{} Q^1 xi1 is not (Q^{t} xi1)^2", 2 * t));
        }
    }
    out.push(Check::new("dual_strategy_agreement", 34, fail));

    let mut fail = None;
    let mut count = 0u64;
    let samples = sample_polys(&a);
    for p in &samples {
        let sq = p.frobenius();
        for m in 0..=7i64 {
            count += 1;
            let even = a.apply_upper(2 * m, &sq)?;
            let odd = a.apply_upper(2 * m + 1, &sq)?;
            if even != a.apply_upper(m, p)?.frobenius() || !odd.is_zero() {
                fail = Some(format!(
                    "Cartan collapse fails for {} at m={m}",
                    a.format(p)
                ));
            }
        }
    }
    out.push(Check::new("cartan_frobenius_collapse", count, fail));

    let z = a.apply_upper(1, &Poly::one())?;
    out.push(Check::new(
        "unit",
        1,
        (!z.is_zero()).then(|| "Q^1 1 is nonzero".into()),
    ));
    Ok(out)
}

fn sample_polys(a: &ModelAlgebra) -> Vec<Poly> {
    let g = |i| a.gen(i).unwrap();
    vec![
        g(1),
        g(2),
        g(1).add(&g(2)),
        g(1).mul(&g(2), None),
        g(1).pow(3, None).add(&g(2)),
        g(3).add(&g(1).mul(&g(2), None)),
    ]
}

/// Terms as lists of `(generator index, exponent)`.
pub type IndexTerms = &'static [&'static [(u32, u32)]];

/// Expected values `Q^j b_k` of the MU example list, as `(j, k, terms)`.
pub const MU_EXAMPLES: [(i64, u32, IndexTerms); 5] = [
    (2, 1, &[&[(1, 2)]]),
    (4, 1, &[&[(3, 1)], &[(1, 1), (2, 1)], &[(1, 3)]]),
    (6, 1, &[&[(1, 4)]]),
    (
        8,
        1,
        &[
            &[(5, 1)],
            &[(1, 1), (4, 1)],
            &[(2, 1), (3, 1)],
            &[(1, 2), (3, 1)],
            &[(1, 1), (2, 2)],
            &[(1, 3), (2, 1)],
            &[(1, 5)],
        ],
    ),
    (
        6,
        2,
        &[
            &[(5, 1)],
            &[(1, 1), (4, 1)],
            &[(2, 1), (3, 1)],
            &[(1, 1), (2, 2)],
        ],
    ),
];

/// Builds a polynomial from `(generator index, exponent)` lists.
pub fn poly_from_indices(model: &ModelAlgebra, terms: &[&[(u32, u32)]]) -> Poly {
    let gens = model.gens();
    Poly::from_monomials(terms.iter().map(|t| {
        let pairs: Vec<(u32, u32)> = t.iter().map(|&(i, e)| (i - 1, e)).collect();
        gens.monomial_from(&pairs)
    }))
}

pub fn priddy() -> Result<Vec<Check>> {
    let mu = ModelAlgebra::new(ModelKind::MU, 12)?;
    let mo = ModelAlgebra::new(ModelKind::MO, 12)?;
    let mut out = Vec::new();

    let (mut fu, mut fo) = (None, None);
    for &(j, k, terms) in &MU_EXAMPLES {
        let got = mu.apply_upper(j, &mu.gen(k)?)?;
        let want = poly_from_indices(&mu, terms);
        if got != want {
            fu = Some(format!(
                "Q^{j} b_{k} = {}, expected {}",
                mu.format(&got),
                mu.format(&want)
            ));
        }
        let got = mo.apply_upper(j / 2, &mo.gen(k)?)?;
        let want = poly_from_indices(&mo, terms);
        if got != want {
            fo = Some(format!(
                "Q^{} a_{k} = {}, expected {}",
                j / 2,
                mo.format(&got),
                mo.format(&want)
            ));
        }
    }
    out.push(Check::new("mu_example_list", 5, fu));
    out.push(Check::new("mo_halved_example_list", 5, fo));

    let mu24 = ModelAlgebra::new(ModelKind::MU, 24)?;
    let mo24 = ModelAlgebra::new(ModelKind::MO, 24)?;
    let mut fail = None;
    let mut count = 0u64;
    for k in 1..=6u32 {
        for j in 0..=(24 - 2 * k as i64) {
            if j % 2 == 1 {
                count += 1;
                if !mu24.priddy_q(j, k)?.is_zero() {
                    fail = Some(format!("Q^{j} b_{k} is nonzero"));
                }
            }
        }
    }
    out.push(Check::new("mu_odd_vanishing", count, fail));

    let mut fail = None;
    for k in 1..=12u32 {
        let x = mo24.gen(k)?;
        if mo24.priddy_q(k as i64, k)? != x.frobenius() {
            fail = Some(format!("Q^{k} a_{k} is not a_{k}^2"));
        }
        for j in 0..k as i64 {
            if !mo24.priddy_q(j, k)?.is_zero() {
                fail = Some(format!("Q^{j} a_{k} violates instability"));
            }
        }
    }
    out.push(Check::new("mo_squaring_and_instability", 12, fail));

    let mut fail = None;
    let mut count = 0u64;
    for k in 1..=6u32 {
        for n in 1..=(12 - k as i64) {
            count += 2;
            if !mo24.leading_term_check(n, k)? {
                fail = Some(format!("MO leading term of Q^{n} a_{k}"));
            }
            if n + k as i64 <= 12 && !mu24.leading_term_check(n, k)? {
                fail = Some(format!("MU leading term of Q^{} b_{k}", 2 * n));
            }
        }
    }
    out.push(Check::new("leading_terms", count, fail));
    Ok(out)
}

/// The free `E_∞` algebra on one class of degree 1 with all classes through
/// `cap`.
pub fn einf_on_degree_one(cap: u32) -> Result<FreeAlgebra> {
    FreeAlgebra::new(Flavor::Einf, vec![GenDecl::new("x", 1)], cap)
}

fn evaluate_mixed(alg: &FreeAlgebra, w: &OpWord, x: &Poly) -> Result<Poly> {
    alg.apply_word(w, x)
}

pub fn nishida(maxdeg: u32) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let alg = einf_on_degree_one(maxdeg.max(20))?;

    let ok = verify_p_adem(&alg, maxdeg)?;
    out.push(Check::new(
        "p3_equals_p2_p1",
        alg.basis(maxdeg)?.values().map(|v| v.len() as u64).sum(),
        (!ok).then(|| format!("P_3 != P_2 P_1 below degree {maxdeg}")),
    ));

    // Mixed words of length <= 3 with indices <= 10 on basis monomials of
    // degree <= 6; every such composite lands in degree <= 36.
    let alg = einf_on_degree_one(36)?;
    let basis = alg.basis(6)?;
    let classes: Vec<Poly> = basis
        .values()
        .flatten()
        .filter(|m| !m.is_one())
        .map(|m| Poly::from_monomial(m.clone()))
        .collect();
    let mut fail = None;
    let mut count = 0u64;
    let symbols: Vec<OpSym> = (0..=10)
        .map(OpSym::upper)
        .chain((0..=10).map(OpSym::p))
        .collect();
    let mut mixed_words = Vec::new();
    for len in 1..=3usize {
        let total = symbols.len().pow(len as u32);
        for mut code in 0..total {
            let mut w = Vec::with_capacity(len);
            for _ in 0..len {
                w.push(symbols[code % symbols.len()]);
                code /= symbols.len();
            }
            if w.iter().any(|s| s.kind == OpKind::SteenrodP) {
                mixed_words.push(OpWord(w));
            }
        }
    }
    'words: for w in &mixed_words {
        let normal = normalize_mixed(w)?;
        for x in &classes {
            count += 1;
            let direct = evaluate_mixed(&alg, w, x)?;
            let mut via = Poly::zero();
            for nw in normal.words() {
                via.add_assign(&evaluate_mixed(&alg, nw, x)?);
            }
            if direct != via {
                fail = Some(format!(
                    "{w} on {}: {} vs {}",
                    alg.format(x),
                    alg.format(&direct),
                    alg.format(&via)
                ));
                break 'words;
            }
        }
    }
    out.push(Check::new("mixed_normalization_soundness", count, fail));

    let alg = einf_on_degree_one(maxdeg.max(20))?;
    let mut fail = None;
    let mut count = 0u64;
    for r in 0..=8i64 {
        for s in 0..=8i64 {
            for deg in 0..=8i64 {
                count += 1;
                let lower = nishida_lower(r, s, deg)?;
                let lhs = translate_lower_nishida(&lower, deg);
                let up = nishida_expand(r, s + deg)?;
                let rhs = translate_upper_nishida(&up, deg);
                if lhs != rhs {
                    fail = Some(format!("P_{r} Q_{s} at degree {deg}: {lower} vs {up}"));
                }
            }
        }
    }
    out.push(Check::new("lower_nishida_translation", count, fail));

    let mut fail = None;
    let mut count = 0u64;
    for m in alg.basis(10)?.into_values().flatten() {
        if m.is_one() {
            continue;
        }
        let u = Poly::from_monomial(m);
        for d in 1..=3 {
            count += 1;
            if !power_identity_check(&alg, &u, d)? {
                fail = Some(format!("P_(d|u|)(u^d) for u = {}, d = {d}", alg.format(&u)));
            }
        }
    }
    out.push(Check::new("power_identity", count, fail));

    let mut fail = None;
    let x = alg.generator("x")?;
    let q2x = alg.apply_upper(2, &x)?;
    if steenrod_action_free(&alg, 1, &q2x)? != x.frobenius() {
        fail = Some("P_1 Q^2 x is not x^2".into());
    }
    out.push(Check::new("p1_q2_on_fundamental_class", 1, fail));
    Ok(out)
}

/// `(lower Q index, P index)` pairs that survive on a class of degree `deg`,
/// as upper words.
fn translate_lower_nishida(p: &OpPoly, deg: i64) -> BTreeSet<(i64, i64)> {
    p.words()
        .filter_map(|w| {
            let (q, pi) = (w.symbols()[0].index, w.symbols()[1].index);
            let mid = deg - pi;
            (mid >= 0).then_some((mid + q, pi))
        })
        .collect()
}

fn translate_upper_nishida(p: &OpPoly, deg: i64) -> BTreeSet<(i64, i64)> {
    p.words()
        .filter_map(|w| {
            let (q, pi) = (w.symbols()[0].index, w.symbols()[1].index);
            let mid = deg - pi;
            (mid >= 0 && q >= mid).then_some((q, pi))
        })
        .collect()
}

pub fn bracket(maxdeg: u32) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let decls = vec![
        GenDecl::new("x", 1),
        GenDecl::new("y", 2),
        GenDecl::new("z", 3),
    ];
    for n in [2u32, 3, 4] {
        let alg = BracketAlgebra::new(n, decls.clone())?;
        let g: Vec<Elem> = ["x", "y", "z"]
            .iter()
            .map(|s| alg.generator(s))
            .collect::<Result<_>>()?;
        let mut pool: Vec<Elem> = g.clone();
        pool.push(g[0].mul(&g[1]));
        pool.push(alg.bracket(&g[0], &g[1]));
        pool.push(alg.apply_lower(1, &g[0])?);
        pool.push(alg.apply_lower(n as i64 - 1, &g[1])?);
        pool.push(g[0].pow(3).add(&g[2]));
        let mut fails = Vec::new();
        let mut count = 0u64;
        for id in Identity::ALL {
            for args in arg_tuples(&pool, id.arity()) {
                let report = match alg.check(id, &args) {
                    Ok(r) => r,
                    Err(Error::MalformedIdentityArgs(_)) => continue,
                    Err(e) => return Err(e),
                };
                count += 1;
                if !report.holds && fails.len() < 3 {
                    fails.push(format!("{id}: {} vs {}", report.lhs, report.rhs));
                }
            }
        }
        out.push(Check::new(
            &format!("identities_e{n}"),
            count,
            (!fails.is_empty()).then(|| fails.join("; ")),
        ));
    }
    for n in [2u32, 3] {
        let ok = single_gen_bracket_triviality(n, 1, maxdeg)?
            && single_gen_bracket_triviality(n, 2, maxdeg)?;
        out.push(Check::new(
            &format!("single_generator_trivial_e{n}"),
            1,
            (!ok).then(|| format!("nonzero bracket in the free E_{n} algebra")),
        ));
    }
    Ok(out)
}

fn arg_tuples(pool: &[Elem], arity: usize) -> Vec<Vec<Elem>> {
    let mut out: Vec<Vec<Elem>> = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                pool.iter().map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// Dimensions of `A_*` in degrees `0..=maxdeg`, by counting monomials in
/// variables of degree `2^i - 1`.
pub fn dual_steenrod_dims(maxdeg: u32) -> Vec<usize> {
    let mut dims = vec![0usize; maxdeg as usize + 1];
    dims[0] = 1;
    let mut d = 1u32;
    while d <= maxdeg {
        for k in d as usize..=maxdeg as usize {
            dims[k] += dims[k - d as usize];
        }
        d = 2 * d + 1;
    }
    dims
}

pub fn freebasis(maxdeg: u32) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let want = dual_steenrod_dims(maxdeg);

    let einf = einf_on_degree_one(maxdeg)?;
    let got = einf.poincare(maxdeg)?;
    out.push(Check::new(
        "einf_degree_one_matches_dual_steenrod",
        maxdeg as u64 + 1,
        (got != want).then(|| {
            let k = got.iter().zip(&want).position(|(a, b)| a != b).unwrap();
            format!(
                "degree {k}: E_inf has {} classes, A_* has {}",
                got[k], want[k]
            )
        }),
    ));

    let e2 = FreeAlgebra::new(Flavor::En(2), vec![GenDecl::new("x", 1)], maxdeg)?;
    let got = e2.poincare(maxdeg)?;
    out.push(Check::new(
        "e2_degree_one_matches_dual_steenrod",
        maxdeg as u64 + 1,
        (got != want).then(|| format!("{got:?} vs {want:?}")),
    ));

    let e2_gens: Vec<Vec<i64>> = e2
        .generators(maxdeg)
        .iter()
        .map(|c| c.word.clone())
        .collect();
    let expected: Vec<Vec<i64>> = (0..)
        .map(|k| vec![1; k])
        .take_while(|w| (1u64 << (w.len() + 1)) - 1 <= maxdeg as u64)
        .collect();
    out.push(Check::new(
        "e2_generators_are_iterated_q1",
        1,
        (e2_gens != expected).then(|| format!("{e2_gens:?}")),
    ));

    let reach_deg = maxdeg.min(12);
    let (reached, total) = reachability(&einf, reach_deg)?;
    out.push(Check::new(
        "einf_closure_reaches_basis",
        total as u64,
        (reached != total)
            .then(|| format!("reached rank {reached} of {total} through degree {reach_deg}")),
    ));
    Ok(out)
}

/// Closes the generator under all operations and products through `maxdeg`
/// and returns the rank of what was reached next to the basis size. Every
/// reached element is a polynomial in basis classes by construction, so the
/// span check is a rank count.
pub fn reachability(alg: &FreeAlgebra, maxdeg: u32) -> Result<(usize, usize)> {
    let basis = alg.basis(maxdeg)?;
    let total: usize = basis.values().map(Vec::len).sum();
    let mut found: Vec<Poly> = vec![Poly::one()];
    for d in &alg.decls().to_vec() {
        found.push(alg.generator(&d.name)?);
    }
    let mut seen: BTreeSet<Poly> = found.iter().cloned().collect();
    let mut frontier = found.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in &frontier {
            let deg = p.max_degree().unwrap_or(0) as i64;
            for s in deg..=(maxdeg as i64 - deg) {
                let q = alg.apply_upper(s, p)?;
                if !q.is_zero() && seen.insert(q.clone()) {
                    next.push(q);
                }
            }
        }
        let snapshot: Vec<Poly> = seen.iter().cloned().collect();
        for p in &frontier {
            for q in &snapshot {
                let pd = p.max_degree().unwrap_or(0);
                let qd = q.max_degree().unwrap_or(0);
                if pd + qd > maxdeg {
                    continue;
                }
                let r = p.mul(q, None);
                if !r.is_zero() && seen.insert(r.clone()) {
                    next.push(r);
                }
            }
        }
        frontier = next;
    }
    for p in &seen {
        if p.terms().iter().any(|m| !basis[&m.degree()].contains(m)) {
            return Ok((0, total));
        }
    }
    Ok((gf2_rank(seen.into_iter().collect()), total))
}

/// Rank over GF(2) of a set of polynomials viewed as vectors of monomials.
pub fn gf2_rank(mut rows: Vec<Poly>) -> usize {
    let mut rank = 0;
    let mut pivots: Vec<Poly> = Vec::new();
    for row in rows.drain(..) {
        let mut r = row;
        for p in &pivots {
            if r.contains(&p.terms()[p.terms().len() - 1]) {
                r = r.add(p);
            }
        }
        if !r.is_zero() {
            // Keep pivots reduced against the new one so each lead is unique.
            let lead = r.terms()[r.terms().len() - 1].clone();
            for p in pivots.iter_mut() {
                if p.contains(&lead) {
                    *p = p.add(&r);
                }
            }
            pivots.push(r);
            rank += 1;
        }
    }
    rank
}

pub fn cupone(max: i64) -> Result<Vec<Check>> {
    let mut fail = None;
    let mut count = 0u64;
    for n in -max..=max {
        let exact = (n * (n - 1) / 2).rem_euclid(2) == 1;
        if cup_one_int(n) != exact {
            fail = Some(format!("Sq_1({n})"));
        }
    }
    let mut out = vec![Check::new("binomial_formula", 2 * max as u64 + 1, fail)];
    let mut fail = None;
    for m in -max..=max {
        for n in -max..=max {
            count += 1;
            let rhs = cup_one_int(m) ^ cup_one_int(n) ^ ((m * n).rem_euclid(2) == 1);
            if cup_one_int(m + n) != rhs {
                fail = Some(format!("addition congruence at ({m}, {n})"));
            }
        }
    }
    out.push(Check::new("addition_congruence", count, fail));
    Ok(out)
}

pub fn obstructions() -> Result<Vec<Check>> {
    let a = ModelAlgebra::new(ModelKind::A, 31)?;
    let q1 = [OpSelector::Sym(OpSym::lower(1))];
    let mut out = Vec::new();

    let mut fail = None;
    for n in 0..=4u32 {
        let v = closure_check(&a, &SubalgebraSpec::k(n), &q1, 31)?;
        let ok = if n == 0 {
            v.is_empty()
        } else {
            v.iter()
                .any(|x| x.generator == a.xibar(n).unwrap() && x.image == a.xibar(n + 1).unwrap())
        };
        if !ok {
            fail = Some(format!("k({n}): {} violations", v.len()));
        }
    }
    out.push(Check::new("morava_k_not_q1_closed", 5, fail));

    let mut fail = None;
    for n in 1..=4u32 {
        let v = closure_check(&a, &SubalgebraSpec::kz(n)?, &q1, 31)?;
        if v.is_empty() != (n == 1) {
            fail = Some(format!("kZ({n}): {} violations", v.len()));
        }
    }
    out.push(Check::new("integral_morava_k_closed_only_at_1", 4, fail));

    let v = closure_check(&a, &SubalgebraSpec::bp(), &[OpSelector::AllUpper], 24)?;
    out.push(Check::new(
        "bp_closed_to_degree_24",
        1,
        (!v.is_empty()).then(|| v[0].text.clone()),
    ));

    let chain = xn_growth(&a, 30)?;
    let ok = chain.len() == 4
        && chain
            .iter()
            .all(|c| c.escapes_prefix && c.element == c.by_rule);
    out.push(Check::new(
        "xn_chain_escapes",
        chain.len() as u64,
        (!ok).then(|| format!("chain of length {}", chain.len())),
    ));

    let r = bp_splitting_obstruction(12)?;
    out.push(Check::new(
        "bp_mu_splitting_obstruction",
        1,
        (!r.holds()).then(|| r.summary()),
    ));
    Ok(out)
}

/// Whether `binom2` agrees with the exact product formula; used by tests.
pub fn binom_oracle(a: i64, b: i64) -> bool {
    if b < 0 {
        return false;
    }
    // Exact rational product a (a-1) ... (a-b+1) / b!, reduced mod 2 by
    // counting factors of two.
    let mut twos: i64 = 0;
    for k in 0..b {
        let f = a - k;
        if f == 0 {
            return false;
        }
        twos += f.abs().trailing_zeros() as i64;
        twos -= (k + 1).trailing_zeros() as i64;
    }
    twos == 0
}
