//! Command dispatch shared by the `dlcalc` binary and the C interface.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freealg::bracket::{BracketAlgebra, Elem};
use crate::freealg::{Flavor, FreeAlgebra, GenDecl};
use crate::gf2poly::Poly;
use crate::models::{
    bp_splitting_obstruction, closure_check, ModelAlgebra, ModelKind, OpSelector, SubalgebraSpec,
};
use crate::nishida::normalize_mixed;
use crate::opcalc::{
    normalize_lower, normalize_upper, suspend, weight2_table, Level, OpKind, OpPoly, OpSym,
};
use crate::parse::{eval, parse_expr, parse_op_poly, Context};
use crate::verify::{self, Bounds, Check, SUITES};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Normalize,
    Act,
    FreeBasis,
    Poincare,
    Closure,
    Suspend,
    PowTable,
    Obstruction,
    Verify,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Normalize,
        Command::Act,
        Command::FreeBasis,
        Command::Poincare,
        Command::Closure,
        Command::Suspend,
        Command::PowTable,
        Command::Obstruction,
        Command::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Normalize => "normalize",
            Command::Act => "act",
            Command::FreeBasis => "free-basis",
            Command::Poincare => "poincare",
            Command::Closure => "closure",
            Command::Suspend => "suspend",
            Command::PowTable => "pow-table",
            Command::Obstruction => "obstruction",
            Command::Verify => "verify",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| Error::Usage(format!("unknown command `{name}`")))
    }

    /// Whether the command takes a positional argument.
    pub fn takes_input(self) -> bool {
        matches!(
            self,
            Command::Normalize
                | Command::Act
                | Command::Suspend
                | Command::PowTable
                | Command::Verify
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Options {
    pub model: Option<String>,
    pub sub: Option<String>,
    pub ops: Option<String>,
    pub gens: Option<String>,
    pub cap: Option<u32>,
    pub maxdeg: Option<u32>,
    pub flavor: Option<String>,
    pub n: Option<String>,
    pub times: Option<u32>,
    pub maxidx: Option<i64>,
}

impl Options {
    /// Reads options from a JSON object such as `{"model": "MU", "cap": 12}`.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Usage(format!("bad options: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub command: Command,
    pub input: Option<String>,
    pub options: Options,
}

impl Query {
    pub fn new(command: Command, input: Option<&str>) -> Self {
        Self {
            command,
            input: input.map(str::to_string),
            options: Options::default(),
        }
    }

    fn input(&self) -> Result<&str> {
        self.input
            .as_deref()
            .ok_or_else(|| Error::Usage(format!("`{}` needs an argument", self.command.name())))
    }

    fn inputs(&self) -> BTreeMap<String, String> {
        let o = &self.options;
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                m.insert(k.to_string(), v);
            }
        };
        put("input", self.input.clone());
        put("model", o.model.clone());
        put("sub", o.sub.clone());
        put("ops", o.ops.clone());
        put("gens", o.gens.clone());
        put("cap", o.cap.map(|v| v.to_string()));
        put("maxdeg", o.maxdeg.map(|v| v.to_string()));
        put("flavor", o.flavor.clone());
        put("n", o.n.clone());
        put("times", o.times.map(|v| v.to_string()));
        put("maxidx", o.maxidx.map(|v| v.to_string()));
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violation,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub status: Status,
    pub result_text: String,
    /// Terms of the result: one `[symbol, exponent]` list per term.
    pub result_terms: Vec<Vec<(String, u32)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result_dims: Option<Vec<usize>>,
    pub suite_results: Vec<SuiteResult>,
    pub provenance: String,
}

impl Report {
    fn new(q: &Query, provenance: &str) -> Self {
        Self {
            command: q.command.name().to_string(),
            inputs: q.inputs(),
            status: Status::Ok,
            result_text: String::new(),
            result_terms: Vec::new(),
            result_dims: None,
            suite_results: Vec::new(),
            provenance: provenance.to_string(),
        }
    }

    /// Report for a query that failed with an error.
    pub fn from_error(q: &Query, e: &Error) -> Self {
        let mut r = Self::new(q, "");
        r.status = Status::Error;
        r.result_text = format!("error: {e}");
        r
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable form: the result, then one line per check.
    pub fn text(&self) -> String {
        let mut out = self.result_text.clone();
        for s in &self.suite_results {
            for c in &s.checks {
                if !out.is_empty() {
                    out.push('\n');
                }
                let tag = if c.passed { "PASS" } else { "FAIL" };
                out.push_str(&format!(
                    "{tag} {}/{} ({} cases)",
                    s.suite, c.name, c.checked
                ));
                if !c.passed {
                    out.push_str(&format!(": {}", c.detail));
                }
            }
        }
        if !self.suite_results.is_empty() {
            out.push_str(&format!("\nstatus: {}", status_word(self.status)));
        }
        out
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::Violation => "violation",
        Status::Error => "error",
    }
}

fn op_terms(p: &OpPoly) -> Vec<Vec<(String, u32)>> {
    p.words()
        .map(|w| w.symbols().iter().map(|s| (s.to_string(), 1)).collect())
        .collect()
}

/// Holds truncated models between queries.
#[derive(Debug, Default)]
pub struct Session {
    models: Mutex<HashMap<(ModelKind, u32), Arc<ModelAlgebra>>>,
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn model(&self, kind: ModelKind, cap: u32) -> Result<Arc<ModelAlgebra>> {
        let mut cache = self.models.lock().expect("model cache poisoned");
        if let Some(m) = cache.get(&(kind, cap)) {
            return Ok(Arc::clone(m));
        }
        let m = Arc::new(ModelAlgebra::new(kind, cap)?);
        cache.insert((kind, cap), Arc::clone(&m));
        Ok(m)
    }

    /// Runs a query; errors are returned rather than folded into a report.
    pub fn run(&self, q: &Query) -> Result<Report> {
        match q.command {
            Command::Normalize => normalize(q),
            Command::Act => self.act(q),
            Command::FreeBasis => free_basis(q, false),
            Command::Poincare => free_basis(q, true),
            Command::Closure => self.closure(q),
            Command::Suspend => suspend_cmd(q),
            Command::PowTable => pow_table(q),
            Command::Obstruction => obstruction(q),
            Command::Verify => verify_cmd(q),
        }
    }

    /// Runs a query and turns errors into an error report.
    pub fn run_report(&self, q: &Query) -> Report {
        self.run(q).unwrap_or_else(|e| Report::from_error(q, &e))
    }

    fn act(&self, q: &Query) -> Result<Report> {
        let expr = parse_expr(q.input()?)?;
        let o = &q.options;
        let mut r = Report::new(q, "evaluation of operations via the Cartan formula");
        if let Some(gens) = &o.gens {
            if o.model.is_some() {
                return Err(Error::Usage("--model and --gens are exclusive".into()));
            }
            let decls = GenDecl::parse_list(gens)?;
            match flavor(o)? {
                Flavor::Einf => {
                    let alg = FreeAlgebra::new(Flavor::Einf, decls, o.cap.unwrap_or(20))?;
                    let v = eval(&FreeCtx(&alg), &expr)?;
                    r.result_text = alg.format(&v);
                    r.result_terms = alg.class_gens().term_list(&v);
                }
                Flavor::En(1) => {
                    let alg = FreeAlgebra::new(Flavor::En(1), decls, o.cap.unwrap_or(20))?;
                    let v = eval(&FreeCtx(&alg), &expr)?;
                    r.result_text = alg.format(&v);
                    r.result_terms = alg.class_gens().term_list(&v);
                }
                Flavor::En(n) => {
                    let alg = BracketAlgebra::new(n, decls)?;
                    let v = eval(&BracketCtx(&alg), &expr)?;
                    r.result_text = alg.format(&v);
                    r.result_terms = alg.term_list(&v);
                }
            }
            return Ok(r);
        }
        let kind = ModelKind::parse(o.model.as_deref().unwrap_or("A"))?;
        let model = self.model(kind, o.cap.unwrap_or(kind.default_cap()))?;
        let v = eval(&ModelCtx(&model), &expr)?;
        r.result_text = model.format(&v);
        r.result_terms = model.gens().term_list(&v);
        r.provenance = match kind {
            ModelKind::A => "Steinberger's action on the dual Steenrod algebra".into(),
            _ => "Kochman-Priddy series for Thom spectra".into(),
        };
        Ok(r)
    }

    fn closure(&self, q: &Query) -> Result<Report> {
        let o = &q.options;
        if let Some(m) = &o.model {
            if ModelKind::parse(m)? != ModelKind::A {
                return Err(Error::Usage("closure is checked inside A".into()));
            }
        }
        let sub = SubalgebraSpec::parse(
            o.sub
                .as_deref()
                .ok_or_else(|| Error::Usage("closure needs --sub".into()))?,
        )?;
        let ops = OpSelector::parse_list(o.ops.as_deref().unwrap_or("Q_1"))?;
        let maxdeg = o.maxdeg.unwrap_or(31);
        let model = self.model(ModelKind::A, o.cap.unwrap_or(31).max(maxdeg))?;
        let violations = closure_check(&model, &sub, &ops, maxdeg)?;
        let mut r = Report::new(
            q,
            "closure of subalgebras of A under Dyer-Lashof operations",
        );
        if violations.is_empty() {
            r.result_text = format!("{sub} is closed through degree {maxdeg}");
        } else {
            r.status = Status::Violation;
            r.result_text = violations
                .iter()
                .map(|v| format!("{}: {}", v.op, v.text))
                .collect::<Vec<_>>()
                .join("\n");
            if let Some(v) = violations.first() {
                r.result_terms = model.bar_gens().term_list(&model.conjugate(&v.image));
            }
        }
        Ok(r)
    }
}

fn flavor(o: &Options) -> Result<Flavor> {
    let n = match o.n.as_deref() {
        None => None,
        Some("inf") => return Flavor::parse("Einf", None),
        Some(t) => Some(
            t.parse::<u32>()
                .map_err(|_| Error::Usage(format!("--n expects an integer or `inf`, got `{t}`")))?,
        ),
    };
    Flavor::parse(
        o.flavor
            .as_deref()
            .unwrap_or(if n.is_some() { "En" } else { "Einf" }),
        n,
    )
}

fn normalize(q: &Query) -> Result<Report> {
    let input = parse_op_poly(q.input()?)?;
    let mut out = OpPoly::zero();
    for w in input.words() {
        let has = |k| w.symbols().iter().any(|s| s.kind == k);
        let part = match (
            has(OpKind::UpperQ),
            has(OpKind::LowerQ),
            has(OpKind::SteenrodP),
        ) {
            (_, false, true) => normalize_mixed(w)?,
            (_, true, true) | (true, true, false) => {
                return Err(Error::Usage(format!(
                    "`{w}` mixes index conventions; use upper indices with P"
                )))
            }
            (false, true, false) => normalize_lower(w)?,
            _ => normalize_upper(w)?,
        };
        out = out.add(&part);
    }
    let mut r = Report::new(q, "Adem and Nishida relations");
    r.result_text = out.to_string();
    r.result_terms = op_terms(&out);
    Ok(r)
}

fn suspend_cmd(q: &Query) -> Result<Report> {
    let p = parse_op_poly(q.input()?)?;
    let out = suspend(&p, q.options.times.unwrap_or(1))?;
    let mut r = Report::new(q, "homology suspension");
    r.result_text = out.to_string();
    r.result_terms = op_terms(&out);
    Ok(r)
}

fn pow_table(q: &Query) -> Result<Report> {
    let text = q.input()?;
    let m: i64 = text
        .trim()
        .parse()
        .map_err(|_| Error::Usage(format!("pow-table expects a degree, got `{text}`")))?;
    let level = match q.options.n.as_deref().unwrap_or("inf") {
        "inf" => Level::Infinite,
        t => Level::Finite(
            t.parse()
                .map_err(|_| Error::Usage(format!("--n expects an integer or `inf`, got `{t}`")))?,
        ),
    };
    let t = weight2_table(m, level)?;
    let mut lines = vec![format!(
        "weight-2 operations on degree {}, n = {}",
        t.m, t.n
    )];
    for row in &t.rows {
        let susp: Vec<String> = row
            .suspensions
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let img = s.map_or("0".to_string(), |s: OpSym| s.to_string());
                format!("σ^{}: {img}", k + 1)
            })
            .collect();
        lines.push(format!(
            "{}  degree {}  {}",
            row.op,
            row.target_degree,
            susp.join("  ")
        ));
    }
    let mut r = Report::new(q, "operations of weight two and suspension");
    r.result_text = lines.join("\n");
    r.result_terms = t
        .rows
        .iter()
        .map(|row| vec![(row.op.to_string(), 1)])
        .collect();
    Ok(r)
}

fn obstruction(q: &Query) -> Result<Report> {
    let o = bp_splitting_obstruction(q.options.cap.unwrap_or(12))?;
    let mu = ModelAlgebra::new(ModelKind::MU, q.options.cap.unwrap_or(12))?;
    let mut r = Report::new(q, "BP -> MU splitting obstruction");
    r.result_text = o.summary();
    r.result_terms = mu.gens().term_list(&o.source);
    if !o.holds() {
        r.status = Status::Violation;
    }
    Ok(r)
}

fn verify_cmd(q: &Query) -> Result<Report> {
    let name = q.input()?;
    let names: Vec<&str> = if name == "all" {
        SUITES.to_vec()
    } else {
        vec![name]
    };
    let bounds = Bounds {
        maxidx: q.options.maxidx,
        maxdeg: q.options.maxdeg,
    };
    let mut r = Report::new(q, "");
    let mut prov = Vec::new();
    for n in names {
        let checks = verify::run_suite(n, bounds)?;
        let passed = checks.iter().all(|c| c.passed);
        if !passed {
            r.status = Status::Violation;
        }
        prov.push(verify::provenance(n));
        r.suite_results.push(SuiteResult {
            suite: n.to_string(),
            passed,
            checks,
        });
    }
    r.provenance = prov.join("; ");
    Ok(r)
}

fn free_basis(q: &Query, dims_only: bool) -> Result<Report> {
    let o = &q.options;
    let decls = GenDecl::parse_list(
        o.gens
            .as_deref()
            .ok_or_else(|| Error::Usage("free-basis needs --gens".into()))?,
    )?;
    let maxdeg = o.maxdeg.unwrap_or(10);
    let alg = FreeAlgebra::new(flavor(o)?, decls, o.cap.unwrap_or(maxdeg).max(maxdeg))?;
    let basis = alg.basis(maxdeg)?;
    let mut r = Report::new(q, "bases of free algebras");
    let dims = alg.poincare(maxdeg)?;
    if dims_only {
        r.result_text = dims
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(", ");
    } else {
        r.result_text = basis
            .iter()
            .map(|(d, ms)| {
                let names: Vec<String> = ms
                    .iter()
                    .map(|m| alg.class_gens().fmt_monomial(m))
                    .collect();
                format!("{d}: {}", names.join(", "))
            })
            .collect::<Vec<_>>()
            .join("\n");
        let all = Poly::from_monomials(basis.into_values().flatten());
        r.result_terms = alg.class_gens().term_list(&all);
    }
    r.result_dims = Some(dims);
    Ok(r)
}

fn parity(n: i64) -> Poly {
    if n.rem_euclid(2) == 1 {
        Poly::one()
    } else {
        Poly::zero()
    }
}

struct ModelCtx<'a>(&'a ModelAlgebra);

impl Context for ModelCtx<'_> {
    type Value = Poly;
    fn ident(&self, name: &str) -> Result<Poly> {
        self.0.lookup(name)
    }
    fn int(&self, n: i64) -> Result<Poly> {
        Ok(parity(n))
    }
    fn add(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(a.add(b))
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(a.mul(b, Some(self.0.cap())))
    }
    fn pow(&self, a: &Poly, e: u32) -> Result<Poly> {
        Ok(a.pow(e, Some(self.0.cap())))
    }
    fn apply(&self, sym: OpSym, a: &Poly) -> Result<Poly> {
        self.0.apply_sym(sym, a)
    }
}

struct FreeCtx<'a>(&'a FreeAlgebra);

impl Context for FreeCtx<'_> {
    type Value = Poly;
    fn ident(&self, name: &str) -> Result<Poly> {
        self.0.generator(name)
    }
    fn int(&self, n: i64) -> Result<Poly> {
        Ok(parity(n))
    }
    fn add(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(a.add(b))
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(self.0.multiply(a, b))
    }
    fn pow(&self, a: &Poly, e: u32) -> Result<Poly> {
        Ok(a.pow(e, Some(self.0.cap())))
    }
    fn apply(&self, sym: OpSym, a: &Poly) -> Result<Poly> {
        self.0.apply_sym(sym, a)
    }
}

struct BracketCtx<'a>(&'a BracketAlgebra);

impl Context for BracketCtx<'_> {
    type Value = Elem;
    fn ident(&self, name: &str) -> Result<Elem> {
        self.0.generator(name)
    }
    fn int(&self, n: i64) -> Result<Elem> {
        Ok(if n.rem_euclid(2) == 1 {
            Elem::one()
        } else {
            Elem::zero()
        })
    }
    fn add(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(a.add(b))
    }
    fn mul(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(a.mul(b))
    }
    fn pow(&self, a: &Elem, e: u32) -> Result<Elem> {
        Ok(a.pow(e))
    }
    fn apply(&self, sym: OpSym, a: &Elem) -> Result<Elem> {
        match sym.kind {
            OpKind::LowerQ => self.0.apply_lower(sym.index, a),
            OpKind::UpperQ => self.0.apply_upper(sym.index, a),
            OpKind::SteenrodP => Err(Error::Unsupported(
                "Steenrod operations are evaluated in E_inf algebras".into(),
            )),
        }
    }
    fn bracket(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.0.bracket(a, b))
    }
}
