//! Session scripts: named rings, ideals, modules, families and example
//! constructions, plus query commands whose results are JSON values.
//!
//! ```text
//! ring R = QQ[x,y,z] / (x*y, x*z);
//! ideal a = (y);
//! module M = free(2) / ((x, y));
//! family F = generated(degree=2, cap=20);
//! height a expect 0;
//! grade koszul a on M;
//! check fg R family F;
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use super::lexer::{tokenize, Tok};
use super::parser::{describe, Cursor};
use crate::cmsense::{self, FamilyOptions, Provenance, Sense, TestFamily, Verdict};
use crate::constructors::{
    invariant_ring, invariant_transfer_check, perfect_closure_ops, trivial_extension, GroupAction,
    InvariantRingPresentation, LimitRing, ValuationModel,
};
use crate::error::{Error, Result};
use crate::grade::{self, Notion};
use crate::groebner::ModuleElem;
use crate::poly::{MonomialOrder, Poly, PolyRing};
use crate::ring::{IdealHandle, PresentedModule, PresentedRing, PrimeWitness, Ring};
use crate::scalars::Field;

#[derive(Clone, Debug)]
pub struct Options {
    pub budget: u64,
    pub n_max: usize,
    pub degree_bound: u32,
    pub workers: usize,
    pub family_cap: usize,
    pub classical_bound: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            budget: crate::groebner::DEFAULT_BUDGET,
            n_max: 3,
            degree_bound: 2,
            workers: 0,
            family_cap: 24,
            classical_bound: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectSpec {
    pub p: u32,
    pub vars: Vec<String>,
    pub level: u32,
}

#[derive(Clone)]
pub enum Binding {
    Ring(Ring),
    Ideal(IdealHandle),
    Module(PresentedModule),
    Family(Ring, TestFamily),
    Limit { limit: Arc<LimitRing>, base: String },
    Perfect(PerfectSpec),
    Invariant { model: Arc<InvariantRingPresentation>, decl: String },
    Valuation(ValuationModel),
}

impl Binding {
    pub fn kind(&self) -> &'static str {
        match self {
            Binding::Ring(_) => "ring",
            Binding::Ideal(_) => "ideal",
            Binding::Module(_) => "module",
            Binding::Family(..) => "family",
            Binding::Limit { .. } => "limitring",
            Binding::Perfect(_) => "perfect",
            Binding::Invariant { .. } => "invariant",
            Binding::Valuation(_) => "valuation",
        }
    }
}

/// Result of one command.
#[derive(Clone, Debug, Serialize)]
pub struct Output {
    pub statement: String,
    pub command: String,
    /// The value compared by `expect` clauses and corpus checks.
    pub primary: Value,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

pub struct Session {
    names: Vec<String>,
    bindings: BTreeMap<String, Binding>,
    current_ring: Option<String>,
    pub options: Options,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable report")
}

fn poly_strings(ps: &[Poly]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn tuple(items: &[String]) -> String {
    format!("({})", items.join(", "))
}

fn is_prime_power(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..=n).find(|d| n % d == 0).unwrap();
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

impl Session {
    pub fn new(options: Options) -> Session {
        Session { names: Vec::new(), bindings: BTreeMap::new(), current_ring: None, options }
    }

    pub fn get(&self, name: &str) -> Option<&Binding> {
        self.bindings.get(name)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn lookup(&self, name: &str) -> Result<&Binding> {
        self.bindings.get(name).ok_or_else(|| Error::UnknownReference(name.to_string()))
    }

    pub fn ring(&self, name: &str) -> Result<Ring> {
        match self.lookup(name)? {
            Binding::Ring(r) => Ok(r.clone()),
            Binding::Invariant { model, .. } => Ok(model.presentation().clone()),
            b => Err(Error::Invalid(format!("`{name}` is a {}, not a ring", b.kind()))),
        }
    }

    pub fn ideal(&self, name: &str) -> Result<IdealHandle> {
        match self.lookup(name)? {
            Binding::Ideal(a) => Ok(a.clone()),
            b => Err(Error::Invalid(format!("`{name}` is a {}, not an ideal", b.kind()))),
        }
    }

    pub fn module(&self, name: &str) -> Result<PresentedModule> {
        match self.lookup(name)? {
            Binding::Module(m) => Ok(m.clone()),
            b => Err(Error::Invalid(format!("`{name}` is a {}, not a module", b.kind()))),
        }
    }

    fn bind(&mut self, name: String, b: Binding) -> Result<()> {
        if self.bindings.contains_key(&name) {
            return Err(Error::DuplicateName(name));
        }
        if matches!(b, Binding::Ring(_) | Binding::Invariant { .. }) {
            self.current_ring = Some(name.clone());
        }
        self.names.push(name.clone());
        self.bindings.insert(name, b);
        Ok(())
    }

    fn default_ring(&self, c: &Cursor) -> Result<Ring> {
        match &self.current_ring {
            Some(n) => self.ring(n),
            None => c.err("no ring declared yet"),
        }
    }

    /// `in NAME`, or the most recent ring.
    fn ring_clause(&self, c: &mut Cursor) -> Result<Ring> {
        if c.eat_ident("in") {
            let n = c.ident()?;
            self.ring(&n)
        } else {
            self.default_ring(c)
        }
    }

    /// Runs every statement of `src`, returning the command outputs.
    pub fn exec(&mut self, src: &str) -> Result<Vec<Output>> {
        let _guard = crate::groebner::set_budget(self.options.budget);
        let toks = tokenize(src)?;
        let mut c = Cursor::new(toks);
        let mut out = Vec::new();
        while !c.at_eof() {
            if c.eat_sym(';') {
                continue;
            }
            let start = c.offset();
            if let Some(o) = self.statement(&mut c)? {
                out.push(Output { statement: c.text_since(start), ..o });
            }
            if !c.at_eof() {
                c.expect_sym(';')?;
            }
        }
        Ok(out)
    }

    fn statement(&mut self, c: &mut Cursor) -> Result<Option<Output>> {
        let kw = c.ident()?;
        match kw.as_str() {
            "ring" => self.ring_stmt(c).map(|_| None),
            "ideal" => self.ideal_stmt(c).map(|_| None),
            "module" => self.module_stmt(c).map(|_| None),
            "family" => self.family_stmt(c).map(|_| None),
            "limitring" => self.limit_stmt(c).map(|_| None),
            "perfect" => self.perfect_stmt(c).map(|_| None),
            "veronese" | "invariant" => self.invariant_stmt(c, &kw).map(|_| None),
            "valuation" => self.valuation_stmt(c).map(|_| None),
            "idealize" => self.idealize_stmt(c).map(|_| None),
            _ => {
                let (command, primary, result) = self.command(c, &kw)?;
                let expected = if c.eat_ident("expect") { Some(self.literal(c)?) } else { None };
                let pass = expected.as_ref().map(|e| e == &primary);
                Ok(Some(Output { statement: String::new(), command, primary, result, expected, pass }))
            }
        }
    }

    fn literal(&self, c: &mut Cursor) -> Result<Value> {
        if c.eat_sym('-') {
            let n = c.integer()?;
            return Ok(json!(-(n as i64)));
        }
        match c.peek().clone() {
            Tok::Num(..) => Ok(json!(c.integer()?)),
            Tok::Ident(s) => {
                c.bump();
                Ok(match s.as_str() {
                    "true" => json!(true),
                    "false" => json!(false),
                    _ => json!(s),
                })
            }
            Tok::Sym('(') => Ok(json!(tuple(&c.raw_list()?))),
            Tok::Sym('[') => {
                c.bump();
                let mut items = Vec::new();
                if !c.eat_sym(']') {
                    loop {
                        items.push(self.literal(c)?);
                        if c.eat_sym(']') {
                            break;
                        }
                        c.expect_sym(',')?;
                    }
                }
                Ok(Value::Array(items))
            }
            t => c.err(format!("expected a value, found {}", describe(&t))),
        }
    }

    fn field(&self, c: &mut Cursor) -> Result<Field> {
        let (line, col) = c.pos();
        let name = c.ident()?;
        let p = match name.as_str() {
            "QQ" => return Ok(Field::Rational),
            "GF" => {
                c.expect_sym('(')?;
                let p = c.integer()?;
                c.expect_sym(')')?;
                p
            }
            "ZZ" => {
                c.expect_sym('/')?;
                c.integer()?
            }
            _ => return Err(Error::Syntax { line, col, msg: format!("unknown coefficient field `{name}`") }),
        };
        if is_prime_power(p) && Field::prime(p).is_err() {
            return Err(Error::UnsupportedField(format!("GF({p})")));
        }
        Field::prime(p)
    }

    /// `a,b,c`.
    fn name_list(&self, c: &mut Cursor) -> Result<Vec<String>> {
        let mut v = vec![c.ident()?];
        while c.eat_sym(',') {
            v.push(c.ident()?);
        }
        Ok(v)
    }

    fn ring_stmt(&mut self, c: &mut Cursor) -> Result<()> {
        let name = c.ident()?;
        c.expect_sym('=')?;
        let ring = if let Tok::Ident(base) = c.peek().clone() {
            if self.bindings.contains_key(&base) {
                c.bump();
                let r = self.ring(&base)?;
                c.expect_sym('/')?;
                let extra = c.poly_list(r.ambient())?;
                let mut gens = r.defining().to_vec();
                gens.extend(extra);
                PresentedRing::new(r.ambient(), &gens)?
            } else {
                let field = self.field(c)?;
                let mut vars = Vec::new();
                if c.eat_sym('[') && !c.eat_sym(']') {
                    loop {
                        let v = c.ident()?;
                        if vars.contains(&v) {
                            return c.err(format!("variable `{v}` listed twice"));
                        }
                        vars.push(v);
                        if c.eat_sym(']') {
                            break;
                        }
                        c.expect_sym(',')?;
                    }
                }
                let s = PolyRing::new(field, vars, MonomialOrder::DegRevLex);
                let gens = if c.eat_sym('/') { c.poly_list(&s)? } else { Vec::new() };
                if gens.iter().all(|g| g.is_zero()) {
                    PresentedRing::polynomial(&s)
                } else {
                    PresentedRing::new(&s, &gens)?
                }
            }
        } else {
            return c.err(format!("expected a field or ring, found {}", describe(c.peek())));
        };
        self.bind(name, Binding::Ring(ring))
    }

    fn ideal_stmt(&mut self, c: &mut Cursor) -> Result<()> {
        let name = c.ident()?;
        let ring = self.ring_clause(c)?;
        c.expect_sym('=')?;
        let a = self.ideal_expr(c, &ring)?;
        self.bind(name, Binding::Ideal(a))
    }

    /// `(gens)`, an ideal name, `irrelevant`, or `NAME^k`.
    fn ideal_expr(&self, c: &mut Cursor, ring: &Ring) -> Result<IdealHandle> {
        let a = if c.is_sym('(') {
            IdealHandle::new(ring, c.poly_list(ring.ambient())?)?
        } else if c.eat_ident("irrelevant") {
            IdealHandle::irrelevant(ring)
        } else {
            let n = c.ident()?;
            self.ideal(&n)?
        };
        if c.eat_sym('^') {
            let k = c.integer()?;
            return a.power(k as u32);
        }
        Ok(a)
    }

    fn module_stmt(&mut self, c: &mut Cursor) -> Result<()> {
        let name = c.ident()?;
        let ring = self.ring_clause(c)?;
        c.expect_sym('=')?;
        let m = self.module_expr(c, &ring)?;
        self.bind(name, Binding::Module(m))
    }

    /// `free(b)`, `free(b) / ((v_1..v_b), ...)`, or `quotient(IDEAL)`.
    fn module_expr(&self, c: &mut Cursor, ring: &Ring) -> Result<PresentedModule> {
        let kw = c.ident()?;
        match kw.as_str() {
            "free" => {
                c.expect_sym('(')?;
                let b = c.integer()? as usize;
                c.expect_sym(')')?;
                let mut rels = Vec::new();
                if c.eat_sym('/') {
                    c.expect_sym('(')?;
                    if !c.eat_sym(')') {
                        loop {
                            let (line, col) = c.pos();
                            let v = c.poly_list(ring.ambient())?;
                            if v.len() != b {
                                return Err(Error::Syntax { line, col, msg: format!("relation needs {b} entries") });
                            }
                            rels.push(ModuleElem::from_polys(ring.ambient(), &v));
                            if c.eat_sym(')') {
                                break;
                            }
                            c.expect_sym(',')?;
                        }
                    }
                }
                Ok(PresentedModule::new(ring, b, rels))
            }
            "quotient" => {
                c.expect_sym('(')?;
                let a = self.ideal_expr(c, ring)?;
                c.expect_sym(')')?;
                Ok(a.quotient_module())
            }
            _ => c.err(format!("unknown module form `{kw}`")),
        }
    }

    fn family_stmt(&mut self, c: &mut Cursor) -> Result<()> {
        let name = c.ident()?;
        let ring = self.ring_clause(c)?;
        c.expect_sym('=')?;
        let fam = if c.eat_sym('{') {
            let mut fam = TestFamily::new();
            if !c.eat_sym('}') {
                loop {
                    let a = self.ideal_expr(c, &ring)?;
                    fam.push(a, Provenance::User);
                    if c.eat_sym('}') {
                        break;
                    }
                    c.expect_sym(',')?;
                }
            }
            fam
        } else if c.eat_ident("generated") {
            let mut opts = self.family_options();
            c.expect_sym('(')?;
            if !c.eat_sym(')') {
                loop {
                    let k = c.ident()?;
                    c.expect_sym('=')?;
                    let v = c.integer()?;
                    match k.as_str() {
                        "degree" => opts.degree_bound = v as u32,
                        "cap" => opts.cap = v as usize,
                        "seed" => opts.seed = v,
                        "random" => opts.random = v as usize,
                        "gens" => opts.max_gens = v as usize,
                        _ => return c.err(format!("unknown family option `{k}`")),
                    }
                    if c.eat_sym(')') {
                        break;
                    }
                    c.expect_sym(',')?;
                }
            }
            cmsense::generated_family(&ring, &opts)?
        } else {
            return c.err(format!("expected `{{` or `generated`, found {}", describe(c.peek())));
        };
        self.bind(name, Binding::Family(ring, fam))
    }

    fn family_options(&self) -> FamilyOptions {
        FamilyOptions { degree_bound: self.options.degree_bound, cap: self.options.family_cap, ..FamilyOptions::default() }
    }

    fn opt_name(&self, c: &mut Cursor, default: &str) -> Result<String> {
        if matches!(c.peek(), Tok::Ident(_)) && !matches!(c.peek_at(1), Tok::Sym('=')) {
            c.ident()
        } else {
            Ok(default.to_string())
        }
    }

    fn key(&self, c: &mut Cursor, want: &str) -> Result<()> {
        let (line, col) = c.pos();
        let k = c.ident()?;
        if k != want {
            return Err(Error::Syntax { line, col, msg: format!("expected `{want}=`, found `{k}`") });
        }
        c.expect_sym('=')
    }

    fn limit_stmt(&mut self, c: &mut Cursor) -> Result<()> {
        let name = self.opt_name(c, "L")?;
        self.key(c, "base")?;
        let (base_name, base) = match c.peek().clone() {
            Tok::Ident(n) if self.bindings.contains_key(&n) => {
                c.bump();
                let r = self.ring(&n)?;
                (n, r)
            }
            _ => {
                let f = self.field(c)?;
                (f.name(), PresentedRing::polynomial(&PolyRing::new(f, Vec::new(), MonomialOrder::DegRevLex)))
            }
        };
        let limit = Arc::new(LimitRing::new(&base)?);
        self.bind(name, Binding::Limit { limit, base: base_name })
    }

    fn perfect_stmt(&mut self, c: &mut Cursor) -> Result<()> {
        let name = self.opt_name(c, "P")?;
        let (mut p, mut vars, mut level) = (None, None, 0);
        while matches!(c.peek(), Tok::Ident(_)) {
            let k = c.ident()?;
            c.expect_sym('=')?;
            match k.as_str() {
                "p" => p = Some(c.integer()? as u32),
                "vars" => vars = Some(self.name_list(c)?),
                "level" => level = c.integer()? as u32,
                _ => return c.err(format!("unknown option `{k}`")),
            }
        }
        let (Some(p), Some(vars)) = (p, vars) else {
            return c.err("perfect needs `p=` and `vars=`");
        };
        Field::prime(p as u64)?;
        self.bind(name, Binding::Perfect(PerfectSpec { p, vars, level }))
    }

    fn invariant_stmt(&mut self, c: &mut Cursor, kw: &str) -> Result<()> {
        let name = self.opt_name(c, if kw == "veronese" { "V" } else { "G" })?;
        let (mut n, mut vars, mut field, mut perms, mut weights, mut modulus) =
            (None, None, Field::Rational, Vec::new(), None, None);
        let int_tuple = |c: &mut Cursor| -> Result<Vec<u32>> {
            c.expect_sym('(')?;
            let mut v = Vec::new();
            if !c.eat_sym(')') {
                loop {
                    v.push(c.integer()? as u32);
                    if c.eat_sym(')') {
                        break;
                    }
                    c.expect_sym(',')?;
                }
            }
            Ok(v)
        };
        while matches!(c.peek(), Tok::Ident(_)) {
            let k = c.ident()?;
            c.expect_sym('=')?;
            match k.as_str() {
                "n" => n = Some(c.integer()? as u32),
                "vars" => vars = Some(self.name_list(c)?),
                "field" => field = self.field(c)?,
                "perm" => perms.push(int_tuple(c)?.into_iter().map(|i| i as usize).collect()),
                "weights" => weights = Some(int_tuple(c)?),
                "modulus" => modulus = Some(c.integer()? as u32),
                _ => return c.err(format!("unknown option `{k}`")),
            }
        }
        let Some(vars) = vars else {
            return c.err("missing `vars=`");
        };
        let action = match (kw, n, weights, modulus) {
            ("veronese", Some(n), None, None) => GroupAction::Diagonal { weights: vec![1; vars.len()], modulus: n },
            ("invariant", None, Some(w), Some(m)) if perms.is_empty() => GroupAction::Diagonal { weights: w, modulus: m },
            ("invariant", None, None, None) => GroupAction::Permutations(perms.clone()),
            _ => return c.err("give `n=` for veronese, or `perm=` or `weights=`/`modulus=` for invariant"),
        };
        let field_part = if field == Field::Rational { String::new() } else { format!(" field={field}") };
        let decl = match &action {
            GroupAction::Diagonal { modulus, .. } if kw == "veronese" => {
                format!("veronese {name} n={modulus} vars={}{field_part}", vars.join(","))
            }
            GroupAction::Diagonal { weights, modulus } => {
                let w: Vec<String> = weights.iter().map(|x| x.to_string()).collect();
                format!("invariant {name} vars={} weights={} modulus={modulus}{field_part}", vars.join(","), tuple(&w))
            }
            GroupAction::Permutations(ps) => {
                let mut s = format!("invariant {name} vars={}", vars.join(","));
                for p in ps {
                    let w: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                    s.push_str(&format!(" perm={}", tuple(&w)));
                }
                s + &field_part
            }
        };
        let s = PolyRing::new(field, vars, MonomialOrder::DegRevLex);
        let model = Arc::new(invariant_ring(&PresentedRing::polynomial(&s), action)?);
        self.bind(name, Binding::Invariant { model, decl })
    }

    fn valuation_stmt(&mut self, c: &mut Cursor) -> Result<()> {
        let name = self.opt_name(c, "V")?;
        self.key(c, "rank")?;
        let r = c.integer()? as usize;
        self.bind(name, Binding::Valuation(ValuationModel::new(r)))
    }

    /// `idealize T = R M` or `idealize R M` (bound as `R_M`).
    fn idealize_stmt(&mut self, c: &mut Cursor) -> Result<()> {
        let first = c.ident()?;
        let (name, rname) = if c.eat_sym('=') { (first, c.ident()?) } else { (String::new(), first) };
        let mname = c.ident()?;
        let name = if name.is_empty() { format!("{rname}_{mname}") } else { name };
        let r = self.ring(&rname)?;
        let m = self.module(&mname)?;
        if !Arc::ptr_eq(m.ring(), &r) {
            return Err(Error::AmbientMismatch);
        }
        let t = trivial_extension(&r, &m)?;
        self.bind(name, Binding::Ring(t))
    }

    fn module_or_ring(&self, c: &mut Cursor, ring: &Ring) -> Result<PresentedModule> {
        if c.eat_ident("on") {
            let n = c.ident()?;
            return self.module(&n);
        }
        Ok(PresentedModule::free(ring, 1))
    }

    fn family_clause(&self, c: &mut Cursor, ring: &Ring) -> Result<TestFamily> {
        if c.eat_ident("family") {
            let n = c.ident()?;
            return match self.lookup(&n)? {
                Binding::Family(r, f) if Arc::ptr_eq(r, ring) => Ok(f.clone()),
                Binding::Family(..) => Err(Error::AmbientMismatch),
                b => Err(Error::Invalid(format!("`{n}` is a {}, not a family", b.kind()))),
            };
        }
        cmsense::generated_family(ring, &self.family_options())
    }

    fn target_ring(&self, c: &mut Cursor) -> Result<Ring> {
        match c.peek().clone() {
            Tok::Ident(n) if self.bindings.contains_key(&n) => {
                c.bump();
                self.ring(&n)
            }
            _ => self.default_ring(c),
        }
    }

    fn command(&mut self, c: &mut Cursor, kw: &str) -> Result<(String, Value, Value)> {
        let cmd = kw.to_string();
        match kw {
            "grade" => {
                let (line, col) = c.pos();
                let nname = c.ident()?;
                let notion = Notion::parse(&nname)
                    .ok_or_else(|| Error::Syntax { line, col, msg: format!("unknown grade notion `{nname}`") })?;
                let ring = self.default_ring(c).ok();
                let a = match ring {
                    Some(r) => self.ideal_expr(c, &r)?,
                    None => {
                        let n = c.ident()?;
                        self.ideal(&n)?
                    }
                };
                let m = self.module_or_ring(c, a.ring())?;
                let mut n_max = self.options.n_max;
                if c.eat_ident("nmax") {
                    n_max = c.integer()? as usize;
                }
                let rep = match notion {
                    Notion::Koszul => grade::koszul_grade(&a, &m)?,
                    Notion::Ext => grade::ext_grade(&a, &m)?,
                    Notion::Classical => grade::classical_grade(&a, &m, self.options.classical_bound)?,
                    Notion::PolynomialWitness => grade::polynomial_grade_witness(&a, &m)?,
                    Notion::HgradeTruncated => grade::hgrade_truncated(&a, &m, n_max)?,
                    Notion::CechAlias => grade::cech_grade(&a, &m)?,
                };
                Ok((cmd, to_value(&rep.value), to_value(&rep)))
            }
            "height" => {
                let ring = self.default_ring(c)?;
                let a = self.ideal_expr(c, &ring)?;
                let h = a.height()?;
                Ok((cmd, to_value(&h), json!({ "ideal": a.to_string(), "height": h })))
            }
            "minprimes" | "ass" => {
                let ring = self.default_ring(c)?;
                let a = self.ideal_expr(c, &ring)?;
                let ps = if kw == "minprimes" { a.minimal_primes()? } else { a.quotient_module().associated_primes()? };
                let mut names: Vec<String> = ps.iter().map(|p| p.ideal.to_string()).collect();
                names.sort();
                let detail: Vec<Value> = ps
                    .iter()
                    .map(|p| Ok(json!({ "prime": p.ideal.to_string(), "certified": p.certified, "height": p.height()? })))
                    .collect::<Result<_>>()?;
                Ok((cmd, json!(names), json!({ "ideal": a.to_string(), "primes": detail })))
            }
            "dim" => {
                let r = self.target_ring(c)?;
                let d = r.krull_dim()?;
                Ok((cmd, json!(d), json!({ "ring": r.to_string(), "dim": d })))
            }
            "depth" => {
                let ring = self.default_ring(c)?;
                let p = PrimeWitness::from_ideal(self.ideal_expr(c, &ring)?)?;
                let m = self.module_or_ring(c, &ring)?;
                let d = grade::depth_at_prime(&p, &m)?;
                Ok((cmd, json!(d.value), to_value(&d)))
            }
            "certificate" => {
                let r = self.target_ring(c)?;
                let xs = c.poly_list(r.ambient())?;
                let cert = grade::strong_parameter_certificate(&xs, &r)?;
                Ok((cmd, json!(cert.certified), to_value(&cert)))
            }
            "proregular" => {
                let r = self.target_ring(c)?;
                let xs = c.poly_list(r.ambient())?;
                let (mut n, mut m) = (1, grade::PROREGULAR_LEVELS);
                while c.is_ident("n") || c.is_ident("m") {
                    let k = c.ident()?;
                    c.expect_sym('=')?;
                    let v = c.integer()? as usize;
                    if k == "n" {
                        n = v;
                    } else {
                        m = v;
                    }
                }
                let rep = grade::weak_proregular_check(&xs, n, m, &[PresentedModule::free(&r, 1)])?;
                Ok((cmd, to_value(&rep.verdict), to_value(&rep)))
            }
            "check" => {
                let (line, col) = c.pos();
                let sname = c.ident()?;
                let sense = Sense::parse(&sname)
                    .ok_or_else(|| Error::Syntax { line, col, msg: format!("unknown sense `{sname}`") })?;
                if let Tok::Ident(n) = c.peek().clone() {
                    if let Some(Binding::Valuation(v)) = self.bindings.get(&n) {
                        c.bump();
                        let v = *v;
                        return Ok(valuation_check(v, sense));
                    }
                }
                let r = self.target_ring(c)?;
                let fam = self.family_clause(c, &r)?;
                let rep = run_sense(&r, sense, &fam)?;
                Ok((cmd, to_value(&rep.verdict), to_value(&rep)))
            }
            "audit" => {
                let r = self.target_ring(c)?;
                let fam = self.family_clause(c, &r)?;
                let audit = cmsense::implication_audit(&r, &fam)?;
                Ok((cmd, json!(audit.violations.len()), to_value(&audit)))
            }
            "conditions" => {
                let n = c.ident()?;
                let Binding::Valuation(v) = self.lookup(&n)? else {
                    return Err(Error::Invalid(format!("`{n}` is not a valuation model")));
                };
                let cond = v.conditions();
                Ok((cmd, json!(cond.all_equal() && cond.ideals == (v.rank <= 1)), to_value(&cond)))
            }
            "transfer" => {
                let n = c.ident()?;
                let Binding::Invariant { model, .. } = self.lookup(&n)?.clone() else {
                    return Err(Error::Invalid(format!("`{n}` is not an invariant ring")));
                };
                let a = self.ideal_expr(c, model.presentation())?;
                let rep = invariant_transfer_check(&model, &a)?;
                Ok((cmd, json!(rep.holds()), to_value(&rep)))
            }
            "limitgrade" => {
                let n = c.ident()?;
                let Binding::Limit { limit, .. } = self.lookup(&n)?.clone() else {
                    return Err(Error::Invalid(format!("`{n}` is not a limit ring")));
                };
                let gens = c.raw_list()?;
                let level = if c.eat_ident("level") {
                    c.expect_sym('=')?;
                    Some(c.integer()? as usize)
                } else {
                    None
                };
                let refs: Vec<&str> = gens.iter().map(|s| s.as_str()).collect();
                let rep = limit.grade_and_height(&refs, level)?;
                Ok((cmd, json!([rep.grade, rep.height, rep.stable()]), to_value(&rep)))
            }
            "perfectgrade" => {
                let n = c.ident()?;
                let Binding::Perfect(spec) = self.lookup(&n)?.clone() else {
                    return Err(Error::Invalid(format!("`{n}` is not a perfect closure")));
                };
                let gens = c.raw_list()?;
                let mut level = spec.level;
                if c.eat_ident("level") {
                    c.expect_sym('=')?;
                    level = c.integer()? as u32;
                }
                let refs: Vec<&str> = gens.iter().map(|s| s.as_str()).collect();
                let rep = perfect_closure_ops(spec.p, &spec.vars, level, &refs)?;
                Ok((cmd, json!([rep.grade, rep.height, rep.stable()]), to_value(&rep)))
            }
            "show" => {
                let n = c.ident()?;
                let text = self.print_binding(&n)?;
                Ok((cmd, json!(text), json!({ "name": n, "decl": text })))
            }
            _ => c.err(format!("unknown statement `{kw}`")),
        }
    }

    fn print_binding(&self, name: &str) -> Result<String> {
        let ring_name = |r: &Ring| -> String {
            self.names
                .iter()
                .find(|n| matches!(self.ring(n), Ok(x) if Arc::ptr_eq(&x, r)))
                .cloned()
                .unwrap_or_default()
        };
        Ok(match self.lookup(name)? {
            Binding::Ring(r) => format!("ring {name} = {r}"),
            Binding::Ideal(a) => format!("ideal {name} in {} = {a}", ring_name(a.ring())),
            Binding::Module(m) => {
                let rels: Vec<String> = m.relations().iter().map(|v| tuple(&poly_strings(&v.coords()))).collect();
                let tail = if rels.is_empty() { String::new() } else { format!(" / {}", tuple(&rels)) };
                format!("module {name} in {} = free({}){tail}", ring_name(m.ring()), m.rank())
            }
            Binding::Family(r, f) => format!("family {name} in {} = {{{}}}", ring_name(r), f.describe().join(", ")),
            Binding::Limit { base, .. } => format!("limitring {name} base={base}"),
            Binding::Perfect(s) => format!("perfect {name} p={} vars={} level={}", s.p, s.vars.join(","), s.level),
            Binding::Invariant { decl, .. } => decl.clone(),
            Binding::Valuation(v) => format!("valuation {name} rank={}", v.rank),
        })
    }

    /// Canonical script re-creating every binding.
    pub fn to_script(&self) -> Result<String> {
        let mut out = String::new();
        for n in &self.names {
            out.push_str(&self.print_binding(n)?);
            out.push_str(";\n");
        }
        Ok(out)
    }
}

fn run_sense(r: &Ring, sense: Sense, fam: &TestFamily) -> Result<cmsense::CMReport> {
    let primes = || cmsense::primes_family(r, fam, 16);
    match sense {
        Sense::FgIdeals => cmsense::check_sense_fg(r, fam),
        Sense::Primes => cmsense::check_sense_primes(r, &primes()?),
        Sense::Max => cmsense::check_sense_max(r, &[]),
        Sense::Glaz => cmsense::check_sense_glaz(r, &primes()?),
        Sense::Wb => cmsense::check_wb_unmixed(r, fam, false),
        Sense::Wbh => cmsense::check_wb_unmixed(r, fam, true),
        Sense::HmSurrogate => cmsense::check_hm_surrogate(r, &cmsense::sequence_pool(r, 2)),
    }
}

fn valuation_check(v: ValuationModel, sense: Sense) -> (String, Value, Value) {
    let c = v.conditions();
    let holds = match sense {
        Sense::FgIdeals => c.fg_ideals,
        Sense::Primes => c.primes,
        Sense::Max => c.maximal,
        Sense::Glaz => c.glaz,
        Sense::Wb | Sense::Wbh => c.weak_bourbaki,
        Sense::HmSurrogate => true,
    };
    let verdict = if holds { Verdict::Pass } else { Verdict::Fail };
    ("check".into(), to_value(&verdict), json!({ "model": v, "sense": sense, "verdict": verdict, "conditions": c }))
}
