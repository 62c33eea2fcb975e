//! Example corpus: construction scripts with exact expected values.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dsl::{Options, Session};

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tag {
    /// Stated in the source literature.
    Paper,
    /// Immediate from definitions.
    Trivial,
    /// Computed by an independent oracle and frozen.
    Derived,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub query: &'static str,
    pub expected: Value,
    pub tag: Tag,
}

#[derive(Clone, Debug)]
pub struct CorpusItem {
    pub id: &'static str,
    pub script: &'static str,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub query: String,
    pub tag: Tag,
    pub expected: Value,
    pub got: Value,
    pub pass: bool,
    pub witness: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct ItemResult {
    pub id: String,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn check(query: &'static str, expected: Value, tag: Tag) -> Check {
    Check { query, expected, tag }
}

fn truncation(n: usize) -> String {
    let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let rels: Vec<String> = (1..=n).map(|i| if i == 1 { "x1".to_string() } else { format!("x{i}^{i}") }).collect();
    format!("ring R = GF(2)[{}] / ({});", vars.join(","), rels.join(", "))
}

/// Every corpus item. Scripts are leaked once so items can hold `&'static str`.
pub fn items() -> Vec<CorpusItem> {
    use Tag::*;
    let mut v = Vec::new();
    for n in 3..=5 {
        let id: &'static str = Box::leak(format!("truncation-{n}").into_boxed_str());
        let script: &'static str = Box::leak(truncation(n).into_boxed_str());
        v.push(CorpusItem {
            id,
            script,
            checks: vec![
                check("grade koszul irrelevant", json!(0), Paper),
                check("grade ext irrelevant", json!(0), Derived),
                check("grade classical irrelevant", json!(0), Derived),
                check("height irrelevant", json!(0), Trivial),
            ],
        });
    }
    v.push(CorpusItem {
        id: "plane-and-line-min-primes",
        script: "ring R = QQ[x,y,z] / (x*y, x*z); ideal a = (y);",
        checks: vec![
            check("height a", json!(0), Paper),
            check("height (y, z)", json!(0), Paper),
            check("minprimes a", json!(["(y, x)", "(z, y)"]), Derived),
            check("certificate R (y)", json!(false), Paper),
        ],
    });
    v.push(CorpusItem {
        id: "plane-and-line-senses",
        script: "ring R = QQ[x,y,z] / (x*y, x*z); family F = generated(cap=14, random=4);",
        checks: vec![
            check("check fg R family F", json!("fail"), Derived),
            check("check primes R family F", json!("fail"), Derived),
            check("check glaz R family F", json!("fail"), Derived),
            check("depth irrelevant", json!(1), Derived),
            check("height irrelevant", json!(2), Derived),
            check("audit R family F", json!(0), Derived),
        ],
    });
    v.push(CorpusItem {
        id: "polynomial-plane",
        script: "ring R = QQ[x,y]; family F = generated(cap=14, random=4);",
        checks: vec![
            check("check fg R family F", json!("pass"), Derived),
            check("check primes R family F", json!("pass"), Derived),
            check("check glaz R family F", json!("pass"), Derived),
            check("check wb R family F", json!("pass"), Derived),
            check("check hm R family F", json!("pass"), Derived),
            check("audit R family F", json!(0), Derived),
            check("grade koszul (x, y)", json!(2), Derived),
            check("grade hgrade (x, y)", json!(2), Derived),
        ],
    });
    v.push(CorpusItem {
        id: "field",
        script: "ring K = QQ;",
        checks: vec![check("check fg K", json!("pass"), Trivial), check("grade koszul (0)", json!(0), Trivial)],
    });
    v.push(CorpusItem {
        id: "quadric-cone",
        script: "ring R = QQ[a,b,c] / (b^2 - a*c); family F = generated(cap=14, random=4);",
        checks: vec![
            check("check fg R family F", json!("pass"), Paper),
            check("check primes R family F", json!("pass"), Paper),
            check("check glaz R family F", json!("pass"), Paper),
            check("check wb R family F", json!("pass"), Paper),
            check("grade koszul (a, b)", json!(1), Derived),
            check("height (a, b)", json!(1), Derived),
        ],
    });
    for (id, n, gens) in [
        ("veronese-2", 2, ["(t0, t1, t2)", "(t0)", "(t0, t2)"]),
        ("veronese-3", 3, ["(t0, t1, t2, t3)", "(t0)", "(t0, t3)"]),
    ] {
        let script: &'static str = Box::leak(format!("veronese V n={n} vars=x,y;").into_boxed_str());
        let mut checks: Vec<Check> = gens
            .iter()
            .map(|g| check(Box::leak(format!("transfer V {g}").into_boxed_str()), json!(true), Paper))
            .collect();
        checks.push(check("check fg V", json!("pass"), Paper));
        checks.push(check("dim V", json!(2), Derived));
        v.push(CorpusItem { id, script, checks });
    }
    v.push(CorpusItem {
        id: "veronese-2-presentation",
        script: "veronese V n=2 vars=x,y;",
        checks: vec![check("show V", json!("veronese V n=2 vars=x,y"), Trivial)],
    });
    for r in 0..=3usize {
        let id: &'static str = Box::leak(format!("valuation-rank-{r}").into_boxed_str());
        let script: &'static str = Box::leak(format!("valuation V rank={r};").into_boxed_str());
        let verdict = if r <= 1 { "pass" } else { "fail" };
        v.push(CorpusItem {
            id,
            script,
            checks: vec![
                check("check fg V", json!(verdict), Paper),
                check("check wb V", json!(verdict), Paper),
                check("check max V", json!(verdict), Paper),
                check("conditions V", json!(true), Paper),
            ],
        });
    }
    v.push(CorpusItem {
        id: "limit-ring-rational",
        script: "limitring L base=QQ;",
        checks: vec![
            check("limitgrade L (X1, X3)", json!([2, 2, true]), Derived),
            check("limitgrade L (X1)", json!([1, 1, true]), Trivial),
        ],
    });
    v.push(CorpusItem {
        id: "limit-ring-dual-numbers",
        script: "ring B = QQ[u] / (u^2); limitring L base=B;",
        checks: vec![check("limitgrade L (u, X1)", json!([1, 1, true]), Derived)],
    });
    v.push(CorpusItem {
        id: "perfect-closure-2",
        script: "perfect P p=2 vars=x,z;",
        checks: vec![
            check("perfectgrade P (x^(1/2)) level=1", json!([1, 1, true]), Derived),
            check("perfectgrade P (x) level=0", json!([1, 1, true]), Derived),
            check("perfectgrade P (x^(1/2), z^(1/4)) level=2", json!([2, 2, true]), Derived),
        ],
    });
    v.push(CorpusItem {
        id: "idealization",
        script: "ring R = QQ[x,y]; module M = quotient((x)); idealize T = R M;",
        checks: vec![
            check("dim T", json!(2), Derived),
            check("grade koszul (x, y)", json!(1), Derived),
            check("height (x, y)", json!(2), Derived),
        ],
    });
    v
}

/// Items whose id contains any of the patterns (all items when empty).
pub fn select(patterns: &[String]) -> Vec<CorpusItem> {
    items().into_iter().filter(|it| patterns.is_empty() || patterns.iter().any(|p| it.id.contains(p.as_str()))).collect()
}

pub fn run_item(item: &CorpusItem, options: &Options) -> ItemResult {
    let mut session = Session::new(options.clone());
    let mut result = ItemResult { id: item.id.to_string(), pass: true, checks: Vec::new(), error: None };
    if let Err(e) = session.exec(item.script) {
        result.pass = false;
        result.error = Some(e.to_string());
        return result;
    }
    for c in &item.checks {
        let (got, witness) = match session.exec(c.query) {
            Ok(mut out) if out.len() == 1 => {
                let o = out.pop().unwrap();
                (o.primary, o.result)
            }
            Ok(_) => (Value::Null, json!("query produced no single result")),
            Err(e) => (Value::Null, json!(e.to_string())),
        };
        let pass = got == c.expected;
        result.pass &= pass;
        result.checks.push(CheckResult { query: c.query.to_string(), tag: c.tag, expected: c.expected.clone(), got, pass, witness });
    }
    result
}

/// Runs items on up to `options.workers` threads (0 = all cores); results
/// keep the item order.
pub fn run(items: &[CorpusItem], options: &Options) -> Vec<ItemResult> {
    let go = || items.par_iter().map(|it| run_item(it, options)).collect();
    if options.workers == 0 {
        return go();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(options.workers).build() {
        Ok(pool) => pool.install(go),
        Err(_) => items.iter().map(|it| run_item(it, options)).collect(),
    }
}
