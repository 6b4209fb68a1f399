//! Command implementations. Each returns an [`Outcome`] holding the text
//! and JSON renderings plus the exit code; `main` only prints.

use std::fmt::Write as _;

use serde_json::{json, Value};
use wallis::arith::with_escalation;
use wallis::identity::{
    analogue_type2, closed_form, double_product_reduce, eval_closed_form, gen_radical, gen_rational,
};
use wallis::product::{check_moments, eval_product_with, required_order, EvalOptions, ProductSpec};
use wallis::pte::{pte_search, pte_to_spec, PTEQuery, PTESolution};
use wallis::{Ball, Error, PrecCtx, Rat};

use crate::specfile::SpecFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_CONSTRAINT: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;
pub const EXIT_FALSIFIED: i32 = 4;

pub const DEFAULT_PREC: u32 = 128;
pub const DEFAULT_TOL: f64 = 1e-25;
pub const DEFAULT_CAP: u32 = 512;

#[derive(Debug, Clone)]
pub struct Settings {
    pub prec: u32,
    pub tol: f64,
    pub terms: Option<u64>,
    /// Escalation stops once precision would exceed this many bits.
    pub cap: u32,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            prec: DEFAULT_PREC,
            tol: DEFAULT_TOL,
            terms: None,
            cap: DEFAULT_CAP,
        }
    }
}

impl Settings {
    pub fn ctx(&self) -> Result<PrecCtx, Error> {
        PrecCtx::new(self.prec, self.tol)
    }

    fn opts(&self) -> EvalOptions {
        EvalOptions {
            terms: self.terms,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome {
            code: EXIT_OK,
            text,
            json,
        }
    }

    pub fn from_error(e: &Error) -> Self {
        let code = exit_code(e);
        Outcome {
            code,
            text: format!("error: {e}\n"),
            json: json!({
                "value": null,
                "rad": null,
                "closed_form": null,
                "verdict": "ERROR",
                "error": e.to_string(),
                "exit_code": code,
            }),
        }
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("json values serialize");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidSpec(_) | Error::InvalidExpression(_) => EXIT_PARSE,
        Error::ToleranceNotMet { .. } => EXIT_TOLERANCE,
        Error::ConstraintViolation(_)
        | Error::IncompatibleSpecs(_)
        | Error::InvalidTarget(_)
        | Error::InvalidTransform(_)
        | Error::Domain(_)
        | Error::IrreducibleClosedForm(_) => EXIT_CONSTRAINT,
    }
}

fn ball_json(b: &Ball) -> (Value, Value) {
    (json!(b.mid_string()), json!(b.rad_string()))
}

/// Upper bound on `|x − y|` as text.
fn delta_string(x: &Ball, y: &Ball) -> String {
    format!("{:.2e}", x.dist_upper(y).to_f64())
}

pub fn cmd_check(file: &SpecFile) -> Outcome {
    let spec = &file.spec;
    let order = required_order(spec);
    let report = check_moments(spec, order);
    let mut text = String::new();
    for o in &report.orders {
        writeln!(text, "{o}").unwrap();
    }
    let ok = report.satisfies(order);
    let verdict = if ok { "OK" } else { "FAIL" };
    writeln!(text, "required order {order}: {verdict}").unwrap();
    let orders: Vec<Value> = report
        .orders
        .iter()
        .map(|o| json!({"order": o.j, "sum_a": o.sum_a.to_string(), "sum_b": o.sum_b.to_string(), "equal": o.equal}))
        .collect();
    Outcome {
        code: if ok { EXIT_OK } else { EXIT_CONSTRAINT },
        text,
        json: json!({
            "value": null,
            "rad": null,
            "closed_form": null,
            "verdict": verdict,
            "required_order": order,
            "orders": orders,
        }),
    }
}

pub fn cmd_eval(file: &SpecFile, s: &Settings) -> Result<Outcome, Error> {
    let ctx = s.ctx()?;
    let opts = s.opts();
    let (r, used) = with_escalation(&ctx, s.cap, |c| {
        Ok((eval_product_with(&file.spec, c, &opts)?, c.prec_bits()))
    })?;
    let text = format!("value = {}\nterms = {}, precision = {} bits\n", r.value, r.k_used, used);
    let (v, rad) = ball_json(&r.value);
    Ok(Outcome::ok(
        text,
        json!({
            "value": v,
            "rad": rad,
            "closed_form": null,
            "verdict": "OK",
            "terms": r.k_used,
            "prec_bits": used,
        }),
    ))
}

pub fn cmd_closed_form(file: &SpecFile, s: &Settings) -> Result<Outcome, Error> {
    let cf = closed_form(&file.spec)?;
    let rendered = cf.to_string();
    if !cf.is_fully_reduced()? {
        let text = format!("closed form = {rendered}\nvalue unavailable: Gamma_n atoms with n >= 3 remain\n");
        return Ok(Outcome::ok(
            text,
            json!({"value": null, "rad": null, "closed_form": rendered, "verdict": "IRREDUCIBLE"}),
        ));
    }
    let ctx = s.ctx()?;
    let v = with_escalation(&ctx, s.cap, |c| eval_closed_form(&cf, c))?;
    let (val, rad) = ball_json(&v);
    Ok(Outcome::ok(
        format!("closed form = {rendered}\nvalue = {v}\n"),
        json!({"value": val, "rad": rad, "closed_form": rendered, "verdict": "OK"}),
    ))
}

struct Comparison {
    product: Ball,
    closed: Option<Ball>,
    expected: Option<Ball>,
    prec: u32,
}

pub fn cmd_compare(file: &SpecFile, s: &Settings) -> Result<Outcome, Error> {
    let cf = closed_form(&file.spec)?;
    let reducible = cf.is_fully_reduced()?;
    let expected = file.expected()?;
    let ctx = s.ctx()?;
    let opts = s.opts();
    let cmp = with_escalation(&ctx, s.cap, |c| {
        let product = eval_product_with(&file.spec, c, &opts)?.value;
        let closed = if reducible {
            Some(eval_closed_form(&cf, c)?)
        } else {
            None
        };
        let expected = match &expected {
            Some(e) => Some(eval_closed_form(e, c)?),
            None => None,
        };
        Ok(Comparison {
            product,
            closed,
            expected,
            prec: c.prec_bits(),
        })
    })?;

    let mut text = String::new();
    let mut ok = true;
    let mut worst: Option<String> = None;
    writeln!(text, "product     = {}", cmp.product).unwrap();
    writeln!(text, "closed form = {cf}").unwrap();
    match &cmp.closed {
        Some(v) => {
            writeln!(text, "value       = {v}").unwrap();
            writeln!(text, "|delta|    <= {}", delta_string(&cmp.product, v)).unwrap();
            ok &= cmp.product.overlaps(v);
            worst = Some(delta_string(&cmp.product, v));
        }
        None => writeln!(
            text,
            "warning: closed form keeps Gamma_n atoms (n >= 3); checking the product alone"
        )
        .unwrap(),
    }
    if let (Some(e), Some(v)) = (&file.expect, &cmp.expected) {
        writeln!(text, "expect      = {e}").unwrap();
        writeln!(text, "expected    = {v}").unwrap();
        writeln!(text, "|delta|    <= {}", delta_string(&cmp.product, v)).unwrap();
        ok &= cmp.product.overlaps(v);
        worst.get_or_insert_with(|| delta_string(&cmp.product, v));
    }
    let verdict = if ok { "OK" } else { "FALSIFIED" };
    writeln!(text, "precision   = {} bits", cmp.prec).unwrap();
    writeln!(text, "verdict: {verdict}").unwrap();
    let (v, rad) = ball_json(&cmp.product);
    Ok(Outcome {
        code: if ok { EXIT_OK } else { EXIT_FALSIFIED },
        text,
        json: json!({
            "value": v,
            "rad": rad,
            "closed_form": cf.to_string(),
            "verdict": verdict,
            "delta": worst,
            "prec_bits": cmp.prec,
        }),
    })
}

fn spec_outcome(header: &str, file: &SpecFile, extra: Value) -> Outcome {
    let text = format!("{header}{}", file.render());
    let mut j = json!({
        "value": null,
        "rad": null,
        "closed_form": file.expect,
        "verdict": "OK",
        "spec": file.render(),
    });
    if let (Value::Object(m), Value::Object(x)) = (&mut j, extra) {
        m.extend(x);
    }
    Outcome::ok(text, j)
}

pub fn cmd_analogue(file: &SpecFile) -> Result<Outcome, Error> {
    let out = analogue_type2(&file.spec)?;
    let f = SpecFile {
        spec: out,
        expect: file.expect.clone(),
    };
    Ok(spec_outcome("# Type-II analogue\n", &f, json!({})))
}

pub fn cmd_double(file: &SpecFile) -> Result<Outcome, Error> {
    let d = double_product_reduce(&file.spec)?;
    let mut text = format!("residual R(r) = {}\n", d.template);
    let mut j = json!({
        "value": null,
        "rad": null,
        "closed_form": file.expect,
        "residual": d.template.to_string(),
        "reducible": d.reducible,
        "verdict": if d.reducible { "REDUCIBLE" } else { "IRREDUCIBLE" },
    });
    match &d.reduced {
        Some(r) => {
            let f = SpecFile {
                spec: r.clone(),
                expect: file.expect.clone(),
            };
            writeln!(text, "reducible: yes\n# Type-I form").unwrap();
            text.push_str(&f.render());
            j["spec"] = json!(f.render());
        }
        None => writeln!(text, "reducible: no").unwrap(),
    }
    Ok(Outcome::ok(text, j))
}

pub fn cmd_radical(k: u32) -> Result<Outcome, Error> {
    let (spec, _) = gen_radical(k)?;
    // the library form prints as a monomial; spell out the quotient
    let expect = format!("sinpi(1/{})/sinpi(1/{})", 1u64 << k, 1u64 << (k + 1));
    let f = SpecFile::new(spec).with_expect(expect);
    Ok(spec_outcome(&format!("# 2*cos(pi/2^{})\n", k + 1), &f, json!({})))
}

pub fn cmd_rational(p: i64, q: i64) -> Result<Outcome, Error> {
    let (spec, cf) = gen_rational(p, q)?;
    let f = SpecFile::new(spec).with_expect(cf.to_string());
    Ok(spec_outcome(&format!("# {p}/{q}\n"), &f, json!({})))
}

fn solution_string(s: &PTESolution) -> String {
    let side = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
    format!("({}) | ({})", side(&s.a), side(&s.b))
}

pub fn cmd_pte(q: &PTEQuery, emit_specs: bool) -> Result<Outcome, Error> {
    let sols = pte_search(q);
    let mut text = String::new();
    let mut items = Vec::new();
    for s in &sols {
        let line = solution_string(s);
        let mut item = json!({"a": s.a, "b": s.b, "matched_order": s.matched_order});
        if emit_specs {
            let spec = pte_to_spec(s, q.order, &Rat::one(), &Rat::zero())?;
            let f = SpecFile::new(spec);
            writeln!(text, "# {line}").unwrap();
            text.push_str(&f.render());
            text.push('\n');
            item["spec"] = json!(f.render());
        } else {
            writeln!(text, "{line}").unwrap();
        }
        items.push(item);
    }
    if sols.is_empty() {
        writeln!(text, "no solutions").unwrap();
    }
    Ok(Outcome::ok(
        text,
        json!({
            "value": null,
            "rad": null,
            "closed_form": null,
            "verdict": "OK",
            "solutions": items,
        }),
    ))
}

/// Builds a spec from literal parameter lists.
pub(crate) fn spec(a: &[&str], b: &[&str], exponent: &[&str], start: u32) -> ProductSpec {
    let rats = |xs: &[&str]| {
        xs.iter()
            .map(|s| s.parse::<Rat>().expect("literal rational"))
            .collect::<Vec<_>>()
    };
    ProductSpec::new(rats(a), rats(b), rats(exponent), start).expect("literal spec is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(text: &str) -> SpecFile {
        SpecFile::parse(text).unwrap()
    }

    const WALLIS: &str = "a = [0, 0]\nb = [-1/2, 1/2]\nexponent = 1\n";

    #[test]
    fn check_reports_orders() {
        let o = cmd_check(&file(WALLIS));
        assert_eq!(o.code, EXIT_OK);
        assert!(o.text.starts_with("order 1: OK\n"), "{}", o.text);
        let o = cmd_check(&file("a = [0, 0]\nb = [-1/2, 1/2]\nexponent = k\n"));
        assert_eq!(o.code, EXIT_CONSTRAINT);
        assert!(o.text.contains("order 2: FAIL (0 ≠ 1/2)"), "{}", o.text);
    }

    #[test]
    fn compare_wallis() {
        let o = cmd_compare(&file(WALLIS), &Settings::default()).unwrap();
        assert_eq!(o.code, EXIT_OK);
        assert!(o.text.contains("closed form = pi/2"));
        assert_eq!(o.json["verdict"], "OK");
        assert_eq!(o.json["closed_form"], "pi/2");
    }

    #[test]
    fn compare_detects_a_wrong_expectation() {
        let o = cmd_compare(&file(&format!("{WALLIS}expect = 22/14\n")), &Settings::default()).unwrap();
        assert_eq!(o.code, EXIT_FALSIFIED);
        assert_eq!(o.json["verdict"], "FALSIFIED");
    }

    #[test]
    fn eval_escalates_and_gives_up() {
        let s = Settings {
            prec: 64,
            tol: 1e-30,
            ..Settings::default()
        };
        let o = cmd_eval(&file(WALLIS), &s).unwrap();
        assert!(o.json["prec_bits"].as_u64().unwrap() >= 128);
        let capped = Settings { cap: 64, ..s };
        let e = cmd_eval(&file(WALLIS), &capped).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_TOLERANCE);
    }

    #[test]
    fn generators_round_trip() {
        let o = cmd_radical(1).unwrap();
        let f = SpecFile::parse(&o.text).unwrap();
        assert_eq!(f.expect.as_deref(), Some("sinpi(1/2)/sinpi(1/4)"));
        assert_eq!(cmd_compare(&f, &Settings::default()).unwrap().code, EXIT_OK);
        let o = cmd_rational(3, 2).unwrap();
        let f = SpecFile::parse(&o.text).unwrap();
        assert_eq!(cmd_compare(&f, &Settings::default()).unwrap().code, EXIT_OK);
        let o = cmd_analogue(&file(&format!("{WALLIS}expect = pi/2\n"))).unwrap();
        let f = SpecFile::parse(&o.text).unwrap();
        assert_eq!(f.spec.exponent(), spec(&["0"], &["0"], &["0", "1"], 1).exponent());
        assert_eq!(cmd_compare(&f, &Settings::default()).unwrap().code, EXIT_OK);
    }

    #[test]
    fn double_reports_both_kinds() {
        let root2 = "a = [-1/2, -1/2, 1/4, 3/4]\nb = [-3/4, -1/4, 1/2, 1/2]\nexponent = k\n";
        let o = cmd_double(&file(root2)).unwrap();
        assert!(o.text.contains("reducible: yes"));
        assert!(
            o.text
                .contains("a = [1/2, 1/2]\nb = [1/4, 3/4]\nexponent = 1\nstart = 0\n"),
            "{}",
            o.text
        );
        let cat = "a = [-1/4, -1/4, -1/4, 3/4]\nb = [-3/4, 1/4, 1/4, 1/4]\nexponent = k\n";
        let o = cmd_double(&file(cat)).unwrap();
        assert!(o.text.contains("reducible: no"));
    }

    #[test]
    fn pte_lines() {
        let o = cmd_pte(&PTEQuery::new(1, 2, 3), false).unwrap();
        assert!(o.text.lines().any(|l| l == "(0,3) | (1,2)"), "{}", o.text);
        let o = cmd_pte(&PTEQuery::new(1, 2, 3).with_limit(1), true).unwrap();
        let block: String = o.text.lines().skip(1).map(|l| format!("{l}\n")).collect();
        assert!(SpecFile::parse(&block).is_ok(), "{}", o.text);
    }
}
