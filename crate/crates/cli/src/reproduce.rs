//! The identity table: every worked example, checked by the product route,
//! the closed-form route and, where one exists, an independent oracle.

use std::fmt::Write as _;

use serde_json::{json, Value};
use wallis::arith::with_escalation;
use wallis::identity::{analogue_type2, closed_form, eval_closed_form, gen_radical, gen_rational};
use wallis::product::{eval_product_with, ProductSpec};
use wallis::special::{const_catalan, const_e, const_glaisher, const_pi};
use wallis::{Ball, PrecCtx, Rat, Result};

use crate::commands::{spec, Outcome, Settings, EXIT_FALSIFIED, EXIT_OK};

type Oracle = fn(&PrecCtx) -> Result<Ball>;

pub struct Row {
    pub name: &'static str,
    pub spec: ProductSpec,
    /// Canonical closed-form text the theorem must produce.
    pub closed_form: String,
    pub oracle: Oracle,
}

fn sqrt_int(n: i64, ctx: &PrecCtx) -> Result<Ball> {
    Ball::from_i64(n, ctx.prec_bits()).sqrt()
}

/// `2cos(π/2^{k+1})` as `k` nested square roots of 2.
fn nested_root(k: u32, ctx: &PrecCtx) -> Result<Ball> {
    let p = ctx.prec_bits();
    let mut x = Ball::zero(p);
    for _ in 0..k {
        x = x.add_rat(&Rat::int(2)).sqrt()?;
    }
    Ok(x)
}

fn wallis() -> ProductSpec {
    spec(&["0", "0"], &["-1/2", "1/2"], &["1"], 1)
}

fn gamma3_constants() -> (Vec<&'static str>, Vec<&'static str>) {
    (
        vec!["0", "0", "0", "3/2", "3/2", "3/2"],
        vec!["-1/2", "1/2", "1/2", "1", "1", "2"],
    )
}

pub fn rows() -> Vec<Row> {
    let (a3, b3) = gamma3_constants();
    let mut rows = vec![
        Row {
            name: "Wallis",
            spec: wallis(),
            closed_form: "pi/2".into(),
            oracle: |c| const_pi(c).div_i64(2),
        },
        Row {
            name: "golden ratio",
            spec: spec(&["3/10", "7/10"], &["1/6", "5/6"], &["1"], 0),
            closed_form: "2*sinpi(3/10)".into(),
            oracle: |c| Ok(sqrt_int(5, c)?.add_rat(&Rat::one()).mul_rat(&Rat::new(1, 2))),
        },
    ];
    let roots: [(u32, &'static str, Oracle); 3] = [
        (1, "root two, k = 1", |c| nested_root(1, c)),
        (2, "root two, k = 2", |c| nested_root(2, c)),
        (3, "root two, k = 3", |c| nested_root(3, c)),
    ];
    for (k, name, oracle) in roots {
        let (s, cf) = gen_radical(k).expect("small radical levels are valid");
        rows.push(Row {
            name,
            spec: s,
            closed_form: cf.to_string(),
            oracle,
        });
    }
    rows.extend([
        Row {
            name: "rational 22/7",
            spec: gen_rational(22, 7).expect("positive").0,
            closed_form: "22/7".into(),
            oracle: |c| Ok(Ball::from_rat(&Rat::new(22, 7), c.prec_bits())),
        },
        Row {
            name: "exp(2K/pi)",
            spec: spec(
                &["-1/4", "-1/4", "-1/4", "3/4"],
                &["-3/4", "1/4", "1/4", "1/4"],
                &["0", "1"],
                1,
            ),
            closed_form: "exp(2*K/pi)".into(),
            oracle: |c| Ok(const_catalan(c).mul_i64(2).div_ball(&const_pi(c))?.exp()),
        },
        Row {
            name: "four fifths",
            spec: spec(
                &["1/3", "5/3", "5/3", "7/3"],
                &["2/3", "4/3", "4/3", "8/3"],
                &["0", "1"],
                1,
            ),
            closed_form: "4/5".into(),
            oracle: |c| Ok(Ball::from_rat(&Rat::new(4, 5), c.prec_bits())),
        },
        Row {
            name: "root two, Type-II",
            spec: spec(
                &["-1/2", "-1/2", "1/4", "3/4"],
                &["-3/4", "-1/4", "1/2", "1/2"],
                &["0", "1"],
                1,
            ),
            closed_form: "2^(1/2)".into(),
            oracle: |c| sqrt_int(2, c),
        },
        Row {
            name: "pi/2, Type-II analogue",
            spec: analogue_type2(&wallis()).expect("Wallis has a Type-II analogue"),
            closed_form: "pi/2".into(),
            oracle: |c| const_pi(c).div_i64(2),
        },
        Row {
            name: "E(k) = k^2",
            spec: spec(&a3, &b3, &["0", "0", "1"], 1),
            closed_form: "8*A^12 / (e*pi^3*2^(1/3))".into(),
            oracle: |c| {
                let p = c.prec_bits();
                let num = const_glaisher(c)?.powi(12)?.mul_i64(8);
                let cube_root_2 = Ball::from_i64(2, p).pow_rat(&Rat::new(1, 3))?;
                let den = const_e(c).mul_ball(&const_pi(c).powi(3)?).mul_ball(&cube_root_2);
                num.div_ball(&den)
            },
        },
    ]);
    rows
}

#[derive(Debug)]
struct Checked {
    product: Ball,
    closed: Ball,
    oracle: Ball,
}

/// Every row, plus a test hook: `corrupt = Some(i)` nudges the closed-form
/// value of row `i` (1-based) so the failure path can be exercised.
pub fn cmd_reproduce(s: &Settings, corrupt: Option<usize>) -> Result<Outcome> {
    let ctx = s.ctx()?;
    let opts = wallis::product::EvalOptions {
        terms: s.terms,
        parallel: false,
    };
    let mut text = String::new();
    let mut table = Vec::new();
    let mut all_ok = true;
    writeln!(
        text,
        "{:>2}  {:<24} {:<28} {:>10}  verdict",
        "#", "identity", "closed form", "|delta|"
    )
    .unwrap();
    for (i, row) in rows().into_iter().enumerate() {
        let cf = closed_form(&row.spec)?;
        let form_ok = cf.to_string() == row.closed_form;
        let got = with_escalation(&ctx, s.cap, |c| {
            let mut closed = eval_closed_form(&cf, c)?;
            if corrupt == Some(i + 1) {
                closed = closed.add_rat(&Rat::new(1, 1_000_000_000_000));
            }
            Ok(Checked {
                product: eval_product_with(&row.spec, c, &opts)?.value,
                closed,
                oracle: (row.oracle)(c)?,
            })
        })?;
        let d1 = got.product.dist_upper(&got.closed).to_f64();
        let d2 = got.product.dist_upper(&got.oracle).to_f64();
        let ok = form_ok && got.product.overlaps(&got.closed) && got.product.overlaps(&got.oracle);
        all_ok &= ok;
        let verdict = if ok { "OK" } else { "FALSIFIED" };
        let shown = if form_ok {
            cf.to_string()
        } else {
            format!("{cf} (wanted {})", row.closed_form)
        };
        writeln!(
            text,
            "{:>2}  {:<24} {:<28} {:>10.2e}  {verdict}",
            i + 1,
            row.name,
            shown,
            d1.max(d2)
        )
        .unwrap();
        table.push(json!({
            "identity": row.name,
            "closed_form": cf.to_string(),
            "value": got.product.mid_string(),
            "rad": got.product.rad_string(),
            "delta": d1.max(d2),
            "verdict": verdict,
        }));
    }
    let verdict = if all_ok { "OK" } else { "FALSIFIED" };
    writeln!(text, "verdict: {verdict}").unwrap();
    Ok(Outcome {
        code: if all_ok { EXIT_OK } else { EXIT_FALSIFIED },
        text,
        json: json!({
            "value": Value::Null,
            "rad": Value::Null,
            "closed_form": Value::Null,
            "verdict": verdict,
            "rows": table,
        }),
    })
}
