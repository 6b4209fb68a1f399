//! The text format for product specs.
//!
//! ```text
//! # Wallis
//! a = [0, 0]
//! b = [-1/2, 1/2]
//! exponent = 1
//! start = 1
//! expect = pi/2
//! ```
//!
//! `exponent` is `1`, `k`, `k^2`, `binom(n)` or a polynomial such as
//! `1/2*k + 1/2*k^2`. `start` defaults to 1; `expect` is optional.

use std::fmt::Write as _;

use wallis::identity::ClosedForm;
use wallis::product::{binom_exponent, ProductSpec};
use wallis::{Error, Rat, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SpecFile {
    pub spec: ProductSpec,
    /// Closed-form text the product is expected to equal.
    pub expect: Option<String>,
}

impl SpecFile {
    pub fn new(spec: ProductSpec) -> Self {
        SpecFile { spec, expect: None }
    }

    pub fn with_expect(mut self, expect: impl Into<String>) -> Self {
        self.expect = Some(expect.into());
        self
    }

    /// The parsed `expect` expression, if any.
    pub fn expected(&self) -> Result<Option<ClosedForm>> {
        self.expect.as_deref().map(str::parse).transpose()
    }

    pub fn parse(text: &str) -> Result<SpecFile> {
        let mut a = None;
        let mut b = None;
        let mut exponent = None;
        let mut start = None;
        let mut expect = None;
        for (i, raw) in text.split('\n').enumerate() {
            let line_no = i + 1;
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            let content = match line.find('#') {
                Some(p) => &line[..p],
                None => line,
            };
            if content.trim().is_empty() {
                continue;
            }
            let Some(eq) = content.find('=') else {
                return Err(at(line_no, 1, "expected `key = value`"));
            };
            let key = content[..eq].trim();
            let value_col = eq + 2 + (content[eq + 1..].len() - content[eq + 1..].trim_start().len());
            let value = content[eq + 1..].trim();
            let dup = || at(line_no, 1, &format!("duplicate key `{key}`"));
            match key {
                "a" => {
                    if a.replace(parse_list(value, line_no, value_col)?).is_some() {
                        return Err(dup());
                    }
                }
                "b" => {
                    if b.replace(parse_list(value, line_no, value_col)?).is_some() {
                        return Err(dup());
                    }
                }
                "exponent" => {
                    if exponent.replace(parse_exponent(value, line_no, value_col)?).is_some() {
                        return Err(dup());
                    }
                }
                "start" => {
                    let s = match value {
                        "0" => 0,
                        "1" => 1,
                        _ => return Err(at(line_no, value_col, &format!("start must be 0 or 1, got `{value}`"))),
                    };
                    if start.replace(s).is_some() {
                        return Err(dup());
                    }
                }
                "expect" => {
                    value
                        .parse::<ClosedForm>()
                        .map_err(|e| at(line_no, value_col, &e.to_string()))?;
                    if expect.replace(value.to_string()).is_some() {
                        return Err(dup());
                    }
                }
                _ => return Err(at(line_no, 1, &format!("unknown key `{key}`"))),
            }
        }
        let a = a.ok_or_else(|| Error::Parse("missing key `a`".into()))?;
        let b = b.ok_or_else(|| Error::Parse("missing key `b`".into()))?;
        let exponent = exponent.unwrap_or_else(|| vec![Rat::one()]);
        let spec = ProductSpec::new(a, b, exponent, start.unwrap_or(1))?;
        Ok(SpecFile { spec, expect })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let list = |v: &[Rat]| v.iter().map(Rat::to_string).collect::<Vec<_>>().join(", ");
        writeln!(out, "a = [{}]", list(self.spec.a())).unwrap();
        writeln!(out, "b = [{}]", list(self.spec.b())).unwrap();
        writeln!(out, "exponent = {}", render_exponent(self.spec.exponent())).unwrap();
        writeln!(out, "start = {}", self.spec.start()).unwrap();
        if let Some(e) = &self.expect {
            writeln!(out, "expect = {e}").unwrap();
        }
        out
    }
}

fn at(line: usize, col: usize, msg: &str) -> Error {
    Error::Parse(format!("line {line}, column {col}: {msg}"))
}

fn parse_list(value: &str, line: usize, col: usize) -> Result<Vec<Rat>> {
    let inner = value
        .strip_prefix('[')
        .and_then(|v| v.strip_suffix(']'))
        .ok_or_else(|| at(line, col, "expected a bracketed list like `[0, 1/2]`"))?;
    if inner.trim().is_empty() {
        return Err(at(line, col, "empty parameter list"));
    }
    let mut out = Vec::new();
    let mut offset = col + 1;
    for item in inner.split(',') {
        let lead = item.len() - item.trim_start().len();
        let r = item
            .parse::<Rat>()
            .map_err(|e| at(line, offset + lead, &e.to_string().replace("parse error: ", "")))?;
        out.push(r);
        offset += item.len() + 1;
    }
    Ok(out)
}

/// Coefficients `c_0, c_1, …` of the exponent polynomial.
pub fn parse_exponent(value: &str, line: usize, col: usize) -> Result<Vec<Rat>> {
    let v = value.trim();
    if let Some(n) = v.strip_prefix("binom(").and_then(|r| r.strip_suffix(')')) {
        let n: u32 = n
            .trim()
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| at(line, col, "binom(n) needs an integer n >= 1"))?;
        return Ok(binom_exponent(n));
    }
    let mut coeffs: Vec<Rat> = Vec::new();
    let mut rest = v;
    let mut pos = col;
    let mut first = true;
    while !rest.is_empty() {
        // sign
        let mut neg = false;
        let trimmed = rest.trim_start();
        pos += rest.len() - trimmed.len();
        rest = trimmed;
        if !first || rest.starts_with('-') || rest.starts_with('+') {
            match rest.chars().next() {
                Some('+') => {}
                Some('-') => neg = true,
                _ => return Err(at(line, pos, "expected `+` or `-`")),
            }
            rest = &rest[1..];
            pos += 1;
            let trimmed = rest.trim_start();
            pos += rest.len() - trimmed.len();
            rest = trimmed;
            if let Some(r) = rest.strip_prefix('-') {
                neg = !neg;
                rest = r;
                pos += 1;
            }
        }
        first = false;
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let term = &rest[..end];
        let (c, m) =
            parse_term(term.trim()).ok_or_else(|| at(line, pos, &format!("invalid term `{}`", term.trim())))?;
        if coeffs.len() <= m {
            coeffs.resize(m + 1, Rat::zero());
        }
        coeffs[m] += &(if neg { -c } else { c });
        pos += end;
        rest = &rest[end..];
    }
    if coeffs.is_empty() {
        return Err(at(line, col, "empty exponent"));
    }
    Ok(coeffs)
}

/// `c`, `k`, `k^d`, `c*k`, `c*k^d`.
fn parse_term(t: &str) -> Option<(Rat, usize)> {
    let (coef, mono) = match t.split_once('*') {
        Some((c, m)) => (Some(c.trim()), m.trim()),
        None if t.starts_with('k') => (None, t),
        None => return Some((t.parse().ok()?, 0)),
    };
    let c = match coef {
        Some(c) => c.parse().ok()?,
        None => Rat::one(),
    };
    let m = if mono == "k" {
        1
    } else {
        let d = mono.strip_prefix("k^")?.trim();
        d.parse::<usize>().ok().filter(|&d| d <= 64)?
    };
    Some((c, m))
}

pub fn render_exponent(c: &[Rat]) -> String {
    let n = c.len() as u32;
    if n >= 3 && binom_exponent(n) == c {
        return format!("binom({n})");
    }
    let mut out = String::new();
    for (m, cm) in c.iter().enumerate() {
        if cm.is_zero() {
            continue;
        }
        let mono = match m {
            0 => String::new(),
            1 => "k".to_string(),
            _ => format!("k^{m}"),
        };
        let mag = cm.abs();
        let body = if m == 0 {
            mag.to_string()
        } else if mag == Rat::one() {
            mono
        } else {
            format!("{mag}*{mono}")
        };
        if out.is_empty() {
            if cm.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if cm.is_negative() { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const WALLIS: &str = "# Wallis\na = [0, 0]\nb = [-1/2, 1/2]\nexponent = 1\nstart = 1\nexpect = pi/2\n";

    fn rats(xs: &[&str]) -> Vec<Rat> {
        xs.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn parses_wallis() {
        let f = SpecFile::parse(WALLIS).unwrap();
        assert_eq!(f.spec.a(), rats(&["0", "0"]).as_slice());
        assert_eq!(f.spec.b(), rats(&["-1/2", "1/2"]).as_slice());
        assert_eq!(f.expect.as_deref(), Some("pi/2"));
        assert_eq!(f.render(), WALLIS.trim_start_matches("# Wallis\n"));
    }

    #[test]
    fn crlf_and_comments() {
        let text = "a = [1/3, 5/3] # trailing\r\n\r\n# full line\r\nb = [2/3, 4/3]\r\n";
        let f = SpecFile::parse(text).unwrap();
        assert_eq!(f.spec.start(), 1);
        assert_eq!(f.spec.exponent(), rats(&["1"]).as_slice());
    }

    #[test]
    fn exponents() {
        let p = |s: &str| parse_exponent(s, 1, 1).unwrap();
        assert_eq!(p("1"), rats(&["1"]));
        assert_eq!(p("k"), rats(&["0", "1"]));
        assert_eq!(p("k^2"), rats(&["0", "0", "1"]));
        assert_eq!(p("binom(3)"), rats(&["0", "1/2", "1/2"]));
        assert_eq!(p("1/2*k + 1/2*k^2"), rats(&["0", "1/2", "1/2"]));
        assert_eq!(p("2 - k + 3*k^2"), rats(&["2", "-1", "3"]));
        assert_eq!(p("-1 + -2*k"), rats(&["-1", "-2"]));
        assert_eq!(render_exponent(&rats(&["0", "1/2", "1/2"])), "binom(3)");
        assert_eq!(render_exponent(&rats(&["2", "-1", "3"])), "2 - k + 3*k^2");
        assert_eq!(render_exponent(&rats(&["0", "0", "1"])), "k^2");
        assert!(parse_exponent("k^^2", 1, 1).is_err());
        assert!(parse_exponent("binom(0)", 1, 1).is_err());
    }

    #[test]
    fn errors_have_positions() {
        let cases = [
            ("a = [1/0]\nb = [1]\n", "line 1, column 6"),
            ("a = [1, x]\nb = [1, 2]\n", "line 1, column 9"),
            ("a = [1]\nb = [1]\nfoo = 3\n", "line 3, column 1"),
            ("a = [1]\nb = [1]\nstart = 2\n", "line 3, column 9"),
            ("a = [1]\nb = [1]\nexpect = pi +\n", "line 3, column 10"),
            ("a = [1]\na = [2]\nb = [1]\n", "line 2"),
            ("a = [1]\n", "missing key `b`"),
        ];
        for (text, want) in cases {
            match SpecFile::parse(text) {
                Err(Error::Parse(msg)) => assert!(msg.contains(want), "{text:?}: {msg}"),
                other => panic!("{text:?}: expected a parse error, got {other:?}"),
            }
        }
        // a valid file that breaks the positivity rule
        assert!(matches!(
            SpecFile::parse("a = [-1]\nb = [0]\n"),
            Err(Error::InvalidSpec(_))
        ));
    }
}
