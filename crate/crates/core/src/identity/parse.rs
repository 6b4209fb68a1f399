//! Parser for the closed-form text grammar.
//!
//! ```text
//! expr     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := primary ('^' exponent)?
//! exponent := int | '-' int | '(' rational ')'
//! primary  := int | pi | e | gamma | K | A
//!           | Gamma(r) | Gamma_n(r) | G(r) | sinpi(r)
//!           | exp(sum) | '(' expr ')'
//! sum      := ['-' | '+'] expr (('+' | '-') expr)*
//! ```
//!
//! `exp(a + b)` is read as `exp(a) * exp(b)`.

use std::str::FromStr;

use super::form::ClosedForm;
use crate::arith::Rat;
use crate::error::{Error, Result};

impl FromStr for ClosedForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_closed_form(s)
    }
}

pub fn parse_closed_form(s: &str) -> Result<ClosedForm> {
    let mut p = Parser { src: s, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != s.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::InvalidExpression(format!(
            "{msg} at column {} of `{}`",
            self.src[..self.pos].chars().count() + 1,
            self.src
        ))
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &str {
        self.skip_ws();
        let start = self.pos;
        let len: usize = self.src[start..]
            .chars()
            .take_while(|&c| f(c))
            .map(char::len_utf8)
            .sum();
        self.pos += len;
        &self.src[start..self.pos]
    }

    fn expr(&mut self) -> Result<ClosedForm> {
        let mut factors = vec![self.unary()?];
        loop {
            if self.eat('*') {
                factors.push(self.unary()?);
            } else if self.eat('/') {
                factors.push(self.unary()?.recip());
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            ClosedForm::Mul(factors)
        })
    }

    fn unary(&mut self) -> Result<ClosedForm> {
        if self.eat('-') {
            return Ok(ClosedForm::mul(vec![ClosedForm::int(-1), self.unary()?]));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ClosedForm> {
        let base = self.primary()?;
        if self.eat('^') {
            let q = self.exponent()?;
            return Ok(base.pow(q));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Rat> {
        if self.eat('(') {
            let q = self.rational()?;
            self.expect(')')?;
            return Ok(q);
        }
        let neg = self.eat('-');
        let digits = self.take_while(|c| c.is_ascii_digit()).to_string();
        if digits.is_empty() {
            return Err(self.error("expected an exponent"));
        }
        let q: Rat = digits.parse()?;
        Ok(if neg { -q } else { q })
    }

    /// Signed `p` or `p/q`.
    fn rational(&mut self) -> Result<Rat> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let num = self.take_while(|c| c.is_ascii_digit()).to_string();
        if num.is_empty() {
            return Err(self.error("expected a rational number"));
        }
        let mut text = num;
        if self.eat('/') {
            let den = self.take_while(|c| c.is_ascii_digit()).to_string();
            if den.is_empty() {
                return Err(self.error("expected a denominator"));
            }
            text = format!("{text}/{den}");
        }
        let q: Rat = text.parse().map_err(|_| self.error("invalid rational"))?;
        Ok(if neg { -q } else { q })
    }

    fn call_arg(&mut self) -> Result<Rat> {
        self.expect('(')?;
        let r = self.rational()?;
        self.expect(')')?;
        Ok(r)
    }

    fn primary(&mut self) -> Result<ClosedForm> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit()).to_string();
                Ok(ClosedForm::Rat(digits.parse()?))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let ident = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_').to_string();
                match ident.as_str() {
                    "pi" => Ok(ClosedForm::Pi),
                    "e" => Ok(ClosedForm::E),
                    "gamma" => Ok(ClosedForm::EulerGamma),
                    "K" => Ok(ClosedForm::Catalan),
                    "A" => Ok(ClosedForm::Glaisher),
                    "Gamma" => Ok(ClosedForm::GammaAt(self.call_arg()?)),
                    "G" => Ok(ClosedForm::BarnesGAt(self.call_arg()?)),
                    "sinpi" => Ok(ClosedForm::SinPi(self.call_arg()?)),
                    "exp" => {
                        self.expect('(')?;
                        let e = self.sum()?;
                        self.expect(')')?;
                        Ok(e)
                    }
                    _ => {
                        if let Some(level) = ident.strip_prefix("Gamma_") {
                            if let Ok(level) = level.parse::<u32>() {
                                if level >= 1 {
                                    let arg = self.call_arg()?;
                                    return Ok(ClosedForm::MultiGammaAt { level, arg });
                                }
                            }
                        }
                        self.pos = start;
                        Err(self.error(&format!("unknown name `{ident}`")))
                    }
                }
            }
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    /// Inside `exp(...)`: a signed sum of products, returned as a product of exps.
    fn sum(&mut self) -> Result<ClosedForm> {
        let mut terms = Vec::new();
        let mut neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let t = self.expr()?;
            terms.push(if neg {
                ClosedForm::mul(vec![ClosedForm::int(-1), t]).exp()
            } else {
                t.exp()
            });
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            ClosedForm::Mul(terms)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::form::print_closed_form;

    fn canon(s: &str) -> String {
        print_closed_form(&s.parse::<ClosedForm>().unwrap()).unwrap()
    }

    #[test]
    fn parses_canonical_renderings() {
        for s in [
            "pi/2",
            "exp(2*K/pi)",
            "8*A^12 / (e*pi^3*2^(1/3))",
            "4/5",
            "2^(1/2)",
            "2*sinpi(3/10)",
            "Gamma_3(1/3)",
            "1 / (pi^(3/2)*G(1/3)^4)",
            "exp(-K / (4*pi))",
            "3^(1/2)/2",
            "gamma*Gamma(1/3)^(2/3)",
        ] {
            assert_eq!(canon(s), s, "round trip of {s}");
        }
    }

    #[test]
    fn sums_inside_exp() {
        // G(1/4) = A^{−9/8} Γ(1/4)^{−3/4} e^{3/32 − K/4π}
        let lhs = canon("G(1/4)");
        let rhs = canon("A^(-9/8) * Gamma(1/4)^(-3/4) * exp(3/32 - K/(4*pi))");
        assert_eq!(lhs, rhs);
        assert_eq!(canon("exp(1)"), "e");
        assert_eq!(canon("e^(1/8)*exp(-1/8)"), "1");
    }

    #[test]
    fn paper_style_inputs() {
        assert_eq!(canon("sinpi(1/2)/sinpi(1/4)"), "2^(1/2)");
        assert_eq!(canon("Gamma(1/2)*Gamma(3/2)/Gamma(1)^2"), "pi/2");
        assert_eq!(canon("(pi^2)/8"), "pi^2/8");
        assert_eq!(canon("2 * 3 / 4"), "3/2");
    }

    #[test]
    fn errors_carry_position() {
        for (s, col) in [("pi +", 4), ("Gamma(x)", 7), ("foo", 1), ("2^", 3), ("(pi", 4)] {
            match s.parse::<ClosedForm>() {
                Err(Error::InvalidExpression(msg)) => {
                    assert!(msg.contains(&format!("column {col}")), "{s}: {msg}")
                }
                other => panic!("{s}: expected an error, got {other:?}"),
            }
        }
    }
}
