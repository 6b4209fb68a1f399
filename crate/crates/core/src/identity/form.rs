//! Closed-form expression trees and their canonical monomial form.

use std::collections::BTreeMap;
use std::fmt;

use rug::Integer;

use crate::arith::Rat;
use crate::error::{Error, Result};

/// Expression tree over the constants and special-function values that
/// the product theorems produce.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ClosedForm {
    Rat(Rat),
    Pi,
    E,
    EulerGamma,
    Catalan,
    Glaisher,
    GammaAt(Rat),
    BarnesGAt(Rat),
    /// `Γ_n(arg)`; levels 1 and 2 are rewritten to `Γ` and `1/G`.
    MultiGammaAt {
        level: u32,
        arg: Rat,
    },
    SinPi(Rat),
    Mul(Vec<ClosedForm>),
    Pow(Box<ClosedForm>, Rat),
    Exp(Box<ClosedForm>),
}

impl ClosedForm {
    pub fn rat(r: Rat) -> Self {
        ClosedForm::Rat(r)
    }

    pub fn int(n: i64) -> Self {
        ClosedForm::Rat(Rat::int(n))
    }

    pub fn pow(self, q: Rat) -> Self {
        ClosedForm::Pow(Box::new(self), q)
    }

    pub fn powi(self, n: i64) -> Self {
        self.pow(Rat::int(n))
    }

    pub fn recip(self) -> Self {
        self.powi(-1)
    }

    pub fn exp(self) -> Self {
        ClosedForm::Exp(Box::new(self))
    }

    pub fn mul(factors: Vec<ClosedForm>) -> Self {
        ClosedForm::Mul(factors)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(num: ClosedForm, den: ClosedForm) -> Self {
        ClosedForm::Mul(vec![num, den.recip()])
    }

    /// Canonical monomial: every functional-equation shift applied, special
    /// values substituted, reflection pairs merged.
    pub fn canonical(&self) -> Result<Monomial> {
        let mut m = Monomial::one();
        collect(self, &Rat::one(), &mut m)?;
        m.simplify()?;
        Ok(m)
    }

    /// Canonical tree, i.e. `self.canonical()?.to_tree()`.
    pub fn reduce(&self) -> Result<ClosedForm> {
        Ok(self.canonical()?.to_tree())
    }

    /// No `Γ_n` (`n ≥ 3`) atom survives reduction.
    pub fn is_fully_reduced(&self) -> Result<bool> {
        Ok(self.canonical()?.is_fully_reduced())
    }

    /// Renders the tree as written, without simplification.
    pub fn raw_string(&self) -> String {
        match self {
            ClosedForm::Rat(r) => {
                if r.is_integer() && !r.is_negative() {
                    r.to_string()
                } else {
                    format!("({r})")
                }
            }
            ClosedForm::Mul(v) if v.is_empty() => "1".into(),
            ClosedForm::Mul(v) => v
                .iter()
                .map(|f| match f {
                    ClosedForm::Mul(_) => format!("({})", f.raw_string()),
                    _ => f.raw_string(),
                })
                .collect::<Vec<_>>()
                .join("*"),
            ClosedForm::Pow(b, q) => {
                let base = match **b {
                    ClosedForm::Mul(_) | ClosedForm::Pow(..) => format!("({})", b.raw_string()),
                    _ => b.raw_string(),
                };
                format!("{base}^{}", exponent_string(q))
            }
            ClosedForm::Exp(x) => format!("exp({})", x.raw_string()),
            atom => Atom::from_leaf(atom).expect("leaf").to_string(),
        }
    }
}

impl fmt::Debug for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw_string())
    }
}

impl fmt::Display for ClosedForm {
    /// Canonical rendering; falls back to the raw tree if reduction fails.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.canonical() {
            Ok(m) => write!(f, "{m}"),
            Err(_) => f.write_str(&self.raw_string()),
        }
    }
}

/// `print_closed_form`: the canonical rendering of `cf`.
pub fn print_closed_form(cf: &ClosedForm) -> Result<String> {
    Ok(cf.canonical()?.to_string())
}

/// Irreducible factor of a canonical monomial. The variant order is the
/// rendering order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// Integer base (a prime when it came from factoring) with exponent in `(−1/2, 1/2]`.
    Radical(Integer),
    E,
    Pi,
    EulerGamma,
    Catalan,
    Glaisher,
    /// `exp(m)` for a symbolic monomial `m` with coefficient 1.
    Exp(Box<Monomial>),
    /// `Γ(r)`, `r ∈ (0, 1)`, `r ≠ 1/2`.
    Gamma(Rat),
    /// `G(r)`, `r ∈ (0, 1)`, `r ∉ {1/4, 1/2, 3/4}`.
    BarnesG(Rat),
    /// `Γ_n(r)`, `n ≥ 3`, `r ∈ (0, 1)`.
    MultiGamma(u32, Rat),
    /// `sin(πr)`, `r ∈ (0, 1/2)` without a tabulated value.
    SinPi(Rat),
}

impl Atom {
    fn from_leaf(cf: &ClosedForm) -> Option<Atom> {
        Some(match cf {
            ClosedForm::Pi => Atom::Pi,
            ClosedForm::E => Atom::E,
            ClosedForm::EulerGamma => Atom::EulerGamma,
            ClosedForm::Catalan => Atom::Catalan,
            ClosedForm::Glaisher => Atom::Glaisher,
            ClosedForm::GammaAt(r) => Atom::Gamma(r.clone()),
            ClosedForm::BarnesGAt(r) => Atom::BarnesG(r.clone()),
            ClosedForm::MultiGammaAt { level, arg } => Atom::MultiGamma(*level, arg.clone()),
            ClosedForm::SinPi(r) => Atom::SinPi(r.clone()),
            _ => return None,
        })
    }

    fn is_numeric(&self) -> bool {
        matches!(self, Atom::Radical(_))
    }

    fn to_tree(&self) -> ClosedForm {
        match self {
            Atom::Radical(p) => ClosedForm::Rat(Rat::from(p.clone())),
            Atom::E => ClosedForm::E,
            Atom::Pi => ClosedForm::Pi,
            Atom::EulerGamma => ClosedForm::EulerGamma,
            Atom::Catalan => ClosedForm::Catalan,
            Atom::Glaisher => ClosedForm::Glaisher,
            Atom::Exp(m) => m.to_tree().exp(),
            Atom::Gamma(r) => ClosedForm::GammaAt(r.clone()),
            Atom::BarnesG(r) => ClosedForm::BarnesGAt(r.clone()),
            Atom::MultiGamma(n, r) => ClosedForm::MultiGammaAt {
                level: *n,
                arg: r.clone(),
            },
            Atom::SinPi(r) => ClosedForm::SinPi(r.clone()),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Radical(p) => write!(f, "{p}"),
            Atom::E => f.write_str("e"),
            Atom::Pi => f.write_str("pi"),
            Atom::EulerGamma => f.write_str("gamma"),
            Atom::Catalan => f.write_str("K"),
            Atom::Glaisher => f.write_str("A"),
            Atom::Exp(m) => write!(f, "exp({m})"),
            Atom::Gamma(r) => write!(f, "Gamma({r})"),
            Atom::BarnesG(r) => write!(f, "G({r})"),
            Atom::MultiGamma(n, r) => write!(f, "Gamma_{n}({r})"),
            Atom::SinPi(r) => write!(f, "sinpi({r})"),
        }
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `coeff · Π atom^exponent`, the canonical form of a closed form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    coeff: Rat,
    factors: BTreeMap<Atom, Rat>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Monomial {
            coeff: c,
            factors: BTreeMap::new(),
        }
    }

    pub fn coeff(&self) -> &Rat {
        &self.coeff
    }

    pub fn factors(&self) -> &BTreeMap<Atom, Rat> {
        &self.factors
    }

    pub fn is_rational(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_fully_reduced(&self) -> bool {
        !self.factors.keys().any(|a| match a {
            Atom::MultiGamma(..) => true,
            Atom::Exp(m) => !m.is_fully_reduced(),
            _ => false,
        })
    }

    pub fn to_tree(&self) -> ClosedForm {
        let mut v = Vec::new();
        if self.coeff != Rat::one() || self.factors.is_empty() {
            v.push(ClosedForm::Rat(self.coeff.clone()));
        }
        for (a, e) in &self.factors {
            let t = match a {
                Atom::Exp(m) => {
                    if *e == Rat::one() {
                        a.to_tree()
                    } else {
                        ClosedForm::mul(vec![ClosedForm::Rat(e.clone()), m.to_tree()]).exp()
                    }
                }
                _ if *e == Rat::one() => a.to_tree(),
                _ => a.to_tree().pow(e.clone()),
            };
            v.push(t);
        }
        if v.len() == 1 {
            v.pop().unwrap()
        } else {
            ClosedForm::Mul(v)
        }
    }

    fn mul_coeff(&mut self, c: &Rat) {
        self.coeff *= c;
    }

    /// Multiplies by `atom^e` after reducing the atom to its canonical window.
    fn push(&mut self, atom: Atom, e: &Rat) -> Result<()> {
        if e.is_zero() {
            return Ok(());
        }
        match atom {
            Atom::Gamma(r) => self.push_gamma(&r, e),
            Atom::BarnesG(r) => self.push_barnes(&r, e),
            Atom::MultiGamma(n, r) => self.push_multi(n, &r, e),
            Atom::SinPi(r) => self.push_sinpi(&r, e),
            other => {
                self.add_exp(other, e);
                Ok(())
            }
        }
    }

    fn add_exp(&mut self, atom: Atom, e: &Rat) {
        let slot = self.factors.entry(atom).or_default();
        *slot += e;
    }

    /// `Γ(r+1) = r Γ(r)`, `Γ(1) = 1`, `Γ(1/2) = π^{1/2}`.
    fn push_gamma(&mut self, r: &Rat, e: &Rat) -> Result<()> {
        let mut x = r.clone();
        // Γ(x) = Γ(x+1)/x
        while !x.is_positive() {
            if x.is_integer() {
                return Err(Error::domain(format!("Gamma has a pole at {r}")));
            }
            self.raise_rational(&x, &-e)?;
            x += &Rat::one();
        }
        while x > Rat::one() {
            x -= &Rat::one();
            self.raise_rational(&x, e)?;
        }
        if x == Rat::one() {
            return Ok(());
        }
        if x == Rat::new(1, 2) {
            self.add_exp(Atom::Pi, &(e * &Rat::new(1, 2)));
            return Ok(());
        }
        self.add_exp(Atom::Gamma(x), e);
        Ok(())
    }

    /// `G(r+1) = Γ(r) G(r)`, `G(1) = 1`, tabulated `G(1/4)`, `G(1/2)`, `G(3/4)`.
    fn push_barnes(&mut self, r: &Rat, e: &Rat) -> Result<()> {
        let mut x = r.clone();
        // G(x) = G(x+1)/Γ(x)
        while !x.is_positive() {
            if x.is_integer() {
                return Err(Error::domain(format!("G vanishes at {r}")));
            }
            self.push_gamma(&x, &-e)?;
            x += &Rat::one();
        }
        while x > Rat::one() {
            x -= &Rat::one();
            self.push_gamma(&x, e)?;
        }
        if x == Rat::one() {
            return Ok(());
        }
        for (arg, value) in barnes_table() {
            if x == arg {
                return collect(&value, e, self);
            }
        }
        self.add_exp(Atom::BarnesG(x), e);
        Ok(())
    }

    /// `Γ_n(r+1) = Γ_n(r) / Γ_{n−1}(r)`, `Γ_n(1) = 1`, `Γ_1 = Γ`, `Γ_2 = 1/G`.
    fn push_multi(&mut self, n: u32, r: &Rat, e: &Rat) -> Result<()> {
        match n {
            0 => Err(Error::InvalidExpression("Gamma_0 is undefined".into())),
            1 => self.push_gamma(r, e),
            2 => self.push_barnes(r, &-e),
            _ => {
                if !r.is_positive() {
                    return Err(Error::InvalidExpression(format!(
                        "Gamma_{n}({r}) needs a positive argument"
                    )));
                }
                let mut x = r.clone();
                while x > Rat::one() {
                    x -= &Rat::one();
                    self.push_multi(n - 1, &x, &-e)?;
                }
                if x != Rat::one() {
                    self.add_exp(Atom::MultiGamma(n, x), e);
                }
                Ok(())
            }
        }
    }

    /// `sin(π(r+1)) = −sin(πr)`, `sin(π(1−r)) = sin(πr)`, tabulated values
    /// at `1/6`, `1/4`, `1/3`, `1/2`.
    fn push_sinpi(&mut self, r: &Rat, e: &Rat) -> Result<()> {
        let shift = r.floor();
        let mut x = r.fract_floor();
        if x.is_zero() {
            if e.is_negative() {
                return Err(Error::InvalidExpression(format!("sinpi({r}) is zero")));
            }
            self.coeff = Rat::zero();
            return Ok(());
        }
        if shift.is_odd() {
            self.raise_rational(&Rat::int(-1), e)?;
        }
        if x > Rat::new(1, 2) {
            x = Rat::one() - &x;
        }
        let table = [
            (Rat::new(1, 2), Rat::one(), Rat::zero()),
            (Rat::new(1, 6), Rat::new(1, 2), Rat::zero()),
            (Rat::new(1, 4), Rat::one(), Rat::new(-1, 2)), // 2^{-1/2}
            (Rat::new(1, 3), Rat::new(1, 2), Rat::zero()), // 3^{1/2}/2, radical below
        ];
        for (arg, c, two_pow) in table {
            if x == arg {
                self.raise_rational(&c, e)?;
                if !two_pow.is_zero() {
                    self.add_exp(Atom::Radical(Integer::from(2)), &(two_pow * e));
                }
                if x == Rat::new(1, 3) {
                    self.add_exp(Atom::Radical(Integer::from(3)), &(e * &Rat::new(1, 2)));
                }
                return Ok(());
            }
        }
        self.add_exp(Atom::SinPi(x), e);
        Ok(())
    }

    /// Multiplies by `c^e` for rational `c`, splitting fractional powers
    /// into prime radicals.
    fn raise_rational(&mut self, c: &Rat, e: &Rat) -> Result<()> {
        if let Some(n) = e.to_i64() {
            let p = c
                .powi(n)
                .map_err(|_| Error::InvalidExpression(format!("({c})^{n} divides by zero")))?;
            self.mul_coeff(&p);
            return Ok(());
        }
        if c.is_zero() {
            if e.is_negative() {
                return Err(Error::InvalidExpression("zero to a negative power".into()));
            }
            self.coeff = Rat::zero();
            return Ok(());
        }
        if c.is_negative() {
            return Err(Error::InvalidExpression(format!(
                "negative base {c} under the fractional power {e}"
            )));
        }
        for (p, k) in factor(c.numer()) {
            self.add_exp(Atom::Radical(p), &(e * &Rat::int(k)));
        }
        for (p, k) in factor(c.denom()) {
            self.add_exp(Atom::Radical(p), &(e * &Rat::int(-k)));
        }
        Ok(())
    }

    /// Reflection, radical normalization, zero-exponent removal.
    fn simplify(&mut self) -> Result<()> {
        if self.coeff.is_zero() {
            self.factors.clear();
            return Ok(());
        }
        // Γ(r)^x Γ(1−r)^y with x, y of one sign: pull out (π / sin πr)^m
        let gammas: Vec<Rat> = self
            .factors
            .keys()
            .filter_map(|a| match a {
                Atom::Gamma(r) if *r < Rat::new(1, 2) => Some(r.clone()),
                _ => None,
            })
            .collect();
        for r in gammas {
            let s = Rat::one() - &r;
            let x = self.factors.get(&Atom::Gamma(r.clone())).cloned().unwrap_or_default();
            let y = self.factors.get(&Atom::Gamma(s.clone())).cloned().unwrap_or_default();
            if x.is_zero() || y.is_zero() || x.is_positive() != y.is_positive() {
                continue;
            }
            let m = if x.abs() < y.abs() { x.clone() } else { y.clone() };
            self.add_exp(Atom::Gamma(r.clone()), &-&m);
            self.add_exp(Atom::Gamma(s), &-&m);
            self.add_exp(Atom::Pi, &m);
            self.push_sinpi(&r, &-m)?;
        }
        // radical exponents into (−1/2, 1/2]
        let radicals: Vec<(Integer, Rat)> = self
            .factors
            .iter()
            .filter_map(|(a, e)| match a {
                Atom::Radical(p) => Some((p.clone(), e.clone())),
                _ => None,
            })
            .collect();
        for (p, e) in radicals {
            let n = (&e - &Rat::new(1, 2)).ceil();
            if n != 0 {
                let n_i = n
                    .to_i64()
                    .ok_or_else(|| Error::InvalidExpression("exponent overflow".into()))?;
                self.factors.insert(Atom::Radical(p.clone()), e - Rat::from(n));
                self.mul_coeff(&Rat::from(p).powi(n_i)?);
            }
        }
        self.factors.retain(|_, e| !e.is_zero());
        if self.coeff.is_zero() {
            self.factors.clear();
        }
        Ok(())
    }

    /// `self^q`.
    fn pow(&self, q: &Rat) -> Result<Monomial> {
        let mut out = Monomial::one();
        out.raise_rational(&self.coeff, q)?;
        for (a, e) in &self.factors {
            out.add_exp(a.clone(), &(e * q));
        }
        Ok(out)
    }

    fn mul(&mut self, other: &Monomial) {
        self.coeff *= &other.coeff;
        for (a, e) in &other.factors {
            self.add_exp(a.clone(), e);
        }
    }
}

/// Trial-division factorization; a cofactor beyond the search bound is kept
/// as a single base.
fn factor(n: &Integer) -> Vec<(Integer, i64)> {
    let mut n = n.clone().abs();
    let mut out = Vec::new();
    let mut p = Integer::from(2);
    while n > 1 && p < 1 << 20 {
        let mut k = 0;
        while n.is_divisible(&p) {
            n /= &p;
            k += 1;
        }
        if k > 0 {
            out.push((p.clone(), k));
        }
        if Integer::from(&p * &p) > n {
            break;
        }
        p += 1;
    }
    if n > 1 {
        match out.iter_mut().find(|(q, _)| *q == n) {
            Some(slot) => slot.1 += 1,
            None => out.push((n, 1)),
        }
    }
    out
}

/// Tabulated Barnes G values in terms of `A`, `K`, `Γ`, `π`, `e`.
fn barnes_table() -> Vec<(Rat, ClosedForm)> {
    use ClosedForm as C;
    let r = |n, d| Rat::new(n, d);
    let exp_k_over_pi = |q: Rat| C::mul(vec![C::Catalan, C::Pi.recip()]).exp().pow(q);
    vec![
        (
            r(1, 2),
            // 2^{1/24} e^{1/8} A^{−3/2} π^{−1/4}
            C::mul(vec![
                C::int(2).pow(r(1, 24)),
                C::E.pow(r(1, 8)),
                C::Glaisher.pow(r(-3, 2)),
                C::Pi.pow(r(-1, 4)),
            ]),
        ),
        (
            r(1, 4),
            // A^{−9/8} Γ(1/4)^{−3/4} e^{3/32} e^{−K/4π}
            C::mul(vec![
                C::Glaisher.pow(r(-9, 8)),
                C::GammaAt(r(1, 4)).pow(r(-3, 4)),
                C::E.pow(r(3, 32)),
                exp_k_over_pi(r(-1, 4)),
            ]),
        ),
        (
            r(3, 4),
            // A^{−9/8} Γ(3/4)^{−1/4} e^{3/32} e^{K/4π}
            C::mul(vec![
                C::Glaisher.pow(r(-9, 8)),
                C::GammaAt(r(3, 4)).pow(r(-1, 4)),
                C::E.pow(r(3, 32)),
                exp_k_over_pi(r(1, 4)),
            ]),
        ),
    ]
}

/// Multiplies `out` by `cf^e`.
fn collect(cf: &ClosedForm, e: &Rat, out: &mut Monomial) -> Result<()> {
    match cf {
        ClosedForm::Rat(c) => out.raise_rational(c, e),
        ClosedForm::Mul(v) => {
            for f in v {
                collect(f, e, out)?;
            }
            Ok(())
        }
        ClosedForm::Pow(b, q) => collect(b, &(e * q), out),
        ClosedForm::Exp(x) => {
            let mut inner = Monomial::one();
            collect(x, &Rat::one(), &mut inner)?;
            inner.simplify()?;
            if inner.coeff.is_zero() {
                return Ok(());
            }
            if inner.factors.is_empty() {
                out.add_exp(Atom::E, &(&inner.coeff * e));
                return Ok(());
            }
            let scale = std::mem::replace(&mut inner.coeff, Rat::one());
            out.add_exp(Atom::Exp(Box::new(inner)), &(scale * e));
            Ok(())
        }
        ClosedForm::MultiGammaAt { level, arg } => out.push(Atom::MultiGamma(*level, arg.clone()), e),
        leaf => out.push(Atom::from_leaf(leaf).expect("leaf"), e),
    }
}

/// `n`, or `(p/q)` / `(-n)` when the exponent needs grouping.
pub(crate) fn exponent_string(q: &Rat) -> String {
    if q.is_integer() && !q.is_negative() {
        q.to_string()
    } else {
        format!("({q})")
    }
}

fn power_string(base: &str, e: &Rat) -> String {
    if *e == Rat::one() {
        base.to_string()
    } else {
        format!("{base}^{}", exponent_string(e))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            return f.write_str("0");
        }
        let mut num: Vec<String> = Vec::new();
        let mut den: Vec<String> = Vec::new();
        let c = self.coeff.abs();
        let c_num = c.numer().clone();
        let c_den = c.denom().clone();

        // numerator: numeric block, then symbols; denominator: integer,
        // symbols, then radicals
        let mut num_numeric = Vec::new();
        let mut den_numeric = Vec::new();
        if c_num != 1 {
            num_numeric.push(c_num.to_string());
        }
        if c_den != 1 {
            den.push(c_den.to_string());
        }
        for (a, e) in &self.factors {
            if let Atom::Exp(m) = a {
                let mut scaled = (**m).clone();
                scaled.coeff = e.clone();
                num.push(format!("exp({scaled})"));
                continue;
            }
            let base = a.to_string();
            match (a.is_numeric(), e.is_positive()) {
                (true, true) => num_numeric.push(power_string(&base, e)),
                (true, false) => den_numeric.push(power_string(&base, &-e)),
                (false, true) => num.push(power_string(&base, e)),
                (false, false) => den.push(power_string(&base, &-e)),
            }
        }
        let mut num_all = num_numeric;
        num_all.extend(num);
        den.extend(den_numeric);

        let sign = if self.coeff.is_negative() { "-" } else { "" };
        let n = if num_all.is_empty() {
            "1".to_string()
        } else {
            num_all.join("*")
        };
        match den.len() {
            0 => write!(f, "{sign}{n}"),
            1 => write!(f, "{sign}{n}/{}", den[0]),
            _ => write!(f, "{sign}{n} / ({})", den.join("*")),
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Monomial {
    /// Product of two canonical monomials, re-canonicalized.
    pub fn times(&self, other: &Monomial) -> Result<Monomial> {
        let mut m = self.clone();
        m.mul(other);
        m.simplify()?;
        Ok(m)
    }

    /// `self^q`, re-canonicalized.
    pub fn power(&self, q: &Rat) -> Result<Monomial> {
        let mut m = self.pow(q)?;
        m.simplify()?;
        Ok(m)
    }
}
