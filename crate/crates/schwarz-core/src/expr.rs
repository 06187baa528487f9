// SPDX-License-Identifier: MIT OR Apache-2.0
//! Expression language: parsing into syntax trees, conversion to the
//! algebraic types and canonical printing.
//!
//! Grammar:
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := '-' factor | base ('^' exponent)?
//! base     := number | symbol | '(' expr ')'
//! exponent := integer | '-' integer | '(' '-'? integer '/' integer ')'
//! ```
//!
//! Symbols are resolved through a [`Symbols`] table; `w` always denotes
//! the primitive root of unity `ζ_N` of the table's conductor.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::sync::Arc;
use core::fmt::{self, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cyclo::Cyclo;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::Poly;
use crate::radical::{RadicalElem, Tower, TowerBuilder};
use crate::ratexpr::RatExpr;
use crate::ratfn::RatFn;

/// Syntax tree of an expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigInt),
    Sym(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, BigRational),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

impl Lexer {
    fn new(text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let (mut line, mut col) = (1usize, 1usize);
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            let (l0, c0) = (line, col);
            if ch == '\n' {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            if ch.is_whitespace() {
                col += 1;
                i += 1;
                continue;
            }
            if ch.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                toks.push((Tok::Num(s.parse().unwrap()), l0, c0));
                continue;
            }
            if ch.is_alphabetic() || ch == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                col += i - start;
                toks.push((Tok::Ident(chars[start..i].iter().collect()), l0, c0));
                continue;
            }
            if "+-*/^()".contains(ch) {
                toks.push((Tok::Op(ch), l0, c0));
                col += 1;
                i += 1;
                continue;
            }
            return Err(syntax(l0, c0, alloc::format!("unexpected character `{ch}`")));
        }
        toks.push((Tok::End, line, col));
        Ok(Lexer { toks, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        let (_, l, c) = &self.toks[self.pos];
        (*l, *c)
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        let (l, c) = self.here();
        syntax(l, c, msg)
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if *self.peek() == Tok::Op(op) {
            self.next();
            Ok(())
        } else {
            Err(self.error(alloc::format!("expected `{op}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.next();
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.next();
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.next();
                    acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                Tok::Op('/') => {
                    self.next();
                    acc = Expr::Div(Box::new(acc), Box::new(self.factor()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Op('-') {
            self.next();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if *self.peek() == Tok::Op('^') {
            self.next();
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let neg = if *self.peek() == Tok::Op('-') {
            self.next();
            true
        } else {
            false
        };
        match self.next() {
            Tok::Num(n) => Ok(if neg { -n } else { n }),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.error("expected an integer exponent"))
            }
        }
    }

    fn exponent(&mut self) -> Result<BigRational> {
        if *self.peek() == Tok::Op('(') {
            self.next();
            let p = self.integer()?;
            let q = if *self.peek() == Tok::Op('/') {
                self.next();
                let q = self.integer()?;
                if q.is_zero() {
                    return Err(self.error("zero exponent denominator"));
                }
                q
            } else {
                BigInt::one()
            };
            self.expect(')')?;
            Ok(BigRational::new(p, q))
        } else {
            Ok(BigRational::from_integer(self.integer()?))
        }
    }

    fn base(&mut self) -> Result<Expr> {
        let (l, c) = self.here();
        match self.next() {
            Tok::Num(n) => Ok(Expr::Num(n)),
            Tok::Ident(s) => Ok(Expr::Sym(s)),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::End => Err(syntax(l, c, "unexpected end of input")),
            Tok::Op(o) => Err(syntax(l, c, alloc::format!("unexpected `{o}`"))),
        }
    }
}

/// Parses text into a syntax tree.
pub fn parse(text: &str) -> Result<Expr> {
    let mut lx = Lexer::new(text)?;
    let e = lx.expr()?;
    if *lx.peek() != Tok::End {
        return Err(lx.error("unexpected trailing input"));
    }
    Ok(e)
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        Expr::Num(_) | Expr::Sym(_) => 5,
    }
}

fn write_exponent(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.is_integer() && !q.is_negative() {
        write!(f, "{}", q.numer())
    } else if q.is_integer() {
        write!(f, "({})", q.numer())
    } else {
        write!(f, "({}/{})", q.numer(), q.denom())
    }
}

impl fmt::Display for Expr {
    /// Minimal parenthesization; re-parses to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, e: &Expr, need: bool| -> fmt::Result {
            if need {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        };
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::Sym(s) => f.write_str(s),
            Expr::Neg(a) => {
                f.write_str("-")?;
                wrap(f, a, prec(a) < 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                wrap(f, a, prec(a) < 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) { "+" } else { "-" })?;
                wrap(f, b, prec(b) <= 1)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                wrap(f, a, prec(a) < 2)?;
                f.write_str(if matches!(self, Expr::Mul(..)) { "*" } else { "/" })?;
                // a factor is a negation or a power or a base
                wrap(f, b, prec(b) <= 2)
            }
            Expr::Pow(a, q) => {
                wrap(f, a, prec(a) < 5)?;
                f.write_str("^")?;
                write_exponent(f, q)
            }
        }
    }
}

/// Ordered symbol names (the position is the variable index) and the
/// conductor used for `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbols {
    names: Vec<String>,
    conductor: u32,
}

impl Symbols {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>, conductor: u32) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if n == "w" {
                return Err(Error::Invalid("`w` is reserved for the root of unity".into()));
            }
            if names[..i].contains(n) {
                return Err(Error::Invalid(alloc::format!("duplicate symbol `{n}`")));
            }
        }
        if conductor == 0 {
            return Err(Error::Invalid("conductor must be positive".into()));
        }
        Ok(Symbols { names, conductor })
    }

    /// `X1..Xn` followed by `extra`.
    pub fn with_coordinates(n: usize, extra: &[&str], conductor: u32) -> Result<Self> {
        let mut names: Vec<String> = (1..=n).map(|i| alloc::format!("X{i}")).collect();
        names.extend(extra.iter().map(|s| s.to_string()));
        Self::new(names, conductor)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Table with the first `k` names removed (indices shift down).
    pub fn drop_front(&self, k: usize) -> Self {
        Symbols {
            names: self.names[k.min(self.names.len())..].to_vec(),
            conductor: self.conductor,
        }
    }
}

fn rational_power<T: Field>(x: &T, q: &BigRational) -> Result<T> {
    if !q.is_integer() {
        return Err(Error::UnsupportedRadical("fractional exponent outside a radical expression".into()));
    }
    let e = q.numer();
    let k: u32 = e.abs().try_into().map_err(|_| Error::Invalid("exponent too large".into()))?;
    if e.is_negative() {
        Ok(x.inv().ok_or(Error::DivisionByZero)?.pow(k))
    } else {
        Ok(x.pow(k))
    }
}

fn symbol_value<T>(name: &str, syms: &Symbols, var: impl Fn(usize) -> T, cst: impl Fn(Cyclo) -> T) -> Result<T> {
    if name == "w" {
        return Ok(cst(Cyclo::zeta_pow(syms.conductor, 1)));
    }
    syms.index(name)
        .map(var)
        .ok_or_else(|| Error::UnknownVariable(name.into()))
}

/// Converts to a polynomial; division only by nonzero constants.
pub fn to_poly(e: &Expr, syms: &Symbols) -> Result<Poly<Cyclo>> {
    Ok(match e {
        Expr::Num(n) => Poly::constant(Cyclo::rational(BigRational::from_integer(n.clone()))),
        Expr::Sym(s) => symbol_value(s, syms, Poly::var, Poly::constant)?,
        Expr::Neg(a) => to_poly(a, syms)?.neg(),
        Expr::Add(a, b) => to_poly(a, syms)?.add(&to_poly(b, syms)?),
        Expr::Sub(a, b) => to_poly(a, syms)?.sub(&to_poly(b, syms)?),
        Expr::Mul(a, b) => to_poly(a, syms)?.mul(&to_poly(b, syms)?),
        Expr::Div(a, b) => {
            let d = to_poly(b, syms)?;
            if !d.is_constant() {
                return Err(Error::Invalid("division by a non-constant in a polynomial".into()));
            }
            let c = d.constant_term().inv().ok_or(Error::DivisionByZero)?;
            to_poly(a, syms)?.scale(&c)
        }
        Expr::Pow(a, q) => {
            if !q.is_integer() || q.is_negative() {
                return Err(Error::Invalid("polynomial exponents must be non-negative integers".into()));
            }
            let k: u32 = q.numer().try_into().map_err(|_| Error::Invalid("exponent too large".into()))?;
            to_poly(a, syms)?.pow(k)
        }
    })
}

/// Converts to a reduced rational function.
pub fn to_ratfn(e: &Expr, syms: &Symbols) -> Result<RatFn> {
    Ok(match e {
        Expr::Num(n) => RatFn::constant(Cyclo::rational(BigRational::from_integer(n.clone()))),
        Expr::Sym(s) => symbol_value(s, syms, RatFn::var, RatFn::constant)?,
        Expr::Neg(a) => to_ratfn(a, syms)?.neg(),
        Expr::Add(a, b) => to_ratfn(a, syms)?.add(&to_ratfn(b, syms)?),
        Expr::Sub(a, b) => to_ratfn(a, syms)?.sub(&to_ratfn(b, syms)?),
        Expr::Mul(a, b) => to_ratfn(a, syms)?.mul(&to_ratfn(b, syms)?),
        Expr::Div(a, b) => to_ratfn(a, syms)?.div(&to_ratfn(b, syms)?).ok_or(Error::DivisionByZero)?,
        Expr::Pow(a, q) => rational_power(&to_ratfn(a, syms)?, q)?,
    })
}

/// Converts to a quotient of polynomials (not GCD-reduced).
pub fn to_ratexpr(e: &Expr, syms: &Symbols) -> Result<RatExpr> {
    Ok(match e {
        Expr::Num(_) | Expr::Sym(_) => RatExpr::from_poly(to_poly(e, syms)?),
        Expr::Neg(a) => to_ratexpr(a, syms)?.neg(),
        Expr::Add(a, b) => to_ratexpr(a, syms)?.add(&to_ratexpr(b, syms)?),
        Expr::Sub(a, b) => to_ratexpr(a, syms)?.sub(&to_ratexpr(b, syms)?),
        Expr::Mul(a, b) => to_ratexpr(a, syms)?.mul(&to_ratexpr(b, syms)?),
        Expr::Div(a, b) => to_ratexpr(a, syms)?.div(&to_ratexpr(b, syms)?).ok_or(Error::DivisionByZero)?,
        Expr::Pow(a, q) => rational_power(&to_ratexpr(a, syms)?, q)?,
    })
}

fn collect_radicals(e: &Expr, syms: &Symbols, b: &mut TowerBuilder, count: &mut usize) -> Result<()> {
    match e {
        Expr::Num(_) | Expr::Sym(_) => Ok(()),
        Expr::Neg(a) => collect_radicals(a, syms, b, count),
        Expr::Add(a, c) | Expr::Sub(a, c) | Expr::Mul(a, c) | Expr::Div(a, c) => {
            collect_radicals(a, syms, b, count)?;
            collect_radicals(c, syms, b, count)
        }
        Expr::Pow(a, q) => {
            if q.is_integer() {
                return collect_radicals(a, syms, b, count);
            }
            let base = to_ratfn(a, syms).map_err(|err| match err {
                Error::UnsupportedRadical(_) => Error::UnsupportedRadical("nested radicals are not supported".into()),
                e => e,
            })?;
            if base.is_zero() {
                return Err(Error::UnsupportedRadical("radical of zero".into()));
            }
            let q: u32 = q.denom().try_into().map_err(|_| Error::Invalid("exponent too large".into()))?;
            b.require(&base, q, alloc::format!("r{count}"));
            *count += 1;
            Ok(())
        }
    }
}

fn eval_radical(e: &Expr, syms: &Symbols, tower: &alloc::sync::Arc<Tower>) -> Result<RadicalElem> {
    let lift = |x: RadicalElem| -> Result<RadicalElem> {
        if tower.is_empty() {
            Ok(x)
        } else {
            x.embed(tower)
        }
    };
    Ok(match e {
        Expr::Num(_) | Expr::Sym(_) => lift(RadicalElem::from_ratfn(to_ratfn(e, syms)?))?,
        Expr::Neg(a) => eval_radical(a, syms, tower)?.neg(),
        Expr::Add(a, b) => eval_radical(a, syms, tower)?.add(&eval_radical(b, syms, tower)?),
        Expr::Sub(a, b) => eval_radical(a, syms, tower)?.sub(&eval_radical(b, syms, tower)?),
        Expr::Mul(a, b) => eval_radical(a, syms, tower)?.mul(&eval_radical(b, syms, tower)?),
        Expr::Div(a, b) => eval_radical(a, syms, tower)?.divide(&eval_radical(b, syms, tower)?)?,
        Expr::Pow(a, q) if q.is_integer() => rational_power(&eval_radical(a, syms, tower)?, q)?,
        Expr::Pow(a, q) => lift(tower.power(&to_ratfn(a, syms)?, q)?)?,
    })
}

/// Converts to a radical element; every fractional power must apply to a
/// rational function. The tower extends `base` when given.
pub fn to_radical(e: &Expr, syms: &Symbols, base: Option<&Tower>) -> Result<RadicalElem> {
    let mut b = match base {
        Some(t) => TowerBuilder::extending(t),
        None => TowerBuilder::new(),
    };
    let mut count = base.map_or(0, |t| t.len());
    collect_radicals(e, syms, &mut b, &mut count)?;
    let tower = b.finish()?;
    eval_radical(e, syms, &tower)
}

pub fn parse_poly(text: &str, syms: &Symbols) -> Result<Poly<Cyclo>> {
    to_poly(&parse(text)?, syms)
}

pub fn parse_ratfn(text: &str, syms: &Symbols) -> Result<RatFn> {
    to_ratfn(&parse(text)?, syms)
}

pub fn parse_ratexpr(text: &str, syms: &Symbols) -> Result<RatExpr> {
    to_ratexpr(&parse(text)?, syms)
}

pub fn parse_radical(text: &str, syms: &Symbols) -> Result<RadicalElem> {
    to_radical(&parse(text)?, syms, None)
}

/// Parses several radical expressions into one shared tower, each tower
/// extending the previous one.
pub fn parse_radicals<S: AsRef<str>>(texts: &[S], syms: &Symbols) -> Result<Vec<RadicalElem>> {
    let mut base: Option<Arc<Tower>> = None;
    let mut out = Vec::with_capacity(texts.len());
    for t in texts {
        let v = to_radical(&parse(t.as_ref())?, syms, base.as_deref())?;
        if let Some(tw) = v.tower() {
            base = Some(tw.clone());
        }
        out.push(v);
    }
    Ok(out)
}

fn write_coeff_sign(out: &mut String, c: &Cyclo, first: bool) -> bool {
    // returns whether the coefficient magnitude still has to be written
    match c.as_rational() {
        Some(q) => {
            if q.is_negative() {
                out.push_str(if first { "-" } else { " - " });
            } else if !first {
                out.push_str(" + ");
            }
            false
        }
        None => {
            if !first {
                out.push_str(" + ");
            }
            true
        }
    }
}

fn write_monomial(out: &mut String, m: &[u32], names: &[String]) {
    let mut first = true;
    for (i, e) in m.iter().enumerate() {
        if *e == 0 {
            continue;
        }
        if !first {
            out.push('*');
        }
        first = false;
        match names.get(i) {
            Some(n) => out.push_str(n),
            None => {
                let _ = write!(out, "v{i}");
            }
        }
        if *e > 1 {
            let _ = write!(out, "^{e}");
        }
    }
}

/// Canonical text of a polynomial: terms in descending lexicographic order
/// of exponent vectors.
pub fn print_poly(p: &Poly<Cyclo>, syms: &Symbols) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    let mut first = true;
    for (m, c) in p.terms().rev() {
        let is_const = m.iter().all(|e| *e == 0);
        let explicit = write_coeff_sign(&mut out, c, first);
        first = false;
        if explicit {
            let _ = write!(out, "{c}");
            if !is_const {
                out.push('*');
            }
        } else {
            let q = c.as_rational().unwrap().abs();
            if !q.is_one() || is_const {
                if q.is_integer() {
                    let _ = write!(out, "{}", q.numer());
                } else {
                    let _ = write!(out, "{}/{}", q.numer(), q.denom());
                }
                if !is_const {
                    out.push('*');
                }
            }
        }
        if !is_const {
            write_monomial(&mut out, m, syms.names());
        }
    }
    out
}

fn print_fraction(num: &Poly<Cyclo>, den: &Poly<Cyclo>, syms: &Symbols) -> String {
    if den.is_one() {
        return print_poly(num, syms);
    }
    alloc::format!("({})/({})", print_poly(num, syms), print_poly(den, syms))
}

pub fn print_ratfn(r: &RatFn, syms: &Symbols) -> String {
    print_fraction(r.num(), r.den(), syms)
}

pub fn print_ratexpr(r: &RatExpr, syms: &Symbols) -> String {
    print_fraction(r.num(), r.den(), syms)
}

/// Canonical text of a radical element; each radical `r_j` prints as
/// `((g_j)^(1/m_j))^e`, so parsing against the same tower round-trips.
pub fn print_radical(x: &RadicalElem, syms: &Symbols) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut parts: Vec<String> = Vec::new();
    for (e, c) in x.terms() {
        let mut s = alloc::format!("({})", print_ratfn(c, syms));
        if let Some(t) = x.tower() {
            for (j, ej) in e.iter().enumerate() {
                if *ej == 0 {
                    continue;
                }
                let r = &t.radicals()[j];
                let _ = write!(s, "*(({})^(1/{}))", print_ratfn(&r.radicand, syms), r.index);
                if *ej > 1 {
                    let _ = write!(s, "^{ej}");
                }
            }
        }
        parts.push(s);
    }
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xs() -> Symbols {
        Symbols::with_coordinates(3, &["t"], 1).unwrap()
    }

    #[test]
    fn parses_cubic() {
        let p = parse_poly("X1^3+X2^3+X3^3", &xs()).unwrap();
        let expect = Poly::var(0).pow(3).add(&Poly::var(1).pow(3)).add(&Poly::var(2).pow(3));
        assert_eq!(p, expect);
        assert!(parse_poly("0", &xs()).unwrap().is_zero());
    }

    #[test]
    fn precedence_and_unary_minus() {
        let s = xs();
        assert_eq!(parse_poly("-X1^2", &s).unwrap(), Poly::var(0).pow(2).neg());
        assert_eq!(parse_poly("2-3*X1", &s).unwrap(), parse_poly("-(3*X1-2)", &s).unwrap());
        assert_eq!(parse_poly("X1/4*8", &s).unwrap(), parse_poly("2*X1", &s).unwrap());
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("X1 +\n  * X2") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("(X1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("X1 $"), Err(Error::Syntax { line: 1, column: 4, .. })));
        assert_eq!(parse_poly("Y", &xs()).unwrap_err(), Error::UnknownVariable("Y".into()));
    }

    #[test]
    fn radical_monomial() {
        let s = Symbols::new(["t"], 1).unwrap();
        let r = parse_radical("t^(1/3)*(t-1)^(1/3)", &s).unwrap();
        let t = r.tower().unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.radicals().iter().all(|r| r.index == 3));
        let cube = r.pow(3);
        assert_eq!(cube.as_ratfn().unwrap(), parse_ratfn("t^2-t", &s).unwrap());
    }

    #[test]
    fn root_of_unity() {
        let s = Symbols::new(["t"], 7).unwrap();
        let p = parse_ratfn("w^7", &s).unwrap();
        assert!(p.is_one());
    }

    #[test]
    fn printing_round_trips() {
        let s = xs();
        for text in ["X1^11*X2 - 11/256*X1^6*X2^6 - 1/65536*X1*X2^11", "-3", "X3 - 1/2*t^2 + 7"] {
            let p = parse_poly(text, &s).unwrap();
            assert_eq!(parse_poly(&print_poly(&p, &s), &s).unwrap(), p);
        }
        let s = Symbols::new(["t", "mu"], 3).unwrap();
        let r = parse_ratfn("(2*w+1)*(t-mu)/(t^2-1)", &s).unwrap();
        assert_eq!(parse_ratfn(&print_ratfn(&r, &s), &s).unwrap(), r);
        let x = parse_radical("1728^(-1/7) + t^(2/3)*(t-1)", &s).unwrap();
        let back = to_radical(&parse(&print_radical(&x, &s)).unwrap(), &s, x.tower().map(|t| &**t)).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn tree_display_round_trips() {
        for text in ["-(a-b)^2", "a-(b+c)", "a/(b*c)", "-a^(1/3)", "(a^2)^3", "a*-b", "2^(-2)"] {
            let e = parse(text).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{text}");
        }
    }
}
