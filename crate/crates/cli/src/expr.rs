//! Text syntax for Poisson expressions.
//!
//! ```text
//! expr     := ['+'|'-'] term (('+'|'-') term)*
//! term     := rational ['*'] factor ('*' factor)* | rational | factor ('*' factor)*
//! factor   := atom ('^' nat)*
//! atom     := ident | '{' expr ',' expr '}' | '(' expr ')'
//! rational := int ['/' posint]
//! ```

use std::fmt::Write as _;

use cgsb_core::freelie::{LieSpec, LsWord};
use cgsb_core::linear::{q, Q};
use cgsb_core::poisson::{PoissonElement, PoissonExpr};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown generator {name:?} at byte {offset}")]
    UnknownGenerator { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownGenerator { offset, .. } => *offset,
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    spec: &'a LieSpec,
}

pub fn parse_expr(text: &str, spec: &LieSpec) -> Result<PoissonExpr, ParseError> {
    let mut p = Parser { src: text, pos: 0, spec };
    p.skip_ws();
    if p.pos == text.len() {
        return Err(p.error("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected input"));
    }
    Ok(e)
}

fn negate(e: PoissonExpr) -> PoissonExpr {
    match e {
        PoissonExpr::Scale(c, f) => PoissonExpr::Scale(-c, f),
        PoissonExpr::Const(c) => PoissonExpr::Const(-c),
        e => PoissonExpr::Scale(q(-1), Box::new(e)),
    }
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> ParseError {
        ParseError::Syntax { offset: self.pos, message: message.to_owned() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<PoissonExpr, ParseError> {
        let mut terms = Vec::new();
        let mut neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            let t = self.term()?;
            terms.push(if neg { negate(t) } else { t });
            if self.eat(b'+') {
                neg = false;
            } else if self.eat(b'-') {
                neg = true;
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { PoissonExpr::Sum(terms) })
    }

    fn term(&mut self) -> Result<PoissonExpr, ParseError> {
        self.skip_ws();
        let coeff = if matches!(self.peek(), Some(b) if b.is_ascii_digit()) { Some(self.rational()?) } else { None };
        self.skip_ws();
        let starts_factor = matches!(self.peek(), Some(b) if b.is_ascii_alphabetic() || b == b'{' || b == b'(');
        if let Some(c) = &coeff {
            if !starts_factor && !self.eat(b'*') {
                return Ok(PoissonExpr::Const(c.clone()));
            }
        }
        let mut factors = vec![self.factor()?];
        while self.eat(b'*') {
            factors.push(self.factor()?);
        }
        let body = if factors.len() == 1 { factors.pop().unwrap() } else { PoissonExpr::Prod(factors) };
        Ok(match coeff {
            Some(c) => PoissonExpr::Scale(c, Box::new(body)),
            None => body,
        })
    }

    fn factor(&mut self) -> Result<PoissonExpr, ParseError> {
        let mut f = self.atom()?;
        while self.eat(b'^') {
            self.skip_ws();
            let n = self.digits()?;
            let n: u32 = n.parse().map_err(|_| self.error("exponent too large"))?;
            f = PoissonExpr::Pow(Box::new(f), n);
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<PoissonExpr, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b'{') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b'}')?;
                Ok(PoissonExpr::Bracket(Box::new(a), Box::new(b)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b) if b.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || b == b'_') {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                match self.spec.letter_index(name) {
                    Some(l) => Ok(PoissonExpr::Gen(LsWord::letter(l))),
                    None => Err(ParseError::UnknownGenerator { offset: start, name: name.to_owned() }),
                }
            }
            _ => Err(self.error("expected a generator, '{' or '('")),
        }
    }

    fn digits(&mut self) -> Result<&'a str, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        Ok(&self.src[start..self.pos])
    }

    fn rational(&mut self) -> Result<Q, ParseError> {
        let num = self.digits()?;
        let save = self.pos;
        self.skip_ws();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let den = self.digits()?;
            if den.bytes().all(|b| b == b'0') {
                self.pos = at;
                return Err(self.error("zero denominator"));
            }
            return Ok(format!("{}/{}", num, den).parse().expect("digits"));
        }
        self.pos = save;
        Ok(num.parse().expect("digits"))
    }
}

fn is_negative(c: &Q) -> bool {
    *c < q(0)
}

/// Prints a tree so that [`parse_expr`] rebuilds it exactly.
pub fn print_expr(e: &PoissonExpr, spec: &LieSpec) -> String {
    let mut out = String::new();
    top(e, spec, &mut out);
    out
}

fn top(e: &PoissonExpr, spec: &LieSpec, out: &mut String) {
    match e {
        PoissonExpr::Sum(items) if !items.is_empty() => {
            for (i, it) in items.iter().enumerate() {
                let (neg, body) = match it {
                    PoissonExpr::Scale(c, f) if is_negative(c) => (true, PoissonExpr::Scale(-c.clone(), f.clone())),
                    PoissonExpr::Const(c) if is_negative(c) => (true, PoissonExpr::Const(-c.clone())),
                    other => (false, other.clone()),
                };
                match (i, neg) {
                    (0, true) => out.push('-'),
                    (0, false) => {}
                    (_, true) => out.push_str(" - "),
                    (_, false) => out.push_str(" + "),
                }
                term(&body, spec, out);
            }
        }
        PoissonExpr::Scale(c, f) if is_negative(c) => {
            out.push('-');
            term(&PoissonExpr::Scale(-c.clone(), f.clone()), spec, out);
        }
        PoissonExpr::Const(c) if is_negative(c) => {
            let _ = write!(out, "-{}", -c.clone());
        }
        other => term(other, spec, out),
    }
}

/// A term with a nonnegative leading coefficient, if any.
fn term(e: &PoissonExpr, spec: &LieSpec, out: &mut String) {
    match e {
        PoissonExpr::Const(c) => {
            let _ = write!(out, "{}", c);
        }
        PoissonExpr::Scale(c, f) => {
            let _ = write!(out, "{} ", c);
            match &**f {
                PoissonExpr::Prod(items) if !items.is_empty() => product(items, spec, out),
                other => factor(other, spec, out),
            }
        }
        PoissonExpr::Prod(items) if !items.is_empty() => product(items, spec, out),
        other => factor(other, spec, out),
    }
}

fn product(items: &[PoissonExpr], spec: &LieSpec, out: &mut String) {
    for (i, it) in items.iter().enumerate() {
        if i > 0 {
            out.push('*');
        }
        factor(it, spec, out);
    }
}

fn factor(e: &PoissonExpr, spec: &LieSpec, out: &mut String) {
    match e {
        PoissonExpr::Gen(w) => out.push_str(&spec.bracket_name(w)),
        PoissonExpr::Bracket(a, b) => {
            out.push('{');
            top(a, spec, out);
            out.push_str(", ");
            top(b, spec, out);
            out.push('}');
        }
        PoissonExpr::Pow(f, n) => {
            factor(f, spec, out);
            let _ = write!(out, "^{}", n);
        }
        other => {
            out.push('(');
            top(other, spec, out);
            out.push(')');
        }
    }
}

/// Poisson element in the input syntax; monomials appear in basis order.
pub fn render_poisson(spec: &LieSpec, p: &PoissonElement) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.iter().enumerate() {
        let neg = is_negative(c);
        let a = if neg { -c.clone() } else { c.clone() };
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if m.is_unit() {
            let _ = write!(out, "{}", a);
            continue;
        }
        if a != q(1) {
            let _ = write!(out, "{} ", a);
        }
        let names: Vec<String> = m.factors().iter().map(|w| spec.bracket_name(w)).collect();
        out.push_str(&names.join("*"));
    }
    out
}
