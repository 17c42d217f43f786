//! Surface syntax: `+ - * / ^`, parentheses, integer literals, field
//! constant names and ring variables. Implicit multiplication is rejected,
//! and a unary minus may only open an expression.

use num_bigint::BigInt;

use super::{Poly, PolyError, PolyRing};
use crate::field::{Field, Value};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, PolyError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                return Err(PolyError::Syntax { pos: i, msg: "implicit multiplication is not allowed".into() });
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Num(s.parse().unwrap()), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*/^".contains(c) {
            out.push((Tok::Op(c), start));
            i += 1;
        } else if c == '(' {
            out.push((Tok::Open, start));
            i += 1;
        } else if c == ')' {
            out.push((Tok::Close, start));
            i += 1;
        } else {
            return Err(PolyError::Syntax { pos: start, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

/// Numerator and denominator, both in the target ring.
struct Rat {
    num: Poly,
    den: Poly,
}

impl Rat {
    fn poly(p: Poly) -> Rat {
        let den = p.ring().one();
        Rat { num: p, den }
    }

    /// Folds a constant denominator into the numerator.
    fn tidy(self) -> Rat {
        if let Some(d) = self.den.as_constant() {
            let k = self.num.field().clone();
            if !k.is_one(&d) {
                let inv = k.inv(&d).expect("denominator checked nonzero");
                let one = self.den.ring().one();
                return Rat { num: self.num.scale(&inv), den: one };
            }
        }
        self
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ring: &'a PolyRing,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T, PolyError> {
        Err(PolyError::Syntax { pos: self.here(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<Rat, PolyError> {
        let negate = if self.peek() == Some(&Tok::Op('-')) {
            self.pos += 1;
            if matches!(self.peek(), Some(Tok::Op('-')) | Some(Tok::Op('+'))) {
                return self.err("repeated unary sign");
            }
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc.num = -&acc.num;
        }
        while let Some(Tok::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            let rhs_num = if op == '-' { -&rhs.num } else { rhs.num };
            acc = if acc.den == rhs.den {
                Rat { num: &acc.num + &rhs_num, den: acc.den }
            } else {
                Rat { num: &(&acc.num * &rhs.den) + &(&rhs_num * &acc.den), den: &acc.den * &rhs.den }
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Rat, PolyError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Op(op @ ('*' | '/'))) = self.peek().cloned() {
            let at = self.here();
            self.pos += 1;
            let rhs = self.factor()?;
            acc = if op == '*' {
                Rat { num: &acc.num * &rhs.num, den: &acc.den * &rhs.den }
            } else {
                if rhs.num.is_zero() {
                    return Err(PolyError::Syntax { pos: at, msg: "division by zero".into() });
                }
                Rat { num: &acc.num * &rhs.den, den: &acc.den * &rhs.num }
            }
            .tidy();
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Rat, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Op('^')) {
            self.pos += 1;
            let e = match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    u32::try_from(n).or_else(|_| self.err("exponent too large"))?
                }
                _ => return self.err("expected a nonnegative integer exponent"),
            };
            if self.peek() == Some(&Tok::Op('^')) {
                return self.err("chained exponents need parentheses");
            }
            return Ok(Rat { num: base.num.pow(e), den: base.den.pow(e) });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Rat, PolyError> {
        let here = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Open)) {
                    return self.err("implicit multiplication is not allowed");
                }
                Ok(Rat::poly(self.ring.constant(self.ring.field().from_bigint(&n))))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Open) | Some(Tok::Num(_))) {
                    return self.err("implicit multiplication is not allowed");
                }
                if let Ok(i) = self.ring.var_index(&name) {
                    Ok(Rat::poly(self.ring.var(i)))
                } else if let Some(v) = self.ring.field().constant(&name) {
                    Ok(Rat::poly(self.ring.constant(v)))
                } else {
                    Err(PolyError::UnknownSymbol { pos: here, name })
                }
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Open) | Some(Tok::Num(_))) {
                    return self.err("implicit multiplication is not allowed");
                }
                Ok(inner)
            }
            Some(Tok::Op('-')) => self.err("unary minus is only allowed at the start of an expression"),
            Some(_) => self.err("expected a number, name or `(`"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_rat(text: &str, ring: &PolyRing) -> Result<Rat, PolyError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(PolyError::Syntax { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, pos: 0, ring, end: text.chars().count() };
    let r = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(r.tidy())
}

/// Parses a polynomial. Division is allowed only by constants.
pub fn parse_poly(text: &str, ring: &PolyRing) -> Result<Poly, PolyError> {
    let r = parse_rat(text, ring)?;
    if !r.den.is_constant() {
        return Err(PolyError::NonPolynomial { pos: 0 });
    }
    Ok(r.num)
}

/// Parses a rational expression as `(numerator, denominator)`.
pub fn parse_rational(text: &str, ring: &PolyRing) -> Result<(Poly, Poly), PolyError> {
    let r = parse_rat(text, ring)?;
    Ok((r.num, r.den))
}

/// Parses a constant of the field (no ring variables in scope).
pub fn parse_field_elem(text: &str, field: &Field) -> Result<Value, PolyError> {
    let ring = PolyRing::new(field, &[])?;
    let p = parse_poly(text, &ring)?;
    Ok(p.as_constant().expect("no variables in scope"))
}

/// Parses a univariate polynomial in `var` and returns its coefficients,
/// low to high.
pub fn parse_univariate(text: &str, field: &Field, var: &str) -> Result<Vec<Value>, PolyError> {
    let ring = PolyRing::new(field, &[var])?;
    let p = parse_poly(text, &ring)?;
    let deg = p.degree_in(0).unwrap_or(0) as usize;
    let mut coeffs = vec![field.zero(); if p.is_zero() { 0 } else { deg + 1 }];
    for (m, c) in p.terms() {
        coeffs[m[0] as usize] = c.clone();
    }
    Ok(coeffs)
}
