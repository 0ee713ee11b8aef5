//! Linear formula mini-language.
//!
//! ```text
//! expr := ['~'] ['+'|'-'] term (('+'|'-') term)*
//! term := [number '*'] identifier
//! ```
//!
//! Identifiers are `[A-Za-z_.][A-Za-z0-9_.]*`, so pipeline intermediates
//! such as `.pet` can be referenced directly.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub var: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearFormula {
    pub terms: Vec<Term>,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
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

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::FormulaSyntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn number(&mut self) -> Option<f64> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut i = start;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
            i += 1;
        }
        if i == start || !bytes[start..i].iter().any(u8::is_ascii_digit) {
            return None;
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            let digits = j;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j > digits {
                i = j;
            }
        }
        let v = self.src[start..i].parse().ok()?;
        self.pos = i;
        Some(v)
    }

    fn ident(&mut self) -> Option<String> {
        let bytes = self.src.as_bytes();
        let start = self.pos;
        let first = |b: u8| b.is_ascii_alphabetic() || b == b'_' || b == b'.';
        if !bytes.get(start).copied().is_some_and(first) {
            return None;
        }
        let mut i = start + 1;
        while i < bytes.len() && (first(bytes[i]) || bytes[i].is_ascii_digit()) {
            i += 1;
        }
        // A lone "." is not an identifier.
        if &self.src[start..i] == "." {
            return None;
        }
        self.pos = i;
        Some(self.src[start..i].to_string())
    }

    fn term(&mut self, sign: f64) -> Result<Term> {
        self.skip_ws();
        let save = self.pos;
        // Identifiers may start with '.', numbers may too: try the number
        // only if it is followed by '*'.
        if let Some(c) = self.number() {
            if self.eat(b'*') {
                self.skip_ws();
                return match self.ident() {
                    Some(var) => Ok(Term { coef: sign * c, var }),
                    None => self.err("expected identifier after '*'"),
                };
            }
            self.pos = save;
        }
        match self.ident() {
            Some(var) => Ok(Term { coef: sign, var }),
            None => self.err("expected term"),
        }
    }
}

/// Parses a linear formula such as `x1 + x2` or `2*p - 0.5*q`.
pub fn parse_formula(text: &str) -> Result<LinearFormula> {
    let mut lx = Lexer { src: text, pos: 0 };
    lx.eat(b'~');
    let mut sign = 1.0;
    if lx.eat(b'-') {
        sign = -1.0;
    } else {
        lx.eat(b'+');
    }
    let mut terms = vec![lx.term(sign)?];
    loop {
        lx.skip_ws();
        if lx.peek().is_none() {
            break;
        }
        let sign = if lx.eat(b'+') {
            1.0
        } else if lx.eat(b'-') {
            -1.0
        } else {
            return lx.err("expected '+' or '-'");
        };
        terms.push(lx.term(sign)?);
    }
    Ok(LinearFormula { terms })
}

fn write_term(f: &mut fmt::Formatter<'_>, coef: f64, var: &str) -> fmt::Result {
    if coef == 1.0 {
        f.write_str(var)
    } else {
        write!(f, "{coef}*{var}")
    }
}

/// Canonical form: `a*x + b*y - c*z`, unit coefficients omitted.
impl fmt::Display for LinearFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coef.is_sign_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write_term(f, t.coef.abs(), &t.var)?;
        }
        Ok(())
    }
}

impl LinearFormula {
    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(|t| t.var.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(coef: f64, var: &str) -> Term {
        Term { coef, var: var.into() }
    }

    #[test]
    fn sum_of_two() {
        let f = parse_formula("x1 + x2").unwrap();
        assert_eq!(f.terms, [t(1.0, "x1"), t(1.0, "x2")]);
        assert_eq!(f.to_string(), "x1 + x2");
    }

    #[test]
    fn tilde_prefix() {
        assert_eq!(parse_formula("~x1 + x2").unwrap(), parse_formula("x1 + x2").unwrap());
    }

    #[test]
    fn coefficients_and_minus() {
        let f = parse_formula("2*p - 0.5*q").unwrap();
        assert_eq!(f.terms, [t(2.0, "p"), t(-0.5, "q")]);
        assert_eq!(f.to_string(), "2*p - 0.5*q");
    }

    #[test]
    fn dotted_identifiers() {
        let f = parse_formula("prcp - .pet").unwrap();
        assert_eq!(f.terms, [t(1.0, "prcp"), t(-1.0, ".pet")]);
        let f = parse_formula(".5*x").unwrap();
        assert_eq!(f.terms, [t(0.5, "x")]);
    }

    #[test]
    fn leading_sign_and_exponent() {
        let f = parse_formula("-1e-3*a + b").unwrap();
        assert_eq!(f.terms, [t(-1e-3, "a"), t(1.0, "b")]);
    }

    #[test]
    fn syntax_errors_carry_position() {
        assert!(matches!(parse_formula("x1 +"), Err(Error::FormulaSyntax { pos: 4, .. })));
        assert!(matches!(parse_formula("x1 x2"), Err(Error::FormulaSyntax { pos: 3, .. })));
        assert!(matches!(parse_formula("2*"), Err(Error::FormulaSyntax { .. })));
        assert!(matches!(parse_formula(""), Err(Error::FormulaSyntax { pos: 0, .. })));
        assert!(parse_formula("x1 * x2").is_err());
    }
}
