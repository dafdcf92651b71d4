//! Recursive-descent parser for polynomial text such as `3/2*D1^2*D3 - q1*D4`.
//!
//! Grammar (whitespace ignored):
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ('-' | '+') factor | atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//! Division is only allowed by nonzero constants.

use num_bigint::BigInt;

use super::polynomial::Polynomial;
use super::PolyError;
use crate::linalg::Rational;

/// Parses `text` into a polynomial in `nvars` variables. Identifiers are
/// resolved by `lookup`; unknown identifiers are parse errors.
pub fn parse_polynomial(
    text: &str,
    nvars: usize,
    lookup: &dyn Fn(&str) -> Option<Polynomial>,
) -> Result<Polynomial, PolyError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, nvars, lookup };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(out)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    nvars: usize,
    lookup: &'a dyn Fn(&str) -> Option<Polynomial>,
}

impl Parser<'_> {
    fn column(&self) -> usize {
        // 1-based character column
        self.pos.min(self.chars.len()) + 1
    }

    fn error(&self, message: String) -> PolyError {
        PolyError::Parse { position: self.column(), message }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                '/' => {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.column();
                    let d = self.factor()?;
                    let c = d.constant_term();
                    if !d.is_constant() || c == Rational::from_integer(0.into()) {
                        return Err(PolyError::Parse {
                            position: at,
                            message: "can only divide by a nonzero constant".into(),
                        });
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                return Ok(-&self.factor()?);
            }
            Some('+') => {
                self.pos += 1;
                return self.factor();
            }
            _ => {}
        }
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.column();
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| PolyError::Parse { position: at, message: "exponent too large".into() })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer".into()));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            None => Err(PolyError::Parse { position: self.chars.len() + 1, message: "unexpected end of input".into() }),
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Polynomial::constant(self.nvars, Rational::from_integer(n)))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len() && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_')
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                (self.lookup)(&name).ok_or(PolyError::Parse {
                    position: start + 1,
                    message: format!("unknown symbol '{name}'"),
                })
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
        }
    }
}
