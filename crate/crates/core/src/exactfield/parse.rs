//! Recursive-descent parser for exact arithmetic expressions.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ['^' ['-'] integer]
//! atom   := integer | symbol | '(' expr ')'
//! ```
//!
//! Symbols are single identifiers resolved by the caller, so the same parser
//! reads `e` in rational functions and `i` in Gaussian rationals.

use num_bigint::BigInt;

use super::{FieldError, Scalar};

pub(crate) fn parse_expression<S, F>(input: &str, from_int: impl Fn(&BigInt) -> S, symbol: F) -> Result<S, FieldError>
where
    S: Scalar,
    F: Fn(&str) -> Option<S>,
{
    let mut p = Parser {
        chars: input.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
        pos: 0,
        input,
        from_int: &from_int,
        symbol: &symbol,
    };
    if p.chars.is_empty() {
        return Err(p.error("empty expression"));
    }
    let v = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a, S> {
    chars: Vec<(usize, char)>,
    pos: usize,
    input: &'a str,
    from_int: &'a dyn Fn(&BigInt) -> S,
    symbol: &'a dyn Fn(&str) -> Option<S>,
}

impl<S: Scalar> Parser<'_, S> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or(self.input.len())
    }

    fn error(&self, msg: &str) -> FieldError {
        FieldError::Parse {
            input: self.input.to_string(),
            position: self.offset(),
            message: msg.to_string(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<S, FieldError> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = acc.negated();
        }
        loop {
            if self.eat('+') {
                acc = acc.plus(&self.term()?);
            } else if self.eat('-') {
                acc = acc.minus(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<S, FieldError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc.times(&self.factor()?);
            } else if self.peek() == Some('/') {
                let at = self.offset();
                self.pos += 1;
                let d = self.factor()?;
                acc = acc.divided(&d).map_err(|_| FieldError::Parse {
                    input: self.input.to_string(),
                    position: at,
                    message: "division by zero".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<S, FieldError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let k = self.integer()?;
        let k: u32 = k
            .try_into()
            .map_err(|_| self.error("exponent out of range"))?;
        let mut acc = S::one();
        for _ in 0..k {
            acc = acc.times(&base);
        }
        if neg {
            acc = acc.inverse().map_err(|_| self.error("zero to a negative power"))?;
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<BigInt, FieldError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let digits: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        Ok(digits.parse().expect("ascii digits"))
    }

    fn atom(&mut self) -> Result<S, FieldError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok((self.from_int)(&n))
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(char::is_alphanumeric) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
                (self.symbol)(&name).ok_or_else(|| {
                    self.pos = start;
                    self.error(&format!("unknown symbol '{name}'"))
                })
            }
            _ => Err(self.error("expected number, symbol or '('")),
        }
    }
}
