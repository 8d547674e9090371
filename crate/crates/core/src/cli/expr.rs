//! Ad-hoc product expressions: `L(m)`, `G(k/2)`, `c`, infix `*`, brackets `[x,y]`.

use std::fmt;

use crate::exactfield::Scalar;
use crate::structures::{BasisIndex, Element, Sector, StructureError, StructureSystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Basis(BasisIndex),
    Product(Box<Expr>, Box<Expr>),
    Bracket(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ExprError {}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(d) => self.err(format!("expected '{c}', found '{d}'")),
            None => self.err(format!("expected '{c}', found end of input")),
        }
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.operand()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let rhs = self.operand()?;
            lhs = Expr::Product(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn operand(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let x = self.product()?;
                self.expect(',')?;
                let y = self.product()?;
                self.expect(']')?;
                Ok(Expr::Bracket(Box::new(x), Box::new(y)))
            }
            Some('(') => {
                self.pos += 1;
                let x = self.product()?;
                self.expect(')')?;
                Ok(x)
            }
            Some('c') => {
                self.pos += 1;
                Ok(Expr::Basis(BasisIndex::C))
            }
            Some('L' | 'G') => {
                let start = self.pos;
                let Some(len) = self.src[start..].find(')') else {
                    return self.err("unclosed index");
                };
                let text = &self.src[start..start + len + 1];
                match text.parse::<BasisIndex>() {
                    Ok(b) => {
                        self.pos = start + len + 1;
                        Ok(Expr::Basis(b))
                    }
                    Err(_) => self.err(format!("bad basis vector {text:?}")),
                }
            }
            Some(d) => self.err(format!("unexpected '{d}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.product()?;
    match p.peek() {
        None => Ok(e),
        Some(d) => p.err(format!("unexpected '{d}' after expression")),
    }
}

impl Expr {
    pub fn check_sector(&self, sector: Sector) -> Result<(), StructureError> {
        match self {
            Expr::Basis(b) => b.check_sector(sector).map(|_| ()),
            Expr::Product(x, y) | Expr::Bracket(x, y) => {
                x.check_sector(sector)?;
                y.check_sector(sector)
            }
        }
    }

    pub fn eval<S: Scalar>(&self, sys: &StructureSystem<S>) -> Result<Element<S>, StructureError> {
        match self {
            Expr::Basis(b) => Ok(Element::basis(*b)),
            Expr::Product(x, y) => sys.multiply(&x.eval(sys)?, &y.eval(sys)?),
            Expr::Bracket(x, y) => sys.super_commutator(&x.eval(sys)?, &y.eval(sys)?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::RatFun;
    use crate::structures::Mode;

    fn eval(s: &str) -> String {
        let sys = StructureSystem::symbolic(Sector::NeveuSchwarz, Mode::CentralClosedForm);
        parse_expr(s).unwrap().eval::<RatFun>(&sys).unwrap().to_string()
    }

    #[test]
    fn values() {
        assert_eq!(eval("[L(2), L(-2)]"), "4*L(0) + (1/2)*c");
        assert_eq!(eval("c * L(5)"), "0");
        assert_eq!(eval("L(0) * G(1/2)"), "(-1/2)*G(1/2)");
        assert_eq!(eval("(L(0))"), "L(0)");
    }

    #[test]
    fn left_associative() {
        let e = parse_expr("L(1) * L(2) * L(3)").unwrap();
        let Expr::Product(lhs, _) = e else { panic!() };
        assert!(matches!(*lhs, Expr::Product(..)));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_expr("L(1) * ").unwrap_err().position, 7);
        assert_eq!(parse_expr("[L(1) L(2)]").unwrap_err().position, 6);
        assert_eq!(parse_expr("L(1/2)").unwrap_err().position, 0);
        assert_eq!(parse_expr("L(1) x").unwrap_err().position, 5);
    }
}
