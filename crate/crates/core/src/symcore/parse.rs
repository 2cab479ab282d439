//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' INT)*
//! atom  := INT | IDENT | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;

use super::poly::VarName;
use super::{Expr, ExprError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn next(&mut self) -> Result<(usize, Tok), ExprError> {
        self.skip_ws();
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((start, Tok::End));
        };
        if c.is_ascii_digit() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            return Ok((start, Tok::Int(s.parse().unwrap())));
        }
        if c.is_ascii_alphabetic() {
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            return Ok((start, Tok::Ident(s.to_string())));
        }
        if b"+-*/^()".contains(&c) {
            self.pos += 1;
            return Ok((start, Tok::Sym(c as char)));
        }
        Err(ExprError::Parse { pos: start, msg: format!("unexpected character {:?}", c as char) })
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), ExprError> {
        let (p, t) = self.lex.next()?;
        self.pos = p;
        self.tok = t;
        Ok(())
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.tok {
                Tok::Sym('+') => {
                    self.bump()?;
                    acc = &acc + &self.term()?;
                }
                Tok::Sym('-') => {
                    self.bump()?;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.unary()?;
        loop {
            match self.tok {
                Tok::Sym('*') => {
                    self.bump()?;
                    acc = &acc * &self.unary()?;
                }
                Tok::Sym('/') => {
                    self.bump()?;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    if rhs.is_zero() {
                        return Err(ExprError::Parse { pos: at, msg: "division by zero".into() });
                    }
                    acc = &acc / &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.tok == Tok::Sym('-') {
            self.bump()?;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let mut base = self.atom()?;
        while self.tok == Tok::Sym('^') {
            self.bump()?;
            let Tok::Int(n) = &self.tok else {
                return self.err("exponent must be a nonnegative integer literal");
            };
            let Ok(e) = u32::try_from(n.clone()) else {
                return self.err("exponent too large");
            };
            self.bump()?;
            base = base.pow(e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match std::mem::replace(&mut self.tok, Tok::End) {
            Tok::Int(n) => {
                self.bump()?;
                Ok(Expr::constant(BigRational::from_integer(n)))
            }
            Tok::Ident(s) => {
                let v = VarName::new(&s)?;
                self.bump()?;
                Ok(Expr::var(&v))
            }
            Tok::Sym('(') => {
                self.bump()?;
                let e = self.expr()?;
                if self.tok != Tok::Sym(')') {
                    return self.err("expected `)`");
                }
                self.bump()?;
                Ok(e)
            }
            Tok::End => self.err("unexpected end of input"),
            Tok::Sym(c) => self.err(format!("unexpected `{c}`")),
        }
    }
}

/// Parse an expression into canonical form.
pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { lex: Lexer { src: text.as_bytes(), pos: 0 }, tok: Tok::End, pos: 0 };
    p.bump()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.err("trailing input");
    }
    Ok(e)
}
