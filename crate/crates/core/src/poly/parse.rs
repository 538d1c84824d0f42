//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! poly   := term ('+' term)*
//! term   := factor ('*' factor)*
//! factor := 'x' UINT ('^' UINT)? | '0' | '1'
//! ```
//!
//! Whitespace is ignored. Variables are 1-based in text. The literals `0`
//! and `1` exist so the printer's output for zero and constants parses back.

use super::{Monomial, Poly};
use crate::{Error, Result};

pub fn parse_poly(text: &str, nvars: usize) -> Result<Poly> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        nvars,
    };
    let poly = p.poly()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.error(format!("unexpected character '{}'", p.bytes[p.pos] as char)));
    }
    Ok(poly)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn poly(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero(self.nvars);
        acc += &self.term()?;
        while self.eat(b'+') {
            acc += &self.term()?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        // A product of factors is a single monomial or zero.
        let mut mono = Some(Monomial::one(self.nvars));
        let f = self.factor()?;
        mono = mono.and_then(|m| f.map(|g| m.mul(&g)));
        while self.eat(b'*') {
            let f = self.factor()?;
            mono = mono.and_then(|m| f.map(|g| m.mul(&g)));
        }
        Ok(match mono {
            Some(m) => Poly::from_monomial(m),
            None => Poly::zero(self.nvars),
        })
    }

    /// `None` stands for the literal zero.
    fn factor(&mut self) -> Result<Option<Monomial>> {
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let start = self.pos;
                let index = self.uint()?;
                if index == 0 || index > self.nvars {
                    return Err(if index == 0 {
                        Error::Parse {
                            pos: start,
                            msg: format!("variable index 0 out of range 1..={}", self.nvars),
                        }
                    } else {
                        Error::VariableOutOfRange {
                            index,
                            nvars: self.nvars,
                        }
                    });
                }
                let mut exp = 1usize;
                if self.eat(b'^') {
                    exp = self.uint()?;
                }
                if exp > u8::MAX as usize {
                    return Err(self.error(format!("exponent {exp} too large")));
                }
                let mut exps = vec![0u8; self.nvars];
                exps[index - 1] = exp as u8;
                Ok(Some(Monomial::from_exponents(exps)))
            }
            Some(b'0') => {
                self.pos += 1;
                Ok(None)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Some(Monomial::one(self.nvars)))
            }
            Some(c) => Err(self.error(format!("expected factor, found '{}'", c as char))),
            None => Err(self.error("expected factor, found end of input")),
        }
    }

    fn uint(&mut self) -> Result<usize> {
        // No whitespace inside a variable name or exponent.
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected unsigned integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse {
                pos: start,
                msg: "integer too large".into(),
            })
    }
}
