//! Text forms.
//!
//! A term prints as `C2*U1^2*f[{0,2},{1,2}]`: exterior factors by line, then
//! powers of `U` by line with the exponent always written, then the
//! generator. An element joins its term strings with `+` in lexicographic
//! order, and zero prints as `0`.

use std::fmt;

use crate::algebra::{AlgebraContext, BasisElement, Element, Monomial};
use crate::error::{Error, Result};
use crate::istate::{IState, LineSet};

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in self.c.iter() {
            write!(f, "C{i}*")?;
        }
        if !self.u.is_one() {
            write!(f, "{}*", self.u)?;
        }
        write!(f, "f[{},{}]", self.left, self.right)
    }
}

pub(crate) struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Self {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    pub(crate) fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    pub(crate) fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(format!("expected '{}'", c as char))
        }
    }

    pub(crate) fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected a number");
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .expect("digits are ascii")
            .parse()
            .or_else(|_| self.error("number too large"))
    }

    pub(crate) fn istate(&mut self, n: usize) -> Result<IState> {
        let at = self.pos;
        self.expect(b'{')?;
        let mut members = Vec::new();
        if !self.eat(b'}') {
            loop {
                members.push(self.number()?);
                if self.eat(b'}') {
                    break;
                }
                self.expect(b',')?;
            }
        }
        IState::new(n, &members).map_err(|e| Error::Parse {
            pos: at,
            msg: e.to_string(),
        })
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.error("trailing input")
        }
    }
}

fn parse_term(ctx: &AlgebraContext, cur: &mut Cursor) -> Result<Option<BasisElement>> {
    let n = ctx.width();
    let mut c = LineSet::EMPTY;
    let mut killed = false;
    let mut u = Monomial::ONE;
    let mut gen: Option<(IState, IState)> = None;
    loop {
        let at = cur.pos;
        let line = |cur: &mut Cursor| -> Result<usize> {
            let i = cur.number()?;
            if i == 0 || i > n {
                return cur.error(format!("line {i} outside [1,{n}]"));
            }
            Ok(i)
        };
        match cur.peek() {
            Some(b'C') => {
                cur.pos += 1;
                let i = line(cur)?;
                if !ctx.orientation().contains(i) {
                    return Err(Error::Parse {
                        pos: at,
                        msg: format!("C{i} is not a generator of {ctx}"),
                    });
                }
                killed |= c.contains(i);
                c = c.with(i);
            }
            Some(b'U') => {
                cur.pos += 1;
                let i = line(cur)?;
                let e = if cur.eat(b'^') { cur.number()? } else { 1 };
                u.set_exponent(i, u.exponent(i) + e as u32);
            }
            Some(b'f') => {
                cur.pos += 1;
                if gen.is_some() {
                    return cur.error("a term has exactly one generator f[..]");
                }
                cur.expect(b'[')?;
                let x = cur.istate(n)?;
                cur.expect(b',')?;
                let y = cur.istate(n)?;
                cur.expect(b']')?;
                for s in [x, y] {
                    if !ctx.is_admissible(&s) {
                        return Err(Error::Parse {
                            pos: at,
                            msg: format!("{s} is not a vertex of {ctx}"),
                        });
                    }
                }
                gen = Some((x, y));
            }
            _ => return cur.error("expected C, U or f"),
        }
        if !cur.eat(b'*') {
            break;
        }
    }
    let Some((x, y)) = gen else {
        return cur.error("term without a generator f[..]");
    };
    if killed {
        return Ok(None);
    }
    ctx.basis(x, y, u, c)
}

pub(crate) fn parse_element(ctx: &AlgebraContext, text: &str) -> Result<Element> {
    let mut cur = Cursor::new(text);
    if cur.eat(b'0') {
        cur.finish()?;
        return Ok(Element::zero(*ctx));
    }
    let mut e = Element::zero(*ctx);
    loop {
        if let Some(b) = parse_term(ctx, &mut cur)? {
            e.toggle(b);
        }
        if !cur.eat(b'+') {
            break;
        }
    }
    cur.finish()?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Flavor;

    #[test]
    fn round_trip() {
        let ctx = AlgebraContext::with_lines(2, 2, &[2], Flavor::B).unwrap();
        let text = "C2*U1^2*f[{0,2},{1,2}]";
        let e = ctx.parse_element(text).unwrap();
        assert_eq!(e.to_string(), text);
        let e = ctx.parse_element("U1*f[{0,2},{0,2}] + f[{0,1},{0,1}]").unwrap();
        assert_eq!(e.to_string(), "U1^1*f[{0,2},{0,2}]+f[{0,1},{0,1}]");
    }

    #[test]
    fn cancellation_and_zero() {
        let ctx = AlgebraContext::with_lines(2, 1, &[1], Flavor::B).unwrap();
        assert!(ctx.parse_element("f[{0},{1}]+f[{0},{1}]").unwrap().is_zero());
        assert!(ctx.parse_element("C1*C1*f[{1},{1}]").unwrap().is_zero());
        assert!(ctx.parse_element("f[{0},{2}]").unwrap().is_zero());
        assert_eq!(ctx.parse_element("0").unwrap().to_string(), "0");
    }

    #[test]
    fn errors_carry_positions() {
        let ctx = AlgebraContext::with_lines(2, 1, &[], Flavor::B).unwrap();
        match ctx.parse_element("f[{0},{1}]*X") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 11),
            other => panic!("{other:?}"),
        }
        assert!(ctx.parse_element("C1*f[{0},{0}]").is_err());
        assert!(ctx.parse_element("U1").is_err());
        assert!(ctx.parse_element("f[{0,1},{0,1}]").is_err());
    }
}
