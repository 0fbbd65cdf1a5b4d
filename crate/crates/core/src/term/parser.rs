use super::{Equation, Term};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Term(Term),
    Equation(Equation),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Zero,
    One,
    Id,
    Var(u32),
    Minus,
    Tilde,
    Plus,
    Amp,
    Semi,
    LParen,
    RParen,
    Eq,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0' => Tok::Zero,
            b'1' => Tok::One,
            b'e' => Tok::Id,
            b'-' => Tok::Minus,
            b'~' => Tok::Tilde,
            b'+' => Tok::Plus,
            b'&' => Tok::Amp,
            b';' => Tok::Semi,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'=' => Tok::Eq,
            b'x' => {
                let start = i;
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let digits = &text[i + 1..j];
                let n: u32 = digits
                    .parse()
                    .map_err(|_| Error::parse(start, "expected variable index after 'x'"))?;
                if n == 0 {
                    return Err(Error::parse(start, "variables are numbered from x1"));
                }
                out.push((start, Tok::Var(n)));
                i = j;
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::parse(i, format!("unexpected character {ch:?}")));
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn eat(&mut self, t: Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Term> {
        let mut t = self.meet()?;
        while self.eat(Tok::Plus) {
            t = Term::join(t, self.meet()?);
        }
        Ok(t)
    }

    fn meet(&mut self) -> Result<Term> {
        let mut t = self.comp()?;
        while self.eat(Tok::Amp) {
            t = Term::meet(t, self.comp()?);
        }
        Ok(t)
    }

    fn comp(&mut self) -> Result<Term> {
        let mut t = self.unary()?;
        while self.eat(Tok::Semi) {
            t = Term::comp(t, self.unary()?);
        }
        Ok(t)
    }

    fn unary(&mut self) -> Result<Term> {
        if self.eat(Tok::Minus) {
            return Ok(Term::not(self.unary()?));
        }
        let mut t = self.primary()?;
        while self.eat(Tok::Tilde) {
            t = Term::conv(t);
        }
        Ok(t)
    }

    fn primary(&mut self) -> Result<Term> {
        let at = self.offset();
        let t = match self.peek() {
            Some(Tok::Zero) => Term::Zero,
            Some(Tok::One) => Term::Top,
            Some(Tok::Id) => Term::Id,
            Some(Tok::Var(i)) => Term::Var(i),
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(Tok::RParen) {
                    return Err(Error::parse(self.offset(), "expected ')'"));
                }
                return Ok(inner);
            }
            Some(other) => return Err(Error::parse(at, format!("unexpected token {other:?}"))),
            None => return Err(Error::parse(at, "unexpected end of input")),
        };
        self.pos += 1;
        Ok(t)
    }
}

/// Parses either a single term or an equation `term = term`.
pub fn parse(text: &str) -> Result<Parsed> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
    };
    let lhs = p.expr()?;
    let out = if p.eat(Tok::Eq) {
        let rhs = p.expr()?;
        Parsed::Equation(Equation::new(lhs, rhs)?)
    } else {
        Parsed::Term(lhs)
    };
    if p.pos != p.toks.len() {
        return Err(Error::parse(p.offset(), "trailing input"));
    }
    Ok(out)
}

pub fn parse_term(text: &str) -> Result<Term> {
    match parse(text)? {
        Parsed::Term(t) => Ok(t),
        Parsed::Equation(_) => Err(Error::parse(0, "expected a term, found an equation")),
    }
}

pub fn parse_equation(text: &str) -> Result<Equation> {
    match parse(text)? {
        Parsed::Equation(e) => Ok(e),
        Parsed::Term(_) => Err(Error::parse(text.len(), "expected '='")),
    }
}
