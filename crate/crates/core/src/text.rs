//! Tokenizer and expression parser shared by the literal grammars.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Int(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: usize,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = src[start..i]
                    .parse::<u64>()
                    .map_err(|_| Error::parse(start, "integer literal too large"))?;
                out.push(Token {
                    tok: Tok::Int(n),
                    pos: start,
                });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(src[start..i].to_string()),
                    pos: start,
                });
                continue;
            }
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            other => {
                return Err(Error::parse(
                    start,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        out.push(Token { tok, pos: start });
        i += 1;
    }
    Ok(out)
}

/// Cursor over a token stream.
pub(crate) struct Cursor<'a> {
    toks: &'a [Token],
    idx: usize,
    end: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token], end: usize) -> Self {
        Cursor { toks, idx: 0, end }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|t| &t.tok)
    }

    pub fn pos(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |t| t.pos)
    }

    pub fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.idx).map(|t| &t.tok);
        self.idx += 1;
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok, what: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(Error::parse(self.pos(), format!("expected {what}")))
        }
    }

    pub fn index(&self) -> usize {
        self.idx
    }

    pub fn at_end(&self) -> bool {
        self.idx >= self.toks.len()
    }
}

/// Exponent attached to a named generator: `n` or `(a/b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Power {
    pub num: u64,
    pub den: u64,
}

/// Target of the polynomial-expression grammar
/// `expr := ['+'|'-'] term (('+'|'-') term)*`, `term := atom ('*' atom)*`,
/// `atom := INT | NAME ['^' power] | '(' expr ')' ['^' INT]`.
pub(crate) trait ExprTarget {
    type Value: Clone;
    fn int(&self, n: u64) -> Self::Value;
    fn name(&self, name: &str, power: Power, pos: usize) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn pow(&self, a: &Self::Value, n: u64) -> Self::Value;
}

pub(crate) fn parse_expr<T: ExprTarget>(cur: &mut Cursor<'_>, t: &T) -> Result<T::Value> {
    let mut negate = false;
    if cur.eat(&Tok::Minus) {
        negate = true;
    } else {
        cur.eat(&Tok::Plus);
    }
    let first = parse_term(cur, t)?;
    let mut acc = if negate { t.neg(&first) } else { first };
    loop {
        let neg = match cur.peek() {
            Some(Tok::Plus) => false,
            Some(Tok::Minus) => true,
            _ => break,
        };
        cur.bump();
        let term = parse_term(cur, t)?;
        acc = if neg {
            t.add(&acc, &t.neg(&term))
        } else {
            t.add(&acc, &term)
        };
    }
    Ok(acc)
}

fn parse_term<T: ExprTarget>(cur: &mut Cursor<'_>, t: &T) -> Result<T::Value> {
    let mut acc = parse_atom(cur, t)?;
    while cur.eat(&Tok::Star) {
        let rhs = parse_atom(cur, t)?;
        acc = t.mul(&acc, &rhs);
    }
    Ok(acc)
}

fn parse_atom<T: ExprTarget>(cur: &mut Cursor<'_>, t: &T) -> Result<T::Value> {
    let pos = cur.pos();
    match cur.bump().cloned() {
        Some(Tok::Int(n)) => Ok(t.int(n)),
        Some(Tok::Ident(name)) => {
            let power = if cur.eat(&Tok::Caret) {
                parse_power(cur)?
            } else {
                Power { num: 1, den: 1 }
            };
            t.name(&name, power, pos)
        }
        Some(Tok::LParen) => {
            let v = parse_expr(cur, t)?;
            cur.expect(&Tok::RParen, "`)`")?;
            if cur.eat(&Tok::Caret) {
                let p = cur.pos();
                match cur.bump() {
                    Some(Tok::Int(n)) => Ok(t.pow(&v, *n)),
                    _ => Err(Error::parse(p, "expected integer exponent")),
                }
            } else {
                Ok(v)
            }
        }
        _ => Err(Error::parse(pos, "expected integer, generator or `(`")),
    }
}

fn parse_power(cur: &mut Cursor<'_>) -> Result<Power> {
    let pos = cur.pos();
    match cur.bump().cloned() {
        Some(Tok::Int(n)) => Ok(Power { num: n, den: 1 }),
        Some(Tok::LParen) => {
            let p = cur.pos();
            let num = match cur.bump() {
                Some(Tok::Int(n)) => *n,
                _ => return Err(Error::parse(p, "expected exponent numerator")),
            };
            let den = if cur.eat(&Tok::Slash) {
                let p = cur.pos();
                match cur.bump() {
                    Some(Tok::Int(0)) => return Err(Error::parse(p, "zero denominator")),
                    Some(Tok::Int(d)) => *d,
                    _ => return Err(Error::parse(p, "expected exponent denominator")),
                }
            } else {
                1
            };
            cur.expect(&Tok::RParen, "`)`")?;
            Ok(Power { num, den })
        }
        _ => Err(Error::parse(pos, "expected exponent")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_carry_positions() {
        let toks = tokenize("2*[g^2] - [1]").unwrap();
        assert_eq!(toks[0].tok, Tok::Int(2));
        assert_eq!(toks[2].tok, Tok::LBracket);
        assert_eq!(toks[7].pos, 8);
        assert!(matches!(
            tokenize("2 # 3"),
            Err(Error::Parse { pos: 2, .. })
        ));
    }
}
