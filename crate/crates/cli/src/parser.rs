//! Recursive-descent parser for the expression DSL:
//!
//!   expr   := ['-'] term (('+'|'-') term)*
//!   term   := factor ('*' factor)*
//!   factor := atom ('^' nat)?
//!   atom   := rational | 'th(i,j)' | 'P(i)' | 'H' | 'L' | 'xi'
//!           | 'gamma(k,j)' | 'Pxi' | '(' expr ')'
//!
//! Rationals are integers or p/q. Atoms are validated against the ring
//! context; gamma and Pxi atoms evaluate eagerly to their classes.

use num::BigInt;
use tautring::gamma::{gamma_class, p_xi};
use tautring::rat::Q;
use tautring::ring::{Gen, RingContext, SpaceKind};
use tautring::ClassExpr;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
#[error("parse error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        msg: msg.into(),
    })
}

/// Which atoms a command admits. The perversity solver only accepts
/// classes written over the gamma generators.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AtomPolicy {
    All,
    GammaOnly,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Comma,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().unwrap();
                toks.push((Tok::Num(n), start));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric()) {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), start));
            }
            other => return err(i, format!("unexpected character '{}'", other)),
        }
    }
    Ok(toks)
}

pub struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ctx: &'a RingContext,
    policy: AtomPolicy,
    src_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|&(_, p)| p)
            .unwrap_or(self.src_len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let p = self.here();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(t) => err(p, format!("expected {}, found {:?}", what, t)),
            None => err(p, format!("expected {}, found end of input", what)),
        }
    }

    fn int_arg(&mut self) -> Result<i64, ParseError> {
        let p = self.here();
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Some(Tok::Num(n)) => {
                let v: i64 = n
                    .to_string()
                    .parse()
                    .map_err(|_| ParseError {
                        pos: p,
                        msg: "index out of range".into(),
                    })?;
                Ok(if neg { -v } else { v })
            }
            _ => err(p, "expected an integer index"),
        }
    }

    fn expr(&mut self) -> Result<ClassExpr, ParseError> {
        let mut negate_first = false;
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            negate_first = true;
        }
        let mut acc = self.term()?;
        if negate_first {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ClassExpr, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            let f = self.factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<ClassExpr, ParseError> {
        let a = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let p = self.here();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n.to_string().parse().map_err(|_| ParseError {
                        pos: p,
                        msg: "exponent out of range".into(),
                    })?;
                    Ok(a.pow(e))
                }
                _ => err(p, "expected a natural-number exponent after '^'"),
            }
        } else {
            Ok(a)
        }
    }

    fn require_all_policy(&self, pos: usize, what: &str) -> Result<(), ParseError> {
        if self.policy == AtomPolicy::GammaOnly {
            return err(
                pos,
                format!(
                    "{} is not a gamma atom; this command only accepts classes over gamma(k,j)",
                    what
                ),
            );
        }
        Ok(())
    }

    fn atom(&mut self) -> Result<ClassExpr, ParseError> {
        let p = self.here();
        match self.bump() {
            Some(Tok::Num(n)) => {
                // rational: n or n/m
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let dp = self.here();
                    match self.bump() {
                        Some(Tok::Num(m)) => {
                            if m == BigInt::from(0) {
                                return err(dp, "zero denominator");
                            }
                            Ok(self.ctx.scalar(Q::new(n, m)))
                        }
                        _ => err(dp, "expected a denominator after '/'"),
                    }
                } else {
                    Ok(self.ctx.scalar(Q::from_integer(n)))
                }
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "th" => {
                    self.require_all_policy(p, "th(i,j)")?;
                    self.expect(Tok::LParen, "'(' after th")?;
                    let i = self.int_arg()?;
                    self.expect(Tok::Comma, "','")?;
                    let j = self.int_arg()?;
                    self.expect(Tok::RParen, "')'")?;
                    if !self.ctx_has_theta() {
                        return err(p, format!("th(i,j) is not defined on {:?}", self.ctx.kind));
                    }
                    Ok(self.ctx.theta(i, j))
                }
                "P" => {
                    self.require_all_policy(p, "P(i)")?;
                    self.expect(Tok::LParen, "'(' after P")?;
                    let i = self.int_arg()?;
                    self.expect(Tok::RParen, "')'")?;
                    if !self.ctx_has_p() {
                        return err(p, format!("P(i) is not defined on {:?}", self.ctx.kind));
                    }
                    if self.ctx.kind == SpaceKind::Hilb && self.ctx.n == 1 {
                        return tautring::spaces::chern_p(i, 1, self.ctx.dvalue())
                            .map_err(|e| ParseError {
                                pos: p,
                                msg: e.to_string(),
                            });
                    }
                    Ok(self.ctx.p(i))
                }
                "H" => {
                    self.require_all_policy(p, "H")?;
                    if !self.ctx.allows(Gen::H) {
                        return err(p, format!("H is not defined on {:?}", self.ctx.kind));
                    }
                    Ok(self.ctx.gen(Gen::H))
                }
                "L" => {
                    self.require_all_policy(p, "L")?;
                    if !self.ctx.allows(Gen::L) {
                        return err(p, format!("L is not defined on {:?}", self.ctx.kind));
                    }
                    Ok(self.ctx.gen(Gen::L))
                }
                "xi" => {
                    self.require_all_policy(p, "xi")?;
                    if !self.ctx.allows(Gen::Xi) {
                        return err(p, format!("xi is not defined on {:?}", self.ctx.kind));
                    }
                    Ok(self.ctx.gen(Gen::Xi))
                }
                "gamma" => {
                    self.expect(Tok::LParen, "'(' after gamma")?;
                    let k = self.int_arg()?;
                    self.expect(Tok::Comma, "','")?;
                    let j = self.int_arg()?;
                    self.expect(Tok::RParen, "')'")?;
                    if self.ctx.kind != SpaceKind::HilbTimesLinSys {
                        return err(
                            p,
                            format!("gamma(k,j) is not defined on {:?}", self.ctx.kind),
                        );
                    }
                    if k < 0 || !(0..=2).contains(&j) {
                        return err(p, format!("gamma({},{}) is out of range", k, j));
                    }
                    Ok(gamma_class(k, j, self.ctx.n, self.ctx.dvalue()))
                }
                "Pxi" => {
                    self.require_all_policy(p, "Pxi")?;
                    if self.ctx.kind != SpaceKind::HilbTimesLinSys {
                        return err(p, format!("Pxi is not defined on {:?}", self.ctx.kind));
                    }
                    Ok(p_xi(self.ctx.n, self.ctx.dvalue()))
                }
                other => err(p, format!("unknown atom '{}'", other)),
            },
            Some(t) => err(p, format!("unexpected token {:?}", t)),
            None => err(p, "unexpected end of input"),
        }
    }

    fn ctx_has_theta(&self) -> bool {
        matches!(
            self.ctx.kind,
            SpaceKind::Hilb
                | SpaceKind::Incidence
                | SpaceKind::HilbTimesSurface
                | SpaceKind::HilbTimesLinSys
        )
    }

    fn ctx_has_p(&self) -> bool {
        matches!(
            self.ctx.kind,
            SpaceKind::Hilb | SpaceKind::Incidence | SpaceKind::HilbTimesLinSys
        )
    }
}

/// Parse a source expression to a canonical class in the given context.
pub fn parse_expr(
    src: &str,
    ctx: &RingContext,
    policy: AtomPolicy,
) -> Result<ClassExpr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        ctx,
        policy,
        src_len: src.len(),
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return err(p.here(), "trailing input after expression");
    }
    Ok(e)
}
