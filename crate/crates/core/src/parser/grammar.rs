//! Recursive-descent parser for the expression language:
//!
//! ```text
//! expr     := sum
//! sum      := ["+"|"-"] prod (("+"|"-") prod)*
//! prod     := rational "*" atom | rational | atom
//! atom     := var | "(" expr ")" | "max" "(" expr ("," expr)* ")"
//!           | "min" "(" expr ("," expr)* ")"
//! var      := "x" index            (1 ≤ index ≤ n)
//! rational := integer | integer "/" positive-integer | decimal
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ExprNode;
use crate::error::{Error, Result};
use crate::pwl::AffineFunc;
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Var(usize),
    Max,
    Min,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.peek_char().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize)>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let start = self.pos;
            let Some(c) = self.peek_char() else {
                out.push((Tok::End, start));
                return Ok(out);
            };
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '0'..='9' | '.' => {
                    out.push((self.number(start)?, start));
                    continue;
                }
                'x' => {
                    self.pos += 1;
                    let idx = self.digits();
                    if idx.is_empty() {
                        return Err(syntax(start, "expected variable index after 'x'"));
                    }
                    let index: usize = idx.parse().map_err(|_| syntax(start, "variable index too large"))?;
                    out.push((Tok::Var(index), start));
                    continue;
                }
                c if c.is_ascii_alphabetic() => {
                    while self.peek_char().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                        self.pos += 1;
                    }
                    let word = &self.src[start..self.pos];
                    let tok = match word {
                        "max" => Tok::Max,
                        "min" => Tok::Min,
                        _ => return Err(syntax(start, &format!("unknown identifier '{word}'"))),
                    };
                    out.push((tok, start));
                    continue;
                }
                other => return Err(syntax(start, &format!("unexpected character '{other}'"))),
            };
            self.pos += c.len_utf8();
            out.push((tok, start));
        }
    }

    /// integer, integer "/" positive-integer, or decimal.
    fn number(&mut self, start: usize) -> Result<Tok> {
        let whole = self.digits();
        if self.peek_char() == Some('.') {
            self.pos += 1;
            let frac = self.digits();
            if whole.is_empty() && frac.is_empty() {
                return Err(syntax(start, "malformed decimal literal"));
            }
            let text = &self.src[start..self.pos];
            return parse_rational(text)
                .map(Tok::Num)
                .map_err(|_| syntax(start, "malformed decimal literal"));
        }
        let numer: BigInt = whole.parse().expect("digits");
        let save = self.pos;
        self.skip_ws();
        if self.peek_char() == Some('/') {
            self.pos += 1;
            self.skip_ws();
            let denom_text = self.digits();
            if denom_text.is_empty() {
                return Err(syntax(self.pos, "expected positive integer denominator after '/'"));
            }
            let denom: BigInt = denom_text.parse().expect("digits");
            if denom.is_zero() {
                return Err(Error::DivisionByZero { pos: start });
            }
            return Ok(Tok::Num(Rational::new(numer, denom)));
        }
        self.pos = save;
        Ok(Tok::Num(Rational::from_integer(numer)))
    }
}

fn syntax(pos: usize, msg: &str) -> Error {
    Error::Syntax {
        pos,
        msg: msg.to_string(),
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    n: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), &format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<ExprNode> {
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                -Rational::one()
            }
            Tok::Plus => {
                self.bump();
                Rational::one()
            }
            _ => Rational::one(),
        };
        loop {
            let p = self.prod()?;
            terms.push(ExprNode::scale(sign, p));
            sign = match self.peek() {
                Tok::Plus => Rational::one(),
                Tok::Minus => -Rational::one(),
                _ => break,
            };
            self.bump();
        }
        ExprNode::sum(terms)
    }

    fn prod(&mut self) -> Result<ExprNode> {
        let node = if let Tok::Num(c) = self.peek().clone() {
            self.bump();
            if *self.peek() == Tok::Star {
                self.bump();
                let operand_pos = self.pos();
                if matches!(self.peek(), Tok::Num(_)) {
                    return Err(syntax(operand_pos, "expected variable, '(', max or min after '*'"));
                }
                ExprNode::scale(c, self.atom()?)
            } else {
                ExprNode::Affine(AffineFunc::constant_fn(self.n, c))
            }
        } else {
            self.atom()?
        };
        match self.peek() {
            Tok::Star => Err(syntax(
                self.pos(),
                "only a rational literal may multiply an expression (nonlinear product)",
            )),
            Tok::Slash => Err(syntax(self.pos(), "division is only allowed inside a rational literal")),
            Tok::Num(_) | Tok::Var(_) | Tok::Max | Tok::Min | Tok::LParen => {
                Err(syntax(self.pos(), "implicit multiplication is not supported"))
            }
            _ => Ok(node),
        }
    }

    fn atom(&mut self) -> Result<ExprNode> {
        let pos = self.pos();
        match self.bump() {
            Tok::Var(index) => {
                if index == 0 || index > self.n {
                    return Err(Error::VariableOutOfRange { index, n: self.n, pos });
                }
                Ok(ExprNode::Affine(AffineFunc::variable(self.n, index - 1)))
            }
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            tok @ (Tok::Max | Tok::Min) => {
                let func = if tok == Tok::Max { "max" } else { "min" };
                self.expect(Tok::LParen, "'(' after function name")?;
                if *self.peek() == Tok::RParen {
                    return Err(Error::Arity { func, pos });
                }
                let mut args = vec![self.expr()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.expr()?);
                }
                self.expect(Tok::RParen, "',' or ')'")?;
                if tok == Tok::Max {
                    ExprNode::max(args)
                } else {
                    ExprNode::min(args)
                }
            }
            Tok::End => Err(syntax(pos, "unexpected end of input")),
            _ => Err(syntax(pos, "expected variable, number, '(', max or min")),
        }
    }
}

/// Parses `text` as a function on ℝⁿ.
pub fn parse(text: &str, n: usize) -> Result<ExprNode> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let toks = Lexer { src: text, pos: 0 }.tokens()?;
    let mut p = Parser { toks, at: 0, n };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Parses `text` and reads it as a linear combination of maxima.
pub fn parse_lincomb(text: &str, n: usize) -> Result<crate::pwl::LinComb> {
    parse(text, n)?.as_lincomb()
}
