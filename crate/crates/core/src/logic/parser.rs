//! Recursive-descent parser for the concrete formula grammar.
//!
//! ```text
//! formula := disj (arrow formula)?          arrows are right-associative
//! arrow   := "=>" | "=Ob=>" | "=Pm=>" | "=Fb=>"
//! disj    := conj ("|" conj)*
//! conj    := unary ("&" unary)*
//! unary   := "!" unary | ("Id" | "Ob" | "Pm" | "Fb") unary | "(" formula ")" | atom
//! atom    := lower ("(" term ("," term)* ")")?
//! term    := Upper | lower ("(" term ("," term)* ")")?
//! ```

use super::error::{LogicError, Result};
use super::signature::Signature;
use super::syntax::{Atom, DeonticOp, Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Bang,
    Amp,
    Pipe,
    Arrow(Option<DeonticOp>),
    Eof,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Bang => "`!`".into(),
        Tok::Amp => "`&`".into(),
        Tok::Pipe => "`|`".into(),
        Tok::Arrow(None) => "`=>`".into(),
        Tok::Arrow(Some(op)) => format!("`={}=>`", op.keyword()),
        Tok::Eof => "end of input".into(),
    }
}

fn syntax(position: usize, message: impl Into<String>) -> LogicError {
    LogicError::Syntax {
        position,
        message: message.into(),
    }
}

fn tokenize(input: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => out.push((Tok::LParen, start)),
            ')' => out.push((Tok::RParen, start)),
            ',' => out.push((Tok::Comma, start)),
            '!' => out.push((Tok::Bang, start)),
            '&' => out.push((Tok::Amp, start)),
            '|' => out.push((Tok::Pipe, start)),
            '=' => {
                let rest: String = chars[i..chars.len().min(i + 6)].iter().collect();
                let (tok, len) = if rest.starts_with("=>") {
                    (Tok::Arrow(None), 2)
                } else if rest.starts_with("=Ob=>") {
                    (Tok::Arrow(Some(DeonticOp::Ob)), 5)
                } else if rest.starts_with("=Pm=>") {
                    (Tok::Arrow(Some(DeonticOp::Pm)), 5)
                } else if rest.starts_with("=Fb=>") {
                    (Tok::Arrow(Some(DeonticOp::Fb)), 5)
                } else {
                    return Err(syntax(start, "expected `=>`, `=Ob=>`, `=Pm=>` or `=Fb=>`"));
                };
                out.push((tok, start));
                i += len;
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), start));
                continue;
            }
            other => return Err(syntax(start, format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    out.push((Tok::Eof, chars.len()));
    Ok(out)
}

fn is_variable(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(
                self.offset(),
                format!("expected {}, found {}", describe(&want), describe(self.peek())),
            ))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        match self.peek().clone() {
            Tok::Arrow(kind) => {
                self.bump();
                let rhs = self.formula()?;
                Ok(match kind {
                    None => Formula::implies(lhs, rhs),
                    Some(op) => Formula::cond(op, lhs, rhs),
                })
            }
            _ => Ok(lhs),
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) => match name.as_str() {
                "Id" => {
                    self.bump();
                    Ok(Formula::id(self.unary()?))
                }
                "Ob" => {
                    self.bump();
                    Ok(Formula::ob(self.unary()?))
                }
                "Pm" => {
                    self.bump();
                    Ok(Formula::pm(self.unary()?))
                }
                "Fb" => {
                    self.bump();
                    Ok(Formula::fb(self.unary()?))
                }
                _ if is_variable(&name) => Err(syntax(
                    at,
                    format!("variable `{name}` cannot stand where a formula is expected"),
                )),
                _ => {
                    self.bump();
                    let args = self.arguments()?;
                    Ok(Formula::Atom(Atom::new(name, args)))
                }
            },
            other => Err(syntax(at, format!("expected a formula, found {}", describe(&other)))),
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>> {
        let mut args = Vec::new();
        if *self.peek() != Tok::LParen {
            return Ok(args);
        }
        self.bump();
        loop {
            args.push(self.term()?);
            match self.bump() {
                Tok::Comma => continue,
                Tok::RParen => break,
                other => {
                    return Err(syntax(
                        self.toks[self.pos.saturating_sub(1)].1,
                        format!("expected `,` or `)`, found {}", describe(&other)),
                    ))
                }
            }
        }
        Ok(args)
    }

    fn term(&mut self) -> Result<Term> {
        let at = self.offset();
        match self.bump() {
            Tok::Ident(name) if is_variable(&name) => Ok(Term::Var(name)),
            Tok::Ident(name) => {
                let args = self.arguments()?;
                Ok(Term::App(name, args))
            }
            other => Err(syntax(at, format!("expected a term, found {}", describe(&other)))),
        }
    }
}

/// Parses a formula without checking arities.
pub fn parse_formula(input: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: tokenize(input)?,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(
            p.offset(),
            format!("unexpected {} after formula", describe(p.peek())),
        ));
    }
    Ok(f)
}

/// Parses a single term such as `X`, `c` or `f(X, c)`.
pub fn parse_term(input: &str) -> Result<Term> {
    let mut p = Parser {
        toks: tokenize(input)?,
        pos: 0,
    };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(
            p.offset(),
            format!("unexpected {} after term", describe(p.peek())),
        ));
    }
    Ok(t)
}

/// Parses a formula and checks it against `signature`, declaring any symbols
/// seen for the first time. Pass an empty signature to infer arities from use.
pub fn parse_with_signature(input: &str, signature: &mut Signature) -> Result<Formula> {
    let f = parse_formula(input)?;
    signature.declare_formula(&f)?;
    Ok(f)
}
