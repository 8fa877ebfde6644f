//! Line-oriented CNF text format, close to TPTP `cnf` annotated formulas.
//!
//! ```text
//! cnf(c0, axiom, (~adult(X0, w0) | ~r_d(w0, W0) | ~fine(X0, W0))). % axiom "R2"
//! cnf(c4, negated_conjecture, (r_d(w0, skw_0))). % goal "q"
//! cnf(c5, axiom, (r_d(W0, skw_1(W0)))). % seriality d
//! ```
//!
//! The trailing comment carries provenance and is optional on import.

use std::fmt::Write as _;

use thiserror::Error;

use super::clausify::{Clause, ClauseSet, ClauseSource};
use super::fol::{FoAtom, FoLiteral, FoTerm, Sort, Var};
use super::modal::Modality;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct CnfParseError {
    pub line: usize,
    pub message: String,
}

pub fn export_cnf(cs: &ClauseSet) -> String {
    let mut out = String::new();
    for (i, c) in cs.clauses.iter().enumerate() {
        let role = match c.source {
            ClauseSource::Goal { .. } => "negated_conjecture",
            _ => "axiom",
        };
        let body = if c.literals.is_empty() {
            "$false".to_owned()
        } else {
            format!("({c})")
        };
        let _ = writeln!(out, "cnf(c{i}, {role}, {body}). % {}", c.source);
    }
    out
}

pub fn import_cnf(text: &str) -> Result<ClauseSet, CnfParseError> {
    let mut clauses = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let mut p = Cursor {
            chars: line.chars().collect(),
            pos: 0,
            line: n + 1,
        };
        clauses.push(p.clause()?);
    }
    Ok(ClauseSet { clauses })
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, CnfParseError> {
        Err(CnfParseError {
            line: self.line,
            message: format!("column {}: {}", self.pos + 1, message.into()),
        })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), CnfParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn ident(&mut self) -> Result<String, CnfParseError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_' || *c == '$')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected identifier");
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn clause(&mut self) -> Result<Clause, CnfParseError> {
        if self.ident()? != "cnf" {
            return self.err("expected `cnf`");
        }
        self.expect('(')?;
        let name = self.ident()?;
        self.expect(',')?;
        let role = self.ident()?;
        let goal = match role.as_str() {
            "axiom" | "hypothesis" => false,
            "negated_conjecture" => true,
            other => return self.err(format!("unsupported role `{other}`")),
        };
        self.expect(',')?;
        let literals = self.body()?;
        self.expect(')')?;
        self.expect('.')?;
        let source = if self.eat('%') {
            self.source()?
        } else if goal {
            ClauseSource::Goal { name }
        } else {
            ClauseSource::Axiom { name }
        };
        if self.peek().is_some() {
            return self.err("trailing input");
        }
        Ok(Clause { literals, source })
    }

    fn body(&mut self) -> Result<Vec<FoLiteral>, CnfParseError> {
        if self.peek() == Some('$') {
            return match self.ident()?.as_str() {
                "$false" => Ok(vec![]),
                other => self.err(format!("unexpected `{other}`")),
            };
        }
        let paren = self.eat('(');
        let mut lits = vec![self.literal()?];
        while self.eat('|') {
            lits.push(self.literal()?);
        }
        if paren {
            self.expect(')')?;
        }
        Ok(lits)
    }

    fn literal(&mut self) -> Result<FoLiteral, CnfParseError> {
        let positive = !self.eat('~');
        let name = self.ident()?;
        let args = if self.peek() == Some('(') {
            self.args()?
        } else {
            vec![]
        };
        let modality = Modality::ALL
            .into_iter()
            .find(|m| m.access_predicate() == name);
        let atom = if let Some(modality) = modality {
            let [from, to]: [RawTerm; 2] = match args.try_into() {
                Ok(a) => a,
                Err(_) => return self.err(format!("`{name}` takes two arguments")),
            };
            FoAtom::Access {
                modality,
                from: from.resolve(Some(Sort::World)),
                to: to.resolve(Some(Sort::World)),
            }
        } else {
            let mut args = args;
            let Some(world) = args.pop() else {
                return self.err(format!("`{name}` lacks its world argument"));
            };
            FoAtom::Pred {
                predicate: name,
                args: args
                    .into_iter()
                    .map(|a| a.resolve(Some(Sort::Individual)))
                    .collect(),
                world: world.resolve(Some(Sort::World)),
            }
        };
        Ok(FoLiteral { positive, atom })
    }

    fn args(&mut self) -> Result<Vec<RawTerm>, CnfParseError> {
        self.expect('(')?;
        let mut out = vec![self.term()?];
        while self.eat(',') {
            out.push(self.term()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn term(&mut self) -> Result<RawTerm, CnfParseError> {
        let name = self.ident()?;
        let args = if self.peek() == Some('(') {
            self.args()?
        } else {
            vec![]
        };
        Ok(RawTerm { name, args })
    }

    fn source(&mut self) -> Result<ClauseSource, CnfParseError> {
        let kind = self.ident()?;
        match kind.as_str() {
            "axiom" => Ok(ClauseSource::Axiom {
                name: self.quoted()?,
            }),
            "goal" => Ok(ClauseSource::Goal {
                name: self.quoted()?,
            }),
            "seriality" => {
                let tag = self.ident()?;
                match Modality::ALL.into_iter().find(|m| m.tag() == tag) {
                    Some(modality) => Ok(ClauseSource::Seriality { modality }),
                    None => self.err(format!("unknown modality `{tag}`")),
                }
            }
            other => self.err(format!("unknown provenance `{other}`")),
        }
    }

    /// Reads a string in the escaped form produced by `{:?}`.
    fn quoted(&mut self) -> Result<String, CnfParseError> {
        self.expect('"')?;
        let mut out = String::new();
        loop {
            let Some(&c) = self.chars.get(self.pos) else {
                return self.err("unterminated string");
            };
            self.pos += 1;
            match c {
                '"' => return Ok(out),
                '\\' => {
                    let Some(&e) = self.chars.get(self.pos) else {
                        return self.err("unterminated escape");
                    };
                    self.pos += 1;
                    match e {
                        'n' => out.push('\n'),
                        't' => out.push('\t'),
                        'r' => out.push('\r'),
                        '0' => out.push('\0'),
                        '\\' | '"' | '\'' => out.push(e),
                        'u' => {
                            self.expect('{')?;
                            let start = self.pos;
                            while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_hexdigit()) {
                                self.pos += 1;
                            }
                            let hex: String = self.chars[start..self.pos].iter().collect();
                            self.expect('}')?;
                            match u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32) {
                                Some(ch) => out.push(ch),
                                None => return self.err("bad unicode escape"),
                            }
                        }
                        other => return self.err(format!("unknown escape `\\{other}`")),
                    }
                }
                _ => out.push(c),
            }
        }
    }
}

struct RawTerm {
    name: String,
    args: Vec<RawTerm>,
}

fn skolem_id(name: &str, prefix: &str) -> Option<u32> {
    let digits = name.strip_prefix(prefix)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

impl RawTerm {
    /// `sort` is known from the argument position; inside function arguments
    /// it is not, and variables fall back to their naming convention.
    fn resolve(self, sort: Option<Sort>) -> FoTerm {
        let starts_upper = self.name.starts_with(|c: char| c.is_ascii_uppercase());
        if starts_upper && self.args.is_empty() {
            let sort = sort.unwrap_or(if self.name.starts_with('W') {
                Sort::World
            } else {
                Sort::Individual
            });
            return FoTerm::var(Var {
                name: self.name,
                sort,
            });
        }
        let args: Vec<FoTerm> = self.args.into_iter().map(|a| a.resolve(None)).collect();
        if let Some(id) = skolem_id(&self.name, "skw_") {
            FoTerm::SkolemWorld { id, args }
        } else if let Some(id) = skolem_id(&self.name, "skc_") {
            FoTerm::SkolemInd { id, args }
        } else if self.name == crate::logic::ACTUAL_WORLD && args.is_empty() {
            FoTerm::actual_world()
        } else {
            FoTerm::Fn {
                symbol: self.name,
                args,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::compile_problem;
    use crate::logic::{parse_formula, NamedFormula};

    fn nf(name: &str, text: &str) -> NamedFormula {
        NamedFormula::new(name, &parse_formula(text).unwrap())
    }

    #[test]
    fn export_then_import_is_identity() {
        let cs = compile_problem(
            &[
                nf("R \"1\"", "adult(X) & smoke(X) =Pm=> fine(X)"),
                nf("f", "adult(c) & smoke(c)"),
                nf("g", "p(X) => Id Pm q(s(X))"),
            ],
            Some(&nf("goal", "Pm fine(c) & Ob (r => Pm p(c))")),
        );
        let text = export_cnf(&cs);
        assert_eq!(import_cnf(&text).unwrap(), cs);
    }

    #[test]
    fn empty_clause_and_missing_comment() {
        let cs = import_cnf("% header\ncnf(k, axiom, $false).\ncnf(g, negated_conjecture, ~p(a, w0)).").unwrap();
        assert!(cs.clauses[0].literals.is_empty());
        assert_eq!(cs.clauses[1].source, ClauseSource::Goal { name: "g".into() });
        assert_eq!(export_cnf(&cs).lines().next().unwrap(), "cnf(c0, axiom, $false). % axiom \"k\"");
    }

    #[test]
    fn sorts_follow_position() {
        let cs = import_cnf("cnf(a, axiom, (p(X0, W0) | r_i(W1, skw_2(W1, X0)))).").unwrap();
        let vars = cs.clauses[0].variables();
        assert_eq!(
            vars,
            vec![Var::individual("X0"), Var::world("W0"), Var::world("W1")]
        );
    }

    #[test]
    fn errors_report_line() {
        let e = import_cnf("\ncnf(a, axiom, (p)).").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(import_cnf("cnf(a, lemma, p(w0)).").is_err());
        assert!(import_cnf("cnf(a, axiom, r_d(w0)).").is_err());
    }
}
