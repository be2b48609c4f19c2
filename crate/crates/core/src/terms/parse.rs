//! Text form of identity systems.
//!
//! ```text
//! system   := identity (";" identity)* ";"?
//! identity := term ("=" term)+
//! term     := var | sym "(" var "," var ["," var] ")"
//! sym      := "p" | "q" | "t" | "s"
//! var      := "x" | "y" | "z"
//! ```
//!
//! Whitespace (including newlines) is insignificant and `≈` is accepted in
//! place of `=`. A chain `a = b = c` stands for the identities `a = b` and
//! `b = c`.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use super::{Identity, Signature, Symbol, System, TermError, TermRef, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("unknown symbol '{symbol}' at {line}:{col}")]
    UnknownSymbol { symbol: char, line: usize, col: usize },
    #[error("arity mismatch at {line}:{col}: '{symbol}' takes {expected} arguments, got {found}")]
    ArityMismatch {
        symbol: char,
        expected: usize,
        found: usize,
        line: usize,
        col: usize,
    },
}

/// A trivial identity dropped during parsing (both sides equal after
/// idempotent collapse).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub col: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub system: System,
    pub warnings: Vec<ParseWarning>,
}

/// Parses a system, inferring the signature from the symbols mentioned and
/// the variable count from the highest variable used (at least two).
pub fn parse_system(text: &str) -> Result<Parsed, ParseError> {
    let raw = Parser::new(text).system()?;
    let mut signature = Signature::EMPTY;
    let mut num_vars = 2;
    for (_, chain) in &raw {
        for rt in chain {
            if let Some(s) = rt.symbol {
                signature.insert(s);
            }
            for v in &rt.vars {
                num_vars = num_vars.max(v.index() + 1);
            }
        }
    }
    build(raw, signature, num_vars)
}

/// Parses a system over a declared signature and variable count.
pub fn parse_system_in(text: &str, signature: Signature, num_vars: usize) -> Result<Parsed, ParseError> {
    let raw = Parser::new(text).system()?;
    for (_, chain) in &raw {
        for rt in chain {
            if let Some(s) = rt.symbol {
                if !signature.contains(s) {
                    return Err(ParseError::UnknownSymbol {
                        symbol: s.name(),
                        line: rt.line,
                        col: rt.col,
                    });
                }
            }
            if let Some(v) = rt.vars.iter().find(|v| v.index() >= num_vars) {
                return Err(ParseError::Syntax {
                    line: rt.line,
                    col: rt.col,
                    message: format!("variable '{v}' not declared"),
                });
            }
        }
    }
    build(raw, signature, num_vars)
}

fn build(raw: Vec<(usize, Vec<RawTerm>)>, signature: Signature, num_vars: usize) -> Result<Parsed, ParseError> {
    let mut ids = Vec::new();
    let mut warnings = Vec::new();
    for (_, chain) in raw {
        for pair in chain.windows(2) {
            let a = pair[0].term;
            let b = pair[1].term;
            match Identity::new(a, b) {
                Some(id) => ids.push(id),
                None => warnings.push(ParseWarning {
                    line: pair[0].line,
                    col: pair[0].col,
                    text: format!("{}={}", pair[0].source, pair[1].source),
                }),
            }
        }
    }
    let system = System::new(signature, num_vars, ids).map_err(|e| ParseError::Syntax {
        line: 1,
        col: 1,
        message: e.to_string(),
    })?;
    Ok(Parsed { system, warnings })
}

/// Canonical text: one chain per class, classes ordered by least element,
/// separated by `"; "`. The empty system prints as the empty string.
pub fn format_system(system: &System) -> String {
    let mut out = String::new();
    for (i, block) in system.blocks().iter().enumerate() {
        if i > 0 {
            out.push_str("; ");
        }
        for (j, t) in block.iter().enumerate() {
            if j > 0 {
                out.push('=');
            }
            write!(out, "{t}").expect("string write");
        }
    }
    out
}

impl FromStr for System {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_system(s).map(|p| p.system)
    }
}

struct RawTerm {
    term: TermRef,
    symbol: Option<Symbol>,
    vars: Vec<Var>,
    source: String,
    line: usize,
    col: usize,
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.chars.peek().copied() {
            if !c.is_whitespace() {
                break;
            }
            self.bump();
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().copied()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            line: self.line,
            col: self.col,
            message: message.into(),
        })
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => self.error(format!("expected '{want}', found '{c}'")),
            None => self.error(format!("expected '{want}', found end of input")),
        }
    }

    fn system(&mut self) -> Result<Vec<(usize, Vec<RawTerm>)>, ParseError> {
        let mut out = Vec::new();
        if self.peek().is_none() {
            return Ok(out);
        }
        loop {
            let line = self.line;
            out.push((line, self.identity()?));
            match self.peek() {
                None => break,
                Some(';') => {
                    self.bump();
                    if self.peek().is_none() {
                        break;
                    }
                }
                Some(c) => return self.error(format!("expected ';' or '=', found '{c}'")),
            }
        }
        Ok(out)
    }

    fn identity(&mut self) -> Result<Vec<RawTerm>, ParseError> {
        let mut chain = vec![self.term()?];
        while matches!(self.peek(), Some('=') | Some('≈')) {
            self.bump();
            chain.push(self.term()?);
        }
        if chain.len() < 2 {
            return self.error("identity needs at least two sides");
        }
        Ok(chain)
    }

    fn term(&mut self) -> Result<RawTerm, ParseError> {
        let c = match self.peek() {
            Some(c) => c,
            None => return self.error("expected a term, found end of input"),
        };
        let (line, col) = (self.line, self.col);
        if let Some(v) = Var::from_name(c) {
            self.bump();
            return Ok(RawTerm {
                term: TermRef::var(v),
                symbol: None,
                vars: vec![v],
                source: c.to_string(),
                line,
                col,
            });
        }
        if !c.is_alphabetic() {
            return self.error(format!("expected a term, found '{c}'"));
        }
        self.bump();
        let symbol = Symbol::from_name(c).ok_or(ParseError::UnknownSymbol { symbol: c, line, col })?;
        self.expect('(')?;
        let mut vars = vec![self.var()?];
        while self.peek() == Some(',') {
            self.bump();
            vars.push(self.var()?);
        }
        self.expect(')')?;
        let term = TermRef::app(symbol, &vars).map_err(|e| match e {
            TermError::ArityMismatch { expected, found, .. } => ParseError::ArityMismatch {
                symbol: c,
                expected,
                found,
                line,
                col,
            },
            other => ParseError::Syntax {
                line,
                col,
                message: other.to_string(),
            },
        })?;
        let source = format!(
            "{c}({})",
            vars.iter().map(|v| v.name().to_string()).collect::<Vec<_>>().join(",")
        );
        Ok(RawTerm {
            term,
            symbol: Some(symbol),
            vars,
            source,
            line,
            col,
        })
    }

    fn var(&mut self) -> Result<Var, ParseError> {
        match self.peek() {
            Some(c) => match Var::from_name(c) {
                Some(v) => {
                    self.bump();
                    Ok(v)
                }
                None => self.error(format!("expected a variable x, y or z, found '{c}'")),
            },
            None => self.error("expected a variable, found end of input"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SYS4: &str = "p(x,x,y)=p(x,y,y); p(x,y,x)=q(x,x,y)=q(x,y,x)=q(y,x,x)";
    const SYS5: &str = "x=q(x,y,x); p(x,y,y)=p(x,y,x); p(x,x,y)=q(x,x,y)=q(y,x,x)";
    const SYS7: &str = "x=p(x,x,y); p(x,y,x)=p(y,x,x)=q(y,x,x)=q(x,y,x)=q(x,x,y)";

    #[test]
    fn parses_the_two_ternary_candidates() {
        let s4 = parse_system(SYS4).unwrap();
        assert!(s4.warnings.is_empty());
        assert_eq!(s4.system.len(), 4);
        assert_eq!(s4.system.num_vars(), 2);
        assert_eq!(s4.system.signature(), Signature::of(&[Symbol::P, Symbol::Q]));
        // Five terms of the chains collapse to 1 + 1 + 2 consecutive pairs.
        assert_eq!(parse_system(SYS5).unwrap().system.len(), 4);
        assert_eq!(parse_system(SYS7).unwrap().system.len(), 5);
    }

    #[test]
    fn idempotent_collapse_drops_trivial_identities() {
        let parsed = parse_system("p(x,x,x)=x").unwrap();
        assert!(parsed.system.is_empty());
        assert_eq!(parsed.warnings.len(), 1);
        assert_eq!(parsed.warnings[0].text, "p(x,x,x)=x");
        assert!(parse_system("x=x").unwrap().system.is_empty());
    }

    #[test]
    fn formats_canonically() {
        let s4 = parse_system(SYS4).unwrap().system;
        assert_eq!(format_system(&s4), SYS4);
        let s7 = parse_system(SYS7).unwrap().system;
        assert_eq!(
            format_system(&s7),
            "x=p(x,x,y); p(x,y,x)=p(y,x,x)=q(x,x,y)=q(x,y,x)=q(y,x,x)"
        );
        assert_eq!(format_system(&System::empty(Signature::EMPTY, 2)), "");
        assert_eq!(parse_system("").unwrap().system, System::empty(Signature::EMPTY, 2));
    }

    #[test]
    fn accepts_approx_sign_newlines_and_trailing_semicolon() {
        let a = parse_system("p(x,x,y) ≈ p(x,y,y);\n p(x,y,x)\n= q(x,x,y) ;").unwrap().system;
        let b = parse_system("p(x,x,y)=p(x,y,y); p(x,y,x)=q(x,x,y)").unwrap().system;
        assert_eq!(a, b);
    }

    #[test]
    fn reports_errors_with_positions() {
        assert_eq!(
            parse_system("p(x,y)=x"),
            Err(ParseError::ArityMismatch {
                symbol: 'p',
                expected: 3,
                found: 2,
                line: 1,
                col: 1
            })
        );
        assert_eq!(
            parse_system("x = r(x,y)"),
            Err(ParseError::UnknownSymbol { symbol: 'r', line: 1, col: 5 })
        );
        assert!(matches!(
            parse_system("x=p(x,y,x);\n p(w,x,x)=x"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(parse_system("p(x,x,y)"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_system("x=;"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_system(";"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn declared_signature_is_enforced() {
        let sig = Signature::of(&[Symbol::P]);
        assert!(parse_system_in("x=p(x,x,y)", sig, 2).is_ok());
        assert!(matches!(
            parse_system_in("x=q(x,x,y)", sig, 2),
            Err(ParseError::UnknownSymbol { symbol: 'q', .. })
        ));
        assert!(parse_system_in("x=p(x,x,z)", sig, 2).is_err());
        let empty = parse_system_in("", Signature::of(&[Symbol::P, Symbol::Q]), 2).unwrap();
        assert_eq!(empty.system.signature().len(), 2);
    }

    #[test]
    fn binary_symbols_parse() {
        let s = parse_system("t(x,y)=s(y,x); t(y,y)=x").unwrap();
        assert_eq!(s.system.signature(), Signature::of(&[Symbol::T, Symbol::S]));
        // t(y,y) collapses to y, leaving the identity x=y.
        assert_eq!(format_system(&s.system), "x=y; t(x,y)=s(y,x)");
    }
}
