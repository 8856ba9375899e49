//! Recursive-descent parser for the surface syntax.
//!
//! ```text
//! type ::= "Top" | "Bot"
//!        | "{" LABEL ":" type ".." type "}"
//!        | IDENT "." LABEL
//!        | "all" "(" IDENT ":" type ")" type
//! term ::= IDENT
//!        | "{" LABEL "=" type "}"
//!        | "lam" "(" IDENT ":" type ")" term
//!        | IDENT IDENT
//!        | "let" IDENT "=" term "in" term
//! ```
//!
//! Whitespace is insignificant and `//` starts a line comment.

use std::fmt;

use super::{Term, Type, TypeLabel, VarName};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Label(String),
    Top,
    Bot,
    All,
    Lam,
    Let,
    In,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Semi,
    Dot,
    DotDot,
    Eq,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) | Tok::Label(s) => return write!(f, "`{s}`"),
            Tok::Top => "`Top`",
            Tok::Bot => "`Bot`",
            Tok::All => "`all`",
            Tok::Lam => "`lam`",
            Tok::Let => "`let`",
            Tok::In => "`in`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Colon => "`:`",
            Tok::Semi => "`;`",
            Tok::Dot => "`.`",
            Tok::DotDot => "`..`",
            Tok::Eq => "`=`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let begin = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[begin..i].iter().collect();
            column += i - begin;
            let tok = match word.as_str() {
                "Top" => Tok::Top,
                "Bot" => Tok::Bot,
                "all" => Tok::All,
                "lam" => Tok::Lam,
                "let" => Tok::Let,
                "in" => Tok::In,
                _ if c.is_ascii_lowercase() => Tok::Ident(word),
                _ if c.is_ascii_uppercase() => Tok::Label(word),
                _ => {
                    return Err(ParseError {
                        line: start_line,
                        column: start_col,
                        message: format!("identifier `{word}` must start with a letter"),
                    })
                }
            };
            out.push(Spanned { tok, line: start_line, column: start_col });
            continue;
        } else {
            let (tok, width) = match c {
                '{' => (Tok::LBrace, 1),
                '}' => (Tok::RBrace, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                ':' => (Tok::Colon, 1),
                ';' => (Tok::Semi, 1),
                '=' => (Tok::Eq, 1),
                '.' if chars.get(i + 1) == Some(&'.') => (Tok::DotDot, 2),
                '.' => (Tok::Dot, 1),
                other => {
                    return Err(ParseError {
                        line,
                        column,
                        message: format!("unexpected character `{other}`"),
                    })
                }
            };
            i += width;
            column += width;
            tok
        };
        out.push(Spanned { tok, line: start_line, column: start_col });
    }
    out.push(Spanned { tok: Tok::Eof, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let here = &self.toks[self.pos];
        Err(ParseError { line: here.line, column: here.column, message: message.into() })
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {want}, found {}", self.peek()))
        }
    }

    fn ident(&mut self) -> Result<VarName, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let v = VarName::new(name).or_else(|e| self.error(e.to_string()))?;
                self.bump();
                Ok(v)
            }
            other => self.error(format!("expected a variable, found {other}")),
        }
    }

    fn label(&mut self) -> Result<TypeLabel, ParseError> {
        match self.peek().clone() {
            Tok::Label(name) => {
                let l = TypeLabel::new(name).or_else(|e| self.error(e.to_string()))?;
                self.bump();
                Ok(l)
            }
            other => self.error(format!("expected a type label, found {other}")),
        }
    }

    fn ty(&mut self) -> Result<Type, ParseError> {
        match self.peek().clone() {
            Tok::Top => {
                self.bump();
                Ok(Type::Top)
            }
            Tok::Bot => {
                self.bump();
                Ok(Type::Bot)
            }
            Tok::LBrace => {
                self.bump();
                let a = self.label()?;
                self.expect(Tok::Colon)?;
                let lower = self.ty()?;
                self.expect(Tok::DotDot)?;
                let upper = self.ty()?;
                self.expect(Tok::RBrace)?;
                Ok(Type::decl(a, lower, upper))
            }
            Tok::Ident(_) => {
                let x = self.ident()?;
                self.expect(Tok::Dot)?;
                let a = self.label()?;
                Ok(Type::Path(x, a))
            }
            Tok::All => {
                self.bump();
                self.expect(Tok::LParen)?;
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                let param = self.ty()?;
                self.expect(Tok::RParen)?;
                let result = self.ty()?;
                Ok(Type::all(x, param, result))
            }
            other => self.error(format!("expected a type, found {other}")),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Ident(_) => {
                let x = self.ident()?;
                if matches!(self.peek(), Tok::Ident(_)) {
                    let y = self.ident()?;
                    Ok(Term::App(x, y))
                } else {
                    Ok(Term::Var(x))
                }
            }
            Tok::LBrace => {
                self.bump();
                let a = self.label()?;
                self.expect(Tok::Eq)?;
                let t = self.ty()?;
                self.expect(Tok::RBrace)?;
                Ok(Term::Tag(a, t))
            }
            Tok::Lam => {
                self.bump();
                self.expect(Tok::LParen)?;
                let x = self.ident()?;
                self.expect(Tok::Colon)?;
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                let body = self.term()?;
                Ok(Term::lam(x, t, body))
            }
            Tok::Let => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Eq)?;
                let rhs = self.term()?;
                self.expect(Tok::In)?;
                let body = self.term()?;
                Ok(Term::let_in(x, rhs, body))
            }
            other => self.error(format!("expected a term, found {other}")),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        self.expect(Tok::Eof)
    }
}

pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses `x : T ;` bindings in file order. Scoping is checked by the
/// environment, not here.
pub fn parse_env_bindings(src: &str) -> Result<Vec<(VarName, Type)>, ParseError> {
    let mut p = Parser::new(src)?;
    let mut out = Vec::new();
    while *p.peek() != Tok::Eof {
        if !matches!(p.peek(), Tok::Ident(_)) || *p.peek2() != Tok::Colon {
            return p.error(format!("expected a binding `x : T ;`, found {}", p.peek()));
        }
        let x = p.ident()?;
        p.expect(Tok::Colon)?;
        let t = p.ty()?;
        p.expect(Tok::Semi)?;
        out.push((x, t));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{label, var};

    #[test]
    fn parses_types() {
        assert_eq!(parse_type("Top").unwrap(), Type::Top);
        assert_eq!(
            parse_type("{A: Bot .. Top}").unwrap(),
            Type::decl(label("A"), Type::Bot, Type::Top)
        );
        assert_eq!(
            parse_type("{V: Top..Top}").unwrap(),
            Type::decl(label("V"), Type::Top, Type::Top)
        );
        assert_eq!(
            parse_type("all(x: Top) all(y: x.A) y.B").unwrap(),
            Type::all(
                var("x"),
                Type::Top,
                Type::all(var("y"), Type::path(var("x"), label("A")), Type::path(var("y"), label("B")))
            )
        );
    }

    #[test]
    fn parses_terms() {
        let t = parse_term("let f = lam(b: {V: Top..Top}) b in // comment\n f b1").unwrap();
        assert_eq!(
            t,
            Term::let_in(
                var("f"),
                Term::lam(var("b"), Type::decl(label("V"), Type::Top, Type::Top), Term::Var(var("b"))),
                Term::App(var("f"), var("b1"))
            )
        );
        assert_eq!(
            parse_term("lam(x: Top) let y = x in y").unwrap(),
            Term::lam(var("x"), Type::Top, Term::let_in(var("y"), Term::Var(var("x")), Term::Var(var("y"))))
        );
        assert_eq!(parse_term("{A = Top}").unwrap(), Term::Tag(label("A"), Type::Top));
    }

    #[test]
    fn reports_positions() {
        let err = parse_type("{A: Top\n  .. }").unwrap_err();
        assert_eq!((err.line, err.column), (2, 6));
        let err = parse_type("x").unwrap_err();
        assert_eq!((err.line, err.column), (1, 2));
        let err = parse_term("x y z").unwrap_err();
        assert_eq!((err.line, err.column), (1, 5));
        assert!(parse_type("Top #").is_err());
        assert!(parse_type("{Top: Bot .. Top}").is_err());
    }

    #[test]
    fn parses_environment_files() {
        let src = "// gamma\nx : {A: Bot .. Top} ;\ny: x.A;\n";
        let b = parse_env_bindings(src).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[1], (var("y"), Type::path(var("x"), label("A"))));
        assert!(parse_env_bindings("x : Top").is_err());
    }
}
