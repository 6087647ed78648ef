//! Surface syntax:
//!
//! ```text
//! term  := abs | app
//! abs   := ("\" | "λ") ident "." term
//! app   := atom+            (left-associative)
//! atom  := ident | "(" term ")"
//! ident := [A-Za-z_][A-Za-z0-9_']*
//! ```
//!
//! An abstraction body extends as far right as possible. As a convenience an
//! abstraction is also accepted as the last element of an application, so
//! `f \x. x` reads as `f (\x. x)`.

use thiserror::Error;

use crate::term::{Name, Term};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("syntax error at offset {position}: {message}")]
pub struct ParseError {
    /// Character offset into the input.
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lambda,
    Dot,
    LParen,
    RParen,
    Ident(String),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '\\' | 'λ' => {
                out.push((i, Tok::Lambda));
                i += 1;
            }
            '.' => {
                out.push((i, Tok::Dot));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(chars[start..i].iter().collect())));
            }
            other => {
                return Err(ParseError {
                    position: i,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            position: self.offset(),
            message: message.into(),
        })
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        crate::grow(|| {
            if self.peek() == Some(&Tok::Lambda) {
                self.abs()
            } else {
                self.app()
            }
        })
    }

    fn abs(&mut self) -> Result<Term, ParseError> {
        self.pos += 1;
        let binder = match self.peek() {
            Some(Tok::Ident(name)) => Name::from(name.as_str()),
            _ => return self.error("expected identifier after lambda"),
        };
        self.pos += 1;
        if self.peek() != Some(&Tok::Dot) {
            return self.error("expected '.' after binder");
        }
        self.pos += 1;
        let body = self.term()?;
        Ok(Term::Abs(binder, body.into()))
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let mut acc: Option<Term> = None;
        loop {
            let next = match self.peek() {
                Some(Tok::Ident(name)) => {
                    let t = Term::var(name);
                    self.pos += 1;
                    t
                }
                Some(Tok::LParen) => {
                    self.pos += 1;
                    let inner = self.term()?;
                    if self.peek() != Some(&Tok::RParen) {
                        return self.error("expected ')'");
                    }
                    self.pos += 1;
                    inner
                }
                Some(Tok::Lambda) if acc.is_some() => self.abs()?,
                _ => break,
            };
            acc = Some(match acc {
                None => next,
                Some(f) => Term::app(f, next),
            });
        }
        match acc {
            Some(t) => Ok(t),
            None => self.error("expected a term"),
        }
    }
}

pub fn parse(text: &str) -> Result<Term, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.chars().count(),
    };
    let t = p.term()?;
    if p.pos != p.toks.len() {
        return p.error("unexpected trailing input");
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinators;
    use crate::term::alpha_eq;

    #[test]
    fn identity() {
        let t = parse(r"\x. x").unwrap();
        assert!(alpha_eq(&t, &Term::abs("x", Term::var("x"))));
        assert!(matches!(&t, Term::Abs(b, _) if &**b == "x"));
    }

    #[test]
    fn s_combinator() {
        let t = parse(r"\x.\y.\z. x z (y z)").unwrap();
        assert!(alpha_eq(&t, &combinators::s()));
    }

    #[test]
    fn application_with_abstraction_argument() {
        let t = parse(r"x1 (\u. x2)").unwrap();
        let expected = Term::app(Term::var("x1"), Term::abs("u", Term::var("x2")));
        assert!(alpha_eq(&t, &expected));
    }

    #[test]
    fn left_association_and_unicode_lambda() {
        let t = parse("λa. a b c").unwrap();
        let expected = Term::abs(
            "a",
            Term::apps(Term::var("a"), [Term::var("b"), Term::var("c")]),
        );
        assert!(alpha_eq(&t, &expected));
    }

    #[test]
    fn primes_and_underscores_in_identifiers() {
        let t = parse("f' _g x_1").unwrap();
        assert_eq!(t.free_vars().len(), 3);
    }

    #[test]
    fn trailing_abstraction_argument() {
        let t = parse(r"f \x. x y").unwrap();
        let expected = parse(r"f (\x. x y)").unwrap();
        assert!(alpha_eq(&t, &expected));
    }

    #[test]
    fn errors_carry_position() {
        assert_eq!(parse(r"\x x").unwrap_err().position, 3);
        assert_eq!(parse("(a b").unwrap_err().position, 4);
        assert_eq!(parse("a )").unwrap_err().position, 2);
        assert_eq!(parse("").unwrap_err().position, 0);
        assert_eq!(parse("a # b").unwrap_err().position, 2);
        assert!(parse(r"\. x").is_err());
    }

    #[test]
    fn free_variables_are_legal() {
        let t = parse("y z").unwrap();
        assert_eq!(t.free_vars().len(), 2);
    }
}
