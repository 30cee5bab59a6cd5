use std::fmt;

use crate::syntax::{lex, Cursor, ParseError, Tok};

/// Semantic types: individuals `e`, propositions `t`, and functions between them.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemType {
    E,
    T,
    Arrow(Box<SemType>, Box<SemType>),
}

impl SemType {
    pub fn arrow(from: SemType, to: SemType) -> SemType {
        SemType::Arrow(Box::new(from), Box::new(to))
    }

    /// `a1 -> a2 -> ... -> result`
    pub fn curried(args: impl IntoIterator<Item = SemType>, result: SemType) -> SemType {
        let args: Vec<_> = args.into_iter().collect();
        args.into_iter()
            .rev()
            .fold(result, |acc, a| SemType::arrow(a, acc))
    }

    pub fn as_arrow(&self) -> Option<(&SemType, &SemType)> {
        match self {
            SemType::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Argument types and final result of a (possibly curried) function type.
    pub fn uncurry(&self) -> (Vec<&SemType>, &SemType) {
        let mut args = Vec::new();
        let mut ty = self;
        while let SemType::Arrow(a, b) = ty {
            args.push(a.as_ref());
            ty = b;
        }
        (args, ty)
    }

    pub fn arity(&self) -> usize {
        self.uncurry().0.len()
    }

    pub fn parse(text: &str) -> Result<SemType, ParseError> {
        let mut cur = Cursor::new(lex(text)?);
        let ty = parse_type(&mut cur)?;
        if !cur.at_end() {
            return Err(cur.unexpected("end of type"));
        }
        Ok(ty)
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemType::E => f.write_str("e"),
            SemType::T => f.write_str("t"),
            SemType::Arrow(a, b) => {
                if a.as_arrow().is_some() {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
        }
    }
}

/// `type := atom ('->' type)?` with `atom := e | t | '(' type ')'`.
pub(crate) fn parse_type(cur: &mut Cursor) -> Result<SemType, ParseError> {
    let from = parse_type_atom(cur)?;
    if cur.eat(&Tok::Arrow) {
        let to = parse_type(cur)?;
        Ok(SemType::arrow(from, to))
    } else {
        Ok(from)
    }
}

pub(crate) fn parse_type_atom(cur: &mut Cursor) -> Result<SemType, ParseError> {
    match cur.peek().clone() {
        Tok::Ident(s) if s == "e" => {
            cur.bump();
            Ok(SemType::E)
        }
        Tok::Ident(s) if s == "t" => {
            cur.bump();
            Ok(SemType::T)
        }
        Tok::LParen => {
            cur.bump();
            let ty = parse_type(cur)?;
            cur.expect(&Tok::RParen)?;
            Ok(ty)
        }
        _ => Err(cur.unexpected("a type (`e`, `t` or `(...)`)")),
    }
}
