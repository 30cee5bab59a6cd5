//! Reading terms from text, with inference of unannotated binder types.

use super::{Env, SemType, Signature, Term};
use crate::syntax::{lex, Cursor, ParseError, Tok};

#[derive(Debug, Clone)]
pub(crate) enum Raw {
    Ident {
        name: String,
        pos: (usize, usize),
    },
    App {
        fun: Box<Raw>,
        args: Vec<Raw>,
        pos: (usize, usize),
    },
    Lam {
        name: String,
        ann: Option<SemType>,
        body: Box<Raw>,
        pos: (usize, usize),
    },
}

impl Raw {
    fn pos(&self) -> (usize, usize) {
        match self {
            Raw::Ident { pos, .. } | Raw::App { pos, .. } | Raw::Lam { pos, .. } => *pos,
        }
    }
}

/// `term := '\' x (':' type)? '.' term | primary ('(' term (',' term)* ')')*`
pub(crate) fn parse_raw(cur: &mut Cursor) -> Result<Raw, ParseError> {
    let pos = cur.here();
    if cur.eat(&Tok::Lambda) {
        let name = cur.ident()?;
        let ann = if cur.eat(&Tok::Colon) {
            Some(super::types::parse_type(cur)?)
        } else {
            None
        };
        cur.expect(&Tok::Dot)?;
        let body = parse_raw(cur)?;
        return Ok(Raw::Lam {
            name,
            ann,
            body: Box::new(body),
            pos,
        });
    }
    let mut t = match cur.peek().clone() {
        Tok::Ident(name) => {
            cur.bump();
            Raw::Ident { name, pos }
        }
        Tok::LParen => {
            cur.bump();
            let inner = parse_raw(cur)?;
            cur.expect(&Tok::RParen)?;
            inner
        }
        _ => return Err(cur.unexpected("a meaning term")),
    };
    while *cur.peek() == Tok::LParen {
        let pos = cur.here();
        cur.bump();
        let mut args = vec![parse_raw(cur)?];
        while cur.eat(&Tok::Comma) {
            args.push(parse_raw(cur)?);
        }
        cur.expect(&Tok::RParen)?;
        t = Raw::App {
            fun: Box::new(t),
            args,
            pos,
        };
    }
    Ok(t)
}

#[derive(Debug, Clone)]
enum ITy {
    Var(usize),
    E,
    T,
    Arrow(Box<ITy>, Box<ITy>),
}

impl ITy {
    fn from(ty: &SemType) -> ITy {
        match ty {
            SemType::E => ITy::E,
            SemType::T => ITy::T,
            SemType::Arrow(a, b) => ITy::Arrow(Box::new(ITy::from(a)), Box::new(ITy::from(b))),
        }
    }
}

/// Elaborated term whose binder types may still mention inference variables.
enum ETerm {
    Done(Term),
    Bound(usize),
    App(Box<ETerm>, Box<ETerm>),
    Lam {
        hint: String,
        ty: ITy,
        body: Box<ETerm>,
        pos: (usize, usize),
    },
}

struct Infer<'a> {
    sig: &'a Signature,
    env: &'a Env,
    vars: Vec<Option<ITy>>,
    scope: Vec<(String, ITy)>,
}

impl Infer<'_> {
    fn fresh(&mut self) -> ITy {
        self.vars.push(None);
        ITy::Var(self.vars.len() - 1)
    }

    fn resolve(&self, ty: &ITy) -> ITy {
        match ty {
            ITy::Var(v) => match &self.vars[*v] {
                Some(t) => self.resolve(t),
                None => ty.clone(),
            },
            ITy::Arrow(a, b) => ITy::Arrow(Box::new(self.resolve(a)), Box::new(self.resolve(b))),
            other => other.clone(),
        }
    }

    fn occurs(&self, v: usize, ty: &ITy) -> bool {
        match self.resolve(ty) {
            ITy::Var(w) => v == w,
            ITy::Arrow(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
            _ => false,
        }
    }

    fn unify(&mut self, a: &ITy, b: &ITy) -> bool {
        match (self.resolve(a), self.resolve(b)) {
            (ITy::Var(v), ITy::Var(w)) if v == w => true,
            (ITy::Var(v), other) | (other, ITy::Var(v)) => {
                if self.occurs(v, &other) {
                    return false;
                }
                self.vars[v] = Some(other);
                true
            }
            (ITy::E, ITy::E) | (ITy::T, ITy::T) => true,
            (ITy::Arrow(a1, b1), ITy::Arrow(a2, b2)) => {
                self.unify(&a1, &a2) && self.unify(&b1, &b2)
            }
            _ => false,
        }
    }

    fn ground(&self, ty: &ITy) -> Option<SemType> {
        match self.resolve(ty) {
            ITy::Var(_) => None,
            ITy::E => Some(SemType::E),
            ITy::T => Some(SemType::T),
            ITy::Arrow(a, b) => Some(SemType::arrow(self.ground(&a)?, self.ground(&b)?)),
        }
    }

    fn show(&self, ty: &ITy) -> String {
        self.ground(ty)
            .map(|t| t.to_string())
            .unwrap_or_else(|| "an undetermined type".to_string())
    }

    fn elab(&mut self, raw: &Raw) -> Result<(ETerm, ITy), ParseError> {
        match raw {
            Raw::Ident { name, pos } => {
                if let Some(k) = self.scope.iter().rposition(|(n, _)| n == name) {
                    let ty = self.scope[k].1.clone();
                    return Ok((ETerm::Bound(self.scope.len() - 1 - k), ty));
                }
                if let Some(ty) = self.env.get(name) {
                    return Ok((
                        ETerm::Done(Term::var(name.clone(), ty.clone())),
                        ITy::from(ty),
                    ));
                }
                if let Some(ty) = self.sig.get(name) {
                    return Ok((
                        ETerm::Done(Term::constant(name.clone(), ty.clone())),
                        ITy::from(ty),
                    ));
                }
                Err(ParseError::new(
                    pos.0,
                    pos.1,
                    format!("unknown identifier `{name}` (not bound and not a declared constant)"),
                ))
            }
            Raw::App { fun, args, pos } => {
                let (mut t, mut ty) = self.elab(fun)?;
                for arg in args {
                    let (a, aty) = self.elab(arg)?;
                    let res = self.fresh();
                    let want = ITy::Arrow(Box::new(aty.clone()), Box::new(res.clone()));
                    if !self.unify(&ty, &want) {
                        let fun_ty = self.show(&ty);
                        let arg_ty = self.show(&aty);
                        return Err(ParseError::new(
                            pos.0,
                            pos.1,
                            format!("ill-typed application: function of type {fun_ty} applied to argument of type {arg_ty}"),
                        ));
                    }
                    t = ETerm::App(Box::new(t), Box::new(a));
                    ty = res;
                }
                Ok((t, ty))
            }
            Raw::Lam {
                name,
                ann,
                body,
                pos,
            } => {
                let dom = match ann {
                    Some(ty) => ITy::from(ty),
                    None => self.fresh(),
                };
                self.scope.push((name.clone(), dom.clone()));
                let res = self.elab(body);
                self.scope.pop();
                let (b, bty) = res?;
                Ok((
                    ETerm::Lam {
                        hint: name.clone(),
                        ty: dom.clone(),
                        body: Box::new(b),
                        pos: *pos,
                    },
                    ITy::Arrow(Box::new(dom), Box::new(bty)),
                ))
            }
        }
    }

    fn finish(&self, t: ETerm) -> Result<Term, ParseError> {
        Ok(match t {
            ETerm::Done(t) => t,
            ETerm::Bound(i) => Term::Bound(i),
            ETerm::App(f, a) => Term::app(self.finish(*f)?, self.finish(*a)?),
            ETerm::Lam {
                hint,
                ty,
                body,
                pos,
            } => {
                let ty = self.ground(&ty).ok_or_else(|| {
                    ParseError::new(
                        pos.0,
                        pos.1,
                        format!(
                            "cannot infer the type of `{hint}`; annotate it as `\\{hint}:type`"
                        ),
                    )
                })?;
                Term::lam(hint, ty, self.finish(*body)?)
            }
        })
    }
}

/// Elaborates a raw term: resolves names (lambda-bound, then `env`, then `sig`) and infers
/// binder types. When `expected` is given the term must have that type.
pub(crate) fn elaborate(
    raw: &Raw,
    sig: &Signature,
    env: &Env,
    expected: Option<&SemType>,
) -> Result<(Term, SemType), ParseError> {
    let mut inf = Infer {
        sig,
        env,
        vars: Vec::new(),
        scope: Vec::new(),
    };
    let (t, ty) = inf.elab(raw)?;
    if let Some(want) = expected {
        if !inf.unify(&ty, &ITy::from(want)) {
            let (line, col) = raw.pos();
            return Err(ParseError::new(
                line,
                col,
                format!("expected a meaning of type {want}, found {}", inf.show(&ty)),
            ));
        }
    }
    let term = inf.finish(t)?;
    let ty = inf.ground(&ty).ok_or_else(|| {
        let (line, col) = raw.pos();
        ParseError::new(line, col, "cannot infer the type of this term")
    })?;
    Ok((term, ty))
}

/// Parses a closed term over the constants of `sig`.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    parse_term_in(text, sig, &Env::new(), None)
}

/// Parses a term whose free variables are typed by `env`, optionally at an expected type.
pub fn parse_term_in(
    text: &str,
    sig: &Signature,
    env: &Env,
    expected: Option<&SemType>,
) -> Result<Term, ParseError> {
    let mut cur = Cursor::new(lex(text)?);
    let raw = parse_raw(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.unexpected("end of term"));
    }
    Ok(elaborate(&raw, sig, env, expected)?.0)
}
