use std::collections::BTreeMap;

use super::SemType;

/// A simply-typed lambda term.
///
/// Bound variables are de Bruijn indices; the `hint` on an abstraction is only used for
/// printing, so `==` is alpha-equivalence. Free variables and constants carry their type.
/// `Meta` (unification variables) and `Hyp` (fresh hypothesis constants) only occur inside
/// the prover.
#[derive(Clone, Debug)]
pub enum Term {
    Const {
        name: String,
        ty: SemType,
    },
    Var {
        name: String,
        ty: SemType,
    },
    Bound(usize),
    App(Box<Term>, Box<Term>),
    Lam {
        hint: String,
        ty: SemType,
        body: Box<Term>,
    },
    Meta {
        id: usize,
        hint: String,
        ty: SemType,
    },
    Hyp {
        id: usize,
        hint: String,
        ty: SemType,
    },
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        use Term::*;
        match (self, other) {
            (Const { name: a, ty: s }, Const { name: b, ty: t }) => a == b && s == t,
            (Var { name: a, ty: s }, Var { name: b, ty: t }) => a == b && s == t,
            (Bound(i), Bound(j)) => i == j,
            (App(f, a), App(g, b)) => f == g && a == b,
            (Lam { ty: s, body: a, .. }, Lam { ty: t, body: b, .. }) => s == t && a == b,
            (Meta { id: a, .. }, Meta { id: b, .. }) => a == b,
            (Hyp { id: a, .. }, Hyp { id: b, .. }) => a == b,
            _ => false,
        }
    }
}

impl Eq for Term {}

/// Typing environment for free variables.
pub type Env = BTreeMap<String, SemType>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("ill-typed application: `{fun}` has type {fun_ty} but is applied to an argument of type {arg_ty}")]
    IllTypedApplication {
        fun: String,
        fun_ty: SemType,
        arg_ty: SemType,
    },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("variable `{name}` is annotated {annotated} but the environment says {env}")]
    VariableType {
        name: String,
        annotated: SemType,
        env: SemType,
    },
    #[error("dangling de Bruijn index {0}")]
    DanglingIndex(usize),
    #[error("type mismatch: {left} vs {right}")]
    Mismatch { left: SemType, right: SemType },
}

impl Term {
    pub fn constant(name: impl Into<String>, ty: SemType) -> Term {
        Term::Const {
            name: name.into(),
            ty,
        }
    }

    pub fn var(name: impl Into<String>, ty: SemType) -> Term {
        Term::Var {
            name: name.into(),
            ty,
        }
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    /// Builds `\hint. body` where `body` already uses `Bound(0)` for the new binder.
    pub fn lam(hint: impl Into<String>, ty: SemType, body: Term) -> Term {
        Term::Lam {
            hint: hint.into(),
            ty,
            body: Box::new(body),
        }
    }

    /// Abstracts over the free variable `name`, giving `\name. self`.
    pub fn abstract_var(&self, name: &str, ty: SemType) -> Term {
        let body = self.map_leaves(&mut |t, depth| match t {
            Term::Var { name: n, .. } if n == name => Some(Term::Bound(depth)),
            _ => None,
        });
        Term::lam(name, ty, body)
    }

    /// Abstracts over the hypothesis constant `id`.
    pub fn abstract_hyp(&self, id: usize, hint: &str, ty: SemType) -> Term {
        let body = self.map_leaves(&mut |t, depth| match t {
            Term::Hyp { id: h, .. } if *h == id => Some(Term::Bound(depth)),
            _ => None,
        });
        Term::lam(hint, ty, body)
    }

    /// Head and argument list of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a) = t {
            args.push(a.as_ref());
            t = f;
        }
        args.reverse();
        (t, args)
    }

    /// Rebuilds the term bottom-up, replacing each non-binding leaf for which `f` returns
    /// `Some`. `f` receives the number of binders above the leaf; a replacement must be
    /// valid at that depth.
    pub fn map_leaves(&self, f: &mut impl FnMut(&Term, usize) -> Option<Term>) -> Term {
        fn go(t: &Term, depth: usize, f: &mut impl FnMut(&Term, usize) -> Option<Term>) -> Term {
            match t {
                Term::App(a, b) => Term::app(go(a, depth, f), go(b, depth, f)),
                Term::Lam { hint, ty, body } => Term::Lam {
                    hint: hint.clone(),
                    ty: ty.clone(),
                    body: Box::new(go(body, depth + 1, f)),
                },
                leaf => f(leaf, depth).unwrap_or_else(|| leaf.clone()),
            }
        }
        go(self, 0, f)
    }

    /// Visits every leaf (constants, variables, indices, metas, hypotheses).
    pub fn any_leaf(&self, pred: &mut impl FnMut(&Term) -> bool) -> bool {
        match self {
            Term::App(a, b) => a.any_leaf(pred) || b.any_leaf(pred),
            Term::Lam { body, .. } => body.any_leaf(pred),
            leaf => pred(leaf),
        }
    }

    pub fn has_metas(&self) -> bool {
        self.any_leaf(&mut |t| matches!(t, Term::Meta { .. }))
    }

    pub fn has_hyps(&self) -> bool {
        self.any_leaf(&mut |t| matches!(t, Term::Hyp { .. }))
    }

    pub fn mentions_hyp(&self, id: usize) -> bool {
        self.any_leaf(&mut |t| matches!(t, Term::Hyp { id: h, .. } if *h == id))
    }

    /// Shifts free de Bruijn indices `>= cutoff` by `delta`.
    pub(crate) fn shift(&self, delta: isize, cutoff: usize) -> Term {
        self.map_leaves(&mut |t, depth| match t {
            Term::Bound(i) if *i >= cutoff + depth => {
                Some(Term::Bound((*i as isize + delta) as usize))
            }
            _ => None,
        })
    }

    /// `self[0 := arg]` for the body of an abstraction, removing the binder.
    pub(crate) fn instantiate(&self, arg: &Term) -> Term {
        self.map_leaves(&mut |t, depth| match t {
            Term::Bound(i) if *i == depth => Some(arg.shift(depth as isize, 0)),
            Term::Bound(i) if *i > depth => Some(Term::Bound(i - 1)),
            _ => None,
        })
    }

    /// Type of a term whose free variables carry their own annotation.
    pub fn type_of(&self) -> Result<SemType, TypeError> {
        infer(self, &mut Vec::new(), None)
    }

    /// Whether the term is closed in the ordinary sense: no free variables, metas or
    /// hypotheses, and no dangling indices.
    pub fn is_closed(&self) -> bool {
        fn go(t: &Term, depth: usize) -> bool {
            match t {
                Term::Const { .. } => true,
                Term::Bound(i) => *i < depth,
                Term::App(a, b) => go(a, depth) && go(b, depth),
                Term::Lam { body, .. } => go(body, depth + 1),
                Term::Var { .. } | Term::Meta { .. } | Term::Hyp { .. } => false,
            }
        }
        go(self, 0)
    }
}

fn infer(t: &Term, ctx: &mut Vec<SemType>, env: Option<&Env>) -> Result<SemType, TypeError> {
    match t {
        Term::Const { ty, .. } | Term::Meta { ty, .. } | Term::Hyp { ty, .. } => Ok(ty.clone()),
        Term::Var { name, ty } => match env {
            None => Ok(ty.clone()),
            Some(env) => match env.get(name) {
                None => Err(TypeError::UnboundVariable(name.clone())),
                Some(declared) if declared != ty => Err(TypeError::VariableType {
                    name: name.clone(),
                    annotated: ty.clone(),
                    env: declared.clone(),
                }),
                Some(_) => Ok(ty.clone()),
            },
        },
        Term::Bound(i) => ctx
            .len()
            .checked_sub(i + 1)
            .map(|k| ctx[k].clone())
            .ok_or(TypeError::DanglingIndex(*i)),
        Term::App(f, a) => {
            let fun_ty = infer(f, ctx, env)?;
            let arg_ty = infer(a, ctx, env)?;
            match fun_ty.as_arrow() {
                Some((from, to)) if *from == arg_ty => Ok(to.clone()),
                _ => Err(TypeError::IllTypedApplication {
                    fun: f.to_string(),
                    fun_ty,
                    arg_ty,
                }),
            }
        }
        Term::Lam { ty, body, .. } => {
            ctx.push(ty.clone());
            let body_ty = infer(body, ctx, env);
            ctx.pop();
            Ok(SemType::arrow(ty.clone(), body_ty?))
        }
    }
}

/// Checks `term` against `env` and returns its unique type.
pub fn typecheck(term: &Term, env: &Env) -> Result<SemType, TypeError> {
    infer(term, &mut Vec::new(), Some(env))
}
