//! Independent reference implementation of βη-normalization on named terms, and a seeded
//! generator of random well-typed terms.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use glue::meaning::{SemType, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A lambda term with named variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum N {
    Const(String, SemType),
    Var(String, SemType),
    App(Box<N>, Box<N>),
    Lam(String, SemType, Box<N>),
}

static FRESH: AtomicUsize = AtomicUsize::new(0);

pub fn fresh(base: &str) -> String {
    let base = base.split('\'').next().unwrap_or("v");
    format!("{base}'{}", FRESH.fetch_add(1, Ordering::Relaxed))
}

pub fn app(f: N, a: N) -> N {
    N::App(Box::new(f), Box::new(a))
}

pub fn lam(x: &str, ty: SemType, body: N) -> N {
    N::Lam(x.to_string(), ty, Box::new(body))
}

pub fn e() -> SemType {
    SemType::E
}

pub fn t() -> SemType {
    SemType::T
}

pub fn arr(a: SemType, b: SemType) -> SemType {
    SemType::arrow(a, b)
}

pub fn free_vars(n: &N) -> BTreeSet<String> {
    match n {
        N::Const(..) => BTreeSet::new(),
        N::Var(x, _) => BTreeSet::from([x.clone()]),
        N::App(f, a) => {
            let mut s = free_vars(f);
            s.extend(free_vars(a));
            s
        }
        N::Lam(x, _, b) => {
            let mut s = free_vars(b);
            s.remove(x);
            s
        }
    }
}

/// Capture-avoiding `n[x := s]`.
pub fn subst(n: &N, x: &str, s: &N) -> N {
    match n {
        N::Const(..) => n.clone(),
        N::Var(y, _) => {
            if y == x {
                s.clone()
            } else {
                n.clone()
            }
        }
        N::App(f, a) => app(subst(f, x, s), subst(a, x, s)),
        N::Lam(y, ty, b) => {
            if y == x {
                n.clone()
            } else if free_vars(s).contains(y) {
                let z = fresh(y);
                let b = subst(b, y, &N::Var(z.clone(), ty.clone()));
                lam(&z, ty.clone(), subst(&b, x, s))
            } else {
                lam(y, ty.clone(), subst(b, x, s))
            }
        }
    }
}

pub fn beta_nf(n: &N) -> N {
    match n {
        N::Lam(x, ty, b) => lam(x, ty.clone(), beta_nf(b)),
        N::App(f, a) => match beta_nf(f) {
            N::Lam(x, _, b) => beta_nf(&subst(&b, &x, a)),
            f => app(f, beta_nf(a)),
        },
        leaf => leaf.clone(),
    }
}

fn lookup(env: &[(String, SemType)], x: &str) -> Option<SemType> {
    env.iter()
        .rev()
        .find(|(y, _)| y == x)
        .map(|(_, t)| t.clone())
}

pub fn type_of(n: &N, env: &mut Vec<(String, SemType)>) -> SemType {
    match n {
        N::Const(_, ty) => ty.clone(),
        N::Var(x, ty) => lookup(env, x).unwrap_or_else(|| ty.clone()),
        N::App(f, _) => match type_of(f, env) {
            SemType::Arrow(_, cod) => *cod,
            other => panic!("applying a term of type {other}"),
        },
        N::Lam(x, ty, b) => {
            env.push((x.clone(), ty.clone()));
            let cod = type_of(b, env);
            env.pop();
            arr(ty.clone(), cod)
        }
    }
}

fn spine(n: &N) -> (&N, Vec<&N>) {
    let mut args = Vec::new();
    let mut h = n;
    while let N::App(f, a) = h {
        args.push(a.as_ref());
        h = f;
    }
    args.reverse();
    (h, args)
}

/// η-long form of a β-normal term of type `ty`.
fn eta_long(n: &N, ty: &SemType, env: &mut Vec<(String, SemType)>) -> N {
    if let N::Lam(x, dom, b) = n {
        let SemType::Arrow(_, cod) = ty else {
            panic!("abstraction at non-arrow type")
        };
        env.push((x.clone(), dom.clone()));
        let b = eta_long(b, cod, env);
        env.pop();
        return lam(x, dom.clone(), b);
    }
    let (head, args) = spine(n);
    let mut head_ty = type_of(head, env);
    let mut out = head.clone();
    for a in args {
        let SemType::Arrow(dom, cod) = head_ty else {
            panic!("too many arguments")
        };
        out = app(out, eta_long(a, &dom, env));
        head_ty = *cod;
    }
    match ty {
        SemType::Arrow(dom, cod) => {
            let z = fresh("z");
            env.push((z.clone(), (**dom).clone()));
            let arg = eta_long(&N::Var(z.clone(), (**dom).clone()), dom, env);
            let body = eta_long(&app(out, arg), cod, env);
            env.pop();
            lam(&z, (**dom).clone(), body)
        }
        _ => out,
    }
}

/// Reference βη normal form (β-normal, η-long).
pub fn normal(n: &N) -> N {
    let ty = type_of(n, &mut Vec::new());
    eta_long(&beta_nf(n), &ty, &mut Vec::new())
}

pub fn alpha_eq(a: &N, b: &N) -> bool {
    fn go(a: &N, b: &N, env: &mut Vec<(String, String)>) -> bool {
        match (a, b) {
            (N::Const(x, s), N::Const(y, t)) => x == y && s == t,
            (N::Var(x, _), N::Var(y, _)) => {
                match env.iter().rev().find(|(l, r)| l == x || r == y) {
                    Some((l, r)) => l == x && r == y,
                    None => x == y,
                }
            }
            (N::App(f, a), N::App(g, b)) => go(f, g, env) && go(a, b, env),
            (N::Lam(x, s, p), N::Lam(y, t, q)) => {
                if s != t {
                    return false;
                }
                env.push((x.clone(), y.clone()));
                let r = go(p, q, env);
                env.pop();
                r
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

/// Converts a crate term (no metavariables or hypotheses) to a named term.
pub fn from_term(t: &Term) -> N {
    fn go(t: &Term, ctx: &mut Vec<(String, SemType)>) -> N {
        match t {
            Term::Const { name, ty } => N::Const(name.clone(), ty.clone()),
            Term::Var { name, ty } => N::Var(name.clone(), ty.clone()),
            Term::Bound(i) => {
                let (x, ty) = ctx[ctx.len() - 1 - i].clone();
                N::Var(x, ty)
            }
            Term::App(f, a) => app(go(f, ctx), go(a, ctx)),
            Term::Lam { hint, ty, body } => {
                let x = fresh(hint);
                ctx.push((x.clone(), ty.clone()));
                let b = go(body, ctx);
                ctx.pop();
                lam(&x, ty.clone(), b)
            }
            Term::Meta { .. } | Term::Hyp { .. } => panic!("unexpected metavariable"),
        }
    }
    go(t, &mut Vec::new())
}

pub fn to_term(n: &N) -> Term {
    match n {
        N::Const(c, ty) => Term::constant(c.clone(), ty.clone()),
        N::Var(x, ty) => Term::var(x.clone(), ty.clone()),
        N::App(f, a) => Term::app(to_term(f), to_term(a)),
        N::Lam(x, ty, b) => to_term(b).abstract_var(x, ty.clone()),
    }
}

/// Constants available to the generator.
pub fn constants() -> Vec<(&'static str, SemType)> {
    vec![
        ("a", e()),
        ("b", e()),
        ("top", t()),
        ("p", arr(e(), t())),
        ("r", arr(e(), arr(e(), t()))),
        ("neg", arr(t(), t())),
        ("q", arr(arr(e(), t()), t())),
        ("every", arr(arr(e(), t()), arr(arr(e(), t()), t()))),
        ("g", arr(arr(e(), t()), arr(e(), t()))),
        ("iota", arr(arr(e(), t()), e())),
    ]
}

/// Seeded generator of random well-typed terms, biased towards redexes, shadowing and
/// η-contractible shapes.
pub struct TermGen {
    rng: ChaCha8Rng,
    consts: Vec<(&'static str, SemType)>,
}

const NAMES: [&str; 3] = ["x", "y", "z"];

fn result_after(ty: &SemType, n: usize) -> Option<(Vec<SemType>, SemType)> {
    let mut args = Vec::new();
    let mut cur = ty.clone();
    for _ in 0..n {
        let SemType::Arrow(d, c) = cur else {
            return None;
        };
        args.push(*d);
        cur = *c;
    }
    Some((args, cur))
}

impl TermGen {
    pub fn new(seed: u64) -> Self {
        TermGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            consts: constants(),
        }
    }

    pub fn small_type(&mut self) -> SemType {
        [
            e(),
            t(),
            arr(e(), t()),
            arr(e(), arr(e(), t())),
            arr(arr(e(), t()), t()),
        ]
        .choose(&mut self.rng)
        .unwrap()
        .clone()
    }

    /// A closed term of type `ty`.
    pub fn term(&mut self, ty: &SemType, depth: usize) -> N {
        self.gen(ty, depth, &mut Vec::new())
    }

    fn gen(&mut self, ty: &SemType, depth: usize, ctx: &mut Vec<(String, SemType)>) -> N {
        if depth > 0 && self.rng.gen_bool(0.2) {
            let aty = self.small_type();
            let x = NAMES.choose(&mut self.rng).unwrap().to_string();
            ctx.push((x.clone(), aty.clone()));
            let body = self.gen(ty, depth - 1, ctx);
            ctx.pop();
            let arg = self.gen(&aty, depth - 1, ctx);
            return app(lam(&x, aty, body), arg);
        }
        if let SemType::Arrow(dom, cod) = ty {
            if depth == 0 || self.rng.gen_bool(0.6) {
                let x = NAMES.choose(&mut self.rng).unwrap().to_string();
                ctx.push((x.clone(), (**dom).clone()));
                let body = self.gen(cod, depth.saturating_sub(1), ctx);
                ctx.pop();
                return lam(&x, (**dom).clone(), body);
            }
        }
        let mut heads: Vec<(N, Vec<SemType>)> = Vec::new();
        let visible: Vec<(String, SemType)> = ctx
            .iter()
            .enumerate()
            .filter(|(i, (x, _))| !ctx[i + 1..].iter().any(|(y, _)| y == x))
            .map(|(_, b)| b.clone())
            .collect();
        let candidates = visible
            .iter()
            .map(|(x, ty)| (N::Var(x.clone(), ty.clone()), ty.clone()))
            .chain(
                self.consts
                    .iter()
                    .map(|(c, ty)| (N::Const(c.to_string(), ty.clone()), ty.clone())),
            );
        for (h, hty) in candidates {
            for n in 0..=hty.arity() {
                if let Some((args, res)) = result_after(&hty, n) {
                    if res == *ty && (depth > 0 || args.iter().all(|a| a.arity() == 0) && n <= 1) {
                        heads.push((h.clone(), args));
                    }
                }
            }
        }
        if heads.is_empty() {
            let ty = ty.clone();
            return match ty {
                SemType::Arrow(..) => self.gen(&ty, 0, ctx),
                _ => panic!("no constant of type {ty}"),
            };
        }
        let (head, args) = heads.choose(&mut self.rng).unwrap().clone();
        let mut out = head;
        for a in args {
            let arg = self.gen(&a, depth.saturating_sub(1), ctx);
            out = app(out, arg);
        }
        out
    }
}
