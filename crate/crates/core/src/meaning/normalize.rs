use super::{SemType, Term, TypeError};

/// Beta-normal form. Terminates on well-typed input.
pub(crate) fn beta(t: &Term) -> Term {
    match t {
        Term::Lam { hint, ty, body } => Term::lam(hint.clone(), ty.clone(), beta(body)),
        Term::App(f, a) => match beta(f) {
            Term::Lam { body, .. } => beta(&body.instantiate(a)),
            f => Term::app(f, beta(a)),
        },
        leaf => leaf.clone(),
    }
}

fn head_type(head: &Term, ctx: &[SemType]) -> SemType {
    match head {
        Term::Const { ty, .. }
        | Term::Var { ty, .. }
        | Term::Meta { ty, .. }
        | Term::Hyp { ty, .. } => ty.clone(),
        Term::Bound(i) => ctx[ctx.len() - 1 - i].clone(),
        _ => unreachable!("beta-normal spine head is a leaf"),
    }
}

/// Eta-long form of a beta-normal term of type `ty`.
fn long(t: &Term, ty: &SemType, ctx: &mut Vec<SemType>) -> Term {
    match t {
        Term::Lam {
            hint,
            ty: dom,
            body,
        } => {
            let (_, cod) = ty.as_arrow().expect("abstraction has arrow type");
            ctx.push(dom.clone());
            let body = long(body, cod, ctx);
            ctx.pop();
            Term::lam(hint.clone(), dom.clone(), body)
        }
        _ => {
            let (head, args) = t.spine();
            let head_ty = head_type(head, ctx);
            let (arg_tys, _) = head_ty.uncurry();
            let args: Vec<Term> = args
                .into_iter()
                .zip(arg_tys)
                .map(|(a, aty)| long(a, aty, ctx))
                .collect();
            expand_neutral(head.clone(), args, ty, ctx)
        }
    }
}

fn expand_neutral(head: Term, args: Vec<Term>, ty: &SemType, ctx: &mut Vec<SemType>) -> Term {
    match ty {
        SemType::Arrow(dom, cod) => {
            let head = head.shift(1, 0);
            let mut args: Vec<Term> = args.iter().map(|a| a.shift(1, 0)).collect();
            ctx.push((**dom).clone());
            args.push(long(&Term::Bound(0), dom, ctx));
            let body = expand_neutral(head, args, cod, ctx);
            ctx.pop();
            Term::lam("x", (**dom).clone(), body)
        }
        _ => Term::apps(head, args),
    }
}

/// The canonical representative of a term's beta-eta class: beta-normal and eta-long.
///
/// Two well-typed terms are beta-eta-equivalent iff their normal forms are equal (`==` is
/// alpha-equivalence).
pub fn normalize(term: &Term) -> Result<Term, TypeError> {
    let ty = term.type_of()?;
    Ok(long(&beta(term), &ty, &mut Vec::new()))
}

/// Alpha-beta-eta equivalence of two terms of the same type.
pub fn equivalent(a: &Term, b: &Term) -> Result<bool, TypeError> {
    let (ta, tb) = (a.type_of()?, b.type_of()?);
    if ta != tb {
        return Err(TypeError::Mismatch {
            left: ta,
            right: tb,
        });
    }
    Ok(normalize(a)? == normalize(b)?)
}

/// If `t` is an eta-expansion `\x1..xn. h x1 .. xn` of a bare head `h` (a constant, a
/// variable, or an index bound outside), returns `h` with indices adjusted to the
/// surrounding scope.
pub(crate) fn eta_contract_head(t: &Term) -> Option<Term> {
    let mut n = 0;
    let mut body = t;
    while let Term::Lam { body: b, .. } = body {
        n += 1;
        body = b;
    }
    if n == 0 {
        return None;
    }
    let (head, args) = body.spine();
    if args.len() != n {
        return None;
    }
    for (j, arg) in args.iter().enumerate() {
        let want = n - 1 - j;
        let ok = match arg {
            Term::Bound(i) => *i == want,
            lam @ Term::Lam { .. } => eta_contract_head(lam) == Some(Term::Bound(want)),
            _ => false,
        };
        if !ok {
            return None;
        }
    }
    match head {
        Term::Bound(i) if *i < n => None,
        Term::Bound(i) => Some(Term::Bound(i - n)),
        Term::Lam { .. } | Term::App(..) => None,
        leaf => Some(leaf.clone()),
    }
}
