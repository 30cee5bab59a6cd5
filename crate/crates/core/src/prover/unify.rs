use std::collections::BTreeMap;

use crate::meaning::{normalize, SemType, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnifyError {
    /// A metavariable is applied to something other than distinct bound variables or
    /// hypothesis constants.
    #[error("outside the pattern fragment: `{pattern}`")]
    OutsidePatternFragment { pattern: String },
}

#[derive(Debug, Clone)]
struct MetaInfo {
    hint: String,
    ty: SemType,
    /// Hypothesis constants with an id at or above this were introduced after the
    /// metavariable and may not occur in its solution.
    scope: usize,
    value: Option<Term>,
}

/// Metavariables and their solutions.
#[derive(Debug, Clone, Default)]
pub struct Unifier {
    metas: BTreeMap<usize, MetaInfo>,
}

/// Closed solutions, keyed by metavariable id.
pub type Substitution = BTreeMap<usize, Term>;

fn same_head(a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::Const { .. }, Term::Const { .. }) | (Term::Var { .. }, Term::Var { .. }) => a == b,
        (Term::Bound(i), Term::Bound(j)) => i == j,
        (Term::Hyp { id: i, .. }, Term::Hyp { id: j, .. })
        | (Term::Meta { id: i, .. }, Term::Meta { id: j, .. }) => i == j,
        _ => false,
    }
}

impl Unifier {
    pub fn new() -> Self {
        Self::default()
    }

    /// A fresh metavariable whose solution may mention hypotheses with id `< scope`.
    pub fn fresh(&mut self, hint: &str, ty: SemType, scope: usize) -> Term {
        let id = self.metas.keys().next_back().map_or(0, |k| k + 1);
        self.declare(id, hint, ty.clone(), scope);
        Term::Meta {
            id,
            hint: hint.to_string(),
            ty,
        }
    }

    pub(crate) fn declare(&mut self, id: usize, hint: &str, ty: SemType, scope: usize) {
        self.metas.entry(id).or_insert(MetaInfo {
            hint: hint.to_string(),
            ty,
            scope,
            value: None,
        });
    }

    pub fn is_bound(&self, id: usize) -> bool {
        self.metas.get(&id).is_some_and(|m| m.value.is_some())
    }

    pub fn hint(&self, id: usize) -> &str {
        &self.metas[&id].hint
    }

    pub fn ty(&self, id: usize) -> &SemType {
        &self.metas[&id].ty
    }

    pub(crate) fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.metas.keys().copied()
    }

    pub(crate) fn scope(&self, id: usize) -> usize {
        self.metas[&id].scope
    }

    /// Substitutes solved metavariables and beta-reduces. Solutions are eta-long, so an
    /// eta-long input stays eta-long.
    fn subst(&self, t: &Term) -> Term {
        if !t.has_metas() {
            return t.clone();
        }
        let mut changed = false;
        let s = t.map_leaves(&mut |leaf, _| match leaf {
            Term::Meta { id, .. } => {
                let v = self.metas.get(id)?.value.as_ref()?;
                changed = true;
                Some(v.clone())
            }
            _ => None,
        });
        if changed {
            self.subst(&crate::meaning::beta(&s))
        } else {
            s
        }
    }

    /// The canonical form of `t` under the current solutions.
    pub fn resolve(&self, t: &Term) -> Term {
        let s = self.subst(t);
        normalize(&s).expect("metavariables are solved at their own type")
    }

    /// The current substitution, restricted to solved metavariables.
    pub fn substitution(&self) -> Substitution {
        self.metas
            .iter()
            .filter_map(|(id, m)| m.value.as_ref().map(|v| (*id, self.resolve(v))))
            .collect()
    }

    /// Unifies a pattern (which may contain metavariables) with a term (whose metavariables,
    /// if any, are treated as constants). Both sides must be well typed at the same type.
    /// `Ok(false)` means no unifier exists; solutions found before a failure are kept, so
    /// callers should unify on a clone when they need to backtrack.
    pub fn unify(&mut self, pattern: &Term, term: &Term) -> Result<bool, UnifyError> {
        let p = self.resolve(pattern);
        let t = normalize(term).expect("unify: term must be well typed");
        self.unify_at(&p, &t, &mut Vec::new())
    }

    fn unify_at(
        &mut self,
        p: &Term,
        t: &Term,
        ctx: &mut Vec<(String, SemType)>,
    ) -> Result<bool, UnifyError> {
        let p = self.subst(p);
        match (&p, t) {
            (
                Term::Lam {
                    hint, ty, body: pb, ..
                },
                Term::Lam {
                    ty: ty2, body: tb, ..
                },
            ) => {
                if ty != ty2 {
                    return Ok(false);
                }
                ctx.push((hint.clone(), ty.clone()));
                let r = self.unify_at(pb, tb, ctx);
                ctx.pop();
                r
            }
            (Term::Lam { .. }, _) | (_, Term::Lam { .. }) => Ok(false),
            _ => {
                let (ph, pargs) = p.spine();
                if let Term::Meta { id, .. } = ph {
                    if self.metas.get(id).is_some_and(|m| m.value.is_none()) {
                        return self.solve(*id, &p, &pargs, t, ctx);
                    }
                }
                let (th, targs) = t.spine();
                if !same_head(ph, th) || pargs.len() != targs.len() {
                    return Ok(false);
                }
                for (a, b) in pargs.iter().zip(targs) {
                    if !self.unify_at(a, b, ctx)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Solves `?id a1 .. an = t` where the `ai` are distinct bound variables or hypotheses.
    fn solve(
        &mut self,
        id: usize,
        pattern: &Term,
        args: &[&Term],
        t: &Term,
        ctx: &[(String, SemType)],
    ) -> Result<bool, UnifyError> {
        enum Arg {
            Bound(usize),
            Hyp(usize),
        }
        let outside = || UnifyError::OutsidePatternFragment {
            pattern: pattern.to_string(),
        };
        let mut keys = Vec::new();
        let mut binders = Vec::new();
        for a in args {
            let a = crate::meaning::eta_contract_head(a).unwrap_or_else(|| (*a).clone());
            let (key, hint, ty) = match a {
                Term::Bound(i) if i < ctx.len() => {
                    let (h, ty) = &ctx[ctx.len() - 1 - i];
                    (Arg::Bound(i), h.clone(), ty.clone())
                }
                Term::Hyp { id, hint, ty } => (Arg::Hyp(id), hint, ty),
                _ => return Err(outside()),
            };
            let dup = keys.iter().any(|k| match (k, &key) {
                (Arg::Bound(a), Arg::Bound(b)) | (Arg::Hyp(a), Arg::Hyp(b)) => a == b,
                _ => false,
            });
            if dup {
                return Err(outside());
            }
            keys.push(key);
            binders.push((hint, ty));
        }
        let n = keys.len();
        let scope = self.metas[&id].scope;
        let mut ok = true;
        let body = t.map_leaves(&mut |leaf, d| {
            let pos = match leaf {
                Term::Bound(i) if *i >= d => {
                    let j = i - d;
                    let p = keys
                        .iter()
                        .position(|k| matches!(k, Arg::Bound(b) if *b == j));
                    if p.is_none() {
                        ok = false;
                    }
                    p
                }
                Term::Hyp { id: h, .. } => {
                    let p = keys.iter().position(|k| matches!(k, Arg::Hyp(x) if x == h));
                    if p.is_none() && *h >= scope {
                        ok = false;
                    }
                    p
                }
                Term::Meta { id: m, .. } if *m == id => {
                    ok = false;
                    None
                }
                _ => None,
            };
            pos.map(|k| Term::Bound(d + (n - 1 - k)))
        });
        if !ok {
            return Ok(false);
        }
        let solution = binders
            .into_iter()
            .rev()
            .fold(body, |acc, (hint, ty)| Term::lam(hint, ty, acc));
        if let Some(m) = self.metas.get_mut(&id) {
            m.value = Some(solution);
        }
        Ok(true)
    }
}

fn collect_metas(t: &Term, u: &mut Unifier) {
    t.any_leaf(&mut |leaf| {
        if let Term::Meta { id, hint, ty } = leaf {
            u.declare(*id, hint, ty.clone(), usize::MAX);
        }
        false
    });
}

/// Most general solution of `pattern = term`, where `pattern` may contain metavariables
/// applied to distinct hypothesis constants. `Ok(None)` when no unifier exists.
///
/// ```
/// use glue::meaning::{SemType, Term};
/// use glue::prover::unify;
/// let et = SemType::parse("e -> t").unwrap();
/// let x = Term::Hyp { id: 0, hint: "x".into(), ty: SemType::E };
/// let s = Term::Meta { id: 0, hint: "S".into(), ty: et };
/// let convince = Term::constant("convince", SemType::parse("e -> e -> t").unwrap());
/// let bill = Term::constant("Bill", SemType::E);
/// let sub = unify(&Term::app(s, x.clone()), &Term::apps(convince, [bill, x])).unwrap().unwrap();
/// assert_eq!(sub[&0].to_string(), "\\x. convince(Bill,x)");
/// ```
pub fn unify(pattern: &Term, term: &Term) -> Result<Option<Substitution>, UnifyError> {
    let mut u = Unifier::new();
    collect_metas(pattern, &mut u);
    Ok(if u.unify(pattern, term)? {
        Some(u.substitution())
    } else {
        None
    })
}
