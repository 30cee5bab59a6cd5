//! Brute-force reading enumerator, independent of the prover.
//!
//! Semantic-structure quantifiers are grounded over the universe in every possible way.
//! Each grounded premise is compiled into first-order pieces: nested antecedents
//! `∀x. A ⤳ x ⊸ H ⤳ S(x)` become an indexed hypothesis `A ⤳ x_i` plus a requirement that
//! the argument supplied for `H` consumed hypothesis `i`. A chart then combines items in
//! every order, keeping track of which premises and hypotheses each item consumed, and the
//! readings are the goal items that consumed everything. Meanings are assembled as named
//! λ-terms and normalized by the reference normalizer.

use std::collections::BTreeSet;

use glue::fstructure::SemStructure;
use glue::glue_core::{Atom, BinderKind, Formula, PremiseSet, Sem};
use glue::meaning::{SemType, Term};
use glue::prover::Goal;

use super::terms::{
    alpha_eq, app, free_vars, fresh, from_term, lam, normal, subst, to_term, type_of, N,
};

#[derive(Clone)]
enum Slot {
    /// The argument is bound to this variable of the constructor's meaning.
    Var(String),
    /// The argument's meaning must equal this closed term.
    Check(N),
}

#[derive(Clone)]
struct Ant {
    sem: SemStructure,
    ty: SemType,
    /// Hypotheses (chart indices) the argument must have consumed.
    requires: u64,
    /// Variables abstracted over the argument's meaning before it is used.
    abstracts: Vec<(String, SemType)>,
    slot: Slot,
}

struct Compiled {
    sem: SemStructure,
    ty: SemType,
    ants: Vec<Ant>,
    body: N,
}

#[derive(Clone)]
struct Item {
    sem: SemStructure,
    ty: SemType,
    /// Index into the compiled functions, or `None` for an atomic item.
    fun: Option<usize>,
    pending: Vec<usize>,
    filled: Vec<Option<N>>,
    used: u64,
    term: Option<N>,
}

fn atom_parts(a: &Atom) -> Option<(SemStructure, SemType, &Term)> {
    match &a.sem {
        Sem::Node(s) => Some((s.clone(), a.ty.clone(), &a.meaning)),
        _ => None,
    }
}

fn var_name(t: &Term) -> Option<&str> {
    match t {
        Term::Var { name, .. } => Some(name),
        _ => None,
    }
}

struct Compiler {
    next: usize,
    hyps: Vec<(SemStructure, SemType, N, usize)>,
}

impl Compiler {
    fn alloc(&mut self) -> usize {
        let i = self.next;
        self.next += 1;
        i
    }

    /// Compiles one closed premise conjunct (chart index `index`).
    fn compile(&mut self, f: &Formula) -> Option<Compiled> {
        let mut binders: Vec<(String, SemType)> = Vec::new();
        let mut ants_f: Vec<Formula> = Vec::new();
        let mut cur = f.clone();
        let head = loop {
            match cur {
                Formula::Forall(b, body) => {
                    let BinderKind::Meaning(ty) = b.kind else {
                        return None;
                    };
                    binders.push((b.name.clone(), ty));
                    cur = *body;
                }
                Formula::Limp(a, b) => {
                    ants_f.extend(a.conjuncts().into_iter().cloned());
                    cur = *b;
                }
                Formula::Tensor(..) => return None,
                Formula::Atom(a) => break a,
            }
        };
        let is_binder = |x: &str| binders.iter().any(|(b, _)| b == x);
        let mut taken: BTreeSet<String> = BTreeSet::new();
        let mut ants = Vec::new();
        for af in &ants_f {
            let ant = match af {
                Formula::Atom(a) => {
                    let (sem, ty, m) = atom_parts(a)?;
                    let slot = match var_name(m) {
                        Some(x) if is_binder(x) => {
                            if !taken.insert(x.to_string()) {
                                return None;
                            }
                            Slot::Var(x.to_string())
                        }
                        _ if m.is_closed() => Slot::Check(normal(&from_term(m))),
                        _ => return None,
                    };
                    Ant {
                        sem,
                        ty,
                        requires: 0,
                        abstracts: Vec::new(),
                        slot,
                    }
                }
                nested => {
                    let mut inner: Vec<(String, SemType)> = Vec::new();
                    let mut assumptions: Vec<Formula> = Vec::new();
                    let mut cur = nested.clone();
                    let nhead = loop {
                        match cur {
                            Formula::Forall(b, body) => {
                                let BinderKind::Meaning(ty) = b.kind else {
                                    return None;
                                };
                                inner.push((b.name.clone(), ty));
                                cur = *body;
                            }
                            Formula::Limp(a, b) => {
                                assumptions.extend(a.conjuncts().into_iter().cloned());
                                cur = *b;
                            }
                            Formula::Tensor(..) => return None,
                            Formula::Atom(a) => break a,
                        }
                    };
                    let renamed: Vec<(String, String, SemType)> = inner
                        .iter()
                        .map(|(x, ty)| (x.clone(), fresh(x), ty.clone()))
                        .collect();
                    let rename = |m: &Term| -> N {
                        let mut n = from_term(m);
                        for (x, y, ty) in &renamed {
                            n = subst(&n, x, &N::Var(y.clone(), ty.clone()));
                        }
                        n
                    };
                    let mut requires = 0u64;
                    let mut seen_inner = BTreeSet::new();
                    for a in &assumptions {
                        let Formula::Atom(a) = a else {
                            return None;
                        };
                        let (sem, ty, m) = atom_parts(a)?;
                        match var_name(m) {
                            Some(x) if inner.iter().any(|(y, _)| y == x) => {
                                if !seen_inner.insert(x.to_string()) {
                                    return None;
                                }
                            }
                            _ if m.is_closed() => {}
                            _ => return None,
                        }
                        let id = self.alloc();
                        requires |= 1 << id;
                        self.hyps.push((sem, ty, rename(m), id));
                    }
                    if seen_inner.len() != inner.len() {
                        return None;
                    }
                    let (sem, ty, m) = atom_parts(&nhead)?;
                    let (h, args) = m.spine();
                    let (slot, abstracts) = match var_name(h) {
                        Some(s) if is_binder(s) => {
                            if !taken.insert(s.to_string()) {
                                return None;
                            }
                            let mut abstracts = Vec::new();
                            for a in args {
                                let x = var_name(a)?;
                                let (_, y, ty) = renamed.iter().find(|(z, _, _)| z == x)?;
                                if abstracts.iter().any(|(z, _): &(String, SemType)| z == y) {
                                    return None;
                                }
                                abstracts.push((y.clone(), ty.clone()));
                            }
                            (Slot::Var(s.to_string()), abstracts)
                        }
                        _ if m.is_closed() => (Slot::Check(normal(&from_term(m))), Vec::new()),
                        _ => return None,
                    };
                    Ant {
                        sem,
                        ty,
                        requires,
                        abstracts,
                        slot,
                    }
                }
            };
            ants.push(ant);
        }
        let (sem, ty, m) = atom_parts(&head)?;
        let body = from_term(m);
        if !free_vars(&body).iter().all(|x| taken.contains(x)) {
            return None;
        }
        Some(Compiled {
            sem,
            ty,
            ants,
            body,
        })
    }
}

fn finish(c: &Compiled, filled: &[Option<N>]) -> N {
    let mut t = c.body.clone();
    let mut bindings: Vec<(String, N)> = Vec::new();
    for (ant, v) in c.ants.iter().zip(filled) {
        if let (Slot::Var(x), Some(v)) = (&ant.slot, v) {
            bindings.push((x.clone(), v.clone()));
        }
    }
    for (x, v) in bindings.iter().rev() {
        let ty = type_of(v, &mut Vec::new());
        t = app(lam(x, ty, t), v.clone());
    }
    normal(&t)
}

fn ground(f: &Formula, universe: &[SemStructure], out: &mut Vec<Formula>) {
    if let Formula::Forall(b, body) = f {
        if b.kind == BinderKind::Sem {
            for u in universe {
                ground(
                    &body.subst_sem(&b.name, &Sem::Node(u.clone())),
                    universe,
                    out,
                );
            }
            return;
        }
        let mut inner = Vec::new();
        ground(body, universe, &mut inner);
        out.extend(
            inner
                .into_iter()
                .map(|g| Formula::forall(b.name.clone(), b.kind.clone(), g)),
        );
        return;
    }
    out.push(f.clone());
}

/// Every reading of `goal`, normalized; `None` when a premise lies outside the fragment
/// the enumerator understands.
pub fn enumerate(premises: &PremiseSet, goal: &Goal) -> Option<Vec<Term>> {
    let mut universe = premises.universe();
    if !universe.contains(&goal.sem) {
        universe.push(goal.sem.clone());
    }
    let groundings: Vec<Vec<Formula>> = premises
        .iter()
        .map(|p| {
            let mut out = Vec::new();
            ground(&p.formula, &universe, &mut out);
            out
        })
        .collect();
    let mut results: Vec<N> = Vec::new();
    let mut choice = vec![0usize; groundings.len()];
    loop {
        let chosen: Vec<&Formula> = choice
            .iter()
            .zip(&groundings)
            .map(|(&i, g)| &g[i])
            .collect();
        for t in chart(&chosen, goal)? {
            if !results.iter().any(|r| alpha_eq(r, &t)) {
                results.push(t);
            }
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                let mut terms: Vec<Term> = results.iter().map(to_term).collect();
                terms.sort_by_cached_key(|t| t.to_string());
                return Some(terms);
            }
            choice[k] += 1;
            if choice[k] < groundings[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn chart(premises: &[&Formula], goal: &Goal) -> Option<Vec<N>> {
    let parts: Vec<&Formula> = premises.iter().flat_map(|f| f.conjuncts()).collect();
    let mut comp = Compiler {
        next: parts.len(),
        hyps: Vec::new(),
    };
    let mut funs = Vec::new();
    for f in &parts {
        funs.push(comp.compile(f)?);
    }
    let all = (1u64 << comp.next) - 1;
    let mut items: Vec<Item> = Vec::new();
    for (i, c) in funs.iter().enumerate() {
        items.push(Item {
            sem: c.sem.clone(),
            ty: c.ty.clone(),
            fun: Some(i),
            pending: (0..c.ants.len()).collect(),
            filled: vec![None; c.ants.len()],
            used: 1 << i,
            term: None,
        });
    }
    for (sem, ty, m, id) in &comp.hyps {
        items.push(Item {
            sem: sem.clone(),
            ty: ty.clone(),
            fun: None,
            pending: Vec::new(),
            filled: Vec::new(),
            used: 1 << id,
            term: Some(m.clone()),
        });
    }
    for it in items.iter_mut() {
        if let (Some(f), true) = (it.fun, it.pending.is_empty()) {
            it.term = Some(finish(&funs[f], &it.filled));
        }
    }
    let mut seen: BTreeSet<String> = items.iter().map(key).collect();
    let mut done = 0;
    while done < items.len() {
        let i = done;
        done += 1;
        let mut produced = Vec::new();
        for j in 0..=i {
            produced.extend(combine(&items[i], &items[j], &funs));
            produced.extend(combine(&items[j], &items[i], &funs));
        }
        for res in produced {
            if seen.insert(key(&res)) {
                items.push(res);
            }
        }
    }
    let mut out: Vec<N> = Vec::new();
    for it in &items {
        if it.pending.is_empty() && it.sem == goal.sem && it.ty == goal.ty && it.used == all {
            let t = it.term.clone().expect("atomic item has a meaning");
            if free_vars(&t).is_empty() && !out.iter().any(|o| alpha_eq(o, &t)) {
                out.push(t);
            }
        }
    }
    Some(out)
}

fn key(it: &Item) -> String {
    format!(
        "{:?}|{}|{}|{:?}|{:?}|{:?}|{:?}",
        it.fun, it.sem, it.ty, it.pending, it.used, it.filled, it.term
    )
}

fn combine(f: &Item, a: &Item, funs: &[Compiled]) -> Vec<Item> {
    let mut out = Vec::new();
    let Some(fi) = f.fun else {
        return out;
    };
    if f.pending.is_empty() || !a.pending.is_empty() || f.used & a.used != 0 {
        return out;
    }
    let c = &funs[fi];
    let arg = a.term.as_ref().expect("atomic item has a meaning");
    for (pos, &k) in f.pending.iter().enumerate() {
        let ant = &c.ants[k];
        if ant.sem != a.sem || ant.ty != a.ty || ant.requires & !a.used != 0 {
            continue;
        }
        let value = ant
            .abstracts
            .iter()
            .rev()
            .fold(arg.clone(), |acc, (x, ty)| lam(x, ty.clone(), acc));
        let value = normal(&value);
        if let Slot::Check(expected) = &ant.slot {
            if !alpha_eq(expected, &value) {
                continue;
            }
        }
        let mut it = f.clone();
        it.pending.remove(pos);
        it.filled[k] = Some(value);
        it.used |= a.used;
        if it.pending.is_empty() {
            it.term = Some(finish(c, &it.filled));
        }
        out.push(it);
    }
    out
}
