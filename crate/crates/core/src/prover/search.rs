//! Backward proof search with explicit resource threading.
//!
//! Goals are atoms `S ⤳_τ ?`: the meaning is an output. A goal is proved by focusing on an
//! unused resource whose conclusion matches `S` and `τ`, then proving its antecedents in
//! turn. An antecedent atom is proved as a goal and its meaning unified with the
//! antecedent's pattern; a nested antecedent `∀x. D ⊸ A` is proved by assuming `D` over a
//! fresh hypothesis constant, proving `A`, and unifying (pattern unification then
//! abstracts over the hypothesis).

use std::collections::BTreeSet;

use super::trace::{Rule, Source, Step};
use super::unify::Unifier;
use super::ProveError;
use crate::fstructure::SemStructure;
use crate::glue_core::{Atom, BinderKind, Formula, PremiseSet, Sem};
use crate::meaning::{SemType, Term};

/// An atom assumed without proof during a partial derivation.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Demand {
    pub sem: String,
    #[serde(rename = "type")]
    pub ty: String,
    /// Word whose constructor needed it (`goal` for the goal itself).
    pub required_by: String,
}

struct Resource {
    formula: Formula,
    source: Source,
    premise: usize,
    word: String,
}

#[derive(Debug, Clone)]
struct HypRes {
    id: usize,
    formula: Formula,
    used: bool,
    word: String,
}

#[derive(Debug, Clone)]
struct SemMeta {
    hint: String,
    value: Option<SemStructure>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum MetaKey {
    Sem(usize),
    Meaning(usize),
}

#[derive(Debug, Clone)]
pub(crate) struct State {
    used: Vec<bool>,
    hyps: Vec<HypRes>,
    unifier: Unifier,
    sems: Vec<SemMeta>,
    fresh: usize,
    assumed: usize,
    pub steps: Vec<Step>,
    pub demands: Vec<Demand>,
}

type Outcome = (State, Term, Source);

pub(crate) struct Engine {
    resources: Vec<Resource>,
    universe: Vec<SemStructure>,
    all_orders: bool,
    partial: bool,
    bound: usize,
}

/// A finished search branch.
pub(crate) struct Finished {
    pub state: State,
    pub meaning: Term,
    pub root: Source,
}

impl Finished {
    /// Per premise, whether every conjunct was consumed.
    pub fn consumed(&self, engine: &Engine, premises: usize) -> Vec<bool> {
        let mut out = vec![true; premises];
        for (r, used) in engine.resources.iter().zip(&self.state.used) {
            if !used {
                out[r.premise] = false;
            }
        }
        out
    }

    pub fn complete(&self) -> bool {
        self.state.used.iter().all(|&u| u) && self.state.demands.is_empty()
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

impl Engine {
    pub fn new(
        premises: &PremiseSet,
        goal_sem: &SemStructure,
        all_orders: bool,
        partial: bool,
        bound: usize,
    ) -> Engine {
        let mut resources = Vec::new();
        for (index, p) in premises.iter().enumerate() {
            let parts = p.formula.conjuncts();
            let split = parts.len() > 1;
            for (part, f) in parts.into_iter().enumerate() {
                let source = if split {
                    Source::Part {
                        index,
                        part,
                        word: p.word.clone(),
                    }
                } else {
                    Source::Premise {
                        index,
                        word: p.word.clone(),
                    }
                };
                resources.push(Resource {
                    formula: f.clone(),
                    source,
                    premise: index,
                    word: p.word.clone(),
                });
            }
        }
        let mut universe = premises.universe();
        if !universe.contains(goal_sem) {
            universe.push(goal_sem.clone());
        }
        Engine {
            resources,
            universe,
            all_orders,
            partial,
            bound,
        }
    }

    pub fn initial(&self) -> State {
        State {
            used: vec![false; self.resources.len()],
            hyps: Vec::new(),
            unifier: Unifier::new(),
            sems: Vec::new(),
            fresh: 0,
            assumed: 0,
            steps: Vec::new(),
            demands: Vec::new(),
        }
    }

    pub fn run(&self, goal: &SemStructure, ty: &SemType) -> Result<Vec<Finished>, ProveError> {
        let st = self.initial();
        let mut outcomes = self.prove_atom(&st, goal, ty, 0)?;
        if self.partial {
            let mut s = st.clone();
            s.demands.push(Demand {
                sem: goal.to_string(),
                ty: ty.to_string(),
                required_by: "goal".into(),
            });
            let placeholder = Term::constant(format!("?{goal}"), ty.clone());
            outcomes.push((s, placeholder, Source::Demand { demand: 0 }));
        }
        Ok(outcomes
            .into_iter()
            .map(|(state, meaning, root)| Finished {
                state,
                meaning,
                root,
            })
            .collect())
    }

    fn prove_atom(
        &self,
        st: &State,
        sem: &SemStructure,
        ty: &SemType,
        depth: usize,
    ) -> Result<Vec<Outcome>, ProveError> {
        if depth > self.bound {
            return Err(ProveError::BoundExceeded { bound: self.bound });
        }
        let mut out = Vec::new();
        for (r, res) in self.resources.iter().enumerate() {
            if st.used[r] {
                continue;
            }
            let mut s = st.clone();
            s.used[r] = true;
            out.extend(self.focus(s, &res.formula, &res.source, &res.word, sem, ty, depth)?);
        }
        for k in 0..st.hyps.len() {
            if st.hyps[k].used {
                continue;
            }
            let mut s = st.clone();
            s.hyps[k].used = true;
            let h = &st.hyps[k];
            let source = Source::Hyp {
                id: h.id,
                formula: self.show(&s, &h.formula),
            };
            out.extend(self.focus(s, &h.formula, &source, &h.word, sem, ty, depth)?);
        }
        Ok(out)
    }

    /// Uses `formula` (already marked as consumed in `st`) to prove `sem ⤳_ty ?`.
    #[allow(clippy::too_many_arguments)]
    fn focus(
        &self,
        mut st: State,
        formula: &Formula,
        source: &Source,
        word: &str,
        sem: &SemStructure,
        ty: &SemType,
        depth: usize,
    ) -> Result<Vec<Outcome>, ProveError> {
        let mut keys = Vec::new();
        let mut ants: Vec<Formula> = Vec::new();
        let mut f = formula.clone();
        let head = loop {
            match f {
                Formula::Forall(b, body) => {
                    f = match &b.kind {
                        BinderKind::Meaning(bty) => {
                            let m = st.unifier.fresh(&b.name, bty.clone(), st.fresh);
                            if let Term::Meta { id, .. } = &m {
                                keys.push(MetaKey::Meaning(*id));
                            }
                            body.subst_meaning(&b.name, &m)
                        }
                        BinderKind::Sem => {
                            st.sems.push(SemMeta {
                                hint: b.name.clone(),
                                value: None,
                            });
                            keys.push(MetaKey::Sem(st.sems.len() - 1));
                            body.subst_sem(&b.name, &Sem::Meta(st.sems.len() - 1))
                        }
                    };
                }
                Formula::Limp(a, b) => {
                    ants.extend(a.conjuncts().into_iter().cloned());
                    f = *b;
                }
                Formula::Tensor(..) => {
                    return Err(ProveError::Unsupported {
                        formula: formula.to_string(),
                        reason: "a tensor may not be the conclusion of an implication".into(),
                    })
                }
                Formula::Atom(a) => break a,
            }
        };
        if head.ty != *ty {
            return Ok(Vec::new());
        }
        match self.sem_of(&st, &head.sem, formula)? {
            Ok(s) if s == *sem => {}
            Ok(_) => return Ok(Vec::new()),
            Err(k) => st.sems[k].value = Some(sem.clone()),
        }
        let orders = if self.all_orders && ants.len() > 1 {
            permutations(ants.len())
        } else {
            vec![(0..ants.len()).collect()]
        };
        let mut out = Vec::new();
        for order in orders {
            let mut frontier = vec![(st.clone(), source.clone(), BTreeSet::new())];
            for (pos, &k) in order.iter().enumerate() {
                let mut next = Vec::new();
                for (s, fsrc, reported) in frontier {
                    for (mut s2, asrc) in self.prove_antecedent(&s, &ants[k], depth, word)? {
                        let mut reported: BTreeSet<MetaKey> = reported.clone();
                        let bindings = self.new_bindings(&s2, &keys, &mut reported);
                        let rest: Vec<&Formula> =
                            order[pos + 1..].iter().map(|&j| &ants[j]).collect();
                        let conclusion = self.show_clause(&s2, &keys, &rest, &head);
                        s2.steps.push(Step {
                            rule: Rule::ImpElim,
                            inputs: vec![fsrc.clone(), asrc],
                            bindings,
                            discharges: Vec::new(),
                            conclusion,
                        });
                        let src = Source::Step {
                            step: s2.steps.len() - 1,
                        };
                        next.push((s2, src, reported));
                    }
                }
                frontier = next;
            }
            for (s, src, _) in frontier {
                let meaning = s.unifier.resolve(&head.meaning);
                if !self.partial && meaning.has_metas() {
                    return Err(ProveError::UndeterminedMeaning {
                        formula: formula.to_string(),
                    });
                }
                out.push((s, meaning, src));
            }
        }
        Ok(out)
    }

    /// `Ok(structure)` when determined, `Err(meta)` for an unsolved semantic-structure
    /// variable.
    fn sem_of(
        &self,
        st: &State,
        sem: &Sem,
        formula: &Formula,
    ) -> Result<Result<SemStructure, usize>, ProveError> {
        match sem {
            Sem::Node(s) => Ok(Ok(s.clone())),
            Sem::Meta(k) => Ok(match &st.sems[*k].value {
                Some(s) => Ok(s.clone()),
                None => Err(*k),
            }),
            Sem::Var(_) | Sem::Path(_) => Err(ProveError::Unsupported {
                formula: formula.to_string(),
                reason: "premises must be closed formulas".into(),
            }),
        }
    }

    /// The structures an atom's semantic side may denote, binding it if it is a variable.
    fn candidates(
        &self,
        st: &State,
        sem: &Sem,
        formula: &Formula,
    ) -> Result<Vec<(State, SemStructure)>, ProveError> {
        Ok(match self.sem_of(st, sem, formula)? {
            Ok(s) => vec![(st.clone(), s)],
            Err(k) => self
                .universe
                .iter()
                .map(|u| {
                    let mut s = st.clone();
                    s.sems[k].value = Some(u.clone());
                    (s, u.clone())
                })
                .collect(),
        })
    }

    /// Assumes an antecedent without proof, recording it as an unsatisfied demand.
    fn demand(
        &self,
        st: &State,
        sem: &Sem,
        ty: &SemType,
        formula: &Formula,
        owner: &str,
    ) -> Result<(State, Source), ProveError> {
        let mut d = st.clone();
        let sem = match self.sem_of(st, sem, formula)? {
            Ok(n) => n.to_string(),
            Err(_) => "?".to_string(),
        };
        d.demands.push(Demand {
            sem,
            ty: ty.to_string(),
            required_by: owner.to_string(),
        });
        let source = Source::Demand {
            demand: d.demands.len() - 1,
        };
        Ok((d, source))
    }

    fn prove_antecedent(
        &self,
        st: &State,
        ant: &Formula,
        depth: usize,
        owner: &str,
    ) -> Result<Vec<(State, Source)>, ProveError> {
        let mut out = Vec::new();
        if let Formula::Atom(a) = ant {
            for (s, node) in self.candidates(st, &a.sem, ant)? {
                for (mut s2, m, src) in self.prove_atom(&s, &node, &a.ty, depth + 1)? {
                    if self.unify(&mut s2, &a.meaning, &m)? {
                        out.push((s2, src));
                    }
                }
            }
            if self.partial {
                out.push(self.demand(st, &a.sem, &a.ty, ant, owner)?);
            }
            return Ok(out);
        }
        let mut s = st.clone();
        let mut consts = Vec::new();
        let mut assumptions = Vec::new();
        let mut f = ant.clone();
        let head = loop {
            match f {
                Formula::Forall(b, body) => match &b.kind {
                    BinderKind::Meaning(ty) => {
                        let c = Term::Hyp {
                            id: s.fresh,
                            hint: b.name.clone(),
                            ty: ty.clone(),
                        };
                        consts.push(s.fresh);
                        s.fresh += 1;
                        f = body.subst_meaning(&b.name, &c);
                    }
                    BinderKind::Sem => {
                        return Err(ProveError::Unsupported {
                            formula: ant.to_string(),
                            reason: "semantic-structure quantifiers in negative position".into(),
                        })
                    }
                },
                Formula::Limp(a, b) => {
                    assumptions.extend(a.conjuncts().into_iter().cloned());
                    f = *b;
                }
                Formula::Tensor(..) => {
                    return Err(ProveError::Unsupported {
                        formula: ant.to_string(),
                        reason: "a tensor may not be the conclusion of an implication".into(),
                    })
                }
                Formula::Atom(a) => break a,
            }
        };
        if self.partial {
            out.push(self.demand(st, &head.sem, &head.ty, ant, owner)?);
        }
        let base = s.hyps.len();
        for d in &assumptions {
            s.hyps.push(HypRes {
                id: s.assumed,
                formula: d.clone(),
                used: false,
                word: owner.to_string(),
            });
            s.assumed += 1;
        }
        for (s1, node) in self.candidates(&s, &head.sem, ant)? {
            for (mut s2, m, src) in self.prove_atom(&s1, &node, &head.ty, depth + 1)? {
                if !s2.hyps[base..].iter().all(|h| h.used) {
                    continue;
                }
                let discharged: Vec<usize> = s2.hyps[base..].iter().map(|h| h.id).collect();
                s2.hyps.truncate(base);
                let conclusion = self.show_discharge(&s2, &consts, &assumptions, &node, &head, &m);
                s2.steps.push(Step {
                    rule: Rule::ImpIntro,
                    inputs: vec![src],
                    bindings: Vec::new(),
                    discharges: discharged,
                    conclusion,
                });
                let isrc = Source::Step {
                    step: s2.steps.len() - 1,
                };
                if !self.unify(&mut s2, &head.meaning, &m)? {
                    continue;
                }
                if self.escapes(&s2, &consts) {
                    continue;
                }
                out.push((s2, isrc));
            }
        }
        Ok(out)
    }

    fn unify(&self, st: &mut State, pattern: &Term, m: &Term) -> Result<bool, ProveError> {
        st.unifier
            .unify(pattern, m)
            .map_err(|e| ProveError::OutsidePatternFragment {
                pattern: e.to_string(),
            })
    }

    /// Whether a hypothesis constant leaked into a variable created before it.
    fn escapes(&self, st: &State, consts: &[usize]) -> bool {
        let Some(&first) = consts.iter().min() else {
            return false;
        };
        st.unifier.ids().any(|id| {
            st.unifier.scope(id) <= first && st.unifier.is_bound(id) && {
                let v = st.unifier.resolve(&Term::Meta {
                    id,
                    hint: String::new(),
                    ty: st.unifier.ty(id).clone(),
                });
                consts.iter().any(|c| v.mentions_hyp(*c))
            }
        })
    }

    fn new_bindings(
        &self,
        st: &State,
        keys: &[MetaKey],
        reported: &mut BTreeSet<MetaKey>,
    ) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut ordered: Vec<MetaKey> = keys.to_vec();
        ordered.sort_by_key(|k| matches!(k, MetaKey::Meaning(_)));
        for k in ordered {
            if reported.contains(&k) {
                continue;
            }
            match k {
                MetaKey::Sem(i) => {
                    if let Some(v) = &st.sems[i].value {
                        out.push((st.sems[i].hint.clone(), v.to_string()));
                        reported.insert(k);
                    }
                }
                MetaKey::Meaning(id) => {
                    if st.unifier.is_bound(id) {
                        let v = st.unifier.resolve(&Term::Meta {
                            id,
                            hint: String::new(),
                            ty: st.unifier.ty(id).clone(),
                        });
                        out.push((st.unifier.hint(id).to_string(), v.to_string()));
                        reported.insert(k);
                    }
                }
            }
        }
        out
    }

    /// Resolves solved variables and re-quantifies unsolved ones under their own names.
    fn present(&self, st: &State, keys: &[MetaKey], f: &Formula) -> Formula {
        let mut body = f.map_atoms(&mut |a| {
            let sem = match &a.sem {
                Sem::Meta(k) => match &st.sems[*k].value {
                    Some(v) => Sem::Node(v.clone()),
                    None => Sem::Var(st.sems[*k].hint.clone()),
                },
                s => s.clone(),
            };
            let meaning = st
                .unifier
                .resolve(&a.meaning)
                .map_leaves(&mut |t, _| match t {
                    Term::Meta { id, ty, .. } => Some(Term::var(st.unifier.hint(*id), ty.clone())),
                    Term::Hyp { hint, ty, .. } => Some(Term::var(hint.clone(), ty.clone())),
                    _ => None,
                });
            Atom {
                sem,
                meaning,
                ..a.clone()
            }
        });
        for k in keys.iter().rev() {
            let (name, kind) = match *k {
                MetaKey::Sem(i) if st.sems[i].value.is_none() => {
                    (st.sems[i].hint.clone(), BinderKind::Sem)
                }
                MetaKey::Meaning(id) if !st.unifier.is_bound(id) => (
                    st.unifier.hint(id).to_string(),
                    BinderKind::Meaning(st.unifier.ty(id).clone()),
                ),
                _ => continue,
            };
            let mentioned = body.free_names().contains(&name);
            if mentioned {
                body = Formula::forall(name, kind, body);
            }
        }
        body
    }

    fn show(&self, st: &State, f: &Formula) -> String {
        self.present(st, &[], f).to_string()
    }

    fn show_clause(&self, st: &State, keys: &[MetaKey], rest: &[&Formula], head: &Atom) -> String {
        let f = rest
            .iter()
            .rev()
            .fold(Formula::Atom(head.clone()), |acc, a| {
                Formula::limp((*a).clone(), acc)
            });
        self.present(st, keys, &f).to_string()
    }

    fn show_discharge(
        &self,
        st: &State,
        consts: &[usize],
        assumptions: &[Formula],
        node: &SemStructure,
        head: &Atom,
        m: &Term,
    ) -> String {
        let concl = Formula::Atom(Atom {
            sem: Sem::Node(node.clone()),
            meaning: m.clone(),
            ..head.clone()
        });
        let f = assumptions
            .iter()
            .rev()
            .fold(concl, |acc, a| Formula::limp(a.clone(), acc));
        let mut f = self.present(st, &[], &f);
        let mut hyps: Vec<(String, SemType)> = Vec::new();
        let mut collect = |t: &Term| {
            t.any_leaf(&mut |l| {
                if let Term::Hyp { id, hint, ty } = l {
                    if consts.contains(id) && !hyps.iter().any(|(h, _)| h == hint) {
                        hyps.push((hint.clone(), ty.clone()));
                    }
                }
                false
            });
        };
        for a in assumptions {
            for at in a.atoms() {
                collect(&at.meaning);
            }
        }
        collect(m);
        for (name, ty) in hyps.into_iter().rev() {
            f = Formula::forall(name, BinderKind::Meaning(ty), f);
        }
        f.to_string()
    }
}
