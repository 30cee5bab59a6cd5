//! Linear-logic proof search over premise sets.

mod entails;
mod search;
mod trace;
mod unify;

use std::fmt;

pub use entails::entails;
pub use search::Demand;
pub use trace::{Rule, Source, Step, Trace};
pub use unify::{unify, Substitution, Unifier, UnifyError};

use crate::fstructure::{FStructure, SemStructure};
use crate::glue_core::PremiseSet;
use crate::meaning::{SemType, Term};
use crate::ParseError;
use search::Engine;

/// What to derive: a meaning of type `ty` for semantic structure `sem`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Goal {
    pub sem: SemStructure,
    pub ty: SemType,
}

impl Goal {
    pub fn new(sem: SemStructure, ty: SemType) -> Self {
        Goal { sem, ty }
    }

    /// `root_σ ⤳_t ?`
    pub fn root(fs: &FStructure) -> Self {
        Goal::new(fs.sigma(fs.root()), SemType::T)
    }

    /// `label` or `label:type`; a trailing `_σ`/`_sigma` on the label is ignored.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let (label, ty) = match text.split_once(':') {
            Some((l, t)) => (l.trim(), SemType::parse(t)?),
            None => (text.trim(), SemType::T),
        };
        let label = label
            .strip_suffix("_σ")
            .or_else(|| label.strip_suffix("_sigma"))
            .unwrap_or(label);
        let ok = !label.is_empty()
            && label
                .chars()
                .all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '\'');
        if !ok {
            return Err(ParseError::new(1, 1, format!("bad goal label `{label}`")));
        }
        Ok(Goal::new(SemStructure::new(label), ty))
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.sem, self.ty)
    }
}

/// One derivable meaning together with a derivation of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reading {
    pub meaning: Term,
    pub ty: SemType,
    pub trace: Trace,
    /// Every distinct derivation found (only filled with `all_traces`).
    pub traces: Vec<Trace>,
}

#[derive(Debug, Clone, Default)]
pub struct DeriveOptions {
    /// Explore every antecedent order and keep all distinct derivations per reading.
    pub all_traces: bool,
    /// Override the depth bound (defaults to the premise set's size).
    pub max_depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProveError {
    #[error("derivation depth bound {bound} exceeded")]
    BoundExceeded { bound: usize },
    #[error("{pattern}")]
    OutsidePatternFragment { pattern: String },
    #[error("unsupported premise `{formula}`: {reason}")]
    Unsupported { formula: String, reason: String },
    #[error("premise `{formula}` leaves its meaning undetermined")]
    UndeterminedMeaning { formula: String },
}

/// The default depth bound: no derivation nests deeper than the number of resources it
/// can consume, which the connective and premise counts bound from above.
pub fn depth_bound(premises: &PremiseSet) -> usize {
    premises.connectives() + premises.len() + 1
}

fn check_closed(premises: &PremiseSet) -> Result<(), ProveError> {
    for p in premises {
        if !p.formula.is_closed() {
            return Err(ProveError::Unsupported {
                formula: p.formula.to_string(),
                reason: "premises must be closed formulas".into(),
            });
        }
    }
    Ok(())
}

/// All readings of `goal` using every premise exactly once, sorted by printed form.
///
/// ```
/// use glue::glue_core::{parse_formula, PremiseSet};
/// use glue::meaning::Signature;
/// use glue::prover::{derive, Goal};
///
/// let sig = Signature::from_decls(&[("Bill", "e"), ("arrive", "e -> t")]).unwrap();
/// let premises = PremiseSet::from_formulas([
///     parse_formula("g ~> Bill", &sig).unwrap(),
///     parse_formula("forall X:e. g ~> X -o f ~> arrive(X)", &sig).unwrap(),
/// ]);
/// let readings = derive(&premises, &Goal::parse("f").unwrap()).unwrap();
/// assert_eq!(readings[0].meaning.to_string(), "arrive(Bill)");
/// ```
pub fn derive(premises: &PremiseSet, goal: &Goal) -> Result<Vec<Reading>, ProveError> {
    derive_with(premises, goal, &DeriveOptions::default())
}

pub fn derive_with(
    premises: &PremiseSet,
    goal: &Goal,
    opts: &DeriveOptions,
) -> Result<Vec<Reading>, ProveError> {
    check_closed(premises)?;
    let bound = opts.max_depth.unwrap_or_else(|| depth_bound(premises));
    let engine = Engine::new(premises, &goal.sem, opts.all_traces, false, bound);
    let mut readings: Vec<Reading> = Vec::new();
    for done in engine.run(&goal.sem, &goal.ty)? {
        if !done.complete() || done.meaning.has_hyps() {
            continue;
        }
        let trace = Trace {
            steps: done.state.steps,
            root: done.root,
        };
        match readings.iter_mut().find(|r| r.meaning == done.meaning) {
            Some(r) => {
                if opts.all_traces && !r.traces.iter().any(|t| t.lines() == trace.lines()) {
                    r.traces.push(trace);
                }
            }
            None => readings.push(Reading {
                meaning: done.meaning,
                ty: goal.ty.clone(),
                traces: if opts.all_traces {
                    vec![trace.clone()]
                } else {
                    Vec::new()
                },
                trace,
            }),
        }
    }
    readings.sort_by_cached_key(|r| r.meaning.to_string());
    Ok(readings)
}

/// A derivation that may leave premises unused and assume atoms nothing supplies.
#[derive(Debug, Clone)]
pub struct PartialDerivation {
    /// Per premise, whether all of it was consumed.
    pub consumed: Vec<bool>,
    pub demands: Vec<Demand>,
    pub meaning: Term,
}

impl PartialDerivation {
    pub fn consumed_count(&self) -> usize {
        self.consumed.iter().filter(|&&c| c).count()
    }
}

/// Every partial derivation of `goal`. Complete derivations are included (no demands,
/// everything consumed).
pub fn partial_derivations(
    premises: &PremiseSet,
    goal: &Goal,
) -> Result<Vec<PartialDerivation>, ProveError> {
    check_closed(premises)?;
    let engine = Engine::new(premises, &goal.sem, false, true, depth_bound(premises));
    Ok(engine
        .run(&goal.sem, &goal.ty)?
        .into_iter()
        .map(|done| PartialDerivation {
            consumed: done.consumed(&engine, premises.len()),
            demands: done.state.demands.clone(),
            meaning: done.meaning,
        })
        .collect())
}
