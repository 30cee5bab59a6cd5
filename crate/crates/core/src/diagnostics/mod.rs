//! Classification of failed derivations as incomplete, incoherent, or both.
//!
//! Evidence comes from maximal partial derivations: those consuming the most premises,
//! and among them those assuming the fewest unsupplied atoms. Atoms a maximal derivation
//! had to assume are unsatisfied demands (incompleteness); premises it left unused are
//! leftover resources (incoherence). Ties contribute the union of their evidence.

use std::fmt;

use serde::Serialize;

use crate::fstructure::FStructure;
use crate::glue_core::{premises, GlueError, Lexicon, PremiseSet};
use crate::prover::{derive, partial_derivations, Demand, Goal, ProveError, Reading};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "ok")]
    Ok,
    #[serde(rename = "incomplete")]
    Incomplete,
    #[serde(rename = "incoherent")]
    Incoherent,
    #[serde(rename = "incomplete+incoherent")]
    IncompleteIncoherent,
    #[serde(rename = "uninstantiable")]
    Uninstantiable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "ok",
            Status::Incomplete => "incomplete",
            Status::Incoherent => "incoherent",
            Status::IncompleteIncoherent => "incomplete+incoherent",
            Status::Uninstantiable => "uninstantiable",
        })
    }
}

/// A premise no maximal derivation could use.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Leftover {
    pub index: usize,
    pub word: String,
    pub formula: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnosis {
    pub status: Status,
    pub unsatisfied_demands: Vec<Demand>,
    pub leftover_resources: Vec<Leftover>,
    #[serde(skip)]
    pub readings: Vec<Reading>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Diagnosis {
    fn ok(readings: Vec<Reading>) -> Self {
        Diagnosis {
            status: Status::Ok,
            unsatisfied_demands: Vec::new(),
            leftover_resources: Vec::new(),
            readings,
            detail: None,
        }
    }

    /// Human-readable summary, one item per line.
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!("status: {}", self.status)];
        if let Some(d) = &self.detail {
            out.push(format!("  {d}"));
        }
        for d in &self.unsatisfied_demands {
            out.push(format!(
                "  unsatisfied demand: {} ⤳_{} (required by {})",
                d.sem, d.ty, d.required_by
            ));
        }
        for l in &self.leftover_resources {
            out.push(format!(
                "  leftover resource: {}#{}: {}",
                l.word, l.index, l.formula
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagnoseError {
    #[error(transparent)]
    Glue(#[from] GlueError),
    #[error(transparent)]
    Prove(#[from] ProveError),
}

/// Instantiates the lexicon against `fs` and classifies the result.
///
/// A missing lexicon entry is an error; an entry whose paths cannot be followed yields
/// status `uninstantiable`.
pub fn diagnose(
    fs: &FStructure,
    lexicon: &Lexicon,
    goal: &Goal,
) -> Result<Diagnosis, DiagnoseError> {
    let premises = match premises(fs, lexicon) {
        Ok(p) => p,
        Err(e @ GlueError::Uninstantiable { .. }) => {
            return Ok(Diagnosis {
                status: Status::Uninstantiable,
                unsatisfied_demands: Vec::new(),
                leftover_resources: Vec::new(),
                readings: Vec::new(),
                detail: Some(e.to_string()),
            })
        }
        Err(e) => return Err(e.into()),
    };
    Ok(diagnose_premises(&premises, goal)?)
}

pub fn diagnose_premises(premises: &PremiseSet, goal: &Goal) -> Result<Diagnosis, ProveError> {
    let readings = derive(premises, goal)?;
    if !readings.is_empty() {
        return Ok(Diagnosis::ok(readings));
    }
    let partial = partial_derivations(premises, goal)?;
    let most = partial
        .iter()
        .map(|p| p.consumed_count())
        .max()
        .unwrap_or(0);
    let fewest = partial
        .iter()
        .filter(|p| p.consumed_count() == most)
        .map(|p| p.demands.len())
        .min()
        .unwrap_or(0);
    let mut demands: Vec<Demand> = Vec::new();
    let mut leftover = vec![false; premises.len()];
    for p in partial
        .iter()
        .filter(|p| p.consumed_count() == most && p.demands.len() == fewest)
    {
        for d in &p.demands {
            if !demands.contains(d) {
                demands.push(d.clone());
            }
        }
        for (i, c) in p.consumed.iter().enumerate() {
            leftover[i] |= !c;
        }
    }
    let leftover: Vec<Leftover> = leftover
        .iter()
        .enumerate()
        .filter(|(_, &l)| l)
        .map(|(i, _)| {
            let p = premises.get(i);
            Leftover {
                index: i,
                word: p.word.clone(),
                formula: p.formula.to_string(),
            }
        })
        .collect();
    if demands.is_empty() && leftover.is_empty() {
        demands.push(Demand {
            sem: goal.sem.to_string(),
            ty: goal.ty.to_string(),
            required_by: "goal".into(),
        });
    }
    let status = match (demands.is_empty(), leftover.is_empty()) {
        (false, true) => Status::Incomplete,
        (true, false) => Status::Incoherent,
        _ => Status::IncompleteIncoherent,
    };
    Ok(Diagnosis {
        status,
        unsatisfied_demands: demands,
        leftover_resources: leftover,
        readings: Vec::new(),
        detail: None,
    })
}
