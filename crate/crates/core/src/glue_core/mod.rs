//! Glue formulas, lexicon templates, and their instantiation into premises.

mod formula;
mod lexicon;
mod parse;

pub use formula::{Atom, Binder, BinderKind, Formula, PathExpr, Sem};
pub use lexicon::{instantiate, parse_lexicon, premises, LexicalEntry, Lexicon};
pub use parse::parse_formula;

use crate::fstructure::SemStructure;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GlueError {
    #[error("entry `{word}` is uninstantiable at f-structure {node}: {reason}")]
    Uninstantiable {
        word: String,
        node: String,
        /// The attribute that could not be followed, when one is to blame.
        attr: Option<String>,
        reason: String,
    },
    #[error("no lexicon entry for `{key}` (PRED of f-structure {node})")]
    MissingEntry { key: String, node: String },
}

/// A closed formula together with the word that contributed it.
#[derive(Debug, Clone, PartialEq)]
pub struct Premise {
    pub formula: Formula,
    pub word: String,
    /// Label of the f-structure the word heads, when known.
    pub node: Option<String>,
}

impl Premise {
    pub fn new(word: impl Into<String>, formula: Formula) -> Self {
        Premise {
            formula,
            word: word.into(),
            node: None,
        }
    }
}

/// A multiset of premises: equal formulas from different words stay distinct.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PremiseSet {
    premises: Vec<Premise>,
    universe: Vec<SemStructure>,
}

impl PremiseSet {
    pub fn new(premises: Vec<Premise>) -> Self {
        PremiseSet {
            premises,
            universe: Vec::new(),
        }
    }

    /// Premises named `p0`, `p1`, ... after their position.
    pub fn from_formulas(formulas: impl IntoIterator<Item = Formula>) -> Self {
        Self::new(
            formulas
                .into_iter()
                .enumerate()
                .map(|(i, f)| Premise::new(format!("p{i}"), f))
                .collect(),
        )
    }

    /// Declares the semantic structures of the analysis (the range of semantic-structure
    /// quantifiers). Structures mentioned by premises are always included.
    pub fn with_universe(mut self, universe: Vec<SemStructure>) -> Self {
        self.universe = universe;
        self
    }

    pub fn push(&mut self, premise: Premise) {
        self.premises.push(premise);
    }

    pub fn len(&self) -> usize {
        self.premises.len()
    }

    pub fn is_empty(&self) -> bool {
        self.premises.is_empty()
    }

    pub fn get(&self, i: usize) -> &Premise {
        &self.premises[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Premise> {
        self.premises.iter()
    }

    /// Declared universe followed by any other structures the premises mention.
    pub fn universe(&self) -> Vec<SemStructure> {
        let mut out = self.universe.clone();
        for p in &self.premises {
            for s in p.formula.sem_structures() {
                if !out.contains(&s) {
                    out.push(s);
                }
            }
        }
        out
    }

    /// The same multiset listed in the order `order` (a permutation of indices).
    pub fn permuted(&self, order: &[usize]) -> PremiseSet {
        assert_eq!(order.len(), self.len(), "not a permutation");
        PremiseSet {
            premises: order.iter().map(|&i| self.premises[i].clone()).collect(),
            universe: self.universe.clone(),
        }
    }

    /// Total connective count, the basis of the search bound.
    pub fn connectives(&self) -> usize {
        self.premises.iter().map(|p| p.formula.connectives()).sum()
    }
}

impl<'a> IntoIterator for &'a PremiseSet {
    type Item = &'a Premise;
    type IntoIter = std::slice::Iter<'a, Premise>;

    fn into_iter(self) -> Self::IntoIter {
        self.premises.iter()
    }
}
