//! The meaning language: simply-typed lambda terms over typed constants.

mod normalize;
mod parse;
mod print;
mod term;
mod types;

use std::collections::BTreeMap;

pub use normalize::{equivalent, normalize};
pub use parse::{parse_term, parse_term_in};
pub use term::{typecheck, Env, Term, TypeError};
pub use types::SemType;

pub(crate) use normalize::{beta, eta_contract_head};
pub(crate) use parse::{elaborate, parse_raw};
pub(crate) use types::{parse_type, parse_type_atom};

use crate::syntax::ParseError;

/// Typed constants available to meaning terms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    consts: BTreeMap<String, SemType>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares `name : ty`. Redeclaring a constant at a different type is an error.
    pub fn declare(&mut self, name: impl Into<String>, ty: SemType) -> Result<(), String> {
        let name = name.into();
        match self.consts.get(&name) {
            Some(old) if *old != ty => Err(format!(
                "constant `{name}` declared as {old} and again as {ty}"
            )),
            _ => {
                self.consts.insert(name, ty);
                Ok(())
            }
        }
    }

    pub fn get(&self, name: &str) -> Option<&SemType> {
        self.consts.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &SemType)> {
        self.consts.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Convenience constructor from `(name, type-text)` pairs.
    pub fn from_decls(decls: &[(&str, &str)]) -> Result<Self, ParseError> {
        let mut sig = Signature::new();
        for (name, ty) in decls {
            let ty = SemType::parse(ty)?;
            sig.declare(*name, ty)
                .map_err(|m| ParseError::new(1, 1, m))?;
        }
        Ok(sig)
    }
}
