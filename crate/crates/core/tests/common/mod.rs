#![allow(dead_code)]

pub mod mixes;
pub mod oracle;
pub mod terms;

use std::path::PathBuf;

use glue::fstructure::FStructure;
use glue::glue_core::{premises, Lexicon, PremiseSet};
use glue::prover::{derive, derive_with, DeriveOptions, Goal, Reading};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

/// The f-structure and lexicon of a golden analysis.
pub fn analysis(fs: &str, lex: &str) -> (FStructure, Lexicon) {
    let fs = FStructure::parse(&read_fixture(&format!("{fs}.fs"))).unwrap();
    let lex = Lexicon::parse(&read_fixture(&format!("{lex}.lex"))).unwrap();
    (fs, lex)
}

pub fn golden_premises(name: &str) -> (PremiseSet, Goal, Lexicon) {
    let (fs, lex) = analysis(name, name);
    (premises(&fs, &lex).unwrap(), Goal::root(&fs), lex)
}

pub fn readings(premises: &PremiseSet, goal: &Goal) -> Vec<String> {
    derive(premises, goal)
        .unwrap()
        .iter()
        .map(|r| r.meaning.to_string())
        .collect()
}

pub fn all_traces(premises: &PremiseSet, goal: &Goal) -> Vec<Reading> {
    let opts = DeriveOptions {
        all_traces: true,
        ..Default::default()
    };
    derive_with(premises, goal, &opts).unwrap()
}

pub const GOLDENS: [&str; 4] = ["bahafs", "obviously", "everyone", "every-candidate"];

use glue::glue_core::Formula;

/// Rewrites `∀vs. A ⊗ B ⊸ C` as `∀vs. A ⊸ B ⊸ C` (or `B ⊸ A ⊸ C` when `swap`).
pub fn curry(f: &Formula, swap: bool) -> Option<Formula> {
    match f {
        Formula::Forall(b, body) => {
            curry(body, swap).map(|c| Formula::forall(b.name.clone(), b.kind.clone(), c))
        }
        Formula::Limp(a, c) => match a.as_ref() {
            Formula::Tensor(x, y) => {
                let (x, y) = if swap { (y, x) } else { (x, y) };
                Some(Formula::limp(
                    (**x).clone(),
                    Formula::limp((**y).clone(), (**c).clone()),
                ))
            }
            _ => None,
        },
        _ => None,
    }
}

/// Printed reading sets of `premises` with every tensor premise curried one way.
pub fn curried_variants(premises: &PremiseSet) -> Vec<PremiseSet> {
    let mut out = Vec::new();
    for swap in [false, true] {
        let mut changed = false;
        let mut ps = PremiseSet::new(Vec::new()).with_universe(premises.universe());
        for p in premises {
            let mut p = p.clone();
            if let Some(c) = curry(&p.formula, swap) {
                p.formula = c;
                changed = true;
            }
            ps.push(p);
        }
        if changed {
            out.push(ps);
        }
    }
    out
}

/// Whether two reading lists hold the same terms up to α-equivalence, in any order.
pub fn same_meanings(a: &[Reading], b: &[Reading]) -> bool {
    a.len() == b.len()
        && a.iter().all(|r| b.iter().any(|s| s.meaning == r.meaning))
        && b.iter().all(|r| a.iter().any(|s| s.meaning == r.meaning))
}
