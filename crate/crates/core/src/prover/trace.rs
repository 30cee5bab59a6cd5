use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::glue_core::PremiseSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// Implication elimination: a function consumes one argument.
    #[serde(rename = "⊸E")]
    ImpElim,
    /// Implication introduction: hypotheses are discharged.
    #[serde(rename = "⊸I")]
    ImpIntro,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::ImpElim => "⊸E",
            Rule::ImpIntro => "⊸I",
        })
    }
}

/// Where an inference's input comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    Premise {
        index: usize,
        word: String,
    },
    /// One conjunct of a tensor premise.
    Part {
        index: usize,
        part: usize,
        word: String,
    },
    /// A hypothesis, e.g. `h1:[h_σ ⤳ x]`.
    Hyp {
        id: usize,
        formula: String,
    },
    /// The conclusion of an earlier step (0-based).
    Step {
        step: usize,
    },
    /// An atom assumed without proof (partial derivations only).
    Demand {
        demand: usize,
    },
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Premise { index, word } => write!(f, "{word}#{index}"),
            Source::Part { index, part, word } => write!(f, "{word}#{index}.{part}"),
            Source::Hyp { id, formula } => write!(f, "h{}:[{formula}]", id + 1),
            Source::Step { step } => write!(f, "s{}", step + 1),
            Source::Demand { demand } => write!(f, "demand{}", demand + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub rule: Rule,
    pub inputs: Vec<Source>,
    /// Variable instantiations made by this step, e.g. `("X", "Bill")`.
    pub bindings: Vec<(String, String)>,
    /// Hypotheses discharged (implication introduction only).
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub discharges: Vec<usize>,
    pub conclusion: String,
}

/// A derivation: steps in the order they were completed, and the source of the final
/// conclusion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub steps: Vec<Step>,
    pub root: Source,
}

impl Trace {
    /// One line per inference, e.g.
    /// `s1  ⊸E  appointed#0 bill#1  X ↦ Bill  ⊢ ∀Y:e. h_σ ⤳ Y ⊸ f_σ ⤳ appoint(Bill,Y)`.
    pub fn lines(&self) -> Vec<String> {
        if self.steps.is_empty() {
            return vec![format!("{}  ⊢ (premise used directly)", self.root)];
        }
        self.steps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let inputs: Vec<String> = s.inputs.iter().map(|x| x.to_string()).collect();
                let mut line = format!("s{}  {}  {}", i + 1, s.rule, inputs.join(" "));
                if !s.bindings.is_empty() {
                    let b: Vec<String> = s
                        .bindings
                        .iter()
                        .map(|(v, t)| format!("{v} ↦ {t}"))
                        .collect();
                    line.push_str("  ");
                    line.push_str(&b.join(", "));
                }
                if !s.discharges.is_empty() {
                    let ids: Vec<String> =
                        s.discharges.iter().map(|h| format!("h{}", h + 1)).collect();
                    line.push_str(&format!("  discharges {}", ids.join(" ")));
                }
                line.push_str("  ⊢ ");
                line.push_str(&s.conclusion);
                line
            })
            .collect()
    }

    fn sources(&self) -> impl Iterator<Item = &Source> {
        self.steps
            .iter()
            .flat_map(|s| s.inputs.iter())
            .chain(std::iter::once(&self.root))
    }

    /// How often each premise (or premise conjunct) is consumed.
    pub fn premise_uses(&self) -> BTreeMap<(usize, Option<usize>), usize> {
        let mut out = BTreeMap::new();
        for s in self.sources() {
            let key = match s {
                Source::Premise { index, .. } => (*index, None),
                Source::Part { index, part, .. } => (*index, Some(*part)),
                _ => continue,
            };
            *out.entry(key).or_insert(0) += 1;
        }
        out
    }

    /// Mechanical linearity check: every premise conjunct is consumed exactly once, every
    /// hypothesis is used exactly once and discharged exactly once, and every step's
    /// conclusion is consumed exactly once (the last one by the root).
    pub fn audit(&self, premises: &PremiseSet) -> Result<(), String> {
        let uses = self.premise_uses();
        for (i, p) in premises.iter().enumerate() {
            let n = p.formula.conjuncts().len();
            let keys: Vec<(usize, Option<usize>)> = if n == 1 {
                vec![(i, None)]
            } else {
                (0..n).map(|k| (i, Some(k))).collect()
            };
            for key in keys {
                let used = uses.get(&key).copied().unwrap_or(0);
                if used != 1 {
                    return Err(format!("premise {key:?} ({}) used {used} times", p.word));
                }
            }
        }
        if let Some(extra) = uses.keys().find(|(i, _)| *i >= premises.len()) {
            return Err(format!("unknown premise {extra:?}"));
        }
        let mut hyp_uses: BTreeMap<usize, usize> = BTreeMap::new();
        let mut step_uses = vec![0usize; self.steps.len()];
        for s in self.sources() {
            match s {
                Source::Hyp { id, .. } => *hyp_uses.entry(*id).or_insert(0) += 1,
                Source::Step { step } => match step_uses.get_mut(*step) {
                    Some(n) => *n += 1,
                    None => return Err(format!("reference to missing step s{}", step + 1)),
                },
                Source::Demand { .. } => return Err("trace contains an assumed demand".into()),
                _ => {}
            }
        }
        let mut discharged: BTreeMap<usize, usize> = BTreeMap::new();
        for s in &self.steps {
            for h in &s.discharges {
                *discharged.entry(*h).or_insert(0) += 1;
            }
        }
        if hyp_uses.values().any(|&n| n != 1) || hyp_uses.keys().ne(discharged.keys()) {
            return Err(format!(
                "hypotheses used {hyp_uses:?} but discharged {discharged:?}"
            ));
        }
        if discharged.values().any(|&n| n != 1) {
            return Err(format!("hypotheses discharged {discharged:?}"));
        }
        if let Some(i) = step_uses.iter().position(|&n| n != 1) {
            return Err(format!("step s{} consumed {} times", i + 1, step_uses[i]));
        }
        Ok(())
    }
}
