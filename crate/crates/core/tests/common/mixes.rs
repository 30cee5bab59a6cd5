//! Seeded random premise sets mixing atomic premises, argument-taking implications,
//! modifiers and scope-taking quantifiers.

use glue::glue_core::{parse_formula, PremiseSet};
use glue::meaning::{SemType, Signature};
use glue::prover::Goal;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn signature() -> Signature {
    Signature::from_decls(&[
        ("a", "e"),
        ("b", "e"),
        ("c", "e"),
        ("p0", "t"),
        ("p1", "t"),
        ("P1", "e -> t"),
        ("P2", "e -> t"),
        ("R", "e -> e -> t"),
        ("M", "t -> t"),
        ("Q1", "(e -> t) -> t"),
        ("Q2", "(e -> t) -> t"),
    ])
    .unwrap()
}

const SEMS: [&str; 4] = ["f", "g", "h", "k"];

pub struct MixGen {
    rng: ChaCha8Rng,
    sig: Signature,
}

impl MixGen {
    pub fn new(seed: u64) -> Self {
        MixGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            sig: signature(),
        }
    }

    fn sem(&mut self) -> &'static str {
        SEMS.choose(&mut self.rng).unwrap()
    }

    fn pick<'a>(&mut self, xs: &[&'a str]) -> &'a str {
        xs.choose(&mut self.rng).unwrap()
    }

    /// Source text of one random premise; `nested` says whether it has a nested antecedent.
    pub fn premise_text(&mut self, allow_nested: bool) -> (String, bool) {
        let kinds = if allow_nested { 9 } else { 7 };
        let (s1, s2, s3) = (self.sem(), self.sem(), self.sem());
        match self.rng.gen_range(0..kinds) {
            0 | 1 => (format!("{s1} ~> {}", self.pick(&["a", "b", "c"])), false),
            2 => (format!("{s1} ~> {}", self.pick(&["p0", "p1"])), false),
            3 => {
                let p = self.pick(&["P1", "P2"]);
                (format!("forall X:e. {s1} ~> X -o {s2} ~> {p}(X)"), false)
            }
            4 => {
                let text = match self.rng.gen_range(0..3) {
                    0 => format!("forall X:e, Y:e. {s1} ~> X * {s2} ~> Y -o {s3} ~> R(X,Y)"),
                    1 => format!(
                        "forall X:e. {s1} ~> X -o (forall Y:e. {s2} ~> Y -o {s3} ~> R(X,Y))"
                    ),
                    _ => format!(
                        "forall Y:e. {s2} ~> Y -o (forall X:e. {s1} ~> X -o {s3} ~> R(X,Y))"
                    ),
                };
                (text, false)
            }
            5 => (format!("forall P:t. {s1} ~> P -o {s1} ~> M(P)"), false),
            6 => (
                format!("{s1} ~> {} -o {s2} ~> p0", self.pick(&["a", "b"])),
                false,
            ),
            7 => {
                let q = self.pick(&["Q1", "Q2"]);
                (
                    format!(
                        "forall H, S:e->t. (forall x:e. {s1} ~> x -o H ~>_t S(x)) -o H ~>_t {q}(S)"
                    ),
                    true,
                )
            }
            _ => {
                let q = self.pick(&["Q1", "Q2"]);
                (
                    format!("forall S:e->t. (forall y:e. {s1} ~> y -o {s2} ~>_t S(y)) -o {s2} ~>_t {q}(S)"),
                    true,
                )
            }
        }
    }

    /// A premise set of 1 to `max` formulas with at most two nested implications, and a
    /// goal over one of the structures it mentions.
    pub fn case(&mut self, max: usize) -> (PremiseSet, Goal, Vec<String>) {
        let n = self.rng.gen_range(1..=max);
        let mut nested = 0;
        let mut texts = Vec::new();
        for _ in 0..n {
            let (text, is_nested) = self.premise_text(nested < 2);
            nested += usize::from(is_nested);
            texts.push(text);
        }
        let formulas = texts.iter().map(|t| parse_formula(t, &self.sig).unwrap());
        let premises = PremiseSet::from_formulas(formulas);
        let universe = premises.universe();
        let sem = universe.choose(&mut self.rng).unwrap().clone();
        let ty = if self.rng.gen_bool(0.8) {
            SemType::T
        } else {
            SemType::E
        };
        (premises, Goal::new(sem, ty), texts)
    }

    /// Premises supplying `sem ⤳_ty`, using at most `budget` formulas.
    fn supply(&mut self, sem: &str, ty: &SemType, budget: &mut usize, out: &mut Vec<String>) {
        *budget = budget.saturating_sub(1);
        if *ty == SemType::E {
            out.push(format!("{sem} ~> {}", self.pick(&["a", "b", "c"])));
            return;
        }
        let choice = if *budget == 0 {
            0
        } else {
            self.rng.gen_range(0..6)
        };
        let e = SemType::E;
        match choice {
            0 => out.push(format!("{sem} ~> {}", self.pick(&["p0", "p1"]))),
            1 | 2 => {
                let s1 = self.sem();
                let p = self.pick(&["P1", "P2"]);
                out.push(format!("forall X:e. {s1} ~> X -o {sem} ~> {p}(X)"));
                self.supply(s1, &e, budget, out);
            }
            3 if *budget >= 2 => {
                let (s1, s2) = (self.sem(), self.sem());
                out.push(format!(
                    "forall X:e, Y:e. {s1} ~> X * {s2} ~> Y -o {sem} ~> R(X,Y)"
                ));
                self.supply(s1, &e, budget, out);
                self.supply(s2, &e, budget, out);
            }
            4 => {
                out.push(format!("forall P:t. {sem} ~> P -o {sem} ~> M(P)"));
                self.supply(sem, &SemType::T, budget, out);
            }
            _ => {
                let s1 = self.sem();
                out.push(format!("{s1} ~> a -o {sem} ~> p0"));
                *budget = budget.saturating_sub(1);
                out.push(format!("{s1} ~> a"));
            }
        }
    }

    /// A premise set built to be derivable (up to two individuals turned into scope-taking
    /// quantifiers), then with probability 1/3 perturbed by dropping or adding a premise.
    pub fn derivable_case(&mut self, max: usize) -> (PremiseSet, Goal, Vec<String>) {
        let goal_sem = self.sem();
        let mut texts = Vec::new();
        let mut budget = max - 1;
        self.supply(goal_sem, &SemType::T, &mut budget, &mut texts);
        let individuals: Vec<usize> = texts
            .iter()
            .enumerate()
            .filter(|(_, t)| t.len() == 6 && t.ends_with(['a', 'b', 'c']) && t.contains("~>"))
            .map(|(i, _)| i)
            .collect();
        for &i in individuals.iter().take(self.rng.gen_range(0..=2)) {
            let s1 = &texts[i][..1];
            let q = self.pick(&["Q1", "Q2"]);
            texts[i] = if self.rng.gen_bool(0.7) {
                format!("forall H, S:e->t. (forall x:e. {s1} ~> x -o H ~>_t S(x)) -o H ~>_t {q}(S)")
            } else {
                format!("forall S:e->t. (forall y:e. {s1} ~> y -o {goal_sem} ~>_t S(y)) -o {goal_sem} ~>_t {q}(S)")
            };
        }
        match self.rng.gen_range(0..6) {
            0 if texts.len() > 1 => {
                let i = self.rng.gen_range(0..texts.len());
                texts.remove(i);
            }
            1 if texts.len() < max => {
                let (t, _) = self.premise_text(false);
                texts.push(t);
            }
            _ => {}
        }
        texts.shuffle(&mut self.rng);
        let formulas = texts.iter().map(|t| parse_formula(t, &self.sig).unwrap());
        let premises = PremiseSet::from_formulas(formulas);
        (
            premises,
            Goal::new(glue::fstructure::SemStructure::new(goal_sem), SemType::T),
            texts,
        )
    }
}
