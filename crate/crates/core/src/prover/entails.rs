//! Propositional entailment in the multiplicative fragment by exhaustive sequent search.

use crate::glue_core::Formula;

/// Whether `antecedent ⊢ consequent` holds in intuitionistic multiplicative linear logic,
/// with every resource used exactly once.
///
/// Atoms are compared structurally; a `∀` formula is treated as an opaque atom.
///
/// ```
/// use glue::glue_core::parse_formula;
/// use glue::meaning::Signature;
/// use glue::prover::entails;
///
/// let sig = Signature::new();
/// let f = |s| parse_formula(s, &sig).unwrap();
/// assert!(entails(&f("A * (A -o B)"), &f("B")));
/// assert!(!entails(&f("A"), &f("A * A")));
/// ```
pub fn entails(antecedent: &Formula, consequent: &Formula) -> bool {
    prove(vec![antecedent.clone()], consequent)
}

fn prove(mut ctx: Vec<Formula>, goal: &Formula) -> bool {
    if let Some(i) = ctx.iter().position(|f| matches!(f, Formula::Tensor(..))) {
        if let Formula::Tensor(a, b) = ctx.swap_remove(i) {
            ctx.push(*a);
            ctx.push(*b);
        }
        return prove(ctx, goal);
    }
    if let Formula::Limp(a, b) = goal {
        ctx.push((**a).clone());
        return prove(ctx, b);
    }
    if ctx.len() == 1 && ctx[0] == *goal {
        return true;
    }
    if let Formula::Tensor(a, b) = goal {
        if splits(&ctx).any(|(l, r)| prove(l, a) && prove(r, b)) {
            return true;
        }
    }
    for i in 0..ctx.len() {
        let Formula::Limp(a, b) = &ctx[i] else {
            continue;
        };
        let mut rest = ctx.clone();
        rest.remove(i);
        if splits(&rest).any(|(l, mut r)| {
            r.push((**b).clone());
            prove(l, a) && prove(r, goal)
        }) {
            return true;
        }
    }
    false
}

/// Every division of `ctx` into two sub-multisets (by position).
fn splits(ctx: &[Formula]) -> impl Iterator<Item = (Vec<Formula>, Vec<Formula>)> + '_ {
    (0u64..1 << ctx.len()).map(move |mask| {
        let (mut l, mut r) = (Vec::new(), Vec::new());
        for (i, f) in ctx.iter().enumerate() {
            if mask >> i & 1 == 1 {
                l.push(f.clone());
            } else {
                r.push(f.clone());
            }
        }
        (l, r)
    })
}
