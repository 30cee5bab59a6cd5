use std::fmt;

use crate::fstructure::SemStructure;
use crate::meaning::{SemType, Term};

/// A functional description relative to the word's own f-structure `^`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathExpr {
    /// `^`
    Up,
    /// `(base ATTR ...)`
    Attrs(Box<PathExpr>, Vec<String>),
    /// `(mod base)`: the f-structure whose MODS set contains `base`.
    Mod(Box<PathExpr>),
}

impl fmt::Display for PathExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathExpr::Up => f.write_str("↑"),
            PathExpr::Attrs(base, attrs) => write!(f, "({base} {})", attrs.join(" ")),
            PathExpr::Mod(base) => write!(f, "(mod {base})"),
        }
    }
}

/// The left-hand side of `~>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sem {
    /// Template path, resolved at instantiation.
    Path(PathExpr),
    /// A concrete semantic structure.
    Node(SemStructure),
    /// A variable bound by an enclosing `forall`.
    Var(String),
    /// Unification variable (prover only).
    Meta(usize),
}

impl fmt::Display for Sem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sem::Path(p) => write!(f, "{p}"),
            Sem::Node(s) => write!(f, "{s}"),
            Sem::Var(v) => f.write_str(v),
            Sem::Meta(m) => write!(f, "?H{m}"),
        }
    }
}

/// `sem ~>_ty meaning`
#[derive(Debug, Clone)]
pub struct Atom {
    pub sem: Sem,
    pub ty: SemType,
    pub meaning: Term,
    /// Whether the type subscript was written (`~>_t`) rather than inferred.
    pub explicit_type: bool,
}

/// Equality ignores whether the type subscript was written.
impl PartialEq for Atom {
    fn eq(&self, other: &Atom) -> bool {
        self.sem == other.sem && self.ty == other.ty && self.meaning == other.meaning
    }
}

impl Eq for Atom {}

impl Atom {
    /// A propositional atom `A`, read as `A_σ ~>_t A`.
    pub fn propositional(name: &str) -> Atom {
        Atom {
            sem: Sem::Node(SemStructure::new(name)),
            ty: SemType::T,
            meaning: Term::constant(name, SemType::T),
            explicit_type: false,
        }
    }

    fn propositional_name(&self) -> Option<&str> {
        match (&self.sem, &self.meaning) {
            (Sem::Node(s), Term::Const { name, ty }) if s.label() == name && *ty == SemType::T => {
                Some(name)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BinderKind {
    /// A meaning variable of the given type.
    Meaning(SemType),
    /// A semantic-structure variable.
    Sem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binder {
    pub name: String,
    pub kind: BinderKind,
}

/// Glue formulas: typed `~>` atoms under tensor, linear implication and universal
/// quantification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Atom(Atom),
    Tensor(Box<Formula>, Box<Formula>),
    Limp(Box<Formula>, Box<Formula>),
    Forall(Binder, Box<Formula>),
}

impl Formula {
    pub fn atom(sem: Sem, ty: SemType, meaning: Term) -> Formula {
        Formula::Atom(Atom {
            sem,
            ty,
            meaning,
            explicit_type: false,
        })
    }

    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::Tensor(Box::new(a), Box::new(b))
    }

    pub fn limp(a: Formula, b: Formula) -> Formula {
        Formula::Limp(Box::new(a), Box::new(b))
    }

    pub fn forall(name: impl Into<String>, kind: BinderKind, body: Formula) -> Formula {
        Formula::Forall(
            Binder {
                name: name.into(),
                kind,
            },
            Box::new(body),
        )
    }

    /// Number of `*`, `-o` and `forall` nodes.
    pub fn connectives(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Tensor(a, b) | Formula::Limp(a, b) => 1 + a.connectives() + b.connectives(),
            Formula::Forall(_, b) => 1 + b.connectives(),
        }
    }

    /// The connective skeleton with atoms erased, e.g. `(∀(∀((_ ⊗ _) ⊸ _)))`.
    pub fn shape(&self) -> String {
        match self {
            Formula::Atom(_) => "_".to_string(),
            Formula::Tensor(a, b) => format!("({} ⊗ {})", a.shape(), b.shape()),
            Formula::Limp(a, b) => format!("({} ⊸ {})", a.shape(), b.shape()),
            Formula::Forall(_, b) => format!("(∀{})", b.shape()),
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::Atom(a) => out.push(a),
            Formula::Tensor(a, b) | Formula::Limp(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
            Formula::Forall(_, b) => b.collect_atoms(out),
        }
    }

    /// Rebuilds the formula with every atom transformed.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Atom) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(f(a)),
            Formula::Tensor(a, b) => Formula::tensor(a.map_atoms(f), b.map_atoms(f)),
            Formula::Limp(a, b) => Formula::limp(a.map_atoms(f), b.map_atoms(f)),
            Formula::Forall(v, b) => Formula::Forall(v.clone(), Box::new(b.map_atoms(f))),
        }
    }

    /// Like [`Formula::map_atoms`], but the semantic side may fail.
    pub fn try_map_sems<E>(
        &self,
        f: &mut impl FnMut(&Sem) -> Result<Sem, E>,
    ) -> Result<Formula, E> {
        Ok(match self {
            Formula::Atom(a) => Formula::Atom(Atom {
                sem: f(&a.sem)?,
                ..a.clone()
            }),
            Formula::Tensor(a, b) => Formula::tensor(a.try_map_sems(f)?, b.try_map_sems(f)?),
            Formula::Limp(a, b) => Formula::limp(a.try_map_sems(f)?, b.try_map_sems(f)?),
            Formula::Forall(v, b) => Formula::Forall(v.clone(), Box::new(b.try_map_sems(f)?)),
        })
    }

    /// Replaces the meaning variable `name` by `by` (a closed term) in every atom.
    pub fn subst_meaning(&self, name: &str, by: &Term) -> Formula {
        self.map_atoms(&mut |a| Atom {
            meaning: a.meaning.map_leaves(&mut |t, _| match t {
                Term::Var { name: n, .. } if n == name => Some(by.clone()),
                _ => None,
            }),
            ..a.clone()
        })
    }

    /// Replaces the semantic-structure variable `name` by `by` in every atom.
    pub fn subst_sem(&self, name: &str, by: &Sem) -> Formula {
        self.map_atoms(&mut |a| Atom {
            sem: match &a.sem {
                Sem::Var(v) if v == name => by.clone(),
                s => s.clone(),
            },
            ..a.clone()
        })
    }

    /// Free meaning and semantic-structure variables, and unresolved template paths.
    pub fn free_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.free_in(&mut Vec::new(), &mut out);
        out
    }

    fn free_in(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            Formula::Atom(a) => {
                match &a.sem {
                    Sem::Var(v) if !bound.contains(v) => out.push(v.clone()),
                    Sem::Path(p) => out.push(p.to_string()),
                    _ => {}
                }
                a.meaning.any_leaf(&mut |t| {
                    if let Term::Var { name, .. } = t {
                        if !bound.contains(name) && !out.contains(name) {
                            out.push(name.clone());
                        }
                    }
                    false
                });
            }
            Formula::Tensor(a, b) | Formula::Limp(a, b) => {
                a.free_in(bound, out);
                b.free_in(bound, out);
            }
            Formula::Forall(v, b) => {
                bound.push(v.name.clone());
                b.free_in(bound, out);
                bound.pop();
            }
        }
    }

    /// No free variables of either kind and no template paths.
    pub fn is_closed(&self) -> bool {
        self.free_names().is_empty()
    }

    /// Semantic structures mentioned by the formula.
    pub fn sem_structures(&self) -> Vec<SemStructure> {
        let mut out: Vec<SemStructure> = Vec::new();
        for a in self.atoms() {
            if let Sem::Node(s) = &a.sem {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    /// Splits top-level tensors into their conjuncts.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::Tensor(a, b) => {
                let mut v = a.conjuncts();
                v.extend(b.conjuncts());
                v
            }
            f => vec![f],
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, ctx: Ctx) -> fmt::Result {
        let needs = match (self, ctx) {
            (Formula::Atom(_), _) | (_, Ctx::Top) => false,
            (Formula::Tensor(..), Ctx::TensorLeft | Ctx::LimpLeft) => false,
            (Formula::Tensor(..), _) => true,
            (Formula::Limp(..) | Formula::Forall(..), _) => true,
        };
        if needs {
            f.write_str("(")?;
        }
        match self {
            Formula::Atom(a) => write!(f, "{a}")?,
            Formula::Tensor(a, b) => {
                a.write(f, Ctx::TensorLeft)?;
                f.write_str(" ⊗ ")?;
                b.write(f, Ctx::TensorRight)?;
            }
            Formula::Limp(a, b) => {
                a.write(f, Ctx::LimpLeft)?;
                f.write_str(" ⊸ ")?;
                b.write(f, Ctx::Top)?;
            }
            Formula::Forall(..) => {
                f.write_str("∀")?;
                let mut body = self;
                let mut first = true;
                while let Formula::Forall(v, b) = body {
                    if !first {
                        f.write_str(", ")?;
                    }
                    first = false;
                    f.write_str(&v.name)?;
                    if let BinderKind::Meaning(ty) = &v.kind {
                        write!(f, ":{ty}")?;
                    }
                    body = b;
                }
                f.write_str(". ")?;
                body.write(f, Ctx::Top)?;
            }
        }
        if needs {
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum Ctx {
    Top,
    TensorLeft,
    TensorRight,
    LimpLeft,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = self.propositional_name() {
            return f.write_str(name);
        }
        let ty = match (&self.ty, self.explicit_type) {
            (_, false) => String::new(),
            (ty @ (SemType::E | SemType::T), true) => format!("_{ty}"),
            (ty, true) => format!("_({ty})"),
        };
        write!(f, "{} ⤳{ty} {}", self.sem, self.meaning)
    }
}

/// Unicode glue syntax (`⊗`, `⊸`, `∀`, `⤳`), which the formula parser reads back.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, Ctx::Top)
    }
}
