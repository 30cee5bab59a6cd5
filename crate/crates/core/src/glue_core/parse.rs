use super::formula::{Atom, Binder, BinderKind, Formula, PathExpr, Sem};
use crate::fstructure::SemStructure;
use crate::meaning::{elaborate, parse_raw, parse_type, parse_type_atom, Env, Signature};
use crate::syntax::{lex, Cursor, ParseError, Tok};

pub(crate) struct FormulaParser<'a> {
    pub sig: &'a Signature,
    /// Templates may use `^` paths but not concrete labels.
    pub template: bool,
    scope: Vec<Binder>,
}

/// Strips a trailing `_σ` / `_sigma` from a written semantic-structure label.
fn sem_label(name: &str) -> &str {
    name.strip_suffix("_σ")
        .or_else(|| name.strip_suffix("_sigma"))
        .unwrap_or(name)
}

impl<'a> FormulaParser<'a> {
    pub fn new(sig: &'a Signature, template: bool) -> Self {
        FormulaParser {
            sig,
            template,
            scope: Vec::new(),
        }
    }

    fn env(&self) -> Env {
        self.scope
            .iter()
            .filter_map(|b| match &b.kind {
                BinderKind::Meaning(ty) => Some((b.name.clone(), ty.clone())),
                BinderKind::Sem => None,
            })
            .collect()
    }

    /// `formula := 'forall' binder (',' binder)* '.' formula | imp`
    pub fn formula(&mut self, cur: &mut Cursor) -> Result<Formula, ParseError> {
        if cur.eat(&Tok::Forall) {
            let mut binders = Vec::new();
            loop {
                let pos = cur.here();
                let name = cur.ident()?;
                if self
                    .scope
                    .iter()
                    .chain(&binders)
                    .any(|b: &Binder| b.name == name)
                {
                    return Err(ParseError::new(
                        pos.0,
                        pos.1,
                        format!("variable `{name}` is already bound by an enclosing forall"),
                    ));
                }
                let kind = if cur.eat(&Tok::Colon) {
                    BinderKind::Meaning(parse_type(cur)?)
                } else {
                    BinderKind::Sem
                };
                binders.push(Binder { name, kind });
                if !cur.eat(&Tok::Comma) {
                    break;
                }
            }
            cur.expect(&Tok::Dot)?;
            let n = binders.len();
            self.scope.extend(binders.iter().cloned());
            let body = self.formula(cur);
            self.scope.truncate(self.scope.len() - n);
            let body = body?;
            return Ok(binders
                .into_iter()
                .rev()
                .fold(body, |acc, b| Formula::Forall(b, Box::new(acc))));
        }
        let left = self.tensor(cur)?;
        if cur.eat(&Tok::Lolli) {
            let right = self.formula(cur)?;
            return Ok(Formula::limp(left, right));
        }
        Ok(left)
    }

    fn tensor(&mut self, cur: &mut Cursor) -> Result<Formula, ParseError> {
        let mut f = self.unit(cur)?;
        while cur.eat(&Tok::Tensor) {
            let g = self.unit(cur)?;
            f = Formula::tensor(f, g);
        }
        Ok(f)
    }

    fn unit(&mut self, cur: &mut Cursor) -> Result<Formula, ParseError> {
        match cur.peek() {
            Tok::LParen => {
                if self.template {
                    let save = cur.save();
                    if let Ok(path) = self.path(cur) {
                        if matches!(cur.peek(), Tok::Means | Tok::MeansTyped) {
                            return self.atom_rest(cur, Sem::Path(path));
                        }
                    }
                    cur.restore(save);
                }
                cur.bump();
                let f = self.formula(cur)?;
                cur.expect(&Tok::RParen)?;
                Ok(f)
            }
            Tok::Caret => {
                let (line, col) = cur.here();
                if !self.template {
                    return Err(ParseError::new(
                        line,
                        col,
                        "`^` is only meaningful in lexicon templates",
                    ));
                }
                cur.bump();
                self.atom_rest(cur, Sem::Path(PathExpr::Up))
            }
            Tok::Ident(name) => {
                let name = name.clone();
                let (line, col) = cur.here();
                cur.bump();
                let means = matches!(cur.peek(), Tok::Means | Tok::MeansTyped);
                if let Some(b) = self.scope.iter().rev().find(|b| b.name == name) {
                    return match b.kind {
                        BinderKind::Sem if means => self.atom_rest(cur, Sem::Var(name)),
                        BinderKind::Sem => Err(ParseError::new(
                            line,
                            col,
                            format!("expected `~>` after semantic-structure variable `{name}`"),
                        )),
                        BinderKind::Meaning(_) => Err(ParseError::new(
                            line,
                            col,
                            format!("`{name}` is a meaning variable; a semantic structure is required on the left of `~>`"),
                        )),
                    };
                }
                if self.template {
                    return Err(ParseError::new(
                        line,
                        col,
                        format!("unbound semantic-structure variable `{name}` (bind it with forall, or use a path such as `(^ SUBJ)`)"),
                    ));
                }
                if means {
                    self.atom_rest(cur, Sem::Node(SemStructure::new(sem_label(&name))))
                } else {
                    Ok(Formula::Atom(Atom::propositional(&name)))
                }
            }
            _ => Err(cur.unexpected("a glue formula")),
        }
    }

    /// `path := '(' ('mod' base | base ATTR+) ')'` with `base := '^' | path`
    fn path(&mut self, cur: &mut Cursor) -> Result<PathExpr, ParseError> {
        cur.expect(&Tok::LParen)?;
        if matches!(cur.peek(), Tok::Ident(s) if s == "mod") {
            cur.bump();
            let base = self.path_base(cur)?;
            cur.expect(&Tok::RParen)?;
            return Ok(PathExpr::Mod(Box::new(base)));
        }
        let base = self.path_base(cur)?;
        let mut attrs = Vec::new();
        while let Tok::Ident(a) = cur.peek() {
            attrs.push(a.to_ascii_uppercase());
            cur.bump();
        }
        if attrs.is_empty() {
            return Err(cur.unexpected("an attribute name"));
        }
        cur.expect(&Tok::RParen)?;
        Ok(PathExpr::Attrs(Box::new(base), attrs))
    }

    fn path_base(&mut self, cur: &mut Cursor) -> Result<PathExpr, ParseError> {
        if cur.eat(&Tok::Caret) {
            Ok(PathExpr::Up)
        } else {
            self.path(cur)
        }
    }

    /// `('~>' | '~>_' type) term`
    fn atom_rest(&mut self, cur: &mut Cursor, sem: Sem) -> Result<Formula, ParseError> {
        let explicit = if cur.eat(&Tok::MeansTyped) {
            Some(parse_type_atom(cur)?)
        } else {
            cur.expect(&Tok::Means)?;
            None
        };
        let raw = parse_raw(cur)?;
        let (meaning, ty) = elaborate(&raw, self.sig, &self.env(), explicit.as_ref())?;
        Ok(Formula::Atom(Atom {
            sem,
            ty,
            meaning,
            explicit_type: explicit.is_some(),
        }))
    }
}

/// Parses a closed glue formula. Semantic structures are written as labels (`g_σ` or `g`);
/// a bare identifier not followed by `~>` is a propositional atom.
///
/// ```
/// use glue::glue_core::parse_formula;
/// use glue::meaning::Signature;
/// let sig = Signature::from_decls(&[("Bill", "e"), ("appoint", "e -> e -> t")]).unwrap();
/// let f = parse_formula("forall Y:e. h_σ ~> Y -o f_σ ~> appoint(Bill, Y)", &sig).unwrap();
/// assert_eq!(f.to_string(), "∀Y:e. h_σ ⤳ Y ⊸ f_σ ⤳ appoint(Bill,Y)");
/// ```
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let mut cur = Cursor::new(lex(text)?);
    let f = FormulaParser::new(sig, false).formula(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.unexpected("end of formula"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meaning::SemType;

    fn sig() -> Signature {
        Signature::from_decls(&[
            ("Bill", "e"),
            ("appoint", "e -> e -> t"),
            ("every", "(e -> t) -> (e -> t) -> t"),
            ("person", "e -> t"),
        ])
        .unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_formula("A * B -o C -o D", &sig()).unwrap();
        assert_eq!(f.shape(), "((_ ⊗ _) ⊸ (_ ⊸ _))");
        let g = parse_formula("A * (A -o B)", &sig()).unwrap();
        assert_eq!(g.shape(), "(_ ⊗ (_ ⊸ _))");
        assert_eq!(g.to_string(), "A ⊗ (A ⊸ B)");
    }

    #[test]
    fn nested_quantifier_with_typed_means() {
        let f = parse_formula(
            "forall H, S:e->t. (forall x:e. h ~> x -o H ~>_t S(x)) -o H ~>_t every(person, S)",
            &sig(),
        )
        .unwrap();
        assert_eq!(f.shape(), "(∀(∀((∀(_ ⊸ _)) ⊸ _)))");
        assert!(f.is_closed());
        let again = parse_formula(&f.to_string(), &sig()).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn type_index_is_inferred_from_meaning() {
        let f = parse_formula("g ~> Bill", &sig()).unwrap();
        match f {
            Formula::Atom(a) => {
                assert_eq!(a.ty, SemType::E);
                assert!(!a.explicit_type);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn explicit_type_must_agree() {
        let err = parse_formula("g ~>_t Bill", &sig()).unwrap_err();
        assert!(
            err.message.contains("expected a meaning of type t"),
            "{err}"
        );
    }

    #[test]
    fn shadowing_is_rejected() {
        assert!(parse_formula("forall X:e. forall X:e. g ~> X", &sig()).is_err());
    }

    #[test]
    fn meaning_variable_cannot_be_a_sem_structure() {
        assert!(parse_formula("forall X:e. X ~> X", &sig()).is_err());
    }

    #[test]
    fn unbound_meaning_variable_is_reported() {
        let err = parse_formula("g ~> appoint(X, Bill)", &sig()).unwrap_err();
        assert!(err.message.contains("unknown identifier `X`"), "{err}");
    }
}
