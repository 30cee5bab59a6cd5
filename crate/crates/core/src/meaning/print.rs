use std::collections::BTreeSet;
use std::fmt;

use super::normalize::eta_contract_head;
use super::Term;

/// Names of constants, free variables, metas and hypotheses occurring in `t`.
fn leaf_names(t: &Term, out: &mut BTreeSet<String>) {
    t.any_leaf(&mut |l| {
        match l {
            Term::Const { name, .. } | Term::Var { name, .. } => {
                out.insert(name.clone());
            }
            Term::Hyp { hint, .. } => {
                out.insert(hint.clone());
            }
            _ => {}
        }
        false
    });
}

fn fresh_name(hint: &str, scope: &[String], taken: &BTreeSet<String>) -> String {
    let base = if hint.is_empty() { "x" } else { hint };
    let clash = |n: &str| scope.iter().any(|s| s == n) || taken.contains(n);
    if !clash(base) {
        return base.to_string();
    }
    (1..)
        .map(|k| format!("{base}{k}"))
        .find(|n| !clash(n))
        .expect("unbounded supply of names")
}

/// Whether the innermost enclosing binder occurs in `body`.
fn uses_binder(body: &Term) -> bool {
    fn go(t: &Term, depth: usize) -> bool {
        match t {
            Term::Bound(i) => *i == depth,
            Term::App(a, b) => go(a, depth) || go(b, depth),
            Term::Lam { body, .. } => go(body, depth + 1),
            _ => false,
        }
    }
    go(body, 0)
}

struct Printer {
    scope: Vec<String>,
    taken: BTreeSet<String>,
}

impl Printer {
    fn leaf(&self, t: &Term, out: &mut String) {
        match t {
            Term::Const { name, .. } | Term::Var { name, .. } => out.push_str(name),
            Term::Hyp { hint, .. } => out.push_str(hint),
            Term::Meta { hint, .. } => {
                out.push('?');
                out.push_str(hint);
            }
            Term::Bound(i) => match self.scope.len().checked_sub(i + 1) {
                Some(k) => out.push_str(&self.scope[k]),
                None => out.push_str(&format!("#{i}")),
            },
            _ => unreachable!(),
        }
    }

    fn term(&mut self, t: &Term, out: &mut String) {
        match t {
            Term::Lam { hint, ty, body } => {
                if let Some(head) = eta_contract_head(t) {
                    self.leaf(&head, out);
                    return;
                }
                let name = fresh_name(hint, &self.scope, &self.taken);
                out.push('\\');
                out.push_str(&name);
                if !uses_binder(body) {
                    out.push(':');
                    out.push_str(&ty.to_string());
                }
                out.push_str(". ");
                self.scope.push(name);
                self.term(body, out);
                self.scope.pop();
            }
            Term::App(..) => {
                let (head, args) = t.spine();
                if matches!(head, Term::Lam { .. }) {
                    out.push('(');
                    self.term(head, out);
                    out.push(')');
                } else {
                    self.leaf(head, out);
                }
                out.push('(');
                for (k, arg) in args.into_iter().enumerate() {
                    let mut s = String::new();
                    self.term(arg, &mut s);
                    if k > 0 {
                        out.push(',');
                        if s.starts_with('\\') {
                            out.push(' ');
                        }
                    }
                    out.push_str(&s);
                }
                out.push(')');
            }
            leaf => self.leaf(leaf, out),
        }
    }
}

/// Concrete syntax: `f(a,b)` for curried application, `\x. body` for abstraction.
/// Eta-expanded heads print as the bare head, a vacuous binder carries its type
/// (`\x:e. body`), and an argument that is an abstraction is preceded by `, ` rather than
/// `,`. Given the expected type, the output parses back to an alpha-equivalent term.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut taken = BTreeSet::new();
        leaf_names(self, &mut taken);
        let mut p = Printer {
            scope: Vec::new(),
            taken,
        };
        let mut out = String::new();
        p.term(self, &mut out);
        f.write_str(&out)
    }
}
