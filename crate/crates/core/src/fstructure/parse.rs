use std::collections::BTreeMap;

use super::{FStructure, Node, NodeId, Symbol, Value};
use crate::syntax::{lex, Cursor, ParseError, Tok};

struct RawNode {
    label: String,
    pos: (usize, usize),
    attrs: Vec<(String, RawValue, (usize, usize))>,
}

enum RawValue {
    Node(RawNode),
    Atom(Symbol),
    Set(Vec<RawNode>),
}

/// `node := label ':' '[' (attr ';'?)* ']'`
fn parse_node(cur: &mut Cursor) -> Result<RawNode, ParseError> {
    let pos = cur.here();
    let label = match cur.peek().clone() {
        Tok::Ident(s) => {
            cur.bump();
            s
        }
        _ => return Err(cur.unexpected("an f-structure label")),
    };
    cur.expect(&Tok::Colon)?;
    cur.expect(&Tok::LBracket)?;
    let mut attrs = Vec::new();
    while *cur.peek() != Tok::RBracket {
        let apos = cur.here();
        let name = match cur.peek().clone() {
            Tok::Ident(s) => {
                cur.bump();
                s.to_ascii_uppercase()
            }
            _ => return Err(cur.unexpected("an attribute name or `]`")),
        };
        let value = parse_value(cur)?;
        attrs.push((name, value, apos));
        cur.eat(&Tok::Semi);
    }
    cur.expect(&Tok::RBracket)?;
    Ok(RawNode { label, pos, attrs })
}

fn parse_value(cur: &mut Cursor) -> Result<RawValue, ParseError> {
    match cur.peek().clone() {
        Tok::Quoted(s) => {
            cur.bump();
            Ok(RawValue::Atom(Symbol {
                text: s,
                quoted: true,
            }))
        }
        Tok::Ident(_) if *cur.peek_at(1) == Tok::Colon => Ok(RawValue::Node(parse_node(cur)?)),
        Tok::Ident(s) => {
            cur.bump();
            Ok(RawValue::Atom(Symbol {
                text: s,
                quoted: false,
            }))
        }
        Tok::LBrace => {
            cur.bump();
            let mut members = Vec::new();
            while *cur.peek() != Tok::RBrace {
                members.push(parse_node(cur)?);
                cur.eat(&Tok::Semi);
            }
            cur.expect(&Tok::RBrace)?;
            Ok(RawValue::Set(members))
        }
        _ => Err(cur
            .unexpected("an attribute value (`'sym'`, a bare symbol, `label:[...]` or `{ ... }`)")),
    }
}

struct Builder<'a> {
    ids: BTreeMap<String, NodeId>,
    /// The defining (non-empty) occurrence of each label, if any.
    defs: BTreeMap<String, &'a RawNode>,
}

impl<'a> Builder<'a> {
    fn collect(&mut self, n: &'a RawNode) -> Result<(), ParseError> {
        if !self.ids.contains_key(&n.label) {
            let id = self.ids.len();
            self.ids.insert(n.label.clone(), id);
        }
        if !n.attrs.is_empty() {
            if let Some(prev) = self.defs.insert(n.label.clone(), n) {
                return Err(ParseError::new(
                    n.pos.0,
                    n.pos.1,
                    format!(
                        "duplicate label `{}` (first defined at {}:{})",
                        n.label, prev.pos.0, prev.pos.1
                    ),
                ));
            }
        }
        for (_, v, _) in &n.attrs {
            match v {
                RawValue::Node(c) => self.collect(c)?,
                RawValue::Set(ms) => ms.iter().try_for_each(|m| self.collect(m))?,
                RawValue::Atom(_) => {}
            }
        }
        Ok(())
    }

    fn node(&self, label: &str) -> Result<Node, ParseError> {
        let mut attrs: Vec<(String, Value)> = Vec::new();
        if let Some(def) = self.defs.get(label) {
            for (name, v, pos) in &def.attrs {
                if attrs.iter().any(|(a, _)| a == name) {
                    return Err(ParseError::new(
                        pos.0,
                        pos.1,
                        format!("duplicate attribute {name} in f-structure `{label}`"),
                    ));
                }
                let value = match v {
                    RawValue::Atom(s) => Value::Atom(s.clone()),
                    RawValue::Node(c) => Value::Node(self.ids[&c.label]),
                    RawValue::Set(ms) => {
                        let mut ids: Vec<NodeId> = Vec::new();
                        for m in ms {
                            let id = self.ids[&m.label];
                            if !ids.contains(&id) {
                                ids.push(id);
                            }
                        }
                        Value::Set(ids)
                    }
                };
                attrs.push((name.clone(), value));
            }
        }
        Ok(Node {
            label: label.to_string(),
            attrs,
        })
    }
}

/// Parses the bracket format, e.g.
/// `f:[PRED 'appoint'; SUBJ g:[PRED 'Bill']; OBJ h:[PRED 'Hillary']; MODS { i:[PRED 'obviously'] }]`.
///
/// A label written again with an empty body (`g:[]`) refers to the node defined elsewhere.
pub fn parse_fstructure(text: &str) -> Result<FStructure, ParseError> {
    let mut cur = Cursor::new(lex(text)?);
    let raw = parse_node(&mut cur)?;
    if !cur.at_end() {
        return Err(cur.unexpected("end of input"));
    }
    let mut b = Builder {
        ids: BTreeMap::new(),
        defs: BTreeMap::new(),
    };
    b.collect(&raw)?;
    let mut labels: Vec<(&String, &NodeId)> = b.ids.iter().collect();
    labels.sort_by_key(|(_, id)| **id);
    let nodes = labels
        .into_iter()
        .map(|(l, _)| b.node(l))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FStructure::from_parts(nodes, 0))
}
