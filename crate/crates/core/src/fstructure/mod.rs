//! LFG f-structures: attribute-value matrices with labelled nodes, and their
//! projection to semantic structures.

mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use parse::parse_fstructure;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    pub text: String,
    /// Written as `'sym'` (semantic forms) rather than a bare identifier.
    pub quoted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Node(NodeId),
    Atom(Symbol),
    Set(Vec<NodeId>),
}

#[derive(Debug, Clone)]
pub struct Node {
    pub label: String,
    pub attrs: Vec<(String, Value)>,
}

/// A parsed analysis: an arena of uniquely labelled nodes reachable from `root`.
#[derive(Debug, Clone)]
pub struct FStructure {
    nodes: Vec<Node>,
    root: NodeId,
    by_label: BTreeMap<String, NodeId>,
    set_owner: Vec<Option<NodeId>>,
}

/// The semantic projection of an f-structure node, written `f_σ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SemStructure {
    label: String,
}

impl SemStructure {
    pub fn new(label: impl Into<String>) -> Self {
        SemStructure {
            label: label.into(),
        }
    }

    /// Label of the f-structure this projects from.
    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Display for SemStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_σ", self.label)
    }
}

/// What a path resolves to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolved<'a> {
    Node(NodeId),
    Atom(&'a Symbol),
    Set(&'a [NodeId]),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("empty attribute path")]
    Empty,
    #[error("f-structure {node} has no attribute {attr}")]
    MissingAttribute { node: String, attr: String },
    #[error("attribute {attr} does not lead to an f-structure (cannot follow it further)")]
    NotAStructure { attr: String },
}

impl FStructure {
    pub fn parse(text: &str) -> Result<Self, crate::ParseError> {
        parse_fstructure(text)
    }

    pub(crate) fn from_parts(nodes: Vec<Node>, root: NodeId) -> Self {
        let by_label = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.label.clone(), i))
            .collect();
        let mut set_owner = vec![None; nodes.len()];
        for (owner, node) in nodes.iter().enumerate() {
            for (_, v) in &node.attrs {
                if let Value::Set(members) = v {
                    for &m in members {
                        set_owner[m].get_or_insert(owner);
                    }
                }
            }
        }
        FStructure {
            nodes,
            root,
            by_label,
            set_owner,
        }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.nodes[id].label
    }

    pub fn lookup(&self, label: &str) -> Option<NodeId> {
        self.by_label.get(label).copied()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Attribute lookup; names are matched case-insensitively.
    pub fn attr(&self, id: NodeId, name: &str) -> Option<&Value> {
        let name = name.to_ascii_uppercase();
        self.nodes[id]
            .attrs
            .iter()
            .find(|(a, _)| *a == name)
            .map(|(_, v)| v)
    }

    /// Atomic value of an attribute, if it has one.
    pub fn atom(&self, id: NodeId, name: &str) -> Option<&Symbol> {
        match self.attr(id, name) {
            Some(Value::Atom(s)) => Some(s),
            _ => None,
        }
    }

    /// The node whose set-valued attribute (e.g. MODS) contains `id`.
    pub fn set_owner(&self, id: NodeId) -> Option<NodeId> {
        self.set_owner[id]
    }

    /// Follows `path` from `from`, e.g. `[SUBJ]` or `[OBJ, PRED]`.
    pub fn resolve_path(&self, from: NodeId, path: &[&str]) -> Result<Resolved<'_>, PathError> {
        let (last, init) = path.split_last().ok_or(PathError::Empty)?;
        let mut cur = from;
        for attr in init {
            match self.step(cur, attr)? {
                Value::Node(n) => cur = *n,
                _ => {
                    return Err(PathError::NotAStructure {
                        attr: attr.to_ascii_uppercase(),
                    })
                }
            }
        }
        Ok(match self.step(cur, last)? {
            Value::Node(n) => Resolved::Node(*n),
            Value::Atom(s) => Resolved::Atom(s),
            Value::Set(ms) => Resolved::Set(ms),
        })
    }

    fn step(&self, node: NodeId, attr: &str) -> Result<&Value, PathError> {
        self.attr(node, attr)
            .ok_or_else(|| PathError::MissingAttribute {
                node: self.label(node).to_string(),
                attr: attr.to_ascii_uppercase(),
            })
    }

    /// The semantic projection of a node.
    pub fn sigma(&self, id: NodeId) -> SemStructure {
        SemStructure::new(self.label(id))
    }

    /// The node a semantic structure projects from.
    pub fn node_of(&self, sem: &SemStructure) -> Option<NodeId> {
        self.lookup(sem.label())
    }

    /// Nodes in pre-order from the root, following attributes in written order.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut seen = vec![false; self.nodes.len()];
        let mut out = Vec::new();
        self.visit(self.root, &mut seen, &mut out);
        out
    }

    fn visit(&self, id: NodeId, seen: &mut [bool], out: &mut Vec<NodeId>) {
        if std::mem::replace(&mut seen[id], true) {
            return;
        }
        out.push(id);
        for (_, v) in &self.nodes[id].attrs {
            match v {
                Value::Node(n) => self.visit(*n, seen, out),
                Value::Set(ms) => ms.iter().for_each(|m| self.visit(*m, seen, out)),
                Value::Atom(_) => {}
            }
        }
    }

    /// Semantic structures of every node, in pre-order.
    pub fn sem_structures(&self) -> Vec<SemStructure> {
        self.preorder().into_iter().map(|n| self.sigma(n)).collect()
    }

    fn write_node(&self, id: NodeId, printed: &mut [bool], out: &mut String) {
        let node = &self.nodes[id];
        out.push_str(&node.label);
        out.push_str(":[");
        if std::mem::replace(&mut printed[id], true) {
            out.push(']');
            return;
        }
        for (k, (attr, v)) in node.attrs.iter().enumerate() {
            if k > 0 {
                out.push_str("; ");
            }
            out.push_str(attr);
            out.push(' ');
            match v {
                Value::Atom(s) if s.quoted => {
                    out.push('\'');
                    out.push_str(&s.text);
                    out.push('\'');
                }
                Value::Atom(s) => out.push_str(&s.text),
                Value::Node(n) => self.write_node(*n, printed, out),
                Value::Set(ms) => {
                    out.push('{');
                    for (j, m) in ms.iter().enumerate() {
                        out.push_str(if j > 0 { "; " } else { " " });
                        self.write_node(*m, printed, out);
                    }
                    out.push_str(" }");
                }
            }
        }
        out.push(']');
    }
}

impl fmt::Display for FStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut printed = vec![false; self.nodes.len()];
        let mut out = String::new();
        self.write_node(self.root, &mut printed, &mut out);
        f.write_str(&out)
    }
}

/// Label-preserving isomorphism; set members compare as sets.
impl PartialEq for FStructure {
    fn eq(&self, other: &Self) -> bool {
        if self.label(self.root) != other.label(other.root) || self.len() != other.len() {
            return false;
        }
        let labels = |fs: &FStructure, ms: &[NodeId]| -> BTreeSet<String> {
            ms.iter().map(|m| fs.label(*m).to_string()).collect()
        };
        self.nodes.iter().all(|node| {
            let Some(oid) = other.lookup(&node.label) else {
                return false;
            };
            let onode = other.node(oid);
            node.attrs.len() == onode.attrs.len()
                && node
                    .attrs
                    .iter()
                    .all(|(a, v)| match (v, other.attr(oid, a)) {
                        (Value::Atom(s), Some(Value::Atom(t))) => s == t,
                        (Value::Node(n), Some(Value::Node(m))) => self.label(*n) == other.label(*m),
                        (Value::Set(xs), Some(Value::Set(ys))) => {
                            labels(self, xs) == labels(other, ys)
                        }
                        _ => false,
                    })
        })
    }
}
