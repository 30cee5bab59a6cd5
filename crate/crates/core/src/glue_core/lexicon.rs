use std::collections::BTreeMap;

use super::formula::{Formula, PathExpr, Sem};
use super::parse::FormulaParser;
use super::{GlueError, Premise, PremiseSet};
use crate::fstructure::{FStructure, NodeId, PathError, Resolved};
use crate::meaning::{parse_type, Signature};
use crate::syntax::{lex_at, Cursor, ParseError, Token};

/// One word's meaning-constructor template.
#[derive(Debug, Clone, PartialEq)]
pub struct LexicalEntry {
    pub headword: String,
    /// Lower-cased lookup key matched against `SPEC-PRED` or `PRED`.
    pub key: String,
    pub template: Formula,
    pub line: usize,
}

/// Constant declarations plus lexical entries.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    signature: Signature,
    entries: Vec<LexicalEntry>,
    by_headword: BTreeMap<String, usize>,
    by_key: BTreeMap<String, usize>,
}

enum Logical {
    Const {
        names: Vec<(String, (usize, usize))>,
        ty: Vec<Token>,
    },
    Entry {
        headword: String,
        key: Option<String>,
        toks: Vec<Token>,
        line: usize,
    },
}

fn is_comment(trimmed: &str) -> bool {
    trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with("//")
}

/// Splits `head: rest` and lexes `rest` with its real position.
fn split_header(text: &str, line: usize) -> Result<(&str, Vec<Token>), ParseError> {
    let colon = text.find(':').ok_or_else(|| {
        ParseError::new(
            line,
            1,
            "expected `headword: template` or `const name, ...: type`",
        )
    })?;
    let col = text[..=colon].chars().count() + 1;
    let toks = lex_at(&text[colon + 1..], line, col)?;
    Ok((&text[..colon], toks))
}

fn parse_header(head: &str, line: usize) -> Result<(String, Option<String>), ParseError> {
    let trimmed = head.trim();
    let (word, rest) = match trimmed.find(|c: char| c.is_whitespace() || c == '\'') {
        Some(i) => (&trimmed[..i], trimmed[i..].trim()),
        None => (trimmed, ""),
    };
    if word.is_empty() {
        return Err(ParseError::new(line, 1, "missing headword"));
    }
    let key = if rest.is_empty() {
        None
    } else if rest.len() >= 2 && rest.starts_with('\'') && rest.ends_with('\'') {
        Some(rest[1..rest.len() - 1].to_string())
    } else {
        let col = head.find(rest).unwrap_or(0) + 1;
        return Err(ParseError::new(
            line,
            col,
            format!("expected a quoted lookup key after `{word}`, found `{rest}`"),
        ));
    };
    Ok((word.to_string(), key))
}

/// A declared name with its line and column.
type Located = (String, (usize, usize));

fn parse_const_names(head: &str, line: usize) -> Result<Vec<Located>, ParseError> {
    let start = head.find("const").unwrap_or(0) + "const".len();
    let mut out = Vec::new();
    let mut offset = start;
    for part in head[start..].split(',') {
        let name = part.trim();
        let col = offset + part.find(name).unwrap_or(0) + 1;
        offset += part.len() + 1;
        let valid = name
            .chars()
            .next()
            .is_some_and(|c| c.is_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !valid {
            return Err(ParseError::new(
                line,
                col,
                format!("invalid constant name `{name}`"),
            ));
        }
        out.push((name.to_string(), (line, col)));
    }
    Ok(out)
}

fn logical_lines(text: &str) -> Result<Vec<Logical>, ParseError> {
    let mut out: Vec<Logical> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if is_comment(trimmed) {
            continue;
        }
        if raw.starts_with(char::is_whitespace) {
            let more = lex_at(raw, line, 1)?;
            match out.last_mut() {
                Some(Logical::Entry { toks, .. }) | Some(Logical::Const { ty: toks, .. }) => {
                    toks.pop();
                    toks.extend(more);
                    continue;
                }
                None => {
                    return Err(ParseError::new(
                        line,
                        1,
                        "continuation line without a preceding entry",
                    ))
                }
            }
        }
        let (head, toks) = split_header(raw, line)?;
        if head.trim_start().starts_with("const ") {
            out.push(Logical::Const {
                names: parse_const_names(head, line)?,
                ty: toks,
            });
        } else {
            let (headword, key) = parse_header(head, line)?;
            out.push(Logical::Entry {
                headword,
                key,
                toks,
                line,
            });
        }
    }
    Ok(out)
}

impl Lexicon {
    /// Reads a lexicon file. Each entry starts on its own line; an indented line continues
    /// the previous one.
    ///
    /// ```text
    /// const Bill, Hillary: e
    /// const appoint: e -> e -> t
    /// bill: ^ ~> Bill
    /// appointed 'appoint': forall X:e, Y:e. (^ SUBJ) ~> X * (^ OBJ) ~> Y -o ^ ~> appoint(X,Y)
    /// ```
    pub fn parse(text: &str) -> Result<Lexicon, ParseError> {
        let logical = logical_lines(text)?;
        let mut lex = Lexicon::default();
        for l in &logical {
            if let Logical::Const { names, ty } = l {
                let mut cur = Cursor::new(ty.clone());
                let ty = parse_type(&mut cur)?;
                if !cur.at_end() {
                    return Err(cur.unexpected("end of type"));
                }
                for (name, (line, col)) in names {
                    lex.signature
                        .declare(name.clone(), ty.clone())
                        .map_err(|m| ParseError::new(*line, *col, m))?;
                }
            }
        }
        for l in logical {
            let Logical::Entry {
                headword,
                key,
                toks,
                line,
            } = l
            else {
                continue;
            };
            let mut cur = Cursor::new(toks);
            let template = FormulaParser::new(&lex.signature, true).formula(&mut cur)?;
            if !cur.at_end() {
                return Err(cur.unexpected("end of template"));
            }
            let key = key.unwrap_or_else(|| headword.clone()).to_lowercase();
            let hw = headword.to_lowercase();
            if let Some(&prev) = lex.by_headword.get(&hw) {
                return Err(ParseError::new(
                    line,
                    1,
                    format!(
                        "duplicate headword `{headword}` (first entry on line {})",
                        lex.entries[prev].line
                    ),
                ));
            }
            if let Some(&prev) = lex.by_key.get(&key) {
                return Err(ParseError::new(
                    line,
                    1,
                    format!(
                        "lookup key `{key}` is already used by `{}` on line {}",
                        lex.entries[prev].headword, lex.entries[prev].line
                    ),
                ));
            }
            let idx = lex.entries.len();
            lex.by_headword.insert(hw, idx);
            lex.by_key.insert(key.clone(), idx);
            lex.entries.push(LexicalEntry {
                headword,
                key,
                template,
                line,
            });
        }
        Ok(lex)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn entries(&self) -> &[LexicalEntry] {
        &self.entries
    }

    /// Entry by headword (case-insensitive).
    pub fn get(&self, headword: &str) -> Option<&LexicalEntry> {
        self.by_headword
            .get(&headword.to_lowercase())
            .map(|&i| &self.entries[i])
    }

    /// Entry by lookup key (case-insensitive).
    pub fn lookup(&self, key: &str) -> Option<&LexicalEntry> {
        self.by_key
            .get(&key.to_lowercase())
            .map(|&i| &self.entries[i])
    }

    /// The entry contributed by a node: `SPEC-PRED` (e.g. `every-candidate`) if the node
    /// has a SPEC and such an entry exists, otherwise `PRED`. `Err` carries the key tried.
    pub fn entry_for(
        &self,
        fs: &FStructure,
        node: NodeId,
    ) -> Result<Option<&LexicalEntry>, String> {
        let Some(pred) = fs.atom(node, "PRED") else {
            return Ok(None);
        };
        if let Some(spec) = fs.atom(node, "SPEC") {
            let combined = format!("{}-{}", spec.text, pred.text);
            if let Some(e) = self.lookup(&combined) {
                return Ok(Some(e));
            }
            return self.lookup(&pred.text).map(Some).ok_or(combined);
        }
        self.lookup(&pred.text).map(Some).ok_or(pred.text.clone())
    }
}

/// See [`Lexicon::parse`].
pub fn parse_lexicon(text: &str) -> Result<Lexicon, ParseError> {
    Lexicon::parse(text)
}

fn resolve(
    path: &PathExpr,
    fs: &FStructure,
    up: NodeId,
    entry: &LexicalEntry,
) -> Result<NodeId, GlueError> {
    let fail = |attr: Option<String>, reason: String| GlueError::Uninstantiable {
        word: entry.headword.clone(),
        node: fs.label(up).to_string(),
        attr,
        reason,
    };
    match path {
        PathExpr::Up => Ok(up),
        PathExpr::Mod(base) => {
            let n = resolve(base, fs, up, entry)?;
            fs.set_owner(n).ok_or_else(|| {
                fail(
                    None,
                    format!("{} is not a member of any MODS set", fs.label(n)),
                )
            })
        }
        PathExpr::Attrs(base, attrs) => {
            let n = resolve(base, fs, up, entry)?;
            let names: Vec<&str> = attrs.iter().map(String::as_str).collect();
            match fs.resolve_path(n, &names) {
                Ok(Resolved::Node(m)) => Ok(m),
                Ok(_) => Err(fail(
                    attrs.last().cloned(),
                    format!("{path} is not an f-structure"),
                )),
                Err(e) => {
                    let attr = match &e {
                        PathError::MissingAttribute { attr, .. }
                        | PathError::NotAStructure { attr } => Some(attr.clone()),
                        PathError::Empty => None,
                    };
                    Err(fail(attr, e.to_string()))
                }
            }
        }
    }
}

/// Instantiates `entry` for the word heading `node`: `^` becomes `node` and every path is
/// resolved and σ-projected. The result is closed and has the template's shape.
pub fn instantiate(
    entry: &LexicalEntry,
    fs: &FStructure,
    node: NodeId,
) -> Result<Formula, GlueError> {
    entry.template.try_map_sems(&mut |s| match s {
        Sem::Path(p) => Ok(Sem::Node(fs.sigma(resolve(p, fs, node, entry)?))),
        other => Ok(other.clone()),
    })
}

/// One premise per node carrying a PRED, in pre-order (MODS members included).
pub fn premises(fs: &FStructure, lexicon: &Lexicon) -> Result<PremiseSet, GlueError> {
    let mut out = Vec::new();
    for node in fs.preorder() {
        let entry = match lexicon.entry_for(fs, node) {
            Ok(Some(e)) => e,
            Ok(None) => continue,
            Err(key) => {
                return Err(GlueError::MissingEntry {
                    key,
                    node: fs.label(node).to_string(),
                })
            }
        };
        out.push(Premise {
            formula: instantiate(entry, fs, node)?,
            word: entry.headword.clone(),
            node: Some(fs.label(node).to_string()),
        });
    }
    Ok(PremiseSet::new(out).with_universe(fs.sem_structures()))
}
