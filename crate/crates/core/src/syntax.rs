//! Tokenizer and cursor shared by the term, formula, lexicon and f-structure readers.

use std::fmt;

/// A syntax error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Quoted(String),
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Colon,
    Comma,
    Dot,
    Lambda,
    Caret,
    Means,
    MeansTyped,
    Tensor,
    Lolli,
    Arrow,
    Forall,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Quoted(s) => write!(f, "`'{s}'`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Lambda => f.write_str("`\\`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Means => f.write_str("`~>`"),
            Tok::MeansTyped => f.write_str("`~>_`"),
            Tok::Tensor => f.write_str("`*`"),
            Tok::Lolli => f.write_str("`-o`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Forall => f.write_str("`forall`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Tokenizes `text`, reporting positions relative to `line`/`col` of its first character.
pub(crate) fn lex_at(text: &str, line: usize, col: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut ln, mut cl) = (line, col);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (ln, cl);
        let mut push = |tok: Tok, width: usize, i: &mut usize, cl: &mut usize| {
            out.push(Token {
                tok,
                line: tl,
                col: tc,
            });
            *i += width;
            *cl += width;
        };
        match c {
            '\n' => {
                i += 1;
                ln += 1;
                cl = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                cl += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '[' => push(Tok::LBracket, 1, &mut i, &mut cl),
            ']' => push(Tok::RBracket, 1, &mut i, &mut cl),
            '{' => push(Tok::LBrace, 1, &mut i, &mut cl),
            '}' => push(Tok::RBrace, 1, &mut i, &mut cl),
            '(' => push(Tok::LParen, 1, &mut i, &mut cl),
            ')' => push(Tok::RParen, 1, &mut i, &mut cl),
            ';' => push(Tok::Semi, 1, &mut i, &mut cl),
            ':' => push(Tok::Colon, 1, &mut i, &mut cl),
            ',' => push(Tok::Comma, 1, &mut i, &mut cl),
            '.' => push(Tok::Dot, 1, &mut i, &mut cl),
            '\\' | 'λ' => push(Tok::Lambda, 1, &mut i, &mut cl),
            '^' | '↑' => push(Tok::Caret, 1, &mut i, &mut cl),
            '*' | '⊗' => push(Tok::Tensor, 1, &mut i, &mut cl),
            '⊸' => push(Tok::Lolli, 1, &mut i, &mut cl),
            '→' => push(Tok::Arrow, 1, &mut i, &mut cl),
            '∀' => push(Tok::Forall, 1, &mut i, &mut cl),
            '⤳' | '~' => {
                let width = if c == '~' {
                    if chars.get(i + 1) != Some(&'>') {
                        return Err(ParseError::new(tl, tc, "expected `~>`"));
                    }
                    2
                } else {
                    1
                };
                if chars.get(i + width) == Some(&'_') {
                    push(Tok::MeansTyped, width + 1, &mut i, &mut cl);
                } else {
                    push(Tok::Means, width, &mut i, &mut cl);
                }
            }
            '-' => match chars.get(i + 1) {
                Some('>') => push(Tok::Arrow, 2, &mut i, &mut cl),
                Some('o') if !chars.get(i + 2).is_some_and(|&c| is_ident_continue(c)) => {
                    push(Tok::Lolli, 2, &mut i, &mut cl)
                }
                _ => return Err(ParseError::new(tl, tc, "unexpected `-`")),
            },
            '\'' | '`' => {
                let mut j = i + 1;
                let mut sym = String::new();
                while j < chars.len() && chars[j] != '\'' && chars[j] != '\n' {
                    sym.push(chars[j]);
                    j += 1;
                }
                if chars.get(j) != Some(&'\'') {
                    return Err(ParseError::new(tl, tc, "unterminated quoted symbol"));
                }
                let width = j + 1 - i;
                push(Tok::Quoted(sym), width, &mut i, &mut cl);
            }
            c if is_ident_start(c) => {
                let mut j = i;
                let mut name = String::new();
                while j < chars.len() && is_ident_continue(chars[j]) {
                    name.push(chars[j]);
                    j += 1;
                }
                let width = j - i;
                let tok = if name == "forall" {
                    Tok::Forall
                } else {
                    Tok::Ident(name)
                };
                push(tok, width, &mut i, &mut cl);
            }
            other => {
                return Err(ParseError::new(
                    tl,
                    tc,
                    format!("unexpected character `{other}`"),
                ))
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line: ln,
        col: cl,
    });
    Ok(out)
}

pub(crate) fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    lex_at(text, 1, 1)
}

pub(crate) struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Token>) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("{tok}")))
        }
    }

    pub fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError::new(line, col, message)
    }

    pub fn unexpected(&self, wanted: &str) -> ParseError {
        self.error(format!("expected {wanted}, found {}", self.peek()))
    }

    pub fn save(&self) -> usize {
        self.pos
    }

    pub fn restore(&mut self, pos: usize) {
        self.pos = pos;
    }

    pub fn at_end(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }
}
