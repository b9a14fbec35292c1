use std::fmt;

use crate::ontology::BUILTIN_KIND_KEYWORDS;

/// Position of a token or declaration in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SourceSpan {
    /// 1-based.
    pub line: usize,
    /// 1-based, counted in characters.
    pub column: usize,
    /// Length in bytes.
    pub length: usize,
    /// Byte offset of the first character.
    pub offset: usize,
}

impl SourceSpan {
    /// Span from the start of `self` to the end of `other`.
    pub fn to(self, other: SourceSpan) -> SourceSpan {
        SourceSpan {
            length: (other.offset + other.length).saturating_sub(self.offset),
            ..self
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Keyword,
    Identifier,
    Integer,
    Punctuation,
    Variable,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: SourceSpan,
}

impl Token {
    pub fn is_keyword(&self, word: &str) -> bool {
        self.kind == TokenKind::Keyword && self.lexeme == word
    }

    pub fn is_punct(&self, p: &str) -> bool {
        self.kind == TokenKind::Punctuation && self.lexeme == p
    }
}

/// Reserved words that are not category keywords.
pub const STRUCTURAL_KEYWORDS: [&str; 14] = [
    "kind", "relation", "rule", "chain", "procedure", "max", "step", "by", "requires", "trace",
    "event", "during", "o", "base",
];

pub fn is_keyword(word: &str) -> bool {
    STRUCTURAL_KEYWORDS.contains(&word) || BUILTIN_KIND_KEYWORDS.contains(&word)
}

struct Cursor<'a> {
    src: &'a str,
    offset: usize,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.offset..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.src[self.offset..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn eat_while(&mut self, pred: impl Fn(char) -> bool) {
        while self.peek().is_some_and(&pred) {
            self.bump();
        }
    }
}

/// Splits source text into tokens. Comments run from `#` to end of line and
/// are dropped. Characters outside the grammar become [`TokenKind::Error`]
/// tokens.
pub fn tokenize(source: &str) -> Vec<Token> {
    let mut cur = Cursor {
        src: source,
        offset: 0,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '#' {
            cur.eat_while(|c| c != '\n');
            continue;
        }
        let start = SourceSpan {
            line: cur.line,
            column: cur.column,
            length: 0,
            offset: cur.offset,
        };
        let kind = match c {
            'a'..='z' | 'A'..='Z' | '_' => {
                cur.eat_while(|c| c.is_ascii_alphanumeric() || c == '_');
                let word = &source[start.offset..cur.offset];
                if is_keyword(word) {
                    TokenKind::Keyword
                } else if crate::ontology::is_identifier(word) {
                    TokenKind::Identifier
                } else {
                    TokenKind::Error
                }
            }
            '0'..='9' => {
                cur.eat_while(|c| c.is_ascii_digit());
                TokenKind::Integer
            }
            '?' => {
                cur.bump();
                if cur.peek().is_some_and(|c| c.is_ascii_lowercase()) {
                    cur.eat_while(|c| c.is_ascii_alphanumeric() || c == '_');
                    TokenKind::Variable
                } else {
                    TokenKind::Error
                }
            }
            ':' => {
                cur.bump();
                if cur.peek() == Some('-') {
                    cur.bump();
                }
                TokenKind::Punctuation
            }
            '<' if cur.peek2() == Some(':') => {
                cur.bump();
                cur.bump();
                TokenKind::Punctuation
            }
            '(' | ')' | ',' | '.' | '{' | '}' | '[' | ']' | '=' => {
                cur.bump();
                TokenKind::Punctuation
            }
            _ => {
                cur.bump();
                TokenKind::Error
            }
        };
        let lexeme = source[start.offset..cur.offset].to_string();
        tokens.push(Token {
            kind,
            span: SourceSpan {
                length: lexeme.len(),
                ..start
            },
            lexeme,
        });
    }
    tokens
}
