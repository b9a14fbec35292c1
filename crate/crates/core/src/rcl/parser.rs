//! Recursive-descent parser. Each malformed declaration yields one error
//! diagnostic; parsing resumes at the next line that starts a declaration.

use crate::ontology::{Category, EntityId, Fact, Interval, Time};
use crate::procedure::{Event, ProcessTrace, Procedure, Step};
use crate::reasoner::{Atom, ChainSpec, Term};

use super::ast::{Ast, Decl, DeclKind, Diagnostic, RuleDecl};
use super::lexer::{SourceSpan, Token, TokenKind};

type PResult<T> = Result<T, Diagnostic>;

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
}

pub fn parse(tokens: &[Token]) -> (Ast, Vec<Diagnostic>) {
    let mut p = Parser { tokens, pos: 0 };
    let mut ast = Ast::default();
    let mut diagnostics = Vec::new();
    while p.pos < tokens.len() {
        let start = p.pos;
        match p.decl() {
            Ok(decl) => ast.decls.push(decl),
            Err(diag) => {
                diagnostics.push(diag);
                p.recover(start);
            }
        }
    }
    (ast, diagnostics)
}

fn starts_decl(tok: &Token) -> bool {
    match tok.kind {
        TokenKind::Identifier => true,
        TokenKind::Keyword => {
            matches!(
                tok.lexeme.as_str(),
                "kind" | "relation" | "rule" | "chain" | "procedure" | "trace"
            ) || Category::from_keyword(&tok.lexeme).is_some()
        }
        _ => false,
    }
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, ahead: usize) -> Option<&'t Token> {
        self.tokens.get(self.pos + ahead)
    }

    fn bump(&mut self) -> &'t Token {
        let tok = &self.tokens[self.pos];
        self.pos += 1;
        tok
    }

    fn last_span(&self) -> SourceSpan {
        self.pos
            .checked_sub(1)
            .and_then(|i| self.tokens.get(i))
            .map(|t| t.span)
            .unwrap_or_default()
    }

    fn eof_span(&self) -> SourceSpan {
        let Some(last) = self.tokens.last() else {
            return SourceSpan {
                line: 1,
                column: 1,
                length: 0,
                offset: 0,
            };
        };
        let last_chars = last.lexeme.chars().count();
        let last = last.span;
        SourceSpan {
            column: last.column + last_chars,
            offset: last.offset + last.length,
            length: 0,
            ..last
        }
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        match self.peek() {
            Some(tok) if tok.kind == TokenKind::Error => Diagnostic::error(
                tok.span,
                format!("unexpected character sequence '{}'", tok.lexeme),
            ),
            Some(tok) => Diagnostic::error(
                tok.span,
                format!("expected {expected}, found '{}'", tok.lexeme),
            ),
            None => Diagnostic::error(
                self.eof_span(),
                format!("expected {expected}, found end of input"),
            ),
        }
    }

    /// Skips past the failed declaration to the next line-initial token that
    /// can start a declaration.
    fn recover(&mut self, start: usize) {
        let mut i = self.pos.max(start + 1);
        while i < self.tokens.len() {
            let tok = &self.tokens[i];
            let line_start = self.tokens[i - 1].span.line < tok.span.line;
            if line_start && starts_decl(tok) {
                break;
            }
            i += 1;
        }
        self.pos = i;
    }

    fn punct(&mut self, p: &str) -> PResult<&'t Token> {
        match self.peek() {
            Some(tok) if tok.is_punct(p) => Ok(self.bump()),
            _ => Err(self.unexpected(&format!("'{p}'"))),
        }
    }

    fn keyword(&mut self, word: &str) -> PResult<&'t Token> {
        match self.peek() {
            Some(tok) if tok.is_keyword(word) => Ok(self.bump()),
            _ => Err(self.unexpected(&format!("'{word}'"))),
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Some(tok) if tok.kind == TokenKind::Identifier => Ok(self.bump().lexeme.clone()),
            Some(tok) if tok.kind == TokenKind::Keyword => Err(Diagnostic::error(
                tok.span,
                format!("'{}' is a reserved keyword and cannot name {what}", tok.lexeme),
            )),
            _ => Err(self.unexpected(what)),
        }
    }

    fn integer(&mut self) -> PResult<Time> {
        match self.peek() {
            Some(tok) if tok.kind == TokenKind::Integer => {
                let tok = self.bump();
                tok.lexeme.parse().map_err(|_| {
                    Diagnostic::error(tok.span, format!("integer '{}' out of range", tok.lexeme))
                })
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn category(&mut self) -> PResult<Category> {
        match self.peek() {
            Some(tok) if tok.kind == TokenKind::Keyword => {
                if let Some(c) = Category::from_keyword(&tok.lexeme) {
                    self.bump();
                    return Ok(c);
                }
                Err(self.unexpected("a category"))
            }
            _ => Err(self.unexpected("a category")),
        }
    }

    fn decl(&mut self) -> PResult<Decl> {
        let first = self.peek().expect("decl called at end of input");
        let start_span = first.span;
        let kind = match (first.kind, first.lexeme.as_str()) {
            (TokenKind::Keyword, "kind") => self.kind_decl()?,
            (TokenKind::Keyword, "relation") => self.relation_decl()?,
            (TokenKind::Keyword, "rule") => self.rule_decl()?,
            (TokenKind::Keyword, "chain") => self.chain_decl()?,
            (TokenKind::Keyword, "procedure") => self.procedure_decl()?,
            (TokenKind::Keyword, "trace") => self.trace_decl()?,
            (TokenKind::Keyword, word) if Category::from_keyword(word).is_some() => {
                self.bump();
                DeclKind::Individual {
                    kind: word.to_string(),
                    name: self.ident("an individual")?,
                }
            }
            (TokenKind::Identifier, _) => match self.peek_at(1) {
                Some(next) if next.is_punct("(") => DeclKind::Fact(self.fact()?),
                Some(next) if next.kind == TokenKind::Identifier => {
                    let kind = self.bump().lexeme.clone();
                    DeclKind::Individual {
                        kind,
                        name: self.ident("an individual")?,
                    }
                }
                _ => {
                    self.bump();
                    return Err(self.unexpected("'(' or an individual name"));
                }
            },
            _ => return Err(self.unexpected("a declaration")),
        };
        Ok(Decl {
            kind,
            span: start_span.to(self.last_span()),
        })
    }

    fn kind_decl(&mut self) -> PResult<DeclKind> {
        self.keyword("kind")?;
        let name = self.ident("a kind")?;
        self.punct("<:")?;
        let category = self.category()?;
        Ok(DeclKind::Kind { name, category })
    }

    fn relation_decl(&mut self) -> PResult<DeclKind> {
        self.keyword("relation")?;
        let name = self.ident("a relation")?;
        self.punct("(")?;
        let subject = self.category()?;
        self.punct(",")?;
        let object = self.category()?;
        self.punct(")")?;
        let base_only = match self.peek() {
            Some(tok) if tok.is_keyword("base") => {
                self.bump();
                true
            }
            _ => false,
        };
        Ok(DeclKind::Relation {
            name,
            subject,
            object,
            base_only,
        })
    }

    fn fact(&mut self) -> PResult<Fact> {
        let predicate = self.ident("a relation")?;
        self.punct("(")?;
        let subject = self.ident("an individual")?;
        self.punct(",")?;
        let object = self.ident("an individual")?;
        self.punct(")")?;
        let mut fact = Fact::new(&predicate, &subject, &object);
        if self.peek().is_some_and(|t| t.is_keyword("during")) {
            self.bump();
            let open = self.punct("[")?;
            let start = self.integer()?;
            self.punct(",")?;
            let end = self.integer()?;
            let close = self.punct("]")?;
            let extent = Interval::closed(start, end)
                .map_err(|e| Diagnostic::error(open.span.to(close.span), e.to_string()))?;
            fact = fact.during(extent);
        }
        Ok(fact)
    }

    fn term(&mut self) -> PResult<Term> {
        match self.peek() {
            Some(tok) if tok.kind == TokenKind::Variable => {
                Ok(Term::Var(self.bump().lexeme[1..].to_string()))
            }
            Some(tok) if tok.kind == TokenKind::Identifier => {
                Ok(Term::Const(EntityId::from(self.bump().lexeme.as_str())))
            }
            _ => Err(self.unexpected("a variable or individual")),
        }
    }

    /// `PRED(term)` or `PRED(term, term)`; category keywords may name
    /// unary tests.
    fn atom(&mut self) -> PResult<Atom> {
        let predicate = match self.peek() {
            Some(tok) if tok.kind == TokenKind::Identifier => self.bump().lexeme.clone(),
            Some(tok)
                if tok.kind == TokenKind::Keyword && Category::from_keyword(&tok.lexeme).is_some() =>
            {
                self.bump().lexeme.clone()
            }
            _ => return Err(self.unexpected("an atom")),
        };
        self.punct("(")?;
        let mut args = vec![self.term()?];
        if self.peek().is_some_and(|t| t.is_punct(",")) {
            self.bump();
            args.push(self.term()?);
        }
        self.punct(")")?;
        Ok(Atom { predicate, args })
    }

    fn rule_decl(&mut self) -> PResult<DeclKind> {
        self.keyword("rule")?;
        let name = match (self.peek(), self.peek_at(1)) {
            (Some(a), Some(b)) if a.kind == TokenKind::Identifier && b.is_punct(":") => {
                let name = self.bump().lexeme.clone();
                self.bump();
                Some(name)
            }
            _ => None,
        };
        let head = self.atom()?;
        self.punct(":-")?;
        let mut body = vec![self.atom()?];
        while self.peek().is_some_and(|t| t.is_punct(",")) {
            self.bump();
            body.push(self.atom()?);
        }
        self.punct(".")?;
        Ok(DeclKind::Rule(RuleDecl { name, head, body }))
    }

    fn chain_decl(&mut self) -> PResult<DeclKind> {
        self.keyword("chain")?;
        let derived = self.ident("a relation")?;
        self.punct("=")?;
        let first = self.ident("a relation")?;
        self.keyword("o")?;
        let second = self.ident("a relation")?;
        Ok(DeclKind::Chain(ChainSpec {
            derived,
            first,
            second,
        }))
    }

    fn procedure_decl(&mut self) -> PResult<DeclKind> {
        self.keyword("procedure")?;
        let name = self.ident("a procedure")?;
        let max_duration = if self.peek().is_some_and(|t| t.is_keyword("max")) {
            self.bump();
            Some(self.integer()?)
        } else {
            None
        };
        self.punct("{")?;
        let mut steps = Vec::new();
        while self.peek().is_some_and(|t| t.is_keyword("step")) {
            self.bump();
            let step = self.ident("a step")?;
            self.punct(":")?;
            let activity = self.ident("an activity")?;
            self.keyword("by")?;
            let role = self.ident("a role")?;
            let guard = if self.peek().is_some_and(|t| t.is_keyword("requires")) {
                self.bump();
                Some(EntityId::from(self.ident("a state")?))
            } else {
                None
            };
            steps.push(Step {
                name: step,
                activity: activity.into(),
                role: role.into(),
                guard,
            });
        }
        if steps.is_empty() {
            return Err(self.unexpected("'step'"));
        }
        self.punct("}")?;
        Ok(DeclKind::Procedure(Procedure {
            name: name.into(),
            steps,
            max_duration,
        }))
    }

    fn trace_decl(&mut self) -> PResult<DeclKind> {
        self.keyword("trace")?;
        let name = self.ident("a trace")?;
        self.punct("{")?;
        let mut events = Vec::new();
        while self.peek().is_some_and(|t| t.is_keyword("event")) {
            self.bump();
            let time = self.integer()?;
            let activity = self.ident("an activity")?;
            self.keyword("by")?;
            let actor = self.ident("an actor")?;
            events.push(Event {
                time,
                activity: activity.into(),
                actor: actor.into(),
            });
        }
        if events.is_empty() {
            return Err(self.unexpected("'event'"));
        }
        self.punct("}")?;
        Ok(DeclKind::Trace(ProcessTrace {
            name: name.into(),
            events,
        }))
    }
}
