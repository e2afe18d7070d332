//! Tensor index notation: `ref (=|+=) term (* term)*`.

use synstitch_core::{Diagnostic, SourceSpan, Token, TokenKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorRef {
    pub name: String,
    pub span: SourceSpan,
    /// Empty for a scalar (order-0) tensor.
    pub indices: Vec<String>,
}

impl TensorRef {
    pub fn order(&self) -> usize {
        self.indices.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssignOp {
    Assign,
    Accumulate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Tensor(TensorRef),
    /// Spelling of a numeric literal factor; negative ones are
    /// parenthesized.
    Literal(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexExpr {
    pub target: TensorRef,
    pub op: AssignOp,
    pub terms: Vec<Term>,
}

impl IndexExpr {
    pub fn operands(&self) -> impl Iterator<Item = &TensorRef> {
        self.terms.iter().filter_map(|t| match t {
            Term::Tensor(r) => Some(r),
            Term::Literal(_) => None,
        })
    }

    /// Target first, then operands in order of appearance.
    pub fn refs(&self) -> impl Iterator<Item = &TensorRef> {
        std::iter::once(&self.target).chain(self.operands())
    }

    /// Distinct tensor names, target first.
    pub fn tensor_names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = Vec::new();
        for r in self.refs() {
            if !names.contains(&r.name.as_str()) {
                names.push(&r.name);
            }
        }
        names
    }

    pub fn free_indices(&self) -> Vec<&str> {
        self.target.indices.iter().map(String::as_str).collect()
    }

    /// Indices that appear only on the right, in order of first appearance.
    pub fn reduction_indices(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for r in self.operands() {
            for i in &r.indices {
                if !self.target.indices.contains(i) && !out.contains(&i.as_str()) {
                    out.push(i);
                }
            }
        }
        out
    }
}

fn unsupported(span: SourceSpan, what: &str) -> Diagnostic {
    Diagnostic::error(format!("unsupported notation: {what}"), span)
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    /// Location used when the input ends early.
    end_span: SourceSpan,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> SourceSpan {
        self.peek().map_or(self.end_span, |t| t.span)
    }

    fn eat(&mut self, p: &str) -> bool {
        if self.peek().is_some_and(|t| t.is_punct(p)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn tensor_ref(&mut self) -> Result<TensorRef, Diagnostic> {
        let Some(name) = self.peek().filter(|t| t.kind == TokenKind::Identifier) else {
            return Err(unsupported(self.here(), "expected a tensor name"));
        };
        self.pos += 1;
        if !self.eat("(") {
            return Err(unsupported(self.here(), &format!("expected `(` after tensor `{}`", name.spelling)));
        }
        let mut indices: Vec<String> = Vec::new();
        if !self.eat(")") {
            loop {
                let Some(idx) = self.peek().filter(|t| t.kind == TokenKind::Identifier) else {
                    return Err(unsupported(self.here(), "expected an index variable"));
                };
                if indices.contains(&idx.spelling) {
                    return Err(unsupported(idx.span, &format!("index `{}` repeated in one tensor", idx.spelling)));
                }
                indices.push(idx.spelling.clone());
                self.pos += 1;
                if self.eat(")") {
                    break;
                }
                if !self.eat(",") {
                    return Err(unsupported(self.here(), "expected `,` or `)` in index list"));
                }
            }
        }
        Ok(TensorRef { name: name.spelling.clone(), span: name.span, indices })
    }

    fn term(&mut self) -> Result<Term, Diagnostic> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Number => {
                self.pos += 1;
                Ok(Term::Literal(t.spelling.clone()))
            }
            Some(t) if t.is_punct("-") && self.toks.get(self.pos + 1).is_some_and(|n| n.kind == TokenKind::Number) => {
                self.pos += 2;
                Ok(Term::Literal(format!("(-{})", self.toks[self.pos - 1].spelling)))
            }
            Some(t) if t.is_punct("(") => Err(unsupported(t.span, "parenthesized expressions")),
            _ => self.tensor_ref().map(Term::Tensor),
        }
    }
}

/// Parses the single index-notation statement of a function body.
/// `end_span` locates errors about missing input, normally the body's
/// closing brace or the function name.
pub fn parse_index_notation(body: &[Token], end_span: SourceSpan) -> Result<IndexExpr, Diagnostic> {
    if body.is_empty() {
        return Err(Diagnostic::error("empty tensor index notation", end_span));
    }
    let mut p = Parser { toks: body, pos: 0, end_span };
    let target = p.tensor_ref()?;
    let op = if p.eat("=") {
        AssignOp::Assign
    } else if p.eat("+=") {
        AssignOp::Accumulate
    } else {
        return Err(unsupported(p.here(), "expected `=` or `+=`"));
    };
    let mut terms = vec![p.term()?];
    loop {
        match p.peek() {
            None => break,
            Some(t) if t.is_punct("*") => {
                p.pos += 1;
                terms.push(p.term()?);
            }
            Some(t) if t.is_punct(";") => {
                p.pos += 1;
                if let Some(extra) = p.peek() {
                    return Err(Diagnostic::error("multiple statements in tensor index notation", extra.span));
                }
                break;
            }
            Some(t) => return Err(unsupported(t.span, &format!("operator `{}`", t.spelling))),
        }
    }
    let expr = IndexExpr { target, op, terms };
    for r in expr.operands() {
        if r.name == expr.target.name {
            return Err(unsupported(r.span, &format!("target `{}` also appears on the right", r.name)));
        }
    }
    for idx in &expr.target.indices {
        if !expr.operands().any(|r| r.indices.contains(idx)) {
            return Err(Diagnostic::error(
                format!("free index `{idx}` of `{}` does not appear on the right", expr.target.name),
                expr.target.span,
            ));
        }
    }
    let names = expr.tensor_names();
    for r in expr.refs() {
        if let Some(clash) = r.indices.iter().find(|i| names.contains(&i.as_str())) {
            return Err(Diagnostic::error(format!("index `{clash}` has the same name as a tensor"), r.span));
        }
    }
    Ok(expr)
}
