//! Discovery of syntax-tagged functions and capture of their bodies.

mod declarator;

use std::collections::HashMap;

pub use declarator::{parse_declarator, Declarator, Param};

use crate::cpptok::{SourceSpan, Token, TokenKind};
use crate::diag::Diagnostic;

/// A function tagged for a syntax handler, with its body still in token form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxFunction {
    pub declarator: Declarator,
    /// Tokens strictly between the outer `{` and its matching `}`.
    pub body_tokens: Vec<Token>,
    pub open_brace: SourceSpan,
    pub close_brace: SourceSpan,
    /// From the start of the attribute through the closing `}`.
    pub full_span: SourceSpan,
}

#[derive(Clone, Debug, Default)]
pub struct ScanResult {
    pub functions: Vec<SyntaxFunction>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Returns the index of the `}` matching the `{` at `open`.
///
/// Only `{` and `}` punctuators are counted; braces inside literals were
/// already hidden by the tokenizer.
pub fn capture_balanced(tokens: &[Token], open: usize) -> Result<usize, Diagnostic> {
    let open_tok = &tokens[open];
    debug_assert!(open_tok.is_punct("{"));
    let mut depth = 0usize;
    for (i, t) in tokens.iter().enumerate().skip(open) {
        if t.kind != TokenKind::Punct {
            continue;
        }
        match t.spelling.as_str() {
            "{" => depth += 1,
            "}" => {
                depth -= 1;
                if depth == 0 {
                    return Ok(i);
                }
            }
            _ => {}
        }
    }
    Err(Diagnostic::error("unbalanced `{`: end of file before the matching `}`", open_tok.span))
}

/// Checks `()` and `[]` nesting inside a captured body.
fn check_body_delimiters(body: &[Token]) -> Result<(), Diagnostic> {
    let mut stack: Vec<&Token> = Vec::new();
    for t in body.iter().filter(|t| t.kind == TokenKind::Punct) {
        match t.spelling.as_str() {
            "(" | "[" | "{" => stack.push(t),
            ")" | "]" | "}" => {
                let want = match t.spelling.as_str() {
                    ")" => "(",
                    "]" => "[",
                    _ => "{",
                };
                match stack.pop() {
                    Some(o) if o.spelling == want => {}
                    Some(o) => {
                        return Err(Diagnostic::error(
                            format!("unbalanced `{}` in syntax body: closed by `{}`", o.spelling, t.spelling),
                            o.span,
                        ))
                    }
                    None => {
                        return Err(Diagnostic::error(format!("unbalanced `{}` in syntax body", t.spelling), t.span))
                    }
                }
            }
            _ => {}
        }
    }
    match stack.pop() {
        Some(o) => Err(Diagnostic::error(format!("unbalanced `{}` in syntax body", o.spelling), o.span)),
        None => Ok(()),
    }
}

/// Matches `[[clang::syntax(NAME)]]` at `i`.
///
/// Returns `None` when the tokens are not a syntax attribute at all, and
/// `Some(Err)` when they start like one but are malformed.
fn match_attribute(tokens: &[Token], i: usize) -> Option<Result<(String, usize), Diagnostic>> {
    let at = |k: usize| tokens.get(i + k);
    let prefix = ["[", "[", "clang", "::", "syntax"];
    for (k, want) in prefix.iter().enumerate() {
        let t = at(k)?;
        if t.spelling != *want {
            return None;
        }
    }
    let shape_ok = at(5).is_some_and(|t| t.is_punct("("))
        && at(6).is_some_and(|t| t.is_identifier())
        && at(7).is_some_and(|t| t.is_punct(")"))
        && at(8).is_some_and(|t| t.is_punct("]"))
        && at(9).is_some_and(|t| t.is_punct("]"));
    if !shape_ok {
        return Some(Err(Diagnostic::error(
            "malformed syntax attribute; expected `[[clang::syntax(NAME)]]`",
            tokens[i].span,
        )));
    }
    Some(Ok((tokens[i + 6].spelling.clone(), i + 10)))
}

/// The attribute starts a declaration: it follows a statement or block
/// boundary, a directive line, or another attribute.
fn in_prefix_position(tokens: &[Token], i: usize, directive_end: usize) -> bool {
    if i == 0 || i == directive_end {
        return true;
    }
    let prev = &tokens[i - 1];
    prev.kind == TokenKind::Punct && matches!(prev.spelling.as_str(), ";" | "{" | "}" | "]" | ":")
}

/// Finds every syntax-tagged function definition in `tokens`.
///
/// `aliases` maps alias identifiers (e.g. `__qpu__`) to syntax names.
/// Preprocessor directive lines are skipped.
pub fn find_syntax_functions(tokens: &[Token], aliases: &HashMap<String, String>) -> ScanResult {
    let mut result = ScanResult::default();
    let mut i = 0;
    // Index just past the most recent directive line.
    let mut directive_end = 0;
    while i < tokens.len() {
        let t = &tokens[i];
        if t.at_line_start && t.is_punct("#") {
            i += 1;
            while i < tokens.len() && !tokens[i].at_line_start {
                i += 1;
            }
            directive_end = i;
            continue;
        }

        let attr = if t.is_punct("[") {
            match match_attribute(tokens, i) {
                Some(Ok((name, next))) => Some((name, next)),
                Some(Err(d)) => {
                    result.diagnostics.push(d);
                    i += 1;
                    continue;
                }
                None => None,
            }
        } else if t.is_identifier() {
            aliases.get(&t.spelling).map(|name| (name.clone(), i + 1))
        } else {
            None
        };
        let Some((attr_name, decl_start)) = attr else {
            i += 1;
            continue;
        };
        let attr_span = t.span.to(tokens[decl_start - 1].span);

        if !in_prefix_position(tokens, i, directive_end) {
            result.diagnostics.push(Diagnostic::warning(
                "syntax attribute is only recognized before a function declaration; ignored",
                attr_span,
            ));
            i = decl_start;
            continue;
        }

        match capture_function(tokens, i, decl_start, attr_name, attr_span) {
            Ok((f, next)) => {
                result.functions.push(f);
                i = next;
            }
            Err((d, next)) => {
                result.diagnostics.push(d);
                i = next;
            }
        }
    }
    result
}

type Captured = Result<(SyntaxFunction, usize), (Diagnostic, usize)>;

fn capture_function(
    tokens: &[Token],
    attr_start: usize,
    decl_start: usize,
    attr_name: String,
    attr_span: SourceSpan,
) -> Captured {
    // Header runs to the first `{` or `;` outside parentheses.
    let mut depth = 0usize;
    let mut open = None;
    for (k, t) in tokens.iter().enumerate().skip(decl_start) {
        if t.kind != TokenKind::Punct {
            continue;
        }
        match t.spelling.as_str() {
            "(" | "[" => depth += 1,
            ")" | "]" => depth = depth.saturating_sub(1),
            "{" if depth == 0 => {
                open = Some(k);
                break;
            }
            ";" if depth == 0 => {
                return Err((
                    Diagnostic::error(format!("function tagged with syntax `{}` has no body", attr_name), attr_span),
                    k + 1,
                ));
            }
            _ => {}
        }
    }
    let Some(open) = open else {
        return Err((
            Diagnostic::error(format!("expected a function body after syntax `{}` attribute", attr_name), attr_span),
            tokens.len(),
        ));
    };
    let header = &tokens[decl_start..open];
    if let Some(t) = header.first().filter(|t| t.is_ident("template")) {
        return Err((Diagnostic::error("template functions cannot be syntax functions", t.span), open + 1));
    }
    let mut declarator = parse_declarator(header).map_err(|mut d| {
        if d.span.is_none() {
            d.span = Some(attr_span);
        }
        (d, open + 1)
    })?;
    if declarator.name.contains("operator") {
        return Err((
            Diagnostic::error("operator overloads cannot be syntax functions", declarator.name_span),
            open + 1,
        ));
    }
    if declarator.name.contains("::") {
        return Err((
            Diagnostic::error("qualified (member or namespace) function names are not supported", declarator.name_span),
            open + 1,
        ));
    }
    let close = capture_balanced(tokens, open).map_err(|d| (d, tokens.len()))?;
    let body_tokens = tokens[open + 1..close].to_vec();
    check_body_delimiters(&body_tokens).map_err(|d| (d, close + 1))?;

    declarator.attr_name = attr_name;
    declarator.attr_span = attr_span;
    Ok((
        SyntaxFunction {
            declarator,
            body_tokens,
            open_brace: tokens[open].span,
            close_brace: tokens[close].span,
            full_span: tokens[attr_start].span.to(tokens[close].span),
        },
        close + 1,
    ))
}
