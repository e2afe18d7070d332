use crate::cpptok::{render, SourceSpan, Token};
use crate::diag::Diagnostic;

/// Words that can never be a parameter name.
const TYPE_KEYWORDS: &[&str] = &[
    "void",
    "bool",
    "char",
    "char8_t",
    "char16_t",
    "char32_t",
    "wchar_t",
    "short",
    "int",
    "long",
    "signed",
    "unsigned",
    "float",
    "double",
    "auto",
    "const",
    "volatile",
    "struct",
    "class",
    "union",
    "enum",
    "typename",
    "register",
    "restrict",
    "__restrict",
];

/// Words that qualify a type without naming one.
const QUALIFIER_KEYWORDS: &[&str] = &["const", "volatile", "struct", "class", "union", "enum", "typename", "register"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    /// Declaration tokens of the parameter, including its name.
    pub type_tokens: Vec<Token>,
    /// Empty for unnamed parameters.
    pub name: String,
    /// Position of the name within `type_tokens`.
    pub name_index: Option<usize>,
    /// Tokens after a top-level `=`.
    pub default_tokens: Vec<Token>,
}

impl Param {
    /// Declaration tokens with the name removed (`vector *y` gives `vector *`).
    pub fn type_only(&self) -> Vec<Token> {
        let mut toks = self.type_tokens.clone();
        if let Some(i) = self.name_index {
            toks.remove(i);
        }
        toks
    }

    pub fn type_text(&self) -> String {
        render(&self.type_only())
    }

    pub fn name_span(&self) -> Option<SourceSpan> {
        self.name_index.map(|i| self.type_tokens[i].span)
    }

    pub fn span(&self) -> SourceSpan {
        let first = self.type_tokens[0].span;
        let last = self.default_tokens.last().unwrap_or_else(|| self.type_tokens.last().unwrap()).span;
        first.to(last)
    }
}

/// A parsed function header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Declarator {
    pub return_tokens: Vec<Token>,
    /// Possibly `::`-qualified function name.
    pub name: String,
    pub name_span: SourceSpan,
    pub params: Vec<Param>,
    /// Tokens between the closing `)` and the body, e.g. `noexcept`.
    pub trailing_tokens: Vec<Token>,
    pub attr_name: String,
    pub attr_span: SourceSpan,
    pub header_span: SourceSpan,
}

impl Declarator {
    /// The last component of a qualified name.
    pub fn base_name(&self) -> &str {
        self.name.rsplit("::").next().unwrap_or(&self.name)
    }

    pub fn param(&self, name: &str) -> Option<&Param> {
        self.params.iter().find(|p| p.name == name)
    }
}

fn closer(open: &str) -> Option<&'static str> {
    match open {
        "(" => Some(")"),
        "[" => Some("]"),
        "{" => Some("}"),
        _ => None,
    }
}

/// Index of the bracket matching `tokens[open]`, counting `()`, `[]` and
/// `{}` together.
pub(crate) fn matching_close(tokens: &[Token], open: usize) -> Option<usize> {
    let mut stack: Vec<&str> = Vec::new();
    for (i, t) in tokens.iter().enumerate().skip(open) {
        if t.kind != crate::cpptok::TokenKind::Punct {
            continue;
        }
        if let Some(c) = closer(&t.spelling) {
            stack.push(c);
        } else if matches!(t.spelling.as_str(), ")" | "]" | "}") {
            if stack.pop() != Some(t.spelling.as_str()) {
                return None;
            }
            if stack.is_empty() {
                return Some(i);
            }
        }
    }
    None
}

/// Parses `[return tokens] name ( params ) [trailing]` from the tokens that
/// follow a syntax attribute and precede the body's `{`.
///
/// The attribute fields are left empty; the scanner fills them in.
pub fn parse_declarator(tokens: &[Token]) -> Result<Declarator, Diagnostic> {
    let Some(first) = tokens.first() else {
        return Err(Diagnostic::error("expected a function declarator", None));
    };
    let open =
        find_param_open(tokens).ok_or_else(|| Diagnostic::error("expected `(` after the function name", first.span))?;
    let close = matching_close(tokens, open)
        .ok_or_else(|| Diagnostic::error("unbalanced parameter list", tokens[open].span))?;

    // Walk back over `a :: b :: c`.
    let mut name_start = open - 1;
    while name_start >= 2 && tokens[name_start - 1].is_punct("::") && tokens[name_start - 2].is_identifier() {
        name_start -= 2;
    }
    if name_start >= 1 && tokens[name_start - 1].is_punct("::") {
        name_start -= 1;
    }
    let name: String = tokens[name_start..open].iter().map(|t| t.spelling.as_str()).collect();
    let return_tokens = tokens[..name_start].to_vec();
    if return_tokens.is_empty() {
        return Err(Diagnostic::error(format!("function `{}` has no return type", name), tokens[name_start].span));
    }

    let trailing_tokens = tokens[close + 1..].to_vec();
    if let Some(t) = trailing_tokens.iter().find(|t| t.is_punct("->")) {
        return Err(Diagnostic::error("trailing return types are not supported", t.span));
    }
    if let Some(t) = trailing_tokens.iter().find(|t| t.is_punct("(") || t.is_punct("[")) {
        if !trailing_tokens.first().is_some_and(|f| f.is_ident("noexcept") || f.is_ident("throw")) {
            return Err(Diagnostic::error("unsupported declarator after the parameter list", t.span));
        }
    }

    let params = parse_params(&tokens[open + 1..close])?;
    Ok(Declarator {
        return_tokens,
        name,
        name_span: tokens[name_start].span.to(tokens[open - 1].span),
        params,
        trailing_tokens,
        attr_name: String::new(),
        attr_span: SourceSpan::default(),
        header_span: first.span.to(tokens.last().unwrap().span),
    })
}

/// The first `(` outside template arguments that directly follows an
/// identifier.
fn find_param_open(tokens: &[Token]) -> Option<usize> {
    let mut angle = 0usize;
    for i in 0..tokens.len() {
        let t = &tokens[i];
        if t.is_punct("<") && i > 0 && tokens[i - 1].is_identifier() {
            angle += 1;
        } else if angle > 0 && t.is_punct(">") {
            angle -= 1;
        } else if angle > 0 && t.is_punct(">>") {
            angle = angle.saturating_sub(2);
        } else if angle == 0 && t.is_punct("(") {
            return (i > 0 && tokens[i - 1].is_identifier()).then_some(i);
        }
    }
    None
}

/// Splits a parameter list body on top-level commas.
fn split_params(tokens: &[Token], track_angles: bool) -> Option<Vec<&[Token]>> {
    let mut groups = Vec::new();
    let mut depth = 0usize;
    let mut angle = 0usize;
    let mut start = 0;
    for (i, t) in tokens.iter().enumerate() {
        match t.spelling.as_str() {
            _ if t.kind != crate::cpptok::TokenKind::Punct => {}
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => depth = depth.checked_sub(1)?,
            "<" if track_angles && depth == 0 && i > 0 && tokens[i - 1].is_identifier() => angle += 1,
            ">" if angle > 0 && depth == 0 => angle -= 1,
            ">>" if angle > 0 && depth == 0 => angle = angle.saturating_sub(2),
            "," if depth == 0 && angle == 0 => {
                groups.push(&tokens[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 || angle != 0 {
        return None;
    }
    groups.push(&tokens[start..]);
    Some(groups)
}

fn parse_params(tokens: &[Token]) -> Result<Vec<Param>, Diagnostic> {
    if tokens.is_empty() {
        return Ok(Vec::new());
    }
    let groups = split_params(tokens, true)
        .or_else(|| split_params(tokens, false))
        .ok_or_else(|| Diagnostic::error("unbalanced parameter list", tokens[0].span))?;
    groups.into_iter().map(parse_param).collect()
}

fn parse_param(tokens: &[Token]) -> Result<Param, Diagnostic> {
    let mut depth = 0usize;
    let mut angle = 0usize;
    let mut eq = None;
    let mut candidates = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        match t.spelling.as_str() {
            _ if t.is_identifier() => {
                if depth == 0 && angle == 0 {
                    candidates.push(i);
                }
            }
            _ if t.kind != crate::cpptok::TokenKind::Punct => {}
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => depth = depth.saturating_sub(1),
            "<" if depth == 0 && i > 0 && tokens[i - 1].is_identifier() => angle += 1,
            ">" if angle > 0 => angle -= 1,
            ">>" if angle > 0 => angle = angle.saturating_sub(2),
            "=" if depth == 0 && angle == 0 => {
                eq = Some(i);
                break;
            }
            _ => {}
        }
    }
    let decl_end = eq.unwrap_or(tokens.len());
    let type_tokens = tokens[..decl_end].to_vec();
    if type_tokens.is_empty() {
        let at = tokens.first().map(|t| t.span);
        return Err(Diagnostic::error("parameter is missing a type", at));
    }
    let default_tokens = eq.map(|e| tokens[e + 1..].to_vec()).unwrap_or_default();
    if eq.is_some() && default_tokens.is_empty() {
        return Err(Diagnostic::error("default argument is empty", tokens[decl_end].span));
    }

    let name_index = candidates.last().copied().filter(|&i| {
        let t = &tokens[i];
        !TYPE_KEYWORDS.contains(&t.spelling.as_str())
            && !(i > 0 && tokens[i - 1].is_punct("::"))
            && !tokens[i + 1..decl_end].iter().any(|n| n.is_punct("::"))
            && tokens[..i].iter().any(|p| !QUALIFIER_KEYWORDS.contains(&p.spelling.as_str()))
    });
    Ok(Param {
        name: name_index.map(|i| tokens[i].spelling.clone()).unwrap_or_default(),
        name_index,
        type_tokens,
        default_tokens,
    })
}
