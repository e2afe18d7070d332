use indexmap::{IndexMap, IndexSet};

use super::{tokenize, Token};
use crate::diag::Diagnostic;

/// Nesting limit for object-like macro expansion.
pub const MAX_EXPANSION_DEPTH: usize = 64;
const MAX_EXPANDED_TOKENS: usize = 1 << 20;

/// Object-like macro definitions plus the names of function-like macros,
/// which are never expanded.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MacroTable {
    entries: IndexMap<String, Vec<Token>>,
    function_like: IndexSet<String>,
}

impl MacroTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn define(&mut self, name: impl Into<String>, replacement: Vec<Token>) {
        let name = name.into();
        self.function_like.shift_remove(&name);
        self.entries.insert(name, replacement);
    }

    /// Defines `name` from replacement text, e.g. from a `NAME=VALUE` flag.
    pub fn define_text(&mut self, name: &str, value: &str) -> Result<(), Diagnostic> {
        let tokens = tokenize(value)
            .map_err(|d| Diagnostic::error(format!("invalid value for macro `{}`: {}", name, d.message), None))?;
        self.define(name, tokens);
        Ok(())
    }

    pub fn define_function_like(&mut self, name: impl Into<String>) {
        let name = name.into();
        self.entries.shift_remove(&name);
        self.function_like.insert(name);
    }

    pub fn undefine(&mut self, name: &str) {
        self.entries.shift_remove(name);
        self.function_like.shift_remove(name);
    }

    pub fn get(&self, name: &str) -> Option<&[Token]> {
        self.entries.get(name).map(Vec::as_slice)
    }

    pub fn is_function_like(&self, name: &str) -> bool {
        self.function_like.contains(name)
    }

    /// Object-like entries in definition order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &[Token])> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn function_like_names(&self) -> impl Iterator<Item = &str> {
        self.function_like.iter().map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty() && self.function_like.is_empty()
    }

    pub fn apply(&mut self, event: &MacroEvent) {
        match event {
            MacroEvent::Define { name, tokens, .. } => self.define(name.clone(), tokens.clone()),
            MacroEvent::FunctionLike { name, .. } => self.define_function_like(name.clone()),
            MacroEvent::Undef { name, .. } => self.undefine(name),
        }
    }
}

/// One `#define`/`#undef` directive, keyed by the byte offset of its `#`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MacroEvent {
    Define { offset: usize, name: String, tokens: Vec<Token> },
    FunctionLike { offset: usize, name: String },
    Undef { offset: usize, name: String },
}

impl MacroEvent {
    pub fn offset(&self) -> usize {
        match self {
            MacroEvent::Define { offset, .. }
            | MacroEvent::FunctionLike { offset, .. }
            | MacroEvent::Undef { offset, .. } => *offset,
        }
    }
}

/// Directive history of a unit, so a body sees only the macros defined
/// above it.
#[derive(Clone, Debug, Default)]
pub struct MacroHistory {
    base: MacroTable,
    events: Vec<MacroEvent>,
}

impl MacroHistory {
    pub fn new(base: MacroTable, events: Vec<MacroEvent>) -> Self {
        MacroHistory { base, events }
    }

    pub fn table_before(&self, offset: usize) -> MacroTable {
        let mut table = self.base.clone();
        for ev in self.events.iter().take_while(|e| e.offset() < offset) {
            table.apply(ev);
        }
        table
    }
}

/// Collects `#define`/`#undef` directives from a token stream in file order.
pub fn scan_define_events(tokens: &[Token]) -> (Vec<MacroEvent>, Vec<Diagnostic>) {
    let mut events = Vec::new();
    let mut warnings = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        if !(tokens[i].at_line_start && tokens[i].is_punct("#")) {
            i += 1;
            continue;
        }
        let end = tokens[i + 1..].iter().position(|t| t.at_line_start).map_or(tokens.len(), |p| i + 1 + p);
        let line = &tokens[i..end];
        let offset = tokens[i].span.start;
        let directive = line.get(1).filter(|t| t.is_identifier()).map(|t| t.spelling.as_str());
        match directive {
            Some("define") => match line.get(2).filter(|t| t.is_identifier()) {
                Some(name) => {
                    let name = name.spelling.clone();
                    if line.get(3).is_some_and(|t| t.is_punct("(") && !t.leading_space) {
                        events.push(MacroEvent::FunctionLike { offset, name });
                    } else {
                        events.push(MacroEvent::Define { offset, name, tokens: line[3..].to_vec() });
                    }
                }
                None => warnings.push(Diagnostic::warning("malformed #define ignored", tokens[i].span)),
            },
            Some("undef") => match line.get(2).filter(|t| t.is_identifier()) {
                Some(name) => events.push(MacroEvent::Undef { offset, name: name.spelling.clone() }),
                None => warnings.push(Diagnostic::warning("malformed #undef ignored", tokens[i].span)),
            },
            _ => {}
        }
        i = end;
    }
    (events, warnings)
}

/// Builds the macro table in effect at the end of `text`.
pub fn scan_defines(text: &str) -> (MacroTable, Vec<Diagnostic>) {
    let tokens = match tokenize(text) {
        Ok(t) => t,
        Err(d) => {
            return (
                MacroTable::new(),
                vec![Diagnostic::warning(format!("defines not scanned: {}", d.message), d.span)],
            );
        }
    };
    let (events, warnings) = scan_define_events(&tokens);
    let mut table = MacroTable::new();
    for ev in &events {
        table.apply(ev);
    }
    (table, warnings)
}

/// Replaces object-like macro names with their replacement lists.
///
/// Expanded tokens inherit the span and leading space of the macro name
/// they came from. A function-like macro followed by `(` is an error, as is
/// nesting deeper than [`MAX_EXPANSION_DEPTH`].
pub fn expand_macros(tokens: &[Token], table: &MacroTable) -> Result<Vec<Token>, Diagnostic> {
    if table.is_empty() {
        return Ok(tokens.to_vec());
    }
    let mut out = Vec::with_capacity(tokens.len());
    expand_into(&mut out, tokens, table, 0, None)?;
    Ok(out)
}

fn expand_into(
    out: &mut Vec<Token>,
    tokens: &[Token],
    table: &MacroTable,
    depth: usize,
    origin: Option<&Token>,
) -> Result<(), Diagnostic> {
    for (i, tok) in tokens.iter().enumerate() {
        let site = origin.unwrap_or(tok);
        let lead = match origin {
            Some(o) if i == 0 => o.leading_space,
            _ => tok.leading_space,
        };
        if tok.is_identifier() {
            if let Some(replacement) = table.get(&tok.spelling) {
                if depth >= MAX_EXPANSION_DEPTH {
                    return Err(Diagnostic::error(
                        format!("expansion of macro `{}` exceeds depth limit {}", tok.spelling, MAX_EXPANSION_DEPTH),
                        site.span,
                    ));
                }
                let first = out.len();
                expand_into(out, replacement, table, depth + 1, Some(site))?;
                if let Some(t) = out.get_mut(first) {
                    t.leading_space = lead;
                }
                continue;
            }
            if table.is_function_like(&tok.spelling) && tokens.get(i + 1).is_some_and(|t| t.is_punct("(")) {
                return Err(Diagnostic::error(
                    format!("function-like macro `{}` cannot be expanded inside a syntax body", tok.spelling),
                    site.span,
                ));
            }
        }
        if out.len() >= MAX_EXPANDED_TOKENS {
            return Err(Diagnostic::error("macro expansion produced too many tokens", site.span));
        }
        let mut t = tok.clone();
        t.leading_space = lead;
        if origin.is_some() {
            t.span = site.span;
            t.at_line_start = false;
        }
        out.push(t);
    }
    Ok(())
}
