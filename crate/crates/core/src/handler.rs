//! The syntax-handler interface and its registry.
//!
//! A handler receives the parsed declarator and the (macro-expanded) body
//! tokens of a tagged function and returns the C++ text that replaces the
//! whole function. It may also contribute a predefines block that is placed
//! once at the top of every unit that uses it.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::cpptok::{expand_macros, render, tokenize, MacroTable, Token, TokenKind};
use crate::diag::{has_errors, Diagnostic};
use crate::scanner::{Declarator, SyntaxFunction};

/// Prefix of the renamed original declaration in a compat stub.
pub const COMPAT_STUB_PREFIX: &str = "__synstitch_";

/// Handler output for one tagged function.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Replacement {
    pub body_text: String,
    pub diagnostics: Vec<Diagnostic>,
}

impl Replacement {
    pub fn text(body_text: impl Into<String>) -> Self {
        Replacement { body_text: body_text.into(), diagnostics: Vec::new() }
    }

    pub fn error(diag: Diagnostic) -> Self {
        Replacement { body_text: String::new(), diagnostics: vec![diag] }
    }

    pub fn has_errors(&self) -> bool {
        has_errors(&self.diagnostics)
    }
}

/// `--handler-arg NAME=VALUE` pairs. Names are conventionally
/// `<handler>.<key>`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HandlerArgs(BTreeMap<String, String>);

impl HandlerArgs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, value: impl Into<String>) {
        self.0.insert(name.into(), value.into());
    }

    pub fn get(&self, handler: &str, key: &str) -> Option<&str> {
        self.0.get(&format!("{}.{}", handler, key)).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

impl<K: Into<String>, V: Into<String>> FromIterator<(K, V)> for HandlerArgs {
    fn from_iter<T: IntoIterator<Item = (K, V)>>(iter: T) -> Self {
        HandlerArgs(iter.into_iter().map(|(k, v)| (k.into(), v.into())).collect())
    }
}

/// Per-unit state handed to handlers.
#[derive(Debug, Default)]
pub struct HandlerContext {
    counter: u32,
    macros: MacroTable,
    args: HandlerArgs,
}

impl HandlerContext {
    pub fn new(args: HandlerArgs) -> Self {
        HandlerContext { counter: 0, macros: MacroTable::new(), args }
    }

    /// Next value of the unit-wide counter: 1, 2, 3, ...
    pub fn unique_suffix(&mut self) -> u32 {
        self.counter += 1;
        self.counter
    }

    pub fn macros(&self) -> &MacroTable {
        &self.macros
    }

    pub fn set_macros(&mut self, table: MacroTable) {
        self.macros = table;
    }

    pub fn args(&self) -> &HandlerArgs {
        &self.args
    }
}

pub trait SyntaxHandler: Send + Sync {
    /// The name used in `[[clang::syntax(NAME)]]`.
    fn name(&self) -> &str;

    /// Bare identifiers that act like the attribute, e.g. `__qpu__`.
    fn aliases(&self) -> Vec<String> {
        Vec::new()
    }

    /// One-line description for `--list-handlers`.
    fn help(&self) -> &str {
        ""
    }

    fn get_replacement(&self, decl: &Declarator, body: &[Token], ctx: &mut HandlerContext) -> Replacement;

    fn add_to_predefines(&self, _args: &HandlerArgs) -> String {
        String::new()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegistryError {
    #[error("syntax name or alias `{0}` is already registered")]
    Duplicate(String),
    #[error("`{0}` is not a valid syntax name")]
    InvalidName(String),
}

#[derive(Default, Clone)]
pub struct HandlerRegistry {
    handlers: Vec<Arc<dyn SyntaxHandler>>,
    by_name: HashMap<String, usize>,
    aliases: HashMap<String, String>,
}

fn is_identifier(s: &str) -> bool {
    matches!(tokenize(s).as_deref(), Ok([t]) if t.kind == TokenKind::Identifier)
}

impl HandlerRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, handler: impl SyntaxHandler + 'static) -> Result<(), RegistryError> {
        self.register_arc(Arc::new(handler))
    }

    pub fn register_arc(&mut self, handler: Arc<dyn SyntaxHandler>) -> Result<(), RegistryError> {
        let name = handler.name().to_string();
        let aliases = handler.aliases();
        for n in std::iter::once(&name).chain(&aliases) {
            if !is_identifier(n) {
                return Err(RegistryError::InvalidName(n.clone()));
            }
            if self.by_name.contains_key(n) || self.aliases.contains_key(n) {
                return Err(RegistryError::Duplicate(n.clone()));
            }
        }
        if let Some(dup) = aliases.iter().enumerate().find(|(i, a)| **a == name || aliases[..*i].contains(a)) {
            return Err(RegistryError::Duplicate(dup.1.clone()));
        }
        let index = self.handlers.len();
        self.handlers.push(handler);
        for a in aliases {
            self.aliases.insert(a, name.clone());
        }
        self.by_name.insert(name, index);
        Ok(())
    }

    /// Resolves a syntax name or alias.
    pub fn lookup(&self, name: &str) -> Option<&Arc<dyn SyntaxHandler>> {
        let canonical = self.aliases.get(name).map_or(name, String::as_str);
        self.by_name.get(canonical).map(|&i| &self.handlers[i])
    }

    /// Alias identifier to syntax name, as the scanner wants it.
    pub fn aliases(&self) -> &HashMap<String, String> {
        &self.aliases
    }

    pub fn handlers(&self) -> impl Iterator<Item = &Arc<dyn SyntaxHandler>> {
        self.handlers.iter()
    }
}

fn render_param_list(d: &Declarator) -> String {
    d.params
        .iter()
        .map(|p| {
            let mut s = render(&p.type_tokens);
            if !p.default_tokens.is_empty() {
                s.push_str(" = ");
                s.push_str(&render(&p.default_tokens));
            }
            s
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn decl_text_named(d: &Declarator, name: &str) -> String {
    let mut out = format!("{} {}({})", render(&d.return_tokens), name, render_param_list(d));
    if !d.trailing_tokens.is_empty() {
        out.push(' ');
        out.push_str(&render(&d.trailing_tokens));
    }
    out
}

/// Regenerates the original function declaration, default arguments
/// included.
pub fn get_decl_text(d: &Declarator) -> String {
    decl_text_named(d, &d.name)
}

/// The original declaration renamed to `__synstitch_<suffix>_<name>` with a
/// body that only calls `__builtin_unreachable()`.
pub fn make_compat_stub(d: &Declarator, suffix: u32) -> String {
    let name = format!("{}{}_{}", COMPAT_STUB_PREFIX, suffix, d.base_name());
    format!("{} {{ __builtin_unreachable(); }}", decl_text_named(d, &name))
}

/// True if `tokens` contain `name ( ... ) [qualifiers] {`.
fn defines_function(tokens: &[Token], name: &str) -> bool {
    (0..tokens.len()).any(|i| {
        if !(tokens[i].is_ident(name) && tokens.get(i + 1).is_some_and(|t| t.is_punct("("))) {
            return false;
        }
        let mut depth = 0usize;
        for (k, t) in tokens.iter().enumerate().skip(i + 1) {
            if t.is_punct("(") {
                depth += 1;
            } else if t.is_punct(")") {
                depth -= 1;
                if depth == 0 {
                    return tokens[k + 1..].iter().find(|t| !t.is_identifier()).is_some_and(|t| t.is_punct("{"));
                }
            }
        }
        false
    })
}

/// Macro-expands the body, runs the handler, and checks that its output
/// lexes and still defines the original function.
pub fn invoke(handler: &dyn SyntaxHandler, f: &SyntaxFunction, ctx: &mut HandlerContext) -> Replacement {
    let body = match expand_macros(&f.body_tokens, ctx.macros()) {
        Ok(b) => b,
        Err(d) => return Replacement::error(d),
    };
    let mut rep = handler.get_replacement(&f.declarator, &body, ctx);
    if rep.has_errors() {
        return rep;
    }
    match tokenize(&rep.body_text) {
        Err(d) => rep.diagnostics.push(Diagnostic::error(
            format!("handler `{}` produced text that does not tokenize: {}", handler.name(), d.message),
            f.declarator.attr_span,
        )),
        Ok(toks) => {
            if !defines_function(&toks, f.declarator.base_name()) {
                rep.diagnostics.push(Diagnostic::error(
                    format!("handler `{}` did not define function `{}`", handler.name(), f.declarator.name),
                    f.declarator.attr_span,
                ));
            }
        }
    }
    rep
}
