//! The per-unit pipeline: scan, dispatch to handlers, splice.

use std::ops::Range;

use indexmap::IndexSet;

use crate::cpptok::{scan_define_events, tokenize, MacroHistory, MacroTable};
use crate::diag::{has_errors, Diagnostic};
use crate::handler::{invoke, make_compat_stub, HandlerArgs, HandlerContext, HandlerRegistry};
use crate::scanner::find_syntax_functions;

/// File name used in the `#line` directive that opens the predefines block.
pub const PREDEFINES_FILE: &str = "<synstitch-predefines>";

#[derive(Clone, Debug, Default)]
pub struct RewriteOptions {
    pub emit_compat_stub: bool,
    pub emit_line_directives: bool,
    /// `NAME=VALUE` macro definitions applied before the unit's own.
    pub defines: Vec<(String, String)>,
    pub handler_args: HandlerArgs,
}

/// Where a replaced function went: its byte range in the input and the
/// byte range of the text that replaced it in the output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splice {
    pub input: Range<usize>,
    pub output: Range<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct RewriteResult {
    /// `None` whenever `diagnostics` contains an error.
    pub output: Option<String>,
    pub diagnostics: Vec<Diagnostic>,
    /// Handler names in first-use order.
    pub handlers_used: Vec<String>,
    pub splices: Vec<Splice>,
    /// Length of the predefines prefix in `output`.
    pub predefines_len: usize,
}

impl RewriteResult {
    pub fn has_errors(&self) -> bool {
        has_errors(&self.diagnostics)
    }
}

fn escape_line_file(name: &str) -> String {
    name.replace('\\', "\\\\").replace('"', "\\\"")
}

fn predefines_prefix(blocks: &[(String, String)], line_file: Option<&str>) -> String {
    let mut body = String::new();
    for (_, text) in blocks.iter().filter(|(_, t)| !t.is_empty()) {
        body.push_str(text);
        if !text.ends_with('\n') {
            body.push('\n');
        }
    }
    if body.is_empty() {
        return body;
    }
    match line_file {
        Some(file) => format!("#line 1 \"{}\"\n{}#line 1 \"{}\"\n", PREDEFINES_FILE, body, escape_line_file(file)),
        None => body,
    }
}

/// Places handler predefines blocks, in order, before the first byte of
/// `text`. Empty blocks leave no trace.
pub fn inject_predefines(text: &str, blocks: &[(String, String)]) -> String {
    let mut out = predefines_prefix(blocks, None);
    out.push_str(text);
    out
}

fn build_macros(
    tokens: &[crate::cpptok::Token],
    options: &RewriteOptions,
    diags: &mut Vec<Diagnostic>,
) -> MacroHistory {
    let mut base = MacroTable::new();
    for (name, value) in &options.defines {
        if let Err(d) = base.define_text(name, value) {
            diags.push(d);
        }
    }
    let (events, warnings) = scan_define_events(tokens);
    diags.extend(warnings);
    MacroHistory::new(base, events)
}

/// Rewrites one translation unit.
///
/// Bytes outside tagged functions are copied verbatim; each tagged function
/// is replaced by its handler's text; predefines of the handlers used go at
/// byte 0. `file_name` only appears in `#line` directives.
pub fn rewrite_unit(
    text: &str,
    file_name: &str,
    registry: &HandlerRegistry,
    options: &RewriteOptions,
) -> RewriteResult {
    let mut result = RewriteResult::default();
    let tokens = match tokenize(text) {
        Ok(t) => t,
        Err(d) => {
            result.diagnostics.push(d);
            return result;
        }
    };
    let macros = build_macros(&tokens, options, &mut result.diagnostics);
    let scan = find_syntax_functions(&tokens, registry.aliases());
    result.diagnostics.extend(scan.diagnostics);

    let mut ctx = HandlerContext::new(options.handler_args.clone());
    let mut used = IndexSet::new();
    let mut replaced = Vec::new();
    let mut stub_counter = 0;
    for f in &scan.functions {
        let Some(handler) = registry.lookup(&f.declarator.attr_name) else {
            result.diagnostics.push(Diagnostic::error(
                format!("no handler registered for syntax `{}`", f.declarator.attr_name),
                f.declarator.attr_span,
            ));
            continue;
        };
        ctx.set_macros(macros.table_before(f.full_span.start));
        let rep = invoke(handler.as_ref(), f, &mut ctx);
        let failed = rep.has_errors();
        result.diagnostics.extend(rep.diagnostics);
        if failed {
            continue;
        }
        used.insert(handler.name().to_string());
        let mut spliced = String::new();
        if options.emit_compat_stub {
            stub_counter += 1;
            spliced.push_str(&make_compat_stub(&f.declarator, stub_counter));
            spliced.push('\n');
        }
        spliced.push_str(&rep.body_text);
        replaced.push((f.full_span, spliced));
    }
    result.handlers_used = used.into_iter().collect();
    if result.has_errors() {
        return result;
    }

    let blocks: Vec<(String, String)> = result
        .handlers_used
        .iter()
        .map(|name| {
            let h = registry.lookup(name).expect("used handler is registered");
            (name.clone(), h.add_to_predefines(&options.handler_args))
        })
        .collect();
    let line_file = options.emit_line_directives.then_some(file_name);
    let mut out = predefines_prefix(&blocks, line_file);
    result.predefines_len = out.len();

    let lines = crate::cpptok::LineIndex::new(text);
    let mut cursor = 0;
    for (span, replacement) in replaced {
        out.push_str(&text[cursor..span.start]);
        let begin = out.len();
        out.push_str(&replacement);
        if let Some(file) = line_file {
            if !out.ends_with('\n') {
                out.push('\n');
            }
            // The rest of the closing brace's line follows the directive.
            let (line, _) = lines.line_col(span.end - 1);
            out.push_str(&format!("#line {} \"{}\"\n", line, escape_line_file(file)));
        }
        result.splices.push(Splice { input: span.start..span.end, output: begin..out.len() });
        cursor = span.end;
    }
    out.push_str(&text[cursor..]);
    result.output = Some(out);
    result
}
