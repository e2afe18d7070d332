//! The `taco` syntax handler: functions whose body is one tensor
//! index-notation statement and whose last parameter is a format string.
//!
//! ```text
//! [[clang::syntax(taco)]] void matrix_vector_mul(vector *y, csr *A, vector *x,
//!     std::string format = "-f=A:ds:0,1 -f=x:d -f=y:d") {
//!   y(i) = A(i,j) * x(j)
//! }
//! ```
//!
//! The function is replaced by generated `__taco_assm_N`/`__taco_comput_N`
//! kernels operating on `taco_tensor_t` and a wrapper that converts each
//! tensor parameter, runs both kernels and converts the target back.

pub mod codegen;
pub mod format;
pub mod notation;
pub mod plan;

use synstitch_core::{
    Declarator, Diagnostic, HandlerArgs, HandlerContext, Param, Replacement, SourceSpan, SyntaxHandler, Token,
    TokenKind,
};

pub use codegen::{gen_kernels, gen_wrapper};
pub use format::{parse_format_string, FormatError, FormatSpec, ModeFormat};
pub use notation::{parse_index_notation, AssignOp, IndexExpr, TensorRef, Term};
pub use plan::{validate, KernelPlan, Passing, Strategy, TensorParam};

/// Header the generated code includes for `taco_tensor_t`.
pub const RUNTIME_HEADER: &str = "taco_runtime.h";

#[derive(Clone, Debug, Default)]
pub struct TacoHandler {
    /// Emit `#pragma omp parallel for` on the outermost loop. Also enabled
    /// by the handler argument `taco.parallel`.
    pub parallel: bool,
}

impl TacoHandler {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parallel(mut self, on: bool) -> Self {
        self.parallel = on;
        self
    }

    fn parallel_for(&self, args: &HandlerArgs) -> bool {
        self.parallel || args.get("taco", "parallel").is_some_and(|v| matches!(v, "1" | "true" | "yes" | "on"))
    }
}

/// Contents of one string-literal token, or `None` for prefixes other than
/// `u8`.
fn literal_contents(tok: &Token) -> Option<String> {
    let s = tok.spelling.strip_prefix("u8").unwrap_or(&tok.spelling);
    match tok.kind {
        TokenKind::RawString => {
            let s = s.strip_prefix("R\"")?;
            let open = s.find('(')?;
            let delim = &s[..open];
            let close = s.len().checked_sub(delim.len() + 2)?;
            Some(s[open + 1..close].to_string())
        }
        TokenKind::String => {
            let inner = s.strip_prefix('"')?.strip_suffix('"')?;
            let mut out = String::new();
            let mut chars = inner.chars();
            while let Some(c) = chars.next() {
                if c != '\\' {
                    out.push(c);
                    continue;
                }
                match chars.next() {
                    Some('n') => out.push('\n'),
                    Some('t') => out.push('\t'),
                    Some(other) => out.push(other),
                    None => {}
                }
            }
            Some(out)
        }
        _ => None,
    }
}

/// The format string from the last parameter's default, with adjacent
/// literals concatenated.
fn format_default(decl: &Declarator) -> Result<(String, &Param), Diagnostic> {
    let bad = |span: SourceSpan| {
        Diagnostic::error(
            format!("the last parameter of `{}` must be a string with a default format literal", decl.name),
            span,
        )
    };
    let Some(param) = decl.params.last() else {
        return Err(bad(decl.name_span));
    };
    if param.default_tokens.is_empty() {
        return Err(bad(param.span()));
    }
    let mut text = String::new();
    for tok in &param.default_tokens {
        text.push_str(&literal_contents(tok).ok_or_else(|| bad(tok.span))?);
    }
    Ok((text, param))
}

/// Source location of byte `offset` of the format string, exact when the
/// default is a single plain literal.
fn format_error_span(param: &Param, offset: usize) -> SourceSpan {
    let first = param.default_tokens[0].span;
    let tok = &param.default_tokens[0];
    if param.default_tokens.len() == 1 && tok.kind == TokenKind::String && !tok.spelling.contains('\\') {
        let start = first.start + tok.spelling.find('"').unwrap_or(0) + 1 + offset;
        if !tok.spelling[..start - first.start].contains('\n') {
            return SourceSpan {
                start,
                end: start + 1,
                line: first.line,
                col: first.col + (start - first.start) as u32,
            };
        }
    }
    first
}

/// Runs the whole handler pipeline without the macro and registry plumbing.
pub fn translate(decl: &Declarator, body: &[Token], suffix: u32, parallel: bool) -> Result<String, Diagnostic> {
    let (fmt_text, fmt_param) = format_default(decl)?;
    let formats = parse_format_string(&fmt_text)
        .map_err(|e| Diagnostic::error(e.message, format_error_span(fmt_param, e.offset)))?;
    let end = body.last().map_or(decl.name_span, |t| t.span);
    let expr = parse_index_notation(body, end)?;
    let plan = validate(&expr, &formats, decl, suffix)?;
    Ok(format!("{}\n{}", gen_kernels(&plan, parallel), gen_wrapper(decl, &plan)))
}

impl SyntaxHandler for TacoHandler {
    fn name(&self) -> &str {
        "taco"
    }

    fn help(&self) -> &str {
        "tensor index notation compiled to dense and CSR kernels over taco_tensor_t"
    }

    fn get_replacement(&self, decl: &Declarator, body: &[Token], ctx: &mut HandlerContext) -> Replacement {
        let parallel = self.parallel_for(ctx.args());
        let suffix = ctx.unique_suffix();
        match translate(decl, body, suffix, parallel) {
            Ok(text) => Replacement::text(text),
            Err(d) => Replacement::error(d),
        }
    }

    fn add_to_predefines(&self, _args: &HandlerArgs) -> String {
        format!(
            "#include <stdint.h>\n#include <stdlib.h>\n#include <{RUNTIME_HEADER}>\nvoid __taco_cleanup_taco(taco_tensor_t *);\n"
        )
    }
}
