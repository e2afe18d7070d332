//! Core of the `synstitch` source-to-source rewriter.
//!
//! A C++ translation unit is tokenized ([`cpptok`]), functions tagged with
//! `[[clang::syntax(NAME)]]` (or a registered alias such as `__qpu__`) are
//! located and their bodies captured as token lists ([`scanner`]), each body
//! is handed to the syntax handler registered under `NAME` ([`handler`]), and
//! the handler's C++ text is spliced back in place of the original function
//! ([`rewrite`]).

pub mod cpptok;
pub mod diag;
pub mod external;
pub mod handler;
pub mod rewrite;
pub mod scanner;

pub use cpptok::{render, tokenize, SourceSpan, Token, TokenKind};
pub use diag::{Diagnostic, Severity};
pub use handler::{
    get_decl_text, make_compat_stub, HandlerArgs, HandlerContext, HandlerRegistry, RegistryError, Replacement,
    SyntaxHandler,
};
pub use rewrite::{rewrite_unit, RewriteOptions, RewriteResult};
pub use scanner::{Declarator, Param, SyntaxFunction};
