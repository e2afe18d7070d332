//! Syntax handlers implemented by an external program.
//!
//! The program is run once per request. It receives one JSON object on
//! standard input and writes its answer as plain text on standard output.
//! A nonzero exit status is a handler error; its standard error becomes the
//! diagnostic message.
//!
//! ```json
//! {"request": "replacement", "syntax": "demo", "suffix": 1,
//!  "declarator": {"return_type": "void", "name": "f",
//!                 "params": [{"type": "int", "name": "a", "default": null}],
//!                 "decl_text": "void f(int a)"},
//!  "tokens": ["y", "(", "i", ")"], "body_text": "y(i)",
//!  "handler_args": {"demo.opt": "1"}}
//! ```
//!
//! A `{"request": "predefines", ...}` object asks for the predefines block.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::{Command, Stdio};

use serde::Serialize;

use crate::cpptok::{render, Token};
use crate::diag::Diagnostic;
use crate::handler::{get_decl_text, HandlerArgs, HandlerContext, Replacement, SyntaxHandler};
use crate::scanner::Declarator;

#[derive(Clone, Debug)]
pub struct ExternalHandler {
    name: String,
    program: String,
    args: Vec<String>,
}

#[derive(Serialize)]
struct ParamJson {
    #[serde(rename = "type")]
    ty: String,
    name: String,
    default: Option<String>,
}

#[derive(Serialize)]
struct DeclJson {
    return_type: String,
    name: String,
    params: Vec<ParamJson>,
    decl_text: String,
}

#[derive(Serialize)]
struct Request<'a> {
    request: &'a str,
    syntax: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    suffix: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    declarator: Option<DeclJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tokens: Option<Vec<&'a str>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    body_text: Option<String>,
    handler_args: BTreeMap<&'a str, &'a str>,
}

impl ExternalHandler {
    /// `command` is split on whitespace; no shell is involved.
    pub fn new(name: impl Into<String>, command: &str) -> Option<Self> {
        let mut parts = command.split_whitespace().map(String::from);
        let program = parts.next()?;
        Some(ExternalHandler { name: name.into(), program, args: parts.collect() })
    }

    fn run(&self, request: &Request<'_>) -> Result<String, String> {
        let input = serde_json::to_vec(request).map_err(|e| e.to_string())?;
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| format!("cannot run `{}`: {}", self.program, e))?;
        if let Some(mut stdin) = child.stdin.take() {
            // A handler that exits without reading its input is not an error.
            let _ = stdin.write_all(&input);
        }
        let out = child.wait_with_output().map_err(|e| e.to_string())?;
        if !out.status.success() {
            let err = String::from_utf8_lossy(&out.stderr).trim().to_string();
            return Err(if err.is_empty() { format!("`{}` exited with {}", self.program, out.status) } else { err });
        }
        String::from_utf8(out.stdout).map_err(|_| format!("`{}` wrote non-UTF-8 output", self.program))
    }
}

fn decl_json(d: &Declarator) -> DeclJson {
    DeclJson {
        return_type: render(&d.return_tokens),
        name: d.name.clone(),
        params: d
            .params
            .iter()
            .map(|p| ParamJson {
                ty: p.type_text(),
                name: p.name.clone(),
                default: (!p.default_tokens.is_empty()).then(|| render(&p.default_tokens)),
            })
            .collect(),
        decl_text: get_decl_text(d),
    }
}

impl SyntaxHandler for ExternalHandler {
    fn name(&self) -> &str {
        &self.name
    }

    fn help(&self) -> &str {
        "external handler program"
    }

    fn get_replacement(&self, decl: &Declarator, body: &[Token], ctx: &mut HandlerContext) -> Replacement {
        let suffix = ctx.unique_suffix();
        let request = Request {
            request: "replacement",
            syntax: &self.name,
            suffix: Some(suffix),
            declarator: Some(decl_json(decl)),
            tokens: Some(body.iter().map(|t| t.spelling.as_str()).collect()),
            body_text: Some(render(body)),
            handler_args: ctx.args().iter().collect(),
        };
        match self.run(&request) {
            Ok(text) => Replacement::text(text),
            Err(msg) => Replacement::error(Diagnostic::error(
                format!("external handler `{}` failed: {}", self.name, msg),
                decl.attr_span,
            )),
        }
    }

    fn add_to_predefines(&self, args: &HandlerArgs) -> String {
        let request = Request {
            request: "predefines",
            syntax: &self.name,
            suffix: None,
            declarator: None,
            tokens: None,
            body_text: None,
            handler_args: args.iter().collect(),
        };
        // Predefines cannot carry diagnostics; make a failure visible to the
        // compiler instead.
        self.run(&request).unwrap_or_else(|msg| {
            format!("#error \"external handler {} failed: {}\"\n", self.name, msg.replace('"', "'"))
        })
    }
}
