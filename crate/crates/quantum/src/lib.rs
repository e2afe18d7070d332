//! The `quantum` syntax handler: kernels written as gate statements are
//! turned into `QuantumKernel` subclasses that build an instruction list and
//! submit it when a temporary instance is destroyed.
//!
//! ```text
//! [[clang::syntax(quantum)]] void ansatz(qreg q, double x) {
//!   X(q[0]);
//!   Ry(q[1], x);
//!   CX(q[1], q[0]);
//! }
//! ```
//!
//! `__qpu__ void k(qreg q) { ... }` is accepted as a shorthand.
//!
//! The generated code expects these names from `qrt.h`, in the namespace
//! selected by `quantum.api` (default `qrt`):
//!
//! * `QuantumKernel<Derived, Args...>` with protected `args_tuple`,
//!   `_parent_kernel` and `is_callable`, constructors `(Args...)` and
//!   `(std::shared_ptr<CompositeInstruction>, Args...)`, and static
//!   `adjoint(parent, Args...)` and `ctrl(parent, control, Args...)`.
//! * `CompositeInstruction` with `addInstructions({...})`.
//! * `getIRProvider()` returning an object with
//!   `createInstruction(name, {qubits...}[, {params...}])`.
//! * `getAccelerator(name, shots)` returning an object with
//!   `execute(qreg, std::shared_ptr<CompositeInstruction>)`.

pub mod codegen;
pub mod ir;
pub mod stmt;

use synstitch_core::{Declarator, Diagnostic, HandlerArgs, HandlerContext, Replacement, SyntaxHandler, Token};

pub use codegen::{gen_kernel_class, internal_call_name, Api};
pub use ir::{build_ir, KernelIR, KernelParam};
pub use stmt::{parse_statement, split_statements, Gate, GateStmt, KernelCallStmt, Modifier, QubitRef, Stmt};

/// Header the generated code includes for the runtime.
pub const RUNTIME_HEADER: &str = "qrt.h";
pub const DEFAULT_SHOTS: u32 = 1024;
pub const DEFAULT_ACCELERATOR: &str = "simulator";

#[derive(Clone, Debug)]
pub struct QuantumHandler {
    pub api: Api,
    pub shots: u32,
    pub accelerator: String,
}

impl Default for QuantumHandler {
    fn default() -> Self {
        QuantumHandler { api: Api::default(), shots: DEFAULT_SHOTS, accelerator: DEFAULT_ACCELERATOR.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Settings {
    namespace: String,
    shots: u32,
    accelerator: String,
}

fn valid_namespace(ns: &str) -> bool {
    let ns = ns.strip_prefix("::").unwrap_or(ns);
    !ns.is_empty()
        && ns.split("::").all(|part| {
            let mut c = part.chars();
            c.next().is_some_and(|f| f == '_' || f.is_ascii_alphabetic())
                && c.all(|x| x == '_' || x.is_ascii_alphanumeric())
        })
}

impl QuantumHandler {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_api(mut self, namespace: impl Into<String>) -> Self {
        self.api.namespace = namespace.into();
        self
    }

    pub fn with_shots(mut self, shots: u32) -> Self {
        self.shots = shots;
        self
    }

    /// Handler arguments `quantum.api`, `quantum.shots` and
    /// `quantum.accelerator` override the builder settings.
    fn settings(&self, args: &HandlerArgs) -> Result<Settings, String> {
        let namespace = args.get("quantum", "api").unwrap_or(&self.api.namespace).to_string();
        if !valid_namespace(&namespace) {
            return Err(format!("invalid quantum API namespace `{namespace}`"));
        }
        let shots = match args.get("quantum", "shots") {
            None => self.shots,
            Some(s) => s.parse().ok().filter(|&n: &u32| n > 0).ok_or_else(|| format!("invalid shot count `{s}`"))?,
        };
        let accelerator = args.get("quantum", "accelerator").unwrap_or(&self.accelerator).to_string();
        if accelerator.chars().any(|c| c == '"' || c == '\\' || c.is_control()) {
            return Err(format!("invalid accelerator name `{accelerator}`"));
        }
        Ok(Settings { namespace, shots, accelerator })
    }
}

/// Runs the handler pipeline on one kernel.
pub fn translate(decl: &Declarator, body: &[Token], suffix: u32, api: &Api) -> Result<String, Diagnostic> {
    let ir = build_ir(decl, body)?;
    Ok(gen_kernel_class(decl, &ir, suffix, api))
}

impl SyntaxHandler for QuantumHandler {
    fn name(&self) -> &str {
        "quantum"
    }

    fn aliases(&self) -> Vec<String> {
        vec!["__qpu__".to_string()]
    }

    fn help(&self) -> &str {
        "quantum kernels of gate statements compiled to QuantumKernel subclasses"
    }

    fn get_replacement(&self, decl: &Declarator, body: &[Token], ctx: &mut HandlerContext) -> Replacement {
        let settings = match self.settings(ctx.args()) {
            Ok(s) => s,
            Err(msg) => return Replacement::error(Diagnostic::error(msg, decl.attr_span)),
        };
        let suffix = ctx.unique_suffix();
        match translate(decl, body, suffix, &Api { namespace: settings.namespace }) {
            Ok(text) => Replacement::text(text),
            Err(d) => Replacement::error(d),
        }
    }

    fn add_to_predefines(&self, args: &HandlerArgs) -> String {
        let s = self.settings(args).unwrap_or_else(|_| Settings {
            namespace: self.api.namespace.clone(),
            shots: self.shots,
            accelerator: self.accelerator.clone(),
        });
        format!(
            "#include <memory>\n#include <{RUNTIME_HEADER}>\n#ifndef SYNSTITCH_QRT_SHOTS\n#define SYNSTITCH_QRT_SHOTS {}\n#endif\n\
             #ifndef SYNSTITCH_QRT_ACCELERATOR\n#define SYNSTITCH_QRT_ACCELERATOR \"{}\"\n#endif\n",
            s.shots, s.accelerator
        )
    }
}
