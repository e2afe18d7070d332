//! The kernel class pattern: a function that calls a forward-declared
//! internal function, a `QuantumKernel` subclass whose destructor builds and
//! runs the circuit, and the internal function constructing a temporary.

use std::fmt::Write;

use synstitch_core::{get_decl_text, render, Declarator};

use crate::ir::KernelIR;
use crate::stmt::{GateStmt, KernelCallStmt, Modifier, Stmt};

/// Names the generated code refers to in the runtime namespace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Api {
    pub namespace: String,
}

impl Default for Api {
    fn default() -> Self {
        Api { namespace: "qrt".to_string() }
    }
}

pub fn internal_call_name(ir: &KernelIR, suffix: u32) -> String {
    format!("internal_{}_call_{}", ir.name, suffix)
}

fn gate_call(g: &GateStmt) -> String {
    let qubits: Vec<String> = g.qubits.iter().map(|q| q.index_text()).collect();
    match &g.angle {
        Some(a) => {
            format!("__provider->createInstruction(\"{}\", {{{}}}, {{{}}})", g.gate, qubits.join(", "), render(a))
        }
        None => format!("__provider->createInstruction(\"{}\", {{{}}})", g.gate, qubits.join(", ")),
    }
}

fn kernel_call(c: &KernelCallStmt, suffix: u32, k: usize) -> String {
    let mut args = vec!["_parent_kernel".to_string()];
    if let Some(q) = &c.ctrl_qubit {
        args.push(q.index_text());
    }
    args.extend(c.args.iter().map(|a| render(a)));
    let args = args.join(", ");
    match c.modifier {
        Modifier::Plain => format!("{{ class {} __nested_{}_{}({}); }}", c.callee, suffix, k, args),
        Modifier::Ctrl => format!("{}::ctrl({});", c.callee, args),
        Modifier::Adjoint => format!("{}::adjoint({});", c.callee, args),
    }
}

fn flush(out: &mut String, pending: &mut Vec<String>) {
    if !pending.is_empty() {
        let _ = writeln!(out, "    _parent_kernel->addInstructions({{{}}});", pending.join(", "));
        pending.clear();
    }
}

/// Destructor statements built from the kernel body.
fn body(ir: &KernelIR, suffix: u32, ns: &str) -> String {
    let mut out = String::new();
    if ir.gate_count() > 0 {
        let _ = writeln!(out, "    auto __provider = {ns}::getIRProvider();");
    }
    let mut pending = Vec::new();
    let mut n = 0;
    for (k, s) in ir.stmts.iter().enumerate() {
        match s {
            Stmt::Gate(g) => {
                let _ = writeln!(out, "    auto __i{n} = {};", gate_call(g));
                pending.push(format!("__i{n}"));
                n += 1;
            }
            Stmt::Call(c) => {
                flush(&mut out, &mut pending);
                let _ = writeln!(out, "    {}", kernel_call(c, suffix, k));
            }
        }
    }
    flush(&mut out, &mut pending);
    out
}

/// Replacement text for one kernel.
pub fn gen_kernel_class(decl: &Declarator, ir: &KernelIR, suffix: u32, api: &Api) -> String {
    let ns = &api.namespace;
    let name = &ir.name;
    let internal = internal_call_name(ir, suffix);
    let names: Vec<&str> = ir.params.iter().map(|p| p.name.as_str()).collect();
    let names = names.join(", ");
    let base = {
        let mut targs = vec![format!("class {name}")];
        targs.extend(ir.params.iter().map(|p| p.value_ty.clone()));
        format!("{ns}::QuantumKernel<{}>", targs.join(", "))
    };
    let typed: Vec<String> = ir.params.iter().map(|p| format!("{} {}", p.value_ty, p.name)).collect();
    let typed = typed.join(", ");
    let forward: Vec<&str> = ir.params.iter().map(|p| p.value_ty.as_str()).collect();

    let mut out = String::new();
    let _ = writeln!(out, "{} {{", get_decl_text(decl));
    let _ = writeln!(out, "  void {internal}({});", forward.join(", "));
    let _ = writeln!(out, "  {internal}({names});");
    out.push_str("}\n");
    let _ = writeln!(out, "class {name} : public {base} {{");
    out.push_str("public:\n");
    let _ = writeln!(out, "  {name}({typed}) : {base}({names}) {{}}");
    let _ = writeln!(
        out,
        "  {name}(std::shared_ptr<{ns}::CompositeInstruction> __parent, {typed}) : {base}(__parent, {names}) {{}}"
    );
    let _ = writeln!(out, "  virtual ~{name}() {{");
    let _ = writeln!(out, "    [[maybe_unused]] auto [{names}] = args_tuple;");
    out.push_str(&body(ir, suffix, ns));
    out.push_str("    if (this->is_callable) {\n");
    let _ = writeln!(out, "      auto __qpu = {ns}::getAccelerator(SYNSTITCH_QRT_ACCELERATOR, SYNSTITCH_QRT_SHOTS);");
    let _ = writeln!(out, "      __qpu->execute({}, _parent_kernel);", ir.qreg_name());
    out.push_str("    }\n  }\n};\n");
    let _ = writeln!(out, "void {internal}({typed}) {{");
    let _ = writeln!(out, "  class {name} __instance_{suffix}({names});");
    out.push_str("}\n");
    out
}
