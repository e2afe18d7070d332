//! A checked kernel: its parameters and statements.

use synstitch_core::{render, Declarator, Diagnostic, Param, Token, TokenKind};

use crate::stmt::{parse_statement, split_statements, QubitRef, Stmt};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelParam {
    pub name: String,
    /// Type as written, minus the name.
    pub ty: String,
    /// Type with top-level `const` and references removed, as stored in
    /// the kernel's argument tuple.
    pub value_ty: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelIR {
    pub name: String,
    pub params: Vec<KernelParam>,
    /// Index of the `qreg` parameter.
    pub qreg: usize,
    pub stmts: Vec<Stmt>,
}

impl KernelIR {
    pub fn qreg_name(&self) -> &str {
        &self.params[self.qreg].name
    }

    pub fn gate_count(&self) -> usize {
        self.stmts.iter().filter(|s| matches!(s, Stmt::Gate(_))).count()
    }
}

fn is_qreg(ty: &[Token]) -> bool {
    let words: Vec<&str> = ty
        .iter()
        .filter(|t| t.kind == TokenKind::Identifier && t.spelling != "const")
        .map(|t| t.spelling.as_str())
        .collect();
    words.last() == Some(&"qreg") && !ty.iter().any(|t| t.is_punct("*"))
}

fn value_type(ty: &[Token]) -> String {
    let mut toks: Vec<Token> = ty.to_vec();
    while toks.last().is_some_and(|t| t.is_punct("&") || t.is_punct("&&")) {
        toks.pop();
    }
    if toks.first().is_some_and(|t| t.is_ident("const")) {
        toks.remove(0);
    }
    if toks.len() > 1 && toks.last().is_some_and(|t| t.is_ident("const")) {
        toks.pop();
    }
    render(&toks)
}

fn kernel_param(p: &Param) -> KernelParam {
    let ty = p.type_only();
    KernelParam { name: p.name.clone(), ty: render(&ty), value_ty: value_type(&ty) }
}

fn check_qubit(ir: &KernelIR, q: &QubitRef) -> Result<(), Diagnostic> {
    if q.reg == ir.qreg_name() {
        return Ok(());
    }
    Err(Diagnostic::error(
        format!("`{}` is not a qreg parameter of `{}` (expected `{}`)", q.reg, ir.name, ir.qreg_name()),
        q.span,
    ))
}

/// Parses and checks a kernel body.
pub fn build_ir(decl: &Declarator, body: &[Token]) -> Result<KernelIR, Diagnostic> {
    if !(decl.return_tokens.len() == 1 && decl.return_tokens[0].is_ident("void")) {
        return Err(Diagnostic::error(format!("quantum kernel `{}` must return void", decl.name), decl.name_span));
    }
    if decl.name.contains("::") {
        return Err(Diagnostic::error("quantum kernels must not have qualified names", decl.name_span));
    }
    if let Some(p) = decl.params.iter().find(|p| p.name.is_empty()) {
        return Err(Diagnostic::error("quantum kernel parameters must be named", p.span()));
    }
    let qregs: Vec<usize> = (0..decl.params.len()).filter(|&i| is_qreg(&decl.params[i].type_only())).collect();
    let qreg = match qregs[..] {
        [one] => one,
        [] => {
            return Err(Diagnostic::error(
                format!("quantum kernel `{}` needs a `qreg` parameter", decl.name),
                decl.name_span,
            ))
        }
        [_, second, ..] => {
            return Err(Diagnostic::error(
                "quantum kernels with more than one `qreg` parameter are not supported",
                decl.params[second].span(),
            ))
        }
    };
    let mut ir = KernelIR {
        name: decl.name.clone(),
        params: decl.params.iter().map(kernel_param).collect(),
        qreg,
        stmts: Vec::new(),
    };
    for group in split_statements(body)? {
        let stmt = parse_statement(group)?;
        match &stmt {
            Stmt::Gate(g) => {
                for q in &g.qubits {
                    check_qubit(&ir, q)?;
                }
                if let [a, b] = &g.qubits[..] {
                    if a.literal_index().is_some() && a.literal_index() == b.literal_index() {
                        return Err(Diagnostic::error(
                            format!("`{}` control and target are the same qubit", g.gate),
                            b.span,
                        ));
                    }
                }
            }
            Stmt::Call(c) => {
                if let Some(q) = &c.ctrl_qubit {
                    check_qubit(&ir, q)?;
                }
                if c.callee == ir.name {
                    return Err(Diagnostic::error(format!("kernel `{}` calls itself", ir.name), c.span));
                }
            }
        }
        ir.stmts.push(stmt);
    }
    Ok(ir)
}

#[cfg(test)]
mod tests {
    use super::*;
    use synstitch_core::scanner::find_syntax_functions;
    use synstitch_core::tokenize;

    fn build(src: &str) -> Result<KernelIR, Diagnostic> {
        let f = find_syntax_functions(&tokenize(src).unwrap(), &Default::default()).functions.remove(0);
        build_ir(&f.declarator, &f.body_tokens)
    }

    #[test]
    fn ansatz() {
        let ir =
            build("[[clang::syntax(quantum)]] void ansatz(qreg q, double x) { X(q[0]); Ry(q[1], x); CX(q[1], q[0]); }")
                .unwrap();
        assert_eq!(ir.gate_count(), 3);
        assert_eq!(ir.qreg_name(), "q");
        assert_eq!(ir.params[1].value_ty, "double");
    }

    #[test]
    fn value_types_drop_const_and_references() {
        let ir =
            build("[[clang::syntax(quantum)]] void k(qreg q, const std::vector<double> &v, int const c) { }").unwrap();
        assert_eq!(ir.params[1].value_ty, "std::vector<double>");
        assert_eq!(ir.params[1].ty, "const std::vector<double> &");
        assert_eq!(ir.params[2].value_ty, "int");
    }

    #[test]
    fn undeclared_register() {
        let e = build("[[clang::syntax(quantum)]] void k(qreg q) {\n  X(r[0]);\n}").unwrap_err();
        assert!(e.message.contains("`r` is not a qreg parameter"));
        assert_eq!((e.span.unwrap().line, e.span.unwrap().col), (2, 5));
        assert!(build("[[clang::syntax(quantum)]] void k(qreg q) { k2::ctrl(r[0], q); }").is_err());
    }

    #[test]
    fn register_count_and_signature_rules() {
        assert!(build("[[clang::syntax(quantum)]] void k(double x) { }")
            .unwrap_err()
            .message
            .contains("needs a `qreg`"));
        assert!(build("[[clang::syntax(quantum)]] void k(qreg a, qreg b) { }")
            .unwrap_err()
            .message
            .contains("more than one"));
        assert!(build("[[clang::syntax(quantum)]] int k(qreg q) { }").unwrap_err().message.contains("return void"));
        assert!(build("[[clang::syntax(quantum)]] void k(qreg q) { CX(q[0], q[0]); }").is_err());
        assert!(build("[[clang::syntax(quantum)]] void k(qreg q) { k(q); }")
            .unwrap_err()
            .message
            .contains("calls itself"));
    }

    #[test]
    fn empty_body() {
        let ir = build("[[clang::syntax(quantum)]] void k(qreg q) { }").unwrap();
        assert!(ir.stmts.is_empty());
    }
}
