//! Statements of a quantum kernel body.

use std::fmt;

use synstitch_core::{render, Diagnostic, SourceSpan, Token, TokenKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    X,
    Y,
    Z,
    H,
    S,
    T,
    Rx,
    Ry,
    Rz,
    CX,
    Measure,
}

impl Gate {
    pub const ALL: [Gate; 11] =
        [Gate::X, Gate::Y, Gate::Z, Gate::H, Gate::S, Gate::T, Gate::Rx, Gate::Ry, Gate::Rz, Gate::CX, Gate::Measure];

    pub fn from_name(name: &str) -> Option<Gate> {
        Gate::ALL.into_iter().find(|g| g.name() == name)
    }

    pub fn name(self) -> &'static str {
        match self {
            Gate::X => "X",
            Gate::Y => "Y",
            Gate::Z => "Z",
            Gate::H => "H",
            Gate::S => "S",
            Gate::T => "T",
            Gate::Rx => "Rx",
            Gate::Ry => "Ry",
            Gate::Rz => "Rz",
            Gate::CX => "CX",
            Gate::Measure => "Measure",
        }
    }

    pub fn qubits(self) -> usize {
        if self == Gate::CX {
            2
        } else {
            1
        }
    }

    pub fn has_angle(self) -> bool {
        matches!(self, Gate::Rx | Gate::Ry | Gate::Rz)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `q[<index>]`, or the whole register `q` when `index` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QubitRef {
    pub reg: String,
    pub span: SourceSpan,
    pub index: Vec<Token>,
}

impl QubitRef {
    pub fn is_whole_register(&self) -> bool {
        self.index.is_empty()
    }

    pub fn index_text(&self) -> String {
        render(&self.index)
    }

    /// The index when it is an integer literal.
    pub fn literal_index(&self) -> Option<u64> {
        match &self.index[..] {
            [t] if t.kind == TokenKind::Number => t.spelling.replace('\'', "").parse().ok(),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateStmt {
    pub gate: Gate,
    pub span: SourceSpan,
    pub qubits: Vec<QubitRef>,
    pub angle: Option<Vec<Token>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Modifier {
    Plain,
    Ctrl,
    Adjoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelCallStmt {
    pub callee: String,
    pub span: SourceSpan,
    pub modifier: Modifier,
    /// Present exactly when `modifier` is `Ctrl`.
    pub ctrl_qubit: Option<QubitRef>,
    pub args: Vec<Vec<Token>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Gate(GateStmt),
    Call(KernelCallStmt),
}

impl Stmt {
    pub fn span(&self) -> SourceSpan {
        match self {
            Stmt::Gate(g) => g.span,
            Stmt::Call(c) => c.span,
        }
    }
}

fn depth_delta(t: &Token) -> isize {
    match t.spelling.as_str() {
        "(" | "[" | "{" if t.kind == TokenKind::Punct => 1,
        ")" | "]" | "}" if t.kind == TokenKind::Punct => -1,
        _ => 0,
    }
}

/// Splits a body on top-level `;`, dropping empty statements.
pub fn split_statements(body: &[Token]) -> Result<Vec<&[Token]>, Diagnostic> {
    let mut groups = Vec::new();
    let mut depth = 0isize;
    let mut start = 0;
    for (i, t) in body.iter().enumerate() {
        depth += depth_delta(t);
        if depth == 0 && t.is_punct(";") {
            if i > start {
                groups.push(&body[start..i]);
            }
            start = i + 1;
        }
    }
    if start < body.len() {
        return Err(Diagnostic::error("expected `;` after quantum statement", body[start].span));
    }
    Ok(groups)
}

/// Splits call arguments on top-level commas.
fn split_args(toks: &[Token]) -> Vec<Vec<Token>> {
    if toks.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Vec::new()];
    let mut depth = 0isize;
    for t in toks {
        depth += depth_delta(t);
        if depth == 0 && t.is_punct(",") {
            out.push(Vec::new());
        } else {
            out.last_mut().unwrap().push(t.clone());
        }
    }
    out
}

fn parse_qubit(arg: &[Token], at: SourceSpan) -> Result<QubitRef, Diagnostic> {
    let bad = |span: SourceSpan| Diagnostic::error("malformed qubit reference: expected `q[<index>]`", span);
    let Some(first) = arg.first() else { return Err(bad(at)) };
    if first.kind != TokenKind::Identifier {
        return Err(bad(first.span));
    }
    let reg = first.spelling.clone();
    match arg {
        [_] => Ok(QubitRef { reg, span: first.span, index: Vec::new() }),
        [_, open, inner @ .., close] if open.is_punct("[") && close.is_punct("]") && !inner.is_empty() => {
            let mut depth = 0isize;
            for t in inner {
                depth += depth_delta(t);
                if depth < 0 {
                    return Err(bad(t.span));
                }
            }
            if depth != 0 {
                return Err(bad(first.span));
            }
            Ok(QubitRef { reg, span: first.span, index: inner.to_vec() })
        }
        _ => Err(bad(first.span)),
    }
}

/// Parses `GATE(qubits.., angle)`, `K(args)`, or `K::ctrl|adjoint(args)`.
pub fn parse_statement(group: &[Token]) -> Result<Stmt, Diagnostic> {
    let head = &group[0];
    let unsupported = || Diagnostic::error("unsupported quantum statement: expected a gate or kernel call", head.span);
    if head.kind != TokenKind::Identifier {
        return Err(unsupported());
    }
    let (modifier, open) = match group.get(1) {
        Some(t) if t.is_punct("(") => (Modifier::Plain, 1),
        Some(t) if t.is_punct("::") => match group.get(2) {
            Some(m) if m.is_ident("ctrl") => (Modifier::Ctrl, 3),
            Some(m) if m.is_ident("adjoint") => (Modifier::Adjoint, 3),
            Some(m) => {
                return Err(Diagnostic::error(
                    format!("unknown kernel modifier `{}`: expected `ctrl` or `adjoint`", m.spelling),
                    m.span,
                ))
            }
            None => return Err(unsupported()),
        },
        _ => return Err(unsupported()),
    };
    if !group.get(open).is_some_and(|t| t.is_punct("(")) || !group.last().unwrap().is_punct(")") {
        return Err(unsupported());
    }
    let inner = &group[open + 1..group.len() - 1];
    // The closing paren must be the one matching `open`.
    let mut depth = 0isize;
    for t in inner {
        depth += depth_delta(t);
        if depth < 0 {
            return Err(unsupported());
        }
    }
    let args = split_args(inner);
    let close_span = group.last().unwrap().span;

    if modifier == Modifier::Plain {
        if let Some(gate) = Gate::from_name(&head.spelling) {
            let want = gate.qubits() + usize::from(gate.has_angle());
            if args.len() != want || args.iter().any(Vec::is_empty) {
                let angle = if gate.has_angle() { " and 1 angle" } else { "" };
                return Err(Diagnostic::error(
                    format!(
                        "gate `{gate}` takes {} qubit{}{angle}, got {} argument{}",
                        gate.qubits(),
                        if gate.qubits() == 1 { "" } else { "s" },
                        args.len(),
                        if args.len() == 1 { "" } else { "s" }
                    ),
                    head.span,
                ));
            }
            let qubits = args[..gate.qubits()]
                .iter()
                .map(|a| {
                    let q = parse_qubit(a, close_span)?;
                    if q.is_whole_register() {
                        return Err(Diagnostic::error(
                            format!("gate `{gate}` needs a single qubit `{}[<index>]`, not a whole register", q.reg),
                            q.span,
                        ));
                    }
                    Ok(q)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let angle = gate.has_angle().then(|| args[gate.qubits()].clone());
            return Ok(Stmt::Gate(GateStmt { gate, span: head.span, qubits, angle }));
        }
    }
    let mut args = args;
    if args.iter().any(Vec::is_empty) {
        return Err(Diagnostic::error("empty argument in kernel call", head.span));
    }
    let ctrl_qubit = if modifier == Modifier::Ctrl {
        if args.is_empty() {
            return Err(Diagnostic::error("`ctrl` needs a control qubit as its first argument", head.span));
        }
        let q = parse_qubit(&args.remove(0), close_span)?;
        if q.is_whole_register() {
            return Err(Diagnostic::error("the control of `ctrl` must be a single qubit", q.span));
        }
        Some(q)
    } else {
        None
    };
    Ok(Stmt::Call(KernelCallStmt { callee: head.spelling.clone(), span: head.span, modifier, ctrl_qubit, args }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use synstitch_core::tokenize;

    fn stmt(src: &str) -> Result<Stmt, Diagnostic> {
        parse_statement(&tokenize(src).unwrap())
    }

    #[test]
    fn ansatz_body_has_three_statements() {
        let toks = tokenize("X(q[0]);\n  Ry(q[1], x);\n  CX(q[1], q[0]);").unwrap();
        assert_eq!(split_statements(&toks).unwrap().len(), 3);
    }

    #[test]
    fn empty_statements_are_dropped() {
        let toks = tokenize("X(q[0]);;").unwrap();
        assert_eq!(split_statements(&toks).unwrap().len(), 1);
        assert!(split_statements(&[]).unwrap().is_empty());
    }

    #[test]
    fn missing_semicolon() {
        let toks = tokenize("X(q[0]); H(q[0])").unwrap();
        let e = split_statements(&toks).unwrap_err();
        assert_eq!(e.span.unwrap().col, 10);
    }

    #[test]
    fn rotation_gate() {
        let Stmt::Gate(g) = stmt("Ry(q[1], x)").unwrap() else { panic!() };
        assert_eq!(g.gate, Gate::Ry);
        assert_eq!(g.qubits.len(), 1);
        assert_eq!(g.qubits[0].reg, "q");
        assert_eq!(g.qubits[0].literal_index(), Some(1));
        assert_eq!(render(g.angle.as_ref().unwrap()), "x");
        let Stmt::Gate(g) = stmt("Rz(q[0], 2 * f(a, b))").unwrap() else { panic!() };
        assert_eq!(render(g.angle.as_ref().unwrap()), "2 * f(a, b)");
    }

    #[test]
    fn ctrl_call() {
        let Stmt::Call(c) = stmt("x_gate::ctrl(q[0], q)").unwrap() else { panic!() };
        assert_eq!(c.callee, "x_gate");
        assert_eq!(c.modifier, Modifier::Ctrl);
        assert_eq!(c.ctrl_qubit.unwrap().index_text(), "0");
        assert_eq!(c.args.len(), 1);
        assert_eq!(render(&c.args[0]), "q");
    }

    #[test]
    fn plain_and_adjoint_calls() {
        let Stmt::Call(c) = stmt("ansatz(q, x)").unwrap() else { panic!() };
        assert_eq!((c.modifier, c.args.len()), (Modifier::Plain, 2));
        let Stmt::Call(c) = stmt("ansatz::adjoint(q,x)").unwrap() else { panic!() };
        assert_eq!(c.modifier, Modifier::Adjoint);
        assert!(c.ctrl_qubit.is_none());
    }

    #[test]
    fn arity_errors() {
        let e = stmt("CX(q[1])").unwrap_err();
        assert!(e.message.contains("gate `CX` takes 2 qubits"), "{}", e.message);
        assert!(stmt("Ry(q[0])").unwrap_err().message.contains("1 angle"));
        assert!(stmt("X(q[0], q[1])").is_err());
        assert!(stmt("H()").is_err());
        assert!(stmt("H(q)").unwrap_err().message.contains("whole register"));
    }

    #[test]
    fn malformed_statements() {
        for src in ["X(q[])", "X(q[0]", "X q[0]", "1(q)", "k::foo(q)", "k::ctrl(q)", "X(q[0]) + 1", "X(3)", "X(q[0]] )"]
        {
            assert!(stmt(src).is_err(), "{src}");
        }
    }

    #[test]
    fn digit_separators_in_indices() {
        let Stmt::Gate(g) = stmt("X(q[1'0])").unwrap() else { panic!() };
        assert_eq!(g.qubits[0].literal_index(), Some(10));
    }
}
