//! Checking a parsed expression against its formats and parameters.

use indexmap::IndexMap;
use synstitch_core::{Declarator, Diagnostic, Param, TokenKind};

use crate::format::{FormatSpec, ModeFormat};
use crate::notation::{IndexExpr, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    AllDense,
    CsrSpmv,
}

/// How a tensor parameter reaches the kernels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Passing {
    /// Already a `taco_tensor_t *`.
    Direct,
    /// `S *P`: converted with `P->S2taco(P)`.
    Pointer(String),
    /// `S &P`: converted with `P.S2taco(&P)`.
    Reference(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorParam {
    pub name: String,
    pub passing: Passing,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelPlan {
    pub expr: IndexExpr,
    pub formats: IndexMap<String, FormatSpec>,
    pub suffix: u32,
    pub strategy: Strategy,
    /// Kernel parameter order: target first, then operands.
    pub tensors: Vec<TensorParam>,
}

impl KernelPlan {
    pub fn assemble_name(&self) -> String {
        format!("__taco_assm_{}", self.suffix)
    }

    pub fn compute_name(&self) -> String {
        format!("__taco_comput_{}", self.suffix)
    }
}

fn passing(p: &Param) -> Option<Passing> {
    let ty = p.type_only();
    let words: Vec<&str> = ty
        .iter()
        .filter(|t| t.kind == TokenKind::Identifier && !matches!(t.spelling.as_str(), "const" | "volatile" | "struct"))
        .map(|t| t.spelling.as_str())
        .collect();
    let [base] = words[..] else { return None };
    let puncts: Vec<&str> = ty.iter().filter(|t| t.kind == TokenKind::Punct).map(|t| t.spelling.as_str()).collect();
    match (base, &puncts[..]) {
        ("taco_tensor_t", ["*"]) => Some(Passing::Direct),
        (_, ["*"]) => Some(Passing::Pointer(base.to_string())),
        (_, ["&"]) => Some(Passing::Reference(base.to_string())),
        _ => None,
    }
}

fn csr_shape(expr: &IndexExpr, formats: &IndexMap<String, FormatSpec>) -> bool {
    use ModeFormat::*;
    let fmt = |name: &str| formats.get(name).map(|f| f.modes.as_slice());
    let [Term::Tensor(a), Term::Tensor(b)] = &expr.terms[..] else { return false };
    let (m, v) = if a.order() == 2 { (a, b) } else { (b, a) };
    let t = &expr.target;
    t.order() == 1
        && m.order() == 2
        && v.order() == 1
        && m.indices[0] == t.indices[0]
        && m.indices[1] == v.indices[0]
        && fmt(&t.name) == Some(&[Dense])
        && fmt(&m.name) == Some(&[Dense, Sparse])
        && fmt(&v.name) == Some(&[Dense])
}

/// Checks that every tensor has a parameter and a format of the right order,
/// and picks a code-generation strategy. The first problem found is
/// returned.
pub fn validate(
    expr: &IndexExpr,
    formats: &IndexMap<String, FormatSpec>,
    decl: &Declarator,
    suffix: u32,
) -> Result<KernelPlan, Diagnostic> {
    let format_param = decl.params.last().map(|p| p.name.as_str());
    let mut orders: IndexMap<&str, usize> = IndexMap::new();
    for r in expr.refs() {
        let Some(param) = decl.param(&r.name).filter(|p| Some(p.name.as_str()) != format_param) else {
            return Err(Diagnostic::error(
                format!("tensor `{}` has no matching parameter in `{}`", r.name, decl.name),
                r.span,
            ));
        };
        if passing(param).is_none() {
            return Err(Diagnostic::error(
                format!("parameter `{}` must be a pointer or reference to a tensor type", r.name),
                param.name_span().unwrap_or(r.span),
            ));
        }
        match formats.get(&r.name) {
            None if r.order() > 0 => {
                return Err(Diagnostic::error(format!("no format entry for tensor `{}`", r.name), r.span));
            }
            Some(f) if f.modes.len() != r.order() => {
                return Err(Diagnostic::error(
                    format!(
                        "format of `{}` has {} mode(s) but `{}` is used with {} index(es)",
                        r.name,
                        f.modes.len(),
                        r.name,
                        r.order()
                    ),
                    r.span,
                ));
            }
            Some(f) if !f.is_identity_layout() => {
                return Err(Diagnostic::error(format!("unsupported layout for tensor `{}`", r.name), r.span));
            }
            _ => {}
        }
        if let Some(&prev) = orders.get(r.name.as_str()) {
            if prev != r.order() {
                return Err(Diagnostic::error(
                    format!("tensor `{}` is used with {} and {} indices", r.name, prev, r.order()),
                    r.span,
                ));
            }
        }
        orders.insert(&r.name, r.order());
    }
    let mut dims: IndexMap<&str, (&str, usize)> = IndexMap::new();
    for r in expr.refs() {
        for (mode, i) in r.indices.iter().enumerate() {
            dims.entry(i.as_str()).or_insert((r.name.as_str(), mode));
        }
    }

    let all_dense = expr.tensor_names().iter().all(|n| formats.get(*n).is_none_or(FormatSpec::is_all_dense));
    let strategy = if all_dense {
        Strategy::AllDense
    } else if csr_shape(expr, formats) {
        Strategy::CsrSpmv
    } else {
        let desc: Vec<String> = expr
            .tensor_names()
            .iter()
            .map(|n| format!("{}:{}", n, formats.get(*n).map(FormatSpec::mode_string).unwrap_or_default()))
            .collect();
        return Err(Diagnostic::error(
            format!("unsupported format combination ({}) for this expression", desc.join(" ")),
            expr.target.span,
        ));
    };

    let tensors = expr
        .tensor_names()
        .into_iter()
        .map(|n| TensorParam {
            name: n.to_string(),
            passing: passing(decl.param(n).expect("checked above")).expect("checked above"),
        })
        .collect();
    Ok(KernelPlan { expr: expr.clone(), formats: formats.clone(), suffix, strategy, tensors })
}
