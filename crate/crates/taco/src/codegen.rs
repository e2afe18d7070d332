//! C code for the assemble and compute kernels, and the C++ wrapper that
//! replaces the tagged function.

use std::fmt::Write;

use synstitch_core::{get_decl_text, Declarator};

use crate::notation::{AssignOp, TensorRef, Term};
use crate::plan::{KernelPlan, Passing, Strategy};

fn signature(plan: &KernelPlan, name: &str, named: bool) -> String {
    let params: Vec<String> = plan
        .tensors
        .iter()
        .map(|t| if named { format!("taco_tensor_t *{}", t.name) } else { "taco_tensor_t *".to_string() })
        .collect();
    format!("int {}({})", name, params.join(", "))
}

fn dim(tensor: &str, mode: usize) -> String {
    format!("{}{}_dimension", tensor, mode + 1)
}

/// Row-major linear position of `r`'s element.
fn address(r: &TensorRef) -> String {
    match r.indices.len() {
        0 => "0".to_string(),
        1 => r.indices[0].clone(),
        _ => {
            let mut acc = r.indices[0].clone();
            for (mode, idx) in r.indices.iter().enumerate().skip(1) {
                acc = format!("({} * {} + {})", acc, dim(&r.name, mode), idx);
            }
            acc
        }
    }
}

fn declare_dims(out: &mut String, r: &TensorRef) {
    for mode in 0..r.order() {
        let _ = writeln!(out, "  int {} = (int)({}->dimensions[{}]);", dim(&r.name, mode), r.name, mode);
    }
}

fn declare_vals(out: &mut String, name: &str) {
    let _ = writeln!(out, "  double* {name}_vals = (double*)({name}->vals);");
}

fn store(plan: &KernelPlan, lhs: &str, value: &str) -> String {
    match plan.expr.op {
        AssignOp::Assign => format!("{lhs} = {value};"),
        AssignOp::Accumulate => format!("{lhs} = {lhs} + {value};"),
    }
}

fn gen_assemble(plan: &KernelPlan) -> String {
    let t = &plan.expr.target;
    let mut out = format!("{} {{\n", signature(plan, &plan.assemble_name(), true));
    declare_dims(&mut out, t);
    let size = if t.order() == 0 {
        "1".to_string()
    } else {
        (0..t.order()).map(|m| format!("(size_t){}", dim(&t.name, m))).collect::<Vec<_>>().join(" * ")
    };
    declare_vals(&mut out, &t.name);
    let _ = write!(
        out,
        "  if ({n}_vals == NULL) {{\n    {n}_vals = (double*)calloc({size}, sizeof(double));\n  }}\n  {n}->vals = (uint8_t*)\
         {n}_vals;\n  return 0;\n}}\n",
        n = t.name
    );
    out
}

fn gen_compute_csr(plan: &KernelPlan, parallel: bool) -> String {
    let e = &plan.expr;
    let y = &e.target;
    let a = e.operands().find(|r| r.order() == 2).expect("csr plan has a matrix");
    let x = e.operands().find(|r| r.order() == 1).expect("csr plan has a vector");
    let (i, j) = (&a.indices[0], &a.indices[1]);
    let (an, xn, yn) = (&a.name, &x.name, &y.name);
    let acc = format!("t{j}{yn}_val");
    let pos = format!("{j}{an}");
    let product: Vec<String> = e
        .operands()
        .map(|r| if r.name == *an { format!("{an}_vals[{pos}]") } else { format!("{xn}_vals[{j}]") })
        .collect();

    let mut out = format!("{} {{\n", signature(plan, &plan.compute_name(), true));
    declare_vals(&mut out, yn);
    let _ = writeln!(out, "  int {} = (int)({}->dimensions[0]);", dim(an, 0), an);
    let _ = writeln!(out, "  int* {an}2_pos = (int*)({an}->indices[1][0]);");
    let _ = writeln!(out, "  int* {an}2_crd = (int*)({an}->indices[1][1]);");
    declare_vals(&mut out, an);
    declare_vals(&mut out, xn);
    out.push('\n');
    if parallel {
        out.push_str("  #pragma omp parallel for schedule(runtime)\n");
    }
    let _ = writeln!(out, "  for (int32_t {i} = 0; {i} < {}; {i}++) {{", dim(an, 0));
    let _ = writeln!(out, "    double {acc} = 0.0;");
    let _ = writeln!(out, "    for (int32_t {pos} = {an}2_pos[{i}]; {pos} < {an}2_pos[({i} + 1)]; {pos}++) {{");
    let _ = writeln!(out, "      int32_t {j} = {an}2_crd[{pos}];");
    let _ = writeln!(out, "      {acc} += {};", product.join(" * "));
    out.push_str("    }\n");
    let _ = writeln!(out, "    {}", store(plan, &format!("{yn}_vals[{i}]"), &acc));
    out.push_str("  }\n  return 0;\n}\n");
    out
}

fn gen_compute_dense(plan: &KernelPlan, parallel: bool) -> String {
    let e = &plan.expr;
    let t = &e.target;
    let free = e.free_indices();
    let reds = e.reduction_indices();
    let bound = |idx: &str| -> String {
        let r = e.refs().find(|r| r.indices.iter().any(|i| i == idx)).expect("index is used");
        dim(&r.name, r.indices.iter().position(|i| i == idx).unwrap())
    };

    let mut out = format!("{} {{\n", signature(plan, &plan.compute_name(), true));
    let mut declared: Vec<&str> = Vec::new();
    for r in e.refs() {
        if !declared.contains(&r.name.as_str()) {
            declared.push(&r.name);
            declare_dims(&mut out, r);
            declare_vals(&mut out, &r.name);
        }
    }
    out.push('\n');

    let product: Vec<String> = e
        .terms
        .iter()
        .map(|term| match term {
            Term::Tensor(r) => format!("{}_vals[{}]", r.name, address(r)),
            Term::Literal(s) => s.clone(),
        })
        .collect();
    let product = product.join(" * ");
    let target = format!("{}_vals[{}]", t.name, address(t));

    let mut depth = 1;
    let line = |out: &mut String, depth: usize, text: &str| {
        let _ = writeln!(out, "{}{}", "  ".repeat(depth), text);
    };
    if parallel && !free.is_empty() {
        line(&mut out, depth, "#pragma omp parallel for schedule(runtime)");
    }
    for i in &free {
        line(&mut out, depth, &format!("for (int32_t {i} = 0; {i} < {}; {i}++) {{", bound(i)));
        depth += 1;
    }
    if reds.is_empty() {
        line(&mut out, depth, &store(plan, &target, &product));
    } else {
        let acc = format!("t{}{}_val", reds.concat(), t.name);
        line(&mut out, depth, &format!("double {acc} = 0.0;"));
        let outer = depth;
        for r in &reds {
            line(&mut out, depth, &format!("for (int32_t {r} = 0; {r} < {}; {r}++) {{", bound(r)));
            depth += 1;
        }
        line(&mut out, depth, &format!("{acc} += {product};"));
        while depth > outer {
            depth -= 1;
            line(&mut out, depth, "}");
        }
        line(&mut out, depth, &store(plan, &target, &acc));
    }
    while depth > 1 {
        depth -= 1;
        line(&mut out, depth, "}");
    }
    out.push_str("  return 0;\n}\n");
    out
}

/// Forward declarations followed by the assemble and compute kernels.
pub fn gen_kernels(plan: &KernelPlan, parallel: bool) -> String {
    let compute = match plan.strategy {
        Strategy::CsrSpmv => gen_compute_csr(plan, parallel),
        Strategy::AllDense => gen_compute_dense(plan, parallel),
    };
    format!(
        "{};\n{};\n\n{}\n{}",
        signature(plan, &plan.compute_name(), false),
        signature(plan, &plan.assemble_name(), false),
        gen_assemble(plan),
        compute
    )
}

/// The regenerated function: convert, assemble, compute, convert the target
/// back, clean up.
pub fn gen_wrapper(decl: &Declarator, plan: &KernelPlan) -> String {
    let mut out = format!("{} {{\n", get_decl_text(decl));
    let mut args = Vec::new();
    for t in &plan.tensors {
        let n = &t.name;
        match &t.passing {
            Passing::Direct => args.push(n.clone()),
            Passing::Pointer(s) => {
                let _ = writeln!(out, "  taco_tensor_t * __taco_{n} = {n}->{s}2taco({n});");
                args.push(format!("__taco_{n}"));
            }
            Passing::Reference(s) => {
                let _ = writeln!(out, "  taco_tensor_t * __taco_{n} = {n}.{s}2taco(&{n});");
                args.push(format!("__taco_{n}"));
            }
        }
    }
    let args = args.join(", ");
    let _ = writeln!(out, "  {}({});", plan.assemble_name(), args);
    let _ = writeln!(out, "  {}({});", plan.compute_name(), args);
    let target = &plan.tensors[0];
    let y = &target.name;
    match &target.passing {
        Passing::Direct => {}
        Passing::Pointer(s) => {
            let _ = writeln!(out, "  {y}->taco2{s}(__taco_{y}, {y});");
        }
        Passing::Reference(s) => {
            let _ = writeln!(out, "  {y}.taco2{s}(__taco_{y}, &{y});");
        }
    }
    for t in plan.tensors.iter().filter(|t| t.passing != Passing::Direct) {
        let _ = writeln!(out, "  __taco_cleanup_taco(__taco_{});", t.name);
    }
    out.push_str("}\n");
    out
}
