use std::path::Path;
use std::process::{Command, Stdio};

use std::io::Write;

const TACO: &str = r#"[[clang::syntax(taco)]]
void mv(vector *y, csr *A, vector *x, std::string format = "-f=A:ds -f=x:d -f=y:d") {
  y(i) = A(i,j) * x(j)
}
"#;

const QUANTUM: &str = "__qpu__ void k(qreg q, double t) {\n  H(q[0]);\n  Rz(q[0], t);\n}\n";

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str], stdin: &str) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("synstitch").chain(args.iter().copied());
    let code = synstitch::run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn untagged_file_to_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("file.cpp");
    let output = dir.path().join("out.cpp");
    let text = "int main() { return \"{\"[0] == '{' ? 0 : 1; }\n";
    std::fs::write(&input, text).unwrap();
    let r = run(&[path(&input), "-o", path(&output)], "");
    assert_eq!((r.code, r.stdout.as_str(), r.stderr.as_str()), (0, "", ""));
    assert_eq!(std::fs::read_to_string(&output).unwrap(), text);
}

#[test]
fn list_handlers() {
    let r = run(&["--list-handlers"], "");
    assert_eq!(r.code, 0);
    let names: Vec<&str> = r.stdout.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(names, ["quantum", "taco"]);
    assert!(r.stdout.contains("__qpu__"));
}

#[test]
fn stdin_to_stdout() {
    let r = run(&["-"], QUANTUM);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("#include <memory>\n#include <qrt.h>\n"));
    assert!(r.stdout.contains("class k : public qrt::QuantumKernel<class k, qreg, double>"));
}

#[test]
fn unknown_syntax_name_exits_one_with_position() {
    let r = run(&["-"], "int a;\n\n   [[clang::syntax(nope)]] void f() { }\n");
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout, "");
    assert_eq!(r.stderr, "<stdin>:3:4: error: no handler registered for syntax `nope`\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&[], "").code, 2);
    assert_eq!(run(&["--no-such-flag", "a.cpp"], "").code, 2);
    assert_eq!(run(&["a.cpp", "b.cpp", "-o", "c.cpp"], "").code, 2);
    assert_eq!(run(&["--shots", "0", "a.cpp"], "").code, 2);
    assert_eq!(run(&["--handler-arg", "novalue", "a.cpp"], "").code, 2);
    assert_eq!(run(&["--external-handler", "taco=cat", "a.cpp"], "").code, 2);
    assert_eq!(run(&["-", "a.cpp"], "").code, 2);
    let help = run(&["--help"], "");
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("--taco-parallel"));
}

#[test]
fn unreadable_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.cpp");
    let r = run(&[path(&missing)], "");
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("cannot read input"), "{}", r.stderr);
}

#[test]
fn failed_rewrite_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.cpp");
    let output = dir.path().join("out.cpp");
    std::fs::write(&input, "[[clang::syntax(quantum)]] void k(qreg q) { CX(q[0]); }\n").unwrap();
    let r = run(&[path(&input), "-o", path(&output)], "");
    assert_eq!(r.code, 1);
    assert!(!output.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn unwritable_output_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.cpp");
    std::fs::write(&input, "int a;\n").unwrap();
    let output = dir.path().join("no/such/dir/out.cpp");
    let r = run(&[path(&input), "-o", path(&output)], "");
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("cannot write"), "{}", r.stderr);
}

#[test]
fn several_inputs_get_derived_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let names = ["a.cpp", "b.cc", "c.cpp", "d.cpp"];
    for (i, n) in names.iter().enumerate() {
        let text = match i {
            0 => TACO.to_string(),
            1 => QUANTUM.to_string(),
            2 => "int plain;\n".to_string(),
            _ => "[[clang::syntax(taco)]] void bad(vector *y, std::string f = \"-f=y:d\") {\n  y(i) = B(i)\n}\n"
                .to_string(),
        };
        std::fs::write(dir.path().join(n), text).unwrap();
    }
    let inputs: Vec<String> = names.iter().map(|n| dir.path().join(n).to_string_lossy().into_owned()).collect();
    let args: Vec<&str> = inputs.iter().map(String::as_str).collect();
    let r = run(&args, "");
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout, "");
    assert_eq!(r.stderr.lines().count(), 1, "{}", r.stderr);
    assert!(r.stderr.starts_with(&format!("{}:2:10: error:", inputs[3])), "{}", r.stderr);
    assert!(std::fs::read_to_string(dir.path().join("a.synstitch.cpp")).unwrap().contains("__taco_comput_1"));
    assert!(std::fs::read_to_string(dir.path().join("b.synstitch.cpp")).unwrap().contains("class k"));
    assert_eq!(std::fs::read_to_string(dir.path().join("c.synstitch.cpp")).unwrap(), "int plain;\n");
    assert!(!dir.path().join("d.synstitch.cpp").exists());
}

#[test]
fn flags_reach_handlers() {
    let r = run(&["--taco-parallel", "--shots", "99", "--quantum-api", "xacc", "-"], &format!("{TACO}{QUANTUM}"));
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("#pragma omp parallel for"));
    assert!(r.stdout.contains("#define SYNSTITCH_QRT_SHOTS 99\n"));
    assert!(r.stdout.contains("xacc::getIRProvider()"));
    let taco = r.stdout.find("#include <taco_runtime.h>").unwrap();
    let qrt = r.stdout.find("#include <qrt.h>").unwrap();
    assert!(taco < qrt);

    let r = run(&["--handler-arg", "quantum.accelerator=ibm:ibmq_viqo", "-"], QUANTUM);
    assert!(r.stdout.contains("#define SYNSTITCH_QRT_ACCELERATOR \"ibm:ibmq_viqo\"\n"));
}

#[test]
fn defines_are_expanded_in_bodies() {
    let src = "[[clang::syntax(quantum)]] void k(qreg q) {\n  GATE(q[0]);\n}\n";
    let r = run(&["--define", "GATE=H", "-"], src);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("createInstruction(\"H\", {0})"));
}

#[test]
fn line_directives_and_compat_stub() {
    let r = run(&["--line-directives", "--emit-compat-stub", "-"], QUANTUM);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("#line 1 \"<synstitch-predefines>\"\n"));
    assert!(r.stdout.contains("#line 1 \"<stdin>\"\n"));
    assert!(r.stdout.contains("void __synstitch_1_k(qreg q, double t) { __builtin_unreachable(); }"));
}

#[cfg(unix)]
#[test]
fn external_handler() {
    use std::os::unix::fs::PermissionsExt;
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("handler.sh");
    std::fs::write(
        &script,
        "#!/bin/sh\nif grep -q '\"predefines\"'; then echo '#include <ext.h>'; else echo 'void k(){}'; fi\n",
    )
    .unwrap();
    std::fs::set_permissions(&script, std::fs::Permissions::from_mode(0o755)).unwrap();
    let spec = format!("echo={}", path(&script));
    let r = run(&["--external-handler", &spec, "-"], "[[clang::syntax(echo)]] void k() { anything }\n");
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "#include <ext.h>\nvoid k(){}\n\n");
}

#[test]
fn output_is_deterministic() {
    let src = format!("{TACO}{QUANTUM}{TACO}").replacen("void mv(", "void mv2(", 1);
    let a = run(&["-"], &src);
    let b = run(&["-"], &src);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn binary_reports_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_synstitch");
    let mut child =
        Command::new(exe).arg("-").stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(b"[[clang::syntax(nope)]] void f() {}\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&out.stderr), "<stdin>:1:1: error: no handler registered for syntax `nope`\n");
    let out = Command::new(exe).arg("--list-handlers").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(exe).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
