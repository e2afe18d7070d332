#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use synstitch_core::{rewrite_unit, HandlerRegistry, RewriteOptions};
use synstitch_taco::TacoHandler;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn rewrite(src: &str) -> String {
    let mut reg = HandlerRegistry::new();
    reg.register(TacoHandler::new()).unwrap();
    let r = rewrite_unit(src, "test.cpp", &reg, &RewriteOptions::default());
    assert!(r.diagnostics.is_empty(), "{:?}", r.diagnostics);
    r.output.unwrap()
}

/// A C++ compiler, or `None` when the machine has none.
pub fn cxx() -> Option<String> {
    let candidates = std::env::var("CXX").into_iter().chain(["c++", "g++", "clang++"].map(String::from));
    candidates.into_iter().find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
}

/// Compiles `source` with the fixture include path and returns the program's
/// standard output. Panics with the compiler output on failure.
pub fn compile_and_run(cxx: &str, source: &str, extra: &[&str]) -> String {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.cpp");
    let exe = dir.path().join("main");
    std::fs::write(&src, source).unwrap();
    let out = Command::new(cxx)
        .args(["-std=c++17", "-O1", "-Wall", "-Wno-unused-variable", "-Wno-unused-but-set-variable", "-I"])
        .arg(fixtures())
        .args(extra)
        .arg(&src)
        .arg("-o")
        .arg(&exe)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "compile failed:\n{}\n--- source ---\n{}",
        String::from_utf8_lossy(&out.stderr),
        source
    );
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "program failed: {}", String::from_utf8_lossy(&run.stderr));
    String::from_utf8(run.stdout).unwrap()
}

/// Parses lines of whitespace-separated floats.
pub fn parse_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect()).collect()
}

pub fn c_array(name: &str, vals: &[f64]) -> String {
    let body: Vec<String> = vals.iter().map(|v| format!("{v:?}")).collect();
    format!("double {name}[] = {{{}}};", if body.is_empty() { "0".to_string() } else { body.join(", ") })
}

pub fn c_int_array(name: &str, vals: &[usize]) -> String {
    let body: Vec<String> = vals.iter().map(|v| v.to_string()).collect();
    format!("int32_t {name}[] = {{{}}};", if body.is_empty() { "0".to_string() } else { body.join(", ") })
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * b.abs().max(1.0)
}
