#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use synstitch_core::{rewrite_unit, HandlerRegistry, RewriteOptions};
use synstitch_quantum::QuantumHandler;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn registry() -> HandlerRegistry {
    let mut reg = HandlerRegistry::new();
    reg.register(QuantumHandler::new()).unwrap();
    reg
}

pub fn rewrite(src: &str) -> String {
    let r = rewrite_unit(src, "test.cpp", &registry(), &RewriteOptions::default());
    assert!(r.diagnostics.is_empty(), "{:?}", r.diagnostics);
    r.output.unwrap()
}

pub fn cxx() -> Option<String> {
    let candidates = std::env::var("CXX").into_iter().chain(["c++", "g++", "clang++"].map(String::from));
    candidates.into_iter().find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
}

/// Compiles `source` against the fixture runtime and returns its standard output.
pub fn compile_and_run(cxx: &str, source: &str) -> String {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.cpp");
    let exe = dir.path().join("main");
    std::fs::write(&src, source).unwrap();
    let out = Command::new(cxx)
        .args(["-std=c++17", "-O1", "-Wall", "-Wno-unused-variable", "-I"])
        .arg(fixtures())
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
