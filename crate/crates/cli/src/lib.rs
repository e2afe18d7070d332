//! Command-line driver for the synstitch rewriter.
//!
//! Exit status: 0 on success, 1 when any input produced an error
//! diagnostic or could not be read or written, 2 on usage errors.

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::Parser;
use synstitch_core::external::ExternalHandler;
use synstitch_core::{rewrite_unit, Diagnostic, HandlerArgs, HandlerRegistry, RewriteOptions};
use synstitch_quantum::QuantumHandler;
use synstitch_taco::TacoHandler;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERRORS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Name used for diagnostics when reading standard input.
pub const STDIN_NAME: &str = "<stdin>";

#[derive(Debug, Parser)]
#[command(name = "synstitch", version, about = "Rewrite [[clang::syntax(NAME)]] functions in C++ sources")]
pub struct Cli {
    /// Input files; `-` reads standard input.
    #[arg(required_unless_present = "list_handlers")]
    pub inputs: Vec<String>,

    /// Output file (single input only). Defaults to standard output; with
    /// several inputs each result goes to `<stem>.synstitch.cpp` beside it.
    #[arg(short, long)]
    pub output: Option<PathBuf>,

    /// List registered syntax handlers and exit.
    #[arg(long)]
    pub list_handlers: bool,

    /// Keep a renamed, unreachable copy of each original declaration.
    #[arg(long)]
    pub emit_compat_stub: bool,

    /// Emit `#line` directives mapping output back to the input.
    #[arg(long)]
    pub line_directives: bool,

    /// Object-like macro visible to handler bodies (`NAME` means `NAME=1`).
    #[arg(long = "define", value_name = "NAME=VALUE")]
    pub defines: Vec<String>,

    /// Handler argument, conventionally `<handler>.<key>=VALUE`.
    #[arg(long = "handler-arg", value_name = "NAME=VALUE")]
    pub handler_args: Vec<String>,

    /// Parallelize the outer loop of generated tensor kernels with OpenMP.
    #[arg(long)]
    pub taco_parallel: bool,

    /// Shot count compiled into quantum kernels.
    #[arg(long, default_value_t = synstitch_quantum::DEFAULT_SHOTS, value_parser = clap::value_parser!(u32).range(1..))]
    pub shots: u32,

    /// Namespace of the quantum runtime API.
    #[arg(long, value_name = "NS", default_value = "qrt")]
    pub quantum_api: String,

    /// Register a subprocess handler: `NAME=COMMAND ARGS...`.
    #[arg(long = "external-handler", value_name = "NAME=CMD")]
    pub external_handlers: Vec<String>,
}

fn split_pair<'a>(flag: &str, text: &'a str) -> Result<(&'a str, &'a str), String> {
    match text.split_once('=') {
        Some((k, v)) if !k.is_empty() => Ok((k, v)),
        _ => Err(format!("{flag} expects NAME=VALUE, got `{text}`")),
    }
}

impl Cli {
    pub fn registry(&self) -> Result<HandlerRegistry, String> {
        let mut reg = HandlerRegistry::new();
        reg.register(TacoHandler::new().parallel(self.taco_parallel)).map_err(|e| e.to_string())?;
        reg.register(QuantumHandler::new().with_api(&self.quantum_api).with_shots(self.shots))
            .map_err(|e| e.to_string())?;
        for spec in &self.external_handlers {
            let (name, cmd) = split_pair("--external-handler", spec)?;
            let h =
                ExternalHandler::new(name, cmd).ok_or_else(|| format!("--external-handler `{name}` has no command"))?;
            reg.register(h).map_err(|e| e.to_string())?;
        }
        Ok(reg)
    }

    pub fn options(&self) -> Result<RewriteOptions, String> {
        let mut defines = Vec::new();
        for d in &self.defines {
            let (name, value) = d.split_once('=').unwrap_or((d.as_str(), "1"));
            if name.is_empty() {
                return Err(format!("--define expects NAME=VALUE, got `{d}`"));
            }
            defines.push((name.to_string(), value.to_string()));
        }
        let mut args = HandlerArgs::new();
        for a in &self.handler_args {
            let (k, v) = split_pair("--handler-arg", a)?;
            args.insert(k, v);
        }
        Ok(RewriteOptions {
            emit_compat_stub: self.emit_compat_stub,
            emit_line_directives: self.line_directives,
            defines,
            handler_args: args,
        })
    }

    fn check_outputs(&self) -> Result<(), String> {
        if self.inputs.len() > 1 {
            if self.output.is_some() {
                return Err("-o/--output needs exactly one input".into());
            }
            if self.inputs.iter().any(|i| i == "-") {
                return Err("standard input can only be used as the sole input".into());
            }
        }
        Ok(())
    }
}

/// The built-in handlers with default settings.
pub fn default_registry() -> HandlerRegistry {
    let mut reg = HandlerRegistry::new();
    reg.register(TacoHandler::new()).expect("fresh registry");
    reg.register(QuantumHandler::new()).expect("fresh registry");
    reg
}

/// Path written for `input` when several inputs are given.
pub fn derived_output(input: &Path) -> PathBuf {
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    input.with_file_name(format!("{stem}.synstitch.cpp"))
}

/// Writes via a temporary file in the target directory so a failed write
/// never leaves a truncated output behind.
fn write_atomic(path: &Path, text: &str) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

struct Outcome {
    name: String,
    diagnostics: Vec<Diagnostic>,
    /// Read or write failure, reported without a position.
    io_error: Option<String>,
    /// Rewritten text bound for standard output.
    text: Option<String>,
}

impl Outcome {
    fn failed(&self) -> bool {
        self.io_error.is_some() || synstitch_core::diag::has_errors(&self.diagnostics)
    }
}

fn process(
    name: &str,
    source: io::Result<String>,
    target: Option<&Path>,
    reg: &HandlerRegistry,
    opts: &RewriteOptions,
) -> Outcome {
    let mut out = Outcome { name: name.to_string(), diagnostics: Vec::new(), io_error: None, text: None };
    let text = match source {
        Ok(t) => t,
        Err(e) => {
            out.io_error = Some(format!("cannot read input: {e}"));
            return out;
        }
    };
    let r = rewrite_unit(&text, name, reg, opts);
    out.diagnostics = r.diagnostics;
    let Some(result) = r.output else { return out };
    match target {
        Some(path) => {
            if let Err(e) = write_atomic(path, &result) {
                out.io_error = Some(format!("cannot write {}: {e}", path.display()));
            }
        }
        None => out.text = Some(result),
    }
    out
}

/// Runs the tool with `args` (program name first).
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let setup = cli.check_outputs().and_then(|_| Ok((cli.registry()?, cli.options()?)));
    let (reg, opts) = match setup {
        Ok(s) => s,
        Err(msg) => {
            let _ = writeln!(stderr, "synstitch: error: {msg}");
            return EXIT_USAGE;
        }
    };

    if cli.list_handlers {
        let mut handlers: Vec<_> = reg.handlers().collect();
        handlers.sort_by(|a, b| a.name().cmp(b.name()));
        for h in handlers {
            let aliases = h.aliases();
            let alias = if aliases.is_empty() { String::new() } else { format!(" (aliases: {})", aliases.join(", ")) };
            let _ = writeln!(stdout, "{:<10} {}{}", h.name(), h.help(), alias);
        }
        return EXIT_OK;
    }

    let outcomes: Vec<Outcome> = if cli.inputs.len() == 1 {
        let input = &cli.inputs[0];
        let (name, source) = if input == "-" {
            let mut s = String::new();
            (STDIN_NAME.to_string(), stdin.read_to_string(&mut s).map(|_| s))
        } else {
            (input.clone(), std::fs::read_to_string(input))
        };
        vec![process(&name, source, cli.output.as_deref(), &reg, &opts)]
    } else {
        std::thread::scope(|scope| {
            let jobs: Vec<_> = cli
                .inputs
                .iter()
                .map(|input| {
                    let (reg, opts) = (&reg, &opts);
                    scope.spawn(move || {
                        let target = derived_output(Path::new(input));
                        process(input, std::fs::read_to_string(input), Some(&target), reg, opts)
                    })
                })
                .collect();
            jobs.into_iter().map(|j| j.join().expect("rewrite thread panicked")).collect()
        })
    };

    let mut code = EXIT_OK;
    for o in &outcomes {
        for d in &o.diagnostics {
            let _ = writeln!(stderr, "{}", d.render(&o.name));
        }
        if let Some(e) = &o.io_error {
            let _ = writeln!(stderr, "{}: error: {e}", o.name);
        }
        if o.failed() {
            code = EXIT_ERRORS;
        }
        if let Some(t) = &o.text {
            if stdout.write_all(t.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                let _ = writeln!(stderr, "synstitch: error: cannot write standard output");
                code = EXIT_ERRORS;
            }
        }
    }
    code
}
