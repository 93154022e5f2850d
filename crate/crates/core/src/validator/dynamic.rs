//! Compile a candidate with sanitizers, replay the exploit, then replay the
//! functional cases.

use std::io::{Read, Write};
use std::path::Path;
use std::process::{Command, ExitStatus, Stdio};
use std::sync::LazyLock;
use std::time::{Duration, Instant};

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::{Finding, Mode, ValidationResult, ValidationStatus};
use crate::corpus::GroundTruth;

pub const SKIPPED: &str = "dynamic validation skipped";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ToolchainConfig {
    pub c_compiler: String,
    pub cxx_compiler: String,
    /// Whitespace-separated; `{compiler}`, `{flags}`, `{out}` and `{src}`
    /// are substituted.
    pub command_template: String,
    pub flags: Vec<String>,
    pub link_flags: Vec<String>,
    pub timeout_secs: f64,
}

impl Default for ToolchainConfig {
    fn default() -> Self {
        ToolchainConfig {
            c_compiler: "cc".into(),
            cxx_compiler: "c++".into(),
            command_template: "{compiler} {flags} -o {out} {src}".into(),
            flags: ["-fsanitize=address,undefined", "-fno-sanitize-recover=all", "-fno-omit-frame-pointer", "-g", "-O0", "-w"]
                .map(String::from)
                .to_vec(),
            link_flags: Vec::new(),
            timeout_secs: 10.0,
        }
    }
}

impl ToolchainConfig {
    /// True if the C compiler can build an instrumented program.
    pub fn available(&self) -> bool {
        let Ok(dir) = tempfile::tempdir() else {
            return false;
        };
        let src = dir.path().join("probe.c");
        if std::fs::write(&src, "int main(void) { return 0; }\n").is_err() {
            return false;
        }
        self.compile(&src, &dir.path().join("probe"), "c").is_ok_and(|r| r.is_ok())
    }

    fn command(&self, src: &Path, out: &Path, ext: &str) -> Vec<String> {
        let compiler = if matches!(ext, "cpp" | "cc" | "cxx" | "C") { &self.cxx_compiler } else { &self.c_compiler };
        let mut argv = Vec::new();
        for part in self.command_template.split_whitespace() {
            match part {
                "{compiler}" => argv.push(compiler.clone()),
                "{flags}" => argv.extend(self.flags.iter().cloned()),
                "{out}" => argv.push(out.display().to_string()),
                "{src}" => argv.push(src.display().to_string()),
                other => argv.push(other.to_string()),
            }
        }
        argv.extend(self.link_flags.iter().cloned());
        argv
    }

    /// Outer error: the compiler could not be started. Inner error: the
    /// compiler rejected the program (stderr).
    fn compile(&self, src: &Path, out: &Path, ext: &str) -> std::io::Result<Result<(), String>> {
        let argv = self.command(src, out, ext);
        let output = Command::new(&argv[0]).args(&argv[1..]).stdin(Stdio::null()).output()?;
        if output.status.success() {
            Ok(Ok(()))
        } else {
            Ok(Err(String::from_utf8_lossy(&output.stderr).into_owned()))
        }
    }
}

#[derive(Debug)]
struct RunOutcome {
    status: Option<ExitStatus>,
    stdout: Vec<u8>,
    stderr: String,
    timed_out: bool,
}

fn run(exe: &Path, input: &[u8], timeout: Duration) -> std::io::Result<RunOutcome> {
    let mut child = Command::new(exe)
        .env("ASAN_OPTIONS", "detect_leaks=0:abort_on_error=0:exitcode=86")
        .env("UBSAN_OPTIONS", "print_stacktrace=0:halt_on_error=1:exitcode=86")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()?;
    let mut stdin = child.stdin.take();
    let input = input.to_vec();
    let writer = std::thread::spawn(move || {
        if let Some(s) = stdin.as_mut() {
            // the program may exit without reading everything
            let _ = s.write_all(&input);
        }
    });
    let mut out_pipe = child.stdout.take();
    let mut err_pipe = child.stderr.take();
    let out_reader = std::thread::spawn(move || {
        let mut buf = Vec::new();
        if let Some(p) = out_pipe.as_mut() {
            let _ = p.read_to_end(&mut buf);
        }
        buf
    });
    let err_reader = std::thread::spawn(move || {
        let mut buf = Vec::new();
        if let Some(p) = err_pipe.as_mut() {
            let _ = p.read_to_end(&mut buf);
        }
        buf
    });
    let start = Instant::now();
    let mut timed_out = false;
    let status = loop {
        if let Some(s) = child.try_wait()? {
            break Some(s);
        }
        if start.elapsed() >= timeout {
            let _ = child.kill();
            let _ = child.wait();
            timed_out = true;
            break None;
        }
        std::thread::sleep(Duration::from_millis(5));
    };
    let _ = writer.join();
    let stdout = out_reader.join().unwrap_or_default();
    let stderr = String::from_utf8_lossy(&err_reader.join().unwrap_or_default()).into_owned();
    Ok(RunOutcome { status, stdout, stderr, timed_out })
}

static FRAME_OBJECT: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"\[\d+, \d+\) '([A-Za-z_]\w*)'[^\n]*<== Memory access").expect("static regex"));
static GLOBAL_OBJECT: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"global variable '([A-Za-z_]\w*)'").expect("static regex"));

/// A memory-safety signal from one run: the sanitizer headline, or the
/// terminating signal.
fn memory_report(outcome: &RunOutcome) -> Option<(String, Option<String>)> {
    let headline = outcome
        .stderr
        .lines()
        .find(|l| l.contains("ERROR: AddressSanitizer") || l.contains("runtime error:") || l.starts_with("SUMMARY: UndefinedBehaviorSanitizer"))
        .map(|l| l.trim_start_matches('=').trim_start_matches(|c: char| c.is_ascii_digit()).trim_start_matches('=').trim().to_string());
    let object = FRAME_OBJECT
        .captures(&outcome.stderr)
        .or_else(|| GLOBAL_OBJECT.captures(&outcome.stderr))
        .map(|c| c[1].to_string());
    if let Some(h) = headline {
        return Some((h, object));
    }
    #[cfg(unix)]
    {
        use std::os::unix::process::ExitStatusExt;
        if let Some(sig) = outcome.status.and_then(|s| s.signal()) {
            return Some((format!("terminated by signal {sig}"), None));
        }
    }
    None
}

fn classify_report(symbol: &str, headline: String, object: Option<String>, what: &str) -> ValidationResult {
    match object {
        Some(obj) if obj != symbol => ValidationResult::new(
            ValidationStatus::NewVulnerability,
            Mode::Dynamic,
            vec![Finding::new("runtime.sanitizer", None, format!("{what}: {headline} (object `{obj}`)"))],
        ),
        _ => ValidationResult::new(
            ValidationStatus::StillVulnerable,
            Mode::Dynamic,
            vec![Finding::new("runtime.sanitizer", None, format!("{what}: {headline}"))],
        ),
    }
}

fn skipped(reason: impl std::fmt::Display) -> ValidationResult {
    ValidationResult::new(
        ValidationStatus::Inconclusive,
        Mode::Dynamic,
        vec![Finding::new("runtime.skipped", None, format!("{SKIPPED}: {reason}"))],
    )
}

pub fn dynamic_check(source: &str, extension: &str, truth: &GroundTruth, toolchain: &ToolchainConfig) -> ValidationResult {
    let Some(exploit) = truth.exploit_input.as_deref() else {
        return skipped("no exploit input annotated");
    };
    let dir = match tempfile::tempdir() {
        Ok(d) => d,
        Err(e) => return skipped(format!("temporary directory: {e}")),
    };
    let src = dir.path().join(format!("candidate.{extension}"));
    let exe = dir.path().join("candidate");
    if let Err(e) = std::fs::write(&src, source) {
        return skipped(format!("writing candidate: {e}"));
    }
    match toolchain.compile(&src, &exe, extension) {
        Err(e) => return skipped(format!("compiler unavailable ({e})")),
        Ok(Err(stderr)) => {
            let first = stderr.lines().find(|l| l.contains("error")).unwrap_or("compilation failed").to_string();
            return ValidationResult::new(
                ValidationStatus::NotCompilable,
                Mode::Dynamic,
                vec![Finding::new("runtime.compile", None, first)],
            );
        }
        Ok(Ok(())) => {}
    }
    let timeout = Duration::from_secs_f64(toolchain.timeout_secs.max(0.1));
    let symbol = truth.vulnerable_symbol.as_str();

    let outcome = match run(&exe, exploit, timeout) {
        Ok(o) => o,
        Err(e) => return skipped(format!("running candidate: {e}")),
    };
    if let Some((headline, object)) = memory_report(&outcome) {
        return classify_report(symbol, headline, object, "exploit input");
    }
    if outcome.timed_out {
        return ValidationResult::new(
            ValidationStatus::Inconclusive,
            Mode::Dynamic,
            vec![Finding::new("runtime.timeout", None, "exploit run timed out")],
        );
    }

    for (i, case) in truth.functional_cases.iter().enumerate() {
        let outcome = match run(&exe, &case.input, timeout) {
            Ok(o) => o,
            Err(e) => return skipped(format!("running candidate: {e}")),
        };
        if let Some((headline, object)) = memory_report(&outcome) {
            return classify_report(symbol, headline, object, &format!("functional case {i}"));
        }
        if outcome.timed_out || outcome.stdout != case.expected_output {
            let detail = if outcome.timed_out {
                "timed out".to_string()
            } else {
                format!(
                    "expected {:?}, got {:?}",
                    String::from_utf8_lossy(&case.expected_output),
                    String::from_utf8_lossy(&outcome.stdout)
                )
            };
            return ValidationResult::new(
                ValidationStatus::FunctionalityBroken,
                Mode::Dynamic,
                vec![Finding::new("runtime.functional-mismatch", None, format!("functional case {i}: {detail}"))],
            );
        }
    }
    ValidationResult::new(
        ValidationStatus::Repaired,
        Mode::Dynamic,
        vec![Finding::new(
            "runtime.clean",
            None,
            format!("exploit ran clean; {} functional case(s) matched", truth.functional_cases.len()),
        )],
    )
}
