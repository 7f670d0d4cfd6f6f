//! Command-line front end for `quiver-coho`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 resource limit.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use quiver_coho::combinat::{code_from_uset, enumerate_usets, AlmostPositiveRoot, Codes};
use quiver_coho::fan::{betti_u64, build_fan, verify_complete, verify_smooth};
use quiver_coho::frobenius::{frobenius_matrix, pairing};
use quiver_coho::mring::MRing;
use quiver_coho::parse::{element_to_json, parse_element};
use quiver_coho::verify::{run_suite, Caps, Overall, Suite, VerificationReport};
use quiver_coho::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "quiver-coho",
    version,
    about = "Cohomology rings of type A quiver toric varieties"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Codes,
    Usets,
    Roots,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    Json,
    #[default]
    Table,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum ElementFormat {
    #[default]
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List codes, U-sets or almost positive roots.
    Enumerate {
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Build the fan, optionally verify it and export it as JSON.
    Fan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Normal form of an expression, optionally paired with another.
    Multiply {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        pairing_with: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: ElementFormat,
    },
    /// Pairing matrices between complementary degrees, as JSON.
    Pairing {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        matrix: Option<usize>,
    },
    /// Run a verification suite and print a summary.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        normalize_timing: bool,
    },
    /// Run a suite and write its JSON report to a file.
    Report {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        normalize_timing: bool,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Core(Error),
    Io(std::io::Error),
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

type Outcome = Result<i32, Failure>;

fn check_n(n: usize) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    Ok(())
}

fn enumerate(out: &mut dyn Write, kind: Kind, n: usize, degree: Option<usize>, format: Format) -> Outcome {
    check_n(n)?;
    match kind {
        Kind::Codes => {
            let codes = Codes::new(n).filter(|c| degree.is_none_or(|k| c.degree() == k));
            match format {
                Format::Table => {
                    for c in codes {
                        writeln!(out, "{c}\t{}", c.degree())?;
                    }
                }
                Format::Json => {
                    let items: Vec<_> = codes
                        .map(|c| json!({"code": c.to_string(), "degree": c.degree()}))
                        .collect();
                    writeln!(out, "{}", serde_json::to_string(&items)?)?;
                }
            }
        }
        Kind::Usets => {
            let usets = enumerate_usets(n, degree);
            match format {
                Format::Table => {
                    for u in usets {
                        let code = code_from_uset(&u, n)?;
                        writeln!(out, "{}\t{u}\t{code}", u.len())?;
                    }
                }
                Format::Json => {
                    let items = usets
                        .map(|u| {
                            let code = code_from_uset(&u, n)?;
                            Ok(json!({"uset": u, "degree": u.len(), "code": code.to_string()}))
                        })
                        .collect::<Result<Vec<_>, Error>>()?;
                    writeln!(out, "{}", serde_json::to_string(&items)?)?;
                }
            }
        }
        Kind::Roots => {
            if degree.is_some() {
                return Err(Failure::Usage("--degree does not apply to roots".into()));
            }
            let roots = AlmostPositiveRoot::all(n);
            let vectors = roots.iter().map(|r| quiver_coho::fan::ray_vector(r, n));
            match format {
                Format::Table => {
                    for (r, v) in roots.iter().zip(vectors) {
                        let v: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                        writeln!(out, "{r}\t({})", v.join(", "))?;
                    }
                }
                Format::Json => {
                    let items: Vec<_> = roots
                        .iter()
                        .zip(vectors)
                        .map(|(r, v)| json!({"label": r.to_string(), "vector": v}))
                        .collect();
                    writeln!(out, "{}", serde_json::to_string(&items)?)?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn fan(out: &mut dyn Write, n: usize, verify: bool, export: Option<PathBuf>) -> Outcome {
    check_n(n)?;
    let f = build_fan(n)?;
    writeln!(out, "n = {n}")?;
    writeln!(out, "rays: {}", f.ray_count())?;
    writeln!(out, "maximal cones: {}", f.max_cones.len())?;
    writeln!(out, "cones by dimension: {:?}", f.cone_counts)?;
    writeln!(out, "betti numbers: {:?}", betti_u64(&f))?;
    if let Some(path) = export {
        std::fs::write(&path, serde_json::to_string_pretty(&f.to_json())? + "\n")?;
        writeln!(out, "exported to {}", path.display())?;
    }
    if verify {
        let smooth = verify_smooth(&f);
        let complete = verify_complete(&f);
        writeln!(out, "smooth: {}", if smooth.passed { "pass" } else { "fail" })?;
        writeln!(out, "complete: {}", if complete.passed { "pass" } else { "fail" })?;
        for v in smooth.violations.iter().chain(&complete.violations) {
            writeln!(out, "  {v}")?;
        }
        if !(smooth.passed && complete.passed) {
            return Err(Failure::Verification);
        }
    }
    Ok(EXIT_OK)
}

fn multiply(out: &mut dyn Write, n: usize, expr: &str, with: Option<&str>, format: ElementFormat) -> Outcome {
    check_n(n)?;
    let ring = MRing::new(n);
    let x = ring.normal_form(&parse_element(expr, n)?);
    match format {
        ElementFormat::Text => writeln!(out, "{x}")?,
        ElementFormat::Json => writeln!(out, "{}", serde_json::to_string(&element_to_json(&x))?)?,
    }
    if let Some(other) = with {
        let y = parse_element(other, n)?;
        writeln!(out, "pairing: {}", pairing(&ring, &x, &y)?)?;
    }
    Ok(EXIT_OK)
}

fn pairing_matrices(out: &mut dyn Write, n: usize, matrix: Option<usize>) -> Outcome {
    check_n(n)?;
    let ring = MRing::new(n);
    let degrees: Vec<usize> = match matrix {
        Some(k) if k > n => return Err(Failure::Usage(format!("--matrix {k} exceeds n = {n}"))),
        Some(k) => vec![k],
        None => (0..=n).collect(),
    };
    let mut items = Vec::new();
    for k in degrees {
        let m = frobenius_matrix(&ring, k)?;
        items.push(json!({
            "n": n,
            "k": k,
            "rows": m.rows,
            "cols": m.cols,
            "entries": m.entries_as_strings(),
            "det": m.det.to_string(),
            "unimodular": m.is_unimodular(),
        }));
    }
    let value = if matrix.is_some() {
        items.remove(0)
    } else {
        serde_json::Value::Array(items)
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
    Ok(EXIT_OK)
}

fn exit_for(report: &VerificationReport) -> i32 {
    match report.status {
        Overall::Pass => EXIT_OK,
        Overall::Fail => EXIT_FAILED,
        Overall::Partial => EXIT_LIMIT,
    }
}

fn summarize(out: &mut dyn Write, report: &VerificationReport) -> std::io::Result<()> {
    for c in &report.checks {
        let status = serde_json::to_value(c.status).expect("status serializes");
        let status = status.as_str().unwrap_or("?");
        writeln!(out, "[{status}] {}: {} ({} ms)", c.name, c.actual, c.elapsed_ms)?;
    }
    let overall = serde_json::to_value(report.status).expect("status serializes");
    writeln!(
        out,
        "{} n={}: {}",
        report.suite,
        report.n,
        overall.as_str().unwrap_or("?")
    )
}

fn verify(out: &mut dyn Write, n: usize, suite: Suite, as_json: bool, normalize: bool) -> Outcome {
    check_n(n)?;
    let mut report = run_suite(n, suite, Caps::from_env()?)?;
    if normalize {
        report.normalize_timing();
    }
    if as_json {
        writeln!(out, "{}", report.to_json())?;
    } else {
        summarize(out, &report)?;
    }
    Ok(exit_for(&report))
}

fn report(out: &mut dyn Write, n: usize, path: PathBuf, suite: Suite, normalize: bool) -> Outcome {
    check_n(n)?;
    let mut report = run_suite(n, suite, Caps::from_env()?)?;
    if normalize {
        report.normalize_timing();
    }
    std::fs::write(&path, report.to_json() + "\n")?;
    summarize(out, &report)?;
    writeln!(out, "report written to {}", path.display())?;
    Ok(exit_for(&report))
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Enumerate {
            kind,
            n,
            degree,
            format,
        } => enumerate(out, kind, n, degree, format),
        Command::Fan { n, verify, export } => fan(out, n, verify, export),
        Command::Multiply {
            n,
            expr,
            pairing_with,
            format,
        } => multiply(out, n, &expr, pairing_with.as_deref(), format),
        Command::Pairing { n, matrix } => pairing_matrices(out, n, matrix),
        Command::Verify {
            n,
            suite,
            json,
            normalize_timing,
        } => verify(out, n, suite, json, normalize_timing),
        Command::Report {
            n,
            out: path,
            suite,
            normalize_timing,
        } => report(out, n, path, suite, normalize_timing),
    }
}

/// Run with explicit output streams; returns the process exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(Failure::Verification) => EXIT_FAILED,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
        Err(Failure::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::ResourceLimit(_) => EXIT_LIMIT,
                _ => EXIT_USAGE,
            }
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("quiver-coho").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn multiply_prints_normal_form() {
        let (code, out, _) = call(&["multiply", "--n", "3", "--expr", "S(1,3)*S(2,3)"]);
        assert_eq!(code, 0);
        assert_eq!(out, "S(2)*S(3) + S(1,2)*S(2,3)\n");
        let (code, out, _) = call(&["multiply", "--n", "2", "--expr", "S(1)", "--pairing-with", "S(2)"]);
        assert_eq!(code, 0);
        assert_eq!(out, "S(1)\npairing: 1\n");
    }

    #[test]
    fn usage_errors() {
        let (code, _, err) = call(&["multiply", "--n", "3", "--expr", "S(2,2)"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("write S(2)"), "{err}");
        assert_eq!(call(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(call(&["verify", "--n", "2", "--suite", "nope"]).0, EXIT_USAGE);
        assert_eq!(call(&["enumerate", "roots", "--n", "2", "--degree", "1"]).0, EXIT_USAGE);
        assert_eq!(call(&["enumerate", "codes", "--n", "0"]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn limits() {
        assert_eq!(call(&["fan", "--n", "11"]).0, EXIT_LIMIT);
        assert_eq!(call(&["verify", "--n", "9", "--suite", "frobenius"]).0, EXIT_LIMIT);
    }
}
