//! `augsimp`: batch front-end for augsimp-core.
//!
//! Every verb prints one JSON document on stdout. Errors go to stderr as
//! `{"error": {...}}`. Exit status is 0 on success, 1 on analysis-level
//! failures and 2 on malformed input.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use augsimp_core::analysis::{cyclic_submodule_falsifier, incidence_matrix, simplicity_report, AnalysisError};
use augsimp_core::construct::{
    assemble_monoid, build_family, build_r3, build_r4, enumerate_admissible_partitions, stirling2, ConstructError,
    FamilyVariant, ImageSystem, R4Example, ReesMonoid, SetPartition,
};
use augsimp_core::corpus::DEFAULT_SEED;
use augsimp_core::format::{parse_input, render_system_file, FormatError, InputFile};
use augsimp_core::monoid::{generate_closure, MonoidError};
use augsimp_core::rank2::{rank2_verdict, Rank2Error};
use augsimp_core::selfcheck;
use augsimp_core::{FiniteMonoid, SimplicityReport};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const DEFAULT_CAP: u64 = 1_000_000;
const CAP_VAR: &str = "AUGSIMP_CAP";

#[derive(Debug, Parser)]
#[command(name = "augsimp", version, about = "Simplicity of augmentation submodules of transformation monoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Five-condition simplicity report for a generator or system file.
    Analyze {
        file: PathBuf,
        /// Materialize a system file's monoid and analyze it explicitly.
        #[arg(long)]
        enumerate: bool,
        /// Write the incidence matrix of ℰ in the matrix dump format.
        #[arg(long, value_name = "PATH")]
        dump: Option<PathBuf>,
    },
    /// Sandwich-matrix criterion for a rank-2 0-minimal J-class.
    Rank2 {
        file: PathBuf,
        /// Write P′ in the matrix dump format.
        #[arg(long, value_name = "PATH")]
        dump: Option<PathBuf>,
    },
    /// Build one of the explicit families and analyze it.
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        /// Rank of the general family (r ≥ 5).
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, value_enum, default_value = "bprime")]
        variant: Variant,
        /// Comma-separated r = 3 item numbers, e.g. 1,2,3.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        selection: Vec<usize>,
        #[arg(long, value_enum, default_value = "simple")]
        example: Example,
        /// Analyze the materialized monoid instead of the symbolic data.
        #[arg(long)]
        enumerate: bool,
        /// Write the system file here instead of embedding it in the output.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[arg(long)]
        no_analysis: bool,
    },
    /// Independent oracles.
    Oracle {
        #[command(subcommand)]
        oracle: Oracle,
    },
    /// Run the acceptance checks and print one PASS/FAIL line per criterion.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Subcommand)]
enum Oracle {
    /// Search for a proper cyclic submodule of the augmentation module.
    Falsify {
        file: PathBuf,
        #[arg(long, default_value_t = selfcheck::FALSIFIER_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Enumerate every kernel partition compatible with a file's image sets.
    Enumerate { file: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    R3,
    R4,
    General,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Variant {
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "Bprime", alias = "bprime")]
    Bprime,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Example {
    Simple,
    Nonsimple,
}

/// A failure with its exit status.
#[derive(Debug)]
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
    extra: Value,
}

impl Failure {
    fn malformed(kind: &'static str, message: impl Into<String>) -> Self {
        Self { code: 2, kind, message: message.into(), extra: Value::Null }
    }

    fn analysis(kind: &'static str, message: impl Into<String>) -> Self {
        Self { code: 1, kind, message: message.into(), extra: Value::Null }
    }

    fn to_json(&self) -> Value {
        let mut body = json!({"kind": self.kind, "message": self.message});
        if let Value::Object(extra) = &self.extra {
            body.as_object_mut().expect("object").extend(extra.clone());
        }
        json!({ "error": body })
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Self {
            code: 2,
            kind: "malformed-input",
            message: e.message.clone(),
            extra: json!({"line": e.line, "column": e.column}),
        }
    }
}

impl From<MonoidError> for Failure {
    fn from(e: MonoidError) -> Self {
        match e {
            MonoidError::SizeOverflow { .. } => Self::analysis("cap-exceeded", e.to_string()),
            MonoidError::DegreeMismatch { .. } | MonoidError::ZeroDegree => Self::malformed("malformed-input", e.to_string()),
            _ => Self::analysis("monoid", e.to_string()),
        }
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        let kind = match e {
            AnalysisError::GroupInput => "group-input",
            _ => "hypothesis-violation",
        };
        Self::analysis(kind, e.to_string())
    }
}

impl From<Rank2Error> for Failure {
    fn from(e: Rank2Error) -> Self {
        let kind = match e {
            Rank2Error::GroupInput => "group-input",
            _ => "hypothesis-violation",
        };
        Self::analysis(kind, e.to_string())
    }
}

impl From<ConstructError> for Failure {
    fn from(e: ConstructError) -> Self {
        let kind = match e {
            ConstructError::CapExceeded { .. } => "cap-exceeded",
            ConstructError::InvalidPartition { .. }
            | ConstructError::InvalidImageSystem { .. }
            | ConstructError::BlockCount { .. }
            | ConstructError::InvalidSelection { .. }
            | ConstructError::RankTooSmall { .. }
            | ConstructError::DimensionMismatch { .. }
            | ConstructError::IndexOutOfRange { .. } => {
                return Self::malformed("invalid-parameters", e.to_string());
            }
            _ => "hypothesis-violation",
        };
        Self::analysis(kind, e.to_string())
    }
}

fn enumeration_cap() -> Result<u64, Failure> {
    match std::env::var(CAP_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::malformed("invalid-environment", format!("{CAP_VAR}={v:?} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn read_input(path: &Path) -> Result<InputFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::malformed("unreadable-input", format!("{}: {e}", path.display())))?;
    Ok(parse_input(&text)?)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::analysis("io", format!("{}: {e}", path.display())))
}

/// The explicit monoid behind either kind of input file.
fn materialize(input: InputFile, cap: u64) -> Result<FiniteMonoid, Failure> {
    match input {
        InputFile::Generators(g) => Ok(generate_closure(g.n, &g.generators, usize::try_from(cap).unwrap_or(usize::MAX))?),
        InputFile::System(s) => {
            let assembled = assemble_monoid(&s.partitions, &s.images, true, cap)?;
            Ok(assembled.monoid().expect("enumerated").clone())
        }
    }
}

/// Report for kernel/image data, symbolic unless `enumerate` is set.
fn system_report(parts: &[SetPartition], images: &ImageSystem, enumerate: bool, cap: u64) -> Result<SimplicityReport, Failure> {
    if enumerate {
        let assembled = assemble_monoid(parts, images, true, cap)?;
        Ok(simplicity_report(assembled.monoid().expect("enumerated"))?)
    } else {
        Ok(ReesMonoid::new(parts.to_vec(), images.clone())?.report())
    }
}

fn dump_incidence(report: &SimplicityReport, path: &Path) -> Result<(), Failure> {
    let system = report
        .system
        .as_ref()
        .ok_or_else(|| Failure::analysis("hypothesis-violation", "no set system: the 0-minimal J-class was not found"))?;
    write_file(path, &incidence_matrix(system).dump())
}

fn analyze(file: &Path, enumerate: bool, dump: Option<&Path>) -> Result<Value, Failure> {
    let cap = enumeration_cap()?;
    let (kind, report) = match read_input(file)? {
        InputFile::Generators(g) => {
            let m = generate_closure(g.n, &g.generators, usize::try_from(cap).unwrap_or(usize::MAX))?;
            ("generators", simplicity_report(&m)?)
        }
        InputFile::System(s) => ("system", system_report(&s.partitions, &s.images, enumerate, cap)?),
    };
    if let Some(path) = dump {
        dump_incidence(&report, path)?;
    }
    Ok(json!({"command": "analyze", "input": kind, "report": report.to_json()}))
}

fn rank2(file: &Path, dump: Option<&Path>) -> Result<Value, Failure> {
    let m = materialize(read_input(file)?, enumeration_cap()?)?;
    let outcome = rank2_verdict(&m)?;
    if let Some(path) = dump {
        write_file(path, &outcome.pprime.dump())?;
    }
    let mut out = outcome.to_json();
    out["command"] = json!("rank2");
    Ok(out)
}

struct ConstructArgs {
    family: Family,
    r: Option<usize>,
    variant: Variant,
    selection: Vec<usize>,
    example: Example,
    enumerate: bool,
    out: Option<PathBuf>,
    no_analysis: bool,
}

fn construct(a: ConstructArgs) -> Result<Value, Failure> {
    let cap = enumeration_cap()?;
    let (parts, images, params) = match a.family {
        Family::R3 => {
            let (p, i) = build_r3(&a.selection)?;
            (p, i, json!({"family": "r3", "selection": a.selection}))
        }
        Family::R4 => {
            let (ex, name) = match a.example {
                Example::Simple => (R4Example::Simple, "simple"),
                Example::Nonsimple => (R4Example::NonSimple, "nonsimple"),
            };
            let (p, i) = build_r4(ex);
            (p, i, json!({"family": "r4", "example": name}))
        }
        Family::General => {
            let r = a.r.ok_or_else(|| Failure::malformed("invalid-parameters", "--family general needs --r"))?;
            let (variant, name) = match a.variant {
                Variant::B => (FamilyVariant::B, "B"),
                Variant::Bprime => (FamilyVariant::Bprime, "Bprime"),
            };
            let b = build_family(r, variant)?;
            let star = b.star.as_ref().map(|s| s.name());
            (b.partitions, b.images, json!({"family": "general", "r": r, "variant": name, "star_assignment": star}))
        }
    };
    let text = render_system_file(&parts, &images);
    let mut out = json!({
        "command": "construct",
        "parameters": params,
        "n": images.degree(),
        "r": images.rank(),
        "partition_count": parts.len(),
        "image_count": images.len(),
    });
    match &a.out {
        Some(path) => {
            write_file(path, &text)?;
            out["system_file"] = json!(path.display().to_string());
        }
        None => out["system"] = json!(text),
    }
    if !a.no_analysis {
        out["analysis"] = system_report(&parts, &images, a.enumerate, cap)?.to_json();
    }
    Ok(out)
}

fn falsify(file: &Path, trials: usize, seed: u64) -> Result<Value, Failure> {
    let m = materialize(read_input(file)?, enumeration_cap()?)?;
    if m.is_group() {
        return Err(AnalysisError::GroupInput.into());
    }
    let witness = cyclic_submodule_falsifier(&m, trials, seed);
    Ok(json!({
        "command": "oracle-falsify",
        "trials": trials,
        "seed": seed,
        "monoid_size": m.len(),
        "found": witness.is_some(),
        "witness": witness,
    }))
}

fn enumerate(file: &Path) -> Result<Value, Failure> {
    let InputFile::System(s) = read_input(file)? else {
        return Err(Failure::malformed("malformed-input", "oracle enumerate needs a system file"));
    };
    let admissible = enumerate_admissible_partitions(&s.images)?;
    let missing: Vec<&SetPartition> = s.partitions.iter().filter(|p| admissible.binary_search(p).is_err()).collect();
    Ok(json!({
        "command": "oracle-enumerate",
        "n": s.images.degree(),
        "r": s.images.rank(),
        "candidates": stirling2(s.images.degree(), s.images.rank()).to_string(),
        "admissible_count": admissible.len(),
        "admissible": admissible,
        "file_partitions_admissible": missing.is_empty(),
        "file_partitions_missing": missing,
    }))
}

fn selftest(seed: u64, as_json: bool) -> (Value, bool, Vec<String>) {
    let outcomes = selfcheck::run_all(seed);
    let passed = outcomes.iter().all(|o| o.passed);
    let lines = outcomes.iter().map(|o| o.line()).collect();
    let doc = if as_json {
        json!({"command": "selftest", "seed": seed, "passed": passed, "criteria": outcomes})
    } else {
        Value::Null
    };
    (doc, passed, lines)
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn print(doc: &Value) {
    emit(&serde_json::to_string_pretty(doc).expect("serializable"));
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let doc = match cli.command {
        Command::Analyze { file, enumerate, dump } => analyze(&file, enumerate, dump.as_deref())?,
        Command::Rank2 { file, dump } => rank2(&file, dump.as_deref())?,
        Command::Construct { family, r, variant, selection, example, enumerate, out, no_analysis } => {
            construct(ConstructArgs { family, r, variant, selection, example, enumerate, out, no_analysis })?
        }
        Command::Oracle { oracle: Oracle::Falsify { file, trials, seed } } => falsify(&file, trials, seed)?,
        Command::Oracle { oracle: Oracle::Enumerate { file } } => enumerate(&file)?,
        Command::Selftest { seed, json } => {
            let (doc, passed, lines) = selftest(seed, json);
            if json {
                print(&doc);
            } else {
                lines.iter().for_each(|l| emit(l));
            }
            return Ok(if passed { 0 } else { 1 });
        }
    };
    print(&doc);
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let f = Failure::malformed("usage", e.render().to_string().trim().to_string());
            eprintln!("{}", f.to_json());
            return ExitCode::from(f.code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_errors_carry_positions() {
        let f: Failure = FormatError { line: 4, column: 7, message: "bad".into() }.into();
        assert_eq!(f.code, 2);
        let v = f.to_json();
        assert_eq!((v["error"]["line"].clone(), v["error"]["column"].clone()), (json!(4), json!(7)));
    }

    #[test]
    fn exit_codes_by_error_class() {
        assert_eq!(Failure::from(AnalysisError::GroupInput).code, 1);
        assert_eq!(Failure::from(Rank2Error::RankNotTwo { rank: 3 }).code, 1);
        assert_eq!(Failure::from(MonoidError::SizeOverflow { partial: 5, cap: 4 }).kind, "cap-exceeded");
        assert_eq!(Failure::from(ConstructError::RankTooSmall { r: 2 }).code, 2);
        assert_eq!(Failure::from(ConstructError::CapExceeded { needed: 9, cap: 1 }).code, 1);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
