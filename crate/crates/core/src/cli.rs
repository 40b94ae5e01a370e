//! Command-line front end. `main.rs` only forwards `std::env::args` here,
//! so every subcommand is testable in-process.

use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::criterion::{
    check_criterion, enumerate_valid_q_bounded, member_full, member_mq, MsClass, QSet, DEFAULT_ENUMERATION_BOUND,
};
use crate::error::{Error, Result};
use crate::exactmat::ExactMatrix;
use crate::field::FieldSpec;
use crate::jordan::{jordan_chevalley, jordan_partition, nilpotency_index};
use crate::oracle::{cross_validate, exhaustive_check, sampled_check, DEFAULT_BUDGET};
use crate::witness::{falsify, Witness};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(
    name = "nilspan",
    version,
    about = "Closure of nilpotent Jordan-type sets under commuting combinations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether M(Q) is closed for dimension n and a characteristic.
    Criterion(CriterionArgs),
    /// List every accepted Q for dimension n.
    Enumerate(EnumerateArgs),
    /// Jordan partition of a nilpotent matrix (or of each matrix in a witness file).
    Partition(InputArgs),
    /// Membership of a matrix in M(Q), or in the full class when --class is given.
    Member(MemberArgs),
    /// Build and verify a counterexample for a rejected Q.
    Witness(CriterionArgs),
    /// Run the exhaustive or sampled closure oracle.
    Verify(VerifyArgs),
    /// Jordan–Chevalley decomposition of a matrix.
    Decompose(InputArgs),
    /// Compare criterion, oracle and witnesses for every Q.
    CrossValidate(CrossArgs),
}

#[derive(Debug, Args)]
pub struct CriterionArgs {
    /// Matrix dimension.
    #[arg(long)]
    pub n: usize,
    /// Field characteristic: 0 or a prime.
    #[arg(long = "char", value_name = "CHAR")]
    pub char: u64,
    /// Allowed cell sizes, e.g. "2,3,5"; "-" for the empty set.
    #[arg(long, allow_hyphen_values = true)]
    pub q: String,
    /// Emit JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "char", value_name = "CHAR")]
    pub char: u64,
    /// Largest n to scan (the scan visits 2^(n-1) subsets).
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BOUND)]
    pub bound: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Matrix file (or witness file) in JSON.
    #[arg(long)]
    pub input: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct MemberArgs {
    #[arg(long)]
    pub input: String,
    #[arg(long, allow_hyphen_values = true)]
    pub q: String,
    /// Class of the semisimple part; checks the full product class.
    #[arg(long, value_enum)]
    pub class: Option<ClassArg>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ClassArg {
    Zero,
    Scalars,
    Semisimple,
    SemisimpleTraceless,
}

impl From<ClassArg> for MsClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Zero => MsClass::Zero,
            ClassArg::Scalars => MsClass::Scalars,
            ClassArg::Semisimple => MsClass::Semisimple,
            ClassArg::SemisimpleTraceless => MsClass::SemisimpleTraceless,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: ModeArg,
    #[arg(long)]
    pub n: usize,
    /// Field, e.g. "GF(3)", "GF(2^2)" or "Q" (sampled mode only).
    #[arg(long)]
    pub field: String,
    #[arg(long, allow_hyphen_values = true)]
    pub q: String,
    /// Largest centralizer enumeration allowed per Jordan type.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    /// Random pairs drawn in sampled mode.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CrossArgs {
    #[arg(long)]
    pub n: usize,
    /// A prime characteristic.
    #[arg(long = "char", value_name = "CHAR")]
    pub char: u64,
    /// Extension degrees to search exhaustively, e.g. "1,2".
    #[arg(long, default_value = "1")]
    pub degrees: String,
    /// Restrict to these sets (repeatable); all subsets by default.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    #[arg(long)]
    pub json: bool,
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Output {
        Output {
            status: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(cli),
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Output::ok(text),
                _ => Output {
                    status: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            }
        }
    }
}

pub fn dispatch(cli: Cli) -> Output {
    match execute(cli.command) {
        Ok(out) => out,
        Err(e) => {
            let status = match e {
                Error::BudgetExceeded { .. } => EXIT_BUDGET,
                _ => EXIT_DOMAIN,
            };
            Output {
                status,
                stdout: String::new(),
                stderr: format!("error: {}: {e}\n", e.name()),
            }
        }
    }
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

fn parse_list(text: &str, what: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad {what} '{t}'"))))
        .collect()
}

/// Labelled matrices from a matrix file or a witness file.
fn load(path: &str) -> Result<Vec<(String, ExactMatrix)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    if value.get("construction").is_some() {
        let w: Witness = serde_json::from_value(value).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        match &w.q {
            Some(q) => w.verify(q)?,
            None if jordan_partition(&w.combination())? != w.combo_partition => {
                return Err(Error::InternalInconsistency(format!(
                    "{path}: combo_partition does not match a*x + b*y"
                )));
            }
            None => {}
        }
        let combo = w.combination();
        Ok(vec![("x".into(), w.x), ("y".into(), w.y), ("a*x + b*y".into(), combo)])
    } else {
        Ok(vec![("matrix".into(), ExactMatrix::from_json(&text)?)])
    }
}

fn execute(command: Command) -> Result<Output> {
    match command {
        Command::Criterion(a) => {
            let q = QSet::parse(a.n, &a.q)?;
            let r = check_criterion(a.n, a.char, &q)?;
            Ok(Output::ok(if a.json { to_json(&r) } else { r.to_string() }))
        }
        Command::Enumerate(a) => {
            let sets = enumerate_valid_q_bounded(a.n, a.char, a.bound)?;
            if a.json {
                let lists: Vec<&[usize]> = sets.iter().map(QSet::elements).collect();
                return Ok(Output::ok(to_json(&json!({ "n": a.n, "char": a.char, "sets": lists }))));
            }
            let mut s = String::new();
            for q in &sets {
                writeln!(s, "{}", q.braces()).expect("write to string");
            }
            writeln!(s, "{} accepted sets for n = {}, char = {}", sets.len(), a.n, a.char).expect("write to string");
            Ok(Output::ok(s))
        }
        Command::Partition(a) => {
            let mats = load(&a.input)?;
            let mut records = Vec::new();
            let mut s = String::new();
            for (label, m) in &mats {
                let p = jordan_partition(m)?;
                if mats.len() == 1 {
                    writeln!(s, "{p}").expect("write to string");
                } else {
                    writeln!(s, "{label}: {p}").expect("write to string");
                }
                records.push(json!({
                    "label": label,
                    "partition": p,
                    "g_set": p.g_set(),
                    "nilpotency_index": nilpotency_index(m)?,
                }));
            }
            Ok(Output::ok(if a.json { to_json(&records) } else { s }))
        }
        Command::Member(a) => {
            let mats = load(&a.input)?;
            let mut records = Vec::new();
            let mut s = String::new();
            for (label, m) in &mats {
                let q = QSet::parse(m.n(), &a.q)?;
                let (member, class) = match a.class {
                    Some(c) => (member_full(m, c.into(), &q)?, Some(MsClass::from(c))),
                    None => (member_mq(m, &q), None),
                };
                let target = match class {
                    Some(c) => format!("{c} + M({})", q.braces()),
                    None => format!("M({})", q.braces()),
                };
                writeln!(s, "{label} in {target}: {member}").expect("write to string");
                records.push(json!({ "label": label, "q": q.elements(), "class": class, "member": member }));
            }
            Ok(Output::ok(if a.json { to_json(&records) } else { s }))
        }
        Command::Witness(a) => {
            let q = QSet::parse(a.n, &a.q)?;
            let w = falsify(a.n, a.char, &q)?;
            let out = match (&w, a.json) {
                (Some(w), true) => to_json(w),
                (Some(w), false) => w.to_string(),
                (None, true) => "null\n".into(),
                (None, false) => format!("Q = {} is accepted; no witness exists\n", q.braces()),
            };
            Ok(Output::ok(out))
        }
        Command::Verify(a) => {
            let spec: FieldSpec = a.field.parse()?;
            let q = QSet::parse(a.n, &a.q)?;
            let report = match a.mode {
                ModeArg::Exhaustive => exhaustive_check(a.n, &spec, &q, a.budget)?,
                ModeArg::Sampled => sampled_check(a.n, &spec, &q, a.samples, a.seed)?,
            };
            let stdout = if a.json { to_json(&report) } else { report.to_string() };
            let status = if report.passed() { EXIT_OK } else { EXIT_VIOLATION };
            Ok(Output {
                status,
                stdout,
                stderr: String::new(),
            })
        }
        Command::Decompose(a) => {
            let mats = load(&a.input)?;
            let mut records = Vec::new();
            let mut s = String::new();
            for (label, m) in &mats {
                let (xs, xn) = jordan_chevalley(m)?;
                if mats.len() > 1 {
                    writeln!(s, "{label}:").expect("write to string");
                }
                write!(s, "semisimple part =\n{xs}nilpotent part =\n{xn}").expect("write to string");
                records.push(json!({ "label": label, "semisimple": xs, "nilpotent": xn }));
            }
            Ok(Output::ok(if a.json { to_json(&records) } else { s }))
        }
        Command::CrossValidate(a) => {
            let degrees = parse_list(&a.degrees, "degree")?;
            let qsets = a.q.iter().map(|t| QSet::parse(a.n, t)).collect::<Result<Vec<_>>>()?;
            let list = (!qsets.is_empty()).then_some(qsets.as_slice());
            let report = cross_validate(a.n, a.char, &degrees, list, a.budget)?;
            Ok(Output::ok(if a.json { to_json(&report) } else { report.to_string() }))
        }
    }
}
