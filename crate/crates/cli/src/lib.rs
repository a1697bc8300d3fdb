//! The `judge` command: adjudicate one scenario of a case file, or run its
//! preset suite.
//!
//! Exit status is 0 for a responsible verdict (or a fully passing suite), 1
//! for an acquittal (or any failing preset) and 2 for bad input, so shell
//! scripts can branch on verdicts without parsing output.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use judge_core::rules::{Level, PolicyValue};
use judge_core::scenario::{Case, ScenarioError, ScenarioSpec, SuiteRow};

pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "judge", version, about = "Adjudicate what-if scenarios over a case file")]
pub struct Args {
    /// Case file to load.
    #[arg(long, value_name = "PATH")]
    pub case: PathBuf,
    /// Evidence tags to keep, comma separated (default: all).
    #[arg(long, value_name = "TAGS", value_delimiter = ',', num_args = 0..)]
    pub enable: Option<Vec<String>>,
    /// Override a witness reliability, e.g. `thenardier=lo`.
    #[arg(long, value_name = "NAME=hi|lo", value_parser = parse_reliability)]
    pub reliability: Vec<(String, Level)>,
    /// Override a policy value, e.g. `min_evidence_count=0`.
    #[arg(long, value_name = "KEY=VALUE", value_parser = parse_policy)]
    pub policy: Vec<(String, PolicyValue)>,
    /// Person on trial (default: the case's `suspect` directive).
    #[arg(long)]
    pub suspect: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Include the proof of a responsible verdict.
    #[arg(long)]
    pub explain: bool,
    /// Run the case's preset scenarios and compare with their expected outcomes.
    #[arg(long, conflicts_with_all = ["enable", "reliability", "policy", "suspect", "explain"])]
    pub suite: bool,
}

fn split_pair(text: &str) -> Result<(&str, &str), String> {
    text.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .filter(|(k, _)| !k.is_empty())
        .ok_or_else(|| format!("expected NAME=VALUE, got `{text}`"))
}

fn parse_reliability(text: &str) -> Result<(String, Level), String> {
    let (name, level) = split_pair(text)?;
    let level = Level::from_atom(level).ok_or_else(|| format!("reliability must be hi or lo, got `{level}`"))?;
    Ok((name.to_string(), level))
}

fn parse_policy(text: &str) -> Result<(String, PolicyValue), String> {
    let (key, value) = split_pair(text)?;
    let value = PolicyValue::parse(value).ok_or_else(|| format!("`{value}` is not an integer or boolean"))?;
    Ok((key.to_string(), value))
}

impl Args {
    /// The scenario these flags describe.
    pub fn spec(&self) -> ScenarioSpec {
        ScenarioSpec {
            enabled_tags: self
                .enable
                .as_ref()
                .map(|tags| tags.iter().filter(|t| !t.is_empty()).cloned().collect()),
            reliability_overrides: self.reliability.iter().cloned().collect(),
            policy_overrides: self.policy.iter().cloned().collect(),
            suspect: self.suspect.clone(),
            explain: self.explain,
        }
    }
}

fn suite_text(case: &str, rows: &[SuiteRow]) -> String {
    let mut out = format!("Suite for case {case}\n");
    for row in rows {
        let mark = if row.pass { "pass" } else { "FAIL" };
        let (expected, actual) = (format!("{:?}", row.expected), format!("{:?}", row.actual));
        out.push_str(&format!("  {:<6} expected {expected:<11} got {actual:<11} {mark}\n", row.id));
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    out.push_str(&format!("{passed}/{} presets match\n", rows.len()));
    out
}

/// Runs the command, writing the report to `out`, and returns the exit status.
pub fn execute(args: &Args, out: &mut impl Write) -> Result<i32, ScenarioError> {
    let case = Case::load(&args.case)?;
    let write = |out: &mut dyn Write, text: &str| {
        out.write_all(text.as_bytes()).map_err(|source| ScenarioError::Io { path: "<stdout>".into(), source })
    };
    if args.suite {
        let rows = case.run_suite()?;
        let text = match args.format {
            Format::Text => suite_text(case.id(), &rows),
            Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
        };
        write(out, &text)?;
        return Ok(if rows.iter().all(|r| r.pass) { 0 } else { 1 });
    }
    let report = case.run(&args.spec())?;
    let text = match args.format {
        Format::Text => report.to_text(),
        Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize") + "\n",
    };
    write(out, &text)?;
    Ok(report.verdict.exit_code())
}

/// Entry point shared by the binary and tests: parses `argv`, runs, and
/// reports errors on `err`.
pub fn main_with<I, T>(argv: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_INPUT_ERROR } else { 0 };
        }
    };
    match execute(&args, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "judge: {e}");
            EXIT_INPUT_ERROR
        }
    }
}
