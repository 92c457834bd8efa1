//! Scenario files: a sequence source, one diagnostic, tolerances and an
//! optional expectation. Runs produce byte-stable JSON and CI exit codes.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convergence::ToleranceSpec;
use crate::diagnostic::{evaluate, Diagnostic, Outcome};
use crate::error::LatticeError;
use crate::gallery;
use crate::lattice::{Element, DEFAULT_HORIZON};
use crate::sequence::VectorSequence;

pub const SCHEMA_VERSION: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InlineSequence {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub elements: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Source {
    Gallery(String),
    Inline(InlineSequence),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub source: Source,
    pub diagnostic: Diagnostic,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<ToleranceSpec>,
    /// Coordinate horizon of the quasi-interior point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    /// `NULL`, `NOT_NULL`, `OK`, `FAILED` or an error code.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

/// Command-line overrides; unset fields fall back to the scenario, then to
/// the gallery entry's pinned tolerance, then to the defaults.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub tol: Option<f64>,
    pub window: Option<usize>,
    pub horizon: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub code: String,
    pub message: String,
}

impl ErrorReport {
    pub fn new(code: impl Into<String>, message: impl Into<String>) -> Self {
        ErrorReport {
            code: code.into(),
            message: message.into(),
        }
    }
}

impl From<&LatticeError> for ErrorReport {
    fn from(e: &LatticeError) -> Self {
        ErrorReport::new(e.code(), e.to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunResult {
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub scenario: Option<Scenario>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<ToleranceSpec>,
    pub status: String,
    pub expect: Option<String>,
    pub exit_code: i32,
    pub outcome: Option<Outcome>,
    pub error: Option<ErrorReport>,
    /// Kept out of the JSON so that reruns are byte-identical.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl RunResult {
    fn failed(opts: &RunOptions, scenario: Option<Scenario>, err: ErrorReport, code: i32) -> Self {
        RunResult {
            version: VERSION,
            seed: opts.seed,
            expect: scenario.as_ref().and_then(|s| s.expect.clone()),
            scenario,
            tolerance: None,
            status: err.code.clone(),
            exit_code: code,
            outcome: None,
            error: Some(err),
            wall_time: Duration::ZERO,
        }
    }

    pub fn to_json(&self) -> String {
        crate::json::to_stable_string(self)
    }

    /// The outcome as CSV, or a one-line error record.
    pub fn to_csv(&self) -> String {
        match (&self.outcome, &self.error) {
            (Some(o), _) => o.to_csv(),
            (None, Some(e)) => format!("status,message\n{},{:?}\n", e.code, e.message),
            (None, None) => format!("status\n{}\n", self.status),
        }
    }
}

impl Scenario {
    /// Parses and checks the schema version.
    pub fn from_json(text: &str) -> Result<Scenario, ErrorReport> {
        let scenario: Scenario = serde_json::from_str(text)
            .map_err(|e| ErrorReport::new("INVALID_SCENARIO", e.to_string()))?;
        if scenario.schema != SCHEMA_VERSION {
            return Err(ErrorReport::new(
                "SCHEMA_VERSION",
                format!(
                    "schema {} is not supported (expected {SCHEMA_VERSION})",
                    scenario.schema
                ),
            ));
        }
        Ok(scenario)
    }

    /// The sequence and the tolerance pinned by its source, if any.
    pub fn resolve_source(&self) -> Result<(VectorSequence, Option<ToleranceSpec>), ErrorReport> {
        match &self.source {
            Source::Gallery(name) => {
                let entry = gallery::entry(name)
                    .map_err(|e| ErrorReport::new("UNKNOWN_GALLERY_ENTRY", e.to_string()))?;
                Ok((entry.sequence, Some(entry.tolerance)))
            }
            Source::Inline(inline) => {
                let name = inline.name.clone().unwrap_or_else(|| "inline".into());
                let seq = VectorSequence::from_elements(name, inline.elements.clone())
                    .map_err(|e| ErrorReport::from(&e))?;
                Ok((seq, None))
            }
        }
    }
}

/// A sequence from either a scenario file or a bare inline sequence
/// `{"elements": [...]}`, with the tolerance the file declares or pins.
pub fn load_sequence(text: &str) -> Result<(VectorSequence, Option<ToleranceSpec>), ErrorReport> {
    if let Ok(scenario) = Scenario::from_json(text) {
        let (seq, pinned) = scenario.resolve_source()?;
        return Ok((seq, scenario.tolerance.or(pinned)));
    }
    let inline: InlineSequence = serde_json::from_str(text).map_err(|e| {
        ErrorReport::new(
            "INVALID_SCENARIO",
            format!("neither a scenario nor a sequence: {e}"),
        )
    })?;
    Scenario {
        schema: SCHEMA_VERSION,
        name: None,
        source: Source::Inline(inline),
        diagnostic: Diagnostic::Pointwise,
        tolerance: None,
        horizon: None,
        expect: None,
        output: None,
    }
    .resolve_source()
}

/// Writes the gallery scenarios into `dir`, returning the file names.
pub fn export_gallery(dir: &Path) -> std::io::Result<Vec<String>> {
    fs::create_dir_all(dir)?;
    let mut names = Vec::new();
    for (file, scenario) in gallery_scenarios() {
        fs::write(dir.join(&file), crate::json::to_stable_string(&scenario))?;
        names.push(file);
    }
    Ok(names)
}

fn resolve_tolerance(
    len: usize,
    scenario: Option<ToleranceSpec>,
    pinned: Option<ToleranceSpec>,
    opts: &RunOptions,
) -> Result<ToleranceSpec, LatticeError> {
    let base = scenario
        .or(pinned)
        .unwrap_or_else(|| ToleranceSpec::default_for(len));
    let ts = ToleranceSpec::new(
        opts.tol.unwrap_or(base.tol),
        opts.window.unwrap_or(base.window),
    )?;
    ts.check(len)?;
    Ok(ts)
}

fn matches_expectation(expect: &Option<String>, status: &str) -> Option<bool> {
    expect.as_ref().map(|e| e == status)
}

/// Runs a parsed scenario.
pub fn run(scenario: &Scenario, opts: &RunOptions) -> RunResult {
    let start = Instant::now();
    let (seq, pinned) = match scenario.resolve_source() {
        Ok(s) => s,
        Err(e) => return RunResult::failed(opts, Some(scenario.clone()), e, EXIT_VALIDATION),
    };
    let validation = || -> Result<ToleranceSpec, LatticeError> {
        for x in scenario.diagnostic.elements() {
            seq.tag().ensure_same(&x.tag())?;
        }
        resolve_tolerance(seq.len(), scenario.tolerance, pinned, opts)
    };
    let ts = match validation() {
        Ok(ts) => ts,
        Err(e) => {
            let code = if matches_expectation(&scenario.expect, e.code()) == Some(true) {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            };
            return RunResult::failed(opts, Some(scenario.clone()), (&e).into(), code);
        }
    };
    let horizon = opts.horizon.or(scenario.horizon).unwrap_or(DEFAULT_HORIZON);
    let evaluated = evaluate(&seq, &scenario.diagnostic, &ts, horizon);
    let (status, outcome, error) = match evaluated {
        Ok(o) => (o.status(), Some(o), None),
        Err(e) => (e.code().to_string(), None, Some(e)),
    };
    let exit_code = match (matches_expectation(&scenario.expect, &status), &error) {
        (Some(true), _) => EXIT_OK,
        (Some(false), None) => EXIT_MISMATCH,
        (_, Some(e)) if e.is_validation() => EXIT_VALIDATION,
        (_, Some(_)) => EXIT_NUMERIC,
        (None, None) => EXIT_OK,
    };
    RunResult {
        version: VERSION,
        seed: opts.seed,
        scenario: Some(scenario.clone()),
        tolerance: Some(ts),
        status,
        expect: scenario.expect.clone(),
        exit_code,
        outcome,
        error: error.as_ref().map(ErrorReport::from),
        wall_time: start.elapsed(),
    }
}

/// Parses and runs scenario text.
pub fn run_str(text: &str, opts: &RunOptions) -> RunResult {
    match Scenario::from_json(text) {
        Ok(s) => run(&s, opts),
        Err(e) => RunResult::failed(opts, None, e, EXIT_VALIDATION),
    }
}

pub fn run_file(path: &Path, opts: &RunOptions) -> RunResult {
    match fs::read_to_string(path) {
        Ok(text) => run_str(&text, opts),
        Err(e) => RunResult::failed(
            opts,
            None,
            ErrorReport::new("IO_ERROR", format!("{}: {e}", path.display())),
            EXIT_VALIDATION,
        ),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteEntry {
    pub file: String,
    pub name: Option<String>,
    pub diagnostic: Option<String>,
    pub status: String,
    pub expect: Option<String>,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub version: &'static str,
    pub directory: String,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    pub scenarios: Vec<SuiteEntry>,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        crate::json::to_stable_string(self)
    }

    /// Human-readable summary table.
    pub fn table(&self) -> String {
        let width = self
            .scenarios
            .iter()
            .map(|s| s.file.len())
            .max()
            .unwrap_or(4)
            .max(4);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:<22} {:<22} {:>4} {:>9}",
            "file", "status", "expect", "exit", "ms"
        );
        for s in &self.scenarios {
            let _ = writeln!(
                out,
                "{:<width$}  {:<22} {:<22} {:>4} {:>9.1}",
                s.file,
                s.status,
                s.expect.as_deref().unwrap_or("-"),
                s.exit_code,
                s.wall_time.as_secs_f64() * 1e3
            );
        }
        let _ = writeln!(
            out,
            "{} scenarios, {} passed, {} failed",
            self.total, self.passed, self.failed
        );
        if let Some(w) = &self.warning {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}

/// Runs every `*.json` file of `dir` in parallel; entries are reported in
/// file-name order and the exit code is the largest one seen.
pub fn suite(dir: &Path, opts: &RunOptions) -> Result<SuiteReport, ErrorReport> {
    let listing = fs::read_dir(dir)
        .map_err(|e| ErrorReport::new("IO_ERROR", format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = listing
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let scenarios: Vec<SuiteEntry> = files
        .par_iter()
        .map(|path| {
            let r = run_file(path, opts);
            SuiteEntry {
                file: path
                    .file_name()
                    .unwrap_or_default()
                    .to_string_lossy()
                    .into_owned(),
                name: r.scenario.as_ref().and_then(|s| s.name.clone()),
                diagnostic: r.scenario.as_ref().map(|s| s.diagnostic.kind().to_string()),
                status: r.status,
                expect: r.expect,
                exit_code: r.exit_code,
                error: r.error,
                wall_time: r.wall_time,
            }
        })
        .collect();
    let passed = scenarios.iter().filter(|s| s.exit_code == EXIT_OK).count();
    Ok(SuiteReport {
        version: VERSION,
        directory: dir.display().to_string(),
        total: scenarios.len(),
        passed,
        failed: scenarios.len() - passed,
        exit_code: scenarios
            .iter()
            .map(|s| s.exit_code)
            .max()
            .unwrap_or(EXIT_OK),
        warning: scenarios
            .is_empty()
            .then(|| "no scenario files found".to_string()),
        scenarios,
    })
}

/// Every pinned check of every gallery entry as a `(file name, scenario)`.
pub fn gallery_scenarios() -> Vec<(String, Scenario)> {
    gallery::entries()
        .into_iter()
        .flat_map(|entry| {
            entry.checks.into_iter().enumerate().map(move |(i, check)| {
                let kind = check.diagnostic.kind();
                let name = format!("{}.{}.{kind}", entry.name, i + 1);
                let file = format!("{}_{:02}_{kind}.json", entry.name, i + 1);
                let scenario = Scenario {
                    schema: SCHEMA_VERSION,
                    name: Some(name),
                    source: Source::Gallery(entry.name.to_string()),
                    diagnostic: check.diagnostic,
                    tolerance: Some(entry.tolerance),
                    horizon: None,
                    expect: Some(check.expected.to_string()),
                    output: None,
                };
                (file, scenario)
            })
        })
        .collect()
}
