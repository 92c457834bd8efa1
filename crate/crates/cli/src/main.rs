//! `unlattice`: run scenarios, suites, gallery listings, topology axiom
//! checks and disjointification from the command line.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use unlattice::constructive::kp_disjointify;
use unlattice::convergence::ToleranceSpec;
use unlattice::gallery;
use unlattice::json::to_stable_string;
use unlattice::lattice::literal::parse_tag_name;
use unlattice::scenario::{
    self, ErrorReport, Format, RunOptions, EXIT_MISMATCH, EXIT_NUMERIC, EXIT_OK, EXIT_VALIDATION,
};
use unlattice::topology::axiom_suite;
use unlattice::LatticeError;

#[derive(Parser, Debug)]
#[command(
    name = "unlattice",
    version,
    about = "Convergence diagnostics in concrete Banach lattices"
)]
struct Cli {
    /// Tail tolerance
    #[arg(long, global = true, env = "UNLATTICE_TOL")]
    tol: Option<f64>,
    /// Tail window length
    #[arg(long, global = true, env = "UNLATTICE_WINDOW")]
    window: Option<usize>,
    /// Coordinate horizon of the quasi-interior point
    #[arg(long, global = true, env = "UNLATTICE_HORIZON")]
    horizon: Option<usize>,
    /// Output format
    #[arg(long, global = true, value_enum, env = "UNLATTICE_FORMAT")]
    format: Option<OutFormat>,
    /// Seed for randomized checks
    #[arg(long, global = true, env = "UNLATTICE_SEED")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one scenario file
    Run { file: PathBuf },
    /// Run every *.json scenario in a directory
    Suite { dir: PathBuf },
    /// Inspect the example gallery
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
    /// Randomized checks of the neighborhood-base axioms
    Axioms {
        /// c0, linf, direct_sum, l<p> or step<p>
        tag: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Disjointify the sequence of a scenario or sequence file
    Kp {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        count: usize,
    },
}

#[derive(Subcommand, Debug)]
enum GalleryAction {
    /// Names and pinned verdicts
    List,
    /// One entry with its checks and first terms
    Dump {
        name: String,
        /// Number of terms to include
        #[arg(long, default_value_t = 64)]
        terms: usize,
    },
    /// Write every pinned check as a scenario file
    Export { dir: PathBuf },
}

fn csv_row(fields: &[String]) -> String {
    let mut line = fields.join(",");
    line.push('\n');
    line
}

fn emit(text: &str) {
    print!("{text}");
}

fn fail(err: ErrorReport, code: i32) -> i32 {
    eprintln!("error [{}]: {}", err.code, err.message);
    code
}

fn options(cli: &Cli) -> RunOptions {
    RunOptions {
        tol: cli.tol,
        window: cli.window,
        horizon: cli.horizon,
        seed: cli.seed,
    }
}

fn cmd_run(cli: &Cli, file: &Path) -> i32 {
    let result = scenario::run_file(file, &options(cli));
    let declared = result.scenario.as_ref().and_then(|s| s.output.clone());
    let format = match (cli.format, declared.as_ref().map(|o| o.format)) {
        (Some(OutFormat::Csv), _) | (None, Some(Format::Csv)) => OutFormat::Csv,
        _ => OutFormat::Json,
    };
    let text = match format {
        OutFormat::Json => result.to_json(),
        OutFormat::Csv => result.to_csv(),
    };
    match declared.and_then(|o| o.path) {
        Some(path) => {
            if let Err(e) = fs::write(&path, &text) {
                return fail(
                    ErrorReport::new("IO_ERROR", format!("{}: {e}", path.display())),
                    EXIT_VALIDATION,
                );
            }
            eprintln!("wrote {}", path.display());
        }
        None => emit(&text),
    }
    if let Some(e) = &result.error {
        eprintln!("error [{}]: {}", e.code, e.message);
    }
    if result.exit_code == EXIT_MISMATCH {
        eprintln!(
            "expectation not met: got {}, expected {}",
            result.status,
            result.expect.as_deref().unwrap_or("-")
        );
    }
    eprintln!(
        "{} in {:.1} ms",
        result.status,
        result.wall_time.as_secs_f64() * 1e3
    );
    result.exit_code
}

fn cmd_suite(cli: &Cli, dir: &Path) -> i32 {
    let report = match scenario::suite(dir, &options(cli)) {
        Ok(r) => r,
        Err(e) => return fail(e, EXIT_VALIDATION),
    };
    match cli.format {
        Some(OutFormat::Csv) => {
            let mut out = csv_row(&[
                "file".into(),
                "status".into(),
                "expect".into(),
                "exit_code".into(),
            ]);
            for s in &report.scenarios {
                out.push_str(&csv_row(&[
                    s.file.clone(),
                    s.status.clone(),
                    s.expect.clone().unwrap_or_default(),
                    s.exit_code.to_string(),
                ]));
            }
            emit(&out);
        }
        _ => emit(&report.to_json()),
    }
    eprint!("{}", report.table());
    report.exit_code
}

fn cmd_gallery(cli: &Cli, action: &GalleryAction) -> i32 {
    match action {
        GalleryAction::List => {
            let entries: Vec<_> = gallery::entries().iter().map(|e| e.summary()).collect();
            match cli.format {
                Some(OutFormat::Csv) => {
                    let mut out = csv_row(&[
                        "name".into(),
                        "tag".into(),
                        "length".into(),
                        "checks".into(),
                    ]);
                    for e in &entries {
                        let checks: Vec<String> = e
                            .checks
                            .iter()
                            .map(|c| format!("{}={}", c.kind, c.expected))
                            .collect();
                        out.push_str(&csv_row(&[
                            e.name.into(),
                            e.tag.to_string(),
                            e.length.to_string(),
                            checks.join(";"),
                        ]));
                    }
                    emit(&out);
                }
                _ => emit(&to_stable_string(&entries)),
            }
            EXIT_OK
        }
        GalleryAction::Dump { name, terms } => {
            let entry = match gallery::entry(name) {
                Ok(e) => e,
                Err(e) => {
                    return fail(
                        ErrorReport::new("UNKNOWN_GALLERY_ENTRY", e.to_string()),
                        EXIT_VALIDATION,
                    )
                }
            };
            let dump = entry.dump(Some(*terms));
            match cli.format {
                Some(OutFormat::Csv) => {
                    let mut out = csv_row(&["index".into(), "norm".into()]);
                    for (i, x) in dump.terms.iter().enumerate() {
                        out.push_str(&csv_row(&[
                            (i + 1).to_string(),
                            unlattice::json::format_float(x.norm()),
                        ]));
                    }
                    emit(&out);
                }
                _ => emit(&to_stable_string(&dump)),
            }
            EXIT_OK
        }
        GalleryAction::Export { dir } => match scenario::export_gallery(dir) {
            Ok(files) => {
                for f in &files {
                    println!("{}", dir.join(f).display());
                }
                EXIT_OK
            }
            Err(e) => fail(ErrorReport::new("IO_ERROR", e.to_string()), EXIT_VALIDATION),
        },
    }
}

fn cmd_axioms(cli: &Cli, tag: &str, samples: usize) -> i32 {
    let tag = match parse_tag_name(tag) {
        Ok(t) => t,
        Err(e) => return fail((&e).into(), EXIT_VALIDATION),
    };
    let seed = cli.seed.unwrap_or(0);
    let reports = match axiom_suite(&tag, samples, seed) {
        Ok(r) => r,
        Err(e) => return fail((&e).into(), EXIT_NUMERIC),
    };
    match cli.format {
        Some(OutFormat::Csv) => {
            let mut out = csv_row(&["axiom".into(), "samples".into(), "failures".into()]);
            for r in &reports {
                out.push_str(&csv_row(&[
                    r.axiom.clone(),
                    r.samples.to_string(),
                    r.failures.to_string(),
                ]));
            }
            emit(&out);
        }
        _ => emit(&to_stable_string(&reports)),
    }
    if reports.iter().all(|r| r.failures == 0) {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    }
}

fn cmd_kp(cli: &Cli, file: &Path, count: usize) -> i32 {
    let text = match fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            return fail(
                ErrorReport::new("IO_ERROR", format!("{}: {e}", file.display())),
                EXIT_VALIDATION,
            )
        }
    };
    let (seq, declared) = match scenario::load_sequence(&text) {
        Ok(s) => s,
        Err(e) => return fail(e, EXIT_VALIDATION),
    };
    let base = declared.unwrap_or_else(|| ToleranceSpec::default_for(seq.len()));
    let ts = match ToleranceSpec::new(
        cli.tol.unwrap_or(base.tol),
        cli.window.unwrap_or(base.window),
    ) {
        Ok(ts) => ts,
        Err(e) => return fail((&e).into(), EXIT_VALIDATION),
    };
    let result = match kp_disjointify(&seq, count, &ts) {
        Ok(r) => r,
        Err(LatticeError::HorizonExhausted { k, bound, partial }) => {
            emit(&to_stable_string(&*partial));
            let err = LatticeError::HorizonExhausted { k, bound, partial };
            return fail((&err).into(), EXIT_NUMERIC);
        }
        Err(e) if e.is_validation() => return fail((&e).into(), EXIT_VALIDATION),
        Err(e) => return fail((&e).into(), EXIT_NUMERIC),
    };
    if let Some(a) = &result.advisory {
        eprintln!("warning: {a}");
    }
    match cli.format {
        Some(OutFormat::Csv) => {
            emit(&unlattice::diagnostic::Outcome::Disjointification(result).to_csv())
        }
        _ => emit(&to_stable_string(&result)),
    }
    EXIT_OK
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Run { file } => cmd_run(&cli, file),
        Command::Suite { dir } => cmd_suite(&cli, dir),
        Command::Gallery { action } => cmd_gallery(&cli, action),
        Command::Axioms { tag, samples } => cmd_axioms(&cli, tag, *samples),
        Command::Kp { file, count } => cmd_kp(&cli, file, *count),
    };
    ExitCode::from(code as u8)
}
