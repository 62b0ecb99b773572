//! Command implementations behind the `coext` binary.
//!
//! Every command returns its human-readable stdout text; failures carry an
//! exit class. Machine-readable CSV goes to `--out` paths, formatted with
//! shortest round-trip decimals.

pub mod format;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use coext::finite::{check_axioms, enumerate_tomonoids, FiniteTomonoid};
use coext::verify::{
    check_axioms_grid, check_left_continuity, compare, recover_quotient, sample_grid, GridReport,
    OracleTnorm, Tnorm,
};

use format::{parse_spec, BuiltSpec, SpecDocument};

/// Failure classes, mapped to process exit codes by the binary.
#[derive(Debug)]
pub enum CliError {
    /// Unusable input: parse errors, missing files, bad arguments. Exit 2.
    Usage(String),
    /// The input was understood but a check failed. Exit 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => m,
        }
    }
}

pub type CmdResult = Result<String, CliError>;

fn load_document(path: &Path) -> Result<SpecDocument, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_spec(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn load_built(path: &Path) -> Result<BuiltSpec, CliError> {
    let doc = load_document(path)?;
    doc.build().map_err(|e| CliError::Failed(e.to_string()))
}

fn load_evaluator(path: &Path) -> Result<(Box<dyn Tnorm>, Vec<f64>), CliError> {
    match load_built(path)? {
        BuiltSpec::Tomonoid(_) => Err(CliError::Usage(format!(
            "{}: a bare tomonoid spec has no evaluator; expected a coextension spec",
            path.display()
        ))),
        BuiltSpec::Arch(e) => {
            let b = e.boundaries();
            Ok((Box::new(e), b))
        }
        BuiltSpec::Semi(e) => {
            let b = e.boundaries();
            Ok((Box::new(e), b))
        }
    }
}

fn write_csv(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn reports_csv(reports: &[GridReport]) -> String {
    let mut csv = String::from("check,max_deviation,samples,witness\n");
    for r in reports {
        let witness: Vec<String> = r.witness.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            r.check,
            r.max_deviation,
            r.samples,
            witness.join(";")
        );
    }
    csv
}

/// `check`: axiom report for a table, exit 0 iff clean.
pub fn cmd_check(spec: &Path) -> CmdResult {
    let doc = load_document(spec)?;
    let report = check_axioms(&doc.table)
        .map_err(|e| CliError::Usage(format!("{}: structural error: {e}", spec.display())))?;
    if report.is_clean() {
        Ok(format!(
            "table on {} elements is a valid tomonoid\n",
            doc.table.len()
        ))
    } else {
        let mut out = String::new();
        for v in &report.violations {
            let _ = writeln!(out, "{v}");
        }
        Err(CliError::Failed(out))
    }
}

/// `filters`: every filter with its quotient table.
pub fn cmd_filters(spec: &Path) -> CmdResult {
    let doc = load_document(spec)?;
    let t = FiniteTomonoid::new(doc.table)
        .map_err(|e| CliError::Failed(format!("{}: {e}\n", spec.display())))?;
    let mut out = String::new();
    let filters = t.filters();
    let _ = writeln!(out, "{} filter(s)", filters.len());
    for f in filters {
        let _ = writeln!(out, "filter [{}, {}]", f.low, t.top());
        let q = t.quotient(&f);
        let _ = writeln!(out, "quotient on {} element(s):", q.size());
        let _ = write!(out, "{q}");
    }
    Ok(out)
}

/// `build`: validate a coextension spec and report the case assignments.
pub fn cmd_build(spec: &Path) -> CmdResult {
    let mut out = String::new();
    match load_built(spec)? {
        BuiltSpec::Tomonoid(t) => {
            let _ = writeln!(
                out,
                "valid tomonoid on {} element(s); no coextension sections",
                t.size()
            );
        }
        BuiltSpec::Arch(e) => {
            let _ = writeln!(
                out,
                "valid Archimedean coextension ({} filter)",
                e.filter_kind()
            );
            let _ = writeln!(out, "classes: {}", e.partition().len());
            for (r, t, label) in e.case_table() {
                let _ = writeln!(out, "pair {r} {t} -> {label}");
            }
        }
        BuiltSpec::Semi(e) => {
            let _ = writeln!(out, "valid semilattice coextension");
            let _ = writeln!(out, "classes: {}", e.partition().len());
            for (r, t, label) in e.case_table() {
                let _ = writeln!(out, "pair {r} {t} -> {label}");
            }
        }
    }
    Ok(out)
}

/// `eval`: one value, printed to 15 decimal places.
pub fn cmd_eval(spec: &Path, a: f64, b: f64) -> CmdResult {
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return Err(CliError::Usage(format!(
            "arguments must lie in [0,1], got {a} {b}"
        )));
    }
    let (f, _) = load_evaluator(spec)?;
    Ok(format!("{:.15}\n", f.apply(a, b)))
}

/// `grid`: CSV of values over an n×n grid.
pub fn cmd_grid(spec: &Path, n: usize, out: &Path) -> CmdResult {
    if n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    let (f, boundaries) = load_evaluator(spec)?;
    let grid = sample_grid(n, &boundaries);
    let mut csv = String::from("a,b,value\n");
    for &a in &grid {
        for &b in &grid {
            let _ = writeln!(csv, "{a},{b},{}", f.apply(a, b));
        }
    }
    write_csv(out, &csv)?;
    Ok(format!(
        "wrote {} rows to {}\n",
        grid.len() * grid.len(),
        out.display()
    ))
}

/// `verify`: axiom grids at `tol` plus left-continuity at the class borders
/// (tolerance 1e-7); exit 0 iff everything passes.
pub fn cmd_verify(spec: &Path, n: usize, tol: f64, out: Option<&Path>) -> CmdResult {
    if n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    let (f, boundaries) = load_evaluator(spec)?;
    let mut reports = check_axioms_grid(f.as_ref(), n, tol);
    reports.push(check_left_continuity(f.as_ref(), &boundaries, 1e-7));
    let mut text = String::new();
    let mut all_pass = true;
    for r in &reports {
        let t = if r.check == "left-continuity" {
            1e-7
        } else {
            tol
        };
        let ok = r.passes(t);
        all_pass &= ok;
        let _ = writeln!(text, "{} {r}", if ok { "PASS" } else { "FAIL" });
    }
    if let Some(path) = out {
        write_csv(path, &reports_csv(&reports))?;
    }
    if all_pass {
        Ok(text)
    } else {
        Err(CliError::Failed(text))
    }
}

/// `oracle-compare`: max deviation from a closed-form reference.
pub fn cmd_oracle_compare(
    spec: &Path,
    oracle: OracleTnorm,
    n: usize,
    out: Option<&Path>,
) -> CmdResult {
    if n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    let (f, _) = load_evaluator(spec)?;
    let report = compare(f.as_ref(), &oracle, n);
    let text = format!("{report}\n");
    if let Some(path) = out {
        write_csv(path, &reports_csv(std::slice::from_ref(&report)))?;
    }
    Ok(text)
}

/// `recover`: sample the evaluator along its own partition classes.
pub fn cmd_recover(spec: &Path) -> CmdResult {
    let doc = load_document(spec)?;
    let built = doc.build().map_err(|e| CliError::Failed(e.to_string()))?;
    let (f, partition): (Box<dyn Tnorm>, _) = match built {
        BuiltSpec::Tomonoid(_) => {
            return Err(CliError::Usage(
                "a bare tomonoid spec has no partition".into(),
            ))
        }
        BuiltSpec::Arch(e) => {
            let p = e.partition().clone();
            (Box::new(e), p)
        }
        BuiltSpec::Semi(e) => {
            let p = e.partition().clone();
            (Box::new(e), p)
        }
    };
    let t =
        recover_quotient(f.as_ref(), &partition).map_err(|e| CliError::Failed(format!("{e}\n")))?;
    Ok(format!(
        "recovered quotient on {} element(s):\n{t}",
        t.size()
    ))
}

/// `enumerate`: all tomonoid tables on the n-chain.
pub fn cmd_enumerate(n: usize, out: Option<&Path>) -> CmdResult {
    let tables = enumerate_tomonoids(n).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut text = String::new();
    let _ = writeln!(text, "{} tomonoid(s) on the {n}-chain", tables.len());
    for (i, t) in tables.iter().enumerate() {
        let _ = writeln!(text, "# {i}");
        let _ = write!(text, "{t}");
    }
    if let Some(path) = out {
        let mut csv = String::from("id,n,table\n");
        for (i, t) in tables.iter().enumerate() {
            let rows: Vec<String> = t
                .rows()
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            let _ = writeln!(csv, "{i},{n},{}", rows.join(";"));
        }
        write_csv(path, &csv)?;
    }
    Ok(text)
}

/// Flat argument form used by the binary and by integration tests.
#[derive(Debug, Clone)]
pub enum Command {
    Check {
        spec: PathBuf,
    },
    Filters {
        spec: PathBuf,
    },
    Build {
        spec: PathBuf,
    },
    Eval {
        spec: PathBuf,
        a: f64,
        b: f64,
    },
    Grid {
        spec: PathBuf,
        n: usize,
        out: PathBuf,
    },
    Verify {
        spec: PathBuf,
        n: usize,
        tol: f64,
        out: Option<PathBuf>,
    },
    OracleCompare {
        spec: PathBuf,
        oracle: OracleTnorm,
        n: usize,
        out: Option<PathBuf>,
    },
    Recover {
        spec: PathBuf,
    },
    Enumerate {
        n: usize,
        out: Option<PathBuf>,
    },
}

pub fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Check { spec } => cmd_check(&spec),
        Command::Filters { spec } => cmd_filters(&spec),
        Command::Build { spec } => cmd_build(&spec),
        Command::Eval { spec, a, b } => cmd_eval(&spec, a, b),
        Command::Grid { spec, n, out } => cmd_grid(&spec, n, &out),
        Command::Verify { spec, n, tol, out } => cmd_verify(&spec, n, tol, out.as_deref()),
        Command::OracleCompare {
            spec,
            oracle,
            n,
            out,
        } => cmd_oracle_compare(&spec, oracle, n, out.as_deref()),
        Command::Recover { spec } => cmd_recover(&spec),
        Command::Enumerate { n, out } => cmd_enumerate(n, out.as_deref()),
    }
}
