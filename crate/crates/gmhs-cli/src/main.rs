//! Command-line verifier for generalized mixed Hodge structure scenarios.
//!
//! Subcommand per operation; reports render as text (default) or canonical
//! JSON (`--json`), byte-identical for identical inputs. Exit codes:
//! 0 pass, 1 fail, 2 unknown, 3 input error.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use gmhs_core::builders::{compute_e2, validate_complex};
use gmhs_core::error::Error;
use gmhs_core::example33::{
    build_example33, classify_example33, split_reference, Classification, Example33Params,
};
use gmhs_core::ext::{check_exact, common_label_corr, ext1_dimension, hom_group, roof_report};
use gmhs_core::gmhs::check_gmhs;
use gmhs_core::linalg::{Matrix, Rat};
use gmhs_core::scenario::{self, rat_from_string, rat_to_string, ScenarioFile};

#[derive(Parser)]
#[command(
    name = "gmhs",
    version,
    about = "Exact-arithmetic verifier for generalized mixed Hodge structures"
)]
struct Cli {
    /// Emit the report as canonical JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every applicable validator over a scenario file.
    Validate {
        /// Scenario JSON file.
        scenario: PathBuf,
        /// Validate only this named object.
        #[arg(long)]
        object: Option<String>,
    },
    /// Dimension and bases of one term of the second weight spectral
    /// sequence page.
    SsE2 {
        /// Scenario JSON file.
        scenario: PathBuf,
        /// Name of the strata table.
        #[arg(long)]
        strata: String,
        /// First-page column p.
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        /// First-page row q.
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
    },
    /// Ext¹ dimension of a named object in the quotient model.
    Ext1 {
        /// Scenario JSON file.
        scenario: PathBuf,
        /// Name of the object (all weights must be negative).
        #[arg(long)]
        object: String,
    },
    /// Basis of the Hom group between two named objects.
    Hom {
        /// Scenario JSON file.
        scenario: PathBuf,
        /// Name of the source object.
        #[arg(long)]
        source: String,
        /// Name of the target object.
        #[arg(long)]
        target: String,
        /// Named correspondence fixing the intertwining requirements;
        /// defaults to pairing every label the two sites share.
        #[arg(long)]
        corr: Option<String>,
    },
    /// Check a roof certifying that two extensions have the same class.
    YonedaCheck {
        /// Scenario JSON file.
        scenario: PathBuf,
        /// Name of the first extension.
        #[arg(long)]
        e: String,
        /// Name of the second extension.
        #[arg(long)]
        eprime: String,
        /// Name of the roof connecting them.
        #[arg(long)]
        roof: String,
    },
    /// Classify the two-extension class for parameters c1, c2: NonTrivial
    /// (exit 0, certificate trace written), Trivial (exit 1, witness roof
    /// scenario written), or Unknown (exit 2).
    Example33 {
        /// First parameter, a rational like `1` or `-3/2`.
        #[arg(long, allow_hyphen_values = true)]
        c1: String,
        /// Second parameter.
        #[arg(long, allow_hyphen_values = true)]
        c2: String,
        /// Bound on the candidate middles tried in the trivial branch.
        #[arg(long)]
        search_bound: Option<usize>,
        /// Output path: certificate trace (NonTrivial) or witness scenario
        /// (Trivial). Defaults: example33_certificate.txt /
        /// example33_witness.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        }
    }
}

struct ReportCheck {
    name: String,
    status: Status,
    detail: String,
}

/// Per-command result: echoed invocation, free-form info lines, one entry
/// per check, and a machine-readable payload mirroring the text.
struct Report {
    command: String,
    lines: Vec<String>,
    checks: Vec<ReportCheck>,
    payload: Map<String, Value>,
}

impl Report {
    fn new(command: String) -> Self {
        Report { command, lines: Vec::new(), checks: Vec::new(), payload: Map::new() }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn check(&mut self, name: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.checks.push(ReportCheck { name: name.into(), status, detail: detail.into() });
    }

    fn record_report(&mut self, rep: &gmhs_core::error::ValidationReport) {
        for c in &rep.checks {
            self.check(
                c.name.clone(),
                if c.ok { Status::Pass } else { Status::Fail },
                c.detail.clone(),
            );
        }
    }

    fn verdict(&self) -> Status {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if self.checks.iter().any(|c| c.status == Status::Unknown) {
            Status::Unknown
        } else {
            Status::Pass
        }
    }

    fn exit_code(&self) -> i32 {
        match self.verdict() {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Unknown => 2,
        }
    }

    fn render_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command);
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Unknown => "????",
            };
            out.push_str(&format!("[{tag}] {}", c.name));
            if !c.detail.is_empty() {
                out.push_str(&format!(" — {}", c.detail));
            }
            out.push('\n');
        }
        out.push_str(&format!("verdict: {}\n", self.verdict().as_str()));
        out
    }

    fn render_json(&self) -> String {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "status": c.status.as_str(),
                    "detail": c.detail,
                })
            })
            .collect();
        let value = json!({
            "command": self.command,
            "lines": self.lines,
            "checks": checks,
            "payload": Value::Object(self.payload.clone()),
            "verdict": self.verdict().as_str(),
        });
        // serde_json maps are sorted; pretty form is canonical.
        let mut text = serde_json::to_string_pretty(&value).expect("report renders");
        text.push('\n');
        text
    }
}

fn matrix_rows(m: &Matrix<Rat>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(rat_to_string).collect()).collect()
}

fn rows_to_value(rows: &[Vec<String>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(|s| Value::String(s.clone())).collect()))
            .collect(),
    )
}

fn format_row(row: &[String]) -> String {
    format!("({})", row.join(", "))
}

fn push_basis(report: &mut Report, title: &str, rows: &[Vec<String>]) {
    if rows.is_empty() {
        report.line(format!("{title}: (empty)"));
    } else {
        report.line(format!("{title}:"));
        for r in rows {
            report.line(format!("  {}", format_row(r)));
        }
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

type CmdResult = Result<Report, Error>;

fn load_scenario(path: &Path) -> Result<ScenarioFile, Error> {
    scenario::load_unchecked(path)
}

fn cmd_validate(path: &Path, object: Option<&str>) -> CmdResult {
    let echo = match object {
        Some(o) => format!("gmhs validate {} --object {o}", path.display()),
        None => format!("gmhs validate {}", path.display()),
    };
    let mut report = Report::new(echo);
    let s = load_scenario(path)?;
    match object {
        Some(name) => {
            let o = s.object(name)?;
            let mut rep = gmhs_core::error::ValidationReport::new(format!("object '{name}'"));
            rep.merge(check_gmhs(o));
            report.record_report(&rep);
        }
        None => {
            let rep = s.validation_report();
            report.record_report(&rep);
            report.line(format!(
                "validated {} objects, {} morphisms, {} strata tables, {} extensions, {} roofs",
                s.objects.len(),
                s.morphisms.len(),
                s.strata.len(),
                s.extensions.len(),
                s.roofs.len()
            ));
        }
    }
    report.payload.insert("checks_run".into(), json!(report.checks.len()));
    Ok(report)
}

fn cmd_ss_e2(path: &Path, strata: &str, p: i64, q: i64) -> CmdResult {
    let mut report =
        Report::new(format!("gmhs ss-e2 {} --strata {strata} --p {p} --q {q}", path.display()));
    let s = load_scenario(path)?;
    let table = s.strata_table(strata)?;

    let mut degrees: BTreeSet<i64> = table.cohomology_dims.keys().map(|(_, n)| *n).collect();
    degrees.extend(table.gysin.keys().map(|(_, _, n)| *n));
    for k in degrees {
        let rep = validate_complex(table, k);
        if !rep.passed() {
            report.check(
                format!("strata '{strata}' complex condition (degree {k})"),
                Status::Fail,
                rep.first_failure_text(),
            );
        }
    }
    if report.verdict() == Status::Fail {
        return Ok(report);
    }
    report.check(format!("strata '{strata}' complex condition"), Status::Pass, "d₁∘d₁ = 0");

    let term = compute_e2(table, p, q)?;
    let dim = term.dim();
    report.line(format!("dim E2^{{{p},{q}}} = {dim}"));
    let kernel = matrix_rows(term.kernel.basis());
    let image = matrix_rows(term.image.basis());
    push_basis(&mut report, "kernel basis", &kernel);
    push_basis(&mut report, "image basis", &image);
    report.check(format!("E2^{{{p},{q}}} computed"), Status::Pass, format!("dimension {dim}"));
    report.payload.insert("p".into(), json!(p));
    report.payload.insert("q".into(), json!(q));
    report.payload.insert("dim".into(), json!(dim));
    report.payload.insert("kernel_basis".into(), rows_to_value(&kernel));
    report.payload.insert("image_basis".into(), rows_to_value(&image));
    Ok(report)
}

fn cmd_ext1(path: &Path, object: &str) -> CmdResult {
    let mut report = Report::new(format!("gmhs ext1 {} --object {object}", path.display()));
    let s = load_scenario(path)?;
    let o = s.object(object)?;
    let rep = check_gmhs(o);
    report.check(
        format!("object '{object}' validates"),
        if rep.passed() { Status::Pass } else { Status::Fail },
        if rep.passed() { "ok".to_string() } else { rep.first_failure_text() },
    );
    if !rep.passed() {
        return Ok(report);
    }
    match ext1_dimension(&o.mhs) {
        Ok((dim, reps)) => {
            report.line(format!("ext1 dimension = {dim}"));
            let rows: Vec<Vec<String>> =
                reps.iter().map(|r| r.iter().map(rat_to_string).collect()).collect();
            push_basis(&mut report, "coset representatives (2n-dimensional model)", &rows);
            report.check("ext1 dimension computed", Status::Pass, format!("dimension {dim}"));
            report.payload.insert("dim".into(), json!(dim));
            report.payload.insert("coset_representatives".into(), rows_to_value(&rows));
        }
        Err(e) => {
            report.check("ext1 dimension computed", Status::Fail, e.to_string());
        }
    }
    Ok(report)
}

fn cmd_hom(path: &Path, source: &str, target: &str, corr: Option<&str>) -> CmdResult {
    let echo = match corr {
        Some(c) => format!(
            "gmhs hom {} --source {source} --target {target} --corr {c}",
            path.display()
        ),
        None => format!("gmhs hom {} --source {source} --target {target}", path.display()),
    };
    let mut report = Report::new(echo);
    let s = load_scenario(path)?;
    let a = s.object(source)?;
    let b = s.object(target)?;
    let c = match corr {
        Some(name) => s.correspondence(name)?.clone(),
        None => common_label_corr(&a.site, &b.site),
    };
    for (side, name, o) in [("source", source, a), ("target", target, b)] {
        let rep = check_gmhs(o);
        report.check(
            format!("{side} object '{name}' validates"),
            if rep.passed() { Status::Pass } else { Status::Fail },
            if rep.passed() { "ok".to_string() } else { rep.first_failure_text() },
        );
    }
    if report.verdict() == Status::Fail {
        return Ok(report);
    }
    let basis = hom_group(a, b, &c)?;
    report.line(format!("dim Hom = {}", basis.len()));
    let mut payload_basis = Vec::new();
    for (i, m) in basis.iter().enumerate() {
        let rows = matrix_rows(m);
        push_basis(&mut report, &format!("basis matrix {i}"), &rows);
        payload_basis.push(rows_to_value(&rows));
    }
    report.check("hom group computed", Status::Pass, format!("dimension {}", basis.len()));
    report.payload.insert("dim".into(), json!(basis.len()));
    report.payload.insert("basis".into(), Value::Array(payload_basis));
    Ok(report)
}

fn cmd_yoneda_check(path: &Path, e_name: &str, eprime_name: &str, roof_name: &str) -> CmdResult {
    let mut report = Report::new(format!(
        "gmhs yoneda-check {} --e {e_name} --eprime {eprime_name} --roof {roof_name}",
        path.display()
    ));
    let s = load_scenario(path)?;
    let e = s.extension(e_name)?;
    let eprime = s.extension(eprime_name)?;
    let roof = s.roof(roof_name)?;
    for (name, ext) in [(e_name, e), (eprime_name, eprime)] {
        let rep = check_exact(ext);
        report.check(
            format!("extension '{name}' is exact"),
            if rep.passed() { Status::Pass } else { Status::Fail },
            if rep.passed() { "ok".to_string() } else { rep.first_failure_text() },
        );
    }
    if report.verdict() == Status::Fail {
        return Ok(report);
    }
    match roof_report(e, eprime, roof) {
        Ok(rep) => {
            report.record_report(&rep);
            let ok = rep.passed();
            report.line(if ok {
                format!("roof '{roof_name}' certifies C({e_name}) = C({eprime_name})")
            } else {
                format!("roof '{roof_name}' does not certify C({e_name}) = C({eprime_name})")
            });
            report.payload.insert("certifies".into(), json!(ok));
        }
        Err(err) => {
            report.check("roof shape", Status::Fail, err.to_string());
            report.payload.insert("certifies".into(), json!(false));
        }
    }
    Ok(report)
}

fn cmd_example33(c1: &str, c2: &str, search_bound: Option<usize>, out: Option<&Path>) -> CmdResult {
    let mut echo = format!("gmhs example33 --c1 {c1} --c2 {c2}");
    if let Some(b) = search_bound {
        echo.push_str(&format!(" --search-bound {b}"));
    }
    if let Some(p) = out {
        echo.push_str(&format!(" --out {}", p.display()));
    }
    let mut report = Report::new(echo);

    let c1 = rat_from_string(c1)?;
    let c2 = rat_from_string(c2)?;
    let mut params = Example33Params::new(c1.clone(), c2.clone());
    if let Some(b) = search_bound {
        params.search_bound = b;
    }
    report.payload.insert("c1".into(), json!(rat_to_string(&c1)));
    report.payload.insert("c2".into(), json!(rat_to_string(&c2)));

    match classify_example33(&params)? {
        Classification::NonTrivial(cert) => {
            let trace = cert.trace();
            let out_path =
                out.map(Path::to_path_buf).unwrap_or_else(|| "example33_certificate.txt".into());
            std::fs::write(&out_path, &trace).map_err(|e| {
                Error::input(format!("cannot write '{}': {e}", out_path.display()))
            })?;
            for l in trace.lines() {
                report.line(l);
            }
            report.line(format!("certificate trace written to {}", out_path.display()));
            report.check(
                "class is non-trivial",
                Status::Pass,
                format!("obstruction certificate with {} equations", cert.equations.len()),
            );
            report.payload.insert("verdict".into(), json!("NonTrivial"));
            report.payload.insert(
                "equations".into(),
                Value::Array(
                    cert.equations
                        .iter()
                        .map(|eq| json!({ "name": eq.name, "statement": eq.statement }))
                        .collect(),
                ),
            );
            report.payload.insert("trace_path".into(), json!(out_path.display().to_string()));
        }
        Classification::Trivial(roof) => {
            let e = build_example33(&params)?;
            let eprime = split_reference()?;
            let mut witness = ScenarioFile::new();
            witness.insert_extension("E", &e);
            witness.insert_extension("Esplit", &eprime);
            witness.insert_roof("witness", &roof);
            witness.params.insert(
                "example33".into(),
                [("c1".into(), c1.clone()), ("c2".into(), c2.clone())].into_iter().collect(),
            );
            let out_path =
                out.map(Path::to_path_buf).unwrap_or_else(|| "example33_witness.json".into());
            scenario::save(&witness, &out_path)?;
            report.line(format!("witness roof scenario written to {}", out_path.display()));
            report.line(format!(
                "confirm with: gmhs yoneda-check {} --e E --eprime Esplit --roof witness",
                out_path.display()
            ));
            report.check(
                "class is non-trivial",
                Status::Fail,
                "a witness roof certifies C(E) = C(Esplit), so the class is trivial",
            );
            report.payload.insert("verdict".into(), json!("Trivial"));
            report.payload.insert("witness_path".into(), json!(out_path.display().to_string()));
        }
        Classification::Unknown { candidates_tried, search_bound } => {
            report.check(
                "class is non-trivial",
                Status::Unknown,
                format!(
                    "no witness among {candidates_tried} candidates at search bound \
                     {search_bound}; raise --search-bound"
                ),
            );
            report.payload.insert("verdict".into(), json!("Unknown"));
            report.payload.insert("candidates_tried".into(), json!(candidates_tried));
            report.payload.insert("search_bound".into(), json!(search_bound));
        }
    }
    Ok(report)
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Validate { scenario, object } => cmd_validate(scenario, object.as_deref()),
        Command::SsE2 { scenario, strata, p, q } => cmd_ss_e2(scenario, strata, *p, *q),
        Command::Ext1 { scenario, object } => cmd_ext1(scenario, object),
        Command::Hom { scenario, source, target, corr } => {
            cmd_hom(scenario, source, target, corr.as_deref())
        }
        Command::YonedaCheck { scenario, e, eprime, roof } => {
            cmd_yoneda_check(scenario, e, eprime, roof)
        }
        Command::Example33 { c1, c2, search_bound, out } => {
            cmd_example33(c1, c2, *search_bound, out.as_deref())
        }
    }
}

fn main() {
    // Argument errors are input errors (exit 3); clap's default exit code 2
    // is reserved for the unknown verdict. Help and version keep exit 0.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.exit_code() == 0 { 0 } else { 3 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                print!("{}", report.render_json());
            } else {
                print!("{}", report.render_text());
            }
            std::process::exit(report.exit_code());
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(3);
        }
    }
}
