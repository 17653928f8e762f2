//! Command-line front end. Exit codes: 0 recognized (or success), 1
//! rejected, 2 inconclusive, 64 unreadable or invalid input.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::cohomology::{kunneth_product, validate_ring, ManifoldData};
use crate::corpus::{mutate_data, standard_fixtures, Expected, Mutation};
use crate::format::{parse_gram, parse_manifold, write_manifold};
use crate::forms::named::parse_form_spec;
use crate::forms::{
    automorphism_group, characteristic_vector, classify_unimodular, IntegralForm, SearchBound, DEFAULT_BOUND,
};
use crate::linalg::IntMatrix;
use crate::recognizer::{diagnostics, recognize, Diagnostics, RecognitionReport, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "prodrecog", version, about = "Recognize cohomology rings of products M × Σ_g")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Machine,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether a manifold file describes a product.
    Recognize {
        path: PathBuf,
        /// Entry bound for indefinite lattice searches.
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: SearchBound,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Write the data of M × Σ_g for a form.
    MakeProduct {
        /// Named composition such as `-E8+-E8+H+H+H`, or a Gram matrix file.
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long)]
        genus: usize,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// One of: action, det, spin-sigma8, w2, p1-f, p1-lattice, orientation, torsion.
        #[arg(long)]
        mutate: Option<String>,
    },
    /// Invariants and class of a form given by name or Gram file.
    ClassifyForm {
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    /// Generators and order of the automorphism group of a unimodular form.
    Autgroup {
        #[arg(allow_hyphen_values = true)]
        form: String,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: SearchBound,
    },
    /// Ring axioms, duality determinants and the Euler identity of a file.
    CheckRing { path: PathBuf },
    /// Write the standard fixtures and a manifest into a directory.
    WriteFixtures { dir: PathBuf },
}

struct Failure(i32, String);

fn input_error(msg: impl std::fmt::Display) -> Failure {
    Failure(EXIT_INPUT, msg.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<ManifoldData, Failure> {
    parse_manifold(&read(path)?).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

/// A named composition, or a Gram file if a file of that name exists.
fn load_form(spec: &str) -> Result<IntegralForm, Failure> {
    let path = Path::new(spec);
    if path.is_file() {
        let gram = parse_gram(&read(path)?).map_err(|e| input_error(format!("{spec}: {e}")))?;
        IntegralForm::new(gram).map_err(input_error)
    } else {
        parse_form_spec(spec).map_err(input_error)
    }
}

fn matrix_rows(m: &IntMatrix) -> String {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

fn indented(m: &IntMatrix) -> String {
    let mut s = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "  {}", row.join(" "));
    }
    s
}

pub fn machine_report(report: &RecognitionReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "verdict={}", report.verdict.kind());
    match &report.verdict {
        Verdict::Recognized(r) => {
            let c = &r.form_class;
            let _ = writeln!(s, "rank={}", c.rank);
            let _ = writeln!(s, "signature={}", c.signature);
            let _ = writeln!(s, "parity={}", c.parity);
            let _ = writeln!(s, "genus={}", r.genus);
            let _ = writeln!(s, "form={}", c.name);
            let _ = writeln!(s, "psi={}", matrix_rows(r.psi.matrix()));
            let coeffs: Vec<String> = r.lift_coeffs.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "lift_coeffs={}", coeffs.join(","));
            for (k, p) in r.phi.iter().enumerate() {
                let _ = writeln!(s, "phi_degree_{k}={}", matrix_rows(p));
            }
        }
        Verdict::Rejected { condition, witness } => {
            let _ = writeln!(s, "condition={condition}");
            let _ = writeln!(s, "witness={}", witness.replace('\n', " "));
        }
        Verdict::Inconclusive { bound } => {
            let _ = writeln!(s, "bound={bound}");
        }
    }
    write_machine_diagnostics(&mut s, &report.diagnostics);
    s
}

fn write_machine_diagnostics(s: &mut String, d: &Diagnostics) {
    if let Some(e) = &d.euler {
        let _ = writeln!(s, "euler={},{}", e.actual, e.expected);
    }
    for c in &d.duality {
        let det = c.determinant.as_ref().map_or_else(|| "none".to_string(), ToString::to_string);
        let _ = writeln!(s, "duality_degree_{}={det}", c.degree);
    }
}

pub fn text_report(report: &RecognitionReport) -> String {
    let mut s = String::new();
    match &report.verdict {
        Verdict::Recognized(r) => {
            let c = &r.form_class;
            let _ = writeln!(s, "verdict: recognized");
            let _ = writeln!(s, "form: {}", c.name);
            let _ = writeln!(s, "rank {}, signature {}, parity {}, genus {}", c.rank, c.signature, c.parity, r.genus);
            let _ = write!(s, "psi:\n{}", indented(r.psi.matrix()));
            let coeffs: Vec<String> = r.lift_coeffs.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "lift coefficients: {}", coeffs.join(" "));
            for (k, p) in r.phi.iter().enumerate() {
                let _ = write!(s, "phi in degree {k}:\n{}", indented(p));
            }
        }
        Verdict::Rejected { condition, witness } => {
            let _ = writeln!(s, "verdict: rejected");
            let _ = writeln!(s, "condition: {condition}");
            let _ = writeln!(s, "witness: {witness}");
        }
        Verdict::Inconclusive { bound } => {
            let _ = writeln!(s, "verdict: inconclusive");
            let _ = writeln!(s, "no isomorphism found with automorphism entries bounded by {bound}");
        }
    }
    s.push_str(&text_diagnostics(&report.diagnostics));
    s
}

fn text_diagnostics(d: &Diagnostics) -> String {
    let mut s = String::from("diagnostics:\n");
    if let Some(e) = &d.euler {
        let mark = if e.holds() { "ok" } else { "MISMATCH" };
        let _ = writeln!(s, "  Euler characteristic {} vs χ(F)(r+2) = {}: {mark}", e.actual, e.expected);
    }
    let dets: Vec<String> = d
        .duality
        .iter()
        .map(|c| c.determinant.as_ref().map_or_else(|| "n/a".to_string(), ToString::to_string))
        .collect();
    let _ = writeln!(s, "  duality determinants (degrees 0..6): {}", dets.join(" "));
    for n in &d.notes {
        let _ = writeln!(s, "  note: {n}");
    }
    s
}

fn exit_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Recognized(_) => EXIT_OK,
        Verdict::Rejected { .. } => EXIT_REJECTED,
        Verdict::Inconclusive { .. } => EXIT_INCONCLUSIVE,
    }
}

fn classify_text(form: &IntegralForm) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "rank: {}", form.rank());
    let _ = writeln!(s, "determinant: {}", form.determinant());
    let _ = writeln!(s, "signature: {}", form.signature());
    let _ = writeln!(s, "parity: {}", form.parity());
    let _ = writeln!(s, "unimodular: {}", if form.is_unimodular() { "yes" } else { "no" });
    match classify_unimodular(form) {
        Ok(c) => {
            let _ = writeln!(s, "class: {}", c.name);
        }
        Err(_) => s.push_str("class: n/a (not unimodular)\n"),
    }
    match characteristic_vector(form) {
        Ok(v) => {
            let v: Vec<String> = v.iter().map(ToString::to_string).collect();
            let _ = writeln!(s, "characteristic vector: {}", v.join(" "));
        }
        Err(_) => s.push_str("characteristic vector: n/a (not unimodular)\n"),
    }
    s
}

fn check_ring_text(d: &ManifoldData) -> (String, bool) {
    let mut s = String::new();
    let violations = validate_ring(&d.ring);
    let diag = diagnostics(d);
    let mut ok = violations.is_empty();
    if violations.is_empty() {
        s.push_str("ok\n");
    }
    for v in &violations {
        let _ = writeln!(s, "violation: {v}");
    }
    for c in &diag.duality {
        let det = c.determinant.as_ref().map_or_else(|| "n/a".to_string(), ToString::to_string);
        let _ = writeln!(s, "duality degree {}: determinant {det}", c.degree);
        ok &= c.holds();
    }
    match &diag.euler {
        Some(e) => {
            let mark = if e.holds() { "ok" } else { "FLAGGED" };
            let _ = writeln!(s, "Euler: χ = {}, χ(F)(r+2) = {}: {mark}", e.actual, e.expected);
            ok &= e.holds();
        }
        None => s.push_str("Euler: b2 = 0, identity not applicable\n"),
    }
    (s, ok)
}

fn manifest_line(file: &str, e: &Expected) -> String {
    match e {
        Expected::Recognized { class, genus } => format!(
            "{file} recognized rank={} signature={} parity={} genus={genus}",
            class.rank, class.signature, class.parity
        ),
        Expected::Rejected(c) => format!("{file} rejected condition={c}"),
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let io = |e: std::io::Error| input_error(e);
    match cli.command {
        Command::Recognize { path, bound, format } => {
            let data = load(&path)?;
            let report = recognize(&data, bound);
            let text = match format {
                ReportFormat::Text => text_report(&report),
                ReportFormat::Machine => machine_report(&report),
            };
            out.write_all(text.as_bytes()).map_err(io)?;
            Ok(exit_code(&report.verdict))
        }
        Command::MakeProduct { form, genus, out: target, mutate } => {
            let s = load_form(&form)?;
            let mut data = kunneth_product(&s, genus).map_err(input_error)?;
            if let Some(m) = mutate {
                let kind: Mutation = m.parse().map_err(input_error)?;
                data = mutate_data(&data, kind).map_err(input_error)?;
            }
            let text = write_manifold(&data);
            match target {
                Some(p) => std::fs::write(&p, text).map_err(|e| input_error(format!("{}: {e}", p.display())))?,
                None => out.write_all(text.as_bytes()).map_err(io)?,
            }
            Ok(EXIT_OK)
        }
        Command::ClassifyForm { form } => {
            let s = load_form(&form)?;
            out.write_all(classify_text(&s).as_bytes()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Autgroup { form, bound } => {
            let s = load_form(&form)?;
            let group = automorphism_group(&s, bound).map_err(input_error)?;
            let mut text = format!("order: {}\ngenerators: {}\n", group.order, group.generators.len());
            for (n, g) in group.generators.iter().enumerate() {
                let _ = write!(text, "generator {}:\n{}", n + 1, indented(g.matrix()));
            }
            out.write_all(text.as_bytes()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::CheckRing { path } => {
            let data = load(&path)?;
            let (text, ok) = check_ring_text(&data);
            out.write_all(text.as_bytes()).map_err(io)?;
            Ok(if ok { EXIT_OK } else { EXIT_REJECTED })
        }
        Command::WriteFixtures { dir } => {
            std::fs::create_dir_all(&dir).map_err(io)?;
            let mut manifest = String::from("# file, expected outcome\n");
            for fx in standard_fixtures() {
                let file = format!("{}.m6", fx.name);
                let text = format!("# {}\n# expected: {}\n{}", fx.description, fx.expected, write_manifold(&fx.data));
                std::fs::write(dir.join(&file), text).map_err(io)?;
                manifest.push_str(&manifest_line(&file, &fx.expected));
                manifest.push('\n');
            }
            std::fs::write(dir.join("manifest.txt"), manifest).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}
