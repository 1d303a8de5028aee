use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qem_core::exact::{fmt_ratio, fmt_rational, rational_to_f64};
use qem_core::lie::AlgebraDocument;
use qem_core::report::{
    case_entry, emit_report, full_report, interval_row, interval_rows, to_deterministic_json,
};
use qem_core::solver::{
    interval_r1, lorentz_branches_r1, solve_f4_table1, solve_table_ii, SolutionReport,
};
use qem_core::verifier::{DEFAULT_TOL, DUAL_TOL, STRUCTURAL_TOL};
use qem_core::{
    certify_case, certify_dual, dualize, list_cases, parse_rational, realize, solve_case,
    structural_checks, Branch, CaseParams, Certificate, EmbeddingCase, Error, Family, QEMParams,
    Rational,
};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

/// Exact solver and certifier for m-quasi-Einstein left-invariant metrics
/// on compact simple Lie groups.
///
/// The parameter m enters only through n0 (the length of X = n0 e0) and the
/// certification vector; it never changes which metrics are admissible.
#[derive(Parser)]
#[command(name = "qem", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List embedding cases.
    Catalog {
        /// Largest ambient rank to include.
        #[arg(long, default_value_t = 8)]
        max_rank: u32,
        #[arg(long)]
        json: bool,
    },
    /// Solve the quasi-Einstein system at a given free parameter.
    Solve {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        value: ValueArgs,
        #[arg(long)]
        json: bool,
    },
    /// Admissibility interval of a1 for a one-ideal case.
    Interval {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long)]
        json: bool,
    },
    /// Certify a solution on the explicit matrix realization.
    Certify {
        #[command(flatten)]
        case: CaseArgs,
        #[command(flatten)]
        value: ValueArgs,
        /// The parameter m > 0 (rational). Affects only n0.
        #[arg(long, allow_hyphen_values = true)]
        m: String,
        #[arg(long)]
        tol: Option<f64>,
        /// Certify on the noncompact dual instead.
        #[arg(long)]
        dual: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run the structural identity suite on a realization.
    Checks {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, default_value_t = STRUCTURAL_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Emit a machine-readable report.
    Report {
        /// Every case up to --max-rank.
        #[arg(long, conflicts_with = "case")]
        all: bool,
        /// Individual case ids (repeatable).
        #[arg(long, required_unless_present = "all")]
        case: Vec<String>,
        #[arg(long, default_value_t = 4)]
        max_rank: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a realization as an algebra document.
    Export {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long)]
        dual: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read an algebra document and summarize it.
    Import {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct CaseArgs {
    /// Family name such as SPK_UK, or a full id such as SPK_UK(k=2).
    #[arg(long = "case")]
    id: String,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    l1: Option<u32>,
    #[arg(long)]
    l2: Option<u32>,
}

impl CaseArgs {
    fn resolve(&self) -> Result<EmbeddingCase, Error> {
        if self.id.contains('(') {
            if self.k.is_some() || self.l1.is_some() || self.l2.is_some() {
                return Err(Error::InvalidParams(
                    "parameters given both in the id and as flags".into(),
                ));
            }
            return EmbeddingCase::from_id(&self.id);
        }
        let family: Family = self.id.parse()?;
        EmbeddingCase::new(
            family,
            CaseParams {
                k: self.k,
                l1: self.l1,
                l2: self.l2,
            },
        )
    }
}

#[derive(Args)]
struct ValueArgs {
    #[arg(long, group = "value", allow_hyphen_values = true)]
    a1: Option<String>,
    #[arg(long, group = "value", allow_hyphen_values = true)]
    a2: Option<String>,
    #[arg(long, group = "value", allow_hyphen_values = true)]
    p: Option<String>,
}

impl ValueArgs {
    /// The free parameter matching the number of ideals of `case`.
    fn resolve(&self, case: &EmbeddingCase) -> Result<Rational, Error> {
        let (flag, text) = match (&self.p, &self.a1, &self.a2) {
            (Some(t), None, None) => ("p", t),
            (None, Some(t), None) => ("a1", t),
            (None, None, Some(t)) => ("a2", t),
            _ => {
                return Err(Error::InvalidParams(
                    "exactly one of --p, --a1, --a2 is required".into(),
                ))
            }
        };
        let expected = match case.r {
            0 => "p",
            1 => "a1",
            _ => "a2",
        };
        if flag != expected {
            return Err(Error::InvalidParams(format!(
                "{} takes --{expected}, not --{flag}",
                case.id
            )));
        }
        parse_rational(text)
    }
}

enum Failure {
    Input(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

/// Returns whether everything that was certified passed.
fn run(cli: Cli) -> Result<bool, Failure> {
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Catalog { max_rank, json } => {
            let cases = list_cases(max_rank);
            if json {
                write!(out, "{}", to_deterministic_json(&cases))?;
            } else {
                writeln!(
                    out,
                    "{:<28} {:>4} {:<14} {:<16} realizable",
                    "id", "n", "s", "c"
                )?;
                for c in &cases {
                    let s: Vec<String> = c.s.iter().map(u64::to_string).collect();
                    let cs: Vec<String> = c.c.iter().map(fmt_ratio).collect();
                    writeln!(
                        out,
                        "{:<28} {:>4} {:<14} {:<16} {}",
                        c.id,
                        c.n,
                        s.join(","),
                        cs.join(","),
                        if c.realizable { "yes" } else { "no" }
                    )?;
                }
            }
            Ok(true)
        }
        Command::Solve { case, value, json } => {
            let case = case.resolve()?;
            if case.family.is_table() {
                let rep = if case.family == Family::F4_TABLE1 {
                    solve_f4_table1()?
                } else {
                    solve_table_ii(&case)?
                };
                if json {
                    write!(out, "{}", to_deterministic_json(&rep))?;
                } else {
                    print_table_report(&mut out, &rep)?;
                }
                return Ok(true);
            }
            let v = value.resolve(&case)?;
            let params = solve_case(&case, &v)?;
            if json {
                write!(out, "{}", to_deterministic_json(&params))?;
            } else {
                print_params(&mut out, &params)?;
            }
            Ok(true)
        }
        Command::Interval { case, json } => {
            let case = case.resolve()?;
            if case.r != 1 || !case.isotropy_irreducible() {
                return Err(Failure::Input(format!(
                    "{} is not a one-ideal case",
                    case.id
                )));
            }
            if json {
                let row = interval_row(&case)?;
                let branches = lorentz_branches_r1(&case)?;
                let doc = serde_json::json!({ "interval": row, "lorentz_branches": branches });
                write!(out, "{}", to_deterministic_json(&doc))?;
            } else {
                match interval_r1(&case)? {
                    Some((lo, hi)) => {
                        writeln!(out, "({}, {})", fmt_rational(&lo), fmt_rational(&hi))?
                    }
                    None => writeln!(out, "empty")?,
                }
            }
            Ok(true)
        }
        Command::Certify {
            case,
            value,
            m,
            tol,
            dual,
            json,
        } => {
            let case = case.resolve()?;
            let v = value.resolve(&case)?;
            let m = rational_to_f64(&parse_rational(&m)?);
            let cert = if dual {
                certify_dual(&case, &v, m, tol.unwrap_or(DUAL_TOL))?
            } else {
                certify_case(&case, &v, m, Branch::Riemannian, tol.unwrap_or(DEFAULT_TOL))?
            };
            if json {
                write!(out, "{}", to_deterministic_json(&cert))?;
            } else {
                print_certificate(&mut out, &cert)?;
            }
            Ok(cert.pass)
        }
        Command::Checks { case, tol, json } => {
            let case = case.resolve()?;
            let mut rep = structural_checks(&case)?;
            rep.tol = tol;
            for c in &mut rep.checks {
                c.pass = c.residual <= tol;
            }
            rep.pass = rep.checks.iter().all(|c| c.pass);
            if json {
                write!(out, "{}", to_deterministic_json(&rep))?;
            } else {
                for c in &rep.checks {
                    writeln!(
                        out,
                        "{:<28} {:.3e} {}",
                        c.name,
                        c.residual,
                        if c.pass { "ok" } else { "FAIL" }
                    )?;
                }
                writeln!(out, "{}", if rep.pass { "pass" } else { "fail" })?;
            }
            Ok(rep.pass)
        }
        Command::Report {
            all,
            case,
            max_rank,
            format,
            out: path,
        } => {
            let command: Vec<String> = std::env::args().skip(1).collect();
            let (text, pass) = match format {
                Format::Json => {
                    let doc = if all {
                        full_report(command, max_rank)?
                    } else {
                        let mut entries = Vec::new();
                        for id in &case {
                            entries.push(case_entry(&EmbeddingCase::from_id(id)?)?);
                        }
                        emit_report(command, entries)
                    };
                    (to_deterministic_json(&doc), doc.all_pass())
                }
                Format::Csv => {
                    let rows = if all {
                        interval_rows(max_rank)?
                    } else {
                        let mut rows = Vec::new();
                        for id in &case {
                            rows.push(interval_row(&EmbeddingCase::from_id(id)?)?);
                        }
                        rows
                    };
                    let mut w = csv::Writer::from_writer(Vec::new());
                    for row in &rows {
                        w.serialize(row).map_err(|e| Failure::Io(e.to_string()))?;
                    }
                    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
                    (String::from_utf8(bytes).expect("csv output is utf-8"), true)
                }
            };
            match path {
                Some(p) => fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(pass)
        }
        Command::Export {
            case,
            dual,
            out: path,
        } => {
            let case = case.resolve()?;
            let real = realize(&case)?;
            let alg = if dual {
                dualize(
                    &real.alg,
                    &real.dec,
                    &qem_core::Gram::identity(real.alg.dim()),
                )?
                .0
            } else {
                real.alg
            };
            let doc = AlgebraDocument::from_algebra(&alg, Some(&real.dec));
            let text = to_deterministic_json(&doc);
            match path {
                Some(p) => fs::write(p, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(true)
        }
        Command::Import { file } => {
            let text = fs::read_to_string(&file)?;
            let doc: AlgebraDocument = serde_json::from_str(&text)
                .map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
            let (alg, dec) = doc.into_parts()?;
            let killing = qem_core::lie::signature_of(&alg.killing_form())?;
            writeln!(out, "dim {}", alg.dim())?;
            writeln!(out, "jacobi_residual {:.3e}", alg.jacobi_residual())?;
            writeln!(
                out,
                "killing_signature ({}, {})",
                killing.positive, killing.negative
            )?;
            if let Some(dec) = dec {
                dec.validate(&alg)?;
                let dims = |b: &[Vec<usize>]| {
                    b.iter()
                        .map(|x| x.len().to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                };
                writeln!(out, "blocks k=({}) p=({})", dims(&dec.k), dims(&dec.p))?;
            }
            Ok(true)
        }
    }
}

fn print_params(out: &mut impl Write, p: &QEMParams) -> io::Result<()> {
    writeln!(out, "case {}", p.case)?;
    writeln!(out, "branch {}", p.branch)?;
    writeln!(out, "a = {}", p.a)?;
    for (i, a) in p.a_k.iter().enumerate() {
        writeln!(out, "a{i} = {a}")?;
    }
    writeln!(out, "p = {}", p.p)?;
    writeln!(out, "lambda = {}", p.lambda)?;
    writeln!(out, "{}", p.n0_formula)?;
    writeln!(
        out,
        "{} ({})",
        if p.trivial { "trivial" } else { "nontrivial" },
        p.kind()
    )
}

fn print_table_report(out: &mut impl Write, rep: &SolutionReport) -> io::Result<()> {
    writeln!(out, "case {}", rep.case)?;
    for s in &rep.solutions {
        let a: Vec<String> = s.a_k.iter().map(ToString::to_string).collect();
        writeln!(
            out,
            "solution (a0, a1) = ({}) p = {} lambda = {}",
            a.join(", "),
            s.p,
            s.lambda
        )?;
    }
    for s in &rep.rederived {
        let a: Vec<String> = s.a_k.iter().map(ToString::to_string).collect();
        writeln!(out, "rederived (a0, a1) = ({}) p = {}", a.join(", "), s.p)?;
    }
    for d in &rep.discrepancies {
        writeln!(
            out,
            "discrepancy {}: printed {} / recomputed {}",
            d.id, d.printed, d.recomputed
        )?;
    }
    for n in &rep.notes {
        writeln!(out, "note: {n}")?;
    }
    Ok(())
}

fn print_certificate(out: &mut impl Write, c: &Certificate) -> io::Result<()> {
    writeln!(
        out,
        "case {}{}",
        c.case,
        if c.dual { " (dual)" } else { "" }
    )?;
    writeln!(out, "m = {} n0 = {:.12}", c.m, c.n0)?;
    writeln!(out, "lambda_fit = {:.12}", c.lambda_fit)?;
    if let Some(l) = c.lambda_expected {
        writeln!(out, "lambda_expected = {l:.12}")?;
    }
    writeln!(out, "residual = {:.3e}", c.residual)?;
    writeln!(out, "killing_defect = {:.3e}", c.killing_defect)?;
    writeln!(out, "center_defect = {:.3e}", c.center_defect)?;
    writeln!(
        out,
        "signature = ({}, {})",
        c.signature.positive, c.signature.negative
    )?;
    writeln!(out, "{}", if c.pass { "pass" } else { "fail" })
}
