//! Report documents and their deterministic serialization.
//!
//! JSON output has sorted keys, a fixed entry order and floats printed with
//! 17 significant digits, so identical runs produce identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::catalog::{list_cases, EmbeddingCase, Family};
use crate::error::Result;
use crate::exact::{fmt_ratio, int, rat, Rational, Surd};
use crate::solver::{
    interval_r1, lorentz_branches_r1, r2_branch_flags, roots_r2, solve_case, solve_f4_table1,
    solve_table_ii, Discrepancy, LorentzBranches, QEMParams,
};
use crate::verifier::{
    certify_case, certify_dual, structural_checks, Certificate, DEFAULT_TOL, DUAL_TOL,
};

pub const TOOL_NAME: &str = "qem";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportEntry {
    pub case: String,
    pub params: EmbeddingCase,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<IntervalRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lorentz_branches: Option<LorentzBranches>,
    pub solutions: Vec<QEMParams>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rederived_solutions: Vec<QEMParams>,
    pub certificates: Vec<Certificate>,
    pub discrepancies: Vec<Discrepancy>,
    pub structural_checks: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl ReportEntry {
    pub fn new(case: &EmbeddingCase) -> Self {
        ReportEntry {
            case: case.id.clone(),
            params: case.clone(),
            interval: None,
            lorentz_branches: None,
            solutions: Vec::new(),
            rederived_solutions: Vec::new(),
            certificates: Vec::new(),
            discrepancies: Vec::new(),
            structural_checks: BTreeMap::new(),
            notes: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass_count: usize,
    pub fail_count: usize,
    pub discrepancy_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub entries: Vec<ReportEntry>,
    pub summary: Summary,
}

impl ReportDocument {
    pub fn all_pass(&self) -> bool {
        self.summary.fail_count == 0
    }
}

/// Assembles a document; certificates and structural checks are counted as
/// passes or failures, one per certificate and one per case's check suite.
pub fn emit_report(command: Vec<String>, entries: Vec<ReportEntry>) -> ReportDocument {
    let mut summary = Summary::default();
    for e in &entries {
        for c in &e.certificates {
            if c.pass {
                summary.pass_count += 1;
            } else {
                summary.fail_count += 1;
            }
        }
        if !e.structural_checks.is_empty() {
            if e.structural_checks
                .values()
                .all(|r| *r <= crate::verifier::STRUCTURAL_TOL)
            {
                summary.pass_count += 1;
            } else {
                summary.fail_count += 1;
            }
        }
        summary.discrepancy_count += e.discrepancies.len();
    }
    ReportDocument {
        tool: TOOL_NAME.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command,
        entries,
        summary,
    }
}

/// One row of the admissibility table for an `r = 1` case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalRow {
    pub case: String,
    pub n: u64,
    pub s1: u64,
    pub c1: String,
    /// Empty strings when the interval is empty.
    pub lo: String,
    pub hi: String,
    pub empty: bool,
}

pub fn interval_row(case: &EmbeddingCase) -> Result<IntervalRow> {
    let iv = interval_r1(case)?;
    let (lo, hi) = match &iv {
        Some((l, h)) => (fmt_ratio(l), fmt_ratio(h)),
        None => (String::new(), String::new()),
    };
    Ok(IntervalRow {
        case: case.id.clone(),
        n: case.n,
        s1: case.s[0],
        c1: fmt_ratio(&case.c[0]),
        lo,
        hi,
        empty: iv.is_none(),
    })
}

/// Interval rows for every `r = 1` case up to `max_rank`.
pub fn interval_rows(max_rank: u32) -> Result<Vec<IntervalRow>> {
    list_cases(max_rank)
        .iter()
        .filter(|c| c.r == 1 && c.isotropy_irreducible())
        .map(interval_row)
        .collect()
}

/// A rational strictly between two surds, with small denominator.
fn rational_between(lo: &Surd, hi: &Surd) -> Option<Rational> {
    for den in [2i64, 3, 4, 5, 10, 20, 50, 100, 1000] {
        let mid = (lo.to_f64() + hi.to_f64()) / 2.0;
        let q = rat((mid * den as f64).round() as i64, den);
        let s = Surd::from_rational(q.clone());
        if *lo < s && s < *hi {
            return Some(q);
        }
    }
    None
}

/// Sample points for a classical case: the free parameter at 1, a
/// nontrivial Riemannian point where one exists and the two indefinite
/// branches. The first negative point is also used for duality.
fn sample_points(case: &EmbeddingCase) -> Result<(Vec<Rational>, Option<Rational>)> {
    let mut points = vec![int(1)];
    let dual;
    match case.family {
        Family::SU2_R0 => {
            points.extend([int(0), rat(-2, 3), rat(1, 2)]);
            dual = None;
        }
        Family::SU_L1L2 => {
            let (l1, l2) = (
                case.params.l1.unwrap() as i64,
                case.params.l2.unwrap() as i64,
            );
            let (x1, x2) = roots_r2(l1, l2)?;
            points.extend(rational_between(&x1, &x2));
            points.push(int(-1));
            dual = Some(int(-1));
        }
        _ => {
            let branches = lorentz_branches_r1(case)?;
            if let Some((lo, hi)) = interval_r1(case)? {
                points.extend(rational_between(
                    &Surd::from_rational(lo),
                    &Surd::from_rational(hi),
                ));
            }
            points.push(int(-1));
            let beyond = Rational::from_integer(num_bigint::BigInt::from(
                branches.x2.to_f64().ceil() as i64 + 1,
            ));
            points.push(beyond);
            dual = Some(int(-1));
        }
    }
    Ok((points, dual))
}

fn classical_entry(case: &EmbeddingCase) -> Result<ReportEntry> {
    let mut entry = ReportEntry::new(case);
    if case.r == 1 {
        entry.interval = Some(interval_row(case)?);
        entry.lorentz_branches = Some(lorentz_branches_r1(case)?);
    }
    if case.family == Family::SU_L1L2 {
        for flag in r2_branch_flags().iter().filter(|f| !f.explored) {
            entry
                .notes
                .push(format!("branch {}: {}", flag.constraint, flag.note));
        }
    }
    if !case.realizable {
        let mut points = vec![int(1)];
        if let Some((lo, hi)) = interval_r1(case)? {
            points.extend(rational_between(
                &Surd::from_rational(lo),
                &Surd::from_rational(hi),
            ));
        }
        points.push(int(-1));
        for v in points {
            entry.solutions.push(solve_case(case, &v)?);
        }
        entry.notes.push(
            "exceptional case without a matrix realization: solutions are exact but not tensor-certified".into(),
        );
        return Ok(entry);
    }
    let (points, dual) = sample_points(case)?;
    let m = 2.0;
    for v in &points {
        entry.solutions.push(solve_case(case, v)?);
        entry.certificates.push(certify_case(
            case,
            v,
            m,
            crate::solver::Branch::Riemannian,
            DEFAULT_TOL,
        )?);
    }
    if let Some(v) = dual {
        entry
            .certificates
            .push(certify_dual(case, &v, m, DUAL_TOL)?);
    }
    let checks = structural_checks(case)?;
    entry.structural_checks = checks
        .checks
        .into_iter()
        .map(|c| (c.name, c.residual))
        .collect();
    Ok(entry)
}

fn table_entry(case: &EmbeddingCase) -> Result<ReportEntry> {
    let mut entry = ReportEntry::new(case);
    let rep = if case.family == Family::F4_TABLE1 {
        solve_f4_table1()?
    } else {
        solve_table_ii(case)?
    };
    entry.solutions = rep.solutions;
    entry.rederived_solutions = rep.rederived;
    entry.discrepancies = rep.discrepancies;
    entry.notes = rep.notes;
    Ok(entry)
}

/// The entry for one case: exact solutions, certificates where a
/// realization exists, and structural checks.
pub fn case_entry(case: &EmbeddingCase) -> Result<ReportEntry> {
    if case.family.is_table() {
        table_entry(case)
    } else {
        classical_entry(case)
    }
}

/// Standing notes that apply to every report.
pub fn convention_discrepancies() -> Vec<Discrepancy> {
    vec![Discrepancy {
        id: "convention.lambda_r0".into(),
        subject: "lambda on su(2) with r = 0".into(),
        printed: "lambda = 2 - a0".into(),
        recomputed: "lambda = (2 - a0)/4".into(),
        note:
            "lambda follows the general formula 1/4 - sum (a_i - 1) s_i (1 - c_i)/(2n); signs agree"
                .into(),
    }]
}

/// Entries for every case up to `max_rank`, in catalog order.
pub fn full_report(command: Vec<String>, max_rank: u32) -> Result<ReportDocument> {
    let mut entries = Vec::new();
    for case in list_cases(max_rank) {
        let mut e = case_entry(&case)?;
        if case.family == Family::SU2_R0 {
            e.discrepancies.extend(convention_discrepancies());
        }
        entries.push(e);
    }
    Ok(emit_report(command, entries))
}

/// Serializes with sorted keys, two-space indentation and floats in
/// `{:.16e}` form. Non-finite floats become `null`.
pub fn to_deterministic_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report values are always representable");
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                let f = n.as_f64().unwrap();
                if f.is_finite() {
                    let _ = write!(out, "{f:.16e}");
                } else {
                    out.push_str("null");
                }
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, indent + 1);
                write_value(out, item, indent + 1);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let sorted: BTreeMap<&String, &Value> = map.iter().collect();
            out.push_str("{\n");
            let len = sorted.len();
            for (i, (k, val)) in sorted.into_iter().enumerate() {
                pad(out, indent + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, val, indent + 1);
                if i + 1 < len {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::CaseParams;

    #[test]
    fn empty_document() {
        let doc = emit_report(vec!["report".into()], Vec::new());
        assert_eq!(doc.summary, Summary::default());
        let json = to_deterministic_json(&doc);
        let parsed: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["summary"]["pass_count"], 0);
        assert_eq!(parsed["entries"], Value::Array(Vec::new()));
    }

    #[test]
    fn floats_have_seventeen_digits() {
        let json = to_deterministic_json(&serde_json::json!({"b": 0.1, "a": 3, "c": f64::NAN}));
        assert_eq!(
            json,
            "{\n  \"a\": 3,\n  \"b\": 1.0000000000000001e-1,\n  \"c\": null\n}\n"
        );
    }

    #[test]
    fn sp2_entry() {
        let case = EmbeddingCase::new(Family::SPK_UK, CaseParams::k(2)).unwrap();
        let e = case_entry(&case).unwrap();
        assert!(
            e.certificates.iter().all(|c| c.pass),
            "{:?}",
            e.certificates
        );
        let row = e.interval.unwrap();
        assert_eq!((row.lo.as_str(), row.hi.as_str()), ("2/7", "1/1"));
    }
}
