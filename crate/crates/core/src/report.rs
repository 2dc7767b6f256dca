//! Rendering a [`VerdictReport`] as a table, CSV or JSON.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::runner::VerdictReport;

/// Column order for parameters in CSV and table output.
pub const PARAM_ORDER: [&str; 9] = ["nu", "m", "l", "x", "y", "z", "w", "t", "theta"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::invalid(format!(
                "unknown format `{s}` (table, csv, json)"
            ))),
        }
    }
}

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn used_params(report: &VerdictReport) -> Vec<&'static str> {
    PARAM_ORDER
        .into_iter()
        .filter(|p| {
            report
                .records
                .iter()
                .any(|r| r.record.case.params.contains_key(*p))
        })
        .collect()
}

pub fn to_csv(report: &VerdictReport) -> String {
    let params = used_params(report);
    let mut out = String::from("rule_id");
    for p in &params {
        out.push(',');
        out.push_str(p);
    }
    out.push_str(",lhs,rhs,abs_err,rel_err,verdict\n");
    for r in &report.records {
        let rec = &r.record;
        out.push_str(rec.case.rule_id.name());
        for p in &params {
            out.push(',');
            if let Some(v) = rec.case.params.get(*p) {
                out.push_str(&float(*v));
            }
        }
        let _ = writeln!(
            out,
            ",{},{},{},{},{}",
            rec.lhs,
            rec.rhs,
            float(rec.abs_err),
            float(rec.rel_err),
            rec.verdict
        );
    }
    out
}

pub fn to_json(report: &VerdictReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

pub fn to_table(report: &VerdictReport) -> String {
    let header = [
        "rule", "params", "lhs", "rhs", "abs_err", "rel_err", "verdict",
    ];
    let rows: Vec<[String; 7]> = report
        .records
        .iter()
        .map(|r| {
            let rec = &r.record;
            let params = params_text(&rec.case);
            let verdict = if r.report_only {
                format!("{} (report-only)", rec.verdict)
            } else {
                rec.verdict.to_string()
            };
            [
                rec.case.rule_id.to_string(),
                params,
                format!("{:.12e}", rec.lhs.re()) + &imag(rec.lhs.im()),
                format!("{:.12e}", rec.rhs.re()) + &imag(rec.rhs.im()),
                format!("{:.3e}", rec.abs_err),
                format!("{:.3e}", rec.rel_err),
                verdict,
            ]
        })
        .collect();
    let mut width = header.map(str::len);
    for row in &rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &[&str]| {
        let joined: Vec<String> = cells
            .iter()
            .zip(width)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", joined.join("  ").trim_end());
    };
    line(&mut out, &header);
    for row in &rows {
        line(&mut out, &row.each_ref().map(String::as_str));
    }
    out.push('\n');
    for (rule, s) in &report.summary {
        let _ = writeln!(
            out,
            "{:<18} verified {:>4}  discrepant {:>4}  inconclusive {:>4}  max_abs_err {:.3e}  max_rel_err {:.3e}",
            rule.name(),
            s.verified,
            s.discrepant,
            s.inconclusive,
            s.max_abs_err, s.max_rel_err
        );
    }
    let _ = writeln!(
        out,
        "{} cases in {:.2}s",
        report.records.len(),
        report.wall_time
    );
    for r in report
        .records
        .iter()
        .filter(|r| !r.record.extras.is_empty() || r.record.diagnostic.is_some())
    {
        let rec = &r.record;
        if let Some(d) = &rec.diagnostic {
            let _ = writeln!(
                out,
                "note: {} {}: {d}",
                rec.case.rule_id,
                params_text(&rec.case)
            );
        }
        for c in &rec.extras {
            let _ = writeln!(
                out,
                "note: {} {}: {} = {} abs_err {:.3e} {}{}",
                rec.case.rule_id,
                params_text(&rec.case),
                c.label,
                c.value,
                c.abs_err,
                c.verdict,
                if c.report_only { " (report-only)" } else { "" }
            );
        }
    }
    out
}

fn params_text(case: &crate::rules::RuleCase) -> String {
    case.rule_id
        .params()
        .iter()
        .map(|p| format!("{p}={}", case.params.get(*p).copied().unwrap_or(f64::NAN)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn imag(im: f64) -> String {
    if im == 0.0 {
        String::new()
    } else {
        format!("{im:+.12e}i")
    }
}

pub fn render(report: &VerdictReport, format: Format) -> Result<String> {
    Ok(match format {
        Format::Table => to_table(report),
        Format::Csv => to_csv(report),
        Format::Json => to_json(report)?,
    })
}

/// Write the report to `path`, or standard output when `None`.
pub fn emit_report(report: &VerdictReport, format: Format, path: Option<&Path>) -> Result<()> {
    let text = render(report, format)?;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            use std::io::Write;
            match std::io::stdout().write_all(text.as_bytes()) {
                // A reader that stopped early is not an error.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r.map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                }),
            }
        }
    }
}
