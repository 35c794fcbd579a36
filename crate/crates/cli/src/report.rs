//! Serialization of certificate records as JSON lines and flattened CSV.

use std::io::Write;

use serde::Serialize;

use hardy_lab::invariance::Certificate;

use crate::config::Suite;
use crate::error::CliError;

/// One certificate tagged with the suite and trial that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub suite: Suite,
    pub trial: usize,
    #[serde(flatten)]
    pub certificate: Certificate,
}

/// Sorts by suite, then trial. Stable, so equal keys keep insertion order.
pub fn sort_records(records: &mut [Record]) {
    records.sort_by_key(|r| (r.suite, r.trial));
}

pub fn write_json_lines<W: Write>(mut w: W, records: &[Record]) -> Result<(), CliError> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CsvRow<'a> {
    suite: &'static str,
    trial: usize,
    pass: bool,
    statement: &'a str,
    residual: &'a str,
    value: Option<f64>,
    tolerance: Option<f64>,
}

/// One row per residual; a certificate without residuals yields one row
/// with empty residual columns.
pub fn write_csv<W: Write>(w: W, records: &[Record], header: bool) -> Result<(), CliError> {
    let mut out = csv::WriterBuilder::new().has_headers(header).from_writer(w);
    for r in records {
        let c = &r.certificate;
        let base = CsvRow {
            suite: r.suite.name(),
            trial: r.trial,
            pass: c.pass,
            statement: &c.statement,
            residual: "",
            value: None,
            tolerance: None,
        };
        if c.residuals.is_empty() {
            out.serialize(base)?;
            continue;
        }
        for (name, &value) in &c.residuals {
            out.serialize(CsvRow {
                residual: name,
                value: Some(value),
                tolerance: c.tolerances.get(name).copied(),
                ..base
            })?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Pass counts per suite, in report order.
pub fn summarize(records: &[Record]) -> Vec<(Suite, usize, usize)> {
    let mut out: Vec<(Suite, usize, usize)> = Vec::new();
    for r in records {
        match out.last_mut() {
            Some((s, passed, total)) if *s == r.suite => {
                *passed += usize::from(r.certificate.pass);
                *total += 1;
            }
            _ => out.push((r.suite, usize::from(r.certificate.pass), 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(suite: Suite, trial: usize, pass: bool) -> Record {
        let c = Certificate::new("s").bound("r", if pass { 0.0 } else { 2.0 }, 1.0).metric("m", 3.0);
        Record {
            suite,
            trial,
            certificate: c,
        }
    }

    #[test]
    fn json_flattens_certificate() {
        let mut buf = Vec::new();
        write_json_lines(&mut buf, &[rec(Suite::ThetaPsi, 3, true)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1);
        let v: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
        assert_eq!(v["suite"], "theta-psi");
        assert_eq!(v["trial"], 3);
        assert_eq!(v["pass"], true);
        assert_eq!(v["residuals"]["m"], 3.0);
    }

    #[test]
    fn csv_has_one_row_per_residual() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[rec(Suite::Hitt, 0, false)], true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "suite,trial,pass,statement,residual,value,tolerance");
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "hitt,0,false,s,m,3.0,");
        assert_eq!(lines[2], "hitt,0,false,s,r,2.0,1.0");
    }

    #[test]
    fn sorting_and_summary() {
        let mut rs = vec![
            rec(Suite::Hitt, 1, true),
            rec(Suite::Lemma1, 2, false),
            rec(Suite::Hitt, 0, false),
            rec(Suite::Lemma1, 0, true),
        ];
        sort_records(&mut rs);
        let keys: Vec<_> = rs.iter().map(|r| (r.suite, r.trial)).collect();
        assert_eq!(keys, vec![(Suite::Lemma1, 0), (Suite::Lemma1, 2), (Suite::Hitt, 0), (Suite::Hitt, 1)]);
        assert_eq!(summarize(&rs), vec![(Suite::Lemma1, 1, 2), (Suite::Hitt, 1, 2)]);
    }
}
