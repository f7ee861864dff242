//! Machine-readable verification reports.
//!
//! A report is an ordered list of rows `{check, status, residual,
//! witness}`, serialized as a JSON array. Rows are appended in a fixed
//! order by the callers and floats serialize by shortest round-trip, so
//! a run with identical inputs produces byte-identical output. The
//! spectrum CSV layout is frozen as `theta,p0,p1`.

use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cgma::{CgmaReport, CheckStatus, SpectrumReport};

/// How many failure witnesses a single row carries before eliding.
const WITNESS_CAP: usize = 5;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportRow {
    pub check: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// An ordered collection of check rows.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn pass(&mut self, check: impl Into<String>, residual: f64) {
        self.rows.push(ReportRow {
            check: check.into(),
            status: "pass".into(),
            residual: Some(residual),
            witness: None,
        });
    }

    pub fn fail(
        &mut self,
        check: impl Into<String>,
        residual: Option<f64>,
        witness: impl Into<String>,
    ) {
        self.rows.push(ReportRow {
            check: check.into(),
            status: "fail".into(),
            residual,
            witness: Some(witness.into()),
        });
    }

    /// Passing row whose payload is a value rather than a residual.
    pub fn info(&mut self, check: impl Into<String>, witness: impl Into<String>) {
        self.rows.push(ReportRow {
            check: check.into(),
            status: "pass".into(),
            residual: None,
            witness: Some(witness.into()),
        });
    }

    pub fn skip(&mut self, check: impl Into<String>, reason: impl Into<String>) {
        self.rows.push(ReportRow {
            check: check.into(),
            status: "skipped".into(),
            residual: None,
            witness: Some(reason.into()),
        });
    }

    /// Pass/fail against a tolerance in one step.
    pub fn gate(&mut self, check: impl Into<String>, residual: f64, tol: f64) {
        let check = check.into();
        if residual.is_finite() && residual <= tol {
            self.pass(check, residual);
        } else {
            self.fail(
                &check,
                Some(residual),
                format!("residual exceeds {tol:.3e}"),
            );
        }
    }

    /// Append one row per condition outcome of a net check.
    pub fn append_cgma(&mut self, cgma: &CgmaReport) {
        for outcome in &cgma.outcomes {
            match &outcome.status {
                CheckStatus::Pass => self.pass(&outcome.name, outcome.residual),
                CheckStatus::Fail => {
                    let mut shown: Vec<&str> = outcome
                        .witnesses
                        .iter()
                        .take(WITNESS_CAP)
                        .map(|s| s.as_str())
                        .collect();
                    let extra = outcome.witnesses.len().saturating_sub(WITNESS_CAP);
                    let more;
                    if extra > 0 {
                        more = format!("(+{extra} more)");
                        shown.push(&more);
                    }
                    self.fail(&outcome.name, Some(outcome.residual), shown.join("; "));
                }
                CheckStatus::Skipped { reason } => self.skip(&outcome.name, reason),
            }
        }
    }

    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != "fail")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write_to(&self, path: &Path) -> io::Result<()> {
        fs::write(path, self.to_json())
    }

    /// Terminal rendering: one line per row.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let status = match r.status.as_str() {
                "pass" => "PASS",
                "fail" => "FAIL",
                _ => "SKIP",
            };
            out.push_str(&format!("{status} {}", r.check));
            if let Some(res) = r.residual {
                out.push_str(&format!(" residual={res:.3e}"));
            }
            if let Some(w) = &r.witness {
                out.push_str(&format!(" ({w})"));
            }
            out.push('\n');
        }
        out
    }
}

/// Spectrum table in the frozen `theta,p0,p1` column layout, one row per
/// grid point. `thetas` must be ascending; the report's points are
/// sorted by spatial momentum, which is monotone in theta for on-shell
/// data, so row k pairs theta_k with the k-th point.
pub fn spectrum_csv(thetas: &[f64], report: &SpectrumReport) -> String {
    assert_eq!(
        thetas.len(),
        report.points.len(),
        "one spectral point per grid rapidity"
    );
    let mut out = String::from("theta,p0,p1\n");
    for (theta, p) in thetas.iter().zip(&report.points) {
        out.push_str(&format!("{theta},{},{}\n", p.0[0], p.0[1]));
    }
    out
}
