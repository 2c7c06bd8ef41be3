//! JSON and CSV output.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::study::RunRecord;

/// Significant digits of every float written to CSV.
pub const CSV_SIG_DIGITS: usize = 12;

pub const CSV_COLUMNS: [&str; 13] = [
    "problem",
    "basis",
    "n",
    "formulation",
    "solver",
    "converged",
    "iterates",
    "final_residual",
    "error_l2",
    "error_max",
    "quad_evals_assembly",
    "quad_evals_iteration",
    "wall_time_s",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub command: String,
    /// RFC 3339, UTC.
    pub timestamp: String,
}

impl Meta {
    pub fn now(command: &str) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    /// `‖u_classical − u_hadamard‖∞` over the unknowns.
    pub solution_diff_inf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub records: Vec<RunRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
}

impl Report {
    pub fn new(command: &str, records: Vec<RunRecord>) -> Self {
        Self {
            meta: Meta::now(command),
            records,
            comparison: None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_records_csv(&self.records, out)
    }
}

pub fn format_float(v: f64) -> String {
    format!("{:.*e}", CSV_SIG_DIGITS - 1, v)
}

fn opt_float(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

pub fn write_records_csv<W: Write>(records: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        let rep = &r.report;
        w.write_record([
            r.problem.clone(),
            r.basis.as_str().to_string(),
            r.n.to_string(),
            r.formulation.as_str().to_string(),
            r.solver.clone(),
            rep.converged.to_string(),
            rep.iterates.to_string(),
            format_float(rep.final_residual()),
            opt_float(r.error_l2),
            opt_float(r.error_max),
            rep.quad_evals_assembly.to_string(),
            rep.quad_evals_iteration.to_string(),
            format_float(rep.wall_time_s),
        ])?;
    }
    w.flush().map_err(|e| crate::error::BenchError::Io {
        path: "<csv>".into(),
        source: e,
    })?;
    Ok(())
}

/// Analytic Jacobian against central differences at random points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobianCheck {
    pub problem: String,
    pub basis: String,
    pub n: usize,
    /// `hadamard` or `kronecker`.
    pub form: String,
    pub points: usize,
    pub seed: u64,
    /// Largest `‖J − J_fd‖∞ / max(1, ‖J‖∞)` over all points.
    pub max_rel_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobianReport {
    pub meta: Meta,
    pub checks: Vec<JacobianCheck>,
}

impl JacobianReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["problem", "basis", "n", "form", "points", "seed", "max_rel_error", "tolerance", "passed"])?;
        for c in &self.checks {
            w.write_record([
                c.problem.clone(),
                c.basis.clone(),
                c.n.to_string(),
                c.form.clone(),
                c.points.to_string(),
                c.seed.to_string(),
                format_float(c.max_rel_error),
                format_float(c.tolerance),
                c.passed.to_string(),
            ])?;
        }
        w.flush().map_err(|e| crate::error::BenchError::Io {
            path: "<csv>".into(),
            source: e,
        })?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_keeps_twelve_digits() {
        assert_eq!(format_float(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(format_float(0.0), "0.00000000000e0");
        let v = 6.02214076e23_f64;
        let back: f64 = format_float(v).parse().unwrap();
        assert!(((back - v) / v).abs() < 1e-11);
    }

    #[test]
    fn meta_timestamp_is_rfc3339() {
        let m = Meta::now("solve");
        assert!(chrono::DateTime::parse_from_rfc3339(&m.timestamp).is_ok());
        assert_eq!(m.version, env!("CARGO_PKG_VERSION"));
    }
}
