//! Pass/fail reporting for certification runs.
//!
//! A report is a flat list of named residual checks. Each check records the
//! measured residual and the tolerance it was held to, so the JSON output is
//! self-describing and the text rendering needs no extra context.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificationReport {
    pub schema: u32,
    pub dimensions: Vec<usize>,
    pub t_grid: Vec<f64>,
    pub samples: usize,
    pub checks: Vec<CheckLine>,
    pub pass: bool,
}

impl CertificationReport {
    pub fn new(dimensions: Vec<usize>, t_grid: Vec<f64>, samples: usize) -> Self {
        CertificationReport {
            schema: 1,
            dimensions,
            t_grid,
            samples,
            checks: Vec::new(),
            pass: true,
        }
    }

    /// Record one residual check. A NaN residual counts as a failure.
    pub fn push(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        let pass = residual.is_finite() && residual <= tolerance;
        self.pass &= pass;
        self.checks.push(CheckLine {
            name: name.into(),
            residual,
            tolerance,
            pass,
        });
    }

    pub fn to_text(&self) -> String {
        let width = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(0)
            .max(5);
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{:<width$}  {:>12.4e}  (tol {:>8.1e})  {}\n",
                c.name,
                c.residual,
                c.tolerance,
                if c.pass { "PASS" } else { "FAIL" },
                width = width
            ));
        }
        out.push_str(&format!(
            "{:<width$}  {}\n",
            "overall",
            if self.pass { "PASS" } else { "FAIL" },
            width = width + 26
        ));
        out
    }
}
