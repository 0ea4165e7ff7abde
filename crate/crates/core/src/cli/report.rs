//! Machine-readable run reports.

use std::fmt::Write as _;
use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use super::config::ConfigDocument;
use crate::error::{Error, Result};
use crate::estimator::EstimateSeries;

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ClosedFormReport {
    pub h_a_nats: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hausdorff_dimension: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minkowski_dimension: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_over_log_m1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesEntry {
    pub n: usize,
    /// `log S_N / N`.
    pub rate: f64,
    pub fekete_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesReport {
    pub entries: Vec<SeriesEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
}

impl From<&EstimateSeries> for SeriesReport {
    fn from(s: &EstimateSeries) -> Self {
        Self {
            entries: s
                .entries
                .iter()
                .zip(&s.fekete_bounds)
                .map(|(&(n, rate), &fekete_bound)| SeriesEntry { n, rate, fekete_bound })
                .collect(),
            closed_form: s.closed_form,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DigitProbability {
    pub digit: Vec<u32>,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationalReport {
    pub value: f64,
    pub closed_form: f64,
    pub gap_to_closed_form: f64,
    pub entropy_terms: Vec<f64>,
    pub potential_term: f64,
    pub distribution: Vec<DigitProbability>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub config: ConfigDocument,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedFormReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate_series: Option<SeriesReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variational: Option<VariationalReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckOutcome>,
    pub warnings: Vec<String>,
    pub provenance: Provenance,
}

impl Report {
    pub fn new(command: &str, config: &ConfigDocument) -> Self {
        Self {
            command: command.to_string(),
            closed_form: None,
            estimate_series: None,
            variational: None,
            checks: Vec::new(),
            warnings: Vec::new(),
            provenance: Provenance {
                tool: "wtp".to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                config: config.clone(),
            },
        }
    }

    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn numbers(&self) -> Vec<(&'static str, f64)> {
        let mut out = Vec::new();
        if let Some(c) = &self.closed_form {
            out.push(("closed_form.h_a_nats", c.h_a_nats));
            for (name, v) in [
                ("closed_form.hausdorff_dimension", c.hausdorff_dimension),
                ("closed_form.minkowski_dimension", c.minkowski_dimension),
                ("closed_form.z0", c.z0),
                ("closed_form.bracket_value", c.bracket_value),
                ("closed_form.h_over_log_m1", c.h_over_log_m1),
            ] {
                out.extend(v.map(|v| (name, v)));
            }
        }
        if let Some(s) = &self.estimate_series {
            for e in &s.entries {
                out.push(("estimate_series.rate", e.rate));
                out.push(("estimate_series.fekete_bound", e.fekete_bound));
            }
            out.extend(s.closed_form.map(|v| ("estimate_series.closed_form", v)));
        }
        if let Some(v) = &self.variational {
            out.push(("variational.value", v.value));
            out.push(("variational.gap_to_closed_form", v.gap_to_closed_form));
            out.extend(v.entropy_terms.iter().map(|&x| ("variational.entropy_terms", x)));
            out.extend(v.distribution.iter().map(|d| ("variational.distribution", d.probability)));
        }
        out
    }

    /// Every numeric field must be finite.
    pub fn validate(&self) -> Result<()> {
        match self.numbers().into_iter().find(|(_, v)| !v.is_finite()) {
            Some((name, v)) => Err(Error::Validation(format!("report field {name} is {v}"))),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> String {
        to_json_string(self)
    }

    /// Aligned plain-text rendering.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        if let Some(c) = &self.closed_form {
            let mut rows = vec![("h_a_nats", c.h_a_nats)];
            for (name, v) in [
                ("hausdorff_dimension", c.hausdorff_dimension),
                ("minkowski_dimension", c.minkowski_dimension),
                ("z0", c.z0),
                ("bracket_value", c.bracket_value),
                ("h_over_log_m1", c.h_over_log_m1),
            ] {
                rows.extend(v.map(|v| (name, v)));
            }
            let _ = writeln!(out, "\nclosed form");
            for (name, v) in rows {
                let _ = writeln!(out, "  {name:<20} {v:>22.16}");
            }
        }
        if let Some(s) = &self.estimate_series {
            let _ = writeln!(out, "\nestimate series");
            let _ = writeln!(out, "  {:>4}  {:>22}  {:>22}  {:>12}", "N", "log S_N / N", "fekete bound", "gap");
            for e in &s.entries {
                let gap = s
                    .closed_form
                    .map_or_else(|| "-".to_string(), |c| format!("{:.4e}", e.rate - c));
                let _ = writeln!(out, "  {:>4}  {:>22.16}  {:>22.16}  {:>12}", e.n, e.rate, e.fekete_bound, gap);
            }
            if let Some(c) = s.closed_form {
                let _ = writeln!(out, "  closed form {c:.16}");
            }
        }
        if let Some(v) = &self.variational {
            let _ = writeln!(out, "\nvariational");
            let _ = writeln!(out, "  {:<20} {:>22.16}", "value", v.value);
            let _ = writeln!(out, "  {:<20} {:>22.16}", "closed_form", v.closed_form);
            let _ = writeln!(out, "  {:<20} {:>22.4e}", "gap_to_closed_form", v.gap_to_closed_form);
            for d in &v.distribution {
                let _ = writeln!(out, "  {:<20} {:>22.16}", format!("{:?}", d.digit), d.probability);
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "\nchecks");
            let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &self.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "  {:<width$}  {status}  {}", c.name, c.detail);
            }
        }
        if !self.warnings.is_empty() {
            let _ = writeln!(out, "\nwarnings");
            for w in &self.warnings {
                let _ = writeln!(out, "  - {w}");
            }
        }
        out
    }
}

/// Pretty JSON with every float written to 17 significant digits.
pub struct PreciseFormatter<'a>(PrettyFormatter<'a>);

impl Default for PreciseFormatter<'_> {
    fn default() -> Self {
        Self(PrettyFormatter::new())
    }
}

impl Formatter for PreciseFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, PreciseFormatter::default());
    value.serialize(&mut ser).expect("reports serialize");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        let xs: [f64; 6] = [1.3496838201955774, 0.1 + 0.2, 1e-300, 12345.678, -2.5, 0.0];
        let text = to_json_string(&xs);
        let back: Vec<f64> = serde_json::from_str(&text).unwrap();
        for (a, b) in xs.iter().zip(&back) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert!(text.contains("1.3496838201955774e0"));
    }
}
