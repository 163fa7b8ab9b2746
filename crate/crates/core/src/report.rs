//! Metric records produced by every check.

use std::collections::BTreeMap;

/// How a metric's value is compared against its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// Pass iff `value < tolerance`.
    Below,
    /// Pass iff `value > tolerance`.
    Above,
    /// Pass iff the value is finite; the tolerance is informational.
    Finite,
    /// Pass fixed by the producer (e.g. a structural flag).
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub provenance: String,
    pub comparison: Comparison,
}

impl Metric {
    /// Passes iff `value < tolerance` (and is finite).
    pub fn upper(name: impl Into<String>, value: f64, tolerance: f64, provenance: impl Into<String>) -> Self {
        Metric {
            name: name.into(),
            value,
            tolerance,
            pass: value.is_finite() && value < tolerance,
            provenance: provenance.into(),
            comparison: Comparison::Below,
        }
    }

    /// Passes iff `value > tolerance` (and is finite).
    pub fn lower(name: impl Into<String>, value: f64, tolerance: f64, provenance: impl Into<String>) -> Self {
        Metric {
            name: name.into(),
            value,
            tolerance,
            pass: value.is_finite() && value > tolerance,
            provenance: provenance.into(),
            comparison: Comparison::Above,
        }
    }

    /// Passes iff `value` is finite; the tolerance is recorded as `f64::MAX`.
    pub fn finite(name: impl Into<String>, value: f64, provenance: impl Into<String>) -> Self {
        Metric {
            name: name.into(),
            value,
            tolerance: f64::MAX,
            pass: value.is_finite(),
            provenance: provenance.into(),
            comparison: Comparison::Finite,
        }
    }

    /// A boolean check encoded as `1.0` (true) / `0.0` (false); passes iff true.
    pub fn flag(name: impl Into<String>, ok: bool, provenance: impl Into<String>) -> Self {
        Metric {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            tolerance: 1.0,
            pass: ok,
            provenance: provenance.into(),
            comparison: Comparison::Fixed,
        }
    }

    /// A reported quantity that never fails.
    pub fn info(name: impl Into<String>, value: f64, provenance: impl Into<String>) -> Self {
        Metric {
            name: name.into(),
            value,
            tolerance: 0.0,
            pass: true,
            provenance: provenance.into(),
            comparison: Comparison::Fixed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub suite: String,
    pub params: BTreeMap<String, f64>,
    pub metrics: Vec<Metric>,
    pub wall_time_s: f64,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { suite: suite.into(), ..Default::default() }
    }

    pub fn param(mut self, key: impl Into<String>, value: f64) -> Self {
        self.params.insert(key.into(), value);
        self
    }

    pub fn push(&mut self, m: Metric) {
        self.metrics.push(m);
    }

    /// Appends another report's metrics, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut m in other.metrics {
            m.name = format!("{prefix}{}", m.name);
            self.metrics.push(m);
        }
        for (k, v) in other.params {
            self.params.entry(k).or_insert(v);
        }
    }

    pub fn all_pass(&self) -> bool {
        self.metrics.iter().all(|m| m.pass)
    }

    pub fn metric(&self, name: &str) -> Option<&Metric> {
        self.metrics.iter().find(|m| m.name == name)
    }

    pub fn failures(&self) -> Vec<&Metric> {
        self.metrics.iter().filter(|m| !m.pass).collect()
    }
}
