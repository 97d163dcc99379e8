//! Verification report: one record per (check, item, grid point, branch).

use std::collections::BTreeMap;

use serde::Serialize;

use super::config::SweepConfig;
use super::num;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Residual,
    Deviation,
    Rank,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub check: String,
    pub item: String,
    #[serde(serialize_with = "num::real_map")]
    pub point: BTreeMap<String, f64>,
    pub branch: Option<String>,
    pub metric: Metric,
    #[serde(serialize_with = "num::opt_real")]
    pub value: Option<f64>,
    /// Tolerance for residuals and deviations, expected value for ranks.
    #[serde(serialize_with = "num::opt_real")]
    pub threshold: Option<f64>,
    pub verdict: Verdict,
    pub note: Option<String>,
    #[serde(serialize_with = "num::opt_real_map")]
    pub weights: Option<BTreeMap<String, f64>>,
}

impl Record {
    pub fn new(check: &str, item: &str, point: &[(&str, f64)], branch: Option<&str>) -> Self {
        Self {
            check: check.to_owned(),
            item: item.to_owned(),
            point: point.iter().map(|(k, v)| ((*k).to_owned(), *v)).collect(),
            branch: branch.map(str::to_owned),
            metric: Metric::Residual,
            value: None,
            threshold: None,
            verdict: Verdict::Skipped,
            note: None,
            weights: None,
        }
    }

    /// Pass iff `value <= tol`.
    pub fn bounded(mut self, metric: Metric, value: f64, tol: f64) -> Self {
        self.metric = metric;
        self.value = Some(value);
        self.threshold = Some(tol);
        self.verdict = if value <= tol {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        self
    }

    /// Pass iff the rank equals the expected rank.
    pub fn rank(mut self, rank: usize, expected: usize) -> Self {
        self.metric = Metric::Rank;
        self.value = Some(rank as f64);
        self.threshold = Some(expected as f64);
        self.verdict = if rank == expected {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        self
    }

    pub fn skipped(mut self, why: impl Into<String>) -> Self {
        self.verdict = Verdict::Skipped;
        self.note = Some(why.into());
        self
    }

    pub fn failed(mut self, why: impl Into<String>) -> Self {
        self.verdict = Verdict::Fail;
        self.note = Some(why.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_weights(mut self, w: &crate::weights::WeightSet) -> Self {
        self.weights = Some(w.iter().map(|(s, v)| (s.name().to_owned(), v)).collect());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CheckSummary {
    #[serde(serialize_with = "num::opt_real")]
    pub max_residual: Option<f64>,
    #[serde(serialize_with = "num::opt_real")]
    pub max_deviation: Option<f64>,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub checks: BTreeMap<String, CheckSummary>,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub all_pass: bool,
}

impl Summary {
    pub fn of(records: &[Record]) -> Self {
        let mut s = Summary::default();
        for r in records {
            let c = s.checks.entry(r.check.clone()).or_default();
            match r.verdict {
                Verdict::Pass => c.pass += 1,
                Verdict::Fail => c.fail += 1,
                Verdict::Skipped => c.skipped += 1,
            }
            let slot = match r.metric {
                Metric::Residual => Some(&mut c.max_residual),
                Metric::Deviation => Some(&mut c.max_deviation),
                Metric::Rank => None,
            };
            if let (Some(slot), Some(v)) = (slot, r.value) {
                *slot = Some(slot.map_or(v, |m: f64| m.max(v)));
            }
        }
        for c in s.checks.values() {
            s.pass += c.pass;
            s.fail += c.fail;
            s.skipped += c.skipped;
        }
        s.all_pass = s.fail == 0;
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub engine: String,
    pub command: String,
    /// Seconds since the Unix epoch; the only field that varies between runs.
    pub generated_at: u64,
    pub config: SweepConfig,
    pub records: Vec<Record>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: &str, config: SweepConfig, records: Vec<Record>) -> Self {
        let generated_at = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        let summary = Summary::of(&records);
        Self {
            engine: format!("loopbound {}", env!("CARGO_PKG_VERSION")),
            command: command.to_owned(),
            generated_at,
            config,
            records,
            summary,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_counts() {
        let recs = vec![
            Record::new("a", "i", &[("x", 0.1)], None).bounded(Metric::Residual, 1e-12, 1e-10),
            Record::new("a", "i", &[("x", 0.2)], None).bounded(Metric::Residual, 1e-3, 1e-10),
            Record::new("b", "i", &[], Some("real")).rank(2, 2),
            Record::new("b", "i", &[], None).skipped("singular"),
        ];
        let s = Summary::of(&recs);
        assert_eq!((s.pass, s.fail, s.skipped), (2, 1, 1));
        assert!(!s.all_pass);
        assert_eq!(s.checks["a"].max_residual, Some(1e-3));
        assert_eq!(s.checks["b"].max_residual, None);
    }

    #[test]
    fn nan_residual_fails() {
        let r = Record::new("a", "i", &[], None).bounded(Metric::Residual, f64::NAN, 1.0);
        assert_eq!(r.verdict, Verdict::Fail);
    }
}
