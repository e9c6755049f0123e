//! Run reports: JSON is canonical, CSV is a flat projection of it.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// A named check. `lhs relation rhs` is the inequality or identity that was tested.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub relation: String,
    pub lhs: String,
    pub rhs: String,
    /// Present only on failure: the offending input and anything needed to re-check it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl Verdict {
    pub fn new(name: impl Into<String>, pass: bool, lhs: impl Display, relation: &str, rhs: impl Display) -> Self {
        Verdict { name: name.into(), pass, relation: relation.into(), lhs: lhs.to_string(), rhs: rhs.to_string(), counterexample: None }
    }

    /// A yes/no property with no numeric sides.
    pub fn holds(name: impl Into<String>, pass: bool) -> Self {
        Verdict::new(name, pass, pass, "==", true)
    }

    pub fn or_counterexample(mut self, witness: impl FnOnce() -> Value) -> Self {
        if !self.pass {
            self.counterexample = Some(witness());
        }
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Metric {
    pub name: String,
    pub value: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub config: Value,
    pub seed: u64,
    pub verdicts: Vec<Verdict>,
    pub metrics: Vec<Metric>,
    pub result: Value,
    pub timings: BTreeMap<String, f64>,
}

/// What a command hands back before the harness adds config, seed and timings.
#[derive(Default)]
pub struct Outcome {
    pub verdicts: Vec<Verdict>,
    pub metrics: Vec<Metric>,
    pub result: Value,
}

impl Outcome {
    pub fn verdict(&mut self, v: Verdict) {
        self.verdicts.push(v);
    }

    pub fn metric(&mut self, name: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("metrics serialize");
        self.metrics.push(Metric { name: name.into(), value });
    }

    pub fn result(&mut self, value: impl Serialize) {
        self.result = serde_json::to_value(value).expect("results serialize");
    }
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)
    }

    /// Rows `kind,name,value,pass` in a fixed order: verdicts, metrics, timings.
    pub fn write_csv(&self, out: &mut dyn Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["kind", "name", "value", "pass"])?;
        for v in &self.verdicts {
            let value = format!("{} {} {}", v.lhs, v.relation, v.rhs);
            w.write_record(["verdict", &v.name, &value, if v.pass { "true" } else { "false" }])?;
        }
        for m in &self.metrics {
            let value = match &m.value {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            w.write_record(["metric", &m.name, &value, ""])?;
        }
        for (k, t) in &self.timings {
            w.write_record(["timing", k, &format!("{t:.6}"), ""])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunReport {
        let mut o = Outcome::default();
        o.verdict(Verdict::new("bound", false, 4, "<=", 3).or_counterexample(|| serde_json::json!({"set": ["0", "1/2"]})));
        o.verdict(Verdict::holds("ok", true).or_counterexample(|| Value::Null));
        o.metric("size, total", 7);
        RunReport {
            schema_version: SCHEMA_VERSION,
            command: "gaps".into(),
            config: Value::Null,
            seed: 1,
            verdicts: o.verdicts,
            metrics: o.metrics,
            result: o.result,
            timings: BTreeMap::from([("compute_secs".to_string(), 0.5)]),
        }
    }

    #[test]
    fn counterexample_only_on_failure() {
        let r = sample();
        assert!(!r.passed());
        assert!(r.verdicts[0].counterexample.is_some());
        assert!(r.verdicts[1].counterexample.is_none());
    }

    #[test]
    fn csv_projection() {
        let mut buf = Vec::new();
        sample().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "kind,name,value,pass");
        assert_eq!(lines[1], "verdict,bound,4 <= 3,false");
        assert_eq!(lines[3], "metric,\"size, total\",7,");
        assert!(lines[4].starts_with("timing,compute_secs,0.5"));
    }
}
