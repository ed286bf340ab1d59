//! Command reports: an ordered list of checks with verdicts, rendered as
//! text or JSON. The stable hash covers everything except timings.

use std::time::Instant;

use qcat_core::Verdict;
use serde_json::{json, Map, Value as Json};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: Json,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub checks: Vec<Check>,
    timings: Vec<(String, f64)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            checks: Vec::new(),
            timings: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, verdict: Verdict, detail: Json) {
        self.checks.push(Check {
            name: name.into(),
            verdict,
            detail,
            counterexample: None,
        });
    }

    pub fn push_with(&mut self, name: impl Into<String>, verdict: Verdict, detail: Json, counterexample: Option<String>) {
        self.checks.push(Check {
            name: name.into(),
            verdict,
            detail,
            counterexample,
        });
    }

    /// A boolean check with definitive verdict.
    pub fn expect(&mut self, name: impl Into<String>, holds: bool, detail: Json) {
        let v = if holds { Verdict::Pass } else { Verdict::Fail };
        self.push(name, v, detail);
    }

    /// Run `f`, recording its wall-clock time under `label`.
    pub fn timed<T>(&mut self, label: &str, f: impl FnOnce(&mut Report) -> T) -> T {
        let start = Instant::now();
        let out = f(self);
        self.timings.push((label.to_string(), start.elapsed().as_secs_f64()));
        out
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.timings.extend(other.timings);
    }

    pub fn verdict(&self) -> Verdict {
        self.checks.iter().fold(Verdict::Pass, |acc, c| acc.and(c.verdict))
    }

    /// 0 all pass, 1 any fail, 2 any unknown.
    pub fn exit_code(&self) -> i32 {
        match self.verdict() {
            Verdict::Fail => 1,
            Verdict::UnknownWithinBound => 2,
            _ => 0,
        }
    }

    fn count(&self, pred: impl Fn(Verdict) -> bool) -> usize {
        self.checks.iter().filter(|c| pred(c.verdict)).count()
    }

    pub fn stable_json(&self) -> Json {
        let checks: Vec<Json> = self
            .checks
            .iter()
            .map(|c| {
                let mut m = Map::new();
                m.insert("name".into(), json!(c.name));
                m.insert("verdict".into(), json!(c.verdict.as_str()));
                if !c.detail.is_null() {
                    m.insert("detail".into(), c.detail.clone());
                }
                if let Some(w) = &c.counterexample {
                    m.insert("counterexample".into(), json!(w));
                }
                Json::Object(m)
            })
            .collect();
        json!({
            "command": self.command,
            "verdict": self.verdict().as_str(),
            "summary": {
                "checks": self.checks.len(),
                "pass": self.count(|v| v == Verdict::Pass),
                "pass_within_bound": self.count(|v| v == Verdict::PassWithinBound),
                "unknown_within_bound": self.count(|v| v == Verdict::UnknownWithinBound),
                "fail": self.count(|v| v == Verdict::Fail),
            },
            "checks": checks,
        })
    }

    pub fn stable_hash(&self) -> String {
        let bytes = serde_json::to_vec(&self.stable_json()).expect("serialisable");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_json(&self) -> Json {
        let mut out = self.stable_json();
        let obj = out.as_object_mut().expect("object");
        obj.insert("stable_hash".into(), json!(self.stable_hash()));
        let timings: Map<String, Json> = self.timings.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        obj.insert("timings".into(), Json::Object(timings));
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("command: {}\n", self.command);
        for c in &self.checks {
            s.push_str(&format!("[{}] {}", c.verdict, c.name));
            if !c.detail.is_null() {
                s.push_str(&format!("  {}", render_detail(&c.detail)));
            }
            s.push('\n');
            if let Some(w) = &c.counterexample {
                s.push_str(&format!("    counterexample: {w}\n"));
            }
        }
        s.push_str(&format!(
            "summary: {} checks, {} pass, {} pass-within-bound, {} unknown-within-bound, {} fail\n",
            self.checks.len(),
            self.count(|v| v == Verdict::Pass),
            self.count(|v| v == Verdict::PassWithinBound),
            self.count(|v| v == Verdict::UnknownWithinBound),
            self.count(|v| v == Verdict::Fail),
        ));
        s.push_str(&format!("verdict: {}\n", self.verdict()));
        s.push_str(&format!("stable hash: {}\n", self.stable_hash()));
        if !self.timings.is_empty() {
            let total: f64 = self.timings.iter().map(|t| t.1).sum();
            s.push_str(&format!("time: {total:.3}s\n"));
        }
        s
    }
}

fn render_detail(d: &Json) -> String {
    match d {
        Json::Object(m) => m
            .iter()
            .map(|(k, v)| match v {
                Json::String(s) => format!("{k}={s}"),
                other => format!("{k}={other}"),
            })
            .collect::<Vec<_>>()
            .join(" "),
        Json::String(s) => s.clone(),
        other => other.to_string(),
    }
}
