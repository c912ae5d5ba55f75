use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct RouteResult {
    pub route: String,
    pub value: [f64; 2],
    pub time_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<u128>,
}

impl RouteResult {
    pub fn new(route: &str, value: Complex64, time_ms: f64) -> Self {
        Self {
            route: route.into(),
            value: [value.re, value.im],
            time_ms,
            n: None,
            terms: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub a: String,
    pub b: String,
    pub rel_diff: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub config: serde_json::Value,
    pub results: Vec<RouteResult>,
    pub comparisons: Vec<Comparison>,
    pub verdict: String,
    pub residuals: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip)]
    pub tolerances: BTreeMap<String, f64>,
}

impl Report {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        Self {
            command: command.into(),
            config,
            results: Vec::new(),
            comparisons: Vec::new(),
            verdict: "pass".into(),
            residuals: BTreeMap::new(),
            notes: Vec::new(),
            tolerances: BTreeMap::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.command, self.config);
        let bench = self.results.iter().any(|r| r.n.is_some());
        if bench {
            let _ = writeln!(out, "{:<12} {:>3} {:>14} {:>12}  value", "route", "n", "terms", "time [ms]");
        }
        for r in &self.results {
            let value = format!("{:+.15e} {:+.15e}i", r.value[0], r.value[1]);
            if bench {
                let terms = r.terms.map_or("-".to_string(), |t| t.to_string());
                let _ = writeln!(
                    out,
                    "{:<12} {:>3} {:>14} {:>12.3}  {}",
                    r.route,
                    r.n.unwrap_or(0),
                    terms,
                    r.time_ms,
                    value
                );
            } else {
                let _ = writeln!(out, "{:<12} {}   ({:.3} ms)", r.route, value, r.time_ms);
            }
        }
        for c in &self.comparisons {
            let _ = writeln!(out, "{} vs {}: rel diff {:.3e}", c.a, c.b, c.rel_diff);
        }
        for (name, value) in &self.residuals {
            match self.tolerances.get(name) {
                Some(tol) => {
                    let mark = if value.is_finite() && value < tol { "PASS" } else { "FAIL" };
                    let _ = writeln!(out, "{mark} {name}: {value:.3e} (tolerance {tol:.0e})");
                }
                None => {
                    let _ = writeln!(out, "{name}: {value:.3e}");
                }
            }
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        let _ = writeln!(out, "verdict: {}", self.verdict);
        out
    }
}
