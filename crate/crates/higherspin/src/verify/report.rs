//! Machine-readable verification report.
//!
//! Schema: `{version, mode, grid, checks: [{name, suite, anchor, params,
//! status, witness?, note?, millis, ...}]}`. Records are sorted by check name
//! and then parameters, so two runs with the same configuration and seed
//! produce byte-identical reports apart from the timing fields.

use serde::Serialize;

/// Outcome of one check at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// Minimal failure witness: the first test function whose residual did not
/// canonicalize to zero, with that residual.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub input: String,
    pub residual: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamPoint {
    pub m: u32,
    pub k: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub suite: String,
    /// The identity the check decides, rendered as a formula.
    pub anchor: String,
    pub params: ParamPoint,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Number of test functions exercised.
    pub tested: usize,
    /// The x-degree swept, for operator identities.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_degree: Option<u32>,
    /// Whether the sweep decides operator equality outright (degree at least
    /// the x-order of the residual expression) or samples it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decides_operator_equality: Option<bool>,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridSpec {
    pub ms: Vec<u32>,
    pub ks: Vec<u32>,
    pub max_x_degree: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub version: String,
    pub mode: String,
    pub grid: GridSpec,
    pub suites: Vec<String>,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let mut pass = 0;
        let mut fail = 0;
        let mut skip = 0;
        for c in &self.checks {
            match c.status {
                Status::Pass => pass += 1,
                Status::Fail => fail += 1,
                Status::Skip => skip += 1,
            }
        }
        (pass, fail, skip)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per record for terminal output.
    pub fn render_lines(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skip => "skip",
            };
            out.push_str(&format!(
                "{status}  {name}  (m={m}, k={k})  {millis} ms",
                name = c.name,
                m = c.params.m,
                k = c.params.k,
                millis = c.millis
            ));
            if let Some(note) = &c.note {
                out.push_str(&format!("  [{note}]"));
            }
            out.push('\n');
        }
        let (p, f, s) = self.counts();
        out.push_str(&format!("{p} passed, {f} failed, {s} skipped\n"));
        out
    }
}
