//! Checkers for the combinatorial structure of (punctured) Preparata codes:
//! designs, neighbourhood profiles, counting inequalities, constant-weight
//! maxima and the numeric scans used in the weight-preservation argument.

mod cwmax;
mod design;
mod profile;
mod scan;
mod structure;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

pub use cwmax::{max_constant_weight, CWMAX_CAP};
pub use design::{blocks_of_weight, check_corollary1, check_design, corollary1_on_blocks};
pub use profile::{neighbor_profile, neighbor_profile_with_oracle, MembershipOracle, NeighborProfile};
pub use scan::{critical_scan, scan_row, ScanRow};
pub use structure::{audit_disjointness, check_counting_extended, check_counting_punctured, check_structure};

/// Counterexamples kept per report; the total is still counted.
pub const MAX_WITNESSES: usize = 10;

/// Which family a code belongs to; fixes d and the coordinate-tuple size
/// used by the structure audit (pairs for punctured, triples for extended).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Punctured,
    Extended,
}

impl Mode {
    pub fn distance(self) -> usize {
        match self {
            Mode::Punctured => 5,
            Mode::Extended => 6,
        }
    }

    /// Size of the coordinate tuples (m, l) or (m, l, k).
    pub fn tuple_size(self) -> usize {
        match self {
            Mode::Punctured => 2,
            Mode::Extended => 3,
        }
    }

    /// Weight drops k for the downward sets D(i, i-k).
    pub fn down_steps(self) -> [usize; 3] {
        match self {
            Mode::Punctured => [1, 3, 5],
            Mode::Extended => [2, 4, 6],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Punctured => "punctured",
            Mode::Extended => "extended",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Mode, String> {
        match s {
            "punctured" => Ok(Mode::Punctured),
            "extended" => Ok(Mode::Extended),
            _ => Err(format!("unknown suite {s:?}, expected punctured or extended")),
        }
    }
}

/// Outcome of one check, serialised as a JSON object.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<Value>,
    pub counterexamples: Vec<Value>,
    /// Total number of violations, of which at most [`MAX_WITNESSES`] are listed.
    pub violations: usize,
    pub timing_ms: f64,
}

impl CheckReport {
    pub(crate) fn new(check: &str) -> CheckReport {
        CheckReport {
            check: check.to_string(),
            params: BTreeMap::new(),
            pass: true,
            lambda: None,
            bounds: None,
            counts: None,
            counterexamples: Vec::new(),
            violations: 0,
            timing_ms: 0.0,
        }
    }

    pub(crate) fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// Records a violation and marks the report failed.
    pub(crate) fn violation(&mut self, witness: Value) {
        self.pass = false;
        self.violations += 1;
        if self.counterexamples.len() < MAX_WITNESSES {
            self.counterexamples.push(witness);
        }
    }

    /// Records a numeric relation that did not hold, with no single witness.
    pub(crate) fn fail_relation(&mut self, what: impl Into<String>) {
        self.violation(serde_json::json!({ "relation": what.into() }));
    }

    pub(crate) fn timed(mut self, start: Instant) -> Self {
        self.timing_ms = start.elapsed().as_secs_f64() * 1e3;
        self
    }

    /// Adds violations found elsewhere, keeping the witness cap.
    pub(crate) fn absorb(&mut self, witnesses: Vec<Value>, count: usize) {
        if count > 0 {
            self.pass = false;
        }
        self.violations += count;
        let room = MAX_WITNESSES.saturating_sub(self.counterexamples.len());
        self.counterexamples.extend(witnesses.into_iter().take(room));
    }
}

/// Exact binomial coefficient for small arguments.
pub(crate) fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, j| acc * (n - j) / (j + 1))
}

/// All `k`-subsets of `0..n` as bit masks, in colex order.
pub(crate) fn subsets(n: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().fold(0u64, |m, &i| m | 1 << i));
        let mut j = k;
        while j > 0 && idx[j - 1] == n - k + j - 1 {
            j -= 1;
        }
        if j == 0 {
            return out;
        }
        idx[j - 1] += 1;
        for q in j..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}
