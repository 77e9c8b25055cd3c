//! Margin-bearing check results.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::C64;

/// Default slack below which a margin counts as violated.
pub const TOL_REPORT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    HypothesesNotMet,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::HypothesesNotMet => "hypotheses-not-met",
        })
    }
}

/// Where a margin was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Location {
    /// Coefficient index `(n, j)`; `n = 0` when only `j` is meaningful.
    Index { n: usize, j: usize },
    /// Pair of depths compared at a common `j`.
    IndexPair { n1: usize, n2: usize, j: usize },
    Radius { r: f64 },
    Point { re: f64, im: f64 },
    PointPair { z: [f64; 2], w: [f64; 2] },
}

impl Location {
    pub fn point(z: C64) -> Self {
        Location::Point { re: z.re, im: z.im }
    }

    pub fn point_pair(z: C64, w: C64) -> Self {
        Location::PointPair {
            z: [z.re, z.im],
            w: [w.re, w.im],
        }
    }
}

/// One inequality `lhs ≤ rhs`, with `slack = rhs − lhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Margin {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<Location>,
    /// Overrides the report tolerance for this margin.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl Margin {
    /// Margin for `lhs ≤ rhs`.
    pub fn le(id: impl Into<String>, lhs: f64, rhs: f64, at: Option<Location>) -> Self {
        Self {
            id: id.into(),
            lhs,
            rhs,
            slack: rhs - lhs,
            at,
            tol: None,
        }
    }

    /// Margin for `lhs ≥ rhs`; slack is `lhs − rhs`.
    pub fn ge(id: impl Into<String>, lhs: f64, rhs: f64, at: Option<Location>) -> Self {
        Self {
            id: id.into(),
            lhs,
            rhs,
            slack: lhs - rhs,
            at,
            tol: None,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = Some(tol);
        self
    }

    fn violated(&self, default_tol: f64) -> bool {
        self.slack.is_nan() || self.slack < -self.tol.unwrap_or(default_tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub id: String,
    pub slack: f64,
    pub at: Location,
}

const MAX_WITNESSES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub tol: f64,
    pub margins: Vec<Margin>,
    pub witnesses: Vec<Witness>,
    /// Named scalar by-products (estimated constants, classification data).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    /// Pass unless some slack is below `-tol`.
    pub fn from_margins(check: impl Into<String>, margins: Vec<Margin>, tol: f64) -> Self {
        let verdict = if margins.iter().any(|m| m.violated(tol)) {
            Verdict::Fail
        } else {
            Verdict::Pass
        };
        let mut report = Self {
            check: check.into(),
            verdict,
            tol,
            margins,
            witnesses: Vec::new(),
            values: BTreeMap::new(),
            classification: None,
            notes: Vec::new(),
        };
        report.collect_witnesses();
        report
    }

    /// Report whose hypotheses failed; margins are kept for information.
    pub fn hypotheses_not_met(check: impl Into<String>, margins: Vec<Margin>, tol: f64) -> Self {
        let mut report = Self::from_margins(check, margins, tol);
        report.verdict = Verdict::HypothesesNotMet;
        report
    }

    fn collect_witnesses(&mut self) {
        let mut located: Vec<&Margin> = self.margins.iter().filter(|m| m.at.is_some()).collect();
        located.sort_by(|x, y| x.slack.total_cmp(&y.slack));
        self.witnesses = located
            .iter()
            .enumerate()
            .take_while(|(i, m)| *i == 0 || m.violated(self.tol))
            .take(MAX_WITNESSES)
            .map(|(_, m)| Witness {
                id: m.id.clone(),
                slack: m.slack,
                at: m.at.unwrap(),
            })
            .collect();
    }

    /// Re-judges the margins at a different report tolerance. A
    /// hypotheses-not-met verdict is kept.
    pub fn retolerated(mut self, tol: f64) -> Self {
        self.tol = tol;
        if self.verdict != Verdict::HypothesesNotMet {
            self.verdict = if self.margins.iter().any(|m| m.violated(tol)) {
                Verdict::Fail
            } else {
                Verdict::Pass
            };
        }
        self.collect_witnesses();
        self
    }

    pub fn min_slack(&self) -> Option<f64> {
        self.margins.iter().map(|m| m.slack).min_by(f64::total_cmp)
    }

    pub fn max_abs_slack(&self) -> Option<f64> {
        self.margins.iter().map(|m| m.slack.abs()).max_by(f64::total_cmp)
    }

    pub fn with_value(mut self, key: impl Into<String>, value: f64) -> Self {
        self.values.insert(key.into(), value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Margins whose id starts with `prefix`.
    pub fn margins_with<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Margin> + 'a {
        self.margins.iter().filter(move |m| m.id.starts_with(prefix))
    }
}
