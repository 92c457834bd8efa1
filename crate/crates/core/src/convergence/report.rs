use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LatticeError, Result};
use crate::json::format_float;

/// Desk-scale rendering of "→ 0": the last `window` values must all be
/// below `tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    pub tol: f64,
    pub window: usize,
}

impl ToleranceSpec {
    pub const DEFAULT_TOL: f64 = 1e-6;

    pub fn new(tol: f64, window: usize) -> Result<Self> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(LatticeError::InvalidTolerance(format!(
                "tol = {tol} must be > 0"
            )));
        }
        if window == 0 {
            return Err(LatticeError::InvalidTolerance("window must be >= 1".into()));
        }
        Ok(ToleranceSpec { tol, window })
    }

    /// `tol = 1e-6`, window a quarter of the sequence.
    pub fn default_for(len: usize) -> Self {
        ToleranceSpec {
            tol: Self::DEFAULT_TOL,
            window: (len / 4).max(1),
        }
    }

    pub fn check(&self, len: usize) -> Result<()> {
        Self::new(self.tol, self.window)?;
        if self.window > len {
            return Err(LatticeError::InvalidTolerance(format!(
                "window {} exceeds sequence length {len}",
                self.window
            )));
        }
        Ok(())
    }

    /// First 1-based index of the tail window.
    pub fn tail_start(&self, len: usize) -> usize {
        len - self.window + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "NULL")]
    Null,
    #[serde(rename = "NOT_NULL")]
    NotNull,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Null => "NULL",
            Verdict::NotNull => "NOT_NULL",
        })
    }
}

/// First tail index that breaks the tolerance, and the test vector or
/// functional responsible when there is a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub index: usize,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Tail behaviour of one coordinate or cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellStat {
    pub cell: String,
    pub limsup: f64,
    pub liminf: f64,
}

/// `m` with `‖u − u ∧ m·e‖ < eps`, smallest such.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QipSelection {
    pub m: u64,
    pub remainder: f64,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub quantity: String,
    pub values: Vec<f64>,
    pub verdict: Verdict,
    pub tol: f64,
    pub window: usize,
    pub horizon: usize,
    pub witness: Option<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coord_horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell_level: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells: Option<Vec<CellStat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qip: Option<QipSelection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TailReport {
    /// Builds the report and its verdict from per-index values.
    ///
    /// `culprit(n)` names the test responsible for `values[n-1]`, if any.
    pub fn from_values(
        quantity: impl Into<String>,
        values: Vec<f64>,
        ts: &ToleranceSpec,
        culprit: impl Fn(usize) -> Option<(usize, String)>,
    ) -> Result<Self> {
        let len = values.len();
        ts.check(len)?;
        let start = ts.tail_start(len);
        let violation = (start..=len).find(|&n| !(values[n - 1] < ts.tol));
        let witness = violation.map(|n| {
            let (test, label) = match culprit(n) {
                Some((i, l)) => (Some(i), Some(l)),
                None => (None, None),
            };
            Witness {
                index: n,
                value: values[n - 1],
                test,
                label,
            }
        });
        Ok(TailReport {
            quantity: quantity.into(),
            verdict: if witness.is_some() {
                Verdict::NotNull
            } else {
                Verdict::Null
            },
            values,
            tol: ts.tol,
            window: ts.window,
            horizon: len,
            witness,
            family: None,
            coord_horizon: None,
            cell_level: None,
            cells: None,
            qip: None,
            note: None,
        })
    }

    pub fn is_null(&self) -> bool {
        self.verdict == Verdict::Null
    }

    /// Values on the tail window.
    pub fn tail(&self) -> &[f64] {
        &self.values[self.values.len() - self.window..]
    }

    /// `index,value` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,value\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{},{}\n", i + 1, format_float(*v)));
        }
        out
    }
}
