//! Report types for verification sweeps.
//!
//! Two row shapes are emitted: schedule-oriented check reports
//! (`level,p_n,q_n,metric,value,pass`) and convergence reports
//! (`target,metric,level,n,value,threshold,pass`). Values are printed in
//! scientific notation with 17 significant digits; pass flags are
//! recomputable from the printed values and thresholds.

use serde_json::{json, Value};

use crate::decimal::to_sci_string;
use crate::scalar::Real;

const SIG: usize = 17;

fn fmt(v: &Real) -> String {
    to_sci_string(v, SIG)
}

/// One row of a schedule-oriented verification report.
#[derive(Clone, Debug)]
pub struct CheckRow {
    pub level: Option<usize>,
    pub p_n: Option<usize>,
    pub q_n: Option<usize>,
    pub metric: String,
    pub value: Option<Real>,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: String,
    pub rows: Vec<CheckRow>,
    pub pass: bool,
}

impl CheckReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("level,p_n,q_n,metric,value,pass\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.level.map_or(String::new(), |v| v.to_string()),
                r.p_n.map_or(String::new(), |v| v.to_string()),
                r.q_n.map_or(String::new(), |v| v.to_string()),
                r.metric,
                r.value.as_ref().map_or(String::new(), fmt),
                r.pass,
            ));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "pass": self.pass,
            "rows": self.rows.iter().map(|r| json!({
                "level": r.level,
                "p_n": r.p_n,
                "q_n": r.q_n,
                "metric": r.metric,
                "value": r.value.as_ref().map(fmt),
                "pass": r.pass,
            })).collect::<Vec<_>>(),
        })
    }
}

/// One row of a convergence report.
#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub target: String,
    pub metric: String,
    pub level: Option<usize>,
    pub n: usize,
    pub value: Real,
    pub threshold: Option<Real>,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub target: String,
    pub precision_bits: u32,
    pub schedule: Option<String>,
    pub rows: Vec<ConvergenceRow>,
    pub pass: bool,
}

impl ConvergenceReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("target,metric,level,n,value,threshold,pass\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.target,
                r.metric,
                r.level.map_or(String::new(), |v| v.to_string()),
                r.n,
                fmt(&r.value),
                r.threshold.as_ref().map_or(String::new(), fmt),
                r.pass,
            ));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "target": self.target,
            "precision_bits": self.precision_bits,
            "schedule": self.schedule,
            "pass": self.pass,
            "rows": self.rows.iter().map(|r| json!({
                "target": r.target,
                "metric": r.metric,
                "level": r.level,
                "n": r.n,
                "value": fmt(&r.value),
                "threshold": r.threshold.as_ref().map(fmt),
                "pass": r.pass,
            })).collect::<Vec<_>>(),
        })
    }

    /// Plot data: one `x,y` pair per row (x = partial-sum index, y = value).
    pub fn to_plot_csv(&self) -> String {
        let mut out = String::from("n,value\n");
        for r in &self.rows {
            out.push_str(&format!("{},{}\n", r.n, fmt(&r.value)));
        }
        out
    }
}

/// Pass rule for a per-level sup-error curve: strictly decreasing over the
/// levels from `monotone_from_level` (1-based) on, and the final value at or
/// below `threshold`. A value already at or below the threshold never fails
/// the strictness check (plateaus at zero are converged, not stalled).
/// Returns the overall flag and one flag per row.
pub fn sup_curve_pass(values: &[Real], monotone_from_level: usize, threshold: &Real) -> (bool, Vec<bool>) {
    let mut flags = Vec::with_capacity(values.len());
    for (i, v) in values.iter().enumerate() {
        let level = i + 1;
        let mut ok = true;
        if level > monotone_from_level && i > 0 {
            ok &= v < &values[i - 1] || v <= threshold;
        }
        if i + 1 == values.len() {
            ok &= v <= threshold;
        }
        flags.push(ok);
    }
    (flags.iter().all(|&f| f), flags)
}
