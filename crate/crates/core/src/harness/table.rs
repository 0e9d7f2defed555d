use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::{run_case, SimCase, SimReport};
use crate::error::{Error, Result};

const SAME_ANGLE_DEG: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComparisonKind {
    /// Same `phi_0`, different surfaces: the shallower surface needs more force.
    Vertical,
    /// Same surface, different `phi_0`: the larger tilt pushes harder.
    Horizontal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub kind: ComparisonKind,
    /// Case expected to push harder.
    pub larger: String,
    pub smaller: String,
    pub f_larger_ss: f64,
    pub f_smaller_ss: f64,
    pub passed: bool,
    /// Closed-form and simulated force increment from `smaller` to `larger`.
    pub increment_closed_form: f64,
    pub increment_sim: f64,
    /// `beta_0` shared by a horizontal pair [deg].
    pub beta0_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<SimReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableReport {
    pub rows: Vec<TableRow>,
    pub comparisons: Vec<Comparison>,
    /// Whether the horizontal force increment shrinks as `beta_0` grows,
    /// in the closed-form model and in simulation. `None` with fewer than
    /// two horizontal pairs.
    pub increment_order_closed_form: Option<bool>,
    pub increment_order_sim: Option<bool>,
}

impl TableReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.error.is_none())
            && self.comparisons.iter().all(|c| c.passed)
            && self.increment_order_closed_form != Some(false)
            && self.increment_order_sim != Some(false)
    }

    pub fn reports(&self) -> impl Iterator<Item = &SimReport> {
        self.rows.iter().filter_map(|r| r.report.as_ref())
    }
}

fn compare(kind: ComparisonKind, larger: &SimReport, smaller: &SimReport) -> Comparison {
    Comparison {
        kind,
        larger: larger.name.clone(),
        smaller: smaller.name.clone(),
        f_larger_ss: larger.f_e_ss,
        f_smaller_ss: smaller.f_e_ss,
        passed: larger.f_e_ss > smaller.f_e_ss,
        increment_closed_form: larger.f_e_d - smaller.f_e_d,
        increment_sim: larger.f_e_ss - smaller.f_e_ss,
        beta0_deg: larger.beta_deg.abs(),
    }
}

fn comparisons(reports: &[&SimReport]) -> Vec<Comparison> {
    let mut out = Vec::new();
    for (i, a) in reports.iter().enumerate() {
        for b in &reports[i + 1..] {
            let (ba, bb) = (a.beta_deg.abs(), b.beta_deg.abs());
            let (pa, pb) = (a.phi_d_deg.abs(), b.phi_d_deg.abs());
            let same_phi = (pa - pb).abs() < SAME_ANGLE_DEG;
            let same_beta = (ba - bb).abs() < SAME_ANGLE_DEG;
            if same_phi && !same_beta {
                let (l, s) = if ba < bb { (a, b) } else { (b, a) };
                out.push(compare(ComparisonKind::Vertical, l, s));
            } else if same_beta && !same_phi {
                let (l, s) = if pa > pb { (a, b) } else { (b, a) };
                out.push(compare(ComparisonKind::Horizontal, l, s));
            }
        }
    }
    out
}

fn increments_shrink(pairs: &[&Comparison], pick: impl Fn(&Comparison) -> f64) -> Option<bool> {
    if pairs.len() < 2 {
        return None;
    }
    let mut sorted = pairs.to_vec();
    sorted.sort_by(|a, b| a.beta0_deg.total_cmp(&b.beta0_deg));
    Some(sorted.windows(2).all(|w| {
        w[1].beta0_deg == w[0].beta0_deg || pick(w[1]) < pick(w[0])
    }))
}

/// Runs every case (in parallel, results in input order) and checks the
/// force orderings between them.
pub fn run_table(cases: &[SimCase]) -> Result<TableReport> {
    if cases.is_empty() {
        return Err(Error::InvalidConfig("run_table needs at least one case".into()));
    }
    let results: Vec<Result<SimReport>> = cases.par_iter().map(run_case).collect();
    let rows: Vec<TableRow> = cases
        .iter()
        .zip(results)
        .map(|(case, r)| match r {
            Ok(report) => TableRow {
                name: case.name.clone(),
                report: Some(report),
                error: None,
            },
            Err(e) => TableRow {
                name: case.name.clone(),
                report: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let ok: Vec<&SimReport> = rows.iter().filter_map(|r| r.report.as_ref()).collect();
    let comparisons = comparisons(&ok);
    let horizontal: Vec<&Comparison> = comparisons
        .iter()
        .filter(|c| c.kind == ComparisonKind::Horizontal)
        .collect();
    Ok(TableReport {
        increment_order_closed_form: increments_shrink(&horizontal, |c| c.increment_closed_form),
        increment_order_sim: increments_shrink(&horizontal, |c| c.increment_sim),
        rows,
        comparisons,
    })
}

/// Markdown summary in the layout of the reference case table.
pub fn table_markdown(table: &TableReport) -> String {
    let mut s = String::new();
    s.push_str("| case | beta (deg) | phi_d (deg) | alpha_d (deg) | f_E_d (N) | T_sum_d (N) | f_E_ss (N) | T_sum_ss (N) | f err % | settled |\n");
    s.push_str("|---|---|---|---|---|---|---|---|---|---|\n");
    for row in &table.rows {
        match (&row.report, &row.error) {
            (Some(r), _) => {
                let _ = writeln!(
                    s,
                    "| {} | {:.0} | {:.0} | {:.0} | {:.4} | {:.4} | {:.4} | {:.4} | {:.2} | {} |",
                    r.name, r.beta_deg, r.phi_d_deg, r.alpha_d_deg, r.f_e_d, r.t_sum_d, r.f_e_ss, r.t_sum_ss, r.f_e_err_pct, r.settled
                );
            }
            (None, err) => {
                let _ = writeln!(s, "| {} | FAILED: {} |||||||||", row.name, err.as_deref().unwrap_or("unknown"));
            }
        }
    }
    if !table.comparisons.is_empty() {
        s.push('\n');
        for c in &table.comparisons {
            let kind = match c.kind {
                ComparisonKind::Vertical => "vertical",
                ComparisonKind::Horizontal => "horizontal",
            };
            let _ = writeln!(
                s,
                "- {kind}: {} ({:.4} N) > {} ({:.4} N): {}",
                c.larger,
                c.f_larger_ss,
                c.smaller,
                c.f_smaller_ss,
                if c.passed { "pass" } else { "FAIL" }
            );
        }
    }
    for (label, v) in [
        ("closed-form", table.increment_order_closed_form),
        ("simulated", table.increment_order_sim),
    ] {
        if let Some(ok) = v {
            let _ = writeln!(
                s,
                "- {label} increment shrinks with beta_0: {}",
                if ok { "pass" } else { "FAIL" }
            );
        }
    }
    s
}
