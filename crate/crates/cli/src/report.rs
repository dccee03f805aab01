//! JSON and CSV output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::run::{Context, TaskReport};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub n_r: usize,
    pub n_theta: usize,
    pub n_phi: usize,
    pub k_min: f64,
    pub k_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub generator: String,
    /// Seconds since the Unix epoch; the only field that varies between
    /// identical runs.
    pub timestamp: u64,
    pub scenario: String,
    pub seed: u64,
    pub grid_scale: f64,
    pub grid: GridInfo,
    pub kernel: String,
    pub pass: bool,
    pub tasks: BTreeMap<String, TaskReport>,
}

impl Report {
    pub fn new(
        scenario: &str,
        ctx: &Context,
        grid_scale: f64,
        tasks: BTreeMap<String, TaskReport>,
    ) -> Self {
        let g = ctx.grid_spec;
        Self {
            schema: SCHEMA,
            generator: format!("emcov {}", env!("CARGO_PKG_VERSION")),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            scenario: scenario.to_string(),
            seed: ctx.seed,
            grid_scale,
            grid: GridInfo {
                n_r: g.n_r,
                n_theta: g.n_theta,
                n_phi: g.n_phi,
                k_min: g.k_min,
                k_max: g.k_max,
            },
            kernel: ctx.kernel.name().to_string(),
            pass: tasks.values().all(|t| t.pass),
            tasks,
        }
    }

    /// Text summary, one line per task.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} (schema {}, seed {}, kernel {}, grid {}x{}x{} on [{}, {}])",
            self.scenario,
            self.schema,
            self.seed,
            self.kernel,
            self.grid.n_r,
            self.grid.n_theta,
            self.grid.n_phi,
            self.grid.k_min,
            self.grid.k_max
        );
        for (name, t) in &self.tasks {
            let status = if t.pass { "PASS" } else { "FAIL" };
            let tol = t
                .tolerance
                .map(|x| format!(" tol {x:e}"))
                .unwrap_or_default();
            let _ = write!(out, "  {status}  {name} [{}]{tol}", t.op);
            if let Some(err) = &t.error {
                let _ = write!(out, "  error: {err}");
            } else {
                let fields: Vec<String> = t
                    .outputs
                    .iter()
                    .filter(|(_, v)| !v.is_array())
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect();
                let _ = write!(out, "  {}", fields.join(" "));
            }
            out.push('\n');
        }
        let passed = self.tasks.values().filter(|t| t.pass).count();
        let _ = writeln!(out, "{passed}/{} tasks passed", self.tasks.len());
        out
    }
}

/// C's `%.17g`: 17 significant digits, trailing zeros removed, exponent form
/// when the decimal exponent is below −4 or at least 17.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa.to_string()), exp.abs())
    } else {
        let decimals = (16 - exp).max(0) as usize;
        trim(format!("{x:.decimals$}"))
    }
}

pub fn csv(header: &[String], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|&x| format_g17(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
