//! Check-line reporting shared by all subcommands.
//!
//! Machine-readable lines have the fixed shape
//! `check=<name> value=<v> tol=<t> pass=<bool>`; everything else is a
//! human-readable note. Output is deterministic: notes and checks are
//! emitted in computation order with fixed float formatting.

use std::path::Path;

#[derive(Default)]
pub struct Report {
    lines: Vec<String>,
    failures: usize,
    checks: usize,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    /// Add a human-readable note line.
    pub fn note(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    /// Add a machine-readable check line.
    pub fn check(&mut self, name: &str, value: f64, tol: f64, pass: bool) {
        self.checks += 1;
        if !pass {
            self.failures += 1;
        }
        self.lines
            .push(format!("check={name} value={value:.6e} tol={tol:.3e} pass={pass}"));
    }

    pub fn all_passed(&self) -> bool {
        self.failures == 0
    }

    /// Print to stdout (with a closing summary) and optionally save the
    /// same text as `report.txt` under `out_dir`.
    pub fn finish(mut self, out_dir: Option<&Path>) -> std::io::Result<bool> {
        self.lines.push(format!(
            "summary: {} checks, {} failed",
            self.checks, self.failures
        ));
        let text = self.lines.join("\n");
        println!("{text}");
        if let Some(dir) = out_dir {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("report.txt"), format!("{text}\n"))?;
        }
        Ok(self.all_passed())
    }
}

/// Convergence order fitted to the last pair of a halving sweep:
/// `log2(v[k−1] / v[k])`. Returns `None` when the values sit at the
/// roundoff floor, where the ratio is meaningless.
pub fn last_pair_order(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let (prev, last) = (values[values.len() - 2], values[values.len() - 1]);
    if last <= 1e-13 || prev <= 1e-13 {
        return None;
    }
    Some((prev / last).log2())
}

/// Render a measured order for a note line (`n/a` at the roundoff floor).
pub fn order_note(values: &[f64]) -> String {
    match last_pair_order(values) {
        Some(o) => format!("{o:.2}"),
        None => "n/a".to_string(),
    }
}
