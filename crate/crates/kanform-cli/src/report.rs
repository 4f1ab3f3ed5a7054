use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One verified identity: `pass` iff `residual <= tol`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    /// Non-gating checks are reported but do not affect the exit code.
    #[serde(default = "yes")]
    pub gating: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn yes() -> bool {
    true
}

impl Check {
    pub fn at_most(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check { name: name.into(), residual, tol, pass: residual <= tol, gating: true, note: None }
    }

    /// Exact predicate, reported with residual 0 or 1.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check { name: name.into(), residual: if ok { 0.0 } else { 1.0 }, tol: 0.0, pass: ok, gating: true, note: None }
    }

    pub fn informational(mut self, note: impl Into<String>) -> Self {
        self.gating = false;
        self.note = Some(note.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Tolerance table: the documented default unless `--tol` overrides it.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    pub overall: Option<f64>,
}

impl Tolerances {
    pub fn get(&self, default: f64) -> f64 {
        self.overall.unwrap_or(default)
    }
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().filter(|c| c.gating).all(|c| c.pass)
}

/// Checks found anywhere in a report document.
pub fn collect_checks(v: &Value) -> Vec<Check> {
    let mut out = Vec::new();
    fn walk(v: &Value, out: &mut Vec<Check>) {
        match v {
            Value::Object(map) => {
                if let Some(Value::Array(items)) = map.get("checks") {
                    out.extend(items.iter().filter_map(|c| serde_json::from_value(c.clone()).ok()));
                }
                for (k, x) in map {
                    if k != "checks" {
                        walk(x, out);
                    }
                }
            }
            Value::Array(items) => items.iter().for_each(|x| walk(x, out)),
            _ => {}
        }
    }
    walk(v, &mut out);
    out
}

/// Plain-text table of checks.
pub fn render(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(4).max(4);
    let mut s = format!("{:<6} {:<width$} {:>12} {:>10}\n", "status", "name", "residual", "tol");
    for c in checks {
        let status = match (c.pass, c.gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "note",
        };
        let pad = width - c.name.chars().count();
        s.push_str(&format!("{status:<6} {}{:pad$} {:>12.3e} {:>10.1e}", c.name, "", c.residual, c.tol));
        if let Some(n) = &c.note {
            s.push_str(&format!("  ({n})"));
        }
        s.push('\n');
    }
    s
}
