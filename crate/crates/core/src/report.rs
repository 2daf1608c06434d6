use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One checked condition with its residual and threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Structured record of a certification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub theorem: String,
    pub conditions: Vec<Condition>,
    pub overall: bool,
    #[serde(default)]
    pub extracted: Value,
}

impl CertReport {
    pub fn new(theorem: impl Into<String>) -> Self {
        CertReport {
            theorem: theorem.into(),
            conditions: Vec::new(),
            overall: true,
            extracted: Value::Object(Default::default()),
        }
    }

    /// Records `residual < tol`. Non-finite residuals fail and are stored as `f64::MAX`.
    pub fn check(&mut self, name: impl Into<String>, residual: f64, tol: f64) -> bool {
        let residual = if residual.is_finite() { residual.abs() } else { f64::MAX };
        let pass = residual < tol;
        self.conditions.push(Condition {
            name: name.into(),
            residual,
            tol,
            pass,
        });
        self.overall &= pass;
        pass
    }

    /// Records a boolean outcome as residual 0 (true) or 1 (false).
    pub fn flag(&mut self, name: impl Into<String>, ok: bool) -> bool {
        self.check(name, if ok { 0.0 } else { 1.0 }, 0.5)
    }

    /// Appends the conditions of `other`, prefixing names.
    pub fn absorb(&mut self, prefix: &str, other: &CertReport) {
        for c in &other.conditions {
            self.conditions.push(Condition {
                name: format!("{prefix}{}", c.name),
                ..c.clone()
            });
            self.overall &= c.pass;
        }
    }

    pub fn extract(&mut self, key: &str, value: impl Serialize) {
        if let Value::Object(map) = &mut self.extracted {
            map.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        }
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn passes(&self, name: &str) -> bool {
        self.condition(name).is_some_and(|c| c.pass)
    }

    pub fn residual(&self, name: &str) -> f64 {
        self.condition(name).map_or(f64::NAN, |c| c.residual)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.conditions
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }
}

impl fmt::Display for CertReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.theorem, if self.overall { "pass" } else { "FAIL" })?;
        for c in &self.conditions {
            writeln!(
                f,
                "  [{}] {:<40} residual {:.3e} (tol {:.1e})",
                if c.pass { "ok" } else { "xx" },
                c.name,
                c.residual,
                c.tol
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_is_conjunction() {
        let mut r = CertReport::new("t");
        assert!(r.check("a", 1e-13, 1e-12));
        assert!(r.overall);
        assert!(!r.check("b", f64::NAN, 1.0));
        assert!(!r.overall);
        assert_eq!(r.residual("b"), f64::MAX);
        assert_eq!(r.failures(), vec!["b"]);
    }
}
