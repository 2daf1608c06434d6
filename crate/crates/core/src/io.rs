//! JSON file formats, run configuration and suite reports.

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::circle::{Band, FourierVector};
use crate::conjugation::{make_c_theta, make_c_theta_star, CertSettings};
use crate::error::{LabError, Result};
use crate::operators::{compose, edge_margin, Clipped, AntilinearOp, ConjJ, ConjJStar, LinearOp, MapRef, MultiSymbolOp};
use crate::report::CertReport;

/// Environment variable naming a JSON [`RunConfig`].
pub const CONFIG_ENV: &str = "BLASCHKE_LAB_CONFIG";

/// Working band for symbolic conjugations along a Blaschke product with nonzero zeros.
pub const SAMPLED_MIN_BAND: i64 = 96;

/// Version of the suite report layout.
pub const REPORT_SCHEMA: u32 = 1;

fn pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

fn complex([re, im]: [f64; 2]) -> Complex64 {
    Complex64::new(re, im)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| LabError::Malformed(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json_string(value)?)?;
    Ok(())
}

/// `{"zeros": [[re, im], ...]}`; an optional `"unit"` sets the unimodular prefactor.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlaschkeFile {
    pub zeros: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<[f64; 2]>,
}

impl BlaschkeFile {
    pub fn build(&self) -> Result<BlaschkeProduct> {
        let zeros = self.zeros.iter().copied().map(complex).collect();
        match self.unit {
            Some(u) => BlaschkeProduct::with_unit(zeros, complex(u)),
            None => BlaschkeProduct::new(zeros),
        }
    }
}

impl From<&BlaschkeProduct> for BlaschkeFile {
    fn from(b: &BlaschkeProduct) -> Self {
        let unit = b.unit();
        BlaschkeFile {
            zeros: b.zeros().iter().copied().map(pair).collect(),
            unit: (unit != Complex64::new(1.0, 0.0)).then(|| pair(unit)),
        }
    }
}

/// `{"band": [lo, hi], "matrix": [[[re, im], ...], ...]}`, row-major. `"range"` gives
/// the codomain when it differs from the domain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorFile {
    pub band: [i64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[i64; 2]>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl OperatorFile {
    pub fn build(&self) -> Result<LinearOp> {
        let domain = Band::new(self.band[0], self.band[1]);
        let codomain = self.range.map_or(domain, |[lo, hi]| Band::new(lo, hi));
        let matrix = self
            .matrix
            .iter()
            .map(|row| row.iter().copied().map(complex).collect())
            .collect();
        LinearOp::new(domain, codomain, matrix)
    }
}

impl From<&LinearOp> for OperatorFile {
    fn from(op: &LinearOp) -> Self {
        OperatorFile {
            band: [op.domain.lo, op.domain.hi],
            range: (op.codomain != op.domain).then_some([op.codomain.lo, op.codomain.hi]),
            matrix: op
                .matrix
                .iter()
                .map(|row| row.iter().copied().map(pair).collect())
                .collect(),
        }
    }
}

/// `{"blaschke": {...}, "symbols": [FourierVector, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiSymbolFile {
    pub blaschke: BlaschkeFile,
    pub symbols: Vec<FourierVector>,
}

impl MultiSymbolFile {
    pub fn build(&self, band: i64) -> Result<MultiSymbolOp> {
        MultiSymbolOp::new(&self.blaschke.build()?, self.symbols.clone(), band)
    }
}

/// The conjugation applied after a multi-symbol factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseConjugation {
    #[serde(rename = "J")]
    J,
    #[serde(rename = "J*")]
    JStar,
    /// `f ↦ B·conj(z f)`.
    #[serde(rename = "C_B")]
    CB,
    /// The slotwise version along `B`.
    #[serde(rename = "C*_B")]
    CStarB,
}

/// A conjugation given densely (`C = L∘J★` with column `k` of `L` equal to `C(z^k)`)
/// or symbolically as `M_{[symbols]}` over `blaschke` followed by `base`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ConjugationFile {
    Dense(OperatorFile),
    Symbolic {
        blaschke: BlaschkeFile,
        symbols: Vec<FourierVector>,
        base: BaseConjugation,
    },
}

impl ConjugationFile {
    /// The map and the largest symmetric band on which it can be probed.
    pub fn build(&self, band: i64) -> Result<(MapRef, i64)> {
        match self {
            ConjugationFile::Dense(op) => {
                let l = op.build()?;
                let reach = l.domain.lo.abs().min(l.domain.hi.abs());
                Ok((Arc::new(AntilinearOp::new(l)), reach))
            }
            ConjugationFile::Symbolic { blaschke, symbols, base } => {
                let b = blaschke.build()?;
                let exact = b.monomial_form().is_some();
                let band = if exact { band } else { band.max(SAMPLED_MIN_BAND) };
                let m = Arc::new(MultiSymbolOp::new(&b, symbols.clone(), band)?);
                let base: MapRef = match base {
                    BaseConjugation::J => Arc::new(ConjJ),
                    BaseConjugation::JStar => Arc::new(ConjJStar),
                    BaseConjugation::CB => Arc::new(make_c_theta(&b)),
                    BaseConjugation::CStarB => Arc::new(make_c_theta_star(&b, band)?),
                };
                if exact {
                    return Ok((compose(m, base), band));
                }
                let clipped = Arc::new(Clipped {
                    inner: base,
                    band: Band::symmetric(band),
                });
                Ok((compose(m, clipped), band - edge_margin(&b, band)))
            }
        }
    }
}

/// Input of `certify`: the symbol pair plus the inner functions some checks need.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolsFile {
    pub symbols: Vec<FourierVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<BlaschkeFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<BlaschkeFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<BlaschkeFile>,
}

impl SymbolsFile {
    pub fn pair(&self) -> Result<(&FourierVector, &FourierVector)> {
        match self.symbols.as_slice() {
            [a, b] => Ok((a, b)),
            other => Err(LabError::Malformed(format!("expected 2 symbols, found {}", other.len()))),
        }
    }

    pub fn inner(&self, name: &str) -> Result<BlaschkeProduct> {
        let f = match name {
            "alpha" => &self.alpha,
            "theta" => &self.theta,
            "beta" => &self.beta,
            _ => &None,
        };
        f.as_ref()
            .ok_or_else(|| LabError::Malformed(format!("symbols file needs `{name}`")))?
            .build()
    }
}

/// Shared numerical settings of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub band: i64,
    pub grid: usize,
    pub tol_exact: f64,
    pub tol_series: f64,
    pub seed: u64,
    pub trials: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            band: 64,
            grid: 260,
            tol_exact: 1e-12,
            tol_series: 1e-8,
            seed: 0,
            trials: 20,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.band < 1 {
            return Err(LabError::Config(format!("band must be positive, got {}", self.band)));
        }
        if self.grid < 4 * self.band as usize + 4 {
            return Err(LabError::Config(format!(
                "grid {} is below 4·band+4 = {}",
                self.grid,
                4 * self.band + 4
            )));
        }
        if !(self.tol_exact <= self.tol_series) {
            return Err(LabError::Config("tol_exact must not exceed tol_series".into()));
        }
        if self.trials == 0 {
            return Err(LabError::Config("trials must be at least 1".into()));
        }
        Ok(())
    }

    /// Defaults overlaid with the file named by [`CONFIG_ENV`], if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) => read_json(Path::new(&path)),
            None => Ok(RunConfig::default()),
        }
    }

    /// Certifier settings: probe band capped at 24 so pairing checks stay small.
    pub fn cert_settings(&self) -> CertSettings {
        CertSettings {
            band: self.band.min(24),
            seed: self.seed,
            tol_exact: self.tol_exact,
            tol_relation: self.tol_series,
            ..CertSettings::default()
        }
    }
}

/// One suite run as written by `verify`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteResult {
    pub schema: u32,
    pub suite: String,
    pub overall: bool,
    pub config: RunConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub reports: Vec<CertReport>,
}

impl SuiteResult {
    pub fn new(suite: &str, config: &RunConfig, reports: Vec<CertReport>) -> Self {
        SuiteResult {
            schema: REPORT_SCHEMA,
            suite: suite.to_string(),
            overall: !reports.is_empty() && reports.iter().all(|r| r.overall),
            config: config.clone(),
            elapsed_ms: None,
            timestamp: None,
            reports,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_format() {
        let v: FourierVector = serde_json::from_str(r#"{"lo": -1, "coeffs": [[1, 0], [0, 2]]}"#).unwrap();
        assert_eq!(v.coeff(-1), Complex64::new(1.0, 0.0));
        assert_eq!(v.coeff(0), Complex64::new(0.0, 2.0));
        let back = serde_json::to_string(&v).unwrap();
        assert_eq!(back, r#"{"lo":-1,"coeffs":[[1.0,0.0],[0.0,2.0]]}"#);
    }

    #[test]
    fn blaschke_format() {
        let f: BlaschkeFile = serde_json::from_str(r#"{"zeros": [[0.5, 0], [0, 0.25]]}"#).unwrap();
        let b = f.build().unwrap();
        assert_eq!(b.degree(), 2);
        let bad: BlaschkeFile = serde_json::from_str(r#"{"zeros": [[1.5, 0]]}"#).unwrap();
        assert!(matches!(bad.build(), Err(LabError::ZeroOutsideDisk { .. })));
        let z2 = BlaschkeFile::from(&BlaschkeProduct::monomial(2));
        assert_eq!(z2.build().unwrap(), BlaschkeProduct::monomial(2));
    }

    #[test]
    fn conjugation_files() {
        let text = r#"{"kind": "symbolic", "blaschke": {"zeros": [[0,0],[0,0]], "unit": [1,0]},
                       "symbols": [{"lo": 0, "coeffs": [[1,0]]}, {"lo": 0, "coeffs": [[1,0]]}], "base": "J*"}"#;
        let f: ConjugationFile = serde_json::from_str(text).unwrap();
        let (c, _) = f.build(8).unwrap();
        let v = FourierVector::monomial(3, Complex64::new(0.0, 1.0));
        assert_eq!(c.apply(&v).unwrap(), v.conj_jstar());
        let op = LinearOp::identity(Band::symmetric(2));
        let dense = ConjugationFile::Dense(OperatorFile::from(&op));
        let text = serde_json::to_string(&dense).unwrap();
        assert!(text.starts_with(r#"{"kind":"dense","band":[-2,2]"#));
    }

    #[test]
    fn config_validation() {
        assert!(RunConfig::default().validate().is_ok());
        let bad = RunConfig {
            grid: 100,
            ..RunConfig::default()
        };
        assert!(matches!(bad.validate(), Err(LabError::Config(_))));
        let partial: RunConfig = serde_json::from_str(r#"{"band": 8, "grid": 40}"#).unwrap();
        assert_eq!(partial.trials, 20);
        assert!(partial.validate().is_ok());
    }
}
