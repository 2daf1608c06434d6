use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the workbench.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("band overflow: {width} coefficients exceeds the cap of {cap}")]
    BandOverflow { width: usize, cap: usize },

    #[error("input support [{lo}, {hi}] lies outside the working band [{band_lo}, {band_hi}]")]
    OutsideBand {
        lo: i64,
        hi: i64,
        band_lo: i64,
        band_hi: i64,
    },

    #[error("aliasing: {width} coefficients cannot be represented on a {grid}-point grid")]
    Aliasing { width: usize, grid: usize },

    #[error("pole: denominator vanishes at z = {z}")]
    Pole { z: Complex64 },

    #[error("zero {zero} does not lie in the open unit disk")]
    ZeroOutsideDisk { zero: Complex64 },

    #[error("band {band} is smaller than the degree {degree}")]
    BandTooSmall { band: i64, degree: usize },

    #[error("index {index} out of range 1..={degree}")]
    IndexOutOfRange { index: usize, degree: usize },

    #[error("k-range [{requested_lo}, {requested_hi}] is too narrow; minimal adequate range is [{minimal_lo}, {minimal_hi}]")]
    InsufficientRange {
        requested_lo: i64,
        requested_hi: i64,
        minimal_lo: i64,
        minimal_hi: i64,
    },

    #[error("expected degree {expected}, found {found}")]
    WrongDegree { expected: usize, found: usize },

    #[error("operator is not in the commutant of M_B (residual {residual:e})")]
    NotInCommutant { residual: f64 },

    #[error("vector is not in the model space (residual {residual:e})")]
    NotInModelSpace { residual: f64 },

    #[error("probe lies outside the source subspace (residual {residual:e})")]
    ProbeOutsideSubspace { residual: f64 },

    #[error("operator is not a conjugation (involution {involution:e}, antiunitarity {antiunitarity:e})")]
    NotAConjugation { involution: f64, antiunitarity: f64 },

    #[error("operator does not satisfy the required relation with M_B (residual {residual:e})")]
    RelationViolation { residual: f64 },

    #[error("structure violation: {symbol} has coefficient {value} at index {index}")]
    StructureViolation {
        symbol: String,
        index: i64,
        value: Complex64,
    },

    #[error("hypothesis '{name}' fails (residual {residual:e})")]
    HypothesisFailure { name: String, residual: f64 },

    #[error("generator exhausted after {attempts} rejected draws")]
    GeneratorExhausted { attempts: usize },

    #[error("unknown suite '{0}'")]
    UnknownSuite(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;
