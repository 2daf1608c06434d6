pub mod blaschke;
pub mod circle;
pub mod cli;
pub mod conjugation;
pub mod decomp;
pub mod error;
pub mod generators;
pub mod impossibility;
pub mod io;
pub mod operators;
pub mod report;
pub mod structure;
pub mod suites;
pub mod zn;

pub use blaschke::{BlaschkeProduct, TMBasis};
pub use circle::{Band, FourierVector, GridSamples};
pub use error::{LabError, Result};
pub use report::CertReport;
