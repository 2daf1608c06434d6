// `H²`-preserving commuting conjugations have symbols `a0 + a1 z` and `a1 z̄ + b0`.

use std::f64::consts::FRAC_1_SQRT_2;

use blaschke_lab::circle::FourierVector;
use blaschke_lab::conjugation::CertSettings;
use blaschke_lab::structure::hardy_commuting_structure;
use blaschke_lab::{LabError, Result};

pub fn run() -> Result<()> {
    let s = CertSettings::default();
    let r = FRAC_1_SQRT_2;
    let h = hardy_commuting_structure(&FourierVector::from_real(0, &[r, r]), &FourierVector::from_real(-1, &[r, -r]), &s)?;
    println!("a0 = {}, a1 = {}, b0 = {}", h.a0, h.a1, h.b0);
    println!("{}", h.report);

    match hardy_commuting_structure(&FourierVector::z_pow(2), &FourierVector::one(), &s) {
        Err(LabError::StructureViolation { symbol, index, value }) => {
            println!("rejected: {symbol} has coefficient {value} at index {index}")
        }
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
