// Certifiers for symbol pairs of intertwining and commuting conjugations.

use std::f64::consts::FRAC_1_SQRT_2;

use blaschke_lab::circle::FourierVector;
use blaschke_lab::conjugation::{
    certify_commuting_pair, certify_commuting_pair_jstar, certify_intertwining_pair, certify_intertwining_pair_j,
    CertSettings,
};
use blaschke_lab::Result;

pub fn run() -> Result<()> {
    let s = CertSettings::default();
    let z = FourierVector::z_pow(1);
    let one = FourierVector::one();
    let r = FRAC_1_SQRT_2;

    println!("{}", certify_intertwining_pair(&one, &one, &s)?);
    println!("{}", certify_intertwining_pair_j(&z, &z, &s)?);
    println!("{}", certify_commuting_pair(&z, &FourierVector::z_pow(-1), &s)?);
    let xi1 = FourierVector::from_real(0, &[r, r]);
    let xi2 = FourierVector::from_real(-1, &[r, -r]);
    let report = certify_commuting_pair_jstar(&xi1, &xi2, &s)?;
    println!("{report}");
    println!("kind: {}", report.extracted["kind"]);

    // |phi1|^2 + |phi2|^2 = 2 and equal even parts, yet not a conjugation
    let bad = certify_intertwining_pair(&z.scale_real(2f64.sqrt()), &FourierVector::zero(), &s)?;
    println!("sqrt2 z, 0 -> overall {} (reduced conditions {})", bad.overall, bad.extracted["reduced_conditions_pass"]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
