// A commuting conjugation mapping `αH²` into `βH²` and its inner function `θ`.

use blaschke_lab::circle::FourierVector;
use blaschke_lab::conjugation::CertSettings;
use blaschke_lab::structure::beurling_commuting_structure;
use blaschke_lab::{BlaschkeProduct, Result};

pub fn run() -> Result<()> {
    let s = CertSettings::default();
    let one = FourierVector::one();
    for alpha in [BlaschkeProduct::monomial(1), BlaschkeProduct::from_real_zeros(&[0.5])?] {
        let out = beurling_commuting_structure(&one, &one, &alpha, &alpha, &s)?;
        println!("{}", out.report);
        println!(
            "theta leading coefficients: {:?}",
            out.theta.iter().filter(|(_, c)| c.norm() > 1e-6).take(4).collect::<Vec<_>>()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
