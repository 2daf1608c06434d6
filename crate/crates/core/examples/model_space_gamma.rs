// Model-space analysis of intertwining and commuting conjugations.

use blaschke_lab::circle::FourierVector;
use blaschke_lab::conjugation::CertSettings;
use blaschke_lab::structure::{model_commuting_report, model_intertwining_gamma};
use blaschke_lab::{BlaschkeProduct, Result};

pub fn run() -> Result<()> {
    let s = CertSettings::default();
    let z2 = BlaschkeProduct::monomial(2);
    let z = FourierVector::z_pow(1);
    let out = model_intertwining_gamma(&z, &z, &z2, &z2, &s)?;
    println!("gamma = {:?}", out.gamma.iter().collect::<Vec<_>>());
    println!("C + M_z C M_z = c C_gamma with c = {}", out.scale);
    println!("{}", out.report);

    // J* along alpha = zeros [1/2] with theta = alpha#: every hypothesis but only-M_z2
    let alpha = BlaschkeProduct::from_real_zeros(&[0.5])?;
    let one = FourierVector::one();
    let m = model_commuting_report(&one, &one, &alpha, &alpha.sharp(), &s)?;
    println!("{}", m.report);
    println!("unmet: {:?}", m.report.failures());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
