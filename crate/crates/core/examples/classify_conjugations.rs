// Which of `M_z`, `M_{z²}` a conjugation commutes with or intertwines.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use blaschke_lab::circle::FourierVector;
use blaschke_lab::conjugation::{classify, commuting_pair_operator, make_c_theta, make_c_theta_star, CertSettings};
use blaschke_lab::operators::{ConjJStar, MapRef};
use blaschke_lab::{BlaschkeProduct, Result};

pub fn run() -> Result<()> {
    let settings = CertSettings::default();
    let z2 = BlaschkeProduct::monomial(2);
    let r = FRAC_1_SQRT_2;
    let cases: Vec<(&str, MapRef)> = vec![
        ("J*", Arc::new(ConjJStar)),
        ("C_{z^2}", Arc::new(make_c_theta(&z2))),
        ("C*_{z^2}", Arc::new(make_c_theta_star(&z2, settings.band)?)),
        (
            "M_[xi1,xi2] J*",
            commuting_pair_operator(&FourierVector::from_real(0, &[r, r]), &FourierVector::from_real(-1, &[r, -r]))?,
        ),
    ];
    for (name, c) in cases {
        let class = classify(&*c, &settings)?;
        println!(
            "{name:<16} commutes M_z {:<5} intertwines M_z {:<5} commutes M_z2 {:<5} intertwines M_z2 {:<5} kind {:?}",
            class.commutes_mz,
            class.intertwines_mz,
            class.commutes_mz2,
            class.intertwines_mz2,
            class.commuting_kind(settings.tol_relation)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
