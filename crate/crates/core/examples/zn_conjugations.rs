// Conjugations along `zⁿ` and along a general Blaschke product.

use std::sync::Arc;

use blaschke_lab::conjugation::{make_c_theta, make_c_theta_star, CertSettings};
use blaschke_lab::zn::{action_table, decompose_conjugation, hardy_structure_zn, verify_star_factorization, Relation};
use blaschke_lab::{BlaschkeProduct, Result};

pub fn run() -> Result<()> {
    for n in 2..=4 {
        let r = verify_star_factorization(n, 16)?;
        println!("n = {n}: table {:?}, star factorization {}", action_table(n), if r.overall { "exact" } else { "FAIL" });
    }

    let s = CertSettings::default();
    let z3 = BlaschkeProduct::monomial(3);
    let h = hardy_structure_zn(Arc::new(make_c_theta_star(&z3, s.band)?), 3, &s)?;
    for (j, xi) in h.xi.iter().enumerate() {
        println!("xi{} = {:?}", j + 1, xi.iter().collect::<Vec<_>>());
    }

    let b = BlaschkeProduct::from_real_zeros(&[0.0, 0.3])?;
    let wide = CertSettings { band: 48, ..s };
    let f = decompose_conjugation(Arc::new(make_c_theta_star(&b, wide.band)?), &b, Relation::Commute, &wide)?;
    println!("{}", f.report);
    let f = decompose_conjugation(Arc::new(make_c_theta(&b)), &b, Relation::Intertwine, &wide)?;
    println!("{}", f.report);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
