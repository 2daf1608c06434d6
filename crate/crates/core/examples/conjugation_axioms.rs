// The basic conjugations `J`, `J★`, `𝒞_θ` and `𝒞★_θ` against the axioms.

use std::sync::Arc;

use blaschke_lab::conjugation::{make_c_theta, make_c_theta_star, CertSettings};
use blaschke_lab::operators::{is_conjugation, ConjJ, ConjJStar, MapRef};
use blaschke_lab::zn::blaschke_probes;
use blaschke_lab::{BlaschkeProduct, Result};

pub fn run() -> Result<()> {
    let settings = CertSettings::default();
    let mut maps: Vec<(String, MapRef, _)> = vec![
        ("J".into(), Arc::new(ConjJ), settings.probes()),
        ("J*".into(), Arc::new(ConjJStar), settings.probes()),
    ];
    for (label, theta) in [
        ("z", BlaschkeProduct::monomial(1)),
        ("z^2", BlaschkeProduct::monomial(2)),
        ("[1/2]", BlaschkeProduct::from_real_zeros(&[0.5])?),
    ] {
        let probes = blaschke_probes(&theta, &settings);
        maps.push((format!("C_{label}"), Arc::new(make_c_theta(&theta)), probes.clone()));
        maps.push((format!("C*_{label}"), Arc::new(make_c_theta_star(&theta, settings.band)?), probes));
    }
    for (name, c, probes) in maps {
        let r = is_conjugation(&*c, &probes)?;
        println!(
            "{name:<10} involution {:.1e}  antiunitary {:.1e}  {}",
            r.residual("involution"),
            r.residual("antiunitary"),
            if r.overall { "ok" } else { "FAIL" }
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
