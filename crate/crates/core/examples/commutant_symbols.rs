// Operators commuting with `M_B` are multi-symbol multiplications: build one,
// read its symbols back off the Takenaka–Malmquist basis, and check `M_z`.

use blaschke_lab::circle::FourierVector;
use blaschke_lab::operators::{commutator_residual, extract_commutant_symbols, edge_margin, standard_probes, MultiSymbolOp, Multiplication, COMMUTANT_TOL};
use blaschke_lab::{BlaschkeProduct, Result};

pub fn run() -> Result<()> {
    let band = 64;
    let b = BlaschkeProduct::from_real_zeros(&[0.0, 0.3])?;
    let phi = vec![
        FourierVector::from_real(-1, &[0.5, 1.0, 0.25]),
        FourierVector::from_real(0, &[2.0, -1.0]),
    ];
    let s = MultiSymbolOp::new(&b, phi.clone(), band)?;
    let probes = standard_probes(band, edge_margin(&b, band), 1);
    let back = extract_commutant_symbols(&s, &b, band, &probes, COMMUTANT_TOL)?;
    for (j, (got, want)) in back.iter().zip(&phi).enumerate() {
        println!("phi{}: extraction error {:.2e}", j + 1, got.distance(want));
    }

    // equal symbols commute with M_z, distinct ones only with M_B
    let z2 = BlaschkeProduct::monomial(2);
    let mz = Multiplication::z_pow(1);
    let probes = standard_probes(16, 2, 1);
    let same = MultiSymbolOp::new(&z2, vec![phi[0].clone(), phi[0].clone()], 16)?;
    let split = MultiSymbolOp::new(&z2, phi, 16)?;
    println!("[M_z, M_[phi,phi]] = {:.2e}", commutator_residual(&same, &mz, &probes)?);
    println!("[M_z, M_[phi1,phi2]] = {:.2e}", commutator_residual(&split, &mz, &probes)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
