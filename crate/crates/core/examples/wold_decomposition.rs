// Wold coefficients of a few functions along `z²` and along a Blaschke product
// with a zero off the origin.

use blaschke_lab::circle::FourierVector;
use blaschke_lab::decomp::{component_split, wold_decompose};
use blaschke_lab::{BlaschkeProduct, Result};

pub fn run() -> Result<()> {
    let z2 = BlaschkeProduct::monomial(2);
    let w = wold_decompose(&FourierVector::z_pow(3), &z2, None)?;
    println!("z^3 along z^2: {:?}", w.entries(1e-14));

    let b = BlaschkeProduct::from_real_zeros(&[0.0, 0.5])?;
    let f = FourierVector::from_real(-2, &[0.5, -1.0, 2.0, 1.0, 0.25]);
    let w = wold_decompose(&f, &b, None)?;
    println!("k-range {:?}, {} nonzero coefficients", w.k_range(), w.entries(1e-12).len());
    println!("Parseval defect {:.2e} (tail bound {:.2e})", w.parseval_defect(), w.tail_bound());
    println!("reconstruction error {:.2e}", w.reconstruct().distance(&f));

    let parts = component_split(&f, &b)?;
    for (i, p) in parts.iter().enumerate() {
        println!("component {}: norm {:.6}", i + 1, p.norm());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
