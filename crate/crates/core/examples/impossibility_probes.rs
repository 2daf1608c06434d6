// How much of a valid symbol tuple survives the constraints of a forbidden invariance.

use blaschke_lab::impossibility::{impossibility_probe, ForbiddenInvariance};
use blaschke_lab::Result;

pub fn run() -> Result<()> {
    for (kind, band) in [
        (ForbiddenInvariance::IntertwiningHardy, 8),
        (ForbiddenInvariance::IntertwiningBeurling, 8),
        (ForbiddenInvariance::ZnSymmetricHardy { n: 3 }, 9),
    ] {
        let fractions = [0, 4, 8, 12, 16, 20, 24]
            .map(|cap| impossibility_probe(kind, band, cap, 1).map(|f| format!("{f:.3}")))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        println!("{:<24} {}", kind.label(), fractions.join(" "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
