//! Least-squares evidence for the non-existence results: how much of a valid
//! symbol tuple survives the linear constraints imposed by a forbidden invariance.

use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blaschke::BlaschkeProduct;
use crate::circle::FourierVector;
use crate::conjugation::make_c_theta;
use crate::error::{LabError, Result};
use crate::generators::{random_symbols, GeneratorParams, SymbolClass};
use crate::operators::{CircleMap, ConjJ, MapRef};

/// Valid symbol tuples projected per probe run.
pub const PROBE_TARGETS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForbiddenInvariance {
    /// `M_{[ψ1,ψ2]}J` keeping `H²` invariant.
    IntertwiningHardy,
    /// `M_{[ψ1,ψ2]}J` mapping `zH²` into `zH²`.
    IntertwiningBeurling,
    /// `M_{[φ1..φn]}𝒞_{zⁿ}` keeping `H²` invariant.
    ZnSymmetricHardy { n: usize },
}

impl FromStr for ForbiddenInvariance {
    type Err = LabError;
    /// Accepts `intertwining-hardy`/`5.1`, `intertwining-beurling`/`5.7`,
    /// and `zn-symmetric-hardy:<n>`/`6.3:<n>` (default `n = 2`).
    fn from_str(s: &str) -> Result<Self> {
        let (head, n) = match s.split_once(':') {
            Some((h, n)) => (h, n.parse().map_err(|_| LabError::Config(format!("bad degree in `{s}`")))?),
            None => (s, 2),
        };
        Ok(match head {
            "intertwining-hardy" | "5.1" => ForbiddenInvariance::IntertwiningHardy,
            "intertwining-beurling" | "5.7" => ForbiddenInvariance::IntertwiningBeurling,
            "zn-symmetric-hardy" | "6.3" if n >= 2 => ForbiddenInvariance::ZnSymmetricHardy { n },
            _ => return Err(LabError::Config(format!("unknown impossibility probe `{s}`"))),
        })
    }
}

impl ForbiddenInvariance {
    pub fn label(&self) -> String {
        match self {
            ForbiddenInvariance::IntertwiningHardy => "intertwining-hardy".into(),
            ForbiddenInvariance::IntertwiningBeurling => "intertwining-beurling".into(),
            ForbiddenInvariance::ZnSymmetricHardy { n } => format!("zn-symmetric-hardy:{n}"),
        }
    }

    fn slots(&self) -> usize {
        match self {
            ForbiddenInvariance::ZnSymmetricHardy { n } => *n,
            _ => 2,
        }
    }

    fn base(&self) -> MapRef {
        match self {
            ForbiddenInvariance::ZnSymmetricHardy { n } => Arc::new(make_c_theta(&BlaschkeProduct::monomial(*n))),
            _ => Arc::new(ConjJ),
        }
    }

    /// `(source function, lowest allowed output index)` for probe `m`.
    fn probe(&self, m: i64) -> (FourierVector, i64) {
        match self {
            ForbiddenInvariance::IntertwiningBeurling => (FourierVector::z_pow(m + 1), 1),
            _ => (FourierVector::z_pow(m), 0),
        }
    }
}

/// Coordinates `(slot, index)` of the unknown symbol coefficients, flattened.
struct Unknowns {
    slots: usize,
    band: i64,
}

impl Unknowns {
    fn len(&self) -> usize {
        self.slots * self.width()
    }
    fn width(&self) -> usize {
        (2 * self.band + 1) as usize
    }
    fn at(&self, slot: usize, k: i64) -> Option<usize> {
        (k.abs() <= self.band).then(|| slot * self.width() + (k + self.band) as usize)
    }
    fn flatten(&self, symbols: &[FourierVector]) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.len()];
        for (slot, s) in symbols.iter().enumerate() {
            for (k, c) in s.iter() {
                if let Some(i) = self.at(slot, k) {
                    v[i] = c;
                }
            }
        }
        v
    }
}

/// Linear rows on the unknowns that any admissible tuple must annihilate.
fn constraint_rows(kind: ForbiddenInvariance, u: &Unknowns, cap: i64) -> Result<Vec<Vec<Complex64>>> {
    let zero = Complex64::new(0.0, 0.0);
    let mut rows = Vec::new();
    if kind.slots() == 2 {
        for k in (-u.band..=u.band).filter(|k| k.rem_euclid(2) == 1) {
            let mut row = vec![zero; u.len()];
            row[u.at(0, k).unwrap()] = Complex64::new(1.0, 0.0);
            row[u.at(1, k).unwrap()] = Complex64::new(-1.0, 0.0);
            rows.push(row);
        }
    }
    let n = kind.slots() as i64;
    let base = kind.base();
    for m in 0..cap {
        let (source, floor) = kind.probe(m);
        let image = base.apply(&source)?;
        // output coefficient j is Σ_slot Σ_k sym_slot[k]·part_slot[j − k]
        let parts: Vec<FourierVector> = (0..n).map(|r| image.residue_class(n as usize, r as usize)).collect();
        let lo = image.lo() - u.band;
        for j in lo..floor {
            let mut row = vec![zero; u.len()];
            let mut any = false;
            for (slot, part) in parts.iter().enumerate() {
                for (s, c) in part.iter() {
                    if let Some(i) = u.at(slot, j - s) {
                        row[i] += c;
                        any = true;
                    }
                }
            }
            if any {
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

/// Orthonormal basis of the row span (modified Gram–Schmidt, twice).
fn orthonormalize(rows: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for mut r in rows {
        for _ in 0..2 {
            for q in &basis {
                let d: Complex64 = q.iter().zip(&r).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in r.iter_mut().zip(q) {
                    *x -= d * y;
                }
            }
        }
        let norm = r.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-10 {
            basis.push(r.into_iter().map(|x| x / norm).collect());
        }
    }
    basis
}

fn targets(kind: ForbiddenInvariance, band: i64, seed: u64) -> Result<Vec<Vec<FourierVector>>> {
    match kind {
        ForbiddenInvariance::ZnSymmetricHardy { n } => Ok((0..PROBE_TARGETS)
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(i as u64 + 1);
                let k = rng.gen_range(-band..=band);
                let w = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
                vec![FourierVector::monomial(k, w); n]
            })
            .collect()),
        _ => {
            let reach = band - 1;
            let params = GeneratorParams {
                max_shift: ((reach - 1) / 4).max(0),
                max_offset: ((reach - 1) / 4).max(0),
                off_diagonal: true,
            };
            Ok(random_symbols(SymbolClass::IntertwiningJ, seed, PROBE_TARGETS, &params)?
                .into_iter()
                .map(|g| g.symbols.to_vec())
                .collect())
        }
    }
}

/// Largest fraction `‖P t‖²/‖t‖²` of seeded valid symbol tuples `t` that
/// survives projection onto the band-limited tuples meeting the class
/// conditions and the invariance constraints of the first `cap` probes.
pub fn impossibility_probe(kind: ForbiddenInvariance, band: i64, cap: i64, seed: u64) -> Result<f64> {
    let u = Unknowns {
        slots: kind.slots(),
        band,
    };
    let q = orthonormalize(constraint_rows(kind, &u, cap)?);
    let mut worst: f64 = 0.0;
    for t in targets(kind, band, seed)? {
        let mut v = u.flatten(&t);
        let total: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        for row in &q {
            let d: Complex64 = row.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(row) {
                *x -= d * y;
            }
        }
        worst = worst.max(v.iter().map(|x| x.norm_sqr()).sum::<f64>() / total);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unconstrained_fraction_is_one() {
        for kind in [
            ForbiddenInvariance::IntertwiningHardy,
            ForbiddenInvariance::IntertwiningBeurling,
            ForbiddenInvariance::ZnSymmetricHardy { n: 3 },
        ] {
            let f = impossibility_probe(kind, 8, 0, 1).unwrap();
            assert!((f - 1.0).abs() < 1e-12, "{kind:?} {f}");
        }
    }

    #[test]
    fn fractions_collapse() {
        assert!(impossibility_probe(ForbiddenInvariance::IntertwiningHardy, 8, 20, 1).unwrap() < 0.1);
        assert!(impossibility_probe(ForbiddenInvariance::IntertwiningBeurling, 8, 20, 1).unwrap() < 0.1);
        assert!(impossibility_probe(ForbiddenInvariance::ZnSymmetricHardy { n: 3 }, 9, 24, 1).unwrap() < 0.1);
    }

    #[test]
    fn parse_aliases() {
        assert_eq!("5.1".parse::<ForbiddenInvariance>().unwrap(), ForbiddenInvariance::IntertwiningHardy);
        assert_eq!("6.3:4".parse::<ForbiddenInvariance>().unwrap(), ForbiddenInvariance::ZnSymmetricHardy { n: 4 });
        assert!("6.3:1".parse::<ForbiddenInvariance>().is_err());
    }
}
