//! Finite Blaschke products and the Takenaka–Malmquist basis of their model space.

use num_complex::Complex64;

use crate::circle::{Band, FourierVector, GridSamples, ONE, ZERO};
use crate::error::{LabError, Result};

/// Default relative threshold used by [`divides`].
pub const DIVIDES_TOL: f64 = 1e-7;

/// `B(z) = u · Π (λ_k − z)/(1 − conj(λ_k) z)`.
///
/// The unimodular constant `u` is 1 for products built from a zero list;
/// [`BlaschkeProduct::monomial`] sets it so that `B = z^n` exactly. Zero
/// order matters for the basis vectors `e_j` but not for `B` itself.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    unit: Complex64,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>) -> Result<Self> {
        Self::with_unit(zeros, ONE)
    }

    pub fn with_unit(zeros: Vec<Complex64>, unit: Complex64) -> Result<Self> {
        if let Some(&zero) = zeros.iter().find(|z| !(z.norm() < 1.0)) {
            return Err(LabError::ZeroOutsideDisk { zero });
        }
        if (unit.norm() - 1.0).abs() > 1e-12 {
            return Err(LabError::Malformed(format!("prefactor {unit} is not unimodular")));
        }
        Ok(BlaschkeProduct { zeros, unit })
    }

    /// Real zeros, for tests and examples.
    pub fn from_real_zeros(zeros: &[f64]) -> Result<Self> {
        Self::new(zeros.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// `z^n` (zeros all at the origin, prefactor `(-1)^n`).
    pub fn monomial(n: usize) -> Self {
        let unit = if n % 2 == 0 { ONE } else { -ONE };
        BlaschkeProduct {
            zeros: vec![ZERO; n],
            unit,
        }
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn unit(&self) -> Complex64 {
        self.unit
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// `max |λ_k|`.
    pub fn rho(&self) -> f64 {
        self.zeros.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `Some((n, s))` when `B = s·z^n`.
    pub fn monomial_form(&self) -> Option<(usize, Complex64)> {
        if self.zeros.iter().all(|z| *z == ZERO) {
            let n = self.degree();
            let sign = if n % 2 == 0 { ONE } else { -ONE };
            Some((n, self.unit * sign))
        } else {
            None
        }
    }

    /// `B = z^n` exactly.
    pub fn is_z_power(&self) -> bool {
        self.monomial_form().is_some_and(|(_, s)| s == ONE)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let mut acc = self.unit;
        for &l in &self.zeros {
            let den = ONE - l.conj() * z;
            if den.norm() < 1e-14 {
                return Err(LabError::Pole { z });
            }
            acc *= (l - z) / den;
        }
        Ok(acc)
    }

    /// Evaluation on the closed disk, where no pole can occur.
    pub(crate) fn eval_disk(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .fold(self.unit, |acc, &l| acc * (l - z) / (ONE - l.conj() * z))
    }

    pub fn samples(&self, m: usize) -> GridSamples {
        GridSamples::from_fn(m, |w| self.eval_disk(w))
    }

    /// `e_j(w)`, 1-based, without the validity check on `j`.
    pub(crate) fn basis_value(&self, j: usize, w: Complex64) -> Complex64 {
        let head = self.zeros[..j - 1]
            .iter()
            .fold(ONE, |acc, &l| acc * (l - w) / (ONE - l.conj() * w));
        let l = self.zeros[j - 1];
        head * (1.0 - l.norm_sqr()).sqrt() / (ONE - l.conj() * w)
    }

    pub fn basis_samples(&self, j: usize, m: usize) -> GridSamples {
        GridSamples::from_fn(m, |w| self.basis_value(j, w))
    }

    /// Power series of `B` truncated to indices `0..=hi`.
    pub fn expansion(&self, hi: i64) -> FourierVector {
        let band = Band::new(0, hi.max(0));
        self.samples(series_grid(band.width())).to_fourier(0).clip(band)
    }

    /// Geometric estimate of the coefficient mass beyond index `band`.
    pub fn tail_bound(&self, band: i64) -> f64 {
        let rho = self.rho();
        if rho == 0.0 {
            return 0.0;
        }
        let n = self.degree() as f64;
        n * rho.powf((band as f64 - n).max(0.0)) / (1.0 - rho)
    }

    /// Truncated expansions of `e_1..e_n` on `0..=band`.
    pub fn tm_basis(&self, band: i64) -> Result<TMBasis> {
        if band < self.degree() as i64 {
            return Err(LabError::BandTooSmall {
                band,
                degree: self.degree(),
            });
        }
        let window = Band::new(0, band);
        let m = series_grid(window.width());
        let vectors = (1..=self.degree())
            .map(|j| self.basis_samples(j, m).to_fourier(0).clip(window))
            .collect();
        Ok(TMBasis {
            parent: self.clone(),
            vectors,
            tail_bound: self.tail_bound(band),
        })
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.degree() {
            return Err(LabError::IndexOutOfRange {
                index: j,
                degree: self.degree(),
            });
        }
        Ok(())
    }

    /// Two-sided expansion of `1/e_j` on `[-band, band]`.
    pub fn tm_inverse(&self, j: usize, band: i64) -> Result<FourierVector> {
        self.check_index(j)?;
        let window = Band::symmetric(band);
        let m = series_grid(window.width());
        Ok(self.inverse_samples(j, m).to_band(window)?)
    }

    pub(crate) fn inverse_samples(&self, j: usize, m: usize) -> GridSamples {
        GridSamples::from_fn(m, |w| {
            let head = self.zeros[..j - 1]
                .iter()
                .fold(ONE, |acc, &l| acc * (ONE - l.conj() * w) / (l - w));
            let l = self.zeros[j - 1];
            head * (ONE - l.conj() * w) / (1.0 - l.norm_sqr()).sqrt()
        })
    }

    /// `B#`: zeros and prefactor conjugated, so `B#(z) = conj(B(z̄))`.
    pub fn sharp(&self) -> BlaschkeProduct {
        BlaschkeProduct {
            zeros: self.zeros.iter().map(|z| z.conj()).collect(),
            unit: self.unit.conj(),
        }
    }

    /// `self · other`.
    pub fn product(&self, other: &BlaschkeProduct) -> BlaschkeProduct {
        let mut zeros = self.zeros.clone();
        zeros.extend_from_slice(&other.zeros);
        BlaschkeProduct {
            zeros,
            unit: self.unit * other.unit,
        }
    }

    /// `true` when both products agree on a grid (zero multisets equal up to ordering).
    pub fn same_function(&self, other: &BlaschkeProduct, tol: f64) -> bool {
        let m = 256;
        self.samples(m)
            .values
            .iter()
            .zip(other.samples(m).values)
            .all(|(a, b)| (a - b).norm() < tol)
    }
}

/// Orthonormal basis `e_1..e_n` of `K_B`, truncated.
#[derive(Debug, Clone)]
pub struct TMBasis {
    pub parent: BlaschkeProduct,
    pub vectors: Vec<FourierVector>,
    pub tail_bound: f64,
}

impl TMBasis {
    /// `max_{i,j} |⟨e_i, e_j⟩ − δ_ij|`.
    pub fn gram_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let want = if i == j { ONE } else { ZERO };
                worst = worst.max((crate::circle::inner_product(a, b) - want).norm());
            }
        }
        worst
    }
}

/// Grid size for series expansions whose retained window has `width` coefficients.
pub(crate) fn series_grid(width: usize) -> usize {
    (4 * width + 4).next_power_of_two().max(256)
}

/// Grid used for divisibility and other quotient tests.
pub(crate) const QUOTIENT_GRID: usize = 2048;

/// Energy of `num · conj(den)` on negative Fourier indices, from grid samples.
pub(crate) fn negative_quotient_energy(num: &GridSamples, den: &GridSamples) -> f64 {
    let m = num.m();
    let q = num.zip_with(den, |a, b| a * b.conj()).to_fourier(-(m as i64) / 2);
    q.negative_energy()
}

/// `true` iff `gamma / alpha` is analytic, i.e. `alpha` divides `gamma`.
pub fn divides(alpha: &BlaschkeProduct, gamma: &BlaschkeProduct, tol: f64) -> bool {
    let m = QUOTIENT_GRID;
    negative_quotient_energy(&gamma.samples(m), &alpha.samples(m)).sqrt() < tol
}

/// [`divides`] for a unimodular Laurent polynomial `gamma`.
pub fn divides_vector(alpha: &BlaschkeProduct, gamma: &FourierVector, tol: f64) -> Result<bool> {
    let m = QUOTIENT_GRID;
    let g = gamma.to_grid(m)?;
    Ok(negative_quotient_energy(&g, &alpha.samples(m)).sqrt() < tol * gamma.norm().max(1e-300))
}

/// `true` iff `theta / gamma` is analytic for a unimodular Laurent polynomial `gamma`.
pub fn vector_divides(gamma: &FourierVector, theta: &BlaschkeProduct, tol: f64) -> Result<bool> {
    let m = QUOTIENT_GRID;
    let g = gamma.to_grid(m)?;
    Ok(negative_quotient_energy(&theta.samples(m), &g).sqrt() < tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::inner_product;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let b = BlaschkeProduct::new(vec![ZERO]).unwrap();
        assert!((b.eval(c(0.0, 1.0)).unwrap() - c(0.0, -1.0)).norm() < 1e-15);
        let b = BlaschkeProduct::from_real_zeros(&[0.5]).unwrap();
        assert_eq!(b.eval(c(0.5, 0.0)).unwrap(), ZERO);
        for w in GridSamples::points(64) {
            assert!((b.eval(w).unwrap().norm() - 1.0).abs() < 1e-12);
        }
        assert!(matches!(b.eval(c(2.0, 0.0)), Err(LabError::Pole { .. })));
    }

    #[test]
    fn rejects_zero_outside_disk() {
        assert!(matches!(
            BlaschkeProduct::from_real_zeros(&[1.0]),
            Err(LabError::ZeroOutsideDisk { .. })
        ));
    }

    #[test]
    fn basis_at_origin() {
        let b = BlaschkeProduct::new(vec![ZERO, ZERO]).unwrap();
        let basis = b.tm_basis(8).unwrap();
        assert!(basis.vectors[0].distance(&FourierVector::one()) < 1e-14);
        assert!(basis.vectors[1].distance(&FourierVector::monomial(1, -ONE)) < 1e-14);
        assert_eq!(basis.tail_bound, 0.0);
    }

    #[test]
    fn basis_geometric_series() {
        // e_1 = (√3/2) Σ (z/2)^m for λ = 1/2
        let b = BlaschkeProduct::from_real_zeros(&[0.5]).unwrap();
        let band = 40;
        let e1 = &b.tm_basis(band).unwrap().vectors[0];
        let oracle = FourierVector::from_fn(Band::new(0, band), |m| {
            c(3f64.sqrt() / 2.0 * 0.5f64.powi(m as i32), 0.0)
        });
        assert!(e1.distance(&oracle) < 1e-14);
    }

    #[test]
    fn basis_is_orthonormal() {
        let b = BlaschkeProduct::new(vec![c(0.5, 0.0), c(0.0, 1.0 / 3.0), c(-0.3, 0.4)]).unwrap();
        let basis = b.tm_basis(64).unwrap();
        assert!(basis.gram_defect() < basis.tail_bound + 1e-10);
        for v in &basis.vectors {
            assert!(v.lo() >= 0);
        }
    }

    #[test]
    fn band_too_small() {
        let b = BlaschkeProduct::monomial(3);
        assert!(matches!(b.tm_basis(2), Err(LabError::BandTooSmall { .. })));
    }

    #[test]
    fn inverse_examples() {
        let b = BlaschkeProduct::new(vec![ZERO, ZERO]).unwrap();
        assert!(b.tm_inverse(2, 8).unwrap().distance(&FourierVector::monomial(-1, -ONE)) < 1e-14);
        assert!(b.tm_inverse(1, 8).unwrap().distance(&FourierVector::one()) < 1e-14);
        let b = BlaschkeProduct::new(vec![c(0.5, 0.0), c(0.0, 1.0 / 3.0)]).unwrap();
        let m = 512;
        for j in 1..=2 {
            let prod = b
                .basis_samples(j, m)
                .zip_with(&b.tm_inverse(j, 64).unwrap().to_grid(m).unwrap(), |a, b| a * b);
            assert!(prod.max_deviation_from(ONE) < 1e-8);
        }
        assert!(matches!(b.tm_inverse(3, 8), Err(LabError::IndexOutOfRange { .. })));
    }

    #[test]
    fn sharp_examples() {
        let b = BlaschkeProduct::new(vec![c(0.0, 0.5)]).unwrap();
        assert_eq!(b.sharp().zeros(), &[c(0.0, -0.5)]);
        let r = BlaschkeProduct::from_real_zeros(&[0.5]).unwrap();
        assert_eq!(r.sharp(), r);
        let b = BlaschkeProduct::new(vec![c(0.3, 0.4), c(-0.2, 0.0)]).unwrap();
        assert_eq!(b.sharp().sharp(), b);
        for w in GridSamples::points(32) {
            let lhs = b.sharp().eval(w).unwrap();
            let rhs = b.eval(w.conj()).unwrap().conj();
            assert!((lhs - rhs).norm() < 1e-14);
        }
    }

    #[test]
    fn monomial_is_exact_power() {
        for n in 1..5 {
            let b = BlaschkeProduct::monomial(n);
            assert!(b.is_z_power());
            let w = c(0.6, 0.8);
            assert!((b.eval(w).unwrap() - w.powi(n as i32)).norm() < 1e-14);
        }
        // zeros [0] alone give B(z) = -z
        assert!(!BlaschkeProduct::new(vec![ZERO]).unwrap().is_z_power());
    }

    #[test]
    fn divisibility_examples() {
        let z = BlaschkeProduct::new(vec![ZERO]).unwrap();
        let z2 = BlaschkeProduct::new(vec![ZERO, ZERO]).unwrap();
        assert!(divides(&z, &z2, DIVIDES_TOL));
        assert!(!divides(&z2, &z, DIVIDES_TOL));
        let a = BlaschkeProduct::from_real_zeros(&[0.5]).unwrap();
        let g = BlaschkeProduct::new(vec![c(0.5, 0.0), c(0.0, 1.0 / 3.0)]).unwrap();
        assert!(divides(&a, &g, DIVIDES_TOL));
        assert!(!divides(&g, &a, DIVIDES_TOL));
    }

    #[test]
    fn expansion_matches_samples() {
        let b = BlaschkeProduct::new(vec![c(0.5, 0.0), c(0.0, 1.0 / 3.0)]).unwrap();
        let e = b.expansion(80);
        for w in GridSamples::points(16) {
            assert!((e.eval(w) - b.eval(w).unwrap()).norm() < 1e-12);
        }
        let basis = b.tm_basis(60).unwrap();
        // e_1 and e_2 span K_B: both are orthogonal to B·z^k
        for k in 0..4 {
            let bz = b.expansion(80).shift(k);
            for v in &basis.vectors {
                assert!(inner_product(v, &bz).norm() < 1e-12);
            }
        }
    }
}
