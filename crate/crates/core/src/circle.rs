//! Truncated Laurent series on the unit circle.
//!
//! A [`FourierVector`] stores the coefficients of `f(z) = Σ a_k z^k` over a
//! finite index window. Arithmetic is exact on that window: products are full
//! convolutions and nothing is dropped unless the caller asks for it through
//! [`FourierVector::clip`].

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Hard cap on the number of coefficients a product may produce.
pub const DEFAULT_BAND_CAP: usize = 1 << 16;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Inclusive index interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Band {
    pub lo: i64,
    pub hi: i64,
}

impl Band {
    pub fn new(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "empty band [{lo}, {hi}]");
        Band { lo, hi }
    }

    /// The symmetric band `[-n, n]`.
    pub fn symmetric(n: i64) -> Self {
        Band::new(-n.abs(), n.abs())
    }

    pub fn width(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn contains(&self, k: i64) -> bool {
        self.lo <= k && k <= self.hi
    }

    pub fn covers(&self, other: &Band) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn union(&self, other: &Band) -> Band {
        Band::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    pub fn widen(&self, by: i64) -> Band {
        Band::new(self.lo - by, self.hi + by)
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Truncated two-sided Fourier coefficient sequence.
///
/// `coeffs[i]` is the coefficient of `z^(lo + i)`. The value is kept in
/// canonical form: leading and trailing exact zeros are trimmed and the zero
/// vector is the empty list with `lo = 0`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "VectorWire", into = "VectorWire")]
pub struct FourierVector {
    lo: i64,
    coeffs: Vec<Complex64>,
}

/// JSON layout `{"lo": i, "coeffs": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct VectorWire {
    lo: i64,
    coeffs: Vec<[f64; 2]>,
}

impl From<VectorWire> for FourierVector {
    fn from(w: VectorWire) -> Self {
        FourierVector::new(w.lo, w.coeffs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
    }
}

impl From<FourierVector> for VectorWire {
    fn from(v: FourierVector) -> Self {
        VectorWire {
            lo: v.lo,
            coeffs: v.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl FourierVector {
    pub fn new(lo: i64, coeffs: Vec<Complex64>) -> Self {
        let mut v = FourierVector { lo, coeffs };
        v.normalize();
        v
    }

    pub fn zero() -> Self {
        FourierVector::default()
    }

    pub fn constant(c: Complex64) -> Self {
        FourierVector::new(0, vec![c])
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    /// `c · z^k`.
    pub fn monomial(k: i64, c: Complex64) -> Self {
        FourierVector::new(k, vec![c])
    }

    /// `z^k`.
    pub fn z_pow(k: i64) -> Self {
        Self::monomial(k, ONE)
    }

    /// Builds the vector with coefficient `f(k)` for every `k` in `band`.
    pub fn from_fn(band: Band, f: impl FnMut(i64) -> Complex64) -> Self {
        FourierVector::new(band.lo, band.indices().map(f).collect())
    }

    /// Real coefficients starting at index `lo`.
    pub fn from_real(lo: i64, coeffs: &[f64]) -> Self {
        FourierVector::new(lo, coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    fn normalize(&mut self) {
        let first = self.coeffs.iter().position(|c| *c != ZERO);
        match first {
            None => {
                self.lo = 0;
                self.coeffs.clear();
            }
            Some(start) => {
                let end = self.coeffs.iter().rposition(|c| *c != ZERO).unwrap();
                self.coeffs.truncate(end + 1);
                self.coeffs.drain(..start);
                self.lo += start as i64;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest stored index; `lo - 1` for the zero vector.
    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Support interval, `None` for the zero vector.
    pub fn band(&self) -> Option<Band> {
        (!self.is_zero()).then(|| Band::new(self.lo, self.hi()))
    }

    /// Largest `|k|` with a stored coefficient (0 for the zero vector).
    pub fn degree_bound(&self) -> i64 {
        self.band().map_or(0, |b| b.lo.abs().max(b.hi.abs()))
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        if k < self.lo || k > self.hi() {
            ZERO
        } else {
            self.coeffs[(k - self.lo) as usize]
        }
    }

    /// `(index, coefficient)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.lo + i as i64, *c))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc + c.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &FourierVector) -> f64 {
        (self - other).norm()
    }

    pub fn scale(&self, c: Complex64) -> FourierVector {
        FourierVector::new(self.lo, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_real(&self, c: f64) -> FourierVector {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Multiplication by `z^m`.
    pub fn shift(&self, m: i64) -> FourierVector {
        if self.is_zero() {
            return self.clone();
        }
        FourierVector {
            lo: self.lo + m,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Substitution `z ↦ z̄`: `a_k ↦ a_{-k}` without conjugation.
    pub fn reflect(&self) -> FourierVector {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        FourierVector {
            lo: -self.hi(),
            coeffs,
        }
    }

    /// Pointwise complex conjugation `J f = f̄`: `(Jf)_k = conj(a_{-k})`.
    pub fn conj_j(&self) -> FourierVector {
        let mut r = self.reflect();
        r.coeffs.iter_mut().for_each(|c| *c = c.conj());
        r
    }

    /// `J★ f = f#`, `f#(z) = conj(f(z̄))`: `(J★f)_k = conj(a_k)`.
    pub fn conj_jstar(&self) -> FourierVector {
        FourierVector {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Explicit truncation to `band`.
    pub fn clip(&self, band: Band) -> FourierVector {
        if self.is_zero() || band.hi < self.lo || band.lo > self.hi() {
            return FourierVector::zero();
        }
        let lo = band.lo.max(self.lo);
        let hi = band.hi.min(self.hi());
        FourierVector::new(
            lo,
            self.coeffs[(lo - self.lo) as usize..=(hi - self.lo) as usize].to_vec(),
        )
    }

    /// Coefficients on indices `k ≡ r (mod n)`.
    pub fn residue_class(&self, n: usize, r: usize) -> FourierVector {
        let n = n as i64;
        let r = r as i64;
        FourierVector::new(
            self.lo,
            self.iter()
                .map(|(k, c)| if (k - r).rem_euclid(n) == 0 { c } else { ZERO })
                .collect(),
        )
    }

    /// Same values laid out densely over `band` (zeros outside the support).
    pub fn dense(&self, band: Band) -> Vec<Complex64> {
        band.indices().map(|k| self.coeff(k)).collect()
    }

    /// Energy on strictly negative indices.
    pub fn negative_energy(&self) -> f64 {
        self.iter().filter(|(k, _)| *k < 0).map(|(_, c)| c.norm_sqr()).sum()
    }

    /// Exact Laurent product, failing when the result would exceed `cap` coefficients.
    pub fn multiply_capped(&self, other: &FourierVector, cap: usize) -> Result<FourierVector> {
        if self.is_zero() || other.is_zero() {
            return Ok(FourierVector::zero());
        }
        let width = self.len() + other.len() - 1;
        if width > cap {
            return Err(LabError::BandOverflow { width, cap });
        }
        let mut out = vec![ZERO; width];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(FourierVector::new(self.lo + other.lo, out))
    }

    /// Exact Laurent product with the default cap.
    pub fn multiply(&self, other: &FourierVector) -> Result<FourierVector> {
        self.multiply_capped(other, DEFAULT_BAND_CAP)
    }

    /// `|f|²` as a Laurent polynomial.
    pub fn abs_sqr(&self) -> Result<FourierVector> {
        self.multiply(&self.conj_j())
    }

    pub fn even_odd_split(&self) -> EvenOddPair {
        EvenOddPair {
            even: self.residue_class(2, 0),
            odd: self.residue_class(2, 1),
        }
    }

    pub fn even(&self) -> FourierVector {
        self.residue_class(2, 0)
    }

    pub fn odd(&self) -> FourierVector {
        self.residue_class(2, 1)
    }

    /// Samples at the `m`-th roots of unity.
    pub fn to_grid(&self, m: usize) -> Result<GridSamples> {
        if self.len() > m {
            return Err(LabError::Aliasing {
                width: self.len(),
                grid: m,
            });
        }
        Ok(self.to_grid_aliased(m))
    }

    /// Samples at the `m`-th roots of unity without the alias guard.
    pub(crate) fn to_grid_aliased(&self, m: usize) -> GridSamples {
        let mut buf = vec![ZERO; m];
        for (k, c) in self.iter() {
            buf[k.rem_euclid(m as i64) as usize] += c;
        }
        fft_inverse(&mut buf);
        GridSamples { values: buf }
    }

    /// Evaluates at a point of the circle (or anywhere, for Laurent polynomials).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.iter().map(|(k, c)| c * z.powi(k as i32)).sum()
    }
}

impl fmt::Display for FourierVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.iter().filter(|(_, c)| *c != ZERO) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)z^{}", c.re, c.im, k)?;
        }
        Ok(())
    }
}

impl Add for &FourierVector {
    type Output = FourierVector;
    fn add(self, rhs: &FourierVector) -> FourierVector {
        let band = match (self.band(), rhs.band()) {
            (None, _) => return rhs.clone(),
            (_, None) => return self.clone(),
            (Some(a), Some(b)) => a.union(&b),
        };
        FourierVector::from_fn(band, |k| self.coeff(k) + rhs.coeff(k))
    }
}

impl Sub for &FourierVector {
    type Output = FourierVector;
    fn sub(self, rhs: &FourierVector) -> FourierVector {
        self + &(-rhs)
    }
}

impl Neg for &FourierVector {
    type Output = FourierVector;
    fn neg(self) -> FourierVector {
        FourierVector {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for FourierVector {
    type Output = FourierVector;
    fn add(self, rhs: FourierVector) -> FourierVector {
        &self + &rhs
    }
}

impl Sub for FourierVector {
    type Output = FourierVector;
    fn sub(self, rhs: FourierVector) -> FourierVector {
        &self - &rhs
    }
}

impl Mul<Complex64> for &FourierVector {
    type Output = FourierVector;
    fn mul(self, rhs: Complex64) -> FourierVector {
        self.scale(rhs)
    }
}

impl std::iter::Sum for FourierVector {
    fn sum<I: Iterator<Item = FourierVector>>(iter: I) -> Self {
        iter.fold(FourierVector::zero(), |acc, v| &acc + &v)
    }
}

/// `⟨f, g⟩ = Σ a_k conj(b_k)`.
pub fn inner_product(f: &FourierVector, g: &FourierVector) -> Complex64 {
    let (lo, hi) = (f.lo().max(g.lo()), f.hi().min(g.hi()));
    (lo..=hi).map(|k| f.coeff(k) * g.coeff(k).conj()).sum()
}

/// Parity split `f = f^e + f^o`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenOddPair {
    pub even: FourierVector,
    pub odd: FourierVector,
}

impl EvenOddPair {
    pub fn recombine(&self) -> FourierVector {
        &self.even + &self.odd
    }
}

/// Values at the `m`-th roots of unity `w_t = exp(2πi t/m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSamples {
    pub values: Vec<Complex64>,
}

impl GridSamples {
    pub fn m(&self) -> usize {
        self.values.len()
    }

    /// Evaluates `f` at each grid point.
    pub fn from_fn(m: usize, f: impl Fn(Complex64) -> Complex64) -> Self {
        GridSamples {
            values: (0..m).map(|t| f(root_of_unity(t, m))).collect(),
        }
    }

    pub fn points(m: usize) -> impl Iterator<Item = Complex64> {
        (0..m).map(move |t| root_of_unity(t, m))
    }

    /// Recovers the coefficients of indices `lo..lo+m` from the samples.
    pub fn to_fourier(&self, lo: i64) -> FourierVector {
        let m = self.m();
        let mut buf = self.values.clone();
        fft_forward(&mut buf);
        let scale = 1.0 / m as f64;
        FourierVector::new(
            lo,
            (0..m as i64)
                .map(|i| buf[(lo + i).rem_euclid(m as i64) as usize] * scale)
                .collect(),
        )
    }

    /// Recovers the coefficients over `band`; the band must fit on the grid.
    pub fn to_band(&self, band: Band) -> Result<FourierVector> {
        if band.width() > self.m() {
            return Err(LabError::Aliasing {
                width: band.width(),
                grid: self.m(),
            });
        }
        Ok(self.to_fourier(band.lo).clip(band))
    }

    pub fn zip_with(&self, other: &GridSamples, f: impl Fn(Complex64, Complex64) -> Complex64) -> GridSamples {
        assert_eq!(self.m(), other.m(), "grid size mismatch");
        GridSamples {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> GridSamples {
        GridSamples {
            values: self.values.iter().map(|v| f(*v)).collect(),
        }
    }

    /// `max_t |v_t − c|`.
    pub fn max_deviation_from(&self, c: Complex64) -> f64 {
        self.values.iter().map(|v| (v - c).norm()).fold(0.0, f64::max)
    }
}

/// `from_grid`: the vector whose coefficients on `lo..lo+m` reproduce `s`.
pub fn from_grid(s: &GridSamples, lo: i64) -> FourierVector {
    s.to_fourier(lo)
}

/// `to_grid`: samples of `f` at the `m`-th roots of unity.
pub fn to_grid(f: &FourierVector, m: usize) -> Result<GridSamples> {
    f.to_grid(m)
}

pub fn root_of_unity(t: usize, m: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * t as f64 / m as f64)
}

/// Smallest grid used for pointwise checks on symbols of degree ≤ `band`.
pub fn check_grid_size(band: i64) -> usize {
    (4 * band.max(1) + 4) as usize
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// `X_t = Σ_j x_j exp(-2πi jt/m)`.
pub(crate) fn fft_forward(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()).process(buf));
}

/// `x_t = Σ_j X_j exp(+2πi jt/m)` (unnormalized).
pub(crate) fn fft_inverse(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()).process(buf));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn monomials_are_orthonormal() {
        let z = FourierVector::z_pow(1);
        assert_eq!(inner_product(&z, &z), ONE);
        assert_eq!(inner_product(&FourierVector::one(), &z), ZERO);
        let s = 1.0 / 2f64.sqrt();
        let f = FourierVector::from_real(0, &[s, s]);
        assert!((inner_product(&f, &f) - ONE).norm() < 1e-15);
    }

    #[test]
    fn products() {
        let z = FourierVector::z_pow(1);
        assert_eq!(z.multiply(&z.conj_j()).unwrap(), FourierVector::one());
        let a = FourierVector::from_real(0, &[1.0, 1.0]);
        let b = FourierVector::from_real(0, &[1.0, -1.0]);
        assert_eq!(a.multiply(&b).unwrap(), FourierVector::from_real(0, &[1.0, 0.0, -1.0]));
    }

    #[test]
    fn product_cap() {
        let a = FourierVector::new(0, vec![ONE; 10]);
        assert!(matches!(
            a.multiply_capped(&a, 15),
            Err(LabError::BandOverflow { width: 19, cap: 15 })
        ));
    }

    #[test]
    fn base_conjugations() {
        assert_eq!(FourierVector::z_pow(1).conj_j(), FourierVector::z_pow(-1));
        assert_eq!(
            FourierVector::constant(c(0.0, 1.0)).conj_j(),
            FourierVector::constant(c(0.0, -1.0))
        );
        assert_eq!(
            FourierVector::monomial(3, c(2.0, 1.0)).conj_j(),
            FourierVector::monomial(-3, c(2.0, -1.0))
        );
        assert_eq!(FourierVector::z_pow(1).conj_jstar(), FourierVector::z_pow(1));
        assert_eq!(
            FourierVector::monomial(1, c(0.0, 1.0)).conj_jstar(),
            FourierVector::monomial(1, c(0.0, -1.0))
        );
        let f = &FourierVector::z_pow(-1) + &FourierVector::constant(c(0.0, 2.0));
        let g = &FourierVector::z_pow(-1) + &FourierVector::constant(c(0.0, -2.0));
        assert_eq!(f.conj_jstar(), g);
    }

    #[test]
    fn parity_split() {
        let p = FourierVector::z_pow(1).even_odd_split();
        assert!(p.even.is_zero());
        assert_eq!(p.odd, FourierVector::z_pow(1));
        let p = FourierVector::from_real(0, &[1.0, 1.0, 1.0]).even_odd_split();
        assert_eq!(p.even, FourierVector::from_real(0, &[1.0, 0.0, 1.0]));
        assert_eq!(p.odd, FourierVector::z_pow(1));
        let p = FourierVector::z_pow(-3).even_odd_split();
        assert!(p.even.is_zero());
        assert_eq!(p.odd, FourierVector::z_pow(-3));
    }

    #[test]
    fn grid_samples_of_monomials() {
        let s = FourierVector::z_pow(1).to_grid(4).unwrap();
        let want = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (a, b) in s.values.iter().zip(want) {
            assert!((a - b).norm() < 1e-15);
        }
        let s = FourierVector::z_pow(-1).to_grid(4).unwrap();
        let want = [c(1.0, 0.0), c(0.0, -1.0), c(-1.0, 0.0), c(0.0, 1.0)];
        for (a, b) in s.values.iter().zip(want) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn grid_round_trip() {
        let f = FourierVector::new(-3, (0..7).map(|i| c(i as f64, 1.0 - i as f64)).collect());
        let back = from_grid(&f.to_grid(16).unwrap(), -8).clip(Band::new(-8, 7));
        assert!(f.distance(&back) < 1e-13);
        assert!(matches!(f.to_grid(4), Err(LabError::Aliasing { .. })));
    }

    #[test]
    fn canonical_zero() {
        let z = FourierVector::new(5, vec![ZERO, ZERO]);
        assert_eq!(z, FourierVector::zero());
        assert_eq!(z.lo(), 0);
        let t = FourierVector::new(-2, vec![ZERO, ONE, ZERO]);
        assert_eq!(t, FourierVector::z_pow(-1));
    }
}
