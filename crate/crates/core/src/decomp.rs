//! Wold-type splitting of L²(𝕋) along `B^k K_B`, and orthogonal projections.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::blaschke::BlaschkeProduct;
use crate::circle::{inner_product, Band, FourierVector, GridSamples, ZERO};
use crate::error::{LabError, Result};
use crate::operators::CircleMap;

/// Largest grid the sampled frame will allocate.
pub const MAX_FRAME_GRID: usize = 1 << 20;

/// Index distance after which `ρ^d` drops below double-precision noise.
pub(crate) fn decay_pad(rho: f64) -> i64 {
    if rho == 0.0 {
        0
    } else {
        ((1e-17f64).ln() / rho.ln()).ceil().min(400.0) as i64
    }
}

/// Smallest `k`-interval whose slots `B^k K_B` reach every index of `band`.
pub fn minimal_k_range(band: Band, degree: usize) -> (i64, i64) {
    let n = degree as i64;
    (band.lo.div_euclid(n), band.hi.div_euclid(n))
}

/// Bound on `|B'|·n⁻¹` over the circle: `B^k` carries its mass on indices
/// between `k·n/s` and `k·n·s` up to tails decaying like `ρ^d`.
pub(crate) fn spread(rho: f64) -> f64 {
    (1.0 + rho) / (1.0 - rho)
}

/// `[min(x·s, x/s), max(x·s, x/s)]` for the endpoints of `band`.
pub(crate) fn spread_band(band: Band, s: f64) -> Band {
    let scale = |x: i64, up: bool| {
        let (a, b) = (x as f64 * s, x as f64 / s);
        if up { a.max(b).ceil() as i64 } else { a.min(b).floor() as i64 }
    };
    Band::new(scale(band.lo, false), scale(band.hi, true))
}

/// `k`-interval of the slots that carry non-negligible mass of functions supported in `band`.
pub fn reach_k_range(band: Band, b: &BlaschkeProduct) -> (i64, i64) {
    let n = b.degree() as i64;
    let pad = decay_pad(b.rho());
    let r = spread_band(band, spread(b.rho()));
    (r.lo.div_euclid(n) - pad, r.hi.div_euclid(n) + pad)
}

#[derive(Debug, Clone)]
enum FrameKind {
    /// `B = s·z^n`: `e_i B^k = (−1)^{i−1} s^k z^{nk+i−1}`.
    Exact { n: usize, unit: Complex64 },
    /// `vectors[i][k − k_lo]`: truncated coefficients of `e_{i+1}·B^k` on the window.
    Sampled { vectors: Vec<Vec<FourierVector>> },
}

/// The orthonormal family `e_i·B^k` restricted to a finite `k`-range,
/// precomputed for inputs supported in a fixed band.
#[derive(Debug, Clone)]
pub struct WoldFrame {
    parent: BlaschkeProduct,
    input: Band,
    k_range: (i64, i64),
    window: Band,
    tail_bound: f64,
    grid: usize,
    kind: FrameKind,
}

impl WoldFrame {
    /// Frame for inputs supported in `input`; `k_range` defaults to [`reach_k_range`].
    /// Components are reported on a window wide enough to hold them up to the tail bound.
    pub fn new(parent: &BlaschkeProduct, input: Band, k_range: Option<(i64, i64)>) -> Result<Self> {
        Self::build(parent, input, true, k_range)
    }

    /// Frame whose outputs are truncated to the input band itself, for band compressions.
    pub fn compression(parent: &BlaschkeProduct, band: Band) -> Result<Self> {
        Self::build(parent, band, false, None)
    }

    fn build(parent: &BlaschkeProduct, input: Band, widen: bool, k_range: Option<(i64, i64)>) -> Result<Self> {
        let n = parent.degree();
        if n == 0 {
            return Err(LabError::Malformed("constant Blaschke product has no Wold slots".into()));
        }
        let minimal = minimal_k_range(input, n);
        if let Some((lo, hi)) = k_range {
            if lo > minimal.0 || hi < minimal.1 {
                return Err(LabError::InsufficientRange {
                    requested_lo: lo,
                    requested_hi: hi,
                    minimal_lo: minimal.0,
                    minimal_hi: minimal.1,
                });
            }
        }
        if let Some((n, unit)) = parent.monomial_form() {
            let k_range = k_range.unwrap_or((minimal.0 - 1, minimal.1 + 1));
            return Ok(WoldFrame {
                parent: parent.clone(),
                input,
                k_range,
                window: input,
                tail_bound: 0.0,
                grid: 0,
                kind: FrameKind::Exact { n, unit },
            });
        }

        let rho = parent.rho();
        let pad = decay_pad(rho);
        let k_range = k_range.unwrap_or_else(|| reach_k_range(input, parent));
        let s = spread(rho);
        let window = if widen { spread_band(input, s * s).widen(pad) } else { input };
        let kmax = k_range.0.abs().max(k_range.1.abs() + 1) as f64;
        let reach = (kmax * n as f64 * s).ceil() as usize;
        let m = (2 * reach + 2 * window.width() + 64).next_power_of_two().max(256);
        if m > MAX_FRAME_GRID {
            return Err(LabError::BandOverflow {
                width: m,
                cap: MAX_FRAME_GRID,
            });
        }

        let basis: Vec<GridSamples> = (1..=n).map(|j| parent.basis_samples(j, m)).collect();
        let vectors = sampled_family(parent, &basis, k_range, window, m);
        Ok(WoldFrame {
            parent: parent.clone(),
            input,
            k_range,
            window,
            tail_bound: n as f64 * rho.powi(pad as i32) / (1.0 - rho),
            grid: m,
            kind: FrameKind::Sampled { vectors },
        })
    }

    /// Grid used by a sampled frame (0 for exact frames).
    pub fn grid(&self) -> usize {
        self.grid
    }

    /// `weights[i]·B^k` over the frame's `k`-range, truncated to the window.
    pub(crate) fn family(&self, weights: &[GridSamples]) -> Vec<Vec<FourierVector>> {
        sampled_family(&self.parent, weights, self.k_range, self.window, self.grid)
    }

    pub fn parent(&self) -> &BlaschkeProduct {
        &self.parent
    }

    pub fn input_band(&self) -> Band {
        self.input
    }

    /// Band on which components and reconstructions are reported.
    pub fn window(&self) -> Band {
        self.window
    }

    pub fn k_range(&self) -> (i64, i64) {
        self.k_range
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.kind, FrameKind::Exact { .. })
    }

    fn check_input(&self, f: &FourierVector) -> Result<()> {
        match f.band() {
            Some(b) if !self.input.covers(&b) => Err(LabError::OutsideBand {
                lo: b.lo,
                hi: b.hi,
                band_lo: self.input.lo,
                band_hi: self.input.hi,
            }),
            _ => Ok(()),
        }
    }

    /// `e_i·B^k` (1-based `i`), truncated to the window for sampled frames.
    pub fn slot_vector(&self, i: usize, k: i64) -> FourierVector {
        match &self.kind {
            FrameKind::Exact { n, unit } => {
                let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
                FourierVector::monomial(*n as i64 * k + i as i64 - 1, unit.powi(k as i32) * sign)
            }
            FrameKind::Sampled { vectors } => vectors[i - 1][(k - self.k_range.0) as usize].clone(),
        }
    }

    pub fn decompose(self: &Arc<Self>, f: &FourierVector) -> Result<WoldCoefficients> {
        self.check_input(f)?;
        let n = self.parent.degree();
        let (k_lo, k_hi) = self.k_range;
        let table = (1..=n)
            .map(|i| {
                (k_lo..=k_hi)
                    .map(|k| match &self.kind {
                        FrameKind::Exact { n, unit } => {
                            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
                            f.coeff(*n as i64 * k + i as i64 - 1) * (unit.powi(k as i32) * sign).conj()
                        }
                        FrameKind::Sampled { vectors } => {
                            inner_product(f, &vectors[i - 1][(k - k_lo) as usize])
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(WoldCoefficients {
            frame: Arc::clone(self),
            input_norm_sqr: f.norm_sqr(),
            table,
        })
    }

    /// `f_i`, the orthogonal projection of `f` onto `closed span{e_i B^k}`.
    pub fn component(&self, f: &FourierVector, i: usize) -> Result<FourierVector> {
        self.check_input(f)?;
        match &self.kind {
            FrameKind::Exact { n, .. } => Ok(f.residue_class(*n, i - 1)),
            FrameKind::Sampled { vectors } => {
                let mut acc = vec![ZERO; self.window.width()];
                for g in &vectors[i - 1] {
                    let c = inner_product(f, g);
                    if c == ZERO {
                        continue;
                    }
                    for (k, v) in g.iter() {
                        acc[(k - self.window.lo) as usize] += c * v;
                    }
                }
                Ok(FourierVector::new(self.window.lo, acc))
            }
        }
    }

    pub fn components(&self, f: &FourierVector) -> Result<Vec<FourierVector>> {
        (1..=self.parent.degree()).map(|i| self.component(f, i)).collect()
    }
}

/// `c_{j,k} = ⟨f, e_j B^k⟩` over a finite `k`-range.
#[derive(Debug, Clone)]
pub struct WoldCoefficients {
    frame: Arc<WoldFrame>,
    input_norm_sqr: f64,
    /// `table[j−1][k − k_lo]`.
    pub table: Vec<Vec<Complex64>>,
}

impl WoldCoefficients {
    pub fn parent(&self) -> &BlaschkeProduct {
        &self.frame.parent
    }

    pub fn k_range(&self) -> (i64, i64) {
        self.frame.k_range
    }

    pub fn tail_bound(&self) -> f64 {
        self.frame.tail_bound
    }

    pub fn get(&self, j: usize, k: i64) -> Complex64 {
        let (lo, hi) = self.frame.k_range;
        if j == 0 || j > self.table.len() || k < lo || k > hi {
            return ZERO;
        }
        self.table[j - 1][(k - lo) as usize]
    }

    pub fn energy(&self) -> f64 {
        self.table.iter().flatten().map(|c| c.norm_sqr()).sum()
    }

    /// `|‖f‖² − Σ|c_{j,k}|²|`.
    pub fn parseval_defect(&self) -> f64 {
        (self.input_norm_sqr - self.energy()).abs()
    }

    /// `Σ c_{j,k}·e_j·B^k`, on the frame window.
    pub fn reconstruct(&self) -> FourierVector {
        let (lo, _) = self.frame.k_range;
        let mut acc = vec![ZERO; self.frame.window.width()];
        for (j, row) in self.table.iter().enumerate() {
            for (t, &c) in row.iter().enumerate() {
                if c == ZERO {
                    continue;
                }
                for (k, v) in self.frame.slot_vector(j + 1, lo + t as i64).iter() {
                    if self.frame.window.contains(k) {
                        acc[(k - self.frame.window.lo) as usize] += c * v;
                    }
                }
            }
        }
        FourierVector::new(self.frame.window.lo, acc)
    }

    /// Nonzero entries as `(j, k, c)`, for reports.
    pub fn entries(&self, threshold: f64) -> Vec<(usize, i64, Complex64)> {
        let (lo, _) = self.frame.k_range;
        let mut out = Vec::new();
        for (j, row) in self.table.iter().enumerate() {
            for (t, &c) in row.iter().enumerate() {
                if c.norm() > threshold {
                    out.push((j + 1, lo + t as i64, c));
                }
            }
        }
        out
    }
}

fn sampled_family(
    parent: &BlaschkeProduct,
    weights: &[GridSamples],
    k_range: (i64, i64),
    window: Band,
    m: usize,
) -> Vec<Vec<FourierVector>> {
    let b = parent.samples(m);
    let mut out = vec![Vec::new(); weights.len()];
    let mut power = b.map(|v| v.powi(k_range.0 as i32));
    for _ in k_range.0..=k_range.1 {
        for (i, w) in weights.iter().enumerate() {
            let g = w.zip_with(&power, |a, p| a * p);
            out[i].push(g.to_fourier(-(m as i64) / 2).clip(window));
        }
        power = power.zip_with(&b, |p, v| p * v);
    }
    out
}

/// Wold coefficients of `f`; `k_range = None` picks the range automatically.
pub fn wold_decompose(
    f: &FourierVector,
    b: &BlaschkeProduct,
    k_range: Option<(i64, i64)>,
) -> Result<WoldCoefficients> {
    let band = f.band().unwrap_or(Band::new(0, 0));
    Arc::new(WoldFrame::new(b, band, k_range)?).decompose(f)
}

/// The `n` components `f_i ∈ H_i(e_i, B)` with `Σ f_i = f`.
pub fn component_split(f: &FourierVector, b: &BlaschkeProduct) -> Result<Vec<FourierVector>> {
    let band = f.band().unwrap_or(Band::new(0, 0));
    WoldFrame::new(b, band, None)?.components(f)
}

/// Closed subspaces that appear as domains and targets of invariance checks.
#[derive(Debug, Clone)]
pub enum SubspaceSpec {
    /// Functions with vanishing negative coefficients.
    HardyH2,
    /// `span{z^k : k ≤ top}`; `top = 0` is the conjugate Hardy space.
    CoHardy { top: i64 },
    /// `K_θ = H² ⊖ θH²`.
    Model(BlaschkeProduct),
    /// `αH²`.
    Beurling(BlaschkeProduct),
    /// `H_i(e_i, B)`, 1-based `i`.
    Component(BlaschkeProduct, usize),
    /// Everything.
    Whole,
}

fn hardy_part(f: &FourierVector) -> FourierVector {
    match f.band() {
        Some(b) if b.hi >= 0 => f.clip(Band::new(0, b.hi)),
        _ => FourierVector::zero(),
    }
}

/// `α·P_+(ᾱ f)`, computed on a grid and reported on `band(f) ∪ [0, hi]` widened by the decay pad.
fn beurling_projection(f: &FourierVector, alpha: &BlaschkeProduct) -> Result<FourierVector> {
    let Some(band) = f.band() else {
        return Ok(FourierVector::zero());
    };
    let window = Band::new(band.lo.min(0), band.hi.max(0)).widen(decay_pad(alpha.rho()));
    let window = Band::new(window.lo.max(0), window.hi + alpha.degree() as i64);
    if band.hi < 0 && alpha.monomial_form().is_some() {
        return Ok(FourierVector::zero());
    }
    let m = (4 * window.width().max(band.width()) + 64).next_power_of_two().max(256);
    let a = alpha.samples(m);
    let fs = f.to_grid(m)?;
    let q = fs.zip_with(&a, |x, y| x * y.conj()).to_fourier(-(m as i64) / 2);
    let qs = hardy_part(&q).to_grid_aliased(m);
    Ok(qs.zip_with(&a, |x, y| x * y).to_fourier(-(m as i64) / 2).clip(window))
}

/// Orthogonal projection onto `s`.
pub fn project(f: &FourierVector, s: &SubspaceSpec) -> Result<FourierVector> {
    match s {
        SubspaceSpec::HardyH2 => Ok(hardy_part(f)),
        SubspaceSpec::CoHardy { top } => Ok(match f.band() {
            Some(b) if b.lo <= *top => f.clip(Band::new(b.lo, *top)),
            _ => FourierVector::zero(),
        }),
        SubspaceSpec::Model(theta) => {
            if let Some((n, _)) = theta.monomial_form() {
                return Ok(match f.band() {
                    Some(b) if b.hi >= 0 => f.clip(Band::new(0, n as i64 - 1)),
                    _ => FourierVector::zero(),
                });
            }
            Ok(hardy_part(f) - beurling_projection(f, theta)?)
        }
        SubspaceSpec::Beurling(alpha) => {
            if let Some((n, _)) = alpha.monomial_form() {
                return Ok(match f.band() {
                    Some(b) if b.hi >= n as i64 => f.clip(Band::new(n as i64, b.hi)),
                    _ => FourierVector::zero(),
                });
            }
            beurling_projection(f, alpha)
        }
        SubspaceSpec::Component(b, i) => {
            if *i == 0 || *i > b.degree() {
                return Err(LabError::IndexOutOfRange {
                    index: *i,
                    degree: b.degree(),
                });
            }
            Ok(component_split(f, b)?.swap_remove(i - 1))
        }
        SubspaceSpec::Whole => Ok(f.clone()),
    }
}

/// Relative tolerance for deciding that a probe lies in its source subspace.
pub const PROBE_MEMBERSHIP_TOL: f64 = 1e-8;

/// `max_v ‖(I − P_target) A v‖ / ‖v‖` over probes `v ∈ source`.
pub fn invariance_residual(
    a: &dyn CircleMap,
    source: &SubspaceSpec,
    target: &SubspaceSpec,
    probes: &[FourierVector],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for v in probes {
        let norm = v.norm();
        if norm == 0.0 {
            continue;
        }
        let outside = v.distance(&project(v, source)?);
        if outside > PROBE_MEMBERSHIP_TOL * norm {
            return Err(LabError::ProbeOutsideSubspace {
                residual: outside / norm,
            });
        }
        let av = a.apply(v)?;
        worst = worst.max(av.distance(&project(&av, target)?) / norm);
    }
    Ok(worst)
}

/// Orthonormal probes spanning `K_θ` (its Takenaka–Malmquist basis).
pub fn model_space_probes(theta: &BlaschkeProduct, band: i64) -> Result<Vec<FourierVector>> {
    Ok(theta.tm_basis(band)?.vectors)
}

/// Report helper: the table as `[[j, k, re, im], ...]` above a noise threshold.
#[derive(Debug, Serialize)]
pub struct TableEntry {
    pub j: usize,
    pub k: i64,
    pub c: [f64; 2],
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::ONE;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_vector(rng: &mut ChaCha8Rng, band: Band) -> FourierVector {
        FourierVector::from_fn(band, |_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    #[test]
    fn monomial_frame_examples() {
        let b = BlaschkeProduct::new(vec![ZERO, ZERO]).unwrap();
        let w = wold_decompose(&FourierVector::one(), &b, None).unwrap();
        assert_eq!(w.entries(0.0), vec![(1, 0, ONE)]);
        let w = wold_decompose(&FourierVector::z_pow(3), &b, None).unwrap();
        assert_eq!(w.entries(0.0), vec![(2, 1, -ONE)]);
        let f = FourierVector::from_real(0, &[1.0, 1.0, 1.0]);
        let parts = component_split(&f, &b).unwrap();
        assert_eq!(parts[0], FourierVector::from_real(0, &[1.0, 0.0, 1.0]));
        assert_eq!(parts[1], FourierVector::z_pow(1));
    }

    #[test]
    fn zero_input() {
        let b = BlaschkeProduct::new(vec![ZERO, c(0.5, 0.0)]).unwrap();
        for p in component_split(&FourierVector::zero(), &b).unwrap() {
            assert!(p.is_zero());
        }
    }

    #[test]
    fn explicit_range_is_validated() {
        let b = BlaschkeProduct::monomial(2);
        let f = FourierVector::z_pow(5);
        match wold_decompose(&f, &b, Some((0, 1))) {
            Err(LabError::InsufficientRange { minimal_hi, .. }) => assert_eq!(minimal_hi, 2),
            other => panic!("{other:?}"),
        }
        assert!(wold_decompose(&f, &b, Some((-1, 3))).is_ok());
    }

    #[test]
    fn sampled_frame_parseval_and_orthogonality() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for zeros in [vec![ZERO, c(0.5, 0.0)], vec![c(0.5, 0.0), c(0.0, 1.0 / 3.0)]] {
            let b = BlaschkeProduct::new(zeros).unwrap();
            let f = random_vector(&mut rng, Band::symmetric(8));
            let w = wold_decompose(&f, &b, None).unwrap();
            assert!(w.parseval_defect() < w.tail_bound() * f.norm_sqr() + 1e-8);
            assert!(w.reconstruct().distance(&f) < 1e-8);
            let parts = component_split(&f, &b).unwrap();
            let sum: FourierVector = parts.iter().cloned().sum();
            assert!(sum.distance(&f) < 1e-8);
            assert!(inner_product(&parts[0], &parts[1]).norm() < 1e-8);
        }
    }

    #[test]
    fn projections() {
        let f = FourierVector::from_real(-1, &[1.0, 1.0, 1.0]);
        assert_eq!(project(&f, &SubspaceSpec::HardyH2).unwrap(), FourierVector::from_real(0, &[1.0, 1.0]));
        let g = FourierVector::from_real(1, &[1.0, 0.0, 1.0]);
        let z2 = BlaschkeProduct::new(vec![ZERO, ZERO]).unwrap();
        assert_eq!(project(&g, &SubspaceSpec::Model(z2)).unwrap(), FourierVector::z_pow(1));
        let z = BlaschkeProduct::new(vec![ZERO]).unwrap();
        let h = FourierVector::from_real(0, &[1.0, 1.0]);
        assert_eq!(project(&h, &SubspaceSpec::Beurling(z)).unwrap(), FourierVector::z_pow(1));
    }

    #[test]
    fn sampled_projections_are_idempotent_and_self_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let theta = BlaschkeProduct::new(vec![c(0.5, 0.0), c(0.0, 0.4)]).unwrap();
        for spec in [SubspaceSpec::Model(theta.clone()), SubspaceSpec::Beurling(theta.clone())] {
            let f = random_vector(&mut rng, Band::symmetric(6));
            let g = random_vector(&mut rng, Band::symmetric(6));
            let pf = project(&f, &spec).unwrap();
            let pg = project(&g, &spec).unwrap();
            assert!(project(&pf, &spec).unwrap().distance(&pf) < 1e-10);
            assert!((inner_product(&pf, &g) - inner_product(&f, &pg)).norm() < 1e-10);
        }
        // TM vectors lie in K_θ
        for e in theta.tm_basis(64).unwrap().vectors {
            let pe = project(&e, &SubspaceSpec::Model(theta.clone())).unwrap();
            assert!(pe.distance(&e) < 1e-10);
        }
    }
}
