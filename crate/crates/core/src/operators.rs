//! Linear and antilinear maps on truncated L²(𝕋): multiplications, the base
//! conjugations, multi-symbol operators over a Blaschke product, dense band
//! matrices, and residual-based relation checks.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blaschke::BlaschkeProduct;
use crate::circle::{inner_product, Band, FourierVector, GridSamples, ONE, ZERO};
use crate::decomp::{decay_pad, WoldFrame};
use crate::error::{LabError, Result};
use crate::report::CertReport;

/// Default tolerance for conjugation axioms.
pub const CONJUGATION_TOL: f64 = 1e-9;
/// Default relative tolerance for membership in a commutant.
pub const COMMUTANT_TOL: f64 = 1e-8;
/// Random vectors added to the monomial probes.
pub const RANDOM_PROBES: usize = 32;

/// A map on Fourier vectors, linear or antilinear.
pub trait CircleMap: Send + Sync {
    fn apply(&self, f: &FourierVector) -> Result<FourierVector>;
    fn is_antilinear(&self) -> bool;
}

impl<T: CircleMap + ?Sized> CircleMap for Arc<T> {
    fn apply(&self, f: &FourierVector) -> Result<FourierVector> {
        (**self).apply(f)
    }
    fn is_antilinear(&self) -> bool {
        (**self).is_antilinear()
    }
}

impl<T: CircleMap + ?Sized> CircleMap for &T {
    fn apply(&self, f: &FourierVector) -> Result<FourierVector> {
        (**self).apply(f)
    }
    fn is_antilinear(&self) -> bool {
        (**self).is_antilinear()
    }
}

pub type MapRef = Arc<dyn CircleMap>;

#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl CircleMap for Identity {
    fn apply(&self, f: &FourierVector) -> Result<FourierVector> {
        Ok(f.clone())
    }
    fn is_antilinear(&self) -> bool {
        false
    }
}

/// `f ↦ conj(f(z))`, coefficientwise `a_k ↦ conj(a_{−k})`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConjJ;

impl CircleMap for ConjJ {
    fn apply(&self, f: &FourierVector) -> Result<FourierVector> {
        Ok(f.conj_j())
    }
    fn is_antilinear(&self) -> bool {
        true
    }
}

/// `f ↦ conj(f(z̄))`, coefficientwise `a_k ↦ conj(a_k)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConjJStar;

impl CircleMap for ConjJStar {
    fn apply(&self, f: &FourierVector) -> Result<FourierVector> {
        Ok(f.conj_jstar())
    }
    fn is_antilinear(&self) -> bool {
        true
    }
}

/// `M_φ`.
#[derive(Debug, Clone)]
pub struct Multiplication {
    pub symbol: FourierVector,
}

impl Multiplication {
    pub fn new(symbol: FourierVector) -> Self {
        Multiplication { symbol }
    }

    /// `M_{z^k}`.
    pub fn z_pow(k: i64) -> Self {
        Multiplication::new(FourierVector::z_pow(k))
    }

    /// `M_B`, exact for `B = s·z^n` and otherwise truncated to indices `0..=hi`.
    pub fn blaschke(b: &BlaschkeProduct, hi: i64) -> Self {
        match b.monomial_form() {
            Some((n, s)) => Multiplication::new(FourierVector::monomial(n as i64, s)),
            None => Multiplication::new(b.expansion(hi)),
        }
    }

    /// `M_{B̄}`, with the same truncation rule.
    pub fn blaschke_conj(b: &BlaschkeProduct, hi: i64) -> Self {
        Multiplication::new(Multiplication::blaschke(b, hi).symbol.conj_j())
    }
}

impl CircleMap for Multiplication {
    fn apply(&self, f: &FourierVector) -> Result<FourierVector> {
        f.multiply(&self.symbol)
    }
    fn is_antilinear(&self) -> bool {
        false
    }
}

/// `outer ∘ inner`.
#[derive(Clone)]
pub struct Composed {
    pub outer: MapRef,
    pub inner: MapRef,
}

impl CircleMap for Composed {
    fn apply(&self, f: &FourierVector) -> Result<FourierVector> {
        self.outer.apply(&self.inner.apply(f)?)
    }
    fn is_antilinear(&self) -> bool {
        self.outer.is_antilinear() != self.inner.is_antilinear()
    }
}

pub fn compose(outer: MapRef, inner: MapRef) -> MapRef {
    Arc::new(Composed { outer, inner })
}

/// Right-to-left composition of a chain: `chain[0] ∘ chain[1] ∘ …`.
pub fn compose_all(chain: Vec<MapRef>) -> MapRef {
    let mut it = chain.into_iter().rev();
    let first = it.next().unwrap_or_else(|| Arc::new(Identity));
    it.fold(first, |acc, outer| compose(outer, acc))
}

/// `Σ c_i A_i` for maps of the same linearity.
#[derive(Clone)]
pub struct Combination {
    terms: Vec<(Complex64, MapRef)>,
    antilinear: bool,
}

impl Combination {
    pub fn new(terms: Vec<(Complex64, MapRef)>) -> Result<Self> {
        let antilinear = terms.first().is_some_and(|(_, m)| m.is_antilinear());
        if terms.iter().any(|(_, m)| m.is_antilinear() != antilinear) {
            return Err(LabError::Malformed("cannot add linear and antilinear maps".into()));
        }
        Ok(Combination { terms, antilinear })
    }
}

impl CircleMap for Combination {
    fn apply(&self, f: &FourierVector) -> Result<FourierVector> {
        let mut acc = FourierVector::zero();
        for (c, m) in &self.terms {
            acc = acc + m.apply(f)?.scale(*c);
        }
        Ok(acc)
    }
    fn is_antilinear(&self) -> bool {
        self.antilinear
    }
}

/// Truncation of another map's output to a band.
#[derive(Clone)]
pub struct Clipped {
    pub inner: MapRef,
    pub band: Band,
}

impl CircleMap for Clipped {
    fn apply(&self, f: &FourierVector) -> Result<FourierVector> {
        Ok(self.inner.apply(f)?.clip(self.band))
    }
    fn is_antilinear(&self) -> bool {
        self.inner.is_antilinear()
    }
}

/// `M_{[φ_1,…,φ_n]} f = Σ φ_i f_i` with `f_i` the Wold components of `f` along `B`.
///
/// For `B = s·z^n` the components are residue classes and the map is exact on
/// every input. Otherwise inputs must lie in the working band chosen at
/// construction and outputs are truncated to it.
#[derive(Debug, Clone)]
pub struct MultiSymbolOp {
    blaschke: BlaschkeProduct,
    symbols: Vec<FourierVector>,
    frame: Option<Arc<WoldFrame>>,
}

impl MultiSymbolOp {
    pub fn new(b: &BlaschkeProduct, symbols: Vec<FourierVector>, band: i64) -> Result<Self> {
        if symbols.len() != b.degree() {
            return Err(LabError::WrongDegree {
                expected: b.degree(),
                found: symbols.len(),
            });
        }
        let frame = if b.zeros().iter().all(|z| *z == ZERO) {
            None
        } else {
            Some(Arc::new(WoldFrame::compression(b, Band::symmetric(band))?))
        };
        Ok(MultiSymbolOp {
            blaschke: b.clone(),
            symbols,
            frame,
        })
    }

    /// Shares an existing frame (its window becomes the working band).
    pub fn with_frame(frame: Arc<WoldFrame>, symbols: Vec<FourierVector>) -> Result<Self> {
        let b = frame.parent().clone();
        if symbols.len() != b.degree() {
            return Err(LabError::WrongDegree {
                expected: b.degree(),
                found: symbols.len(),
            });
        }
        Ok(MultiSymbolOp {
            blaschke: b,
            symbols,
            frame: Some(frame),
        })
    }

    /// `M_{[φ,…,φ]} = M_φ`.
    pub fn diagonal(b: &BlaschkeProduct, symbol: FourierVector, band: i64) -> Result<Self> {
        MultiSymbolOp::new(b, vec![symbol; b.degree()], band)
    }

    pub fn blaschke(&self) -> &BlaschkeProduct {
        &self.blaschke
    }

    pub fn symbols(&self) -> &[FourierVector] {
        &self.symbols
    }

    pub fn frame(&self) -> Option<&Arc<WoldFrame>> {
        self.frame.as_ref()
    }

    /// Grid sup-norm of each symbol.
    pub fn sup_norms(&self) -> Vec<f64> {
        self.symbols
            .iter()
            .map(|s| {
                let m = s.len().max(1).next_power_of_two() * 4;
                s.to_grid_aliased(m).max_deviation_from(ZERO)
            })
            .collect()
    }

    pub fn components(&self, f: &FourierVector) -> Result<Vec<FourierVector>> {
        match &self.frame {
            None => Ok((0..self.symbols.len())
                .map(|r| f.residue_class(self.symbols.len(), r))
                .collect()),
            Some(frame) => frame.components(f),
        }
    }
}

impl CircleMap for MultiSymbolOp {
    fn apply(&self, f: &FourierVector) -> Result<FourierVector> {
        let mut acc = FourierVector::zero();
        for (phi, part) in self.symbols.iter().zip(self.components(f)?) {
            acc = acc + phi.multiply(&part)?;
        }
        Ok(match &self.frame {
            Some(frame) => acc.clip(frame.window()),
            None => acc,
        })
    }
    fn is_antilinear(&self) -> bool {
        false
    }
}

/// The four block symbols `(φ_1^e, φ_2^o; φ_1^o, φ_2^e)` of an operator over `z²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Blocks2x2 {
    pub top_left: FourierVector,
    pub top_right: FourierVector,
    pub bottom_left: FourierVector,
    pub bottom_right: FourierVector,
}

pub fn block_2x2(m: &MultiSymbolOp) -> Result<Blocks2x2> {
    match m.blaschke.monomial_form() {
        Some((2, _)) => {}
        _ => {
            return Err(LabError::WrongDegree {
                expected: 2,
                found: m.blaschke.degree(),
            })
        }
    }
    let a = m.symbols[0].even_odd_split();
    let b = m.symbols[1].even_odd_split();
    Ok(Blocks2x2 {
        top_left: a.even,
        top_right: b.odd,
        bottom_left: a.odd,
        bottom_right: b.even,
    })
}

impl Blocks2x2 {
    /// `(P_even g, P_odd g)` for `g = M f`, recombined.
    pub fn apply(&self, f: &FourierVector) -> Result<FourierVector> {
        let s = f.even_odd_split();
        let even = self.top_left.multiply(&s.even)? + self.top_right.multiply(&s.odd)?;
        let odd = self.bottom_left.multiply(&s.even)? + self.bottom_right.multiply(&s.odd)?;
        Ok(even + odd)
    }
}

/// Pointwise conditions for `M_{[s1, s2]}` over `z²` to be unitary: rows and
/// columns of `[[s1^e, s2^o], [s1^o, s2^e]]` orthonormal on the grid.
/// Returns `(name, max grid deviation)` pairs.
pub fn block_unitarity(s1: &FourierVector, s2: &FourierVector, m: usize) -> Vec<(&'static str, f64)> {
    let p = s1.even_odd_split();
    let q = s2.even_odd_split();
    let g = |v: &FourierVector| v.to_grid_aliased(m);
    let (ae, ao, be, bo) = (g(&p.even), g(&p.odd), g(&q.even), g(&q.odd));
    let n2 = |s: &GridSamples| s.map(|v| Complex64::new(v.norm_sqr(), 0.0));
    let add = |x: &GridSamples, y: &GridSamples| x.zip_with(y, |a, b| a + b);
    let cross = |x: &GridSamples, y: &GridSamples| x.zip_with(y, |a, b| a * b.conj());
    vec![
        ("|s1e|^2+|s1o|^2=1", add(&n2(&ae), &n2(&ao)).max_deviation_from(ONE)),
        ("|s2e|^2+|s2o|^2=1", add(&n2(&be), &n2(&bo)).max_deviation_from(ONE)),
        ("|s1e|^2+|s2o|^2=1", add(&n2(&ae), &n2(&bo)).max_deviation_from(ONE)),
        ("|s1o|^2+|s2e|^2=1", add(&n2(&ao), &n2(&be)).max_deviation_from(ONE)),
        ("s1e*conj(s2o)+s1o*conj(s2e)=0", add(&cross(&ae, &bo), &cross(&ao, &be)).max_deviation_from(ZERO)),
        ("s1e*conj(s1o)+s2o*conj(s2e)=0", add(&cross(&ae, &ao), &cross(&bo, &be)).max_deviation_from(ZERO)),
    ]
}

/// `max_t | |s1|² + |s2|² − 2 |` on an `m`-point grid.
pub fn modulus_sum_deviation(s1: &FourierVector, s2: &FourierVector, m: usize) -> f64 {
    s1.to_grid_aliased(m)
        .zip_with(&s2.to_grid_aliased(m), |a, b| Complex64::new(a.norm_sqr() + b.norm_sqr(), 0.0))
        .max_deviation_from(Complex64::new(2.0, 0.0))
}

/// Dense matrix of a linear map from `domain` to `codomain`, columns indexed by monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOp {
    pub domain: Band,
    pub codomain: Band,
    /// `matrix[row][col]`, rows over `codomain`, columns over `domain`.
    pub matrix: Vec<Vec<Complex64>>,
}

impl LinearOp {
    pub fn new(domain: Band, codomain: Band, matrix: Vec<Vec<Complex64>>) -> Result<Self> {
        if matrix.len() != codomain.width() || matrix.iter().any(|r| r.len() != domain.width()) {
            return Err(LabError::Malformed(format!(
                "matrix shape does not match bands {domain} -> {codomain}"
            )));
        }
        Ok(LinearOp {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn identity(band: Band) -> Self {
        let w = band.width();
        let matrix = (0..w)
            .map(|i| (0..w).map(|j| if i == j { ONE } else { ZERO }).collect())
            .collect();
        LinearOp {
            domain: band,
            codomain: band,
            matrix,
        }
    }

    /// Columns `map(z^k)` for `k ∈ domain`, truncated to `codomain`.
    pub fn from_map(map: &dyn CircleMap, domain: Band, codomain: Band) -> Result<Self> {
        if map.is_antilinear() {
            return Err(LabError::Malformed("expected a linear map".into()));
        }
        Ok(LinearOp::from_columns(map, domain, codomain)?)
    }

    fn from_columns(map: &dyn CircleMap, domain: Band, codomain: Band) -> Result<Self> {
        let mut matrix = vec![vec![ZERO; domain.width()]; codomain.width()];
        for (j, k) in domain.indices().enumerate() {
            let col = map.apply(&FourierVector::z_pow(k))?;
            for (i, row) in codomain.indices().enumerate() {
                matrix[i][j] = col.coeff(row);
            }
        }
        Ok(LinearOp {
            domain,
            codomain,
            matrix,
        })
    }

    pub fn entry(&self, row: i64, col: i64) -> Complex64 {
        if self.codomain.contains(row) && self.domain.contains(col) {
            self.matrix[(row - self.codomain.lo) as usize][(col - self.domain.lo) as usize]
        } else {
            ZERO
        }
    }

    fn check_domain(&self, f: &FourierVector) -> Result<()> {
        match f.band() {
            Some(b) if !self.domain.covers(&b) => Err(LabError::OutsideBand {
                lo: b.lo,
                hi: b.hi,
                band_lo: self.domain.lo,
                band_hi: self.domain.hi,
            }),
            _ => Ok(()),
        }
    }

    fn apply_dense(&self, f: &FourierVector) -> Result<FourierVector> {
        self.check_domain(f)?;
        let x = f.dense(self.domain);
        let out = self
            .matrix
            .iter()
            .map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum())
            .collect();
        Ok(FourierVector::new(self.codomain.lo, out))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> LinearOp {
        self.transpose_with(|c| c.conj())
    }

    pub fn transpose(&self) -> LinearOp {
        self.transpose_with(|c| c)
    }

    fn transpose_with(&self, f: impl Fn(Complex64) -> Complex64) -> LinearOp {
        let matrix = (0..self.domain.width())
            .map(|j| self.matrix.iter().map(|row| f(row[j])).collect())
            .collect();
        LinearOp {
            domain: self.codomain,
            codomain: self.domain,
            matrix,
        }
    }

    /// Entrywise conjugate.
    pub fn conj(&self) -> LinearOp {
        LinearOp {
            domain: self.domain,
            codomain: self.codomain,
            matrix: self.matrix.iter().map(|r| r.iter().map(|c| c.conj()).collect()).collect(),
        }
    }

    /// `self ∘ other`, treating indices outside the bands as zero.
    pub fn compose(&self, other: &LinearOp) -> LinearOp {
        let matrix = self
            .codomain
            .indices()
            .map(|i| {
                other
                    .domain
                    .indices()
                    .map(|j| {
                        other
                            .codomain
                            .indices()
                            .map(|k| self.entry(i, k) * other.entry(k, j))
                            .sum()
                    })
                    .collect()
            })
            .collect();
        LinearOp {
            domain: other.domain,
            codomain: self.codomain,
            matrix,
        }
    }

    /// Largest entrywise difference over the union of the bands.
    pub fn max_abs_diff(&self, other: &LinearOp) -> f64 {
        let rows = self.codomain.union(&other.codomain);
        let cols = self.domain.union(&other.domain);
        let mut worst: f64 = 0.0;
        for i in rows.indices() {
            for j in cols.indices() {
                worst = worst.max((self.entry(i, j) - other.entry(i, j)).norm());
            }
        }
        worst
    }
}

impl CircleMap for LinearOp {
    fn apply(&self, f: &FourierVector) -> Result<FourierVector> {
        self.apply_dense(f)
    }
    fn is_antilinear(&self) -> bool {
        false
    }
}

/// `A = L ∘ J★` with `L` a dense band matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOp {
    pub linear_part: LinearOp,
}

impl AntilinearOp {
    pub fn new(linear_part: LinearOp) -> Self {
        AntilinearOp { linear_part }
    }

    /// Column `k` of the linear part is `map(z^k)`, since `J★ z^k = z^k`.
    pub fn from_map(map: &dyn CircleMap, domain: Band, codomain: Band) -> Result<Self> {
        if !map.is_antilinear() {
            return Err(LabError::Malformed("expected an antilinear map".into()));
        }
        Ok(AntilinearOp {
            linear_part: LinearOp::from_columns(map, domain, codomain)?,
        })
    }

    /// `A#` with `⟨Af, g⟩ = conj⟨f, A#g⟩`; its linear part is the transpose.
    pub fn sharp(&self) -> AntilinearOp {
        AntilinearOp {
            linear_part: self.linear_part.transpose(),
        }
    }
}

impl CircleMap for AntilinearOp {
    fn apply(&self, f: &FourierVector) -> Result<FourierVector> {
        self.linear_part.apply_dense(&f.conj_jstar())
    }
    fn is_antilinear(&self) -> bool {
        true
    }
}

pub fn antilinear_sharp(a: &AntilinearOp) -> AntilinearOp {
    a.sharp()
}

/// `z^k` for every `k` in `band`.
pub fn monomial_probes(band: Band) -> Vec<FourierVector> {
    band.indices().map(FourierVector::z_pow).collect()
}

/// Unit-norm vectors with uniform coefficients in the unit square, one substream per vector.
pub fn random_probes(band: Band, count: usize, seed: u64) -> Vec<FourierVector> {
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            let v = FourierVector::from_fn(band, |_| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let n = v.norm();
            v.scale_real(1.0 / n)
        })
        .collect()
}

/// Monomials on `[−n+margin, n−margin]` plus [`RANDOM_PROBES`] random vectors on the same band.
pub fn standard_probes(n: i64, margin: i64, seed: u64) -> Vec<FourierVector> {
    let inner = Band::symmetric((n - margin).max(0));
    let mut probes = monomial_probes(inner);
    probes.extend(random_probes(inner, RANDOM_PROBES, seed));
    probes
}

/// Distance kept between probes and the edge of a working band `n` for maps built on `b`.
///
/// A compressed map may move `z^j` to indices as far as `j·s²` (`s = (1+ρ)/(1−ρ)`)
/// plus a decay tail, so probes stay within `(n − tail)/s²`.
pub fn edge_margin(b: &BlaschkeProduct, n: i64) -> i64 {
    let rho = b.rho();
    if rho == 0.0 {
        return (b.degree() as i64).min(n);
    }
    let decay = ((1e-11f64).ln() / rho.ln()).ceil() as i64 + b.degree() as i64;
    let s = crate::decomp::spread(rho);
    let safe = (((n - decay).max(0)) as f64 / (s * s)).floor() as i64;
    n - safe
}

/// `max_v ‖a v − b v‖ / ‖v‖`.
pub fn map_distance(a: &dyn CircleMap, b: &dyn CircleMap, probes: &[FourierVector]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for v in probes {
        let n = v.norm();
        if n > 0.0 {
            worst = worst.max(a.apply(v)?.distance(&b.apply(v)?) / n);
        }
    }
    Ok(worst)
}

/// `max_v ‖C(right v) − left(C v)‖ / ‖v‖`: zero iff `C∘right = left∘C` on the probes.
pub fn relation_residual(
    c: &dyn CircleMap,
    right: &dyn CircleMap,
    left: &dyn CircleMap,
    probes: &[FourierVector],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for v in probes {
        let n = v.norm();
        if n > 0.0 {
            let a = c.apply(&right.apply(v)?)?;
            let b = left.apply(&c.apply(v)?)?;
            worst = worst.max(a.distance(&b) / n);
        }
    }
    Ok(worst)
}

/// `max_v ‖(ST − TS) v‖ / ‖v‖`.
pub fn commutator_residual(s: &dyn CircleMap, t: &dyn CircleMap, probes: &[FourierVector]) -> Result<f64> {
    relation_residual(s, t, t, probes)
}

/// Involution, antiunitarity and antilinearity residuals of `a` on the probes.
pub fn is_conjugation(a: &dyn CircleMap, probes: &[FourierVector]) -> Result<CertReport> {
    is_conjugation_with_tol(a, probes, CONJUGATION_TOL)
}

pub fn is_conjugation_with_tol(a: &dyn CircleMap, probes: &[FourierVector], tol: f64) -> Result<CertReport> {
    let mut report = CertReport::new("conjugation");
    let mut images = Vec::with_capacity(probes.len());
    let mut involution: f64 = 0.0;
    let mut antilinearity: f64 = 0.0;
    let i = Complex64::new(0.0, 1.0);
    for v in probes {
        let n = v.norm();
        let av = a.apply(v)?;
        if n > 0.0 {
            involution = involution.max(a.apply(&av)?.distance(v) / n);
            let aiv = a.apply(&v.scale(i))?;
            antilinearity = antilinearity.max(aiv.distance(&av.scale(-i)) / n);
        }
        images.push((n, av));
    }
    let mut antiunitarity: f64 = 0.0;
    for (v, (nv, av)) in probes.iter().zip(&images) {
        for (w, (nw, aw)) in probes.iter().zip(&images) {
            if *nv > 0.0 && *nw > 0.0 {
                let d = (inner_product(av, aw) - inner_product(w, v)).norm() / (nv * nw);
                antiunitarity = antiunitarity.max(d);
            }
        }
    }
    report.check("antilinear", antilinearity, tol);
    report.check("involution", involution, tol);
    report.check("antiunitary", antiunitarity, tol);
    Ok(report)
}

/// `φ_j = S(e_j)·e_j⁻¹`, after checking that `S` commutes with `M_B` on the probes.
///
/// `band` bounds both the truncation of `e_j` (indices `0..=band`) and the
/// reported symbols (indices `−band..=band`).
pub fn extract_commutant_symbols(
    s: &dyn CircleMap,
    b: &BlaschkeProduct,
    band: i64,
    probes: &[FourierVector],
    tol: f64,
) -> Result<Vec<FourierVector>> {
    let mb = Multiplication::blaschke(b, crate::decomp::decay_pad(b.rho()) + b.degree() as i64);
    let residual = commutator_residual(s, &mb, probes)?;
    if residual > tol {
        return Err(LabError::NotInCommutant { residual });
    }
    symbols_from_basis_images(s, b, band)
}

/// The division step of [`extract_commutant_symbols`] without the commutant check.
pub fn symbols_from_basis_images(s: &dyn CircleMap, b: &BlaschkeProduct, band: i64) -> Result<Vec<FourierVector>> {
    let window = Band::symmetric(band);
    if b.zeros().iter().all(|z| *z == ZERO) {
        return (1..=b.degree())
            .map(|j| {
                let sign = if j % 2 == 1 { ONE } else { -ONE };
                let e = FourierVector::monomial(j as i64 - 1, sign);
                Ok(s.apply(&e)?.shift(1 - j as i64).scale(sign).clip(window))
            })
            .collect();
    }
    let basis = b.tm_basis(band)?;
    let mut out = Vec::with_capacity(b.degree());
    for (j, e) in basis.vectors.iter().enumerate() {
        let image = s.apply(e)?;
        let span = image.band().unwrap_or(window).union(&window);
        let m = (4 * span.width() + 4 * decay_pad(b.rho()) as usize + 64)
            .next_power_of_two()
            .max(512);
        let q = image
            .to_grid(m)?
            .zip_with(&b.inverse_samples(j + 1, m), |x, y| x * y);
        out.push(q.to_fourier(-(m as i64) / 2).clip(window));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z2() -> BlaschkeProduct {
        BlaschkeProduct::monomial(2)
    }

    #[test]
    fn multi_symbol_examples() {
        let m = MultiSymbolOp::new(&z2(), vec![FourierVector::one(), FourierVector::z_pow(2)], 16).unwrap();
        assert_eq!(m.apply(&FourierVector::z_pow(1)).unwrap(), FourierVector::z_pow(3));
        let phi = FourierVector::from_real(-1, &[1.0, 0.0, 2.0]);
        let m = MultiSymbolOp::diagonal(&z2(), phi.clone(), 16).unwrap();
        let f = FourierVector::from_real(-3, &[1.0, -2.0, 0.5, 4.0, 1.0, 3.0]);
        assert!(m.apply(&f).unwrap().distance(&f.multiply(&phi).unwrap()) < 1e-14);
        assert!(matches!(
            MultiSymbolOp::new(&z2(), vec![FourierVector::one()], 8),
            Err(LabError::WrongDegree { .. })
        ));
    }

    #[test]
    fn block_examples() {
        let m = MultiSymbolOp::new(&z2(), vec![FourierVector::z_pow(1), FourierVector::one()], 8).unwrap();
        let b = block_2x2(&m).unwrap();
        assert!(b.top_left.is_zero() && b.top_right.is_zero());
        assert_eq!(b.bottom_left, FourierVector::z_pow(1));
        assert_eq!(b.bottom_right, FourierVector::one());
        let f = FourierVector::from_real(-2, &[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(b.apply(&f).unwrap(), m.apply(&f).unwrap());
        let z3 = BlaschkeProduct::monomial(3);
        let m3 = MultiSymbolOp::new(&z3, vec![FourierVector::one(); 3], 8).unwrap();
        assert!(matches!(block_2x2(&m3), Err(LabError::WrongDegree { .. })));
    }

    #[test]
    fn identity_symbols_are_unitary_blocks() {
        let one = FourierVector::one();
        for (_, r) in block_unitarity(&one, &one, 16) {
            assert!(r < 1e-15);
        }
    }

    #[test]
    fn commutator_examples() {
        let probes = standard_probes(16, 4, 1);
        let r = commutator_residual(&Multiplication::z_pow(1), &Multiplication::z_pow(2), &probes).unwrap();
        assert_eq!(r, 0.0);
        let m = MultiSymbolOp::new(&z2(), vec![FourierVector::one(), FourierVector::z_pow(1)], 16).unwrap();
        let r = commutator_residual(&m, &Multiplication::z_pow(1), &[FourierVector::z_pow(1)]).unwrap();
        assert!(r > 0.5);
        let r = commutator_residual(&m, &Multiplication::z_pow(2), &probes).unwrap();
        assert!(r < 1e-14);
    }

    #[test]
    fn base_conjugations_pass() {
        let probes = standard_probes(12, 0, 2);
        assert!(is_conjugation(&ConjJ, &probes).unwrap().overall);
        assert!(is_conjugation(&ConjJStar, &probes).unwrap().overall);
        let bad = compose(Arc::new(Multiplication::z_pow(1)), Arc::new(ConjJStar));
        let r = is_conjugation(&bad, &probes).unwrap();
        assert!(!r.passes("involution"));
    }

    #[test]
    fn extract_examples() {
        let probes = standard_probes(16, 2, 3);
        let s = Multiplication::z_pow(1);
        let phis = extract_commutant_symbols(&s, &z2(), 16, &probes, COMMUTANT_TOL).unwrap();
        assert_eq!(phis, vec![FourierVector::z_pow(1); 2]);
        let phi = FourierVector::from_real(-1, &[1.0, 1.0]);
        let s = Multiplication::new(phi.clone());
        let b = BlaschkeProduct::new(vec![ZERO, c(0.5, 0.0)]).unwrap();
        let probes = standard_probes(40, edge_margin(&b, 40), 3);
        let phis = extract_commutant_symbols(&s, &b, 40, &probes, COMMUTANT_TOL).unwrap();
        for p in phis {
            assert!(p.distance(&phi) < 1e-10);
        }
        let m = MultiSymbolOp::new(&z2(), vec![FourierVector::one(), FourierVector::z_pow(1)], 16).unwrap();
        let err = extract_commutant_symbols(&m, &BlaschkeProduct::monomial(3), 16, &probes, COMMUTANT_TOL);
        assert!(matches!(err, Err(LabError::NotInCommutant { .. })));
    }

    #[test]
    fn sharp_satisfies_pairing() {
        let band = Band::symmetric(4);
        let phi = FourierVector::from_fn(Band::new(-1, 1), |k| c(k as f64 + 0.5, 1.0 - k as f64));
        let a = AntilinearOp::from_map(
            &compose(Arc::new(Multiplication::new(phi.clone())), Arc::new(ConjJStar)),
            band,
            band.widen(1),
        )
        .unwrap();
        let s = a.sharp();
        let probes = random_probes(band, 6, 9);
        for f in &probes {
            for g in &probes {
                let lhs = inner_product(&a.apply(f).unwrap(), g);
                let rhs = inner_product(f, &s.apply(&g.clip(band)).unwrap()).conj();
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
        assert_eq!(s.sharp(), a);
    }

    #[test]
    fn dense_materialization_matches_map() {
        let m = MultiSymbolOp::new(&z2(), vec![FourierVector::z_pow(-1), FourierVector::from_real(0, &[1.0, 1.0])], 8)
            .unwrap();
        let band = Band::symmetric(6);
        let l = LinearOp::from_map(&m, band, band.widen(1)).unwrap();
        for v in random_probes(band, 4, 1) {
            assert!(l.apply(&v).unwrap().distance(&m.apply(&v).unwrap()) < 1e-14);
        }
        assert!(l.adjoint().adjoint().max_abs_diff(&l) == 0.0);
    }
}
