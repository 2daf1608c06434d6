//! Conjugations built from inner functions, classification against `M_z`/`M_{z²}`,
//! and certifiers for the four symbol descriptions of conjugations that
//! intertwine or commute with `M_{z²}`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::blaschke::BlaschkeProduct;
use crate::circle::{Band, FourierVector, GridSamples};
use crate::decomp::{decay_pad, project, SubspaceSpec, WoldFrame};
use crate::error::{LabError, Result};
use crate::operators::{
    block_unitarity, compose, is_conjugation_with_tol, modulus_sum_deviation, relation_residual,
    CircleMap, ConjJ, ConjJStar, MapRef, Multiplication, MultiSymbolOp,
};
use crate::report::CertReport;

/// `M_z`-residual above which an `M_{z²}`-commuting conjugation is called only-`M_{z²}`-commuting.
pub const ONLY_Z2_THRESHOLD: f64 = 0.1;

/// Probe and tolerance settings shared by the certifiers.
#[derive(Debug, Clone, Serialize)]
pub struct CertSettings {
    /// Probes are monomials and random vectors on `[−band+margin, band−margin]`.
    pub band: i64,
    pub margin: i64,
    pub random_probes: usize,
    pub seed: u64,
    /// Exact coefficient identities.
    pub tol_exact: f64,
    /// Pointwise conditions on symbols.
    pub tol_grid: f64,
    /// Conjugation axioms.
    pub tol_conj: f64,
    /// Operator identities and (anti)commutation relations.
    pub tol_relation: f64,
}

impl Default for CertSettings {
    fn default() -> Self {
        CertSettings {
            band: 16,
            margin: 2,
            random_probes: 8,
            seed: 0,
            tol_exact: 1e-12,
            tol_grid: 1e-9,
            tol_conj: 1e-9,
            tol_relation: 1e-8,
        }
    }
}

impl CertSettings {
    pub fn probes(&self) -> Vec<FourierVector> {
        let inner = Band::symmetric((self.band - self.margin).max(0));
        let mut v = crate::operators::monomial_probes(inner);
        v.extend(crate::operators::random_probes(inner, self.random_probes, self.seed));
        v
    }

    /// Grid for pointwise checks on symbols supported in `[−d, d]`.
    pub fn grid_for(&self, d: i64) -> usize {
        (8 * d.max(1) as usize + 8).next_power_of_two().max(64)
    }
}

/// `f ↦ γ·conj(z f)` for an inner `γ` given by its (possibly truncated) expansion.
#[derive(Debug, Clone)]
pub struct ThetaConjugation {
    pub symbol: FourierVector,
}

impl ThetaConjugation {
    pub fn from_symbol(symbol: FourierVector) -> Self {
        ThetaConjugation { symbol }
    }
}

impl CircleMap for ThetaConjugation {
    fn apply(&self, f: &FourierVector) -> Result<FourierVector> {
        self.symbol.multiply(&f.shift(1).conj_j())
    }
    fn is_antilinear(&self) -> bool {
        true
    }
}

/// Expansion of `θ`, exact for monomials and otherwise truncated past the decay distance.
pub fn inner_symbol(theta: &BlaschkeProduct) -> FourierVector {
    Multiplication::blaschke(theta, decay_pad(theta.rho()) + theta.degree() as i64).symbol
}

/// `f ↦ θ·conj(z f)`.
pub fn make_c_theta(theta: &BlaschkeProduct) -> ThetaConjugation {
    ThetaConjugation::from_symbol(inner_symbol(theta))
}

#[derive(Debug, Clone)]
enum StarKind {
    Exact { n: i64, unit: Complex64 },
    Sampled {
        frame: Arc<WoldFrame>,
        images: Vec<Vec<FourierVector>>,
    },
}

/// `Σ_k h_k θ^k ↦ Σ_k θ·conj(z h_k)·θ^k` for `h_k ∈ K_θ`: the model-space
/// conjugation applied slot by slot in the Wold splitting along `θ`.
#[derive(Debug, Clone)]
pub struct ThetaStarConjugation {
    theta: BlaschkeProduct,
    kind: StarKind,
}

/// The slotwise conjugation along `θ`. Exact for `θ = s·z^n`; otherwise a
/// compression to `[−band, band]`.
pub fn make_c_theta_star(theta: &BlaschkeProduct, band: i64) -> Result<ThetaStarConjugation> {
    if let Some((n, unit)) = theta.monomial_form() {
        return Ok(ThetaStarConjugation {
            theta: theta.clone(),
            kind: StarKind::Exact { n: n as i64, unit },
        });
    }
    let frame = Arc::new(WoldFrame::compression(theta, Band::symmetric(band))?);
    let m = frame.grid();
    let th = theta.samples(m);
    let weights: Vec<GridSamples> = (1..=theta.degree())
        .map(|j| {
            theta
                .basis_samples(j, m)
                .zip_with(&th, |e, t| e.conj() * t)
                .zip_with(&GridSamples::from_fn(m, |w| w), |v, w| v * w.conj())
        })
        .collect();
    let images = frame.family(&weights);
    Ok(ThetaStarConjugation {
        theta: theta.clone(),
        kind: StarKind::Sampled { frame, images },
    })
}

impl ThetaStarConjugation {
    pub fn theta(&self) -> &BlaschkeProduct {
        &self.theta
    }
}

impl CircleMap for ThetaStarConjugation {
    fn apply(&self, f: &FourierVector) -> Result<FourierVector> {
        match &self.kind {
            StarKind::Exact { n, unit } => {
                let mut out = FourierVector::zero();
                for (k, a) in f.iter() {
                    let q = k.div_euclid(*n);
                    let r = k.rem_euclid(*n);
                    out = out + FourierVector::monomial(n * q + n - 1 - r, a.conj() * unit.powi(2 * q as i32 + 1));
                }
                Ok(out)
            }
            StarKind::Sampled { frame, images } => {
                let coeffs = frame.decompose(f)?;
                let window = frame.window();
                let mut acc = vec![Complex64::new(0.0, 0.0); window.width()];
                for (j, row) in coeffs.table.iter().enumerate() {
                    for (t, c) in row.iter().enumerate() {
                        if c.norm() == 0.0 {
                            continue;
                        }
                        for (idx, v) in images[j][t].iter() {
                            acc[(idx - window.lo) as usize] += c.conj() * v;
                        }
                    }
                }
                Ok(FourierVector::new(window.lo, acc))
            }
        }
    }
    fn is_antilinear(&self) -> bool {
        true
    }
}

/// Relative residual used to decide membership in `K_θ`.
pub const MODEL_SPACE_TOL: f64 = 1e-8;

/// `h ↦ θ·conj(z h)` on `K_θ`.
pub fn model_conjugation(theta: &BlaschkeProduct, h: &FourierVector) -> Result<FourierVector> {
    let spec = SubspaceSpec::Model(theta.clone());
    let norm = h.norm();
    if norm == 0.0 {
        return Ok(FourierVector::zero());
    }
    let residual = h.distance(&project(h, &spec)?) / norm;
    if residual > MODEL_SPACE_TOL {
        return Err(LabError::NotInModelSpace { residual });
    }
    let image = make_c_theta(theta).apply(h)?;
    project(&image, &spec)
}

/// Which of the four relations with `M_z` and `M_{z²}` a conjugation satisfies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjugationClass {
    pub intertwines_mz: bool,
    pub commutes_mz: bool,
    pub intertwines_mz2: bool,
    pub commutes_mz2: bool,
    /// Residuals in the order of the flags.
    pub residuals: [f64; 4],
}

/// Refinement of an `M_{z²}`-commuting conjugation by its `M_z` residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommutingKind {
    CommutesMz,
    OnlyMz2,
    Indeterminate,
}

impl ConjugationClass {
    /// `None` when the conjugation does not commute with `M_{z²}`.
    pub fn commuting_kind(&self, tol: f64) -> Option<CommutingKind> {
        if !self.commutes_mz2 {
            return None;
        }
        let r = self.residuals[1];
        Some(if r < tol {
            CommutingKind::CommutesMz
        } else if r > ONLY_Z2_THRESHOLD {
            CommutingKind::OnlyMz2
        } else {
            CommutingKind::Indeterminate
        })
    }

    pub fn is_only_mz2_commuting(&self, tol: f64) -> bool {
        self.commuting_kind(tol) == Some(CommutingKind::OnlyMz2)
    }
}

/// `(commutes, intertwines)` residuals of `c` with `M_{z^k}`.
pub fn z_power_residuals(c: &dyn CircleMap, k: i64, probes: &[FourierVector]) -> Result<(f64, f64)> {
    let m = Multiplication::z_pow(k);
    let mbar = Multiplication::z_pow(-k);
    Ok((
        relation_residual(c, &m, &m, probes)?,
        relation_residual(c, &m, &mbar, probes)?,
    ))
}

/// Relation flags of a conjugation; fails when `c` is not one.
pub fn classify(c: &dyn CircleMap, settings: &CertSettings) -> Result<ConjugationClass> {
    let probes = settings.probes();
    let report = is_conjugation_with_tol(c, &probes, settings.tol_conj)?;
    if !report.overall {
        return Err(LabError::NotAConjugation {
            involution: report.residual("involution"),
            antiunitarity: report.residual("antiunitary").max(report.residual("antilinear")),
        });
    }
    classify_unchecked(c, settings)
}

/// Relation flags without first checking the conjugation axioms.
pub fn classify_unchecked(c: &dyn CircleMap, settings: &CertSettings) -> Result<ConjugationClass> {
    let probes = settings.probes();
    let (c1, i1) = z_power_residuals(c, 1, &probes)?;
    let (c2, i2) = z_power_residuals(c, 2, &probes)?;
    let tol = settings.tol_relation;
    Ok(ConjugationClass {
        intertwines_mz: i1 < tol,
        commutes_mz: c1 < tol,
        intertwines_mz2: i2 < tol || i1 < tol,
        commutes_mz2: c2 < tol || c1 < tol,
        residuals: [i1, c1, i2, c2],
    })
}

fn symbol_reach(symbols: &[&FourierVector]) -> i64 {
    symbols
        .iter()
        .filter_map(|s| s.band())
        .map(|b| b.lo.abs().max(b.hi.abs()))
        .max()
        .unwrap_or(0)
}

/// `max |a_k − b_k|`.
pub fn coefficient_gap(a: &FourierVector, b: &FourierVector) -> f64 {
    (a - b).max_abs()
}

fn check_conjugation_and_relation(
    report: &mut CertReport,
    c: &dyn CircleMap,
    settings: &CertSettings,
    commuting: bool,
) -> Result<()> {
    let probes = settings.probes();
    let conj = is_conjugation_with_tol(c, &probes, settings.tol_conj)?;
    report.absorb("conjugation:", &conj);
    let (c2, i2) = z_power_residuals(c, 2, &probes)?;
    if commuting {
        report.check("commutes with M_z2", c2, settings.tol_relation);
    } else {
        report.check("intertwines M_z2 and M_conj(z2)", i2, settings.tol_relation);
    }
    let (c1, i1) = z_power_residuals(c, 1, &probes)?;
    report.extract("mz_commutator", c1);
    report.extract("mz_intertwiner", i1);
    Ok(())
}

fn record_unitarity(report: &mut CertReport, s1: &FourierVector, s2: &FourierVector, m: usize, tol: f64) {
    for (name, r) in block_unitarity(s1, s2, m) {
        report.check(format!("unitary:{name}"), r, tol);
    }
}

fn symbol_pass(report: &CertReport) -> bool {
    report
        .conditions
        .iter()
        .filter(|c| !c.name.starts_with("conjugation:") && !c.name.starts_with("commutes") && !c.name.starts_with("intertwines"))
        .all(|c| c.pass)
}

fn finish(mut report: CertReport) -> CertReport {
    let symbols_ok = symbol_pass(&report);
    report.extract("symbol_conditions_pass", symbols_ok);
    report
}

fn z2() -> BlaschkeProduct {
    BlaschkeProduct::monomial(2)
}

/// `M_{[s1,s2]} ∘ base` over `z²`.
pub fn z2_pair_operator(s1: &FourierVector, s2: &FourierVector, base: MapRef) -> Result<MapRef> {
    let m = MultiSymbolOp::new(&z2(), vec![s1.clone(), s2.clone()], 0)?;
    Ok(compose(Arc::new(m), base))
}

/// `C = M_{[φ1,φ2]}·𝒞_{z²}` where `𝒞_{z²} f = z²·conj(z f)`: conjugations
/// intertwining `M_{z²}` with `M_{z̄²}`.
pub fn certify_intertwining_pair(phi1: &FourierVector, phi2: &FourierVector, settings: &CertSettings) -> Result<CertReport> {
    let mut report = CertReport::new("intertwining-z2");
    let m = settings.grid_for(symbol_reach(&[phi1, phi2]));
    report.check("|phi1|^2+|phi2|^2=2", modulus_sum_deviation(phi1, phi2, m), settings.tol_grid);
    report.check("phi1 even = phi2 even", coefficient_gap(&phi1.even(), &phi2.even()), settings.tol_exact);
    record_unitarity(&mut report, phi1, phi2, m, settings.tol_grid);
    let c = z2_pair_operator(phi1, phi2, Arc::new(make_c_theta(&z2())))?;
    check_conjugation_and_relation(&mut report, &*c, settings, false)?;
    let reduced = report.passes("|phi1|^2+|phi2|^2=2") && report.passes("phi1 even = phi2 even");
    report.extract("reduced_conditions_pass", reduced);
    Ok(finish(report))
}

/// `C = M_{[ψ1,ψ2]}·J`, the same class written against `J`.
pub fn certify_intertwining_pair_j(psi1: &FourierVector, psi2: &FourierVector, settings: &CertSettings) -> Result<CertReport> {
    let mut report = CertReport::new("intertwining-z2-j");
    let m = settings.grid_for(symbol_reach(&[psi1, psi2]));
    report.check("|psi1|^2+|psi2|^2=2", modulus_sum_deviation(psi1, psi2, m), settings.tol_grid);
    report.check("psi1 odd = psi2 odd", coefficient_gap(&psi1.odd(), &psi2.odd()), settings.tol_exact);
    record_unitarity(&mut report, psi1, psi2, m, settings.tol_grid);
    let c = z2_pair_operator(psi1, psi2, Arc::new(ConjJ))?;
    check_conjugation_and_relation(&mut report, &*c, settings, false)?;
    let reduced = report.passes("|psi1|^2+|psi2|^2=2") && report.passes("psi1 odd = psi2 odd");
    report.extract("reduced_conditions_pass", reduced);

    // M_{[φ1,φ2]} M_z = M_{[zφ2, zφ1]}, so φ1 = z̄ψ2 and φ2 = z̄ψ1 describe the same operator.
    let translated = certify_intertwining_pair(&psi2.shift(-1), &psi1.shift(-1), settings)?;
    report.extract("translated_verdict", translated.overall);
    let own = report.overall;
    report.flag("translation agrees", translated.overall == own);
    Ok(finish(report))
}

/// `C = M_{[ζ1,ζ2]}·𝒞★_{z²}`: conjugations commuting with `M_{z²}`.
pub fn certify_commuting_pair(zeta1: &FourierVector, zeta2: &FourierVector, settings: &CertSettings) -> Result<CertReport> {
    let mut report = CertReport::new("commuting-z2");
    let d = symbol_reach(&[zeta1, zeta2]) + 1;
    let m = settings.grid_for(d);
    let (e1, o1) = (zeta1.even(), zeta1.odd());
    let (e2, o2) = (zeta2.even(), zeta2.odd());
    report.check("|zeta1|^2+|zeta2|^2=2", modulus_sum_deviation(zeta1, zeta2, m), settings.tol_grid);
    let a = o1.shift(-1) + e2.shift(1);
    let b = e1.shift(-1) + o2.shift(1);
    report.check(
        "|conj(z)zeta1o+z zeta2e|^2+|conj(z)zeta1e+z zeta2o|^2=2",
        modulus_sum_deviation(&a, &b, m),
        settings.tol_grid,
    );
    report.check("zeta2e(conj z) = zeta1e(z)", coefficient_gap(&e2.reflect(), &e1), settings.tol_exact);
    report.check("zeta2o(conj z) = z^2 zeta2o(z)", coefficient_gap(&o2.reflect(), &o2.shift(2)), settings.tol_exact);
    report.check("z^2 zeta1o(conj z) = zeta1o(z)", coefficient_gap(&o1.reflect().shift(2), &o1), settings.tol_exact);
    record_unitarity(&mut report, zeta1, zeta2, m, settings.tol_grid);
    let c = z2_pair_operator(zeta1, zeta2, Arc::new(make_c_theta_star(&z2(), 0)?))?;
    check_conjugation_and_relation(&mut report, &*c, settings, true)?;
    Ok(finish(report))
}

/// `C = M_{[ξ1,ξ2]}·J★`, the commuting class written against `J★`.
pub fn certify_commuting_pair_jstar(xi1: &FourierVector, xi2: &FourierVector, settings: &CertSettings) -> Result<CertReport> {
    let mut report = CertReport::new("commuting-z2-jstar");
    let m = settings.grid_for(symbol_reach(&[xi1, xi2]));
    let (e1, o1) = (xi1.even(), xi1.odd());
    let (e2, o2) = (xi2.even(), xi2.odd());
    report.check("|xi1|^2+|xi2|^2=2", modulus_sum_deviation(xi1, xi2, m), settings.tol_grid);
    report.check(
        "|xi2e+xi1o|^2+|xi2o+xi1e|^2=2",
        modulus_sum_deviation(&(&e2 + &o1), &(&o2 + &e1), m),
        settings.tol_grid,
    );
    report.check("xi1o(conj z) = xi2o(z)", coefficient_gap(&o1.reflect(), &o2), settings.tol_exact);
    report.check("xi1e(conj z) = xi1e(z)", coefficient_gap(&e1.reflect(), &e1), settings.tol_exact);
    report.check("xi2e(conj z) = xi2e(z)", coefficient_gap(&e2.reflect(), &e2), settings.tol_exact);
    record_unitarity(&mut report, xi1, xi2, m, settings.tol_grid);
    let c = z2_pair_operator(xi1, xi2, Arc::new(ConjJStar))?;
    check_conjugation_and_relation(&mut report, &*c, settings, true)?;

    let mz = report.extracted["mz_commutator"].as_f64().unwrap_or(f64::NAN);
    let kind = if mz < settings.tol_relation {
        CommutingKind::CommutesMz
    } else if mz > ONLY_Z2_THRESHOLD {
        CommutingKind::OnlyMz2
    } else {
        CommutingKind::Indeterminate
    };
    report.extract("kind", kind);
    let gm = settings.grid_for(symbol_reach(&[xi1, xi2]));
    let gap = xi1.to_grid_aliased(gm).zip_with(&xi2.to_grid_aliased(gm), |a, b| a - b);
    report.extract("symbol_grid_distance", gap.max_deviation_from(Complex64::new(0.0, 0.0)));
    Ok(finish(report))
}

/// Convenience: the certifier's operator for a commuting pair over `J★`.
pub fn commuting_pair_operator(xi1: &FourierVector, xi2: &FourierVector) -> Result<MapRef> {
    z2_pair_operator(xi1, xi2, Arc::new(ConjJStar))
}

/// Convenience: the certifier's operator for an intertwining pair over `J`.
pub fn intertwining_pair_operator(psi1: &FourierVector, psi2: &FourierVector) -> Result<MapRef> {
    z2_pair_operator(psi1, psi2, Arc::new(ConjJ))
}
