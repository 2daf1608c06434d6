//! Verification suites run by `verify`. Each suite returns one report per
//! checked family; a suite passes when every report passes.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blaschke::BlaschkeProduct;
use crate::circle::{inner_product, Band, FourierVector};
use crate::conjugation::{
    certify_commuting_pair_jstar, certify_intertwining_pair, certify_intertwining_pair_j, commuting_pair_operator,
    intertwining_pair_operator, make_c_theta, make_c_theta_star, z2_pair_operator, CertSettings, CommutingKind,
};
use crate::decomp::WoldFrame;
use crate::error::{LabError, Result};
use crate::generators::{random_symbols, GeneratorParams, SymbolClass};
use crate::impossibility::{impossibility_probe, ForbiddenInvariance};
use crate::io::RunConfig;
use crate::operators::{
    commutator_residual, is_conjugation_with_tol, map_distance, monomial_probes, standard_probes,
    symbols_from_basis_images, AntilinearOp, CircleMap, ConjJ, ConjJStar, MapRef, MultiSymbolOp, Multiplication,
};
use crate::report::CertReport;
use crate::structure::{beurling_commuting_structure, hardy_commuting_structure, model_commuting_report, model_intertwining_gamma};
use crate::zn::{
    action_table_matches, decompose_conjugation, hardy_structure_zn, star_symbols, verify_star_factorization, Relation,
};

/// Suite names accepted by [`run_suite`], in the order `all` runs them.
pub const SUITES: [&str; 6] = ["commutant", "conj-4x", "hardy-5x", "model-5x", "beurling-5x", "zn-6x"];

/// Caps at which the impossibility fractions are tracked.
pub const PROBE_CAPS: [i64; 5] = [4, 8, 12, 16, 20];

const ROUND_TRIP_TOL: f64 = 1e-7;
const DENSE_TOL: f64 = 1e-9;
const COMMUTANT_TOL: f64 = 1e-8;
const FRACTION_TOL: f64 = 0.1;

/// The four test inner functions: `z²`, `z³`, zeros `[0, 1/2]` and `[1/2, i/3]`.
pub fn test_blaschke_products() -> Vec<(&'static str, BlaschkeProduct)> {
    let z = Complex64::new(0.0, 0.0);
    vec![
        ("z^2", BlaschkeProduct::monomial(2)),
        ("z^3", BlaschkeProduct::monomial(3)),
        ("[0, 1/2]", BlaschkeProduct::new(vec![z, Complex64::new(0.5, 0.0)]).expect("zeros in disk")),
        (
            "[1/2, i/3]",
            BlaschkeProduct::new(vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, 1.0 / 3.0)]).expect("zeros in disk"),
        ),
    ]
}

pub fn run_suite(name: &str, config: &RunConfig) -> Result<Vec<CertReport>> {
    match name {
        "commutant" => commutant_suite(config),
        "conj-4x" => conjugation_suite(config),
        "hardy-5x" => hardy_suite(config),
        "model-5x" => model_suite(config),
        "beurling-5x" => beurling_suite(config),
        "zn-6x" => zn_suite(config),
        "all" => {
            let mut out = Vec::new();
            for s in SUITES {
                out.extend(run_suite(s, config)?);
            }
            Ok(out)
        }
        other => Err(LabError::UnknownSuite(other.to_string())),
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    rng
}

/// Uniform coefficients in the unit square on `band`.
pub fn random_vector(rng: &mut ChaCha8Rng, band: Band) -> FourierVector {
    FourierVector::from_fn(band, |_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// `sup |a − b|` sampled on a grid fine enough for both.
pub fn grid_distance(a: &FourierVector, b: &FourierVector) -> f64 {
    let d = a - b;
    let m = (8 * d.len().max(1)).next_power_of_two().max(64);
    d.to_grid_aliased(m).max_deviation_from(Complex64::new(0.0, 0.0))
}

/// Largest residual of `S → symbols → M_[symbols]` against `S` on the in-band monomials,
/// for random multi-symbol operators `S` along `b`.
pub fn commutant_round_trip(b: &BlaschkeProduct, band: i64, trials: usize, seed: u64) -> Result<f64> {
    let frame = if b.is_z_power() {
        None
    } else {
        Some(Arc::new(WoldFrame::compression(b, Band::symmetric(band))?))
    };
    let build = |symbols: Vec<FourierVector>| match &frame {
        Some(f) => MultiSymbolOp::with_frame(f.clone(), symbols),
        None => MultiSymbolOp::new(b, symbols, band),
    };
    let probes = monomial_probes(Band::symmetric(band));
    let mut worst: f64 = 0.0;
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let symbols = (0..b.degree()).map(|_| random_vector(&mut rng, Band::symmetric(3))).collect();
        let s = build(symbols)?;
        let rebuilt = build(symbols_from_basis_images(&s, b, band)?)?;
        worst = worst.max(map_distance(&s, &rebuilt, &probes)?);
    }
    Ok(worst)
}

/// Outcome of the `M_z`-commutation dichotomy over random pairs along `z²`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DichotomyCount {
    pub pairs: usize,
    pub agreements: usize,
    pub equal_pairs: usize,
}

/// Half the pairs have `φ1 = φ2`, half differ by a grid distance above `0.1`;
/// "extracted symbols grid-equal" is compared with "`M_z`-commutator below `1e−8`".
pub fn commutant_dichotomy(pairs: usize, band: i64, seed: u64) -> Result<DichotomyCount> {
    let b = BlaschkeProduct::monomial(2);
    let mz = Multiplication::z_pow(1);
    let probes = standard_probes(band, 2, seed);
    let mut count = DichotomyCount {
        pairs,
        agreements: 0,
        equal_pairs: 0,
    };
    for t in 0..pairs {
        let mut rng = trial_rng(seed, t);
        let phi1 = random_vector(&mut rng, Band::symmetric(2));
        let phi2 = if t % 2 == 0 {
            phi1.clone()
        } else {
            loop {
                let p = random_vector(&mut rng, Band::symmetric(2));
                if grid_distance(&p, &phi1) > 0.1 {
                    break p;
                }
            }
        };
        let s = MultiSymbolOp::new(&b, vec![phi1, phi2], band)?;
        let extracted = symbols_from_basis_images(&s, &b, band)?;
        let equal = grid_distance(&extracted[0], &extracted[1]) < COMMUTANT_TOL;
        let commutes = commutator_residual(&s, &mz, &probes)? < COMMUTANT_TOL;
        count.equal_pairs += equal as usize;
        count.agreements += (equal == commutes) as usize;
    }
    Ok(count)
}

/// Worst Parseval defect and component cross inner product, each minus its allowance
/// `tail·‖f‖² + 1e−8`; both are negative when the bound holds.
pub fn wold_parseval_excess(b: &BlaschkeProduct, band: i64, trials: usize, seed: u64) -> Result<(f64, f64)> {
    let frame = Arc::new(WoldFrame::new(b, Band::symmetric(band), None)?);
    let (mut parseval, mut orth) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for t in 0..trials {
        let mut rng = trial_rng(seed, t);
        let f = random_vector(&mut rng, Band::symmetric(band));
        let allowance = frame.tail_bound() * f.norm_sqr() + 1e-8;
        let w = frame.decompose(&f)?;
        parseval = parseval.max(w.parseval_defect() - allowance);
        let parts = frame.components(&f)?;
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                orth = orth.max(inner_product(&parts[i], &parts[j]).norm() - allowance);
            }
        }
    }
    Ok((parseval, orth))
}

fn commutant_suite(config: &RunConfig) -> Result<Vec<CertReport>> {
    let mut reports = Vec::new();
    for (label, b) in test_blaschke_products() {
        let mut r = CertReport::new(format!("commutant along {label}"));
        let band = if b.is_z_power() { config.band } else { config.band.min(64) };
        r.check(
            "rebuilt M_[phi] matches S",
            commutant_round_trip(&b, band, config.trials, config.seed)?,
            ROUND_TRIP_TOL,
        );
        let (parseval, orth) = wold_parseval_excess(&b, config.band.min(32), config.trials, config.seed)?;
        r.flag("Parseval defect within tail bound", parseval <= 0.0);
        r.flag("components orthogonal within tail bound", orth <= 0.0);
        r.extract("parseval_excess", parseval);
        reports.push(r);
    }
    let d = commutant_dichotomy(config.trials.max(2), config.band.min(16), config.seed)?;
    let mut r = CertReport::new("M_z-commutation dichotomy along z^2");
    r.flag("grid-equal symbols iff M_z-commuting", d.agreements == d.pairs);
    r.extract("counts", d);
    reports.push(r);
    Ok(reports)
}

/// Dense residuals of an antilinear map, read from its columns `C(z^k)`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DenseDefects {
    pub involution: f64,
    pub antiunitary: f64,
    /// `C(z^{k+2}) = z²C(z^k)`.
    pub commutes_z2: f64,
    /// `C(z^{k+2}) = z̄²C(z^k)`.
    pub intertwines_z2: f64,
}

impl DenseDefects {
    pub fn is_conjugation(&self, tol: f64) -> bool {
        self.involution < tol && self.antiunitary < tol
    }
}

/// Materializes `C` on `[−band−reach, band+reach]` and checks columns `|k| ≤ band`,
/// where `reach` bounds how far `C` moves an index.
pub fn dense_defects(c: &dyn CircleMap, band: i64, reach: i64) -> Result<DenseDefects> {
    let domain = Band::symmetric(band + reach + 2);
    let op = AntilinearOp::from_map(c, domain, Band::symmetric(band + 2 * reach + 2))?;
    let l = &op.linear_part;
    let col = |k: i64| -> Vec<Complex64> { l.codomain.indices().map(|j| l.entry(j, k)).collect() };
    let inner = Band::symmetric(band);
    let mut d = DenseDefects {
        involution: 0.0,
        antiunitary: 0.0,
        commutes_z2: 0.0,
        intertwines_z2: 0.0,
    };
    for k in inner.indices() {
        // C(C z^k) = Σ_j conj(L[j,k]) C(z^j)
        let mut twice = vec![Complex64::new(0.0, 0.0); l.codomain.width()];
        for j in domain.indices() {
            let a = l.entry(j, k).conj();
            if a.norm() > 0.0 {
                for (x, y) in twice.iter_mut().zip(col(j)) {
                    *x += a * y;
                }
            }
        }
        for (i, x) in l.codomain.indices().zip(&twice) {
            let want = if i == k { 1.0 } else { 0.0 };
            d.involution = d.involution.max((x - want).norm());
        }
        let ck = col(k);
        for m in inner.indices() {
            let g: Complex64 = ck.iter().zip(col(m)).map(|(a, b)| a.conj() * b).sum();
            let want = if m == k { 1.0 } else { 0.0 };
            d.antiunitary = d.antiunitary.max((g - want).norm());
        }
        if k + 2 <= band {
            for j in l.codomain.indices() {
                let next = l.entry(j, k + 2);
                let up = if l.codomain.contains(j - 2) { l.entry(j - 2, k) } else { Complex64::new(0.0, 0.0) };
                let down = if l.codomain.contains(j + 2) { l.entry(j + 2, k) } else { Complex64::new(0.0, 0.0) };
                d.commutes_z2 = d.commutes_z2.max((next - up).norm());
                d.intertwines_z2 = d.intertwines_z2.max((next - down).norm());
            }
        }
    }
    Ok(d)
}

fn symbol_reach(symbols: &[FourierVector]) -> i64 {
    symbols
        .iter()
        .filter_map(|s| s.band())
        .map(|b| b.lo.abs().max(b.hi.abs()))
        .max()
        .unwrap_or(0)
}

fn conjugation_suite(config: &RunConfig) -> Result<Vec<CertReport>> {
    let settings = config.cert_settings();
    let mut reports = Vec::new();

    let mut axioms = CertReport::new("conjugation axioms");
    let probes = settings.probes();
    for (name, c) in [("J", Arc::new(ConjJ) as MapRef), ("J*", Arc::new(ConjJStar))] {
        axioms.absorb(&format!("{name}: "), &is_conjugation_with_tol(&*c, &probes, settings.tol_conj)?);
    }
    let thetas = [
        ("z", BlaschkeProduct::monomial(1)),
        ("z^2", BlaschkeProduct::monomial(2)),
        ("[1/2]", BlaschkeProduct::from_real_zeros(&[0.5])?),
    ];
    for (label, theta) in &thetas {
        let probes = crate::zn::blaschke_probes(theta, &settings);
        let c = make_c_theta(theta);
        axioms.absorb(&format!("C_{label}: "), &is_conjugation_with_tol(&c, &probes, settings.tol_conj)?);
        let cs = make_c_theta_star(theta, settings.band)?;
        axioms.absorb(&format!("C*_{label}: "), &is_conjugation_with_tol(&cs, &probes, settings.tol_conj)?);
    }
    reports.push(axioms);

    let params = GeneratorParams::default();
    for class in [SymbolClass::IntertwiningCz2, SymbolClass::IntertwiningJ, SymbolClass::CommutingJStar] {
        let mut r = CertReport::new(format!("generated {}", serde_json::to_value(class)?.as_str().unwrap_or("")));
        let mut agree = 0;
        let mut translated = 0;
        let generated = random_symbols(class, config.seed, config.trials, &params)?;
        for g in &generated {
            let [a, b] = &g.symbols;
            let (c, certified, intertwining) = match class {
                SymbolClass::IntertwiningCz2 => (
                    z2_pair_operator(a, b, Arc::new(make_c_theta(&BlaschkeProduct::monomial(2))))?,
                    certify_intertwining_pair(a, b, &settings)?.overall,
                    true,
                ),
                SymbolClass::IntertwiningJ => {
                    let cert = certify_intertwining_pair_j(a, b, &settings)?;
                    translated += cert.passes("translation agrees") as usize;
                    (intertwining_pair_operator(a, b)?, cert.overall, true)
                }
                _ => (commuting_pair_operator(a, b)?, certify_commuting_pair_jstar(a, b, &settings)?.overall, false),
            };
            let d = dense_defects(&*c, 16, symbol_reach(&g.symbols) + 1)?;
            let relation = if intertwining { d.intertwines_z2 } else { d.commutes_z2 };
            let dense = d.is_conjugation(DENSE_TOL) && relation < DENSE_TOL;
            agree += (dense == certified) as usize;
        }
        r.flag("dense cross-check agrees on every tuple", agree == generated.len());
        if class == SymbolClass::IntertwiningJ {
            r.flag("z^2-form verdict agrees on every tuple", translated == generated.len());
        }
        r.extract("tuples", generated.len());
        reports.push(r);
    }

    let mut r = CertReport::new("random lattice pairs against dense check");
    let values = [0.0, std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2, 1.0, -1.0];
    let mut disagreements = 0;
    let mut accepted = 0;
    for t in 0..config.trials {
        let mut rng = trial_rng(config.seed ^ 0x4c41, t);
        let mut pick = || FourierVector::from_real(-1, &[0; 3].map(|_| values[rng.gen_range(0..values.len())]));
        let (x1, x2) = (pick(), pick());
        let cert = certify_commuting_pair_jstar(&x1, &x2, &settings)?.overall;
        let d = dense_defects(&*commuting_pair_operator(&x1, &x2)?, 16, 2)?;
        accepted += cert as usize;
        disagreements += (cert != d.is_conjugation(DENSE_TOL)) as usize;
    }
    r.check("verdict disagreements", disagreements as f64, 0.5);
    r.extract("accepted", accepted);
    reports.push(r);
    Ok(reports)
}

/// Impossibility fractions at [`PROBE_CAPS`] with the final-value and monotonicity checks.
pub fn impossibility_report(kind: ForbiddenInvariance, band: i64, caps: &[i64], seed: u64) -> Result<CertReport> {
    let fractions = caps
        .iter()
        .map(|&cap| impossibility_probe(kind, band, cap, seed))
        .collect::<Result<Vec<f64>>>()?;
    let mut r = CertReport::new(format!("{} probe", kind.label()));
    r.check("surviving fraction at largest cap", *fractions.last().unwrap_or(&1.0), FRACTION_TOL);
    r.flag(
        "fraction non-increasing in cap",
        fractions.windows(2).all(|w| w[1] <= w[0] + 1e-12),
    );
    r.extract("caps", caps);
    r.extract("fractions", &fractions);
    Ok(r)
}

fn hardy_suite(config: &RunConfig) -> Result<Vec<CertReport>> {
    let settings = config.cert_settings();
    let mut reports = vec![impossibility_report(ForbiddenInvariance::IntertwiningHardy, 8, &PROBE_CAPS, config.seed)?];

    let mut r = CertReport::new("H2-preserving commuting conjugations");
    let mut worst: f64 = 0.0;
    let mut all_certified = true;
    for g in random_symbols(SymbolClass::HardyCommuting, config.seed, config.trials, &GeneratorParams::default())? {
        let [a0, a1, b0] = g.hardy.expect("hardy class carries its triple").map(|[re, im]| Complex64::new(re, im));
        let h = hardy_commuting_structure(&g.symbols[0], &g.symbols[1], &settings)?;
        all_certified &= h.report.overall;
        worst = worst.max((h.a0 - a0).norm()).max((h.a1 - a1).norm()).max((h.b0 - b0).norm());
    }
    r.flag("every structure report passes", all_certified);
    r.check("recovered (a0, a1, b0)", worst, settings.tol_exact);
    let rejected = matches!(
        hardy_commuting_structure(&FourierVector::z_pow(2), &FourierVector::one(), &settings),
        Err(LabError::StructureViolation { .. })
    );
    r.flag("xi1 = z^2 rejected", rejected);
    reports.push(r);
    Ok(reports)
}

fn model_suite(config: &RunConfig) -> Result<Vec<CertReport>> {
    let settings = config.cert_settings();
    let z2 = BlaschkeProduct::monomial(2);
    let z = FourierVector::z_pow(1);
    let out = model_intertwining_gamma(&z, &z, &z2, &z2, &settings)?;
    let mut r = CertReport::new("model-space intertwining for C_{z^2}");
    r.absorb("", &out.report);
    r.check("gamma = z^2", out.gamma.distance(&FourierVector::z_pow(2)), settings.tol_exact);
    r.check("fitted constant = 2", (out.scale - Complex64::new(2.0, 0.0)).norm(), 1e-9);
    let one = FourierVector::one();
    let rejected = matches!(
        model_intertwining_gamma(&one, &one.scale_real(-1.0), &z2, &z2, &settings),
        Err(LabError::HypothesisFailure { .. })
    );
    r.flag("psi = (1, -1) rejected", rejected);
    r.extracted = out.report.extracted.clone();
    Ok(vec![r, model_commuting_jstar(config, &settings)?])
}

fn model_commuting_jstar(config: &RunConfig, settings: &CertSettings) -> Result<CertReport> {
    let alpha = BlaschkeProduct::from_real_zeros(&[0.5])?;
    let theta = alpha.sharp();
    let one = FourierVector::one();
    let out = model_commuting_report(&one, &one, &alpha, &theta, settings)?;
    let mut r = CertReport::new("model-space commuting for J*");
    for c in out.report.conditions.iter().filter(|c| c.name != "only M_z2-commuting") {
        r.check(c.name.clone(), c.residual, c.tol);
    }
    r.extracted = out.report.extracted.clone();

    // every only-M_z2-commuting sample violates the symmetry hypothesis
    let mut vacuous = true;
    for g in random_symbols(SymbolClass::CommutingJStar, config.seed, config.trials, &GeneratorParams::default())? {
        let cert = certify_commuting_pair_jstar(&g.symbols[0], &g.symbols[1], settings)?;
        if cert.extracted["kind"] != serde_json::json!(CommutingKind::OnlyMz2) {
            continue;
        }
        let m = model_commuting_report(&g.symbols[0], &g.symbols[1], &alpha, &theta, settings)?;
        vacuous &= !m.report.passes("J* C is C_alpha-symmetric");
    }
    r.flag("symmetry hypothesis fails for only-M_z2 samples", vacuous);
    Ok(r)
}

fn beurling_suite(config: &RunConfig) -> Result<Vec<CertReport>> {
    let settings = config.cert_settings();
    let mut reports = vec![impossibility_report(ForbiddenInvariance::IntertwiningBeurling, 8, &PROBE_CAPS, config.seed)?];
    let one = FourierVector::one();
    for (label, b) in [("z", BlaschkeProduct::monomial(1)), ("[1/2]", BlaschkeProduct::from_real_zeros(&[0.5])?)] {
        let out = beurling_commuting_structure(&one, &one, &b, &b, &settings)?;
        let mut r = CertReport::new(format!("Beurling commuting for J*, alpha = beta = {label}"));
        r.absorb("", &out.report);
        r.extracted = out.report.extracted.clone();
        reports.push(r);
    }
    Ok(reports)
}

fn zn_suite(config: &RunConfig) -> Result<Vec<CertReport>> {
    let settings = config.cert_settings();
    let mut reports = Vec::new();
    let mut r = CertReport::new("conjugations along z^n");
    for n in 2..=6 {
        r.absorb(&format!("n={n}: "), &verify_star_factorization(n, settings.band)?);
        r.flag(format!("n={n}: action table k -> n-1-k"), action_table_matches(n)?);
    }
    reports.push(r);

    let mut r = CertReport::new("H2-preserving conjugations commuting with M_{z^n}");
    for n in 2..=4 {
        let b = BlaschkeProduct::monomial(n);
        let h = hardy_structure_zn(Arc::new(make_c_theta_star(&b, settings.band)?), n, &settings)?;
        r.absorb(&format!("n={n}: "), &h.report);
        let expected = star_symbols(n);
        let gap = h.xi.iter().zip(&expected).map(|(a, b)| a.distance(b)).fold(0.0, f64::max);
        r.check(format!("n={n}: xi matches"), gap, settings.tol_exact);
    }
    reports.push(r);

    let b = BlaschkeProduct::from_real_zeros(&[0.0, 0.3])?;
    let wide = CertSettings {
        band: config.band.clamp(48, 64),
        ..settings.clone()
    };
    for (relation, c) in [
        (Relation::Intertwine, Arc::new(make_c_theta(&b)) as MapRef),
        (Relation::Commute, Arc::new(make_c_theta_star(&b, wide.band)?)),
    ] {
        let f = decompose_conjugation(c, &b, relation, &wide)?;
        let mut r = CertReport::new(format!("{relation:?} factorization along zeros [0, 0.3]").to_lowercase());
        r.absorb("", &f.report);
        reports.push(r);
    }

    for n in 2..=4 {
        let caps: Vec<i64> = PROBE_CAPS.iter().map(|c| c + 4).collect();
        reports.push(impossibility_report(ForbiddenInvariance::ZnSymmetricHardy { n }, 9, &caps, config.seed)?);
    }
    Ok(reports)
}
