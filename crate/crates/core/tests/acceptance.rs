//! Acceptance criteria 1–9. Prints one line per criterion and exits non-zero
//! if any fails. Every tolerance is pinned below.

use std::f64::consts::FRAC_1_SQRT_2;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use blaschke_lab::circle::{Band, FourierVector};
use blaschke_lab::conjugation::{certify_commuting_pair_jstar, make_c_theta, make_c_theta_star, CertSettings};
use blaschke_lab::decomp::WoldFrame;
use blaschke_lab::impossibility::{impossibility_probe, ForbiddenInvariance};
use blaschke_lab::operators::{is_conjugation_with_tol, ConjJ, ConjJStar, MapRef};
use blaschke_lab::structure::model_intertwining_gamma;
use blaschke_lab::suites::{commutant_dichotomy, commutant_round_trip, test_blaschke_products};
use blaschke_lab::zn::{action_table_matches, blaschke_probes, verify_star_factorization};
use blaschke_lab::BlaschkeProduct;

const ROUND_TRIP_TOL: f64 = 1e-7;
const ROUND_TRIP_BAND: i64 = 64;
const ROUND_TRIP_TRIALS: usize = 50;
const ROUND_TRIP_BUDGET: Duration = Duration::from_secs(30);
const DICHOTOMY_PAIRS: usize = 100;
const AXIOM_TOL: f64 = 1e-9;
const LATTICE_BAND: i64 = 16;
const LATTICE_TOL: f64 = 1e-9;
const EXACT_TOL: f64 = 1e-12;
const ZN_BUDGET: Duration = Duration::from_secs(5);
const UNIMODULAR_TOL: f64 = 1e-10;
const SCALE_TOL: f64 = 1e-9;
const FRACTION_TOL: f64 = 0.1;
const PROBE_CAPS: [i64; 5] = [4, 8, 12, 16, 20];
const PARSEVAL_SLACK: f64 = 1e-8;
const PARSEVAL_FUNCTIONS: usize = 100;
const PARSEVAL_BAND: i64 = 32;

type Outcome = Result<String, String>;

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn text(e: blaschke_lab::LabError) -> String {
    e.to_string()
}

fn commutant_round_trip_criterion() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (_, b) in test_blaschke_products() {
        worst = worst.max(commutant_round_trip(&b, ROUND_TRIP_BAND, ROUND_TRIP_TRIALS, 1).map_err(text)?);
    }
    let t = start.elapsed();
    verdict(
        worst < ROUND_TRIP_TOL && t < ROUND_TRIP_BUDGET,
        format!("max residual {worst:.2e} (tol {ROUND_TRIP_TOL:.0e}), {:.1}s", t.as_secs_f64()),
    )
}

fn dichotomy_criterion() -> Outcome {
    let d = commutant_dichotomy(DICHOTOMY_PAIRS, 16, 2).map_err(text)?;
    verdict(
        d.agreements == DICHOTOMY_PAIRS && d.equal_pairs == DICHOTOMY_PAIRS / 2,
        format!("{}/{} agree, {} grid-equal", d.agreements, d.pairs, d.equal_pairs),
    )
}

fn axioms_criterion() -> Outcome {
    let settings = CertSettings::default();
    let mut maps: Vec<(String, MapRef, Vec<FourierVector>)> = vec![
        ("J".into(), Arc::new(ConjJ), settings.probes()),
        ("J*".into(), Arc::new(ConjJStar), settings.probes()),
    ];
    for (label, theta) in [
        ("z", BlaschkeProduct::monomial(1)),
        ("z^2", BlaschkeProduct::monomial(2)),
        ("[1/2]", BlaschkeProduct::from_real_zeros(&[0.5]).map_err(text)?),
    ] {
        let probes = blaschke_probes(&theta, &settings);
        maps.push((format!("C_{label}"), Arc::new(make_c_theta(&theta)), probes.clone()));
        let star = make_c_theta_star(&theta, settings.band).map_err(text)?;
        maps.push((format!("C*_{label}"), Arc::new(star), probes));
    }
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    for (name, c, probes) in &maps {
        let r = is_conjugation_with_tol(&**c, probes, AXIOM_TOL).map_err(text)?;
        worst = r.conditions.iter().map(|c| c.residual).fold(worst, f64::max);
        if !r.overall {
            failed.push(name.clone());
        }
    }
    verdict(
        failed.is_empty(),
        format!("{} maps, worst residual {worst:.2e}, failing {failed:?}", maps.len()),
    )
}

/// Dense columns of `M_[ξ1,ξ2]J★` along `z²`: column `k` is `ξ_{(k mod 2)+1}·z^k`.
struct DenseCommuting {
    cols: Vec<Vec<Complex64>>,
    lo: i64,
}

impl DenseCommuting {
    /// Symbols are coefficient triples on indices `−1, 0, 1`.
    fn new(xi: [&[Complex64; 3]; 2], band: i64) -> Self {
        let lo = -band - 2;
        let width = (2 * (band + 2) + 1) as usize;
        let cols = (lo..=-lo)
            .map(|k| {
                let mut col = vec![Complex64::new(0.0, 0.0); width];
                let sym = xi[k.rem_euclid(2) as usize];
                for (d, c) in (-1..=1).zip(sym) {
                    let i = k + d - lo;
                    if (0..width as i64).contains(&i) {
                        col[i as usize] += c;
                    }
                }
                col
            })
            .collect();
        DenseCommuting { cols, lo }
    }

    fn col(&self, k: i64) -> &[Complex64] {
        &self.cols[(k - self.lo) as usize]
    }

    /// `(involution, antiunitarity)` residuals over columns `|k| ≤ band`.
    fn defects(&self, band: i64) -> (f64, f64) {
        let (mut inv, mut anti): (f64, f64) = (0.0, 0.0);
        for k in -band..=band {
            let ck = self.col(k);
            // C(C z^k) = Σ_j conj(C(z^k)_j) C(z^j)
            let mut twice = vec![Complex64::new(0.0, 0.0); ck.len()];
            for (i, a) in ck.iter().enumerate() {
                if a.norm() > 0.0 {
                    for (t, b) in twice.iter_mut().zip(self.col(i as i64 + self.lo)) {
                        *t += a.conj() * b;
                    }
                }
            }
            for (i, t) in twice.iter().enumerate() {
                let want = if i as i64 + self.lo == k { 1.0 } else { 0.0 };
                inv = inv.max((t - want).norm());
            }
            for m in -band..=band {
                let g: Complex64 = ck.iter().zip(self.col(m)).map(|(a, b)| a.conj() * b).sum();
                let want = if m == k { 1.0 } else { 0.0 };
                anti = anti.max((g - want).norm());
            }
        }
        (inv, anti)
    }
}

fn lattice_criterion() -> Outcome {
    let values = [0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 1.0, -1.0];
    let mut lattice = Vec::new();
    for a in values {
        for b in values {
            for c in values {
                lattice.push([a, b, c].map(|x| Complex64::new(x, 0.0)));
            }
        }
    }
    let settings = CertSettings::default();
    let (mut pairs, mut disagreements, mut literal, mut accepted) = (0, 0, 0, 0);
    for x1 in &lattice {
        for x2 in &lattice {
            let (inv, anti) = DenseCommuting::new([x1, x2], LATTICE_BAND).defects(LATTICE_BAND);
            let dense = inv < LATTICE_TOL && anti < LATTICE_TOL;
            let f1 = FourierVector::new(-1, x1.to_vec());
            let f2 = FourierVector::new(-1, x2.to_vec());
            let cert = certify_commuting_pair_jstar(&f1, &f2, &settings).map_err(text)?.overall;
            pairs += 1;
            accepted += cert as usize;
            disagreements += (cert != dense) as usize;
            literal += (cert != (inv < LATTICE_TOL)) as usize;
        }
    }
    verdict(
        disagreements == 0,
        format!(
            "{pairs} pairs, {accepted} conjugations, {disagreements} disagreements (involution-only reading: {literal})"
        ),
    )
}

fn zn_criterion() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut tables = true;
    for n in 2..=6 {
        let r = verify_star_factorization(n, 24).map_err(text)?;
        worst = r.conditions.iter().map(|c| c.residual).fold(worst, f64::max);
        tables &= action_table_matches(n).map_err(text)?;
    }
    let t = start.elapsed();
    verdict(
        worst <= EXACT_TOL && tables && t < ZN_BUDGET,
        format!("worst residual {worst:.1e}, tables match {tables}, {:.2}s", t.as_secs_f64()),
    )
}

fn gamma_criterion() -> Outcome {
    let z2 = BlaschkeProduct::monomial(2);
    let z = FourierVector::z_pow(1);
    let out = model_intertwining_gamma(&z, &z, &z2, &z2, &CertSettings::default()).map_err(text)?;
    let r = &out.report;
    let gamma_ok = out.gamma.distance(&FourierVector::z_pow(2)) < EXACT_TOL;
    let unimodular = r.residual("|gamma| = 1");
    let divides = r.passes("alpha divides gamma") && r.passes("gamma divides theta");
    let scale_err = (out.scale - Complex64::new(2.0, 0.0)).norm();
    let sqrt2 = r.extracted["residual_scale_sqrt2"].as_f64().unwrap_or(f64::NAN);
    verdict(
        gamma_ok && unimodular < UNIMODULAR_TOL && divides && scale_err < SCALE_TOL,
        format!(
            "gamma = z^2 {gamma_ok}, |gamma|=1 residual {unimodular:.1e}, divisibility {divides}, c = {:.12} (sqrt2 reading residual {sqrt2:.3})",
            out.scale.re
        ),
    )
}

fn fractions(kind: ForbiddenInvariance, band: i64, caps: &[i64]) -> Result<Vec<f64>, String> {
    caps.iter()
        .map(|&c| impossibility_probe(kind, band, c, 3).map_err(text))
        .collect()
}

fn impossibility_criterion() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for kind in [ForbiddenInvariance::IntertwiningHardy, ForbiddenInvariance::IntertwiningBeurling] {
        let f = fractions(kind, 8, &PROBE_CAPS)?;
        let monotone = f.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        ok &= monotone && f[f.len() - 1] < FRACTION_TOL;
        detail.push(format!("{} {:.3} monotone {monotone}", kind.label(), f[f.len() - 1]));
    }
    for n in 2..=4 {
        let kind = ForbiddenInvariance::ZnSymmetricHardy { n };
        let f = fractions(kind, 9, &[24])?;
        ok &= f[0] < FRACTION_TOL;
        detail.push(format!("{} {:.3}", kind.label(), f[0]));
    }
    verdict(ok, detail.join(", "))
}

fn parseval_criterion() -> Outcome {
    let mut worst_excess = f64::NEG_INFINITY;
    for (_, b) in test_blaschke_products() {
        let frame = Arc::new(WoldFrame::new(&b, Band::symmetric(PARSEVAL_BAND), None).map_err(text)?);
        for t in 0..PARSEVAL_FUNCTIONS {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            rng.set_stream(t as u64 + 1);
            let f = FourierVector::from_fn(Band::symmetric(PARSEVAL_BAND), |_| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let norm: f64 = f.coeffs().iter().map(|c| c.norm_sqr()).sum();
            let allowance = frame.tail_bound() * norm + PARSEVAL_SLACK;
            let w = frame.decompose(&f).map_err(text)?;
            let energy: f64 = w.entries(0.0).iter().map(|(_, _, c)| c.norm_sqr()).sum();
            worst_excess = worst_excess.max((energy - norm).abs() - allowance);
            let parts = frame.components(&f).map_err(text)?;
            for i in 0..parts.len() {
                for j in i + 1..parts.len() {
                    let ip: Complex64 = parts[i].iter().map(|(k, a)| a * parts[j].coeff(k).conj()).sum();
                    worst_excess = worst_excess.max(ip.norm() - allowance);
                }
            }
        }
    }
    verdict(worst_excess < 0.0, format!("largest excess over the tail allowance {worst_excess:.2e}"))
}

fn determinism_criterion() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let run = Command::new(env!("CARGO_BIN_EXE_blaschke-lab"))
            .args(["verify", "all", "--seed", "7", "--no-timestamp", "--out"])
            .arg(&path)
            .env_remove("BLASCHKE_LAB_CONFIG")
            .output()
            .map_err(|e| e.to_string())?;
        if !run.status.success() {
            return Err(format!("verify all exited with {}", run.status));
        }
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let same = outputs[0] == outputs[1];
    verdict(same, format!("{} bytes, identical {same}", outputs[0].len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("commutant round trip", commutant_round_trip_criterion),
        ("M_z dichotomy", dichotomy_criterion),
        ("conjugation axioms", axioms_criterion),
        ("lattice brute force", lattice_criterion),
        ("z^n identities", zn_criterion),
        ("gamma for C_{z^2}", gamma_criterion),
        ("impossibility probes", impossibility_criterion),
        ("Wold Parseval", parseval_criterion),
        ("determinism", determinism_criterion),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match check() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {tag} {name}: {detail} [{:.1}s]", i + 1, start.elapsed().as_secs_f64());
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
