//! Conjugations along `B = zⁿ` and general finite Blaschke products: basis
//! action tables, the slotwise factorization of `𝒞★_{zⁿ}`, and symbol
//! extraction for conjugations that intertwine or commute with `M_B`.

use std::sync::Arc;

use serde::Serialize;

use crate::blaschke::BlaschkeProduct;
use crate::circle::{inner_product, Band, FourierVector};
use crate::conjugation::{make_c_theta, make_c_theta_star, CertSettings};
use crate::decomp::{decay_pad, invariance_residual, SubspaceSpec};
use crate::error::{LabError, Result};
use crate::operators::{
    compose, edge_margin, map_distance, relation_residual, standard_probes, symbols_from_basis_images, CircleMap,
    ConjJStar, MapRef, MultiSymbolOp, Multiplication,
};
use crate::report::CertReport;
use crate::structure::symmetric_residual;

/// Tolerance for the exact monomial identities along `zⁿ`.
pub const ZN_EXACT_TOL: f64 = 1e-12;

/// `k ↦ n−1−k`: the action of `f ↦ zⁿ·conj(z f)` on `1, z, …, z^{n−1}`.
pub fn action_table(n: usize) -> Vec<usize> {
    (0..n).map(|k| n - 1 - k).collect()
}

/// `true` when the table agrees with the conjugation applied to each monomial.
pub fn action_table_matches(n: usize) -> Result<bool> {
    let c = make_c_theta(&BlaschkeProduct::monomial(n));
    for (k, image) in action_table(n).into_iter().enumerate() {
        let got = c.apply(&FourierVector::z_pow(k as i64))?;
        if got.distance(&FourierVector::z_pow(image as i64)) > ZN_EXACT_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZnVariant {
    /// `𝒞_{zⁿ} = M_{z^{n−1}}J`.
    Plain,
    /// `𝒞★_{zⁿ} = M_{[z^{n−1}, z^{n−3}, …, z^{1−n}]}J★`.
    Star,
}

/// A conjugation along `zⁿ` written as a slotwise multiplication after `J` or `J★`.
#[derive(Debug, Clone, Serialize)]
pub struct ZnConjugationForm {
    pub n: usize,
    pub variant: ZnVariant,
    pub symbols: Vec<FourierVector>,
}

/// `z^{n+1−2j}` for `j = 1..n`.
pub fn star_symbols(n: usize) -> Vec<FourierVector> {
    (1..=n as i64).map(|j| FourierVector::z_pow(n as i64 + 1 - 2 * j)).collect()
}

pub fn zn_form(n: usize, variant: ZnVariant) -> ZnConjugationForm {
    let symbols = match variant {
        ZnVariant::Plain => vec![FourierVector::z_pow(n as i64 - 1); n],
        ZnVariant::Star => star_symbols(n),
    };
    ZnConjugationForm { n, variant, symbols }
}

/// Compares `𝒞★_{zⁿ}` with `M_{[z^{n+1−2j}]}J★` on every monomial of `[−band, band]`.
pub fn verify_star_factorization(n: usize, band: i64) -> Result<CertReport> {
    let b = BlaschkeProduct::monomial(n);
    let lhs = make_c_theta_star(&b, band)?;
    let rhs = compose(Arc::new(MultiSymbolOp::new(&b, star_symbols(n), band)?), Arc::new(ConjJStar));
    let probes = crate::operators::monomial_probes(Band::symmetric(band));
    let mut report = CertReport::new(format!("star-factorization-z{n}"));
    report.check("C*_zn = M_[z^(n+1-2j)] J*", map_distance(&lhs, &*rhs, &probes)?, ZN_EXACT_TOL);
    let plain = compose(Arc::new(Multiplication::z_pow(n as i64 - 1)), Arc::new(crate::operators::ConjJ));
    report.check("C_zn = M_z^(n-1) J", map_distance(&make_c_theta(&b), &*plain, &probes)?, ZN_EXACT_TOL);
    report.flag("action table", action_table_matches(n)?);
    report.extract("symbols", star_symbols(n));
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `C M_B = M_B̄ C`; factor through `𝒞_B`.
    Intertwine,
    /// `C M_B = M_B C`; factor through `𝒞★_B`.
    Commute,
}

/// `C = M_{[s_1..s_n]}·base` with the extraction checks.
#[derive(Debug, Clone, Serialize)]
pub struct BlaschkeFactorization {
    pub relation: Relation,
    pub symbols: Vec<FourierVector>,
    pub report: CertReport,
}

fn base_conjugation(b: &BlaschkeProduct, relation: Relation, band: i64) -> Result<MapRef> {
    Ok(match relation {
        Relation::Intertwine => Arc::new(make_c_theta(b)),
        Relation::Commute => Arc::new(make_c_theta_star(b, band)?),
    })
}

/// Probe set kept away from the band edge by the spread of `b`.
pub fn blaschke_probes(b: &BlaschkeProduct, settings: &CertSettings) -> Vec<FourierVector> {
    let margin = settings.margin.max(edge_margin(b, settings.band));
    let mut p = standard_probes(settings.band, margin, settings.seed);
    p.truncate(p.len() - crate::operators::RANDOM_PROBES + settings.random_probes.min(crate::operators::RANDOM_PROBES));
    p
}

/// Residual of `C M_B = M_B C` (commute) or `C M_B = M_B̄ C` (intertwine).
pub fn blaschke_relation_residual(c: &dyn CircleMap, b: &BlaschkeProduct, relation: Relation, probes: &[FourierVector]) -> Result<f64> {
    let hi = decay_pad(b.rho()) + b.degree() as i64;
    let mb = Multiplication::blaschke(b, hi);
    match relation {
        Relation::Commute => relation_residual(c, &mb, &mb, probes),
        Relation::Intertwine => relation_residual(c, &mb, &Multiplication::blaschke_conj(b, hi), probes),
    }
}

/// Symbols with `C = M_{[s_1..s_n]}𝒞_B` (intertwine) or `C = M_{[s_1..s_n]}𝒞★_B` (commute),
/// read off `C∘𝒞_B` (resp. `C∘𝒞★_B`) on the basis of `K_B`.
pub fn decompose_conjugation(
    c: MapRef,
    b: &BlaschkeProduct,
    relation: Relation,
    settings: &CertSettings,
) -> Result<BlaschkeFactorization> {
    let probes = blaschke_probes(b, settings);
    let residual = blaschke_relation_residual(&*c, b, relation, &probes)?;
    if residual > settings.tol_relation {
        return Err(LabError::RelationViolation { residual });
    }
    let base = base_conjugation(b, relation, settings.band)?;
    let unitary_part = compose(c.clone(), base.clone());
    let symbols = symbols_from_basis_images(&*unitary_part, b, settings.band)?;
    let m: MapRef = Arc::new(MultiSymbolOp::new(b, symbols.clone(), settings.band)?);

    let mut report = CertReport::new(match relation {
        Relation::Intertwine => "intertwining-factorization",
        Relation::Commute => "commuting-factorization",
    });
    report.check("relation with M_B", residual, settings.tol_relation);
    let rebuilt = compose(m.clone(), base.clone());
    report.check("rebuilt C matches", map_distance(&*rebuilt, &*c, &probes)?, settings.tol_relation);
    report.check("M isometric", isometry_residual(&*m, &probes)?, settings.tol_relation);
    let pairs: Vec<_> = probes.iter().take(24).cloned().collect();
    report.check("M symmetric for the base conjugation", symmetric_residual(&*m, &*base, &pairs)?, settings.tol_relation);
    Ok(BlaschkeFactorization {
        relation,
        symbols,
        report,
    })
}

/// `max |⟨Mv, Mw⟩ − ⟨v, w⟩|` over probe pairs.
pub fn isometry_residual(m: &dyn CircleMap, probes: &[FourierVector]) -> Result<f64> {
    let images: Vec<_> = probes.iter().map(|v| m.apply(v)).collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for (i, v) in probes.iter().enumerate() {
        for (j, w) in probes.iter().enumerate() {
            worst = worst.max((inner_product(&images[i], &images[j]) - inner_product(v, w)).norm());
        }
    }
    Ok(worst)
}

/// Symbols `ξ_j` with `C = M_{[ξ_1..ξ_n]}J★` for an `H²`-preserving conjugation
/// commuting with `M_{zⁿ}`; each `z^{j−1}ξ_j` must be analytic.
#[derive(Debug, Clone, Serialize)]
pub struct ZnHardyStructure {
    pub xi: Vec<FourierVector>,
    pub report: CertReport,
}

/// `ξ_j = z^{n+1−2j}·ψ_{n+1−j}` from `C = M_{[ψ]}𝒞★_{zⁿ}`.
pub fn star_to_jstar_symbols(psi: &[FourierVector]) -> Vec<FourierVector> {
    let n = psi.len() as i64;
    (1..=n).map(|j| psi[(n - j) as usize].shift(n + 1 - 2 * j)).collect()
}

pub fn hardy_structure_zn(c: MapRef, n: usize, settings: &CertSettings) -> Result<ZnHardyStructure> {
    let b = BlaschkeProduct::monomial(n);
    let fact = decompose_conjugation(c.clone(), &b, Relation::Commute, settings)?;
    let top = (settings.band - settings.margin).max(1);
    let hardy: Vec<_> = crate::operators::monomial_probes(Band::new(0, top));
    let inv = invariance_residual(&*c, &SubspaceSpec::HardyH2, &SubspaceSpec::HardyH2, &hardy)?;
    if inv > settings.tol_relation {
        return Err(LabError::HypothesisFailure {
            name: "C(H2) in H2".into(),
            residual: inv,
        });
    }
    let xi = star_to_jstar_symbols(&fact.symbols);
    for (j, x) in xi.iter().enumerate() {
        let lifted = x.shift(j as i64);
        let bad = lifted.iter().find(|(k, v)| *k < 0 && v.norm() > settings.tol_exact);
        if let Some((k, v)) = bad {
            return Err(LabError::StructureViolation {
                symbol: format!("xi{}", j + 1),
                index: k - j as i64,
                value: v,
            });
        }
    }
    let mut report = CertReport::new(format!("hardy-commuting-z{n}"));
    report.absorb("factorization:", &fact.report);
    report.check("C(H2) in H2", inv, settings.tol_relation);
    let m: MapRef = Arc::new(MultiSymbolOp::new(&b, xi.clone(), settings.band)?);
    let probes = blaschke_probes(&b, settings);
    let rebuilt = compose(m.clone(), Arc::new(ConjJStar));
    report.check("C = M_[xi] J*", map_distance(&*rebuilt, &*c, &probes)?, settings.tol_relation);
    report.check("M_[xi] isometric", isometry_residual(&*m, &probes)?, settings.tol_relation);
    let pairs: Vec<_> = probes.iter().take(24).cloned().collect();
    report.check("M_[xi] J*-symmetric", symmetric_residual(&*m, &ConjJStar, &pairs)?, settings.tol_relation);
    report.extract("xi", &xi);
    Ok(ZnHardyStructure { xi, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugation::commuting_pair_operator;
    use crate::operators::ConjJ;
    use num_complex::Complex64;

    fn s() -> CertSettings {
        CertSettings {
            band: 12,
            ..CertSettings::default()
        }
    }

    #[test]
    fn tables() {
        assert_eq!(action_table(3), vec![2, 1, 0]);
        assert_eq!(action_table(2), vec![1, 0]);
        assert_eq!(action_table(4), vec![3, 2, 1, 0]);
        for n in 2..7 {
            assert!(action_table_matches(n).unwrap());
        }
    }

    #[test]
    fn star_factorization_is_exact() {
        assert_eq!(star_symbols(3), vec![FourierVector::z_pow(2), FourierVector::one(), FourierVector::z_pow(-2)]);
        for n in 2..7 {
            let r = verify_star_factorization(n, 20).unwrap();
            assert!(r.overall, "{r}");
            assert_eq!(r.residual("C*_zn = M_[z^(n+1-2j)] J*"), 0.0);
        }
    }

    #[test]
    fn decompose_examples() {
        let z2 = BlaschkeProduct::monomial(2);
        let f = decompose_conjugation(Arc::new(make_c_theta(&z2)), &z2, Relation::Intertwine, &s()).unwrap();
        assert_eq!(f.symbols, vec![FourierVector::one(); 2]);
        assert!(f.report.overall, "{}", f.report);
        let f = decompose_conjugation(Arc::new(ConjJ), &z2, Relation::Intertwine, &s()).unwrap();
        assert_eq!(f.symbols, vec![FourierVector::z_pow(-1); 2]);
        let f = decompose_conjugation(Arc::new(make_c_theta_star(&z2, 12).unwrap()), &z2, Relation::Commute, &s()).unwrap();
        assert_eq!(f.symbols, vec![FourierVector::one(); 2]);
        let err = decompose_conjugation(Arc::new(ConjJ), &z2, Relation::Commute, &s());
        assert!(matches!(err, Err(LabError::RelationViolation { .. })));
    }

    #[test]
    fn decompose_general_blaschke_round_trip() {
        let b = BlaschkeProduct::new(vec![Complex64::new(0.0, 0.0), Complex64::new(0.3, 0.0)]).unwrap();
        let settings = CertSettings {
            band: 48,
            ..CertSettings::default()
        };
        let c: MapRef = Arc::new(make_c_theta(&b));
        let f = decompose_conjugation(c, &b, Relation::Intertwine, &settings).unwrap();
        assert!(f.report.overall, "{}", f.report);
        for sym in &f.symbols {
            assert!(sym.distance(&FourierVector::one()) < 1e-8);
        }
    }

    #[test]
    fn hardy_structure_examples() {
        for n in 2..5 {
            let h = hardy_structure_zn(Arc::new(ConjJStar), n, &s()).unwrap();
            assert!(h.report.overall, "{}", h.report);
            assert_eq!(h.xi, vec![FourierVector::one(); n]);
        }
        let r = 0.5f64.sqrt();
        let xi1 = FourierVector::from_real(0, &[r, r]);
        let xi2 = FourierVector::from_real(-1, &[r, -r]);
        let c = commuting_pair_operator(&xi1, &xi2).unwrap();
        let h = hardy_structure_zn(c, 2, &s()).unwrap();
        assert_eq!(h.xi, vec![xi1, xi2]);
        let star = make_c_theta_star(&BlaschkeProduct::monomial(3), 12).unwrap();
        let h = hardy_structure_zn(Arc::new(star), 3, &s()).unwrap();
        assert_eq!(h.xi, star_symbols(3));
        let shifted = compose(Arc::new(Multiplication::z_pow(-1)), Arc::new(ConjJStar));
        assert!(matches!(
            hardy_structure_zn(shifted, 2, &s()),
            Err(LabError::HypothesisFailure { .. })
        ));
    }
}
