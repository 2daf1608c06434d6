use num_complex::Complex64;
use proptest::prelude::*;

use blaschke_lab::circle::FourierVector;
use blaschke_lab::conjugation::{certify_commuting_pair_jstar, certify_intertwining_pair_j, CertSettings};
use blaschke_lab::decomp::wold_decompose;
use blaschke_lab::generators::{certify, generator_settings, random_symbols, GeneratorParams, SymbolClass};
use blaschke_lab::io::RunConfig;
use blaschke_lab::zn::{action_table, action_table_matches};
use blaschke_lab::BlaschkeProduct;

fn vector(max_len: usize) -> impl Strategy<Value = FourierVector> {
    (-6i64..=6, prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 0..=max_len)).prop_map(|(lo, c)| {
        FourierVector::new(lo, c.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
    })
}

fn small_zero() -> impl Strategy<Value = Complex64> {
    (0.0f64..0.45, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn class() -> impl Strategy<Value = SymbolClass> {
    prop_oneof![
        Just(SymbolClass::IntertwiningCz2),
        Just(SymbolClass::IntertwiningJ),
        Just(SymbolClass::CommutingJStar),
        Just(SymbolClass::HardyCommuting),
    ]
}

fn light() -> CertSettings {
    CertSettings {
        random_probes: 2,
        ..CertSettings::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn j_and_jstar_are_norm_preserving_involutions(f in vector(12)) {
        for g in [f.conj_j(), f.conj_jstar()] {
            prop_assert!((g.norm() - f.norm()).abs() < 1e-12);
        }
        prop_assert!(f.conj_j().conj_j().distance(&f) < 1e-14);
        prop_assert!(f.conj_jstar().conj_jstar().distance(&f) < 1e-14);
    }

    #[test]
    fn wold_reconstruction_returns_input(f in vector(10), zeros in prop::collection::vec(small_zero(), 1..=3)) {
        let b = BlaschkeProduct::new(zeros).unwrap();
        let w = wold_decompose(&f, &b, None).unwrap();
        let slack = 1e-8 + w.tail_bound() * f.norm_sqr();
        prop_assert!(w.parseval_defect() <= slack);
        prop_assert!(w.reconstruct().distance(&f) <= slack.sqrt() + 1e-8);
    }

    #[test]
    fn config_validation_matches_its_rules(
        band in -2i64..40,
        grid in 0usize..200,
        tol_exact in 1e-14f64..1e-6,
        tol_series in 1e-14f64..1e-6,
        trials in 0usize..3,
    ) {
        let c = RunConfig { band, grid, tol_exact, tol_series, seed: 0, trials };
        let ok = band >= 1 && grid >= 4 * band as usize + 4 && tol_exact <= tol_series && trials >= 1;
        prop_assert_eq!(c.validate().is_ok(), ok);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generated_symbols_certify(class in class(), seed in any::<u64>()) {
        let params = GeneratorParams::default();
        let g = random_symbols(class, seed, 1, &params).unwrap().remove(0);
        prop_assert_eq!(g.class, class);
        prop_assert!(certify(&g, &generator_settings(&params, seed ^ 1)).unwrap());
    }

    #[test]
    fn j_and_cz2_forms_agree(seed in any::<u64>(), noise in vector(3), perturb in any::<bool>()) {
        let g = random_symbols(SymbolClass::IntertwiningJ, seed, 1, &GeneratorParams::default()).unwrap().remove(0);
        let [mut a, b] = g.symbols;
        if perturb {
            a = &a + &noise;
        }
        let r = certify_intertwining_pair_j(&a, &b, &light()).unwrap();
        prop_assert!(r.passes("translation agrees"));
        prop_assert_eq!(r.extracted["translated_verdict"].as_bool(), Some(r.overall));
    }

    #[test]
    fn mz_commutes_exactly_when_symbols_coincide(seed in any::<u64>()) {
        let g = random_symbols(SymbolClass::CommutingJStar, seed, 1, &GeneratorParams::default()).unwrap().remove(0);
        let [a, b] = &g.symbols;
        let settings = light();
        for (x, y) in [(a, b), (a, a), (b, b)] {
            let r = certify_commuting_pair_jstar(x, y, &settings).unwrap();
            let equal = r.extracted["symbol_grid_distance"].as_f64().unwrap() < settings.tol_grid;
            let kind = r.extracted["kind"].as_str().unwrap();
            if r.overall {
                prop_assert_eq!(kind == "commutes-mz", equal);
                prop_assert!(kind != "indeterminate");
            }
        }
    }
}

#[test]
fn action_table_is_an_involution() {
    for n in 2..=8 {
        let t = action_table(n);
        assert!((0..n).all(|k| t[t[k]] == k));
        assert!(action_table_matches(n).unwrap());
    }
}
