//! Every example runs to completion.

mod beurling_structure {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/beurling_structure.rs"));
}

mod certify_symbol_pairs {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/certify_symbol_pairs.rs"));
}

mod classify_conjugations {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/classify_conjugations.rs"));
}

mod commutant_symbols {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/commutant_symbols.rs"));
}

mod conjugation_axioms {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/conjugation_axioms.rs"));
}

mod hardy_structure {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/hardy_structure.rs"));
}

mod impossibility_probes {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/impossibility_probes.rs"));
}

mod model_space_gamma {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/model_space_gamma.rs"));
}

mod random_symbols {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/random_symbols.rs"));
}

mod run_suite {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/run_suite.rs"));
}

mod wold_decomposition {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/wold_decomposition.rs"));
}

mod zn_conjugations {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/zn_conjugations.rs"));
}

#[test]
fn beurling_structure_runs() {
    beurling_structure::run().unwrap();
}

#[test]
fn certify_symbol_pairs_runs() {
    certify_symbol_pairs::run().unwrap();
}

#[test]
fn classify_conjugations_runs() {
    classify_conjugations::run().unwrap();
}

#[test]
fn commutant_symbols_runs() {
    commutant_symbols::run().unwrap();
}

#[test]
fn conjugation_axioms_runs() {
    conjugation_axioms::run().unwrap();
}

#[test]
fn hardy_structure_runs() {
    hardy_structure::run().unwrap();
}

#[test]
fn impossibility_probes_runs() {
    impossibility_probes::run().unwrap();
}

#[test]
fn model_space_gamma_runs() {
    model_space_gamma::run().unwrap();
}

#[test]
fn random_symbols_runs() {
    random_symbols::run().unwrap();
}

#[test]
fn run_suite_runs() {
    run_suite::run().unwrap();
}

#[test]
fn wold_decomposition_runs() {
    wold_decomposition::run().unwrap();
}

#[test]
fn zn_conjugations_runs() {
    zn_conjugations::run().unwrap();
}
