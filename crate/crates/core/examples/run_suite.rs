// Runs one verification suite and prints its JSON report.

use blaschke_lab::io::{to_json_string, RunConfig, SuiteResult};
use blaschke_lab::suites::run_suite;
use blaschke_lab::Result;

pub fn run() -> Result<()> {
    let config = RunConfig {
        band: 16,
        grid: 68,
        trials: 4,
        seed: 7,
        ..RunConfig::default()
    };
    config.validate()?;
    let result = SuiteResult::new("zn-6x", &config, run_suite("zn-6x", &config)?);
    for r in &result.reports {
        println!("{} {}", if r.overall { "pass" } else { "FAIL" }, r.theorem);
    }
    let json = to_json_string(&result)?;
    println!("{} bytes of JSON, overall {}", json.len(), result.overall);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
