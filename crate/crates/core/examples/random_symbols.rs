// Seeded generators for each symbol class; every tuple is certified before it is returned.

use blaschke_lab::generators::{random_symbols, GeneratorParams, SymbolClass};
use blaschke_lab::Result;

pub fn run() -> Result<()> {
    let params = GeneratorParams::default();
    for class in [
        SymbolClass::IntertwiningCz2,
        SymbolClass::IntertwiningJ,
        SymbolClass::CommutingJStar,
        SymbolClass::HardyCommuting,
    ] {
        let tuples = random_symbols(class, 1, 3, &params)?;
        println!("{class:?}");
        for g in &tuples {
            let [a, b] = &g.symbols;
            println!("  support {:?} / {:?}", a.band().map(|b| (b.lo, b.hi)), b.band().map(|b| (b.lo, b.hi)));
            if let Some(h) = g.hardy {
                println!("  (a0, a1, b0) = {h:?}");
            }
        }
    }
    let diagonal = GeneratorParams {
        off_diagonal: false,
        ..params
    };
    let g = &random_symbols(SymbolClass::IntertwiningCz2, 1, 1, &diagonal)?[0];
    println!("without off-diagonal weight phi1 = phi2: {}", g.symbols[0] == g.symbols[1]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
