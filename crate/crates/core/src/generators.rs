//! Seeded constructive generators for the four symbol classes. Every emitted
//! tuple is certified before it is returned.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circle::FourierVector;
use crate::conjugation::{
    certify_commuting_pair_jstar, certify_intertwining_pair, certify_intertwining_pair_j, CertSettings,
};
use crate::error::{LabError, Result};

/// Rejected draws tolerated before a generator is declared broken.
pub const MAX_REJECTIONS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymbolClass {
    /// `(φ1, φ2)` with `M_{[φ1,φ2]}𝒞_{z²}` an intertwining conjugation.
    IntertwiningCz2,
    /// `(ψ1, ψ2)` with `M_{[ψ1,ψ2]}J` an intertwining conjugation.
    IntertwiningJ,
    /// `(ξ1, ξ2)` with `M_{[ξ1,ξ2]}J★` a commuting conjugation.
    #[serde(rename = "commuting-jstar")]
    CommutingJStar,
    /// `(ξ1, ξ2) = (a0 + a1 z, a1 z̄ + b0)`, the Hardy-preserving commuting conjugations.
    HardyCommuting,
}

impl FromStr for SymbolClass {
    type Err = LabError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "intertwining-cz2" | "thm41" => SymbolClass::IntertwiningCz2,
            "intertwining-j" | "cor42" => SymbolClass::IntertwiningJ,
            "commuting-jstar" | "cor46" => SymbolClass::CommutingJStar,
            "hardy-commuting" | "thm52" => SymbolClass::HardyCommuting,
            other => return Err(LabError::Config(format!("unknown symbol class `{other}`"))),
        })
    }
}

/// Shape limits for generated symbols.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorParams {
    /// Largest `|s|` in the even shift `z^{2s}`.
    pub max_shift: i64,
    /// Largest `m` in the odd offset `z^{±(2m+1)}`.
    pub max_offset: i64,
    /// When false the off-diagonal weight is zero and the pair is diagonal.
    pub off_diagonal: bool,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            max_shift: 1,
            max_offset: 1,
            off_diagonal: true,
        }
    }
}

impl GeneratorParams {
    /// Largest index magnitude a generated symbol can reach.
    pub fn reach(&self) -> i64 {
        2 * self.max_shift + 2 * self.max_offset + 2
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedSymbols {
    pub class: SymbolClass,
    pub symbols: [FourierVector; 2],
    /// `(a0, a1, b0)` for the Hardy class.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hardy: Option<[[f64; 2]; 3]>,
}

fn phase(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI))
}

/// `(a0, a1, b0)` with `|a0|²+|a1|² = |b0|²+|a1|² = 1` and `a0 ā1 + a1 b̄0 = 0`.
pub fn hardy_triple(rng: &mut ChaCha8Rng) -> (Complex64, Complex64, Complex64) {
    let s: f64 = rng.gen_range(0.0..=1.0);
    let c = (1.0 - s * s).sqrt();
    let (ea, eb) = (phase(rng), phase(rng));
    let a1 = ea * s;
    let b0 = eb * c;
    let a0 = -(eb.conj() * ea * ea) * c;
    (a0, a1, b0)
}

/// `φ1 = ω z^{2s}(p + q z^{2m+1})`, `φ2 = ω z^{2s}(p − q̄(p/p̄) z̄^{2m+1})`.
fn draw_intertwining_cz2(rng: &mut ChaCha8Rng, params: &GeneratorParams) -> [FourierVector; 2] {
    let w = phase(rng);
    let s = rng.gen_range(-params.max_shift..=params.max_shift);
    let m = rng.gen_range(0..=params.max_offset);
    let (p, q) = if params.off_diagonal {
        let t: f64 = rng.gen_range(0.05..1.0);
        (phase(rng) * t.sqrt(), phase(rng) * (1.0 - t).sqrt())
    } else {
        (phase(rng), Complex64::new(0.0, 0.0))
    };
    let d = 2 * m + 1;
    let turn = p / p.conj();
    let phi1 = FourierVector::monomial(2 * s, w * p) + FourierVector::monomial(2 * s + d, w * q);
    let phi2 = FourierVector::monomial(2 * s, w * p) - FourierVector::monomial(2 * s - d, w * q.conj() * turn);
    [phi1, phi2]
}

fn draw_commuting_jstar(rng: &mut ChaCha8Rng, params: &GeneratorParams) -> [FourierVector; 2] {
    let (a0, a1, b0) = hardy_triple(rng);
    let d = 2 * rng.gen_range(0..=params.max_offset) + 1;
    let w = phase(rng);
    let xi1 = FourierVector::constant(a0 * w) + FourierVector::monomial(d, a1 * w);
    let xi2 = FourierVector::monomial(-d, a1 * w) + FourierVector::constant(b0 * w);
    [xi1, xi2]
}

fn draw(class: SymbolClass, rng: &mut ChaCha8Rng, params: &GeneratorParams) -> GeneratedSymbols {
    let (symbols, hardy) = match class {
        SymbolClass::IntertwiningCz2 => (draw_intertwining_cz2(rng, params), None),
        SymbolClass::IntertwiningJ => {
            let [p1, p2] = draw_intertwining_cz2(rng, params);
            ([p2.shift(1), p1.shift(1)], None)
        }
        SymbolClass::CommutingJStar => (draw_commuting_jstar(rng, params), None),
        SymbolClass::HardyCommuting => {
            let (a0, a1, b0) = hardy_triple(rng);
            let xi1 = FourierVector::constant(a0) + FourierVector::monomial(1, a1);
            let xi2 = FourierVector::monomial(-1, a1) + FourierVector::constant(b0);
            ([xi1, xi2], Some([[a0.re, a0.im], [a1.re, a1.im], [b0.re, b0.im]]))
        }
    };
    GeneratedSymbols { class, symbols, hardy }
}

/// Runs the class certifier on a tuple.
pub fn certify(g: &GeneratedSymbols, settings: &CertSettings) -> Result<bool> {
    let [a, b] = &g.symbols;
    let report = match g.class {
        SymbolClass::IntertwiningCz2 => certify_intertwining_pair(a, b, settings)?,
        SymbolClass::IntertwiningJ => certify_intertwining_pair_j(a, b, settings)?,
        SymbolClass::CommutingJStar | SymbolClass::HardyCommuting => certify_commuting_pair_jstar(a, b, settings)?,
    };
    Ok(report.overall)
}

/// Settings used to certify generated tuples: a probe band comfortably past `reach`.
pub fn generator_settings(params: &GeneratorParams, seed: u64) -> CertSettings {
    CertSettings {
        band: 2 * params.reach() + 4,
        random_probes: 2,
        seed,
        ..CertSettings::default()
    }
}

/// `count` certified tuples; tuple `i` draws from its own substream of `seed`.
pub fn random_symbols(class: SymbolClass, seed: u64, count: usize, params: &GeneratorParams) -> Result<Vec<GeneratedSymbols>> {
    let settings = generator_settings(params, seed);
    let mut rejected = 0;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64 + 1);
        loop {
            let g = draw(class, &mut rng, params);
            if certify(&g, &settings)? {
                out.push(g);
                break;
            }
            rejected += 1;
            if rejected >= MAX_REJECTIONS {
                return Err(LabError::GeneratorExhausted { attempts: rejected });
            }
        }
    }
    Ok(out)
}
