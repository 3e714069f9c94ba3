//! Built-in fixtures: named measure/wavelet/parameter bundles shared by the
//! command-line driver and the test suites.

use crate::error::{Error, Result};
use crate::symbolic::{build_sft, full_shift, Sft, Word};
use crate::synthesis::{SignRule, WaveletKind};
use crate::thermo::Potential;
use std::collections::BTreeSet;

/// A reproducible experiment setup.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub id: String,
    pub sft: Sft,
    pub potential: Potential,
    pub wavelet: WaveletKind,
    pub s0: f64,
    pub p0: f64,
    pub sign_rule: SignRule,
}

impl Fixture {
    /// Construct a named built-in fixture.
    ///
    /// * `monofractal` — uniform measure on the full shift, `s0 = 1/2`,
    ///   `p0 = 4`: every point carries exponent 1/2.
    /// * `bernoulli` — Bernoulli(1/4) measure, `s0 = 3/5`, `p0 = 2`: a
    ///   strictly concave spectrum.
    /// * `goldenmean` — uniform potential on the subshift forbidding `11`;
    ///   pressure fixtures only.
    pub fn builtin(id: &str) -> Result<Fixture> {
        match id {
            "monofractal" => Ok(Fixture {
                id: id.into(),
                sft: full_shift(2)?,
                potential: Potential::constant(0.0),
                wavelet: WaveletKind::Gauss2,
                s0: 0.5,
                p0: 4.0,
                sign_rule: SignRule::RademacherFromSeed,
            }),
            "bernoulli" => Ok(Fixture {
                id: id.into(),
                sft: full_shift(2)?,
                potential: Potential::bernoulli(0.25)?,
                wavelet: WaveletKind::Gauss2,
                s0: 0.6,
                p0: 2.0,
                sign_rule: SignRule::RademacherFromSeed,
            }),
            "goldenmean" => {
                let mut f = BTreeSet::new();
                f.insert(Word::parse("11")?);
                Ok(Fixture {
                    id: id.into(),
                    sft: build_sft(&f, 2)?,
                    potential: Potential::constant(0.0),
                    wavelet: WaveletKind::Gauss2,
                    s0: 0.5,
                    p0: 4.0,
                    sign_rule: SignRule::RademacherFromSeed,
                })
            }
            other => Err(Error::InvalidParameter(format!("unknown fixture `{other}`"))),
        }
    }

    pub fn builtin_ids() -> &'static [&'static str] {
        &["monofractal", "bernoulli", "goldenmean"]
    }
}
