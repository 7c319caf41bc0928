//! JSON layout of an [`OrfSystem`]. Complex numbers are `[re, im]`; floats use
//! the shortest representation that parses back to the same bits.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Normalization, OrfLevel, OrfSystem, Source};
use crate::error::Error;
use crate::measure::{CircleMeasure, MeasureSpec};
use crate::poles::PoleSequence;
use crate::ratfun::RatFun;

#[derive(Serialize, Deserialize)]
struct LevelRepr {
    n: usize,
    phi: Vec<Complex64>,
    phi_star: Vec<Complex64>,
    psi: Vec<Complex64>,
    psi_star: Vec<Complex64>,
    lambda: Option<Complex64>,
    e: Option<f64>,
    rho: Complex64,
    d: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SourceRepr {
    Measure { measure: MeasureSpec },
    Detached { label: String },
    Parameters,
}

#[derive(Serialize, Deserialize)]
struct SystemRepr {
    poles: PoleSequence,
    normalization: NormalizationRepr,
    source: SourceRepr,
    levels: Vec<LevelRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum NormalizationRepr {
    Orthonormal,
    General,
}

impl Serialize for OrfSystem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let source = match &self.source {
            Source::Measure(mu) => match mu.spec() {
                Some(spec) => SourceRepr::Measure { measure: spec.clone() },
                None => SourceRepr::Detached {
                    label: mu.label().to_string(),
                },
            },
            Source::Detached(label) => SourceRepr::Detached { label: label.clone() },
            Source::Parameters => SourceRepr::Parameters,
        };
        SystemRepr {
            poles: (*self.poles).clone(),
            normalization: match self.normalization {
                Normalization::Orthonormal => NormalizationRepr::Orthonormal,
                Normalization::General => NormalizationRepr::General,
            },
            source,
            levels: self
                .levels
                .iter()
                .map(|l| LevelRepr {
                    n: l.n,
                    phi: l.phi.numer().to_vec(),
                    phi_star: l.phi_star.numer().to_vec(),
                    psi: l.psi.numer().to_vec(),
                    psi_star: l.psi_star.numer().to_vec(),
                    lambda: l.lambda,
                    e: l.e,
                    rho: l.rho,
                    d: l.d,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrfSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = SystemRepr::deserialize(d)?;
        build(repr).map_err(serde::de::Error::custom)
    }
}

fn build(repr: SystemRepr) -> Result<OrfSystem, Error> {
    let poles = Arc::new(repr.poles);
    if repr.levels.is_empty() {
        return Err(Error::Domain("an ORF system needs at least level 0".into()));
    }
    let mut levels = Vec::with_capacity(repr.levels.len());
    for (i, l) in repr.levels.into_iter().enumerate() {
        if l.n != i {
            return Err(Error::Domain(format!("level {i} is labelled {}", l.n)));
        }
        let f = |c: Vec<Complex64>| -> Result<RatFun, Error> {
            if c.len() != i + 1 {
                return Err(Error::Domain(format!(
                    "level {i} needs {} coefficients, got {}",
                    i + 1,
                    c.len()
                )));
            }
            RatFun::new(poles.clone(), c)
        };
        levels.push(OrfLevel {
            n: l.n,
            phi: f(l.phi)?,
            phi_star: f(l.phi_star)?,
            psi: f(l.psi)?,
            psi_star: f(l.psi_star)?,
            lambda: l.lambda,
            e: l.e,
            rho: l.rho,
            d: l.d,
        });
    }
    let source = match repr.source {
        SourceRepr::Measure { measure } => Source::Measure(CircleMeasure::from_spec(&measure)?),
        SourceRepr::Detached { label } => Source::Detached(label),
        SourceRepr::Parameters => Source::Parameters,
    };
    let normalization = match repr.normalization {
        NormalizationRepr::Orthonormal => Normalization::Orthonormal,
        NormalizationRepr::General => Normalization::General,
    };
    Ok(OrfSystem::from_parts(poles, levels, normalization, source))
}
