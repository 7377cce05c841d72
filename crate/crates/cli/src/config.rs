//! The single JSON config document shared by `build` and every experiment.
//!
//! ```json
//! {
//!   "system": {"kind": "milnes", "k": 4, "gamma0": "golden"},
//!   "experiment": "equidist",
//!   "params": {"n": 1000000, "character": [0, 0, 0, 1], "bound": 0.01}
//! }
//! ```

use std::path::Path;

use serde::Deserialize;
use skewflow::descriptor::parse_rational;
use skewflow::torus::TorusCoord;
use skewflow::{CharacterVector, Frac, Generator, Phase, SkewSystem, SymbolicPoint, SystemDescriptor, TorusPoint};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub system: SystemDescriptor,
    #[serde(default)]
    pub experiment: Option<String>,
    #[serde(default)]
    pub params: Params,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub n: Option<u64>,
    pub checkpoints: Option<Vec<u64>>,
    pub character: Option<Vec<i64>>,
    pub start: Option<Vec<String>>,
    pub bound: Option<f64>,
    pub seed: Option<u64>,
    pub grid: Option<usize>,
    pub range: Option<u64>,
    pub poly: Option<Vec<String>>,
    pub require_decreasing: Option<bool>,
    pub x: Option<Vec<String>>,
    pub y: Option<Vec<String>>,
    #[serde(rename = "box")]
    pub box_bound: Option<i64>,
    pub n_max: Option<u64>,
    pub n0: Option<i64>,
    pub width: Option<usize>,
    pub multiplier: Option<i64>,
    pub shifts: Option<Vec<i64>>,
    pub a: Option<[i64; 2]>,
    pub b: Option<[i64; 2]>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let config: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        if config.params.n == Some(0) {
            return Err(CliError::Parse("params.n must be at least 1".into()));
        }
        Ok(config)
    }

    pub fn build(&self) -> CliResult<SkewSystem> {
        Ok(self.system.build()?)
    }
}

pub fn required<T: Clone>(value: &Option<T>, name: &str, experiment: &str) -> CliResult<T> {
    value
        .clone()
        .ok_or_else(|| CliError::Parse(format!("experiment {experiment} needs params.{name}")))
}

pub fn parse_fracs(items: &[String]) -> CliResult<Vec<Frac>> {
    items
        .iter()
        .map(|s| parse_rational(s).map(Frac::new).map_err(CliError::from))
        .collect()
}

/// A coefficient modulo 1: `"golden"`, `"sqrt2"`, or an exact rational.
pub fn parse_phase(s: &str) -> CliResult<Phase> {
    match s.trim() {
        "golden" => Ok(Phase::golden()),
        "sqrt2" => Ok(Phase::sqrt2()),
        other => Ok(Frac::new(parse_rational(other)?).to_phase()),
    }
}

pub fn character(values: &[i64], system: &SkewSystem) -> CliResult<CharacterVector> {
    if values.len() != system.dim() {
        return Err(CliError::Parse(format!(
            "character has length {}, system dimension is {}",
            values.len(),
            system.dim()
        )));
    }
    Ok(CharacterVector::from_i64s(values))
}

/// A point in the mode the system's generator calls for.
#[derive(Clone, Debug)]
pub enum Start {
    Torus(TorusPoint),
    Symbolic(SymbolicPoint),
}

pub fn point(system: &SkewSystem, coords: Option<&[String]>) -> CliResult<Start> {
    let fracs = match coords {
        Some(c) => parse_fracs(c)?,
        None => vec![Frac::zero(); system.dim()],
    };
    if fracs.len() != system.dim() {
        return Err(CliError::Parse(format!(
            "point has {} coordinates, system dimension is {}",
            fracs.len(),
            system.dim()
        )));
    }
    Ok(match system.generator() {
        Generator::Symbolic => Start::Symbolic(SymbolicPoint::from_rationals(&fracs)),
        Generator::Rational(_) => Start::Torus(TorusPoint::Exact(fracs)),
        Generator::Float(_) => Start::Torus(TorusPoint::Float(fracs.iter().map(Frac::to_phase).collect())),
    })
}

/// The single base phase used by the one-dimensional factor experiments.
pub fn base_phase(system: &SkewSystem, experiment: &str) -> CliResult<Phase> {
    if system.m() != 1 {
        return Err(CliError::Parse(format!("experiment {experiment} needs m = 1")));
    }
    match system.generator() {
        Generator::Symbolic => Err(CliError::Parse(format!("experiment {experiment} needs a numeric gamma0"))),
        g => Ok(g.phases()?[0]),
    }
}
