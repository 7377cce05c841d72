//! JSON system descriptors.
//!
//! ```json
//! {"kind": "milnes", "k": 4, "m": 1, "gamma0": "golden"}
//! {"kind": "general", "k": 3, "gamma0": ["1/3", "0.25"],
//!  "j": [["1","1"], ["2","1"], ["1","1"]], "profile": [["1","1"], ["1","1"], ["0","1"]]}
//! ```
//!
//! `gamma0` is `"symbolic"`, one of the named irrationals `"golden"` and
//! `"sqrt2"`, a decimal, or a fraction `"p/q"`, given once or per base
//! coordinate. Presets may omit `j` and `profile`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::dynamics::{Generator, Kind, SkewSystem};
use crate::error::{Error, Result};
use crate::qfamily::{
    hahn_profile, milnes_profile, pair_to_rational, rational_to_pair, JSequence, RationalPair,
};
use crate::torus::{Frac, Phase};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Gamma0Spec {
    One(String),
    PerCoordinate(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDescriptor {
    pub kind: String,
    pub k: usize,
    #[serde(default = "default_m")]
    pub m: usize,
    pub gamma0: Gamma0Spec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<RationalPair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<RationalPair>>,
}

fn default_m() -> usize {
    1
}

/// Parses `"p/q"`, an integer, or a decimal such as `"-0.125"` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty()
        || !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits: BigInt = format!("0{whole}{frac}").parse().map_err(|_| bad())?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let value = BigRational::new(digits, scale);
    Ok(if negative { -value } else { value })
}

enum Component {
    Exact(Frac),
    Float(Phase),
}

fn parse_component(s: &str) -> Result<Component> {
    match s.trim() {
        "golden" => Ok(Component::Float(Phase::golden())),
        "sqrt2" => Ok(Component::Float(Phase::sqrt2())),
        other => parse_rational(other).map(|r| Component::Exact(Frac::new(r))),
    }
}

/// Builds the generator of `T^m`; a single string is repeated over all coordinates.
pub fn parse_generator(spec: &Gamma0Spec, m: usize) -> Result<Generator> {
    let items: Vec<&str> = match spec {
        Gamma0Spec::One(s) => vec![s.as_str(); m],
        Gamma0Spec::PerCoordinate(v) => v.iter().map(String::as_str).collect(),
    };
    if items.iter().any(|s| s.trim() == "symbolic") {
        return if items.iter().all(|s| s.trim() == "symbolic") {
            Ok(Generator::Symbolic)
        } else {
            Err(Error::Parse("gamma0 cannot mix symbolic and numeric components".into()))
        };
    }
    let parts = items.iter().map(|s| parse_component(s)).collect::<Result<Vec<_>>>()?;
    if parts.iter().all(|p| matches!(p, Component::Exact(_))) {
        Ok(Generator::Rational(
            parts.into_iter().map(|p| match p {
                Component::Exact(f) => f,
                Component::Float(_) => unreachable!(),
            }).collect(),
        ))
    } else {
        Ok(Generator::Float(
            parts.into_iter().map(|p| match p {
                Component::Exact(f) => f.to_phase(),
                Component::Float(x) => x,
            }).collect(),
        ))
    }
}

fn generator_strings(g: &Generator, m: usize) -> Gamma0Spec {
    let strings: Vec<String> = match g {
        Generator::Symbolic => return Gamma0Spec::One("symbolic".into()),
        Generator::Rational(v) => v.iter().map(Frac::to_string).collect(),
        Generator::Float(v) => v
            .iter()
            .map(|p| {
                if *p == Phase::golden() {
                    "golden".to_string()
                } else if *p == Phase::sqrt2() {
                    "sqrt2".to_string()
                } else {
                    format!("{}/{}", p.bits(), BigInt::one() << 128)
                }
            })
            .collect(),
    };
    if m == 1 || strings.windows(2).all(|w| w[0] == w[1]) {
        Gamma0Spec::One(strings[0].clone())
    } else {
        Gamma0Spec::PerCoordinate(strings)
    }
}

impl SystemDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Validates and builds the system. A preset tag must agree with any
    /// explicit `j` and `profile`.
    pub fn build(&self) -> Result<SkewSystem> {
        let tag = match self.kind.as_str() {
            "hahn" => Kind::Hahn,
            "milnes" => Kind::Milnes,
            "general" => Kind::General,
            other => return Err(Error::Parse(format!("unknown kind {other:?}"))),
        };
        let rationals = |v: &[RationalPair]| v.iter().map(pair_to_rational).collect::<Result<Vec<_>>>();
        let jseq = match (&self.j, tag) {
            (Some(j), _) => JSequence::new(rationals(j)?)?,
            (None, Kind::Hahn) => JSequence::ones(self.k),
            (None, Kind::Milnes) => JSequence::successors(self.k),
            (None, Kind::General) => return Err(Error::Parse("general systems need \"j\"".into())),
        };
        let profile = match (&self.profile, tag) {
            (Some(p), _) => rationals(p)?,
            (None, Kind::Hahn) => hahn_profile(self.k),
            (None, Kind::Milnes) => milnes_profile(self.k),
            (None, Kind::General) => {
                return Err(Error::Parse("general systems need \"profile\"".into()))
            }
        };
        let generator = parse_generator(&self.gamma0, self.m)?;
        let system = SkewSystem::new(jseq, &profile, self.k, self.m, generator)?;
        if tag == Kind::General {
            Ok(system)
        } else {
            system.tagged(tag)
        }
    }
}

impl SkewSystem {
    /// A descriptor that rebuilds this system. Presets omit `j` and `profile`.
    pub fn descriptor(&self) -> SystemDescriptor {
        let general = self.kind() == Kind::General;
        SystemDescriptor {
            kind: self.kind().as_str().to_string(),
            k: self.k(),
            m: self.m(),
            gamma0: generator_strings(self.generator(), self.m()),
            j: general.then(|| self.jsequence().values().iter().map(rational_to_pair).collect()),
            profile: general.then(|| self.qfamily().profile().iter().map(rational_to_pair).collect()),
        }
    }
}
