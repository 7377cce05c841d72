//! Arithmetic on finite-dimensional tori `T^d = R^d / Z^d`.
//!
//! Coordinates come in two flavours. [`Frac`] is an exact rational reduced
//! into `[0, 1)`. [`Phase`] is a 128-bit fixed-point fraction: addition and
//! multiplication by integers are exact modulo 1 on the grid `2^-128 Z`, so
//! long orbits accumulate no rounding error and closed-form powers agree
//! bit-for-bit with step-by-step iteration. Conversion to `f64` happens only
//! when a value is read out (distances, character values).

use std::f64::consts::TAU;
use std::fmt;
use std::ops;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const TWO_POW_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;

/// Coordinate arithmetic shared by exact, fixed-point and symbolic points.
pub trait TorusCoord: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, n: &BigInt) -> Self;
}

/// Reduces an integer into the ring `Z / 2^128 Z`.
pub fn int_to_ring(n: &BigInt) -> u128 {
    if let Some(small) = n.to_i128() {
        return small as u128;
    }
    let modulus = BigInt::one() << 128;
    n.mod_floor(&modulus)
        .to_u128()
        .expect("residue below 2^128")
}

/// An exact rational point of the circle, always in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frac(BigRational);

impl Frac {
    pub fn new(value: BigRational) -> Self {
        let floor = value.floor();
        Frac(value - floor)
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Frac::new(BigRational::new(numer.into(), denom.into()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }

    /// Nearest-below point of the fixed-point grid.
    pub fn to_phase(&self) -> Phase {
        Phase::from_rational(&self.0)
    }

    /// Circle distance `min(d, 1 - d)` as an exact rational in `[0, 1/2]`.
    pub fn circle_distance(&self, other: &Frac) -> BigRational {
        let d = self.minus(other).0;
        let complement = BigRational::one() - &d;
        if d <= complement {
            d
        } else {
            complement
        }
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl TorusCoord for Frac {
    fn zero() -> Self {
        Frac(BigRational::zero())
    }

    fn plus(&self, other: &Self) -> Self {
        let sum = &self.0 + &other.0;
        if sum >= BigRational::one() {
            Frac(sum - BigRational::one())
        } else {
            Frac(sum)
        }
    }

    fn minus(&self, other: &Self) -> Self {
        let diff = &self.0 - &other.0;
        if diff.is_negative() {
            Frac(diff + BigRational::one())
        } else {
            Frac(diff)
        }
    }

    fn times(&self, n: &BigInt) -> Self {
        // n * (p/q) mod 1 only depends on n * p mod q.
        let numer = self.0.numer();
        let denom = self.0.denom();
        let reduced = (n * numer).mod_floor(denom);
        Frac(BigRational::new(reduced, denom.clone()))
    }
}

/// A point of the circle on the fixed-point grid `2^-128 Z / Z`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(u128);

impl Phase {
    pub const ZERO: Phase = Phase(0);

    pub const fn from_bits(bits: u128) -> Self {
        Phase(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    pub fn from_f64(x: f64) -> Self {
        let frac = x - x.floor();
        if !(0.0..1.0).contains(&frac) {
            return Phase::ZERO;
        }
        Phase((frac * TWO_POW_128) as u128)
    }

    /// `floor(frac(r) * 2^128)`.
    pub fn from_rational(r: &BigRational) -> Self {
        let numer = r.numer().mod_floor(r.denom());
        let scaled: BigInt = (numer << 128) / r.denom();
        Phase(scaled.to_u128().expect("fraction below one"))
    }

    /// The fractional part of `(sqrt(5) - 1) / 2`, the default generator.
    pub fn golden() -> Self {
        // floor(sqrt(5) * 2^128) - 2^128, halved.
        let s: BigUint = Roots::sqrt(&(BigUint::from(5u8) << 256));
        let shifted: BigUint = s - (BigUint::one() << 128);
        let half: BigUint = shifted >> 1;
        Phase(half.to_u128().expect("below 2^128"))
    }

    /// The fractional part of `sqrt(2)`.
    pub fn sqrt2() -> Self {
        let s: BigUint = Roots::sqrt(&(BigUint::from(2u8) << 256));
        let frac: BigUint = s - (BigUint::one() << 128);
        Phase(frac.to_u128().expect("below 2^128"))
    }

    /// Value in `[0, 1)`; low bits beyond double precision are truncated.
    pub fn to_f64(self) -> f64 {
        (self.0 >> 75) as f64 / (1u64 << 53) as f64
    }

    /// Signed representative in `[-1/2, 1/2)`, used for evaluating angles.
    pub fn to_signed_f64(self) -> f64 {
        (self.0 as i128) as f64 / TWO_POW_128
    }

    /// Multiplication by an integer already reduced into `Z / 2^128 Z`.
    pub fn mul_ring(self, n: u128) -> Self {
        Phase(self.0.wrapping_mul(n))
    }

    pub fn circle_distance(self, other: Phase) -> f64 {
        let d = self.0.wrapping_sub(other.0);
        let d = d.min(d.wrapping_neg());
        d as f64 / TWO_POW_128
    }

    /// `exp(2 pi i t)`.
    pub fn cis(self) -> Complex64 {
        let (s, c) = (TAU * self.to_signed_f64()).sin_cos();
        Complex64::new(c, s)
    }
}

impl ops::Add for Phase {
    type Output = Phase;

    fn add(self, other: Phase) -> Phase {
        Phase(self.0.wrapping_add(other.0))
    }
}

impl ops::Sub for Phase {
    type Output = Phase;

    fn sub(self, other: Phase) -> Phase {
        Phase(self.0.wrapping_sub(other.0))
    }
}

impl ops::Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        Phase(self.0.wrapping_neg())
    }
}

impl TorusCoord for Phase {
    fn zero() -> Self {
        Phase::ZERO
    }

    fn plus(&self, other: &Self) -> Self {
        *self + *other
    }

    fn minus(&self, other: &Self) -> Self {
        *self - *other
    }

    fn times(&self, n: &BigInt) -> Self {
        self.mul_ring(int_to_ring(n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

/// A single torus coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Exact(Frac),
    Float(Phase),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(f) => f.to_f64(),
            Scalar::Float(p) => p.to_f64(),
        }
    }

    pub fn to_phase(&self) -> Phase {
        match self {
            Scalar::Exact(f) => f.to_phase(),
            Scalar::Float(p) => *p,
        }
    }
}

/// A point of `T^d`, stored with homogeneous mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TorusPoint {
    Exact(Vec<Frac>),
    Float(Vec<Phase>),
}

impl TorusPoint {
    pub fn exact(coords: impl IntoIterator<Item = BigRational>) -> Self {
        TorusPoint::Exact(coords.into_iter().map(Frac::new).collect())
    }

    /// Exact point from `(numerator, denominator)` pairs.
    pub fn from_ratios(coords: &[(i64, i64)]) -> Self {
        TorusPoint::Exact(coords.iter().map(|&(p, q)| Frac::from_ratio(p, q)).collect())
    }

    pub fn from_f64s(coords: &[f64]) -> Self {
        TorusPoint::Float(coords.iter().map(|&x| Phase::from_f64(x)).collect())
    }

    pub fn zero(len: usize, mode: Mode) -> Self {
        match mode {
            Mode::Exact => TorusPoint::Exact(vec![Frac::zero(); len]),
            Mode::Float => TorusPoint::Float(vec![Phase::ZERO; len]),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            TorusPoint::Exact(v) => v.len(),
            TorusPoint::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mode(&self) -> Mode {
        match self {
            TorusPoint::Exact(_) => Mode::Exact,
            TorusPoint::Float(_) => Mode::Float,
        }
    }

    pub fn coord(&self, index: usize) -> Option<Scalar> {
        match self {
            TorusPoint::Exact(v) => v.get(index).cloned().map(Scalar::Exact),
            TorusPoint::Float(v) => v.get(index).copied().map(Scalar::Float),
        }
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        match self {
            TorusPoint::Exact(v) => v.iter().map(Frac::to_f64).collect(),
            TorusPoint::Float(v) => v.iter().map(|p| p.to_f64()).collect(),
        }
    }

    /// Converts to fixed-point coordinates (identity on float points).
    pub fn to_float(&self) -> TorusPoint {
        match self {
            TorusPoint::Exact(v) => TorusPoint::Float(v.iter().map(Frac::to_phase).collect()),
            TorusPoint::Float(v) => TorusPoint::Float(v.clone()),
        }
    }

    pub fn checked_add(&self, other: &TorusPoint) -> Result<TorusPoint> {
        self.zip_with(other, TorusCoord::plus, TorusCoord::plus)
    }

    pub fn checked_sub(&self, other: &TorusPoint) -> Result<TorusPoint> {
        self.zip_with(other, TorusCoord::minus, TorusCoord::minus)
    }

    pub fn neg(&self) -> TorusPoint {
        self.scale(&BigInt::from(-1))
    }

    /// The endomorphism `x -> n x`, applied coordinatewise.
    pub fn scale(&self, n: &BigInt) -> TorusPoint {
        match self {
            TorusPoint::Exact(v) => TorusPoint::Exact(v.iter().map(|c| c.times(n)).collect()),
            TorusPoint::Float(v) => {
                let ring = int_to_ring(n);
                TorusPoint::Float(v.iter().map(|c| c.mul_ring(ring)).collect())
            }
        }
    }

    /// Maximum over coordinates of the circle distance.
    pub fn distance(&self, other: &TorusPoint) -> Result<f64> {
        check_len(self.len(), other.len())?;
        let d = match (self, other) {
            (TorusPoint::Exact(a), TorusPoint::Exact(b)) => a
                .iter()
                .zip(b)
                .map(|(x, y)| x.circle_distance(y).to_f64().unwrap_or(0.0))
                .fold(0.0, f64::max),
            (TorusPoint::Float(a), TorusPoint::Float(b)) => a
                .iter()
                .zip(b)
                .map(|(x, y)| x.circle_distance(*y))
                .fold(0.0, f64::max),
            _ => {
                let a = self.to_float();
                let b = other.to_float();
                return a.distance(&b);
            }
        };
        Ok(d)
    }

    /// Exact distance; `None` unless both points are exact.
    pub fn exact_distance(&self, other: &TorusPoint) -> Result<Option<BigRational>> {
        check_len(self.len(), other.len())?;
        match (self, other) {
            (TorusPoint::Exact(a), TorusPoint::Exact(b)) => Ok(Some(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| x.circle_distance(y))
                    .max()
                    .unwrap_or_else(BigRational::zero),
            )),
            _ => Ok(None),
        }
    }

    fn zip_with(
        &self,
        other: &TorusPoint,
        exact: fn(&Frac, &Frac) -> Frac,
        float: fn(&Phase, &Phase) -> Phase,
    ) -> Result<TorusPoint> {
        check_len(self.len(), other.len())?;
        match (self, other) {
            (TorusPoint::Exact(a), TorusPoint::Exact(b)) => Ok(TorusPoint::Exact(
                a.iter().zip(b).map(|(x, y)| exact(x, y)).collect(),
            )),
            (TorusPoint::Float(a), TorusPoint::Float(b)) => Ok(TorusPoint::Float(
                a.iter().zip(b).map(|(x, y)| float(x, y)).collect(),
            )),
            _ => Err(Error::ModeMismatch),
        }
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// A character of `T^d`, given by its integer exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharacterVector {
    pub exponents: Vec<BigInt>,
}

impl CharacterVector {
    pub fn new(exponents: Vec<BigInt>) -> Self {
        CharacterVector { exponents }
    }

    pub fn from_i64s(exponents: &[i64]) -> Self {
        CharacterVector::new(exponents.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn trivial(len: usize) -> Self {
        CharacterVector::new(vec![BigInt::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(Zero::is_zero)
    }

    /// `sum_j eta_j x_j mod 1`, exact in either mode.
    pub fn phase(&self, x: &TorusPoint) -> Result<Scalar> {
        check_len(self.len(), x.len())?;
        Ok(match x {
            TorusPoint::Exact(v) => Scalar::Exact(
                self.exponents
                    .iter()
                    .zip(v)
                    .fold(Frac::zero(), |acc, (e, c)| acc.plus(&c.times(e))),
            ),
            TorusPoint::Float(v) => Scalar::Float(
                self.exponents
                    .iter()
                    .zip(v)
                    .fold(Phase::ZERO, |acc, (e, c)| acc + c.mul_ring(int_to_ring(e))),
            ),
        })
    }

    /// `exp(2 pi i sum_j eta_j x_j)`.
    pub fn eval(&self, x: &TorusPoint) -> Result<Complex64> {
        Ok(match self.phase(x)? {
            Scalar::Exact(f) => {
                let (s, c) = (TAU * f.to_f64()).sin_cos();
                Complex64::new(c, s)
            }
            Scalar::Float(p) => p.cis(),
        })
    }

    /// Integral of the character against Haar measure.
    pub fn haar_integral(&self) -> Complex64 {
        if self.is_trivial() {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Exponents reduced into `Z / 2^128 Z`, for hot loops over fixed-point orbits.
    pub(crate) fn ring_exponents(&self) -> Vec<(usize, u128)> {
        self.exponents
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(i, e)| (i, int_to_ring(e)))
            .collect()
    }
}

impl fmt::Display for CharacterVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// The integer `value`, if it is one.
pub(crate) fn rational_to_int(value: &BigRational) -> Option<BigInt> {
    if value.is_integer() {
        Some(value.to_integer())
    } else {
        None
    }
}
