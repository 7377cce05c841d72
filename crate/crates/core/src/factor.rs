//! The map `Gamma` from the Milnes system onto the orbit closure of
//! `f(n) = e(n^k lambda)` under the shift, in additive form:
//!
//! ```text
//! Gamma(x)(n) = n^k lambda + n^{k-1} x_1 + ... + n x_{k-1} + x_k   (mod 1)
//! ```
//!
//! The intertwining identity `Gamma(x)(n + 1) = Gamma(Tx)(n)` is checked as a
//! polynomial identity in `n` whose coefficients are linear forms in
//! `lambda, x_1, ..., x_k`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::dynamics::{AffineCoeffs, Generator, SkewSystem, SymCoord};
use crate::error::{Error, Result};
use crate::poly::{Poly, RatPoly};
use crate::torus::{check_len, Frac, Phase, TorusCoord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Lambda,
    /// The one-based coordinate `x_j`.
    X(usize),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Lambda => write!(f, "lambda"),
            Symbol::X(j) => write!(f, "x{j}"),
        }
    }
}

/// `constant + sum_s c_s s` over the symbols `lambda, x_1, ..., x_k`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinearForm {
    pub constant: BigRational,
    pub terms: BTreeMap<Symbol, BigRational>,
}

impl LinearForm {
    pub fn symbol(s: Symbol) -> Self {
        LinearForm { constant: BigRational::zero(), terms: BTreeMap::from([(s, BigRational::one())]) }
    }

    pub fn constant(c: BigRational) -> Self {
        LinearForm { constant: c, terms: BTreeMap::new() }
    }

    pub fn coefficient(&self, s: Symbol) -> BigRational {
        self.terms.get(&s).cloned().unwrap_or_else(BigRational::zero)
    }

    fn int_scale(&self, n: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(n.clone()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (s, c) in &other.terms {
            let entry = terms.entry(*s).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(s);
            }
        }
        LinearForm { constant: &self.constant + &other.constant, terms }
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return LinearForm::default();
        }
        LinearForm {
            constant: &self.constant * factor,
            terms: self.terms.iter().map(|(s, c)| (*s, c * factor)).collect(),
        }
    }
}

impl crate::poly::Coefficient for LinearForm {
    fn zero() -> Self {
        LinearForm::default()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.constant) && self.terms.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        LinearForm::add(self, other)
    }

    fn scale(&self, factor: &BigRational) -> Self {
        LinearForm::scale(self, factor)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| if c.is_one() { s.to_string() } else { format!("{c}*{s}") })
            .collect();
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push(self.constant.to_string());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// A polynomial in `n` with linear-form coefficients.
pub type SymbolicPhase = Poly<LinearForm>;

/// `Gamma(x)(n)` for `x` of length `k`, in any coordinate arithmetic.
pub fn gamma_eval<C: TorusCoord>(x: &[C], k: usize, lambda: &C, n: &BigInt) -> Result<C> {
    if k == 0 {
        return Err(Error::InvalidDepth);
    }
    check_len(k, x.len())?;
    // Horner: ((lambda n + x_1) n + x_2) n + ... + x_k.
    Ok(x.iter().fold(lambda.clone(), |acc, xj| acc.times(n).plus(xj)))
}

/// `Gamma(x)(n)` with `lambda` kept symbolic; `x` may itself carry `lambda` multiples.
pub fn gamma_eval_symbolic(x: &[SymCoord], k: usize, n: &BigInt) -> Result<SymCoord> {
    gamma_eval(x, k, &SymCoord::generator(), n)
}

/// `Gamma(x)(n)` as a symbolic polynomial in `n`, with `x` and `lambda` free.
pub fn gamma_phase(k: usize) -> SymbolicPhase {
    let mut coeffs = vec![LinearForm::default(); k + 1];
    coeffs[k] = LinearForm::symbol(Symbol::Lambda);
    for j in 1..=k {
        coeffs[k - j] = LinearForm::symbol(Symbol::X(j));
    }
    Poly::new(coeffs)
}

/// One coefficient of the two expansions compared by the homomorphism check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientRow {
    pub degree: usize,
    pub shifted: LinearForm,
    pub image: LinearForm,
}

impl CoefficientRow {
    pub fn matches(&self) -> bool {
        self.shifted == self.image
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomomorphismReport {
    pub k: usize,
    /// `Gamma(x)(n + 1)`.
    pub shifted: SymbolicPhase,
    /// `Gamma(Tx)(n)`.
    pub image: SymbolicPhase,
    pub rows: Vec<CoefficientRow>,
}

impl HomomorphismReport {
    pub fn holds(&self) -> bool {
        self.shifted == self.image
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &CoefficientRow> {
        self.rows.iter().filter(|r| !r.matches())
    }
}

/// Compares `Gamma(x)(n + 1)` with `Gamma(Tx)(n)` for the Milnes map of depth `k`.
pub fn homomorphism_check(k: usize) -> Result<HomomorphismReport> {
    let system = SkewSystem::milnes(k, 1, Generator::Symbolic)?;
    Ok(homomorphism_check_with_map(system.one_step()))
}

/// As [`homomorphism_check`], for an arbitrary affine map on `T^k` with `m = 1`.
pub fn homomorphism_check_with_map(map: &AffineCoeffs) -> HomomorphismReport {
    let k = map.k();
    let shifted = gamma_phase(k).shift(&BigRational::one());
    let lambda = LinearForm::symbol(Symbol::Lambda);
    let tx: Vec<LinearForm> = (0..k)
        .map(|i| {
            map.linear[i].iter().enumerate().fold(lambda.int_scale(&map.translation[i]), |acc, (j, a)| {
                acc.add(&LinearForm::symbol(Symbol::X(j + 1)).int_scale(a))
            })
        })
        .collect();
    let mut coeffs = vec![LinearForm::default(); k + 1];
    coeffs[k] = lambda;
    for (j, y) in tx.into_iter().enumerate() {
        coeffs[k - 1 - j] = y;
    }
    let image = Poly::new(coeffs);
    let rows = (0..=k)
        .map(|d| CoefficientRow { degree: d, shifted: shifted.coeff(d), image: image.coeff(d) })
        .collect();
    HomomorphismReport { k, shifted, image, rows }
}

/// True iff `Gamma(x) = Gamma(y)` as functions on the integers, for rational
/// `x, y` and symbolic `lambda`.
///
/// The difference `sum_j (x_j - y_j) n^{k-j}` must be integer-valued, which
/// is decided exactly from its coordinates in the binomial basis.
pub fn kernel_witness_check(x: &[Frac], y: &[Frac]) -> Result<bool> {
    check_len(x.len(), y.len())?;
    let k = x.len();
    let mut coeffs = vec![BigRational::zero(); k];
    for j in 0..k {
        coeffs[k - 1 - j] = x[j].value() - y[j].value();
    }
    Ok(RatPoly::new(coeffs).is_integer_valued())
}

/// Consecutive values `Gamma(x)(n)` for `n` in `[n0, n0 + W)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionWindow<C> {
    pub n0: BigInt,
    pub values: Vec<C>,
}

impl FunctionWindow<Phase> {
    /// The window as unit complex numbers `e(Gamma(x)(n))`.
    pub fn to_complex(&self) -> Vec<Complex64> {
        self.values.iter().map(|p| p.cis()).collect()
    }
}

pub fn gamma_window<C: TorusCoord>(
    x: &[C],
    k: usize,
    lambda: &C,
    n0: &BigInt,
    width: usize,
) -> Result<FunctionWindow<C>> {
    if width == 0 {
        return Err(Error::EmptyRange);
    }
    let values = (0..width)
        .map(|t| gamma_eval(x, k, lambda, &(n0 + t)))
        .collect::<Result<_>>()?;
    Ok(FunctionWindow { n0: n0.clone(), values })
}

/// `A_a = (1/N) sum_{n<N} e(mult (n + a)^k lambda)` for each shift `a`.
///
/// Powers are reduced modulo `2^128`, so every phase is exact on the
/// fixed-point grid.
pub fn salehi_average(
    mult: &BigInt,
    k: u32,
    lambda: Phase,
    shifts: &[i64],
    n: u64,
) -> Result<Vec<(i64, Complex64)>> {
    if mult.is_zero() {
        return Err(Error::ZeroMultiplier);
    }
    if k == 0 {
        return Err(Error::InvalidDepth);
    }
    if n == 0 {
        return Err(Error::EmptyRange);
    }
    let scaled = lambda.times(mult);
    Ok(shifts
        .par_iter()
        .map(|&a| {
            let mut sum = crate::ergodic::ComplexSum::default();
            for t in 0..n {
                let base = (t as i128).wrapping_add(a as i128) as u128;
                sum.add(scaled.mul_ring(base.wrapping_pow(k)).cis());
            }
            (a, sum.value() / n as f64)
        })
        .collect())
}
