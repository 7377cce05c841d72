//! Dense univariate polynomials in `n` over a rational vector space.
//!
//! Coefficients are stored lowest degree first with trailing zeros trimmed,
//! so structural equality is polynomial equality.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A coefficient domain: a vector space over the rationals.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, factor: &BigRational) -> Self;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }
}

impl Coefficient for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn scale(&self, factor: &BigRational) -> Self {
        self * factor
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

pub type RatPoly = Poly<BigRational>;

impl<C: Coefficient> Poly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(Coefficient::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        Poly::new(vec![c])
    }

    /// `c * n^degree`.
    pub fn monomial(c: C, degree: usize) -> Self {
        let mut coeffs = vec![C::zero(); degree];
        coeffs.push(c);
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `n^d`, zero beyond the degree.
    pub fn coeff(&self, d: usize) -> C {
        self.coeffs.get(d).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..len).map(|d| self.coeff(d).add(&other.coeff(d))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..len).map(|d| self.coeff(d).sub(&other.coeff(d))).collect())
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.scale(factor)).collect())
    }

    /// Product with a rational polynomial.
    pub fn mul_rat(&self, other: &RatPoly) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                if !Zero::is_zero(b) {
                    out[i + j] = out[i + j].add(&a.scale(b));
                }
            }
        }
        Poly::new(out)
    }

    /// The polynomial `p(n + shift)`.
    pub fn shift(&self, shift: &BigRational) -> Self {
        // Horner in the shifted variable: p(n+h) = (..(c_d (n+h) + c_{d-1})(n+h) ..).
        let linear = RatPoly::new(vec![shift.clone(), BigRational::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| acc.mul_rat(&linear).add(&Poly::constant(c.clone())))
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, n: &BigRational) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc.scale(n).add(c))
    }

    pub fn eval_int(&self, n: &BigInt) -> C {
        self.eval(&BigRational::from_integer(n.clone()))
    }
}

impl RatPoly {
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        self.mul_rat(other)
    }

    /// `binomial(n, d) = n (n-1) ... (n-d+1) / d!`.
    pub fn binomial(d: usize) -> RatPoly {
        let mut p = RatPoly::constant(BigRational::one());
        for i in 0..d {
            let factor = RatPoly::new(vec![
                BigRational::from_integer(-BigInt::from(i)),
                BigRational::one(),
            ]);
            p = p.mul(&factor).scale(&BigRational::new(1.into(), (i + 1).into()));
        }
        p
    }

    /// Coordinates `b_d` with `p(n) = sum_d b_d binomial(n, d)`, i.e. the
    /// forward differences of `p` at zero.
    pub fn binomial_basis(&self) -> Vec<BigRational> {
        let len = self.coeffs.len();
        let mut values: Vec<BigRational> =
            (0..len).map(|t| self.eval_int(&BigInt::from(t))).collect();
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push(values[0].clone());
            values = values.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        out
    }

    /// Inverse of [`RatPoly::binomial_basis`].
    pub fn from_binomial_basis(coords: &[BigRational]) -> RatPoly {
        coords
            .iter()
            .enumerate()
            .fold(RatPoly::zero(), |acc, (d, b)| acc.add(&RatPoly::binomial(d).scale(b)))
    }

    /// True iff `p(n)` is an integer for every integer `n`; decided by
    /// integrality of the binomial-basis coordinates.
    pub fn is_integer_valued(&self) -> bool {
        self.binomial_basis().iter().all(|b| b.is_integer())
    }
}

impl<C: Coefficient + fmt::Display> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})n")?,
                _ => write!(f, "({c})n^{d}")?,
            }
        }
        Ok(())
    }
}
