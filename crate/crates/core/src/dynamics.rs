//! Skew-product systems `T : G^k -> G^k` with `G = T^m`, their closed-form
//! powers and the dual action on characters.
//!
//! For `x = (x_1, ..., x_k)` the image has coordinates
//!
//! ```text
//! y_i = J(k,i) Q_i(1) gamma_0 + sum_{j=1}^{i} J(k-j, i-j) Q_{i-j}(1) x_j
//! ```
//!
//! and `T^n` is obtained by replacing every `Q(1)` with `Q(n)`, for any
//! integer `n`. Each block `x_j` is an element of `T^m`; point coordinates
//! are laid out block by block, so index `(j - 1) * m + b` holds the `b`-th
//! base coordinate of `x_j`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::RatPoly;
use crate::qfamily::{integrality_check, JSequence, JTable, QFamily};
use crate::torus::{
    check_len, int_to_ring, rational_to_int, CharacterVector, Frac, Phase, TorusCoord,
    TorusPoint,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Hahn,
    Milnes,
    General,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Hahn => "hahn",
            Kind::Milnes => "milnes",
            Kind::General => "general",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The generator `gamma_0` of the base torus `T^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// A rational point; usable with exact and fixed-point coordinates.
    Rational(Vec<Frac>),
    /// A fixed-point approximation of an irrational point.
    Float(Vec<Phase>),
    /// Tracked only through its integer coefficient.
    Symbolic,
}

impl Generator {
    pub fn golden() -> Self {
        Generator::Float(vec![Phase::golden()])
    }

    fn dimension(&self) -> Option<usize> {
        match self {
            Generator::Rational(v) => Some(v.len()),
            Generator::Float(v) => Some(v.len()),
            Generator::Symbolic => None,
        }
    }

    pub fn phases(&self) -> Result<Vec<Phase>> {
        match self {
            Generator::Rational(v) => Ok(v.iter().map(Frac::to_phase).collect()),
            Generator::Float(v) => Ok(v.clone()),
            Generator::Symbolic => Err(Error::SymbolicGenerator),
        }
    }

    pub fn fracs(&self) -> Result<Vec<Frac>> {
        match self {
            Generator::Rational(v) => Ok(v.clone()),
            Generator::Float(_) => Err(Error::ModeMismatch),
            Generator::Symbolic => Err(Error::SymbolicGenerator),
        }
    }
}

/// Exact coefficients of `T^n`: `y_i = c_i gamma_0 + sum_{j<=i} a_{i,j} x_j`.
///
/// Indices are zero-based: `translation[i]` belongs to output block `i + 1`
/// and `linear[i][j]` to the pair of blocks `(i + 1, j + 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineCoeffs {
    pub n: BigInt,
    pub translation: Vec<BigInt>,
    pub linear: Vec<Vec<BigInt>>,
}

impl AffineCoeffs {
    pub fn k(&self) -> usize {
        self.translation.len()
    }

    pub fn identity(k: usize) -> Self {
        AffineCoeffs {
            n: BigInt::zero(),
            translation: vec![BigInt::zero(); k],
            linear: (0..k)
                .map(|i| (0..=i).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
                .collect(),
        }
    }

    /// Applies the affine map blockwise over `m` base coordinates.
    pub fn apply_to<C: TorusCoord>(&self, m: usize, gamma: &[C], x: &[C]) -> Vec<C> {
        let k = self.k();
        let mut out = Vec::with_capacity(k * m);
        for i in 0..k {
            for b in 0..m {
                let mut acc = gamma[b].times(&self.translation[i]);
                for (j, a) in self.linear[i].iter().enumerate() {
                    if !a.is_zero() {
                        acc = acc.plus(&x[j * m + b].times(a));
                    }
                }
                out.push(acc);
            }
        }
        out
    }
}

/// A coordinate `r + c * gamma_0` with `r` exact and `c` an integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymCoord {
    pub rational: Frac,
    pub gamma: BigInt,
}

impl SymCoord {
    pub fn rational(rational: Frac) -> Self {
        SymCoord { rational, gamma: BigInt::zero() }
    }

    pub fn generator() -> Self {
        SymCoord { rational: Frac::zero(), gamma: BigInt::one() }
    }
}

impl TorusCoord for SymCoord {
    fn zero() -> Self {
        SymCoord::rational(Frac::zero())
    }

    fn plus(&self, other: &Self) -> Self {
        SymCoord {
            rational: self.rational.plus(&other.rational),
            gamma: &self.gamma + &other.gamma,
        }
    }

    fn minus(&self, other: &Self) -> Self {
        SymCoord {
            rational: self.rational.minus(&other.rational),
            gamma: &self.gamma - &other.gamma,
        }
    }

    fn times(&self, n: &BigInt) -> Self {
        SymCoord { rational: self.rational.times(n), gamma: &self.gamma * n }
    }
}

/// A point whose coordinates are affine in a symbolic generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicPoint(pub Vec<SymCoord>);

impl SymbolicPoint {
    pub fn from_rationals(coords: &[Frac]) -> Self {
        SymbolicPoint(coords.iter().cloned().map(SymCoord::rational).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Substitutes a rational generator; coordinate `idx` uses component `idx % m`.
    pub fn resolve(&self, gamma: &[Frac]) -> TorusPoint {
        let m = gamma.len();
        TorusPoint::Exact(
            self.0
                .iter()
                .enumerate()
                .map(|(idx, c)| c.rational.plus(&gamma[idx % m].times(&c.gamma)))
                .collect(),
        )
    }

    pub fn resolve_float(&self, gamma: &[Phase]) -> TorusPoint {
        let m = gamma.len();
        TorusPoint::Float(
            self.0
                .iter()
                .enumerate()
                .map(|(idx, c)| c.rational.to_phase() + gamma[idx % m].times(&c.gamma))
                .collect(),
        )
    }
}

/// A validated skew-product system.
#[derive(Clone, Debug)]
pub struct SkewSystem {
    k: usize,
    m: usize,
    kind: Kind,
    generator: Generator,
    jseq: JSequence,
    jtable: JTable,
    qfamily: QFamily,
    one_step: AffineCoeffs,
}

fn preset_data(jtable: &JTable, qfamily: &QFamily, kind: Kind) -> Result<bool> {
    let k = qfamily.k();
    Ok(match kind {
        Kind::Hahn => jtable.is_all_ones() && *qfamily == QFamily::hahn(k)?,
        Kind::Milnes => jtable.is_binomial() && *qfamily == QFamily::milnes(k)?,
        Kind::General => true,
    })
}

impl SkewSystem {
    /// Builds and validates a system from `J`, the profile `Q_1(1)..Q_k(1)`
    /// and the generator. The kind tag is inferred from the data.
    pub fn new(
        jseq: JSequence,
        profile: &[BigRational],
        k: usize,
        m: usize,
        generator: Generator,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidDepth);
        }
        if m == 0 {
            return Err(Error::InvalidBaseDimension);
        }
        if let Some(found) = generator.dimension() {
            check_len(m, found)?;
        }
        let qfamily = QFamily::solve(&jseq, profile, k)?;
        let jtable = JTable::build(&jseq, k)?;
        let report = integrality_check(&jtable, &qfamily, k);
        if let Some(w) = report.witness {
            return Err(Error::Integrality { i: w.i, j: w.j, value: w.value.to_string() });
        }
        let kind = if preset_data(&jtable, &qfamily, Kind::Hahn)? {
            Kind::Hahn
        } else if preset_data(&jtable, &qfamily, Kind::Milnes)? {
            Kind::Milnes
        } else {
            Kind::General
        };
        let mut system = SkewSystem {
            k,
            m,
            kind,
            generator,
            jseq,
            jtable,
            qfamily,
            one_step: AffineCoeffs::identity(k),
        };
        system.one_step = system.power_coeffs(&BigInt::one());
        Ok(system)
    }

    /// `T(x_1, ..., x_k) = (gamma_0 + x_1, x_1 + x_2, ..., x_{k-1} + x_k)`.
    pub fn hahn(k: usize, m: usize, generator: Generator) -> Result<Self> {
        SkewSystem::new(JSequence::ones(k), &crate::qfamily::hahn_profile(k), k, m, generator)?
            .tagged(Kind::Hahn)
    }

    /// `y_i = binomial(k, i) gamma_0 + sum_j binomial(k-j, i-j) x_j`.
    pub fn milnes(k: usize, m: usize, generator: Generator) -> Result<Self> {
        SkewSystem::new(
            JSequence::successors(k),
            &crate::qfamily::milnes_profile(k),
            k,
            m,
            generator,
        )?
        .tagged(Kind::Milnes)
    }

    /// Relabels the system as `kind` when its data fit that preset; at
    /// `k = 1` the two presets coincide.
    pub(crate) fn tagged(mut self, kind: Kind) -> Result<Self> {
        if kind != Kind::General && !preset_data(&self.jtable, &self.qfamily, kind)? {
            return Err(Error::Parse(format!(
                "kind {:?} does not match the given J and profile ({})",
                kind.as_str(),
                self.kind
            )));
        }
        self.kind = kind;
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Dimension of the phase space, `m * k`.
    pub fn dim(&self) -> usize {
        self.m * self.k
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn with_generator(&self, generator: Generator) -> Result<Self> {
        if let Some(found) = generator.dimension() {
            check_len(self.m, found)?;
        }
        Ok(SkewSystem { generator, ..self.clone() })
    }

    pub fn jsequence(&self) -> &JSequence {
        &self.jseq
    }

    pub fn jtable(&self) -> &JTable {
        &self.jtable
    }

    pub fn qfamily(&self) -> &QFamily {
        &self.qfamily
    }

    pub fn one_step(&self) -> &AffineCoeffs {
        &self.one_step
    }

    /// Exact coefficients of `T^n` for any integer `n`.
    pub fn power_coeffs(&self, n: &BigInt) -> AffineCoeffs {
        let k = self.k;
        let q_at: Vec<BigRational> =
            self.qfamily.polys().iter().map(|p| p.eval_int(n)).collect();
        let integral = |v: BigRational| {
            rational_to_int(&v).expect("validated systems have integral power coefficients")
        };
        let translation = (1..=k)
            .map(|i| integral(self.jtable.get(k, i) * &q_at[i]))
            .collect();
        let linear = (1..=k)
            .map(|i| {
                (1..=i)
                    .map(|j| integral(self.jtable.get(k - j, i - j) * &q_at[i - j]))
                    .collect()
            })
            .collect();
        AffineCoeffs { n: n.clone(), translation, linear }
    }

    /// `J(k, i) Q_i(n)` as a polynomial in `n`, for `i = 1..=k`.
    pub fn translation_polys(&self) -> Vec<RatPoly> {
        (1..=self.k)
            .map(|i| self.qfamily.poly(i).scale(self.jtable.get(self.k, i)))
            .collect()
    }

    pub fn apply(&self, x: &TorusPoint) -> Result<TorusPoint> {
        self.apply_coeffs(&self.one_step, x)
    }

    pub fn power_apply(&self, n: &BigInt, x: &TorusPoint) -> Result<TorusPoint> {
        self.apply_coeffs(&self.power_coeffs(n), x)
    }

    /// `T^{-1}`, computed by forward substitution through the one-step map.
    pub fn apply_inverse(&self, x: &TorusPoint) -> Result<TorusPoint> {
        check_len(self.dim(), x.len())?;
        match x {
            TorusPoint::Exact(v) => {
                Ok(TorusPoint::Exact(self.invert_step(&self.generator.fracs()?, v)))
            }
            TorusPoint::Float(v) => {
                Ok(TorusPoint::Float(self.invert_step(&self.generator.phases()?, v)))
            }
        }
    }

    pub fn apply_symbolic(&self, x: &SymbolicPoint) -> Result<SymbolicPoint> {
        self.apply_coeffs_symbolic(&self.one_step, x)
    }

    pub fn power_apply_symbolic(&self, n: &BigInt, x: &SymbolicPoint) -> Result<SymbolicPoint> {
        self.apply_coeffs_symbolic(&self.power_coeffs(n), x)
    }

    pub fn apply_inverse_symbolic(&self, x: &SymbolicPoint) -> Result<SymbolicPoint> {
        check_len(self.dim(), x.len())?;
        let gamma = vec![SymCoord::generator(); self.m];
        Ok(SymbolicPoint(self.invert_step(&gamma, &x.0)))
    }

    fn apply_coeffs(&self, coeffs: &AffineCoeffs, x: &TorusPoint) -> Result<TorusPoint> {
        check_len(self.dim(), x.len())?;
        match x {
            TorusPoint::Exact(v) => {
                let gamma = self.generator.fracs()?;
                Ok(TorusPoint::Exact(coeffs.apply_to(self.m, &gamma, v)))
            }
            TorusPoint::Float(v) => {
                let gamma = self.generator.phases()?;
                Ok(TorusPoint::Float(coeffs.apply_to(self.m, &gamma, v)))
            }
        }
    }

    fn apply_coeffs_symbolic(
        &self,
        coeffs: &AffineCoeffs,
        x: &SymbolicPoint,
    ) -> Result<SymbolicPoint> {
        check_len(self.dim(), x.len())?;
        let gamma = vec![SymCoord::generator(); self.m];
        Ok(SymbolicPoint(coeffs.apply_to(self.m, &gamma, &x.0)))
    }

    fn invert_step<C: TorusCoord>(&self, gamma: &[C], y: &[C]) -> Vec<C> {
        let m = self.m;
        let coeffs = &self.one_step;
        let mut x: Vec<C> = Vec::with_capacity(y.len());
        for i in 0..self.k {
            for b in 0..m {
                // a_{i,i} = J(k-i, 0) Q_0 = 1.
                let mut acc = y[i * m + b].minus(&gamma[b].times(&coeffs.translation[i]));
                for j in 0..i {
                    acc = acc.minus(&x[j * m + b].times(&coeffs.linear[i][j]));
                }
                x.push(acc);
            }
        }
        x
    }

    /// Iterator over `x, T x, ..., T^{len-1} x`, by repeated application.
    pub fn orbit(&self, x: &TorusPoint, len: u64) -> Result<OrbitStream<'_>> {
        check_len(self.dim(), x.len())?;
        let inner = match x {
            TorusPoint::Exact(v) => {
                self.generator.fracs()?;
                OrbitInner::Exact(v.clone())
            }
            TorusPoint::Float(v) => OrbitInner::Float(FloatOrbit::new(self, v.clone())?),
        };
        Ok(OrbitStream { system: self, inner, remaining: len })
    }

    /// The dual action `eta -> eta o T^n`, split into the character
    /// `eta o U^n` and the phase `eta(c(n) gamma_0)` contributed by the
    /// translation part. Only provided for Milnes systems.
    pub fn dual_power(&self, eta: &CharacterVector, n: &BigInt) -> Result<DualPower> {
        if self.kind != Kind::Milnes {
            return Err(Error::UnsupportedKind {
                operation: "dual_power",
                required: "milnes",
                found: self.kind.as_str(),
            });
        }
        check_len(self.dim(), eta.len())?;
        let coeffs = self.power_coeffs(n);
        let (k, m) = (self.k, self.m);
        // zeta_j = sum_{i >= j} binomial(k-j, i-j) n^{i-j} eta_i
        let mut zeta = vec![BigInt::zero(); k * m];
        for i in 0..k {
            for j in 0..=i {
                let a = &coeffs.linear[i][j];
                for b in 0..m {
                    zeta[j * m + b] += a * &eta.exponents[i * m + b];
                }
            }
        }
        Ok(DualPower { character: CharacterVector::new(zeta), phase: self.phase_polynomial(eta) })
    }

    /// `sum_i eta_i J(k,i) Q_i(n)` per base coordinate: the multiple of
    /// `gamma_0` picked up by `eta` along the orbit of zero.
    pub fn phase_polynomial(&self, eta: &CharacterVector) -> PhasePolynomial {
        let polys = self.translation_polys();
        let per_base = (0..self.m)
            .map(|b| {
                polys.iter().enumerate().fold(RatPoly::zero(), |acc, (i, p)| {
                    let e = &eta.exponents[i * self.m + b];
                    acc.add(&p.scale(&BigRational::from_integer(e.clone())))
                })
            })
            .collect();
        PhasePolynomial { per_base }
    }
}

/// Result of [`SkewSystem::dual_power`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPower {
    pub character: CharacterVector,
    pub phase: PhasePolynomial,
}

/// One polynomial in `n` per base coordinate; component `b` multiplies `gamma_0[b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhasePolynomial {
    pub per_base: Vec<RatPoly>,
}

impl PhasePolynomial {
    /// Integer multiples of each generator component at `n`.
    pub fn eval(&self, n: &BigInt) -> Vec<BigInt> {
        self.per_base
            .iter()
            .map(|p| {
                rational_to_int(&p.eval_int(n)).expect("phase coefficients are integer-valued")
            })
            .collect()
    }

    /// `sum_b c_b(n) gamma_0[b] mod 1`.
    pub fn value(&self, n: &BigInt, gamma: &[Phase]) -> Phase {
        self.eval(n)
            .iter()
            .zip(gamma)
            .fold(Phase::ZERO, |acc, (c, g)| acc + g.times(c))
    }
}

/// In-place fixed-point orbit, the hot loop behind every ergodic average.
#[derive(Clone, Debug)]
pub struct FloatOrbit {
    m: usize,
    state: Vec<Phase>,
    translation: Vec<Phase>,
    linear: Vec<Vec<u128>>,
}

impl FloatOrbit {
    pub fn new(system: &SkewSystem, start: Vec<Phase>) -> Result<Self> {
        check_len(system.dim(), start.len())?;
        let gamma = system.generator.phases()?;
        let m = system.m;
        let step = &system.one_step;
        let translation = (0..system.k)
            .flat_map(|i| gamma.iter().map(move |g| g.times(&step.translation[i])))
            .collect();
        let linear = step
            .linear
            .iter()
            .map(|row| row.iter().map(int_to_ring).collect())
            .collect();
        Ok(FloatOrbit { m, state: start, translation, linear })
    }

    pub fn state(&self) -> &[Phase] {
        &self.state
    }

    pub fn step(&mut self) {
        let m = self.m;
        // Block i only reads blocks j <= i, so update from the last block down.
        for i in (0..self.linear.len()).rev() {
            let row = &self.linear[i];
            for b in 0..m {
                let mut acc = self.translation[i * m + b];
                for (j, &a) in row.iter().enumerate() {
                    acc = acc + self.state[j * m + b].mul_ring(a);
                }
                self.state[i * m + b] = acc;
            }
        }
    }
}

enum OrbitInner {
    Exact(Vec<Frac>),
    Float(FloatOrbit),
}

/// Stateful orbit iterator; see [`SkewSystem::orbit`].
pub struct OrbitStream<'a> {
    system: &'a SkewSystem,
    inner: OrbitInner,
    remaining: u64,
}

impl Iterator for OrbitStream<'_> {
    type Item = TorusPoint;

    fn next(&mut self) -> Option<TorusPoint> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        Some(match &mut self.inner {
            OrbitInner::Exact(state) => {
                let current = TorusPoint::Exact(state.clone());
                if self.remaining > 0 {
                    let gamma = self.system.generator.fracs().expect("checked at construction");
                    *state = self.system.one_step.apply_to(self.system.m, &gamma, state);
                }
                current
            }
            OrbitInner::Float(orbit) => {
                let current = TorusPoint::Float(orbit.state.clone());
                if self.remaining > 0 {
                    orbit.step();
                }
                current
            }
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, Some(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::Mode;
    use proptest::prelude::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn sym(coords: &[(i64, i64, i64)]) -> SymbolicPoint {
        SymbolicPoint(
            coords
                .iter()
                .map(|&(p, q, c)| SymCoord { rational: Frac::from_ratio(p, q), gamma: int(c) })
                .collect(),
        )
    }

    #[test]
    fn presets_coincide_at_depth_one() {
        let h = SkewSystem::hahn(1, 1, Generator::Symbolic).unwrap();
        let m = SkewSystem::milnes(1, 1, Generator::Symbolic).unwrap();
        assert_eq!((h.kind(), m.kind()), (Kind::Hahn, Kind::Milnes));
        assert_eq!(h.one_step(), m.one_step());
        assert!(SkewSystem::milnes(2, 1, Generator::Symbolic).unwrap().tagged(Kind::Hahn).is_err());
    }

    #[test]
    fn milnes_four_torus_map() {
        let s = SkewSystem::milnes(4, 1, Generator::Symbolic).unwrap();
        assert_eq!(s.kind(), Kind::Milnes);
        let c = s.one_step();
        assert_eq!(c.translation, vec![int(4), int(6), int(4), int(1)]);
        let linear: Vec<Vec<BigInt>> = vec![
            vec![int(1)],
            vec![int(3), int(1)],
            vec![int(3), int(2), int(1)],
            vec![int(1), int(1), int(1), int(1)],
        ];
        assert_eq!(c.linear, linear);
        let image = s.apply_symbolic(&sym(&[(0, 1, 0); 4])).unwrap();
        assert_eq!(image, sym(&[(0, 1, 4), (0, 1, 6), (0, 1, 4), (0, 1, 1)]));
    }

    #[test]
    fn hahn_map_is_shift_sum() {
        let s = SkewSystem::hahn(3, 1, Generator::Rational(vec![Frac::from_ratio(1, 7)])).unwrap();
        assert_eq!(s.kind(), Kind::Hahn);
        let x = TorusPoint::from_ratios(&[(1, 2), (1, 3), (1, 5)]);
        let y = s.apply(&x).unwrap();
        assert_eq!(y, TorusPoint::from_ratios(&[(9, 14), (5, 6), (8, 15)]));
    }

    #[test]
    fn depth_one_is_rotation() {
        for s in [
            SkewSystem::hahn(1, 1, Generator::Rational(vec![Frac::from_ratio(2, 5)])).unwrap(),
            SkewSystem::milnes(1, 1, Generator::Rational(vec![Frac::from_ratio(2, 5)])).unwrap(),
        ] {
            let y = s.apply(&TorusPoint::from_ratios(&[(4, 5)])).unwrap();
            assert_eq!(y, TorusPoint::from_ratios(&[(1, 5)]));
        }
    }

    #[test]
    fn milnes_depth_two_step() {
        let s = SkewSystem::milnes(2, 1, Generator::Symbolic).unwrap();
        let y = s.apply_symbolic(&sym(&[(1, 3, 0), (1, 5, 0)])).unwrap();
        // (2 lambda + x1, lambda + x1 + x2)
        assert_eq!(y, sym(&[(1, 3, 2), (8, 15, 1)]));
        let y2 = s.power_apply_symbolic(&int(2), &sym(&[(1, 3, 0), (1, 5, 0)])).unwrap();
        // (4 lambda + x1, 4 lambda + 2 x1 + x2)
        assert_eq!(y2, sym(&[(1, 3, 4), (13, 15, 4)]));
    }

    #[test]
    fn power_coeff_examples() {
        let s = SkewSystem::milnes(5, 1, Generator::Symbolic).unwrap();
        assert_eq!(s.power_coeffs(&int(0)), AffineCoeffs::identity(5));
        let c = s.power_coeffs(&int(3));
        // T^n(0) = (k n, binomial(k,2) n^2, ..., n^k) gamma_0
        assert_eq!(c.translation, vec![int(15), int(90), int(270), int(405), int(243)]);

        let h = SkewSystem::hahn(4, 1, Generator::Symbolic).unwrap();
        for n in -6i64..=10 {
            let c = h.power_coeffs(&int(n));
            for i in 0..4 {
                let expected = RatPoly::binomial(i + 1).eval_int(&int(n));
                assert_eq!(BigRational::from_integer(c.translation[i].clone()), expected);
            }
        }
    }

    #[test]
    fn negative_powers_invert() {
        let s = SkewSystem::milnes(3, 2, Generator::Symbolic).unwrap();
        let x = sym(&[(1, 2, 0), (1, 3, 1), (2, 7, 0), (5, 11, -3), (1, 9, 0), (0, 1, 2)]);
        for n in 1..20 {
            let fwd = s.power_apply_symbolic(&int(n), &x).unwrap();
            assert_eq!(s.power_apply_symbolic(&int(-n), &fwd).unwrap(), x);
        }
        assert_eq!(s.apply_inverse_symbolic(&s.apply_symbolic(&x).unwrap()).unwrap(), x);
    }

    #[test]
    fn orbit_stream_lengths_and_values() {
        let s = SkewSystem::milnes(2, 1, Generator::Rational(vec![Frac::from_ratio(1, 10)])).unwrap();
        let zero = TorusPoint::zero(2, Mode::Exact);
        assert_eq!(s.orbit(&zero, 0).unwrap().count(), 0);
        assert_eq!(s.orbit(&zero, 1).unwrap().collect::<Vec<_>>(), vec![zero.clone()]);
        let pts: Vec<_> = s.orbit(&zero, 3).unwrap().collect();
        assert_eq!(
            pts,
            vec![
                zero,
                TorusPoint::from_ratios(&[(2, 10), (1, 10)]),
                TorusPoint::from_ratios(&[(4, 10), (4, 10)]),
            ]
        );
    }

    #[test]
    fn float_orbit_matches_closed_form_bitwise() {
        let s = SkewSystem::milnes(4, 1, Generator::golden()).unwrap();
        let x = TorusPoint::from_f64s(&[0.1, 0.7, 0.3, 0.9]);
        for (n, p) in s.orbit(&x, 500).unwrap().enumerate() {
            assert_eq!(p, s.power_apply(&int(n as i64), &x).unwrap());
        }
    }

    #[test]
    fn mode_and_generator_errors() {
        let s = SkewSystem::milnes(2, 1, Generator::golden()).unwrap();
        assert!(matches!(
            s.apply(&TorusPoint::zero(2, Mode::Exact)),
            Err(Error::ModeMismatch)
        ));
        assert!(matches!(
            s.apply(&TorusPoint::zero(3, Mode::Float)),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
        let sym_sys = SkewSystem::milnes(2, 1, Generator::Symbolic).unwrap();
        assert!(matches!(
            sym_sys.apply(&TorusPoint::zero(2, Mode::Float)),
            Err(Error::SymbolicGenerator)
        ));
        assert!(matches!(
            SkewSystem::milnes(2, 2, Generator::golden()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn integrality_failure_rejected() {
        let seq = JSequence::new(vec![BigRational::one(), BigRational::new(1.into(), 2.into())])
            .unwrap();
        let profile = [BigRational::one(), BigRational::zero()];
        assert!(matches!(
            SkewSystem::new(seq, &profile, 2, 1, Generator::Symbolic),
            Err(Error::Integrality { i: 1, j: 0, .. })
        ));
    }

    #[test]
    fn dual_power_examples() {
        let s = SkewSystem::milnes(4, 1, Generator::golden()).unwrap();
        let eta = CharacterVector::from_i64s(&[2, -1, 3, 5]);
        let d0 = s.dual_power(&eta, &int(0)).unwrap();
        assert_eq!(d0.character, eta);
        assert_eq!(d0.phase.eval(&int(0)), vec![int(0)]);

        let last = CharacterVector::from_i64s(&[0, 0, 0, 1]);
        for n in [-3i64, 2, 7] {
            let d = s.dual_power(&last, &int(n)).unwrap();
            assert_eq!(d.character, CharacterVector::from_i64s(&[n.pow(3), n.pow(2), n, 1]));
            assert_eq!(d.phase.eval(&int(n)), vec![int(n.pow(4))]);
        }

        let h = SkewSystem::hahn(2, 1, Generator::golden()).unwrap();
        assert!(matches!(
            h.dual_power(&CharacterVector::from_i64s(&[0, 1]), &int(1)),
            Err(Error::UnsupportedKind { .. })
        ));
    }

    proptest! {
        #[test]
        fn dual_consistency(
            e in proptest::collection::vec(-9i64..9, 3),
            n in -40i64..40,
            x in proptest::collection::vec(any::<u128>(), 3),
        ) {
            let s = SkewSystem::milnes(3, 1, Generator::golden()).unwrap();
            let eta = CharacterVector::from_i64s(&e);
            let x = TorusPoint::Float(x.into_iter().map(Phase::from_bits).collect());
            let n = int(n);
            let lhs = eta.eval(&s.power_apply(&n, &x).unwrap()).unwrap();
            let d = s.dual_power(&eta, &n).unwrap();
            let phase = d.phase.value(&n, &s.generator().phases().unwrap());
            let rhs = phase.cis() * d.character.eval(&x).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-9);
        }

        #[test]
        fn cocycle_identity(a in -30i64..30, b in -30i64..30, k in 1usize..6) {
            let s = SkewSystem::hahn(k, 1, Generator::Symbolic).unwrap();
            let x = SymbolicPoint(
                (0..k).map(|i| SymCoord { rational: Frac::from_ratio(i as i64 + 1, 13), gamma: int(i as i64) }).collect(),
            );
            let lhs = s.power_apply_symbolic(&int(a + b), &x).unwrap();
            let rhs = s
                .power_apply_symbolic(&int(a), &s.power_apply_symbolic(&int(b), &x).unwrap())
                .unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn gap_constant_below_first_difference(
            n in -50i64..50,
            l in 0usize..4,
            base in proptest::collection::vec((0i64..30, 1i64..30), 4),
            shift in proptest::collection::vec((0i64..30, 1i64..30), 4),
        ) {
            let s = SkewSystem::milnes(4, 1, Generator::Symbolic).unwrap();
            let x: Vec<Frac> = base.iter().map(|&(p, q)| Frac::from_ratio(p, q)).collect();
            let mut y = x.clone();
            for j in l..4 {
                y[j] = y[j].plus(&Frac::from_ratio(shift[j].0, shift[j].1));
            }
            let xs = SymbolicPoint::from_rationals(&x);
            let ys = SymbolicPoint::from_rationals(&y);
            let tx = s.power_apply_symbolic(&int(n), &xs).unwrap();
            let ty = s.power_apply_symbolic(&int(n), &ys).unwrap();
            prop_assert_eq!(tx.0[l].minus(&ty.0[l]), xs.0[l].minus(&ys.0[l]));
        }
    }
}
