//! Numerical ergodic theory on skew-product orbits: Birkhoff averages of
//! characters, Weyl sums, uniformity over start points, distality probes
//! and the finite-box search for characters fixed by a power of the dual map.
//!
//! All sums use Neumaier compensation. Long ranges are cut into fixed-size
//! segments whose starting points come from the closed-form power, summed in
//! parallel and reduced in index order, so results do not depend on the
//! number of worker threads.

use std::ops::Range;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::descriptor::SystemDescriptor;
use crate::dynamics::{FloatOrbit, Kind, SkewSystem, SymbolicPoint};
use crate::error::{Error, Result};
use crate::torus::{check_len, CharacterVector, Phase, TorusCoord, TorusPoint};

const SEGMENT: u64 = 1 << 15;

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        NeumaierSum::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated sum of complex numbers, componentwise.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `N/100, N/10, N`, dropping zeros and duplicates.
pub fn default_checkpoints(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = [n / 100, n / 10, n].into_iter().filter(|&c| c > 0).collect();
    out.dedup();
    out
}

fn normalize_checkpoints(n: u64, checkpoints: Option<&[u64]>) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::EmptyRange);
    }
    let mut cps = match checkpoints {
        Some(c) => c.to_vec(),
        None => default_checkpoints(n),
    };
    if let Some(&value) = cps.iter().find(|&&c| c == 0 || c > n) {
        return Err(Error::InvalidCheckpoint { value, n });
    }
    cps.sort_unstable();
    cps.dedup();
    Ok(cps)
}

/// Splits `0..n` at every multiple of [`SEGMENT`] and at every checkpoint.
fn segments(n: u64, checkpoints: &[u64]) -> Vec<Range<u64>> {
    let mut cuts: Vec<u64> = (1..=(n - 1) / SEGMENT).map(|s| s * SEGMENT).collect();
    cuts.extend(checkpoints.iter().copied().filter(|&c| c < n));
    cuts.push(n);
    cuts.sort_unstable();
    cuts.dedup();
    let mut start = 0;
    cuts.into_iter()
        .map(|end| {
            let r = start..end;
            start = end;
            r
        })
        .collect()
}

/// Sums segment values in parallel, then accumulates them in index order,
/// returning the running sum at each checkpoint.
fn checkpoint_sums<F>(n: u64, checkpoints: &[u64], segment_sum: F) -> Result<Vec<Complex64>>
where
    F: Fn(Range<u64>) -> Result<Complex64> + Sync,
{
    let segs = segments(n, checkpoints);
    let partial: Vec<Complex64> =
        segs.par_iter().map(|r| segment_sum(r.clone())).collect::<Result<_>>()?;
    let mut total = ComplexSum::default();
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    for (r, s) in segs.iter().zip(partial) {
        total.add(s);
        while next.peek().is_some_and(|&&c| c == r.end) {
            next.next();
            out.push(total.value());
        }
    }
    Ok(out)
}

fn character_value(exps: &[(usize, u128)], state: &[Phase]) -> Complex64 {
    exps.iter()
        .fold(Phase::ZERO, |acc, &(i, e)| acc + state[i].mul_ring(e))
        .cis()
}

fn float_start(x: &TorusPoint) -> Vec<Phase> {
    match x.to_float() {
        TorusPoint::Float(v) => v,
        TorusPoint::Exact(_) => unreachable!("to_float yields fixed-point coordinates"),
    }
}

/// `sum_{n in range} eta(T^n x)`, seeding the segment through the closed form.
fn orbit_segment_sum(
    system: &SkewSystem,
    exps: &[(usize, u128)],
    x: &[Phase],
    range: Range<u64>,
) -> Result<Complex64> {
    let seed = system.power_apply(&BigInt::from(range.start), &TorusPoint::Float(x.to_vec()))?;
    let mut orbit = FloatOrbit::new(system, float_start(&seed))?;
    let mut sum = ComplexSum::default();
    for t in range.clone() {
        sum.add(character_value(exps, orbit.state()));
        if t + 1 < range.end {
            orbit.step();
        }
    }
    Ok(sum.value())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Checkpoint {
    pub n: u64,
    pub average: Complex64,
}

/// Partial Birkhoff averages of a character along one orbit.
#[derive(Clone, Debug)]
pub struct BirkhoffReport {
    pub system: SystemDescriptor,
    pub character: CharacterVector,
    pub start: TorusPoint,
    pub n: u64,
    pub checkpoints: Vec<Checkpoint>,
    /// Haar integral of the character: the predicted limit.
    pub target: Complex64,
}

impl BirkhoffReport {
    /// The average over the full range `0..n`.
    pub fn final_average(&self) -> Complex64 {
        self.checkpoints.last().map(|c| c.average).unwrap_or_default()
    }
}

fn prepare(system: &SkewSystem, x: &TorusPoint, eta: &CharacterVector) -> Result<Vec<Phase>> {
    check_len(system.dim(), x.len())?;
    check_len(system.dim(), eta.len())?;
    system.generator().phases()?;
    Ok(float_start(x))
}

/// `A_{N'} = (1/N') sum_{n < N'} eta(T^n x)` at each checkpoint (default
/// `N/100, N/10, N`). Exact start points are rounded onto the fixed-point grid.
pub fn birkhoff_average(
    system: &SkewSystem,
    x: &TorusPoint,
    eta: &CharacterVector,
    n: u64,
    checkpoints: Option<&[u64]>,
) -> Result<BirkhoffReport> {
    let cps = normalize_checkpoints(n, checkpoints)?;
    let start = prepare(system, x, eta)?;
    let exps = eta.ring_exponents();
    let sums = checkpoint_sums(n, &cps, |r| orbit_segment_sum(system, &exps, &start, r))?;
    Ok(report(system, x, eta, n, &cps, &sums))
}

/// Single-pass variant of [`birkhoff_average`] driven by one orbit stream.
pub fn birkhoff_average_sequential(
    system: &SkewSystem,
    x: &TorusPoint,
    eta: &CharacterVector,
    n: u64,
    checkpoints: Option<&[u64]>,
) -> Result<BirkhoffReport> {
    let cps = normalize_checkpoints(n, checkpoints)?;
    let start = TorusPoint::Float(prepare(system, x, eta)?);
    let mut sum = ComplexSum::default();
    let mut sums = Vec::with_capacity(cps.len());
    let mut next = cps.iter().peekable();
    for (t, p) in system.orbit(&start, n)?.enumerate() {
        sum.add(eta.eval(&p)?);
        if next.peek().is_some_and(|&&c| c == t as u64 + 1) {
            next.next();
            sums.push(sum.value());
        }
    }
    Ok(report(system, x, eta, n, &cps, &sums))
}

fn report(
    system: &SkewSystem,
    x: &TorusPoint,
    eta: &CharacterVector,
    n: u64,
    cps: &[u64],
    sums: &[Complex64],
) -> BirkhoffReport {
    let checkpoints = cps
        .iter()
        .zip(sums)
        .map(|(&c, s)| Checkpoint { n: c, average: if eta.is_trivial() { Complex64::new(1.0, 0.0) } else { s / c as f64 } })
        .collect();
    BirkhoffReport {
        system: system.descriptor(),
        character: eta.clone(),
        start: x.clone(),
        n,
        checkpoints,
        target: eta.haar_integral(),
    }
}

/// `p(n) mod 1` for integer `n`, with coefficients taken modulo 1.
fn eval_phase_poly(coeffs: &[Phase], n: u64) -> Phase {
    let n = n as u128;
    coeffs.iter().rev().fold(Phase::ZERO, |acc, &c| acc.mul_ring(n) + c)
}

/// Normalized Weyl sums `|S_{N'}| / N'` with `S_{N'} = sum_{n=0}^{N'-1} e(p(n))`.
///
/// `coeffs` lists the coefficients of `p` from the constant term up; only
/// their fractional parts matter at integer arguments.
pub fn weyl_sum(coeffs: &[Phase], checkpoints: &[u64]) -> Result<Vec<(u64, f64)>> {
    let n = checkpoints.iter().copied().max().ok_or(Error::EmptyRange)?;
    let cps = normalize_checkpoints(n, Some(checkpoints))?;
    let sums = checkpoint_sums(n, &cps, |r| {
        let mut sum = ComplexSum::default();
        for t in r {
            sum.add(eval_phase_poly(coeffs, t).cis());
        }
        Ok(sum.value())
    })?;
    Ok(cps.iter().zip(sums).map(|(&c, s)| (c, s.norm() / c as f64)).collect())
}

/// Birkhoff averages over a grid of start points.
#[derive(Clone, Debug)]
pub struct UniformityReport {
    pub n: u64,
    pub starts: Vec<TorusPoint>,
    pub averages: Vec<Complex64>,
    /// Diameter of the set of averages in the complex plane.
    pub spread: f64,
    /// `max |A| - min |A|` over the grid.
    pub modulus_spread: f64,
    pub max_abs: f64,
}

pub fn oxtoby_uniformity(
    system: &SkewSystem,
    eta: &CharacterVector,
    starts: &[TorusPoint],
    n: u64,
) -> Result<UniformityReport> {
    if starts.is_empty() || n == 0 {
        return Err(Error::EmptyRange);
    }
    let exps = eta.ring_exponents();
    let averages: Vec<Complex64> = starts
        .par_iter()
        .map(|x| {
            let start = prepare(system, x, eta)?;
            if eta.is_trivial() {
                return Ok(Complex64::new(1.0, 0.0));
            }
            Ok(orbit_segment_sum(system, &exps, &start, 0..n)? / n as f64)
        })
        .collect::<Result<_>>()?;
    let mut spread: f64 = 0.0;
    for (i, a) in averages.iter().enumerate() {
        for b in &averages[i + 1..] {
            spread = spread.max((a - b).norm());
        }
    }
    let moduli = averages.iter().map(|a| a.norm());
    let max_abs = moduli.clone().fold(0.0, f64::max);
    let min_abs = moduli.fold(f64::INFINITY, f64::min);
    Ok(UniformityReport {
        n,
        starts: starts.to_vec(),
        averages,
        spread,
        modulus_spread: max_abs - min_abs,
        max_abs,
    })
}

/// `count` uniformly random fixed-point points of `T^dim` from a seeded ChaCha8 stream.
pub fn random_starts(seed: u64, count: usize, dim: usize) -> Vec<TorusPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| TorusPoint::Float((0..dim).map(|_| Phase::from_bits(rng.gen())).collect()))
        .collect()
}

/// The gap in the first differing block, tested over a range of powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapCertificate {
    /// One-based index of the first block where the points differ.
    pub block: usize,
    pub constant: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistalityReport {
    pub n: u64,
    pub min_distance: f64,
    pub argmin: u64,
    pub certificate: GapCertificate,
}

fn first_diff_block<C: PartialEq>(m: usize, x: &[C], y: &[C]) -> Result<usize> {
    x.iter()
        .zip(y)
        .position(|(a, b)| a != b)
        .map(|idx| idx / m + 1)
        .ok_or(Error::IdenticalPoints)
}

fn block_gap<C: TorusCoord>(m: usize, block: usize, x: &[C], y: &[C]) -> Vec<C> {
    let r = (block - 1) * m..block * m;
    x[r.clone()].iter().zip(&y[r]).map(|(a, b)| a.minus(b)).collect()
}

/// Checks exactly that `(T^n x)_l - (T^n y)_l = x_l - y_l` for all `n` in
/// `powers`, where `l` is the first block in which `x` and `y` differ.
pub fn distality_certificate(
    system: &SkewSystem,
    x: &SymbolicPoint,
    y: &SymbolicPoint,
    powers: Range<i64>,
) -> Result<GapCertificate> {
    check_len(system.dim(), x.len())?;
    check_len(system.dim(), y.len())?;
    let m = system.m();
    let block = first_diff_block(m, &x.0, &y.0)?;
    let gap = block_gap(m, block, &x.0, &y.0);
    for n in powers {
        let n = BigInt::from(n);
        let tx = system.power_apply_symbolic(&n, x)?;
        let ty = system.power_apply_symbolic(&n, y)?;
        if block_gap(m, block, &tx.0, &ty.0) != gap {
            return Ok(GapCertificate { block, constant: false });
        }
    }
    Ok(GapCertificate { block, constant: true })
}

fn float_certificate(
    system: &SkewSystem,
    x: &[Phase],
    y: &[Phase],
    powers: Range<i64>,
) -> Result<GapCertificate> {
    let m = system.m();
    let block = first_diff_block(m, x, y)?;
    let gap = block_gap(m, block, x, y);
    let (px, py) = (TorusPoint::Float(x.to_vec()), TorusPoint::Float(y.to_vec()));
    for n in powers {
        let n = BigInt::from(n);
        let tx = float_start(&system.power_apply(&n, &px)?);
        let ty = float_start(&system.power_apply(&n, &py)?);
        if block_gap(m, block, &tx, &ty) != gap {
            return Ok(GapCertificate { block, constant: false });
        }
    }
    Ok(GapCertificate { block, constant: true })
}

/// Minimum sup-distance between the orbits of `x` and `y` over `0 <= n < N`,
/// with the constant-gap certificate over `n in [-50, 50]`.
///
/// The certificate is exact in both modes: rational points are checked
/// symbolically, fixed-point points on the `2^-128` grid.
pub fn distality_probe(
    system: &SkewSystem,
    x: &TorusPoint,
    y: &TorusPoint,
    n: u64,
) -> Result<DistalityReport> {
    check_len(system.dim(), x.len())?;
    check_len(system.dim(), y.len())?;
    if n == 0 {
        return Err(Error::EmptyRange);
    }
    let certificate = match (x, y) {
        (TorusPoint::Exact(a), TorusPoint::Exact(b)) => distality_certificate(
            system,
            &SymbolicPoint::from_rationals(a),
            &SymbolicPoint::from_rationals(b),
            -50..51,
        )?,
        (TorusPoint::Float(a), TorusPoint::Float(b)) => float_certificate(system, a, b, -50..51)?,
        _ => return Err(Error::ModeMismatch),
    };
    let mut ox = FloatOrbit::new(system, float_start(x))?;
    let mut oy = FloatOrbit::new(system, float_start(y))?;
    let mut best = (f64::INFINITY, 0);
    for t in 0..n {
        let d = ox
            .state()
            .iter()
            .zip(oy.state())
            .map(|(a, b)| a.circle_distance(*b))
            .fold(0.0, f64::max);
        if d < best.0 {
            best = (d, t);
        }
        if t + 1 < n {
            ox.step();
            oy.step();
        }
    }
    Ok(DistalityReport { n, min_distance: best.0, argmin: best.1, certificate })
}

/// A nontrivial character fixed by some power, with the least such power found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedCharacter {
    pub character: CharacterVector,
    pub n: u64,
}

/// Enumerates every nontrivial exponent vector in `[-bound, bound]^dim` and
/// reports those for which `fixed(eta, n)` holds for some `1 <= n <= n_max`.
pub fn scan_fixed_characters<F>(dim: usize, bound: i64, n_max: u64, fixed: F) -> Result<Vec<FixedCharacter>>
where
    F: Fn(&[i64], u64) -> bool + Sync,
{
    if bound < 1 || n_max < 1 {
        return Err(Error::InvalidScanRange);
    }
    let side = (2 * bound + 1) as u64;
    let total = (0..dim).try_fold(1u64, |acc, _| acc.checked_mul(side)).ok_or(Error::InvalidScanRange)?;
    Ok((0..total)
        .into_par_iter()
        .filter_map(|index| {
            let mut rest = index;
            let eta: Vec<i64> = (0..dim)
                .map(|_| {
                    let e = (rest % side) as i64 - bound;
                    rest /= side;
                    e
                })
                .collect();
            if eta.iter().all(|&e| e == 0) {
                return None;
            }
            (1..=n_max)
                .find(|&n| fixed(&eta, n))
                .map(|n| FixedCharacter { character: CharacterVector::from_i64s(&eta), n })
        })
        .collect())
}

/// Nontrivial characters `eta` in the box with `eta o T^n = eta` as functions,
/// i.e. `U^n eta = eta` and the translation phase `sum_i eta_i c_i(n)` vanishes
/// on every generator component. Milnes systems only.
pub fn ergodicity_scan(system: &SkewSystem, bound: i64, n_max: u64) -> Result<Vec<FixedCharacter>> {
    if system.kind() != Kind::Milnes {
        return Err(Error::UnsupportedKind {
            operation: "ergodicity_scan",
            required: "milnes",
            found: system.kind().as_str(),
        });
    }
    let (k, m) = (system.k(), system.m());
    let powers: Vec<_> = (1..=n_max).map(|n| system.power_coeffs(&BigInt::from(n))).collect();
    scan_fixed_characters(k * m, bound, n_max, |eta, n| {
        let c = &powers[(n - 1) as usize];
        (0..m).all(|b| {
            let phase: BigInt = (0..k).map(|i| &c.translation[i] * eta[i * m + b]).sum();
            phase.is_zero()
                && (0..k).all(|j| {
                    let zeta: BigInt =
                        (j..k).map(|i| &c.linear[i][j] * eta[i * m + b]).sum();
                    zeta == BigInt::from(eta[j * m + b])
                })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::Generator;
    use crate::torus::{Frac, Mode};
    use proptest::prelude::*;

    fn golden_milnes(k: usize) -> SkewSystem {
        SkewSystem::milnes(k, 1, Generator::golden()).unwrap()
    }

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let mut s = NeumaierSum::new();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn default_checkpoint_layout() {
        assert_eq!(default_checkpoints(1_000_000), vec![10_000, 100_000, 1_000_000]);
        assert_eq!(default_checkpoints(5), vec![5]);
        assert_eq!(default_checkpoints(50), vec![5, 50]);
    }

    #[test]
    fn segments_cover_range() {
        let segs = segments(100_000, &[10, 40_000]);
        assert_eq!(segs.first().unwrap().start, 0);
        assert_eq!(segs.last().unwrap().end, 100_000);
        for w in segs.windows(2) {
            assert_eq!(w[0].end, w[1].start);
        }
        assert!(segs.iter().any(|r| r.end == 10));
    }

    #[test]
    fn trivial_character_averages_to_one() {
        let s = golden_milnes(3);
        let r = birkhoff_average(
            &s,
            &TorusPoint::from_f64s(&[0.2, 0.4, 0.6]),
            &CharacterVector::trivial(3),
            1000,
            None,
        )
        .unwrap();
        assert_eq!(r.checkpoints.len(), 3);
        for c in &r.checkpoints {
            assert_eq!(c.average, Complex64::new(1.0, 0.0));
        }
        assert_eq!(r.target, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn rational_rotation_is_periodic() {
        let s = SkewSystem::hahn(2, 1, Generator::Rational(vec![Frac::from_ratio(1, 3)])).unwrap();
        let r = birkhoff_average(
            &s,
            &TorusPoint::zero(2, Mode::Exact),
            &CharacterVector::from_i64s(&[0, 1]),
            30_000,
            None,
        )
        .unwrap();
        for c in &r.checkpoints {
            assert!((c.average.norm() - 3f64.sqrt() / 3.0).abs() < 1e-9, "{c:?}");
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let s = golden_milnes(4);
        let x = TorusPoint::from_f64s(&[0.3, 0.1, 0.8, 0.5]);
        let eta = CharacterVector::from_i64s(&[1, 0, -2, 1]);
        let n = 3 * SEGMENT + 17;
        let par = birkhoff_average(&s, &x, &eta, n, None).unwrap();
        let seq = birkhoff_average_sequential(&s, &x, &eta, n, None).unwrap();
        for (a, b) in par.checkpoints.iter().zip(&seq.checkpoints) {
            assert_eq!(a.n, b.n);
            assert!((a.average - b.average).norm() < 1e-9);
        }
    }

    #[test]
    fn checkpoint_errors() {
        let s = golden_milnes(2);
        let x = TorusPoint::zero(2, Mode::Float);
        let eta = CharacterVector::from_i64s(&[0, 1]);
        assert!(matches!(birkhoff_average(&s, &x, &eta, 0, None), Err(Error::EmptyRange)));
        assert!(matches!(
            birkhoff_average(&s, &x, &eta, 10, Some(&[11])),
            Err(Error::InvalidCheckpoint { value: 11, n: 10 })
        ));
    }

    #[test]
    fn weyl_sum_examples() {
        let zero = weyl_sum(&[], &[1000]).unwrap();
        assert_eq!(zero, vec![(1000, 1.0)]);
        let half = Frac::from_ratio(1, 2).to_phase();
        for (n, v) in weyl_sum(&[Phase::ZERO, half], &[7, 100, 1001]).unwrap() {
            assert!(v <= 1.0 / n as f64 + 1e-15);
        }
        assert!(matches!(weyl_sum(&[half], &[]), Err(Error::EmptyRange)));
    }

    #[test]
    fn linear_weyl_sum_geometric_bound() {
        let alpha = Phase::sqrt2();
        let bound = 1.0 / (std::f64::consts::PI * alpha.to_f64()).sin().abs();
        let cps: Vec<u64> = (1..60).map(|i| i * 37).collect();
        for (n, v) in weyl_sum(&[Phase::ZERO, alpha], &cps).unwrap() {
            assert!(v * n as f64 <= bound + 1e-9);
        }
    }

    #[test]
    fn uniformity_degenerate_cases() {
        let s = golden_milnes(3);
        let starts = random_starts(7, 5, 3);
        let r = oxtoby_uniformity(&s, &CharacterVector::trivial(3), &starts, 100).unwrap();
        assert_eq!(r.spread, 0.0);
        let single = oxtoby_uniformity(&s, &CharacterVector::from_i64s(&[0, 0, 1]), &starts[..1], 100)
            .unwrap();
        assert_eq!(single.spread, 0.0);
        assert!(matches!(
            oxtoby_uniformity(&s, &CharacterVector::trivial(3), &[], 10),
            Err(Error::EmptyRange)
        ));
    }

    #[test]
    fn random_starts_are_reproducible() {
        assert_eq!(random_starts(42, 3, 4), random_starts(42, 3, 4));
        assert_ne!(random_starts(42, 3, 4), random_starts(43, 3, 4));
    }

    #[test]
    fn distal_half_shift() {
        let s = golden_milnes(2);
        let x = TorusPoint::from_f64s(&[0.25, 0.125]);
        let y = TorusPoint::from_f64s(&[0.25, 0.625]);
        for n in [1, 10, 500] {
            let r = distality_probe(&s, &x, &y, n).unwrap();
            assert_eq!(r.min_distance, 0.5);
            assert_eq!(r.certificate, GapCertificate { block: 2, constant: true });
        }
        assert!(matches!(distality_probe(&s, &x, &x, 10), Err(Error::IdenticalPoints)));
    }

    #[test]
    fn distal_exact_points() {
        let s = golden_milnes(3);
        let x = TorusPoint::from_ratios(&[(1, 3), (1, 7), (2, 9)]);
        let y = TorusPoint::from_ratios(&[(1, 5), (1, 7), (2, 9)]);
        let r = distality_probe(&s, &x, &y, 10_000).unwrap();
        assert!(r.min_distance > 0.0);
        assert!(r.argmin < 10_000);
        assert_eq!(r.certificate, GapCertificate { block: 1, constant: true });
    }

    #[test]
    fn scan_examples() {
        assert!(ergodicity_scan(&golden_milnes(3), 5, 6).unwrap().is_empty());
        let all = scan_fixed_characters(2, 2, 3, |_, _| true).unwrap();
        assert_eq!(all.len(), 24);
        assert!(all.iter().all(|f| f.n == 1 && !f.character.is_trivial()));
        let h = SkewSystem::hahn(2, 1, Generator::golden()).unwrap();
        assert!(matches!(ergodicity_scan(&h, 2, 2), Err(Error::UnsupportedKind { .. })));
        assert!(matches!(ergodicity_scan(&golden_milnes(2), 0, 2), Err(Error::InvalidScanRange)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn averages_bounded(e in proptest::collection::vec(-4i64..4, 3), seed in any::<u64>()) {
            let s = golden_milnes(3);
            let x = &random_starts(seed, 1, 3)[0];
            let r = birkhoff_average(&s, x, &CharacterVector::from_i64s(&e), 2000, None).unwrap();
            for c in &r.checkpoints {
                prop_assert!(c.average.norm() <= 1.0 + 1e-12);
            }
        }
    }
}
