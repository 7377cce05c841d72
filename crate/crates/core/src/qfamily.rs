//! The coefficient table `J(i, l)` and the polynomial family `Q_0, ..., Q_k`
//! that together define a skew product.
//!
//! `J(i, l) = J_{i-1} J_{i-2} ... J_{i-l} / (J_1 J_2 ... J_{l-1})` with
//! `J(i, 0) = 1`, and the family must satisfy, for all `0 <= l <= i <= k`,
//!
//! ```text
//! sum_{j=l}^{i} J(i-l, j-l) Q_{i-j}(1) Q_{j-l}(n-1) = Q_{i-l}(n)
//! ```
//!
//! as an identity of polynomials in `n`. Families are normalised by
//! `Q_i(0) = 0` for `i >= 1`, which leaves the one-step profile `Q_i(1)` as
//! the free parameter.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::RatPoly;

/// `J_0, J_1, ...`: nonzero rationals with `J_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JSequence {
    values: Vec<BigRational>,
}

impl JSequence {
    pub fn new(values: Vec<BigRational>) -> Result<Self> {
        match values.first() {
            None => return Err(Error::ShortJSequence { needed: 1, found: 0 }),
            Some(j0) if !j0.is_one() => {
                return Err(Error::JZeroNotOne { found: j0.to_string() })
            }
            _ => {}
        }
        if let Some(index) = values.iter().position(Zero::is_zero) {
            return Err(Error::ZeroJEntry { index });
        }
        Ok(JSequence { values })
    }

    pub fn from_i64s(values: &[i64]) -> Result<Self> {
        JSequence::new(values.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    /// `J_i = 1`: the Hahn family.
    pub fn ones(len: usize) -> Self {
        JSequence { values: vec![BigRational::one(); len.max(1)] }
    }

    /// `J_i = i + 1`: the Milnes family, for which `J(i, l)` is binomial.
    pub fn successors(len: usize) -> Self {
        JSequence {
            values: (0..len.max(1))
                .map(|i| BigRational::from_integer(BigInt::from(i + 1)))
                .collect(),
        }
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Profile `Q_1(1) = 1`, `Q_i(1) = 0` otherwise; yields `Q_i(n) = binomial(n, i)`.
pub fn hahn_profile(k: usize) -> Vec<BigRational> {
    (1..=k)
        .map(|i| if i == 1 { BigRational::one() } else { BigRational::zero() })
        .collect()
}

/// Profile `Q_i(1) = 1`; with `J_i = i + 1` yields `Q_i(n) = n^i`.
pub fn milnes_profile(k: usize) -> Vec<BigRational> {
    vec![BigRational::one(); k]
}

/// Lower-triangular table of `J(i, l)` for `0 <= l <= i <= k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "JTableJson", try_from = "JTableJson")]
pub struct JTable {
    rows: Vec<Vec<BigRational>>,
}

impl JTable {
    pub fn build(seq: &JSequence, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidDepth);
        }
        if seq.len() < k {
            return Err(Error::ShortJSequence { needed: k, found: seq.len() });
        }
        let j = seq.values();
        let rows = (0..=k)
            .map(|i| {
                (0..=i)
                    .map(|l| {
                        let numer: BigRational = (i - l..i).map(|t| &j[t]).product();
                        let denom: BigRational = (1..l.max(1)).map(|t| &j[t]).product();
                        numer / denom
                    })
                    .collect()
            })
            .collect();
        Ok(JTable { rows })
    }

    pub fn k(&self) -> usize {
        self.rows.len() - 1
    }

    /// `J(i, l)`; panics unless `l <= i <= k`.
    pub fn get(&self, i: usize, l: usize) -> &BigRational {
        &self.rows[i][l]
    }

    pub fn rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    /// True iff `J(i, l)` equals `binomial(i, l)` everywhere.
    pub fn is_binomial(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(l, v)| *v == RatPoly::binomial(l).eval_int(&BigInt::from(i)))
        })
    }

    pub fn is_all_ones(&self) -> bool {
        self.rows.iter().flatten().all(One::is_one)
    }
}

/// The polynomials `Q_0 = 1, Q_1, ..., Q_k` with their profile `Q_i(1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "QFamilyJson", try_from = "QFamilyJson")]
pub struct QFamily {
    polys: Vec<RatPoly>,
}

impl QFamily {
    /// Wraps explicit polynomials `Q_0..Q_k` without checking the recursion.
    pub fn from_polys(polys: Vec<RatPoly>) -> Self {
        QFamily { polys }
    }

    /// Solves the recursion degree by degree.
    ///
    /// With `J(i, i) = 1` the `l = 0` instance is the difference equation
    /// `Q_i(n) - Q_i(n-1) = Q_i(1) + sum_{j=1}^{i-1} J(i,j) Q_{i-j}(1) Q_j(n-1)`,
    /// summed from `Q_i(0) = 0`. The full recursion is checked before return.
    pub fn solve(seq: &JSequence, profile: &[BigRational], k: usize) -> Result<Self> {
        let table = JTable::build(seq, k)?;
        if profile.len() != k {
            return Err(Error::ProfileLength { needed: k, found: profile.len() });
        }
        let one = BigRational::one();
        let q1 = |i: usize| -> &BigRational { if i == 0 { &one } else { &profile[i - 1] } };

        let mut polys = vec![RatPoly::constant(BigRational::one())];
        for i in 1..=k {
            let mut step = RatPoly::constant(q1(i).clone());
            for (j, qj) in polys.iter().enumerate().skip(1) {
                let weight = table.get(i, j) * q1(i - j);
                if !weight.is_zero() {
                    step = step.add(&qj.shift(&-BigRational::one()).scale(&weight));
                }
            }
            // sum_{m=1}^{n} step(m) = sum_d b_d binomial(n, d+1), b = differences of step(t+1).
            let diffs = step.shift(&BigRational::one()).binomial_basis();
            let qi = diffs
                .iter()
                .enumerate()
                .fold(RatPoly::zero(), |acc, (d, b)| acc.add(&RatPoly::binomial(d + 1).scale(b)));
            if let Some(degree) = qi.degree().filter(|&d| d > i) {
                return Err(Error::DegreeOverflow { index: i, degree });
            }
            polys.push(qi);
        }

        let family = QFamily { polys };
        if let Some(fail) = verify_q_family(&table, &family).first_failure() {
            return Err(Error::RecursionFailure { i: fail.i, l: fail.l });
        }
        Ok(family)
    }

    pub fn hahn(k: usize) -> Result<Self> {
        QFamily::solve(&JSequence::ones(k), &hahn_profile(k), k)
    }

    pub fn milnes(k: usize) -> Result<Self> {
        QFamily::solve(&JSequence::successors(k), &milnes_profile(k), k)
    }

    pub fn k(&self) -> usize {
        self.polys.len() - 1
    }

    /// `Q_i`; panics unless `i <= k`.
    pub fn poly(&self, i: usize) -> &RatPoly {
        &self.polys[i]
    }

    pub fn polys(&self) -> &[RatPoly] {
        &self.polys
    }

    /// `Q_i(1)` for `i = 1..=k`.
    pub fn profile(&self) -> Vec<BigRational> {
        self.polys[1..].iter().map(|p| p.eval(&BigRational::one())).collect()
    }

    /// `Q_i(1)` for any `i`, with `Q_0(1) = 1`.
    pub fn one_step(&self, i: usize) -> BigRational {
        self.polys[i].eval(&BigRational::one())
    }
}

/// Outcome of checking one `(i, l)` instance of the recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionCheck {
    pub i: usize,
    pub l: usize,
    pub holds: bool,
    pub lhs: RatPoly,
    pub rhs: RatPoly,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<RecursionCheck>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn first_failure(&self) -> Option<&RecursionCheck> {
        self.checks.iter().find(|c| !c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RecursionCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

/// Expands both sides of every `(i, l)` instance and compares coefficients.
pub fn verify_q_family(table: &JTable, family: &QFamily) -> VerificationReport {
    let k = table.k().min(family.k());
    let shifted: Vec<RatPoly> = family
        .polys()
        .iter()
        .take(k + 1)
        .map(|p| p.shift(&-BigRational::one()))
        .collect();
    let at_one: Vec<BigRational> = (0..=k).map(|i| family.one_step(i)).collect();

    let mut checks = Vec::new();
    for i in 0..=k {
        for l in 0..=i {
            let lhs = (l..=i).fold(RatPoly::zero(), |acc, j| {
                let weight = table.get(i - l, j - l) * &at_one[i - j];
                acc.add(&shifted[j - l].scale(&weight))
            });
            let rhs = family.poly(i - l).clone();
            checks.push(RecursionCheck { i, l, holds: lhs == rhs, lhs, rhs });
        }
    }
    VerificationReport { checks }
}

/// A coefficient `J(k-j, i-j) Q_{i-j}(1)` that fails to be an integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityWitness {
    pub i: usize,
    pub j: usize,
    pub value: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityReport {
    pub integral: bool,
    pub witness: Option<IntegralityWitness>,
}

/// Checks `J(k-j, i-j) Q_{i-j}(1) in Z` for all `0 <= j <= i <= k`.
pub fn integrality_check(table: &JTable, family: &QFamily, k: usize) -> IntegralityReport {
    for i in 0..=k {
        for j in 0..=i {
            let value = table.get(k - j, i - j) * family.one_step(i - j);
            if !value.is_integer() {
                return IntegralityReport {
                    integral: false,
                    witness: Some(IntegralityWitness { i, j, value }),
                };
            }
        }
    }
    IntegralityReport { integral: true, witness: None }
}

/// A rational as a `[numerator, denominator]` pair of decimal strings.
pub type RationalPair = [String; 2];

pub fn rational_to_pair(r: &BigRational) -> RationalPair {
    [r.numer().to_string(), r.denom().to_string()]
}

pub fn pair_to_rational(pair: &RationalPair) -> Result<BigRational> {
    let parse = |s: &str| {
        s.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
    };
    let numer = parse(&pair[0])?;
    let denom = parse(&pair[1])?;
    if denom.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(BigRational::new(numer, denom))
}

#[derive(Serialize, Deserialize)]
struct JTableJson {
    k: usize,
    rows: Vec<Vec<RationalPair>>,
}

impl From<JTable> for JTableJson {
    fn from(t: JTable) -> Self {
        JTableJson {
            k: t.k(),
            rows: t.rows.iter().map(|r| r.iter().map(rational_to_pair).collect()).collect(),
        }
    }
}

impl TryFrom<JTableJson> for JTable {
    type Error = Error;

    fn try_from(j: JTableJson) -> Result<Self> {
        if j.rows.len() != j.k + 1 || j.rows.iter().enumerate().any(|(i, r)| r.len() != i + 1) {
            return Err(Error::Parse("J table rows must be triangular of size k+1".into()));
        }
        let rows = j
            .rows
            .iter()
            .map(|r| r.iter().map(pair_to_rational).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(JTable { rows })
    }
}

#[derive(Serialize, Deserialize)]
struct QFamilyJson {
    polys: Vec<Vec<RationalPair>>,
    profile: Vec<RationalPair>,
}

impl From<QFamily> for QFamilyJson {
    fn from(f: QFamily) -> Self {
        QFamilyJson {
            profile: f.profile().iter().map(rational_to_pair).collect(),
            polys: f
                .polys
                .iter()
                .map(|p| p.coeffs().iter().map(rational_to_pair).collect())
                .collect(),
        }
    }
}

impl TryFrom<QFamilyJson> for QFamily {
    type Error = Error;

    fn try_from(j: QFamilyJson) -> Result<Self> {
        let polys = j
            .polys
            .iter()
            .map(|p| p.iter().map(pair_to_rational).collect::<Result<Vec<_>>>().map(RatPoly::new))
            .collect::<Result<Vec<_>>>()?;
        if polys.is_empty() {
            return Err(Error::Parse("Q family needs at least Q_0".into()));
        }
        let family = QFamily { polys };
        let profile = j.profile.iter().map(pair_to_rational).collect::<Result<Vec<_>>>()?;
        if profile != family.profile() {
            return Err(Error::Parse("profile disagrees with Q_i(1)".into()));
        }
        Ok(family)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn int(v: i64) -> BigRational {
        q(v, 1)
    }

    #[test]
    fn successor_sequence_gives_binomial_table() {
        let t = JTable::build(&JSequence::successors(8), 8).unwrap();
        assert!(t.is_binomial());
        assert_eq!(*t.get(6, 3), int(20));
    }

    #[test]
    fn unit_sequence_gives_unit_table() {
        let t = JTable::build(&JSequence::ones(6), 6).unwrap();
        assert!(t.is_all_ones());
    }

    #[test]
    fn product_formula_example() {
        let seq = JSequence::from_i64s(&[1, 2, 1, 2]).unwrap();
        let t = JTable::build(&seq, 3).unwrap();
        assert_eq!(*t.get(3, 2), int(1));
        assert_eq!(*t.get(3, 1), int(1));
        assert_eq!(*t.get(2, 1), int(2));
    }

    #[test]
    fn invalid_sequences_rejected() {
        assert!(matches!(
            JSequence::from_i64s(&[1, 0, 3]),
            Err(Error::ZeroJEntry { index: 1 })
        ));
        assert!(matches!(JSequence::from_i64s(&[2, 1]), Err(Error::JZeroNotOne { .. })));
        assert!(matches!(
            JTable::build(&JSequence::ones(2), 4),
            Err(Error::ShortJSequence { needed: 4, found: 2 })
        ));
        assert!(matches!(JTable::build(&JSequence::ones(2), 0), Err(Error::InvalidDepth)));
    }

    #[test]
    fn hahn_profile_solves_to_binomials() {
        let f = QFamily::hahn(8).unwrap();
        for i in 0..=8 {
            assert_eq!(f.poly(i), &RatPoly::binomial(i), "Q_{i}");
        }
    }

    #[test]
    fn milnes_profile_solves_to_powers() {
        let f = QFamily::milnes(8).unwrap();
        for i in 0..=8 {
            assert_eq!(f.poly(i), &RatPoly::monomial(int(1), i), "Q_{i}");
        }
    }

    #[test]
    fn depth_one_is_linear() {
        for (seq, c) in [(JSequence::ones(1), int(3)), (JSequence::successors(1), q(-5, 2))] {
            let f = QFamily::solve(&seq, std::slice::from_ref(&c), 1).unwrap();
            assert_eq!(f.poly(1), &RatPoly::new(vec![int(0), c]));
        }
    }

    #[test]
    fn profile_length_checked() {
        assert!(matches!(
            QFamily::solve(&JSequence::ones(3), &[int(1)], 3),
            Err(Error::ProfileLength { needed: 3, found: 1 })
        ));
    }

    #[test]
    fn presets_verify_everywhere() {
        for k in 1..=8 {
            let t = JTable::build(&JSequence::ones(k), k).unwrap();
            assert!(verify_q_family(&t, &QFamily::hahn(k).unwrap()).passed());
            let t = JTable::build(&JSequence::successors(k), k).unwrap();
            let report = verify_q_family(&t, &QFamily::milnes(k).unwrap());
            assert!(report.passed());
            assert_eq!(report.checks.len(), (k + 1) * (k + 2) / 2);
        }
    }

    #[test]
    fn perturbed_power_family_fails_at_2_0() {
        let t = JTable::build(&JSequence::successors(2), 2).unwrap();
        let family = QFamily::from_polys(vec![
            RatPoly::from_i64s(&[1]),
            RatPoly::from_i64s(&[0, 1]),
            RatPoly::from_i64s(&[1, 0, 1]),
        ]);
        let report = verify_q_family(&t, &family);
        let failures: Vec<(usize, usize)> = report.failures().map(|c| (c.i, c.l)).collect();
        assert_eq!(failures, vec![(2, 0)]);
    }

    #[test]
    fn pascal_and_binomial_theorem() {
        let hahn = QFamily::hahn(7).unwrap();
        let milnes = QFamily::milnes(7).unwrap();
        let back = -BigRational::one();
        for i in 1..=7 {
            let pascal = hahn.poly(i).shift(&back).add(&hahn.poly(i - 1).shift(&back));
            assert_eq!(&pascal, hahn.poly(i));
            let expanded = (0..=i).fold(RatPoly::zero(), |acc, j| {
                let c = RatPoly::binomial(j).eval_int(&BigInt::from(i));
                acc.add(&milnes.poly(j).shift(&back).scale(&c))
            });
            assert_eq!(&expanded, milnes.poly(i));
        }
    }

    #[test]
    fn integrality_of_presets() {
        for k in 1..=8 {
            let t = JTable::build(&JSequence::ones(k), k).unwrap();
            assert!(integrality_check(&t, &QFamily::hahn(k).unwrap(), k).integral);
            let t = JTable::build(&JSequence::successors(k), k).unwrap();
            assert!(integrality_check(&t, &QFamily::milnes(k).unwrap(), k).integral);
        }
    }

    #[test]
    fn integrality_violation_has_witness() {
        let seq = JSequence::new(vec![int(1), q(1, 2)]).unwrap();
        let family = QFamily::solve(&seq, &[int(1), int(0)], 2).unwrap();
        let t = JTable::build(&seq, 2).unwrap();
        let report = integrality_check(&t, &family, 2);
        assert!(!report.integral);
        assert_eq!(
            report.witness,
            Some(IntegralityWitness { i: 1, j: 0, value: q(1, 2) })
        );
    }

    #[test]
    fn json_round_trip() {
        let t = JTable::build(&JSequence::successors(4), 4).unwrap();
        let f = QFamily::milnes(4).unwrap();
        let tj = serde_json::to_string(&t).unwrap();
        let fj = serde_json::to_string(&f).unwrap();
        assert!(tj.contains(r#"["6","1"]"#));
        assert_eq!(serde_json::from_str::<JTable>(&tj).unwrap(), t);
        assert_eq!(serde_json::from_str::<QFamily>(&fj).unwrap(), f);
    }

    fn nonzero_rational() -> impl Strategy<Value = BigRational> {
        (1i64..6, 1i64..6, any::<bool>())
            .prop_map(|(p, d, neg)| q(if neg { -p } else { p }, d))
    }

    proptest! {
        #[test]
        fn table_is_generalized_binomial(rest in proptest::collection::vec(nonzero_rational(), 1..7)) {
            let mut values = vec![BigRational::one()];
            values.extend(rest);
            let k = values.len();
            let seq = JSequence::new(values.clone()).unwrap();
            let t = JTable::build(&seq, k).unwrap();
            // F(i) = J_0 J_1 ... J_{i-1}; J(i, l) = F(i) / (F(i-l) F(l)).
            let fact = |i: usize| -> BigRational { values[..i].iter().product() };
            for i in 0..=k {
                prop_assert!(t.get(i, 0).is_one());
                prop_assert!(t.get(i, i).is_one());
                if i >= 1 {
                    prop_assert_eq!(t.get(i, 1), &values[i - 1]);
                }
                for l in 0..=i {
                    prop_assert_eq!(t.get(i, l), &(fact(i) / (fact(i - l) * fact(l))));
                }
            }
        }

        #[test]
        fn solved_families_satisfy_recursion(
            rest in proptest::collection::vec(nonzero_rational(), 0..5),
            profile in proptest::collection::vec((-4i64..5, 1i64..4), 1..6),
        ) {
            let k = profile.len();
            let mut values = vec![BigRational::one()];
            values.extend(rest);
            values.resize(k.max(values.len()), BigRational::one());
            let seq = JSequence::new(values).unwrap();
            let profile: Vec<BigRational> = profile.iter().map(|&(p, d)| q(p, d)).collect();
            let f = QFamily::solve(&seq, &profile, k).unwrap();
            prop_assert_eq!(f.profile(), profile);
            for i in 1..=k {
                prop_assert!(f.poly(i).degree().is_none_or(|d| d <= i));
                prop_assert!(f.poly(i).eval_int(&BigInt::zero()).is_zero());
            }
            let t = JTable::build(&seq, k).unwrap();
            prop_assert!(verify_q_family(&t, &f).passed());
        }
    }
}
