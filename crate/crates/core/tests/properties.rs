mod common;

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use skewflow::ellis::{centre_closure_check, centre_membership, EllisContext, EllisElement};
use skewflow::ergodic::{birkhoff_average, birkhoff_average_sequential, random_starts};
use skewflow::{
    BigInt, CharacterVector, Frac, Generator, Phase, RatPoly, SkewSystem, SymCoord, SymbolicPoint,
    SystemDescriptor, TorusPoint,
};

fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

fn general(seed: u64, k: usize, m: usize, generator: Generator) -> SkewSystem {
    common::random_general_system(&mut ChaCha8Rng::seed_from_u64(seed), k, m, generator)
}

#[test]
fn dual_consistency_sampled() {
    let s = SkewSystem::milnes(4, 1, Generator::golden()).unwrap();
    let gamma = s.generator().phases().unwrap();
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strategy = (proptest::collection::vec(-20i64..20, 4), -500i64..500, any::<u64>());
    for _ in 0..200 {
        let (e, n, seed) = strategy.new_tree(&mut runner).unwrap().current();
        let eta = CharacterVector::from_i64s(&e);
        let x = &random_starts(seed, 1, 4)[0];
        let lhs = eta.eval(&s.power_apply(&int(n), x).unwrap()).unwrap();
        let d = s.dual_power(&eta, &int(n)).unwrap();
        let rhs = d.phase.value(&int(n), &gamma).cis() * d.character.eval(x).unwrap();
        assert!((lhs - rhs).norm() < 1e-9, "eta={e:?} n={n}");
    }
}

#[test]
fn hahn_translation_column_is_pascal() {
    let s = SkewSystem::hahn(6, 1, Generator::Symbolic).unwrap();
    let mut row = vec![int(1)];
    for n in 0..40 {
        let c = s.power_coeffs(&int(n));
        for i in 1..=6 {
            let expected = row.get(i).cloned().unwrap_or_default();
            assert_eq!(c.translation[i - 1], expected, "n={n} i={i}");
        }
        // next row of Pascal's triangle
        let mut next = vec![int(1)];
        next.extend(row.windows(2).map(|w| &w[0] + &w[1]));
        next.push(int(1));
        row = next;
    }
}

#[test]
fn parallel_segments_match_stream_on_general_system() {
    let s = general(11, 3, 2, Generator::Float(vec![Phase::golden(), Phase::sqrt2()]));
    let x = &random_starts(5, 1, 6)[0];
    let eta = CharacterVector::from_i64s(&[1, 0, -1, 2, 0, 1]);
    let par = birkhoff_average(&s, x, &eta, 100_003, None).unwrap();
    let seq = birkhoff_average_sequential(&s, x, &eta, 100_003, None).unwrap();
    for (a, b) in par.checkpoints.iter().zip(&seq.checkpoints) {
        assert!((a.average - b.average).norm() < 1e-9);
    }
}

#[test]
fn ellis_homomorphism_on_general_systems() {
    for seed in 0..5 {
        for k in 2..=5 {
            let s = general(100 + seed, k, 1, Generator::Symbolic);
            let ctx = EllisContext::from_system(&s);
            for a in (-50..=50).step_by(7) {
                for b in (-50..=50).step_by(11) {
                    let check = centre_closure_check(&ctx, &int(a), &int(b)).unwrap();
                    assert!(check.product_equal, "seed={seed} k={k} a={a} b={b}");
                    let e = EllisElement::embed_power(&ctx, &int(a + b)).unwrap();
                    assert!(centre_membership(&e).member);
                }
            }
        }
    }
}

#[test]
fn descriptor_round_trip_general() {
    for seed in 0..10 {
        let s = general(200 + seed, 4, 1, Generator::Rational(vec![Frac::from_ratio(3, 7)]));
        let text = serde_json::to_string(&s.descriptor()).unwrap();
        let rebuilt = SystemDescriptor::from_json(&text).unwrap().build().unwrap();
        assert_eq!(rebuilt.one_step(), s.one_step());
        assert_eq!(rebuilt.qfamily(), s.qfamily());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cocycle_on_general_systems(seed in 0u64..50, k in 1usize..6, a in -40i64..40, b in -40i64..40) {
        let s = general(seed, k, 1, Generator::Symbolic);
        let x = SymbolicPoint(
            (0..k).map(|i| SymCoord { rational: Frac::from_ratio(i as i64 + 2, 17), gamma: int(i as i64 - 1) }).collect(),
        );
        let lhs = s.power_apply_symbolic(&int(a + b), &x).unwrap();
        let rhs = s.power_apply_symbolic(&int(a), &s.power_apply_symbolic(&int(b), &x).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn power_coefficients_are_integer_polynomials(seed in 0u64..50, k in 1usize..6) {
        let s = general(seed, k, 1, Generator::Symbolic);
        for p in s.translation_polys() {
            prop_assert!(p.is_integer_valued());
        }
        prop_assert!(s.qfamily().polys().iter().all(RatPoly::is_integer_valued));
    }

    #[test]
    fn float_orbit_matches_power(seed in any::<u64>(), n in 0u64..300) {
        let s = SkewSystem::milnes(3, 1, Generator::golden()).unwrap();
        let x = &random_starts(seed, 1, 3)[0];
        let streamed = s.orbit(x, n + 1).unwrap().last().unwrap();
        prop_assert_eq!(streamed, s.power_apply(&BigInt::from(n), x).unwrap());
    }

    #[test]
    fn exact_orbit_matches_power(p in 0i64..50, n in 0u64..40) {
        let s = SkewSystem::hahn(3, 1, Generator::Rational(vec![Frac::from_ratio(2, 11)])).unwrap();
        let x = TorusPoint::from_ratios(&[(p, 51), (1, 3), (5, 9)]);
        let streamed = s.orbit(&x, n + 1).unwrap().last().unwrap();
        prop_assert_eq!(streamed, s.power_apply(&BigInt::from(n), &x).unwrap());
    }
}
