use rand::Rng;
use rand_chacha::ChaCha8Rng;
use skewflow::{BigRational, Generator, JSequence, Kind, SkewSystem};

/// A random system with small integer `J` and profile that passes validation
/// and is neither preset.
pub fn random_general_system(rng: &mut ChaCha8Rng, k: usize, m: usize, generator: Generator) -> SkewSystem {
    loop {
        let mut j = vec![1i64];
        for _ in 1..k {
            let v = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
            j.push(v);
        }
        let profile: Vec<BigRational> = (0..k)
            .map(|_| BigRational::from_integer(rng.gen_range(-2i64..=2).into()))
            .collect();
        let seq = JSequence::from_i64s(&j).expect("nonzero entries");
        if let Ok(s) = SkewSystem::new(seq, &profile, k, m, generator.clone()) {
            if s.kind() == Kind::General {
                return s;
            }
        }
    }
}
