//! Seeded random generators for words, subgroups, flowers and automorphism
//! sequences used by the randomized suites.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use stallings::{
    Alphabet, EndomorphismSpec, InverseAutomaton, Letter, MultiAutomaton, Nielsen, ReducedWord,
    TransitionMonoid, Word,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random reduced word of exactly the given length.
pub fn random_reduced_word(rng: &mut ChaCha8Rng, alphabet: &Alphabet, len: usize) -> ReducedWord {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    for _ in 0..len {
        loop {
            let generator = rng.random_range(0..alphabet.len());
            let letter = if rng.random_bool(0.5) {
                Letter::positive(generator)
            } else {
                Letter::negative(generator)
            };
            if letters.last().is_some_and(|l| l.cancels(&letter)) {
                continue;
            }
            letters.push(letter);
            break;
        }
    }
    Word::new(letters).reduce()
}

/// A random generating set: up to `max_generators` nonempty reduced words of
/// length at most `max_len`.
pub fn random_generators(
    rng: &mut ChaCha8Rng,
    alphabet: &Alphabet,
    max_generators: usize,
    max_len: usize,
) -> Vec<ReducedWord> {
    let count = rng.random_range(1..=max_generators);
    (0..count)
        .map(|_| {
            let len = rng.random_range(1..=max_len);
            random_reduced_word(rng, alphabet, len)
        })
        .collect()
}

/// A random connected multi-automaton shaped like a flower of random petals,
/// for fold-confluence testing.
pub fn random_flower(
    rng: &mut ChaCha8Rng,
    alphabet: &Alphabet,
    max_generators: usize,
    max_len: usize,
) -> MultiAutomaton {
    let generators = random_generators(rng, alphabet, max_generators, max_len);
    MultiAutomaton::flower(alphabet.clone(), &generators).expect("gens over this alphabet")
}

/// A random elementary Nielsen automorphism. Requires at least two
/// generators.
pub fn random_nielsen(rng: &mut ChaCha8Rng, alphabet: &Alphabet) -> Nielsen {
    let n = alphabet.len();
    let a = rng.random_range(0..n);
    match rng.random_range(0..3) {
        0 => Nielsen::Alpha(a),
        kind => {
            let b = loop {
                let b = rng.random_range(0..n);
                if b != a {
                    break b;
                }
            };
            if kind == 1 {
                Nielsen::Beta(a, b)
            } else {
                Nielsen::BetaInv(a, b)
            }
        }
    }
}

/// A random sequence of elementary automorphisms of length `1..=max_len`,
/// with its composite.
pub fn random_nielsen_sequence(
    rng: &mut ChaCha8Rng,
    alphabet: &Alphabet,
    max_len: usize,
) -> (Vec<Nielsen>, EndomorphismSpec) {
    let len = rng.random_range(1..=max_len);
    let seq: Vec<Nielsen> = (0..len).map(|_| random_nielsen(rng, alphabet)).collect();
    let spec = EndomorphismSpec::nielsen_sequence(alphabet, &seq).expect("valid sequence");
    (seq, spec)
}

/// A random subgroup automaton whose transition monoid stays within
/// `monoid_cap` elements; draws until one qualifies.
pub fn random_bounded_subgroup(
    rng: &mut ChaCha8Rng,
    alphabet: &Alphabet,
    max_generators: usize,
    max_len: usize,
    monoid_cap: usize,
) -> (Vec<ReducedWord>, InverseAutomaton) {
    loop {
        let generators = random_generators(rng, alphabet, max_generators, max_len);
        let aut = InverseAutomaton::stallings(alphabet.clone(), &generators)
            .expect("gens over this alphabet");
        if TransitionMonoid::generate(&aut, monoid_cap).is_ok() {
            return (generators, aut);
        }
    }
}
