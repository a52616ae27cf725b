//! Deterministic random instances for the verification drivers: rational
//! points, realizations, and double reduced words.
//!
//! Every sampler takes an explicit RNG; trial drivers derive one stream per
//! trial index from the run seed, so identical `(command, rngSeed)` pairs
//! reproduce byte-identical output and trials stay independent.

use crate::cartan::{preset, CartanCore, CartanRealization};
use crate::rat::{q, IMat, Q};
use crate::seed::DoubleWord;
use crate::weyl;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// RNG stream for one trial of one run.
pub fn rng_for(run_seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
    rng.set_stream(trial);
    rng
}

/// Positive rational with numerator and denominator in `1..=bound`.
pub fn positive_rational(rng: &mut ChaCha8Rng, bound: i64) -> Q {
    q(rng.gen_range(1..=bound), rng.gen_range(1..=bound))
}

/// Nonzero rational with numerator in `-bound..=bound` and denominator in
/// `1..=bound`.
pub fn nonzero_rational(rng: &mut ChaCha8Rng, bound: i64) -> Q {
    let mut num = 0;
    while num == 0 {
        num = rng.gen_range(-bound..=bound);
    }
    q(num, rng.gen_range(1..=bound))
}

pub fn positive_vector(rng: &mut ChaCha8Rng, len: usize, bound: i64) -> Vec<Q> {
    (0..len).map(|_| positive_rational(rng, bound)).collect()
}

/// A realization of one of the four preset types; the rank-deficient affine
/// type gets a random valid extension (unit-row fallback when the random
/// rows stay degenerate).
pub fn random_realization(rng: &mut ChaCha8Rng) -> Arc<CartanRealization> {
    let name = ["A2", "B2", "G2", "A1affine"][rng.gen_range(0..4)];
    if name != "A1affine" {
        return Arc::new(preset(name).unwrap());
    }
    let core = CartanCore::validate(&[vec![2, -2], vec![-2, 2]]).unwrap();
    for _ in 0..10 {
        let row: Vec<i64> = (0..2).map(|_| rng.gen_range(-2..=2)).collect();
        let ext = IMat::from_rows(&[row]);
        if let Ok(real) = CartanRealization::extend(core.clone(), Some(ext)) {
            return Arc::new(real);
        }
    }
    Arc::new(CartanRealization::extend(core, None).unwrap())
}

/// A random double reduced word of length at most `max_len`, built by
/// extending one side at a time and keeping only letters that leave the
/// side reduced. In finite types the word may stop early once both sides
/// reach the longest element.
pub fn random_double_word(
    rng: &mut ChaCha8Rng,
    real: &Arc<CartanRealization>,
    max_len: usize,
) -> DoubleWord {
    let r = real.r();
    let mut letters: Vec<i64> = Vec::new();
    let mut u_word: Vec<usize> = Vec::new();
    let mut v_word: Vec<usize> = Vec::new();
    let mut stuck = 0;
    while letters.len() < max_len && stuck < 4 * r {
        let i = rng.gen_range(1..=r);
        let positive = rng.gen_bool(0.5);
        let side = if positive { &mut v_word } else { &mut u_word };
        side.push(i);
        if weyl::is_reduced_word(real, side).unwrap() {
            letters.push(if positive { i as i64 } else { -(i as i64) });
            stuck = 0;
        } else {
            side.pop();
            stuck += 1;
        }
    }
    DoubleWord::parse(real.clone(), &letters).expect("constructed word is reduced by construction")
}

/// A random reduced word of exact length `len` for the Weyl group of the
/// realization, when one exists.
pub fn random_reduced_word(
    rng: &mut ChaCha8Rng,
    real: &Arc<CartanRealization>,
    len: usize,
) -> Option<Vec<usize>> {
    'outer: for _ in 0..50 {
        let mut word = Vec::new();
        for _ in 0..len {
            let mut found = false;
            for _ in 0..4 * real.r() {
                let i = rng.gen_range(1..=real.r());
                word.push(i);
                if weyl::is_reduced_word(real, &word).unwrap() {
                    found = true;
                    break;
                }
                word.pop();
            }
            if !found {
                continue 'outer;
            }
        }
        return Some(word);
    }
    None
}
