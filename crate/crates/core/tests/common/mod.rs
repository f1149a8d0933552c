//! Naive reference implementations shared by the integration tests.

#![allow(dead_code)]

use fgtop_core::nbhd::CanonicalRep;
use fgtop_core::word::{Dir, Letter, Sign, Word, MATERIALIZE_CAP};
use rand::Rng;

/// Free reduction with a stack over the flattened letters.
pub fn reduce(parts: &[&Word]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for p in parts {
        for l in p.flatten(MATERIALIZE_CAP).expect("small word") {
            if out.last().is_some_and(|q| q.inverse() == l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
    }
    out
}

pub fn flat(w: &Word) -> Vec<Letter> {
    w.flatten(MATERIALIZE_CAP).expect("small word")
}

/// The certified word equals the product of the flattened derivation.
pub fn rep_product_ok(rep: &CanonicalRep) -> bool {
    let parts = rep.flatten();
    let refs: Vec<&Word> = parts.iter().collect();
    rep.word.flatten(MATERIALIZE_CAP).is_some_and(|w| w == reduce(&refs))
}

/// A random word over generators `0..gens` mixing single letters and short
/// runs.
pub fn random_word<R: Rng>(rng: &mut R, gens: u64, max_pieces: usize) -> Word {
    let mut w = Word::e();
    for _ in 0..rng.gen_range(0..=max_pieces) {
        let sign = if rng.gen_bool(0.5) { Sign::Pos } else { Sign::Neg };
        let piece = if rng.gen_bool(0.25) {
            let len = rng.gen_range(1..=6);
            let start = rng.gen_range(0..gens) + 6;
            let dir = if rng.gen_bool(0.5) { Dir::Asc } else { Dir::Desc };
            Word::run(start, len, dir, sign).expect("run in range")
        } else {
            let id = rng.gen_range(0..gens);
            Word::letter(Letter::new(fgtop_core::word::GeneratorId(id), sign))
        };
        w = w.mul(&piece);
    }
    w
}
