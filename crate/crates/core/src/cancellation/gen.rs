use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_hypothesis, make_setting, ConjSetting, HypInstance};
use crate::word::{Alphabet, Dir, GeneratorId, Letter, Sign, Word};

/// Parameters for random instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub x: Alphabet,
    /// largest number of `v_i` factors
    pub n_max: usize,
    pub k: u64,
    /// longest random word over `X`
    pub word_len: usize,
    /// pick `j0` uniformly instead of `j0 = 1`
    pub uniform_j0: bool,
    /// randomly modify words and keep the change when the hypothesis holds
    pub perturb: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            x: Alphabet::block(0, 3),
            n_max: 6,
            k: 6,
            word_len: 4,
            uniform_j0: true,
            perturb: true,
        }
    }
}

/// Deterministic stream of random instances.
pub struct InstanceStream {
    rng: ChaCha8Rng,
    params: GenParams,
    same_sign: bool,
}

/// Instances satisfying the hypothesis: signs are balanced brackets and the
/// closing words undo what lies between each bracket pair.
pub fn gen_instances(seed: u64, params: GenParams) -> InstanceStream {
    InstanceStream {
        rng: ChaCha8Rng::seed_from_u64(seed),
        params,
        same_sign: false,
    }
}

/// Instances whose signs are all equal; `h*` is unconstrained.
pub fn gen_same_sign_instances(seed: u64, params: GenParams) -> InstanceStream {
    InstanceStream {
        rng: ChaCha8Rng::seed_from_u64(seed),
        params,
        same_sign: true,
    }
}

impl Iterator for InstanceStream {
    type Item = HypInstance;

    fn next(&mut self) -> Option<HypInstance> {
        Some(if self.same_sign { self.same_sign() } else { self.balanced() })
    }
}

impl InstanceStream {
    fn x_word(&mut self, min: usize) -> Word {
        let letters: Vec<Letter> = self.params.x.letters().collect();
        let len = self.rng.gen_range(min..=self.params.word_len.max(min));
        random_word(&mut self.rng, &letters, len)
    }

    fn setting(&mut self) -> (ConjSetting, u64) {
        let g = self.x_word(1);
        let h = if self.rng.gen_bool(0.3) { Word::e() } else { self.x_word(0) };
        let fresh = self.params.x.fresh_start(23);
        let s = make_setting(&self.params.x, &g, &h, &BigUint::from(self.params.k), GeneratorId(fresh))
            .expect("valid generator parameters");
        let j0 = if self.params.uniform_j0 { self.rng.gen_range(1..=s.k) } else { 1 };
        (s, j0)
    }

    /// A word over `X` and the fresh letters other than `y_{j0}`, with
    /// occasional runs and pieces of `f`.
    fn mixed_word(&mut self, s: &ConjSetting, j0: u64) -> Word {
        let mut pieces = Vec::new();
        for _ in 0..self.rng.gen_range(0..=3) {
            let p = match self.rng.gen_range(0..5) {
                0 | 1 => self.x_word(1),
                2 => {
                    let i = self.rng.gen_range(1..=s.k);
                    if i == j0 {
                        Word::e()
                    } else {
                        let w = Word::gen(s.y_id(i));
                        if self.rng.gen_bool(0.5) { w } else { w.inverse() }
                    }
                }
                _ => {
                    // a run of fresh letters on one side of j0
                    let (lo, hi) = if j0 > 1 && (j0 == s.k || self.rng.gen_bool(0.5)) {
                        (1, j0 - 1)
                    } else if j0 < s.k {
                        (j0 + 1, s.k)
                    } else {
                        continue;
                    };
                    let a = self.rng.gen_range(lo..=hi);
                    let b = self.rng.gen_range(a..=hi);
                    let dir = if self.rng.gen_bool(0.5) { Dir::Asc } else { Dir::Desc };
                    let start = if dir == Dir::Asc { a } else { b };
                    let sign = if self.rng.gen_bool(0.5) { Sign::Pos } else { Sign::Neg };
                    Word::run(s.y_id(start), b - a + 1, dir, sign).expect("inside the fresh block")
                }
            };
            pieces.push(p);
        }
        Word::product(pieces.iter())
    }

    fn balanced(&mut self) -> HypInstance {
        let (s, j0) = self.setting();
        let pairs = self.rng.gen_range(0..=self.params.n_max / 2);
        let n = 2 * pairs;
        // random bracket sequence: open[i] = Some(closing index)
        let mut signs = vec![0i8; n];
        let mut partner = vec![usize::MAX; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut opens_left = pairs;
        for i in 0..n {
            let can_close = !stack.is_empty();
            let must_close = opens_left == 0;
            if must_close || (can_close && self.rng.gen_bool(0.5)) {
                let o = stack.pop().expect("open bracket");
                partner[o] = i;
                partner[i] = o;
                signs[i] = -signs[o];
            } else {
                opens_left -= 1;
                stack.push(i);
                signs[i] = if self.rng.gen_bool(0.5) { 1 } else { -1 };
            }
        }
        // depth of w_{i+1} (0-based index i): number of open brackets before it
        let mut w: Vec<Word> = Vec::with_capacity(n + 1);
        let mut depth = 0usize;
        for i in 0..=n {
            if i > 0 {
                if partner[i - 1] > i - 1 {
                    depth += 1;
                } else {
                    depth -= 1;
                }
            }
            w.push(if depth == 0 { self.x_word(0) } else { self.mixed_word(&s, j0) });
        }
        let mut inst = HypInstance { setting: s, w, signs, j0 };
        // closing words cancel everything between their pair
        for (j, &o) in partner.iter().enumerate().take(n) {
            if o < j {
                let vs: Vec<Word> = (o + 1..j).map(|t| inst.v(t)).collect();
                let mut pieces: Vec<&Word> = Vec::new();
                for t in o + 1..j {
                    pieces.push(&inst.w[t]);
                    pieces.push(&vs[t - o - 1]);
                }
                inst.w[j] = Word::product(pieces).inverse();
            }
        }
        if self.params.perturb {
            self.perturb(&mut inst);
        }
        debug_assert!(check_hypothesis(&inst));
        inst
    }

    fn perturb(&mut self, inst: &mut HypInstance) {
        let letters: Vec<Letter> = self.params.x.letters().collect();
        for _ in 0..2 {
            let i = self.rng.gen_range(0..inst.w.len());
            let l = *letters.choose(&mut self.rng).expect("X is non-empty");
            let old = inst.w[i].clone();
            inst.w[i] = if self.rng.gen_bool(0.5) {
                old.mul(&Word::letter(l))
            } else {
                Word::letter(l).mul(&old)
            };
            if inst.w[i].contains_gen(inst.setting.y_id(inst.j0)) || !check_hypothesis(inst) {
                inst.w[i] = old;
            }
        }
    }

    fn same_sign(&mut self) -> HypInstance {
        let (s, j0) = self.setting();
        let n = self.rng.gen_range(1..=self.params.n_max.max(1));
        let sign = if self.rng.gen_bool(0.5) { 1 } else { -1 };
        let w = (0..=n).map(|_| self.mixed_word(&s, j0)).collect();
        HypInstance {
            setting: s,
            w,
            signs: vec![sign; n],
            j0,
        }
    }
}

/// A uniformly random reduced word of the given length.
pub(crate) fn random_word<R: Rng>(rng: &mut R, letters: &[Letter], len: usize) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(len);
    while out.len() < len {
        let l = *letters.choose(rng).expect("non-empty letter pool");
        if out.last().is_some_and(|p| p.inverse() == l) {
            continue;
        }
        out.push(l);
    }
    Word::from_letters(out)
}
