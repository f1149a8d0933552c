use super::{Alphabet, Letter, Word};

/// Reduced words over an alphabet in shortlex order, starting with `e`.
///
/// Words are produced length by length; within a length the order is the
/// lexicographic order on letters (id first, positive before negative).
pub struct ShortlexWords {
    letters: Vec<Letter>,
    max_len: usize,
    /// indices into `letters` for the current word
    current: Option<Vec<usize>>,
}

impl ShortlexWords {
    pub fn new(alphabet: &Alphabet, max_len: usize) -> Self {
        ShortlexWords {
            letters: alphabet.letters().collect(),
            max_len,
            current: None,
        }
    }

    fn valid(&self, idx: &[usize]) -> bool {
        idx.windows(2)
            .all(|w| self.letters[w[0]].inverse() != self.letters[w[1]])
    }

    /// Advances `idx` to the next index vector of the same length, skipping
    /// unreduced ones. Returns false when the length is exhausted.
    fn bump(&self, idx: &mut [usize]) -> bool {
        let n = self.letters.len();
        loop {
            let mut pos = idx.len();
            loop {
                if pos == 0 {
                    return false;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < n {
                    break;
                }
                idx[pos] = 0;
            }
            if self.valid(idx) {
                return true;
            }
        }
    }
}

impl Iterator for ShortlexWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let next = match self.current.take() {
            None => Vec::new(),
            Some(mut idx) => {
                if self.letters.is_empty() {
                    return None;
                }
                if !self.bump(&mut idx) {
                    let len = idx.len() + 1;
                    if len > self.max_len {
                        return None;
                    }
                    idx = vec![0; len];
                    if !self.valid(&idx) && !self.bump(&mut idx) {
                        return None;
                    }
                }
                idx
            }
        };
        let w = Word::from_letters(next.iter().map(|&i| self.letters[i]));
        self.current = Some(next);
        Some(w)
    }
}
