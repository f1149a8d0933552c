//! Reduced words in a free group over a countable generator set.
//!
//! A [`Word`] is kept in a canonical run-compressed form: maximal runs of
//! consecutive generator ids with a common sign and direction are stored as
//! a single descriptor once they reach [`RUN_MIN`] letters, everything else
//! is stored letter by letter. Canonical form makes structural equality the
//! same as equality of the flattened letter sequences.

mod alphabet;
pub(crate) mod enumerate;
pub mod text;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

pub use alphabet::Alphabet;
pub use enumerate::ShortlexWords;

/// Runs shorter than this are stored as explicit letters.
pub const RUN_MIN: u64 = 4;

/// Default cap on the number of letters [`Word::flatten`] will materialize.
pub const MATERIALIZE_CAP: u128 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("operation needs a non-trivial word")]
    EmptyWord,
    #[error("cyclic generator must not be the identity")]
    EmptyGenerator,
    #[error("generator id space exhausted: {0}")]
    IdOverflow(String),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorId(pub u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

/// A generator or its inverse. Letters order by id, positive before negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: GeneratorId,
    pub sign: Sign,
}

impl Letter {
    pub fn new(gen: GeneratorId, sign: Sign) -> Self {
        Letter { gen, sign }
    }

    pub fn pos(id: u64) -> Self {
        Letter::new(GeneratorId(id), Sign::Pos)
    }

    pub fn neg(id: u64) -> Self {
        Letter::new(GeneratorId(id), Sign::Neg)
    }

    pub fn inverse(self) -> Self {
        Letter::new(self.gen, self.sign.flip())
    }

    pub fn id(self) -> u64 {
        self.gen.0
    }
}

/// A possibly unreduced sequence of letters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawWord(pub Vec<Letter>);

impl RawWord {
    pub fn reduce(&self) -> Word {
        Word::from_letters(self.0.iter().copied())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Asc,
    Desc,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Asc => Dir::Desc,
            Dir::Desc => Dir::Asc,
        }
    }
}

/// `len` letters with consecutive ids starting at `start`, all of one sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Run {
    pub start: u64,
    pub len: u64,
    pub dir: Dir,
    pub sign: Sign,
}

impl Run {
    fn id_at(&self, t: u64) -> u64 {
        match self.dir {
            Dir::Asc => self.start + t,
            Dir::Desc => self.start - t,
        }
    }

    pub fn first_id(&self) -> u64 {
        self.start
    }

    pub fn last_id(&self) -> u64 {
        self.id_at(self.len - 1)
    }

    pub fn min_id(&self) -> u64 {
        self.first_id().min(self.last_id())
    }

    pub fn max_id(&self) -> u64 {
        self.first_id().max(self.last_id())
    }

    fn letter(&self, t: u64) -> Letter {
        Letter::new(GeneratorId(self.id_at(t)), self.sign)
    }

    fn drop_front(&self, c: u64) -> Run {
        if c >= self.len {
            return Run { len: 0, ..*self };
        }
        Run {
            start: self.id_at(c),
            len: self.len - c,
            ..*self
        }
    }

    fn drop_back(&self, c: u64) -> Run {
        Run {
            len: self.len - c,
            ..*self
        }
    }

    fn take_front(&self, c: u64) -> Run {
        Run { len: c, ..*self }
    }

    pub fn inverse(&self) -> Run {
        Run {
            start: self.last_id(),
            len: self.len,
            dir: self.dir.flip(),
            sign: self.sign.flip(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Segment {
    Explicit(Vec<Letter>),
    Run(Run),
}

impl Segment {
    fn view(&self) -> View<'_> {
        match self {
            Segment::Explicit(v) => View::Letters(v),
            Segment::Run(r) => View::Run(*r),
        }
    }

    pub fn len(&self) -> u64 {
        self.view().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A borrowed, possibly trimmed, segment.
#[derive(Clone, Copy, Debug)]
enum View<'a> {
    Letters(&'a [Letter]),
    Run(Run),
}

impl<'a> View<'a> {
    fn len(&self) -> u64 {
        match self {
            View::Letters(v) => v.len() as u64,
            View::Run(r) => r.len,
        }
    }

    fn letter(&self, t: u64) -> Letter {
        match self {
            View::Letters(v) => v[t as usize],
            View::Run(r) => r.letter(t),
        }
    }

    fn letter_from_end(&self, t: u64) -> Letter {
        self.letter(self.len() - 1 - t)
    }

    fn drop_front(&self, c: u64) -> View<'a> {
        match self {
            View::Letters(v) => View::Letters(&v[c as usize..]),
            View::Run(r) => View::Run(r.drop_front(c)),
        }
    }

    fn drop_back(&self, c: u64) -> View<'a> {
        match self {
            View::Letters(v) => View::Letters(&v[..v.len() - c as usize]),
            View::Run(r) => View::Run(r.drop_back(c)),
        }
    }

    fn take_front(&self, c: u64) -> View<'a> {
        match self {
            View::Letters(v) => View::Letters(&v[..c as usize]),
            View::Run(r) => View::Run(r.take_front(c)),
        }
    }

    fn inverse_into(&self, out: &mut Builder) {
        match self {
            View::Letters(v) => {
                for l in v.iter().rev() {
                    out.push_letter(l.inverse());
                }
            }
            View::Run(r) => out.push_run(r.inverse()),
        }
    }
}

/// Number of letters cancelling at the junction of `a` (read backwards from
/// its end) and `b` (read from its start).
fn view_cancel(a: &View<'_>, b: &View<'_>) -> u64 {
    if a.len() == 0 || b.len() == 0 {
        return 0;
    }
    if let (View::Run(ra), View::Run(rb)) = (a, b) {
        if ra.letter(ra.len - 1).inverse() != rb.letter(0) {
            return 0;
        }
        if rb.dir == ra.dir.flip() {
            return ra.len.min(rb.len);
        }
        return 1;
    }
    let m = a.len().min(b.len());
    let mut t = 0;
    while t < m && a.letter_from_end(t).inverse() == b.letter(t) {
        t += 1;
    }
    t
}

enum Piece {
    Letters(Vec<Letter>),
    Run(Run),
}

impl Piece {
    fn view(&self) -> View<'_> {
        match self {
            Piece::Letters(v) => View::Letters(v),
            Piece::Run(r) => View::Run(*r),
        }
    }
}

/// Free reduction followed by canonical run compression.
struct Builder {
    stack: Vec<Piece>,
}

impl Builder {
    fn new() -> Self {
        Builder { stack: Vec::new() }
    }

    fn push_letter(&mut self, l: Letter) {
        match self.stack.last_mut() {
            Some(Piece::Letters(v)) => {
                if v.last() == Some(&l.inverse()) {
                    v.pop();
                    if v.is_empty() {
                        self.stack.pop();
                    }
                } else {
                    v.push(l);
                }
            }
            Some(Piece::Run(r)) => {
                if r.letter(r.len - 1).inverse() == l {
                    if r.len == 1 {
                        self.stack.pop();
                    } else {
                        *r = r.drop_back(1);
                    }
                } else {
                    self.stack.push(Piece::Letters(vec![l]));
                }
            }
            None => self.stack.push(Piece::Letters(vec![l])),
        }
    }

    fn push_run(&mut self, run: Run) {
        let mut run = run;
        loop {
            if run.len == 0 {
                return;
            }
            let Some(top) = self.stack.last_mut() else {
                self.stack.push(Piece::Run(run));
                return;
            };
            let c = view_cancel(&top.view(), &View::Run(run));
            if c == 0 {
                self.stack.push(Piece::Run(run));
                return;
            }
            let top_len = top.view().len();
            if c == top_len {
                self.stack.pop();
            } else {
                match top {
                    Piece::Letters(v) => v.truncate(v.len() - c as usize),
                    Piece::Run(r) => *r = r.drop_back(c),
                }
            }
            run = run.drop_front(c);
            if c < top_len {
                // the top survived, so nothing further cancels
                if run.len > 0 {
                    self.stack.push(Piece::Run(run));
                }
                return;
            }
        }
    }

    fn push_view(&mut self, v: View<'_>) {
        match v {
            View::Letters(ls) => {
                for &l in ls {
                    self.push_letter(l);
                }
            }
            View::Run(r) => {
                if r.len < RUN_MIN {
                    for t in 0..r.len {
                        self.push_letter(r.letter(t));
                    }
                } else {
                    self.push_run(r);
                }
            }
        }
    }

    fn push_word(&mut self, w: &Word) {
        for s in &w.segs {
            self.push_view(s.view());
        }
    }

    fn push_inverse(&mut self, w: &Word) {
        for s in w.segs.iter().rev() {
            s.view().inverse_into(self);
        }
    }

    fn finish(self) -> Word {
        let mut c = Canon::default();
        for p in &self.stack {
            match p {
                Piece::Letters(v) => {
                    for &l in v {
                        c.push_letter(l);
                    }
                }
                Piece::Run(r) => c.push_run(*r),
            }
        }
        c.finish()
    }
}

/// Greedy left-to-right maximal run detection on an already reduced sequence.
#[derive(Default)]
struct Canon {
    out: Vec<Segment>,
    buf: Vec<Letter>,
    open: Option<OpenRun>,
}

#[derive(Clone, Copy)]
struct OpenRun {
    start: u64,
    len: u64,
    dir: Option<Dir>,
    sign: Sign,
}

impl OpenRun {
    fn last(&self) -> u64 {
        match self.dir {
            None | Some(Dir::Asc) => self.start + (self.len - 1),
            Some(Dir::Desc) => self.start - (self.len - 1),
        }
    }

    fn step_dir(&self, id: u64) -> Option<Dir> {
        let last = self.last();
        if last.checked_add(1) == Some(id) {
            Some(Dir::Asc)
        } else if last.checked_sub(1) == Some(id) {
            Some(Dir::Desc)
        } else {
            None
        }
    }
}

impl Canon {
    fn push_letter(&mut self, l: Letter) {
        if let Some(o) = self.open.as_mut() {
            if o.sign == l.sign {
                if let Some(d) = o.step_dir(l.id()) {
                    if o.dir.is_none() || o.dir == Some(d) {
                        o.dir = Some(d);
                        o.len += 1;
                        return;
                    }
                }
            }
        }
        self.close();
        self.open = Some(OpenRun {
            start: l.id(),
            len: 1,
            dir: None,
            sign: l.sign,
        });
    }

    fn push_run(&mut self, r: Run) {
        self.push_letter(r.letter(0));
        if r.len == 1 {
            return;
        }
        let rest = r.drop_front(1);
        let o = self.open.as_mut().expect("open run present");
        if o.len == 1 || o.dir == Some(r.dir) {
            o.dir = Some(r.dir);
            o.len += rest.len;
            return;
        }
        self.close();
        self.open = Some(OpenRun {
            start: rest.start,
            len: rest.len,
            dir: if rest.len >= 2 { Some(r.dir) } else { None },
            sign: r.sign,
        });
    }

    fn close(&mut self) {
        let Some(o) = self.open.take() else { return };
        if o.len >= RUN_MIN {
            if !self.buf.is_empty() {
                self.out.push(Segment::Explicit(std::mem::take(&mut self.buf)));
            }
            self.out.push(Segment::Run(Run {
                start: o.start,
                len: o.len,
                dir: o.dir.expect("runs of length >= 2 have a direction"),
                sign: o.sign,
            }));
        } else {
            let dir = o.dir.unwrap_or(Dir::Asc);
            let r = Run {
                start: o.start,
                len: o.len,
                dir,
                sign: o.sign,
            };
            for t in 0..o.len {
                self.buf.push(r.letter(t));
            }
        }
    }

    fn finish(mut self) -> Word {
        self.close();
        if !self.buf.is_empty() {
            self.out.push(Segment::Explicit(self.buf));
        }
        Word { segs: self.out }
    }
}

/// A reduced word in canonical run-compressed form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    segs: Vec<Segment>,
}

impl Word {
    pub fn e() -> Word {
        Word { segs: Vec::new() }
    }

    pub fn is_e(&self) -> bool {
        self.segs.is_empty()
    }

    pub fn letter(l: Letter) -> Word {
        Word {
            segs: vec![Segment::Explicit(vec![l])],
        }
    }

    /// The positive letter with the given id.
    pub fn gen(id: u64) -> Word {
        Word::letter(Letter::pos(id))
    }

    /// Reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut b = Builder::new();
        for l in letters {
            b.push_letter(l);
        }
        b.finish()
    }

    /// `y_start · y_{start+1} ⋯ y_{start+k−1}`, stored as one run.
    pub fn fresh_run(start: GeneratorId, k: &BigUint) -> Result<Word, WordError> {
        let k = k
            .to_u64()
            .ok_or_else(|| WordError::IdOverflow(format!("run length {k} exceeds 64 bits")))?;
        Word::run(start.0, k, Dir::Asc, Sign::Pos)
    }

    /// A run of `len ≥ 1` consecutive ids.
    pub fn run(start: u64, len: u64, dir: Dir, sign: Sign) -> Result<Word, WordError> {
        if len == 0 {
            return Err(WordError::EmptyWord);
        }
        let ok = match dir {
            Dir::Asc => start.checked_add(len - 1).is_some(),
            Dir::Desc => start.checked_sub(len - 1).is_some(),
        };
        if !ok {
            return Err(WordError::IdOverflow(format!(
                "run of {len} letters from id {start} leaves the id space"
            )));
        }
        let mut c = Canon::default();
        c.push_run(Run {
            start,
            len,
            dir,
            sign,
        });
        Ok(c.finish())
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segs
    }

    pub fn segment_count(&self) -> usize {
        self.segs.len()
    }

    pub fn len(&self) -> u128 {
        self.segs.iter().map(|s| s.len() as u128).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.segs.is_empty()
    }

    pub fn length(&self) -> BigUint {
        BigUint::from(self.len())
    }

    pub fn first_letter(&self) -> Option<Letter> {
        self.segs.first().map(|s| s.view().letter(0))
    }

    pub fn last_letter(&self) -> Option<Letter> {
        self.segs.last().map(|s| s.view().letter_from_end(0))
    }

    pub fn mul(&self, other: &Word) -> Word {
        if self.is_e() {
            return other.clone();
        }
        if other.is_e() {
            return self.clone();
        }
        let mut b = Builder::new();
        b.push_word(self);
        b.push_word(other);
        b.finish()
    }

    /// Reduced product of a sequence of words.
    pub fn product<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> Word {
        let mut b = Builder::new();
        for w in words {
            b.push_word(w);
        }
        b.finish()
    }

    pub fn inverse(&self) -> Word {
        let mut b = Builder::new();
        b.push_inverse(self);
        b.finish()
    }

    pub fn pow(&self, k: i64) -> Word {
        if k == 0 || self.is_e() {
            return Word::e();
        }
        let (p, c) = self.cyclic_decompose().expect("non-trivial word");
        let cc = if k < 0 { c.inverse() } else { c };
        let mut b = Builder::new();
        b.push_word(&p);
        for _ in 0..k.unsigned_abs() {
            b.push_word(&cc);
        }
        b.push_inverse(&p);
        b.finish()
    }

    /// `self · w · self⁻¹`.
    pub fn conjugate(&self, w: &Word) -> Word {
        let mut b = Builder::new();
        b.push_word(self);
        b.push_word(w);
        b.push_inverse(self);
        b.finish()
    }

    /// True iff no cancellation happens at the junction of `self · other`.
    pub fn is_concatenation(&self, other: &Word) -> bool {
        match (self.last_letter(), other.first_letter()) {
            (Some(a), Some(b)) => a.inverse() != b,
            _ => true,
        }
    }

    /// Number of letters of `self` (equivalently of `other`) that cancel in
    /// the product `self · other`.
    pub fn junction_cancel(&self, other: &Word) -> u128 {
        let mut total: u128 = 0;
        let mut i = self.segs.len();
        let mut a_trim = 0u64;
        let mut j = 0usize;
        let mut b_trim = 0u64;
        while i > 0 && j < other.segs.len() {
            let a = self.segs[i - 1].view().drop_back(a_trim);
            let b = other.segs[j].view().drop_front(b_trim);
            let c = view_cancel(&a, &b);
            total += c as u128;
            let a_done = c == a.len();
            let b_done = c == b.len();
            if !a_done && !b_done {
                break;
            }
            if a_done {
                i -= 1;
                a_trim = 0;
            } else {
                a_trim += c;
            }
            if b_done {
                j += 1;
                b_trim = 0;
            } else {
                b_trim += c;
            }
            if c == 0 {
                break;
            }
        }
        total
    }

    fn slice(&self, from: u128, to: u128) -> Word {
        let mut c = Canon::default();
        let mut pos: u128 = 0;
        for s in &self.segs {
            let l = s.len() as u128;
            let (lo, hi) = (pos, pos + l);
            pos = hi;
            if hi <= from || lo >= to {
                continue;
            }
            let a = from.max(lo) - lo;
            let b = to.min(hi) - lo;
            let v = s.view().drop_front(a as u64).take_front((b - a) as u64);
            match v {
                View::Letters(ls) => {
                    for &x in ls {
                        c.push_letter(x);
                    }
                }
                View::Run(r) => c.push_run(r),
            }
        }
        c.finish()
    }

    /// The first `n` letters (clamped to the length).
    pub fn prefix(&self, n: u128) -> Word {
        self.slice(0, n)
    }

    /// The last `n` letters (clamped to the length).
    pub fn suffix(&self, n: u128) -> Word {
        let len = self.len();
        self.slice(len.saturating_sub(n), len)
    }

    pub fn drop_prefix(&self, n: u128) -> Word {
        self.slice(n, self.len())
    }

    pub fn drop_suffix(&self, n: u128) -> Word {
        let len = self.len();
        self.slice(0, len.saturating_sub(n))
    }

    pub fn split_at(&self, n: u128) -> (Word, Word) {
        (self.prefix(n), self.drop_prefix(n))
    }

    /// Letter positions where a segment starts, plus the length. Useful as
    /// split candidates that respect the compressed structure.
    pub fn segment_boundaries(&self) -> Vec<u128> {
        let mut out = Vec::with_capacity(self.segs.len() + 1);
        let mut pos = 0u128;
        out.push(0);
        for s in &self.segs {
            pos += s.len() as u128;
            out.push(pos);
        }
        out
    }

    pub fn letters(&self) -> Alphabet {
        let mut a = Alphabet::new();
        for s in &self.segs {
            match s {
                Segment::Explicit(v) => {
                    for l in v {
                        a.insert(l.id());
                    }
                }
                Segment::Run(r) => a.insert_range(r.min_id(), r.max_id()),
            }
        }
        a
    }

    pub fn contains_gen(&self, id: u64) -> bool {
        self.segs.iter().any(|s| match s {
            Segment::Explicit(v) => v.iter().any(|l| l.id() == id),
            Segment::Run(r) => r.min_id() <= id && id <= r.max_id(),
        })
    }

    pub fn supported_in(&self, x: &Alphabet) -> bool {
        self.segs.iter().all(|s| match s {
            Segment::Explicit(v) => v.iter().all(|l| x.contains(l.id())),
            Segment::Run(r) => x.contains_range(r.min_id(), r.max_id()),
        })
    }

    pub fn max_id(&self) -> Option<u64> {
        self.letters().max_id()
    }

    /// `w = p * c * p⁻¹` with `c` cyclically reduced and `p` maximal.
    pub fn cyclic_decompose(&self) -> Result<(Word, Word), WordError> {
        if self.is_e() {
            return Err(WordError::EmptyWord);
        }
        let len = self.len();
        // For a reduced word the overlap is at most (len - 1) / 2.
        let p_len = self.junction_cancel(self).min((len - 1) / 2);
        let p = self.prefix(p_len);
        let c = self.slice(p_len, len - p_len);
        Ok((p, c))
    }

    /// `Some(k)` iff `self = c^k`.
    pub fn cyclic_member(&self, c: &Word) -> Result<Option<i64>, WordError> {
        if c.is_e() {
            return Err(WordError::EmptyGenerator);
        }
        if self.is_e() {
            return Ok(Some(0));
        }
        let (p, cc) = c.cyclic_decompose()?;
        let (lw, lp, lc) = (self.len(), p.len(), cc.len());
        if lw < 2 * lp + lc || (lw - 2 * lp) % lc != 0 {
            return Ok(None);
        }
        let m = (lw - 2 * lp) / lc;
        let Ok(m) = i64::try_from(m) else {
            return Ok(None);
        };
        // compare the shared prefix p first to avoid building large powers
        if self.prefix(lp) != p || self.suffix(lp) != p.inverse() {
            return Ok(None);
        }
        let core = self.slice(lp, lw - lp);
        if core == power_concat(&cc, m) {
            return Ok(Some(m));
        }
        if core == power_concat(&cc.inverse(), m) {
            return Ok(Some(-m));
        }
        Ok(None)
    }

    /// Materializes the letters when the word has at most `cap` of them.
    pub fn flatten(&self, cap: u128) -> Option<Vec<Letter>> {
        if self.len() > cap {
            return None;
        }
        let mut out = Vec::with_capacity(self.len() as usize);
        for s in &self.segs {
            let v = s.view();
            for t in 0..v.len() {
                out.push(v.letter(t));
            }
        }
        Some(out)
    }

    /// Shortlex comparison: by length, then letter by letter.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| lex_cmp(self, other))
    }
}

/// `c^m` for cyclically reduced `c` (so the pieces concatenate).
fn power_concat(c: &Word, m: i64) -> Word {
    let mut cn = Canon::default();
    for _ in 0..m {
        for s in &c.segs {
            match s.view() {
                View::Letters(ls) => {
                    for &x in ls {
                        cn.push_letter(x);
                    }
                }
                View::Run(r) => cn.push_run(r),
            }
        }
    }
    cn.finish()
}

fn lex_cmp(a: &Word, b: &Word) -> Ordering {
    let (mut i, mut oi, mut j, mut oj) = (0usize, 0u64, 0usize, 0u64);
    loop {
        match (i == a.segs.len(), j == b.segs.len()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let va = a.segs[i].view().drop_front(oi);
        let vb = b.segs[j].view().drop_front(oj);
        let step = match (va, vb) {
            (View::Run(ra), View::Run(rb))
                if ra.start == rb.start && ra.dir == rb.dir && ra.sign == rb.sign =>
            {
                ra.len.min(rb.len)
            }
            _ => {
                let o = va.letter(0).cmp(&vb.letter(0));
                if o != Ordering::Equal {
                    return o;
                }
                1
            }
        };
        oi += step;
        oj += step;
        if oi >= a.segs[i].len() {
            i += 1;
            oi = 0;
        }
        if oj >= b.segs[j].len() {
            j += 1;
            oj = 0;
        }
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shortlex_cmp(other)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::format_word(self))
    }
}

impl std::str::FromStr for Word {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        text::parse_word(s)
    }
}

#[cfg(test)]
mod tests;
